//! Dense complex linear algebra used throughout the crate.
//!
//! Everything here operates on desk-scale matrices (dimensions in the tens).
//! Eigenvalues and singular value decompositions are delegated to `faer`;
//! LU factorization, the complex symmetric Gram-Schmidt process and the
//! principal matrix logarithm (with nilpotent corrections) are implemented
//! here because their conventions are pinned by the rest of the crate.

use ndarray::{s, Array1, Array2};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub type C = Complex64;
pub type CMat = Array2<C>;
pub type CVec = Array1<C>;

pub const ONE: C = C::new(1.0, 0.0);
pub const ZERO: C = C::new(0.0, 0.0);

pub fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

pub fn eye(n: usize) -> CMat {
    Array2::from_shape_fn((n, n), |(i, j)| if i == j { ONE } else { ZERO })
}

pub fn zeros(rows: usize, cols: usize) -> CMat {
    Array2::from_elem((rows, cols), ZERO)
}

pub fn transpose(a: &CMat) -> CMat {
    a.t().to_owned()
}

pub fn conjugate_transpose(a: &CMat) -> CMat {
    a.t().mapv(|z| z.conj())
}

pub fn max_abs(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn frobenius(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Horizontal concatenation. Empty blocks (zero columns) are allowed.
pub fn hstack(blocks: &[&CMat]) -> CMat {
    let rows = blocks.iter().map(|b| b.nrows()).max().unwrap_or(0);
    let cols: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = zeros(rows, cols);
    let mut off = 0;
    for b in blocks {
        if b.ncols() == 0 {
            continue;
        }
        out.slice_mut(s![.., off..off + b.ncols()]).assign(b);
        off += b.ncols();
    }
    out
}

/// Block-diagonal assembly.
pub fn block_diag(blocks: &[&CMat]) -> CMat {
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let cols: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = zeros(rows, cols);
    let (mut r, mut cc) = (0, 0);
    for b in blocks {
        out.slice_mut(s![r..r + b.nrows(), cc..cc + b.ncols()]).assign(b);
        r += b.nrows();
        cc += b.ncols();
    }
    out
}

pub fn trace(a: &CMat) -> C {
    a.diag().sum()
}

/// Bilinear (not sesquilinear) pairing u^T G v.
pub fn bilinear(gram: &CMat, u: &CVec, v: &CVec) -> C {
    u.dot(&gram.dot(v))
}

// ---------------------------------------------------------------------------
// LU factorization: determinant, solve, inverse.
// ---------------------------------------------------------------------------

struct Lu {
    lu: CMat,
    perm: Vec<usize>,
    sign: f64,
    singular: bool,
}

fn lu_factor(a: &CMat) -> Lu {
    let n = a.nrows();
    let mut lu = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut sign = 1.0;
    let mut singular = false;
    for k in 0..n {
        let mut p = k;
        let mut best = lu[(k, k)].norm();
        for i in k + 1..n {
            let v = lu[(i, k)].norm();
            if v > best {
                best = v;
                p = i;
            }
        }
        if best == 0.0 {
            singular = true;
            continue;
        }
        if p != k {
            for j in 0..n {
                let t = lu[(k, j)];
                lu[(k, j)] = lu[(p, j)];
                lu[(p, j)] = t;
            }
            perm.swap(k, p);
            sign = -sign;
        }
        let piv = lu[(k, k)];
        for i in k + 1..n {
            let m = lu[(i, k)] / piv;
            lu[(i, k)] = m;
            for j in k + 1..n {
                let v = lu[(k, j)];
                lu[(i, j)] -= m * v;
            }
        }
    }
    Lu { lu, perm, sign, singular }
}

/// Determinant of a square complex matrix (0x0 determinant is 1).
pub fn det(a: &CMat) -> C {
    assert_eq!(a.nrows(), a.ncols());
    let n = a.nrows();
    if n == 0 {
        return ONE;
    }
    let f = lu_factor(a);
    if f.singular {
        return ZERO;
    }
    let mut d = c(f.sign, 0.0);
    for k in 0..n {
        d *= f.lu[(k, k)];
    }
    d
}

/// Solves A X = B for X, with A square.
pub fn solve(a: &CMat, b: &CMat) -> Result<CMat> {
    let n = a.nrows();
    assert_eq!(a.ncols(), n);
    assert_eq!(b.nrows(), n);
    if n == 0 {
        return Ok(zeros(0, b.ncols()));
    }
    let f = lu_factor(a);
    if f.singular {
        return Err(Error::InvalidArgument("singular matrix in solve".into()));
    }
    let m = b.ncols();
    let mut x = zeros(n, m);
    for col in 0..m {
        // forward substitution on permuted rhs
        let mut y = vec![ZERO; n];
        for i in 0..n {
            let mut acc = b[(f.perm[i], col)];
            for j in 0..i {
                acc -= f.lu[(i, j)] * y[j];
            }
            y[i] = acc;
        }
        for i in (0..n).rev() {
            let mut acc = y[i];
            for j in i + 1..n {
                acc -= f.lu[(i, j)] * x[(j, col)];
            }
            x[(i, col)] = acc / f.lu[(i, i)];
        }
    }
    Ok(x)
}

pub fn inverse(a: &CMat) -> Result<CMat> {
    solve(a, &eye(a.nrows()))
}

// ---------------------------------------------------------------------------
// faer-backed factorizations.
// ---------------------------------------------------------------------------

fn to_faer(a: &CMat) -> faer::Mat<C> {
    faer::Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)])
}

fn from_faer(a: faer::MatRef<'_, C>) -> CMat {
    Array2::from_shape_fn((a.nrows(), a.ncols()), |(i, j)| a[(i, j)])
}

pub struct Svd {
    pub u: CMat,
    pub sigma: Vec<f64>,
    /// Right singular vectors as columns; A = U diag(sigma) V^H.
    pub v: CMat,
}

pub fn svd(a: &CMat) -> Result<Svd> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Ok(Svd {
            u: eye(a.nrows()),
            sigma: vec![],
            v: eye(a.ncols()),
        });
    }
    let f = to_faer(a)
        .svd()
        .map_err(|e| Error::Spectral(format!("SVD did not converge: {e:?}")))?;
    let k = a.nrows().min(a.ncols());
    let sdiag = f.S();
    let sigma: Vec<f64> = (0..k).map(|i| sdiag[i].re).collect();
    Ok(Svd {
        u: from_faer(f.U()),
        sigma,
        v: from_faer(f.V()),
    })
}

/// Relative threshold below which singular values count as zero.
pub const RANK_REL_TOL: f64 = 1e-10;

/// Numerical rank with an explicit ill-conditioned guard: a singular value
/// within a factor 10 of the threshold on either side makes the rank decision
/// ambiguous and is reported as an error instead of silently resolved.
pub fn rank(a: &CMat, rel_tol: f64) -> Result<usize> {
    let sv = svd(a)?;
    let smax = sv.sigma.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return Ok(0);
    }
    let thr = rel_tol * smax;
    for &s in &sv.sigma {
        if s > thr / 10.0 && s < thr * 10.0 {
            return Err(Error::IllConditioned(format!(
                "singular value {s:.3e} straddles rank threshold {thr:.3e}"
            )));
        }
    }
    Ok(sv.sigma.iter().filter(|&&s| s > thr).count())
}

/// Orthonormal basis (columns) of the kernel of `a`.
pub fn nullspace(a: &CMat, rel_tol: f64) -> Result<CMat> {
    if a.nrows() == 0 {
        return Ok(eye(a.ncols()));
    }
    let sv = svd(a)?;
    let smax = sv.sigma.first().copied().unwrap_or(0.0);
    let thr = rel_tol * smax.max(1e-300);
    let r = sv.sigma.iter().filter(|&&s| s > thr).count();
    Ok(sv.v.slice(s![.., r..]).to_owned())
}

/// Orthonormal basis of the orthogonal complement of the kernel (row space).
pub fn kernel_complement(a: &CMat, rel_tol: f64) -> Result<CMat> {
    if a.nrows() == 0 {
        return Ok(zeros(a.ncols(), 0));
    }
    let sv = svd(a)?;
    let smax = sv.sigma.first().copied().unwrap_or(0.0);
    let thr = rel_tol * smax.max(1e-300);
    let r = sv.sigma.iter().filter(|&&s| s > thr).count();
    Ok(sv.v.slice(s![.., ..r]).to_owned())
}

pub fn eigenvalues(a: &CMat) -> Result<Vec<C>> {
    assert_eq!(a.nrows(), a.ncols());
    if a.nrows() == 0 {
        return Ok(vec![]);
    }
    let e = to_faer(a)
        .eigen()
        .map_err(|e| Error::Spectral(format!("eigendecomposition failed: {e:?}")))?;
    let sdiag = e.S();
    Ok((0..a.nrows()).map(|i| sdiag[i]).collect())
}

// ---------------------------------------------------------------------------
// Column-pivoted QR, used to pin a reproducible basis of a projector image.
// ---------------------------------------------------------------------------

/// Rank factorization of `a` by Householder QR with column pivoting.
/// Returns an orthonormal (Hermitian sense) basis of the column space whose
/// choice is deterministic in the input.
pub fn column_space_qr(a: &CMat, rel_tol: f64) -> CMat {
    let m = a.nrows();
    let n = a.ncols();
    let mut work = a.clone();
    let mut cols: Vec<usize> = (0..n).collect();
    let mut q = eye(m);
    let kmax = m.min(n);
    let norm0 = max_abs(a).max(1e-300);
    let mut r = 0;
    for k in 0..kmax {
        // pivot on largest remaining column norm
        let mut best = 0.0;
        let mut pj = k;
        for j in k..n {
            let nrm: f64 = (k..m).map(|i| work[(i, j)].norm_sqr()).sum::<f64>().sqrt();
            if nrm > best {
                best = nrm;
                pj = j;
            }
        }
        if best <= rel_tol * norm0 {
            break;
        }
        if pj != k {
            for i in 0..m {
                let t = work[(i, k)];
                work[(i, k)] = work[(i, pj)];
                work[(i, pj)] = t;
            }
            cols.swap(k, pj);
        }
        // Householder vector for column k
        let mut v: Vec<C> = (k..m).map(|i| work[(i, k)]).collect();
        let alpha = v[0];
        let nrm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let phase = if alpha.norm() > 0.0 { alpha / alpha.norm() } else { ONE };
        let beta = -phase * nrm;
        v[0] -= beta;
        let vn: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vn > 0.0 {
            for z in v.iter_mut() {
                *z /= vn;
            }
            // apply H = I - 2 v v^H to work (rows k..m) and accumulate into q
            for j in k..n {
                let dotp: C = (k..m).map(|i| v[i - k].conj() * work[(i, j)]).sum();
                for i in k..m {
                    work[(i, j)] -= 2.0 * v[i - k] * dotp;
                }
            }
            for j in 0..m {
                let dotp: C = (k..m).map(|i| v[i - k].conj() * q[(i, j)]).sum();
                for i in k..m {
                    q[(i, j)] -= 2.0 * v[i - k] * dotp;
                }
            }
        }
        r = k + 1;
    }
    // q holds the product of reflectors applied to the identity: Q^H.
    let qmat = conjugate_transpose(&q);
    qmat.slice(s![.., ..r]).to_owned()
}

// ---------------------------------------------------------------------------
// Complex symmetric Gram-Schmidt.
// ---------------------------------------------------------------------------

/// Builds Q with Q^T G Q = I for a nondegenerate complex symmetric `gram`.
///
/// Pivots with b(v,v) close to zero are isotropic; the process first tries the
/// remaining candidate vectors, then retries with seeded random rotations of
/// the candidate pool, and only then gives up.
pub fn symmetric_orthonormal_basis(gram: &CMat, seed: u64) -> Result<CMat> {
    let n = gram.nrows();
    if n == 0 {
        return Ok(eye(0));
    }
    let scale = max_abs(gram).max(1e-300);
    let attempt = |candidates: &CMat| -> Option<CMat> {
        let mut q = zeros(n, n);
        let mut used = vec![false; n];
        for k in 0..n {
            let mut placed = false;
            for cidx in 0..n {
                if used[cidx] {
                    continue;
                }
                let mut v: CVec = candidates.column(cidx).to_owned();
                for j in 0..k {
                    let qj: CVec = q.column(j).to_owned();
                    let coef = bilinear(gram, &qj, &v);
                    v = &v - &qj.mapv(|z| z * coef);
                }
                let bvv = bilinear(gram, &v, &v);
                let vnorm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                if bvv.norm() > 1e-12 * scale * vnorm.max(1e-300) * vnorm.max(1e-300) {
                    let root = bvv.sqrt();
                    q.column_mut(k).assign(&v.mapv(|z| z / root));
                    used[cidx] = true;
                    placed = true;
                    break;
                }
            }
            if !placed {
                return None;
            }
        }
        Some(q)
    };
    if let Some(q) = attempt(&eye(n)) {
        return Ok(q);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..8 {
        let rot = Array2::from_shape_fn((n, n), |_| {
            c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
        });
        // keep the candidate pool invertible
        let cand = &eye(n) + &rot.mapv(|z| z * c(0.5, 0.0));
        if det(&cand).norm() < 1e-8 {
            continue;
        }
        if let Some(q) = attempt(&cand) {
            return Ok(q);
        }
    }
    Err(Error::IsotropicPivot(format!(
        "no b-anisotropic pivot found in dimension {n} after seeded retries"
    )))
}

// ---------------------------------------------------------------------------
// Generalized eigenspaces and the principal matrix logarithm.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct Eigenspace {
    pub lambda: C,
    /// Columns span the generalized eigenspace (ambient coordinates).
    pub basis: CMat,
    /// Smallest k with (A - lambda)^k = 0 on the space.
    pub order: usize,
    /// True when nearby numerical eigenvalues were merged into this cluster.
    pub merged: bool,
}

/// Relative clustering radius for numerically coincident eigenvalues.
pub const EIG_CLUSTER_REL_TOL: f64 = 1e-8;

/// Splits the spectrum of `a` into clusters and returns a basis of each
/// generalized eigenspace, obtained as the kernel of (A - lambda)^k with k
/// grown until the kernel dimension matches the cluster multiplicity.
pub fn generalized_eigenspaces(a: &CMat) -> Result<Vec<Eigenspace>> {
    let n = a.nrows();
    if n == 0 {
        return Ok(vec![]);
    }
    let mut eigs = eigenvalues(a)?;
    eigs.sort_by(|x, y| {
        (x.re, x.im)
            .partial_cmp(&(y.re, y.im))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let radius = eigs.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
    let ctol = EIG_CLUSTER_REL_TOL * radius;
    // single-linkage clustering on the sorted list
    let mut clusters: Vec<Vec<C>> = vec![];
    for e in eigs {
        match clusters.last_mut() {
            Some(cl) if cl.iter().any(|z| (*z - e).norm() <= ctol) => cl.push(e),
            _ => clusters.push(vec![e]),
        }
    }
    // merge any remaining close pairs (non-adjacent in sort order)
    let mut merged_any = true;
    while merged_any {
        merged_any = false;
        'outer: for i in 0..clusters.len() {
            for j in i + 1..clusters.len() {
                let close = clusters[i]
                    .iter()
                    .any(|z| clusters[j].iter().any(|w| (*z - *w).norm() <= ctol));
                if close {
                    let cj = clusters.remove(j);
                    clusters[i].extend(cj);
                    merged_any = true;
                    break 'outer;
                }
            }
        }
    }
    let mut out = vec![];
    for cl in clusters {
        let m = cl.len();
        let lambda = cl.iter().sum::<C>() / c(m as f64, 0.0);
        let merged = cl.iter().any(|z| (*z - cl[0]).norm() > 1e-13 * radius);
        let shifted = a - &eye(n).mapv(|z| z * lambda);
        let mut power = eye(n);
        let mut found = None;
        for k in 1..=m {
            power = power.dot(&shifted);
            // kernel directions are judged against the spectral scale of the
            // original matrix: on the eigenspace, (A - lambda)^k shrinks
            // below (ctol * radius)^k, while every other direction keeps a
            // factor of the eigenvalue gap per power. The power's own norm
            // is the wrong yardstick when the whole block is one eigenspace.
            let thresh = (EIG_CLUSTER_REL_TOL * radius).powi(k as i32);
            let sv = svd(&power)?;
            let null_count = n - sv.sigma.iter().filter(|&&s| s > thresh).count();
            let ns = sv.v.slice(s![.., n - null_count..]).to_owned();
            if ns.ncols() == m {
                found = Some((ns, k));
                break;
            }
            if ns.ncols() > m {
                return Err(Error::Spectral(format!(
                    "kernel of (A - {lambda})^{k} has dimension {} > cluster multiplicity {m}; \
                     eigenvalue clusters are irreconcilable",
                    ns.ncols()
                )));
            }
        }
        let (basis, order) = found.ok_or_else(|| {
            Error::Spectral(format!(
                "generalized eigenspace of {lambda} did not reach multiplicity {m}"
            ))
        })?;
        out.push(Eigenspace { lambda, basis, order, merged });
    }
    let total: usize = out.iter().map(|e| e.basis.ncols()).sum();
    if total != n {
        return Err(Error::Spectral(format!(
            "generalized eigenspaces sum to dimension {total}, expected {n}"
        )));
    }
    Ok(out)
}

fn on_log_cut(lambda: C, scale: f64) -> bool {
    lambda.norm() <= 1e-12 * scale
        || (lambda.re <= 0.0 && lambda.im.abs() <= 1e-12 * scale.max(lambda.re.abs()))
}

/// Principal matrix logarithm through the generalized eigenspace
/// decomposition: log(lambda + N) = log(lambda) + log(1 + N/lambda) with the
/// nilpotent series cut at the nilpotency order. Eigenvalues on the closed
/// negative real axis (or at zero) are rejected.
pub fn matrix_log_principal(a: &CMat) -> Result<CMat> {
    let n = a.nrows();
    if n == 0 {
        return Ok(eye(0));
    }
    let spaces = generalized_eigenspaces(a)?;
    let scale = spaces.iter().map(|e| e.lambda.norm()).fold(0.0, f64::max).max(1.0);
    let p = hstack(&spaces.iter().map(|e| &e.basis).collect::<Vec<_>>());
    let ap = solve(&p, &a.dot(&p))?; // block diagonal in the eigenspace basis
    let mut logblocks: Vec<CMat> = vec![];
    let mut off = 0;
    for sp in &spaces {
        if on_log_cut(sp.lambda, scale) {
            return Err(Error::LogBranch(format!(
                "eigenvalue {} lies on the principal branch cut",
                sp.lambda
            )));
        }
        let m = sp.basis.ncols();
        let block = ap.slice(s![off..off + m, off..off + m]).to_owned();
        let nilp = &block - &eye(m).mapv(|z| z * sp.lambda);
        let x = nilp.mapv(|z| z / sp.lambda);
        // log(1+x) truncated at the nilpotency order
        let mut logb = eye(m).mapv(|z| z * sp.lambda.ln());
        let mut xpow = eye(m);
        for k in 1..=sp.order.max(1) {
            xpow = xpow.dot(&x);
            let coef = if k % 2 == 1 { 1.0 } else { -1.0 } / k as f64;
            logb = &logb + &xpow.mapv(|z| z * c(coef, 0.0));
        }
        logblocks.push(logb);
        off += m;
    }
    let logd = block_diag(&logblocks.iter().collect::<Vec<_>>());
    // log A = (P logd) P^{-1}, via P^T X^T = (P logd)^T
    let pl = p.dot(&logd);
    let xt = solve(&transpose(&p), &transpose(&pl))?;
    Ok(transpose(&xt))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cm(rows: usize, cols: usize, data: &[(f64, f64)]) -> CMat {
        Array2::from_shape_vec((rows, cols), data.iter().map(|&(r, i)| c(r, i)).collect())
            .unwrap()
    }

    #[test]
    fn det_and_solve_roundtrip() {
        let a = cm(2, 2, &[(1.0, 1.0), (2.0, 0.0), (0.0, -1.0), (3.0, 0.5)]);
        let d = det(&a);
        // det = (1+i)(3+0.5i) - 2(-i) = 2.5 + 5.5i
        assert!((d - c(2.5, 5.5)).norm() < 1e-12);
        let b = eye(2);
        let x = solve(&a, &b).unwrap();
        assert!(max_abs(&(&a.dot(&x) - &eye(2))) < 1e-12);
    }

    #[test]
    fn det_empty_is_one() {
        assert_eq!(det(&zeros(0, 0)), ONE);
    }

    #[test]
    fn svd_rank_nullspace() {
        let a = cm(2, 3, &[(1.0, 0.0), (0.0, 0.0), (1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (0.0, 0.0)]);
        assert_eq!(rank(&a, RANK_REL_TOL).unwrap(), 1);
        let ns = nullspace(&a, RANK_REL_TOL).unwrap();
        assert_eq!(ns.ncols(), 2);
        assert!(max_abs(&a.dot(&ns)) < 1e-12);
        let kc = kernel_complement(&a, RANK_REL_TOL).unwrap();
        assert_eq!(kc.ncols(), 1);
    }

    #[test]
    fn ill_conditioned_rank_reported() {
        let mut a = eye(2);
        a[(1, 1)] = c(1e-10, 0.0);
        assert!(matches!(rank(&a, RANK_REL_TOL), Err(Error::IllConditioned(_))));
    }

    #[test]
    fn column_space_qr_projector() {
        // projector onto span(1,1)/2
        let p = cm(2, 2, &[(0.5, 0.0), (0.5, 0.0), (0.5, 0.0), (0.5, 0.0)]);
        let b = column_space_qr(&p, 1e-10);
        assert_eq!(b.ncols(), 1);
        let ratio = b[(0, 0)] / b[(1, 0)];
        assert!((ratio - ONE).norm() < 1e-12);
    }

    #[test]
    fn symmetric_gs_orthonormalizes() {
        let g = cm(2, 2, &[(2.0, 1.0), (0.5, 0.0), (0.5, 0.0), (1.0, -0.3)]);
        let gsym = (&g + &transpose(&g)).mapv(|z| z * c(0.5, 0.0));
        let q = symmetric_orthonormal_basis(&gsym, 7).unwrap();
        let res = transpose(&q).dot(&gsym).dot(&q);
        assert!(max_abs(&(&res - &eye(2))) < 1e-10);
    }

    #[test]
    fn symmetric_gs_isotropic_pivot_recovers() {
        // b(e0,e0) = 0 forces a pivot reorder; the form is nondegenerate.
        let g = cm(2, 2, &[(0.0, 0.0), (1.0, 0.0), (1.0, 0.0), (1.0, 0.0)]);
        let q = symmetric_orthonormal_basis(&g, 3).unwrap();
        let res = transpose(&q).dot(&g).dot(&q);
        assert!(max_abs(&(&res - &eye(2))) < 1e-10);
    }

    #[test]
    fn generalized_eigenspaces_jordan_block() {
        let a = cm(2, 2, &[(1.0, 0.0), (1.0, 0.0), (0.0, 0.0), (1.0, 0.0)]);
        let sp = generalized_eigenspaces(&a).unwrap();
        assert_eq!(sp.len(), 1);
        assert!((sp[0].lambda - ONE).norm() < 1e-10);
        assert_eq!(sp[0].order, 2);
        assert_eq!(sp[0].basis.ncols(), 2);
    }

    #[test]
    fn generalized_eigenspaces_diagonal() {
        let a = cm(2, 2, &[(2.0, 0.0), (0.0, 0.0), (0.0, 0.0), (3.0, 0.0)]);
        let sp = generalized_eigenspaces(&a).unwrap();
        assert_eq!(sp.len(), 2);
        assert!(sp.iter().all(|e| e.order == 1));
    }

    #[test]
    fn matrix_log_unipotent_traceless() {
        let a = cm(2, 2, &[(1.0, 0.0), (1.0, 0.0), (0.0, 0.0), (1.0, 0.0)]);
        let l = matrix_log_principal(&a).unwrap();
        assert!(trace(&l).norm() < 1e-10);
        // exp(log A) = A for the 2x2 case: exp(N) = I + N since N^2 = 0
        assert!((l[(0, 1)] - ONE).norm() < 1e-10);
    }

    #[test]
    fn matrix_log_rejects_cut() {
        let a = cm(1, 1, &[(-2.0, 0.0)]);
        assert!(matches!(matrix_log_principal(&a), Err(Error::LogBranch(_))));
    }

    #[test]
    fn matrix_log_matches_scalar() {
        let a = cm(1, 1, &[(0.0, 2.0)]);
        let l = matrix_log_principal(&a).unwrap();
        let expected = c(0.0, 2.0).ln();
        assert!((l[(0, 0)] - expected).norm() < 1e-12);
    }
}

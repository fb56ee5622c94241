//! The bilinear Laplacian, its generalized eigenspaces, g-weighted
//! regularized determinants and the spectral-cutoff torsion. This pipeline is
//! algorithmically independent of the canonical-isomorphism route in
//! `torsion` and serves as its oracle (and vice versa).

use ndarray::s;

use crate::cochain::{
    cohomology_basis, isotypical_class_subcomplex, self_dual_classes, BilinearComplex,
    CohomologyBasis,
};
use crate::error::{Error, Result};
use crate::linalg::{
    self, c, eye, hstack, inverse, matrix_log_principal, max_abs, solve, trace, transpose,
    zeros, CMat, C, Eigenspace,
};
use crate::torsion::{torsion_form_value, TorsionCharacter, TorsionEntry};

/// Formal adjoint of d_i against the bilinear forms:
/// d*_b = gram_i^{-1} d_i^T gram_{i+1}, mapping degree i+1 back to degree i.
pub fn bilinear_adjoint(complex: &BilinearComplex, i: usize) -> Result<CMat> {
    if i + 1 >= complex.degrees() {
        return Err(Error::InvalidArgument(format!(
            "no differential out of degree {i}"
        )));
    }
    let ginv = inverse(&complex.gram[i])?;
    Ok(ginv.dot(&transpose(&complex.d[i])).dot(&complex.gram[i + 1]))
}

/// Graded bilinear Laplacian d*_b d + d d*_b, one matrix per degree.
pub fn bilinear_laplacian(complex: &BilinearComplex) -> Result<Vec<CMat>> {
    let n = complex.degrees();
    let mut adj = vec![];
    for i in 0..n.saturating_sub(1) {
        adj.push(bilinear_adjoint(complex, i)?);
    }
    let mut laps = vec![];
    for i in 0..n {
        let mut lap = zeros(complex.dims[i], complex.dims[i]);
        if i + 1 < n {
            lap = &lap + &adj[i].dot(&complex.d[i]);
        }
        if i > 0 {
            lap = &lap + &complex.d[i - 1].dot(&adj[i - 1]);
        }
        laps.push(lap);
    }
    Ok(laps)
}

/// Generalized eigenspaces of the Laplacian, one list per degree.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub per_degree: Vec<Vec<Eigenspace>>,
}

impl SpectralDecomposition {
    pub fn eigenvalues(&self) -> Vec<C> {
        self.per_degree
            .iter()
            .flat_map(|spaces| spaces.iter().map(|s| s.lambda))
            .collect()
    }
}

pub fn generalized_eigenspaces(complex: &BilinearComplex) -> Result<SpectralDecomposition> {
    let laps = bilinear_laplacian(complex)?;
    let per_degree = laps
        .iter()
        .map(linalg::generalized_eigenspaces)
        .collect::<Result<Vec<_>>>()?;
    for (i, spaces) in per_degree.iter().enumerate() {
        let total: usize = spaces.iter().map(|s| s.basis.ncols()).sum();
        if total != complex.dims[i] {
            return Err(Error::Spectral(format!(
                "degree {i}: eigenspace dimensions sum to {total}, expected {}",
                complex.dims[i]
            )));
        }
    }
    Ok(SpectralDecomposition { per_degree })
}

/// Residual checks for the decomposition: (A - lambda)^order vanishes on each
/// space and distinct-eigenvalue spaces are b-orthogonal. Returns the largest
/// residuals (nilpotency, b-orthogonality).
pub fn decomposition_residuals(
    complex: &BilinearComplex,
    sd: &SpectralDecomposition,
) -> Result<(f64, f64)> {
    let laps = bilinear_laplacian(complex)?;
    let mut nil_res: f64 = 0.0;
    let mut orth_res: f64 = 0.0;
    for (i, spaces) in sd.per_degree.iter().enumerate() {
        let lap = &laps[i];
        let scale = max_abs(lap).max(1.0);
        for sp in spaces {
            let shifted = lap - &eye(lap.nrows()).mapv(|z| z * sp.lambda);
            let mut m = sp.basis.clone();
            for _ in 0..sp.order {
                m = shifted.dot(&m);
            }
            nil_res = nil_res.max(max_abs(&m) / scale.powi(sp.order as i32));
        }
        for a in 0..spaces.len() {
            for b in a + 1..spaces.len() {
                let pair = transpose(&spaces[a].basis)
                    .dot(&complex.gram[i])
                    .dot(&spaces[b].basis);
                orth_res = orth_res.max(max_abs(&pair) / max_abs(&complex.gram[i]).max(1.0));
            }
        }
    }
    Ok((nil_res, orth_res))
}

/// Residual of d-invariance: d maps each |lambda|-part into the matching part
/// of the next degree. Computed by expressing d(basis) in the next degree's
/// eigenbasis and measuring leakage into spaces with different eigenvalues.
pub fn d_invariance_residual(
    complex: &BilinearComplex,
    sd: &SpectralDecomposition,
) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for i in 0..complex.degrees().saturating_sub(1) {
        let next = &sd.per_degree[i + 1];
        if complex.dims[i + 1] == 0 || complex.dims[i] == 0 {
            continue;
        }
        let p = hstack(&next.iter().map(|sp| &sp.basis).collect::<Vec<_>>());
        let coords = solve(&p, &complex.d[i])?;
        let dscale = max_abs(&complex.d[i]).max(1.0);
        let mut off = 0;
        for spn in next {
            let m = spn.basis.ncols();
            let rows = coords.slice(s![off..off + m, ..]).to_owned();
            // columns of d restricted to source spaces with a different eigenvalue
            let mut col_off = 0;
            for sps in &sd.per_degree[i] {
                let k = sps.basis.ncols();
                if (sps.lambda - spn.lambda).norm() > 1e-6 * (1.0 + sps.lambda.norm()) {
                    let block = rows
                        .dot(&sps.basis)
                        .slice(s![.., ..])
                        .to_owned();
                    worst = worst.max(max_abs(&block) / dscale);
                }
                col_off += k;
            }
            let _ = col_off;
            off += m;
        }
    }
    Ok(worst)
}

/// The cutoff split: bases of Omega_{[0,a]} and its complement per degree.
#[derive(Debug, Clone)]
pub struct CutoffSplit {
    pub cutoff: f64,
    pub omega: Vec<CMat>,
    pub complement: Vec<CMat>,
    /// Eigenvalues retained in the complement per degree.
    pub complement_spectrum: Vec<Vec<C>>,
}

pub const CUTOFF_REL_TOL: f64 = 1e-8;

pub fn spectral_cutoff(
    complex: &BilinearComplex,
    sd: &SpectralDecomposition,
    a: f64,
) -> Result<CutoffSplit> {
    if a < 0.0 {
        return Err(Error::InvalidArgument("cutoff must be nonnegative".into()));
    }
    for lambda in sd.eigenvalues() {
        let dist = (lambda.norm() - a).abs();
        if dist <= CUTOFF_REL_TOL * lambda.norm().max(1.0) {
            return Err(Error::CutoffCollision(format!(
                "cutoff {a} is within tolerance of |{lambda}|; choose a different a"
            )));
        }
    }
    let mut omega = vec![];
    let mut complement = vec![];
    let mut complement_spectrum = vec![];
    for (i, spaces) in sd.per_degree.iter().enumerate() {
        let kept: Vec<&CMat> = spaces
            .iter()
            .filter(|s| s.lambda.norm() <= a)
            .map(|s| &s.basis)
            .collect();
        let dropped: Vec<&CMat> = spaces
            .iter()
            .filter(|s| s.lambda.norm() > a)
            .map(|s| &s.basis)
            .collect();
        let dim = complex.dims[i];
        omega.push(if kept.is_empty() {
            zeros(dim, 0)
        } else {
            hstack(&kept)
        });
        complement.push(if dropped.is_empty() {
            zeros(dim, 0)
        } else {
            hstack(&dropped)
        });
        complement_spectrum.push(
            spaces
                .iter()
                .filter(|s| s.lambda.norm() > a)
                .map(|s| s.lambda)
                .collect(),
        );
    }
    Ok(CutoffSplit { cutoff: a, omega, complement, complement_spectrum })
}

/// exp(Tr[g log A]) with the principal branch taken on each generalized
/// eigenspace of A. With g = I this is the finite-dimensional evaluation of
/// the zeta-regularized determinant.
pub fn det_prime_g(a: &CMat, g: &CMat) -> Result<C> {
    if a.nrows() == 0 {
        return Ok(c(1.0, 0.0));
    }
    let commute = max_abs(&(&g.dot(a) - &a.dot(g)));
    let scale = max_abs(a).max(1.0) * max_abs(g).max(1.0);
    if commute > 1e-9 * scale {
        return Err(Error::Spectral(format!(
            "g does not commute with the restricted Laplacian (residual {commute:.3e})"
        )));
    }
    let loga = matrix_log_principal(a)?;
    Ok(trace(&g.dot(&loga)).exp())
}

/// The spectral-cutoff torsion of a (possibly non-equivariant) complex:
/// torsion of the Omega_{[0,a]} subcomplex with `h` transported by the
/// spectral projector, times the alternating i-weighted regularized
/// determinants of the complement.
pub fn rs_value(complex: &BilinearComplex, a: f64, h: &CohomologyBasis) -> Result<C> {
    let n = complex.degrees();
    let laps = bilinear_laplacian(complex)?;
    let sd = generalized_eigenspaces(complex)?;
    let split = spectral_cutoff(complex, &sd, a)?;
    // assemble transition matrices P_i = [omega | complement]
    let mut sub_d = vec![];
    let mut sub_gram = vec![];
    let mut sub_h = vec![];
    let mut p_all = vec![];
    for i in 0..n {
        p_all.push(hstack(&[&split.omega[i], &split.complement[i]]));
    }
    for i in 0..n {
        let omega_dim = split.omega[i].ncols();
        let dim = complex.dims[i];
        // restricted gram
        let g = transpose(&split.omega[i])
            .dot(&complex.gram[i])
            .dot(&split.omega[i]);
        sub_gram.push(g);
        // transported cohomology representatives: Omega-coordinates of the
        // projection along the complement
        let hr = &h.representatives[i];
        if dim == 0 || hr.ncols() == 0 {
            sub_h.push(zeros(omega_dim, 0));
        } else {
            let coords = solve(&p_all[i], hr)?;
            let top = coords.slice(s![..omega_dim, ..]).to_owned();
            if omega_dim > 0 && hr.ncols() > 0 {
                let r = linalg::rank(&top, 1e-9).unwrap_or(0);
                if r < hr.ncols() {
                    return Err(Error::Spectral(format!(
                        "degree {i}: projected cohomology representatives lose rank \
                         ({r} of {})",
                        hr.ncols()
                    )));
                }
            }
            sub_h.push(top);
        }
    }
    for i in 0..n.saturating_sub(1) {
        let omega_dim = split.omega[i + 1].ncols();
        if complex.dims[i + 1] == 0 {
            sub_d.push(zeros(0, split.omega[i].ncols()));
            continue;
        }
        let image = complex.d[i].dot(&split.omega[i]);
        let coords = solve(&p_all[i + 1], &image)?;
        let mut top = coords.slice(s![..omega_dim, ..]).to_owned();
        // when the cutoff keeps only the zero cluster, the restricted
        // differential is roundoff noise; flush it so downstream rank
        // decisions see the exact zero map instead of a full-rank speck
        if max_abs(&top) <= 1e-9 * max_abs(&complex.d[i]).max(1.0) {
            top.fill(crate::linalg::c(0.0, 0.0));
        }
        let leak = coords.slice(s![omega_dim.., ..]).to_owned();
        if max_abs(&leak) > 1e-7 * max_abs(&complex.d[i]).max(1.0) {
            return Err(Error::Spectral(format!(
                "degree {i}: differential leaks across the cutoff (residual {:.3e})",
                max_abs(&leak)
            )));
        }
        sub_d.push(top);
    }
    let sub = BilinearComplex {
        dims: split.omega.iter().map(|o| o.ncols()).collect(),
        d: sub_d,
        gram: sub_gram,
        action: None,
    };
    let sub_basis = CohomologyBasis {
        representatives: sub_h,
        betti: h.betti.clone(),
    };
    let mut value = torsion_form_value(&sub, &sub_basis)?;
    // complement contribution: prod_i det'(A_i)^{(-1)^i i}
    for i in 0..n {
        let k = split.complement[i].ncols();
        if k == 0 || i == 0 {
            continue;
        }
        let restricted = solve(&p_all[i], &laps[i].dot(&split.complement[i]))?;
        let omega_dim = split.omega[i].ncols();
        let block = restricted.slice(s![omega_dim.., ..]).to_owned();
        let dp = det_prime_g(&block, &eye(k))?;
        let exponent = if i % 2 == 0 { i as i32 } else { -(i as i32) };
        value *= dp.powi(exponent);
    }
    Ok(value)
}

/// Equivariant spectral-cutoff torsion: one entry per self-dual class of
/// irreducibles, computed on the class subcomplexes. Without an action, a
/// single entry for the full complex.
pub fn rs_torsion(
    complex: &BilinearComplex,
    a: f64,
    h_per_class: Option<&[CohomologyBasis]>,
) -> Result<TorsionCharacter> {
    match &complex.action {
        Some(action) => {
            let classes = self_dual_classes(&action.characters)?;
            let mut entries = vec![];
            for (k, class) in classes.iter().enumerate() {
                let members: Vec<&crate::groups::Irrep> =
                    class.iter().map(|&j| &action.characters.irreps[j]).collect();
                let sub = isotypical_class_subcomplex(complex, &members)?;
                let h = match h_per_class {
                    Some(hs) => hs[k].clone(),
                    None => cohomology_basis(&sub)?,
                };
                entries.push(TorsionEntry {
                    irreps: members.iter().map(|w| w.name.clone()).collect(),
                    value: rs_value(&sub, a, &h)?,
                });
            }
            Ok(TorsionCharacter { entries })
        }
        None => {
            let h = match h_per_class {
                Some(hs) => hs[0].clone(),
                None => cohomology_basis(complex)?,
            };
            Ok(TorsionCharacter {
                entries: vec![TorsionEntry {
                    irreps: vec!["full".into()],
                    value: rs_value(complex, a, &h)?,
                }],
            })
        }
    }
}

/// Picks cutoffs that avoid the spectrum: below everything nonzero, and at
/// the geometric midpoints between consecutive distinct magnitudes.
pub fn valid_cutoffs(sd: &SpectralDecomposition, count: usize) -> Vec<f64> {
    let mut mags: Vec<f64> = sd
        .eigenvalues()
        .iter()
        .map(|z| z.norm())
        .filter(|&m| m > 1e-7)
        .collect();
    mags.sort_by(|a, b| a.partial_cmp(b).unwrap());
    mags.dedup_by(|a, b| (*a - *b).abs() < 1e-7 * a.max(*b).max(1.0));
    let mut cuts = vec![];
    if let Some(&first) = mags.first() {
        cuts.push(first / 2.0);
    } else {
        cuts.push(0.5);
    }
    for w in mags.windows(2) {
        if cuts.len() >= count {
            break;
        }
        cuts.push((w[0] * w[1]).sqrt());
    }
    if let Some(&last) = mags.last() {
        while cuts.len() < count {
            cuts.push(last * 2.0 * cuts.len() as f64);
        }
    } else {
        while cuts.len() < count {
            cuts.push(cuts.len() as f64 + 0.5);
        }
    }
    cuts.truncate(count);
    cuts
}

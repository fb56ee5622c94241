//! Torsion bilinear forms on determinant lines via the canonical
//! isomorphism det C = det H(C), the per-irrep formal product, and the
//! combinatorial anomaly ratio under change of fiber forms.
//!
//! Convention: det C uses increasing degree order with exponents (-1)^i per
//! degree; within a degree the concatenated basis is ordered
//! [image of d, cohomology lift, coimage]. All outputs are (x,x)-evaluations
//! of bilinear forms, so square-root branch choices cancel.

use crate::cochain::{
    cohomology_basis, isotypical_class_subcomplex, self_dual_classes, BilinearComplex,
    CohomologyBasis,
};
use crate::error::{Error, Result};
use crate::groups::{CharacterTable, Irrep};
use crate::linalg::{
    self, c, det, hstack, kernel_complement, matrix_log_principal, max_abs, rank, solve,
    symmetric_orthonormal_basis, trace, zeros, CMat, C, RANK_REL_TOL,
};

/// Seed used for pivot-reorder retries in the symmetric Gram-Schmidt step;
/// fixed so repeated runs produce identical values.
const PIVOT_SEED: u64 = 0x7065_7261;

/// Value of the bilinear form on det H(C) at the generator built from `h`,
/// transferred from det C through the canonical isomorphism.
pub fn torsion_form_value(complex: &BilinearComplex, h: &CohomologyBasis) -> Result<C> {
    let n = complex.degrees();
    if h.representatives.len() != n {
        return Err(Error::CohomologyBasis(format!(
            "{} representative blocks for {n} degrees",
            h.representatives.len()
        )));
    }
    // coimage bases: a complement of ker d_i, mapped isomorphically by d_i
    let mut coimage = vec![];
    let mut ranks = vec![];
    for i in 0..n {
        let d = complex.diff(i);
        if d.nrows() == 0 || max_abs(&d) == 0.0 {
            coimage.push(zeros(complex.dims[i], 0));
            ranks.push(0);
        } else {
            let s = kernel_complement(&d, RANK_REL_TOL)?;
            ranks.push(s.ncols());
            coimage.push(s);
        }
    }
    let mut value = c(1.0, 0.0);
    for i in 0..n {
        let dim = complex.dims[i];
        let rin = if i == 0 { 0 } else { ranks[i - 1] };
        let beta = h.representatives[i].ncols();
        if rin + beta + ranks[i] != dim {
            return Err(Error::CohomologyBasis(format!(
                "degree {i}: image {rin} + classes {beta} + coimage {} do not fill dimension {dim}",
                ranks[i]
            )));
        }
        if h.representatives[i].nrows() != dim {
            return Err(Error::CohomologyBasis(format!(
                "degree {i}: representatives have {} rows, expected {dim}",
                h.representatives[i].nrows()
            )));
        }
        let d = complex.diff(i);
        if beta > 0 && d.nrows() > 0 {
            let resid = max_abs(&d.dot(&h.representatives[i]));
            if resid > 1e-9 * max_abs(&d).max(1.0) {
                return Err(Error::CohomologyBasis(format!(
                    "degree {i}: representatives leave ker d (residual {resid:.3e})"
                )));
            }
        }
        let image = if i == 0 {
            zeros(dim, 0)
        } else {
            complex.d[i - 1].dot(&coimage[i - 1])
        };
        let basis = hstack(&[&image, &h.representatives[i], &coimage[i]]);
        if dim == 0 {
            continue;
        }
        // independence of image/classes/coimage, judged on the basis itself
        // so that extreme gram scalings cannot masquerade as degeneracy
        let sv = crate::linalg::svd(&basis)?;
        let smax = sv.sigma.first().copied().unwrap_or(0.0);
        let smin = sv.sigma.last().copied().unwrap_or(0.0);
        if smin <= 1e-10 * smax.max(1e-300) {
            return Err(Error::CohomologyBasis(format!(
                "degree {i}: concatenated basis is singular; classes are not independent"
            )));
        }
        let q = symmetric_orthonormal_basis(&complex.gram[i], PIVOT_SEED ^ i as u64)?;
        let m = solve(&q, &basis)?;
        let dm = det(&m);
        let factor = dm * dm;
        if i % 2 == 0 {
            value *= factor;
        } else {
            value /= factor;
        }
    }
    Ok(value)
}

/// Independent route for the same quantity: product over degrees of
/// det(B^T G B)^{(-1)^i} on the concatenated bases. Used as a cross-check
/// oracle in tests; kept in the library so the CLI selftest can exercise it.
pub fn torsion_form_value_gram_route(
    complex: &BilinearComplex,
    h: &CohomologyBasis,
) -> Result<C> {
    let n = complex.degrees();
    let mut coimage = vec![];
    let mut ranks = vec![];
    for i in 0..n {
        let d = complex.diff(i);
        if d.nrows() == 0 || max_abs(&d) == 0.0 {
            coimage.push(zeros(complex.dims[i], 0));
            ranks.push(0);
        } else {
            let s = kernel_complement(&d, RANK_REL_TOL)?;
            ranks.push(s.ncols());
            coimage.push(s);
        }
    }
    let mut value = c(1.0, 0.0);
    for i in 0..n {
        let dim = complex.dims[i];
        if dim == 0 {
            continue;
        }
        let image = if i == 0 {
            zeros(dim, 0)
        } else {
            complex.d[i - 1].dot(&coimage[i - 1])
        };
        let basis = hstack(&[&image, &h.representatives[i], &coimage[i]]);
        let gramed = linalg::transpose(&basis)
            .dot(&complex.gram[i])
            .dot(&basis);
        let dg = det(&gramed);
        if i % 2 == 0 {
            value *= dg;
        } else {
            value /= dg;
        }
    }
    Ok(value)
}

/// One factor of the formal product: the torsion value of the subcomplex cut
/// out by a self-dual class of irreducibles. Real-character irreps stand
/// alone; a conjugate pair {W, W*} contributes a single joint value, since
/// the bilinear form pairs C_W with C_{W*} and vanishes on each separately.
#[derive(Debug, Clone)]
pub struct TorsionEntry {
    pub irreps: Vec<String>,
    pub value: C,
}

/// The formal product of torsion values over self-dual classes.
#[derive(Debug, Clone)]
pub struct TorsionCharacter {
    pub entries: Vec<TorsionEntry>,
}

/// Result of evaluating the formal product at a group element; evaluation at
/// non-identity elements can pick up 2*pi*i ambiguities in the exponents,
/// recorded as warnings.
#[derive(Debug, Clone)]
pub struct CharacterEvaluation {
    pub value: C,
    pub warnings: Vec<String>,
}

impl TorsionCharacter {
    /// Product of all class values; equals the evaluation at the identity.
    pub fn identity_value(&self) -> C {
        self.entries.iter().map(|e| e.value).product()
    }

    /// Evaluates prod value^(sum chi_W(g) / sum deg W) over the classes with
    /// principal-branch powers. For a singleton this is chi_W(g)/deg W; for a
    /// conjugate pair the joint value carries (chi_W + chi_W*)(g)/(2 deg W).
    pub fn evaluate(&self, table: &CharacterTable, g: usize) -> Result<CharacterEvaluation> {
        let total: usize = self.entries.iter().map(|e| e.irreps.len()).sum();
        if total != table.irreps.len() {
            return Err(Error::Characters(format!(
                "{total} torsion entry irreps for {} table irreps",
                table.irreps.len()
            )));
        }
        let mut value = c(1.0, 0.0);
        let mut warnings = vec![];
        for entry in &self.entries {
            let mut chi = c(0.0, 0.0);
            let mut deg = 0usize;
            for name in &entry.irreps {
                let w = table
                    .irreps
                    .iter()
                    .find(|w| &w.name == name)
                    .ok_or_else(|| {
                        Error::Characters(format!("entry irrep {name} is not in the table"))
                    })?;
                chi += w.values[g];
                deg += w.degree;
            }
            let exponent = chi / c(deg as f64, 0.0);
            let v = entry.value;
            let integral = exponent.im.abs() < 1e-12
                && (exponent.re - exponent.re.round()).abs() < 1e-12;
            if !integral && v.re < 0.0 && v.im.abs() <= 1e-12 * v.re.abs() {
                warnings.push(format!(
                    "entry {}: value {v} on the negative real axis with non-integer \
                     exponent {exponent}; principal branch used",
                    entry.irreps.join("+")
                ));
            }
            value *= (exponent * v.ln()).exp();
        }
        Ok(CharacterEvaluation { value, warnings })
    }
}

/// Equivariant torsion: one torsion value per self-dual class of
/// irreducibles, computed on the class subcomplexes. When `h_per_class` is
/// absent, cohomology bases are computed on each subcomplex.
pub fn equivariant_torsion(
    complex: &BilinearComplex,
    h_per_class: Option<&[CohomologyBasis]>,
) -> Result<TorsionCharacter> {
    let action = complex
        .action
        .as_ref()
        .ok_or_else(|| Error::Complex("equivariant torsion needs a validated action".into()))?;
    let classes = self_dual_classes(&action.characters)?;
    if let Some(hs) = h_per_class {
        if hs.len() != classes.len() {
            return Err(Error::CohomologyBasis(format!(
                "{} cohomology bases supplied for {} self-dual classes",
                hs.len(),
                classes.len()
            )));
        }
    }
    let mut entries = vec![];
    for (k, class) in classes.iter().enumerate() {
        let members: Vec<&Irrep> = class.iter().map(|&j| &action.characters.irreps[j]).collect();
        let sub = isotypical_class_subcomplex(complex, &members)?;
        let h = match h_per_class {
            Some(hs) => hs[k].clone(),
            None => cohomology_basis(&sub)?,
        };
        let v = torsion_form_value(&sub, &h)?;
        entries.push(TorsionEntry {
            irreps: members.iter().map(|w| w.name.clone()).collect(),
            value: v,
        });
    }
    Ok(TorsionCharacter { entries })
}

/// One critical point's data for the anomaly ratio: the g-index, both fiber
/// forms, and the fiber action of g at that (fixed) point.
#[derive(Debug, Clone)]
pub struct AnomalyPoint {
    pub ind_g: usize,
    pub gram: CMat,
    pub gram_prime: CMat,
    pub g_fiber: CMat,
}

/// Predicted ratio of equivariant Milnor torsions under the change of fiber
/// forms b -> b', evaluated at g:
/// prod_x exp(Tr[g log(b^{-1} b')])^{(-1)^{ind_g(x)}}.
pub fn milnor_anomaly_ratio(points: &[AnomalyPoint]) -> Result<C> {
    let mut ratio = c(1.0, 0.0);
    for (idx, p) in points.iter().enumerate() {
        let binv = linalg::inverse(&p.gram).map_err(|_| {
            Error::InvalidArgument(format!("anomaly point {idx}: fiber form is singular"))
        })?;
        let quot = binv.dot(&p.gram_prime);
        let logq = matrix_log_principal(&quot).map_err(|e| {
            Error::LogBranch(format!(
                "anomaly point {idx}: b^-1 b' violates the homotopy-class hypothesis ({e})"
            ))
        })?;
        let t = trace(&p.g_fiber.dot(&logq));
        let factor = t.exp();
        if p.ind_g % 2 == 0 {
            ratio *= factor;
        } else {
            ratio /= factor;
        }
    }
    Ok(ratio)
}

/// Full-complex torsion with a freshly computed cohomology basis; the common
/// "just give me the number" entry point.
pub fn plain_torsion(complex: &BilinearComplex) -> Result<(C, CohomologyBasis)> {
    let h = cohomology_basis(complex)?;
    let v = torsion_form_value(complex, &h)?;
    Ok((v, h))
}

/// Verifies that `complex` dimensions admit `h` (acyclicity bookkeeping);
/// exposed for validator-style CLI use.
pub fn check_h_consistency(complex: &BilinearComplex, h: &CohomologyBasis) -> Result<()> {
    let computed = cohomology_basis(complex)?;
    if computed.betti != h.betti {
        return Err(Error::CohomologyBasis(format!(
            "supplied betti numbers {:?} differ from computed {:?}",
            h.betti, computed.betti
        )));
    }
    Ok(())
}

/// Rank sanity helper shared with the CLI: rank of every differential.
pub fn differential_ranks(complex: &BilinearComplex) -> Result<Vec<usize>> {
    (0..complex.degrees().saturating_sub(1))
        .map(|i| {
            let d = &complex.d[i];
            if max_abs(d) == 0.0 {
                Ok(0)
            } else {
                rank(d, RANK_REL_TOL)
            }
        })
        .collect()
}

//! Finite equivariant cochain complexes with nondegenerate symmetric
//! bilinear forms, their validation, cohomology and isotypical slicing.

use ndarray::s;

use crate::error::{Error, Result};
use crate::groups::{
    isotypical_projector, CharacterTable, FiniteGroup, GroupRepresentation, Irrep,
};
use crate::linalg::{
    self, column_space_qr, conjugate_transpose, eye, max_abs, nullspace, rank,
    svd, transpose, zeros, CMat, RANK_REL_TOL,
};

/// Group action on a graded complex: one matrix per element per degree.
#[derive(Debug, Clone)]
pub struct ComplexAction {
    pub group: FiniteGroup,
    pub characters: CharacterTable,
    /// matrices[element][degree]
    pub matrices: Vec<Vec<CMat>>,
}

impl ComplexAction {
    pub fn degree_rep(&self, i: usize) -> GroupRepresentation {
        GroupRepresentation {
            dim: self.matrices[0][i].nrows(),
            matrices: self.matrices.iter().map(|per| per[i].clone()).collect(),
        }
    }
}

/// A finite cochain complex with per-degree symmetric invertible Gram
/// matrices and an optional equivariant structure.
#[derive(Debug, Clone)]
pub struct BilinearComplex {
    pub dims: Vec<usize>,
    /// d[i] maps degree i to degree i+1, shape (dims[i+1], dims[i]).
    pub d: Vec<CMat>,
    pub gram: Vec<CMat>,
    pub action: Option<ComplexAction>,
}

pub const D_SQUARED_TOL: f64 = 1e-12;
pub const EQUIV_TOL: f64 = 1e-9;

impl BilinearComplex {
    pub fn degrees(&self) -> usize {
        self.dims.len()
    }

    /// Differential out of degree i, an empty map past the top degree.
    pub fn diff(&self, i: usize) -> CMat {
        if i + 1 < self.dims.len() {
            self.d[i].clone()
        } else {
            zeros(0, *self.dims.get(i).unwrap_or(&0))
        }
    }

    /// Differential into degree i (empty below degree 0).
    pub fn diff_into(&self, i: usize) -> CMat {
        if i == 0 {
            zeros(self.dims[0], 0)
        } else {
            self.d[i - 1].clone()
        }
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.degrees();
        if self.d.len() + 1 != n && !(n == 0 && self.d.is_empty()) {
            return Err(Error::Complex(format!(
                "{} differentials for {n} degrees",
                self.d.len()
            )));
        }
        if self.gram.len() != n {
            return Err(Error::Complex(format!(
                "{} gram matrices for {n} degrees",
                self.gram.len()
            )));
        }
        for i in 0..n {
            if self.gram[i].nrows() != self.dims[i] || self.gram[i].ncols() != self.dims[i] {
                return Err(Error::Complex(format!("gram shape mismatch in degree {i}")));
            }
            let asym = max_abs(&(&self.gram[i] - &transpose(&self.gram[i])));
            if asym > 1e-12 * max_abs(&self.gram[i]).max(1.0) {
                return Err(Error::Complex(format!(
                    "gram in degree {i} is not symmetric (residual {asym:.3e})"
                )));
            }
            let r = rank(&self.gram[i], RANK_REL_TOL)?;
            if r != self.dims[i] {
                return Err(Error::Complex(format!(
                    "gram in degree {i} is degenerate (rank {r} of {})",
                    self.dims[i]
                )));
            }
        }
        for i in 0..n.saturating_sub(1) {
            if self.d[i].nrows() != self.dims[i + 1] || self.d[i].ncols() != self.dims[i] {
                return Err(Error::Complex(format!(
                    "differential {i} has shape {}x{}, expected {}x{}",
                    self.d[i].nrows(),
                    self.d[i].ncols(),
                    self.dims[i + 1],
                    self.dims[i]
                )));
            }
        }
        let dscale = self.d.iter().map(max_abs).fold(1.0f64, f64::max);
        for i in 0..n.saturating_sub(2) {
            let comp = self.d[i + 1].dot(&self.d[i]);
            let res = max_abs(&comp);
            if res > D_SQUARED_TOL * dscale * dscale {
                return Err(Error::Complex(format!(
                    "d.d differs from zero between degrees {i} and {} (residual {res:.3e})",
                    i + 2
                )));
            }
        }
        if let Some(action) = &self.action {
            action.group.validate()?;
            action.characters.validate(&action.group)?;
            let ord = action.group.order();
            if action.matrices.len() != ord {
                return Err(Error::Complex(format!(
                    "action lists {} elements, group order is {ord}",
                    action.matrices.len()
                )));
            }
            for i in 0..n {
                action.degree_rep(i).validate(&action.group)?;
            }
            let ascale = action
                .matrices
                .iter()
                .flat_map(|per| per.iter().map(max_abs))
                .fold(1.0f64, f64::max);
            for (gidx, per) in action.matrices.iter().enumerate() {
                for i in 0..n.saturating_sub(1) {
                    let lhs = per[i + 1].dot(&self.d[i]);
                    let rhs = self.d[i].dot(&per[i]);
                    let res = max_abs(&(&lhs - &rhs));
                    if res > EQUIV_TOL * ascale * dscale.max(1.0) {
                        return Err(Error::Complex(format!(
                            "action of {} does not commute with d in degree {i} (residual {res:.3e})",
                            action.group.elements[gidx]
                        )));
                    }
                }
                for i in 0..n {
                    let lhs = transpose(&per[i]).dot(&self.gram[i]).dot(&per[i]);
                    let res = max_abs(&(&lhs - &self.gram[i]));
                    if res > EQUIV_TOL * ascale * ascale * max_abs(&self.gram[i]).max(1.0) {
                        return Err(Error::Complex(format!(
                            "action of {} does not preserve the bilinear form in degree {i} \
                             (residual {res:.3e})",
                            action.group.elements[gidx]
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Representatives of a cohomology basis, one matrix of column vectors per
/// degree.
#[derive(Debug, Clone)]
pub struct CohomologyBasis {
    pub representatives: Vec<CMat>,
    pub betti: Vec<usize>,
}

fn is_zero_matrix(a: &CMat) -> bool {
    a.iter().all(|z| z.norm() == 0.0)
}

/// Kernel and image bookkeeping with the exact-zero shortcut so that zero
/// differentials yield the standard basis.
fn kernel_basis(d: &CMat) -> Result<CMat> {
    if d.nrows() == 0 || is_zero_matrix(d) {
        return Ok(eye(d.ncols()));
    }
    nullspace(d, RANK_REL_TOL)
}

pub fn cohomology_basis(complex: &BilinearComplex) -> Result<CohomologyBasis> {
    let n = complex.degrees();
    let mut representatives = vec![];
    let mut betti = vec![];
    for i in 0..n {
        let dout = complex.diff(i);
        let din = complex.diff_into(i);
        let ker = kernel_basis(&dout)?;
        let rin = if din.ncols() == 0 || is_zero_matrix(&din) {
            0
        } else {
            rank(&din, RANK_REL_TOL)?
        };
        let b = ker.ncols() - rin;
        if b == 0 {
            representatives.push(zeros(complex.dims[i], 0));
            betti.push(0);
            continue;
        }
        if rin == 0 {
            representatives.push(ker);
            betti.push(b);
            continue;
        }
        // project the kernel basis off the image and keep the directions that
        // survive; representatives stay inside the kernel by construction
        let im = column_space_qr(&din, RANK_REL_TOL);
        let proj = im.dot(&conjugate_transpose(&im).dot(&ker));
        let kperp = &ker - &proj;
        let sv = svd(&kperp)?;
        let smax = sv.sigma.first().copied().unwrap_or(0.0);
        let nkeep = sv
            .sigma
            .iter()
            .filter(|&&sg| sg > RANK_REL_TOL * smax.max(1e-300))
            .count();
        if nkeep != b {
            return Err(Error::IllConditioned(format!(
                "cohomology rank in degree {i}: expected {b} independent classes, found {nkeep}"
            )));
        }
        let combo = sv.v.slice(s![.., ..b]).to_owned();
        representatives.push(ker.dot(&combo));
        betti.push(b);
    }
    Ok(CohomologyBasis { representatives, betti })
}

/// Groups the irreducibles into self-dual classes: a singleton when the
/// character is real (W isomorphic to its dual), otherwise the conjugate
/// pair {W, W*}. An invariant bilinear form pairs C_W with C_{W*}, so its
/// restriction is nondegenerate exactly on these classes, never on a lone
/// non-self-dual component.
pub fn self_dual_classes(table: &CharacterTable) -> Result<Vec<Vec<usize>>> {
    let mut used = vec![false; table.irreps.len()];
    let mut classes = vec![];
    for k in 0..table.irreps.len() {
        if used[k] {
            continue;
        }
        used[k] = true;
        let conj: Vec<linalg::C> = table.irreps[k].values.iter().map(|z| z.conj()).collect();
        let selfdual = table.irreps[k]
            .values
            .iter()
            .zip(&conj)
            .all(|(a, b)| (a - b).norm() < 1e-9);
        if selfdual {
            classes.push(vec![k]);
            continue;
        }
        let partner = (k + 1..table.irreps.len()).find(|&j| {
            !used[j]
                && table.irreps[j]
                    .values
                    .iter()
                    .zip(&conj)
                    .all(|(a, b)| (a - b).norm() < 1e-9)
        });
        match partner {
            Some(j) => {
                used[j] = true;
                classes.push(vec![k, j]);
            }
            None => {
                return Err(Error::Characters(format!(
                    "irrep {} has a complex character but no conjugate partner in the table",
                    table.irreps[k].name
                )))
            }
        }
    }
    Ok(classes)
}

/// Restriction of the complex to the isotypical component of `w`.
///
/// The basis of each projector image is pinned by column-pivoted QR so that
/// torsion values computed downstream are reproducible.
pub fn isotypical_subcomplex(complex: &BilinearComplex, w: &Irrep) -> Result<BilinearComplex> {
    isotypical_class_subcomplex(complex, &[w])
}

/// Per-degree orthonormal bases (as columns) of the sum of isotypical
/// components over `class`; these are the inclusion maps of the class
/// subcomplex into the ambient complex.
pub fn isotypical_class_bases(
    complex: &BilinearComplex,
    class: &[&Irrep],
) -> Result<Vec<linalg::CMat>> {
    let action = complex
        .action
        .as_ref()
        .ok_or_else(|| Error::Complex("isotypical restriction needs a group action".into()))?;
    let mut bases = vec![];
    for i in 0..complex.degrees() {
        let rep = action.degree_rep(i);
        let mut p = linalg::zeros(complex.dims[i], complex.dims[i]);
        for member in class {
            p = &p + &isotypical_projector(&action.group, &rep, member)?;
        }
        // a nonzero projector has norm >= 1/dim; anything smaller is
        // character-table roundoff on a component that is absent
        if linalg::max_abs(&p) <= crate::groups::PROJ_TOL {
            bases.push(linalg::zeros(complex.dims[i], 0));
        } else {
            bases.push(column_space_qr(&p, RANK_REL_TOL));
        }
    }
    Ok(bases)
}

/// Restriction to a sum of isotypical components, normally one self-dual
/// class. The bilinear form stays nondegenerate on conjugate pairs where it
/// would vanish on either member alone.
pub fn isotypical_class_subcomplex(
    complex: &BilinearComplex,
    class: &[&Irrep],
) -> Result<BilinearComplex> {
    let action = complex
        .action
        .as_ref()
        .ok_or_else(|| Error::Complex("isotypical restriction needs a group action".into()))?;
    let label = class
        .iter()
        .map(|w| w.name.as_str())
        .collect::<Vec<_>>()
        .join("+");
    let w = &Irrep {
        name: label,
        degree: class.iter().map(|w| w.degree).sum(),
        values: (0..action.group.order())
            .map(|g| class.iter().map(|w| w.values[g]).sum())
            .collect(),
    };
    let n = complex.degrees();
    let bases = isotypical_class_bases(complex, class)?;
    let mut d = vec![];
    for i in 0..n.saturating_sub(1) {
        let image = complex.d[i].dot(&bases[i]);
        let coords = conjugate_transpose(&bases[i + 1]).dot(&image);
        let resid = max_abs(&(&image - &bases[i + 1].dot(&coords)));
        if resid > EQUIV_TOL * max_abs(&complex.d[i]).max(1.0) {
            return Err(Error::Complex(format!(
                "differential does not preserve the isotypical component of {} in degree {i} \
                 (residual {resid:.3e})",
                w.name
            )));
        }
        d.push(coords);
    }
    let mut gram = vec![];
    for i in 0..n {
        let g = transpose(&bases[i]).dot(&complex.gram[i]).dot(&bases[i]);
        if bases[i].ncols() > 0 {
            let r = rank(&g, 1e-9)?;
            if r != g.nrows() {
                return Err(Error::Complex(format!(
                    "bilinear form degenerates on the isotypical component of {} in degree {i}",
                    w.name
                )));
            }
        }
        gram.push(g);
    }
    let sub_action = ComplexAction {
        group: action.group.clone(),
        characters: action.characters.clone(),
        matrices: action
            .matrices
            .iter()
            .map(|per| {
                (0..n)
                    .map(|i| conjugate_transpose(&bases[i]).dot(&per[i]).dot(&bases[i]))
                    .collect()
            })
            .collect(),
    };
    Ok(BilinearComplex {
        dims: bases.iter().map(|b| b.ncols()).collect(),
        d,
        gram,
        action: Some(sub_action),
    })
}

/// Euler data: e(C), per-irrep e(C_W) and the Euler character chi(C) on G.
#[derive(Debug, Clone)]
pub struct EulerData {
    pub euler: i64,
    /// (irrep name, e(C_W)) in character-table order; empty without an action.
    pub per_irrep: Vec<(String, i64)>,
    /// chi(C)(g) per element; empty without an action.
    pub character: Vec<linalg::C>,
}

pub fn euler_data(complex: &BilinearComplex) -> Result<EulerData> {
    let euler: i64 = complex
        .dims
        .iter()
        .enumerate()
        .map(|(i, &d)| if i % 2 == 0 { d as i64 } else { -(d as i64) })
        .sum();
    let Some(action) = &complex.action else {
        return Ok(EulerData { euler, per_irrep: vec![], character: vec![] });
    };
    let mut per_irrep = vec![];
    for w in &action.characters.irreps {
        let mut e = 0i64;
        for i in 0..complex.degrees() {
            let rep = action.degree_rep(i);
            let m = crate::groups::multiplicity(&action.group, &rep, w)? as i64;
            let dim_w = m * w.degree as i64;
            e += if i % 2 == 0 { dim_w } else { -dim_w };
        }
        per_irrep.push((w.name.clone(), e));
    }
    let character = (0..action.group.order())
        .map(|g| {
            (0..complex.degrees())
                .map(|i| {
                    let t = linalg::trace(&action.matrices[g][i]);
                    if i % 2 == 0 {
                        t
                    } else {
                        -t
                    }
                })
                .sum()
        })
        .collect();
    Ok(EulerData { euler, per_irrep, character })
}

/// Per-irrep dimensions dim C_W^i = multiplicity x deg W, computed by
/// character arithmetic so the answer exists even where the bilinear form
/// vanishes on a lone non-self-dual component.
pub fn isotypical_dimensions(complex: &BilinearComplex) -> Result<Vec<Vec<usize>>> {
    let action = complex
        .action
        .as_ref()
        .ok_or_else(|| Error::Complex("needs a group action".into()))?;
    let mut out = vec![];
    for w in &action.characters.irreps {
        let mut dims = vec![];
        for i in 0..complex.degrees() {
            let rep = action.degree_rep(i);
            let m = crate::groups::multiplicity(&action.group, &rep, w)?;
            dims.push(m * w.degree);
        }
        out.push(dims);
    }
    Ok(out)
}

/// Two-term complex 0 -> C -> C -> 0 with d = (lambda) and unit grams.
pub fn two_term(lambda: linalg::C) -> BilinearComplex {
    BilinearComplex {
        dims: vec![1, 1],
        d: vec![CMat::from_shape_vec((1, 1), vec![lambda]).unwrap()],
        gram: vec![eye(1), eye(1)],
        action: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{CharacterTable, FiniteGroup};
    use crate::linalg::{c, ONE, ZERO};

    fn swap_action_complex() -> BilinearComplex {
        // Z/2 swaps coordinates of C^2 in each of two degrees, d = 0.
        let group = FiniteGroup::cyclic(2);
        let characters = CharacterTable::cyclic(2);
        let swap = CMat::from_shape_vec((2, 2), vec![ZERO, ONE, ONE, ZERO]).unwrap();
        let action = ComplexAction {
            group,
            characters,
            matrices: vec![vec![eye(2), eye(2)], vec![swap.clone(), swap]],
        };
        BilinearComplex {
            dims: vec![2, 2],
            d: vec![zeros(2, 2)],
            gram: vec![eye(2), eye(2)],
            action: Some(action),
        }
    }

    #[test]
    fn two_term_validates() {
        for lambda in [ONE, c(0.0, 2.0), c(-3.0, 0.5)] {
            assert!(two_term(lambda).validate().is_ok());
        }
    }

    #[test]
    fn d_squared_violation_reported() {
        let cplx = BilinearComplex {
            dims: vec![1, 2, 1],
            d: vec![
                CMat::from_shape_vec((2, 1), vec![ONE, ZERO]).unwrap(),
                CMat::from_shape_vec((1, 2), vec![ONE, ZERO]).unwrap(),
            ],
            gram: vec![eye(1), eye(2), eye(1)],
            action: None,
        };
        assert!(matches!(cplx.validate(), Err(Error::Complex(_))));
    }

    #[test]
    fn zero_differential_cohomology_is_standard_basis() {
        let cplx = BilinearComplex {
            dims: vec![2, 3],
            d: vec![zeros(3, 2)],
            gram: vec![eye(2), eye(3)],
            action: None,
        };
        let h = cohomology_basis(&cplx).unwrap();
        assert_eq!(h.betti, vec![2, 3]);
        assert!(max_abs(&(&h.representatives[0] - &eye(2))) < 1e-14);
        assert!(max_abs(&(&h.representatives[1] - &eye(3))) < 1e-14);
    }

    #[test]
    fn invertible_two_term_is_acyclic() {
        let h = cohomology_basis(&two_term(c(2.0, 1.0))).unwrap();
        assert_eq!(h.betti, vec![0, 0]);
    }

    #[test]
    fn euler_from_betti_matches_dims() {
        let cplx = BilinearComplex {
            dims: vec![2, 1],
            d: vec![CMat::from_shape_vec((1, 2), vec![ONE, ZERO]).unwrap()],
            gram: vec![eye(2), eye(1)],
            action: None,
        };
        cplx.validate().unwrap();
        let h = cohomology_basis(&cplx).unwrap();
        let euler_betti: i64 = h
            .betti
            .iter()
            .enumerate()
            .map(|(i, &b)| if i % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum();
        assert_eq!(euler_betti, euler_data(&cplx).unwrap().euler);
    }

    #[test]
    fn swap_action_isotypical_split() {
        let cplx = swap_action_complex();
        cplx.validate().unwrap();
        let action = cplx.action.as_ref().unwrap();
        let mut dims_sum = vec![0usize; 2];
        for w in &action.characters.irreps {
            let sub = isotypical_subcomplex(&cplx, w).unwrap();
            sub.validate().unwrap();
            assert_eq!(sub.dims, vec![1, 1]);
            for (i, s) in sub.dims.iter().enumerate() {
                dims_sum[i] += s;
            }
        }
        assert_eq!(dims_sum, cplx.dims);
    }

    #[test]
    fn isotypical_pieces_gram_orthogonal() {
        let cplx = swap_action_complex();
        let action = cplx.action.as_ref().unwrap();
        let rep0 = action.degree_rep(0);
        let p0 = isotypical_projector(&action.group, &rep0, &action.characters.irreps[0]).unwrap();
        let p1 = isotypical_projector(&action.group, &rep0, &action.characters.irreps[1]).unwrap();
        let b0 = column_space_qr(&p0, RANK_REL_TOL);
        let b1 = column_space_qr(&p1, RANK_REL_TOL);
        let cross = transpose(&b0).dot(&cplx.gram[0]).dot(&b1);
        assert!(max_abs(&cross) < 1e-9);
    }

    #[test]
    fn euler_identity_eq_2_7() {
        let cplx = swap_action_complex();
        let data = euler_data(&cplx).unwrap();
        let action = cplx.action.as_ref().unwrap();
        for (g, &chi) in data.character.iter().enumerate() {
            let mut rhs = ZERO;
            for (k, w) in action.characters.irreps.iter().enumerate() {
                let e = data.per_irrep[k].1 as f64;
                rhs += c(e, 0.0) * w.values[g] / c(w.degree as f64, 0.0);
            }
            assert!((chi - rhs).norm() < 1e-9, "element {g}: {chi} vs {rhs}");
        }
    }

    #[test]
    fn regular_rep_euler_decomposition() {
        // Z/2 regular representation in degree 0 only
        let group = FiniteGroup::cyclic(2);
        let characters = CharacterTable::cyclic(2);
        let rep = crate::groups::GroupRepresentation::regular(&group);
        let action = ComplexAction {
            group,
            characters,
            matrices: (0..2).map(|g| vec![rep.matrices[g].clone()]).collect(),
        };
        let cplx = BilinearComplex {
            dims: vec![2],
            d: vec![],
            gram: vec![eye(2)],
            action: Some(action),
        };
        cplx.validate().unwrap();
        let data = euler_data(&cplx).unwrap();
        assert_eq!(data.per_irrep[0].1, 1);
        assert_eq!(data.per_irrep[1].1, 1);
        assert!((data.character[1]).norm() < 1e-12);
    }

    #[test]
    fn betti_ignores_gram() {
        let mut cplx = two_term(c(0.0, 0.0));
        cplx.gram = vec![
            CMat::from_shape_vec((1, 1), vec![c(3.0, 1.0)]).unwrap(),
            CMat::from_shape_vec((1, 1), vec![c(0.5, -2.0)]).unwrap(),
        ];
        let h = cohomology_basis(&cplx).unwrap();
        assert_eq!(h.betti, vec![1, 1]);
    }
}

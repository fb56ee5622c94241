//! Finite groups given by explicit multiplication tables, validated complex
//! character tables, and isotypical projection machinery.

use crate::error::{Error, Result};
use crate::linalg::{c, eye, max_abs, trace, CMat, C, ONE};

/// A finite group as an indexed element set with a total multiplication table.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteGroup {
    pub elements: Vec<String>,
    /// mult[i][j] = index of elements[i] * elements[j].
    pub mult: Vec<Vec<usize>>,
    pub identity: usize,
    pub inverse: Vec<usize>,
}

impl FiniteGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.mult[i][j]
    }

    pub fn element_index(&self, name: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == name)
    }

    /// Builds a group from a table alone, locating identity and inverses.
    pub fn from_table(elements: Vec<String>, mult: Vec<Vec<usize>>) -> Result<Self> {
        let n = elements.len();
        if mult.len() != n || mult.iter().any(|r| r.len() != n) {
            return Err(Error::GroupTable(format!(
                "table shape {}x{:?} does not match {n} elements",
                mult.len(),
                mult.first().map(|r| r.len())
            )));
        }
        if let Some((i, j)) = mult
            .iter()
            .enumerate()
            .find_map(|(i, r)| r.iter().position(|&v| v >= n).map(|j| (i, j)))
        {
            return Err(Error::GroupTable(format!(
                "entry mult[{i}][{j}] = {} out of range",
                mult[i][j]
            )));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|i| mult[e][i] == i && mult[i][e] == i))
            .ok_or_else(|| Error::GroupAxiom("no identity element".into()))?;
        let mut inverse = vec![0usize; n];
        for i in 0..n {
            inverse[i] = (0..n)
                .find(|&j| mult[i][j] == identity && mult[j][i] == identity)
                .ok_or_else(|| {
                    Error::GroupAxiom(format!("element {} has no inverse", elements[i]))
                })?;
        }
        let g = FiniteGroup { elements, mult, identity, inverse };
        g.validate()?;
        Ok(g)
    }

    /// Exhaustive axiom check: associativity over all triples, identity and
    /// inverse behavior. Reports the first violated axiom with a witness.
    pub fn validate(&self) -> Result<()> {
        let n = self.order();
        if self.mult.len() != n || self.mult.iter().any(|r| r.len() != n) {
            return Err(Error::GroupTable("table shape inconsistent".into()));
        }
        for i in 0..n {
            if self.mult[self.identity][i] != i || self.mult[i][self.identity] != i {
                return Err(Error::GroupAxiom(format!(
                    "identity fails on element {}",
                    self.elements[i]
                )));
            }
            let inv = self.inverse[i];
            if self.mult[i][inv] != self.identity || self.mult[inv][i] != self.identity {
                return Err(Error::GroupAxiom(format!(
                    "inverse fails on element {}",
                    self.elements[i]
                )));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for cc in 0..n {
                    if self.mult[self.mult[a][b]][cc] != self.mult[a][self.mult[b][cc]] {
                        return Err(Error::GroupAxiom(format!(
                            "associativity fails on triple ({}, {}, {})",
                            self.elements[a], self.elements[b], self.elements[cc]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Cyclic group Z/n with elements g0..g{n-1}.
    pub fn cyclic(n: usize) -> FiniteGroup {
        let elements = (0..n).map(|k| format!("g{k}")).collect();
        let mult = (0..n)
            .map(|i| (0..n).map(|j| (i + j) % n).collect())
            .collect();
        FiniteGroup::from_table(elements, mult).expect("cyclic table is valid")
    }

    /// Symmetric group S3 as permutations of {0,1,2}.
    pub fn s3() -> FiniteGroup {
        let perms: [[usize; 3]; 6] = [
            [0, 1, 2],
            [1, 0, 2],
            [2, 1, 0],
            [0, 2, 1],
            [1, 2, 0],
            [2, 0, 1],
        ];
        let names = ["e", "s01", "s02", "s12", "r1", "r2"];
        let compose = |p: &[usize; 3], q: &[usize; 3]| [p[q[0]], p[q[1]], p[q[2]]];
        let mult = perms
            .iter()
            .map(|p| {
                perms
                    .iter()
                    .map(|q| {
                        let pq = compose(p, q);
                        perms.iter().position(|r| *r == pq).unwrap()
                    })
                    .collect()
            })
            .collect();
        FiniteGroup::from_table(names.iter().map(|s| s.to_string()).collect(), mult)
            .expect("S3 table is valid")
    }
}

/// A complex irreducible character listed per element (not per class).
#[derive(Debug, Clone)]
pub struct Irrep {
    pub name: String,
    pub degree: usize,
    pub values: Vec<C>,
}

#[derive(Debug, Clone)]
pub struct CharacterTable {
    pub irreps: Vec<Irrep>,
}

pub const CHAR_TOL: f64 = 1e-10;

impl CharacterTable {
    /// Row orthogonality, degree consistency and the degree-sum count.
    pub fn validate(&self, group: &FiniteGroup) -> Result<()> {
        let n = group.order();
        for w in &self.irreps {
            if w.values.len() != n {
                return Err(Error::Characters(format!(
                    "irrep {} lists {} values for a group of order {n}",
                    w.name,
                    w.values.len()
                )));
            }
            if (w.values[group.identity] - c(w.degree as f64, 0.0)).norm() > CHAR_TOL {
                return Err(Error::Characters(format!(
                    "irrep {}: character at identity {} differs from degree {}",
                    w.name, w.values[group.identity], w.degree
                )));
            }
        }
        let degsum: usize = self.irreps.iter().map(|w| w.degree * w.degree).sum();
        if degsum != n {
            return Err(Error::Characters(format!(
                "sum of squared degrees {degsum} differs from group order {n}"
            )));
        }
        for (a, v) in self.irreps.iter().enumerate() {
            for (b, w) in self.irreps.iter().enumerate() {
                let inner: C = (0..n)
                    .map(|g| v.values[g] * w.values[g].conj())
                    .sum::<C>()
                    / c(n as f64, 0.0);
                let expected = if a == b { ONE } else { C::new(0.0, 0.0) };
                if (inner - expected).norm() > CHAR_TOL {
                    return Err(Error::Characters(format!(
                        "orthogonality fails for ({}, {}): inner product {}",
                        v.name, w.name, inner
                    )));
                }
            }
        }
        Ok(())
    }

    /// Character table of Z/n: chi_k(j) = exp(2 pi i jk / n).
    pub fn cyclic(n: usize) -> CharacterTable {
        let irreps = (0..n)
            .map(|k| Irrep {
                name: format!("chi{k}"),
                degree: 1,
                values: (0..n)
                    .map(|j| {
                        let t = 2.0 * std::f64::consts::PI * (j * k) as f64 / n as f64;
                        c(t.cos(), t.sin())
                    })
                    .collect(),
            })
            .collect();
        CharacterTable { irreps }
    }

    /// Character table of S3 in the element order of [`FiniteGroup::s3`].
    pub fn s3() -> CharacterTable {
        let triv = Irrep {
            name: "triv".into(),
            degree: 1,
            values: vec![ONE; 6],
        };
        let sign = Irrep {
            name: "sign".into(),
            degree: 1,
            values: [1.0, -1.0, -1.0, -1.0, 1.0, 1.0]
                .iter()
                .map(|&v| c(v, 0.0))
                .collect(),
        };
        let std2 = Irrep {
            name: "std".into(),
            degree: 2,
            values: [2.0, 0.0, 0.0, 0.0, -1.0, -1.0]
                .iter()
                .map(|&v| c(v, 0.0))
                .collect(),
        };
        CharacterTable { irreps: vec![triv, sign, std2] }
    }
}

/// A representation as one invertible matrix per group element.
#[derive(Debug, Clone)]
pub struct GroupRepresentation {
    pub dim: usize,
    pub matrices: Vec<CMat>,
}

pub const REP_TOL: f64 = 1e-9;

impl GroupRepresentation {
    pub fn validate(&self, group: &FiniteGroup) -> Result<()> {
        let n = group.order();
        if self.matrices.len() != n {
            return Err(Error::Representation(format!(
                "{} matrices for a group of order {n}",
                self.matrices.len()
            )));
        }
        for (g, m) in self.matrices.iter().enumerate() {
            if m.nrows() != self.dim || m.ncols() != self.dim {
                return Err(Error::Representation(format!(
                    "matrix for {} has shape {}x{}, expected {}",
                    group.elements[g],
                    m.nrows(),
                    m.ncols(),
                    self.dim
                )));
            }
        }
        let idres = max_abs(&(&self.matrices[group.identity] - &eye(self.dim)));
        if idres > REP_TOL {
            return Err(Error::Representation(format!(
                "rho(identity) differs from identity by {idres:.3e}"
            )));
        }
        let scale = self
            .matrices
            .iter()
            .map(max_abs)
            .fold(1.0f64, f64::max);
        for g in 0..n {
            for h in 0..n {
                let lhs = self.matrices[g].dot(&self.matrices[h]);
                let rhs = &self.matrices[group.mul(g, h)];
                let res = max_abs(&(&lhs - rhs));
                if res > REP_TOL * scale * scale {
                    return Err(Error::Representation(format!(
                        "rho({}) rho({}) differs from rho(product) by {res:.3e}",
                        group.elements[g], group.elements[h]
                    )));
                }
            }
        }
        Ok(())
    }

    /// The regular representation: rho(g) e_h = e_{gh}.
    pub fn regular(group: &FiniteGroup) -> GroupRepresentation {
        let n = group.order();
        let matrices = (0..n)
            .map(|g| {
                let mut m = crate::linalg::zeros(n, n);
                for h in 0..n {
                    m[(group.mul(g, h), h)] = ONE;
                }
                m
            })
            .collect();
        GroupRepresentation { dim: n, matrices }
    }
}

pub const PROJ_TOL: f64 = 1e-9;

/// Isotypical projector P_W = (deg W / |G|) sum_g conj(chi_W(g)) rho(g).
pub fn isotypical_projector(
    group: &FiniteGroup,
    rep: &GroupRepresentation,
    w: &Irrep,
) -> Result<CMat> {
    if w.values.len() != group.order() {
        return Err(Error::Characters(format!(
            "irrep {} has {} character values, group order is {}",
            w.name,
            w.values.len(),
            group.order()
        )));
    }
    let n = group.order();
    let mut p = crate::linalg::zeros(rep.dim, rep.dim);
    for g in 0..n {
        let coef = w.values[g].conj() * c(w.degree as f64 / n as f64, 0.0);
        p = &p + &rep.matrices[g].mapv(|z| z * coef);
    }
    Ok(p)
}

/// Multiplicity of `w` in `rep` by the character inner product; errors if the
/// averaged value is not close to a nonnegative integer.
pub fn multiplicity(
    group: &FiniteGroup,
    rep: &GroupRepresentation,
    w: &Irrep,
) -> Result<usize> {
    let n = group.order();
    let val: C = (0..n)
        .map(|g| w.values[g].conj() * trace(&rep.matrices[g]))
        .sum::<C>()
        / c(n as f64, 0.0);
    let rounded = val.re.round();
    if (val - c(rounded, 0.0)).norm() > 1e-8 || rounded < 0.0 {
        return Err(Error::Representation(format!(
            "multiplicity of {} evaluates to non-integer {val}",
            w.name
        )));
    }
    Ok(rounded as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::zeros;

    #[test]
    fn z2_table_passes() {
        let g = FiniteGroup::cyclic(2);
        assert!(g.validate().is_ok());
    }

    #[test]
    fn broken_table_reports_axiom_failure() {
        // s*s = s destroys inverses for s
        let r = FiniteGroup::from_table(
            vec!["e".into(), "s".into()],
            vec![vec![0, 1], vec![1, 1]],
        );
        assert!(r.is_err());
    }

    #[test]
    fn s3_exhaustive_pass() {
        let g = FiniteGroup::s3();
        assert!(g.validate().is_ok());
        // independent oracle: re-check associativity by exhaustive loop
        for a in 0..6 {
            for b in 0..6 {
                for cc in 0..6 {
                    assert_eq!(g.mul(g.mul(a, b), cc), g.mul(a, g.mul(b, cc)));
                }
            }
        }
    }

    #[test]
    fn character_tables_validate() {
        for n in 1..=4 {
            let g = FiniteGroup::cyclic(n);
            assert!(CharacterTable::cyclic(n).validate(&g).is_ok());
        }
        assert!(CharacterTable::s3().validate(&FiniteGroup::s3()).is_ok());
    }

    #[test]
    fn duplicate_rows_fail_orthogonality() {
        let g = FiniteGroup::cyclic(2);
        let t = CharacterTable {
            irreps: vec![
                Irrep { name: "a".into(), degree: 1, values: vec![ONE, ONE] },
                Irrep { name: "b".into(), degree: 1, values: vec![ONE, ONE] },
            ],
        };
        assert!(matches!(t.validate(&g), Err(Error::Characters(_))));
    }

    #[test]
    fn regular_rep_z2_projectors() {
        let g = FiniteGroup::cyclic(2);
        let t = CharacterTable::cyclic(2);
        let rep = GroupRepresentation::regular(&g);
        rep.validate(&g).unwrap();
        let mut total = zeros(2, 2);
        for w in &t.irreps {
            let p = isotypical_projector(&g, &rep, w).unwrap();
            // idempotent
            assert!(max_abs(&(&p.dot(&p) - &p)) < PROJ_TOL);
            // commutes with the action
            for m in &rep.matrices {
                assert!(max_abs(&(&p.dot(m) - &m.dot(&p))) < PROJ_TOL);
            }
            assert_eq!(multiplicity(&g, &rep, w).unwrap(), 1);
            total = &total + &p;
        }
        assert!(max_abs(&(&total - &eye(2))) < PROJ_TOL);
        // brute-force oracle for the averaging formula on the trivial irrep:
        // P = (1/2)(rho(e) + rho(s)) projects onto span(1,1)
        let p0 = isotypical_projector(&g, &rep, &t.irreps[0]).unwrap();
        let expected = CMat::from_shape_fn((2, 2), |_| c(0.5, 0.0));
        assert!(max_abs(&(&p0 - &expected)) < 1e-12);
    }

    #[test]
    fn trivial_rep_multiplicities() {
        let g = FiniteGroup::s3();
        let t = CharacterTable::s3();
        let rep = GroupRepresentation {
            dim: 1,
            matrices: vec![eye(1); 6],
        };
        assert_eq!(multiplicity(&g, &rep, &t.irreps[0]).unwrap(), 1);
        assert_eq!(multiplicity(&g, &rep, &t.irreps[1]).unwrap(), 0);
        assert_eq!(multiplicity(&g, &rep, &t.irreps[2]).unwrap(), 0);
    }

    #[test]
    fn projectors_mutually_annihilate() {
        let g = FiniteGroup::s3();
        let t = CharacterTable::s3();
        let rep = GroupRepresentation::regular(&g);
        let ps: Vec<CMat> = t
            .irreps
            .iter()
            .map(|w| isotypical_projector(&g, &rep, w).unwrap())
            .collect();
        for i in 0..ps.len() {
            for j in 0..ps.len() {
                if i != j {
                    assert!(max_abs(&ps[i].dot(&ps[j])) < PROJ_TOL);
                }
            }
        }
        // completeness: ranks weighted by nothing sum to dim
        let dims: usize = ps
            .iter()
            .map(|p| crate::linalg::rank(p, 1e-8).unwrap())
            .sum();
        assert_eq!(dims, 6);
    }

    #[test]
    fn multiplicity_conjugation_invariant() {
        use rand::Rng;
        use rand_chacha::rand_core::SeedableRng;
        let g = FiniteGroup::cyclic(3);
        let t = CharacterTable::cyclic(3);
        let rep = GroupRepresentation::regular(&g);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..5 {
            let a = CMat::from_shape_fn((3, 3), |_| {
                c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
            });
            let a = &a + &eye(3).mapv(|z| z * c(2.0, 0.0));
            let ainv = crate::linalg::inverse(&a).unwrap();
            let conj_rep = GroupRepresentation {
                dim: 3,
                matrices: rep
                    .matrices
                    .iter()
                    .map(|m| ainv.dot(m).dot(&a))
                    .collect(),
            };
            for w in &t.irreps {
                assert_eq!(
                    multiplicity(&g, &rep, w).unwrap(),
                    multiplicity(&g, &conj_rep, w).unwrap()
                );
            }
        }
    }
}

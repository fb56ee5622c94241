//! JSON serialization of groups, complexes, cohomology bases, Morse systems
//! and geometric inputs. Matrices are row-major arrays of [re, im] pairs;
//! shapes are reconstructed from context so empty blocks stay unambiguous.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::cochain::{BilinearComplex, CohomologyBasis, ComplexAction};
use crate::comparison::GeometricInputs;
use crate::error::{Error, Result};
use crate::groups::{CharacterTable, FiniteGroup, Irrep};
use crate::linalg::{c, CMat, C};
use crate::morse::{
    Component, ElementAction, FixedData, Instanton, MorsePoint, MorseSystem,
};

pub type RawMat = Vec<Vec<[f64; 2]>>;

pub fn mat_to_raw(m: &CMat) -> RawMat {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

pub fn raw_to_mat(raw: &RawMat, rows: usize, cols: usize) -> Result<CMat> {
    if raw.is_empty() {
        if rows == 0 || cols == 0 {
            return Ok(crate::linalg::zeros(rows, cols));
        }
        return Err(Error::InvalidArgument(format!(
            "empty matrix where a {rows}x{cols} block was expected"
        )));
    }
    if raw.len() != rows || raw.iter().any(|r| r.len() != cols) {
        return Err(Error::InvalidArgument(format!(
            "matrix is {}x{}, expected {rows}x{cols}",
            raw.len(),
            raw.first().map_or(0, |r| r.len())
        )));
    }
    let mut m = crate::linalg::zeros(rows, cols);
    for (i, row) in raw.iter().enumerate() {
        for (j, &[re, im]) in row.iter().enumerate() {
            m[(i, j)] = c(re, im);
        }
    }
    Ok(m)
}

fn pair(z: C) -> [f64; 2] {
    [z.re, z.im]
}

fn unpair([re, im]: [f64; 2]) -> C {
    c(re, im)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IrrepFile {
    pub name: String,
    pub degree: usize,
    /// character value per group element, in element order
    pub values: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupFile {
    pub elements: Vec<String>,
    pub mult: Vec<Vec<usize>>,
    pub characters: Vec<IrrepFile>,
}

impl GroupFile {
    pub fn build(&self) -> Result<(FiniteGroup, CharacterTable)> {
        let group = FiniteGroup::from_table(self.elements.clone(), self.mult.clone())?;
        let table = CharacterTable {
            irreps: self
                .characters
                .iter()
                .map(|w| Irrep {
                    name: w.name.clone(),
                    degree: w.degree,
                    values: w.values.iter().copied().map(unpair).collect(),
                })
                .collect(),
        };
        group.validate()?;
        table.validate(&group)?;
        Ok((group, table))
    }

    pub fn from_parts(group: &FiniteGroup, table: &CharacterTable) -> GroupFile {
        GroupFile {
            elements: group.elements.clone(),
            mult: group.mult.clone(),
            characters: table
                .irreps
                .iter()
                .map(|w| IrrepFile {
                    name: w.name.clone(),
                    degree: w.degree,
                    values: w.values.iter().copied().map(pair).collect(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ActionFile {
    pub group: GroupFile,
    /// element name -> matrices per degree
    pub matrices: BTreeMap<String, Vec<RawMat>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComplexFile {
    pub dims: Vec<usize>,
    pub d: Vec<RawMat>,
    pub gram: Vec<RawMat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<ActionFile>,
}

impl ComplexFile {
    pub fn build(&self) -> Result<BilinearComplex> {
        let n = self.dims.len();
        if self.d.len() + 1 != n.max(1) || self.gram.len() != n {
            return Err(Error::InvalidArgument(format!(
                "complex has {} degrees but {} differentials and {} forms",
                n,
                self.d.len(),
                self.gram.len()
            )));
        }
        let mut d = vec![];
        for i in 0..n.saturating_sub(1) {
            d.push(raw_to_mat(&self.d[i], self.dims[i + 1], self.dims[i])?);
        }
        let mut gram = vec![];
        for i in 0..n {
            gram.push(raw_to_mat(&self.gram[i], self.dims[i], self.dims[i])?);
        }
        let action = match &self.action {
            Some(af) => {
                let (group, characters) = af.group.build()?;
                let mut matrices = vec![];
                for g in &group.elements {
                    let per = af.matrices.get(g).ok_or_else(|| {
                        Error::InvalidArgument(format!("action is missing element '{g}'"))
                    })?;
                    if per.len() != n {
                        return Err(Error::InvalidArgument(format!(
                            "action for '{g}' has {} degrees, expected {n}",
                            per.len()
                        )));
                    }
                    let mut mats = vec![];
                    for (i, raw) in per.iter().enumerate() {
                        mats.push(raw_to_mat(raw, self.dims[i], self.dims[i])?);
                    }
                    matrices.push(mats);
                }
                Some(ComplexAction { group, characters, matrices })
            }
            None => None,
        };
        Ok(BilinearComplex { dims: self.dims.clone(), d, gram, action })
    }

    pub fn from_complex(cplx: &BilinearComplex) -> ComplexFile {
        ComplexFile {
            dims: cplx.dims.clone(),
            d: cplx.d.iter().map(mat_to_raw).collect(),
            gram: cplx.gram.iter().map(mat_to_raw).collect(),
            action: cplx.action.as_ref().map(|a| ActionFile {
                group: GroupFile::from_parts(&a.group, &a.characters),
                matrices: a
                    .group
                    .elements
                    .iter()
                    .zip(&a.matrices)
                    .map(|(g, mats)| (g.clone(), mats.iter().map(mat_to_raw).collect()))
                    .collect(),
            }),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BasisFile {
    pub representatives: Vec<RawMat>,
    pub betti: Vec<usize>,
}

impl BasisFile {
    pub fn build(&self, dims: &[usize]) -> Result<CohomologyBasis> {
        if self.representatives.len() != dims.len() || self.betti.len() != dims.len() {
            return Err(Error::InvalidArgument(
                "basis file does not match the complex degrees".into(),
            ));
        }
        let mut reps = vec![];
        for (i, raw) in self.representatives.iter().enumerate() {
            reps.push(raw_to_mat(raw, dims[i], self.betti[i])?);
        }
        Ok(CohomologyBasis { representatives: reps, betti: self.betti.clone() })
    }

    pub fn from_basis(h: &CohomologyBasis) -> BasisFile {
        BasisFile {
            representatives: h.representatives.iter().map(mat_to_raw).collect(),
            betti: h.betti.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstantonFile {
    pub x: String,
    pub y: String,
    pub n_gamma: i32,
    pub transport: RawMat,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PointFile {
    pub name: String,
    pub ind: usize,
    pub f: f64,
    pub fiber_dim: usize,
    pub fiber_gram: RawMat,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NormalDimFile {
    pub beta: f64,
    pub dim: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComponentFile {
    pub points: Vec<String>,
    pub dim: usize,
    pub euler: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace_f: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normal_dims: Option<Vec<NormalDimFile>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ElementActionFile {
    pub element: String,
    /// image point name per point, in point order
    pub perm: Vec<String>,
    pub eps: Vec<i32>,
    pub fiber_maps: Vec<RawMat>,
    pub fixed: Vec<FixedData>,
    #[serde(default)]
    pub components: Vec<ComponentFile>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MorseFile {
    pub ambient_dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupFile>,
    pub points: Vec<PointFile>,
    pub instantons: Vec<InstantonFile>,
    pub actions: Vec<ElementActionFile>,
}

impl MorseFile {
    pub fn build(&self) -> Result<MorseSystem> {
        let (group, characters) = match &self.group {
            Some(gf) => gf.build()?,
            None => (FiniteGroup::cyclic(1), CharacterTable::cyclic(1)),
        };
        let mut points = vec![];
        for p in &self.points {
            points.push(MorsePoint {
                name: p.name.clone(),
                ind: p.ind,
                f: p.f,
                fiber_dim: p.fiber_dim,
                fiber_gram: raw_to_mat(&p.fiber_gram, p.fiber_dim, p.fiber_dim)?,
            });
        }
        let find = |name: &str| -> Result<usize> {
            points
                .iter()
                .position(|p| p.name == name)
                .ok_or_else(|| Error::InvalidArgument(format!("unknown point '{name}'")))
        };
        let mut instantons = vec![];
        for ins in &self.instantons {
            let from = find(&ins.x)?;
            let to = find(&ins.y)?;
            instantons.push(Instanton {
                from,
                to,
                sign: ins.n_gamma,
                transport: raw_to_mat(
                    &ins.transport,
                    points[to].fiber_dim,
                    points[from].fiber_dim,
                )?,
            });
        }
        let mut actions = vec![];
        for af in &self.actions {
            let perm = af.perm.iter().map(|n| find(n)).collect::<Result<Vec<_>>>()?;
            let mut fiber_maps = vec![];
            for (x, raw) in af.fiber_maps.iter().enumerate() {
                if x >= perm.len() {
                    return Err(Error::InvalidArgument(format!(
                        "element '{}': too many fiber maps",
                        af.element
                    )));
                }
                fiber_maps.push(raw_to_mat(
                    raw,
                    points[perm[x]].fiber_dim,
                    points[x].fiber_dim,
                )?);
            }
            let mut components = vec![];
            for cf in &af.components {
                components.push(Component {
                    points: cf.points.iter().map(|n| find(n)).collect::<Result<Vec<_>>>()?,
                    dim: cf.dim,
                    euler: cf.euler,
                    trace_f: cf.trace_f.map(unpair),
                    normal_dims: cf
                        .normal_dims
                        .as_ref()
                        .map(|v| v.iter().map(|nd| (nd.beta, nd.dim)).collect()),
                });
            }
            actions.push(ElementAction {
                element: af.element.clone(),
                perm,
                eps: af.eps.clone(),
                fiber_maps,
                fixed: af.fixed.clone(),
                components,
            });
        }
        Ok(MorseSystem {
            group,
            characters,
            points,
            instantons,
            actions,
            ambient_dim: self.ambient_dim,
        })
    }

    pub fn from_system(ms: &MorseSystem) -> MorseFile {
        let name = |i: usize| ms.points[i].name.clone();
        MorseFile {
            ambient_dim: ms.ambient_dim,
            group: if ms.group.order() > 1 {
                Some(GroupFile::from_parts(&ms.group, &ms.characters))
            } else {
                None
            },
            points: ms
                .points
                .iter()
                .map(|p| PointFile {
                    name: p.name.clone(),
                    ind: p.ind,
                    f: p.f,
                    fiber_dim: p.fiber_dim,
                    fiber_gram: mat_to_raw(&p.fiber_gram),
                })
                .collect(),
            instantons: ms
                .instantons
                .iter()
                .map(|ins| InstantonFile {
                    x: name(ins.from),
                    y: name(ins.to),
                    n_gamma: ins.sign,
                    transport: mat_to_raw(&ins.transport),
                })
                .collect(),
            actions: ms
                .actions
                .iter()
                .map(|a| ElementActionFile {
                    element: a.element.clone(),
                    perm: a.perm.iter().map(|&i| name(i)).collect(),
                    eps: a.eps.clone(),
                    fiber_maps: a.fiber_maps.iter().map(mat_to_raw).collect(),
                    fixed: a.fixed.clone(),
                    components: a
                        .components
                        .iter()
                        .map(|comp| ComponentFile {
                            points: comp.points.iter().map(|&i| name(i)).collect(),
                            dim: comp.dim,
                            euler: comp.euler,
                            trace_f: comp.trace_f.map(pair),
                            normal_dims: comp.normal_dims.as_ref().map(|v| {
                                v.iter()
                                    .map(|&(beta, dim)| NormalDimFile { beta, dim })
                                    .collect()
                            }),
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
pub struct GeometricFile {
    #[serde(default)]
    pub mq_integral: Option<[f64; 2]>,
    #[serde(default)]
    pub euler_log_integral: Option<[f64; 2]>,
    #[serde(default)]
    pub cs_integral: Option<[f64; 2]>,
    #[serde(default)]
    pub f_euler_integral: Option<[f64; 2]>,
}

impl GeometricFile {
    pub fn build(&self) -> GeometricInputs {
        let get = |o: Option<[f64; 2]>| o.map_or(c(0.0, 0.0), unpair);
        GeometricInputs {
            mq_integral: get(self.mq_integral),
            euler_log_integral: get(self.euler_log_integral),
            cs_integral: get(self.cs_integral),
            f_euler_integral: get(self.f_euler_integral),
        }
    }
}

pub fn load_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Json {
        path: path.display().to_string(),
        source: e,
    })
}

pub fn save_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Json {
        path: path.display().to_string(),
        source: e,
    })?;
    std::fs::write(path, text + "\n")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cochain::two_term;
    use crate::linalg::max_abs;
    use crate::morse::{circle_system, sphere_rotation_system};

    #[test]
    fn complex_round_trip() {
        let cplx = two_term(c(2.0, -0.75));
        let file = ComplexFile::from_complex(&cplx);
        let text = serde_json::to_string(&file).unwrap();
        let back: ComplexFile = serde_json::from_str(&text).unwrap();
        let rebuilt = back.build().unwrap();
        assert_eq!(rebuilt.dims, cplx.dims);
        assert!(max_abs(&(&rebuilt.d[0] - &cplx.d[0])) == 0.0);
        assert!(max_abs(&(&rebuilt.gram[0] - &cplx.gram[0])) == 0.0);
    }

    #[test]
    fn group_round_trip() {
        let group = FiniteGroup::s3();
        let table = CharacterTable::s3();
        let file = GroupFile::from_parts(&group, &table);
        let text = serde_json::to_string(&file).unwrap();
        let back: GroupFile = serde_json::from_str(&text).unwrap();
        let (g2, t2) = back.build().unwrap();
        assert_eq!(g2.elements, group.elements);
        assert_eq!(t2.irreps.len(), table.irreps.len());
    }

    #[test]
    fn morse_round_trip() {
        for ms in [circle_system(c(0.0, 1.0)), sphere_rotation_system(3)] {
            let file = MorseFile::from_system(&ms);
            let text = serde_json::to_string(&file).unwrap();
            let back: MorseFile = serde_json::from_str(&text).unwrap();
            let rebuilt = back.build().unwrap();
            rebuilt.validate().unwrap();
            assert_eq!(rebuilt.points.len(), ms.points.len());
            assert_eq!(rebuilt.instantons.len(), ms.instantons.len());
            for (a, b) in rebuilt.points.iter().zip(&ms.points) {
                assert!(max_abs(&(&a.fiber_gram - &b.fiber_gram)) == 0.0);
            }
        }
    }

    #[test]
    fn lossless_doubles() {
        let v = 0.1 + 0.2;
        let m = crate::linalg::eye(1).mapv(|z| z * c(v, 1.0 / 3.0));
        let raw = mat_to_raw(&m);
        let text = serde_json::to_string(&raw).unwrap();
        let back: RawMat = serde_json::from_str(&text).unwrap();
        let m2 = raw_to_mat(&back, 1, 1).unwrap();
        assert_eq!(m[(0, 0)], m2[(0, 0)]);
    }

    #[test]
    fn shape_mismatch_reported() {
        let raw: RawMat = vec![vec![[1.0, 0.0]]];
        assert!(raw_to_mat(&raw, 2, 1).is_err());
        assert!(raw_to_mat(&vec![], 1, 1).is_err());
        assert!(raw_to_mat(&vec![], 0, 3).is_ok());
    }
}

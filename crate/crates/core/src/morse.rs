//! Combinatorial Thom-Smale data: critical points with coefficient fibers,
//! signed instantons with parallel transports, a finite group acting on the
//! cells, and per-element fixed-point records. The geometric inputs (signs,
//! transports, rotation angles) are data, not computed; d^2 = 0 and the
//! index/splitting identities are the consistency gates.

use serde::{Deserialize, Serialize};

use crate::cochain::{BilinearComplex, ComplexAction};
use crate::error::{Error, Result};
use crate::groups::{CharacterTable, FiniteGroup};
use crate::linalg::{block_diag, c, max_abs, transpose, zeros, CMat, C};
use crate::torsion::AnomalyPoint;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NormalAngle {
    /// beta in (0, pi]
    pub beta: f64,
    pub dim_n: usize,
    pub n_plus: usize,
    pub n_minus: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FixedData {
    pub fixed: bool,
    #[serde(default)]
    pub ind_g: usize,
    #[serde(default)]
    pub normal_angles: Vec<NormalAngle>,
}

#[derive(Debug, Clone)]
pub struct MorsePoint {
    pub name: String,
    pub ind: usize,
    pub f: f64,
    pub fiber_dim: usize,
    pub fiber_gram: CMat,
}

#[derive(Debug, Clone)]
pub struct Instanton {
    /// index of the upper point x, with ind(x) = ind(y) + 1
    pub from: usize,
    /// index of the lower point y
    pub to: usize,
    /// n_gamma, +1 or -1
    pub sign: i32,
    /// parallel transport F_x -> F_y, a fiber_dim(y) x fiber_dim(x) matrix
    pub transport: CMat,
}

#[derive(Debug, Clone)]
pub struct Component {
    /// indices of the fixed critical points lying on this component
    pub points: Vec<usize>,
    /// dim M_{g,j}
    pub dim: usize,
    /// chi(M_{g,j})
    pub euler: i64,
    /// Tr_F[g] along the component; derived from the fiber maps when absent
    pub trace_f: Option<C>,
    /// (beta_k, dim N^{beta_k}) over the component; derived when absent
    pub normal_dims: Option<Vec<(f64, usize)>>,
}

#[derive(Debug, Clone)]
pub struct ElementAction {
    pub element: String,
    /// cell permutation x -> gx
    pub perm: Vec<usize>,
    /// eps_g(x)
    pub eps: Vec<i32>,
    /// fiber map F_x -> F_{gx}
    pub fiber_maps: Vec<CMat>,
    pub fixed: Vec<FixedData>,
    pub components: Vec<Component>,
}

#[derive(Debug, Clone)]
pub struct MorseSystem {
    pub group: FiniteGroup,
    pub characters: CharacterTable,
    pub points: Vec<MorsePoint>,
    pub instantons: Vec<Instanton>,
    pub actions: Vec<ElementAction>,
    /// n = dim M
    pub ambient_dim: usize,
}

/// Where each critical fiber sits inside the graded cochain spaces.
#[derive(Debug, Clone)]
pub struct Layout {
    pub dims: Vec<usize>,
    /// point indices per degree, in declaration order
    pub by_degree: Vec<Vec<usize>>,
    /// (degree, offset within the degree block) per point
    pub position: Vec<(usize, usize)>,
}

pub fn layout(ms: &MorseSystem) -> Layout {
    let degrees = ms.points.iter().map(|p| p.ind).max().map_or(1, |m| m + 1);
    let mut by_degree = vec![vec![]; degrees];
    for (i, p) in ms.points.iter().enumerate() {
        by_degree[p.ind].push(i);
    }
    let mut position = vec![(0usize, 0usize); ms.points.len()];
    let mut dims = vec![0usize; degrees];
    for (deg, pts) in by_degree.iter().enumerate() {
        let mut off = 0;
        for &i in pts {
            position[i] = (deg, off);
            off += ms.points[i].fiber_dim;
        }
        dims[deg] = off;
    }
    Layout { dims, by_degree, position }
}

const GRAM_TOL: f64 = 1e-9;

impl MorseSystem {
    pub fn action(&self, element: &str) -> Result<&ElementAction> {
        self.actions
            .iter()
            .find(|a| a.element == element)
            .ok_or_else(|| Error::Morse(format!("no action data for element '{element}'")))
    }

    pub fn validate(&self) -> Result<()> {
        self.group.validate()?;
        self.characters.validate(&self.group)?;
        let np = self.points.len();
        for (i, p) in self.points.iter().enumerate() {
            if p.fiber_gram.nrows() != p.fiber_dim || p.fiber_gram.ncols() != p.fiber_dim {
                return Err(Error::Morse(format!(
                    "point '{}': fiber form is {}x{}, expected {}",
                    p.name,
                    p.fiber_gram.nrows(),
                    p.fiber_gram.ncols(),
                    p.fiber_dim
                )));
            }
            let asym = max_abs(&(&p.fiber_gram - &transpose(&p.fiber_gram)));
            if asym > GRAM_TOL * max_abs(&p.fiber_gram).max(1.0) {
                return Err(Error::Morse(format!(
                    "point '{}': fiber form is not symmetric (residual {asym:.3e})",
                    p.name
                )));
            }
            let _ = crate::linalg::inverse(&p.fiber_gram).map_err(|_| {
                Error::Morse(format!("point '{}': fiber form is singular", p.name))
            })?;
            let _ = i;
        }
        for (k, ins) in self.instantons.iter().enumerate() {
            if ins.from >= np || ins.to >= np {
                return Err(Error::Morse(format!("instanton {k}: point index out of range")));
            }
            let (x, y) = (&self.points[ins.from], &self.points[ins.to]);
            if x.ind != y.ind + 1 {
                return Err(Error::Morse(format!(
                    "instanton {k}: connects ind {} to ind {}, expected a drop of 1",
                    x.ind, y.ind
                )));
            }
            if ins.sign != 1 && ins.sign != -1 {
                return Err(Error::Morse(format!("instanton {k}: n_gamma must be +1 or -1")));
            }
            if ins.transport.nrows() != y.fiber_dim || ins.transport.ncols() != x.fiber_dim {
                return Err(Error::Morse(format!(
                    "instanton {k}: transport is {}x{}, expected {}x{}",
                    ins.transport.nrows(),
                    ins.transport.ncols(),
                    y.fiber_dim,
                    x.fiber_dim
                )));
            }
        }
        for g in &self.group.elements {
            let act = self.action(g)?;
            self.validate_action(act)?;
        }
        // d^2 = 0 is the hard consistency gate on the instanton data
        let complex = build_thom_smale(self)?;
        complex.validate()?;
        Ok(())
    }

    fn validate_action(&self, act: &ElementAction) -> Result<()> {
        let np = self.points.len();
        if act.perm.len() != np || act.eps.len() != np || act.fiber_maps.len() != np
            || act.fixed.len() != np
        {
            return Err(Error::Morse(format!(
                "element '{}': per-point data length mismatch",
                act.element
            )));
        }
        let mut seen = vec![false; np];
        for (x, &gx) in act.perm.iter().enumerate() {
            if gx >= np || seen[gx] {
                return Err(Error::Morse(format!(
                    "element '{}': cell map is not a permutation",
                    act.element
                )));
            }
            seen[gx] = true;
            let (p, q) = (&self.points[x], &self.points[gx]);
            if p.ind != q.ind {
                return Err(Error::Morse(format!(
                    "element '{}': maps '{}' (ind {}) to '{}' (ind {})",
                    act.element, p.name, p.ind, q.name, q.ind
                )));
            }
            if (p.f - q.f).abs() > 1e-12 * p.f.abs().max(1.0) {
                return Err(Error::Morse(format!(
                    "element '{}': f is not constant on the orbit of '{}'",
                    act.element, p.name
                )));
            }
            if act.eps[x] != 1 && act.eps[x] != -1 {
                return Err(Error::Morse(format!(
                    "element '{}': eps at '{}' must be +1 or -1",
                    act.element, p.name
                )));
            }
            let m = &act.fiber_maps[x];
            if m.nrows() != q.fiber_dim || m.ncols() != p.fiber_dim {
                return Err(Error::Morse(format!(
                    "element '{}': fiber map at '{}' has shape {}x{}",
                    act.element,
                    p.name,
                    m.nrows(),
                    m.ncols()
                )));
            }
            // form invariance: rho^T b^{F_gx} rho = b^{F_x}
            let pulled = transpose(m).dot(&q.fiber_gram).dot(m);
            let res = max_abs(&(&pulled - &p.fiber_gram));
            if res > GRAM_TOL * max_abs(&p.fiber_gram).max(1.0) {
                return Err(Error::Morse(format!(
                    "element '{}': fiber map at '{}' does not intertwine the fiber forms \
                     (residual {res:.3e})",
                    act.element, p.name
                )));
            }
            let fd = &act.fixed[x];
            if fd.fixed != (gx == x) {
                return Err(Error::Morse(format!(
                    "element '{}': fixed flag at '{}' disagrees with the cell map",
                    act.element, p.name
                )));
            }
            if fd.fixed {
                let mut n_minus_total = 0;
                for (j, na) in fd.normal_angles.iter().enumerate() {
                    if !(na.beta > 0.0 && na.beta <= std::f64::consts::PI + 1e-12) {
                        return Err(Error::Morse(format!(
                            "element '{}', point '{}', angle {j}: beta must lie in (0, pi]",
                            act.element, p.name
                        )));
                    }
                    if na.n_plus + na.n_minus != na.dim_n {
                        return Err(Error::Morse(format!(
                            "element '{}', point '{}', angle {j}: n_+ + n_- != dim N",
                            act.element, p.name
                        )));
                    }
                    if (na.beta - std::f64::consts::PI).abs() > 1e-12
                        && (na.n_plus % 2 != 0 || na.n_minus % 2 != 0)
                    {
                        return Err(Error::Morse(format!(
                            "element '{}', point '{}', angle {j}: counts at beta != pi \
                             must be even",
                            act.element, p.name
                        )));
                    }
                    n_minus_total += na.n_minus;
                }
                if fd.ind_g + n_minus_total != p.ind {
                    return Err(Error::Morse(format!(
                        "element '{}', point '{}': ind = {} but ind_g + sum n_- = {}",
                        act.element,
                        p.name,
                        p.ind,
                        fd.ind_g + n_minus_total
                    )));
                }
            }
        }
        // components partition the fixed points
        let mut assigned = vec![false; np];
        for (j, comp) in act.components.iter().enumerate() {
            for &x in &comp.points {
                if x >= np || !act.fixed[x].fixed || assigned[x] {
                    return Err(Error::Morse(format!(
                        "element '{}': component {j} has an invalid or repeated point",
                        act.element
                    )));
                }
                assigned[x] = true;
            }
            // Tr_F[g] constant over the component
            let traces: Vec<C> = comp
                .points
                .iter()
                .map(|&x| crate::linalg::trace(&act.fiber_maps[x]))
                .collect();
            if let Some(&t0) = traces.first() {
                for &t in &traces[1..] {
                    if (t - t0).norm() > 1e-9 * t0.norm().max(1.0) {
                        return Err(Error::Morse(format!(
                            "element '{}': Tr_F[g] varies over component {j}",
                            act.element
                        )));
                    }
                }
                if let Some(tf) = comp.trace_f {
                    if (tf - t0).norm() > 1e-9 * t0.norm().max(1.0) {
                        return Err(Error::Morse(format!(
                            "element '{}': declared trace on component {j} disagrees \
                             with the fiber maps",
                            act.element
                        )));
                    }
                }
            } else if comp.trace_f.is_none() {
                return Err(Error::Morse(format!(
                    "element '{}': component {j} has no points and no declared trace",
                    act.element
                )));
            }
        }
        for x in 0..np {
            if act.fixed[x].fixed && !assigned[x] {
                return Err(Error::Morse(format!(
                    "element '{}': fixed point '{}' belongs to no component",
                    act.element, self.points[x].name
                )));
            }
        }
        Ok(())
    }
}

impl Component {
    pub fn trace(&self, act: &ElementAction) -> C {
        match self.trace_f {
            Some(t) => t,
            None => crate::linalg::trace(&act.fiber_maps[self.points[0]]),
        }
    }

    /// (beta_k, dim N^{beta_k}) for the component; explicit metadata wins,
    /// otherwise read off any point (validated constant along components by
    /// the fixed-point structure).
    pub fn angle_dims(&self, act: &ElementAction) -> Vec<(f64, usize)> {
        if let Some(nd) = &self.normal_dims {
            return nd.clone();
        }
        match self.points.first() {
            Some(&x) => act.fixed[x]
                .normal_angles
                .iter()
                .map(|na| (na.beta, na.dim_n))
                .collect(),
            None => vec![],
        }
    }
}

/// Cochain complex C^*(W^u, F) with the block-diagonal fiber form and, when
/// the group is nontrivial, the signed-permutation action. The cochain
/// differential is the transpose of the chain differential in the dual
/// bases W^u(x)^*.
pub fn build_thom_smale(ms: &MorseSystem) -> Result<BilinearComplex> {
    let lay = layout(ms);
    let n = lay.dims.len();
    let mut d = vec![];
    for i in 0..n - 1 {
        let mut block = zeros(lay.dims[i + 1], lay.dims[i]);
        for ins in &ms.instantons {
            let (xdeg, xoff) = lay.position[ins.from];
            let (ydeg, yoff) = lay.position[ins.to];
            if ydeg != i {
                continue;
            }
            debug_assert_eq!(xdeg, i + 1);
            let t = transpose(&ins.transport).mapv(|z| z * c(ins.sign as f64, 0.0));
            for r in 0..t.nrows() {
                for cc in 0..t.ncols() {
                    block[(xoff + r, yoff + cc)] += t[(r, cc)];
                }
            }
        }
        d.push(block);
    }
    let mut gram = vec![];
    for pts in &lay.by_degree {
        let blocks: Vec<&CMat> = pts.iter().map(|&i| &ms.points[i].fiber_gram).collect();
        gram.push(block_diag(&blocks));
    }
    let action = if ms.group.order() > 1 {
        Some(ComplexAction {
            group: ms.group.clone(),
            characters: ms.characters.clone(),
            matrices: build_group_action(ms)?,
        })
    } else {
        None
    };
    let complex = BilinearComplex { dims: lay.dims, d, gram, action };
    complex.validate().map_err(|e| {
        Error::Morse(format!("Thom-Smale complex fails validation: {e}"))
    })?;
    Ok(complex)
}

/// Per-element, per-degree matrices of the dual action
/// g(W^u(x)^*) = eps_g(x) W^u(gx)^* tensored with the fiber maps.
pub fn build_group_action(ms: &MorseSystem) -> Result<Vec<Vec<CMat>>> {
    let lay = layout(ms);
    let mut matrices = vec![];
    for g in &ms.group.elements {
        let act = ms.action(g)?;
        let mut per_degree = vec![];
        for (deg, dim) in lay.dims.iter().enumerate() {
            let mut m = zeros(*dim, *dim);
            for &x in &lay.by_degree[deg] {
                let gx = act.perm[x];
                let (_, xoff) = lay.position[x];
                let (_, gxoff) = lay.position[gx];
                let fm = &act.fiber_maps[x];
                for r in 0..fm.nrows() {
                    for cc in 0..fm.ncols() {
                        m[(gxoff + r, xoff + cc)] =
                            fm[(r, cc)] * c(act.eps[x] as f64, 0.0);
                    }
                }
            }
            per_degree.push(m);
        }
        matrices.push(per_degree);
    }
    Ok(matrices)
}

#[derive(Debug, Clone, Copy)]
pub struct FixedPointInvariants {
    pub chi_g: C,
    pub chi_prime_g: C,
    pub trs_f: C,
}

/// The three sums of the fixed-point data: chi_g(F), chi~'_g(F) and
/// Tr_s^{B_g}[f], each weighted by the per-component Tr_F[g].
pub fn fixed_point_invariants(ms: &MorseSystem, element: &str) -> Result<FixedPointInvariants> {
    let act = ms.action(element)?;
    let mut chi_g = c(0.0, 0.0);
    let mut chi_prime_g = c(0.0, 0.0);
    let mut trs_f = c(0.0, 0.0);
    for comp in &act.components {
        let tr = comp.trace(act);
        for &x in &comp.points {
            let fd = &act.fixed[x];
            let sign = if fd.ind_g % 2 == 0 { 1.0 } else { -1.0 };
            chi_g += tr * c(sign, 0.0);
            chi_prime_g += tr * c(sign * ms.points[x].ind as f64, 0.0);
            trs_f += tr * c(sign * ms.points[x].f, 0.0);
        }
    }
    Ok(FixedPointInvariants { chi_g, chi_prime_g, trs_f })
}

/// Fiber forms replaced by e^{-2 T f(x)} b^{F_x}; everything else unchanged.
pub fn witten_deform(ms: &MorseSystem, t: f64) -> MorseSystem {
    let mut out = ms.clone();
    for p in &mut out.points {
        let scale = c((-2.0 * t * p.f).exp(), 0.0);
        p.fiber_gram = p.fiber_gram.mapv(|z| z * scale);
    }
    out
}

/// The per-fixed-point data feeding the Theorem-2.5 ratio between `ms` and a
/// second system carrying the perturbed fiber forms.
pub fn anomaly_points(
    ms: &MorseSystem,
    ms_prime: &MorseSystem,
    element: &str,
) -> Result<Vec<AnomalyPoint>> {
    if ms.points.len() != ms_prime.points.len() {
        return Err(Error::Morse("systems have different critical sets".into()));
    }
    let act = ms.action(element)?;
    let mut out = vec![];
    for (x, fd) in act.fixed.iter().enumerate() {
        if !fd.fixed {
            continue;
        }
        out.push(AnomalyPoint {
            ind_g: fd.ind_g,
            gram: ms.points[x].fiber_gram.clone(),
            gram_prime: ms_prime.points[x].fiber_gram.clone(),
            g_fiber: act.fiber_maps[x].clone(),
        });
    }
    Ok(out)
}

fn trivial_fixed(ind: usize) -> FixedData {
    FixedData { fixed: true, ind_g: ind, normal_angles: vec![] }
}

fn identity_action(points: &[MorsePoint], components: Vec<Component>) -> ElementAction {
    ElementAction {
        element: "g0".into(),
        perm: (0..points.len()).collect(),
        eps: vec![1; points.len()],
        fiber_maps: points.iter().map(|p| crate::linalg::eye(p.fiber_dim)).collect(),
        fixed: points.iter().map(|p| trivial_fixed(p.ind)).collect(),
        components,
    }
}

/// The circle with a rank-1 flat bundle of holonomy mu: min and max, two
/// instantons of opposite sign, transports 1 and mu.
pub fn circle_system(mu: C) -> MorseSystem {
    let points = vec![
        MorsePoint {
            name: "min".into(),
            ind: 0,
            f: 0.0,
            fiber_dim: 1,
            fiber_gram: crate::linalg::eye(1),
        },
        MorsePoint {
            name: "max".into(),
            ind: 1,
            f: 1.0,
            fiber_dim: 1,
            fiber_gram: crate::linalg::eye(1),
        },
    ];
    let instantons = vec![
        Instanton {
            from: 1,
            to: 0,
            sign: 1,
            transport: crate::linalg::eye(1),
        },
        Instanton {
            from: 1,
            to: 0,
            sign: -1,
            transport: crate::linalg::eye(1).mapv(|z| z * mu),
        },
    ];
    let components = vec![Component {
        points: vec![0, 1],
        dim: 1,
        euler: 0,
        trace_f: None,
        normal_dims: None,
    }];
    let actions = vec![identity_action(&points, components)];
    MorseSystem {
        group: FiniteGroup::cyclic(1),
        characters: CharacterTable::cyclic(1),
        points,
        instantons,
        actions,
        ambient_dim: 1,
    }
}

/// S^2 with the height function under the rotation by beta about the axis:
/// the Z/n rotation subgroup element with rotation angle beta = 2 pi / n.
/// Both poles are fixed with ind_g = 0; the north pole carries n_- = 2.
pub fn sphere_rotation_system(n: usize) -> MorseSystem {
    assert!(n >= 2, "rotation order must be at least 2");
    let beta = 2.0 * std::f64::consts::PI / n as f64;
    let points = vec![
        MorsePoint {
            name: "south".into(),
            ind: 0,
            f: 0.0,
            fiber_dim: 1,
            fiber_gram: crate::linalg::eye(1),
        },
        MorsePoint {
            name: "north".into(),
            ind: 2,
            f: 1.0,
            fiber_dim: 1,
            fiber_gram: crate::linalg::eye(1),
        },
    ];
    let group = FiniteGroup::cyclic(n);
    let characters = CharacterTable::cyclic(n);
    let mut actions = vec![];
    for (k, g) in group.elements.iter().enumerate() {
        let (fixed, components);
        if k == 0 {
            fixed = vec![trivial_fixed(0), trivial_fixed(2)];
            components = vec![Component {
                points: vec![0, 1],
                dim: 2,
                euler: 2,
                trace_f: None,
                normal_dims: Some(vec![]),
            }];
        } else {
            let angle = {
                // rotation by k beta, folded into (0, pi]
                let mut a = (k as f64 * beta) % (2.0 * std::f64::consts::PI);
                if a > std::f64::consts::PI {
                    a = 2.0 * std::f64::consts::PI - a;
                }
                a
            };
            fixed = vec![
                FixedData {
                    fixed: true,
                    ind_g: 0,
                    normal_angles: vec![NormalAngle {
                        beta: angle,
                        dim_n: 2,
                        n_plus: 2,
                        n_minus: 0,
                    }],
                },
                FixedData {
                    fixed: true,
                    ind_g: 0,
                    normal_angles: vec![NormalAngle {
                        beta: angle,
                        dim_n: 2,
                        n_plus: 0,
                        n_minus: 2,
                    }],
                },
            ];
            components = vec![
                Component {
                    points: vec![0],
                    dim: 0,
                    euler: 1,
                    trace_f: None,
                    normal_dims: None,
                },
                Component {
                    points: vec![1],
                    dim: 0,
                    euler: 1,
                    trace_f: None,
                    normal_dims: None,
                },
            ];
        }
        actions.push(ElementAction {
            element: g.clone(),
            perm: vec![0, 1],
            eps: vec![1, 1],
            fiber_maps: vec![crate::linalg::eye(1), crate::linalg::eye(1)],
            fixed,
            components,
        });
    }
    MorseSystem {
        group,
        characters,
        points,
        instantons: vec![],
        actions,
        ambient_dim: 2,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{eye, ONE};
    use crate::torsion::plain_torsion;

    #[test]
    fn single_point_trivial_complex() {
        let points = vec![MorsePoint {
            name: "p".into(),
            ind: 0,
            f: 0.0,
            fiber_dim: 1,
            fiber_gram: eye(1),
        }];
        let comp = vec![Component {
            points: vec![0],
            dim: 0,
            euler: 1,
            trace_f: None,
            normal_dims: None,
        }];
        let ms = MorseSystem {
            group: FiniteGroup::cyclic(1),
            characters: CharacterTable::cyclic(1),
            points: points.clone(),
            instantons: vec![],
            actions: vec![identity_action(&points, comp)],
            ambient_dim: 0,
        };
        ms.validate().unwrap();
        let cplx = build_thom_smale(&ms).unwrap();
        assert_eq!(cplx.dims, vec![1]);
        assert!(cplx.d.is_empty());
    }

    #[test]
    fn circle_trivial_bundle_betti() {
        let ms = circle_system(ONE);
        ms.validate().unwrap();
        let cplx = build_thom_smale(&ms).unwrap();
        assert!(max_abs(&cplx.d[0]) < 1e-15);
        let h = crate::cochain::cohomology_basis(&cplx).unwrap();
        assert_eq!(h.betti, vec![1, 1]);
    }

    #[test]
    fn circle_holonomy_differential_and_torsion() {
        for mu in [c(2.0, 0.0), c(0.0, 1.0), c(-3.0, 0.5)] {
            let ms = circle_system(mu);
            ms.validate().unwrap();
            let cplx = build_thom_smale(&ms).unwrap();
            assert!((cplx.d[0][(0, 0)] - (ONE - mu)).norm() < 1e-14);
            let (t, _) = plain_torsion(&cplx).unwrap();
            let expect = (ONE - mu).powi(-2);
            assert!((t - expect).norm() < 1e-10 * expect.norm());
        }
    }

    #[test]
    fn bad_index_drop_rejected() {
        let mut ms = circle_system(c(2.0, 0.0));
        ms.points[1].ind = 2;
        assert!(ms.validate().is_err());
    }

    #[test]
    fn splitting_identity_enforced() {
        let mut ms = sphere_rotation_system(3);
        // corrupt: north claims ind_g = 1 so ind_g + n_- = 3 != 2
        ms.actions[1].fixed[1].ind_g = 1;
        assert!(ms.validate().is_err());
    }

    #[test]
    fn odd_counts_at_non_pi_angle_rejected() {
        let mut ms = sphere_rotation_system(3);
        ms.actions[1].fixed[0].normal_angles[0] = NormalAngle {
            beta: 2.0 * std::f64::consts::PI / 3.0,
            dim_n: 2,
            n_plus: 1,
            n_minus: 1,
        };
        // also breaks the splitting identity at the south pole? ind 0 = ind_g 0 + n_- 1 fails
        assert!(ms.validate().is_err());
    }

    #[test]
    fn circle_fixed_point_invariants() {
        let ms = circle_system(ONE);
        let inv = fixed_point_invariants(&ms, "g0").unwrap();
        assert!((inv.chi_g - c(0.0, 0.0)).norm() < 1e-14);
        assert!((inv.chi_prime_g - c(-1.0, 0.0)).norm() < 1e-14);
        assert!((inv.trs_f - c(-1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn sphere_rotation_invariants() {
        let ms = sphere_rotation_system(4);
        ms.validate().unwrap();
        let inv = fixed_point_invariants(&ms, "g1").unwrap();
        assert!((inv.chi_g - c(2.0, 0.0)).norm() < 1e-14);
        assert!((inv.chi_prime_g - c(2.0, 0.0)).norm() < 1e-14);
        assert!((inv.trs_f - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn witten_deform_composes() {
        let ms = circle_system(c(2.0, 0.0));
        let a = witten_deform(&witten_deform(&ms, 0.3), 0.7);
        let b = witten_deform(&ms, 1.0);
        for (p, q) in a.points.iter().zip(&b.points) {
            assert!(max_abs(&(&p.fiber_gram - &q.fiber_gram)) < 1e-15);
        }
        let unchanged = witten_deform(&ms, 0.0);
        for (p, q) in unchanged.points.iter().zip(&ms.points) {
            assert!(max_abs(&(&p.fiber_gram - &q.fiber_gram)) == 0.0);
        }
    }

    #[test]
    fn z2_swap_action_commutes() {
        // two index-0 points swapped by Z/2, no instantons
        let points = vec![
            MorsePoint {
                name: "a".into(),
                ind: 0,
                f: 0.0,
                fiber_dim: 1,
                fiber_gram: eye(1),
            },
            MorsePoint {
                name: "b".into(),
                ind: 0,
                f: 0.0,
                fiber_dim: 1,
                fiber_gram: eye(1),
            },
        ];
        let group = FiniteGroup::cyclic(2);
        let characters = CharacterTable::cyclic(2);
        let id_comp = vec![Component {
            points: vec![0, 1],
            dim: 0,
            euler: 2,
            trace_f: None,
            normal_dims: None,
        }];
        let swap = ElementAction {
            element: "g1".into(),
            perm: vec![1, 0],
            eps: vec![1, 1],
            fiber_maps: vec![eye(1), eye(1)],
            fixed: vec![
                FixedData { fixed: false, ind_g: 0, normal_angles: vec![] },
                FixedData { fixed: false, ind_g: 0, normal_angles: vec![] },
            ],
            components: vec![],
        };
        let mut id_act = identity_action(&points, id_comp);
        id_act.element = "g0".into();
        let ms = MorseSystem {
            group,
            characters,
            points,
            instantons: vec![],
            actions: vec![id_act, swap],
            ambient_dim: 0,
        };
        ms.validate().unwrap();
        let mats = build_group_action(&ms).unwrap();
        assert!((mats[1][0][(1, 0)] - ONE).norm() < 1e-15);
        assert!((mats[1][0][(0, 1)] - ONE).norm() < 1e-15);
        let cplx = build_thom_smale(&ms).unwrap();
        cplx.validate().unwrap();
    }
}

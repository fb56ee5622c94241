//! Seeded random instances for the property suites: equivariant complexes
//! with exact d^2 = 0 and exact equivariance by construction, two-degree
//! Morse systems (trivial and Z/2 symmetry), and invariance-preserving
//! fiber-form perturbations. All randomness flows from explicit 64-bit
//! seeds through ChaCha8.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cochain::{BilinearComplex, ComplexAction};
use crate::error::{Error, Result};
use crate::groups::{CharacterTable, FiniteGroup, GroupRepresentation};
use crate::linalg::{c, column_space_qr, conjugate_transpose, eye, transpose, zeros, CMat, C};
use crate::morse::{
    Component, ElementAction, FixedData, Instanton, MorsePoint, MorseSystem,
};

fn rand_c(rng: &mut ChaCha8Rng) -> C {
    c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
}

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> CMat {
    CMat::from_shape_fn((rows, cols), |_| rand_c(rng))
}

fn random_unitary(rng: &mut ChaCha8Rng, n: usize) -> CMat {
    if n == 0 {
        return zeros(0, 0);
    }
    // QR of a Gaussian-style square matrix; full rank with probability 1
    column_space_qr(&random_matrix(rng, n, n), 1e-13)
}

fn random_symmetric(rng: &mut ChaCha8Rng, n: usize, norm: f64) -> CMat {
    let a = random_matrix(rng, n, n);
    let s = (&a + &transpose(&a)).mapv(|z| z * c(0.5, 0.0));
    let m = crate::linalg::max_abs(&s).max(1e-12);
    s.mapv(|z| z * c(norm / m, 0.0))
}

fn random_antisymmetric(rng: &mut ChaCha8Rng, n: usize, norm: f64) -> CMat {
    let a = random_matrix(rng, n, n);
    let s = (&a - &transpose(&a)).mapv(|z| z * c(0.5, 0.0));
    let m = crate::linalg::max_abs(&s).max(1e-12);
    s.mapv(|z| z * c(norm / m, 0.0))
}

/// Plain Taylor series; adequate for the small, small-norm matrices used
/// here (inputs are scaled to norm at most ~1).
pub fn matrix_exp(a: &CMat) -> CMat {
    let n = a.nrows();
    let mut sum = eye(n);
    let mut term = eye(n);
    for k in 1..=24 {
        term = term.dot(a).mapv(|z| z / c(k as f64, 0.0));
        sum = &sum + &term;
    }
    sum
}

fn kron(a: &CMat, b: &CMat) -> CMat {
    let (ar, ac) = (a.nrows(), a.ncols());
    let (br, bc) = (b.nrows(), b.ncols());
    let mut out = zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            for k in 0..br {
                for l in 0..bc {
                    out[(i * br + k, j * bc + l)] = a[(i, j)] * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Random complex with the given dimensions: differentials with random
/// ranks built from a model complex conjugated by unitaries (d^2 = 0 up to
/// rounding in well-conditioned products), symmetric forms near the
/// identity. With a group, each degree is q_i copies of the regular
/// representation plus a trivially-acted remainder, and the differential is
/// block-diagonal across the two parts, so equivariance is exact.
pub fn generate_random_complex(
    seed: u64,
    dims: &[usize],
    group: Option<(&FiniteGroup, &CharacterTable)>,
) -> Result<BilinearComplex> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match group {
        None => random_plain_complex(&mut rng, dims),
        Some((g, table)) => {
            let m = g.order();
            let q: Vec<usize> = dims.iter().map(|&d| d / m).collect();
            let t: Vec<usize> = dims.iter().map(|&d| d % m).collect();
            if q.iter().all(|&x| x == 0) && t.iter().all(|&x| x == 0) {
                return Err(Error::InvalidArgument(
                    "requested an empty equivariant complex".into(),
                ));
            }
            let reg_part = random_plain_complex(&mut rng, &q)?;
            let triv_part = random_plain_complex(&mut rng, &t)?;
            let reg = GroupRepresentation::regular(g);
            let n = dims.len();
            let mut d = vec![];
            for i in 0..n.saturating_sub(1) {
                let top = kron(&reg_part.d[i], &eye(m));
                let mut block = zeros(dims[i + 1], dims[i]);
                let (tr, tc) = (top.nrows(), top.ncols());
                for r in 0..tr {
                    for cc in 0..tc {
                        block[(r, cc)] = top[(r, cc)];
                    }
                }
                for r in 0..triv_part.d[i].nrows() {
                    for cc in 0..triv_part.d[i].ncols() {
                        block[(tr + r, tc + cc)] = triv_part.d[i][(r, cc)];
                    }
                }
                d.push(block);
            }
            let mut gram = vec![];
            let mut matrices = vec![vec![]; m];
            for i in 0..n {
                gram.push(crate::linalg::block_diag(&[
                    &kron(&reg_part.gram[i], &eye(m)),
                    &triv_part.gram[i],
                ]));
                for (k, per) in matrices.iter_mut().enumerate() {
                    per.push(crate::linalg::block_diag(&[
                        &kron(&eye(q[i]), &reg.matrices[k]),
                        &eye(t[i]),
                    ]));
                }
            }
            let cplx = BilinearComplex {
                dims: dims.to_vec(),
                d,
                gram,
                action: Some(ComplexAction {
                    group: g.clone(),
                    characters: table.clone(),
                    matrices,
                }),
            };
            cplx.validate()?;
            Ok(cplx)
        }
    }
}

fn random_plain_complex(rng: &mut ChaCha8Rng, dims: &[usize]) -> Result<BilinearComplex> {
    let n = dims.len();
    if n == 0 {
        return Ok(BilinearComplex { dims: vec![], d: vec![], gram: vec![], action: None });
    }
    // ranks: r_i = rank d_i with r_{i-1} + r_i <= dims[i], r_i <= dims[i+1]
    let mut ranks = vec![0usize; n.saturating_sub(1)];
    let mut prev = 0usize;
    for i in 0..n.saturating_sub(1) {
        let cap = (dims[i] - prev).min(dims[i + 1]);
        ranks[i] = if cap == 0 { 0 } else { rng.gen_range(0..=cap) };
        prev = ranks[i];
    }
    let v: Vec<CMat> = dims.iter().map(|&d| random_unitary(rng, d)).collect();
    let mut d = vec![];
    for i in 0..n.saturating_sub(1) {
        // model: last r_i source coordinates onto first r_i target ones,
        // with random nonzero scales
        let mut model = zeros(dims[i + 1], dims[i]);
        for k in 0..ranks[i] {
            let scale = rand_c(rng) + c(1.0, 0.0);
            model[(k, dims[i] - ranks[i] + k)] = scale;
        }
        d.push(v[i + 1].dot(&model).dot(&conjugate_transpose(&v[i])));
    }
    let gram = dims
        .iter()
        .map(|&dim| {
            let s = random_symmetric(rng, dim, 0.4);
            &eye(dim) + &s
        })
        .collect();
    Ok(BilinearComplex { dims: dims.to_vec(), d, gram, action: None })
}

/// Random two-degree Morse system with trivial symmetry: points of index 0
/// and 1, identity fiber forms, random instanton signs and transports.
/// d^2 = 0 holds vacuously with two degrees.
pub fn random_morse_system(seed: u64) -> MorseSystem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n0 = rng.gen_range(1..=3);
    let n1 = rng.gen_range(1..=3);
    // flat-bundle rank is constant on a connected base
    let fd = rng.gen_range(1..=2);
    let mut points = vec![];
    for k in 0..n0 {
        points.push(MorsePoint {
            name: format!("low{k}"),
            ind: 0,
            f: rng.gen::<f64>(),
            fiber_dim: fd,
            fiber_gram: eye(fd),
        });
    }
    for k in 0..n1 {
        points.push(MorsePoint {
            name: format!("high{k}"),
            ind: 1,
            f: 1.0 + rng.gen::<f64>(),
            fiber_dim: fd,
            fiber_gram: eye(fd),
        });
    }
    let mut instantons = vec![];
    for x in n0..n0 + n1 {
        for y in 0..n0 {
            if rng.gen::<f64>() < 0.7 {
                instantons.push(Instanton {
                    from: x,
                    to: y,
                    sign: if rng.gen::<bool>() { 1 } else { -1 },
                    transport: random_matrix(
                        &mut rng,
                        points[y].fiber_dim,
                        points[x].fiber_dim,
                    ),
                });
            }
        }
    }
    let components = vec![Component {
        points: (0..points.len()).collect(),
        dim: 1,
        euler: 0,
        trace_f: None,
        normal_dims: None,
    }];
    let identity = ElementAction {
        element: "g0".into(),
        perm: (0..points.len()).collect(),
        eps: vec![1; points.len()],
        fiber_maps: points.iter().map(|p| eye(p.fiber_dim)).collect(),
        fixed: points
            .iter()
            .map(|p| FixedData { fixed: true, ind_g: p.ind, normal_angles: vec![] })
            .collect(),
        components,
    };
    MorseSystem {
        group: FiniteGroup::cyclic(1),
        characters: CharacterTable::cyclic(1),
        points,
        instantons,
        actions: vec![identity],
        ambient_dim: 1,
    }
}

/// Random two-degree Morse system with a Z/2 action: some points are fixed
/// (fiber map +-identity), the rest come in swapped pairs with a random
/// complex-orthogonal fiber map; instantons are generated on orbit
/// representatives and pushed around the orbit with the transport and sign
/// rules that make the action a chain map.
pub fn random_z2_morse_system(seed: u64) -> MorseSystem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let group = FiniteGroup::cyclic(2);
    let characters = CharacterTable::cyclic(2);
    let mut points = vec![];
    let mut perm = vec![];
    let mut fiber_maps: Vec<CMat> = vec![];
    let mut eps = vec![];
    let mut fixed_flags = vec![];
    // flat-bundle rank is constant on a connected base
    let fd = rng.gen_range(1..=2);
    for ind in 0..2usize {
        let fixed_count = rng.gen_range(1..=2);
        let pair_count = rng.gen_range(0..=1);
        let f_level = ind as f64 + rng.gen::<f64>() * 0.5;
        for k in 0..fixed_count {
            let me = points.len();
            points.push(MorsePoint {
                name: format!("fix{ind}{k}"),
                ind,
                f: f_level + 0.1 * k as f64,
                fiber_dim: fd,
                fiber_gram: eye(fd),
            });
            perm.push(me);
            let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
            fiber_maps.push(eye(fd).mapv(|z| z * c(sign, 0.0)));
            // ind_g = ind here: g fixes the unstable cell pointwise, so the
            // orientation sign is forced to +1
            eps.push(1);
            fixed_flags.push(true);
        }
        for k in 0..pair_count {
            let a = points.len();
            points.push(MorsePoint {
                name: format!("orb{ind}{k}a"),
                ind,
                f: f_level + 0.3 + 0.1 * k as f64,
                fiber_dim: fd,
                fiber_gram: eye(fd),
            });
            points.push(MorsePoint {
                name: format!("orb{ind}{k}b"),
                ind,
                f: f_level + 0.3 + 0.1 * k as f64,
                fiber_dim: fd,
                fiber_gram: eye(fd),
            });
            perm.push(a + 1);
            perm.push(a);
            // complex orthogonal: exp of antisymmetric
            let phi = matrix_exp(&random_antisymmetric(&mut rng, fd, 0.6));
            let phi_inv = crate::linalg::inverse(&phi).expect("orthogonal map invertible");
            fiber_maps.push(phi);
            fiber_maps.push(phi_inv);
            let e = if rng.gen::<bool>() { 1 } else { -1 };
            eps.push(e);
            eps.push(e);
            fixed_flags.push(false);
            fixed_flags.push(false);
        }
    }
    // instantons on representatives, closed up under the action
    let np = points.len();
    let mut instantons = vec![];
    for x in 0..np {
        if points[x].ind != 1 {
            continue;
        }
        for y in 0..np {
            if points[y].ind != 0 || rng.gen::<f64>() < 0.4 {
                continue;
            }
            // skip if the orbit image was already generated
            let (gx, gy) = (perm[x], perm[y]);
            if (gx, gy) < (x, y) && instantons_has(&instantons, gx, gy) {
                continue;
            }
            if (gx, gy) == (x, y) {
                // both endpoints fixed: the block must be invariant under
                // eps * fiber-sign scaling at each end, so only matching
                // weights admit a nonzero instanton
                let wx = eps[x] as f64 * fiber_maps[x][(0, 0)].re.signum();
                let wy = eps[y] as f64 * fiber_maps[y][(0, 0)].re.signum();
                if (wx - wy).abs() > 0.5 {
                    continue;
                }
            }
            let tau = random_matrix(&mut rng, points[y].fiber_dim, points[x].fiber_dim);
            let sign: i32 = if rng.gen::<bool>() { 1 } else { -1 };
            instantons.push(Instanton { from: x, to: y, sign, transport: tau.clone() });
            if (gx, gy) != (x, y) {
                let pushed = fiber_maps[y]
                    .dot(&tau)
                    .dot(&crate::linalg::inverse(&fiber_maps[x]).expect("invertible"));
                instantons.push(Instanton {
                    from: gx,
                    to: gy,
                    sign: sign * eps[x] * eps[y],
                    transport: pushed,
                });
            }
        }
    }
    let id_action = ElementAction {
        element: "g0".into(),
        perm: (0..np).collect(),
        eps: vec![1; np],
        fiber_maps: points.iter().map(|p| eye(p.fiber_dim)).collect(),
        fixed: points
            .iter()
            .map(|p| FixedData { fixed: true, ind_g: p.ind, normal_angles: vec![] })
            .collect(),
        components: vec![Component {
            points: (0..np).collect(),
            dim: 1,
            euler: 0,
            trace_f: None,
            normal_dims: None,
        }],
    };
    let flip_fixed: Vec<FixedData> = (0..np)
        .map(|x| FixedData {
            fixed: fixed_flags[x],
            ind_g: points[x].ind,
            normal_angles: vec![],
        })
        .collect();
    let flip_components = (0..np)
        .filter(|&x| fixed_flags[x])
        .map(|x| Component {
            points: vec![x],
            dim: 0,
            euler: 1,
            trace_f: None,
            normal_dims: None,
        })
        .collect();
    let flip = ElementAction {
        element: "g1".into(),
        perm,
        eps,
        fiber_maps,
        fixed: flip_fixed,
        components: flip_components,
    };
    MorseSystem {
        group,
        characters,
        points,
        instantons,
        actions: vec![id_action, flip],
        ambient_dim: 1,
    }
}

fn instantons_has(list: &[Instanton], from: usize, to: usize) -> bool {
    list.iter().any(|i| i.from == from && i.to == to)
}

/// Homotopic perturbation of identity fiber forms: b'_x = exp(2 S_x) with
/// S_x symmetric, max-entry norm at most `norm`, averaged over the
/// stabilizer fiber maps and transported along orbits so the perturbed
/// forms stay invariant. Requires identity fiber forms.
pub fn perturb_fiber_grams(ms: &MorseSystem, seed: u64, norm: f64) -> Result<MorseSystem> {
    for p in &ms.points {
        if crate::linalg::max_abs(&(&p.fiber_gram - &eye(p.fiber_dim))) > 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "perturbation requires identity fiber forms; point '{}' differs",
                p.name
            )));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let np = ms.points.len();
    let mut assigned: Vec<Option<CMat>> = vec![None; np];
    for x in 0..np {
        if assigned[x].is_some() {
            continue;
        }
        let fd = ms.points[x].fiber_dim;
        let raw = random_symmetric(&mut rng, fd, norm);
        // average over the stabilizer of x acting by congruence
        let mut avg = zeros(fd, fd);
        let mut count = 0usize;
        for act in &ms.actions {
            if act.perm[x] == x {
                let phi = &act.fiber_maps[x];
                avg = &avg + &transpose(phi).dot(&raw).dot(phi);
                count += 1;
            }
        }
        let s = avg.mapv(|z| z / c(count as f64, 0.0));
        assigned[x] = Some(s.clone());
        // transport along the orbit: S_{gx} = phi S phi^T for orthogonal phi
        for act in &ms.actions {
            let gx = act.perm[x];
            if assigned[gx].is_none() {
                let phi = &act.fiber_maps[x];
                assigned[gx] = Some(phi.dot(&s).dot(&transpose(phi)));
            }
        }
    }
    let mut out = ms.clone();
    for (x, p) in out.points.iter_mut().enumerate() {
        let s = assigned[x].take().expect("orbit sweep covers every point");
        p.fiber_gram = matrix_exp(&s.mapv(|z| z * c(2.0, 0.0)));
    }
    Ok(out)
}

//! Property suites for the structural invariants: torsion covariance,
//! deformation composition, spectral bookkeeping, and special-function
//! identities, all over seeded random instances.

use proptest::prelude::*;

use torsion_forge::cochain::{cohomology_basis, euler_data, two_term};
use torsion_forge::comparison::digamma;
use torsion_forge::generator::{
    generate_random_complex, perturb_fiber_grams, random_morse_system, random_z2_morse_system,
};
use torsion_forge::groups::{CharacterTable, FiniteGroup};
use torsion_forge::linalg::{c, max_abs, C};
use torsion_forge::morse::{anomaly_points, build_thom_smale, circle_system, witten_deform};
use torsion_forge::spectral::{generalized_eigenspaces, rs_value, valid_cutoffs};
use torsion_forge::torsion::{
    equivariant_torsion, milnor_anomaly_ratio, plain_torsion,
};

fn close(a: C, b: C, tol: f64) -> bool {
    (a - b).norm() <= tol * b.norm().max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// A two-term acyclic complex (lambda) has torsion lambda^{-2}.
    #[test]
    fn two_term_torsion(re in -3.0f64..3.0, im in -3.0f64..3.0) {
        prop_assume!((re * re + im * im).sqrt() > 0.1);
        let lambda = c(re, im);
        let cx = two_term(lambda);
        let (v, _) = plain_torsion(&cx).unwrap();
        prop_assert!(close(v, lambda.powi(-2), 1e-10));
    }

    /// Circle with holonomy mu: torsion (1 - mu)^{-2} by both pipelines.
    #[test]
    fn circle_both_pipelines(re in -3.0f64..3.0, im in -3.0f64..3.0) {
        prop_assume!(((re - 1.0) * (re - 1.0) + im * im).sqrt() > 0.2);
        let mu = c(re, im);
        let expect = (c(1.0, 0.0) - mu).powi(-2);
        let cx = build_thom_smale(&circle_system(mu)).unwrap();
        let (v, h) = plain_torsion(&cx).unwrap();
        prop_assert!(close(v, expect, 1e-9));
        let sd = generalized_eigenspaces(&cx).unwrap();
        let a = valid_cutoffs(&sd, 1)[0];
        prop_assert!(close(rs_value(&cx, a, &h).unwrap(), expect, 1e-8));
    }

    /// Same seed, same complex: the generator is a pure function of its seed.
    #[test]
    fn generator_determinism(seed in any::<u64>()) {
        let g = FiniteGroup::cyclic(2);
        let t = CharacterTable::cyclic(2);
        let a = generate_random_complex(seed, &[3, 4, 2], Some((&g, &t))).unwrap();
        let b = generate_random_complex(seed, &[3, 4, 2], Some((&g, &t))).unwrap();
        for i in 0..a.d.len() {
            prop_assert!(max_abs(&(&a.d[i] - &b.d[i])) == 0.0);
        }
        for i in 0..a.gram.len() {
            prop_assert!(max_abs(&(&a.gram[i] - &b.gram[i])) == 0.0);
        }
    }

    /// Alternating dimension sum equals the alternating betti sum.
    #[test]
    fn euler_characteristic_consistency(seed in any::<u64>()) {
        let cx = generate_random_complex(seed, &[3, 4, 2], None).unwrap();
        let h = cohomology_basis(&cx).unwrap();
        let mut from_dims = 0i64;
        let mut from_betti = 0i64;
        for (i, (&d, &b)) in cx.dims.iter().zip(&h.betti).enumerate() {
            let s = if i % 2 == 0 { 1 } else { -1 };
            from_dims += s * d as i64;
            from_betti += s * b as i64;
        }
        prop_assert_eq!(from_dims, from_betti);
        prop_assert_eq!(euler_data(&cx).unwrap().euler, from_dims);
    }

    /// The identity evaluation of the formal product equals the full torsion
    /// evaluated on the matching assembled basis choice (here via the block
    /// generator, whose class split is numerically clean).
    #[test]
    fn equivariant_identity_product(seed in any::<u64>()) {
        let g = FiniteGroup::cyclic(2);
        let t = CharacterTable::cyclic(2);
        let cx = generate_random_complex(seed, &[4, 4], Some((&g, &t))).unwrap();
        let tc = equivariant_torsion(&cx, None).unwrap();
        let per_class: C = tc.entries.iter().map(|e| e.value).product();
        prop_assert!(close(tc.identity_value(), per_class, 0.0));
        let ev = tc.evaluate(&t, 0).unwrap();
        prop_assert!(close(ev.value, per_class, 1e-12));
    }

    /// Deforming by s then t is deforming by s + t.
    #[test]
    fn witten_deformation_composes(seed in any::<u64>(), s in 0.01f64..2.0, t in 0.01f64..2.0) {
        let ms = random_morse_system(seed);
        let once = witten_deform(&ms, s + t);
        let twice = witten_deform(&witten_deform(&ms, s), t);
        for (a, b) in once.points.iter().zip(&twice.points) {
            prop_assert!(max_abs(&(&a.fiber_gram - &b.fiber_gram)) < 1e-12);
        }
    }

    /// The measured torsion ratio under a fiber-form perturbation matches the
    /// fixed-point prediction at every group element.
    #[test]
    fn anomaly_ratio_property(seed in any::<u64>(), norm in 0.05f64..0.9) {
        let ms = random_z2_morse_system(seed);
        let msp = perturb_fiber_grams(&ms, seed ^ 0x9e3779b97f4a7c15, norm).unwrap();
        let cx = build_thom_smale(&ms).unwrap();
        let cxp = build_thom_smale(&msp).unwrap();
        let action = cx.action.as_ref().unwrap();
        let tc = equivariant_torsion(&cx, None).unwrap();
        let tcp = equivariant_torsion(&cxp, None).unwrap();
        for (g, element) in ms.group.elements.iter().enumerate() {
            let measured = tcp.evaluate(&action.characters, g).unwrap().value
                / tc.evaluate(&action.characters, g).unwrap().value;
            let pts = anomaly_points(&ms, &msp, element).unwrap();
            let predicted = milnor_anomaly_ratio(&pts).unwrap();
            prop_assert!(close(measured, predicted, 1e-9));
        }
    }

    /// Spectral bookkeeping: eigenspace dimensions fill every degree and the
    /// torsion from any valid cutoff agrees with the canonical value.
    #[test]
    fn cutoff_choice_is_immaterial(seed in any::<u64>()) {
        let cx = generate_random_complex(seed, &[2, 3, 2], None).unwrap();
        let (v, h) = plain_torsion(&cx).unwrap();
        let sd = generalized_eigenspaces(&cx).unwrap();
        for (i, spaces) in sd.per_degree.iter().enumerate() {
            let total: usize = spaces.iter().map(|s| s.basis.ncols()).sum();
            prop_assert_eq!(total, cx.dims[i]);
        }
        for a in valid_cutoffs(&sd, 3) {
            prop_assert!(close(rs_value(&cx, a, &h).unwrap(), v, 1e-8));
        }
    }

    /// psi(x + 1) = psi(x) + 1/x and the duplication identity.
    #[test]
    fn digamma_identities(x in 0.05f64..20.0) {
        let lhs = digamma(x + 1.0).unwrap();
        let rhs = digamma(x).unwrap() + 1.0 / x;
        prop_assert!((lhs - rhs).abs() < 1e-11);
        let dup = 0.5 * (digamma(x).unwrap() + digamma(x + 0.5).unwrap())
            + std::f64::consts::LN_2;
        prop_assert!((digamma(2.0 * x).unwrap() - dup).abs() < 1e-10);
    }
}

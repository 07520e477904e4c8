mod common;

use std::collections::BTreeMap;

use heegner_core::engine::{analyze, Assertions, Mode};
use heegner_core::padic_oracle::{
    build_model, class_count_at, class_count_exhaustive, k_descriptor, policy_precision, ModelKind,
    DEFAULT_BUDGET,
};
use heegner_core::quadarith::{
    kronecker, splitting_at, LocalAlgebra, LocalQuadExt, QuadOrder, SplittingType,
};
use heegner_core::signs::eta_minus_one;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{fundamental_discs, random_case, sigma_of};

fn models(p: u64) -> Vec<ModelKind> {
    let mut v = vec![
        ModelKind::Eichler { n: 1 },
        ModelKind::Eichler { n: 2 },
        ModelKind::Cartan { n: 1 },
    ];
    for &l in LocalQuadExt::classes(p) {
        v.push(ModelKind::Division { l, n: 1 });
        v.push(ModelKind::Division { l, n: 2 });
    }
    v
}

#[test]
fn counts_stable_in_precision() {
    for p in [2u64, 3] {
        for kind in models(p) {
            for &kc in LocalQuadExt::classes(p) {
                for m in 0..=1 {
                    let model = build_model(kind, p, policy_precision(kind.n(), m) + 2).unwrap();
                    let kd = k_descriptor(p, LocalAlgebra::Field(kc)).unwrap();
                    let at = model.count_precision(&kd, m);
                    let a = class_count_at(&model, &kd, m, at, DEFAULT_BUDGET).unwrap();
                    let b = class_count_at(&model, &kd, m, at + 1, DEFAULT_BUDGET).unwrap();
                    assert_eq!(a, b, "p={p} {kind:?} K={kc} m={m}");
                }
            }
        }
    }
}

#[test]
fn orbit_lifting_agrees_with_exhaustive_merge() {
    let p = 3;
    for kind in models(p) {
        for &kc in LocalQuadExt::classes(p) {
            let model = build_model(kind, p, policy_precision(kind.n(), 0) + 1).unwrap();
            let kd = k_descriptor(p, LocalAlgebra::Field(kc)).unwrap();
            let at = model.count_precision(&kd, 0);
            let lifted = class_count_at(&model, &kd, 0, at, DEFAULT_BUDGET).unwrap();
            let merged = class_count_exhaustive(&model, &kd, 0, at, DEFAULT_BUDGET).unwrap();
            assert_eq!(lifted, merged, "{kind:?} K={kc}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn eta_trivial_at_inert_odd_primes(d_idx in 0usize..300, p in prop::sample::select(vec![3u64, 5, 7, 11, 13, 17, 19])) {
        let discs = fundamental_discs(1000);
        let d = discs[d_idx % discs.len()];
        let k = QuadOrder::maximal(d).unwrap();
        if splitting_at(&k, p) == SplittingType::Inert {
            prop_assert_eq!(eta_minus_one(&k, p), 1);
        }
        if splitting_at(&k, p) == SplittingType::Ramified {
            let want = if p % 4 == 1 { 1 } else { -1 };
            prop_assert_eq!(eta_minus_one(&k, p), want);
        }
    }

    #[test]
    fn kronecker_multiplicative(a in -500i64..500, b in 1i64..300, c in 1i64..300) {
        prop_assert_eq!(kronecker(a, b * c), kronecker(a, b) * kronecker(a, c));
    }

    #[test]
    fn exists_means_every_local_verdict_passes(seed in any::<u64>()) {
        let discs = fundamental_discs(300);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        if let Some(case) = random_case(&mut rng, &discs, Mode::AbelianAdjustable) {
            let sigma = sigma_of(&case, &BTreeMap::new());
            if sigma.is_determined() && sigma.cardinality().unwrap() % 2 == 1 {
                let r = analyze(&case.input, &case.k, &BTreeMap::new(), Assertions::default()).unwrap();
                prop_assert!(r.exists);
                prop_assert!(r.adjustments.iter().all(|a| a.passes && a.m_prime >= a.m && a.n_prime >= a.n));
                let level = r.level.unwrap();
                prop_assert_eq!(level % case.input.conductor().unwrap(), 0);
            }
        }
    }

    #[test]
    fn sigma_from_its_own_overrides_is_unchanged(seed in any::<u64>()) {
        let discs = fundamental_discs(300);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        if let Some(case) = random_case(&mut rng, &discs, Mode::EllipticFixedConductor) {
            let s = sigma_of(&case, &BTreeMap::new());
            if s.is_determined() {
                let again = sigma_of(&case, &s.as_overrides());
                prop_assert_eq!(again.delta, s.delta);
                prop_assert_eq!(again.global_sign, s.global_sign);
            }
        }
    }

    #[test]
    fn analysis_is_deterministic(seed in any::<u64>()) {
        let discs = fundamental_discs(300);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        if let Some(case) = random_case(&mut rng, &discs, Mode::EllipticFixedConductor) {
            let a = analyze(&case.input, &case.k, &BTreeMap::new(), Assertions::default());
            let b = analyze(&case.input, &case.k, &BTreeMap::new(), Assertions::default());
            prop_assert_eq!(format!("{a:?}"), format!("{b:?}"));
        }
    }
}

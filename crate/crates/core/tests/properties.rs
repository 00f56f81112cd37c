//! Randomised invariants across the public API.

use std::f64::consts::FRAC_PI_2;

use proptest::prelude::*;
use ptjc::dyson_dynamic::{build_eta, coefficients, ermakov_sigma, hermitian_h_t};
use ptjc::dyson_static::{hermitian_counterpart, StaticDysonMap};
use ptjc::entanglement::{concurrence, concurrence_at, diagonal_bound, frequency_census, reduced_density, transformed_coefficients};
use ptjc::model::{eigenstate, exact_spectrum, hamiltonian, ModelParams};
use ptjc::oracle::wootters_concurrence_generic;
use ptjc::{Branch, HilbertSpec, Params, Regime, TwoSystem};

/// κ values kept clear of every exceptional point `κ² = m`.
fn off_ep_kappa() -> impl Strategy<Value = f64> {
    (0.3f64..3.0).prop_filter("near an exceptional point", |k| (1..=9).all(|m| (k * k - m as f64).abs() > 1e-3))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closed_eigenstates_solve_the_eigenproblem(k in off_ep_kappa(), n in 0usize..5, plus in any::<bool>()) {
        let p = Params::from_kappa(k).unwrap();
        let space = HilbertSpec::single_jc(8).unwrap();
        let h = hamiltonian(&p, &space).unwrap();
        let branch = if plus { Branch::Plus } else { Branch::Minus };
        let state = eigenstate(&p, n, branch, true).unwrap();
        let v = state.to_vector(&space).unwrap();
        let pair = exact_spectrum(&p, n)[n];
        let e = if plus { pair.e_plus } else { pair.e_minus };
        let hv = h.apply(&v);
        let worst = hv.iter().zip(&v).map(|(a, b)| (a - e * b).norm()).fold(0.0, f64::max);
        prop_assert!(worst < 1e-10 * (1.0 + e.norm()), "residual {worst}");
    }

    #[test]
    fn static_counterpart_is_hermitian_and_similar(k in 3.05f64..6.0) {
        let p = Params::from_kappa(k).unwrap();
        let space = HilbertSpec::single_jc(8).unwrap();
        let h = hermitian_counterpart(&p, &space).unwrap();
        prop_assert!(h.hermiticity_defect() < 1e-10);
        let map = StaticDysonMap::new(&p, &space).unwrap();
        let diff = &map.transform(&hamiltonian(&p, &space).unwrap()) - &h;
        // the top Fock level loses its partner under truncation
        prop_assert!(diff.norm_max_on(&space.interior_indices(2)) < 1e-8);
    }

    #[test]
    fn dynamic_counterpart_is_hermitian(k in off_ep_kappa(), t in 0.0f64..20.0) {
        let p = Params::from_kappa(k).unwrap();
        let space = HilbertSpec::single_jc(6).unwrap();
        let h = hermitian_h_t(&p, &space, t).unwrap();
        prop_assert!(h.hermiticity_defect() <= 1e-10 * h.norm_max().max(1.0));
        let map = build_eta(&p, &space, t).unwrap();
        let id = &map.eta * &map.eta_inv;
        let worst = (0..space.dim()).map(|i| (id[(i, i)] - 1.0).norm()).fold(0.0, f64::max);
        prop_assert!(worst < 1e-10);
    }

    #[test]
    fn ermakov_sigma_inverts_root_delta(k in off_ep_kappa(), m in 1usize..4, t in 0.0f64..30.0) {
        let p = Params::from_kappa(k).unwrap();
        let d = coefficients(&p, m, t).unwrap().delta;
        let s = ermakov_sigma(&p, m, t).unwrap();
        prop_assert!((d * s * s - 1.0).abs() < 1e-12);
    }

    #[test]
    fn concurrence_is_a_bounded_wootters_value(k in 0.5f64..2.5, n in 0usize..4, gamma in 0.0f64..FRAC_PI_2, t in 0.0f64..30.0) {
        let cfg = TwoSystem::new(Params::from_kappa(k).unwrap(), n, gamma);
        let y = transformed_coefficients(&cfg, t).unwrap();
        let c = concurrence(&y);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&c));
        prop_assert!(diagonal_bound(&y) >= c - 1e-12);
        let generic = wootters_concurrence_generic(&reduced_density(&y)).unwrap();
        prop_assert!((generic - c).abs() < 1e-10);
    }

    #[test]
    fn census_only_unbreaks_as_kappa_grows(k1 in 0.1f64..3.0, dk in 0.0f64..1.0, n in 0usize..4) {
        let broken = |k: f64| frequency_census(&TwoSystem::new(Params::from_kappa(k).unwrap(), n, 0.3))
            .iter()
            .filter(|(_, r)| *r == Regime::Broken)
            .count();
        prop_assert!(broken(k1 + dk) <= broken(k1));
    }

    #[test]
    fn single_precision_tracks_double(k in 0.5f64..2.5, n in 0usize..3, t in 0.0f64..10.0) {
        prop_assume!((1..=4).all(|m| (k * k - m as f64).abs() > 1e-2));
        let c64 = concurrence_at(&TwoSystem::new(Params::from_kappa(k).unwrap(), n, 0.6), t).unwrap();
        let cfg32 = ptjc::entanglement::TwoSystemConfig::new(ModelParams::<f32>::from_kappa(k as f32).unwrap(), n, 0.6f32);
        let c32 = concurrence_at(&cfg32, t as f32).unwrap();
        prop_assert!((c32 as f64 - c64).abs() < 2e-3, "f32 {c32} vs f64 {c64}");
    }
}

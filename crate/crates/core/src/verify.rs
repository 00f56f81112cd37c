//! Named verification checks, each pairing a closed form with its oracle.
//!
//! | closed form                        | oracle                                 |
//! |------------------------------------|----------------------------------------|
//! | `exact_spectrum`                   | Schur eigenvalues of the dense `H`     |
//! | `q_perturbative`                   | commutator equations                   |
//! | `q_closed`                         | series `g q₁ + g³ q₃ + g⁵ q₅`          |
//! | `hermitian_counterpart`            | `e^{q/2} H e^{−q/2}` by Padé exponent  |
//! | `coefficients` (δ, K, α, β)        | constraint ODEs by finite differences  |
//! | `ermakov_sigma`                    | Ermakov–Pinney ODE by finite differences|
//! | `build_eta`, `hermitian_h_t`       | time-dependent Dyson equation          |
//! | `raw_coefficients`                 | RK4 integration of the two-system `H`  |
//! | `transformed_coefficients`         | `η_a η_b` applied as matrices          |
//! | `reduced_density`                  | direct partial trace                   |
//! | `concurrence`                      | generic Wootters concurrence           |

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex;

use crate::dyson_dynamic::{build_eta, coefficients, delta_fn, ermakov_sigma};
use crate::dyson_static::{hamiltonian_parts, hermitian_counterpart, q_closed, q_perturbative, q_series, StaticDysonMap};
use crate::entanglement::{
    concurrence, d_fn, raw_coefficients, reduced_density, transformed_coefficients, u_fn, TwoSystemConfig,
};
use crate::error::Result;
use crate::fock::{HilbertSpec, DEFAULT_CUTOFF};
use crate::model::{exact_spectrum, ground_energy, hamiltonian, ModelParams};
use crate::oracle::{
    dense_spectrum, ermakov_residual, hermiticity_report, linspace, matrix_path_check, metric_min_eigenvalue,
    ode_residual, partial_trace_atoms, schrodinger_check, spectrum_mismatch, spectrum_mismatch_raw, tdde_residual, tolerance,
    wootters_concurrence_generic, ResidualReport,
};

fn kappa(k: f64) -> Result<ModelParams<f64>> {
    ModelParams::from_kappa(k)
}

/// Exact energies against dense eigenvalues on levels clear of the cutoff,
/// with coalescing levels compared through their cluster mean. The second
/// value is the plain nearest-eigenvalue mismatch.
pub fn spectrum_check(params: &ModelParams<f64>, cutoff: usize) -> Result<(ResidualReport, f64)> {
    let space = HilbertSpec::single_jc(cutoff)?;
    let found = dense_spectrum(&hamiltonian(params, &space)?)?;
    let mut expected = vec![Complex::new(ground_energy(params), 0.0)];
    for e in exact_spectrum(params, cutoff.saturating_sub(2)) {
        expected.push(e.e_plus);
        expected.push(e.e_minus);
    }
    let report = ResidualReport::new(
        format!("spectrum[omega={},nu={},g={}]", params.omega, params.nu, params.g),
        vec![],
        spectrum_mismatch(&expected, &found),
        tolerance::SPECTRUM,
    );
    Ok((report, spectrum_mismatch_raw(&expected, &found)))
}

/// `‖[H₀, q₁] − (2i/g)H₁‖_max`.
pub fn static_commutator_check(params: &ModelParams<f64>, cutoff: usize) -> Result<ResidualReport> {
    let space = HilbertSpec::single_jc(cutoff)?;
    let (h0, h1) = hamiltonian_parts(params, &space)?;
    let q1 = q_perturbative(params, &space, 1)?;
    let diff = &h0.commutator(&q1) - &h1.scale(Complex::new(0.0, 2.0 / params.g));
    Ok(ResidualReport::new("static_commutator_q1", vec![], diff.norm_max(), tolerance::STATIC_COMMUTATOR))
}

/// Third- and fifth-order commutator equations away from the cutoff; the
/// quartic nested term enters the fifth-order equation with `−1/60`.
pub fn static_higher_commutator_check(params: &ModelParams<f64>, cutoff: usize) -> Result<ResidualReport> {
    let space = HilbertSpec::single_jc(cutoff)?;
    let inner = space.interior_indices(2);
    let (h0, h1) = hamiltonian_parts(params, &space)?;
    let q1 = q_perturbative(params, &space, 1)?;
    let q3 = q_perturbative(params, &space, 3)?;
    let q5 = q_perturbative(params, &space, 5)?;
    let k = Complex::new(0.0, 1.0 / (6.0 * params.g));
    let rhs3 = q1.commutator(&q1.commutator(&h1)).scale(k);
    let nested = q1.commutator(&q1.commutator(&q1.commutator(&q1.commutator(&h1))));
    let cross = &q1.commutator(&q3.commutator(&h1)) + &q3.commutator(&q1.commutator(&h1));
    let rhs5 = (&cross - &(&nested * (1.0 / 60.0))).scale(k);
    let r3 = (&h0.commutator(&q3) - &rhs3).norm_max_on(&inner);
    let r5 = (&h0.commutator(&q5) - &rhs5).norm_max_on(&inner);
    Ok(ResidualReport::new("static_commutator_q3_q5", vec![], r3.max(r5), tolerance::STATIC_HIGHER_COMMUTATOR))
}

/// Ratio of `‖q − (g q₁ + g³ q₃ + g⁵ q₅)‖_max` at `g` and `g/2`, relative to
/// `2⁷`. Reports `|ratio/128 − 1|` and the ratio itself.
pub fn series_ratio_check(detuning: f64, g: f64, cutoff: usize) -> Result<(ResidualReport, f64)> {
    let space = HilbertSpec::single_jc(cutoff)?;
    let diff = |g: f64| -> Result<f64> {
        let p = ModelParams::new(1.0 + detuning, 1.0, g)?;
        Ok((&q_closed(&p, &space)? - &q_series(&p, &space)?).norm_max())
    };
    let ratio = diff(g)? / diff(g / 2.0)?;
    let report =
        ResidualReport::new("static_series_order7", vec![g, g / 2.0], (ratio / 128.0 - 1.0).abs(), tolerance::SERIES_RATIO);
    Ok((report, ratio))
}

/// `‖e^{q/2} H e^{−q/2} − h‖_max` clear of the top two Fock levels.
pub fn static_similarity_check(params: &ModelParams<f64>, cutoff: usize) -> Result<ResidualReport> {
    let space = HilbertSpec::single_jc(cutoff)?;
    let map = StaticDysonMap::new(params, &space)?;
    let diff = &map.transform(&hamiltonian(params, &space)?) - &hermitian_counterpart(params, &space)?;
    let r = diff.norm_max_on(&space.interior_indices(2)).max(map.q.hermiticity_defect());
    Ok(ResidualReport::new(format!("static_similarity[kappa={}]", params.kappa()), vec![], r, tolerance::STATIC_SIMILARITY))
}

/// Constraint-ODE residuals for every `(κ, m)` pair on `points` grid points in `[0, 10]`.
pub fn constraint_ode_check(kappas: &[f64], slots: &[usize], points: usize) -> Result<ResidualReport> {
    let grid = linspace(0.0, 10.0, points - 1);
    let mut parts = Vec::new();
    for &k in kappas {
        let p = kappa(k)?;
        for &m in slots {
            parts.push(ode_residual(|t| coefficients(&p, m, t), &p, m, &grid)?);
        }
    }
    Ok(ResidualReport::combine("constraint_ode", &parts, tolerance::CONSTRAINT_ODE))
}

/// Ermakov–Pinney residual and `δσ² = 1`, as two combined reports.
pub fn ermakov_check(kappas: &[f64], slots: &[usize], points: usize) -> Result<(ResidualReport, ResidualReport)> {
    let grid = linspace(0.0, 10.0, points - 1);
    let (mut eq, mut id) = (Vec::new(), Vec::new());
    for &k in kappas {
        let p = kappa(k)?;
        for &m in slots {
            let (a, b) = ermakov_residual(|t| ermakov_sigma(&p, m, t), |t| delta_fn(&p, m, t), &p, m, &grid)?;
            eq.push(a);
            id.push(b);
        }
    }
    Ok((
        ResidualReport::combine("ermakov_pinney", &eq, tolerance::ERMAKOV),
        ResidualReport::combine("ermakov_identity", &id, tolerance::ERMAKOV_IDENTITY),
    ))
}

/// Time-dependent Dyson equation and Hermiticity of `h(t)`.
pub fn tdde_check(kappas: &[f64], times: &[f64], cutoff: usize) -> Result<(ResidualReport, ResidualReport)> {
    let space = HilbertSpec::single_jc(cutoff)?;
    let (mut res, mut herm) = (Vec::new(), Vec::new());
    for &k in kappas {
        let p = kappa(k)?;
        for &t in times {
            res.push(tdde_residual(&p, &space, t)?);
            herm.push(hermiticity_report(&p, &space, t)?);
        }
    }
    Ok((
        ResidualReport::combine("tdde", &res, tolerance::TDDE),
        ResidualReport::combine("h_hermitian", &herm, tolerance::HERMITICITY),
    ))
}

/// Metric `η†η` positive-definite; reports `max(0, −λ_min)`.
pub fn metric_check(k: f64, t: f64, cutoff: usize) -> Result<ResidualReport> {
    let space = HilbertSpec::single_jc(cutoff)?;
    let map = build_eta(&kappa(k)?, &space, t)?;
    let bad = match metric_min_eigenvalue(&map.metric) {
        Ok(l) if l > 0.0 => 0.0,
        Ok(l) => -l,
        Err(_) => f64::INFINITY,
    };
    Ok(ResidualReport::new(format!("metric_positive[kappa={k},t={t}]"), vec![t], bad, 0.0))
}

/// RK4 trajectories of the two-system `H` against `x₁…x₆`.
pub fn schrodinger_suite(cases: &[(f64, usize)], gamma: f64, points: usize) -> Result<ResidualReport> {
    let grid = linspace(0.0, 10.0, points - 1);
    let mut parts = Vec::new();
    for &(k, n) in cases {
        let cfg = TwoSystemConfig::new(kappa(k)?, n, gamma);
        parts.push(schrodinger_check(&cfg, &grid, |t| raw_coefficients(&cfg, t))?);
    }
    Ok(ResidualReport::combine("schrodinger", &parts, tolerance::SCHRODINGER))
}

/// `max |Σ|y|² − 1|` over `gt ∈ [0, 10]`.
pub fn norm_check(cases: &[(f64, usize)], gamma: f64, points: usize) -> Result<ResidualReport> {
    let grid = linspace(0.0, 10.0, points - 1);
    let mut worst = 0.0f64;
    for &(k, n) in cases {
        let cfg = TwoSystemConfig::new(kappa(k)?, n, gamma);
        for &t in &grid {
            worst = worst.max((transformed_coefficients(&cfg, t)?.norm_sqr() - 1.0).abs());
        }
    }
    Ok(ResidualReport::new("transformed_norm", grid, worst, tolerance::NORM))
}

/// Matrix path `η_a η_b |ψ⟩` against the scalar `y` formulas.
pub fn matrix_path_suite(cases: &[(f64, usize, f64)], gamma: f64) -> Result<ResidualReport> {
    let mut parts = Vec::new();
    for &(k, n, t) in cases {
        let cfg = TwoSystemConfig::new(kappa(k)?, n, gamma);
        parts.push(matrix_path_check(&cfg, t, |t| raw_coefficients(&cfg, t), |t| transformed_coefficients(&cfg, t))?);
    }
    Ok(ResidualReport::combine("matrix_vs_scalar_y", &parts, tolerance::MATRIX_PATH))
}

/// Deterministic quasi-random points `(κ, n, γ, t)` from additive recurrences.
pub fn sample_points(count: usize) -> Vec<(f64, usize, f64, f64)> {
    // fractional parts of multiples of √2, √3, √5, √7 − 2
    let a = [2f64.sqrt(), 3f64.sqrt(), 5f64.sqrt(), 7f64.sqrt()];
    (1..=count)
        .map(|i| {
            let u = a.map(|x| (x * i as f64).fract());
            (0.5 + 2.0 * u[0], (u[1] * 4.0) as usize, FRAC_PI_2 * u[2], 30.0 * u[3])
        })
        .collect()
}

/// Reduced density from the closed `y` vs the direct partial trace, and the
/// X-state concurrence vs the generic Wootters concurrence.
pub fn density_and_concurrence_check(points: &[(f64, usize, f64, f64)]) -> Result<(ResidualReport, ResidualReport)> {
    let (mut trace_err, mut conc_err) = (0.0f64, 0.0f64);
    for &(k, n, gamma, t) in points {
        let cfg = TwoSystemConfig::new(kappa(k)?, n, gamma);
        let y = transformed_coefficients(&cfg, t)?;
        let closed = reduced_density(&y);
        let space = HilbertSpec::two_jc(n + 2)?;
        let norm = y.norm_sqr().sqrt();
        let state: Vec<_> = y.embed(&cfg, &space)?.into_iter().map(|z| z / norm).collect();
        let brute = partial_trace_atoms(&state, &space)?;
        trace_err = trace_err.max(brute.max_abs_diff(&closed));
        let generic = wootters_concurrence_generic(&brute).unwrap_or(f64::NAN);
        let d = (generic - concurrence(&y)).abs();
        conc_err = if d.is_nan() { d } else { conc_err.max(d) };
    }
    let grid: Vec<f64> = points.iter().map(|p| p.3).collect();
    Ok((
        ResidualReport::new("partial_trace", grid.clone(), trace_err, tolerance::PARTIAL_TRACE),
        ResidualReport::new("x_state_vs_wootters", grid, conc_err, tolerance::WOOTTERS),
    ))
}

/// `|D₁δ₁^{1/2}|` and `|U₁δ₁^{1/2}|` against `1/√2` at time `t`.
pub fn broken_amplitude_check(k: f64, t: f64) -> Result<(ResidualReport, [f64; 2])> {
    let p = kappa(k)?;
    let root = coefficients(&p, 1, t)?.delta.sqrt();
    let vals = [d_fn(&p, 1, t).norm() * root, u_fn(&p, 1, t).norm() * root];
    let worst = vals.iter().map(|v| (v - FRAC_1_SQRT_2).abs()).fold(0.0, f64::max);
    Ok((ResidualReport::new(format!("broken_amplitude[kappa={k},t={t}]"), vec![t], worst, 1e-3), vals))
}

/// Static-map group.
pub fn static_suite() -> Result<Vec<ResidualReport>> {
    let n = DEFAULT_CUTOFF;
    Ok(vec![
        static_commutator_check(&ModelParams::new(3.0, 1.0, 1.0)?, n)?,
        static_higher_commutator_check(&ModelParams::new(3.0, 1.0, 0.7)?, n)?,
        series_ratio_check(1.0, 1e-2, n)?.0,
        static_similarity_check(&kappa(5.0)?, n)?,
    ])
}

/// Time-dependent map, entanglement and spectrum group.
pub fn dynamic_suite() -> Result<Vec<ResidualReport>> {
    let n = DEFAULT_CUTOFF;
    let kappas = [0.9, 1.4, 2.0];
    let slots = [1, 2, 3];
    let (ep, ep_id) = ermakov_check(&kappas, &slots, 200)?;
    let (tdde, herm) = tdde_check(&[0.9, 2.0], &[1.0, 2.0, 5.0], n)?;
    let (trace, conc) = density_and_concurrence_check(&sample_points(200))?;
    let spectra = [spectrum_check(&ModelParams::new(3.0, 1.0, 1.0)?, n)?.0, spectrum_check(&ModelParams::new(1.9, 1.0, 1.0)?, n)?.0];
    Ok(vec![
        ResidualReport::combine("spectrum", &spectra, tolerance::SPECTRUM),
        constraint_ode_check(&kappas, &slots, 200)?,
        ep,
        ep_id,
        tdde,
        herm,
        metric_check(0.9, 5.0, n)?,
        schrodinger_suite(&[(2.0, 1), (0.9, 1)], FRAC_PI_4, 101)?,
        norm_check(&[(0.9, 0), (0.9, 1), (2.0, 1), (1.4, 2)], FRAC_PI_4, 201)?,
        matrix_path_suite(&[(1.4, 1, 3.0), (0.9, 0, 2.0), (2.0, 2, 4.0)], FRAC_PI_4)?,
        trace,
        conc,
    ])
}

/// Period of `C(t)` for `n = 0` in the unbroken regime, `4π/Ω₁`.
pub fn n0_period(params: &ModelParams<f64>) -> Option<f64> {
    let w2 = params.omega_sq(1);
    (w2 > 0.0).then(|| 4.0 * PI / w2.sqrt())
}

//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary (`harness = false`) so the report is always shown.
//! Criteria listed in `KNOWN_RED` are reported as FAIL and analysed in the
//! README; the run only fails if a criterion's outcome differs from the
//! expectation recorded here.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::process::ExitCode;

use ptjc::entanglement::{concurrence_at, diagonal_bound, frequency_census, transformed_coefficients, TwoSystemConfig};
use ptjc::oracle::tolerance;
use ptjc::verify;
use ptjc::{Params, Regime};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Criteria expected to fail, with the reason printed alongside.
const KNOWN_RED: &[(usize, &str)] = &[(
    9,
    "Wootters limit is cosγ(sinγ − ½cosγ) = 0.25; 0.3090170 is the limit of the bound 2|y₃|√(|y₁|²+|y₆|²) − …, \
     which is not the concurrence once y₆ ≠ 0 (criterion 11 confirms the Wootters value)",
)];

struct Outcome {
    id: usize,
    name: &'static str,
    pass: bool,
    detail: String,
}

type Check = fn() -> ptjc::Result<(bool, String)>;

fn c1() -> ptjc::Result<(bool, String)> {
    let mut ok = true;
    let mut parts = Vec::new();
    for p in [Params::new(3.0, 1.0, 1.0)?, Params::new(1.9, 1.0, 1.0)?] {
        let (r, raw) = verify::spectrum_check(&p, 12)?;
        ok &= r.pass;
        parts.push(format!("kappa={:.1}: {:.2e} (nearest-eigenvalue {:.2e})", p.kappa(), r.max_residual, raw));
    }
    Ok((ok, format!("{}; tol {:.0e}", parts.join(", "), tolerance::SPECTRUM)))
}

fn c2() -> ptjc::Result<(bool, String)> {
    let comm = verify::static_commutator_check(&Params::new(3.0, 1.0, 1.0)?, 12)?;
    let (ratio, value) = verify::series_ratio_check(1.0, 1e-2, 12)?;
    Ok((
        comm.pass && ratio.pass,
        format!("[H0,q1] residual {:.2e} (tol 1e-12); error ratio g=1e-2 vs 5e-3 = {value:.2} vs 128", comm.max_residual),
    ))
}

fn c3() -> ptjc::Result<(bool, String)> {
    let r = verify::static_similarity_check(&Params::from_kappa(5.0)?, 12)?;
    Ok((r.pass, format!("residual {:.2e} (tol 1e-8)", r.max_residual)))
}

fn c4() -> ptjc::Result<(bool, String)> {
    let r = verify::constraint_ode_check(&[0.9, 1.4, 2.0], &[1, 2, 3], 200)?;
    Ok((r.pass, format!("max residual {:.2e} (tol 1e-7)", r.max_residual)))
}

fn c5() -> ptjc::Result<(bool, String)> {
    let (eq, id) = verify::ermakov_check(&[0.9, 1.4, 2.0], &[1, 2, 3], 200)?;
    Ok((
        eq.pass && id.pass,
        format!("ODE residual {:.2e} (tol 1e-8); |δσ²−1| {:.2e} (tol 1e-12)", eq.max_residual, id.max_residual),
    ))
}

fn c6() -> ptjc::Result<(bool, String)> {
    let (res, herm) = verify::tdde_check(&[0.9, 2.0], &[1.0, 2.0, 5.0], 12)?;
    Ok((
        res.pass && herm.pass,
        format!("TDDE residual {:.2e} (tol 1e-6); ‖h−h†‖/‖h‖ {:.2e} (tol 1e-10)", res.max_residual, herm.max_residual),
    ))
}

fn c7() -> ptjc::Result<(bool, String)> {
    let r = verify::schrodinger_suite(&[(2.0, 1), (0.9, 1)], FRAC_PI_4, 101)?;
    Ok((r.pass, format!("max relative deviation {:.2e} (tol 1e-6)", r.max_residual)))
}

fn c8() -> ptjc::Result<(bool, String)> {
    let cases = [(0.9, 0), (0.9, 1), (0.9, 2), (2.0, 0), (2.0, 1), (2.0, 2)];
    let r = verify::norm_check(&cases, FRAC_PI_4, 201)?;
    Ok((r.pass, format!("max |Σ|y|²−1| {:.2e} (tol 1e-6)", r.max_residual)))
}

fn c9() -> ptjc::Result<(bool, String)> {
    let cfg = |n| TwoSystemConfig::new(Params::from_kappa(0.9).unwrap(), n, FRAC_PI_4);
    let c0 = concurrence_at(&cfg(0), 40.0)?;
    let bound = diagonal_bound(&transformed_coefficients(&cfg(0), 40.0)?);
    let c1 = concurrence_at(&cfg(1), 40.0)?;
    let c2 = concurrence_at(&cfg(2), 40.0)?;
    let pass = (c0 - 0.309_017_0).abs() <= 1e-2 && c1 < 1e-2 && c2 < 1e-2;
    Ok((pass, format!("C(40;n=0)={c0:.7} (target 0.3090170±1e-2; diagonal_bound gives {bound:.7}); C(40;n=1)={c1:.1e}, C(40;n=2)={c2:.1e}")))
}

fn c10() -> ptjc::Result<(bool, String)> {
    let (r, [d, u]) = verify::broken_amplitude_check(0.9, 40.0)?;
    Ok((r.pass, format!("|D1 δ1^½|={d:.6}, |U1 δ1^½|={u:.6}, max deviation from 1/√2 {:.2e} (tol 1e-3)", r.max_residual)))
}

fn c11() -> ptjc::Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_2024);
    let points: Vec<_> = (0..1000)
        .map(|_| (rng.random_range(0.5..2.5), rng.random_range(0..4usize), rng.random_range(0.0..FRAC_PI_2), rng.random_range(0.0..30.0)))
        .collect();
    let (trace, conc) = verify::density_and_concurrence_check(&points)?;
    Ok((
        trace.pass && conc.pass,
        format!("1000 seeded samples: |C_X − C_Wootters| ≤ {:.2e} (tol 1e-10); partial trace ≤ {:.2e}", conc.max_residual, trace.max_residual),
    ))
}

struct Trace {
    values: Vec<f64>,
}

impl Trace {
    fn new(kappa: f64, n: usize) -> Self {
        let cfg = TwoSystemConfig::new(Params::from_kappa(kappa).unwrap(), n, FRAC_PI_4);
        let values = (0..=2000).map(|i| concurrence_at(&cfg, i as f64 * 10.0 * PI / 2000.0).unwrap()).collect();
        Self { values }
    }

    /// Largest value after the trace first drops below `level`.
    fn max_after_drop(&self, level: f64) -> f64 {
        match self.values.iter().position(|&c| c < level) {
            Some(i) => self.values[i..].iter().copied().fold(0.0, f64::max),
            None => f64::INFINITY,
        }
    }

    /// Largest value after the first local minimum.
    fn max_after_first_minimum(&self) -> f64 {
        let v = &self.values;
        let i = (1..v.len() - 1).find(|&i| v[i] <= v[i - 1] && v[i] < v[i + 1]).unwrap_or(v.len() - 1);
        v[i..].iter().copied().fold(0.0, f64::max)
    }

    /// Times the trace climbs back above `level` after dipping below it.
    fn returns_above(&self, level: f64) -> usize {
        let mut below = false;
        let mut count = 0;
        for &c in &self.values {
            if c < level {
                below = true;
            } else if below {
                count += 1;
                below = false;
            }
        }
        count
    }
}

fn broken_modes(kappa: f64) -> Vec<usize> {
    let mut modes: Vec<usize> = (0..3)
        .flat_map(|n| frequency_census(&TwoSystemConfig::new(Params::from_kappa(kappa).unwrap(), n, FRAC_PI_4)))
        .filter(|(_, r)| *r == Regime::Broken)
        .map(|(m, _)| m)
        .collect();
    modes.sort_unstable();
    modes.dedup();
    modes
}

fn c12() -> ptjc::Result<(bool, String)> {
    let a: Vec<f64> = (0..3).map(|n| {
        let t = Trace::new(0.9, n);
        t.max_after_drop(0.9 * t.values[0])
    }).collect();
    let a_ok = a.iter().all(|&m| m < 0.9);
    let d = Trace::new(2.0, 0).returns_above(0.99);
    let b = Trace::new(1.4, 1);
    let b_max = b.max_after_drop(0.9);
    let b_peak = b.max_after_first_minimum();
    let census = [(0.9, vec![1, 2, 3]), (1.4, vec![2, 3]), (1.7, vec![3]), (2.0, vec![])];
    let census_ok = census.iter().all(|(k, want)| broken_modes(*k) == *want);
    let pass = a_ok && d >= 2 && b_max < 0.9 && census_ok;
    Ok((
        pass,
        format!(
            "(a) max after first dip {:.3}/{:.3}/{:.3} (< 0.9·C0); (d) n=0 returns above 0.99: {d}; \
             (b) n=1 max after fall {b_max:.4}, later peak {b_peak:.4} (1/√2 = 0.7071); census {}",
            a[0], a[1], a[2], if census_ok { "matches" } else { "differs" }
        ),
    ))
}

fn main() -> ExitCode {
    let checks: [(usize, &'static str, Check); 12] = [
        (1, "spectrum oracle equivalence", c1),
        (2, "static-map commutators and series order", c2),
        (3, "static Hermitian counterpart", c3),
        (4, "constraint-ODE residuals", c4),
        (5, "Ermakov-Pinney residual", c5),
        (6, "time-dependent Dyson equation", c6),
        (7, "Schrodinger oracle vs closed coefficients", c7),
        (8, "metric norm conservation", c8),
        (9, "concurrence asymptote", c9),
        (10, "broken-amplitude limit", c10),
        (11, "X-state vs generic Wootters", c11),
        (12, "concurrence panel features", c12),
    ];
    let mut outcomes = Vec::new();
    for (id, name, f) in checks {
        let (pass, detail) = f().unwrap_or_else(|e| (false, format!("error: {e}")));
        outcomes.push(Outcome { id, name, pass, detail });
    }
    let mut unexpected = 0;
    for o in &outcomes {
        let known = KNOWN_RED.iter().find(|(id, _)| *id == o.id);
        println!("criterion {:>2} {:<42} {}  {}", o.id, o.name, if o.pass { "PASS" } else { "FAIL" }, o.detail);
        if let Some((_, why)) = known {
            println!("             known deviation: {why}");
        }
        if o.pass == known.is_some() {
            unexpected += 1;
        }
    }
    let passed = outcomes.iter().filter(|o| o.pass).count();
    println!("acceptance: {passed}/{} criteria pass, {} known red, {unexpected} unexpected", outcomes.len(), KNOWN_RED.len());
    if unexpected == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}

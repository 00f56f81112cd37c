//! Brute-force reference computations the closed forms are checked against:
//! explicit Runge–Kutta integration, finite-difference residuals of the
//! constraint equations, a direct partial trace and a generic Wootters
//! concurrence. Apart from the operator constructors these routines share no
//! code with the closed-form paths.

use nalgebra::DMatrix;
use num_complex::Complex;

use crate::dyson_dynamic::{build_eta, hermitian_h_t, DysonCoefficients, ErmakovConstants};
use crate::entanglement::{AtomDensityMatrix, CoefficientSet, TwoSystemConfig};
use crate::error::{Error, Result};
use crate::fock::{HilbertSpec, SPIN_DOWN, SPIN_UP};
use crate::model::{hamiltonian, two_system_hamiltonian, ModelParams};
use crate::operator::ComplexOperator;
use crate::scalar::{re, Real};

/// Every tolerance used by the verification suite.
pub mod tolerance {
    pub const SPECTRUM: f64 = 1e-10;
    pub const STATIC_COMMUTATOR: f64 = 1e-12;
    pub const STATIC_HIGHER_COMMUTATOR: f64 = 1e-10;
    /// Allowed relative deviation of the series error ratio from `2⁷`.
    pub const SERIES_RATIO: f64 = 0.1;
    pub const STATIC_SIMILARITY: f64 = 1e-8;
    pub const CONSTRAINT_ODE: f64 = 1e-7;
    pub const ERMAKOV: f64 = 1e-8;
    pub const ERMAKOV_IDENTITY: f64 = 1e-12;
    pub const TDDE: f64 = 1e-6;
    pub const HERMITICITY: f64 = 1e-10;
    pub const SCHRODINGER: f64 = 1e-6;
    pub const NORM: f64 = 1e-6;
    pub const MATRIX_PATH: f64 = 1e-10;
    pub const PARTIAL_TRACE: f64 = 1e-12;
    pub const WOOTTERS: f64 = 1e-10;
    /// Positive-semidefiniteness slack for density matrices.
    pub const PSD: f64 = 1e-10;
}

/// Outcome of one named check.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub check_name: String,
    pub grid: Vec<f64>,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl ResidualReport {
    pub fn new(check_name: impl Into<String>, grid: Vec<f64>, max_residual: f64, tolerance: f64) -> Self {
        // NaN never passes
        let pass = max_residual <= tolerance;
        Self { check_name: check_name.into(), grid, max_residual, tolerance, pass }
    }

    /// Merges several reports into one named check (worst residual wins).
    pub fn combine(check_name: impl Into<String>, parts: &[ResidualReport], tolerance: f64) -> Self {
        let mut grid: Vec<f64> = parts.iter().flat_map(|r| r.grid.iter().copied()).collect();
        grid.sort_by(f64::total_cmp);
        grid.dedup();
        let worst = parts.iter().map(|r| r.max_residual).fold(0.0, |a: f64, b| if b.is_nan() { b } else { a.max(b) });
        Self::new(check_name, grid, worst, tolerance)
    }
}

/// Stored solution of `i ψ̇ = Hψ`.
#[derive(Debug, Clone)]
pub struct Trajectory<T: Real> {
    pub times: Vec<T>,
    pub states: Vec<Vec<Complex<T>>>,
    pub generator: ComplexOperator<T>,
}

/// Nonzero entries of a matrix, row by row.
struct Sparse<T: Real> {
    rows: Vec<Vec<(usize, Complex<T>)>>,
}

impl<T: Real> Sparse<T> {
    fn new(op: &ComplexOperator<T>) -> Self {
        let n = op.dim();
        let zero = re(T::zero());
        let rows = (0..n).map(|i| (0..n).filter(|&j| op[(i, j)] != zero).map(|j| (j, op[(i, j)])).collect()).collect();
        Self { rows }
    }

    /// `−i H v`.
    fn rhs(&self, v: &[Complex<T>], out: &mut [Complex<T>]) {
        let mi = Complex::new(T::zero(), -T::one());
        for (o, row) in out.iter_mut().zip(&self.rows) {
            let acc = row.iter().fold(re(T::zero()), |acc, (j, h)| acc + *h * v[*j]);
            *o = mi * acc;
        }
    }
}

/// Default RK4 step: `min(10⁻³, 0.02/‖H‖∞)`.
pub fn default_step<T: Real>(h: &ComplexOperator<T>) -> T {
    let scale = h.norm_inf();
    let cap = T::lit(1e-3);
    if scale > T::zero() { cap.min(T::lit(0.02) / scale) } else { cap }
}

/// Classic fourth-order Runge–Kutta with the default step.
pub fn integrate_schrodinger<T: Real>(
    h: &ComplexOperator<T>,
    psi0: &[Complex<T>],
    t_grid: &[T],
) -> Result<Trajectory<T>> {
    integrate_schrodinger_with_step(h, psi0, t_grid, default_step(h))
}

/// Classic fourth-order Runge–Kutta. Each grid interval is split into equal
/// substeps no longer than `max_step`. No unitarity is assumed.
pub fn integrate_schrodinger_with_step<T: Real>(
    h: &ComplexOperator<T>,
    psi0: &[Complex<T>],
    t_grid: &[T],
    max_step: T,
) -> Result<Trajectory<T>> {
    if psi0.len() != h.dim() {
        return Err(Error::InvalidState(format!("state length {} vs generator dimension {}", psi0.len(), h.dim())));
    }
    match t_grid.first() {
        Some(t0) if *t0 == T::zero() => {}
        _ => return Err(Error::InvalidGrid("time grid must start at 0".into())),
    }
    if t_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidGrid("time grid must be strictly increasing".into()));
    }
    if !(max_step > T::zero()) || max_step < T::epsilon() * t_grid[t_grid.len() - 1].abs().max(T::one()) {
        return Err(Error::Integration { last_t: 0.0, reason: "step size underflow".into() });
    }
    let op = Sparse::new(h);
    let dim = psi0.len();
    let mut psi = psi0.to_vec();
    let mut states = vec![psi.clone()];
    let (mut k1, mut k2, mut k3, mut k4) = (vec![re(T::zero()); dim], vec![re(T::zero()); dim], vec![re(T::zero()); dim], vec![re(T::zero()); dim]);
    let mut tmp = vec![re(T::zero()); dim];
    let two = T::lit(2.0);
    let six = T::lit(6.0);
    for w in t_grid.windows(2) {
        let span = w[1] - w[0];
        let steps = (span / max_step).ceil().to_usize().unwrap_or(1).max(1);
        let dt = span / T::from_index(steps);
        let hdt = re(dt / two);
        for _ in 0..steps {
            op.rhs(&psi, &mut k1);
            for i in 0..dim {
                tmp[i] = psi[i] + k1[i] * hdt;
            }
            op.rhs(&tmp, &mut k2);
            for i in 0..dim {
                tmp[i] = psi[i] + k2[i] * hdt;
            }
            op.rhs(&tmp, &mut k3);
            for i in 0..dim {
                tmp[i] = psi[i] + k3[i] * re(dt);
            }
            op.rhs(&tmp, &mut k4);
            for i in 0..dim {
                psi[i] = psi[i] + (k1[i] + (k2[i] + k3[i]) * re(two) + k4[i]) * re(dt / six);
            }
        }
        if psi.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::Integration { last_t: w[0].as_f64(), reason: "state is no longer finite".into() });
        }
        states.push(psi.clone());
    }
    Ok(Trajectory { times: t_grid.to_vec(), states, generator: h.clone() })
}

/// `n + 1` equally spaced points on `[a, b]`.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..=n).map(|i| a + (b - a) * i as f64 / n as f64).collect()
}

/// Central five-point first derivative.
pub fn fd_first<E>(f: impl Fn(f64) -> std::result::Result<f64, E>, t: f64, h: f64) -> std::result::Result<f64, E> {
    Ok((f(t - 2.0 * h)? - 8.0 * f(t - h)? + 8.0 * f(t + h)? - f(t + 2.0 * h)?) / (12.0 * h))
}

/// Central nine-point second derivative.
pub fn fd_second<E>(f: impl Fn(f64) -> std::result::Result<f64, E>, t: f64, h: f64) -> std::result::Result<f64, E> {
    const W: [f64; 5] = [-205.0 / 72.0, 8.0 / 5.0, -1.0 / 5.0, 8.0 / 315.0, -1.0 / 560.0];
    let mut acc = W[0] * f(t)?;
    for (k, w) in W.iter().enumerate().skip(1) {
        let d = k as f64 * h;
        acc += w * (f(t + d)? + f(t - d)?);
    }
    Ok(acc / (h * h))
}

/// Parameter label rounded for report names.
fn label(x: f64) -> f64 {
    (x * 1e6).round() / 1e6
}

fn fd_step(t: f64) -> f64 {
    1e-4 * t.abs().max(1.0)
}

/// Residuals of the three constraint equations for slot `slot`, evaluated on
/// the interior of `grid` with five-point derivatives of the provider.
pub fn ode_residual<F>(provider: F, params: &ModelParams<f64>, slot: usize, grid: &[f64]) -> Result<ResidualReport>
where
    F: Fn(f64) -> Result<DysonCoefficients<f64>>,
{
    let d = params.detuning();
    let gs = params.g * (slot as f64).sqrt();
    let interior = if grid.len() > 2 { &grid[1..grid.len() - 1] } else { grid };
    let mut worst = 0.0f64;
    for &t in interior {
        let h = fd_step(t);
        let x = provider(t)?;
        let kdot = fd_first(|s| provider(s).map(|c| c.k), t, h)?;
        let adot = fd_first(|s| provider(s).map(|c| c.alpha), t, h)?;
        let bdot = fd_first(|s| provider(s).map(|c| c.beta), t, h)?;
        let (a, b) = (x.alpha, x.beta);
        let r1 = kdot - 0.5 * gs * a;
        let r2 = adot - (d * b - 0.5 * gs * (1.0 - a * a + b * b) - 0.5 * gs * (4.0 * x.k).exp());
        let r3 = bdot + d * a - gs * a * b;
        worst = worst.max(r1.abs()).max(r2.abs()).max(r3.abs());
    }
    Ok(ResidualReport::new(
        format!("constraint_ode[kappa={},m={slot}]", label(params.kappa())),
        interior.to_vec(),
        worst,
        tolerance::CONSTRAINT_ODE,
    ))
}

/// Ermakov–Pinney residual `|σ̈ + ¼Ω²σ − ¼g²(1+c₁²)m σ⁻³|` (nine-point `σ̈`,
/// step `2·10⁻²`) and the identity `δσ² = 1`, as two reports.
pub fn ermakov_residual<S, D>(
    sigma: S,
    delta: D,
    params: &ModelParams<f64>,
    slot: usize,
    grid: &[f64],
) -> Result<(ResidualReport, ResidualReport)>
where
    S: Fn(f64) -> Result<f64>,
    D: Fn(f64) -> Result<f64>,
{
    let consts = ErmakovConstants::new(params, slot)?;
    let lambda = consts.strength(params, slot);
    let w2 = params.omega_sq(slot);
    let interior = if grid.len() > 2 { &grid[1..grid.len() - 1] } else { grid };
    let (mut eq, mut ident) = (0.0f64, 0.0f64);
    for &t in interior {
        let s = sigma(t)?;
        let acc = fd_second(&sigma, t, 2e-2)?;
        eq = eq.max((acc + 0.25 * w2 * s - lambda / (s * s * s)).abs());
        ident = ident.max((delta(t)? * s * s - 1.0).abs());
    }
    let tag = format!("kappa={},m={slot}", label(params.kappa()));
    Ok((
        ResidualReport::new(format!("ermakov_pinney[{tag}]"), interior.to_vec(), eq, tolerance::ERMAKOV),
        ResidualReport::new(format!("ermakov_identity[{tag}]"), interior.to_vec(), ident, tolerance::ERMAKOV_IDENTITY),
    ))
}

/// `‖ηHη⁻¹ + iη̇η⁻¹ − h(t)‖_max` away from the top two Fock levels, with a
/// five-point `η̇`.
pub fn tdde_residual(params: &ModelParams<f64>, space: &HilbertSpec, t: f64) -> Result<ResidualReport> {
    let h = fd_step(t);
    let map = build_eta(params, space, t)?;
    let etas = [-2.0, -1.0, 1.0, 2.0].map(|k| build_eta(params, space, t + k * h).map(|m| m.eta));
    let [m2, m1, p1, p2] = etas;
    let (m2, m1, p1, p2) = (m2?, m1?, p1?, p2?);
    let eta_dot = &(&(&(&p1 - &m1) * 8.0) + &(&m2 - &p2)) * (1.0 / (12.0 * h));
    let lhs = &map.transform(&hamiltonian(params, space)?) + &(&eta_dot * &map.eta_inv).scale(Complex::i());
    let diff = &lhs - &hermitian_h_t(params, space, t)?;
    let inner = space.interior_indices(2);
    Ok(ResidualReport::new(
        format!("tdde[kappa={},t={t}]", label(params.kappa())),
        vec![t],
        diff.norm_max_on(&inner),
        tolerance::TDDE,
    ))
}

/// `‖h − h†‖_max / ‖h‖_max` of the time-dependent counterpart.
pub fn hermiticity_report(params: &ModelParams<f64>, space: &HilbertSpec, t: f64) -> Result<ResidualReport> {
    let h = hermitian_h_t(params, space, t)?;
    Ok(ResidualReport::new(
        format!("h_hermitian[kappa={},t={t}]", label(params.kappa())),
        vec![t],
        h.hermiticity_defect() / h.norm_max(),
        tolerance::HERMITICITY,
    ))
}

/// Lifts an operator of one JC system onto the two-system space.
pub fn lift_to_two_systems<T: Real>(
    op: &ComplexOperator<T>,
    single: &HilbertSpec,
    pair: &HilbertSpec,
    system: usize,
) -> ComplexOperator<T> {
    ComplexOperator::from_fn(pair.clone(), |i, j| {
        let (a, b) = (pair.digits(i), pair.digits(j));
        let other = 1 - system;
        if a[other] != b[other] || a[2 + other] != b[2 + other] {
            return re(T::zero());
        }
        op[(single.index(&[a[system], a[2 + system]]), single.index(&[b[system], b[2 + system]]))]
    })
}

/// Atomic reduced density matrix, ordered `(↑↑, ↓↑, ↑↓, ↓↓)`, by direct
/// contraction over both photon indices.
pub fn partial_trace_atoms<T: Real>(state: &[Complex<T>], space: &HilbertSpec) -> Result<AtomDensityMatrix<T>> {
    if space.spin_count() != 2 || space.mode_count() != 2 || state.len() != space.dim() {
        return Err(Error::InvalidSpace("partial trace needs a two-spin, two-mode state".into()));
    }
    let order = [(SPIN_UP, SPIN_UP), (SPIN_DOWN, SPIN_UP), (SPIN_UP, SPIN_DOWN), (SPIN_DOWN, SPIN_DOWN)];
    let cutoff = space.photon_cutoff().unwrap_or(0);
    let mut rho = [[re(T::zero()); 4]; 4];
    for (i, &(a, b)) in order.iter().enumerate() {
        for (j, &(c, d)) in order.iter().enumerate() {
            let mut acc = re(T::zero());
            for na in 0..cutoff {
                for nb in 0..cutoff {
                    acc = acc + state[space.index(&[a, b, na, nb])] * state[space.index(&[c, d, na, nb])].conj();
                }
            }
            rho[i][j] = acc;
        }
    }
    Ok(AtomDensityMatrix { rho, renormalization: T::zero() })
}

fn to_dmatrix(rho: &[[Complex<f64>; 4]; 4]) -> DMatrix<Complex<f64>> {
    DMatrix::from_fn(4, 4, |i, j| rho[i][j])
}

/// Wootters concurrence `max{0, λ₁−λ₂−λ₃−λ₄}` of an arbitrary two-qubit
/// density matrix. The `λ` are the singular values of `Vᵀ(σ_y⊗σ_y)V` with
/// `ρ = VV†`, which equal the square roots of the eigenvalues of
/// `ρ(σ_y⊗σ_y)ρ*(σ_y⊗σ_y)`.
pub fn wootters_concurrence_generic(rho: &AtomDensityMatrix<f64>) -> Result<f64> {
    let m = to_dmatrix(&rho.rho);
    let herm = (&m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    if herm > tolerance::PSD {
        return Err(Error::InvalidState(format!("density matrix is not Hermitian (defect {herm:e})")));
    }
    let tr = m.trace();
    if (tr - Complex::new(1.0, 0.0)).norm() > tolerance::PSD {
        return Err(Error::InvalidState(format!("density matrix trace is {tr}")));
    }
    let eig = m.symmetric_eigen();
    if let Some(bad) = eig.eigenvalues.iter().find(|&&l| l < -tolerance::PSD) {
        return Err(Error::InvalidState(format!("negative eigenvalue {bad:e}")));
    }
    let sqrt_l = DMatrix::from_fn(4, 4, |i, j| {
        if i == j { Complex::new(eig.eigenvalues[i].max(0.0).sqrt(), 0.0) } else { Complex::new(0.0, 0.0) }
    });
    let v = &eig.eigenvectors * sqrt_l;
    // σ_y ⊗ σ_y; the basis permutation (↑↓ ↔ ↓↑) leaves it unchanged
    let y = DMatrix::from_fn(4, 4, |i, j| Complex::new(if i + j == 3 { if i == 0 || i == 3 { -1.0 } else { 1.0 } } else { 0.0 }, 0.0));
    let tau = v.transpose() * y * v;
    let mut s: Vec<f64> = tau.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    Ok((s[0] - s[1] - s[2] - s[3]).max(0.0))
}

/// Eigenvalues of a dense complex matrix via a complex Schur decomposition.
pub fn dense_spectrum(op: &ComplexOperator<f64>) -> Result<Vec<Complex<f64>>> {
    let n = op.dim();
    let m = DMatrix::from_fn(n, n, |i, j| op[(i, j)]);
    m.schur().eigenvalues().map(|v| v.iter().copied().collect()).ok_or(Error::SingularMatrix)
}

/// Smallest eigenvalue of a Hermitian matrix, after confirming a Cholesky
/// factorisation exists. Errors if it is not positive-definite.
pub fn metric_min_eigenvalue(metric: &ComplexOperator<f64>) -> Result<f64> {
    let n = metric.dim();
    let m = DMatrix::from_fn(n, n, |i, j| metric[(i, j)]);
    if m.clone().cholesky().is_none() {
        return Err(Error::InvalidState("metric is not positive-definite".into()));
    }
    Ok(m.symmetric_eigen().eigenvalues.iter().copied().fold(f64::INFINITY, f64::min))
}

/// Largest distance from each `expected` value to its nearest `found` value.
pub fn spectrum_mismatch_raw(expected: &[Complex<f64>], found: &[Complex<f64>]) -> f64 {
    expected
        .iter()
        .map(|e| found.iter().map(|f| (e - f).norm()).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max)
}

/// Like [`spectrum_mismatch_raw`], but a group of `k` coincident expected
/// values (an exceptional point) is compared through the mean of the `k`
/// nearest found values. Individual eigenvalues of a defective block are only
/// determined to about `√ε` by any backward-stable solver, while the mean of
/// the cluster stays well-conditioned.
pub fn spectrum_mismatch(expected: &[Complex<f64>], found: &[Complex<f64>]) -> f64 {
    let scale = expected.iter().map(|e| e.norm()).fold(1.0, f64::max);
    let merge = 1e-6 * scale;
    let mut used = vec![false; expected.len()];
    let mut worst = 0.0f64;
    for i in 0..expected.len() {
        if used[i] {
            continue;
        }
        let members: Vec<usize> = (i..expected.len()).filter(|&j| !used[j] && (expected[j] - expected[i]).norm() <= merge).collect();
        for &j in &members {
            used[j] = true;
        }
        let k = members.len() as f64;
        let centre = members.iter().map(|&j| expected[j]).sum::<Complex<f64>>() / k;
        let mut near: Vec<&Complex<f64>> = found.iter().collect();
        near.sort_by(|a, b| (*a - centre).norm().total_cmp(&(*b - centre).norm()));
        if near.len() < members.len() {
            return f64::INFINITY;
        }
        let mean = near[..members.len()].iter().copied().sum::<Complex<f64>>() / k;
        worst = worst.max((mean - centre).norm());
    }
    worst
}

/// Raw amplitudes integrated from `t = 0` on the smallest exact two-system
/// space (cutoff `n + 3`) compared with `closed`, relative to `max(1, ‖ψ‖)`.
pub fn schrodinger_check<F>(cfg: &TwoSystemConfig<f64>, grid: &[f64], closed: F) -> Result<ResidualReport>
where
    F: Fn(f64) -> CoefficientSet<f64>,
{
    let space = HilbertSpec::two_jc(cfg.n + 3)?;
    let h = two_system_hamiltonian(&cfg.params, &space)?;
    let psi0 = closed(0.0).embed(cfg, &space)?;
    let traj = integrate_schrodinger(&h, &psi0, grid)?;
    let mut worst = 0.0f64;
    for (t, psi) in traj.times.iter().zip(&traj.states) {
        let want = closed(*t).embed(cfg, &space)?;
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt().max(1.0);
        let err = psi.iter().zip(&want).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        worst = worst.max(err / norm);
    }
    Ok(ResidualReport::new(
        format!("schrodinger[kappa={},n={}]", label(cfg.params.kappa()), cfg.n),
        grid.to_vec(),
        worst,
        tolerance::SCHRODINGER,
    ))
}

/// `η_a η_b` applied to the raw state versus the scalar transformed amplitudes.
pub fn matrix_path_check<R, Y>(cfg: &TwoSystemConfig<f64>, t: f64, raw: R, transformed: Y) -> Result<ResidualReport>
where
    R: Fn(f64) -> CoefficientSet<f64>,
    Y: Fn(f64) -> Result<CoefficientSet<f64>>,
{
    let cutoff = cfg.n + 3;
    let single = HilbertSpec::single_jc(cutoff)?;
    let pair = HilbertSpec::two_jc(cutoff)?;
    let eta = build_eta(&cfg.params, &single, t)?.eta;
    let eta_ab = &lift_to_two_systems(&eta, &single, &pair, 0) * &lift_to_two_systems(&eta, &single, &pair, 1);
    let mapped = eta_ab.apply(&raw(t).embed(cfg, &pair)?);
    let scalar = transformed(t)?.embed(cfg, &pair)?;
    let err = mapped.iter().zip(&scalar).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    Ok(ResidualReport::new(
        format!("matrix_vs_scalar_y[kappa={},n={},t={t}]", label(cfg.params.kappa()), cfg.n),
        vec![t],
        err,
        tolerance::MATRIX_PATH,
    ))
}

//! Two atoms in independent cavities, each evolving under its own copy of the
//! non-Hermitian JC Hamiltonian, prepared in
//! `sinγ|↓↓⟩ + cosγ|↑↑⟩` with cavity a empty and cavity b holding `n` photons.
//!
//! The non-Hermitian evolution reaches six basis states with amplitudes
//! `x₁…x₆`; mapping through `η_a η_b` gives the Hermitian-frame amplitudes
//! `y₁…y₆`, from which the atomic X-state and its concurrence follow.

use num_complex::Complex;

use crate::dyson_dynamic::coefficients;
use crate::error::{Error, Result};
use crate::fock::{HilbertSpec, SPIN_DOWN, SPIN_UP};
use crate::model::{classify, half_angle, ModelParams, Regime};
use crate::scalar::{c, re, Real};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoSystemConfig<T: Real> {
    pub params: ModelParams<T>,
    /// Photons initially in cavity b.
    pub n: usize,
    /// Initial-state angle.
    pub gamma: T,
}

impl<T: Real> TwoSystemConfig<T> {
    pub fn new(params: ModelParams<T>, n: usize, gamma: T) -> Self {
        Self { params, n, gamma }
    }

    /// Fock digits `[spin a, spin b, mode a, mode b]` of the six reachable
    /// basis states, in coefficient order. `None` for `x₂` when `n = 0`.
    pub fn basis_digits(&self) -> [Option<[usize; 4]>; 6] {
        let n = self.n;
        let (u, d) = (SPIN_UP, SPIN_DOWN);
        [
            Some([d, d, 0, n]),
            n.checked_sub(1).map(|k| [d, u, 0, k]),
            Some([u, u, 0, n]),
            Some([u, d, 0, n + 1]),
            Some([d, u, 1, n]),
            Some([d, d, 1, n + 1]),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoefficientKind {
    /// Amplitudes of the non-Hermitian evolution.
    Raw,
    /// Amplitudes after the Dyson map.
    Transformed,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientSet<T: Real> {
    pub kind: CoefficientKind,
    pub c: [Complex<T>; 6],
    pub t: T,
}

impl<T: Real> CoefficientSet<T> {
    pub fn norm_sqr(&self) -> T {
        self.c.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr())
    }

    /// Dense vector on a two-system space with photon cutoff above `n + 1`.
    pub fn embed(&self, cfg: &TwoSystemConfig<T>, space: &HilbertSpec) -> Result<Vec<Complex<T>>> {
        if space.spin_count() != 2 || space.mode_count() != 2 {
            return Err(Error::InvalidSpace("two spins and two modes required".into()));
        }
        let cutoff = space.photon_cutoff().unwrap_or(0);
        if cutoff < cfg.n + 2 {
            return Err(Error::InvalidSpace(format!("cutoff {cutoff} cannot hold n + 1 = {} photons", cfg.n + 1)));
        }
        let mut v = vec![re(T::zero()); space.dim()];
        for (amp, digits) in self.c.iter().zip(cfg.basis_digits()) {
            if let Some(d) = digits {
                v[space.index(&d)] = *amp;
            }
        }
        Ok(v)
    }
}

fn phase<T: Real>(theta: T) -> Complex<T> {
    Complex::from_polar(T::one(), theta)
}

/// `C + i(ω−ν)S` for slot `m`.
fn u_bracket<T: Real>(params: &ModelParams<T>, m: usize, t: T) -> Complex<T> {
    let (s, cc) = half_angle(params, m, t);
    c(cc, params.detuning() * s)
}

/// `U_m(t) = [cos(Ω_m t/2) + i(ω−ν) sin(Ω_m t/2)/Ω_m] e^{−i(m−1)ωt}`.
pub fn u_fn<T: Real>(params: &ModelParams<T>, m: usize, t: T) -> Complex<T> {
    u_bracket(params, m, t) * phase(-(T::from_index(m) - T::one()) * params.omega * t)
}

/// `D_m(t) = g√m sin(Ω_m t/2)/Ω_m · e^{−i(m−1)ωt}`.
pub fn d_fn<T: Real>(params: &ModelParams<T>, m: usize, t: T) -> Complex<T> {
    let (s, _) = half_angle(params, m, t);
    re(params.g * T::from_index(m).sqrt() * s) * phase(-(T::from_index(m) - T::one()) * params.omega * t)
}

/// `x₁…x₆` of the non-Hermitian evolution.
pub fn raw_coefficients<T: Real>(cfg: &TwoSystemConfig<T>, t: T) -> CoefficientSet<T> {
    let p = &cfg.params;
    let n = cfg.n;
    let (sg, cg) = cfg.gamma.sin_cos();
    let half = T::lit(0.5);
    let detune = phase(-p.detuning() * t * half);
    let shift = phase(-(T::from_index(n) - T::one()) * p.omega * t);
    let x1 = u_bracket(p, n, t).conj() * shift * detune * re(sg);
    let x2 = if n == 0 { re(T::zero()) } else { d_fn(p, n, t) * detune * re(sg) };
    let both = phase(-p.omega * t) * re(cg);
    let (u1, d1) = (u_fn(p, 1, t), d_fn(p, 1, t));
    let (un, dn) = (u_fn(p, n + 1, t), d_fn(p, n + 1, t));
    CoefficientSet {
        kind: CoefficientKind::Raw,
        c: [x1, x2, u1 * un * both, u1 * dn * both, d1 * un * both, d1 * dn * both],
        t,
    }
}

/// `y₁…y₆ = η_a η_b` applied to the raw amplitudes:
/// `y₁,₂ = x₁,₂ δ_n^{1/2}`, `y₃,₆ = x₃,₆ (δ₁δ_{n+1})^{1/2}`,
/// `y₄,₅ = −x₄,₅ (δ₁δ_{n+1})^{1/2}`.
pub fn transformed_coefficients<T: Real>(cfg: &TwoSystemConfig<T>, t: T) -> Result<CoefficientSet<T>> {
    let x = raw_coefficients(cfg, t);
    let p = &cfg.params;
    let dn = coefficients(p, cfg.n, t)?.delta.sqrt();
    let pair = (coefficients(p, 1, t)?.delta * coefficients(p, cfg.n + 1, t)?.delta).sqrt();
    let scale = [dn, dn, pair, -pair, -pair, pair];
    let mut y = x.c;
    for (z, s) in y.iter_mut().zip(scale) {
        *z = *z * re(s);
    }
    Ok(CoefficientSet { kind: CoefficientKind::Transformed, c: y, t })
}

/// Reduced two-atom density matrix in the basis `(↑↑, ↓↑, ↑↓, ↓↓)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomDensityMatrix<T: Real> {
    pub rho: [[Complex<T>; 4]; 4],
    /// `Σ|y|² − 1` before renormalisation; zero for states built elsewhere.
    pub renormalization: T,
}

impl<T: Real> AtomDensityMatrix<T> {
    pub fn trace(&self) -> Complex<T> {
        (0..4).map(|i| self.rho[i][i]).fold(re(T::zero()), |a, b| a + b)
    }

    /// Largest `|ρ_ij|` outside the X pattern (diagonal plus the ↑↑/↓↓ corners).
    pub fn x_pattern_defect(&self) -> T {
        let mut worst = T::zero();
        for i in 0..4 {
            for j in 0..4 {
                let allowed = i == j || (i, j) == (0, 3) || (i, j) == (3, 0);
                if !allowed {
                    worst = worst.max(self.rho[i][j].norm());
                }
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        let mut worst = T::zero();
        for i in 0..4 {
            for j in 0..4 {
                worst = worst.max((self.rho[i][j] - other.rho[i][j]).norm());
            }
        }
        worst
    }
}

fn normalised<T: Real>(y: &CoefficientSet<T>) -> ([Complex<T>; 6], T) {
    let norm = y.norm_sqr();
    let mut out = y.c;
    if norm > T::zero() {
        let s = norm.sqrt().recip();
        for z in out.iter_mut() {
            *z = *z * re(s);
        }
    }
    (out, norm - T::one())
}

/// Traces both photon modes out of the Hermitian-frame state.
pub fn reduced_density<T: Real>(y: &CoefficientSet<T>) -> AtomDensityMatrix<T> {
    let (y, correction) = normalised(y);
    let z = re(T::zero());
    let mut rho = [[z; 4]; 4];
    rho[0][0] = re(y[2].norm_sqr());
    rho[1][1] = re(y[1].norm_sqr() + y[4].norm_sqr());
    rho[2][2] = re(y[3].norm_sqr());
    rho[3][3] = re(y[0].norm_sqr() + y[5].norm_sqr());
    rho[0][3] = y[2] * y[0].conj();
    rho[3][0] = rho[0][3].conj();
    AtomDensityMatrix { rho, renormalization: correction }
}

/// Wootters concurrence of the X-state,
/// `C = max{0, 2|y₃||y₁| − 2|y₄|√(|y₂|² + |y₅|²)}`, after renormalising `y`.
///
/// This is `2(|ρ_{↑↑,↓↓}| − √(ρ_{↓↑}ρ_{↑↓}))`; the other X-state branch is
/// never positive here because `ρ_{↓↑,↑↓} = 0`.
pub fn concurrence<T: Real>(y: &CoefficientSet<T>) -> T {
    let (y, _) = normalised(y);
    let two = T::lit(2.0);
    let f = two * y[2].norm() * y[0].norm() - two * y[3].norm() * (y[1].norm_sqr() + y[4].norm_sqr()).sqrt();
    f.max(T::zero()).min(T::one())
}

/// `f = 2|y₃|√(|y₁|² + |y₆|²) − 2|y₄|√(|y₂|² + |y₅|²)`, i.e.
/// `2(√(ρ_{↑↑}ρ_{↓↓}) − √(ρ_{↓↑}ρ_{↑↓}))`. It bounds [`concurrence`] from
/// above and equals it whenever `y₆ = 0`; kept for comparison only.
pub fn diagonal_bound<T: Real>(y: &CoefficientSet<T>) -> T {
    let (y, _) = normalised(y);
    let two = T::lit(2.0);
    two * y[2].norm() * (y[0].norm_sqr() + y[5].norm_sqr()).sqrt()
        - two * y[3].norm() * (y[1].norm_sqr() + y[4].norm_sqr()).sqrt()
}

/// Concurrence at time `t`.
pub fn concurrence_at<T: Real>(cfg: &TwoSystemConfig<T>, t: T) -> Result<T> {
    transformed_coefficients(cfg, t).map(|y| concurrence(&y))
}

/// Long-time limit of [`concurrence`] when every frequency in the state is
/// broken (`κ < 1`): `max{0, cosγ(sinγ − ½cosγ)}` for `n = 0`, zero for
/// `n > 0`. `None` if some frequency is unbroken or exceptional.
pub fn asymptotic_concurrence<T: Real>(cfg: &TwoSystemConfig<T>) -> Option<T> {
    if frequency_census(cfg).iter().any(|(_, r)| *r != Regime::Broken) {
        return None;
    }
    if cfg.n > 0 {
        return Some(T::zero());
    }
    let (s, c) = cfg.gamma.sin_cos();
    Some((c * (s - c / T::lit(2.0))).max(T::zero()))
}

/// Long-time limit of [`diagonal_bound`] for `n = 0` in the broken regime,
/// `cosγ(√(sin²γ + ¼cos²γ) − ½cosγ)`.
pub fn asymptotic_diagonal_bound<T: Real>(gamma: T) -> T {
    let (s, c) = gamma.sin_cos();
    let q = T::lit(0.25);
    c * ((s * s + q * c * c).sqrt() - c / T::lit(2.0))
}

/// Frequency modes `Ω_m` present in the state and their regimes:
/// `{1}` for `n = 0`, `{1, 2}` for `n = 1`, `{1, n, n+1}` otherwise.
pub fn frequency_census<T: Real>(cfg: &TwoSystemConfig<T>) -> Vec<(usize, Regime)> {
    let modes: Vec<usize> = match cfg.n {
        0 => vec![1],
        1 => vec![1, 2],
        n => vec![1, n, n + 1],
    };
    modes.into_iter().map(|m| (m, classify(&cfg.params, m))).collect()
}

/// Ordered `(t, value)` samples plus the parameters that produced them.
/// A `None` value marks a time point where evaluation failed.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries<T: Real> {
    pub label: String,
    pub metadata: Vec<(String, String)>,
    pub samples: Vec<(T, Option<T>)>,
}

impl<T: Real> TimeSeries<T> {
    pub fn new(label: impl Into<String>) -> Self {
        Self { label: label.into(), metadata: Vec::new(), samples: Vec::new() }
    }

    pub fn with_meta(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.metadata.push((key.into(), value.to_string()));
        self
    }

    /// Number of flagged samples.
    pub fn flagged(&self) -> usize {
        self.samples.iter().filter(|(_, v)| v.is_none()).count()
    }
}

/// `C` sampled at each `gt/π` in `grid`. Failures are flagged, not fatal.
pub fn concurrence_series<T: Real>(cfg: &TwoSystemConfig<T>, grid: &[T]) -> TimeSeries<T> {
    let pi = T::lit(std::f64::consts::PI);
    let mut series = TimeSeries::new(format!("n={}", cfg.n))
        .with_meta("kappa", cfg.params.kappa().as_f64())
        .with_meta("n", cfg.n)
        .with_meta("gamma", cfg.gamma.as_f64());
    series.samples = grid
        .iter()
        .map(|&x| (x, concurrence_at(cfg, x * pi / cfg.params.g).ok().filter(|c| c.is_finite())))
        .collect();
    series
}

//! Time-dependent Dyson map `η(t) = e^{q_z(t)} e^{q_−(t)}` with `η(0) = I`.
//!
//! The map is number-diagonal up to one spin flip, so everything reduces to
//! four real functions per excitation slot `m` (the eigenvalue of `aa†` on
//! `|↑,m−1⟩`, equivalently of `a†a` on `|↓,m⟩`):
//!
//! * `δ_m = e^{2K_m} = 1/(1 + 2g²m S²)`
//! * `α_m = −2g√m S C δ_m`
//! * `β_m = 2g√m (ω−ν) S² δ_m`
//!
//! with `S = sin(Ω_m t/2)/Ω_m` and `C = cos(Ω_m t/2)`. They solve the
//! constraint equations
//! `K̇ = (g/2)√m α`,
//! `α̇ = (ω−ν)β − (g/2)√m(1 − α² + β²) − (g/2)√m e^{4K}`,
//! `β̇ = −(ω−ν)α + g√m αβ`
//! in both PT regimes, and `δ` stays positive for all real `t`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::fock::{annihilator, creator, number_function, spin_op, spin_projector, HilbertSpec, SpinOp};
use crate::model::{big_omega, classify, half_angle, jc_parts, ModelParams, Regime};
use crate::operator::ComplexOperator;
use crate::scalar::{c, i_unit, re, Real};

/// Coefficient functions of one excitation slot at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DysonCoefficients<T: Real> {
    pub slot: usize,
    pub t: T,
    pub delta: T,
    pub k: T,
    pub alpha: T,
    pub beta: T,
}

impl<T: Real> DysonCoefficients<T> {
    /// `f = α + iβ`.
    pub fn f(&self) -> Complex<T> {
        c(self.alpha, self.beta)
    }
}

/// `δ`, `K`, `α`, `β` for slot `m` at time `t`. Slot 0 (the vacuum of `a†a`)
/// is identically `δ = 1`, `α = β = 0`.
pub fn coefficients<T: Real>(params: &ModelParams<T>, slot: usize, t: T) -> Result<DysonCoefficients<T>> {
    let (s, cc) = half_angle(params, slot, t);
    let gs = params.g * T::from_index(slot).sqrt();
    let two = T::lit(2.0);
    let delta = (T::one() + two * gs * gs * s * s).recip();
    let alpha = -two * gs * s * cc * delta;
    let beta = two * gs * params.detuning() * s * s * delta;
    let k = delta.ln() / two;
    let finite = [delta, alpha, beta, k].iter().all(|x| x.is_finite());
    if !finite || delta <= T::zero() {
        return Err(Error::Singular { slot, t: t.as_f64() });
    }
    Ok(DysonCoefficients { slot, t, delta, k, alpha, beta })
}

pub fn delta_fn<T: Real>(params: &ModelParams<T>, slot: usize, t: T) -> Result<T> {
    coefficients(params, slot, t).map(|x| x.delta)
}

pub fn alpha_fn<T: Real>(params: &ModelParams<T>, slot: usize, t: T) -> Result<T> {
    coefficients(params, slot, t).map(|x| x.alpha)
}

pub fn beta_fn<T: Real>(params: &ModelParams<T>, slot: usize, t: T) -> Result<T> {
    coefficients(params, slot, t).map(|x| x.beta)
}

/// Integration constants of `σ_m(t) = √(c₂ cos(Ω_m t + c₃) + c₄)`, fixed by
/// `δ(0) = 1`, `α(0) = β(0) = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErmakovConstants<T: Real> {
    pub c1: T,
    pub c2: T,
    pub c3: T,
    pub c4: T,
}

impl<T: Real> ErmakovConstants<T> {
    pub fn new(params: &ModelParams<T>, slot: usize) -> Result<Self> {
        if slot == 0 {
            return Err(Error::InvalidParams("Ermakov constants need slot >= 1".into()));
        }
        let regime = classify(params, slot);
        if regime == Regime::Exceptional {
            return Err(Error::Regime { mode: slot, regime });
        }
        let d = params.detuning();
        let m = T::from_index(slot);
        let w2 = params.omega_sq(slot);
        Ok(Self {
            c1: -d / (params.g * m.sqrt()),
            c2: -params.g * params.g * m / w2,
            c3: T::zero(),
            c4: d * d / w2,
        })
    }

    /// Right-hand side strength `λ` in `σ̈ + ¼Ω²σ = λ σ⁻³`, `λ = ¼g²(1 + c₁²)m`.
    pub fn strength(&self, params: &ModelParams<T>, slot: usize) -> T {
        params.g * params.g * (T::one() + self.c1 * self.c1) * T::from_index(slot) / T::lit(4.0)
    }
}

/// `σ_m(t) = δ_m(t)^{−1/2}`, the Ermakov–Pinney solution. At the exceptional
/// point the constants diverge and `σ² = 1 + 2g²m t²/4` is used instead.
pub fn ermakov_sigma<T: Real>(params: &ModelParams<T>, slot: usize, t: T) -> Result<T> {
    let sq = match ErmakovConstants::new(params, slot) {
        Ok(k) => {
            let cos = (big_omega(params, slot) * re(t) + re(k.c3)).cos();
            k.c2 * cos.re + k.c4
        }
        Err(Error::Regime { .. }) => {
            let (s, _) = half_angle(params, slot, t);
            T::one() + T::lit(2.0) * params.g * params.g * T::from_index(slot) * s * s
        }
        Err(e) => return Err(e),
    };
    if !(sq > T::zero()) || !sq.is_finite() {
        return Err(Error::Singular { slot, t: t.as_f64() });
    }
    Ok(sq.sqrt())
}

fn require_single_jc(space: &HilbertSpec) -> Result<usize> {
    if space.spin_count() != 1 || space.mode_count() != 1 {
        return Err(Error::InvalidSpace("dynamic Dyson map needs one spin and one mode".into()));
    }
    Ok(space.photon_cutoff().unwrap_or(0))
}

/// Coefficients for slots `0..=cutoff`.
fn slot_table<T: Real>(params: &ModelParams<T>, cutoff: usize, t: T) -> Result<Vec<DysonCoefficients<T>>> {
    (0..=cutoff).map(|m| coefficients(params, m, t)).collect()
}

fn lookup<'a, T: Real, V>(
    table: &'a [DysonCoefficients<T>],
    get: impl Fn(&DysonCoefficients<T>) -> V + 'a,
) -> impl Fn(T) -> V + 'a {
    move |m: T| get(&table[m.round().to_usize().expect("slot index")])
}

/// Snapshot of the map at one time.
#[derive(Debug, Clone)]
pub struct DynamicDysonMap<T: Real> {
    pub params: ModelParams<T>,
    pub space: HilbertSpec,
    pub t: T,
    pub eta: ComplexOperator<T>,
    pub eta_inv: ComplexOperator<T>,
    /// `ρ = η†η`.
    pub metric: ComplexOperator<T>,
}

impl<T: Real> DynamicDysonMap<T> {
    /// `ηHη⁻¹`.
    pub fn transform(&self, h: &ComplexOperator<T>) -> ComplexOperator<T> {
        &(&self.eta * h) * &self.eta_inv
    }
}

/// Builds `η(t)`, its exact inverse `(I − q_−)e^{−q_z}` and the metric.
///
/// `q_z = ½K_{aa†}(I+σ_z) − ½K_{a†a}(I−σ_z)` is diagonal, so `e^{q_z}` is
/// evaluated entrywise; `q_− = a†(aa†)^{−1/2} f_{aa†} σ_−` squares to zero,
/// so `e^{q_−} = I + q_−`.
pub fn build_eta<T: Real>(params: &ModelParams<T>, space: &HilbertSpec, t: T) -> Result<DynamicDysonMap<T>> {
    let cutoff = require_single_jc(space)?;
    let table = slot_table(params, cutoff, t)?;
    let up = spin_projector::<T>(space, 0, true)?;
    let down = spin_projector::<T>(space, 0, false)?;
    let exp_k = |sign: T| {
        let shifted = number_function(space, 0, lookup(&table, |x| (sign * x.k).exp()), true)?;
        let plain = number_function(space, 0, lookup(&table, |x| (-sign * x.k).exp()), false)?;
        Ok::<_, Error>(&(&up * &shifted) + &(&down * &plain))
    };
    let exp_qz = exp_k(T::one())?;
    let exp_mqz = exp_k(-T::one())?;
    let f_over_root = number_function(space, 0, lookup(&table, |x| x.f() / re(T::from_index(x.slot).sqrt())), true)?;
    let q_minus = &(&creator::<T>(space, 0)? * &f_over_root) * &spin_op::<T>(space, SpinOp::Minus, 0)?;
    let id = ComplexOperator::identity(space.clone());
    let eta = &exp_qz * &(&id + &q_minus);
    let eta_inv = &(&id - &q_minus) * &exp_mqz;
    let metric = &eta.adjoint() * &eta;
    Ok(DynamicDysonMap { params: *params, space: space.clone(), t, eta, eta_inv, metric })
}

/// Time-dependent Hermitian counterpart
/// `h(t) = H₀ + (g/4)(aa†)^{1/2}β_{aa†}(I+σ_z) − (g/4)(a†a)^{1/2}β_{a†a}(I−σ_z)
///        + i(g/2)(a δ_{a†a} σ_+ − a† δ_{aa†} σ_−)`.
pub fn hermitian_h_t<T: Real>(params: &ModelParams<T>, space: &HilbertSpec, t: T) -> Result<ComplexOperator<T>> {
    let cutoff = require_single_jc(space)?;
    let table = slot_table(params, cutoff, t)?;
    let (h0, _) = jc_parts(params, space, 0)?;
    let half_g = params.g / T::lit(2.0);
    let root_beta = |x: &DysonCoefficients<T>| T::from_index(x.slot).sqrt() * x.beta;
    let up = &spin_projector::<T>(space, 0, true)? * &number_function(space, 0, lookup(&table, root_beta), true)?;
    let down = &spin_projector::<T>(space, 0, false)? * &number_function(space, 0, lookup(&table, root_beta), false)?;
    let diag = &(&up - &down) * half_g;
    let a = annihilator::<T>(space, 0)?;
    let ad = creator::<T>(space, 0)?;
    let raise = &(&a * &number_function(space, 0, lookup(&table, |x| x.delta), false)?)
        * &spin_op::<T>(space, SpinOp::Plus, 0)?;
    let lower = &(&ad * &number_function(space, 0, lookup(&table, |x| x.delta), true)?)
        * &spin_op::<T>(space, SpinOp::Minus, 0)?;
    let flip = (&raise - &lower).scale(i_unit::<T>() * re(half_g));
    Ok(&(&h0 + &diag) + &flip)
}

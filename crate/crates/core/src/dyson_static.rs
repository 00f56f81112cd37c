//! Time-independent Dyson map `η = e^{q/2}` taking `H` to a Hermitian,
//! number-diagonal `h = ηHη⁻¹` in the unbroken regime.
//!
//! `q` is built either from its small-coupling series
//! `q = g q₁ + g³ q₃ + g⁵ q₅ + …` or in closed form,
//! `q = i a†(aa†)^{−1/2} artanh(g(aa†)^{1/2}/(ω−ν)) σ_− − i a(a†a)^{−1/2} artanh(g(a†a)^{1/2}/(ω−ν)) σ_+`.

use crate::error::{Error, Result};
use crate::fock::{annihilator, creator, number_function, spin_op, spin_projector, HilbertSpec, SpinOp};
use crate::model::{classify, jc_parts, ModelParams, Regime};
use crate::operator::ComplexOperator;
use crate::scalar::{i_unit, re, Real};

fn require_single_jc(space: &HilbertSpec) -> Result<()> {
    if space.spin_count() != 1 || space.mode_count() != 1 {
        return Err(Error::InvalidSpace("static Dyson map needs one spin and one mode".into()));
    }
    Ok(())
}

/// `(H₀, H₁)` with `H = H₀ + iH₁`, `H₀ = ωa†a + ½νσ_z`, `H₁ = (g/2)(a†σ_− + aσ_+)`.
pub fn hamiltonian_parts<T: Real>(
    params: &ModelParams<T>,
    space: &HilbertSpec,
) -> Result<(ComplexOperator<T>, ComplexOperator<T>)> {
    require_single_jc(space)?;
    jc_parts(params, space, 0)
}

/// The series operator `q_order` (without its `g^order` prefactor), for
/// `order ∈ {1, 3, 5}`:
/// `q_{2k+1} = i/((2k+1)(ω−ν)^{2k+1}) · (a†(aa†)^k σ_− − (aa†)^k a σ_+)`.
pub fn q_perturbative<T: Real>(params: &ModelParams<T>, space: &HilbertSpec, order: u32) -> Result<ComplexOperator<T>> {
    require_single_jc(space)?;
    if !matches!(order, 1 | 3 | 5) {
        return Err(Error::InvalidParams(format!("series order must be 1, 3 or 5 (got {order})")));
    }
    let d = params.detuning();
    if d == T::zero() {
        return Err(Error::ZeroDetuning);
    }
    let a = annihilator::<T>(space, 0)?;
    let ad = creator::<T>(space, 0)?;
    let sm = spin_op::<T>(space, SpinOp::Minus, 0)?;
    let sp = spin_op::<T>(space, SpinOp::Plus, 0)?;
    let aad = &a * &ad;
    let mut lower = ad.clone();
    let mut raise = a.clone();
    for _ in 0..(order - 1) / 2 {
        lower = &lower * &aad;
        raise = &aad * &raise;
    }
    let prefactor = i_unit::<T>() / re(T::from_index(order as usize) * d.powi(order as i32));
    Ok((&(&lower * &sm) - &(&raise * &sp)).scale(prefactor))
}

/// First level `m ≤ cutoff` that is not in the unbroken regime.
fn first_non_unbroken<T: Real>(params: &ModelParams<T>, cutoff: usize) -> Option<(usize, Regime)> {
    (1..=cutoff).map(|m| (m, classify(params, m))).find(|(_, r)| *r != Regime::Unbroken)
}

fn check_static_domain<T: Real>(params: &ModelParams<T>, space: &HilbertSpec) -> Result<()> {
    require_single_jc(space)?;
    if params.detuning() == T::zero() {
        return Err(Error::ZeroDetuning);
    }
    let cutoff = space.photon_cutoff().unwrap_or(0);
    match first_non_unbroken(params, cutoff) {
        Some((mode, regime)) => Err(Error::Regime { mode, regime }),
        None => Ok(()),
    }
}

/// Closed-form exponent `q` (Hermitian). Every retained level must be unbroken.
pub fn q_closed<T: Real>(params: &ModelParams<T>, space: &HilbertSpec) -> Result<ComplexOperator<T>> {
    check_static_domain(params, space)?;
    let d = params.detuning();
    let g = params.g;
    // artanh(g√m/D)/√m, with its m → 0 limit g/D on the vacuum slot
    let f = move |m: T| if m == T::zero() { g / d } else { (g * m.sqrt() / d).atanh() / m.sqrt() };
    let lower = &creator::<T>(space, 0)? * &number_function(space, 0, f, true)?;
    let raise = &annihilator::<T>(space, 0)? * &number_function(space, 0, f, false)?;
    let sm = spin_op::<T>(space, SpinOp::Minus, 0)?;
    let sp = spin_op::<T>(space, SpinOp::Plus, 0)?;
    Ok((&(&lower * &sm) - &(&raise * &sp)).scale(i_unit()))
}

/// Diagonal Hermitian counterpart
/// `h = ω(a†a + σ_z/2) − ¼(I+σ_z)Ω_{aa†} + ¼(I−σ_z)Ω_{a†a}`,
/// with `Ω` carrying the sign of `ω−ν`. It places `E_n^−` on `|↑,n⟩` and
/// `E_n^+` on `|↓,n+1⟩` when `ω > ν`.
pub fn hermitian_counterpart<T: Real>(params: &ModelParams<T>, space: &HilbertSpec) -> Result<ComplexOperator<T>> {
    check_static_domain(params, space)?;
    let d = params.detuning();
    let g = params.g;
    let omega = move |m: T| d.signum() * (d * d - m * g * g).sqrt();
    let ad = creator::<T>(space, 0)?;
    let a = annihilator::<T>(space, 0)?;
    let sz = spin_op::<T>(space, SpinOp::Z, 0)?;
    let half = T::lit(0.5);
    let free = &(&(&ad * &a) + &(&sz * half)) * params.omega;
    let up = &spin_projector::<T>(space, 0, true)? * &number_function(space, 0, omega, true)?;
    let down = &spin_projector::<T>(space, 0, false)? * &number_function(space, 0, omega, false)?;
    Ok(&(&free - &(&up * half)) + &(&down * half))
}

/// Static Dyson map `η = e^{q/2}` with metric `η†η = e^{q}`.
#[derive(Debug, Clone)]
pub struct StaticDysonMap<T: Real> {
    pub params: ModelParams<T>,
    pub q: ComplexOperator<T>,
    pub eta: ComplexOperator<T>,
    pub eta_inv: ComplexOperator<T>,
}

impl<T: Real> StaticDysonMap<T> {
    pub fn new(params: &ModelParams<T>, space: &HilbertSpec) -> Result<Self> {
        let q = q_closed(params, space)?;
        let half = q.scale(re(T::lit(0.5)));
        Ok(Self { params: *params, eta: half.exp(), eta_inv: (-&half).exp(), q })
    }

    /// `ηHη⁻¹`.
    pub fn transform(&self, h: &ComplexOperator<T>) -> ComplexOperator<T> {
        &(&self.eta * h) * &self.eta_inv
    }

    /// `ρ = η†η = e^q`.
    pub fn metric(&self) -> ComplexOperator<T> {
        &self.eta.adjoint() * &self.eta
    }
}

/// `g q₁ + g³ q₃ + g⁵ q₅`.
pub fn q_series<T: Real>(params: &ModelParams<T>, space: &HilbertSpec) -> Result<ComplexOperator<T>> {
    let g = params.g;
    let mut acc = ComplexOperator::zeros(space.clone());
    for order in [1u32, 3, 5] {
        let term = q_perturbative(params, space, order)?;
        acc = &acc + &(&term * g.powi(order as i32));
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{exact_spectrum, hamiltonian};
    use crate::scalar::c;

    fn space(n: usize) -> HilbertSpec {
        HilbertSpec::single_jc(n).unwrap()
    }

    #[test]
    fn first_order_commutator_is_exact() {
        let s = space(12);
        for p in [ModelParams::<f64>::new(3.0, 1.0, 1.0).unwrap(), ModelParams::<f64>::new(1.0, 2.5, 0.3).unwrap()] {
            let (h0, h1) = hamiltonian_parts(&p, &s).unwrap();
            let q1 = q_perturbative(&p, &s, 1).unwrap();
            let lhs = h0.commutator(&q1);
            let rhs = h1.scale(c(0.0, 2.0 / p.g));
            assert!((&lhs - &rhs).norm_max() < 1e-12);
        }
    }

    #[test]
    fn higher_order_commutators_away_from_cutoff() {
        let s = space(12);
        let p = ModelParams::<f64>::new(3.0, 1.0, 0.7).unwrap();
        let inner = s.interior_indices(2);
        let (h0, h1) = hamiltonian_parts(&p, &s).unwrap();
        let q1 = q_perturbative(&p, &s, 1).unwrap();
        let q3 = q_perturbative(&p, &s, 3).unwrap();
        let q5 = q_perturbative(&p, &s, 5).unwrap();
        let k = c(0.0, 1.0 / (6.0 * p.g));
        let rhs3 = q1.commutator(&q1.commutator(&h1)).scale(k);
        assert!((&h0.commutator(&q3) - &rhs3).norm_max_on(&inner) < 1e-10);
        let nested = q1.commutator(&q1.commutator(&q1.commutator(&q1.commutator(&h1))));
        let cross = &q1.commutator(&q3.commutator(&h1)) + &q3.commutator(&q1.commutator(&h1));
        let with_minus = (&cross - &(&nested * (1.0 / 60.0))).scale(k);
        let with_plus = (&cross + &(&nested * (1.0 / 60.0))).scale(k);
        let lhs5 = h0.commutator(&q5);
        assert!((&lhs5 - &with_minus).norm_max_on(&inner) < 1e-10);
        assert!((&lhs5 - &with_plus).norm_max_on(&inner) > 1e-3);
    }

    #[test]
    fn q1_on_excited_doublet() {
        let s = space(4);
        let p = ModelParams::<f64>::new(3.0, 1.0, 1.0).unwrap();
        let q1 = q_perturbative(&p, &s, 1).unwrap();
        let mut v = vec![c(0.0, 0.0); s.dim()];
        v[s.index(&[1, 1])] = c(1.0, 0.0);
        let out = q1.apply(&v);
        for (i, z) in out.iter().enumerate() {
            let want = if i == s.index(&[0, 0]) { c(0.0, -0.5) } else { c(0.0, 0.0) };
            assert!((z - want).norm() < 1e-15);
        }
    }

    #[test]
    fn zero_detuning_and_bad_order() {
        let s = space(4);
        let p = ModelParams::<f64>::new(1.0, 1.0, 1.0).unwrap();
        assert_eq!(q_perturbative(&p, &s, 1).unwrap_err(), Error::ZeroDetuning);
        assert_eq!(q_closed(&p, &s).unwrap_err(), Error::ZeroDetuning);
        let ok = ModelParams::<f64>::new(3.0, 1.0, 1.0).unwrap();
        assert!(q_perturbative(&ok, &s, 2).is_err());
    }

    #[test]
    fn closed_form_needs_unbroken_levels() {
        let p = ModelParams::<f64>::from_kappa(2.0).unwrap();
        assert_eq!(q_closed(&p, &space(3)).map(|_| ()), Ok(()));
        assert_eq!(
            q_closed(&p, &space(5)).unwrap_err(),
            Error::Regime { mode: 4, regime: Regime::Exceptional }
        );
        let b = ModelParams::<f64>::from_kappa(2.5).unwrap();
        assert_eq!(hermitian_counterpart(&b, &space(8)).unwrap_err(), Error::Regime { mode: 7, regime: Regime::Broken });
    }

    #[test]
    fn closed_q_is_hermitian_with_artanh_element() {
        let s = space(12);
        let p = ModelParams::<f64>::from_kappa(5.0).unwrap();
        let q = q_closed(&p, &s).unwrap();
        assert!(q.hermiticity_defect() < 1e-12);
        let el = q[(s.index(&[0, 0]), s.index(&[1, 1]))];
        assert!((el - c(0.0, -(0.2f64).atanh())).norm() < 1e-15);
    }

    #[test]
    fn closed_matches_series_at_seventh_order() {
        let s = space(12);
        let diff = |g: f64| {
            let p = ModelParams::<f64>::new(2.0, 1.0, g).unwrap();
            (&q_closed(&p, &s).unwrap() - &q_series(&p, &s).unwrap()).norm_max()
        };
        let ratio = diff(1e-2) / diff(5e-3);
        assert!((ratio / 128.0 - 1.0).abs() < 0.1, "ratio {ratio}");
        let tiny = ModelParams::<f64>::new(2.0, 1.0, 1e-9).unwrap();
        assert!(q_closed(&tiny, &s).unwrap().norm_max() < 1e-8);
    }

    #[test]
    fn counterpart_is_diagonal_and_matches_spectrum() {
        let s = space(6);
        let p = ModelParams::<f64>::new(5.0, 1.0, 1.0).unwrap();
        let h = hermitian_counterpart(&p, &s).unwrap();
        assert!(h.is_diagonal());
        assert_eq!(h.hermiticity_defect(), 0.0);
        for e in exact_spectrum(&p, 4) {
            assert!((h[(s.index(&[0, e.n]), s.index(&[0, e.n]))] - e.e_minus).norm() < 1e-12);
            let k = s.index(&[1, e.n + 1]);
            assert!((h[(k, k)] - e.e_plus).norm() < 1e-12);
        }
        let g0 = s.index(&[1, 0]);
        assert!((h[(g0, g0)].re + 0.5).abs() < 1e-14);
    }

    #[test]
    fn similarity_transform_gives_counterpart() {
        let s = space(12);
        let inner = s.interior_indices(2);
        for p in [ModelParams::<f64>::new(5.0, 1.0, 1.0).unwrap(), ModelParams::<f64>::new(1.0, 6.0, 1.0).unwrap()] {
            let map = StaticDysonMap::new(&p, &s).unwrap();
            let h = hermitian_counterpart(&p, &s).unwrap();
            let mapped = map.transform(&hamiltonian(&p, &s).unwrap());
            assert!((&mapped - &h).norm_max_on(&inner) < 1e-8);
            assert!(map.metric().hermiticity_defect() < 1e-12);
        }
    }
}

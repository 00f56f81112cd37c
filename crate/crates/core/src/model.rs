//! The non-Hermitian Jaynes–Cummings Hamiltonian
//! `H = ω a†a + ½ν σ_z + i(g/2)(aσ_+ + a†σ_−)`, its exact spectrum and the
//! PT-regime of each frequency mode `Ω_m = √((ω−ν)² − m g²)`.

use std::fmt;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::fock::{annihilator, creator, spin_op, HilbertSpec, SpinOp, SPIN_DOWN, SPIN_UP};
use crate::operator::ComplexOperator;
use crate::scalar::{c, i_unit, re, sqrt_real, Real};

/// Relative tolerance used to call `κ² = m` an exceptional point.
pub const EXCEPTIONAL_TOL: f64 = 1e-12;

/// Field frequency `omega`, atomic splitting `nu` and coupling `g`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams<T: Real> {
    pub omega: T,
    pub nu: T,
    pub g: T,
}

impl<T: Real> ModelParams<T> {
    pub fn new(omega: T, nu: T, g: T) -> Result<Self> {
        if !(omega.is_finite() && nu.is_finite() && g.is_finite()) {
            return Err(Error::InvalidParams("parameters must be finite".into()));
        }
        if omega <= T::zero() || nu <= T::zero() {
            return Err(Error::InvalidParams(format!("omega and nu must be positive (omega={omega}, nu={nu})")));
        }
        if g == T::zero() {
            return Err(Error::InvalidParams("coupling g must be nonzero".into()));
        }
        Ok(Self { omega, nu, g })
    }

    /// Nondimensionalised parameters `g = 1, ν = 1, ω = 1 + κ`.
    pub fn from_kappa(kappa: T) -> Result<Self> {
        Self::new(T::one() + kappa, T::one(), T::one())
    }

    /// Parameters with `g = 0`, for limit checks only.
    pub fn uncoupled(omega: T, nu: T) -> Self {
        Self { omega, nu, g: T::zero() }
    }

    /// `ω − ν`.
    pub fn detuning(&self) -> T {
        self.omega - self.nu
    }

    /// `κ = (ω − ν)/g`.
    pub fn kappa(&self) -> T {
        self.detuning() / self.g
    }

    /// `Ω_m² = (ω−ν)² − m g²`, real in every regime.
    pub fn omega_sq(&self, m: usize) -> T {
        let d = self.detuning();
        d * d - T::from_index(m) * self.g * self.g
    }

    /// Scales all three frequencies by `s`.
    pub fn rescaled(&self, s: T) -> Self {
        Self { omega: self.omega * s, nu: self.nu * s, g: self.g * s }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    Unbroken,
    Exceptional,
    Broken,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::Unbroken => "unbroken",
            Regime::Exceptional => "exceptional",
            Regime::Broken => "broken",
        })
    }
}

/// `Ω_m` on the principal branch: real for `κ² ≥ m`, `+i|Ω_m|` otherwise.
pub fn big_omega<T: Real>(params: &ModelParams<T>, m: usize) -> Complex<T> {
    sqrt_real(params.omega_sq(m))
}

/// `|Ω t/2|` below which [`half_angle`] switches to its Taylor series.
pub const TAYLOR_SWITCH: f64 = 1e-4;

/// `(sin(Ω_m t/2)/Ω_m, cos(Ω_m t/2))`.
///
/// Both are real in every regime (they are even in `Ω_m`). Away from the
/// exceptional point they are evaluated with complex `Ω_m`; close to it a
/// series in `Ω_m²t²` takes over, giving `(t/2, 1)` exactly at `Ω_m = 0`.
pub fn half_angle<T: Real>(params: &ModelParams<T>, m: usize, t: T) -> (T, T) {
    let w2 = params.omega_sq(m);
    let x2 = w2 * t * t / T::lit(4.0);
    let switch = T::lit(TAYLOR_SWITCH);
    if x2.abs() < switch * switch {
        let s = t / T::lit(2.0) * (T::one() - x2 / T::lit(6.0) + x2 * x2 / T::lit(120.0));
        let c = T::one() - x2 / T::lit(2.0) + x2 * x2 / T::lit(24.0);
        return (s, c);
    }
    let om = big_omega(params, m);
    let z = om * re(t / T::lit(2.0));
    let s = z.sin() / om;
    let c = z.cos();
    debug_assert!(s.im.abs() <= T::lit(1e-10) * s.re.abs().max(T::one()));
    debug_assert!(c.im.abs() <= T::lit(1e-10) * c.re.abs().max(T::one()));
    (s.re, c.re)
}

/// PT regime of frequency mode `m`.
pub fn classify<T: Real>(params: &ModelParams<T>, m: usize) -> Regime {
    let d = params.detuning();
    let mm = T::from_index(m);
    if params.g == T::zero() {
        return if d != T::zero() { Regime::Unbroken } else { Regime::Exceptional };
    }
    let k2 = (d / params.g) * (d / params.g);
    let tol = T::lit(EXCEPTIONAL_TOL) * k2.max(T::one());
    if (k2 - mm).abs() <= tol {
        Regime::Exceptional
    } else if k2 > mm {
        Regime::Unbroken
    } else {
        Regime::Broken
    }
}

fn require_single_jc(space: &HilbertSpec) -> Result<()> {
    if space.spin_count() != 1 || space.mode_count() != 1 {
        return Err(Error::InvalidSpace(format!(
            "expected one spin and one mode, got {} spins and {} modes",
            space.spin_count(),
            space.mode_count()
        )));
    }
    Ok(())
}

/// Builds `ω a†a + ½ν σ_z` and `(g/2)(a†σ_− + aσ_+)` for system `index` of `space`.
pub(crate) fn jc_parts<T: Real>(
    params: &ModelParams<T>,
    space: &HilbertSpec,
    index: usize,
) -> Result<(ComplexOperator<T>, ComplexOperator<T>)> {
    let a = annihilator::<T>(space, index)?;
    let ad = creator::<T>(space, index)?;
    let sz = spin_op::<T>(space, SpinOp::Z, index)?;
    let sp = spin_op::<T>(space, SpinOp::Plus, index)?;
    let sm = spin_op::<T>(space, SpinOp::Minus, index)?;
    let half = T::lit(0.5);
    let h0 = &(&(&ad * &a) * params.omega) + &(&sz * (half * params.nu));
    let h1 = &(&(&ad * &sm) + &(&a * &sp)) * (half * params.g);
    Ok((h0, h1))
}

/// `H = H₀ + iH₁` on a one-atom, one-mode space.
pub fn hamiltonian<T: Real>(params: &ModelParams<T>, space: &HilbertSpec) -> Result<ComplexOperator<T>> {
    require_single_jc(space)?;
    let (h0, h1) = jc_parts(params, space, 0)?;
    Ok(&h0 + &h1.scale(i_unit()))
}

/// Sum of two uncoupled copies of `H` on the two-atom, two-mode space.
pub fn two_system_hamiltonian<T: Real>(
    params: &ModelParams<T>,
    space: &HilbertSpec,
) -> Result<ComplexOperator<T>> {
    if space.spin_count() != 2 || space.mode_count() != 2 {
        return Err(Error::InvalidSpace("two-system Hamiltonian needs two spins and two modes".into()));
    }
    let (h0a, h1a) = jc_parts(params, space, 0)?;
    let (h0b, h1b) = jc_parts(params, space, 1)?;
    let h0 = &h0a + &h0b;
    let h1 = &h1a + &h1b;
    Ok(&h0 + &h1.scale(i_unit()))
}

/// Energy pair of the `{|↑,n⟩, |↓,n+1⟩}` doublet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenPair<T: Real> {
    pub n: usize,
    pub e_plus: Complex<T>,
    pub e_minus: Complex<T>,
    /// `α = artanh(g√(n+1)/(ω−ν))`; `None` at zero detuning.
    pub angle_alpha: Option<Complex<T>>,
}

pub fn ground_energy<T: Real>(params: &ModelParams<T>) -> T {
    -params.nu / T::lit(2.0)
}

/// `E_n^± = ω(n+½) ± ½Ω_{n+1}` for `n = 0..=n_max`.
pub fn exact_spectrum<T: Real>(params: &ModelParams<T>, n_max: usize) -> Vec<EigenPair<T>> {
    let half = T::lit(0.5);
    (0..=n_max)
        .map(|n| {
            let centre = re(params.omega * (T::from_index(n) + half));
            let om = big_omega(params, n + 1).scale(half);
            let d = params.detuning();
            let angle_alpha = (d != T::zero())
                .then(|| re(params.g * T::from_index(n + 1).sqrt() / d).atanh());
            EigenPair { n, e_plus: centre + om, e_minus: centre - om, angle_alpha }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
    Ground,
}

/// One `(spin, photon number, amplitude)` component of a single-JC state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisTerm<T: Real> {
    pub spin: usize,
    pub photons: usize,
    pub amplitude: Complex<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Eigenstate<T: Real> {
    pub n: usize,
    pub branch: Branch,
    pub terms: Vec<BasisTerm<T>>,
}

impl<T: Real> Eigenstate<T> {
    /// Dense vector on a single-JC space.
    pub fn to_vector(&self, space: &HilbertSpec) -> Result<Vec<Complex<T>>> {
        require_single_jc(space)?;
        let cutoff = space.photon_cutoff().unwrap_or(0);
        let mut v = vec![c(T::zero(), T::zero()); space.dim()];
        for t in &self.terms {
            if t.photons >= cutoff {
                return Err(Error::InvalidSpace(format!("Fock level {} exceeds cutoff {cutoff}", t.photons)));
            }
            v[space.index(&[t.spin, t.photons])] = t.amplitude;
        }
        Ok(v)
    }
}

/// Eigenvector of `H` for `E_n^±` (or the ground state `|↓,0⟩`).
///
/// In the unbroken regime the amplitudes are the `cosh(α/2)/√cosh α`,
/// `sinh(α/2)/√cosh α` pair and the state has unit norm. With
/// `continuation = true` the same expressions are continued to complex `α`
/// in the broken regime, keeping `cosh²(α/2) + sinh²(α/2) = 1`. The
/// exceptional point has no normalisable eigenvector.
pub fn eigenstate<T: Real>(
    params: &ModelParams<T>,
    n: usize,
    branch: Branch,
    continuation: bool,
) -> Result<Eigenstate<T>> {
    if branch == Branch::Ground {
        return Ok(Eigenstate {
            n: 0,
            branch,
            terms: vec![BasisTerm { spin: SPIN_DOWN, photons: 0, amplitude: re(T::one()) }],
        });
    }
    let m = n + 1;
    match classify(params, m) {
        Regime::Unbroken => {}
        Regime::Broken if continuation => {}
        regime => return Err(Error::Regime { mode: m, regime }),
    }
    // tan-half ratio τ = tanh(α/2) = g√m / (D + Ω) = (D − Ω)/(g√m)
    let d = re(params.detuning());
    let gs = re(params.g * T::from_index(m).sqrt());
    let om = big_omega(params, m);
    let tau = if (d + om).norm() >= (d - om).norm() { gs / (d + om) } else { (d - om) / gs };
    let one = re(T::one());
    // (cos, sin) with cos² + sin² = 1 (bilinear); cos ∝ cosh(α/2), sin ∝ sinh(α/2)
    let (ch, sh) = if tau.norm() <= T::one() {
        let ch = (one + tau * tau).sqrt().inv();
        (ch, ch * tau)
    } else {
        let r = tau.inv();
        let sh = (one + r * r).sqrt().inv();
        (sh * r, sh)
    };
    let i = i_unit::<T>();
    let (up, down) = match branch {
        Branch::Minus => (ch, -i * sh),
        Branch::Plus => (i * sh, ch),
        Branch::Ground => unreachable!(),
    };
    Ok(Eigenstate {
        n,
        branch,
        terms: vec![
            BasisTerm { spin: SPIN_UP, photons: n, amplitude: up },
            BasisTerm { spin: SPIN_DOWN, photons: n + 1, amplitude: down },
        ],
    })
}

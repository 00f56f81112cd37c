//! Truncated bosonic and spin operators over a composite Hilbert space.
//!
//! The basis of a [`HilbertSpec`] is the row-major product of its factors in
//! declaration order. Canonical spaces put every spin factor first and the
//! photon modes after them, so the two-system space is ordered
//! `(atom a) ⊗ (atom b) ⊗ (mode a) ⊗ (mode b)`. A spin factor uses index 0 for
//! `|↑⟩` and index 1 for `|↓⟩`; a mode factor with cutoff `N` keeps
//! `|0⟩ … |N−1⟩`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::operator::ComplexOperator;
use crate::scalar::{re, Real};

/// Default photon cutoff used by the CLI and the acceptance suite.
pub const DEFAULT_CUTOFF: usize = 12;

pub const SPIN_UP: usize = 0;
pub const SPIN_DOWN: usize = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Factor {
    Spin,
    Mode(usize),
}

impl Factor {
    pub fn dim(self) -> usize {
        match self {
            Factor::Spin => 2,
            Factor::Mode(n) => n,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HilbertSpec {
    factors: Vec<Factor>,
}

impl HilbertSpec {
    /// Canonical space: `spin_count` spins followed by `mode_count` photon
    /// modes, each truncated to `photon_cutoff` Fock states.
    pub fn new(photon_cutoff: usize, spin_count: usize, mode_count: usize) -> Result<Self> {
        if spin_count > 2 || mode_count > 2 {
            return Err(Error::InvalidSpace(format!(
                "at most two spins and two modes are supported (got {spin_count} spins, {mode_count} modes)"
            )));
        }
        if mode_count > 0 && photon_cutoff == 0 {
            return Err(Error::InvalidSpace("photon cutoff must be positive".into()));
        }
        let mut factors = vec![Factor::Spin; spin_count];
        factors.extend(std::iter::repeat_n(Factor::Mode(photon_cutoff), mode_count));
        Ok(Self { factors })
    }

    /// One atom and one cavity mode.
    pub fn single_jc(photon_cutoff: usize) -> Result<Self> {
        Self::new(photon_cutoff, 1, 1)
    }

    /// Two atoms and two cavity modes.
    pub fn two_jc(photon_cutoff: usize) -> Result<Self> {
        Self::new(photon_cutoff, 2, 2)
    }

    pub fn spin() -> Self {
        Self { factors: vec![Factor::Spin] }
    }

    pub fn mode(photon_cutoff: usize) -> Result<Self> {
        Self::new(photon_cutoff, 0, 1)
    }

    /// Product space `self ⊗ other` (factor lists concatenated).
    pub fn compose(&self, other: &HilbertSpec) -> HilbertSpec {
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&other.factors);
        HilbertSpec { factors }
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn dim(&self) -> usize {
        self.factors.iter().map(|f| f.dim()).product()
    }

    pub fn spin_count(&self) -> usize {
        self.factors.iter().filter(|f| matches!(f, Factor::Spin)).count()
    }

    pub fn mode_count(&self) -> usize {
        self.factors.iter().filter(|f| matches!(f, Factor::Mode(_))).count()
    }

    /// Cutoff of the first photon mode, if any.
    pub fn photon_cutoff(&self) -> Option<usize> {
        self.factors.iter().find_map(|f| match f {
            Factor::Mode(n) => Some(*n),
            Factor::Spin => None,
        })
    }

    fn position_of_mode(&self, mode: usize) -> Result<usize> {
        self.factors
            .iter()
            .enumerate()
            .filter(|(_, f)| matches!(f, Factor::Mode(_)))
            .nth(mode)
            .map(|(p, _)| p)
            .ok_or(Error::InvalidMode { index: mode, count: self.mode_count() })
    }

    fn position_of_spin(&self, atom: usize) -> Result<usize> {
        self.factors
            .iter()
            .enumerate()
            .filter(|(_, f)| matches!(f, Factor::Spin))
            .nth(atom)
            .map(|(p, _)| p)
            .ok_or(Error::InvalidAtom { index: atom, count: self.spin_count() })
    }

    /// Flat basis index of a digit tuple (one digit per factor).
    pub fn index(&self, digits: &[usize]) -> usize {
        assert_eq!(digits.len(), self.factors.len(), "one digit per factor");
        digits.iter().zip(&self.factors).fold(0, |acc, (&d, f)| {
            debug_assert!(d < f.dim());
            acc * f.dim() + d
        })
    }

    /// Inverse of [`HilbertSpec::index`].
    pub fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.factors.len()];
        for (slot, f) in out.iter_mut().zip(&self.factors).rev() {
            *slot = index % f.dim();
            index /= f.dim();
        }
        out
    }

    /// Basis indices whose photon occupations are all below `level`.
    ///
    /// Used to exclude the truncation edge from similarity-transform checks.
    pub fn indices_below(&self, level: usize) -> Vec<usize> {
        (0..self.dim())
            .filter(|&i| {
                self.digits(i)
                    .iter()
                    .zip(&self.factors)
                    .all(|(&d, f)| matches!(f, Factor::Spin) || d < level)
            })
            .collect()
    }

    /// Indices that stay clear of the top `guard` Fock levels of every mode.
    pub fn interior_indices(&self, guard: usize) -> Vec<usize> {
        let cutoff = self.photon_cutoff().unwrap_or(0);
        self.indices_below(cutoff.saturating_sub(guard))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpinOp {
    Plus,
    Minus,
    Z,
}

/// Embeds a single-factor matrix (`local`, row-major `d×d`) at factor `pos`.
fn embed<T: Real>(space: &HilbertSpec, pos: usize, local: &[Complex<T>]) -> ComplexOperator<T> {
    let d = space.factors[pos].dim();
    debug_assert_eq!(local.len(), d * d);
    let left: usize = space.factors[..pos].iter().map(|f| f.dim()).product();
    let right: usize = space.factors[pos + 1..].iter().map(|f| f.dim()).product();
    let mut op = ComplexOperator::zeros(space.clone());
    for l in 0..left {
        for a in 0..d {
            for b in 0..d {
                let v = local[a * d + b];
                if v == Complex::new(T::zero(), T::zero()) {
                    continue;
                }
                for r in 0..right {
                    let i = (l * d + a) * right + r;
                    let j = (l * d + b) * right + r;
                    op[(i, j)] = v;
                }
            }
        }
    }
    op
}

/// Truncated annihilation operator `a` on photon mode `mode`:
/// `⟨n−1|a|n⟩ = √n`, identity on every other factor.
pub fn annihilator<T: Real>(space: &HilbertSpec, mode: usize) -> Result<ComplexOperator<T>> {
    let pos = space.position_of_mode(mode)?;
    let n = space.factors[pos].dim();
    let mut local = vec![Complex::new(T::zero(), T::zero()); n * n];
    for k in 1..n {
        local[(k - 1) * n + k] = re(T::from_index(k).sqrt());
    }
    Ok(embed(space, pos, &local))
}

/// Truncated creation operator, the exact conjugate transpose of [`annihilator`].
pub fn creator<T: Real>(space: &HilbertSpec, mode: usize) -> Result<ComplexOperator<T>> {
    Ok(annihilator(space, mode)?.adjoint())
}

/// Pauli ladder or `σ_z` on spin `atom`. `σ_+|↓⟩ = |↑⟩`, `σ_z|↑⟩ = |↑⟩`.
pub fn spin_op<T: Real>(space: &HilbertSpec, which: SpinOp, atom: usize) -> Result<ComplexOperator<T>> {
    let pos = space.position_of_spin(atom)?;
    let (o, z) = (T::one(), T::zero());
    let local: [Complex<T>; 4] = match which {
        SpinOp::Plus => [re(z), re(o), re(z), re(z)],
        SpinOp::Minus => [re(z), re(z), re(o), re(z)],
        SpinOp::Z => [re(o), re(z), re(z), re(-o)],
    };
    Ok(embed(space, pos, &local))
}

/// Kronecker product `lhs ⊗ rhs` over the composed space.
pub fn tensor<T: Real>(lhs: &ComplexOperator<T>, rhs: &ComplexOperator<T>) -> ComplexOperator<T> {
    lhs.kron(rhs)
}

/// Diagonal operator acting as `f(n)` (or `f(n+1)` when `shifted`) on Fock
/// state `|n⟩` of `mode`.
///
/// `shifted = false` realises a function of `a†a`, `shifted = true` a function
/// of `aa†` (whose eigenvalue on `|n⟩` is `n+1`, including the top retained
/// state).
pub fn number_function<T, F, V>(
    space: &HilbertSpec,
    mode: usize,
    f: F,
    shifted: bool,
) -> Result<ComplexOperator<T>>
where
    T: Real,
    F: Fn(T) -> V,
    V: Into<Complex<T>>,
{
    let pos = space.position_of_mode(mode)?;
    let n = space.factors[pos].dim();
    let mut local = vec![Complex::new(T::zero(), T::zero()); n * n];
    for k in 0..n {
        let arg = if shifted { k + 1 } else { k };
        let v: Complex<T> = f(T::from_index(arg)).into();
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::NonFiniteFunction { n: arg });
        }
        local[k * n + k] = v;
    }
    Ok(embed(space, pos, &local))
}

/// Operator `Σ_s f(s)·|s⟩⟨s|` on spin `atom`, identity elsewhere. Handy for
/// projectors `½(I ± σ_z)`.
pub fn spin_projector<T: Real>(space: &HilbertSpec, atom: usize, up: bool) -> Result<ComplexOperator<T>> {
    let pos = space.position_of_spin(atom)?;
    let (o, z) = (T::one(), T::zero());
    let local = if up { [re(o), re(z), re(z), re(z)] } else { [re(z), re(z), re(z), re(o)] };
    Ok(embed(space, pos, &local))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex<f64>, b: Complex<f64>) -> bool {
        (a - b).norm() < 1e-14
    }

    #[test]
    fn two_level_annihilator() {
        let s = HilbertSpec::mode(2).unwrap();
        let a = annihilator::<f64>(&s, 0).unwrap();
        assert_eq!(a[(0, 1)], re(1.0));
        assert_eq!(a[(0, 0)], re(0.0));
        assert_eq!(a[(1, 0)], re(0.0));
        // a|1⟩ = |0⟩, a|0⟩ = 0
        let one = a.apply(&[re(0.0), re(1.0)]);
        assert!(close(one[0], re(1.0)) && close(one[1], re(0.0)));
        let vac = a.apply(&[re(1.0), re(0.0)]);
        assert!(vac.iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn ladder_element_and_commutator() {
        let s = HilbertSpec::mode(4).unwrap();
        let a = annihilator::<f64>(&s, 0).unwrap();
        assert!((a[(2, 3)].re - 1.732_050_807_568_877_2).abs() < 1e-15);
        let ad = creator::<f64>(&s, 0).unwrap();
        let comm = a.commutator(&ad);
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!(close(comm[(i, j)], re(want)));
            }
        }
        // truncation breaks [a, a†] = I only on the top state
        assert!(close(comm[(3, 3)], re(-3.0)));
    }

    #[test]
    fn creator_is_exact_adjoint() {
        let s = HilbertSpec::two_jc(5).unwrap();
        for mode in 0..2 {
            let a = annihilator::<f64>(&s, mode).unwrap();
            let ad = creator::<f64>(&s, mode).unwrap();
            assert_eq!(ad, a.adjoint());
        }
    }

    #[test]
    fn pauli_definitions() {
        let s = HilbertSpec::spin();
        let z = spin_op::<f64>(&s, SpinOp::Z, 0).unwrap();
        assert_eq!(z[(0, 0)], re(1.0));
        assert_eq!(z[(1, 1)], re(-1.0));
        let p = spin_op::<f64>(&s, SpinOp::Plus, 0).unwrap();
        let m = spin_op::<f64>(&s, SpinOp::Minus, 0).unwrap();
        // σ+|↓⟩ = |↑⟩
        let up = p.apply(&[re(0.0), re(1.0)]);
        assert_eq!(up, vec![re(1.0), re(0.0)]);
        let anti = &(&p * &m) + &(&m * &p);
        assert_eq!(anti, ComplexOperator::identity(s));
    }

    #[test]
    fn two_atom_sigma_z_spectrum() {
        let s = HilbertSpec::new(1, 2, 0).unwrap();
        let z = spin_op::<f64>(&s, SpinOp::Z, 0).unwrap();
        let mut diag: Vec<f64> = (0..4).map(|i| z[(i, i)].re).collect();
        diag.sort_by(|a, b| b.partial_cmp(a).unwrap());
        assert_eq!(diag, vec![1.0, 1.0, -1.0, -1.0]);
        assert!(z.is_diagonal());
    }

    #[test]
    fn tensor_identities() {
        let i2 = ComplexOperator::<f64>::identity(HilbertSpec::spin());
        let i4 = tensor(&i2, &i2);
        assert_eq!(i4.dim(), 4);
        assert_eq!(i4, ComplexOperator::identity(HilbertSpec::spin().compose(&HilbertSpec::spin())));

        let m = HilbertSpec::mode(5).unwrap();
        let z = spin_op::<f64>(&HilbertSpec::spin(), SpinOp::Z, 0).unwrap();
        let a = annihilator::<f64>(&m, 0).unwrap();
        let ad = creator::<f64>(&m, 0).unwrap();
        let lhs = &tensor(&z, &a) * &tensor(&z, &ad);
        let rhs = tensor(&i2, &(&a * &ad));
        assert_eq!(lhs.dim(), 10);
        assert!((&lhs - &rhs).norm_max() < 1e-15);
    }

    #[test]
    fn number_function_cases() {
        let s = HilbertSpec::mode(6).unwrap();
        let n_op = number_function::<f64, _, _>(&s, 0, |n| n, false).unwrap();
        let ad = creator::<f64>(&s, 0).unwrap();
        let a = annihilator::<f64>(&s, 0).unwrap();
        assert!((&n_op - &(&ad * &a)).norm_max() < 1e-14);
        let one = number_function::<f64, _, _>(&s, 0, |_| 1.0, false).unwrap();
        assert_eq!(one, ComplexOperator::identity(s.clone()));
        // κ = 2, g = 1: f(m) = g√(κ² − m); shifted evaluation on |2⟩ is f(3) = 1
        let f = number_function::<f64, _, _>(&s, 0, |m| (4.0 - m).max(0.0).sqrt(), true).unwrap();
        assert!((f[(2, 2)].re - 1.0).abs() < 1e-15);
        assert!(f[(3, 3)].re.abs() < 1e-15);
    }

    #[test]
    fn number_function_matches_aad_diagonal() {
        let s = HilbertSpec::single_jc(7).unwrap();
        let a = annihilator::<f64>(&s, 0).unwrap();
        let ad = creator::<f64>(&s, 0).unwrap();
        let aad = &a * &ad;
        let f = |x: f64| (1.0 + x).ln();
        let op = number_function::<f64, _, _>(&s, 0, f, true).unwrap();
        for i in 0..s.dim() {
            let n = s.digits(i)[1];
            if n + 1 < 7 {
                assert!((op[(i, i)].re - f(aad[(i, i)].re)).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn non_finite_function_is_rejected() {
        let s = HilbertSpec::mode(3).unwrap();
        let err = number_function::<f64, _, _>(&s, 0, |n| 1.0 / n, false).unwrap_err();
        assert_eq!(err, Error::NonFiniteFunction { n: 0 });
    }

    #[test]
    fn bad_indices() {
        let s = HilbertSpec::single_jc(3).unwrap();
        assert_eq!(annihilator::<f64>(&s, 1).unwrap_err(), Error::InvalidMode { index: 1, count: 1 });
        assert_eq!(
            spin_op::<f64>(&s, SpinOp::Z, 1).unwrap_err(),
            Error::InvalidAtom { index: 1, count: 1 }
        );
        assert!(HilbertSpec::new(3, 3, 1).is_err());
    }

    #[test]
    fn basis_ordering_round_trip() {
        let s = HilbertSpec::two_jc(4).unwrap();
        assert_eq!(s.dim(), 64);
        // (↓, ↑, 2, 3)
        let idx = s.index(&[SPIN_DOWN, SPIN_UP, 2, 3]);
        assert_eq!(idx, ((1 * 2 + 0) * 4 + 2) * 4 + 3);
        assert_eq!(s.digits(idx), vec![1, 0, 2, 3]);
        assert_eq!(s.interior_indices(2).len(), 4 * 2 * 2);
    }

    #[test]
    fn construction_is_deterministic() {
        let s = HilbertSpec::two_jc(5).unwrap();
        let a1 = annihilator::<f64>(&s, 1).unwrap();
        let a2 = annihilator::<f64>(&s, 1).unwrap();
        assert_eq!(a1, a2);
    }
}

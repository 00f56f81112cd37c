//! Dense complex operators and the small amount of linear algebra the model needs.

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::fock::HilbertSpec;
use crate::scalar::{re, Real};

/// Square complex matrix over a [`HilbertSpec`], row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexOperator<T: Real> {
    dim: usize,
    entries: Vec<Complex<T>>,
    space: HilbertSpec,
}

impl<T: Real> ComplexOperator<T> {
    pub fn zeros(space: HilbertSpec) -> Self {
        let dim = space.dim();
        Self { dim, entries: vec![Complex::zero(); dim * dim], space }
    }

    pub fn identity(space: HilbertSpec) -> Self {
        let mut op = Self::zeros(space);
        for i in 0..op.dim {
            op[(i, i)] = re(T::one());
        }
        op
    }

    pub fn from_fn(space: HilbertSpec, f: impl Fn(usize, usize) -> Complex<T>) -> Self {
        let dim = space.dim();
        let entries = (0..dim * dim).map(|k| f(k / dim, k % dim)).collect();
        Self { dim, entries, space }
    }

    /// Diagonal operator from its diagonal entries.
    pub fn diagonal(space: HilbertSpec, diag: &[Complex<T>]) -> Self {
        assert_eq!(diag.len(), space.dim());
        let mut op = Self::zeros(space);
        for (i, &d) in diag.iter().enumerate() {
            op[(i, i)] = d;
        }
        op
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn space(&self) -> &HilbertSpec {
        &self.space
    }

    pub fn entries(&self) -> &[Complex<T>] {
        &self.entries
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.space.clone(), |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self { dim: self.dim, entries: self.entries.iter().map(|&v| v * s).collect(), space: self.space.clone() }
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.dim).map(|i| self[(i, i)]).fold(Complex::zero(), |a, b| a + b)
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn kron(&self, rhs: &Self) -> Self {
        let space = self.space.compose(&rhs.space);
        let (m, n) = (self.dim, rhs.dim);
        let mut out = Self::zeros(space);
        for i in 0..m {
            for j in 0..m {
                let a = self[(i, j)];
                if a.is_zero() {
                    continue;
                }
                for k in 0..n {
                    for l in 0..n {
                        out[(i * n + k, j * n + l)] = a * rhs[(k, l)];
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(v.len(), self.dim, "vector length must match operator dimension");
        self.entries
            .chunks_exact(self.dim)
            .map(|row| row.iter().zip(v).fold(Complex::zero(), |acc, (&a, &b)| acc + a * b))
            .collect()
    }

    /// Largest entry modulus.
    pub fn norm_max(&self) -> T {
        self.entries.iter().fold(T::zero(), |m, v| m.max(v.norm()))
    }

    pub fn norm_fro(&self) -> T {
        self.entries.iter().fold(T::zero(), |s, v| s + v.norm_sqr()).sqrt()
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> T {
        self.entries
            .chunks_exact(self.dim)
            .map(|row| row.iter().fold(T::zero(), |s, v| s + v.norm()))
            .fold(T::zero(), T::max)
    }

    /// Largest entry modulus over the sub-block `indices × indices`.
    pub fn norm_max_on(&self, indices: &[usize]) -> T {
        let mut m = T::zero();
        for &i in indices {
            for &j in indices {
                m = m.max(self[(i, j)].norm());
            }
        }
        m
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.dim).all(|i| (0..self.dim).all(|j| i == j || self[(i, j)].is_zero()))
    }

    pub fn diag(&self) -> Vec<Complex<T>> {
        (0..self.dim).map(|i| self[(i, i)]).collect()
    }

    /// `‖A − A†‖_max`.
    pub fn hermiticity_defect(&self) -> T {
        let mut m = T::zero();
        for i in 0..self.dim {
            for j in i..self.dim {
                m = m.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        m
    }

    /// Inverse by Gauss–Jordan elimination with partial pivoting.
    pub fn inverse(&self) -> Result<Self> {
        let id = Self::identity(self.space.clone());
        self.solve(&id)
    }

    /// Solves `self · X = rhs`.
    pub fn solve(&self, rhs: &Self) -> Result<Self> {
        assert_eq!(self.space, rhs.space, "operator space mismatch");
        let n = self.dim;
        let mut a = self.entries.clone();
        let mut b = rhs.entries.clone();
        let scale = self.norm_max();
        for col in 0..n {
            let (piv, pmax) = (col..n)
                .map(|r| (r, a[r * n + col].norm()))
                .fold((col, T::zero()), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pmax <= scale * T::epsilon() * T::lit(1e-3) || pmax.is_zero() {
                return Err(Error::SingularMatrix);
            }
            if piv != col {
                for k in 0..n {
                    a.swap(piv * n + k, col * n + k);
                    b.swap(piv * n + k, col * n + k);
                }
            }
            let inv_p = a[col * n + col].inv();
            for k in 0..n {
                a[col * n + k] = a[col * n + k] * inv_p;
                b[col * n + k] = b[col * n + k] * inv_p;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a[r * n + col];
                if f.is_zero() {
                    continue;
                }
                for k in 0..n {
                    let (ak, bk) = (a[col * n + k], b[col * n + k]);
                    a[r * n + k] = a[r * n + k] - f * ak;
                    b[r * n + k] = b[r * n + k] - f * bk;
                }
            }
        }
        Ok(Self { dim: n, entries: b, space: self.space.clone() })
    }

    /// Matrix exponential by scaling and squaring with a diagonal [6/6] Padé
    /// approximant; the scaled argument satisfies `‖X‖_∞ ≤ ½`.
    pub fn exp(&self) -> Self {
        const Q: usize = 6;
        let norm = self.norm_inf();
        let mut squarings = 0u32;
        let half = T::lit(0.5);
        if norm > half {
            squarings = (norm / half).log2().ceil().to_u32().unwrap_or(0);
        }
        let x = self.scale(re(T::one() / T::lit(2f64.powi(squarings as i32))));

        let mut coef = T::one();
        let id = Self::identity(self.space.clone());
        let mut num = id.clone();
        let mut den = id;
        let mut power = x.clone();
        for k in 1..=Q {
            coef = coef * T::from_index(Q - k + 1) / T::from_index(k * (2 * Q - k + 1));
            let term = power.scale(re(coef));
            num = &num + &term;
            den = if k % 2 == 0 { &den + &term } else { &den - &term };
            if k < Q {
                power = &power * &x;
            }
        }
        let mut e = den.solve(&num).expect("Padé denominator is well conditioned for ‖X‖ ≤ 1/2");
        for _ in 0..squarings {
            e = &e * &e;
        }
        e
    }
}

impl<T: Real> Index<(usize, usize)> for ComplexOperator<T> {
    type Output = Complex<T>;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.entries[i * self.dim + j]
    }
}

impl<T: Real> IndexMut<(usize, usize)> for ComplexOperator<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.entries[i * self.dim + j]
    }
}

impl<T: Real> Add for &ComplexOperator<T> {
    type Output = ComplexOperator<T>;

    fn add(self, rhs: Self) -> ComplexOperator<T> {
        assert_eq!(self.space, rhs.space, "operator space mismatch");
        ComplexOperator {
            dim: self.dim,
            entries: self.entries.iter().zip(&rhs.entries).map(|(&a, &b)| a + b).collect(),
            space: self.space.clone(),
        }
    }
}

impl<T: Real> Sub for &ComplexOperator<T> {
    type Output = ComplexOperator<T>;

    fn sub(self, rhs: Self) -> ComplexOperator<T> {
        assert_eq!(self.space, rhs.space, "operator space mismatch");
        ComplexOperator {
            dim: self.dim,
            entries: self.entries.iter().zip(&rhs.entries).map(|(&a, &b)| a - b).collect(),
            space: self.space.clone(),
        }
    }
}

impl<T: Real> Neg for &ComplexOperator<T> {
    type Output = ComplexOperator<T>;

    fn neg(self) -> ComplexOperator<T> {
        self.scale(re(-T::one()))
    }
}

impl<T: Real> Mul for &ComplexOperator<T> {
    type Output = ComplexOperator<T>;

    fn mul(self, rhs: Self) -> ComplexOperator<T> {
        assert_eq!(self.space, rhs.space, "operator space mismatch");
        let n = self.dim;
        let mut out = vec![Complex::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a.is_zero() {
                    continue;
                }
                let row = &rhs.entries[k * n..(k + 1) * n];
                let dst = &mut out[i * n..(i + 1) * n];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d = *d + a * b;
                }
            }
        }
        ComplexOperator { dim: n, entries: out, space: self.space.clone() }
    }
}

impl<T: Real> Mul<Complex<T>> for &ComplexOperator<T> {
    type Output = ComplexOperator<T>;

    fn mul(self, s: Complex<T>) -> ComplexOperator<T> {
        self.scale(s)
    }
}

impl<T: Real> Mul<T> for &ComplexOperator<T> {
    type Output = ComplexOperator<T>;

    fn mul(self, s: T) -> ComplexOperator<T> {
        self.scale(re(s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{annihilator, creator, spin_op, HilbertSpec, SpinOp};
    use crate::scalar::c;

    #[test]
    fn exp_of_diagonal() {
        let s = HilbertSpec::mode(4).unwrap();
        let d: Vec<_> = [0.3, -1.2, 2.5, 7.0].iter().map(|&x| c(x, 0.5 * x)).collect();
        let e = ComplexOperator::<f64>::diagonal(s, &d).exp();
        for (i, z) in d.iter().enumerate() {
            let want = z.exp();
            assert!((e[(i, i)] - want).norm() < 1e-13 * want.norm());
        }
        assert!((e[(0, 1)]).norm() < 1e-15);
    }

    #[test]
    fn exp_of_nilpotent_is_truncated_series() {
        // σ− is nilpotent: exp(zσ−) = I + zσ−
        let s = HilbertSpec::spin();
        let m = spin_op::<f64>(&s, SpinOp::Minus, 0).unwrap();
        let z = c(0.7, -2.0);
        let e = m.scale(z).exp();
        let want = &ComplexOperator::identity(s) + &m.scale(z);
        assert!((&e - &want).norm_max() < 1e-14);
    }

    #[test]
    fn exp_of_rotation_generator() {
        // exp(θ(a†σ− − aσ+)) rotates the {|↑,0⟩,|↓,1⟩} pair
        let s = HilbertSpec::single_jc(3).unwrap();
        let a = annihilator::<f64>(&s, 0).unwrap();
        let ad = creator::<f64>(&s, 0).unwrap();
        let sp = spin_op::<f64>(&s, SpinOp::Plus, 0).unwrap();
        let sm = spin_op::<f64>(&s, SpinOp::Minus, 0).unwrap();
        let gen = &(&ad * &sm) - &(&a * &sp);
        let theta = 0.83;
        let e = gen.scale(re(theta)).exp();
        let up0 = s.index(&[0, 0]);
        let dn1 = s.index(&[1, 1]);
        assert!((e[(up0, up0)].re - theta.cos()).abs() < 1e-14);
        assert!((e[(dn1, up0)].re - theta.sin()).abs() < 1e-14);
        // unitary
        let u = &e.adjoint() * &e;
        assert!((&u - &ComplexOperator::identity(s)).norm_max() < 1e-14);
    }

    #[test]
    fn exp_large_norm_uses_squaring() {
        let s = HilbertSpec::mode(2).unwrap();
        let mut m = ComplexOperator::<f64>::zeros(s);
        m[(0, 1)] = re(30.0);
        m[(1, 0)] = re(30.0);
        let e = m.exp();
        assert!((e[(0, 0)].re / 30f64.cosh() - 1.0).abs() < 1e-12);
        assert!((e[(1, 0)].re / 30f64.sinh() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn inverse_round_trip() {
        let s = HilbertSpec::single_jc(4).unwrap();
        let m = ComplexOperator::<f64>::from_fn(s.clone(), |i, j| {
            c(((i * 7 + j * 3) % 5) as f64 - 2.0, if i == j { 6.0 } else { 0.1 * j as f64 })
        });
        let inv = m.inverse().unwrap();
        assert!((&(&m * &inv) - &ComplexOperator::identity(s)).norm_max() < 1e-13);
    }

    #[test]
    fn singular_inverse_errors() {
        let s = HilbertSpec::mode(3).unwrap();
        let a = annihilator::<f64>(&s, 0).unwrap();
        assert_eq!(a.inverse().unwrap_err(), Error::SingularMatrix);
    }

    #[test]
    #[should_panic(expected = "operator space mismatch")]
    fn mixing_spaces_panics() {
        let a = ComplexOperator::<f64>::identity(HilbertSpec::mode(2).unwrap());
        let b = ComplexOperator::<f64>::identity(HilbertSpec::spin());
        let _ = &a + &b;
    }
}

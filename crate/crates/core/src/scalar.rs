//! Real scalar fields used by the differentiation engines.
//!
//! [`Scalar`] is implemented by `f64` and by forward-mode [`Dual`] numbers
//! over any scalar, so `Dual<Dual<Dual<f64>>>` carries every mixed third
//! partial along three seeded directions. Complex quantities are built as
//! `num_complex::Complex<S>`, which only needs `S: Num`.

use std::fmt::Debug;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Rem, Sub, SubAssign};

use num_complex::Complex;
use num_traits::{Num, One, Zero};

/// A real field with the handful of elementary functions the norms need.
pub trait Scalar:
    Copy + Debug + PartialEq + Num + Neg<Output = Self> + AddAssign + SubAssign + MulAssign + Send + Sync + 'static
{
    fn from_f64(x: f64) -> Self;

    /// The plain `f64` value with every infinitesimal part dropped.
    fn value(&self) -> f64;

    fn sqrt(self) -> Self;

    fn powi(self, n: i32) -> Self;

    fn powf(self, a: f64) -> Self;

    fn is_finite(&self) -> bool;
}

impl Scalar for f64 {
    #[inline]
    fn from_f64(x: f64) -> Self {
        x
    }
    #[inline]
    fn value(&self) -> f64 {
        *self
    }
    #[inline]
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    #[inline]
    fn powi(self, n: i32) -> Self {
        f64::powi(self, n)
    }
    #[inline]
    fn powf(self, a: f64) -> Self {
        f64::powf(self, a)
    }
    #[inline]
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
}

/// Forward-mode dual number `re + eps·ε` with `ε² = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Dual<T> {
    pub re: T,
    pub eps: T,
}

impl<T: Scalar> Dual<T> {
    #[inline]
    pub fn new(re: T, eps: T) -> Self {
        Dual { re, eps }
    }

    #[inline]
    pub fn constant(re: T) -> Self {
        Dual { re, eps: T::zero() }
    }

    #[inline]
    pub fn variable(re: T) -> Self {
        Dual { re, eps: T::one() }
    }
}

impl<T: Scalar> Add for Dual<T> {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        Dual::new(self.re + rhs.re, self.eps + rhs.eps)
    }
}

impl<T: Scalar> Sub for Dual<T> {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        Dual::new(self.re - rhs.re, self.eps - rhs.eps)
    }
}

impl<T: Scalar> Mul for Dual<T> {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        Dual::new(self.re * rhs.re, self.re * rhs.eps + self.eps * rhs.re)
    }
}

impl<T: Scalar> Div for Dual<T> {
    type Output = Self;
    #[inline]
    fn div(self, rhs: Self) -> Self {
        let q = self.re / rhs.re;
        Dual::new(q, (self.eps - q * rhs.eps) / rhs.re)
    }
}

impl<T: Scalar> Rem for Dual<T> {
    type Output = Self;
    fn rem(self, rhs: Self) -> Self {
        // a % b = a - b·trunc(a/b); the truncated quotient is locally constant.
        let k = T::from_f64((self.re.value() / rhs.re.value()).trunc());
        Dual::new(self.re - k * rhs.re, self.eps - k * rhs.eps)
    }
}

impl<T: Scalar> Neg for Dual<T> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Dual::new(-self.re, -self.eps)
    }
}

impl<T: Scalar> AddAssign for Dual<T> {
    #[inline]
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl<T: Scalar> SubAssign for Dual<T> {
    #[inline]
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl<T: Scalar> MulAssign for Dual<T> {
    #[inline]
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

impl<T: Scalar> Zero for Dual<T> {
    #[inline]
    fn zero() -> Self {
        Dual::constant(T::zero())
    }
    #[inline]
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.eps.is_zero()
    }
}

impl<T: Scalar> One for Dual<T> {
    #[inline]
    fn one() -> Self {
        Dual::constant(T::one())
    }
}

impl<T: Scalar> Num for Dual<T> {
    type FromStrRadixErr = <f64 as Num>::FromStrRadixErr;

    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        f64::from_str_radix(s, radix).map(|x| Dual::constant(T::from_f64(x)))
    }
}

impl<T: Scalar> Scalar for Dual<T> {
    #[inline]
    fn from_f64(x: f64) -> Self {
        Dual::constant(T::from_f64(x))
    }

    #[inline]
    fn value(&self) -> f64 {
        self.re.value()
    }

    fn sqrt(self) -> Self {
        let r = self.re.sqrt();
        Dual::new(r, self.eps / (r + r))
    }

    fn powi(self, n: i32) -> Self {
        if n == 0 {
            return Dual::one();
        }
        let lower = self.re.powi(n - 1);
        Dual::new(lower * self.re, T::from_f64(n as f64) * lower * self.eps)
    }

    fn powf(self, a: f64) -> Self {
        let lower = self.re.powf(a - 1.0);
        Dual::new(lower * self.re, T::from_f64(a) * lower * self.eps)
    }

    fn is_finite(&self) -> bool {
        self.re.is_finite() && self.eps.is_finite()
    }
}

/// Lifts an `f64` complex number into `Complex<S>`.
#[inline]
pub fn lift<S: Scalar>(z: Complex<f64>) -> Complex<S> {
    Complex::new(S::from_f64(z.re), S::from_f64(z.im))
}

/// Drops infinitesimal parts of a complex scalar.
#[inline]
pub fn complex_value<S: Scalar>(z: &Complex<S>) -> Complex<f64> {
    Complex::new(z.re.value(), z.im.value())
}

pub(crate) type Dual2 = Dual<Dual<f64>>;
pub(crate) type Dual3 = Dual<Dual2>;
pub(crate) type Dual4 = Dual<Dual3>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_derivative_of_polynomial() {
        let x = Dual::variable(3.0);
        let y = x * x * x - Dual::from_f64(2.0) * x;
        assert_eq!(y.re, 21.0);
        assert_eq!(y.eps, 25.0);
    }

    #[test]
    fn nested_duals_give_mixed_partials() {
        // f(x, y) = x^2 y^3, d^2 f / dx dy = 6 x y^2
        let x: Dual2 = Dual::new(Dual::new(2.0, 1.0), Dual::zero());
        let y: Dual2 = Dual::new(Dual::new(5.0, 0.0), Dual::one());
        let f = x.powi(2) * y.powi(3);
        assert_eq!(f.eps.eps, 6.0 * 2.0 * 25.0);
        assert_eq!(f.re.eps, 2.0 * 2.0 * 125.0);
        assert_eq!(f.eps.re, 4.0 * 3.0 * 25.0);
    }

    #[test]
    fn sqrt_and_powf_chain_rule() {
        let x = Dual::variable(4.0);
        assert!((x.sqrt().eps - 0.25).abs() < 1e-15);
        let y = x.powf(1.5);
        assert!((y.re - 8.0).abs() < 1e-12);
        assert!((y.eps - 1.5 * 2.0).abs() < 1e-12);
    }

    #[test]
    fn division_matches_quotient_rule() {
        let x = Dual::variable(2.0);
        let y = Dual::from_f64(1.0) / (x * x);
        assert!((y.eps + 2.0 / 8.0).abs() < 1e-15);
    }

    #[test]
    fn complex_over_duals() {
        let z = Complex::new(Dual::variable(1.0), Dual::from_f64(2.0));
        let w = z * z.conj();
        assert_eq!(w.re.re, 5.0);
        assert_eq!(w.re.eps, 2.0);
        assert_eq!(w.im.re, 0.0);
    }
}

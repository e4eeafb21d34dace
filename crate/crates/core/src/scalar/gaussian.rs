use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{FromPrimitive, Num, One, Signed, Zero};

use super::{Coeff, Field};
use crate::error::{Error, Result};

/// Exact real scalars the Gaussian extension can be built over.
pub trait RealRational:
    Num + Signed + Clone + fmt::Debug + fmt::Display + FromPrimitive + Send + Sync + 'static
{
}

impl<T> RealRational for Ratio<T>
where
    T: Clone + Integer + Signed + fmt::Debug + fmt::Display + Send + Sync + 'static,
    Ratio<T>: FromPrimitive,
{
}

/// `re + im·i` with exact rational parts.
///
/// `Ratio` keeps both parts in lowest terms with positive denominators, so
/// derived equality is exact structural equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaussianRational<R> {
    pub re: R,
    pub im: R,
}

impl<R: RealRational> GaussianRational<R> {
    pub fn new(re: R, im: R) -> Self {
        Self { re, im }
    }

    pub fn real(re: R) -> Self {
        Self { re, im: R::zero() }
    }

    pub fn i() -> Self {
        Self { re: R::zero(), im: R::one() }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        Self::new(R::from_i64(re).unwrap(), R::from_i64(im).unwrap())
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    fn render_real(r: &R) -> String {
        format!("{r}")
    }
}

impl GaussianRational<BigRational> {
    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::real(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// Least common multiple of the two denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.re.denom().lcm(self.im.denom())
    }

    /// Gcd of the two numerators.
    pub fn numerator_gcd(&self) -> BigInt {
        self.re.numer().gcd(self.im.numer())
    }
}

impl<R: RealRational> Zero for GaussianRational<R> {
    fn zero() -> Self {
        Self::new(R::zero(), R::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl<R: RealRational> One for GaussianRational<R> {
    fn one() -> Self {
        Self::new(R::one(), R::zero())
    }
}

impl<R: RealRational> Add for GaussianRational<R> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.re + o.re, self.im + o.im)
    }
}

impl<R: RealRational> Sub for GaussianRational<R> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.re - o.re, self.im - o.im)
    }
}

impl<R: RealRational> Mul for GaussianRational<R> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        self.mul_ref(&o)
    }
}

impl<R: RealRational> Neg for GaussianRational<R> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

impl<R: RealRational> Coeff for GaussianRational<R> {
    fn from_i64(n: i64) -> Self {
        Self::real(R::from_i64(n).unwrap())
    }

    fn mul_i(&self) -> Self {
        Self::new(-self.im.clone(), self.re.clone())
    }

    fn div_int(&self, n: i64) -> Result<Self> {
        if n == 0 {
            return Err(Error::DivisionByZero);
        }
        let d = R::from_i64(n).unwrap();
        Ok(Self::new(self.re.clone() / d.clone(), self.im.clone() / d))
    }

    fn mul_ref(&self, o: &Self) -> Self {
        if self.im.is_zero() && o.im.is_zero() {
            return Self::real(self.re.clone() * o.re.clone());
        }
        Self::new(
            self.re.clone() * o.re.clone() - self.im.clone() * o.im.clone(),
            self.re.clone() * o.im.clone() + self.im.clone() * o.re.clone(),
        )
    }

    fn add_ref(&self, o: &Self) -> Self {
        Self::new(self.re.clone() + o.re.clone(), self.im.clone() + o.im.clone())
    }

    fn sub_ref(&self, o: &Self) -> Self {
        Self::new(self.re.clone() - o.re.clone(), self.im.clone() - o.im.clone())
    }
}

impl<R: RealRational> Field for GaussianRational<R> {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let norm = self.re.clone() * self.re.clone() + self.im.clone() * self.im.clone();
        Some(Self::new(self.re.clone() / norm.clone(), -self.im.clone() / norm))
    }
}

impl<R: RealRational> fmt::Display for GaussianRational<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let imag = |im: &R| -> String {
            if im.is_one() {
                "i".to_string()
            } else if (-im.clone()).is_one() {
                "-i".to_string()
            } else {
                format!("{}*i", Self::render_real(im))
            }
        };
        match (self.re.is_zero(), self.im.is_zero()) {
            (true, true) => write!(f, "0"),
            (false, true) => write!(f, "{}", Self::render_real(&self.re)),
            (true, false) => write!(f, "{}", imag(&self.im)),
            (false, false) => {
                let im = imag(&self.im);
                if im.starts_with('-') {
                    write!(f, "{}{}", Self::render_real(&self.re), im)
                } else {
                    write!(f, "{}+{}", Self::render_real(&self.re), im)
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    type G = GaussianRational<BigRational>;

    #[test]
    fn i_squared_is_minus_one() {
        assert_eq!(G::i().mul_ref(&G::i()), -G::one());
        assert_eq!(G::one().mul_i(), G::i());
    }

    #[test]
    fn inverse() {
        let z = G::from_ints(3, -4);
        assert_eq!(z.mul_ref(&z.inv().unwrap()), G::one());
        assert!(G::zero().inv().is_none());
    }

    #[test]
    fn div_int_exact_and_zero() {
        assert_eq!(G::from_ints(1, 0).div_int(3).unwrap(), G::from_ratio(1, 3));
        assert_eq!(G::one().div_int(0), Err(Error::DivisionByZero));
    }

    #[test]
    fn rendering() {
        assert_eq!(G::from_ints(0, 0).to_string(), "0");
        assert_eq!(G::from_ints(0, -1).to_string(), "-i");
        assert_eq!(G::from_ratio(-3, 2).to_string(), "-3/2");
        assert_eq!(G::from_ints(1, -2).to_string(), "1-2*i");
        assert_eq!(G::from_ints(1, 1).to_string(), "1+i");
    }

    #[test]
    fn works_over_machine_rationals() {
        let z = GaussianRational::<Rational64>::from_ints(2, 1);
        assert_eq!(z.mul_ref(&z), GaussianRational::from_ints(3, 4));
    }
}

//! Gaussian rationals: exact complex numbers with rational real and
//! imaginary parts.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct GaussRat {
    re: BigRational,
    im: BigRational,
}

impl GaussRat {
    pub fn new(re: BigRational, im: BigRational) -> GaussRat {
        GaussRat { re, im }
    }

    pub fn zero() -> GaussRat {
        GaussRat { re: BigRational::zero(), im: BigRational::zero() }
    }

    pub fn one() -> GaussRat {
        GaussRat { re: BigRational::one(), im: BigRational::zero() }
    }

    pub fn i() -> GaussRat {
        GaussRat { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn from_int(n: i64) -> GaussRat {
        GaussRat { re: BigRational::from_integer(BigInt::from(n)), im: BigRational::zero() }
    }

    pub fn from_ratio(p: i64, q: i64) -> GaussRat {
        assert!(q != 0, "zero denominator");
        GaussRat {
            re: BigRational::new(BigInt::from(p), BigInt::from(q)),
            im: BigRational::zero(),
        }
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn neg(&self) -> GaussRat {
        GaussRat { re: -self.re.clone(), im: -self.im.clone() }
    }

    pub fn add(&self, rhs: &GaussRat) -> GaussRat {
        GaussRat { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }

    pub fn sub(&self, rhs: &GaussRat) -> GaussRat {
        GaussRat { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }

    pub fn mul(&self, rhs: &GaussRat) -> GaussRat {
        GaussRat {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }

    pub fn recip(&self) -> GaussRat {
        assert!(!self.is_zero(), "division by zero");
        let norm = &self.re * &self.re + &self.im * &self.im;
        GaussRat { re: &self.re / &norm, im: -(&self.im / &norm) }
    }

    pub fn div(&self, rhs: &GaussRat) -> GaussRat {
        self.mul(&rhs.recip())
    }

    pub fn pow(&self, k: u32) -> GaussRat {
        let mut out = GaussRat::one();
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// (is_negative, magnitude_string): pulls a leading minus sign out so sums
    /// can print as `a - b`.
    pub fn signed_display(&self) -> (bool, String) {
        if self.im.is_zero() {
            return (self.re.is_negative(), format!("{}", self.re.abs()));
        }
        if self.re.is_zero() {
            let mag = if self.im.abs().is_one() {
                "i".to_string()
            } else {
                format!("{}*i", self.im.abs())
            };
            return (self.im.is_negative(), mag);
        }
        // mixed: keep the sign inside parentheses
        (false, format!("({self})"))
    }
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        if self.re.is_zero() {
            if self.im.is_one() {
                return write!(f, "i");
            }
            if (-self.im.clone()).is_one() {
                return write!(f, "-i");
            }
            return write!(f, "{}*i", self.im);
        }
        if self.im.is_negative() {
            write!(f, "{}-{}*i", self.re, self.im.abs())
        } else {
            write!(f, "{}+{}*i", self.re, self.im)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_reciprocal() {
        let z = GaussRat::new(
            BigRational::new(BigInt::from(1), BigInt::from(2)),
            BigRational::new(BigInt::from(-3), BigInt::from(4)),
        );
        assert!(z.mul(&z.recip()).is_one());
    }

    #[test]
    fn i_squared_is_minus_one() {
        assert_eq!(GaussRat::i().mul(&GaussRat::i()), GaussRat::from_int(-1));
    }
}

//! Exact arithmetic in the Gaussian rationals `Q(i)`.
//!
//! Over `Q` (or any ordered field) a symmetric nilpotent matrix is zero, so
//! the nontrivial witnesses for the nilpotent-Hessian hypotheses need
//! isotropic vectors; `Q(i)` is the smallest extension providing them
//! ((1, i) . (1, i) = 0).

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// An element `re + im*i` of `Q(i)`, both parts reduced rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        GaussianRational {
            re: BigRational::one(),
            im: BigRational::zero(),
        }
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        GaussianRational {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }

    pub fn from_int(v: i64) -> Self {
        GaussianRational {
            re: BigRational::from(BigInt::from(v)),
            im: BigRational::zero(),
        }
    }

    pub fn from_rational(re: BigRational) -> Self {
        GaussianRational {
            re,
            im: BigRational::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianRational {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self) -> Self {
        let norm = &self.re * &self.re + &self.im * &self.im;
        assert!(!norm.is_zero(), "division by zero in Q(i)");
        GaussianRational {
            re: &self.re / &norm,
            im: -(&self.im / &norm),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        GaussianRational {
            re: &self.re * c,
            im: &self.im * c,
        }
    }
}

impl Add for &GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl AddAssign<&GaussianRational> for GaussianRational {
    fn add_assign(&mut self, rhs: &GaussianRational) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl Sub for &GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl Mul for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }
}

impl fmt::Display for GaussianRational {
    /// Prints `a`, `bi`, or `a+bi` with reduced fractions, e.g. `3/2-1/3i`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn im_part(f: &mut fmt::Formatter<'_>, im: &BigRational, leading: bool) -> fmt::Result {
            let mag = im.abs();
            let sign = if im.is_negative() {
                "-"
            } else if leading {
                ""
            } else {
                "+"
            };
            if mag.is_one() {
                write!(f, "{sign}i")
            } else {
                write!(f, "{sign}{mag}i")
            }
        }
        if self.is_zero() {
            return f.write_str("0");
        }
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        if self.re.is_zero() {
            return im_part(f, &self.im, true);
        }
        write!(f, "{}", self.re)?;
        im_part(f, &self.im, false)
    }
}

//! Arbitrary-precision complex arithmetic on top of MPFR floats.
//!
//! `Cx` is a plain (re, im) pair of [`rug::Float`]s. Every value carries its
//! own precision; binary operations produce results at the larger of the two
//! operand precisions. Transcendentals (`exp`, `ln`, `powi`) are built from
//! the MPFR real kernels, with `ln` taking the principal branch.

use num_complex::Complex64;
use rug::float::Constant;
use rug::ops::NegAssign;
use rug::{Assign, Float};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Complex number with arbitrary-precision parts.
#[derive(Clone, PartialEq)]
pub struct Cx {
    pub re: Float,
    pub im: Float,
}

impl fmt::Debug for Cx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:e}, {:e})", self.re.to_f64(), self.im.to_f64())
    }
}

impl fmt::Display for Cx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}i", self.re, self.im)
    }
}

pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

/// k! as a float at `prec` bits (correctly rounded once per multiply).
pub fn factorial(k: u32, prec: u32) -> Float {
    let mut f = Float::with_val(prec, 1);
    for j in 2..=k {
        f *= j;
    }
    f
}

/// Binomial C(top, k) as a float product, for small k.
pub fn binomial(top: u64, k: u64, prec: u32) -> Float {
    let mut b = Float::with_val(prec, 1);
    for j in 1..=k {
        b *= top + 1 - j;
        b /= j;
    }
    b
}

impl Cx {
    pub fn new(prec: u32) -> Self {
        Cx {
            re: Float::new(prec),
            im: Float::new(prec),
        }
    }

    pub fn zero(prec: u32) -> Self {
        Self::new(prec)
    }

    pub fn one(prec: u32) -> Self {
        Cx {
            re: Float::with_val(prec, 1),
            im: Float::new(prec),
        }
    }

    pub fn from_f64(prec: u32, re: f64, im: f64) -> Self {
        Cx {
            re: Float::with_val(prec, re),
            im: Float::with_val(prec, im),
        }
    }

    pub fn from_float(re: Float, im: Float) -> Self {
        Cx { re, im }
    }

    pub fn real(re: Float) -> Self {
        let prec = re.prec();
        Cx {
            re,
            im: Float::new(prec),
        }
    }

    pub fn from_c64(prec: u32, z: Complex64) -> Self {
        Self::from_f64(prec, z.re, z.im)
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    /// Round (copy) to a new working precision.
    pub fn with_prec(&self, prec: u32) -> Self {
        Cx {
            re: Float::with_val(prec, &self.re),
            im: Float::with_val(prec, &self.im),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn conj(&self) -> Self {
        let mut im = self.im.clone();
        im.neg_assign();
        Cx {
            re: self.re.clone(),
            im,
        }
    }

    /// |z|² at working precision.
    pub fn norm2(&self) -> Float {
        let p = self.prec();
        let mut t = Float::with_val(p, &self.re * &self.re);
        t += Float::with_val(p, &self.im * &self.im);
        t
    }

    /// |z| via hypot.
    pub fn abs(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, self.re.hypot_ref(&self.im))
    }

    /// Principal argument in (−π, π].
    pub fn arg(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, self.im.atan2_ref(&self.re))
    }

    pub fn scale(&self, s: &Float) -> Self {
        let p = self.prec().max(s.prec());
        Cx {
            re: Float::with_val(p, &self.re * s),
            im: Float::with_val(p, &self.im * s),
        }
    }

    pub fn scale_f64(&self, s: f64) -> Self {
        let p = self.prec();
        Cx {
            re: Float::with_val(p, &self.re * s),
            im: Float::with_val(p, &self.im * s),
        }
    }

    pub fn unscale(&self, s: &Float) -> Self {
        let p = self.prec().max(s.prec());
        Cx {
            re: Float::with_val(p, &self.re / s),
            im: Float::with_val(p, &self.im / s),
        }
    }

    /// Exact-divisor variant: divides by a small integer with one correctly
    /// rounded operation per part (no f64 reciprocal detour).
    pub fn unscale_u32(&self, k: u32) -> Self {
        let p = self.prec();
        Cx {
            re: Float::with_val(p, &self.re / k),
            im: Float::with_val(p, &self.im / k),
        }
    }

    pub fn recip(&self) -> Self {
        let n2 = self.norm2();
        let p = self.prec();
        let mut im = Float::with_val(p, &self.im / &n2);
        im.neg_assign();
        Cx {
            re: Float::with_val(p, &self.re / &n2),
            im,
        }
    }

    /// e^z = e^re (cos im + i sin im).
    pub fn exp(&self) -> Self {
        let p = self.prec();
        let e = Float::with_val(p, self.re.exp_ref());
        let mut sin = Float::new(p);
        let mut cos = Float::new(p);
        (&mut sin, &mut cos).assign(self.im.sin_cos_ref());
        Cx {
            re: Float::with_val(p, &e * &cos),
            im: Float::with_val(p, &e * &sin),
        }
    }

    /// Principal log: ln|z| + i·arg z.
    pub fn ln(&self) -> Self {
        let p = self.prec();
        let r = self.abs();
        Cx {
            re: Float::with_val(p, r.ln_ref()),
            im: self.arg(),
        }
    }

    /// Integer power by binary exponentiation.
    pub fn powi(&self, n: i64) -> Self {
        let p = self.prec();
        if n == 0 {
            return Cx::one(p);
        }
        let (mut base, mut e) = if n < 0 {
            (self.recip(), (n as i128).unsigned_abs() as u64)
        } else {
            (self.clone(), n as u64)
        };
        let mut acc = Cx::one(p);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Distance |self − other| as a float.
    pub fn dist(&self, other: &Cx) -> Float {
        (self - other).abs()
    }
}

impl Add for &Cx {
    type Output = Cx;
    fn add(self, rhs: &Cx) -> Cx {
        let p = self.prec().max(rhs.prec());
        Cx {
            re: Float::with_val(p, &self.re + &rhs.re),
            im: Float::with_val(p, &self.im + &rhs.im),
        }
    }
}

impl Sub for &Cx {
    type Output = Cx;
    fn sub(self, rhs: &Cx) -> Cx {
        let p = self.prec().max(rhs.prec());
        Cx {
            re: Float::with_val(p, &self.re - &rhs.re),
            im: Float::with_val(p, &self.im - &rhs.im),
        }
    }
}

impl Mul for &Cx {
    type Output = Cx;
    fn mul(self, rhs: &Cx) -> Cx {
        let p = self.prec().max(rhs.prec());
        let mut re = Float::with_val(p, &self.re * &rhs.re);
        re -= Float::with_val(p, &self.im * &rhs.im);
        let mut im = Float::with_val(p, &self.re * &rhs.im);
        im += Float::with_val(p, &self.im * &rhs.re);
        Cx { re, im }
    }
}

impl Div for &Cx {
    type Output = Cx;
    fn div(self, rhs: &Cx) -> Cx {
        let p = self.prec().max(rhs.prec());
        let n2 = rhs.norm2();
        let mut re = Float::with_val(p, &self.re * &rhs.re);
        re += Float::with_val(p, &self.im * &rhs.im);
        re /= &n2;
        let mut im = Float::with_val(p, &self.im * &rhs.re);
        im -= Float::with_val(p, &self.re * &rhs.im);
        im /= &n2;
        Cx { re, im }
    }
}

impl Neg for &Cx {
    type Output = Cx;
    fn neg(self) -> Cx {
        let mut re = self.re.clone();
        let mut im = self.im.clone();
        re.neg_assign();
        im.neg_assign();
        Cx { re, im }
    }
}

//! Double-double floating point (about 106 significant bits).
//!
//! Used by the finite-difference oracle: fourth-order stencils divide by `h⁴`,
//! which would amplify plain `f64` rounding past the truncation error being
//! measured.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Clone, Copy, Debug, Default, PartialEq, PartialOrd)]
pub struct DD {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DD {
    pub const ZERO: DD = DD { hi: 0.0, lo: 0.0 };
    pub const ONE: DD = DD { hi: 1.0, lo: 0.0 };

    pub fn new(hi: f64) -> Self {
        DD { hi, lo: 0.0 }
    }

    pub fn from_q(x: &crate::rational::Q) -> Self {
        use num_rational::BigRational;
        let hi = crate::rational::to_f64(x);
        match BigRational::from_float(hi) {
            Some(h) => DD { hi, lo: crate::rational::to_f64(&(x - h)) }.renorm(),
            None => DD::new(hi),
        }
    }

    fn renorm(self) -> Self {
        let (hi, lo) = quick_two_sum(self.hi, self.lo);
        DD { hi, lo }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    pub fn sqrt(self) -> Self {
        if self.hi <= 0.0 {
            return DD::ZERO;
        }
        let x = self.hi.sqrt();
        let (p, e) = two_prod(x, x);
        let corr = ((self.hi - p) - e + self.lo) / (2.0 * x);
        let (hi, lo) = quick_two_sum(x, corr);
        DD { hi, lo }
    }

    pub fn recip(self) -> Self {
        DD::ONE / self
    }

    pub fn powi(self, n: i32) -> Self {
        if n < 0 {
            return self.powi(-n).recip();
        }
        let mut base = self;
        let mut e = n as u32;
        let mut acc = DD::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// `(sin x, cos x)` by reduction modulo `2π`, a short Taylor series on
    /// `x/32` and five angle doublings.
    pub fn sin_cos(self) -> (Self, Self) {
        const TWO_PI: DD = DD { hi: std::f64::consts::TAU, lo: 2.4492935982947064e-16 };
        let k = (self.hi / TWO_PI.hi).round();
        let y = self - TWO_PI.mul_f64(k);
        let z = y.mul_f64(1.0 / 32.0);
        let z2 = z * z;
        let (mut s, mut c) = (z, DD::ONE);
        let (mut ts, mut tc) = (z, DD::ONE);
        for n in 1..=14 {
            let n = n as f64;
            ts = -(ts * z2) / DD::new((2.0 * n) * (2.0 * n + 1.0));
            tc = -(tc * z2) / DD::new((2.0 * n - 1.0) * (2.0 * n));
            s = s + ts;
            c = c + tc;
        }
        for _ in 0..5 {
            let s2 = (s * c).mul_f64(2.0);
            c = c * c - s * s;
            s = s2;
        }
        (s, c)
    }

    pub fn mul_f64(self, b: f64) -> Self {
        let (p, e) = two_prod(self.hi, b);
        let (hi, lo) = quick_two_sum(p, e + self.lo * b);
        DD { hi, lo }
    }
}

impl From<f64> for DD {
    fn from(x: f64) -> Self {
        DD::new(x)
    }
}

impl Add for DD {
    type Output = DD;
    #[inline]
    fn add(self, b: DD) -> DD {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        DD { hi, lo }
    }
}

impl Neg for DD {
    type Output = DD;
    fn neg(self) -> DD {
        DD { hi: -self.hi, lo: -self.lo }
    }
}

impl Sub for DD {
    type Output = DD;
    #[inline]
    fn sub(self, b: DD) -> DD {
        self + (-b)
    }
}

impl Mul for DD {
    type Output = DD;
    #[inline]
    fn mul(self, b: DD) -> DD {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p, e);
        DD { hi, lo }
    }
}

impl Div for DD {
    type Output = DD;
    fn div(self, b: DD) -> DD {
        let q1 = self.hi / b.hi;
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        DD { hi, lo } + DD::new(q3)
    }
}

impl std::iter::Sum for DD {
    fn sum<I: Iterator<Item = DD>>(iter: I) -> DD {
        iter.fold(DD::ZERO, |a, b| a + b)
    }
}

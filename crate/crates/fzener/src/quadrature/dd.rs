//! Double-double arithmetic (about 32 significant digits), enough to run a
//! 64-node Talbot inversion without the `e^{rt}` amplification eating the
//! answer.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

const PI: Dd = Dd { hi: std::f64::consts::PI, lo: 1.2246467991473532e-16 };
const FRAC_PI_2: Dd = Dd { hi: std::f64::consts::FRAC_PI_2, lo: 6.123233995736766e-17 };
const LN_2: Dd = Dd { hi: std::f64::consts::LN_2, lo: 2.3190468138462996e-17 };

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

impl From<f64> for Dd {
    fn from(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    pub fn pi() -> Dd {
        PI
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    fn norm(hi: f64, lo: f64) -> Dd {
        let (h, l) = quick_two_sum(hi, lo);
        Dd { hi: h, lo: l }
    }

    /// Multiply by a power of two (exact).
    pub fn ldexp(self, k: i32) -> Dd {
        let f = 2f64.powi(k);
        Dd { hi: self.hi * f, lo: self.lo * f }
    }

    pub fn abs(self) -> Dd {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    pub fn sqrt(self) -> Dd {
        if self.hi <= 0.0 {
            return Dd::ZERO;
        }
        let x = self.hi.sqrt();
        let xx = Dd::from(x);
        xx + (self - xx * xx) / Dd::from(2.0 * x)
    }

    pub fn exp(self) -> Dd {
        if self.hi > 709.0 {
            return Dd::from(f64::INFINITY);
        }
        if self.hi < -745.0 {
            return Dd::ZERO;
        }
        let k = (self.hi / LN_2.hi).round();
        let r = (self - LN_2 * Dd::from(k)).ldexp(-10);
        // expm1(r) by Taylor, then undo the 2^-10 scaling by squaring.
        let mut term = r;
        let mut p = r;
        for n in 2..30 {
            term = term * r / Dd::from(n as f64);
            p = p + term;
            if term.hi.abs() < 1e-34 * p.hi.abs() {
                break;
            }
        }
        for _ in 0..10 {
            p = p.ldexp(1) + p * p;
        }
        (p + Dd::ONE).ldexp(k as i32)
    }

    pub fn ln(self) -> Dd {
        let mut x = Dd::from(self.hi.ln());
        for _ in 0..2 {
            x = x + self * (-x).exp() - Dd::ONE;
        }
        x
    }

    pub fn sin_cos(self) -> (Dd, Dd) {
        let k = (self.hi / FRAC_PI_2.hi).round();
        let r = self - FRAC_PI_2 * Dd::from(k);
        let r2 = r * r;
        let (mut s, mut ts) = (r, r);
        let (mut c, mut tc) = (Dd::ONE, Dd::ONE);
        for n in 1..20 {
            let n2 = 2.0 * n as f64;
            ts = -ts * r2 / Dd::from(n2 * (n2 + 1.0));
            tc = -tc * r2 / Dd::from((n2 - 1.0) * n2);
            s = s + ts;
            c = c + tc;
            if tc.hi.abs() < 1e-34 && ts.hi.abs() < 1e-34 {
                break;
            }
        }
        match (k as i64).rem_euclid(4) {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        }
    }

    /// Angle of `(x, y)` in `(-pi, pi]`.
    pub fn atan2(y: Dd, x: Dd) -> Dd {
        if y.hi == 0.0 && x.hi == 0.0 {
            return Dd::ZERO;
        }
        let mut a = Dd::from(y.hi.atan2(x.hi));
        for _ in 0..2 {
            let (s, c) = a.sin_cos();
            a = a + (y * c - x * s) / (x * c + y * s);
        }
        a
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, b: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e) = quick_two_sum(s, e + t);
        Dd::norm(s, e + f)
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, b: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, b.hi);
        Dd::norm(p, e + (self.hi * b.lo + self.lo * b.hi))
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        let r = self - b * Dd::from(q1);
        let q2 = r.hi / b.hi;
        let r = r - b * Dd::from(q2);
        let q3 = r.hi / b.hi;
        Dd::norm(q1, q2) + Dd::from(q3)
    }
}

/// Complex double-double.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CDd {
    pub re: Dd,
    pub im: Dd,
}

impl CDd {
    pub fn new(re: Dd, im: Dd) -> Self {
        CDd { re, im }
    }

    pub fn zero() -> Self {
        CDd { re: Dd::ZERO, im: Dd::ZERO }
    }

    pub fn from_re(re: Dd) -> Self {
        CDd { re, im: Dd::ZERO }
    }

    pub fn scale(self, k: Dd) -> Self {
        CDd { re: self.re * k, im: self.im * k }
    }

    pub fn exp(self) -> Self {
        let m = self.re.exp();
        let (s, c) = self.im.sin_cos();
        CDd { re: m * c, im: m * s }
    }

    /// Principal logarithm.
    pub fn ln(self) -> Self {
        let m2 = self.re * self.re + self.im * self.im;
        CDd { re: m2.ln().ldexp(-1), im: Dd::atan2(self.im, self.re) }
    }

    /// Principal power `self^p`.
    pub fn powf(self, p: f64) -> Self {
        if p == 0.0 {
            return CDd::from_re(Dd::ONE);
        }
        self.ln().scale(Dd::from(p)).exp()
    }

    pub fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

impl Add for CDd {
    type Output = CDd;
    fn add(self, b: CDd) -> CDd {
        CDd { re: self.re + b.re, im: self.im + b.im }
    }
}

impl Sub for CDd {
    type Output = CDd;
    fn sub(self, b: CDd) -> CDd {
        CDd { re: self.re - b.re, im: self.im - b.im }
    }
}

impl Mul for CDd {
    type Output = CDd;
    fn mul(self, b: CDd) -> CDd {
        CDd { re: self.re * b.re - self.im * b.im, im: self.re * b.im + self.im * b.re }
    }
}

impl Div for CDd {
    type Output = CDd;
    fn div(self, b: CDd) -> CDd {
        let d = b.re * b.re + b.im * b.im;
        CDd { re: (self.re * b.re + self.im * b.im) / d, im: (self.im * b.re - self.re * b.im) / d }
    }
}

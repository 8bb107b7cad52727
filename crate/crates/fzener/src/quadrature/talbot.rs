//! Fixed Talbot inversion of a Laplace transform, carried out in
//! double-double so the `e^{rt}` growth along the contour does not swamp
//! the result.

use super::dd::{CDd, Dd};
use crate::error::{Error, Result};

pub const TALBOT_M: usize = 64;

/// `f(t)` from its transform `big_f(s)`, `t > 0`.
pub fn bromwich_oracle<F: Fn(CDd) -> Option<CDd>>(big_f: F, t: f64) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::ContourFailure);
    }
    let m = TALBOT_M as f64;
    let td = Dd::from(t);
    let r = Dd::from(2.0 * m) / (Dd::from(5.0) * td);
    let f0 = big_f(CDd::from_re(r)).ok_or(Error::ContourFailure)?;
    let mut sum = (f0.re * (r * td).exp()).ldexp(-1);
    let pi = Dd::pi();
    for k in 1..TALBOT_M {
        let theta = pi * Dd::from(k as f64) / Dd::from(m);
        let (sn, cs) = theta.sin_cos();
        let cot = cs / sn;
        let s = CDd::new(r * theta * cot, r * theta);
        let sigma = theta + (theta * cot - Dd::ONE) * cot;
        let fs = big_f(s).ok_or(Error::ContourFailure)?;
        if !fs.is_finite() {
            return Err(Error::ContourFailure);
        }
        let term = (s.scale(td)).exp() * fs * CDd::new(Dd::ONE, sigma);
        sum = sum + term.re;
    }
    let v = (r / Dd::from(m) * sum).to_f64();
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::ContourFailure)
    }
}

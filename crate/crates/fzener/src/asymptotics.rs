//! Short- and long-time power series of the I+ID.ID relaxation modulus and
//! creep compliance, read off the expansions of the Laplace transforms at
//! `s -> inf` and `s -> 0`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::mittag_leffler::rgamma;
use crate::model_catalog::{ModelCode, ModelSpec, Order};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ValidEnd {
    #[serde(rename = "short")]
    ShortTime,
    #[serde(rename = "long")]
    LongTime,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerTerm {
    pub coeff: f64,
    pub exponent: f64,
}

/// `sum coeff t^exponent`, with the Gamma factors already folded into `coeff`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AsymptoticSeries {
    pub terms: Vec<PowerTerm>,
    pub valid_end: ValidEnd,
}

impl AsymptoticSeries {
    pub fn eval(&self, t: f64) -> f64 {
        self.terms.iter().map(|p| p.coeff * t.powf(p.exponent)).sum()
    }

    /// Sum of the first `n` terms.
    pub fn partial(&self, t: f64, n: usize) -> f64 {
        self.terms.iter().take(n).map(|p| p.coeff * t.powf(p.exponent)).sum()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).unwrap_or_default()
    }
}

struct P {
    al: f64,
    be: f64,
    nu: f64,
    a: [f64; 3],
    b: [f64; 2],
}

fn params(m: &ModelSpec) -> Result<P> {
    if m.code != ModelCode::IPlusIdId {
        return Err(Error::WrongModelShape { code: m.code.to_string(), what: "closed-form asymptotics" });
    }
    Ok(P {
        al: m.order(Order::Alpha),
        be: m.order(Order::Beta),
        nu: m.order(Order::Nu),
        a: [m.a[0], m.a[1], m.a[2]],
        b: [m.b[0], m.b[1]],
    })
}

/// `c L^{-1}[s^{-1-e}] = c t^e / Gamma(1+e)`.
fn term(c: f64, e: f64) -> PowerTerm {
    PowerTerm { coeff: c * rgamma(1.0 + e), exponent: e }
}

pub fn relax_short(m: &ModelSpec) -> Result<AsymptoticSeries> {
    let P { al, be, nu, a, b } = params(m)?;
    let (r, q, k) = (b[1] / a[2], a[1] / a[2], a[0] / a[2]);
    let l = b[0] / b[1];
    let e0 = al - nu;
    Ok(AsymptoticSeries {
        terms: vec![
            term(r, e0),
            term(r * (l - q), e0 + al + be),
            term(r * (q * q - k - q * l), e0 + 2.0 * (al + be)),
        ],
        valid_end: ValidEnd::ShortTime,
    })
}

pub fn relax_long(m: &ModelSpec) -> Result<AsymptoticSeries> {
    let P { be, nu, a, b, .. } = params(m)?;
    Ok(AsymptoticSeries { terms: vec![term(b[0] / a[0], -(be + nu))], valid_end: ValidEnd::LongTime })
}

pub fn creep_short(m: &ModelSpec) -> Result<AsymptoticSeries> {
    let P { al, be, nu, a, b } = params(m)?;
    let r = a[2] / b[1];
    let (q, k, l) = (a[1] / a[2], a[0] / a[2], b[0] / b[1]);
    let e0 = nu - al;
    Ok(AsymptoticSeries {
        terms: vec![
            term(r, e0),
            term(r * (q - l), e0 + al + be),
            term(r * (k - q * l + l * l), e0 + 2.0 * (al + be)),
        ],
        valid_end: ValidEnd::ShortTime,
    })
}

pub fn creep_long(m: &ModelSpec) -> Result<AsymptoticSeries> {
    let P { al, be, nu, a, b } = params(m)?;
    let r = a[0] / b[0];
    let (q, k, l) = (a[1] / a[0], a[2] / a[0], b[1] / b[0]);
    let e0 = be + nu;
    Ok(AsymptoticSeries {
        terms: vec![
            term(r, e0),
            term(r * (q - l), e0 - (al + be)),
            term(r * (k - q * l + l * l), e0 - 2.0 * (al + be)),
        ],
        valid_end: ValidEnd::LongTime,
    })
}

//! The fifteen anti-Zener / Zener models as data.
//!
//! Each model is reduced to two power sums `phi_sigma`, `phi_epsilon` and the
//! order `xi`, so that in the Laplace domain
//! `s^xi phi_sigma(s) sigma(s) = phi_epsilon(s) epsilon(s)`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::dd::{CDd, Dd};

/// Relative scale used to decide that a power sum vanishes.
pub const POLE_HIT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModelCode {
    #[serde(rename = "ID.ID")]
    IdId,
    #[serde(rename = "ID.DD+")]
    IdDdPlus,
    #[serde(rename = "IID.IID")]
    IidIid,
    #[serde(rename = "IDD.IDD")]
    IddIdd,
    #[serde(rename = "IID.IDD")]
    IidIdd,
    #[serde(rename = "I+ID.I+ID")]
    IPlusIdIPlusId,
    #[serde(rename = "IDD+.IDD+")]
    IddPlusIddPlus,
    #[serde(rename = "I+ID.IDD+")]
    IPlusIdIddPlus,
    #[serde(rename = "IID.ID")]
    IidId,
    #[serde(rename = "IDD.DD+")]
    IddDdPlus,
    #[serde(rename = "I+ID.ID")]
    IPlusIdId,
    #[serde(rename = "IDD+.DD+")]
    IddPlusDdPlus,
    #[serde(rename = "ID.IDD")]
    IdIdd,
    #[serde(rename = "ID.DDD+")]
    IdDddPlus,
    #[serde(rename = "ID.IDD+")]
    IdIddPlus,
}

impl ModelCode {
    pub const ALL: [ModelCode; 15] = [
        ModelCode::IdId,
        ModelCode::IdDdPlus,
        ModelCode::IidIid,
        ModelCode::IddIdd,
        ModelCode::IidIdd,
        ModelCode::IPlusIdIPlusId,
        ModelCode::IddPlusIddPlus,
        ModelCode::IPlusIdIddPlus,
        ModelCode::IidId,
        ModelCode::IddDdPlus,
        ModelCode::IPlusIdId,
        ModelCode::IddPlusDdPlus,
        ModelCode::IdIdd,
        ModelCode::IdDddPlus,
        ModelCode::IdIddPlus,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ModelCode::IdId => "ID.ID",
            ModelCode::IdDdPlus => "ID.DD+",
            ModelCode::IidIid => "IID.IID",
            ModelCode::IddIdd => "IDD.IDD",
            ModelCode::IidIdd => "IID.IDD",
            ModelCode::IPlusIdIPlusId => "I+ID.I+ID",
            ModelCode::IddPlusIddPlus => "IDD+.IDD+",
            ModelCode::IPlusIdIddPlus => "I+ID.IDD+",
            ModelCode::IidId => "IID.ID",
            ModelCode::IddDdPlus => "IDD.DD+",
            ModelCode::IPlusIdId => "I+ID.ID",
            ModelCode::IddPlusDdPlus => "IDD+.DD+",
            ModelCode::IdIdd => "ID.IDD",
            ModelCode::IdDddPlus => "ID.DDD+",
            ModelCode::IdIddPlus => "ID.IDD+",
        }
    }

    /// Orders the model reads, in the order they appear in its restrictions.
    pub fn required_orders(self) -> &'static [Order] {
        use Order::*;
        match self {
            ModelCode::IdId | ModelCode::IdDdPlus => &[Alpha, Beta, Mu],
            ModelCode::IidIid => &[Alpha, Beta, Gamma, Eta],
            ModelCode::IddIdd => &[Alpha, Beta, Gamma, Mu],
            ModelCode::IidIdd => &[Alpha, Beta, Gamma, Mu, Nu],
            ModelCode::IPlusIdIPlusId => &[Alpha, Gamma, Mu],
            ModelCode::IddPlusIddPlus | ModelCode::IPlusIdIddPlus => &[Alpha, Gamma, Eta],
            ModelCode::IidId => &[Alpha, Beta, Gamma, Nu],
            ModelCode::IddDdPlus | ModelCode::IddPlusDdPlus => &[Alpha, Beta, Mu],
            ModelCode::IPlusIdId => &[Alpha, Beta, Nu],
            ModelCode::IdIdd | ModelCode::IdDddPlus => &[Alpha, Beta, Mu, Nu],
            ModelCode::IdIddPlus => &[Alpha, Beta, Nu],
        }
    }
}

impl fmt::Display for ModelCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelCode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm: String = s.trim().replace('⁺', "+").to_ascii_uppercase();
        ModelCode::ALL
            .iter()
            .copied()
            .find(|c| c.as_str() == norm)
            .ok_or_else(|| Error::UnknownModel(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    Alpha,
    Beta,
    Gamma,
    Mu,
    Nu,
    Eta,
}

impl Order {
    pub fn name(self) -> &'static str {
        match self {
            Order::Alpha => "alpha",
            Order::Beta => "beta",
            Order::Gamma => "gamma",
            Order::Mu => "mu",
            Order::Nu => "nu",
            Order::Eta => "eta",
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FractionalOrders {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
}

impl FractionalOrders {
    pub fn get(&self, o: Order) -> Option<f64> {
        match o {
            Order::Alpha => self.alpha,
            Order::Beta => self.beta,
            Order::Gamma => self.gamma,
            Order::Mu => self.mu,
            Order::Nu => self.nu,
            Order::Eta => self.eta,
        }
    }

    pub fn set(&mut self, o: Order, v: f64) {
        let slot = match o {
            Order::Alpha => &mut self.alpha,
            Order::Beta => &mut self.beta,
            Order::Gamma => &mut self.gamma,
            Order::Mu => &mut self.mu,
            Order::Nu => &mut self.nu,
            Order::Eta => &mut self.eta,
        };
        *slot = Some(v);
    }

    fn present(&self) -> impl Iterator<Item = Order> + '_ {
        [Order::Alpha, Order::Beta, Order::Gamma, Order::Mu, Order::Nu, Order::Eta]
            .into_iter()
            .filter(|o| self.get(*o).is_some())
    }

    /// Value of an order that `build_model` has already checked to be present.
    pub fn req(&self, o: Order) -> f64 {
        self.get(o).unwrap_or(f64::NAN)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub coeff: f64,
    pub exponent: f64,
}

/// `sum c_k s^{p_k}` with positive coefficients and increasing exponents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerSum {
    terms: Vec<Term>,
}

impl PowerSum {
    pub fn new(terms: &[(f64, f64)]) -> Result<Self> {
        if terms.is_empty() || terms.len() > 3 {
            return Err(Error::UnsupportedShape(format!("{} terms", terms.len())));
        }
        for (i, &(c, p)) in terms.iter().enumerate() {
            if !(c > 0.0) || !c.is_finite() {
                return Err(Error::NonPositiveCoefficient { name: format!("c{}", i + 1), value: c });
            }
            if !(0.0..=2.0).contains(&p) {
                return Err(Error::ExponentOutOfRange { value: p });
            }
            if i > 0 && !(p > terms[i - 1].1) {
                return Err(Error::DegenerateExponents { lower: terms[i - 1].1, upper: p });
            }
        }
        Ok(PowerSum {
            terms: terms.iter().map(|&(coeff, exponent)| Term { coeff, exponent }).collect(),
        })
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn exponents(&self) -> Vec<f64> {
        self.terms.iter().map(|t| t.exponent).collect()
    }

    pub fn coeffs(&self) -> Vec<f64> {
        self.terms.iter().map(|t| t.coeff).collect()
    }

    pub fn top_exponent(&self) -> f64 {
        self.terms.last().map_or(0.0, |t| t.exponent)
    }

    /// Principal-branch value at `s`.
    pub fn eval(&self, s: Complex64) -> Result<Complex64> {
        if s == Complex64::new(0.0, 0.0) {
            return Err(Error::ZeroArgument);
        }
        let (rho, phi) = polar(s);
        Ok(self.eval_polar(rho, phi))
    }

    /// Value at `rho e^{i phi}` with `phi` taken literally (no branch folding).
    pub fn eval_polar(&self, rho: f64, phi: f64) -> Complex64 {
        eval_terms(&self.terms, rho, phi)
    }

    /// Natural magnitude of the sum near modulus `rho`.
    pub fn scale(&self, rho: f64) -> f64 {
        let c: f64 = self.terms.iter().map(|t| t.coeff.abs()).sum();
        c * rho.max(1.0).powf(self.top_exponent())
    }

    pub fn derivative(&self) -> Derivative {
        Derivative {
            terms: self
                .terms
                .iter()
                .filter(|t| t.exponent != 0.0)
                .map(|t| Term { coeff: t.coeff * t.exponent, exponent: t.exponent - 1.0 })
                .collect(),
        }
    }

    pub fn eval_dd(&self, s: CDd) -> CDd {
        let mut acc = CDd::zero();
        for t in &self.terms {
            let term = if t.exponent == 0.0 { CDd::from_re(Dd::from(1.0)) } else { s.powf(t.exponent) };
            acc = acc + term.scale(Dd::from(t.coeff));
        }
        acc
    }
}

/// Termwise derivative of a power sum; exponents may be negative.
#[derive(Debug, Clone, PartialEq)]
pub struct Derivative {
    pub terms: Vec<Term>,
}

impl Derivative {
    pub fn eval_polar(&self, rho: f64, phi: f64) -> Complex64 {
        eval_terms(&self.terms, rho, phi)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

fn eval_terms(terms: &[Term], rho: f64, phi: f64) -> Complex64 {
    terms.iter().fold(Complex64::new(0.0, 0.0), |acc, t| {
        if t.exponent == 0.0 {
            acc + t.coeff
        } else {
            acc + Complex64::from_polar(t.coeff * rho.powf(t.exponent), t.exponent * phi)
        }
    })
}

/// Modulus and principal argument in `(-pi, pi]`.
pub fn polar(s: Complex64) -> (f64, f64) {
    let phi = s.im.atan2(s.re);
    (s.norm(), if phi == -PI { PI } else { phi })
}

/// Principal-branch power `s^p`.
pub fn cpow(s: Complex64, p: f64) -> Complex64 {
    let (rho, phi) = polar(s);
    Complex64::from_polar(rho.powf(p), p * phi)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelSpec {
    pub code: ModelCode,
    pub orders: FractionalOrders,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub phi_sigma: PowerSum,
    pub phi_epsilon: PowerSum,
    pub xi: f64,
    pub lambda_order: Option<f64>,
    pub kappa_order: Option<f64>,
}

/// Exponent layout of one model row: nonzero exponents of `phi_sigma`,
/// `phi_epsilon` (each preceded by the constant term) and `xi`.
struct Row {
    sigma: Vec<f64>,
    epsilon: Vec<f64>,
    xi: f64,
}

fn row(code: ModelCode, o: &FractionalOrders) -> Row {
    use Order::*;
    let g = |x| o.req(x);
    let (al, be, ga, mu, nu, et) = (g(Alpha), g(Beta), g(Gamma), g(Mu), g(Nu), g(Eta));
    match code {
        ModelCode::IdId => Row { sigma: vec![al + be], epsilon: vec![al + be], xi: al - mu },
        ModelCode::IdDdPlus => Row { sigma: vec![al + be], epsilon: vec![al + be], xi: al + mu },
        ModelCode::IidIid => {
            let e = vec![al - be, al + ga];
            Row { sigma: e.clone(), epsilon: e, xi: et - ga }
        }
        ModelCode::IddIdd => {
            let e = vec![al + be, al + ga];
            Row { sigma: e.clone(), epsilon: e, xi: al - mu }
        }
        ModelCode::IidIdd => Row { sigma: vec![mu + nu, al + ga], epsilon: vec![al - be, al + ga], xi: al - mu },
        ModelCode::IPlusIdIPlusId | ModelCode::IddPlusIddPlus | ModelCode::IPlusIdIddPlus => {
            let p = (1.0 + al + ga) / 2.0;
            let e = vec![p, 1.0 + al + ga];
            let xi = match code {
                ModelCode::IPlusIdIPlusId => al - mu,
                ModelCode::IddPlusIddPlus => et - ga,
                _ => 1.0 - (ga - et),
            };
            Row { sigma: e.clone(), epsilon: e, xi }
        }
        ModelCode::IidId => Row { sigma: vec![al + be - ga - nu, al + be], epsilon: vec![al + be], xi: be - ga },
        ModelCode::IddDdPlus => Row { sigma: vec![al + be, al + mu], epsilon: vec![al + be], xi: al + mu },
        ModelCode::IPlusIdId => Row { sigma: vec![al + be, 2.0 * (al + be)], epsilon: vec![al + be], xi: be + nu },
        ModelCode::IddPlusDdPlus => {
            Row { sigma: vec![al + be, 2.0 * (al + be)], epsilon: vec![al + be], xi: al + mu }
        }
        ModelCode::IdIdd => Row { sigma: vec![mu + nu], epsilon: vec![al + be, mu + nu], xi: mu - al },
        ModelCode::IdDddPlus => Row { sigma: vec![al + be], epsilon: vec![nu - mu, al + be + nu - mu], xi: al + mu },
        ModelCode::IdIddPlus => {
            Row { sigma: vec![al + be], epsilon: vec![al + be, 2.0 * (al + be)], xi: nu - be }
        }
    }
}

fn take_coeffs(code: ModelCode, which: &'static str, given: &[f64], n: usize) -> Result<Vec<f64>> {
    let extra_nonzero = given.iter().skip(n).any(|&c| c != 0.0);
    if given.len() < n || extra_nonzero {
        return Err(Error::CoefficientCount { code: code.to_string(), which, expected: n, got: given.len() });
    }
    let v = given[..n].to_vec();
    for (i, &c) in v.iter().enumerate() {
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::NonPositiveCoefficient { name: format!("{}{}", which, i + 1), value: c });
        }
    }
    Ok(v)
}

fn assemble(coeffs: &[f64], exps: &[f64]) -> Result<PowerSum> {
    for &p in exps {
        if !(p > 0.0 && p < 2.0) {
            return Err(Error::ExponentOutOfRange { value: p });
        }
    }
    let mut terms = vec![(coeffs[0], 0.0)];
    terms.extend(coeffs[1..].iter().copied().zip(exps.iter().copied()));
    PowerSum::new(&terms)
}

/// Assemble a model from its code, orders and coefficients.
pub fn build_model(code: ModelCode, orders: FractionalOrders, a: &[f64], b: &[f64]) -> Result<ModelSpec> {
    let required = code.required_orders();
    for &o in required {
        let v = orders.get(o).ok_or(Error::MissingOrder { code: code.to_string(), order: o.name() })?;
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::OrderOutOfRange { order: o.name(), value: v });
        }
    }
    if let Some(o) = orders.present().find(|o| !required.contains(o)) {
        return Err(Error::UnexpectedOrder { code: code.to_string(), order: o.name().to_string() });
    }
    let r = row(code, &orders);
    let a = take_coeffs(code, "a", a, r.sigma.len() + 1)?;
    let b = take_coeffs(code, "b", b, r.epsilon.len() + 1)?;
    let phi_sigma = assemble(&a, &r.sigma)?;
    let phi_epsilon = assemble(&b, &r.epsilon)?;
    let other = if phi_sigma.len() == 2 { &r.epsilon } else { &r.sigma };
    Ok(ModelSpec {
        code,
        orders,
        a,
        b,
        phi_sigma,
        phi_epsilon,
        xi: r.xi,
        lambda_order: other.first().copied(),
        kappa_order: other.get(1).copied(),
    })
}

/// JSON model descriptor, the single input format of the crate and the CLI.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDescriptor {
    pub code: String,
    pub orders: FractionalOrders,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl ModelDescriptor {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Descriptor(e.to_string()))
    }

    pub fn build(&self) -> Result<ModelSpec> {
        build_model(self.code.parse()?, self.orders, &self.a, &self.b)
    }
}

impl ModelSpec {
    pub fn descriptor(&self) -> ModelDescriptor {
        ModelDescriptor { code: self.code.to_string(), orders: self.orders, a: self.a.clone(), b: self.b.clone() }
    }

    pub fn order(&self, o: Order) -> f64 {
        self.orders.req(o)
    }

    /// `s^{-(1-xi)} phi_epsilon(s) / phi_sigma(s)`.
    pub fn laplace_relaxation(&self, s: Complex64) -> Result<Complex64> {
        ratio(&self.phi_epsilon, &self.phi_sigma, s, self.xi - 1.0)
    }

    /// `s^{-(1+xi)} phi_sigma(s) / phi_epsilon(s)`.
    pub fn laplace_creep(&self, s: Complex64) -> Result<Complex64> {
        ratio(&self.phi_sigma, &self.phi_epsilon, s, -1.0 - self.xi)
    }

    pub fn laplace_relaxation_dd(&self, s: CDd) -> CDd {
        s.powf(self.xi - 1.0) * self.phi_epsilon.eval_dd(s) / self.phi_sigma.eval_dd(s)
    }

    pub fn laplace_creep_dd(&self, s: CDd) -> CDd {
        s.powf(-1.0 - self.xi) * self.phi_sigma.eval_dd(s) / self.phi_epsilon.eval_dd(s)
    }
}

fn ratio(num: &PowerSum, den: &PowerSum, s: Complex64, power: f64) -> Result<Complex64> {
    let d = den.eval(s)?;
    if d.norm() < POLE_HIT_TOL * den.scale(s.norm()) {
        return Err(Error::PoleHit { re: s.re, im: s.im });
    }
    Ok(cpow(s, power) * num.eval(s)? / d)
}

//! Relaxation modulus `sigma_sr(t)` and creep compliance `eps_cr(t)`.
//!
//! Both come from inverting `s^{xi-1} phi_eps/phi_sigma` and
//! `s^{-1-xi} phi_sigma/phi_eps` along the negative real axis. The branch-cut
//! part is a real integral weighted by `K(rho)`; a zero of the denominator adds
//! an exponential (real pole, half residue, principal-value cut integral) or a
//! damped cosine (conjugate pair, full residues).

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use statrs::function::gamma::gamma;

use crate::constraints::K_closed_form;
use crate::error::{Error, Result};
use crate::mittag_leffler::{ml_e, rgamma};
use crate::model_catalog::{ModelCode, ModelSpec, Order, PowerSum};
use crate::pole_finder::{classify, PoleClassification, PoleKind};
use crate::quadrature::{integrate_algebraic, integrate_principal_value, integrate_semi_infinite, QuadSpec};

/// Tail exponents of the creep integrand at or above this get the analytic
/// power-law tail subtracted.
pub const TAIL_SUBTRACT_EXPONENT: f64 = -1.5;
const DERIV_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Method {
    #[serde(rename = "integral")]
    Integral,
    #[serde(rename = "ml")]
    MittagLeffler,
    #[serde(rename = "stable")]
    StableSplit,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Integral => "integral",
            Method::MittagLeffler => "ml",
            Method::StableSplit => "stable",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Log,
    Linear,
}

/// `points` times between `t_min` and `t_max`, both included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    pub t_min: f64,
    pub t_max: f64,
    pub points: usize,
    pub spacing: Spacing,
}

impl Default for TimeGrid {
    fn default() -> Self {
        TimeGrid { t_min: 1e-3, t_max: 1e3, points: 200, spacing: Spacing::Log }
    }
}

impl TimeGrid {
    pub fn log(t_min: f64, t_max: f64, points: usize) -> Self {
        TimeGrid { t_min, t_max, points, spacing: Spacing::Log }
    }

    pub fn times(&self) -> Result<Vec<f64>> {
        if !(self.t_min > 0.0) || !(self.t_max >= self.t_min) || !self.t_max.is_finite() {
            return Err(Error::InvalidGrid(format!("need 0 < tmin <= tmax, got [{}, {}]", self.t_min, self.t_max)));
        }
        if self.points < 2 {
            return Err(Error::InvalidGrid(format!("need at least 2 points, got {}", self.points)));
        }
        let n = (self.points - 1) as f64;
        Ok((0..self.points)
            .map(|i| {
                let u = i as f64 / n;
                if i == 0 {
                    return self.t_min;
                }
                if i + 1 == self.points {
                    return self.t_max;
                }
                match self.spacing {
                    Spacing::Log => (self.t_min.ln() + u * (self.t_max / self.t_min).ln()).exp(),
                    Spacing::Linear => self.t_min + u * (self.t_max - self.t_min),
                }
            })
            .collect())
    }
}

/// Cut integral and pole term, separately.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BranchValues {
    pub np: Vec<f64>,
    pub branch: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResponseCurve {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub branch_values: Option<BranchValues>,
    pub classification: PoleClassification,
    pub method: Method,
}

fn quad() -> QuadSpec {
    QuadSpec { rel_tol: 1e-11, abs_tol: 1e-300, max_subdivisions: 4000, ..Default::default() }
}

fn on_cut(p: &PowerSum, rho: f64) -> f64 {
    p.eval_polar(rho, PI).norm_sqr()
}

fn check_t(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidGrid(format!("time {t} must be positive")))
    }
}

/// `f(rho) * w(rho)` over `(0, inf)`, as a principal value when `pole` is set.
/// `damped` tells whether `w` carries `e^{-rho t}`.
fn cut_integral<F: Fn(f64) -> f64>(f: F, t: f64, damped: bool, pole: Option<f64>) -> Result<f64> {
    cut_integral_abs(f, t, damped, pole, 0.0)
}

/// As `cut_integral`, also accepting an absolute error of `abs` (in the
/// scale of the result).
fn cut_integral_abs<F: Fn(f64) -> f64>(f: F, t: f64, damped: bool, pole: Option<f64>, abs: f64) -> Result<f64> {
    let mut q = quad();
    q.abs_tol = q.abs_tol.max(abs * PI);
    let r = match (pole, damped) {
        (Some(p), true) => integrate_principal_value(f, p, t, &q)?,
        (Some(p), false) => integrate_principal_value(f, p, 0.0, &q)?,
        (None, true) => integrate_semi_infinite(f, t, &q)?,
        (None, false) => integrate_algebraic(f, 1.0 / t, &q)?,
    };
    Ok(r.value / PI)
}

fn real_pole(cls: &PoleClassification) -> Option<f64> {
    match cls.kind {
        PoleKind::NegativeRealPole => cls.rho,
        _ => None,
    }
}

/// `s^pow * num(s) / den'(s)` at the zero `rho e^{i phi}` of `den`.
fn residue(num: &PowerSum, den: &PowerSum, pow: f64, rho: f64, phi: f64) -> Result<Complex64> {
    let d = den.derivative().eval_polar(rho, phi);
    if d.norm() * rho.max(1e-300) < DERIV_TOL * den.scale(rho) {
        return Err(Error::DerivativeVanishes);
    }
    Ok(Complex64::from_polar(rho.powf(pow), pow * phi) * num.eval_polar(rho, phi) / d)
}

fn pole_of(cls: &PoleClassification, want: PoleKind) -> Result<(f64, f64)> {
    match (cls.kind == want, cls.rho, cls.phi) {
        (true, Some(r), Some(p)) => Ok((r, p)),
        _ => Err(Error::UnsupportedShape(format!("classification {:?} is not {:?}", cls.kind, want))),
    }
}

// ---------------------------------------------------------------- relaxation

/// `sigma_sr^{(k)}` branch-cut part, `k = 0, 1, 2`.
fn relaxation_np_k(m: &ModelSpec, cls: &PoleClassification, t: f64, k: i32) -> Result<f64> {
    check_t(t)?;
    let xi = m.xi;
    let f = |rho: f64| {
        let w = (-rho).powi(k) * (-rho * t).exp();
        rho.powf(xi - 1.0) * K_closed_form(m, rho) / on_cut(&m.phi_sigma, rho) * w
    };
    cut_integral(f, t, true, real_pole(cls))
}

/// Branch-cut part of the relaxation modulus. With a real pole the integral
/// is taken as a principal value.
pub fn relaxation_np(m: &ModelSpec, t: f64) -> Result<f64> {
    let cls = classify(&m.phi_sigma)?;
    relaxation_np_k(m, &cls, t, 0)
}

/// The same integral written with moduli and arguments of `phi` on the cut.
pub fn relaxation_np_phase_form(m: &ModelSpec, t: f64) -> Result<f64> {
    check_t(t)?;
    let cls = classify(&m.phi_sigma)?;
    let xi = m.xi;
    let f = |rho: f64| {
        let e = m.phi_epsilon.eval_polar(rho, PI);
        let s = m.phi_sigma.eval_polar(rho, PI);
        rho.powf(xi - 1.0) * e.norm() / s.norm() * (xi * PI + e.arg() - s.arg()).sin() * (-rho * t).exp()
    };
    cut_integral(f, t, true, real_pole(&cls))
}

fn relax_residue(m: &ModelSpec, rho: f64, phi: f64) -> Result<Complex64> {
    residue(&m.phi_epsilon, &m.phi_sigma, m.xi - 1.0, rho, phi)
}

/// Real-pole term `Re(R) e^{-rho t}` and its derivatives.
fn relaxation_rp_k(m: &ModelSpec, cls: &PoleClassification, t: f64, k: i32) -> Result<f64> {
    let (rho, phi) = pole_of(cls, PoleKind::NegativeRealPole)?;
    let r = relax_residue(m, rho, phi)?;
    Ok(r.re * (-rho).powi(k) * (-rho * t).exp())
}

fn relaxation_ccp_k(m: &ModelSpec, cls: &PoleClassification, t: f64, k: i32) -> Result<f64> {
    let (rho, phi) = pole_of(cls, PoleKind::ComplexConjugatePair)?;
    let r = relax_residue(m, rho, phi)?;
    let s = Complex64::from_polar(rho, phi);
    Ok(2.0 * (r * s.powi(k) * (s * t).exp()).re)
}

pub fn relaxation_rp(m: &ModelSpec, cls: &PoleClassification, t: f64) -> Result<f64> {
    relaxation_rp_k(m, cls, t, 0)
}

pub fn relaxation_ccp(m: &ModelSpec, cls: &PoleClassification, t: f64) -> Result<f64> {
    relaxation_ccp_k(m, cls, t, 0)
}

fn relaxation_branch_k(m: &ModelSpec, cls: &PoleClassification, t: f64, k: i32) -> Result<f64> {
    match cls.kind {
        PoleKind::NoPoles => Ok(0.0),
        PoleKind::NegativeRealPole => relaxation_rp_k(m, cls, t, k),
        PoleKind::ComplexConjugatePair => relaxation_ccp_k(m, cls, t, k),
    }
}

/// `(np, branch)` at one time.
fn relaxation_parts(m: &ModelSpec, cls: &PoleClassification, t: f64, k: i32) -> Result<(f64, f64)> {
    Ok((relaxation_np_k(m, cls, t, k)?, relaxation_branch_k(m, cls, t, k)?))
}

/// `sigma_sr(t)` at a single time.
pub fn relaxation_at(m: &ModelSpec, t: f64) -> Result<f64> {
    let cls = classify(&m.phi_sigma)?;
    let (np, br) = relaxation_parts(m, &cls, t, 0)?;
    Ok(np + br)
}

/// `d^k sigma_sr / dt^k`, `k` in `{1, 2}`.
pub fn relaxation_derivatives(m: &ModelSpec, t: f64, k: u32) -> Result<f64> {
    if !(1..=2).contains(&k) {
        return Err(Error::UnsupportedShape(format!("derivative order {k}")));
    }
    let cls = classify(&m.phi_sigma)?;
    let (np, br) = relaxation_parts(m, &cls, t, k as i32)?;
    Ok(np + br)
}

fn par_eval<F: Fn(f64) -> Result<(f64, f64)> + Sync>(times: &[f64], f: F) -> Result<(Vec<f64>, Vec<f64>)> {
    let parts: Vec<(f64, f64)> = times.par_iter().map(|&t| f(t)).collect::<Result<_>>()?;
    Ok(parts.into_iter().unzip())
}

fn assemble(times: Vec<f64>, np: Vec<f64>, branch: Vec<f64>, cls: PoleClassification, method: Method) -> ResponseCurve {
    let values = np.iter().zip(&branch).map(|(a, b)| a + b).collect();
    ResponseCurve { times, values, branch_values: Some(BranchValues { np, branch }), classification: cls, method }
}

fn single(times: Vec<f64>, values: Vec<f64>, cls: PoleClassification, method: Method) -> ResponseCurve {
    ResponseCurve { times, values, branch_values: None, classification: cls, method }
}

/// Relaxation modulus over a grid by the cut integral plus pole terms.
pub fn relaxation(m: &ModelSpec, grid: &TimeGrid) -> Result<ResponseCurve> {
    relaxation_on(m, &grid.times()?)
}

pub fn relaxation_on(m: &ModelSpec, times: &[f64]) -> Result<ResponseCurve> {
    let cls = classify(&m.phi_sigma)?;
    let (np, br) = par_eval(times, |t| relaxation_parts(m, &cls, t, 0))?;
    Ok(assemble(times.to_vec(), np, br, cls, Method::Integral))
}

/// Kernels `(coeff, zeta)` of the Mittag-Leffler form with shared `xi` and
/// `lambda`: `sum coeff e_{xi, zeta, lambda}(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MlForm {
    pub xi: f64,
    pub lambda: f64,
    pub kernels: Vec<(f64, f64)>,
}

impl MlForm {
    pub fn eval(&self, t: f64) -> Result<f64> {
        self.kernels.iter().try_fold(0.0, |acc, &(c, zeta)| Ok(acc + c * ml_e(self.xi, zeta, self.lambda, t)?))
    }

    /// `k`-th time derivative, through `d/dt e_{xi,zeta} = e_{xi,zeta-1}`.
    pub fn eval_derivative(&self, t: f64, k: u32) -> Result<f64> {
        self.kernels
            .iter()
            .try_fold(0.0, |acc, &(c, zeta)| Ok(acc + c * ml_e(self.xi, zeta - k as f64, self.lambda, t)?))
    }
}

/// `num/den` with a two-term `den = d1 + d2 s^p` and `s^shift` in front.
fn ml_form(num: &PowerSum, den: &PowerSum, shift: f64) -> Option<MlForm> {
    if den.len() != 2 || den.terms()[0].exponent != 0.0 {
        return None;
    }
    let (d1, d2) = (den.terms()[0].coeff, den.terms()[1].coeff);
    let p = den.terms()[1].exponent;
    // s^{shift + q} / (d2 (s^p + d1/d2)) -> (1/d2) e_{p, p - shift - q, d1/d2}
    let kernels = num.terms().iter().map(|n| (n.coeff / d2, p - shift - n.exponent)).collect();
    Some(MlForm { xi: p, lambda: d1 / d2, kernels })
}

/// Mittag-Leffler form of the relaxation modulus; needs a two-term `phi_sigma`.
pub fn relaxation_ml_form(m: &ModelSpec) -> Result<MlForm> {
    ml_form(&m.phi_epsilon, &m.phi_sigma, m.xi - 1.0)
        .ok_or(Error::WrongModelShape { code: m.code.to_string(), what: "a Mittag-Leffler relaxation modulus" })
}

pub fn relaxation_ml(m: &ModelSpec, t: f64) -> Result<f64> {
    check_t(t)?;
    relaxation_ml_form(m)?.eval(t)
}

pub fn relaxation_ml_curve(m: &ModelSpec, grid: &TimeGrid) -> Result<ResponseCurve> {
    let form = relaxation_ml_form(m)?;
    let cls = classify(&m.phi_sigma)?;
    let times = grid.times()?;
    let values = times.par_iter().map(|&t| form.eval(t)).collect::<Result<Vec<_>>>()?;
    Ok(single(times, values, cls, Method::MittagLeffler))
}

// --------------------------------------------------------------------- creep

/// Leading large-`rho` behaviour `c rho^e` of the creep cut integrand
/// `rho^{-1-xi} K / |phi_eps|^2 / pi`.
fn creep_tail(m: &ModelSpec) -> (f64, f64) {
    let ts = m.phi_sigma.terms().last().copied().unwrap();
    let te = m.phi_epsilon.terms().last().copied().unwrap();
    let e = -1.0 - m.xi + ts.exponent - te.exponent;
    let c = ts.coeff / te.coeff * ((m.xi + te.exponent - ts.exponent) * PI).sin() / PI;
    (c, e)
}

/// `int_0^inf c rho^e (1 - e^{-rho t}) drho` for `-2 < e < -1`.
fn power_tail_integral(c: f64, e: f64, t: f64) -> f64 {
    -c * gamma(1.0 + e) * t.powf(-1.0 - e)
}

/// `k`-th derivative of the creep cut part; `k = 0` uses `1 - e^{-rho t}`,
/// `k >= 1` uses `-(-rho)^k e^{-rho t}`.
fn creep_np_k(m: &ModelSpec, cls: &PoleClassification, t: f64, k: i32) -> Result<f64> {
    check_t(t)?;
    let xi = m.xi;
    let g = |rho: f64| rho.powf(-1.0 - xi) * K_closed_form(m, rho) / on_cut(&m.phi_epsilon, rho);
    let pole = real_pole(cls);
    if k > 0 {
        let f = |rho: f64| -g(rho) * (-rho).powi(k) * (-rho * t).exp();
        return cut_integral(f, t, true, pole);
    }
    let (c, e) = creep_tail(m);
    if e >= -1.0 && c != 0.0 {
        return Err(Error::NotIntegrable(e));
    }
    if e >= TAIL_SUBTRACT_EXPONENT && c != 0.0 {
        let cp = c * PI;
        let f = |rho: f64| (g(rho) - cp * rho.powf(e)) * -(-rho * t).exp_m1();
        let tail = power_tail_integral(c, e, t);
        return Ok(cut_integral_abs(f, t, false, pole, quad().rel_tol * tail.abs())? + tail);
    }
    let f = |rho: f64| g(rho) * -(-rho * t).exp_m1();
    cut_integral(f, t, false, pole)
}

pub fn creep_np(m: &ModelSpec, t: f64) -> Result<f64> {
    let cls = classify(&m.phi_epsilon)?;
    creep_np_k(m, &cls, t, 0)
}

fn creep_residue(m: &ModelSpec, rho: f64, phi: f64) -> Result<Complex64> {
    residue(&m.phi_sigma, &m.phi_epsilon, -1.0 - m.xi, rho, phi)
}

/// Real-pole term `Re(R0) (e^{-rho t} - 1)` and its derivatives.
fn creep_rp_k(m: &ModelSpec, cls: &PoleClassification, t: f64, k: i32) -> Result<f64> {
    let (rho, phi) = pole_of(cls, PoleKind::NegativeRealPole)?;
    let r = creep_residue(m, rho, phi)?;
    Ok(if k == 0 { r.re * (-rho * t).exp_m1() } else { r.re * (-rho).powi(k) * (-rho * t).exp() })
}

fn creep_ccp_k(m: &ModelSpec, cls: &PoleClassification, t: f64, k: i32) -> Result<f64> {
    let (rho, phi) = pole_of(cls, PoleKind::ComplexConjugatePair)?;
    let r = creep_residue(m, rho, phi)?;
    let s = Complex64::from_polar(rho, phi);
    let v = if k == 0 { (s * t).exp() - 1.0 } else { s.powi(k) * (s * t).exp() };
    Ok(2.0 * (r * v).re)
}

pub fn creep_rp(m: &ModelSpec, cls: &PoleClassification, t: f64) -> Result<f64> {
    creep_rp_k(m, cls, t, 0)
}

pub fn creep_ccp(m: &ModelSpec, cls: &PoleClassification, t: f64) -> Result<f64> {
    creep_ccp_k(m, cls, t, 0)
}

fn creep_parts(m: &ModelSpec, cls: &PoleClassification, t: f64, k: i32) -> Result<(f64, f64)> {
    let br = match cls.kind {
        PoleKind::NoPoles => 0.0,
        PoleKind::NegativeRealPole => creep_rp_k(m, cls, t, k)?,
        PoleKind::ComplexConjugatePair => creep_ccp_k(m, cls, t, k)?,
    };
    Ok((creep_np_k(m, cls, t, k)?, br))
}

/// `eps_cr(t)` by the generic cut integral plus pole terms.
pub fn creep_integral_at(m: &ModelSpec, t: f64) -> Result<f64> {
    let cls = classify(&m.phi_epsilon)?;
    let (np, br) = creep_parts(m, &cls, t, 0)?;
    Ok(np + br)
}

/// `eps_cr(t)` by the default method for the model.
pub fn creep_at(m: &ModelSpec, t: f64) -> Result<f64> {
    if m.code == ModelCode::IPlusIdId {
        creep_stable_at(m, t)
    } else {
        creep_integral_at(m, t)
    }
}

/// `d eps_cr / dt`.
pub fn creep_rate(m: &ModelSpec, t: f64) -> Result<f64> {
    creep_derivative(m, t, 1)
}

/// `d^k eps_cr / dt^k`, `k` in `{1, 2}`.
pub fn creep_derivative(m: &ModelSpec, t: f64, k: u32) -> Result<f64> {
    if !(1..=2).contains(&k) {
        return Err(Error::UnsupportedShape(format!("derivative order {k}")));
    }
    let cls = classify(&m.phi_epsilon)?;
    let (np, br) = creep_parts(m, &cls, t, k as i32)?;
    Ok(np + br)
}

/// Creep compliance over a grid with the model's default method.
pub fn creep(m: &ModelSpec, grid: &TimeGrid) -> Result<ResponseCurve> {
    if m.code == ModelCode::IPlusIdId {
        creep_stable(m, grid)
    } else {
        creep_integral(m, grid)
    }
}

pub fn creep_integral(m: &ModelSpec, grid: &TimeGrid) -> Result<ResponseCurve> {
    creep_integral_on(m, &grid.times()?)
}

pub fn creep_integral_on(m: &ModelSpec, times: &[f64]) -> Result<ResponseCurve> {
    let cls = classify(&m.phi_epsilon)?;
    let (np, br) = par_eval(times, |t| creep_parts(m, &cls, t, 0))?;
    Ok(assemble(times.to_vec(), np, br, cls, Method::Integral))
}

/// Mittag-Leffler form of the creep compliance; needs a two-term `phi_eps`.
pub fn creep_ml_form(m: &ModelSpec) -> Result<MlForm> {
    ml_form(&m.phi_sigma, &m.phi_epsilon, -1.0 - m.xi)
        .ok_or(Error::WrongModelShape { code: m.code.to_string(), what: "a Mittag-Leffler creep compliance" })
}

pub fn creep_ml(m: &ModelSpec, t: f64) -> Result<f64> {
    check_t(t)?;
    creep_ml_form(m)?.eval(t)
}

pub fn creep_ml_curve(m: &ModelSpec, grid: &TimeGrid) -> Result<ResponseCurve> {
    let form = creep_ml_form(m)?;
    let cls = classify(&m.phi_epsilon)?;
    let times = grid.times()?;
    let values = times.par_iter().map(|&t| form.eval(t)).collect::<Result<Vec<_>>>()?;
    Ok(single(times, values, cls, Method::MittagLeffler))
}

/// `int_0^t L^{-1}[s^{-c} / (s^p + lam)]`, written as the cut integral
/// `(1/pi) int rho^{-1-c} (rho^p sin((p+c) pi) + lam sin(c pi)) / |rho^p e^{ip pi} + lam|^2 (1 - e^{-rho t})`.
fn shifted_kernel_integral(c: f64, p: f64, lam: f64, t: f64) -> Result<f64> {
    let (sp, sc, cp) = (((p + c) * PI).sin(), (c * PI).sin(), (p * PI).cos());
    let f = |rho: f64| {
        let u = rho.powf(p);
        let den = u * u + 2.0 * lam * u * cp + lam * lam;
        rho.powf(-1.0 - c) * (u * sp + lam * sc) / den * -(-rho * t).exp_m1()
    };
    cut_integral(f, t, false, None)
}

/// Creep compliance of I+ID.ID split into a power of `t` and two cut
/// integrals whose integrands decay at least like `rho^{-1-p}`.
pub fn creep_stable_at(m: &ModelSpec, t: f64) -> Result<f64> {
    if m.code != ModelCode::IPlusIdId {
        return Err(Error::WrongModelShape { code: m.code.to_string(), what: "the split creep form" });
    }
    check_t(t)?;
    let (al, be, nu) = (m.order(Order::Alpha), m.order(Order::Beta), m.order(Order::Nu));
    let (a, b) = (&m.a, &m.b);
    let p = al + be;
    let lam = b[0] / b[1];
    let lead = a[2] / b[1] * t.powf(nu - al) * rgamma(1.0 + nu - al);
    let mid_c = a[2] / b[1] * (a[1] / a[2] - lam);
    let mid = if mid_c == 0.0 { 0.0 } else { mid_c * shifted_kernel_integral(nu - al, p, lam, t)? };
    let last = a[0] / b[1] * shifted_kernel_integral(be + nu, p, lam, t)?;
    Ok(lead + mid + last)
}

pub fn creep_stable(m: &ModelSpec, grid: &TimeGrid) -> Result<ResponseCurve> {
    let cls = classify(&m.phi_epsilon)?;
    let times = grid.times()?;
    let values = times.par_iter().map(|&t| creep_stable_at(m, t)).collect::<Result<Vec<_>>>()?;
    Ok(single(times, values, cls, Method::StableSplit))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model_catalog::{build_model, FractionalOrders};
    use crate::quadrature::bromwich_oracle;

    fn i_id_id(a: &[f64], b: &[f64]) -> ModelSpec {
        let mut o = FractionalOrders::default();
        o.set(Order::Alpha, 0.35);
        o.set(Order::Beta, 0.55);
        o.set(Order::Nu, 0.4);
        build_model(ModelCode::IPlusIdId, o, a, b).unwrap()
    }

    fn case_one() -> ModelSpec {
        i_id_id(&[0.05, 1.5, 0.45], &[0.7, 0.95])
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn grid_endpoints() {
        let g = TimeGrid::default().times().unwrap();
        assert_eq!(g.len(), 200);
        assert!((g[0] - 1e-3).abs() < 1e-18 && (g[199] - 1e3).abs() < 1e-9);
        assert!(TimeGrid::log(0.0, 1.0, 5).times().is_err());
    }

    #[test]
    fn two_forms_of_the_cut_integral() {
        let m = case_one();
        for &t in &[0.01, 1.0, 100.0] {
            let a = relaxation_np(&m, t).unwrap();
            let b = relaxation_np_phase_form(&m, t).unwrap();
            assert!(rel(a, b) < 1e-9, "t={t}: {a} {b}");
        }
    }

    #[test]
    fn relaxation_matches_oracle_all_branches() {
        for m in [case_one(), i_id_id(&[11.0, 28.4026942114927550, 20.27], &[7.0, 9.5]), i_id_id(&[11.0, 15.0, 20.27], &[7.0, 9.5])] {
            for &t in &[0.1, 1.0, 10.0] {
                let v = relaxation_at(&m, t).unwrap();
                let o = bromwich_oracle(|s| Some(m.laplace_relaxation_dd(s)), t).unwrap();
                assert!(rel(v, o) < 1e-5, "{:?} t={t}: {v} vs {o}", m.a);
            }
        }
    }

    #[test]
    fn creep_forms_agree() {
        let m = case_one();
        for &t in &[0.1, 1.0, 10.0] {
            let a = creep_integral_at(&m, t).unwrap();
            let b = creep_stable_at(&m, t).unwrap();
            let c = creep_ml(&m, t).unwrap();
            let o = bromwich_oracle(|s| Some(m.laplace_creep_dd(s)), t).unwrap();
            assert!(rel(a, o) < 1e-6 && rel(b, o) < 1e-6 && rel(c, o) < 1e-6, "t={t}: {a} {b} {c} {o}");
        }
    }

    #[test]
    fn derivatives_match_differences() {
        let m = case_one();
        for &t in &[0.5, 2.0] {
            let h = 1e-4 * t;
            let fd = (relaxation_at(&m, t + h).unwrap() - relaxation_at(&m, t - h).unwrap()) / (2.0 * h);
            assert!(rel(relaxation_derivatives(&m, t, 1).unwrap(), fd) < 1e-5);
            let fd = (creep_integral_at(&m, t + h).unwrap() - creep_integral_at(&m, t - h).unwrap()) / (2.0 * h);
            assert!(rel(creep_rate(&m, t).unwrap(), fd) < 1e-5);
        }
    }

    #[test]
    fn short_time_values() {
        let m = case_one();
        assert!(rel(relaxation_at(&m, 1e-3).unwrap(), 2.89) < 0.02);
        assert!(rel(creep_stable_at(&m, 1e-3).unwrap(), 0.344) < 0.02);
    }
}

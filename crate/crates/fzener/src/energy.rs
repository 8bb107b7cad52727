//! Power, stored energy and dissipated power for a prescribed strain or
//! stress history on a uniform grid.
//!
//! Hereditary integrals are product-integrated: each panel of the kernel is
//! integrated exactly (differences of its antiderivative where one is
//! sampled, trapezoid otherwise) and the panel next to the diagonal uses the
//! moment of a power law fitted through the kernel at `h/2` and `h`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model_catalog::ModelSpec;
use crate::pole_finder::classify;
use crate::response;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum HistoryKind {
    #[serde(rename = "strain")]
    Strain,
    #[serde(rename = "stress")]
    Stress,
}

/// Samples on `t_i = i h`, `i = 0..n`.
#[derive(Debug, Clone, PartialEq)]
pub struct History {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub kind: HistoryKind,
}

impl History {
    pub fn new(times: Vec<f64>, values: Vec<f64>, kind: HistoryKind) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::InvalidHistory(format!("{} times but {} values", times.len(), values.len())));
        }
        if times.len() < 3 {
            return Err(Error::InvalidHistory("need at least 3 samples".into()));
        }
        if times[0] != 0.0 {
            return Err(Error::InvalidHistory(format!("grid must start at 0, starts at {}", times[0])));
        }
        let h = times[1];
        if !(h > 0.0) {
            return Err(Error::InvalidHistory("non-increasing times".into()));
        }
        for (i, &t) in times.iter().enumerate() {
            if (t - i as f64 * h).abs() > 1e-9 * h.max(t) {
                return Err(Error::InvalidHistory(format!("grid is not uniform at index {i}")));
            }
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidHistory("non-finite value".into()));
        }
        Ok(History { times, values, kind })
    }

    /// `f` sampled at `n + 1` equally spaced points on `[0, t_end]`.
    pub fn sample<F: Fn(f64) -> f64>(kind: HistoryKind, t_end: f64, n: usize, f: F) -> Result<Self> {
        let h = t_end / n as f64;
        let times: Vec<f64> = (0..=n).map(|i| i as f64 * h).collect();
        let values = times.iter().map(|&t| f(t)).collect();
        History::new(times, values, kind)
    }

    pub fn step(&self) -> f64 {
        self.times[1]
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Central differences inside, one-sided second-order at the ends.
    pub fn derivative(&self) -> Vec<f64> {
        central(&self.values, self.step())
    }
}

fn central(v: &[f64], h: f64) -> Vec<f64> {
    let n = v.len();
    let mut d = vec![0.0; n];
    for i in 1..n - 1 {
        d[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
    }
    d[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
    d[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
    d
}

/// A kernel `k` with its first two derivatives on `u_j = j h`, `j = 1..=n`,
/// and at `h/2`. Index 0 holds the `h/2` sample.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelSamples {
    pub h: f64,
    pub k: Vec<f64>,
    pub dk: Vec<f64>,
    pub d2k: Vec<f64>,
}

impl KernelSamples {
    pub fn from_fn<F>(h: f64, n: usize, f: F) -> Result<Self>
    where
        F: Fn(f64) -> Result<[f64; 3]> + Sync,
    {
        let rows: Vec<[f64; 3]> =
            (0..=n).into_par_iter().map(|j| f(if j == 0 { 0.5 * h } else { j as f64 * h })).collect::<Result<_>>()?;
        Ok(KernelSamples {
            h,
            k: rows.iter().map(|r| r[0]).collect(),
            dk: rows.iter().map(|r| r[1]).collect(),
            d2k: rows.iter().map(|r| r[2]).collect(),
        })
    }

    /// `sigma_sr` and its derivatives.
    pub fn relaxation(m: &ModelSpec, h: f64, n: usize) -> Result<Self> {
        classify(&m.phi_sigma)?;
        KernelSamples::from_fn(h, n, |t| {
            Ok([
                response::relaxation_at(m, t)?,
                response::relaxation_derivatives(m, t, 1)?,
                response::relaxation_derivatives(m, t, 2)?,
            ])
        })
    }

    /// `eps_cr` and its derivatives.
    pub fn creep(m: &ModelSpec, h: f64, n: usize) -> Result<Self> {
        classify(&m.phi_epsilon)?;
        KernelSamples::from_fn(h, n, |t| {
            Ok([response::creep_at(m, t)?, response::creep_derivative(m, t, 1)?, response::creep_derivative(m, t, 2)?])
        })
    }

    pub fn len(&self) -> usize {
        self.k.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn shifted(&self) -> KernelSamples {
        KernelSamples { h: self.h, k: self.dk.clone(), dk: self.d2k.clone(), d2k: vec![f64::NAN; self.k.len()] }
    }
}

/// `int_0^h k(u) (u/h)^m du` for `k` a power law through `k(h/2)`, `k(h)`.
fn first_moment(k_half: f64, k_h: f64, h: f64, m: f64) -> Result<f64> {
    if k_h == 0.0 && k_half == 0.0 {
        return Ok(0.0);
    }
    if k_half.signum() != k_h.signum() || !(k_half * k_h > 0.0) {
        return Err(Error::GridTooCoarse("kernel changes sign inside the first panel".into()));
    }
    let kappa = (k_h / k_half).log2();
    if !(kappa + m + 1.0 > 0.0) {
        return Err(Error::GridTooCoarse(format!("kernel exponent {kappa} not integrable against u^{m}")));
    }
    Ok(k_h * h / (kappa + m + 1.0))
}

/// `(int_panel k, int_panel k (u - u_{j-1})/h)` for panel `j >= 1`. With
/// `anti`, panel integrals are differences of the antiderivative samples,
/// otherwise corrected trapezoid. `first = false` leaves panel 1 to the caller.
struct Panels {
    m0: Vec<f64>,
    m1: Vec<f64>,
}

fn panels(k: &[f64], dk_for_trap: Option<&[f64]>, anti: Option<&[f64]>, h: f64, first: bool) -> Result<Panels> {
    let n = k.len() - 1;
    let mut m0 = vec![0.0; n + 1];
    let mut m1 = vec![0.0; n + 1];
    if first {
        m0[1] = first_moment(k[0], k[1], h, 0.0)?;
        m1[1] = first_moment(k[0], k[1], h, 1.0)?;
    }
    for j in 2..=n {
        match anti {
            Some(a) => {
                m0[j] = a[j] - a[j - 1];
                // int k (u - u_{j-1})/h = a_j - (1/h) int_panel a, the last by corrected trapezoid
                m1[j] = 0.5 * (a[j] - a[j - 1]) + h * (k[j] - k[j - 1]) / 12.0;
            }
            None => {
                let d = dk_for_trap.map_or(0.0, |d| d[j] - d[j - 1]);
                m0[j] = 0.5 * h * (k[j - 1] + k[j]) - h * h * d / 12.0;
                m1[j] = h * (k[j - 1] / 6.0 + k[j] / 3.0);
            }
        }
    }
    Ok(Panels { m0, m1 })
}

/// `int_0^{t_n} k(u) g(t_n - u) du` for all `n`, `g` piecewise linear.
fn convolve(p: &Panels, g: &[f64]) -> Vec<f64> {
    let n = g.len() - 1;
    (0..=n)
        .into_par_iter()
        .map(|i| {
            let mut acc = 0.0;
            for j in 1..=i {
                // on panel j, g runs linearly from g[i-j+1] to g[i-j]
                let (g0, g1) = (g[i - j + 1], g[i - j]);
                acc += g0 * p.m0[j] + (g1 - g0) * p.m1[j];
            }
            acc
        })
        .collect()
}

/// `int_0^{t_n} k(u) (g(t_n) - g(t_n - u))^2 du`, the square interpolated
/// linearly between nodes except on the first panel, where it is `~ u^2`.
fn hereditary(k: &KernelSamples, dk_panels: &Panels, g: &[f64]) -> Result<Vec<f64>> {
    let n = g.len() - 1;
    let h = k.h;
    let q2 = first_moment(k.k[0], k.k[1], h, 2.0)?;
    Ok((0..=n)
        .into_par_iter()
        .map(|i| {
            if i == 0 {
                return 0.0;
            }
            let d = |j: usize| (g[i] - g[i - j]).powi(2);
            let mut acc = d(1) * q2;
            for j in 2..=i {
                acc += d(j - 1) * dk_panels.m0[j] + (d(j) - d(j - 1)) * dk_panels.m1[j];
            }
            acc
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyBreakdown {
    pub times: Vec<f64>,
    #[serde(rename = "P")]
    pub power: Vec<f64>,
    #[serde(rename = "W")]
    pub stored: Vec<f64>,
    #[serde(rename = "Pdiss")]
    pub dissipated: Vec<f64>,
    /// `P - dW/dt - Pdiss`, zero at the two end points.
    pub residual: Vec<f64>,
    pub identity_residual: f64,
}

impl EnergyBreakdown {
    fn assemble(times: Vec<f64>, power: Vec<f64>, stored: Vec<f64>, dissipated: Vec<f64>, h: f64) -> Self {
        let wdot = central(&stored, h);
        let n = times.len();
        let residual: Vec<f64> = (0..n)
            .map(|i| if i == 0 || i == n - 1 { 0.0 } else { power[i] - wdot[i] - dissipated[i] })
            .collect();
        let identity_residual = residual.iter().fold(0.0f64, |a, r| a.max(r.abs()));
        EnergyBreakdown { times, power, stored, dissipated, residual, identity_residual }
    }

    pub fn max_power(&self) -> f64 {
        self.power.iter().fold(0.0f64, |a, p| a.max(p.abs()))
    }
}

fn expect(h: &History, kind: HistoryKind) -> Result<()> {
    if h.kind != kind {
        return Err(Error::InvalidHistory(format!("expected a {kind:?} history, got {:?}", h.kind)));
    }
    Ok(())
}

fn check_kernel(k: &KernelSamples, h: &History) -> Result<()> {
    if k.len() + 1 < h.len() || (k.h - h.step()).abs() > 1e-12 * k.h {
        return Err(Error::GridTooCoarse("kernel samples do not cover the history grid".into()));
    }
    Ok(())
}

/// `d/dt (k * g)` for a kernel that has no sampled antiderivative.
fn stress_with(s: &KernelSamples, g: &[f64]) -> Result<Vec<f64>> {
    let p = panels(&s.k, Some(&s.dk), None, s.h, true)?;
    Ok(central(&convolve(&p, g), s.h))
}

/// `sigma = d/dt (sigma_sr * eps)`.
pub fn stress_from_strain(m: &ModelSpec, eps: &History) -> Result<History> {
    expect(eps, HistoryKind::Strain)?;
    let s = KernelSamples::relaxation(m, eps.step(), eps.len() - 1)?;
    stress_from_strain_with(&s, eps)
}

pub fn stress_from_strain_with(s: &KernelSamples, eps: &History) -> Result<History> {
    check_kernel(s, eps)?;
    let sig = stress_with(s, &eps.values)?;
    Ok(History { times: eps.times.clone(), values: sig, kind: HistoryKind::Stress })
}

/// `eps = d eps_cr/dt * sigma`; the panels of `d eps_cr/dt` are differences of `eps_cr`.
pub fn strain_from_stress(m: &ModelSpec, sig: &History) -> Result<History> {
    expect(sig, HistoryKind::Stress)?;
    let j = KernelSamples::creep(m, sig.step(), sig.len() - 1)?;
    strain_from_stress_with(&j, sig)
}

pub fn strain_from_stress_with(j: &KernelSamples, sig: &History) -> Result<History> {
    check_kernel(j, sig)?;
    let p = creep_rate_panels(j)?;
    Ok(History { times: sig.times.clone(), values: convolve(&p, &sig.values), kind: HistoryKind::Strain })
}

fn creep_rate_panels(j: &KernelSamples) -> Result<Panels> {
    let d = j.shifted();
    let mut p = panels(&d.k, None, Some(&j.k), j.h, true)?;
    // the antiderivative vanishes at 0, so the first panel is exact as well
    p.m0[1] = j.k[1];
    Ok(p)
}

pub fn energy_from_strain(m: &ModelSpec, eps: &History) -> Result<EnergyBreakdown> {
    expect(eps, HistoryKind::Strain)?;
    let s = KernelSamples::relaxation(m, eps.step(), eps.len() - 1)?;
    energy_from_strain_with(&s, eps)
}

/// Strain form with a precomputed relaxation kernel.
pub fn energy_from_strain_with(s: &KernelSamples, eps: &History) -> Result<EnergyBreakdown> {
    check_kernel(s, eps)?;
    let h = s.h;
    let e = &eps.values;
    let n = e.len();
    let sig = stress_with(s, e)?;
    let edot = eps.derivative();
    let power: Vec<f64> = (0..n).map(|i| sig[i] * edot[i]).collect();

    let ds = s.shifted();
    // -dot sigma_sr kernel, panels from sigma_sr differences
    let neg_ds = negate(&ds);
    let wp = panels(&neg_ds.k, None, Some(&negate_vec(&s.k)), h, false)?;
    let wh = hereditary(&neg_ds, &wp, e)?;
    // ddot sigma_sr kernel, panels from dot sigma_sr differences
    let dds = ds.shifted();
    let pp = panels(&dds.k, None, Some(&ds.k), h, false)?;
    let ph = hereditary(&dds, &pp, e)?;

    let stored: Vec<f64> = (0..n).map(|i| if i == 0 { 0.0 } else { 0.5 * s.k[i] * e[i] * e[i] + 0.5 * wh[i] }).collect();
    let dissipated: Vec<f64> =
        (0..n).map(|i| if i == 0 { 0.0 } else { -0.5 * s.dk[i] * e[i] * e[i] + 0.5 * ph[i] }).collect();
    Ok(EnergyBreakdown::assemble(eps.times.clone(), power, stored, dissipated, h))
}

fn negate(k: &KernelSamples) -> KernelSamples {
    KernelSamples { h: k.h, k: negate_vec(&k.k), dk: negate_vec(&k.dk), d2k: negate_vec(&k.d2k) }
}

fn negate_vec(v: &[f64]) -> Vec<f64> {
    v.iter().map(|x| -x).collect()
}

pub fn energy_from_stress(m: &ModelSpec, sig: &History) -> Result<EnergyBreakdown> {
    expect(sig, HistoryKind::Stress)?;
    let j = KernelSamples::creep(m, sig.step(), sig.len() - 1)?;
    energy_from_stress_with(&j, sig)
}

/// Stress form with a precomputed creep kernel.
pub fn energy_from_stress_with(j: &KernelSamples, sig: &History) -> Result<EnergyBreakdown> {
    check_kernel(j, sig)?;
    let h = j.h;
    let s = &sig.values;
    let n = s.len();
    let p = creep_rate_panels(j)?;
    let eps = convolve(&p, s);
    let edot = central(&eps, h);
    let power: Vec<f64> = (0..n).map(|i| s[i] * edot[i]).collect();

    let sq: Vec<f64> = s.iter().map(|x| x * x).collect();
    let w = convolve(&p, &sq);
    let dj = j.shifted();
    let neg_ddj = negate(&dj.shifted());
    let pp = panels(&neg_ddj.k, None, Some(&negate_vec(&dj.k)), h, false)?;
    let ph = hereditary(&neg_ddj, &pp, s)?;

    let stored: Vec<f64> = w.iter().map(|x| 0.5 * x).collect();
    let dissipated: Vec<f64> = (0..n).map(|i| if i == 0 { 0.0 } else { 0.5 * j.dk[i] * s[i] * s[i] + 0.5 * ph[i] }).collect();
    Ok(EnergyBreakdown::assemble(sig.times.clone(), power, stored, dissipated, h))
}

/// Largest interior residual of
/// `d/dt(k*u) u = k u^2/2 + d/dt(k*u^2)/2 - (1/2) int dk(t-t') (u(t)-u(t'))^2 dt'`.
pub fn convolution_identity_check(k: &KernelSamples, u: &History) -> Result<f64> {
    check_kernel(k, u)?;
    let h = k.h;
    let g = &u.values;
    let n = g.len();
    let p = panels(&k.k, Some(&k.dk), None, h, true)?;
    let lhs = central(&convolve(&p, g), h);
    let sq: Vec<f64> = g.iter().map(|x| x * x).collect();
    let rhs2 = central(&convolve(&p, &sq), h);
    let dk = k.shifted();
    let dp = panels(&dk.k, None, Some(&k.k), h, false)?;
    let her = hereditary(&dk, &dp, g)?;
    let mut worst = 0.0f64;
    for i in 1..n - 1 {
        let r = lhs[i] * g[i] - (0.5 * k.k[i] * g[i] * g[i] + 0.5 * rhs2[i] - 0.5 * her[i]);
        worst = worst.max(r.abs());
    }
    Ok(worst)
}

//! Two-parameter Mittag-Leffler function `E_{xi,zeta}(z)` on the real axis
//! and the kernel `e_{xi,zeta,lambda}(t) = t^{zeta-1} E_{xi,zeta}(-lambda t^xi)`,
//! whose Laplace transform is `s^{xi-zeta} / (s^xi + lambda)`.
//!
//! Small arguments use the power series. Large negative arguments (or a
//! series that lost too many digits to cancellation) go through the
//! branch-cut integral, plus the pole pair when `1 < xi < 2`.

use std::f64::consts::PI;

use statrs::function::gamma::{gamma, ln_gamma};

use crate::error::{Error, Result};
use crate::quadrature::{integrate_semi_infinite, QuadSpec};

/// Arguments with `|z|` up to this go to the series first.
pub const Z_SWITCH: f64 = 5.0;
const TERM_BUDGET: usize = 2000;
/// The series is accepted when cancellation costs at most this relative error.
const SERIES_TOL: f64 = 1e-13;
const LOWER_BAND: f64 = 0.01;

fn quad_spec() -> QuadSpec {
    QuadSpec { rel_tol: 1e-12, abs_tol: 1e-300, max_subdivisions: 4000, ..Default::default() }
}

/// `1/Gamma(x)`, zero at the poles.
pub fn rgamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.floor() {
        return 0.0;
    }
    if x > 170.0 {
        return (-ln_gamma(x)).exp();
    }
    1.0 / gamma(x)
}

/// log of `|1/Gamma(x)|` and its sign, for `x` away from the poles.
fn ln_rgamma(x: f64) -> (f64, f64) {
    if x > 0.0 {
        (-ln_gamma(x), 1.0)
    } else {
        let r = rgamma(x);
        (r.abs().ln(), r.signum())
    }
}

/// Series value, or `None` when it cannot be trusted to `SERIES_TOL`.
fn series(xi: f64, zeta: f64, z: f64) -> Option<f64> {
    if z == 0.0 {
        return Some(rgamma(zeta));
    }
    let lz = z.abs().ln();
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    let mut max_term = 0.0f64;
    let mut last = f64::INFINITY;
    for n in 0..TERM_BUDGET {
        let arg = xi * n as f64 + zeta;
        let term = if arg <= 0.0 && arg == arg.floor() {
            0.0
        } else {
            let (lr, sg) = ln_rgamma(arg);
            let lt = n as f64 * lz + lr;
            if lt > 700.0 {
                return None;
            }
            let sign = if z < 0.0 && n % 2 == 1 { -sg } else { sg };
            sign * lt.exp()
        };
        // Neumaier summation.
        let t = sum + term;
        comp += if sum.abs() >= term.abs() { (sum - t) + term } else { (term - t) + sum };
        sum = t;
        max_term = max_term.max(term.abs());
        let total = sum + comp;
        // Past the peak the terms fall monotonically; stop when negligible.
        if term.abs() <= last && arg > 1.0 && term.abs() <= 1e-17 * total.abs().max(f64::MIN_POSITIVE) {
            if max_term * f64::EPSILON * 4.0 > SERIES_TOL * total.abs() {
                return None;
            }
            return Some(total);
        }
        if term != 0.0 {
            last = term.abs();
        }
    }
    None
}

/// `E_{xi,zeta}(z)` for real `z`.
pub fn ml_big_e(xi: f64, zeta: f64, z: f64) -> Result<f64> {
    if !(xi > 0.0) || !zeta.is_finite() || !z.is_finite() {
        return Err(Error::ParameterWindow { xi, zeta });
    }
    if xi == 1.0 && zeta == 1.0 {
        return Ok(z.exp());
    }
    if z.abs() <= Z_SWITCH || z > 0.0 || !has_integral(xi) {
        if let Some(v) = series(xi, zeta, z) {
            return Ok(v);
        }
    }
    if z < 0.0 {
        // e_{xi,zeta,|z|}(1) = E_{xi,zeta}(z)
        return kernel_by_integral(xi, zeta, -z, 1.0);
    }
    Err(Error::Divergence { xi, zeta, z })
}

/// `e_{xi,zeta,lambda}(t) = t^{zeta-1} E_{xi,zeta}(-lambda t^xi)`.
pub fn ml_e(xi: f64, zeta: f64, lam: f64, t: f64) -> Result<f64> {
    if !(t > 0.0) || !(lam >= 0.0) {
        return Err(Error::ParameterWindow { xi, zeta });
    }
    if lam == 0.0 {
        return Ok(t.powf(zeta - 1.0) * rgamma(zeta));
    }
    let z = -lam * t.powf(xi);
    if xi == 1.0 && zeta == 1.0 {
        return Ok(z.exp());
    }
    if z.abs() <= Z_SWITCH || !has_integral(xi) {
        if let Some(v) = series(xi, zeta, z) {
            return Ok(t.powf(zeta - 1.0) * v);
        }
    }
    kernel_by_integral(xi, zeta, lam, t).map_err(|e| match e {
        Error::ParameterWindow { .. } => Error::Divergence { xi, zeta, z },
        e => e,
    })
}

fn has_integral(xi: f64) -> bool {
    xi > 0.0 && xi < 2.0 && xi != 1.0
}

/// Integral route valid for any `xi` in `(0,2)`, `xi != 1`. `zeta` at or just
/// below `1 + xi` (where the cut integrand concentrates its mass at `rho = 0`)
/// is lowered by `e_{xi,zeta} = (t^{zeta-xi-1}/Gamma(zeta-xi) - e_{xi,zeta-xi}) / lambda`.
fn kernel_by_integral(xi: f64, zeta: f64, lam: f64, t: f64) -> Result<f64> {
    if !has_integral(xi) || !(lam > 0.0) {
        return Err(Error::ParameterWindow { xi, zeta });
    }
    if zeta >= 1.0 + xi - LOWER_BAND {
        let lower = kernel_by_integral(xi, zeta - xi, lam, t)?;
        return Ok((t.powf(zeta - xi - 1.0) * rgamma(zeta - xi) - lower) / lam);
    }
    let mut v = cut_integral(xi, zeta, lam, t)?;
    if xi > 1.0 {
        // poles s* = lam^{1/xi} e^{+-i pi/xi}, residue pair (2/xi) Re(s*^{1-zeta} e^{s* t})
        let r = lam.powf(1.0 / xi);
        let th = PI / xi;
        let mag = r.powf(1.0 - zeta) * (r * th.cos() * t).exp();
        v += 2.0 / xi * mag * ((1.0 - zeta) * th + r * th.sin() * t).cos();
    }
    Ok(v)
}

fn cut_integral(xi: f64, zeta: f64, lam: f64, t: f64) -> Result<f64> {
    let s1 = ((zeta - xi) * PI).sin();
    let s2 = (zeta * PI).sin();
    let c = (xi * PI).cos();
    let f = |rho: f64| {
        let u = rho.powf(xi);
        let den = u * u + 2.0 * lam * u * c + lam * lam;
        (lam * s1 + u * s2) / den * rho.powf(xi - zeta) * (-rho * t).exp()
    };
    let r = integrate_semi_infinite(f, t, &quad_spec())?;
    Ok(r.value / PI)
}

/// The branch-cut integral form on its stated window `xi in (0,1)`,
/// `zeta < 1 + xi`.
pub fn ml_e_integral(xi: f64, zeta: f64, lam: f64, t: f64) -> Result<f64> {
    if !(xi > 0.0 && xi < 1.0) || !(zeta < 1.0 + xi) || !(lam >= 0.0) || !(t > 0.0) {
        return Err(Error::ParameterWindow { xi, zeta });
    }
    if lam == 0.0 && zeta >= 1.0 {
        return Err(Error::ParameterWindow { xi, zeta });
    }
    cut_integral(xi, zeta, lam, t)
}

/// Laplace transform of `e_{xi,zeta,lambda}` at real `s`.
pub fn ml_laplace_check(xi: f64, zeta: f64, lam: f64, s: f64) -> f64 {
    s.powf(xi - zeta) / (s.powf(xi) + lam)
}

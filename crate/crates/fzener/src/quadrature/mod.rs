//! Quadrature on `[0, inf)` for the branch-cut integrals, plus a Bromwich
//! inversion used as an independent oracle.
//!
//! Integrals are assembled from geometric panels: toward `0` (ratio 1/4) to
//! resolve the `rho^c` endpoint singularity, and toward infinity until either
//! the `e^{-rho t}` damping has killed the integrand or, for undamped
//! algebraic tails, the remaining mass can be extrapolated from the local
//! power law. All panels then go through one global adaptive 21-point
//! Gauss-Kronrod refinement.

pub mod dd;
mod talbot;

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

pub use talbot::{bromwich_oracle, TALBOT_M};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    /// Damped tails are cut where `rho t` exceeds this (`e^{-690}` is below 1e-299).
    pub tail_cutoff: f64,
}

impl Default for QuadSpec {
    fn default() -> Self {
        QuadSpec { rel_tol: 1e-9, abs_tol: 1e-12, max_subdivisions: 2000, tail_cutoff: 690.0 }
    }
}

impl QuadSpec {
    pub fn tight() -> Self {
        QuadSpec { rel_tol: 1e-12, abs_tol: 1e-300, max_subdivisions: 4000, ..Default::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub err_estimate: f64,
    pub evaluations: usize,
}

// Kronrod 21-point nodes and weights, as tabulated.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077208749457752,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
    /// Roundoff floor of the panel, `50 eps int|f|`.
    floor: f64,
    family: usize,
}

impl PartialEq for Segment {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Segment {
    fn cmp(&self, o: &Self) -> Ordering {
        self.err.total_cmp(&o.err).then(o.a.total_cmp(&self.a)).then(o.family.cmp(&self.family))
    }
}

fn rescale_error(err: f64, resabs: f64, resasc: f64) -> f64 {
    let mut err = err.abs();
    if resasc != 0.0 && err != 0.0 {
        let scale = (200.0 * err / resasc).powf(1.5);
        err = if scale < 1.0 { resasc * scale } else { resasc };
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    err
}

/// One 21-point Gauss-Kronrod panel: (value, error estimate).
pub fn gk21<F: Fn(f64) -> f64 + ?Sized>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let (v, e, _) = gk21_full(f, a, b);
    (v, e)
}

fn gk21_full<F: Fn(f64) -> f64 + ?Sized>(f: &F, a: f64, b: f64) -> (f64, f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut resg = 0.0;
    let mut resk = fc * WGK[10];
    let mut resabs = resk.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..5 {
        let jtw = 2 * j + 1;
        let x = h * XGK[jtw];
        let (f1, f2) = (f(c - x), f(c + x));
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        resg += WG[j] * (f1 + f2);
        resk += WGK[jtw] * (f1 + f2);
        resabs += WGK[jtw] * (f1.abs() + f2.abs());
    }
    for j in 0..5 {
        let jtw = 2 * j;
        let x = h * XGK[jtw];
        let (f1, f2) = (f(c - x), f(c + x));
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        resk += WGK[jtw] * (f1 + f2);
        resabs += WGK[jtw] * (f1.abs() + f2.abs());
    }
    let mean = 0.5 * resk;
    let mut resasc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        resasc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let err = rescale_error((resk - resg) * h, resabs * h.abs(), resasc * h.abs());
    (resk * h, err, 50.0 * f64::EPSILON * resabs * h.abs())
}

/// Global adaptive refinement over a set of initial panels. Each panel names
/// the integrand family it belongs to; `eval(family, x)` evaluates it.
fn adaptive<E: Fn(usize, f64) -> f64>(eval: &E, panels: &[(usize, f64, f64)], extra: f64, spec: &QuadSpec) -> Result<QuadResult> {
    let mut heap = BinaryHeap::new();
    let mut done = Vec::new();
    let mut evaluations = 0;
    let mut make = |family: usize, a: f64, b: f64| {
        let (value, err, floor) = gk21_full(&|x| eval(family, x), a, b);
        evaluations += 21;
        Segment { a, b, value, err, floor, family }
    };
    for &(fam, a, b) in panels {
        if b > a {
            heap.push(make(fam, a, b));
        }
    }
    let mut total: f64 = heap.iter().map(|s| s.value).sum::<f64>() + extra;
    let mut err: f64 = heap.iter().map(|s| s.err).sum();
    if !total.is_finite() || !err.is_finite() {
        return Err(Error::NotConverged { value: total, err });
    }
    let mut splits = 0;
    while err > spec.abs_tol.max(spec.rel_tol * total.abs()) {
        let Some(s) = heap.pop() else { break };
        let m = 0.5 * (s.a + s.b);
        if splits >= spec.max_subdivisions {
            heap.push(s);
            break;
        }
        if !(m > s.a && m < s.b) || (s.b - s.a) < 1e-15 * s.a.abs().max(s.b.abs()) || s.err <= 2.0 * s.floor {
            done.push(s);
            continue;
        }
        let (l, r) = (make(s.family, s.a, m), make(s.family, m, s.b));
        if !(l.value.is_finite() && r.value.is_finite()) {
            return Err(Error::NotConverged { value: total, err });
        }
        total += l.value + r.value - s.value;
        err += l.err + r.err - s.err;
        heap.push(l);
        heap.push(r);
        splits += 1;
    }
    done.extend(heap);
    done.sort_by(|x, y| x.family.cmp(&y.family).then(x.a.total_cmp(&y.a)));
    let value = done.iter().map(|s| s.value).sum::<f64>() + extra;
    let err: f64 = done.iter().map(|s| s.err).sum();
    // Error held only by roundoff-limited panels does not count against convergence.
    let reducible: f64 = done
        .iter()
        .filter(|s| !((s.b - s.a) < 1e-15 * s.a.abs().max(s.b.abs()) || s.err <= 2.0 * s.floor))
        .map(|s| s.err)
        .sum();
    if reducible > spec.abs_tol.max(spec.rel_tol * value.abs()) {
        return Err(Error::NotConverged { value, err });
    }
    Ok(QuadResult { value, err_estimate: err, evaluations })
}

/// Adaptive integral over a finite interval.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, spec: &QuadSpec) -> Result<QuadResult> {
    let n = 8;
    let panels: Vec<_> = (0..n)
        .map(|i| (0, a + (b - a) * i as f64 / n as f64, if i + 1 == n { b } else { a + (b - a) * (i + 1) as f64 / n as f64 }))
        .collect();
    adaptive(&|_, x| f(x), &panels, 0.0, spec)
}

const RATIO: f64 = 4.0;
const MIN_DECADES: f64 = 15.0;
const MAX_PANELS: usize = 520;

/// Local power-law exponent of `f` between `x` and `x * RATIO`.
fn local_exponent(f0: f64, f1: f64) -> Option<f64> {
    if f0 == 0.0 || f1 == 0.0 || f0.signum() != f1.signum() || !f0.is_finite() || !f1.is_finite() {
        return None;
    }
    Some((f1 / f0).ln() / RATIO.ln())
}

/// Geometric panels on `(0, w]` plus the extrapolated mass on `(0, w_min)`.
fn lower_panels<F: Fn(f64) -> f64>(f: &F, w: f64, family: usize, spec: &QuadSpec) -> Result<(Vec<(usize, f64, f64)>, f64)> {
    let mut panels = Vec::new();
    let mut hi = w;
    let mut acc = 0.0;
    let mut prev_total = f64::NAN;
    for k in 0..MAX_PANELS {
        let lo = hi / RATIO;
        panels.push((family, lo, hi));
        acc += gk21(f, lo, hi).0;
        let (rem, bad) = match local_exponent(f(lo / RATIO), f(lo)) {
            Some(c) if c <= -1.0 => (0.0, Some(c)),
            Some(c) => (f(lo) * lo / (c + 1.0), None),
            None => (0.0, None),
        };
        if let Some(c) = bad {
            if k + 1 == MAX_PANELS {
                return Err(Error::NotIntegrable(c));
            }
            hi = lo;
            continue;
        }
        let total = acc + rem;
        let reached = (k as f64 + 1.0) * RATIO.log10() >= MIN_DECADES;
        if reached && (total - prev_total).abs() <= 0.01 * spec.abs_tol.max(spec.rel_tol * total.abs()) {
            return Ok((panels, rem));
        }
        prev_total = total;
        hi = lo;
    }
    Err(Error::NotConverged { value: acc, err: f64::NAN })
}

/// Geometric panels on `[r, inf)` for an undamped, algebraically decaying
/// integrand, plus the extrapolated mass beyond the last panel.
fn upper_algebraic_panels<F: Fn(f64) -> f64>(f: &F, r: f64, family: usize, spec: &QuadSpec) -> Result<(Vec<(usize, f64, f64)>, f64)> {
    let mut panels = Vec::new();
    let mut lo = r;
    let mut acc = 0.0;
    let mut prev_total = f64::NAN;
    for k in 0..MAX_PANELS {
        let hi = lo * RATIO;
        panels.push((family, lo, hi));
        acc += gk21(f, lo, hi).0;
        let (rem, bad) = match local_exponent(f(hi), f(hi * RATIO)) {
            Some(c) if c >= -1.0 => (0.0, Some(c)),
            Some(c) => (-f(hi) * hi / (c + 1.0), None),
            None => (0.0, None),
        };
        if let Some(c) = bad {
            if k + 1 == MAX_PANELS {
                return Err(Error::NotIntegrable(c));
            }
            lo = hi;
            continue;
        }
        let total = acc + rem;
        let reached = (k as f64 + 1.0) * RATIO.log10() >= MIN_DECADES;
        if reached && (total - prev_total).abs() <= 0.01 * spec.abs_tol.max(spec.rel_tol * total.abs()) {
            return Ok((panels, rem));
        }
        prev_total = total;
        lo = hi;
    }
    Err(Error::NotConverged { value: acc, err: f64::NAN })
}

/// Geometric panels on `[r, cutoff/t]` for an `e^{-rho t}`-damped integrand.
fn upper_damped_panels(r: f64, t: f64, family: usize, spec: &QuadSpec) -> Vec<(usize, f64, f64)> {
    let end = spec.tail_cutoff / t;
    let mut panels = Vec::new();
    let mut lo = r;
    while lo < end {
        let hi = (lo * RATIO).min(end);
        panels.push((family, lo, hi));
        lo = hi;
    }
    panels
}

/// `int_0^inf f(rho) drho` where `f` carries an `e^{-rho t}` factor, `t > 0`.
/// Near zero `f ~ rho^c` with `c > -1` is allowed.
pub fn integrate_semi_infinite<F: Fn(f64) -> f64>(f: F, t: f64, spec: &QuadSpec) -> Result<QuadResult> {
    if !(t > 0.0) {
        return integrate_algebraic(f, 1.0, spec);
    }
    let split = 1.0 / t;
    let (mut panels, rem) = lower_panels(&f, split, 0, spec)?;
    panels.extend(upper_damped_panels(split, t, 0, spec));
    adaptive(&|_, x| f(x), &panels, rem, spec)
}

/// `int_0^inf f(rho) drho` for an undamped integrand decaying like `rho^e`,
/// `e < -1`; `split` marks where the behaviour changes.
pub fn integrate_algebraic<F: Fn(f64) -> f64>(f: F, split: f64, spec: &QuadSpec) -> Result<QuadResult> {
    let (mut panels, rem_lo) = lower_panels(&f, split, 0, spec)?;
    let (up, rem_hi) = upper_algebraic_panels(&f, split, 0, spec)?;
    panels.extend(up);
    adaptive(&|_, x| f(x), &panels, rem_lo + rem_hi, spec)
}

/// Principal value `lim [int_0^{p-d} + int_{p+d}^inf] f` for an integrand with
/// a simple pole at `pole`. `t > 0` means `f` is `e^{-rho t}`-damped,
/// `t = 0` means an algebraic tail.
pub fn integrate_principal_value<F: Fn(f64) -> f64>(f: F, pole: f64, t: f64, spec: &QuadSpec) -> Result<QuadResult> {
    if !(pole > 0.0) || !pole.is_finite() {
        return Err(Error::PoleOnBoundary(pole));
    }
    let d = 0.5 * pole;
    // Snap the offset so that both `pole + x` and `pole - x` are exact.
    let reflected = |x: f64| {
        let x = (pole + x) - pole;
        f(pole + x) + f(pole - x)
    };
    let (mut panels, rem_lo) = lower_panels(&f, pole - d, 0, spec)?;
    // Reflected panels, geometric toward the pole. Closer than `1e-3 pole` the
    // paired values cancel to roundoff, so the innermost piece gets a plain
    // Gauss rule whose nodes stay clear of the pole.
    let inner = 1e-3 * pole;
    let mut hi = d;
    while hi > inner {
        let lo = (hi / RATIO).max(inner);
        panels.push((1, lo, hi));
        hi = lo;
    }
    let core = gauss5(&reflected, 0.0, inner);
    let start = pole + d;
    let rem_hi = if t > 0.0 {
        let split = start.max(1.0 / t);
        if split > start {
            panels.push((0, start, split));
        }
        panels.extend(upper_damped_panels(split, t, 0, spec));
        0.0
    } else {
        let (up, rem) = upper_algebraic_panels(&f, start, 0, spec)?;
        panels.extend(up);
        rem
    };
    adaptive(&|fam, x| if fam == 0 { f(x) } else { reflected(x) }, &panels, rem_lo + rem_hi + core, spec)
}

fn gauss5<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    (0..5).map(|j| WG[j] * (f(c - h * XGK[2 * j + 1]) + f(c + h * XGK[2 * j + 1]))).sum::<f64>() * h
}

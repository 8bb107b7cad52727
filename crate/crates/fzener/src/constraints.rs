//! Parameter restrictions and the function `K(rho)`.
//!
//! Every model carries two lists of inequalities. The thermodynamical list
//! (orders and coefficients) is what dissipation alone demands; the narrowed
//! list adds the coefficient bounds under which `K >= 0` on the whole
//! negative real axis, which makes the relaxation modulus completely
//! monotone and the creep compliance a Bernstein function. Some narrowed
//! lists only apply inside a window of the orders; outside it the report
//! says so instead of guessing.
//!
//! `K(rho) = Im(e^{i xi pi} phi_eps(rho e^{i pi}) conj(phi_sigma(rho e^{i pi})))`
//! is evaluated three ways: the double sine sum, the complex product, and a
//! hand-written polynomial per model.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::model_catalog::{ModelCode, ModelSpec, Order};

/// Absolute slack used to decide ties.
pub const TIE_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    ThermoFail,
    ThermoOnly,
    NarrowedOK,
    NarrowedNotGuaranteeable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Group {
    Thermo,
    Guard,
    Narrowed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Order,
    Coefficient,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Inequality {
    pub id: String,
    pub group: Group,
    pub kind: Kind,
    pub lhs: f64,
    pub rhs: f64,
    pub strict: bool,
    pub satisfied: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstraintReport {
    pub code: String,
    pub inequalities: Vec<Inequality>,
    pub overall: Verdict,
    /// The applicability window that failed, for `NarrowedNotGuaranteeable`.
    pub failed_guard: Option<String>,
}

impl ConstraintReport {
    pub fn passed(&self, group: Group) -> bool {
        self.inequalities.iter().filter(|q| q.group == group).all(|q| q.satisfied)
    }

    /// All order inequalities (thermodynamical, window and narrowed) hold.
    pub fn orders_admissible(&self) -> bool {
        self.inequalities.iter().filter(|q| q.kind == Kind::Order).all(|q| q.satisfied)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Inequality> {
        self.inequalities.iter().filter(|q| !q.satisfied)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn holds(lhs: f64, rhs: f64, strict: bool) -> bool {
    if strict {
        rhs - lhs > TIE_TOL
    } else {
        lhs - rhs <= TIE_TOL
    }
}

struct Sheet {
    group: Group,
    items: Vec<Inequality>,
}

impl Sheet {
    fn new(group: Group) -> Self {
        Sheet { group, items: Vec::new() }
    }

    fn push(&mut self, id: &str, lhs: f64, rhs: f64, strict: bool) {
        let satisfied = holds(lhs, rhs, strict);
        let kind = if id.contains('/') || id.contains("balance") { Kind::Coefficient } else { Kind::Order };
        self.items.push(Inequality { id: id.to_string(), group: self.group, kind, lhs, rhs, strict, satisfied });
    }

    fn le(&mut self, id: &str, lhs: f64, rhs: f64) {
        self.push(id, lhs, rhs, false);
    }

    fn lt(&mut self, id: &str, lhs: f64, rhs: f64) {
        self.push(id, lhs, rhs, true);
    }
}

// sin / cos of x*pi/2 and x*pi/4
fn s2(x: f64) -> f64 {
    (x * PI / 2.0).sin()
}
fn c2(x: f64) -> f64 {
    (x * PI / 2.0).cos()
}
fn s4(x: f64) -> f64 {
    (x * PI / 4.0).sin()
}
fn c4(x: f64) -> f64 {
    (x * PI / 4.0).cos()
}

struct Vars {
    al: f64,
    be: f64,
    ga: f64,
    mu: f64,
    nu: f64,
    et: f64,
    a: [f64; 3],
    b: [f64; 3],
}

fn vars(m: &ModelSpec) -> Vars {
    let g = |o| m.orders.get(o).unwrap_or(f64::NAN);
    let pad = |v: &[f64]| [v[0], v.get(1).copied().unwrap_or(f64::NAN), v.get(2).copied().unwrap_or(f64::NAN)];
    Vars {
        al: g(Order::Alpha),
        be: g(Order::Beta),
        ga: g(Order::Gamma),
        mu: g(Order::Mu),
        nu: g(Order::Nu),
        et: g(Order::Eta),
        a: pad(&m.a),
        b: pad(&m.b),
    }
}

fn thermo(m: &ModelSpec) -> Sheet {
    let Vars { al, be, ga, mu, nu, et, a, b } = vars(m);
    let [a1, a2, a3] = a;
    let [b1, b2, b3] = b;
    let mut t = Sheet::new(Group::Thermo);
    match m.code {
        ModelCode::IdId => {
            t.le("0 <= alpha+beta-mu", 0.0, al + be - mu);
            t.le("alpha+beta-mu <= 1", al + be - mu, 1.0);
            t.le("mu <= alpha", mu, al);
            t.le("beta+mu <= 1", be + mu, 1.0);
            let (x, y) = (2.0 * al + be - mu, be + mu);
            t.le("b1/b2 lower cosine bound", -(a1 / a2) * c2(x) / c2(y), b1 / b2);
            t.le("b1/b2 upper sine bound", b1 / b2, (a1 / a2) * s2(x) / s2(y));
        }
        ModelCode::IdDdPlus => {
            t.le("1 <= alpha+beta+mu", 1.0, al + be + mu);
            t.le("alpha+beta+mu <= 2", al + be + mu, 2.0);
            t.le("beta <= mu", be, mu);
            t.le("mu <= 1-alpha", mu, 1.0 - al);
            let (x, y) = (2.0 * al + be + mu, mu - be);
            t.le("b1/b2 lower cosine bound", (a1 / a2) * c2(x).abs() / c2(y), b1 / b2);
        }
        ModelCode::IidIid => {
            t.lt("beta < alpha", be, al);
            t.le("gamma <= eta", ga, et);
            t.le("0 <= beta+gamma-eta", 0.0, be + ga - et);
            t.le("beta+gamma-eta <= alpha+2gamma-eta", be + ga - et, al + 2.0 * ga - et);
            t.le("alpha+2gamma-eta <= 1", al + 2.0 * ga - et, 1.0);
            t.le("alpha+gamma <= beta+eta", al + ga, be + et);
            let (x, y) = (al + et, al + 2.0 * ga - et);
            t.le("a3/a1 lower cosine bound", -(b3 / b1) * c2(x) / c2(y), a3 / a1);
            t.le("a3/a1 upper sine bound", a3 / a1, (b3 / b1) * s2(x) / s2(y));
            let (x, y) = (be + et, be + 2.0 * ga - et);
            t.le("a3/a2 lower cosine bound", -(b3 / b2) * c2(x) / c2(y), a3 / a2);
            t.le("a3/a2 upper sine bound", a3 / a2, (b3 / b2) * s2(x) / s2(y));
        }
        ModelCode::IddIdd => {
            t.le("0 <= alpha+gamma-mu", 0.0, al + ga - mu);
            t.le("alpha+gamma-mu <= 1", al + ga - mu, 1.0);
            t.lt("beta < gamma", be, ga);
            t.le("mu <= alpha", mu, al);
            t.le("gamma+mu <= alpha+beta", ga + mu, al + be);
            t.le("gamma+mu <= 1", ga + mu, 1.0);
            let (x, y) = (2.0 * al + be - mu, be + mu);
            t.le("a2/a1 lower cosine bound", -(b2 / b1) * c2(x) / c2(y), a2 / a1);
            t.le("a2/a1 upper sine bound", a2 / a1, (b2 / b1) * s2(x) / s2(y));
            let (x, y) = (2.0 * al + ga - mu, ga + mu);
            t.le("a3/a1 lower cosine bound", -(b3 / b1) * c2(x) / c2(y), a3 / a1);
            t.le("a3/a1 upper sine bound", a3 / a1, (b3 / b1) * s2(x) / s2(y));
        }
        ModelCode::IidIdd => {
            t.le("mu <= beta", mu, be);
            t.lt("beta < alpha", be, al);
            t.le("gamma <= nu", ga, nu);
            t.le("alpha+beta+gamma <= 1+mu", al + be + ga, 1.0 + mu);
            t.lt("mu+nu-gamma < alpha", mu + nu - ga, al);
            t.le("alpha <= 1-nu", al, 1.0 - nu);
            let (x, y) = (2.0 * al + ga - mu, ga + mu);
            t.le("a3/a1 lower cosine bound", -(b3 / b1) * c2(x) / c2(y), a3 / a1);
            t.le("a3/a1 upper sine bound", a3 / a1, (b3 / b1) * s2(x) / s2(y));
        }
        ModelCode::IPlusIdIPlusId => {
            t.le("mu <= alpha", mu, al);
            t.le("3alpha+gamma-2mu <= 1", 3.0 * al + ga - 2.0 * mu, 1.0);
            let (p, q) = (1.0 - 3.0 * al - ga + 2.0 * mu, 1.0 + al - ga - 2.0 * mu);
            t.le("a2/a1 upper cosine bound", a2 / a1, (b2 / b1) * c4(p) / c4(q));
            let (r, s) = (1.0 + 3.0 * al + ga - 2.0 * mu, 1.0 - al + ga + 2.0 * mu);
            t.le("a3/a2 upper sine bound", a3 / a2, (b3 / b2) * s4(r) / s4(s));
            let (u, v, w) = (ga + mu, al - mu, 2.0 * al + ga - mu);
            t.le("cross-product cosine balance", a3 * b1 * c2(u) - a2 * b2 * s2(v), a1 * b3 * c2(w));
            t.le("cross-product sine balance", a1 * b3 * s2(w), a2 * b2 * c2(v) - a3 * b1 * s2(u));
        }
        ModelCode::IddPlusIddPlus => {
            t.le("0 <= alpha+gamma-eta", 0.0, al + ga - et);
            t.le("alpha+gamma-eta <= 1", al + ga - et, 1.0);
            t.le("gamma <= eta", ga, et);
            t.le("alpha-gamma+2eta <= 1", al - ga + 2.0 * et, 1.0);
            let (u, v) = (1.0 + al - ga + 2.0 * et, 1.0 + al + 3.0 * ga - 2.0 * et);
            t.le("a2/a1 upper sine bound", a2 / a1, (b2 / b1) * s4(u) / s4(v));
            let (x, y) = (1.0 - al + ga - 2.0 * et, 1.0 - al - 3.0 * ga + 2.0 * et);
            t.le("a3/a2 upper cosine bound", a3 / a2, (b3 / b2) * c4(x) / c4(y));
            let (p, q, r) = (al + 2.0 * ga - et, et - ga, al + et);
            t.le("cross-product cosine balance", a3 * b1 * c2(p) - a2 * b2 * s2(q), a1 * b3 * c2(r));
            t.le("cross-product sine balance", a1 * b3 * s2(r), a2 * b2 * c2(q) - a3 * b1 * s2(p));
        }
        ModelCode::IPlusIdIddPlus => {
            t.le("eta <= gamma", et, ga);
            t.le("alpha+3gamma-2eta <= 1", al + 3.0 * ga - 2.0 * et, 1.0);
            let (w, z) = (1.0 + al - ga + 2.0 * et, 1.0 - al - 3.0 * ga + 2.0 * et);
            t.le("a2/b2 lower bound", (a1 / b1) * s4(w) / c4(z), a2 / b2);
            t.le("a2/b2 upper bound", a2 / b2, (a3 / b3) * c4(z) / s4(w));
            let (p, q, r) = (al + et, ga - et, al + 2.0 * ga - et);
            t.le("cross-product cosine balance", a1 * b3 * c2(p) - a2 * b2 * s2(q), a3 * b1 * c2(r));
            t.le("cross-product sine balance", a3 * b1 * s2(r), a2 * b2 * c2(q) - a1 * b3 * s2(p));
        }
        ModelCode::IidId => {
            t.le("0 <= alpha", 0.0, al);
            t.le("alpha <= nu", al, nu);
            t.lt("nu < alpha+beta-gamma", nu, al + be - ga);
            t.le("alpha+beta-gamma <= 1", al + be - ga, 1.0);
            t.le("beta+nu <= 1", be + nu, 1.0);
            let (x, y) = (al + 2.0 * be - ga, al + ga);
            t.le("b1/b2 lower cosine bound", -(a1 / a3) * c2(x) / c2(y), b1 / b2);
            t.le("b1/b2 upper sine bound", b1 / b2, (a1 / a3) * s2(x) / s2(y));
        }
        ModelCode::IddDdPlus => {
            // the third derivative order coincides with mu
            let ga = mu;
            t.le("1 <= alpha+beta+mu", 1.0, al + be + mu);
            t.le("alpha+beta+mu <= 2", al + be + mu, 2.0);
            t.lt("beta < gamma", be, ga);
            t.le("gamma <= mu", ga, mu);
            t.le("mu <= 1-alpha", mu, 1.0 - al);
            let (x, y) = (2.0 * al + be + mu, mu - be);
            t.le("b1/b2 lower cosine bound", (a1 / a2) * c2(x).abs() / c2(y), b1 / b2);
        }
        ModelCode::IPlusIdId => {
            t.le("0 <= alpha+beta-nu", 0.0, al + be - nu);
            t.le("alpha+beta-nu <= 1", al + be - nu, 1.0);
            t.le("1 <= alpha+beta+nu", 1.0, al + be + nu);
            t.le("alpha+beta+nu <= 2", al + be + nu, 2.0);
            t.le("alpha <= nu", al, nu);
            t.le("nu <= 1-beta", nu, 1.0 - be);
            let (x, y) = (al + 2.0 * be + nu, nu - al);
            t.le("b1/b2 lower cosine bound", (a1 / a2) * c2(x).abs() / c2(y), b1 / b2);
            let (x, y) = (be + nu, 2.0 * al + be - nu);
            t.le("b1/b2 upper sine bound", b1 / b2, (a2 / a3) * s2(x) / s2(y));
        }
        ModelCode::IddPlusDdPlus => {
            t.le("1 <= alpha+2beta", 1.0, al + 2.0 * be);
            t.le("alpha+2beta <= 2", al + 2.0 * be, 2.0);
            t.le("1 <= alpha+beta+mu", 1.0, al + be + mu);
            t.le("alpha+beta+mu <= 2", al + be + mu, 2.0);
            t.le("beta <= mu", be, mu);
            t.le("mu <= 1-alpha", mu, 1.0 - al);
            let (x, y) = (2.0 * al + be + mu, mu - be);
            t.le("b1/b2 lower cosine bound", (a1 / a2) * c2(x).abs() / c2(y), b1 / b2);
            let (x, y) = (al + mu, al + 2.0 * be - mu);
            t.le("b1/b2 upper sine bound", b1 / b2, (a2 / a3) * s2(x) / s2(y));
        }
        ModelCode::IdIdd => {
            t.le("0 <= nu", 0.0, nu);
            t.le("nu <= beta", nu, be);
            t.lt("beta < mu+nu-alpha", be, mu + nu - al);
            t.le("mu+nu-alpha <= 1", mu + nu - al, 1.0);
            t.le("alpha <= mu", al, mu);
            t.le("mu <= 1-beta", mu, 1.0 - be);
            let (x, y) = (2.0 * mu + nu - al, al + nu);
            t.le("b1/b3 lower cosine bound", -(a1 / a2) * c2(x) / c2(y), b1 / b3);
            t.le("b1/b3 upper sine bound", b1 / b3, (a1 / a2) * s2(x) / s2(y));
        }
        ModelCode::IdDddPlus => {
            t.le("1 <= alpha+beta+nu", 1.0, al + be + nu);
            t.le("alpha+beta+nu <= 2", al + be + nu, 2.0);
            t.le("beta <= mu", be, mu);
            t.lt("mu < nu", mu, nu);
            t.le("nu <= 1-alpha", nu, 1.0 - al);
            let (x, y) = (2.0 * al + be + nu, nu - be);
            t.le("b2/b3 lower cosine bound", (a1 / a2) * c2(x).abs() / c2(y), b2 / b3);
        }
        ModelCode::IdIddPlus => {
            t.le("0 <= alpha+beta-nu", 0.0, al + be - nu);
            t.le("alpha+beta-nu <= 1", al + be - nu, 1.0);
            t.le("1 <= alpha+beta+nu", 1.0, al + be + nu);
            t.le("alpha+beta+nu <= 2", al + be + nu, 2.0);
            t.le("beta <= nu", be, nu);
            t.le("nu <= 1-alpha", nu, 1.0 - al);
            let (x, y) = (al + 2.0 * be - nu, al + nu);
            t.le("a1/a2 lower sine bound", (b1 / b2) * s2(x) / s2(y), a1 / a2);
            let (x, y) = (nu - be, 2.0 * al + be + nu);
            t.le("a1/a2 upper cosine bound", a1 / a2, (b2 / b3) * c2(x) / c2(y).abs());
        }
    }
    t
}

/// Applicability window and the narrowed inequalities proper.
fn narrowed(m: &ModelSpec) -> (Sheet, Sheet) {
    let Vars { al, be, ga, mu, nu, et, a, b } = vars(m);
    let [a1, a2, a3] = a;
    let [b1, b2, b3] = b;
    let mut g = Sheet::new(Group::Guard);
    let mut n = Sheet::new(Group::Narrowed);
    // upper chain  r <= k*f*h <= k*f   (h <= 1 follows from the orders)
    let upper = |n: &mut Sheet, id: &str, r: f64, kf: f64, h: f64| {
        n.le(&format!("{id}: ratio <= narrowed bound"), r, kf * h);
        n.le(&format!("{id}: narrowed bound <= thermodynamical bound"), kf * h, kf);
    };
    // lower chain  k*f <= k*f*h <= r   (h >= 1 follows from the orders)
    let lower = |n: &mut Sheet, id: &str, r: f64, kf: f64, h: f64| {
        n.le(&format!("{id}: thermodynamical bound <= narrowed bound"), kf, kf * h);
        n.le(&format!("{id}: narrowed bound <= ratio"), kf * h, r);
    };
    match m.code {
        ModelCode::IdId => {
            let (x, y) = (2.0 * al + be - mu, be + mu);
            g.le("alpha <= 2alpha+beta-mu", al, x);
            g.lt("2alpha+beta-mu < 1", x, 1.0);
            upper(&mut n, "b1/b2", b1 / b2, (a1 / a2) * s2(x) / s2(y), c2(x) / c2(y));
        }
        ModelCode::IdDdPlus | ModelCode::IddDdPlus => {
            let (x, y) = (2.0 * al + be + mu, mu - be);
            lower(&mut n, "b1/b2", b1 / b2, (a1 / a2) * c2(x).abs() / c2(y), s2(x) / s2(y));
        }
        ModelCode::IidIid => {
            g.lt("beta+eta < alpha+eta", be + et, al + et);
            g.lt("alpha+eta < 1", al + et, 1.0);
            let (x, y) = (al + et, al + 2.0 * ga - et);
            upper(&mut n, "a3/a1", a3 / a1, (b3 / b1) * s2(x) / s2(y), c2(x) / c2(y));
            let (x, y) = (be + et, be + 2.0 * ga - et);
            upper(&mut n, "a3/a2", a3 / a2, (b3 / b2) * s2(x) / s2(y), c2(x) / c2(y));
        }
        ModelCode::IddIdd => {
            g.lt("2alpha+beta-mu < 2alpha+gamma-mu", 2.0 * al + be - mu, 2.0 * al + ga - mu);
            g.lt("2alpha+gamma-mu < 1", 2.0 * al + ga - mu, 1.0);
            let (x, y) = (2.0 * al + be - mu, be + mu);
            upper(&mut n, "a2/a1", a2 / a1, (b2 / b1) * s2(x) / s2(y), c2(x) / c2(y));
            let (x, y) = (2.0 * al + ga - mu, ga + mu);
            upper(&mut n, "a3/a1", a3 / a1, (b3 / b1) * s2(x) / s2(y), c2(x) / c2(y));
        }
        ModelCode::IidIdd => {
            let e1 = al - be - ga - mu;
            let e2 = al - 2.0 * mu - nu;
            let mid = 2.0 * al - be - 2.0 * mu - nu;
            let f1 = 2.0 * al - be - mu;
            let f2 = 2.0 * al + ga - 2.0 * mu - nu;
            let top = 2.0 * al + ga - mu;
            n.le("0 <= alpha-beta-gamma-mu", 0.0, e1);
            n.le("0 <= alpha-2mu-nu", 0.0, e2);
            n.le("alpha-beta-gamma-mu <= 2alpha-beta-2mu-nu", e1, mid);
            n.le("alpha-2mu-nu <= 2alpha-beta-2mu-nu", e2, mid);
            n.le("2alpha-beta-2mu-nu <= 2alpha-beta-mu", mid, f1);
            n.le("2alpha-beta-2mu-nu <= 2alpha+gamma-2mu-nu", mid, f2);
            n.le("2alpha-beta-mu <= 2alpha+gamma-mu", f1, top);
            n.le("2alpha+gamma-2mu-nu <= 2alpha+gamma-mu", f2, top);
            n.lt("2alpha+gamma-mu < 1", top, 1.0);
            let y = ga + mu;
            upper(&mut n, "a3/a1", a3 / a1, (b3 / b1) * s2(top) / s2(y), c2(top) / c2(y));
        }
        ModelCode::IPlusIdIPlusId => {
            let (p, q) = (1.0 - 3.0 * al - ga + 2.0 * mu, 1.0 + al - ga - 2.0 * mu);
            upper(&mut n, "a2/a1", a2 / a1, (b2 / b1) * c4(p) / c4(q), s4(p) / s4(q));
            let (r, s) = (1.0 + 3.0 * al + ga - 2.0 * mu, 1.0 - al + ga + 2.0 * mu);
            upper(&mut n, "a3/a2", a3 / a2, (b3 / b2) * s4(r) / s4(s), c4(r) / c4(s));
            let (u, v, w) = (ga + mu, al - mu, 2.0 * al + ga - mu);
            n.le(
                "cross-product narrowed balance",
                a1 * b3 * s2(w),
                a2 * b2 * c2(v) * s2(v) / c2(w) + a3 * b1 * s2(u) * c2(u) / c2(w),
            );
        }
        ModelCode::IddPlusIddPlus => {
            let (u, v) = (1.0 + al - ga + 2.0 * et, 1.0 + al + 3.0 * ga - 2.0 * et);
            upper(&mut n, "a2/a1", a2 / a1, (b2 / b1) * s4(u) / s4(v), c4(u) / c4(v));
            let (x, y) = (1.0 - al + ga - 2.0 * et, 1.0 - al - 3.0 * ga + 2.0 * et);
            upper(&mut n, "a3/a2", a3 / a2, (b3 / b2) * c4(x) / c4(y), s4(x) / s4(y));
            let (p, q, r) = (al + 2.0 * ga - et, et - ga, al + et);
            n.le(
                "cross-product narrowed balance",
                a1 * b3 * s2(r),
                a2 * b2 * c2(q) * s2(q) / c2(r) + a3 * b1 * s2(p) * c2(p) / c2(r),
            );
        }
        ModelCode::IPlusIdIddPlus => {
            let (w, z) = (1.0 + al - ga + 2.0 * et, 1.0 - al - 3.0 * ga + 2.0 * et);
            lower(&mut n, "a2/b2 from below", a2 / b2, (a1 / b1) * s4(w) / c4(z), c4(w) / s4(z));
            upper(&mut n, "a2/b2 from above", a2 / b2, (a3 / b3) * c4(z) / s4(w), s4(z) / c4(w));
            let (p, q, r) = (al + et, ga - et, al + 2.0 * ga - et);
            n.le(
                "cross-product narrowed balance",
                a3 * b1 * s2(r),
                a2 * b2 * c2(q) * s2(q) / c2(r) + a1 * b3 * s2(p) * c2(p) / c2(r),
            );
        }
        ModelCode::IidId => {
            let (x, y) = (al + 2.0 * be - ga, al + ga);
            g.lt("alpha+2beta-gamma < 1", x, 1.0);
            upper(&mut n, "b1/b2", b1 / b2, (a1 / a3) * s2(x) / s2(y), c2(x) / c2(y));
        }
        ModelCode::IPlusIdId => {
            let (x, y) = (al + 2.0 * be + nu, nu - al);
            lower(&mut n, "b1/b2 from below", b1 / b2, (a1 / a2) * c2(x).abs() / c2(y), s2(x) / s2(y));
            let (x, y) = (be + nu, 2.0 * al + be - nu);
            upper(&mut n, "b1/b2 from above", b1 / b2, (a2 / a3) * s2(x) / s2(y), c2(x) / c2(y));
        }
        ModelCode::IddPlusDdPlus => {
            g.lt("2alpha+beta-mu < 1", 2.0 * al + be - mu, 1.0);
            let (x, y) = (2.0 * al + be + mu, mu - be);
            lower(&mut n, "b1/b2 from below", b1 / b2, (a1 / a2) * c2(x).abs() / c2(y), s2(x) / s2(y));
            let (x, y) = (al + mu, al + 2.0 * be - mu);
            upper(&mut n, "b1/b2 from above", b1 / b2, (a2 / a3) * s2(x) / s2(y), c2(x) / c2(y));
        }
        ModelCode::IdIdd => {
            let (x, y) = (2.0 * mu + nu - al, al + nu);
            g.lt("2mu+nu-alpha < 1", x, 1.0);
            upper(&mut n, "b1/b3", b1 / b3, (a1 / a2) * s2(x) / s2(y), c2(x) / c2(y));
        }
        ModelCode::IdDddPlus => {
            let (x, y) = (2.0 * al + be + nu, nu - be);
            lower(&mut n, "b2/b3", b2 / b3, (a1 / a2) * c2(x).abs() / c2(y), s2(x) / s2(y));
        }
        ModelCode::IdIddPlus => {
            let (x, y) = (al + 2.0 * be - nu, al + nu);
            lower(&mut n, "a1/a2 from below", a1 / a2, (b1 / b2) * s2(x) / s2(y), c2(x) / c2(y));
            let (x, y) = (nu - be, 2.0 * al + be + nu);
            upper(&mut n, "a1/a2 from above", a1 / a2, (b2 / b3) * c2(x) / c2(y).abs(), s2(x) / s2(y));
        }
    }
    (g, n)
}

pub fn check_thermo(m: &ModelSpec) -> ConstraintReport {
    let t = thermo(m);
    let ok = t.items.iter().all(|q| q.satisfied);
    ConstraintReport {
        code: m.code.to_string(),
        inequalities: t.items,
        overall: if ok { Verdict::ThermoOnly } else { Verdict::ThermoFail },
        failed_guard: None,
    }
}

/// Thermodynamical, window and narrowed inequalities. All of them are
/// evaluated and listed even when an earlier stage already failed.
pub fn check_narrowed(m: &ModelSpec) -> ConstraintReport {
    let mut report = check_thermo(m);
    let thermo_ok = report.overall != Verdict::ThermoFail;
    let (guard, narrow) = narrowed(m);
    let failed_guard = guard.items.iter().find(|q| !q.satisfied).map(|q| q.id.clone());
    let narrow_ok = narrow.items.iter().all(|q| q.satisfied);
    report.inequalities.extend(guard.items);
    report.inequalities.extend(narrow.items);
    report.overall = match (thermo_ok, &failed_guard, narrow_ok) {
        (false, _, _) => Verdict::ThermoFail,
        (true, Some(_), _) => Verdict::NarrowedNotGuaranteeable,
        (true, None, true) => Verdict::NarrowedOK,
        (true, None, false) => Verdict::ThermoOnly,
    };
    report.failed_guard = if thermo_ok { failed_guard } else { None };
    report
}

/// `K` from the double sine sum over the terms of both power sums.
#[allow(non_snake_case)]
pub fn K_generic(m: &ModelSpec, rho: f64) -> f64 {
    k_terms(m, rho).0
}

/// `K` together with the sum of the magnitudes of its terms.
pub fn k_terms(m: &ModelSpec, rho: f64) -> (f64, f64) {
    let lr = rho.ln();
    let mut sum = 0.0;
    let mut mag = 0.0;
    for ts in m.phi_sigma.terms() {
        for te in m.phi_epsilon.terms() {
            let w = ts.coeff * te.coeff * ((ts.exponent + te.exponent) * lr).exp();
            let v = w * ((m.xi + te.exponent - ts.exponent) * PI).sin();
            sum += v;
            mag += v.abs();
        }
    }
    (sum, mag)
}

/// `K` straight from the complex definition.
pub fn k_complex(m: &ModelSpec, rho: f64) -> f64 {
    let fe = m.phi_epsilon.eval_polar(rho, PI);
    let fs = m.phi_sigma.eval_polar(rho, PI);
    (Complex64::from_polar(1.0, m.xi * PI) * fe * fs.conj()).im
}

struct KTerm {
    i: usize,
    j: usize,
    sign: f64,
    power: f64,
    /// argument of the sine in units of pi
    arg: f64,
}

fn kt(i: usize, j: usize, sign: f64, power: f64, arg: f64) -> KTerm {
    KTerm { i: i - 1, j: j - 1, sign, power, arg }
}

fn closed_form_terms(m: &ModelSpec) -> Vec<KTerm> {
    let Vars { al, be, ga, mu, nu, et, .. } = vars(m);
    let (p, n) = (1.0, -1.0);
    match m.code {
        ModelCode::IdId => vec![
            kt(1, 1, p, 0.0, al - mu),
            kt(1, 2, p, al + be, 2.0 * al + be - mu),
            kt(2, 1, n, al + be, be + mu),
            kt(2, 2, p, 2.0 * (al + be), al - mu),
        ],
        ModelCode::IdDdPlus => vec![
            kt(1, 1, p, 0.0, al + mu),
            kt(1, 2, p, al + be, 2.0 * al + be + mu),
            kt(2, 1, p, al + be, mu - be),
            kt(2, 2, p, 2.0 * (al + be), al + mu),
        ],
        ModelCode::IidIid => vec![
            kt(1, 1, p, 0.0, et - ga),
            kt(1, 2, p, al - be, al + et - be - ga),
            kt(1, 3, p, al + ga, al + et),
            kt(2, 1, p, al - be, be + et - al - ga),
            kt(2, 2, p, 2.0 * (al - be), et - ga),
            kt(2, 3, p, 2.0 * al - be + ga, be + et),
            kt(3, 1, n, al + ga, al + 2.0 * ga - et),
            kt(3, 2, n, 2.0 * al - be + ga, be + 2.0 * ga - et),
            kt(3, 3, p, 2.0 * (al + ga), et - ga),
        ],
        ModelCode::IddIdd => vec![
            kt(1, 1, p, 0.0, al - mu),
            kt(1, 2, p, al + be, 2.0 * al + be - mu),
            kt(1, 3, p, al + ga, 2.0 * al + ga - mu),
            kt(2, 1, n, al + be, be + mu),
            kt(2, 2, p, 2.0 * (al + be), al - mu),
            kt(2, 3, p, 2.0 * al + be + ga, al + ga - be - mu),
            kt(3, 1, n, al + ga, ga + mu),
            kt(3, 2, p, 2.0 * al + be + ga, al + be - ga - mu),
            kt(3, 3, p, 2.0 * (al + ga), al - mu),
        ],
        ModelCode::IidIdd => vec![
            kt(1, 1, p, 0.0, al - mu),
            kt(1, 2, p, al - be, 2.0 * al - be - mu),
            kt(1, 3, p, al + ga, 2.0 * al + ga - mu),
            kt(2, 1, p, mu + nu, al - 2.0 * mu - nu),
            kt(2, 2, p, al - be + mu + nu, 2.0 * al - be - 2.0 * mu - nu),
            kt(2, 3, p, al + ga + mu + nu, 2.0 * al + ga - 2.0 * mu - nu),
            kt(3, 1, n, al + ga, mu + ga),
            kt(3, 2, p, 2.0 * al - be + ga, al - be - ga - mu),
            kt(3, 3, p, 2.0 * (al + ga), al - mu),
        ],
        ModelCode::IPlusIdIPlusId => {
            let h = (1.0 + al + ga) / 2.0;
            let up = (1.0 + 3.0 * al + ga - 2.0 * mu) / 2.0;
            let dn = (1.0 - al + ga + 2.0 * mu) / 2.0;
            vec![
                kt(1, 1, p, 0.0, al - mu),
                kt(1, 2, p, h, up),
                kt(1, 3, p, 2.0 * h, 1.0 + 2.0 * al + ga - mu),
                kt(2, 1, n, h, dn),
                kt(2, 2, p, 2.0 * h, al - mu),
                kt(2, 3, p, 3.0 * h, up),
                kt(3, 1, n, 2.0 * h, 1.0 + ga + mu),
                kt(3, 2, n, 3.0 * h, dn),
                kt(3, 3, p, 4.0 * h, al - mu),
            ]
        }
        ModelCode::IddPlusIddPlus => {
            let h = (1.0 + al + ga) / 2.0;
            let up = (1.0 + al - ga + 2.0 * et) / 2.0;
            let dn = (1.0 + al + 3.0 * ga - 2.0 * et) / 2.0;
            vec![
                kt(1, 1, p, 0.0, et - ga),
                kt(1, 2, p, h, up),
                kt(1, 3, n, 2.0 * h, al + et),
                kt(2, 1, n, h, dn),
                kt(2, 2, p, 2.0 * h, et - ga),
                kt(2, 3, p, 3.0 * h, up),
                kt(3, 1, p, 2.0 * h, al + 2.0 * ga - et),
                kt(3, 2, n, 3.0 * h, dn),
                kt(3, 3, p, 4.0 * h, et - ga),
            ]
        }
        ModelCode::IPlusIdIddPlus => {
            let h = (1.0 + al + ga) / 2.0;
            let up = (1.0 + al - ga + 2.0 * et) / 2.0;
            let dn = (1.0 - al - 3.0 * ga + 2.0 * et) / 2.0;
            vec![
                kt(1, 1, p, 0.0, ga - et),
                kt(1, 2, n, h, up),
                kt(1, 3, p, 2.0 * h, al + et),
                kt(2, 1, p, h, dn),
                kt(2, 2, p, 2.0 * h, ga - et),
                kt(2, 3, n, 3.0 * h, up),
                kt(3, 1, n, 2.0 * h, al + 2.0 * ga - et),
                kt(3, 2, p, 3.0 * h, dn),
                kt(3, 3, p, 4.0 * h, ga - et),
            ]
        }
        ModelCode::IidId => vec![
            kt(1, 1, p, 0.0, be - ga),
            kt(1, 2, p, al + be, al + 2.0 * be - ga),
            kt(2, 1, p, al + be - ga - nu, nu - al),
            kt(2, 2, p, 2.0 * (al + be) - ga - nu, be + nu),
            kt(3, 1, n, al + be, al + ga),
            kt(3, 2, p, 2.0 * (al + be), be - ga),
        ],
        ModelCode::IddDdPlus => vec![
            kt(1, 1, p, 0.0, al + mu),
            kt(1, 2, p, al + be, 2.0 * al + be + mu),
            kt(2, 1, p, al + be, mu - be),
            kt(2, 2, p, 2.0 * (al + be), al + mu),
            kt(3, 2, p, 2.0 * al + be + mu, al + be),
        ],
        ModelCode::IPlusIdId => vec![
            kt(1, 1, p, 0.0, be + nu),
            kt(1, 2, p, al + be, al + 2.0 * be + nu),
            kt(2, 1, p, al + be, nu - al),
            kt(2, 2, p, 2.0 * (al + be), be + nu),
            kt(3, 1, n, 2.0 * (al + be), 2.0 * al + be - nu),
            kt(3, 2, p, 3.0 * (al + be), nu - al),
        ],
        ModelCode::IddPlusDdPlus => vec![
            kt(1, 1, p, 0.0, al + mu),
            kt(1, 2, p, al + be, 2.0 * al + be + mu),
            kt(2, 1, p, al + be, mu - be),
            kt(2, 2, p, 2.0 * (al + be), al + mu),
            kt(3, 1, n, 2.0 * (al + be), al + 2.0 * be - mu),
            kt(3, 2, p, 3.0 * (al + be), mu - be),
        ],
        ModelCode::IdIdd => vec![
            kt(1, 1, p, 0.0, mu - al),
            kt(1, 2, p, al + be, be + mu),
            kt(1, 3, p, mu + nu, 2.0 * mu + nu - al),
            kt(2, 1, n, mu + nu, al + nu),
            kt(2, 2, p, al + be + mu + nu, be - nu),
            kt(2, 3, p, 2.0 * (mu + nu), mu - al),
        ],
        ModelCode::IdDddPlus => vec![
            kt(1, 1, p, 0.0, al + mu),
            kt(1, 2, p, nu - mu, al + nu),
            kt(1, 3, p, al + be + nu - mu, 2.0 * al + be + nu),
            kt(2, 1, p, al + be, mu - be),
            kt(2, 2, p, al + be + nu - mu, nu - be),
            kt(2, 3, p, 2.0 * al + 2.0 * be + nu - mu, al + nu),
        ],
        ModelCode::IdIddPlus => vec![
            kt(1, 1, p, 0.0, nu - be),
            kt(1, 2, p, al + be, al + nu),
            kt(1, 3, p, 2.0 * (al + be), 2.0 * al + be + nu),
            kt(2, 1, n, al + be, al + 2.0 * be - nu),
            kt(2, 2, p, 2.0 * (al + be), nu - be),
            kt(2, 3, p, 3.0 * (al + be), al + nu),
        ],
    }
}

/// `K` from the model's own sine polynomial.
#[allow(non_snake_case)]
pub fn K_closed_form(m: &ModelSpec, rho: f64) -> f64 {
    let lr = rho.ln();
    closed_form_terms(m)
        .iter()
        .map(|t| t.sign * m.a[t.i] * m.b[t.j] * (t.power * lr).exp() * (t.arg * PI).sin())
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogGrid {
    pub lo: f64,
    pub hi: f64,
    pub per_decade: usize,
}

impl Default for LogGrid {
    fn default() -> Self {
        LogGrid { lo: 1e-6, hi: 1e6, per_decade: 20 }
    }
}

impl LogGrid {
    pub fn points(&self) -> Vec<f64> {
        let decades = (self.hi / self.lo).log10();
        let n = (decades * self.per_decade as f64).round().max(1.0) as usize;
        let (l0, l1) = (self.lo.log10(), self.hi.log10());
        (0..=n).map(|k| 10f64.powf(l0 + (l1 - l0) * k as f64 / n as f64)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanResult {
    pub nonnegative: bool,
    pub first_violation: Option<(f64, f64)>,
}

/// Sample `K` on a log grid and report the smallest `rho` where it is
/// negative beyond rounding. The slack is relative to the magnitude of the
/// terms at that `rho`, so a dip in the middle of the range is not hidden by
/// the size of `K` at the far end.
#[allow(non_snake_case)]
pub fn K_nonneg_scan(m: &ModelSpec, grid: &LogGrid) -> ScanResult {
    let pts = grid.points();
    let vals: Vec<(f64, f64, f64)> = pts
        .par_iter()
        .map(|&r| {
            let (k, mag) = k_terms(m, r);
            (r, k, mag)
        })
        .collect();
    let first = vals.iter().find(|&&(_, k, mag)| k < -1e-12 * mag).map(|&(r, k, _)| (r, k));
    ScanResult { nonnegative: first.is_none(), first_violation: first }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model_catalog::{build_model, FractionalOrders};

    fn orders(pairs: &[(Order, f64)]) -> FractionalOrders {
        let mut o = FractionalOrders::default();
        for &(k, v) in pairs {
            o.set(k, v);
        }
        o
    }

    fn case(a: &[f64]) -> ModelSpec {
        let o = orders(&[(Order::Alpha, 0.35), (Order::Beta, 0.55), (Order::Nu, 0.4)]);
        build_model(ModelCode::IPlusIdId, o, a, &[0.7, 0.95]).unwrap()
    }

    #[test]
    fn case_one_is_narrowed_ok() {
        let r = check_narrowed(&case(&[0.05, 1.5, 0.45]));
        assert_eq!(r.overall, Verdict::NarrowedOK, "{}", r.to_json());
        assert!(r.passed(Group::Thermo));
    }

    #[test]
    fn oscillating_case_fails_narrowed() {
        let o = orders(&[(Order::Alpha, 0.35), (Order::Beta, 0.55), (Order::Nu, 0.4)]);
        let m = build_model(ModelCode::IPlusIdId, o, &[11.0, 15.0, 20.27], &[7.0, 9.5]).unwrap();
        let r = check_narrowed(&m);
        assert_ne!(r.overall, Verdict::NarrowedOK);
        assert!(r.failures().count() >= 1);
    }

    #[test]
    fn closed_form_value_at_one() {
        let m = case(&[0.05, 1.5, 0.45]);
        let s = |x: f64| (x * PI).sin();
        let want = 0.05 * 0.7 * s(0.95)
            + (0.05 * 0.95 * s(1.85) + 1.5 * 0.7 * s(0.05))
            + (1.5 * 0.95 * s(0.95) - 0.45 * 0.7 * s(0.85))
            + 0.45 * 0.95 * s(0.05);
        assert!((K_closed_form(&m, 1.0) - want).abs() < 1e-15);
        assert!((K_generic(&m, 1.0) - want).abs() < 1e-12 * want.abs());
        assert!((k_complex(&m, 1.0) - want).abs() < 1e-12 * want.abs());
    }

    #[test]
    fn small_rho_limit() {
        let m = case(&[0.05, 1.5, 0.45]);
        let lead = 0.05 * 0.7 * (0.95 * PI).sin();
        assert!((K_generic(&m, 1e-12) - lead).abs() < 1e-9 * lead);
    }

    #[test]
    fn id_id_window() {
        let o = orders(&[(Order::Alpha, 0.5), (Order::Beta, 0.4), (Order::Mu, 0.05)]);
        let m = build_model(ModelCode::IdId, o, &[1.0, 1.0], &[1.0, 1.0]).unwrap();
        let r = check_narrowed(&m);
        assert_eq!(r.overall, Verdict::NarrowedNotGuaranteeable);
        assert_eq!(r.failed_guard.as_deref(), Some("2alpha+beta-mu < 1"));
    }

    #[test]
    fn trivial_order_violations() {
        let o = orders(&[(Order::Alpha, 0.2), (Order::Beta, 0.3), (Order::Mu, 0.4)]);
        let m = build_model(ModelCode::IdId, o, &[1.0, 2.0], &[1.0, 2.0]).unwrap();
        let r = check_thermo(&m);
        assert_eq!(r.overall, Verdict::ThermoFail);
        assert!(r.failures().any(|q| q.id == "mu <= alpha"));

        let o = orders(&[(Order::Alpha, 0.1), (Order::Beta, 0.1), (Order::Mu, 0.3)]);
        let m = build_model(ModelCode::IdDdPlus, o, &[1.0, 2.0], &[1.0, 2.0]).unwrap();
        let r = check_narrowed(&m);
        assert_eq!(r.overall, Verdict::ThermoFail);
        assert!(r.failures().any(|q| q.id == "1 <= alpha+beta+mu"));
    }

    #[test]
    fn scan_flags_the_oscillating_case() {
        let o = orders(&[(Order::Alpha, 0.35), (Order::Beta, 0.55), (Order::Nu, 0.4)]);
        let m = build_model(ModelCode::IPlusIdId, o, &[11.0, 15.0, 20.27], &[7.0, 9.5]).unwrap();
        let s = K_nonneg_scan(&m, &LogGrid::default());
        assert!(!s.nonnegative);
        let (r, k) = s.first_violation.unwrap();
        assert!(k < 0.0 && r > 0.0);
        assert!(K_nonneg_scan(&case(&[0.05, 1.5, 0.45]), &LogGrid::default()).nonnegative);
    }

    #[test]
    fn report_json_has_ids() {
        let j = check_narrowed(&case(&[0.05, 1.5, 0.45])).to_json();
        assert!(j.contains("\"NarrowedOK\"") && j.contains("nu <= 1-beta"));
    }
}

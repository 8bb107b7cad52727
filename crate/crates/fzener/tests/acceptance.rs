//! Acceptance criteria 1-9, run without the libtest harness so that every
//! criterion prints its `PASS`/`FAIL` line. Exits nonzero if any fails.

mod common;

use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use common::{case_one, ccp_case, id_id, orders, rng, rp_case, sample_narrowed_ok};
use fzener::asymptotics::{creep_long, creep_short, relax_long, relax_short};
use fzener::cli::fixture_files;
use fzener::constraints::{check_narrowed, k_terms, K_closed_form, K_generic, K_nonneg_scan, LogGrid, Verdict};
use fzener::energy::{energy_from_strain, History, HistoryKind};
use fzener::mittag_leffler::{ml_big_e, ml_e, rgamma};
use fzener::pole_finder::{classify, classify_quadratic_tol, PoleKind};
use fzener::quadrature::bromwich_oracle;
use fzener::response::{
    creep_at, creep_derivative, creep_integral_at, creep_ml, creep_stable_at, relaxation, relaxation_at,
    relaxation_derivatives, TimeGrid,
};
use fzener::{build_model, ModelCode, ModelSpec, Order};
use rand::Rng;

/// Named sub-checks of one criterion.
struct Report {
    id: u32,
    title: &'static str,
    checks: Vec<(String, bool)>,
}

impl Report {
    fn new(id: u32, title: &'static str) -> Self {
        Report { id, title, checks: Vec::new() }
    }

    fn check(&mut self, what: impl Into<String>, ok: bool) {
        self.checks.push((what.into(), ok));
    }

    fn within(&mut self, what: &str, elapsed: Duration, limit: Duration) {
        self.check(format!("{what} {:.3?} < {:?}", elapsed, limit), elapsed < limit);
    }

    fn finish(self) -> bool {
        let ok = self.checks.iter().all(|c| c.1);
        println!("criterion {}: {} {}", self.id, if ok { "PASS" } else { "FAIL" }, self.title);
        for (what, pass) in &self.checks {
            println!("    [{}] {what}", if *pass { "ok" } else { "FAIL" });
        }
        ok
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn mean_time<F: FnMut()>(reps: u32, mut f: F) -> Duration {
    let t0 = Instant::now();
    for _ in 0..reps {
        f();
    }
    t0.elapsed() / reps
}

fn criterion_1_pole_classification() -> bool {
    let mut r = Report::new(1, "pole classification of the three reference rows");
    let xi = 0.9;
    let ms = 1.0e-3;

    let m = case_one();
    let ratio = 2.0 * (m.a[0] * m.a[2]).sqrt() / m.a[1];
    let cls = classify(&m.phi_sigma).unwrap();
    r.check(format!("no-pole row: 2 sqrt(a1 a3)/a2 = {ratio:.15} <= 1, kind {:?}", cls.kind), ratio <= 1.0 && (ratio - 0.2).abs() < 1e-12 && cls.kind == PoleKind::NoPoles);
    let dt = mean_time(1000, || {
        std::hint::black_box(classify(&m.phi_sigma).unwrap());
    });
    r.within("no-pole classify", dt, Duration::from_secs_f64(ms));

    let rho_want = (11.0f64 / 20.27).powf(1.0 / 1.8);
    let (a1, a3) = (11.0f64, 20.27f64);
    // printed middle coefficient, accepted within the 1e-3 band
    let a2_printed = 28.4029;
    let d = (4.0 * a1 * a3 / (a2_printed * a2_printed) - 1.0).sqrt();
    let gap = ((xi * PI).tan() + d).abs();
    let c = classify_quadratic_tol(a3, a2_printed, a1, xi, 1e-3);
    r.check(format!("printed RP row: |tan(0.9 pi) + D| = {gap:.3e} < 1e-3, kind {:?}", c.kind), gap < 1e-3 && c.kind == PoleKind::NegativeRealPole);
    r.check(format!("printed RP row: rho = {:.12} vs {rho_want:.12}", c.rho.unwrap_or(f64::NAN)), (c.rho.unwrap_or(f64::NAN) - rho_want).abs() < 1e-6);
    let m = rp_case();
    let c = classify(&m.phi_sigma).unwrap();
    r.check(
        format!("RP fixture on the tangency manifold: {:?}, rho err {:.1e}, residual {:.1e}", c.kind, (c.rho.unwrap_or(f64::NAN) - rho_want).abs(), c.residual.unwrap_or(f64::NAN)),
        c.kind == PoleKind::NegativeRealPole && (c.rho.unwrap() - rho_want).abs() < 1e-6 && c.residual.unwrap() < 1e-9,
    );
    let dt = mean_time(1000, || {
        std::hint::black_box(classify(&m.phi_sigma).unwrap());
    });
    r.within("RP classify", dt, Duration::from_secs_f64(ms));

    let m = ccp_case();
    let c = classify(&m.phi_sigma).unwrap();
    let d = (4.0 * a1 * a3 / (15.0f64 * 15.0) - 1.0).sqrt();
    let phi_want = (1.0 - d.atan() / PI) * PI / xi;
    r.check(format!("CCP row: kind {:?}", c.kind), c.kind == PoleKind::ComplexConjugatePair);
    r.check(format!("CCP row: rho err {:.1e}", (c.rho.unwrap_or(f64::NAN) - rho_want).abs()), (c.rho.unwrap_or(f64::NAN) - rho_want).abs() < 1e-9);
    r.check(
        format!("CCP row: phi/pi = {:.12}, err {:.1e}", c.phi.unwrap_or(f64::NAN) / PI, (c.phi.unwrap_or(f64::NAN) - phi_want).abs()),
        (c.phi.unwrap_or(f64::NAN) - phi_want).abs() < 1e-9,
    );
    let dt = mean_time(1000, || {
        std::hint::black_box(classify(&m.phi_sigma).unwrap());
    });
    r.within("CCP classify", dt, Duration::from_secs_f64(ms));
    r.finish()
}

fn criterion_2_creep_representations_agree() -> bool {
    let mut r = Report::new(2, "three creep representations agree pairwise");
    let m = case_one();
    let t0 = Instant::now();
    let times = TimeGrid::log(1e-2, 1e2, 50).times().unwrap();
    let (mut e_is, mut e_im, mut e_sm) = (0.0f64, 0.0f64, 0.0f64);
    for &t in &times {
        let (i, s, l) = (creep_integral_at(&m, t).unwrap(), creep_stable_at(&m, t).unwrap(), creep_ml(&m, t).unwrap());
        e_is = e_is.max(rel(i, s));
        e_im = e_im.max(rel(i, l));
        e_sm = e_sm.max(rel(s, l));
    }
    let el = t0.elapsed();
    r.check(format!("integral vs split {e_is:.2e} <= 1e-6"), e_is <= 1e-6);
    r.check(format!("integral vs Mittag-Leffler {e_im:.2e} <= 1e-6"), e_im <= 1e-6);
    r.check(format!("split vs Mittag-Leffler {e_sm:.2e} <= 1e-6"), e_sm <= 1e-6);
    r.within("runtime", el, Duration::from_secs(10));
    r.finish()
}

fn id_id_pair() -> ModelSpec {
    // alpha + beta > 1: phi_sigma has a complex pair
    let o = orders(&[(Order::Alpha, 0.7), (Order::Beta, 0.5), (Order::Mu, 0.3)]);
    build_model(ModelCode::IdId, o, &[1.0, 2.0], &[1.5, 3.0]).unwrap()
}

fn criterion_3_oracle_equivalence() -> bool {
    let mut r = Report::new(3, "relaxation and creep match the Talbot oracle");
    let t0 = Instant::now();
    let cases = [("no-pole row", case_one()), ("RP row", rp_case()), ("CCP row", ccp_case()), ("ID.ID", id_id()), ("ID.ID pair", id_id_pair())];
    for (name, m) in &cases {
        let (mut er, mut ec) = (0.0f64, 0.0f64);
        for t in [0.1, 1.0, 10.0] {
            let o = bromwich_oracle(|s| Some(m.laplace_relaxation_dd(s)), t).unwrap();
            if o.abs() > 1e-8 {
                er = er.max(rel(relaxation_at(m, t).unwrap(), o));
            }
            let o = bromwich_oracle(|s| Some(m.laplace_creep_dd(s)), t).unwrap();
            if o.abs() > 1e-8 {
                ec = ec.max(rel(creep_at(m, t).unwrap(), o));
            }
        }
        let kinds = format!("{:?}/{:?}", classify(&m.phi_sigma).unwrap().kind, classify(&m.phi_epsilon).unwrap().kind);
        r.check(format!("{name} ({kinds}): relaxation {er:.2e}, creep {ec:.2e} <= 1e-5"), er <= 1e-5 && ec <= 1e-5);
    }
    r.within("runtime", t0.elapsed(), Duration::from_secs(30));
    r.finish()
}

fn criterion_4_asymptotics() -> bool {
    let mut r = Report::new(4, "asymptotic series against the computed curves");
    let m = case_one();
    let cases = [
        ("relaxation, short time, t = 1e-3", relax_short(&m).unwrap().eval(1e-3), relaxation_at(&m, 1e-3).unwrap()),
        ("relaxation, long time, t = 1e4", relax_long(&m).unwrap().eval(1e4), relaxation_at(&m, 1e4).unwrap()),
        ("creep, short time, t = 1e-3", creep_short(&m).unwrap().eval(1e-3), creep_at(&m, 1e-3).unwrap()),
        ("creep, long time, t = 1e4", creep_long(&m).unwrap().eval(1e4), creep_at(&m, 1e4).unwrap()),
    ];
    for (name, series, exact) in cases {
        let e = rel(series, exact);
        r.check(format!("{name}: {series:.6e} vs {exact:.6e}, {:.3}% <= 2%", 100.0 * e), e <= 0.02);
    }
    r.finish()
}

fn criterion_5_curve_shapes() -> bool {
    let mut r = Report::new(5, "sign, monotonicity and curvature of the reference curves");
    let times = TimeGrid::default().times().unwrap();
    let count = |f: &dyn Fn(f64) -> bool| times.iter().filter(|&&t| f(t)).count();

    let m = case_one();
    let s = relaxation(&m, &TimeGrid::default()).unwrap().values;
    let d1: Vec<f64> = times.iter().map(|&t| relaxation_derivatives(&m, t, 1).unwrap()).collect();
    let d2: Vec<f64> = times.iter().map(|&t| relaxation_derivatives(&m, t, 2).unwrap()).collect();
    let dec = s.windows(2).all(|w| w[1] < w[0]);
    r.check("no-pole relaxation positive", s.iter().all(|&v| v > 0.0));
    r.check("no-pole relaxation decreasing (values and derivative)", dec && d1.iter().all(|&v| v < 0.0));
    r.check("no-pole relaxation convex (second derivative)", d2.iter().all(|&v| v > 0.0));
    let e: Vec<f64> = times.iter().map(|&t| creep_at(&m, t).unwrap()).collect();
    let inc = e.windows(2).all(|w| w[1] > w[0]);
    r.check("no-pole creep nonnegative", e.iter().all(|&v| v >= 0.0));
    r.check("no-pole creep increasing (values and derivative)", inc && count(&|t| creep_derivative(&m, t, 1).unwrap() > 0.0) == times.len());
    r.check("no-pole creep concave (second derivative)", count(&|t| creep_derivative(&m, t, 2).unwrap() < 0.0) == times.len());

    let m = ccp_case();
    let s = relaxation(&m, &TimeGrid::default()).unwrap().values;
    let flips = s.windows(2).filter(|w| w[0].signum() != w[1].signum()).count();
    r.check(format!("CCP relaxation changes sign ({flips} times)"), flips >= 1);
    let last_flip = s.windows(2).rposition(|w| w[0].signum() != w[1].signum()).unwrap_or(0);
    let tail: Vec<f64> = times[times.len() - 20..].iter().map(|&t| relaxation_derivatives(&m, t, 1).unwrap()).collect();
    r.check(
        format!("CCP relaxation positive after the last sign change (t > {:.3e}) and decaying at late times", times[last_flip + 1]),
        s[last_flip + 1..].iter().all(|&v| v > 0.0) && tail.iter().all(|&v| v < 0.0),
    );
    let inc = count(&|t| creep_derivative(&m, t, 1).unwrap() > 0.0);
    r.check(format!("CCP creep increasing ({inc}/{} points)", times.len()), inc == times.len());
    let convex: Vec<f64> = times.iter().copied().filter(|&t| creep_derivative(&m, t, 2).unwrap() > 0.0).collect();
    r.check(
        format!(
            "CCP creep convex ({}/{} points; convex only on [{:.3e}, {:.3e}])",
            convex.len(),
            times.len(),
            convex.first().copied().unwrap_or(f64::NAN),
            convex.last().copied().unwrap_or(f64::NAN)
        ),
        convex.len() == times.len(),
    );
    r.finish()
}

fn criterion_6_k_consistency() -> bool {
    let mut r = Report::new(6, "K forms agree, scan passes on narrowed sets, violations are reported");
    let mut g = rng(2024);
    for code in ModelCode::ALL {
        let (mut n, mut worst, mut scans) = (0, 0.0f64, 0);
        for _ in 0..10 {
            let Some(m) = sample_narrowed_ok(code, &mut g) else { continue };
            n += 1;
            for k in 0..200 {
                let rho = 10f64.powf(-6.0 + 12.0 * k as f64 / 199.0);
                let (kg, kc) = (K_generic(&m, rho), K_closed_form(&m, rho));
                let (_, scale) = k_terms(&m, rho);
                if kg.abs() > scale * 1e-14 {
                    worst = worst.max((kg - kc).abs() / kg.abs());
                }
            }
            scans += K_nonneg_scan(&m, &LogGrid::default()).nonnegative as usize;
        }
        r.check(format!("{code}: {n}/10 narrowed sets, K forms {worst:.1e} <= 1e-10, scan passed {scans}/{n}"), n == 10 && worst <= 1e-10 && scans == n);

        let (na, nb) = common::n_coeffs(code);
        // prefer a thermodynamically admissible set with negative K
        let (mut caught, mut fallback) = (None, None);
        for _ in 0..50_000 {
            let o = orders(&code.required_orders().iter().map(|&k| (k, g.gen_range(0.0..1.0))).collect::<Vec<_>>());
            let a: Vec<f64> = (0..na).map(|_| 10f64.powf(g.gen_range(-4.0..4.0))).collect();
            let b: Vec<f64> = (0..nb).map(|_| 10f64.powf(g.gen_range(-4.0..4.0))).collect();
            let Ok(m) = build_model(code, o, &a, &b) else { continue };
            let scan = K_nonneg_scan(&m, &LogGrid::default());
            if !scan.nonnegative {
                let rep = check_narrowed(&m);
                let hit = Some((scan.first_violation.unwrap().0, rep.overall, rep.failures().count()));
                if rep.overall != Verdict::ThermoFail {
                    caught = hit;
                    break;
                }
                fallback = fallback.or(hit);
            }
        }
        let caught = caught.or(fallback);
        match caught {
            Some((rho, verdict, nfail)) => r.check(
                format!("{code}: negative K at rho = {rho:.2e} is reported ({verdict:?}, {nfail} failed inequalities)"),
                verdict != Verdict::NarrowedOK && nfail > 0,
            ),
            None => r.check(format!("{code}: no set with negative K found"), false),
        }
    }
    r.finish()
}

fn criterion_7_energy_balance() -> bool {
    let mut r = Report::new(7, "energy balance for eps = 1 - e^{-t} on [0, 10]");
    let m = case_one();
    let t0 = Instant::now();
    let run = |n: usize| {
        let eps = History::sample(HistoryKind::Strain, 10.0, n, |t| -(-t).exp_m1()).unwrap();
        energy_from_strain(&m, &eps).unwrap()
    };
    let e1 = run(2000);
    let el = t0.elapsed();
    let e2 = run(4000);
    let (r1, r2) = (e1.identity_residual / e1.max_power(), e2.identity_residual / e2.max_power());
    r.check(format!("2000 points: max|P - dW/dt - Pdiss| / max|P| = {r1:.3e} <= 1e-3"), r1 <= 1e-3);
    let ratio = e2.identity_residual / e1.identity_residual;
    r.check(format!("doubling the grid: residual {r1:.3e} -> {r2:.3e}, ratio {ratio:.3} in [0.4, 0.6]"), (0.4..=0.6).contains(&ratio));
    let wmin = e1.stored.iter().chain(&e2.stored).cloned().fold(f64::INFINITY, f64::min);
    let pmin = e1.dissipated.iter().chain(&e2.dissipated).cloned().fold(f64::INFINITY, f64::min);
    r.check(format!("W >= 0 (min {wmin:.3e})"), wmin >= 0.0);
    r.check(format!("Pdiss >= 0 (min {pmin:.3e})"), pmin >= 0.0);
    r.within("runtime at 2000 points", el, Duration::from_secs(60));
    r.finish()
}

fn criterion_8_mittag_leffler() -> bool {
    let mut r = Report::new(8, "Mittag-Leffler unit values");
    let e = ml_big_e(1.0, 1.0, 1.0).unwrap();
    r.check(format!("E_1,1(1) - e = {:.1e}", e - std::f64::consts::E), (e - std::f64::consts::E).abs() <= 1e-12);
    let mut worst = 0.0f64;
    for xi in [0.1, 0.35, 0.5, 0.9, 1.0, 1.5] {
        for zeta in [0.2, 0.5, 1.0, 1.45, 2.0, 3.5] {
            let v = ml_big_e(xi, zeta, 0.0).unwrap();
            worst = worst.max((v - rgamma(zeta)).abs());
        }
    }
    r.check(format!("E(0) = 1/Gamma(zeta): {worst:.1e} <= 1e-13"), worst <= 1e-13);
    let want = std::f64::consts::E * statrs::function::erf::erfc(1.0);
    let got = ml_big_e(0.5, 1.0, -1.0).unwrap();
    r.check(format!("E_1/2,1(-1) = {got:.15} vs e erfc(1), {:.1e} <= 1e-9", (got - want).abs()), (got - want).abs() <= 1e-9);
    let mut worst = 0.0f64;
    for &(xi, zeta, lam) in &[(0.9, 0.95, 1.0), (0.5, 1.3, 2.0), (0.7, 1.6, 0.4)] {
        for t in [0.5, 1.0, 5.0] {
            let h = 1e-5 * t;
            let fd = (ml_e(xi, zeta, lam, t + h).unwrap() - ml_e(xi, zeta, lam, t - h).unwrap()) / (2.0 * h);
            let d = ml_e(xi, zeta - 1.0, lam, t).unwrap();
            worst = worst.max((fd - d).abs() / d.abs().max(1.0));
        }
    }
    r.check(format!("d/dt e(xi, zeta) = e(xi, zeta - 1): {worst:.1e} <= 1e-6"), worst <= 1e-6);
    r.finish()
}

fn fixture_dir(tag: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("fzener-acceptance-{}-{tag}", std::process::id()));
    let _ = std::fs::remove_dir_all(&d);
    d
}

fn read_dir_sorted(d: &PathBuf) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<_> = std::fs::read_dir(d)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap())
        })
        .collect();
    v.sort();
    v
}

fn criterion_9_fixture_determinism() -> bool {
    let mut r = Report::new(9, "fixture output is byte-identical across runs and thread counts");
    let bin = env!("CARGO_BIN_EXE_fzener");
    let mut outputs = Vec::new();
    for (tag, threads) in [("a", "1"), ("b", "1"), ("c", "4"), ("d", "")] {
        let d = fixture_dir(tag);
        let mut cmd = Command::new(bin);
        cmd.args(["fixtures", "--out"]).arg(&d);
        if threads.is_empty() {
            cmd.env_remove("RAYON_NUM_THREADS");
        } else {
            cmd.env("RAYON_NUM_THREADS", threads);
        }
        let status = cmd.output().unwrap().status;
        r.check(format!("run {tag} (threads {}) exits 0", if threads.is_empty() { "default" } else { threads }), status.success());
        outputs.push(read_dir_sorted(&d));
        let _ = std::fs::remove_dir_all(&d);
    }
    let names: Vec<_> = outputs[0].iter().map(|f| f.0.clone()).collect();
    r.check(format!("{} files: {}", names.len(), names.join(" ")), names.len() == 8);
    for (i, o) in outputs.iter().enumerate().skip(1) {
        r.check(format!("run {} identical to run a", ["a", "b", "c", "d"][i]), *o == outputs[0]);
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
    let in_pool = pool.install(|| fixture_files().unwrap());
    let bytes: Vec<_> = in_pool.into_iter().map(|(n, t)| (n, t.into_bytes())).collect();
    let mut sorted = bytes.clone();
    sorted.sort();
    r.check("library fixtures in a 3-thread pool match the CLI output", sorted == outputs[0]);
    r.finish()
}

fn main() {
    let criteria: [(u32, fn() -> bool); 9] = [
        (1, criterion_1_pole_classification),
        (2, criterion_2_creep_representations_agree),
        (3, criterion_3_oracle_equivalence),
        (4, criterion_4_asymptotics),
        (5, criterion_5_curve_shapes),
        (6, criterion_6_k_consistency),
        (7, criterion_7_energy_balance),
        (8, criterion_8_mittag_leffler),
        (9, criterion_9_fixture_determinism),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = Vec::new();
    for (id, f) in criteria {
        if !filter.is_empty() && !filter.iter().any(|x| x == &id.to_string()) {
            continue;
        }
        let ok = std::panic::catch_unwind(f).unwrap_or_else(|_| {
            println!("criterion {id}: FAIL (panicked)");
            false
        });
        if !ok {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria passed");
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}

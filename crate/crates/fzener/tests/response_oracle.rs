mod common;

use common::{rng, sample_narrowed_ok};
use fzener::constraints::check_thermo;
use fzener::constraints::Verdict;
use fzener::pole_finder::{classify, PoleKind};
use fzener::quadrature::bromwich_oracle;
use fzener::response::{creep_at, creep_ml, relaxation_at, relaxation_ml};
use fzener::{build_model, ModelCode, ModelSpec};
use rand::Rng;

const TIMES: [f64; 5] = [0.01, 0.1, 1.0, 10.0, 100.0];

fn check(m: &ModelSpec) {
    for &t in &TIMES {
        let o = bromwich_oracle(|s| Some(m.laplace_relaxation_dd(s)), t).unwrap();
        let v = relaxation_at(m, t).unwrap();
        if o.abs() > 1e-8 {
            assert!((v - o).abs() <= 1e-5 * o.abs(), "{} relax t={t}: {v} vs {o}\n{:?}", m.code, m.descriptor());
        }
        if let Ok(w) = relaxation_ml(m, t) {
            assert!((w - o).abs() <= 1e-5 * o.abs().max(1e-8), "{} relax ml t={t}: {w} vs {o}", m.code);
        }
        let o = bromwich_oracle(|s| Some(m.laplace_creep_dd(s)), t).unwrap();
        let v = creep_at(m, t).unwrap();
        if o.abs() > 1e-8 {
            assert!((v - o).abs() <= 1e-5 * o.abs(), "{} creep t={t}: {v} vs {o}\n{:?}", m.code, m.descriptor());
        }
        if let Ok(w) = creep_ml(m, t) {
            assert!((w - o).abs() <= 1e-5 * o.abs().max(1e-8), "{} creep ml t={t}: {w} vs {o}", m.code);
        }
    }
}

#[test]
fn narrowed_sets_match_oracle() {
    let mut r = rng(11);
    for code in ModelCode::ALL {
        for _ in 0..3 {
            let m = sample_narrowed_ok(code, &mut r).expect("sample");
            check(&m);
        }
    }
}

/// Thermodynamically admissible sets, which may carry poles.
#[test]
fn thermo_sets_with_poles_match_oracle() {
    let mut r = rng(5);
    let mut seen = [0usize; 3];
    for code in ModelCode::ALL {
        let (na, nb) = common::n_coeffs(code);
        let mut found = 0;
        for _ in 0..200_000 {
            let o = common::orders(&code.required_orders().iter().map(|&k| (k, r.gen_range(0.0..1.0))).collect::<Vec<_>>());
            let a: Vec<f64> = (0..na).map(|_| 10f64.powf(r.gen_range(-1.0..1.0))).collect();
            let b: Vec<f64> = (0..nb).map(|_| 10f64.powf(r.gen_range(-1.0..1.0))).collect();
            let Ok(m) = build_model(code, o, &a, &b) else { continue };
            if check_thermo(&m).overall == Verdict::ThermoFail {
                continue;
            }
            let (Ok(cs), Ok(ce)) = (classify(&m.phi_sigma), classify(&m.phi_epsilon)) else { continue };
            let poles = [cs.kind, ce.kind].iter().any(|k| *k != PoleKind::NoPoles);
            if !poles && found > 0 {
                continue;
            }
            for k in [cs.kind, ce.kind] {
                seen[k as usize] += 1;
            }
            check(&m);
            found += 1;
            if found == 3 {
                break;
            }
        }
    }
    assert!(seen[2] > 0, "no complex pair sampled: {seen:?}");
}

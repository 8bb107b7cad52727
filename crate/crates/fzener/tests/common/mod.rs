#![allow(dead_code)]

use fzener::constraints::{check_narrowed, Verdict};
use fzener::{build_model, FractionalOrders, ModelCode, ModelSpec, Order};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn orders(pairs: &[(Order, f64)]) -> FractionalOrders {
    let mut o = FractionalOrders::default();
    for &(k, v) in pairs {
        o.set(k, v);
    }
    o
}

pub fn case_one() -> ModelSpec {
    let o = orders(&[(Order::Alpha, 0.35), (Order::Beta, 0.55), (Order::Nu, 0.4)]);
    build_model(ModelCode::IPlusIdId, o, &[0.05, 1.5, 0.45], &[0.7, 0.95]).unwrap()
}

pub fn rp_case() -> ModelSpec {
    let o = orders(&[(Order::Alpha, 0.35), (Order::Beta, 0.55), (Order::Nu, 0.4)]);
    build_model(ModelCode::IPlusIdId, o, &[11.0, 28.4026942114927550, 20.27], &[7.0, 9.5]).unwrap()
}

pub fn ccp_case() -> ModelSpec {
    let o = orders(&[(Order::Alpha, 0.35), (Order::Beta, 0.55), (Order::Nu, 0.4)]);
    build_model(ModelCode::IPlusIdId, o, &[11.0, 15.0, 20.27], &[7.0, 9.5]).unwrap()
}

pub fn id_id() -> ModelSpec {
    let o = orders(&[(Order::Alpha, 0.3), (Order::Beta, 0.4), (Order::Mu, 0.2)]);
    build_model(ModelCode::IdId, o, &[1.0, 2.0], &[3.0, 4.0]).unwrap()
}

pub fn n_coeffs(code: ModelCode) -> (usize, usize) {
    match code {
        ModelCode::IdId | ModelCode::IdDdPlus => (2, 2),
        ModelCode::IidId | ModelCode::IddDdPlus | ModelCode::IPlusIdId | ModelCode::IddPlusDdPlus => (3, 2),
        ModelCode::IdIdd | ModelCode::IdDddPlus | ModelCode::IdIddPlus => (2, 3),
        _ => (3, 3),
    }
}

/// Rejection sample a parameter set whose report is NarrowedOK.
pub fn sample_narrowed_ok(code: ModelCode, rng: &mut StdRng) -> Option<ModelSpec> {
    let (na, nb) = n_coeffs(code);
    for _ in 0..1_000_000 {
        let o = orders(&code.required_orders().iter().map(|&r| (r, rng.gen_range(0.0..1.0))).collect::<Vec<_>>());
        let Ok(m) = build_model(code, o, &vec![1.0; na], &vec![1.0; nb]) else { continue };
        if !check_narrowed(&m).orders_admissible() {
            continue;
        }
        for _ in 0..20000 {
            let a: Vec<f64> = (0..na).map(|_| 10f64.powf(rng.gen_range(-2.0..2.0))).collect();
            let b: Vec<f64> = (0..nb).map(|_| 10f64.powf(rng.gen_range(-2.0..2.0))).collect();
            let m = build_model(code, o, &a, &b).unwrap();
            if check_narrowed(&m).overall == Verdict::NarrowedOK {
                return Some(m);
            }
        }
    }
    None
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

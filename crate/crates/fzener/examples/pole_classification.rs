//! Zeros of a s^{2 xi} + b s^xi + c as the middle coefficient sweeps through
//! the tangency value, plus the three reference rows.
use fzener::cli::reference_models;
use fzener::pole_finder::{classify, classify_quadratic};
use std::f64::consts::PI;

fn main() {
    let (a, c, xi) = (20.27f64, 11.0, 0.9);
    let tangent = 2.0 * (a * c).sqrt() * (xi * PI).cos().abs();
    println!("tangency b = {tangent:.12}");
    for b in [10.0, 15.0, 25.0, tangent, 30.0, 40.0] {
        let p = classify_quadratic(a, b, c, xi);
        println!("b = {b:>10.6}: {:?} rho = {:?} phi/pi = {:?}", p.kind, p.rho, p.phi.map(|x| x / PI));
    }
    for (name, m) in reference_models() {
        println!("{name:>7}: phi_sigma {}  phi_eps {}", classify(&m.phi_sigma).unwrap().to_json(), classify(&m.phi_epsilon).unwrap().to_json());
    }
}

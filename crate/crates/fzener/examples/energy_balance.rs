//! Stored energy and dissipated power for eps(t) = 1 - e^{-t}.
use fzener::cli::reference_models;
use fzener::energy::{energy_from_strain, History, HistoryKind};

fn main() -> fzener::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(500);
    let (_, m) = &reference_models()[0];
    let eps = History::sample(HistoryKind::Strain, 10.0, n, |t| -(-t).exp_m1())?;
    let e = energy_from_strain(m, &eps)?;
    for i in (0..=n).step_by(n / 10) {
        println!("t = {:>5.2}  P = {:>11.4e}  W = {:>11.4e}  Pdiss = {:>11.4e}", e.times[i], e.power[i], e.stored[i], e.dissipated[i]);
    }
    println!("max |P - dW/dt - Pdiss| / max |P| = {:.3e}", e.identity_residual / e.max_power());
    Ok(())
}

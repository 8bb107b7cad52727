//! Short- and long-time series against the computed curves.
use fzener::asymptotics::{creep_long, creep_short, relax_long, relax_short};
use fzener::cli::reference_models;
use fzener::response::{creep_at, relaxation_at};

fn main() -> fzener::Result<()> {
    let (_, m) = &reference_models()[0];
    let (rs, rl, cs, cl) = (relax_short(m)?, relax_long(m)?, creep_short(m)?, creep_long(m)?);
    println!("{:>8} {:>12} {:>12} {:>12} {:>12} {:>12} {:>12}", "t", "sigma", "short", "long", "eps", "short", "long");
    for k in -4..=4 {
        let t = 10f64.powi(k);
        println!(
            "{t:>8.0e} {:>12.5e} {:>12.5e} {:>12.5e} {:>12.5e} {:>12.5e} {:>12.5e}",
            relaxation_at(m, t)?,
            rs.eval(t),
            rl.eval(t),
            creep_at(m, t)?,
            cs.eval(t),
            cl.eval(t)
        );
    }
    Ok(())
}

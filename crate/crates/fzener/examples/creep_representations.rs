//! Creep compliance by the generic cut integral, the split form and the
//! Mittag-Leffler sum.
use fzener::cli::reference_models;
use fzener::response::{creep_integral_at, creep_ml, creep_stable_at};

fn main() -> fzener::Result<()> {
    let (_, m) = &reference_models()[0];
    println!("{:>10} {:>22} {:>22} {:>22}", "t", "integral", "split", "mittag-leffler");
    for k in -2..=2 {
        let t = 10f64.powi(k);
        let (a, b, c) = (creep_integral_at(m, t)?, creep_stable_at(m, t)?, creep_ml(m, t)?);
        println!("{t:>10.1e} {a:>22.15e} {b:>22.15e} {c:>22.15e}");
    }
    Ok(())
}

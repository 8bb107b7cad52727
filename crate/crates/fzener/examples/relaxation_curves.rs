//! Relaxation modulus of the three reference rows, split into cut integral
//! and pole contribution.
use fzener::cli::reference_models;
use fzener::response::{relaxation, TimeGrid};

fn main() -> fzener::Result<()> {
    let grid = TimeGrid::log(1e-2, 1e2, 13);
    for (name, m) in reference_models() {
        let c = relaxation(&m, &grid)?;
        println!("{name} ({:?})", c.classification.kind);
        let b = c.branch_values.as_ref().unwrap();
        for i in 0..c.times.len() {
            println!("  t = {:>9.3e}  sigma = {:>13.6e}  cut = {:>13.6e}  pole = {:>13.6e}", c.times[i], c.values[i], b.np[i], b.branch[i]);
        }
        let flips = c.values.windows(2).filter(|w| w[0].signum() != w[1].signum()).count();
        println!("  sign changes: {flips}");
    }
    Ok(())
}

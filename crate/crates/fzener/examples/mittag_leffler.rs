//! e_{xi,zeta,lambda}(t) by series and by its integral representation.
use fzener::mittag_leffler::{ml_big_e, ml_e, ml_e_integral};

fn main() -> fzener::Result<()> {
    println!("E_1,1(1) = {}", ml_big_e(1.0, 1.0, 1.0)?);
    println!("E_1/2,1(-1) = {}", ml_big_e(0.5, 1.0, -1.0)?);
    for &(xi, zeta, lam) in &[(0.9, 0.9, 1.0), (0.5, 1.0, 2.0), (0.3, 1.2, 0.5)] {
        for t in [0.1, 1.0, 10.0] {
            let a = ml_e(xi, zeta, lam, t)?;
            let b = ml_e_integral(xi, zeta, lam, t)?;
            println!("xi={xi} zeta={zeta} lambda={lam} t={t:>5}: {a:>20.14e} {b:>20.14e} diff {:.1e}", (a - b).abs());
        }
    }
    Ok(())
}

mod common;

use fzener::constraints::{check_narrowed, k_complex, K_closed_form, K_generic, K_nonneg_scan, LogGrid, Verdict};
use fzener::ModelCode;

#[test]
fn narrowed_sets_have_nonnegative_k_and_matching_forms() {
    let mut rng = common::rng(7);
    for code in ModelCode::ALL {
        let mut found = 0;
        for _ in 0..10 {
            let Some(m) = common::sample_narrowed_ok(code, &mut rng) else { continue };
            found += 1;
            assert_eq!(check_narrowed(&m).overall, Verdict::NarrowedOK);
            let scan = K_nonneg_scan(&m, &LogGrid::default());
            assert!(scan.nonnegative, "{code}: {:?} {:?}", scan, m.descriptor());
            for k in 0..100 {
                let rho = 10f64.powf(-4.0 + 8.0 * k as f64 / 99.0);
                let (g, c, z) = (K_generic(&m, rho), K_closed_form(&m, rho), k_complex(&m, rho));
                let (_, mag) = fzener::constraints::k_terms(&m, rho);
                if g.abs() > mag * 1e-14 {
                    assert!((g - c).abs() <= 1e-10 * g.abs().max(1e-4 * mag), "{code} rho={rho}: {g} vs {c}");
                }
                assert!((g - z).abs() <= 1e-12 * mag, "{code} complex form");
            }
        }
        eprintln!("{code}: {found} sets");
        assert_eq!(found, 10, "{code}");
    }
}

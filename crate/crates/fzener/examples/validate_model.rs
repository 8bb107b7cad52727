//! Restriction report and K scan for a model read from JSON (or a built-in one).
use fzener::constraints::{check_narrowed, K_nonneg_scan, LogGrid};
use fzener::ModelDescriptor;

const DEFAULT: &str = r#"{"code":"I+ID.ID","orders":{"alpha":0.35,"beta":0.55,"nu":0.4},"a":[0.05,1.5,0.45],"b":[0.7,0.95]}"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = match std::env::args().nth(1) {
        Some(p) => std::fs::read_to_string(p)?,
        None => DEFAULT.to_string(),
    };
    let m = ModelDescriptor::from_json(&text)?.build()?;
    let rep = check_narrowed(&m);
    for q in &rep.inequalities {
        let op = if q.strict { "<" } else { "<=" };
        println!("{:<8} {:<28} {:>12.5e} {op:>2} {:<12.5e} {}", format!("{:?}", q.group), q.id, q.lhs, q.rhs, if q.satisfied { "ok" } else { "FAIL" });
    }
    println!("verdict: {:?}", rep.overall);
    let scan = K_nonneg_scan(&m, &LogGrid::default());
    println!("K scan: nonnegative = {}, first violation = {:?}", scan.nonnegative, scan.first_violation);
    Ok(())
}

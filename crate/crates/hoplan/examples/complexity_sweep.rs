//! Closed-form size of the handover graph as the relaxation period shrinks:
//! V = 2 + k·n and E = k²(n−1) + 2k when all k satellites are always
//! visible, with the solver cost modeled as E + V·log2(V).
//!
//! Run with: `cargo run --example complexity_sweep`

use hoplan::eval::ComplexityReport;

fn main() {
    let k = 1_584; // all Starlink Phase I satellites
    let horizon_s = 3_600.0_f64;

    println!("k = {k}, horizon = {horizon_s} s");
    println!("lambda      n          V            E          ops");
    for lambda_s in [120.0, 150.0, 180.0, 300.0, 450.0, 900.0] {
        let n = (horizon_s / (2.0 * lambda_s)).round() as usize;
        let r = ComplexityReport::uniform(k, n);
        println!(
            "{lambda_s:>6.0}  {n:>5}  {:>9}  {:>11}  {:>11.4e}",
            r.v, r.e, r.op_estimate
        );
    }

    // Even the densest sweep point stays comfortably inside interactive
    // budgets: ~35M edge relaxations plus a V log V heap term.
    let worst = ComplexityReport::uniform(k, 15);
    println!();
    println!(
        "worst case above: V = {}, E = {}, ops = {:.3e}",
        worst.v, worst.e, worst.op_estimate
    );
}

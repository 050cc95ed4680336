//! Scans every admissible alpha in F_25 for d = 2 and prints the rank statistics.

use twistlab::scan::{self, ScanOptions};

fn main() -> twistlab::Result<()> {
    let opts = ScanOptions { ells: vec![3, 7], ..ScanOptions::default() };
    let stats = scan::scan_family(5, 2, 2, &opts)?;
    println!("|U| = {}, N = {}", stats.u_size, stats.degree);
    println!("rank histogram {:?}", stats.rank_histogram);
    println!("eps: +1 x{}, -1 x{}", stats.eps_distribution.plus, stats.eps_distribution.minus);
    println!("average rank {}, extra vanishing in {} twists", stats.average_rank, stats.v_n);
    for (ell, t) in &stats.per_ell {
        println!("mod {ell}: extra-vanishing frequency {}", t.frequency);
    }
    let report = scan::average_rank_report(&stats);
    println!("average-rank report: {}", serde_json::to_string(&report)?);
    Ok(())
}

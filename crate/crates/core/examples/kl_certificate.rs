//! Katz-Lefschetz certificates for f_d = t^d - dt - 1 next to the arithmetic criterion.

use twistlab::klcert::{certify_fd, lemma_predicate};

fn main() -> twistlab::Result<()> {
    for p in [5u32, 7] {
        for d in 2..=10usize {
            let cert = certify_fd(p, d)?;
            println!(
                "p = {p}, d = {d:>2}: lemma {:<5} verdict {:?} condition {:?} witness {}",
                lemma_predicate(p as u64, d as u64),
                cert.verdict,
                cert.condition,
                serde_json::to_string(&cert.witness)?
            );
        }
    }
    Ok(())
}

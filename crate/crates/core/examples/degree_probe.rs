//! Recovers the L-degree of E_{2,alpha} from trace sums alone.

use twistlab::fibration::TwistFamily;
use twistlab::galois::Field;
use twistlab::lfun;

fn main() -> twistlab::Result<()> {
    let f = Field::new(5, 1)?;
    for a in [0u64, 1, 2] {
        let fam = TwistFamily::twisted_legendre(&f, 2, f.elem(a)?)?;
        let probe = lfun::probe_degree(&fam, &f, 4)?;
        println!(
            "alpha = {a}: conductor-based N = {:?}, traces {:?}, consistent (N, eps) {:?}",
            probe.classified_n, probe.traces, probe.consistent
        );
    }
    Ok(())
}

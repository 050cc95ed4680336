//! L-polynomials of the twists E_{2,alpha}: (t^2 - 2t - 1 - alpha) y^2 = x(x+1)(x-t) over F_5.

use twistlab::fibration::TwistFamily;
use twistlab::galois::Field;
use twistlab::lfun;

fn main() -> twistlab::Result<()> {
    let f = Field::new(5, 1)?;
    for alpha in f.elements() {
        let fam = match TwistFamily::twisted_legendre(&f, 2, alpha) {
            Ok(fam) => fam,
            Err(e) => {
                println!("alpha = {alpha}: {e}");
                continue;
            }
        };
        let l = lfun::l_polynomial(&fam, &f)?;
        let coeffs: Vec<String> = l.coeffs.iter().map(|c| c.to_string()).collect();
        println!(
            "alpha = {alpha}: N = {}, eps = {:+}, rank = {}, L = [{}], traces {:?}",
            l.degree(),
            l.eps(),
            l.analytic_rank(),
            coeffs.join(", "),
            l.provenance.traces_used
        );
        for place in fam.bad_set() {
            println!("    {}", serde_json::to_string(&place)?);
        }
    }
    Ok(())
}

//! Newton-identity L-polynomials against the truncated Euler product, for a
//! curve outside the Legendre family: y^2 = x^3 + t x + (t^2 + 1) over F_7.

use twistlab::fibration::{FamilySpec, TwistFamily};
use twistlab::lfun::{self, euler};

fn main() -> twistlab::Result<()> {
    let spec = FamilySpec { p: 7, n: 1, a: vec![0], b: vec![0, 1], c: vec![1, 0, 1], g: vec![1] };
    let fam = TwistFamily::from_spec(&spec)?;
    let f = fam.field().clone();
    println!("conductor degree {}", fam.conductor_degree());
    let l = lfun::l_polynomial(&fam, &f)?;
    let e = euler::euler_product(&fam, &f, l.degree())?;
    println!("newton {:?}", l.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>());
    println!("euler  {:?}", e.iter().map(|c| c.to_string()).collect::<Vec<_>>());
    println!("match: {}", e == l.coeffs);
    Ok(())
}

//! Exhaustive censuses of O(N, F_l) and their extra-vanishing densities.

use twistlab::ortho::{enumerate_group, ev_density, Form};

fn main() -> twistlab::Result<()> {
    for (n, ell) in [(2usize, 5u64), (3, 3), (3, 5), (3, 7), (4, 3)] {
        let c = enumerate_group(n, ell, None, false)?;
        let d = ev_density(&c);
        println!(
            "O({n}, F_{ell}): order {}, ev {} (O_1 {}, O_2 {}), density {}/{}, l * density = {:.4}, forced violations {}",
            c.order, c.ev.total, c.ev.o1, c.ev.o2, d.numerator, d.denominator, d.scaled_value, c.forced_violations
        );
    }
    // a non-split plane: x^2 + 2y^2 over F_5
    let form = Form { gram: vec![vec![1, 0], vec![0, 2]] };
    let c = enumerate_group(2, 5, Some(&form), false)?;
    println!("O(diag(1, 2), F_5): order {}", c.order);
    for k in &c.classes {
        println!("    {:<14} det {} {:?} x{}", k.display, k.det, k.stratum, k.count);
    }
    Ok(())
}

//! Arithmetic in F_{5^2}, polynomial factoring and embeddings.

use twistlab::galois::{Embedding, Field, Poly};

fn main() -> twistlab::Result<()> {
    let f = Field::new(5, 2)?;
    println!("F_{} with modulus {:?} (low degree first)", f.size(), f.modulus());
    let x = f.elem(7)?;
    println!("x = {x}, x^24 = {}, frobenius(x) = {}", f.pow(x, 24), f.frobenius(x));
    println!("chi(x) = {}, 1/x = {}", f.quadratic_character(x), f.inv(x).unwrap());

    // t^4 - 1 splits over F_5; t^2 - 2 only over F_25
    let base = Field::new(5, 1)?;
    let g = Poly::from_ints(&base, &[-1, 0, 0, 0, 1]);
    println!("factor({g}) = {:?}", g.factor()?.iter().map(|(p, e)| format!("({p})^{e}")).collect::<Vec<_>>());
    let h = Poly::from_ints(&base, &[-2, 0, 1]);
    println!("{h} irreducible over F_5: {}", h.is_irreducible());
    let emb = Embedding::new(&base, &f)?;
    let lifted = emb.apply_poly(&h);
    println!("roots of {h} in F_25: {:?}", lifted.roots());
    Ok(())
}

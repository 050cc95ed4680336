//! Caches an L-polynomial in a content-addressed store and shows that a
//! corrupted entry is quarantined on the next read.

use twistlab::fibration::TwistFamily;
use twistlab::galois::Field;
use twistlab::lfun::{self, LPolynomial};
use twistlab::store::{Store, StoreKey};

fn main() -> twistlab::Result<()> {
    let dir = std::env::temp_dir().join(format!("twistlab-example-{}", std::process::id()));
    let store = Store::open(&dir)?;
    let f = Field::new(5, 1)?;
    let key = StoreKey::new("lfun").param("p", 5).param("d", 2).param("alpha", 1);
    let l: LPolynomial = store.get_or_compute(&key, || {
        let fam = TwistFamily::twisted_legendre(&f, 2, f.elem(1)?)?;
        lfun::l_polynomial(&fam, &f)
    })?;
    println!("stored {} under {}", serde_json::to_string(&l)?, key.hash());
    let again = store.get::<LPolynomial>(&key)?.into_option();
    println!("read back identical: {}", again.as_ref() == Some(&l));

    let path = dir.join("objects").join(format!("{}.json", key.hash()));
    let text = std::fs::read_to_string(&path).map_err(|e| twistlab::Error::InvalidArgument(e.to_string()))?;
    std::fs::write(&path, text.replacen("\"-2\"", "\"-3\"", 1)).ok();
    match store.get::<LPolynomial>(&key) {
        Err(e) => println!("after tampering: {e}"),
        Ok(v) => println!("after tampering: {v:?}"),
    }
    println!("quarantined: {:?}", store.quarantined()?);
    std::fs::remove_dir_all(&dir).ok();
    Ok(())
}

//! Mod-3 extra vanishing over F_25 against the O(4, F_3) density.

use twistlab::ortho::enumerate_group;
use twistlab::scan::{chebotarev_compare, scan_family, ScanOptions};

fn main() -> twistlab::Result<()> {
    let stats = scan_family(5, 2, 2, &ScanOptions { ells: vec![3], ..ScanOptions::default() })?;
    let census = enumerate_group(4, 3, None, false)?;
    let r = chebotarev_compare(&stats, &census, 3)?;
    println!("empirical {} = {:.4} over {} twists", r.empirical_frequency, r.empirical_value, r.twists);
    println!("census    {} = {:.4}", r.predicted_density, r.predicted_value);
    println!("note: {}", r.caveat);
    Ok(())
}

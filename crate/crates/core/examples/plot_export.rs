//! CSV plot data for a scan (one row per alpha) and a census (one row per class).

use twistlab::export::{write_census_csv, write_family_csv};
use twistlab::ortho::enumerate_group;
use twistlab::scan::{scan_family, ScanOptions};

fn main() -> twistlab::Result<()> {
    let stats = scan_family(5, 2, 2, &ScanOptions { ells: vec![3], ..ScanOptions::default() })?;
    let out = std::io::stdout();
    write_family_csv(&stats, out.lock())?;
    println!();
    write_census_csv(&enumerate_group(3, 5, None, false)?, out.lock())?;
    Ok(())
}

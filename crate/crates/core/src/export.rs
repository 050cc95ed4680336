//! CSV views of scan and census results.

use std::io::Write;

use crate::error::Result;
use crate::ortho::OrthoCensus;
use crate::scan::FamilyStats;

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

/// One row per twist. Columns `mod<l>_charpoly`, `mod<l>_det`, `mod<l>_stratum`
/// follow for every `l` in the scan.
pub fn write_family_csv<W: Write>(stats: &FamilyStats, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let ells: Vec<u64> = stats.per_ell.keys().copied().collect();
    let mut header: Vec<String> = ["alpha", "N", "rank", "eps", "extra_vanishing", "beta", "coeffs"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    for l in &ells {
        header.push(format!("mod{l}_charpoly"));
        header.push(format!("mod{l}_det"));
        header.push(format!("mod{l}_stratum"));
    }
    w.write_record(&header)?;
    for r in &stats.records {
        let mut row = vec![
            r.alpha.to_string(),
            r.l.degree().to_string(),
            r.rank.to_string(),
            r.eps.to_string(),
            r.extra_vanishing.to_string(),
            r.beta.to_string(),
            join(&r.l.coeffs),
        ];
        for l in &ells {
            match r.mod_ell.get(l) {
                Some(m) => {
                    row.push(join(&m.charpoly));
                    row.push(m.det.to_string());
                    row.push(m.stratum.as_str().to_string());
                }
                None => row.extend([String::new(), String::new(), String::new()]),
            }
        }
        w.write_record(&row)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// One row per (characteristic polynomial, determinant) class.
pub fn write_census_csv<W: Write>(census: &OrthoCensus, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["charpoly", "display", "det", "stratum", "count"])?;
    for c in &census.classes {
        w.write_record([
            join(&c.charpoly),
            c.display.clone(),
            c.det.to_string(),
            c.stratum.as_str().to_string(),
            c.count.to_string(),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_scan_writes_header_only() {
        let stats = FamilyStats::from_records(5, 1, 2, 4, Vec::new());
        let mut buf = Vec::new();
        write_family_csv(&stats, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "alpha,N,rank,eps,extra_vanishing,beta,coeffs\n");
    }

    #[test]
    fn census_rows_sum_to_order() {
        let census = crate::ortho::enumerate_group(2, 5, None, false).unwrap();
        let mut buf = Vec::new();
        write_census_csv(&census, &mut buf).unwrap();
        let mut r = csv::Reader::from_reader(&buf[..]);
        let total: u64 = r.records().map(|row| row.unwrap()[4].parse::<u64>().unwrap()).sum();
        assert_eq!(total, census.order);
    }
}

//! Acceptance criteria 1 to 11. Prints one `[PASS]`/`[FAIL]` line each and
//! exits non-zero if any criterion fails.

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use twistlab::fibration::{clear_sum_cache, Kernel, TwistFamily};
use twistlab::galois::{Field, Poly};
use twistlab::klcert::{certify_fd, lemma_predicate, Verdict};
use twistlab::lfun::{self, euler, weil_check, LPolynomial};
use twistlab::ortho::{determinant, enumerate_group, Matrix, OrthoCensus};
use twistlab::scan::{self, chebotarev_compare, parameter_set, FamilyStats, ScanOptions};

/// Relative tolerance on `|g| / Q - 1` for inverse roots.
const WEIL_TOL: f64 = 1e-6;
/// Bound on `l |O^ev| / |O|` for `N = 3`.
const EV_CONSTANT: u64 = 4;
const LEMMA_PRIMES: [u32; 4] = [5, 7, 11, 13];

struct Outcome {
    pass: bool,
    detail: String,
    artifact: Value,
}

fn outcome(pass: bool, detail: impl Into<String>, artifact: Value) -> Outcome {
    Outcome { pass, detail: detail.into(), artifact }
}

fn census(n: usize, ell: u64) -> OrthoCensus {
    enumerate_group(n, ell, None, true).expect("census")
}

fn neg(a: &Matrix, ell: u64) -> Matrix {
    a.iter().map(|r| r.iter().map(|&x| (ell - x) % ell).collect()).collect()
}

/// `det(t I - A)` via the determinant, independent of the census charpoly.
fn det_t_minus(a: &Matrix, t: u64, ell: u64) -> u64 {
    let n = a.len();
    let m: Matrix = (0..n)
        .map(|i| (0..n).map(|j| (if i == j { t } else { 0 } + ell - a[i][j]) % ell).collect())
        .collect();
    determinant(&m, ell)
}

fn first_censuses() -> Vec<OrthoCensus> {
    let mut v: Vec<OrthoCensus> = [3, 5, 7].iter().map(|&l| census(3, l)).collect();
    v.extend([3, 5, 7, 11, 13].iter().map(|&l| census(2, l)));
    v
}

fn criterion_1(cs: &[OrthoCensus]) -> Outcome {
    let mut checked = 0u64;
    let mut bad = 0u64;
    for c in cs {
        for a in c.elements.as_ref().unwrap() {
            if determinant(&neg(a, c.ell), c.ell) == c.ell - 1 {
                checked += 1;
                // det(1 - A) = det(I - A)
                bad += u64::from(det_t_minus(a, 1, c.ell) != 0);
            }
        }
        bad += c.forced_violations;
    }
    let summary: Vec<Value> = cs
        .iter()
        .map(|c| json!({"N": c.n, "ell": c.ell, "order": c.order, "forced_checked": c.forced_checked}))
        .collect();
    outcome(
        bad == 0 && checked > 0,
        format!("{checked} elements with det(-A) = -1, {bad} violations"),
        json!(summary),
    )
}

fn criterion_2(cs: &[OrthoCensus]) -> Outcome {
    // pointwise: t^N P(1/t) = det(-A) P(t) with P(t) = det(I - tA) = t^N det(1/t I - A)
    let mut bad = 0u64;
    let mut total = 0u64;
    for c in cs {
        let ell = c.ell;
        let n = c.n as u32;
        for a in c.elements.as_ref().unwrap() {
            total += 1;
            let dm = determinant(&neg(a, ell), ell);
            let p_at = |t: u64| -> u64 {
                if t == 0 {
                    return 1;
                }
                let inv = twistlab::modl::inv_mod(t, ell).unwrap();
                twistlab::modl::pow_mod(t, n as u64, ell) * det_t_minus(a, inv, ell) % ell
            };
            let ok = (1..ell).all(|t| {
                let inv = twistlab::modl::inv_mod(t, ell).unwrap();
                let lhs = twistlab::modl::pow_mod(t, n as u64, ell) * p_at(inv) % ell;
                lhs == dm * p_at(t) % ell
            });
            bad += u64::from(!ok);
        }
        bad += c.fe_violations;
    }
    outcome(bad == 0, format!("{total} elements, {bad} violations"), json!({"elements": total}))
}

fn criterion_3(cs: &[OrthoCensus]) -> Outcome {
    let mut rows = Vec::new();
    let mut pass = true;
    let mut detail = Vec::new();
    for c in cs.iter().filter(|c| c.n == 3) {
        let scaled = Ratio::new(c.ev.total * c.ell, c.order);
        pass &= scaled <= Ratio::from_integer(EV_CONSTANT);
        detail.push(format!("l={}: {}", c.ell, scaled));
        rows.push(json!({"ell": c.ell, "ev": c.ev.total, "order": c.order, "scaled": scaled.to_string()}));
    }
    outcome(pass, format!("l|O^ev|/|O| = {} (bound {EV_CONSTANT})", detail.join(", ")), json!(rows))
}

fn scan(p: u32, d: usize, n: u32, ells: &[u64]) -> FamilyStats {
    let opts = ScanOptions { ells: ells.to_vec(), ..ScanOptions::default() };
    scan::scan_family(p, d, n, &opts).expect("scan")
}

/// Exact checks on an L-polynomial, written out independently of `validate`.
fn exact_ok(l: &LPolynomial) -> bool {
    let n = l.coeffs.len() - 1;
    let q = BigInt::from(l.q);
    let Some(eps) = l.eps else { return false };
    let eps = BigInt::from(eps);
    let fe = (0..=n).all(|j| {
        let e = n as i64 - 2 * j as i64;
        // c_{N-j} Q^{max(0,-e)} = eps c_j Q^{max(0,e)}
        let (l_side, r_side) = if e >= 0 {
            (l.coeffs[n - j].clone(), &eps * &l.coeffs[j] * q.pow(e as u32))
        } else {
            (&l.coeffs[n - j] * q.pow((-e) as u32), &eps * &l.coeffs[j])
        };
        l_side == r_side
    });
    l.coeffs[0].is_one() && fe && l.coeffs[n] == &eps * q.pow(n as u32) && weil_check(l, WEIL_TOL).unwrap_or(false)
}

fn criterion_4(scans: &[FamilyStats]) -> Outcome {
    let mut total = 0;
    let mut bad = 0;
    for s in scans {
        for r in &s.records {
            total += 1;
            bad += usize::from(!exact_ok(&r.l));
        }
    }
    let sizes: Vec<usize> = scans.iter().map(|s| s.u_size).collect();
    outcome(
        bad == 0 && total > 0,
        format!("{total} twists (|U| = {sizes:?}), {bad} failures"),
        json!(scans),
    )
}

fn criterion_5() -> Outcome {
    let f = Field::new(5, 1).unwrap();
    let mut rows = Vec::new();
    let mut pass = true;
    let mut compared = 0;
    for alpha in f.elements() {
        let fam = match TwistFamily::twisted_legendre(&f, 2, alpha) {
            Ok(fam) => fam,
            Err(twistlab::Error::NotSquarefree) => continue,
            Err(e) => panic!("{e}"),
        };
        let l = lfun::l_polynomial(&fam, &f).unwrap();
        let e = euler::euler_product(&fam, &f, l.degree()).unwrap();
        compared += 1;
        pass &= e == l.coeffs;
        rows.push(json!({"alpha": alpha.0, "newton": l, "euler": e.iter().map(|c| c.to_string()).collect::<Vec<_>>()}));
    }
    outcome(pass && compared >= 4, format!("{compared} twists compared"), json!(rows))
}

fn criterion_6() -> Outcome {
    let mut pass = true;
    let mut rows = Vec::new();
    for (p, d) in [(5u32, 2usize), (5, 12), (7, 2), (7, 4)] {
        let f = Field::new(p, 1).unwrap();
        let u = parameter_set(p, d, 1).unwrap();
        let mut degs = Vec::new();
        for &alpha in &u {
            let fam = TwistFamily::twisted_legendre(&f, d, alpha).unwrap();
            let cd = fam.conductor_degree();
            pass &= cd == 2 * d + 4;
            degs.push(cd);
        }
        pass &= !u.is_empty();
        // for d = 2 the degree is also fitted from traces alone
        if d == 2 {
            let fam = TwistFamily::twisted_legendre(&f, d, u[0]).unwrap();
            let probe = lfun::probe_degree(&fam, &f, 4).unwrap();
            pass &= probe.consistent.iter().any(|&(n, _)| n == 2 * d);
        }
        rows.push(json!({"p": p, "d": d, "alphas": u.iter().map(|a| a.0).collect::<Vec<_>>(), "conductor_degrees": degs}));
    }
    outcome(pass, "conductor_degree - 4 = 2d on (5,2), (5,12), (7,2), (7,4)", json!(rows))
}

/// Multiplicity of `1 - QT` in `L`, by exact division.
fn rank_by_division(l: &LPolynomial) -> usize {
    let q = BigInt::from(l.q);
    let mut c = l.coeffs.clone();
    let mut r = 0;
    loop {
        // divide by (1 - QT): b_k = c_k + Q b_{k-1}
        let mut b = Vec::with_capacity(c.len());
        let mut prev = BigInt::zero();
        for ck in &c[..c.len() - 1] {
            prev = ck + &q * &prev;
            b.push(prev.clone());
        }
        if c.len() < 2 || !(&c[c.len() - 1] + &q * &prev).is_zero() {
            return r;
        }
        c = b;
        r += 1;
    }
}

fn criterion_7(scans: &[FamilyStats]) -> Outcome {
    let mut total = 0;
    let mut bad = 0;
    for s in scans {
        for r in &s.records {
            total += 1;
            let rank = rank_by_division(&r.l);
            let forced = usize::from(r.eps == -1);
            bad += usize::from(rank != r.rank || rank % 2 != forced);
        }
    }
    outcome(bad == 0 && total > 0, format!("{total} twists, {bad} parity failures"), json!({"twists": total}))
}

fn criterion_8() -> Outcome {
    let f = Field::new(5, 1).unwrap();
    let fam = TwistFamily::legendre(&f, Poly::one(&f)).unwrap();
    let traces: Vec<i64> = (1..=4)
        .map(|m| lfun::trace_sum_with(&fam, &lfun::extension(&f, m).unwrap(), Kernel::Direct).unwrap())
        .collect();
    let pass = traces.iter().all(|&b| b == 0) && fam.conductor_degree() == 4 && fam.l_degree().ok() == Some(0);
    outcome(
        pass,
        format!("b_1..b_4 = {traces:?}, conductor degree {}", fam.conductor_degree()),
        json!({"traces": traces, "bad_set": fam.bad_set()}),
    )
}

fn criterion_9() -> Outcome {
    let mut exceptions = Vec::new();
    let mut lemma_true = 0;
    let mut rows = Vec::new();
    for p in LEMMA_PRIMES {
        for d in 2..=20usize {
            let lemma = lemma_predicate(p as u64, d as u64);
            let cert = certify_fd(p, d).unwrap();
            let ok = cert.verdict == Verdict::KatzLefschetz && cert.reverify();
            if lemma {
                lemma_true += 1;
                if !ok {
                    exceptions.push((p, d));
                }
            }
            rows.push(json!({"p": p, "d": d, "lemma": lemma, "verdict": cert.verdict, "condition": cert.condition}));
        }
    }
    outcome(
        exceptions.is_empty() && lemma_true > 0,
        format!("{lemma_true} pairs satisfy the lemma, exceptions {exceptions:?}"),
        json!(rows),
    )
}

fn criterion_10() -> Outcome {
    let stats = scan(5, 2, 2, &[3]);
    let c = enumerate_group(4, 3, None, false).unwrap();
    let report = chebotarev_compare(&stats, &c, 3).unwrap();
    let pass = report.degree == 4
        && report.twists == stats.u_size
        && !report.empirical_frequency.is_empty()
        && !report.predicted_density.is_empty()
        && report.caveat.contains("146");
    outcome(
        pass,
        format!(
            "empirical {} ({:.4}) vs census {} ({:.4})",
            report.empirical_frequency, report.empirical_value, report.predicted_density, report.predicted_value
        ),
        json!(report),
    )
}

fn run_all() -> Vec<Outcome> {
    clear_sum_cache();
    let cs = first_censuses();
    let scans = vec![scan(5, 2, 1, &[3]), scan(5, 2, 2, &[3])];
    vec![
        criterion_1(&cs),
        criterion_2(&cs),
        criterion_3(&cs),
        criterion_4(&scans),
        criterion_5(),
        criterion_6(),
        criterion_7(&scans),
        criterion_8(),
        criterion_9(),
        criterion_10(),
    ]
}

fn in_pool<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(workers).build().unwrap().install(f)
}

fn main() {
    let names = [
        "forced eigenvalue",
        "orthogonal functional equation",
        "extra-vanishing decay",
        "L-function exactness",
        "Euler-product oracle",
        "degree cross-check",
        "parity",
        "trivial L of the base curve",
        "lemma soundness",
        "Chebotarev comparison",
        "determinism",
    ];
    let first = in_pool(4, run_all);
    let second = in_pool(1, run_all);
    let bytes = |o: &[Outcome]| -> Vec<String> {
        o.iter().map(|x| serde_json::to_string_pretty(&x.artifact).unwrap()).collect()
    };
    let (a, b) = (bytes(&first), bytes(&second));
    let differing: Vec<usize> = (0..a.len()).filter(|&i| a[i] != b[i]).map(|i| i + 1).collect();
    let mut failed = 0;
    for (i, o) in first.iter().enumerate() {
        let ok = o.pass && second[i].pass;
        failed += usize::from(!ok);
        println!("[{}] {:>2}. {}: {}", if ok { "PASS" } else { "FAIL" }, i + 1, names[i], o.detail);
    }
    let det_ok = differing.is_empty();
    failed += usize::from(!det_ok);
    println!(
        "[{}] 11. {}: artifacts of 1-10 under 4 and 1 workers, differing {differing:?}",
        if det_ok { "PASS" } else { "FAIL" },
        names[10]
    );
    if failed > 0 {
        eprintln!("{failed} criteria failed");
        std::process::exit(1);
    }
}


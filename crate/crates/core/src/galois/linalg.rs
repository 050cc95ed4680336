use std::sync::Arc;

use super::field::{Elem, Field};
use super::poly::Poly;

/// Monic characteristic polynomial `det(yI - M)` via reduction to upper
/// Hessenberg form, valid over any field.
pub fn charpoly(field: &Arc<Field>, m: &[Vec<Elem>]) -> Poly {
    let f = &**field;
    let n = m.len();
    let mut h: Vec<Vec<Elem>> = m.to_vec();
    for j in 0..n.saturating_sub(2) {
        let Some(piv) = (j + 1..n).find(|&i| !h[i][j].is_zero()) else {
            continue;
        };
        if piv != j + 1 {
            h.swap(piv, j + 1);
            for row in h.iter_mut() {
                row.swap(piv, j + 1);
            }
        }
        let inv = f.inv(h[j + 1][j]).unwrap();
        for k in j + 2..n {
            let u = f.mul(h[k][j], inv);
            if u.is_zero() {
                continue;
            }
            for c in 0..n {
                let v = f.mul(u, h[j + 1][c]);
                h[k][c] = f.sub(h[k][c], v);
            }
            for row in h.iter_mut() {
                let v = f.mul(u, row[k]);
                row[j + 1] = f.add(row[j + 1], v);
            }
        }
    }
    // p_m = (y - h_mm) p_{m-1} - sum_{i<m} h_im (prod_{k=i+1..m} h_{k,k-1}) p_{i-1}
    let y = Poly::x(field);
    let mut p: Vec<Poly> = vec![Poly::one(field)];
    for mm in 0..n {
        let mut next = y
            .sub(&Poly::constant(field, h[mm][mm]))
            .mul(&p[mm]);
        let mut t = Elem::ONE;
        for i in (0..mm).rev() {
            t = f.mul(t, h[i + 1][i]);
            let c = f.mul(t, h[i][mm]);
            if !c.is_zero() {
                next = next.sub(&p[i].scale(c));
            }
        }
        p.push(next);
    }
    p.pop().unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn det_by_expansion(f: &Field, m: &[Vec<Elem>]) -> Elem {
        let n = m.len();
        if n == 0 {
            return Elem::ONE;
        }
        let mut acc = Elem::ZERO;
        for j in 0..n {
            let minor: Vec<Vec<Elem>> = m[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &v)| v).collect())
                .collect();
            let term = f.mul(m[0][j], det_by_expansion(f, &minor));
            acc = if j % 2 == 0 { f.add(acc, term) } else { f.sub(acc, term) };
        }
        acc
    }

    #[test]
    fn charpoly_matches_determinant_at_every_point() {
        let field = Field::new(7, 1).unwrap();
        let f = &*field;
        let m: Vec<Vec<Elem>> = [[0, 1, 3, 5], [2, 0, 0, 1], [6, 4, 0, 0], [1, 1, 1, 1]]
            .iter()
            .map(|r| r.iter().map(|&v| Elem(v)).collect())
            .collect();
        let cp = charpoly(&field, &m);
        assert_eq!(cp.degree(), Some(4));
        for y in f.elements() {
            let shifted: Vec<Vec<Elem>> = (0..4)
                .map(|i| {
                    (0..4)
                        .map(|j| {
                            let d = if i == j { y } else { Elem::ZERO };
                            f.sub(d, m[i][j])
                        })
                        .collect()
                })
                .collect();
            assert_eq!(cp.eval(y), det_by_expansion(f, &shifted));
        }
    }
}

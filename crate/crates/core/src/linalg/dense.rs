use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Smith normal form diagonal of a dense integer matrix, including zeros
/// for rank deficiency up to `min(rows, cols)`.
pub fn smith_invariants(mut m: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        // Smallest nonzero entry in the trailing block.
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !m[i][j].is_zero() && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else {
            diag.extend(std::iter::repeat_n(BigInt::zero(), rows.min(cols) - t));
            break;
        };
        m.swap(t, bi);
        for row in m.iter_mut() {
            row.swap(t, bj);
        }
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if m[i][t].is_zero() {
                    continue;
                }
                let q = m[i][t].div_floor(&m[t][t]);
                let (head, tail) = m.split_at_mut(i);
                for j in t..cols {
                    let d = &q * &head[t][j];
                    tail[0][j] -= d;
                }
                if !m[i][t].is_zero() {
                    clean = false;
                    if m[i][t].abs() < m[t][t].abs() {
                        m.swap(t, i);
                    }
                }
            }
            for j in t + 1..cols {
                if m[t][j].is_zero() {
                    continue;
                }
                let q = m[t][j].div_floor(&m[t][t]);
                for row in m.iter_mut().skip(t) {
                    let d = &q * &row[t];
                    row[j] -= d;
                }
                if !m[t][j].is_zero() {
                    clean = false;
                    if m[t][j].abs() < m[t][t].abs() {
                        for row in m.iter_mut() {
                            row.swap(t, j);
                        }
                    }
                }
            }
            if clean {
                break;
            }
        }
        diag.push(m[t][t].abs());
    }
    // Enforce the divisibility chain.
    let k = diag.len();
    for i in 0..k {
        for j in i + 1..k {
            let g = diag[i].gcd(&diag[j]);
            if g.is_zero() {
                continue;
            }
            let l = &diag[i] / &g * &diag[j];
            diag[i] = g;
            diag[j] = l;
        }
    }
    diag.sort_by(|x, y| match (x.is_zero(), y.is_zero()) {
        (true, false) => std::cmp::Ordering::Greater,
        (false, true) => std::cmp::Ordering::Less,
        _ => x.cmp(y),
    });
    diag
}

/// Exact determinant by fraction-free elimination.
pub fn bareiss_determinant(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else { return BigInt::zero() };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Basis of the integer kernel `{x : A x = 0}` of an `m × k` matrix.
pub fn integer_kernel(a: &[Vec<i64>], k: usize) -> Vec<Vec<i64>> {
    // Unimodular row reduction of [A^T | I]: rows whose left block vanishes
    // span the kernel.
    let m = a.len();
    let mut rows: Vec<(Vec<i128>, Vec<i128>)> = (0..k)
        .map(|j| {
            let left = (0..m).map(|i| a[i][j] as i128).collect();
            let mut right = vec![0i128; k];
            right[j] = 1;
            (left, right)
        })
        .collect();
    let mut r = 0;
    for c in 0..m {
        loop {
            let nz: Vec<usize> = (r..k).filter(|&i| rows[i].0[c] != 0).collect();
            if nz.is_empty() {
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| rows[i].0[c].abs()).unwrap();
            rows.swap(r, p);
            let mut done = true;
            for i in r + 1..k {
                let x = rows[i].0[c];
                if x == 0 {
                    continue;
                }
                let q = x.div_euclid(rows[r].0[c]);
                let (head, tail) = rows.split_at_mut(i);
                let piv = &head[r];
                let row = &mut tail[0];
                for (u, v) in row.0.iter_mut().zip(&piv.0) {
                    *u -= q * v;
                }
                for (u, v) in row.1.iter_mut().zip(&piv.1) {
                    *u -= q * v;
                }
                if row.0[c] != 0 {
                    done = false;
                }
            }
            if done {
                r += 1;
                break;
            }
        }
    }
    rows[r..].iter().map(|row| row.1.iter().map(|&x| x as i64).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[&[i64]]) -> Vec<Vec<BigInt>> {
        v.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn smith_examples() {
        let s = smith_invariants(big(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]));
        assert_eq!(s, [2, 6, 12].map(BigInt::from));
        let s = smith_invariants(big(&[&[1, 2], &[2, 4]]));
        assert_eq!(s, [1, 0].map(BigInt::from));
    }

    #[test]
    fn determinants() {
        assert_eq!(bareiss_determinant(&[vec![0, 1], vec![1, 0]]), BigInt::from(-1));
        assert_eq!(bareiss_determinant(&[vec![2, 0, 1], vec![1, 3, 2], vec![1, 1, 2]]), BigInt::from(6));
        assert_eq!(bareiss_determinant(&[vec![1, 2], vec![2, 4]]), BigInt::from(0));
    }

    #[test]
    fn kernels() {
        let ker = integer_kernel(&[vec![2, 4, 6]], 3);
        assert_eq!(ker.len(), 2);
        for v in &ker {
            assert_eq!(2 * v[0] + 4 * v[1] + 6 * v[2], 0);
        }
        // The kernel lattice is saturated: (-2, 1, 0) and (-3, 0, 1) must be reachable.
        let det = bareiss_determinant(&[ker[0].clone(), ker[1].clone(), vec![1, 0, 0]]);
        assert_eq!(det.abs(), BigInt::from(1));
    }
}

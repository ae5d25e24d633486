use std::collections::BTreeMap;

use num_integer::Integer;

use crate::error::{Error, Result};

/// Sparse integer vector: `(column, value)` pairs, strictly increasing
/// columns, no zero values.
pub type SparseVec = Vec<(u32, i64)>;

/// `x·u + y·w`, checked.
pub fn combine(x: i64, u: &[(u32, i64)], y: i64, w: &[(u32, i64)]) -> Result<SparseVec> {
    let mut out = Vec::with_capacity(u.len() + w.len());
    let (mut i, mut j) = (0, 0);
    let mul = |a: i64, b: i64| a.checked_mul(b).ok_or(Error::Overflow);
    while i < u.len() || j < w.len() {
        let (c, v) = match (u.get(i), w.get(j)) {
            (Some(&(cu, vu)), Some(&(cw, _))) if cu < cw => {
                i += 1;
                (cu, mul(x, vu)?)
            }
            (Some(&(cu, _)), Some(&(cw, vw))) if cw < cu => {
                j += 1;
                (cw, mul(y, vw)?)
            }
            (Some(&(cu, vu)), Some(&(_, vw))) => {
                i += 1;
                j += 1;
                (cu, mul(x, vu)?.checked_add(mul(y, vw)?).ok_or(Error::Overflow)?)
            }
            (Some(&(cu, vu)), None) => {
                i += 1;
                (cu, mul(x, vu)?)
            }
            (None, Some(&(cw, vw))) => {
                j += 1;
                (cw, mul(y, vw)?)
            }
            (None, None) => unreachable!(),
        };
        if v != 0 {
            out.push((c, v));
        }
    }
    Ok(out)
}

/// Row echelon basis of a sublattice of `Z^ncols`, built incrementally.
/// The pivot of a row is its smallest column; pivots are positive.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    ncols: usize,
    pivot_row: Vec<Option<u32>>,
    rows: Vec<SparseVec>,
}

impl Echelon {
    pub fn new(ncols: usize) -> Self {
        Echelon { ncols, pivot_row: vec![None; ncols], rows: Vec::new() }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn pivot(&self, col: usize) -> Option<&SparseVec> {
        self.pivot_row[col].map(|r| &self.rows[r as usize])
    }

    /// Adds a vector to the lattice; returns whether the rank grew.
    pub fn insert(&mut self, mut v: SparseVec) -> Result<bool> {
        loop {
            let Some(&(c, x)) = v.first() else { return Ok(false) };
            match self.pivot_row[c as usize] {
                None => {
                    if x < 0 {
                        v.iter_mut().for_each(|e| e.1 = -e.1);
                    }
                    self.pivot_row[c as usize] = Some(self.rows.len() as u32);
                    self.rows.push(v);
                    return Ok(true);
                }
                Some(r) => {
                    let p = &self.rows[r as usize];
                    let y = p[0].1;
                    if x % y == 0 {
                        v = combine(1, &v, -(x / y), p)?;
                    } else {
                        let e = x.extended_gcd(&y);
                        let (g, s, t) = (e.gcd, e.x, e.y);
                        let new_pivot = combine(s, &v, t, p)?;
                        let rest = combine(y / g, &v, -(x / g), p)?;
                        self.rows[r as usize] = new_pivot;
                        v = rest;
                    }
                }
            }
        }
    }

    /// Reduces `v` by the pivot rows as far as exact division allows.
    /// The result is zero exactly when `v` lies in the lattice.
    pub fn reduce(&self, v: &[(u32, i64)]) -> Result<SparseVec> {
        let mut acc: BTreeMap<u32, i64> = v.iter().copied().collect();
        let mut out = Vec::new();
        while let Some((c, x)) = acc.pop_first() {
            if x == 0 {
                continue;
            }
            match self.pivot(c as usize) {
                Some(p) if x % p[0].1 == 0 => {
                    let q = x / p[0].1;
                    for &(k, y) in &p[1..] {
                        let e = acc.entry(k).or_insert(0);
                        *e = e.checked_sub(q.checked_mul(y).ok_or(Error::Overflow)?).ok_or(Error::Overflow)?;
                    }
                }
                _ => out.push((c, x)),
            }
        }
        Ok(out)
    }

    pub fn contains(&self, v: &[(u32, i64)]) -> Result<bool> {
        let r = self.reduce(v)?;
        // A leftover entry at a pivot column can still hide a lattice vector
        // only if it is not divisible; echelon form makes that impossible.
        Ok(r.is_empty())
    }

    /// Invariant factors of the lattice basis (all rows), including ones.
    pub fn invariant_factors(&self) -> Result<Vec<num_bigint::BigInt>> {
        let mut units = 0usize;
        let mut hard: Vec<SparseVec> = Vec::new();
        let unit_cols: Vec<bool> = (0..self.ncols)
            .map(|c| self.pivot(c).is_some_and(|p| p[0].1 == 1))
            .collect();
        for row in &self.rows {
            if row[0].1 == 1 {
                units += 1;
            } else {
                hard.push(row.clone());
            }
        }
        let mut factors = vec![num_bigint::BigInt::from(1); units];
        if hard.is_empty() {
            return Ok(factors);
        }
        // Clear unit-pivot columns from the remaining rows; what is left is
        // the Schur complement, whose Smith form supplies the other factors.
        let mut cleaned = Vec::new();
        for row in hard {
            let mut acc: BTreeMap<u32, i64> = row.into_iter().collect();
            let mut keep = Vec::new();
            while let Some((c, x)) = acc.pop_first() {
                if x == 0 {
                    continue;
                }
                if unit_cols[c as usize] {
                    let p = self.pivot(c as usize).unwrap();
                    for &(k, y) in &p[1..] {
                        let e = acc.entry(k).or_insert(0);
                        *e = e.checked_sub(x.checked_mul(y).ok_or(Error::Overflow)?).ok_or(Error::Overflow)?;
                    }
                } else {
                    keep.push((c, x));
                }
            }
            cleaned.push(keep);
        }
        let mut cols: Vec<u32> = cleaned.iter().flat_map(|r| r.iter().map(|e| e.0)).collect();
        cols.sort_unstable();
        cols.dedup();
        let dense: Vec<Vec<num_bigint::BigInt>> = cleaned
            .iter()
            .map(|r| {
                let mut v = vec![num_bigint::BigInt::from(0); cols.len()];
                for &(c, x) in r {
                    v[cols.binary_search(&c).unwrap()] = x.into();
                }
                v
            })
            .collect();
        factors.extend(smith_invariants_nonzero(dense));
        Ok(factors)
    }

    /// Canonical Hermite normal form of the lattice (rows sorted by pivot,
    /// entries above each pivot reduced into `[0, pivot)`).
    pub fn hermite(&self) -> Result<Vec<SparseVec>> {
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&r| std::cmp::Reverse(self.rows[r][0].0));
        // `done` stays sorted by ascending pivot; reducing by a row only
        // touches columns to the right of its pivot.
        let mut done: Vec<SparseVec> = Vec::new();
        for r in order {
            let mut row = self.rows[r].clone();
            for q in done.iter() {
                let c = q[0].0;
                let Some(&(_, x)) = row.iter().find(|e| e.0 == c) else { continue };
                let k = x.div_euclid(q[0].1);
                if k != 0 {
                    row = combine(1, &row, -k, q)?;
                }
            }
            done.insert(0, row);
        }
        Ok(done)
    }
}

fn smith_invariants_nonzero(m: Vec<Vec<num_bigint::BigInt>>) -> Vec<num_bigint::BigInt> {
    super::dense::smith_invariants(m).into_iter().filter(|x| *x != num_bigint::BigInt::from(0)).collect()
}

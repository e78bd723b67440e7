//! Exact linear algebra over the coefficient fields: sparse echelon forms
//! with deterministic pivoting (least key first), span/membership solving
//! with coordinate tracking, kernel extraction, and a fraction-free Bareiss
//! rank for integer matrices.

use std::collections::BTreeMap;

use num::bigint::BigInt;
use num::{One, Zero};

use crate::scalar::{Field, Scalar};

/// A sparse vector over an ordered key space.
pub type SparseVec<K> = BTreeMap<K, Scalar>;

pub fn sv_add_assign<K: Ord + Clone>(v: &mut SparseVec<K>, k: K, c: Scalar) {
    if c.is_zero() {
        return;
    }
    match v.entry(k) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let s = e.get().checked_add(&c).expect("field mismatch");
            if s.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = s;
            }
        }
    }
}

fn sv_axpy<K: Ord + Clone>(target: &mut SparseVec<K>, coeff: &Scalar, src: &SparseVec<K>) {
    for (k, c) in src {
        sv_add_assign(target, k.clone(), coeff * c);
    }
}

/// Row echelon accumulator. Pivot rows are normalized to leading
/// coefficient 1 and keyed by their least nonzero coordinate, so the result
/// is independent of insertion schedule once fully reduced.
pub struct Echelon<K: Ord + Clone> {
    pub field: Field,
    rows: BTreeMap<K, ReducedRow<K>>,
}

struct ReducedRow<K: Ord + Clone> {
    vec: SparseVec<K>,
    /// expression of `vec` in terms of the inserted vectors (by index)
    combo: BTreeMap<usize, Scalar>,
}

impl<K: Ord + Clone> Echelon<K> {
    pub fn new(field: Field) -> Self {
        Echelon { field, rows: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduce `v` against the pivots; returns the residual and its
    /// expression in terms of previously inserted vectors.
    fn reduce(&self, mut v: SparseVec<K>) -> (SparseVec<K>, BTreeMap<usize, Scalar>) {
        let mut combo: BTreeMap<usize, Scalar> = BTreeMap::new();
        loop {
            let Some(lead) = v.keys().next().cloned() else { break };
            let Some(row) = self.rows.get(&lead) else { break };
            let c = v[&lead].clone();
            let minus = -c;
            sv_axpy(&mut v, &minus, &row.vec);
            for (i, rc) in &row.combo {
                let entry = combo.entry(*i).or_insert_with(|| self.field.zero());
                *entry = &*entry + &(&minus * rc);
            }
            debug_assert!(!v.contains_key(&lead));
        }
        combo.retain(|_, c| !c.is_zero());
        (v, combo)
    }

    /// Insert the `idx`-th vector. When it is independent the rank grows and
    /// `None` comes back; otherwise the return value expresses it as a
    /// combination of earlier inserted vectors.
    pub fn insert(&mut self, idx: usize, v: SparseVec<K>) -> Option<BTreeMap<usize, Scalar>> {
        let (mut residual, mut combo) = self.reduce(v);
        match residual.keys().next().cloned() {
            None => {
                // dependent: v = -combo
                for c in combo.values_mut() {
                    *c = -c.clone();
                }
                Some(combo)
            }
            Some(lead) => {
                let inv = residual[&lead].inverse().expect("nonzero leading coefficient");
                for c in residual.values_mut() {
                    *c = &*c * &inv;
                }
                for c in combo.values_mut() {
                    *c = &*c * &inv;
                }
                combo.insert(idx, inv);
                self.rows.insert(lead, ReducedRow { vec: residual, combo });
                None
            }
        }
    }

    /// Express `v` in terms of the inserted vectors, or `None` if `v` lies
    /// outside the span.
    pub fn express(&self, v: &SparseVec<K>) -> Option<BTreeMap<usize, Scalar>> {
        let (residual, mut combo) = self.reduce(v.clone());
        if !residual.is_empty() {
            return None;
        }
        for c in combo.values_mut() {
            *c = -c.clone();
        }
        combo.retain(|_, c| !c.is_zero());
        Some(combo)
    }

    pub fn contains(&self, v: &SparseVec<K>) -> bool {
        self.reduce(v.clone()).0.is_empty()
    }
}

/// Rank of a family of sparse vectors.
pub fn rank<K: Ord + Clone>(field: Field, rows: impl IntoIterator<Item = SparseVec<K>>) -> usize {
    let mut ech = Echelon::new(field);
    for (i, r) in rows.into_iter().enumerate() {
        ech.insert(i, r);
    }
    ech.rank()
}

/// Kernel basis of the linear map sending the `i`-th input basis vector to
/// `rows[i]`: every dependency among the rows, in deterministic reduced form.
pub fn kernel<K: Ord + Clone>(
    field: Field,
    rows: impl IntoIterator<Item = SparseVec<K>>,
) -> Vec<BTreeMap<usize, Scalar>> {
    let mut ech = Echelon::new(field);
    let mut out = Vec::new();
    for (i, r) in rows.into_iter().enumerate() {
        if let Some(mut combo) = ech.insert(i, r) {
            combo.insert(i, field.from_i64(-1));
            // normalize: leading (largest index) coefficient is -1 already;
            // rescale so the coefficient of the new index is 1
            let scale = field.from_i64(-1);
            for c in combo.values_mut() {
                *c = &*c * &scale;
            }
            combo.retain(|_, c| !c.is_zero());
            out.push(combo);
        }
    }
    out
}

/// Fully reduced row echelon form of a family of sparse vectors: pivots
/// normalized to 1 and cleared from every other row, sorted by pivot key.
/// Deterministic regardless of input order (it is the canonical reduced
/// basis of the span).
pub fn rref<K: Ord + Clone>(
    field: Field,
    rows: impl IntoIterator<Item = SparseVec<K>>,
) -> Vec<SparseVec<K>> {
    let mut ech = Echelon::new(field);
    for (i, r) in rows.into_iter().enumerate() {
        ech.insert(i, r);
    }
    let mut pivots: Vec<(K, SparseVec<K>)> = ech
        .rows
        .into_iter()
        .map(|(k, r)| (k, r.vec))
        .collect();
    // back-substitute: clear later pivots from earlier rows
    for i in (0..pivots.len()).rev() {
        let (pk, pv) = (pivots[i].0.clone(), pivots[i].1.clone());
        for (_, row) in pivots.iter_mut().take(i) {
            if let Some(c) = row.get(&pk).cloned() {
                let minus = -c;
                sv_axpy(row, &minus, &pv);
            }
        }
    }
    pivots.into_iter().map(|(_, r)| r).collect()
}

/// Fraction-free Bareiss elimination rank for integer matrices; exact, no
/// rationals formed along the way.
pub fn bareiss_rank(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut prev = BigInt::one();
    let mut rank = 0usize;
    let mut row = 0usize;
    for col in 0..cols {
        let Some(pr) = (row..rows).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(row, pr);
        for r in row + 1..rows {
            for c in col + 1..cols {
                let num = &m[row][col] * &m[r][c] - &m[r][col] * &m[row][c];
                debug_assert!((&num % &prev).is_zero());
                m[r][c] = num / &prev;
            }
            m[r][col] = BigInt::zero();
        }
        prev = m[row][col].clone();
        rank += 1;
        row += 1;
        if row == rows {
            break;
        }
    }
    rank
}

/// Least-squares slope of y against x with residual sum of squares.
/// Analysis-layer numerics; the algebraic core never calls this.
pub fn least_squares_slope(points: &[(f64, f64)]) -> Option<(f64, f64)> {
    let n = points.len() as f64;
    if points.len() < 2 {
        return None;
    }
    let sx: f64 = points.iter().map(|p| p.0).sum();
    let sy: f64 = points.iter().map(|p| p.1).sum();
    let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-12 {
        return None;
    }
    let slope = (n * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / n;
    let rss: f64 = points
        .iter()
        .map(|(x, y)| {
            let e = y - (slope * x + intercept);
            e * e
        })
        .sum();
    Some((slope, (rss / n).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    const Q: Field = Field::Rational;

    fn row(entries: &[(u32, i64)]) -> SparseVec<u32> {
        let mut v = SparseVec::new();
        for (k, c) in entries {
            sv_add_assign(&mut v, *k, Q.from_i64(*c));
        }
        v
    }

    #[test]
    fn rank_and_membership() {
        let rows = vec![row(&[(0, 1), (1, 2)]), row(&[(1, 1)]), row(&[(0, 2), (1, 5)])];
        assert_eq!(rank(Q, rows.clone()), 2);
        let mut ech = Echelon::new(Q);
        for (i, r) in rows.into_iter().enumerate() {
            ech.insert(i, r);
        }
        assert!(ech.contains(&row(&[(0, 3), (1, 1)])));
        assert!(!ech.contains(&row(&[(2, 1)])));
        let combo = ech.express(&row(&[(0, 1)])).unwrap();
        // reconstruct
        let mut check = SparseVec::new();
        let originals = [row(&[(0, 1), (1, 2)]), row(&[(1, 1)]), row(&[(0, 2), (1, 5)])];
        for (i, c) in &combo {
            sv_axpy(&mut check, c, &originals[*i]);
        }
        assert_eq!(check, row(&[(0, 1)]));
    }

    #[test]
    fn kernel_of_dependent_rows() {
        let rows = vec![row(&[(0, 1)]), row(&[(1, 1)]), row(&[(0, 1), (1, 1)])];
        let ker = kernel(Q, rows.clone());
        assert_eq!(ker.len(), 1);
        let combo = &ker[0];
        let mut check = SparseVec::new();
        for (i, c) in combo {
            sv_axpy(&mut check, c, &rows[*i]);
        }
        assert!(check.is_empty());
        assert_eq!(combo[&2], Q.one());
    }

    #[test]
    fn bareiss_agrees_with_field_rank() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let r = rng.random_range(1..6usize);
            let c = rng.random_range(1..6usize);
            let m: Vec<Vec<BigInt>> = (0..r)
                .map(|_| (0..c).map(|_| BigInt::from(rng.random_range(-3..=3i64))).collect())
                .collect();
            let sparse = m
                .iter()
                .map(|rw| {
                    let mut v = SparseVec::new();
                    for (j, e) in rw.iter().enumerate() {
                        if !e.is_zero() {
                            sv_add_assign(&mut v, j as u32, Q.from_bigint(e));
                        }
                    }
                    v
                })
                .collect::<Vec<_>>();
            assert_eq!(bareiss_rank(m), rank(Q, sparse));
        }
    }

    #[test]
    fn prime_field_rank() {
        let f5 = Field::Prime(5);
        let mk = |entries: &[(u32, i64)]| {
            let mut v = SparseVec::new();
            for (k, c) in entries {
                sv_add_assign(&mut v, *k, f5.from_i64(*c));
            }
            v
        };
        // second row is 5x the first mod 5 -> zero row
        let rows = vec![mk(&[(0, 1), (1, 2)]), mk(&[(0, 5), (1, 10)]), mk(&[(1, 1)])];
        assert_eq!(rank(f5, rows), 2);
    }

    #[test]
    fn slope_fit() {
        let pts: Vec<(f64, f64)> = (1..=10).map(|i| (i as f64, 3.0 * i as f64 + 1.0)).collect();
        let (slope, resid) = least_squares_slope(&pts).unwrap();
        assert!((slope - 3.0).abs() < 1e-9);
        assert!(resid < 1e-9);
    }
}

//! Exact rank computation by fraction-free Gaussian elimination over
//! arbitrary-precision integers.
//!
//! Rows are sparse `(column, coefficient)` lists. Elimination proceeds
//! column by column; at each column the pivot is the candidate row with the
//! smallest-magnitude leading coefficient (ties broken by original row
//! order), and every other candidate is replaced by the cross-multiplied
//! combination `(p/g)·w - (w/g)·p` with the row content divided out
//! afterwards. No fractions ever appear and row scaling preserves both the
//! rank and the row space, so the result is exact.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// A sparse integer row: strictly increasing column indices, nonzero
/// coefficients.
pub type SparseRow = Vec<(u32, BigInt)>;

/// Row-echelon form of an integer matrix, retaining the pivot rows.
#[derive(Debug, Default)]
pub struct Echelon {
    /// Pivot rows keyed by pivot (leading) column.
    pivots: BTreeMap<u32, SparseRow>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduce `row` against the pivot rows; the result is zero iff `row`
    /// lies in the row space.
    pub fn reduce(&self, mut row: SparseRow) -> SparseRow {
        normalize(&mut row);
        while let Some(&(lead, _)) = row.first() {
            match self.pivots.get(&lead) {
                Some(pivot) => row = eliminate(&row, pivot),
                None => break,
            }
        }
        row
    }

    /// Whether `row` lies in the row space of the eliminated matrix.
    pub fn contains(&self, row: SparseRow) -> bool {
        self.reduce(row).is_empty()
    }
}

/// Eliminate `rows` and return the echelon form. The rank is
/// `echelon.rank()`.
///
/// Within a column the eliminations against the pivot are independent and
/// run in parallel when the `parallel` feature is on; candidates are
/// re-bucketed in their original order, so the result is identical for
/// every thread count.
pub fn eliminate_rows(rows: Vec<SparseRow>) -> Echelon {
    // Bucket active rows by leading column. Each entry keeps its original
    // index so pivot ties are deterministic.
    let mut buckets: BTreeMap<u32, Vec<(usize, SparseRow)>> = BTreeMap::new();
    for (idx, mut row) in rows.into_iter().enumerate() {
        normalize(&mut row);
        if let Some(&(lead, _)) = row.first() {
            buckets.entry(lead).or_default().push((idx, row));
        }
    }
    let mut echelon = Echelon::default();
    while let Some((col, mut candidates)) = buckets.pop_first() {
        // Partial pivoting by smallest-magnitude leading coefficient.
        let pivot_at = candidates
            .iter()
            .enumerate()
            .min_by(|(_, (ia, ra)), (_, (ib, rb))| {
                ra[0].1.abs().cmp(&rb[0].1.abs()).then(ia.cmp(ib))
            })
            .map(|(i, _)| i)
            .expect("bucket is nonempty");
        let (_, pivot) = candidates.swap_remove(pivot_at);
        for (idx, reduced) in eliminate_batch(candidates, &pivot) {
            if let Some(&(lead, _)) = reduced.first() {
                buckets.entry(lead).or_default().push((idx, reduced));
            }
        }
        echelon.pivots.insert(col, pivot);
    }
    echelon
}

#[cfg(feature = "parallel")]
fn eliminate_batch(
    candidates: Vec<(usize, SparseRow)>,
    pivot: &SparseRow,
) -> Vec<(usize, SparseRow)> {
    use rayon::prelude::*;
    if candidates.len() < 8 {
        candidates
            .into_iter()
            .map(|(idx, row)| (idx, eliminate(&row, pivot)))
            .collect()
    } else {
        candidates
            .into_par_iter()
            .map(|(idx, row)| (idx, eliminate(&row, pivot)))
            .collect()
    }
}

#[cfg(not(feature = "parallel"))]
fn eliminate_batch(
    candidates: Vec<(usize, SparseRow)>,
    pivot: &SparseRow,
) -> Vec<(usize, SparseRow)> {
    candidates
        .into_iter()
        .map(|(idx, row)| (idx, eliminate(&row, pivot)))
        .collect()
}

/// Exact rank of a sparse integer matrix.
pub fn rank_of_rows(rows: Vec<SparseRow>) -> usize {
    eliminate_rows(rows).rank()
}

/// Cross-multiplied row elimination: both rows share the leading column;
/// returns `(p_lead/g)·row - (row_lead/g)·pivot` with content stripped.
fn eliminate(row: &SparseRow, pivot: &SparseRow) -> SparseRow {
    debug_assert_eq!(row[0].0, pivot[0].0);
    let g = row[0].1.gcd(&pivot[0].1);
    let a = &pivot[0].1 / &g; // multiplies `row`
    let b = &row[0].1 / &g; // multiplies `pivot`
    let mut out: SparseRow = Vec::with_capacity(row.len() + pivot.len());
    let mut i = 0;
    let mut j = 0;
    while i < row.len() || j < pivot.len() {
        let next = match (row.get(i), pivot.get(j)) {
            (Some((ci, vi)), Some((cj, vj))) if ci == cj => {
                let v = &a * vi - &b * vj;
                i += 1;
                j += 1;
                (*ci, v)
            }
            (Some((ci, vi)), Some((cj, _))) if ci < cj => {
                i += 1;
                (*ci, &a * vi)
            }
            (Some(_), Some((cj, vj))) => {
                j += 1;
                (*cj, -(&b * vj))
            }
            (Some((ci, vi)), None) => {
                i += 1;
                (*ci, &a * vi)
            }
            (None, Some((cj, vj))) => {
                j += 1;
                (*cj, -(&b * vj))
            }
            (None, None) => unreachable!(),
        };
        if !next.1.is_zero() {
            out.push(next);
        }
    }
    debug_assert!(out.first().map(|&(c, _)| c) != Some(row[0].0));
    strip_content(&mut out);
    out
}

/// Divide out the gcd of all coefficients and make the leading one positive.
fn strip_content(row: &mut SparseRow) {
    if row.is_empty() {
        return;
    }
    let mut g = BigInt::zero();
    for (_, v) in row.iter() {
        g = g.gcd(v);
        if g == BigInt::from(1) {
            break;
        }
    }
    let negate = row[0].1.is_negative();
    let one = BigInt::from(1);
    if g != one || negate {
        for (_, v) in row.iter_mut() {
            *v /= &g;
            if negate {
                *v = -std::mem::take(v);
            }
        }
    }
}

fn normalize(row: &mut SparseRow) {
    row.retain(|(_, v)| !v.is_zero());
    debug_assert!(row.windows(2).all(|w| w[0].0 < w[1].0));
    strip_content(row);
}

//! Exact rank of sparse matrices over the rationals.
//!
//! Rows are cleared of denominators and reduced by their integer content,
//! then eliminated fraction-free: a pivot step replaces `r` by
//! `p*r - a*r_p` followed by another content reduction, so every
//! intermediate entry stays an exact integer. Pivots are chosen by a
//! minimum-fill heuristic (sparsest row first, then the column with the
//! fewest live rows, preferring unit entries).

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::Rat;

pub type IntRow = Vec<(u32, BigInt)>;

/// Clear denominators and remove integer content; rank is unchanged by
/// scaling a row by a positive rational.
pub fn int_row_from_rat(row: &[(u32, Rat)]) -> IntRow {
    let mut lcm = BigInt::one();
    for (_, v) in row {
        lcm = lcm.lcm(v.denom());
    }
    let mut out: IntRow = row
        .iter()
        .filter(|(_, v)| !v.is_zero())
        .map(|(c, v)| (*c, v.numer() * (&lcm / v.denom())))
        .collect();
    out.sort_by_key(|(c, _)| *c);
    reduce_content(&mut out);
    out
}

fn reduce_content(row: &mut IntRow) {
    let mut g = BigInt::zero();
    for (_, v) in row.iter() {
        g = g.gcd(v);
        if g.is_one() {
            return;
        }
    }
    if g.is_zero() || g.is_one() {
        return;
    }
    for (_, v) in row.iter_mut() {
        *v = &*v / &g;
    }
}

/// `p*target - a*pivot` on sorted sparse rows, then content reduction.
fn eliminate(target: &IntRow, pivot: &IntRow, p: &BigInt, a: &BigInt) -> IntRow {
    let mut out = Vec::with_capacity(target.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    let p_is_one = p.is_one();
    while i < target.len() || j < pivot.len() {
        if j >= pivot.len() || (i < target.len() && target[i].0 < pivot[j].0) {
            let (c, v) = &target[i];
            out.push((*c, if p_is_one { v.clone() } else { p * v }));
            i += 1;
        } else if i >= target.len() || pivot[j].0 < target[i].0 {
            let (c, v) = &pivot[j];
            out.push((*c, -(a * v)));
            j += 1;
        } else {
            let (c, tv) = &target[i];
            let pv = &pivot[j].1;
            let v = if p_is_one { tv - a * pv } else { p * tv - a * pv };
            if !v.is_zero() {
                out.push((*c, v));
            }
            i += 1;
            j += 1;
        }
    }
    reduce_content(&mut out);
    out
}

/// Rank of the matrix whose rows are the given sparse integer rows.
pub fn rank_int_rows(rows: Vec<IntRow>) -> usize {
    let ncols = rows
        .iter()
        .flat_map(|r| r.iter().map(|(c, _)| *c as usize + 1))
        .max()
        .unwrap_or(0);
    let mut store: Vec<Option<IntRow>> = Vec::with_capacity(rows.len());
    for mut r in rows {
        r.retain(|(_, v)| !v.is_zero());
        store.push(if r.is_empty() { None } else { Some(r) });
    }
    // col -> live row ids (maintained lazily: stale ids are skipped)
    let mut col_rows: Vec<Vec<usize>> = vec![Vec::new(); ncols];
    let mut col_count: Vec<usize> = vec![0; ncols];
    let mut heap = BinaryHeap::new();
    for (i, r) in store.iter().enumerate() {
        if let Some(r) = r {
            for (c, _) in r {
                col_rows[*c as usize].push(i);
                col_count[*c as usize] += 1;
            }
            heap.push(Reverse((r.len(), i)));
        }
    }
    let mut rank = 0;
    while let Some(Reverse((nnz, i))) = heap.pop() {
        let Some(row) = store[i].as_ref() else { continue };
        if row.len() != nnz {
            continue; // stale entry; the current length was pushed separately
        }
        // pivot column: fewest live rows, unit entries preferred
        let mut best: Option<(usize, u32, BigInt)> = None;
        for (c, v) in row {
            let score = col_count[*c as usize] * 2 + usize::from(!v.abs().is_one());
            if best.as_ref().map_or(true, |(s, _, _)| score < *s) {
                best = Some((score, *c, v.clone()));
            }
        }
        let (_, pc, pv) = best.expect("live row is nonempty");
        rank += 1;
        let pivot = store[i].take().expect("checked above");
        for (c, _) in &pivot {
            col_count[*c as usize] -= 1;
        }
        let mut victims: Vec<usize> = col_rows[pc as usize]
            .iter()
            .copied()
            .filter(|&s| s != i && store[s].is_some())
            .collect();
        victims.sort_unstable();
        victims.dedup();
        col_rows[pc as usize].clear();
        for s in victims {
            let target = store[s].as_ref().unwrap();
            let Some(a) = target
                .iter()
                .find(|(c, _)| *c == pc)
                .map(|(_, v)| v.clone())
            else {
                continue; // already eliminated through a previous merge
            };
            let old = store[s].take().unwrap();
            for (c, _) in &old {
                col_count[*c as usize] -= 1;
            }
            let new_row = eliminate(&old, &pivot, &pv, &a);
            if !new_row.is_empty() {
                for (c, _) in &new_row {
                    let cu = *c as usize;
                    col_count[cu] += 1;
                    col_rows[cu].push(s);
                }
                heap.push(Reverse((new_row.len(), s)));
                store[s] = Some(new_row);
            }
        }
    }
    rank
}

/// Rank of a matrix given by rational rows.
pub fn rank_rat_rows(rows: &[Vec<(u32, Rat)>]) -> usize {
    rank_int_rows(rows.iter().map(|r| int_row_from_rat(r)).collect())
}

/// Rank of a matrix given by rational columns (the transpose has the same
/// rank).
pub fn rank_rat_cols(cols: &[Vec<(u32, Rat)>]) -> usize {
    rank_rat_rows(cols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar as _;
    use num_traits::FromPrimitive;

    fn r(n: i64) -> Rat {
        Rat::from_i64(n).unwrap()
    }

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn rank_of_identity_and_zero() {
        let rows: Vec<IntRow> = (0..5).map(|i| vec![(i, big(1))]).collect();
        assert_eq!(rank_int_rows(rows), 5);
        assert_eq!(rank_int_rows(vec![vec![], vec![]]), 0);
    }

    #[test]
    fn rank_detects_dependence() {
        // r2 = r0 + r1
        let rows = vec![
            vec![(0, big(1)), (1, big(2))],
            vec![(1, big(3)), (2, big(-1))],
            vec![(0, big(1)), (1, big(5)), (2, big(-1))],
        ];
        assert_eq!(rank_int_rows(rows), 2);
    }

    #[test]
    fn rank_with_rational_entries() {
        let rows = vec![
            vec![(0, Rat::from_ratio(1, 2)), (1, Rat::from_ratio(1, 3))],
            vec![(0, r(3)), (1, r(2))],
            vec![(0, r(1)), (1, r(1))],
        ];
        // row1 = 6 * row0, row2 independent
        assert_eq!(rank_rat_rows(&rows), 2);
    }

    #[test]
    fn rank_dense_small_vs_known() {
        // 3x3 with determinant zero but rank 2
        let rows = vec![
            vec![(0, big(2)), (1, big(4)), (2, big(6))],
            vec![(0, big(1)), (1, big(5)), (2, big(9))],
            vec![(0, big(3)), (1, big(9)), (2, big(15))],
        ];
        assert_eq!(rank_int_rows(rows), 2);
    }

    #[test]
    fn rank_is_orientation_independent() {
        let rows = vec![
            vec![(0, r(1)), (2, r(2))],
            vec![(1, r(1)), (2, r(-1))],
            vec![(0, r(1)), (1, r(2)), (2, r(0))],
        ];
        let cols = vec![
            vec![(0, r(1)), (2, r(1))],
            vec![(1, r(1)), (2, r(2))],
            vec![(0, r(2)), (1, r(-1)), (2, r(0))],
        ];
        assert_eq!(rank_rat_rows(&rows), rank_rat_cols(&cols));
    }
}

//! Exact cut norm and infinity-to-one norm by enumerating one side.
//!
//! For a fixed row vector the inner optimum over columns has a closed form,
//! so only `2^m` row choices are visited, in Gray-code order. The search is
//! split into chunks on the high bits and reduced in chunk order, so results
//! do not depend on the thread schedule.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

/// Default largest enumerated dimension.
pub const DEFAULT_EXACT_LIMIT: usize = 26;
/// Hard ceiling; masks are `u64` and chunk bookkeeping needs headroom.
const HARD_LIMIT: usize = 40;
const CHUNK_BITS: usize = 6;
/// Relative gap under which two candidate values count as tied.
const TIE_TOLERANCE: f64 = 1e-12;

/// Optimal `(S, T)` for the cut norm.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CutWitness {
    pub value: f64,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

/// Optimal sign vectors for the infinity-to-one norm.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignWitness {
    pub value: f64,
    pub x: Vec<i8>,
    pub y: Vec<i8>,
}

/// `a < b` in lexicographic order of the sorted index lists of two masks.
fn lex_less(a: u64, b: u64) -> bool {
    if a == b {
        return false;
    }
    let i = (a ^ b).trailing_zeros();
    let above = |m: u64| if i >= 63 { 0 } else { m >> (i + 1) };
    if a >> i & 1 == 1 {
        // a continues with i; b either stops (prefix, smaller) or continues above i
        above(b) != 0
    } else {
        above(a) == 0
    }
}

fn check_limit(m: usize, limit: usize) -> Result<()> {
    let limit = limit.min(HARD_LIMIT);
    if m > limit {
        return Err(Error::Capacity {
            what: "exact enumeration dimension (use grothendieck_bounds instead)",
            size: m,
            limit,
        });
    }
    Ok(())
}

#[derive(Clone, Copy)]
struct Candidate {
    value: f64,
    mask: u64,
    /// for the cut norm: whether the positive column sums were taken
    positive: bool,
}

/// Walks all `mask` in `0..2^m` in chunks; `step` maintains column sums.
///
/// `init(mask)` fills column sums for a chunk start, `flip(sums, row, now_set)`
/// applies one row toggle, and `score(sums, mask)` evaluates a state.
fn enumerate<S>(
    m: usize,
    n: usize,
    init: impl Fn(u64, &mut [f64]) + Sync,
    flip: impl Fn(&mut [f64], usize, bool) + Sync,
    score: S,
    better: impl Fn(&Candidate, &Candidate) -> bool + Sync,
) -> Candidate
where
    S: Fn(&[f64], u64) -> Candidate + Sync,
{
    let hi_bits = CHUNK_BITS.min(m);
    let lo_bits = m - hi_bits;
    let chunks: Vec<Candidate> = (0..1u64 << hi_bits)
        .into_par_iter()
        .map(|hi| {
            let base = hi << lo_bits;
            let mut sums = vec![0.0; n];
            init(base, &mut sums);
            let mut gray = 0u64;
            let mut best = score(&sums, base);
            for i in 1..(1u64 << lo_bits) {
                let bit = i.trailing_zeros() as usize;
                gray ^= 1 << bit;
                flip(&mut sums, bit, gray >> bit & 1 == 1);
                let cand = score(&sums, base | gray);
                if better(&cand, &best) {
                    best = cand;
                }
            }
            best
        })
        .collect();
    let mut best = chunks[0];
    for c in &chunks[1..] {
        if better(c, &best) {
            best = *c;
        }
    }
    best
}

fn oriented(a: &DenseMatrix, limit: usize) -> Result<(DenseMatrix, bool)> {
    if a.rows() <= limit.min(HARD_LIMIT) {
        Ok((a.clone(), false))
    } else if a.cols() <= limit.min(HARD_LIMIT) {
        Ok((a.transpose(), true))
    } else {
        check_limit(a.rows(), limit).map(|_| (a.clone(), false))
    }
}

/// `||A||_cut = max_{S,T} |sum_{s in S, t in T} a_st|`, with a maximizing pair.
///
/// Rows are enumerated (columns when only they fit under `limit`). Among
/// (near-)ties the lexicographically smallest row set is reported; `T` is the
/// set of strictly positive (or strictly negative) column sums.
pub fn cut_norm_exact(a: &DenseMatrix, limit: usize) -> Result<CutWitness> {
    let (work, transposed) = oriented(a, limit)?;
    let (m, n) = (work.rows(), work.cols());
    let tol = TIE_TOLERANCE * work.entry_l1().max(f64::MIN_POSITIVE);

    let init = |mask: u64, sums: &mut [f64]| {
        for s in 0..m {
            if mask >> s & 1 == 1 {
                for (c, v) in sums.iter_mut().zip(work.row(s)) {
                    *c += v;
                }
            }
        }
    };
    let flip = |sums: &mut [f64], s: usize, set: bool| {
        let sign = if set { 1.0 } else { -1.0 };
        for (c, v) in sums.iter_mut().zip(work.row(s)) {
            *c += sign * v;
        }
    };
    let score = |sums: &[f64], mask: u64| {
        let (mut pos, mut neg) = (0.0, 0.0);
        for &c in sums {
            if c > 0.0 {
                pos += c;
            } else {
                neg -= c;
            }
        }
        Candidate {
            value: pos.max(neg),
            mask,
            positive: pos >= neg,
        }
    };
    let better = |c: &Candidate, b: &Candidate| {
        if c.value > b.value + tol {
            true
        } else if (c.value - b.value).abs() <= tol {
            lex_less(c.mask, b.mask)
        } else {
            false
        }
    };
    let best = enumerate(m, n, init, flip, score, better);

    let rows: Vec<usize> = (0..m).filter(|&s| best.mask >> s & 1 == 1).collect();
    let mut sums = vec![0.0; n];
    for &s in &rows {
        for (c, v) in sums.iter_mut().zip(work.row(s)) {
            *c += v;
        }
    }
    let pos_cols: Vec<usize> = (0..n).filter(|&t| sums[t] > 0.0).collect();
    let neg_cols: Vec<usize> = (0..n).filter(|&t| sums[t] < 0.0).collect();
    let pos_val: f64 = pos_cols.iter().map(|&t| sums[t]).sum();
    let neg_val: f64 = -neg_cols.iter().map(|&t| sums[t]).sum::<f64>();
    let cols = if (pos_val - neg_val).abs() <= tol {
        let pm: u64 = pos_cols.iter().map(|&t| 1u64 << t.min(63)).sum();
        let nm: u64 = neg_cols.iter().map(|&t| 1u64 << t.min(63)).sum();
        if n <= 64 && lex_less(nm, pm) {
            neg_cols
        } else {
            pos_cols
        }
    } else if best.positive {
        pos_cols
    } else {
        neg_cols
    };
    let value = rows
        .iter()
        .map(|&s| cols.iter().map(|&t| work.get(s, t)).sum::<f64>())
        .sum::<f64>()
        .abs();
    Ok(if transposed {
        CutWitness {
            value,
            rows: cols,
            cols: rows,
        }
    } else {
        CutWitness { value, rows, cols }
    })
}

/// `||A||_{inf->1} = max_{x in {-1,1}^m, y in {-1,1}^n} x^T A y`.
///
/// The first row sign is fixed to `+1` (the objective is invariant under `x -> -x`).
pub fn infty_one_exact(a: &DenseMatrix, limit: usize) -> Result<SignWitness> {
    let (work, transposed) = oriented(a, limit)?;
    let (m, n) = (work.rows(), work.cols());
    // bit s of the mask (s >= 1) set means x_s = -1; row 0 stays +1
    let free = m - 1;

    let init = |mask: u64, sums: &mut [f64]| {
        sums.copy_from_slice(work.row(0));
        for s in 1..m {
            let sign = if mask >> (s - 1) & 1 == 1 { -1.0 } else { 1.0 };
            for (c, v) in sums.iter_mut().zip(work.row(s)) {
                *c += sign * v;
            }
        }
    };
    let flip = |sums: &mut [f64], bit: usize, set: bool| {
        let delta = if set { -2.0 } else { 2.0 };
        for (c, v) in sums.iter_mut().zip(work.row(bit + 1)) {
            *c += delta * v;
        }
    };
    let score = |sums: &[f64], mask: u64| Candidate {
        value: sums.iter().map(|c| c.abs()).sum(),
        mask,
        positive: true,
    };
    let better = |c: &Candidate, b: &Candidate| c.value > b.value;
    let best = enumerate(free, n, init, flip, score, better);

    let x: Vec<i8> = (0..m)
        .map(|s| if s > 0 && best.mask >> (s - 1) & 1 == 1 { -1 } else { 1 })
        .collect();
    let sums = work.matvec_transpose(&x.iter().map(|&v| v as f64).collect::<Vec<_>>());
    let y: Vec<i8> = sums.iter().map(|&c| if c >= 0.0 { 1 } else { -1 }).collect();
    let value = sums.iter().map(|c| c.abs()).sum();
    Ok(if transposed {
        SignWitness { value, x: y, y: x }
    } else {
        SignWitness { value, x, y }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Both sides enumerated; no closed-form inner step.
    fn brute_cut(a: &DenseMatrix) -> f64 {
        let (m, n) = (a.rows(), a.cols());
        let mut best: f64 = 0.0;
        for s in 0..1u32 << m {
            for t in 0..1u32 << n {
                let mut sum = 0.0;
                for i in 0..m {
                    for j in 0..n {
                        if s >> i & 1 == 1 && t >> j & 1 == 1 {
                            sum += a.get(i, j);
                        }
                    }
                }
                best = best.max(sum.abs());
            }
        }
        best
    }

    fn brute_infty_one(a: &DenseMatrix) -> f64 {
        let (m, n) = (a.rows(), a.cols());
        let mut best: f64 = 0.0;
        for s in 0..1u32 << m {
            for t in 0..1u32 << n {
                let mut sum = 0.0;
                for i in 0..m {
                    for j in 0..n {
                        let xi = if s >> i & 1 == 1 { -1.0 } else { 1.0 };
                        let yj = if t >> j & 1 == 1 { -1.0 } else { 1.0 };
                        sum += xi * yj * a.get(i, j);
                    }
                }
                best = best.max(sum.abs());
            }
        }
        best
    }

    #[test]
    fn lex_order_of_sets() {
        // {0} < {0,1} < {1}
        assert!(lex_less(0b01, 0b11));
        assert!(lex_less(0b11, 0b10));
        assert!(lex_less(0b01, 0b10));
        assert!(lex_less(0b00, 0b01));
        assert!(!lex_less(0b10, 0b10));
        // {0,2} < {1}
        assert!(lex_less(0b101, 0b010));
    }

    #[test]
    fn two_by_two_factor_four() {
        let a = DenseMatrix::from_rows(&[vec![1.0, -1.0], vec![-1.0, 1.0]]).unwrap();
        let cut = cut_norm_exact(&a, 26).unwrap();
        assert_eq!(cut.value, 1.0);
        assert_eq!(cut.rows, vec![0]);
        assert_eq!(cut.cols, vec![0]);
        assert_eq!(brute_cut(&a), 1.0);
        let inf = infty_one_exact(&a, 26).unwrap();
        assert_eq!(inf.value, 4.0);
        assert_eq!(inf.x, vec![1, -1]);
        assert_eq!(inf.y, vec![1, -1]);
    }

    #[test]
    fn all_ones() {
        let j = DenseMatrix::ones(5, 5);
        assert_eq!(cut_norm_exact(&j, 26).unwrap().value, 25.0);
        assert_eq!(infty_one_exact(&j, 26).unwrap().value, 25.0);
        let z = DenseMatrix::zeros(4, 3);
        assert_eq!(cut_norm_exact(&z, 26).unwrap().value, 0.0);
        assert_eq!(infty_one_exact(&z, 26).unwrap().value, 0.0);
    }

    #[test]
    fn centered_k8_cut_is_two() {
        let a = DenseMatrix::from_fn(8, 8, |i, j| 1.0 / 8.0 - if i == j { 1.0 } else { 0.0 });
        let w = cut_norm_exact(&a, 26).unwrap();
        assert!((w.value - 2.0).abs() < 1e-12);
        assert!((brute_cut(&a) - 2.0).abs() < 1e-12);
        let closed = (0..=8)
            .map(|k| ((k * k) as f64 / 8.0 - k as f64).abs())
            .fold(0.0, f64::max);
        assert_eq!(closed, 2.0);
    }

    #[test]
    fn capacity_error_when_both_sides_large() {
        let a = DenseMatrix::zeros(5, 6);
        assert!(matches!(cut_norm_exact(&a, 4), Err(Error::Capacity { .. })));
        assert!(infty_one_exact(&a, 4).is_err());
        // transposed route when only the columns fit
        let b = DenseMatrix::from_fn(7, 3, |i, j| (i as f64 - 3.0) * (j as f64 + 0.5));
        let w = cut_norm_exact(&b, 4).unwrap();
        assert!((w.value - brute_cut(&b)).abs() < 1e-12);
        let s = infty_one_exact(&b, 4).unwrap();
        assert!((s.value - brute_infty_one(&b)).abs() < 1e-12);
        assert_eq!(s.x.len(), 7);
        assert_eq!(s.y.len(), 3);
    }

    #[test]
    fn large_enumeration_runs_in_chunks() {
        // 10 rows exercises the chunked Gray-code path with low bits
        let a = DenseMatrix::from_fn(10, 4, |i, j| ((i * 3 + j * 5) % 7) as f64 - 3.0);
        let w = cut_norm_exact(&a, 26).unwrap();
        let mut best: f64 = 0.0;
        for s in 0..1u32 << 10 {
            for t in 0..1u32 << 4 {
                let mut sum = 0.0;
                for i in 0..10 {
                    for j in 0..4 {
                        if s >> i & 1 == 1 && t >> j & 1 == 1 {
                            sum += a.get(i, j);
                        }
                    }
                }
                best = best.max(sum.abs());
            }
        }
        assert_eq!(w.value, best);
    }

    fn small_matrix() -> impl Strategy<Value = DenseMatrix> {
        (1usize..=5, 1usize..=5).prop_flat_map(|(m, n)| {
            proptest::collection::vec(-3i32..=3, m * n)
                .prop_map(move |v| DenseMatrix::from_vec(m, n, v.into_iter().map(f64::from).collect()).unwrap())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn cut_matches_brute_force(a in small_matrix()) {
            let w = cut_norm_exact(&a, 26).unwrap();
            prop_assert_eq!(w.value, brute_cut(&a));
            let direct: f64 = w.rows.iter().map(|&s| w.cols.iter().map(|&t| a.get(s, t)).sum::<f64>()).sum();
            prop_assert_eq!(direct.abs(), w.value);
        }

        #[test]
        fn infty_one_matches_brute_force(a in small_matrix()) {
            prop_assert_eq!(infty_one_exact(&a, 26).unwrap().value, brute_infty_one(&a));
        }

        #[test]
        fn cut_invariant_under_transpose_and_permutation(a in small_matrix(), seed in any::<u64>()) {
            let c = cut_norm_exact(&a, 26).unwrap().value;
            prop_assert_eq!(cut_norm_exact(&a.transpose(), 26).unwrap().value, c);
            let (m, n) = (a.rows(), a.cols());
            let mut rp: Vec<usize> = (0..m).collect();
            let mut cp: Vec<usize> = (0..n).collect();
            rp.rotate_left((seed % m as u64) as usize);
            cp.reverse();
            let p = DenseMatrix::from_fn(m, n, |i, j| a.get(rp[i], cp[j]));
            prop_assert_eq!(cut_norm_exact(&p, 26).unwrap().value, c);
        }

        #[test]
        fn cut_infty_one_sandwich(a in small_matrix()) {
            let c = cut_norm_exact(&a, 26).unwrap().value;
            let i = infty_one_exact(&a, 26).unwrap().value;
            prop_assert!(c <= i + 1e-12);
            prop_assert!(i <= 4.0 * c + 1e-12);
        }
    }
}

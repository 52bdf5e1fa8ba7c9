//! Smith normal form over the integers, with unimodular transforms.

use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;
use crate::Int;

/// Result of a Smith normal form computation: `u * m * v = s` with `u`, `v`
/// unimodular and `s` diagonal with the divisibility chain
/// `d_1 | d_2 | ... >= 0`.
#[derive(Clone, Debug)]
pub struct SnfResult {
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub s: IntMatrix,
}

impl SnfResult {
    /// Nonzero diagonal entries, i.e. the invariant factors.
    pub fn invariant_factors(&self) -> Vec<Int> {
        let n = self.s.rows().min(self.s.cols());
        (0..n)
            .map(|i| self.s[(i, i)].clone())
            .take_while(|d| !d.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

/// Smith normal form of `m`.
///
/// Pivoting always selects the minimal-absolute-value nonzero entry of the
/// remaining submatrix, with ties broken in (row, col) order, so the output
/// is deterministic for a fixed input.
pub fn snf(m: &IntMatrix) -> SnfResult {
    let rows = m.rows();
    let cols = m.cols();
    let mut s = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = min_abs_entry(&s, t) else {
            break; // remaining submatrix is zero
        };
        swap_rows(&mut s, &mut u, t, pi);
        swap_cols(&mut s, &mut v, t, pj);

        loop {
            // clear the pivot column by row operations
            let mut dirty = false;
            for i in t + 1..rows {
                if s[(i, t)].is_zero() {
                    continue;
                }
                let q = &s[(i, t)] / &s[(t, t)];
                if !q.is_zero() {
                    row_sub(&mut s, &mut u, i, t, &q);
                }
                if !s[(i, t)].is_zero() {
                    // remainder smaller than pivot: promote it
                    swap_rows(&mut s, &mut u, t, i);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // clear the pivot row by column operations
            for j in t + 1..cols {
                if s[(t, j)].is_zero() {
                    continue;
                }
                let q = &s[(t, j)] / &s[(t, t)];
                if !q.is_zero() {
                    col_sub(&mut s, &mut v, j, t, &q);
                }
                if !s[(t, j)].is_zero() {
                    swap_cols(&mut s, &mut v, t, j);
                    dirty = true;
                    break;
                }
            }
            if dirty {
                continue;
            }
            // pivot divides its row and column; enforce divisibility into the rest
            match first_nondivisible(&s, t) {
                Some(i) => {
                    row_add(&mut s, &mut u, t, i);
                }
                None => break,
            }
        }
        if s[(t, t)].is_negative() {
            negate_row(&mut s, &mut u, t);
        }
        t += 1;
    }
    SnfResult { u, v, s }
}

/// Rank over the rationals, computed by exact elimination.
///
/// Agrees with the number of nonzero diagonal entries of [`snf`]; the
/// rational route avoids carrying the transforms.
pub fn rank(m: &IntMatrix) -> usize {
    m.rank()
}

/// Order of the torsion subgroup of the cokernel of `m`, i.e. the product of
/// the nonzero invariant factors.
pub fn torsion_order_cokernel(m: &IntMatrix) -> Int {
    snf(m)
        .invariant_factors()
        .into_iter()
        .fold(Int::one(), |a, b| a * b)
}

fn min_abs_entry(s: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(Int, usize, usize)> = None;
    for i in t..s.rows() {
        for j in t..s.cols() {
            if s[(i, j)].is_zero() {
                continue;
            }
            let a = s[(i, j)].abs();
            match &best {
                Some((b, _, _)) if *b <= a => {}
                _ => best = Some((a, i, j)),
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

fn first_nondivisible(s: &IntMatrix, t: usize) -> Option<usize> {
    let p = s[(t, t)].clone();
    for i in t + 1..s.rows() {
        for j in t + 1..s.cols() {
            if !(&s[(i, j)] % &p).is_zero() {
                return Some(i);
            }
        }
    }
    None
}

fn swap_rows(s: &mut IntMatrix, u: &mut IntMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for j in 0..s.cols() {
        let x = s[(a, j)].clone();
        s[(a, j)] = s[(b, j)].clone();
        s[(b, j)] = x;
    }
    for j in 0..u.cols() {
        let x = u[(a, j)].clone();
        u[(a, j)] = u[(b, j)].clone();
        u[(b, j)] = x;
    }
}

fn swap_cols(s: &mut IntMatrix, v: &mut IntMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for i in 0..s.rows() {
        let x = s[(i, a)].clone();
        s[(i, a)] = s[(i, b)].clone();
        s[(i, b)] = x;
    }
    for i in 0..v.rows() {
        let x = v[(i, a)].clone();
        v[(i, a)] = v[(i, b)].clone();
        v[(i, b)] = x;
    }
}

/// row_a -= q * row_b, mirrored on `u`.
fn row_sub(s: &mut IntMatrix, u: &mut IntMatrix, a: usize, b: usize, q: &Int) {
    for j in 0..s.cols() {
        let d = q * &s[(b, j)];
        s[(a, j)] -= d;
    }
    for j in 0..u.cols() {
        let d = q * &u[(b, j)];
        u[(a, j)] -= d;
    }
}

/// row_a += row_b, mirrored on `u`.
fn row_add(s: &mut IntMatrix, u: &mut IntMatrix, a: usize, b: usize) {
    for j in 0..s.cols() {
        let d = s[(b, j)].clone();
        s[(a, j)] += d;
    }
    for j in 0..u.cols() {
        let d = u[(b, j)].clone();
        u[(a, j)] += d;
    }
}

/// col_a -= q * col_b, mirrored on `v`.
fn col_sub(s: &mut IntMatrix, v: &mut IntMatrix, a: usize, b: usize, q: &Int) {
    for i in 0..s.rows() {
        let d = q * &s[(i, b)];
        s[(i, a)] -= d;
    }
    for i in 0..v.rows() {
        let d = q * &v[(i, b)];
        v[(i, a)] -= d;
    }
}

fn negate_row(s: &mut IntMatrix, u: &mut IntMatrix, a: usize) {
    for j in 0..s.cols() {
        let x = -s[(a, j)].clone();
        s[(a, j)] = x;
    }
    for j in 0..u.cols() {
        let x = -u[(a, j)].clone();
        u[(a, j)] = x;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn check_snf(m: &IntMatrix) {
        let r = snf(m);
        // u * m * v = s, exactly
        assert_eq!(r.u.mul(m).mul(&r.v), r.s);
        // unimodular transforms
        assert_eq!(r.u.det().abs(), Int::one());
        assert_eq!(r.v.det().abs(), Int::one());
        // diagonal, nonnegative, divisibility chain
        for i in 0..r.s.rows() {
            for j in 0..r.s.cols() {
                if i != j {
                    assert!(r.s[(i, j)].is_zero());
                }
            }
        }
        let f = r.invariant_factors();
        for w in f.windows(2) {
            assert!((&w[1] % &w[0]).is_zero(), "divisibility chain broken");
        }
        assert_eq!(f.len(), m.rank());
    }

    #[test]
    fn snf_one_by_one() {
        let r = snf(&IntMatrix::from_rows(&[vec![2]]));
        assert_eq!(r.s[(0, 0)], Int::from(2));
    }

    #[test]
    fn snf_two_by_two() {
        // det = 20, gcd of entries = 2, so the invariant factors are 2 and 10
        let m = IntMatrix::from_rows(&[vec![2, 4], vec![-2, 6]]);
        let r = snf(&m);
        assert_eq!(r.s[(0, 0)], Int::from(2));
        assert_eq!(r.s[(1, 1)], Int::from(10));
        check_snf(&m);
    }

    #[test]
    fn snf_zero_matrix() {
        let m = IntMatrix::zero(2, 3);
        let r = snf(&m);
        assert!(r.s.is_zero());
        check_snf(&m);
    }

    #[test]
    fn torsion_order_examples() {
        assert_eq!(
            torsion_order_cokernel(&IntMatrix::from_rows(&[vec![2]])),
            Int::from(2)
        );
        assert_eq!(torsion_order_cokernel(&IntMatrix::identity(3)), Int::one());
        assert_eq!(
            torsion_order_cokernel(&IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]])),
            Int::from(6)
        );
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&IntMatrix::from_rows(&[vec![0]])), 0);
        assert_eq!(rank(&IntMatrix::identity(4)), 4);
        // all columns of the theta incidence matrix are parallel
        let d1 = IntMatrix::from_rows(&[vec![-1, -1, -1], vec![1, 1, 1]]);
        assert_eq!(rank(&d1), 1);
        assert_eq!(rank(&d1), snf(&d1).rank());
    }

    #[test]
    fn snf_stress_shapes() {
        check_snf(&IntMatrix::from_rows(&[
            vec![-6, 111, -36, 6],
            vec![5, -672, 210, 74],
            vec![0, -255, 81, 24],
            vec![-7, 255, -81, -10],
        ]));
        check_snf(&IntMatrix::from_rows(&[vec![0, 2, 0], vec![3, 0, 0]]));
        check_snf(&IntMatrix::from_rows(&[vec![4], vec![6], vec![9]]));
    }
}

//! Dense matrices of arbitrary-precision integers: Smith normal form,
//! exact determinants, and determinant divisors.
//!
//! Spanning-tree counts grow exponentially in the chain length, so nothing
//! in this module is allowed to touch fixed-width arithmetic.

use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::group::AbelianGroup;

/// A dense rows x cols matrix of `BigInt`, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            *m.entry_mut(i, i) = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Convenience constructor for tests and fixtures.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        IntMatrix::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn entry_mut(&mut self, i: usize, j: usize) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *t.entry_mut(j, i) = self.entry(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.entry(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    *out.entry_mut(i, j) += a * other.entry(k, j);
                }
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] -= q * row[src]
    fn row_sub(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let delta = q * self.entry(src, j);
            *self.entry_mut(dst, j) -= delta;
        }
    }

    /// col[dst] -= q * col[src]
    fn col_sub(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let delta = q * self.entry(i, src);
            *self.entry_mut(i, dst) -= delta;
        }
    }

    fn row_add(&mut self, dst: usize, src: usize) {
        for j in 0..self.cols {
            let delta = self.entry(src, j).clone();
            *self.entry_mut(dst, j) += delta;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.entry(i, j).clone();
            *self.entry_mut(i, j) = v;
        }
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt> {
        if self.rows != self.cols {
            return Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.clone();
        let mut sign = 1i8;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a.entry(k, k).is_zero() {
                match (k + 1..n).find(|&i| !a.entry(i, k).is_zero()) {
                    Some(i) => {
                        a.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = a.entry(i, j) * a.entry(k, k) - a.entry(i, k) * a.entry(k, j);
                    *a.entry_mut(i, j) = num / &prev;
                }
                *a.entry_mut(i, k) = BigInt::zero();
            }
            prev = a.entry(k, k).clone();
        }
        let det = a.entry(n - 1, n - 1).clone();
        Ok(if sign < 0 { -det } else { det })
    }

    /// Smith normal form: the full diagonal (invariant factors followed by
    /// zeros, `min(rows, cols)` entries) and the rank.
    pub fn smith_normal_form(&self) -> (Vec<BigInt>, usize) {
        let d = snf_in_place(&mut self.clone(), None, None);
        let rank = d.iter().filter(|x| !x.is_zero()).count();
        (d, rank)
    }

    /// Smith normal form together with the unimodular transforms:
    /// `left * self * right` equals the diagonal.
    pub fn smith_normal_form_with_transforms(&self) -> SnfDecomposition {
        let mut left = IntMatrix::identity(self.rows);
        let mut right = IntMatrix::identity(self.cols);
        let diagonal = snf_in_place(&mut self.clone(), Some(&mut left), Some(&mut right));
        let rank = diagonal.iter().filter(|x| !x.is_zero()).count();
        SnfDecomposition {
            diagonal,
            rank,
            left,
            right,
        }
    }

    /// The k-th determinant divisor: the gcd of all k x k minors, 0 if they
    /// all vanish. Enumerates every minor, so this is an oracle for small
    /// matrices only.
    pub fn determinant_divisor(&self, k: usize) -> Result<BigInt> {
        let max = self.rows.min(self.cols);
        if k == 0 || k > max {
            return Err(Error::BadIndex { index: k, max });
        }
        let mut g = BigInt::zero();
        for rows in (0..self.rows).combinations(k) {
            for cols in (0..self.cols).combinations(k) {
                let mut minor = IntMatrix::zeros(k, k);
                for (a, &i) in rows.iter().enumerate() {
                    for (b, &j) in cols.iter().enumerate() {
                        *minor.entry_mut(a, b) = self.entry(i, j).clone();
                    }
                }
                g = g.gcd(&minor.determinant()?);
                if g.is_one() {
                    return Ok(g);
                }
            }
        }
        Ok(g)
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.entry(i, j))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Result of [`IntMatrix::smith_normal_form_with_transforms`].
#[derive(Debug, Clone)]
pub struct SnfDecomposition {
    /// Full diagonal: positive invariant factors, then zeros.
    pub diagonal: Vec<BigInt>,
    pub rank: usize,
    /// Row transform: `left * m * right = diag`.
    pub left: IntMatrix,
    /// Column transform.
    pub right: IntMatrix,
}

/// Pivot-driven Smith normal form. The pivot is always a nonzero entry of
/// minimal absolute value in the working submatrix; rows and columns are
/// reduced by Euclidean steps, and the step restarts whenever the pivot
/// fails to divide the remaining submatrix.
fn snf_in_place(
    a: &mut IntMatrix,
    mut left: Option<&mut IntMatrix>,
    mut right: Option<&mut IntMatrix>,
) -> Vec<BigInt> {
    let dim = a.rows.min(a.cols);
    let mut k = 0;
    while k < dim {
        let Some((pi, pj)) = min_abs_entry(a, k) else {
            break;
        };
        a.swap_rows(k, pi);
        if let Some(l) = left.as_deref_mut() {
            l.swap_rows(k, pi);
        }
        a.swap_cols(k, pj);
        if let Some(r) = right.as_deref_mut() {
            r.swap_cols(k, pj);
        }
        'reduce: loop {
            // Clear column k by Euclidean steps; a nonzero remainder becomes
            // the new, strictly smaller pivot.
            for i in k + 1..a.rows {
                if a.entry(i, k).is_zero() {
                    continue;
                }
                let q = a.entry(i, k).div_floor(a.entry(k, k));
                a.row_sub(i, k, &q);
                if let Some(l) = left.as_deref_mut() {
                    l.row_sub(i, k, &q);
                }
                if !a.entry(i, k).is_zero() {
                    a.swap_rows(k, i);
                    if let Some(l) = left.as_deref_mut() {
                        l.swap_rows(k, i);
                    }
                    continue 'reduce;
                }
            }
            for j in k + 1..a.cols {
                if a.entry(k, j).is_zero() {
                    continue;
                }
                let q = a.entry(k, j).div_floor(a.entry(k, k));
                a.col_sub(j, k, &q);
                if let Some(r) = right.as_deref_mut() {
                    r.col_sub(j, k, &q);
                }
                if !a.entry(k, j).is_zero() {
                    a.swap_cols(k, j);
                    if let Some(r) = right.as_deref_mut() {
                        r.swap_cols(k, j);
                    }
                    continue 'reduce;
                }
            }
            // Row and column are clear; make the pivot divide everything
            // that is left, or fold an offending row in and go again.
            let pivot = a.entry(k, k).clone();
            let offender = (k + 1..a.rows)
                .find(|&i| (k + 1..a.cols).any(|j| !a.entry(i, j).mod_floor(&pivot).is_zero()));
            match offender {
                Some(i) => {
                    a.row_add(k, i);
                    if let Some(l) = left.as_deref_mut() {
                        l.row_add(k, i);
                    }
                }
                None => break,
            }
        }
        if a.entry(k, k).is_negative() {
            a.negate_row(k);
            if let Some(l) = left.as_deref_mut() {
                l.negate_row(k);
            }
        }
        k += 1;
    }
    (0..dim).map(|i| a.entry(i, i).clone()).collect()
}

fn min_abs_entry(a: &IntMatrix, from: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in from..a.rows {
        for j in from..a.cols {
            if a.entry(i, j).is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if a.entry(bi, bj).abs() <= a.entry(i, j).abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

/// The finite abelian group presented by an integer relation matrix: rows
/// are relations, columns are generators. Errors when the cokernel is
/// infinite (rank below the number of generators).
pub fn group_from_matrix(m: &IntMatrix) -> Result<AbelianGroup> {
    let (diag, rank) = m.smith_normal_form();
    if rank < m.cols() {
        return Err(Error::InfiniteGroup);
    }
    AbelianGroup::from_factors(diag.into_iter().take(rank).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn determinant_basics() {
        assert_eq!(IntMatrix::identity(3).determinant().unwrap(), big(1));
        assert_eq!(
            IntMatrix::from_i64(&[&[2, -1], &[-1, 2]])
                .determinant()
                .unwrap(),
            big(3)
        );
        assert_eq!(IntMatrix::zeros(0, 0).determinant().unwrap(), big(1));
        assert_eq!(
            IntMatrix::from_i64(&[&[1, 2], &[2, 4]])
                .determinant()
                .unwrap(),
            big(0)
        );
        assert!(matches!(
            IntMatrix::zeros(2, 3).determinant(),
            Err(Error::NonSquare { .. })
        ));
    }

    #[test]
    fn determinant_larger() {
        let m = IntMatrix::from_i64(&[
            &[-20, -7, -27, 2, 29],
            &[17, 8, 14, -4, -10],
            &[13, 8, 10, -4, -6],
            &[-9, -2, -14, 0, 16],
            &[5, 0, 5, -1, -4],
        ]);
        // Product of the known invariant factors 1,1,1,2,60 up to sign.
        assert_eq!(m.determinant().unwrap().abs(), big(120));
    }

    #[test]
    fn snf_diag_2_3() {
        let (d, r) = IntMatrix::from_i64(&[&[2, 0], &[0, 3]]).smith_normal_form();
        assert_eq!(d, vec![big(1), big(6)]);
        assert_eq!(r, 2);
    }

    #[test]
    fn snf_cycle_laplacian() {
        let (d, r) = IntMatrix::from_i64(&[&[2, -1], &[-1, 2]]).smith_normal_form();
        assert_eq!(d, vec![big(1), big(3)]);
        assert_eq!(r, 2);
    }

    #[test]
    fn snf_rank_deficient() {
        let (d, r) = IntMatrix::from_i64(&[&[1, 2], &[2, 4]]).smith_normal_form();
        assert_eq!(d, vec![big(1), big(0)]);
        assert_eq!(r, 1);

        let (d, r) = IntMatrix::zeros(2, 3).smith_normal_form();
        assert_eq!(d, vec![big(0), big(0)]);
        assert_eq!(r, 0);
    }

    #[test]
    fn snf_known_5x5() {
        let m = IntMatrix::from_i64(&[
            &[-20, -7, -27, 2, 29],
            &[17, 8, 14, -4, -10],
            &[13, 8, 10, -4, -6],
            &[-9, -2, -14, 0, 16],
            &[5, 0, 5, -1, -4],
        ]);
        let (d, _) = m.smith_normal_form();
        assert_eq!(d, vec![big(1), big(1), big(1), big(2), big(60)]);
    }

    #[test]
    fn snf_transforms_reconstruct() {
        let m = IntMatrix::from_i64(&[&[6, 10, 15], &[10, 15, 6], &[15, 6, 10]]);
        let snf = m.smith_normal_form_with_transforms();
        let product = snf.left.mul(&m).mul(&snf.right);
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j {
                    snf.diagonal[i].clone()
                } else {
                    BigInt::zero()
                };
                assert_eq!(product.entry(i, j), &expect);
            }
        }
        assert_eq!(snf.left.determinant().unwrap().abs(), big(1));
        assert_eq!(snf.right.determinant().unwrap().abs(), big(1));
    }

    #[test]
    fn snf_divisibility_chain() {
        let m = IntMatrix::from_i64(&[&[4, 6, 0], &[6, 4, 2], &[0, 2, 8]]);
        let (d, r) = m.smith_normal_form();
        for w in d[..r].windows(2) {
            assert!(w[1].mod_floor(&w[0]).is_zero(), "{d:?}");
        }
    }

    #[test]
    fn determinant_divisors_match_snf() {
        let mats = [
            IntMatrix::from_i64(&[&[2, 0], &[0, 3]]),
            IntMatrix::from_i64(&[&[2, -1], &[-1, 2]]),
            IntMatrix::from_i64(&[&[3, -3, 0], &[0, 3, -3], &[2, 2, 2]]),
            IntMatrix::from_i64(&[&[4, 6, 0], &[6, 4, 2], &[0, 2, 8]]),
            IntMatrix::from_i64(&[
                &[-20, -7, -27, 2, 29],
                &[17, 8, 14, -4, -10],
                &[13, 8, 10, -4, -6],
                &[-9, -2, -14, 0, 16],
                &[5, 0, 5, -1, -4],
            ]),
            IntMatrix::from_i64(&[
                &[2, 0, 0, 1, 0, 3],
                &[0, 4, 1, 0, 2, 0],
                &[1, 1, 6, 0, 0, 2],
                &[0, 0, 0, 8, 1, 1],
                &[2, 2, 0, 1, 10, 0],
                &[0, 1, 2, 1, 0, 12],
            ]),
        ];
        for m in mats {
            let (d, r) = m.smith_normal_form();
            let mut prev = BigInt::one();
            for k in 1..=r {
                let delta = m.determinant_divisor(k).unwrap();
                assert_eq!(&delta / &prev, d[k - 1], "Delta_{k} of\n{m}");
                prev = delta;
            }
        }
    }

    #[test]
    fn determinant_divisor_of_flower_relation_matrix() {
        // Second determinant divisor of the 3-petal triangle flower's
        // relation matrix: the gcd of the petal counts.
        let r = IntMatrix::from_i64(&[&[3, -3, 0], &[0, 3, -3], &[2, 2, 2]]);
        assert_eq!(r.determinant_divisor(1).unwrap(), big(1));
        assert_eq!(r.determinant_divisor(2).unwrap(), big(3));
        assert_eq!(r.determinant_divisor(3).unwrap(), big(54));
    }

    #[test]
    fn determinant_divisor_fixtures() {
        let m = IntMatrix::from_i64(&[&[2, 0], &[0, 3]]);
        assert_eq!(m.determinant_divisor(1).unwrap(), big(1));
        assert_eq!(m.determinant_divisor(2).unwrap(), big(6));
        assert!(matches!(
            m.determinant_divisor(3),
            Err(Error::BadIndex { .. })
        ));
        assert!(matches!(
            m.determinant_divisor(0),
            Err(Error::BadIndex { .. })
        ));
    }

    #[test]
    fn group_from_matrix_basics() {
        let g = group_from_matrix(&IntMatrix::from_i64(&[&[3]])).unwrap();
        assert_eq!(g.to_string(), "Z_3");

        let g = group_from_matrix(&IntMatrix::from_i64(&[&[2, -1], &[-1, 2]])).unwrap();
        assert_eq!(g.to_string(), "Z_3");

        assert_eq!(
            group_from_matrix(&IntMatrix::from_i64(&[&[1, 2], &[2, 4]])),
            Err(Error::InfiniteGroup)
        );
    }

    #[test]
    fn snf_invariant_under_transpose_and_permutation() {
        let m = IntMatrix::from_i64(&[&[3, -3, 0], &[0, 3, -3], &[2, 2, 2]]);
        let (d, _) = m.smith_normal_form();
        let (dt, _) = m.transpose().smith_normal_form();
        assert_eq!(d, dt);

        let mut p = m.clone();
        p.swap_rows(0, 2);
        p.swap_cols(1, 2);
        let (dp, _) = p.smith_normal_form();
        assert_eq!(d, dp);
    }
}

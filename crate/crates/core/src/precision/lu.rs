//! LU factorization with partial pivoting, triangular solves, and the
//! infinity-norm residual used as the correctness gate after every solve.
//!
//! Pivoting is deterministic: the pivot is the largest absolute value in the
//! column, ties broken by the lowest row index. Elimination visits rows and
//! columns in ascending order with correctly rounded scalar operations, so
//! factors, solutions, and residuals are bit-identical across runs.

use super::{BigScalar, DenseMatrix, DenseVector, LinalgError};

/// Packed LU factors: unit lower triangle below the diagonal, upper triangle
/// on and above it, plus the row permutation.
///
/// `perm[i]` is the original row index that elimination moved to position `i`,
/// so `L*U` reconstructs `P*A` with `(P*A)[i][j] = A[perm[i]][j]`.
#[derive(Debug, Clone)]
pub struct LUFactors {
    lu: DenseMatrix,
    perm: Vec<usize>,
}

impl LUFactors {
    pub fn n(&self) -> usize {
        self.lu.rows()
    }

    pub fn digits(&self) -> u32 {
        self.lu.digits()
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn packed(&self) -> &DenseMatrix {
        &self.lu
    }

    /// Entry of the unit lower factor.
    pub fn lower(&self, i: usize, j: usize) -> BigScalar {
        let ctx = self.lu.context();
        match i.cmp(&j) {
            std::cmp::Ordering::Greater => self.lu.get(i, j).clone(),
            std::cmp::Ordering::Equal => ctx.one(),
            std::cmp::Ordering::Less => ctx.zero(),
        }
    }

    /// Entry of the upper factor.
    pub fn upper(&self, i: usize, j: usize) -> BigScalar {
        if i <= j {
            self.lu.get(i, j).clone()
        } else {
            self.lu.context().zero()
        }
    }
}

/// Factor `P*A = L*U` with partial pivoting.
pub fn lu_factor(a: &DenseMatrix) -> Result<LUFactors, LinalgError> {
    factor_in_place(a.clone())
}

/// In-place variant for callers that no longer need `A`; the collocation
/// solver uses this to avoid holding two n^2 multiprecision buffers.
pub(crate) fn factor_in_place(mut lu: DenseMatrix) -> Result<LUFactors, LinalgError> {
    if lu.rows() != lu.cols() {
        return Err(LinalgError::NotSquare {
            rows: lu.rows(),
            cols: lu.cols(),
        });
    }
    let n = lu.rows();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut tmp = lu.context().zero();

    for k in 0..n {
        // Largest |entry| in column k at or below the diagonal; ties keep the
        // lowest row index.
        let mut p = k;
        for i in k + 1..n {
            if lu.get(i, k).cmp_abs(lu.get(p, k)) == std::cmp::Ordering::Greater {
                p = i;
            }
        }
        if lu.get(p, k).is_zero() {
            return Err(LinalgError::SingularMatrix { col: k });
        }
        lu.swap_rows(k, p);
        perm.swap(k, p);

        let cols = lu.cols();
        let (pivot_row, below) = lu.pivot_and_below(k);
        for row in below.chunks_exact_mut(cols) {
            let (left, right) = row.split_at_mut(k + 1);
            let multiplier = &mut left[k];
            *multiplier /= &pivot_row[k];
            for (dst, ukj) in right.iter_mut().zip(&pivot_row[k + 1..]) {
                tmp.assign_mul(multiplier, ukj);
                *dst -= &tmp;
            }
        }
    }

    Ok(LUFactors { lu, perm })
}

/// Solve `A*x = b` from the packed factors by forward/back substitution.
pub fn lu_solve(f: &LUFactors, b: &DenseVector) -> Result<DenseVector, LinalgError> {
    let n = f.n();
    if b.len() != n {
        return Err(LinalgError::DimMismatch {
            op: "lu_solve",
            expected: n,
            found: b.len(),
        });
    }
    let ctx = f.lu.context();
    let mut tmp = ctx.zero();

    // y = P*b, then L*y' = y in place.
    let mut x: Vec<BigScalar> = f.perm.iter().map(|&pi| b.get(pi).clone()).collect();
    for i in 0..n {
        let (solved, rest) = x.split_at_mut(i);
        let xi = &mut rest[0];
        for (lij, xj) in f.lu.row(i)[..i].iter().zip(solved.iter()) {
            tmp.assign_mul(lij, xj);
            *xi -= &tmp;
        }
    }
    // U*x = y' backward.
    for i in (0..n).rev() {
        let (head, solved) = x.split_at_mut(i + 1);
        let xi = &mut head[i];
        for (uij, xj) in f.lu.row(i)[i + 1..].iter().zip(solved.iter()) {
            tmp.assign_mul(uij, xj);
            *xi -= &tmp;
        }
        *xi /= f.lu.get(i, i);
    }
    DenseVector::from_vec(ctx, x)
}

/// Solve `A^T*x = b` from the same factors (`A^T = U^T L^T P`).
/// Needed by the 1-norm condition estimator.
pub fn lu_solve_transpose(f: &LUFactors, b: &DenseVector) -> Result<DenseVector, LinalgError> {
    let n = f.n();
    if b.len() != n {
        return Err(LinalgError::DimMismatch {
            op: "lu_solve_transpose",
            expected: n,
            found: b.len(),
        });
    }
    let ctx = f.lu.context();
    let mut tmp = ctx.zero();

    // U^T * w = b: U^T is lower triangular with U's diagonal.
    let mut w: Vec<BigScalar> = (0..n).map(|i| b.get(i).clone()).collect();
    for i in 0..n {
        let (solved, rest) = w.split_at_mut(i);
        let wi = &mut rest[0];
        for (m, wm) in solved.iter().enumerate() {
            tmp.assign_mul(f.lu.get(m, i), wm);
            *wi -= &tmp;
        }
        *wi /= f.lu.get(i, i);
    }
    // L^T * v = w: L^T is unit upper triangular.
    for i in (0..n).rev() {
        let (head, solved) = w.split_at_mut(i + 1);
        let vi = &mut head[i];
        for (off, vm) in solved.iter().enumerate() {
            let m = i + 1 + off;
            tmp.assign_mul(f.lu.get(m, i), vm);
            *vi -= &tmp;
        }
    }
    // x = P^T * v.
    let mut x = DenseVector::zeros(ctx, n);
    for (i, v) in w.into_iter().enumerate() {
        *x.get_mut(f.perm[i]) = v;
    }
    Ok(x)
}

/// max_i |(A*x - b)_i| with the fixed ascending-column summation order.
pub fn residual_inf_norm(
    a: &DenseMatrix,
    x: &DenseVector,
    b: &DenseVector,
) -> Result<BigScalar, LinalgError> {
    if a.cols() != x.len() {
        return Err(LinalgError::DimMismatch {
            op: "residual_inf_norm",
            expected: a.cols(),
            found: x.len(),
        });
    }
    if a.rows() != b.len() {
        return Err(LinalgError::DimMismatch {
            op: "residual_inf_norm",
            expected: a.rows(),
            found: b.len(),
        });
    }
    let ctx = a.context();
    let mut tmp = ctx.zero();
    let mut best = ctx.zero();
    for i in 0..a.rows() {
        let mut acc = ctx.zero();
        for (aij, xj) in a.row(i).iter().zip(x.as_slice()) {
            tmp.assign_mul(aij, xj);
            acc += &tmp;
        }
        acc -= b.get(i);
        if acc.cmp_abs(&best) == std::cmp::Ordering::Greater {
            best = acc.abs();
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precision::PrecisionContext;

    fn ctx(digits: u32) -> PrecisionContext {
        PrecisionContext::new(digits).unwrap()
    }

    #[test]
    fn one_by_one_identity_case() {
        let c = ctx(50);
        let a = DenseMatrix::from_fn(c, 1, 1, |_, _| c.from_i64(5));
        let f = lu_factor(&a).unwrap();
        assert_eq!(f.perm(), &[0]);
        assert_eq!(f.lower(0, 0), c.one());
        assert_eq!(f.upper(0, 0), c.from_i64(5));
    }

    #[test]
    fn identity_two_by_two() {
        let c = ctx(50);
        let a = DenseMatrix::from_fn(c, 2, 2, |i, j| if i == j { c.one() } else { c.zero() });
        let f = lu_factor(&a).unwrap();
        assert_eq!(f.perm(), &[0, 1]);
        for i in 0..2 {
            for j in 0..2 {
                let expect = if i == j { c.one() } else { c.zero() };
                assert_eq!(f.lower(i, j), if i == j { c.one() } else { c.zero() });
                assert_eq!(f.upper(i, j), expect);
            }
        }
    }

    #[test]
    fn solve_identity_and_diagonal() {
        let c = ctx(50);
        let eye = DenseMatrix::from_fn(c, 2, 2, |i, j| if i == j { c.one() } else { c.zero() });
        let f = lu_factor(&eye).unwrap();
        let b = DenseVector::from_fn(c, 2, |i| c.from_i64([3, 7][i]));
        assert_eq!(lu_solve(&f, &b).unwrap(), b);

        let d = DenseMatrix::from_fn(c, 2, 2, |i, j| {
            if i == j {
                c.from_i64([2, 4][i])
            } else {
                c.zero()
            }
        });
        let fd = lu_factor(&d).unwrap();
        let bd = DenseVector::from_fn(c, 2, |i| c.from_i64([2, 4][i]));
        let x = lu_solve(&fd, &bd).unwrap();
        assert_eq!(x.get(0), &c.one());
        assert_eq!(x.get(1), &c.one());
    }

    #[test]
    fn singular_column_is_reported() {
        let c = ctx(50);
        // second column identically zero
        let a = DenseMatrix::from_fn(c, 2, 2, |_, j| if j == 0 { c.one() } else { c.zero() });
        match lu_factor(&a) {
            Err(LinalgError::SingularMatrix { col }) => assert_eq!(col, 1),
            other => panic!("expected singular error, got {other:?}"),
        }
    }

    #[test]
    fn residual_trivial_cases() {
        let c = ctx(50);
        let eye = DenseMatrix::from_fn(c, 2, 2, |i, j| if i == j { c.one() } else { c.zero() });
        let b = DenseVector::from_fn(c, 2, |_| c.one());
        // exact solve of the identity system
        assert_eq!(residual_inf_norm(&eye, &b, &b).unwrap(), c.zero());
        // x = 0 against b = ones
        let zero = DenseVector::zeros(c, 2);
        assert_eq!(residual_inf_norm(&eye, &zero, &b).unwrap(), c.one());
    }

    #[test]
    fn pivot_ties_take_lowest_row() {
        let c = ctx(50);
        // |entries| equal in column 0: rows 0 and 1 both magnitude 2.
        let a = DenseMatrix::from_fn(c, 2, 2, |i, j| match (i, j) {
            (0, 0) => c.from_i64(-2),
            (1, 0) => c.from_i64(2),
            (0, 1) => c.from_i64(1),
            _ => c.from_i64(3),
        });
        let f = lu_factor(&a).unwrap();
        assert_eq!(f.perm(), &[0, 1], "tie must keep the lowest row index");
    }

    #[test]
    fn transpose_solve_matches_direct_on_transposed_matrix() {
        let c = ctx(80);
        let a = DenseMatrix::from_fn(c, 3, 3, |i, j| c.from_i64([[2, 1, 0], [1, 3, 1], [0, 1, 4]][i][j]));
        let at = DenseMatrix::from_fn(c, 3, 3, |i, j| a.get(j, i).clone());
        let b = DenseVector::from_fn(c, 3, |i| c.from_i64([1, -2, 5][i]));
        let xt = lu_solve_transpose(&lu_factor(&a).unwrap(), &b).unwrap();
        let xd = lu_solve(&lu_factor(&at).unwrap(), &b).unwrap();
        for i in 0..3 {
            let diff = (xt.get(i) - xd.get(i)).abs();
            assert!(
                diff < c.parse("1e-70").unwrap(),
                "transpose solve differs at {i}: {diff}"
            );
        }
    }

    #[test]
    fn dimension_mismatches_are_rejected() {
        let c = ctx(50);
        let a = DenseMatrix::zeros(c, 2, 3);
        assert!(matches!(lu_factor(&a), Err(LinalgError::NotSquare { .. })));
        let eye = DenseMatrix::from_fn(c, 2, 2, |i, j| if i == j { c.one() } else { c.zero() });
        let f = lu_factor(&eye).unwrap();
        let b3 = DenseVector::zeros(c, 3);
        assert!(matches!(
            lu_solve(&f, &b3),
            Err(LinalgError::DimMismatch { .. })
        ));
        assert!(matches!(
            lu_solve_transpose(&f, &b3),
            Err(LinalgError::DimMismatch { .. })
        ));
    }

    #[test]
    fn factorization_is_bit_reproducible() {
        let c = ctx(100);
        let a = DenseMatrix::from_fn(c, 6, 6, |i, j| {
            // deterministic scattered values of mixed sign and scale
            let v = ((i * 31 + j * 17) % 13) as i64 - 6;
            &c.from_i64(v) / &c.from_i64(7 + ((i + 2 * j) % 5) as i64)
        });
        let f1 = lu_factor(&a).unwrap();
        let f2 = lu_factor(&a).unwrap();
        assert_eq!(f1.perm(), f2.perm());
        for i in 0..6 {
            for j in 0..6 {
                assert_eq!(f1.packed().get(i, j), f2.packed().get(i, j));
                assert_eq!(
                    f1.packed().get(i, j).to_decimal_string(),
                    f2.packed().get(i, j).to_decimal_string()
                );
            }
        }
    }
}

//! 1-norm condition number estimation.
//!
//! `cond_estimate` returns `||A||_1 * est(||A^-1||_1)` where the inverse norm
//! is estimated with Hager's method as refined by Higham: repeatedly solve
//! with `A` and `A^T` against sign vectors, moving to the unit vector of the
//! largest inverse-image component until the lower bound stops improving.
//! The result is a lower-bound *estimate*, in practice within a small factor
//! of the true value, and the solver reports it as an estimate. At most five
//! solve pairs are spent per estimate.

use super::lu::{lu_factor, lu_solve, lu_solve_transpose, LUFactors};
use super::{BigScalar, DenseMatrix, DenseVector, LinalgError};

/// Extra forward/adjoint iterations after the first pair.
const MAX_REFINEMENTS: usize = 3;

/// Estimate the 1-norm condition number of `A`, factoring it internally.
pub fn cond_estimate(a: &DenseMatrix) -> Result<BigScalar, LinalgError> {
    let f = lu_factor(a)?;
    cond_estimate_with_factors(&a.one_norm(), &f)
}

/// Estimate the condition number from a precomputed `||A||_1` and factors;
/// lets the solver reuse the factorization of the system it just solved.
pub fn cond_estimate_with_factors(
    one_norm_a: &BigScalar,
    f: &LUFactors,
) -> Result<BigScalar, LinalgError> {
    let inv = inverse_one_norm_estimate(f)?;
    Ok(&inv * one_norm_a)
}

/// Hager/Higham estimate of `||A^-1||_1`.
pub fn inverse_one_norm_estimate(f: &LUFactors) -> Result<BigScalar, LinalgError> {
    let n = f.n();
    let ctx = f.packed().context();
    if n == 1 {
        return Ok(f.packed().get(0, 0).abs().recip());
    }

    let inv_n = ctx.from_u64(n as u64).recip();
    let mut x = DenseVector::from_fn(ctx, n, |_| inv_n.clone());
    let mut gamma = ctx.zero();

    for refinement in 0..=MAX_REFINEMENTS {
        let y = lu_solve(f, &x)?;
        let gamma_new = y.one_norm();
        if refinement > 0 && gamma_new <= gamma {
            break;
        }
        gamma = gamma_new;

        let xi = DenseVector::from_fn(ctx, n, |i| {
            if y.get(i).is_sign_negative() {
                ctx.from_i64(-1)
            } else {
                ctx.one()
            }
        });
        let z = lu_solve_transpose(f, &xi)?;

        // Stationary point check: ||z||_inf <= z^T x means no ascent left.
        let mut ztx = ctx.zero();
        let mut tmp = ctx.zero();
        for (zi, xi_) in z.iter().zip(x.as_slice()) {
            tmp.assign_mul(zi, xi_);
            ztx += &tmp;
        }
        let zinf = z.inf_norm();
        if zinf <= ztx {
            break;
        }

        // Move to the coordinate with the largest |z_i|, lowest index on ties.
        let mut j = 0;
        for i in 1..n {
            if z.get(i).cmp_abs(z.get(j)) == std::cmp::Ordering::Greater {
                j = i;
            }
        }
        x = DenseVector::from_fn(ctx, n, |i| if i == j { ctx.one() } else { ctx.zero() });
    }

    // Safeguard vector from Higham: catches estimates the iteration misses.
    let alt = {
        let denom = ctx.from_u64(n as u64 - 1);
        let b = DenseVector::from_fn(ctx, n, |i| {
            let mut v = ctx.one() + &(&ctx.from_u64(i as u64) / &denom);
            if i % 2 == 1 {
                v.neg_mut();
            }
            v
        });
        let yb = lu_solve(f, &b)?;
        let scale = &ctx.from_i64(2) / &ctx.from_u64(3 * n as u64);
        &yb.one_norm() * &scale
    };

    Ok(gamma.max(&alt))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precision::PrecisionContext;

    fn ctx(digits: u32) -> PrecisionContext {
        PrecisionContext::new(digits).unwrap()
    }

    fn assert_close_log10(got: &BigScalar, want: &BigScalar, tol_log10: f64) {
        let d = (got.log10_abs_f64() - want.log10_abs_f64()).abs();
        assert!(d <= tol_log10, "got {got}, want {want} (dlog10 = {d})");
    }

    #[test]
    fn identity_has_condition_one() {
        let c = ctx(60);
        for n in [1usize, 2, 5] {
            let eye = DenseMatrix::from_fn(c, n, n, |i, j| if i == j { c.one() } else { c.zero() });
            let k = cond_estimate(&eye).unwrap();
            let err = (&k - &c.one()).abs();
            assert!(err < c.parse("1e-50").unwrap(), "cond(I_{n}) = {k}");
        }
    }

    #[test]
    fn diagonal_condition_is_exact() {
        let c = ctx(80);
        for k in [3u32, 17, 100] {
            let big = c.from_i64(10).powi(k as i32);
            let a = DenseMatrix::from_fn(c, 2, 2, |i, j| match (i, j) {
                (0, 0) => c.one(),
                (1, 1) => big.clone(),
                _ => c.zero(),
            });
            let est = cond_estimate(&a).unwrap();
            assert_close_log10(&est, &big, 1e-9);
        }
    }

    #[test]
    fn estimate_scales_invariantly() {
        let c = ctx(80);
        let a = DenseMatrix::from_fn(c, 4, 4, |i, j| {
            c.from_i64([[4, 1, 0, 2], [1, 5, 1, 0], [0, 1, 6, 1], [2, 0, 1, 7]][i][j])
        });
        let base = cond_estimate(&a).unwrap();
        for alpha in [3i64, -11, 1000] {
            let al = c.from_i64(alpha);
            let scaled = DenseMatrix::from_fn(c, 4, 4, |i, j| a.get(i, j) * &al);
            let k = cond_estimate(&scaled).unwrap();
            let rel = (&(&k - &base) / &base).abs();
            assert!(
                rel < c.parse("1e-70").unwrap(),
                "cond({alpha}*A) = {k} vs {base}"
            );
        }
    }

    #[test]
    fn estimate_is_a_lower_bound_near_truth_on_small_matrices() {
        // 3x3 with known inverse: compare against the exact 1-norm condition
        // number computed from an explicit inverse.
        let c = ctx(80);
        let a = DenseMatrix::from_fn(c, 3, 3, |i, j| {
            c.from_i64([[2, 0, 0], [0, -1, 0], [4, 0, 8]][i][j])
        });
        // A^-1 = [[1/2,0,0],[0,-1,0],[-1/4,0,1/8]], so ||A||_1 = 8 and
        // ||A^-1||_1 = max(3/4, 1, 1/8) = 1, giving cond = 8 exactly.
        let est = cond_estimate(&a).unwrap();
        let truth = c.from_i64(8);
        let rel = (&(&est - &truth) / &truth).abs();
        assert!(
            rel < c.parse("1e-60").unwrap(),
            "estimator should be exact here: {est}"
        );
    }
}

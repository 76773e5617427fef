//! Kansa collocation: assembly, solve, evaluation, and error measurement.
//!
//! The square system enforces the PDE at interior points (Laplacian rows) and
//! the Dirichlet data at boundary points (kernel value rows). Row and column
//! order follow the deterministic center ordering (interior first, then
//! boundary), so diagnostics are reproducible run to run.
//!
//! Every solve is gated on its own residual: with working precision `d`
//! digits and condition estimate `K`, the relative infinity-norm residual
//! must not exceed `10^(-d + ceil(log10 K) + 20)`; larger residuals indicate
//! the precision budget was blown and the solve is rejected rather than
//! reported.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kernel::{KernelError, MultiquadricKernel};
use crate::precision::{
    cond_estimate_with_factors, factor_in_place, lu_solve, BigScalar, DenseMatrix, DenseVector,
    LinalgError, PrecisionContext, PrecisionError,
};
use crate::problem::{CollocationProblem, Point, ProblemError};

#[derive(Debug, Error)]
pub enum SolveError {
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error(transparent)]
    Precision(#[from] PrecisionError),
    #[error("kernel dimension {kernel} does not match problem dimension {problem}")]
    DimensionMismatch { kernel: usize, problem: usize },
    #[error("kernel carries {kernel} digits but problem carries {problem}")]
    PrecisionMismatch { kernel: u32, problem: u32 },
    #[error(
        "residual gate failed: relative residual {relative} exceeds 10^{bound_log10:.0} \
         (digits={digits}, cond estimate {cond}); increase the precision"
    )]
    ResidualGate {
        relative: String,
        bound_log10: f64,
        digits: u32,
        cond: String,
    },
    #[error("test point set is empty: {0}")]
    EmptyTestSet(&'static str),
    #[error("solution file is malformed: {0}")]
    MalformedSolution(String),
}

/// Per-solve diagnostics, kept alongside the coefficients.
#[derive(Debug, Clone)]
pub struct SolveDiagnostics {
    /// 1-norm condition estimate of the collocation matrix.
    pub cond: BigScalar,
    /// max_i |(A*lambda - b)_i|, recomputed row by row after the solve.
    pub residual_inf: BigScalar,
    /// max_i |b_i|
    pub rhs_inf: BigScalar,
    /// residual_inf / rhs_inf
    pub relative_residual: BigScalar,
    /// Wall time of assemble + factor + solve + diagnostics, seconds.
    pub solve_seconds: f64,
    /// Set when the relative residual exceeds 1e-20, the heuristic signal
    /// that the precision budget looks too small for the conditioning.
    pub precision_warning: bool,
}

/// Solved collocation system: `u_hat(x) = sum_j lambda_j phi(x - x_j)`.
#[derive(Debug, Clone)]
pub struct CollocationSolution {
    pub kernel: MultiquadricKernel,
    pub centers: Vec<Point>,
    pub lambda: DenseVector,
    pub diagnostics: SolveDiagnostics,
}

/// RMS errors of a solution against the manufactured truth.
#[derive(Debug, Clone)]
pub struct ErrorReport {
    pub rms: BigScalar,
    pub rms_boundary: BigScalar,
    pub n_test_domain: usize,
    pub n_test_boundary: usize,
}

fn check_compatible(
    problem: &CollocationProblem,
    kernel: &MultiquadricKernel,
) -> Result<(), SolveError> {
    if kernel.dim() != problem.dim() {
        return Err(SolveError::DimensionMismatch {
            kernel: kernel.dim().as_usize(),
            problem: problem.dim().as_usize(),
        });
    }
    if kernel.digits() != problem.digits() {
        return Err(SolveError::PrecisionMismatch {
            kernel: kernel.digits(),
            problem: problem.digits(),
        });
    }
    Ok(())
}

/// One assembled row: Laplacian entries for interior rows, kernel values for
/// Dirichlet rows, columns in center order.
fn assemble_row(
    point: &Point,
    dirichlet: bool,
    centers: &[Point],
    kernel: &MultiquadricKernel,
) -> Result<Vec<BigScalar>, SolveError> {
    let mut row = Vec::with_capacity(centers.len());
    for center in centers {
        let r_sq = point.dist_sq(center);
        let entry = if dirichlet {
            kernel.value_from_r_sq(&r_sq)
        } else {
            kernel.laplacian_from_r_sq(&r_sq)?
        };
        row.push(entry);
    }
    Ok(row)
}

/// Assemble the collocation system `A*lambda = b`.
///
/// Interior rows come first (`A[i][j] = (Delta phi)(p_i - x_j)`,
/// `b[i] = f(p_i)`), then boundary rows (`A[i][j] = phi(p_i - x_j)`,
/// `b[i] = g(p_i)`). Rows are independent and assembled in parallel; each row
/// is filled left to right, so the result does not depend on thread count.
pub fn assemble(
    problem: &CollocationProblem,
    kernel: &MultiquadricKernel,
) -> Result<(DenseMatrix, DenseVector), SolveError> {
    check_compatible(problem, kernel)?;
    let ctx = problem.context();
    let centers = problem.centers();
    let n = centers.len();

    let rows: Result<Vec<Vec<BigScalar>>, SolveError> = (0..n)
        .into_par_iter()
        .map(|i| {
            let (point, dirichlet) = if i < problem.interior.len() {
                (&problem.interior[i], false)
            } else {
                (&problem.boundary[i - problem.interior.len()], true)
            };
            assemble_row(point, dirichlet, &centers, kernel)
        })
        .collect();
    let data: Vec<BigScalar> = rows?.into_iter().flatten().collect();
    let a = DenseMatrix::from_row_major(ctx, n, n, data);

    let mut b = Vec::with_capacity(n);
    for p in &problem.interior {
        b.push(problem.solution.laplacian_u(p));
    }
    for p in &problem.boundary {
        b.push(problem.solution.boundary_g(p));
    }
    let b = DenseVector::from_vec(ctx, b)?;
    Ok((a, b))
}

/// Residual `max_i |(A*lambda - b)_i|` computed by regenerating each row
/// entry from the kernel instead of keeping `A` alive; the regenerated values
/// are bit-identical to the assembled ones, so this equals
/// `residual_inf_norm(A, lambda, b)` while halving peak memory.
fn streaming_residual_inf(
    problem: &CollocationProblem,
    kernel: &MultiquadricKernel,
    centers: &[Point],
    lambda: &DenseVector,
    b: &DenseVector,
) -> Result<BigScalar, SolveError> {
    let ctx = problem.context();
    let n = centers.len();
    let per_row: Result<Vec<BigScalar>, SolveError> = (0..n)
        .into_par_iter()
        .map(|i| {
            let (point, dirichlet) = if i < problem.interior.len() {
                (&problem.interior[i], false)
            } else {
                (&problem.boundary[i - problem.interior.len()], true)
            };
            let mut acc = ctx.zero();
            let mut tmp = ctx.zero();
            for (center, lam) in centers.iter().zip(lambda.as_slice()) {
                let r_sq = point.dist_sq(center);
                let entry = if dirichlet {
                    kernel.value_from_r_sq(&r_sq)
                } else {
                    kernel.laplacian_from_r_sq(&r_sq)?
                };
                tmp.assign_mul(&entry, lam);
                acc += &tmp;
            }
            acc -= b.get(i);
            Ok(acc.abs())
        })
        .collect();
    let per_row = per_row?;
    let mut best = ctx.zero();
    for r in per_row {
        if r > best {
            best = r;
        }
    }
    Ok(best)
}

/// Assemble and solve the collocation system, with diagnostics.
pub fn solve(
    problem: &CollocationProblem,
    kernel: &MultiquadricKernel,
) -> Result<CollocationSolution, SolveError> {
    let started = Instant::now();
    check_compatible(problem, kernel)?;
    let centers = problem.centers();

    let (a, b) = assemble(problem, kernel)?;
    let one_norm_a = a.one_norm();
    let factors = factor_in_place(a)?;
    let lambda = lu_solve(&factors, &b)?;
    let cond = cond_estimate_with_factors(&one_norm_a, &factors)?;
    drop(factors);

    let residual_inf = streaming_residual_inf(problem, kernel, &centers, &lambda, &b)?;
    let rhs_inf = b.inf_norm();
    let relative_residual = if rhs_inf.is_zero() {
        residual_inf.clone()
    } else {
        &residual_inf / &rhs_inf
    };

    let digits = problem.digits();
    let rel_log10 = relative_residual.log10_abs_f64();
    let bound_log10 = -(digits as f64) + cond.log10_abs_f64().ceil() + 20.0;
    if rel_log10 > bound_log10 {
        return Err(SolveError::ResidualGate {
            relative: relative_residual.to_decimal_string(),
            bound_log10,
            digits,
            cond: cond.to_decimal_string(),
        });
    }
    let precision_warning = rel_log10 > -20.0;

    Ok(CollocationSolution {
        kernel: kernel.clone(),
        centers,
        lambda,
        diagnostics: SolveDiagnostics {
            cond,
            residual_inf,
            rhs_inf,
            relative_residual,
            solve_seconds: started.elapsed().as_secs_f64(),
            precision_warning,
        },
    })
}

impl CollocationSolution {
    /// `u_hat(point) = sum_j lambda_j phi(point - x_j)` in center order.
    pub fn evaluate(&self, point: &Point) -> Result<BigScalar, SolveError> {
        if point.dim() != self.kernel.dim().as_usize() {
            return Err(SolveError::DimensionMismatch {
                kernel: self.kernel.dim().as_usize(),
                problem: point.dim(),
            });
        }
        let ctx = self.kernel.context();
        let mut acc = ctx.zero();
        let mut tmp = ctx.zero();
        for (center, lam) in self.centers.iter().zip(self.lambda.as_slice()) {
            let phi = self.kernel.value_from_r_sq(&point.dist_sq(center));
            tmp.assign_mul(lam, &phi);
            acc += &tmp;
        }
        Ok(acc)
    }

    /// Evaluate at many points (parallel over points, deterministic).
    pub fn evaluate_many(&self, points: &[Point]) -> Result<Vec<BigScalar>, SolveError> {
        points.par_iter().map(|p| self.evaluate(p)).collect()
    }
}

/// Root mean square of a list of values, fixed ascending summation order.
pub fn rms(values: &[BigScalar], ctx: PrecisionContext) -> BigScalar {
    if values.is_empty() {
        return ctx.zero();
    }
    let mut acc = ctx.zero();
    for v in values {
        acc += &v.square();
    }
    acc /= &ctx.from_u64(values.len() as u64);
    acc.sqrt()
}

/// Measure the solution against the manufactured truth on the problem's test
/// point sets: `rms` over the domain lattice, `rms_boundary` over the
/// boundary test points (the two endpoints in 1D).
pub fn error_report(
    sol: &CollocationSolution,
    problem: &CollocationProblem,
) -> Result<ErrorReport, SolveError> {
    if problem.test_domain.is_empty() {
        return Err(SolveError::EmptyTestSet("domain"));
    }
    if problem.test_boundary.is_empty() {
        return Err(SolveError::EmptyTestSet("boundary"));
    }
    let ctx = problem.context();

    let domain_errs: Result<Vec<BigScalar>, SolveError> = problem
        .test_domain
        .par_iter()
        .map(|p| Ok(&problem.solution.exact_u(p) - &sol.evaluate(p)?))
        .collect();
    let boundary_errs: Result<Vec<BigScalar>, SolveError> = problem
        .test_boundary
        .par_iter()
        .map(|p| Ok(&problem.solution.boundary_g(p) - &sol.evaluate(p)?))
        .collect();

    Ok(ErrorReport {
        rms: rms(&domain_errs?, ctx),
        rms_boundary: rms(&boundary_errs?, ctx),
        n_test_domain: problem.test_domain.len(),
        n_test_boundary: problem.test_boundary.len(),
    })
}

// --- solution archive -------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct KernelFile {
    beta: String,
    c: String,
    dim: usize,
}

#[derive(Serialize, Deserialize)]
struct DiagnosticsFile {
    cond: String,
    residual_inf: String,
    rhs_inf: String,
    relative_residual: String,
    solve_seconds: f64,
    precision_warning: bool,
}

/// On-disk solution format: everything needed to re-evaluate `u_hat` without
/// re-solving, with scalars as exact decimal strings.
#[derive(Serialize, Deserialize)]
struct SolutionFile {
    schema: String,
    digits: u32,
    kernel: KernelFile,
    centers: Vec<Vec<String>>,
    lambda: Vec<String>,
    diagnostics: DiagnosticsFile,
}

pub const SOLUTION_SCHEMA: &str = "rbf-solution/1";

impl CollocationSolution {
    pub fn to_json(&self) -> String {
        let file = SolutionFile {
            schema: SOLUTION_SCHEMA.to_owned(),
            digits: self.kernel.digits(),
            kernel: KernelFile {
                beta: self.kernel.beta().to_decimal_string(),
                c: self.kernel.shape().to_decimal_string(),
                dim: self.kernel.dim().as_usize(),
            },
            centers: self
                .centers
                .iter()
                .map(|p| p.coords().iter().map(|c| c.to_decimal_string()).collect())
                .collect(),
            lambda: self
                .lambda
                .iter()
                .map(|l| l.to_decimal_string())
                .collect(),
            diagnostics: DiagnosticsFile {
                cond: self.diagnostics.cond.to_decimal_string(),
                residual_inf: self.diagnostics.residual_inf.to_decimal_string(),
                rhs_inf: self.diagnostics.rhs_inf.to_decimal_string(),
                relative_residual: self.diagnostics.relative_residual.to_decimal_string(),
                solve_seconds: self.diagnostics.solve_seconds,
                precision_warning: self.diagnostics.precision_warning,
            },
        };
        serde_json::to_string_pretty(&file).expect("solution serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, SolveError> {
        let file: SolutionFile = serde_json::from_str(text)
            .map_err(|e| SolveError::MalformedSolution(e.to_string()))?;
        if file.schema != SOLUTION_SCHEMA {
            return Err(SolveError::MalformedSolution(format!(
                "unknown schema {:?}, expected {SOLUTION_SCHEMA:?}",
                file.schema
            )));
        }
        let ctx = PrecisionContext::new(file.digits)?;
        let dim = crate::kernel::Dim::from_usize(file.kernel.dim).ok_or_else(|| {
            SolveError::MalformedSolution(format!("dimension {} not supported", file.kernel.dim))
        })?;
        let kernel =
            MultiquadricKernel::new(ctx.parse(&file.kernel.beta)?, ctx.parse(&file.kernel.c)?, dim)?;
        if file.lambda.len() != file.centers.len() {
            return Err(SolveError::MalformedSolution(format!(
                "{} coefficients for {} centers",
                file.lambda.len(),
                file.centers.len()
            )));
        }
        if file.centers.is_empty() {
            return Err(SolveError::MalformedSolution("no centers".to_owned()));
        }
        let mut centers = Vec::with_capacity(file.centers.len());
        for coords in &file.centers {
            if coords.len() != dim.as_usize() {
                return Err(SolveError::MalformedSolution(format!(
                    "center with {} coordinates in a {}D solution",
                    coords.len(),
                    dim.as_usize()
                )));
            }
            let parsed: Result<Vec<BigScalar>, PrecisionError> =
                coords.iter().map(|c| ctx.parse(c)).collect();
            centers.push(Point::new(parsed?));
        }
        let lambda: Result<Vec<BigScalar>, PrecisionError> =
            file.lambda.iter().map(|l| ctx.parse(l)).collect();
        let lambda = DenseVector::from_vec(ctx, lambda?)?;
        Ok(CollocationSolution {
            kernel,
            centers,
            lambda,
            diagnostics: SolveDiagnostics {
                cond: ctx.parse(&file.diagnostics.cond)?,
                residual_inf: ctx.parse(&file.diagnostics.residual_inf)?,
                rhs_inf: ctx.parse(&file.diagnostics.rhs_inf)?,
                relative_residual: ctx.parse(&file.diagnostics.relative_residual)?,
                solve_seconds: file.diagnostics.solve_seconds,
                precision_warning: file.diagnostics.precision_warning,
            },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::Dim;
    use crate::problem::{Domain, GridSpec, ManufacturedGaussian};

    fn ctx(digits: u32) -> PrecisionContext {
        PrecisionContext::new(digits).unwrap()
    }

    fn small_problem_1d(digits: u32, n: usize) -> CollocationProblem {
        let c = ctx(digits);
        let domain = Domain::interval(c.zero(), c.from_i64(10)).unwrap();
        let solution = ManufacturedGaussian::new(c.one()).unwrap();
        CollocationProblem::build(domain, GridSpec::new(n).unwrap(), solution, 20, 2).unwrap()
    }

    fn imq(problem: &CollocationProblem, c_val: i64) -> MultiquadricKernel {
        let c = problem.context();
        MultiquadricKernel::inverse_multiquadric(c.from_i64(c_val), problem.dim()).unwrap()
    }

    #[test]
    fn assembly_structure_three_points() {
        // grid {0, 5, 10}: one interior row (the Laplacian at 5) then two
        // Dirichlet rows at 0 and 10; centers ordered [5, 0, 10].
        let p = small_problem_1d(80, 3);
        let k = imq(&p, 1);
        let c = p.context();
        let (a, b) = assemble(&p, &k).unwrap();
        assert_eq!(a.rows(), 3);
        assert_eq!(a.cols(), 3);
        // interior diagonal: Laplacian at zero offset = -1/c^3 = -1
        let rel = (&(a.get(0, 0) - &c.from_i64(-1)) / &c.from_i64(-1)).abs();
        assert!(rel < c.parse("1e-75").unwrap());
        // Dirichlet diagonal: phi(0) = 1/c = 1
        let rel = (&(a.get(1, 1) - &c.one()) / &c.one()).abs();
        assert!(rel < c.parse("1e-75").unwrap());
        // right-hand side: interior row is f(5), boundary rows are g(0), g(10)
        let want_b0 = p.solution.laplacian_u(&p.interior[0]);
        assert_eq!(b.get(0), &want_b0);
        assert_eq!(b.get(1), &p.solution.exact_u(&p.boundary[0]));
    }

    #[test]
    fn two_d_interior_diagonal_entry() {
        let c = ctx(80);
        let domain = Domain::square(c.zero(), c.from_i64(2)).unwrap();
        let solution = ManufacturedGaussian::new(c.one()).unwrap();
        let p =
            CollocationProblem::build(domain, GridSpec::new(3).unwrap(), solution, 9, 4).unwrap();
        let k = MultiquadricKernel::inverse_multiquadric(c.from_i64(3), Dim::Two).unwrap();
        let (a, _) = assemble(&p, &k).unwrap();
        // -2/c^3 = -2/27
        let want = &c.from_i64(-2) / &c.from_i64(27);
        let rel = (&(a.get(0, 0) - &want) / &want).abs();
        assert!(rel < c.parse("1e-75").unwrap());
    }

    #[test]
    fn streaming_residual_matches_materialized_residual() {
        let p = small_problem_1d(100, 7);
        let k = imq(&p, 2);
        let (a, b) = assemble(&p, &k).unwrap();
        let f = crate::precision::lu_factor(&a).unwrap();
        let lambda = lu_solve(&f, &b).unwrap();
        let direct = crate::precision::residual_inf_norm(&a, &lambda, &b).unwrap();
        let streamed =
            streaming_residual_inf(&p, &k, &p.centers(), &lambda, &b).unwrap();
        assert_eq!(direct, streamed, "streamed residual must be bit-identical");
    }

    #[test]
    fn solve_reproduces_boundary_data_at_nodes() {
        let p = small_problem_1d(100, 9);
        let k = imq(&p, 2);
        let sol = solve(&p, &k).unwrap();
        // at a boundary node the Dirichlet row makes u_hat match g to the
        // residual bound
        let bound = &sol.diagnostics.residual_inf * &p.context().from_i64(10);
        for bp in &p.boundary {
            let got = sol.evaluate(bp).unwrap();
            let want = p.solution.boundary_g(bp);
            assert!(
                (&got - &want).abs() <= bound,
                "boundary node value off: {got} vs {want}"
            );
        }
        assert!(!sol.diagnostics.precision_warning);
    }

    #[test]
    fn pure_interpolation_problem_interpolates() {
        // All grid points flagged as boundary: every row is a Dirichlet row,
        // so the solution interpolates u at every node.
        let c = ctx(100);
        let domain = Domain::interval(c.zero(), c.from_i64(4)).unwrap();
        let solution = ManufacturedGaussian::new(c.one()).unwrap();
        let grid = GridSpec::new(5).unwrap();
        let (interior, boundary) = crate::problem::generate_grid(&domain, &grid);
        let mut all = boundary.clone();
        all.extend(interior);
        // order points deterministically by coordinate
        all.sort_by(|p, q| p.coord(0).cmp(q.coord(0)));
        let problem = CollocationProblem {
            domain,
            grid,
            solution,
            interior: Vec::new(),
            boundary: all,
            test_domain: crate::problem::generate_test_points(
                &Domain::interval(c.zero(), c.from_i64(4)).unwrap(),
                10,
                2,
            )
            .unwrap()
            .0,
            test_boundary: vec![
                Point::new(vec![c.zero()]),
                Point::new(vec![c.from_i64(4)]),
            ],
        };
        let k = imq(&problem, 1);
        let sol = solve(&problem, &k).unwrap();
        let bound = &sol.diagnostics.residual_inf * &c.from_i64(10);
        for node in &problem.boundary {
            let got = sol.evaluate(node).unwrap();
            let want = problem.solution.exact_u(node);
            assert!((&got - &want).abs() <= bound);
        }
    }

    #[test]
    fn single_point_problem_has_closed_form_coefficient() {
        // One boundary node: lambda = g(x1)/phi(0) = c * g(x1) for beta=-1.
        let c = ctx(80);
        let domain = Domain::interval(c.zero(), c.from_i64(10)).unwrap();
        let solution = ManufacturedGaussian::new(c.one()).unwrap();
        let problem = CollocationProblem {
            domain,
            grid: GridSpec::new(3).unwrap(),
            solution,
            interior: Vec::new(),
            boundary: vec![Point::new(vec![c.zero()])],
            test_domain: vec![Point::new(vec![c.one()])],
            test_boundary: vec![Point::new(vec![c.zero()])],
        };
        let k = imq(&problem, 7);
        let sol = solve(&problem, &k).unwrap();
        let want = &c.from_i64(7) * &problem.solution.exact_u(&problem.boundary[0]);
        let rel = (&(sol.lambda.get(0) - &want) / &want).abs();
        assert!(rel < c.parse("1e-70").unwrap());
    }

    #[test]
    fn evaluate_trivial_cases() {
        let p = small_problem_1d(80, 5);
        let k = imq(&p, 3);
        let c = p.context();
        // zero coefficients evaluate to zero anywhere
        let zero_sol = CollocationSolution {
            kernel: k.clone(),
            centers: p.centers(),
            lambda: DenseVector::zeros(c, p.n_data()),
            diagnostics: SolveDiagnostics {
                cond: c.one(),
                residual_inf: c.zero(),
                rhs_inf: c.one(),
                relative_residual: c.zero(),
                solve_seconds: 0.0,
                precision_warning: false,
            },
        };
        assert_eq!(
            zero_sol.evaluate(&Point::new(vec![c.from_ratio(7, 3)])).unwrap(),
            c.zero()
        );

        // single center with lambda = c evaluates to 1 at the center
        let single = CollocationSolution {
            kernel: k.clone(),
            centers: vec![Point::new(vec![c.one()])],
            lambda: DenseVector::from_vec(c, vec![c.from_i64(3)]).unwrap(),
            diagnostics: zero_sol.diagnostics.clone(),
        };
        let got = single.evaluate(&Point::new(vec![c.one()])).unwrap();
        let rel = (&(&got - &c.one()) / &c.one()).abs();
        assert!(rel < c.parse("1e-75").unwrap());
    }

    #[test]
    fn rms_matches_hand_computed_cases() {
        let c = ctx(60);
        assert_eq!(rms(&[], c), c.zero());
        // constant error e at every point gives rms = e
        let e = c.from_ratio(3, 7);
        let vals: Vec<BigScalar> = (0..5).map(|_| e.clone()).collect();
        let got = rms(&vals, c);
        let rel = (&(&got - &e) / &e).abs();
        assert!(rel < c.parse("1e-55").unwrap());
        // zero error everywhere
        let zeros: Vec<BigScalar> = (0..4).map(|_| c.zero()).collect();
        assert_eq!(rms(&zeros, c), c.zero());
    }

    #[test]
    fn solution_json_round_trip_is_exact() {
        let p = small_problem_1d(80, 5);
        let k = imq(&p, 2);
        let sol = solve(&p, &k).unwrap();
        let json = sol.to_json();
        let back = CollocationSolution::from_json(&json).unwrap();
        assert_eq!(back.lambda, sol.lambda);
        assert_eq!(back.centers.len(), sol.centers.len());
        let c = p.context();
        let at = Point::new(vec![c.from_ratio(13, 7)]);
        assert_eq!(sol.evaluate(&at).unwrap(), back.evaluate(&at).unwrap());
        assert_eq!(back.diagnostics.cond, sol.diagnostics.cond);
    }

    #[test]
    fn solution_json_rejects_bad_files() {
        assert!(CollocationSolution::from_json("{}").is_err());
        assert!(CollocationSolution::from_json("not json").is_err());
        let p = small_problem_1d(80, 5);
        let k = imq(&p, 2);
        let sol = solve(&p, &k).unwrap();
        let wrong_schema = sol.to_json().replace(SOLUTION_SCHEMA, "rbf-solution/99");
        assert!(CollocationSolution::from_json(&wrong_schema).is_err());
    }

    #[test]
    fn kernel_problem_mismatches_are_rejected() {
        let p = small_problem_1d(80, 5);
        let c2 = ctx(90);
        let k_wrong_digits =
            MultiquadricKernel::inverse_multiquadric(c2.from_i64(2), Dim::One).unwrap();
        assert!(matches!(
            solve(&p, &k_wrong_digits),
            Err(SolveError::PrecisionMismatch { .. })
        ));
        let c = p.context();
        let k_wrong_dim =
            MultiquadricKernel::inverse_multiquadric(c.from_i64(2), Dim::Two).unwrap();
        assert!(matches!(
            solve(&p, &k_wrong_dim),
            Err(SolveError::DimensionMismatch { .. })
        ));
    }
}

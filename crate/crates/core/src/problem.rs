//! Dirichlet Poisson problems with manufactured Gaussian solutions.
//!
//! A problem bundles a domain (interval or axis-aligned square), a uniform
//! collocation grid split into interior and boundary points, the test point
//! sets used for error measurement, and the manufactured solution
//! `u(x) = exp(-(sigma/2.1) ||x||^2)` from which the right-hand side
//! `f = Delta u` and the boundary data `g = u` are derived in closed form.
//!
//! Point generation is exact on the boundary: endpoint coordinates are the
//! domain bounds themselves, never recomputed through rounded arithmetic, so
//! the "any coordinate equals a bound" boundary classification is exact.

use thiserror::Error;

use crate::kernel::Dim;
use crate::precision::{BigScalar, PrecisionContext};

#[derive(Debug, Error)]
pub enum ProblemError {
    #[error("domain requires lower < upper, got [{0}, {1}]")]
    InvalidDomain(String, String),
    #[error("grid needs at least 3 points per axis, got {0}")]
    GridTooSmall(usize),
    #[error("sigma must be positive and finite, got {0}")]
    InvalidSigma(String),
    #[error("need at least 2 domain test points, got {0}")]
    TestCountTooSmall(usize),
    #[error("2D domain test count must be a perfect square, got {0}")]
    TestCountNotSquare(usize),
    #[error("2D boundary test count must be positive and divisible by 4, got {0}")]
    BoundaryTestsNotDivisible(usize),
    #[error("1D problems take exactly 2 boundary test points (the endpoints), got {0}")]
    BoundaryTestsNotTwo(usize),
    #[error("unknown built-in problem {0:?} (available: paper-1d, paper-2d)")]
    UnknownProblem(String),
    #[error("precision context mismatch between problem components")]
    ContextMismatch,
}

/// A point in 1 or 2 dimensions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Point {
    coords: Vec<BigScalar>,
}

impl Point {
    pub fn new(coords: Vec<BigScalar>) -> Self {
        assert!(
            coords.len() == 1 || coords.len() == 2,
            "points are 1D or 2D"
        );
        Self { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[BigScalar] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> &BigScalar {
        &self.coords[i]
    }

    pub fn digits(&self) -> u32 {
        self.coords[0].digits()
    }

    /// Squared Euclidean norm, ascending-coordinate summation.
    pub fn norm_sq(&self) -> BigScalar {
        let mut acc = self.coords[0].square();
        for c in &self.coords[1..] {
            acc += &c.square();
        }
        acc
    }

    /// Squared distance to `other`, ascending-coordinate summation.
    pub fn dist_sq(&self, other: &Point) -> BigScalar {
        debug_assert_eq!(self.dim(), other.dim());
        let mut d = &self.coords[0] - &other.coords[0];
        let mut acc = d.square();
        for (a, b) in self.coords[1..].iter().zip(&other.coords[1..]) {
            d.assign_sub(a, b);
            acc += &d.square();
        }
        acc
    }
}

/// Interval `[a, b]` or square `[a, b]^2`.
#[derive(Debug, Clone)]
pub enum Domain {
    Interval { a: BigScalar, b: BigScalar },
    Square { a: BigScalar, b: BigScalar },
}

impl Domain {
    pub fn interval(a: BigScalar, b: BigScalar) -> Result<Self, ProblemError> {
        Self::check(&a, &b)?;
        Ok(Domain::Interval { a, b })
    }

    pub fn square(a: BigScalar, b: BigScalar) -> Result<Self, ProblemError> {
        Self::check(&a, &b)?;
        Ok(Domain::Square { a, b })
    }

    fn check(a: &BigScalar, b: &BigScalar) -> Result<(), ProblemError> {
        if a >= b {
            return Err(ProblemError::InvalidDomain(
                a.to_decimal_string(),
                b.to_decimal_string(),
            ));
        }
        Ok(())
    }

    pub fn dim(&self) -> Dim {
        match self {
            Domain::Interval { .. } => Dim::One,
            Domain::Square { .. } => Dim::Two,
        }
    }

    pub fn bounds(&self) -> (&BigScalar, &BigScalar) {
        match self {
            Domain::Interval { a, b } | Domain::Square { a, b } => (a, b),
        }
    }

    pub fn digits(&self) -> u32 {
        self.bounds().0.digits()
    }

    /// Domain diameter: `b - a` for intervals, `(b - a) * sqrt(2)` for squares.
    pub fn diameter(&self) -> BigScalar {
        let (a, b) = self.bounds();
        let side = b - a;
        match self {
            Domain::Interval { .. } => side,
            Domain::Square { .. } => &side * &side.context().from_i64(2).sqrt(),
        }
    }

    /// True iff some coordinate equals a bound exactly.
    pub fn on_boundary(&self, p: &Point) -> bool {
        let (a, b) = self.bounds();
        p.coords().iter().any(|c| c == a || c == b)
    }
}

/// Uniform tensor grid resolution.
#[derive(Debug, Clone, Copy)]
pub struct GridSpec {
    points_per_axis: usize,
}

impl GridSpec {
    pub fn new(points_per_axis: usize) -> Result<Self, ProblemError> {
        if points_per_axis < 3 {
            return Err(ProblemError::GridTooSmall(points_per_axis));
        }
        Ok(Self { points_per_axis })
    }

    pub fn points_per_axis(&self) -> usize {
        self.points_per_axis
    }

    /// Fill distance: half the spacing in 1D, `spacing * sqrt(2) / 2` in 2D
    /// (half the cell diagonal).
    pub fn fill_distance(&self, domain: &Domain) -> BigScalar {
        let (a, b) = domain.bounds();
        let ctx = a.context();
        let spacing = &(b - a) / &ctx.from_u64((self.points_per_axis - 1) as u64);
        let half = &spacing / &ctx.from_i64(2);
        match domain.dim() {
            Dim::One => half,
            Dim::Two => &half * &ctx.from_i64(2).sqrt(),
        }
    }
}

/// Coordinate `i` of `n` uniformly spaced values on `[a, b]`, endpoints exact.
fn lattice_coord(a: &BigScalar, b: &BigScalar, i: usize, n: usize) -> BigScalar {
    debug_assert!(n >= 2 && i < n);
    if i == 0 {
        return a.clone();
    }
    if i == n - 1 {
        return b.clone();
    }
    let ctx = a.context();
    let last = (n - 1) as u64;
    let num = &(a * &ctx.from_u64(last - i as u64)) + &(b * &ctx.from_u64(i as u64));
    &num / &ctx.from_u64(last)
}

/// Uniform collocation grid split into interior and boundary points, both in
/// lexicographic coordinate order.
pub fn generate_grid(domain: &Domain, grid: &GridSpec) -> (Vec<Point>, Vec<Point>) {
    let (a, b) = domain.bounds();
    let n = grid.points_per_axis();
    let axis: Vec<BigScalar> = (0..n).map(|i| lattice_coord(a, b, i, n)).collect();
    let mut interior = Vec::new();
    let mut boundary = Vec::new();
    match domain.dim() {
        Dim::One => {
            for (i, x) in axis.iter().enumerate() {
                let p = Point::new(vec![x.clone()]);
                if i == 0 || i == n - 1 {
                    boundary.push(p);
                } else {
                    interior.push(p);
                }
            }
        }
        Dim::Two => {
            for (ix, x) in axis.iter().enumerate() {
                for (iy, y) in axis.iter().enumerate() {
                    let p = Point::new(vec![x.clone(), y.clone()]);
                    if ix == 0 || ix == n - 1 || iy == 0 || iy == n - 1 {
                        boundary.push(p);
                    } else {
                        interior.push(p);
                    }
                }
            }
        }
    }
    (interior, boundary)
}

/// Test point sets: an inclusive uniform lattice over the domain, plus evenly
/// spaced boundary points (in 2D: `count/4` per side walked counterclockwise,
/// each corner owned by exactly one side; in 1D: the two endpoints).
pub fn generate_test_points(
    domain: &Domain,
    count_domain: usize,
    count_boundary: usize,
) -> Result<(Vec<Point>, Vec<Point>), ProblemError> {
    let (a, b) = domain.bounds();
    match domain.dim() {
        Dim::One => {
            if count_domain < 2 {
                return Err(ProblemError::TestCountTooSmall(count_domain));
            }
            if count_boundary != 2 {
                return Err(ProblemError::BoundaryTestsNotTwo(count_boundary));
            }
            let domain_pts = (0..count_domain)
                .map(|i| Point::new(vec![lattice_coord(a, b, i, count_domain)]))
                .collect();
            let boundary_pts = vec![
                Point::new(vec![a.clone()]),
                Point::new(vec![b.clone()]),
            ];
            Ok((domain_pts, boundary_pts))
        }
        Dim::Two => {
            let side = (count_domain as f64).sqrt().round() as usize;
            if side < 2 || side * side != count_domain {
                return Err(ProblemError::TestCountNotSquare(count_domain));
            }
            if count_boundary == 0 || count_boundary % 4 != 0 {
                return Err(ProblemError::BoundaryTestsNotDivisible(count_boundary));
            }
            let axis: Vec<BigScalar> = (0..side).map(|i| lattice_coord(a, b, i, side)).collect();
            let mut domain_pts = Vec::with_capacity(count_domain);
            for x in &axis {
                for y in &axis {
                    domain_pts.push(Point::new(vec![x.clone(), y.clone()]));
                }
            }

            // m points per side at spacing (b-a)/m; the shared corner belongs
            // to the side that starts there.
            let m = count_boundary / 4;
            let offsets: Vec<BigScalar> =
                (0..m).map(|i| lattice_coord(a, b, i, m + 1)).collect();
            let mirror: Vec<BigScalar> = offsets
                .iter()
                .map(|t| {
                    if t == a {
                        b.clone()
                    } else {
                        &(a + b) - t
                    }
                })
                .collect();
            let mut boundary_pts = Vec::with_capacity(count_boundary);
            for t in &offsets {
                boundary_pts.push(Point::new(vec![t.clone(), a.clone()]));
            }
            for t in &offsets {
                boundary_pts.push(Point::new(vec![b.clone(), t.clone()]));
            }
            for t in &mirror {
                boundary_pts.push(Point::new(vec![t.clone(), b.clone()]));
            }
            for t in &mirror {
                boundary_pts.push(Point::new(vec![a.clone(), t.clone()]));
            }
            Ok((domain_pts, boundary_pts))
        }
    }
}

/// Manufactured solution `u(x) = exp(-(sigma/2.1) ||x||^2)`.
///
/// The 2.1 denominator is part of the family, not a tunable.
#[derive(Debug, Clone)]
pub struct ManufacturedGaussian {
    sigma: BigScalar,
    decay: BigScalar,
}

impl ManufacturedGaussian {
    pub fn new(sigma: BigScalar) -> Result<Self, ProblemError> {
        if !sigma.is_finite() || sigma <= sigma.context().zero() {
            return Err(ProblemError::InvalidSigma(sigma.to_decimal_string()));
        }
        let decay = &sigma / &sigma.context().from_ratio(21, 10);
        Ok(Self { sigma, decay })
    }

    pub fn sigma(&self) -> &BigScalar {
        &self.sigma
    }

    pub fn digits(&self) -> u32 {
        self.sigma.digits()
    }

    /// Exact solution value.
    pub fn exact_u(&self, p: &Point) -> BigScalar {
        (-&(&self.decay * &p.norm_sq())).exp()
    }

    /// `f = Delta u`: with `d = sigma/2.1` and `r^2 = ||x||^2`, this is
    /// `u * (4 d^2 r^2 - 2 dim d)`.
    pub fn laplacian_u(&self, p: &Point) -> BigScalar {
        let ctx = self.sigma.context();
        let r_sq = p.norm_sq();
        let u = (-&(&self.decay * &r_sq)).exp();
        let four_d_sq = &(&self.decay * &self.decay) * &ctx.from_i64(4);
        let mut poly = &four_d_sq * &r_sq;
        let two_dim_d = &self.decay * &ctx.from_i64(2 * p.dim() as i64);
        poly -= &two_dim_d;
        &u * &poly
    }

    /// Dirichlet data `g = u` restricted to the boundary.
    pub fn boundary_g(&self, p: &Point) -> BigScalar {
        self.exact_u(p)
    }
}

/// A fully generated collocation problem.
#[derive(Debug, Clone)]
pub struct CollocationProblem {
    pub domain: Domain,
    pub grid: GridSpec,
    pub solution: ManufacturedGaussian,
    pub interior: Vec<Point>,
    pub boundary: Vec<Point>,
    pub test_domain: Vec<Point>,
    pub test_boundary: Vec<Point>,
}

impl CollocationProblem {
    pub fn build(
        domain: Domain,
        grid: GridSpec,
        solution: ManufacturedGaussian,
        count_test_domain: usize,
        count_test_boundary: usize,
    ) -> Result<Self, ProblemError> {
        if domain.digits() != solution.digits() {
            return Err(ProblemError::ContextMismatch);
        }
        let (interior, boundary) = generate_grid(&domain, &grid);
        let (test_domain, test_boundary) =
            generate_test_points(&domain, count_test_domain, count_test_boundary)?;
        Ok(Self {
            domain,
            grid,
            solution,
            interior,
            boundary,
            test_domain,
            test_boundary,
        })
    }

    pub fn dim(&self) -> Dim {
        self.domain.dim()
    }

    pub fn digits(&self) -> u32 {
        self.domain.digits()
    }

    pub fn context(&self) -> PrecisionContext {
        PrecisionContext::new(self.digits()).expect("problem context is valid")
    }

    /// Number of collocation points (interior + boundary).
    pub fn n_data(&self) -> usize {
        self.interior.len() + self.boundary.len()
    }

    /// Collocation centers in the deterministic assembly order:
    /// interior points first, then boundary points.
    pub fn centers(&self) -> Vec<Point> {
        let mut c = Vec::with_capacity(self.n_data());
        c.extend(self.interior.iter().cloned());
        c.extend(self.boundary.iter().cloned());
        c
    }
}

/// Right-hand side of the collocation system at a grid or test point:
/// `g` on the boundary (classified exactly), `f` in the interior.
pub fn rhs_and_boundary(problem: &CollocationProblem, p: &Point) -> BigScalar {
    if problem.domain.on_boundary(p) {
        problem.solution.boundary_g(p)
    } else {
        problem.solution.laplacian_u(p)
    }
}

/// The 1D experiment: `sigma = 1` on `[0, 10]`, 201 collocation points,
/// 400 domain test points plus the 2 endpoints.
pub fn paper_1d(ctx: PrecisionContext) -> Result<CollocationProblem, ProblemError> {
    let domain = Domain::interval(ctx.zero(), ctx.from_i64(10))?;
    let solution = ManufacturedGaussian::new(ctx.one())?;
    CollocationProblem::build(domain, GridSpec::new(201)?, solution, 400, 2)
}

/// The 2D experiment: `sigma = 1e-36` on `[0, 1e16]^2`, a 41x41 grid
/// (1681 points, 160 on the boundary), 6400 domain and 800 boundary tests.
pub fn paper_2d(ctx: PrecisionContext) -> Result<CollocationProblem, ProblemError> {
    let b = ctx.parse("1e16").expect("1e16 parses");
    let domain = Domain::square(ctx.zero(), b)?;
    let sigma = ctx.parse("1e-36").expect("1e-36 parses");
    let solution = ManufacturedGaussian::new(sigma)?;
    CollocationProblem::build(domain, GridSpec::new(41)?, solution, 6400, 800)
}

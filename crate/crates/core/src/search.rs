//! Shape-parameter selection: sweeps over a list of `c` values and the
//! boundary-RMS directed search.
//!
//! The directed search starts from a predicted optimum `c0` (the prediction
//! itself is an input, not computed here), probes one neighbor on each side,
//! walks in the direction where the boundary RMS shrinks, and stops as soon
//! as it grows. The criterion is the boundary RMS exclusively: it is
//! computable from the Dirichlet data without knowing the true solution,
//! which is what makes the stopping rule usable on real problems. The domain
//! RMS is recorded in every trace entry but never steers the search.

use std::sync::Mutex;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::kernel::MultiquadricKernel;
use crate::precision::BigScalar;
use crate::problem::CollocationProblem;
use crate::solver::{error_report, solve};

/// Relative tolerance when matching `c` values between arithmetic paths
/// (e.g. a step walk landing on a value that was swept from a parsed
/// expression). Far coarser than any working precision, far finer than any
/// step size.
const C_MATCH_RTOL_LOG10: i32 = -30;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),
    #[error("evaluation at c = {c} failed: {error}")]
    Evaluation { c: String, error: String },
}

/// Metrics from one solved shape parameter.
#[derive(Debug, Clone, Serialize)]
pub struct SweepMetrics {
    pub rms: BigScalar,
    pub rms_boundary: BigScalar,
    pub cond: BigScalar,
    pub residual: BigScalar,
    pub solve_seconds: f64,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum SweepOutcome {
    Solved(SweepMetrics),
    Failed { error: String },
}

/// One row of a sweep or search trace.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRecord {
    pub c: BigScalar,
    #[serde(flatten)]
    pub outcome: SweepOutcome,
}

impl SweepRecord {
    pub fn metrics(&self) -> Option<&SweepMetrics> {
        match &self.outcome {
            SweepOutcome::Solved(m) => Some(m),
            SweepOutcome::Failed { .. } => None,
        }
    }
}

/// Anything that can price a shape parameter. The production implementation
/// solves the collocation system; tests and dry runs replay tabulated values.
pub trait CriterionEvaluator: Sync {
    fn evaluate(&self, c: &BigScalar) -> SweepRecord;
}

/// Solves the real collocation problem for each requested `c`.
pub struct SolveEvaluator<'a> {
    problem: &'a CollocationProblem,
    beta: BigScalar,
}

impl<'a> SolveEvaluator<'a> {
    pub fn new(problem: &'a CollocationProblem, beta: BigScalar) -> Self {
        Self { problem, beta }
    }
}

impl CriterionEvaluator for SolveEvaluator<'_> {
    fn evaluate(&self, c: &BigScalar) -> SweepRecord {
        let outcome = (|| -> Result<SweepMetrics, String> {
            let kernel =
                MultiquadricKernel::new(self.beta.clone(), c.clone(), self.problem.dim())
                    .map_err(|e| e.to_string())?;
            let sol = solve(self.problem, &kernel).map_err(|e| e.to_string())?;
            let report = error_report(&sol, self.problem).map_err(|e| e.to_string())?;
            Ok(SweepMetrics {
                rms: report.rms,
                rms_boundary: report.rms_boundary,
                cond: sol.diagnostics.cond,
                residual: sol.diagnostics.residual_inf,
                solve_seconds: sol.diagnostics.solve_seconds,
            })
        })();
        match outcome {
            Ok(m) => SweepRecord {
                c: c.clone(),
                outcome: SweepOutcome::Solved(m),
            },
            Err(error) => SweepRecord {
                c: c.clone(),
                outcome: SweepOutcome::Failed { error },
            },
        }
    }
}

fn c_close(a: &BigScalar, b: &BigScalar) -> bool {
    if a == b {
        return true;
    }
    let diff = (a - b).abs();
    if diff.is_zero() {
        return true;
    }
    let scale = a.abs().max(&b.abs());
    diff.log10_abs_f64() - scale.log10_abs_f64() <= C_MATCH_RTOL_LOG10 as f64
}

/// Replays recorded rows; `c` values match within a relative tolerance so a
/// stepped walk lands on swept values regardless of the arithmetic path.
pub struct TableEvaluator {
    rows: Vec<SweepRecord>,
}

impl TableEvaluator {
    pub fn new(rows: Vec<SweepRecord>) -> Self {
        Self { rows }
    }
}

impl CriterionEvaluator for TableEvaluator {
    fn evaluate(&self, c: &BigScalar) -> SweepRecord {
        for row in &self.rows {
            if c_close(&row.c, c) {
                return row.clone();
            }
        }
        SweepRecord {
            c: c.clone(),
            outcome: SweepOutcome::Failed {
                error: format!("c = {} is not tabulated", c.to_decimal_string()),
            },
        }
    }
}

/// Caches evaluations (optionally pre-seeded from an earlier sweep) in front
/// of another evaluator, so a `c` is never solved twice.
pub struct CachingEvaluator<E> {
    inner: E,
    cache: Mutex<Vec<SweepRecord>>,
}

impl<E: CriterionEvaluator> CachingEvaluator<E> {
    pub fn new(inner: E) -> Self {
        Self {
            inner,
            cache: Mutex::new(Vec::new()),
        }
    }

    pub fn seeded(inner: E, records: Vec<SweepRecord>) -> Self {
        Self {
            inner,
            cache: Mutex::new(records),
        }
    }
}

impl<E: CriterionEvaluator> CriterionEvaluator for CachingEvaluator<E> {
    fn evaluate(&self, c: &BigScalar) -> SweepRecord {
        if let Some(hit) = self
            .cache
            .lock()
            .expect("cache lock")
            .iter()
            .find(|r| c_close(&r.c, c))
        {
            return hit.clone();
        }
        let rec = self.inner.evaluate(c);
        self.cache.lock().expect("cache lock").push(rec.clone());
        rec
    }
}

/// Sweep an arbitrary evaluator over a list of `c` values with a bounded
/// worker pool. Output is sorted by ascending `c`; failures are recorded as
/// rows rather than aborting the sweep. `on_record` fires as each record
/// completes (completion order), for live monitoring.
pub fn sweep_with(
    evaluator: &(impl CriterionEvaluator + ?Sized),
    c_list: &[BigScalar],
    workers: usize,
    on_record: &(dyn Fn(&SweepRecord) + Sync),
) -> Vec<SweepRecord> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .expect("worker pool");
    let mut records: Vec<SweepRecord> = pool.install(|| {
        c_list
            .par_iter()
            .map(|c| {
                let rec = evaluator.evaluate(c);
                on_record(&rec);
                rec
            })
            .collect()
    });
    records.sort_by(|a, b| a.c.cmp(&b.c));
    records
}

/// Solve the collocation problem across `c_list`; see [`sweep_with`].
pub fn sweep(
    problem: &CollocationProblem,
    beta: &BigScalar,
    c_list: &[BigScalar],
    workers: usize,
    on_record: &(dyn Fn(&SweepRecord) + Sync),
) -> Vec<SweepRecord> {
    let evaluator = SolveEvaluator::new(problem, beta.clone());
    sweep_with(&evaluator, c_list, workers, on_record)
}

/// Step sizes consumed while walking away from `c0`. The first entry is used
/// for both initial neighbors; later moves consume subsequent entries and the
/// last entry repeats once the list is exhausted.
#[derive(Debug, Clone)]
pub enum StepSchedule {
    /// `next = current +/- step`; steps must be positive.
    Additive(Vec<BigScalar>),
    /// `next = current * step` or `current / step`; steps must exceed 1.
    Multiplicative(Vec<BigScalar>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Direction {
    Down,
    Up,
}

impl StepSchedule {
    fn validate(&self) -> Result<(), SearchError> {
        let (steps, minimum_ok): (&[BigScalar], fn(&BigScalar) -> bool) = match self {
            StepSchedule::Additive(s) => (s, |v: &BigScalar| *v > v.context().zero()),
            StepSchedule::Multiplicative(s) => (s, |v: &BigScalar| *v > v.context().one()),
        };
        if steps.is_empty() {
            return Err(SearchError::InvalidConfig(
                "step schedule must not be empty".into(),
            ));
        }
        for s in steps {
            if !s.is_finite() || !minimum_ok(s) {
                return Err(SearchError::InvalidConfig(format!(
                    "invalid step {} (additive steps must be > 0, multiplicative > 1)",
                    s.to_decimal_string()
                )));
            }
        }
        Ok(())
    }

    fn step(&self, idx: usize) -> &BigScalar {
        let steps = match self {
            StepSchedule::Additive(s) | StepSchedule::Multiplicative(s) => s,
        };
        &steps[idx.min(steps.len() - 1)]
    }

    fn apply(&self, from: &BigScalar, idx: usize, dir: Direction) -> BigScalar {
        let step = self.step(idx);
        match (self, dir) {
            (StepSchedule::Additive(_), Direction::Down) => from - step,
            (StepSchedule::Additive(_), Direction::Up) => from + step,
            (StepSchedule::Multiplicative(_), Direction::Down) => from / step,
            (StepSchedule::Multiplicative(_), Direction::Up) => from * step,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    /// Externally predicted optimal shape parameter; the search starts here.
    pub c0: BigScalar,
    pub schedule: StepSchedule,
    /// Total evaluation budget including the three-point probe.
    pub max_evals: usize,
}

impl SearchConfig {
    /// Constant additive step of `c0/10`, the default when nothing better is
    /// known about the criterion's length scale.
    pub fn with_default_schedule(c0: BigScalar, max_evals: usize) -> Self {
        let step = &c0 / &c0.context().from_i64(10);
        Self {
            c0,
            schedule: StepSchedule::Additive(vec![step]),
            max_evals,
        }
    }

    fn validate(&self) -> Result<(), SearchError> {
        if !self.c0.is_finite() || self.c0 <= self.c0.context().zero() {
            return Err(SearchError::InvalidConfig(format!(
                "c0 must be positive, got {}",
                self.c0.to_decimal_string()
            )));
        }
        if self.max_evals < 3 {
            return Err(SearchError::InvalidConfig(format!(
                "max_evals must allow the initial three-point probe, got {}",
                self.max_evals
            )));
        }
        self.schedule.validate()
    }
}

/// Why the search stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    /// The boundary RMS grew relative to the previous step.
    CriterionRose,
    /// Both probe neighbors were at least as bad as `c0`: it is a local
    /// minimum at the step resolution.
    NonDescent,
    /// The evaluation budget ran out; `best_c` is best-so-far.
    BudgetExhausted,
    /// The next step would have left `c > 0`.
    DomainEdge,
}

#[derive(Debug, Clone)]
pub struct SearchResult {
    pub best_c: BigScalar,
    pub trace: Vec<SweepRecord>,
    pub termination: Termination,
}

struct SearchState<'a, F: FnMut(&SweepRecord)> {
    evaluator: &'a dyn CriterionEvaluator,
    trace: Vec<SweepRecord>,
    max_evals: usize,
    on_record: F,
}

enum Priced {
    Value(BigScalar),
    OverBudget,
}

impl<F: FnMut(&SweepRecord)> SearchState<'_, F> {
    /// Boundary RMS at `c`, reusing the trace entry when `c` was already
    /// evaluated (a probed value is never re-solved during the walk).
    fn price(&mut self, c: &BigScalar) -> Result<Priced, SearchError> {
        if let Some(hit) = self.trace.iter().find(|r| c_close(&r.c, c)) {
            return match hit.metrics() {
                Some(m) => Ok(Priced::Value(m.rms_boundary.clone())),
                None => Err(SearchError::Evaluation {
                    c: c.to_decimal_string(),
                    error: "cached evaluation failed".into(),
                }),
            };
        }
        if self.trace.len() >= self.max_evals {
            return Ok(Priced::OverBudget);
        }
        let rec = self.evaluator.evaluate(c);
        (self.on_record)(&rec);
        self.trace.push(rec);
        match self.trace.last().expect("just pushed").metrics() {
            Some(m) => Ok(Priced::Value(m.rms_boundary.clone())),
            None => Err(SearchError::Evaluation {
                c: c.to_decimal_string(),
                error: match &self.trace.last().expect("just pushed").outcome {
                    SweepOutcome::Failed { error } => error.clone(),
                    SweepOutcome::Solved(_) => unreachable!("metrics() was None"),
                },
            }),
        }
    }

    fn must_price(&mut self, c: &BigScalar) -> Result<BigScalar, SearchError> {
        match self.price(c)? {
            Priced::Value(v) => Ok(v),
            Priced::OverBudget => Err(SearchError::InvalidConfig(
                "budget exhausted during the initial probe (max_evals >= 3 required)".into(),
            )),
        }
    }
}

/// Directed search for the shape parameter minimizing the boundary RMS.
///
/// Evaluates `c0` and one neighbor on each side, walks in the direction of
/// the strictly smaller neighbor (tie: smaller `c`, which also means smaller
/// condition numbers), and stops when the criterion rises, the budget runs
/// out, or a step would leave the positive axis. Returns the best evaluated
/// `c`, the full trace in evaluation order, and the stop reason.
pub fn directed_search(
    evaluator: &dyn CriterionEvaluator,
    config: &SearchConfig,
    on_record: impl FnMut(&SweepRecord),
) -> Result<SearchResult, SearchError> {
    config.validate()?;
    let ctx = config.c0.context();
    let mut state = SearchState {
        evaluator,
        trace: Vec::new(),
        max_evals: config.max_evals,
        on_record,
    };

    let rb_center = state.must_price(&config.c0)?;
    let down_c = config.schedule.apply(&config.c0, 0, Direction::Down);
    if down_c <= ctx.zero() {
        return Err(SearchError::InvalidConfig(format!(
            "first step moves the probe to {} <= 0",
            down_c.to_decimal_string()
        )));
    }
    let rb_down = state.must_price(&down_c)?;
    let up_c = config.schedule.apply(&config.c0, 0, Direction::Up);
    let rb_up = state.must_price(&up_c)?;

    let down_improves = rb_down < rb_center;
    let up_improves = rb_up < rb_center;
    if !down_improves && !up_improves {
        return Ok(SearchResult {
            best_c: config.c0.clone(),
            trace: state.trace,
            termination: Termination::NonDescent,
        });
    }
    // Strictly better side wins; a tie goes down (cheaper conditioning).
    let (dir, mut current, mut prev_rb) = if down_improves && (!up_improves || rb_down <= rb_up) {
        (Direction::Down, down_c, rb_down)
    } else {
        (Direction::Up, up_c, rb_up)
    };

    let mut move_idx = 1;
    let termination = loop {
        let next_c = config.schedule.apply(&current, move_idx, dir);
        if next_c <= ctx.zero() {
            break Termination::DomainEdge;
        }
        match state.price(&next_c)? {
            Priced::OverBudget => break Termination::BudgetExhausted,
            Priced::Value(rb) => {
                if rb > prev_rb {
                    break Termination::CriterionRose;
                }
                prev_rb = rb;
                current = next_c;
                move_idx += 1;
            }
        }
    };

    // Best evaluated point: minimal boundary RMS, ties to the smaller c.
    let mut best: Option<(&BigScalar, &BigScalar)> = None;
    for rec in &state.trace {
        if let Some(m) = rec.metrics() {
            let better = match best {
                None => true,
                Some((_, rb)) => {
                    m.rms_boundary < *rb || (m.rms_boundary == *rb && rec.c < *best.unwrap().0)
                }
            };
            if better {
                best = Some((&rec.c, &m.rms_boundary));
            }
        }
    }
    let best_c = best.expect("at least the probe was evaluated").0.clone();

    Ok(SearchResult {
        best_c,
        trace: state.trace,
        termination,
    })
}

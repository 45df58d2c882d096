//! Search for configurations maximizing the objective.
//!
//! The objective is a sum of minima of quadratics: non-convex, piecewise
//! smooth, with kinks wherever a nearest neighbor switches. The workhorse is
//! a derivative-free coordinate pattern search with a shrinking step, wrapped
//! in deterministic multistart. A lattice brute force provides an independent
//! oracle for small n, and a sweep utility pairs searched maxima with the
//! closed-form three-point bound across aspect ratios.

use serde::Serialize;
use thiserror::Error;

use crate::closed_form::s3;
use crate::exec::map_indexed;
use crate::geom::{
    check_theorem_bound, sigma_unchecked, BoundViolation, Configuration, GeomError, Point, Rect,
    BOUND_SLACK, DEFAULT_DISTINCT_TOL, SQUARE_TOL,
};
use crate::rng::SplitMix64;

/// A probe must beat the incumbent by more than this to be accepted.
const IMPROVE_EPS: f64 = 1e-12;
/// Evaluation budget guard for the lattice brute force.
const GRID_BUDGET: u128 = 10_000_000;

#[derive(Debug, Error)]
pub enum OptError {
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error("need at least 2 points, got n={0}")]
    TooFewPoints(usize),
    #[error("restarts must be positive")]
    NoRestarts,
    #[error("shrink factor must lie in (0, 1), got {0}")]
    BadShrink(f64),
    #[error("init_step must be positive, got {0}")]
    BadInitStep(f64),
    #[error("max_iters must be positive")]
    BadMaxIters,
    #[error("min_step {min_step} must be positive and below init_step*min(a,b) = {cap}")]
    BadMinStep { min_step: f64, cap: f64 },
    #[error("grid oracle supports n in 2..=4, got n={0}")]
    UnsupportedGridN(usize),
    #[error("grid resolution m must be at least 1")]
    BadGridResolution,
    #[error(
        "budget exceeded: C(({m}+1)^2, {n}) = {combos} evaluations is over the {budget} cap; try a smaller m"
    )]
    BudgetExceeded {
        m: usize,
        n: usize,
        combos: u128,
        budget: u128,
    },
    #[error("failed to draw {n} distinct points after {attempts} attempts")]
    StartGeneration { n: usize, attempts: usize },
    #[error("counterexample alarm: {0}")]
    Counterexample(BoundViolation),
}

/// Knobs for the pattern search and its multistart wrapper.
#[derive(Debug, Clone, Serialize)]
pub struct SearchParams {
    /// Number of independent random restarts.
    pub restarts: u32,
    /// Initial probe step as a fraction of min(a, b).
    pub init_step: f64,
    /// Step multiplier applied after a sweep without improvement.
    pub shrink: f64,
    /// Terminate once the absolute probe step falls below this.
    pub min_step: f64,
    /// Maximum number of coordinate sweeps per restart.
    pub max_iters: u32,
    /// Base seed; restart r draws from an independent stream derived from it.
    pub seed: u64,
    /// Run simulated annealing before the pattern-search polish.
    pub anneal: bool,
}

impl Default for SearchParams {
    fn default() -> Self {
        Self {
            restarts: 64,
            init_step: 0.25,
            shrink: 0.5,
            min_step: 1e-9,
            max_iters: 10_000,
            seed: 0,
            anneal: false,
        }
    }
}

impl SearchParams {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    fn validate(&self, rect: Rect) -> Result<(), OptError> {
        if self.restarts == 0 {
            return Err(OptError::NoRestarts);
        }
        if !(self.shrink > 0.0 && self.shrink < 1.0) {
            return Err(OptError::BadShrink(self.shrink));
        }
        if !(self.init_step > 0.0 && self.init_step.is_finite()) {
            return Err(OptError::BadInitStep(self.init_step));
        }
        if self.max_iters == 0 {
            return Err(OptError::BadMaxIters);
        }
        let cap = self.init_step * rect.min_side();
        if !(self.min_step > 0.0 && self.min_step < cap) {
            return Err(OptError::BadMinStep {
                min_step: self.min_step,
                cap,
            });
        }
        Ok(())
    }
}

/// Outcome of a search run.
#[derive(Debug, Clone, Serialize)]
pub struct OptReport {
    pub best_value: f64,
    pub best_config: Configuration,
    /// The reference line 2a^2 + 2b^2.
    pub bound: f64,
    /// bound - best_value; nonnegative up to slack for a correct run.
    pub gap: f64,
    pub evals: u64,
    pub restarts_run: u32,
    pub seed: u64,
    pub per_restart_values: Vec<f64>,
    /// True when no exact supremum is known for this (rect, n) case, so the
    /// value is only a lower bound on the supremum.
    pub conjectural: bool,
}

impl OptReport {
    fn new(
        rect: Rect,
        best: Vec<Point>,
        best_value: f64,
        evals: u64,
        restarts_run: u32,
        seed: u64,
        per_restart_values: Vec<f64>,
    ) -> Result<Self, OptError> {
        check_theorem_bound(best_value, rect, BOUND_SLACK).map_err(OptError::Counterexample)?;
        let n = best.len();
        let best_config = Configuration::new(rect, best)?;
        debug_assert!((best_config.sigma() - best_value).abs() <= 1e-12);
        Ok(Self {
            best_value,
            bound: rect.theorem_bound(),
            gap: rect.theorem_bound() - best_value,
            best_config,
            evals,
            restarts_run,
            seed,
            per_restart_values,
            conjectural: is_conjectural(rect, n),
        })
    }
}

/// The exact supremum is known for n = 2, n = 3, and n = 4 on a square;
/// everything else is reported as a conjectural lower bound.
fn is_conjectural(rect: Rect, n: usize) -> bool {
    match n {
        2 | 3 => false,
        4 => (rect.a() - rect.b()).abs() > SQUARE_TOL,
        _ => true,
    }
}

struct RestartOutcome {
    value: f64,
    points: Vec<Point>,
    evals: u64,
}

/// Coordinate pattern search from a fixed start.
///
/// Probes each of the 2n coordinates by +/-step (clamped to the rectangle),
/// accepts the first strict improvement, and halves the step after a full
/// sweep without one. Probes that would bring two points within the
/// distinctness tolerance are rejected, so the objective stays well-defined.
pub fn local_search(start: &Configuration, params: &SearchParams) -> Result<OptReport, OptError> {
    let rect = start.rect();
    params.validate(rect)?;
    let mut rng = SplitMix64::stream(params.seed, 0);
    let out = run_restart(rect, start.points().to_vec(), params, &mut rng);
    OptReport::new(
        rect,
        out.points,
        out.value,
        out.evals,
        1,
        params.seed,
        vec![out.value],
    )
}

/// Multistart search from uniform random starts.
///
/// Restart r draws its start from an independent stream derived from
/// (seed, r), restarts are merged by a deterministic reduction (maximum
/// value, ties to the lowest restart index), and the collected per-restart
/// values are identical for any worker count.
pub fn multistart(rect: Rect, n: usize, params: &SearchParams) -> Result<OptReport, OptError> {
    multistart_with_starts(rect, n, params, &[])
}

/// Multistart with extra caller-provided starts appended after the random
/// ones (cross-seeding, e.g. from the grid oracle's maximizer).
pub fn multistart_with_starts(
    rect: Rect,
    n: usize,
    params: &SearchParams,
    extra_starts: &[Configuration],
) -> Result<OptReport, OptError> {
    if n < 2 {
        return Err(OptError::TooFewPoints(n));
    }
    params.validate(rect)?;
    let random = params.restarts as usize;
    let total = random + extra_starts.len();

    let outcomes: Vec<Result<RestartOutcome, OptError>> = map_indexed(total, |r| {
        let mut rng = SplitMix64::stream(params.seed, r as u64);
        let start = if r < random {
            random_points(rect, n, &mut rng)?
        } else {
            extra_starts[r - random].points().to_vec()
        };
        Ok(run_restart(rect, start, params, &mut rng))
    });

    let mut per_restart_values = Vec::with_capacity(total);
    let mut evals = 0u64;
    let mut best: Option<(f64, Vec<Point>)> = None;
    for outcome in outcomes {
        let out = outcome?;
        per_restart_values.push(out.value);
        evals += out.evals;
        let better = match &best {
            None => true,
            Some((v, _)) => out.value > *v,
        };
        if better {
            best = Some((out.value, out.points));
        }
    }
    let (value, points) = best.expect("at least one restart");
    OptReport::new(
        rect,
        points,
        value,
        evals,
        total as u32,
        params.seed,
        per_restart_values,
    )
}

fn random_points(rect: Rect, n: usize, rng: &mut SplitMix64) -> Result<Vec<Point>, OptError> {
    const ATTEMPTS: usize = 1000;
    let t2 = DEFAULT_DISTINCT_TOL * DEFAULT_DISTINCT_TOL;
    'attempt: for _ in 0..ATTEMPTS {
        let pts: Vec<Point> = (0..n)
            .map(|_| Point::new(rng.next_in(0.0, rect.a()), rng.next_in(0.0, rect.b())))
            .collect();
        for i in 0..n {
            for j in (i + 1)..n {
                if pts[i].dist_sq(pts[j]) <= t2 {
                    continue 'attempt;
                }
            }
        }
        return Ok(pts);
    }
    Err(OptError::StartGeneration {
        n,
        attempts: ATTEMPTS,
    })
}

fn run_restart(
    rect: Rect,
    mut pts: Vec<Point>,
    params: &SearchParams,
    rng: &mut SplitMix64,
) -> RestartOutcome {
    let mut evals = 0u64;
    let mut value = if params.anneal {
        anneal(rect, &mut pts, rng, &mut evals)
    } else {
        evals += 1;
        sigma_unchecked(&pts)
    };
    value = pattern_search(rect, &mut pts, value, params, &mut evals);
    RestartOutcome {
        value,
        points: pts,
        evals,
    }
}

fn pattern_search(
    rect: Rect,
    pts: &mut [Point],
    mut cur: f64,
    params: &SearchParams,
    evals: &mut u64,
) -> f64 {
    let n = pts.len();
    let t2 = DEFAULT_DISTINCT_TOL * DEFAULT_DISTINCT_TOL;
    let mut step = params.init_step * rect.min_side();
    let mut sweeps = 0u32;
    while step >= params.min_step && sweeps < params.max_iters {
        sweeps += 1;
        let mut improved = false;
        for i in 0..n {
            'coord: for c in 0..2 {
                let (old, hi) = if c == 0 {
                    (pts[i].x, rect.a())
                } else {
                    (pts[i].y, rect.b())
                };
                for dir in [1.0, -1.0] {
                    let cand = (old + dir * step).clamp(0.0, hi);
                    if cand == old {
                        continue;
                    }
                    if c == 0 {
                        pts[i].x = cand;
                    } else {
                        pts[i].y = cand;
                    }
                    let coincides = (0..n).any(|k| k != i && pts[k].dist_sq(pts[i]) <= t2);
                    if !coincides {
                        *evals += 1;
                        let val = sigma_unchecked(pts);
                        if val > cur + IMPROVE_EPS {
                            cur = val;
                            improved = true;
                            continue 'coord;
                        }
                    }
                    // revert the rejected probe
                    if c == 0 {
                        pts[i].x = old;
                    } else {
                        pts[i].y = old;
                    }
                }
            }
        }
        if !improved {
            step *= params.shrink;
        }
    }
    cur
}

// Annealing schedule; internal knobs, not part of SearchParams.
const ANNEAL_ITERS: u32 = 4000;
const ANNEAL_T0_FRAC: f64 = 0.25; // of a^2 + b^2
const ANNEAL_TF_FRAC: f64 = 1e-6; // final temperature as a fraction of T0
const ANNEAL_MOVE_FRAC: f64 = 0.3; // of min(a, b), scaled down with temperature

/// Simulated annealing on one point at a time: Gaussian moves clamped to the
/// rectangle, geometric cooling, Metropolis acceptance for downhill moves.
/// Returns the best value seen and leaves `pts` at the best configuration.
fn anneal(rect: Rect, pts: &mut Vec<Point>, rng: &mut SplitMix64, evals: &mut u64) -> f64 {
    let n = pts.len();
    let t2 = DEFAULT_DISTINCT_TOL * DEFAULT_DISTINCT_TOL;
    let t0 = ANNEAL_T0_FRAC * rect.diag_sq();
    let cooling = ANNEAL_TF_FRAC.powf(1.0 / ANNEAL_ITERS as f64);
    let mut temp = t0;
    *evals += 1;
    let mut cur = sigma_unchecked(pts);
    let mut best = cur;
    let mut best_pts = pts.clone();
    for _ in 0..ANNEAL_ITERS {
        let i = (rng.next_u64() % n as u64) as usize;
        let scale = ANNEAL_MOVE_FRAC * rect.min_side() * (temp / t0).sqrt();
        let old = pts[i];
        pts[i] = Point::new(
            (old.x + scale * rng.next_gaussian()).clamp(0.0, rect.a()),
            (old.y + scale * rng.next_gaussian()).clamp(0.0, rect.b()),
        );
        let coincides = (0..n).any(|k| k != i && pts[k].dist_sq(pts[i]) <= t2);
        if coincides {
            pts[i] = old;
        } else {
            *evals += 1;
            let val = sigma_unchecked(pts);
            let delta = val - cur;
            let accept = delta >= 0.0 || rng.next_f64() < (delta / temp).exp();
            if accept {
                cur = val;
                if cur > best {
                    best = cur;
                    best_pts.clone_from(pts);
                }
            } else {
                pts[i] = old;
            }
        }
        temp *= cooling;
    }
    *pts = best_pts;
    best
}

/// Exhaustive search over all n-subsets of the (m+1) x (m+1) lattice
/// {(i a/m, j b/m)}. Exact on its lattice; an independent oracle for the
/// continuous search, not a bound on it.
pub fn brute_force_grid(rect: Rect, n: usize, m: usize) -> Result<OptReport, OptError> {
    if !(2..=4).contains(&n) {
        return Err(OptError::UnsupportedGridN(n));
    }
    if m < 1 {
        return Err(OptError::BadGridResolution);
    }
    let sites_len = (m + 1) * (m + 1);
    let combos = binomial(sites_len as u128, n as u128);
    if combos > GRID_BUDGET {
        return Err(OptError::BudgetExceeded {
            m,
            n,
            combos,
            budget: GRID_BUDGET,
        });
    }

    let mut sites = Vec::with_capacity(sites_len);
    for iy in 0..=m {
        for ix in 0..=m {
            sites.push(Point::new(
                ix as f64 * rect.a() / m as f64,
                iy as f64 * rect.b() / m as f64,
            ));
        }
    }

    // fan out over the first subset element; each task scans its tail
    // combinations sequentially and reports its lexicographically first best
    let per_first: Vec<(f64, [usize; 4])> = map_indexed(sites_len, |first| {
        let mut best = (f64::NEG_INFINITY, [usize::MAX; 4]);
        let mut consider = |value: f64, idx: [usize; 4]| {
            if value > best.0 {
                best = (value, idx);
            }
        };
        match n {
            2 => {
                for j in (first + 1)..sites_len {
                    let v = sigma_unchecked(&[sites[first], sites[j]]);
                    consider(v, [first, j, usize::MAX, usize::MAX]);
                }
            }
            3 => {
                for j in (first + 1)..sites_len {
                    for k in (j + 1)..sites_len {
                        let v = sigma_unchecked(&[sites[first], sites[j], sites[k]]);
                        consider(v, [first, j, k, usize::MAX]);
                    }
                }
            }
            _ => {
                for j in (first + 1)..sites_len {
                    for k in (j + 1)..sites_len {
                        for l in (k + 1)..sites_len {
                            let v =
                                sigma_unchecked(&[sites[first], sites[j], sites[k], sites[l]]);
                            consider(v, [first, j, k, l]);
                        }
                    }
                }
            }
        }
        best
    });

    // deterministic merge: larger value wins, exact ties to the smaller
    // index tuple
    let mut best = (f64::NEG_INFINITY, [usize::MAX; 4]);
    for cand in per_first {
        if cand.0 > best.0 || (cand.0 == best.0 && cand.1 < best.1) {
            best = cand;
        }
    }
    let points: Vec<Point> = best.1.iter().take(n).map(|&i| sites[i]).collect();
    OptReport::new(rect, points, best.0, combos as u64, 0, 0, Vec::new())
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let mut result: u128 = 1;
    for i in 0..k {
        result = result * (n - i) / (i + 1);
    }
    result
}

/// One row of the search-versus-closed-form comparison.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SweepRow {
    pub ratio: f64,
    pub found: f64,
    pub closed_form: f64,
    pub rel_err: f64,
}

/// For each aspect ratio r, search Rect(1, r) with n = 3 and pair the result
/// with the closed-form S3(1, r).
pub fn sweep_vs_s3(ratios: &[f64], params: &SearchParams) -> Result<Vec<SweepRow>, OptError> {
    let mut rows = Vec::with_capacity(ratios.len());
    for &ratio in ratios {
        let rect = Rect::new(1.0, ratio)?;
        let found = multistart(rect, 3, params)?.best_value;
        let closed_form = s3(1.0, ratio)?.value;
        rows.push(SweepRow {
            ratio,
            found,
            closed_form,
            rel_err: (found - closed_form).abs() / closed_form,
        });
    }
    Ok(rows)
}

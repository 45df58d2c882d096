//! Objective evaluation for point sets in a rectangle.
//!
//! The objective of the whole crate lives here: for distinct points
//! P_1..P_n in an a x b rectangle, each point's nearest-neighbor distance is
//! d_i = min_{k != i} |P_i P_k|, and `sigma` is the sum of the squared d_i.
//! The module also provides the closed-form upper bound 2a^2 + 2b^2, the two
//! reference configurations attaining it, and the quadrisection of a
//! configuration into the four half-size quadrants.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Slack allowed when checking point containment in the rectangle.
pub const DEFAULT_CONTAIN_TOL: f64 = 1e-9;
/// Two points closer than this are treated as coincident.
pub const DEFAULT_DISTINCT_TOL: f64 = 1e-12;
/// Slack allowed on the upper bound 2a^2 + 2b^2 before an observed value
/// counts as a violation.
pub const BOUND_SLACK: f64 = 1e-9;
/// Maximum |a - b| for a rectangle to count as a square.
pub const SQUARE_TOL: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum GeomError {
    #[error("rectangle sides must be positive finite reals, got a={a}, b={b}")]
    InvalidRect { a: f64, b: f64 },
    #[error("degenerate set: need at least 2 points, got {0}")]
    DegenerateSet(usize),
    #[error("points not distinct: points {i} and {j} are within {tol:e}")]
    PointsNotDistinct { i: usize, j: usize, tol: f64 },
    #[error("point {index} at ({x}, {y}) lies outside the rectangle")]
    OutOfRect { index: usize, x: f64, y: f64 },
    #[error("coordinates must be finite, got ({x}, {y})")]
    NonFinite { x: f64, y: f64 },
    #[error("square required: sides {a} and {b} differ by more than {tol:e}")]
    SquareRequired { a: f64, b: f64, tol: f64 },
}

/// Observed objective value above the closed-form bound: either an
/// implementation bug or a counterexample, and both must fail loudly.
#[derive(Debug, Error, Clone, Copy, PartialEq)]
#[error("objective value {sigma} exceeds the bound {bound} (excess {:e})", sigma - bound)]
pub struct BoundViolation {
    pub sigma: f64,
    pub bound: f64,
}

/// Side lengths of the ambient rectangle [0, a] x [0, b].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawRect")]
pub struct Rect {
    a: f64,
    b: f64,
}

#[derive(Deserialize)]
struct RawRect {
    a: f64,
    b: f64,
}

impl TryFrom<RawRect> for Rect {
    type Error = GeomError;
    fn try_from(raw: RawRect) -> Result<Self, GeomError> {
        Rect::new(raw.a, raw.b)
    }
}

impl Rect {
    pub fn new(a: f64, b: f64) -> Result<Self, GeomError> {
        if !(a.is_finite() && b.is_finite() && a > 0.0 && b > 0.0) {
            return Err(GeomError::InvalidRect { a, b });
        }
        Ok(Self { a, b })
    }

    pub fn unit_square() -> Self {
        Self { a: 1.0, b: 1.0 }
    }

    #[inline]
    pub fn a(&self) -> f64 {
        self.a
    }

    #[inline]
    pub fn b(&self) -> f64 {
        self.b
    }

    /// Squared diagonal a^2 + b^2, the scale factor of every inequality here.
    #[inline]
    pub fn diag_sq(&self) -> f64 {
        self.a * self.a + self.b * self.b
    }

    #[inline]
    pub fn diag(&self) -> f64 {
        self.diag_sq().sqrt()
    }

    #[inline]
    pub fn min_side(&self) -> f64 {
        self.a.min(self.b)
    }

    /// The exact upper bound 2a^2 + 2b^2 on the objective.
    #[inline]
    pub fn theorem_bound(&self) -> f64 {
        2.0 * self.diag_sq()
    }

    pub fn is_square(&self) -> bool {
        (self.a - self.b).abs() <= SQUARE_TOL
    }

    /// The half-size cell of the quadrisection.
    pub fn quadrant_cell(&self) -> Rect {
        Rect {
            a: self.a / 2.0,
            b: self.b / 2.0,
        }
    }
}

/// A point of the plane; serialized as the pair [x, y].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "[f64; 2]", try_from = "[f64; 2]")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    #[inline]
    pub fn dist_sq(&self, other: Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    #[inline]
    pub fn dist(&self, other: Point) -> f64 {
        self.dist_sq(other).sqrt()
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

impl TryFrom<[f64; 2]> for Point {
    type Error = GeomError;
    fn try_from(c: [f64; 2]) -> Result<Self, GeomError> {
        if !(c[0].is_finite() && c[1].is_finite()) {
            return Err(GeomError::NonFinite { x: c[0], y: c[1] });
        }
        Ok(Point::new(c[0], c[1]))
    }
}

/// Raw, unvalidated configuration data as it appears on disk.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConfigurationData {
    pub rect: Rect,
    pub points: Vec<Point>,
}

/// A rectangle together with n >= 2 distinct contained points.
///
/// Construction validates every invariant, so downstream evaluation never
/// fails. Deserialization goes through [`ConfigurationData`] with the
/// default tolerances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ConfigurationData")]
pub struct Configuration {
    rect: Rect,
    points: Vec<Point>,
}

impl TryFrom<ConfigurationData> for Configuration {
    type Error = GeomError;
    fn try_from(data: ConfigurationData) -> Result<Self, GeomError> {
        Configuration::new(data.rect, data.points)
    }
}

impl Configuration {
    pub fn new(rect: Rect, points: Vec<Point>) -> Result<Self, GeomError> {
        Self::with_tolerances(rect, points, DEFAULT_CONTAIN_TOL, DEFAULT_DISTINCT_TOL)
    }

    pub fn with_tolerances(
        rect: Rect,
        points: Vec<Point>,
        contain_tol: f64,
        distinct_tol: f64,
    ) -> Result<Self, GeomError> {
        if points.len() < 2 {
            return Err(GeomError::DegenerateSet(points.len()));
        }
        for (index, p) in points.iter().enumerate() {
            if !(p.x.is_finite() && p.y.is_finite()) {
                return Err(GeomError::NonFinite { x: p.x, y: p.y });
            }
            let inside = p.x >= -contain_tol
                && p.x <= rect.a() + contain_tol
                && p.y >= -contain_tol
                && p.y <= rect.b() + contain_tol;
            if !inside {
                return Err(GeomError::OutOfRect {
                    index,
                    x: p.x,
                    y: p.y,
                });
            }
        }
        check_distinct(&points, distinct_tol)?;
        Ok(Self { rect, points })
    }

    #[inline]
    pub fn rect(&self) -> Rect {
        self.rect
    }

    #[inline]
    pub fn points(&self) -> &[Point] {
        &self.points
    }

    #[inline]
    pub fn n_points(&self) -> usize {
        self.points.len()
    }

    /// Per-point nearest-neighbor distances, nearest indices, and the sum of
    /// squares. Infallible because the invariants hold by construction.
    pub fn nn_summary(&self) -> NnSummary {
        nn_summary_unchecked(&self.points)
    }

    /// Sum of squared nearest-neighbor distances.
    pub fn sigma(&self) -> f64 {
        sigma_unchecked(&self.points)
    }

    /// Distance of the objective from the bound 2a^2 + 2b^2; nonnegative up
    /// to floating-point slack for every valid configuration.
    pub fn gap(&self) -> f64 {
        self.rect.theorem_bound() - self.sigma()
    }

    /// Assign every point to exactly one of the four half-size quadrants.
    pub fn quadrisect(&self) -> Quadrisection {
        let mut groups: [Vec<Point>; 4] = Default::default();
        for &p in &self.points {
            groups[quadrant_index(p, self.rect)].push(p);
        }
        Quadrisection {
            cell: self.rect.quadrant_cell(),
            groups,
        }
    }
}

/// Half-open quadrant assignment: x < a/2 goes left, y < b/2 goes bottom.
/// Order matches the quadrisection convention: bottom-left, bottom-right,
/// top-left, top-right.
#[inline]
pub fn quadrant_index(p: Point, rect: Rect) -> usize {
    let right = p.x >= rect.a() / 2.0;
    let top = p.y >= rect.b() / 2.0;
    (top as usize) * 2 + (right as usize)
}

/// Result of splitting a configuration into the four quadrants.
#[derive(Debug, Clone)]
pub struct Quadrisection {
    /// The common a/2 x b/2 cell.
    pub cell: Rect,
    /// Points per quadrant, in bottom-left, bottom-right, top-left,
    /// top-right order.
    pub groups: [Vec<Point>; 4],
}

impl Quadrisection {
    pub fn counts(&self) -> [usize; 4] {
        [
            self.groups[0].len(),
            self.groups[1].len(),
            self.groups[2].len(),
            self.groups[3].len(),
        ]
    }
}

/// Nearest-neighbor summary of a configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NnSummary {
    /// d[i]: distance from point i to its nearest neighbor.
    pub d: Vec<f64>,
    /// nearest[i]: index of that neighbor (lowest index on ties).
    pub nearest: Vec<usize>,
    /// Sum of the squared distances.
    pub sigma: f64,
}

fn check_distinct(points: &[Point], tol: f64) -> Result<(), GeomError> {
    let t2 = tol * tol;
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            if points[i].dist_sq(points[j]) <= t2 {
                return Err(GeomError::PointsNotDistinct { i, j, tol });
            }
        }
    }
    Ok(())
}

/// Nearest-neighbor summary of a raw point list, validating arity and
/// distinctness. The entry point for callers holding bare slices.
pub fn nn_summary_of(points: &[Point], distinct_tol: f64) -> Result<NnSummary, GeomError> {
    if points.len() < 2 {
        return Err(GeomError::DegenerateSet(points.len()));
    }
    check_distinct(points, distinct_tol)?;
    Ok(nn_summary_unchecked(points))
}

/// Sum of squared nearest-neighbor distances of a raw point list.
pub fn sigma_of(points: &[Point], distinct_tol: f64) -> Result<f64, GeomError> {
    if points.len() < 2 {
        return Err(GeomError::DegenerateSet(points.len()));
    }
    check_distinct(points, distinct_tol)?;
    Ok(sigma_unchecked(points))
}

pub(crate) fn nn_summary_unchecked(points: &[Point]) -> NnSummary {
    let n = points.len();
    let mut d = Vec::with_capacity(n);
    let mut nearest = Vec::with_capacity(n);
    let mut sigma = 0.0;
    for i in 0..n {
        let (d2, k) = nearest_sq(points, i);
        d.push(d2.sqrt());
        nearest.push(k);
        sigma += d2;
    }
    NnSummary { d, nearest, sigma }
}

/// The hot path: plain O(n^2) scan summing each point's squared
/// nearest-neighbor distance. Assumes n >= 2.
#[inline]
pub(crate) fn sigma_unchecked(points: &[Point]) -> f64 {
    let n = points.len();
    let mut sigma = 0.0;
    for i in 0..n {
        sigma += nearest_sq(points, i).0;
    }
    sigma
}

#[inline]
fn nearest_sq(points: &[Point], i: usize) -> (f64, usize) {
    let mut best = f64::INFINITY;
    let mut arg = usize::MAX;
    for (k, p) in points.iter().enumerate() {
        if k == i {
            continue;
        }
        let d2 = points[i].dist_sq(*p);
        if d2 < best {
            best = d2;
            arg = k;
        }
    }
    (best, arg)
}

/// Check an observed objective value against the bound 2a^2 + 2b^2.
pub fn check_theorem_bound(sigma: f64, rect: Rect, slack: f64) -> Result<(), BoundViolation> {
    let bound = rect.theorem_bound();
    if sigma > bound + slack {
        Err(BoundViolation { sigma, bound })
    } else {
        Ok(())
    }
}

/// The two reference configurations attaining the bound exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EqualityCase {
    /// Two points at opposite vertices of any rectangle.
    DiagonalPair,
    /// The four vertices; requires a square rectangle.
    SquareCorners,
}

pub fn equality_config(rect: Rect, case: EqualityCase) -> Result<Configuration, GeomError> {
    let (a, b) = (rect.a(), rect.b());
    let points = match case {
        EqualityCase::DiagonalPair => vec![Point::new(0.0, 0.0), Point::new(a, b)],
        EqualityCase::SquareCorners => {
            if !rect.is_square() {
                return Err(GeomError::SquareRequired {
                    a,
                    b,
                    tol: SQUARE_TOL,
                });
            }
            vec![
                Point::new(0.0, 0.0),
                Point::new(a, 0.0),
                Point::new(0.0, b),
                Point::new(a, b),
            ]
        }
    };
    Configuration::new(rect, points)
}

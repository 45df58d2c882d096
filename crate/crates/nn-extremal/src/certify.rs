//! Numerical replay of the bounding inequalities and identities.
//!
//! Each operation evaluates one inequality or algebraic identity from the
//! induction that proves the 2a^2 + 2b^2 bound, on concrete sampled
//! parameters, and reports the residual. Identities must vanish and
//! inequalities must be nonpositive, both up to a tolerance relative to the
//! scale a^2 + b^2. The suite runners sample each family at its range
//! endpoints plus a seeded batch of random interior instances; this is a
//! sampling check, not a symbolic proof.

use serde::Serialize;
use thiserror::Error;

use crate::exec::map_indexed;
use crate::geom::{
    sigma_unchecked, Configuration, GeomError, Point, Rect, DEFAULT_CONTAIN_TOL,
    DEFAULT_DISTINCT_TOL,
};
use crate::rng::SplitMix64;

/// Default relative tolerance for residual checks.
pub const DEFAULT_IDENTITY_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum CertifyError {
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error("not Case 1: quadrant counts {counts:?} must all be at least 2")]
    NotCase1 { counts: [usize; 4] },
    #[error("{what} at ({x}, {y}) violates its required containment")]
    Containment { what: String, x: f64, y: f64 },
    #[error("{name} = {value} outside [{lo}, {hi}]")]
    RangeViolation {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },
    #[error("barycentric weights s={s}, t={t} must satisfy s,t >= 0 and s+t <= 1")]
    SimplexViolation { s: f64, t: f64 },
    #[error("ordering violated: need v > w, got v={v}, w={w}")]
    OrderingViolated { v: f64, w: f64 },
}

/// Outcome of one residual evaluation.
#[derive(Debug, Clone, Serialize)]
pub struct ResidualReport {
    pub name: String,
    /// Signed residual; an identity must have |value| small, an inequality
    /// must have value <= (small).
    pub value: f64,
    pub ok: bool,
    /// The sampled parameter vector the residual was evaluated at.
    pub params: Vec<f64>,
}

impl ResidualReport {
    fn identity(name: impl Into<String>, value: f64, scale: f64, tol: f64, params: Vec<f64>) -> Self {
        Self {
            name: name.into(),
            value,
            ok: value.abs() <= tol * scale,
            params,
        }
    }

    fn inequality(
        name: impl Into<String>,
        value: f64,
        scale: f64,
        tol: f64,
        params: Vec<f64>,
    ) -> Self {
        Self {
            name: name.into(),
            value,
            ok: value <= tol * scale,
            params,
        }
    }
}

fn check_range(name: &'static str, value: f64, lo: f64, hi: f64) -> Result<(), CertifyError> {
    if value < lo - DEFAULT_CONTAIN_TOL || value > hi + DEFAULT_CONTAIN_TOL {
        Err(CertifyError::RangeViolation {
            name,
            value,
            lo,
            hi,
        })
    } else {
        Ok(())
    }
}

fn check_in_box(
    what: impl Into<String>,
    p: Point,
    x_lo: f64,
    x_hi: f64,
    y_lo: f64,
    y_hi: f64,
) -> Result<(), CertifyError> {
    let tol = DEFAULT_CONTAIN_TOL;
    if p.x < x_lo - tol || p.x > x_hi + tol || p.y < y_lo - tol || p.y > y_hi + tol {
        Err(CertifyError::Containment {
            what: what.into(),
            x: p.x,
            y: p.y,
        })
    } else {
        Ok(())
    }
}

fn flat_params(rect: Rect, points: &[Point]) -> Vec<f64> {
    let mut v = vec![rect.a(), rect.b()];
    for p in points {
        v.push(p.x);
        v.push(p.y);
    }
    v
}

/// Splitting a configuration whose quadrants all hold at least two points
/// cannot decrease the objective: within-quadrant nearest neighbors are no
/// closer than global ones.
pub fn case1_superadditivity(
    config: &Configuration,
    tol: f64,
) -> Result<ResidualReport, CertifyError> {
    let q = config.quadrisect();
    let counts = q.counts();
    if counts.iter().any(|&c| c < 2) {
        return Err(CertifyError::NotCase1 { counts });
    }
    let split_sum: f64 = q.groups.iter().map(|g| sigma_unchecked(g)).sum();
    let value = config.sigma() - split_sum;
    Ok(ResidualReport::inequality(
        "case1.superadditivity",
        value,
        config.rect().diag_sq(),
        tol,
        flat_params(config.rect(), config.points()),
    ))
}

/// With at least two points in the bottom-left quadrant and a lone point q in
/// the bottom-right one, sigma(p1) + d(q, p1)^2 <= a^2 + b^2.
pub fn lemma1_residual(
    rect: Rect,
    p1: &[Point],
    q: Point,
    tol: f64,
) -> Result<ResidualReport, CertifyError> {
    let (a, b) = (rect.a(), rect.b());
    for (i, p) in p1.iter().enumerate() {
        check_in_box(format!("p1[{i}]"), *p, 0.0, a / 2.0, 0.0, b / 2.0)?;
    }
    check_in_box("q", q, a / 2.0, a, 0.0, b / 2.0)?;
    let sigma_p1 = crate::geom::sigma_of(p1, DEFAULT_DISTINCT_TOL)?;
    let d_sq = p1
        .iter()
        .map(|p| p.dist_sq(q))
        .fold(f64::INFINITY, f64::min);
    let value = sigma_p1 + d_sq - rect.diag_sq();
    let mut params = flat_params(rect, p1);
    params.extend([q.x, q.y]);
    Ok(ResidualReport::inequality(
        "lemma1.bound",
        value,
        rect.diag_sq(),
        tol,
        params,
    ))
}

/// Three boundary points P1=(0,0), P2=(u,b), P3=(a,v): the pairwise-square
/// majorant B6 satisfies B6/2 - (a^2+b^2) = -(a-u)u - (b-v)v exactly, hence
/// B6 <= 2a^2 + 2b^2.
pub fn case6_identity(
    a: f64,
    b: f64,
    u: f64,
    v: f64,
    tol: f64,
) -> Result<ResidualReport, CertifyError> {
    let rect = Rect::new(a, b)?;
    check_range("u", u, 0.0, a)?;
    check_range("v", v, 0.0, b)?;
    let p1 = Point::new(0.0, 0.0);
    let p2 = Point::new(u, b);
    let p3 = Point::new(a, v);
    let b6 = p1.dist_sq(p2) + p1.dist_sq(p3) + p2.dist_sq(p3);
    let scale = rect.diag_sq();
    let value = b6 / 2.0 - scale + (a - u) * u + (b - v) * v;
    let bound_ok = b6 <= 2.0 * scale + tol * scale;
    let mut report = ResidualReport::identity(
        "case6.identity",
        value,
        scale,
        tol,
        vec![a, b, u, v],
    );
    report.ok &= bound_ok;
    Ok(report)
}

fn b71_direct(a: f64, b: f64, u: f64, v: f64, s: f64, t: f64) -> f64 {
    let p1 = Point::new(0.0, 0.0);
    let p2 = Point::new(u, b);
    let p3 = Point::new(a, v);
    let p4 = Point::new(s * u + t * a, s * b + t * v);
    p1.dist_sq(p4)
        + p2.dist_sq(p4)
        + p3.dist_sq(p4)
        + (1.0 - s - t) * p4.dist_sq(p1)
        + s * p4.dist_sq(p2)
        + t * p4.dist_sq(p3)
}

/// Fourth point in the convex hull of three boundary points. Checks the four
/// closed-form residuals at the (u,v) rectangle vertices and the three at
/// the (s,t) simplex corners against direct evaluation of the majorant B71,
/// and that each closed form is nonpositive.
#[allow(clippy::too_many_arguments)]
pub fn case71_residuals(
    a: f64,
    b: f64,
    u: f64,
    v: f64,
    s: f64,
    t: f64,
    tol: f64,
) -> Result<Vec<ResidualReport>, CertifyError> {
    let rect = Rect::new(a, b)?;
    check_range("u", u, 0.0, a)?;
    check_range("v", v, 0.0, b)?;
    let eps = DEFAULT_CONTAIN_TOL;
    if s < -eps || t < -eps || s + t > 1.0 + eps {
        return Err(CertifyError::SimplexViolation { s, t });
    }
    let scale = rect.diag_sq();
    let bound = 2.0 * scale;
    let params = vec![a, b, u, v, s, t];
    let mut reports = Vec::with_capacity(14);

    // vertices of the (u,v) rectangle, with their closed-form residuals
    let st = s + t;
    let vertex_formulas = [
        ("00", 0.0, 0.0, a * a * (t - 1.0) * (2.0 * t + 1.0) + b * b * (s - 1.0) * (2.0 * s + 1.0)),
        ("a0", a, 0.0, a * a * st * (2.0 * st - 3.0) + b * b * (s - 1.0) * (2.0 * s + 1.0)),
        ("0b", 0.0, b, a * a * (t - 1.0) * (2.0 * t + 1.0) + b * b * st * (2.0 * st - 3.0)),
        ("ab", a, b, scale * st * (2.0 * st - 3.0)),
    ];
    for (label, vu, vv, formula) in vertex_formulas {
        let direct = b71_direct(a, b, vu, vv, s, t) - bound;
        reports.push(ResidualReport::identity(
            format!("case71.vertex{label}.identity"),
            direct - formula,
            scale,
            tol,
            params.clone(),
        ));
        reports.push(ResidualReport::inequality(
            format!("case71.vertex{label}.sign"),
            formula,
            scale,
            tol,
            params.clone(),
        ));
    }

    // corners of the (s,t) simplex for the given (u,v)
    let corner_formulas = [
        ("s0t0", 0.0, 0.0, (u * u - a * a) + (v * v - b * b)),
        ("s0t1", 0.0, 1.0, -(2.0 * a - u) * u - 2.0 * (b - v) * v - b * b),
        ("s1t0", 1.0, 0.0, -(2.0 * b - v) * v - 2.0 * (a - u) * u - a * a),
    ];
    for (label, cs, ct, formula) in corner_formulas {
        let direct = b71_direct(a, b, u, v, cs, ct) - bound;
        reports.push(ResidualReport::identity(
            format!("case71.corner{label}.identity"),
            direct - formula,
            scale,
            tol,
            params.clone(),
        ));
        reports.push(ResidualReport::inequality(
            format!("case71.corner{label}.sign"),
            formula,
            scale,
            tol,
            params.clone(),
        ));
    }
    Ok(reports)
}

/// Four boundary points, one per side: P1=(s,0), P2=(0,t), P3=(u,b),
/// P4=(a,v). The cyclic majorant satisfies
/// B721/2 - (a^2+b^2) = -(a-s)s - (b-t)t - (a-u)u - (b-v)v exactly.
pub fn case721_identity(
    a: f64,
    b: f64,
    s: f64,
    t: f64,
    u: f64,
    v: f64,
    tol: f64,
) -> Result<ResidualReport, CertifyError> {
    let rect = Rect::new(a, b)?;
    check_range("s", s, 0.0, a)?;
    check_range("u", u, 0.0, a)?;
    check_range("t", t, 0.0, b)?;
    check_range("v", v, 0.0, b)?;
    let p1 = Point::new(s, 0.0);
    let p2 = Point::new(0.0, t);
    let p3 = Point::new(u, b);
    let p4 = Point::new(a, v);
    let b721 = p1.dist_sq(p2) + p2.dist_sq(p3) + p3.dist_sq(p4) + p4.dist_sq(p1);
    let scale = rect.diag_sq();
    let value =
        b721 / 2.0 - scale + (a - s) * s + (b - t) * t + (a - u) * u + (b - v) * v;
    let mut report = ResidualReport::identity(
        "case721.identity",
        value,
        scale,
        tol,
        vec![a, b, s, t, u, v],
    );
    report.ok &= b721 <= 2.0 * scale + tol * scale;
    Ok(report)
}

/// Four boundary points with P1 on a corner and two points on the opposite
/// side: P1=(0,0), P2=(u,b), P3=(a,v), P4=(a,w) with v > w. The cyclic
/// majorant satisfies
/// B722/2 - (a^2+b^2) = -(a-u)u - (b-v)v - (v-w)w exactly.
pub fn case722_identity(
    a: f64,
    b: f64,
    u: f64,
    v: f64,
    w: f64,
    tol: f64,
) -> Result<ResidualReport, CertifyError> {
    let rect = Rect::new(a, b)?;
    check_range("u", u, 0.0, a)?;
    check_range("v", v, 0.0, b)?;
    check_range("w", w, 0.0, b)?;
    if v <= w {
        return Err(CertifyError::OrderingViolated { v, w });
    }
    let p1 = Point::new(0.0, 0.0);
    let p2 = Point::new(u, b);
    let p3 = Point::new(a, v);
    let p4 = Point::new(a, w);
    let b722 = p1.dist_sq(p2) + p2.dist_sq(p3) + p3.dist_sq(p4) + p4.dist_sq(p1);
    let scale = rect.diag_sq();
    let value = b722 / 2.0 - scale + (a - u) * u + (b - v) * v + (v - w) * w;
    let mut report = ResidualReport::identity(
        "case722.identity",
        value,
        scale,
        tol,
        vec![a, b, u, v, w],
    );
    report.ok &= b722 <= 2.0 * scale + tol * scale;
    Ok(report)
}

/// The quadrant layout of the three-singleton case: at least two points in
/// the bottom-left quadrant and one point in each other quadrant. Verifies
/// the whole majorization chain, one link per report.
pub fn case4_chain(
    rect: Rect,
    p1: &[Point],
    q2: Point,
    q3: Point,
    q4: Point,
    tol: f64,
) -> Result<Vec<ResidualReport>, CertifyError> {
    let (a, b) = (rect.a(), rect.b());
    for (i, p) in p1.iter().enumerate() {
        check_in_box(format!("p1[{i}]"), *p, 0.0, a / 2.0, 0.0, b / 2.0)?;
    }
    check_in_box("q2", q2, a / 2.0, a, 0.0, b / 2.0)?;
    check_in_box("q3", q3, 0.0, a / 2.0, b / 2.0, b)?;
    check_in_box("q4", q4, a / 2.0, a, b / 2.0, b)?;
    let sigma_p1 = crate::geom::sigma_of(p1, DEFAULT_DISTINCT_TOL)?;

    // largest abscissa / ordinate within p1, lowest index on ties
    let s_point = p1
        .iter()
        .copied()
        .reduce(|best, p| if p.x > best.x { p } else { best })
        .expect("p1 nonempty");
    let t_point = p1
        .iter()
        .copied()
        .reduce(|best, p| if p.y > best.y { p } else { best })
        .expect("p1 nonempty");
    let (s, t) = (s_point.x, t_point.y);
    let (p, q) = (q2.x, q2.y);
    let (u, v) = (q3.x, q3.y);

    let all: Vec<Point> = p1.iter().copied().chain([q2, q3, q4]).collect();
    let sigma_all = crate::geom::sigma_of(&all, DEFAULT_DISTINCT_TOL)?;

    let b4 = sigma_p1
        + q2.dist_sq(s_point)
        + q3.dist_sq(t_point)
        + (q4.dist_sq(q2) + q4.dist_sq(q3)) / 2.0;

    let max_q = (q * q).max((q - t) * (q - t));
    let max_u = (u * u).max((u - s) * (u - s));
    let b4_tilde = 2.0 * s * s
        + 2.0 * t * t
        + max_q
        + max_u
        + (p - s) * (p - s)
        + (v - t) * (v - t)
        + ((a - p) * (a - p) + (b - q) * (b - q)) / 2.0
        + ((a - u) * (a - u) + (b - v) * (b - v)) / 2.0;

    let b41 = max_q - b * q + q * q / 2.0;
    let b42 = max_u - a * u + u * u / 2.0;
    let b43 = 1.5 * rect.diag_sq() - 2.0 * a * s - 2.0 * b * t + 3.0 * (s * s + t * t);
    let split = b41 + b42 + b43;

    let scale = rect.diag_sq();
    let mut params = flat_params(rect, p1);
    params.extend([q2.x, q2.y, q3.x, q3.y, q4.x, q4.y]);
    let links = [
        ("case4.sigma_le_b4", sigma_all - b4),
        ("case4.b4_le_b4tilde", b4 - b4_tilde),
        ("case4.b4tilde_le_split", b4_tilde - split),
        ("case4.b41_le_t2", b41 - t * t),
        ("case4.b42_le_s2", b42 - s * s),
        ("case4.split_le_3half", split - 1.5 * scale),
    ];
    Ok(links
        .into_iter()
        .map(|(name, value)| {
            ResidualReport::inequality(name, value, scale, tol, params.clone())
        })
        .collect())
}

/// The residual families, in suite order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Family {
    Case1,
    Lemma1,
    Case6,
    Case71,
    Case721,
    Case722,
    Case4,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::Case1,
        Family::Lemma1,
        Family::Case6,
        Family::Case71,
        Family::Case721,
        Family::Case722,
        Family::Case4,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Case1 => "case1",
            Family::Lemma1 => "lemma1",
            Family::Case6 => "case6",
            Family::Case71 => "case71",
            Family::Case721 => "case721",
            Family::Case722 => "case722",
            Family::Case4 => "case4",
        }
    }

    fn index(self) -> u64 {
        Family::ALL.iter().position(|f| *f == self).unwrap() as u64
    }
}

/// Suite configuration: random trials per family on top of the always-run
/// endpoint instances.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SuiteParams {
    pub trials: usize,
    pub seed: u64,
    pub tol: f64,
}

impl Default for SuiteParams {
    fn default() -> Self {
        Self {
            trials: 1000,
            seed: 1,
            tol: DEFAULT_IDENTITY_TOL,
        }
    }
}

const ENDPOINT_RECTS: [(f64, f64); 3] = [(1.0, 1.0), (2.0, 1.0), (1.0, 3.0)];

fn random_rect(rng: &mut SplitMix64) -> Rect {
    // aspect log-uniform in [0.1, 10], overall scale in [0.5, 2]
    let aspect = (rng.next_in(-1.0, 1.0) * 10f64.ln()).exp();
    let scale = rng.next_in(0.5, 2.0);
    Rect::new(scale, scale * aspect).expect("positive sides")
}

fn distinct(points: &[Point]) -> bool {
    let t2 = DEFAULT_DISTINCT_TOL * DEFAULT_DISTINCT_TOL;
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            if points[i].dist_sq(points[j]) <= t2 {
                return false;
            }
        }
    }
    true
}

fn points_in_box(
    rng: &mut SplitMix64,
    count: usize,
    x_lo: f64,
    x_hi: f64,
    y_lo: f64,
    y_hi: f64,
) -> Vec<Point> {
    loop {
        let pts: Vec<Point> = (0..count)
            .map(|_| Point::new(rng.next_in(x_lo, x_hi), rng.next_in(y_lo, y_hi)))
            .collect();
        if distinct(&pts) {
            return pts;
        }
    }
}

fn run_trial(family: Family, rng: &mut SplitMix64, tol: f64) -> Vec<ResidualReport> {
    let rect = random_rect(rng);
    let (a, b) = (rect.a(), rect.b());
    match family {
        Family::Case1 => {
            let mut pts = Vec::new();
            let boxes = [
                (0.0, a / 2.0, 0.0, b / 2.0),
                (a / 2.0, a, 0.0, b / 2.0),
                (0.0, a / 2.0, b / 2.0, b),
                (a / 2.0, a, b / 2.0, b),
            ];
            for (x_lo, x_hi, y_lo, y_hi) in boxes {
                let count = 2 + (rng.next_u64() % 3) as usize;
                pts.extend(points_in_box(rng, count, x_lo, x_hi, y_lo, y_hi));
            }
            let config = Configuration::new(rect, pts).expect("valid case-1 sample");
            vec![case1_superadditivity(&config, tol).expect("preconditions hold")]
        }
        Family::Lemma1 => {
            let count = 2 + (rng.next_u64() % 4) as usize;
            let p1 = points_in_box(rng, count, 0.0, a / 2.0, 0.0, b / 2.0);
            let q = Point::new(rng.next_in(a / 2.0, a), rng.next_in(0.0, b / 2.0));
            vec![lemma1_residual(rect, &p1, q, tol).expect("preconditions hold")]
        }
        Family::Case6 => {
            let (u, v) = (rng.next_in(0.0, a), rng.next_in(0.0, b));
            vec![case6_identity(a, b, u, v, tol).expect("preconditions hold")]
        }
        Family::Case71 => {
            let (u, v) = (rng.next_in(0.0, a), rng.next_in(0.0, b));
            let (s, t) = loop {
                let s = rng.next_f64();
                let t = rng.next_f64();
                if s + t <= 1.0 {
                    break (s, t);
                }
            };
            case71_residuals(a, b, u, v, s, t, tol).expect("preconditions hold")
        }
        Family::Case721 => {
            let (s, u) = (rng.next_in(0.0, a), rng.next_in(0.0, a));
            let (t, v) = (rng.next_in(0.0, b), rng.next_in(0.0, b));
            vec![case721_identity(a, b, s, t, u, v, tol).expect("preconditions hold")]
        }
        Family::Case722 => {
            let u = rng.next_in(0.0, a);
            let (v, w) = loop {
                let v = rng.next_in(0.0, b);
                let w = rng.next_in(0.0, b);
                if v > w {
                    break (v, w);
                }
            };
            vec![case722_identity(a, b, u, v, w, tol).expect("preconditions hold")]
        }
        Family::Case4 => {
            let count = 2 + (rng.next_u64() % 3) as usize;
            let p1 = points_in_box(rng, count, 0.0, a / 2.0, 0.0, b / 2.0);
            let q2 = Point::new(rng.next_in(a / 2.0, a), rng.next_in(0.0, b / 2.0));
            let q3 = Point::new(rng.next_in(0.0, a / 2.0), rng.next_in(b / 2.0, b));
            let q4 = Point::new(rng.next_in(a / 2.0, a), rng.next_in(b / 2.0, b));
            case4_chain(rect, &p1, q2, q3, q4, tol).expect("preconditions hold")
        }
    }
}

fn endpoint_instances(family: Family, tol: f64) -> Vec<ResidualReport> {
    let mut reports = Vec::new();
    for (a, b) in ENDPOINT_RECTS {
        let rect = Rect::new(a, b).unwrap();
        match family {
            Family::Case1 => {
                // two points tucked into each corner
                let off = 0.01 * rect.min_side();
                let pts = vec![
                    Point::new(0.0, 0.0),
                    Point::new(off, 0.0),
                    Point::new(a, 0.0),
                    Point::new(a - off, 0.0),
                    Point::new(0.0, b),
                    Point::new(off, b),
                    Point::new(a, b),
                    Point::new(a - off, b),
                ];
                let config = Configuration::new(rect, pts).unwrap();
                reports.push(case1_superadditivity(&config, tol).unwrap());
            }
            Family::Lemma1 => {
                let clusters = [
                    vec![Point::new(0.0, 0.0), Point::new(a / 2.0, b / 2.0)],
                    vec![Point::new(0.0, 0.0), Point::new(1e-3 * a, 1e-3 * b)],
                ];
                let qs = [
                    Point::new(a, 0.0),
                    Point::new(a, b / 2.0),
                    Point::new(0.75 * a, 0.0),
                ];
                for p1 in &clusters {
                    for &q in &qs {
                        reports.push(lemma1_residual(rect, p1, q, tol).unwrap());
                    }
                }
            }
            Family::Case6 => {
                for (u, v) in [(0.0, 0.0), (a, 0.0), (0.0, b), (a, b), (a / 2.0, b / 2.0)] {
                    reports.push(case6_identity(a, b, u, v, tol).unwrap());
                }
            }
            Family::Case71 => {
                for (u, v) in [(0.0, 0.0), (a, 0.0), (0.0, b), (a, b)] {
                    for (s, t) in [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (0.5, 0.5)] {
                        reports
                            .extend(case71_residuals(a, b, u, v, s, t, tol).unwrap());
                    }
                }
            }
            Family::Case721 => {
                for (s, t, u, v) in [
                    (0.0, 0.0, 0.0, 0.0),
                    (a, b, a, b),
                    (a / 2.0, b / 2.0, a / 2.0, b / 2.0),
                    (0.0, b, a, 0.0),
                ] {
                    reports.push(case721_identity(a, b, s, t, u, v, tol).unwrap());
                }
            }
            Family::Case722 => {
                for (u, v, w) in [
                    (0.0, b, 0.0),
                    (a, b, 0.0),
                    (a / 2.0, 0.75 * b, 0.25 * b),
                    (0.0, b, b / 2.0),
                ] {
                    reports.push(case722_identity(a, b, u, v, w, tol).unwrap());
                }
            }
            Family::Case4 => {
                let instances = [
                    (
                        vec![Point::new(0.0, 0.0), Point::new(0.05 * a, 0.0)],
                        Point::new(0.9 * a, 0.1 * b),
                        Point::new(0.1 * a, 0.9 * b),
                        Point::new(0.9 * a, 0.9 * b),
                    ),
                    (
                        // largest-abscissa and largest-ordinate both extreme
                        vec![
                            Point::new(a / 2.0, b / 2.0),
                            Point::new(0.4 * a, 0.4 * b),
                        ],
                        Point::new(a, 0.0),
                        Point::new(0.0, b),
                        Point::new(a, b),
                    ),
                ];
                for (p1, q2, q3, q4) in instances {
                    reports.extend(case4_chain(rect, &p1, q2, q3, q4, tol).unwrap());
                }
            }
        }
    }
    reports
}

/// Run one family: endpoint instances first, then `trials` seeded random
/// instances. Trials fan out across workers and merge in sample order.
pub fn run_suite(family: Family, params: &SuiteParams) -> Vec<ResidualReport> {
    let mut reports = endpoint_instances(family, params.tol);
    let tol = params.tol;
    let seed = params.seed;
    let batches = map_indexed(params.trials, move |trial| {
        let mut rng = SplitMix64::stream(seed, family.index() << 32 | trial as u64);
        run_trial(family, &mut rng, tol)
    });
    reports.extend(batches.into_iter().flatten());
    reports
}

/// Run every family.
pub fn run_all_suites(params: &SuiteParams) -> Vec<ResidualReport> {
    Family::ALL
        .iter()
        .flat_map(|family| run_suite(*family, params))
        .collect()
}

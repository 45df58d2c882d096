//! One-dimensional slices of the objective.
//!
//! Drop n seeded points in the rectangle, sweep one point's abscissa across
//! [0, a], and record the objective at equally spaced samples. The resulting
//! curves exhibit the non-smooth local maxima (and false local maxima) that
//! make the objective hard to optimize. Slices are fully deterministic given
//! the spec.

use serde::Serialize;
use thiserror::Error;

use crate::exec::map_indexed;
use crate::geom::{sigma_unchecked, Point, Rect, DEFAULT_DISTINCT_TOL};
use crate::rng::SplitMix64;

#[derive(Debug, Error, PartialEq)]
pub enum LandscapeError {
    #[error("slice needs at least 2 points, got n={0}")]
    TooFewPoints(usize),
    #[error("moving_index {index} out of range for n={n}")]
    BadIndex { index: usize, n: usize },
    #[error("need at least 2 samples, got {0}")]
    TooFewSamples(usize),
}

/// Specification of one slice.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SliceSpec {
    pub seed: u64,
    pub n: usize,
    /// Index of the point whose abscissa is swept.
    pub moving_index: usize,
    /// Number of equally spaced samples of s in [0, a].
    pub samples: usize,
    pub rect: Rect,
}

impl SliceSpec {
    /// Defaults matching the usual picture: six points in the unit square,
    /// 201 samples, sweeping the first point.
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            n: 6,
            moving_index: 0,
            samples: 201,
            rect: Rect::unit_square(),
        }
    }
}

/// One sampled slice position. `s` carries any anti-coincidence perturbation
/// applied to this sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SliceSample {
    pub s: f64,
    pub sigma: f64,
}

/// The base points a slice sweeps over, drawn from the documented generator:
/// for each point, abscissa then ordinate, uniform over the rectangle.
pub fn base_points(spec: &SliceSpec) -> Vec<Point> {
    let mut rng = SplitMix64::new(spec.seed);
    (0..spec.n)
        .map(|_| {
            Point::new(
                rng.next_in(0.0, spec.rect.a()),
                rng.next_in(0.0, spec.rect.b()),
            )
        })
        .collect()
}

/// Evaluate the slice. Samples are independent, so they are computed
/// concurrently and emitted in index order.
pub fn slice(spec: &SliceSpec) -> Result<Vec<SliceSample>, LandscapeError> {
    if spec.n < 2 {
        return Err(LandscapeError::TooFewPoints(spec.n));
    }
    if spec.moving_index >= spec.n {
        return Err(LandscapeError::BadIndex {
            index: spec.moving_index,
            n: spec.n,
        });
    }
    if spec.samples < 2 {
        return Err(LandscapeError::TooFewSamples(spec.samples));
    }
    Ok(slice_over(base_points(spec), spec))
}

fn slice_over(base: Vec<Point>, spec: &SliceSpec) -> Vec<SliceSample> {
    let a = spec.rect.a();
    let last = (spec.samples - 1) as f64;
    let spec = *spec;
    map_indexed(spec.samples, move |k| {
        let mut pts = base.clone();
        let mut s = k as f64 * a / last;
        loop {
            pts[spec.moving_index].x = s;
            let moved = pts[spec.moving_index];
            let coincides = pts
                .iter()
                .enumerate()
                .any(|(i, p)| i != spec.moving_index && p.dist(moved) <= DEFAULT_DISTINCT_TOL);
            if !coincides {
                break;
            }
            // nudge the sample off the coincidence and record the shift
            s += 1e-9;
        }
        SliceSample {
            s,
            sigma: sigma_unchecked(&pts),
        }
    })
}

//! The exact piecewise bound S3(a, b) for three points.
//!
//! Five branches over the aspect ratio r = b/a, with breakpoints at 1/sqrt(3),
//! sqrt(3)/2, 2/sqrt(3), and sqrt(3):
//!
//! ```text
//! S3(a,b) = a^2 + 9b^2/4            r <= 1/sqrt(3)
//!           3a^2/4 + 3b^2           1/sqrt(3) <= r <= sqrt(3)/2
//!           12 (a^2 - sqrt(3)ab + b^2)   sqrt(3)/2 <= r <= 2/sqrt(3)
//!           3a^2 + 3b^2/4           2/sqrt(3) <= r <= sqrt(3)
//!           9a^2/4 + b^2            r >= sqrt(3)
//! ```
//!
//! Adjacent branches agree at the breakpoints, S3 is symmetric in (a, b) and
//! homogeneous of degree two, and S3(a,b)/(a^2+b^2) <= 12/7 with equality
//! exactly at r in {sqrt(3)/2, 2/sqrt(3)}.

use serde::Serialize;

use crate::geom::{GeomError, Rect};

/// Supremum of S3(a,b)/(a^2 + b^2) over all aspect ratios.
pub const S3_RATIO_SUP: f64 = 12.0 / 7.0;

/// An evaluated S3 value together with the branch that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct S3Value {
    pub value: f64,
    /// Branch index in 1..=5; the lower index is reported at breakpoints.
    pub piece: u8,
    /// The aspect ratio b/a the branch was selected by.
    pub ratio: f64,
}

/// The four breakpoints of the piecewise formula, in increasing order.
pub fn s3_breakpoints() -> [f64; 4] {
    let sqrt3 = 3f64.sqrt();
    [1.0 / sqrt3, sqrt3 / 2.0, 2.0 / sqrt3, sqrt3]
}

fn piece_for_ratio(ratio: f64) -> u8 {
    let bp = s3_breakpoints();
    if ratio <= bp[0] {
        1
    } else if ratio <= bp[1] {
        2
    } else if ratio <= bp[2] {
        3
    } else if ratio <= bp[3] {
        4
    } else {
        5
    }
}

fn piece_value(piece: u8, a: f64, b: f64) -> f64 {
    let sqrt3 = 3f64.sqrt();
    match piece {
        1 => a * a + 2.25 * b * b,
        2 => 0.75 * a * a + 3.0 * b * b,
        3 => 12.0 * (a * a - sqrt3 * a * b + b * b),
        4 => 3.0 * a * a + 0.75 * b * b,
        5 => 2.25 * a * a + b * b,
        _ => unreachable!("piece index out of range"),
    }
}

/// Evaluate S3 at side lengths (a, b).
pub fn s3(a: f64, b: f64) -> Result<S3Value, GeomError> {
    let _ = Rect::new(a, b)?;
    let ratio = b / a;
    let piece = piece_for_ratio(ratio);
    Ok(S3Value {
        value: piece_value(piece, a, b),
        piece,
        ratio,
    })
}

/// S3(a, b) normalized by a^2 + b^2; at most 12/7 everywhere.
pub fn s3_ratio(a: f64, b: f64) -> Result<f64, GeomError> {
    Ok(s3(a, b)?.value / (a * a + b * b))
}

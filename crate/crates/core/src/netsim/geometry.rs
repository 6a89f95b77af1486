//! Planar positions and least-squares trilateration.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Position {
    pub x: f64,
    pub y: f64,
}

impl Position {
    pub fn new(x: f64, y: f64) -> Self {
        Position { x, y }
    }

    pub fn distance(&self, other: &Position) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("need at least 3 anchors, got {0}")]
    TooFewAnchors(usize),
    #[error("{anchors} anchors but {distances} distances")]
    LengthMismatch { anchors: usize, distances: usize },
    #[error("distances must be finite and non-negative")]
    InvalidDistance,
    #[error("anchors are collinear")]
    DegenerateGeometry,
}

/// Relative threshold on the anchor spread below which the anchors are
/// treated as collinear.
const COLLINEAR_TOLERANCE: f64 = 1e-10;

/// Position from distances to known anchors.
///
/// Subtracting the first circle equation from the others leaves a linear
/// system `A [x y]^T = b`, solved in the least-squares sense through its
/// 2x2 normal equations.
pub fn trilaterate(anchors: &[Position], distances: &[f64]) -> Result<Position, GeometryError> {
    if anchors.len() != distances.len() {
        return Err(GeometryError::LengthMismatch { anchors: anchors.len(), distances: distances.len() });
    }
    if anchors.len() < 3 {
        return Err(GeometryError::TooFewAnchors(anchors.len()));
    }
    if distances.iter().any(|d| !d.is_finite() || *d < 0.0) {
        return Err(GeometryError::InvalidDistance);
    }

    // Work relative to the first anchor to keep the numbers small.
    let origin = anchors[0];
    let r0 = distances[0];
    let (mut ata00, mut ata01, mut ata11) = (0.0, 0.0, 0.0);
    let (mut atb0, mut atb1) = (0.0, 0.0);
    for (anchor, &r) in anchors.iter().zip(distances).skip(1) {
        let ax = anchor.x - origin.x;
        let ay = anchor.y - origin.y;
        let row = [2.0 * ax, 2.0 * ay];
        let rhs = r0 * r0 - r * r + ax * ax + ay * ay;
        ata00 += row[0] * row[0];
        ata01 += row[0] * row[1];
        ata11 += row[1] * row[1];
        atb0 += row[0] * rhs;
        atb1 += row[1] * rhs;
    }
    let det = ata00 * ata11 - ata01 * ata01;
    let scale = (ata00 + ata11).powi(2);
    if scale == 0.0 || det.abs() <= COLLINEAR_TOLERANCE * scale {
        return Err(GeometryError::DegenerateGeometry);
    }
    let x = (ata11 * atb0 - ata01 * atb1) / det;
    let y = (ata00 * atb1 - ata01 * atb0) / det;
    Ok(Position { x: x + origin.x, y: y + origin.y })
}

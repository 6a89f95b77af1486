//! Log-distance path-loss model and its inverse.

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SignalError {
    #[error("observed signal {observed} exceeds transmit power {tx_power}")]
    OutOfModel { observed: f64, tx_power: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SignalModel {
    /// Path-loss exponent `n`; 2 is free space.
    pub path_loss_exponent: f64,
    /// Reference distance `d0` in metres at which the received level equals the transmit power.
    pub reference_distance: f64,
    /// Weakest level a UE can still camp on.
    pub sensitivity: f64,
}

impl Default for SignalModel {
    fn default() -> Self {
        SignalModel { path_loss_exponent: 2.0, reference_distance: 1.0, sensitivity: -120.0 }
    }
}

/// `tx_power - 10 n log10(max(d, d0) / d0)`.
pub fn received_signal(model: &SignalModel, tx_power: f64, distance: f64) -> f64 {
    let d0 = model.reference_distance;
    tx_power - 10.0 * model.path_loss_exponent * (distance.max(d0) / d0).log10()
}

/// Inverse of [`received_signal`] for distances at or beyond `d0`.
pub fn signal_to_distance(model: &SignalModel, tx_power: f64, observed_signal: f64) -> Result<f64, SignalError> {
    if observed_signal > tx_power {
        return Err(SignalError::OutOfModel { observed: observed_signal, tx_power });
    }
    Ok(model.reference_distance * 10f64.powf((tx_power - observed_signal) / (10.0 * model.path_loss_exponent)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_point_and_doubling() {
        let m = SignalModel::default();
        assert_eq!(received_signal(&m, 17.0, 1.0), 17.0);
        // inside d0 the level is clamped to the transmit power
        assert_eq!(received_signal(&m, 17.0, 0.0), 17.0);
        let drop = received_signal(&m, 0.0, 10.0) - received_signal(&m, 0.0, 20.0);
        assert!((drop - 20.0 * 2f64.log10()).abs() < 1e-12);
        assert!((drop - 6.0206).abs() < 1e-4);
    }

    #[test]
    fn stronger_transmitter_wins_at_equal_distance() {
        let m = SignalModel::default();
        assert!(received_signal(&m, 20.0, 250.0) > received_signal(&m, 0.0, 250.0));
    }

    #[test]
    fn inverse_roundtrip() {
        let m = SignalModel { path_loss_exponent: 3.0, reference_distance: 1.0, sensitivity: -200.0 };
        for d in [1.0, 10.0, 100.0] {
            let back = signal_to_distance(&m, 30.0, received_signal(&m, 30.0, d)).unwrap();
            assert!(((back - d) / d).abs() < 1e-9);
        }
        assert!(matches!(signal_to_distance(&m, 30.0, 31.0), Err(SignalError::OutOfModel { .. })));
    }

    #[test]
    fn monotone_in_distance() {
        let m = SignalModel { path_loss_exponent: 2.7, reference_distance: 2.0, sensitivity: -200.0 };
        let mut last = f64::INFINITY;
        for i in 0..500 {
            let s = received_signal(&m, 10.0, i as f64 * 0.75);
            assert!(s <= last);
            last = s;
        }
    }
}

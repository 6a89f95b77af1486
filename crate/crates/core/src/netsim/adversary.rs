//! What an IMSI catcher learns from a finished run.

use std::collections::BTreeMap;

use serde::Serialize;

use super::geometry::{trilaterate, Position};
use super::radio::{signal_to_distance, SignalModel};
use super::trace::{EventDetail, SimEvent};
use super::{AdversaryMode, Payload};

/// The adversary's own knowledge: where its cells are and how loud they transmit.
#[derive(Debug, Clone, PartialEq)]
pub struct AdversaryView {
    pub rogue_stations: BTreeMap<String, (Position, f64)>,
    pub signal_model: SignalModel,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Capture {
    pub adversary: String,
    pub identity: String,
    /// False when only ECIES ciphertext was seen.
    pub identifying: bool,
    pub position: Option<Position>,
}

fn locate(view: &AdversaryView, cells: &[super::CellMeasurement]) -> Option<Position> {
    let mut anchors = Vec::new();
    let mut distances = Vec::new();
    for m in cells {
        let Some((pos, tx)) = view.rogue_stations.get(&m.cell) else { continue };
        let d = signal_to_distance(&view.signal_model, *tx, m.signal).ok()?;
        anchors.push(*pos);
        distances.push(d);
    }
    trilaterate(&anchors, &distances).ok()
}

/// Extracts the captures for `mode` from a trace's events: every
/// Registration Request that reached a rogue cell, plus a position estimate
/// when the mode asks the UE for measurements.
pub fn adversary_capture(events: &[SimEvent], mode: AdversaryMode, view: &AdversaryView) -> Vec<Capture> {
    if mode == AdversaryMode::Off {
        return Vec::new();
    }
    let mut captures: Vec<Capture> = Vec::new();
    for (i, event) in events.iter().enumerate() {
        let EventDetail::Message(msg) = &event.detail else { continue };
        let Payload::RegistrationRequest { identity } = &msg.payload else { continue };
        if !view.rogue_stations.contains_key(&msg.to) {
            continue;
        }
        let report = events[i + 1..].iter().find_map(|e| match &e.detail {
            EventDetail::Message(m) if m.to == msg.to => match &m.payload {
                Payload::RrcMeasurementReport { cells, location } => Some((cells, location)),
                _ => None,
            },
            _ => None,
        });
        let position = match (mode, report) {
            (AdversaryMode::Trilateration, Some((cells, _))) => locate(view, cells),
            (AdversaryMode::LocationInfo, Some((_, location))) => *location,
            _ => None,
        };
        let capture = Capture {
            adversary: msg.to.clone(),
            identity: identity.to_string(),
            identifying: identity.is_identifying(),
            position,
        };
        if !captures.contains(&capture) {
            captures.push(capture);
        }
    }
    captures
}

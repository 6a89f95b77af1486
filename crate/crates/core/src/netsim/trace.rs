//! Simulation output and its line-oriented export.

use std::fmt::Write as _;

use serde::Serialize;

use super::adversary::Capture;
use super::geometry::Position;
use super::{CellMeasurement, MessageKind, Payload, SimMessage, UeState};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum EventDetail {
    CellSearch { attempt: u32, measurements: Vec<CellMeasurement>, selected: Option<String> },
    Transition { entity: String, from: UeState, to: UeState },
    Message(SimMessage),
    Note { entity: String, text: String },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimEvent {
    pub time_ms: u64,
    pub seq: u64,
    #[serde(flatten)]
    pub detail: EventDetail,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimTrace {
    /// Ordered by `(time_ms, seq)`.
    pub events: Vec<SimEvent>,
    pub captured_identities: Vec<Capture>,
    pub ue_true_position: Position,
}

#[derive(Serialize)]
struct CaptureRecord<'a> {
    record: &'static str,
    #[serde(flatten)]
    capture: &'a Capture,
}

impl SimTrace {
    /// One JSON object per line: every event in order, then one `capture`
    /// record per captured identity.
    pub fn export(&self) -> String {
        let mut out = String::new();
        for event in &self.events {
            out.push_str(&serde_json::to_string(event).expect("trace events serialize"));
            out.push('\n');
        }
        for capture in &self.captured_identities {
            let rec = CaptureRecord { record: "capture", capture };
            out.push_str(&serde_json::to_string(&rec).expect("captures serialize"));
            out.push('\n');
        }
        out
    }

    pub fn messages(&self) -> impl Iterator<Item = &SimMessage> {
        self.events.iter().filter_map(|e| match &e.detail {
            EventDetail::Message(m) => Some(m),
            _ => None,
        })
    }

    pub fn message_kinds(&self) -> Vec<MessageKind> {
        self.messages().map(SimMessage::kind).collect()
    }

    pub fn transitions(&self) -> Vec<(UeState, UeState)> {
        self.events
            .iter()
            .filter_map(|e| match e.detail {
                EventDetail::Transition { from, to, .. } => Some((from, to)),
                _ => None,
            })
            .collect()
    }

    pub fn final_ue_state(&self) -> UeState {
        self.transitions().last().map_or(UeState::PlmnSearch, |(_, to)| *to)
    }

    pub fn serving_cell(&self) -> Option<&str> {
        self.events.iter().find_map(|e| match &e.detail {
            EventDetail::CellSearch { selected: Some(cell), .. } => Some(cell.as_str()),
            _ => None,
        })
    }

    /// The identity the UE put on the air, if it got that far.
    pub fn sent_identity(&self) -> Option<String> {
        self.messages().find_map(|m| match &m.payload {
            Payload::RegistrationRequest { identity } => Some(identity.to_string()),
            _ => None,
        })
    }

    pub fn identifying_captures(&self) -> impl Iterator<Item = &Capture> {
        self.captured_identities.iter().filter(|c| c.identifying)
    }

    pub fn summary(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "final UE state: {}", self.final_ue_state());
        let _ = writeln!(s, "serving cell: {}", self.serving_cell().unwrap_or("none"));
        let _ = writeln!(s, "identity sent: {}", self.sent_identity().as_deref().unwrap_or("none"));
        let _ = writeln!(
            s,
            "captures: {} ({} identifying)",
            self.captured_identities.len(),
            self.identifying_captures().count()
        );
        for c in &self.captured_identities {
            let tag = if c.identifying { "identifying" } else { "ciphertext only" };
            let _ = writeln!(s, "  {} captured {} [{tag}]", c.adversary, c.identity);
            if let Some(p) = c.position {
                let _ = writeln!(
                    s,
                    "  position estimate {p}, error {:.6} m from true position {}",
                    p.distance(&self.ue_true_position),
                    self.ue_true_position
                );
            }
        }
        s
    }
}

//! Deterministic simulation of 5G initial registration with an optional
//! IMSI catcher in range.
//!
//! A single UE scans the declared base stations, camps on the strongest one
//! and sends a Registration Request carrying either its plaintext SUPI
//! (legacy behaviour) or a SUCI. A legitimate cell relays to the core network,
//! which runs a toy challenge-response authentication and the security-mode
//! exchange. A rogue cell never authenticates; depending on the adversary mode
//! it just records the identity or also asks the UE for a measurement report
//! to locate it.
//!
//! Everything runs on a virtual clock driven by one event queue, and every
//! random draw comes from a ChaCha stream seeded by the scenario, so equal
//! scenarios give byte-identical trace exports.

mod adversary;
mod geometry;
mod radio;
mod scenario;
mod trace;

pub use adversary::{adversary_capture, AdversaryView, Capture};
pub use geometry::{trilaterate, GeometryError, Position};
pub use radio::{received_signal, signal_to_distance, SignalError, SignalModel};
pub use scenario::{load_scenario, parse_scenario, ScenarioError};
pub use trace::{EventDetail, SimEvent, SimTrace};

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;
use std::fmt;

use hmac::{Hmac, Mac};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Serialize, Serializer};
use sha2::Sha256;
use subtle::ConstantTimeEq;
use thiserror::Error;

use crate::identifiers::{serialize_suci, ProtectionScheme, Suci, Supi};
use crate::protection::{conceal_supi, deconceal_suci, KeyStore, OperatorPolicy};

/// Radio hop latency, UE <-> cell.
pub const RADIO_LATENCY_MS: u64 = 5;
/// Backhaul latency, cell <-> core.
pub const BACKHAUL_LATENCY_MS: u64 = 2;
/// Interval between cell-search attempts while out of coverage.
pub const SEARCH_INTERVAL_MS: u64 = 1_000;

const RAND_LEN: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("scenario must declare exactly one UE, found {0}")]
    UeCount(usize),
    #[error("duplicate entity id {0:?}")]
    DuplicateEntity(String),
    #[error("invalid scenario: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum EntityKind {
    Ue,
    GnB,
    Core,
    RogueGnB,
}

impl EntityKind {
    pub fn is_station(self) -> bool {
        matches!(self, EntityKind::GnB | EntityKind::RogueGnB)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimEntity {
    pub id: String,
    pub kind: EntityKind,
    pub position: Position,
    pub tx_power: f64,
}

impl SimEntity {
    pub fn new(id: &str, kind: EntityKind, position: Position, tx_power: f64) -> Self {
        SimEntity { id: id.to_string(), kind, position, tx_power }
    }
}

/// UE mobility-management states, in the only order the UE may visit them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum UeState {
    PlmnSearch,
    Deregistered,
    RegisterInitiated,
    Authenticating,
    SecurityMode,
    Registered,
}

impl UeState {
    pub const ORDER: [UeState; 6] = [
        UeState::PlmnSearch,
        UeState::Deregistered,
        UeState::RegisterInitiated,
        UeState::Authenticating,
        UeState::SecurityMode,
        UeState::Registered,
    ];

    /// The single state this one may move to.
    pub fn successor(self) -> Option<UeState> {
        let i = UeState::ORDER.iter().position(|s| *s == self).expect("listed");
        UeState::ORDER.get(i + 1).copied()
    }

    pub fn can_transition_to(self, next: UeState) -> bool {
        self.successor() == Some(next)
    }
}

impl fmt::Display for UeState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum AdversaryMode {
    Off,
    PassiveCapture,
    Trilateration,
    LocationInfo,
}

/// What the UE puts in the Registration Request's identity field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum IdentityMode {
    /// Plaintext permanent identity, as pre-SUCI networks do.
    Legacy,
    /// SUCI built from the UE's operator policy.
    Suci,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MobileIdentity {
    Supi(Supi),
    Suci(Suci),
}

impl MobileIdentity {
    /// Whether a passive listener learns the MSIN from this identity.
    pub fn is_identifying(&self) -> bool {
        match self {
            MobileIdentity::Supi(_) => true,
            MobileIdentity::Suci(s) => s.scheme() == ProtectionScheme::Null,
        }
    }
}

impl fmt::Display for MobileIdentity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MobileIdentity::Supi(s) => s.fmt(f),
            MobileIdentity::Suci(s) => f.write_str(&serialize_suci(s)),
        }
    }
}

impl Serialize for MobileIdentity {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("MobileIdentity", 2)?;
        st.serialize_field(
            "type",
            match self {
                MobileIdentity::Supi(_) => "supi",
                MobileIdentity::Suci(_) => "suci",
            },
        )?;
        st.serialize_field("value", &self.to_string())?;
        st.end()
    }
}

fn hex_bytes<S: Serializer>(bytes: &[u8], s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&hex::encode(bytes))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellMeasurement {
    pub cell: String,
    pub signal: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum MessageKind {
    RegistrationRequest,
    AuthenticationRequest,
    AuthenticationResponse,
    SecurityModeCommand,
    SecurityModeComplete,
    RegistrationAccept,
    RrcReconfiguration,
    RrcMeasurementReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum Payload {
    RegistrationRequest {
        identity: MobileIdentity,
    },
    AuthenticationRequest {
        #[serde(serialize_with = "hex_bytes")]
        rand: Vec<u8>,
    },
    AuthenticationResponse {
        #[serde(serialize_with = "hex_bytes")]
        res: Vec<u8>,
    },
    SecurityModeCommand,
    SecurityModeComplete,
    RegistrationAccept,
    RrcReconfiguration {
        measure_cells: Vec<String>,
        request_location: bool,
    },
    RrcMeasurementReport {
        cells: Vec<CellMeasurement>,
        location: Option<Position>,
    },
}

impl Payload {
    pub fn kind(&self) -> MessageKind {
        match self {
            Payload::RegistrationRequest { .. } => MessageKind::RegistrationRequest,
            Payload::AuthenticationRequest { .. } => MessageKind::AuthenticationRequest,
            Payload::AuthenticationResponse { .. } => MessageKind::AuthenticationResponse,
            Payload::SecurityModeCommand => MessageKind::SecurityModeCommand,
            Payload::SecurityModeComplete => MessageKind::SecurityModeComplete,
            Payload::RegistrationAccept => MessageKind::RegistrationAccept,
            Payload::RrcReconfiguration { .. } => MessageKind::RrcReconfiguration,
            Payload::RrcMeasurementReport { .. } => MessageKind::RrcMeasurementReport,
        }
    }
}

/// A message as delivered. `cell` is the radio cell the UE side of the
/// exchange goes through; NAS messages for a legitimate cell are addressed to
/// the core, while a rogue cell terminates them itself.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimMessage {
    pub from: String,
    pub to: String,
    pub cell: String,
    pub payload: Payload,
}

impl SimMessage {
    pub fn kind(&self) -> MessageKind {
        self.payload.kind()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimScenario {
    pub entities: Vec<SimEntity>,
    pub supi: Supi,
    pub identity_mode: IdentityMode,
    pub ue_policy: OperatorPolicy,
    /// The network side's home-network private keys.
    pub network_keys: KeyStore,
    /// Long-term key shared by the UE and its home network, used by the toy
    /// challenge-response.
    pub subscriber_key: [u8; 32],
    pub adversary_mode: AdversaryMode,
    pub rng_seed: u64,
    pub signal_model: SignalModel,
    /// Cell-search attempts before the UE gives up and the run ends.
    pub max_search_attempts: u32,
}

impl SimScenario {
    pub fn validate(&self) -> Result<(), SimError> {
        let ues = self.entities.iter().filter(|e| e.kind == EntityKind::Ue).count();
        if ues != 1 {
            return Err(SimError::UeCount(ues));
        }
        let mut ids: Vec<&str> = self.entities.iter().map(|e| e.id.as_str()).collect();
        ids.sort_unstable();
        if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
            return Err(SimError::DuplicateEntity(w[0].to_string()));
        }
        let m = &self.signal_model;
        if !(m.path_loss_exponent > 0.0 && m.reference_distance > 0.0) {
            return Err(SimError::Invalid("path-loss exponent and reference distance must be positive".into()));
        }
        if self.max_search_attempts == 0 {
            return Err(SimError::Invalid("max_search_attempts must be at least 1".into()));
        }
        Ok(())
    }

    pub fn ue(&self) -> &SimEntity {
        self.entities.iter().find(|e| e.kind == EntityKind::Ue).expect("validated scenario has a UE")
    }

    pub fn ue_true_position(&self) -> Position {
        self.ue().position
    }

    pub fn entity(&self, id: &str) -> Option<&SimEntity> {
        self.entities.iter().find(|e| e.id == id)
    }

    pub fn stations(&self) -> impl Iterator<Item = &SimEntity> {
        self.entities.iter().filter(|e| e.kind.is_station())
    }

    fn core_id(&self) -> String {
        self.entities.iter().find(|e| e.kind == EntityKind::Core).map_or_else(|| "core".to_string(), |e| e.id.clone())
    }

    pub fn adversary_view(&self) -> AdversaryView {
        AdversaryView {
            rogue_stations: self
                .entities
                .iter()
                .filter(|e| e.kind == EntityKind::RogueGnB)
                .map(|e| (e.id.clone(), (e.position, e.tx_power)))
                .collect(),
            signal_model: self.signal_model,
        }
    }
}

/// Received level of every station at `at`, sorted strongest first with
/// ties going to the lexicographically smallest id.
pub fn rank_stations(scenario: &SimScenario, at: Position) -> Vec<CellMeasurement> {
    let mut cells: Vec<CellMeasurement> = scenario
        .stations()
        .map(|s| CellMeasurement {
            cell: s.id.clone(),
            signal: received_signal(&scenario.signal_model, s.tx_power, s.position.distance(&at)),
        })
        .collect();
    cells.sort_by(|a, b| b.signal.partial_cmp(&a.signal).unwrap_or(Ordering::Equal).then_with(|| a.cell.cmp(&b.cell)));
    cells
}

/// The station the UE camps on: strongest in-range cell, if any.
pub fn select_station(scenario: &SimScenario, at: Position) -> Option<CellMeasurement> {
    rank_stations(scenario, at).into_iter().find(|c| c.signal >= scenario.signal_model.sensitivity)
}

fn auth_response(subscriber_key: &[u8; 32], rand: &[u8]) -> Vec<u8> {
    let mut mac = Hmac::<Sha256>::new_from_slice(subscriber_key).expect("any key length");
    mac.update(rand);
    mac.finalize().into_bytes().to_vec()
}

#[derive(Debug)]
enum Action {
    CellSearch { attempt: u32 },
    Deliver(Box<SimMessage>),
}

#[derive(Debug)]
struct Pending {
    time_ms: u64,
    seq: u64,
    action: Action,
}

impl PartialEq for Pending {
    fn eq(&self, other: &Self) -> bool {
        (self.time_ms, self.seq) == (other.time_ms, other.seq)
    }
}

impl Eq for Pending {}

impl PartialOrd for Pending {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Pending {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.time_ms, self.seq).cmp(&(other.time_ms, other.seq))
    }
}

struct Sim<'a> {
    scenario: &'a SimScenario,
    rng: ChaCha20Rng,
    queue: BinaryHeap<Reverse<Pending>>,
    next_seq: u64,
    now: u64,
    events: Vec<SimEvent>,
    ue_id: String,
    core_id: String,
    ue_state: UeState,
    serving_cell: Option<String>,
    expected_res: Option<Vec<u8>>,
}

impl<'a> Sim<'a> {
    fn new(scenario: &'a SimScenario) -> Self {
        Sim {
            scenario,
            rng: ChaCha20Rng::seed_from_u64(scenario.rng_seed),
            queue: BinaryHeap::new(),
            next_seq: 0,
            now: 0,
            events: Vec::new(),
            ue_id: scenario.ue().id.clone(),
            core_id: scenario.core_id(),
            ue_state: UeState::PlmnSearch,
            serving_cell: None,
            expected_res: None,
        }
    }

    fn schedule(&mut self, delay_ms: u64, action: Action) {
        let p = Pending { time_ms: self.now + delay_ms, seq: self.next_seq, action };
        self.next_seq += 1;
        self.queue.push(Reverse(p));
    }

    fn log(&mut self, detail: EventDetail) {
        let seq = self.events.len() as u64;
        self.events.push(SimEvent { time_ms: self.now, seq, detail });
    }

    fn note(&mut self, entity: &str, text: String) {
        self.log(EventDetail::Note { entity: entity.to_string(), text });
    }

    fn transition(&mut self, to: UeState) {
        assert!(self.ue_state.can_transition_to(to), "illegal UE transition {} -> {to}", self.ue_state);
        let from = self.ue_state;
        self.ue_state = to;
        let entity = self.ue_id.clone();
        self.log(EventDetail::Transition { entity, from, to });
    }

    fn is_rogue(&self, id: &str) -> bool {
        self.scenario.entity(id).is_some_and(|e| e.kind == EntityKind::RogueGnB)
    }

    fn latency(&self, cell: &str) -> u64 {
        if self.is_rogue(cell) {
            RADIO_LATENCY_MS
        } else {
            RADIO_LATENCY_MS + BACKHAUL_LATENCY_MS
        }
    }

    /// UE -> network, addressed to the core unless the cell is rogue.
    fn uplink(&mut self, payload: Payload) {
        let cell = self.serving_cell.clone().expect("camped");
        let to = if self.is_rogue(&cell) { cell.clone() } else { self.core_id.clone() };
        let delay = self.latency(&cell);
        self.schedule(delay, Action::Deliver(Box::new(SimMessage { from: self.ue_id.clone(), to, cell, payload })));
    }

    /// Network -> UE.
    fn downlink(&mut self, from: &str, payload: Payload) {
        let cell = self.serving_cell.clone().expect("camped");
        let delay = self.latency(&cell);
        let msg = SimMessage { from: from.to_string(), to: self.ue_id.clone(), cell, payload };
        self.schedule(delay, Action::Deliver(Box::new(msg)));
    }

    fn run(mut self) -> Vec<SimEvent> {
        self.schedule(0, Action::CellSearch { attempt: 1 });
        while let Some(Reverse(p)) = self.queue.pop() {
            self.now = p.time_ms;
            match p.action {
                Action::CellSearch { attempt } => self.cell_search(attempt),
                Action::Deliver(msg) => {
                    let msg = *msg;
                    self.log(EventDetail::Message(msg.clone()));
                    self.deliver(msg);
                }
            }
        }
        self.events
    }

    fn cell_search(&mut self, attempt: u32) {
        let at = self.scenario.ue_true_position();
        let measurements = rank_stations(self.scenario, at);
        let selected = select_station(self.scenario, at).map(|c| c.cell);
        self.log(EventDetail::CellSearch { attempt, measurements, selected: selected.clone() });
        let Some(cell) = selected else {
            if attempt < self.scenario.max_search_attempts {
                self.schedule(SEARCH_INTERVAL_MS, Action::CellSearch { attempt: attempt + 1 });
            }
            return;
        };
        self.serving_cell = Some(cell);
        self.transition(UeState::Deregistered);

        let identity = match self.scenario.identity_mode {
            IdentityMode::Legacy => MobileIdentity::Supi(self.scenario.supi.clone()),
            IdentityMode::Suci => match conceal_supi(&self.scenario.supi, &self.scenario.ue_policy, &mut self.rng) {
                Ok(concealed) => {
                    if let Some(reason) = concealed.downgrade {
                        let ue = self.ue_id.clone();
                        self.note(&ue, format!("downgrade: {reason}"));
                    }
                    MobileIdentity::Suci(concealed.suci)
                }
                Err(e) => {
                    let ue = self.ue_id.clone();
                    self.note(&ue, format!("cannot build SUCI: {e}"));
                    return;
                }
            },
        };
        self.uplink(Payload::RegistrationRequest { identity });
        self.transition(UeState::RegisterInitiated);
    }

    fn deliver(&mut self, msg: SimMessage) {
        if msg.to == self.ue_id {
            self.ue_receive(msg);
        } else if self.is_rogue(&msg.to) {
            self.rogue_receive(msg);
        } else {
            self.core_receive(msg);
        }
    }

    fn ue_receive(&mut self, msg: SimMessage) {
        match msg.payload {
            Payload::AuthenticationRequest { rand } => {
                self.transition(UeState::Authenticating);
                let res = auth_response(&self.scenario.subscriber_key, &rand);
                self.uplink(Payload::AuthenticationResponse { res });
            }
            Payload::SecurityModeCommand => {
                self.transition(UeState::SecurityMode);
                self.uplink(Payload::SecurityModeComplete);
            }
            Payload::RegistrationAccept => self.transition(UeState::Registered),
            Payload::RrcReconfiguration { measure_cells, request_location } => {
                let at = self.scenario.ue_true_position();
                let cells = measure_cells
                    .iter()
                    .filter_map(|id| self.scenario.entity(id))
                    .map(|s| CellMeasurement {
                        cell: s.id.clone(),
                        signal: received_signal(&self.scenario.signal_model, s.tx_power, s.position.distance(&at)),
                    })
                    .collect();
                let location = request_location.then_some(at);
                self.uplink(Payload::RrcMeasurementReport { cells, location });
            }
            other => {
                let ue = self.ue_id.clone();
                self.note(&ue, format!("ignored {:?}", other.kind()));
            }
        }
    }

    fn rogue_receive(&mut self, msg: SimMessage) {
        if let Payload::RegistrationRequest { .. } = msg.payload {
            let request_location = match self.scenario.adversary_mode {
                AdversaryMode::Trilateration => false,
                AdversaryMode::LocationInfo => true,
                AdversaryMode::Off | AdversaryMode::PassiveCapture => return,
            };
            let view = self.scenario.adversary_view();
            let measure_cells = view.rogue_stations.keys().cloned().collect();
            self.downlink(&msg.to, Payload::RrcReconfiguration { measure_cells, request_location });
        }
        // Without the subscriber's long-term key the catcher cannot continue.
    }

    fn core_receive(&mut self, msg: SimMessage) {
        let core = self.core_id.clone();
        match msg.payload {
            Payload::RegistrationRequest { identity } => {
                let supi = match identity {
                    MobileIdentity::Supi(s) => s,
                    MobileIdentity::Suci(suci) => match deconceal_suci(&suci, &self.scenario.network_keys) {
                        Ok(s) => s,
                        Err(e) => {
                            self.note(&core, format!("SUCI de-concealment failed: {e}"));
                            return;
                        }
                    },
                };
                if supi != self.scenario.supi {
                    self.note(&core, format!("unknown subscriber {supi}"));
                    return;
                }
                let mut rand = vec![0u8; RAND_LEN];
                self.rng.fill_bytes(&mut rand);
                self.expected_res = Some(auth_response(&self.scenario.subscriber_key, &rand));
                self.downlink(&core, Payload::AuthenticationRequest { rand });
            }
            Payload::AuthenticationResponse { res } => {
                let ok = self.expected_res.as_ref().is_some_and(|exp| bool::from(exp.as_slice().ct_eq(&res)));
                if ok {
                    self.downlink(&core, Payload::SecurityModeCommand);
                } else {
                    self.note(&core, "authentication failed".into());
                }
            }
            Payload::SecurityModeComplete => self.downlink(&core, Payload::RegistrationAccept),
            other => self.note(&core, format!("ignored {:?}", other.kind())),
        }
    }
}

/// Runs one registration attempt to completion.
pub fn run_registration(scenario: &SimScenario) -> Result<SimTrace, SimError> {
    scenario.validate()?;
    let events = Sim::new(scenario).run();
    let captured_identities = adversary_capture(&events, scenario.adversary_mode, &scenario.adversary_view());
    Ok(SimTrace { events, captured_identities, ue_true_position: scenario.ue_true_position() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ecies::{generate_keypair, EciesProfile};
    use crate::identifiers::parse_supi;

    fn base(entities: Vec<SimEntity>, identity_mode: IdentityMode, adversary_mode: AdversaryMode) -> SimScenario {
        let hn = generate_keypair(EciesProfile::ProfileA, &mut ChaCha20Rng::seed_from_u64(99));
        SimScenario {
            entities,
            supi: parse_supi("24201-534567890").unwrap(),
            identity_mode,
            ue_policy: OperatorPolicy::ecies(EciesProfile::ProfileA, hn.public_key().to_vec(), 0),
            network_keys: [(0u8, hn)].into_iter().collect(),
            subscriber_key: [7; 32],
            adversary_mode,
            rng_seed: 1,
            signal_model: SignalModel { path_loss_exponent: 3.0, reference_distance: 1.0, sensitivity: -110.0 },
            max_search_attempts: 3,
        }
    }

    fn ue() -> SimEntity {
        SimEntity::new("ue", EntityKind::Ue, Position::new(50.0, 50.0), 0.0)
    }

    #[test]
    fn state_order() {
        assert!(UeState::PlmnSearch.can_transition_to(UeState::Deregistered));
        assert!(!UeState::RegisterInitiated.can_transition_to(UeState::Registered));
        assert!(!UeState::Authenticating.can_transition_to(UeState::RegisterInitiated));
        assert_eq!(UeState::Registered.successor(), None);
    }

    #[test]
    fn validation() {
        let s = base(vec![], IdentityMode::Suci, AdversaryMode::Off);
        assert_eq!(run_registration(&s).unwrap_err(), SimError::UeCount(0));
        let s = base(vec![ue(), ue()], IdentityMode::Suci, AdversaryMode::Off);
        assert_eq!(run_registration(&s).unwrap_err(), SimError::UeCount(2));
        let dup = SimEntity::new("ue", EntityKind::GnB, Position::default(), 10.0);
        let s = base(vec![ue(), dup], IdentityMode::Suci, AdversaryMode::Off);
        assert_eq!(run_registration(&s).unwrap_err(), SimError::DuplicateEntity("ue".into()));
    }

    #[test]
    fn out_of_range_station_is_not_selected() {
        let far = SimEntity::new("far", EntityKind::GnB, Position::new(1e9, 0.0), 0.0);
        let s = base(vec![ue(), far], IdentityMode::Suci, AdversaryMode::Off);
        assert_eq!(select_station(&s, s.ue_true_position()), None);
        let trace = run_registration(&s).unwrap();
        assert_eq!(trace.final_ue_state(), UeState::PlmnSearch);
        assert_eq!(trace.events.len(), 3);
    }

    #[test]
    fn equal_signal_tie_goes_to_smaller_id() {
        let a = SimEntity::new("b-cell", EntityKind::GnB, Position::new(60.0, 50.0), 10.0);
        let b = SimEntity::new("a-cell", EntityKind::RogueGnB, Position::new(40.0, 50.0), 10.0);
        let s = base(vec![ue(), a, b], IdentityMode::Suci, AdversaryMode::Off);
        assert_eq!(select_station(&s, s.ue_true_position()).unwrap().cell, "a-cell");
    }

    #[test]
    fn missing_network_key_stalls_registration() {
        let gnb = SimEntity::new("gnb", EntityKind::GnB, Position::new(0.0, 0.0), 30.0);
        let mut s = base(vec![ue(), gnb], IdentityMode::Suci, AdversaryMode::Off);
        let trace_ok = run_registration(&s).unwrap();
        assert_eq!(trace_ok.final_ue_state(), UeState::Registered);

        s.network_keys = KeyStore::new();
        let trace = run_registration(&s).unwrap();
        assert_eq!(trace.final_ue_state(), UeState::RegisterInitiated);
        assert!(trace
            .events
            .iter()
            .any(|e| matches!(&e.detail, EventDetail::Note { text, .. } if text.contains("de-concealment failed"))));
    }
}

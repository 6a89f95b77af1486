//! Scenario files.
//!
//! ```text
//! # header: key = value
//! seed = 7
//! supi = 24201-534567890
//! identity = suci                 # legacy | suci
//! adversary = passive             # off | passive | trilateration | location-info
//! path_loss_exponent = 3.0
//! reference_distance = 1.0
//! sensitivity = -110
//! max_search_attempts = 3
//! scheme = profile-a              # any policy-file key may appear inline
//! policy = ue.policy              # or load a policy file (inline keys override it)
//! provision_home_key = true       # hand the generated home key to the UE
//! network_key_file = hn.priv      # core's private key when key_file is used
//! subscriber_key = <64 hex>       # long-term key, derived from the seed if absent
//!
//! [ue handset]
//! position = 120, 80
//!
//! [gnb cell-1]
//! position = 0, 0
//! tx_power = 40
//!
//! [rogue catcher]
//! position = 150, 100
//! tx_power = 60
//!
//! [core amf]
//! ```
//!
//! Relative paths resolve against the scenario file's directory. Without a
//! `key_file`, an ECIES scheme gets a home-network key pair generated from the
//! seed and installed in the core's key store.

use std::fs;
use std::path::{Path, PathBuf};

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use thiserror::Error;

use super::geometry::Position;
use super::radio::SignalModel;
use super::{AdversaryMode, EntityKind, IdentityMode, SimEntity, SimScenario};
use crate::ecies::{self, generate_keypair};
use crate::identifiers::{parse_supi, ProtectionScheme};
use crate::protection::{parse_bool, KeyStore, PolicyConfig};

/// Mixed into the seed for key material so it does not share a stream with the run itself.
const PROVISIONING_SALT: u64 = 0x5eed_f00d_4b3e_7a11;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{0}")]
    Invalid(String),
}

fn read(path: &Path) -> Result<String, ScenarioError> {
    fs::read_to_string(path).map_err(|e| ScenarioError::Io { path: path.display().to_string(), message: e.to_string() })
}

pub fn load_scenario(path: &Path) -> Result<SimScenario, ScenarioError> {
    let text = read(path)?;
    parse_scenario(&text, path.parent().unwrap_or(Path::new(".")))
}

struct EntityBlock {
    line: usize,
    kind: EntityKind,
    id: String,
    position: Option<Position>,
    tx_power: Option<f64>,
}

fn parse_position(value: &str) -> Option<Position> {
    let (x, y) = value.split_once(',')?;
    Some(Position::new(x.trim().parse().ok()?, y.trim().parse().ok()?))
}

fn parse_f64(value: &str) -> Result<f64, String> {
    value.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or(format!("{value:?} is not a finite number"))
}

pub fn parse_scenario(text: &str, base_dir: &Path) -> Result<SimScenario, ScenarioError> {
    let mut seed = 0u64;
    let mut supi = None;
    let mut identity_mode = IdentityMode::Suci;
    let mut adversary_mode = AdversaryMode::Off;
    let mut signal_model = SignalModel::default();
    let mut max_search_attempts = 3u32;
    let mut subscriber_key: Option<[u8; 32]> = None;
    let mut policy_file: Option<PathBuf> = None;
    let mut inline_policy: Vec<(usize, String, String)> = Vec::new();
    let mut provision_home_key = true;
    let mut network_key_file: Option<PathBuf> = None;
    let mut blocks: Vec<EntityBlock> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let syntax = |message: String| ScenarioError::Syntax { line: line_no, message };
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(inner) = line.strip_prefix('[') {
            let inner = inner.strip_suffix(']').ok_or_else(|| syntax("unterminated entity header".into()))?;
            let mut parts = inner.split_whitespace();
            let (Some(kind), Some(id), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(syntax("entity header must be [<kind> <id>]".into()));
            };
            let kind = match kind {
                "ue" => EntityKind::Ue,
                "gnb" => EntityKind::GnB,
                "core" => EntityKind::Core,
                "rogue" => EntityKind::RogueGnB,
                other => return Err(syntax(format!("unknown entity kind {other:?}"))),
            };
            blocks.push(EntityBlock { line: line_no, kind, id: id.to_string(), position: None, tx_power: None });
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| syntax("expected 'key = value'".into()))?;
        let (key, value) = (key.trim(), value.trim());

        if let Some(block) = blocks.last_mut() {
            match key {
                "position" => {
                    block.position =
                        Some(parse_position(value).ok_or_else(|| syntax(format!("bad position {value:?}")))?)
                }
                "tx_power" => block.tx_power = Some(parse_f64(value).map_err(syntax)?),
                other => return Err(syntax(format!("unknown entity key {other:?}"))),
            }
            continue;
        }

        match key {
            "seed" => seed = value.parse().map_err(|_| syntax(format!("bad seed {value:?}")))?,
            "supi" => supi = Some(parse_supi(value).map_err(|e| syntax(e.to_string()))?),
            "identity" => {
                identity_mode = match value {
                    "legacy" | "supi" | "plaintext" => IdentityMode::Legacy,
                    "suci" => IdentityMode::Suci,
                    other => return Err(syntax(format!("unknown identity mode {other:?}"))),
                }
            }
            "adversary" => {
                adversary_mode = match value {
                    "off" | "none" => AdversaryMode::Off,
                    "passive" | "passive-capture" => AdversaryMode::PassiveCapture,
                    "trilateration" => AdversaryMode::Trilateration,
                    "location-info" | "locationinfo" => AdversaryMode::LocationInfo,
                    other => return Err(syntax(format!("unknown adversary mode {other:?}"))),
                }
            }
            "path_loss_exponent" => signal_model.path_loss_exponent = parse_f64(value).map_err(syntax)?,
            "reference_distance" => signal_model.reference_distance = parse_f64(value).map_err(syntax)?,
            "sensitivity" => signal_model.sensitivity = parse_f64(value).map_err(syntax)?,
            "max_search_attempts" => {
                max_search_attempts = value.parse().map_err(|_| syntax(format!("bad attempt count {value:?}")))?
            }
            "subscriber_key" => {
                let bytes = hex::decode(value).map_err(|e| syntax(e.to_string()))?;
                subscriber_key = Some(bytes.try_into().map_err(|_| syntax("subscriber_key must be 32 octets".into()))?);
            }
            "policy" => policy_file = Some(base_dir.join(value)),
            "provision_home_key" => {
                provision_home_key = parse_bool(value).ok_or_else(|| syntax(format!("bad boolean {value:?}")))?
            }
            "network_key_file" => network_key_file = Some(base_dir.join(value)),
            _ => inline_policy.push((line_no, key.to_string(), value.to_string())),
        }
    }

    let supi = supi.ok_or_else(|| ScenarioError::Invalid("missing 'supi'".into()))?;

    let mut policy_cfg = match &policy_file {
        Some(path) => {
            PolicyConfig::parse(&read(path)?).map_err(|e| ScenarioError::Invalid(format!("{}: {e}", path.display())))?
        }
        None => PolicyConfig::default(),
    };
    let policy_dir = policy_file.as_deref().and_then(Path::parent).unwrap_or(base_dir).to_path_buf();
    let mut key_file_from_inline = false;
    for (line, key, value) in &inline_policy {
        let known = policy_cfg.apply(key, value).map_err(|message| ScenarioError::Syntax { line: *line, message })?;
        if !known {
            return Err(ScenarioError::Syntax { line: *line, message: format!("unknown key {key:?}") });
        }
        key_file_from_inline |= key == "key_file";
    }

    let mut provisioning = ChaCha20Rng::seed_from_u64(seed ^ PROVISIONING_SALT);
    let subscriber_key = subscriber_key.unwrap_or_else(|| {
        let mut k = [0u8; 32];
        provisioning.fill_bytes(&mut k);
        k
    });

    let mut network_keys = KeyStore::new();
    if let Some(path) = &network_key_file {
        let pair = ecies::load_private_key(&read(path)?)
            .map_err(|e| ScenarioError::Invalid(format!("{}: {e}", path.display())))?;
        network_keys.insert(policy_cfg.key_id, pair);
    }

    let ue_key = match (policy_cfg.scheme, &policy_cfg.key_file) {
        (ProtectionScheme::Null, _) => None,
        (ProtectionScheme::Ecies(_), Some(rel)) => {
            let path = if key_file_from_inline { base_dir.join(rel) } else { policy_dir.join(rel) };
            match fs::read_to_string(&path) {
                Ok(text) => Some(
                    ecies::load_public_key(&text)
                        .map_err(|e| ScenarioError::Invalid(format!("{}: {e}", path.display())))?,
                ),
                Err(_) if policy_cfg.null_fallback => None,
                Err(e) => return Err(ScenarioError::Io { path: path.display().to_string(), message: e.to_string() }),
            }
        }
        (ProtectionScheme::Ecies(profile), None) => {
            let pair = generate_keypair(profile, &mut provisioning);
            let public = pair.public_key().to_vec();
            if network_key_file.is_none() {
                network_keys.insert(policy_cfg.key_id, pair);
            }
            provision_home_key.then_some((profile, public))
        }
    };
    let ue_policy = policy_cfg.to_policy(ue_key).map_err(|e| ScenarioError::Invalid(e.to_string()))?;

    let entities = blocks
        .into_iter()
        .map(|b| {
            let needs_position = matches!(b.kind, EntityKind::Ue | EntityKind::GnB | EntityKind::RogueGnB);
            let position = match b.position {
                Some(p) => p,
                None if needs_position => {
                    return Err(ScenarioError::Syntax {
                        line: b.line,
                        message: format!("entity {:?} needs a position", b.id),
                    })
                }
                None => Position::default(),
            };
            Ok(SimEntity { id: b.id, kind: b.kind, position, tx_power: b.tx_power.unwrap_or(0.0) })
        })
        .collect::<Result<Vec<_>, _>>()?;

    let scenario = SimScenario {
        entities,
        supi,
        identity_mode,
        ue_policy,
        network_keys,
        subscriber_key,
        adversary_mode,
        rng_seed: seed,
        signal_model,
        max_search_attempts,
    };
    scenario.validate().map_err(|e| ScenarioError::Invalid(e.to_string()))?;
    Ok(scenario)
}

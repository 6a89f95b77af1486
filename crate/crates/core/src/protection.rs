//! SUPI -> SUCI on the UE side and SUCI -> SUPI on the network side
//! (the de-concealing function), driven by an operator policy.
//!
//! When the policy disables SUCI or no home-network key was provisioned the
//! UE silently falls back to the null scheme. The fallback is kept, and
//! reported through [`ConcealedIdentity::downgrade`].

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use rand::{CryptoRng, RngCore};
use thiserror::Error;

use crate::ecies::{self, EciesError, EciesKeyPair, EciesProfile, HomeNetworkKeyPair};
use crate::identifiers::{
    tbcd_decode, tbcd_encode, IdentifierError, ProtectionScheme, RoutingIndicator, SchemeOutput, Suci, Supi,
    SUPI_FORMAT_IMSI,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProtectionError {
    #[error(transparent)]
    Identifier(#[from] IdentifierError),
    #[error(transparent)]
    Ecies(#[from] EciesError),
    #[error("no home-network private key with id {0}")]
    UnknownKeyId(u8),
    #[error("decrypted MSIN is not valid TBCD: {0}")]
    CorruptPlaintext(String),
    #[error("SUPI format {0} is not supported")]
    UnsupportedFormat(u8),
    #[error("invalid policy: {0}")]
    InvalidPolicy(String),
}

/// Why a concealment ended up on the null scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Downgrade {
    /// `suci_enabled` is off.
    SuciDisabled,
    /// ECIES preferred but no home-network public key was provisioned.
    NoHomeNetworkKey,
    /// The operator selected the null scheme outright.
    NullSchemeConfigured,
}

impl fmt::Display for Downgrade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Downgrade::SuciDisabled => "SUCI disabled by operator policy; MSIN sent with the null scheme",
            Downgrade::NoHomeNetworkKey => "no home-network public key provisioned; MSIN sent with the null scheme",
            Downgrade::NullSchemeConfigured => "operator policy selects the null scheme; MSIN sent in the clear",
        })
    }
}

/// UE-side provisioning: which scheme to use and with which home-network key.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperatorPolicy {
    pub suci_enabled: bool,
    pub preferred_scheme: ProtectionScheme,
    pub home_network_public_key: Option<Vec<u8>>,
    pub home_network_public_key_id: u8,
    pub routing_indicator: RoutingIndicator,
}

impl OperatorPolicy {
    pub fn null() -> Self {
        OperatorPolicy {
            suci_enabled: true,
            preferred_scheme: ProtectionScheme::Null,
            home_network_public_key: None,
            home_network_public_key_id: 0,
            routing_indicator: RoutingIndicator::default(),
        }
    }

    pub fn ecies(profile: EciesProfile, home_network_public_key: Vec<u8>, key_id: u8) -> Self {
        OperatorPolicy {
            suci_enabled: true,
            preferred_scheme: ProtectionScheme::Ecies(profile),
            home_network_public_key: Some(home_network_public_key),
            home_network_public_key_id: key_id,
            routing_indicator: RoutingIndicator::default(),
        }
    }

    /// The scheme this policy actually yields and, for null, why.
    pub fn effective_scheme(&self) -> (ProtectionScheme, Option<Downgrade>) {
        if !self.suci_enabled {
            return (ProtectionScheme::Null, Some(Downgrade::SuciDisabled));
        }
        match self.preferred_scheme {
            ProtectionScheme::Null => (ProtectionScheme::Null, Some(Downgrade::NullSchemeConfigured)),
            ProtectionScheme::Ecies(_) if self.home_network_public_key.is_none() => {
                (ProtectionScheme::Null, Some(Downgrade::NoHomeNetworkKey))
            }
            scheme => (scheme, None),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConcealedIdentity {
    pub suci: Suci,
    pub downgrade: Option<Downgrade>,
}

enum Ephemeral<'a, R> {
    Fresh(&'a mut R),
    Fixed(&'a EciesKeyPair),
}

fn conceal_inner<R: RngCore + CryptoRng>(
    supi: &Supi,
    policy: &OperatorPolicy,
    ephemeral: Ephemeral<'_, R>,
) -> Result<ConcealedIdentity, ProtectionError> {
    let (scheme, downgrade) = policy.effective_scheme();
    let output = match scheme {
        ProtectionScheme::Null => SchemeOutput::Null { msin: supi.msin().to_string() },
        ProtectionScheme::Ecies(profile) => {
            let hn_key = policy.home_network_public_key.as_deref().expect("effective_scheme checked the key");
            let packed = tbcd_encode(supi.msin())?;
            let env = match ephemeral {
                Ephemeral::Fresh(rng) => ecies::conceal(profile, hn_key, &packed, rng)?,
                Ephemeral::Fixed(pair) => ecies::conceal_with_ephemeral(profile, hn_key, &packed, pair)?,
            };
            SchemeOutput::Ecies {
                ephemeral_public_key: env.ephemeral_public_key,
                ciphertext: env.ciphertext,
                mac: env.mac,
            }
        }
    };
    // the null scheme has no home-network key, so its key id is always 0
    let key_id = match scheme {
        ProtectionScheme::Null => 0,
        ProtectionScheme::Ecies(_) => policy.home_network_public_key_id,
    };
    let suci = Suci::new(supi.plmn().clone(), policy.routing_indicator.clone(), scheme, key_id, output)?;
    Ok(ConcealedIdentity { suci, downgrade })
}

/// Conceals the MSIN of `supi` according to `policy`. MCC and MNC are copied
/// into the SUCI unchanged.
pub fn conceal_supi<R: RngCore + CryptoRng>(
    supi: &Supi,
    policy: &OperatorPolicy,
    rng: &mut R,
) -> Result<ConcealedIdentity, ProtectionError> {
    conceal_inner(supi, policy, Ephemeral::Fresh(rng))
}

/// As [`conceal_supi`] but with a fixed ephemeral key. Deterministic, and
/// therefore linkable.
pub fn conceal_supi_with_ephemeral(
    supi: &Supi,
    policy: &OperatorPolicy,
    ephemeral: &EciesKeyPair,
) -> Result<ConcealedIdentity, ProtectionError> {
    conceal_inner::<rand::rngs::ThreadRng>(supi, policy, Ephemeral::Fixed(ephemeral))
}

/// Home-network private keys indexed by public-key identifier.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KeyStore {
    keys: BTreeMap<u8, HomeNetworkKeyPair>,
}

impl KeyStore {
    pub fn new() -> Self {
        KeyStore::default()
    }

    pub fn insert(&mut self, key_id: u8, pair: HomeNetworkKeyPair) -> Option<HomeNetworkKeyPair> {
        self.keys.insert(key_id, pair)
    }

    pub fn get(&self, key_id: u8) -> Option<&HomeNetworkKeyPair> {
        self.keys.get(&key_id)
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }
}

impl FromIterator<(u8, HomeNetworkKeyPair)> for KeyStore {
    fn from_iter<T: IntoIterator<Item = (u8, HomeNetworkKeyPair)>>(iter: T) -> Self {
        KeyStore { keys: iter.into_iter().collect() }
    }
}

/// Recovers the SUPI from a SUCI using the network's key store.
pub fn deconceal_suci(suci: &Suci, network_keys: &KeyStore) -> Result<Supi, ProtectionError> {
    if suci.supi_format() != SUPI_FORMAT_IMSI {
        return Err(ProtectionError::UnsupportedFormat(suci.supi_format()));
    }
    let msin = match (suci.scheme(), suci.scheme_output()) {
        (ProtectionScheme::Null, SchemeOutput::Null { msin }) => msin.clone(),
        (ProtectionScheme::Ecies(profile), SchemeOutput::Ecies { ephemeral_public_key, ciphertext, mac }) => {
            let key_id = suci.home_network_public_key_id();
            let pair = network_keys.get(key_id).ok_or(ProtectionError::UnknownKeyId(key_id))?;
            if pair.profile() != profile {
                return Err(EciesError::ProfileMismatch { expected: profile, found: pair.profile() }.into());
            }
            let packed = ecies::deconceal(profile, pair.private_key(), ephemeral_public_key, ciphertext, mac)?;
            tbcd_decode(&packed).map_err(|e| ProtectionError::CorruptPlaintext(e.to_string()))?
        }
        _ => unreachable!("Suci::new pairs scheme ids with output variants"),
    };
    Supi::new(suci.plmn().clone(), &msin).map_err(|e| ProtectionError::CorruptPlaintext(e.to_string()))
}

// ------------------------------------------------------------------ policy file

/// Parsed form of a policy file:
///
/// ```text
/// suci_enabled = true
/// scheme = profile-a          # null | profile-a | profile-b
/// key_id = 0
/// routing_indicator = 0000
/// key_file = hn.pub           # relative to the policy file
/// null_fallback = true        # allow null when the key file is missing
/// ```
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolicyConfig {
    pub suci_enabled: bool,
    pub scheme: ProtectionScheme,
    pub key_id: u8,
    pub routing_indicator: RoutingIndicator,
    pub key_file: Option<PathBuf>,
    pub null_fallback: bool,
}

impl Default for PolicyConfig {
    fn default() -> Self {
        PolicyConfig {
            suci_enabled: true,
            scheme: ProtectionScheme::Null,
            key_id: 0,
            routing_indicator: RoutingIndicator::default(),
            key_file: None,
            null_fallback: true,
        }
    }
}

pub(crate) fn parse_bool(value: &str) -> Option<bool> {
    match value.to_ascii_lowercase().as_str() {
        "true" | "yes" | "on" | "1" => Some(true),
        "false" | "no" | "off" | "0" => Some(false),
        _ => None,
    }
}

impl PolicyConfig {
    pub fn parse(text: &str) -> Result<Self, ProtectionError> {
        let mut cfg = PolicyConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                ProtectionError::InvalidPolicy(format!("line {}: expected 'key = value'", lineno + 1))
            })?;
            cfg.set(key.trim(), value.trim())
                .map_err(|why| ProtectionError::InvalidPolicy(format!("line {}: {why}", lineno + 1)))?;
        }
        Ok(cfg)
    }

    /// Applies one `key = value` setting. Returns `Ok(false)` for keys that are
    /// not policy settings so callers embedding policies in larger files can
    /// handle them.
    pub fn apply(&mut self, key: &str, value: &str) -> Result<bool, String> {
        match key {
            "suci_enabled" => self.suci_enabled = parse_bool(value).ok_or(format!("bad boolean {value:?}"))?,
            "null_fallback" => self.null_fallback = parse_bool(value).ok_or(format!("bad boolean {value:?}"))?,
            "scheme" => self.scheme = value.parse().map_err(|e: IdentifierError| e.to_string())?,
            "key_id" => self.key_id = value.parse().map_err(|_| format!("key_id {value:?} is not 0-255"))?,
            "routing_indicator" => self.routing_indicator = RoutingIndicator::new(value).map_err(|e| e.to_string())?,
            "key_file" => self.key_file = Some(PathBuf::from(value)),
            _ => return Ok(false),
        }
        Ok(true)
    }

    fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        if self.apply(key, value)? {
            Ok(())
        } else {
            Err(format!("unknown key {key:?}"))
        }
    }

    /// Builds the UE policy once the key file (if any) has been read.
    pub fn to_policy(
        &self,
        home_network_key: Option<(EciesProfile, Vec<u8>)>,
    ) -> Result<OperatorPolicy, ProtectionError> {
        if let (ProtectionScheme::Ecies(want), Some((got, _))) = (self.scheme, &home_network_key) {
            if want != *got {
                return Err(EciesError::ProfileMismatch { expected: want, found: *got }.into());
            }
        }
        Ok(OperatorPolicy {
            suci_enabled: self.suci_enabled,
            preferred_scheme: self.scheme,
            home_network_public_key: home_network_key.map(|(_, k)| k),
            home_network_public_key_id: self.key_id,
            routing_indicator: self.routing_indicator.clone(),
        })
    }
}

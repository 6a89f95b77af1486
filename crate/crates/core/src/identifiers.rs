//! Subscriber identifiers: PLMN, SUPI (IMSI form), SUCI, and the TBCD digit
//! packing used for the MSIN.
//!
//! Text forms:
//!
//! * SUPI: `<mcc><mnc>-<msin>`, e.g. `24201-534567890`
//! * SUCI: `suci-<format>-<mcc>-<mnc>-<routing>-<scheme>-<keyid>-<output>`, where
//!   `<output>` is the bare MSIN for the null scheme and lowercase hex of
//!   `ephemeral key || ciphertext || mac` for the ECIES schemes.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::ecies::{EciesProfile, MAC_LEN};

/// SUPI type code for IMSI-based identities. Other codes are reserved here.
pub const SUPI_FORMAT_IMSI: u8 = 0;

pub const DEFAULT_ROUTING_INDICATOR: &str = "0000";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdentifierError {
    #[error("invalid digit {0:?}")]
    InvalidDigit(char),
    #[error("malformed TBCD: {0}")]
    MalformedTbcd(String),
    #[error("invalid PLMN: {0}")]
    InvalidPlmn(String),
    #[error("invalid SUPI: {0}")]
    InvalidSupi(String),
    #[error("invalid SUCI: {0}")]
    InvalidSuci(String),
    #[error("unknown protection scheme id {0}")]
    UnknownScheme(u8),
    #[error("scheme output too short: {got} octets, need at least {need}")]
    TruncatedOutput { got: usize, need: usize },
}

fn all_digits(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit())
}

// ------------------------------------------------------------------ TBCD

/// Packs decimal digits two per octet, first digit in the low nibble, with a
/// trailing `0xF` nibble when the count is odd.
pub fn tbcd_encode(digits: &str) -> Result<Vec<u8>, IdentifierError> {
    if digits.is_empty() {
        return Err(IdentifierError::MalformedTbcd("empty digit string".into()));
    }
    if let Some(c) = digits.chars().find(|c| !c.is_ascii_digit()) {
        return Err(IdentifierError::InvalidDigit(c));
    }
    Ok(digits
        .as_bytes()
        .chunks(2)
        .map(|pair| {
            let lo = pair[0] - b'0';
            let hi = pair.get(1).map_or(0x0F, |d| d - b'0');
            (hi << 4) | lo
        })
        .collect())
}

pub fn tbcd_decode(packed: &[u8]) -> Result<String, IdentifierError> {
    if packed.is_empty() {
        return Err(IdentifierError::MalformedTbcd("empty input".into()));
    }
    let last = packed.len() - 1;
    let mut out = String::with_capacity(packed.len() * 2);
    for (i, octet) in packed.iter().enumerate() {
        let lo = octet & 0x0F;
        let hi = octet >> 4;
        if lo > 9 {
            return Err(IdentifierError::MalformedTbcd(format!("nibble {lo:#x} in octet {i}")));
        }
        out.push(char::from(b'0' + lo));
        match hi {
            0..=9 => out.push(char::from(b'0' + hi)),
            0x0F if i == last => {}
            _ => return Err(IdentifierError::MalformedTbcd(format!("nibble {hi:#x} in octet {i}"))),
        }
    }
    Ok(out)
}

// ------------------------------------------------------------------ PLMN

/// Public Land Mobile Network id: country code plus network code.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Plmn {
    mcc: String,
    mnc: String,
}

impl Plmn {
    pub fn new(mcc: &str, mnc: &str) -> Result<Self, IdentifierError> {
        if mcc.len() != 3 || !all_digits(mcc) {
            return Err(IdentifierError::InvalidPlmn(format!("MCC {mcc:?} must be 3 digits")));
        }
        if !(2..=3).contains(&mnc.len()) || !all_digits(mnc) {
            return Err(IdentifierError::InvalidPlmn(format!("MNC {mnc:?} must be 2 or 3 digits")));
        }
        Ok(Plmn { mcc: mcc.to_string(), mnc: mnc.to_string() })
    }

    pub fn mcc(&self) -> &str {
        &self.mcc
    }

    pub fn mnc(&self) -> &str {
        &self.mnc
    }
}

impl fmt::Display for Plmn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.mcc, self.mnc)
    }
}

// ------------------------------------------------------------------ SUPI

/// Permanent subscriber identity in IMSI form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Supi {
    plmn: Plmn,
    msin: String,
}

fn check_msin(plmn: &Plmn, msin: &str) -> Result<(), IdentifierError> {
    if !all_digits(msin) {
        return Err(IdentifierError::InvalidSupi(format!("MSIN {msin:?} is not a digit string")));
    }
    if !(9..=10).contains(&msin.len()) {
        return Err(IdentifierError::InvalidSupi(format!("MSIN has {} digits, expected 9 or 10", msin.len())));
    }
    let total = plmn.mcc.len() + plmn.mnc.len() + msin.len();
    if !(13..=15).contains(&total) {
        return Err(IdentifierError::InvalidSupi(format!("IMSI has {total} digits, expected 13 to 15")));
    }
    Ok(())
}

impl Supi {
    pub fn new(plmn: Plmn, msin: &str) -> Result<Self, IdentifierError> {
        check_msin(&plmn, msin)?;
        Ok(Supi { plmn, msin: msin.to_string() })
    }

    pub fn plmn(&self) -> &Plmn {
        &self.plmn
    }

    pub fn msin(&self) -> &str {
        &self.msin
    }

    /// The 13 to 15 digit IMSI with no separator.
    pub fn imsi_digits(&self) -> String {
        format!("{}{}", self.plmn, self.msin)
    }
}

/// Parses `<mcc><mnc>-<msin>`; five digits before the hyphen means a
/// two-digit MNC, six means three.
pub fn parse_supi(text: &str) -> Result<Supi, IdentifierError> {
    let bad = |why: &str| IdentifierError::InvalidSupi(format!("{text:?}: {why}"));
    let (head, msin) = text.split_once('-').ok_or_else(|| bad("missing '-'"))?;
    if !all_digits(head) {
        return Err(bad("PLMN part is not a digit string"));
    }
    let mnc_len = match head.len() {
        5 => 2,
        6 => 3,
        n => return Err(bad(&format!("PLMN part has {n} digits, expected 5 or 6"))),
    };
    let plmn = Plmn::new(&head[..3], &head[3..3 + mnc_len]).map_err(|e| bad(&e.to_string()))?;
    Supi::new(plmn, msin)
}

pub fn serialize_supi(supi: &Supi) -> String {
    supi.to_string()
}

impl fmt::Display for Supi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.plmn, self.msin)
    }
}

impl FromStr for Supi {
    type Err = IdentifierError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_supi(s)
    }
}

// ------------------------------------------------------------------ SUCI

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProtectionScheme {
    Null,
    Ecies(EciesProfile),
}

impl ProtectionScheme {
    pub fn id(self) -> u8 {
        match self {
            ProtectionScheme::Null => 0,
            ProtectionScheme::Ecies(EciesProfile::ProfileA) => 1,
            ProtectionScheme::Ecies(EciesProfile::ProfileB) => 2,
        }
    }

    pub fn from_id(id: u8) -> Result<Self, IdentifierError> {
        match id {
            0 => Ok(ProtectionScheme::Null),
            1 => Ok(ProtectionScheme::Ecies(EciesProfile::ProfileA)),
            2 => Ok(ProtectionScheme::Ecies(EciesProfile::ProfileB)),
            other => Err(IdentifierError::UnknownScheme(other)),
        }
    }
}

impl fmt::Display for ProtectionScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProtectionScheme::Null => f.write_str("null"),
            ProtectionScheme::Ecies(p) => p.fmt(f),
        }
    }
}

impl FromStr for ProtectionScheme {
    type Err = IdentifierError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "null" | "0" => Ok(ProtectionScheme::Null),
            other => other
                .parse::<EciesProfile>()
                .map(ProtectionScheme::Ecies)
                .map_err(|_| IdentifierError::InvalidSuci(format!("unknown scheme name {s:?}"))),
        }
    }
}

/// What travels in the SUCI's scheme-output field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SchemeOutput {
    Null { msin: String },
    Ecies { ephemeral_public_key: Vec<u8>, ciphertext: Vec<u8>, mac: Vec<u8> },
}

impl SchemeOutput {
    fn payload_text(&self) -> String {
        match self {
            SchemeOutput::Null { msin } => msin.clone(),
            SchemeOutput::Ecies { ephemeral_public_key, ciphertext, mac } => {
                let mut s = hex::encode(ephemeral_public_key);
                s.push_str(&hex::encode(ciphertext));
                s.push_str(&hex::encode(mac));
                s
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RoutingIndicator(String);

impl RoutingIndicator {
    pub fn new(digits: &str) -> Result<Self, IdentifierError> {
        if !(1..=4).contains(&digits.len()) || !all_digits(digits) {
            return Err(IdentifierError::InvalidSuci(format!("routing indicator {digits:?} must be 1 to 4 digits")));
        }
        Ok(RoutingIndicator(digits.to_string()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl Default for RoutingIndicator {
    fn default() -> Self {
        RoutingIndicator(DEFAULT_ROUTING_INDICATOR.to_string())
    }
}

impl fmt::Display for RoutingIndicator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Concealed subscriber identifier. Construction checks that the scheme id and
/// the scheme output agree, so a held `Suci` always serializes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Suci {
    supi_format: u8,
    plmn: Plmn,
    routing_indicator: RoutingIndicator,
    scheme: ProtectionScheme,
    home_network_public_key_id: u8,
    scheme_output: SchemeOutput,
}

impl Suci {
    pub fn new(
        plmn: Plmn,
        routing_indicator: RoutingIndicator,
        scheme: ProtectionScheme,
        home_network_public_key_id: u8,
        scheme_output: SchemeOutput,
    ) -> Result<Self, IdentifierError> {
        match (&scheme, &scheme_output) {
            (ProtectionScheme::Null, SchemeOutput::Null { msin }) => {
                check_msin(&plmn, msin).map_err(|e| IdentifierError::InvalidSuci(e.to_string()))?;
            }
            (ProtectionScheme::Ecies(profile), SchemeOutput::Ecies { ephemeral_public_key, ciphertext, mac }) => {
                if ephemeral_public_key.len() != profile.public_key_len() {
                    return Err(IdentifierError::InvalidSuci(format!(
                        "{profile} ephemeral key must be {} octets, got {}",
                        profile.public_key_len(),
                        ephemeral_public_key.len()
                    )));
                }
                if ciphertext.is_empty() {
                    return Err(IdentifierError::InvalidSuci("empty ciphertext".into()));
                }
                if mac.len() != MAC_LEN {
                    return Err(IdentifierError::InvalidSuci(format!("MAC must be {MAC_LEN} octets")));
                }
            }
            _ => {
                return Err(IdentifierError::InvalidSuci(format!(
                    "scheme {} does not match its output variant",
                    scheme.id()
                )))
            }
        }
        Ok(Suci {
            supi_format: SUPI_FORMAT_IMSI,
            plmn,
            routing_indicator,
            scheme,
            home_network_public_key_id,
            scheme_output,
        })
    }

    pub fn supi_format(&self) -> u8 {
        self.supi_format
    }

    pub fn plmn(&self) -> &Plmn {
        &self.plmn
    }

    pub fn routing_indicator(&self) -> &RoutingIndicator {
        &self.routing_indicator
    }

    pub fn scheme(&self) -> ProtectionScheme {
        self.scheme
    }

    pub fn protection_scheme_id(&self) -> u8 {
        self.scheme.id()
    }

    pub fn home_network_public_key_id(&self) -> u8 {
        self.home_network_public_key_id
    }

    pub fn scheme_output(&self) -> &SchemeOutput {
        &self.scheme_output
    }
}

pub fn serialize_suci(suci: &Suci) -> String {
    format!(
        "suci-{}-{}-{}-{}-{}-{}-{}",
        suci.supi_format,
        suci.plmn.mcc,
        suci.plmn.mnc,
        suci.routing_indicator,
        suci.scheme.id(),
        suci.home_network_public_key_id,
        suci.scheme_output.payload_text()
    )
}

pub fn parse_suci(text: &str) -> Result<Suci, IdentifierError> {
    let bad = |why: String| IdentifierError::InvalidSuci(format!("{text:?}: {why}"));
    let fields: Vec<&str> = text.trim().split('-').collect();
    let [tag, format, mcc, mnc, routing, scheme, key_id, payload] = fields[..] else {
        return Err(bad(format!("expected 8 dash-separated fields, got {}", fields.len())));
    };
    if !tag.eq_ignore_ascii_case("suci") {
        return Err(bad("missing 'suci' prefix".into()));
    }
    let small_int = |s: &str, what: &str| -> Result<u8, IdentifierError> {
        if !all_digits(s) {
            return Err(bad(format!("{what} {s:?} is not a number")));
        }
        s.parse::<u8>().map_err(|_| bad(format!("{what} {s:?} out of range")))
    };
    let format = small_int(format, "SUPI format")?;
    if format != SUPI_FORMAT_IMSI {
        return Err(bad(format!("SUPI format {format} is not supported")));
    }
    let plmn = Plmn::new(mcc, mnc).map_err(|e| bad(e.to_string()))?;
    let routing = RoutingIndicator::new(routing).map_err(|e| bad(e.to_string()))?;
    let scheme = ProtectionScheme::from_id(small_int(scheme, "scheme id")?)?;
    let key_id = small_int(key_id, "key id")?;

    let output = match scheme {
        ProtectionScheme::Null => SchemeOutput::Null { msin: payload.to_string() },
        ProtectionScheme::Ecies(profile) => {
            let bytes = hex::decode(payload).map_err(|e| bad(format!("scheme output: {e}")))?;
            let key_len = profile.public_key_len();
            let need = key_len + 1 + MAC_LEN;
            if bytes.len() < need {
                return Err(IdentifierError::TruncatedOutput { got: bytes.len(), need });
            }
            let mac_start = bytes.len() - MAC_LEN;
            SchemeOutput::Ecies {
                ephemeral_public_key: bytes[..key_len].to_vec(),
                ciphertext: bytes[key_len..mac_start].to_vec(),
                mac: bytes[mac_start..].to_vec(),
            }
        }
    };
    Suci::new(plmn, routing, scheme, key_id, output)
}

impl fmt::Display for Suci {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize_suci(self))
    }
}

impl FromStr for Suci {
    type Err = IdentifierError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_suci(s)
    }
}

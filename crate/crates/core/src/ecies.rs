//! ECIES concealment for SUCI protection schemes.
//!
//! Both profiles share one envelope:
//!
//! * ephemeral ECDH against the home-network public key
//!   (X25519 for Profile A, secp256r1 with compressed points for Profile B)
//! * ANSI X9.63 KDF over SHA-256, shared info = ephemeral public key, 64 octets
//!   split into AES key (16) | initial counter block (16) | MAC key (32)
//! * AES-128-CTR over the packed MSIN
//! * HMAC-SHA-256 over the ciphertext, truncated to 8 octets

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use aes::cipher::{KeyIvInit, StreamCipher};
use hmac::{Hmac, Mac};
use rand::{CryptoRng, RngCore};
use sha2::{Digest, Sha256};
use subtle::ConstantTimeEq;
use thiserror::Error;

type Aes128Ctr = ctr::Ctr128BE<aes::Aes128>;
type HmacSha256 = Hmac<Sha256>;

pub const PRIVATE_KEY_LEN: usize = 32;
pub const SHARED_SECRET_LEN: usize = 32;
pub const ENC_KEY_LEN: usize = 16;
pub const ICB_LEN: usize = 16;
pub const MAC_KEY_LEN: usize = 32;
pub const MAC_LEN: usize = 8;
const KDF_OUTPUT_LEN: usize = ENC_KEY_LEN + ICB_LEN + MAC_KEY_LEN;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EciesError {
    #[error("{what} must be {expected} octets, got {got}")]
    InvalidKeyLength { what: &'static str, expected: usize, got: usize },
    #[error("private key is not a valid scalar for {0}")]
    InvalidPrivateKey(EciesProfile),
    #[error("key agreement produced a degenerate (all-zero) secret")]
    DegenerateKey,
    #[error("public key is not a valid curve point")]
    InvalidPoint,
    #[error("MAC verification failed")]
    IntegrityFailure,
    #[error("plaintext must not be empty")]
    EmptyPlaintext,
    #[error("key is for {found}, expected {expected}")]
    ProfileMismatch { expected: EciesProfile, found: EciesProfile },
    #[error("malformed key file: {0}")]
    MalformedKeyFile(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EciesProfile {
    /// Curve25519.
    ProfileA,
    /// secp256r1.
    ProfileB,
}

impl EciesProfile {
    pub fn public_key_len(self) -> usize {
        match self {
            EciesProfile::ProfileA => 32,
            EciesProfile::ProfileB => 33,
        }
    }

    pub fn private_key_len(self) -> usize {
        PRIVATE_KEY_LEN
    }

    pub fn name(self) -> &'static str {
        match self {
            EciesProfile::ProfileA => "profile-a",
            EciesProfile::ProfileB => "profile-b",
        }
    }
}

impl fmt::Display for EciesProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EciesProfile {
    type Err = EciesError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "profile-a" | "a" | "1" => Ok(EciesProfile::ProfileA),
            "profile-b" | "b" | "2" => Ok(EciesProfile::ProfileB),
            _ => Err(EciesError::MalformedKeyFile(format!("unknown profile {s:?}"))),
        }
    }
}

fn check_len(what: &'static str, bytes: &[u8], expected: usize) -> Result<(), EciesError> {
    if bytes.len() != expected {
        return Err(EciesError::InvalidKeyLength { what, expected, got: bytes.len() });
    }
    Ok(())
}

fn clamp25519(mut k: [u8; 32]) -> [u8; 32] {
    k[0] &= 248;
    k[31] &= 127;
    k[31] |= 64;
    k
}

fn p256_secret(private_key: &[u8]) -> Result<p256::SecretKey, EciesError> {
    p256::SecretKey::from_slice(private_key).map_err(|_| EciesError::InvalidPrivateKey(EciesProfile::ProfileB))
}

fn p256_public(public_key: &[u8]) -> Result<p256::PublicKey, EciesError> {
    // from_sec1_bytes rejects the identity encoding and off-curve points.
    p256::PublicKey::from_sec1_bytes(public_key).map_err(|_| EciesError::InvalidPoint)
}

/// Derives the public key `k * G` for a private scalar.
pub fn public_key_from_private(profile: EciesProfile, private_key: &[u8]) -> Result<Vec<u8>, EciesError> {
    check_len("private key", private_key, PRIVATE_KEY_LEN)?;
    match profile {
        EciesProfile::ProfileA => {
            let k: [u8; 32] = private_key.try_into().expect("length checked");
            Ok(x25519_dalek::x25519(k, x25519_dalek::X25519_BASEPOINT_BYTES).to_vec())
        }
        EciesProfile::ProfileB => {
            use p256::elliptic_curve::sec1::ToEncodedPoint;
            let secret = p256_secret(private_key)?;
            Ok(secret.public_key().to_encoded_point(true).as_bytes().to_vec())
        }
    }
}

/// A private scalar with its public point. Used for home-network keys and for
/// the per-concealment ephemeral keys.
#[derive(Clone, PartialEq, Eq)]
pub struct EciesKeyPair {
    profile: EciesProfile,
    private_key: Vec<u8>,
    public_key: Vec<u8>,
}

pub type HomeNetworkKeyPair = EciesKeyPair;

impl EciesKeyPair {
    pub fn generate<R: RngCore + CryptoRng>(profile: EciesProfile, rng: &mut R) -> Self {
        let mut seed = [0u8; PRIVATE_KEY_LEN];
        loop {
            rng.fill_bytes(&mut seed);
            // Profile B rejects 0 and scalars >= n; retry is astronomically rare.
            if let Ok(pair) = Self::from_private(profile, &seed) {
                return pair;
            }
        }
    }

    /// Builds a key pair from raw private octets. Profile A scalars are
    /// clamped before storage.
    pub fn from_private(profile: EciesProfile, private_key: &[u8]) -> Result<Self, EciesError> {
        check_len("private key", private_key, PRIVATE_KEY_LEN)?;
        let private_key = match profile {
            EciesProfile::ProfileA => clamp25519(private_key.try_into().expect("length checked")).to_vec(),
            EciesProfile::ProfileB => private_key.to_vec(),
        };
        let public_key = public_key_from_private(profile, &private_key)?;
        Ok(EciesKeyPair { profile, private_key, public_key })
    }

    pub fn profile(&self) -> EciesProfile {
        self.profile
    }

    pub fn private_key(&self) -> &[u8] {
        &self.private_key
    }

    pub fn public_key(&self) -> &[u8] {
        &self.public_key
    }
}

impl fmt::Debug for EciesKeyPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EciesKeyPair")
            .field("profile", &self.profile)
            .field("public_key", &hex::encode(&self.public_key))
            .finish_non_exhaustive()
    }
}

pub fn generate_keypair<R: RngCore + CryptoRng>(profile: EciesProfile, rng: &mut R) -> HomeNetworkKeyPair {
    EciesKeyPair::generate(profile, rng)
}

#[derive(Clone, PartialEq, Eq)]
pub struct SharedSecret {
    profile: EciesProfile,
    secret: [u8; SHARED_SECRET_LEN],
}

impl SharedSecret {
    pub fn profile(&self) -> EciesProfile {
        self.profile
    }

    pub fn as_bytes(&self) -> &[u8; SHARED_SECRET_LEN] {
        &self.secret
    }
}

impl fmt::Debug for SharedSecret {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SharedSecret").field("profile", &self.profile).finish_non_exhaustive()
    }
}

/// ECDH. The result is the x-coordinate (Profile B) or u-coordinate (Profile A)
/// of `private_key * peer_public_key`.
pub fn key_agreement(
    profile: EciesProfile,
    private_key: &[u8],
    peer_public_key: &[u8],
) -> Result<SharedSecret, EciesError> {
    check_len("private key", private_key, PRIVATE_KEY_LEN)?;
    check_len("peer public key", peer_public_key, profile.public_key_len())?;
    let secret = match profile {
        EciesProfile::ProfileA => {
            let k: [u8; 32] = private_key.try_into().expect("length checked");
            let u: [u8; 32] = peer_public_key.try_into().expect("length checked");
            let out = x25519_dalek::x25519(k, u);
            if bool::from(out.ct_eq(&[0u8; 32])) {
                return Err(EciesError::DegenerateKey);
            }
            out
        }
        EciesProfile::ProfileB => {
            let secret = p256_secret(private_key)?;
            let peer = p256_public(peer_public_key)?;
            let shared = p256::ecdh::diffie_hellman(secret.to_nonzero_scalar(), peer.as_affine());
            let mut out = [0u8; SHARED_SECRET_LEN];
            out.copy_from_slice(shared.raw_secret_bytes());
            out
        }
    };
    Ok(SharedSecret { profile, secret })
}

/// ANSI X9.63 KDF with SHA-256: `H(secret || counter_be32 || shared_info)` for
/// counter = 1, 2, ..., truncated to `out_len`.
pub fn kdf(shared: &SharedSecret, ephemeral_public_key: &[u8], out_len: usize) -> Vec<u8> {
    let blocks = out_len.div_ceil(32) as u32;
    let mut out = Vec::with_capacity(blocks as usize * 32);
    for counter in 1..=blocks {
        let mut h = Sha256::new();
        h.update(shared.secret);
        h.update(counter.to_be_bytes());
        h.update(ephemeral_public_key);
        out.extend_from_slice(&h.finalize());
    }
    out.truncate(out_len);
    out
}

#[derive(Clone, PartialEq, Eq)]
pub struct DerivedKeys {
    pub enc_key: [u8; ENC_KEY_LEN],
    pub initial_counter_block: [u8; ICB_LEN],
    pub mac_key: [u8; MAC_KEY_LEN],
}

impl fmt::Debug for DerivedKeys {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("DerivedKeys { .. }")
    }
}

pub fn derive_keys(shared: &SharedSecret, ephemeral_public_key: &[u8]) -> DerivedKeys {
    let okm = kdf(shared, ephemeral_public_key, KDF_OUTPUT_LEN);
    let mut keys =
        DerivedKeys { enc_key: [0; ENC_KEY_LEN], initial_counter_block: [0; ICB_LEN], mac_key: [0; MAC_KEY_LEN] };
    keys.enc_key.copy_from_slice(&okm[..ENC_KEY_LEN]);
    keys.initial_counter_block.copy_from_slice(&okm[ENC_KEY_LEN..ENC_KEY_LEN + ICB_LEN]);
    keys.mac_key.copy_from_slice(&okm[ENC_KEY_LEN + ICB_LEN..]);
    keys
}

fn apply_ctr(keys: &DerivedKeys, data: &mut [u8]) {
    let mut cipher = Aes128Ctr::new(&keys.enc_key.into(), &keys.initial_counter_block.into());
    cipher.apply_keystream(data);
}

fn mac_tag(keys: &DerivedKeys, ciphertext: &[u8]) -> [u8; MAC_LEN] {
    let mut mac = HmacSha256::new_from_slice(&keys.mac_key).expect("HMAC accepts any key length");
    mac.update(ciphertext);
    let full = mac.finalize().into_bytes();
    let mut tag = [0u8; MAC_LEN];
    tag.copy_from_slice(&full[..MAC_LEN]);
    tag
}

/// The ECIES scheme output before it is placed in a SUCI.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EciesEnvelope {
    pub ephemeral_public_key: Vec<u8>,
    pub ciphertext: Vec<u8>,
    pub mac: Vec<u8>,
}

/// Conceals `plaintext` under a fresh ephemeral key drawn from `rng`.
pub fn conceal<R: RngCore + CryptoRng>(
    profile: EciesProfile,
    hn_public_key: &[u8],
    plaintext: &[u8],
    rng: &mut R,
) -> Result<EciesEnvelope, EciesError> {
    let ephemeral = EciesKeyPair::generate(profile, rng);
    conceal_with_ephemeral(profile, hn_public_key, plaintext, &ephemeral)
}

/// Conceals with a caller-supplied ephemeral key pair. Reusing an ephemeral
/// key links concealments; only tests and golden vectors should call this.
pub fn conceal_with_ephemeral(
    profile: EciesProfile,
    hn_public_key: &[u8],
    plaintext: &[u8],
    ephemeral: &EciesKeyPair,
) -> Result<EciesEnvelope, EciesError> {
    if ephemeral.profile != profile {
        return Err(EciesError::ProfileMismatch { expected: profile, found: ephemeral.profile });
    }
    if plaintext.is_empty() {
        return Err(EciesError::EmptyPlaintext);
    }
    let shared = key_agreement(profile, &ephemeral.private_key, hn_public_key)?;
    let keys = derive_keys(&shared, &ephemeral.public_key);
    let mut ciphertext = plaintext.to_vec();
    apply_ctr(&keys, &mut ciphertext);
    let mac = mac_tag(&keys, &ciphertext).to_vec();
    Ok(EciesEnvelope { ephemeral_public_key: ephemeral.public_key.clone(), ciphertext, mac })
}

/// Network-side inverse of [`conceal`]. The MAC is checked before any
/// decryption happens.
pub fn deconceal(
    profile: EciesProfile,
    hn_private_key: &[u8],
    ephemeral_public_key: &[u8],
    ciphertext: &[u8],
    mac: &[u8],
) -> Result<Vec<u8>, EciesError> {
    check_len("MAC", mac, MAC_LEN)?;
    let shared = key_agreement(profile, hn_private_key, ephemeral_public_key)?;
    let keys = derive_keys(&shared, ephemeral_public_key);
    let expected = mac_tag(&keys, ciphertext);
    if !bool::from(expected.ct_eq(mac)) {
        return Err(EciesError::IntegrityFailure);
    }
    let mut plaintext = ciphertext.to_vec();
    apply_ctr(&keys, &mut plaintext);
    Ok(plaintext)
}

// ------------------------------------------------------------------ files

/// One key per line: `profile-a:<hex>` or `profile-b:<hex>`.
pub fn format_key_line(profile: EciesProfile, key: &[u8]) -> String {
    format!("{profile}:{}", hex::encode(key))
}

/// Reads the first key line of a key file. Blank lines and `#` comments are skipped.
pub fn parse_key_file(text: &str) -> Result<(EciesProfile, Vec<u8>), EciesError> {
    let line = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .ok_or_else(|| EciesError::MalformedKeyFile("no key line".into()))?;
    let (profile, hex_key) =
        line.split_once(':').ok_or_else(|| EciesError::MalformedKeyFile(format!("missing ':' in {line:?}")))?;
    let profile: EciesProfile = profile.parse()?;
    let key = hex::decode(hex_key.trim()).map_err(|e| EciesError::MalformedKeyFile(e.to_string()))?;
    Ok((profile, key))
}

/// Parses a private-key file into a full key pair.
pub fn load_private_key(text: &str) -> Result<EciesKeyPair, EciesError> {
    let (profile, key) = parse_key_file(text)?;
    EciesKeyPair::from_private(profile, &key)
}

/// Parses a public-key file, checking the length against the profile.
pub fn load_public_key(text: &str) -> Result<(EciesProfile, Vec<u8>), EciesError> {
    let (profile, key) = parse_key_file(text)?;
    check_len("public key", &key, profile.public_key_len())?;
    Ok((profile, key))
}

/// Reads `name = hex` records; `#` starts a comment line.
pub fn parse_vector_file(text: &str) -> Result<BTreeMap<String, Vec<u8>>, EciesError> {
    let mut out = BTreeMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |why: String| EciesError::MalformedKeyFile(format!("line {}: {why}", lineno + 1));
        let (name, value) = line.split_once('=').ok_or_else(|| bad("expected 'name = hex'".into()))?;
        let bytes = hex::decode(value.trim()).map_err(|e| bad(e.to_string()))?;
        out.insert(name.trim().to_string(), bytes);
    }
    Ok(out)
}

//! 5G subscriber-identity privacy toolkit.
//!
//! * [`identifiers`]: PLMN / SUPI / SUCI models, TBCD packing, text codecs
//! * [`ecies`]: Profile A (X25519) and Profile B (secp256r1) concealment
//! * [`protection`]: policy-driven SUPI concealment and the network-side de-concealing function
//! * [`toy_curve`]: small-field elliptic-curve arithmetic and brute-force discrete logs
//! * [`netsim`]: deterministic registration simulator with an IMSI-catcher adversary
//! * [`cli`]: the `suci` command-line front end

pub mod cli;
pub mod ecies;
pub mod identifiers;
pub mod netsim;
pub mod protection;
pub mod toy_curve;

pub use ecies::{EciesError, EciesKeyPair, EciesProfile, HomeNetworkKeyPair};
pub use identifiers::{parse_suci, parse_supi, serialize_suci, serialize_supi, Plmn, ProtectionScheme, Suci, Supi};
pub use protection::{conceal_supi, deconceal_suci, KeyStore, OperatorPolicy};

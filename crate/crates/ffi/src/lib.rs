//! C ABI over `suci-core`.
//!
//! Every fallible function returns a [`SuciStatus`] and writes its result
//! through an out-pointer. Strings handed out are owned by the caller and must
//! be released with [`suci_string_free`]; key pairs with [`suci_keypair_free`].
//! After a non-OK status, [`suci_last_error_message`] describes the failure
//! for the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use rand::rngs::OsRng;
use suci_core::ecies::{EciesError, EciesKeyPair, EciesProfile};
use suci_core::identifiers::{parse_suci, parse_supi, serialize_suci, IdentifierError, RoutingIndicator};
use suci_core::netsim::{load_scenario, run_registration, ScenarioError};
use suci_core::protection::{conceal_supi, deconceal_suci, KeyStore, OperatorPolicy, ProtectionError};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuciStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    InvalidSupi = 4,
    InvalidSuci = 5,
    InvalidKey = 6,
    IntegrityFailure = 7,
    UnknownKeyId = 8,
    Scenario = 9,
    Io = 10,
    Internal = 99,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuciScheme {
    Null = 0,
    ProfileA = 1,
    ProfileB = 2,
}

/// Opaque home-network key pair.
pub struct SuciKeyPair {
    inner: EciesKeyPair,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Failure(SuciStatus, String);

fn fail(status: SuciStatus, msg: impl ToString) -> Failure {
    Failure(status, msg.to_string())
}

impl From<EciesError> for Failure {
    fn from(e: EciesError) -> Self {
        let status = match e {
            EciesError::IntegrityFailure => SuciStatus::IntegrityFailure,
            _ => SuciStatus::InvalidKey,
        };
        fail(status, e)
    }
}

impl From<ProtectionError> for Failure {
    fn from(e: ProtectionError) -> Self {
        match e {
            ProtectionError::Ecies(inner) => inner.into(),
            ProtectionError::UnknownKeyId(_) => fail(SuciStatus::UnknownKeyId, e),
            ProtectionError::Identifier(_) => fail(SuciStatus::InvalidSuci, e),
            _ => fail(SuciStatus::InvalidArgument, e),
        }
    }
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = c);
}

/// Runs `body`, converting failures and panics into a status plus last-error message.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> SuciStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_last_error("");
            SuciStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            SuciStatus::Internal
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(fail(SuciStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| fail(SuciStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn put_string(out: *mut *mut c_char, value: String) -> Result<(), Failure> {
    let c = CString::new(value).map_err(|e| fail(SuciStatus::Internal, e))?;
    *out = c.into_raw();
    Ok(())
}

fn check_out<T>(out: *mut T) -> Result<(), Failure> {
    if out.is_null() {
        Err(fail(SuciStatus::NullPointer, "output pointer is null"))
    } else {
        Ok(())
    }
}

fn profile_of(scheme: SuciScheme) -> Result<EciesProfile, Failure> {
    match scheme {
        SuciScheme::ProfileA => Ok(EciesProfile::ProfileA),
        SuciScheme::ProfileB => Ok(EciesProfile::ProfileB),
        SuciScheme::Null => Err(fail(SuciStatus::InvalidArgument, "the null scheme has no keys")),
    }
}

/// Generates a fresh key pair for `scheme` (ProfileA or ProfileB).
///
/// # Safety
/// `out` must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn suci_keypair_generate(scheme: SuciScheme, out: *mut *mut SuciKeyPair) -> SuciStatus {
    guard(|| {
        check_out(out)?;
        let inner = EciesKeyPair::generate(profile_of(scheme)?, &mut OsRng);
        *out = Box::into_raw(Box::new(SuciKeyPair { inner }));
        Ok(())
    })
}

/// Builds a key pair from a 32-octet private key given as hex.
///
/// # Safety
/// `private_hex` must be a NUL-terminated string; `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn suci_keypair_from_private_hex(
    scheme: SuciScheme,
    private_hex: *const c_char,
    out: *mut *mut SuciKeyPair,
) -> SuciStatus {
    guard(|| {
        check_out(out)?;
        let text = str_arg(private_hex, "private_hex")?;
        let bytes = hex::decode(text.trim()).map_err(|e| fail(SuciStatus::InvalidKey, e))?;
        let inner = EciesKeyPair::from_private(profile_of(scheme)?, &bytes)?;
        *out = Box::into_raw(Box::new(SuciKeyPair { inner }));
        Ok(())
    })
}

/// Writes the public key as lowercase hex.
///
/// # Safety
/// `keypair` must come from this library; `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn suci_keypair_public_hex(keypair: *const SuciKeyPair, out: *mut *mut c_char) -> SuciStatus {
    guard(|| {
        check_out(out)?;
        let kp = keypair.as_ref().ok_or_else(|| fail(SuciStatus::NullPointer, "keypair is null"))?;
        put_string(out, hex::encode(kp.inner.public_key()))
    })
}

/// # Safety
/// `keypair` must come from this library and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn suci_keypair_free(keypair: *mut SuciKeyPair) {
    if !keypair.is_null() {
        drop(Box::from_raw(keypair));
    }
}

/// Conceals `supi` ("<mcc><mnc>-<msin>") and writes the SUCI text.
///
/// `home_public_hex` is required for the ECIES schemes and ignored for
/// `Null`. `routing_indicator` may be null for the default "0000".
///
/// # Safety
/// String arguments must be NUL-terminated or null where allowed; `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn suci_conceal(
    supi: *const c_char,
    scheme: SuciScheme,
    home_public_hex: *const c_char,
    key_id: u8,
    routing_indicator: *const c_char,
    out: *mut *mut c_char,
) -> SuciStatus {
    guard(|| {
        check_out(out)?;
        let supi = parse_supi(str_arg(supi, "supi")?).map_err(|e| fail(SuciStatus::InvalidSupi, e))?;
        let mut policy = match scheme {
            SuciScheme::Null => OperatorPolicy::null(),
            _ => {
                let key = hex::decode(str_arg(home_public_hex, "home_public_hex")?.trim())
                    .map_err(|e| fail(SuciStatus::InvalidKey, e))?;
                OperatorPolicy::ecies(profile_of(scheme)?, key, key_id)
            }
        };
        if !routing_indicator.is_null() {
            policy.routing_indicator = RoutingIndicator::new(str_arg(routing_indicator, "routing_indicator")?)
                .map_err(|e| fail(SuciStatus::InvalidArgument, e))?;
        }
        let concealed = conceal_supi(&supi, &policy, &mut OsRng)?;
        put_string(out, serialize_suci(&concealed.suci))
    })
}

/// Recovers the SUPI text from `suci`. `keypair` is installed under `key_id`
/// and may be null for null-scheme SUCIs.
///
/// # Safety
/// `suci` must be NUL-terminated; `keypair` null or from this library; `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn suci_deconceal(
    suci: *const c_char,
    keypair: *const SuciKeyPair,
    key_id: u8,
    out: *mut *mut c_char,
) -> SuciStatus {
    guard(|| {
        check_out(out)?;
        let suci = parse_suci(str_arg(suci, "suci")?).map_err(|e| match e {
            IdentifierError::UnknownScheme(_) => fail(SuciStatus::InvalidArgument, e),
            _ => fail(SuciStatus::InvalidSuci, e),
        })?;
        let mut store = KeyStore::new();
        if let Some(kp) = keypair.as_ref() {
            store.insert(key_id, kp.inner.clone());
        }
        let supi = deconceal_suci(&suci, &store)?;
        put_string(out, supi.to_string())
    })
}

/// Runs a scenario file, optionally writing the JSONL trace, and returns the summary text.
///
/// # Safety
/// `scenario_path` must be NUL-terminated; `trace_out_path` NUL-terminated or null;
/// `summary_out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn suci_sim_run(
    scenario_path: *const c_char,
    trace_out_path: *const c_char,
    summary_out: *mut *mut c_char,
) -> SuciStatus {
    guard(|| {
        check_out(summary_out)?;
        let path = str_arg(scenario_path, "scenario_path")?;
        let scenario = load_scenario(Path::new(path)).map_err(|e| match e {
            ScenarioError::Io { .. } => fail(SuciStatus::Io, e),
            _ => fail(SuciStatus::Scenario, e),
        })?;
        let trace = run_registration(&scenario).map_err(|e| fail(SuciStatus::Scenario, e))?;
        if !trace_out_path.is_null() {
            let out_path = str_arg(trace_out_path, "trace_out_path")?;
            std::fs::write(out_path, trace.export()).map_err(|e| fail(SuciStatus::Io, format!("{out_path}: {e}")))?;
        }
        put_string(summary_out, trace.summary())
    })
}

/// # Safety
/// `s` must be a string returned by this library and not used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn suci_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread, or "" after a success.
/// The pointer stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn suci_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Library version; a static string that must not be freed.
#[no_mangle]
pub extern "C" fn suci_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr().cast()
}

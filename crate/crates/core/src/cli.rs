//! The `suci` command-line tool.
//!
//! Exit codes: 0 success, 1 domain error (bad key, integrity failure, I/O),
//! 2 usage error (bad flags, malformed SUPI/SUCI, policy or scenario files).
//! Artifacts go to stdout; every failure is a single `error:` line on stderr.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::rngs::OsRng;

use crate::ecies::{self, EciesKeyPair, EciesProfile};
use crate::identifiers::{parse_suci, parse_supi, serialize_suci, IdentifierError, ProtectionScheme};
use crate::netsim::{self, ScenarioError};
use crate::protection::{conceal_supi, conceal_supi_with_ephemeral, deconceal_suci, KeyStore, PolicyConfig};
use crate::toy_curve::{ToyCurve, ToyPoint};

#[derive(Debug, Parser)]
#[command(name = "suci", version, about = "SUCI concealment toolkit and registration simulator")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a home-network key pair as <OUT>.pub and <OUT>.priv.
    Keygen {
        #[arg(long, default_value = "profile-a")]
        profile: EciesProfile,
        #[arg(long)]
        out: PathBuf,
    },
    /// Conceal a SUPI ("<mcc><mnc>-<msin>") under a UE policy file.
    Conceal {
        supi: String,
        #[arg(long)]
        policy: PathBuf,
        /// Use this ephemeral private key (hex) instead of a fresh one. Test use only.
        #[arg(long, hide = true)]
        insecure_fixed_ephemeral_key: Option<String>,
    },
    /// Recover the SUPI from a SUCI with a home-network private key file.
    Deconceal {
        suci: String,
        #[arg(long)]
        key: PathBuf,
        /// Key identifier the private key is installed under.
        #[arg(long, default_value_t = 0)]
        key_id: u8,
    },
    /// Toy elliptic-curve demonstrations over a small prime field.
    Curve {
        #[command(subcommand)]
        command: CurveCommand,
    },
    /// Run a registration scenario and print a summary.
    Sim {
        scenario: PathBuf,
        /// Write the JSONL event trace here.
        #[arg(long)]
        trace_out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct CurveParams {
    #[arg(long, default_value_t = 89)]
    p: u64,
    #[arg(long, default_value_t = -1, allow_negative_numbers = true)]
    a: i64,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    b: i64,
}

#[derive(Debug, Subcommand)]
enum CurveCommand {
    /// Print every affine point as CSV.
    Points {
        #[command(flatten)]
        params: CurveParams,
    },
    /// Print k*G.
    Mul {
        #[command(flatten)]
        params: CurveParams,
        /// Base point as "x,y".
        #[arg(long)]
        g: String,
        #[arg(long)]
        k: u64,
    },
    /// Find k with P = k*G by exhaustive search.
    Ecdlp {
        #[command(flatten)]
        params: CurveParams,
        #[arg(long)]
        g: String,
        /// Target point as "x,y".
        #[arg(long = "target")]
        target: String,
        /// Largest k to try; defaults to the order of G.
        #[arg(long)]
        bound: Option<u64>,
    },
}

#[derive(Debug)]
enum Failure {
    Domain(String),
    Usage(String),
}

fn domain(e: impl std::fmt::Display) -> Failure {
    Failure::Domain(e.to_string())
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str, private: bool) -> Result<(), Failure> {
    let mut opts = fs::OpenOptions::new();
    opts.write(true).create(true).truncate(true);
    #[cfg(unix)]
    if private {
        use std::os::unix::fs::OpenOptionsExt;
        opts.mode(0o600);
    }
    #[cfg(not(unix))]
    let _ = private;
    opts.open(path)
        .and_then(|mut f| f.write_all(contents.as_bytes()))
        .map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn keygen(profile: EciesProfile, out_prefix: &Path, out: &mut dyn Write) -> Result<(), Failure> {
    let pair = ecies::generate_keypair(profile, &mut OsRng);
    write_file(&with_suffix(out_prefix, ".priv"), &(ecies::format_key_line(profile, pair.private_key()) + "\n"), true)?;
    write_file(&with_suffix(out_prefix, ".pub"), &(ecies::format_key_line(profile, pair.public_key()) + "\n"), false)?;
    writeln!(out, "{}", hex::encode(pair.public_key())).map_err(domain)
}

fn conceal(
    supi: &str,
    policy_path: &Path,
    fixed_ephemeral: Option<&str>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), Failure> {
    let supi = parse_supi(supi).map_err(|e| usage(format!("invalid SUPI: {e}")))?;
    let cfg =
        PolicyConfig::parse(&read_file(policy_path)?).map_err(|e| usage(format!("{}: {e}", policy_path.display())))?;

    let mut home_key = None;
    if let (ProtectionScheme::Ecies(_), Some(rel)) = (cfg.scheme, &cfg.key_file) {
        let path = policy_path.parent().unwrap_or(Path::new(".")).join(rel);
        match fs::read_to_string(&path) {
            Ok(text) => {
                home_key = Some(ecies::load_public_key(&text).map_err(|e| domain(format!("{}: {e}", path.display())))?)
            }
            Err(e) if !cfg.null_fallback => return Err(domain(format!("{}: {e}", path.display()))),
            Err(_) => {}
        }
    }
    let policy = cfg.to_policy(home_key).map_err(domain)?;

    let concealed = match (fixed_ephemeral, policy.effective_scheme().0) {
        (Some(hex_key), ProtectionScheme::Ecies(profile)) => {
            let key = hex::decode(hex_key.trim()).map_err(|e| usage(format!("ephemeral key: {e}")))?;
            let pair = EciesKeyPair::from_private(profile, &key).map_err(domain)?;
            conceal_supi_with_ephemeral(&supi, &policy, &pair)
        }
        _ => conceal_supi(&supi, &policy, &mut OsRng),
    }
    .map_err(domain)?;

    if let Some(reason) = concealed.downgrade {
        let _ = writeln!(err, "warning: null scheme in use: {reason}");
    }
    writeln!(out, "{}", serialize_suci(&concealed.suci)).map_err(domain)
}

fn deconceal(suci: &str, key_path: &Path, key_id: u8, out: &mut dyn Write) -> Result<(), Failure> {
    let suci = parse_suci(suci).map_err(|e| match e {
        IdentifierError::UnknownScheme(_) => domain(e),
        _ => usage(format!("invalid SUCI: {e}")),
    })?;
    let mut store = KeyStore::new();
    if suci.scheme() != ProtectionScheme::Null {
        let pair = ecies::load_private_key(&read_file(key_path)?)
            .map_err(|e| domain(format!("{}: {e}", key_path.display())))?;
        store.insert(key_id, pair);
    }
    let supi = deconceal_suci(&suci, &store).map_err(domain)?;
    writeln!(out, "{supi}").map_err(domain)
}

fn parse_point(curve: &ToyCurve, text: &str) -> Result<ToyPoint, Failure> {
    let bad = || usage(format!("point {text:?} must be \"x,y\""));
    let (x, y) = text.split_once(',').ok_or_else(bad)?;
    let x = x.trim().parse().map_err(|_| bad())?;
    let y = y.trim().parse().map_err(|_| bad())?;
    curve.point(x, y).map_err(domain)
}

fn format_point(pt: &ToyPoint) -> String {
    match pt {
        ToyPoint::Infinity => "infinity".to_string(),
        ToyPoint::Affine { x, y } => format!("{x},{y}"),
    }
}

fn curve(cmd: &CurveCommand, out: &mut dyn Write) -> Result<(), Failure> {
    let build = |p: &CurveParams| ToyCurve::new(p.p, p.a, p.b).map_err(domain);
    match cmd {
        CurveCommand::Points { params } => {
            let csv = build(params)?.points_csv().map_err(domain)?;
            out.write_all(csv.as_bytes()).map_err(domain)
        }
        CurveCommand::Mul { params, g, k } => {
            let c = build(params)?;
            let g = parse_point(&c, g)?;
            writeln!(out, "{}", format_point(&c.scalar_mul(*k, &g))).map_err(domain)
        }
        CurveCommand::Ecdlp { params, g, target, bound } => {
            let c = build(params)?;
            let g = parse_point(&c, g)?;
            let target = parse_point(&c, target)?;
            let bound = bound.unwrap_or_else(|| c.order_of(&g));
            match c.ecdlp_brute_force(&g, &target, bound) {
                Some(k) => writeln!(out, "{k}").map_err(domain),
                None => Err(domain(format!("no k <= {bound} with k*G = {}", format_point(&target)))),
            }
        }
    }
}

fn sim(scenario: &Path, trace_out: Option<&Path>, out: &mut dyn Write) -> Result<(), Failure> {
    let scenario = netsim::load_scenario(scenario).map_err(|e| match e {
        ScenarioError::Io { .. } => domain(e),
        _ => usage(format!("{}: {e}", scenario.display())),
    })?;
    let trace = netsim::run_registration(&scenario).map_err(usage)?;
    if let Some(path) = trace_out {
        write_file(path, &trace.export(), false)?;
    }
    out.write_all(trace.summary().as_bytes()).map_err(domain)
}

/// Runs the tool with `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = write!(out, "{e}");
            return 0;
        }
        Err(e) => {
            let rendered = e.to_string();
            let first = rendered.lines().find(|l| !l.trim().is_empty()).unwrap_or("usage error");
            let first = first.strip_prefix("error: ").unwrap_or(first);
            let _ = writeln!(err, "error: {first}");
            return 2;
        }
    };
    let result = match &cli.command {
        Command::Keygen { profile, out: prefix } => keygen(*profile, prefix, out),
        Command::Conceal { supi, policy, insecure_fixed_ephemeral_key } => {
            conceal(supi, policy, insecure_fixed_ephemeral_key.as_deref(), out, err)
        }
        Command::Deconceal { suci, key, key_id } => deconceal(suci, key, *key_id, out),
        Command::Curve { command } => curve(command, out),
        Command::Sim { scenario, trace_out } => sim(scenario, trace_out.as_deref(), out),
    };
    match result {
        Ok(()) => 0,
        Err(Failure::Domain(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

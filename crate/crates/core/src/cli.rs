//! The `pesto` command line.
//!
//! Exit codes: 0 success or valid signature, 1 verification failure or no
//! solution, 2 usage or input error, 3 budget or internal error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::attacks::{self, AttackReport, ENUMERATION_BUDGET};
use crate::codec;
use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::scheme::{self, hash_to_field, key_counts, mult_cost, PestoParams, PublicKey, SecretKey, Signature};
use crate::solvedeg::{self, SolveConfig};
use crate::toy;

#[derive(Parser, Debug)]
#[command(name = "pesto", version, about = "Twisted oil-and-vinegar keys, signatures, encryption and attacks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a key pair into <out-dir>/pk.bin and <out-dir>/sk.bin.
    Keygen {
        #[arg(long)]
        params: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Draw A1 with a zero upper-right t x (m-t) block.
        #[arg(long)]
        reduced_a1: bool,
        #[arg(long)]
        out_dir: PathBuf,
        /// Store 6-bit (ceil(log2 q)-bit) coefficients.
        #[arg(long)]
        packed: bool,
        /// Accept s = 0 (insecure; for attack experiments).
        #[arg(long)]
        allow_s0: bool,
    },
    /// Sign a digest vector file.
    Sign {
        #[arg(long)]
        sk: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Treat the input as a raw message and hash it to GF(q)^m.
        #[arg(long)]
        hash: bool,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Verify a signature; exit 1 when it does not verify.
    Verify {
        #[arg(long)]
        pk: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        sig: PathBuf,
        #[arg(long)]
        hash: bool,
    },
    /// Encrypt a plaintext vector file.
    Encrypt {
        #[arg(long)]
        pk: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Decrypt a ciphertext; writes every preimage as consecutive vector records.
    Decrypt {
        #[arg(long)]
        sk: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Coefficient counts for both keys.
    Keysize {
        #[arg(long)]
        params: String,
        #[arg(long)]
        reduced: bool,
        /// Also print packed payload sizes in bytes.
        #[arg(long)]
        packed: bool,
    },
    /// Field multiplications for verification and signing.
    Cost {
        #[arg(long)]
        params: String,
    },
    /// Run an attack against a public key.
    Attack {
        #[command(subcommand)]
        attack: AttackCommand,
    },
    /// Solving-degree probe; prints CSV.
    Solvedeg {
        #[arg(long)]
        params: String,
        #[arg(long, default_value_t = 5)]
        trials: u64,
        /// First seed; trials use consecutive seeds.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        d_max: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the fixed GF(5) example end to end.
    Toy {
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Subcommand, Debug)]
enum AttackCommand {
    /// Isolate the quadratic components and their common linear structures.
    IsoQuad {
        #[arg(long)]
        pk: PathBuf,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Linear structures of each isolated component.
    LinStruct {
        #[arg(long)]
        pk: PathBuf,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Fit bilinear input/output relations and invert a target.
    Linearize {
        #[arg(long)]
        pk: PathBuf,
        /// Target vector file; default encrypts a random point.
        #[arg(long)]
        target: Option<PathBuf>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Invert a target given the input transformation taken from a secret key.
    KnownA2 {
        #[arg(long)]
        pk: PathBuf,
        /// Secret key file providing A2.
        #[arg(long)]
        sk: PathBuf,
        #[arg(long)]
        target: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NoSolutionFound(_) | Error::SigningFailed(_) | Error::IsolationAmbiguous(_) => 1,
        Error::BudgetExceeded { .. }
        | Error::RngExhausted(_)
        | Error::InsufficientSamples(_)
        | Error::SpecMismatch
        | Error::DivisionByZero => 3,
        _ => 2,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let text = e.to_string();
            let line = text.lines().next().unwrap_or("usage error");
            let _ = writeln!(err, "{line}");
            return 2;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn read(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn load_pk(path: &Path) -> Result<PublicKey> {
    codec::decode_public(&read(path)?)
}

fn load_sk(path: &Path) -> Result<SecretKey> {
    codec::decode_secret(&read(path)?)
}

fn read_digest(field: &Field, m: usize, path: &Path, hash: bool) -> Result<Vec<Elem>> {
    let bytes = read(path)?;
    if hash {
        Ok(hash_to_field(field, &bytes, m))
    } else {
        codec::decode_vector(field, &bytes)
    }
}

fn rng_for(seed: Option<u64>) -> ChaCha20Rng {
    seed.map_or_else(ChaCha20Rng::from_entropy, ChaCha20Rng::seed_from_u64)
}

fn line(out: &mut dyn Write, text: impl std::fmt::Display) -> Result<()> {
    writeln!(out, "{text}").map_err(Error::from)
}

fn emit_report(out: &mut dyn Write, report: &AttackReport, json: Option<&Path>) -> Result<bool> {
    write!(out, "{}", report.to_text())?;
    if let Some(path) = json {
        write_file(path, report.to_json().as_bytes())?;
    }
    Ok(report.success)
}

fn target_for(pk: &PublicKey, path: Option<&Path>, seed: u64, out: &mut dyn Write) -> Result<Vec<Elem>> {
    let f = pk.params().field();
    match path {
        Some(p) => codec::decode_vector(f, &read(p)?),
        None => {
            let z = f.random_vec(pk.params().n(), &mut ChaCha20Rng::seed_from_u64(seed));
            let c = pk.encrypt(&z)?;
            line(out, format_args!("target: {}", join(&c)))?;
            Ok(c)
        }
    }
}

fn join(v: &[Elem]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<bool> {
    match command {
        Command::Keygen { params, seed, reduced_a1, out_dir, packed, allow_s0 } => {
            let params = if allow_s0 { PestoParams::parse_relaxed(&params)? } else { PestoParams::parse(&params)? };
            for w in params.warnings() {
                writeln!(err, "warning: {w}")?;
            }
            let kp = scheme::keygen(&params, &mut ChaCha20Rng::seed_from_u64(seed), reduced_a1)?;
            fs::create_dir_all(&out_dir)?;
            let pk_path = out_dir.join("pk.bin");
            let sk_path = out_dir.join("sk.bin");
            let pk_bytes = codec::encode_public(&kp.public, packed);
            let sk_bytes = codec::encode_secret(&kp.secret, packed);
            write_file(&pk_path, &pk_bytes)?;
            write_file(&sk_path, &sk_bytes)?;
            line(out, format_args!("params: {params}"))?;
            line(out, format_args!("seed: {seed} (ChaCha20, seed_from_u64)"))?;
            line(out, format_args!("quadratic components: {} (t = {})", kp.report.quadratic_dim, params.t()))?;
            line(out, format_args!("pk: {} ({} bytes)", pk_path.display(), pk_bytes.len()))?;
            line(out, format_args!("sk: {} ({} bytes)", sk_path.display(), sk_bytes.len()))?;
            Ok(true)
        }
        Command::Sign { sk, input, out: sig_path, hash, seed } => {
            let sk = load_sk(&sk)?;
            let f = sk.params().field().clone();
            let w = read_digest(&f, sk.params().m(), &input, hash)?;
            let (sig, draws) = sk.sign_with_stats(&w, &mut rng_for(seed))?;
            write_file(&sig_path, &codec::encode_vector(&f, &sig.0))?;
            line(out, format_args!("signed after {draws} vinegar draw(s)"))?;
            Ok(true)
        }
        Command::Verify { pk, input, sig, hash } => {
            let pk = load_pk(&pk)?;
            let f = pk.params().field().clone();
            let w = read_digest(&f, pk.params().m(), &input, hash)?;
            let sig = Signature(codec::decode_vector(&f, &read(&sig)?)?);
            let ok = sig.0.len() == pk.params().n() && pk.verify(&w, &sig);
            line(out, if ok { "valid" } else { "invalid" })?;
            Ok(ok)
        }
        Command::Encrypt { pk, input, out: path } => {
            let pk = load_pk(&pk)?;
            let f = pk.params().field().clone();
            let z = codec::decode_vector(&f, &read(&input)?)?;
            write_file(&path, &codec::encode_vector(&f, &pk.encrypt(&z)?))?;
            Ok(true)
        }
        Command::Decrypt { sk, input, out: path } => {
            let sk = load_sk(&sk)?;
            let f = sk.params().field().clone();
            let c = codec::decode_vector(&f, &read(&input)?)?;
            let preimages = sk.decrypt(&c)?;
            let bytes: Vec<u8> = preimages.iter().flat_map(|z| codec::encode_vector(&f, z)).collect();
            write_file(&path, &bytes)?;
            line(out, format_args!("preimages: {}", preimages.len()))?;
            if preimages.is_empty() {
                return Err(Error::NoSolutionFound(4));
            }
            Ok(true)
        }
        Command::Keysize { params, reduced, packed } => {
            let params = PestoParams::parse_relaxed(&params)?;
            let counts = key_counts(params.shape(), reduced);
            line(out, format_args!("sk={} pk={}", counts.secret, counts.public))?;
            if packed {
                let (f, shape) = (params.field(), params.shape());
                line(
                    out,
                    format_args!(
                        "packed bytes: sk={} pk={}",
                        codec::secret_payload_len(f, shape, reduced, true),
                        codec::public_payload_len(f, shape, reduced, true)
                    ),
                )?;
            }
            Ok(true)
        }
        Command::Cost { params } => {
            let params = PestoParams::parse_relaxed(&params)?;
            let c = mult_cost(params.shape());
            line(out, format_args!("verify={} sign={}", c.verify, c.sign))?;
            Ok(true)
        }
        Command::Attack { attack } => match attack {
            AttackCommand::IsoQuad { pk, json } => {
                emit_report(out, &attacks::iso_quad_report(&load_pk(&pk)?)?, json.as_deref())
            }
            AttackCommand::LinStruct { pk, json } => {
                emit_report(out, &attacks::lin_struct_report(&load_pk(&pk)?)?, json.as_deref())
            }
            AttackCommand::Linearize { pk, target, samples, seed, json } => {
                let pk = load_pk(&pk)?;
                let c = target_for(&pk, target.as_deref(), seed, out)?;
                let mut rng = ChaCha20Rng::seed_from_u64(seed.wrapping_add(1));
                let report = attacks::linearization_attack(&pk, samples, &c, &mut rng)?;
                emit_report(out, &report, json.as_deref())
            }
            AttackCommand::KnownA2 { pk, sk, target, seed } => {
                let pk = load_pk(&pk)?;
                let sk = load_sk(&sk)?;
                if sk.params() != pk.params() {
                    return Err(Error::ParamSanity("key files have different parameters".into()));
                }
                let c = target_for(&pk, target.as_deref(), seed, out)?;
                match attacks::forge_with_known_a2(&pk, sk.a2(), &c, ENUMERATION_BUDGET)? {
                    Some(z) => {
                        line(out, format_args!("preimage: {}", join(&z)))?;
                        Ok(true)
                    }
                    None => Err(Error::NoSolutionFound(2)),
                }
            }
        },
        Command::Solvedeg { params, trials, seed, d_max, out: csv } => {
            let params = PestoParams::parse(&params)?;
            let mut cfg = SolveConfig::default();
            if let Some(d) = d_max {
                cfg.d_max = d;
            }
            let mut text = format!("{}\n", solvedeg::CSV_HEADER);
            line(out, solvedeg::CSV_HEADER)?;
            for s in seed..seed + trials {
                let probe = solvedeg::probe(&params, s, &cfg)?;
                let row = probe.row.to_csv();
                line(out, &row)?;
                text += &row;
                text.push('\n');
                if probe.preimages.len() != probe.estimate.solutions.len() {
                    writeln!(err, "warning: seed {s}: a recovered solution did not re-verify")?;
                }
            }
            if let Some(path) = csv {
                write_file(&path, text.as_bytes())?;
            }
            Ok(true)
        }
        Command::Toy { seed } => {
            let report = toy::run(&mut ChaCha20Rng::seed_from_u64(seed))?;
            write!(out, "{}", report.to_text())?;
            Ok(report.all_ok())
        }
    }
}

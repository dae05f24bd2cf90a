//! The `symcalc` command line.
//!
//! [`run`] parses an argument vector, dispatches to `symcalc-core` and
//! returns the process exit code: 0 on success, 2 on invalid input, 3 when
//! a construction is infeasible (the nearest achievable dimensions are
//! reported on stderr).

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use symcalc_core::bounds::{bound_curve, Symmetry};
use symcalc_core::calculus::symmetry_profile;
use symcalc_core::channelconstruct::{
    bec_density_evolution, ga_reliability, select_permutations, BitChannelReliability,
};
use symcalc_core::codes::file::{parse_code, write_monomial, CodeFile};
use symcalc_core::codes::{monomial_min_distance, polar_code};
use symcalc_core::construct::{construct, ConstructionRequest};
use symcalc_core::decode::{CheckNode, Decoder, DecoderCode, DecoderSpec};
use symcalc_core::sim::{
    curve_csv, fer_curve, select_permutations_mc, ChannelModel, SimConfig, DEFAULT_MAX_ERRORS, DEFAULT_MAX_FRAMES,
};
use symcalc_core::{Error, MonomialCode};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;

/// Environment variable consulted for the seed when `--seed` is absent.
pub const SEED_ENV: &str = "SYMCALC_SEED";
pub const DEFAULT_SEED: u64 = 0;

#[derive(Debug, Parser)]
#[command(name = "symcalc", version, about = "Partially symmetric monomial codes: bounds, construction, decoding")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build an optimal t-symmetric monomial code.
    Construct(ConstructArgs),
    /// Print the partial derivative dimensions of a code.
    Analyze(AnalyzeArgs),
    /// Emit the derivative-rate lower bound over all k.
    Bounds(BoundsArgs),
    /// Build a polar code from bit-channel reliabilities.
    Frozen(FrozenArgs),
    /// Rank SC layer permutations for permutation decoding.
    Perms(PermsArgs),
    /// Monte Carlo frame error rate.
    Simulate(SimulateArgs),
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[arg(long)]
    pub m: u32,
    #[arg(long)]
    pub t: u32,
    #[arg(long)]
    pub k: u64,
    /// Restrict to subcodes of RM(r, m).
    #[arg(long = "rm-order")]
    pub rm_order: Option<u32>,
    /// Code file to write.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub code: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("length").required(true).args(["n", "m"])))]
pub struct BoundsArgs {
    /// Code length (a power of two).
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long)]
    pub m: Option<u32>,
    /// Number of target variables, or `full`.
    #[arg(long, default_value = "full")]
    pub t: String,
    #[arg(long = "rm-order")]
    pub rm_order: Option<u32>,
    /// Comma-separated list of dimensions (default: 1..=n).
    #[arg(long, value_delimiter = ',')]
    pub k: Vec<u64>,
    /// CSV output (the default is an aligned table).
    #[arg(long)]
    pub csv: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("channel").required(true).args(["bec", "awgn"])))]
pub struct FrozenArgs {
    #[arg(long)]
    pub m: u32,
    #[arg(long)]
    pub k: usize,
    /// Erasure probability for density evolution.
    #[arg(long)]
    pub bec: Option<f64>,
    /// Eb/N0 in dB for the Gaussian approximation.
    #[arg(long)]
    pub awgn: Option<f64>,
    /// Rate used to convert Eb/N0 (default k/n).
    #[arg(long)]
    pub rate: Option<f64>,
    /// Code file to write (the information set as a monomial code).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("channel").args(["bec", "awgn"])))]
pub struct PermsArgs {
    #[arg(long)]
    pub code: PathBuf,
    /// Number of permutations.
    #[arg(long = "P", default_value_t = 32)]
    pub p: usize,
    #[arg(long = "min-dist", default_value_t = 5)]
    pub min_dist: usize,
    #[arg(long)]
    pub bec: Option<f64>,
    /// Eb/N0 in dB (default 2.0).
    #[arg(long)]
    pub awgn: Option<f64>,
    /// Re-rank a shortlist by simulated SC error rate with this many frames
    /// per permutation (0: union bound only).
    #[arg(long = "mc-frames", default_value_t = 0)]
    pub mc_frames: u64,
    /// Shortlist size for the Monte Carlo re-ranking (default 4P).
    #[arg(long)]
    pub shortlist: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DecoderKind {
    Sc,
    Scl,
    Perm,
    Ml,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub code: PathBuf,
    #[arg(long, value_enum, default_value = "sc")]
    pub decoder: DecoderKind,
    /// List size for `scl`.
    #[arg(long = "L", default_value_t = 8)]
    pub l: usize,
    /// Number of layer permutations for `perm`.
    #[arg(long = "P", default_value_t = 32)]
    pub p: usize,
    #[arg(long = "min-dist", default_value_t = 5)]
    pub min_dist: usize,
    /// `bec:<eps>[,<eps>...]` or `awgn:<db>[,<db>...]`.
    #[arg(long)]
    pub channel: String,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long = "max-errors", default_value_t = DEFAULT_MAX_ERRORS)]
    pub max_errors: u64,
    #[arg(long = "max-frames", default_value_t = DEFAULT_MAX_FRAMES)]
    pub max_frames: u64,
    /// Worker threads (0: all cores).
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
    /// Transmit the all-zero codeword.
    #[arg(long = "all-zero")]
    pub all_zero: bool,
    /// Min-sum check-node updates.
    #[arg(long = "min-sum")]
    pub min_sum: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug)]
enum Failure {
    Invalid(String),
    Infeasible(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotRepresentable { .. } | Error::Infeasible(_) => Failure::Infeasible(e.to_string()),
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

type CliResult<T> = Result<T, Failure>;

/// Runs the command line given by `argv` (including the program name).
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    let env = std::env::var(SEED_ENV).ok();
    let seed = |flag| resolve_seed(flag, env.as_deref()).map_err(Failure::Invalid);
    let outcome = match &cli.command {
        Command::Construct(a) => cmd_construct(a),
        Command::Analyze(a) => cmd_analyze(a),
        Command::Bounds(a) => cmd_bounds(a),
        Command::Frozen(a) => cmd_frozen(a),
        Command::Perms(a) => seed(a.seed).and_then(|s| cmd_perms(a, s)),
        Command::Simulate(a) => seed(a.seed).and_then(|s| cmd_simulate(a, s)),
    };
    match outcome {
        Ok(()) => EXIT_OK,
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            EXIT_INVALID
        }
        Err(Failure::Infeasible(msg)) => {
            eprintln!("infeasible: {msg}");
            EXIT_INFEASIBLE
        }
    }
}

/// Seed precedence: the flag, then [`SEED_ENV`], then [`DEFAULT_SEED`].
pub fn resolve_seed(flag: Option<u64>, env: Option<&str>) -> Result<u64, String> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match env {
        Some(v) => v
            .trim()
            .parse()
            .map_err(|_| format!("{SEED_ENV}={v:?} is not an unsigned integer")),
        None => Ok(DEFAULT_SEED),
    }
}

fn read_code(path: &Path) -> CliResult<CodeFile> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Invalid(format!("cannot read {}: {e}", path.display())))?;
    Ok(parse_code(&text)?)
}

fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Invalid(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_construct(a: &ConstructArgs) -> CliResult<()> {
    log::info!("construct: m={} t={} k={} rm_order={:?} out={:?}", a.m, a.t, a.k, a.rm_order, a.out);
    let c = construct(ConstructionRequest {
        m: a.m,
        t: a.t,
        k: a.k,
        rm_order: a.rm_order,
    })?;
    let d = monomial_min_distance(&c.code)?;
    let monomials: Vec<String> = c.code.monomials().map(|v| v.to_string()).collect();
    println!("m={} t={} k={} k_tilde={} min_distance={}", a.m, a.t, c.code.k(), c.k_tilde, d);
    println!("gen_set={}", monomials.join(","));
    if let Some(p) = &a.out {
        emit(Some(p), &write_monomial(&c.code))?;
    }
    Ok(())
}

fn cmd_analyze(a: &AnalyzeArgs) -> CliResult<()> {
    log::info!("analyze: code={:?} out={:?}", a.code, a.out);
    let code = read_code(&a.code)?;
    let profile = symmetry_profile(&code.to_linear())?;
    let mut text = String::from("direction,dim\n");
    for (i, d) in profile.dims.iter().enumerate() {
        let _ = writeln!(text, "{i},{d}");
    }
    let _ = writeln!(text, "t={},k_tilde={}", profile.t, profile.k_tilde);
    emit(a.out.as_deref(), &text)
}

fn cmd_bounds(a: &BoundsArgs) -> CliResult<()> {
    let m = match (a.n, a.m) {
        (Some(n), _) if n.is_power_of_two() && n >= 2 => n.trailing_zeros(),
        (Some(n), _) => return Err(Failure::Invalid(format!("n = {n} is not a power of two >= 2"))),
        (None, Some(m)) => m,
        (None, None) => unreachable!("clap requires --n or --m"),
    };
    let symmetry = if a.t.eq_ignore_ascii_case("full") {
        Symmetry::Full
    } else {
        Symmetry::Partial(
            a.t.parse()
                .map_err(|_| Failure::Invalid(format!("--t must be an integer or `full`, got {:?}", a.t)))?,
        )
    };
    log::info!(
        "bounds: m={m} symmetry={symmetry:?} rm_order={:?} k={:?} csv={} out={:?}",
        a.rm_order,
        a.k,
        a.csv,
        a.out
    );
    if m == 0 || m > 20 {
        return Err(Failure::Invalid(format!("m = {m} out of range 1..=20")));
    }
    let ks: Vec<u64> = if a.k.is_empty() { (1..=1u64 << m).collect() } else { a.k.clone() };
    let curve = bound_curve(m, symmetry, a.rm_order, ks)?;
    let mut text = String::new();
    if a.csv {
        text.push_str("k,rate,deriv_rate,exact\n");
        for p in &curve {
            let _ = writeln!(text, "{},{},{},{}", p.k, p.rate, p.deriv_rate, p.exact);
        }
    } else {
        let _ = writeln!(text, "{:>8} {:>10} {:>10} {:>8} exact", "k", "rate", "deriv", "k_tilde");
        for p in &curve {
            let _ = writeln!(
                text,
                "{:>8} {:>10.6} {:>10.6} {:>8} {}",
                p.k, p.rate, p.deriv_rate, p.k_tilde, p.exact
            );
        }
    }
    emit(a.out.as_deref(), &text)
}

fn cmd_frozen(a: &FrozenArgs) -> CliResult<()> {
    let n = 1usize.checked_shl(a.m).filter(|_| a.m <= 20).ok_or_else(|| Failure::Invalid(format!("m = {} too large", a.m)))?;
    let rate = a.rate.unwrap_or(a.k as f64 / n as f64);
    log::info!("frozen: m={} k={} bec={:?} awgn={:?} rate={rate} out={:?}", a.m, a.k, a.bec, a.awgn, a.out);
    let rel = match (a.bec, a.awgn) {
        (Some(eps), _) => bec_density_evolution(a.m, eps)?,
        (None, Some(db)) => ga_reliability(a.m, db, rate)?,
        (None, None) => unreachable!("clap requires a channel"),
    };
    let spec = rel.frozen_set(a.k)?;
    let frozen: Vec<String> = spec.frozen().iter().map(|v| format!("{v:x}")).collect();
    println!("frozen={}", frozen.join(","));
    if let Some(p) = &a.out {
        emit(Some(p), &write_monomial(&polar_code(&spec)))?;
    }
    Ok(())
}

fn monomial_code(file: CodeFile, what: &str) -> CliResult<MonomialCode> {
    match file {
        CodeFile::Monomial(c) => Ok(c),
        CodeFile::Linear(_) => Err(Failure::Invalid(format!("{what} needs a monomial code file"))),
    }
}

fn reliability_for(code: &MonomialCode, channel: &ChannelModel) -> CliResult<BitChannelReliability> {
    Ok(match *channel {
        ChannelModel::Bec { eps } => bec_density_evolution(code.m(), eps)?,
        ChannelModel::BiAwgn { ebn0_db, rate, .. } => ga_reliability(code.m(), ebn0_db, rate)?,
    })
}

fn join_perm(p: &[usize]) -> String {
    p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn cmd_perms(a: &PermsArgs, seed: u64) -> CliResult<()> {
    let code = monomial_code(read_code(&a.code)?, "perms")?;
    let rate = code.k() as f64 / code.n() as f64;
    let channel = match a.bec {
        Some(eps) => ChannelModel::bec(eps)?,
        None => ChannelModel::awgn(a.awgn.unwrap_or(2.0), rate)?,
    };
    let shortlist = a.shortlist.unwrap_or(4 * a.p);
    log::info!(
        "perms: code={:?} P={} min_dist={} channel={channel:?} mc_frames={} shortlist={shortlist} seed={seed} out={:?}",
        a.code,
        a.p,
        a.min_dist,
        a.mc_frames,
        a.out
    );
    let rel = reliability_for(&code, &channel)?;
    let mut text = String::from("rank,perm,score\n");
    let found = if a.mc_frames == 0 {
        let sel = select_permutations(&code, a.p, &rel, a.min_dist)?;
        if sel.sampled {
            log::warn!("m = {} > 8: ranked a random sample of layer permutations", code.m());
        }
        for (i, (p, s)) in sel.perms.iter().zip(&sel.scores).enumerate() {
            let _ = writeln!(text, "{i},{},{s}", join_perm(p));
        }
        sel.perms.len()
    } else {
        let perms = select_permutations_mc(&code, a.p, a.min_dist, &rel, &channel, shortlist, a.mc_frames, seed)?;
        for (i, p) in perms.iter().enumerate() {
            let _ = writeln!(text, "{i},{},", join_perm(p));
        }
        perms.len()
    };
    if found < a.p {
        log::warn!("only {found} of {} permutations satisfy min-dist {}", a.p, a.min_dist);
    }
    emit(a.out.as_deref(), &text)
}

fn cmd_simulate(a: &SimulateArgs, seed: u64) -> CliResult<()> {
    let file = read_code(&a.code)?;
    let (n, k) = match &file {
        CodeFile::Monomial(c) => (c.n(), c.k()),
        CodeFile::Linear(c) => (c.n(), c.k()),
    };
    let channels = ChannelModel::parse_list(&a.channel, k as f64 / n as f64)?;
    let rule = if a.min_sum { CheckNode::MinSum } else { CheckNode::Exact };
    let cfg = SimConfig {
        max_errors: a.max_errors,
        max_frames: a.max_frames,
        seed,
        workers: a.workers,
        all_zero: a.all_zero,
        ..SimConfig::default()
    };
    log::info!(
        "simulate: code={:?} decoder={:?} L={} P={} min_dist={} channel={:?} rule={rule:?} config={cfg:?} out={:?}",
        a.code,
        a.decoder,
        a.l,
        a.p,
        a.min_dist,
        channels,
        a.out
    );
    let (code, spec) = match (a.decoder, file) {
        (DecoderKind::Ml, CodeFile::Linear(c)) => (DecoderCode::Linear(c), DecoderSpec::Ml),
        (DecoderKind::Ml, CodeFile::Monomial(c)) => (DecoderCode::Monomial(c), DecoderSpec::Ml),
        (kind, file) => {
            let c = monomial_code(file, "SC-type decoding")?;
            let spec = match kind {
                DecoderKind::Sc => DecoderSpec::Sc,
                DecoderKind::Scl => DecoderSpec::Scl { list: a.l },
                DecoderKind::Perm => {
                    let rel = reliability_for(&c, &channels[0])?;
                    let sel = select_permutations(&c, a.p, &rel, a.min_dist)?;
                    if sel.shortfall {
                        log::warn!("only {} of {} permutations satisfy min-dist {}", sel.perms.len(), a.p, a.min_dist);
                    }
                    log::info!("layer permutations: {:?}", sel.perms);
                    DecoderSpec::Perm { perms: sel.perms }
                }
                DecoderKind::Ml => unreachable!(),
            };
            (DecoderCode::Monomial(c), spec)
        }
    };
    let decoder = Decoder::new(code, spec, rule)?;
    let points = fer_curve(&decoder, &channels, &cfg)?;
    for p in &points {
        let (lo, hi) = p.result.wilson();
        log::info!(
            "{:?}: frames={} errors={} ties={} stop={:?} fer 95% [{lo:.3e}, {hi:.3e}] elapsed={:?}",
            p.channel,
            p.result.frames,
            p.result.errors,
            p.result.ties,
            p.result.stop,
            p.result.elapsed
        );
    }
    emit(a.out.as_deref(), &curve_csv(decoder.spec(), &points))
}

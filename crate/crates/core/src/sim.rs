//! Seeded Monte Carlo estimation of frame error rates.
//!
//! Frame `i` of a run with seed `s` draws everything (message bits, then
//! channel noise coordinate by coordinate) from `ChaCha8Rng::seed_from_u64(s)`
//! switched to stream `i`. Frames are evaluated in batches; within a batch
//! they may run on several threads, and the stopping rule is only checked
//! between batches, so results never depend on the number of workers.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::bitmath::BitVec;
use crate::channelconstruct::{awgn_sigma2, select_permutations_by, sc_error_estimate, BitChannelReliability};
use crate::codes::{butterfly, MonomialCode};
use crate::decode::{correlation, CheckNode, DecodeResult, Decoder, DecoderCode, DecoderSpec};
use crate::Error;

pub const DEFAULT_MAX_ERRORS: u64 = 1000;
pub const DEFAULT_MAX_FRAMES: u64 = 1_000_000;
pub const DEFAULT_BATCH: u64 = 256;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ChannelModel {
    Bec { eps: f64 },
    /// Unit-energy BPSK; `sigma2 = 1 / (2 R 10^{Eb/N0 / 10})`.
    BiAwgn { ebn0_db: f64, rate: f64, sigma2: f64 },
}

impl ChannelModel {
    pub fn bec(eps: f64) -> Result<Self, Error> {
        if !(0.0..=1.0).contains(&eps) {
            return Err(Error::InvalidParameter(format!("erasure probability {eps} outside [0, 1]")));
        }
        Ok(ChannelModel::Bec { eps })
    }

    pub fn awgn(ebn0_db: f64, rate: f64) -> Result<Self, Error> {
        if !ebn0_db.is_finite() || !(rate > 0.0 && rate <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "need finite Eb/N0 and 0 < rate <= 1, got {ebn0_db} dB, rate {rate}"
            )));
        }
        Ok(ChannelModel::BiAwgn {
            ebn0_db,
            rate,
            sigma2: awgn_sigma2(ebn0_db, rate),
        })
    }

    /// Eb/N0 in dB or the erasure probability.
    pub fn parameter(&self) -> f64 {
        match *self {
            ChannelModel::Bec { eps } => eps,
            ChannelModel::BiAwgn { ebn0_db, .. } => ebn0_db,
        }
    }

    /// Parses `bec:<eps>[,<eps>...]` or `awgn:<db>[,<db>...]`.
    pub fn parse_list(spec: &str, rate: f64) -> Result<Vec<Self>, Error> {
        let (kind, values) = spec
            .split_once(':')
            .ok_or_else(|| Error::InvalidParameter(format!("channel {spec:?} is not kind:values")))?;
        let values = values
            .split(',')
            .map(|v| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::InvalidParameter(format!("bad channel value {v:?}: {e}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        match kind {
            "bec" => values.into_iter().map(Self::bec).collect(),
            "awgn" => values.into_iter().map(|db| Self::awgn(db, rate)).collect(),
            _ => Err(Error::InvalidParameter(format!("unknown channel kind {kind:?}"))),
        }
    }
}

/// BPSK (0 → +1, 1 → −1) over `channel`, returned as LLRs.
pub fn transmit<R: Rng>(channel: &ChannelModel, codeword: &BitVec, rng: &mut R) -> Vec<f64> {
    match *channel {
        ChannelModel::Bec { eps } => codeword
            .iter()
            .map(|b| {
                if rng.random::<f64>() < eps {
                    0.0
                } else if b {
                    f64::NEG_INFINITY
                } else {
                    f64::INFINITY
                }
            })
            .collect(),
        ChannelModel::BiAwgn { sigma2, .. } => {
            let sigma = sigma2.sqrt();
            codeword
                .iter()
                .map(|b| {
                    let x = if b { -1.0 } else { 1.0 };
                    let y = x + sigma * rng.sample::<f64, _>(StandardNormal);
                    2.0 * y / sigma2
                })
                .collect()
        }
    }
}

/// The generator used for frame `frame` of a run seeded with `seed`.
pub fn frame_rng(seed: u64, frame: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(frame);
    rng
}

/// A uniformly random codeword.
pub fn random_codeword<R: Rng>(code: &DecoderCode, rng: &mut R) -> BitVec {
    match code {
        DecoderCode::Monomial(c) => {
            let mut u = vec![0u8; c.n()];
            for &v in c.gen_set() {
                u[v as usize] = rng.random_range(0..2);
            }
            butterfly(&mut u);
            BitVec::from_bits(&u)
        }
        DecoderCode::Linear(c) => {
            let msg: Vec<u8> = (0..c.k()).map(|_| rng.random_range(0..2)).collect();
            c.encode(&BitVec::from_bits(&msg))
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimConfig {
    pub max_errors: u64,
    pub max_frames: u64,
    pub seed: u64,
    pub batch_size: u64,
    /// Threads for frame evaluation; 0 uses the global pool.
    pub workers: usize,
    /// Send the all-zero codeword instead of random ones.
    pub all_zero: bool,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            max_errors: DEFAULT_MAX_ERRORS,
            max_frames: DEFAULT_MAX_FRAMES,
            seed: 0,
            batch_size: DEFAULT_BATCH,
            workers: 0,
            all_zero: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StopReason {
    MaxErrors,
    MaxFrames,
}

#[derive(Clone, Debug)]
pub struct SimResult {
    pub frames: u64,
    pub errors: u64,
    /// Errors whose decoded word is exactly as close as the transmitted one.
    pub ties: u64,
    /// Frames where the decoder's answer was at least as close as the
    /// transmitted codeword.
    pub certified: u64,
    pub seed: u64,
    pub stop: StopReason,
    pub elapsed: Duration,
}

impl SimResult {
    pub fn fer(&self) -> f64 {
        if self.frames == 0 {
            0.0
        } else {
            self.errors as f64 / self.frames as f64
        }
    }

    pub fn ml_certified(&self) -> f64 {
        if self.frames == 0 {
            1.0
        } else {
            self.certified as f64 / self.frames as f64
        }
    }

    /// 95% Wilson score interval for the FER.
    pub fn wilson(&self) -> (f64, f64) {
        wilson_interval(self.errors, self.frames, 1.959_963_984_540_054)
    }

    /// Binomial standard deviation of the FER estimate.
    pub fn std_dev(&self) -> f64 {
        if self.frames == 0 {
            return 0.0;
        }
        let p = self.fer();
        (p * (1.0 - p) / self.frames as f64).sqrt()
    }

    /// Counters only; two runs agree on these iff they are bit-identical.
    pub fn counts(&self) -> (u64, u64, u64, u64, StopReason) {
        (self.frames, self.errors, self.ties, self.certified, self.stop)
    }
}

pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FrameOutcome {
    pub error: bool,
    pub tie: bool,
    pub certified: bool,
}

/// Runs frame `frame` of a seeded simulation.
pub fn run_frame(decoder: &Decoder, channel: &ChannelModel, seed: u64, frame: u64, all_zero: bool) -> Result<FrameOutcome, Error> {
    let mut rng = frame_rng(seed, frame);
    let sent = if all_zero {
        BitVec::zeros(decoder.code().n())
    } else {
        random_codeword(decoder.code(), &mut rng)
    };
    let llr = transmit(channel, &sent, &mut rng);
    let res: DecodeResult = decoder.decode(&llr)?;
    let sent_metric = correlation(&sent, &llr);
    let error = res.codeword != sent;
    Ok(FrameOutcome {
        error,
        tie: error && res.metric == sent_metric,
        certified: res.metric >= sent_metric,
    })
}

fn validate(cfg: &SimConfig) -> Result<(), Error> {
    if cfg.max_errors == 0 || cfg.max_frames == 0 || cfg.batch_size == 0 {
        return Err(Error::InvalidParameter(
            "max_errors, max_frames and batch_size must be positive".into(),
        ));
    }
    Ok(())
}

/// Simulates until `max_errors` errors or `max_frames` frames, whichever
/// comes first (checked after each batch).
pub fn simulate_fer(decoder: &Decoder, channel: &ChannelModel, cfg: &SimConfig) -> Result<SimResult, Error> {
    validate(cfg)?;
    let pool = if cfg.workers > 0 {
        Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(cfg.workers)
                .build()
                .map_err(|e| Error::InvalidParameter(format!("cannot start workers: {e}")))?,
        )
    } else {
        None
    };
    let start = Instant::now();
    let (mut frames, mut errors, mut ties, mut certified) = (0u64, 0u64, 0u64, 0u64);
    let stop = loop {
        let end = (frames + cfg.batch_size).min(cfg.max_frames);
        let batch = || {
            (frames..end)
                .into_par_iter()
                .map(|f| run_frame(decoder, channel, cfg.seed, f, cfg.all_zero))
                .collect::<Result<Vec<_>, Error>>()
        };
        let outcomes = match &pool {
            Some(p) => p.install(batch)?,
            None => batch()?,
        };
        for o in outcomes {
            errors += u64::from(o.error);
            ties += u64::from(o.tie);
            certified += u64::from(o.certified);
        }
        frames = end;
        if errors >= cfg.max_errors {
            break StopReason::MaxErrors;
        }
        if frames >= cfg.max_frames {
            break StopReason::MaxFrames;
        }
    };
    Ok(SimResult {
        frames,
        errors,
        ties,
        certified,
        seed: cfg.seed,
        stop,
        elapsed: start.elapsed(),
    })
}

/// One row of a FER curve.
#[derive(Clone, Debug)]
pub struct CurvePoint {
    pub channel: ChannelModel,
    pub result: SimResult,
}

pub fn fer_curve(decoder: &Decoder, channels: &[ChannelModel], cfg: &SimConfig) -> Result<Vec<CurvePoint>, Error> {
    if channels.is_empty() {
        return Err(Error::InvalidParameter("no channel points".into()));
    }
    channels
        .iter()
        .map(|ch| {
            Ok(CurvePoint {
                channel: *ch,
                result: simulate_fer(decoder, ch, cfg)?,
            })
        })
        .collect()
}

pub const CSV_HEADER: &str = "ebn0_or_eps,decoder,L_or_P,frames,errors,fer,ml_certified";

pub fn curve_csv(spec: &DecoderSpec, points: &[CurvePoint]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for p in points {
        let r = &p.result;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            p.channel.parameter(),
            spec.name(),
            spec.size(),
            r.frames,
            r.errors,
            r.fer(),
            r.ml_certified()
        );
    }
    out
}

/// Re-ranks the `shortlist` best layer permutations (by the union-bound
/// estimate) by their simulated SC frame error rate over `frames` paired
/// frames, then applies the spacing filter.
#[allow(clippy::too_many_arguments)]
pub fn select_permutations_mc(
    code: &MonomialCode,
    count: usize,
    min_dist: usize,
    rel: &BitChannelReliability,
    channel: &ChannelModel,
    shortlist: usize,
    frames: u64,
    seed: u64,
) -> Result<Vec<Vec<usize>>, Error> {
    let (candidates, _) = crate::channelconstruct::candidate_permutations(code.m(), seed);
    let (ranked, _, _) = select_permutations_by(candidates, shortlist.max(count), 0, |p| sc_error_estimate(code, p, rel))?;
    let cfg = SimConfig {
        max_errors: u64::MAX,
        max_frames: frames,
        seed,
        ..SimConfig::default()
    };
    let (perms, _, _) = select_permutations_by(ranked, count, min_dist, |p| {
        let dec = Decoder::new(
            DecoderCode::Monomial(code.clone()),
            DecoderSpec::Perm { perms: vec![p.to_vec()] },
            CheckNode::Exact,
        )?;
        Ok(simulate_fer(&dec, channel, &cfg)?.fer())
    })?;
    Ok(perms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channelconstruct::q_function;

    fn sc(code: MonomialCode) -> Decoder {
        Decoder::new(DecoderCode::Monomial(code), DecoderSpec::Sc, CheckNode::Exact).unwrap()
    }

    #[test]
    fn rng_test_vectors() {
        // Stream selection changes the output; the same (seed, frame) repeats.
        let a: u64 = frame_rng(1, 0).random();
        let b: u64 = frame_rng(1, 1).random();
        assert_ne!(a, b);
        assert_eq!(a, frame_rng(1, 0).random::<u64>());
        assert_eq!(a, ChaCha8Rng::seed_from_u64(1).random::<u64>());
    }

    #[test]
    fn transmit_extremes() {
        let c = BitVec::from_bits(&[0, 1, 1, 0]);
        let mut rng = frame_rng(3, 0);
        let l = transmit(&ChannelModel::bec(0.0).unwrap(), &c, &mut rng);
        assert_eq!(l, vec![f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY, f64::INFINITY]);
        let l = transmit(&ChannelModel::bec(1.0).unwrap(), &c, &mut rng);
        assert!(l.iter().all(|&x| x == 0.0));
        let l = transmit(&ChannelModel::awgn(60.0, 0.5).unwrap(), &c, &mut rng);
        assert!(l.iter().zip(c.iter()).all(|(&x, b)| (x < 0.0) == b));
    }

    #[test]
    fn error_free_channel() {
        let dec = sc(crate::codes::rm_code(2, 5).unwrap());
        let cfg = SimConfig {
            max_frames: 1000,
            seed: 5,
            ..SimConfig::default()
        };
        let r = simulate_fer(&dec, &ChannelModel::bec(0.0).unwrap(), &cfg).unwrap();
        assert_eq!((r.frames, r.errors, r.stop), (1000, 0, StopReason::MaxFrames));
        assert_eq!(r.ml_certified(), 1.0);
    }

    #[test]
    fn rate_one_matches_closed_form() {
        let m = 4;
        let dec = sc(MonomialCode::full(m));
        let ch = ChannelModel::awgn(3.0, 1.0).unwrap();
        let ChannelModel::BiAwgn { sigma2, .. } = ch else { unreachable!() };
        let p = q_function(1.0 / sigma2.sqrt());
        let expect = 1.0 - (1.0 - p).powi(16);
        let cfg = SimConfig {
            max_errors: u64::MAX,
            max_frames: 20_000,
            seed: 9,
            ..SimConfig::default()
        };
        let r = simulate_fer(&dec, &ch, &cfg).unwrap();
        let sd = (expect * (1.0 - expect) / r.frames as f64).sqrt();
        assert!((r.fer() - expect).abs() <= 3.0 * sd, "{} vs {expect}", r.fer());
        // Hard decisions are ML for a rate-one code.
        assert_eq!(r.certified, r.frames);
    }

    #[test]
    fn deterministic_across_workers_and_batches() {
        let dec = sc(crate::codes::rm_code(2, 5).unwrap());
        let ch = ChannelModel::awgn(1.0, 0.5).unwrap();
        let base = SimConfig {
            max_errors: 40,
            max_frames: 5000,
            seed: 77,
            ..SimConfig::default()
        };
        let a = simulate_fer(&dec, &ch, &base).unwrap();
        let b = simulate_fer(&dec, &ch, &SimConfig { workers: 3, ..base.clone() }).unwrap();
        assert_eq!(a.counts(), b.counts());
        assert_eq!(a.stop, StopReason::MaxErrors);
        assert_eq!(a.frames % DEFAULT_BATCH, 0);
        // Reversed evaluation order gives the same per-frame outcomes.
        let fwd: Vec<_> = (0..200).map(|f| run_frame(&dec, &ch, 77, f, false).unwrap()).collect();
        let mut rev: Vec<_> = (0..200).rev().map(|f| run_frame(&dec, &ch, 77, f, false).unwrap()).collect();
        rev.reverse();
        assert_eq!(fwd, rev);
    }

    #[test]
    fn wilson_interval_contains_estimate() {
        let (lo, hi) = wilson_interval(10, 1000, 1.96);
        assert!(lo < 0.01 && 0.01 < hi);
        assert_eq!(wilson_interval(0, 100, 1.96).0, 0.0);
        let (lo, hi) = wilson_interval(100, 100, 1.96);
        assert!(hi > 1.0 - 1e-12 && (lo - 100.0 / (100.0 + 1.96 * 1.96)).abs() < 1e-12);
    }

    #[test]
    fn channel_parsing() {
        let v = ChannelModel::parse_list("awgn:1,2.5", 0.5).unwrap();
        assert_eq!(v.len(), 2);
        assert_eq!(v[1].parameter(), 2.5);
        assert!(ChannelModel::parse_list("bec:1.5", 0.5).is_err());
        assert!(ChannelModel::parse_list("bsc:0.1", 0.5).is_err());
        assert!(ChannelModel::parse_list("awgn", 0.5).is_err());
    }

    #[test]
    fn csv_layout() {
        let dec = sc(crate::codes::rm_code(1, 3).unwrap());
        let cfg = SimConfig {
            max_frames: 10,
            ..SimConfig::default()
        };
        let pts = fer_curve(&dec, &[ChannelModel::bec(0.0).unwrap()], &cfg).unwrap();
        let csv = curve_csv(dec.spec(), &pts);
        assert_eq!(csv, format!("{CSV_HEADER}\n0,sc,1,10,0,0,1\n"));
    }
}

//! Bit-channel reliabilities for polar-like codes and layer-permutation
//! ranking.
//!
//! The SC decoder (see [`crate::decode`]) splits on `x_0` first and decodes
//! the derivative before the remaining part, so the most significant bit of
//! a decoding position selects `x_0`: the `p`-th decoded bit belongs to the
//! monomial whose mask is the `m`-bit reversal of `n - 1 - p` (see
//! [`decoding_position`]). Reliabilities are stored in decoding order; use
//! [`BitChannelReliability::for_mask`] to look one up by monomial.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::codes::{decoding_relabel, FrozenSpec, MonomialCode, MAX_M};
use crate::Error;

/// Decoding position of monomial `v` under the default layer order.
pub fn decoding_position(m: u32, v: u32) -> usize {
    let n = 1usize << m;
    let rev = if m == 0 { 0 } else { v.reverse_bits() >> (32 - m) };
    n - 1 - rev as usize
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReliabilityKind {
    /// Erasure probability of each synthetic BEC.
    Erasure,
    /// Mean LLR under the Gaussian approximation.
    GaussianMean,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BitChannelReliability {
    m: u32,
    kind: ReliabilityKind,
    values: Vec<f64>,
}

impl BitChannelReliability {
    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn kind(&self) -> ReliabilityKind {
        self.kind
    }

    /// Values indexed by decoding position.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn for_mask(&self, v: u32) -> f64 {
        self.values[decoding_position(self.m, v)]
    }

    /// Probability that SC errs on the bit of monomial `v` given correct
    /// past decisions. Erasures count as errors.
    pub fn error_probability(&self, v: u32) -> f64 {
        self.error_at(decoding_position(self.m, v))
    }

    fn error_at(&self, p: usize) -> f64 {
        let x = self.values[p];
        match self.kind {
            ReliabilityKind::Erasure => x,
            ReliabilityKind::GaussianMean => q_function((x / 2.0).sqrt()),
        }
    }

    /// Larger is worse. Ranks like [`Self::error_probability`] but does not
    /// underflow for very good channels.
    fn badness(&self, v: u32) -> f64 {
        let x = self.for_mask(v);
        match self.kind {
            ReliabilityKind::Erasure => x,
            ReliabilityKind::GaussianMean => -x,
        }
    }

    /// Freezes the `2^m - k` least reliable rows (ties: larger mask first).
    pub fn frozen_set(&self, k: usize) -> Result<FrozenSpec, Error> {
        let n = 1usize << self.m;
        if k > n {
            return Err(Error::InvalidParameter(format!("k = {k} exceeds n = {n}")));
        }
        let mut masks: Vec<u32> = (0..n as u32).collect();
        masks.sort_by(|&a, &b| {
            self.badness(b)
                .total_cmp(&self.badness(a))
                .then(b.cmp(&a))
        });
        FrozenSpec::new(self.m, masks[..n - k].iter().map(|&v| v as usize))
    }
}

/// `Q(x) = P(N(0,1) > x)`.
pub fn q_function(x: f64) -> f64 {
    0.5 * statrs::function::erf::erfc(x / std::f64::consts::SQRT_2)
}

fn check_m(m: u32) -> Result<(), Error> {
    if m > MAX_M {
        Err(Error::InvalidParameter(format!("m = {m} exceeds {MAX_M}")))
    } else {
        Ok(())
    }
}

/// Expands a per-level recursion: position `p` takes the `minus` branch at
/// level `j` when bit `m - 1 - j` of `p` is 0.
fn evolve(m: u32, init: f64, minus: impl Fn(f64) -> f64, plus: impl Fn(f64) -> f64) -> Vec<f64> {
    let mut cur = vec![init];
    for _ in 0..m {
        cur = cur.iter().flat_map(|&z| [minus(z), plus(z)]).collect();
    }
    cur
}

/// Exact erasure probabilities of the synthetic channels of BEC(`eps`).
pub fn bec_density_evolution(m: u32, eps: f64) -> Result<BitChannelReliability, Error> {
    check_m(m)?;
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::InvalidParameter(format!("erasure probability {eps} outside [0, 1]")));
    }
    Ok(BitChannelReliability {
        m,
        kind: ReliabilityKind::Erasure,
        values: evolve(m, eps, |z| 2.0 * z - z * z, |z| z * z),
    })
}

pub fn bec_frozen_set(m: u32, k: usize, eps: f64) -> Result<FrozenSpec, Error> {
    bec_density_evolution(m, eps)?.frozen_set(k)
}

// Two-piece approximation of φ(x) = 1 - E[tanh(L/2)], L ~ N(x, 2x).
const PHI_SPLIT: f64 = 10.0;
const PHI_A: f64 = -0.4527;
const PHI_B: f64 = 0.86;
const PHI_C: f64 = 0.0218;

/// `ln φ(x)`.
fn ln_phi(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x < PHI_SPLIT {
        (PHI_A * x.powf(PHI_B) + PHI_C).min(0.0)
    } else {
        0.5 * (std::f64::consts::PI / x).ln() - x / 4.0 + (1.0 - 10.0 / (7.0 * x)).ln()
    }
}

/// Inverse of [`ln_phi`] by bisection (`ln_phi` is non-increasing).
fn ln_phi_inv(target: f64) -> f64 {
    if target >= 0.0 {
        return 0.0;
    }
    let mut hi = 1.0;
    while ln_phi(hi) > target {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if ln_phi(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-12 * hi {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Check-node update of Gaussian means: `φ⁻¹(1 - (1 - φ(x))²)`.
fn ga_minus(x: f64) -> f64 {
    let lp = ln_phi(x);
    let p = lp.exp();
    // ln(1 - (1-p)^2) = ln p + ln(2 - p)
    ln_phi_inv(lp + (2.0 - p).ln())
}

/// Noise variance of BPSK at `ebn0_db` for a code of rate `rate`.
pub fn awgn_sigma2(ebn0_db: f64, rate: f64) -> f64 {
    1.0 / (2.0 * rate * 10f64.powf(ebn0_db / 10.0))
}

/// Mean LLRs of the synthetic channels of BI-AWGN under the Gaussian
/// approximation.
pub fn ga_reliability(m: u32, ebn0_db: f64, rate: f64) -> Result<BitChannelReliability, Error> {
    check_m(m)?;
    if !(rate > 0.0 && rate <= 1.0) || !ebn0_db.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "need 0 < rate <= 1 and finite Eb/N0, got rate {rate}, {ebn0_db} dB"
        )));
    }
    let mean = 2.0 / awgn_sigma2(ebn0_db, rate);
    Ok(BitChannelReliability {
        m,
        kind: ReliabilityKind::GaussianMean,
        values: evolve(m, mean, ga_minus, |x| 2.0 * x),
    })
}

pub fn ga_frozen_set(m: u32, k: usize, ebn0_db: f64, rate: f64) -> Result<FrozenSpec, Error> {
    ga_reliability(m, ebn0_db, rate)?.frozen_set(k)
}

/// Union-bound estimate `1 - ∏ (1 - p_v)` of the SC block error probability
/// when the layers are split on in the order given by `perm`.
pub fn sc_error_estimate(
    code: &MonomialCode,
    perm: &[usize],
    rel: &BitChannelReliability,
) -> Result<f64, Error> {
    if rel.m() != code.m() {
        return Err(Error::LengthMismatch {
            expected: code.n(),
            actual: rel.values().len(),
        });
    }
    if !crate::codes::is_permutation(perm, code.m() as usize) {
        return Err(Error::InvalidParameter(format!("not a permutation of [{}]", code.m())));
    }
    // Under the relabelling the highest variable is split first, so mask
    // `w` is decoded at position `n - 1 - w`.
    let n = code.n();
    let log_ok: f64 = code
        .relabel(&decoding_relabel(perm))
        .gen_set()
        .iter()
        .map(|&w| (-rel.error_at(n - 1 - w as usize)).ln_1p())
        .sum();
    Ok(-log_ok.exp_m1())
}

/// Number of positions where two permutations differ.
pub fn permutation_distance(a: &[usize], b: &[usize]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

/// Exhaustive enumeration stops at `m = MAX_ENUMERATED_M`; beyond that
/// `SAMPLED_PERMUTATIONS` random ones are ranked.
pub const MAX_ENUMERATED_M: u32 = 8;
pub const SAMPLED_PERMUTATIONS: usize = 100_000;

#[derive(Clone, Debug, PartialEq)]
pub struct PermutationSelection {
    pub perms: Vec<Vec<usize>>,
    /// Ranking score of each selected permutation (lower is better).
    pub scores: Vec<f64>,
    /// Fewer than the requested number satisfied the spacing constraint.
    pub shortfall: bool,
    /// Candidates were sampled rather than enumerated.
    pub sampled: bool,
}

/// All permutations of `[m]` in lexicographic order (identity first).
pub fn all_permutations(m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..m).collect();
    loop {
        out.push(p.clone());
        // next lexicographic permutation
        let Some(i) = (1..m).rev().find(|&i| p[i - 1] < p[i]) else {
            break;
        };
        let j = (i..m).rev().find(|&j| p[j] > p[i - 1]).unwrap();
        p.swap(i - 1, j);
        p[i..].reverse();
    }
    out
}

/// Candidate layer permutations: all of them for small `m`, otherwise the
/// identity followed by `SAMPLED_PERMUTATIONS - 1` random draws.
pub fn candidate_permutations(m: u32, seed: u64) -> (Vec<Vec<usize>>, bool) {
    if m <= MAX_ENUMERATED_M {
        return (all_permutations(m as usize), false);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let id: Vec<usize> = (0..m as usize).collect();
    let mut out = vec![id.clone()];
    while out.len() < SAMPLED_PERMUTATIONS {
        let mut p = id.clone();
        p.shuffle(&mut rng);
        out.push(p);
    }
    (out, true)
}

/// Ranks `candidates` by `score` (ascending, stable) and greedily keeps
/// those at distance at least `min_dist` from every kept one, until `count`
/// are kept.
pub fn select_permutations_by<F>(
    candidates: Vec<Vec<usize>>,
    count: usize,
    min_dist: usize,
    score: F,
) -> Result<(Vec<Vec<usize>>, Vec<f64>, bool), Error>
where
    F: Fn(&[usize]) -> Result<f64, Error> + Sync,
{
    if count == 0 {
        return Err(Error::InvalidParameter("need at least one permutation".into()));
    }
    let scores = candidates
        .par_iter()
        .map(|p| score(p))
        .collect::<Result<Vec<f64>, Error>>()?;
    let mut order: Vec<usize> = (0..candidates.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    let mut kept: Vec<usize> = Vec::with_capacity(count);
    for i in order {
        if kept.len() == count {
            break;
        }
        if kept
            .iter()
            .all(|&j| permutation_distance(&candidates[i], &candidates[j]) >= min_dist)
        {
            kept.push(i);
        }
    }
    let shortfall = kept.len() < count;
    let sel_scores = kept.iter().map(|&i| scores[i]).collect();
    let perms = kept.into_iter().map(|i| candidates[i].clone()).collect();
    Ok((perms, sel_scores, shortfall))
}

/// The `count` best layer permutations by [`sc_error_estimate`], pairwise at
/// least `min_dist` apart.
pub fn select_permutations(
    code: &MonomialCode,
    count: usize,
    rel: &BitChannelReliability,
    min_dist: usize,
) -> Result<PermutationSelection, Error> {
    let (candidates, sampled) = candidate_permutations(code.m(), 0);
    let (perms, scores, shortfall) =
        select_permutations_by(candidates, count, min_dist, |p| sc_error_estimate(code, p, rel))?;
    Ok(PermutationSelection {
        perms,
        scores,
        shortfall,
        sampled,
    })
}

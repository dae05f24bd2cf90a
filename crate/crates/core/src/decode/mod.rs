//! Decoders for monomial codes over LLR inputs.
//!
//! LLRs are `ln P(0)/P(1)`: positive values favour bit 0, `±∞` marks a known
//! bit and `0` an erasure.
//!
//! All SC-type decoders follow the Plotkin split `f = g + x_i h`: with `a`,
//! `b` the LLRs of the points with `x_i = 0` and `x_i = 1`, the derivative
//! `h` is decoded first from `f(a, b)`, then `g` from `a + (1 - 2h) b`. A
//! layer order lists the variables in the order they are split on; the
//! default is `x_0, x_1, ..., x_{m-1}`.

mod ml;
mod sc;
mod scl;

pub use ml::{ml_decode_bruteforce, MAX_ML_DIMENSION};
pub use sc::{sc_decode, sc_decode_with};
pub use scl::{scl_decode, scl_decode_with};

use crate::bitmath::BitVec;
use crate::codes::{butterfly, decoding_relabel, is_permutation, variable_permutation_points, LinearCode, MonomialCode};
use crate::Error;

pub type LlrVector = Vec<f64>;

/// Check-node rule used for the `f` update.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CheckNode {
    /// `2 atanh(tanh(a/2) tanh(b/2))`, evaluated in a stable form.
    #[default]
    Exact,
    MinSum,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Candidate {
    pub codeword: BitVec,
    /// Correlation metric, larger is closer (see [`correlation`]).
    pub metric: f64,
    /// Accumulated SC path metric, smaller is more likely.
    pub path_metric: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecodeResult {
    pub codeword: BitVec,
    /// Coefficients of the generating monomials in ascending mask order
    /// (for linear codes: the message in generator-row order).
    pub info: BitVec,
    pub metric: f64,
    pub path_metric: f64,
    /// Every candidate considered, best first.
    pub list: Vec<Candidate>,
}

/// `Σ (1 - 2c_i) λ_i` over coordinates with finite LLR, or `-∞` if `c`
/// disagrees with a known (infinite) LLR. Among words that agree with all
/// known bits this orders candidates like their likelihood.
pub fn correlation(c: &BitVec, llr: &[f64]) -> f64 {
    let mut sum = 0.0;
    for (i, &l) in llr.iter().enumerate() {
        let bit = c.get(i);
        if l.is_infinite() {
            if (l < 0.0) != bit {
                return f64::NEG_INFINITY;
            }
        } else if bit {
            sum -= l;
        } else {
            sum += l;
        }
    }
    sum
}

/// Whether the decoder's answer is at least as close to the received word
/// as the transmitted codeword; if so, a decoding error would also be an ML
/// error.
pub fn ml_lower_bound_flag(result: &DecodeResult, transmitted: &BitVec, llr: &[f64]) -> bool {
    result.metric >= correlation(transmitted, llr)
}

#[inline]
pub(crate) fn softplus(x: f64) -> f64 {
    x.max(0.0) + (-x.abs()).exp().ln_1p()
}

/// Penalty `ln(1 + e^{-(1-2u)λ})` for deciding `u` against LLR `λ`.
#[inline]
pub(crate) fn penalty(llr: f64, u: u8) -> f64 {
    if u == 0 {
        softplus(-llr)
    } else {
        softplus(llr)
    }
}

#[inline]
pub(crate) fn check_node(a: f64, b: f64, rule: CheckNode) -> f64 {
    if a.is_infinite() {
        return if a > 0.0 { b } else { -b };
    }
    if b.is_infinite() {
        return if b > 0.0 { a } else { -a };
    }
    let sign = if (a < 0.0) != (b < 0.0) { -1.0 } else { 1.0 };
    let m = sign * a.abs().min(b.abs());
    match rule {
        CheckNode::MinSum => m,
        CheckNode::Exact => m + (-(a + b).abs()).exp().ln_1p() - (-(a - b).abs()).exp().ln_1p(),
    }
}

#[inline]
pub(crate) fn bit_node(a: f64, b: f64, h: u8) -> f64 {
    let v = if h == 0 { a + b } else { a - b };
    if v.is_nan() {
        0.0
    } else {
        v
    }
}

fn check_llr(code_n: usize, llr: &[f64]) -> Result<(), Error> {
    if llr.len() != code_n {
        return Err(Error::LengthMismatch {
            expected: code_n,
            actual: llr.len(),
        });
    }
    if llr.iter().any(|x| x.is_nan()) {
        return Err(Error::InvalidParameter("LLR vector contains NaN".into()));
    }
    Ok(())
}

/// Coefficients of `code`'s generating monomials in `c`.
pub(crate) fn info_bits(code: &MonomialCode, c: &[u8]) -> BitVec {
    let mut u = c.to_vec();
    butterfly(&mut u);
    let bits: Vec<u8> = code.gen_set().iter().map(|&v| u[v as usize]).collect();
    BitVec::from_bits(&bits)
}

/// A layer order together with the relabelled code and the induced point
/// map, ready for repeated decoding.
#[derive(Clone, Debug)]
pub struct LayerOrder {
    perm: Vec<usize>,
    indicator: Vec<bool>,
    points: Vec<usize>,
}

impl LayerOrder {
    /// `perm[i]` is the variable split on at depth `i`.
    pub fn new(code: &MonomialCode, perm: &[usize]) -> Result<Self, Error> {
        if !is_permutation(perm, code.m() as usize) {
            return Err(Error::InvalidParameter(format!(
                "{perm:?} is not a permutation of [{}]",
                code.m()
            )));
        }
        let relabel = decoding_relabel(perm);
        Ok(Self {
            perm: perm.to_vec(),
            indicator: code.relabel(&relabel).indicator(),
            points: variable_permutation_points(code.m(), &relabel),
        })
    }

    pub fn identity(code: &MonomialCode) -> Self {
        let perm: Vec<usize> = (0..code.m() as usize).collect();
        Self::new(code, &perm).expect("identity is a permutation")
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    fn permute_llr(&self, llr: &[f64]) -> Vec<f64> {
        self.points.iter().map(|&x| llr[x]).collect()
    }

    fn unpermute_bits(&self, c: &[u8]) -> Vec<u8> {
        let mut out = vec![0u8; c.len()];
        for (xp, &x) in self.points.iter().enumerate() {
            out[x] = c[xp];
        }
        out
    }

    /// SC decoding in this layer order; returns the codeword of the
    /// original code and the path metric.
    pub(crate) fn sc(&self, llr: &[f64], rule: CheckNode) -> (Vec<u8>, f64) {
        let (c, pm) = sc::sc_core(&self.indicator, &self.permute_llr(llr), rule);
        (self.unpermute_bits(&c), pm)
    }

    /// SCL decoding in this layer order; returns the surviving candidates
    /// in path order.
    pub(crate) fn scl(&self, llr: &[f64], list: usize, rule: CheckNode) -> Vec<Candidate> {
        let n = llr.len();
        let (bits, pms) = scl::scl_paths(&self.indicator, &self.permute_llr(llr), list, rule);
        pms.iter()
            .enumerate()
            .map(|(q, &pm)| candidate_from_bits(&self.unpermute_bits(&bits[q * n..(q + 1) * n]), llr, pm))
            .collect()
    }
}

fn candidate_from_bits(c: &[u8], llr: &[f64], path_metric: f64) -> Candidate {
    let codeword = BitVec::from_bits(c);
    Candidate {
        metric: correlation(&codeword, llr),
        codeword,
        path_metric,
    }
}

/// Sorts by correlation metric, best first; the sort is stable, so equal
/// metrics keep their original order.
fn sort_candidates(list: &mut [Candidate]) {
    list.sort_by(|a, b| b.metric.total_cmp(&a.metric));
}

fn result_from_list(code: &MonomialCode, list: Vec<Candidate>) -> DecodeResult {
    let best = &list[0];
    DecodeResult {
        codeword: best.codeword.clone(),
        info: info_bits(code, &best.codeword.to_bits()),
        metric: best.metric,
        path_metric: best.path_metric,
        list,
    }
}

/// SC decoding in each of the given layer orders; returns the candidate with
/// the largest correlation metric (earliest order on ties).
pub fn permutation_decode(code: &MonomialCode, llr: &[f64], perms: &[Vec<usize>]) -> Result<DecodeResult, Error> {
    let orders = perms
        .iter()
        .map(|p| LayerOrder::new(code, p))
        .collect::<Result<Vec<_>, _>>()?;
    permutation_decode_with(code, llr, &orders, CheckNode::Exact)
}

pub fn permutation_decode_with(
    code: &MonomialCode,
    llr: &[f64],
    orders: &[LayerOrder],
    rule: CheckNode,
) -> Result<DecodeResult, Error> {
    check_llr(code.n(), llr)?;
    if orders.is_empty() {
        return Err(Error::InvalidParameter("no layer permutations given".into()));
    }
    let mut list: Vec<Candidate> = orders
        .iter()
        .map(|o| {
            let (c, pm) = o.sc(llr, rule);
            candidate_from_bits(&c, llr, pm)
        })
        .collect();
    sort_candidates(&mut list);
    Ok(result_from_list(code, list))
}

/// Which decoder a [`Decoder`] runs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecoderSpec {
    Sc,
    Scl { list: usize },
    Perm { perms: Vec<Vec<usize>> },
    Ml,
}

impl DecoderSpec {
    pub fn name(&self) -> &'static str {
        match self {
            DecoderSpec::Sc => "sc",
            DecoderSpec::Scl { .. } => "scl",
            DecoderSpec::Perm { .. } => "perm",
            DecoderSpec::Ml => "ml",
        }
    }

    /// List size or number of permutations (1 for SC and ML).
    pub fn size(&self) -> usize {
        match self {
            DecoderSpec::Scl { list } => *list,
            DecoderSpec::Perm { perms } => perms.len(),
            _ => 1,
        }
    }
}

/// The code a [`Decoder`] works on.
#[derive(Clone, Debug)]
pub enum DecoderCode {
    Monomial(MonomialCode),
    Linear(LinearCode),
}

impl DecoderCode {
    pub fn n(&self) -> usize {
        match self {
            DecoderCode::Monomial(c) => c.n(),
            DecoderCode::Linear(c) => c.n(),
        }
    }

    pub fn k(&self) -> usize {
        match self {
            DecoderCode::Monomial(c) => c.k(),
            DecoderCode::Linear(c) => c.k(),
        }
    }

    pub fn to_linear(&self) -> LinearCode {
        match self {
            DecoderCode::Monomial(c) => c.to_linear(),
            DecoderCode::Linear(c) => c.clone(),
        }
    }
}

/// A decoder with all per-code preprocessing done once.
#[derive(Clone, Debug)]
pub struct Decoder {
    code: DecoderCode,
    spec: DecoderSpec,
    rule: CheckNode,
    orders: Vec<LayerOrder>,
    linear: Option<LinearCode>,
}

impl Decoder {
    pub fn new(code: DecoderCode, spec: DecoderSpec, rule: CheckNode) -> Result<Self, Error> {
        let mut orders = Vec::new();
        let mut linear = None;
        match (&code, &spec) {
            (DecoderCode::Linear(_), DecoderSpec::Sc | DecoderSpec::Scl { .. } | DecoderSpec::Perm { .. }) => {
                return Err(Error::InvalidParameter(format!(
                    "{} decoding needs a monomial code",
                    spec.name()
                )))
            }
            (_, DecoderSpec::Ml) => {
                let lin = code.to_linear();
                if lin.k() > MAX_ML_DIMENSION {
                    return Err(Error::TooLarge {
                        k: lin.k(),
                        max: MAX_ML_DIMENSION,
                    });
                }
                linear = Some(lin);
            }
            (DecoderCode::Monomial(c), DecoderSpec::Perm { perms }) => {
                if perms.is_empty() {
                    return Err(Error::InvalidParameter("no layer permutations given".into()));
                }
                orders = perms.iter().map(|p| LayerOrder::new(c, p)).collect::<Result<_, _>>()?;
            }
            (DecoderCode::Monomial(c), DecoderSpec::Scl { list }) => {
                if *list == 0 {
                    return Err(Error::InvalidParameter("list size must be at least 1".into()));
                }
                orders.push(LayerOrder::identity(c));
            }
            (DecoderCode::Monomial(c), DecoderSpec::Sc) => orders.push(LayerOrder::identity(c)),
        }
        Ok(Self {
            code,
            spec,
            rule,
            orders,
            linear,
        })
    }

    pub fn code(&self) -> &DecoderCode {
        &self.code
    }

    pub fn spec(&self) -> &DecoderSpec {
        &self.spec
    }

    pub fn decode(&self, llr: &[f64]) -> Result<DecodeResult, Error> {
        match (&self.code, &self.spec) {
            (_, DecoderSpec::Ml) => ml_decode_bruteforce(self.linear.as_ref().expect("prepared"), llr),
            (DecoderCode::Monomial(c), DecoderSpec::Sc) => {
                check_llr(c.n(), llr)?;
                let (bits, pm) = self.orders[0].sc(llr, self.rule);
                Ok(result_from_list(c, vec![candidate_from_bits(&bits, llr, pm)]))
            }
            (DecoderCode::Monomial(c), DecoderSpec::Scl { list }) => {
                check_llr(c.n(), llr)?;
                Ok(scl::scl_result(c, &self.orders[0], llr, *list, self.rule))
            }
            (DecoderCode::Monomial(c), DecoderSpec::Perm { .. }) => permutation_decode_with(c, llr, &self.orders, self.rule),
            (DecoderCode::Linear(_), _) => unreachable!("rejected in Decoder::new"),
        }
    }
}

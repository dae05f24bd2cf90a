use super::{check_llr, correlation, Candidate, DecodeResult};
use crate::bitmath::BitVec;
use crate::codes::LinearCode;
use crate::Error;

pub const MAX_ML_DIMENSION: usize = 20;

/// Exhaustive ML decoding: the codeword with the largest correlation metric
/// among all `2^k`. Codewords are visited in Gray-code order of the message
/// and the first maximum wins.
pub fn ml_decode_bruteforce(code: &LinearCode, llr: &[f64]) -> Result<DecodeResult, Error> {
    check_llr(code.n(), llr)?;
    let k = code.k();
    if k > MAX_ML_DIMENSION {
        return Err(Error::TooLarge {
            k,
            max: MAX_ML_DIMENSION,
        });
    }
    let rows = code.generator().rows();
    let mut word = BitVec::zeros(code.n());
    let mut msg = 0u64;
    let mut best = (correlation(&word, llr), 0u64, word.clone());
    for step in 1u64..1 << k {
        let flip = step.trailing_zeros() as usize;
        word.xor_assign(&rows[flip]);
        msg ^= 1 << flip;
        let metric = correlation(&word, llr);
        if metric > best.0 {
            best = (metric, msg, word.clone());
        }
    }
    let (metric, msg, codeword) = best;
    let info = BitVec::from_bits(&(0..k).map(|i| (msg >> i & 1) as u8).collect::<Vec<_>>());
    Ok(DecodeResult {
        list: vec![Candidate {
            codeword: codeword.clone(),
            metric,
            path_metric: f64::NAN,
        }],
        codeword,
        info,
        metric,
        path_metric: f64::NAN,
    })
}

use super::{
    bit_node, candidate_from_bits, check_llr, check_node, penalty, result_from_list, CheckNode, DecodeResult,
    LayerOrder,
};
use crate::codes::MonomialCode;
use crate::Error;

/// Successive cancellation decoding, optionally in a permuted layer order.
pub fn sc_decode(code: &MonomialCode, llr: &[f64], layer_perm: Option<&[usize]>) -> Result<DecodeResult, Error> {
    sc_decode_with(code, llr, layer_perm, CheckNode::Exact)
}

pub fn sc_decode_with(
    code: &MonomialCode,
    llr: &[f64],
    layer_perm: Option<&[usize]>,
    rule: CheckNode,
) -> Result<DecodeResult, Error> {
    check_llr(code.n(), llr)?;
    let order = match layer_perm {
        None => LayerOrder::identity(code),
        Some(p) => LayerOrder::new(code, p)?,
    };
    let (bits, pm) = order.sc(llr, rule);
    Ok(result_from_list(code, vec![candidate_from_bits(&bits, llr, pm)]))
}

/// Splits on the highest variable first. Returns the codeword and the
/// accumulated path metric.
pub(crate) fn sc_core(indicator: &[bool], llr: &[f64], rule: CheckNode) -> (Vec<u8>, f64) {
    let n = llr.len();
    let mut out = vec![0u8; n];
    let mut scratch = vec![0.0; n.max(1)];
    let pm = node(indicator, llr, &mut out, &mut scratch, rule);
    (out, pm)
}

fn node(ind: &[bool], llr: &[f64], out: &mut [u8], scratch: &mut [f64], rule: CheckNode) -> f64 {
    let s = llr.len();
    if s == 1 {
        let u = if ind[0] && llr[0] < 0.0 { 1 } else { 0 };
        out[0] = u;
        return penalty(llr[0], u);
    }
    if !ind.iter().any(|&b| b) {
        out.fill(0);
        return llr.iter().map(|&l| penalty(l, 0)).sum();
    }
    let h = s / 2;
    let (a, b) = llr.split_at(h);
    let (child, rest) = scratch.split_at_mut(h);
    let (lo, hi) = out.split_at_mut(h);
    for i in 0..h {
        child[i] = check_node(a[i], b[i], rule);
    }
    let mut pm = node(&ind[h..], child, hi, rest, rule);
    for i in 0..h {
        child[i] = bit_node(a[i], b[i], hi[i]);
    }
    pm += node(&ind[..h], child, lo, rest, rule);
    for i in 0..h {
        hi[i] ^= lo[i];
    }
    pm
}

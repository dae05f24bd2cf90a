use super::{
    bit_node, check_llr, check_node, penalty, result_from_list, sort_candidates, CheckNode, DecodeResult, LayerOrder,
};
use crate::codes::MonomialCode;
use crate::Error;

/// SC list decoding with list size `list`.
///
/// Paths are ranked by the accumulated penalty `ln(1 + e^{-(1-2u)λ})` of
/// their decisions; when more than `list` paths exist after an information
/// bit, the ones with the smallest metric survive (lower path index on
/// ties). The surviving codewords are finally ordered by correlation with
/// the channel LLRs. With `list = 1` the decisions are exactly those of SC;
/// with `list ≥ 2^k` nothing is ever pruned and the best entry is an ML
/// codeword.
pub fn scl_decode(code: &MonomialCode, llr: &[f64], list: usize) -> Result<DecodeResult, Error> {
    scl_decode_with(code, llr, list, CheckNode::Exact)
}

pub fn scl_decode_with(code: &MonomialCode, llr: &[f64], list: usize, rule: CheckNode) -> Result<DecodeResult, Error> {
    check_llr(code.n(), llr)?;
    if list == 0 {
        return Err(Error::InvalidParameter("list size must be at least 1".into()));
    }
    Ok(scl_result(code, &LayerOrder::identity(code), llr, list, rule))
}

pub(crate) fn scl_result(
    code: &MonomialCode,
    order: &LayerOrder,
    llr: &[f64],
    list: usize,
    rule: CheckNode,
) -> DecodeResult {
    let mut cands = order.scl(llr, list, rule);
    sort_candidates(&mut cands);
    result_from_list(code, cands)
}

/// Splits on the highest variable first. Returns the surviving paths' bits
/// (row-major) and metrics.
pub(crate) fn scl_paths(indicator: &[bool], llr: &[f64], list: usize, rule: CheckNode) -> (Vec<u8>, Vec<f64>) {
    let out = node(indicator, llr, llr.len(), &[0.0], list, rule);
    (out.bits, out.pm)
}

/// Paths leaving a node: the incoming path each one extends, its bits on
/// this node (row-major, `s` per path) and its metric.
struct NodeOut {
    parent: Vec<usize>,
    bits: Vec<u8>,
    pm: Vec<f64>,
}

fn node(ind: &[bool], llr: &[f64], s: usize, pm: &[f64], list: usize, rule: CheckNode) -> NodeOut {
    let paths = pm.len();
    if !ind.iter().any(|&b| b) {
        let pm = (0..paths)
            .map(|p| pm[p] + llr[p * s..(p + 1) * s].iter().map(|&l| penalty(l, 0)).sum::<f64>())
            .collect();
        return NodeOut {
            parent: (0..paths).collect(),
            bits: vec![0; paths * s],
            pm,
        };
    }
    if s == 1 {
        return leaf(llr, pm, list);
    }
    let h = s / 2;
    let mut child = vec![0.0; paths * h];
    for p in 0..paths {
        let (a, b) = llr[p * s..(p + 1) * s].split_at(h);
        for i in 0..h {
            child[p * h + i] = check_node(a[i], b[i], rule);
        }
    }
    let top = node(&ind[h..], &child, h, pm, list, rule);

    let mid = top.pm.len();
    let mut child = vec![0.0; mid * h];
    for q in 0..mid {
        let p = top.parent[q];
        let (a, b) = llr[p * s..(p + 1) * s].split_at(h);
        let hb = &top.bits[q * h..(q + 1) * h];
        for i in 0..h {
            child[q * h + i] = bit_node(a[i], b[i], hb[i]);
        }
    }
    let low = node(&ind[..h], &child, h, &top.pm, list, rule);

    let count = low.pm.len();
    let mut bits = vec![0u8; count * s];
    let mut parent = Vec::with_capacity(count);
    for r in 0..count {
        let q = low.parent[r];
        parent.push(top.parent[q]);
        let g = &low.bits[r * h..(r + 1) * h];
        let hb = &top.bits[q * h..(q + 1) * h];
        let row = &mut bits[r * s..(r + 1) * s];
        row[..h].copy_from_slice(g);
        for i in 0..h {
            row[h + i] = g[i] ^ hb[i];
        }
    }
    NodeOut {
        parent,
        bits,
        pm: low.pm,
    }
}

fn leaf(llr: &[f64], pm: &[f64], list: usize) -> NodeOut {
    let paths = pm.len();
    // Candidate 2p + u extends path p with decision u.
    let metric = |c: usize| pm[c / 2] + penalty(llr[c / 2], (c & 1) as u8);
    let mut keep: Vec<usize> = (0..2 * paths).collect();
    if keep.len() > list {
        let key = |&c: &usize| (metric(c), c);
        keep.select_nth_unstable_by(list - 1, |a, b| {
            let (ma, ia) = key(a);
            let (mb, ib) = key(b);
            ma.total_cmp(&mb).then(ia.cmp(&ib))
        });
        keep.truncate(list);
        keep.sort_unstable();
    }
    NodeOut {
        parent: keep.iter().map(|&c| c / 2).collect(),
        bits: keep.iter().map(|&c| (c & 1) as u8).collect(),
        pm: keep.iter().map(|&c| metric(c)).collect(),
    }
}

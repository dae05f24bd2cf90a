//! Optimal `t`-symmetric monomial codes.
//!
//! Variables `x_0..x_{t-1}` are the targets. Starting from the rate-1 code (or
//! from RM(r, m)), monomials are removed in decreasing order of `τ_v` (number
//! of target variables), and inside the last touched tier in decreasing
//! degree. When only part of a degree group has to go, whole blocks sharing a
//! non-target factor `x^s` are removed, and a final partial block is chosen as
//! a biregular subgraph so that every target derivative loses the same
//! amount.

mod flow;

use std::collections::BTreeSet;

pub use flow::{max_flow, FlowNetwork, MaxFlow};

use crate::bounds::{nearest_representable, partially_symmetric_lb_rm, tier_sizes};
use crate::codes::{binomial, MonomialCode};
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConstructionRequest {
    pub m: u32,
    pub t: u32,
    pub k: u64,
    /// Restrict to subcodes of RM(r, m).
    pub rm_order: Option<u32>,
}

/// One removal performed by the construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RemovalStep {
    /// Every monomial with `τ_v = l`.
    Tier { l: u32, removed: Vec<u32> },
    /// Every degree-`d` monomial with `τ_v = l`.
    Degree { l: u32, d: u32, removed: Vec<u32> },
    /// Every degree-`d` monomial with `τ_v = l` divisible by `x^anchor`.
    Anchor { l: u32, d: u32, anchor: u32, removed: Vec<u32> },
    /// A balanced part of an anchor block.
    Residual { l: u32, d: u32, anchor: u32, removed: Vec<u32> },
}

impl RemovalStep {
    pub fn removed(&self) -> &[u32] {
        match self {
            RemovalStep::Tier { removed, .. }
            | RemovalStep::Degree { removed, .. }
            | RemovalStep::Anchor { removed, .. }
            | RemovalStep::Residual { removed, .. } => removed,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Construction {
    pub code: MonomialCode,
    pub steps: Vec<RemovalStep>,
    /// The lower bound on `k̃_t` that the code attains.
    pub k_tilde: u64,
}

#[inline]
fn tau(v: u32, t: u32) -> u32 {
    (v & ((1u32 << t) - 1)).count_ones()
}

/// Sorted lexicographically largest mask first.
fn take_matching(kept: &mut BTreeSet<u32>, pred: impl Fn(u32) -> bool) -> Vec<u32> {
    let out: Vec<u32> = kept.iter().rev().copied().filter(|&v| pred(v)).collect();
    for v in &out {
        kept.remove(v);
    }
    out
}

/// Runs the construction and returns the code with its removal trace.
pub fn construct(req: ConstructionRequest) -> Result<Construction, Error> {
    let ConstructionRequest { m, t, k, rm_order } = req;
    if m > crate::codes::MAX_M {
        return Err(Error::InvalidParameter(format!("m = {m} exceeds {}", crate::codes::MAX_M)));
    }
    let bound = partially_symmetric_lb_rm(m, t, k, rm_order)?;
    if !bound.decomposition.exact {
        let (below, above) = nearest_representable(m, t, k, rm_order)?;
        return Err(Error::NotRepresentable {
            k: k as usize,
            below: below as usize,
            above: above.map(|a| a as usize),
        });
    }
    let r = rm_order.unwrap_or(m);
    let tmask = (1u32 << t) - 1;
    let mut kept: BTreeSet<u32> = (0..1u32 << m).filter(|v| v.count_ones() <= r).collect();
    let mut steps = Vec::new();
    let k = k as usize;

    // Whole tiers, largest τ first.
    let sizes = tier_sizes(m, t, rm_order);
    let mut l = t;
    while kept.len() - sizes[l as usize] as usize >= k {
        let removed = take_matching(&mut kept, |v| tau(v, t) == l);
        steps.push(RemovalStep::Tier { l, removed });
        if l == 0 {
            break;
        }
        l -= 1;
    }

    // Whole degree groups inside tier l, largest degree first.
    let mut d = (m - t + l).min(r);
    loop {
        if d < l {
            break;
        }
        let group = binomial(t as u64, l as u64) * binomial((m - t) as u64, (d - l) as u64);
        if kept.len() < k + group as usize {
            break;
        }
        let removed = take_matching(&mut kept, |v| tau(v, t) == l && v.count_ones() == d);
        steps.push(RemovalStep::Degree { l, d, removed });
        if d == l {
            break;
        }
        d -= 1;
    }

    // Blocks x^s · (l targets) for non-target anchors s of degree d - l.
    let block = binomial(t as u64, l as u64) as usize;
    let mut anchors = (0..1u32 << m)
        .filter(|&s| s & tmask == 0 && s.count_ones() == d - l);
    while kept.len() >= k + block {
        let anchor = anchors
            .next()
            .ok_or_else(|| Error::Infeasible("ran out of anchor monomials".into()))?;
        let removed = take_matching(&mut kept, |v| {
            tau(v, t) == l && v.count_ones() == d && v & !tmask == anchor
        });
        steps.push(RemovalStep::Anchor { l, d, anchor, removed });
    }

    let rem = kept.len() - k;
    if rem > 0 {
        let anchor = anchors
            .next()
            .ok_or_else(|| Error::Infeasible("ran out of anchor monomials".into()))?;
        let candidates: Vec<u32> = kept
            .iter()
            .rev()
            .copied()
            .filter(|&v| tau(v, t) == l && v.count_ones() == d && v & !tmask == anchor)
            .collect();
        let removed = biregular_subgraph(t, l, rem, &candidates)?;
        for v in &removed {
            kept.remove(v);
        }
        steps.push(RemovalStep::Residual { l, d, anchor, removed });
    }

    debug_assert_eq!(kept.len(), k);
    Ok(Construction {
        code: MonomialCode::new(m, kept)?,
        steps,
        k_tilde: bound.k_tilde,
    })
}

/// The optimal `t`-symmetric monomial code of dimension `k`.
pub fn construct_partially_symmetric(req: ConstructionRequest) -> Result<MonomialCode, Error> {
    construct(req).map(|c| c.code)
}

/// A group of monomials that the construction treats as one removal tier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RemovalGroup {
    pub l: u32,
    pub degree: u32,
    /// Lexicographically largest mask first.
    pub monomials: Vec<u32>,
}

/// Every monomial with `τ_v ≥ 1`, grouped by `(τ_v, degree)` in the order
/// the construction considers them: larger `τ` first, then larger degree.
pub fn removal_order(m: u32, t: u32, rm_order: Option<u32>) -> Vec<RemovalGroup> {
    let r = rm_order.unwrap_or(m);
    let mut groups = Vec::new();
    for l in (1..=t).rev() {
        for d in (l..=(m - t + l).min(r)).rev() {
            let monomials: Vec<u32> = (0..1u32 << m)
                .rev()
                .filter(|&v| tau(v, t) == l && v.count_ones() == d)
                .collect();
            if !monomials.is_empty() {
                groups.push(RemovalGroup { l, degree: d, monomials });
            }
        }
    }
    groups
}

/// Chooses `count` of the `candidates` so that each target variable
/// `x_0..x_{t-1}` occurs in exactly `count · l / t` chosen monomials. Each
/// candidate must contain exactly `l` target variables. The result keeps the
/// order of `candidates`.
///
/// When more than half of the candidates are wanted, the complement is
/// searched instead. The search always branches on the variable with the
/// largest outstanding demand, preferring candidates whose other variables
/// are also in demand, and prunes with a max-flow relaxation in which
/// variables send their demand through unit edges to unused candidates,
/// each absorbing at most `l`.
pub fn biregular_subgraph(t: u32, l: u32, count: usize, candidates: &[u32]) -> Result<Vec<u32>, Error> {
    let tmask = (1u32 << t) - 1;
    if candidates.iter().any(|&v| (v & tmask).count_ones() != l) {
        return Err(Error::InvalidParameter(format!(
            "every candidate must contain exactly {l} target variables"
        )));
    }
    if count > candidates.len() {
        return Err(Error::Infeasible(format!(
            "cannot keep {count} of {} candidates",
            candidates.len()
        )));
    }
    if (count * l as usize) % t as usize != 0 {
        return Err(Error::Infeasible(format!(
            "{count} monomials of {l} target variables cannot cover {t} variables evenly"
        )));
    }
    let per_var = count * l as usize / t as usize;
    let complement = 2 * count > candidates.len();
    let (need, mut demand) = if complement {
        let demand = (0..t)
            .map(|i| {
                let deg = candidates.iter().filter(|&&v| v >> i & 1 == 1).count();
                deg.checked_sub(per_var)
            })
            .collect::<Option<Vec<_>>>();
        match demand {
            Some(d) => (candidates.len() - count, d),
            None => {
                return Err(Error::Infeasible(format!(
                    "some variable occurs in fewer than {per_var} candidates"
                )))
            }
        }
    } else {
        (count, vec![per_var; t as usize])
    };
    let search = Search {
        t: t as usize,
        l: l as usize,
        candidates,
    };
    let mut used = vec![false; candidates.len()];
    if !search.dfs(need, &mut demand, &mut used) {
        return Err(Error::Infeasible(format!(
            "no ({per_var}, {l})-biregular selection of {count} monomials"
        )));
    }
    Ok(candidates
        .iter()
        .zip(&used)
        .filter(|(_, &u)| u != complement)
        .map(|(&v, _)| v)
        .collect())
}

struct Search<'a> {
    t: usize,
    l: usize,
    candidates: &'a [u32],
}

impl Search<'_> {
    fn dfs(&self, need: usize, demand: &mut [usize], used: &mut [bool]) -> bool {
        if need == 0 {
            return demand.iter().all(|&d| d == 0);
        }
        if !self.feasible(need, demand, used) {
            return false;
        }
        let Some(pivot) = (0..self.t).filter(|&i| demand[i] > 0).max_by_key(|&i| (demand[i], usize::MAX - i)) else {
            return false;
        };
        let mut options: Vec<(usize, usize)> = self
            .candidates
            .iter()
            .enumerate()
            .filter(|&(j, &v)| !used[j] && v >> pivot & 1 == 1)
            .filter(|&(_, &v)| (0..self.t).all(|i| v >> i & 1 == 0 || demand[i] > 0))
            .map(|(j, &v)| {
                let score: usize = (0..self.t).filter(|&i| v >> i & 1 == 1).map(|i| demand[i]).sum();
                (j, score)
            })
            .collect();
        options.sort_by_key(|&(j, score)| (std::cmp::Reverse(score), j));
        for (j, _) in options {
            let v = self.candidates[j];
            let vars: Vec<usize> = (0..self.t).filter(|&i| v >> i & 1 == 1).collect();
            vars.iter().for_each(|&i| demand[i] -= 1);
            used[j] = true;
            if self.dfs(need - 1, demand, used) {
                return true;
            }
            used[j] = false;
            vars.iter().for_each(|&i| demand[i] += 1);
        }
        false
    }

    fn feasible(&self, need: usize, demand: &[usize], used: &[bool]) -> bool {
        if demand.iter().sum::<usize>() != need * self.l || demand.iter().any(|&d| d > need) {
            return false;
        }
        let rest: Vec<u32> = self
            .candidates
            .iter()
            .zip(used)
            .filter(|(_, &u)| !u)
            .map(|(&v, _)| v)
            .collect();
        if rest.len() < need {
            return false;
        }
        // source → variable (demand) → candidate (1) → sink (l).
        let t = self.t;
        let (source, sink) = (0, 1 + t + rest.len());
        let mut net = FlowNetwork::new(sink + 1, source, sink);
        for (i, &d) in demand.iter().enumerate() {
            net.add_edge(source, 1 + i, d as u64);
        }
        for (j, &v) in rest.iter().enumerate() {
            let node = 1 + t + j;
            for i in 0..t {
                if v >> i & 1 == 1 {
                    net.add_edge(1 + i, node, 1);
                }
            }
            net.add_edge(node, sink, self.l as u64);
        }
        max_flow(&net).value == (need * self.l) as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{monomial_partial_dims, partial_gen_set};

    fn masks(code: &MonomialCode) -> BTreeSet<u32> {
        code.gen_set().clone()
    }

    #[test]
    fn worked_example() {
        let c = construct(ConstructionRequest { m: 4, t: 3, k: 8, rm_order: None }).unwrap();
        // {x0x3, x1x3, x2x3, x0, x1, x2, x3, 1}
        assert_eq!(masks(&c.code), BTreeSet::from([0b1001, 0b1010, 0b1100, 1, 2, 4, 8, 0]));
        assert_eq!(c.k_tilde, 2);
        for i in 0..3 {
            assert_eq!(partial_gen_set(&c.code, i), BTreeSet::from([0b1000, 0]));
        }
        // Two whole tiers were removed: τ = 3 then τ = 2.
        assert_eq!(c.steps.len(), 2);
        assert_eq!(c.steps[0], RemovalStep::Tier { l: 3, removed: vec![15, 7] });
        assert_eq!(c.steps[1], RemovalStep::Tier { l: 2, removed: vec![14, 13, 11, 6, 5, 3] });
    }

    #[test]
    fn removal_table_m4_t3() {
        let groups = removal_order(4, 3, None);
        let summary: Vec<(u32, u32, BTreeSet<u32>)> = groups
            .iter()
            .map(|g| (g.l, g.degree, g.monomials.iter().copied().collect()))
            .collect();
        assert_eq!(
            summary,
            vec![
                (3, 4, BTreeSet::from([0b1111])),
                (3, 3, BTreeSet::from([0b0111])),
                (2, 3, BTreeSet::from([0b1011, 0b1101, 0b1110])),
                (2, 2, BTreeSet::from([0b0011, 0b0101, 0b0110])),
                (1, 2, BTreeSet::from([0b1001, 0b1010, 0b1100])),
                (1, 1, BTreeSet::from([0b0001, 0b0010, 0b0100])),
            ]
        );
        assert_eq!(groups[2].monomials, vec![0b1110, 0b1101, 0b1011]);
    }

    #[test]
    fn full_length_is_rate_one() {
        let c = construct_partially_symmetric(ConstructionRequest { m: 5, t: 2, k: 32, rm_order: None }).unwrap();
        assert_eq!(c, MonomialCode::full(5));
    }

    #[test]
    fn rm_recovered_for_full_symmetry() {
        for m in 1..=7u32 {
            for r in 0..=m {
                let k = crate::codes::rm_code(r, m).unwrap().k() as u64;
                let c = construct_partially_symmetric(ConstructionRequest { m, t: m, k, rm_order: None }).unwrap();
                assert_eq!(c, crate::codes::rm_code(r, m).unwrap());
            }
        }
    }

    #[test]
    fn non_representable_reports_neighbours() {
        let err = construct(ConstructionRequest { m: 4, t: 4, k: 6, rm_order: None }).unwrap_err();
        assert_eq!(err, Error::NotRepresentable { k: 6, below: 5, above: Some(7) });
    }

    #[test]
    fn residual_uses_balanced_selection() {
        // m = 4, t = 4, k = 7: two of the six degree-2 monomials survive.
        let c = construct(ConstructionRequest { m: 4, t: 4, k: 7, rm_order: None }).unwrap();
        let dims = monomial_partial_dims(&c.code);
        assert!(dims.iter().all(|&d| d == 2), "{dims:?}");
        assert!(c.steps.iter().any(|s| matches!(s, RemovalStep::Residual { .. })));
    }

    #[test]
    fn biregular_examples() {
        let pairs: Vec<u32> = vec![0b1100, 0b1010, 0b1001, 0b0110, 0b0101, 0b0011];
        let sel = biregular_subgraph(4, 2, 2, &pairs).unwrap();
        assert_eq!(sel.len(), 2);
        assert_eq!(sel.iter().fold(0, |a, v| a | v), 0b1111);
        assert_eq!(biregular_subgraph(4, 2, 6, &pairs).unwrap().len(), 6);
        assert!(biregular_subgraph(4, 2, 0, &pairs).unwrap().is_empty());
        assert!(biregular_subgraph(4, 2, 1, &pairs).is_err());
    }

    #[test]
    fn biregular_exists_for_every_admissible_count() {
        for t in 1..=9u32 {
            for l in 1..=t {
                let cands: Vec<u32> = (0..1u32 << t).rev().filter(|v| v.count_ones() == l).collect();
                let step = crate::bounds::tier_step(l, t) as usize;
                for count in (0..=cands.len()).step_by(step) {
                    let sel = biregular_subgraph(t, l, count, &cands)
                        .unwrap_or_else(|e| panic!("t={t} l={l} count={count}: {e}"));
                    assert_eq!(sel.len(), count);
                    for i in 0..t {
                        let deg = sel.iter().filter(|&&v| v >> i & 1 == 1).count();
                        assert_eq!(deg * t as usize, count * l as usize);
                    }
                }
            }
        }
    }
}

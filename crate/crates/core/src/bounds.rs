//! Lower bounds on the dimension of target partial derivatives.
//!
//! Split the monomials by `τ_v`, the number of target variables `x_0..x_{t-1}`
//! they contain. Removing a monomial with `τ_v = l` lowers the sum of the `t`
//! target derivative dimensions by `l`, so an optimal code keeps whole tiers of
//! small `τ` and only a part of one tier `l`. Keeping `p` monomials of that
//! tier is compatible with equal target dimensions only when `t | p·l`, i.e.
//! when `p` is a multiple of `lcm(l, t) / l`. All arithmetic here is exact.

use num_rational::Ratio;

use crate::codes::binomial;
use crate::Error;

/// How `k` splits into whole tiers plus a partial tier.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SymmetricDecomposition {
    /// Index of the partially kept tier (`t + 1` when `k` is the full length).
    pub l: u32,
    /// Multiplier of `lcm(l, t) / l` in the partial tier.
    pub j: u64,
    /// Target derivative dimension contributed by the whole tiers below `l`.
    pub base: u64,
    /// Whether `k` itself is representable; otherwise the bound is evaluated
    /// at `k_used`, the largest representable dimension not above `k`.
    pub exact: bool,
    pub k_used: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bound {
    pub k_tilde: u64,
    pub decomposition: SymmetricDecomposition,
}

/// Tier sizes `N_l` for `l = 0..=t`: the number of monomials with `τ_v = l`,
/// optionally restricted to degree at most `r`.
pub fn tier_sizes(m: u32, t: u32, rm_order: Option<u32>) -> Vec<u64> {
    let (m, t) = (m as u64, t as u64);
    (0..=t)
        .map(|l| {
            let outer = binomial(t, l);
            match rm_order {
                None => outer << (m - t),
                Some(r) => {
                    let r = r as u64;
                    if r < l {
                        0
                    } else {
                        outer * (0..=(m - t).min(r - l)).map(|i| binomial(m - t, i)).sum::<u64>()
                    }
                }
            }
        })
        .collect()
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Step between representable dimensions inside tier `l`.
pub fn tier_step(l: u32, t: u32) -> u64 {
    if l == 0 {
        1
    } else {
        t as u64 / gcd(l as u64, t as u64)
    }
}

fn validate(m: u32, t: u32, k: u64, rm_order: Option<u32>) -> Result<Vec<u64>, Error> {
    if m > 62 {
        return Err(Error::InvalidParameter(format!("m = {m} too large")));
    }
    if t == 0 || t > m {
        return Err(Error::InvalidParameter(format!("t = {t} outside 1..={m}")));
    }
    if let Some(r) = rm_order {
        if r > m {
            return Err(Error::InvalidParameter(format!("RM order {r} exceeds m = {m}")));
        }
    }
    let sizes = tier_sizes(m, t, rm_order);
    let total: u64 = sizes.iter().sum();
    if k == 0 || k > total {
        return Err(Error::InvalidParameter(format!("k = {k} outside 1..={total}")));
    }
    Ok(sizes)
}

fn decompose(t: u32, k: u64, sizes: &[u64]) -> Bound {
    let t64 = t as u64;
    let mut below = 0u64;
    let mut weighted = 0u64;
    for (l, &size) in sizes.iter().enumerate() {
        if k < below + size {
            let l = l as u32;
            let p = k - below;
            let step = tier_step(l, t);
            let kept = p / step * step;
            let base = weighted / t64;
            return Bound {
                k_tilde: base + kept * l as u64 / t64,
                decomposition: SymmetricDecomposition {
                    l,
                    j: if l == 0 { kept } else { kept / step },
                    base,
                    exact: kept == p,
                    k_used: below + kept,
                },
            };
        }
        below += size;
        weighted += size * l as u64;
    }
    // k equals the whole space.
    Bound {
        k_tilde: weighted / t64,
        decomposition: SymmetricDecomposition {
            l: t + 1,
            j: 0,
            base: weighted / t64,
            exact: true,
            k_used: k,
        },
    }
}

/// Lower bound on the common partial derivative dimension of a fully
/// symmetric `(2^m, k)` code.
pub fn fully_symmetric_lb(m: u32, k: u64) -> Result<Bound, Error> {
    partially_symmetric_lb(m, m, k)
}

/// Lower bound on `k̃_t` for a `t`-symmetric `(2^m, k)` code.
pub fn partially_symmetric_lb(m: u32, t: u32, k: u64) -> Result<Bound, Error> {
    partially_symmetric_lb_rm(m, t, k, None)
}

/// As [`partially_symmetric_lb`], restricted to subcodes of RM(r, m) when
/// `rm_order` is set (tier sizes count only monomials of degree ≤ r).
pub fn partially_symmetric_lb_rm(
    m: u32,
    t: u32,
    k: u64,
    rm_order: Option<u32>,
) -> Result<Bound, Error> {
    let sizes = validate(m, t, k, rm_order)?;
    Ok(decompose(t, k, &sizes))
}

/// Largest representable dimension `≤ k` and smallest representable one `> k`.
pub fn nearest_representable(
    m: u32,
    t: u32,
    k: u64,
    rm_order: Option<u32>,
) -> Result<(u64, Option<u64>), Error> {
    let sizes = validate(m, t, k, rm_order)?;
    let below = decompose(t, k, &sizes).decomposition.k_used;
    let total: u64 = sizes.iter().sum();
    let above = ((k + 1)..=total).find(|&kk| decompose(t, kk, &sizes).decomposition.exact);
    Ok((below, above))
}

/// All representable dimensions in `1..=total`, ascending.
pub fn representable_dims(m: u32, t: u32, rm_order: Option<u32>) -> Result<Vec<u64>, Error> {
    let sizes = validate(m, t, 1, rm_order)?;
    let total: u64 = sizes.iter().sum();
    Ok((1..=total)
        .filter(|&k| decompose(t, k, &sizes).decomposition.exact)
        .collect())
}

/// `log2` of the list size needed when the derivative code rate exceeds the
/// capacity of the degraded channel: `max(0, n (R⁻ − I⁻))`.
pub fn list_size_lb(rate_minus: f64, capacity_minus: f64, n: usize) -> f64 {
    (n as f64 * (rate_minus - capacity_minus)).max(0.0)
}

/// Capacity of the degraded synthetic channel of a BEC(ε): `(1 − ε)²`.
pub fn bec_minus_capacity(eps: f64) -> Result<f64, Error> {
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::InvalidParameter(format!("erasure probability {eps} outside [0, 1]")));
    }
    Ok((1.0 - eps) * (1.0 - eps))
}

/// `C(m-1, ⌊m/2⌋) / 2^m` for odd `m ≥ 3`: the gap between the derivative
/// rate and 1/2 for optimal fully symmetric half-rate codes.
pub fn convergence_gap(m: u32) -> Result<Ratio<u64>, Error> {
    if m < 3 || m % 2 == 0 || m > 62 {
        return Err(Error::InvalidParameter(format!("m = {m} must be odd, 3..=61")));
    }
    Ok(Ratio::new(binomial(m as u64 - 1, m as u64 / 2), 1 << m))
}

/// Which bound a curve follows.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Symmetry {
    Full,
    Partial(u32),
}

impl Symmetry {
    pub fn t(&self, m: u32) -> u32 {
        match *self {
            Symmetry::Full => m,
            Symmetry::Partial(t) => t,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurvePoint {
    pub k: u64,
    pub k_tilde: u64,
    pub rate: f64,
    pub deriv_rate: f64,
    pub exact: bool,
}

/// Bound on the derivative rate `k̃ / 2^{m-1}` against the code rate `k / 2^m`.
pub fn bound_curve(
    m: u32,
    symmetry: Symmetry,
    rm_order: Option<u32>,
    ks: impl IntoIterator<Item = u64>,
) -> Result<Vec<CurvePoint>, Error> {
    let t = symmetry.t(m);
    let n = (1u64 << m) as f64;
    ks.into_iter()
        .map(|k| {
            let b = partially_symmetric_lb_rm(m, t, k, rm_order)?;
            Ok(CurvePoint {
                k,
                k_tilde: b.k_tilde,
                rate: k as f64 / n,
                deriv_rate: b.k_tilde as f64 / (n / 2.0),
                exact: b.decomposition.exact,
            })
        })
        .collect()
}

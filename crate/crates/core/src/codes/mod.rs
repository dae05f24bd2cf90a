//! Monomial codes and binary linear codes of length `2^m`.
//!
//! Points of `F_2^m` are ordered by their integer value: coordinate `i` is the
//! point whose bit `j` is the value of `x_j`. Under this ordering row `v` of
//! `A_m = [[1,1],[0,1]]^{⊗m}` is the evaluation vector of the monomial
//! `x^v = ∏_{j: v_j = 1} x_j`, and a monomial code is encoded by `c = u A_m`.

mod ebch;
pub mod file;

use std::collections::BTreeSet;

use crate::bitmath::{BitMatrix, BitVec};
use crate::Error;

pub use ebch::{ebch_code, ebch_code_with_layout, EbchLayout};

/// Largest number of variables supported by the monomial machinery.
pub const MAX_M: u32 = 20;

/// The monomial `x^v`, stored as its exponent mask `v` over `m` variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    mask: u32,
    m: u32,
}

impl Monomial {
    pub fn new(mask: u32, m: u32) -> Result<Self, Error> {
        if m > MAX_M {
            return Err(Error::InvalidParameter(format!("m = {m} exceeds {MAX_M}")));
        }
        if (mask as u64) >> m != 0 {
            return Err(Error::InvalidParameter(format!(
                "mask {mask:#x} has bits beyond m = {m}"
            )));
        }
        Ok(Self { mask, m })
    }

    /// The constant monomial `1`.
    pub fn one(m: u32) -> Self {
        Self { mask: 0, m }
    }

    #[inline]
    pub fn mask(&self) -> u32 {
        self.mask
    }

    #[inline]
    pub fn m(&self) -> u32 {
        self.m
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.mask.count_ones()
    }

    #[inline]
    pub fn contains(&self, var: u32) -> bool {
        self.mask >> var & 1 == 1
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.mask & !other.mask == 0
    }
}

impl std::fmt::Display for Monomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.mask == 0 {
            return f.write_str("1");
        }
        let mut first = true;
        for j in 0..self.m {
            if self.contains(j) {
                if !first {
                    f.write_str("*")?;
                }
                write!(f, "x{j}")?;
                first = false;
            }
        }
        Ok(())
    }
}

/// A monomial code: the span of the evaluation vectors of its generating set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonomialCode {
    m: u32,
    gen_set: BTreeSet<u32>,
}

impl MonomialCode {
    /// Rejects duplicate masks and masks with bits beyond `m`.
    pub fn new(m: u32, masks: impl IntoIterator<Item = u32>) -> Result<Self, Error> {
        if m > MAX_M {
            return Err(Error::InvalidParameter(format!("m = {m} exceeds {MAX_M}")));
        }
        let mut gen_set = BTreeSet::new();
        for v in masks {
            if (v as u64) >> m != 0 {
                return Err(Error::InvalidParameter(format!(
                    "mask {v:#x} has bits beyond m = {m}"
                )));
            }
            if !gen_set.insert(v) {
                return Err(Error::InvalidParameter(format!("duplicate mask {v:#x}")));
            }
        }
        Ok(Self { m, gen_set })
    }

    /// The rate-1 code `C_m` containing every monomial.
    pub fn full(m: u32) -> Self {
        Self {
            m,
            gen_set: (0..1u32 << m).collect(),
        }
    }

    #[inline]
    pub fn m(&self) -> u32 {
        self.m
    }

    #[inline]
    pub fn n(&self) -> usize {
        1 << self.m
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.gen_set.len()
    }

    pub fn gen_set(&self) -> &BTreeSet<u32> {
        &self.gen_set
    }

    pub fn monomials(&self) -> impl Iterator<Item = Monomial> + '_ {
        self.gen_set.iter().map(|&mask| Monomial { mask, m: self.m })
    }

    pub fn contains(&self, mask: u32) -> bool {
        self.gen_set.contains(&mask)
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.gen_set.iter().map(|v| v.count_ones()).max()
    }

    /// Membership indicator over all `2^m` masks; `true` means information
    /// position, `false` means frozen.
    pub fn indicator(&self) -> Vec<bool> {
        let mut ind = vec![false; self.n()];
        for &v in &self.gen_set {
            ind[v as usize] = true;
        }
        ind
    }

    /// Whether every divisor of every member is also a member.
    pub fn is_divisor_closed(&self) -> bool {
        self.gen_set.iter().all(|&v| {
            (0..self.m)
                .filter(|&j| v >> j & 1 == 1)
                .all(|j| self.gen_set.contains(&(v & !(1 << j))))
        })
    }

    /// Relabels variables: variable `j` of the result is variable `perm[j]`
    /// of `self`.
    pub fn relabel(&self, perm: &[usize]) -> MonomialCode {
        assert_eq!(perm.len(), self.m as usize, "permutation length must equal m");
        let inv = invert_permutation(perm);
        MonomialCode {
            m: self.m,
            gen_set: self.gen_set.iter().map(|&v| permute_bits(v, &inv)).collect(),
        }
    }

    pub fn encode(&self, u: &BitVec) -> Result<BitVec, Error> {
        encode(self, u)
    }

    pub fn to_linear(&self) -> LinearCode {
        monomial_to_linear(self)
    }
}

/// Moves bit `j` of `x` to position `map[j]`.
pub fn permute_bits(x: u32, map: &[usize]) -> u32 {
    let mut out = 0;
    for (j, &t) in map.iter().enumerate() {
        out |= (x >> j & 1) << t;
    }
    out
}

pub fn invert_permutation(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    inv
}

/// Checks that `perm` is a permutation of `0..len`.
pub fn is_permutation(perm: &[usize], len: usize) -> bool {
    if perm.len() != len {
        return false;
    }
    let mut seen = vec![false; len];
    perm.iter().all(|&p| p < len && !std::mem::replace(&mut seen[p], true))
}

/// Coordinate permutation of `[2^m]` induced by relabeling variables:
/// entry `x'` is the original point whose bit `perm[j]` is bit `j` of `x'`.
/// Applying it to a codeword of `code` gives a codeword of
/// `code.relabel(perm)`.
pub fn variable_permutation_points(m: u32, perm: &[usize]) -> Vec<usize> {
    (0..1u32 << m).map(|xp| permute_bits(xp, perm) as usize).collect()
}

/// Relabelling under which the decoders, which split on the highest
/// variable first, take derivatives in the order `x_{order[0]}, x_{order[1]},
/// ...`: the identity order becomes the bit reversal.
pub fn decoding_relabel(order: &[usize]) -> Vec<usize> {
    order.iter().rev().copied().collect()
}

/// A binary linear code of length `n`, held as a full-row-rank generator.
#[derive(Clone, Debug)]
pub struct LinearCode {
    n: usize,
    generator: BitMatrix,
}

impl LinearCode {
    /// Accepts any generator; a rank-deficient one is replaced by its RREF
    /// basis.
    pub fn new(generator: BitMatrix) -> Self {
        let n = generator.ncols();
        let generator = if generator.rank() == generator.nrows() {
            generator
        } else {
            generator.rref().matrix
        };
        Self { n, generator }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.generator.nrows()
    }

    /// `log2 n` when the length is a power of two.
    pub fn m(&self) -> Option<u32> {
        self.n.is_power_of_two().then(|| self.n.trailing_zeros())
    }

    pub fn generator(&self) -> &BitMatrix {
        &self.generator
    }

    /// Canonical generator (RREF), identical for equal codes.
    pub fn canonical(&self) -> BitMatrix {
        self.generator.rref().matrix
    }

    pub fn same_code(&self, other: &LinearCode) -> bool {
        self.n == other.n && self.k() == other.k() && self.canonical() == other.canonical()
    }

    pub fn contains(&self, word: &BitVec) -> bool {
        let mut m = self.generator.clone();
        m.push_row(word.clone());
        m.rank() == self.k()
    }

    /// Encodes `msg` (length `k`) as `msg · G`.
    pub fn encode(&self, msg: &BitVec) -> BitVec {
        self.generator.left_mul(msg)
    }

    /// Exhaustive minimum distance; `None` for the zero code.
    pub fn min_distance_bruteforce(&self) -> Result<Option<usize>, Error> {
        const MAX_K: usize = 24;
        if self.k() > MAX_K {
            return Err(Error::TooLarge { k: self.k(), max: MAX_K });
        }
        let mut word = BitVec::zeros(self.n);
        let mut best: Option<usize> = None;
        for i in 1u64..1 << self.k() {
            // Gray-code walk: flip the generator row at the lowest set bit.
            word.xor_assign(self.generator.row(i.trailing_zeros() as usize));
            let w = word.weight();
            best = Some(best.map_or(w, |b| b.min(w)));
        }
        Ok(best)
    }
}

/// A polar code description by its frozen set of `A_m` row indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrozenSpec {
    m: u32,
    frozen: BTreeSet<usize>,
}

impl FrozenSpec {
    pub fn new(m: u32, frozen: impl IntoIterator<Item = usize>) -> Result<Self, Error> {
        if m > MAX_M {
            return Err(Error::InvalidParameter(format!("m = {m} exceeds {MAX_M}")));
        }
        let mut set = BTreeSet::new();
        for i in frozen {
            if i >= 1 << m {
                return Err(Error::InvalidParameter(format!(
                    "frozen index {i} outside [2^{m}]"
                )));
            }
            if !set.insert(i) {
                return Err(Error::InvalidParameter(format!("duplicate frozen index {i}")));
            }
        }
        Ok(Self { m, frozen: set })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn frozen(&self) -> &BTreeSet<usize> {
        &self.frozen
    }

    pub fn k(&self) -> usize {
        (1 << self.m) - self.frozen.len()
    }
}

/// In-place transform `c ← c · A_m` on a 0/1 byte vector of length `2^m`.
/// `A_m` is an involution over GF(2), so this also inverts itself.
pub fn butterfly(c: &mut [u8]) {
    let n = c.len();
    debug_assert!(n.is_power_of_two());
    let mut h = 1;
    while h < n {
        for block in c.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter().zip(hi.iter_mut()) {
                *b ^= *a;
            }
        }
        h <<= 1;
    }
}

/// Evaluation vector of `x^v` over all `2^m` points.
pub fn evaluate_monomial(v: Monomial) -> BitVec {
    let n = 1usize << v.m;
    let mut out = BitVec::zeros(n);
    let mask = v.mask as usize;
    for i in 0..n {
        if i & mask == mask {
            out.set(i, true);
        }
    }
    out
}

/// `c = u A_m` via the butterfly transform. `u` must vanish outside the
/// generating set.
pub fn encode(code: &MonomialCode, u: &BitVec) -> Result<BitVec, Error> {
    if u.len() != code.n() {
        return Err(Error::LengthMismatch {
            expected: code.n(),
            actual: u.len(),
        });
    }
    if let Some(bad) = u.iter_ones().find(|&i| !code.contains(i as u32)) {
        return Err(Error::SupportOutsideCode(bad));
    }
    let mut c = u.to_bits();
    butterfly(&mut c);
    Ok(BitVec::from_bits(&c))
}

/// Reed-Muller code RM(r, m): all monomials of degree at most `r`.
pub fn rm_code(r: u32, m: u32) -> Result<MonomialCode, Error> {
    if r > m {
        return Err(Error::InvalidParameter(format!("RM order r = {r} exceeds m = {m}")));
    }
    MonomialCode::new(m, (0..1u32 << m).filter(|v| v.count_ones() <= r))
}

/// `2^{m - max degree}` for a nonempty monomial code.
pub fn monomial_min_distance(code: &MonomialCode) -> Result<usize, Error> {
    let d = code.max_degree().ok_or(Error::EmptyCode)?;
    Ok(1 << (code.m - d))
}

/// The monomial code generated by the non-frozen rows of `A_m`.
pub fn polar_code(spec: &FrozenSpec) -> MonomialCode {
    MonomialCode {
        m: spec.m,
        gen_set: (0..1u32 << spec.m)
            .filter(|&i| !spec.frozen.contains(&(i as usize)))
            .collect(),
    }
}

/// Generator matrix whose rows are the evaluation vectors of the generating
/// set, in ascending mask order.
pub fn monomial_to_linear(code: &MonomialCode) -> LinearCode {
    let rows: Vec<BitVec> = code.monomials().map(evaluate_monomial).collect();
    LinearCode {
        n: code.n(),
        generator: BitMatrix::from_rows(code.n(), rows),
    }
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

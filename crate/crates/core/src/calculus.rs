//! Derivatives of monomials and codes, symmetry profiles, and automorphism
//! checks.
//!
//! The derivative of a code `C` of length `2^m` in direction `b` is spanned by
//! `f(x) + f(x + b)` for `f` in a basis of `C`. These words take equal values
//! on `x` and `x + b`, so only one point of each pair is kept: the one whose
//! bit at position `lowbit(b)` is zero. The result has length `2^{m-1}`.

use std::collections::BTreeSet;

use crate::bitmath::{BitMatrix, BitVec};
use crate::codes::{is_permutation, LinearCode, Monomial, MonomialCode};
use crate::Error;

/// A nonzero direction `b ∈ F_2^m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Direction(u32);

impl Direction {
    pub fn new(b: u32) -> Result<Self, Error> {
        if b == 0 {
            Err(Error::ZeroDirection)
        } else {
            Ok(Self(b))
        }
    }

    /// Unit direction `e_i`.
    pub fn unit(i: u32) -> Self {
        Self(1 << i)
    }

    pub fn mask(&self) -> u32 {
        self.0
    }
}

/// Partial derivative of `x^v` by `x_i`: `x^{v - e_i}` when `v_i = 1`, and
/// the zero polynomial (`None`) otherwise.
pub fn monomial_partial(v: Monomial, i: u32) -> Option<Monomial> {
    assert!(i < v.m(), "variable index {i} out of range for m = {}", v.m());
    v.contains(i)
        .then(|| Monomial::new(v.mask() & !(1 << i), v.m()).expect("clearing a bit keeps the mask valid"))
}

/// Generating set of `∂C/∂x_i` as monomials in the original `m` variables.
pub fn partial_gen_set(code: &MonomialCode, i: u32) -> BTreeSet<u32> {
    code.monomials()
        .filter_map(|v| monomial_partial(v, i))
        .map(|v| v.mask())
        .collect()
}

/// `∂C/∂x_i` as a monomial code in the remaining `m - 1` variables
/// (variables above `i` shift down by one).
pub fn partial_monomial_code(code: &MonomialCode, i: u32) -> MonomialCode {
    let low = (1u32 << i) - 1;
    let masks = partial_gen_set(code, i)
        .into_iter()
        .map(|v| (v & low) | ((v >> 1) & !low));
    MonomialCode::new(code.m() - 1, masks).expect("derivative masks are distinct")
}

/// Dimensions of the partial derivatives computed symbolically: the number of
/// generating monomials containing each variable.
pub fn monomial_partial_dims(code: &MonomialCode) -> Vec<usize> {
    (0..code.m())
        .map(|i| code.gen_set().iter().filter(|&&v| v >> i & 1 == 1).count())
        .collect()
}

fn code_m(code: &LinearCode) -> Result<u32, Error> {
    match code.m() {
        Some(m) if m >= 1 => Ok(m),
        _ => Err(Error::InvalidParameter(format!(
            "code length {} is not a power of two >= 2",
            code.n()
        ))),
    }
}

/// Coset representatives `x` with bit `lowbit(b)` clear, ascending.
fn representatives(m: u32, b: u32) -> Vec<usize> {
    let low = b.trailing_zeros();
    (0..1usize << m).filter(|x| x >> low & 1 == 0).collect()
}

fn derivative_generator(code: &LinearCode, b: u32) -> BitMatrix {
    let m = code.m().expect("validated by caller");
    let reps = representatives(m, b);
    let b = b as usize;
    let mut out = BitMatrix::new(reps.len());
    for f in code.generator().rows() {
        let mut h = BitVec::zeros(reps.len());
        for (j, &x) in reps.iter().enumerate() {
            if f.get(x) != f.get(x ^ b) {
                h.set(j, true);
            }
        }
        out.push_row(h);
    }
    out
}

/// The punctured derivative code `C^(b)` of length `2^{m-1}`.
pub fn directional_derivative_code(code: &LinearCode, b: Direction) -> Result<LinearCode, Error> {
    let m = code_m(code)?;
    if (b.0 as u64) >> m != 0 {
        return Err(Error::InvalidParameter(format!(
            "direction {:#x} has bits beyond m = {m}",
            b.0
        )));
    }
    Ok(LinearCode::new(derivative_generator(code, b.0)))
}

/// `dim C^(b)` without materialising a reduced basis.
pub fn derivative_dim(code: &LinearCode, b: Direction) -> Result<usize, Error> {
    let m = code_m(code)?;
    if (b.0 as u64) >> m != 0 {
        return Err(Error::InvalidParameter(format!(
            "direction {:#x} has bits beyond m = {m}",
            b.0
        )));
    }
    Ok(derivative_generator(code, b.0).rank())
}

/// Partial derivative dimensions and the set of directions attaining the
/// minimum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetryProfile {
    /// `dims[i] = dim C^(e_i)`.
    pub dims: Vec<usize>,
    /// Number of partial derivatives attaining the minimum.
    pub t: usize,
    /// The minimal partial derivative dimension.
    pub k_tilde: usize,
    /// Variables whose partial derivatives attain the minimum, ascending.
    pub targets: Vec<usize>,
}

impl SymmetryProfile {
    pub fn from_dims(dims: Vec<usize>) -> Self {
        let k_tilde = dims.iter().copied().min().unwrap_or(0);
        let targets: Vec<usize> = (0..dims.len()).filter(|&i| dims[i] == k_tilde).collect();
        Self {
            t: targets.len(),
            k_tilde,
            targets,
            dims,
        }
    }

    pub fn is_fully_symmetric(&self) -> bool {
        self.t == self.dims.len()
    }
}

pub fn symmetry_profile(code: &LinearCode) -> Result<SymmetryProfile, Error> {
    let m = code_m(code)?;
    let dims = (0..m)
        .map(|i| derivative_generator(code, 1 << i).rank())
        .collect();
    Ok(SymmetryProfile::from_dims(dims))
}

/// Whether the coordinate permutation `perm` maps `code` onto itself. The
/// permuted word is `c'_x = c_{perm[x]}`.
pub fn is_invariant(code: &LinearCode, perm: &[usize]) -> Result<bool, Error> {
    if !is_permutation(perm, code.n()) {
        return Err(Error::InvalidParameter(format!(
            "not a permutation of [{}]",
            code.n()
        )));
    }
    let moved = LinearCode::new(code.generator().permute_columns(perm));
    Ok(moved.same_code(code))
}

/// The translation `x → x + b` as a coordinate permutation of `[2^m]`.
pub fn translation(m: u32, b: u32) -> Vec<usize> {
    (0..1usize << m).map(|x| x ^ b as usize).collect()
}

/// Dimension of the unpunctured derivative `D_{e_i} C`. Requires `x → x + e_i`
/// to be an automorphism, in which case the derivative is a subcode of `C`
/// and its dimension is at most `k / 2`.
pub fn derivative_subcode_dim(code: &LinearCode, i: u32) -> Result<usize, Error> {
    let m = code_m(code)?;
    if i >= m {
        return Err(Error::InvalidParameter(format!("variable {i} out of range for m = {m}")));
    }
    if !is_invariant(code, &translation(m, 1 << i))? {
        return Err(Error::NotInvariant(1 << i));
    }
    // Puncturing one point of each identical pair is injective, so the
    // punctured and unpunctured derivatives have equal dimension.
    Ok(derivative_generator(code, 1 << i).rank())
}

/// Unpunctured derivative `D_b C` as a length-`2^m` code.
pub fn unpunctured_derivative(code: &LinearCode, b: Direction) -> Result<LinearCode, Error> {
    code_m(code)?;
    let rows = code
        .generator()
        .rows()
        .iter()
        .map(|f| {
            let mut h = BitVec::zeros(code.n());
            for x in 0..code.n() {
                if f.get(x) != f.get(x ^ b.0 as usize) {
                    h.set(x, true);
                }
            }
            h
        })
        .collect();
    Ok(LinearCode::new(BitMatrix::from_rows(code.n(), rows)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitmath::GF2mField;
    use crate::codes::{binomial, ebch_code, rm_code, variable_permutation_points};

    fn example_code() -> MonomialCode {
        MonomialCode::new(4, [0b1001, 0b1010, 0b1100, 1, 2, 4, 8, 0]).unwrap()
    }

    #[test]
    fn monomial_partial_examples() {
        let x0x1 = Monomial::new(0b11, 2).unwrap();
        assert_eq!(monomial_partial(x0x1, 0), Some(Monomial::new(0b10, 2).unwrap()));
        let x1 = Monomial::new(0b10, 2).unwrap();
        assert_eq!(monomial_partial(x1, 0), None);
        // Zero polynomial is distinct from the constant monomial.
        let x0 = Monomial::new(0b01, 2).unwrap();
        assert_eq!(monomial_partial(x0, 0), Some(Monomial::one(2)));
        assert_eq!(partial_gen_set(&example_code(), 0), BTreeSet::from([0b1000, 0]));
    }

    #[test]
    fn rate_one_derivatives() {
        let c = MonomialCode::full(4).to_linear();
        for b in 1..16 {
            assert_eq!(derivative_dim(&c, Direction::new(b).unwrap()).unwrap(), 8);
        }
        assert_eq!(Direction::new(0), Err(Error::ZeroDirection));
    }

    #[test]
    fn rm_derivatives_are_lower_order_rm() {
        for m in 2..=6u32 {
            for r in 1..=m {
                let c = rm_code(r, m).unwrap().to_linear();
                let expected: u64 = (0..r as u64).map(|i| binomial(m as u64 - 1, i)).sum();
                for i in 0..m {
                    let d = directional_derivative_code(&c, Direction::unit(i)).unwrap();
                    assert_eq!(d.n(), 1 << (m - 1));
                    assert_eq!(d.k() as u64, expected);
                    let sym = rm_code(r - 1, m - 1).unwrap().to_linear();
                    assert!(d.same_code(&sym));
                }
            }
        }
    }

    #[test]
    fn ebch_partials_equal() {
        let f = GF2mField::new(5).unwrap();
        let c = ebch_code(&f, 7).unwrap();
        let p = symmetry_profile(&c).unwrap();
        assert_eq!(p.t, 5);
        assert!(p.dims.iter().all(|&d| d == p.dims[0]));
    }

    #[test]
    fn profile_examples() {
        let p = symmetry_profile(&rm_code(2, 5).unwrap().to_linear()).unwrap();
        assert!(p.is_fully_symmetric());
        let p = symmetry_profile(&example_code().to_linear()).unwrap();
        assert_eq!((p.t, p.k_tilde), (3, 2));
        assert_eq!(p.targets, vec![0, 1, 2]);
        assert_eq!(p.dims, vec![2, 2, 2, 4]);
    }

    #[test]
    fn symbolic_and_rank_dims_agree() {
        for seed in 0u64..200 {
            let m = 1 + (seed % 8) as u32;
            let masks: Vec<u32> = (0..1u32 << m)
                .filter(|&v| (seed.wrapping_mul(0x9E3779B97F4A7C15) >> (v % 61)) & 1 == 1 || v % 7 == 3)
                .collect();
            let code = MonomialCode::new(m, masks).unwrap();
            let p = symmetry_profile(&code.to_linear()).unwrap();
            assert_eq!(p.dims, monomial_partial_dims(&code));
            for i in 0..m {
                assert_eq!(partial_monomial_code(&code, i).k(), p.dims[i as usize]);
            }
        }
    }

    #[test]
    fn invariance_examples() {
        let c = rm_code(1, 3).unwrap().to_linear();
        let id: Vec<usize> = (0..8).collect();
        assert!(is_invariant(&c, &id).unwrap());
        for perm in [[1, 0, 2], [2, 1, 0], [0, 2, 1], [1, 2, 0]] {
            assert!(is_invariant(&c, &variable_permutation_points(3, &perm)).unwrap());
        }
        // The example code is not symmetric under swapping a target with x_3.
        let e = example_code().to_linear();
        assert!(!is_invariant(&e, &variable_permutation_points(4, &[3, 1, 2, 0])).unwrap());
        assert!(is_invariant(&e, &variable_permutation_points(4, &[1, 2, 0, 3])).unwrap());
        assert!(is_invariant(&c, &[0, 0, 1, 2, 3, 4, 5, 6]).is_err());
    }

    #[test]
    fn legeay_examples() {
        let c = rm_code(1, 3).unwrap().to_linear();
        for i in 0..3 {
            assert_eq!(derivative_subcode_dim(&c, i).unwrap(), 1);
        }
        let full = MonomialCode::full(3).to_linear();
        assert_eq!(derivative_subcode_dim(&full, 0).unwrap(), 4);
        let f = GF2mField::new(4).unwrap();
        let b = ebch_code(&f, 5).unwrap();
        for i in 0..4 {
            assert!(2 * derivative_subcode_dim(&b, i).unwrap() <= b.k());
        }
        // x1 alone (no constant) is not translation invariant along x1.
        let odd = MonomialCode::new(2, [2]).unwrap().to_linear();
        assert_eq!(derivative_subcode_dim(&odd, 1), Err(Error::NotInvariant(2)));
    }

    #[test]
    fn translation_derivative_is_subcode() {
        let c = rm_code(2, 4).unwrap().to_linear();
        for b in 1..16 {
            let d = unpunctured_derivative(&c, Direction::new(b).unwrap()).unwrap();
            assert!(d.generator().rows().iter().all(|r| c.contains(r)));
            assert_eq!(d.k(), derivative_dim(&c, Direction::new(b).unwrap()).unwrap());
        }
    }
}

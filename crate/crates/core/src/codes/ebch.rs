//! Extended primitive narrow-sense BCH codes.

use super::LinearCode;
use crate::bitmath::{BitMatrix, BitVec, GF2mField};
use crate::Error;

/// Assignment of field elements to coordinates.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum EbchLayout {
    /// Coordinate `x` holds the field element whose polynomial-basis mask is
    /// `x`; the extension symbol sits at coordinate 0 (the zero element).
    /// Translations `x → x + b` of `F_2^m` are then field additions, so the
    /// code's affine invariance acts on the same point set as derivatives.
    #[default]
    FieldElement,
    /// Coordinate `i < 2^m - 1` holds `α^i`; the extension symbol is last.
    CyclicPower,
}

/// The eBCH code of length `2^m` with design distance `delta`, in the
/// [`EbchLayout::FieldElement`] layout.
pub fn ebch_code(field: &GF2mField, delta: u32) -> Result<LinearCode, Error> {
    ebch_code_with_layout(field, delta, EbchLayout::FieldElement)
}

/// Builds the binary expansion of the parity checks `Σ_x c_x x^j = 0` for
/// `j = 1..=delta-2`, adds the overall parity row, and returns the kernel.
pub fn ebch_code_with_layout(
    field: &GF2mField,
    delta: u32,
    layout: EbchLayout,
) -> Result<LinearCode, Error> {
    let n = field.size();
    if delta < 2 || delta as usize > n - 1 {
        return Err(Error::InvalidParameter(format!(
            "design distance {delta} outside 2..={}",
            n - 1
        )));
    }
    let elements: Vec<u32> = match layout {
        EbchLayout::FieldElement => (0..n as u32).collect(),
        EbchLayout::CyclicPower => (0..n as u64 - 1)
            .map(|i| field.alpha_pow(i))
            .chain(std::iter::once(0))
            .collect(),
    };
    let m = field.m();
    let mut h = BitMatrix::new(n);
    for j in 1..=delta as u64 - 2 {
        let powers: Vec<u32> = elements.iter().map(|&x| field.pow(x, j)).collect();
        for bit in 0..m {
            let mut row = BitVec::zeros(n);
            for (pos, &p) in powers.iter().enumerate() {
                if p >> bit & 1 == 1 {
                    row.set(pos, true);
                }
            }
            h.push_row(row);
        }
    }
    h.push_row(BitVec::ones(n));
    Ok(LinearCode::new(h.kernel_basis()))
}

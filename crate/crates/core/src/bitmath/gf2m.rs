use crate::Error;

/// Primitive polynomials for GF(2^m), m = 2..=16, including the x^m term.
/// Each entry is the lowest-weight primitive polynomial of its degree.
///
/// | m  | polynomial                      | mask    |
/// |----|---------------------------------|---------|
/// | 2  | x^2 + x + 1                     | 0x7     |
/// | 3  | x^3 + x + 1                     | 0xB     |
/// | 4  | x^4 + x + 1                     | 0x13    |
/// | 5  | x^5 + x^2 + 1                   | 0x25    |
/// | 6  | x^6 + x + 1                     | 0x43    |
/// | 7  | x^7 + x + 1                     | 0x83    |
/// | 8  | x^8 + x^4 + x^3 + x^2 + 1       | 0x11D   |
/// | 9  | x^9 + x^4 + 1                   | 0x211   |
/// | 10 | x^10 + x^3 + 1                  | 0x409   |
/// | 11 | x^11 + x^2 + 1                  | 0x805   |
/// | 12 | x^12 + x^6 + x^4 + x + 1        | 0x1053  |
/// | 13 | x^13 + x^4 + x^3 + x + 1        | 0x201B  |
/// | 14 | x^14 + x^10 + x^6 + x + 1       | 0x4443  |
/// | 15 | x^15 + x + 1                    | 0x8003  |
/// | 16 | x^16 + x^12 + x^3 + x + 1       | 0x1100B |
pub const PRIMITIVE_POLYNOMIALS: [u32; 15] = [
    0x7, 0xB, 0x13, 0x25, 0x43, 0x83, 0x11D, 0x211, 0x409, 0x805, 0x1053, 0x201B, 0x4443, 0x8003,
    0x1100B,
];

/// The field GF(2^m) in polynomial basis. Elements are `u32` masks below
/// `2^m`; bit `i` is the coefficient of `α^i`.
#[derive(Clone, Debug)]
pub struct GF2mField {
    m: u32,
    poly: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl GF2mField {
    /// The field built from the default primitive polynomial for `m`.
    pub fn new(m: u32) -> Result<Self, Error> {
        if !(2..=16).contains(&m) {
            return Err(Error::InvalidParameter(format!(
                "field degree m = {m} outside 2..=16"
            )));
        }
        Self::with_polynomial(m, PRIMITIVE_POLYNOMIALS[(m - 2) as usize])
    }

    /// Builds the field from an explicit polynomial, which must be
    /// primitive of degree `m`.
    pub fn with_polynomial(m: u32, poly: u32) -> Result<Self, Error> {
        if !(2..=16).contains(&m) {
            return Err(Error::InvalidParameter(format!(
                "field degree m = {m} outside 2..=16"
            )));
        }
        if poly >> m != 1 {
            return Err(Error::InvalidParameter(format!(
                "polynomial {poly:#x} is not of degree {m}"
            )));
        }
        let order = (1u32 << m) - 1;
        let mut exp = vec![0u32; 2 * order as usize];
        let mut log = vec![0u32; 1 << m];
        let mut x = 1u32;
        for i in 0..order {
            if i > 0 && x == 1 {
                return Err(Error::InvalidParameter(format!(
                    "polynomial {poly:#x} is not primitive (α has order {i})"
                )));
            }
            exp[i as usize] = x;
            log[x as usize] = i;
            x <<= 1;
            if x >> m & 1 == 1 {
                x ^= poly;
            }
        }
        if x != 1 {
            return Err(Error::InvalidParameter(format!(
                "polynomial {poly:#x} is not primitive"
            )));
        }
        for i in order..2 * order {
            exp[i as usize] = exp[(i - order) as usize];
        }
        Ok(Self { m, poly, exp, log })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn polynomial(&self) -> u32 {
        self.poly
    }

    /// Number of field elements, `2^m`.
    pub fn size(&self) -> usize {
        1 << self.m
    }

    /// Multiplicative order of the group, `2^m - 1`.
    pub fn order(&self) -> u32 {
        (1 << self.m) - 1
    }

    /// `α^i` for any `i` (reduced modulo the group order).
    pub fn alpha_pow(&self, i: u64) -> u32 {
        self.exp[(i % self.order() as u64) as usize]
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        debug_assert!(a < (1 << self.m) && b < (1 << self.m));
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let l = self.log[a as usize] as u64 * (e % self.order() as u64);
        self.alpha_pow(l)
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let l = self.log[a as usize];
        Some(self.exp[((self.order() - l) % self.order()) as usize])
    }

    /// Discrete logarithm base α; `None` for zero.
    pub fn log(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.log[a as usize])
    }

    /// Product by shift-and-reduce, independent of the log tables.
    pub fn mul_slow(&self, mut a: u32, mut b: u32) -> u32 {
        let mut acc = 0u32;
        while b != 0 {
            if b & 1 == 1 {
                acc ^= a;
            }
            b >>= 1;
            a <<= 1;
            if a >> self.m & 1 == 1 {
                a ^= self.poly;
            }
        }
        acc
    }
}

/// Product of `a` and `b` in `field`.
pub fn gf2m_mul(field: &GF2mField, a: u32, b: u32) -> u32 {
    field.mul(a, b)
}

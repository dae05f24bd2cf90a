use std::fmt;

const WORD: usize = 64;

#[inline]
pub(crate) fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

/// Fixed-length bit vector over GF(2), packed into 64-bit words.
///
/// Bits past `len` in the last word are always zero, so word-level
/// equality and hashing are meaningful.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self {
            len,
            words: vec![u64::MAX; words_for(len)],
        };
        v.clear_tail();
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Builds a vector from 0/1 bytes; any nonzero byte is a one.
    pub fn from_bits(bits: &[u8]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b != 0 {
                v.words[i / WORD] |= 1 << (i % WORD);
            }
        }
        v
    }

    /// Builds a vector from packed words; bits beyond `len` are discarded.
    pub fn from_words(len: usize, mut words: Vec<u64>) -> Self {
        words.resize(words_for(len), 0);
        let mut v = Self { len, words };
        v.clear_tail();
        v
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.words[i / WORD] ^= 1 << (i % WORD);
    }

    /// `self ^= other`. Panics on length mismatch.
    pub fn xor_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len, "length mismatch in xor");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// XOR restricted to words starting at `from_word`; used by elimination
    /// where the leading words are known to be zero in `other`.
    #[inline]
    pub(crate) fn xor_from_word(&mut self, other: &BitVec, from_word: usize) {
        for (a, b) in self.words[from_word..].iter_mut().zip(&other.words[from_word..]) {
            *a ^= b;
        }
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &BitVec) -> bool {
        assert_eq!(self.len, other.len, "length mismatch in dot product");
        let ones: u32 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        ones & 1 == 1
    }

    /// Index of the lowest set bit at or after `from`.
    pub fn next_one(&self, from: usize) -> Option<usize> {
        if from >= self.len {
            return None;
        }
        let mut w = from / WORD;
        let mut word = self.words[w] & (u64::MAX << (from % WORD));
        loop {
            if word != 0 {
                let i = w * WORD + word.trailing_zeros() as usize;
                return (i < self.len).then_some(i);
            }
            w += 1;
            if w == self.words.len() {
                return None;
            }
            word = self.words[w];
        }
    }

    pub fn first_one(&self) -> Option<usize> {
        self.next_one(0)
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        let mut next = self.first_one();
        std::iter::from_fn(move || {
            let cur = next?;
            next = self.next_one(cur + 1);
            Some(cur)
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Unpacks to one byte per bit.
    pub fn to_bits(&self) -> Vec<u8> {
        (0..self.len).map(|i| self.get(i) as u8).collect()
    }

    /// Gathers the bits at `positions` into a new vector.
    pub fn select(&self, positions: &[usize]) -> BitVec {
        let mut out = BitVec::zeros(positions.len());
        for (j, &p) in positions.iter().enumerate() {
            if self.get(p) {
                out.words[j / WORD] |= 1 << (j % WORD);
            }
        }
        out
    }

    fn clear_tail(&mut self) {
        let rem = self.len % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec(")?;
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn self_xor_is_zero() {
        let mut v = BitVec::from_bits(&[1, 0, 1, 1, 0, 1, 1]);
        let w = v.clone();
        v.xor_assign(&w);
        assert!(v.is_zero());
        assert_eq!(v.len(), 7);
    }

    #[test]
    fn tail_bits_stay_clear() {
        let v = BitVec::ones(70);
        assert_eq!(v.weight(), 70);
        assert_eq!(v.words()[1], (1 << 6) - 1);
        let w = BitVec::from_words(3, vec![u64::MAX]);
        assert_eq!(w.weight(), 3);
    }

    #[test]
    fn iter_ones_crosses_words() {
        let mut v = BitVec::zeros(200);
        for i in [0, 63, 64, 130, 199] {
            v.set(i, true);
        }
        assert_eq!(v.iter_ones().collect::<Vec<_>>(), vec![0, 63, 64, 130, 199]);
        assert_eq!(v.next_one(131), Some(199));
        assert_eq!(v.next_one(200), None);
    }

    #[test]
    fn dot_product_parity() {
        let a = BitVec::from_bits(&[1, 1, 0, 1]);
        let b = BitVec::from_bits(&[1, 1, 1, 0]);
        assert!(!a.dot(&b));
        let c = BitVec::from_bits(&[1, 0, 0, 0]);
        assert!(a.dot(&c));
    }
}

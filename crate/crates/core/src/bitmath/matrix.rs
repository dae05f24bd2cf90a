use super::bitvec::BitVec;

/// Dense row-major matrix over GF(2).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<BitVec>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: BitMatrix,
    pub pivots: Vec<usize>,
}

impl BitMatrix {
    /// An empty matrix (no rows) with `cols` columns.
    pub fn new(cols: usize) -> Self {
        Self {
            cols,
            rows: Vec::new(),
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            cols,
            rows: vec![BitVec::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for (i, row) in m.rows.iter_mut().enumerate() {
            row.set(i, true);
        }
        m
    }

    /// Panics if the rows do not all have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<BitVec>) -> Self {
        for r in &rows {
            assert_eq!(r.len(), cols, "row length does not match column count");
        }
        Self { cols, rows }
    }

    /// Convenience constructor from 0/1 byte rows.
    pub fn from_bit_rows(rows: &[&[u8]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(cols, rows.iter().map(|r| BitVec::from_bits(r)).collect())
    }

    pub fn push_row(&mut self, row: BitVec) {
        assert_eq!(row.len(), self.cols, "row length does not match column count");
        self.rows.push(row);
    }

    #[inline]
    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn ncols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn row(&self, i: usize) -> &BitVec {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<BitVec> {
        self.rows
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    /// Row rank over GF(2).
    pub fn rank(&self) -> usize {
        let mut rows: Vec<BitVec> = self.rows.iter().filter(|r| !r.is_zero()).cloned().collect();
        eliminate(&mut rows, self.cols, false).len()
    }

    /// Reduced row echelon form. Zero rows are dropped, so the result has
    /// exactly `rank` rows; pivots are chosen as the first nonzero column.
    pub fn rref(&self) -> Rref {
        let mut rows: Vec<BitVec> = self.rows.iter().filter(|r| !r.is_zero()).cloned().collect();
        let pivots = eliminate(&mut rows, self.cols, true);
        rows.truncate(pivots.len());
        Rref {
            matrix: BitMatrix {
                cols: self.cols,
                rows,
            },
            pivots,
        }
    }

    /// Basis of the right null space `{x : M xᵀ = 0}`, one vector per row.
    pub fn kernel_basis(&self) -> BitMatrix {
        let Rref { matrix, pivots } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut out = BitMatrix::new(self.cols);
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut x = BitVec::zeros(self.cols);
            x.set(free, true);
            for (row, &p) in matrix.rows.iter().zip(&pivots) {
                if row.get(free) {
                    x.set(p, true);
                }
            }
            out.rows.push(x);
        }
        out
    }

    /// `M · xᵀ`, one output bit per row.
    pub fn mul_vec(&self, x: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.rows.len());
        for (i, r) in self.rows.iter().enumerate() {
            if r.dot(x) {
                out.set(i, true);
            }
        }
        out
    }

    /// `u · M` for a row vector `u` of length `nrows`.
    pub fn left_mul(&self, u: &BitVec) -> BitVec {
        assert_eq!(u.len(), self.rows.len(), "vector length does not match row count");
        let mut out = BitVec::zeros(self.cols);
        for i in u.iter_ones() {
            out.xor_assign(&self.rows[i]);
        }
        out
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows.len());
        for (i, r) in self.rows.iter().enumerate() {
            for j in r.iter_ones() {
                t.rows[j].set(i, true);
            }
        }
        t
    }

    /// Keeps the listed columns, in the listed order.
    pub fn select_columns(&self, cols: &[usize]) -> BitMatrix {
        BitMatrix {
            cols: cols.len(),
            rows: self.rows.iter().map(|r| r.select(cols)).collect(),
        }
    }

    /// Column permutation: output column `j` is input column `perm[j]`.
    pub fn permute_columns(&self, perm: &[usize]) -> BitMatrix {
        assert_eq!(perm.len(), self.cols, "permutation length does not match column count");
        self.select_columns(perm)
    }

    /// Stacks the rows of `other` below `self`.
    pub fn vstack(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.cols, "column count mismatch");
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        BitMatrix {
            cols: self.cols,
            rows,
        }
    }
}

/// Gaussian elimination in place. Rows `0..rank` end up as the echelon
/// basis; with `full` set, pivot columns are also cleared above the pivot.
fn eliminate(rows: &mut [BitVec], cols: usize, full: bool) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| rows[i].get(c)) else {
            continue;
        };
        rows.swap(r, p);
        let (head, tail) = rows.split_at_mut(r + 1);
        let pivot_row = &head[r];
        let w = c / 64;
        for row in tail.iter_mut() {
            if row.get(c) {
                row.xor_from_word(pivot_row, w);
            }
        }
        if full {
            let (above, rest) = head.split_at_mut(r);
            let pivot_row = &rest[0];
            for row in above.iter_mut() {
                if row.get(c) {
                    row.xor_from_word(pivot_row, w);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

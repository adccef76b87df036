//! Dense GF(2) vectors packed into 64-bit words, and row reduction over them.
//!
//! Supports are stored sparsely everywhere else in the crate; this module is
//! only used where elimination needs word-parallel xor.

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitRow {
    len: usize,
    words: Vec<u64>,
}

impl BitRow {
    pub fn zeros(len: usize) -> Self {
        BitRow {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn from_support(len: usize, support: &[usize]) -> Self {
        let mut row = Self::zeros(len);
        for &j in support {
            row.toggle(j);
        }
        row
    }

    pub fn from_bits(bits: &[u8]) -> Self {
        let mut row = Self::zeros(bits.len());
        for (j, &b) in bits.iter().enumerate() {
            if b & 1 == 1 {
                row.toggle(j);
            }
        }
        row
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, j: usize) -> bool {
        (self.words[j / 64] >> (j % 64)) & 1 == 1
    }

    pub fn toggle(&mut self, j: usize) {
        assert!(j < self.len, "bit {j} out of range for length {}", self.len);
        self.words[j / 64] ^= 1 << (j % 64);
    }

    pub fn xor_assign(&mut self, other: &BitRow) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
    }

    /// Parity of the inner product with `other`.
    pub fn dot(&self, other: &BitRow) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .fold(0, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }
}

/// Row-reduced basis of a GF(2) row space, each basis row tagged by its pivot.
#[derive(Debug, Clone)]
pub struct RowBasis {
    len: usize,
    rows: Vec<(usize, BitRow)>,
}

impl RowBasis {
    pub fn new(len: usize) -> Self {
        RowBasis {
            len,
            rows: Vec::new(),
        }
    }

    pub fn from_supports(len: usize, supports: &[Vec<usize>]) -> Self {
        let mut basis = Self::new(len);
        for s in supports {
            basis.insert(BitRow::from_support(len, s));
        }
        basis
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the basis; the result is zero iff `v` is in the span.
    pub fn reduce(&self, mut v: BitRow) -> BitRow {
        for (pivot, row) in &self.rows {
            if v.get(*pivot) {
                v.xor_assign(row);
            }
        }
        v
    }

    /// Adds `v` to the basis, returning false if it was already in the span.
    pub fn insert(&mut self, v: BitRow) -> bool {
        assert_eq!(v.len(), self.len);
        let v = self.reduce(v);
        let Some(pivot) = v.first_one() else {
            return false;
        };
        // keep the basis fully reduced so `reduce` is a single pass
        for (_, row) in &mut self.rows {
            if row.get(pivot) {
                row.xor_assign(&v);
            }
        }
        self.rows.push((pivot, v));
        true
    }

    pub fn contains(&self, v: &BitRow) -> bool {
        self.reduce(v.clone()).is_zero()
    }
}

/// True iff `v` (a 0/1 vector) is a GF(2) combination of the given row supports.
pub fn in_rowspace_gf2(rows: &[Vec<usize>], v: &[u8]) -> bool {
    let basis = RowBasis::from_supports(v.len(), rows);
    basis.contains(&BitRow::from_bits(v))
}

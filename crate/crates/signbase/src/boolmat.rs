//! Boolean square matrices with bitset rows, for walk-existence powers and
//! reachability.

/// Square 0/1 matrix; row `i` is the bitset of columns `j` with a 1 at (i, j).
#[derive(Clone, PartialEq, Eq)]
pub struct BoolMatrix {
    n: usize,
    words: usize,
    rows: Vec<u64>,
}

impl BoolMatrix {
    pub fn zero(n: usize) -> BoolMatrix {
        assert!(n >= 1);
        let words = n.div_ceil(64);
        BoolMatrix {
            n,
            words,
            rows: vec![0; n * words],
        }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn words_per_row(&self) -> usize {
        self.words
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        (self.rows[i * self.words + j / 64] >> (j % 64)) & 1 != 0
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize) {
        self.rows[i * self.words + j / 64] |= 1u64 << (j % 64);
    }

    fn tail_mask(&self, word: usize) -> u64 {
        if word + 1 < self.words || self.n.is_multiple_of(64) {
            u64::MAX
        } else {
            (1u64 << (self.n % 64)) - 1
        }
    }

    pub fn mul(&self, rhs: &BoolMatrix) -> BoolMatrix {
        assert_eq!(self.n, rhs.n);
        let w = self.words;
        let mut out = BoolMatrix::zero(self.n);
        for i in 0..self.n {
            let row = i * w;
            let acc = &mut out.rows[row..row + w];
            for wi in 0..w {
                let mut bits = self.rows[row + wi];
                while bits != 0 {
                    let b = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    let k = wi * 64 + b;
                    let kr = k * w;
                    for (t, slot) in acc.iter_mut().enumerate() {
                        *slot |= rhs.rows[kr + t];
                    }
                }
            }
        }
        out
    }

    pub fn is_all_ones(&self) -> bool {
        (0..self.n).all(|i| {
            (0..self.words).all(|wi| {
                let mask = self.tail_mask(wi);
                self.rows[i * self.words + wi] & mask == mask
            })
        })
    }

    /// One walk step: `next = union of rows[k] over set bits k of cur`.
    pub fn advance_set(&self, cur: &[u64], next: &mut [u64]) {
        next.iter_mut().for_each(|x| *x = 0);
        for (wi, &word) in cur.iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                let kr = (wi * 64 + b) * self.words;
                for (t, slot) in next.iter_mut().enumerate() {
                    *slot |= self.rows[kr + t];
                }
            }
        }
    }
}

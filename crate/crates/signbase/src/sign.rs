//! The four-element sign semiring `{0, +, -, #}` and square matrices over it.
//!
//! Addition summarises parallel walks with the same endpoints and length,
//! multiplication concatenates walks. `#` ("ambiguous") records that walks of
//! both signs exist; a `#` entry in the t-th power of an adjacency sign matrix
//! is exactly a witness for a pair of SSSD walks of length t.
//!
//! Matrix entries are stored as 2 bits spread over two bit planes (one bit per
//! plane), with rows packed into `u64` words so the inner loop of the matrix
//! product combines whole rows word-parallel.

use std::fmt;
use thiserror::Error;

/// Element of the sign semiring.
///
/// Encoded in 2 bits: bit 0 = "a positive witness exists", bit 1 = "a
/// negative witness exists". `0 = 00`, `+ = 01`, `- = 10`, `# = 11`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Zero,
    Plus,
    Minus,
    Ambiguous,
}

impl Sign {
    pub const ALL: [Sign; 4] = [Sign::Zero, Sign::Plus, Sign::Minus, Sign::Ambiguous];

    #[inline]
    pub fn bits(self) -> u8 {
        match self {
            Sign::Zero => 0b00,
            Sign::Plus => 0b01,
            Sign::Minus => 0b10,
            Sign::Ambiguous => 0b11,
        }
    }

    #[inline]
    pub fn from_bits(bits: u8) -> Sign {
        match bits & 0b11 {
            0b00 => Sign::Zero,
            0b01 => Sign::Plus,
            0b10 => Sign::Minus,
            _ => Sign::Ambiguous,
        }
    }

    /// Semiring addition: combine the witness sets of two parallel walks.
    ///
    /// `0` is the identity, `x + x = x`, `+` plus `-` is `#`, and `#`
    /// absorbs anything nonzero.
    #[inline]
    #[allow(clippy::should_implement_trait)]
    pub fn add(self, other: Sign) -> Sign {
        Sign::from_bits(self.bits() | other.bits())
    }

    /// Semiring multiplication: the sign of a concatenated walk.
    ///
    /// `0` annihilates, `+`/`-` multiply like integers, `#` times anything
    /// nonzero stays `#`.
    #[inline]
    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, other: Sign) -> Sign {
        let (ap, an) = (self.bits() & 1, self.bits() >> 1);
        let (bp, bn) = (other.bits() & 1, other.bits() >> 1);
        let p = (ap & bp) | (an & bn);
        let n = (ap & bn) | (an & bp);
        Sign::from_bits(p | (n << 1))
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self == Sign::Zero
    }

    #[inline]
    pub fn is_ambiguous(self) -> bool {
        self == Sign::Ambiguous
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Zero => '0',
            Sign::Plus => '+',
            Sign::Minus => '-',
            Sign::Ambiguous => '#',
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("sign matrix orders differ: {left} vs {right}")]
pub struct DimensionMismatch {
    pub left: usize,
    pub right: usize,
}

/// Square matrix over the sign semiring.
#[derive(Clone, PartialEq, Eq)]
pub struct SignMatrix {
    n: usize,
    words: usize,
    pos: Vec<u64>,
    neg: Vec<u64>,
}

impl SignMatrix {
    pub fn zero(n: usize) -> SignMatrix {
        assert!(n >= 1, "matrix order must be positive");
        let words = n.div_ceil(64);
        SignMatrix {
            n,
            words,
            pos: vec![0; n * words],
            neg: vec![0; n * words],
        }
    }

    /// The identity pattern: `+` on the diagonal, `0` elsewhere.
    pub fn identity(n: usize) -> SignMatrix {
        let mut m = SignMatrix::zero(n);
        for i in 0..n {
            m.set(i, i, Sign::Plus);
        }
        m
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Sign {
        let w = i * self.words + j / 64;
        let b = j % 64;
        let p = (self.pos[w] >> b) & 1;
        let n = (self.neg[w] >> b) & 1;
        Sign::from_bits((p | (n << 1)) as u8)
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, s: Sign) {
        let w = i * self.words + j / 64;
        let b = j % 64;
        let mask = 1u64 << b;
        let bits = s.bits();
        if bits & 1 != 0 {
            self.pos[w] |= mask;
        } else {
            self.pos[w] &= !mask;
        }
        if bits & 2 != 0 {
            self.neg[w] |= mask;
        } else {
            self.neg[w] &= !mask;
        }
    }

    fn row_mask(&self, word: usize) -> u64 {
        if word + 1 < self.words || self.n.is_multiple_of(64) {
            u64::MAX
        } else {
            (1u64 << (self.n % 64)) - 1
        }
    }

    /// Semiring matrix product.
    #[allow(clippy::should_implement_trait)]
    pub fn mul(&self, rhs: &SignMatrix) -> Result<SignMatrix, DimensionMismatch> {
        if self.n != rhs.n {
            return Err(DimensionMismatch {
                left: self.n,
                right: rhs.n,
            });
        }
        let n = self.n;
        let w = self.words;
        let mut out = SignMatrix::zero(n);
        let mut accp = vec![0u64; w];
        let mut accn = vec![0u64; w];
        for i in 0..n {
            accp.iter_mut().for_each(|x| *x = 0);
            accn.iter_mut().for_each(|x| *x = 0);
            let row = i * w;
            for wi in 0..w {
                let pw = self.pos[row + wi];
                let nw = self.neg[row + wi];
                let mut active = pw | nw;
                while active != 0 {
                    let b = active.trailing_zeros() as usize;
                    active &= active - 1;
                    let k = wi * 64 + b;
                    let kr = k * w;
                    let has_p = (pw >> b) & 1 != 0;
                    let has_n = (nw >> b) & 1 != 0;
                    if has_p && has_n {
                        for t in 0..w {
                            let both = rhs.pos[kr + t] | rhs.neg[kr + t];
                            accp[t] |= both;
                            accn[t] |= both;
                        }
                    } else if has_p {
                        for t in 0..w {
                            accp[t] |= rhs.pos[kr + t];
                            accn[t] |= rhs.neg[kr + t];
                        }
                    } else {
                        for t in 0..w {
                            accp[t] |= rhs.neg[kr + t];
                            accn[t] |= rhs.pos[kr + t];
                        }
                    }
                }
            }
            out.pos[row..row + w].copy_from_slice(&accp);
            out.neg[row..row + w].copy_from_slice(&accn);
        }
        Ok(out)
    }

    /// True iff every entry is `#`.
    pub fn is_all_ambiguous(&self) -> bool {
        (0..self.n).all(|i| {
            (0..self.words).all(|wi| {
                let mask = self.row_mask(wi);
                let idx = i * self.words + wi;
                (self.pos[idx] & self.neg[idx] & mask) == mask
            })
        })
    }

    /// True iff no entry is `#`.
    pub fn is_ambiguity_free(&self) -> bool {
        self.pos
            .iter()
            .zip(&self.neg)
            .all(|(p, n)| p & n == 0)
    }

    /// True iff every entry is nonzero (i.e. `+`, `-` or `#`).
    pub fn is_all_nonzero(&self) -> bool {
        (0..self.n).all(|i| {
            (0..self.words).all(|wi| {
                let mask = self.row_mask(wi);
                let idx = i * self.words + wi;
                ((self.pos[idx] | self.neg[idx]) & mask) == mask
            })
        })
    }

    /// Lazy stream of powers `A^1, A^2, ..., A^cap`.
    pub fn powers(&self, cap: usize) -> PowerStream<'_> {
        PowerStream {
            base: self,
            current: None,
            remaining: cap,
        }
    }
}

impl fmt::Debug for SignMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            for j in 0..self.n {
                write!(f, "{}", self.get(i, j))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Iterator over successive semiring powers of a fixed matrix.
pub struct PowerStream<'a> {
    base: &'a SignMatrix,
    current: Option<SignMatrix>,
    remaining: usize,
}

impl Iterator for PowerStream<'_> {
    type Item = SignMatrix;

    fn next(&mut self) -> Option<SignMatrix> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        let next = match &self.current {
            None => self.base.clone(),
            Some(c) => c.mul(self.base).expect("powers of a square matrix"),
        };
        self.current = Some(next.clone());
        Some(next)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent model: a sign is the set of walk signs it summarises.
    #[derive(Clone, Copy, PartialEq, Debug)]
    struct WitnessSet {
        has_pos: bool,
        has_neg: bool,
    }

    fn model(s: Sign) -> WitnessSet {
        WitnessSet {
            has_pos: s.bits() & 1 != 0,
            has_neg: s.bits() & 2 != 0,
        }
    }

    fn model_add(a: WitnessSet, b: WitnessSet) -> WitnessSet {
        WitnessSet {
            has_pos: a.has_pos || b.has_pos,
            has_neg: a.has_neg || b.has_neg,
        }
    }

    fn model_mul(a: WitnessSet, b: WitnessSet) -> WitnessSet {
        // products of every pair of witnesses
        WitnessSet {
            has_pos: (a.has_pos && b.has_pos) || (a.has_neg && b.has_neg),
            has_neg: (a.has_pos && b.has_neg) || (a.has_neg && b.has_pos),
        }
    }

    #[test]
    fn add_and_mul_match_witness_set_model() {
        for a in Sign::ALL {
            for b in Sign::ALL {
                assert_eq!(model(a.add(b)), model_add(model(a), model(b)), "{a}+{b}");
                assert_eq!(model(a.mul(b)), model_mul(model(a), model(b)), "{a}*{b}");
            }
        }
    }

    #[test]
    fn add_examples() {
        assert_eq!(Sign::Plus.add(Sign::Minus), Sign::Ambiguous);
        assert_eq!(Sign::Zero.add(Sign::Minus), Sign::Minus);
        assert_eq!(Sign::Ambiguous.add(Sign::Plus), Sign::Ambiguous);
    }

    #[test]
    fn mul_examples() {
        assert_eq!(Sign::Minus.mul(Sign::Minus), Sign::Plus);
        assert_eq!(Sign::Ambiguous.mul(Sign::Zero), Sign::Zero);
        assert_eq!(Sign::Ambiguous.mul(Sign::Minus), Sign::Ambiguous);
    }

    #[test]
    fn semiring_axioms_exhaustive() {
        for a in Sign::ALL {
            assert_eq!(a.add(Sign::Zero), a, "0 is the additive identity");
            assert_eq!(a.add(a), a, "addition is idempotent");
            assert_eq!(a.mul(Sign::Zero), Sign::Zero, "0 annihilates");
            assert_eq!(a.mul(Sign::Plus), a, "+ is the multiplicative identity");
            for b in Sign::ALL {
                assert_eq!(a.add(b), b.add(a), "addition commutes");
                assert_eq!(a.mul(b), b.mul(a), "multiplication commutes");
                for c in Sign::ALL {
                    assert_eq!(a.add(b).add(c), a.add(b.add(c)));
                    assert_eq!(a.mul(b).mul(c), a.mul(b.mul(c)));
                    assert_eq!(a.mul(b.add(c)), a.mul(b).add(a.mul(c)));
                }
            }
        }
    }

    fn from_rows(rows: &[&[Sign]]) -> SignMatrix {
        let n = rows.len();
        let mut m = SignMatrix::zero(n);
        for (i, row) in rows.iter().enumerate() {
            for (j, &s) in row.iter().enumerate() {
                m.set(i, j, s);
            }
        }
        m
    }

    /// Entry-by-entry reference product, used to cross-check the bit-plane kernel.
    fn naive_mul(a: &SignMatrix, b: &SignMatrix) -> SignMatrix {
        let n = a.order();
        let mut out = SignMatrix::zero(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = Sign::Zero;
                for k in 0..n {
                    acc = acc.add(a.get(i, k).mul(b.get(k, j)));
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    #[test]
    fn two_by_two_square() {
        use Sign::*;
        let a = from_rows(&[&[Plus, Plus], &[Minus, Zero]]);
        let sq = a.mul(&a).unwrap();
        let expected = from_rows(&[&[Ambiguous, Plus], &[Minus, Minus]]);
        assert_eq!(sq, expected);
    }

    #[test]
    fn identity_is_neutral() {
        use Sign::*;
        let a = from_rows(&[&[Plus, Plus], &[Minus, Zero]]);
        let id = SignMatrix::identity(2);
        assert_eq!(id.mul(&a).unwrap(), a);
        assert_eq!(a.mul(&id).unwrap(), a);
    }

    #[test]
    fn all_ambiguous_absorbs_when_columns_nonzero() {
        use Sign::*;
        // adjacency of a strongly connected digraph: every column has a nonzero
        let a = from_rows(&[&[Plus, Plus], &[Minus, Zero]]);
        let mut hash = SignMatrix::zero(2);
        for i in 0..2 {
            for j in 0..2 {
                hash.set(i, j, Ambiguous);
            }
        }
        assert_eq!(hash.mul(&a).unwrap(), hash);
    }

    #[test]
    fn order_mismatch_is_an_error() {
        let a = SignMatrix::zero(2);
        let b = SignMatrix::zero(3);
        assert!(a.mul(&b).is_err());
    }

    #[test]
    fn power_stream_reaches_all_ambiguous() {
        use Sign::*;
        let a = from_rows(&[&[Plus, Plus], &[Minus, Zero]]);
        let powers: Vec<_> = a.powers(4).collect();
        assert_eq!(powers.len(), 4);
        assert!(!powers[2].is_all_ambiguous());
        assert!(powers[3].is_all_ambiguous());
    }

    #[test]
    fn positive_loop_is_idempotent() {
        let a = from_rows(&[&[Sign::Plus]]);
        for p in a.powers(6) {
            assert_eq!(p.get(0, 0), Sign::Plus);
        }
    }

    #[test]
    fn positive_three_cycle_rotates_with_period_three() {
        use Sign::*;
        let a = from_rows(&[
            &[Zero, Plus, Zero],
            &[Zero, Zero, Plus],
            &[Plus, Zero, Zero],
        ]);
        for (idx, p) in a.powers(9).enumerate() {
            let t = idx + 1;
            for i in 0..3 {
                let mut nonzero = 0;
                for j in 0..3 {
                    if p.get(i, j) != Zero {
                        nonzero += 1;
                        assert_eq!(j, (i + t) % 3);
                        assert_eq!(p.get(i, j), Plus);
                    }
                }
                assert_eq!(nonzero, 1);
            }
        }
    }

    #[test]
    fn wide_matrix_kernel_matches_naive_product() {
        // order 70 exercises the multi-word row path
        let n = 70;
        let mut a = SignMatrix::zero(n);
        let mut b = SignMatrix::zero(n);
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 33) as usize
        };
        for i in 0..n {
            for j in 0..n {
                if next() % 3 == 0 {
                    a.set(i, j, Sign::ALL[next() % 4]);
                }
                if next() % 3 == 0 {
                    b.set(i, j, Sign::ALL[next() % 4]);
                }
            }
        }
        assert_eq!(a.mul(&b).unwrap(), naive_mul(&a, &b));
    }
}

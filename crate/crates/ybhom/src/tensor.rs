//! Basis bookkeeping for tensor powers `V^(⊗n)` of a free module of rank `m`.
//!
//! Basis tuples use letters `1..=m` and are enumerated lexicographically with
//! the *leftmost* position most significant, so the tuple `(a_1, ..., a_n)`
//! sits at index `sum (a_k - 1) * m^(n-k)`. Formal linear combinations keep
//! their coefficients in sparse index order, which makes every operation
//! deterministic.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::ring::LaurentPoly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TensorError {
    #[error("letter {letter} out of range 1..={m}")]
    LetterOutOfRange { letter: u8, m: usize },
    #[error("index {index} out of range for m={m}, n={n}")]
    IndexOutOfRange { index: usize, m: usize, n: usize },
    #[error("operator acts on rank {op_m} but the vector has rank {vec_m}")]
    RankMismatch { op_m: usize, vec_m: usize },
    #[error("position {pos} out of range 1..={max} for adjacent-pair action")]
    PositionOutOfRange { pos: usize, max: usize },
    #[error("cannot drop a factor from a 0-fold tensor")]
    EmptyTensor,
}

/// Anything that acts on an adjacent pair of tensor factors by a formal sum
/// of basis pairs: `(a, b) -> sum coeff * (c, d)`.
pub trait PairMap {
    fn m(&self) -> usize;
    /// The image of the basis pair `(a, b)` as `((c, d), coefficient)` terms.
    fn image(&self, a: u8, b: u8) -> &[((u8, u8), LaurentPoly)];
}

/// A basis tuple of `V^(⊗n)`: letters in `1..=m`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisTuple {
    m: usize,
    letters: Vec<u8>,
}

impl BasisTuple {
    pub fn new(m: usize, letters: Vec<u8>) -> Result<Self, TensorError> {
        for &letter in &letters {
            if letter == 0 || letter as usize > m {
                return Err(TensorError::LetterOutOfRange { letter, m });
            }
        }
        Ok(BasisTuple { m, letters })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    /// Lexicographic index, leftmost letter most significant.
    pub fn index(&self) -> usize {
        self.letters
            .iter()
            .fold(0, |acc, &a| acc * self.m + (a as usize - 1))
    }

    pub fn from_index(m: usize, n: usize, index: usize) -> Result<Self, TensorError> {
        if index >= dim(m, n) {
            return Err(TensorError::IndexOutOfRange { index, m, n });
        }
        let mut letters = vec![0u8; n];
        let mut rest = index;
        for slot in letters.iter_mut().rev() {
            *slot = (rest % m) as u8 + 1;
            rest /= m;
        }
        Ok(BasisTuple { m, letters })
    }

    /// All `m^n` tuples in index order.
    pub fn all(m: usize, n: usize) -> impl Iterator<Item = BasisTuple> {
        (0..dim(m, n)).map(move |i| BasisTuple::from_index(m, n, i).unwrap())
    }
}

impl fmt::Display for BasisTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

/// `m^n`.
pub fn dim(m: usize, n: usize) -> usize {
    m.pow(n as u32)
}

/// A formal `Q[y, y^-1]`-linear combination of basis tuples of `V^(⊗n)`,
/// stored sparsely by tuple index.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TensorVector {
    m: usize,
    n: usize,
    coeffs: BTreeMap<usize, LaurentPoly>,
}

impl TensorVector {
    pub fn zero(m: usize, n: usize) -> Self {
        TensorVector {
            m,
            n,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn basis(t: &BasisTuple) -> Self {
        let mut v = TensorVector::zero(t.m(), t.n());
        v.coeffs.insert(t.index(), LaurentPoly::one());
        v
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, t: &BasisTuple) -> LaurentPoly {
        self.coeffs.get(&t.index()).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &LaurentPoly)> {
        self.coeffs.iter().map(|(&i, c)| (i, c))
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    /// Adds `poly * e_index`, dropping the slot if the sum cancels.
    pub fn add_term(&mut self, index: usize, poly: &LaurentPoly) {
        if poly.is_zero() {
            return;
        }
        debug_assert!(index < dim(self.m, self.n));
        let entry = self.coeffs.entry(index).or_default();
        *entry = &*entry + poly;
        if entry.is_zero() {
            self.coeffs.remove(&index);
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        debug_assert_eq!((self.m, self.n), (rhs.m, rhs.n));
        let mut out = self.clone();
        for (i, c) in rhs.terms() {
            out.add_term(i, c);
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.scale(&LaurentPoly::int(-1)))
    }

    pub fn scale(&self, by: &LaurentPoly) -> Self {
        let mut out = TensorVector::zero(self.m, self.n);
        for (i, c) in self.terms() {
            out.add_term(i, &(c * by));
        }
        out
    }

    /// Applies `op` to the adjacent factor pair at 1-based `pos`
    /// (positions `pos` and `pos + 1`).
    pub fn apply_at<R: PairMap + ?Sized>(&self, op: &R, pos: usize) -> Result<Self, TensorError> {
        if op.m() != self.m {
            return Err(TensorError::RankMismatch {
                op_m: op.m(),
                vec_m: self.m,
            });
        }
        if pos == 0 || pos + 1 > self.n {
            return Err(TensorError::PositionOutOfRange {
                pos,
                max: self.n.saturating_sub(1),
            });
        }
        let w1 = dim(self.m, self.n - pos);
        let w2 = w1 / self.m;
        let mut out = TensorVector::zero(self.m, self.n);
        for (idx, coeff) in self.terms() {
            let a = (idx / w1) % self.m + 1;
            let b = (idx / w2) % self.m + 1;
            let base = idx - (a - 1) * w1 - (b - 1) * w2;
            for ((c, d), rc) in op.image(a as u8, b as u8) {
                let target = base + (*c as usize - 1) * w1 + (*d as usize - 1) * w2;
                out.add_term(target, &(coeff * rc));
            }
        }
        Ok(out)
    }

    /// Forgets the first tensor factor (sums coefficients that collide).
    pub fn drop_first(&self) -> Result<Self, TensorError> {
        if self.n == 0 {
            return Err(TensorError::EmptyTensor);
        }
        let tail = dim(self.m, self.n - 1);
        let mut out = TensorVector::zero(self.m, self.n - 1);
        for (idx, coeff) in self.terms() {
            out.add_term(idx % tail, coeff);
        }
        Ok(out)
    }

    /// Forgets the last tensor factor.
    pub fn drop_last(&self) -> Result<Self, TensorError> {
        if self.n == 0 {
            return Err(TensorError::EmptyTensor);
        }
        let mut out = TensorVector::zero(self.m, self.n - 1);
        for (idx, coeff) in self.terms() {
            out.add_term(idx / self.m, coeff);
        }
        Ok(out)
    }
}

impl fmt::Display for TensorVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (idx, coeff)) in self.terms().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let t = BasisTuple::from_index(self.m, self.n, idx).unwrap();
            write!(f, "[{coeff}]*{t}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(m: usize, letters: &[u8]) -> BasisTuple {
        BasisTuple::new(m, letters.to_vec()).unwrap()
    }

    #[test]
    fn index_examples() {
        assert_eq!(t(3, &[1, 1, 1]).index(), 0);
        assert_eq!(t(3, &[1, 1, 2]).index(), 1);
        assert_eq!(t(3, &[2, 1, 1]).index(), 9);
        assert_eq!(t(3, &[3, 3, 3]).index(), 26);
        assert_eq!(t(2, &[2, 1]).index(), 2);
    }

    #[test]
    fn letter_bounds_checked() {
        assert!(BasisTuple::new(2, vec![1, 3]).is_err());
        assert!(BasisTuple::new(2, vec![0]).is_err());
        assert!(BasisTuple::from_index(2, 2, 4).is_err());
    }

    #[test]
    fn index_round_trip_exhaustive() {
        for m in 1..=4 {
            for n in 0..=4 {
                for (i, tuple) in BasisTuple::all(m, n).enumerate() {
                    assert_eq!(tuple.index(), i);
                    assert_eq!(BasisTuple::from_index(m, n, i).unwrap(), tuple);
                }
            }
        }
    }

    /// Swap-adjacent-factors operator, enough to exercise the action.
    struct Swap {
        m: usize,
        table: Vec<Vec<((u8, u8), LaurentPoly)>>,
    }

    impl Swap {
        fn new(m: usize) -> Self {
            let mut table = Vec::new();
            for a in 1..=m as u8 {
                for b in 1..=m as u8 {
                    table.push(vec![((b, a), LaurentPoly::one())]);
                }
            }
            Swap { m, table }
        }
    }

    impl PairMap for Swap {
        fn m(&self) -> usize {
            self.m
        }
        fn image(&self, a: u8, b: u8) -> &[((u8, u8), LaurentPoly)] {
            &self.table[(a as usize - 1) * self.m + (b as usize - 1)]
        }
    }

    #[test]
    fn apply_at_positions() {
        let op = Swap::new(3);
        let v = TensorVector::basis(&t(3, &[1, 2, 3]));
        let swapped = v.apply_at(&op, 1).unwrap();
        assert_eq!(swapped, TensorVector::basis(&t(3, &[2, 1, 3])));
        let swapped = v.apply_at(&op, 2).unwrap();
        assert_eq!(swapped, TensorVector::basis(&t(3, &[1, 3, 2])));
        assert!(v.apply_at(&op, 3).is_err());
        assert!(v.apply_at(&op, 0).is_err());
        assert!(v.apply_at(&Swap::new(2), 1).is_err());
    }

    #[test]
    fn far_commutativity_exhaustive() {
        // Positions 1 and 3 act on disjoint pairs of a 4-fold tensor.
        let op = Swap::new(2);
        for tuple in BasisTuple::all(2, 4) {
            let v = TensorVector::basis(&tuple);
            let ab = v.apply_at(&op, 1).unwrap().apply_at(&op, 3).unwrap();
            let ba = v.apply_at(&op, 3).unwrap().apply_at(&op, 1).unwrap();
            assert_eq!(ab, ba);
        }
    }

    #[test]
    fn drop_first_and_last() {
        let mut v = TensorVector::zero(2, 3);
        v.add_term(t(2, &[1, 2, 1]).index(), &LaurentPoly::one());
        v.add_term(t(2, &[2, 2, 1]).index(), &LaurentPoly::one());
        let first = v.drop_first().unwrap();
        // Both tuples end in (2,1); the coefficients collide and add up.
        assert_eq!(first.coeff(&t(2, &[2, 1])), LaurentPoly::int(2));
        let last = v.drop_last().unwrap();
        assert_eq!(last.coeff(&t(2, &[1, 2])), LaurentPoly::one());
        assert_eq!(last.coeff(&t(2, &[2, 2])), LaurentPoly::one());
        assert!(TensorVector::zero(2, 0).drop_last().is_err());
    }

    #[test]
    fn cancellation_drops_slots() {
        let mut v = TensorVector::zero(2, 2);
        let idx = t(2, &[1, 2]).index();
        v.add_term(idx, &LaurentPoly::int(3));
        v.add_term(idx, &LaurentPoly::int(-3));
        assert!(v.is_zero());
        assert_eq!(v.coeff(&t(2, &[1, 2])), LaurentPoly::zero());
    }
}

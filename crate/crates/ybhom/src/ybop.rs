//! The Yang-Baxter operators themselves: the column-unital family `R_(m)`
//! over `Q[y]`, its inverse, the Jones-type operator it normalizes to, an
//! identity operator, and a fixed 16x16 operator over `Q[q, q^-1]` whose
//! column normalization breaks the Yang-Baxter equation.
//!
//! An operator is stored column-wise: for each input basis pair `(a, b)` the
//! image `R(a (x) b)` as a sorted formal sum of output pairs. That is exactly
//! the [`PairMap`] shape the tensor machinery consumes, and it keeps the
//! sparsity of these operators (at most two terms per column) explicit.

use std::collections::BTreeMap;

use num::Zero;
use rayon::prelude::*;
use thiserror::Error;

use crate::ring::{one_minus_y2, rat_int, y2, LaurentPoly, Rational, RingError};
use crate::smith::PolyMatrix;
use crate::tensor::{dim, BasisTuple, PairMap, TensorError, TensorVector};

#[derive(Debug, Error)]
pub enum OpError {
    #[error("operator must act on at least one letter")]
    EmptyBasis,
    #[error("rank {0} exceeds the supported maximum of 255")]
    RankTooLarge(usize),
    #[error("column ({0},{1}) sums to zero at the evaluation point")]
    ZeroColumnSum(u8, u8),
    #[error("matrix is {rows} x {cols}, expected {expected} x {expected}")]
    MatrixShape {
        rows: usize,
        cols: usize,
        expected: usize,
    },
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

/// Point substitution for an operator's coefficients.
#[derive(Debug, Clone)]
pub enum Specialization {
    /// Substitute the variable itself.
    Var(Rational),
    /// Substitute the square of the variable; every exponent must be even.
    VarSquared(Rational),
}

/// Image of one basis pair: output pairs with their coefficients.
type PairImage = Vec<((u8, u8), LaurentPoly)>;

/// A linear endomorphism of `V (x) V` with `dim V = m`, stored column-wise
/// as images of basis pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct YBOperator {
    m: usize,
    var: char,
    entries: BTreeMap<(u8, u8), PairImage>,
}

impl PairMap for YBOperator {
    fn m(&self) -> usize {
        self.m
    }

    fn image(&self, a: u8, b: u8) -> &[((u8, u8), LaurentPoly)] {
        self.entries.get(&(a, b)).map(Vec::as_slice).unwrap_or(&[])
    }
}

/// Result of checking the Yang-Baxter equation on every basis triple.
#[derive(Debug, Clone)]
pub struct YBEReport {
    pub m: usize,
    pub triples_checked: usize,
    /// Basis triples where the two sides differ, in index order.
    pub failures: Vec<BasisTuple>,
}

impl YBEReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

impl YBOperator {
    fn build(
        m: usize,
        var: char,
        mut image: impl FnMut(u8, u8) -> PairImage,
    ) -> Result<Self, OpError> {
        if m == 0 {
            return Err(OpError::EmptyBasis);
        }
        if m > 255 {
            return Err(OpError::RankTooLarge(m));
        }
        let mut entries = BTreeMap::new();
        for a in 1..=m as u8 {
            for b in 1..=m as u8 {
                entries.insert((a, b), normalize_image(image(a, b), m)?);
            }
        }
        Ok(YBOperator { m, var, entries })
    }

    /// The column-unital operator over `Q[y]`: fixes `(a, a)`, swaps
    /// `(a, b)` when `a > b`, and sends `(a, b)` with `a < b` to
    /// `(1 - y^2) (a, b) + y^2 (b, a)`.
    pub fn homflypt(m: usize) -> Result<Self, OpError> {
        Self::build(m, 'y', |a, b| {
            if a == b {
                vec![((a, a), LaurentPoly::one())]
            } else if a > b {
                vec![((b, a), LaurentPoly::one())]
            } else {
                vec![((a, b), one_minus_y2()), ((b, a), y2())]
            }
        })
    }

    /// Two-sided inverse of [`YBOperator::homflypt`]; lives over
    /// `Q[y, y^-1]`.
    pub fn homflypt_inverse(m: usize) -> Result<Self, OpError> {
        let y_minus2 = LaurentPoly::monomial('y', -2, rat_int(1));
        let one_minus = &LaurentPoly::one() - &y_minus2;
        Self::build(m, 'y', |a, b| {
            if a == b {
                vec![((a, a), LaurentPoly::one())]
            } else if a < b {
                vec![((b, a), LaurentPoly::one())]
            } else {
                vec![((a, b), one_minus.clone()), ((b, a), y_minus2.clone())]
            }
        })
    }

    /// The Jones-type operator over `Q[q, q^-1]`: `-q` on `(a, a)`, a swap
    /// on `(a, b)` with `a > b`, and `(q^-1 - q) (a, b) + (b, a)` when
    /// `a < b`. Not column-unital; its column normalization at a point
    /// matches a specialization of [`YBOperator::homflypt`].
    pub fn jones(m: usize) -> Result<Self, OpError> {
        let minus_q = LaurentPoly::monomial('q', 1, rat_int(-1));
        let qinv_minus_q = LaurentPoly::from_terms('q', [(-1, rat_int(1)), (1, rat_int(-1))]);
        Self::build(m, 'q', |a, b| {
            if a == b {
                vec![((a, a), minus_q.clone())]
            } else if a > b {
                vec![((b, a), LaurentPoly::one())]
            } else {
                vec![((a, b), qinv_minus_q.clone()), ((b, a), LaurentPoly::one())]
            }
        })
    }

    pub fn identity(m: usize) -> Result<Self, OpError> {
        Self::build(m, 'y', |a, b| vec![((a, b), LaurentPoly::one())])
    }

    /// A fixed 16x16 operator over `Q[q, q^-1]` (a Kauffman-polynomial-type
    /// operator on four letters). It satisfies the Yang-Baxter equation, but
    /// unlike the Jones case its column normalization does not.
    pub fn kauffman() -> Result<Self, OpError> {
        Self::from_matrix_text(4, include_str!("../fixtures/kauffman_4x4.txt"))
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn var(&self) -> char {
        self.var
    }

    /// Matrix with columns indexed by input pairs, rows by output pairs,
    /// both in lexicographic order with the left letter most significant.
    pub fn matrix(&self) -> PolyMatrix {
        let d = self.m * self.m;
        let mut out = PolyMatrix::zeros(d, d);
        for (&(a, b), image) in &self.entries {
            let col = self.pair_index(a, b);
            for &((c, e), ref coeff) in image {
                out.set(self.pair_index(c, e), col, coeff.clone());
            }
        }
        out
    }

    fn pair_index(&self, a: u8, b: u8) -> usize {
        (a as usize - 1) * self.m + (b as usize - 1)
    }

    pub fn to_matrix_text(&self) -> String {
        self.matrix().to_rows_text()
    }

    /// Rebuild an operator from the `to_matrix_text` format. The variable is
    /// inferred from the entries ('y' if every entry is constant).
    pub fn from_matrix_text(m: usize, text: &str) -> Result<Self, OpError> {
        let mat = PolyMatrix::from_rows_text(text).map_err(OpError::Ring)?;
        Self::from_matrix(m, &mat)
    }

    pub fn from_matrix(m: usize, mat: &PolyMatrix) -> Result<Self, OpError> {
        if m == 0 {
            return Err(OpError::EmptyBasis);
        }
        if m > 255 {
            return Err(OpError::RankTooLarge(m));
        }
        let d = m * m;
        if mat.rows() != d || mat.cols() != d {
            return Err(OpError::MatrixShape {
                rows: mat.rows(),
                cols: mat.cols(),
                expected: d,
            });
        }
        let mut var = None;
        for r in 0..d {
            for c in 0..d {
                if let Some(v) = mat.at(r, c).var() {
                    var = Some(v);
                    break;
                }
            }
        }
        let letter = |i: usize| ((i / m) as u8 + 1, (i % m) as u8 + 1);
        Self::build(m, var.unwrap_or('y'), |a, b| {
            let col = (a as usize - 1) * m + (b as usize - 1);
            (0..d)
                .filter(|&r| !mat.at(r, col).is_zero())
                .map(|r| (letter(r), mat.at(r, col).clone()))
                .collect()
        })
    }

    /// Check `(R (x) I)(I (x) R)(R (x) I) = (I (x) R)(R (x) I)(I (x) R)` on
    /// every basis triple, in parallel.
    pub fn verify_ybe(&self) -> Result<YBEReport, OpError> {
        let total = dim(self.m, 3);
        let checked: Result<Vec<Option<BasisTuple>>, TensorError> = (0..total)
            .into_par_iter()
            .map(|i| {
                let t = BasisTuple::from_index(self.m, 3, i)?;
                let e = TensorVector::basis(&t);
                let lhs = e.apply_at(self, 1)?.apply_at(self, 2)?.apply_at(self, 1)?;
                let rhs = e.apply_at(self, 2)?.apply_at(self, 1)?.apply_at(self, 2)?;
                Ok((lhs != rhs).then_some(t))
            })
            .collect();
        Ok(YBEReport {
            m: self.m,
            triples_checked: total,
            failures: checked?.into_iter().flatten().collect(),
        })
    }

    /// Exact two-sided inverse check via the matrix products.
    pub fn verify_inverse(&self, other: &Self) -> bool {
        if self.m != other.m {
            return false;
        }
        let id = PolyMatrix::identity(self.m * self.m);
        let (a, b) = (self.matrix(), other.matrix());
        a.mul(&b) == id && b.mul(&a) == id
    }

    /// Per-column coefficient sums, in input-pair order.
    pub fn column_sums(&self) -> Vec<((u8, u8), LaurentPoly)> {
        self.entries
            .iter()
            .map(|(&pair, image)| {
                let mut s = LaurentPoly::zero();
                for (_, coeff) in image {
                    s = &s + coeff;
                }
                (pair, s)
            })
            .collect()
    }

    /// `true` when every column sums to the constant 1.
    pub fn is_column_unital(&self) -> bool {
        self.column_sums().iter().all(|(_, s)| s.is_one())
    }

    /// Evaluate at `point` and divide each column by its sum, producing a
    /// column-unital operator with constant entries.
    pub fn column_normalize_at(&self, point: &Rational) -> Result<Self, OpError> {
        let m = self.m;
        let mut columns: BTreeMap<(u8, u8), PairImage> = BTreeMap::new();
        for (&pair, image) in &self.entries {
            let vals: Vec<((u8, u8), Rational)> = image
                .iter()
                .map(|(out, coeff)| Ok((*out, coeff.eval(point)?)))
                .collect::<Result<_, RingError>>()?;
            let sum: Rational = vals.iter().map(|(_, v)| v.clone()).sum();
            if sum.is_zero() {
                return Err(OpError::ZeroColumnSum(pair.0, pair.1));
            }
            columns.insert(
                pair,
                vals.into_iter()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(out, v)| (out, LaurentPoly::constant(v / &sum)))
                    .collect(),
            );
        }
        Ok(YBOperator {
            m,
            var: self.var,
            entries: columns,
        })
    }

    /// Substitute a rational point for the variable (or its square),
    /// producing an operator with constant entries.
    pub fn specialize(&self, s: &Specialization) -> Result<Self, OpError> {
        let mut columns = BTreeMap::new();
        for (&pair, image) in &self.entries {
            let mut col = Vec::new();
            for (out, coeff) in image {
                let v = match s {
                    Specialization::Var(p) => coeff.eval(p)?,
                    Specialization::VarSquared(p) => coeff.eval_even(p)?,
                };
                if !v.is_zero() {
                    col.push((*out, LaurentPoly::constant(v)));
                }
            }
            columns.insert(pair, col);
        }
        Ok(YBOperator {
            m: self.m,
            var: self.var,
            entries: columns,
        })
    }

    /// The first point whose column sums are all nonzero, if any.
    pub fn first_usable_point(&self, points: &[Rational]) -> Result<Option<Rational>, OpError> {
        'next: for point in points {
            for image in self.entries.values() {
                let mut sum = Rational::zero();
                for (_, coeff) in image {
                    sum += coeff.eval(point)?;
                }
                if sum.is_zero() {
                    continue 'next;
                }
            }
            return Ok(Some(point.clone()));
        }
        Ok(None)
    }
}

fn normalize_image(raw: PairImage, m: usize) -> Result<PairImage, OpError> {
    let mut acc: BTreeMap<(u8, u8), LaurentPoly> = BTreeMap::new();
    for ((c, d), coeff) in raw {
        for letter in [c, d] {
            if letter == 0 || letter as usize > m {
                return Err(OpError::Tensor(TensorError::LetterOutOfRange { letter, m }));
            }
        }
        match acc.entry((c, d)) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let merged = e.get().checked_add(&coeff)?;
                *e.get_mut() = merged;
            }
        }
    }
    Ok(acc.into_iter().filter(|(_, c)| !c.is_zero()).collect())
}

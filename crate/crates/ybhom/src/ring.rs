//! Exact coefficient arithmetic: arbitrary-precision rationals and sparse
//! univariate Laurent polynomials over them.
//!
//! Polynomials are kept in canonical sparse form (no zero coefficients), so
//! equality is structural equality. A polynomial carries its variable tag
//! only when a term with nonzero exponent is present; constants are
//! variable-agnostic and mix freely with polynomials in any variable.
//!
//! Units of `Q[y, y^-1]` are the nonzero monomials `c*y^k`, and the exponent
//! span `delta = max_exp - min_exp` is a Euclidean measure on that ring. The
//! same division loop restricted to non-negative exponents is classical
//! division in `Q[y]`; [`RingMode`] selects between the two rings.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision rational, always reduced with positive denominator.
pub type Rational = BigRational;

/// Shorthand for small rational constants.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Shorthand for small integer constants.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("variable mismatch: `{0}` vs `{1}`")]
    VariableMismatch(char, char),
    #[error("division by the zero polynomial")]
    DivisionByZeroPoly,
    #[error("gcd of two zero polynomials")]
    BothZero,
    #[error("zero polynomial has no canonical associate")]
    ZeroInput,
    #[error("evaluation at zero with negative exponents present")]
    EvalAtZeroWithNegativeExponent,
    #[error("odd exponent present in an even-power substitution")]
    OddExponentPresent,
    #[error("parse error: {0}")]
    Parse(String),
}

/// Which ring the normal-form machinery works over.
///
/// `Poly` is `Q[y]`: units are nonzero constants, the Euclidean measure is
/// the degree, and the canonical associate is monic. `Laurent` is
/// `Q[y, y^-1]`: units are nonzero monomials, the measure is the exponent
/// span, and the canonical associate is monic with minimum exponent zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RingMode {
    Poly,
    Laurent,
}

impl RingMode {
    pub fn tag(self) -> &'static str {
        match self {
            RingMode::Poly => "qy",
            RingMode::Laurent => "laurent",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        match tag {
            "qy" => Some(RingMode::Poly),
            "laurent" => Some(RingMode::Laurent),
            _ => None,
        }
    }

    /// Ring membership: `Poly` rejects negative exponents.
    pub fn contains(self, p: &LaurentPoly) -> bool {
        match self {
            RingMode::Poly => p.min_exp().is_none_or(|e| e >= 0),
            RingMode::Laurent => true,
        }
    }

    /// Euclidean measure of a nonzero polynomial.
    pub fn measure(self, p: &LaurentPoly) -> Option<i64> {
        match self {
            RingMode::Poly => p.max_exp(),
            RingMode::Laurent => p.span(),
        }
    }

    pub fn is_unit(self, p: &LaurentPoly) -> bool {
        match self {
            RingMode::Poly => p.is_constant() && !p.is_zero(),
            RingMode::Laurent => p.is_monomial(),
        }
    }

    /// The unit `u` with `p = u * canonical(p)`, and its inverse.
    pub fn unit_part(self, p: &LaurentPoly) -> Result<(LaurentPoly, LaurentPoly), RingError> {
        if p.is_zero() {
            return Err(RingError::ZeroInput);
        }
        let lead = p.terms[&p.max_exp().unwrap()].clone();
        let shift = match self {
            RingMode::Poly => 0,
            RingMode::Laurent => p.min_exp().unwrap(),
        };
        let unit = LaurentPoly::monomial(p.var.unwrap_or('y'), shift, lead.clone());
        let inv = LaurentPoly::monomial(p.var.unwrap_or('y'), -shift, lead.recip());
        Ok((unit, inv))
    }

    /// Canonical associate of `p` in this ring.
    pub fn canonical(self, p: &LaurentPoly) -> Result<LaurentPoly, RingError> {
        let (_, inv) = self.unit_part(p)?;
        Ok(p.checked_mul(&inv).expect("unit shares the variable"))
    }

    /// Division with remainder; the remainder is zero or has strictly
    /// smaller measure than the divisor.
    pub fn divrem(
        self,
        a: &LaurentPoly,
        b: &LaurentPoly,
    ) -> Result<(LaurentPoly, LaurentPoly), RingError> {
        a.divrem_impl(b, self == RingMode::Laurent)
    }

    pub fn divides(self, d: &LaurentPoly, p: &LaurentPoly) -> Result<bool, RingError> {
        Ok(self.divrem(p, d)?.1.is_zero())
    }

    /// Euclidean gcd, returned as the canonical associate for this ring.
    pub fn gcd(self, a: &LaurentPoly, b: &LaurentPoly) -> Result<LaurentPoly, RingError> {
        if a.is_zero() && b.is_zero() {
            return Err(RingError::BothZero);
        }
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let (_, r) = self.divrem(&x, &y)?;
            x = y;
            y = r;
        }
        self.canonical(&x)
    }
}

/// Sparse Laurent polynomial with exact rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    var: Option<char>,
    terms: BTreeMap<i64, Rational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(0, c);
        }
        LaurentPoly { var: None, terms }
    }

    pub fn int(n: i64) -> Self {
        Self::constant(rat_int(n))
    }

    pub fn monomial(var: char, exp: i64, coeff: Rational) -> Self {
        let mut p = LaurentPoly::zero();
        if !coeff.is_zero() {
            p.terms.insert(exp, coeff);
            if exp != 0 {
                p.var = Some(var);
            }
        }
        p
    }

    pub fn variable(var: char) -> Self {
        Self::monomial(var, 1, Rational::one())
    }

    /// Builds a polynomial from (exponent, coefficient) pairs, summing
    /// duplicates and dropping zeros.
    pub fn from_terms(var: char, terms: impl IntoIterator<Item = (i64, Rational)>) -> Self {
        let mut p = LaurentPoly::zero();
        for (exp, coeff) in terms {
            let entry = p.terms.entry(exp).or_insert_with(Rational::zero);
            *entry += coeff;
            if entry.is_zero() {
                p.terms.remove(&exp);
            }
        }
        p.fix_var(Some(var));
        p
    }

    fn fix_var(&mut self, hint: Option<char>) {
        let needs_var = self.terms.keys().any(|&k| k != 0);
        self.var = if needs_var { self.var.or(hint) } else { None };
        debug_assert!(!needs_var || self.var.is_some());
    }

    pub fn var(&self) -> Option<char> {
        self.var
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.is_constant() && self.coeff(0).is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.var.is_none()
    }

    /// The constant value, if the polynomial is one.
    pub fn as_constant(&self) -> Option<Rational> {
        if self.is_constant() {
            Some(self.coeff(0))
        } else {
            None
        }
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Exponent span `max_exp - min_exp`; `None` for the zero polynomial.
    pub fn span(&self) -> Option<i64> {
        Some(self.max_exp()? - self.min_exp()?)
    }

    pub fn coeff(&self, exp: i64) -> Rational {
        self.terms.get(&exp).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> {
        self.terms.iter().map(|(&k, c)| (k, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn unified_var(&self, rhs: &Self) -> Result<Option<char>, RingError> {
        match (self.var, rhs.var) {
            (Some(a), Some(b)) if a != b => Err(RingError::VariableMismatch(a, b)),
            (a, b) => Ok(a.or(b)),
        }
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self, RingError> {
        let var = self.unified_var(rhs)?;
        let mut out = self.clone();
        out.var = var;
        for (&exp, coeff) in &rhs.terms {
            let entry = out.terms.entry(exp).or_insert_with(Rational::zero);
            *entry += coeff;
            if entry.is_zero() {
                out.terms.remove(&exp);
            }
        }
        out.fix_var(var);
        Ok(out)
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self, RingError> {
        self.checked_add(&rhs.clone().neg())
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self, RingError> {
        let var = self.unified_var(rhs)?;
        let mut out = LaurentPoly::zero();
        for (&ka, ca) in &self.terms {
            for (&kb, cb) in &rhs.terms {
                let entry = out.terms.entry(ka + kb).or_insert_with(Rational::zero);
                *entry += ca * cb;
                if entry.is_zero() {
                    out.terms.remove(&(ka + kb));
                }
            }
        }
        out.fix_var(var);
        Ok(out)
    }

    /// In-place `self -= q * p`, used heavily by row reduction.
    pub fn sub_mul_assign(&mut self, q: &Self, p: &Self) {
        let var = q
            .unified_var(p)
            .and_then(|v| {
                self.unified_var(&LaurentPoly {
                    var: v,
                    terms: BTreeMap::new(),
                })
            })
            .expect("variable mismatch");
        for (&kq, cq) in &q.terms {
            for (&kp, cp) in &p.terms {
                let exp = kq + kp;
                let entry = self.terms.entry(exp).or_insert_with(Rational::zero);
                *entry -= cq * cp;
                if entry.is_zero() {
                    self.terms.remove(&exp);
                }
            }
        }
        self.fix_var(var);
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        let mut out = self.clone();
        for coeff in out.terms.values_mut() {
            *coeff *= c;
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = LaurentPoly::one();
        for _ in 0..n {
            out = out.checked_mul(self).expect("same variable");
        }
        out
    }

    /// Division with remainder.
    ///
    /// The remainder is zero or has exponent span strictly smaller than the
    /// divisor's, which makes the span a Euclidean measure on `Q[y, y^-1]`;
    /// division by a monomial is always exact. On `Q[y]` inputs with
    /// comparable degrees this coincides with classical polynomial division.
    pub fn divrem(&self, divisor: &Self) -> Result<(Self, Self), RingError> {
        self.divrem_impl(divisor, true)
    }

    /// Top-term cancellation loop. With `laurent` the loop keeps going while
    /// either the span or the top exponent dominates (quotients may pick up
    /// negative exponents); without it the loop is classical `Q[y]` division
    /// driven by degree alone.
    fn divrem_impl(&self, divisor: &Self, laurent: bool) -> Result<(Self, Self), RingError> {
        if divisor.is_zero() {
            return Err(RingError::DivisionByZeroPoly);
        }
        let var = self.unified_var(divisor)?;
        let b_max = divisor.max_exp().unwrap();
        let b_span = divisor.span().unwrap();
        let b_lead = divisor.terms[&b_max].clone();
        let mut rem = self.clone();
        rem.var = var;
        let mut quot = LaurentPoly::zero();
        while !rem.is_zero() {
            let r_max = rem.max_exp().unwrap();
            let r_span = rem.span().unwrap();
            let go = if laurent {
                r_span >= b_span || r_max >= b_max
            } else {
                r_max >= b_max
            };
            if !go {
                break;
            }
            let t_exp = r_max - b_max;
            let t_coeff = &rem.terms[&r_max] / &b_lead;
            let t = LaurentPoly::monomial(var.unwrap_or('y'), t_exp, t_coeff);
            rem.sub_mul_assign(&t, divisor);
            quot = quot.checked_add(&t)?;
        }
        Ok((quot, rem))
    }

    /// True when `d` divides `self` in the Laurent ring.
    pub fn is_divisible_by(&self, d: &Self) -> Result<bool, RingError> {
        Ok(self.divrem(d)?.1.is_zero())
    }

    /// Euclidean gcd in the Laurent ring, canonical associate.
    pub fn gcd(a: &Self, b: &Self) -> Result<Self, RingError> {
        RingMode::Laurent.gcd(a, b)
    }

    /// Canonical associate in the Laurent ring: monic, minimum exponent 0,
    /// nonzero constant term.
    pub fn canonical(&self) -> Result<Self, RingError> {
        RingMode::Laurent.canonical(self)
    }

    /// Evaluates at a rational point.
    pub fn eval(&self, point: &Rational) -> Result<Rational, RingError> {
        if point.is_zero() && self.min_exp().is_some_and(|e| e < 0) {
            return Err(RingError::EvalAtZeroWithNegativeExponent);
        }
        let mut acc = Rational::zero();
        for (&exp, coeff) in &self.terms {
            let power = if exp == 0 {
                Rational::one()
            } else {
                point.pow(i32::try_from(exp).expect("exponent fits in i32"))
            };
            acc += coeff * power;
        }
        Ok(acc)
    }

    /// Substitutes the *square* of the variable: every exponent must be even
    /// and `y^(2k)` becomes `square^k`.
    pub fn eval_even(&self, square: &Rational) -> Result<Rational, RingError> {
        if self.terms.keys().any(|&k| k % 2 != 0) {
            return Err(RingError::OddExponentPresent);
        }
        if square.is_zero() && self.min_exp().is_some_and(|e| e < 0) {
            return Err(RingError::EvalAtZeroWithNegativeExponent);
        }
        let mut acc = Rational::zero();
        for (&exp, coeff) in &self.terms {
            let power = if exp == 0 {
                Rational::one()
            } else {
                square.pow(i32::try_from(exp / 2).expect("exponent fits in i32"))
            };
            acc += coeff * power;
        }
        Ok(acc)
    }

    /// Sign-adjusted associate with a positive lowest coefficient; e.g. the
    /// canonical `y^2 - 1` reads back as `1 - y^2`.
    pub fn pretty(&self) -> Self {
        match self.min_exp() {
            Some(e) if self.terms[&e].is_negative() => self.clone().neg(),
            _ => self.clone(),
        }
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (&exp, coeff)) in self.terms.iter().enumerate() {
            if i == 0 {
                if coeff.is_negative() {
                    write!(f, "-")?;
                }
            } else if coeff.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = coeff.abs();
            if exp == 0 {
                write!(f, "{mag}")?;
            } else {
                write!(f, "{}*{}^{}", mag, self.var.unwrap(), exp)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for LaurentPoly {
    type Err = RingError;

    fn from_str(s: &str) -> Result<Self, RingError> {
        let s = s.trim();
        if s.is_empty() {
            return Err(RingError::Parse("empty input".into()));
        }
        if s == "0" {
            return Ok(LaurentPoly::zero());
        }
        let mut var: Option<char> = None;
        let mut terms: Vec<(i64, Rational)> = Vec::new();
        let mut rest = s;
        let mut sign = 1i64;
        if let Some(r) = rest.strip_prefix('-') {
            sign = -1;
            rest = r;
        }
        loop {
            let plus = rest.find(" + ");
            let minus = rest.find(" - ");
            let (chunk, next) = match (plus, minus) {
                (None, None) => (rest, None),
                (Some(p), None) => (&rest[..p], Some((1, &rest[p + 3..]))),
                (None, Some(m)) => (&rest[..m], Some((-1, &rest[m + 3..]))),
                (Some(p), Some(m)) if p < m => (&rest[..p], Some((1, &rest[p + 3..]))),
                (_, Some(m)) => (&rest[..m], Some((-1, &rest[m + 3..]))),
            };
            let (exp, coeff) = parse_term(chunk, &mut var)?;
            terms.push((exp, if sign < 0 { -coeff } else { coeff }));
            match next {
                Some((sg, r)) => {
                    sign = sg;
                    rest = r;
                }
                None => break,
            }
        }
        Ok(LaurentPoly::from_terms(var.unwrap_or('y'), terms))
    }
}

fn parse_term(chunk: &str, var: &mut Option<char>) -> Result<(i64, Rational), RingError> {
    let bad = |what: &str| RingError::Parse(format!("{what} in term `{chunk}`"));
    match chunk.split_once('*') {
        None => {
            let coeff =
                Rational::from_str(chunk).map_err(|_| bad("invalid rational coefficient"))?;
            Ok((0, coeff))
        }
        Some((c, vp)) => {
            let coeff = Rational::from_str(c).map_err(|_| bad("invalid rational coefficient"))?;
            let mut chars = vp.chars();
            let v = chars.next().ok_or_else(|| bad("missing variable"))?;
            if !v.is_ascii_alphabetic() {
                return Err(bad("variable must be a letter"));
            }
            match var {
                Some(seen) if *seen != v => {
                    return Err(RingError::VariableMismatch(*seen, v));
                }
                _ => *var = Some(v),
            }
            let rest = chars.as_str();
            let exp_str = rest
                .strip_prefix('^')
                .ok_or_else(|| bad("missing `^exponent`"))?;
            let exp = exp_str
                .parse::<i64>()
                .map_err(|_| bad("invalid exponent"))?;
            Ok((exp, coeff))
        }
    }
}

impl Ord for LaurentPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.span()
            .cmp(&other.span())
            .then_with(|| self.terms.cmp(&other.terms))
            .then_with(|| self.var.cmp(&other.var))
    }
}

impl PartialOrd for LaurentPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(mut self) -> LaurentPoly {
        for coeff in self.terms.values_mut() {
            *coeff = -coeff.clone();
        }
        self
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.clone().neg()
    }
}

impl Add<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_add(rhs).expect("variable mismatch")
    }
}

impl Sub<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_sub(rhs).expect("variable mismatch")
    }
}

impl Mul<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_mul(rhs).expect("variable mismatch")
    }
}

macro_rules! forward_binop {
    ($imp:ident, $method:ident) => {
        impl $imp<LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$method(&rhs)
            }
        }
        impl $imp<&LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: &LaurentPoly) -> LaurentPoly {
                (&self).$method(rhs)
            }
        }
        impl $imp<LaurentPoly> for &LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl SubAssign<&LaurentPoly> for LaurentPoly {
    fn sub_assign(&mut self, rhs: &LaurentPoly) {
        let var = self.unified_var(rhs).expect("variable mismatch");
        for (&exp, coeff) in &rhs.terms {
            let entry = self.terms.entry(exp).or_insert_with(Rational::zero);
            *entry -= coeff;
            if entry.is_zero() {
                self.terms.remove(&exp);
            }
        }
        self.fix_var(var);
    }
}

/// `1 - y^2`, the coefficient that drives `R_(m)` and annihilates the first
/// torsion block.
pub fn one_minus_y2() -> LaurentPoly {
    LaurentPoly::from_terms('y', [(0, rat_int(1)), (2, rat_int(-1))])
}

/// `y^2` as a polynomial in `y`.
pub fn y2() -> LaurentPoly {
    LaurentPoly::monomial('y', 2, rat_int(1))
}

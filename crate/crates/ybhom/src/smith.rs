//! Exact sparse linear algebra over `Q[y]` and `Q[y, y^-1]`: Smith normal
//! form with optional unimodular transforms, saturated kernel bases, and
//! quotient-module presentations.
//!
//! Both rings are Euclidean (see [`RingMode`]), so one elimination kernel
//! serves both; the mode only changes the measure, the units, and which
//! division is used. Pivots are chosen by minimal `(measure, coefficient
//! bit-size, row, col)`, which keeps intermediate coefficient growth in
//! check and makes every run deterministic.
//!
//! [`minors_gcd_invariant_factors`] recomputes invariant factors from gcds
//! of `k x k` minors. It is deliberately independent of the elimination path
//! (no shared code beyond polynomial arithmetic) and exists as a cross-check
//! oracle; keep it that way.

use rayon::prelude::*;
use thiserror::Error;

use crate::ring::{LaurentPoly, RingError, RingMode};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SmithError {
    #[error("matrix entry outside the requested ring (negative exponent in Q[y] mode)")]
    UnsupportedRing,
    #[error("vector is not in the span of the kernel basis")]
    NotInSpan,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// Dense row-major matrix of Laurent polynomials. Zero entries are the empty
/// polynomial, so sparse matrices stay cheap to scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<LaurentPoly>>,
}

impl PolyMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        PolyMatrix {
            rows,
            cols,
            data: (0..rows).map(|_| vec![LaurentPoly::zero(); cols]).collect(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = LaurentPoly::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<LaurentPoly>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        PolyMatrix {
            rows: r,
            cols: c,
            data: rows,
        }
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> LaurentPoly,
    ) -> Self {
        let data = (0..rows)
            .map(|r| (0..cols).map(|c| f(r, c)).collect())
            .collect();
        PolyMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &LaurentPoly {
        &self.data[r][c]
    }

    pub fn set(&mut self, r: usize, c: usize, p: LaurentPoly) {
        self.data[r][c] = p;
    }

    pub fn is_zero(&self) -> bool {
        self.data
            .iter()
            .all(|row| row.iter().all(LaurentPoly::is_zero))
    }

    pub fn nnz(&self) -> usize {
        self.data
            .iter()
            .map(|row| row.iter().filter(|p| !p.is_zero()).count())
            .sum()
    }

    pub fn column(&self, c: usize) -> Vec<LaurentPoly> {
        (0..self.rows).map(|r| self.data[r][c].clone()).collect()
    }

    /// Laplace-expansion determinant: exponential, intended for small
    /// matrices and cross-checks only.
    pub fn determinant(&self) -> LaurentPoly {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let idx: Vec<usize> = (0..self.rows).collect();
        det_laplace(self, &idx, &idx)
    }

    /// Sparse-aware product, parallel over result rows.
    pub fn mul(&self, rhs: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in matrix product");
        let mut out = PolyMatrix::zeros(self.rows, rhs.cols);
        out.data
            .par_iter_mut()
            .enumerate()
            .for_each(|(r, out_row)| {
                for (k, a) in self.data[r].iter().enumerate() {
                    if a.is_zero() {
                        continue;
                    }
                    let na = -a;
                    for (j, b) in rhs.data[k].iter().enumerate() {
                        if !b.is_zero() {
                            out_row[j].sub_mul_assign(&na, b);
                        }
                    }
                }
            });
        out
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[LaurentPoly]) -> Vec<LaurentPoly> {
        assert_eq!(
            self.cols,
            v.len(),
            "shape mismatch in matrix-vector product"
        );
        self.data
            .iter()
            .map(|row| {
                let mut acc = LaurentPoly::zero();
                for (a, b) in row.iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc.sub_mul_assign(&(-a), b);
                    }
                }
                acc
            })
            .collect()
    }

    /// One line per row, entries in the textual polynomial format separated
    /// by `;`.
    pub fn to_rows_text(&self) -> String {
        let mut out = String::new();
        for row in &self.data {
            let line: Vec<String> = row.iter().map(|p| p.to_string()).collect();
            out.push_str(&line.join(";"));
            out.push('\n');
        }
        out
    }

    pub fn from_rows_text(text: &str) -> Result<Self, RingError> {
        let mut rows: Vec<Vec<LaurentPoly>> = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let row: Result<Vec<LaurentPoly>, RingError> =
                line.split(';').map(|e| e.trim().parse()).collect();
            rows.push(row?);
        }
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(RingError::Parse("ragged matrix rows".into()));
        }
        Ok(Self::from_rows(rows))
    }
}

/// Outcome of a Smith normal form computation. When transforms are requested,
/// `u * input * v = diag(invariant_factors)` with `u`, `v` unimodular, and
/// `v_inv` is the exact inverse of `v`.
#[derive(Debug, Clone)]
pub struct SnfResult {
    pub invariant_factors: Vec<LaurentPoly>,
    pub u: Option<PolyMatrix>,
    pub v: Option<PolyMatrix>,
    pub v_inv: Option<PolyMatrix>,
}

impl SnfResult {
    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }

    /// Invariant factors that are not units (the torsion part).
    pub fn torsion(&self, mode: RingMode) -> Vec<LaurentPoly> {
        self.invariant_factors
            .iter()
            .filter(|p| !mode.is_unit(p))
            .cloned()
            .collect()
    }
}

struct Eliminator {
    m: PolyMatrix,
    mode: RingMode,
    u: Option<PolyMatrix>,
    v: Option<PolyMatrix>,
    vinv: Option<PolyMatrix>,
}

const PAR_THRESHOLD: usize = 4096;

fn coeff_bits(p: &LaurentPoly) -> u64 {
    p.terms()
        .map(|(_, c)| c.numer().bits() + c.denom().bits())
        .sum()
}

fn two_rows_mut(
    data: &mut [Vec<LaurentPoly>],
    a: usize,
    b: usize,
) -> (&mut Vec<LaurentPoly>, &mut Vec<LaurentPoly>) {
    assert_ne!(a, b);
    if a < b {
        let (lo, hi) = data.split_at_mut(b);
        (&mut lo[a], &mut hi[0])
    } else {
        let (lo, hi) = data.split_at_mut(a);
        (&mut hi[0], &mut lo[b])
    }
}

impl Eliminator {
    fn new(input: &PolyMatrix, mode: RingMode, transforms: bool) -> Result<Self, SmithError> {
        if mode == RingMode::Poly {
            for row in &input.data {
                for p in row {
                    if !mode.contains(p) {
                        return Err(SmithError::UnsupportedRing);
                    }
                }
            }
        }
        Ok(Eliminator {
            m: input.clone(),
            mode,
            u: transforms.then(|| PolyMatrix::identity(input.rows)),
            v: transforms.then(|| PolyMatrix::identity(input.cols)),
            vinv: transforms.then(|| PolyMatrix::identity(input.cols)),
        })
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        self.m.data.swap(a, b);
        if let Some(u) = &mut self.u {
            u.data.swap(a, b);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for row in &mut self.m.data {
            row.swap(a, b);
        }
        if let Some(v) = &mut self.v {
            for row in &mut v.data {
                row.swap(a, b);
            }
        }
        if let Some(vinv) = &mut self.vinv {
            vinv.data.swap(a, b);
        }
    }

    /// `row_r -= q_r * row_t` for every `(r, Some(q_r))`, in parallel when
    /// the amount of work justifies it.
    fn apply_row_updates(mat: &mut PolyMatrix, t: usize, quotients: &[Option<LaurentPoly>]) {
        let row_t = std::mem::take(&mut mat.data[t]);
        let nz: Vec<(usize, &LaurentPoly)> = row_t
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .collect();
        let work: usize = quotients.iter().flatten().count() * nz.len().max(1);
        let apply = |(r, row): (usize, &mut Vec<LaurentPoly>)| {
            if let Some(q) = quotients.get(r).and_then(|q| q.as_ref()) {
                for (c, p) in &nz {
                    row[*c].sub_mul_assign(q, p);
                }
            }
        };
        if work >= PAR_THRESHOLD {
            mat.data.par_iter_mut().enumerate().for_each(apply);
        } else {
            mat.data.iter_mut().enumerate().for_each(apply);
        }
        mat.data[t] = row_t;
    }

    /// `col_c -= q * col_t` on the working matrix and `v`; the inverse row
    /// operations accumulate on `vinv`.
    fn col_updates(&mut self, t: usize, quotients: &[(usize, LaurentPoly)]) {
        for mat in [Some(&mut self.m), self.v.as_mut()].into_iter().flatten() {
            let work = quotients.len() * mat.rows;
            let apply = |row: &mut Vec<LaurentPoly>| {
                if row[t].is_zero() {
                    return;
                }
                let pivot_entry = row[t].clone();
                for (c, q) in quotients {
                    row[*c].sub_mul_assign(q, &pivot_entry);
                }
            };
            if work >= PAR_THRESHOLD {
                mat.data.par_iter_mut().for_each(apply);
            } else {
                mat.data.iter_mut().for_each(apply);
            }
        }
        if let Some(vinv) = &mut self.vinv {
            for (c, q) in quotients {
                let nq = -q;
                let (row_t, row_c) = two_rows_mut(&mut vinv.data, t, *c);
                for (dst, src) in row_t.iter_mut().zip(row_c.iter()) {
                    if !src.is_zero() {
                        dst.sub_mul_assign(&nq, src);
                    }
                }
            }
        }
    }

    fn add_row(&mut self, dst: usize, src: usize) {
        let minus_one = LaurentPoly::int(-1);
        let mut quots = vec![None; self.m.rows];
        quots[dst] = Some(minus_one.clone());
        Self::apply_row_updates(&mut self.m, src, &quots);
        if let Some(u) = &mut self.u {
            Self::apply_row_updates(u, src, &quots);
        }
    }

    fn scale_row(&mut self, r: usize, by: &LaurentPoly) {
        for p in &mut self.m.data[r] {
            if !p.is_zero() {
                *p = &*p * by;
            }
        }
        if let Some(u) = &mut self.u {
            for p in &mut u.data[r] {
                if !p.is_zero() {
                    *p = &*p * by;
                }
            }
        }
    }

    fn find_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(i64, u64, usize, usize)> = None;
        for r in t..self.m.rows {
            for c in t..self.m.cols {
                let p = &self.m.data[r][c];
                if p.is_zero() {
                    continue;
                }
                let key = (self.mode.measure(p).unwrap(), coeff_bits(p), r, c);
                if p.num_terms() == 1 && key.0 == 0 && key.1 == 2 {
                    return Some((r, c));
                }
                if best.is_none_or(|b| key < b) {
                    best = Some(key);
                }
            }
        }
        best.map(|(_, _, r, c)| (r, c))
    }

    /// Euclidean clearing loop: reduce column `t` with row operations and row
    /// `t` with column operations, swapping strictly smaller remainders into
    /// the pivot slot until both are clear.
    fn clear_pivot(&mut self, t: usize) -> Result<(), SmithError> {
        loop {
            // Column t.
            let pivot = self.m.data[t][t].clone();
            debug_assert!(!pivot.is_zero());
            let mut quots: Vec<Option<LaurentPoly>> = vec![None; self.m.rows];
            let mut best: Option<(i64, u64, usize)> = None;
            let mut any = false;
            for (r, slot) in quots.iter_mut().enumerate() {
                if r == t || self.m.data[r][t].is_zero() {
                    continue;
                }
                let (q, rem) = self.mode.divrem(&self.m.data[r][t], &pivot)?;
                if !rem.is_zero() {
                    let key = (self.mode.measure(&rem).unwrap(), coeff_bits(&rem), r);
                    if best.is_none_or(|b| key < b) {
                        best = Some(key);
                    }
                }
                if !q.is_zero() {
                    *slot = Some(q);
                    any = true;
                }
            }
            if any {
                Self::apply_row_updates(&mut self.m, t, &quots);
                if let Some(u) = &mut self.u {
                    Self::apply_row_updates(u, t, &quots);
                }
            }
            if let Some((_, _, r)) = best {
                self.swap_rows(t, r);
                continue;
            }
            // Row t. The column is clear now, so these operations only touch
            // row t of the working matrix, but v / vinv see full updates.
            let pivot = self.m.data[t][t].clone();
            let mut quots: Vec<(usize, LaurentPoly)> = Vec::new();
            let mut best: Option<(i64, u64, usize)> = None;
            for c in 0..self.m.cols {
                if c == t || self.m.data[t][c].is_zero() {
                    continue;
                }
                let (q, rem) = self.mode.divrem(&self.m.data[t][c], &pivot)?;
                if !rem.is_zero() {
                    let key = (self.mode.measure(&rem).unwrap(), coeff_bits(&rem), c);
                    if best.is_none_or(|b| key < b) {
                        best = Some(key);
                    }
                }
                if !q.is_zero() {
                    quots.push((c, q));
                }
            }
            if !quots.is_empty() {
                self.col_updates(t, &quots);
            }
            if let Some((_, _, c)) = best {
                self.swap_cols(t, c);
                continue;
            }
            return Ok(());
        }
    }

    fn canonicalize_pivot(&mut self, t: usize) -> Result<(), SmithError> {
        let (unit, inv) = self.mode.unit_part(&self.m.data[t][t])?;
        if !unit.is_one() {
            self.scale_row(t, &inv);
        }
        Ok(())
    }
}

/// Smith normal form over the ring selected by `mode`.
pub fn snf(input: &PolyMatrix, mode: RingMode, transforms: bool) -> Result<SnfResult, SmithError> {
    let mut e = Eliminator::new(input, mode, transforms)?;
    let lim = e.m.rows.min(e.m.cols);
    let mut rank = 0;
    while rank < lim {
        let Some((pr, pc)) = e.find_pivot(rank) else {
            break;
        };
        e.swap_rows(rank, pr);
        e.swap_cols(rank, pc);
        e.clear_pivot(rank)?;
        e.canonicalize_pivot(rank)?;
        rank += 1;
    }
    // Divisibility chain closure: a gcd/lcm fix for every diagonal pair that
    // violates d_i | d_j, repeated to a fixed point.
    loop {
        let mut changed = false;
        for i in 0..rank {
            for j in (i + 1)..rank {
                let (di, dj) = (e.m.data[i][i].clone(), e.m.data[j][j].clone());
                if mode.divides(&di, &dj)? {
                    continue;
                }
                e.add_row(i, j);
                e.clear_pivot(i)?;
                e.canonicalize_pivot(i)?;
                e.canonicalize_pivot(j)?;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let invariant_factors = (0..rank).map(|i| e.m.data[i][i].clone()).collect();
    Ok(SnfResult {
        invariant_factors,
        u: e.u,
        v: e.v,
        v_inv: e.vinv,
    })
}

/// A saturated basis of the kernel of a matrix, with enough of the transform
/// kept around to compute exact coordinates in it.
#[derive(Debug, Clone)]
pub struct KernelBasis {
    basis: PolyMatrix,
    vinv: PolyMatrix,
    rank: usize,
    mode: RingMode,
}

impl KernelBasis {
    /// Ambient dimension (length of the kernel vectors).
    pub fn ambient_dim(&self) -> usize {
        self.basis.rows()
    }

    /// Number of basis vectors.
    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    /// Rank of the matrix whose kernel this is.
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn mode(&self) -> RingMode {
        self.mode
    }

    pub fn basis_matrix(&self) -> &PolyMatrix {
        &self.basis
    }

    pub fn basis_vector(&self, j: usize) -> Vec<LaurentPoly> {
        self.basis.column(j)
    }
}

/// Kernel of `input` as a saturated (direct-summand) basis: the columns of
/// the unimodular `V` that map onto zero diagonal slots of the normal form.
pub fn kernel_basis(input: &PolyMatrix, mode: RingMode) -> Result<KernelBasis, SmithError> {
    let res = snf(input, mode, true)?;
    let rank = res.rank();
    let v = res.v.expect("transforms requested");
    let vinv = res.v_inv.expect("transforms requested");
    let nullity = input.cols() - rank;
    let basis = PolyMatrix::from_fn(input.cols(), nullity, |r, j| v.at(r, rank + j).clone());
    Ok(KernelBasis {
        basis,
        vinv,
        rank,
        mode,
    })
}

/// Exact coordinates of `w` in the kernel basis; fails with `NotInSpan` when
/// `w` is not a ring-linear combination of the basis vectors.
pub fn coords_in_basis(
    kb: &KernelBasis,
    w: &[LaurentPoly],
) -> Result<Vec<LaurentPoly>, SmithError> {
    if w.len() != kb.ambient_dim() {
        return Err(SmithError::ShapeMismatch(format!(
            "vector length {} vs ambient dimension {}",
            w.len(),
            kb.ambient_dim()
        )));
    }
    let y = kb.vinv.mul_vec(w);
    if y[..kb.rank].iter().any(|p| !p.is_zero()) {
        return Err(SmithError::NotInSpan);
    }
    Ok(y[kb.rank..].to_vec())
}

/// Presentation of the quotient `span(kernel) / span(image columns)`: the
/// Smith normal form of the coordinate matrix of the image in the kernel
/// basis. The quotient module is `R^(dim - rank)` plus one cyclic summand
/// per non-unit invariant factor.
pub fn quotient_presentation(
    kb: &KernelBasis,
    image: &PolyMatrix,
) -> Result<SnfResult, SmithError> {
    if image.rows() != kb.ambient_dim() {
        return Err(SmithError::ShapeMismatch(format!(
            "image lives in dimension {} but the kernel is in dimension {}",
            image.rows(),
            kb.ambient_dim()
        )));
    }
    let y = kb.vinv.mul(image);
    for r in 0..kb.rank {
        for c in 0..y.cols() {
            if !y.at(r, c).is_zero() {
                return Err(SmithError::NotInSpan);
            }
        }
    }
    // Coordinates of the image columns; duplicate and zero generator columns
    // are redundant for the span, so drop them before the expensive part.
    let coords = PolyMatrix::from_fn(kb.dim(), y.cols(), |r, c| y.at(kb.rank + r, c).clone());
    let mut seen: std::collections::BTreeSet<Vec<String>> = std::collections::BTreeSet::new();
    let mut keep: Vec<usize> = Vec::new();
    for c in 0..coords.cols() {
        let col = coords.column(c);
        if col.iter().all(LaurentPoly::is_zero) {
            continue;
        }
        let key: Vec<String> = col.iter().map(|p| p.to_string()).collect();
        if seen.insert(key) {
            keep.push(c);
        }
    }
    let deduped = PolyMatrix::from_fn(kb.dim(), keep.len(), |r, j| coords.at(r, keep[j]).clone());
    snf(&deduped, kb.mode, false)
}

/// Independent invariant-factor oracle: `d_k = G_k / G_(k-1)` where `G_k` is
/// the gcd of all `k x k` minors (Laplace-expansion determinants). Exponential
/// in the matrix size; only use on small matrices.
pub fn minors_gcd_invariant_factors(
    input: &PolyMatrix,
    mode: RingMode,
) -> Result<Vec<LaurentPoly>, SmithError> {
    if mode == RingMode::Poly {
        for r in 0..input.rows() {
            for c in 0..input.cols() {
                if !mode.contains(input.at(r, c)) {
                    return Err(SmithError::UnsupportedRing);
                }
            }
        }
    }
    let n = input.rows().min(input.cols());
    let mut factors = Vec::new();
    let mut prev = LaurentPoly::one();
    for k in 1..=n {
        let mut gcd: Option<LaurentPoly> = None;
        for rows in combinations(input.rows(), k) {
            for cols in combinations(input.cols(), k) {
                let d = det_laplace(input, &rows, &cols);
                if d.is_zero() {
                    continue;
                }
                gcd = Some(match gcd {
                    None => mode.canonical(&d)?,
                    Some(g) => mode.gcd(&g, &d)?,
                });
            }
        }
        let Some(g) = gcd else {
            break; // all k x k minors vanish: rank < k
        };
        let (q, r) = mode.divrem(&g, &prev)?;
        debug_assert!(r.is_zero(), "G_(k-1) divides G_k");
        factors.push(mode.canonical(&q)?);
        prev = g;
    }
    Ok(factors)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

fn det_laplace(m: &PolyMatrix, rows: &[usize], cols: &[usize]) -> LaurentPoly {
    if rows.is_empty() {
        return LaurentPoly::one();
    }
    let r = rows[0];
    let mut acc = LaurentPoly::zero();
    for (i, &c) in cols.iter().enumerate() {
        let e = m.at(r, c);
        if e.is_zero() {
            continue;
        }
        let sub_cols: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let minor = det_laplace(m, &rows[1..], &sub_cols);
        if minor.is_zero() {
            continue;
        }
        let term = e * &minor;
        acc = if i % 2 == 0 {
            &acc + &term
        } else {
            &acc - &term
        };
    }
    acc
}

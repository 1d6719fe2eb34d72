//! The chain complex attached to a column-unital Yang-Baxter operator.
//!
//! Degree `n` is `V^(x n)`; the two face families act on a basis tuple by
//! braiding a distinguished factor to an end with the operator and dropping
//! it there:
//!
//! * `face_left(i)`: apply the operator at positions `i-1, ..., 1`, then
//!   drop the first factor;
//! * `face_right(i)`: apply at positions `i, ..., n-1`, then drop the last.
//!
//! The boundary is the alternating sum `sum_i (-1)^(i+1) (face_left(i) -
//! face_right(i))`. Any change to these conventions changes every matrix,
//! so the exact recipe is recorded in [`CONVENTION`] and embedded in cache
//! files; a cache entry written under a different convention is ignored.

use std::path::Path;

use rayon::prelude::*;
use thiserror::Error;

use crate::ring::{LaurentPoly, RingError, RingMode};
use crate::smith::PolyMatrix;
use crate::tensor::{dim, BasisTuple, PairMap, TensorError, TensorVector};
use crate::ybop::OpError;

pub const CONVENTION: &str = "sign=(-1)^{i+1};faces=derived-v1";

#[derive(Debug, Error)]
pub enum ChainError {
    #[error("the boundary is defined for degree n >= 1")]
    DegreeTooSmall,
    #[error(transparent)]
    Op(#[from] OpError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("cache io: {0}")]
    Io(#[from] std::io::Error),
    #[error("cache format: {0}")]
    CacheFormat(String),
}

/// `face_left(op, v, i)` for `1 <= i <= n`.
pub fn face_left<R: PairMap + ?Sized>(
    op: &R,
    v: &TensorVector,
    i: usize,
) -> Result<TensorVector, ChainError> {
    let n = v.n();
    if i == 0 || i > n {
        return Err(TensorError::PositionOutOfRange { pos: i, max: n }.into());
    }
    let mut w = v.clone();
    for pos in (1..i).rev() {
        w = w.apply_at(op, pos)?;
    }
    Ok(w.drop_first()?)
}

/// `face_right(op, v, i)` for `1 <= i <= n`.
pub fn face_right<R: PairMap + ?Sized>(
    op: &R,
    v: &TensorVector,
    i: usize,
) -> Result<TensorVector, ChainError> {
    let n = v.n();
    if i == 0 || i > n {
        return Err(TensorError::PositionOutOfRange { pos: i, max: n }.into());
    }
    let mut w = v.clone();
    for pos in i..n {
        w = w.apply_at(op, pos)?;
    }
    Ok(w.drop_last()?)
}

/// The boundary of a single basis tuple, as a vector in degree `n - 1`.
pub fn boundary_column<R: PairMap + ?Sized>(
    op: &R,
    t: &BasisTuple,
) -> Result<TensorVector, ChainError> {
    let n = t.n();
    if n == 0 {
        return Err(ChainError::DegreeTooSmall);
    }
    let e = TensorVector::basis(t);
    let mut acc = TensorVector::zero(t.m(), n - 1);
    for i in 1..=n {
        let diff = face_left(op, &e, i)?.sub(&face_right(op, &e, i)?);
        acc = if i % 2 == 1 {
            acc.add(&diff)
        } else {
            acc.sub(&diff)
        };
    }
    Ok(acc)
}

/// The matrix of the boundary from degree `n` to degree `n - 1`, columns
/// indexed by basis tuples of `V^(x n)` and rows by tuples of `V^(x (n-1))`,
/// both in tuple-index order. Degree 0 is the ground ring, of rank 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryMatrix {
    m: usize,
    n: usize,
    mat: PolyMatrix,
}

impl BoundaryMatrix {
    pub fn m(&self) -> usize {
        self.m
    }

    /// Domain degree: the matrix maps degree `n` to degree `n - 1`.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &PolyMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> PolyMatrix {
        self.mat
    }

    /// `true` when this boundary composed with the one a degree above is
    /// identically zero.
    pub fn composes_to_zero_with(&self, next: &BoundaryMatrix) -> bool {
        self.m == next.m && self.n + 1 == next.n && self.mat.mul(&next.mat).is_zero()
    }

    /// `true` when every entry is divisible by `d` (in `Q[y, y^-1]`).
    pub fn entries_divisible_by(&self, d: &LaurentPoly) -> Result<bool, ChainError> {
        for r in 0..self.mat.rows() {
            for c in 0..self.mat.cols() {
                let e = self.mat.at(r, c);
                if !e.is_zero() && !RingMode::Laurent.divides(d, e)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Assemble the full boundary matrix in degree `n`, columns in parallel.
pub fn boundary<R: PairMap + Sync + ?Sized>(
    op: &R,
    n: usize,
) -> Result<BoundaryMatrix, ChainError> {
    if n == 0 {
        return Err(ChainError::DegreeTooSmall);
    }
    let m = op.m();
    let cols = dim(m, n);
    let columns: Result<Vec<TensorVector>, ChainError> = (0..cols)
        .into_par_iter()
        .map(|ci| boundary_column(op, &BasisTuple::from_index(m, n, ci)?))
        .collect();
    let mut mat = PolyMatrix::zeros(dim(m, n - 1), cols);
    for (ci, col) in columns?.into_iter().enumerate() {
        for (ri, coeff) in col.terms() {
            mat.set(ri, ci, coeff.clone());
        }
    }
    Ok(BoundaryMatrix { m, n, mat })
}

pub fn cache_file_name(label: &str, m: usize, n: usize) -> String {
    format!("boundary_{label}_m{m}_n{n}.txt")
}

/// Canonical text form: a fixed header followed by one `col row poly` line
/// per nonzero entry, sorted by `(col, row)`. Serialization is bit-exact:
/// parsing and re-serializing reproduces the same bytes.
pub fn boundary_to_text(label: &str, bm: &BoundaryMatrix) -> String {
    let mut out = String::new();
    out.push_str("ybhom-boundary v1\n");
    out.push_str(&format!("operator {label}\n"));
    out.push_str(&format!("m {}\n", bm.m));
    out.push_str(&format!("n {}\n", bm.n));
    out.push_str(&format!("convention {CONVENTION}\n"));
    out.push_str("ring qy\n");
    out.push_str(&format!("rows {}\n", bm.mat.rows()));
    out.push_str(&format!("cols {}\n", bm.mat.cols()));
    for c in 0..bm.mat.cols() {
        for r in 0..bm.mat.rows() {
            let e = bm.mat.at(r, c);
            if !e.is_zero() {
                out.push_str(&format!("{c} {r} {e}\n"));
            }
        }
    }
    out
}

pub fn boundary_from_text(label: &str, text: &str) -> Result<BoundaryMatrix, ChainError> {
    let bad = |msg: &str| ChainError::CacheFormat(msg.to_string());
    let mut lines = text.lines();
    let version = lines.next().ok_or_else(|| bad("empty file"))?;
    if version != "ybhom-boundary v1" {
        return Err(bad(&format!("unknown format `{version}`")));
    }
    let mut expect = |key: &str| -> Result<String, ChainError> {
        let line = lines.next().ok_or_else(|| bad("truncated header"))?;
        line.strip_prefix(key)
            .and_then(|rest| rest.strip_prefix(' '))
            .map(str::to_string)
            .ok_or_else(|| bad(&format!("expected `{key} ...`, got `{line}`")))
    };
    if expect("operator")? != label {
        return Err(bad("operator label mismatch"));
    }
    let m: usize = expect("m")?.parse().map_err(|_| bad("bad m"))?;
    let n: usize = expect("n")?.parse().map_err(|_| bad("bad n"))?;
    if expect("convention")? != CONVENTION {
        return Err(bad("convention mismatch"));
    }
    if expect("ring")? != "qy" {
        return Err(bad("ring mismatch"));
    }
    let rows: usize = expect("rows")?.parse().map_err(|_| bad("bad rows"))?;
    let cols: usize = expect("cols")?.parse().map_err(|_| bad("bad cols"))?;
    if n == 0 || rows != dim(m, n - 1) || cols != dim(m, n) {
        return Err(bad("inconsistent dimensions"));
    }
    let mut mat = PolyMatrix::zeros(rows, cols);
    for line in lines {
        let mut parts = line.splitn(3, ' ');
        let (c, r, poly) = (
            parts.next().ok_or_else(|| bad("short entry line"))?,
            parts.next().ok_or_else(|| bad("short entry line"))?,
            parts.next().ok_or_else(|| bad("short entry line"))?,
        );
        let c: usize = c.parse().map_err(|_| bad("bad column index"))?;
        let r: usize = r.parse().map_err(|_| bad("bad row index"))?;
        if r >= rows || c >= cols {
            return Err(bad("entry out of range"));
        }
        mat.set(r, c, poly.parse()?);
    }
    Ok(BoundaryMatrix { m, n, mat })
}

/// Boundary matrix with a file-backed cache. A missing, stale, or corrupt
/// cache entry is recomputed and rewritten; a fresh one is parsed as-is, so
/// warm and cold paths yield identical matrices.
pub fn cached_boundary<R: PairMap + Sync + ?Sized>(
    op: &R,
    label: &str,
    n: usize,
    cache_dir: Option<&Path>,
) -> Result<BoundaryMatrix, ChainError> {
    let Some(dir) = cache_dir else {
        return boundary(op, n);
    };
    let path = dir.join(cache_file_name(label, op.m(), n));
    if let Ok(text) = std::fs::read_to_string(&path) {
        if let Ok(bm) = boundary_from_text(label, &text) {
            if bm.m == op.m() && bm.n == n {
                return Ok(bm);
            }
        }
    }
    let bm = boundary(op, n)?;
    std::fs::create_dir_all(dir)?;
    std::fs::write(&path, boundary_to_text(label, &bm))?;
    Ok(bm)
}

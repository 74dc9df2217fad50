//! Dense matrices over an [`InvolutiveRing`].
//!
//! A [`Mat`] is plain data; every operation takes the ring explicitly.

mod det;
mod solve;

pub use det::{det, is_invertible_commutative};
pub use solve::{solve_linear, SolveMode};

use std::fmt;

use crate::config::{pow_saturating, Caps};
use crate::error::{Error, Result};
use crate::ring::{El, FiniteRing, InvolutiveRing};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: fmt::Debug> fmt::Debug for Mat<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[E]> = self.data.chunks(self.cols.max(1)).collect();
        write!(f, "Mat{:?}", rows)
    }
}

impl<E: Clone> Mat<E> {
    pub fn new(rows: usize, cols: usize, data: Vec<E>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!("{} entries for a {rows}×{cols} matrix", data.len())));
        }
        Ok(Mat { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> E) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<E>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Ok(Mat { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: E) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[E] {
        &self.data
    }

    pub fn row_vecs(&self) -> Vec<Vec<E>> {
        self.data.chunks(self.cols.max(1)).take(self.rows).map(<[E]>::to_vec).collect()
    }

    pub fn col(&self, j: usize) -> Vec<E> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn map<F: Clone>(&self, f: impl FnMut(&E) -> F) -> Mat<F> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        Mat::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Mat::from_fn(rows, cols, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    /// Column vector.
    pub fn column(v: Vec<E>) -> Self {
        Mat { rows: v.len(), cols: 1, data: v }
    }
}

impl<E: Clone + Eq + fmt::Debug> Mat<E> {
    pub fn zeros<R: InvolutiveRing<Elem = E>>(r: &R, rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![r.zero(); rows * cols] }
    }

    pub fn identity<R: InvolutiveRing<Elem = E>>(r: &R, n: usize) -> Self {
        Self::scalar(r, n, r.one())
    }

    pub fn scalar<R: InvolutiveRing<Elem = E>>(r: &R, n: usize, a: E) -> Self {
        Mat::from_fn(n, n, |i, j| if i == j { a.clone() } else { r.zero() })
    }

    pub fn is_zero<R: InvolutiveRing<Elem = E>>(&self, r: &R) -> bool {
        self.data.iter().all(|x| r.is_zero(x))
    }

    pub fn is_identity<R: InvolutiveRing<Elem = E>>(&self, r: &R) -> bool {
        self.is_square() && *self == Self::identity(r, self.rows)
    }

    fn same_shape(&self, other: &Self, op: &str) {
        assert!(
            self.rows == other.rows && self.cols == other.cols,
            "{op}: {}×{} vs {}×{}",
            self.rows,
            self.cols,
            other.rows,
            other.cols
        );
    }

    pub fn add<R: InvolutiveRing<Elem = E>>(&self, r: &R, other: &Self) -> Self {
        self.same_shape(other, "add");
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| r.add(a, b)).collect(),
        }
    }

    pub fn sub<R: InvolutiveRing<Elem = E>>(&self, r: &R, other: &Self) -> Self {
        self.same_shape(other, "sub");
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| r.sub(a, b)).collect(),
        }
    }

    pub fn neg<R: InvolutiveRing<Elem = E>>(&self, r: &R) -> Self {
        self.map(|a| r.neg(a))
    }

    /// Matrix product; panics on a shape mismatch.
    pub fn mul<R: InvolutiveRing<Elem = E>>(&self, r: &R, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "mul: {}×{} by {}×{}", self.rows, self.cols, other.rows, other.cols);
        let mut out = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = r.zero();
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    if r.is_zero(a) {
                        continue;
                    }
                    acc = r.add(&acc, &r.mul(a, other.get(k, j)));
                }
                out.push(acc);
            }
        }
        Mat { rows: self.rows, cols: other.cols, data: out }
    }

    pub fn try_mul<R: InvolutiveRing<Elem = E>>(&self, r: &R, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}×{} by {}×{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(self.mul(r, other))
    }

    /// `a·M`.
    pub fn scale_left<R: InvolutiveRing<Elem = E>>(&self, r: &R, a: &E) -> Self {
        self.map(|x| r.mul(a, x))
    }

    /// `M·a`.
    pub fn scale_right<R: InvolutiveRing<Elem = E>>(&self, r: &R, a: &E) -> Self {
        self.map(|x| r.mul(x, a))
    }

    /// `M*`, with `(M*)ᵢⱼ = conj(Mⱼᵢ)`.
    pub fn conj_transpose<R: InvolutiveRing<Elem = E>>(&self, r: &R) -> Self {
        Mat::from_fn(self.cols, self.rows, |i, j| r.conj(self.get(j, i)))
    }

    pub fn pow<R: InvolutiveRing<Elem = E>>(&self, r: &R, k: usize) -> Self {
        let mut acc = Self::identity(r, self.rows);
        for _ in 0..k {
            acc = acc.mul(r, self);
        }
        acc
    }

    /// Block-diagonal sum `self ⊕ other`.
    pub fn direct_sum<R: InvolutiveRing<Elem = E>>(&self, r: &R, other: &Self) -> Self {
        let (n, m) = (self.rows, other.rows);
        let (p, q) = (self.cols, other.cols);
        Mat::from_fn(n + m, p + q, |i, j| match (i < n, j < p) {
            (true, true) => self.get(i, j).clone(),
            (false, false) => other.get(i - n, j - p).clone(),
            _ => r.zero(),
        })
    }

    /// Assembles a matrix from a grid of blocks with compatible shapes.
    pub fn from_blocks(blocks: &[Vec<Self>]) -> Result<Self> {
        let heights: Vec<usize> = blocks.iter().map(|row| row.first().map_or(0, |b| b.rows)).collect();
        let widths: Vec<usize> = blocks.first().map_or(Vec::new(), |row| row.iter().map(|b| b.cols).collect());
        for (bi, row) in blocks.iter().enumerate() {
            if row.len() != widths.len() {
                return Err(Error::Shape("block rows have different lengths".into()));
            }
            for (bj, b) in row.iter().enumerate() {
                if b.rows != heights[bi] || b.cols != widths[bj] {
                    return Err(Error::Shape(format!("block ({bi},{bj}) has shape {}×{}", b.rows, b.cols)));
                }
            }
        }
        let rows: usize = heights.iter().sum();
        let cols: usize = widths.iter().sum();
        let mut data = Vec::with_capacity(rows * cols);
        for (bi, row) in blocks.iter().enumerate() {
            for i in 0..heights[bi] {
                for b in row {
                    data.extend_from_slice(&b.data[i * b.cols..(i + 1) * b.cols]);
                }
            }
        }
        Ok(Mat { rows, cols, data })
    }

    /// Kronecker product, with the left factor's index major. Entries are
    /// multiplied as `aᵢⱼ·bₖₗ`, which is the tensor product over a
    /// commutative ring.
    pub fn kronecker<R: InvolutiveRing<Elem = E>>(&self, r: &R, other: &Self) -> Self {
        let (bm, bn) = (other.rows, other.cols);
        Mat::from_fn(self.rows * bm, self.cols * bn, |i, j| {
            r.mul(self.get(i / bm, j / bn), other.get(i % bm, j % bn))
        })
    }

    /// Least `k ≥ 1` with `M^k = 0`; `None` when the powers start repeating
    /// without reaching zero (or after a hard cap of 4096 steps).
    pub fn nilpotency_index<R: InvolutiveRing<Elem = E>>(&self, r: &R) -> Option<usize>
    where
        E: std::hash::Hash,
    {
        assert!(self.is_square(), "nilpotency_index needs a square matrix");
        let mut seen = std::collections::HashSet::new();
        let mut p = self.clone();
        for k in 1..=4096 {
            if p.is_zero(r) {
                return Some(k);
            }
            if !seen.insert(p.clone()) {
                return None;
            }
            p = p.mul(r, self);
        }
        None
    }

    /// Inversion by Gauss–Jordan elimination with unit pivots. `None` means
    /// no unit pivot was found, which over a local ring proves
    /// non-invertibility but in general is inconclusive.
    pub fn invert_gauss<R: InvolutiveRing<Elem = E>>(&self, r: &R) -> Option<Self> {
        assert!(self.is_square(), "invert needs a square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(r, n);
        for col in 0..n {
            let (pivot_row, pivot_inv) =
                (col..n).find_map(|i| r.unit_inverse(a.get(i, col)).map(|u| (i, u)))?;
            a.swap_rows(col, pivot_row);
            inv.swap_rows(col, pivot_row);
            a.scale_row_left(r, col, &pivot_inv);
            inv.scale_row_left(r, col, &pivot_inv);
            for i in 0..n {
                if i == col || r.is_zero(a.get(i, col)) {
                    continue;
                }
                let factor = a.get(i, col).clone();
                a.sub_row_multiple(r, i, col, &factor);
                inv.sub_row_multiple(r, i, col, &factor);
            }
        }
        let one = Self::identity(r, n);
        (self.mul(r, &inv) == one && inv.mul(r, self) == one).then_some(inv)
    }

    /// Row rank by elimination; meaningful when every nonzero entry is a
    /// unit (a division ring).
    pub fn rank_over_field<R: InvolutiveRing<Elem = E>>(&self, r: &R) -> usize {
        let mut a = self.clone();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some((p, inv)) = (rank..self.rows).find_map(|i| r.unit_inverse(a.get(i, col)).map(|u| (i, u))) else {
                continue;
            };
            a.swap_rows(rank, p);
            a.scale_row_left(r, rank, &inv);
            for i in 0..self.rows {
                if i != rank && !r.is_zero(a.get(i, col)) {
                    let factor = a.get(i, col).clone();
                    a.sub_row_multiple(r, i, rank, &factor);
                }
            }
            rank += 1;
        }
        rank
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn scale_row_left<R: InvolutiveRing<Elem = E>>(&mut self, r: &R, i: usize, u: &E) {
        for j in 0..self.cols {
            let v = r.mul(u, self.get(i, j));
            self.set(i, j, v);
        }
    }

    /// `row_i ← row_i − factor·row_k`.
    fn sub_row_multiple<R: InvolutiveRing<Elem = E>>(&mut self, r: &R, i: usize, k: usize, factor: &E) {
        for j in 0..self.cols {
            let v = r.sub(self.get(i, j), &r.mul(factor, self.get(k, j)));
            self.set(i, j, v);
        }
    }
}

impl Mat<El> {
    pub fn format(&self, r: &FiniteRing) -> Vec<Vec<String>> {
        self.row_vecs().iter().map(|row| row.iter().map(|&a| r.format_elem(a)).collect()).collect()
    }

    pub fn to_json(&self, r: &FiniteRing) -> serde_json::Value {
        serde_json::json!(self.format(r))
    }

    /// Parses a JSON array of rows of element strings or integers.
    pub fn from_json(r: &FiniteRing, v: &serde_json::Value) -> Result<Self> {
        let rows = v.as_array().ok_or_else(|| Error::Malformed(format!("matrix must be an array, got {v}")))?;
        let parsed: Vec<Vec<El>> = rows
            .iter()
            .map(|row| {
                row.as_array()
                    .ok_or_else(|| Error::Malformed(format!("matrix row must be an array, got {row}")))?
                    .iter()
                    .map(|cell| parse_cell(r, cell))
                    .collect()
            })
            .collect::<Result<_>>()?;
        Mat::from_rows(parsed)
    }

    /// Inverse over a finite ring: unit-pivot elimination, then (when that
    /// is inconclusive) a bijectivity check of `x ↦ Mx` on `Aⁿ`.
    pub fn invert(&self, r: &FiniteRing, caps: &Caps) -> Result<Option<Self>> {
        if !self.is_square() {
            return Err(Error::Shape(format!("cannot invert a {}×{} matrix", self.rows, self.cols)));
        }
        if self.rows == 0 {
            return Ok(Some(self.clone()));
        }
        if let Some(inv) = self.invert_gauss(r) {
            return Ok(Some(inv));
        }
        if r.is_field() || is_local(r) {
            return Ok(None);
        }
        self.invert_by_enumeration(r, caps)
    }

    /// Builds the inverse column by column from preimages of the unit
    /// vectors, after checking that `x ↦ Mx` is injective on `Aⁿ`.
    pub fn invert_by_enumeration(&self, r: &FiniteRing, caps: &Caps) -> Result<Option<Self>> {
        let n = self.rows;
        caps.check("bijectivity check of x ↦ Mx", pow_saturating(r.size() as u128, n))?;
        let mut preimage = std::collections::HashMap::new();
        for v in vectors(r, n) {
            let img = self.mul(r, &Mat::column(v.clone())).data;
            if preimage.insert(img, v).is_some() {
                return Ok(None);
            }
        }
        let cols: Vec<Vec<El>> = (0..n)
            .map(|j| {
                let e: Vec<El> = (0..n).map(|i| if i == j { r.one() } else { r.zero() }).collect();
                preimage[&e].clone()
            })
            .collect();
        let inv = Mat::from_fn(n, n, |i, j| cols[j][i]);
        let one = Mat::identity(r, n);
        Ok((self.mul(r, &inv) == one && inv.mul(r, self) == one).then_some(inv))
    }
}

pub(crate) fn parse_cell(r: &FiniteRing, cell: &serde_json::Value) -> Result<El> {
    match cell {
        serde_json::Value::String(s) => r.parse_elem(s),
        serde_json::Value::Number(n) => {
            let v = n.as_i64().ok_or_else(|| Error::Malformed(format!("bad integer {n}")))?;
            Ok(r.from_int(v))
        }
        other => Err(Error::Malformed(format!("bad matrix entry {other}"))),
    }
}

/// Whether the non-units form an additive subgroup (i.e. the ring is local).
fn is_local(r: &FiniteRing) -> bool {
    if r.size() > 1024 {
        return false;
    }
    let non_units: Vec<El> = r.elements().filter(|a| r.unit_inverse(a).is_none()).collect();
    non_units.iter().all(|a| non_units.iter().all(|b| r.unit_inverse(&r.add(a, b)).is_none()))
}

/// All vectors of `Aⁿ` in odometer order (last coordinate fastest).
pub fn vectors(r: &FiniteRing, n: usize) -> impl Iterator<Item = Vec<El>> {
    let size = r.size() as u32;
    let total = pow_saturating(size as u128, n);
    (0..total).map(move |mut code| {
        let mut v = vec![El(0); n];
        for slot in v.iter_mut().rev() {
            *slot = El((code % size as u128) as u32);
            code /= size as u128;
        }
        v
    })
}

/// All `rows×cols` matrices in odometer order.
pub fn all_matrices(r: &FiniteRing, rows: usize, cols: usize) -> impl Iterator<Item = Mat<El>> {
    vectors(r, rows * cols).map(move |v| Mat { rows, cols, data: v })
}

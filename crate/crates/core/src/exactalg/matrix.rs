use std::collections::HashMap;

use crate::error::{input_err, Result};
use crate::groundset::{BitIter, Subset};

use super::scalar::{Ring, Scalar};

/// A dense row-major matrix over one ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    ring: Ring,
    entries: Vec<Scalar>,
}

impl Matrix {
    pub fn new(ring: Ring, rows: usize, cols: usize, entries: Vec<Scalar>) -> Result<Self> {
        if entries.len() != rows * cols {
            return input_err(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            ));
        }
        if let Some(bad) = entries.iter().find(|e| e.ring() != ring) {
            return input_err(format!("entry {bad} is not in {ring}"));
        }
        Ok(Matrix { rows, cols, ring, entries })
    }

    /// Builds a matrix from rows of machine integers mapped into `ring`.
    pub fn from_rows(ring: Ring, rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return input_err("ragged rows");
        }
        let entries = rows.iter().flatten().map(|&v| ring.from_i64(v)).collect();
        Matrix::new(ring, rows.len(), cols, entries)
    }

    pub fn zeros(ring: Ring, rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, ring, entries: vec![ring.zero(); rows * cols] }
    }

    pub fn identity(ring: Ring, n: usize) -> Self {
        let mut m = Matrix::zeros(ring, n, n);
        for i in 0..n {
            m.entries[i * n + i] = ring.one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    /// Entry at 0-based `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        assert_eq!(v.ring(), self.ring);
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    /// Submatrix on the given 0-based rows and columns, in the given order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let entries = rows
            .iter()
            .flat_map(|&i| cols.iter().map(move |&j| self.get(i, j).clone()))
            .collect();
        Matrix { rows: rows.len(), cols: cols.len(), ring: self.ring, entries }
    }

    /// Columns selected by a bitmask, kept in increasing order.
    pub fn columns(&self, mask: u32) -> Matrix {
        let rows: Vec<usize> = (0..self.rows).collect();
        let cols: Vec<usize> = BitIter(mask).collect();
        self.submatrix(&rows, &cols)
    }

    pub fn map(&self, f: impl Fn(&Scalar) -> Result<Scalar>, ring: Ring) -> Result<Matrix> {
        let entries = self.entries.iter().map(f).collect::<Result<Vec<_>>>()?;
        Matrix::new(ring, self.rows, self.cols, entries)
    }
}

/// A square matrix with `a_ij = -a_ji` and zero diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkewMatrix(Matrix);

impl SkewMatrix {
    pub fn new(m: Matrix) -> Result<Self> {
        if m.rows != m.cols {
            return input_err(format!("{}x{} matrix is not square", m.rows, m.cols));
        }
        for i in 0..m.rows {
            if !m.get(i, i).is_zero() {
                return input_err(format!("diagonal entry ({0},{0}) is nonzero", i + 1));
            }
            for j in i + 1..m.cols {
                if *m.get(i, j) != -m.get(j, i) {
                    return input_err(format!("entries ({},{}) and ({},{}) are not negatives", i + 1, j + 1, j + 1, i + 1));
                }
            }
        }
        Ok(SkewMatrix(m))
    }

    pub fn zeros(ring: Ring, n: usize) -> Self {
        SkewMatrix(Matrix::zeros(ring, n, n))
    }

    /// Fills the strict upper triangle row by row from `upper`
    /// (`(0,1), (0,2), ..., (1,2), ...`) and mirrors it.
    pub fn from_upper(ring: Ring, n: usize, upper: &[Scalar]) -> Result<Self> {
        if upper.len() != n * n.saturating_sub(1) / 2 {
            return input_err(format!("{} upper entries for size {n}", upper.len()));
        }
        let mut m = Matrix::zeros(ring, n, n);
        let mut it = upper.iter();
        for i in 0..n {
            for j in i + 1..n {
                let v = it.next().unwrap().clone();
                if v.ring() != ring {
                    return input_err(format!("entry {v} is not in {ring}"));
                }
                m.set(j, i, -&v);
                m.set(i, j, v);
            }
        }
        Ok(SkewMatrix(m))
    }

    pub fn size(&self) -> usize {
        self.0.rows
    }

    pub fn ring(&self) -> Ring {
        self.0.ring
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        self.0.get(i, j)
    }
}

/// Exact determinant: fraction-free Bareiss over the integers, Gaussian
/// elimination over fields.
pub fn determinant(m: &Matrix) -> Result<Scalar> {
    if m.rows != m.cols {
        return input_err(format!("{}x{} matrix is not square", m.rows, m.cols));
    }
    Ok(match m.ring {
        Ring::Integers => bareiss(m),
        _ => gaussian(m),
    })
}

fn bareiss(m: &Matrix) -> Scalar {
    let n = m.rows;
    let ring = m.ring;
    let mut a: Vec<Vec<Scalar>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    let mut negate = false;
    let mut prev = ring.one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return ring.zero();
        };
        if p != k {
            a.swap(p, k);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = num.exact_div(&prev);
            }
        }
        prev = a[k][k].clone();
    }
    let det = if n == 0 { ring.one() } else { a[n - 1][n - 1].clone() };
    if negate {
        -det
    } else {
        det
    }
}

fn gaussian(m: &Matrix) -> Scalar {
    let n = m.rows;
    let ring = m.ring;
    let mut a: Vec<Vec<Scalar>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    let mut det = ring.one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return ring.zero();
        };
        if p != k {
            a.swap(p, k);
            det = -det;
        }
        det = &det * &a[k][k];
        let inv = a[k][k].inverse().expect("nonzero pivot in a field");
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let factor = &a[i][k] * &inv;
            for j in k..n {
                let v = &a[i][j] - &(&factor * &a[k][j]);
                a[i][j] = v;
            }
        }
    }
    det
}

/// Pfaffian by the first-row expansion
/// `Pf(A) = Σ_{j≥2} (-1)^j a_{1j} Pf(A without rows/cols 1, j)`, memoized on
/// index subsets.
pub fn pfaffian(m: &SkewMatrix) -> Scalar {
    let n = m.size();
    let mut memo = HashMap::new();
    pfaffian_rec(m, crate::groundset::full_mask(n), &mut memo)
}

fn pfaffian_rec(m: &SkewMatrix, mask: u32, memo: &mut HashMap<u32, Scalar>) -> Scalar {
    let ring = m.ring();
    if mask == 0 {
        return ring.one();
    }
    if mask.count_ones() % 2 == 1 {
        return ring.zero();
    }
    if let Some(v) = memo.get(&mask) {
        return v.clone();
    }
    let first = mask.trailing_zeros() as usize;
    let rest = mask & (mask - 1);
    let mut acc = ring.zero();
    for (pos, j) in BitIter(rest).enumerate() {
        let a = m.get(first, j);
        if a.is_zero() {
            continue;
        }
        let term = a * &pfaffian_rec(m, rest & !(1 << j), memo);
        // j sits at position pos + 2 of the submatrix
        acc = if pos % 2 == 0 { acc + term } else { acc - term };
    }
    memo.insert(mask, acc.clone());
    acc
}

/// `Pf(A_J)` for every `J ⊆ [n]`, indexed by mask.
pub fn principal_pfaffians(m: &SkewMatrix) -> Vec<Scalar> {
    let n = m.size();
    let ring = m.ring();
    let mut pf: Vec<Scalar> = Vec::with_capacity(1 << n);
    for mask in 0u32..(1u32 << n) {
        let v = if mask == 0 {
            ring.one()
        } else if mask.count_ones() % 2 == 1 {
            ring.zero()
        } else {
            let first = mask.trailing_zeros() as usize;
            let rest = mask & (mask - 1);
            let mut acc = ring.zero();
            for (pos, j) in BitIter(rest).enumerate() {
                let a = m.get(first, j);
                let sub = &pf[(rest & !(1 << j)) as usize];
                if a.is_zero() || sub.is_zero() {
                    continue;
                }
                let term = a * sub;
                acc = if pos % 2 == 0 { acc + term } else { acc - term };
            }
            acc
        };
        pf.push(v);
    }
    pf
}

/// `A_J`: rows and columns indexed by `J`, in increasing order.
pub fn principal_submatrix(m: &SkewMatrix, j: Subset) -> Result<SkewMatrix> {
    if j.ground().size() != m.size() {
        return input_err(format!(
            "subset of [{}] used to index a {}x{} matrix",
            j.ground().size(),
            m.size(),
            m.size()
        ));
    }
    let idx: Vec<usize> = BitIter(j.bits()).collect();
    Ok(SkewMatrix(m.0.submatrix(&idx, &idx)))
}

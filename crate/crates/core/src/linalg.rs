//! Dense linear algebra over `F_q`: reduced row echelon form, rank and
//! canonical nullspace bases.

use crate::field::{Field, Fq};

/// Row-major matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Fq>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Fq(0); rows * cols] }
    }

    pub fn from_rows(cols: usize, rows: &[Vec<Fq>]) -> Self {
        let mut m = Matrix::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged rows");
            m.data[i * cols..(i + 1) * cols].copy_from_slice(r);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Fq {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Fq) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Fq] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Fq>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Columns `cols` only.
    pub fn select_cols(&self, cols: &[usize]) -> Matrix {
        let rows: Vec<Vec<Fq>> =
            (0..self.rows).map(|i| cols.iter().map(|&j| self.get(i, j)).collect()).collect();
        Matrix::from_rows(cols.len(), &rows)
    }

    /// In-place RREF; returns the pivot columns.
    pub fn rref(&mut self, f: &Field) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| self.get(i, c) != Fq(0)) else {
                continue;
            };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, r * self.cols + j);
                }
            }
            let inv = f.inv(self.get(r, c)).expect("nonzero pivot");
            for j in c..self.cols {
                let v = f.mul(self.get(r, j), inv);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                let k = self.get(i, c);
                if i == r || k == Fq(0) {
                    continue;
                }
                for j in c..self.cols {
                    let v = f.sub(self.get(i, j), f.mul(k, self.get(r, j)));
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self, f: &Field) -> usize {
        self.clone().rref(f).len()
    }

    /// The nonzero rows of the RREF: the canonical basis of the row space.
    pub fn row_space(&self, f: &Field) -> Vec<Vec<Fq>> {
        let mut m = self.clone();
        let k = m.rref(f).len();
        (0..k).map(|i| m.row(i).to_vec()).collect()
    }

    /// Canonical (RREF) basis of `{v : M v = 0}`.
    pub fn nullspace(&self, f: &Field) -> Vec<Vec<Fq>> {
        let mut m = self.clone();
        let pivots = m.rref(f);
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![Fq(0); self.cols];
            v[free] = Fq(1);
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(m.get(i, free));
            }
            basis.push(v);
        }
        if basis.is_empty() {
            return basis;
        }
        Matrix::from_rows(self.cols, &basis).row_space(f)
    }

    /// `M v`.
    pub fn apply(&self, v: &[Fq], f: &Field) -> Vec<Fq> {
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(Fq(0), |acc, (&a, &b)| f.add(acc, f.mul(a, b))))
            .collect()
    }

    /// Indices of a maximal independent subset of rows, greedily in order.
    pub fn independent_rows(&self, f: &Field) -> Vec<usize> {
        let mut kept: Vec<Vec<Fq>> = Vec::new();
        let mut out = Vec::new();
        for i in 0..self.rows {
            let mut cand = kept.clone();
            cand.push(self.row(i).to_vec());
            if Matrix::from_rows(self.cols, &cand).rank(f) == cand.len() {
                kept = cand;
                out.push(i);
            }
        }
        out
    }
}

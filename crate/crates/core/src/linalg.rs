//! Exact Gaussian elimination over GF(q).

use crate::gf::{FieldElement, FieldSpec};

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![FieldElement::ZERO; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> FieldElement {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: FieldElement) {
        self.data[r * self.cols + c] = v;
    }

    pub fn column(&self, c: usize) -> Vec<FieldElement> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn rank(&self, f: &FieldSpec) -> usize {
        let mut m = self.data.clone();
        rref_in_place(&mut m, self.rows, self.cols, f, &mut Vec::new())
    }

    /// Basis of {v : M v = 0}, one vector per free column, in increasing free-column order.
    pub fn kernel(&self, f: &FieldSpec) -> Vec<Vec<FieldElement>> {
        let mut m = self.data.clone();
        kernel_in_place(&mut m, self.rows, self.cols, f)
    }

    pub fn nullity(&self, f: &FieldSpec) -> usize {
        self.cols - self.rank(f)
    }

    pub fn mul_vec(&self, v: &[FieldElement], f: &FieldSpec) -> Vec<FieldElement> {
        (0..self.rows)
            .map(|r| (0..self.cols).fold(FieldElement::ZERO, |acc, c| f.add(acc, f.mul(self.get(r, c), v[c]))))
            .collect()
    }
}

/// Reduces the row-major `rows × cols` buffer to reduced row echelon form,
/// pivoting on the first nonzero entry. Pivot columns are written to `pivots`.
/// Returns the rank.
pub fn rref_in_place(
    m: &mut [FieldElement],
    rows: usize,
    cols: usize,
    f: &FieldSpec,
    pivots: &mut Vec<usize>,
) -> usize {
    pivots.clear();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !m[i * cols + c].is_zero()) else {
            continue;
        };
        if pr != r {
            for j in 0..cols {
                m.swap(pr * cols + j, r * cols + j);
            }
        }
        let inv = f.inv_nonzero(m[r * cols + c]);
        for j in c..cols {
            m[r * cols + j] = f.mul(m[r * cols + j], inv);
        }
        for i in 0..rows {
            if i == r {
                continue;
            }
            let factor = m[i * cols + c];
            if factor.is_zero() {
                continue;
            }
            for j in c..cols {
                let t = f.mul(factor, m[r * cols + j]);
                m[i * cols + j] = f.sub(m[i * cols + j], t);
            }
        }
        pivots.push(c);
        r += 1;
    }
    r
}

/// Kernel basis of the buffer (destroyed in the process).
pub fn kernel_in_place(m: &mut [FieldElement], rows: usize, cols: usize, f: &FieldSpec) -> Vec<Vec<FieldElement>> {
    let mut pivots = Vec::new();
    let rank = rref_in_place(m, rows, cols, f, &mut pivots);
    let mut is_pivot = vec![false; cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::with_capacity(cols - rank);
    for free in (0..cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![FieldElement::ZERO; cols];
        v[free] = FieldElement::ONE;
        for (i, &p) in pivots.iter().enumerate() {
            v[p] = f.neg(m[i * cols + free]);
        }
        basis.push(v);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_kernel_small() {
        let f = FieldSpec::new(3, 1).unwrap();
        let e = |v: u32| f.element(v).unwrap();
        let mut m = Matrix::zeros(2, 3);
        // rows (1 2 0), (2 1 0): second = 2 * first
        for (c, v) in [1, 2, 0].into_iter().enumerate() {
            m.set(0, c, e(v));
        }
        for (c, v) in [2, 1, 0].into_iter().enumerate() {
            m.set(1, c, e(v));
        }
        assert_eq!(m.rank(&f), 1);
        let k = m.kernel(&f);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(m.mul_vec(v, &f).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn empty_shapes() {
        let f = FieldSpec::new(3, 1).unwrap();
        assert_eq!(Matrix::zeros(0, 3).nullity(&f), 3);
        assert_eq!(Matrix::zeros(3, 0).rank(&f), 0);
    }
}

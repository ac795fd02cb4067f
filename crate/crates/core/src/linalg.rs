//! Small dense complex linear algebra: pivoted LU, inverse, 1-norm condition
//! number, and cyclic Jacobi for real symmetric eigenvalues.

use crate::scalar::{cx, czero, Cx, Real};

pub type CMatrix<T> = Vec<Vec<Cx<T>>>;

pub fn zeros<T: Real>(rows: usize, cols: usize) -> CMatrix<T> {
    vec![vec![czero(); cols]; rows]
}

pub fn matmul<T: Real>(a: &[Vec<Cx<T>>], b: &[Vec<Cx<T>>]) -> CMatrix<T> {
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| row.iter().zip(b).fold(czero(), |acc, (&x, r)| acc + x * r[j]))
                .collect()
        })
        .collect()
}

pub fn max_abs<T: Real>(a: &[Vec<Cx<T>>]) -> T {
    a.iter().flatten().map(|z| z.norm()).fold(T::zero(), T::max)
}

/// Maximum absolute row sum.
pub fn norm_inf<T: Real>(a: &[Vec<Cx<T>>]) -> T {
    a.iter()
        .map(|r| r.iter().fold(T::zero(), |s, z| s + z.norm()))
        .fold(T::zero(), T::max)
}

/// Maximum absolute column sum.
pub fn norm_one<T: Real>(a: &[Vec<Cx<T>>]) -> T {
    let cols = a.first().map_or(0, Vec::len);
    (0..cols)
        .map(|j| a.iter().fold(T::zero(), |s, r| s + r[j].norm()))
        .fold(T::zero(), T::max)
}

/// LU factors with row pivoting, packed in one matrix.
pub struct Lu<T: Real> {
    lu: CMatrix<T>,
    perm: Vec<usize>,
}

impl<T: Real> Lu<T> {
    /// `None` when a pivot vanishes exactly.
    pub fn factor(a: &[Vec<Cx<T>>]) -> Option<Self> {
        let n = a.len();
        let mut lu = a.to_vec();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let p = (k..n).max_by(|&i, &j| lu[i][k].norm().partial_cmp(&lu[j][k].norm()).unwrap())?;
            if lu[p][k].norm() == T::zero() {
                return None;
            }
            lu.swap(k, p);
            perm.swap(k, p);
            let pivot = lu[k][k];
            for i in k + 1..n {
                let f = lu[i][k] / pivot;
                lu[i][k] = f;
                for j in k + 1..n {
                    let v = lu[k][j];
                    lu[i][j] = lu[i][j] - f * v;
                }
            }
        }
        Some(Self { lu, perm })
    }

    pub fn solve(&self, b: &[Vec<Cx<T>>]) -> CMatrix<T> {
        let n = self.lu.len();
        let cols = b.first().map_or(0, Vec::len);
        let mut x: CMatrix<T> = self.perm.iter().map(|&p| b[p].clone()).collect();
        for c in 0..cols {
            for i in 0..n {
                let mut s = x[i][c];
                for k in 0..i {
                    s = s - self.lu[i][k] * x[k][c];
                }
                x[i][c] = s;
            }
            for i in (0..n).rev() {
                let mut s = x[i][c];
                for k in i + 1..n {
                    s = s - self.lu[i][k] * x[k][c];
                }
                x[i][c] = s / self.lu[i][i];
            }
        }
        x
    }

    pub fn inverse(&self) -> CMatrix<T> {
        let n = self.lu.len();
        let mut id = zeros(n, n);
        for (i, row) in id.iter_mut().enumerate() {
            row[i] = cx(T::one(), T::zero());
        }
        self.solve(&id)
    }
}

/// Eigenvalues of a real symmetric matrix, ascending.
pub fn symmetric_eigenvalues<T: Real>(a: &[Vec<T>]) -> Vec<T> {
    let n = a.len();
    let mut m = a.to_vec();
    for _sweep in 0..100 {
        let off: T = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .fold(T::zero(), |s, (i, j)| s + m[i][j] * m[i][j]);
        let diag: T = (0..n).fold(T::zero(), |s, i| s + m[i][i] * m[i][i]);
        if off <= T::epsilon() * T::epsilon() * diag || off == T::zero() {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if m[p][q] == T::zero() {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (m[p][q] + m[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = (t * t + T::one()).sqrt().recip();
                let s = t * c;
                for k in 0..n {
                    let (mkp, mkq) = (m[k][p], m[k][q]);
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let (mpk, mqk) = (m[p][k], m[q][k]);
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
            }
        }
    }
    let mut ev: Vec<T> = (0..n).map(|i| m[i][i]).collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ev
}

//! Exact integer reduction of a unimodular alternating form to the standard
//! symplectic form `J = [[0, I], [-I, 0]]`.

use num_integer::Integer;
use num_traits::Signed;

use super::HomologyError;

pub type IntMatrix<I> = Vec<Vec<I>>;

/// `T` with `T M T^t = J`. Rows of `T` are the new basis vectors: the first `g`
/// rows are the alpha cycles, the last `g` the beta cycles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymplecticTransform<I> {
    pub t: IntMatrix<I>,
}

impl<I: Integer + Signed + Clone> SymplecticTransform<I> {
    pub fn genus(&self) -> usize {
        self.t.len() / 2
    }

    pub fn apply(&self, m: &[Vec<I>]) -> IntMatrix<I> {
        congruence(&self.t, m)
    }
}

pub fn standard_form<I: Integer + Signed + Clone>(g: usize) -> IntMatrix<I> {
    let mut j = vec![vec![I::zero(); 2 * g]; 2 * g];
    for i in 0..g {
        j[i][g + i] = I::one();
        j[g + i][i] = -I::one();
    }
    j
}

pub fn identity<I: Integer + Signed + Clone>(n: usize) -> IntMatrix<I> {
    let mut m = vec![vec![I::zero(); n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = I::one();
    }
    m
}

pub fn mat_mul<I: Integer + Signed + Clone>(a: &[Vec<I>], b: &[Vec<I>]) -> IntMatrix<I> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    (0..inner).fold(I::zero(), |acc, k| acc + row[k].clone() * b[k][j].clone())
                })
                .collect()
        })
        .collect()
}

pub fn transpose<I: Clone>(a: &[Vec<I>]) -> Vec<Vec<I>> {
    let cols = a.first().map_or(0, Vec::len);
    (0..cols).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

/// `T M T^t`
pub fn congruence<I: Integer + Signed + Clone>(t: &[Vec<I>], m: &[Vec<I>]) -> IntMatrix<I> {
    mat_mul(&mat_mul(t, m), &transpose(t))
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn determinant<I: Integer + Signed + Clone>(m: &[Vec<I>]) -> I {
    let n = m.len();
    if n == 0 {
        return I::one();
    }
    let mut a: Vec<Vec<I>> = m.to_vec();
    let mut sign = I::one();
    let mut prev = I::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return I::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[i][j].clone() * a[k][k].clone() - a[i][k].clone() * a[k][j].clone();
                a[i][j] = v / prev.clone();
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

fn pairing<I: Integer + Signed + Clone>(m: &[Vec<I>], u: &[I], v: &[I]) -> I {
    let mut acc = I::zero();
    for (i, ui) in u.iter().enumerate() {
        if ui.is_zero() {
            continue;
        }
        for (j, vj) in v.iter().enumerate() {
            acc = acc + ui.clone() * m[i][j].clone() * vj.clone();
        }
    }
    acc
}

fn axpy<I: Integer + Signed + Clone>(w: &mut [I], q: &I, x: &[I]) {
    for (wi, xi) in w.iter_mut().zip(x) {
        *wi = wi.clone() + q.clone() * xi.clone();
    }
}

/// Finds an integer `T` with `T M T^t = J` for an antisymmetric unimodular `M`.
///
/// Symplectic Gram–Schmidt over the integers: take the first remaining vector
/// `u`, run a Euclidean reduction on its pairings with the other remaining
/// vectors until exactly one partner `v` with pairing `±1` survives, then
/// project every other vector off the hyperbolic plane `(u, v)`.
pub fn symplectic_reduce<I: Integer + Signed + Clone>(
    m: &[Vec<I>],
) -> Result<SymplecticTransform<I>, HomologyError> {
    let n = m.len();
    if n % 2 == 1 || m.iter().any(|r| r.len() != n) {
        return Err(HomologyError::NotSquare);
    }
    for i in 0..n {
        for j in 0..n {
            if m[i][j] != -m[j][i].clone() {
                return Err(HomologyError::NotAntisymmetric);
            }
        }
    }
    if !determinant(m).abs().is_one() {
        return Err(HomologyError::NotUnimodular);
    }
    let g = n / 2;
    let mut remaining: Vec<Vec<I>> = identity(n);
    let mut alphas = Vec::with_capacity(g);
    let mut betas = Vec::with_capacity(g);
    while !remaining.is_empty() {
        let u = remaining.remove(0);
        let mut pairs: Vec<I> = remaining.iter().map(|w| pairing(m, &u, w)).collect();
        loop {
            let nonzero: Vec<usize> = (0..pairs.len()).filter(|&k| !pairs[k].is_zero()).collect();
            let Some(&pivot) = nonzero.iter().min_by(|&&a, &&b| pairs[a].abs().cmp(&pairs[b].abs())) else {
                return Err(HomologyError::NotUnimodular);
            };
            if nonzero.len() == 1 {
                break;
            }
            let p = pairs[pivot].clone();
            let pivot_vec = remaining[pivot].clone();
            for &l in &nonzero {
                if l == pivot {
                    continue;
                }
                let q = pairs[l].div_floor(&p);
                axpy(&mut remaining[l], &-q.clone(), &pivot_vec);
                pairs[l] = pairs[l].clone() - q * p.clone();
            }
        }
        let k = (0..pairs.len()).find(|&k| !pairs[k].is_zero()).unwrap();
        if !pairs[k].abs().is_one() {
            return Err(HomologyError::NotUnimodular);
        }
        let v = remaining.remove(k);
        let (a, b) = if pairs[k].is_one() { (u, v) } else { (v, u) };
        for w in remaining.iter_mut() {
            let wa = pairing(m, w, &a);
            let wb = pairing(m, w, &b);
            axpy(w, &wa, &b);
            axpy(w, &-wb, &a);
        }
        alphas.push(a);
        betas.push(b);
    }
    alphas.extend(betas);
    let transform = SymplecticTransform { t: alphas };
    debug_assert!(transform.apply(m) == standard_form(g));
    Ok(transform)
}

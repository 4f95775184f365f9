//! Small dense linear algebra over any [`Scalar`].
//!
//! Rational inputs give exact answers; float inputs use partial pivoting and
//! the supplied zero threshold.

use crate::scalar::Scalar;

/// Incremental row-echelon basis used for greedy independence tests.
#[derive(Debug, Clone)]
pub struct EchelonBasis<S> {
    dim: usize,
    tol: f64,
    rows: Vec<(usize, Vec<S>)>,
}

impl<S: Scalar> EchelonBasis<S> {
    pub fn new(dim: usize, tol: f64) -> Self {
        EchelonBasis { dim, tol, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &[S]) -> Vec<S> {
        let mut r = v.to_vec();
        for (pivot, row) in &self.rows {
            if r[*pivot].is_zero() {
                continue;
            }
            let factor = r[*pivot].clone() / row[*pivot].clone();
            for (ri, bi) in r.iter_mut().zip(row) {
                *ri = ri.clone() - factor.clone() * bi.clone();
            }
        }
        r
    }

    /// Adds `v` if it is independent of the current span; returns whether it was added.
    pub fn try_insert(&mut self, v: &[S]) -> bool {
        assert_eq!(v.len(), self.dim, "vector length");
        let scale = v.iter().map(Scalar::magnitude).fold(1.0, f64::max);
        let r = self.reduce(v);
        let pivot = r
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_negligible(self.tol * scale))
            .max_by(|a, b| a.1.magnitude().total_cmp(&b.1.magnitude()))
            .map(|(i, _)| i);
        match pivot {
            Some(p) => {
                self.rows.push((p, r));
                true
            }
            None => false,
        }
    }
}

/// Indices of a maximal independent subset of `vectors`, chosen greedily in order.
pub fn independent_subset<S: Scalar>(vectors: &[Vec<S>], dim: usize, tol: f64) -> Vec<usize> {
    let mut basis = EchelonBasis::new(dim, tol);
    vectors
        .iter()
        .enumerate()
        .filter_map(|(i, v)| basis.try_insert(v).then_some(i))
        .collect()
}

pub fn rank<S: Scalar>(vectors: &[Vec<S>], dim: usize, tol: f64) -> usize {
    independent_subset(vectors, dim, tol).len()
}

/// Solves the square system `a x = b` (`a` given by rows).
///
/// Returns `None` when `a` is singular to within `tol`.
pub fn solve<S: Scalar>(a: &[Vec<S>], b: &[S], tol: f64) -> Option<Vec<S>> {
    let n = b.len();
    assert_eq!(a.len(), n, "row count");
    let mut m: Vec<Vec<S>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            assert_eq!(row.len(), n, "column count");
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let scale = a.iter().flatten().map(Scalar::magnitude).fold(1.0, f64::max);
    for col in 0..n {
        let pivot = (col..n)
            .filter(|&r| !m[r][col].is_zero())
            .max_by(|&x, &y| m[x][col].magnitude().total_cmp(&m[y][col].magnitude()))?;
        if m[pivot][col].is_negligible(tol * scale) {
            return None;
        }
        m.swap(col, pivot);
        let p = m[col][col].clone();
        for r in (col + 1)..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone() / p.clone();
            for c in col..=n {
                let delta = factor.clone() * m[col][c].clone();
                m[r][c] = m[r][c].clone() - delta;
            }
        }
    }
    let mut x = vec![S::zero(); n];
    for r in (0..n).rev() {
        let mut acc = m[r][n].clone();
        for c in (r + 1)..n {
            acc = acc - m[r][c].clone() * x[c].clone();
        }
        x[r] = acc / m[r][r].clone();
    }
    Some(x)
}

/// Matrix with the given vectors as columns, returned by rows.
pub fn columns_to_rows<S: Scalar>(cols: &[Vec<S>], dim: usize) -> Vec<Vec<S>> {
    (0..dim)
        .map(|i| cols.iter().map(|c| c[i].clone()).collect())
        .collect()
}

pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter()
        .zip(b)
        .fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

/// Orthogonal projection of `b` onto the span of `cols`.
///
/// Returns the coefficients on a maximal independent subset (zeros elsewhere)
/// and the Euclidean norm of the residual `b - A c`.
pub fn project<S: Scalar>(cols: &[Vec<S>], b: &[S], tol: f64) -> (Vec<S>, f64) {
    let dim = b.len();
    let basis = independent_subset(cols, dim, tol);
    let mut coeffs = vec![S::zero(); cols.len()];
    if !basis.is_empty() {
        let gram: Vec<Vec<S>> = basis
            .iter()
            .map(|&i| basis.iter().map(|&j| dot(&cols[i], &cols[j])).collect())
            .collect();
        let rhs: Vec<S> = basis.iter().map(|&i| dot(&cols[i], b)).collect();
        let c = solve(&gram, &rhs, tol * tol).expect("Gram matrix of an independent set is invertible");
        for (k, &i) in basis.iter().enumerate() {
            coeffs[i] = c[k].clone();
        }
    }
    let mut residual = b.to_vec();
    for (col, c) in cols.iter().zip(&coeffs) {
        if c.is_zero() {
            continue;
        }
        for (r, x) in residual.iter_mut().zip(col) {
            *r = r.clone() - c.clone() * x.clone();
        }
    }
    let norm_sq = dot(&residual, &residual);
    (coeffs, norm_sq.to_f64().max(0.0).sqrt())
}

/// `m v` for `m` given by rows.
pub fn mat_vec<S: Scalar>(m: &[Vec<S>], v: &[S]) -> Vec<S> {
    m.iter().map(|row| dot(row, v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat, Rational};

    #[test]
    fn exact_solve() {
        let a = vec![vec![int(2), int(1)], vec![int(1), int(3)]];
        let x = solve(&a, &[int(3), int(5)], 0.0).unwrap();
        assert_eq!(x, vec![rat(4, 5), rat(7, 5)]);
    }

    #[test]
    fn singular_detected() {
        let a = vec![vec![int(1), int(2)], vec![int(2), int(4)]];
        assert!(solve(&a, &[int(1), int(1)], 0.0).is_none());
        let f = vec![vec![1.0, 2.0], vec![2.0, 4.0 + 1e-14]];
        assert!(solve(&f, &[1.0, 1.0], 1e-9).is_none());
    }

    #[test]
    fn greedy_subset_and_rank() {
        let v: Vec<Vec<Rational>> = vec![
            vec![int(1), int(0), int(0)],
            vec![int(2), int(0), int(0)],
            vec![int(0), int(1), int(1)],
        ];
        assert_eq!(independent_subset(&v, 3, 0.0), vec![0, 2]);
        assert_eq!(rank(&v, 3, 0.0), 2);
    }

    #[test]
    fn projection_residual() {
        let cols = vec![vec![int(1), int(0), int(0)], vec![int(0), int(1), int(0)]];
        let (c, res) = project(&cols, &[int(3), int(4), int(12)], 0.0);
        assert_eq!(c, vec![int(3), int(4)]);
        assert_eq!(res, 12.0);
        let (_, zero) = project(&cols, &[int(1), int(1), int(0)], 0.0);
        assert_eq!(zero, 0.0);
    }
}

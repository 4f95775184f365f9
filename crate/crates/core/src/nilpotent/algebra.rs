use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{format_rational, Rational, Scalar};

/// Graded nilpotent Lie algebra on a degree-ordered basis.
///
/// `constants[i][j][m]` is the coefficient of `e_m` in `[e_i, e_j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedLieAlgebra<S> {
    degrees: Vec<usize>,
    constants: Vec<Vec<Vec<S>>>,
}

/// One nonzero structure constant `c^m_{ij}` with `i < j` (0-based indices).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstantEntry {
    pub i: usize,
    pub j: usize,
    pub m: usize,
    pub value: String,
}

impl<S: Scalar> GradedLieAlgebra<S> {
    /// Abelian algebra with the given basis degrees (nondecreasing, ≥ 1).
    pub fn abelian(degrees: Vec<usize>) -> Result<Self> {
        if degrees.contains(&0) || degrees.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::AlgebraMismatch("basis degrees must be positive and nondecreasing".into()));
        }
        let d = degrees.len();
        Ok(GradedLieAlgebra { degrees, constants: vec![vec![vec![S::zero(); d]; d]; d] })
    }

    /// Builds an algebra from entries `[e_i, e_j] ∋ value · e_m`; antisymmetric partners are implied.
    pub fn from_constants(degrees: Vec<usize>, entries: impl IntoIterator<Item = (usize, usize, usize, S)>) -> Result<Self> {
        let mut alg = Self::abelian(degrees)?;
        let d = alg.dim();
        for (i, j, m, v) in entries {
            if i >= d || j >= d || m >= d {
                return Err(Error::IndexOutOfRange { index: i.max(j).max(m), dim: d });
            }
            if v.is_zero() {
                continue;
            }
            if i == j {
                return Err(Error::AlgebraMismatch(format!("[e{i}, e{i}] must vanish")));
            }
            if alg.degrees[m] != alg.degrees[i] + alg.degrees[j] {
                return Err(Error::AlgebraMismatch(format!(
                    "constant c^{m}_{{{i}{j}}} violates the grading"
                )));
            }
            alg.constants[i][j][m] = v.clone();
            alg.constants[j][i][m] = -v;
        }
        Ok(alg)
    }

    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    /// Highest degree present (0 for the zero algebra).
    pub fn step(&self) -> usize {
        self.degrees.last().copied().unwrap_or(0)
    }

    /// Dimension of each degree `1..=step`.
    pub fn dims(&self) -> Vec<usize> {
        (1..=self.step())
            .map(|w| self.degrees.iter().filter(|&&d| d == w).count())
            .collect()
    }

    pub fn constant(&self, i: usize, j: usize, m: usize) -> &S {
        &self.constants[i][j][m]
    }

    pub fn is_abelian(&self) -> bool {
        self.constants.iter().flatten().flatten().all(|c| c.is_zero())
    }

    /// Nonzero constants with `i < j`.
    pub fn nonzero_constants(&self) -> Vec<(usize, usize, usize, S)> {
        let d = self.dim();
        let mut out = Vec::new();
        for i in 0..d {
            for j in (i + 1)..d {
                for m in 0..d {
                    let c = &self.constants[i][j][m];
                    if !c.is_zero() {
                        out.push((i, j, m, c.clone()));
                    }
                }
            }
        }
        out
    }

    pub fn check_len(&self, v: &[S]) -> Result<()> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: v.len() });
        }
        Ok(())
    }

    /// Bilinear extension of the structure constants.
    pub fn bracket(&self, x: &[S], y: &[S]) -> Result<Vec<S>> {
        self.check_len(x)?;
        self.check_len(y)?;
        Ok(self.bracket_unchecked(x, y))
    }

    pub(crate) fn bracket_unchecked(&self, x: &[S], y: &[S]) -> Vec<S> {
        let d = self.dim();
        let mut out = vec![S::zero(); d];
        for i in 0..d {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..d {
                if y[j].is_zero() || i == j {
                    continue;
                }
                let xy = x[i].clone() * y[j].clone();
                for (m, c) in self.constants[i][j].iter().enumerate() {
                    if !c.is_zero() {
                        out[m] = out[m].clone() + xy.clone() * c.clone();
                    }
                }
            }
        }
        out
    }

    pub fn basis(&self, i: usize) -> Vec<S> {
        let mut e = vec![S::zero(); self.dim()];
        e[i] = S::one();
        e
    }

    /// Largest magnitude of `c^m_{ij} + c^m_{ji}` over all indices.
    pub fn antisymmetry_residual(&self) -> f64 {
        let d = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                for m in 0..d {
                    let s = self.constants[i][j][m].clone() + self.constants[j][i][m].clone();
                    worst = worst.max(s.magnitude());
                }
            }
        }
        worst
    }

    /// Largest component of `[e_i,[e_j,e_k]] + [e_j,[e_k,e_i]] + [e_k,[e_i,e_j]]` over basis triples.
    pub fn jacobi_residual(&self) -> f64 {
        let d = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in (i + 1)..d {
                for k in (j + 1)..d {
                    let (ei, ej, ek) = (self.basis(i), self.basis(j), self.basis(k));
                    let a = self.bracket_unchecked(&ei, &self.bracket_unchecked(&ej, &ek));
                    let b = self.bracket_unchecked(&ej, &self.bracket_unchecked(&ek, &ei));
                    let c = self.bracket_unchecked(&ek, &self.bracket_unchecked(&ei, &ej));
                    for m in 0..d {
                        let s = a[m].clone() + b[m].clone() + c[m].clone();
                        worst = worst.max(s.magnitude());
                    }
                }
            }
        }
        worst
    }

    /// Every nonzero `c^m_{ij}` satisfies `deg m = deg i + deg j`.
    pub fn is_graded(&self) -> bool {
        let d = self.dim();
        (0..d).all(|i| {
            (0..d).all(|j| {
                (0..d).all(|m| {
                    self.constants[i][j][m].is_zero() || self.degrees[m] == self.degrees[i] + self.degrees[j]
                })
            })
        })
    }

    /// Applies `f` to every structure constant.
    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> GradedLieAlgebra<T> {
        GradedLieAlgebra {
            degrees: self.degrees.clone(),
            constants: self
                .constants
                .iter()
                .map(|a| a.iter().map(|b| b.iter().map(&f).collect()).collect())
                .collect(),
        }
    }

    /// Multiplies every constant landing in degree `m` by `tau(m)`.
    pub(crate) fn scale_by_landing_degree(&self, tau: impl Fn(usize) -> S) -> Self {
        let mut out = self.clone();
        let d = self.dim();
        for i in 0..d {
            for j in 0..d {
                for m in 0..d {
                    let c = &mut out.constants[i][j][m];
                    if !c.is_zero() {
                        *c = c.clone() * tau(self.degrees[m]);
                    }
                }
            }
        }
        out
    }

    /// Start offset and length of each degree block `1..=step`.
    pub fn blocks(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let mut start = 0;
        for n in self.dims() {
            out.push((start, n));
            start += n;
        }
        out
    }
}

impl GradedLieAlgebra<Rational> {
    pub fn to_scalar<T: Scalar>(&self) -> GradedLieAlgebra<T> {
        self.map(T::from_rational)
    }

    pub fn constant_table(&self) -> Vec<ConstantEntry> {
        self.nonzero_constants()
            .into_iter()
            .map(|(i, j, m, v)| ConstantEntry { i, j, m, value: format_rational(&v) })
            .collect()
    }
}

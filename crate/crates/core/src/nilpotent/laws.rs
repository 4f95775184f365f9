//! Deformation scalings of graded algebras and the closed-form step-2 and
//! step-3 group laws they produce.

use crate::error::{Error, Result};
use crate::nilpotent::GradedLieAlgebra;
use crate::scalar::Scalar;

/// Multipliers `(τ₂, …, τ_s)` applied to structure constants by landing degree.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeScaling<S> {
    taus: Vec<S>,
}

impl<S: Scalar> DegreeScaling<S> {
    pub fn new(taus: Vec<S>) -> Self {
        DegreeScaling { taus }
    }

    /// `τ_m = t` for every degree.
    pub fn uniform(step: usize, t: S) -> Self {
        DegreeScaling { taus: vec![t; step.saturating_sub(1)] }
    }

    /// `τ₂ = t`, `τ_m = t·u^{m−2}`: the two-parameter family of the iterated deformation.
    pub fn two_parameter(step: usize, t: S, u: S) -> Self {
        DegreeScaling {
            taus: (2..=step).map(|m| t.clone() * u.powi(m as i32 - 2)).collect(),
        }
    }

    /// Iterated parameters `(t₁, t₂, …)` give `τ_m = t₁ t₂ … t_{m−1}`.
    pub fn iterated(params: &[S]) -> Self {
        let mut acc = S::one();
        DegreeScaling {
            taus: params
                .iter()
                .map(|p| {
                    acc = acc.clone() * p.clone();
                    acc.clone()
                })
                .collect(),
        }
    }

    pub fn taus(&self) -> &[S] {
        &self.taus
    }

    /// `τ_m` for `m ≥ 2`.
    pub fn tau(&self, m: usize) -> S {
        self.taus.get(m.wrapping_sub(2)).cloned().unwrap_or_else(S::zero)
    }
}

/// Constants `c^m_{ij}` multiplied by `τ_{deg m}`.
pub fn scaled_algebra<S: Scalar>(alg: &GradedLieAlgebra<S>, scaling: &DegreeScaling<S>) -> Result<GradedLieAlgebra<S>> {
    let expected = alg.step().saturating_sub(1);
    if scaling.taus.len() != expected {
        return Err(Error::DimensionMismatch { expected, found: scaling.taus.len() });
    }
    Ok(alg.scale_by_landing_degree(|m| scaling.tau(m)))
}

/// Antisymmetric bilinear map `ℒ: H × H → N` of a step-2 graded algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct LeviForm<S> {
    h_dim: usize,
    n_dim: usize,
    /// `table[m][i][j]`
    table: Vec<Vec<Vec<S>>>,
}

impl<S: Scalar> LeviForm<S> {
    pub fn new(h_dim: usize, n_dim: usize, table: Vec<Vec<Vec<S>>>) -> Result<Self> {
        let shape_ok = table.len() == n_dim
            && table.iter().all(|t| t.len() == h_dim && t.iter().all(|r| r.len() == h_dim));
        if !shape_ok {
            return Err(Error::DimensionMismatch { expected: n_dim, found: table.len() });
        }
        Ok(LeviForm { h_dim, n_dim, table })
    }

    /// Degree-1 block as `H`, degree-2 block as `N`.
    pub fn from_algebra(alg: &GradedLieAlgebra<S>) -> Result<Self> {
        if alg.step() > 2 {
            return Err(Error::AlgebraMismatch(format!("Levi form needs step ≤ 2, algebra has step {}", alg.step())));
        }
        let dims = alg.dims();
        let h_dim = dims.first().copied().unwrap_or(0);
        let n_dim = dims.get(1).copied().unwrap_or(0);
        let table = (0..n_dim)
            .map(|m| {
                (0..h_dim)
                    .map(|i| (0..h_dim).map(|j| alg.constant(i, j, h_dim + m).clone()).collect())
                    .collect()
            })
            .collect();
        Ok(LeviForm { h_dim, n_dim, table })
    }

    pub fn h_dim(&self) -> usize {
        self.h_dim
    }

    pub fn n_dim(&self) -> usize {
        self.n_dim
    }

    pub fn eval(&self, h: &[S], k: &[S]) -> Result<Vec<S>> {
        if h.len() != self.h_dim || k.len() != self.h_dim {
            return Err(Error::DimensionMismatch { expected: self.h_dim, found: h.len().max(k.len()) });
        }
        Ok(self
            .table
            .iter()
            .map(|t| {
                let mut acc = S::zero();
                for (i, hi) in h.iter().enumerate() {
                    for (j, kj) in k.iter().enumerate() {
                        acc = acc + t[i][j].clone() * hi.clone() * kj.clone();
                    }
                }
                acc
            })
            .collect())
    }
}

/// `(h,n,t)·(h',n',t) = (h+h', n+n' + (t/2) ℒ(h,h'))`.
pub fn law_k1<S: Scalar>(h: &[S], n: &[S], h2: &[S], n2: &[S], t: &S, levi: &LeviForm<S>) -> Result<(Vec<S>, Vec<S>)> {
    if n.len() != levi.n_dim || n2.len() != levi.n_dim {
        return Err(Error::DimensionMismatch { expected: levi.n_dim, found: n.len().max(n2.len()) });
    }
    let l = levi.eval(h, h2)?;
    let half_t = t.clone() / S::from_i64(2);
    let hh = h.iter().zip(h2).map(|(a, b)| a.clone() + b.clone()).collect();
    let nn = n
        .iter()
        .zip(n2)
        .zip(&l)
        .map(|((a, b), c)| a.clone() + b.clone() + half_t.clone() * c.clone())
        .collect();
    Ok((hh, nn))
}

/// An element of a step-3 graded algebra split into its degree blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct Graded3<S> {
    pub deg1: Vec<S>,
    pub deg2: Vec<S>,
    pub deg3: Vec<S>,
}

impl<S: Scalar> Graded3<S> {
    pub fn split(alg: &GradedLieAlgebra<S>, v: &[S]) -> Result<Self> {
        alg.check_len(v)?;
        let b = step3_blocks(alg)?;
        Ok(Graded3 {
            deg1: v[b[0].0..b[0].0 + b[0].1].to_vec(),
            deg2: v[b[1].0..b[1].0 + b[1].1].to_vec(),
            deg3: v[b[2].0..b[2].0 + b[2].1].to_vec(),
        })
    }

    pub fn join(&self) -> Vec<S> {
        self.deg1.iter().chain(&self.deg2).chain(&self.deg3).cloned().collect()
    }
}

fn step3_blocks<S: Scalar>(alg: &GradedLieAlgebra<S>) -> Result<Vec<(usize, usize)>> {
    if alg.step() != 3 {
        return Err(Error::AlgebraMismatch(format!("step-3 law needs a step-3 algebra, got step {}", alg.step())));
    }
    Ok(alg.blocks())
}

/// Closed-form product on the `(t, tu)`-deformed step-3 group:
///
/// * degree 1: `h₁ + k₁`
/// * degree 2: `h₂ + k₂ + (t/2)[h₁,k₁]`
/// * degree 3: `h₃ + k₃ + (tu/2)([h₁,k₂] + [h₂,k₁]) + (t²u/12)([h₁,[h₁,k₁]] + [k₁,[k₁,h₁]])`
pub fn law_k2<S: Scalar>(h: &Graded3<S>, k: &Graded3<S>, t: &S, u: &S, alg: &GradedLieAlgebra<S>) -> Result<Graded3<S>> {
    let blocks = step3_blocks(alg)?;
    for (g, name) in [(h, "h"), (k, "k")] {
        let lens = [g.deg1.len(), g.deg2.len(), g.deg3.len()];
        for (len, (_, n)) in lens.iter().zip(&blocks) {
            if len != n {
                return Err(Error::AlgebraMismatch(format!(
                    "block of `{name}` has length {len}, algebra block has {n}"
                )));
            }
        }
    }
    let d = alg.dim();
    let embed = |block: usize, v: &[S]| {
        let mut out = vec![S::zero(); d];
        let (start, _) = blocks[block];
        for (i, x) in v.iter().enumerate() {
            out[start + i] = x.clone();
        }
        out
    };
    let extract = |block: usize, v: &[S]| {
        let (start, n) = blocks[block];
        v[start..start + n].to_vec()
    };
    let br = |a: &[S], b: &[S]| alg.bracket_unchecked(a, b);
    let (h1, h2) = (embed(0, &h.deg1), embed(1, &h.deg2));
    let (k1, k2) = (embed(0, &k.deg1), embed(1, &k.deg2));

    let two = S::from_i64(2);
    let twelve = S::from_i64(12);
    let c2 = t.clone() / two.clone();
    let c3a = t.clone() * u.clone() / two;
    let c3b = t.clone() * t.clone() * u.clone() / twelve;

    let h1k1 = br(&h1, &k1);
    let mixed: Vec<S> = br(&h1, &k2).into_iter().zip(br(&h2, &k1)).map(|(a, b)| a + b).collect();
    let k1h1 = br(&k1, &h1);
    let triple: Vec<S> = br(&h1, &h1k1).into_iter().zip(br(&k1, &k1h1)).map(|(a, b)| a + b).collect();

    let add = |a: &[S], b: &[S]| a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect::<Vec<S>>();
    let axpy = |a: Vec<S>, c: &S, x: &[S]| a.into_iter().zip(x).map(|(p, q)| p + c.clone() * q.clone()).collect::<Vec<S>>();

    let deg1 = add(&h.deg1, &k.deg1);
    let deg2 = axpy(add(&h.deg2, &k.deg2), &c2, &extract(1, &h1k1));
    let deg3 = axpy(axpy(add(&h.deg3, &k.deg3), &c3a, &extract(2, &mixed)), &c3b, &extract(2, &triple));
    Ok(Graded3 { deg1, deg2, deg3 })
}

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg;
use crate::newton::{self, NewtonOptions};
use crate::scalar::{Rational, Scalar};
use crate::symexpr::{Coordinates, Expr};

/// Tubular embedding `φ: V × ℝ^{d−v} → ℝᵈ` around `V = ℝᵛ × {0}`.
///
/// `φ` is given by `d` polynomials in the variables `(x₁…x_v, y₁…y_{d−v})`.
/// The first `h` fiber coordinates span the weight-one block `H`; the rest
/// parametrise the complement. The splitting map `L` is folded into `φ`.
#[derive(Debug, Clone, PartialEq)]
pub struct TubularData {
    dim: usize,
    v: usize,
    h: usize,
    phi: Vec<Expr>,
    jac: Vec<Vec<Expr>>,
    normal_block: Vec<Vec<Rational>>,
    affine: bool,
}

impl TubularData {
    /// Checks `φ(x, 0) = (x, 0)` and that the normal block of `∂φ/∂y` along
    /// `V` is a constant invertible matrix.
    pub fn new(dim: usize, v: usize, h: usize, phi: Vec<Expr>) -> Result<Self> {
        if v > dim || h > dim - v {
            return Err(Error::InvalidTubular(format!("need v ≤ d and h ≤ d − v (d={dim}, v={v}, h={h})")));
        }
        if phi.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: phi.len() });
        }
        if let Some(e) = phi.iter().find(|e| e.nvars() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: e.nvars() });
        }
        let fiber_mask: Vec<bool> = (0..dim).map(|i| i >= v).collect();
        for (i, e) in phi.iter().enumerate() {
            let on_v = e.restrict_zero(&fiber_mask);
            let expected = if i < v { Expr::var(dim, i) } else { Expr::zero(dim) };
            if on_v != expected {
                return Err(Error::InvalidTubular(format!("component {} of phi(x, 0) is not the inclusion of V", i + 1)));
            }
        }
        let jac: Vec<Vec<Expr>> = phi
            .iter()
            .map(|e| (0..dim).map(|j| e.diff(j)).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        let mut normal_block = Vec::with_capacity(dim - v);
        for row in &jac[v..] {
            let mut r = Vec::with_capacity(dim - v);
            for e in &row[v..] {
                let c = e.restrict_zero(&fiber_mask).as_constant().ok_or_else(|| {
                    Error::InvalidTubular("normal block of the fiber differential must be constant along V".into())
                })?;
                r.push(c);
            }
            normal_block.push(r);
        }
        if linalg::rank(&normal_block, dim - v, 0.0) < dim - v {
            return Err(Error::InvalidTubular("normal block of the fiber differential is singular".into()));
        }
        let affine = phi.iter().all(|e| e.degree().is_none_or(|k| k <= 1));
        Ok(TubularData { dim, v, h, phi, jac, normal_block, affine })
    }

    /// Parses `φ` over the coordinates returned by [`TubularData::coordinates`].
    pub fn parse(dim: usize, v: usize, h: usize, phi: &[impl AsRef<str>]) -> Result<Self> {
        let coords = Self::coordinates(dim, v);
        let exprs = phi.iter().map(|s| coords.parse(s.as_ref())).collect::<Result<Vec<_>>>()?;
        TubularData::new(dim, v, h, exprs)
    }

    /// `x1…xv` for the base and `y1…y(d−v)` for the fiber.
    pub fn coordinates(dim: usize, v: usize) -> Coordinates {
        let names = (1..=v).map(|i| format!("x{i}")).chain((1..=dim - v).map(|i| format!("y{i}"))).collect();
        Coordinates::new(names).expect("generated names are valid")
    }

    /// `φ(x, y) = (x, y)`.
    pub fn identity(dim: usize, v: usize, h: usize) -> Result<Self> {
        TubularData::new(dim, v, h, (0..dim).map(|i| Expr::var(dim, i)).collect())
    }

    /// `φ(x, y) = (x, A y)` for an invertible `A`.
    pub fn linear(dim: usize, v: usize, h: usize, a: &[Vec<Rational>]) -> Result<Self> {
        let k = dim - v;
        if a.len() != k || a.iter().any(|r| r.len() != k) {
            return Err(Error::DimensionMismatch { expected: k, found: a.len() });
        }
        let mut phi: Vec<Expr> = (0..v).map(|i| Expr::var(dim, i)).collect();
        for row in a {
            let mut e = Expr::zero(dim);
            for (j, c) in row.iter().enumerate() {
                e = e.add(&Expr::var(dim, v + j).scale(c));
            }
            phi.push(e);
        }
        TubularData::new(dim, v, h, phi)
    }

    /// Product tubular data for `(ℝ^{d₁} × ℝ^{d₂}, V₁ × V₂)`.
    ///
    /// The ambient coordinates are ordered `(x¹, x², n¹, n²)` and the fiber
    /// `(H¹, H², rest¹, rest²)` so that `V` and `H` stay leading blocks.
    pub fn product(a: &TubularData, b: &TubularData) -> Result<(TubularData, ProductLayout)> {
        let dim = a.dim + b.dim;
        let v = a.v + b.v;
        let h = a.h + b.h;
        let layout = ProductLayout::new(a, b);
        let mut phi = vec![Expr::zero(dim); dim];
        for (i, e) in a.phi.iter().enumerate() {
            phi[layout.ambient_a[i]] = e.reindex(dim, &layout.vars_a);
        }
        for (i, e) in b.phi.iter().enumerate() {
            phi[layout.ambient_b[i]] = e.reindex(dim, &layout.vars_b);
        }
        Ok((TubularData::new(dim, v, h, phi)?, layout))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn h(&self) -> usize {
        self.h
    }

    pub fn fiber_dim(&self) -> usize {
        self.dim - self.v
    }

    pub fn phi(&self) -> &[Expr] {
        &self.phi
    }

    pub fn is_affine(&self) -> bool {
        self.affine
    }

    /// Normal rows of `∂φ/∂y` along `V`: the map from fiber coordinates to `ℝᵈ/ℝᵛ`.
    pub fn normal_block(&self) -> &[Vec<Rational>] {
        &self.normal_block
    }

    pub fn eval<S: Scalar>(&self, x: &[S], y: &[S]) -> Result<Vec<S>> {
        let p = self.join(x, y)?;
        Ok(self.phi.iter().map(|e| e.eval(&p)).collect())
    }

    pub(crate) fn join<S: Scalar>(&self, x: &[S], y: &[S]) -> Result<Vec<S>> {
        if x.len() != self.v {
            return Err(Error::DimensionMismatch { expected: self.v, found: x.len() });
        }
        if y.len() != self.fiber_dim() {
            return Err(Error::DimensionMismatch { expected: self.fiber_dim(), found: y.len() });
        }
        Ok(x.iter().chain(y).cloned().collect())
    }

    /// `Dφ` at a point of the variable space, as matrix rows.
    pub fn jacobian_at<S: Scalar>(&self, p: &[S]) -> Vec<Vec<S>> {
        self.jac.iter().map(|row| row.iter().map(|e| e.eval(p)).collect()).collect()
    }

    /// `∂²φ_i/∂p_a∂p_b (p) w_a w_b` for each component `i`.
    pub fn second_derivative<S: Scalar>(&self, p: &[S], w: &[S]) -> Result<Vec<S>> {
        let mut out = Vec::with_capacity(self.dim);
        for row in &self.jac {
            let mut acc = S::zero();
            for (a, e) in row.iter().enumerate() {
                if w[a].is_zero() {
                    continue;
                }
                for (b, wb) in w.iter().enumerate() {
                    if wb.is_zero() {
                        continue;
                    }
                    acc = acc + e.diff(b)?.eval(p) * w[a].clone() * wb.clone();
                }
            }
            out.push(acc);
        }
        Ok(out)
    }

    /// Fiber coordinates of the normal class of an ambient vector at `V`.
    pub fn normal_coordinates(&self, w: &[Rational]) -> Result<Vec<Rational>> {
        linalg::solve(&self.normal_block, &w[self.v..], 0.0)
            .ok_or_else(|| Error::InvalidTubular("normal block is singular".into()))
    }

    /// Ambient vector `∂φ/∂y (x, 0) · y`.
    pub fn push_fiber<S: Scalar>(&self, x: &[S], y: &[S]) -> Result<Vec<S>> {
        let p = self.join(x, &vec![S::zero(); self.fiber_dim()])?;
        let j = self.jacobian_at(&p);
        Ok(j.iter().map(|row| linalg::dot(&row[self.v..], y)).collect())
    }

    /// Solves `φ(x, y) = m` for `(x, y)`.
    ///
    /// Exact for affine `φ`; otherwise Newton in floating point from the
    /// linearisation along `V`, with the result rounded back to rationals.
    pub fn inverse(&self, m: &[Rational]) -> Result<(Vec<Rational>, Vec<Rational>)> {
        if m.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: m.len() });
        }
        if self.affine {
            let zero = vec![Rational::zero(); self.dim];
            let j = self.jacobian_at(&zero);
            let c: Vec<Rational> = self.phi.iter().map(|e| e.eval(&zero)).collect();
            let rhs: Vec<Rational> = m.iter().zip(&c).map(|(a, b)| a - b).collect();
            let p = linalg::solve(&j, &rhs, 0.0).ok_or_else(|| Error::InvalidTubular("phi is not invertible".into()))?;
            return Ok((p[..self.v].to_vec(), p[self.v..].to_vec()));
        }
        let mf: Vec<f64> = m.iter().map(Scalar::to_f64).collect();
        let x0: Vec<f64> = {
            let base = &mf[..self.v];
            let nb: Vec<Vec<f64>> = self.normal_block.iter().map(|r| r.iter().map(Scalar::to_f64).collect()).collect();
            let y = linalg::solve(&nb, &mf[self.v..], 1e-14).unwrap_or_else(|| vec![0.0; self.fiber_dim()]);
            base.iter().copied().chain(y).collect()
        };
        let f = |p: &[f64]| -> Result<Vec<f64>> {
            Ok(self.phi.iter().zip(&mf).map(|(e, target)| e.eval(p) - target).collect())
        };
        let jac = |p: &[f64]| -> Result<Vec<Vec<f64>>> { Ok(self.jacobian_at(p)) };
        let scale = mf.iter().fold(1.0f64, |acc, z| acc.max(z.abs()));
        let opts = NewtonOptions { tol: 1e-14 * scale, max_iter: 60, ..NewtonOptions::default() };
        let out = newton::solve_with(&f, jac, &x0, opts, newton::euclidean)?.x;
        let q: Vec<Rational> = out.iter().map(|&z| Rational::from_float(z).unwrap_or_else(Rational::zero)).collect();
        Ok((q[..self.v].to_vec(), q[self.v..].to_vec()))
    }
}

/// Index maps of [`TubularData::product`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductLayout {
    /// Product ambient index of each ambient coordinate of the first factor.
    pub ambient_a: Vec<usize>,
    pub ambient_b: Vec<usize>,
    /// Product variable index of each `(x, y)` variable of the first factor.
    pub vars_a: Vec<usize>,
    pub vars_b: Vec<usize>,
}

impl ProductLayout {
    fn new(a: &TubularData, b: &TubularData) -> Self {
        let v = a.v + b.v;
        let h = a.h + b.h;
        let na = a.fiber_dim();
        let ambient_a = (0..a.dim).map(|i| if i < a.v { i } else { v + (i - a.v) }).collect();
        let ambient_b = (0..b.dim).map(|i| if i < b.v { a.v + i } else { v + na + (i - b.v) }).collect();
        let vars_a = (0..a.dim)
            .map(|i| match i {
                i if i < a.v => i,
                i if i - a.v < a.h => v + (i - a.v),
                i => v + h + (i - a.v - a.h),
            })
            .collect();
        let vars_b = (0..b.dim)
            .map(|i| match i {
                i if i < b.v => a.v + i,
                i if i - b.v < b.h => v + a.h + (i - b.v),
                i => v + h + (na - a.h) + (i - b.v - b.h),
            })
            .collect();
        ProductLayout { ambient_a, ambient_b, vars_a, vars_b }
    }

    /// Splits a product variable vector `(x, y)` into the two factors' `(x, y)` vectors.
    pub fn split_vars<T: Clone>(&self, p: &[T]) -> (Vec<T>, Vec<T>) {
        (self.vars_a.iter().map(|&i| p[i].clone()).collect(), self.vars_b.iter().map(|&i| p[i].clone()).collect())
    }

    pub fn split_ambient<T: Clone>(&self, m: &[T]) -> (Vec<T>, Vec<T>) {
        (self.ambient_a.iter().map(|&i| m[i].clone()).collect(), self.ambient_b.iter().map(|&i| m[i].clone()).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    #[test]
    fn identity_and_linear_are_valid() {
        assert!(TubularData::identity(3, 1, 1).is_ok());
        let a = vec![vec![int(2), int(1)], vec![int(0), int(1)]];
        let t = TubularData::linear(3, 1, 1, &a).unwrap();
        assert!(t.is_affine());
        assert_eq!(t.normal_block(), a.as_slice());
    }

    #[test]
    fn rejects_bad_data() {
        // moves V
        assert!(TubularData::parse(2, 1, 0, &["x1 + x1^2", "y1"]).is_err());
        // leaves V at y = 0
        assert!(TubularData::parse(2, 1, 0, &["x1", "y1 + x1"]).is_err());
        // degenerate normal block
        assert!(TubularData::parse(2, 1, 0, &["x1 + y1", "y1^2"]).is_err());
        // normal block varies along V
        assert!(TubularData::parse(2, 1, 0, &["x1", "(1 + x1^2)*y1"]).is_err());
    }

    #[test]
    fn tangential_fiber_tilt_is_allowed() {
        let t = TubularData::parse(2, 1, 0, &["x1 + y1", "y1"]).unwrap();
        let (x, y) = t.inverse(&[int(3), int(1)]).unwrap();
        assert_eq!((x, y), (vec![int(2)], vec![int(1)]));
    }

    #[test]
    fn newton_inverse_of_quadratic_tubular() {
        let t = TubularData::parse(2, 1, 0, &["x1", "y1 + x1*y1^2"]).unwrap();
        let m = t.eval(&[rat(1, 2)], &[rat(1, 8)]).unwrap();
        let (x, y) = t.inverse(&m).unwrap();
        assert_eq!(x, vec![rat(1, 2)]);
        assert!((y[0].to_f64() - 0.125).abs() < 1e-14);
    }

    #[test]
    fn product_chart_is_pair_of_factor_charts() {
        let a = TubularData::parse(3, 1, 1, &["x1", "y1 + x1*y2^2", "y2"]).unwrap();
        let b = TubularData::parse(2, 1, 0, &["x1 + y1", "2*y1"]).unwrap();
        let (p, layout) = TubularData::product(&a, &b).unwrap();
        assert_eq!((p.dim(), p.v(), p.h()), (5, 2, 1));
        let vars: Vec<Rational> = vec![rat(1, 2), int(3), rat(-1, 3), int(2), rat(5, 7)];
        let m = p.eval(&vars[..2], &vars[2..]).unwrap();
        let (va, vb) = layout.split_vars(&vars);
        let (ma, mb) = layout.split_ambient(&m);
        assert_eq!(ma, a.eval(&va[..1], &va[1..]).unwrap());
        assert_eq!(mb, b.eval(&vb[..1], &vb[1..]).unwrap());
    }
}

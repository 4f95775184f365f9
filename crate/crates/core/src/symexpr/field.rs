use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};
use crate::symexpr::{Coordinates, Expr};

/// Polynomial vector field `Σ X^i ∂/∂x_i` on a chart of ℝᵈ.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VectorField {
    components: Vec<Expr>,
}

impl VectorField {
    pub fn new(components: Vec<Expr>) -> Result<Self> {
        let d = components.len();
        if let Some(bad) = components.iter().find(|c| c.nvars() != d) {
            return Err(Error::DimensionMismatch { expected: d, found: bad.nvars() });
        }
        Ok(VectorField { components })
    }

    pub fn zero(dim: usize) -> Self {
        VectorField { components: vec![Expr::zero(dim); dim] }
    }

    /// The coordinate field `∂/∂x_i`.
    pub fn coordinate(dim: usize, i: usize) -> Self {
        let mut components = vec![Expr::zero(dim); dim];
        components[i] = Expr::constant(dim, Rational::from_integer(1.into()));
        VectorField { components }
    }

    pub fn parse(coords: &Coordinates, texts: &[impl AsRef<str>]) -> Result<Self> {
        if texts.len() != coords.dim() {
            return Err(Error::DimensionMismatch { expected: coords.dim(), found: texts.len() });
        }
        let components = texts
            .iter()
            .map(|t| coords.parse(t.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        VectorField::new(components)
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Expr] {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Expr::is_zero)
    }

    fn check_same_chart(&self, other: &VectorField) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(())
    }

    pub fn add(&self, other: &VectorField) -> Result<VectorField> {
        self.check_same_chart(other)?;
        Ok(VectorField {
            components: self.components.iter().zip(&other.components).map(|(a, b)| a.add(b)).collect(),
        })
    }

    pub fn sub(&self, other: &VectorField) -> Result<VectorField> {
        self.check_same_chart(other)?;
        Ok(VectorField {
            components: self.components.iter().zip(&other.components).map(|(a, b)| a.sub(b)).collect(),
        })
    }

    pub fn scale(&self, k: &Rational) -> VectorField {
        VectorField { components: self.components.iter().map(|c| c.scale(k)).collect() }
    }

    /// Pointwise product `f X`.
    pub fn mul_fn(&self, f: &Expr) -> VectorField {
        VectorField { components: self.components.iter().map(|c| c.mul(f)).collect() }
    }

    /// Directional derivative `X f = Σ X^i ∂_i f`.
    pub fn apply(&self, f: &Expr) -> Result<Expr> {
        if f.nvars() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: f.nvars() });
        }
        let mut acc = Expr::zero(self.dim());
        for (i, xi) in self.components.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            acc = acc.add(&xi.mul(&f.diff(i)?));
        }
        Ok(acc)
    }

    pub fn eval<S: Scalar>(&self, point: &[S]) -> Result<Vec<S>> {
        if point.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: point.len() });
        }
        Ok(self.components.iter().map(|c| c.eval(point)).collect())
    }

    pub fn display(&self, coords: &Coordinates) -> String {
        let parts: Vec<String> = self.components.iter().map(|c| coords.print(c)).collect();
        format!("[{}]", parts.join(", "))
    }
}

/// Exact Lie bracket `[X,Y]^k = Σ_i (X^i ∂_i Y^k − Y^i ∂_i X^k)`.
pub fn lie_bracket(x: &VectorField, y: &VectorField) -> Result<VectorField> {
    x.check_same_chart(y)?;
    let components = (0..x.dim())
        .map(|k| Ok(x.apply(&y.components[k])?.sub(&y.apply(&x.components[k])?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(VectorField { components })
}

/// Componentwise evaluation, named for the operation table.
pub fn vf_eval<S: Scalar>(x: &VectorField, p: &[S]) -> Result<Vec<S>> {
    x.eval(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn xyz() -> Coordinates {
        Coordinates::new(vec!["x".into(), "y".into(), "z".into()]).unwrap()
    }

    fn field(c: &Coordinates, t: [&str; 3]) -> VectorField {
        VectorField::parse(c, &t).unwrap()
    }

    #[test]
    fn constant_fields_commute() {
        let b = lie_bracket(&VectorField::coordinate(3, 0), &VectorField::coordinate(3, 1)).unwrap();
        assert!(b.is_zero());
    }

    #[test]
    fn heisenberg_bracket() {
        let c = xyz();
        let x1 = field(&c, ["1", "0", "-y/2"]);
        let x2 = field(&c, ["0", "1", "x/2"]);
        assert_eq!(lie_bracket(&x1, &x2).unwrap(), VectorField::coordinate(3, 2));
    }

    #[test]
    fn product_rule_example() {
        let c = xyz();
        // [x ∂y, ∂x] = -∂y
        let b = lie_bracket(&field(&c, ["0", "x", "0"]), &VectorField::coordinate(3, 0)).unwrap();
        assert_eq!(b, VectorField::coordinate(3, 1).scale(&int(-1)));
    }

    #[test]
    fn evaluation() {
        let c = xyz();
        assert_eq!(VectorField::coordinate(3, 0).eval(&[5.0, 1.0, 2.0]).unwrap(), vec![1.0, 0.0, 0.0]);
        let xdz = field(&c, ["0", "0", "x"]);
        assert_eq!(xdz.eval(&[int(2), int(0), int(0)]).unwrap(), vec![int(0), int(0), int(2)]);
        assert_eq!(VectorField::zero(3).eval(&[1.0, 2.0, 3.0]).unwrap(), vec![0.0; 3]);
        assert!(matches!(xdz.eval(&[1.0]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let a = VectorField::coordinate(2, 0);
        let b = VectorField::coordinate(3, 0);
        assert!(matches!(lie_bracket(&a, &b), Err(Error::DimensionMismatch { .. })));
    }
}

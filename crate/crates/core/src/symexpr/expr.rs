use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{format_rational, Rational, Scalar};

/// Exponent vector of a monomial, ordered graded-lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn from_exponents(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn eval<S: Scalar>(&self, point: &[S]) -> S {
        let mut acc = S::one();
        for (x, &e) in point.iter().zip(&self.0) {
            for _ in 0..e {
                acc = acc * x.clone();
            }
        }
        acc
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Polynomial with exact rational coefficients in `nvars` coordinates.
///
/// Zero coefficients are never stored, so structural equality is equality
/// of polynomials.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Expr {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Expr {
    pub fn zero(nvars: usize) -> Self {
        Expr { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut e = Expr::zero(nvars);
        e.add_term(Monomial::one(nvars), c);
        e
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index {i} out of range");
        let mut e = Expr::zero(nvars);
        e.add_term(Monomial::var(nvars, i), Rational::one());
        e
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut e = Expr::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.0.len(), nvars, "monomial arity");
            e.add_term(m, c);
        }
        e
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let remove = {
            let slot = self.terms.entry(m.clone()).or_insert_with(Rational::zero);
            *slot += c;
            slot.is_zero()
        };
        if remove {
            self.terms.remove(&m);
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next()?;
                (m.degree() == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Coefficient of a single monomial (zero when absent).
    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    fn check_arity(&self, other: &Expr) {
        assert_eq!(self.nvars, other.nvars, "expressions over different charts");
    }

    pub fn add(&self, other: &Expr) -> Expr {
        self.check_arity(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Expr) -> Expr {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Expr {
        Expr {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, k: &Rational) -> Expr {
        if k.is_zero() {
            return Expr::zero(self.nvars);
        }
        Expr {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    pub fn mul(&self, other: &Expr) -> Expr {
        self.check_arity(other);
        let mut out = Expr::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Expr {
        let mut acc = Expr::constant(self.nvars, Rational::one());
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        acc
    }

    /// Exact partial derivative with respect to coordinate `i` (0-based).
    pub fn diff(&self, i: usize) -> Result<Expr> {
        if i >= self.nvars {
            return Err(Error::IndexOutOfRange { index: i, dim: self.nvars });
        }
        let mut out = Expr::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[i] -= 1;
            out.add_term(Monomial(exps), c * Rational::from_integer(e.into()));
        }
        Ok(out)
    }

    pub fn eval<S: Scalar>(&self, point: &[S]) -> S {
        assert_eq!(point.len(), self.nvars, "point dimension");
        self.terms.iter().fold(S::zero(), |acc, (m, c)| {
            acc + S::from_rational(c) * m.eval(point)
        })
    }

    /// Sets every variable flagged in `mask` to zero.
    pub fn restrict_zero(&self, mask: &[bool]) -> Expr {
        assert_eq!(mask.len(), self.nvars);
        Expr {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.0.iter().zip(mask).all(|(&e, &z)| !z || e == 0))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Composition `self(values[0], …, values[n-1])`; all values share one arity.
    pub fn substitute(&self, values: &[Expr]) -> Expr {
        assert_eq!(values.len(), self.nvars, "substitution arity");
        let target = values.first().map_or(0, Expr::nvars);
        let mut out = Expr::zero(target);
        let mut powers: Vec<Vec<Expr>> = values
            .iter()
            .map(|v| vec![Expr::constant(target, Rational::one()), v.clone()])
            .collect();
        for (m, c) in &self.terms {
            let mut term = Expr::constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().mul(&values[i]);
                    powers[i].push(next);
                }
                term = term.mul(&powers[i][e as usize]);
            }
            out = out.add(&term);
        }
        out
    }

    /// Re-embeds into a chart with `nvars` coordinates via `map[i]` = new index of variable `i`.
    pub fn reindex(&self, nvars: usize, map: &[usize]) -> Expr {
        assert_eq!(map.len(), self.nvars);
        Expr::from_terms(
            nvars,
            self.terms.iter().map(|(m, c)| {
                let mut e = vec![0; nvars];
                for (i, &k) in m.0.iter().enumerate() {
                    e[map[i]] += k;
                }
                (Monomial(e), c.clone())
            }),
        )
    }

    /// Univariate Taylor coefficient of `s^k` (only for one-variable expressions).
    pub fn univariate_coefficient(&self, k: u32) -> Rational {
        assert_eq!(self.nvars, 1, "univariate expression expected");
        self.coefficient(&Monomial(vec![k]))
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> ExprDisplay<'a> {
        ExprDisplay { expr: self, names }
    }
}

pub struct ExprDisplay<'a> {
    expr: &'a Expr,
    names: &'a [String],
}

impl fmt::Display for ExprDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.expr.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.expr.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            match (k, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let factors: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    let name = &self.names[i];
                    if e == 1 {
                        name.clone()
                    } else {
                        format!("{name}^{e}")
                    }
                })
                .collect();
            if factors.is_empty() {
                write!(f, "{}", format_rational(&mag))?;
            } else if mag.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", format_rational(&mag), factors.join("*"))?;
            }
        }
        Ok(())
    }
}

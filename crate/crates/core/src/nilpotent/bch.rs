//! Baker–Campbell–Hausdorff products via the Dynkin commutator series.
//!
//! `log(exp X · exp Y) = Σ_n (−1)^{n−1}/n Σ [X^{r₁}Y^{s₁}…X^{rₙ}Y^{sₙ}] / (|r+s| · Π rᵢ! sᵢ!)`
//! with right-nested brackets. On an algebra of step `s` every word longer than
//! `s` vanishes, so the sum is finite and exact over the rationals.

use std::collections::{BTreeMap, HashMap};
use std::sync::OnceLock;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::nilpotent::GradedLieAlgebra;
use crate::scalar::{int, Rational, Scalar};

/// Largest step for which the coefficient table is built.
pub const MAX_STEP: usize = 6;

/// A Dynkin word; `false` = X, `true` = Y.
type Word = Vec<bool>;

static TABLES: [OnceLock<Vec<(Word, Rational)>>; MAX_STEP + 1] = [const { OnceLock::new() }; MAX_STEP + 1];

fn factorial(n: usize) -> Rational {
    (1..=n).fold(Rational::one(), |acc, k| acc * int(k as i64))
}

fn collect_words(
    max_len: usize,
    n: usize,
    word: &mut Word,
    denom: Rational,
    remaining_pairs: usize,
    out: &mut BTreeMap<Word, Rational>,
) {
    if remaining_pairs == 0 {
        let len = word.len();
        if len == 0 {
            return;
        }
        let sign = if n % 2 == 1 { Rational::one() } else { -Rational::one() };
        let coeff = sign / (int(n as i64) * int(len as i64) * denom);
        let slot = out.entry(word.clone()).or_insert_with(Rational::zero);
        *slot += coeff;
        return;
    }
    let room = max_len - word.len();
    for r in 0..=room {
        for s in 0..=(room - r) {
            if r + s == 0 {
                continue;
            }
            let before = word.len();
            word.extend(std::iter::repeat_n(false, r));
            word.extend(std::iter::repeat_n(true, s));
            // each remaining pair needs at least one letter
            if max_len - word.len() >= remaining_pairs - 1 {
                let d = denom.clone() * factorial(r) * factorial(s);
                collect_words(max_len, n, word, d, remaining_pairs - 1, out);
            }
            word.truncate(before);
        }
    }
}

/// Aggregated Dynkin words of length ≤ `step` with nonzero coefficients.
fn table(step: usize) -> &'static [(Word, Rational)] {
    TABLES[step].get_or_init(|| {
        let mut acc = BTreeMap::new();
        for n in 1..=step {
            collect_words(step, n, &mut Vec::new(), Rational::one(), n, &mut acc);
        }
        acc.into_iter()
            .filter(|(w, c)| {
                // right-nested words ending in a repeated letter are [a, a] = 0
                !c.is_zero() && !(w.len() >= 2 && w[w.len() - 1] == w[w.len() - 2])
            })
            .collect()
    })
}

/// Number of nonzero Dynkin words used at the given step.
pub fn dynkin_word_count(step: usize) -> usize {
    table(step.min(MAX_STEP)).len()
}

/// `Z = log(exp X · exp Y)` on `alg`.
pub fn bch<S: Scalar>(alg: &GradedLieAlgebra<S>, x: &[S], y: &[S]) -> Result<Vec<S>> {
    alg.check_len(x)?;
    alg.check_len(y)?;
    let step = alg.step();
    if step > MAX_STEP {
        return Err(Error::StepTooLarge { step, max: MAX_STEP });
    }
    if alg.is_abelian() {
        return Ok(x.iter().zip(y).map(|(a, b)| a.clone() + b.clone()).collect());
    }
    let mut cache: HashMap<Word, Vec<S>> = HashMap::new();
    let mut z = vec![S::zero(); alg.dim()];
    for (word, coeff) in table(step) {
        let v = nested(alg, word, x, y, &mut cache);
        let c = S::from_rational(coeff);
        for (zi, vi) in z.iter_mut().zip(&v) {
            if !vi.is_zero() {
                *zi = zi.clone() + c.clone() * vi.clone();
            }
        }
    }
    Ok(z)
}

fn nested<S: Scalar>(
    alg: &GradedLieAlgebra<S>,
    word: &[bool],
    x: &[S],
    y: &[S],
    cache: &mut HashMap<Word, Vec<S>>,
) -> Vec<S> {
    if let Some(v) = cache.get(word) {
        return v.clone();
    }
    let letter = |b: bool| if b { y } else { x };
    let v = if word.len() == 1 {
        letter(word[0]).to_vec()
    } else {
        let inner = nested(alg, &word[1..], x, y, cache);
        if inner.iter().all(|c| c.is_zero()) {
            inner
        } else {
            alg.bracket_unchecked(letter(word[0]), &inner)
        }
    };
    cache.insert(word.to_vec(), v.clone());
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nilpotent::examples;
    use crate::scalar::rat;

    #[test]
    fn low_order_coefficients() {
        let t = table(3);
        let get = |w: &[bool]| t.iter().find(|(x, _)| x == w).map(|(_, c)| c.clone());
        assert_eq!(get(&[false]), Some(rat(1, 1)));
        assert_eq!(get(&[true]), Some(rat(1, 1)));
        // XY and YX each carry 1/4; together they give [X,Y]/2
        assert_eq!(get(&[false, true]), Some(rat(1, 4)));
        assert_eq!(get(&[true, false]), Some(rat(-1, 4)));
        let h = examples::engel::<Rational>();
        let z = bch(&h, &h.basis(0), &h.basis(1)).unwrap();
        assert_eq!(z, vec![rat(1, 1), rat(1, 1), rat(1, 2), rat(1, 12)]);
    }

    #[test]
    fn abelian_adds() {
        let a = GradedLieAlgebra::<Rational>::abelian(vec![1, 1]).unwrap();
        let z = bch(&a, &[rat(1, 2), rat(3, 1)], &[rat(1, 3), rat(-1, 1)]).unwrap();
        assert_eq!(z, vec![rat(5, 6), rat(2, 1)]);
    }

    #[test]
    fn heisenberg_product() {
        let h = examples::heisenberg::<Rational>();
        let z = bch(&h, &h.basis(0), &h.basis(1)).unwrap();
        assert_eq!(z, vec![rat(1, 1), rat(1, 1), rat(1, 2)]);
    }

    #[test]
    fn step_cap() {
        let a = GradedLieAlgebra::<Rational>::abelian(vec![1, 7]).unwrap();
        let e = a.basis(0);
        assert_eq!(bch(&a, &e, &e), Err(Error::StepTooLarge { step: 7, max: MAX_STEP }));
    }

    #[test]
    fn tables_are_finite() {
        for s in 1..=MAX_STEP {
            assert!(dynkin_word_count(s) >= 2);
        }
    }
}

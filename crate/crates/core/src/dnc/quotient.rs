use std::collections::BTreeSet;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, EchelonBasis};
use crate::scalar::{format_rational, Rational};

#[derive(Debug, Clone, Serialize)]
pub struct QuotientReport {
    pub d: usize,
    pub v: usize,
    /// Orbit sizes of `(x, w, t)` under right translation by pairs over the `V` sample.
    pub orbit_sizes: Vec<usize>,
    /// Every orbit stays inside a single `(x, ·, t)` class and distinct classes stay apart.
    pub orbits_match_classes: bool,
    /// `dim (ℝᵈ ⊕ ℝᵈ) / (TΔ + TV ⊕ TV)`.
    pub quotient_dim: usize,
    /// Rank of the canonical map from that quotient to `ℝᵈ/ℝᵛ`.
    pub canonical_rank: usize,
    /// Images in `ℝᵈ/ℝᵛ` of the complement basis, as rational strings.
    pub basis_images: Vec<Vec<String>>,
    pub passed: bool,
}

fn unit(n: usize, k: usize) -> Vec<Rational> {
    let mut e = vec![Rational::zero(); n];
    e[k] = Rational::one();
    e
}

/// Checks that `dnc(ℝᵈ×ℝᵈ, ℝᵈ) / dnc(V×V, V)` is `dnc(ℝᵈ, V)` stratum by stratum.
///
/// For `t ≠ 0` the arrows `(x, w, t)` with `w ∈ V` are translated on the right
/// by `(w, w', t)`; each orbit must be the full `(x, ·, t)` class. At `t = 0`
/// the fiber `(ℝᵈ ⊕ ℝᵈ)/TΔ` modulo the `V` directions must map isomorphically
/// onto `ℝᵈ/ℝᵛ` under `(X, Y) ↦ X − Y`.
pub fn quotient_fiber_check(d: usize, v: usize, xs: &[Vec<Rational>], vs: &[Vec<Rational>], t: &Rational) -> Result<QuotientReport> {
    if v > d || d == 0 {
        return Err(Error::OutOfRange(format!("need 0 ≤ v ≤ d, d > 0 (d={d}, v={v})")));
    }
    if t.is_zero() {
        return Err(Error::OutOfRange("orbit check needs t ≠ 0".into()));
    }
    if let Some(p) = xs.iter().chain(vs).find(|p| p.len() != d) {
        return Err(Error::DimensionMismatch { expected: d, found: p.len() });
    }
    if let Some(w) = vs.iter().find(|w| w[v..].iter().any(|c| !c.is_zero())) {
        return Err(Error::OutOfRange(format!("sample point {:?} is not on V", w.iter().map(format_rational).collect::<Vec<_>>())));
    }

    type Arrow = (Vec<Rational>, Vec<Rational>, Rational);
    let compose = |a: &Arrow, b: &Arrow| -> Option<Arrow> { (a.1 == b.0 && a.2 == b.2).then(|| (a.0.clone(), b.1.clone(), a.2.clone())) };
    let mut orbit_sizes = Vec::new();
    let mut orbits_match_classes = true;
    let mut seen: Vec<(Vec<Rational>, BTreeSet<Vec<Rational>>)> = Vec::new();
    for x in xs {
        for w in vs {
            let arrow = (x.clone(), w.clone(), t.clone());
            let orbit: BTreeSet<Vec<Rational>> = vs
                .iter()
                .filter_map(|w2| compose(&arrow, &(w.clone(), w2.clone(), t.clone())))
                .map(|(a, b, _)| {
                    if a != *x {
                        orbits_match_classes = false;
                    }
                    b
                })
                .collect();
            orbit_sizes.push(orbit.len());
            match seen.iter().find(|(sx, _)| sx == x) {
                Some((_, o)) if *o != orbit => orbits_match_classes = false,
                Some(_) => {}
                None => seen.push((x.clone(), orbit)),
            }
        }
    }
    let distinct_x: BTreeSet<&Vec<Rational>> = xs.iter().collect();
    if seen.len() != distinct_x.len() {
        orbits_match_classes = false;
    }

    // Subspace TΔ + TV ⊕ TV inside ℝᵈ ⊕ ℝᵈ, then a complement from the standard basis.
    let n = 2 * d;
    let mut basis = EchelonBasis::new(n, 0.0);
    for i in 0..d {
        let mut diag = unit(n, i);
        diag[d + i] = Rational::one();
        basis.try_insert(&diag);
    }
    for i in 0..v {
        basis.try_insert(&unit(n, i));
        basis.try_insert(&unit(n, d + i));
    }
    let sub_rank = basis.rank();
    let complement: Vec<Vec<Rational>> = (0..n).map(|k| unit(n, k)).filter(|e| basis.try_insert(e)).collect();
    let images: Vec<Vec<Rational>> = complement.iter().map(|e| (v..d).map(|i| e[i].clone() - e[d + i].clone()).collect()).collect();
    let canonical_rank = linalg::rank(&images, d - v, 0.0);
    let quotient_dim = n - sub_rank;
    let passed = orbits_match_classes && orbit_sizes.iter().all(|&s| s == vs.len()) && quotient_dim == d - v && canonical_rank == d - v;
    Ok(QuotientReport {
        d,
        v,
        orbit_sizes,
        orbits_match_classes,
        quotient_dim,
        canonical_rank,
        basis_images: images.iter().map(|r| r.iter().map(format_rational).collect()).collect(),
        passed,
    })
}

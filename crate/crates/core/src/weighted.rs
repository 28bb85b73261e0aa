//! Weighted factorization lengths, the w-ordering on generators, and weighted
//! delta sets.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::factorizations::{betti_elements, factorizations, successive_gaps, Factorization};
use crate::semigroup::Semigroup;

/// Exact rational weights `(w₁, …, w_k)`, one per generator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightVector(Vec<BigRational>);

impl WeightVector {
    pub fn new(weights: Vec<BigRational>) -> Self {
        Self(weights)
    }

    pub fn from_integers(weights: &[i64]) -> Self {
        Self(weights.iter().map(|&w| int(w)).collect())
    }

    /// All-ones weights; recovers ordinary length.
    pub fn unit(k: usize) -> Self {
        Self(vec![int(1); k])
    }

    pub fn weights(&self) -> &[BigRational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn check_dimension(&self, k: usize) -> Result<()> {
        if self.0.len() != k {
            return Err(Error::DimensionMismatch {
                expected: k,
                found: self.0.len(),
            });
        }
        Ok(())
    }
}

impl FromStr for WeightVector {
    type Err = String;

    /// Comma-separated integers or fractions, e.g. `3,-1/2,4`.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        s.split(',')
            .map(|part| {
                part.trim()
                    .parse::<BigRational>()
                    .map_err(|e| format!("{part:?}: {e}"))
            })
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(Self)
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

pub(crate) fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// `|z|_w = w · z`.
pub fn weighted_length(z: &Factorization, w: &WeightVector) -> Result<BigRational> {
    w.check_dimension(z.dimension())?;
    Ok(z.exponents()
        .iter()
        .zip(w.weights())
        .map(|(&e, wi)| wi * BigRational::from_integer(BigInt::from(e)))
        .sum())
}

/// Tie-blocks of generator indices, from `≤_w`-smallest (largest `wᵢ/rᵢ`) to
/// `≤_w`-largest. Indices inside a block are sorted by generator value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WOrdering {
    pub blocks: Vec<Vec<usize>>,
}

impl WOrdering {
    /// Indices flattened in `≤_w` order.
    pub fn order(&self) -> Vec<usize> {
        self.blocks.iter().flatten().copied().collect()
    }

    /// Index playing the role of `r₁` (first in the order).
    pub fn first(&self) -> usize {
        self.blocks[0][0]
    }

    /// Index playing the role of `r_k` (last in the order).
    pub fn last(&self) -> usize {
        *self.blocks.last().unwrap().last().unwrap()
    }
}

pub fn w_ordering(s: &Semigroup, w: &WeightVector) -> Result<WOrdering> {
    w.check_dimension(s.rank())?;
    let gens = s.generators();
    let ratio = |i: usize| &w.weights()[i] / int(gens[i]);
    let mut idx: Vec<usize> = (0..gens.len()).collect();
    idx.sort_by(|&a, &b| ratio(b).cmp(&ratio(a)).then(gens[a].cmp(&gens[b])));
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for i in idx {
        match blocks.last_mut() {
            Some(block) if ratio(block[0]) == ratio(i) => block.push(i),
            _ => blocks.push(vec![i]),
        }
    }
    Ok(WOrdering { blocks })
}

/// Sorted set `L_w(t) = {|z|_w : z ∈ Z(t)}`.
pub fn weighted_length_set(s: &Semigroup, t: i64, w: &WeightVector) -> Result<Vec<BigRational>> {
    w.check_dimension(s.rank())?;
    let zs = factorizations(s, t);
    if zs.is_empty() {
        return Err(Error::NotAnElement(t));
    }
    let set = zs
        .iter()
        .map(|z| weighted_length(z, w))
        .collect::<Result<BTreeSet<_>>>()?;
    Ok(set.into_iter().collect())
}

/// `(M_w(t), m_w(t))`.
pub fn weighted_extremes(
    s: &Semigroup,
    t: i64,
    w: &WeightVector,
) -> Result<(BigRational, BigRational)> {
    let set = weighted_length_set(s, t, w)?;
    Ok((set.last().unwrap().clone(), set[0].clone()))
}

pub fn delta_w_of_element(
    s: &Semigroup,
    t: i64,
    w: &WeightVector,
) -> Result<BTreeSet<BigRational>> {
    Ok(successive_gaps(&weighted_length_set(s, t, w)?))
}

/// `M_w` and `m_w` on `0..=horizon`, `None` off the semigroup.
#[derive(Debug, Clone)]
pub struct WeightedExtremeTable {
    pub max: Vec<Option<BigRational>>,
    pub min: Vec<Option<BigRational>>,
}

impl WeightedExtremeTable {
    /// Dynamic program `M_w(n) = max_i M_w(n − rᵢ) + wᵢ`, likewise for the
    /// minimum.
    pub fn compute(s: &Semigroup, w: &WeightVector, horizon: i64) -> Result<Self> {
        w.check_dimension(s.rank())?;
        let size = horizon.max(0) as usize + 1;
        let mut max: Vec<Option<BigRational>> = vec![None; size];
        let mut min: Vec<Option<BigRational>> = vec![None; size];
        max[0] = Some(BigRational::zero());
        min[0] = Some(BigRational::zero());
        for n in 1..size {
            for (&g, wi) in s.generators().iter().zip(w.weights()) {
                let g = g as usize;
                if g > n {
                    continue;
                }
                if let (Some(hi), Some(lo)) = (&max[n - g], &min[n - g]) {
                    let hi = hi + wi;
                    let lo = lo + wi;
                    if max[n].as_ref().is_none_or(|cur| hi > *cur) {
                        max[n] = Some(hi);
                    }
                    if min[n].as_ref().is_none_or(|cur| lo < *cur) {
                        min[n] = Some(lo);
                    }
                }
            }
        }
        Ok(Self { max, min })
    }
}

/// Where the quasilinear recurrences for `M_w` and `m_w` last fail.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RecurrenceReport {
    /// Generator driving `M_w(n) = M_w(n − r) + w` (first in `≤_w`).
    pub max_generator: i64,
    /// Generator driving `m_w(n) = m_w(n − r) + w` (last in `≤_w`).
    pub min_generator: i64,
    /// Largest `n ∈ S` at or below the horizon where the max recurrence fails.
    pub max_last_failure: Option<i64>,
    pub min_last_failure: Option<i64>,
    /// `R²` with `R` the largest generator.
    pub bound: i64,
    pub horizon: i64,
}

impl RecurrenceReport {
    pub fn within_bound(&self) -> bool {
        self.max_last_failure.is_none_or(|n| n <= self.bound)
            && self.min_last_failure.is_none_or(|n| n <= self.bound)
    }
}

/// Scans `n ≤ horizon` for failures of `M_w(n) = M_w(n − r₁) + w₁` and
/// `m_w(n) = m_w(n − r_k) + w_k`, with `r₁`, `r_k` the extremes of `≤_w`.
///
/// A member `n` fails when `n − r` is not a member or the values disagree.
pub fn verify_weighted_recurrences(
    s: &Semigroup,
    w: &WeightVector,
    horizon: i64,
) -> Result<RecurrenceReport> {
    let r = s.largest_generator();
    let bound = r.checked_mul(r).ok_or(Error::Overflow("R²"))?;
    if horizon <= bound {
        return Err(Error::HorizonTooSmall { horizon, bound });
    }
    let ordering = w_ordering(s, w)?;
    let (first, last) = (ordering.first(), ordering.last());
    let table = WeightedExtremeTable::compute(s, w, horizon)?;
    let last_failure = |values: &[Option<BigRational>], idx: usize| -> Option<i64> {
        let g = s.generators()[idx] as usize;
        let wi = &w.weights()[idx];
        (1..values.len()).rev().find_map(|n| {
            let here = values[n].as_ref()?;
            let holds = n >= g
                && values[n - g]
                    .as_ref()
                    .is_some_and(|prev| prev + wi == *here);
            (!holds).then_some(n as i64)
        })
    };
    Ok(RecurrenceReport {
        max_generator: s.generators()[first],
        min_generator: s.generators()[last],
        max_last_failure: last_failure(&table.max, first),
        min_last_failure: last_failure(&table.min, last),
        bound,
        horizon,
    })
}

/// Greatest common divisor of exact rationals, after clearing to a common
/// denominator. Zero when every entry is zero.
pub fn rational_gcd(values: &[BigRational]) -> BigRational {
    let denom = values
        .iter()
        .fold(BigInt::from(1), |acc, v| acc.lcm(v.denom()));
    let g = values.iter().fold(BigInt::zero(), |acc, v| {
        let scaled = v.numer() * (&denom / v.denom());
        acc.gcd(&scaled)
    });
    BigRational::new(g, denom)
}

/// `gcd{wᵢr_j − w_jrᵢ} / gcd(r)` for an arbitrary generator list (duplicates
/// allowed).
///
/// Dividing by `gcd(r)` makes the value the minimum weighted delta of the
/// semigroup itself: its factorizations coincide with those of `r / gcd(r)`.
pub fn pairwise_delta_gcd(gens: &[i64], w: &[BigRational]) -> BigRational {
    let mut terms = Vec::new();
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            terms.push(&w[i] * int(gens[j]) - &w[j] * int(gens[i]));
        }
    }
    let d = gens.iter().fold(0i64, |acc, &g| acc.gcd(&g)).max(1);
    rational_gcd(&terms) / int(d)
}

/// `min Δ_w(S)`; zero encodes `Δ_w(S) = ∅`.
pub fn min_delta_w(s: &Semigroup, w: &WeightVector) -> Result<BigRational> {
    w.check_dimension(s.rank())?;
    Ok(pairwise_delta_gcd(s.generators(), w.weights()))
}

/// `max Δ_w(S)` as the largest gap at a Betti element; `None` when
/// `Δ_w(S) = ∅`.
pub fn max_delta_w(s: &Semigroup, w: &WeightVector) -> Result<Option<BigRational>> {
    if min_delta_w(s, w)?.is_zero() {
        return Ok(None);
    }
    let mut best: Option<BigRational> = None;
    for &beta in betti_elements(s).keys() {
        if let Some(top) = delta_w_of_element(s, beta, w)?.into_iter().next_back() {
            if best.as_ref().is_none_or(|b| top > *b) {
                best = Some(top);
            }
        }
    }
    Ok(best)
}

/// Union of `Δ_w(t)` over members `t ≤ bound`.
///
/// Length sets come from `L_w(t) = ⋃ᵢ (L_w(t − rᵢ) + wᵢ)` with the weights
/// scaled to integers, so no factorization is enumerated.
pub fn delta_w_brute_force(
    s: &Semigroup,
    w: &WeightVector,
    bound: i64,
) -> Result<BTreeSet<BigRational>> {
    w.check_dimension(s.rank())?;
    let denom = w
        .weights()
        .iter()
        .fold(BigInt::from(1), |acc, x| acc.lcm(x.denom()));
    let scaled: Vec<i64> = w
        .weights()
        .iter()
        .map(|x| {
            i64::try_from(x.numer() * (&denom / x.denom()))
                .map_err(|_| Error::Overflow("scaled weight"))
        })
        .collect::<Result<_>>()?;
    let size = bound.max(-1) + 1;
    let mut sets: Vec<Vec<i64>> = vec![Vec::new(); size as usize];
    let mut gaps = BTreeSet::new();
    if size > 0 {
        sets[0].push(0);
    }
    for t in 1..size as usize {
        let mut here: Vec<i64> = Vec::new();
        for (&g, &wi) in s.generators().iter().zip(&scaled) {
            if g as usize <= t {
                here.extend(sets[t - g as usize].iter().map(|l| l + wi));
            }
        }
        here.sort_unstable();
        here.dedup();
        gaps.extend(here.windows(2).map(|p| p[1] - p[0]));
        sets[t] = here;
    }
    Ok(gaps
        .into_iter()
        .map(|g| BigRational::new(g.into(), denom.clone()))
        .collect())
}

/// Whether `x` is a positive integer multiple of `d`.
pub fn is_positive_multiple(x: &BigRational, d: &BigRational) -> bool {
    if d.is_zero() || !x.is_positive() {
        return false;
    }
    (x / d).is_integer()
}

pub(crate) fn cmp_ratio(a: (i64, i64), b: (i64, i64)) -> Ordering {
    // a.0/a.1 vs b.0/b.1 with positive denominators
    (a.0 as i128 * b.1 as i128).cmp(&(b.0 as i128 * a.1 as i128))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn mcnugget() -> Semigroup {
        Semigroup::build(&[6, 9, 20]).unwrap()
    }

    #[test]
    fn weighted_lengths() {
        let w = WeightVector::from_integers(&[3, -1, 4]);
        let z = Factorization::new(vec![2, 12, 1]);
        assert_eq!(weighted_length(&z, &w).unwrap(), int(-2));
        assert_eq!(
            weighted_length(&Factorization::zero(3), &w).unwrap(),
            int(0)
        );
        let w = WeightVector::from_integers(&[3, 1, 4]);
        assert_eq!(
            weighted_length(&Factorization::new(vec![3, 0, 0]), &w).unwrap(),
            int(9)
        );
        assert_eq!(
            weighted_length(&Factorization::new(vec![3, 0]), &w),
            Err(Error::DimensionMismatch {
                expected: 2,
                found: 3
            })
        );
    }

    #[test]
    fn orderings() {
        let s = mcnugget();
        let o = w_ordering(&s, &WeightVector::from_integers(&[3, 1, 4])).unwrap();
        assert_eq!(o.order(), vec![0, 2, 1]);
        assert_eq!(o.blocks.len(), 3);
        let s = Semigroup::build(&[6, 9, 10, 14]).unwrap();
        let o = w_ordering(&s, &WeightVector::from_integers(&[2, 3, 5, 7])).unwrap();
        assert_eq!(o.blocks, vec![vec![2, 3], vec![0, 1]]);
        let s = Semigroup::build(&[5, 7, 9]).unwrap();
        let o = w_ordering(&s, &WeightVector::unit(3)).unwrap();
        assert_eq!(o.blocks, vec![vec![0], vec![1], vec![2]]);
    }

    #[test]
    fn weighted_sets() {
        let s = mcnugget();
        let w = WeightVector::from_integers(&[3, 1, 4]);
        assert_eq!(
            weighted_length_set(&s, 18, &w).unwrap(),
            vec![int(2), int(9)]
        );
        assert_eq!(weighted_extremes(&s, 18, &w).unwrap(), (int(9), int(2)));
        assert_eq!(
            delta_w_of_element(&s, 18, &w).unwrap(),
            BTreeSet::from([int(7)])
        );
        assert!(delta_w_of_element(&s, 0, &w).unwrap().is_empty());
        assert_eq!(
            weighted_length_set(&s, 43, &w),
            Err(Error::NotAnElement(43))
        );
        let unit = WeightVector::unit(3);
        assert_eq!(
            delta_w_of_element(&s, 60, &unit).unwrap(),
            BTreeSet::from([int(1), int(4)])
        );
        let own = WeightVector::from_integers(&[6, 9, 20]);
        for t in [0, 18, 60, 127] {
            assert_eq!(weighted_length_set(&s, t, &own).unwrap(), vec![int(t)]);
        }
    }

    #[test]
    fn extreme_table_matches_enumeration() {
        let s = mcnugget();
        let w = WeightVector::new(vec![q(3, 2), q(-1, 3), int(4)]);
        let table = WeightedExtremeTable::compute(&s, &w, 200).unwrap();
        for t in 0..=200 {
            match weighted_extremes(&s, t, &w) {
                Ok((hi, lo)) => {
                    assert_eq!(table.max[t as usize].as_ref(), Some(&hi));
                    assert_eq!(table.min[t as usize].as_ref(), Some(&lo));
                }
                Err(_) => assert!(table.max[t as usize].is_none()),
            }
        }
    }

    #[test]
    fn recurrence_boundaries() {
        let s = Semigroup::build(&[9, 10, 23]).unwrap();
        let report =
            verify_weighted_recurrences(&s, &WeightVector::from_integers(&[1, 3, 5]), 1000)
                .unwrap();
        assert_eq!(report.max_generator, 10);
        assert_eq!(report.max_last_failure, Some(64));
        assert!(report.within_bound());
        let report =
            verify_weighted_recurrences(&s, &WeightVector::from_integers(&[6, 9, 5]), 1000)
                .unwrap();
        assert_eq!(report.max_generator, 10);
        assert_eq!(report.max_last_failure, Some(81));
        assert_eq!(
            verify_weighted_recurrences(&s, &WeightVector::unit(3), 529),
            Err(Error::HorizonTooSmall {
                horizon: 529,
                bound: 529
            })
        );
    }

    #[test]
    fn rational_gcds() {
        assert_eq!(rational_gcd(&[int(21), int(36), int(16)]), int(1));
        assert_eq!(rational_gcd(&[q(1, 2), q(3, 4)]), q(1, 4));
        assert_eq!(rational_gcd(&[int(0), int(0)]), int(0));
        assert_eq!(rational_gcd(&[int(0), q(-6, 5)]), q(6, 5));
    }

    #[test]
    fn min_max_delta() {
        let s = mcnugget();
        let w = WeightVector::from_integers(&[3, 1, 4]);
        assert_eq!(min_delta_w(&s, &w).unwrap(), int(1));
        let own = WeightVector::from_integers(&[6, 9, 20]);
        assert_eq!(min_delta_w(&s, &own).unwrap(), int(0));
        assert_eq!(max_delta_w(&s, &own).unwrap(), None);
        let unit = WeightVector::unit(3);
        assert_eq!(min_delta_w(&s, &unit).unwrap(), int(1));
        assert_eq!(max_delta_w(&s, &unit).unwrap(), Some(int(4)));
    }

    #[test]
    fn min_delta_divides_out_gcd() {
        // ⟨4, 6⟩ has the factorizations of ⟨2, 3⟩.
        let s = Semigroup::build(&[4, 6]).unwrap();
        let unit = WeightVector::unit(2);
        assert_eq!(min_delta_w(&s, &unit).unwrap(), int(1));
        assert_eq!(
            delta_w_brute_force(&s, &unit, 60).unwrap(),
            BTreeSet::from([int(1)])
        );
    }

    #[test]
    fn parse_weights() {
        let w: WeightVector = "3, -1/2,4".parse().unwrap();
        assert_eq!(w.weights(), &[int(3), q(-1, 2), int(4)]);
        assert!("3,x".parse::<WeightVector>().is_err());
        assert_eq!(w.to_string(), "(3,-1/2,4)");
    }

    #[test]
    fn multiples() {
        assert!(is_positive_multiple(&int(6), &int(3)));
        assert!(is_positive_multiple(&q(3, 2), &q(1, 2)));
        assert!(!is_positive_multiple(&q(3, 2), &int(1)));
        assert!(!is_positive_multiple(&int(0), &int(1)));
        assert!(!is_positive_multiple(&int(2), &int(0)));
    }
}

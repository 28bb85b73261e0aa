//! Factorization sets, length sets, factorization graphs, Betti elements and
//! minimal presentations.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_integer::Integer;
use petgraph::unionfind::UnionFind;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::semigroup::Semigroup;

/// Exponent vector over a fixed generator tuple.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Factorization(Vec<u64>);

impl Factorization {
    pub fn new(exponents: Vec<u64>) -> Self {
        Self(exponents)
    }

    pub fn zero(k: usize) -> Self {
        Self(vec![0; k])
    }

    pub fn exponents(&self) -> &[u64] {
        &self.0
    }

    pub fn into_exponents(self) -> Vec<u64> {
        self.0
    }

    pub fn dimension(&self) -> usize {
        self.0.len()
    }

    pub fn length(&self) -> u64 {
        self.0.iter().sum()
    }

    /// The element this vector factors over `gens`.
    pub fn evaluate(&self, gens: &[i64]) -> Result<i64> {
        if gens.len() != self.0.len() {
            return Err(Error::DimensionMismatch {
                expected: gens.len(),
                found: self.0.len(),
            });
        }
        self.0
            .iter()
            .zip(gens)
            .try_fold(0i64, |acc, (&z, &g)| {
                i64::try_from(z)
                    .ok()
                    .and_then(|z| z.checked_mul(g))
                    .and_then(|v| acc.checked_add(v))
            })
            .ok_or(Error::Overflow("factorization value"))
    }

    pub fn shares_support(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).any(|(&a, &b)| a > 0 && b > 0)
    }

    /// Whether `self − other` stays non-negative.
    pub fn dominates(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(&a, &b)| a >= b)
    }

    pub(crate) fn replace(&self, remove: &Self, add: &Self) -> Self {
        Self(
            self.0
                .iter()
                .zip(&remove.0)
                .zip(&add.0)
                .map(|((&z, &r), &a)| z - r + a)
                .collect(),
        )
    }
}

impl From<Vec<u64>> for Factorization {
    fn from(v: Vec<u64>) -> Self {
        Self(v)
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, z) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{z}")?;
        }
        write!(f, ")")
    }
}

/// A pair of factorizations of the same element.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Relation {
    pub degree: i64,
    pub left: Factorization,
    pub right: Factorization,
}

impl Relation {
    /// Pairs two factorizations over `s`, checking they factor the same
    /// element.
    pub fn new(s: &Semigroup, left: Factorization, right: Factorization) -> Result<Self> {
        let l = left.evaluate(s.generators())?;
        let r = right.evaluate(s.generators())?;
        if l != r {
            return Err(Error::NotInKernel { left: l, right: r });
        }
        Ok(Self {
            degree: l,
            left,
            right,
        })
    }

    pub fn swapped(&self) -> Self {
        Self {
            degree: self.degree,
            left: self.right.clone(),
            right: self.left.clone(),
        }
    }

    /// Equality of the unordered pairs.
    pub fn same_pair(&self, other: &Self) -> bool {
        (self.left == other.left && self.right == other.right)
            || (self.left == other.right && self.right == other.left)
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.left, self.right)
    }
}

/// All factorizations of `t`, in lexicographic order. Empty iff `t ∉ S`.
///
/// Coordinates are chosen from the largest generator down; a partial choice
/// is kept only when the remainder lies in the semigroup of the generators not
/// yet assigned, so every branch ends in a solution. The final two generators
/// are solved as a linear congruence.
pub fn factorizations(s: &Semigroup, t: i64) -> Vec<Factorization> {
    if !s.contains(t) {
        return Vec::new();
    }
    let order = s.ascending_indices();
    let sorted: Vec<i64> = order.iter().map(|&i| s.generators()[i]).collect();
    let prefixes = s.prefix_memberships();
    let mut out = Vec::new();
    let mut current = vec![0u64; sorted.len()];
    let mut search = Search {
        sorted: &sorted,
        order: &order,
        prefixes,
        current: &mut current,
        out: &mut out,
    };
    search.descend(sorted.len(), t);
    out.sort_unstable();
    out
}

struct Search<'a> {
    sorted: &'a [i64],
    order: &'a [usize],
    prefixes: &'a [crate::semigroup::Membership],
    current: &'a mut Vec<u64>,
    out: &'a mut Vec<Factorization>,
}

impl Search<'_> {
    /// Assigns the first `j` generators (ascending) so they sum to `rem`.
    fn descend(&mut self, j: usize, rem: i64) {
        match j {
            0 => {
                if rem == 0 {
                    self.out.push(Factorization(self.current.clone()));
                }
            }
            1 => {
                let g = self.sorted[0];
                if rem % g == 0 {
                    self.current[self.order[0]] = (rem / g) as u64;
                    self.out.push(Factorization(self.current.clone()));
                    self.current[self.order[0]] = 0;
                }
            }
            2 => self.solve_pair(rem),
            _ => {
                let g = self.sorted[j - 1];
                let below = &self.prefixes[j - 2];
                let slot = self.order[j - 1];
                for c in 0..=rem / g {
                    let r = rem - c * g;
                    if below.contains(r) {
                        self.current[slot] = c as u64;
                        self.descend(j - 1, r);
                    }
                }
                self.current[slot] = 0;
            }
        }
    }

    /// `rem = a·g₁ + b·g₂` over non-negative `a`, `b`.
    fn solve_pair(&mut self, rem: i64) {
        let (g1, g2) = (self.sorted[0], self.sorted[1]);
        let (s1, s2) = (self.order[0], self.order[1]);
        let e = g1.gcd(&g2);
        if rem % e != 0 {
            return;
        }
        let (a1, a2, r) = (g1 / e, g2 / e, rem / e);
        // b ≡ r · a2⁻¹ (mod a1)
        let b0 = if a1 == 1 {
            0
        } else {
            let inv = mod_inverse(a2.rem_euclid(a1), a1);
            ((r.rem_euclid(a1) as i128 * inv as i128) % a1 as i128) as i64
        };
        let mut b = b0;
        while b * a2 <= r {
            let a = (r - b * a2) / a1;
            self.current[s1] = a as u64;
            self.current[s2] = b as u64;
            self.out.push(Factorization(self.current.clone()));
            b += a1;
        }
        self.current[s1] = 0;
        self.current[s2] = 0;
    }
}

fn mod_inverse(a: i64, m: i64) -> i64 {
    let ext = a.extended_gcd(&m);
    debug_assert_eq!(ext.gcd, 1);
    ext.x.rem_euclid(m)
}

fn require_member(s: &Semigroup, t: i64) -> Result<Vec<Factorization>> {
    let z = factorizations(s, t);
    if z.is_empty() {
        Err(Error::NotAnElement(t))
    } else {
        Ok(z)
    }
}

/// Sorted set of factorization lengths of `t`.
pub fn length_set(s: &Semigroup, t: i64) -> Result<Vec<u64>> {
    let set: BTreeSet<u64> = require_member(s, t)?
        .iter()
        .map(Factorization::length)
        .collect();
    Ok(set.into_iter().collect())
}

/// Successive gaps of a sorted set.
pub(crate) fn successive_gaps<T>(sorted: &[T]) -> BTreeSet<T>
where
    T: Ord + Clone + std::ops::Sub<Output = T>,
{
    sorted
        .windows(2)
        .map(|w| w[1].clone() - w[0].clone())
        .collect()
}

pub fn delta_of_element(s: &Semigroup, t: i64) -> Result<BTreeSet<u64>> {
    Ok(successive_gaps(&length_set(s, t)?))
}

/// `(M(t), m(t))`, the longest and shortest factorization lengths.
pub fn max_min_length(s: &Semigroup, t: i64) -> Result<(u64, u64)> {
    let lengths = length_set(s, t)?;
    Ok((*lengths.last().unwrap(), lengths[0]))
}

/// Connected components of the factorization graph of an element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorizationGraphSummary {
    pub element: i64,
    /// Each component is sorted; components are ordered by their least
    /// factorization.
    pub components: Vec<Vec<Factorization>>,
}

impl FactorizationGraphSummary {
    pub fn is_connected(&self) -> bool {
        self.components.len() <= 1
    }

    pub fn component_of(&self, z: &Factorization) -> Option<usize> {
        self.components
            .iter()
            .position(|c| c.binary_search(z).is_ok())
    }
}

/// Partition of a factorization set by shared-support connectivity.
pub(crate) fn components_of(zs: Vec<Factorization>) -> Vec<Vec<Factorization>> {
    if zs.is_empty() {
        return Vec::new();
    }
    let k = zs[0].dimension();
    let mut uf = UnionFind::<usize>::new(zs.len());
    let mut first_with: Vec<Option<usize>> = vec![None; k];
    for (idx, z) in zs.iter().enumerate() {
        for (i, &e) in z.exponents().iter().enumerate() {
            if e > 0 {
                match first_with[i] {
                    Some(root) => {
                        uf.union(root, idx);
                    }
                    None => first_with[i] = Some(idx),
                }
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<Factorization>> = BTreeMap::new();
    for (idx, z) in zs.into_iter().enumerate() {
        groups.entry(uf.find(idx)).or_default().push(z);
    }
    let mut comps: Vec<Vec<Factorization>> = groups
        .into_values()
        .map(|mut c| {
            c.sort_unstable();
            c
        })
        .collect();
    comps.sort_by(|a, b| a[0].cmp(&b[0]));
    comps
}

pub fn factorization_graph(s: &Semigroup, t: i64) -> Result<FactorizationGraphSummary> {
    let zs = require_member(s, t)?;
    Ok(FactorizationGraphSummary {
        element: t,
        components: components_of(zs),
    })
}

/// Elements above this bound have connected factorization graphs.
///
/// If `t − r_min − r_j ∈ S` for every `j`, each factorization shares a
/// generator with one that uses `r_min`, and those are pairwise adjacent.
pub fn betti_search_bound(s: &Semigroup) -> i64 {
    s.frobenius() + s.smallest_generator() + s.largest_generator()
}

/// Candidates `a + g` with `a ∈ Ap(S; r_min)` and `g` another generator.
///
/// Every Betti element has this form: a component of `∇_β` without `r_min` in
/// its support contains some `z` with `z_g > 0`, and `β − g − r_min ∉ S`, so
/// `β − g` is an Apéry element.
fn betti_candidates(s: &Semigroup) -> Vec<i64> {
    let m = s.smallest_generator();
    let apery = s.apery_set(m).expect("smallest generator is a valid base");
    let mut out: Vec<i64> = apery
        .elements()
        .iter()
        .flat_map(|&a| {
            s.generators()
                .iter()
                .filter(move |&&g| g != m)
                .map(move |&g| a + g)
        })
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

fn disconnected(s: &Semigroup, elements: &[i64]) -> BTreeMap<i64, usize> {
    elements
        .par_iter()
        .filter_map(|&t| {
            let comps = components_of(factorizations(s, t)).len();
            (comps > 1).then_some((t, comps - 1))
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect()
}

/// Betti elements with multiplicity `components(∇_β) − 1`.
///
/// # Panics
///
/// If a disconnected factorization graph turns up in `(B, B + r_max]` where
/// `B` is [`betti_search_bound`].
pub fn betti_elements(s: &Semigroup) -> BTreeMap<i64, usize> {
    let bound = betti_search_bound(s);
    let candidates = betti_candidates(s);
    debug_assert!(candidates.iter().all(|&c| c <= bound));
    let found = disconnected(s, &candidates);
    if let Some(t) = first_disconnected_above_bound(s) {
        panic!("factorization graph of {t} is disconnected above the Betti bound {bound}");
    }
    found
}

/// Scans every element of `S` up to the search bound. Slow; used as a
/// cross-check for [`betti_elements`].
pub fn betti_elements_exhaustive(s: &Semigroup) -> BTreeMap<i64, usize> {
    let bound = betti_search_bound(s);
    let d = s.gcd();
    let elements: Vec<i64> = (1..=bound / d)
        .map(|i| i * d)
        .filter(|&t| s.contains(t))
        .collect();
    disconnected(s, &elements)
}

/// Post-check over `(B, B + r_max]`; returns the first offending element.
pub fn first_disconnected_above_bound(s: &Semigroup) -> Option<i64> {
    let bound = betti_search_bound(s);
    let d = s.gcd();
    let start = bound.div_euclid(d) + 1;
    let end = (bound + s.largest_generator()).div_euclid(d);
    let elements: Vec<i64> = (start..=end).map(|i| i * d).collect();
    disconnected(s, &elements).keys().next().copied()
}

/// Betti elements expanded by multiplicity, ascending.
pub fn betti_degree_multiset(betti: &BTreeMap<i64, usize>) -> Vec<i64> {
    betti
        .iter()
        .flat_map(|(&b, &m)| std::iter::repeat_n(b, m))
        .collect()
}

/// One relation per non-base component of each Betti element.
///
/// The base component holds the lexicographically least factorization; each
/// relation pairs the least factorization of another component with the least
/// factorization of the base.
pub fn minimal_presentation(s: &Semigroup) -> Vec<Relation> {
    let betti = betti_elements(s);
    let mut out = Vec::new();
    for &beta in betti.keys() {
        let comps = components_of(factorizations(s, beta));
        let base = &comps[0][0];
        for comp in &comps[1..] {
            out.push(Relation {
                degree: beta,
                left: comp[0].clone(),
                right: base.clone(),
            });
        }
    }
    out
}

/// Outcome of checking a relation set against the minimal presentation
/// criterion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PresentationCheck {
    pub is_minimal_presentation: bool,
    pub issues: Vec<String>,
}

/// Checks whether `relations` is a minimal presentation of `s`.
///
/// A relation set is a minimal presentation exactly when, for every element
/// `t`, the relations of degree `t` join distinct components of `∇_t` and form
/// a spanning tree on those components. Only Betti elements have more than
/// one component, so relations of any other degree are redundant.
pub fn check_minimal_presentation(s: &Semigroup, relations: &[Relation]) -> PresentationCheck {
    let mut issues = Vec::new();
    let betti = betti_elements(s);
    let mut by_degree: BTreeMap<i64, Vec<&Relation>> = BTreeMap::new();
    for rel in relations {
        match (
            rel.left.evaluate(s.generators()),
            rel.right.evaluate(s.generators()),
        ) {
            (Ok(l), Ok(r)) if l == r && l == rel.degree => {
                by_degree.entry(rel.degree).or_default().push(rel)
            }
            _ => issues.push(format!(
                "relation {rel} is not in the kernel at degree {}",
                rel.degree
            )),
        }
    }
    for (&degree, rels) in &by_degree {
        if !betti.contains_key(&degree) {
            issues.push(format!("degree {degree} is not a Betti element"));
            continue;
        }
        let comps = components_of(factorizations(s, degree));
        let index: HashMap<&Factorization, usize> = comps
            .iter()
            .enumerate()
            .flat_map(|(i, c)| c.iter().map(move |z| (z, i)))
            .collect();
        let mut uf = UnionFind::<usize>::new(comps.len());
        for rel in rels {
            let (a, b) = (index[&rel.left], index[&rel.right]);
            if !uf.union(a, b) {
                issues.push(format!(
                    "relation {rel} closes a cycle among components of {degree}"
                ));
            }
        }
    }
    for (&beta, &mult) in &betti {
        let have = by_degree.get(&beta).map_or(0, Vec::len);
        if have != mult {
            issues.push(format!(
                "Betti element {beta} needs {mult} relation(s), found {have}"
            ));
        }
    }
    PresentationCheck {
        is_minimal_presentation: issues.is_empty(),
        issues,
    }
}

/// Whether the relations, used as rewriting rules `a + u ↔ b + u`, connect
/// every pair of factorizations of `t`.
pub fn connects_by_chains(s: &Semigroup, relations: &[Relation], t: i64) -> bool {
    let zs = factorizations(s, t);
    if zs.len() <= 1 {
        return true;
    }
    let index: HashMap<&Factorization, usize> =
        zs.iter().enumerate().map(|(i, z)| (z, i)).collect();
    let mut uf = UnionFind::<usize>::new(zs.len());
    for (i, z) in zs.iter().enumerate() {
        for rel in relations {
            for (from, to) in [(&rel.left, &rel.right), (&rel.right, &rel.left)] {
                if z.dominates(from) {
                    let y = z.replace(from, to);
                    uf.union(i, index[&y]);
                }
            }
        }
    }
    let root = uf.find(0);
    (1..zs.len()).all(|i| uf.find(i) == root)
}

/// `(min Δ(S), max Δ(S))`, or `None` when `Δ(S)` is empty.
///
/// The minimum is `gcd{r_i − r_{i−1}} / d` over the listed generators
/// (redundant ones included, since they take part in factorizations); the
/// maximum is attained at a Betti element.
pub fn delta_set_extremes(s: &Semigroup) -> Option<(u64, u64)> {
    let union = delta_set_over_betti(s);
    let max = *union.iter().next_back()?;
    let mut sorted = s.generators().to_vec();
    sorted.sort_unstable();
    let g = sorted
        .windows(2)
        .fold(0i64, |acc, w| acc.gcd(&(w[1] - w[0])));
    Some(((g / s.gcd()) as u64, max))
}

/// Union of the delta sets of the Betti elements.
pub fn delta_set_over_betti(s: &Semigroup) -> BTreeSet<u64> {
    betti_elements(s)
        .keys()
        .flat_map(|&b| delta_of_element(s, b).expect("Betti elements are members"))
        .collect()
}

/// Union of `Δ(t)` over members `t ≤ bound`.
pub fn delta_set_brute_force(s: &Semigroup, bound: i64) -> BTreeSet<u64> {
    (0..=bound)
        .into_par_iter()
        .filter(|&t| s.contains(t))
        .flat_map_iter(|t| delta_of_element(s, t).expect("member"))
        .collect::<Vec<_>>()
        .into_iter()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fz(v: &[u64]) -> Factorization {
        Factorization::new(v.to_vec())
    }

    fn mcnugget() -> Semigroup {
        Semigroup::build(&[6, 9, 20]).unwrap()
    }

    #[test]
    fn factorizations_of_60_and_18() {
        let s = mcnugget();
        assert_eq!(
            factorizations(&s, 60),
            vec![
                fz(&[0, 0, 3]),
                fz(&[1, 6, 0]),
                fz(&[4, 4, 0]),
                fz(&[7, 2, 0]),
                fz(&[10, 0, 0])
            ]
        );
        assert_eq!(factorizations(&s, 18), vec![fz(&[0, 2, 0]), fz(&[3, 0, 0])]);
        assert_eq!(factorizations(&s, 0), vec![fz(&[0, 0, 0])]);
        assert!(factorizations(&s, 43).is_empty());
    }

    #[test]
    fn factorizations_of_linear_family_member() {
        let s = Semigroup::with_order(vec![88, 132, 225, 315, 361]).unwrap();
        assert_eq!(
            factorizations(&s, 1620),
            vec![fz(&[0, 0, 3, 3, 0]), fz(&[2, 0, 0, 0, 4])]
        );
    }

    #[test]
    fn factorizations_respect_stored_order() {
        let s = Semigroup::with_order(vec![20, 6, 9]).unwrap();
        let z = factorizations(&s, 18);
        assert_eq!(z, vec![fz(&[0, 0, 2]), fz(&[0, 3, 0])]);
    }

    #[test]
    fn lengths_and_deltas() {
        let s = mcnugget();
        assert_eq!(length_set(&s, 60).unwrap(), vec![3, 7, 8, 9, 10]);
        assert_eq!(delta_of_element(&s, 60).unwrap(), BTreeSet::from([1, 4]));
        assert_eq!(length_set(&s, 18).unwrap(), vec![2, 3]);
        assert_eq!(delta_of_element(&s, 18).unwrap(), BTreeSet::from([1]));
        assert_eq!(length_set(&s, 0).unwrap(), vec![0]);
        assert!(delta_of_element(&s, 0).unwrap().is_empty());
        assert_eq!(length_set(&s, 43), Err(Error::NotAnElement(43)));
        assert_eq!(max_min_length(&s, 60).unwrap(), (10, 3));
        assert_eq!(max_min_length(&s, 18).unwrap(), (3, 2));
        assert_eq!(max_min_length(&s, 20).unwrap(), (1, 1));
        assert_eq!(max_min_length(&s, 7), Err(Error::NotAnElement(7)));
    }

    #[test]
    fn graphs() {
        let s = mcnugget();
        let g = factorization_graph(&s, 18).unwrap();
        assert_eq!(
            g.components,
            vec![vec![fz(&[0, 2, 0])], vec![fz(&[3, 0, 0])]]
        );
        let g = factorization_graph(&s, 60).unwrap();
        assert_eq!(g.components.len(), 2);
        assert_eq!(g.components[0], vec![fz(&[0, 0, 3])]);
        assert_eq!(g.components[1].len(), 4);
        let g = factorization_graph(&s, 15).unwrap();
        assert!(g.is_connected());
        assert_eq!(g.components, vec![vec![fz(&[1, 1, 0])]]);
        assert!(factorization_graph(&s, 43).is_err());
    }

    #[test]
    fn betti_examples() {
        assert_eq!(
            betti_elements(&mcnugget()),
            BTreeMap::from([(18, 1), (60, 1)])
        );
        let s = Semigroup::build(&[2, 3]).unwrap();
        assert_eq!(betti_elements(&s), BTreeMap::from([(6, 1)]));
        let s = Semigroup::build(&[3, 4, 5]).unwrap();
        assert_eq!(
            betti_elements(&s),
            BTreeMap::from([(8, 1), (9, 1), (10, 1)])
        );
    }

    #[test]
    fn betti_with_redundant_generator_and_gcd() {
        let s = Semigroup::build(&[2, 3, 4]).unwrap();
        assert_eq!(betti_elements(&s), betti_elements_exhaustive(&s));
        assert_eq!(betti_elements(&s), BTreeMap::from([(4, 1), (6, 1)]));
        let s = Semigroup::build(&[4, 6]).unwrap();
        assert_eq!(betti_elements(&s), BTreeMap::from([(12, 1)]));
        let s = Semigroup::build(&[7]).unwrap();
        assert!(betti_elements(&s).is_empty());
    }

    #[test]
    fn betti_multiplicity_above_one() {
        // 30 = 5·6 = 3·10 = 2·15 with pairwise disjoint supports.
        let s = Semigroup::build(&[6, 10, 15]).unwrap();
        let b = betti_elements(&s);
        assert_eq!(b, betti_elements_exhaustive(&s));
        assert_eq!(b, BTreeMap::from([(30, 2)]));
        // 6 is redundant in ⟨3, 4, 6⟩: Z(12) splits into only two components.
        let s = Semigroup::build(&[3, 4, 6]).unwrap();
        assert_eq!(betti_elements(&s).get(&12), Some(&1));
    }

    #[test]
    fn presentations() {
        let s = mcnugget();
        let p = minimal_presentation(&s);
        assert_eq!(p.len(), 2);
        assert_eq!(p[0].degree, 18);
        assert!(p[0].same_pair(&Relation::new(&s, fz(&[3, 0, 0]), fz(&[0, 2, 0])).unwrap()));
        assert_eq!(p[1].degree, 60);
        assert_eq!(p[1].right, fz(&[0, 0, 3]));
        assert!(check_minimal_presentation(&s, &p).is_minimal_presentation);

        let s = Semigroup::build(&[2, 3]).unwrap();
        let p = minimal_presentation(&s);
        assert_eq!(p.len(), 1);
        assert!(p[0].same_pair(&Relation::new(&s, fz(&[3, 0]), fz(&[0, 2])).unwrap()));
    }

    #[test]
    fn presentation_checker_rejects_bad_sets() {
        let s = mcnugget();
        let p = minimal_presentation(&s);
        assert!(!check_minimal_presentation(&s, &p[..1]).is_minimal_presentation);
        let mut doubled = p.clone();
        doubled.push(Relation::new(&s, fz(&[10, 0, 0]), fz(&[0, 0, 3])).unwrap());
        assert!(!check_minimal_presentation(&s, &doubled).is_minimal_presentation);
        let mut stray = p.clone();
        stray.push(Relation::new(&s, fz(&[6, 0, 0]), fz(&[0, 4, 0])).unwrap());
        assert!(!check_minimal_presentation(&s, &stray).is_minimal_presentation);
        for alt in [[10, 0, 0], [7, 2, 0], [4, 4, 0]] {
            let mut q = p.clone();
            q[1] = Relation::new(&s, fz(&alt), fz(&[0, 0, 3])).unwrap();
            assert!(check_minimal_presentation(&s, &q).is_minimal_presentation);
        }
    }

    #[test]
    fn relation_rejects_non_kernel_pairs() {
        let s = mcnugget();
        assert_eq!(
            Relation::new(&s, fz(&[1, 0, 0]), fz(&[0, 1, 0])),
            Err(Error::NotInKernel { left: 6, right: 9 })
        );
    }

    #[test]
    fn chains_connect_under_presentation() {
        let s = mcnugget();
        let p = minimal_presentation(&s);
        assert!((0..=300).all(|t| connects_by_chains(&s, &p, t)));
        assert!(!connects_by_chains(&s, &p[..1], 60));
    }

    #[test]
    fn delta_extremes() {
        let s = mcnugget();
        assert_eq!(delta_set_extremes(&s), Some((1, 4)));
        assert_eq!(delta_set_over_betti(&s), BTreeSet::from([1, 4]));
        let brute = delta_set_brute_force(&s, 300);
        assert_eq!(brute.iter().next(), Some(&1));
        assert_eq!(brute.iter().next_back(), Some(&4));
        assert_eq!(delta_set_extremes(&Semigroup::build(&[5]).unwrap()), None);
    }

    #[test]
    fn post_check_is_clean() {
        for gens in [&[6, 9, 20][..], &[5, 7, 9], &[10, 13, 15], &[4, 6, 9]] {
            let s = Semigroup::build(gens).unwrap();
            assert_eq!(first_disconnected_above_bound(&s), None);
        }
    }
}

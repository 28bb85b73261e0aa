//! Finitely generated additive subsemigroups of the non-negative integers.
//!
//! Generators may share a common divisor `d > 1`, in which case the semigroup
//! lives inside `dZ≥0` and has infinite complement. Frobenius number, genus
//! and Apéry sets are then taken relative to `dZ≥0`.
//!
//! Membership is answered from a table of least elements per residue class
//! modulo the smallest generator, built once by a shortest-path pass over the
//! residue graph and shared by every query.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::sync::OnceLock;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};

/// Least element of every residue class modulo `modulus`, in units of `step`.
///
/// The reduced generators `g / step` have gcd 1, so every class is reachable.
#[derive(Debug, Clone)]
pub(crate) struct ResidueTable {
    step: i64,
    modulus: i64,
    least: Vec<i64>,
}

impl ResidueTable {
    /// `reduced` must have gcd 1 and `modulus` must lie in the semigroup they
    /// generate.
    fn new(step: i64, reduced: &[i64], modulus: i64) -> Self {
        let size = modulus as usize;
        let mut least = vec![i64::MAX; size];
        least[0] = 0;
        let mut heap = BinaryHeap::new();
        heap.push(Reverse((0i64, 0usize)));
        while let Some(Reverse((dist, node))) = heap.pop() {
            if dist > least[node] {
                continue;
            }
            for &g in reduced {
                let next = dist + g;
                let slot = (next % modulus) as usize;
                if next < least[slot] {
                    least[slot] = next;
                    heap.push(Reverse((next, slot)));
                }
            }
        }
        Self {
            step,
            modulus,
            least,
        }
    }

    pub(crate) fn contains(&self, t: i64) -> bool {
        if t < 0 || t % self.step != 0 {
            return false;
        }
        let reduced = t / self.step;
        reduced >= self.least[(reduced % self.modulus) as usize]
    }

    fn max_least(&self) -> i64 {
        self.least.iter().copied().max().unwrap_or(0)
    }
}

/// Membership oracle for a generating list that may contain zeros or be empty.
#[derive(Debug, Clone)]
pub(crate) enum Membership {
    Trivial,
    Table(ResidueTable),
}

impl Membership {
    pub(crate) fn for_generators(gens: &[i64]) -> Self {
        let positive: Vec<i64> = gens.iter().copied().filter(|&g| g > 0).collect();
        if positive.is_empty() {
            return Membership::Trivial;
        }
        let step = positive.iter().fold(0i64, |acc, &g| acc.gcd(&g));
        let reduced: Vec<i64> = positive.iter().map(|g| g / step).collect();
        let modulus = *reduced.iter().min().expect("nonempty");
        Membership::Table(ResidueTable::new(step, &reduced, modulus))
    }

    pub(crate) fn contains(&self, t: i64) -> bool {
        match self {
            Membership::Trivial => t == 0,
            Membership::Table(table) => table.contains(t),
        }
    }
}

/// An additive subsemigroup `⟨r₁, …, r_k⟩` of the non-negative integers.
#[derive(Debug, Clone)]
pub struct Semigroup {
    generators: Vec<i64>,
    gcd: i64,
    table: OnceLock<ResidueTable>,
    prefixes: OnceLock<Vec<Membership>>,
}

impl PartialEq for Semigroup {
    fn eq(&self, other: &Self) -> bool {
        self.generators == other.generators
    }
}

impl Eq for Semigroup {}

impl Semigroup {
    /// Builds the semigroup generated by `gens`, removing duplicates and
    /// sorting ascending.
    pub fn build(gens: &[i64]) -> Result<Self> {
        check_positive(gens)?;
        let mut sorted = gens.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        Ok(Self::from_checked(sorted))
    }

    /// Builds the semigroup keeping the generator order as given.
    ///
    /// Factorizations are indexed by this order, which is what parametrized
    /// families need. Duplicates are rejected rather than merged.
    pub fn with_order(gens: Vec<i64>) -> Result<Self> {
        check_positive(&gens)?;
        let mut seen = gens.clone();
        seen.sort_unstable();
        if let Some(w) = seen.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateGenerator(w[0]));
        }
        Ok(Self::from_checked(gens))
    }

    fn from_checked(generators: Vec<i64>) -> Self {
        let gcd = generators.iter().fold(0i64, |acc, &g| acc.gcd(&g));
        Self {
            generators,
            gcd,
            table: OnceLock::new(),
            prefixes: OnceLock::new(),
        }
    }

    pub fn generators(&self) -> &[i64] {
        &self.generators
    }

    /// Number of generators in the stored (not necessarily minimal) list.
    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn gcd(&self) -> i64 {
        self.gcd
    }

    pub fn smallest_generator(&self) -> i64 {
        *self.generators.iter().min().expect("nonempty")
    }

    pub fn largest_generator(&self) -> i64 {
        *self.generators.iter().max().expect("nonempty")
    }

    fn table(&self) -> &ResidueTable {
        self.table.get_or_init(|| {
            let reduced: Vec<i64> = self.generators.iter().map(|g| g / self.gcd).collect();
            let modulus = self.smallest_generator() / self.gcd;
            ResidueTable::new(self.gcd, &reduced, modulus)
        })
    }

    /// Generator indices sorted by ascending generator value.
    pub(crate) fn ascending_indices(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.generators.len()).collect();
        idx.sort_by_key(|&i| self.generators[i]);
        idx
    }

    /// Membership for `⟨g₁, …, g_j⟩`, generators taken in ascending order;
    /// entry `j - 1` covers the first `j` of them.
    pub(crate) fn prefix_memberships(&self) -> &[Membership] {
        self.prefixes.get_or_init(|| {
            let order = self.ascending_indices();
            let sorted: Vec<i64> = order.iter().map(|&i| self.generators[i]).collect();
            (1..=sorted.len())
                .map(|j| Membership::for_generators(&sorted[..j]))
                .collect()
        })
    }

    /// Whether `t` is a non-negative integer combination of the generators.
    pub fn contains(&self, t: i64) -> bool {
        self.table().contains(t)
    }

    /// The inclusion-minimal generating subset, ascending.
    pub fn minimal_generators(&self) -> Vec<i64> {
        let mut sorted = self.generators.clone();
        sorted.sort_unstable();
        let mut kept: Vec<i64> = Vec::new();
        for g in sorted {
            if kept.is_empty() || !Membership::for_generators(&kept).contains(g) {
                kept.push(g);
            }
        }
        kept
    }

    pub fn embedding_dimension(&self) -> usize {
        self.minimal_generators().len()
    }

    /// `Ap(S; m)`, the least element of `S` in each residue class modulo `m`.
    pub fn apery_set(&self, m: i64) -> Result<AperySet> {
        if m <= 0 || !self.contains(m) {
            return Err(Error::InvalidAperyBase(m));
        }
        let d = self.gcd;
        if m == self.smallest_generator() {
            return Ok(AperySet::from_least(m, d, &self.table().least));
        }
        let reduced: Vec<i64> = self.generators.iter().map(|g| g / d).collect();
        let table = ResidueTable::new(d, &reduced, m / d);
        Ok(AperySet::from_least(m, d, &table.least))
    }

    /// Largest multiple of `d` outside `S`, or `-d` when there is none.
    pub fn frobenius(&self) -> i64 {
        let table = self.table();
        self.gcd * (table.max_least() - table.modulus)
    }

    /// Number of multiples of `d` outside `S`.
    pub fn genus(&self) -> i64 {
        let table = self.table();
        table.least.iter().map(|&l| l / table.modulus).sum()
    }

    /// Gaps `f ≥ 0` with `f + s ∈ S` for every positive `s ∈ S`, ascending.
    pub fn pseudo_frobenius(&self) -> Result<Vec<i64>> {
        if self.gcd != 1 {
            return Err(Error::NotNumerical(self.gcd));
        }
        let m = self.smallest_generator();
        let apery = self.apery_set(m)?;
        let mut pf: Vec<i64> = apery
            .elements()
            .iter()
            .filter(|&&a| self.generators.iter().all(|&g| self.contains(a + g - m)))
            .map(|&a| a - m)
            .filter(|&f| f >= 0)
            .collect();
        pf.sort_unstable();
        Ok(pf)
    }

    /// Cardinality of the pseudo-Frobenius set.
    pub fn type_number(&self) -> Result<usize> {
        Ok(self.pseudo_frobenius()?.len())
    }

    pub fn wilf_number(&self, formula: WilfFormula) -> Result<i64> {
        if self.gcd != 1 {
            return Err(Error::NotNumerical(self.gcd));
        }
        let k = self.embedding_dimension() as i64;
        let f = self.frobenius();
        let g = self.genus();
        Ok(match formula {
            WilfFormula::Shifted => k * (f - g) - (f + 1),
            WilfFormula::Standard => k * (f + 1 - g) - (f + 1),
        })
    }
}

fn check_positive(gens: &[i64]) -> Result<()> {
    if gens.is_empty() {
        return Err(Error::EmptyGenerators);
    }
    if let Some(&g) = gens.iter().find(|&&g| g <= 0) {
        return Err(Error::NonPositiveGenerator(g));
    }
    Ok(())
}

/// Which Wilf number to report.
///
/// `Shifted` is `k(F − g) − (F + 1)`; `Standard` is `k(F + 1 − g) − (F + 1)`.
/// They differ by exactly `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WilfFormula {
    Shifted,
    Standard,
}

/// `Ap(S; m)` stored by residue class: `elements[ρ]` is the member `t` with
/// `(t / d) mod (m / d) = ρ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AperySet {
    base: i64,
    step: i64,
    elements: Vec<i64>,
}

impl AperySet {
    fn from_least(base: i64, step: i64, least: &[i64]) -> Self {
        Self {
            base,
            step,
            elements: least.iter().map(|l| l * step).collect(),
        }
    }

    /// Builds a set from residue-indexed elements, validating their residues.
    pub(crate) fn from_elements(base: i64, step: i64, elements: Vec<i64>) -> Self {
        debug_assert_eq!(elements.len() as i64, base / step);
        debug_assert!(elements
            .iter()
            .enumerate()
            .all(|(rho, &e)| e % step == 0 && (e / step).rem_euclid(base / step) == rho as i64));
        Self {
            base,
            step,
            elements,
        }
    }

    pub fn base(&self) -> i64 {
        self.base
    }

    /// The gcd `d` of the ambient semigroup.
    pub fn step(&self) -> i64 {
        self.step
    }

    pub fn elements(&self) -> &[i64] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn max(&self) -> i64 {
        self.elements.iter().copied().max().unwrap_or(0)
    }

    pub fn sorted(&self) -> Vec<i64> {
        let mut v = self.elements.clone();
        v.sort_unstable();
        v
    }

    /// Element in the class of `t`, if `t` is a multiple of `d`.
    pub fn for_class_of(&self, t: i64) -> Option<i64> {
        if t % self.step != 0 {
            return None;
        }
        let rho = (t / self.step).rem_euclid(self.base / self.step);
        Some(self.elements[rho as usize])
    }
}

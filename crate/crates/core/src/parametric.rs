//! Parametrized families `P_n = ⟨w₁n + r₁, …, w_kn + r_k⟩` and polynomial
//! families `⟨f₁(n), …, f_k(n)⟩`.
//!
//! Verification routines compare each closed-form statement against an
//! independent direct computation on the instantiated semigroups and report
//! whether `n` was inside the regime where the statement is guaranteed.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factorizations::{
    betti_degree_multiset, betti_elements, check_minimal_presentation, factorizations,
    minimal_presentation, Factorization, PresentationCheck, Relation,
};
use crate::semigroup::{AperySet, Semigroup, WilfFormula};
use crate::weighted::{cmp_ratio, int, pairwise_delta_gcd};

fn checked_mul(a: i64, b: i64, what: &'static str) -> Result<i64> {
    a.checked_mul(b).ok_or(Error::Overflow(what))
}

fn checked_add(a: i64, b: i64, what: &'static str) -> Result<i64> {
    a.checked_add(b).ok_or(Error::Overflow(what))
}

/// Integer weighted length `w · z`.
pub(crate) fn weighted_len(z: &Factorization, w: &[i64]) -> i64 {
    z.exponents()
        .iter()
        .zip(w)
        .map(|(&e, &wi)| e as i64 * wi)
        .sum()
}

/// A linear family `P_n = ⟨w₁n + r₁, …, w_kn + r_k⟩` with positive weights.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinearFamily {
    weights: Vec<i64>,
    offsets: Vec<i64>,
    /// `P_n` of this family is `P_{n + shift}` of the family as supplied.
    shift: i64,
    normalized: bool,
}

impl LinearFamily {
    /// The family exactly as supplied, without reordering or reparametrizing.
    pub fn new(weights: Vec<i64>, offsets: Vec<i64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::EmptyGenerators);
        }
        if weights.len() != offsets.len() {
            return Err(Error::DimensionMismatch {
                expected: weights.len(),
                found: offsets.len(),
            });
        }
        if let Some(&w) = weights.iter().find(|&&w| w < 1) {
            return Err(Error::InvalidFamily(format!("weight {w} is not positive")));
        }
        Ok(Self {
            weights,
            offsets,
            shift: 0,
            normalized: false,
        })
    }

    /// Sorts by ascending `rᵢ/wᵢ` (ties by ascending `wᵢ`) and substitutes
    /// `n ↦ n + s` so that `0 ≤ r₁ < w₁`.
    pub fn normalize(weights: Vec<i64>, offsets: Vec<i64>) -> Result<Self> {
        Ok(Self::new(weights, offsets)?.normalized())
    }

    pub fn normalized(&self) -> Self {
        let mut pairs: Vec<(i64, i64)> = self
            .weights
            .iter()
            .copied()
            .zip(self.offsets.iter().copied())
            .collect();
        pairs.sort_by(|a, b| cmp_ratio((a.1, a.0), (b.1, b.0)).then(a.0.cmp(&b.0)));
        let (w1, r1) = pairs[0];
        let s = -r1.div_euclid(w1);
        Self {
            weights: pairs.iter().map(|p| p.0).collect(),
            offsets: pairs.iter().map(|p| p.1 + p.0 * s).collect(),
            shift: self.shift + s,
            normalized: true,
        }
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn offsets(&self) -> &[i64] {
        &self.offsets
    }

    pub fn rank(&self) -> usize {
        self.weights.len()
    }

    /// Parameter shift applied by normalization.
    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// The parameter of the supplied family that corresponds to `n` here.
    pub fn original_parameter(&self, n: i64) -> i64 {
        n + self.shift
    }

    /// `W = max wᵢ`.
    pub fn max_weight(&self) -> i64 {
        *self.weights.iter().max().unwrap()
    }

    /// `R = max rᵢ`.
    pub fn max_offset(&self) -> i64 {
        *self.offsets.iter().max().unwrap()
    }

    /// `p = w₁r_k − w_kr₁`.
    pub fn period(&self) -> i64 {
        let k = self.rank() - 1;
        self.weights[0] * self.offsets[k] - self.weights[k] * self.offsets[0]
    }

    /// `n₀ = w₁²WR²`, beyond which presentations transport along `Φₙ`.
    pub fn presentation_bound(&self) -> i64 {
        let (w1, r) = (self.weights[0], self.max_offset());
        w1 * w1 * self.max_weight() * r * r
    }

    /// `WR²`, beyond which the Apéry formulas hold (when `w₁ = 1`).
    pub fn apery_bound(&self) -> i64 {
        let r = self.max_offset();
        self.max_weight() * r * r
    }

    pub fn generators_at(&self, n: i64) -> Result<Vec<i64>> {
        self.weights
            .iter()
            .zip(&self.offsets)
            .map(|(&w, &r)| checked_add(checked_mul(w, n, "generator")?, r, "generator"))
            .collect()
    }

    /// `P_n` with generators in family order.
    pub fn instantiate(&self, n: i64) -> Result<Semigroup> {
        Semigroup::with_order(self.generators_at(n)?)
    }

    fn require_normalized(&self) -> Result<()> {
        if self.normalized {
            Ok(())
        } else {
            Err(Error::NotNormalized)
        }
    }

    fn require_period(&self) -> Result<i64> {
        self.require_normalized()?;
        match self.period() {
            0 => Err(Error::ZeroPeriod),
            p => Ok(p),
        }
    }

    fn require_unit_leading_weight(&self) -> Result<()> {
        self.require_normalized()?;
        match self.weights[0] {
            1 => Ok(()),
            w => Err(Error::LeadingWeightNotOne(w)),
        }
    }

    /// `Φₙ : ker πₙ → ker π_{n+p}`.
    ///
    /// With `ℓ = ||z|_w − |z′|_w|`, the heavier side gains `ℓw_k` copies of
    /// the first generator and the lighter side `ℓw₁` copies of the last.
    pub fn phi(&self, n: i64, rel: &Relation) -> Result<Relation> {
        let p = self.require_period()?;
        let source = self.instantiate(n)?;
        let checked = Relation::new(&source, rel.left.clone(), rel.right.clone())?;
        let k = self.rank();
        let (w1, wk) = (self.weights[0], self.weights[k - 1]);
        let lz = weighted_len(&checked.left, &self.weights);
        let lz2 = weighted_len(&checked.right, &self.weights);
        let ell = (lz - lz2).unsigned_abs();
        let bump = |z: &Factorization, idx: usize, by: u64| {
            let mut v = z.exponents().to_vec();
            v[idx] += by;
            Factorization::new(v)
        };
        let (left, right) = match lz.cmp(&lz2) {
            std::cmp::Ordering::Greater => (
                bump(&checked.left, 0, ell * wk as u64),
                bump(&checked.right, k - 1, ell * w1 as u64),
            ),
            std::cmp::Ordering::Less => (
                bump(&checked.left, k - 1, ell * w1 as u64),
                bump(&checked.right, 0, ell * wk as u64),
            ),
            std::cmp::Ordering::Equal => (checked.left, checked.right),
        };
        Relation::new(&self.instantiate(n + p)?, left, right)
    }

    /// Transports the canonical minimal presentation of `P_n` along `Φₙ` and
    /// checks the image against `P_{n+p}` directly.
    pub fn transport_presentation(&self, n: i64) -> Result<TransportReport> {
        let p = self.require_period()?;
        let source = minimal_presentation(&self.instantiate(n)?);
        let image = source
            .iter()
            .map(|rel| self.phi(n, rel))
            .collect::<Result<Vec<_>>>()?;
        let target = self.instantiate(n + p)?;
        let check = check_minimal_presentation(&target, &image);
        Ok(TransportReport {
            n,
            target_n: n + p,
            in_guaranteed_regime: n > self.presentation_bound(),
            source,
            image,
            check,
        })
    }

    /// `d` with `Δ_w(P_n) = {d}` for large `n`; zero when every offset is
    /// zero (the weighted delta set is empty).
    ///
    /// `d = gcd(w₁, …, w_{j−1}, min Δ_w(S)) · gcd(S)` where `r_j` is the first
    /// positive offset and `S = ⟨r_j, …, r_k⟩`.
    pub fn family_delta(&self) -> Result<i64> {
        self.require_normalized()?;
        let Some(j) = self.offsets.iter().position(|&r| r > 0) else {
            return Ok(0);
        };
        let prefix = self.weights[..j].iter().fold(0i64, |acc, &w| acc.gcd(&w));
        let tail_offsets = &self.offsets[j..];
        let tail_weights: Vec<_> = self.weights[j..].iter().map(|&w| int(w)).collect();
        let min_delta = pairwise_delta_gcd(tail_offsets, &tail_weights);
        debug_assert!(min_delta.is_integer());
        let min_delta =
            i64::try_from(min_delta.to_integer()).map_err(|_| Error::Overflow("delta"))?;
        let offset_gcd = tail_offsets.iter().fold(0i64, |acc, &r| acc.gcd(&r));
        Ok(prefix.gcd(&min_delta) * offset_gcd)
    }

    /// `gcd{wᵢr_j − w_jrᵢ}` over all pairs; independent of `n`.
    pub fn pairwise_delta(&self) -> i64 {
        let mut g = 0i64;
        for i in 0..self.rank() {
            for j in i + 1..self.rank() {
                g = g.gcd(&(self.weights[i] * self.offsets[j] - self.weights[j] * self.offsets[i]));
            }
        }
        g
    }

    /// `φₙ : Betti(P_n) → Betti(P_{n+p})`, checked against a direct Betti
    /// computation on `P_{n+p}`.
    pub fn betti_bijection(&self, n: i64) -> Result<BettiBijectionReport> {
        let p = self.require_period()?;
        let d = self.family_delta()?;
        let k = self.rank();
        let source = self.instantiate(n)?;
        let target = self.instantiate(n + p)?;
        let (src_betti, tgt_betti) =
            rayon::join(|| betti_elements(&source), || betti_elements(&target));
        // The lighter side of a two-length relation gains `d·w₁` copies of the
        // last generator of `P_{n+p}`.
        let jump = checked_mul(
            d * self.weights[0],
            self.weights[k - 1] * (n + p) + self.offsets[k - 1],
            "Betti image",
        )?;
        let mut map = Vec::new();
        let mut irregular = Vec::new();
        for &beta in src_betti.keys() {
            let lengths: BTreeSet<i64> = factorizations(&source, beta)
                .iter()
                .map(|z| weighted_len(z, &self.weights))
                .collect();
            let lengths: Vec<i64> = lengths.into_iter().collect();
            let lambda = lengths[0];
            let image = match lengths.as_slice() {
                [_] => beta + lambda * p,
                [lo, hi] if hi - lo == d => beta + lambda * p + jump,
                _ => {
                    irregular.push(BettiLengths { beta, lengths });
                    continue;
                }
            };
            map.push((beta, image));
        }
        let images: BTreeSet<i64> = map.iter().map(|&(_, b)| b).collect();
        let target_keys: BTreeSet<i64> = tgt_betti.keys().copied().collect();
        let is_bijection =
            irregular.is_empty() && images.len() == map.len() && images == target_keys;
        Ok(BettiBijectionReport {
            n,
            target_n: n + p,
            delta: d,
            in_guaranteed_regime: n > self.presentation_bound(),
            map,
            irregular,
            source_betti: src_betti.clone(),
            target_betti: tgt_betti.clone(),
            source_count: src_betti.values().sum(),
            target_count: tgt_betti.values().sum(),
            is_bijection,
        })
    }

    /// `S = ⟨r₂, …, r_k⟩` (positive offsets only) together with the matching
    /// weights, for families with `w₁ = 1`.
    fn offset_semigroup(&self) -> Result<(Semigroup, Vec<(i64, i64)>)> {
        self.require_unit_leading_weight()?;
        let pairs: Vec<(i64, i64)> = self.offsets[1..]
            .iter()
            .zip(&self.weights[1..])
            .filter(|(&r, _)| r > 0)
            .map(|(&r, &w)| (r, w))
            .collect();
        if pairs.is_empty() {
            return Err(Error::InvalidFamily("no positive offsets".into()));
        }
        let gens: Vec<i64> = pairs.iter().map(|p| p.0).collect();
        Ok((Semigroup::build(&gens)?, pairs))
    }

    /// `Ap(P_n; n) = {i + m_{S,w}(i)·n : i ∈ Ap(S; dn)}` for `w₁ = 1`,
    /// compared with the directly computed Apéry set.
    pub fn fast_apery(&self, n: i64) -> Result<FastAperyReport> {
        let (s, pairs) = self.offset_semigroup()?;
        let pn = self.instantiate(n)?;
        if pn.gcd() != 1 {
            return Err(Error::NotNumerical(pn.gcd()));
        }
        let d = s.gcd();
        let ap_s = if d * n > s.frobenius() {
            apery_at_multiple(&s, n)?
        } else {
            s.apery_set(d * n)?
        };
        let min_len = min_weighted_lengths(&pairs, ap_s.max());
        let mut slots: Vec<Option<i64>> = vec![None; n as usize];
        let mut distinct = true;
        let mut singleton = true;
        let mut lifted = Vec::with_capacity(ap_s.len());
        for &i in ap_s.elements() {
            let m = min_len[i as usize].expect("Apéry elements are members");
            let a = checked_add(i, checked_mul(m, n, "Apéry element")?, "Apéry element")?;
            lifted.push(LiftedApery {
                offset_element: i,
                min_length: m,
                element: a,
            });
            let slot = &mut slots[a.rem_euclid(n) as usize];
            if slot.is_some() {
                distinct = false;
            }
            *slot = Some(a);
            let lengths: BTreeSet<i64> = factorizations(&pn, a)
                .iter()
                .map(|z| weighted_len(z, &self.weights))
                .collect();
            if lengths.len() != 1 || !lengths.contains(&m) {
                singleton = false;
            }
        }
        let direct = pn.apery_set(n)?;
        let matches_direct = distinct
            && slots
                .iter()
                .zip(direct.elements())
                .all(|(s, &e)| *s == Some(e));
        Ok(FastAperyReport {
            n,
            in_guaranteed_regime: n > self.apery_bound(),
            lifted,
            direct,
            matches_direct,
            singleton_lengths: singleton,
        })
    }

    /// Compares the classes `F_n` of pseudo-Frobenius numbers of `P_n` with
    /// those of `P_{n+r_k}`.
    ///
    /// Two maps are checked: the piecewise map `i ↦ i` (for `i ≤ dn`),
    /// `i ↦ i + r_k` (otherwise), and the uniform shift `i ↦ i + d·r_k`.
    /// Only the latter is used by [`PfTransportReport::verified`]; the
    /// piecewise map fails on most parameters, including when `d = 1`.
    pub fn pf_transport(&self, n: i64) -> Result<PfTransportReport> {
        let (s, _) = self.offset_semigroup()?;
        let rk = *self.offsets.last().unwrap();
        let d = s.gcd();
        let source = self.pf_classes(&s, n)?;
        let target = self.pf_classes(&s, n + rk)?;
        let target_set: BTreeSet<i64> = target.classes.iter().copied().collect();
        let is_bijection_onto = |map: &[(i64, i64)]| {
            let images: BTreeSet<i64> = map.iter().map(|m| m.1).collect();
            images.len() == map.len() && images == target_set
        };
        let piecewise_map: Vec<(i64, i64)> = source
            .classes
            .iter()
            .map(|&i| (i, if i <= d * n { i } else { i + rk }))
            .collect();
        let shift_map: Vec<(i64, i64)> = source.classes.iter().map(|&i| (i, i + d * rk)).collect();
        Ok(PfTransportReport {
            n,
            target_n: n + rk,
            in_guaranteed_regime: n > self.apery_bound(),
            source_type: source.pseudo_frobenius.len(),
            target_type: target.pseudo_frobenius.len(),
            piecewise_map_is_bijection: is_bijection_onto(&piecewise_map),
            shift_map_is_bijection: is_bijection_onto(&shift_map),
            source,
            target,
            piecewise_map,
            shift_map,
        })
    }

    fn pf_classes(&self, s: &Semigroup, n: i64) -> Result<PfClasses> {
        let pn = self.instantiate(n)?;
        let pf = pn.pseudo_frobenius()?;
        let d = s.gcd();
        let ap_s = if d * n > s.frobenius() {
            apery_at_multiple(s, n)?
        } else {
            s.apery_set(d * n)?
        };
        let residues: BTreeSet<i64> = pf.iter().map(|a| a.rem_euclid(n)).collect();
        let mut classes: Vec<i64> = ap_s
            .elements()
            .iter()
            .copied()
            .filter(|i| residues.contains(&i.rem_euclid(n)))
            .collect();
        classes.sort_unstable();
        Ok(PfClasses {
            n,
            pseudo_frobenius: pf,
            classes,
        })
    }
}

/// `m_{S,w}` on `0..=limit` for generator/weight pairs; `None` off `S`.
fn min_weighted_lengths(pairs: &[(i64, i64)], limit: i64) -> Vec<Option<i64>> {
    let size = limit.max(0) as usize + 1;
    let mut best: Vec<Option<i64>> = vec![None; size];
    best[0] = Some(0);
    for t in 1..size {
        for &(r, w) in pairs {
            let r = r as usize;
            if r <= t {
                if let Some(prev) = best[t - r] {
                    let cand = prev + w;
                    if best[t].is_none_or(|b| cand < b) {
                        best[t] = Some(cand);
                    }
                }
            }
        }
    }
    best
}

/// Closed-form `Ap(S; dn)` when `dn > F(S)`: the class of `di` holds `di` if
/// it is a member and `di + dn` otherwise.
pub fn apery_at_multiple(s: &Semigroup, n: i64) -> Result<AperySet> {
    let d = s.gcd();
    let multiple = checked_mul(d, n, "dn")?;
    let frobenius = s.frobenius();
    if n < 1 || multiple <= frobenius {
        return Err(Error::BelowFrobenius {
            multiple,
            frobenius,
        });
    }
    let elements = (0..n)
        .map(|i| {
            let di = d * i;
            if s.contains(di) {
                di
            } else {
                di + multiple
            }
        })
        .collect();
    Ok(AperySet::from_elements(multiple, d, elements))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TransportReport {
    pub n: i64,
    pub target_n: i64,
    pub in_guaranteed_regime: bool,
    pub source: Vec<Relation>,
    pub image: Vec<Relation>,
    pub check: PresentationCheck,
}

impl TransportReport {
    pub fn verified(&self) -> bool {
        self.check.is_minimal_presentation
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BettiLengths {
    pub beta: i64,
    pub lengths: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BettiBijectionReport {
    pub n: i64,
    pub target_n: i64,
    pub delta: i64,
    pub in_guaranteed_regime: bool,
    pub map: Vec<(i64, i64)>,
    /// Betti elements whose weighted length set is neither `{λ}` nor
    /// `{λ, λ + d}`.
    pub irregular: Vec<BettiLengths>,
    pub source_betti: BTreeMap<i64, usize>,
    pub target_betti: BTreeMap<i64, usize>,
    /// Betti elements counted with multiplicity.
    pub source_count: usize,
    pub target_count: usize,
    pub is_bijection: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LiftedApery {
    pub offset_element: i64,
    pub min_length: i64,
    pub element: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FastAperyReport {
    pub n: i64,
    pub in_guaranteed_regime: bool,
    /// `i ↦ i + m_{S,w}(i)·n`, in the order of `Ap(S; dn)`'s classes.
    pub lifted: Vec<LiftedApery>,
    pub direct: AperySet,
    pub matches_direct: bool,
    /// Every lifted element has weighted length set `{m_{S,w}(i)}` in `P_n`.
    pub singleton_lengths: bool,
}

impl FastAperyReport {
    pub fn verified(&self) -> bool {
        self.matches_direct && self.singleton_lengths
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PfClasses {
    pub n: i64,
    pub pseudo_frobenius: Vec<i64>,
    /// Elements of `Ap(S; dn)` congruent mod `n` to a pseudo-Frobenius number.
    pub classes: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PfTransportReport {
    pub n: i64,
    pub target_n: i64,
    pub in_guaranteed_regime: bool,
    pub source: PfClasses,
    pub target: PfClasses,
    /// `i ↦ i` for `i ≤ dn`, `i ↦ i + r_k` otherwise.
    pub piecewise_map: Vec<(i64, i64)>,
    /// `i ↦ i + d·r_k`.
    pub shift_map: Vec<(i64, i64)>,
    pub source_type: usize,
    pub target_type: usize,
    pub piecewise_map_is_bijection: bool,
    pub shift_map_is_bijection: bool,
}

impl PfTransportReport {
    pub fn verified(&self) -> bool {
        self.shift_map_is_bijection && self.source_type == self.target_type
    }
}

/// `⟨f₁(n), …, f_k(n)⟩` for integer polynomials with positive leading
/// coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PolynomialFamily {
    /// Ascending coefficient lists.
    polys: Vec<Vec<i64>>,
    /// Every `fᵢ(n) ≥ 1` for `n ≥ n_min`.
    n_min: i64,
}

impl PolynomialFamily {
    pub fn new(polys: Vec<Vec<i64>>) -> Result<Self> {
        if polys.is_empty() {
            return Err(Error::EmptyGenerators);
        }
        let mut trimmed = Vec::with_capacity(polys.len());
        for mut p in polys {
            while p.last() == Some(&0) {
                p.pop();
            }
            match p.last() {
                Some(&c) if c > 0 => trimmed.push(p),
                _ => {
                    return Err(Error::InvalidFamily(
                        "every polynomial needs a positive leading coefficient".into(),
                    ))
                }
            }
        }
        let n_min = trimmed.iter().map(|p| positive_from(p)).max().unwrap();
        Ok(Self {
            polys: trimmed,
            n_min,
        })
    }

    pub fn polys(&self) -> &[Vec<i64>] {
        &self.polys
    }

    pub fn n_min(&self) -> i64 {
        self.n_min
    }

    pub fn generators_at(&self, n: i64) -> Result<Vec<i64>> {
        self.polys.iter().map(|p| eval_poly(p, n)).collect()
    }

    pub fn instantiate(&self, n: i64) -> Result<Semigroup> {
        Semigroup::with_order(self.generators_at(n)?)
    }
}

fn eval_poly(coeffs: &[i64], n: i64) -> Result<i64> {
    coeffs.iter().rev().try_fold(0i64, |acc, &c| {
        acc.checked_mul(n)
            .and_then(|v| v.checked_add(c))
            .ok_or(Error::Overflow("polynomial value"))
    })
}

/// Least `n ≥ 0` with `f(m) ≥ 1` for every `m ≥ n`.
fn positive_from(coeffs: &[i64]) -> i64 {
    let lead = *coeffs.last().unwrap() as f64;
    // Cauchy bound on the roots of f − 1.
    let mut shifted = coeffs.to_vec();
    shifted[0] -= 1;
    let bound = 1.0
        + shifted[..shifted.len() - 1]
            .iter()
            .map(|&c| (c as f64 / lead).abs())
            .fold(0.0, f64::max);
    let mut n = bound.ceil() as i64;
    while n > 0 && eval_poly(coeffs, n - 1).is_ok_and(|v| v >= 1) {
        n -= 1;
    }
    n
}

/// A family of either kind, indexed by the parameter as supplied.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilySource {
    Linear(LinearFamily),
    Polynomial(PolynomialFamily),
}

impl FamilySource {
    /// Semigroup at the supplied parameter `n`. Linear families are stored
    /// normalized, so `n` is translated by the normalization shift.
    pub fn instantiate(&self, n: i64) -> Result<Semigroup> {
        match self {
            FamilySource::Linear(f) => f.instantiate(n - f.shift()),
            FamilySource::Polynomial(f) => f.instantiate(n),
        }
    }

    pub fn linear(&self) -> Option<&LinearFamily> {
        match self {
            FamilySource::Linear(f) => Some(f),
            FamilySource::Polynomial(_) => None,
        }
    }
}

/// Family specification document.
///
/// Either `{"w": [...], "r": [...]}` or `{"polys": [[c₀, c₁, …], …]}` with
/// ascending coefficients, plus an optional `{"range": [start, end]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polys: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub range: Option<(i64, i64)>,
}

impl FamilySpec {
    pub fn source(&self) -> Result<FamilySource> {
        match (&self.w, &self.r, &self.polys) {
            (Some(w), Some(r), None) => Ok(FamilySource::Linear(LinearFamily::normalize(
                w.clone(),
                r.clone(),
            )?)),
            (None, None, Some(polys)) => Ok(FamilySource::Polynomial(PolynomialFamily::new(
                polys.clone(),
            )?)),
            _ => Err(Error::InvalidFamily(
                "give either both \"w\" and \"r\", or \"polys\"".into(),
            )),
        }
    }
}

/// Quantities a scan can tabulate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Invariant {
    Frobenius,
    Genus,
    Type,
    /// `k(F − g) − (F + 1)`.
    Wilf,
    /// `k(F + 1 − g) − (F + 1)`.
    WilfStandard,
    /// Betti elements counted with multiplicity.
    BettiCount,
    /// Betti elements repeated by multiplicity.
    BettiMultiset,
    /// Degrees of the canonical minimal presentation.
    MinpresDegrees,
}

impl Invariant {
    pub const ALL: [Invariant; 8] = [
        Invariant::Frobenius,
        Invariant::Genus,
        Invariant::Type,
        Invariant::Wilf,
        Invariant::WilfStandard,
        Invariant::BettiCount,
        Invariant::BettiMultiset,
        Invariant::MinpresDegrees,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Invariant::Frobenius => "frobenius",
            Invariant::Genus => "genus",
            Invariant::Type => "type",
            Invariant::Wilf => "wilf",
            Invariant::WilfStandard => "wilf_standard",
            Invariant::BettiCount => "betti_count",
            Invariant::BettiMultiset => "betti_multiset",
            Invariant::MinpresDegrees => "minpres_degrees",
        }
    }

    pub fn evaluate(self, s: &Semigroup) -> Result<ScanValue> {
        Ok(match self {
            Invariant::Frobenius => ScanValue::Integer(s.frobenius()),
            Invariant::Genus => ScanValue::Integer(s.genus()),
            Invariant::Type => ScanValue::Integer(s.type_number()? as i64),
            Invariant::Wilf => ScanValue::Integer(s.wilf_number(WilfFormula::Shifted)?),
            Invariant::WilfStandard => ScanValue::Integer(s.wilf_number(WilfFormula::Standard)?),
            Invariant::BettiCount => {
                ScanValue::Integer(betti_elements(s).values().sum::<usize>() as i64)
            }
            Invariant::BettiMultiset => {
                ScanValue::Multiset(betti_degree_multiset(&betti_elements(s)))
            }
            Invariant::MinpresDegrees => {
                let mut degrees: Vec<i64> =
                    minimal_presentation(s).iter().map(|r| r.degree).collect();
                degrees.sort_unstable();
                ScanValue::Multiset(degrees)
            }
        })
    }
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Invariant {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Invariant::ALL
            .into_iter()
            .find(|i| i.name() == s)
            .ok_or_else(|| format!("unknown invariant {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScanValue {
    Integer(i64),
    Multiset(Vec<i64>),
}

impl ScanValue {
    pub fn as_integer(&self) -> Option<i64> {
        match self {
            ScanValue::Integer(v) => Some(*v),
            ScanValue::Multiset(_) => None,
        }
    }
}

impl fmt::Display for ScanValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScanValue::Integer(v) => write!(f, "{v}"),
            ScanValue::Multiset(vs) => {
                let parts: Vec<String> = vs.iter().map(ToString::to_string).collect();
                write!(f, "{}", parts.join(" "))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRow {
    pub n: i64,
    pub value: ScanValue,
}

/// Evaluates `invariant` at each parameter, in parallel, returning rows in
/// the order of `params`.
pub fn scan(source: &FamilySource, params: &[i64], invariant: Invariant) -> Result<Vec<ScanRow>> {
    params
        .par_iter()
        .map(|&n| {
            let s = source.instantiate(n)?;
            Ok(ScanRow {
                n,
                value: invariant.evaluate(&s)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fz(v: &[u64]) -> Factorization {
        Factorization::new(v.to_vec())
    }

    fn example_family() -> LinearFamily {
        LinearFamily::normalize(vec![3, 4, 6, 9], vec![1, 2, 4, 6]).unwrap()
    }

    #[test]
    fn normalization() {
        let f = example_family();
        assert_eq!(f.weights(), &[3, 4, 6, 9]);
        assert_eq!(f.offsets(), &[1, 2, 4, 6]);
        assert_eq!(f.shift(), 0);
        assert_eq!(f.period(), 9);
        assert_eq!(f.presentation_bound(), 2916);
        let f = LinearFamily::normalize(vec![1, 1], vec![5, 7]).unwrap();
        assert_eq!(f.offsets(), &[0, 2]);
        assert_eq!(f.shift(), -5);
        assert_eq!(f.original_parameter(10), 5);
        let f = LinearFamily::normalize(vec![1, 2], vec![3, 1]).unwrap();
        assert_eq!((f.weights(), f.offsets()), (&[2, 1][..], &[1, 3][..]));
        let f = LinearFamily::normalize(vec![2, 3], vec![-7, -1]).unwrap();
        assert_eq!(f.offsets(), &[1, 11]);
        assert!(f.offsets()[0] < f.weights()[0]);
    }

    #[test]
    fn family_validation() {
        assert!(matches!(
            LinearFamily::new(vec![0, 1], vec![0, 1]),
            Err(Error::InvalidFamily(_))
        ));
        assert!(matches!(
            LinearFamily::new(vec![1], vec![0, 1]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert_eq!(
            LinearFamily::new(vec![], vec![]),
            Err(Error::EmptyGenerators)
        );
        let raw = LinearFamily::new(vec![1, 1], vec![0, 2]).unwrap();
        assert_eq!(raw.family_delta(), Err(Error::NotNormalized));
    }

    #[test]
    fn instantiation() {
        let f = example_family();
        assert_eq!(
            f.instantiate(506).unwrap().generators(),
            &[1519, 2026, 3040, 4560]
        );
        let f = LinearFamily::normalize(vec![1, 1, 1], vec![0, 3, 5]).unwrap();
        assert_eq!(f.instantiate(10).unwrap().generators(), &[10, 13, 15]);
        let p = PolynomialFamily::new(vec![
            vec![0, 0, 1],
            vec![1, 1, 1],
            vec![1, 2, 1],
            vec![3, 2, 1],
        ])
        .unwrap();
        assert_eq!(
            p.instantiate(52).unwrap().generators(),
            &[2704, 2757, 2809, 2811]
        );
        assert_eq!(p.n_min(), 1);
        assert!(f.instantiate(0).is_err());
    }

    #[test]
    fn polynomial_thresholds() {
        let p = PolynomialFamily::new(vec![vec![-10, 0, 1]]).unwrap();
        assert_eq!(p.n_min(), 4);
        assert!(PolynomialFamily::new(vec![vec![1, -1]]).is_err());
        assert!(PolynomialFamily::new(vec![]).is_err());
    }

    #[test]
    fn phi_examples() {
        let f = example_family();
        let s = f.instantiate(506).unwrap();
        let rel = Relation::new(&s, fz(&[506, 1, 0, 0]), fz(&[0, 0, 0, 169])).unwrap();
        let img = f.phi(506, &rel).unwrap();
        assert_eq!(
            (img.left, img.right),
            (fz(&[515, 1, 0, 0]), fz(&[0, 0, 0, 172]))
        );
        let rel = Relation::new(&s, fz(&[0, 0, 3, 0]), fz(&[0, 0, 0, 2])).unwrap();
        let img = f.phi(506, &rel).unwrap();
        assert_eq!(
            (img.left, img.right),
            (fz(&[0, 0, 3, 0]), fz(&[0, 0, 0, 2]))
        );
        let rel = Relation::new(&s, fz(&[508, 0, 0, 0]), fz(&[0, 2, 2, 167])).unwrap();
        let img = f.phi(506, &rel).unwrap();
        assert_eq!(
            (img.left, img.right),
            (fz(&[517, 0, 0, 0]), fz(&[0, 2, 2, 170]))
        );
        let swapped = f.phi(506, &rel.swapped()).unwrap();
        assert_eq!(
            (swapped.left, swapped.right),
            (fz(&[0, 2, 2, 170]), fz(&[517, 0, 0, 0]))
        );
    }

    #[test]
    fn phi_rejects_non_kernel() {
        let f = example_family();
        let bad = Relation {
            degree: 0,
            left: fz(&[1, 0, 0, 0]),
            right: fz(&[0, 1, 0, 0]),
        };
        assert!(matches!(f.phi(506, &bad), Err(Error::NotInKernel { .. })));
    }

    #[test]
    fn zero_period_refused() {
        let f = LinearFamily::normalize(vec![1, 2, 3], vec![1, 2, 3]).unwrap();
        assert_eq!(f.period(), 0);
        assert_eq!(f.transport_presentation(10).unwrap_err(), Error::ZeroPeriod);
        assert_eq!(f.family_delta().unwrap(), 0);
    }

    #[test]
    fn small_family_transport() {
        let f = LinearFamily::normalize(vec![1, 1, 1], vec![0, 1, 2]).unwrap();
        assert_eq!(f.presentation_bound(), 4);
        let report = f.transport_presentation(5).unwrap();
        assert!(report.in_guaranteed_regime);
        assert_eq!(report.target_n, 7);
        assert!(report.verified(), "{:?}", report.check.issues);
    }

    #[test]
    fn small_family_betti_bijection() {
        let f = LinearFamily::normalize(vec![1, 1, 1], vec![0, 1, 2]).unwrap();
        let report = f.betti_bijection(5).unwrap();
        assert!(report.is_bijection, "{report:?}");
        assert_eq!(report.source_count, report.target_count);
    }

    #[test]
    fn family_deltas() {
        let f = LinearFamily::normalize(vec![5, 7, 2, 3], vec![0, 0, 2, 3]).unwrap();
        assert_eq!(f.family_delta().unwrap(), 1);
        assert_eq!(f.pairwise_delta(), 1);
        assert_eq!(example_family().family_delta().unwrap(), 1);
        assert_eq!(example_family().pairwise_delta(), 1);
        let f = LinearFamily::normalize(vec![2, 3, 5], vec![2, 3, 5]).unwrap();
        assert_eq!(f.family_delta().unwrap(), 0);
        let f = LinearFamily::normalize(vec![1, 1], vec![0, 4]).unwrap();
        assert_eq!(f.family_delta().unwrap(), 4);
        assert_eq!(f.pairwise_delta(), 4);
    }

    #[test]
    fn apery_multiples() {
        let s = Semigroup::build(&[4, 6]).unwrap();
        let ap = apery_at_multiple(&s, 37).unwrap();
        assert_eq!(ap.len(), 37);
        assert_eq!(ap.elements()[0], 0);
        assert_eq!(ap.elements()[1], 76);
        assert!((2..37).all(|i| ap.elements()[i] == 2 * i as i64));
        assert_eq!(ap, s.apery_set(74).unwrap());
        let s = Semigroup::build(&[2, 3]).unwrap();
        let ap = apery_at_multiple(&s, 10).unwrap();
        assert_eq!(ap.elements(), &[0, 11, 2, 3, 4, 5, 6, 7, 8, 9]);
        assert_eq!(
            apery_at_multiple(&s, 1),
            Err(Error::BelowFrobenius {
                multiple: 1,
                frobenius: 1
            })
        );
    }

    #[test]
    fn fast_apery_two_generators() {
        let f = LinearFamily::normalize(vec![1, 2], vec![0, 3]).unwrap();
        let report = f.fast_apery(19).unwrap();
        assert!(report.verified());
        let mut lifted: Vec<i64> = report.lifted.iter().map(|l| l.element).collect();
        lifted.sort_unstable();
        assert_eq!(lifted, (0..19).map(|i| 41 * i).collect::<Vec<_>>());
        assert_eq!(report.lifted[0].element, 0);
    }

    #[test]
    fn fast_apery_three_generators() {
        let f = LinearFamily::normalize(vec![1, 1, 1], vec![0, 4, 6]).unwrap();
        assert!(f.fast_apery(37).unwrap().verified());
        assert_eq!(f.fast_apery(38).unwrap_err(), Error::NotNumerical(2));
        let g = example_family();
        assert_eq!(g.fast_apery(10).unwrap_err(), Error::LeadingWeightNotOne(3));
    }

    #[test]
    fn pf_transport_example() {
        let f = LinearFamily::normalize(vec![1, 1, 1], vec![0, 4, 6]).unwrap();
        let report = f.pf_transport(37).unwrap();
        assert_eq!(report.target_n, 43);
        assert_eq!(report.source.classes, vec![68, 76]);
        assert_eq!(report.target.classes, vec![80, 88]);
        assert_eq!((report.source_type, report.target_type), (2, 2));
        assert!(report.verified(), "{report:?}");
        assert!(!report.piecewise_map_is_bijection);
        assert!(report.piecewise_map.iter().all(|&(i, j)| i != 0 || j == 0));
    }

    #[test]
    fn spec_documents() {
        let spec: FamilySpec = serde_json_like(r#"{"w":[1,1],"r":[0,2],"range":[5,61]}"#);
        assert_eq!(spec.range, Some((5, 61)));
        assert!(matches!(spec.source().unwrap(), FamilySource::Linear(_)));
        let bad = FamilySpec {
            w: Some(vec![1]),
            r: None,
            polys: None,
            range: None,
        };
        assert!(bad.source().is_err());
    }

    fn serde_json_like(s: &str) -> FamilySpec {
        // Minimal hand parse for the fixed test document shape.
        let nums: Vec<i64> = s
            .split(|c: char| !c.is_ascii_digit() && c != '-')
            .filter(|t| !t.is_empty())
            .map(|t| t.parse().unwrap())
            .collect();
        FamilySpec {
            w: Some(nums[0..2].to_vec()),
            r: Some(nums[2..4].to_vec()),
            polys: None,
            range: Some((nums[4], nums[5])),
        }
    }

    #[test]
    fn scans_are_ordered() {
        let f = FamilySource::Linear(LinearFamily::normalize(vec![1, 1], vec![0, 2]).unwrap());
        let params: Vec<i64> = (5..=21).step_by(2).collect();
        let rows = scan(&f, &params, Invariant::Frobenius).unwrap();
        for row in &rows {
            let n = row.n;
            assert_eq!(row.value, ScanValue::Integer(n * (n + 2) - n - (n + 2)));
        }
        assert_eq!(rows.iter().map(|r| r.n).collect::<Vec<_>>(), params);
    }

    #[test]
    fn invariant_names_round_trip() {
        for inv in Invariant::ALL {
            assert_eq!(inv.name().parse::<Invariant>().unwrap(), inv);
        }
        assert!("nope".parse::<Invariant>().is_err());
    }
}

//! Exact quasipolynomial fitting over integer-indexed rational samples.
//!
//! A quasipolynomial of period `p` and degree `deg` is a polynomial in `n`
//! whose coefficients depend on `n mod p`. Each residue class is fitted
//! independently by exact interpolation through its newest `deg + 1` samples
//! and then checked against every older sample of the class.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::weighted::int;

/// Samples `n ↦ value`.
pub type Samples = BTreeMap<i64, BigRational>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuasiPolynomial {
    period: usize,
    degree: usize,
    /// `classes[s]` holds the ascending coefficients for `n ≡ s (mod p)`, or
    /// `None` when the class had no samples.
    classes: Vec<Option<Vec<BigRational>>>,
    valid_from: i64,
}

impl QuasiPolynomial {
    pub fn period(&self) -> usize {
        self.period
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Smallest `n` from which the fit reproduces every sample.
    pub fn valid_from(&self) -> i64 {
        self.valid_from
    }

    /// Coefficient of `n^j` on the class `s`.
    pub fn coefficient(&self, j: usize, s: usize) -> Option<&BigRational> {
        self.classes.get(s)?.as_ref()?.get(j)
    }

    pub fn classes(&self) -> &[Option<Vec<BigRational>>] {
        &self.classes
    }

    pub fn evaluate(&self, n: i64) -> Option<BigRational> {
        let s = n.rem_euclid(self.period as i64) as usize;
        let coeffs = self.classes[s].as_ref()?;
        Some(horner(coeffs, &int(n)))
    }
}

fn horner(coeffs: &[BigRational], x: &BigRational) -> BigRational {
    coeffs
        .iter()
        .rev()
        .fold(BigRational::zero(), |acc, c| acc * x + c)
}

/// Samples that disagree with the fit through the newest points of each class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MismatchReport {
    /// Largest disagreeing `n`: the fit can hold at best above it.
    pub largest: i64,
    pub mismatches: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Fit {
    Exact(QuasiPolynomial),
    Mismatch(MismatchReport),
}

impl Fit {
    pub fn exact(self) -> Option<QuasiPolynomial> {
        match self {
            Fit::Exact(qp) => Some(qp),
            Fit::Mismatch(_) => None,
        }
    }
}

/// Ascending coefficients of the polynomial through `points` (distinct `x`).
fn interpolate(points: &[(i64, &BigRational)]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); points.len()];
    for (i, &(xi, yi)) in points.iter().enumerate() {
        // basis = Π_{j≠i} (x − x_j) / (x_i − x_j)
        let mut basis = vec![BigRational::one()];
        let mut denom = BigRational::one();
        for (j, &(xj, _)) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            let mut next = vec![BigRational::zero(); basis.len() + 1];
            for (k, b) in basis.iter().enumerate() {
                next[k + 1] += b;
                next[k] -= b * int(xj);
            }
            basis = next;
            denom *= int(xi - xj);
        }
        let scale = yi / denom;
        for (o, b) in out.iter_mut().zip(&basis) {
            *o += b * &scale;
        }
    }
    out
}

fn split_classes(samples: &Samples, period: usize) -> Vec<Vec<(i64, &BigRational)>> {
    let mut classes = vec![Vec::new(); period];
    for (&n, v) in samples {
        classes[n.rem_euclid(period as i64) as usize].push((n, v));
    }
    classes
}

/// Fits every sample exactly with the given period and degree.
///
/// Each nonempty class needs at least `degree + 2` samples so that the fit is
/// checked against at least one point it was not built from.
pub fn fit(samples: &Samples, period: usize, degree: usize) -> Result<Fit> {
    if period == 0 {
        return Err(Error::ZeroPeriodFit);
    }
    let needed = degree + 2;
    let classes = split_classes(samples, period);
    if classes.iter().all(Vec::is_empty) {
        return Err(Error::InsufficientSamples {
            residue: 0,
            found: 0,
            needed,
        });
    }
    if let Some((residue, c)) = classes
        .iter()
        .enumerate()
        .find(|(_, c)| !c.is_empty() && c.len() < needed)
    {
        return Err(Error::InsufficientSamples {
            residue,
            found: c.len(),
            needed,
        });
    }
    let mut fitted = Vec::with_capacity(period);
    let mut mismatches = Vec::new();
    for class in &classes {
        if class.is_empty() {
            fitted.push(None);
            continue;
        }
        let newest = &class[class.len() - (degree + 1)..];
        let coeffs = interpolate(newest);
        for &(n, v) in &class[..class.len() - (degree + 1)] {
            if horner(&coeffs, &int(n)) != *v {
                mismatches.push(n);
            }
        }
        fitted.push(Some(coeffs));
    }
    if let Some(&largest) = mismatches.iter().max() {
        mismatches.sort_unstable();
        return Ok(Fit::Mismatch(MismatchReport {
            largest,
            mismatches,
        }));
    }
    Ok(Fit::Exact(QuasiPolynomial {
        period,
        degree,
        classes: fitted,
        valid_from: *samples.keys().next().expect("nonempty"),
    }))
}

/// Fits the eventual behaviour: on a mismatch, discards every sample at or
/// below the largest mismatching `n` and refits. Returns the last mismatch
/// report if the remaining tail becomes too short.
pub fn fit_eventually(samples: &Samples, period: usize, degree: usize) -> Result<Fit> {
    let populated: Vec<bool> = split_classes(samples, period.max(1))
        .iter()
        .map(|c| !c.is_empty())
        .collect();
    let mut tail = samples.clone();
    loop {
        match fit(&tail, period, degree)? {
            Fit::Exact(qp) => return Ok(Fit::Exact(qp)),
            Fit::Mismatch(report) => {
                let rest = tail.split_off(&(report.largest + 1));
                let classes = split_classes(&rest, period);
                let stable = classes
                    .iter()
                    .zip(&populated)
                    .all(|(c, &had)| !had || c.len() >= degree + 2);
                if !stable {
                    return Ok(Fit::Mismatch(report));
                }
                tail = rest;
            }
        }
    }
}

/// Smallest `(period, degree)` admitting an exact fit, scanning degree-major.
pub fn detect(samples: &Samples, max_period: usize, max_degree: usize) -> Option<(usize, usize)> {
    for degree in 0..=max_degree {
        for period in 1..=max_period {
            if let Ok(Fit::Exact(_)) = fit(samples, period, degree) {
                return Some((period, degree));
            }
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LeadingCoefficient {
    Uniform(BigRational),
    PerResidue(Vec<Option<BigRational>>),
}

/// Top-degree coefficient per residue class, collapsed when all populated
/// classes agree.
pub fn leading_coefficient(qp: &QuasiPolynomial) -> LeadingCoefficient {
    let table: Vec<Option<BigRational>> = (0..qp.period)
        .map(|s| qp.coefficient(qp.degree, s).cloned())
        .collect();
    let mut present = table.iter().flatten();
    let first = present.next().cloned();
    match first {
        Some(c) if present.all(|x| *x == c) => LeadingCoefficient::Uniform(c),
        _ => LeadingCoefficient::PerResidue(table),
    }
}

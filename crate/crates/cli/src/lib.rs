//! Command implementations for the `numsg` binary.
//!
//! Every command produces a serializable report; `main` only chooses the
//! output format and the exit status.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;
use serde::Serialize;

use numsg::factorizations::{
    betti_elements, delta_of_element, delta_set_brute_force, delta_set_extremes,
    delta_set_over_betti, factorizations, length_set, minimal_presentation, Relation,
};
use numsg::parametric::{
    scan, BettiBijectionReport, FamilySource, FamilySpec, FastAperyReport, Invariant, LinearFamily,
    PfTransportReport, ScanRow, ScanValue, TransportReport,
};
use numsg::quasipoly::{fit, leading_coefficient, Fit, LeadingCoefficient, Samples};
use numsg::weighted::{
    delta_w_brute_force, delta_w_of_element, max_delta_w, min_delta_w, weighted_length_set,
};
use numsg::{AperySet, Factorization, Semigroup, WeightVector, WilfFormula};

/// Numerical semigroups, factorization invariants and parametrized families
#[derive(Parser, Debug)]
#[command(author, version, about, long_about = None)]
pub struct Cli {
    /// Emit JSON
    #[arg(long, global = true, conflicts_with = "csv")]
    pub json: bool,

    /// Emit CSV (scan: columns n,value; fit: residue,c0,c1,…)
    #[arg(long, global = true)]
    pub csv: bool,

    /// Largest element any brute-force enumeration may reach
    #[arg(long, global = true, default_value_t = 100_000)]
    pub max_element: i64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Frobenius number, genus, type, pseudo-Frobenius numbers, Wilf numbers and an Apéry set
    Invariants {
        #[arg(required = true)]
        generators: Vec<i64>,
        /// Apéry set base (default: the smallest generator)
        #[arg(long)]
        apery_m: Option<i64>,
    },
    /// Canonical minimal presentation and Betti elements
    Minpres {
        #[arg(required = true)]
        generators: Vec<i64>,
    },
    /// Factorizations, length set and delta set of one element
    Factorizations {
        #[arg(required = true)]
        generators: Vec<i64>,
        #[arg(long)]
        element: i64,
        /// Rational weights, e.g. 3,-1/2,4
        #[arg(long, allow_hyphen_values = true)]
        weights: Option<WeightVector>,
    },
    /// Delta set extremes, the union over Betti elements, and optional brute force
    Delta {
        #[arg(required = true)]
        generators: Vec<i64>,
        /// Rational weights, e.g. 3,1,4
        #[arg(long, allow_hyphen_values = true)]
        weights: Option<WeightVector>,
        /// Also take the union of Δ(t) over members t ≤ this bound
        #[arg(long)]
        brute_bound: Option<i64>,
    },
    /// Work with a family given by a JSON spec: {"w":[…],"r":[…]} or {"polys":[[c0,c1,…],…]}
    Family {
        #[arg(long)]
        spec: PathBuf,
        #[command(subcommand)]
        action: FamilyAction,
    },
    /// Fit a quasipolynomial to "n,value" lines on stdin
    Fit(FitArgs),
}

#[derive(Args, Debug, Clone)]
pub struct FitArgs {
    #[arg(long)]
    pub degree: usize,
    /// Period (default: the least period up to --max-period that fits exactly)
    #[arg(long)]
    pub period: Option<usize>,
    #[arg(long, default_value_t = 12)]
    pub max_period: usize,
}

#[derive(Args, Debug, Clone)]
pub struct RangeArgs {
    /// Inclusive parameter range in the family's own parameter (default: the spec's "range")
    #[arg(long, num_args = 2, value_names = ["START", "END"], allow_hyphen_values = true)]
    pub range: Option<Vec<i64>>,
    #[arg(long, default_value_t = 1)]
    pub step: i64,
}

#[derive(Subcommand, Debug)]
pub enum FamilyAction {
    /// Tabulate an invariant: frobenius, genus, type, wilf, wilf_standard, betti_count, betti_multiset, minpres_degrees
    Scan {
        #[arg(long)]
        invariant: Invariant,
        #[command(flatten)]
        range: RangeArgs,
    },
    /// Transport the minimal presentation of P_n along Φₙ and check it on P_{n+p}
    VerifyPhi {
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
    },
    /// Check the Betti map P_n → P_{n+p} against Betti(P_{n+p})
    VerifyBettiBijection {
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
    },
    /// Check the closed-form Apéry set of P_n (requires w₁ = 1)
    VerifyApery {
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
    },
    /// Check the pseudo-Frobenius class transport P_n → P_{n+r_k} (requires w₁ = 1)
    VerifyPf {
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
    },
    /// Scan an invariant and fit a quasipolynomial to it
    Fit {
        #[arg(long)]
        invariant: Invariant,
        #[command(flatten)]
        range: RangeArgs,
        #[command(flatten)]
        fit: FitArgs,
    },
}

/// What a command produced.
#[derive(Debug)]
pub struct Outcome {
    pub json: serde_json::Value,
    pub human: String,
    pub csv: Option<String>,
    /// A verification failed for a parameter inside its guaranteed regime.
    pub mismatch_in_regime: bool,
}

impl Outcome {
    fn new<T: Serialize>(report: &T, human: String) -> Result<Self> {
        Ok(Self {
            json: serde_json::to_value(report)?,
            human,
            csv: None,
            mismatch_in_regime: false,
        })
    }

    /// The text to print for the chosen format.
    pub fn render(&self, cli: &Cli) -> Result<String> {
        if cli.json {
            Ok(serde_json::to_string_pretty(&self.json)? + "\n")
        } else if cli.csv {
            self.csv
                .clone()
                .context("CSV output is only available for scans and fits")
        } else {
            Ok(self.human.clone())
        }
    }
}

fn rat(x: &BigRational) -> String {
    x.to_string()
}

fn rats<'a>(xs: impl IntoIterator<Item = &'a BigRational>) -> Vec<String> {
    xs.into_iter().map(rat).collect()
}

fn join<T: ToString>(xs: &[T], sep: &str) -> String {
    xs.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(sep)
}

fn check_budget(value: i64, max_element: i64, what: &str) -> Result<()> {
    if value > max_element {
        bail!("{what} {value} exceeds --max-element {max_element}");
    }
    Ok(())
}

#[derive(Debug, Serialize)]
pub struct InvariantsReport {
    pub generators: Vec<i64>,
    pub minimal_generators: Vec<i64>,
    pub gcd: i64,
    pub embedding_dimension: usize,
    pub frobenius: i64,
    pub genus: i64,
    /// Absent when the gcd exceeds 1.
    pub pseudo_frobenius: Option<Vec<i64>>,
    pub type_number: Option<usize>,
    /// k(F − g) − (F + 1)
    pub wilf_shifted: Option<i64>,
    /// k(F + 1 − g) − (F + 1)
    pub wilf_standard: Option<i64>,
    pub apery: AperySet,
}

pub fn invariants_report(generators: &[i64], apery_m: Option<i64>) -> Result<InvariantsReport> {
    let s = Semigroup::build(generators)?;
    let numerical = s.gcd() == 1;
    let pf = numerical.then(|| s.pseudo_frobenius()).transpose()?;
    Ok(InvariantsReport {
        generators: s.generators().to_vec(),
        minimal_generators: s.minimal_generators(),
        gcd: s.gcd(),
        embedding_dimension: s.embedding_dimension(),
        frobenius: s.frobenius(),
        genus: s.genus(),
        type_number: pf.as_ref().map(Vec::len),
        pseudo_frobenius: pf,
        wilf_shifted: numerical
            .then(|| s.wilf_number(WilfFormula::Shifted))
            .transpose()?,
        wilf_standard: numerical
            .then(|| s.wilf_number(WilfFormula::Standard))
            .transpose()?,
        apery: s.apery_set(apery_m.unwrap_or(s.smallest_generator()))?,
    })
}

fn invariants_human(r: &InvariantsReport) -> String {
    let opt = |v: Option<String>| v.unwrap_or_else(|| "undefined (gcd > 1)".into());
    let mut out = String::new();
    writeln!(out, "generators           {}", join(&r.generators, " ")).unwrap();
    writeln!(
        out,
        "minimal generators   {}",
        join(&r.minimal_generators, " ")
    )
    .unwrap();
    writeln!(out, "gcd                  {}", r.gcd).unwrap();
    writeln!(out, "embedding dimension  {}", r.embedding_dimension).unwrap();
    writeln!(out, "frobenius            {}", r.frobenius).unwrap();
    writeln!(out, "genus                {}", r.genus).unwrap();
    writeln!(
        out,
        "pseudo-frobenius     {}",
        opt(r
            .pseudo_frobenius
            .as_ref()
            .map(|v| format!("{{{}}}", join(v, ", "))))
    )
    .unwrap();
    writeln!(
        out,
        "type                 {}",
        opt(r.type_number.map(|t| t.to_string()))
    )
    .unwrap();
    writeln!(
        out,
        "wilf (shifted)       {}",
        opt(r.wilf_shifted.map(|w| w.to_string()))
    )
    .unwrap();
    writeln!(
        out,
        "wilf (standard)      {}",
        opt(r.wilf_standard.map(|w| w.to_string()))
    )
    .unwrap();
    writeln!(
        out,
        "apery set (m = {})  {}",
        r.apery.base(),
        join(r.apery.elements(), " ")
    )
    .unwrap();
    out
}

#[derive(Debug, Serialize)]
pub struct MinpresReport {
    pub generators: Vec<i64>,
    pub betti: BTreeMap<i64, usize>,
    pub relations: Vec<Relation>,
}

pub fn minpres_report(generators: &[i64]) -> Result<MinpresReport> {
    let s = Semigroup::build(generators)?;
    Ok(MinpresReport {
        generators: s.generators().to_vec(),
        betti: betti_elements(&s),
        relations: minimal_presentation(&s),
    })
}

fn relations_human(out: &mut String, relations: &[Relation]) {
    for r in relations {
        writeln!(out, "  {:>8}  {}", r.degree, r).unwrap();
    }
}

fn minpres_human(r: &MinpresReport) -> String {
    let mut out = String::new();
    writeln!(out, "generators  {}", join(&r.generators, " ")).unwrap();
    let betti: Vec<String> = r
        .betti
        .iter()
        .map(|(b, m)| {
            if *m == 1 {
                b.to_string()
            } else {
                format!("{b} (×{m})")
            }
        })
        .collect();
    writeln!(out, "betti       {}", betti.join(", ")).unwrap();
    writeln!(out, "relations   {} (degree, pair)", r.relations.len()).unwrap();
    relations_human(&mut out, &r.relations);
    out
}

#[derive(Debug, Serialize)]
pub struct WeightedLengths {
    pub weights: String,
    pub lengths: Vec<String>,
    pub delta: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct FactorizationsReport {
    pub generators: Vec<i64>,
    pub element: i64,
    pub factorizations: Vec<Factorization>,
    pub lengths: Vec<u64>,
    pub delta: Vec<u64>,
    pub weighted: Option<WeightedLengths>,
}

pub fn factorizations_report(
    generators: &[i64],
    element: i64,
    weights: Option<&WeightVector>,
) -> Result<FactorizationsReport> {
    let s = Semigroup::build(generators)?;
    let weighted = weights
        .map(|w| -> Result<_> {
            Ok(WeightedLengths {
                weights: w.to_string(),
                lengths: rats(&weighted_length_set(&s, element, w)?),
                delta: rats(&delta_w_of_element(&s, element, w)?),
            })
        })
        .transpose()?;
    Ok(FactorizationsReport {
        generators: s.generators().to_vec(),
        element,
        lengths: length_set(&s, element)?,
        delta: delta_of_element(&s, element)?.into_iter().collect(),
        factorizations: factorizations(&s, element),
        weighted,
    })
}

fn factorizations_human(r: &FactorizationsReport) -> String {
    let mut out = String::new();
    writeln!(out, "generators      {}", join(&r.generators, " ")).unwrap();
    writeln!(out, "element         {}", r.element).unwrap();
    writeln!(out, "factorizations  {}", r.factorizations.len()).unwrap();
    for z in &r.factorizations {
        writeln!(out, "  {z}").unwrap();
    }
    writeln!(out, "lengths         {{{}}}", join(&r.lengths, ", ")).unwrap();
    writeln!(out, "delta           {{{}}}", join(&r.delta, ", ")).unwrap();
    if let Some(w) = &r.weighted {
        writeln!(out, "weights         {}", w.weights).unwrap();
        writeln!(out, "w-lengths       {{{}}}", w.lengths.join(", ")).unwrap();
        writeln!(out, "w-delta         {{{}}}", w.delta.join(", ")).unwrap();
    }
    out
}

#[derive(Debug, Serialize)]
pub struct BruteForce<T> {
    pub bound: i64,
    pub set: Vec<T>,
}

#[derive(Debug, Serialize)]
pub struct WeightedDelta {
    pub weights: String,
    /// Zero when the weighted delta set is empty.
    pub min: String,
    pub max: Option<String>,
    pub brute_force: Option<BruteForce<String>>,
}

#[derive(Debug, Serialize)]
pub struct DeltaReport {
    pub generators: Vec<i64>,
    pub min: Option<u64>,
    pub max: Option<u64>,
    pub union_over_betti: Vec<u64>,
    pub brute_force: Option<BruteForce<u64>>,
    pub weighted: Option<WeightedDelta>,
}

pub fn delta_report(
    generators: &[i64],
    weights: Option<&WeightVector>,
    brute_bound: Option<i64>,
) -> Result<DeltaReport> {
    let s = Semigroup::build(generators)?;
    let extremes = delta_set_extremes(&s);
    let weighted = weights
        .map(|w| -> Result<_> {
            Ok(WeightedDelta {
                weights: w.to_string(),
                min: rat(&min_delta_w(&s, w)?),
                max: max_delta_w(&s, w)?.as_ref().map(rat),
                brute_force: brute_bound
                    .map(|bound| -> Result<_> {
                        Ok(BruteForce {
                            bound,
                            set: rats(&delta_w_brute_force(&s, w, bound)?),
                        })
                    })
                    .transpose()?,
            })
        })
        .transpose()?;
    Ok(DeltaReport {
        generators: s.generators().to_vec(),
        min: extremes.map(|e| e.0),
        max: extremes.map(|e| e.1),
        union_over_betti: delta_set_over_betti(&s).into_iter().collect(),
        brute_force: brute_bound.map(|bound| BruteForce {
            bound,
            set: delta_set_brute_force(&s, bound).into_iter().collect(),
        }),
        weighted,
    })
}

fn delta_human(r: &DeltaReport) -> String {
    let opt = |v: Option<u64>| v.map_or_else(|| "none (empty delta set)".into(), |x| x.to_string());
    let mut out = String::new();
    writeln!(
        out,
        "generators                {}",
        join(&r.generators, " ")
    )
    .unwrap();
    writeln!(out, "min delta                 {}", opt(r.min)).unwrap();
    writeln!(out, "max delta                 {}", opt(r.max)).unwrap();
    writeln!(
        out,
        "union over Betti elements {{{}}}",
        join(&r.union_over_betti, ", ")
    )
    .unwrap();
    if let Some(b) = &r.brute_force {
        writeln!(
            out,
            "{:<26}{{{}}}",
            format!("brute force (t ≤ {})", b.bound),
            join(&b.set, ", ")
        )
        .unwrap();
    }
    if let Some(w) = &r.weighted {
        writeln!(out, "weights                   {}", w.weights).unwrap();
        writeln!(out, "min w-delta               {}", w.min).unwrap();
        writeln!(
            out,
            "max w-delta               {}",
            w.max.as_deref().unwrap_or("none (empty delta set)")
        )
        .unwrap();
        if let Some(b) = &w.brute_force {
            writeln!(
                out,
                "{:<26}{{{}}}",
                format!("w-brute force (t ≤ {})", b.bound),
                b.set.join(", ")
            )
            .unwrap();
        }
    }
    out
}

pub fn load_spec(path: &PathBuf) -> Result<FamilySpec> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn parameters(spec: &FamilySpec, range: &RangeArgs) -> Result<Vec<i64>> {
    let (start, end) = match &range.range {
        Some(r) => (r[0], r[1]),
        None => spec
            .range
            .context("no --range given and the spec has no \"range\"")?,
    };
    if range.step < 1 {
        bail!("--step must be positive");
    }
    Ok((start..=end).step_by(range.step as usize).collect())
}

#[derive(Debug, Serialize)]
pub struct ScanReport {
    pub invariant: Invariant,
    pub rows: Vec<ScanRow>,
}

pub fn scan_report(
    source: &FamilySource,
    params: &[i64],
    invariant: Invariant,
) -> Result<ScanReport> {
    Ok(ScanReport {
        invariant,
        rows: scan(source, params, invariant)?,
    })
}

fn scan_outputs(r: &ScanReport) -> Result<(String, String)> {
    let mut human = format!("n\t{}\n", r.invariant);
    let mut csv = csv::Writer::from_writer(Vec::new());
    csv.write_record(["n", "value"])?;
    for row in &r.rows {
        writeln!(human, "{}\t{}", row.n, row.value).unwrap();
        csv.write_record([row.n.to_string(), row.value.to_string()])?;
    }
    Ok((human, String::from_utf8(csv.into_inner()?)?))
}

/// Parses `n,value` (or whitespace-separated) lines; lines whose first field
/// is not an integer, such as headers, are skipped.
pub fn parse_samples(text: &str) -> Result<Samples> {
    let mut samples = Samples::new();
    for (i, line) in text.lines().enumerate() {
        let mut fields = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|f| !f.is_empty());
        let (Some(n), Some(value)) = (fields.next(), fields.next()) else {
            continue;
        };
        let Ok(n) = n.parse::<i64>() else {
            continue;
        };
        if fields.next().is_some() {
            bail!(
                "line {}: expected two fields, the value must be a single number",
                i + 1
            );
        }
        let value: BigRational = value
            .parse()
            .map_err(|e| anyhow::anyhow!("line {}: bad value {value:?}: {e}", i + 1))?;
        if samples.insert(n, value).is_some() {
            bail!("line {}: repeated n = {n}", i + 1);
        }
    }
    if samples.is_empty() {
        bail!("no samples read");
    }
    Ok(samples)
}

#[derive(Debug, Serialize)]
pub struct Mismatch {
    pub largest: i64,
    pub mismatches: Vec<i64>,
}

#[derive(Debug, Serialize)]
pub struct FitReport {
    pub degree: usize,
    /// Absent when no period up to the limit fits.
    pub period: Option<usize>,
    pub exact: bool,
    pub valid_from: Option<i64>,
    /// Ascending coefficients per residue class mod the period; null for
    /// classes without samples.
    pub coefficients: Vec<Option<Vec<String>>>,
    /// One value when every class agrees, otherwise one per class.
    pub leading: Option<Vec<Option<String>>>,
    pub mismatch: Option<Mismatch>,
}

pub fn fit_report(samples: &Samples, args: &FitArgs) -> Result<FitReport> {
    let periods: Vec<usize> = match args.period {
        Some(p) => vec![p],
        None => (1..=args.max_period).collect(),
    };
    let mut last = None;
    for &period in &periods {
        match fit(samples, period, args.degree)? {
            Fit::Exact(qp) => {
                let leading = match leading_coefficient(&qp) {
                    LeadingCoefficient::Uniform(c) => vec![Some(rat(&c))],
                    LeadingCoefficient::PerResidue(cs) => {
                        cs.iter().map(|c| c.as_ref().map(rat)).collect()
                    }
                };
                return Ok(FitReport {
                    degree: args.degree,
                    period: Some(period),
                    exact: true,
                    valid_from: Some(qp.valid_from()),
                    coefficients: qp.classes().iter().map(|c| c.as_ref().map(rats)).collect(),
                    leading: Some(leading),
                    mismatch: None,
                });
            }
            Fit::Mismatch(m) => last = Some((period, m)),
        }
    }
    let (period, m) = last.context("no period to try")?;
    Ok(FitReport {
        degree: args.degree,
        period: args.period.map(|_| period),
        exact: false,
        valid_from: None,
        coefficients: Vec::new(),
        leading: None,
        mismatch: Some(Mismatch {
            largest: m.largest,
            mismatches: m.mismatches,
        }),
    })
}

fn fit_outputs(r: &FitReport) -> Result<(String, String)> {
    let mut human = String::new();
    let mut csv = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["residue".to_string()];
    header.extend((0..=r.degree).map(|j| format!("c{j}")));
    csv.write_record(&header)?;
    if !r.exact {
        match r.period {
            Some(p) => {
                writeln!(human, "no exact fit with period {p}, degree {}", r.degree).unwrap()
            }
            None => writeln!(
                human,
                "no exact fit of degree {} with any period tried",
                r.degree
            )
            .unwrap(),
        }
        if let Some(m) = &r.mismatch {
            writeln!(human, "largest mismatching n  {}", m.largest).unwrap();
        }
        return Ok((human, String::from_utf8(csv.into_inner()?)?));
    }
    writeln!(human, "period      {}", r.period.unwrap()).unwrap();
    writeln!(human, "degree      {}", r.degree).unwrap();
    writeln!(human, "valid from  {}", r.valid_from.unwrap()).unwrap();
    let leading = r.leading.as_ref().unwrap();
    match leading.as_slice() {
        [Some(c)] => writeln!(human, "leading     {c}").unwrap(),
        cs => {
            let cs: Vec<&str> = cs.iter().map(|c| c.as_deref().unwrap_or("-")).collect();
            writeln!(human, "leading     {} (by residue)", cs.join(" ")).unwrap()
        }
    }
    for (s, class) in r.coefficients.iter().enumerate() {
        match class {
            Some(cs) => {
                writeln!(human, "  n ≡ {s}: {}", cs.join(" ")).unwrap();
                let mut record = vec![s.to_string()];
                record.extend(cs.iter().cloned());
                csv.write_record(&record)?;
            }
            None => writeln!(human, "  n ≡ {s}: no samples").unwrap(),
        }
    }
    Ok((human, String::from_utf8(csv.into_inner()?)?))
}

/// A verification report tagged with the supplied parameter.
#[derive(Debug, Serialize)]
pub struct Verification<R> {
    pub verified: bool,
    pub in_guaranteed_regime: bool,
    /// Parameter as given on the command line.
    pub n: i64,
    /// Parameter after normalization (the report's own `n`).
    pub normalized_n: i64,
    pub normalized_weights: Vec<i64>,
    pub normalized_offsets: Vec<i64>,
    pub report: R,
}

fn linear(source: &FamilySource) -> Result<&LinearFamily> {
    source
        .linear()
        .context("verification is only defined for linear families ({\"w\", \"r\"})")
}

fn verification<R: Serialize>(
    f: &LinearFamily,
    n: i64,
    verified: bool,
    in_regime: bool,
    report: R,
    details: String,
) -> Result<Outcome> {
    let v = Verification {
        verified,
        in_guaranteed_regime: in_regime,
        n,
        normalized_n: n - f.shift(),
        normalized_weights: f.weights().to_vec(),
        normalized_offsets: f.offsets().to_vec(),
        report,
    };
    let status = match (verified, in_regime) {
        (true, _) => "PASS",
        (false, true) => "FAIL",
        (false, false) => "FAIL (outside the guaranteed regime)",
    };
    let mut human = format!("{status}\n");
    writeln!(
        human,
        "family      w = ({}), r = ({}) after normalization; n = {} here is {} there",
        join(f.weights(), ","),
        join(f.offsets(), ","),
        n,
        n - f.shift()
    )
    .unwrap();
    human.push_str(&details);
    let mut out = Outcome::new(&v, human)?;
    out.mismatch_in_regime = !verified && in_regime;
    Ok(out)
}

fn phi_details(f: &LinearFamily, r: &TransportReport) -> Result<String> {
    let mut out = String::new();
    let target = f.instantiate(r.target_n)?;
    writeln!(out, "regime      n > {} required", f.presentation_bound()).unwrap();
    writeln!(out, "target      ⟨{}⟩", join(target.generators(), ", ")).unwrap();
    writeln!(
        out,
        "transported presentation ({} relations):",
        r.image.len()
    )
    .unwrap();
    relations_human(&mut out, &r.image);
    for issue in &r.check.issues {
        writeln!(out, "issue       {issue}").unwrap();
    }
    Ok(out)
}

fn betti_details(f: &LinearFamily, r: &BettiBijectionReport) -> String {
    let mut out = String::new();
    writeln!(out, "regime      n > {} required", f.presentation_bound()).unwrap();
    writeln!(out, "delta       {}", r.delta).unwrap();
    for (b, image) in &r.map {
        let mark = if r.target_betti.contains_key(image) {
            ""
        } else {
            "  (not a Betti element)"
        };
        writeln!(out, "  {b} ↦ {image}{mark}").unwrap();
    }
    for irr in &r.irregular {
        writeln!(
            out,
            "  {} has weighted lengths {{{}}}",
            irr.beta,
            join(&irr.lengths, ", ")
        )
        .unwrap();
    }
    writeln!(
        out,
        "target      {}",
        join(&r.target_betti.keys().copied().collect::<Vec<_>>(), " ")
    )
    .unwrap();
    writeln!(
        out,
        "counts      {} → {} (with multiplicity)",
        r.source_count, r.target_count
    )
    .unwrap();
    out
}

fn apery_details(f: &LinearFamily, r: &FastAperyReport) -> String {
    let mut out = String::new();
    writeln!(out, "regime      n > {} required", f.apery_bound()).unwrap();
    writeln!(out, "matches direct Ap(P_n; n)        {}", r.matches_direct).unwrap();
    writeln!(
        out,
        "singleton weighted length sets   {}",
        r.singleton_lengths
    )
    .unwrap();
    let lifted: Vec<i64> = r.lifted.iter().map(|l| l.element).collect();
    writeln!(out, "apery set   {}", join(&lifted, " ")).unwrap();
    out
}

fn pf_details(f: &LinearFamily, r: &PfTransportReport) -> String {
    let mut out = String::new();
    writeln!(out, "regime      n > {} required", f.apery_bound()).unwrap();
    writeln!(
        out,
        "PF(P_n)     {{{}}}",
        join(&r.source.pseudo_frobenius, ", ")
    )
    .unwrap();
    writeln!(
        out,
        "PF(P_n+r_k) {{{}}}",
        join(&r.target.pseudo_frobenius, ", ")
    )
    .unwrap();
    writeln!(
        out,
        "classes     {} → {}",
        join(&r.source.classes, " "),
        join(&r.target.classes, " ")
    )
    .unwrap();
    writeln!(out, "type        {} → {}", r.source_type, r.target_type).unwrap();
    writeln!(
        out,
        "i ↦ i + d·r_k bijective             {}",
        r.shift_map_is_bijection
    )
    .unwrap();
    writeln!(
        out,
        "piecewise i ↦ i / i + r_k bijective {}",
        r.piecewise_map_is_bijection
    )
    .unwrap();
    out
}

fn family(cli: &Cli, spec_path: &PathBuf, action: &FamilyAction) -> Result<Outcome> {
    let spec = load_spec(spec_path)?;
    let source = spec.source()?;
    let to_normalized = |f: &LinearFamily, n: i64| n - f.shift();
    match action {
        FamilyAction::Scan { invariant, range } => {
            let report = scan_report(&source, &parameters(&spec, range)?, *invariant)?;
            let (human, csv) = scan_outputs(&report)?;
            let mut out = Outcome::new(&report, human)?;
            out.csv = Some(csv);
            Ok(out)
        }
        FamilyAction::Fit {
            invariant,
            range,
            fit,
        } => {
            let rows = scan(&source, &parameters(&spec, range)?, *invariant)?;
            let samples = rows
                .into_iter()
                .map(|row| match row.value {
                    ScanValue::Integer(v) => Ok((row.n, BigRational::from_integer(v.into()))),
                    ScanValue::Multiset(_) => bail!("{invariant} is not numeric"),
                })
                .collect::<Result<Samples>>()?;
            fit_command(&samples, fit)
        }
        FamilyAction::VerifyPhi { n } => {
            let f = linear(&source)?;
            let r = f.transport_presentation(to_normalized(f, *n))?;
            let details = phi_details(f, &r)?;
            verification(f, *n, r.verified(), r.in_guaranteed_regime, r, details)
        }
        FamilyAction::VerifyBettiBijection { n } => {
            let f = linear(&source)?;
            let r = f.betti_bijection(to_normalized(f, *n))?;
            let details = betti_details(f, &r);
            verification(f, *n, r.is_bijection, r.in_guaranteed_regime, r, details)
        }
        FamilyAction::VerifyApery { n } => {
            let f = linear(&source)?;
            check_budget(
                f.generators_at(to_normalized(f, *n))?
                    .into_iter()
                    .max()
                    .unwrap(),
                cli.max_element,
                "largest generator",
            )?;
            let r = f.fast_apery(to_normalized(f, *n))?;
            let details = apery_details(f, &r);
            verification(f, *n, r.verified(), r.in_guaranteed_regime, r, details)
        }
        FamilyAction::VerifyPf { n } => {
            let f = linear(&source)?;
            let r = f.pf_transport(to_normalized(f, *n))?;
            let details = pf_details(f, &r);
            verification(f, *n, r.verified(), r.in_guaranteed_regime, r, details)
        }
    }
}

fn fit_command(samples: &Samples, args: &FitArgs) -> Result<Outcome> {
    let report = fit_report(samples, args)?;
    let (human, csv) = fit_outputs(&report)?;
    let mut out = Outcome::new(&report, human)?;
    out.csv = Some(csv);
    Ok(out)
}

/// Runs a parsed command; `stdin` is only read by `fit`.
pub fn run(cli: &Cli, stdin: impl FnOnce() -> Result<String>) -> Result<Outcome> {
    match &cli.command {
        Command::Invariants {
            generators,
            apery_m,
        } => {
            let r = invariants_report(generators, *apery_m)?;
            Outcome::new(&r, invariants_human(&r))
        }
        Command::Minpres { generators } => {
            let r = minpres_report(generators)?;
            Outcome::new(&r, minpres_human(&r))
        }
        Command::Factorizations {
            generators,
            element,
            weights,
        } => {
            check_budget(*element, cli.max_element, "element")?;
            let r = factorizations_report(generators, *element, weights.as_ref())?;
            Outcome::new(&r, factorizations_human(&r))
        }
        Command::Delta {
            generators,
            weights,
            brute_bound,
        } => {
            if let Some(b) = brute_bound {
                check_budget(*b, cli.max_element, "--brute-bound")?;
            }
            let r = delta_report(generators, weights.as_ref(), *brute_bound)?;
            Outcome::new(&r, delta_human(&r))
        }
        Command::Family { spec, action } => family(cli, spec, action),
        Command::Fit(args) => fit_command(&parse_samples(&stdin()?)?, args),
    }
}

//! Verification suites over ranges of `(n, m)`.
//!
//! Each `(n, m)` pair is an independent task; records come back sorted by
//! `(n, m)` and then by suite, so the report is deterministic.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::canonical::{derivative_identity_check, gj_identity_check, DecompositionMatrix};
use crate::error::{Error, Result};
use crate::fock::{BarInvolution, BarMatrix, FockVector};
use crate::hecke::GramOracle;
use crate::laurent::LaurentPoly;
use crate::partition::{partitions_of, Partition};
use crate::schaper::{dimension_weighting, schaper_det_rhs, schaper_sum_rhs, theorem1_check};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Involution,
    KStability,
    BarStructure,
    Canonical,
    GabberJoseph,
    Derivative,
    Theorem1,
    Determinant,
    Oracle,
    Ariki,
    Semisimple,
}

impl Suite {
    pub const ALL: [Suite; 11] = [
        Suite::Involution,
        Suite::KStability,
        Suite::BarStructure,
        Suite::Canonical,
        Suite::GabberJoseph,
        Suite::Derivative,
        Suite::Theorem1,
        Suite::Determinant,
        Suite::Oracle,
        Suite::Ariki,
        Suite::Semisimple,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Involution => "involution",
            Suite::KStability => "k-stability",
            Suite::BarStructure => "bar-structure",
            Suite::Canonical => "canonical",
            Suite::GabberJoseph => "gabber-joseph",
            Suite::Derivative => "derivative",
            Suite::Theorem1 => "theorem1",
            Suite::Determinant => "determinant",
            Suite::Oracle => "oracle",
            Suite::Ariki => "ariki",
            Suite::Semisimple => "semisimple",
        }
    }

    /// Whether the suite runs at `(n, m)`. The Hecke-side suites are limited
    /// to sizes the Gram oracle handles quickly.
    pub fn applies(self, n: usize, m: usize) -> bool {
        match self {
            Suite::KStability => m <= 6,
            Suite::Oracle => (n <= 3 && m <= 5) || (n == 4 && m <= 4),
            Suite::Ariki => n <= 3 && m <= 4,
            Suite::Semisimple => n > m && m <= 6,
            _ => true,
        }
    }

    fn needs_gram(self) -> bool {
        matches!(self, Suite::Oracle | Suite::Ariki)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite '{s}'")))
    }
}

/// Deliberate corruption used to check that failures are reported.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// Negate the last diagonal entry of every bar matrix.
    FlipBarSign,
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub n_set: Vec<usize>,
    pub m_values: Vec<usize>,
    pub suites: Vec<Suite>,
    pub fault: Option<Fault>,
}

impl VerifyConfig {
    pub fn new(n_set: Vec<usize>, m_values: Vec<usize>) -> Self {
        VerifyConfig {
            n_set,
            m_values,
            suites: Suite::ALL.to_vec(),
            fault: None,
        }
    }
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self::new(vec![2, 3, 4, 5], (0..=8).collect())
    }
}

/// One row of the report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckRecord {
    pub lambda: String,
    pub n: usize,
    pub check: String,
    pub pass: bool,
    pub lhs: String,
    pub rhs: String,
}

impl CheckRecord {
    fn new(
        suite: Suite,
        lambda: &Partition,
        n: usize,
        lhs: impl fmt::Display,
        rhs: impl fmt::Display,
        pass: bool,
    ) -> Self {
        CheckRecord {
            lambda: lambda.to_string(),
            n,
            check: suite.name().to_string(),
            pass,
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
        }
    }

    fn equal<T: PartialEq + fmt::Display>(
        suite: Suite,
        lambda: &Partition,
        n: usize,
        lhs: T,
        rhs: T,
    ) -> Self {
        let pass = lhs == rhs;
        Self::new(suite, lambda, n, lhs, rhs, pass)
    }

    fn error(suite: Suite, lambda: &Partition, n: usize, e: &Error) -> Self {
        Self::new(suite, lambda, n, format!("error: {e}"), "", false)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct VerifyReport {
    pub records: Vec<CheckRecord>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| !r.pass)
    }

    /// Names of failing checks, deduplicated, in report order.
    pub fn failing_checks(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for r in self.failures() {
            if !out.contains(&r.check) {
                out.push(r.check.clone());
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.records).expect("records serialize")
    }

    /// Per-check totals followed by every failing record.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let mut checks: Vec<(String, usize, usize)> = Vec::new();
        for r in &self.records {
            match checks.iter_mut().find(|(c, _, _)| *c == r.check) {
                Some(entry) => {
                    entry.1 += 1;
                    entry.2 += usize::from(r.pass);
                }
                None => checks.push((r.check.clone(), 1, usize::from(r.pass))),
            }
        }
        out.push_str(&format!(
            "{:<14} {:>7} {:>7} {:>7}\n",
            "check", "total", "passed", "failed"
        ));
        for (c, total, ok) in &checks {
            out.push_str(&format!("{c:<14} {total:>7} {ok:>7} {:>7}\n", total - ok));
        }
        for r in self.failures() {
            out.push_str(&format!(
                "FAIL {} n={} lambda=({}): {} != {}\n",
                r.check, r.n, r.lambda, r.lhs, r.rhs
            ));
        }
        out
    }
}

pub fn run(config: &VerifyConfig) -> Result<VerifyReport> {
    for &n in &config.n_set {
        if n < 2 {
            return Err(Error::InvalidModulus(n as i64, 2));
        }
    }
    let mut suites = config.suites.clone();
    suites.sort();
    suites.dedup();
    let mut ms = config.m_values.clone();
    ms.sort();
    ms.dedup();
    let mut ns = config.n_set.clone();
    ns.sort();
    ns.dedup();
    let pairs: Vec<(usize, usize)> = ns
        .iter()
        .flat_map(|&n| ms.iter().map(move |&m| (n, m)))
        .collect();
    let chunks: Vec<Vec<CheckRecord>> = pairs
        .par_iter()
        .map(|&(n, m)| run_pair(n, m, &suites, config.fault))
        .collect::<Result<_>>()?;
    Ok(VerifyReport {
        records: chunks.into_iter().flatten().collect(),
    })
}

fn run_pair(
    n: usize,
    m: usize,
    suites: &[Suite],
    fault: Option<Fault>,
) -> Result<Vec<CheckRecord>> {
    let partitions = partitions_of(m);
    let active: Vec<Suite> = suites.iter().copied().filter(|s| s.applies(n, m)).collect();
    if active.is_empty() {
        return Ok(Vec::new());
    }
    let mut bar = BarMatrix::compute(n, m)?;
    if fault == Some(Fault::FlipBarSign) {
        let last = bar.order().len() - 1;
        let flipped = -bar.matrix.get(last, last).clone();
        bar.matrix.set(last, last, flipped);
    }
    let dec = DecompositionMatrix::compute(&bar);
    let gram = if active.iter().any(|s| s.needs_gram()) {
        Some(GramOracle::new(m)?)
    } else {
        None
    };

    let mut out = Vec::new();
    for suite in active {
        // suites that read the decomposition matrix report its failure per λ
        let dec = match (&dec, suite) {
            (
                _,
                Suite::Involution
                | Suite::KStability
                | Suite::BarStructure
                | Suite::Determinant
                | Suite::Oracle,
            ) => None,
            (Ok(d), _) => Some(d),
            (Err(e), _) => {
                out.extend(
                    partitions
                        .iter()
                        .map(|l| CheckRecord::error(suite, l, n, e)),
                );
                continue;
            }
        };
        match suite {
            Suite::Involution => out.extend(involution(n, &partitions)?),
            Suite::KStability => out.extend(k_stability(n, m, &partitions)?),
            Suite::BarStructure => out.extend(bar_structure(&bar)),
            Suite::Canonical => out.extend(canonical(&bar, dec.unwrap())),
            Suite::GabberJoseph => {
                let report = gj_identity_check(&bar, dec.unwrap())?;
                out.extend(identity_records(suite, n, &partitions, &report.failures));
            }
            Suite::Derivative => {
                let report = derivative_identity_check(&bar, dec.unwrap());
                out.extend(identity_records(suite, n, &partitions, &report.failures));
            }
            Suite::Theorem1 => {
                for lambda in &partitions {
                    out.push(match theorem1_check(lambda, &bar, dec.unwrap()) {
                        Ok(r) => CheckRecord::new(
                            suite,
                            lambda,
                            n,
                            &r.gabber_joseph,
                            &r.sum_formula,
                            r.passed(),
                        ),
                        Err(e) => CheckRecord::error(suite, lambda, n, &e),
                    });
                }
            }
            Suite::Determinant => {
                for lambda in &partitions {
                    let det = schaper_det_rhs(lambda, n)?;
                    let weighted = dimension_weighting(&schaper_sum_rhs(lambda, n)?);
                    let pass = det == weighted && det >= BigInt::zero();
                    out.push(CheckRecord::new(suite, lambda, n, &det, &weighted, pass));
                }
            }
            Suite::Oracle => {
                let gram = gram.as_ref().unwrap();
                for lambda in &partitions {
                    let rhs = schaper_det_rhs(lambda, n)?;
                    out.push(match gram.gram_det_valuation(lambda, n) {
                        Ok(v) => CheckRecord::equal(suite, lambda, n, BigInt::from(v), rhs),
                        Err(e) => CheckRecord::error(suite, lambda, n, &e),
                    });
                }
            }
            Suite::Ariki => out.extend(ariki(n, gram.as_ref().unwrap(), dec.unwrap())?),
            Suite::Semisimple => out.extend(semisimple(&bar, dec.unwrap())?),
        }
    }
    Ok(out)
}

fn involution(n: usize, partitions: &[Partition]) -> Result<Vec<CheckRecord>> {
    let mut bar = BarInvolution::new(n)?;
    partitions
        .iter()
        .map(|lambda| {
            let once = bar.bar_partition(lambda, None)?;
            let twice = bar.bar_vector(&once, None)?;
            Ok(CheckRecord::equal(
                Suite::Involution,
                lambda,
                n,
                twice,
                FockVector::basis(lambda),
            ))
        })
        .collect()
}

fn k_stability(n: usize, m: usize, partitions: &[Partition]) -> Result<Vec<CheckRecord>> {
    let mut bar = BarInvolution::new(n)?;
    partitions
        .iter()
        .map(|lambda| {
            let a = bar.bar_partition(lambda, Some(m))?;
            let b = bar.bar_partition(lambda, Some(m + 3))?;
            Ok(CheckRecord::equal(Suite::KStability, lambda, n, a, b))
        })
        .collect()
}

fn bar_structure(bar: &BarMatrix) -> Vec<CheckRecord> {
    let order = bar.order();
    let deriv = bar.derivative_at_one();
    order
        .iter()
        .enumerate()
        .map(|(r, lambda)| {
            let mut problems = Vec::new();
            for (c, tau) in order.iter().enumerate() {
                let a = bar.matrix.get(r, c);
                if r == c && !a.is_one() {
                    problems.push(format!("a({tau}) = {a}"));
                }
                if r != c && !a.is_zero() {
                    if !lambda.is_dominated_by(tau).unwrap_or(false) {
                        problems.push(format!("a({tau}) = {a} off the dominance cone"));
                    }
                    if !a.eval_at_one().is_zero() {
                        problems.push(format!("a({tau})(1) = {}", a.eval_at_one()));
                    }
                }
                if !(&deriv[r][c] % BigInt::from(2)).is_zero() {
                    problems.push(format!("a'({tau})(1) = {} is odd", deriv[r][c]));
                }
            }
            let pass = problems.is_empty();
            let lhs = if pass {
                "ok".to_string()
            } else {
                problems.join("; ")
            };
            CheckRecord::new(Suite::BarStructure, lambda, bar.n, lhs, "ok", pass)
        })
        .collect()
}

fn canonical(bar: &BarMatrix, dec: &DecompositionMatrix) -> Vec<CheckRecord> {
    let mut inv = BarInvolution::new(bar.n).expect("modulus already validated");
    dec.order()
        .iter()
        .map(|lambda| {
            let g = dec.column(lambda);
            let mut problems = Vec::new();
            match inv.bar_vector(&g, None) {
                Ok(b) if b == g => {}
                Ok(b) => problems.push(format!("bar G = {b}")),
                Err(e) => problems.push(format!("error: {e}")),
            }
            for (mu, d) in g.terms() {
                let expected_constant = BigInt::from(u8::from(mu == lambda));
                if !d.is_polynomial()
                    || d.coeff(0) != expected_constant
                    || d.terms().any(|(_, c)| c < &BigInt::zero())
                {
                    problems.push(format!("d({mu}) = {d}"));
                }
                if !mu.is_dominated_by(lambda).unwrap_or(false) {
                    problems.push(format!("d({mu}) = {d} off the dominance cone"));
                }
            }
            if g.coeff(lambda) != LaurentPoly::one() {
                problems.push(format!("d({lambda}) = {}", g.coeff(lambda)));
            }
            let pass = problems.is_empty();
            let lhs = if pass {
                g.to_string()
            } else {
                problems.join("; ")
            };
            CheckRecord::new(
                Suite::Canonical,
                lambda,
                bar.n,
                lhs,
                "bar-invariant, unitriangular, positive",
                pass,
            )
        })
        .collect()
}

fn identity_records(
    suite: Suite,
    n: usize,
    partitions: &[Partition],
    failures: &[(Partition, Partition, String, String)],
) -> Vec<CheckRecord> {
    partitions
        .iter()
        .map(|lambda| {
            let bad: Vec<_> = failures.iter().filter(|f| &f.0 == lambda).collect();
            if bad.is_empty() {
                CheckRecord::new(suite, lambda, n, "row holds", "row holds", true)
            } else {
                let lhs: Vec<String> = bad.iter().map(|f| format!("[{}] {}", f.1, f.2)).collect();
                let rhs: Vec<String> = bad.iter().map(|f| format!("[{}] {}", f.1, f.3)).collect();
                CheckRecord::new(suite, lambda, n, lhs.join("; "), rhs.join("; "), false)
            }
        })
        .collect()
}

fn ariki(n: usize, gram: &GramOracle, dec: &DecompositionMatrix) -> Result<Vec<CheckRecord>> {
    let order = dec.order();
    let ranks: Vec<usize> = order
        .iter()
        .map(|mu| gram.gram_rank_at_root(mu, n))
        .collect::<Result<_>>()?;
    Ok(order
        .iter()
        .enumerate()
        .map(|(r, lambda)| {
            let sum: BigInt = ranks
                .iter()
                .enumerate()
                .map(|(c, &k)| dec.matrix.get(r, c).eval_at_one() * k)
                .sum();
            CheckRecord::equal(Suite::Ariki, lambda, n, sum, lambda.dim_specht())
        })
        .collect())
}

fn semisimple(bar: &BarMatrix, dec: &DecompositionMatrix) -> Result<Vec<CheckRecord>> {
    let order = dec.order();
    order
        .iter()
        .enumerate()
        .map(|(r, lambda)| {
            let unit = |c: usize| {
                if r == c {
                    LaurentPoly::one()
                } else {
                    LaurentPoly::zero()
                }
            };
            let a_ok = (0..order.len()).all(|c| *bar.matrix.get(r, c) == unit(c));
            let d_ok = (0..order.len()).all(|c| *dec.matrix.get(r, c) == unit(c));
            let sum = schaper_sum_rhs(lambda, bar.n)?;
            let pass = a_ok && d_ok && sum.is_zero();
            let lhs = format!("A row identity: {a_ok}, D row identity: {d_ok}, sum formula: {sum}");
            Ok(CheckRecord::new(
                Suite::Semisimple,
                lambda,
                bar.n,
                lhs,
                "A row identity: true, D row identity: true, sum formula: 0",
                pass,
            ))
        })
        .collect()
}

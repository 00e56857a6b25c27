//! Semi-infinite wedges of the level-1 q-Fock space.
//!
//! A partition `λ` corresponds to the wedge `u_{i₁} ∧ u_{i₂} ∧ …` with
//! `i_j = λ_j - j + 1`; only a finite head is stored, the tail being the
//! vacuum `i_j = -j + 1`. Wedges with out-of-order indices are brought back to
//! normal (strictly decreasing) form by the modulus-`n` straightening rules,
//! and the bar involution reverses the first `k` factors of a wedge before
//! straightening.

use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::matrix::PolyMatrix;
use crate::partition::{partitions_of, BetaSequence, Partition};

/// Default number of rule applications allowed per [`Straightener`].
pub const DEFAULT_STEP_BUDGET: usize = 50_000_000;

/// A finite wedge head `(i₁, …, i_k)`; factors beyond `k` are the vacuum.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WedgeWord {
    head: Vec<i64>,
}

impl WedgeWord {
    pub fn new(head: Vec<i64>) -> Self {
        WedgeWord { head }
    }

    pub fn head(&self) -> &[i64] {
        &self.head
    }

    /// The length-`k` head `(λ₁, λ₂ - 1, …, λ_k - k + 1)`.
    pub fn from_partition(lambda: &Partition, k: usize) -> Result<Self> {
        if k < lambda.len() {
            return Err(Error::LengthTooSmall {
                given: k,
                needed: lambda.len(),
            });
        }
        let head = (1..=k)
            .map(|j| lambda.part(j) as i64 - j as i64 + 1)
            .collect();
        Ok(WedgeWord { head })
    }

    /// Strictly decreasing head whose entries all exceed `-k`.
    pub fn is_normalized(&self) -> bool {
        let k = self.head.len() as i64;
        self.head.windows(2).all(|w| w[0] > w[1]) && self.head.iter().all(|&i| i > -k)
    }

    /// Same wedge with trailing vacuum factors removed.
    pub fn trimmed(&self) -> Self {
        let mut head = self.head.clone();
        while let Some(&last) = head.last() {
            if last == -(head.len() as i64) + 1 {
                head.pop();
            } else {
                break;
            }
        }
        WedgeWord { head }
    }

    pub fn to_partition(&self) -> Result<Partition> {
        if !self.is_normalized() {
            return Err(Error::NotNormalized(self.head.clone()));
        }
        Ok(head_to_partition(&self.head))
    }

    /// Degree `Σ (i_j + j - 1)`.
    pub fn degree(&self) -> i64 {
        self.head
            .iter()
            .enumerate()
            .map(|(j, &i)| i + j as i64)
            .sum()
    }

    /// The `(m+1)`-element beta-set `{i₁ + m, …, i_m + m, 0}` of a degree-`m` wedge.
    pub fn betas(&self, m: usize) -> Result<BetaSequence> {
        if !self.is_normalized() {
            return Err(Error::NotNormalized(self.head.clone()));
        }
        let degree = self.degree();
        if degree != m as i64 {
            return Err(Error::DegreeMismatch {
                expected: m,
                actual: degree.max(0) as usize,
            });
        }
        let mut entries: Vec<i64> = (1..=m)
            .map(|j| self.head.get(j - 1).copied().unwrap_or(1 - j as i64) + m as i64)
            .collect();
        entries.push(0);
        Ok(BetaSequence(entries))
    }
}

fn head_to_partition(head: &[i64]) -> Partition {
    let parts = head
        .iter()
        .enumerate()
        .map(|(j, &i)| (i + j as i64) as usize)
        .collect();
    Partition::new(parts).expect("normalized head gives a partition")
}

/// A finite `ℤ[q, q⁻¹]`-combination of basis vectors `|λ⟩`, all of the same degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FockVector {
    degree: usize,
    terms: BTreeMap<Partition, LaurentPoly>,
}

/// Renders e.g. `|2⟩ + (q - q^-1)|1,1⟩`; the zero vector renders as `0`.
impl std::fmt::Display for FockVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (p, c)) in self.terms().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if !c.is_one() {
                write!(f, "({c})")?;
            }
            if p.is_empty() {
                f.write_str("|∅⟩")?;
            } else {
                write!(f, "|{p}⟩")?;
            }
        }
        Ok(())
    }
}

impl FockVector {
    pub fn zero(degree: usize) -> Self {
        FockVector {
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(lambda: &Partition) -> Self {
        let mut v = FockVector::zero(lambda.size());
        v.add_term(lambda.clone(), &LaurentPoly::one());
        v
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, lambda: &Partition) -> LaurentPoly {
        self.terms.get(lambda).cloned().unwrap_or_default()
    }

    /// Terms in the crate's partition order (dominance-larger first).
    pub fn terms(&self) -> impl Iterator<Item = (&Partition, &LaurentPoly)> {
        self.terms.iter().rev()
    }

    pub fn add_term(&mut self, lambda: Partition, c: &LaurentPoly) {
        assert_eq!(
            lambda.size(),
            self.degree,
            "Fock vector terms must share one degree"
        );
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(lambda.clone()).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&lambda);
        }
    }

    pub fn add_scaled(&mut self, other: &FockVector, c: &LaurentPoly) {
        for (p, x) in &other.terms {
            self.add_term(p.clone(), &(x * c));
        }
    }

    pub fn scaled(&self, c: &LaurentPoly) -> FockVector {
        let mut out = FockVector::zero(self.degree);
        out.add_scaled(self, c);
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let items: Vec<_> = self
            .terms()
            .map(|(p, c)| serde_json::json!({ "partition": p.parts(), "coefficient": c.to_string() }))
            .collect();
        serde_json::Value::Array(items)
    }

    pub fn from_json(degree: usize, v: &serde_json::Value) -> Result<Self> {
        let bad = || Error::Parse("bad Fock vector JSON".into());
        let mut out = FockVector::zero(degree);
        for item in v.as_array().ok_or_else(bad)? {
            let parts: Vec<usize> =
                serde_json::from_value(item.get("partition").ok_or_else(bad)?.clone())
                    .map_err(|e| Error::Parse(e.to_string()))?;
            let p = Partition::new(parts)?;
            if p.size() != degree {
                return Err(Error::DegreeMismatch {
                    expected: degree,
                    actual: p.size(),
                });
            }
            let c: LaurentPoly = item
                .get("coefficient")
                .and_then(|c| c.as_str())
                .ok_or_else(bad)?
                .parse()?;
            out.add_term(p, &c);
        }
        Ok(out)
    }
}

type Expansion = BTreeMap<Vec<i64>, LaurentPoly>;

fn accumulate(into: &mut Expansion, key: Vec<i64>, c: LaurentPoly) {
    if c.is_zero() {
        return;
    }
    let slot = into.entry(key.clone()).or_default();
    *slot += &c;
    if slot.is_zero() {
        into.remove(&key);
    }
}

/// Rewrites wedge heads into normal form with the modulus-`n` straightening
/// rules, memoizing every partial result.
///
/// A head is normalized suffix first; the remaining work is always the
/// leftmost adjacent pair `u_l ∧ u_m` with `l < m`:
///
/// * `l = m` gives zero;
/// * `m - l ≡ 0 (mod n)`: `u_l ∧ u_m = -u_m ∧ u_l`;
/// * otherwise, with `i = (m - l) mod n`,
///   `u_l ∧ u_m = -q⁻¹ u_m ∧ u_l + (q⁻² - 1)(u_{m-i} ∧ u_{l+i} - q⁻¹ u_{m-n} ∧ u_{l+n} + q⁻² u_{m-n-i} ∧ u_{l+n+i} - …)`,
///   the series running while the first index exceeds the second.
///
/// Every index produced lies between `l` and `m`, so heads never run into the
/// vacuum tail.
pub struct Straightener {
    n: i64,
    cache: HashMap<(i64, Vec<i64>), Rc<Expansion>>,
    steps: usize,
    budget: usize,
}

impl Straightener {
    pub fn new(n: usize) -> Result<Self> {
        Straightener::with_budget(n, DEFAULT_STEP_BUDGET)
    }

    pub fn with_budget(n: usize, budget: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidModulus(n as i64, 2));
        }
        Ok(Straightener {
            n: n as i64,
            cache: HashMap::new(),
            steps: 0,
            budget,
        })
    }

    pub fn modulus(&self) -> usize {
        self.n as usize
    }

    /// Rule applications performed so far.
    pub fn steps(&self) -> usize {
        self.steps
    }

    /// Expands an arbitrary head into normalized heads of the same length.
    pub fn straighten_head(&mut self, head: &[i64]) -> Result<Expansion> {
        let mut acc: Expansion = BTreeMap::new();
        acc.insert(Vec::new(), LaurentPoly::one());
        for &x in head.iter().rev() {
            let mut next = BTreeMap::new();
            for (tail, c) in &acc {
                let inserted = self.insert(x, tail)?;
                for (w, d) in inserted.iter() {
                    accumulate(&mut next, w.clone(), c * d);
                }
            }
            acc = next;
        }
        Ok(acc)
    }

    /// Normal form of `u_x ∧ u_{J}` for a strictly decreasing `J`.
    fn insert(&mut self, x: i64, tail: &[i64]) -> Result<Rc<Expansion>> {
        let key = (x, tail.to_vec());
        if let Some(hit) = self.cache.get(&key) {
            return Ok(Rc::clone(hit));
        }
        let mut out: Expansion = BTreeMap::new();
        match tail.first() {
            None => {
                out.insert(vec![x], LaurentPoly::one());
            }
            Some(&first) if x > first => {
                let mut w = Vec::with_capacity(tail.len() + 1);
                w.push(x);
                w.extend_from_slice(tail);
                out.insert(w, LaurentPoly::one());
            }
            Some(&first) if x == first => {}
            Some(&m) => {
                self.steps += 1;
                if self.steps > self.budget {
                    return Err(Error::StepBudgetExceeded(self.budget));
                }
                let l = x;
                let rest = &tail[1..];
                let i = (m - l).rem_euclid(self.n);
                let lead = if i == 0 {
                    LaurentPoly::constant(-1)
                } else {
                    LaurentPoly::monomial(-1, -1)
                };
                for (w, c) in self.insert(l, rest)?.iter() {
                    let mut v = Vec::with_capacity(tail.len() + 1);
                    v.push(m);
                    v.extend_from_slice(w);
                    accumulate(&mut out, v, &lead * c);
                }
                if i != 0 {
                    let base = LaurentPoly::from_terms([(-2, 1), (0, -1)]);
                    for (j, (a, b)) in correction_pairs(l, m, i, self.n).into_iter().enumerate() {
                        let sign = if j % 2 == 0 { 1 } else { -1 };
                        let coef = base.shift(-(j as i64)).scale(&BigInt::from(sign));
                        let inner = self.insert(b, rest)?;
                        for (w, c) in inner.iter() {
                            let outer = self.insert(a, w)?;
                            let cc = &coef * c;
                            for (v, d) in outer.iter() {
                                accumulate(&mut out, v.clone(), &cc * d);
                            }
                        }
                    }
                }
            }
        }
        let out = Rc::new(out);
        self.cache.insert(key, Rc::clone(&out));
        Ok(out)
    }
}

/// Index pairs `(m-i, l+i), (m-n, l+n), (m-n-i, l+n+i), (m-2n, l+2n), …` of
/// the correction series, kept while the first index exceeds the second.
fn correction_pairs(l: i64, m: i64, i: i64, n: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for j in 0.. {
        let shift = if j % 2 == 0 {
            (j / 2) * n + i
        } else {
            (j + 1) / 2 * n
        };
        let (a, b) = (m - shift, l + shift);
        if a <= b {
            break;
        }
        debug_assert!(l <= b && a <= m);
        out.push((a, b));
    }
    out
}

/// Straightens a head into a combination of basis vectors `|λ⟩`.
///
/// Entries must exceed `-(head length)`.
pub fn straighten(head: &[i64], n: usize) -> Result<FockVector> {
    let mut s = Straightener::new(n)?;
    straighten_with(&mut s, head)
}

fn straighten_with(s: &mut Straightener, head: &[i64]) -> Result<FockVector> {
    let k = head.len() as i64;
    if head.iter().any(|&i| i <= -k) {
        return Err(Error::HeadOutOfRange {
            head: head.to_vec(),
            bound: -k,
        });
    }
    let degree = head.iter().sum::<i64>() + k * (k - 1) / 2;
    let degree = usize::try_from(degree).map_err(|_| Error::HeadOutOfRange {
        head: head.to_vec(),
        bound: -k,
    })?;
    let mut out = FockVector::zero(degree);
    for (w, c) in s.straighten_head(head)? {
        out.add_term(head_to_partition(&w), &c);
    }
    Ok(out)
}

/// Number of pairs `r < s` among the head entries with `i_r - i_s ≢ 0 (mod n)`.
pub fn alpha_statistic(head: &[i64], n: usize) -> usize {
    let n = n as i64;
    let mut count = 0;
    for r in 0..head.len() {
        for s in r + 1..head.len() {
            if (head[r] - head[s]).rem_euclid(n) != 0 {
                count += 1;
            }
        }
    }
    count
}

/// Computes the bar involution on the Fock space for one modulus, sharing a
/// straightening cache between calls.
pub struct BarInvolution {
    straightener: Straightener,
}

impl BarInvolution {
    pub fn new(n: usize) -> Result<Self> {
        Ok(BarInvolution {
            straightener: Straightener::new(n)?,
        })
    }

    pub fn modulus(&self) -> usize {
        self.straightener.modulus()
    }

    /// `bar|μ⟩ = (-1)^{k(k-1)/2} q^{α(I)} u_{i_k} ∧ … ∧ u_{i_1} ∧ u_{i_{k+1}} ∧ …`,
    /// straightened. `k` defaults to `|μ|`.
    pub fn bar_partition(&mut self, mu: &Partition, k: Option<usize>) -> Result<FockVector> {
        let m = mu.size();
        let k = k.unwrap_or(m.max(mu.len()));
        if k < m || k < mu.len() {
            return Err(Error::LengthTooSmall {
                given: k,
                needed: m.max(mu.len()),
            });
        }
        let head = WedgeWord::from_partition(mu, k)?.head;
        let alpha = alpha_statistic(&head, self.modulus()) as i64;
        let sign = if (k * k.saturating_sub(1) / 2).is_multiple_of(2) {
            1
        } else {
            -1
        };
        let reversed: Vec<i64> = head.iter().rev().copied().collect();
        let v = straighten_with(&mut self.straightener, &reversed)?;
        Ok(v.scaled(&LaurentPoly::monomial(sign, alpha)))
    }

    /// Semilinear extension: bar the coefficients, bar the basis vectors.
    pub fn bar_vector(&mut self, v: &FockVector, k: Option<usize>) -> Result<FockVector> {
        let mut out = FockVector::zero(v.degree());
        for (p, c) in v.terms() {
            let image = self.bar_partition(p, k)?;
            out.add_scaled(&image, &c.bar());
        }
        Ok(out)
    }
}

pub fn bar_partition(mu: &Partition, n: usize, k: Option<usize>) -> Result<FockVector> {
    BarInvolution::new(n)?.bar_partition(mu, k)
}

pub fn bar_vector(v: &FockVector, n: usize, k: Option<usize>) -> Result<FockVector> {
    BarInvolution::new(n)?.bar_vector(v, k)
}

/// The matrix `a_{λτ}(q)` of the bar involution on partitions of `m`:
/// column `τ` holds the coefficients of `bar|τ⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BarMatrix {
    pub n: usize,
    pub m: usize,
    pub matrix: PolyMatrix,
}

impl BarMatrix {
    pub fn compute(n: usize, m: usize) -> Result<Self> {
        let mut bar = BarInvolution::new(n)?;
        let order = partitions_of(m);
        let mut matrix = PolyMatrix::zeros(order.clone());
        for (col, tau) in order.iter().enumerate() {
            let image = bar.bar_partition(tau, None)?;
            for (lambda, c) in image.terms() {
                let row = matrix.index_of(lambda).expect("same degree");
                matrix.set(row, col, c.clone());
            }
        }
        Ok(BarMatrix { n, m, matrix })
    }

    pub fn order(&self) -> &[Partition] {
        self.matrix.order()
    }

    /// `a_{λτ}` by partitions.
    pub fn entry(&self, lambda: &Partition, tau: &Partition) -> LaurentPoly {
        self.matrix.get_by(lambda, tau)
    }

    /// Entries `a_{λτ}(1)` at `q = 1`.
    pub fn at_one(&self) -> Vec<Vec<BigInt>> {
        self.matrix.map(|p| p.eval_at_one())
    }

    pub fn derivative_at_one(&self) -> Vec<Vec<BigInt>> {
        self.matrix.map(|p| p.derivative_at_one())
    }

    /// Structural violations: non-unit diagonal, entries outside `λ ⊴ τ`,
    /// nonzero off-diagonal values at `q = 1`, odd derivatives at `q = 1`.
    pub fn structure_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let order = self.order();
        for (r, lambda) in order.iter().enumerate() {
            for (c, tau) in order.iter().enumerate() {
                let a = self.matrix.get(r, c);
                if r == c {
                    if !a.is_one() {
                        out.push(format!("a[{lambda}][{tau}] = {a} is not 1"));
                    }
                    continue;
                }
                if a.is_zero() {
                    continue;
                }
                if !lambda.is_dominated_by(tau).unwrap_or(false) {
                    out.push(format!(
                        "a[{lambda}][{tau}] = {a} but {lambda} is not dominated by {tau}"
                    ));
                }
                if !a.eval_at_one().is_zero() {
                    out.push(format!(
                        "a[{lambda}][{tau}](1) = {} is nonzero",
                        a.eval_at_one()
                    ));
                }
            }
        }
        for (r, row) in self.derivative_at_one().iter().enumerate() {
            for (c, d) in row.iter().enumerate() {
                if d % BigInt::from(2) != BigInt::zero() {
                    out.push(format!("a'[{}][{}](1) = {d} is odd", order[r], order[c]));
                }
            }
        }
        out
    }

    /// Off-diagonal entries that are not a single term `±q^a (q^-2 - 1)^b`.
    pub fn non_monomial_entries(&self) -> Vec<(Partition, Partition, LaurentPoly)> {
        let base = LaurentPoly::from_terms([(-2, 1), (0, -1)]);
        let order = self.order();
        let mut out = Vec::new();
        for (r, lambda) in order.iter().enumerate() {
            for (c, tau) in order.iter().enumerate() {
                let a = self.matrix.get(r, c);
                if r == c || a.is_zero() || is_signed_power_form(a, &base) {
                    continue;
                }
                out.push((lambda.clone(), tau.clone(), a.clone()));
            }
        }
        out
    }
}

fn is_signed_power_form(a: &LaurentPoly, base: &LaurentPoly) -> bool {
    let mut rest = a.clone();
    while let Some(next) = rest.div_exact(base) {
        rest = next;
    }
    rest.num_terms() == 1
        && rest
            .terms()
            .all(|(_, c)| c == &BigInt::one() || c == &-BigInt::one())
}

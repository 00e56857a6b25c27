//! The lower global (canonical) basis `G(λ)` of the Fock space and the
//! q-decomposition matrix `d_{μλ}(q)`.
//!
//! Two independent routes are provided. [`CanonicalBasis`] starts from the
//! bar-invariant vector `|λ⟩ + bar|λ⟩` and repeatedly cancels the largest
//! coefficient outside `qℤ[q]` with a bar-invariant multiple of a smaller
//! `G(μ)`. [`DecompositionMatrix::compute`] instead solves
//! `d_{μλ} - bar(d_{μλ}) = Σ_{μ◁τ} a_{μτ} bar(d_{τλ})` entry by entry, one
//! column at a time, in any linear extension of the dominance order.

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fock::{BarMatrix, FockVector};
use crate::laurent::LaurentPoly;
use crate::matrix::PolyMatrix;
use crate::partition::Partition;

/// The unique bar-invariant `p` with `p ≡ c (mod qℤ[q])`:
/// `a₀ + Σ_{j>0} a_{-j}(q^j + q^{-j})`.
pub fn symmetric_lift(c: &LaurentPoly) -> LaurentPoly {
    let mut out = LaurentPoly::zero();
    for (e, a) in c.terms().take_while(|(e, _)| *e <= 0) {
        out.add_term(e, a.clone());
        if e < 0 {
            out.add_term(-e, a.clone());
        }
    }
    out
}

fn in_q_lattice(c: &LaurentPoly) -> bool {
    c.min_exp().is_none_or(|e| e >= 1)
}

/// Canonical basis vectors computed by the correction loop, memoized per
/// partition of `m`.
pub struct CanonicalBasis<'a> {
    bar: &'a BarMatrix,
    vectors: Vec<Option<FockVector>>,
    budget: usize,
}

impl<'a> CanonicalBasis<'a> {
    pub fn new(bar: &'a BarMatrix) -> Self {
        let p = bar.order().len();
        CanonicalBasis {
            bar,
            vectors: vec![None; p],
            budget: p * p,
        }
    }

    pub fn with_budget(bar: &'a BarMatrix, budget: usize) -> Self {
        CanonicalBasis {
            budget,
            ..CanonicalBasis::new(bar)
        }
    }

    pub fn vector(&mut self, lambda: &Partition) -> Result<FockVector> {
        let idx = self
            .bar
            .matrix
            .index_of(lambda)
            .ok_or_else(|| Error::DegreeMismatch {
                expected: self.bar.m,
                actual: lambda.size(),
            })?;
        self.vector_at(idx)
    }

    fn vector_at(&mut self, idx: usize) -> Result<FockVector> {
        if let Some(v) = &self.vectors[idx] {
            return Ok(v.clone());
        }
        let order = self.bar.order().to_vec();
        let lambda = &order[idx];
        // 2·G(λ) is the unique bar-invariant vector ≡ 2|λ⟩ mod qL
        let mut v = FockVector::basis(lambda);
        for (row, mu) in order.iter().enumerate() {
            v.add_term(mu.clone(), self.bar.matrix.get(row, idx));
        }
        let mut steps = 0;
        loop {
            let violating = order
                .iter()
                .enumerate()
                .find(|(i, mu)| *i != idx && !in_q_lattice(&v.coeff(mu)));
            let Some((j, mu)) = violating else { break };
            steps += 1;
            if steps > self.budget {
                return Err(Error::StepBudgetExceeded(self.budget));
            }
            if j < idx {
                return Err(Error::Internal(format!(
                    "G({lambda}) picked up a term above it at {mu}"
                )));
            }
            let lift = symmetric_lift(&v.coeff(mu));
            let g_mu = self.vector_at(j)?;
            v.add_scaled(&g_mu, &-lift);
        }
        let two = LaurentPoly::constant(2);
        let mut g = FockVector::zero(lambda.size());
        for (mu, c) in v.terms() {
            let half = c.div_exact(&two).ok_or_else(|| {
                Error::Internal(format!("coefficient {c} of 2G({lambda}) is odd"))
            })?;
            g.add_term(mu.clone(), &half);
        }
        self.vectors[idx] = Some(g.clone());
        Ok(g)
    }
}

/// `G(λ)` for modulus `n`, by the correction loop.
pub fn canonical_vector(lambda: &Partition, n: usize) -> Result<FockVector> {
    let bar = BarMatrix::compute(n, lambda.size())?;
    CanonicalBasis::new(&bar).vector(lambda)
}

/// `d_{μλ}(q)`: row `μ`, column `λ`, so that `G(λ) = Σ_μ d_{μλ}(q)|μ⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionMatrix {
    pub n: usize,
    pub m: usize,
    pub matrix: PolyMatrix,
}

impl DecompositionMatrix {
    /// Column-by-column triangular solve in the bar matrix's own order.
    pub fn compute(bar: &BarMatrix) -> Result<Self> {
        DecompositionMatrix::compute_with_order(bar, bar.order())
    }

    /// Same, processing rows in `extension`, which must be a linear extension
    /// of the reversed dominance order (larger partitions first). The result
    /// is always stored in the bar matrix's order.
    pub fn compute_with_order(bar: &BarMatrix, extension: &[Partition]) -> Result<Self> {
        let a = &bar.matrix;
        let perm: Vec<usize> = extension
            .iter()
            .map(|p| {
                a.index_of(p)
                    .ok_or_else(|| Error::Internal(format!("{p} is not indexed")))
            })
            .collect::<Result<_>>()?;
        if perm.len() != a.dim() {
            return Err(Error::Internal(
                "extension does not list every partition".into(),
            ));
        }
        let columns: Vec<Vec<LaurentPoly>> = (0..a.dim())
            .into_par_iter()
            .map(|col| solve_column(a, &perm, col))
            .collect::<Result<_>>()?;
        let mut matrix = PolyMatrix::zeros(bar.order().to_vec());
        for (c, column) in columns.into_iter().enumerate() {
            for (r, x) in column.into_iter().enumerate() {
                matrix.set(r, c, x);
            }
        }
        Ok(DecompositionMatrix {
            n: bar.n,
            m: bar.m,
            matrix,
        })
    }

    pub fn order(&self) -> &[Partition] {
        self.matrix.order()
    }

    pub fn entry(&self, mu: &Partition, lambda: &Partition) -> LaurentPoly {
        self.matrix.get_by(mu, lambda)
    }

    /// Column `λ` as a Fock vector, i.e. `G(λ)`.
    pub fn column(&self, lambda: &Partition) -> FockVector {
        let mut v = FockVector::zero(self.m);
        for mu in self.order() {
            v.add_term(mu.clone(), &self.entry(mu, lambda));
        }
        v
    }

    /// Violations of: `d ∈ ℤ[q]`, unit diagonal, `d_{μλ} = 0` unless `μ ⊴ λ`,
    /// zero constant term off the diagonal, non-negative coefficients.
    pub fn invariant_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let order = self.order();
        for (r, mu) in order.iter().enumerate() {
            for (c, lambda) in order.iter().enumerate() {
                let d = self.matrix.get(r, c);
                if r == c {
                    if !d.is_one() {
                        out.push(format!("d[{mu}][{lambda}] = {d} is not 1"));
                    }
                    continue;
                }
                if d.is_zero() {
                    continue;
                }
                if !mu.is_dominated_by(lambda).unwrap_or(false) {
                    out.push(format!(
                        "d[{mu}][{lambda}] = {d} but {mu} is not dominated by {lambda}"
                    ));
                }
                if !d.is_polynomial() {
                    out.push(format!("d[{mu}][{lambda}] = {d} has negative powers of q"));
                }
                if !d.coeff(0).is_zero() {
                    out.push(format!(
                        "d[{mu}][{lambda}] = {d} has a nonzero constant term"
                    ));
                }
                if d.terms().any(|(_, c)| c < &BigInt::zero()) {
                    out.push(format!(
                        "d[{mu}][{lambda}] = {d} has a negative coefficient"
                    ));
                }
            }
        }
        out
    }
}

fn solve_column(a: &PolyMatrix, perm: &[usize], col: usize) -> Result<Vec<LaurentPoly>> {
    let n = a.dim();
    let mut d = vec![LaurentPoly::zero(); n];
    d[col] = LaurentPoly::one();
    let mut done = vec![false; n];
    for &row in perm {
        if row == col {
            done[row] = true;
            continue;
        }
        let mut r = LaurentPoly::zero();
        for tau in 0..n {
            let x = a.get(row, tau);
            if tau == row || x.is_zero() || d[tau].is_zero() {
                continue;
            }
            if !done[tau] {
                return Err(Error::Internal(format!(
                    "order is not a linear extension: {} needed before {}",
                    a.order()[tau],
                    a.order()[row]
                )));
            }
            r += x * &d[tau].bar();
        }
        if r.bar() != -&r {
            return Err(Error::Internal(format!(
                "right-hand side {r} at ({}, {}) is not bar-antisymmetric",
                a.order()[row],
                a.order()[col]
            )));
        }
        d[row] = LaurentPoly::from_terms(
            r.terms()
                .filter(|(e, _)| *e > 0)
                .map(|(e, c)| (e, c.clone())),
        );
        done[row] = true;
    }
    Ok(d)
}

/// Per-entry outcome of an exact matrix identity check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityReport {
    pub n: usize,
    pub m: usize,
    /// `(row, col, lhs, rhs)` for each failing entry.
    pub failures: Vec<(Partition, Partition, String, String)>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// `d_{λμ}(q) = Σ_τ a_{λτ}(q) d_{τμ}(q⁻¹)`, entrywise.
pub fn gj_identity_check(bar: &BarMatrix, dec: &DecompositionMatrix) -> Result<IdentityReport> {
    let rhs = bar.matrix.mul(&dec.matrix.bar())?;
    let order = dec.order();
    let mut failures = Vec::new();
    for (r, lambda) in order.iter().enumerate() {
        for (c, mu) in order.iter().enumerate() {
            let (l, x) = (dec.matrix.get(r, c), rhs.get(r, c));
            if l != x {
                failures.push((lambda.clone(), mu.clone(), l.to_string(), x.to_string()));
            }
        }
    }
    Ok(IdentityReport {
        n: dec.n,
        m: dec.m,
        failures,
    })
}

/// `d'_{λμ}(1) = ½ Σ_τ a'_{λτ}(1) d_{τμ}(1)`, entrywise over the integers.
pub fn derivative_identity_check(bar: &BarMatrix, dec: &DecompositionMatrix) -> IdentityReport {
    let a1 = bar.derivative_at_one();
    let d1 = dec.matrix.map(LaurentPoly::eval_at_one);
    let dd = dec.matrix.map(LaurentPoly::derivative_at_one);
    let order = dec.order();
    let p = order.len();
    let mut failures = Vec::new();
    for r in 0..p {
        for c in 0..p {
            let sum: BigInt = (0..p).map(|t| &a1[r][t] * &d1[t][c]).sum();
            let lhs = &dd[r][c] * BigInt::from(2);
            if lhs != sum {
                failures.push((
                    order[r].clone(),
                    order[c].clone(),
                    dd[r][c].to_string(),
                    format!("{sum}/2"),
                ));
            }
        }
    }
    IdentityReport {
        n: dec.n,
        m: dec.m,
        failures,
    }
}

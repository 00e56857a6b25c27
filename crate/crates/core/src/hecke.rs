//! The Iwahori–Hecke algebra of `S_m` over `ℤ[q, q⁻¹]`, Murphy's basis and
//! Specht-module Gram matrices.
//!
//! Convention: `T_i² = (q - 1) T_i + q`. Permutations compose as functions,
//! so `w s_i` swaps positions `i` and `i + 1` of the one-line notation and
//! `T_w T_i = T_{w s_i}` whenever `w(i) < w(i + 1)`.
//!
//! `gram_matrix(λ)` is the form on the cell module of the conjugate shape
//! `λ'` built from `x_{λ'} = Σ_{w ∈ S_{λ'}} T_w`. With this convention the
//! form is non-degenerate at a primitive `n`-th root of unity exactly when
//! `λ` is `n`-regular. Tableaux of `λ` index the matrix through transposition.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::laurent::{cyclotomic, cyclotomic_valuation, LaurentPoly};
use crate::matrix::determinant;
use crate::partition::{Partition, StandardTableau};

/// Largest `m` accepted by the Gram routines unless a cap is given.
/// `m = 6` works but takes minutes.
pub const DEFAULT_SIZE_CAP: usize = 5;

/// A permutation of `{1, …, m}` in one-line notation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    one_line: Vec<usize>,
    length: usize,
}

impl Permutation {
    pub fn new(one_line: Vec<usize>) -> Result<Self> {
        let m = one_line.len();
        let mut seen = vec![false; m + 1];
        for &x in &one_line {
            if x == 0 || x > m || seen[x] {
                return Err(Error::Parse(format!("not a permutation: {one_line:?}")));
            }
            seen[x] = true;
        }
        Ok(Self::from_valid(one_line))
    }

    fn from_valid(one_line: Vec<usize>) -> Self {
        let length = inversions(&one_line);
        Permutation { one_line, length }
    }

    pub fn identity(m: usize) -> Self {
        Self::from_valid((1..=m).collect())
    }

    /// The transposition `s_i = (i, i+1)`, `1 ≤ i < m`.
    pub fn simple(i: usize, m: usize) -> Result<Self> {
        if i == 0 || i >= m {
            return Err(Error::Parse(format!("no simple reflection s_{i} in S_{m}")));
        }
        let mut w: Vec<usize> = (1..=m).collect();
        w.swap(i - 1, i);
        Ok(Self::from_valid(w))
    }

    pub fn one_line(&self) -> &[usize] {
        &self.one_line
    }

    pub fn degree(&self) -> usize {
        self.one_line.len()
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn apply(&self, x: usize) -> usize {
        self.one_line[x - 1]
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Self::from_valid(
            other
                .one_line
                .iter()
                .map(|&x| self.one_line[x - 1])
                .collect(),
        )
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.degree()];
        for (i, &x) in self.one_line.iter().enumerate() {
            inv[x - 1] = i + 1;
        }
        Self::from_valid(inv)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.one_line.iter().map(ToString::to_string).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

fn inversions(w: &[usize]) -> usize {
    let mut k = 0;
    for i in 0..w.len() {
        for j in i + 1..w.len() {
            if w[i] > w[j] {
                k += 1;
            }
        }
    }
    k
}

/// All permutations of `1..=m` in lexicographic order.
fn all_permutations(m: usize) -> Vec<Vec<usize>> {
    let mut cur: Vec<usize> = (1..=m).collect();
    let mut out = vec![cur.clone()];
    loop {
        let Some(i) = (1..m).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..m).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
}

/// A finite combination `Σ c_w T_w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeckeElement {
    m: usize,
    terms: BTreeMap<Permutation, LaurentPoly>,
}

impl HeckeElement {
    pub fn zero(m: usize) -> Self {
        HeckeElement {
            m,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(m: usize) -> Self {
        Self::basis(Permutation::identity(m))
    }

    pub fn basis(w: Permutation) -> Self {
        let mut x = Self::zero(w.degree());
        x.terms.insert(w, LaurentPoly::one());
        x
    }

    /// `T_{s_i}`.
    pub fn generator(i: usize, m: usize) -> Result<Self> {
        Ok(Self::basis(Permutation::simple(i, m)?))
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &Permutation) -> LaurentPoly {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Permutation, &LaurentPoly)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, w: Permutation, c: &LaurentPoly) {
        assert_eq!(w.degree(), self.m, "permutation degree");
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(w.clone()).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn scaled(&self, c: &LaurentPoly) -> Self {
        let mut out = Self::zero(self.m);
        for (w, x) in &self.terms {
            out.add_term(w.clone(), &(x * c));
        }
        out
    }

    /// The anti-automorphism `T_w ↦ T_{w⁻¹}`.
    pub fn star(&self) -> Self {
        HeckeElement {
            m: self.m,
            terms: self
                .terms
                .iter()
                .map(|(w, c)| (w.inverse(), c.clone()))
                .collect(),
        }
    }
}

impl std::ops::Add for &HeckeElement {
    type Output = HeckeElement;

    fn add(self, rhs: &HeckeElement) -> HeckeElement {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c);
        }
        out
    }
}

type Dense = Vec<LaurentPoly>;

/// Multiplication tables for `H(S_m)`; elements are handled as dense
/// coefficient vectors indexed by permutations in lexicographic order.
pub struct HeckeAlgebra {
    m: usize,
    perms: Vec<Permutation>,
    index: HashMap<Vec<usize>, usize>,
    /// `right[i - 1][w]` is the index of `w s_i`.
    right: Vec<Vec<usize>>,
}

impl HeckeAlgebra {
    pub fn new(m: usize) -> Self {
        let perms: Vec<Permutation> = all_permutations(m)
            .into_iter()
            .map(Permutation::from_valid)
            .collect();
        let index: HashMap<Vec<usize>, usize> = perms
            .iter()
            .enumerate()
            .map(|(k, w)| (w.one_line.clone(), k))
            .collect();
        let right = (1..m)
            .map(|i| {
                perms
                    .iter()
                    .map(|w| {
                        let mut v = w.one_line.clone();
                        v.swap(i - 1, i);
                        index[&v]
                    })
                    .collect()
            })
            .collect();
        HeckeAlgebra {
            m,
            perms,
            index,
            right,
        }
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.perms.len()
    }

    pub fn permutations(&self) -> &[Permutation] {
        &self.perms
    }

    fn idx(&self, w: &Permutation) -> usize {
        self.index[&w.one_line]
    }

    fn zero_dense(&self) -> Dense {
        vec![LaurentPoly::zero(); self.dim()]
    }

    fn to_dense(&self, x: &HeckeElement) -> Dense {
        let mut v = self.zero_dense();
        for (w, c) in &x.terms {
            v[self.idx(w)] = c.clone();
        }
        v
    }

    fn element_of(&self, v: &Dense) -> HeckeElement {
        let terms = self
            .perms
            .iter()
            .zip(v)
            .filter(|(_, c)| !c.is_zero())
            .map(|(w, c)| (w.clone(), c.clone()))
            .collect();
        HeckeElement { m: self.m, terms }
    }

    /// `v ← v · T_i`.
    fn mul_generator(&self, v: &mut Dense, i: usize) {
        let q = LaurentPoly::q();
        let q_minus_one = &q - &LaurentPoly::one();
        for (w, perm) in self.perms.iter().enumerate() {
            if perm.one_line[i - 1] > perm.one_line[i] {
                continue;
            }
            let w2 = self.right[i - 1][w];
            if v[w].is_zero() && v[w2].is_zero() {
                continue;
            }
            let cw = std::mem::take(&mut v[w]);
            let cw2 = std::mem::take(&mut v[w2]);
            v[w] = &q * &cw2;
            v[w2] = &cw + &(&q_minus_one * &cw2);
        }
    }

    /// First descent `i` of `w`, i.e. `w(i) > w(i+1)`.
    fn descent(&self, w: usize) -> Option<usize> {
        let p = &self.perms[w].one_line;
        (1..self.m).find(|&i| p[i - 1] > p[i])
    }

    fn mul_dense(&self, x: &Dense, y: &Dense) -> Dense {
        let mut memo: HashMap<usize, Dense> = HashMap::new();
        let mut out = self.zero_dense();
        let id = self.idx(&Permutation::identity(self.m));
        for (v, c) in y.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            // descend to a memoized (or trivial) prefix, then climb back up
            let mut chain = Vec::new();
            let mut cur = v;
            while cur != id && !memo.contains_key(&cur) {
                let i = self.descent(cur).unwrap();
                chain.push((cur, i));
                cur = self.right[i - 1][cur];
            }
            let mut acc = if cur == id {
                x.clone()
            } else {
                memo[&cur].clone()
            };
            for &(w, i) in chain.iter().rev() {
                self.mul_generator(&mut acc, i);
                memo.insert(w, acc.clone());
            }
            for (k, a) in acc.iter().enumerate() {
                if !a.is_zero() {
                    out[k] += &(a * c);
                }
            }
        }
        out
    }

    pub fn multiply(&self, x: &HeckeElement, y: &HeckeElement) -> Result<HeckeElement> {
        for e in [x, y] {
            if e.m != self.m {
                return Err(Error::SizeMismatch(self.m, e.m));
            }
        }
        Ok(self.element_of(&self.mul_dense(&self.to_dense(x), &self.to_dense(y))))
    }

    /// `x_κ = Σ T_w` over permutations preserving the row blocks of `κ`.
    pub fn row_stabilizer_sum(&self, kappa: &Partition) -> Result<HeckeElement> {
        self.check_size(kappa)?;
        let blocks = block_labels(kappa);
        let mut x = HeckeElement::zero(self.m);
        for w in &self.perms {
            if (1..=self.m).all(|p| blocks[w.apply(p)] == blocks[p]) {
                x.add_term(w.clone(), &LaurentPoly::one());
            }
        }
        Ok(x)
    }

    fn check_size(&self, p: &Partition) -> Result<()> {
        if p.size() != self.m {
            return Err(Error::SizeMismatch(self.m, p.size()));
        }
        Ok(())
    }

    /// `m_{st} = T_{d(s)⁻¹} x_λ T_{d(t)}`.
    pub fn murphy_element(&self, s: &StandardTableau, t: &StandardTableau) -> Result<HeckeElement> {
        if s.shape() != t.shape() {
            return Err(Error::ShapeMismatch(
                s.shape().to_string(),
                t.shape().to_string(),
            ));
        }
        let lambda = s.shape();
        self.check_size(&lambda)?;
        let x = self.row_stabilizer_sum(&lambda)?;
        let left = HeckeElement::basis(tableau_permutation(s).inverse());
        let right = HeckeElement::basis(tableau_permutation(t));
        self.multiply(&self.multiply(&left, &x)?, &right)
    }

    /// Sums `Σ T_w` over the double cosets `S_α \ S_m / S_β`.
    pub fn double_coset_sums(
        &self,
        alpha: &Partition,
        beta: &Partition,
    ) -> Result<Vec<HeckeElement>> {
        self.check_size(alpha)?;
        self.check_size(beta)?;
        let ba = block_labels(alpha);
        let bb = block_labels(beta);
        let rb = beta.len();
        let mut groups: BTreeMap<Vec<usize>, HeckeElement> = BTreeMap::new();
        for w in &self.perms {
            let mut key = vec![0; alpha.len() * rb];
            for p in 1..=self.m {
                key[ba[w.apply(p)] * rb + bb[p]] += 1;
            }
            groups
                .entry(key)
                .or_insert_with(|| HeckeElement::zero(self.m))
                .add_term(w.clone(), &LaurentPoly::one());
        }
        Ok(groups.into_values().collect())
    }

    /// `y_μ = Σ (-q)^{-ℓ(w)} T_w` over the row stabilizer of `μ`; `T_i y_μ = -y_μ`
    /// for every generator of that subgroup.
    pub fn column_sign_sum(&self, mu: &Partition) -> Result<HeckeElement> {
        let x = self.row_stabilizer_sum(mu)?;
        let mut y = HeckeElement::zero(self.m);
        for (w, _) in x.terms() {
            let l = w.length() as i64;
            let sign = if l % 2 == 0 { 1 } else { -1 };
            y.add_term(w.clone(), &LaurentPoly::monomial(sign, -l));
        }
        Ok(y)
    }

    /// Shortest `d` with `S_κ ∩ d S_{κ'} d⁻¹` trivial.
    fn transversal(&self, kappa: &Partition) -> Result<Permutation> {
        let conj = kappa.conjugate();
        let ba = block_labels(kappa);
        let bb = block_labels(&conj);
        self.perms
            .iter()
            .filter(|w| {
                let mut seen = vec![false; kappa.len() * conj.len()];
                (1..=self.m).all(|p| {
                    !std::mem::replace(&mut seen[ba[w.apply(p)] * conj.len() + bb[p]], true)
                })
            })
            .min_by_key(|w| w.length())
            .cloned()
            .ok_or_else(|| Error::Internal(format!("no trivial-intersection coset for {kappa}")))
    }

    fn star_dense(&self, v: &Dense) -> Dense {
        let mut out = self.zero_dense();
        for (k, c) in v.iter().enumerate() {
            if !c.is_zero() {
                out[self.idx(&self.perms[k].inverse())] = c.clone();
            }
        }
        out
    }
}

/// `blocks[x]` is the row of `x` in the row-reading tableau of shape `κ`.
fn block_labels(kappa: &Partition) -> Vec<usize> {
    let mut labels = vec![usize::MAX];
    for (r, &len) in kappa.parts().iter().enumerate() {
        labels.extend(std::iter::repeat_n(r, len));
    }
    labels
}

/// `d(t)`, the shortest permutation with `t = t^λ d(t)`: the inverse of the
/// row-reading word.
pub fn tableau_permutation(t: &StandardTableau) -> Permutation {
    Permutation::from_valid(t.reading_word()).inverse()
}

pub fn hecke_multiply(x: &HeckeElement, y: &HeckeElement) -> Result<HeckeElement> {
    if x.m != y.m {
        return Err(Error::SizeMismatch(x.m, y.m));
    }
    HeckeAlgebra::new(x.m).multiply(x, y)
}

pub fn murphy_element(s: &StandardTableau, t: &StandardTableau) -> Result<HeckeElement> {
    HeckeAlgebra::new(s.shape().size()).murphy_element(s, t)
}

/// Gram matrix of the Specht module `S(λ)` in the Murphy basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramMatrix {
    pub shape: Partition,
    pub tableaux: Vec<StandardTableau>,
    pub entries: Vec<Vec<LaurentPoly>>,
}

impl GramMatrix {
    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.dim()).all(|i| (0..i).all(|j| self.entries[i][j] == self.entries[j][i]))
    }

    pub fn determinant(&self) -> Result<LaurentPoly> {
        determinant(&self.entries)
    }
}

/// Computes Gram matrices for one `m`, sharing the multiplication tables.
pub struct GramOracle {
    algebra: HeckeAlgebra,
}

impl GramOracle {
    pub fn new(m: usize) -> Result<Self> {
        Self::with_cap(m, DEFAULT_SIZE_CAP)
    }

    pub fn with_cap(m: usize, cap: usize) -> Result<Self> {
        if m > cap {
            return Err(Error::SizeCapExceeded { m, cap });
        }
        Ok(GramOracle {
            algebra: HeckeAlgebra::new(m),
        })
    }

    pub fn algebra(&self) -> &HeckeAlgebra {
        &self.algebra
    }

    pub fn gram_matrix(&self, lambda: &Partition) -> Result<GramMatrix> {
        let alg = &self.algebra;
        alg.check_size(lambda)?;
        let kappa = lambda.conjugate();
        let tableaux = lambda.standard_tableaux();
        let x = alg.to_dense(&alg.row_stabilizer_sum(&kappa)?);

        // x_κ T_{d(t)} for each tableau t of shape κ
        let heads: Vec<Dense> = tableaux
            .iter()
            .map(|t| {
                alg.mul_dense(
                    &x,
                    &alg.to_dense(&HeckeElement::basis(tableau_permutation(&t.transpose()))),
                )
            })
            .collect();

        // Right multiplication by T_d y_{κ'} kills every x_ν with ν ▷ κ and
        // sends x_κ H onto the rank-one module spanned by z = x_κ T_d y_{κ'}.
        let tail = alg.mul_dense(
            &alg.to_dense(&HeckeElement::basis(alg.transversal(&kappa)?)),
            &alg.to_dense(&alg.column_sign_sum(&kappa.conjugate())?),
        );
        let z = alg.mul_dense(&x, &tail);
        let pivot = z
            .iter()
            .position(|c| !c.is_zero())
            .ok_or_else(|| Error::Internal(format!("x_{kappa} T_d y vanishes")))?;

        let k = tableaux.len();
        let tails: Vec<Dense> = heads
            .iter()
            .map(|h| alg.mul_dense(&alg.star_dense(h), &tail))
            .collect();
        let mut entries = vec![vec![LaurentPoly::zero(); k]; k];
        for a in 0..k {
            for b in a..k {
                let prod = alg.mul_dense(&heads[a], &tails[b]);
                let gamma = prod[pivot].div_exact(&z[pivot]).ok_or_else(|| {
                    Error::Internal(format!("non-integral Gram entry for {lambda}"))
                })?;
                if prod.iter().zip(&z).any(|(p, zz)| *p != &gamma * zz) {
                    return Err(Error::Internal(format!(
                        "product is not a multiple of x_{kappa} modulo the dominating ideal"
                    )));
                }
                entries[b][a] = gamma.clone();
                entries[a][b] = gamma;
            }
        }
        Ok(GramMatrix {
            shape: lambda.clone(),
            tableaux,
            entries,
        })
    }

    pub fn gram_det_valuation(&self, lambda: &Partition, n: usize) -> Result<u32> {
        let det = self.gram_matrix(lambda)?.determinant()?;
        cyclotomic_valuation(&det, n as u64)
    }

    pub fn gram_rank_at_root(&self, lambda: &Partition, n: usize) -> Result<usize> {
        rank_at_root(&self.gram_matrix(lambda)?.entries, n)
    }
}

pub fn gram_matrix(lambda: &Partition) -> Result<GramMatrix> {
    GramOracle::new(lambda.size())?.gram_matrix(lambda)
}

pub fn gram_det_valuation(lambda: &Partition, n: usize) -> Result<u32> {
    GramOracle::new(lambda.size())?.gram_det_valuation(lambda, n)
}

pub fn gram_rank_at_root(lambda: &Partition, n: usize) -> Result<usize> {
    GramOracle::new(lambda.size())?.gram_rank_at_root(lambda, n)
}

/// Dense polynomials over `ℚ`, lowest degree first, without trailing zeros.
type QPoly = Vec<BigRational>;

fn trim(mut a: QPoly) -> QPoly {
    while a.last().is_some_and(Zero::is_zero) {
        a.pop();
    }
    a
}

fn qpoly_sub(a: &QPoly, b: &QPoly) -> QPoly {
    let mut out = vec![BigRational::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, x) in b.iter().enumerate() {
        out[i] -= x;
    }
    trim(out)
}

fn qpoly_mul(a: &QPoly, b: &QPoly) -> QPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn qpoly_divrem(a: &QPoly, b: &QPoly) -> (QPoly, QPoly) {
    let lead = b.last().expect("division by zero polynomial");
    let mut rem = a.clone();
    let mut quot = vec![BigRational::zero(); a.len().saturating_sub(b.len()) + 1];
    while rem.len() >= b.len() && !rem.is_empty() {
        let shift = rem.len() - b.len();
        let c = rem.last().unwrap() / lead;
        for (i, y) in b.iter().enumerate() {
            rem[shift + i] -= &c * y;
        }
        quot[shift] = c;
        rem = trim(rem);
    }
    (trim(quot), rem)
}

/// Arithmetic in `ℚ[q]/Φ_n`.
struct CyclotomicField {
    phi: QPoly,
}

impl CyclotomicField {
    fn new(n: usize) -> Result<Self> {
        let phi = cyclotomic(n as u64)?;
        let deg = phi.max_exp().unwrap() as usize;
        let mut v = vec![BigRational::zero(); deg + 1];
        for (e, c) in phi.terms() {
            v[e as usize] = BigRational::from_integer(c.clone());
        }
        Ok(CyclotomicField { phi: v })
    }

    fn reduce(&self, a: &QPoly) -> QPoly {
        qpoly_divrem(a, &self.phi).1
    }

    fn mul(&self, a: &QPoly, b: &QPoly) -> QPoly {
        self.reduce(&qpoly_mul(a, b))
    }

    fn inverse(&self, a: &QPoly) -> QPoly {
        let (mut r0, mut r1) = (self.phi.clone(), a.clone());
        let (mut s0, mut s1): (QPoly, QPoly) = (Vec::new(), vec![BigRational::one()]);
        while !r1.is_empty() {
            let (quot, rem) = qpoly_divrem(&r0, &r1);
            let s2 = qpoly_sub(&s0, &qpoly_mul(&quot, &s1));
            r0 = std::mem::replace(&mut r1, rem);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // r0 is a nonzero constant because Φ_n is irreducible
        let c = r0[0].clone();
        self.reduce(&s0.into_iter().map(|x| x / &c).collect())
    }
}

/// Rank of a Laurent-polynomial matrix after specializing `q` to a primitive
/// `n`-th root of unity, computed exactly in `ℚ[q]/Φ_n`.
pub fn rank_at_root(entries: &[Vec<LaurentPoly>], n: usize) -> Result<usize> {
    if n < 2 {
        return Err(Error::InvalidModulus(n as i64, 2));
    }
    let field = CyclotomicField::new(n)?;
    let low = entries
        .iter()
        .flatten()
        .filter_map(LaurentPoly::min_exp)
        .min()
        .unwrap_or(0);
    let mut rows: Vec<Vec<QPoly>> = entries
        .iter()
        .map(|row| {
            row.iter()
                .map(|a| {
                    let a = a.shift(-low);
                    let deg = a.max_exp().map_or(0, |d| d as usize + 1);
                    let mut v = vec![BigRational::zero(); deg];
                    for (e, c) in a.terms() {
                        v[e as usize] = BigRational::from_integer(c.clone());
                    }
                    field.reduce(&trim(v))
                })
                .collect()
        })
        .collect();
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_empty()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = field.inverse(&rows[rank][c]);
        let pivot_row: Vec<QPoly> = rows[rank].iter().map(|a| field.mul(a, &inv)).collect();
        for row in rows.iter_mut().skip(rank + 1) {
            let f = row[c].clone();
            if f.is_empty() {
                continue;
            }
            for k in c..cols {
                let t = field.mul(&f, &pivot_row[k]);
                row[k] = qpoly_sub(&row[k], &t);
            }
        }
        rows[rank] = pivot_row;
        rank += 1;
    }
    Ok(rank)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::partitions_of;
    use crate::schaper::schaper_det_rhs;
    use num_bigint::BigInt;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn lp(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    fn perm(v: &[usize]) -> Permutation {
        Permutation::new(v.to_vec()).unwrap()
    }

    #[test]
    fn permutations() {
        let w = perm(&[2, 3, 1]);
        assert_eq!(w.length(), 2);
        assert_eq!(w.compose(&w.inverse()), Permutation::identity(3));
        assert_eq!(Permutation::simple(1, 3).unwrap(), perm(&[2, 1, 3]));
        // w s_1 swaps the first two positions
        assert_eq!(
            w.compose(&Permutation::simple(1, 3).unwrap()),
            perm(&[3, 2, 1])
        );
        assert!(Permutation::new(vec![1, 1]).is_err());
        assert!(Permutation::simple(3, 3).is_err());
        assert_eq!(all_permutations(4).len(), 24);
        assert_eq!(all_permutations(0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn multiplication_examples() {
        let alg = HeckeAlgebra::new(3);
        let t1 = HeckeElement::generator(1, 3).unwrap();
        let t2 = HeckeElement::generator(2, 3).unwrap();
        let e = HeckeElement::one(3);
        for w in alg.permutations() {
            let tw = HeckeElement::basis(w.clone());
            assert_eq!(alg.multiply(&e, &tw).unwrap(), tw);
            assert_eq!(alg.multiply(&tw, &e).unwrap(), tw);
        }
        let mut quad = t1.scaled(&lp("q - 1"));
        quad.add_term(Permutation::identity(3), &lp("q"));
        assert_eq!(alg.multiply(&t1, &t1).unwrap(), quad);
        let lhs = alg.multiply(&alg.multiply(&t1, &t2).unwrap(), &t1).unwrap();
        let rhs = alg.multiply(&t1, &alg.multiply(&t2, &t1).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(lhs, HeckeElement::basis(perm(&[3, 2, 1])));
        assert!(hecke_multiply(&t1, &HeckeElement::one(2)).is_err());
    }

    #[test]
    fn quadratic_relation_for_every_generator() {
        let alg = HeckeAlgebra::new(4);
        for i in 1..4 {
            let t = HeckeElement::generator(i, 4).unwrap();
            let mut quad = t.scaled(&lp("q - 1"));
            quad.add_term(Permutation::identity(4), &lp("q"));
            assert_eq!(alg.multiply(&t, &t).unwrap(), quad);
        }
    }

    #[test]
    fn associativity_on_generator_triples() {
        let alg = HeckeAlgebra::new(4);
        let gens: Vec<HeckeElement> = (1..4)
            .map(|i| HeckeElement::generator(i, 4).unwrap())
            .collect();
        for a in &gens {
            for b in &gens {
                for c in &gens {
                    let l = alg.multiply(&alg.multiply(a, b).unwrap(), c).unwrap();
                    let r = alg.multiply(a, &alg.multiply(b, c).unwrap()).unwrap();
                    assert_eq!(l, r);
                }
            }
        }
    }

    #[test]
    fn murphy_examples() {
        for m in 1..=4 {
            let alg = HeckeAlgebra::new(m);
            let row = Partition::new(vec![m]).unwrap();
            let t = &row.standard_tableaux()[0];
            let all = alg.murphy_element(t, t).unwrap();
            assert_eq!(all.terms().count(), alg.dim());
            assert!(all.terms().all(|(_, c)| c.is_one()));
            let col = row.conjugate();
            let t = &col.standard_tableaux()[0];
            assert_eq!(alg.murphy_element(t, t).unwrap(), HeckeElement::one(m));
        }
        let a = &p("2,1").standard_tableaux()[0];
        let b = &p("3").standard_tableaux()[0];
        assert!(matches!(
            murphy_element(a, b),
            Err(Error::ShapeMismatch(..))
        ));
    }

    #[test]
    fn murphy_basis_of_s2() {
        let alg = HeckeAlgebra::new(2);
        let elems: Vec<HeckeElement> = partitions_of(2)
            .iter()
            .flat_map(|l| {
                let ts = l.standard_tableaux();
                ts.iter()
                    .flat_map(|s| ts.iter().map(|t| alg.murphy_element(s, t).unwrap()))
                    .collect::<Vec<_>>()
            })
            .collect();
        let rows: Vec<Vec<LaurentPoly>> = elems
            .iter()
            .map(|e| alg.permutations().iter().map(|w| e.coeff(w)).collect())
            .collect();
        assert_eq!(determinant(&rows).unwrap().num_terms(), 1);
    }

    #[test]
    fn tableau_permutations_are_shortest_coset_representatives() {
        for lambda in partitions_of(4) {
            let alg = HeckeAlgebra::new(4);
            let blocks = block_labels(&lambda);
            for t in lambda.standard_tableaux() {
                let d = tableau_permutation(&t);
                let coset: Vec<&Permutation> = alg
                    .permutations()
                    .iter()
                    .filter(|w| {
                        let u = w.compose(&d.inverse());
                        (1..=4).all(|x| blocks[u.apply(x)] == blocks[x])
                    })
                    .collect();
                assert!(coset.iter().all(|w| w.length() >= d.length()));
            }
        }
    }

    #[test]
    fn gram_examples() {
        let g = gram_matrix(&p("2")).unwrap();
        assert_eq!(g.entries, vec![vec![lp("1")]]);
        for n in 2..=5 {
            assert_eq!(gram_det_valuation(&p("2"), n).unwrap(), 0);
        }
        let g = gram_matrix(&p("1,1")).unwrap();
        assert_eq!(g.entries, vec![vec![lp("1 + q")]]);
        assert_eq!(gram_det_valuation(&p("1,1"), 2).unwrap(), 1);
        assert_eq!(gram_det_valuation(&p("1,1"), 3).unwrap(), 0);
        let g = gram_matrix(&p("2,1")).unwrap();
        assert_eq!(g.dim(), 2);
        assert!(g.is_symmetric());
        for n in [2, 3] {
            assert_eq!(
                BigInt::from(gram_det_valuation(&p("2,1"), n).unwrap()),
                schaper_det_rhs(&p("2,1"), n).unwrap()
            );
        }
    }

    #[test]
    fn sign_sum_and_dominating_ideal() {
        let alg = HeckeAlgebra::new(4);
        for mu in partitions_of(4) {
            let y = alg.column_sign_sum(&mu).unwrap();
            let x = alg.row_stabilizer_sum(&mu).unwrap();
            let mut start = 0;
            for &part in mu.parts() {
                for i in start + 1..start + part {
                    let t = HeckeElement::generator(i, 4).unwrap();
                    assert_eq!(alg.multiply(&t, &y).unwrap(), y.scaled(&lp("-1")));
                    assert_eq!(alg.multiply(&x, &t).unwrap(), x.scaled(&lp("q")));
                }
                start += part;
            }
        }
        // every x_κ-invariant product through a dominating x_ν dies under T_d y_{κ'}
        for kappa in partitions_of(4) {
            let tail = alg
                .multiply(
                    &HeckeElement::basis(alg.transversal(&kappa).unwrap()),
                    &alg.column_sign_sum(&kappa.conjugate()).unwrap(),
                )
                .unwrap();
            let x = alg.row_stabilizer_sum(&kappa).unwrap();
            assert!(!alg.multiply(&x, &tail).unwrap().is_zero());
            for nu in partitions_of(4)
                .into_iter()
                .filter(|nu| *nu != kappa && kappa.is_dominated_by(nu).unwrap())
            {
                for d in alg.double_coset_sums(&kappa, &nu).unwrap() {
                    for e in alg.double_coset_sums(&nu, &kappa).unwrap() {
                        let h = alg.multiply(&d, &e).unwrap();
                        assert!(alg.multiply(&h, &tail).unwrap().is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn rank_examples() {
        assert_eq!(gram_rank_at_root(&p("1,1"), 2).unwrap(), 0);
        assert_eq!(gram_rank_at_root(&p("2"), 2).unwrap(), 1);
        assert_eq!(gram_rank_at_root(&p("1,1"), 3).unwrap(), 1);
        assert_eq!(gram_rank_at_root(&p(""), 2).unwrap(), 1);
    }

    #[test]
    fn rank_over_cyclotomic_field() {
        // [[1, q], [q^-1, 1]] is singular everywhere; [[1, 1], [1, q]] only at q = 1
        let sing = vec![vec![lp("1"), lp("q")], vec![lp("q^-1"), lp("1")]];
        let gen = vec![vec![lp("1"), lp("1")], vec![lp("1"), lp("q")]];
        let root = vec![vec![lp("1 + q^2"), lp("0")], vec![lp("0"), lp("1 + q")]];
        for n in 2..=6 {
            assert_eq!(rank_at_root(&sing, n).unwrap(), 1);
            assert_eq!(rank_at_root(&gen, n).unwrap(), 2);
        }
        assert_eq!(rank_at_root(&root, 2).unwrap(), 1);
        assert_eq!(rank_at_root(&root, 4).unwrap(), 1);
        assert_eq!(rank_at_root(&root, 3).unwrap(), 2);
        assert!(rank_at_root(&root, 1).is_err());
    }

    #[test]
    fn field_inverse() {
        let f = CyclotomicField::new(5).unwrap();
        let a: QPoly = [1, 2, 0, 3]
            .iter()
            .map(|&c| BigRational::from_integer(c.into()))
            .collect();
        assert_eq!(f.mul(&a, &f.inverse(&a)), vec![BigRational::one()]);
    }

    #[test]
    fn size_cap() {
        assert!(matches!(
            GramOracle::new(6),
            Err(Error::SizeCapExceeded { m: 6, cap: 5 })
        ));
        assert!(gram_matrix(&p("3,2,1")).is_err());
        assert!(GramOracle::with_cap(6, 6).is_ok());
    }
}

//! Partitions, dominance order, hook lengths, beta-numbers and standard tableaux.
//!
//! All enumerations use one fixed total order: reverse lexicographic on the
//! parts, so `(m)` comes first and `(1^m)` last. This order refines the
//! reverse of the dominance order and is the order used for every matrix the
//! crate produces.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A weakly decreasing sequence of positive integers.
///
/// `Ord` is plain lexicographic order on the parts; [`partitions_of`] lists
/// partitions in *decreasing* `Ord` order.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition(Vec<usize>);

impl Partition {
    /// Builds a partition, dropping trailing zeros.
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.contains(&0) || parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!("{parts:?}")));
        }
        Ok(Partition(parts))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    /// Number of nonzero parts (rows of the Young diagram).
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The integer being partitioned.
    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    /// Part `i` (1-indexed), zero beyond the last row.
    pub fn part(&self, i: usize) -> usize {
        if i == 0 {
            return 0;
        }
        self.0.get(i - 1).copied().unwrap_or(0)
    }

    /// True iff `self ⊴ other`: every prefix sum of `self` is at most the
    /// corresponding prefix sum of `other`.
    pub fn is_dominated_by(&self, other: &Partition) -> Result<bool> {
        if self.size() != other.size() {
            return Err(Error::SizeMismatch(self.size(), other.size()));
        }
        let rows = self.len().max(other.len());
        let (mut a, mut b) = (0, 0);
        for i in 1..=rows {
            a += self.part(i);
            b += other.part(i);
            if a > b {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn conjugate(&self) -> Partition {
        let width = self.part(1);
        let parts = (1..=width)
            .map(|c| self.0.iter().take_while(|&&p| p >= c).count())
            .collect();
        Partition(parts)
    }

    /// Arm + leg + 1 of the cell in row `row`, column `col` (both 1-indexed).
    pub fn hook_length(&self, row: usize, col: usize) -> Result<usize> {
        if row == 0 || col == 0 || col > self.part(row) {
            return Err(Error::CellOutOfRange {
                row,
                col,
                shape: self.to_string(),
            });
        }
        let arm = self.part(row) - col;
        let leg = self.0[row..].iter().take_while(|&&p| p >= col).count();
        Ok(arm + leg + 1)
    }

    /// The `s`-element beta-set `λ_i + s - i`; for `s` equal to the number of
    /// rows these are the first-column hook lengths.
    pub fn first_column_betas(&self, s: usize) -> Result<BetaSequence> {
        if s < self.len() {
            return Err(Error::LengthTooSmall {
                given: s,
                needed: self.len(),
            });
        }
        let entries = (1..=s).map(|i| (self.part(i) + s - i) as i64).collect();
        Ok(BetaSequence(entries))
    }

    /// Generic dimension of the Specht module, via the hook length formula.
    pub fn dim_specht(&self) -> BigInt {
        let mut num: BigUint = One::one();
        for k in 2..=self.size() {
            num *= BigUint::from(k);
        }
        let mut den: BigUint = One::one();
        for (r, &len) in self.0.iter().enumerate() {
            for c in 1..=len {
                // cells always exist here
                den *= BigUint::from(self.hook_length(r + 1, c).unwrap());
            }
        }
        BigInt::from(num / den)
    }

    /// True iff no part value occurs `n` or more times.
    pub fn is_n_regular(&self, n: usize) -> bool {
        let mut run = 0;
        for (i, &p) in self.0.iter().enumerate() {
            run = if i > 0 && self.0[i - 1] == p {
                run + 1
            } else {
                1
            };
            if run >= n {
                return false;
            }
        }
        true
    }

    /// Standard tableaux of this shape, sorted lexicographically by their
    /// row-reading words.
    pub fn standard_tableaux(&self) -> Vec<StandardTableau> {
        fn fill(
            shape: &[usize],
            rows: &mut Vec<Vec<usize>>,
            next: usize,
            total: usize,
            out: &mut Vec<StandardTableau>,
        ) {
            if next > total {
                out.push(StandardTableau { rows: rows.clone() });
                return;
            }
            for r in 0..shape.len() {
                let len = rows[r].len();
                if len < shape[r] && (r == 0 || rows[r - 1].len() > len) {
                    rows[r].push(next);
                    fill(shape, rows, next + 1, total, out);
                    rows[r].pop();
                }
            }
        }
        let mut rows = vec![Vec::new(); self.len()];
        let mut out = Vec::new();
        fill(&self.0, &mut rows, 1, self.size(), &mut out);
        out.sort_by_cached_key(|t| t.reading_word());
        out
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;

    fn try_from(parts: Vec<usize>) -> Result<Self> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.0
    }
}

/// Comma-separated parts, e.g. `3,2`; the empty partition renders as `""`.
impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Partition::empty());
        }
        let parts = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad partition {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if parts.contains(&0) {
            return Err(Error::InvalidPartition(s.to_string()));
        }
        Partition::new(parts)
    }
}

/// All partitions of `m`, in reverse lexicographic order.
pub fn partitions_of(m: usize) -> Vec<Partition> {
    fn go(rest: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition(prefix.clone()));
            return;
        }
        for p in (1..=rest.min(max)).rev() {
            prefix.push(p);
            go(rest - p, p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(m, m, &mut Vec::new(), &mut out);
    out
}

/// Sign of a permutation, as used for straightened beta-sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn to_bigint(self) -> BigInt {
        match self {
            Sign::Plus => BigInt::one(),
            Sign::Minus => -BigInt::one(),
        }
    }
}

/// A finite sequence of integers read as beta-numbers. Order matters, and
/// invalid sequences (repeats, negatives) are representable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BetaSequence(pub Vec<i64>);

impl BetaSequence {
    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    /// Sorts the entries decreasingly and reads off `λ_i = β_σ(i) + i - s`.
    /// Returns `None` if an entry repeats or is negative.
    pub fn to_partition(&self) -> Option<(Sign, Partition)> {
        let b = &self.0;
        let s = b.len() as i64;
        if b.iter().any(|&x| x < 0) {
            return None;
        }
        let mut inversions = 0usize;
        for i in 0..b.len() {
            for j in i + 1..b.len() {
                if b[i] == b[j] {
                    return None;
                }
                if b[i] < b[j] {
                    inversions += 1;
                }
            }
        }
        let mut sorted = b.clone();
        sorted.sort_unstable_by(|x, y| y.cmp(x));
        let parts = sorted
            .iter()
            .enumerate()
            .map(|(i, &x)| (x + i as i64 + 1 - s) as usize)
            .collect();
        let sign = if inversions.is_multiple_of(2) {
            Sign::Plus
        } else {
            Sign::Minus
        };
        Some((
            sign,
            Partition::new(parts).expect("sorted beta-set gives a partition"),
        ))
    }

    /// The signed dimension `(-1)^σ dim S(λ)`; zero for repeated or negative entries.
    pub fn d_symbol(&self) -> BigInt {
        match self.to_partition() {
            Some((sign, p)) => sign.to_bigint() * p.dim_specht(),
            None => BigInt::default(),
        }
    }
}

/// A standard tableau stored row by row.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StandardTableau {
    rows: Vec<Vec<usize>>,
}

impl StandardTableau {
    pub fn new(rows: Vec<Vec<usize>>) -> Result<Self> {
        let t = StandardTableau { rows };
        let shape = t.shape_parts();
        let m: usize = shape.iter().sum();
        let mut seen = vec![false; m + 1];
        let ok_shape = Partition::new(shape.clone()).is_ok() && !shape.contains(&0);
        let ok_entries = t.rows.iter().flatten().all(|&x| {
            let fresh = x >= 1 && x <= m && !seen[x];
            if fresh {
                seen[x] = true;
            }
            fresh
        });
        let ok_rows = t.rows.iter().all(|r| r.windows(2).all(|w| w[0] < w[1]));
        let ok_cols = t
            .rows
            .windows(2)
            .all(|w| w[1].iter().zip(&w[0]).all(|(lo, hi)| hi < lo));
        if ok_shape && ok_entries && ok_rows && ok_cols {
            Ok(t)
        } else {
            Err(Error::InvalidPartition(format!(
                "not a standard tableau: {:?}",
                t.rows
            )))
        }
    }

    fn shape_parts(&self) -> Vec<usize> {
        self.rows.iter().map(Vec::len).collect()
    }

    pub fn shape(&self) -> Partition {
        Partition(self.shape_parts())
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    /// Entries read along rows, top row first.
    pub fn reading_word(&self) -> Vec<usize> {
        self.rows.iter().flatten().copied().collect()
    }

    pub fn transpose(&self) -> StandardTableau {
        let width = self.rows.first().map_or(0, Vec::len);
        let rows = (0..width)
            .map(|c| {
                self.rows
                    .iter()
                    .take_while(|r| r.len() > c)
                    .map(|r| r[c])
                    .collect()
            })
            .collect();
        StandardTableau { rows }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn enumeration() {
        assert_eq!(partitions_of(0), vec![Partition::empty()]);
        assert_eq!(partitions_of(2), vec![p("2"), p("1,1")]);
        // p(m) for m = 0..=10
        let counts: Vec<usize> = (0..=10).map(|m| partitions_of(m).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]);
    }

    #[test]
    fn dominance_examples() {
        assert!(p("1,1").is_dominated_by(&p("2")).unwrap());
        assert!(p("3,1").is_dominated_by(&p("3,1")).unwrap());
        assert!(!p("3,1").is_dominated_by(&p("2,2")).unwrap());
        assert_eq!(
            p("2").is_dominated_by(&p("2,1")),
            Err(Error::SizeMismatch(2, 3))
        );
    }

    #[test]
    fn hooks() {
        assert_eq!(p("3,2").hook_length(1, 1).unwrap(), 4);
        assert_eq!(p("3,2").hook_length(2, 1).unwrap(), 2);
        assert_eq!(p("1").hook_length(1, 1).unwrap(), 1);
        assert!(p("3,2").hook_length(2, 3).is_err());
        assert!(p("3,2").hook_length(0, 1).is_err());
    }

    #[test]
    fn betas() {
        assert_eq!(p("3,2").first_column_betas(2).unwrap().0, vec![4, 2]);
        assert_eq!(p("3,2").first_column_betas(3).unwrap().0, vec![5, 3, 0]);
        assert_eq!(Partition::empty().first_column_betas(1).unwrap().0, vec![0]);
        assert!(p("3,2,1").first_column_betas(2).is_err());

        assert_eq!(
            BetaSequence(vec![3, 0]).to_partition(),
            Some((Sign::Plus, p("2")))
        );
        assert_eq!(
            BetaSequence(vec![0, 3]).to_partition(),
            Some((Sign::Minus, p("2")))
        );
        assert_eq!(BetaSequence(vec![2, 2]).to_partition(), None);
        assert_eq!(BetaSequence(vec![2, -1]).to_partition(), None);
    }

    #[test]
    fn d_symbol_examples() {
        assert_eq!(BetaSequence(vec![4, 2]).d_symbol(), BigInt::from(5));
        assert_eq!(BetaSequence(vec![2, 4]).d_symbol(), BigInt::from(-5));
        assert_eq!(BetaSequence(vec![3, 3]).d_symbol(), BigInt::from(0));
    }

    #[test]
    fn dims_and_tableaux() {
        assert_eq!(p("4").dim_specht(), BigInt::from(1));
        assert_eq!(p("1,1,1").dim_specht(), BigInt::from(1));
        assert_eq!(p("3,2").dim_specht(), BigInt::from(5));
        assert_eq!(p("2").standard_tableaux().len(), 1);
        assert_eq!(p("2,1").standard_tableaux().len(), 2);
        assert_eq!(p("3,2").standard_tableaux().len(), 5);
        let words: Vec<_> = p("2,1")
            .standard_tableaux()
            .iter()
            .map(|t| t.reading_word())
            .collect();
        assert_eq!(words, vec![vec![1, 2, 3], vec![1, 3, 2]]);
    }

    #[test]
    fn regularity_and_conjugate() {
        assert!(!p("2,1,1").is_n_regular(2));
        assert!(p("3,2").is_n_regular(2));
        assert!(!p("2,2,2").is_n_regular(3));
        assert!(p("2,2,1").is_n_regular(3));
        assert_eq!(p("3,2").conjugate(), p("2,2,1"));
        assert_eq!(Partition::empty().conjugate(), Partition::empty());
        assert_eq!(p("1,1,1").conjugate(), p("3"));
    }

    #[test]
    fn parsing() {
        assert_eq!(p(""), Partition::empty());
        assert_eq!(p("3, 2").to_string(), "3,2");
        assert!("2,3".parse::<Partition>().is_err());
        assert!("2,x".parse::<Partition>().is_err());
        assert!("2,0".parse::<Partition>().is_err());
        assert_eq!(Partition::new(vec![2, 1, 0, 0]).unwrap(), p("2,1"));
    }

    #[test]
    fn tableau_transpose() {
        let t = StandardTableau::new(vec![vec![1, 2, 4], vec![3, 5]]).unwrap();
        assert_eq!(t.transpose().rows(), &[vec![1, 3], vec![2, 5], vec![4]]);
        assert!(StandardTableau::new(vec![vec![2, 1]]).is_err());
        assert!(StandardTableau::new(vec![vec![1, 2], vec![3, 4, 5]]).is_err());
    }
}

//! Square matrices of Laurent polynomials indexed by partitions, with the
//! JSON, CSV and LaTeX renderings shared by the bar and decomposition
//! matrices.

use std::collections::HashMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::partition::Partition;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    order: Vec<Partition>,
    index: HashMap<Partition, usize>,
    entries: Vec<Vec<LaurentPoly>>,
}

impl PolyMatrix {
    pub fn zeros(order: Vec<Partition>) -> Self {
        let n = order.len();
        let index = order
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, p)| (p, i))
            .collect();
        PolyMatrix {
            order,
            index,
            entries: vec![vec![LaurentPoly::zero(); n]; n],
        }
    }

    pub fn identity(order: Vec<Partition>) -> Self {
        let mut out = PolyMatrix::zeros(order);
        for i in 0..out.dim() {
            out.entries[i][i] = LaurentPoly::one();
        }
        out
    }

    pub fn from_rows(order: Vec<Partition>, entries: Vec<Vec<LaurentPoly>>) -> Result<Self> {
        let n = order.len();
        if entries.len() != n || entries.iter().any(|r| r.len() != n) {
            return Err(Error::Parse(format!("matrix is not {n}x{n}")));
        }
        let mut out = PolyMatrix::zeros(order);
        out.entries = entries;
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.order.len()
    }

    pub fn order(&self) -> &[Partition] {
        &self.order
    }

    pub fn index_of(&self, p: &Partition) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn get(&self, row: usize, col: usize) -> &LaurentPoly {
        &self.entries[row][col]
    }

    /// Entry by partition labels; zero if either label is not indexed.
    pub fn get_by(&self, row: &Partition, col: &Partition) -> LaurentPoly {
        match (self.index_of(row), self.index_of(col)) {
            (Some(r), Some(c)) => self.entries[r][c].clone(),
            _ => LaurentPoly::zero(),
        }
    }

    pub fn set(&mut self, row: usize, col: usize, value: LaurentPoly) {
        self.entries[row][col] = value;
    }

    pub fn rows(&self) -> &[Vec<LaurentPoly>] {
        &self.entries
    }

    pub fn map<T>(&self, f: impl Fn(&LaurentPoly) -> T) -> Vec<Vec<T>> {
        self.entries
            .iter()
            .map(|r| r.iter().map(&f).collect())
            .collect()
    }

    pub fn map_entries(&self, f: impl Fn(&LaurentPoly) -> LaurentPoly) -> PolyMatrix {
        let mut out = self.clone();
        out.entries = self.map(f);
        out
    }

    /// Entrywise `q ↦ q⁻¹`.
    pub fn bar(&self) -> PolyMatrix {
        self.map_entries(LaurentPoly::bar)
    }

    pub fn is_identity(&self) -> bool {
        self.entries.iter().enumerate().all(|(r, row)| {
            row.iter()
                .enumerate()
                .all(|(c, x)| if r == c { x.is_one() } else { x.is_zero() })
        })
    }

    pub fn mul(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if self.order != other.order {
            return Err(Error::Internal(
                "multiplying matrices with different index orders".into(),
            ));
        }
        let n = self.dim();
        let mut out = PolyMatrix::zeros(self.order.clone());
        for r in 0..n {
            for k in 0..n {
                let a = &self.entries[r][k];
                if a.is_zero() {
                    continue;
                }
                for c in 0..n {
                    let b = &other.entries[k][c];
                    if !b.is_zero() {
                        out.entries[r][c] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn to_document(&self, n: usize, m: usize) -> MatrixDocument {
        MatrixDocument {
            n,
            m,
            order: self.order.iter().map(|p| p.parts().to_vec()).collect(),
            entries: self.map(|x| x.to_string()),
        }
    }

    /// `{n, m, order, entries}` with canonical polynomial strings.
    pub fn to_json(&self, n: usize, m: usize) -> String {
        serde_json::to_string_pretty(&self.to_document(n, m)).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<(usize, usize, PolyMatrix)> {
        let doc: MatrixDocument =
            serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        doc.into_matrix()
    }

    /// Header row `n=<n>` followed by the column labels; each later row starts
    /// with its row label.
    pub fn to_csv(&self, n: usize) -> String {
        let mut w = csv::WriterBuilder::new()
            .flexible(true)
            .from_writer(Vec::new());
        let mut header = vec![format!("n={n}")];
        header.extend(self.order.iter().map(|p| p.to_string()));
        w.write_record(&header).expect("in-memory write");
        for (p, row) in self.order.iter().zip(&self.entries) {
            let mut rec = vec![p.to_string()];
            rec.extend(row.iter().map(|x| x.to_string()));
            w.write_record(&rec).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
    }

    pub fn from_csv(s: &str) -> Result<(usize, PolyMatrix)> {
        let perr = |e: csv::Error| Error::Parse(e.to_string());
        let mut r = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .from_reader(s.as_bytes());
        let mut records = r.records();
        let header = records
            .next()
            .ok_or_else(|| Error::Parse("empty CSV".into()))?
            .map_err(perr)?;
        let n: usize = header
            .get(0)
            .and_then(|h| h.strip_prefix("n="))
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| Error::Parse("CSV header must start with n=<modulus>".into()))?;
        let order = header
            .iter()
            .skip(1)
            .map(str::parse)
            .collect::<Result<Vec<Partition>>>()?;
        let mut entries = Vec::new();
        for (i, rec) in records.enumerate() {
            let rec = rec.map_err(perr)?;
            let label: Partition = rec.get(0).unwrap_or("").parse()?;
            if order.get(i) != Some(&label) {
                return Err(Error::Parse(format!(
                    "row {i} has label {label}, expected the column order"
                )));
            }
            entries.push(
                rec.iter()
                    .skip(1)
                    .map(str::parse)
                    .collect::<Result<Vec<LaurentPoly>>>()?,
            );
        }
        Ok((n, PolyMatrix::from_rows(order, entries)?))
    }

    pub fn to_latex(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "\\begin{{tabular}}{{c|{}}}\n",
            "c".repeat(self.dim())
        ));
        let label = |p: &Partition| {
            if p.is_empty() {
                "$\\emptyset$".to_string()
            } else {
                format!("$({p})$")
            }
        };
        let header: Vec<String> = self.order.iter().map(label).collect();
        out.push_str(&format!(" & {} \\\\\n\\hline\n", header.join(" & ")));
        for (p, row) in self.order.iter().zip(&self.entries) {
            let cells: Vec<String> = row
                .iter()
                .map(|x| {
                    if x.is_zero() {
                        ".".to_string()
                    } else {
                        format!("${}$", latex_poly(x))
                    }
                })
                .collect();
            out.push_str(&format!("{} & {} \\\\\n", label(p), cells.join(" & ")));
        }
        out.push_str("\\end{tabular}\n");
        out
    }
}

/// Serialized form of a partition-indexed matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixDocument {
    pub n: usize,
    pub m: usize,
    pub order: Vec<Vec<usize>>,
    pub entries: Vec<Vec<String>>,
}

impl MatrixDocument {
    pub fn into_matrix(self) -> Result<(usize, usize, PolyMatrix)> {
        let order = self
            .order
            .into_iter()
            .map(Partition::new)
            .collect::<Result<Vec<_>>>()?;
        if order.iter().any(|p| p.size() != self.m) {
            return Err(Error::Parse(format!(
                "order contains a partition not of size {}",
                self.m
            )));
        }
        let entries = self
            .entries
            .iter()
            .map(|r| {
                r.iter()
                    .map(|s| s.parse())
                    .collect::<Result<Vec<LaurentPoly>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((self.n, self.m, PolyMatrix::from_rows(order, entries)?))
    }
}

fn latex_poly(p: &LaurentPoly) -> String {
    let mut out = String::new();
    for (i, (e, c)) in p.terms().enumerate() {
        let neg = c < &BigInt::from(0);
        out.push_str(match (i, neg) {
            (0, true) => "-",
            (0, false) => "",
            (_, true) => " - ",
            (_, false) => " + ",
        });
        let abs = if neg { -c } else { c.clone() };
        let one = abs == BigInt::from(1);
        match e {
            0 => out.push_str(&abs.to_string()),
            _ => {
                if !one {
                    out.push_str(&abs.to_string());
                }
                if e == 1 {
                    out.push('q');
                } else {
                    out.push_str(&format!("q^{{{e}}}"));
                }
            }
        }
    }
    out
}

/// Determinant by fraction-free (Bareiss) elimination; every division is
/// exact in `ℤ[q, q⁻¹]`.
pub fn determinant(rows: &[Vec<LaurentPoly>]) -> Result<LaurentPoly> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::Internal("determinant of a non-square matrix".into()));
    }
    if n == 0 {
        return Ok(LaurentPoly::one());
    }
    let mut a = rows.to_vec();
    let mut sign = 1i64;
    let mut prev = LaurentPoly::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return Ok(LaurentPoly::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = num
                    .div_exact(&prev)
                    .ok_or_else(|| Error::Internal("inexact Bareiss division".into()))?;
            }
            a[i][k] = LaurentPoly::zero();
        }
        prev = a[k][k].clone();
    }
    Ok(a[n - 1][n - 1].scale(&BigInt::from(sign)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::partitions_of;

    fn lp(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    fn sample() -> PolyMatrix {
        let mut m = PolyMatrix::identity(partitions_of(3));
        m.set(1, 0, lp("q - q^-1"));
        m.set(2, 0, lp("-2*q^3 + 7"));
        m.set(2, 1, lp("q^-2"));
        m
    }

    #[test]
    fn renderings_round_trip() {
        let m = sample();
        let (n, deg, back) = PolyMatrix::from_json(&m.to_json(4, 3)).unwrap();
        assert_eq!((n, deg), (4, 3));
        assert_eq!(back, m);
        assert_eq!(back.to_json(4, 3), m.to_json(4, 3));

        let csv = m.to_csv(4);
        let (n, back) = PolyMatrix::from_csv(&csv).unwrap();
        assert_eq!(n, 4);
        assert_eq!(back, m);
        assert_eq!(back.to_csv(4), csv);

        let empty = PolyMatrix::identity(partitions_of(0));
        let (_, back) = PolyMatrix::from_csv(&empty.to_csv(2)).unwrap();
        assert_eq!(back, empty);
    }

    #[test]
    fn csv_layout() {
        let m = PolyMatrix::identity(partitions_of(2));
        assert_eq!(m.to_csv(2), "n=2,2,\"1,1\"\n2,1,0\n\"1,1\",0,1\n");
    }

    #[test]
    fn latex_layout() {
        let tex = sample().to_latex();
        assert!(tex.starts_with("\\begin{tabular}{c|ccc}"));
        assert!(tex.contains("$-q^{-1} + q$"));
        assert!(tex.contains("$7 - 2q^{3}$"));
        assert!(tex.trim_end().ends_with("\\end{tabular}"));
    }

    #[test]
    fn rejects_malformed_documents() {
        assert!(PolyMatrix::from_json("{}").is_err());
        assert!(
            PolyMatrix::from_json(r#"{"n":2,"m":2,"order":[[2]],"entries":[["1","0"]]}"#).is_err()
        );
        assert!(PolyMatrix::from_json(r#"{"n":2,"m":2,"order":[[2]],"entries":[["x"]]}"#).is_err());
        assert!(PolyMatrix::from_csv("2,1\n").is_err());
    }

    #[test]
    fn bareiss_determinant() {
        let rows = vec![
            vec![lp("q"), lp("1"), lp("0")],
            vec![lp("1"), lp("q"), lp("1")],
            vec![lp("0"), lp("1"), lp("q")],
        ];
        assert_eq!(determinant(&rows).unwrap(), lp("q^3 - 2*q"));
        let swapped = vec![vec![lp("0"), lp("1")], vec![lp("1"), lp("0")]];
        assert_eq!(determinant(&swapped).unwrap(), lp("-1"));
        let singular = vec![vec![lp("q"), lp("q^2")], vec![lp("1"), lp("q")]];
        assert!(determinant(&singular).unwrap().is_zero());
        assert!(determinant(&[]).unwrap().is_one());
    }
}

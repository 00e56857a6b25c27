//! Laurent polynomials in `q` with arbitrary-precision integer coefficients.
//!
//! Besides ring arithmetic this module provides quantum integers, cyclotomic
//! polynomials and the `Φ_n`-adic valuation. The canonical text form lists
//! terms by increasing exponent, e.g. `q^-1 - q + 2*q^3`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer, MapAccess, Visitor};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An element of `ℤ[q, q⁻¹]`. Only nonzero coefficients are stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        LaurentPoly::constant(1)
    }

    pub fn q() -> Self {
        LaurentPoly::monomial(1, 1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        LaurentPoly::monomial(c, 0)
    }

    /// `c · q^exp`.
    pub fn monomial(c: impl Into<BigInt>, exp: i64) -> Self {
        let mut p = LaurentPoly::zero();
        p.add_term(exp, c.into());
        p
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs; repeated
    /// exponents are summed.
    pub fn from_terms<C: Into<BigInt>>(terms: impl IntoIterator<Item = (i64, C)>) -> Self {
        let mut p = LaurentPoly::zero();
        for (e, c) in terms {
            p.add_term(e, c.into());
        }
        p
    }

    pub fn add_term(&mut self, exp: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(exp).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    pub fn coeff(&self, exp: i64) -> BigInt {
        self.terms.get(&exp).cloned().unwrap_or_default()
    }

    /// Terms by increasing exponent.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &BigInt)> + '_ {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// True iff every exponent is non-negative.
    pub fn is_polynomial(&self) -> bool {
        self.min_exp().is_none_or(|e| e >= 0)
    }

    /// Substitutes `q ↦ q⁻¹`.
    pub fn bar(&self) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(&e, c)| (-e, c.clone())).collect(),
        }
    }

    /// Value at `q = 1`.
    pub fn eval_at_one(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Value of the formal derivative at `q = 1`.
    pub fn derivative_at_one(&self) -> BigInt {
        self.terms.iter().map(|(&e, c)| c * e).sum()
    }

    /// Multiplies by `q^shift`.
    pub fn shift(&self, shift: i64) -> Self {
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .map(|(&e, c)| (e + shift, c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(&e, x)| (e, x * c)).collect(),
        }
    }

    /// Gcd of the coefficients (zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        self.terms.values().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Exact quotient `self / divisor` in `ℤ[q, q⁻¹]`, or `None` if the
    /// divisor does not divide.
    pub fn div_exact(&self, divisor: &LaurentPoly) -> Option<LaurentPoly> {
        let d_lo = divisor.min_exp()?;
        if self.is_zero() {
            return Some(LaurentPoly::zero());
        }
        let d_hi = divisor.max_exp().unwrap();
        let lead = divisor.terms[&d_hi].clone();
        let mut rem = self.clone();
        let mut quot = LaurentPoly::zero();
        let lo = self.min_exp().unwrap();
        // every quotient exponent e satisfies e + d_lo >= lo
        while let Some(hi) = rem.max_exp() {
            if hi - d_hi + d_lo < lo {
                return None;
            }
            let (c, r) = rem.terms[&hi].div_rem(&lead);
            if !r.is_zero() {
                return None;
            }
            let e = hi - d_hi;
            for (de, dc) in divisor.terms() {
                rem.add_term(e + de, -(dc * &c));
            }
            quot.add_term(e, c);
        }
        Some(quot)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = LaurentPoly::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Returns a JSON object mapping exponents (as strings) to coefficients.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        LaurentPoly::deserialize(v).map_err(|e| Error::Parse(e.to_string()))
    }
}

impl Zero for LaurentPoly {
    fn zero() -> Self {
        LaurentPoly::zero()
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for LaurentPoly {
    fn one() -> Self {
        LaurentPoly::one()
    }
}

impl From<i64> for LaurentPoly {
    fn from(c: i64) -> Self {
        LaurentPoly::constant(c)
    }
}

impl From<BigInt> for LaurentPoly {
    fn from(c: BigInt) -> Self {
        LaurentPoly::constant(c)
    }
}

impl<'a> Add<&'a LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;

    fn add(self, rhs: &'a LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<'a> Sub<&'a LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;

    fn sub(self, rhs: &'a LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<'a> Mul<&'a LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;

    fn mul(self, rhs: &'a LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term(ea + eb, ca * cb);
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;

    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(&e, c)| (e, -c)).collect(),
        }
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        for (&e, c) in &rhs.terms {
            self.add_term(e, c.clone());
        }
    }
}

impl SubAssign<&LaurentPoly> for LaurentPoly {
    fn sub_assign(&mut self, rhs: &LaurentPoly) {
        for (&e, c) in &rhs.terms {
            self.add_term(e, -c);
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: &'a LaurentPoly) -> LaurentPoly {
                (&self).$method(rhs)
            }
        }
        impl $tr<LaurentPoly> for &LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for LaurentPoly {
    type Output = LaurentPoly;

    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl AddAssign for LaurentPoly {
    fn add_assign(&mut self, rhs: LaurentPoly) {
        *self += &rhs;
    }
}

impl SubAssign for LaurentPoly {
    fn sub_assign(&mut self, rhs: LaurentPoly) {
        *self -= &rhs;
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (&e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let abs = c.abs();
            let var = match e {
                0 => None,
                1 => Some("q".to_string()),
                _ => Some(format!("q^{e}")),
            };
            match var {
                None => write!(f, "{abs}")?,
                Some(v) if abs.is_one() => f.write_str(&v)?,
                Some(v) => write!(f, "{abs}*{v}")?,
            }
        }
        Ok(())
    }
}

impl FromStr for LaurentPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Parse(format!("bad Laurent polynomial {s:?}"));
        if compact.is_empty() {
            return Err(bad());
        }
        // split into signed terms; a sign right after '^' belongs to the exponent
        let mut pieces = Vec::new();
        let mut start = 0;
        let bytes = compact.as_bytes();
        for i in 1..bytes.len() {
            if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'^' {
                pieces.push(&compact[start..i]);
                start = i;
            }
        }
        pieces.push(&compact[start..]);

        let mut out = LaurentPoly::zero();
        for piece in pieces {
            let (negative, body) = match piece.as_bytes().first() {
                Some(b'-') => (true, &piece[1..]),
                Some(b'+') => (false, &piece[1..]),
                _ => (false, piece),
            };
            if body.is_empty() {
                return Err(bad());
            }
            let (coef, var) = match body.find('q') {
                None => (body, None),
                Some(0) => ("1", Some(&body[1..])),
                Some(pos) => {
                    let c = body[..pos].strip_suffix('*').ok_or_else(bad)?;
                    (c, Some(&body[pos + 1..]))
                }
            };
            let mut c: BigInt = coef.parse().map_err(|_| bad())?;
            let e: i64 = match var {
                None => 0,
                Some("") => 1,
                Some(rest) => rest
                    .strip_prefix('^')
                    .ok_or_else(bad)?
                    .parse()
                    .map_err(|_| bad())?,
            };
            if negative {
                c = -c;
            }
            out.add_term(e, c);
        }
        Ok(out)
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.terms.len()))?;
        for (e, c) in &self.terms {
            match c.to_i64() {
                Some(small) => map.serialize_entry(&e.to_string(), &small)?,
                None => map.serialize_entry(&e.to_string(), &c.to_string())?,
            }
        }
        map.end()
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CoeffRepr {
    Small(i64),
    Big(String),
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct PolyVisitor;

        impl<'de> Visitor<'de> for PolyVisitor {
            type Value = LaurentPoly;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a map from exponent strings to integer coefficients")
            }

            fn visit_map<A: MapAccess<'de>>(
                self,
                mut access: A,
            ) -> std::result::Result<LaurentPoly, A::Error> {
                let mut p = LaurentPoly::zero();
                while let Some((k, v)) = access.next_entry::<String, CoeffRepr>()? {
                    let e: i64 = k.parse().map_err(de::Error::custom)?;
                    let c = match v {
                        CoeffRepr::Small(c) => BigInt::from(c),
                        CoeffRepr::Big(s) => s.parse().map_err(de::Error::custom)?,
                    };
                    p.add_term(e, c);
                }
                Ok(p)
            }
        }

        deserializer.deserialize_map(PolyVisitor)
    }
}

/// `[h] = 1 + q + … + q^(h-1)`.
pub fn quantum_integer(h: i64) -> Result<LaurentPoly> {
    if h < 1 {
        return Err(Error::InvalidQuantumInteger(h));
    }
    Ok(LaurentPoly::from_terms((0..h).map(|e| (e, 1))))
}

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// The `n`-th cyclotomic polynomial, by dividing `qⁿ - 1` by `Φ_d` for every
/// proper divisor `d` of `n`.
pub fn cyclotomic(n: u64) -> Result<LaurentPoly> {
    if n < 1 {
        return Err(Error::InvalidModulus(n as i64, 1));
    }
    let mut table: BTreeMap<u64, LaurentPoly> = BTreeMap::new();
    for d in divisors(n) {
        let mut phi = LaurentPoly::from_terms([(d as i64, 1), (0, -1)]);
        for e in divisors(d).into_iter().filter(|&e| e < d) {
            phi = phi
                .div_exact(&table[&e])
                .expect("cyclotomic factors divide q^d - 1");
        }
        table.insert(d, phi);
    }
    Ok(table.remove(&n).unwrap())
}

/// Multiplicity of `Φ_n` in `f` (q-powers are units and contribute nothing).
pub fn cyclotomic_valuation(f: &LaurentPoly, n: u64) -> Result<u32> {
    if n < 2 {
        return Err(Error::InvalidModulus(n as i64, 2));
    }
    if f.is_zero() {
        return Err(Error::ZeroValuation);
    }
    let phi = cyclotomic(n)?;
    let mut rest = f.shift(-f.min_exp().unwrap());
    let mut k = 0;
    while let Some(q) = rest.div_exact(&phi) {
        rest = q;
        k += 1;
    }
    Ok(k)
}

/// `ν_{Φ_n}([h])`, which is 1 exactly when `n` divides `h`.
pub fn nu_quantum(h: i64, n: i64) -> Result<u32> {
    if n < 2 {
        return Err(Error::InvalidModulus(n, 2));
    }
    if h < 1 {
        return Err(Error::InvalidQuantumInteger(h));
    }
    Ok(u32::from(h % n == 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lp(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    #[test]
    fn arithmetic() {
        assert_eq!(&lp("q") * &lp("q^-1"), LaurentPoly::one());
        assert!((lp("q - q^-1") + lp("q^-1 - q")).is_zero());
        assert_eq!(lp("q^-2 - 1").pow(2), lp("q^-4 - 2*q^-2 + 1"));
    }

    #[test]
    fn bar_examples() {
        assert_eq!(lp("q - q^-1").bar(), lp("q^-1 - q"));
        assert_eq!(LaurentPoly::one().bar(), LaurentPoly::one());
        assert_eq!(lp("q^2 + q^-2").bar(), lp("q^2 + q^-2"));
    }

    #[test]
    fn evaluations() {
        assert_eq!(lp("q - q^-1").derivative_at_one(), BigInt::from(2));
        assert_eq!(lp("7").derivative_at_one(), BigInt::from(0));
        assert_eq!(lp("q^2").derivative_at_one(), BigInt::from(2));
        assert_eq!(lp("q - q^-1").eval_at_one(), BigInt::from(0));
        assert_eq!(lp("1 + q + q^2").eval_at_one(), BigInt::from(3));
        assert_eq!(LaurentPoly::zero().eval_at_one(), BigInt::from(0));
    }

    #[test]
    fn quantum_integers() {
        assert_eq!(quantum_integer(1).unwrap(), LaurentPoly::one());
        assert_eq!(quantum_integer(3).unwrap(), lp("1 + q + q^2"));
        assert_eq!(quantum_integer(4).unwrap(), lp("1 + q + q^2 + q^3"));
        assert!(quantum_integer(0).is_err());
    }

    #[test]
    fn cyclotomics() {
        assert_eq!(cyclotomic(1).unwrap(), lp("q - 1"));
        assert_eq!(cyclotomic(2).unwrap(), lp("q + 1"));
        assert_eq!(cyclotomic(6).unwrap(), lp("q^2 - q + 1"));
        assert_eq!(cyclotomic(12).unwrap(), lp("q^4 - q^2 + 1"));
        for h in 1..=40u64 {
            let prod = (1..=h)
                .filter(|d| h % d == 0)
                .fold(LaurentPoly::one(), |acc, d| acc * cyclotomic(d).unwrap());
            assert_eq!(
                prod,
                LaurentPoly::from_terms([(h as i64, 1), (0, -1)]),
                "h = {h}"
            );
        }
    }

    #[test]
    fn valuations() {
        assert_eq!(
            cyclotomic_valuation(&quantum_integer(4).unwrap(), 2).unwrap(),
            1
        );
        assert_eq!(
            cyclotomic_valuation(&quantum_integer(3).unwrap(), 2).unwrap(),
            0
        );
        assert_eq!(cyclotomic_valuation(&lp("q + 1").pow(2), 2).unwrap(), 2);
        assert_eq!(cyclotomic_valuation(&lp("q^-3 + q^-2"), 2).unwrap(), 1);
        assert_eq!(
            cyclotomic_valuation(&LaurentPoly::zero(), 2),
            Err(Error::ZeroValuation)
        );
        assert_eq!(nu_quantum(4, 2).unwrap(), 1);
        assert_eq!(nu_quantum(3, 2).unwrap(), 0);
        assert_eq!(nu_quantum(6, 3).unwrap(), 1);
        for h in 1..=40 {
            for n in 2..=12 {
                let v = cyclotomic_valuation(&quantum_integer(h).unwrap(), n as u64).unwrap();
                assert_eq!(v, nu_quantum(h, n).unwrap(), "h={h} n={n}");
            }
        }
    }

    #[test]
    fn exact_division() {
        let f = lp("q^-2 - 1") * lp("3*q + 2");
        assert_eq!(f.div_exact(&lp("3*q + 2")), Some(lp("q^-2 - 1")));
        assert_eq!(lp("q^2 + 1").div_exact(&lp("q + 1")), None);
        assert_eq!(lp("2*q").div_exact(&lp("4")), None);
        assert_eq!(lp("4*q^3").div_exact(&lp("2*q^5")), Some(lp("2*q^-2")));
    }

    #[test]
    fn text_rendering() {
        assert_eq!(lp("q^-1 - q + 2*q^3").to_string(), "q^-1 - q + 2*q^3");
        assert_eq!(lp("-q^-1").to_string(), "-q^-1");
        assert_eq!(LaurentPoly::zero().to_string(), "0");
        assert_eq!(lp("-3 + q - 5*q^2").to_string(), "-3 + q - 5*q^2");
        assert!("q^".parse::<LaurentPoly>().is_err());
        assert!("".parse::<LaurentPoly>().is_err());
        assert!("2q".parse::<LaurentPoly>().is_err());
    }

    #[test]
    fn json_rendering() {
        let p = lp("q^-1 - q + 2*q^3");
        assert_eq!(p.to_json().to_string(), r#"{"-1":1,"1":-1,"3":2}"#);
        let big = LaurentPoly::monomial(
            "123456789012345678901234567890".parse::<BigInt>().unwrap(),
            2,
        );
        assert_eq!(LaurentPoly::from_json(&big.to_json()).unwrap(), big);
    }

    fn arb_poly() -> impl Strategy<Value = LaurentPoly> {
        prop::collection::vec((-6i64..6, -20i64..20), 0..6).prop_map(LaurentPoly::from_terms)
    }

    proptest! {
        #[test]
        fn bar_is_involutive_ring_hom(f in arb_poly(), g in arb_poly()) {
            prop_assert_eq!(f.bar().bar(), f.clone());
            prop_assert_eq!((&f * &g).bar(), f.bar() * g.bar());
            prop_assert_eq!((&f + &g).bar(), f.bar() + g.bar());
        }

        #[test]
        fn derivative_leibniz(f in arb_poly(), g in arb_poly()) {
            let lhs = (&f * &g).derivative_at_one();
            let rhs = f.derivative_at_one() * g.eval_at_one() + f.eval_at_one() * g.derivative_at_one();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn renderings_round_trip(f in arb_poly()) {
            prop_assert_eq!(f.to_string().parse::<LaurentPoly>().unwrap(), f.clone());
            prop_assert_eq!(LaurentPoly::from_json(&f.to_json()).unwrap(), f);
        }

        #[test]
        fn product_divides_exactly(f in arb_poly(), g in arb_poly()) {
            prop_assume!(!g.is_zero());
            prop_assert_eq!((&f * &g).div_exact(&g), Some(f));
        }
    }
}

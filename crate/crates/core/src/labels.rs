//! Multiplicative labels: a nonzero rational times a product of symbols
//! raised to integer powers.  Symbols are either free generators
//! (`a0`, `b`, ...) or simplex coordinates (`t1`, `t2`, ...).

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SymbolKind {
    Generator,
    Simplex,
}

/// A symbol name.  Names of the form `t<digits>` are simplex coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Symbol(String);

impl Symbol {
    pub fn new(name: impl Into<String>) -> Self {
        Symbol(name.into())
    }

    /// Simplex coordinate `t<i>`.
    pub fn t(i: usize) -> Self {
        Symbol(format!("t{i}"))
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    pub fn kind(&self) -> SymbolKind {
        if self.simplex_index().is_some() {
            SymbolKind::Simplex
        } else {
            SymbolKind::Generator
        }
    }

    pub fn simplex_index(&self) -> Option<usize> {
        let rest = self.0.strip_prefix('t')?;
        if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        rest.parse().ok()
    }

    // (alphabetic prefix, numeric suffix) for natural ordering: a2 < a10.
    fn split(&self) -> (&str, Option<u64>) {
        let cut = self.0.trim_end_matches(|c: char| c.is_ascii_digit()).len();
        let (head, tail) = self.0.split_at(cut);
        (head, tail.parse().ok())
    }
}

impl Ord for Symbol {
    fn cmp(&self, other: &Self) -> Ordering {
        self.kind()
            .cmp(&other.kind())
            .then_with(|| self.split().cmp(&other.split()))
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Symbol {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// An element of the label group: `coeff * prod sym^exp`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    coeff: BigRational,
    exps: BTreeMap<Symbol, i64>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { coeff: BigRational::one(), exps: BTreeMap::new() }
    }

    pub fn new(coeff: BigRational, exps: BTreeMap<Symbol, i64>) -> Result<Self, Error> {
        if coeff.is_zero() {
            return Err(Error::ZeroLabel);
        }
        let exps = exps.into_iter().filter(|(_, e)| *e != 0).collect();
        Ok(Monomial { coeff, exps })
    }

    pub fn constant(c: BigRational) -> Result<Self, Error> {
        Self::new(c, BTreeMap::new())
    }

    pub fn int(c: i64) -> Self {
        Self::constant(BigRational::from_integer(c.into())).expect("nonzero integer label")
    }

    pub fn sym(name: &str) -> Self {
        Self::sym_pow(Symbol::new(name), 1)
    }

    pub fn sym_pow(s: Symbol, e: i64) -> Self {
        let mut exps = BTreeMap::new();
        if e != 0 {
            exps.insert(s, e);
        }
        Monomial { coeff: BigRational::one(), exps }
    }

    pub fn coeff(&self) -> &BigRational {
        &self.coeff
    }

    pub fn exps(&self) -> &BTreeMap<Symbol, i64> {
        &self.exps
    }

    pub fn exp_of(&self, s: &Symbol) -> i64 {
        self.exps.get(s).copied().unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty() && self.coeff.is_one()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut exps = self.exps.clone();
        for (s, e) in &other.exps {
            let slot = exps.entry(s.clone()).or_insert(0);
            *slot = slot.checked_add(*e).expect("exponent overflow");
            if *slot == 0 {
                exps.remove(s);
            }
        }
        Monomial { coeff: &self.coeff * &other.coeff, exps }
    }

    pub fn inv(&self) -> Monomial {
        Monomial {
            coeff: self.coeff.recip(),
            exps: self.exps.iter().map(|(s, e)| (s.clone(), e.checked_neg().expect("exponent overflow"))).collect(),
        }
    }

    pub fn div(&self, other: &Monomial) -> Monomial {
        self.mul(&other.inv())
    }

    pub fn pow(&self, k: i64) -> Monomial {
        if k == 0 {
            return Monomial::one();
        }
        let coeff = if k > 0 {
            num_traits::pow(self.coeff.clone(), k as usize)
        } else {
            num_traits::pow(self.coeff.recip(), k.unsigned_abs() as usize)
        };
        let exps = self
            .exps
            .iter()
            .map(|(s, e)| (s.clone(), e.checked_mul(k).expect("exponent overflow")))
            .collect();
        Monomial { coeff, exps }
    }

    /// True if no simplex coordinate occurs.
    pub fn is_constant_in_simplex(&self) -> bool {
        self.exps.keys().all(|s| s.kind() == SymbolKind::Generator)
    }

    pub fn symbols(&self) -> impl Iterator<Item = &Symbol> {
        self.exps.keys()
    }

    /// Multiplicative substitution of symbols.
    pub fn substitute(&self, rule: &BTreeMap<Symbol, ExtLabel>) -> Result<ExtLabel, Error> {
        let mut out = Monomial { coeff: self.coeff.clone(), exps: BTreeMap::new() };
        // net order of vanishing: positive means the value is 0
        let mut order: i64 = 0;
        let mut degenerate = false;
        for (s, e) in &self.exps {
            match rule.get(s) {
                None => out = out.mul(&Monomial::sym_pow(s.clone(), *e)),
                Some(ExtLabel::Regular(m)) => out = out.mul(&m.pow(*e)),
                Some(ExtLabel::Zero) => {
                    degenerate = true;
                    order += e;
                }
                Some(ExtLabel::Infinity) => {
                    degenerate = true;
                    order -= e;
                }
            }
        }
        match order.cmp(&0) {
            Ordering::Greater => Ok(ExtLabel::Zero),
            Ordering::Less => Ok(ExtLabel::Infinity),
            Ordering::Equal if degenerate => Err(Error::IndeterminateForm(self.to_string())),
            Ordering::Equal => Ok(ExtLabel::Regular(out)),
        }
    }

    pub fn eval(&self, assignment: &BTreeMap<Symbol, f64>) -> Result<f64, Error> {
        let mut v = ratio_to_f64(&self.coeff);
        for (s, e) in &self.exps {
            let x = *assignment.get(s).ok_or_else(|| Error::MissingAssignment(s.to_string()))?;
            if x == 0.0 {
                return Err(Error::ZeroAssignment(s.to_string()));
            }
            v *= x.powi(*e as i32);
        }
        Ok(v)
    }

    /// Parse a label written as a product/quotient of factors, e.g.
    /// `a0*a1/t2`, `-1/2*b^3`, `1`.
    pub fn parse(text: &str) -> Result<Monomial, Error> {
        let bad = || Error::Parse(format!("bad label `{text}`"));
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(bad());
        }
        let mut m = Monomial::one();
        let mut rest = s.as_str();
        let mut divide = false;
        if let Some(r) = rest.strip_prefix('-') {
            m.coeff = -m.coeff;
            rest = r;
        }
        loop {
            let end = rest.find(['*', '/']).unwrap_or(rest.len());
            let tok = &rest[..end];
            let (base, exp) = match tok.split_once('^') {
                Some((b, e)) => (b, e.parse::<i64>().map_err(|_| bad())?),
                None => (tok, 1),
            };
            let f = if base.bytes().all(|b| b.is_ascii_digit()) && !base.is_empty() {
                let n: BigInt = base.parse().map_err(|_| bad())?;
                if n.is_zero() {
                    return Err(Error::ZeroLabel);
                }
                Monomial::constant(BigRational::from_integer(n))?.pow(exp)
            } else if !base.is_empty() && base.chars().next().unwrap().is_ascii_alphabetic() {
                Monomial::sym_pow(Symbol::new(base), exp)
            } else {
                return Err(bad());
            };
            m = if divide { m.div(&f) } else { m.mul(&f) };
            if end == rest.len() {
                break;
            }
            divide = &rest[end..end + 1] == "/";
            rest = &rest[end + 1..];
        }
        Ok(m)
    }
}

pub(crate) fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
    })
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.exps.iter().cmp(other.exps.iter()).then_with(|| self.coeff.cmp(&other.coeff))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        let c = &self.coeff;
        let unit = c.abs().is_one();
        if !unit || self.exps.is_empty() {
            parts.push(if c.is_integer() { c.numer().abs().to_string() } else { c.abs().to_string() });
        }
        for (s, e) in &self.exps {
            parts.push(if *e == 1 { s.to_string() } else { format!("{s}^{e}") });
        }
        if c.is_negative() {
            f.write_str("-")?;
        }
        f.write_str(&parts.join("*"))
    }
}

/// A label value after substitution, possibly degenerate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtLabel {
    Regular(Monomial),
    Zero,
    Infinity,
}

fn int_json(n: &BigInt) -> serde_json::Value {
    match n.to_i64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::from(n.to_string()),
    }
}

impl Serialize for Monomial {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let mut map = ser.serialize_map(Some(2))?;
        map.serialize_entry("coeff", &[int_json(self.coeff.numer()), int_json(self.coeff.denom())])?;
        let exps: BTreeMap<&str, i64> = self.exps.iter().map(|(s, e)| (s.name(), *e)).collect();
        map.serialize_entry("exps", &exps)?;
        map.end()
    }
}

impl<'de> Deserialize<'de> for Monomial {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            coeff: [serde_json::Value; 2],
            #[serde(default)]
            exps: BTreeMap<String, i64>,
        }
        fn big<E: de::Error>(v: &serde_json::Value) -> Result<BigInt, E> {
            match v {
                serde_json::Value::Number(n) => n
                    .as_i64()
                    .map(BigInt::from)
                    .ok_or_else(|| E::custom("coefficient must be an integer")),
                serde_json::Value::String(s) => s.parse().map_err(|_| E::custom("bad integer string")),
                _ => Err(E::custom("coefficient must be an integer")),
            }
        }
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Form {
            Text(String),
            Map(Raw),
        }
        let raw = match Form::deserialize(de)? {
            Form::Text(t) => return Monomial::parse(&t).map_err(de::Error::custom),
            Form::Map(raw) => raw,
        };
        let (n, d) = (big::<D::Error>(&raw.coeff[0])?, big::<D::Error>(&raw.coeff[1])?);
        if d.is_zero() {
            return Err(de::Error::custom("zero denominator"));
        }
        let exps = raw.exps.into_iter().map(|(k, v)| (Symbol::new(k), v)).collect();
        Monomial::new(BigRational::new(n, d), exps).map_err(de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(s: &str) -> Monomial {
        Monomial::parse(s).unwrap()
    }

    #[test]
    fn group_law_examples() {
        assert_eq!(m("2*a/b").mul(&m("3*b")), m("6*a"));
        assert_eq!(m("r2*r5/r4").inv(), m("r4/r2/r5"));
        assert!(m("a").pow(0).is_one());
    }

    #[test]
    fn substitution_faces() {
        let x = m("an*t3/t2");
        let rule = BTreeMap::from([(Symbol::t(2), ExtLabel::Regular(Monomial::sym("t3")))]);
        assert_eq!(x.substitute(&rule).unwrap(), ExtLabel::Regular(m("an")));
        let rule = BTreeMap::from([(Symbol::t(2), ExtLabel::Zero)]);
        assert_eq!(x.substitute(&rule).unwrap(), ExtLabel::Infinity);
        assert_eq!(x.substitute(&BTreeMap::new()).unwrap(), ExtLabel::Regular(x.clone()));
        let rule = BTreeMap::from([(Symbol::t(2), ExtLabel::Zero), (Symbol::t(3), ExtLabel::Zero)]);
        assert!(matches!(x.substitute(&rule), Err(Error::IndeterminateForm(_))));
    }

    #[test]
    fn evaluation() {
        let a = BTreeMap::from([(Symbol::new("a"), 3.0), (Symbol::new("b"), 2.0)]);
        assert_eq!(m("2*a").eval(&a).unwrap(), 6.0);
        assert_eq!(m("a/b").eval(&BTreeMap::from([(Symbol::new("a"), 1.0), (Symbol::new("b"), 2.0)])).unwrap(), 0.5);
        assert!(matches!(m("a").eval(&BTreeMap::new()), Err(Error::MissingAssignment(_))));
    }

    #[test]
    fn json_round_trip() {
        let x = m("-3/7*a0*t2^-1");
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"{"coeff":[-3,7],"exps":{"a0":1,"t2":-1}}"#);
        assert_eq!(serde_json::from_str::<Monomial>(&s).unwrap(), x);
        assert!(serde_json::from_str::<Monomial>(r#"{"coeff":[0,1],"exps":{}}"#).is_err());
    }

    #[test]
    fn natural_symbol_order() {
        assert!(Symbol::new("a2") < Symbol::new("a10"));
        assert!(Symbol::new("z") < Symbol::t(1));
        assert_eq!(Symbol::new("t12").simplex_index(), Some(12));
        assert_eq!(Symbol::new("tx").kind(), SymbolKind::Generator);
    }

    fn arb_mono() -> impl Strategy<Value = Monomial> {
        (
            prop::sample::select(vec![1i64, -1, 2, 3, -5]),
            prop::sample::select(vec![1i64, 2, 7]),
            prop::collection::btree_map(prop::sample::select(vec!["a", "b", "c", "t1", "t2"]), -3i64..=3, 0..4),
        )
            .prop_map(|(n, d, e)| {
                let exps = e.into_iter().map(|(k, v)| (Symbol::new(k), v)).collect();
                Monomial::new(BigRational::new(n.into(), d.into()), exps).unwrap()
            })
    }

    proptest! {
        #[test]
        fn group_axioms(x in arb_mono(), y in arb_mono(), z in arb_mono()) {
            prop_assert_eq!(x.mul(&y), y.mul(&x));
            prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
            prop_assert_eq!(x.inv().inv(), x.clone());
            prop_assert!(x.mul(&x.inv()).is_one());
            prop_assert_eq!(Monomial::parse(&x.to_string()).unwrap(), x);
        }

        #[test]
        fn substitution_is_multiplicative(x in arb_mono(), y in arb_mono()) {
            let rule = BTreeMap::from([(Symbol::t(1), ExtLabel::Regular(Monomial::parse("2*t2").unwrap()))]);
            let lhs = x.mul(&y).substitute(&rule).unwrap();
            let (ExtLabel::Regular(a), ExtLabel::Regular(b)) = (x.substitute(&rule).unwrap(), y.substitute(&rule).unwrap()) else { unreachable!() };
            prop_assert_eq!(lhs, ExtLabel::Regular(a.mul(&b)));
        }
    }
}

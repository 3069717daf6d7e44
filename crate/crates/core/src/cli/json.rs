//! JSON records. Rationals are strings `"num/den"`; subsets are sorted 1-based lists.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::{format_rational, parse_rational};
use crate::wedge::{Chamber, Sign, Wall};
use crate::{Poly, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum JsonError {
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("malformed rational {0:?}")]
    BadRational(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub exps: BTreeMap<String, u32>,
    pub coeff: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignRecord {
    #[serde(rename = "I")]
    pub i: Vec<usize>,
    #[serde(rename = "J")]
    pub j: Vec<usize>,
    pub sign: Sign,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub mu: Vec<u32>,
    pub nu: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChamberRecord {
    pub sample: SampleRecord,
    pub signs: Vec<SignRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WallRecord {
    #[serde(rename = "I")]
    pub i: Vec<usize>,
    #[serde(rename = "J")]
    pub j: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolynomialRecord {
    pub chamber: ChamberRecord,
    pub polynomial: Vec<Term>,
    pub degree: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WallCrossingRecord {
    pub wall: WallRecord,
    pub c1: ChamberRecord,
    pub c2: ChamberRecord,
    pub polynomial: Vec<Term>,
    pub degree: Option<u32>,
}

pub fn rational(q: &Rational) -> String {
    format_rational(q)
}

pub fn parse(s: &str) -> Result<Rational, JsonError> {
    parse_rational(s).ok_or_else(|| JsonError::BadRational(s.to_string()))
}

/// Terms in lexicographic exponent order, with every variable listed.
pub fn poly_terms(p: &Poly, names: &[String]) -> Vec<Term> {
    p.terms()
        .iter()
        .map(|(e, c)| Term { exps: names.iter().cloned().zip(e.iter().copied()).collect(), coeff: rational(c) })
        .collect()
}

pub fn poly_from_terms(terms: &[Term], names: &[String]) -> Result<Poly, JsonError> {
    let mut out = Vec::new();
    for t in terms {
        let mut e = vec![0; names.len()];
        for (name, &k) in &t.exps {
            let i = names.iter().position(|n| n == name).ok_or_else(|| JsonError::UnknownVariable(name.clone()))?;
            e[i] = k;
        }
        out.push((e, parse(&t.coeff)?));
    }
    Ok(Poly::from_terms(names.len(), out))
}

pub fn wall_record(w: &Wall) -> WallRecord {
    WallRecord { i: w.i(), j: w.j() }
}

pub fn chamber_record(c: &Chamber) -> ChamberRecord {
    let (mu, nu) = c.sample();
    ChamberRecord {
        sample: SampleRecord { mu: mu.to_vec(), nu: nu.to_vec() },
        signs: c.signs().iter().map(|(w, s)| SignRecord { i: w.i(), j: w.j(), sign: *s }).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wedge::chamber_of;

    #[test]
    fn chamber_signs_serialize() {
        let c = chamber_of(&[3], &[1, 2]).unwrap();
        let v = serde_json::to_value(chamber_record(&c)).unwrap();
        assert_eq!(v["signs"][1], serde_json::json!({"I": [1], "J": [1], "sign": "+"}));
    }
}

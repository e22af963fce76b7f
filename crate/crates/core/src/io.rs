//! JSON documents for fields, codes, systems and evasiveness witnesses.
//!
//! An element of F_{q^m} is written as its F_q-coordinates in the power
//! basis, lowest first. Each F_q-coordinate is a plain integer when q is
//! prime and an array of F_p-digits (lowest first) otherwise; both shapes are
//! accepted on input, and short arrays are padded with zeros.

use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::codes::{DualCode, RankMetricCode};
use crate::error::{Error, Result};
use crate::fields::{Elem, FieldTower};
use crate::linalg::Mat;
use crate::qsystems::{EvasiveWitness, QSystem};

/// An F_q element: an integer (its packed encoding) or F_p-digits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coeff {
    Int(u32),
    Digits(Vec<u32>),
}

impl Coeff {
    fn pack(&self, p: u32, e: u32) -> Result<u32> {
        let q = p.pow(e);
        match self {
            Coeff::Int(c) if *c < q => Ok(*c),
            Coeff::Int(c) => Err(Error::Document(format!("coefficient {c} is not an element of F_{q}"))),
            Coeff::Digits(d) if d.len() <= e as usize && d.iter().all(|&x| x < p) => Ok(d.iter().rev().fold(0, |acc, &x| acc * p + x)),
            Coeff::Digits(d) => Err(Error::Document(format!("{d:?} is not a list of at most {e} digits below {p}"))),
        }
    }

    fn unpack(value: u32, p: u32, e: u32) -> Coeff {
        if e == 1 {
            return Coeff::Int(value);
        }
        let mut v = value;
        Coeff::Digits(
            (0..e)
                .map(|_| {
                    let d = v % p;
                    v /= p;
                    d
                })
                .collect(),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    #[serde(default = "one")]
    pub e: u32,
    pub m: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gq: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gqm: Option<Vec<Coeff>>,
}

fn one() -> u32 {
    1
}

impl FieldSpec {
    pub fn from_tower(t: &FieldTower) -> Self {
        FieldSpec {
            p: t.p(),
            e: t.e(),
            m: t.m() as u32,
            gq: (t.e() > 1).then(|| t.gq().to_vec()),
            gqm: Some(t.gqm().iter().map(|c| Coeff::unpack(c.0, t.p(), t.e())).collect()),
        }
    }

    pub fn build(&self) -> Result<FieldTower> {
        let gqm = match &self.gqm {
            Some(g) => {
                if self.p < 2 || self.e == 0 || (self.p as u64).checked_pow(self.e).is_none_or(|q| q > u32::MAX as u64) {
                    return Err(Error::InvalidField(format!("unsupported base field p = {}, e = {}", self.p, self.e)));
                }
                Some(g.iter().map(|c| c.pack(self.p, self.e)).collect::<Result<Vec<_>>>()?)
            }
            None => None,
        };
        FieldTower::with_polynomials(self.p, self.e, self.m, self.gq.clone(), gqm)
    }
}

/// Writes an element as its list of F_q-coordinates.
pub fn encode_elem(t: &FieldTower, x: Elem) -> Vec<Coeff> {
    t.coords(x).into_iter().map(|c| Coeff::unpack(c.0, t.p(), t.e())).collect()
}

pub fn decode_elem(t: &FieldTower, coeffs: &[Coeff]) -> Result<Elem> {
    if coeffs.len() > t.m() {
        return Err(Error::Document(format!("element with {} coordinates, expected at most m = {}", coeffs.len(), t.m())));
    }
    let mut coords = vec![Elem::ZERO; t.m()];
    for (slot, c) in coords.iter_mut().zip(coeffs) {
        *slot = Elem(c.pack(t.p(), t.e())?);
    }
    t.from_coords(&coords)
}

pub type ElemRows = Vec<Vec<Vec<Coeff>>>;

pub fn encode_matrix(t: &FieldTower, m: &Mat) -> ElemRows {
    m.iter_rows().map(|r| r.iter().map(|&x| encode_elem(t, x)).collect()).collect()
}

pub fn decode_matrix(t: &FieldTower, rows: &ElemRows) -> Result<Mat> {
    let rows = rows.iter().map(|r| r.iter().map(|x| decode_elem(t, x)).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?;
    Mat::from_rows(rows).map_err(|e| Error::Document(e.to_string()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeDocument {
    pub field: FieldSpec,
    pub generator: ElemRows,
}

impl CodeDocument {
    pub fn from_code(c: &RankMetricCode) -> Self {
        CodeDocument { field: FieldSpec::from_tower(c.tower()), generator: encode_matrix(c.tower(), c.generator()) }
    }

    pub fn to_code(&self) -> Result<RankMetricCode> {
        let t = Arc::new(self.field.build()?);
        let g = decode_matrix(&t, &self.generator)?;
        RankMetricCode::new(t, g)
    }
}

/// The zero code of a given length, which is what a full code dualizes to.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroCodeDocument {
    pub field: FieldSpec,
    pub length: usize,
    pub zero: bool,
}

/// Either kind of dual, as written by the `dual` command.
pub fn dual_document(t: &FieldTower, dual: &DualCode) -> serde_json::Value {
    match dual {
        DualCode::Code(c) => serde_json::to_value(CodeDocument::from_code(c)),
        DualCode::Zero { length } => serde_json::to_value(ZeroCodeDocument { field: FieldSpec::from_tower(t), length: *length, zero: true }),
    }
    .expect("documents serialize")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemDocument {
    pub field: FieldSpec,
    pub basis: ElemRows,
}

impl SystemDocument {
    pub fn from_system(u: &QSystem) -> Self {
        SystemDocument { field: FieldSpec::from_tower(u.tower()), basis: encode_matrix(u.tower(), u.basis()) }
    }

    pub fn to_system(&self) -> Result<QSystem> {
        let t = Arc::new(self.field.build()?);
        let b = decode_matrix(&t, &self.basis)?;
        QSystem::new(t, b)
    }
}

/// The outcome of an (h,r)-evasiveness test together with a subspace W of
/// dimension h attaining the largest intersection.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessDocument {
    pub field: FieldSpec,
    pub h: usize,
    pub r: usize,
    pub evasive: bool,
    pub subspace: ElemRows,
    pub intersection_dim: usize,
}

impl WitnessDocument {
    pub fn new(t: &FieldTower, h: usize, r: usize, evasive: bool, w: &EvasiveWitness) -> Self {
        WitnessDocument { field: FieldSpec::from_tower(t), h, r, evasive, subspace: encode_matrix(t, &w.subspace), intersection_dim: w.intersection_dim }
    }

    /// Recomputes the intersection dimension against `u`.
    pub fn check(&self, u: &QSystem) -> Result<bool> {
        let w = decode_matrix(u.tower(), &self.subspace)?;
        let w = if w.rows() == 0 { Mat::zeros(0, u.k()) } else { w };
        Ok(u.intersection_dim(&w)? == self.intersection_dim)
    }
}

pub fn parse<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))
}

pub fn to_pretty<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("documents serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_round_trip() {
        for (p, e, m) in [(2, 1, 3), (3, 1, 2), (2, 2, 2), (3, 2, 1)] {
            let t = FieldTower::new(p, e, m).unwrap();
            let spec = FieldSpec::from_tower(&t);
            let back: FieldSpec = parse(&to_pretty(&spec)).unwrap();
            assert_eq!(back.build().unwrap(), t);
        }
        let spec: FieldSpec = parse(r#"{"p":2,"e":1,"m":3,"gqm":[1,1,0,1]}"#).unwrap();
        assert_eq!(spec.build().unwrap().gqm(), &[Elem(1), Elem(1), Elem(0), Elem(1)]);
        let spec: FieldSpec = parse(r#"{"p":2,"m":3,"gqm":[1,0,0,1]}"#).unwrap();
        assert!(spec.build().is_err());
    }

    #[test]
    fn element_shapes() {
        let t = FieldTower::new(2, 2, 2).unwrap();
        let x = Elem(0b1110);
        let enc = encode_elem(&t, x);
        assert_eq!(enc, vec![Coeff::Digits(vec![0, 1]), Coeff::Digits(vec![1, 1])]);
        assert_eq!(decode_elem(&t, &enc).unwrap(), x);
        assert_eq!(decode_elem(&t, &[Coeff::Int(2), Coeff::Int(3)]).unwrap(), x);
        assert_eq!(decode_elem(&t, &[Coeff::Digits(vec![1])]).unwrap(), Elem(1));
        assert!(decode_elem(&t, &[Coeff::Int(4)]).is_err());
    }

    #[test]
    fn code_document() {
        let text = r#"{"field":{"p":2,"e":1,"m":3,"gqm":[1,1,0,1]},
                       "generator":[[[1],[0],[0,1],[0]],[[0],[1],[0],[0,0,1]]]}"#;
        let c = parse::<CodeDocument>(text).unwrap().to_code().unwrap();
        assert_eq!((c.n(), c.k()), (4, 2));
        let again = CodeDocument::from_code(&c).to_code().unwrap();
        assert!(again.same_code(&c));
    }
}

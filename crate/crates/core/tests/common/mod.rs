#![allow(dead_code)]

use num_complex::Complex64;
use serde::Deserialize;
use serde_json::Value;
use shapeinv::{FamilyTag, ParamPoint};

pub const ORACLE: &str = include_str!("../oracle/oracle.json");

#[derive(Debug, Deserialize)]
pub struct CatalogSample {
    pub family: String,
    pub params: ParamPoint,
    pub x: f64,
    pub w: [f64; 2],
    pub w_scale: f64,
    pub dw: [f64; 2],
    pub lhs: [f64; 2],
    pub lhs_scale: f64,
}

#[derive(Debug, Deserialize)]
pub struct PartnerSample {
    pub params: ParamPoint,
    pub x: Vec<f64>,
    pub v_minus: Vec<f64>,
    pub v_plus: Vec<f64>,
}

pub fn oracle() -> Value {
    serde_json::from_str(ORACLE).expect("oracle json")
}

pub fn catalog_samples() -> Vec<CatalogSample> {
    serde_json::from_value(oracle()["catalog"].clone()).unwrap()
}

pub fn partner_samples() -> Vec<PartnerSample> {
    serde_json::from_value(oracle()["partners"].clone()).unwrap()
}

pub fn c(v: [f64; 2]) -> Complex64 {
    Complex64::new(v[0], v[1])
}

pub fn tag(s: &str) -> FamilyTag {
    s.parse().unwrap()
}

/// `|got - want| <= rel * max(|want|, scale)`.
pub fn close(got: Complex64, want: Complex64, rel: f64, scale: f64) -> bool {
    (got - want).norm() <= rel * want.norm().max(scale)
}

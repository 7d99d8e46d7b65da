//! The six rationally extended families, transcribed term by term.
//!
//! Each family carries its analytic non-singularity predicate and an
//! independent numeric scan of its denominators; the two must agree.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polykernel::{self, PolySpec};
use crate::superpotential::{Domain, Jet, Superpotential, Validity};

/// Tolerance on `|l - 2B - 1|` below which the Jacobi prefactor is degenerate.
pub const DEGENERATE_PREFACTOR_TOL: f64 = 1e-9;

const SAMPLE_MARGIN: f64 = 0.1;
const MAX_REJECTIONS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FamilyTag {
    #[serde(rename = "X1-hyperbolic")]
    X1Hyperbolic,
    #[serde(rename = "X1-radial-oscillator")]
    X1RadialOscillator,
    #[serde(rename = "X1-trigonometric")]
    X1Trigonometric,
    #[serde(rename = "Xl-Poschl-Teller")]
    XlPoschlTeller,
    #[serde(rename = "Xl-PT-Scarf")]
    XlPtScarf,
    #[serde(rename = "Xl-radial-oscillator")]
    XlRadialOscillator,
}

impl FamilyTag {
    pub const ALL: [FamilyTag; 6] = [
        FamilyTag::X1Hyperbolic,
        FamilyTag::X1RadialOscillator,
        FamilyTag::X1Trigonometric,
        FamilyTag::XlPoschlTeller,
        FamilyTag::XlPtScarf,
        FamilyTag::XlRadialOscillator,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            FamilyTag::X1Hyperbolic => "X1-hyperbolic",
            FamilyTag::X1RadialOscillator => "X1-radial-oscillator",
            FamilyTag::X1Trigonometric => "X1-trigonometric",
            FamilyTag::XlPoschlTeller => "Xl-Poschl-Teller",
            FamilyTag::XlPtScarf => "Xl-PT-Scarf",
            FamilyTag::XlRadialOscillator => "Xl-radial-oscillator",
        }
    }

    /// Named real constants the family needs (besides `ell` and `m`).
    pub fn constants(&self) -> &'static [&'static str] {
        match self {
            FamilyTag::X1Hyperbolic | FamilyTag::X1Trigonometric => &["c", "beta", "d"],
            FamilyTag::X1RadialOscillator => &["omega", "d"],
            FamilyTag::XlPoschlTeller | FamilyTag::XlPtScarf => &["B"],
            FamilyTag::XlRadialOscillator => &["omega"],
        }
    }

    pub fn uses_ell(&self) -> bool {
        matches!(
            self,
            FamilyTag::XlPoschlTeller | FamilyTag::XlPtScarf | FamilyTag::XlRadialOscillator
        )
    }

    pub fn is_real(&self) -> bool {
        !matches!(self, FamilyTag::XlPtScarf)
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FamilyTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FamilyTag::ALL
            .into_iter()
            .find(|t| t.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                Error::Schema(format!(
                    "unknown family tag '{s}' (expected one of {})",
                    FamilyTag::ALL.map(|t| t.as_str()).join(", ")
                ))
            })
    }
}

/// Numeric values of the family constants plus the translated parameter `m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamPoint {
    #[serde(flatten)]
    pub values: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ell: Option<u32>,
    pub m: f64,
}

impl ParamPoint {
    pub fn new(values: &[(&str, f64)], ell: Option<u32>, m: f64) -> Self {
        ParamPoint {
            values: values.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            ell,
            m,
        }
    }

    pub fn get(&self, key: &str) -> Result<f64> {
        self.values
            .get(key)
            .copied()
            .ok_or_else(|| Error::Schema(format!("missing constant '{key}'")))
    }

    pub fn with_m(&self, m: f64) -> Self {
        ParamPoint { m, ..self.clone() }
    }
}

/// Constants of the Infeld-Hull relations `F' + F^2 = a`, `G' + F G = b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlgebraConstants {
    pub a: f64,
    pub b: f64,
}

/// Extra structure every catalog family exposes beyond the evaluation contract.
pub trait CatalogFamily: Superpotential {
    /// Numeric scan of the denominators of `W(., m)`, independent of the
    /// analytic predicate.
    fn denominator_scan(&self, m: f64) -> Validity;

    /// `D(x,m)` with `W1+(x,m) = d/dx log D(x,m)`.
    fn gauge_denominator(&self, x: f64, m: f64) -> Complex64;

    /// Point excluded from grids regardless of parameters.
    fn puncture(&self) -> Option<f64> {
        None
    }
}

#[derive(Clone)]
pub struct CatalogEntry {
    pub tag: FamilyTag,
    pub params: ParamPoint,
    pub family: Arc<dyn CatalogFamily>,
    pub expected: AlgebraConstants,
}

impl fmt::Debug for CatalogEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CatalogEntry")
            .field("tag", &self.tag)
            .field("params", &self.params)
            .field("expected", &self.expected)
            .finish()
    }
}

impl CatalogEntry {
    pub fn m(&self) -> f64 {
        self.params.m
    }

    pub fn superpotential(&self) -> Arc<dyn Superpotential> {
        self.family.clone()
    }
}

fn check_schema(tag: FamilyTag, params: &ParamPoint) -> Result<()> {
    let wanted = tag.constants();
    if let Some(extra) = params.values.keys().find(|k| !wanted.contains(&k.as_str())) {
        return Err(Error::Schema(format!(
            "{tag} does not take constant '{extra}' (expected {})",
            wanted.join(", ")
        )));
    }
    for key in wanted {
        let v = params.get(key)?;
        if !v.is_finite() {
            return Err(Error::Schema(format!("constant '{key}' = {v} is not finite")));
        }
    }
    if !params.m.is_finite() {
        return Err(Error::Schema(format!("m = {} is not finite", params.m)));
    }
    match (tag.uses_ell(), params.ell) {
        (true, None) => return Err(Error::Schema(format!("{tag} needs integer 'ell' >= 1"))),
        (true, Some(0)) => {
            return Err(Error::Unsupported(format!("{tag} with ell = 0 is the unextended potential")))
        }
        (true, Some(l)) if l > polykernel::MAX_DEGREE => {
            return Err(Error::Unsupported(format!("ell = {l} exceeds degree cap")))
        }
        (false, Some(_)) => return Err(Error::Schema(format!("{tag} does not take 'ell'"))),
        _ => {}
    }
    Ok(())
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v > 0.0 {
        Ok(v)
    } else {
        Err(Error::Schema(format!("constant '{name}' must be positive, got {v}")))
    }
}

/// Builds the catalog entry for `tag` at `params`.
pub fn get_family(tag: FamilyTag, params: &ParamPoint) -> Result<CatalogEntry> {
    check_schema(tag, params)?;
    let p = params;
    let (family, expected): (Arc<dyn CatalogFamily>, AlgebraConstants) = match tag {
        FamilyTag::X1Hyperbolic => {
            let f = X1Hyperbolic {
                c: positive("c", p.get("c")?)?,
                beta: p.get("beta")?,
                d: p.get("d")?,
            };
            let ab = AlgebraConstants { a: f.c * f.c, b: f.beta };
            (Arc::new(f), ab)
        }
        FamilyTag::X1RadialOscillator => {
            let f = X1RadialOscillator {
                omega: positive("omega", p.get("omega")?)?,
                d: p.get("d")?,
            };
            let ab = AlgebraConstants { a: 0.0, b: -f.omega };
            (Arc::new(f), ab)
        }
        FamilyTag::X1Trigonometric => {
            let f = X1Trigonometric {
                c: positive("c", p.get("c")?)?,
                beta: p.get("beta")?,
                d: p.get("d")?,
            };
            let ab = AlgebraConstants { a: -f.c * f.c, b: f.beta };
            (Arc::new(f), ab)
        }
        FamilyTag::XlPoschlTeller | FamilyTag::XlPtScarf => {
            let b = p.get("B")?;
            let ell = p.ell.unwrap_or_default();
            if (ell as f64 - 2.0 * b - 1.0).abs() < DEGENERATE_PREFACTOR_TOL {
                return Err(Error::Unsupported(format!(
                    "degenerate prefactor: ell - 2B - 1 = 0 at ell = {ell}, B = {b}"
                )));
            }
            let jacobi = JacobiExtension { b, ell };
            let ab = AlgebraConstants { a: 1.0, b: 0.0 };
            if tag == FamilyTag::XlPoschlTeller {
                (Arc::new(XlPoschlTeller(jacobi)), ab)
            } else {
                (Arc::new(XlPtScarf(jacobi)), ab)
            }
        }
        FamilyTag::XlRadialOscillator => {
            let f = XlRadialOscillator {
                omega: positive("omega", p.get("omega")?)?,
                ell: p.ell.unwrap_or_default(),
            };
            let ab = AlgebraConstants { a: 0.0, b: -f.omega };
            (Arc::new(f), ab)
        }
    };
    Ok(CatalogEntry {
        tag,
        params: params.clone(),
        family,
        expected,
    })
}

/// Analytic predicate and denominator scan for one parameter point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub predicate: Validity,
    pub scan: Validity,
    /// Excluded point flagged by the family even when valid.
    pub puncture: Option<f64>,
}

impl Witness {
    pub fn agrees(&self) -> bool {
        self.predicate.is_valid() == self.scan.is_valid()
    }

    /// The analytic verdict, or a violation if the scan contradicts it.
    pub fn validity(&self) -> Validity {
        match (&self.predicate, self.agrees()) {
            (v, true) => v.clone(),
            (_, false) => Validity::Violated(format!(
                "analytic predicate ({}) disagrees with denominator scan ({})",
                self.predicate, self.scan
            )),
        }
    }
}

pub fn validity_witness(tag: FamilyTag, params: &ParamPoint) -> Result<Witness> {
    let entry = get_family(tag, params)?;
    Ok(witness_for(&entry))
}

pub fn witness_for(entry: &CatalogEntry) -> Witness {
    let m = entry.m();
    Witness {
        predicate: entry.family.validity(m),
        scan: entry.family.denominator_scan(m),
        puncture: entry.family.puncture(),
    }
}

/// Deterministic parameter points inside the family's sampling box.
///
/// Every point keeps `m + 0.1`, `m`, `m - 1`, `m - 2` and `m - 2.1` inside the
/// non-singular region, so the verifier may translate twice.
pub fn sample_valid_params(tag: FamilyTag, count: usize, seed: u64) -> Result<Vec<ParamPoint>> {
    if count == 0 {
        return Err(Error::Usage("sample count must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut rejections = 0;
    while out.len() < count {
        let candidate = draw_candidate(tag, &mut rng);
        if accept(tag, &candidate) {
            out.push(candidate);
        } else {
            rejections += 1;
            if rejections >= MAX_REJECTIONS {
                return Err(Error::Sampling(format!(
                    "{tag}: {MAX_REJECTIONS} rejections without filling {count} points"
                )));
            }
        }
    }
    Ok(out)
}

fn accept(tag: FamilyTag, p: &ParamPoint) -> bool {
    [SAMPLE_MARGIN, 0.0, -1.0, -2.0, -2.0 - SAMPLE_MARGIN]
        .iter()
        .all(|shift| match validity_witness(tag, &p.with_m(p.m + shift)) {
            Ok(w) => w.validity().is_valid(),
            Err(_) => false,
        })
}

fn round6(x: f64) -> f64 {
    (x * 1e6).round() / 1e6
}

fn draw_candidate(tag: FamilyTag, rng: &mut ChaCha8Rng) -> ParamPoint {
    let mut u = |lo: f64, hi: f64| round6(rng.gen_range(lo..hi));
    match tag {
        FamilyTag::X1Hyperbolic => {
            let c = u(0.5, 2.0);
            let beta = u(-3.0, 3.0);
            let d = if u(0.0, 1.0) < 0.5 { -u(0.1, 3.0) } else { u(0.1, 3.0) };
            let c2 = c * c;
            let m = if d < 0.0 {
                let bound = (2.0 * beta - c2 - 2.0 * c * d) / (2.0 * c2);
                u(bound - 4.0, bound - SAMPLE_MARGIN)
            } else {
                let bound = (2.0 * beta + c2 - 2.0 * c * d) / (2.0 * c2);
                u(bound + 2.0 + SAMPLE_MARGIN, bound + 6.0)
            };
            ParamPoint::new(&[("c", c), ("beta", beta), ("d", d)], None, m)
        }
        FamilyTag::X1RadialOscillator => {
            let omega = u(0.5, 3.0);
            let d = u(0.1, 3.0);
            let bound = -0.5 * (1.0 + 2.0 * d);
            let m = u(bound - 4.0, bound - SAMPLE_MARGIN);
            ParamPoint::new(&[("omega", omega), ("d", d)], None, m)
        }
        FamilyTag::X1Trigonometric => {
            let c = u(0.5, 2.0);
            let beta = u(-3.0, 3.0);
            let d = if u(0.0, 1.0) < 0.5 { -u(0.1, 3.0) } else { u(0.1, 3.0) };
            let (lower, upper) = trig_bounds(c, beta, d);
            let m = if u(0.0, 1.0) < 0.5 {
                u(lower - 4.0, lower - SAMPLE_MARGIN)
            } else {
                u(upper + 2.0 + SAMPLE_MARGIN, upper + 6.0)
            };
            ParamPoint::new(&[("c", c), ("beta", beta), ("d", d)], None, m)
        }
        FamilyTag::XlPoschlTeller => {
            let b = u(-4.0, -0.6);
            let ell = rng.gen_range(1..=3);
            let half = -0.5 * (1.0 + 2.0 * b);
            let m = round6(rng.gen_range(-half..half));
            ParamPoint::new(&[("B", b)], Some(ell), m)
        }
        FamilyTag::XlPtScarf => {
            let b = u(-3.0, 3.0);
            let ell = rng.gen_range(1..=3);
            let m = round6(rng.gen_range(-3.0..3.0));
            ParamPoint::new(&[("B", b)], Some(ell), m)
        }
        FamilyTag::XlRadialOscillator => {
            let omega = u(0.5, 3.0);
            let m = u(-5.0, -0.5 - SAMPLE_MARGIN);
            let ell = rng.gen_range(1..=3);
            ParamPoint::new(&[("omega", omega)], Some(ell), m)
        }
    }
}

/// Largest `m` of the lower regime and smallest `m` of the upper regime of the
/// trigonometric family; both regimes depend on `|d|` only.
fn trig_bounds(c: f64, beta: f64, d: f64) -> (f64, f64) {
    let c2 = c * c;
    let ad = d.abs();
    (
        (-2.0 * beta - c2 - 2.0 * c * ad) / (2.0 * c2),
        (-2.0 * beta + c2 + 2.0 * c * ad) / (2.0 * c2),
    )
}

/// Roots of `c0 + c1 t` strictly inside `(lo, hi)`.
fn linear_roots(c0: f64, c1: f64, lo: f64, hi: f64) -> Vec<f64> {
    if c1 == 0.0 {
        return Vec::new();
    }
    let t = -c0 / c1;
    if t > lo && t < hi {
        vec![t]
    } else {
        Vec::new()
    }
}

fn scan_verdict(hits: Vec<String>) -> Validity {
    if hits.is_empty() {
        Validity::Valid
    } else {
        Validity::Violated(hits.join("; "))
    }
}

// ---------------------------------------------------------------------------

/// `W0 = -(beta/c) coth(cx) + d/sinh(cx) + m c coth(cx)` on `(0, inf)`.
#[derive(Debug, Clone, Copy)]
pub struct X1Hyperbolic {
    pub c: f64,
    pub beta: f64,
    pub d: f64,
}

impl X1Hyperbolic {
    /// `-2 beta + c^2 s + 2 c d cosh(cx)` as a polynomial in `t = cosh(cx)`.
    fn denominator_coeffs(&self, s: f64) -> (f64, f64) {
        (-2.0 * self.beta + self.c * self.c * s, 2.0 * self.c * self.d)
    }

    fn extension(&self, x: f64, s: f64) -> Jet {
        let c = self.c;
        let (sh, ch) = ((c * x).sinh(), (c * x).cosh());
        let num = Jet::real(2.0 * c * c * self.d * sh, 2.0 * c * c * c * self.d * ch);
        let den = Jet::real(
            -2.0 * self.beta + c * c * s + 2.0 * c * self.d * ch,
            2.0 * c * c * self.d * sh,
        );
        num / den
    }

    fn roots(&self, m: f64) -> Vec<f64> {
        [2.0 * m + 1.0, 2.0 * m - 1.0]
            .iter()
            .flat_map(|&s| {
                let (c0, c1) = self.denominator_coeffs(s);
                linear_roots(c0, c1, 1.0, f64::INFINITY)
            })
            .collect()
    }
}

impl Superpotential for X1Hyperbolic {
    fn name(&self) -> String {
        FamilyTag::X1Hyperbolic.to_string()
    }
    fn domain(&self) -> Domain {
        Domain::new(0.0, f64::INFINITY)
    }
    fn length_scale(&self) -> f64 {
        2.0 / self.c
    }
    fn k0(&self, x: f64) -> Jet {
        let c = self.c;
        let (sh, ch) = ((c * x).sinh(), (c * x).cosh());
        Jet::real(
            -self.beta / c * ch / sh + self.d / sh,
            self.beta / (sh * sh) - self.d * c * ch / (sh * sh),
        )
    }
    fn k1(&self, x: f64) -> Jet {
        let c = self.c;
        let sh = (c * x).sinh();
        Jet::real(c * (c * x).cosh() / sh, -c * c / (sh * sh))
    }
    fn w1_plus(&self, x: f64, m: f64) -> Jet {
        self.extension(x, 2.0 * m + 1.0)
    }
    fn w1_minus(&self, x: f64, m: f64) -> Jet {
        self.extension(x, 2.0 * m - 1.0)
    }
    fn poles(&self, m: f64) -> Vec<f64> {
        self.roots(m).into_iter().map(|t| t.acosh() / self.c).collect()
    }
    fn validity(&self, m: f64) -> Validity {
        let (c, beta, d) = (self.c, self.beta, self.d);
        let c2 = c * c;
        if d < 0.0 {
            let bound = (2.0 * beta - c2 - 2.0 * c * d) / (2.0 * c2);
            if m < bound {
                return Validity::Valid;
            }
            Validity::Violated(format!("d < 0 requires m < (2 beta - c^2 - 2 c d)/(2 c^2) = {bound}"))
        } else if d > 0.0 {
            let bound = (2.0 * beta + c2 - 2.0 * c * d) / (2.0 * c2);
            if m > bound {
                return Validity::Valid;
            }
            Validity::Violated(format!("d > 0 requires m > (2 beta + c^2 - 2 c d)/(2 c^2) = {bound}"))
        } else {
            Validity::Violated("d != 0".into())
        }
    }
}

impl CatalogFamily for X1Hyperbolic {
    fn denominator_scan(&self, m: f64) -> Validity {
        scan_verdict(
            self.roots(m)
                .into_iter()
                .map(|t| format!("denominator vanishes at cosh(cx) = {t}"))
                .collect(),
        )
    }
    fn gauge_denominator(&self, x: f64, m: f64) -> Complex64 {
        let (c0, c1) = self.denominator_coeffs(2.0 * m + 1.0);
        Complex64::new(c0 + c1 * (self.c * x).cosh(), 0.0)
    }
}

// ---------------------------------------------------------------------------

/// `W0 = omega x / 2 + d/x + m/x` on `(0, inf)`.
#[derive(Debug, Clone, Copy)]
pub struct X1RadialOscillator {
    pub omega: f64,
    pub d: f64,
}

impl X1RadialOscillator {
    fn extension(&self, x: f64, constant: f64) -> Jet {
        let w = self.omega;
        let num = Jet::real(-2.0 * w * x, -2.0 * w);
        let den = Jet::real(constant - w * x * x, -2.0 * w * x);
        num / den
    }

    /// Roots in `t = x^2` of both denominators.
    fn roots(&self, m: f64) -> Vec<f64> {
        [1.0 + 2.0 * self.d + 2.0 * m, -1.0 + 2.0 * self.d + 2.0 * m]
            .iter()
            .flat_map(|&c0| linear_roots(c0, -self.omega, 0.0, f64::INFINITY))
            .collect()
    }
}

impl Superpotential for X1RadialOscillator {
    fn name(&self) -> String {
        FamilyTag::X1RadialOscillator.to_string()
    }
    fn domain(&self) -> Domain {
        Domain::new(0.0, f64::INFINITY)
    }
    fn length_scale(&self) -> f64 {
        2.0 / self.omega.sqrt()
    }
    fn k0(&self, x: f64) -> Jet {
        Jet::real(0.5 * self.omega * x + self.d / x, 0.5 * self.omega - self.d / (x * x))
    }
    fn k1(&self, x: f64) -> Jet {
        Jet::real(1.0 / x, -1.0 / (x * x))
    }
    fn w1_plus(&self, x: f64, m: f64) -> Jet {
        self.extension(x, 1.0 + 2.0 * self.d + 2.0 * m)
    }
    fn w1_minus(&self, x: f64, m: f64) -> Jet {
        self.extension(x, -1.0 + 2.0 * self.d + 2.0 * m)
    }
    fn poles(&self, m: f64) -> Vec<f64> {
        self.roots(m).into_iter().map(f64::sqrt).collect()
    }
    fn validity(&self, m: f64) -> Validity {
        let bound = -0.5 * (1.0 + 2.0 * self.d);
        if m < bound {
            Validity::Valid
        } else {
            Validity::Violated(format!("m < -(1 + 2d)/2 = {bound}"))
        }
    }
}

impl CatalogFamily for X1RadialOscillator {
    fn denominator_scan(&self, m: f64) -> Validity {
        scan_verdict(
            self.roots(m)
                .into_iter()
                .map(|t| format!("denominator vanishes at x^2 = {t}"))
                .collect(),
        )
    }
    fn gauge_denominator(&self, x: f64, m: f64) -> Complex64 {
        Complex64::new(1.0 + 2.0 * self.d + 2.0 * m - self.omega * x * x, 0.0)
    }
}

// ---------------------------------------------------------------------------

/// `W0 = -(beta/c) tan(cx) + d/cos(cx) - m c tan(cx)` on `(-pi/2c, pi/2c)`.
#[derive(Debug, Clone, Copy)]
pub struct X1Trigonometric {
    pub c: f64,
    pub beta: f64,
    pub d: f64,
}

impl X1Trigonometric {
    /// Denominators as `(c0, c1)` polynomials in `t = sin(cx)`.
    fn denominators(&self, m: f64) -> [(f64, f64); 2] {
        let (c, beta, d) = (self.c, self.beta, self.d);
        [
            (2.0 * beta + c * c * (1.0 + 2.0 * m), -2.0 * c * d),
            (-2.0 * beta + c * c * (1.0 - 2.0 * m), 2.0 * c * d),
        ]
    }

    fn roots(&self, m: f64) -> Vec<f64> {
        self.denominators(m)
            .iter()
            .flat_map(|&(c0, c1)| linear_roots(c0, c1, -1.0, 1.0))
            .collect()
    }
}

impl Superpotential for X1Trigonometric {
    fn name(&self) -> String {
        FamilyTag::X1Trigonometric.to_string()
    }
    fn domain(&self) -> Domain {
        let half = FRAC_PI_2 / self.c;
        Domain::new(-half, half)
    }
    fn k0(&self, x: f64) -> Jet {
        let c = self.c;
        let (s, co) = (c * x).sin_cos();
        Jet::real(
            -self.beta / c * s / co + self.d / co,
            -self.beta / (co * co) + self.d * c * s / (co * co),
        )
    }
    fn k1(&self, x: f64) -> Jet {
        let c = self.c;
        let co = (c * x).cos();
        Jet::real(-c * (c * x).tan(), -c * c / (co * co))
    }
    fn w1_plus(&self, x: f64, m: f64) -> Jet {
        let (c, beta, d) = (self.c, self.beta, self.d);
        let (s, co) = (c * x).sin_cos();
        let num = Jet::real(-2.0 * c * c * d * co, 2.0 * c * c * c * d * s);
        let den = Jet::real(
            2.0 * beta + c * c * (1.0 + 2.0 * m) - 2.0 * c * d * s,
            -2.0 * c * c * d * co,
        );
        num / den
    }
    fn w1_minus(&self, x: f64, m: f64) -> Jet {
        let (c, beta, d) = (self.c, self.beta, self.d);
        let (s, co) = (c * x).sin_cos();
        let num = Jet::real(2.0 * c * c * d * co, -2.0 * c * c * c * d * s);
        let den = Jet::real(
            -2.0 * beta + c * c * (1.0 - 2.0 * m) + 2.0 * c * d * s,
            2.0 * c * c * d * co,
        );
        num / den
    }
    fn poles(&self, m: f64) -> Vec<f64> {
        self.roots(m).into_iter().map(|t| t.asin() / self.c).collect()
    }
    fn validity(&self, m: f64) -> Validity {
        let (c, beta, d) = (self.c, self.beta, self.d);
        let c2 = c * c;
        if d == 0.0 {
            return Validity::Violated("d != 0".into());
        }
        // Four regimes; the d < 0 lower-bound regime carries -2 beta, matching
        // the other three (the regimes depend on |d| only).
        let regimes: [(bool, bool, f64, &str); 4] = [
            (d > 0.0, true, (-2.0 * beta - c2 - 2.0 * c * d) / (2.0 * c2), "d > 0, m < (-2 beta - c^2 - 2 c d)/(2 c^2)"),
            (d < 0.0, false, (-2.0 * beta + c2 - 2.0 * c * d) / (2.0 * c2), "d < 0, m > (-2 beta + c^2 - 2 c d)/(2 c^2)"),
            (d > 0.0, false, (-2.0 * beta + c2 + 2.0 * c * d) / (2.0 * c2), "d > 0, m > (-2 beta + c^2 + 2 c d)/(2 c^2)"),
            (d < 0.0, true, (-2.0 * beta - c2 + 2.0 * c * d) / (2.0 * c2), "d < 0, m < (-2 beta - c^2 + 2 c d)/(2 c^2)"),
        ];
        let mut names = Vec::new();
        for (applies, below, bound, name) in regimes {
            if !applies {
                continue;
            }
            if (below && m < bound) || (!below && m > bound) {
                return Validity::Valid;
            }
            names.push(format!("{name} (bound {bound})"));
        }
        Validity::Violated(names.join(" or "))
    }
}

impl CatalogFamily for X1Trigonometric {
    fn denominator_scan(&self, m: f64) -> Validity {
        scan_verdict(
            self.roots(m)
                .into_iter()
                .map(|t| format!("denominator vanishes at sin(cx) = {t}"))
                .collect(),
        )
    }
    fn gauge_denominator(&self, x: f64, m: f64) -> Complex64 {
        let (c0, c1) = self.denominators(m)[0];
        Complex64::new(c0 + c1 * (self.c * x).sin(), 0.0)
    }
}

// ---------------------------------------------------------------------------

/// Jacobi ratio shared by the hyperbolic Poschl-Teller and complex Scarf
/// extensions, which differ only in the argument and prefactor.
#[derive(Debug, Clone, Copy)]
pub struct JacobiExtension {
    pub b: f64,
    pub ell: u32,
}

impl JacobiExtension {
    fn prefactor(&self) -> f64 {
        0.5 * (self.ell as f64 - 2.0 * self.b - 1.0)
    }

    fn plus_specs(&self, m: f64) -> (PolySpec, PolySpec) {
        let (b, l) = (self.b, self.ell);
        (
            PolySpec::jacobi(l - 1, -b + m + 0.5, -b - m - 0.5),
            PolySpec::jacobi(l, -b + m - 0.5, -b - m - 1.5),
        )
    }

    fn minus_specs(&self, m: f64) -> (PolySpec, PolySpec) {
        let (b, l) = (self.b, self.ell);
        (
            PolySpec::jacobi(l - 1, -b + m - 0.5, -b - m + 0.5),
            PolySpec::jacobi(l, -b + m - 1.5, -b - m - 0.5),
        )
    }

    /// `P_num(g(x)) / P_den(g(x))` for an argument jet `g`.
    fn ratio(specs: (PolySpec, PolySpec), arg: Jet) -> Jet {
        let (num, den) = specs;
        let eval = |s: &PolySpec| {
            let v = polykernel::poly_eval(s, arg.value).expect("validated spec");
            let d = polykernel::poly_deriv(s, arg.value).expect("validated spec");
            Jet::new(v, d * arg.deriv)
        };
        eval(&num) / eval(&den)
    }

    fn denominators(&self, m: f64) -> [PolySpec; 2] {
        [self.plus_specs(m).1, self.minus_specs(m).1]
    }
}

/// `W0 = -B/sinh(x) + m coth(x)` on `(0, inf)` with Jacobi `X_l` extension.
#[derive(Debug, Clone, Copy)]
pub struct XlPoschlTeller(pub JacobiExtension);

impl XlPoschlTeller {
    fn argument(x: f64) -> Jet {
        Jet::real(x.cosh(), x.sinh())
    }

    fn prefactor(&self, x: f64) -> Jet {
        Jet::real(self.0.prefactor() * x.sinh(), self.0.prefactor() * x.cosh())
    }

    fn roots(&self, m: f64) -> Vec<f64> {
        self.0
            .denominators(m)
            .iter()
            .flat_map(|s| polykernel::real_roots_in(s, (1.0, f64::INFINITY)))
            .collect()
    }
}

impl Superpotential for XlPoschlTeller {
    fn name(&self) -> String {
        FamilyTag::XlPoschlTeller.to_string()
    }
    fn domain(&self) -> Domain {
        Domain::new(0.0, f64::INFINITY)
    }
    fn length_scale(&self) -> f64 {
        1.0
    }
    fn k0(&self, x: f64) -> Jet {
        let (sh, ch) = (x.sinh(), x.cosh());
        Jet::real(-self.0.b / sh, self.0.b * ch / (sh * sh))
    }
    fn k1(&self, x: f64) -> Jet {
        let sh = x.sinh();
        Jet::real(x.cosh() / sh, -1.0 / (sh * sh))
    }
    fn w1_plus(&self, x: f64, m: f64) -> Jet {
        self.prefactor(x) * JacobiExtension::ratio(self.0.plus_specs(m), Self::argument(x))
    }
    fn w1_minus(&self, x: f64, m: f64) -> Jet {
        self.prefactor(x) * JacobiExtension::ratio(self.0.minus_specs(m), Self::argument(x))
    }
    fn poles(&self, m: f64) -> Vec<f64> {
        self.roots(m).into_iter().map(f64::acosh).collect()
    }
    fn validity(&self, m: f64) -> Validity {
        let b = self.0.b;
        if b >= -0.5 {
            return Validity::Violated(format!("B < -1/2 (B = {b})"));
        }
        let half = -0.5 * (1.0 + 2.0 * b);
        if m > -half && m < half {
            Validity::Valid
        } else {
            Validity::Violated(format!("(1 + 2B)/2 < m < -(1 + 2B)/2 = ({}, {half})", -half))
        }
    }
}

impl CatalogFamily for XlPoschlTeller {
    /// Checks that every denominator has all `l` roots inside `(-1, 1)`, which
    /// keeps them away from the image `[1, inf)` of `cosh`.
    fn denominator_scan(&self, m: f64) -> Validity {
        let l = self.0.ell as usize;
        let hits = self
            .0
            .denominators(m)
            .iter()
            .filter_map(|s| {
                let inside = polykernel::real_roots_in(s, (-1.0, 1.0)).len();
                (inside != l).then(|| format!("{s:?} has {inside} of {l} roots in (-1, 1)"))
            })
            .collect();
        scan_verdict(hits)
    }
    fn gauge_denominator(&self, x: f64, m: f64) -> Complex64 {
        let spec = self.0.plus_specs(m).1;
        polykernel::poly_eval(&spec, Complex64::new(x.cosh(), 0.0)).expect("validated spec")
    }
}

// ---------------------------------------------------------------------------

/// `W0 = i B/cosh(x) + m tanh(x)` on the real line, PT-symmetric Scarf II
/// with Jacobi `X_l` extension evaluated at `i sinh(x)`.
#[derive(Debug, Clone, Copy)]
pub struct XlPtScarf(pub JacobiExtension);

impl XlPtScarf {
    fn argument(x: f64) -> Jet {
        Jet::new(Complex64::new(0.0, x.sinh()), Complex64::new(0.0, x.cosh()))
    }

    fn prefactor(&self, x: f64) -> Jet {
        let p = Complex64::new(0.0, self.0.prefactor());
        Jet::real(x.cosh(), x.sinh()).scale(p)
    }

    /// Nonzero real `s` where `P(i s)` vanishes: common roots of the even
    /// (real) and odd (imaginary) parts of the denominator.
    fn common_roots(spec: &PolySpec) -> Vec<f64> {
        let coeffs = spec.monomial_coefficients();
        let mut re = vec![0.0; coeffs.len()];
        let mut im_over_s = vec![0.0; coeffs.len()];
        for (j, a) in coeffs.iter().enumerate() {
            let sign = if (j / 2) % 2 == 0 { 1.0 } else { -1.0 };
            if j % 2 == 0 {
                re[j] = sign * a;
            } else {
                im_over_s[j - 1] = sign * a;
            }
        }
        let horner = |c: &[f64], s: f64| c.iter().rev().fold(0.0, |acc, v| acc * s + v);
        let scale = |s: f64| coeffs.iter().rev().fold(0.0, |acc, v| acc * s.abs() + v.abs());
        polykernel::real_roots_of(&im_over_s, (f64::NEG_INFINITY, f64::INFINITY))
            .into_iter()
            .filter(|&s| s != 0.0 && horner(&re, s).abs() <= 1e-10 * scale(s))
            .collect()
    }
}

impl Superpotential for XlPtScarf {
    fn name(&self) -> String {
        FamilyTag::XlPtScarf.to_string()
    }
    fn domain(&self) -> Domain {
        Domain::new(f64::NEG_INFINITY, f64::INFINITY)
    }
    fn is_real(&self) -> bool {
        false
    }
    fn length_scale(&self) -> f64 {
        1.0
    }
    fn k0(&self, x: f64) -> Jet {
        let ch = x.cosh();
        Jet::new(
            Complex64::new(0.0, self.0.b / ch),
            Complex64::new(0.0, -self.0.b * x.sinh() / (ch * ch)),
        )
    }
    fn k1(&self, x: f64) -> Jet {
        let ch = x.cosh();
        Jet::real(x.tanh(), 1.0 / (ch * ch))
    }
    fn w1_plus(&self, x: f64, m: f64) -> Jet {
        self.prefactor(x) * JacobiExtension::ratio(self.0.plus_specs(m), Self::argument(x))
    }
    fn w1_minus(&self, x: f64, m: f64) -> Jet {
        self.prefactor(x) * JacobiExtension::ratio(self.0.minus_specs(m), Self::argument(x))
    }
    fn poles(&self, m: f64) -> Vec<f64> {
        let mut p: Vec<f64> = self
            .0
            .denominators(m)
            .iter()
            .flat_map(Self::common_roots)
            .map(f64::asinh)
            .collect();
        p.push(0.0);
        p
    }
    fn validity(&self, _m: f64) -> Validity {
        if (self.0.ell as f64 - 2.0 * self.0.b - 1.0).abs() < DEGENERATE_PREFACTOR_TOL {
            Validity::Violated("l - 2B - 1 != 0".into())
        } else {
            Validity::Valid
        }
    }
}

impl CatalogFamily for XlPtScarf {
    fn denominator_scan(&self, m: f64) -> Validity {
        let hits = self
            .0
            .denominators(m)
            .iter()
            .flat_map(Self::common_roots)
            .map(|s| format!("denominator vanishes at sinh(x) = {s}"))
            .collect();
        scan_verdict(hits)
    }
    fn gauge_denominator(&self, x: f64, m: f64) -> Complex64 {
        let spec = self.0.plus_specs(m).1;
        polykernel::poly_eval(&spec, Complex64::new(0.0, x.sinh())).expect("validated spec")
    }
    fn puncture(&self) -> Option<f64> {
        Some(0.0)
    }
}

// ---------------------------------------------------------------------------

/// `W0 = omega x / 2 + m/x` on `(0, inf)` with Laguerre `X_l` extension at
/// the negative argument `-omega x^2 / 2`.
#[derive(Debug, Clone, Copy)]
pub struct XlRadialOscillator {
    pub omega: f64,
    pub ell: u32,
}

impl XlRadialOscillator {
    fn argument(&self, x: f64) -> Jet {
        Jet::real(-0.5 * self.omega * x * x, -self.omega * x)
    }

    fn ratio(&self, x: f64, num: PolySpec, den: PolySpec) -> Jet {
        let arg = self.argument(x);
        let eval = |s: &PolySpec| {
            let v = polykernel::poly_eval(s, arg.value).expect("validated spec");
            let d = polykernel::poly_deriv(s, arg.value).expect("validated spec");
            Jet::new(v, d * arg.deriv)
        };
        Jet::real(self.omega * x, self.omega) * (eval(&num) / eval(&den))
    }

    fn denominators(&self, m: f64) -> [PolySpec; 2] {
        [
            PolySpec::laguerre(self.ell, -m - 1.5),
            PolySpec::laguerre(self.ell, -m - 0.5),
        ]
    }
}

impl Superpotential for XlRadialOscillator {
    fn name(&self) -> String {
        FamilyTag::XlRadialOscillator.to_string()
    }
    fn domain(&self) -> Domain {
        Domain::new(0.0, f64::INFINITY)
    }
    fn length_scale(&self) -> f64 {
        2.0 / self.omega.sqrt()
    }
    fn k0(&self, x: f64) -> Jet {
        Jet::real(0.5 * self.omega * x, 0.5 * self.omega)
    }
    fn k1(&self, x: f64) -> Jet {
        Jet::real(1.0 / x, -1.0 / (x * x))
    }
    fn w1_plus(&self, x: f64, m: f64) -> Jet {
        let l = self.ell;
        self.ratio(x, PolySpec::laguerre(l - 1, -m - 0.5), PolySpec::laguerre(l, -m - 1.5))
    }
    fn w1_minus(&self, x: f64, m: f64) -> Jet {
        let l = self.ell;
        self.ratio(x, PolySpec::laguerre(l - 1, -m + 0.5), PolySpec::laguerre(l, -m - 0.5))
    }
    fn poles(&self, m: f64) -> Vec<f64> {
        self.denominators(m)
            .iter()
            .flat_map(|s| polykernel::real_roots_in(s, (f64::NEG_INFINITY, 0.0)))
            .map(|t| (-2.0 * t / self.omega).sqrt())
            .collect()
    }
    fn validity(&self, m: f64) -> Validity {
        if m < -0.5 {
            Validity::Valid
        } else {
            Validity::Violated("m < -1/2".into())
        }
    }
}

impl CatalogFamily for XlRadialOscillator {
    /// Checks that every denominator has all `l` roots in `(0, inf)`, so none
    /// is reached by the negative argument.
    fn denominator_scan(&self, m: f64) -> Validity {
        let l = self.ell as usize;
        let hits = self
            .denominators(m)
            .iter()
            .filter_map(|s| {
                let positive = polykernel::real_roots_in(s, (0.0, f64::INFINITY)).len();
                (positive != l).then(|| format!("{s:?} has {positive} of {l} roots in (0, inf)"))
            })
            .collect();
        scan_verdict(hits)
    }
    fn gauge_denominator(&self, x: f64, m: f64) -> Complex64 {
        let spec = PolySpec::laguerre(self.ell, -m - 1.5);
        polykernel::poly_eval(&spec, self.argument(x).value).expect("validated spec")
    }
}

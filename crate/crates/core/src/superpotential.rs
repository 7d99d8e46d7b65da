//! Affine-in-`m` superpotentials with rational extension terms:
//! `W(x,m) = k0(x) + m k1(x) + W1+(x,m) - W1-(x,m)`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default radius kept clear around every denominator root.
pub const DEFAULT_POLE_RADIUS: f64 = 1e-3;

/// Largest `|W0|` allowed at the edge of a compressed infinite window.
pub const WINDOW_W0_CAP: f64 = 1e6;

/// A value together with its first `x`-derivative.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jet {
    pub value: Complex64,
    pub deriv: Complex64,
}

impl Jet {
    pub fn new(value: Complex64, deriv: Complex64) -> Self {
        Jet { value, deriv }
    }

    pub fn real(value: f64, deriv: f64) -> Self {
        Jet::new(Complex64::new(value, 0.0), Complex64::new(deriv, 0.0))
    }

    pub fn constant(value: f64) -> Self {
        Jet::real(value, 0.0)
    }

    pub fn zero() -> Self {
        Jet::default()
    }

    pub fn scale(self, s: Complex64) -> Self {
        Jet::new(self.value * s, self.deriv * s)
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite() && self.deriv.is_finite()
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        Jet::new(self.value + o.value, self.deriv + o.deriv)
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        Jet::new(self.value - o.value, self.deriv - o.deriv)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet::new(-self.value, -self.deriv)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        Jet::new(self.value * o.value, self.deriv * o.value + self.value * o.deriv)
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, s: f64) -> Jet {
        Jet::new(self.value * s, self.deriv * s)
    }
}

impl Div for Jet {
    type Output = Jet;
    fn div(self, o: Jet) -> Jet {
        let value = self.value / o.value;
        Jet::new(value, (self.deriv - value * o.deriv) / o.value)
    }
}

/// Open interval `(lo, hi)`; either end may be infinite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    pub lo: f64,
    pub hi: f64,
}

impl Domain {
    pub const fn new(lo: f64, hi: f64) -> Self {
        Domain { lo, hi }
    }

    pub fn contains(&self, x: f64) -> bool {
        x > self.lo && x < self.hi
    }

    pub fn is_finite(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }
}

/// Outcome of a non-singularity test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Validity {
    Valid,
    Violated(String),
}

impl Validity {
    pub fn is_valid(&self) -> bool {
        matches!(self, Validity::Valid)
    }
}

impl fmt::Display for Validity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Validity::Valid => write!(f, "valid"),
            Validity::Violated(what) => write!(f, "violated: {what}"),
        }
    }
}

/// Evaluation contract shared by every family.
///
/// `k0`, `k1` and the extension terms return value and analytic derivative.
/// Families are immutable, so all methods are safe to call concurrently.
pub trait Superpotential: Send + Sync {
    fn name(&self) -> String;

    fn domain(&self) -> Domain;

    /// Whether evaluations at real `x` are real.
    fn is_real(&self) -> bool {
        true
    }

    /// Natural length used to compress infinite domains.
    fn length_scale(&self) -> f64 {
        1.0
    }

    fn k0(&self, x: f64) -> Jet;

    fn k1(&self, x: f64) -> Jet;

    fn w1_plus(&self, x: f64, m: f64) -> Jet;

    fn w1_minus(&self, x: f64, m: f64) -> Jet;

    /// Points inside the domain where a denominator of `W(., m)` vanishes,
    /// plus any puncture the family declares.
    fn poles(&self, _m: f64) -> Vec<f64> {
        Vec::new()
    }

    /// Analytic non-singularity predicate for `W(., m)`.
    fn validity(&self, _m: f64) -> Validity {
        Validity::Valid
    }

    /// `W0 = k0 + m k1`.
    fn w0(&self, x: f64, m: f64) -> Jet {
        self.k0(x) + self.k1(x) * m
    }

    /// `U = W1+ - W1-`.
    fn u(&self, x: f64, m: f64) -> Jet {
        self.w1_plus(x, m) - self.w1_minus(x, m)
    }

    /// Full superpotential with derivative, no pole check.
    fn w(&self, x: f64, m: f64) -> Jet {
        self.w0(x, m) + self.u(x, m)
    }
}

impl<T: Superpotential + ?Sized> Superpotential for Arc<T> {
    fn name(&self) -> String {
        (**self).name()
    }
    fn domain(&self) -> Domain {
        (**self).domain()
    }
    fn is_real(&self) -> bool {
        (**self).is_real()
    }
    fn length_scale(&self) -> f64 {
        (**self).length_scale()
    }
    fn k0(&self, x: f64) -> Jet {
        (**self).k0(x)
    }
    fn k1(&self, x: f64) -> Jet {
        (**self).k1(x)
    }
    fn w1_plus(&self, x: f64, m: f64) -> Jet {
        (**self).w1_plus(x, m)
    }
    fn w1_minus(&self, x: f64, m: f64) -> Jet {
        (**self).w1_minus(x, m)
    }
    fn poles(&self, m: f64) -> Vec<f64> {
        (**self).poles(m)
    }
    fn validity(&self, m: f64) -> Validity {
        (**self).validity(m)
    }
}

type ComponentFn = Arc<dyn Fn(f64) -> Jet + Send + Sync>;

/// Unextended family (`W1+ = W1- = 0`) built from closures.
#[derive(Clone)]
pub struct ClassicalFamily {
    name: String,
    domain: Domain,
    real: bool,
    k0: ComponentFn,
    k1: ComponentFn,
}

impl ClassicalFamily {
    pub fn new(
        name: impl Into<String>,
        domain: Domain,
        k0: impl Fn(f64) -> Jet + Send + Sync + 'static,
        k1: impl Fn(f64) -> Jet + Send + Sync + 'static,
    ) -> Self {
        ClassicalFamily {
            name: name.into(),
            domain,
            real: true,
            k0: Arc::new(k0),
            k1: Arc::new(k1),
        }
    }

    pub fn complex(mut self) -> Self {
        self.real = false;
        self
    }

    /// `W = m/x` on `(0, inf)`: the free radial problem.
    pub fn free_radial() -> Self {
        ClassicalFamily::new(
            "free-radial",
            Domain::new(0.0, f64::INFINITY),
            |_| Jet::zero(),
            |x| Jet::real(1.0 / x, -1.0 / (x * x)),
        )
    }

    /// `W = omega x / 2 + m / x`: the unextended radial oscillator.
    pub fn radial_oscillator(omega: f64) -> Self {
        ClassicalFamily::new(
            "radial-oscillator",
            Domain::new(0.0, f64::INFINITY),
            move |x| Jet::real(0.5 * omega * x, 0.5 * omega),
            |x| Jet::real(1.0 / x, -1.0 / (x * x)),
        )
    }
}

impl fmt::Debug for ClassicalFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ClassicalFamily")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .finish()
    }
}

impl Superpotential for ClassicalFamily {
    fn name(&self) -> String {
        self.name.clone()
    }
    fn domain(&self) -> Domain {
        self.domain
    }
    fn is_real(&self) -> bool {
        self.real
    }
    fn k0(&self, x: f64) -> Jet {
        (self.k0)(x)
    }
    fn k1(&self, x: f64) -> Jet {
        (self.k1)(x)
    }
    fn w1_plus(&self, _x: f64, _m: f64) -> Jet {
        Jet::zero()
    }
    fn w1_minus(&self, _x: f64, _m: f64) -> Jet {
        Jet::zero()
    }
}

/// Fails with a pole error if `x` is within `radius` of any pole at `m`.
pub fn check_pole_distance(poles: &[f64], x: f64, radius: f64) -> Result<()> {
    match poles.iter().find(|p| (x - **p).abs() < radius) {
        Some(&root) => Err(Error::Pole { x, root, radius }),
        None => Ok(()),
    }
}

fn checked_point<F: Superpotential + ?Sized>(family: &F, x: f64, m: f64) -> Result<()> {
    if !x.is_finite() || !m.is_finite() {
        return Err(Error::Domain(format!("non-finite input x = {x}, m = {m}")));
    }
    if !family.domain().contains(x) {
        return Err(Error::Domain(format!(
            "x = {x} outside domain {:?} of {}",
            family.domain(),
            family.name()
        )));
    }
    check_pole_distance(&family.poles(m), x, DEFAULT_POLE_RADIUS)
}

/// `W(x,m)` with domain and pole-proximity checks.
pub fn eval_w<F: Superpotential + ?Sized>(family: &F, m: f64, x: f64) -> Result<Complex64> {
    checked_point(family, x, m)?;
    Ok(family.w(x, m).value)
}

/// `dW/dx` assembled from the analytic component derivatives.
pub fn eval_w_deriv<F: Superpotential + ?Sized>(family: &F, m: f64, x: f64) -> Result<Complex64> {
    checked_point(family, x, m)?;
    Ok(family.w(x, m).deriv)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mapping {
    Linear,
    TanhCompressed,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GridSpec {
    pub n_points: usize,
    /// Fraction of the (compressed) unit coordinate trimmed at each end.
    pub boundary_margin: f64,
    /// Minimum distance, in `x`, from every denominator root.
    pub pole_exclusion_radius: f64,
    /// Used for infinite domains; finite domains are always sampled linearly.
    pub mapping: Mapping,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            n_points: 512,
            boundary_margin: 0.01,
            pole_exclusion_radius: DEFAULT_POLE_RADIUS,
            mapping: Mapping::TanhCompressed,
        }
    }
}

impl GridSpec {
    pub fn with_points(n_points: usize) -> Self {
        GridSpec {
            n_points,
            ..GridSpec::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_points < 16 {
            return Err(Error::Usage(format!("grid needs at least 16 points, got {}", self.n_points)));
        }
        if !(self.boundary_margin > 0.0 && self.boundary_margin < 0.5) {
            return Err(Error::Usage(format!(
                "boundary margin {} not in (0, 0.5)",
                self.boundary_margin
            )));
        }
        if !(self.pole_exclusion_radius > 0.0 && self.pole_exclusion_radius.is_finite()) {
            return Err(Error::Usage(format!(
                "pole exclusion radius {} must be positive",
                self.pole_exclusion_radius
            )));
        }
        Ok(())
    }
}

/// Monotone map from the unit coordinate `s` onto the domain.
#[derive(Debug, Clone, Copy)]
enum UnitMap {
    Linear { lo: f64, width: f64 },
    HalfRight { lo: f64, scale: f64 },
    HalfLeft { hi: f64, scale: f64 },
    Full { scale: f64 },
}

impl UnitMap {
    fn for_domain(domain: Domain, scale: f64) -> Self {
        match (domain.lo.is_finite(), domain.hi.is_finite()) {
            (true, true) => UnitMap::Linear {
                lo: domain.lo,
                width: domain.hi - domain.lo,
            },
            (true, false) => UnitMap::HalfRight { lo: domain.lo, scale },
            (false, true) => UnitMap::HalfLeft { hi: domain.hi, scale },
            (false, false) => UnitMap::Full { scale },
        }
    }

    fn with_scale(self, scale: f64) -> Self {
        match self {
            UnitMap::Linear { .. } => self,
            UnitMap::HalfRight { lo, .. } => UnitMap::HalfRight { lo, scale },
            UnitMap::HalfLeft { hi, .. } => UnitMap::HalfLeft { hi, scale },
            UnitMap::Full { .. } => UnitMap::Full { scale },
        }
    }

    fn scale(&self) -> f64 {
        match *self {
            UnitMap::Linear { width, .. } => width,
            UnitMap::HalfRight { scale, .. } | UnitMap::HalfLeft { scale, .. } | UnitMap::Full { scale } => scale,
        }
    }

    fn forward(&self, s: f64) -> f64 {
        match *self {
            UnitMap::Linear { lo, width } => lo + width * s,
            UnitMap::HalfRight { lo, scale } => lo + scale * s.atanh(),
            UnitMap::HalfLeft { hi, scale } => hi - scale * (1.0 - s).atanh(),
            UnitMap::Full { scale } => scale * (2.0 * s - 1.0).atanh(),
        }
    }

    fn inverse(&self, x: f64) -> f64 {
        match *self {
            UnitMap::Linear { lo, width } => (x - lo) / width,
            UnitMap::HalfRight { lo, scale } => ((x - lo) / scale).tanh(),
            UnitMap::HalfLeft { hi, scale } => 1.0 - ((hi - x) / scale).tanh(),
            UnitMap::Full { scale } => 0.5 * ((x / scale).tanh() + 1.0),
        }
    }
}

/// Builds `spec.n_points` abscissae strictly inside the domain that keep
/// `pole_exclusion_radius` away from every pole of `W(., m)`.
///
/// Infinite ends are compressed by `x = x0 + L atanh(s)` with `L` the
/// family length scale, halved until `|W0| <= 1e6` at the window edges.
pub fn make_grid<F: Superpotential + ?Sized>(family: &F, m: f64, spec: &GridSpec) -> Result<Vec<f64>> {
    spec.validate()?;
    if let Validity::Violated(inequality) = family.validity(m) {
        return Err(Error::InvalidParameters {
            family: family.name(),
            inequality,
        });
    }
    let domain = family.domain();
    let s_lo = spec.boundary_margin;
    let s_hi = 1.0 - spec.boundary_margin;

    let mut map = UnitMap::for_domain(domain, family.length_scale());
    if !domain.is_finite() {
        for _ in 0..60 {
            let ok = [s_lo, s_hi].iter().all(|&s| {
                let x = map.forward(s);
                let w0 = family.w0(x, m).value.norm();
                w0.is_finite() && w0 <= WINDOW_W0_CAP
            });
            if ok {
                break;
            }
            map = map.with_scale(map.scale() * 0.5);
        }
    }

    // Allowed segments of the unit coordinate after removing pole neighbourhoods.
    let radius = spec.pole_exclusion_radius * (1.0 + 1e-9);
    let mut forbidden: Vec<(f64, f64)> = family
        .poles(m)
        .into_iter()
        .map(|p| {
            let a = if p - radius > domain.lo { map.inverse(p - radius) } else { 0.0 };
            let b = if p + radius < domain.hi { map.inverse(p + radius) } else { 1.0 };
            (a, b)
        })
        .collect();
    forbidden.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut segments = Vec::new();
    let mut start = s_lo;
    for (a, b) in forbidden {
        if b <= start {
            continue;
        }
        if a > start {
            segments.push((start, a.min(s_hi)));
        }
        start = start.max(b);
        if start >= s_hi {
            break;
        }
    }
    if start < s_hi {
        segments.push((start, s_hi));
    }
    segments.retain(|(a, b)| b > a);
    let total: f64 = segments.iter().map(|(a, b)| b - a).sum();
    if segments.is_empty() || total <= 0.0 {
        return Err(Error::Domain(format!(
            "pole exclusion leaves no room for a grid in {:?}",
            domain
        )));
    }

    let n = spec.n_points;
    let mut points = Vec::with_capacity(n);
    let mut seg = 0;
    let mut consumed = 0.0;
    for i in 0..n {
        let target = total * i as f64 / (n - 1) as f64;
        while seg + 1 < segments.len() && target > consumed + (segments[seg].1 - segments[seg].0) {
            consumed += segments[seg].1 - segments[seg].0;
            seg += 1;
        }
        let (a, b) = segments[seg];
        let s = (a + (target - consumed)).min(b);
        points.push(map.forward(s));
    }
    points.dedup();
    if points.len() != n || points.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Domain(format!(
            "grid of {n} points is not resolvable in double precision"
        )));
    }
    Ok(points)
}

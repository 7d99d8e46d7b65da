//! Grid checks of the translation relation, the compatibility condition,
//! the Infeld-Hull relations, the potential-algebra closure condition and
//! the reduction chain linking the last to the first two.
//!
//! With `P = W1+`, `Q = W1-`, `F = k1`, `G = -k0` and `U = P - Q`:
//!
//! ```text
//! translation    Q(x,m) - P(x,m-1)
//! compatibility  P^2 + P' + Q^2 + Q' - 2 W0 Q + 2 W0 P - 2 Q P      (m-independent)
//! algebra        U(m-1)^2 - 2G(U(m-1) - U(m)) - U(m)^2
//!                  + 2F((m-1)U(m-1) - m U(m)) - U'(m-1) - U'(m)     (= 0)
//! ```
//!
//! Residuals are max-abs (complex modulus) over the grid.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::catalog::{AlgebraConstants, ParamPoint};
use crate::error::{Error, Result};
use crate::polykernel::CompensatedSum;
use crate::superpotential::{check_pole_distance, GridSpec, Superpotential, Validity};

pub const TRANSLATION_TOL: f64 = 1e-12;
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Translation,
    Compatibility,
    InfeldHull,
    Algebra,
    Equivalence,
    Remainder,
    Spectrum,
}

impl Check {
    pub const ALL: [Check; 7] = [
        Check::Translation,
        Check::Compatibility,
        Check::InfeldHull,
        Check::Algebra,
        Check::Equivalence,
        Check::Remainder,
        Check::Spectrum,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Check::Translation => "translation",
            Check::Compatibility => "compatibility",
            Check::InfeldHull => "infeld_hull",
            Check::Algebra => "algebra",
            Check::Equivalence => "equivalence",
            Check::Remainder => "remainder",
            Check::Spectrum => "spectrum",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Check {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Check::ALL
            .into_iter()
            .find(|c| c.as_str() == s.replace('-', "_"))
            .ok_or_else(|| Error::Usage(format!("unknown check '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    pub translation: f64,
    pub compatibility: f64,
    pub infeld_hull: f64,
    pub algebra: f64,
    pub equivalence: f64,
    pub remainder: f64,
    /// Relative eigenvalue mismatch.
    pub spectrum: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            translation: TRANSLATION_TOL,
            compatibility: DEFAULT_TOL,
            infeld_hull: DEFAULT_TOL,
            algebra: DEFAULT_TOL,
            equivalence: DEFAULT_TOL,
            remainder: DEFAULT_TOL,
            spectrum: 1e-4,
        }
    }
}

impl Tolerances {
    /// Every tolerance set to `tol`, except the translation one which keeps
    /// its tighter default unless `tol` is smaller.
    pub fn uniform(tol: f64) -> Self {
        Tolerances {
            translation: TRANSLATION_TOL.min(tol),
            compatibility: tol,
            infeld_hull: tol,
            algebra: tol,
            equivalence: tol,
            remainder: tol,
            spectrum: Tolerances::default().spectrum,
        }
    }

    pub fn for_check(&self, check: Check) -> f64 {
        match check {
            Check::Translation => self.translation,
            Check::Compatibility => self.compatibility,
            Check::InfeldHull => self.infeld_hull,
            Check::Algebra => self.algebra,
            Check::Equivalence => self.equivalence,
            Check::Remainder => self.remainder,
            Check::Spectrum => self.spectrum,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for c in Check::ALL {
            let t = self.for_check(c);
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::Usage(format!("tolerance for {c} must be positive, got {t}")));
            }
        }
        Ok(())
    }
}

/// A grid with the pole radius it was built with.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub points: Vec<f64>,
    pub pole_exclusion_radius: f64,
}

impl Grid {
    pub fn new(points: Vec<f64>, pole_exclusion_radius: f64) -> Self {
        Grid {
            points,
            pole_exclusion_radius,
        }
    }

    pub fn build<F: Superpotential + ?Sized>(family: &F, m: f64, spec: &GridSpec) -> Result<Self> {
        Ok(Grid::new(crate::superpotential::make_grid(family, m, spec)?, spec.pole_exclusion_radius))
    }
}

/// Fails if `m` is outside the validity region or a grid point sits near a pole.
fn ensure_clear<F: Superpotential + ?Sized>(family: &F, m: f64, grid: &Grid) -> Result<()> {
    if let Validity::Violated(inequality) = family.validity(m) {
        return Err(Error::InvalidParameters {
            family: family.name(),
            inequality: format!("{inequality} (at m = {m})"),
        });
    }
    let poles = family.poles(m);
    for &x in &grid.points {
        check_pole_distance(&poles, x, grid.pole_exclusion_radius)?;
    }
    Ok(())
}

fn max_abs(values: impl Iterator<Item = Complex64>) -> f64 {
    values.map(|v| v.norm()).fold(0.0, f64::max)
}

/// Max over the grid of `|W1-(x,m) - W1+(x,m-1)|`.
pub fn check_translation<F: Superpotential + ?Sized>(family: &F, m: f64, grid: &Grid) -> Result<f64> {
    ensure_clear(family, m, grid)?;
    ensure_clear(family, m - 1.0, grid)?;
    Ok(max_abs(
        grid.points
            .iter()
            .map(|&x| family.w1_minus(x, m).value - family.w1_plus(x, m - 1.0).value),
    ))
}

/// The seven-term compatibility expression; equals `epsilon(x)` when the
/// condition holds.
pub fn compatibility_terms<F: Superpotential + ?Sized>(family: &F, m: f64, x: f64) -> [Complex64; 7] {
    let p = family.w1_plus(x, m);
    let q = family.w1_minus(x, m);
    let w0 = family.w0(x, m).value;
    [
        p.value * p.value,
        p.deriv,
        q.value * q.value,
        q.deriv,
        -2.0 * w0 * q.value,
        2.0 * w0 * p.value,
        -2.0 * q.value * p.value,
    ]
}

fn lhs_unchecked<F: Superpotential + ?Sized>(family: &F, m: f64, x: f64) -> Complex64 {
    let terms = compatibility_terms(family, m, x);
    let re: CompensatedSum = terms.iter().map(|t| t.re).collect();
    let im: CompensatedSum = terms.iter().map(|t| t.im).collect();
    Complex64::new(re.value(), im.value())
}

/// Left side of the compatibility condition at a single point.
pub fn compatibility_lhs<F: Superpotential + ?Sized>(family: &F, m: f64, x: f64) -> Result<Complex64> {
    if !family.domain().contains(x) {
        return Err(Error::Domain(format!("x = {x} outside domain of {}", family.name())));
    }
    check_pole_distance(&family.poles(m), x, crate::superpotential::DEFAULT_POLE_RADIUS)?;
    Ok(lhs_unchecked(family, m, x))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompatibilityOutcome {
    /// Max over grid and over m-pairs of the pointwise spread.
    pub residual: f64,
    /// `(x, epsilon(x))` taken at the first m.
    pub epsilon_samples: Vec<(f64, Complex64)>,
}

pub fn check_compatibility<F: Superpotential + ?Sized>(
    family: &F,
    m_list: &[f64],
    grid: &Grid,
) -> Result<CompatibilityOutcome> {
    if m_list.len() < 2 {
        return Err(Error::Usage(format!(
            "compatibility needs at least two m values, got {}",
            m_list.len()
        )));
    }
    for &m in m_list {
        ensure_clear(family, m, grid)?;
    }
    let mut residual: f64 = 0.0;
    let mut epsilon_samples = Vec::with_capacity(grid.points.len());
    for &x in &grid.points {
        let values: Vec<Complex64> = m_list.iter().map(|&m| lhs_unchecked(family, m, x)).collect();
        for i in 0..values.len() {
            for j in i + 1..values.len() {
                residual = residual.max((values[i] - values[j]).norm());
            }
        }
        epsilon_samples.push((x, values[0]));
    }
    Ok(CompatibilityOutcome {
        residual,
        epsilon_samples,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InfeldHullOutcome {
    pub constants: AlgebraConstants,
    /// Max deviation of `F' + F^2` from its grid mean.
    pub a_constancy: f64,
    /// Max deviation of `G' + F G` from its grid mean (including any
    /// imaginary part of the mean).
    pub b_constancy: f64,
}

impl InfeldHullOutcome {
    pub fn constancy_residual(&self) -> f64 {
        self.a_constancy.max(self.b_constancy)
    }

    /// Constancy and distance to `expected`, whichever is larger.
    pub fn residual_against(&self, expected: Option<AlgebraConstants>) -> f64 {
        let mut r = self.constancy_residual();
        if let Some(e) = expected {
            r = r.max((self.constants.a - e.a).abs()).max((self.constants.b - e.b).abs());
        }
        r
    }
}

fn mean_and_spread(values: &[Complex64]) -> (Complex64, f64) {
    let n = values.len() as f64;
    let re: CompensatedSum = values.iter().map(|v| v.re).collect();
    let im: CompensatedSum = values.iter().map(|v| v.im).collect();
    let mean = Complex64::new(re.value() / n, im.value() / n);
    (mean, max_abs(values.iter().map(|v| v - mean)))
}

/// Infers `a`, `b` from `F = k1`, `G = -k0` on the grid.
pub fn check_infeld_hull<F: Superpotential + ?Sized>(family: &F, grid: &Grid) -> Result<InfeldHullOutcome> {
    if grid.points.is_empty() {
        return Err(Error::Usage("empty grid".into()));
    }
    let mut a_vals = Vec::with_capacity(grid.points.len());
    let mut b_vals = Vec::with_capacity(grid.points.len());
    for &x in &grid.points {
        let f = family.k1(x);
        let g = -family.k0(x);
        a_vals.push(f.deriv + f.value * f.value);
        b_vals.push(g.deriv + f.value * g.value);
    }
    let (a_mean, a_spread) = mean_and_spread(&a_vals);
    let (b_mean, b_spread) = mean_and_spread(&b_vals);
    Ok(InfeldHullOutcome {
        constants: AlgebraConstants {
            a: a_mean.re,
            b: b_mean.re,
        },
        a_constancy: a_spread.max(a_mean.im.abs()),
        b_constancy: b_spread.max(b_mean.im.abs()),
    })
}

/// The closure condition in its shifted form, pointwise.
fn algebra_expression<F: Superpotential + ?Sized>(family: &F, m: f64, x: f64) -> Complex64 {
    let f = family.k1(x).value;
    let g = -family.k0(x).value;
    let u_prev = family.u(x, m - 1.0);
    let u = family.u(x, m);
    u_prev.value * u_prev.value - 2.0 * g * (u_prev.value - u.value) - u.value * u.value
        + 2.0 * f * ((m - 1.0) * u_prev.value - m * u.value)
        - u_prev.deriv
        - u.deriv
}

/// The same expression after substituting `F`, `G`, `U` by `k1`, `-k0`, `W1+ - W1-`.
fn substituted_expression<F: Superpotential + ?Sized>(family: &F, m: f64, x: f64) -> Complex64 {
    let (k0, k1) = (family.k0(x).value, family.k1(x).value);
    let p_prev = family.w1_plus(x, m - 1.0);
    let q_prev = family.w1_minus(x, m - 1.0);
    let p = family.w1_plus(x, m);
    let q = family.w1_minus(x, m);
    let diff_prev = q_prev.value - p_prev.value;
    let diff = q.value - p.value;
    -2.0 * (k0 + (m - 1.0) * k1) * diff_prev + diff_prev * diff_prev + 2.0 * (k0 + m * k1) * diff
        - diff * diff
        + q_prev.deriv
        + q.deriv
        - p_prev.deriv
        - p.deriv
}

/// What the substituted expression reduces to once the compatibility
/// condition is used at `m` and `m - 1`.
fn reduced_expression<F: Superpotential + ?Sized>(family: &F, m: f64, x: f64) -> Complex64 {
    -2.0 * family.w1_plus(x, m - 1.0).deriv + 2.0 * family.w1_minus(x, m).deriv
}

pub fn check_algebra_condition<F: Superpotential + ?Sized>(family: &F, m: f64, grid: &Grid) -> Result<f64> {
    ensure_clear(family, m, grid)?;
    ensure_clear(family, m - 1.0, grid)?;
    Ok(max_abs(grid.points.iter().map(|&x| algebra_expression(family, m, x))))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainResiduals {
    /// Closure form vs its substituted form (pure algebra).
    pub shifted_vs_substituted: f64,
    /// Substituted form vs reduced form (uses the compatibility condition).
    pub substituted_vs_reduced: f64,
    /// Reduced form vs zero (uses the translation relation).
    pub reduced_vs_zero: f64,
}

impl ChainResiduals {
    pub fn max(&self) -> f64 {
        self.shifted_vs_substituted
            .max(self.substituted_vs_reduced)
            .max(self.reduced_vs_zero)
    }
}

/// Replays the reduction of the closure condition step by step.
pub fn check_equivalence_chain<F: Superpotential + ?Sized>(
    family: &F,
    m: f64,
    grid: &Grid,
) -> Result<ChainResiduals> {
    ensure_clear(family, m, grid)?;
    ensure_clear(family, m - 1.0, grid)?;
    let mut out = ChainResiduals {
        shifted_vs_substituted: 0.0,
        substituted_vs_reduced: 0.0,
        reduced_vs_zero: 0.0,
    };
    for &x in &grid.points {
        let e12 = algebra_expression(family, m, x);
        let e14 = substituted_expression(family, m, x);
        let e15 = reduced_expression(family, m, x);
        out.shifted_vs_substituted = out.shifted_vs_substituted.max((e12 - e14).norm());
        out.substituted_vs_reduced = out.substituted_vs_reduced.max((e14 - e15).norm());
        out.reduced_vs_zero = out.reduced_vs_zero.max(e15.norm());
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckResult {
    pub fn new(residual: f64, tolerance: f64) -> Self {
        CheckResult {
            residual,
            tolerance,
            pass: residual < tolerance,
            note: None,
        }
    }

    pub fn skipped(reason: impl Into<String>) -> Self {
        CheckResult {
            residual: 0.0,
            tolerance: 0.0,
            pass: true,
            note: Some(format!("skipped: {}", reason.into())),
        }
    }
}

/// `(x, Re eps, Im eps)`.
pub type EpsilonSample = (f64, f64, f64);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub family: String,
    pub params: ParamPoint,
    pub m_list: Vec<f64>,
    pub grid: GridSpec,
    pub tolerances: Tolerances,
    pub checks: BTreeMap<Check, CheckResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chain: Option<ChainResiduals>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inferred_a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inferred_b: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constancy_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<AlgebraConstants>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub epsilon_samples: Vec<EpsilonSample>,
}

impl ResidualReport {
    pub fn all_pass(&self) -> bool {
        self.checks.values().all(|c| c.pass)
    }
}

/// Inputs for one parameter point.
#[derive(Clone)]
pub struct PointRun<'a> {
    pub family: &'a dyn Superpotential,
    pub name: String,
    pub params: ParamPoint,
    pub m_list: Vec<f64>,
    pub grid: GridSpec,
    pub tolerances: Tolerances,
    pub expected: Option<AlgebraConstants>,
}

/// Runs the identity checks among `checks` (remainder and spectrum are
/// handled by the spectral module) and assembles the report.
pub fn run_identity_checks(run: &PointRun<'_>, checks: &[Check]) -> Result<ResidualReport> {
    let family = run.family;
    let m = *run
        .m_list
        .first()
        .ok_or_else(|| Error::Usage("empty m list".into()))?;
    let grid = Grid::build(family, m, &run.grid)?;
    let tol = &run.tolerances;
    let mut report = ResidualReport {
        family: run.name.clone(),
        params: run.params.clone(),
        m_list: run.m_list.clone(),
        grid: run.grid,
        tolerances: *tol,
        checks: BTreeMap::new(),
        chain: None,
        inferred_a: None,
        inferred_b: None,
        constancy_residual: None,
        expected: run.expected,
        epsilon_samples: Vec::new(),
    };
    for &check in checks {
        let result = match check {
            Check::Translation => CheckResult::new(check_translation(family, m, &grid)?, tol.translation),
            Check::Compatibility => {
                let out = check_compatibility(family, &run.m_list, &grid)?;
                report.epsilon_samples = out.epsilon_samples.iter().map(|(x, e)| (*x, e.re, e.im)).collect();
                CheckResult::new(out.residual, tol.compatibility)
            }
            Check::InfeldHull => {
                let out = check_infeld_hull(family, &grid)?;
                report.inferred_a = Some(out.constants.a);
                report.inferred_b = Some(out.constants.b);
                report.constancy_residual = Some(out.constancy_residual());
                CheckResult::new(out.residual_against(run.expected), tol.infeld_hull)
            }
            Check::Algebra => CheckResult::new(check_algebra_condition(family, m, &grid)?, tol.algebra),
            Check::Equivalence => {
                let chain = check_equivalence_chain(family, m, &grid)?;
                report.chain = Some(chain);
                CheckResult::new(chain.max(), tol.equivalence)
            }
            Check::Remainder | Check::Spectrum => continue,
        };
        report.checks.insert(check, result);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::superpotential::{ClassicalFamily, Jet};

    fn oscillator_grid() -> (ClassicalFamily, Grid) {
        let f = ClassicalFamily::radial_oscillator(1.5);
        let g = Grid::build(&f, -2.0, &GridSpec::default()).unwrap();
        (f, g)
    }

    #[test]
    fn unextended_family_is_exactly_zero() {
        let (f, g) = oscillator_grid();
        assert_eq!(check_translation(&f, -2.0, &g).unwrap(), 0.0);
        let c = check_compatibility(&f, &[-2.0, -3.0, -4.0], &g).unwrap();
        assert_eq!(c.residual, 0.0);
        assert!(c.epsilon_samples.iter().all(|(_, e)| *e == Complex64::new(0.0, 0.0)));
        assert_eq!(check_algebra_condition(&f, -2.0, &g).unwrap(), 0.0);
        let chain = check_equivalence_chain(&f, -2.0, &g).unwrap();
        assert_eq!(chain.max(), 0.0);
        assert_eq!(compatibility_lhs(&f, 0.7, 1.3).unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn compatibility_needs_two_values() {
        let (f, g) = oscillator_grid();
        assert!(matches!(check_compatibility(&f, &[-2.0], &g), Err(Error::Usage(_))));
    }

    #[test]
    fn infeld_hull_for_oscillator() {
        let (f, g) = oscillator_grid();
        let out = check_infeld_hull(&f, &g).unwrap();
        assert!(out.constants.a.abs() < 1e-12);
        assert!((out.constants.b + 1.5).abs() < 1e-12);
        assert!(out.constancy_residual() < 1e-10);
    }

    #[test]
    fn infeld_hull_detects_non_constant() {
        let f = ClassicalFamily::new(
            "bad",
            crate::superpotential::Domain::new(0.0, f64::INFINITY),
            |x| Jet::real(x * x, 2.0 * x),
            |x| Jet::real(1.0 / x, -1.0 / (x * x)),
        );
        let g = Grid::build(&f, 0.0, &GridSpec::default()).unwrap();
        assert!(check_infeld_hull(&f, &g).unwrap().b_constancy > 1e-3);
    }

    #[test]
    fn parse_checks() {
        assert_eq!("infeld-hull".parse::<Check>().unwrap(), Check::InfeldHull);
        assert!("nope".parse::<Check>().is_err());
        assert!(Tolerances { algebra: 0.0, ..Tolerances::default() }.validate().is_err());
    }
}

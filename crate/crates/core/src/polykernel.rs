//! Jacobi and Laguerre polynomials for arbitrary real parameters.
//!
//! The extended families use parameters such as `-B - m - 3/2` that sit far
//! outside the classical ranges, so evaluation goes through the explicit
//! finite series rather than the three-term recurrence:
//!
//! ```text
//! P_n^(a,b)(z) = sum_k (n+a+b+1)_k (a+k+1)_(n-k) / (k! (n-k)!) * ((z-1)/2)^k
//! L_n^(a)(z)   = sum_k (a+k+1)_(n-k) / (k! (n-k)!) * (-z)^k
//! ```
//!
//! Neither form divides by a parameter-dependent quantity, so negative
//! integer parameters are handled without special cases.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Complex argument and value type used throughout the crate.
pub type ComplexValue = Complex64;

/// Highest supported degree.
pub const MAX_DEGREE: u32 = 64;

const ROOT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PolyKind {
    Jacobi { alpha: f64, beta: f64 },
    Laguerre { alpha: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolySpec {
    pub degree: u32,
    #[serde(flatten)]
    pub kind: PolyKind,
}

impl PolySpec {
    pub fn jacobi(degree: u32, alpha: f64, beta: f64) -> Self {
        PolySpec {
            degree,
            kind: PolyKind::Jacobi { alpha, beta },
        }
    }

    pub fn laguerre(degree: u32, alpha: f64) -> Self {
        PolySpec {
            degree,
            kind: PolyKind::Laguerre { alpha },
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.degree > MAX_DEGREE {
            return Err(Error::Unsupported(format!(
                "polynomial degree {} exceeds cap {}",
                self.degree, MAX_DEGREE
            )));
        }
        let finite = match self.kind {
            PolyKind::Jacobi { alpha, beta } => alpha.is_finite() && beta.is_finite(),
            PolyKind::Laguerre { alpha } => alpha.is_finite(),
        };
        if !finite {
            return Err(Error::Domain(format!("non-finite polynomial parameter in {self:?}")));
        }
        Ok(())
    }

    /// Coefficients `c_k` of the series in the basis variable
    /// (`(z-1)/2` for Jacobi, `-z` for Laguerre).
    fn series_coefficients(&self) -> Vec<f64> {
        let n = self.degree as usize;
        let (alpha, shift) = match self.kind {
            PolyKind::Jacobi { alpha, beta } => (alpha, Some(n as f64 + alpha + beta + 1.0)),
            PolyKind::Laguerre { alpha } => (alpha, None),
        };
        let mut factorial = vec![1.0_f64; n + 1];
        for i in 1..=n {
            factorial[i] = factorial[i - 1] * i as f64;
        }
        (0..=n)
            .map(|k| {
                let mut c = rising(alpha + k as f64 + 1.0, n - k);
                if let Some(s) = shift {
                    c *= rising(s, k);
                }
                c / (factorial[k] * factorial[n - k])
            })
            .collect()
    }

    fn basis(&self, z: Complex64) -> Complex64 {
        match self.kind {
            PolyKind::Jacobi { .. } => (z - 1.0) * 0.5,
            PolyKind::Laguerre { .. } => -z,
        }
    }

    /// The parameter-shifted spec whose multiple is the derivative.
    fn derivative_spec(&self) -> (f64, PolySpec) {
        let m = self.degree - 1;
        match self.kind {
            PolyKind::Jacobi { alpha, beta } => (
                0.5 * (self.degree as f64 + alpha + beta + 1.0),
                PolySpec::jacobi(m, alpha + 1.0, beta + 1.0),
            ),
            PolyKind::Laguerre { alpha } => (-1.0, PolySpec::laguerre(m, alpha + 1.0)),
        }
    }

    /// Monomial coefficients in the original variable, lowest degree first.
    pub fn monomial_coefficients(&self) -> Vec<f64> {
        let c = self.series_coefficients();
        match self.kind {
            PolyKind::Laguerre { .. } => c
                .iter()
                .enumerate()
                .map(|(k, ck)| if k % 2 == 0 { *ck } else { -*ck })
                .collect(),
            PolyKind::Jacobi { .. } => {
                // ((t-1)/2)^k = 2^-k sum_j C(k,j) t^j (-1)^(k-j)
                let n = c.len();
                let mut out = vec![0.0; n];
                for (k, ck) in c.iter().enumerate() {
                    let scale = ck * 0.5_f64.powi(k as i32);
                    let mut binom = 1.0;
                    for (j, slot) in out.iter_mut().enumerate().take(k + 1) {
                        let sign = if (k - j) % 2 == 0 { 1.0 } else { -1.0 };
                        *slot += scale * binom * sign;
                        binom = binom * (k - j) as f64 / (j + 1) as f64;
                    }
                }
                out
            }
        }
    }
}

/// Pochhammer symbol `(x)_k = x (x+1) ... (x+k-1)`.
fn rising(x: f64, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (x + i as f64))
}

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::default();
        for x in iter {
            s.add(x);
        }
        s
    }
}

fn check_argument(z: Complex64) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("non-finite polynomial argument {z}")))
    }
}

fn sum_series_real(coeffs: &[f64], w: f64) -> f64 {
    let mut acc = CompensatedSum::default();
    let mut power = 1.0;
    for c in coeffs {
        acc.add(c * power);
        power *= w;
    }
    acc.value()
}

fn sum_series_complex(coeffs: &[f64], w: Complex64) -> Complex64 {
    let mut re = CompensatedSum::default();
    let mut im = CompensatedSum::default();
    let mut power = Complex64::new(1.0, 0.0);
    for c in coeffs {
        re.add(c * power.re);
        im.add(c * power.im);
        power *= w;
    }
    Complex64::new(re.value(), im.value())
}

fn eval_unchecked(spec: &PolySpec, z: Complex64) -> Complex64 {
    // expand about the nearer endpoint: P_n^(a,b)(z) = (-1)^n P_n^(b,a)(-z)
    if let PolyKind::Jacobi { alpha, beta } = spec.kind {
        if z.re < 0.0 {
            let v = eval_series(&PolySpec::jacobi(spec.degree, beta, alpha), -z);
            return if spec.degree.is_multiple_of(2) { v } else { -v };
        }
    }
    eval_series(spec, z)
}

fn eval_series(spec: &PolySpec, z: Complex64) -> Complex64 {
    let coeffs = spec.series_coefficients();
    if z.im == 0.0 {
        let w = spec.basis(z).re;
        Complex64::new(sum_series_real(&coeffs, w), 0.0)
    } else {
        sum_series_complex(&coeffs, spec.basis(z))
    }
}

/// Evaluates `P_n^(a,b)(z)` or `L_n^(a)(z)`.
///
/// A real argument always yields an imaginary part of exactly zero.
pub fn poly_eval(spec: &PolySpec, z: ComplexValue) -> Result<ComplexValue> {
    spec.validate()?;
    check_argument(z)?;
    Ok(eval_unchecked(spec, z))
}

/// First derivative in `z` via the parameter-shift identities.
pub fn poly_deriv(spec: &PolySpec, z: ComplexValue) -> Result<ComplexValue> {
    spec.validate()?;
    check_argument(z)?;
    if spec.degree == 0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let (factor, lowered) = spec.derivative_spec();
    Ok(eval_unchecked(&lowered, z) * factor)
}

/// Cauchy bound on the moduli of all roots, or `None` for the zero polynomial.
fn root_bound(monomial: &[f64]) -> Option<f64> {
    let lead_idx = monomial.iter().rposition(|c| *c != 0.0)?;
    if lead_idx == 0 {
        return Some(0.0);
    }
    let lead = monomial[lead_idx].abs();
    let max_ratio = monomial[..lead_idx]
        .iter()
        .map(|c| c.abs() / lead)
        .fold(0.0_f64, f64::max);
    Some(1.0 + max_ratio)
}

/// All real roots in the open interval `(lo, hi)`, sorted ascending.
///
/// Either endpoint may be infinite; the search is then clipped to the Cauchy
/// root bound. Roots are isolated through the derivative chain: the real
/// roots of `p'` split the line into pieces on which `p` is monotone, and
/// each sign change is bisected to `1e-12`. For Jacobi and Laguerre specs the
/// derivatives are again Jacobi and Laguerre polynomials, evaluated through
/// the same series. Roots of even multiplicity are not reported.
pub fn real_roots_in(spec: &PolySpec, interval: (f64, f64)) -> Vec<f64> {
    if spec.validate().is_err() || spec.degree == 0 {
        return Vec::new();
    }
    let mut chain = vec![*spec];
    while chain.last().is_some_and(|s| s.degree > 1) {
        let (_, lowered) = chain.last().unwrap().derivative_spec();
        chain.push(lowered);
    }
    let evaluators: Vec<_> = chain
        .iter()
        .rev()
        .map(|s| {
            let coeffs = s.series_coefficients();
            let s = *s;
            move |t: f64| sum_series_real(&coeffs, s.basis(Complex64::new(t, 0.0)).re)
        })
        .collect();
    isolate_chain(&evaluators, &spec.monomial_coefficients(), interval)
}

/// Real roots of a polynomial given by monomial coefficients (lowest first).
pub fn real_roots_of(monomial: &[f64], interval: (f64, f64)) -> Vec<f64> {
    let mut chain = vec![monomial.to_vec()];
    while chain.last().is_some_and(|c| c.len() > 2) {
        let c = chain.last().unwrap();
        let d: Vec<f64> = c.iter().enumerate().skip(1).map(|(k, ck)| k as f64 * ck).collect();
        chain.push(d);
    }
    let evaluators: Vec<_> = chain
        .iter()
        .rev()
        .map(|c| move |t: f64| c.iter().rev().fold(0.0, |acc, ck| acc * t + ck))
        .collect();
    isolate_chain(&evaluators, monomial, interval)
}

/// `chain[0]` has degree at most one, `chain[k+1]' ~ chain[k]`.
fn isolate_chain(chain: &[impl Fn(f64) -> f64], monomial: &[f64], interval: (f64, f64)) -> Vec<f64> {
    let Some(bound) = root_bound(monomial) else {
        return Vec::new();
    };
    let bound = bound * (1.0 + 1e-9) + 1e-9;
    let lo = interval.0.max(-bound);
    let hi = interval.1.min(bound);
    if lo.is_nan() || hi.is_nan() || lo >= hi {
        return Vec::new();
    }
    let mut critical = Vec::new();
    for f in chain {
        critical = isolate(f, &critical, lo, hi);
    }
    critical
}

/// Sign changes of `f` between consecutive breakpoints, each bisected.
fn isolate(f: &impl Fn(f64) -> f64, critical: &[f64], lo: f64, hi: f64) -> Vec<f64> {
    let mut points = Vec::with_capacity(critical.len() + 2);
    points.push(lo);
    points.extend(critical.iter().copied().filter(|c| *c > lo && *c < hi));
    points.push(hi);
    let mut roots: Vec<f64> = Vec::new();
    let mut fa = f(lo);
    for w in points.windows(2) {
        let (a, b) = (w[0], w[1]);
        let fb = f(b);
        let root = if fb == 0.0 && b < hi {
            Some(b)
        } else if fa * fb < 0.0 {
            Some(bisect(f, a, b, fa))
        } else {
            None
        };
        if let Some(r) = root {
            if roots.last().is_none_or(|last| r - last > ROOT_TOL) {
                roots.push(r);
            }
        }
        fa = fb;
    }
    roots
}

fn bisect(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, mut fa: f64) -> f64 {
    while b - a > ROOT_TOL {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if fa * fm < 0.0 {
            b = mid;
        } else {
            a = mid;
            fa = fm;
        }
    }
    0.5 * (a + b)
}

//! Partner potentials `V-/+ = W^2 -/+ W'`, the shape-invariance remainder
//! and a finite-difference eigensolver for cross-validating spectra.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polykernel::CompensatedSum;
use crate::superpotential::{check_pole_distance, Superpotential, Validity, DEFAULT_POLE_RADIUS};

/// Levels must sit at least this far below the edge potential.
pub const EDGE_MARGIN: f64 = 25.0;

const MAX_WINDOW_LENGTHS: f64 = 40.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Partner {
    Minus,
    Plus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PotentialGrid {
    pub abscissae: Vec<f64>,
    pub values: Vec<f64>,
    pub which: Partner,
    pub m: f64,
}

impl PotentialGrid {
    pub fn new(abscissae: Vec<f64>, values: Vec<f64>, which: Partner, m: f64) -> Result<Self> {
        if abscissae.len() != values.len() {
            return Err(Error::Usage("abscissae and values differ in length".into()));
        }
        if abscissae.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Usage("abscissae must be strictly increasing".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("potential has non-finite values".into()));
        }
        Ok(PotentialGrid {
            abscissae,
            values,
            which,
            m,
        })
    }

    /// Samples `v` on `n` equally spaced points of `[lo, hi]`.
    pub fn uniform(lo: f64, hi: f64, n: usize, v: impl Fn(f64) -> f64) -> Result<Self> {
        let xs = uniform_points(lo, hi, n);
        let vs = xs.iter().map(|&x| v(x)).collect();
        PotentialGrid::new(xs, vs, Partner::Minus, 0.0)
    }

    pub fn shifted(&self, c: f64) -> Self {
        PotentialGrid {
            values: self.values.iter().map(|v| v + c).collect(),
            ..self.clone()
        }
    }
}

pub fn uniform_points(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let h = (hi - lo) / (n.max(2) - 1) as f64;
    (0..n).map(|i| if i + 1 == n { hi } else { lo + h * i as f64 }).collect()
}

fn require_real<F: Superpotential + ?Sized>(family: &F) -> Result<()> {
    if family.is_real() {
        Ok(())
    } else {
        Err(Error::Unsupported(format!(
            "complex family {} unsupported for spectra",
            family.name()
        )))
    }
}

fn require_valid<F: Superpotential + ?Sized>(family: &F, m: f64, grid: &[f64]) -> Result<()> {
    if let Validity::Violated(inequality) = family.validity(m) {
        return Err(Error::InvalidParameters {
            family: family.name(),
            inequality: format!("{inequality} (at m = {m})"),
        });
    }
    let poles = family.poles(m);
    for &x in grid {
        check_pole_distance(&poles, x, DEFAULT_POLE_RADIUS)?;
    }
    Ok(())
}

fn partner_value<F: Superpotential + ?Sized>(family: &F, m: f64, x: f64, which: Partner) -> f64 {
    let w = family.w(x, m);
    let (v, dv) = (w.value.re, w.deriv.re);
    match which {
        Partner::Minus => v * v - dv,
        Partner::Plus => v * v + dv,
    }
}

/// `V- = W^2 - W'` and `V+ = W^2 + W'` on `grid`.
pub fn partner_potentials<F: Superpotential + ?Sized>(
    family: &F,
    m: f64,
    grid: &[f64],
) -> Result<(PotentialGrid, PotentialGrid)> {
    require_real(family)?;
    require_valid(family, m, grid)?;
    let build = |which| {
        let values = grid.iter().map(|&x| partner_value(family, m, x, which)).collect();
        PotentialGrid::new(grid.to_vec(), values, which, m)
    };
    Ok((build(Partner::Minus)?, build(Partner::Plus)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Remainder {
    /// Grid mean of `V+(x,m) - V-(x,m-1)`.
    pub r: f64,
    /// Max deviation from `r`.
    pub flatness_residual: f64,
}

pub fn remainder<F: Superpotential + ?Sized>(family: &F, m: f64, grid: &[f64]) -> Result<Remainder> {
    require_real(family)?;
    require_valid(family, m, grid)?;
    require_valid(family, m - 1.0, grid)?;
    if grid.is_empty() {
        return Err(Error::Usage("empty grid".into()));
    }
    let diffs: Vec<f64> = grid
        .iter()
        .map(|&x| partner_value(family, m, x, Partner::Plus) - partner_value(family, m - 1.0, x, Partner::Minus))
        .collect();
    let sum: CompensatedSum = diffs.iter().copied().collect();
    let r = sum.value() / diffs.len() as f64;
    let flatness_residual = diffs.iter().map(|d| (d - r).abs()).fold(0.0, f64::max);
    Ok(Remainder { r, flatness_residual })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumResult {
    pub eigenvalues: Vec<f64>,
    pub n_points: usize,
    pub spacing: f64,
    /// `|E(h) - E(2h)| / 3` per level.
    pub error_estimates: Vec<f64>,
}

/// Symmetric tridiagonal matrix with constant off-diagonal.
struct Tridiagonal {
    diag: Vec<f64>,
    off: f64,
}

impl Tridiagonal {
    fn hamiltonian(values: &[f64], h: f64) -> Self {
        let kinetic = 1.0 / (h * h);
        Tridiagonal {
            diag: values.iter().map(|v| 2.0 * kinetic + v).collect(),
            off: -kinetic,
        }
    }

    /// Number of eigenvalues strictly below `lambda` (Sturm sequence).
    fn count_below(&self, lambda: f64) -> usize {
        let off2 = self.off * self.off;
        let mut count = 0;
        let mut q = 1.0;
        for (i, d) in self.diag.iter().enumerate() {
            q = if i == 0 { d - lambda } else { d - lambda - off2 / q };
            if q == 0.0 {
                q = -f64::EPSILON * (d.abs() + self.off.abs()).max(f64::MIN_POSITIVE);
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn gershgorin(&self) -> (f64, f64) {
        let r = 2.0 * self.off.abs();
        let lo = self.diag.iter().fold(f64::INFINITY, |a, d| a.min(d - r));
        let hi = self.diag.iter().fold(f64::NEG_INFINITY, |a, d| a.max(d + r));
        (lo, hi)
    }

    /// The `index`-th smallest eigenvalue (0-based) by bisection.
    fn eigenvalue(&self, index: usize) -> f64 {
        let (mut lo, mut hi) = self.gershgorin();
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > index {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    fn lowest(&self, k: usize) -> Vec<f64> {
        (0..k).map(|i| self.eigenvalue(i)).collect()
    }
}

fn uniform_spacing(xs: &[f64]) -> Result<f64> {
    let n = xs.len();
    let h = (xs[n - 1] - xs[0]) / (n - 1) as f64;
    let tol = 1e-9 * h.abs().max(f64::MIN_POSITIVE) + 1e-12 * xs[0].abs().max(xs[n - 1].abs());
    if xs.windows(2).any(|w| ((w[1] - w[0]) - h).abs() > tol) {
        return Err(Error::Usage("eigensolver needs a uniform grid".into()));
    }
    Ok(h)
}

/// Lowest `k` eigenvalues of `-d^2/dx^2 + V` on the grid, with the wave
/// function vanishing one spacing beyond each end.
pub fn solve_spectrum(potential: &PotentialGrid, k: usize) -> Result<SpectrumResult> {
    let n = potential.abscissae.len();
    if k == 0 {
        return Err(Error::Usage("k must be at least 1".into()));
    }
    if n < 16 || k * 4 > n {
        return Err(Error::Usage(format!("k = {k} levels need a larger grid than {n} points")));
    }
    let h = uniform_spacing(&potential.abscissae)?;
    let fine = Tridiagonal::hamiltonian(&potential.values, h).lowest(k);

    // Coarse grid: every other point, spacing 2h, same Dirichlet ends when n is odd.
    let coarse_values: Vec<f64> = potential.values.iter().step_by(2).copied().collect();
    let coarse = Tridiagonal::hamiltonian(&coarse_values, 2.0 * h).lowest(k);
    let error_estimates = fine.iter().zip(&coarse).map(|(f, c)| (f - c).abs() / 3.0).collect();
    Ok(SpectrumResult {
        eigenvalues: fine,
        n_points: n,
        spacing: h,
        error_estimates,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Isospectrality {
    pub m: f64,
    pub window: (f64, f64),
    /// Spectrum of `V+(., m)`.
    pub plus: SpectrumResult,
    /// Spectrum of `V-(., m-1) + R`.
    pub minus_shifted: SpectrumResult,
    pub remainder: Remainder,
    /// Smallest edge value of the two potentials minus the top level.
    pub edge_gap: f64,
    /// `max_i |E+_i - E-_i - R| / max(|E+_i|, 1)`.
    pub mismatch: f64,
}

/// Uniform window used for spectra: a small offset from finite ends, and
/// infinite ends pushed out until the potential clears the top level by
/// `EDGE_MARGIN` or the window reaches forty length scales.
fn spectral_window<F: Superpotential + ?Sized>(family: &F, m: f64, k: usize, n_points: usize) -> Result<(f64, f64)> {
    let d = family.domain();
    let scale = family.length_scale();
    let inset = |width: f64| 5e-3 * width;
    let (mut lo, mut hi) = match (d.lo.is_finite(), d.hi.is_finite()) {
        (true, true) => {
            let w = d.hi - d.lo;
            (d.lo + inset(w), d.hi - inset(w))
        }
        (true, false) => (d.lo + inset(scale), d.lo + 3.0 * scale),
        (false, true) => (d.hi - 3.0 * scale, d.hi - inset(scale)),
        (false, false) => (-3.0 * scale, 3.0 * scale),
    };
    for _ in 0..12 {
        let xs = uniform_points(lo, hi, n_points);
        let (v_minus, v_plus) = partner_potentials(family, m, &xs)?;
        let top = solve_top(&v_plus, k)?;
        let edge = |p: &PotentialGrid, i: usize| p.values[i];
        let mut grew = false;
        if !d.hi.is_finite()
            && edge(&v_plus, n_points - 1).min(edge(&v_minus, n_points - 1)) < top + EDGE_MARGIN
            && hi - lo < MAX_WINDOW_LENGTHS * scale
        {
            hi = lo + (hi - lo) * 1.5;
            grew = true;
        }
        if !d.lo.is_finite() && edge(&v_plus, 0).min(edge(&v_minus, 0)) < top + EDGE_MARGIN && hi - lo < MAX_WINDOW_LENGTHS * scale
        {
            lo = hi - (hi - lo) * 1.5;
            grew = true;
        }
        if !grew {
            break;
        }
    }
    Ok((lo, hi))
}

fn solve_top(p: &PotentialGrid, k: usize) -> Result<f64> {
    let h = uniform_spacing(&p.abscissae)?;
    Ok(Tridiagonal::hamiltonian(&p.values, h).eigenvalue(k - 1))
}

/// Compares the spectrum of `V+(., m)` with that of `V-(., m-1) + R`.
pub fn check_isospectrality<F: Superpotential + ?Sized>(
    family: &F,
    m: f64,
    k: usize,
    n_points: usize,
) -> Result<Isospectrality> {
    require_real(family)?;
    if k == 0 {
        return Err(Error::Usage("k must be at least 1".into()));
    }
    let window = spectral_window(family, m, k, n_points)?;
    let xs = uniform_points(window.0, window.1, n_points);
    let rem = remainder(family, m, &xs)?;
    let (_, v_plus) = partner_potentials(family, m, &xs)?;
    let (v_minus_prev, _) = partner_potentials(family, m - 1.0, &xs)?;
    let shifted = v_minus_prev.shifted(rem.r);
    let plus = solve_spectrum(&v_plus, k)?;
    let minus_shifted = solve_spectrum(&shifted, k)?;
    let mismatch = plus
        .eigenvalues
        .iter()
        .zip(&minus_shifted.eigenvalues)
        .map(|(a, b)| (a - b).abs() / a.abs().max(1.0))
        .fold(0.0, f64::max);
    let top = plus.eigenvalues[k - 1].max(minus_shifted.eigenvalues[k - 1]);
    let edge_gap = [
        v_plus.values[0],
        v_plus.values[n_points - 1],
        shifted.values[0],
        shifted.values[n_points - 1],
    ]
    .iter()
    .fold(f64::INFINITY, |a, v| a.min(*v))
        - top;
    Ok(Isospectrality {
        m,
        window,
        plus,
        minus_shifted,
        remainder: rem,
        edge_gap,
        mismatch,
    })
}

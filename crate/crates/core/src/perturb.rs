//! Controlled violations of the identities, used as negative controls.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::superpotential::{Domain, Jet, Superpotential, Validity};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PerturbationKind {
    /// `W1-(x,m) += eta x`: breaks the translation relation (and with it the
    /// m-independence of the compatibility expression).
    Translation,
    /// `W1+(x,m) += eta m^2 x`, `W1-(x,m) += eta (m-1)^2 x`: the translation
    /// relation survives, the compatibility condition does not.
    Compatibility,
    /// Breaks only the translation relation, keeping the compatibility
    /// expression m-independent: with `D = W - sqrt(W^2 + eta)` (root on the
    /// side of `W`), `W1+ -= D/2` and `W1- += D/2` shift the compatibility
    /// expression by exactly `eta`. Small only where `W` stays away from zero.
    TranslationOnly,
    /// `W1-(x,m) += eta`.
    ConstantShift,
    /// `k1(x) += eta x`: breaks the Infeld-Hull relations.
    InfeldHull,
    /// `W1+(x,m) += eta m`, `W1-(x,m) += eta m`: leaves `W` untouched and
    /// violates the translation relation by the x-independent amount `eta`.
    GaugeOffset,
}

impl PerturbationKind {
    pub const ALL: [PerturbationKind; 6] = [
        PerturbationKind::Translation,
        PerturbationKind::Compatibility,
        PerturbationKind::TranslationOnly,
        PerturbationKind::ConstantShift,
        PerturbationKind::InfeldHull,
        PerturbationKind::GaugeOffset,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            PerturbationKind::Translation => "translation",
            PerturbationKind::Compatibility => "compatibility",
            PerturbationKind::TranslationOnly => "translation-only",
            PerturbationKind::ConstantShift => "constant-shift",
            PerturbationKind::InfeldHull => "infeld-hull",
            PerturbationKind::GaugeOffset => "gauge-offset",
        }
    }
}

impl fmt::Display for PerturbationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PerturbationKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PerturbationKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::Usage(format!("unknown perturbation kind '{s}'")))
    }
}

/// A family with an injected violation of size `size`.
#[derive(Clone)]
pub struct Perturbed {
    inner: Arc<dyn Superpotential>,
    kind: PerturbationKind,
    size: f64,
}

impl Perturbed {
    pub fn new(inner: Arc<dyn Superpotential>, kind: PerturbationKind, size: f64) -> Self {
        Perturbed { inner, kind, size }
    }

    pub fn kind(&self) -> PerturbationKind {
        self.kind
    }

    pub fn size(&self) -> f64 {
        self.size
    }

    fn linear(&self, coefficient: f64, x: f64) -> Jet {
        Jet::real(self.size * coefficient * x, self.size * coefficient)
    }

    /// `D = W - sqrt(W^2 + eta)` with derivative.
    fn riccati_offset(&self, x: f64, m: f64) -> Jet {
        let w = self.inner.w(x, m);
        let mut root = (w.value * w.value + Complex64::new(self.size, 0.0)).sqrt();
        if (root * w.value.conj()).re < 0.0 {
            root = -root;
        }
        Jet::new(w.value - root, w.deriv - w.value * w.deriv / root)
    }
}

impl fmt::Debug for Perturbed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Perturbed")
            .field("inner", &self.inner.name())
            .field("kind", &self.kind)
            .field("size", &self.size)
            .finish()
    }
}

impl Superpotential for Perturbed {
    fn name(&self) -> String {
        format!("{}+{}({})", self.inner.name(), self.kind, self.size)
    }
    fn domain(&self) -> Domain {
        self.inner.domain()
    }
    fn is_real(&self) -> bool {
        self.inner.is_real()
    }
    fn length_scale(&self) -> f64 {
        self.inner.length_scale()
    }
    fn k0(&self, x: f64) -> Jet {
        self.inner.k0(x)
    }
    fn k1(&self, x: f64) -> Jet {
        let k1 = self.inner.k1(x);
        match self.kind {
            PerturbationKind::InfeldHull => k1 + self.linear(1.0, x),
            _ => k1,
        }
    }
    fn w1_plus(&self, x: f64, m: f64) -> Jet {
        let p = self.inner.w1_plus(x, m);
        match self.kind {
            PerturbationKind::Compatibility => p + self.linear(m * m, x),
            PerturbationKind::TranslationOnly => p - self.riccati_offset(x, m) * 0.5,
            PerturbationKind::GaugeOffset => p + Jet::constant(self.size * m),
            _ => p,
        }
    }
    fn w1_minus(&self, x: f64, m: f64) -> Jet {
        let q = self.inner.w1_minus(x, m);
        match self.kind {
            PerturbationKind::Translation => q + self.linear(1.0, x),
            PerturbationKind::Compatibility => q + self.linear((m - 1.0) * (m - 1.0), x),
            PerturbationKind::TranslationOnly => q + self.riccati_offset(x, m) * 0.5,
            PerturbationKind::ConstantShift => q + Jet::constant(self.size),
            PerturbationKind::GaugeOffset => q + Jet::constant(self.size * m),
            PerturbationKind::InfeldHull => q,
        }
    }
    fn poles(&self, m: f64) -> Vec<f64> {
        self.inner.poles(m)
    }
    fn validity(&self, m: f64) -> Validity {
        self.inner.validity(m)
    }
}

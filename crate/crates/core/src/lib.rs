//! Verification toolkit for rationally extended shape-invariant
//! superpotentials: special-function kernel, the catalog of extended
//! families, grid checks of the compatibility and potential-algebra
//! conditions, and a finite-difference spectral cross-check.

pub mod catalog;
pub mod cli;
pub mod error;
pub mod perturb;
pub mod polykernel;
pub mod spectral;
pub mod superpotential;
pub mod verifier;

pub use catalog::{get_family, sample_valid_params, validity_witness, AlgebraConstants, CatalogEntry, FamilyTag, ParamPoint};
pub use error::{Error, Result};
pub use superpotential::{eval_w, eval_w_deriv, make_grid, Domain, GridSpec, Jet, Mapping, Superpotential, Validity};

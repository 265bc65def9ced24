//! Next-term p-adic zero counts of polynomials over finite fields, and the
//! Reed-Muller weight-divisibility counts that follow from them.

pub mod axcore;
pub mod budget;
pub mod cli;
pub mod closedform;
pub mod gf;
pub mod mpoly;
pub mod rmcode;

pub use budget::Budget;
pub use gf::{Elem, FieldElement, FieldSpec, GfError};
pub use mpoly::{monomials, nu_p, parse_poly, Monomial, MultiPoly, PolyError, Valuation};

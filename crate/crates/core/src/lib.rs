//! Valuation theory for polynomials and restricted power series over
//! concrete valued fields.
//!
//! The core question: given `v(f(a)) > α > v(f(b))`, find `c` between `a`
//! and `b` (in valuation) with `v(f(c)) = α`. Over a field with divisible
//! value group and infinite residue field such `c` always exists and
//! [`ivt::ivt_solve`] constructs it; [`counterexample`] shows what goes wrong
//! when either hypothesis is dropped.
//!
//! ```
//! use valivt::field::FieldSpec;
//! use valivt::ivt::{ivt_solve, IvtQuery};
//! use valivt::parse::parse_group_value;
//!
//! let spec = FieldSpec::Puiseux;
//! let q = IvtQuery {
//!     spec,
//!     f: spec.parse_poly("X^2 - t")?,
//!     a: spec.parse_element("t")?,
//!     b: spec.parse_element("1")?,
//!     alpha: parse_group_value("1/2")?,
//! };
//! let sol = ivt_solve(&q)?;
//! assert_eq!(sol.c.to_string(), "t^(1/4)");
//! # Ok::<(), valivt::Error>(())
//! ```

pub mod cli;
pub mod counterexample;
pub mod error;
pub mod field;
pub mod group;
pub mod ivt;
pub mod parse;
pub mod poly;
pub mod series;
pub mod tropical;

pub use error::{Error, Result};
pub use field::{FieldElement, FieldSpec};
pub use group::{GroupSpec, GroupValue};
pub use poly::Poly;

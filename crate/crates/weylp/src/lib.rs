//! Exact arithmetic for rings of differential operators on localized affine
//! charts in characteristic p.
//!
//! The chart is X = Spec (Z/p^e)[x_1..x_n]_f. The crate provides, over that
//! chart:
//!
//! - sparse polynomial and localized-function arithmetic ([`Polynomial`],
//!   [`LocalizedFunction`]);
//! - differential operators in normal form with Leibniz multiplication,
//!   commutators, powers, the Bernstein filtration and a centrality test
//!   ([`DiffOperator`], [`VectorField`]);
//! - the characteristic-p center machinery: restricted powers theta^[p], the
//!   central elements theta^p - theta^[p], and the isomorphism between
//!   functions on the cotangent bundle and the center of the operator ring
//!   ([`center`]);
//! - the canonical symplectic Poisson bracket on symbols and the divided
//!   commutator bracket on the center, together with the harness comparing
//!   them through the center isomorphism ([`poisson`]);
//! - transport of centers along explicit algebra maps into matrix rings and
//!   the induced maps of cotangent bundles ([`morita`]);
//! - an expression parser, canonical renderer and a command-line driver
//!   ([`expr`], [`cli`]).
//!
//! Every value is immutable after construction and every operation is a pure
//! function, so values can be shared freely between threads.
//!
//! ```
//! use weylp::{Chart, DiffOperator, iso_i, iso_i_inverse, SymbolPolynomial};
//!
//! let chart = Chart::affine(3, 1, 1)?;
//! let d = DiffOperator::partial_op(&chart, 0);
//! let x = DiffOperator::coordinate(&chart, 0);
//! assert_eq!(d.mul(&x)?.to_string(), "x1*d1 + 1");
//! assert!(d.power(3).is_central()?);
//!
//! let s = SymbolPolynomial::var_x(&chart, 0).mul(&SymbolPolynomial::var_y(&chart, 0))?;
//! let z = iso_i(&s)?;
//! assert_eq!(z.to_string(), "x1^3*d1^3");
//! assert_eq!(iso_i_inverse(&z)?, s);
//! # Ok::<(), weylp::Error>(())
//! ```
//!
//! See the `examples/` directory for one runnable walkthrough per capability.

pub mod center;
pub mod chart;
pub mod cli;
pub mod diffop;
pub mod error;
pub mod expr;
pub mod localized;
pub mod mapfile;
pub mod morita;
pub mod poisson;
pub mod poly;

pub use center::{
    frob_center, iso_i, iso_i_inverse, restricted_power, CentralElement, SymbolPolynomial,
};
pub use chart::{Chart, CoeffRing};
pub use diffop::{DiffOperator, VectorField};
pub use error::{Error, Result};
pub use localized::LocalizedFunction;
pub use morita::{GeneratorImagesMap, InducedMap, MapEvaluator, MapValidation, MatrixOperator};
pub use poisson::{
    bracket_comparison, canonical_bracket, modp_bracket, BracketComparison, SignConvention,
    REDUCTION_SIGN,
};
pub use poly::{Multidegree, Polynomial};

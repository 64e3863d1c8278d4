//! exact-arithmetic engine for moduli computations near surface contractions.
//!
//! everything here is computed over the rationals with no floating point:
//! sparse linear algebra, weight-graded Laurent polynomials on toric charts,
//! Cech-Hom differential graded Lie algebras, Thom-Whitney totalization,
//! Maurer-Cartan hull iteration, torus-invariant subrings, closed-form Ext
//! calculus on curve chains, and central-charge wall/chamber arrangements.
//!
//! start with the runnable programs in `examples/` for a tour of each layer.

pub mod algebra;
pub mod laurent;
pub mod localmodel;
pub mod cech;
pub mod tw;
pub mod mchull;
pub mod curvechains;
pub mod walls;
pub mod report;
pub mod selftest;

pub use algebra::{rat, ratq, QMatrix, Rat};
pub use laurent::{ChartRing, LaurentElement, Weight};

//! Exact arithmetic: rationals, bivariate and univariate polynomials, real roots.

pub mod gcd;
pub mod parse;
pub mod poly;
pub mod rational;
pub mod roots;
pub mod unipoly;

pub use gcd::{div_exact, gcd};
pub use parse::parse_poly;
pub use poly::{Line, Poly, Var};
pub use rational::{format_rational, rat, ratio, sign, Rational};
pub use roots::{real_roots, AlgebraicPoint};
pub use unipoly::UniPoly;

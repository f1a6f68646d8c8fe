//! Rational self-maps of P^1 as pairs of homogeneous polynomials.

mod hompoly;
mod map;
mod parse;

pub use hompoly::{format_upoly, HomPoly};
pub use map::{field_json, hom_roots, proportional, psi_map, PointMults, RatMap};
pub use parse::{parse_hom, parse_map, parse_rational};

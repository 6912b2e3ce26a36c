//! Exact arithmetic and polynomial-ideal algorithms.

pub mod coeff;
pub mod expr;
pub mod factor;
pub mod artinian;
pub mod groebner;
pub mod ideal;
pub mod limits;
pub mod monomial;
pub mod poly;
pub mod primes;
pub mod upoly;

pub use coeff::{Coefficient, Domain};
pub use expr::{parse_poly, PolyExpr};
pub use groebner::{groebner, groebner_with, normal_form, GroebnerBasis, IdealGens};
pub use limits::Limits;
pub use monomial::{Monomial, MonomialOrder};
pub use poly::{Poly, PolyRing};
pub use artinian::{classify_artinian_quotient, ArtinianClass, Witness};
pub use factor::{univ_factor, Factorization};
pub use ideal::{eliminate, min_poly, quotient_basis, saturate, QuotientAlgebra, QuotientBasis};
pub use upoly::UPoly;

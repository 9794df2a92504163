//! Exact arithmetic over `Z/p^k` and `Q`, truncated cohomology rings of
//! products of complex projective spaces, characteristic-class computations,
//! and abelianized Galois actions on per-prime structure data.

pub mod arith;
pub mod char_classes;
pub mod error;
pub mod json;
pub mod kervaire;
pub mod ring;
pub mod sample;
pub mod structure;

pub use arith::{binom_mod2, legendre_mod8, AdelicUnit, PadicInt, PadicUnit, Rational};
pub use char_classes::{l_class_cp, l_series, power_sum, wu_square_formula, wu_square_oracle, RootData};
pub use error::{Error, Result};
pub use kervaire::{kervaire_class, kervaire_class_up_to, solve_coeffs, KervaireCoeffs, KervaireMode};
pub use ring::{Coeff, GradedClass, Generator, RingSpec, SpaceModel};
pub use structure::{
    galois_etale, galois_odd, galois_two, validate_etale, validate_odd, EtaleManifold,
    EtaleStructure, FormalManifold2, FormalManifoldOdd, OddStructure, PrimeManifold,
    PrimeStructure, TwoAdicStructure,
};

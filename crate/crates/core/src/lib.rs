//! Finite categories with morphism partitions.
//!
//! Quasi-schemoids and association schemoids over finite categories, their
//! structure constants and Bose-Mesner algebras, the bridges to association
//! schemes and groupoids, linear extensions classified by second cohomology,
//! admissible morphisms and Berger-Leinster thickenings. All arithmetic is exact.

#![allow(clippy::needless_range_loop)]

pub mod admissible;
pub mod algebra;
pub mod bridges;
pub mod corpus;
pub mod extensions;
pub mod fincat;
pub mod group;
pub mod linalg;
pub mod schemes;
pub mod schemoid;
pub mod smith;
pub mod thicken;

pub use admissible::{
    check_unique_solutions, induced_algebra_map, is_admissible, multiplicities,
    verify_multiplicity_identity, AdmissibilityReport, AdmissibleError,
};
pub use algebra::{
    algebra_is_unital, check_algebra_hom, scaled_basis_iso, terwilliger, AlgebraError, AlgebraMap,
    ScaledIsoOutcome, SchemoidAlgebra,
};
pub use bridges::{phi_psi_check, r_tilde, s_tilde, BridgeError, RTilde, STilde};
pub use extensions::{
    build_extension, bw_cohomology, bw_differentials, extensions_equivalent, is_split,
    lift_involution, lift_schemoid, BwComplex, Coefficients, Cohomology, ExtensionCategory,
    ExtensionError, NaturalSystem,
};
pub use fincat::{
    as_groupoid, validate_category, CategoryBuilder, CategoryError, FinCategory, Functor,
    FunctorError, Groupoid, MorId, ObjId, RawCategory, RawFunctor, RawGroupoid,
};
pub use group::{FiniteGroup, GroupError};
pub use linalg::{Ring, Scalar};
pub use schemes::{
    group_scheme, hamming, j_embed, orbit_configuration, AssociationScheme, CoherentConfiguration,
    SchemeError, SchemeMorphism,
};
pub use schemoid::{
    analyze_thinness, check_association, check_concatenation, schemoid_isomorphic,
    AssociationSchemoid, Involution, MorphismPartition, QuasiSchemoid, RawSchemoid, Schemoid,
    SchemoidError, SchemoidMorphism, StructureConstants, ThinnessReport,
};
pub use thicken::{
    category_from_matrix, projection_phi, sc_functor, sigma_prime, thicken_involution,
    thicken_scheme, FramedCategory, ThickenError, Thickening, TransitiveMatrix,
};

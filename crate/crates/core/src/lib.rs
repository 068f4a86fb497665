//! Finite topological spaces and collections of families of their opens.
//!
//! A space on at most 64 points is stored by its list of opens; families of
//! opens are bit masks over that list. All predicates are decided exactly.

pub mod collection;
pub mod engine;
pub mod error;
pub mod family;
pub mod harness;
pub mod hyperspace;
pub mod json;
pub mod measure;
pub mod order;
pub mod pointset;
pub mod space;

pub use collection::{
    classify_space, greatest_fixed_subcollection, k_collection, kappa, kappa_bounded, lambda,
    lambda_down, p_collection, sigma, AuxiliaryReading, Canonical, Condition, FamilyCollection,
    SpaceClassification,
};
pub use engine::SubcollectionIndex;
pub use error::{Error, Result};
pub use family::{CompactnessMode, OpenFamily, RestrictMode};
pub use hyperspace::{compare_topologies, generate_topology, Comparison, HyperTopology};
pub use measure::{gamma_mu, PointMeasure, Rational};
pub use pointset::PointSet;
pub use space::{fixtures, FiniteSpace, OpenLattice, Preorder, SpaceRef};

//! Claim batteries over generated spaces, and search on top of them.

mod battery;
mod dot;
mod enumerate;
mod search;

pub use battery::{
    run_batteries, run_battery, BatteryOptions, Claim, ClaimReport, ClaimVerdict, CLAIMS,
    DEFAULT_MEASURE_TRIALS,
};
pub use dot::{hyper_dot, inclusion_dot, lattice_dot};
pub use enumerate::{enumerate_preorders, random_space, MAX_EXHAUSTIVE_POINTS};
pub use search::{
    parse_predicate, replay, search, CollectionRef, Counterexample, Expr, Generator, Level,
    PredicateInfo, SearchResult, SearchSpec, PREDICATES,
};

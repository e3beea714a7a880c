//! Elementary substructures, closures, minimal submodels and property suites.

pub mod closure;
pub mod elementary;
pub mod minimal;
pub mod random;
pub mod suites;

pub use elementary::{is_elementary_submodel, normalize_subset, ElementaryError, Mismatch};
pub use closure::{default_templates, maximizer_closure, ClosureError, ClosureResult, ClosureStep, Template, DEFAULT_TEMPLATES};
pub use minimal::{is_extremal, minimal_submodel, subset_types, ExtremalVerdict, MinimalError, MinimalResult, Strategy, EXHAUSTIVE_LIMIT};
pub use random::{random_formula, random_signature, random_structure, random_structure_over, random_weights, GeneratorParams, Rng8};
pub use suites::{run_cases, run_suite, suite_cases, Case, Counterexample, Suite, SuiteError, SuiteParams, SuiteReport, Witness};

//! Type spaces of finite structures as polytopes of realized type vectors.

mod fragment;
mod terms;
mod types;

pub use fragment::{
    context_names, BasisElement, Fragment, FragmentError, FragmentMode, FragmentParams, Node, NodeId, MATERIALIZE_LIMIT,
};
pub use terms::{term_closure, TermFunction, MAX_TERMS};
pub use types::{
    is_extreme_over, over_space, realized_types, restrict_type, sigma_face, tp_over, type_metric, PartialType, Projection,
    SigmaFace, TypeSpace, TypeSpaceError, TypeVector,
};

//! Points of P^1, Möbius transformations, and finite subgroups of PGL2.

mod group;
mod mobius;

pub use group::{
    additive_span, enumerate_pgl2, field_containing, group_closure, recognize_group_type,
    semi_elementary_subgroup, standard_subgroup, GroupDesc, GroupKind, GroupLabel, CLOSURE_CAP,
    EXT_CAP, PGL2_ENUM_BOUND,
};
pub use mobius::{mobius_from_three_points, Mobius, ProjPoint};

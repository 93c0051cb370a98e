//! Möbius transformations, their finite subgroups, and rational functions
//! on the projective line over GF(q).

mod group;
mod mobius;
mod ratfun;

use thiserror::Error;

use crate::field::FieldError;

pub use group::{
    singer_generator, subgroup_affine, subgroup_cyclic_qplus1, subgroup_dihedral, DihedralKind, GroupSpec,
    GroupTable, SplitStructure, MAX_GROUP_ORDER,
};
pub use mobius::{Mobius, PointJson, ProjPoint};
pub use ratfun::{fixed_field_generator, DivisorSupport, RationalFunction};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("matrix is singular")]
    Singular,
    #[error("quadratic is not primitive")]
    NotPrimitive,
    #[error("not a subgroup")]
    NotSubgroup,
    #[error("pole of order {order} at {point} exceeds budget {budget}")]
    PoleTooLarge { point: String, order: i64, budget: u32 },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

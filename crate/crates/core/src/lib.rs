//! Computational tools for the arithmetic order property of finite sets,
//! with an emphasis on the dyadic groups F2^n.

pub mod error;
pub mod formats;
pub mod gf2;
pub mod group;
pub mod modelling;
pub mod clp;
pub mod constructions;
pub mod orderprop;

pub use error::{Error, Result};
pub use gf2::{BitVector, LinearMap2, Subspace2};
pub use group::{Ambient, FiniteSet, GroupElement, Witness};

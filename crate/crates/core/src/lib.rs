//! Computational tools for finite `p`-groups with a bounded elementary
//! abelian normal subgroup.
//!
//! * [`exactla`]: matrices, echelon forms and subspaces over `F_p`.
//! * [`matalg`]: multiplicatively closed spans of matrices.
//! * [`zeroideal`]: square-zero ideals of small codimension in commutative
//!   matrix algebras, with a checkable certificate.
//! * [`group`] and [`abelgrp`]: enumerated matrix groups, Frattini and
//!   Omega/Mho subgroups, invariant factors.
//! * [`nilring`] and [`isotropy`]: class-two groups `1 + S` built from
//!   alternating vector-valued forms, and isotropic subspace search.
//! * [`verifier`] and [`bounds`]: explicit example families and the numeric
//!   rank bounds they are checked against.

pub mod abelgrp;
pub mod bounds;
pub mod error;
pub mod exactla;
pub mod group;
pub mod isotropy;
pub mod matalg;
pub mod nilring;
pub mod smallgrp;
pub mod textfmt;
pub mod verifier;
pub mod zeroideal;

pub use error::{Error, Result};
pub use exactla::{Matrix, PrimeModulus, Subspace};
pub use matalg::MatAlgebra;

/// Default enumeration cap for matrix groups and algebras.
pub const DEFAULT_ENUM_CAP: usize = 1 << 20;

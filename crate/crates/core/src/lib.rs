//! Oriented-circle geometry on the 2-sphere, circle polyhedra, and a
//! certifier for their Moebius rigidity.

// Range checks are written as `!(x < bound)` so that NaN fails them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cpoly;
pub mod hyperbolic;
pub mod hyperideal3d;
pub mod inversive;
pub mod io;
pub mod rigidity;
pub mod suite;

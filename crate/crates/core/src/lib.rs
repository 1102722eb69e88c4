//! Spontaneous-emission limits on ion-trap factoring, and a quantum-jump
//! simulator for small ion registers.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod atomic;
pub mod bounds;
pub mod constants;
pub mod sim;

//! Exact computations with degree-1 weight modules of simple Lie algebras:
//! Weyl-algebra modules, truncated generalized Verma modules, category
//! membership checks, classification lookups and Ext constraint systems.

#![allow(clippy::needless_range_loop, clippy::type_complexity)]

pub mod categorio;
pub mod degonemod;
pub mod extcoh;
pub mod inducemod;
pub mod linalg;
pub mod paperlab;
pub mod rational;
pub mod rootsys;
pub mod weylalg;
pub mod weylmod;

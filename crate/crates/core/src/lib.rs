#![cfg_attr(not(feature = "std"), no_std)]
#![allow(clippy::needless_range_loop)]
//! Finite group actions on ℂ-linear categories, computed exactly where the
//! data is discrete and in double precision where it is not.
//!
//! * [`grp`]: finite groups as multiplication tables.
//! * [`coh`]: normalized bar cochains with ℚ/ℤ values and their cohomology.
//! * [`prep`]: projective representations and twisted group algebras.
//! * [`sscat`]: actions on semisimple categories and their equivariantization.
//! * [`algcat`]: structure-constant algebras, outer actions and crossed products.

extern crate alloc;

pub mod algcat;
pub mod coh;
pub mod error;
pub mod fixtures;
pub mod grp;
pub mod linalg;
pub mod prep;
pub mod root;
pub mod smith;
pub mod sscat;

pub use error::*;
pub use grp::{Character, FiniteGroup, GroupHom, GroupSpec};
pub use root::UnitRoot;

//! Quantization on nilpotent Lie groups whose generic coadjoint orbits are flat.
//!
//! The crate is layered bottom-up: [`lie`] holds the exact algebra, [`orbits`]
//! the coadjoint-orbit analysis, [`catalog`] the built-in groups, [`repcalc`]
//! the Schrödinger-type representations on a grid, [`quantize`] the Fourier
//! transforms and quantization schemes, and [`symclasses`] the symbol-class
//! machinery.

pub mod catalog;
pub mod error;
pub mod lie;
pub mod orbits;
pub mod quantize;
pub mod repcalc;
pub mod spectral;
pub mod symclasses;

pub use error::{Error, Result};

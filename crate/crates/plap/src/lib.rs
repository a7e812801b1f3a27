//! p-Laplacian spectra on finite multigraphs, the random graph and random
//! group-presentation models they compare against, and the fixed-point /
//! Kazhdan-type certificates built on top of the measured spectral gaps.

pub mod eigen;
pub mod certificates;
pub mod error;
pub mod experiment;
pub mod graph;
pub mod ks;
pub mod link;
pub mod models;
pub mod rng;
pub mod solver;
pub mod words;

pub use error::{Error, Result};

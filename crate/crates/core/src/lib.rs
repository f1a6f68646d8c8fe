//! Dynamics on the projective line over finite fields.

pub mod acceptance;
pub mod autgrp;
pub mod cli;
pub mod constructions;
pub mod error;
pub mod ff;
pub mod invariant;
pub mod moduli2;
pub mod projline;
pub mod ratmap;
pub mod sample;

pub use error::{Error, Result};

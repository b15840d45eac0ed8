pub mod cli;
pub mod datagen;
pub mod evalkit;
pub mod logic;
pub mod model;
pub mod rng;
pub mod trainer;
pub mod verifier;

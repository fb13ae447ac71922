pub mod angle;
pub mod config;
pub mod error;
pub mod market;
pub mod matching;
pub mod pairwise;
pub mod rng;
pub mod plot;
pub mod runner;
pub mod stats;
pub mod report;
pub mod simulation;

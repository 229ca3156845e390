pub mod adversarial;
pub mod dist;
pub mod error;
pub mod graph;
pub mod harness;
pub mod opss;
pub mod prob;
pub mod sample;
pub mod solver;

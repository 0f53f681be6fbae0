//! Finite words and their complexity measures.

pub mod automaton;
pub mod changes;
pub mod complexity;
pub mod morse_hedlund;
pub mod word;

pub use changes::{nbdc, nbdc_profile, run_boundaries};
pub use complexity::{block_complexity, complexity_profile_fast, complexity_profile_naive, ComplexityProfile};
pub use morse_hedlund::{morse_hedlund_check, MorseHedlundReport};
pub use word::FiniteWord;

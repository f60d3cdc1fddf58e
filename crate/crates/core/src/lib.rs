pub mod algebra;
pub mod eval;
pub mod formula;
pub mod zoo;
pub mod tautology;
pub mod proof;
pub mod probability;
pub mod cli;

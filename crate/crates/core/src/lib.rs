//! Two-layered logics for probabilities and belief functions over
//! Belnap–Dunn logic: evaluation, measure audits, translations, constraint
//! tableaux, deciders with countermodels, and Hilbert proof checking.

pub mod bd;
pub mod decide;
pub mod fixtures;
pub mod fuzz;
pub mod gen;
pub mod io;
pub mod kripke;
pub mod linarith;
pub mod luk;
pub mod measures;
pub mod proofcheck;
pub mod rat;
pub mod syntax;
pub mod tableau;
pub mod translate;
pub mod two_layered;

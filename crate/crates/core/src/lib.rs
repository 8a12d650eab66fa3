//! Exact and numerical verification engine for Gelfand-Zetlin difference
//! operator representations, Yangian and quantum-torus realizations, and
//! Mellin-Barnes eigenfunctions of the open quantum Toda chain.

pub mod exact;
pub mod gzrep;
pub mod par;
pub mod qtorus;
pub mod toda;
pub mod verify;
pub mod yangian;

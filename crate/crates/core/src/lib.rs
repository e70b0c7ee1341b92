//! Exact symbolic toolkit for the centrally extended Galilei group in 1+1
//! dimensions, its deformation into a quantum group, the Hopf duality behind
//! the deformed generator algebra, phase-space realizations on one- and
//! two-particle Weyl algebras, and the seven-dimensional dynamical algebra of
//! quantum-reference-frame transformations.
//!
//! All symbolic computation is exact (Gaussian rationals, Laurent exponents);
//! floating point appears only in the companion wavepacket simulator crate.

pub mod classical;
pub mod hopf;
pub mod ncalg;
pub mod qrf;
pub mod report;
pub mod reps;
pub mod scalar;
pub mod specs;

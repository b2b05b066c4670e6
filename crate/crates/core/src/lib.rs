//! Exact Abelian integrals for the cubic isochronous Hamiltonian
//! `H = ½x² + λx³ + ½λx⁴ + ½λ⁻¹y² + xy + x²y`, zero counting, perturbation
//! synthesis, and two numerical cross-checks: line quadrature over the level
//! ovals and Poincaré return maps of the perturbed flow.

pub mod engine;
pub mod exactmath;
pub mod quadrature;
pub mod sim;

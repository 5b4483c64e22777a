//! Fourier analysis on truncated bounded Vilenkin groups.
//!
//! Functions are step functions on the cylinders of a finite-depth mixed-radix
//! group. On top of that substrate the crate provides Vilenkin characters and
//! a fast separable transform, Dirichlet kernels and Lebesgue constants,
//! Fejer and strong means, atoms and atomic decompositions for the Hardy space
//! `H_1`, and an executable construction of a function in `H_1` whose
//! `phi`-normalized strong partial-sum means grow without bound.

pub mod counterexample;
pub mod error;
pub mod function;
pub mod hardy;
pub mod identities;
pub mod operators;
pub mod radix;
pub mod transform;

pub use counterexample::{
    assemble_f, atom_k, decomposition_check, divergence_experiment, lambda_k, part_a_check,
    spectrum_check, Counterexample, CounterexampleConfig, DivergenceLedger, DivergenceRow,
    PartACheck, PhiFunction,
};
pub use error::{Error, Result};
pub use function::{CylinderFunction, Norm};
pub use hardy::{
    dyadic_partition_tree, h1_proxy_norm, maximal_interval, validate_atom, Atom, AtomCertificate,
    AtomViolation, AtomicDecomposition, Interval, PartitionTree,
};
pub use operators::{
    cylinder_average, dirichlet, fejer, gat_sums, lebesgue_average_ratio, lebesgue_scan,
    maximal_fejer, maximal_partial, partial_sum, partial_sum_norms, residual_norms,
    strong_mean_gat, strong_sum, strong_sum_normalized, KernelScan, StrongWeight,
};
pub use radix::{DigitExpansion, GroupPoint, RadixSystem};
pub use transform::{character, character_on, forward, inverse, rademacher, Spectrum};

pub use num_complex::Complex64;

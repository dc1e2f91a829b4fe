//! Computing with rational, recognizable, context-free and algebraic subsets
//! of finitely generated groups.
//!
//! The library works over free groups, free-abelian groups, finite-index
//! subgroups of free groups and semidirect products `Z^m ⋊ Z`. Subsets are
//! carried by concrete witnesses — automata for rational subsets, coset data
//! for recognizable ones, grammars for context-free and algebraic ones — and
//! the structural transfer results between a group and its finite-index
//! subgroups are implemented as executable constructions on those witnesses.
//!
//! Equality of subsets is always *bounded* equality: enumerate witness words
//! up to a length bound, evaluate them in the group, and compare the images
//! as sets. Full equality of context-free or algebraic subsets is undecidable
//! in general, so no operation here claims it.
//!
//! Modules:
//! - [`words`]: involutive alphabets, free reduction, Parikh counts.
//! - [`automata`]: NFAs, rational operations, Benois saturation.
//! - [`grammars`]: context-free grammars, CYK, closure constructions, Parikh images.
//! - [`semilinear`]: semilinear-set algebra and the powers-of-two refutation.
//! - [`stallings`]: subgroup graphs, folding, Hall completion, Schreier rewriting.
//! - [`transfer`]: coset decomposition/composition, embeddings, semidirect
//!   orbits and the named counterexample experiments.
//! - [`dsl`]: the text front end shared with the CLI.

pub mod automata;
pub mod dsl;
pub mod grammars;
pub mod matrix;
pub mod rng;
pub mod scalar;
pub mod semilinear;
pub mod stallings;
pub mod transfer;
pub mod words;

/// Default exact integer type. Orbit vectors reach Fibonacci numbers that
/// overflow 64 bits near `k = 45`, so the concrete aliases use big integers.
pub type Int = num_bigint::BigInt;

pub type LinearSet = semilinear::LinearSet<Int>;
pub type SemilinearSet = semilinear::SemilinearSet<Int>;
pub type EventuallyPeriodicSet = semilinear::EventuallyPeriodicSet<Int>;
pub type PowersOfTwoCertificate = semilinear::PowersOfTwoCertificate<Int>;
pub type IntMatrix = matrix::Matrix<Int>;

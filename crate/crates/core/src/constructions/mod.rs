//! Builders for the explicit constructions: the adding-cycles graph,
//! letter substitutions with their lemma checks, and the Rips, coHopfian
//! and non-Hopfian presentations.

mod phi;

pub use phi::{
    apply_phi, apply_phi_k, homogeneous_runs, max_homogeneous_run, optimality_example, verify_phi_lemmas,
    HomogeneousPathReport, LemmaCheck, OptimalityExample, PhiLemmaReport, PhiSubstitution,
};

mod adding;

pub use adding::{
    block_alphabet, block_family_passes, block_words, build_adding_cycles, minimal_block_base, AddCyclesOutput,
    AddCyclesPlan, AddCyclesSummary,
};

mod presentations;

pub use presentations::{build_cohopf, build_nonhopf, build_rips, split_four_components};

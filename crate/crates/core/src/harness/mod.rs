//! End-to-end checks: the rigid-edge argument on sampled clouds, the
//! sheet-count experiment, and the randomized suite for the embedding and
//! parabola lemmas.

pub mod lemmas;
pub mod theorem;

pub use lemmas::{run_lemma_suite, LemmaReport, LemmaSuiteConfig};
pub use theorem::{
    assert_rigid_free, complete_to_cycle, find_rigid_edges, theorem_experiment, ExperimentReport,
    ExperimentRow, RigidEdge, RigidFreeReport,
};

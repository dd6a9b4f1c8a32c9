//! Partition lattices, lattice terms, edge-colored gadget blow-ups, and
//! certificates that a finite `Equ(n)` embeds into a three-generated
//! sublattice of a larger partition lattice.

pub mod blowup;
pub mod error;
pub mod gadgets;
pub mod genlib;
pub mod graph;
pub mod partition;
pub mod represent;
pub mod synth;
pub mod terms;
pub mod verify;

pub use blowup::{assemble, build, eligible_pairs, expected_size, theta, xyz, BlowupWitness, ColoredGraph};
pub use error::{Error, Result};
pub use gadgets::{verify_gadget, BlockListSpec, GadgetReport, GadgetSet, GadgetTemplate};
pub use genlib::{
    all_partitions, bell, reorder_for_lemma, search_quadruple, verify_quadruple, GeneratorQuadruple,
    Provenance,
};
pub use graph::{color_closure, Color, ColorSet, Edge};
pub use partition::{parse_partition_list, GroundMap, Partition};
pub use synth::synth_gadget;
pub use terms::{closure, eval_h1, eval_h2, HQuadruple, Letter, Stage, SublatticeResult, Term, DEFAULT_CAP};
pub use verify::{check_embedding, check_join_conditions, check_theta, EmbeddingCertificate};

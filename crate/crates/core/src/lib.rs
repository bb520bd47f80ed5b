//! Social choice on trees.
//!
//! Alternatives are the nodes of a tree. The crate provides path queries
//! on such trees (paths, distances, path hulls, distance minimizers),
//! strict preferences and single-peakedness on a tree, the extreme rules
//! (pick the node of the peaks' path hull nearest a fixed leaf), and an
//! exhaustive verifier that checks strategy-proofness, unanimity,
//! anonymity and Pareto efficiency of any rule on a finite domain,
//! returning re-checkable witnesses on failure.
//!
//! The [`theorem`] module ties these together: on a minimally rich domain,
//! every extreme rule of a tree is strategy-proof exactly when every
//! preference in the domain is single-peaked on that tree. It checks both
//! directions exhaustively and builds the explicit manipulation that a
//! non-single-peaked preference admits.
//!
//! ```
//! use treechoice::{Domain, ExtremeRule, Tree, Verifier};
//!
//! let line = Tree::from_tokens(&["a", "b", "c", "d"], &[("a", "b"), ("b", "c"), ("c", "d")])?;
//! let domain = Domain::single_peaked(&line);
//! assert_eq!(domain.len(), 8);
//! for rule in ExtremeRule::all(&line) {
//!     assert!(Verifier::new().is_strategy_proof(&rule, &domain, 2)?);
//! }
//! # Ok::<(), treechoice::Error>(())
//! ```

pub mod alternative;
pub mod catalog;
pub mod cli;
pub mod error;
pub mod io;
pub mod preference;
pub mod rules;
pub mod theorem;
pub mod tree;
pub mod verification;

pub use alternative::{alts, Alphabet, Alternative};
pub use error::{Error, Result};
pub use preference::{make_preference, tops_of, Domain, PeakViolation, Preference, Profile};
pub use rules::{ConstantRule, Dictatorship, ExtremeRule, Rule, TopsOnlyRule};
pub use catalog::CatalogTree;
pub use theorem::{
    construct_proof_witness, sweep, verify_converse, verify_forward, Direction, ProofWitness, SweepConfig,
    TheoremVerdict,
};
pub use tree::{NodePath, NodeSet, Tree};
pub use verification::{
    pareto_set, AnonymityWitness, CheckReport, EfficiencyWitness, ManipulationWitness, Property,
    UnanimityWitness, Verdict, Verifier, Witness,
};

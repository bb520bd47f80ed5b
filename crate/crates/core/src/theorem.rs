//! Exhaustive confirmation of the characterization: on a minimally rich
//! domain, every extreme rule of a tree is strategy-proof if and only if
//! every preference in the domain is single-peaked on that tree.
//!
//! [`verify_forward`] checks the "single-peaked implies strategy-proof"
//! direction by exhaustive search over all extreme rules.
//! [`verify_converse`] checks the other direction on a domain holding a
//! non-single-peaked preference: it searches every extreme rule for a
//! manipulation and also builds the explicit manipulation of
//! [`construct_proof_witness`], which must be confirmed by the search.

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::alternative::Alternative;
use crate::catalog::CatalogTree;
use crate::error::{Error, Result};
use crate::preference::{Domain, Preference, Profile};
use crate::rules::{ExtremeRule, Rule};
use crate::tree::Tree;
use crate::verification::{ManipulationWitness, Verifier};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// Single-peaked domain; every extreme rule must be strategy-proof.
    Forward,
    /// Domain with a non-single-peaked member; some extreme rule must be
    /// manipulable.
    Converse,
}

/// A manipulation of the extreme rule at `leaf`, found by exhaustive search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleWitness {
    pub leaf: Alternative,
    pub witness: ManipulationWitness,
}

/// The explicit manipulation built from a non-single-peaked preference.
///
/// With peak `t`, `preferred` is ranked above `blocked` although `blocked`
/// lies on the path from `preferred` to `t`. The rule's leaf sees
/// `preferred` before `blocked` on its way to `t`. The others all report a
/// peak at `blocked`, so the truthful outcome is `blocked`; the liar
/// reports a peak at `preferred` and gets it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofWitness {
    pub leaf: Alternative,
    pub peak: Alternative,
    pub preferred: Alternative,
    pub blocked: Alternative,
    pub witness: ManipulationWitness,
}

impl ProofWitness {
    pub fn rule(&self, tree: &Tree) -> Result<ExtremeRule> {
        ExtremeRule::new(tree, &self.leaf)
    }

    /// The witness re-validates and has exactly the predicted outcomes.
    pub fn is_faithful(&self, tree: &Tree) -> bool {
        self.rule(tree).is_ok_and(|r| self.witness.is_valid_for(&r))
            && self.witness.truthful_outcome == self.blocked
            && self.witness.deviating_outcome == self.preferred
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofCheck {
    #[serde(flatten)]
    pub proof: ProofWitness,
    /// Whether exhaustive search also found the same rule manipulable.
    pub confirmed_by_search: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremVerdict {
    pub tree_id: String,
    pub domain_id: String,
    pub n: usize,
    pub direction: Direction,
    pub single_peaked: bool,
    pub all_extreme_sp: bool,
    pub consistent: bool,
    pub witnesses: Vec<RuleWitness>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub proof: Option<ProofCheck>,
}

impl TheoremVerdict {
    fn new(
        tree: &Tree,
        direction: Direction,
        n: usize,
        single_peaked: bool,
        witnesses: Vec<RuleWitness>,
        proof: Option<ProofCheck>,
    ) -> Self {
        let all_extreme_sp = witnesses.is_empty();
        let proof_ok = proof
            .as_ref()
            .is_none_or(|p| p.confirmed_by_search && p.proof.is_faithful(tree));
        Self {
            tree_id: tree.to_string(),
            domain_id: "custom".into(),
            n,
            direction,
            single_peaked,
            all_extreme_sp,
            consistent: single_peaked == all_extreme_sp && proof_ok,
            witnesses,
            proof,
        }
    }

    pub fn labeled(mut self, tree_id: &str, domain_id: &str) -> Self {
        self.tree_id = tree_id.into();
        self.domain_id = domain_id.into();
        self
    }
}

fn check_alphabet(tree: &Tree, domain: &Domain) -> Result<()> {
    if !tree.nodes().same_as(domain.alphabet()) {
        return Err(Error::AlphabetMismatch(format!(
            "tree over {} but domain over {}",
            tree.nodes(),
            domain.alphabet()
        )));
    }
    Ok(())
}

fn require_rich(domain: &Domain) -> Result<()> {
    if !domain.is_minimally_rich() {
        return Err(Error::PreconditionViolated(
            "domain is not minimally rich; restrict it to its attained peaks and supply a tree on those".into(),
        ));
    }
    Ok(())
}

fn search_all(verifier: &Verifier, tree: &Tree, domain: &Domain, n: usize) -> Result<Vec<RuleWitness>> {
    let mut found = Vec::new();
    for rule in ExtremeRule::all(tree) {
        if let Some(witness) = verifier.find_manipulation(&rule, domain, n)? {
            found.push(RuleWitness {
                leaf: rule.leaf().clone(),
                witness,
            });
        }
    }
    Ok(found)
}

/// Checks that every extreme rule is strategy-proof on a minimally rich,
/// single-peaked domain. A manipulation found here is recorded, not
/// returned as an error, and makes the verdict inconsistent.
pub fn verify_forward(verifier: &Verifier, tree: &Tree, domain: &Domain, n: usize) -> Result<TheoremVerdict> {
    check_alphabet(tree, domain)?;
    require_rich(domain)?;
    if n == 0 {
        return Err(Error::NoAgents);
    }
    if let Some(i) = domain.first_not_single_peaked(tree)? {
        return Err(Error::PreconditionViolated(format!(
            "{} is not single-peaked on the tree",
            domain.preferences()[i]
        )));
    }
    let witnesses = search_all(verifier, tree, domain, n)?;
    Ok(TheoremVerdict::new(tree, Direction::Forward, n, true, witnesses, None))
}

/// Checks that some extreme rule is manipulable on a minimally rich domain
/// containing a non-single-peaked preference, and that the explicit
/// construction for the first such preference is confirmed by search.
pub fn verify_converse(verifier: &Verifier, tree: &Tree, domain: &Domain, n: usize) -> Result<TheoremVerdict> {
    check_alphabet(tree, domain)?;
    require_rich(domain)?;
    if n < 2 {
        return Err(Error::PreconditionViolated("the converse needs at least 2 agents".into()));
    }
    let Some(bad) = domain.first_not_single_peaked(tree)? else {
        return Err(Error::PreconditionViolated(
            "every preference is single-peaked on the tree".into(),
        ));
    };
    let witnesses = search_all(verifier, tree, domain, n)?;
    let proof = construct_proof_witness(tree, &domain.preferences()[bad], domain, n)?;
    let confirmed_by_search = witnesses.iter().any(|w| w.leaf == proof.leaf);
    let check = ProofCheck {
        proof,
        confirmed_by_search,
    };
    Ok(TheoremVerdict::new(tree, Direction::Converse, n, false, witnesses, Some(check)))
}

/// Builds the manipulation that a non-single-peaked member admits.
///
/// Takes the first violating pair of `bad_pref`, the smallest leaf from
/// which `preferred` is met before `blocked`, and the first domain members
/// peaked at `blocked` and `preferred` as the others' report and the
/// misreport.
pub fn construct_proof_witness(tree: &Tree, bad_pref: &Preference, domain: &Domain, n: usize) -> Result<ProofWitness> {
    check_alphabet(tree, domain)?;
    require_rich(domain)?;
    if n < 2 {
        return Err(Error::PreconditionViolated("the construction needs at least 2 agents".into()));
    }
    let Some(liar) = domain.index_of(bad_pref) else {
        return Err(Error::PreconditionViolated(format!("{bad_pref} is not in the domain")));
    };
    let Some(violation) = bad_pref.single_peak_violation(tree)? else {
        return Err(Error::PreconditionViolated(format!(
            "{bad_pref} is single-peaked on the tree"
        )));
    };
    let a = tree.id(&violation.outer)?;
    let b = tree.id(&violation.inner)?;
    let leaf = tree
        .leaf_ids()
        .into_iter()
        .find(|&l| tree.path_ids(l, b).contains(&a))
        .expect("walking from a away from b always ends at a leaf");
    let rule = ExtremeRule::new(tree, tree.node(leaf))?;

    let at_b = domain.first_with_top(b).expect("minimally rich");
    let at_a = domain.first_with_top(a).expect("minimally rich");
    let mut idx = vec![at_b; n];
    idx[0] = liar;
    let truthful_profile = Profile::from_indices(domain, &idx)?;
    let misreport = domain.preferences()[at_a].clone();
    let truthful_outcome = rule.apply(&truthful_profile)?;
    let deviating_outcome = rule.apply(&truthful_profile.with_entry(0, misreport.clone())?)?;
    Ok(ProofWitness {
        leaf: rule.leaf().clone(),
        peak: bad_pref.top().clone(),
        preferred: violation.outer,
        blocked: violation.inner,
        witness: ManipulationWitness {
            agent: 1,
            truthful_profile,
            misreport,
            truthful_outcome,
            deviating_outcome,
        },
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub n_values: Vec<usize>,
    pub forward: bool,
    pub converse: bool,
    /// Trees up to this size get every one-preference corruption.
    pub exhaustive_up_to: usize,
    /// Corruptions sampled per tree above `exhaustive_up_to`.
    pub sample_size: usize,
    pub seed: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            n_values: vec![2],
            forward: true,
            converse: true,
            exhaustive_up_to: 4,
            sample_size: 50,
            seed: 0,
        }
    }
}

/// Non-single-peaked preferences added one at a time to the single-peaked
/// domain: all of them for small trees, a seeded sample otherwise. Returned
/// in lexicographic order.
pub fn corruptions(tree: &Tree, config: &SweepConfig) -> Vec<Preference> {
    let all: Vec<Preference> = Domain::unrestricted(tree.nodes())
        .preferences()
        .iter()
        .filter(|p| !p.is_single_peaked(tree).expect("same alphabet"))
        .cloned()
        .collect();
    if tree.len() <= config.exhaustive_up_to || all.len() <= config.sample_size {
        return all;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut picked = index::sample(&mut rng, all.len(), config.sample_size).into_vec();
    picked.sort_unstable();
    picked.into_iter().map(|i| all[i].clone()).collect()
}

pub fn corruption_id(p: &Preference) -> String {
    format!("sp+{p}")
}

enum Job<'a> {
    Forward(&'a CatalogTree, usize),
    Converse(&'a CatalogTree, Preference, usize),
}

/// Runs the configured checks over a tree catalog. Verdicts come back
/// sorted by tree id, domain id and `n`; the first error in that order is
/// returned if any item fails to complete.
pub fn sweep(verifier: &Verifier, trees: &[CatalogTree], config: &SweepConfig) -> Result<Vec<TheoremVerdict>> {
    let mut jobs = Vec::new();
    for entry in trees {
        let bad = if config.converse { corruptions(&entry.tree, config) } else { Vec::new() };
        for &n in &config.n_values {
            if config.forward {
                jobs.push(Job::Forward(entry, n));
            }
            if n >= 2 {
                jobs.extend(bad.iter().map(|p| Job::Converse(entry, p.clone(), n)));
            }
        }
    }
    let run = |job: &Job| -> Result<TheoremVerdict> {
        match job {
            Job::Forward(entry, n) => {
                let domain = Domain::single_peaked(&entry.tree);
                Ok(verify_forward(verifier, &entry.tree, &domain, *n)?.labeled(&entry.id, "sp"))
            }
            Job::Converse(entry, p, n) => {
                let domain = Domain::single_peaked(&entry.tree).with_preference(p.clone())?;
                Ok(verify_converse(verifier, &entry.tree, &domain, *n)?.labeled(&entry.id, &corruption_id(p)))
            }
        }
    };
    let results: Vec<Result<TheoremVerdict>> = if verifier.is_sequential() {
        jobs.iter().map(run).collect()
    } else {
        verifier.install(|| jobs.par_iter().map(run).collect())
    };
    let mut verdicts = results.into_iter().collect::<Result<Vec<_>>>()?;
    verdicts.sort_by(|x, y| (&x.tree_id, &x.domain_id, x.n).cmp(&(&y.tree_id, &y.domain_id, y.n)));
    Ok(verdicts)
}

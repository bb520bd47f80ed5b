//! Exhaustive, witness-producing property checks for any [`Rule`] over a
//! finite domain and a fixed number of agents.
//!
//! Profiles are enumerated as base-`|D|` counters over domain indices with
//! agent 1 as the least significant digit; agents and misreports are tried
//! in ascending order. Every search reports the first witness in that
//! order, even when the profile space is split across worker threads, and
//! work is accounted as if the search had run sequentially. A work unit is
//! one rule evaluation.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::alternative::Alternative;
use crate::error::{Error, Result};
use crate::preference::{Domain, Preference, Profile};
use crate::rules::{Rule, TopsOnlyRule};
use crate::tree::NodeSet;

pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// A profitable unilateral misreport.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManipulationWitness {
    /// 1-based agent index.
    pub agent: usize,
    pub truthful_profile: Profile,
    pub misreport: Preference,
    pub truthful_outcome: Alternative,
    pub deviating_outcome: Alternative,
}

impl ManipulationWitness {
    pub fn deviating_profile(&self) -> Result<Profile> {
        self.truthful_profile
            .with_entry(self.agent - 1, self.misreport.clone())
    }

    /// Re-checks the witness against `rule` straight from the definition.
    pub fn is_valid_for(&self, rule: &dyn Rule) -> bool {
        let check = || -> Result<bool> {
            if self.agent == 0 || self.agent > self.truthful_profile.n() {
                return Ok(false);
            }
            let truthful = rule.apply(&self.truthful_profile)?;
            let deviating = rule.apply(&self.deviating_profile()?)?;
            let liar = self.truthful_profile.entry(self.agent - 1);
            Ok(truthful == self.truthful_outcome
                && deviating == self.deviating_outcome
                && truthful != deviating
                && liar.prefers(&deviating, &truthful)?)
        };
        check().unwrap_or(false)
    }
}

impl fmt::Display for ManipulationWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "agent {} at {} gets {}; reporting {} instead gets {}",
            self.agent, self.truthful_profile, self.truthful_outcome, self.misreport, self.deviating_outcome
        )
    }
}

/// An outcome every agent ranks below `dominating`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EfficiencyWitness {
    pub profile: Profile,
    pub dominating: Alternative,
    pub outcome: Alternative,
}

impl EfficiencyWitness {
    pub fn is_valid_for(&self, rule: &dyn Rule) -> bool {
        let check = || -> Result<bool> {
            let outcome = rule.apply(&self.profile)?;
            if outcome != self.outcome || outcome == self.dominating {
                return Ok(false);
            }
            for p in self.profile.entries() {
                if !p.prefers(&self.dominating, &outcome)? {
                    return Ok(false);
                }
            }
            Ok(true)
        };
        check().unwrap_or(false)
    }
}

/// A profile where every peak is `peak` but the rule picks something else.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnanimityWitness {
    pub profile: Profile,
    pub peak: Alternative,
    pub outcome: Alternative,
}

impl UnanimityWitness {
    pub fn is_valid_for(&self, rule: &dyn Rule) -> bool {
        let tops = self.profile.tops();
        tops.len() == 1
            && tops.contains(&self.peak)
            && rule
                .apply(&self.profile)
                .is_ok_and(|o| o == self.outcome && o != self.peak)
    }
}

/// Two orderings of the same preferences with different outcomes.
/// Agent `i` of `permuted_profile` reports what agent `permutation[i]`
/// (0-based) reports in `profile`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnonymityWitness {
    pub profile: Profile,
    pub permutation: Vec<usize>,
    pub permuted_profile: Profile,
    pub outcome: Alternative,
    pub permuted_outcome: Alternative,
}

impl AnonymityWitness {
    pub fn is_valid_for(&self, rule: &dyn Rule) -> bool {
        let Ok(permuted) = self.profile.permuted(&self.permutation) else {
            return false;
        };
        permuted == self.permuted_profile
            && rule.apply(&self.profile).is_ok_and(|o| o == self.outcome)
            && rule
                .apply(&permuted)
                .is_ok_and(|o| o == self.permuted_outcome)
            && self.outcome != self.permuted_outcome
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    Manipulation(ManipulationWitness),
    Unanimity(UnanimityWitness),
    Anonymity(AnonymityWitness),
    Efficiency(EfficiencyWitness),
}

impl Witness {
    pub fn is_valid_for(&self, rule: &dyn Rule) -> bool {
        match self {
            Witness::Manipulation(w) => w.is_valid_for(rule),
            Witness::Unanimity(w) => w.is_valid_for(rule),
            Witness::Anonymity(w) => w.is_valid_for(rule),
            Witness::Efficiency(w) => w.is_valid_for(rule),
        }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Manipulation(w) => write!(f, "{w}"),
            Witness::Unanimity(w) => write!(f, "all peaks at {} in {} yet outcome {}", w.peak, w.profile, w.outcome),
            Witness::Anonymity(w) => write!(
                f,
                "{} gives {} but its reordering {} gives {}",
                w.profile, w.outcome, w.permuted_profile, w.permuted_outcome
            ),
            Witness::Efficiency(w) => write!(
                f,
                "at {} outcome {} is unanimously beaten by {}",
                w.profile, w.outcome, w.dominating
            ),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    StrategyProofness,
    Unanimity,
    Anonymity,
    Efficiency,
}

impl Property {
    pub const ALL: [Property; 4] = [
        Property::StrategyProofness,
        Property::Unanimity,
        Property::Anonymity,
        Property::Efficiency,
    ];
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Property::StrategyProofness => "strategy-proofness",
            Property::Unanimity => "unanimity",
            Property::Anonymity => "anonymity",
            Property::Efficiency => "efficiency",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Fails,
}

/// Outcome of one exhaustive check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub property: Property,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub profiles_examined: u64,
    pub work_units: u64,
}

impl CheckReport {
    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }

    /// A failing report must carry a witness that re-checks against `rule`.
    pub fn is_sound_for(&self, rule: &dyn Rule) -> bool {
        match (&self.verdict, &self.witness) {
            (Verdict::Holds, None) => true,
            (Verdict::Fails, Some(w)) => w.is_valid_for(rule),
            _ => false,
        }
    }

    fn from_search<W>(property: Property, found: Searched<W>, wrap: impl FnOnce(W) -> Witness) -> Self {
        let verdict = if found.witness.is_some() { Verdict::Fails } else { Verdict::Holds };
        Self {
            property,
            verdict,
            witness: found.witness.map(wrap),
            profiles_examined: found.profiles_examined,
            work_units: found.work_units,
        }
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = match self.verdict {
            Verdict::Holds => "holds",
            Verdict::Fails => "FAILS",
        };
        write!(
            f,
            "{}: {verdict} ({} profiles, {} evaluations)",
            self.property, self.profiles_examined, self.work_units
        )?;
        if let Some(w) = &self.witness {
            write!(f, "\n  witness: {w}")?;
        }
        Ok(())
    }
}

/// The set of alternatives not unanimously beaten by another alternative.
pub fn pareto_set(profile: &Profile) -> NodeSet {
    let m = profile.alphabet().len();
    let refs: Vec<&Preference> = profile.entries().iter().collect();
    NodeSet::new(
        (0..m)
            .filter(|&a| dominator(&refs, a, m).is_none())
            .map(|a| profile.alphabet().get(a).clone()),
    )
}

fn dominator(entries: &[&Preference], outcome: usize, m: usize) -> Option<usize> {
    (0..m).find(|&b| b != outcome && entries.iter().all(|p| p.prefers_ids(b, outcome)))
}

struct Searched<W> {
    witness: Option<W>,
    profiles_examined: u64,
    work_units: u64,
}

/// Runs checks with a work budget and an optional worker count.
#[derive(Clone)]
pub struct Verifier {
    budget: u64,
    pool: Option<Arc<rayon::ThreadPool>>,
    sequential: bool,
}

impl Default for Verifier {
    fn default() -> Self {
        Self {
            budget: DEFAULT_BUDGET,
            pool: None,
            sequential: false,
        }
    }
}

impl fmt::Debug for Verifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Verifier")
            .field("budget", &self.budget)
            .field("sequential", &self.sequential)
            .finish()
    }
}

impl Verifier {
    pub fn new() -> Self {
        Self::default()
    }

    /// Maximum rule evaluations per check.
    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget.max(1);
        self
    }

    /// Worker threads; `1` runs on the calling thread, `0` uses the global
    /// rayon pool. Results do not depend on this setting.
    pub fn with_jobs(mut self, jobs: usize) -> Self {
        self.sequential = jobs == 1;
        self.pool = (jobs > 1).then(|| {
            Arc::new(
                rayon::ThreadPoolBuilder::new()
                    .num_threads(jobs)
                    .build()
                    .expect("thread pool"),
            )
        });
        self
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    /// Runs `f` inside this verifier's pool.
    pub fn install<R: Send>(&self, f: impl FnOnce() -> R + Send) -> R {
        match &self.pool {
            Some(pool) => pool.install(f),
            None => f(),
        }
    }

    pub fn is_sequential(&self) -> bool {
        self.sequential
    }

    /// First index in `0..count` for which `probe` yields a hit.
    fn first_hit<T: Send>(&self, count: u64, probe: impl Fn(u64) -> Option<T> + Sync + Send) -> Option<(u64, T)> {
        if self.sequential {
            return (0..count).find_map(|r| probe(r).map(|t| (r, t)));
        }
        self.install(|| {
            (0..count)
                .into_par_iter()
                .find_map_first(|r| probe(r).map(|t| (r, t)))
        })
    }

    /// Shared budget logic: `per_profile` units per profile, a hit at
    /// offset `k` (1-based) inside profile `r` sits at `r * per_profile + k`.
    fn budgeted<T: Send>(
        &self,
        profiles: u64,
        per_profile: u64,
        probe: impl Fn(u64) -> Option<(u64, T)> + Sync + Send,
    ) -> Result<Searched<T>> {
        let total = profiles
            .checked_mul(per_profile)
            .ok_or(Error::WorkLimitExceeded(self.budget))?;
        let reachable = if total <= self.budget {
            profiles
        } else {
            profiles.min(self.budget / per_profile.max(1) + 1)
        };
        if let Some((rank, (offset, w))) = self.first_hit(reachable, probe) {
            let position = rank * per_profile + offset;
            if position <= self.budget {
                return Ok(Searched {
                    witness: Some(w),
                    profiles_examined: rank + 1,
                    work_units: position,
                });
            }
        }
        if total > self.budget {
            return Err(Error::WorkLimitExceeded(self.budget));
        }
        Ok(Searched {
            witness: None,
            profiles_examined: profiles,
            work_units: total,
        })
    }

    /// The first manipulation in enumeration order, or `None` if the rule
    /// is strategy-proof on `domain^n`.
    pub fn find_manipulation(&self, rule: &dyn Rule, domain: &Domain, n: usize) -> Result<Option<ManipulationWitness>> {
        Ok(self.search_manipulation(rule, domain, n)?.witness)
    }

    pub fn is_strategy_proof(&self, rule: &dyn Rule, domain: &Domain, n: usize) -> Result<bool> {
        Ok(self.find_manipulation(rule, domain, n)?.is_none())
    }

    pub fn check_strategy_proofness(&self, rule: &dyn Rule, domain: &Domain, n: usize) -> Result<CheckReport> {
        let found = self.search_manipulation(rule, domain, n)?;
        Ok(CheckReport::from_search(Property::StrategyProofness, found, Witness::Manipulation))
    }

    fn search_manipulation(&self, rule: &dyn Rule, domain: &Domain, n: usize) -> Result<Searched<ManipulationWitness>> {
        check_inputs(rule, domain, n)?;
        let prefs = domain.preferences();
        let d = prefs.len() as u64;
        let per_profile = 1 + n as u64 * (d - 1);
        let profiles = profile_count(d, n, self.budget)?;

        let found = self.budgeted(profiles, per_profile, |rank| {
            let idx = decode(rank, d, n);
            let mut refs: Vec<&Preference> = idx.iter().map(|&i| &prefs[i]).collect();
            let truthful = rule.choose(&refs);
            for agent in 0..n {
                let own = idx[agent];
                let liar = &prefs[own];
                for (m, misreport) in prefs.iter().enumerate() {
                    if m == own {
                        continue;
                    }
                    refs[agent] = misreport;
                    let deviating = rule.choose(&refs);
                    if deviating != truthful && liar.prefers_ids(deviating, truthful) {
                        let skipped = if m < own { m } else { m - 1 };
                        let offset = 2 + (agent as u64) * (d - 1) + skipped as u64;
                        return Some((offset, (idx, agent, m, truthful, deviating)));
                    }
                }
                refs[agent] = liar;
            }
            None
        })?;

        Ok(Searched {
            witness: found.witness.map(|(idx, agent, m, truthful, deviating)| {
                manipulation_witness(domain, &idx, agent, m, truthful, deviating)
            }),
            profiles_examined: found.profiles_examined,
            work_units: found.work_units,
        })
    }

    /// Strategy-proofness search for anonymous tops-only rules: enumerates
    /// the liar's preference, the multiset of the other agents' peaks and
    /// the misreported peak. Much smaller than the full profile space.
    ///
    /// The witness places the liar first and fills the other agents with
    /// the first domain member having each peak.
    pub fn find_manipulation_by_tops(
        &self,
        rule: &dyn TopsOnlyRule,
        domain: &Domain,
        n: usize,
    ) -> Result<Option<ManipulationWitness>> {
        check_inputs(rule, domain, n)?;
        let prefs = domain.preferences();
        let m = domain.alphabet().len();
        let peaks: Vec<usize> = (0..m).filter(|&t| domain.first_with_top(t).is_some()).collect();
        let mut work = 0u64;
        let mut others = vec![0usize; n - 1];
        let mut tops = Vec::with_capacity(n);
        for (own, liar) in prefs.iter().enumerate() {
            // Multisets as nondecreasing index sequences into `peaks`.
            others.iter_mut().for_each(|o| *o = 0);
            loop {
                tops.clear();
                tops.push(liar.top_id());
                tops.extend(others.iter().map(|&k| peaks[k]));
                let truthful = rule.choose_by_tops(&tops);
                work += 1;
                for &t in &peaks {
                    if t == liar.top_id() {
                        continue;
                    }
                    tops[0] = t;
                    let deviating = rule.choose_by_tops(&tops);
                    work += 1;
                    if work > self.budget {
                        return Err(Error::WorkLimitExceeded(self.budget));
                    }
                    if deviating != truthful && liar.prefers_ids(deviating, truthful) {
                        let mut idx = vec![own];
                        idx.extend(others.iter().map(|&k| domain.first_with_top(peaks[k]).unwrap()));
                        let mis = domain.first_with_top(t).unwrap();
                        return Ok(Some(manipulation_witness(domain, &idx, 0, mis, truthful, deviating)));
                    }
                }
                if !next_multiset(&mut others, peaks.len()) {
                    break;
                }
            }
        }
        Ok(None)
    }

    pub fn check_unanimity(&self, rule: &dyn Rule, domain: &Domain, n: usize) -> Result<CheckReport> {
        check_inputs(rule, domain, n)?;
        let m = domain.alphabet().len();
        let groups: Vec<(usize, Vec<usize>)> = (0..m)
            .map(|t| {
                let members = (0..domain.len())
                    .filter(|&i| domain.preferences()[i].top_id() == t)
                    .collect::<Vec<_>>();
                (t, members)
            })
            .filter(|(_, members)| !members.is_empty())
            .collect();
        let mut starts = Vec::with_capacity(groups.len());
        let mut profiles = 0u64;
        for (_, members) in &groups {
            starts.push(profiles);
            profiles = profiles
                .checked_add(profile_count(members.len() as u64, n, self.budget)?)
                .ok_or(Error::WorkLimitExceeded(self.budget))?;
        }
        let prefs = domain.preferences();
        let found = self.budgeted(profiles, 1, |global| {
            let g = starts.partition_point(|&s| s <= global) - 1;
            let (peak, members) = &groups[g];
            let local = decode(global - starts[g], members.len() as u64, n);
            let idx: Vec<usize> = local.iter().map(|&k| members[k]).collect();
            let refs: Vec<&Preference> = idx.iter().map(|&i| &prefs[i]).collect();
            let outcome = rule.choose(&refs);
            (outcome != *peak).then_some((1, (idx, *peak, outcome)))
        })?;
        let alphabet = domain.alphabet();
        Ok(CheckReport::from_search(Property::Unanimity, found, |(idx, peak, outcome)| {
            Witness::Unanimity(UnanimityWitness {
                profile: Profile::from_indices(domain, &idx).expect("valid indices"),
                peak: alphabet.get(peak).clone(),
                outcome: alphabet.get(outcome).clone(),
            })
        }))
    }

    /// Compares every profile with its sorted-entry reordering, which is
    /// equivalent to comparing it with all reorderings.
    pub fn check_anonymity(&self, rule: &dyn Rule, domain: &Domain, n: usize) -> Result<CheckReport> {
        check_inputs(rule, domain, n)?;
        let prefs = domain.preferences();
        let d = prefs.len() as u64;
        let profiles = profile_count(d, n, self.budget)?;
        let found = self.budgeted(profiles, 2, |rank| {
            let idx = decode(rank, d, n);
            let mut sigma: Vec<usize> = (0..n).collect();
            sigma.sort_by_key(|&i| idx[i]);
            let refs: Vec<&Preference> = idx.iter().map(|&i| &prefs[i]).collect();
            let sorted: Vec<&Preference> = sigma.iter().map(|&i| refs[i]).collect();
            let outcome = rule.choose(&refs);
            let permuted = rule.choose(&sorted);
            (outcome != permuted).then_some((2, (idx, sigma, outcome, permuted)))
        })?;
        let alphabet = domain.alphabet();
        Ok(CheckReport::from_search(Property::Anonymity, found, |(idx, sigma, outcome, permuted)| {
            let profile = Profile::from_indices(domain, &idx).expect("valid indices");
            let permuted_profile = profile.permuted(&sigma).expect("valid permutation");
            Witness::Anonymity(AnonymityWitness {
                profile,
                permutation: sigma,
                permuted_profile,
                outcome: alphabet.get(outcome).clone(),
                permuted_outcome: alphabet.get(permuted).clone(),
            })
        }))
    }

    pub fn check_efficiency(&self, rule: &dyn Rule, domain: &Domain, n: usize) -> Result<CheckReport> {
        check_inputs(rule, domain, n)?;
        let prefs = domain.preferences();
        let m = domain.alphabet().len();
        let d = prefs.len() as u64;
        let profiles = profile_count(d, n, self.budget)?;
        let found = self.budgeted(profiles, 1, |rank| {
            let idx = decode(rank, d, n);
            let refs: Vec<&Preference> = idx.iter().map(|&i| &prefs[i]).collect();
            let outcome = rule.choose(&refs);
            dominator(&refs, outcome, m).map(|b| (1, (idx, b, outcome)))
        })?;
        let alphabet = domain.alphabet();
        Ok(CheckReport::from_search(Property::Efficiency, found, |(idx, b, outcome)| {
            Witness::Efficiency(EfficiencyWitness {
                profile: Profile::from_indices(domain, &idx).expect("valid indices"),
                dominating: alphabet.get(b).clone(),
                outcome: alphabet.get(outcome).clone(),
            })
        }))
    }

    pub fn check(&self, property: Property, rule: &dyn Rule, domain: &Domain, n: usize) -> Result<CheckReport> {
        match property {
            Property::StrategyProofness => self.check_strategy_proofness(rule, domain, n),
            Property::Unanimity => self.check_unanimity(rule, domain, n),
            Property::Anonymity => self.check_anonymity(rule, domain, n),
            Property::Efficiency => self.check_efficiency(rule, domain, n),
        }
    }
}

fn check_inputs(rule: &dyn Rule, domain: &Domain, n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::NoAgents);
    }
    if !rule.alphabet().same_as(domain.alphabet()) {
        return Err(Error::AlphabetMismatch(format!(
            "rule over {} but domain over {}",
            rule.alphabet(),
            domain.alphabet()
        )));
    }
    Ok(())
}

fn profile_count(d: u64, n: usize, budget: u64) -> Result<u64> {
    u32::try_from(n)
        .ok()
        .and_then(|n| d.checked_pow(n))
        .ok_or(Error::WorkLimitExceeded(budget))
}

/// Domain indices of profile `rank`, agent 1 least significant.
pub fn decode(mut rank: u64, d: u64, n: usize) -> Vec<usize> {
    let mut idx = Vec::with_capacity(n);
    for _ in 0..n {
        idx.push((rank % d) as usize);
        rank /= d;
    }
    idx
}

/// Inverse of [`decode`].
pub fn encode(idx: &[usize], d: u64) -> u64 {
    idx.iter().rev().fold(0, |acc, &i| acc * d + i as u64)
}

fn next_multiset(seq: &mut [usize], k: usize) -> bool {
    for pos in (0..seq.len()).rev() {
        if seq[pos] + 1 < k {
            let v = seq[pos] + 1;
            seq[pos..].iter_mut().for_each(|s| *s = v);
            return true;
        }
    }
    false
}

fn manipulation_witness(
    domain: &Domain,
    idx: &[usize],
    agent: usize,
    misreport: usize,
    truthful: usize,
    deviating: usize,
) -> ManipulationWitness {
    let alphabet = domain.alphabet();
    ManipulationWitness {
        agent: agent + 1,
        truthful_profile: Profile::from_indices(domain, idx).expect("valid indices"),
        misreport: domain.preferences()[misreport].clone(),
        truthful_outcome: alphabet.get(truthful).clone(),
        deviating_outcome: alphabet.get(deviating).clone(),
    }
}

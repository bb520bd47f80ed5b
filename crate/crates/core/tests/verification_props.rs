mod common;

use std::collections::BTreeSet;

use common::*;
use treechoice::catalog;
use treechoice::{
    pareto_set, Alphabet, ConstantRule, Dictatorship, Domain, Error, ExtremeRule, Preference, Profile, Property, Rule,
    Tree, Verifier, Witness,
};

fn small_trees(max: usize) -> Vec<Tree> {
    (3..=max).flat_map(catalog::nonisomorphic_trees).collect()
}

fn non_single_peaked(t: &Tree) -> Vec<Preference> {
    Domain::unrestricted(t.nodes())
        .preferences()
        .iter()
        .filter(|p| !p.is_single_peaked(t).unwrap())
        .cloned()
        .collect()
}

/// Test domains with their agent counts.
fn instances() -> Vec<(Tree, Domain, usize)> {
    let mut out = Vec::new();
    for t in small_trees(5) {
        let sp = Domain::single_peaked(&t);
        let bad = non_single_peaked(&t);
        let small = t.len() <= 4;
        for n in 1..=3 {
            if n == 3 && !small {
                out.push((t.clone(), sp.clone(), n));
                out.push((t.clone(), sp.with_preference(bad[0].clone()).unwrap(), n));
                continue;
            }
            out.push((t.clone(), sp.clone(), n));
            let step = if small { 1 } else { 9 };
            for p in bad.iter().step_by(step) {
                out.push((t.clone(), sp.with_preference(p.clone()).unwrap(), n));
            }
            if small {
                out.push((t.clone(), Domain::unrestricted(t.nodes()), n));
            }
        }
    }
    out
}

/// First manipulation by plain enumeration: profiles with agent 1 varying
/// fastest, then agents, then misreports.
fn naive_first(rule: &dyn Rule, d: &Domain, n: usize) -> Option<(Vec<usize>, usize, usize)> {
    let mut order = index_tuples(d.len(), n);
    for t in &mut order {
        t.reverse();
    }
    order.sort();
    for t in &mut order {
        t.reverse();
    }
    for idx in order {
        let truthful = rule.choose(&refs(d, &idx));
        for agent in 0..n {
            for m in 0..d.len() {
                if m == idx[agent] {
                    continue;
                }
                let mut dev = idx.clone();
                dev[agent] = m;
                let y = rule.choose(&refs(d, &dev));
                if y != truthful && d.preferences()[idx[agent]].prefers_ids(y, truthful) {
                    return Some((idx, agent, m));
                }
            }
        }
    }
    None
}

#[test]
fn naive_and_tops_searches_agree() {
    let v = Verifier::new();
    let mut manipulable = 0;
    let mut total = 0;
    for (t, d, n) in instances() {
        for rule in ExtremeRule::all(&t) {
            let naive = naive_first(&rule, &d, n);
            let found = v.find_manipulation(&rule, &d, n).unwrap();
            let fast = v.find_manipulation_by_tops(&rule, &d, n).unwrap();
            assert_eq!(naive.is_some(), found.is_some(), "{t} {d} n={n}");
            assert_eq!(naive.is_some(), fast.is_some(), "{t} {d} n={n}");
            if let (Some((idx, agent, m)), Some(w)) = (naive, found) {
                assert_eq!(w.truthful_profile, Profile::from_indices(&d, &idx).unwrap());
                assert_eq!(w.agent, agent + 1);
                assert_eq!(w.misreport, d.preferences()[m]);
                assert!(w.is_valid_for(&rule));
                assert!(fast.unwrap().is_valid_for(&rule));
                manipulable += 1;
            }
            total += 1;
        }
    }
    assert!(manipulable > 0 && manipulable < total);
}

/// Reports the peak of the agent with the lowest-ranked peak among the
/// first two agents. Anonymous for n <= 2, not for n = 3.
struct FirstTwo(Alphabet);

impl Rule for FirstTwo {
    fn alphabet(&self) -> &Alphabet {
        &self.0
    }
    fn choose(&self, profile: &[&Preference]) -> usize {
        profile.iter().take(2).map(|p| p.top_id()).min().unwrap()
    }
    fn name(&self) -> String {
        "first-two".into()
    }
}

fn assorted_rules(t: &Tree) -> Vec<Box<dyn Rule>> {
    let mut rules: Vec<Box<dyn Rule>> = Vec::new();
    for r in ExtremeRule::all(t) {
        rules.push(Box::new(r));
    }
    rules.push(Box::new(Dictatorship::new(t.nodes(), 0)));
    rules.push(Box::new(Dictatorship::new(t.nodes(), 1)));
    rules.push(Box::new(ConstantRule::new(t.nodes(), t.node(0)).unwrap()));
    rules.push(Box::new(FirstTwo(t.nodes().clone())));
    rules
}

#[test]
fn anonymity_check_agrees_with_all_permutations() {
    let v = Verifier::new();
    for t in small_trees(4) {
        for d in [Domain::single_peaked(&t), Domain::unrestricted(t.nodes())] {
            for n in 1..=3 {
                let perms = permutations(n);
                for rule in assorted_rules(&t) {
                    if rule.name().starts_with("dictator") && n < 2 {
                        continue;
                    }
                    let oracle = index_tuples(d.len(), n).into_iter().any(|idx| {
                        let p = Profile::from_indices(&d, &idx).unwrap();
                        let base = rule.apply(&p).unwrap();
                        perms.iter().any(|s| rule.apply(&p.permuted(s).unwrap()).unwrap() != base)
                    });
                    let report = v.check_anonymity(rule.as_ref(), &d, n).unwrap();
                    assert_eq!(report.holds(), !oracle, "{} n={n}", rule.name());
                    assert!(report.is_sound_for(rule.as_ref()));
                }
            }
        }
    }
}

#[test]
fn efficiency_implies_unanimity() {
    let v = Verifier::new();
    let mut efficient = 0;
    for t in small_trees(4) {
        for d in [Domain::single_peaked(&t), Domain::unrestricted(t.nodes())] {
            for n in 1..=2 {
                for rule in assorted_rules(&t) {
                    if rule.name().starts_with("dictator") && n < 2 {
                        continue;
                    }
                    let e = v.check_efficiency(rule.as_ref(), &d, n).unwrap();
                    let u = v.check_unanimity(rule.as_ref(), &d, n).unwrap();
                    assert!(e.is_sound_for(rule.as_ref()) && u.is_sound_for(rule.as_ref()));
                    if e.holds() {
                        efficient += 1;
                        assert!(u.holds(), "{} on {d}", rule.name());
                    }
                }
            }
        }
    }
    assert!(efficient > 0);
}

fn brute_pareto(p: &Profile) -> BTreeSet<usize> {
    let m = p.alphabet().len();
    (0..m)
        .filter(|&a| !(0..m).any(|b| b != a && p.entries().iter().all(|q| q.position(b) < q.position(a))))
        .collect()
}

#[test]
fn pareto_set_matches_definition() {
    for t in small_trees(4) {
        let d = Domain::unrestricted(t.nodes());
        for idx in index_tuples(d.len(), 2) {
            let p = Profile::from_indices(&d, &idx).unwrap();
            let want: Vec<usize> = brute_pareto(&p).into_iter().collect();
            assert_eq!(pareto_set(&p), t.set_from_ids(want));
        }
    }
}

/// Multisets of size `n` over `0..d` as nondecreasing tuples. Pareto sets
/// and peak sets ignore the order of agents, so these cover every profile.
fn multisets(d: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|t: Vec<usize>| {
                let lo = t.last().copied().unwrap_or(0);
                (lo..d).map(move |i| {
                    let mut u = t.clone();
                    u.push(i);
                    u
                })
            })
            .collect();
    }
    out
}

#[test]
fn pareto_set_is_the_peak_hull_on_single_peaked_domains() {
    for t in small_trees(6) {
        let d = Domain::single_peaked(&t);
        let adj = adjacency(&t);
        for n in 1..=3 {
            let profiles = if t.len() <= 5 { index_tuples(d.len(), n) } else { multisets(d.len(), n) };
            for idx in profiles {
                let p = Profile::from_indices(&d, &idx).unwrap();
                let tops = p.top_ids();
                let h: Vec<usize> = hull(&adj, &tops).into_iter().collect();
                assert_eq!(pareto_set(&p), t.set_from_ids(h), "{p}");
            }
        }
    }
}

#[test]
fn pareto_set_can_exceed_the_hull_off_single_peaked_domains() {
    let t = catalog::line(3);
    let d = Domain::unrestricted(t.nodes());
    // e.g. [a,c,b] and [b,c,a]: nobody's peak c is undominated
    let differs = index_tuples(d.len(), 2).into_iter().any(|idx| {
        let p = Profile::from_indices(&d, &idx).unwrap();
        pareto_set(&p) != t.path_hull(&p.tops()).unwrap()
    });
    assert!(differs);
}

#[test]
fn deviations_never_help_on_single_peaked_domains() {
    // With x the truthful outcome and y the outcome after agent i's
    // misreport: x = y or agent i prefers x. Both lie on the path from the
    // leaf to the others' gate z, and x is agent i's peak when that peak is
    // on this path.
    for t in small_trees(5) {
        let d = Domain::single_peaked(&t);
        let max_n = if t.len() <= 4 { 3 } else { 2 };
        for rule in ExtremeRule::all(&t) {
            let leaf = rule.leaf_id();
            for n in 2..=max_n {
                for idx in index_tuples(d.len(), n) {
                    let x = rule.choose(&refs(&d, &idx));
                    for agent in 0..n {
                        let own = &d.preferences()[idx[agent]];
                        let others: Vec<usize> = (0..n)
                            .filter(|&j| j != agent)
                            .map(|j| d.preferences()[idx[j]].top_id())
                            .collect();
                        let z = t.gate(leaf, &t.hull_mask(&others));
                        let to_z = t.path_ids(leaf, z);
                        assert!(to_z.contains(&x));
                        if to_z.contains(&own.top_id()) {
                            assert_eq!(x, own.top_id());
                        }
                        for m in 0..d.len() {
                            let mut dev = idx.clone();
                            dev[agent] = m;
                            let y = rule.choose(&refs(&d, &dev));
                            assert!(to_z.contains(&y));
                            assert!(x == y || own.prefers_ids(x, y));
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn reports_do_not_depend_on_worker_count() {
    let seq = Verifier::new().with_jobs(1);
    let par = Verifier::new().with_jobs(4);
    let global = Verifier::new();
    for (t, d, n) in instances().into_iter().filter(|(t, _, n)| t.len() <= 4 && *n == 2) {
        for rule in assorted_rules(&t) {
            for prop in Property::ALL {
                let a = seq.check(prop, rule.as_ref(), &d, n).unwrap();
                assert_eq!(a, par.check(prop, rule.as_ref(), &d, n).unwrap());
                assert_eq!(a, global.check(prop, rule.as_ref(), &d, n).unwrap());
                assert!(a.is_sound_for(rule.as_ref()));
                if let Some(w) = &a.witness {
                    assert!(w.is_valid_for(rule.as_ref()));
                }
            }
        }
    }
}

#[test]
fn budget_boundaries() {
    let t = catalog::line(4);
    let d = Domain::single_peaked(&t);
    let rule = &ExtremeRule::all(&t)[0];
    // holds: exactly the total is enough
    let full = Verifier::new().check_strategy_proofness(rule, &d, 2).unwrap();
    assert!(full.holds());
    let total = full.work_units;
    assert_eq!(total, 64 * (1 + 2 * 7));
    assert!(Verifier::new().with_budget(total).check_strategy_proofness(rule, &d, 2).is_ok());
    assert_eq!(
        Verifier::new().with_budget(total - 1).check_strategy_proofness(rule, &d, 2),
        Err(Error::WorkLimitExceeded(total - 1))
    );

    // fails: a witness at position w is reported with budget w, not w - 1
    let bad = d.with_preference(Preference::from_tokens(&["d", "b", "c", "a"], t.nodes()).unwrap()).unwrap();
    let found = Verifier::new().check_strategy_proofness(rule, &bad, 2).unwrap();
    let w = found.work_units;
    assert!(!found.holds());
    for jobs in [1, 3] {
        let v = Verifier::new().with_jobs(jobs);
        assert_eq!(v.clone().with_budget(w).check_strategy_proofness(rule, &bad, 2).unwrap(), found);
        assert_eq!(
            v.clone().with_budget(w - 1).check_strategy_proofness(rule, &bad, 2),
            Err(Error::WorkLimitExceeded(w - 1))
        );
    }
}

#[test]
fn witnesses_serialize_and_revalidate() {
    let t = catalog::star(4);
    let d = Domain::unrestricted(t.nodes());
    let v = Verifier::new();
    for rule in ExtremeRule::all(&t) {
        for prop in Property::ALL {
            let r = v.check(prop, &rule, &d, 2).unwrap();
            let text = serde_json::to_string(&r).unwrap();
            let back: treechoice::CheckReport = serde_json::from_str(&text).unwrap();
            assert_eq!(back, r);
            if let Some(w) = back.witness {
                assert!(w.is_valid_for(&rule));
                assert!(matches!(
                    (prop, &w),
                    (Property::StrategyProofness, Witness::Manipulation(_)) | (Property::Efficiency, Witness::Efficiency(_))
                ));
            }
        }
    }
}

#[test]
fn tampered_witnesses_are_rejected() {
    let t = catalog::line(4);
    let d = Domain::unrestricted(t.nodes());
    let rule = &ExtremeRule::all(&t)[0];
    let mut w = Verifier::new().find_manipulation(rule, &d, 2).unwrap().unwrap();
    assert!(w.is_valid_for(rule));
    std::mem::swap(&mut w.truthful_outcome, &mut w.deviating_outcome);
    assert!(!w.is_valid_for(rule));
    w.agent = 3;
    assert!(!w.is_valid_for(rule));
}

//! A domain whose peaks miss some nodes: restrict it to the attained peaks
//! and check it against a tree on those.

use treechoice::{catalog, verify_forward, Domain, Tree, Verifier};

fn main() -> treechoice::Result<()> {
    let line = catalog::line(5);
    let kept = Domain::single_peaked(&line)
        .preferences()
        .iter()
        .filter(|p| !["b", "d"].contains(&p.top().as_str()))
        .cloned()
        .collect();
    let domain = Domain::new(line.nodes().clone(), kept)?;
    println!("{domain}, minimally rich: {}", domain.is_minimally_rich());
    println!("{:?}", verify_forward(&Verifier::new(), &line, &domain, 2).err());

    let restricted = domain.restrict()?;
    println!("restricted: {restricted}");
    for p in restricted.preferences() {
        println!("  {p}");
    }
    let sub = Tree::from_tokens(&["a", "c", "e"], &[("a", "c"), ("c", "e")])?;
    let verdict = verify_forward(&Verifier::new(), &sub, &restricted, 2)?;
    println!("on {sub}: all extreme rules strategy-proof: {}", verdict.all_extreme_sp);
    Ok(())
}

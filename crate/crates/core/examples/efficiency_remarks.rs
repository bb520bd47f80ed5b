//! Unanimity, anonymity and Pareto efficiency of extreme rules.

use treechoice::{catalog, pareto_set, Domain, ExtremeRule, Profile, Property, Tree, Verifier};

fn main() -> treechoice::Result<()> {
    let verifier = Verifier::new();
    let star = Tree::from_tokens(&["c", "x", "y", "z"], &[("c", "x"), ("c", "y"), ("c", "z")])?;
    let all = Domain::unrestricted(star.nodes());
    let rule = ExtremeRule::new(&star, &"z".parse()?)?;
    for property in Property::ALL.into_iter().skip(1) {
        println!("{}", verifier.check(property, &rule, &all, 2)?);
    }

    // On single-peaked profiles the efficient set is the hull of the peaks.
    let sp = Domain::single_peaked(&star);
    println!("{}", verifier.check_efficiency(&rule, &sp, 2)?);
    let profile = Profile::from_indices(&sp, &[0, 7])?;
    println!(
        "{profile}: pareto {} hull {}",
        pareto_set(&profile),
        star.path_hull(&profile.tops())?
    );

    // On a line every extreme rule picks somebody's peak.
    let line = catalog::line(4);
    let d = Domain::unrestricted(line.nodes());
    println!("{}", verifier.check_efficiency(&ExtremeRule::all(&line)[0], &d, 2)?);
    Ok(())
}

//! Exhaustive strategy-proofness checks, with and without a
//! non-single-peaked preference in the domain.

use treechoice::{catalog, Domain, ExtremeRule, Preference, Verifier};

fn main() -> treechoice::Result<()> {
    let line = catalog::line(4);
    let sp = Domain::single_peaked(&line);
    let rule = ExtremeRule::new(&line, &"a".parse()?)?;
    let verifier = Verifier::new();

    println!("{}", verifier.check_strategy_proofness(&rule, &sp, 2)?);

    let bad = Preference::from_tokens(&["d", "b", "c", "a"], line.nodes())?;
    let corrupted = sp.with_preference(bad)?;
    let report = verifier.check_strategy_proofness(&rule, &corrupted, 2)?;
    println!("{report}");

    // The peak-only search is much smaller and agrees on whether a
    // manipulation exists.
    let fast = verifier.find_manipulation_by_tops(&rule, &corrupted, 3)?;
    println!("three agents, peak search: {}", fast.map_or("none".into(), |w| w.to_string()));

    // Checks stop with an error rather than run past the budget.
    let tight = Verifier::new().with_budget(100);
    println!("budget 100: {:?}", tight.check_strategy_proofness(&rule, &sp, 2).err());
    Ok(())
}

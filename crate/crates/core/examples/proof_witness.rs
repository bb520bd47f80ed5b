//! Builds the manipulation that a non-single-peaked preference admits and
//! confirms it by search.

use treechoice::{catalog, construct_proof_witness, Domain, Preference, Verifier};

fn main() -> treechoice::Result<()> {
    let line = catalog::line(4);
    let bad = Preference::from_tokens(&["d", "b", "c", "a"], line.nodes())?;
    let domain = Domain::single_peaked(&line).with_preference(bad.clone())?;

    let proof = construct_proof_witness(&line, &bad, &domain, 2)?;
    println!("peak {}: {} ranked above {}", proof.peak, proof.preferred, proof.blocked);
    println!("rule at leaf {}", proof.leaf);
    println!("{}", proof.witness);
    println!("faithful: {}", proof.is_faithful(&line));

    let rule = proof.rule(&line)?;
    let found = Verifier::new().find_manipulation(&rule, &domain, 2)?;
    println!("search finds: {}", found.map_or("nothing".into(), |w| w.to_string()));
    Ok(())
}

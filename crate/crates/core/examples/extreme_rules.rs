//! Evaluates every extreme rule of a star on a couple of profiles.

use treechoice::{Domain, ExtremeRule, Preference, Profile, Rule, Tree};

fn main() -> treechoice::Result<()> {
    let star = Tree::from_tokens(&["c", "x", "y", "z"], &[("c", "x"), ("c", "y"), ("c", "z")])?;
    let p = |r: [&str; 4]| Preference::from_tokens(&r, star.nodes());

    let profiles = [
        Profile::new(vec![p(["x", "c", "y", "z"])?, p(["y", "c", "x", "z"])?])?,
        Profile::new(vec![p(["x", "c", "y", "z"])?, p(["z", "c", "x", "y"])?, p(["x", "c", "z", "y"])?])?,
        Profile::new(vec![p(["y", "c", "x", "z"])?; 3])?,
    ];
    for profile in &profiles {
        print!("{profile} peaks {}:", profile.tops());
        for rule in ExtremeRule::all(&star) {
            print!("  {} -> {}", rule.name(), rule.apply(profile)?);
        }
        println!();
    }

    // Outcomes only depend on the reported peaks.
    let d = Domain::single_peaked(&star);
    let rule = ExtremeRule::new(&star, &"z".parse()?)?;
    let a = Profile::from_indices(&d, &[0, 3])?;
    let b = Profile::from_indices(&d, &[1, 3])?;
    assert_eq!(a.tops(), b.tops());
    println!("{a} -> {}, {b} -> {}", rule.apply(&a)?, rule.apply(&b)?);
    Ok(())
}

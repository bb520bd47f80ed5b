//! The verifier accepts any rule. Here: the peak of the agent whose peak
//! comes first alphabetically.

use treechoice::{catalog, Alphabet, Dictatorship, Domain, Preference, Property, Rule, Verifier};

struct SmallestPeak(Alphabet);

impl Rule for SmallestPeak {
    fn alphabet(&self) -> &Alphabet {
        &self.0
    }

    fn choose(&self, profile: &[&Preference]) -> usize {
        profile.iter().map(|p| p.top_id()).min().unwrap()
    }

    fn name(&self) -> String {
        "smallest-peak".into()
    }
}

fn main() -> treechoice::Result<()> {
    let line = catalog::line(4);
    let domain = Domain::single_peaked(&line);
    let verifier = Verifier::new();
    let rules: [&dyn Rule; 2] = [&SmallestPeak(line.nodes().clone()), &Dictatorship::new(line.nodes(), 1)];
    for rule in rules {
        println!("{}", rule.name());
        for property in Property::ALL {
            let report = verifier.check(property, rule, &domain, 3)?;
            println!("  {report}");
            assert!(report.is_sound_for(rule));
        }
    }
    Ok(())
}

//! Enumerates the single-peaked preferences on a tree and tests a few
//! orders against it.

use treechoice::{catalog, Domain, Preference};

fn main() -> treechoice::Result<()> {
    let line = catalog::line(4);
    let sp = Domain::single_peaked(&line);
    println!("{} single-peaked orders on {line}:", sp.len());
    for p in sp.preferences() {
        println!("  {p}");
    }

    for ranking in [["b", "c", "a", "d"], ["d", "b", "c", "a"]] {
        let p = Preference::from_tokens(&ranking, line.nodes())?;
        match p.single_peak_violation(&line)? {
            None => println!("{p} is single-peaked"),
            Some(v) => println!("{p} is not: {} is ranked above {}, which is closer to the peak", v.outer, v.inner),
        }
    }

    let star = catalog::star(5);
    let d = Domain::single_peaked(&star);
    println!("star on 5 nodes: {} orders, minimally rich: {}", d.len(), d.is_minimally_rich());
    Ok(())
}

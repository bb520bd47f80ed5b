//! Checks the characterization on every tree with 3 to 5 nodes.

use treechoice::{catalog, sweep, Direction, SweepConfig, Verifier};

fn main() -> treechoice::Result<()> {
    let trees = catalog::catalog(3..=5);
    let config = SweepConfig {
        n_values: vec![2, 3],
        sample_size: 10,
        ..SweepConfig::default()
    };
    let verdicts = sweep(&Verifier::new(), &trees, &config)?;
    for entry in &trees {
        let mine: Vec<_> = verdicts.iter().filter(|v| v.tree_id == entry.id).collect();
        let converse = mine.iter().filter(|v| v.direction == Direction::Converse).count();
        println!(
            "{} {:<40} forward ok: {}  converse checks: {converse}, all manipulable: {}",
            entry.id,
            entry.tree.to_string(),
            mine.iter().filter(|v| v.direction == Direction::Forward).all(|v| v.all_extreme_sp),
            mine.iter().filter(|v| v.direction == Direction::Converse).all(|v| !v.all_extreme_sp),
        );
    }
    let bad = verdicts.iter().filter(|v| !v.consistent).count();
    println!("{} verdicts, {bad} inconsistent", verdicts.len());
    Ok(())
}

//! Paths, distances, hulls and distance minimizers on a small tree.

use treechoice::{NodeSet, Tree};

fn main() -> treechoice::Result<()> {
    //        x
    //        |
    //   y -- c -- z -- w
    let tree = Tree::from_tokens(&["c", "w", "x", "y", "z"], &[("c", "x"), ("c", "y"), ("c", "z"), ("z", "w")])?;
    let id = |s: &str| s.parse().unwrap();

    println!("tree        {tree}");
    println!("leaves      {}", tree.leaves());
    println!("is a line   {}", tree.is_line());
    println!("path y..w   {}", tree.path(&id("y"), &id("w"))?);
    println!("dist x..w   {}", tree.distance(&id("x"), &id("w"))?);

    let set = NodeSet::from_tokens(&["x", "y"])?;
    println!("hull {set}  {}", tree.path_hull(&set)?);
    println!("nearest to w in that hull: {}", tree.distance_minimizer(&id("w"), &set)?);
    Ok(())
}

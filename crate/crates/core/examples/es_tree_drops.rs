//! Depth-bounded Even-Shiloach tree on a small digraph: levels, drops, work.

use decremental::es_tree::EsTree;
use decremental::DecrementalGraph;

fn main() -> Result<(), decremental::Error> {
    // 0 -> 1 -> 2 -> 3 plus a shortcut 0 -> 2.
    let mut g = DecrementalGraph::new(5, &[(0, 1, 1), (1, 2, 1), (2, 3, 1), (0, 2, 1), (3, 4, 1)], 1)?;
    let mut tree = EsTree::build(&g.view(), 0, 3);
    println!("levels: {:?}", (0..5).map(|v| tree.level(v)).collect::<Vec<_>>());

    for (u, v) in [(0, 2), (2, 3)] {
        let up = g.delete_edge(u, v)?;
        let report = tree.on_update(&g, &up);
        println!(
            "delete ({u},{v}): levels {:?}, dropped {:?}",
            (0..5).map(|v| tree.level(v)).collect::<Vec<_>>(),
            report.dropped
        );
    }
    println!("work {} (bound {})", tree.work(), tree.work_bound());
    Ok(())
}

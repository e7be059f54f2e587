//! Exact path unions and the decremental approximate path union.

use decremental::approx_path_union::ApproxPathUnion;
use decremental::path_union::path_union;
use decremental::DecrementalGraph;

fn main() -> Result<(), decremental::Error> {
    // Two routes from 0 to 5: a short one through 1 and a long one through 2, 3, 4.
    let edges = [(0, 1, 1), (1, 5, 1), (0, 2, 1), (2, 3, 1), (3, 4, 1), (4, 5, 1)];
    let mut g = DecrementalGraph::new(6, &edges, 1)?;
    for bound in [2, 4] {
        let (set, _) = path_union(&g.view(), 0, 5, bound);
        println!("P(0, 5, {bound}) = {:?}", set.to_vec());
    }

    let mut apu = ApproxPathUnion::new(&g, 0, 2);
    println!("approximate, h = 2: {:?}", apu.query(&g, 5).to_vec());
    g.delete_edge(1, 5)?;
    // The remaining path is 4 hops, inside the outer factor times h.
    println!("after deleting (1,5): {:?} (outer factor {})", apu.query(&g, 5).to_vec(), apu.outer_factor());
    println!("ledger: {:?}", apu.ledger());
    Ok(())
}

use entcomm::classical::FacetInequality;
use entcomm::search::{seesaw_eacc, SeesawConfig};
use std::time::Instant;
fn main() {
    let facets = [
        ("(3,3) 2ndf p(2|1)+p(1|3)+p(3|2)", FacetInequality::from_cells(3, 3, &[(2,1),(1,3),(3,2)], 3), 0.3726),
        ("(3,3) first p(2|1)+p(1|3)+p(3|1)", FacetInequality::from_cells(3, 3, &[(2,1),(1,3),(3,1)], 3), 0.3726),
        ("(3,4) 2ndfacet +p(4|2)", FacetInequality::from_cells(4, 3, &[(2,1),(1,3),(3,1),(4,2)], 3), 0.3974),
    ];
    for (name, f, budget) in &facets {
        let cfg = SeesawConfig { restarts: 16, max_rounds: 40, ..Default::default() };
        let t0 = Instant::now();
        let r = seesaw_eacc(f, &cfg, Some(*budget)).unwrap();
        println!("{name}: S={:.5} D={:.5} ratio={:.4}  ({:.1?})", r.achieved_s, r.achieved_d, r.ratio, t0.elapsed());
    }
}

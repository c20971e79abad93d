use entcomm::classical::polytope::{dd_enumerate, rat, HPolytope, Rat};
use num_traits::{One, Zero};
use std::time::Instant;

// E_D = { e stochastic N x M : sum_m max_x e(m|x) <= cap } at fixed cap,
// via the t-lift (t then projected out; count distinct e-parts).
fn count_encoding_vertices(n: usize, m_count: usize, cap: Rat) -> (usize, usize) {
    let nv = m_count * n + m_count;
    let mut poly = HPolytope {
        n: nv,
        eq: vec![],
        ineq: vec![],
        bounds: vec![(Rat::zero(), Rat::one()); nv],
    };
    for x in 0..n {
        let mut row = vec![Rat::zero(); nv];
        for m in 0..m_count {
            row[m * n + x] = Rat::one();
        }
        poly.eq.push((row, Rat::one()));
    }
    for m in 0..m_count {
        for x in 0..n {
            let mut row = vec![Rat::zero(); nv];
            row[m * n + x] = Rat::one();
            row[m_count * n + m] = -Rat::one();
            poly.ineq.push((row, Rat::zero()));
        }
    }
    let mut row = vec![Rat::zero(); nv];
    for m in 0..m_count {
        row[m_count * n + m] = Rat::one();
    }
    poly.ineq.push((row, cap));
    let verts = dd_enumerate(&poly).unwrap();
    let mut eparts: Vec<Vec<Rat>> = verts
        .iter()
        .map(|v| v[..m_count * n].to_vec())
        .collect();
    eparts.sort();
    eparts.dedup();
    (verts.len(), eparts.len())
}

fn main() {
    for m_count in [3usize, 4] {
        for (num, den, label) in [(3i64, 2i64, "cap 3/2 (D=1/2)"), (2, 1, "cap 2 (D=2/3)"), (21, 10, "cap 21/10 (D=7/10)"), (5, 2, "cap 5/2")] {
            let t0 = Instant::now();
            let (nv, ne) = count_encoding_vertices(3, m_count, rat(num, den));
            println!("N=3 M={m_count} {label}: lift vertices {nv}, distinct e {ne} ({:.1?})", t0.elapsed());
        }
    }
}

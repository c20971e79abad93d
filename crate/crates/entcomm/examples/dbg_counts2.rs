use entcomm::classical::polytope::{dd_enumerate, HPolytope, Rat};
use num_traits::{One, Zero};
use std::collections::BTreeSet;
use std::time::Instant;

// lift polytope over encodings e(m|x), m in 0..M, x in 0..N (uniform priors):
// rows stochastic, t_m >= e(m|x), plus a boundedness cap on t.
fn lift(n: usize, m_count: usize, t_cap_one: bool) -> HPolytope {
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
    if !t_cap_one {
        // sum t <= N (t_m <= 1 comes from bounds anyway; widen bounds)
        let mut row = vec![Rat::zero(); nv];
        for m in 0..m_count {
            row[m_count * n + m] = Rat::one();
        }
        poly.ineq.push((row, Rat::new(n.into(), 1.into())));
    }
    poly
}

fn image_count(n: usize, m_count: usize, n_z: usize, t_cap_one: bool) -> (usize, usize) {
    let poly = lift(n, m_count, t_cap_one);
    let verts = dd_enumerate(&poly).unwrap();
    let mut points: BTreeSet<Vec<Rat>> = BTreeSet::new();
    let n_dec = n_z.pow(m_count as u32);
    for v in &verts {
        let d: Rat = (0..m_count).map(|m| v[m_count * n + m].clone()).sum();
        for code in 0..n_dec {
            let mut g = vec![0usize; m_count];
            let mut c = code;
            for slot in g.iter_mut() {
                *slot = c % n_z;
                c /= n_z;
            }
            // p(z|x) = sum_{m: g(m)=z} e(m|x)
            let mut p = vec![Rat::zero(); n_z * n];
            for m in 0..m_count {
                for x in 0..n {
                    p[g[m] * n + x] += v[m * n + x].clone();
                }
            }
            p.push(d.clone());
            points.insert(p);
        }
    }
    (verts.len(), points.len())
}

fn main() {
    for (nz, label) in [(3usize, "(3,1,3)"), (4, "(3,1,4)")] {
        for m_count in [3usize, 4] {
            if m_count > nz { continue; }
            for cap in [true, false] {
                let t0 = Instant::now();
                let (nv, ni) = image_count(3, m_count, nz, cap);
                println!(
                    "{label} M={m_count} t_cap_one={cap}: lift vertices {nv}, image points {ni}  ({:.1?})",
                    t0.elapsed()
                );
            }
        }
    }
}

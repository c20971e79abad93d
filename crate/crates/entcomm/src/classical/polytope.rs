//! Exact vertex enumeration of rational H-polytopes by the double
//! description method. Equalities are eliminated first; the inequality
//! system is then processed incrementally starting from a bounding box.
//! All arithmetic is exact (big rationals for coordinates, integer
//! fraction-free elimination for rank tests), so vertex counts are exact.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::HashMap;

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, thiserror::Error)]
pub enum PolytopeError {
    #[error("equality system is inconsistent")]
    InconsistentEqualities,
    #[error("problem too large: {0}")]
    TooLarge(String),
}

/// a . x (<= | =) b with rational data.
#[derive(Debug, Clone)]
pub struct HPolytope {
    pub n: usize,
    pub eq: Vec<(Vec<Rat>, Rat)>,
    pub ineq: Vec<(Vec<Rat>, Rat)>,
    /// a box [lo, hi] per variable that is known to contain the polytope
    pub bounds: Vec<(Rat, Rat)>,
}

/// A constraint in the reduced (free-variable) space, kept both as exact
/// rationals and as an integer-scaled row for fast rank tests.
struct Row {
    a: Vec<Rat>,
    b: Rat,
    ai: Vec<i128>,
}

impl Row {
    fn new(a: Vec<Rat>, b: Rat) -> Self {
        // scale to integers for the rank tests
        let mut lcm = BigInt::one();
        for c in &a {
            lcm = num_integer::lcm(lcm, c.denom().clone());
        }
        let ai: Vec<i128> = a
            .iter()
            .map(|c| {
                let v = c.numer() * (&lcm / c.denom());
                int_to_i128(&v)
            })
            .collect();
        Self { a, b, ai }
    }
}

fn int_to_i128(v: &BigInt) -> i128 {
    use num_traits::ToPrimitive;
    v.to_i128().expect("constraint coefficients fit i128")
}

struct Vertex {
    coords: Vec<Rat>,
    /// bit i set <=> constraint i is tight
    active: Vec<u64>,
}

fn bitset_and_count(a: &[u64], b: &[u64]) -> usize {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones() as usize).sum()
}

/// Enumerates all vertices, returned in the original coordinates.
pub fn dd_enumerate(poly: &HPolytope) -> Result<Vec<Vec<Rat>>, PolytopeError> {
    let n = poly.n;
    // ---- eliminate equalities -------------------------------------------
    // Gaussian elimination on [A | b]; pivot variables become affine
    // functions of the free ones.
    let mut rows: Vec<(Vec<Rat>, Rat)> = poly.eq.clone();
    let mut pivot_of_row: Vec<usize> = Vec::new();
    let mut is_pivot = vec![false; n];
    let mut r = 0usize;
    for col in 0..n {
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i].0[col].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let p = rows[r].0[col].clone();
        for c in rows[r].0.iter_mut() {
            *c /= p.clone();
        }
        rows[r].1 /= p.clone();
        for i in 0..rows.len() {
            if i != r && !rows[i].0[col].is_zero() {
                let f = rows[i].0[col].clone();
                for c in 0..n {
                    let sub = &f * &rows[r].0[c];
                    rows[i].0[c] -= sub;
                }
                let sub = &f * &rows[r].1;
                rows[i].1 -= sub;
            }
        }
        is_pivot[col] = true;
        pivot_of_row.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    for i in r..rows.len() {
        if !rows[i].1.is_zero() {
            return Err(PolytopeError::InconsistentEqualities);
        }
    }
    rows.truncate(r);
    let free: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
    let k = free.len();
    if k > 20 {
        return Err(PolytopeError::TooLarge(format!("{k} free variables")));
    }
    // x_pivot(row i) = rows[i].1 - sum_j rows[i].0[free_j] * y_j
    let express = |y: &[Rat]| -> Vec<Rat> {
        let mut x = vec![Rat::zero(); n];
        for (j, &fc) in free.iter().enumerate() {
            x[fc] = y[j].clone();
        }
        for (i, &pc) in pivot_of_row.iter().enumerate() {
            let mut v = rows[i].1.clone();
            for (j, &fc) in free.iter().enumerate() {
                v -= &rows[i].0[fc] * &y[j];
            }
            x[pc] = v;
        }
        x
    };

    // ---- transform inequalities into the free space ----------------------
    // a . x <= b  with  x_pivot substituted
    let mut constraints: Vec<Row> = Vec::new();
    // box facets on the free variables come first so every corner starts
    // with a full active set
    for (j, &fc) in free.iter().enumerate() {
        let (lo, hi) = poly.bounds[fc].clone();
        let mut a = vec![Rat::zero(); k];
        a[j] = -Rat::one();
        constraints.push(Row::new(a, -lo));
        let mut a = vec![Rat::zero(); k];
        a[j] = Rat::one();
        constraints.push(Row::new(a, hi));
    }
    let n_box = constraints.len();
    // pivot-variable box bounds become ordinary inequalities
    let mut pending: Vec<(Vec<Rat>, Rat)> = Vec::new();
    for (i, &pc) in pivot_of_row.iter().enumerate() {
        let (lo, hi) = poly.bounds[pc].clone();
        // x_pc = c0 - sum g_j y_j ; lo <= x_pc <= hi
        let c0 = rows[i].1.clone();
        let g: Vec<Rat> = free.iter().map(|&fc| rows[i].0[fc].clone()).collect();
        // -x <= -lo : -c0 + sum g y <= -lo
        pending.push((g.clone(), &c0 - &lo));
        pending.push((g.iter().map(|v| -v.clone()).collect(), &hi - &c0));
    }
    for (a, b) in &poly.ineq {
        let mut ay = vec![Rat::zero(); k];
        let mut rhs = b.clone();
        for (j, &fc) in free.iter().enumerate() {
            ay[j] = a[fc].clone();
        }
        for (i, &pc) in pivot_of_row.iter().enumerate() {
            if !a[pc].is_zero() {
                // a_pc * (c0 - sum g y)
                rhs -= &a[pc] * &rows[i].1;
                for (j, &fc) in free.iter().enumerate() {
                    let add = &a[pc] * &rows[i].0[fc];
                    ay[j] -= add;
                }
            }
        }
        pending.push((ay, rhs));
    }
    for (a, b) in pending {
        if a.iter().all(|c| c.is_zero()) {
            if b < Rat::zero() {
                return Ok(Vec::new());
            }
            continue;
        }
        constraints.push(Row::new(a, b));
    }
    let m = constraints.len();
    let words = m.div_ceil(64);

    // ---- initial box corners ---------------------------------------------
    let mut verts: Vec<Vertex> = Vec::with_capacity(1 << k);
    for corner in 0u64..(1 << k) {
        let mut y = Vec::with_capacity(k);
        let mut active = vec![0u64; words];
        for (j, &fc) in free.iter().enumerate() {
            let (lo, hi) = poly.bounds[fc].clone();
            let at_hi = (corner >> j) & 1 == 1;
            y.push(if at_hi { hi } else { lo });
            let ci = 2 * j + usize::from(at_hi);
            active[ci / 64] |= 1 << (ci % 64);
        }
        verts.push(Vertex { coords: y, active });
    }

    // ---- incremental constraint insertion ---------------------------------
    for ci in n_box..m {
        let row = &constraints[ci];
        let slack = |v: &Vertex| -> Rat {
            let mut s = row.b.clone();
            for (a, y) in row.a.iter().zip(&v.coords) {
                if !a.is_zero() {
                    s -= a * y;
                }
            }
            s
        };
        let slacks: Vec<Rat> = verts.iter().map(slack).collect();
        let any_negative = slacks.iter().any(|s| s.is_negative());
        if !any_negative {
            for (v, s) in verts.iter_mut().zip(&slacks) {
                if s.is_zero() {
                    v.active[ci / 64] |= 1 << (ci % 64);
                }
            }
            continue;
        }
        let mut inside: Vec<usize> = Vec::new();
        let mut outside: Vec<usize> = Vec::new();
        for (i, s) in slacks.iter().enumerate() {
            if s.is_positive() {
                inside.push(i);
            } else if s.is_negative() {
                outside.push(i);
            }
        }
        let mut fresh: Vec<Vertex> = Vec::new();
        let mut seen: HashMap<Vec<Rat>, ()> = HashMap::new();
        for &iu in &inside {
            for &iv in &outside {
                let common = bitset_and_count(&verts[iu].active, &verts[iv].active);
                if common < k - 1 {
                    continue;
                }
                if !adjacent(&constraints, &verts[iu], &verts[iv], k) {
                    continue;
                }
                // w = u + t (v - u), t = s_u / (s_u - s_v)
                let t = &slacks[iu] / (&slacks[iu] - &slacks[iv]);
                let coords: Vec<Rat> = verts[iu]
                    .coords
                    .iter()
                    .zip(&verts[iv].coords)
                    .map(|(u, v)| u + &t * &(v - u))
                    .collect();
                if seen.contains_key(&coords) {
                    continue;
                }
                seen.insert(coords.clone(), ());
                // exact active set against all constraints processed so far
                let mut active = vec![0u64; words];
                for (cj, c) in constraints.iter().enumerate().take(ci + 1) {
                    let mut s = c.b.clone();
                    for (a, y) in c.a.iter().zip(&coords) {
                        if !a.is_zero() {
                            s -= a * y;
                        }
                    }
                    if s.is_zero() {
                        active[cj / 64] |= 1 << (cj % 64);
                    }
                }
                fresh.push(Vertex { coords, active });
            }
        }
        let mut next: Vec<Vertex> = Vec::with_capacity(inside.len() + fresh.len());
        for (i, v) in verts.into_iter().enumerate() {
            if !slacks[i].is_negative() {
                let mut v = v;
                if slacks[i].is_zero() {
                    v.active[ci / 64] |= 1 << (ci % 64);
                }
                next.push(v);
            }
        }
        next.extend(fresh);
        verts = next;
    }

    Ok(verts.iter().map(|v| express(&v.coords)).collect())
}

/// Two generators are adjacent iff their common tight constraints have rank
/// k - 1 (the shared face is an edge).
fn adjacent(constraints: &[Row], u: &Vertex, v: &Vertex, k: usize) -> bool {
    let mut rows: Vec<Vec<i128>> = Vec::new();
    for w in 0..u.active.len() {
        let mut bits = u.active[w] & v.active[w];
        while bits != 0 {
            let b = bits.trailing_zeros() as usize;
            rows.push(constraints[w * 64 + b].ai.clone());
            bits &= bits - 1;
        }
    }
    integer_rank(&mut rows, k) == k - 1
}

/// Rank by fraction-free (Bareiss) elimination over i128.
pub(crate) fn integer_rank(rows: &mut [Vec<i128>], n_cols: usize) -> usize {
    let mut rank = 0usize;
    let mut prev = 1i128;
    for col in 0..n_cols {
        let Some(pr) = (rank..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(rank, pr);
        for i in (rank + 1)..rows.len() {
            for c in (col + 1)..n_cols {
                rows[i][c] = (rows[rank][col] * rows[i][c] - rows[i][col] * rows[rank][c]) / prev;
            }
            rows[i][col] = 0;
        }
        prev = rows[rank][col];
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_box(n: usize) -> HPolytope {
        HPolytope {
            n,
            eq: vec![],
            ineq: vec![],
            bounds: vec![(Rat::zero(), Rat::one()); n],
        }
    }

    #[test]
    fn cube_has_eight_vertices() {
        let p = unit_box(3);
        let v = dd_enumerate(&p).unwrap();
        assert_eq!(v.len(), 8);
    }

    #[test]
    fn simplex_by_cutting_corner() {
        // x + y + z <= 1 inside the unit cube: 7 vertices
        // (cube corner (1,1,1) and friends cut away; new triangle face)
        let mut p = unit_box(3);
        p.ineq.push((vec![Rat::one(), Rat::one(), Rat::one()], Rat::one()));
        let mut v = dd_enumerate(&p).unwrap();
        v.sort();
        v.dedup();
        // vertices: origin, e1, e2, e3 -- plus nothing else on the cut:
        // the plane meets the cube exactly in conv{e1,e2,e3}
        assert_eq!(v.len(), 4, "{v:?}");
    }

    #[test]
    fn equality_reduces_dimension() {
        // unit square with x = y: a segment with two endpoints
        let mut p = unit_box(2);
        p.eq.push((vec![Rat::one(), -Rat::one()], Rat::zero()));
        let v = dd_enumerate(&p).unwrap();
        assert_eq!(v.len(), 2);
        for vert in &v {
            assert_eq!(vert[0], vert[1]);
        }
    }

    #[test]
    fn octahedron_cross_sections() {
        // |x| + |y| <= 1 in [-1,1]^2: the four diamond corners
        let mut p = HPolytope {
            n: 2,
            eq: vec![],
            ineq: vec![],
            bounds: vec![(rat(-1, 1), rat(1, 1)); 2],
        };
        for sx in [-1i64, 1] {
            for sy in [-1i64, 1] {
                p.ineq.push((vec![rat(sx, 1), rat(sy, 1)], Rat::one()));
            }
        }
        let v = dd_enumerate(&p).unwrap();
        assert_eq!(v.len(), 4);
    }

    #[test]
    fn infeasible_equalities_detected() {
        let mut p = unit_box(2);
        p.eq.push((vec![Rat::one(), Rat::zero()], rat(5, 1)));
        // x = 5 outside the box: no vertices (pivot bound empties it)
        let v = dd_enumerate(&p).unwrap();
        assert!(v.is_empty());
    }

    #[test]
    fn integer_rank_basics() {
        let mut rows = vec![vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 0]];
        assert_eq!(integer_rank(&mut rows, 3), 2);
        let mut rows = vec![vec![2, 1, 3], vec![4, 2, 6]];
        assert_eq!(integer_rank(&mut rows, 3), 1);
    }
}

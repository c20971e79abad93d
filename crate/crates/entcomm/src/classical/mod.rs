//! Classical strategies with shared randomness: encoding distinguishability,
//! the capped success optimization, correlation-polytope vertex enumeration
//! with the distinguishability as an explicit coordinate, and facet checks.

pub mod lp;
pub mod polytope;

use crate::tasks::Task;
use num_traits::{One, ToPrimitive, Zero};
use polytope::{dd_enumerate, integer_rank, rat, HPolytope, Rat};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ClassicalError {
    #[error("encoding rows must be stochastic (row {0} sums to {1})")]
    NotStochastic(usize, f64),
    #[error("distinguishability cap {cap} below the guessing floor {floor}")]
    InfeasibleCap { cap: f64, floor: f64 },
    #[error("scenario too large: {0}")]
    TooLarge(String),
    #[error("graph has {0} vertices; exact solver accepts at most 24")]
    GraphTooLarge(usize),
    #[error("bad graph edge ({0}, {1})")]
    BadEdge(usize, usize),
    #[error(transparent)]
    Lp(#[from] lp::LpError),
    #[error(transparent)]
    Polytope(#[from] polytope::PolytopeError),
}

/// Stochastic encoding p_e(m|x): for every input x a distribution over
/// messages.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Encoding {
    pub n_inputs: usize,
    pub n_messages: usize,
    /// p[x][m]
    pub p: Vec<Vec<f64>>,
}

impl Encoding {
    pub fn new(p: Vec<Vec<f64>>) -> Result<Self, ClassicalError> {
        let n_inputs = p.len();
        let n_messages = p.first().map_or(0, |r| r.len());
        for (x, row) in p.iter().enumerate() {
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > 1e-12 || row.iter().any(|&v| !(-1e-15..=1.0 + 1e-12).contains(&v)) {
                return Err(ClassicalError::NotStochastic(x, sum));
            }
        }
        Ok(Self { n_inputs, n_messages, p })
    }

    /// Deterministic encoding m = f(x).
    pub fn deterministic(n_inputs: usize, n_messages: usize, f: impl Fn(usize) -> usize) -> Self {
        let p = (0..n_inputs)
            .map(|x| {
                let mut row = vec![0.0; n_messages];
                row[f(x)] = 1.0;
                row
            })
            .collect();
        Self { n_inputs, n_messages, p }
    }
}

/// Stochastic decoding p_d(z|y,m).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Decoding {
    pub n_messages: usize,
    pub n_inputs_y: usize,
    pub n_outputs: usize,
    /// p[y][m][z]
    pub p: Vec<Vec<Vec<f64>>>,
}

/// The classical distinguishability of an encoding:
/// sum_m max_x p_x p_e(m|x). Shared randomness absorbed into the message
/// leaves this expression unchanged.
pub fn encoding_distinguishability(e: &Encoding, priors: &[f64]) -> f64 {
    assert_eq!(priors.len(), e.n_inputs);
    (0..e.n_messages)
        .map(|m| {
            (0..e.n_inputs)
                .map(|x| priors[x] * e.p[x][m])
                .fold(0.0, f64::max)
        })
        .sum()
}

/// The shift-encoding construction: with messages m' = x (+)_N (lambda - 1)
/// and uniform shared randomness, the message alone reveals nothing
/// (marginal distinguishability 1/N) while Bob, who holds lambda, decodes x
/// perfectly (joint distinguishability 1).
pub fn shift_encoding_demo(n: usize) -> (f64, f64) {
    assert!(n >= 2);
    let ni = n as i64;
    // exact rational evaluation of sum_m max_x p_x p_e(m|x), then one
    // correctly-rounded conversion
    let prior = rat(1, ni);
    // marginal over lambda: p_e(m'|x) = 1/N for all m', x
    let marginal_d: Rat = (0..n).map(|_| &prior * rat(1, ni)).sum();
    // joint message (m', lambda): p_e((m', l)|x) = delta/N; every joint
    // message has exactly one compatible x
    let joint_d: Rat = (0..n * n).map(|_| &prior * rat(1, ni)).sum::<Rat>();
    (marginal_d.to_f64().unwrap(), joint_d.to_f64().unwrap())
}

/// Result of the capped classical optimization.
#[derive(Debug, Clone)]
pub struct ClassicalOptimum {
    pub value: f64,
    pub encoding: Encoding,
    /// true when the exact decomposition ran; false marks the multistart
    /// lower bound
    pub certified: bool,
}

/// Maximizes S = sum_{y,m} max_z sum_x c(x,y,z) p_e(m|x) over encodings with
/// sum_m max_x p_x p_e(m|x) <= d_cap.
///
/// The max over z per (y, m) cell makes the objective convex piecewise
/// linear; enumerating the z-selection patterns turns the problem into
/// Z^(Y*M) exact linear programs over the lifted cap polytope, which is a
/// certified global optimum. Oversized pattern spaces fall back to a
/// multistart heuristic with `certified = false`.
pub fn classical_optimum(
    task: &Task,
    d_cap: f64,
    n_messages: usize,
) -> Result<(f64, Encoding), ClassicalError> {
    classical_optimum_full(task, d_cap, n_messages).map(|o| (o.value, o.encoding))
}

pub fn classical_optimum_full(
    task: &Task,
    d_cap: f64,
    n_messages: usize,
) -> Result<ClassicalOptimum, ClassicalError> {
    assert!(n_messages >= 1);
    let floor = task.guessing_floor();
    if d_cap < floor - 1e-12 {
        return Err(ClassicalError::InfeasibleCap { cap: d_cap, floor });
    }
    let n = task.n_x;
    let cells = task.n_y * n_messages;
    let patterns = (task.n_z as f64).powi(cells as i32);
    if patterns <= 300_000.0 {
        let mut best: Option<(f64, Vec<f64>)> = None;
        let mut pattern = vec![0usize; cells];
        loop {
            let sol = pattern_lp(task, d_cap, n_messages, &pattern)?;
            if let Some(s) = sol {
                if best.as_ref().map_or(true, |b| s.0 > b.0) {
                    best = Some(s);
                }
            }
            // odometer over patterns
            let mut k = 0;
            loop {
                if k == cells {
                    let (value, flat) = best.expect("cap is feasible, some LP solved");
                    return Ok(ClassicalOptimum {
                        value,
                        encoding: encoding_from_flat(&flat, n, n_messages),
                        certified: true,
                    });
                }
                pattern[k] += 1;
                if pattern[k] < task.n_z {
                    break;
                }
                pattern[k] = 0;
                k += 1;
            }
        }
    }
    // multistart LP rounding: sample random fixed patterns
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
    let mut best: Option<(f64, Vec<f64>)> = None;
    for _ in 0..512 {
        let pattern: Vec<usize> = (0..cells).map(|_| rng.gen_range(0..task.n_z)).collect();
        if let Some(s) = pattern_lp(task, d_cap, n_messages, &pattern)? {
            if best.as_ref().map_or(true, |b| s.0 > b.0) {
                best = Some(s);
            }
        }
    }
    let (value, flat) = best.ok_or(ClassicalError::InfeasibleCap { cap: d_cap, floor })?;
    Ok(ClassicalOptimum {
        value,
        encoding: encoding_from_flat(&flat, n, n_messages),
        certified: false,
    })
}

/// LP for one fixed z-selection pattern. Variables: e[m][x] then t[m].
fn pattern_lp(
    task: &Task,
    d_cap: f64,
    n_messages: usize,
    pattern: &[usize],
) -> Result<Option<(f64, Vec<f64>)>, ClassicalError> {
    let n = task.n_x;
    let nv = n_messages * n + n_messages;
    let mut objective = vec![0.0; nv];
    for y in 0..task.n_y {
        for m in 0..n_messages {
            let z = pattern[y * n_messages + m];
            for x in 0..n {
                objective[m * n + x] += task.coefficient(x, y, z);
            }
        }
    }
    let mut eq = Vec::with_capacity(n);
    for x in 0..n {
        let mut row = vec![0.0; nv];
        for m in 0..n_messages {
            row[m * n + x] = 1.0;
        }
        eq.push((row, 1.0));
    }
    let mut ub = Vec::new();
    for m in 0..n_messages {
        for x in 0..n {
            let mut row = vec![0.0; nv];
            row[m * n + x] = task.priors[x];
            row[n_messages * n + m] = -1.0;
            ub.push((row, 0.0));
        }
    }
    let mut cap_row = vec![0.0; nv];
    for m in 0..n_messages {
        cap_row[n_messages * n + m] = 1.0;
    }
    ub.push((cap_row, d_cap));
    match lp::solve(&lp::LinearProgram { n_vars: nv, objective, eq, ub }) {
        Ok(s) => Ok(Some((s.value, s.x))),
        Err(lp::LpError::Infeasible) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

fn encoding_from_flat(flat: &[f64], n: usize, n_messages: usize) -> Encoding {
    let mut p = vec![vec![0.0; n_messages]; n];
    for m in 0..n_messages {
        for x in 0..n {
            p[x][m] = flat[m * n + x].clamp(0.0, 1.0);
        }
    }
    // repair roundoff so rows are exactly stochastic
    for row in p.iter_mut() {
        let sum: f64 = row.iter().sum();
        for v in row.iter_mut() {
            *v /= sum;
        }
    }
    Encoding::new(p).expect("repaired rows are stochastic")
}

/// How the distinguishability coordinate is handled during enumeration.
#[derive(Debug, Clone, Copy)]
pub enum DParam {
    /// D is a free coordinate of the lifted polytope
    Symbolic,
    /// D pinned to the given rational value (numerator, denominator)
    Fixed(i64, i64),
}

/// One enumerated vertex: the table p(z|x) and the distinguishability
/// coordinate, both exact.
#[derive(Debug, Clone)]
pub struct VertexPoint {
    /// p[z][x]
    pub p: Vec<Vec<Rat>>,
    pub d: Rat,
}

impl VertexPoint {
    pub fn to_f64_row(&self) -> Vec<f64> {
        let mut row: Vec<f64> = self
            .p
            .iter()
            .flat_map(|zrow| zrow.iter().map(|v| v.to_f64().unwrap()))
            .collect();
        row.push(self.d.to_f64().unwrap());
        row
    }
}

/// Vertices of the achievable set {(p(z|x), D)}: stochastic tables p with
/// the lifted constraint sum_z max_x p(z|x) <= N D <= N. Uniform priors; Bob
/// has no input. Exact rational double description, so counts are exact.
pub fn enumerate_vertices(
    n_x: usize,
    n_z: usize,
    d_param: DParam,
) -> Result<Vec<VertexPoint>, ClassicalError> {
    let selections = (n_x as f64).powi(n_z as i32);
    if selections > 1e6 || n_z as f64 * (n_x as f64).ln() > 1e6 {
        return Err(ClassicalError::TooLarge(format!(
            "{n_x}^{n_z} selection constraints"
        )));
    }
    // variables: p(z|x) at index z * n_x + x, then D
    let nv = n_x * n_z + 1;
    let d_idx = nv - 1;
    let mut poly = HPolytope {
        n: nv,
        eq: Vec::new(),
        ineq: Vec::new(),
        bounds: vec![(Rat::zero(), Rat::one()); nv],
    };
    for x in 0..n_x {
        let mut row = vec![Rat::zero(); nv];
        for z in 0..n_z {
            row[z * n_x + x] = Rat::one();
        }
        poly.eq.push((row, Rat::one()));
    }
    match d_param {
        DParam::Symbolic => {}
        DParam::Fixed(num, den) => {
            let mut row = vec![Rat::zero(); nv];
            row[d_idx] = Rat::one();
            poly.eq.push((row, rat(num, den)));
        }
    }
    // selection inequalities: for s: [n_z] -> [n_x], sum_z p(z|s(z)) <= N D
    let mut sel = vec![0usize; n_z];
    loop {
        let mut row = vec![Rat::zero(); nv];
        for (z, &x) in sel.iter().enumerate() {
            row[z * n_x + x] = Rat::one();
        }
        row[d_idx] = -rat(n_x as i64, 1);
        poly.ineq.push((row, Rat::zero()));
        let mut k = 0;
        loop {
            if k == n_z {
                let verts = dd_enumerate(&poly)?;
                let mut out: Vec<VertexPoint> = verts
                    .into_iter()
                    .map(|v| VertexPoint {
                        p: (0..n_z)
                            .map(|z| (0..n_x).map(|x| v[z * n_x + x].clone()).collect())
                            .collect(),
                        d: v[d_idx].clone(),
                    })
                    .collect();
                out.sort_by(|a, b| vertex_key(a).cmp(&vertex_key(b)));
                return Ok(out);
            }
            sel[k] += 1;
            if sel[k] < n_x {
                break;
            }
            sel[k] = 0;
            k += 1;
        }
    }
}

fn vertex_key(v: &VertexPoint) -> Vec<(num_bigint::BigInt, num_bigint::BigInt)> {
    let mut key: Vec<(num_bigint::BigInt, num_bigint::BigInt)> = v
        .p
        .iter()
        .flatten()
        .map(|r| (r.numer().clone(), r.denom().clone()))
        .collect();
    key.push((v.d.numer().clone(), v.d.denom().clone()));
    key
}

/// Linear inequality sum coeff(z,x) p(z|x) <= rhs_slope * D on the lifted
/// polytope.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FacetInequality {
    /// coeffs[z][x], integers
    pub coeffs: Vec<Vec<i64>>,
    /// multiplier of the distinguishability coordinate on the right side
    pub rhs_slope: i64,
    /// constant part of the right side
    pub rhs_const: i64,
}

impl FacetInequality {
    /// Builds from 1-indexed (z, x) cells with unit coefficients.
    pub fn from_cells(n_z: usize, n_x: usize, cells: &[(usize, usize)], rhs_slope: i64) -> Self {
        let mut coeffs = vec![vec![0i64; n_x]; n_z];
        for &(z, x) in cells {
            coeffs[z - 1][x - 1] += 1;
        }
        Self { coeffs, rhs_slope, rhs_const: 0 }
    }

    fn lhs(&self, v: &VertexPoint) -> Rat {
        let mut s = Rat::zero();
        for (z, row) in self.coeffs.iter().enumerate() {
            for (x, &c) in row.iter().enumerate() {
                if c != 0 {
                    s += rat(c, 1) * &v.p[z][x];
                }
            }
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FacetCheck {
    pub valid: bool,
    pub tight_count: usize,
    pub is_facet: bool,
}

/// Checks an inequality against every enumerated vertex: valid iff all
/// satisfy it, and a facet iff the tight vertices affinely span a space of
/// dimension one less than the polytope.
pub fn verify_facet(f: &FacetInequality, vertices: &[VertexPoint]) -> FacetCheck {
    let mut valid = true;
    let mut tight: Vec<&VertexPoint> = Vec::new();
    for v in vertices {
        let lhs = f.lhs(v);
        let rhs = rat(f.rhs_slope, 1) * &v.d + rat(f.rhs_const, 1);
        if lhs > rhs {
            valid = false;
        } else if lhs == rhs {
            tight.push(v);
        }
    }
    // affine span: rank of (v - v0) over the tight set
    let dim = ambient_dim(vertices);
    let is_facet = valid
        && !tight.is_empty()
        && affine_rank(&tight) == dim.saturating_sub(1);
    FacetCheck { valid, tight_count: tight.len(), is_facet }
}

fn ambient_dim(vertices: &[VertexPoint]) -> usize {
    // the polytope's own dimension: rank of (v - v0) over all vertices
    let all: Vec<&VertexPoint> = vertices.iter().collect();
    affine_rank(&all)
}

fn affine_rank(pts: &[&VertexPoint]) -> usize {
    if pts.len() < 2 {
        return 0;
    }
    let flat = |v: &VertexPoint| -> Vec<Rat> {
        let mut row: Vec<Rat> = v.p.iter().flatten().cloned().collect();
        row.push(v.d.clone());
        row
    };
    let base = flat(pts[0]);
    let n_cols = base.len();
    // scale differences to integers for the exact rank
    let mut rows: Vec<Vec<i128>> = Vec::with_capacity(pts.len() - 1);
    for v in &pts[1..] {
        let diff: Vec<Rat> = flat(v).iter().zip(&base).map(|(a, b)| a - b).collect();
        let mut lcm = num_bigint::BigInt::one();
        for c in &diff {
            lcm = num_integer::lcm(lcm, c.denom().clone());
        }
        rows.push(
            diff.iter()
                .map(|c| {
                    let v = c.numer() * (&lcm / c.denom());
                    v.to_i128().expect("difference fits i128")
                })
                .collect(),
        );
    }
    integer_rank(&mut rows, n_cols)
}

/// LHS value reachable classically at distinguishability d:
/// rhs_slope * d + rhs_const.
pub fn classical_facet_value(f: &FacetInequality, d: f64) -> f64 {
    f.rhs_slope as f64 * d + f.rhs_const as f64
}

/// Simple undirected graph. Construction is 1-indexed to match the on-disk
/// edge-list format; vertices are 0-indexed internally.
#[derive(Debug, Clone)]
pub struct Graph {
    n: usize,
    adj: Vec<u32>,
}

impl Graph {
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, ClassicalError> {
        if n > 24 {
            return Err(ClassicalError::GraphTooLarge(n));
        }
        let mut adj = vec![0u32; n];
        for &(u, v) in edges {
            if u == 0 || v == 0 || u > n || v > n || u == v {
                return Err(ClassicalError::BadEdge(u, v));
            }
            adj[u - 1] |= 1 << (v - 1);
            adj[v - 1] |= 1 << (u - 1);
        }
        Ok(Self { n, adj })
    }

    /// Parses the plain-text format: one "u v" edge per line, 1-indexed;
    /// blank lines and '#' comments ignored.
    pub fn from_text(text: &str) -> Result<Self, ClassicalError> {
        let mut edges = Vec::new();
        let mut max_v = 0usize;
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut it = line.split_whitespace();
            let u: usize = it.next().and_then(|t| t.parse().ok()).ok_or(ClassicalError::BadEdge(0, 0))?;
            let v: usize = it.next().and_then(|t| t.parse().ok()).ok_or(ClassicalError::BadEdge(0, 0))?;
            max_v = max_v.max(u).max(v);
            edges.push((u, v));
        }
        Self::from_edges(max_v, &edges)
    }

    pub fn cycle(n: usize) -> Self {
        let edges: Vec<(usize, usize)> = (1..=n).map(|u| (u, u % n + 1)).collect();
        Self::from_edges(n, &edges).expect("cycle edges are valid")
    }

    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::new();
        for u in 1..=n {
            for v in (u + 1)..=n {
                edges.push((u, v));
            }
        }
        Self::from_edges(n, &edges).expect("complete-graph edges are valid")
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&u| self.adj[v] & (1 << u) != 0)
    }
}

/// Exact independence number by branch and bound on vertex bitmasks.
pub fn independence_number(g: &Graph) -> usize {
    fn recurse(g: &Graph, candidates: u32, current: usize, best: &mut usize) {
        if current + candidates.count_ones() as usize <= *best {
            return;
        }
        if candidates == 0 {
            *best = (*best).max(current);
            return;
        }
        // branch on a candidate of maximum degree within the candidate set
        let v = (0..g.n)
            .filter(|&v| candidates & (1 << v) != 0)
            .max_by_key(|&v| (g.adj[v] & candidates).count_ones())
            .unwrap();
        // include v
        recurse(g, candidates & !(g.adj[v] | (1 << v)), current + 1, best);
        // exclude v
        recurse(g, candidates & !(1 << v), current, best);
    }
    let mut best = 0;
    let full = if g.n == 32 { u32::MAX } else { (1u32 << g.n) - 1 };
    recurse(g, full, 0, &mut best);
    best
}

#[cfg(test)]
mod tests;

//! Generators for the concrete communication tasks studied in this crate,
//! their classical distinguishability bounds, and the hard-coded reference
//! protocols (random access codes and the tilted-game protocol).

use crate::classical::Graph;
use crate::protocols::{EaccProtocol, AliceDevice, QcProtocol};
use crate::qcore::{make_entangled, Povm, PureState};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// A communication game: coefficient tensor c(x,y,z) plus input priors p_x.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Task {
    pub n_x: usize,
    pub n_y: usize,
    pub n_z: usize,
    /// row-major over (x, y, z)
    pub coefficients: Vec<f64>,
    pub priors: Vec<f64>,
    pub family: String,
}

impl Task {
    pub fn new(
        n_x: usize,
        n_y: usize,
        n_z: usize,
        coefficients: Vec<f64>,
        priors: Vec<f64>,
        family: &str,
    ) -> Self {
        assert_eq!(coefficients.len(), n_x * n_y * n_z);
        assert_eq!(priors.len(), n_x);
        let psum: f64 = priors.iter().sum();
        assert!((psum - 1.0).abs() < 1e-12, "priors must sum to 1");
        assert!(coefficients.iter().all(|c| c.is_finite()));
        Self { n_x, n_y, n_z, coefficients, priors, family: family.into() }
    }

    pub fn coefficient(&self, x: usize, y: usize, z: usize) -> f64 {
        self.coefficients[(x * self.n_y + y) * self.n_z + z]
    }

    fn set_coefficient(&mut self, x: usize, y: usize, z: usize, v: f64) {
        self.coefficients[(x * self.n_y + y) * self.n_z + z] = v;
    }

    /// Guessing floor max_x p_x, the smallest achievable distinguishability.
    pub fn guessing_floor(&self) -> f64 {
        self.priors.iter().cloned().fold(0.0, f64::max)
    }
}

fn clip_bound(raw: f64, floor: f64) -> f64 {
    raw.clamp(floor, 1.0)
}

/// Random access code: Alice holds an n-dit string over [d], Bob wants the
/// y-th dit. Coefficients 1/(n d^n) on z = x_y.
pub fn rac_task(n: usize, d: usize) -> Task {
    assert!(n >= 1 && d >= 2);
    let n_x = d.pow(n as u32);
    let mut t = Task::new(
        n_x,
        n,
        d,
        vec![0.0; n_x * n * d],
        vec![1.0 / n_x as f64; n_x],
        &format!("rac({n},{d})"),
    );
    let w = 1.0 / (n as f64 * n_x as f64);
    for x in 0..n_x {
        for y in 0..n {
            let digit = digit_of(x, y, n, d);
            t.set_coefficient(x, y, digit, w);
        }
    }
    t
}

/// Digit y (0-indexed, most significant first) of x written in base d with n digits.
fn digit_of(x: usize, y: usize, n: usize, d: usize) -> usize {
    (x / d.pow((n - 1 - y) as u32)) % d
}

/// Classical distinguishability needed for success s in the (n,d)-RAC:
/// n s + 1 - n <= D_C, clipped to the guessing floor.
pub fn rac_bound(n: usize, d: usize, s: f64) -> f64 {
    let raw = n as f64 * s + 1.0 - n as f64;
    clip_bound(raw, 1.0 / d.pow(n as u32) as f64)
}

/// The standard qubit protocols for the (2,2)- and (3,2)-RAC: states on the
/// square (cube) of Bloch directions, Bob measuring Z/X (Z/X/Y).
pub fn rac_qc_protocol(n: usize) -> QcProtocol {
    assert!(n == 2 || n == 3, "qubit RAC protocols are built for n in {{2,3}}");
    let bits = |x: usize, k: usize| (x >> (n - 1 - k)) & 1;
    let sgn = |b: usize| if b == 0 { 1.0 } else { -1.0 };
    let states: Vec<_> = (0..1usize << n)
        .map(|x| {
            // Bloch vector with components (+-1)/sqrt(n) along the measured axes:
            // bit k controls axis k in the order z, x (, y).
            let norm = (n as f64).sqrt();
            let (bz, bx, by) = (
                sgn(bits(x, 0)) / norm,
                sgn(bits(x, 1)) / norm,
                if n == 3 { sgn(bits(x, 2)) / norm } else { 0.0 },
            );
            bloch_state(bx, by, bz).to_density()
        })
        .collect();
    let mut measurements = vec![z_povm(), x_povm()];
    if n == 3 {
        measurements.push(y_povm());
    }
    QcProtocol { states, measurements }
}

fn bloch_state(bx: f64, by: f64, bz: f64) -> PureState {
    let theta = bz.acos();
    let phi = by.atan2(bx);
    PureState::new(vec![
        Complex64::new((theta / 2.0).cos(), 0.0),
        Complex64::from_polar((theta / 2.0).sin(), phi),
    ])
    .expect("Bloch state is normalized")
}

fn z_povm() -> Povm {
    Povm::from_basis(&[PureState::basis(2, 0), PureState::basis(2, 1)]).unwrap()
}

fn x_povm() -> Povm {
    Povm::from_basis(&[
        PureState::real_qubit(std::f64::consts::FRAC_PI_4),
        PureState::real_qubit(3.0 * std::f64::consts::FRAC_PI_4),
    ])
    .unwrap()
}

fn y_povm() -> Povm {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let plus_i = PureState::new(vec![Complex64::new(r, 0.0), Complex64::new(0.0, r)]).unwrap();
    let minus_i = PureState::new(vec![Complex64::new(r, 0.0), Complex64::new(0.0, -r)]).unwrap();
    Povm::from_basis(&[plus_i, minus_i]).unwrap()
}

/// Graph equality task: promise x = y or x adjacent to y; output 1 for the
/// first case, 2 for the second. Coefficients 1/(sum_x N_x + N).
pub fn graph_task(g: &Graph) -> Task {
    let n = g.n_vertices();
    let total_degree: usize = (0..n).map(|v| g.degree(v)).sum();
    let w = 1.0 / (total_degree + n) as f64;
    let mut t = Task::new(
        n,
        n,
        2,
        vec![0.0; n * n * 2],
        vec![1.0 / n as f64; n],
        "graph-equality",
    );
    for y in 0..n {
        t.set_coefficient(y, y, 0, w);
        for x in g.neighbors(y) {
            t.set_coefficient(x, y, 1, w);
        }
    }
    t
}

/// Classical bound for the graph task via the independence number:
/// ((sum N_x + N)(s - 1) + N) / (N alpha(G)) <= D_C.
pub fn graph_bound(g: &Graph, s: f64) -> f64 {
    let n = g.n_vertices();
    let total_degree: usize = (0..n).map(|v| g.degree(v)).sum();
    let alpha = crate::classical::independence_number(g) as f64;
    let raw = ((total_degree + n) as f64 * (s - 1.0) + n as f64) / (n as f64 * alpha);
    clip_bound(raw, 1.0 / n as f64)
}

/// Pair distinguishability task: Bob gets an ordered pair (u, v), u < v, and
/// must output Alice's actual input.
pub fn pair_task(n: usize) -> Task {
    assert!(n >= 3);
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))
        .collect();
    let n_y = pairs.len();
    let w = 1.0 / (n * (n - 1)) as f64;
    let mut t = Task::new(
        n,
        n_y,
        n,
        vec![0.0; n * n_y * n],
        vec![1.0 / n as f64; n],
        &format!("pair({n})"),
    );
    for (y, &(u, v)) in pairs.iter().enumerate() {
        t.set_coefficient(u, y, u, w);
        t.set_coefficient(v, y, v, w);
    }
    t
}

/// Bob-input pairs of the pair task, in the same order as the task's y axis.
pub fn pair_inputs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|u| ((u + 1)..n).map(move |v| (u, v))).collect()
}

/// (N-1)(s - 1) + 1 <= D_C, clipped to [1/N, 1].
pub fn pair_bound(n: usize, s: f64) -> f64 {
    clip_bound((n as f64 - 1.0) * (s - 1.0) + 1.0, 1.0 / n as f64)
}

/// The five-cell game with classical bound S <= 2 + 3 D_C:
/// cells p(1|1,1), p(1|1,2), p(1|2,1), p(2|2,2), p(2|3,1).
pub fn chaturvedi_task() -> Task {
    let mut t = Task::new(3, 2, 2, vec![0.0; 12], vec![1.0 / 3.0; 3], "chaturvedi");
    for (x, y, z) in [(0, 0, 0), (0, 1, 0), (1, 0, 0), (1, 1, 1), (2, 0, 1)] {
        t.set_coefficient(x, y, z, 1.0);
    }
    t
}

/// D_C >= (s - 2)/3, clipped to [1/3, 1].
pub fn chaturvedi_bound(s: f64) -> f64 {
    clip_bound((s - 2.0) / 3.0, 1.0 / 3.0)
}

/// Parameters of the tilted game at a given state angle theta.
///
/// The tilt weight is alpha = 2 cos(2 theta) cos(mu) in magnitude, i.e.
/// 2/sqrt(1 + 2 tan^2(2 theta)): with this pairing the game's optimal
/// state is exactly |Psi(theta)> = cos(theta)|00> + sin(theta)|11> and
/// tan(mu) = sin(2 theta). The first-measurement marginals give
/// beta_00 = cos(mu) cos^2(theta) - cos(mu)/2 + 1/2, and the second
/// measurement has the same marginals (beta_01 = beta_00).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TiltedParams {
    pub theta: f64,
    pub alpha: f64,
    pub mu: f64,
    pub beta_00: f64,
    pub beta_10: f64,
    pub beta_01: f64,
    pub beta_11: f64,
}

impl TiltedParams {
    pub fn new(theta: f64) -> Self {
        assert!(theta > 0.0 && theta < std::f64::consts::FRAC_PI_2);
        let s2 = (2.0 * theta).sin();
        let c2 = (2.0 * theta).cos();
        let cos_mu = 1.0 / (1.0 + s2 * s2).sqrt();
        let mu = cos_mu.acos();
        let alpha = 2.0 * c2.abs() * cos_mu;
        let beta_00 = cos_mu * theta.cos().powi(2) - cos_mu / 2.0 + 0.5;
        Self {
            theta,
            alpha,
            mu,
            beta_00,
            beta_10: 1.0 - beta_00,
            beta_01: beta_00,
            beta_11: 1.0 - beta_00,
        }
    }

    fn beta(&self, a: usize, x: usize) -> f64 {
        match (a, x) {
            (0, 0) => self.beta_00,
            (1, 0) => self.beta_10,
            (0, 1) => self.beta_01,
            _ => self.beta_11,
        }
    }

    /// The game value attained by the ideal (Bell-consistent) strategy,
    /// sqrt(8 + 2 alpha^2).
    pub fn ideal_value(&self) -> f64 {
        (8.0 + 2.0 * self.alpha * self.alpha).sqrt()
    }

    /// The value the in-crate protocol simulation actually attains on
    /// |Psi(theta)> with a one-bit message: (2 + k) cos(mu) + 2 sin(2 theta)
    /// sin(mu), where k = alpha (2 beta_00 - 1). Equals `ideal_value` at
    /// theta = pi/4 and falls below it elsewhere, because steering on a
    /// non-maximally entangled state cannot reproduce both outcome branches
    /// exactly through a single classical bit.
    pub fn simulable_value(&self) -> f64 {
        let k = self.alpha * (2.0 * self.beta_00 - 1.0);
        let s2 = (2.0 * self.theta).sin();
        (2.0 + k) * self.mu.cos() + 2.0 * s2 * self.mu.sin()
    }
}

/// The tilted game: Alice's input is the pair (a, x), Bob has input y and
/// output b. Coefficients (-1)^(a+b+xy) beta_ax plus the alpha-weighted
/// marginal cells at (x, y) = (0, 0). Inputs are indexed x' = 2a + x with
/// uniform priors.
pub fn tilted_task(theta: f64) -> (Task, TiltedParams) {
    let p = TiltedParams::new(theta);
    let mut t = Task::new(4, 2, 2, vec![0.0; 16], vec![0.25; 4], "tilted");
    for a in 0..2usize {
        for x in 0..2usize {
            for y in 0..2usize {
                for b in 0..2usize {
                    let sign = if (a + b + x * y) % 2 == 0 { 1.0 } else { -1.0 };
                    let mut v = sign * p.beta(a, x);
                    if x == 0 && y == 0 {
                        let bsign = if b == 0 { 1.0 } else { -1.0 };
                        v += p.alpha * bsign * p.beta(a, 0);
                    }
                    t.set_coefficient(2 * a + x, y, b, v);
                }
            }
        }
    }
    (t, p)
}

/// The entanglement-assisted protocol for the tilted game on |Psi(theta)>:
/// Alice measures the +mu basis (x = 0) or the -mu basis (x = 1), with the
/// outcome ordering reversed when a = 1, and sends her outcome; Bob measures
/// Z (y = 0) or X (y = 1) and reverses his output on message '2'.
pub fn tilted_eacc_protocol(theta: f64) -> EaccProtocol {
    let p = TiltedParams::new(theta);
    let shared = make_entangled(theta, 2).to_density();
    let plus_mu = basis_povm(p.mu / 2.0);
    let minus_mu = basis_povm(-p.mu / 2.0);
    let alice = AliceDevice::Povms(vec![
        plus_mu.clone(),
        minus_mu.clone(),
        plus_mu.relabeled(&[1, 0]),
        minus_mu.relabeled(&[1, 0]),
    ]);
    let z = z_povm();
    let x = x_povm();
    EaccProtocol {
        shared,
        dims: (2, 2),
        alice,
        message_fn: vec![vec![0, 1]; 4],
        n_messages: 2,
        bob_povms: vec![
            vec![z.clone(), z.relabeled(&[1, 0])],
            vec![x.clone(), x.relabeled(&[1, 0])],
        ],
    }
}

fn basis_povm(half_angle: f64) -> Povm {
    Povm::from_basis(&[
        PureState::real_qubit(half_angle),
        PureState::real_qubit(half_angle + std::f64::consts::FRAC_PI_2),
    ])
    .unwrap()
}

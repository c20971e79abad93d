//! Alternating (see-saw) search for advantageous protocols. Each half-step
//! is an exact convex sub-solve: Bob's measurements come from the certified
//! discrimination solver, Alice's two-outcome updates are eigenvalue
//! positive-part steps. A distinguishability budget is enforced by sweeping
//! a penalty on the certified Luders upper bound of the branch ensembles and
//! accepting iterates by their exact branch-SDP value.

use crate::classical::FacetInequality;
use crate::discrimination::{solve_weighted, DiscriminationError};
use crate::protocols::{
    eacc_correlations, eacc_distinguishability_tol, qc_correlations, qc_distinguishability,
    AliceDevice, EaccProtocol, ProtocolError, QcProtocol,
};
use crate::qcore::{
    max_entangled, validate, ComplexMatrix, DensityState, Povm, PureState, Validatable,
};
use crate::tasks::Task;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("a task input has more than two relevant outputs per receiver input")]
    NotBinaryEffective,
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
    #[error(transparent)]
    Discrimination(#[from] DiscriminationError),
}

#[derive(Debug, Clone)]
pub struct SeesawConfig {
    pub dims: (usize, usize),
    pub restarts: usize,
    pub max_rounds: usize,
    pub rng_seed: u64,
    pub convergence_eps: f64,
}

impl Default for SeesawConfig {
    fn default() -> Self {
        Self {
            dims: (2, 2),
            restarts: 64,
            max_rounds: 60,
            rng_seed: 0,
            convergence_eps: 1e-9,
        }
    }
}

/// One restart's outcome.
#[derive(Debug, Clone)]
pub struct RestartTrace {
    pub restart: usize,
    pub achieved_s: f64,
    pub achieved_d: f64,
    /// objective values after every half-step of the winning penalty phase
    pub objective_trace: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct EaccSearchResult {
    pub protocol: EaccProtocol,
    pub achieved_s: f64,
    pub achieved_d: f64,
    /// achieved S divided by the classical value reachable at achieved D
    pub ratio: f64,
    pub trace: Vec<RestartTrace>,
}

/// See-saw over entanglement-assisted strategies for a Bob-input-free facet
/// game: Alice holds `n_x` two-outcome POVMs on her Bell-state half and
/// sends the outcome; Bob holds one `n_z`-outcome POVM per message.
pub fn seesaw_eacc(
    facet: &FacetInequality,
    cfg: &SeesawConfig,
    d_budget: Option<f64>,
) -> Result<EaccSearchResult, SearchError> {
    let n_z = facet.coeffs.len();
    let n_x = facet.coeffs[0].len();
    let d = cfg.dims.0;
    let priors = vec![1.0 / n_x as f64; n_x];
    let lambdas: &[f64] = if d_budget.is_some() {
        &[0.0, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0]
    } else {
        &[0.0]
    };
    let runs: Vec<(usize, RestartOutcome)> = (0..cfg.restarts)
        .into_par_iter()
        .map(|restart| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
            rng.set_stream(restart as u64 + 1);
            let out = run_restart(facet, cfg, d_budget, lambdas, n_x, n_z, d, &mut rng)
                .expect("sub-solves on random interior points converge");
            (restart, out)
        })
        .collect();
    // deterministic reduction: feasible runs first, then max S, then min D
    let budget = d_budget.unwrap_or(f64::INFINITY) + 1e-5;
    let mut best: Option<&(usize, RestartOutcome)> = None;
    for run in &runs {
        let feasible = run.1.achieved_d <= budget;
        let better = match best {
            None => true,
            Some(b) => {
                let b_feasible = b.1.achieved_d <= budget;
                match (feasible, b_feasible) {
                    (true, false) => true,
                    (false, true) => false,
                    _ => {
                        run.1.achieved_s > b.1.achieved_s + 1e-12
                            || ((run.1.achieved_s - b.1.achieved_s).abs() <= 1e-12
                                && run.1.achieved_d < b.1.achieved_d - 1e-12)
                    }
                }
            }
        };
        if better {
            best = Some(run);
        }
    }
    let (_, winner) = best.expect("at least one restart");
    let protocol = winner.protocol.clone();
    let trace = runs
        .iter()
        .map(|(r, o)| RestartTrace {
            restart: *r,
            achieved_s: o.achieved_s,
            achieved_d: o.achieved_d,
            objective_trace: o.objective_trace.clone(),
        })
        .collect();
    let classical_at_d = crate::classical::classical_facet_value(facet, winner.achieved_d);
    let _ = &priors;
    Ok(EaccSearchResult {
        achieved_s: winner.achieved_s,
        achieved_d: winner.achieved_d,
        ratio: winner.achieved_s / classical_at_d,
        protocol,
        trace,
    })
}

struct RestartOutcome {
    protocol: EaccProtocol,
    achieved_s: f64,
    achieved_d: f64,
    objective_trace: Vec<f64>,
}

#[allow(clippy::too_many_arguments)]
fn run_restart(
    facet: &FacetInequality,
    cfg: &SeesawConfig,
    d_budget: Option<f64>,
    _lambdas: &[f64],
    n_x: usize,
    n_z: usize,
    d: usize,
    rng: &mut ChaCha8Rng,
) -> Result<RestartOutcome, SearchError> {
    let mut effects: Vec<ComplexMatrix> = (0..n_x).map(|_| random_effect(rng, d)).collect();
    let mut bob: Vec<Vec<ComplexMatrix>> = vec![vec![ComplexMatrix::zeros(d, d); n_z]; 2];
    let mut objective_trace = Vec::new();

    // phase 1: unconstrained see-saw to convergence (exact half-steps)
    let mut last = f64::NEG_INFINITY;
    for _round in 0..cfg.max_rounds {
        let s_bob = bob_half_step(facet, &effects, &mut bob, n_z, d)?;
        objective_trace.push(s_bob);
        let s_alice = alice_half_step(facet, &mut effects, &bob, None, d, n_x)?;
        objective_trace.push(s_alice);
        if (s_alice - last).abs() < cfg.convergence_eps {
            break;
        }
        last = s_alice;
    }
    let evaluate = |effects: &[ComplexMatrix],
                    bob: &[Vec<ComplexMatrix>]|
     -> Result<(EaccProtocol, f64, f64), SearchError> {
        let protocol = protocol_from(effects, bob, d, n_x);
        let table = eacc_correlations(&protocol)?;
        let mut s = 0.0;
        for (z, row) in facet.coeffs.iter().enumerate() {
            for (x, &c) in row.iter().enumerate() {
                s += c as f64 * table.get(x, 0, z);
            }
        }
        let priors = vec![1.0 / n_x as f64; n_x];
        let d_exact = eacc_distinguishability_tol(&protocol, &priors, 1e-8)?;
        Ok((protocol, s, d_exact))
    };
    let (protocol, s, d_exact) = evaluate(&effects, &bob)?;
    let mut best = RestartOutcome {
        protocol,
        achieved_s: s,
        achieved_d: d_exact,
        objective_trace: objective_trace.clone(),
    };
    let Some(budget) = d_budget else {
        best.objective_trace = objective_trace;
        return Ok(best);
    };
    if d_exact <= budget + 1e-5 {
        best.objective_trace = objective_trace;
        return Ok(best);
    }

    // phase 2: continuation along the penalty path; keep the best iterate
    // whose exact branch-SDP value clears the budget
    let mut lambda = 0.05f64;
    let mut best_feasible: Option<RestartOutcome> = None;
    let mut last_d = d_exact;
    for _step in 0..24 {
        for _round in 0..6 {
            bob_half_step(facet, &effects, &mut bob, n_z, d)?;
            alice_half_step(facet, &mut effects, &bob, Some(lambda), d, n_x)?;
        }
        let (protocol, s, d_now) = evaluate(&effects, &bob)?;
        if d_now <= budget + 1e-5 {
            let better = best_feasible
                .as_ref()
                .map_or(true, |b| s > b.achieved_s);
            if better {
                best_feasible = Some(RestartOutcome {
                    protocol,
                    achieved_s: s,
                    achieved_d: d_now,
                    objective_trace: objective_trace.clone(),
                });
            }
        }
        // steer the penalty toward the budget boundary
        lambda *= if d_now > budget { 1.6 } else { 0.7 };
        lambda = lambda.clamp(1e-4, 1e3);
        last_d = d_now;
    }
    let _ = last_d;
    Ok(best_feasible.unwrap_or(best))
}

fn bob_half_step(
    facet: &FacetInequality,
    effects: &[ComplexMatrix],
    bob: &mut [Vec<ComplexMatrix>],
    n_z: usize,
    d: usize,
) -> Result<f64, SearchError> {
    let mut total = 0.0;
    for m in 0..2 {
        let mut score = vec![ComplexMatrix::zeros(d, d); n_z];
        for (z, row) in facet.coeffs.iter().enumerate() {
            for (x, &c) in row.iter().enumerate() {
                if c != 0 {
                    let omega = alice_effect(&effects[x], m).transpose().scale(0.5);
                    score[z] = score[z].add(&omega.scale(c as f64));
                }
            }
        }
        let (value, povm, _, _) = solve_weighted(&score, 1e-8)?;
        total += value;
        bob[m] = povm;
    }
    Ok(total)
}

fn alice_half_step(
    facet: &FacetInequality,
    effects: &mut [ComplexMatrix],
    bob: &[Vec<ComplexMatrix>],
    lambda: Option<f64>,
    d: usize,
    n_x: usize,
) -> Result<f64, SearchError> {
    // adversary for the penalized step: optimal discrimination of the
    // conditional-state branches at the current effects
    let adversary: Option<Vec<Vec<ComplexMatrix>>> = match lambda {
        Some(_) => {
            let mut qs = Vec::with_capacity(2);
            for m in 0..2 {
                let branch: Vec<ComplexMatrix> = (0..n_x)
                    .map(|x| {
                        let a = alice_effect(&effects[x], m);
                        a.matmul(&a).transpose().scale(0.5 / n_x as f64)
                    })
                    .collect();
                let (_, q, _, _) = solve_weighted(&branch, 1e-8)?;
                qs.push(q);
            }
            Some(qs)
        }
        None => None,
    };
    let mut s_after = 0.0;
    for x in 0..n_x {
        let mut g = [ComplexMatrix::zeros(d, d), ComplexMatrix::zeros(d, d)];
        for m in 0..2 {
            for (z, row) in facet.coeffs.iter().enumerate() {
                let c = row[x];
                if c != 0 {
                    g[m] = g[m].add(&bob[m][z].transpose().scale(0.5 * c as f64));
                }
            }
        }
        let lin = g[0].sub(&g[1]).hermitian_part();
        effects[x] = match (&adversary, lambda) {
            (Some(qs), Some(l)) => {
                let q0 = qs[0][x].transpose().hermitian_part();
                let q1 = qs[1][x].transpose().hermitian_part();
                penalized_effect_step(&effects[x], &lin, &q0, &q1, l * 0.5 / n_x as f64)
            }
            _ => lin.positive_part_projector(),
        };
        let m0 = alice_effect(&effects[x], 0);
        let m1 = alice_effect(&effects[x], 1);
        for m in 0..2 {
            for (z, row) in facet.coeffs.iter().enumerate() {
                let c = row[x];
                if c != 0 {
                    let mm = if m == 0 { &m0 } else { &m1 };
                    s_after += c as f64 * 0.5 * mm.transpose().hs_inner(&bob[m][z]);
                }
            }
        }
    }
    Ok(s_after)
}

/// Maximizes Tr(M L) - w [Tr(M M Q0) + Tr((I-M)(I-M) Q1)] over 0 <= M <= I
/// by projected gradient ascent with backtracking. The objective is concave
/// (Q0, Q1 are PSD), so this converges to the sub-problem optimum.
fn penalized_effect_step(
    start: &ComplexMatrix,
    lin: &ComplexMatrix,
    q0: &ComplexMatrix,
    q1: &ComplexMatrix,
    w: f64,
) -> ComplexMatrix {
    let d = lin.rows();
    let id = ComplexMatrix::identity(d);
    let f = |m: &ComplexMatrix| -> f64 {
        let comp = id.sub(m);
        m.hs_inner(lin)
            - w * (m.matmul(m).hs_inner(q0) + comp.matmul(&comp).hs_inner(q1))
    };
    let mut m = start.clone();
    let mut step = 0.5 / (1.0 + 2.0 * w * (q0.norm_max() + q1.norm_max()));
    let mut fval = f(&m);
    for _ in 0..200 {
        let comp = id.sub(&m);
        let grad = lin
            .sub(&m.matmul(q0).add(&q0.matmul(&m)).scale(w))
            .add(&comp.matmul(q1).add(&q1.matmul(&comp)).scale(w))
            .hermitian_part();
        let mut improved = false;
        for _ in 0..30 {
            let cand = m.add(&grad.scale(step)).hermitian_map(|l| l.clamp(0.0, 1.0));
            let fc = f(&cand);
            if fc > fval + 1e-15 {
                m = cand;
                fval = fc;
                improved = true;
                step *= 1.3;
                break;
            }
            step *= 0.5;
        }
        if !improved {
            break;
        }
    }
    m
}

fn alice_effect(first: &ComplexMatrix, m: usize) -> ComplexMatrix {
    if m == 0 {
        first.clone()
    } else {
        ComplexMatrix::identity(first.rows()).sub(first)
    }
}

fn random_effect(rng: &mut ChaCha8Rng, d: usize) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(d, d, |_, _| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    });
    let w = g.matmul(&g.dagger());
    let top = w.max_eigenvalue();
    w.scale(1.0 / (top * rng.gen_range(1.0..3.0)))
}

fn protocol_from(
    effects: &[ComplexMatrix],
    bob: &[Vec<ComplexMatrix>],
    d: usize,
    n_x: usize,
) -> EaccProtocol {
    let alice: Vec<Povm> = effects
        .iter()
        .map(|e| {
            let clipped = e.hermitian_map(|l| l.clamp(0.0, 1.0));
            Povm::binary(clipped).expect("clipped effect is a valid binary POVM")
        })
        .collect();
    let bob_povms: Vec<Povm> = bob
        .iter()
        .map(|elements| {
            let cleaned: Vec<ComplexMatrix> = elements
                .iter()
                .map(|e| e.hermitian_part().hermitian_map(|l| l.max(0.0)))
                .collect();
            let total = cleaned
                .iter()
                .fold(ComplexMatrix::zeros(d, d), |a, b| a.add(b));
            let t_isqrt =
                total.hermitian_map(|l| if l > 1e-12 { 1.0 / l.sqrt() } else { 0.0 });
            let mut scaled: Vec<ComplexMatrix> = cleaned
                .iter()
                .map(|e| t_isqrt.matmul(e).matmul(&t_isqrt).hermitian_part())
                .collect();
            // directions outside the support go to a uniform share
            let covered = scaled
                .iter()
                .fold(ComplexMatrix::zeros(d, d), |a, b| a.add(b));
            let remainder = ComplexMatrix::identity(d)
                .sub(&covered)
                .hermitian_map(|l| l.max(0.0))
                .scale(1.0 / scaled.len() as f64);
            for e in scaled.iter_mut() {
                *e = e.add(&remainder);
            }
            Povm::new(scaled).expect("renormalized POVM is complete")
        })
        .collect();
    EaccProtocol {
        shared: max_entangled(d).to_density(),
        dims: (d, d),
        alice: AliceDevice::Povms(alice),
        message_fn: vec![vec![0, 1]; n_x],
        n_messages: 2,
        bob_povms: vec![bob_povms],
    }
}

#[derive(Debug, Clone)]
pub struct QcSearchResult {
    pub protocol: QcProtocol,
    pub achieved_s: f64,
    pub achieved_d: f64,
    pub trace: Vec<RestartTrace>,
}

/// See-saw over pure-state qubit strategies for a task whose receiver has at
/// most two relevant outputs per input: Bob's half-step is the projective
/// positive-part optimum, Alice's is the top eigenvector per input.
pub fn seesaw_qc(
    task: &Task,
    target_s: f64,
    cfg: &SeesawConfig,
) -> Result<QcSearchResult, SearchError> {
    let d = cfg.dims.0;
    // relevant outputs per y
    let mut active: Vec<Vec<usize>> = Vec::with_capacity(task.n_y);
    for y in 0..task.n_y {
        let mut zs: Vec<usize> = (0..task.n_z)
            .filter(|&z| (0..task.n_x).any(|x| task.coefficient(x, y, z) != 0.0))
            .collect();
        if zs.len() > 2 {
            return Err(SearchError::NotBinaryEffective);
        }
        if zs.is_empty() {
            zs.push(0);
        }
        active.push(zs);
    }
    let runs: Vec<(usize, QcProtocol, f64, Vec<f64>)> = (0..cfg.restarts)
        .into_par_iter()
        .map(|restart| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
            rng.set_stream(0x9c + restart as u64);
            let mut states: Vec<DensityState> = (0..task.n_x)
                .map(|_| crate::qcore::random_pure_state(&mut rng, d).to_density())
                .collect();
            let mut povms: Vec<Povm> = vec![trivial_povm(d, task.n_z); task.n_y];
            let mut objective_trace = Vec::new();
            let mut s = 0.0;
            for _round in 0..cfg.max_rounds {
                // Bob half-step
                for y in 0..task.n_y {
                    povms[y] = bob_projective_step(task, &states, y, &active[y], d);
                }
                s = evaluate(task, &states, &povms);
                objective_trace.push(s);
                // Alice half-step
                for x in 0..task.n_x {
                    let mut score = ComplexMatrix::zeros(d, d);
                    for (y, povm) in povms.iter().enumerate() {
                        for z in 0..task.n_z {
                            let c = task.coefficient(x, y, z);
                            if c != 0.0 {
                                score = score.add(&povm.element(z).scale(c));
                            }
                        }
                    }
                    let (_, vecs) = score.hermitian_part().eigh();
                    let top = PureState::normalized(
                        (0..d).map(|r| vecs.get(r, d - 1)).collect(),
                    )
                    .expect("eigenvector is normalized");
                    states[x] = top.to_density();
                }
                let s2 = evaluate(task, &states, &povms);
                objective_trace.push(s2);
                if (s2 - s).abs() < cfg.convergence_eps && s2 >= target_s - 1e-3 {
                    s = s2;
                    break;
                }
                s = s2;
            }
            (
                restart,
                QcProtocol { states: states.clone(), measurements: povms.clone() },
                s,
                objective_trace,
            )
        })
        .collect();
    let mut best = &runs[0];
    for run in &runs {
        if run.2 > best.2 + 1e-12 {
            best = run;
        }
    }
    let achieved_d = qc_distinguishability(&best.1, &task.priors)?;
    let trace = runs
        .iter()
        .map(|(r, p, s, t)| RestartTrace {
            restart: *r,
            achieved_s: *s,
            achieved_d: {
                let _ = p;
                f64::NAN
            },
            objective_trace: t.clone(),
        })
        .collect();
    Ok(QcSearchResult { protocol: best.1.clone(), achieved_s: best.2, achieved_d, trace })
}

fn trivial_povm(d: usize, n_z: usize) -> Povm {
    let mut elements = vec![ComplexMatrix::zeros(d, d); n_z];
    elements[0] = ComplexMatrix::identity(d);
    Povm::new(elements).expect("trivial POVM")
}

fn bob_projective_step(
    task: &Task,
    states: &[DensityState],
    y: usize,
    active: &[usize],
    d: usize,
) -> Povm {
    let score = |z: usize| -> ComplexMatrix {
        let mut g = ComplexMatrix::zeros(d, d);
        for (x, rho) in states.iter().enumerate() {
            let c = task.coefficient(x, y, z);
            if c != 0.0 {
                g = g.add(&rho.matrix().scale(c));
            }
        }
        g
    };
    let mut elements = vec![ComplexMatrix::zeros(d, d); task.n_z];
    match active {
        [z] => {
            elements[*z] = ComplexMatrix::identity(d);
        }
        [z0, z1] => {
            let diff = score(*z0).sub(&score(*z1)).hermitian_part();
            let plus = diff.positive_part_projector();
            elements[*z0] = plus.clone();
            elements[*z1] = ComplexMatrix::identity(d).sub(&plus);
        }
        _ => unreachable!("binary-effective is validated on entry"),
    }
    Povm::new(elements).expect("projective step yields a POVM")
}

fn evaluate(task: &Task, states: &[DensityState], povms: &[Povm]) -> f64 {
    let p = QcProtocol { states: states.to_vec(), measurements: povms.to_vec() };
    let table = qc_correlations(&p).expect("seesaw protocol is well-formed");
    crate::protocols::success_metric(task, &table)
}

// ---- appendix data --------------------------------------------------------

/// Which appendix data set to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AppendixScenario {
    /// the (3,1,3) matrices
    A313,
    /// the (3,1,4) matrices
    B314,
}

#[derive(Debug, Clone)]
pub struct AppendixReport {
    pub scenario: AppendixScenario,
    pub violations: Vec<String>,
    /// facet label and its simulated value
    pub facet_values: Vec<(String, f64)>,
    pub distinguishability: f64,
    pub reference_facet_value: f64,
    pub reference_distinguishability: f64,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn appendix_313() -> (Vec<ComplexMatrix>, ComplexMatrix, Vec<ComplexMatrix>) {
    let t11 = ComplexMatrix::from_rows(2, 2, &[
        c(9.0 / 20.0, 0.0), c(-0.1, -0.12),
        c(-0.1, 0.12), c(0.4, 0.0),
    ]);
    let t12 = ComplexMatrix::from_rows(2, 2, &[
        c(11.0 / 25.0, 0.0), c(-0.15, -0.1),
        c(-0.15, 0.1), c(0.65, 0.0),
    ]);
    let t13 = ComplexMatrix::from_rows(2, 2, &[
        c(0.4, 0.0), c(-0.1, -0.05),
        c(-0.1, 0.05), c(0.55, 0.0),
    ]);
    let r_bar = ComplexMatrix::from_rows(2, 2, &[
        c(0.1739, 0.0934), c(0.4797, -0.8549),
        c(-0.9030, 0.3817), c(-0.0735, -0.1832),
    ]);
    let k = vec![
        ComplexMatrix::zeros(2, 2),
        ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, 0.0]),
        ComplexMatrix::from_real(2, 2, &[0.0, 0.0, 0.0, 1.0]),
    ];
    (vec![t11, t12, t13], r_bar, k)
}

fn appendix_314() -> (Vec<ComplexMatrix>, ComplexMatrix, Vec<ComplexMatrix>) {
    let q11 = ComplexMatrix::from_rows(2, 2, &[
        c(12.0 / 25.0, 0.0), c(0.08, -0.05),
        c(0.08, 0.05), c(0.75, 0.0),
    ]);
    // the printed matrix repeats the minus sign on both off-diagonal
    // entries; kept verbatim, the validator reports the hermiticity gap
    let q12 = ComplexMatrix::from_rows(2, 2, &[
        c(0.66, 0.0), c(0.16, -0.04),
        c(0.16, -0.04), c(0.54, 0.0),
    ]);
    let q13 = ComplexMatrix::from_rows(2, 2, &[
        c(0.54, 0.0), c(0.01, 0.04),
        c(0.01, -0.04), c(0.68, 0.0),
    ]);
    let v_bar = ComplexMatrix::from_rows(2, 2, &[
        c(0.4958, 0.5831), c(-0.6031, -0.2244),
        c(-0.1595, -0.6234), c(-0.5275, -0.5546),
    ]);
    let l1 = ComplexMatrix::from_real(2, 2, &[0.22, -0.16, -0.16, 0.12]);
    let l2 = ComplexMatrix::from_real(2, 2, &[0.08, -0.14, -0.14, 0.28]);
    let l3 = l2.clone();
    let l4 = ComplexMatrix::identity(2).sub(&l1).sub(&l2).sub(&l3);
    (vec![q11, q12, q13], v_bar, vec![l1, l2, l3, l4])
}

/// Evaluates the appendix matrices verbatim: validates the devices, runs the
/// protocol, and reports the facet values and distinguishability next to the
/// published numbers without asserting agreement.
pub fn evaluate_appendix(which: AppendixScenario) -> Result<AppendixReport, SearchError> {
    let (first_effects, unitary, k_meas) = match which {
        AppendixScenario::A313 => appendix_313(),
        AppendixScenario::B314 => appendix_314(),
    };
    let n_z = k_meas.len();
    let mut violations = Vec::new();
    for (x, e) in first_effects.iter().enumerate() {
        let complement = ComplexMatrix::identity(2).sub(e);
        let report = validate(Validatable::Povm(&[e.clone(), complement]));
        for v in report.violations {
            violations.push(format!("Alice x={}: {} ({:.2e})", x + 1, v.kind, v.magnitude));
        }
    }
    let unit_dev = unitary
        .matmul(&unitary.dagger())
        .sub(&ComplexMatrix::identity(2))
        .norm_max();
    if unit_dev > 1e-9 {
        violations.push(format!("Bob unitary: unitarity deviation {unit_dev:.2e}"));
    }
    let report = validate(Validatable::Povm(&k_meas));
    for v in report.violations {
        violations.push(format!("Bob measurement: {} ({:.2e})", v.kind, v.magnitude));
    }
    // simulate p(z|x) = sum_m Tr[(M_{m|x} (x) N_{z|m}) phi+], message-2
    // measurement conjugated by the unitary
    let mut p = vec![vec![0.0; first_effects.len()]; n_z];
    for (x, e) in first_effects.iter().enumerate() {
        for m in 0..2 {
            let alice = alice_effect(e, m);
            for (z, kz) in k_meas.iter().enumerate() {
                let bob = if m == 0 {
                    kz.clone()
                } else {
                    unitary.dagger().matmul(kz).matmul(&unitary)
                };
                p[z][x] += 0.5 * alice.transpose().hs_inner(&bob);
            }
        }
    }
    let facets: Vec<(String, Vec<(usize, usize)>)> = match which {
        AppendixScenario::A313 => vec![
            ("p(2|1)+p(1|3)+p(3|1)".into(), vec![(2, 1), (1, 3), (3, 1)]),
            ("p(2|1)+p(1|3)+p(3|2)".into(), vec![(2, 1), (1, 3), (3, 2)]),
        ],
        AppendixScenario::B314 => vec![
            ("p(2|1)+p(1|3)+p(3|1)+p(4|3)".into(), vec![(2, 1), (1, 3), (3, 1), (4, 3)]),
            ("p(2|1)+p(1|3)+p(3|1)+p(4|2)".into(), vec![(2, 1), (1, 3), (3, 1), (4, 2)]),
            ("p(2|1)+p(1|3)+p(3|1)+p(4|1)".into(), vec![(2, 1), (1, 3), (3, 1), (4, 1)]),
        ],
    };
    let facet_values = facets
        .iter()
        .map(|(name, cells)| {
            let v: f64 = cells.iter().map(|&(z, x)| p[z - 1][x - 1]).sum();
            (name.clone(), v)
        })
        .collect();
    // distinguishability of the three first-effect measurements, message =
    // outcome, evaluated through the branch SDPs on the literal conditionals
    let mut dist = 0.0;
    for m in 0..2 {
        let branch: Vec<ComplexMatrix> = first_effects
            .iter()
            .map(|e| {
                let a = alice_effect(e, m);
                a.matmul(&a.dagger()).transpose().scale(0.5 / 3.0)
            })
            .collect();
        let (v, _, _, _) = solve_weighted(&branch, 1e-8)?;
        dist += v;
    }
    let (reference_facet_value, reference_distinguishability) = match which {
        AppendixScenario::A313 => (1.2184, 0.3726),
        AppendixScenario::B314 => (1.3162, 0.3974),
    };
    Ok(AppendixReport {
        scenario: which,
        violations,
        facet_values,
        distinguishability: dist,
        reference_facet_value,
        reference_distinguishability,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::FacetInequality;

    fn facet_313_second() -> FacetInequality {
        FacetInequality::from_cells(3, 3, &[(2, 1), (1, 3), (3, 2)], 3)
    }

    #[test]
    fn seesaw_objective_is_monotone_without_budget() {
        let cfg = SeesawConfig { restarts: 2, max_rounds: 25, ..Default::default() };
        let res = seesaw_eacc(&facet_313_second(), &cfg, None).unwrap();
        for t in &res.trace {
            for w in t.objective_trace.windows(2) {
                assert!(w[1] >= w[0] - 1e-9, "objective decreased: {w:?}");
            }
        }
    }

    #[test]
    fn seesaw_is_seed_deterministic() {
        let cfg = SeesawConfig { restarts: 3, max_rounds: 12, ..Default::default() };
        let a = seesaw_eacc(&facet_313_second(), &cfg, Some(0.3726)).unwrap();
        let b = seesaw_eacc(&facet_313_second(), &cfg, Some(0.3726)).unwrap();
        assert_eq!(a.achieved_s.to_bits(), b.achieved_s.to_bits());
        assert_eq!(a.achieved_d.to_bits(), b.achieved_d.to_bits());
    }

    #[test]
    fn seesaw_zero_rounds_returns_initial_protocol() {
        let cfg = SeesawConfig { restarts: 1, max_rounds: 0, ..Default::default() };
        let res = seesaw_eacc(&facet_313_second(), &cfg, None).unwrap();
        assert!(res.trace[0].objective_trace.is_empty());
        // the protocol is still well-formed and replayable
        let table = eacc_correlations(&res.protocol).unwrap();
        let (n_x, _, n_z) = table.shape();
        assert_eq!((n_x, n_z), (3, 3));
    }

    #[test]
    fn seesaw_result_is_rederivable_from_protocol() {
        let cfg = SeesawConfig { restarts: 4, max_rounds: 30, ..Default::default() };
        let facet = facet_313_second();
        let res = seesaw_eacc(&facet, &cfg, Some(0.3726)).unwrap();
        let table = eacc_correlations(&res.protocol).unwrap();
        let mut s = 0.0;
        for (z, row) in facet.coeffs.iter().enumerate() {
            for (x, &c) in row.iter().enumerate() {
                s += c as f64 * table.get(x, 0, z);
            }
        }
        assert!((s - res.achieved_s).abs() < 1e-8);
        let d = eacc_distinguishability_tol(&res.protocol, &[1.0 / 3.0; 3], 1e-8).unwrap();
        assert!((d - res.achieved_d).abs() < 1e-8);
    }

    #[test]
    fn seesaw_finds_advantage_in_313() {
        let cfg = SeesawConfig { restarts: 12, max_rounds: 40, ..Default::default() };
        let res = seesaw_eacc(&facet_313_second(), &cfg, Some(0.3726)).unwrap();
        assert!(res.achieved_d <= 0.3726 + 1e-5, "d = {}", res.achieved_d);
        assert!(res.achieved_s >= 1.21, "s = {}", res.achieved_s);
        assert!(res.ratio >= 1.08, "ratio = {}", res.ratio);
    }

    #[test]
    fn qc_seesaw_reaches_trine_optimum_for_pair_task() {
        let task = crate::tasks::pair_task(3);
        // trine states: per-pair Helstrom success 1/2 + sqrt(3)/4
        let target = 0.5 + 3.0f64.sqrt() / 4.0;
        let cfg = SeesawConfig { restarts: 8, max_rounds: 40, ..Default::default() };
        let res = seesaw_qc(&task, target, &cfg).unwrap();
        assert!(res.achieved_s >= target - 1e-3, "s = {}", res.achieved_s);
        // strictly beats the classical pair bound
        let bound = crate::tasks::pair_bound(3, res.achieved_s);
        assert!(res.achieved_d < bound - 1e-3, "d = {} bound = {bound}", res.achieved_d);
    }

    #[test]
    fn appendix_reports_are_generated_not_asserted() {
        let a = evaluate_appendix(AppendixScenario::A313).unwrap();
        // the all-zero first Bob element makes outcome 1 unreachable:
        // the deviation from the published facet value is reported
        assert_eq!(a.facet_values.len(), 2);
        assert!(a.distinguishability > 0.0);
        let b = evaluate_appendix(AppendixScenario::B314).unwrap();
        // the duplicated row and sign typo in the printed matrices surface
        // as validation entries
        assert!(!b.violations.is_empty());
        assert_eq!(b.facet_values.len(), 3);
    }
}

//! Simulators and distinguishability functionals for quantum communication
//! (QC), entanglement-assisted classical communication (EACC), and
//! entanglement-assisted quantum communication (EAQC) with a fixed, known
//! shared state.
//!
//! Correlations follow the Born rule with the sender's POVM elements entering
//! linearly. Conditional post-measurement states follow the two-sided update
//! rho^B_{a|x} = Tr_A[(M (x) 1) sigma (M^dag (x) 1)] / p(a|x) with
//! p(a|x) = Tr[sigma (M^dag M (x) 1)]; transform-produced protocols carry
//! explicit Kraus instruments and use the same update per Kraus branch.

use crate::discrimination::{discriminate, solve_weighted, DiscriminationError, Ensemble};
use crate::qcore::{
    partial_trace, ComplexMatrix, DensityState, Keep, KrausChannel, Povm, QcoreError,
};
use crate::tasks::Task;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ProtocolError {
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("correlation table not normalized at (x={x}, y={y}): sum {sum}")]
    NotNormalized { x: usize, y: usize, sum: f64 },
    #[error(transparent)]
    Qcore(#[from] QcoreError),
    #[error(transparent)]
    Discrimination(#[from] DiscriminationError),
}

/// Conditional outcome distribution p(z|x,y), regime-agnostic.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CorrelationTable {
    n_x: usize,
    n_y: usize,
    n_z: usize,
    /// row-major over (x, y, z)
    p: Vec<f64>,
}

impl CorrelationTable {
    pub fn new(n_x: usize, n_y: usize, n_z: usize, p: Vec<f64>) -> Result<Self, ProtocolError> {
        assert_eq!(p.len(), n_x * n_y * n_z);
        let t = Self { n_x, n_y, n_z, p };
        for x in 0..n_x {
            for y in 0..n_y {
                let sum: f64 = (0..n_z).map(|z| t.get(x, y, z)).sum();
                if (sum - 1.0).abs() > 1e-9 {
                    return Err(ProtocolError::NotNormalized { x, y, sum });
                }
            }
        }
        Ok(t)
    }

    pub fn shape(&self) -> (usize, usize, usize) {
        (self.n_x, self.n_y, self.n_z)
    }

    pub fn get(&self, x: usize, y: usize, z: usize) -> f64 {
        self.p[(x * self.n_y + y) * self.n_z + z]
    }

    /// Largest entrywise deviation from another table of the same shape.
    pub fn max_deviation(&self, other: &CorrelationTable) -> f64 {
        assert_eq!(self.shape(), other.shape());
        self.p
            .iter()
            .zip(&other.p)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Prepare-and-measure protocol: Alice sends rho_x, Bob measures {M_{z|y}}.
#[derive(Debug, Clone)]
pub struct QcProtocol {
    pub states: Vec<DensityState>,
    /// one POVM per Bob input y; all outcome counts must agree
    pub measurements: Vec<Povm>,
}

impl QcProtocol {
    pub fn n_states(&self) -> usize {
        self.states.len()
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }
}

/// p(z|x,y) = Tr(rho_x M_{z|y}).
pub fn qc_correlations(p: &QcProtocol) -> Result<CorrelationTable, ProtocolError> {
    let d = p.dim();
    for m in &p.measurements {
        if m.dim() != d {
            return Err(ProtocolError::DimMismatch(format!(
                "measurement dim {} vs state dim {}",
                m.dim(),
                d
            )));
        }
    }
    let n_x = p.states.len();
    let n_y = p.measurements.len();
    let n_z = p.measurements[0].outcomes();
    let mut table = Vec::with_capacity(n_x * n_y * n_z);
    for rho in &p.states {
        for m in &p.measurements {
            for z in 0..n_z {
                table.push(m.element(z).matmul(rho.matrix()).trace().re);
            }
        }
    }
    CorrelationTable::new(n_x, n_y, n_z, table)
}

/// Minimum-error distinguishability of the sent ensemble.
pub fn qc_distinguishability(p: &QcProtocol, priors: &[f64]) -> Result<f64, ProtocolError> {
    let e = Ensemble::new(p.states.clone(), priors.to_vec())?;
    Ok(discriminate(&e, 1e-8)?.value)
}

/// Bob's conditional state after Alice's Kraus-style operator, with its
/// probability. Zero-probability branches are flagged.
#[derive(Debug, Clone)]
pub struct PostState {
    pub state: DensityState,
    pub probability: f64,
    pub zero_probability: bool,
}

/// rho^B = Tr_A[(K (x) 1) sigma (K^dag (x) 1)] / p,  p = Tr[sigma (K^dag K (x) 1)].
pub fn reduced_post_state(sigma: &DensityState, k: &ComplexMatrix) -> Result<PostState, ProtocolError> {
    let da = k.cols();
    if sigma.dim() % da != 0 || k.rows() != da {
        return Err(ProtocolError::DimMismatch(format!(
            "operator acts on dim {da}, shared state has dim {}",
            sigma.dim()
        )));
    }
    let db = sigma.dim() / da;
    let big = k.kron(&ComplexMatrix::identity(db));
    let moved = big.matmul(sigma.matrix()).matmul(&big.dagger());
    let unnorm = partial_trace(&moved, (da, db), Keep::B)?;
    let p = unnorm.trace().re;
    if p < 1e-12 {
        return Ok(PostState {
            state: DensityState::maximally_mixed(db),
            probability: 0.0,
            zero_probability: true,
        });
    }
    let state = DensityState::new(unnorm.scale(1.0 / p).hermitian_part())?;
    Ok(PostState { state, probability: p, zero_probability: false })
}

/// Alice-side device of an EACC protocol. Plain POVMs cover hand-built
/// protocols; instruments (one Kraus list per outcome) appear when a protocol
/// is produced by a transform and the post-measurement branching matters.
#[derive(Debug, Clone)]
pub enum AliceDevice {
    /// one POVM per input x
    Povms(Vec<Povm>),
    /// per input x, per outcome a, a list of Kraus operators on Alice's side;
    /// completeness: sum over (a, j) of K^dag K = I
    Instruments(Vec<Vec<Vec<ComplexMatrix>>>),
}

impl AliceDevice {
    pub fn n_inputs(&self) -> usize {
        match self {
            AliceDevice::Povms(p) => p.len(),
            AliceDevice::Instruments(i) => i.len(),
        }
    }

    pub fn n_outcomes(&self) -> usize {
        match self {
            AliceDevice::Povms(p) => p[0].outcomes(),
            AliceDevice::Instruments(i) => i[0].len(),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            AliceDevice::Povms(p) => p[0].dim(),
            AliceDevice::Instruments(i) => i[0][0][0].cols(),
        }
    }
}

/// Entanglement-assisted classical communication protocol in the
/// known-shared-state regime: Alice measures her half of `shared`, sends
/// message f(a, x), Bob measures his half with a POVM chosen by (y, message).
#[derive(Debug, Clone)]
pub struct EaccProtocol {
    pub shared: DensityState,
    pub dims: (usize, usize),
    pub alice: AliceDevice,
    /// message_fn[x][a] -> message label in 0..n_messages
    pub message_fn: Vec<Vec<usize>>,
    pub n_messages: usize,
    /// bob_povms[y][message], each on Bob's dim
    pub bob_povms: Vec<Vec<Povm>>,
}

impl EaccProtocol {
    pub fn check(&self) -> Result<(), ProtocolError> {
        let (da, db) = self.dims;
        if self.shared.dim() != da * db {
            return Err(ProtocolError::DimMismatch("shared state vs dims".into()));
        }
        if self.alice.dim() != da {
            return Err(ProtocolError::DimMismatch("Alice device vs dA".into()));
        }
        let n_x = self.alice.n_inputs();
        let n_a = self.alice.n_outcomes();
        if self.message_fn.len() != n_x || self.message_fn.iter().any(|r| r.len() != n_a) {
            return Err(ProtocolError::DimMismatch("message_fn shape".into()));
        }
        if self.message_fn.iter().flatten().any(|&m| m >= self.n_messages) {
            return Err(ProtocolError::DimMismatch("message label out of range".into()));
        }
        for row in &self.bob_povms {
            if row.len() != self.n_messages {
                return Err(ProtocolError::DimMismatch("bob_povms per message".into()));
            }
            for povm in row {
                if povm.dim() != db {
                    return Err(ProtocolError::DimMismatch("Bob POVM vs dB".into()));
                }
            }
        }
        Ok(())
    }

    /// Unnormalized Bob-side operator for (x, a) as used by the correlation
    /// formula: linear in the POVM element, two-sided for instruments.
    fn correlation_operator(&self, x: usize, a: usize) -> Result<ComplexMatrix, ProtocolError> {
        let (da, db) = self.dims;
        match &self.alice {
            AliceDevice::Povms(povms) => {
                let big = povms[x].element(a).kron(&ComplexMatrix::identity(db));
                partial_trace(&big.matmul(self.shared.matrix()), (da, db), Keep::B)
                    .map_err(Into::into)
            }
            AliceDevice::Instruments(instr) => {
                let mut out = ComplexMatrix::zeros(db, db);
                for k in &instr[x][a] {
                    debug_assert_eq!(k.cols(), da);
                    let big = k.kron(&ComplexMatrix::identity(db));
                    let moved = big.matmul(self.shared.matrix()).matmul(&big.dagger());
                    // a Kraus operator may land on a smaller Alice-side space
                    out = out.add(&partial_trace(&moved, (k.rows(), db), Keep::B)?);
                }
                Ok(out)
            }
        }
    }

    /// Unnormalized conditional Bob state for (x, a) entering the
    /// distinguishability functional (two-sided update in both device forms).
    fn branch_operator(&self, x: usize, a: usize) -> Result<ComplexMatrix, ProtocolError> {
        let (da, db) = self.dims;
        match &self.alice {
            AliceDevice::Povms(povms) => {
                let big = povms[x].element(a).kron(&ComplexMatrix::identity(db));
                let moved = big.matmul(self.shared.matrix()).matmul(&big.dagger());
                partial_trace(&moved, (da, db), Keep::B).map_err(Into::into)
            }
            AliceDevice::Instruments(_) => self.correlation_operator(x, a),
        }
    }
}

/// p(z|x,y) = sum_a Tr[(M_{a|x} (x) N_{z|y, f(a,x)}) sigma].
pub fn eacc_correlations(p: &EaccProtocol) -> Result<CorrelationTable, ProtocolError> {
    p.check()?;
    let n_x = p.alice.n_inputs();
    let n_a = p.alice.n_outcomes();
    let n_y = p.bob_povms.len();
    let n_z = p.bob_povms[0][0].outcomes();
    let mut table = vec![0.0; n_x * n_y * n_z];
    for x in 0..n_x {
        for a in 0..n_a {
            let omega = p.correlation_operator(x, a)?;
            let msg = p.message_fn[x][a];
            for y in 0..n_y {
                let povm = &p.bob_povms[y][msg];
                for z in 0..n_z {
                    table[(x * n_y + y) * n_z + z] +=
                        povm.element(z).matmul(&omega).trace().re;
                }
            }
        }
    }
    CorrelationTable::new(n_x, n_y, n_z, table)
}

/// Distinguishability of Alice's inputs from Bob's side information: the sum
/// over outcome branches (and message flags, realized block-diagonally) of
/// certified discrimination values.
pub fn eacc_distinguishability(p: &EaccProtocol, priors: &[f64]) -> Result<f64, ProtocolError> {
    eacc_distinguishability_tol(p, priors, 1e-8)
}

pub fn eacc_distinguishability_tol(
    p: &EaccProtocol,
    priors: &[f64],
    tol: f64,
) -> Result<f64, ProtocolError> {
    p.check()?;
    let n_x = p.alice.n_inputs();
    let n_a = p.alice.n_outcomes();
    assert_eq!(priors.len(), n_x);
    // branch (a, message r): ensemble over x with f(a,x) = r
    let mut groups: Vec<(usize, usize)> = Vec::new();
    for a in 0..n_a {
        let mut messages: Vec<usize> = (0..n_x).map(|x| p.message_fn[x][a]).collect();
        messages.sort_unstable();
        messages.dedup();
        for r in messages {
            groups.push((a, r));
        }
    }
    let contributions: Vec<Result<f64, ProtocolError>> = groups
        .par_iter()
        .map(|&(a, r)| {
            let mut ops = Vec::new();
            for x in 0..n_x {
                if p.message_fn[x][a] == r {
                    ops.push(p.branch_operator(x, a)?.scale(priors[x]).hermitian_part());
                }
            }
            let total: f64 = ops.iter().map(|o| o.trace().re).sum();
            if total < 1e-14 {
                return Ok(0.0);
            }
            let (value, _, _, _) = solve_weighted(&ops, tol)?;
            Ok(value)
        })
        .collect();
    let mut d = 0.0;
    for c in contributions {
        d += c?;
    }
    Ok(d)
}

/// Entanglement-assisted quantum communication: Alice applies channel E_x to
/// her half and sends the output wire; Bob measures the (sent (x) kept) pair.
#[derive(Debug, Clone)]
pub struct EaqcProtocol {
    pub shared: DensityState,
    pub dims: (usize, usize),
    pub channels: Vec<KrausChannel>,
    /// one POVM per y, acting on d_out (x) dB with the sent wire first
    pub bob_povms: Vec<Povm>,
}

impl EaqcProtocol {
    pub fn check(&self) -> Result<(), ProtocolError> {
        let (da, db) = self.dims;
        if self.shared.dim() != da * db {
            return Err(ProtocolError::DimMismatch("shared state vs dims".into()));
        }
        let d_out = self.channels[0].out_dim();
        for c in &self.channels {
            if c.in_dim() != da || c.out_dim() != d_out {
                return Err(ProtocolError::DimMismatch("channel dims".into()));
            }
        }
        for povm in &self.bob_povms {
            if povm.dim() != d_out * db {
                return Err(ProtocolError::DimMismatch("Bob POVM vs d_out*dB".into()));
            }
        }
        Ok(())
    }

    /// The transformed joint state sum_a (E_a (x) 1) sigma (E_a^dag (x) 1).
    pub fn transformed_state(&self, x: usize) -> Result<DensityState, ProtocolError> {
        let (da, db) = self.dims;
        let d_out = self.channels[x].out_dim();
        let mut out = ComplexMatrix::zeros(d_out * db, d_out * db);
        for k in self.channels[x].kraus_ops() {
            let big = k.kron(&ComplexMatrix::identity(db));
            out = out.add(&big.matmul(self.shared.matrix()).matmul(&big.dagger()));
        }
        DensityState::new(out.hermitian_part()).map_err(Into::into)
    }
}

/// Born rule on the transformed states.
pub fn eaqc_correlations(p: &EaqcProtocol) -> Result<CorrelationTable, ProtocolError> {
    p.check()?;
    let n_x = p.channels.len();
    let n_y = p.bob_povms.len();
    let n_z = p.bob_povms[0].outcomes();
    let mut table = Vec::with_capacity(n_x * n_y * n_z);
    for x in 0..n_x {
        let tau = p.transformed_state(x)?;
        for y in 0..n_y {
            for z in 0..n_z {
                table.push(p.bob_povms[y].element(z).matmul(tau.matrix()).trace().re);
            }
        }
    }
    CorrelationTable::new(n_x, n_y, n_z, table)
}

/// Certified discrimination value of the transformed-state ensemble.
pub fn eaqc_distinguishability(p: &EaqcProtocol, priors: &[f64]) -> Result<f64, ProtocolError> {
    p.check()?;
    let states: Vec<DensityState> = (0..p.channels.len())
        .map(|x| p.transformed_state(x))
        .collect::<Result<_, _>>()?;
    let e = Ensemble::new(states, priors.to_vec())?;
    Ok(discriminate(&e, 1e-8)?.value)
}

/// S = sum_{x,y,z} c(x,y,z) p(z|x,y).
pub fn success_metric(task: &Task, table: &CorrelationTable) -> f64 {
    let (n_x, n_y, n_z) = table.shape();
    assert_eq!(
        (n_x, n_y, n_z),
        (task.n_x, task.n_y, task.n_z),
        "task and table shapes differ"
    );
    let mut s = 0.0;
    for x in 0..n_x {
        for y in 0..n_y {
            for z in 0..n_z {
                s += task.coefficient(x, y, z) * table.get(x, y, z);
            }
        }
    }
    s
}

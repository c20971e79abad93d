//! Dense complex linear algebra and validated quantum-object constructors.
//!
//! Everything downstream (state discrimination, protocol simulation, the
//! see-saw search) works with the types in this module. All values are
//! immutable after construction and safe to share across threads.

mod matrix;
mod random;

pub use matrix::ComplexMatrix;
pub use random::{haar_unitary, random_density, random_pure_state, random_qubit_basis};

use num_complex::Complex64;
use thiserror::Error;

/// Hermiticity / trace / normalization tolerance (double-precision headroom
/// for operators up to 16x16).
pub const TOL_HERM: f64 = 1e-10;
/// Eigenvalue floor for positive-semidefiniteness checks.
pub const TOL_PSD: f64 = 1e-9;
/// Tolerance for POVM / Kraus completeness sums.
pub const TOL_COMPLETE: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum QcoreError {
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),
    #[error("matrix is not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),
    #[error("operator is not positive semidefinite (min eigenvalue {0:.3e})")]
    NotPsd(f64),
    #[error("trace is {0}, expected 1")]
    BadTrace(f64),
    #[error("completeness violated (max deviation from identity {0:.3e})")]
    Incomplete(f64),
    #[error("non-finite entry encountered")]
    NonFinite,
}

/// A normalized pure state |psi> of some dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
}

impl PureState {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self, QcoreError> {
        if amplitudes.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(QcoreError::NonFinite);
        }
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > TOL_HERM.sqrt() {
            return Err(QcoreError::NotNormalized(norm));
        }
        Ok(Self { amplitudes })
    }

    /// Builds the state and normalizes it, rejecting only the zero vector.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self, QcoreError> {
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-14 {
            return Err(QcoreError::NotNormalized(norm));
        }
        Ok(Self {
            amplitudes: amplitudes.into_iter().map(|a| a / norm).collect(),
        })
    }

    /// Computational basis state |k> in dimension `dim`.
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut amplitudes = vec![Complex64::ZERO; dim];
        amplitudes[k] = Complex64::ONE;
        Self { amplitudes }
    }

    /// Real qubit state cos(h)|0> + sin(h)|1>.
    pub fn real_qubit(half_angle: f64) -> Self {
        Self {
            amplitudes: vec![
                Complex64::new(half_angle.cos(), 0.0),
                Complex64::new(half_angle.sin(), 0.0),
            ],
        }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Entrywise complex conjugation; an involution that preserves the norm.
    pub fn conjugate(&self) -> Self {
        Self {
            amplitudes: self.amplitudes.iter().map(|a| a.conj()).collect(),
        }
    }

    /// Orthogonal partner of a qubit state: |v^perp> with <v|v^perp> = 0.
    pub fn qubit_orthogonal(&self) -> Result<Self, QcoreError> {
        if self.dim() != 2 {
            return Err(QcoreError::DimMismatch(format!(
                "qubit_orthogonal needs dim 2, got {}",
                self.dim()
            )));
        }
        let a = self.amplitudes[0];
        let b = self.amplitudes[1];
        Ok(Self {
            amplitudes: vec![-b.conj(), a.conj()],
        })
    }

    /// Rank-one projector |psi><psi|.
    pub fn projector(&self) -> ComplexMatrix {
        let d = self.dim();
        ComplexMatrix::from_fn(d, d, |i, j| self.amplitudes[i] * self.amplitudes[j].conj())
    }

    pub fn to_density(&self) -> DensityState {
        DensityState::new(self.projector()).expect("projector of a normalized state is a density")
    }

    pub fn inner(&self, other: &PureState) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Tensor product of two pure states.
    pub fn tensor(&self, other: &PureState) -> PureState {
        let mut amplitudes = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amplitudes {
            for b in &other.amplitudes {
                amplitudes.push(a * b);
            }
        }
        PureState { amplitudes }
    }
}

/// A density operator: Hermitian, PSD, unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityState {
    matrix: ComplexMatrix,
}

impl DensityState {
    pub fn new(matrix: ComplexMatrix) -> Result<Self, QcoreError> {
        let dev = matrix.hermiticity_deviation();
        if dev > TOL_HERM.max(1e-10) {
            return Err(QcoreError::NotHermitian(dev));
        }
        let min_ev = matrix.min_eigenvalue();
        if min_ev < -TOL_PSD {
            return Err(QcoreError::NotPsd(min_ev));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > 1e-9 || tr.im.abs() > 1e-9 {
            return Err(QcoreError::BadTrace(tr.re));
        }
        Ok(Self { matrix })
    }

    /// Maximally mixed state I/d.
    pub fn maximally_mixed(dim: usize) -> Self {
        let m = ComplexMatrix::identity(dim).scale(1.0 / dim as f64);
        Self { matrix: m }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }
}

/// A positive operator-valued measure: PSD elements summing to the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    elements: Vec<ComplexMatrix>,
}

impl Povm {
    pub fn new(elements: Vec<ComplexMatrix>) -> Result<Self, QcoreError> {
        if elements.is_empty() {
            return Err(QcoreError::DimMismatch("POVM needs >= 1 element".into()));
        }
        let d = elements[0].rows();
        let mut sum = ComplexMatrix::zeros(d, d);
        for e in &elements {
            if e.rows() != d || e.cols() != d {
                return Err(QcoreError::DimMismatch("POVM element shapes differ".into()));
            }
            let dev = e.hermiticity_deviation();
            if dev > TOL_COMPLETE {
                return Err(QcoreError::NotHermitian(dev));
            }
            let min_ev = e.min_eigenvalue();
            if min_ev < -TOL_PSD {
                return Err(QcoreError::NotPsd(min_ev));
            }
            sum = sum.add(e);
        }
        let dev = sum.sub(&ComplexMatrix::identity(d)).norm_max();
        if dev > TOL_COMPLETE {
            return Err(QcoreError::Incomplete(dev));
        }
        Ok(Self { elements })
    }

    /// Two-outcome POVM {E, I-E}.
    pub fn binary(effect: ComplexMatrix) -> Result<Self, QcoreError> {
        let d = effect.rows();
        let complement = ComplexMatrix::identity(d).sub(&effect);
        Self::new(vec![effect, complement])
    }

    /// Projective measurement onto an orthonormal basis.
    pub fn from_basis(basis: &[PureState]) -> Result<Self, QcoreError> {
        Self::new(basis.iter().map(|v| v.projector()).collect())
    }

    pub fn outcomes(&self) -> usize {
        self.elements.len()
    }

    pub fn dim(&self) -> usize {
        self.elements[0].rows()
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    pub fn element(&self, k: usize) -> &ComplexMatrix {
        &self.elements[k]
    }

    /// Relabels outcomes: new element k = old element perm[k].
    pub fn relabeled(&self, perm: &[usize]) -> Povm {
        Povm {
            elements: perm.iter().map(|&k| self.elements[k].clone()).collect(),
        }
    }
}

/// A completely positive trace-preserving map in Kraus form.
/// Kraus operators are `out_dim x in_dim`.
#[derive(Debug, Clone)]
pub struct KrausChannel {
    in_dim: usize,
    out_dim: usize,
    kraus_ops: Vec<ComplexMatrix>,
}

impl KrausChannel {
    pub fn new(kraus_ops: Vec<ComplexMatrix>) -> Result<Self, QcoreError> {
        if kraus_ops.is_empty() {
            return Err(QcoreError::DimMismatch("channel needs >= 1 Kraus op".into()));
        }
        let out_dim = kraus_ops[0].rows();
        let in_dim = kraus_ops[0].cols();
        let mut sum = ComplexMatrix::zeros(in_dim, in_dim);
        for k in &kraus_ops {
            if k.rows() != out_dim || k.cols() != in_dim {
                return Err(QcoreError::DimMismatch("Kraus op shapes differ".into()));
            }
            sum = sum.add(&k.dagger().matmul(k));
        }
        let dev = sum.sub(&ComplexMatrix::identity(in_dim)).norm_max();
        if dev > TOL_COMPLETE {
            return Err(QcoreError::Incomplete(dev));
        }
        Ok(Self { in_dim, out_dim, kraus_ops })
    }

    pub fn unitary(u: ComplexMatrix) -> Result<Self, QcoreError> {
        Self::new(vec![u])
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn kraus_ops(&self) -> &[ComplexMatrix] {
        &self.kraus_ops
    }
}

/// Kronecker product; dimensions multiply.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kron(b)
}

/// Which subsystem to keep in a partial trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Keep {
    A,
    B,
}

/// Partial trace of an operator on A (x) B. `dims = (dA, dB)`.
pub fn partial_trace(
    m: &ComplexMatrix,
    dims: (usize, usize),
    keep: Keep,
) -> Result<ComplexMatrix, QcoreError> {
    let (da, db) = dims;
    if m.rows() != da * db || m.cols() != da * db {
        return Err(QcoreError::DimMismatch(format!(
            "partial_trace: operator is {}x{}, dims give {}",
            m.rows(),
            m.cols(),
            da * db
        )));
    }
    match keep {
        Keep::A => Ok(ComplexMatrix::from_fn(da, da, |i, j| {
            (0..db).map(|k| m.get(i * db + k, j * db + k)).sum()
        })),
        Keep::B => Ok(ComplexMatrix::from_fn(db, db, |i, j| {
            (0..da).map(|k| m.get(k * db + i, k * db + j)).sum()
        })),
    }
}

/// Bipartite entangled pure state. For d = 2 this is
/// cos(theta)|00> + sin(theta)|11>; for d > 2 the uniform state
/// sum_i |ii>/sqrt(d) (theta is ignored).
pub fn make_entangled(theta: f64, d: usize) -> PureState {
    assert!(d >= 2, "make_entangled needs d >= 2");
    let mut amplitudes = vec![Complex64::ZERO; d * d];
    if d == 2 {
        amplitudes[0] = Complex64::new(theta.cos(), 0.0);
        amplitudes[3] = Complex64::new(theta.sin(), 0.0);
    } else {
        let a = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
        for i in 0..d {
            amplitudes[i * d + i] = a;
        }
    }
    PureState { amplitudes }
}

/// Maximally entangled state sum_i |ii>/sqrt(d).
pub fn max_entangled(d: usize) -> PureState {
    if d == 2 {
        make_entangled(std::f64::consts::FRAC_PI_4, 2)
    } else {
        make_entangled(0.0, d)
    }
}

/// Entrywise conjugation of a pure state.
pub fn conjugate(s: &PureState) -> PureState {
    s.conjugate()
}

/// Applies a channel to a state: rho -> sum_a E_a rho E_a^dag.
pub fn apply_kraus(c: &KrausChannel, rho: &DensityState) -> Result<DensityState, QcoreError> {
    if c.in_dim() != rho.dim() {
        return Err(QcoreError::DimMismatch(format!(
            "channel expects dim {}, state has {}",
            c.in_dim(),
            rho.dim()
        )));
    }
    let mut out = ComplexMatrix::zeros(c.out_dim(), c.out_dim());
    for k in c.kraus_ops() {
        out = out.add(&k.matmul(rho.matrix()).matmul(&k.dagger()));
    }
    DensityState::new(out)
}

/// One violated invariant, with its magnitude.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub kind: String,
    pub magnitude: f64,
}

/// Report-only validation: lists violated invariants, never fails.
#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, kind: &str, magnitude: f64) {
        self.violations.push(Violation { kind: kind.into(), magnitude });
    }
}

/// Checks a density operator, POVM, or Kraus channel without rejecting it.
pub enum Validatable<'a> {
    Density(&'a ComplexMatrix),
    Povm(&'a [ComplexMatrix]),
    Kraus(&'a [ComplexMatrix]),
}

pub fn validate(obj: Validatable<'_>) -> ValidationReport {
    let mut report = ValidationReport::default();
    match obj {
        Validatable::Density(m) => {
            let dev = m.hermiticity_deviation();
            if dev > TOL_HERM {
                report.push("hermiticity", dev);
            }
            let min_ev = m.min_eigenvalue();
            if min_ev < -TOL_PSD {
                report.push("psd", min_ev);
            }
            let tr = m.trace();
            let tdev = ((tr.re - 1.0).powi(2) + tr.im.powi(2)).sqrt();
            if tdev > TOL_HERM {
                report.push("trace", tdev);
            }
        }
        Validatable::Povm(elements) => {
            let d = elements.first().map_or(0, |e| e.rows());
            let mut sum = ComplexMatrix::zeros(d, d);
            for (i, e) in elements.iter().enumerate() {
                let dev = e.hermiticity_deviation();
                if dev > TOL_COMPLETE {
                    report.push(&format!("element {i} hermiticity"), dev);
                }
                // spectrum of the Hermitian part; meaningful even when the
                // hermiticity check just fired
                let min_ev = e.hermitian_part().min_eigenvalue();
                if min_ev < -TOL_PSD {
                    report.push(&format!("element {i} psd"), min_ev);
                }
                sum = sum.add(e);
            }
            let dev = sum.sub(&ComplexMatrix::identity(d)).norm_max();
            if dev > TOL_COMPLETE {
                report.push("completeness", dev);
            }
        }
        Validatable::Kraus(ops) => {
            let in_dim = ops.first().map_or(0, |k| k.cols());
            let mut sum = ComplexMatrix::zeros(in_dim, in_dim);
            for k in ops {
                sum = sum.add(&k.dagger().matmul(k));
            }
            let dev = sum.sub(&ComplexMatrix::identity(in_dim)).norm_max();
            if dev > TOL_COMPLETE {
                report.push("completeness", dev);
            }
        }
    }
    report
}

/// Reorders the tensor factors of an operator on a product space.
/// `dims` are the factor dimensions in the current order; `perm[k]` says
/// where current factor k goes in the new order.
pub fn permute_systems(m: &ComplexMatrix, dims: &[usize], perm: &[usize]) -> ComplexMatrix {
    let n = dims.len();
    assert_eq!(perm.len(), n);
    let total: usize = dims.iter().product();
    assert_eq!(m.rows(), total);
    let mut new_dims = vec![0usize; n];
    for k in 0..n {
        new_dims[perm[k]] = dims[k];
    }
    // strides in the new ordering
    let mut new_strides = vec![1usize; n];
    for k in (0..n - 1).rev() {
        new_strides[k] = new_strides[k + 1] * new_dims[k + 1];
    }
    // map a multi-index in the old ordering to a flat new index
    let old_to_new = |mut idx: usize, dims: &[usize]| -> usize {
        let mut digits = vec![0usize; n];
        for k in (0..n).rev() {
            digits[k] = idx % dims[k];
            idx /= dims[k];
        }
        let mut out = 0usize;
        for k in 0..n {
            out += digits[k] * new_strides[perm[k]];
        }
        out
    };
    let mut out = ComplexMatrix::zeros(total, total);
    for i in 0..total {
        let ni = old_to_new(i, dims);
        for j in 0..total {
            let nj = old_to_new(j, dims);
            out.set(ni, nj, m.get(i, j));
        }
    }
    out
}

/// Pauli matrices and the qubit identity.
pub fn pauli() -> [ComplexMatrix; 4] {
    let i = Complex64::new(0.0, 1.0);
    let o = Complex64::ZERO;
    let l = Complex64::ONE;
    [
        ComplexMatrix::from_rows(2, 2, &[l, o, o, l]),
        ComplexMatrix::from_rows(2, 2, &[o, l, l, o]),
        ComplexMatrix::from_rows(2, 2, &[o, -i, i, o]),
        ComplexMatrix::from_rows(2, 2, &[l, o, o, -l]),
    ]
}

/// Generalized Pauli (shift/clock) unitaries X^k Z^l on dimension d,
/// indexed by m = k*d + l. An orthogonal unitary basis.
pub fn generalized_pauli(d: usize, m: usize) -> ComplexMatrix {
    let k = m / d;
    let l = m % d;
    let omega = 2.0 * std::f64::consts::PI / d as f64;
    ComplexMatrix::from_fn(d, d, |i, j| {
        if i == (j + k) % d {
            Complex64::from_polar(1.0, omega * (l * j) as f64)
        } else {
            Complex64::ZERO
        }
    })
}

/// Generalized Bell basis on d (x) d: (U_m (x) I)|phi+>, m in [d^2].
pub fn bell_basis(d: usize) -> Vec<PureState> {
    let scale = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
    (0..d * d)
        .map(|m| {
            let u = generalized_pauli(d, m);
            // (U (x) I)|phi+> has amplitude U[i,j]/sqrt(d) at |ij>
            let mut amplitudes = vec![Complex64::ZERO; d * d];
            for i in 0..d {
                for j in 0..d {
                    amplitudes[i * d + j] = u.get(i, j) * scale;
                }
            }
            PureState::normalized(amplitudes).expect("Bell vector is normalized")
        })
        .collect()
}

#[cfg(test)]
mod tests;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::de::{self, Deserializer, MapAccess, Visitor};
use serde::ser::{SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

/// Dense complex matrix. Carrier for every operator in the crate.
///
/// Serialized as `{"rows": n, "cols": m, "entries": [[re, im], ...]}` with
/// entries in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix(pub(crate) DMatrix<Complex64>);

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self(DMatrix::zeros(rows, cols))
    }

    pub fn identity(dim: usize) -> Self {
        Self(DMatrix::identity(dim, dim))
    }

    /// Builds from a row-major slice of entries.
    pub fn from_rows(rows: usize, cols: usize, entries: &[Complex64]) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count != rows*cols");
        Self(DMatrix::from_row_slice(rows, cols, entries))
    }

    /// Builds from a row-major slice of real entries.
    pub fn from_real(rows: usize, cols: usize, entries: &[f64]) -> Self {
        let c: Vec<Complex64> = entries.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::from_rows(rows, cols, &c)
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> Complex64) -> Self {
        Self(DMatrix::from_fn(rows, cols, f))
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.0[(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.0[(i, j)] = v;
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    pub fn trace(&self) -> Complex64 {
        self.0.diagonal().iter().sum()
    }

    pub fn dagger(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    pub fn conj(&self) -> Self {
        Self(self.0.map(|c| c.conj()))
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.map(|c| c * s))
    }

    pub fn scale_c(&self, s: Complex64) -> Self {
        Self(self.0.map(|c| c * s))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(&self.0 - &other.0)
    }

    pub fn matmul(&self, other: &Self) -> Self {
        Self(&self.0 * &other.0)
    }

    /// Kronecker product.
    pub fn kron(&self, other: &Self) -> Self {
        Self(self.0.kronecker(&other.0))
    }

    /// Largest absolute value over entries.
    pub fn norm_max(&self) -> f64 {
        self.0.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        if self.rows() != self.cols() {
            return f64::INFINITY;
        }
        (&self.0 - self.0.adjoint()).iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Hermitian part (A + A^dag)/2.
    pub fn hermitian_part(&self) -> Self {
        Self((&self.0 + self.0.adjoint()).map(|c| c * 0.5))
    }

    /// Eigenvalues and eigenvectors of a Hermitian matrix, ascending.
    /// Columns of the returned matrix are the eigenvectors.
    ///
    /// Cyclic complex Jacobi: slower than a tridiagonalization for large
    /// matrices but dependable on the highly degenerate spectra that tensor
    /// products of projectors produce.
    pub fn eigh(&self) -> (Vec<f64>, ComplexMatrix) {
        debug_assert!(
            self.hermiticity_deviation() < 1e-7 * (1.0 + self.norm_max()),
            "eigh needs Hermitian input"
        );
        let n = self.rows();
        let mut a = self.0.clone();
        let mut v: DMatrix<Complex64> = DMatrix::identity(n, n);
        let scale = self.norm_max().max(1e-300);
        for _sweep in 0..60 {
            let mut off = 0.0f64;
            for p in 0..n {
                for q in (p + 1)..n {
                    off = off.max(a[(p, q)].norm());
                }
            }
            if off <= 1e-15 * scale {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = a[(p, q)];
                    let b = apq.norm();
                    if b <= 1e-18 * scale {
                        continue;
                    }
                    let app = a[(p, p)].re;
                    let aqq = a[(q, q)].re;
                    let phase = apq / b;
                    let tau = (aqq - app) / (2.0 * b);
                    let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = t * c;
                    // columns: col_p' = c col_p - s conj(phase) col_q
                    //          col_q' = s phase col_p + c col_q
                    for i in 0..n {
                        let aip = a[(i, p)];
                        let aiq = a[(i, q)];
                        a[(i, p)] = aip * c - aiq * s * phase.conj();
                        a[(i, q)] = aip * s * phase + aiq * c;
                        let vip = v[(i, p)];
                        let viq = v[(i, q)];
                        v[(i, p)] = vip * c - viq * s * phase.conj();
                        v[(i, q)] = vip * s * phase + viq * c;
                    }
                    for j in 0..n {
                        let apj = a[(p, j)];
                        let aqj = a[(q, j)];
                        a[(p, j)] = apj * c - aqj * s * phase;
                        a[(q, j)] = apj * s * phase.conj() + aqj * c;
                    }
                }
            }
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&x, &y| a[(x, x)].re.partial_cmp(&a[(y, y)].re).unwrap());
        let vals: Vec<f64> = order.iter().map(|&k| a[(k, k)].re).collect();
        let mut vecs = DMatrix::zeros(n, n);
        for (new_col, &old_col) in order.iter().enumerate() {
            vecs.set_column(new_col, &v.column(old_col).into_owned());
        }
        (vals, Self(vecs))
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let (vals, _) = self.eigh();
        vals.first().copied().unwrap_or(0.0)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        let (vals, _) = self.eigh();
        vals.last().copied().unwrap_or(0.0)
    }

    /// Rebuilds sum_k f(lambda_k) |v_k><v_k| for a Hermitian matrix.
    pub fn hermitian_map(&self, f: impl Fn(f64) -> f64) -> Self {
        let (vals, vecs) = self.eigh();
        let n = self.rows();
        let diag = DVector::from_iterator(n, vals.iter().map(|&l| Complex64::new(f(l), 0.0)));
        let scaled = &vecs.0 * DMatrix::from_diagonal(&diag);
        Self(&scaled * vecs.0.adjoint())
    }

    /// PSD square root (negative eigenvalues clipped to zero).
    pub fn sqrt_psd(&self) -> Self {
        self.hermitian_map(|l| if l > 0.0 { l.sqrt() } else { 0.0 })
    }

    /// Projector onto the strictly positive eigenspace.
    pub fn positive_part_projector(&self) -> Self {
        self.hermitian_map(|l| if l > 1e-12 { 1.0 } else { 0.0 })
    }

    /// Trace norm ||A||_1 of a Hermitian matrix.
    pub fn trace_norm_hermitian(&self) -> f64 {
        let (vals, _) = self.eigh();
        vals.iter().map(|l| l.abs()).sum()
    }

    /// Inverse of a Hermitian positive definite matrix.
    pub fn inv_hpd(&self) -> Option<Self> {
        self.0.clone().try_inverse().map(Self)
    }

    /// Re Tr(A^dag B), the Hilbert-Schmidt inner product for Hermitian pairs.
    pub fn hs_inner(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a.conj() * b).re)
            .sum()
    }
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("ComplexMatrix", 3)?;
        s.serialize_field("rows", &self.rows())?;
        s.serialize_field("cols", &self.cols())?;
        let entries: Vec<[f64; 2]> = (0..self.rows())
            .flat_map(|i| (0..self.cols()).map(move |j| (i, j)))
            .map(|(i, j)| {
                let c = self.get(i, j);
                [c.re, c.im]
            })
            .collect();
        s.serialize_field("entries", &entries)?;
        s.end()
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct MatVisitor;
        impl<'de> Visitor<'de> for MatVisitor {
            type Value = ComplexMatrix;

            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("a matrix object with rows, cols, entries")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<Self::Value, A::Error> {
                let mut rows: Option<usize> = None;
                let mut cols: Option<usize> = None;
                let mut entries: Option<Vec<[f64; 2]>> = None;
                while let Some(key) = map.next_key::<String>()? {
                    match key.as_str() {
                        "rows" => rows = Some(map.next_value()?),
                        "cols" => cols = Some(map.next_value()?),
                        "entries" => entries = Some(map.next_value()?),
                        other => return Err(de::Error::unknown_field(other, &["rows", "cols", "entries"])),
                    }
                }
                let rows = rows.ok_or_else(|| de::Error::missing_field("rows"))?;
                let cols = cols.ok_or_else(|| de::Error::missing_field("cols"))?;
                let entries = entries.ok_or_else(|| de::Error::missing_field("entries"))?;
                if entries.len() != rows * cols {
                    return Err(de::Error::invalid_length(entries.len(), &"rows*cols entries"));
                }
                let c: Vec<Complex64> = entries.iter().map(|e| Complex64::new(e[0], e[1])).collect();
                Ok(ComplexMatrix::from_rows(rows, cols, &c))
            }
        }
        deserializer.deserialize_struct("ComplexMatrix", &["rows", "cols", "entries"], MatVisitor)
    }
}

use super::{ComplexMatrix, DensityState, PureState};
use num_complex::Complex64;
use rand::Rng;

fn randn(rng: &mut impl Rng) -> f64 {
    // Box-Muller; avoids pulling in rand_distr for one distribution.
    let u1: f64 = rng.gen_range(1e-12..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

fn ginibre(rng: &mut impl Rng, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| Complex64::new(randn(rng), randn(rng)))
}

/// Haar-random pure state.
pub fn random_pure_state(rng: &mut impl Rng, dim: usize) -> PureState {
    let v: Vec<Complex64> = (0..dim).map(|_| Complex64::new(randn(rng), randn(rng))).collect();
    PureState::normalized(v).expect("Gaussian vector is nonzero")
}

/// Haar-random unitary via QR of a Ginibre matrix (Gram-Schmidt with
/// phase fixing).
pub fn haar_unitary(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
    let g = ginibre(rng, dim, dim);
    let mut cols: Vec<Vec<Complex64>> = (0..dim)
        .map(|j| (0..dim).map(|i| g.get(i, j)).collect())
        .collect();
    for j in 0..dim {
        for k in 0..j {
            let proj: Complex64 = (0..dim).map(|i| cols[k][i].conj() * cols[j][i]).sum();
            for i in 0..dim {
                let sub = proj * cols[k][i];
                cols[j][i] -= sub;
            }
        }
        let norm: f64 = cols[j].iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        for c in cols[j].iter_mut() {
            *c /= norm;
        }
    }
    ComplexMatrix::from_fn(dim, dim, |i, j| cols[j][i])
}

/// Random full-rank density state (normalized Wishart).
pub fn random_density(rng: &mut impl Rng, dim: usize) -> DensityState {
    let g = ginibre(rng, dim, dim);
    let w = g.matmul(&g.dagger());
    let tr = w.trace().re;
    DensityState::new(w.scale(1.0 / tr)).expect("Wishart matrix is a valid density")
}

/// Haar-random orthonormal qubit basis as a pair of pure states.
pub fn random_qubit_basis(rng: &mut impl Rng) -> (PureState, PureState) {
    let v = random_pure_state(rng, 2);
    let vp = v.qubit_orthogonal().expect("dim 2");
    (v, vp)
}

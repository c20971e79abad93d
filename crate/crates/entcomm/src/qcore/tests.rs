use super::*;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn tensor_identity_case() {
    let i2 = ComplexMatrix::identity(2);
    let t = tensor(&i2, &i2);
    assert_eq!(t, ComplexMatrix::identity(4));
}

#[test]
fn tensor_basis_case() {
    let zero = PureState::basis(2, 0);
    let one = PureState::basis(2, 1);
    let prod = zero.tensor(&one);
    assert_eq!(prod.amplitudes()[1], Complex64::ONE);
    assert!(prod.amplitudes().iter().enumerate().all(|(k, a)| k == 1 || a.norm() == 0.0));
}

#[test]
fn tensor_dims_multiply() {
    let a = ComplexMatrix::zeros(2, 2);
    let b = ComplexMatrix::zeros(3, 3);
    let t = tensor(&a, &b);
    assert_eq!((t.rows(), t.cols()), (6, 6));
}

#[test]
fn partial_trace_bell_gives_maximally_mixed() {
    let phi = max_entangled(2).projector();
    let red = partial_trace(&phi, (2, 2), Keep::B).unwrap();
    assert!(red.sub(&ComplexMatrix::identity(2).scale(0.5)).norm_max() < 1e-12);
    let red_a = partial_trace(&phi, (2, 2), Keep::A).unwrap();
    assert!(red_a.sub(&ComplexMatrix::identity(2).scale(0.5)).norm_max() < 1e-12);
}

#[test]
fn partial_trace_product_factorizes() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..20 {
        let rho = random_density(&mut rng, 2);
        let sigma = random_density(&mut rng, 3);
        let joint = tensor(rho.matrix(), sigma.matrix());
        let back = partial_trace(&joint, (2, 3), Keep::A).unwrap();
        // Tr_B(rho (x) sigma) = rho * Tr(sigma) = rho
        assert!(back.sub(rho.matrix()).norm_max() < 1e-10);
    }
}

#[test]
fn partial_trace_basis_case() {
    let s01 = PureState::basis(2, 0).tensor(&PureState::basis(2, 1)).projector();
    let red = partial_trace(&s01, (2, 2), Keep::A).unwrap();
    assert!(red.sub(&PureState::basis(2, 0).projector()).norm_max() < 1e-14);
}

#[test]
fn partial_trace_rejects_bad_dims() {
    let m = ComplexMatrix::zeros(5, 5);
    assert!(partial_trace(&m, (2, 2), Keep::A).is_err());
}

#[test]
fn make_entangled_symmetry_point_is_bell() {
    let s = make_entangled(std::f64::consts::FRAC_PI_4, 2);
    let phi = max_entangled(2);
    assert!((s.inner(&phi).norm() - 1.0).abs() < 1e-12);
}

#[test]
fn make_entangled_theta_zero_is_product() {
    let s = make_entangled(0.0, 2);
    assert!((s.amplitudes()[0] - Complex64::ONE).norm() < 1e-15);
}

#[test]
fn make_entangled_d3_uniform() {
    let s = make_entangled(0.3, 3);
    let a = 1.0 / 3.0f64.sqrt();
    for i in 0..3 {
        assert!((s.amplitudes()[i * 3 + i] - c(a, 0.0)).norm() < 1e-12);
    }
}

#[test]
fn conjugate_flips_phases() {
    let s = PureState::new(vec![c(std::f64::consts::FRAC_1_SQRT_2, 0.0), c(0.0, std::f64::consts::FRAC_1_SQRT_2)]).unwrap();
    let sc = conjugate(&s);
    assert!((sc.amplitudes()[1] - c(0.0, -std::f64::consts::FRAC_1_SQRT_2)).norm() < 1e-15);
    // real states are fixed points
    let r = PureState::real_qubit(0.7);
    assert_eq!(conjugate(&r), r);
    // involution
    assert_eq!(conjugate(&conjugate(&s)), s);
}

#[test]
fn apply_kraus_identity_channel() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let rho = random_density(&mut rng, 3);
    let id = KrausChannel::unitary(ComplexMatrix::identity(3)).unwrap();
    let out = apply_kraus(&id, &rho).unwrap();
    assert!(out.matrix().sub(rho.matrix()).norm_max() < 1e-14);
}

#[test]
fn apply_kraus_bit_flip() {
    let [_, x, _, _] = pauli();
    let ch = KrausChannel::unitary(x).unwrap();
    let out = apply_kraus(&ch, &PureState::basis(2, 0).to_density()).unwrap();
    assert!(out.matrix().sub(&PureState::basis(2, 1).projector()).norm_max() < 1e-14);
}

#[test]
fn apply_kraus_depolarizing_four_kraus() {
    // Oracle: evaluate the four-Kraus representation {sigma_k / 2} directly.
    let paulis = pauli();
    let rho = PureState::basis(2, 0).to_density();
    let mut expected = ComplexMatrix::zeros(2, 2);
    for p in &paulis {
        expected = expected.add(&p.matmul(rho.matrix()).matmul(&p.dagger()).scale(0.25));
    }
    let ch = KrausChannel::new(paulis.iter().map(|p| p.scale(0.5)).collect()).unwrap();
    let out = apply_kraus(&ch, &rho).unwrap();
    assert!(out.matrix().sub(&expected).norm_max() < 1e-14);
    assert!(out.matrix().sub(&ComplexMatrix::identity(2).scale(0.5)).norm_max() < 1e-14);
}

#[test]
fn apply_kraus_preserves_trace_and_psd() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..100 {
        let rho = random_density(&mut rng, 2);
        let u = haar_unitary(&mut rng, 2);
        // random 2-Kraus channel: {sqrt(p) U, sqrt(1-p) V}
        let v = haar_unitary(&mut rng, 2);
        let p: f64 = rng.gen_range(0.0..1.0);
        let ch = KrausChannel::new(vec![u.scale(p.sqrt()), v.scale((1.0 - p).sqrt())]).unwrap();
        let out = apply_kraus(&ch, &rho).unwrap();
        assert!((out.matrix().trace().re - 1.0).abs() < 1e-12);
        assert!(out.matrix().min_eigenvalue() > -1e-12);
    }
}

#[test]
fn apply_kraus_dim_mismatch_is_error() {
    let id3 = KrausChannel::unitary(ComplexMatrix::identity(3)).unwrap();
    let rho2 = DensityState::maximally_mixed(2);
    assert!(apply_kraus(&id3, &rho2).is_err());
}

#[test]
fn validate_clean_z_basis_povm() {
    let povm = Povm::from_basis(&[PureState::basis(2, 0), PureState::basis(2, 1)]).unwrap();
    let report = validate(Validatable::Povm(povm.elements()));
    assert!(report.is_clean());
}

#[test]
fn validate_flags_negative_eigenvalue() {
    let bad = ComplexMatrix::from_real(2, 2, &[-0.1, 0.0, 0.0, 1.1]);
    let good = ComplexMatrix::identity(2).sub(&bad);
    let report = validate(Validatable::Povm(&[bad, good]));
    assert!(report.violations.iter().any(|v| v.kind.contains("psd") && (v.magnitude + 0.1).abs() < 1e-12));
}

#[test]
fn validate_flags_incomplete_kraus() {
    let k = ComplexMatrix::identity(2).scale(0.9f64.sqrt());
    let report = validate(Validatable::Kraus(&[k]));
    assert!(report.violations.iter().any(|v| v.kind == "completeness"));
}

#[test]
fn povm_probabilities_sum_to_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..30 {
        let u = haar_unitary(&mut rng, 3);
        let elements: Vec<ComplexMatrix> = (0..3)
            .map(|k| {
                let col = ComplexMatrix::from_fn(3, 1, |i, _| u.get(i, k));
                col.matmul(&col.dagger())
            })
            .collect();
        let povm = Povm::new(elements).unwrap();
        let rho = random_density(&mut rng, 3);
        let total: f64 = povm
            .elements()
            .iter()
            .map(|e| e.matmul(rho.matrix()).trace().re)
            .sum();
        assert!((total - 1.0).abs() < 1e-9);
    }
}

#[test]
fn permute_systems_swaps_factors() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let a = random_density(&mut rng, 2);
    let b = random_density(&mut rng, 3);
    let ab = tensor(a.matrix(), b.matrix());
    let ba = permute_systems(&ab, &[2, 3], &[1, 0]);
    assert!(ba.sub(&tensor(b.matrix(), a.matrix())).norm_max() < 1e-12);
}

#[test]
fn bell_basis_is_orthonormal() {
    for d in [2usize, 3] {
        let basis = bell_basis(d);
        assert_eq!(basis.len(), d * d);
        for (i, u) in basis.iter().enumerate() {
            for (j, v) in basis.iter().enumerate() {
                let ip = u.inner(v).norm();
                if i == j {
                    assert!((ip - 1.0).abs() < 1e-12);
                } else {
                    assert!(ip < 1e-12);
                }
            }
        }
    }
}

#[test]
fn generalized_paulis_are_unitary() {
    for d in [2usize, 3] {
        for m in 0..d * d {
            let u = generalized_pauli(d, m);
            assert!(u.matmul(&u.dagger()).sub(&ComplexMatrix::identity(d)).norm_max() < 1e-12);
        }
    }
}

#[test]
fn matrix_json_round_trip() {
    let m = ComplexMatrix::from_rows(1, 2, &[c(0.5, -1.5), c(0.0, 2.0)]);
    let json = serde_json::to_string(&m).unwrap();
    assert_eq!(json, r#"{"rows":1,"cols":2,"entries":[[0.5,-1.5],[0.0,2.0]]}"#);
    let back: ComplexMatrix = serde_json::from_str(&json).unwrap();
    assert_eq!(back, m);
}

#[test]
fn sqrt_psd_squares_back() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..10 {
        let rho = random_density(&mut rng, 3);
        let s = rho.matrix().sqrt_psd();
        assert!(s.matmul(&s).sub(rho.matrix()).norm_max() < 1e-10);
    }
}

use rand::Rng;

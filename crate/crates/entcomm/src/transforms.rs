//! Constructive protocol conversions: prepare-and-measure to
//! entanglement-assisted classical (steering on a Bell pair with an outcome
//! flip), entanglement-assisted classical to quantum (dense coding of the
//! message), and entanglement-assisted quantum to classical (teleporting the
//! sent wire). Each conversion preserves the correlation table and the
//! distinguishability, and the report carries the measured deviations.

use crate::protocols::{
    eacc_correlations, eacc_distinguishability, eaqc_correlations, eaqc_distinguishability,
    qc_correlations, qc_distinguishability, AliceDevice, EaccProtocol, EaqcProtocol, ProtocolError,
    QcProtocol,
};
use crate::qcore::{
    bell_basis, generalized_pauli, max_entangled, permute_systems, ComplexMatrix, DensityState,
    KrausChannel, Povm, PureState, QcoreError,
};
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TransformError {
    #[error("state {0} is not a pure qubit state")]
    NotPureQubit(usize),
    #[error("Bob measurement {0} is not projective")]
    NotProjective(usize),
    #[error("message count must be >= 1")]
    NoMessages,
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
    #[error(transparent)]
    Qcore(#[from] QcoreError),
}

/// Before/after comparison of a converted protocol.
#[derive(Debug, Clone)]
pub struct TransformReport {
    pub max_table_deviation: f64,
    pub distinguishability_before: f64,
    pub distinguishability_after: f64,
    pub dims_used: (usize, usize),
}

impl TransformReport {
    pub fn distinguishability_shift(&self) -> f64 {
        (self.distinguishability_after - self.distinguishability_before).abs()
    }
}

/// Converts a pure-qubit, projective-Bob prepare-and-measure protocol into
/// an entanglement-assisted classical one on |phi+>: Alice measures
/// {|z_x*><z_x*|, orth} and sends the outcome; Bob keeps his measurement on
/// message '1' and reverses its outcome on message '2'.
pub fn qc_to_eacc(
    p: &QcProtocol,
    priors: &[f64],
) -> Result<(EaccProtocol, TransformReport), TransformError> {
    // extract the pure qubit states
    let mut kets: Vec<PureState> = Vec::with_capacity(p.states.len());
    for (i, rho) in p.states.iter().enumerate() {
        if rho.dim() != 2 {
            return Err(TransformError::NotPureQubit(i));
        }
        let m = rho.matrix();
        let purity = m.matmul(m).trace().re;
        if (purity - 1.0).abs() > 1e-9 {
            return Err(TransformError::NotPureQubit(i));
        }
        let (_, vecs) = m.eigh();
        let top = ComplexMatrix::from_fn(2, 1, |r, _| vecs.get(r, 1));
        kets.push(
            PureState::normalized(vec![top.get(0, 0), top.get(1, 0)])
                .map_err(|_| TransformError::NotPureQubit(i))?,
        );
    }
    // Bob must be projective: every element a projector
    for (y, povm) in p.measurements.iter().enumerate() {
        for e in povm.elements() {
            if e.matmul(e).sub(e).norm_max() > 1e-9 {
                return Err(TransformError::NotProjective(y));
            }
        }
    }
    let alice: Vec<Povm> = kets
        .iter()
        .map(|k| {
            let conj = k.conjugate();
            let orth = conj.qubit_orthogonal().expect("qubit");
            Povm::from_basis(&[conj, orth]).expect("conjugate basis is a basis")
        })
        .collect();
    let flipped: Vec<Povm> = p.measurements.iter().map(flip_projective).collect();
    let eacc = EaccProtocol {
        shared: max_entangled(2).to_density(),
        dims: (2, 2),
        alice: AliceDevice::Povms(alice),
        message_fn: vec![vec![0, 1]; p.states.len()],
        n_messages: 2,
        bob_povms: p
            .measurements
            .iter()
            .cloned()
            .zip(flipped)
            .map(|(keep, flip)| vec![keep, flip])
            .collect(),
    };
    let before = qc_correlations(p)?;
    let after = eacc_correlations(&eacc)?;
    let report = TransformReport {
        max_table_deviation: before.max_deviation(&after),
        distinguishability_before: qc_distinguishability(p, priors)?,
        distinguishability_after: eacc_distinguishability(&eacc, priors)?,
        dims_used: (2, 2),
    };
    Ok((eacc, report))
}

/// Outcome reversal of a projective qubit measurement: rank-one elements go
/// to their orthogonal complement, trivial (zero or identity) elements stay.
fn flip_projective(povm: &Povm) -> Povm {
    let elements = povm
        .elements()
        .iter()
        .map(|e| {
            let r = e.trace().re.round() as i64;
            if r == 1 {
                ComplexMatrix::identity(2).sub(e)
            } else {
                e.clone()
            }
        })
        .collect();
    Povm::new(elements).expect("flipped projective POVM stays complete")
}

/// Converts an entanglement-assisted classical protocol into a quantum one
/// by dense-coding the R-valued message through an extra maximally entangled
/// pair of side dimension ceil(sqrt(R)).
pub fn eacc_to_eaqc(
    p: &EaccProtocol,
) -> Result<(EaqcProtocol, TransformReport), TransformError> {
    let r_count = p.n_messages;
    if r_count == 0 {
        return Err(TransformError::NoMessages);
    }
    let (da, db) = p.dims;
    let dd = (r_count as f64).sqrt().ceil() as usize;
    let dd = dd.max(2);
    // shared = sigma_AB (x) phi+_{A'B'}, reordered to (A A') (x) (B B')
    let phi = max_entangled(dd).to_density();
    let big = crate::qcore::tensor(p.shared.matrix(), phi.matrix());
    let reordered = permute_systems(&big, &[da, db, dd, dd], &[0, 2, 1, 3]);
    let shared = DensityState::new(reordered.hermitian_part())?;
    // channels: measure, dense-code the message on A', send A', discard A
    let kraus_lists = alice_kraus_lists(p);
    let mut channels = Vec::with_capacity(kraus_lists.len());
    for (x, outcomes) in kraus_lists.iter().enumerate() {
        let mut ops = Vec::new();
        for (a, klist) in outcomes.iter().enumerate() {
            let u = generalized_pauli(dd, p.message_fn[x][a]);
            for k in klist {
                let ku = crate::qcore::tensor(k, &u);
                for j in 0..da {
                    // (<j|_A (x) I_{A'}) after the measurement branch
                    let bra = ComplexMatrix::from_fn(dd, da * dd, |r, c| {
                        if c == j * dd + r {
                            Complex64::ONE
                        } else {
                            Complex64::ZERO
                        }
                    });
                    ops.push(bra.matmul(&ku));
                }
            }
        }
        channels.push(KrausChannel::new(ops)?);
    }
    // Bob: Bell-measure (sent, B') to decode m, then the original N_{z|y,m}.
    // Factor order of his POVM space: (sent A', B, B').
    let bell: Vec<ComplexMatrix> = bell_basis(dd).iter().map(|b| b.projector()).collect();
    let n_y = p.bob_povms.len();
    let n_z = p.bob_povms[0][0].outcomes();
    let mut bob_povms = Vec::with_capacity(n_y);
    for y in 0..n_y {
        let mut elements = vec![ComplexMatrix::zeros(dd * db * dd, dd * db * dd); n_z];
        for m in 0..dd * dd {
            if m < r_count {
                for z in 0..n_z {
                    let kron = crate::qcore::tensor(
                        &bell[m],
                        p.bob_povms[y][m].element(z),
                    );
                    // kron factors: (A', B', B) -> reorder to (A', B, B')
                    let fixed = permute_systems(&kron, &[dd, dd, db], &[0, 2, 1]);
                    elements[z] = elements[z].add(&fixed);
                }
            } else {
                // unused dense-coding symbol: never emitted; decode as z = 0
                let kron = crate::qcore::tensor(&bell[m], &ComplexMatrix::identity(db));
                let fixed = permute_systems(&kron, &[dd, dd, db], &[0, 2, 1]);
                elements[0] = elements[0].add(&fixed);
            }
        }
        bob_povms.push(Povm::new(elements)?);
    }
    let eaqc = EaqcProtocol { shared, dims: (da * dd, db * dd), channels, bob_povms };
    let before = eacc_correlations(p)?;
    let after = eaqc_correlations(&eaqc)?;
    let n_x = p.alice.n_inputs();
    let priors = vec![1.0 / n_x as f64; n_x];
    let report = TransformReport {
        max_table_deviation: before.max_deviation(&after),
        distinguishability_before: eacc_distinguishability(p, &priors)?,
        distinguishability_after: eaqc_distinguishability(&eaqc, &priors)?,
        dims_used: (da * dd, db * dd),
    };
    Ok((eaqc, report))
}

/// The Kraus decomposition of Alice's device, one list per outcome. Plain
/// POVMs enter with the element itself as the single Kraus operator,
/// matching the conditional-state convention of the distinguishability
/// functional.
fn alice_kraus_lists(p: &EaccProtocol) -> Vec<Vec<Vec<ComplexMatrix>>> {
    match &p.alice {
        AliceDevice::Povms(povms) => povms
            .iter()
            .map(|povm| povm.elements().iter().map(|e| vec![e.clone()]).collect())
            .collect(),
        AliceDevice::Instruments(instr) => instr.clone(),
    }
}

/// Converts an entanglement-assisted quantum protocol into a classical one:
/// Alice applies her channel, teleports the output wire through an extra
/// maximally entangled pair, and sends the Bell outcome; Bob applies the
/// matching Pauli correction before measuring.
pub fn eaqc_to_eacc(
    p: &EaqcProtocol,
) -> Result<(EaccProtocol, TransformReport), TransformError> {
    let (da, db) = p.dims;
    let d_out = p.channels[0].out_dim();
    // shared = sigma_AB (x) phi+_{A''B''} reordered to (A A'') (x) (B B'')
    let phi = max_entangled(d_out).to_density();
    let big = crate::qcore::tensor(p.shared.matrix(), phi.matrix());
    let reordered = permute_systems(&big, &[da, db, d_out, d_out], &[0, 2, 1, 3]);
    let shared = DensityState::new(reordered.hermitian_part())?;
    let bell: Vec<ComplexMatrix> = bell_basis(d_out).iter().map(|b| b.projector()).collect();
    let n_messages = d_out * d_out;
    // Alice instrument per x: apply the channel on A, Bell-measure
    // (channel output, A'')
    let mut instruments = Vec::with_capacity(p.channels.len());
    for ch in &p.channels {
        let mut outcomes = Vec::with_capacity(n_messages);
        for bell_m in bell.iter() {
            let mut klist = Vec::new();
            for k in ch.kraus_ops() {
                // (K (x) I_{A''}): (d_out * d_out) x (da * d_out)
                let lifted = crate::qcore::tensor(k, &ComplexMatrix::identity(d_out));
                klist.push(bell_m.matmul(&lifted));
            }
            outcomes.push(klist);
        }
        instruments.push(outcomes);
    }
    // Bob: correction U_m on B'', then the original N_{z|y} read on
    // (B'' as the sent wire, B). His POVM space order is (B, B'').
    let mut bob_povms = Vec::with_capacity(p.bob_povms.len());
    for povm in &p.bob_povms {
        let mut per_message = Vec::with_capacity(n_messages);
        for m in 0..n_messages {
            let u = generalized_pauli(d_out, m);
            let corr = crate::qcore::tensor(&ComplexMatrix::identity(db), &u);
            let elements = povm
                .elements()
                .iter()
                .map(|e| {
                    // original element on (sent, B) -> (B, B'') with B'' as sent
                    let moved = permute_systems(e, &[d_out, db], &[1, 0]);
                    corr.dagger().matmul(&moved).matmul(&corr).hermitian_part()
                })
                .collect();
            per_message.push(Povm::new(elements)?);
        }
        bob_povms.push(per_message);
    }
    let eacc = EaccProtocol {
        shared,
        dims: (da * d_out, db * d_out),
        alice: AliceDevice::Instruments(instruments),
        message_fn: vec![(0..n_messages).collect(); p.channels.len()],
        n_messages,
        bob_povms,
    };
    let before = eaqc_correlations(p)?;
    let after = eacc_correlations(&eacc)?;
    let n_x = p.channels.len();
    let priors = vec![1.0 / n_x as f64; n_x];
    let report = TransformReport {
        max_table_deviation: before.max_deviation(&after),
        distinguishability_before: eaqc_distinguishability(p, &priors)?,
        distinguishability_after: eacc_distinguishability(&eacc, &priors)?,
        dims_used: (da * d_out, db * d_out),
    };
    Ok((eacc, report))
}

/// Message statistics of an EACC protocol: p(message | x).
pub fn message_distribution(p: &EaccProtocol) -> Result<Vec<Vec<f64>>, ProtocolError> {
    p.check()?;
    let n_x = p.alice.n_inputs();
    let n_a = p.alice.n_outcomes();
    let (da, db) = p.dims;
    let mut out = vec![vec![0.0; p.n_messages]; n_x];
    let kraus = alice_kraus_lists(p);
    for x in 0..n_x {
        for a in 0..n_a {
            let mut prob = 0.0;
            for k in &kraus[x][a] {
                let big = k.kron(&ComplexMatrix::identity(db));
                let moved = big.matmul(p.shared.matrix()).matmul(&big.dagger());
                let _ = da;
                prob += moved.trace().re;
            }
            out[x][p.message_fn[x][a]] += prob;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocols::success_metric;
    use crate::qcore::{haar_unitary, pauli, random_pure_state, random_qubit_basis};
    use crate::tasks::{rac_qc_protocol, rac_task};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_qc_protocol(rng: &mut ChaCha8Rng, n_states: usize, n_meas: usize) -> QcProtocol {
        let states = (0..n_states)
            .map(|_| random_pure_state(rng, 2).to_density())
            .collect();
        let measurements = (0..n_meas)
            .map(|_| {
                let (v, vp) = random_qubit_basis(rng);
                Povm::from_basis(&[v, vp]).unwrap()
            })
            .collect();
        QcProtocol { states, measurements }
    }

    #[test]
    fn rac22_image_keeps_success_and_distinguishability() {
        let p = rac_qc_protocol(2);
        let t = rac_task(2, 2);
        let (eacc, report) = qc_to_eacc(&p, &t.priors).unwrap();
        assert!(report.max_table_deviation < 1e-9, "{report:?}");
        assert!(report.distinguishability_shift() < 1e-6, "{report:?}");
        let s = success_metric(&t, &eacc_correlations(&eacc).unwrap());
        assert!((s - 0.5 * (1.0 + 1.0 / 2.0f64.sqrt())).abs() < 1e-9);
        assert!((report.distinguishability_after - 0.5).abs() < 1e-6);
    }

    #[test]
    fn single_state_z_measurement_preserved_exactly() {
        let p = QcProtocol {
            states: vec![PureState::basis(2, 0).to_density()],
            measurements: vec![
                Povm::from_basis(&[PureState::basis(2, 0), PureState::basis(2, 1)]).unwrap(),
            ],
        };
        let (_, report) = qc_to_eacc(&p, &[1.0]).unwrap();
        assert!(report.max_table_deviation < 1e-12);
    }

    #[test]
    fn random_qubit_protocols_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for k in 0..10 {
            let n_states = rng.gen_range(2..=5usize);
            let n_meas = rng.gen_range(1..=3usize);
            let p = random_qc_protocol(&mut rng, n_states, n_meas);
            let priors = vec![1.0 / n_states as f64; n_states];
            let (_, report) = qc_to_eacc(&p, &priors).unwrap();
            assert!(report.max_table_deviation < 1e-9, "k={k}: {report:?}");
            assert!(report.distinguishability_shift() < 1e-6, "k={k}: {report:?}");
        }
    }

    #[test]
    fn rejects_mixed_states_and_nonprojective_bob() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let mixed = QcProtocol {
            states: vec![crate::qcore::DensityState::maximally_mixed(2)],
            measurements: vec![
                Povm::from_basis(&[PureState::basis(2, 0), PureState::basis(2, 1)]).unwrap(),
            ],
        };
        assert!(matches!(qc_to_eacc(&mixed, &[1.0]), Err(TransformError::NotPureQubit(_))));
        let noisy = Povm::new(vec![
            ComplexMatrix::identity(2).scale(0.6),
            ComplexMatrix::identity(2).scale(0.4),
        ])
        .unwrap();
        let p = QcProtocol {
            states: vec![random_pure_state(&mut rng, 2).to_density()],
            measurements: vec![noisy],
        };
        assert!(matches!(qc_to_eacc(&p, &[1.0]), Err(TransformError::NotProjective(0))));
    }

    #[test]
    fn flipped_branch_reproduces_complement_overlap() {
        // second-branch statistics equal |<z_x | k_y-perp>|^2
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let p = random_qc_protocol(&mut rng, 3, 2);
        let priors = [1.0 / 3.0; 3];
        let (eacc, _) = qc_to_eacc(&p, &priors).unwrap();
        let AliceDevice::Povms(alice) = &eacc.alice else { panic!() };
        for (x, rho) in p.states.iter().enumerate() {
            for (y, povm) in p.measurements.iter().enumerate() {
                // direction of Bob's z = 0 outcome
                let kappa = povm.element(0);
                let kappa_perp = ComplexMatrix::identity(2).sub(kappa);
                let expected = kappa_perp.matmul(rho.matrix()).trace().re;
                // branch a = 1 (message '2'), conditional on the branch;
                // the flipped output '1' carries the raw kappa click
                let joint = crate::qcore::tensor(
                    alice[x].element(1),
                    eacc.bob_povms[y][1].element(1),
                );
                let p2 = joint.matmul(eacc.shared.matrix()).trace().re / 0.5;
                assert!((p2 - expected).abs() < 1e-9, "x={x} y={y}");
            }
        }
    }

    fn small_eacc(rng: &mut ChaCha8Rng, n_x: usize, n_messages: usize) -> EaccProtocol {
        let alice: Vec<Povm> = (0..n_x)
            .map(|_| {
                let (v, vp) = random_qubit_basis(rng);
                Povm::from_basis(&[v, vp]).unwrap()
            })
            .collect();
        let bob: Vec<Vec<Povm>> = (0..2)
            .map(|_| {
                (0..n_messages)
                    .map(|_| {
                        let (v, vp) = random_qubit_basis(rng);
                        Povm::from_basis(&[v, vp]).unwrap()
                    })
                    .collect()
            })
            .collect();
        EaccProtocol {
            shared: max_entangled(2).to_density(),
            dims: (2, 2),
            alice: AliceDevice::Povms(alice),
            message_fn: vec![(0..2).map(|a| a % n_messages).collect(); n_x],
            n_messages,
            bob_povms: bob,
        }
    }

    #[test]
    fn dense_coding_side_dimension() {
        let mut rng = ChaCha8Rng::seed_from_u64(44);
        let p4 = {
            let mut p = small_eacc(&mut rng, 2, 4);
            // spread messages over all four labels
            p.message_fn = vec![vec![0, 1], vec![2, 3]];
            p
        };
        let (eaqc, _) = eacc_to_eaqc(&p4).unwrap();
        assert_eq!(eaqc.channels[0].out_dim(), 2);
        let p2 = small_eacc(&mut rng, 2, 2);
        let (eaqc2, _) = eacc_to_eaqc(&p2).unwrap();
        // ceil(sqrt(2)) = 2 as well, with two unused dense-coding symbols
        assert_eq!(eaqc2.channels[0].out_dim(), 2);
    }

    #[test]
    fn dense_coding_preserves_tables_and_distinguishability() {
        let mut rng = ChaCha8Rng::seed_from_u64(45);
        for k in 0..6 {
            let p = small_eacc(&mut rng, 2 + k % 2, 2);
            let (_, report) = eacc_to_eaqc(&p).unwrap();
            assert!(report.max_table_deviation < 1e-9, "k={k}: {report:?}");
            assert!(report.distinguishability_shift() < 1e-6, "k={k}: {report:?}");
        }
    }

    #[test]
    fn rac_image_through_dense_coding_keeps_table() {
        let p = rac_qc_protocol(2);
        let t = rac_task(2, 2);
        let (eacc, _) = qc_to_eacc(&p, &t.priors).unwrap();
        let (eaqc, report) = eacc_to_eaqc(&eacc).unwrap();
        assert!(report.max_table_deviation < 1e-9, "{report:?}");
        let s = success_metric(&t, &eaqc_correlations(&eaqc).unwrap());
        assert!((s - 0.5 * (1.0 + 1.0 / 2.0f64.sqrt())).abs() < 1e-9);
    }

    fn dense_coding_eaqc() -> EaqcProtocol {
        let [i2, x, _, z] = pauli();
        let xz = x.matmul(&z);
        EaqcProtocol {
            shared: max_entangled(2).to_density(),
            dims: (2, 2),
            channels: [i2, x, z, xz]
                .into_iter()
                .map(|u| KrausChannel::unitary(u).unwrap())
                .collect(),
            bob_povms: vec![Povm::from_basis(&bell_basis(2)).unwrap()],
        }
    }

    #[test]
    fn teleportation_preserves_dense_coding_protocol() {
        let p = dense_coding_eaqc();
        let (eacc, report) = eaqc_to_eacc(&p).unwrap();
        assert!(report.max_table_deviation < 1e-9, "{report:?}");
        assert!(report.distinguishability_shift() < 1e-6, "{report:?}");
        assert!((report.distinguishability_after - 1.0).abs() < 1e-6);
        // four perfectly distinguished messages survive the conversion
        let t = eacc_correlations(&eacc).unwrap();
        for x in 0..4 {
            let best = (0..4).map(|z| t.get(x, 0, z)).fold(0.0, f64::max);
            assert!((best - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn teleportation_messages_are_uniform() {
        let mut rng = ChaCha8Rng::seed_from_u64(46);
        let p = EaqcProtocol {
            shared: crate::qcore::random_density(&mut rng, 4),
            dims: (2, 2),
            channels: (0..3)
                .map(|_| KrausChannel::unitary(haar_unitary(&mut rng, 2)).unwrap())
                .collect(),
            bob_povms: vec![Povm::from_basis(&bell_basis(2)).unwrap()],
        };
        let (eacc, _) = eaqc_to_eacc(&p).unwrap();
        let dist = message_distribution(&eacc).unwrap();
        for row in &dist {
            for &v in row {
                assert!((v - 0.25).abs() < 1e-9, "{dist:?}");
            }
        }
    }

    #[test]
    fn teleportation_round_trip_on_random_channels() {
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        for k in 0..5 {
            let n_x = 2 + k % 2;
            let p = EaqcProtocol {
                shared: max_entangled(2).to_density(),
                dims: (2, 2),
                channels: (0..n_x)
                    .map(|_| KrausChannel::unitary(haar_unitary(&mut rng, 2)).unwrap())
                    .collect(),
                bob_povms: (0..2)
                    .map(|_| {
                        let u = haar_unitary(&mut rng, 4);
                        let states: Vec<PureState> = (0..4)
                            .map(|c| {
                                PureState::normalized(
                                    (0..4).map(|r| u.get(r, c)).collect(),
                                )
                                .unwrap()
                            })
                            .collect();
                        Povm::from_basis(&states).unwrap()
                    })
                    .collect(),
            };
            let (_, report) = eaqc_to_eacc(&p).unwrap();
            assert!(report.max_table_deviation < 1e-9, "k={k}: {report:?}");
            assert!(report.distinguishability_shift() < 1e-6, "k={k}: {report:?}");
        }
    }

    #[test]
    fn composed_conversions_preserve_tables() {
        let mut rng = ChaCha8Rng::seed_from_u64(48);
        let p = small_eacc(&mut rng, 2, 2);
        let base = eacc_correlations(&p).unwrap();
        let (eaqc, _) = eacc_to_eaqc(&p).unwrap();
        let (back, _) = eaqc_to_eacc(&eaqc).unwrap();
        let final_table = eacc_correlations(&back).unwrap();
        assert!(base.max_deviation(&final_table) < 1e-8);
    }
}

//! Interference estimation of Re<phi|U|phi> via an appended ancilla.
//!
//! The circuit is: H on the ancilla, U on the work registers controlled on
//! the ancilla, optionally a controlled Z between ancilla and overflow qubit,
//! H on the ancilla again. The ancilla's Z expectation then equals
//! Re<phi|U|phi> (plain form) or Re<phi|Z_overflow U|phi> (flipped form).

use std::f64::consts::PI;

use rand::Rng;

use crate::error::{Error, Result};
use crate::sim::gate::{Circuit, ControlBit, GateOp};
use crate::sim::layout::Role;
use crate::sim::state::StateVector;

/// Runs the interference circuit and returns the final extended state with
/// the ancilla still attached.
fn interference_state(
    phi: &StateVector,
    unitary: &Circuit,
    with_sign_flip: bool,
) -> Result<StateVector> {
    let block = phi.layout().signed_block()?;
    for qubit in unitary.qubits() {
        if qubit < block.start || qubit >= block.end {
            return Err(Error::ForbiddenQubit { qubit });
        }
    }
    let extended = phi.layout().with_ancilla()?;
    let ancilla = extended.register(Role::Ancilla).unwrap().start;
    let mut amps = vec![num_complex::Complex64::new(0.0, 0.0); 1 << extended.total_qubits()];
    amps[..phi.amplitudes().len()].copy_from_slice(phi.amplitudes());
    let mut state = StateVector::from_amplitudes(extended, amps)?;

    state.apply(&GateOp::H { target: ancilla })?;
    state.apply(&GateOp::PatternControlled {
        controls: vec![ControlBit::set(ancilla)],
        inner: Box::new(unitary.clone()),
    })?;
    if with_sign_flip {
        let overflow = state.layout().require(Role::Overflow)?.start;
        state.apply(&GateOp::ControlledPhase { control: ancilla, target: overflow, angle: PI })?;
    }
    state.apply(&GateOp::H { target: ancilla })?;
    Ok(state)
}

/// Exact ancilla Z expectation: Re<phi|U|phi>, or Re<phi|Z_overflow U|phi>
/// when `with_sign_flip` is set. `unitary` may touch only the value and
/// overflow registers.
pub fn hadamard_test(phi: &StateVector, unitary: &Circuit, with_sign_flip: bool) -> Result<f64> {
    let state = interference_state(phi, unitary, with_sign_flip)?;
    let ancilla = state.layout().register(Role::Ancilla).unwrap().start;
    Ok(1.0 - 2.0 * state.probability_of_bit(ancilla)?)
}

/// Shot-based estimate of the same expectation: measures the ancilla
/// `shots` times and returns (ones - zeros) / shots negated into the Z
/// convention, i.e. (shots - 2*ones) / shots.
pub fn hadamard_test_sampled<R: Rng>(
    phi: &StateVector,
    unitary: &Circuit,
    with_sign_flip: bool,
    shots: usize,
    rng: &mut R,
) -> Result<f64> {
    if shots == 0 {
        return Err(Error::EmptyMeasurement);
    }
    let state = interference_state(phi, unitary, with_sign_flip)?;
    let ancilla = state.layout().register(Role::Ancilla).unwrap().start;
    let p_one = state.probability_of_bit(ancilla)?;
    let mut ones = 0usize;
    for _ in 0..shots {
        if rng.gen::<f64>() < p_one {
            ones += 1;
        }
    }
    Ok((shots as f64 - 2.0 * ones as f64) / shots as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::layout::RegisterLayout;
    use num_complex::Complex64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn block_layout(m: usize) -> RegisterLayout {
        RegisterLayout::builder()
            .register(Role::Value, m)
            .register(Role::Overflow, 1)
            .build()
            .unwrap()
    }

    #[test]
    fn identity_circuit_gives_unit_overlap() {
        let phi = StateVector::basis(block_layout(2), 0b001).unwrap();
        let z1 = hadamard_test(&phi, &Circuit::new(), false).unwrap();
        assert!((z1 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sign_flip_reads_overflow_bit() {
        // Overflow set: Re<phi|Z_overflow|phi> = -1.
        let phi = StateVector::basis(block_layout(2), 0b100).unwrap();
        let z2 = hadamard_test(&phi, &Circuit::new(), true).unwrap();
        assert!((z2 + 1.0).abs() < 1e-12);
        // Overflow clear: +1.
        let phi = StateVector::basis(block_layout(2), 0b010).unwrap();
        let z2 = hadamard_test(&phi, &Circuit::new(), true).unwrap();
        assert!((z2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn matches_direct_inner_product_on_random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let layout = block_layout(2);
            let block = layout.signed_block().unwrap();
            let mut amps: Vec<Complex64> = (0..8)
                .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
                .collect();
            let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            for a in &mut amps {
                *a /= norm;
            }
            let phi = StateVector::from_amplitudes(layout, amps).unwrap();

            let mut u = Circuit::new();
            for q in block.clone() {
                u.push(GateOp::Ry { target: q, angle: rng.gen::<f64>() * 3.0 });
                u.push(GateOp::Phase { target: q, angle: rng.gen::<f64>() * 3.0 });
            }
            u.push(GateOp::Cnot { control: block.start, target: block.start + 1 });

            for &flip in &[false, true] {
                let mut transformed = phi.clone();
                transformed.apply_circuit(&u).unwrap();
                if flip {
                    let overflow = phi.layout().require(Role::Overflow).unwrap().start;
                    transformed.apply(&GateOp::Z { target: overflow }).unwrap();
                }
                let direct = phi.inner(&transformed).unwrap().re;
                let estimated = hadamard_test(&phi, &u, flip).unwrap();
                assert!((direct - estimated).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn circuit_outside_block_rejected() {
        let layout = RegisterLayout::builder()
            .register(Role::Input, 2)
            .register(Role::Value, 2)
            .register(Role::Overflow, 1)
            .build()
            .unwrap();
        let phi = StateVector::zeroed(layout);
        let mut u = Circuit::new();
        u.push(GateOp::X { target: 0 });
        assert!(matches!(
            hadamard_test(&phi, &u, false),
            Err(Error::ForbiddenQubit { qubit: 0 })
        ));
    }

    #[test]
    fn sampled_estimate_concentrates_and_is_seeded() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let phi = StateVector::basis(block_layout(2), 0b100).unwrap();
        let mut u = Circuit::new();
        u.push(GateOp::Ry { target: 0, angle: 1.1 });
        let exact = hadamard_test(&phi, &u, true).unwrap();
        let sampled = hadamard_test_sampled(&phi, &u, true, 10_000, &mut rng).unwrap();
        assert!((exact - sampled).abs() < 3.0 / (10_000f64).sqrt());

        let mut rng_a = ChaCha8Rng::seed_from_u64(33);
        let mut rng_b = ChaCha8Rng::seed_from_u64(33);
        let a = hadamard_test_sampled(&phi, &u, false, 500, &mut rng_a).unwrap();
        let b = hadamard_test_sampled(&phi, &u, false, 500, &mut rng_b).unwrap();
        assert_eq!(a, b);
    }
}

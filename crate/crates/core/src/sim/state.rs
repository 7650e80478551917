//! Dense statevector simulation.
//!
//! A state over n qubits holds 2^n complex amplitudes indexed so that qubit k
//! is bit k of the basis index. Gate application walks the amplitude array
//! with masked kernels: a pattern-controlled operation simply adds the
//! control bits to the mask, so nested controls cost nothing extra per
//! amplitude and 0-controls need no basis-flip conjugation.

use std::f64::consts::FRAC_1_SQRT_2;
use std::ops::Range;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::sim::gate::{Circuit, GateOp};
use crate::sim::layout::{RegisterLayout, Role};

/// Dense amplitude vector tied to a register layout.
#[derive(Debug, Clone)]
pub struct StateVector {
    layout: RegisterLayout,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// The all-zeros basis state of the layout.
    pub fn zeroed(layout: RegisterLayout) -> StateVector {
        StateVector::basis(layout, 0).unwrap()
    }

    /// A single basis state.
    pub fn basis(layout: RegisterLayout, index: u64) -> Result<StateVector> {
        let n = layout.total_qubits();
        if index >> n != 0 {
            return Err(Error::IndexOutOfRange { index, width: n });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1usize << n];
        amps[index as usize] = Complex64::new(1.0, 0.0);
        Ok(StateVector { layout, amps })
    }

    /// Wraps an explicit amplitude vector; must be normalized to 1e-9.
    pub fn from_amplitudes(layout: RegisterLayout, amps: Vec<Complex64>) -> Result<StateVector> {
        let expected = 1usize << layout.total_qubits();
        if amps.len() != expected {
            return Err(Error::LengthMismatch { expected, actual: amps.len() });
        }
        let state = StateVector { layout, amps };
        let norm = state.norm();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::NotNormalized { norm });
        }
        Ok(state)
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn num_qubits(&self) -> usize {
        self.layout.total_qubits()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, index: u64) -> Complex64 {
        self.amps[index as usize]
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Inner product <self|other>.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.amps.len() != other.amps.len() {
            return Err(Error::LengthMismatch { expected: self.amps.len(), actual: other.amps.len() });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// |<self|other>|^2.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    pub fn apply(&mut self, op: &GateOp) -> Result<()> {
        self.apply_masked(op, 0, 0)
    }

    pub fn apply_circuit(&mut self, circuit: &Circuit) -> Result<()> {
        for op in circuit.ops() {
            self.apply(op)?;
        }
        Ok(())
    }

    /// Probability that the given qubit reads 1.
    pub fn probability_of_bit(&self, qubit: usize) -> Result<f64> {
        if qubit >= self.num_qubits() {
            return Err(Error::QubitOutOfRange { qubit, total: self.num_qubits() });
        }
        let bit = 1u64 << qubit;
        Ok(self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| *i as u64 & bit != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    /// Marginal distribution over a contiguous qubit range.
    pub fn register_probabilities(&self, range: Range<usize>) -> Result<Vec<f64>> {
        let n = self.num_qubits();
        if range.end > n || range.start >= range.end {
            return Err(Error::QubitOutOfRange { qubit: range.end.max(1) - 1, total: n });
        }
        let width = range.end - range.start;
        let mask = (1u64 << width) - 1;
        let mut probs = vec![0.0; 1usize << width];
        for (i, a) in self.amps.iter().enumerate() {
            probs[((i as u64 >> range.start) & mask) as usize] += a.norm_sqr();
        }
        Ok(probs)
    }

    /// Rewrites amplitudes along a basis permutation: the amplitude at index
    /// i moves to index f(i). The closure must be a bijection on the basis.
    pub fn permute_basis<F: Fn(u64) -> u64>(&mut self, f: F) -> Result<()> {
        let len = self.amps.len();
        let mut out = vec![Complex64::new(0.0, 0.0); len];
        let mut seen = vec![false; len];
        for i in 0..len {
            let j = f(i as u64);
            if j >= len as u64 {
                return Err(Error::IndexOutOfRange { index: j, width: self.num_qubits() });
            }
            assert!(!seen[j as usize], "basis map is not a permutation at index {}", i);
            seen[j as usize] = true;
            out[j as usize] = self.amps[i];
        }
        self.amps = out;
        Ok(())
    }

    /// Draws basis outcomes from the |amplitude|^2 distribution, reporting
    /// only the named registers. Register bits concatenate in role order,
    /// first role least significant.
    pub fn sample<R: Rng>(&self, roles: &[Role], shots: usize, rng: &mut R) -> Result<Vec<u64>> {
        if roles.is_empty() || shots == 0 {
            return Err(Error::EmptyMeasurement);
        }
        let ranges: Vec<Range<usize>> =
            roles.iter().map(|r| self.layout.require(*r)).collect::<Result<_>>()?;
        let mut cdf = Vec::with_capacity(self.amps.len());
        let mut acc = 0.0;
        for a in &self.amps {
            acc += a.norm_sqr();
            cdf.push(acc);
        }
        let total = acc;
        let mut out = Vec::with_capacity(shots);
        for _ in 0..shots {
            let u: f64 = rng.gen::<f64>() * total;
            let idx = cdf.partition_point(|&c| c <= u).min(self.amps.len() - 1) as u64;
            let mut value = 0u64;
            let mut offset = 0usize;
            for range in &ranges {
                let width = range.end - range.start;
                let bits = (idx >> range.start) & ((1u64 << width) - 1);
                value |= bits << offset;
                offset += width;
            }
            out.push(value);
        }
        Ok(out)
    }

    fn check_target(&self, qubit: usize, mask: u64) -> Result<u64> {
        if qubit >= self.num_qubits() {
            return Err(Error::QubitOutOfRange { qubit, total: self.num_qubits() });
        }
        let bit = 1u64 << qubit;
        if mask & bit != 0 {
            return Err(Error::DuplicateQubit { qubit });
        }
        Ok(bit)
    }

    /// Applies `op` only on branches where `index & mask == pattern`.
    fn apply_masked(&mut self, op: &GateOp, mask: u64, pattern: u64) -> Result<()> {
        match op {
            GateOp::H { target } => {
                let bit = self.check_target(*target, mask)?;
                self.for_each_pair(bit, mask, pattern, |a, b| {
                    let (x, y) = (*a, *b);
                    *a = (x + y) * FRAC_1_SQRT_2;
                    *b = (x - y) * FRAC_1_SQRT_2;
                });
            }
            GateOp::X { target } => {
                let bit = self.check_target(*target, mask)?;
                self.for_each_pair(bit, mask, pattern, |a, b| std::mem::swap(a, b));
            }
            GateOp::Z { target } => {
                let bit = self.check_target(*target, mask)?;
                self.for_each_matching(mask, pattern, |i, a| {
                    if i & bit != 0 {
                        *a = -*a;
                    }
                });
            }
            GateOp::Ry { target, angle } => {
                let bit = self.check_target(*target, mask)?;
                let (sin, cos) = (angle / 2.0).sin_cos();
                self.for_each_pair(bit, mask, pattern, |a, b| {
                    let (x, y) = (*a, *b);
                    *a = x * cos - y * sin;
                    *b = x * sin + y * cos;
                });
            }
            GateOp::Rz { target, angle } => {
                let bit = self.check_target(*target, mask)?;
                let lower = Complex64::from_polar(1.0, -angle / 2.0);
                let upper = Complex64::from_polar(1.0, angle / 2.0);
                self.for_each_matching(mask, pattern, |i, a| {
                    *a *= if i & bit != 0 { upper } else { lower };
                });
            }
            GateOp::Phase { target, angle } => {
                let bit = self.check_target(*target, mask)?;
                let phase = Complex64::from_polar(1.0, *angle);
                self.for_each_matching(mask, pattern, |i, a| {
                    if i & bit != 0 {
                        *a *= phase;
                    }
                });
            }
            GateOp::ControlledPhase { control, target, angle } => {
                let tbit = self.check_target(*target, mask)?;
                let cbit = self.check_target(*control, mask)?;
                if tbit == cbit {
                    return Err(Error::DuplicateQubit { qubit: *target });
                }
                let phase = Complex64::from_polar(1.0, *angle);
                let both = tbit | cbit;
                self.for_each_matching(mask, pattern, |i, a| {
                    if i & both == both {
                        *a *= phase;
                    }
                });
            }
            GateOp::Cnot { control, target } => {
                let tbit = self.check_target(*target, mask)?;
                let cbit = self.check_target(*control, mask)?;
                if tbit == cbit {
                    return Err(Error::DuplicateQubit { qubit: *target });
                }
                // Pairs are gated on the control bit in addition to the
                // pattern, so the swap fires only where the control is set.
                self.for_each_pair(tbit, mask | cbit, pattern | cbit, |a, b| {
                    std::mem::swap(a, b)
                });
            }
            GateOp::PatternControlled { controls, inner } => {
                let mut mask = mask;
                let mut pattern = pattern;
                for c in controls {
                    let bit = self.check_target(c.qubit, mask)?;
                    mask |= bit;
                    if c.value {
                        pattern |= bit;
                    }
                }
                for op in inner.ops() {
                    self.apply_masked(op, mask, pattern)?;
                }
            }
        }
        Ok(())
    }

    fn for_each_pair<F: FnMut(&mut Complex64, &mut Complex64)>(
        &mut self,
        bit: u64,
        mask: u64,
        pattern: u64,
        mut f: F,
    ) {
        for i in 0..self.amps.len() as u64 {
            if i & bit == 0 && i & mask == pattern {
                let (lo, hi) = self.amps.split_at_mut((i | bit) as usize);
                f(&mut lo[i as usize], &mut hi[0]);
            }
        }
    }

    fn for_each_matching<F: FnMut(u64, &mut Complex64)>(&mut self, mask: u64, pattern: u64, mut f: F) {
        for (i, a) in self.amps.iter_mut().enumerate() {
            if i as u64 & mask == pattern {
                f(i as u64, a);
            }
        }
    }
}

/// Builds the full matrix of a circuit on `num_qubits` qubits, flat in
/// column-major order (entry (row, col) at index col * 2^n + row). Intended
/// for small verification instances.
pub fn unitary_matrix(circuit: &Circuit, num_qubits: usize) -> Result<Vec<Complex64>> {
    if let Some(q) = circuit.max_qubit() {
        if q >= num_qubits {
            return Err(Error::QubitOutOfRange { qubit: q, total: num_qubits });
        }
    }
    let layout = RegisterLayout::builder()
        .capacity(num_qubits)
        .register(Role::Input, num_qubits)
        .build()?;
    let dim = 1usize << num_qubits;
    let mut matrix = Vec::with_capacity(dim * dim);
    for col in 0..dim {
        let mut state = StateVector::basis(layout.clone(), col as u64)?;
        state.apply_circuit(circuit)?;
        matrix.extend_from_slice(state.amplitudes());
    }
    Ok(matrix)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::gate::ControlBit;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn single(n: usize) -> RegisterLayout {
        RegisterLayout::builder().register(Role::Input, n).build().unwrap()
    }

    fn random_state(n: usize, rng: &mut ChaCha8Rng) -> StateVector {
        let mut amps: Vec<Complex64> = (0..1usize << n)
            .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            .collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        for a in &mut amps {
            *a /= norm;
        }
        StateVector::from_amplitudes(single(n), amps).unwrap()
    }

    #[test]
    fn single_qubit_gates_act_on_basis() {
        let mut s = StateVector::zeroed(single(1));
        s.apply(&GateOp::H { target: 0 }).unwrap();
        assert!((s.amplitude(0).re - FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((s.amplitude(1).re - FRAC_1_SQRT_2).abs() < 1e-12);
        s.apply(&GateOp::Z { target: 0 }).unwrap();
        s.apply(&GateOp::H { target: 0 }).unwrap();
        // HZH = X.
        assert!(s.amplitude(0).norm() < 1e-12);
        assert!((s.amplitude(1).re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn phase_differs_from_rz_by_observable_control_phase() {
        // On a bare qubit Phase and Rz agree up to global phase; under a
        // control the difference is physical. Controlled-Phase(pi) must
        // equal CZ exactly.
        let mut inner = Circuit::new();
        inner.push(GateOp::Phase { target: 0, angle: std::f64::consts::PI });
        let controlled_phase = GateOp::PatternControlled {
            controls: vec![ControlBit::set(1)],
            inner: Box::new(inner),
        };
        let mut s = StateVector::from_amplitudes(
            single(2),
            vec![Complex64::new(0.5, 0.0); 4],
        )
        .unwrap();
        s.apply(&controlled_phase).unwrap();
        assert!((s.amplitude(0b11).re + 0.5).abs() < 1e-12);
        assert!((s.amplitude(0b01).re - 0.5).abs() < 1e-12);

        // The Rz version leaks a -i phase onto the whole controlled branch.
        let mut inner = Circuit::new();
        inner.push(GateOp::Rz { target: 0, angle: std::f64::consts::PI });
        let controlled_rz = GateOp::PatternControlled {
            controls: vec![ControlBit::set(1)],
            inner: Box::new(inner),
        };
        let mut s = StateVector::from_amplitudes(
            single(2),
            vec![Complex64::new(0.5, 0.0); 4],
        )
        .unwrap();
        s.apply(&controlled_rz).unwrap();
        assert!((s.amplitude(0b10).im + 0.5).abs() < 1e-12);
    }

    #[test]
    fn pattern_controls_fire_exactly_on_match() {
        // Exhaustive over all patterns of three controls plus one target.
        for pattern_bits in 0..8u64 {
            let controls = vec![
                ControlBit { qubit: 0, value: pattern_bits & 1 != 0 },
                ControlBit { qubit: 1, value: pattern_bits & 2 != 0 },
                ControlBit { qubit: 2, value: pattern_bits & 4 != 0 },
            ];
            let mut inner = Circuit::new();
            inner.push(GateOp::X { target: 3 });
            let op = GateOp::PatternControlled { controls, inner: Box::new(inner) };
            for basis in 0..16u64 {
                let mut s = StateVector::basis(single(4), basis).unwrap();
                s.apply(&op).unwrap();
                let expected = if basis & 7 == pattern_bits { basis ^ 8 } else { basis };
                assert!((s.amplitude(expected).re - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn nested_pattern_controls_compose_masks() {
        let mut innermost = Circuit::new();
        innermost.push(GateOp::X { target: 2 });
        let mut middle = Circuit::new();
        middle.push(GateOp::PatternControlled {
            controls: vec![ControlBit::clear(1)],
            inner: Box::new(innermost),
        });
        let op = GateOp::PatternControlled {
            controls: vec![ControlBit::set(0)],
            inner: Box::new(middle),
        };
        // Fires iff qubit0 = 1 and qubit1 = 0.
        for basis in 0..8u64 {
            let mut s = StateVector::basis(single(3), basis).unwrap();
            s.apply(&op).unwrap();
            let fires = basis & 1 != 0 && basis & 2 == 0;
            let expected = if fires { basis ^ 4 } else { basis };
            assert!((s.amplitude(expected).re - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn control_target_overlap_rejected() {
        let mut inner = Circuit::new();
        inner.push(GateOp::X { target: 1 });
        let op = GateOp::PatternControlled {
            controls: vec![ControlBit::set(1)],
            inner: Box::new(inner),
        };
        let mut s = StateVector::zeroed(single(2));
        assert!(matches!(s.apply(&op), Err(Error::DuplicateQubit { qubit: 1 })));
        assert!(matches!(
            s.apply(&GateOp::Cnot { control: 0, target: 0 }),
            Err(Error::DuplicateQubit { .. })
        ));
        assert!(matches!(
            s.apply(&GateOp::H { target: 5 }),
            Err(Error::QubitOutOfRange { qubit: 5, total: 2 })
        ));
    }

    #[test]
    fn random_circuits_preserve_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let mut s = random_state(5, &mut rng);
            for _ in 0..40 {
                let q = rng.gen_range(0..5);
                let p = (q + 1 + rng.gen_range(0..4)) % 5;
                let op = match rng.gen_range(0..7) {
                    0 => GateOp::H { target: q },
                    1 => GateOp::X { target: q },
                    2 => GateOp::Ry { target: q, angle: rng.gen::<f64>() * 6.0 },
                    3 => GateOp::Rz { target: q, angle: rng.gen::<f64>() * 6.0 },
                    4 => GateOp::Phase { target: q, angle: rng.gen::<f64>() * 6.0 },
                    5 => GateOp::Cnot { control: p, target: q },
                    _ => GateOp::ControlledPhase { control: p, target: q, angle: rng.gen::<f64>() },
                };
                s.apply(&op).unwrap();
            }
            assert!((s.norm() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn marginals_and_bit_probabilities_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = random_state(4, &mut rng);
        let probs = s.register_probabilities(1..3).unwrap();
        assert_eq!(probs.len(), 4);
        assert!((probs.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        let p_bit1 = s.probability_of_bit(1).unwrap();
        assert!((probs[1] + probs[3] - p_bit1).abs() < 1e-12);
    }

    #[test]
    fn sampling_is_seeded_and_respects_marginals() {
        let layout = RegisterLayout::builder()
            .register(Role::Value, 2)
            .register(Role::Overflow, 1)
            .build()
            .unwrap();
        // Equal superposition of value 1 (overflow 0) and value 2 (overflow 1).
        let mut amps = vec![Complex64::new(0.0, 0.0); 8];
        amps[0b001] = Complex64::new(FRAC_1_SQRT_2, 0.0);
        amps[0b110] = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let s = StateVector::from_amplitudes(layout, amps).unwrap();

        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let outcomes = s.sample(&[Role::Value, Role::Overflow], 10_000, &mut rng).unwrap();
        // Concatenation is value bits then overflow bit above them.
        let ones = outcomes.iter().filter(|&&o| o == 0b001).count();
        let sixes = outcomes.iter().filter(|&&o| o == 0b110).count();
        assert_eq!(ones + sixes, 10_000);
        // 3 sigma for a fair coin at 10k shots is 150.
        assert!((ones as f64 - 5_000.0).abs() < 150.0, "ones = {}", ones);

        let mut rng2 = ChaCha8Rng::seed_from_u64(42);
        let again = s.sample(&[Role::Value, Role::Overflow], 10_000, &mut rng2).unwrap();
        assert_eq!(outcomes, again);

        assert!(matches!(
            s.sample(&[], 10, &mut rng),
            Err(Error::EmptyMeasurement)
        ));
        assert!(matches!(
            s.sample(&[Role::Input], 10, &mut rng),
            Err(Error::MissingRegister { .. })
        ));
    }

    #[test]
    fn basis_state_samples_deterministically() {
        let layout = RegisterLayout::builder()
            .register(Role::Value, 3)
            .register(Role::Overflow, 1)
            .build()
            .unwrap();
        let s = StateVector::basis(layout, 0b0101).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let outcomes = s.sample(&[Role::Value, Role::Overflow], 64, &mut rng).unwrap();
        assert!(outcomes.iter().all(|&o| o == 0b0101));
    }

    #[test]
    fn permutation_moves_amplitudes() {
        let mut s = StateVector::basis(single(3), 0b011).unwrap();
        s.permute_basis(|i| (i + 2) % 8).unwrap();
        assert!((s.amplitude(0b101).re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unitary_matrix_of_x_is_permutation() {
        let mut c = Circuit::new();
        c.push(GateOp::X { target: 0 });
        let m = unitary_matrix(&c, 1).unwrap();
        // Column major: column 0 = (0, 1), column 1 = (1, 0).
        assert!((m[1].re - 1.0).abs() < 1e-12);
        assert!((m[2].re - 1.0).abs() < 1e-12);
        assert!(m[0].norm() < 1e-12 && m[3].norm() < 1e-12);
    }
}

//! Oracle construction and search-state preparation.
//!
//! Two oracle families: an explicit function table over an input register
//! (realized as a basis permutation writing f(x) into the value register),
//! and a bare amplitude vector over the value register. Both end in the same
//! prepared form: value register in two's complement with the overflow qubit
//! copying the sign bit on every branch.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sim::gate::GateOp;
use crate::sim::layout::{RegisterLayout, Role};
use crate::sim::state::StateVector;
use crate::twos_complement::{decode, encode, value_range};

/// Serializable description of a search problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum OracleSpec {
    /// f tabulated over every input pattern; values land in a value register
    /// of `m` qubits.
    Table {
        #[serde(rename = "n")]
        input_qubits: usize,
        #[serde(rename = "m")]
        value_qubits: usize,
        values: Vec<i64>,
    },
    /// Amplitudes indexed by value-register pattern; the pattern decodes as
    /// a signed integer.
    Vector {
        #[serde(rename = "m")]
        value_qubits: usize,
        amplitudes: Vec<f64>,
    },
}

impl OracleSpec {
    pub fn value_qubits(&self) -> usize {
        match self {
            OracleSpec::Table { value_qubits, .. } | OracleSpec::Vector { value_qubits, .. } => {
                *value_qubits
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            OracleSpec::Table { input_qubits, value_qubits, values } => {
                if *input_qubits == 0 {
                    return Err(Error::InvalidWidth { width: 0 });
                }
                let expected = 1usize << input_qubits;
                if values.len() != expected {
                    return Err(Error::TableSizeMismatch { expected, actual: values.len() });
                }
                let (lo, hi) = value_range(*value_qubits)?;
                for (x, &v) in values.iter().enumerate() {
                    if v < lo || v > hi {
                        return Err(Error::TableValueOutOfRange {
                            input: x as u64,
                            value: v,
                            width: *value_qubits,
                        });
                    }
                }
                self.layout().map(|_| ())
            }
            OracleSpec::Vector { value_qubits, amplitudes } => {
                let expected = 1usize << value_qubits;
                if amplitudes.len() != expected {
                    return Err(Error::LengthMismatch { expected, actual: amplitudes.len() });
                }
                value_range(*value_qubits)?;
                let norm = amplitudes.iter().map(|a| a * a).sum::<f64>().sqrt();
                if (norm - 1.0).abs() > 1e-9 {
                    return Err(Error::NotNormalized { norm });
                }
                if amplitudes.iter().all(|a| *a == 0.0) {
                    return Err(Error::EmptySupport);
                }
                self.layout().map(|_| ())
            }
        }
    }

    /// Register layout for this oracle: optional input register below the
    /// value register, overflow on top.
    pub fn layout(&self) -> Result<RegisterLayout> {
        let builder = match self {
            OracleSpec::Table { input_qubits, value_qubits, .. } => RegisterLayout::builder()
                .register(Role::Input, *input_qubits)
                .register(Role::Value, *value_qubits),
            OracleSpec::Vector { value_qubits, .. } => {
                RegisterLayout::builder().register(Role::Value, *value_qubits)
            }
        };
        builder.register(Role::Overflow, 1).build()
    }

    /// Every value the oracle can produce, deduplicated and sorted.
    pub fn support_values(&self) -> Result<Vec<i64>> {
        self.validate()?;
        let mut values: Vec<i64> = match self {
            OracleSpec::Table { values, .. } => values.clone(),
            OracleSpec::Vector { value_qubits, amplitudes } => amplitudes
                .iter()
                .enumerate()
                .filter(|(_, a)| **a != 0.0)
                .map(|(i, _)| decode(i as u64, *value_qubits).unwrap())
                .collect(),
        };
        values.sort_unstable();
        values.dedup();
        Ok(values)
    }

    /// Builds the fully prepared search state: superposed inputs with values
    /// written (table) or the amplitude vector loaded (vector), overflow
    /// copying the sign bit on every branch.
    pub fn prepare_state(&self) -> Result<StateVector> {
        self.validate()?;
        match self {
            OracleSpec::Table { values, .. } => {
                let mut state = prepare_input_superposition(self.layout()?)?;
                apply_oracle(&mut state, values)?;
                attach_overflow(&mut state)?;
                Ok(state)
            }
            OracleSpec::Vector { amplitudes, .. } => {
                state_from_amplitude_vector(amplitudes, self.layout()?)
            }
        }
    }
}

/// Puts the input register into the uniform superposition, leaving the value
/// and overflow registers at |0>.
pub fn prepare_input_superposition(layout: RegisterLayout) -> Result<StateVector> {
    let input = layout.require(Role::Input)?;
    layout.require(Role::Value)?;
    let mut state = StateVector::zeroed(layout);
    for qubit in input {
        state.apply(&GateOp::H { target: qubit })?;
    }
    Ok(state)
}

/// Writes f(x) into the value register on every branch: the basis
/// permutation |v, x> -> |v + encode(f(x)) mod 2^m, x>. With the value
/// register at |0> this realizes |0, x> -> |f(x), x>.
pub fn apply_oracle(state: &mut StateVector, values: &[i64]) -> Result<()> {
    let input = state.layout().require(Role::Input)?;
    let value = state.layout().require(Role::Value)?;
    let n = input.end - input.start;
    let m = value.end - value.start;
    let expected = 1usize << n;
    if values.len() != expected {
        return Err(Error::TableSizeMismatch { expected, actual: values.len() });
    }
    let encoded: Vec<u64> = values
        .iter()
        .enumerate()
        .map(|(x, &v)| {
            encode(v, m).map_err(|_| Error::TableValueOutOfRange { input: x as u64, value: v, width: m })
        })
        .collect::<Result<_>>()?;
    let input_mask = ((1u64 << n) - 1) << input.start;
    let value_mask = ((1u64 << m) - 1) << value.start;
    state.permute_basis(|i| {
        let x = (i & input_mask) >> input.start;
        let v = (i & value_mask) >> value.start;
        let shifted = (v + encoded[x as usize]) & ((1u64 << m) - 1);
        (i & !value_mask) | (shifted << value.start)
    })
}

/// Copies the value register's sign bit onto the overflow qubit with a CNOT,
/// making the overflow+value block a sign-extended copy of the value on
/// every branch.
pub fn attach_overflow(state: &mut StateVector) -> Result<()> {
    let value = state.layout().require(Role::Value)?;
    let overflow = state.layout().require(Role::Overflow)?;
    state.apply(&GateOp::Cnot { control: value.end - 1, target: overflow.start })
}

/// Loads an amplitude vector over the value register, setting the overflow
/// qubit to the sign bit of each branch's pattern. The layout must consist
/// of exactly the value register and its overflow qubit.
pub fn state_from_amplitude_vector(
    amplitudes: &[f64],
    layout: RegisterLayout,
) -> Result<StateVector> {
    let value = layout.require(Role::Value)?;
    layout.require(Role::Overflow)?;
    let m = value.end - value.start;
    if layout.total_qubits() != m + 1 || value.start != 0 {
        return Err(Error::LengthMismatch {
            expected: 1usize << (m + 1),
            actual: 1usize << layout.total_qubits(),
        });
    }
    if amplitudes.len() != 1usize << m {
        return Err(Error::LengthMismatch { expected: 1usize << m, actual: amplitudes.len() });
    }
    if amplitudes.iter().all(|a| *a == 0.0) {
        return Err(Error::EmptySupport);
    }
    let mut amps = vec![Complex64::new(0.0, 0.0); 1usize << (m + 1)];
    for (pattern, &a) in amplitudes.iter().enumerate() {
        let sign = (pattern >> (m - 1)) & 1;
        amps[pattern | (sign << m)] = Complex64::new(a, 0.0);
    }
    StateVector::from_amplitudes(layout, amps)
}

/// A generated search instance with its classically known answer.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomOracleInstance {
    pub amplitudes: Vec<f64>,
    pub value_qubits: usize,
    pub seed: u64,
    pub nonzero_indices: Vec<usize>,
    pub ground_truth: i64,
}

impl RandomOracleInstance {
    pub fn oracle_spec(&self) -> OracleSpec {
        OracleSpec::Vector {
            value_qubits: self.value_qubits,
            amplitudes: self.amplitudes.clone(),
        }
    }
}

/// The ground truth of a sparse instance: the first nonzero index at or past
/// the sign boundary decodes to the minimum; with no index in the negative
/// half, the smallest nonzero index (smallest positive value) wins.
pub fn ground_truth_minimum(nonzero_indices: &[usize], value_qubits: usize) -> Result<i64> {
    let boundary = 1usize << (value_qubits - 1);
    let chosen = nonzero_indices
        .iter()
        .find(|&&i| i >= boundary)
        .or_else(|| nonzero_indices.first())
        .ok_or(Error::EmptySupport)?;
    decode(*chosen as u64, value_qubits)
}

/// Builds a sparse random instance: between 1 and floor(2^m / 100) + 1
/// distinct nonzero entries at sorted random indices, with uniform (0, 1]
/// magnitudes, normalized.
pub fn build_random_oracle(value_qubits: usize, seed: u64) -> Result<RandomOracleInstance> {
    if value_qubits < 2 {
        return Err(Error::InvalidWidth { width: value_qubits });
    }
    value_range(value_qubits)?;
    let n = 1usize << value_qubits;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let count = rng.gen_range(1..=n / 100 + 1);
    let mut indices: Vec<usize> = Vec::with_capacity(count);
    while indices.len() < count {
        let candidate = rng.gen_range(0..n);
        if !indices.contains(&candidate) {
            indices.push(candidate);
        }
    }
    indices.sort_unstable();
    let mut amplitudes = vec![0.0; n];
    for &i in &indices {
        // gen() is [0, 1); flip to (0, 1] so no chosen index degenerates.
        amplitudes[i] = 1.0 - rng.gen::<f64>();
    }
    let norm = amplitudes.iter().map(|a| a * a).sum::<f64>().sqrt();
    for a in &mut amplitudes {
        *a /= norm;
    }
    let ground_truth = ground_truth_minimum(&indices, value_qubits)?;
    Ok(RandomOracleInstance {
        amplitudes,
        value_qubits,
        seed,
        nonzero_indices: indices,
        ground_truth,
    })
}

//! Variational isolation of negative-valued branches.
//!
//! The objective f(theta) = -(z1 - z2)/2, with z1 and z2 the plain and
//! sign-flipped interference expectations of the ansatz U(theta), equals
//! -Re<phi|P1 U(theta)|phi> where P1 projects onto overflow = 1. Its minimum
//! over all unitaries is -sqrt(p_good), reached exactly when U(theta)|phi|
//! equals the normalized projection P1|phi>, i.e. when only negative-valued
//! branches survive.
//!
//! Every ansatz parameter enters the objective through a single rotation
//! generator with eigenphase gap 1, so the restriction of the objective to
//! one coordinate is exactly a + p*cos(t) + q*sin(t). The optimizer exploits
//! this: two probes at t +/- pi/2 determine the sinusoid, and the coordinate
//! jumps straight to its closed-form minimum. Flat coordinates are left
//! untouched, which keeps the all-zeros start (U = identity) fixed when no
//! negative branch exists to amplify.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::{FRAC_PI_2, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::sim::gate::{Circuit, GateOp};
use crate::sim::layout::Role;
use crate::sim::measure::{hadamard_test, hadamard_test_sampled};
use crate::sim::state::StateVector;
use crate::twos_complement::decode;

/// Ansatz families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnsatzStyle {
    /// Depth 3 per layer, layers = qubits + 1 by default.
    LinearDepth,
    /// Heavily overparameterized variant for blocks of at most 3 qubits,
    /// used where exact convergence to the objective floor is asserted.
    FullRankTiny,
}

/// Shape of the ansatz circuit; parameters are counted from the shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AnsatzConfig {
    qubits: usize,
    layers: usize,
    style: AnsatzStyle,
}

/// Entangler pairs for one layer: nearest-neighbor bricks whose starting
/// parity alternates by layer (fixed at (0,1) for two-qubit blocks).
fn brick_pairs(qubits: usize, layer: usize) -> Vec<(usize, usize)> {
    if qubits < 2 {
        return Vec::new();
    }
    let start = if qubits > 2 { layer % 2 } else { 0 };
    (start..qubits - 1).step_by(2).map(|a| (a, a + 1)).collect()
}

impl AnsatzConfig {
    /// Default linear-depth shape on a q-qubit block: q + 1 layers of
    /// [Ry column, Rz column, entangler bricks], total depth 3(q + 1).
    pub fn linear_depth(qubits: usize) -> Result<AnsatzConfig> {
        if qubits == 0 {
            return Err(Error::InvalidWidth { width: 0 });
        }
        Ok(AnsatzConfig { qubits, layers: qubits + 1, style: AnsatzStyle::LinearDepth })
    }

    /// Overparameterized shape for exact-floor verification; blocks of at
    /// most 3 qubits.
    pub fn full_rank_tiny(qubits: usize) -> Result<AnsatzConfig> {
        if qubits == 0 {
            return Err(Error::InvalidWidth { width: 0 });
        }
        if qubits > 3 {
            return Err(Error::BlockTooLarge { qubits, limit: 3 });
        }
        Ok(AnsatzConfig { qubits, layers: 4 * qubits, style: AnsatzStyle::FullRankTiny })
    }

    /// Same shape with an explicit layer count.
    pub fn with_layers(mut self, layers: usize) -> AnsatzConfig {
        self.layers = layers.max(1);
        self
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn layers(&self) -> usize {
        self.layers
    }

    pub fn style(&self) -> AnsatzStyle {
        self.style
    }

    fn rotation_columns(&self) -> usize {
        match self.style {
            AnsatzStyle::LinearDepth => 2,
            AnsatzStyle::FullRankTiny => 3,
        }
    }

    pub fn param_count(&self) -> usize {
        (0..self.layers)
            .map(|layer| {
                self.rotation_columns() * self.qubits + brick_pairs(self.qubits, layer).len()
            })
            .sum()
    }
}

/// Builds the ansatz on the block starting at `block_start`. All-zero
/// parameters give the identity exactly: every rotation and every entangler
/// is parameterized, nothing fixed remains.
pub fn ansatz_circuit(config: &AnsatzConfig, params: &[f64], block_start: usize) -> Result<Circuit> {
    let expected = config.param_count();
    if params.len() != expected {
        return Err(Error::ParamCountMismatch { expected, actual: params.len() });
    }
    if let Some(index) = params.iter().position(|p| !p.is_finite()) {
        return Err(Error::NonFiniteParameter { index });
    }
    let q = config.qubits;
    let mut circuit = Circuit::new();
    let mut next = params.iter().copied();
    let mut take = || next.next().unwrap();
    for layer in 0..config.layers {
        match config.style {
            AnsatzStyle::LinearDepth => {
                for k in 0..q {
                    circuit.push(GateOp::Ry { target: block_start + k, angle: take() });
                }
                for k in 0..q {
                    circuit.push(GateOp::Rz { target: block_start + k, angle: take() });
                }
            }
            AnsatzStyle::FullRankTiny => {
                for k in 0..q {
                    circuit.push(GateOp::Rz { target: block_start + k, angle: take() });
                }
                for k in 0..q {
                    circuit.push(GateOp::Ry { target: block_start + k, angle: take() });
                }
                for k in 0..q {
                    circuit.push(GateOp::Rz { target: block_start + k, angle: take() });
                }
            }
        }
        for (a, b) in brick_pairs(q, layer) {
            circuit.push(GateOp::ControlledPhase {
                control: block_start + a,
                target: block_start + b,
                angle: take(),
            });
        }
    }
    Ok(circuit)
}

/// Exact objective: -(z1 - z2) / 2 from the two interference expectations.
pub fn objective_exact(phi2: &StateVector, config: &AnsatzConfig, params: &[f64]) -> Result<f64> {
    let block = phi2.layout().signed_block()?;
    let unitary = ansatz_circuit(config, params, block.start)?;
    let z1 = hadamard_test(phi2, &unitary, false)?;
    let z2 = hadamard_test(phi2, &unitary, true)?;
    Ok(-0.5 * (z1 - z2))
}

/// Shot-based objective: both expectations estimated from `shots`
/// measurements each.
pub fn objective_sampled<R: Rng>(
    phi2: &StateVector,
    config: &AnsatzConfig,
    params: &[f64],
    shots: usize,
    rng: &mut R,
) -> Result<f64> {
    let block = phi2.layout().signed_block()?;
    let unitary = ansatz_circuit(config, params, block.start)?;
    let z1 = hadamard_test_sampled(phi2, &unitary, false, shots, rng)?;
    let z2 = hadamard_test_sampled(phi2, &unitary, true, shots, rng)?;
    Ok(-0.5 * (z1 - z2))
}

/// Stopping rules for the optimizer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerSettings {
    /// Hard cap on coordinate sweeps.
    pub max_iterations: usize,
    /// Improvement below this counts as stagnation.
    pub plateau_tolerance: f64,
    /// Consecutive stagnant sweeps before restarting or stopping.
    pub plateau_patience: usize,
    /// Random restarts granted after a plateau.
    pub restarts: usize,
    /// Stop as soon as the best objective reaches this value.
    pub target: Option<f64>,
}

impl Default for OptimizerSettings {
    fn default() -> Self {
        OptimizerSettings {
            max_iterations: 500,
            plateau_tolerance: 1e-4,
            plateau_patience: 30,
            restarts: 3,
            target: None,
        }
    }
}

/// Result of an optimization run.
#[derive(Debug, Clone)]
pub struct VqsOutcome {
    pub best_params: Vec<f64>,
    pub best_objective: f64,
    /// Best objective seen, recorded once per sweep (element 0 is the
    /// starting value), hence non-increasing.
    pub trace: Vec<f64>,
    pub iterations: usize,
    /// False only when the sweep budget ran out.
    pub converged: bool,
}

/// Coordinate-descent minimization of the exact objective. One iteration is
/// a full sweep: each parameter is probed at +/- pi/2 and moved to its
/// closed-form sinusoid minimum. Deterministic given the seed (the RNG only
/// feeds plateau restarts).
pub fn optimize(
    phi2: &StateVector,
    config: &AnsatzConfig,
    settings: &OptimizerSettings,
    seed: u64,
) -> Result<VqsOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let count = config.param_count();
    let mut params = vec![0.0f64; count];
    let mut current = objective_exact(phi2, config, &params)?;
    let mut best_params = params.clone();
    let mut best = current;
    let mut trace = vec![best];
    let mut iterations = 0usize;
    let mut converged = false;
    let mut stagnant = 0usize;
    let mut restarts_left = settings.restarts;

    if settings.target.map_or(false, |t| best <= t) {
        return Ok(VqsOutcome { best_params, best_objective: best, trace, iterations, converged: true });
    }

    while iterations < settings.max_iterations {
        for k in 0..count {
            let held = params[k];
            params[k] = held + FRAC_PI_2;
            let plus = objective_exact(phi2, config, &params)?;
            params[k] = held - FRAC_PI_2;
            let minus = objective_exact(phi2, config, &params)?;
            let mean = 0.5 * (plus + minus);
            let u = current - mean;
            let v = 0.5 * (plus - minus);
            let amplitude = (u * u + v * v).sqrt();
            if amplitude < 1e-12 {
                params[k] = held;
                continue;
            }
            let (sin_h, cos_h) = held.sin_cos();
            let p = u * cos_h - v * sin_h;
            let q = u * sin_h + v * cos_h;
            params[k] = q.atan2(p) + PI;
            current = mean - amplitude;
        }
        // One fresh evaluation per sweep absorbs the drift the running
        // closed-form updates accumulate.
        current = objective_exact(phi2, config, &params)?;
        iterations += 1;
        if current < best {
            if best - current > settings.plateau_tolerance {
                stagnant = 0;
            } else {
                stagnant += 1;
            }
            best = current;
            best_params.copy_from_slice(&params);
        } else {
            stagnant += 1;
        }
        trace.push(best);
        if settings.target.map_or(false, |t| best <= t) {
            converged = true;
            break;
        }
        if stagnant >= settings.plateau_patience {
            if restarts_left > 0 {
                restarts_left -= 1;
                stagnant = 0;
                for p in params.iter_mut() {
                    *p = rng.gen_range(-PI..PI);
                }
                current = objective_exact(phi2, config, &params)?;
            } else {
                converged = true;
                break;
            }
        }
    }
    Ok(VqsOutcome { best_params, best_objective: best, trace, iterations, converged })
}

/// How many distinct negative values a scan found, relative to the
/// threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NegativeCount {
    /// All outcomes processed; the exact distinct count (possibly 0).
    Exact(usize),
    /// Scanning stopped once `seen` distinct negatives (threshold + 1)
    /// had appeared.
    ExceedsThreshold { seen: usize },
}

/// Outcome of a negative-value scan over the value+overflow block.
#[derive(Debug, Clone, PartialEq)]
pub struct NegativeScan {
    /// Strictly negative decoded values observed, sorted.
    pub distinct_values: BTreeSet<i64>,
    pub count: NegativeCount,
    /// Smallest value observed, if any.
    pub min_value: Option<i64>,
    /// True iff scanning stopped early on the threshold rule.
    pub truncated: bool,
    /// Observed probability (exact mode) or frequency among processed shots
    /// (sampled mode) per negative value.
    pub frequencies: BTreeMap<i64, f64>,
}

impl NegativeScan {
    fn from_stream<I: Iterator<Item = (i64, f64)>>(threshold: usize, stream: I) -> NegativeScan {
        let mut distinct_values = BTreeSet::new();
        let mut frequencies = BTreeMap::new();
        let mut truncated = false;
        for (value, weight) in stream {
            distinct_values.insert(value);
            *frequencies.entry(value).or_insert(0.0) += weight;
            if distinct_values.len() > threshold {
                truncated = true;
                break;
            }
        }
        let count = if truncated {
            NegativeCount::ExceedsThreshold { seen: distinct_values.len() }
        } else {
            NegativeCount::Exact(distinct_values.len())
        };
        NegativeScan {
            min_value: distinct_values.iter().next().copied(),
            count,
            truncated,
            distinct_values,
            frequencies,
        }
    }
}

/// Exact scan: walks block patterns in ascending order, accumulating each
/// pattern's probability amplitude-by-amplitude, and classifies against the
/// threshold with the same early-stop rule the sampled scan uses.
pub fn scan_negatives_exact(phi3: &StateVector, threshold: usize) -> Result<NegativeScan> {
    if threshold == 0 {
        return Err(Error::InvalidThreshold { threshold });
    }
    let block = phi3.layout().signed_block()?;
    let width = block.end - block.start;
    let mask = (1u64 << width) - 1;
    let amps = phi3.amplitudes();
    let half = 1u64 << (width - 1);
    let stream = (half..1u64 << width).filter_map(move |pattern| {
        let probability: f64 = (0..amps.len() as u64)
            .filter(|i| (i >> block.start) & mask == pattern)
            .map(|i| amps[i as usize].norm_sqr())
            .sum();
        if probability > 0.0 {
            Some((decode(pattern, width).unwrap(), probability))
        } else {
            None
        }
    });
    Ok(NegativeScan::from_stream(threshold, stream))
}

/// Sampled scan: draws `shots` outcomes of the value+overflow block, decodes
/// each, keeps the strictly negative ones, and stops processing once the
/// distinct count exceeds the threshold. Frequencies are relative to the
/// shots actually processed.
pub fn scan_negatives_sampled<R: Rng>(
    phi3: &StateVector,
    threshold: usize,
    shots: usize,
    rng: &mut R,
) -> Result<NegativeScan> {
    if threshold == 0 {
        return Err(Error::InvalidThreshold { threshold });
    }
    let block = phi3.layout().signed_block()?;
    let width = block.end - block.start;
    let outcomes = phi3.sample(&[Role::Value, Role::Overflow], shots, rng)?;

    let mut distinct_values = BTreeSet::new();
    let mut counts: BTreeMap<i64, usize> = BTreeMap::new();
    let mut truncated = false;
    let mut processed = 0usize;
    for outcome in outcomes {
        processed += 1;
        let value = decode(outcome, width)?;
        if value >= 0 {
            continue;
        }
        distinct_values.insert(value);
        *counts.entry(value).or_insert(0) += 1;
        if distinct_values.len() > threshold {
            truncated = true;
            break;
        }
    }
    let count = if truncated {
        NegativeCount::ExceedsThreshold { seen: distinct_values.len() }
    } else {
        NegativeCount::Exact(distinct_values.len())
    };
    let frequencies = counts
        .into_iter()
        .map(|(v, c)| (v, c as f64 / processed as f64))
        .collect();
    Ok(NegativeScan {
        min_value: distinct_values.iter().next().copied(),
        count,
        truncated,
        distinct_values,
        frequencies,
    })
}

//! Addition-by-constant circuits built from the Fourier transform.
//!
//! A shift by s on a w-qubit block is one transform, one layer of bare phase
//! rotations (angle 2 pi s 2^j / 2^w on block qubit j), and one inverse
//! transform. On basis states this realizes |y> -> |(y + s) mod 2^w> with
//! unit amplitude; negative shifts wrap to their unsigned two's-complement
//! constant, so A(-2) on three qubits is literally A(6).

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::sim::gate::{Circuit, ControlBit, GateOp};
use crate::sim::qft::{inverse_qft_circuit, qft_circuit};
use crate::sim::state::StateVector;
use crate::twos_complement;

/// A shift amount bound to the width of the block it will act on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShiftSpec {
    shift: i64,
    width: usize,
}

impl ShiftSpec {
    /// Any integer shift is meaningful modulo 2^width.
    pub fn new(shift: i64, width: usize) -> Result<ShiftSpec> {
        if width == 0 || width > twos_complement::MAX_WIDTH {
            return Err(Error::InvalidWidth { width });
        }
        Ok(ShiftSpec { shift, width })
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// The unsigned constant the rotation layer encodes: s itself for
    /// s >= 0, else the two's-complement pattern of s at this width.
    pub fn rotation_constant(&self) -> u64 {
        let modulus = 1u64 << self.width;
        (self.shift.rem_euclid(modulus as i64)) as u64
    }
}

/// Builds the shift circuit on the w-qubit block starting at `start`.
pub fn build_adder(spec: ShiftSpec, start: usize) -> Circuit {
    let width = spec.width();
    let block = start..start + width;
    let constant = spec.rotation_constant();
    let mut c = qft_circuit(block.clone());
    let denom = (1u64 << width) as f64;
    for j in 0..width {
        // Multiples of 2 pi contribute nothing; reduce first so the angle
        // stays small for every (constant, j).
        let steps = (constant << j) & ((1u64 << width) - 1);
        c.push(GateOp::Phase { target: start + j, angle: 2.0 * PI * steps as f64 / denom });
    }
    c.extend(&inverse_qft_circuit(block));
    c
}

/// The shift circuit gated on a control pattern: it acts only on branches
/// where every control qubit matches its required bit.
pub fn build_controlled_adder(spec: ShiftSpec, start: usize, controls: &[ControlBit]) -> Circuit {
    let mut c = Circuit::new();
    c.push(GateOp::PatternControlled {
        controls: controls.to_vec(),
        inner: Box::new(build_adder(spec, start)),
    });
    c
}

/// Applies the shift to the state's value+overflow block in place. The shift
/// must fit the signed range of that block.
pub fn apply_shift(state: &mut StateVector, shift: i64) -> Result<()> {
    let block = state.layout().signed_block()?;
    let width = block.end - block.start;
    let (lo, hi) = twos_complement::value_range(width)?;
    if shift < lo || shift > hi {
        return Err(Error::ShiftOutOfRange { shift, width });
    }
    let circuit = build_adder(ShiftSpec::new(shift, width)?, block.start);
    state.apply_circuit(&circuit)
}

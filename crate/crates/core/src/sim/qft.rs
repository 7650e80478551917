//! Quantum Fourier transform circuits on a contiguous qubit block.
//!
//! Convention: on the block read as an integer y (first block qubit least
//! significant), the transform maps |y> to 2^(-w/2) sum_z e^{2 pi i yz / 2^w}
//! |z>. The construction is the textbook rotation ladder followed by explicit
//! bit-reversal swaps (three CNOTs each), so the map is the transform itself
//! rather than its bit-reversed variant.

use std::f64::consts::PI;
use std::ops::Range;

use crate::sim::gate::{Circuit, GateOp};

/// Forward transform on the block.
pub fn qft_circuit(block: Range<usize>) -> Circuit {
    let start = block.start;
    let width = block.end - block.start;
    let mut c = Circuit::new();
    for j in (0..width).rev() {
        c.push(GateOp::H { target: start + j });
        for k in (0..j).rev() {
            c.push(GateOp::ControlledPhase {
                control: start + k,
                target: start + j,
                angle: PI / (1u64 << (j - k)) as f64,
            });
        }
    }
    for i in 0..width / 2 {
        let (a, b) = (start + i, start + width - 1 - i);
        c.push(GateOp::Cnot { control: a, target: b });
        c.push(GateOp::Cnot { control: b, target: a });
        c.push(GateOp::Cnot { control: a, target: b });
    }
    c
}

/// Inverse transform on the block.
pub fn inverse_qft_circuit(block: Range<usize>) -> Circuit {
    qft_circuit(block).dagger()
}

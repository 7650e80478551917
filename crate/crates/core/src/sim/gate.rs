//! Gate operations and circuits.
//!
//! The gate set is deliberately small: the Hadamard, bit flips, axis
//! rotations, bare phases, and a pattern-controlled wrapper that runs a whole
//! sub-circuit only on branches where a set of control qubits matches a given
//! bit pattern (0-controls included, so no X-conjugation is ever needed).

use std::collections::BTreeSet;

/// One control qubit and the bit value it must hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ControlBit {
    pub qubit: usize,
    pub value: bool,
}

impl ControlBit {
    pub fn set(qubit: usize) -> Self {
        ControlBit { qubit, value: true }
    }

    pub fn clear(qubit: usize) -> Self {
        ControlBit { qubit, value: false }
    }
}

/// A single operation in a circuit.
#[derive(Debug, Clone, PartialEq)]
pub enum GateOp {
    H { target: usize },
    X { target: usize },
    Z { target: usize },
    /// Rotation about Y: [[cos(a/2), -sin(a/2)], [sin(a/2), cos(a/2)]].
    Ry { target: usize, angle: f64 },
    /// Rotation about Z: diag(e^{-ia/2}, e^{+ia/2}).
    Rz { target: usize, angle: f64 },
    /// Bare phase on |1>: diag(1, e^{ia}). Differs from Rz by a global
    /// phase, which becomes observable under pattern control; arithmetic
    /// circuits rely on this variant.
    Phase { target: usize, angle: f64 },
    /// Phase e^{ia} applied only when both qubits are |1>. Symmetric in its
    /// two qubits.
    ControlledPhase { control: usize, target: usize, angle: f64 },
    Cnot { control: usize, target: usize },
    /// Runs `inner` on branches where every control matches its pattern bit.
    PatternControlled { controls: Vec<ControlBit>, inner: Box<Circuit> },
}

impl GateOp {
    /// Every qubit the operation reads or writes.
    fn collect_qubits(&self, out: &mut BTreeSet<usize>) {
        match self {
            GateOp::H { target }
            | GateOp::X { target }
            | GateOp::Z { target }
            | GateOp::Ry { target, .. }
            | GateOp::Rz { target, .. }
            | GateOp::Phase { target, .. } => {
                out.insert(*target);
            }
            GateOp::ControlledPhase { control, target, .. }
            | GateOp::Cnot { control, target } => {
                out.insert(*control);
                out.insert(*target);
            }
            GateOp::PatternControlled { controls, inner } => {
                for c in controls {
                    out.insert(c.qubit);
                }
                for op in &inner.ops {
                    op.collect_qubits(out);
                }
            }
        }
    }

    /// The adjoint operation.
    pub fn dagger(&self) -> GateOp {
        match self {
            GateOp::H { .. } | GateOp::X { .. } | GateOp::Z { .. } | GateOp::Cnot { .. } => {
                self.clone()
            }
            GateOp::Ry { target, angle } => GateOp::Ry { target: *target, angle: -angle },
            GateOp::Rz { target, angle } => GateOp::Rz { target: *target, angle: -angle },
            GateOp::Phase { target, angle } => GateOp::Phase { target: *target, angle: -angle },
            GateOp::ControlledPhase { control, target, angle } => GateOp::ControlledPhase {
                control: *control,
                target: *target,
                angle: -angle,
            },
            GateOp::PatternControlled { controls, inner } => GateOp::PatternControlled {
                controls: controls.clone(),
                inner: Box::new(inner.dagger()),
            },
        }
    }

    fn is_rotation(&self) -> bool {
        matches!(
            self,
            GateOp::H { .. }
                | GateOp::Ry { .. }
                | GateOp::Rz { .. }
                | GateOp::Phase { .. }
                | GateOp::ControlledPhase { .. }
        )
    }
}

/// An ordered list of gate operations.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Circuit {
    ops: Vec<GateOp>,
}

impl Circuit {
    pub fn new() -> Self {
        Circuit { ops: Vec::new() }
    }

    pub fn push(&mut self, op: GateOp) {
        self.ops.push(op);
    }

    pub fn extend(&mut self, other: &Circuit) {
        self.ops.extend(other.ops.iter().cloned());
    }

    pub fn ops(&self) -> &[GateOp] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// Every qubit touched by any operation, controls included.
    pub fn qubits(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        for op in &self.ops {
            op.collect_qubits(&mut out);
        }
        out
    }

    /// Largest qubit index touched, if any.
    pub fn max_qubit(&self) -> Option<usize> {
        self.qubits().into_iter().next_back()
    }

    /// The adjoint circuit: reversed order, each operation inverted.
    pub fn dagger(&self) -> Circuit {
        Circuit { ops: self.ops.iter().rev().map(GateOp::dagger).collect() }
    }

    /// Circuit depth under greedy layering: an operation lands on the first
    /// layer after every layer already occupying one of its qubits. A
    /// pattern-controlled block occupies its qubits for the depth of its
    /// inner circuit.
    pub fn depth(&self) -> usize {
        let mut busy_until: Vec<usize> = Vec::new();
        let mut depth = 0usize;
        for op in &self.ops {
            let mut qubits = BTreeSet::new();
            op.collect_qubits(&mut qubits);
            let thickness = match op {
                GateOp::PatternControlled { inner, .. } => inner.depth().max(1),
                _ => 1,
            };
            let start = qubits
                .iter()
                .map(|&q| if q < busy_until.len() { busy_until[q] } else { 0 })
                .max()
                .unwrap_or(0);
            let end = start + thickness;
            for &q in &qubits {
                if q >= busy_until.len() {
                    busy_until.resize(q + 1, 0);
                }
                busy_until[q] = end;
            }
            depth = depth.max(end);
        }
        depth
    }

    /// Number of rotation-family operations (Hadamards, axis rotations, and
    /// phases, controlled or not), counted through pattern-controlled blocks.
    /// Bit flips and swap wiring are excluded.
    pub fn rotation_count(&self) -> usize {
        self.ops
            .iter()
            .map(|op| match op {
                GateOp::PatternControlled { inner, .. } => inner.rotation_count(),
                _ => {
                    if op.is_rotation() {
                        1
                    } else {
                        0
                    }
                }
            })
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn depth_layers_by_qubit_collision() {
        let mut c = Circuit::new();
        c.push(GateOp::H { target: 0 });
        c.push(GateOp::H { target: 1 });
        assert_eq!(c.depth(), 1);
        c.push(GateOp::Cnot { control: 0, target: 1 });
        assert_eq!(c.depth(), 2);
        c.push(GateOp::H { target: 2 });
        assert_eq!(c.depth(), 2);
        c.push(GateOp::ControlledPhase { control: 1, target: 2, angle: 0.5 });
        assert_eq!(c.depth(), 3);
    }

    #[test]
    fn pattern_block_occupies_inner_depth() {
        let mut inner = Circuit::new();
        inner.push(GateOp::H { target: 0 });
        inner.push(GateOp::Z { target: 0 });
        inner.push(GateOp::H { target: 0 });
        let mut c = Circuit::new();
        c.push(GateOp::PatternControlled {
            controls: vec![ControlBit::set(1)],
            inner: Box::new(inner),
        });
        assert_eq!(c.depth(), 3);
        c.push(GateOp::H { target: 1 });
        assert_eq!(c.depth(), 4);
        // An untouched wire still schedules from layer zero.
        c.push(GateOp::H { target: 2 });
        assert_eq!(c.depth(), 4);
    }

    #[test]
    fn rotation_count_skips_flips_and_recurses() {
        let mut inner = Circuit::new();
        inner.push(GateOp::Phase { target: 0, angle: 1.0 });
        inner.push(GateOp::Cnot { control: 0, target: 1 });
        let mut c = Circuit::new();
        c.push(GateOp::H { target: 0 });
        c.push(GateOp::X { target: 1 });
        c.push(GateOp::Rz { target: 1, angle: 0.2 });
        c.push(GateOp::ControlledPhase { control: 0, target: 1, angle: 0.3 });
        c.push(GateOp::PatternControlled {
            controls: vec![ControlBit::clear(2)],
            inner: Box::new(inner),
        });
        assert_eq!(c.rotation_count(), 4);
    }

    #[test]
    fn dagger_reverses_and_negates() {
        let mut c = Circuit::new();
        c.push(GateOp::H { target: 0 });
        c.push(GateOp::Phase { target: 1, angle: 0.7 });
        let d = c.dagger();
        assert_eq!(d.ops()[0], GateOp::Phase { target: 1, angle: -0.7 });
        assert_eq!(d.ops()[1], GateOp::H { target: 0 });
    }

    #[test]
    fn qubit_set_includes_controls() {
        let mut inner = Circuit::new();
        inner.push(GateOp::X { target: 4 });
        let mut c = Circuit::new();
        c.push(GateOp::PatternControlled {
            controls: vec![ControlBit::set(1), ControlBit::clear(7)],
            inner: Box::new(inner),
        });
        let qubits: Vec<usize> = c.qubits().into_iter().collect();
        assert_eq!(qubits, vec![1, 4, 7]);
        assert_eq!(c.max_qubit(), Some(7));
    }
}

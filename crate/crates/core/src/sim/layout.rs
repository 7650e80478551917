//! Register layout: names contiguous qubit ranges inside a state.
//!
//! Qubit 0 is the least significant bit of the basis index. Registers are
//! disjoint contiguous ranges assigned in declaration order from qubit 0
//! upward, and a register's own qubit order follows the same convention
//! (its first qubit is the least significant bit of its content).

use std::ops::Range;

use crate::error::{Error, Result};

/// Default ceiling on total qubits; 2^22 complex amplitudes (64 MiB) is the
/// largest state the simulator is expected to handle comfortably.
pub const DEFAULT_QUBIT_CAPACITY: usize = 22;

/// Names a register's role inside a layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Role {
    /// Oracle input register (the domain being searched).
    Input,
    /// Signed value register holding oracle outputs.
    Value,
    /// Single qubit entangled with the value sign bit.
    Overflow,
    /// Scratch qubit appended for interference measurements.
    Ancilla,
    /// Color register of one graph vertex.
    VertexColor(usize),
}

impl Role {
    fn name(&self) -> &'static str {
        match self {
            Role::Input => "input",
            Role::Value => "value",
            Role::Overflow => "overflow",
            Role::Ancilla => "ancilla",
            Role::VertexColor(_) => "vertex color",
        }
    }
}

/// Immutable map from roles to qubit ranges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegisterLayout {
    total: usize,
    registers: Vec<(Role, Range<usize>)>,
}

/// Accumulates registers in order; `build` validates and freezes them.
#[derive(Debug, Default)]
pub struct LayoutBuilder {
    widths: Vec<(Role, usize)>,
    capacity: usize,
}

impl LayoutBuilder {
    pub fn new() -> Self {
        LayoutBuilder { widths: Vec::new(), capacity: DEFAULT_QUBIT_CAPACITY }
    }

    /// Overrides the qubit capacity ceiling.
    pub fn capacity(mut self, capacity: usize) -> Self {
        self.capacity = capacity;
        self
    }

    /// Appends a register above everything declared so far.
    pub fn register(mut self, role: Role, width: usize) -> Self {
        self.widths.push((role, width));
        self
    }

    pub fn build(self) -> Result<RegisterLayout> {
        let mut registers = Vec::with_capacity(self.widths.len());
        let mut next = 0usize;
        for (role, width) in self.widths {
            if width == 0 {
                return Err(Error::InvalidWidth { width });
            }
            if registers.iter().any(|(r, _)| *r == role) {
                return Err(Error::DuplicateRegister { name: role.name() });
            }
            registers.push((role, next..next + width));
            next += width;
        }
        if next > self.capacity {
            return Err(Error::CapacityExceeded { requested: next, capacity: self.capacity });
        }
        let layout = RegisterLayout { total: next, registers };
        if let (Some(value), Some(overflow)) =
            (layout.register(Role::Value), layout.register(Role::Overflow))
        {
            // The shift adder and sign semantics treat value + overflow as
            // one contiguous signed block.
            if overflow.start != value.end || overflow.len() != 1 {
                return Err(Error::OverflowNotAdjacent);
            }
        }
        Ok(layout)
    }
}

impl RegisterLayout {
    pub fn builder() -> LayoutBuilder {
        LayoutBuilder::new()
    }

    pub fn total_qubits(&self) -> usize {
        self.total
    }

    pub fn registers(&self) -> &[(Role, Range<usize>)] {
        &self.registers
    }

    /// Qubit range of the given role, if declared.
    pub fn register(&self, role: Role) -> Option<Range<usize>> {
        self.registers.iter().find(|(r, _)| *r == role).map(|(_, range)| range.clone())
    }

    /// Qubit range of the given role, erroring when absent.
    pub fn require(&self, role: Role) -> Result<Range<usize>> {
        self.register(role).ok_or(Error::MissingRegister { name: role.name() })
    }

    /// The contiguous signed block: value register plus its overflow qubit.
    /// Its width exceeds the value register by one, so the overflow qubit
    /// doubles as the block's sign bit.
    pub fn signed_block(&self) -> Result<Range<usize>> {
        let value = self.require(Role::Value)?;
        let overflow = self.require(Role::Overflow)?;
        Ok(value.start..overflow.end)
    }

    /// Same layout with one ancilla qubit appended at the top.
    pub fn with_ancilla(&self) -> Result<RegisterLayout> {
        if self.register(Role::Ancilla).is_some() {
            return Err(Error::DuplicateRegister { name: "ancilla" });
        }
        let mut registers = self.registers.clone();
        registers.push((Role::Ancilla, self.total..self.total + 1));
        Ok(RegisterLayout { total: self.total + 1, registers })
    }
}

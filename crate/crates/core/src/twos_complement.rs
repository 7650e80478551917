//! Two's-complement encoding of signed integers into basis-state indices.
//!
//! A width-w register stores values in `[-2^(w-1), 2^(w-1) - 1]`. The most
//! significant bit is the sign bit, so basis index `i >= 2^(w-1)` reads back
//! as `i - 2^w`. Widening a register duplicates the sign bit, which lets
//! addition and multiplication on encoded values reuse plain unsigned
//! arithmetic modulo `2^w`.

use crate::error::{Error, Result};

/// Widths above this would overflow the `u64` index space used for basis
/// states (and are far beyond any simulable register anyway).
pub const MAX_WIDTH: usize = 62;

fn check_width(width: usize) -> Result<()> {
    if width == 0 || width > MAX_WIDTH {
        return Err(Error::InvalidWidth { width });
    }
    Ok(())
}

/// Smallest and largest values representable at the given width.
pub fn value_range(width: usize) -> Result<(i64, i64)> {
    check_width(width)?;
    let half = 1i64 << (width - 1);
    Ok((-half, half - 1))
}

/// Encodes a signed value as a width-w basis index.
pub fn encode(value: i64, width: usize) -> Result<u64> {
    let (lo, hi) = value_range(width)?;
    if value < lo || value > hi {
        return Err(Error::ValueOutOfRange { value, width });
    }
    let modulus = 1u64 << width;
    Ok((value as u64) & (modulus - 1))
}

/// Reads a width-w basis index back as a signed value.
pub fn decode(index: u64, width: usize) -> Result<i64> {
    check_width(width)?;
    if index >> width != 0 {
        return Err(Error::IndexOutOfRange { index, width });
    }
    let half = 1u64 << (width - 1);
    if index >= half {
        Ok(index as i64 - (1i64 << width))
    } else {
        Ok(index as i64)
    }
}

/// Widens an encoded value by duplicating its sign bit.
pub fn sign_extend(index: u64, from: usize, to: usize) -> Result<u64> {
    check_width(from)?;
    check_width(to)?;
    if to < from {
        return Err(Error::NarrowingExtension { from, to });
    }
    if index >> from != 0 {
        return Err(Error::IndexOutOfRange { index, width: from });
    }
    let sign = (index >> (from - 1)) & 1;
    if sign == 0 {
        return Ok(index);
    }
    let fill = ((1u64 << (to - from)) - 1) << from;
    Ok(index | fill)
}

/// A signed value pinned to a register width.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignedValue {
    value: i64,
    width: usize,
}

impl SignedValue {
    pub fn new(value: i64, width: usize) -> Result<Self> {
        encode(value, width)?;
        Ok(SignedValue { value, width })
    }

    /// Rebuilds the value from its encoded index.
    pub fn from_index(index: u64, width: usize) -> Result<Self> {
        let value = decode(index, width)?;
        Ok(SignedValue { value, width })
    }

    pub fn value(&self) -> i64 {
        self.value
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn index(&self) -> u64 {
        // Validated at construction, cannot fail.
        encode(self.value, self.width).unwrap()
    }
}

/// Adds two encoded values exactly. Both operands are sign-extended to one
/// qubit beyond the wider operand, which always fits the sum.
pub fn signed_add(a: SignedValue, b: SignedValue) -> Result<SignedValue> {
    let width = a.width.max(b.width) + 1;
    check_width(width)?;
    let ea = sign_extend(a.index(), a.width, width)?;
    let eb = sign_extend(b.index(), b.width, width)?;
    let mask = (1u64 << width) - 1;
    SignedValue::from_index(ea.wrapping_add(eb) & mask, width)
}

/// Adds at the wider operand's width without growing it. The boolean is true
/// when the exact sum does not fit, i.e. the returned value has wrapped.
pub fn signed_add_truncating(a: SignedValue, b: SignedValue) -> Result<(SignedValue, bool)> {
    let width = a.width.max(b.width);
    let ea = sign_extend(a.index(), a.width, width)?;
    let eb = sign_extend(b.index(), b.width, width)?;
    let mask = (1u64 << width) - 1;
    let sum = SignedValue::from_index(ea.wrapping_add(eb) & mask, width)?;
    let overflowed = sum.value != a.value + b.value;
    Ok((sum, overflowed))
}

/// Multiplies two encoded values exactly. Both operands are sign-extended to
/// the combined width, then multiplied as unsigned integers modulo the
/// combined modulus; the product of widths wa and wb always fits wa + wb.
pub fn signed_mul(a: SignedValue, b: SignedValue) -> Result<SignedValue> {
    let width = a.width + b.width;
    check_width(width)?;
    let ea = sign_extend(a.index(), a.width, width)? as u128;
    let eb = sign_extend(b.index(), b.width, width)? as u128;
    let mask = (1u128 << width) - 1;
    SignedValue::from_index((ea * eb & mask) as u64, width)
}

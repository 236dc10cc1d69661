//! Single-qubit Pauli algebra with exact phases.
//!
//! Matrices follow the standard convention
//! `X = [[0,1],[1,0]]`, `Y = [[0,-i],[i,0]]`, `Z = [[1,0],[0,-1]]`, so that
//! `XY = iZ`, `YZ = iX` and `ZX = iY`.

use std::fmt;
use std::ops::{Mul, MulAssign, Neg};

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// One of the four single-qubit basis observables `σ0..σ3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(u8)]
pub enum PauliIndex {
    I = 0,
    X = 1,
    Y = 2,
    Z = 3,
}

impl PauliIndex {
    pub const ALL: [PauliIndex; 4] = [PauliIndex::I, PauliIndex::X, PauliIndex::Y, PauliIndex::Z];
    pub const NONTRIVIAL: [PauliIndex; 3] = [PauliIndex::X, PauliIndex::Y, PauliIndex::Z];

    pub fn from_u8(value: u8) -> Result<Self> {
        match value {
            0 => Ok(PauliIndex::I),
            1 => Ok(PauliIndex::X),
            2 => Ok(PauliIndex::Y),
            3 => Ok(PauliIndex::Z),
            v => Err(Error::IndexConstraint(format!("Pauli index {v} is not in 0..=3"))),
        }
    }

    #[inline]
    pub fn value(self) -> u8 {
        self as u8
    }

    #[inline]
    pub fn is_identity(self) -> bool {
        self == PauliIndex::I
    }

    /// Symplectic bits `(x, z)`; `Y` carries both.
    #[inline]
    pub fn xz(self) -> (bool, bool) {
        match self {
            PauliIndex::I => (false, false),
            PauliIndex::X => (true, false),
            PauliIndex::Y => (true, true),
            PauliIndex::Z => (false, true),
        }
    }

    #[inline]
    pub fn from_xz(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => PauliIndex::I,
            (true, false) => PauliIndex::X,
            (true, true) => PauliIndex::Y,
            (false, true) => PauliIndex::Z,
        }
    }

    pub fn letter(self) -> char {
        match self {
            PauliIndex::I => 'I',
            PauliIndex::X => 'X',
            PauliIndex::Y => 'Y',
            PauliIndex::Z => 'Z',
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        match c {
            'I' => Some(PauliIndex::I),
            'X' => Some(PauliIndex::X),
            'Y' => Some(PauliIndex::Y),
            'Z' => Some(PauliIndex::Z),
            _ => None,
        }
    }

    pub fn from_digit(c: char) -> Option<Self> {
        match c {
            '0' => Some(PauliIndex::I),
            '1' => Some(PauliIndex::X),
            '2' => Some(PauliIndex::Y),
            '3' => Some(PauliIndex::Z),
            _ => None,
        }
    }
}

impl fmt::Display for PauliIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

impl TryFrom<u8> for PauliIndex {
    type Error = Error;

    fn try_from(value: u8) -> Result<Self> {
        PauliIndex::from_u8(value)
    }
}

impl Serialize for PauliIndex {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_u8(self.value())
    }
}

/// A power of `i`, stored as its exponent mod 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    #[inline]
    pub fn from_exponent(exponent: i64) -> Self {
        Phase(exponent.rem_euclid(4) as u8)
    }

    #[inline]
    pub fn exponent(self) -> u8 {
        self.0
    }

    #[inline]
    pub fn is_real(self) -> bool {
        self.0.is_multiple_of(2)
    }

    #[inline]
    pub fn conj(self) -> Self {
        Phase((4 - self.0) % 4)
    }

    /// `(re, im)` of `i^exponent`.
    pub fn to_parts(self) -> (i8, i8) {
        match self.0 {
            0 => (1, 0),
            1 => (0, 1),
            2 => (-1, 0),
            _ => (0, -1),
        }
    }

    /// Canonical prefix used in text form: `+`, `+i`, `-`, `-i`.
    pub fn prefix(self) -> &'static str {
        match self.0 {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        }
    }

    /// Sign text for real phases (`+1` / `-1`), or `+i` / `-i`.
    pub fn label(self) -> &'static str {
        match self.0 {
            0 => "+1",
            1 => "+i",
            2 => "-1",
            _ => "-i",
        }
    }
}

impl Mul for Phase {
    type Output = Phase;

    #[inline]
    fn mul(self, rhs: Phase) -> Phase {
        Phase((self.0 + rhs.0) % 4)
    }
}

impl MulAssign for Phase {
    #[inline]
    fn mul_assign(&mut self, rhs: Phase) {
        *self = *self * rhs;
    }
}

impl Neg for Phase {
    type Output = Phase;

    #[inline]
    fn neg(self) -> Phase {
        self * Phase::MINUS_ONE
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl Serialize for Phase {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.label())
    }
}

/// The product `σa σb = phase · σc`.
pub fn single_product(a: PauliIndex, b: PauliIndex) -> (Phase, PauliIndex) {
    use PauliIndex::*;
    match (a, b) {
        (I, p) | (p, I) => (Phase::ONE, p),
        (p, q) if p == q => (Phase::ONE, I),
        (X, Y) => (Phase::I, Z),
        (Y, Z) => (Phase::I, X),
        (Z, X) => (Phase::I, Y),
        (Y, X) => (Phase::MINUS_I, Z),
        (Z, Y) => (Phase::MINUS_I, X),
        (X, Z) => (Phase::MINUS_I, Y),
        _ => unreachable!(),
    }
}

/// `[σa, σb] = 0`.
#[inline]
pub fn commutes_single(a: PauliIndex, b: PauliIndex) -> bool {
    a == b || a.is_identity() || b.is_identity()
}

/// `{σa, σb} = 0`.
#[inline]
pub fn anticommutes_single(a: PauliIndex, b: PauliIndex) -> bool {
    a != b && !a.is_identity() && !b.is_identity()
}

/// Ordered product of a sequence of single-qubit Paulis.
pub fn sequence_product(seq: &[PauliIndex]) -> (Phase, PauliIndex) {
    seq.iter().fold((Phase::ONE, PauliIndex::I), |(phase, acc), &p| {
        let (ph, idx) = single_product(acc, p);
        (phase * ph, idx)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use PauliIndex::*;

    #[test]
    fn product_examples() {
        assert_eq!(single_product(I, Y), (Phase::ONE, Y));
        assert_eq!(single_product(Z, Z), (Phase::ONE, I));
        assert_eq!(single_product(X, Y), (Phase::I, Z));
        assert_eq!(single_product(Y, X), (Phase::MINUS_I, Z));
    }

    #[test]
    fn predicate_examples() {
        assert!(!commutes_single(X, Y));
        assert!(commutes_single(I, Z));
        assert!(commutes_single(Y, Y));
        assert!(anticommutes_single(X, Y));
        assert!(!anticommutes_single(I, X));
        assert!(!anticommutes_single(Z, Z));
    }

    #[test]
    fn exclusivity_and_product_consistency() {
        for a in PauliIndex::ALL {
            for b in PauliIndex::ALL {
                assert_ne!(commutes_single(a, b), anticommutes_single(a, b));
                let same = single_product(a, b) == single_product(b, a);
                assert_eq!(same, commutes_single(a, b), "{a}{b}");
            }
        }
    }

    #[test]
    fn xz_round_trip() {
        for p in PauliIndex::ALL {
            let (x, z) = p.xz();
            assert_eq!(PauliIndex::from_xz(x, z), p);
        }
    }

    #[test]
    fn phase_arithmetic() {
        assert_eq!(Phase::I * Phase::I, Phase::MINUS_ONE);
        assert_eq!(-Phase::MINUS_I, Phase::I);
        assert_eq!(Phase::from_exponent(-1), Phase::MINUS_I);
        assert_eq!(Phase::I.conj(), Phase::MINUS_I);
    }

    #[test]
    fn sequence_products() {
        // XYZ = iZ Z = i
        assert_eq!(sequence_product(&[X, Y, Z]), (Phase::I, I));
        assert_eq!(sequence_product(&[Y, X, Z]), (Phase::MINUS_I, I));
        assert_eq!(sequence_product(&[]), (Phase::ONE, I));
    }
}

//! Pauli strings in the binary symplectic representation.
//!
//! A string on `n` qubits is stored as an X mask, a Z mask and a phase
//! exponent `p`, and denotes the operator `i^p * s_0 ⊗ s_1 ⊗ ... ⊗ s_{n-1}`
//! where `s_j` is `I`, `X`, `Z` or `Y` according to the bits `(x_j, z_j)`
//! being `(0,0)`, `(1,0)`, `(0,1)` or `(1,1)`. Qubit `j` is bit `j` of each
//! mask, and position `j` in the text form.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_QUBITS: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PauliOperator {
    n: usize,
    x_mask: u32,
    z_mask: u32,
    phase_exp: u8,
}

fn full_mask(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

impl PauliOperator {
    pub fn new(n: usize, x_mask: u32, z_mask: u32, phase_exp: u8) -> Result<Self> {
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::UnsupportedSize { n, max: MAX_QUBITS });
        }
        let outside = !full_mask(n);
        if x_mask & outside != 0 || z_mask & outside != 0 {
            return Err(Error::InvalidArgument(format!(
                "mask bits set beyond qubit {}",
                n - 1
            )));
        }
        Ok(Self {
            n,
            x_mask,
            z_mask,
            phase_exp: phase_exp & 3,
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new(n, 0, 0, 0)
    }

    /// Single-qubit factor `kind` (one of `'X'`, `'Y'`, `'Z'`) on `qubit`.
    pub fn single(n: usize, qubit: usize, kind: char) -> Result<Self> {
        if qubit >= n {
            return Err(Error::VertexOutOfRange { vertex: qubit, n });
        }
        let bit = 1u32 << qubit;
        match kind {
            'X' => Self::new(n, bit, 0, 0),
            'Y' => Self::new(n, bit, bit, 0),
            'Z' => Self::new(n, 0, bit, 0),
            other => Err(Error::Parse(format!("unknown Pauli factor `{other}`"))),
        }
    }

    pub(crate) const fn from_raw(n: usize, x_mask: u32, z_mask: u32, phase_exp: u8) -> Self {
        Self {
            n,
            x_mask,
            z_mask,
            phase_exp: phase_exp & 3,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn x_mask(&self) -> u32 {
        self.x_mask
    }

    pub fn z_mask(&self) -> u32 {
        self.z_mask
    }

    pub fn phase_exp(&self) -> u8 {
        self.phase_exp
    }

    pub fn support(&self) -> u32 {
        self.x_mask | self.z_mask
    }

    pub fn weight(&self) -> usize {
        self.support().count_ones() as usize
    }

    pub fn is_identity(&self) -> bool {
        self.support() == 0
    }

    /// Hermitian strings carry a real global sign.
    pub fn is_hermitian(&self) -> bool {
        self.phase_exp & 1 == 0
    }

    /// Number of `Y` factors; `X^x Z^z = i^{-ny} * (tensor of s_j)`.
    pub(crate) fn y_count(&self) -> u32 {
        (self.x_mask & self.z_mask).count_ones()
    }

    /// Same Pauli string with phase exponent reset to 0.
    pub fn unsigned(&self) -> Self {
        Self { phase_exp: 0, ..*self }
    }

    pub fn with_phase(&self, phase_exp: u8) -> Self {
        Self {
            phase_exp: phase_exp & 3,
            ..*self
        }
    }

    /// Symplectic form `x_P·z_Q ⊕ z_P·x_Q`; `true` means the two strings anticommute.
    pub fn anticommutes(&self, other: &Self) -> bool {
        ((self.x_mask & other.z_mask).count_ones() + (self.z_mask & other.x_mask).count_ones())
            & 1
            == 1
    }

    pub fn commutes(&self, other: &Self) -> bool {
        !self.anticommutes(other)
    }

    fn check_dims(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        Ok(())
    }

    /// Exact operator product `self · other`.
    pub fn product(&self, other: &Self) -> Result<Self> {
        self.check_dims(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        // Move to the X^x Z^z form, commute Z^{z1} past X^{x2}, move back.
        let x = self.x_mask ^ other.x_mask;
        let z = self.z_mask ^ other.z_mask;
        let swap = (self.z_mask & other.x_mask).count_ones();
        let phase = self.phase_exp as u32
            + other.phase_exp as u32
            + self.y_count()
            + other.y_count()
            + 2 * swap
            + 4 * 16
            - (x & z).count_ones();
        Self::from_raw(self.n, x, z, (phase & 3) as u8)
    }

    /// Weight of the anticommutator `{P, Q}`, or `None` when it vanishes.
    pub fn anticommutator_weight(&self, other: &Self) -> Result<Option<usize>> {
        self.check_dims(other)?;
        if !self.is_hermitian() {
            return Err(Error::NonHermitian(self.phase_exp));
        }
        if !other.is_hermitian() {
            return Err(Error::NonHermitian(other.phase_exp));
        }
        if self.anticommutes(other) {
            return Ok(None);
        }
        Ok(Some(self.mul_unchecked(other).weight()))
    }

    /// Every unsigned Pauli string on `n` qubits, `4^n` of them, ordered by `(x_mask, z_mask)`.
    pub fn all(n: usize) -> impl Iterator<Item = PauliOperator> {
        let size = 1u32 << n;
        (0..size).flat_map(move |x| (0..size).map(move |z| PauliOperator::from_raw(n, x, z, 0)))
    }
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.phase_exp {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        };
        f.write_str(prefix)?;
        for j in 0..self.n {
            let c = match ((self.x_mask >> j) & 1, (self.z_mask >> j) & 1) {
                (0, 0) => 'I',
                (1, 0) => 'X',
                (0, 1) => 'Z',
                _ => 'Y',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for PauliOperator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (phase, body) = if let Some(rest) = s.strip_prefix("+i") {
            (1, rest)
        } else if let Some(rest) = s.strip_prefix("-i") {
            (3, rest)
        } else if let Some(rest) = s.strip_prefix('+') {
            (0, rest)
        } else if let Some(rest) = s.strip_prefix('-') {
            (2, rest)
        } else {
            (0, s)
        };
        let n = body.chars().count();
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::Parse(format!("Pauli string `{s}` has unsupported length {n}")));
        }
        let (mut x, mut z) = (0u32, 0u32);
        for (j, c) in body.chars().enumerate() {
            let bit = 1u32 << j;
            match c.to_ascii_uppercase() {
                'I' => {}
                'X' => x |= bit,
                'Z' => z |= bit,
                'Y' => {
                    x |= bit;
                    z |= bit;
                }
                other => {
                    return Err(Error::Parse(format!("unknown Pauli factor `{other}` in `{s}`")))
                }
            }
        }
        PauliOperator::new(n, x, z, phase)
    }
}

//! Brute-force ground truth: explicit complex matrices and state vectors.
//!
//! Site 0 is the leftmost Kronecker factor, i.e. the most significant bit of
//! a basis index.

use num_complex::Complex64;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::pauli::{PauliIndex, Phase};
use crate::tensor::{BracketKind, PauliString};

/// Largest qubit count for dense matrices and state vectors.
pub const MAX_DENSE_QUBITS: usize = 12;

/// Tolerance for identities between exactly representable entries.
pub const ALGEBRA_TOL: f64 = 1e-12;

/// Per-amplitude tolerance for eigenvector checks.
pub const EIGEN_TOL: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn phase_value(phase: Phase) -> Complex64 {
    let (re, im) = phase.to_parts();
    Complex64::new(re as f64, im as f64)
}

fn check_cap(n: usize) -> Result<()> {
    if n > MAX_DENSE_QUBITS {
        return Err(Error::SizeCap {
            what: "dense evaluation",
            n,
            max: MAX_DENSE_QUBITS,
        });
    }
    Ok(())
}

/// Square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zeros(dim: usize) -> Self {
        DenseMatrix {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = DenseMatrix::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = ONE;
        }
        m
    }

    pub fn from_rows(rows: &[&[Complex64]]) -> Self {
        let dim = rows.len();
        assert!(rows.iter().all(|r| r.len() == dim), "matrix must be square");
        DenseMatrix {
            dim,
            data: rows.iter().flat_map(|r| r.iter().copied()).collect(),
        }
    }

    /// The standard 2×2 matrix for `σ_idx`.
    pub fn pauli(idx: PauliIndex) -> Self {
        let (o, z) = (ONE, ZERO);
        match idx {
            PauliIndex::I => DenseMatrix::from_rows(&[&[o, z], &[z, o]]),
            PauliIndex::X => DenseMatrix::from_rows(&[&[z, o], &[o, z]]),
            PauliIndex::Y => DenseMatrix::from_rows(&[&[z, -I], &[I, z]]),
            PauliIndex::Z => DenseMatrix::from_rows(&[&[o, z], &[z, -o]]),
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.data[row * self.dim + col] = value;
    }

    fn check_dim(&self, other: &DenseMatrix) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(())
    }

    pub fn kron(&self, other: &DenseMatrix) -> DenseMatrix {
        let (a, b) = (self.dim, other.dim);
        let dim = a * b;
        let mut out = DenseMatrix::zeros(dim);
        for r1 in 0..a {
            for c1 in 0..a {
                let s = self.get(r1, c1);
                if s == ZERO {
                    continue;
                }
                for r2 in 0..b {
                    for c2 in 0..b {
                        out.data[(r1 * b + r2) * dim + c1 * b + c2] = s * other.get(r2, c2);
                    }
                }
            }
        }
        out
    }

    pub fn matmul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        self.check_dim(other)?;
        let d = self.dim;
        let mut out = DenseMatrix::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let a = self.data[i * d + k];
                if a == ZERO {
                    continue;
                }
                let row = &other.data[k * d..(k + 1) * d];
                let dst = &mut out.data[i * d..(i + 1) * d];
                for (o, &b) in dst.iter_mut().zip(row) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        self.check_dim(other)?;
        Ok(DenseMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        self.check_dim(other)?;
        Ok(DenseMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn scale(&self, factor: Complex64) -> DenseMatrix {
        DenseMatrix {
            dim: self.dim,
            data: self.data.iter().map(|a| a * factor).collect(),
        }
    }

    pub fn adjoint(&self) -> DenseMatrix {
        let d = self.dim;
        let mut out = DenseMatrix::zeros(d);
        for r in 0..d {
            for c in 0..d {
                out.data[c * d + r] = self.data[r * d + c].conj();
            }
        }
        out
    }

    pub fn max_abs_diff(&self, other: &DenseMatrix) -> f64 {
        if self.dim != other.dim {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &DenseMatrix, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.data.iter().all(|a| a.norm() <= tol)
    }

    pub fn apply_vector(&self, v: &[Complex64]) -> Vec<Complex64> {
        let d = self.dim;
        (0..d)
            .map(|r| (0..d).map(|c| self.data[r * d + c] * v[c]).sum())
            .collect()
    }
}

/// Kronecker product of the standard Pauli matrices times the string's phase.
pub fn to_dense(p: &PauliString) -> Result<DenseMatrix> {
    check_cap(p.len())?;
    let m = p
        .sites()
        .fold(DenseMatrix::identity(1), |acc, s| acc.kron(&DenseMatrix::pauli(s)));
    Ok(m.scale(phase_value(p.phase())))
}

/// `AB − BA`.
pub fn commutator_dense(a: &DenseMatrix, b: &DenseMatrix) -> Result<DenseMatrix> {
    a.matmul(b)?.sub(&b.matmul(a)?)
}

/// `AB + BA`.
pub fn anticommutator_dense(a: &DenseMatrix, b: &DenseMatrix) -> Result<DenseMatrix> {
    a.matmul(b)?.add(&b.matmul(a)?)
}

/// Dense evaluation of the bracket expansion
/// `2^{1-n} Σ_S ⊗_p (p ∈ S ? [Ap,Bp] : {Ap,Bp})` over assignments `S` of the
/// parity selected by `kind`, for arbitrary square factors of equal size.
pub fn bracket_expansion_dense(a: &[DenseMatrix], b: &[DenseMatrix], kind: BracketKind) -> Result<DenseMatrix> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let n = a.len();
    if n == 0 || n > MAX_DENSE_QUBITS {
        return Err(Error::SizeCap {
            what: "bracket expansion",
            n,
            max: MAX_DENSE_QUBITS,
        });
    }
    let comms = a
        .iter()
        .zip(b)
        .map(|(x, y)| commutator_dense(x, y))
        .collect::<Result<Vec<_>>>()?;
    let antis = a
        .iter()
        .zip(b)
        .map(|(x, y)| anticommutator_dense(x, y))
        .collect::<Result<Vec<_>>>()?;
    let want_odd = kind == BracketKind::Commutator;
    let dim: usize = a.iter().map(DenseMatrix::dim).product();
    let mut total = DenseMatrix::zeros(dim);
    for mask in 0u32..(1 << n) {
        if (mask.count_ones() % 2 == 1) != want_odd {
            continue;
        }
        let term = (0..n).fold(DenseMatrix::identity(1), |acc, p| {
            acc.kron(if mask >> p & 1 == 1 { &comms[p] } else { &antis[p] })
        });
        total = total.add(&term)?;
    }
    Ok(total.scale(Complex64::new(0.5f64.powi(n as i32 - 1), 0.0)))
}

/// `2^n` complex amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn new(n: usize, amps: Vec<Complex64>) -> Result<Self> {
        check_cap(n)?;
        if amps.len() != 1 << n {
            return Err(Error::DimensionMismatch {
                left: amps.len(),
                right: 1 << n,
            });
        }
        Ok(StateVector { n, amps })
    }

    pub fn zeros(n: usize) -> Result<Self> {
        StateVector::new(n, vec![ZERO; 1 << n])
    }

    /// `|b⟩` where `b` is read with site 0 as the most significant bit.
    pub fn basis(n: usize, index: usize) -> Result<Self> {
        let mut s = StateVector::zeros(n)?;
        if index >= s.amps.len() {
            return Err(Error::OutOfRange(format!(
                "basis index {index} out of range for {n} qubits"
            )));
        }
        s.amps[index] = ONE;
        Ok(s)
    }

    pub fn qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Unit-norm copy; `None` for the zero vector.
    pub fn normalized(&self) -> Option<StateVector> {
        let norm = self.norm();
        (norm > EIGEN_TOL).then(|| StateVector {
            n: self.n,
            amps: self.amps.iter().map(|a| a / norm).collect(),
        })
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn scale(&self, factor: Complex64) -> StateVector {
        StateVector {
            n: self.n,
            amps: self.amps.iter().map(|a| a * factor).collect(),
        }
    }

    pub fn approx_eq(&self, other: &StateVector, tol: f64) -> bool {
        self.n == other.n && self.amps.iter().zip(&other.amps).all(|(a, b)| (a - b).norm() <= tol)
    }

    /// `(index, amplitude)` for amplitudes above `tol` in magnitude.
    pub fn nonzero_entries(&self, tol: f64) -> Vec<(usize, Complex64)> {
        self.amps
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm() > tol)
            .map(|(i, a)| (i, *a))
            .collect()
    }
}

impl Serialize for StateVector {
    /// `[[index, re, im], ...]` over nonzero amplitudes.
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let entries = self.nonzero_entries(1e-15);
        let mut seq = serializer.serialize_seq(Some(entries.len()))?;
        for (i, a) in entries {
            seq.serialize_element(&(i, a.re, a.im))?;
        }
        seq.end()
    }
}

/// Bit masks of `p` over the basis-index layout, plus the `Y` count.
fn basis_masks(p: &PauliString) -> (usize, usize, u32) {
    let n = p.len();
    let (mut xm, mut zm, mut ys) = (0usize, 0usize, 0u32);
    for (site, idx) in p.sites().enumerate() {
        let bit = 1usize << (n - 1 - site);
        let (x, z) = idx.xz();
        if x {
            xm |= bit;
        }
        if z {
            zm |= bit;
        }
        if x && z {
            ys += 1;
        }
    }
    (xm, zm, ys)
}

/// `P|s⟩` without materializing `P`; not renormalized.
pub fn apply(p: &PauliString, s: &StateVector) -> Result<StateVector> {
    check_cap(p.len())?;
    if p.len() != s.n {
        return Err(Error::DimensionMismatch {
            left: p.len(),
            right: s.n,
        });
    }
    let (xm, zm, ys) = basis_masks(p);
    // Y = iXZ, so σ = i^{#Y} X^x Z^z.
    let base = phase_value(p.phase() * Phase::from_exponent(ys as i64));
    let mut out = vec![ZERO; s.amps.len()];
    for (b, &a) in s.amps.iter().enumerate() {
        if a == ZERO {
            continue;
        }
        let sign = if (b & zm).count_ones() % 2 == 1 { -base } else { base };
        out[b ^ xm] += sign * a;
    }
    Ok(StateVector { n: s.n, amps: out })
}

/// `Some(λ)` when `P|s⟩ = λ|s⟩` within [`EIGEN_TOL`] per amplitude.
pub fn eigen_check(p: &PauliString, s: &StateVector) -> Result<Option<Complex64>> {
    let image = apply(p, s)?;
    let norm_sqr = s.inner(s).re;
    if norm_sqr <= EIGEN_TOL * EIGEN_TOL {
        return Ok(None);
    }
    let lambda = s.inner(&image) / norm_sqr;
    let ok = image
        .amps
        .iter()
        .zip(&s.amps)
        .all(|(v, a)| (v - lambda * a).norm() <= EIGEN_TOL);
    Ok(ok.then_some(lambda))
}

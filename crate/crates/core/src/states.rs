//! Named entangled states, eigenrelation tables and the pairwise PPT test.
//!
//! Basis convention: `|0⟩` is the +1 eigenvector of `Z`, and a Dicke term
//! with `m` excitations has Hamming weight `m`.

use std::fmt;
use std::str::FromStr;

use nalgebra::Matrix4;
use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::dense::{eigen_check, StateVector, MAX_DENSE_QUBITS};
use crate::error::{Error, Result};
use crate::paradox::{build_3qubit_family, build_nqubit_family};
use crate::pauli::PauliIndex;
use crate::tensor::PauliString;

/// A partial transpose eigenvalue below this certifies entanglement.
pub const PPT_THRESHOLD: f64 = -1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StateName {
    Psi1,
    Psi2,
    Psi3,
    Psi4,
    Phi1,
    Phi2,
    Phi3,
}

impl StateName {
    pub const ALL: [StateName; 7] = [
        StateName::Psi1,
        StateName::Psi2,
        StateName::Psi3,
        StateName::Psi4,
        StateName::Phi1,
        StateName::Phi2,
        StateName::Phi3,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            StateName::Psi1 => "psi1",
            StateName::Psi2 => "psi2",
            StateName::Psi3 => "psi3",
            StateName::Psi4 => "psi4",
            StateName::Phi1 => "phi1",
            StateName::Phi2 => "phi2",
            StateName::Phi3 => "phi3",
        }
    }

    pub fn is_three_qubit(self) -> bool {
        matches!(
            self,
            StateName::Psi1 | StateName::Psi2 | StateName::Psi3 | StateName::Psi4
        )
    }

    /// `(j, k)` of the three-qubit family each ψ state is attached to.
    pub fn psi_indices(self) -> Option<(PauliIndex, PauliIndex, PauliIndex)> {
        use PauliIndex::*;
        match self {
            StateName::Psi1 => Some((X, Y, Z)),
            StateName::Psi2 => Some((Y, X, Z)),
            StateName::Psi3 => Some((Z, X, Y)),
            StateName::Psi4 => Some((Y, Z, X)),
            _ => None,
        }
    }
}

impl fmt::Display for StateName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for StateName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        StateName::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| Error::UnsupportedState {
                name: s.to_string(),
                n: 0,
            })
    }
}

impl Serialize for StateName {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NamedState {
    pub name: StateName,
    pub n: usize,
    pub vector: StateVector,
}

/// Equal-weight sum of all `C(n, m)` basis states of Hamming weight `m`.
pub fn dicke_permutation_sum(n: usize, m: usize) -> Result<StateVector> {
    if m > n {
        return Err(Error::OutOfRange(format!("Dicke weight {m} exceeds n = {n}")));
    }
    if n > MAX_DENSE_QUBITS {
        return Err(Error::SizeCap {
            what: "Dicke state",
            n,
            max: MAX_DENSE_QUBITS,
        });
    }
    let mut s = StateVector::zeros(n)?;
    for (b, a) in s.amplitudes_mut().iter_mut().enumerate() {
        if b.count_ones() as usize == m {
            *a = Complex64::new(1.0, 0.0);
        }
    }
    Ok(s)
}

fn from_entries(n: usize, entries: &[(usize, Complex64)]) -> Result<StateVector> {
    let mut s = StateVector::zeros(n)?;
    for &(i, a) in entries {
        s.amplitudes_mut()[i] = a;
    }
    Ok(s)
}

fn accumulate(target: &mut StateVector, term: &StateVector, coeff: Complex64) {
    for (t, a) in target.amplitudes_mut().iter_mut().zip(term.amplitudes()) {
        *t += coeff * a;
    }
}

pub fn build_named(name: StateName, n: usize) -> Result<NamedState> {
    let unsupported = || Error::UnsupportedState {
        name: name.to_string(),
        n,
    };
    let c = Complex64::new;
    let vector = match name {
        _ if name.is_three_qubit() && n != 3 => return Err(unsupported()),
        StateName::Psi1 => {
            let h = std::f64::consts::FRAC_1_SQRT_2;
            from_entries(3, &[(0, c(h, 0.0)), (7, c(h, 0.0))])?
        }
        StateName::Psi2 => {
            let h = std::f64::consts::FRAC_1_SQRT_2;
            from_entries(3, &[(0, c(h, 0.0)), (7, c(0.0, -h))])?
        }
        StateName::Psi3 => from_entries(
            3,
            &[
                (0, c(0.5, 0.0)),
                (3, c(-0.5, 0.0)),
                (5, c(-0.5, 0.0)),
                (6, c(-0.5, 0.0)),
            ],
        )?,
        StateName::Psi4 => {
            let q = 0.5 * std::f64::consts::FRAC_1_SQRT_2;
            let entries: Vec<_> = (0..8)
                .map(|b: usize| {
                    (
                        b,
                        if b.count_ones().is_multiple_of(2) {
                            c(q, 0.0)
                        } else {
                            c(0.0, -q)
                        },
                    )
                })
                .collect();
            from_entries(3, &entries)?
        }
        StateName::Phi1 => {
            if !(2..=MAX_DENSE_QUBITS).contains(&n) {
                return Err(unsupported());
            }
            let h = std::f64::consts::FRAC_1_SQRT_2;
            from_entries(n, &[(0, c(h, 0.0)), ((1 << n) - 1, c(h, 0.0))])?
        }
        StateName::Phi2 | StateName::Phi3 => {
            if n.is_multiple_of(2) || !(3..=11).contains(&n) {
                return Err(unsupported());
            }
            let mut s = StateVector::zeros(n)?;
            for m in (0..n).step_by(2) {
                let sign = if (m / 2) % 2 == 0 { 1.0 } else { -1.0 };
                let coeff = if name == StateName::Phi2 {
                    c(sign, 0.0)
                } else {
                    c(1.0, 0.0)
                };
                accumulate(&mut s, &dicke_permutation_sum(n, m)?, coeff);
            }
            if name == StateName::Phi3 {
                let sign = if ((n - 1) / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
                for m in (1..=n).step_by(2) {
                    accumulate(&mut s, &dicke_permutation_sum(n, m)?, c(0.0, sign));
                }
            }
            s.normalized().ok_or_else(unsupported)?
        }
    };
    Ok(NamedState { name, n, vector })
}

/// The observable family each named state is tied to, and the signs it
/// carries on that state.
///
/// ψ states use the first four observables of the three-qubit family. φ1 and
/// φ2 use the n-qubit family with index pairs (1, 2) and (3, 1). φ3 uses the
/// first family found by [`stabilizing_families`].
pub fn associated_family(state: &NamedState) -> Result<Vec<PauliString>> {
    use PauliIndex::*;
    match state.name {
        name if name.is_three_qubit() => {
            let (j, k, l) = name.psi_indices().expect("three-qubit names carry indices");
            Ok(build_3qubit_family(j, k, l)?.into_iter().take(4).collect())
        }
        StateName::Phi1 if state.n < 3 => Err(Error::UnsupportedState {
            name: "phi1 (family needs n >= 3)".into(),
            n: state.n,
        }),
        StateName::Phi1 => build_nqubit_family(&vec![X; state.n], &vec![Y; state.n]),
        StateName::Phi2 => build_nqubit_family(&vec![Z; state.n], &vec![X; state.n]),
        _ => stabilizing_families(&state.vector)?
            .into_iter()
            .next()
            .map(|f| f.observables)
            .ok_or_else(|| Error::UnsupportedState {
                name: "phi3 (no stabilizing family)".into(),
                n: state.n,
            }),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenRelation {
    pub observable: PauliString,
    #[serde(serialize_with = "serialize_eigenvalue")]
    pub eigenvalue: Option<Complex64>,
}

fn serialize_eigenvalue<S: Serializer>(v: &Option<Complex64>, serializer: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        None => serializer.serialize_none(),
        Some(z) => serializer.serialize_str(&format_eigenvalue(*z)),
    }
}

/// `+1`, `-1`, `+i`, `-i`, or a complex literal otherwise.
pub fn format_eigenvalue(z: Complex64) -> String {
    let near = |a: f64, b: f64| (a - b).abs() < 1e-9;
    match (z.re, z.im) {
        (r, i) if near(r, 1.0) && near(i, 0.0) => "+1".into(),
        (r, i) if near(r, -1.0) && near(i, 0.0) => "-1".into(),
        (r, i) if near(r, 0.0) && near(i, 1.0) => "+i".into(),
        (r, i) if near(r, 0.0) && near(i, -1.0) => "-i".into(),
        (r, i) => format!("{r}{i:+}i"),
    }
}

pub fn verify_eigen_relations(state: &StateVector, observables: &[PauliString]) -> Result<Vec<EigenRelation>> {
    observables
        .iter()
        .map(|o| {
            Ok(EigenRelation {
                observable: o.clone(),
                eigenvalue: eigen_check(o, state)?,
            })
        })
        .collect()
}

/// An all-equal index choice `(j⃗, k⃗)` whose n-qubit family has the state as
/// a common eigenvector.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilizingFamily {
    pub j: PauliIndex,
    pub k: PauliIndex,
    pub observables: Vec<PauliString>,
    pub relations: Vec<EigenRelation>,
}

/// Scans the six all-equal `(j, k)` choices of the n-qubit family.
pub fn stabilizing_families(state: &StateVector) -> Result<Vec<StabilizingFamily>> {
    let n = state.qubits();
    let mut found = Vec::new();
    for j in PauliIndex::NONTRIVIAL {
        for k in PauliIndex::NONTRIVIAL {
            if j == k {
                continue;
            }
            let observables = build_nqubit_family(&vec![j; n], &vec![k; n])?;
            let relations = verify_eigen_relations(state, &observables)?;
            if relations.iter().all(|r| r.eigenvalue.is_some()) {
                found.push(StabilizingFamily {
                    j,
                    k,
                    observables,
                    relations,
                });
            }
        }
    }
    Ok(found)
}

/// Reduced density operator of sites `(a, b)`, indexed `2·bit_a + bit_b`.
pub fn reduced_two_qubit(state: &StateVector, a: usize, b: usize) -> Result<Matrix4<Complex64>> {
    let n = state.qubits();
    if a == b || a >= n || b >= n {
        return Err(Error::OutOfRange(format!(
            "site pair ({}, {}) invalid for {n} qubits",
            a + 1,
            b + 1
        )));
    }
    let (ma, mb) = (1usize << (n - 1 - a), 1usize << (n - 1 - b));
    let amps = state.amplitudes();
    let mut rho = Matrix4::<Complex64>::zeros();
    for rest in 0..amps.len() {
        if rest & (ma | mb) != 0 {
            continue;
        }
        let v = [amps[rest], amps[rest | mb], amps[rest | ma], amps[rest | ma | mb]];
        for r in 0..4 {
            for c in 0..4 {
                rho[(r, c)] += v[r] * v[c].conj();
            }
        }
    }
    Ok(rho)
}

/// Smallest eigenvalue of the partial transpose (on the second site) of the
/// reduced state of `(a, b)`.
pub fn min_partial_transpose_eigenvalue(state: &StateVector, a: usize, b: usize) -> Result<f64> {
    let rho = reduced_two_qubit(state, a, b)?;
    let pt = Matrix4::from_fn(|r, c| {
        let (ra, rb, ca, cb) = (r >> 1, r & 1, c >> 1, c & 1);
        rho[(2 * ra + cb, 2 * ca + rb)]
    });
    Ok(pt.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min))
}

/// Positive-partial-transpose test on the two-site reduced state; conclusive
/// for two qubits.
pub fn bipartite_entangled(state: &StateVector, pair: (usize, usize)) -> Result<bool> {
    Ok(min_partial_transpose_eigenvalue(state, pair.0, pair.1)? < PPT_THRESHOLD)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairVerdict {
    pub sites: (usize, usize),
    pub min_eigenvalue: f64,
    pub entangled: bool,
}

/// PPT verdicts for every site pair, sites reported 1-based.
pub fn pairwise_entanglement(state: &StateVector) -> Result<Vec<PairVerdict>> {
    let n = state.qubits();
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let min = min_partial_transpose_eigenvalue(state, a, b)?;
            out.push(PairVerdict {
                sites: (a + 1, b + 1),
                min_eigenvalue: min,
                entangled: min < PPT_THRESHOLD,
            });
        }
    }
    Ok(out)
}

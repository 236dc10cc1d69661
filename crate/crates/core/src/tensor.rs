//! n-qubit Pauli strings in symplectic form and the bracket decomposition of
//! commutators and anticommutators of tensor products.
//!
//! A string stores two bit vectors `x` and `z` (site `p` is bit `p`) plus a
//! global [`Phase`]. The phase is the coefficient in front of the tensor
//! product of *standard* Pauli matrices, so `-iXYZ` means `-i · X⊗Y⊗Z`.
//!
//! For `P = A1⊗…⊗An` and `Q = B1⊗…⊗Bn` one has
//!
//! ```text
//! [P, Q] = 2^{1-n} Σ_{|S| odd}  ⊗_p ( p ∈ S ? [Ap, Bp] : {Ap, Bp} )
//! {P, Q} = 2^{1-n} Σ_{|S| even} ⊗_p ( p ∈ S ? [Ap, Bp] : {Ap, Bp} )
//! ```
//!
//! For Pauli factors each single-site bracket is either zero or `2·σaσb`, and
//! exactly one assignment `S` survives across both sums: the set of sites where
//! the factors anticommute.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::pauli::{anticommutes_single, single_product, PauliIndex, Phase};

/// Largest site count for which full decomposition lists are produced.
pub const MAX_DECOMPOSITION_QUBITS: usize = 16;

const WORD: usize = 64;

#[inline]
fn words_for(n: usize) -> usize {
    n.div_ceil(WORD)
}

/// A set of sites `0..n` stored as a bit vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SiteSet {
    n: usize,
    bits: Vec<u64>,
}

impl SiteSet {
    pub fn empty(n: usize) -> Self {
        SiteSet {
            n,
            bits: vec![0; words_for(n)],
        }
    }

    pub fn from_sites(n: usize, sites: impl IntoIterator<Item = usize>) -> Self {
        let mut set = SiteSet::empty(n);
        for s in sites {
            set.insert(s);
        }
        set
    }

    fn from_words(n: usize, bits: Vec<u64>) -> Self {
        SiteSet { n, bits }
    }

    pub fn insert(&mut self, site: usize) {
        assert!(site < self.n, "site {site} out of range for {} sites", self.n);
        self.bits[site / WORD] |= 1 << (site % WORD);
    }

    #[inline]
    pub fn contains(&self, site: usize) -> bool {
        site < self.n && self.bits[site / WORD] >> (site % WORD) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    /// Number of sites in the universe, not the set size.
    pub fn universe(&self) -> usize {
        self.n
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(|&s| self.contains(s))
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl Serialize for SiteSet {
    /// Serialized as a list of 1-based site numbers.
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter().map(|s| s + 1))
    }
}

/// `σ_{j1} ⊗ … ⊗ σ_{jn}` times a phase.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    phase: Phase,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        PauliString {
            n,
            x: vec![0; words_for(n)],
            z: vec![0; words_for(n)],
            phase: Phase::ONE,
        }
    }

    pub fn new(phase: Phase, sites: &[PauliIndex]) -> Self {
        let mut s = PauliString::identity(sites.len());
        for (p, &idx) in sites.iter().enumerate() {
            s.set_site(p, idx);
        }
        s.phase = phase;
        s
    }

    pub fn from_sites(sites: &[PauliIndex]) -> Self {
        PauliString::new(Phase::ONE, sites)
    }

    /// Builds `σ_{j1…jn}` from raw indices in `0..=3`.
    pub fn from_indices(indices: &[u8]) -> Result<Self> {
        let sites = indices
            .iter()
            .map(|&v| PauliIndex::from_u8(v))
            .collect::<Result<Vec<_>>>()?;
        Ok(PauliString::from_sites(&sites))
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn with_phase(mut self, phase: Phase) -> Self {
        self.phase = phase;
        self
    }

    pub fn x_bits(&self) -> &[u64] {
        &self.x
    }

    pub fn z_bits(&self) -> &[u64] {
        &self.z
    }

    #[inline]
    pub fn site(&self, p: usize) -> PauliIndex {
        let (w, b) = (p / WORD, p % WORD);
        PauliIndex::from_xz(self.x[w] >> b & 1 == 1, self.z[w] >> b & 1 == 1)
    }

    pub fn set_site(&mut self, p: usize, idx: PauliIndex) {
        assert!(p < self.n);
        let (w, b) = (p / WORD, p % WORD);
        let (x, z) = idx.xz();
        self.x[w] = (self.x[w] & !(1 << b)) | ((x as u64) << b);
        self.z[w] = (self.z[w] & !(1 << b)) | ((z as u64) << b);
    }

    pub fn sites(&self) -> impl Iterator<Item = PauliIndex> + '_ {
        (0..self.n).map(|p| self.site(p))
    }

    pub fn to_indices(&self) -> Vec<PauliIndex> {
        self.sites().collect()
    }

    /// Sites carrying a non-identity factor.
    pub fn support(&self) -> SiteSet {
        SiteSet::from_words(self.n, self.x.iter().zip(&self.z).map(|(x, z)| x | z).collect())
    }

    pub fn weight(&self) -> usize {
        self.support().len()
    }

    /// Phase times `I⊗…⊗I`.
    pub fn is_identity_proportional(&self) -> bool {
        self.x.iter().chain(&self.z).all(|&w| w == 0)
    }

    /// Equal tensor factors, ignoring the phase.
    pub fn same_sites(&self, other: &PauliString) -> bool {
        self.n == other.n && self.x == other.x && self.z == other.z
    }

    fn check_len(&self, other: &PauliString) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    fn y_count(x: &[u64], z: &[u64]) -> u32 {
        x.iter().zip(z).map(|(a, b)| (a & b).count_ones()).sum()
    }

    /// Sitewise product `(σ_{j1}σ_{k1}) ⊗ … ⊗ (σ_{jn}σ_{kn})`, with every
    /// local phase folded into the global one.
    pub fn multiply(&self, other: &PauliString) -> Result<PauliString> {
        self.check_len(other)?;
        // σ = i^{x·z} X^x Z^z per site, and Z^z X^x = (-1)^{z·x} X^x Z^z.
        let x: Vec<u64> = self.x.iter().zip(&other.x).map(|(a, b)| a ^ b).collect();
        let z: Vec<u64> = self.z.iter().zip(&other.z).map(|(a, b)| a ^ b).collect();
        let swap: u32 = self.z.iter().zip(&other.x).map(|(a, b)| (a & b).count_ones()).sum();
        let exponent = self.phase.exponent() as i64
            + other.phase.exponent() as i64
            + Self::y_count(&self.x, &self.z) as i64
            + Self::y_count(&other.x, &other.z) as i64
            + 2 * swap as i64
            - Self::y_count(&x, &z) as i64;
        Ok(PauliString {
            n: self.n,
            x,
            z,
            phase: Phase::from_exponent(exponent),
        })
    }

    fn anticommuting_words(&self, other: &PauliString) -> Vec<u64> {
        self.x
            .iter()
            .zip(&self.z)
            .zip(other.x.iter().zip(&other.z))
            .map(|((x1, z1), (x2, z2))| (x1 & z2) ^ (z1 & x2))
            .collect()
    }

    /// Whether `[P, Q] = 0` as `2^n × 2^n` matrices: the number of locally
    /// anticommuting sites is even.
    pub fn global_commutes(&self, other: &PauliString) -> Result<bool> {
        self.check_len(other)?;
        let parity: u32 = self.anticommuting_words(other).iter().map(|w| w.count_ones()).sum();
        Ok(parity.is_multiple_of(2))
    }

    /// Sites `p` where `{σ_{jp}, σ_{kp}} = 0`, i.e. where the local commutator
    /// is nonzero.
    pub fn local_noncommuting_sites(&self, other: &PauliString) -> Result<SiteSet> {
        self.check_len(other)?;
        Ok(SiteSet::from_words(self.n, self.anticommuting_words(other)))
    }

    pub fn decompose_commutator(&self, other: &PauliString) -> Result<Decomposition> {
        Decomposition::new(self, other, BracketKind::Commutator)
    }

    pub fn decompose_anticommutator(&self, other: &PauliString) -> Result<Decomposition> {
        Decomposition::new(self, other, BracketKind::Anticommutator)
    }

    /// The single nonzero summand across both decompositions.
    pub fn unique_nonzero_term(&self, other: &PauliString) -> Result<(BracketKind, DecompositionTerm)> {
        let sites = self.local_noncommuting_sites(other)?;
        let kind = if sites.len() % 2 == 1 {
            BracketKind::Commutator
        } else {
            BracketKind::Anticommutator
        };
        let term = evaluate_term(
            self,
            other,
            BracketAssignment {
                commutator_sites: sites,
            },
        );
        debug_assert!(!term.is_zero());
        Ok((kind, term))
    }
}

impl std::ops::Neg for PauliString {
    type Output = PauliString;

    fn neg(mut self) -> PauliString {
        self.phase = -self.phase;
        self
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.phase.prefix())?;
        for s in self.sites() {
            write!(f, "{}", s.letter())?;
        }
        Ok(())
    }
}

impl Serialize for PauliString {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl FromStr for PauliString {
    type Err = Error;

    /// Grammar: optional phase prefix (`+`, `-`, `i`, `+i`, `-i`) followed by
    /// one or more of `IXYZ`, or one or more of `0123`. Positions in errors are
    /// 1-based character positions.
    fn from_str(text: &str) -> Result<Self> {
        let chars: Vec<char> = text.chars().collect();
        let mut pos = 0;
        let mut phase = Phase::ONE;
        if chars.first() == Some(&'+') {
            pos = 1;
        } else if chars.first() == Some(&'-') {
            phase = Phase::MINUS_ONE;
            pos = 1;
        }
        if chars.get(pos) == Some(&'i') {
            phase *= Phase::I;
            pos += 1;
        }
        if pos == chars.len() {
            return Err(Error::Parse {
                position: pos + 1,
                message: "expected at least one Pauli symbol".into(),
            });
        }

        #[derive(PartialEq)]
        enum Form {
            Letters,
            Digits,
        }
        let mut form = None;
        let mut sites = Vec::with_capacity(chars.len() - pos);
        for (offset, &c) in chars[pos..].iter().enumerate() {
            let position = pos + offset + 1;
            let (idx, this) = if let Some(idx) = PauliIndex::from_letter(c) {
                (idx, Form::Letters)
            } else if let Some(idx) = PauliIndex::from_digit(c) {
                (idx, Form::Digits)
            } else {
                return Err(Error::Parse {
                    position,
                    message: format!("invalid symbol '{c}'"),
                });
            };
            match &form {
                None => form = Some(this),
                Some(f) if *f != this => {
                    return Err(Error::Parse {
                        position,
                        message: format!("'{c}' mixes letter and digit forms"),
                    })
                }
                _ => {}
            }
            sites.push(idx);
        }
        Ok(PauliString::new(phase, &sites))
    }
}

/// Which bracket a decomposition expands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BracketKind {
    Commutator,
    Anticommutator,
}

impl BracketKind {
    /// Parity of `|commutator_sites|` for summands of this bracket.
    fn parity(self) -> usize {
        match self {
            BracketKind::Commutator => 1,
            BracketKind::Anticommutator => 0,
        }
    }
}

/// Sites receiving the commutator bracket; the rest get the anticommutator.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct BracketAssignment {
    pub commutator_sites: SiteSet,
}

/// `2^log2_scale · pauli`, exact.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ScaledPauli {
    pub log2_scale: i32,
    pub pauli: PauliString,
}

/// One summand of a bracket decomposition, prefactor `2^{1-n}` included.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecompositionTerm {
    pub assignment: BracketAssignment,
    pub value: Option<ScaledPauli>,
}

impl DecompositionTerm {
    pub fn is_zero(&self) -> bool {
        self.value.is_none()
    }
}

/// Evaluates the summand for `assignment` site by site.
fn evaluate_term(p: &PauliString, q: &PauliString, assignment: BracketAssignment) -> DecompositionTerm {
    let n = p.len();
    let mut phase = p.phase() * q.phase();
    let mut sites = Vec::with_capacity(n);
    for site in 0..n {
        let (a, b) = (p.site(site), q.site(site));
        let anti = anticommutes_single(a, b);
        // [a,b] = 2ab when they anticommute, {a,b} = 2ab when they commute.
        if assignment.commutator_sites.contains(site) != anti {
            return DecompositionTerm {
                assignment,
                value: None,
            };
        }
        let (ph, c) = single_product(a, b);
        phase *= ph;
        sites.push(c);
    }
    // 2^n from the brackets, 2^{1-n} from the prefactor.
    let value = ScaledPauli {
        log2_scale: 1,
        pauli: PauliString::new(phase, &sites),
    };
    DecompositionTerm {
        assignment,
        value: Some(value),
    }
}

/// Lazily enumerates the summands of one bracket decomposition, ordered by
/// assignment size and then lexicographically by site list.
#[derive(Debug, Clone)]
pub struct Decomposition {
    p: PauliString,
    q: PauliString,
    kind: BracketKind,
    size: usize,
    combo: Option<Vec<usize>>,
}

impl Decomposition {
    fn new(p: &PauliString, q: &PauliString, kind: BracketKind) -> Result<Self> {
        p.check_len(q)?;
        if p.len() > MAX_DECOMPOSITION_QUBITS {
            return Err(Error::SizeCap {
                what: "decomposition enumeration",
                n: p.len(),
                max: MAX_DECOMPOSITION_QUBITS,
            });
        }
        let size = kind.parity();
        let combo = (size <= p.len()).then(|| (0..size).collect());
        Ok(Decomposition {
            p: p.clone(),
            q: q.clone(),
            kind,
            size,
            combo,
        })
    }

    pub fn kind(&self) -> BracketKind {
        self.kind
    }

    /// Number of summands, `2^{n-1}`.
    pub fn term_count(&self) -> usize {
        1 << (self.p.len().max(1) - 1)
    }

    fn advance(&mut self) {
        let n = self.p.len();
        let Some(c) = self.combo.as_mut() else { return };
        let k = c.len();
        // next k-combination in lexicographic order
        let mut i = k;
        while i > 0 {
            i -= 1;
            if c[i] < n - k + i {
                c[i] += 1;
                for j in i + 1..k {
                    c[j] = c[j - 1] + 1;
                }
                return;
            }
        }
        self.size += 2;
        self.combo = (self.size <= n).then(|| (0..self.size).collect());
    }
}

impl Iterator for Decomposition {
    type Item = DecompositionTerm;

    fn next(&mut self) -> Option<DecompositionTerm> {
        let combo = self.combo.clone()?;
        self.advance();
        let assignment = BracketAssignment {
            commutator_sites: SiteSet::from_sites(self.p.len(), combo),
        };
        Some(evaluate_term(&self.p, &self.q, assignment))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn parse_examples() {
        let p = ps("XYI");
        assert_eq!(p.to_indices(), vec![PauliIndex::X, PauliIndex::Y, PauliIndex::I]);
        assert_eq!(p.phase(), Phase::ONE);

        let q = ps("-i330");
        assert_eq!(q.to_indices(), vec![PauliIndex::Z, PauliIndex::Z, PauliIndex::I]);
        assert_eq!(q.phase(), Phase::MINUS_I);

        assert_eq!(ps("iX").phase(), Phase::I);
        assert_eq!(ps("+iX").phase(), Phase::I);
        assert_eq!(ps("-Z").phase(), Phase::MINUS_ONE);
    }

    #[test]
    fn parse_errors() {
        match "XQ".parse::<PauliString>() {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 2),
            other => panic!("unexpected {other:?}"),
        }
        match "X1Z".parse::<PauliString>() {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!("".parse::<PauliString>().is_err());
        assert!("-i".parse::<PauliString>().is_err());
        assert!("xyz".parse::<PauliString>().is_err());
    }

    #[test]
    fn display_is_canonical() {
        assert_eq!(ps("-i123").to_string(), "-iXYZ");
        assert_eq!(ps("iZ").to_string(), "+iZ");
        assert_eq!(ps("XY").to_string(), "+XY");
    }

    #[test]
    fn multiply_examples() {
        assert_eq!(ps("XX").multiply(&ps("YX")).unwrap(), ps("iZI"));
        let p = ps("-iXZY");
        assert_eq!(ps("III").multiply(&p).unwrap(), p);
        let xyz = ps("X").multiply(&ps("Y")).unwrap().multiply(&ps("Z")).unwrap();
        assert_eq!(xyz, ps("iI"));
        assert!(matches!(
            ps("X").multiply(&ps("XX")),
            Err(Error::DimensionMismatch { left: 1, right: 2 })
        ));
    }

    #[test]
    fn multiply_matches_sitewise_fold() {
        for a in 0..64u32 {
            for b in 0..64u32 {
                let idx = |v: u32| -> Vec<u8> { (0..3).map(|k| ((v >> (2 * k)) & 3) as u8).collect() };
                let p = PauliString::from_indices(&idx(a)).unwrap();
                let q = PauliString::from_indices(&idx(b)).unwrap();
                let mut phase = Phase::ONE;
                let mut sites = vec![];
                for s in 0..3 {
                    let (ph, c) = single_product(p.site(s), q.site(s));
                    phase *= ph;
                    sites.push(c);
                }
                assert_eq!(p.multiply(&q).unwrap(), PauliString::new(phase, &sites));
            }
        }
    }

    #[test]
    fn commutation_examples() {
        assert!(ps("XY").global_commutes(&ps("YX")).unwrap());
        assert!(!ps("XI").global_commutes(&ps("YI")).unwrap());
        assert_eq!(
            ps("XY").local_noncommuting_sites(&ps("YX")).unwrap().to_vec(),
            vec![0, 1]
        );
        assert_eq!(ps("XX").local_noncommuting_sites(&ps("YX")).unwrap().to_vec(), vec![0]);
        assert!(ps("XYZ").local_noncommuting_sites(&ps("XYZ")).unwrap().is_empty());
    }

    #[test]
    fn decomposition_order_and_counts() {
        let p = ps("XYZ");
        let comm: Vec<_> = p
            .decompose_commutator(&p)
            .unwrap()
            .map(|t| t.assignment.commutator_sites.to_vec())
            .collect();
        assert_eq!(comm, vec![vec![0], vec![1], vec![2], vec![0, 1, 2]]);
        let anti: Vec<_> = p
            .decompose_anticommutator(&p)
            .unwrap()
            .map(|t| t.assignment.commutator_sites.to_vec())
            .collect();
        assert_eq!(anti, vec![vec![], vec![0, 1], vec![0, 2], vec![1, 2]]);
        let single: Vec<_> = ps("X").decompose_anticommutator(&ps("X")).unwrap().collect();
        assert_eq!(single.len(), 1);
        assert_eq!(ps("X").decompose_commutator(&ps("X")).unwrap().count(), 1);
    }

    #[test]
    fn decomposition_examples() {
        assert!(ps("XX").decompose_commutator(&ps("YY")).unwrap().all(|t| t.is_zero()));

        let nonzero: Vec<_> = ps("XX")
            .decompose_commutator(&ps("YX"))
            .unwrap()
            .filter(|t| !t.is_zero())
            .collect();
        assert_eq!(nonzero.len(), 1);
        assert_eq!(nonzero[0].assignment.commutator_sites.to_vec(), vec![0]);
        // 2i·ZI
        assert_eq!(
            nonzero[0].value,
            Some(ScaledPauli {
                log2_scale: 1,
                pauli: ps("iZI")
            })
        );

        let anti: Vec<_> = ps("XX")
            .decompose_anticommutator(&ps("YY"))
            .unwrap()
            .filter(|t| !t.is_zero())
            .collect();
        assert_eq!(anti.len(), 1);
        assert_eq!(anti[0].assignment.commutator_sites.to_vec(), vec![0, 1]);
        // -2·ZZ
        assert_eq!(
            anti[0].value,
            Some(ScaledPauli {
                log2_scale: 1,
                pauli: ps("-ZZ")
            })
        );

        let id: Vec<_> = ps("II")
            .decompose_anticommutator(&ps("II"))
            .unwrap()
            .filter(|t| !t.is_zero())
            .collect();
        assert_eq!(
            id[0].value,
            Some(ScaledPauli {
                log2_scale: 1,
                pauli: ps("II")
            })
        );
        assert!(ps("XX")
            .decompose_anticommutator(&ps("YX"))
            .unwrap()
            .all(|t| t.is_zero()));
    }

    #[test]
    fn unique_term_examples() {
        let (kind, term) = ps("XX").unique_nonzero_term(&ps("YX")).unwrap();
        assert_eq!(kind, BracketKind::Commutator);
        assert_eq!(term.assignment.commutator_sites.to_vec(), vec![0]);
        let (kind, term) = ps("XX").unique_nonzero_term(&ps("YY")).unwrap();
        assert_eq!(kind, BracketKind::Anticommutator);
        assert_eq!(term.assignment.commutator_sites.to_vec(), vec![0, 1]);
        let (kind, term) = ps("ZYX").unique_nonzero_term(&ps("ZYX")).unwrap();
        assert_eq!(kind, BracketKind::Anticommutator);
        assert!(term.assignment.commutator_sites.is_empty());
    }

    #[test]
    fn decomposition_cap() {
        let p = PauliString::identity(17);
        assert!(matches!(p.decompose_commutator(&p), Err(Error::SizeCap { .. })));
        let (_, term) = p.unique_nonzero_term(&p).unwrap();
        assert!(!term.is_zero());
    }

    #[test]
    fn long_strings_cross_word_boundary() {
        let mut p = PauliString::identity(130);
        let mut q = PauliString::identity(130);
        p.set_site(3, PauliIndex::X);
        q.set_site(3, PauliIndex::Z);
        p.set_site(127, PauliIndex::Y);
        q.set_site(127, PauliIndex::X);
        assert!(p.global_commutes(&q).unwrap());
        assert_eq!(p.local_noncommuting_sites(&q).unwrap().to_vec(), vec![3, 127]);
        let r = p.multiply(&q).unwrap();
        assert_eq!(r.site(3), PauliIndex::Y);
        assert_eq!(r.site(127), PauliIndex::Z);
        // XZ = -iY, YX = -iZ
        assert_eq!(r.phase(), Phase::MINUS_ONE);
    }
}

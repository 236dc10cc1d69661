//! Kochen-Specker sign paradoxes built from mutually commuting Pauli strings.
//!
//! A certificate compares two ordered products of observables. Each group is
//! one measurement context (its members commute pairwise). The comparison is a
//! paradox when the two products are opposite as operators while every site
//! sees the same local operators up to reordering, so any assignment of local
//! values would give both products the same value.

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::dense::{apply, StateVector, EIGEN_TOL, MAX_DENSE_QUBITS};
use crate::error::{Error, Result};
use crate::pauli::{sequence_product, single_product, PauliIndex, Phase};
use crate::tensor::{BracketKind, PauliString, ScaledPauli};

/// Two ordered groups of observable indices. Groups may share members.
/// Indices are 0-based here and 1-based when serialized.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Partition {
    #[serde(serialize_with = "one_based")]
    pub group_a: Vec<usize>,
    #[serde(serialize_with = "one_based")]
    pub group_b: Vec<usize>,
}

fn one_based<S: Serializer>(v: &[usize], serializer: S) -> std::result::Result<S::Ok, S::Error> {
    serializer.collect_seq(v.iter().map(|i| i + 1))
}

impl Partition {
    /// The first observable against the ordered product of all the others.
    pub fn first_vs_rest(len: usize) -> Self {
        Partition {
            group_a: vec![0],
            group_b: (1..len).collect(),
        }
    }
}

/// Local operators met at one site by both products, in order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SiteTrace {
    pub site: usize,
    pub sequence_a: Vec<PauliIndex>,
    pub sequence_b: Vec<PauliIndex>,
    pub local_a: (Phase, PauliIndex),
    pub local_b: (Phase, PauliIndex),
}

impl Serialize for SiteTrace {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            site: usize,
            sequence_a: &'a [PauliIndex],
            sequence_b: &'a [PauliIndex],
            local_phase_a: Phase,
            local_result_a: PauliIndex,
            local_phase_b: Phase,
            local_result_b: PauliIndex,
        }
        Repr {
            site: self.site + 1,
            sequence_a: &self.sequence_a,
            sequence_b: &self.sequence_b,
            local_phase_a: self.local_a.0,
            local_result_a: self.local_a.1,
            local_phase_b: self.local_b.0,
            local_result_b: self.local_b.1,
        }
        .serialize(serializer)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParadoxCertificate {
    pub observables: Vec<PauliString>,
    pub partition: Partition,
    /// Every group is a set of pairwise globally compatible observables.
    pub commutation_ok: bool,
    /// All observables, across groups, are pairwise compatible.
    pub jointly_compatible: bool,
    pub product_a: PauliString,
    pub product_b: PauliString,
    pub sign_a: Phase,
    pub sign_b: Phase,
    pub identity_proportional: bool,
    /// `product_a / product_b` when both have the same tensor factors.
    pub relative_sign: Option<Phase>,
    /// Per-site `local_a / local_b`, when every site is comparable.
    pub local_phase_ratios: Option<Vec<Phase>>,
    pub paradox: bool,
    pub site_traces: Vec<SiteTrace>,
}

impl ParadoxCertificate {
    /// Sites whose two local orderings differ by a sign.
    pub fn sign_flip_sites(&self) -> Vec<usize> {
        self.local_phase_ratios
            .iter()
            .flatten()
            .enumerate()
            .filter(|(_, &r)| r == Phase::MINUS_ONE)
            .map(|(s, _)| s)
            .collect()
    }
}

fn check_same_len(observables: &[PauliString]) -> Result<usize> {
    let n = observables.first().map_or(0, PauliString::len);
    if let Some(bad) = observables.iter().find(|o| o.len() != n) {
        return Err(Error::DimensionMismatch {
            left: n,
            right: bad.len(),
        });
    }
    Ok(n)
}

fn first_incompatible(observables: &[PauliString], members: &[usize]) -> Result<Option<(usize, usize)>> {
    for (i, &a) in members.iter().enumerate() {
        for &b in &members[i + 1..] {
            if !observables[a].global_commutes(&observables[b])? {
                return Ok(Some((a, b)));
            }
        }
    }
    Ok(None)
}

fn ordered_product(observables: &[PauliString], members: &[usize], n: usize) -> Result<PauliString> {
    members
        .iter()
        .try_fold(PauliString::identity(n), |acc, &i| acc.multiply(&observables[i]))
}

/// `P·Q·R` for pairwise compatible `P`, `Q`, `R`.
pub fn triple_product(p: &PauliString, q: &PauliString, r: &PauliString) -> Result<PauliString> {
    let all = [p.clone(), q.clone(), r.clone()];
    check_same_len(&all)?;
    if let Some((a, b)) = first_incompatible(&all, &[0, 1, 2])? {
        return Err(Error::Incompatible { first: a, second: b });
    }
    p.multiply(q)?.multiply(r)
}

/// Single-site value `2^log2 · phase · σ`.
type LocalValue = Option<(i32, Phase, PauliIndex)>;

fn local_bracket(kind: BracketKind, left: LocalValue, right: PauliIndex) -> LocalValue {
    let (log2, phase, a) = left?;
    let anti = crate::pauli::anticommutes_single(a, right);
    // [a,b] = 2ab iff they anticommute, {a,b} = 2ab iff they commute
    if (kind == BracketKind::Commutator) != anti {
        return None;
    }
    let (ph, c) = single_product(a, right);
    Some((log2 + 1, phase * ph, c))
}

/// The four nested-bracket summands of `P·Q·R = 2^{-4} Σ (⊗_p ((σ_jp,σ_lp),σ_rp))`
/// for two-qubit observables, in the order
/// `([ ],[ ])`, `([ ],{ })`, `({ },[ ])`, `({ },{ })` (inner, outer).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TripleExpansion {
    pub terms: [Option<ScaledPauli>; 4],
}

impl TripleExpansion {
    pub fn nonzero_count(&self) -> usize {
        self.terms.iter().filter(|t| t.is_some()).count()
    }

    /// The sum, when exactly one summand survives.
    pub fn single_value(&self) -> Option<&ScaledPauli> {
        if self.nonzero_count() != 1 {
            return None;
        }
        self.terms.iter().flatten().next()
    }
}

pub fn triple_product_expansion(p: &PauliString, q: &PauliString, r: &PauliString) -> Result<TripleExpansion> {
    let n = check_same_len(&[p.clone(), q.clone(), r.clone()])?;
    if n != 2 {
        return Err(Error::IndexConstraint(format!(
            "nested-bracket expansion is for 2 qubits, got {n}"
        )));
    }
    use BracketKind::{Anticommutator as A, Commutator as C};
    let kinds = [(C, C), (C, A), (A, C), (A, A)];
    let terms = kinds.map(|(inner, outer)| {
        let mut log2 = -4;
        let mut phase = p.phase() * q.phase() * r.phase();
        let mut sites = Vec::with_capacity(2);
        for s in 0..2 {
            let first = Some((0, Phase::ONE, p.site(s)));
            let (l, ph, c) = local_bracket(outer, local_bracket(inner, first, q.site(s)), r.site(s))?;
            log2 += l;
            phase *= ph;
            sites.push(c);
        }
        Some(ScaledPauli {
            log2_scale: log2,
            pauli: PauliString::new(phase, &sites),
        })
    });
    Ok(TripleExpansion { terms })
}

/// The two Mermin-square contexts `(XY, YX, ZZ)` and `(XX, YY, ZZ)`.
pub fn mermin_triples() -> ([PauliString; 3], [PauliString; 3]) {
    let p = |s: &[u8]| PauliString::from_indices(s).expect("valid indices");
    (
        [p(&[1, 2]), p(&[2, 1]), p(&[3, 3])],
        [p(&[1, 1]), p(&[2, 2]), p(&[3, 3])],
    )
}

/// Observables `[XY, YX, ZZ, XX, YY]` and the partition comparing the two
/// Mermin contexts through the shared `ZZ`.
pub fn mermin_setup() -> (Vec<PauliString>, Partition) {
    let (a, b) = mermin_triples();
    let observables = vec![a[0].clone(), a[1].clone(), a[2].clone(), b[0].clone(), b[1].clone()];
    (
        observables,
        Partition {
            group_a: vec![0, 1, 2],
            group_b: vec![3, 4, 2],
        },
    )
}

fn check_distinct_nontrivial(labels: &[(char, PauliIndex)]) -> Result<()> {
    for (i, &(name, v)) in labels.iter().enumerate() {
        if v.is_identity() {
            return Err(Error::IndexConstraint(format!("{name} must be one of 1, 2, 3")));
        }
        if let Some(&(other, _)) = labels[..i].iter().find(|(_, w)| *w == v) {
            return Err(Error::IndexConstraint(format!("{other} and {name} must differ")));
        }
    }
    Ok(())
}

/// `σ_jjj, σ_jkk, σ_kjk, σ_kkj, σ_ll0` for pairwise distinct nontrivial `j, k, l`.
pub fn build_3qubit_family(j: PauliIndex, k: PauliIndex, l: PauliIndex) -> Result<Vec<PauliString>> {
    check_distinct_nontrivial(&[('j', j), ('k', k), ('l', l)])?;
    let f = PauliString::from_sites;
    Ok(vec![
        f(&[j, j, j]),
        f(&[j, k, k]),
        f(&[k, j, k]),
        f(&[k, k, j]),
        f(&[l, l, PauliIndex::I]),
    ])
}

/// Compares `σ_ll0 σ_jjj σ_kkj` with `σ_ll0 σ_kjk σ_jkk` in a
/// [`build_3qubit_family`] list.
pub fn three_qubit_partition() -> Partition {
    Partition {
        group_a: vec![4, 0, 3],
        group_b: vec![4, 2, 1],
    }
}

/// `σ_{j1…jn}` followed by the `n` strings obtained by swapping `j` for `k` at
/// two cyclically adjacent sites: `(n-1, n), (n-2, n-1), …, (1, 2)`, then the
/// wrap-around pair `(1, n)`.
pub fn build_nqubit_family(jvec: &[PauliIndex], kvec: &[PauliIndex]) -> Result<Vec<PauliString>> {
    let n = jvec.len();
    if kvec.len() != n {
        return Err(Error::DimensionMismatch {
            left: n,
            right: kvec.len(),
        });
    }
    if n < 3 {
        return Err(Error::IndexConstraint(format!("family needs n >= 3, got {n}")));
    }
    for (p, (&j, &k)) in jvec.iter().zip(kvec).enumerate() {
        if j.is_identity() || k.is_identity() || j == k {
            return Err(Error::IndexConstraint(format!(
                "site {}: need nonzero j != k, got j={} k={}",
                p + 1,
                j.value(),
                k.value()
            )));
        }
    }
    let swapped = |a: usize, b: usize| {
        let mut sites = jvec.to_vec();
        sites[a] = kvec[a];
        sites[b] = kvec[b];
        PauliString::from_sites(&sites)
    };
    let mut family = vec![PauliString::from_sites(jvec)];
    family.extend((0..n - 1).rev().map(|a| swapped(a, a + 1)));
    family.push(swapped(0, n - 1));
    Ok(family)
}

/// Per-site ratio `local_a / local_b` of the accumulated local phases.
///
/// Sequences at a site are comparable when each nontrivial Pauli occurs with
/// the same parity in both, so that any assignment of ±1 values to the local
/// operators gives both sequences the same value.
pub fn local_permutation_parity(traces: &[SiteTrace]) -> Result<Vec<Phase>> {
    traces
        .iter()
        .map(|t| {
            let parity = |seq: &[PauliIndex]| {
                let mut counts = [false; 4];
                for &p in seq {
                    counts[p as usize] ^= true;
                }
                [counts[1], counts[2], counts[3]]
            };
            if parity(&t.sequence_a) != parity(&t.sequence_b) {
                return Err(Error::NotComparable {
                    site: t.site + 1,
                    reason: "local operator multisets differ".into(),
                });
            }
            Ok(t.local_a.0 * t.local_b.0.conj())
        })
        .collect()
}

fn site_traces(observables: &[PauliString], partition: &Partition, n: usize) -> Vec<SiteTrace> {
    (0..n)
        .map(|site| {
            let seq = |g: &[usize]| g.iter().map(|&i| observables[i].site(site)).collect::<Vec<_>>();
            let (sequence_a, sequence_b) = (seq(&partition.group_a), seq(&partition.group_b));
            SiteTrace {
                site,
                local_a: sequence_product(&sequence_a),
                local_b: sequence_product(&sequence_b),
                sequence_a,
                sequence_b,
            }
        })
        .collect()
}

/// Certifies (or refutes) a sign paradox between the two ordered products
/// named by `partition`.
pub fn verify_ks(observables: &[PauliString], partition: &Partition) -> Result<ParadoxCertificate> {
    let n = check_same_len(observables)?;
    if observables.is_empty() || partition.group_a.is_empty() || partition.group_b.is_empty() {
        return Err(Error::IndexConstraint(
            "both products need at least one observable".into(),
        ));
    }
    let len = observables.len();
    if let Some(&bad) = partition.group_a.iter().chain(&partition.group_b).find(|&&i| i >= len) {
        return Err(Error::IndexConstraint(format!(
            "observable index {} out of range (have {len})",
            bad + 1
        )));
    }
    for group in [&partition.group_a, &partition.group_b] {
        if let Some((a, b)) = first_incompatible(observables, group)? {
            return Err(Error::Incompatible {
                first: a + 1,
                second: b + 1,
            });
        }
    }
    let everyone: Vec<usize> = (0..len).collect();
    let jointly_compatible = first_incompatible(observables, &everyone)?.is_none();

    let product_a = ordered_product(observables, &partition.group_a, n)?;
    let product_b = ordered_product(observables, &partition.group_b, n)?;
    let identity_proportional = product_a.is_identity_proportional() && product_b.is_identity_proportional();
    let relative_sign = product_a
        .same_sites(&product_b)
        .then(|| product_a.phase() * product_b.phase().conj());

    let site_traces = site_traces(observables, partition, n);
    let local_phase_ratios = local_permutation_parity(&site_traces).ok();

    // Non-scalar products only carry a value when both live in one context.
    let paradox = relative_sign == Some(Phase::MINUS_ONE)
        && product_a.phase().is_real()
        && (identity_proportional || jointly_compatible)
        && local_phase_ratios.is_some();

    Ok(ParadoxCertificate {
        observables: observables.to_vec(),
        partition: partition.clone(),
        commutation_ok: true,
        jointly_compatible,
        sign_a: product_a.phase(),
        sign_b: product_b.phase(),
        product_a,
        product_b,
        identity_proportional,
        relative_sign,
        local_phase_ratios,
        paradox,
        site_traces,
    })
}

/// Finds a subset of `observables` whose product is a multiple of the
/// identity but whose requested signs multiply to the other sign.
fn sign_conflict(observables: &[PauliString], signs: &[i8]) -> Result<Option<(Vec<usize>, Phase)>> {
    let n = observables.first().map_or(0, PauliString::len);
    // Gaussian elimination over GF(2) on the (x|z) vectors, tracking which
    // observables were combined into each pivot row.
    let mut pivots: Vec<(Vec<u64>, Vec<usize>)> = Vec::new();
    let lead = |v: &[u64]| {
        v.iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    };
    for (i, obs) in observables.iter().enumerate() {
        let mut v: Vec<u64> = obs.x_bits().iter().chain(obs.z_bits()).copied().collect();
        let mut combo = vec![i];
        for (pv, pc) in &pivots {
            let bit = lead(pv).expect("pivot rows are nonzero");
            if v[bit / 64] >> (bit % 64) & 1 == 1 {
                v.iter_mut().zip(pv).for_each(|(a, b)| *a ^= b);
                for &c in pc {
                    match combo.iter().position(|&x| x == c) {
                        Some(pos) => {
                            combo.remove(pos);
                        }
                        None => combo.push(c),
                    }
                }
            }
        }
        if lead(&v).is_some() {
            pivots.push((v, combo));
            pivots.sort_by_key(|(pv, _)| lead(pv));
            continue;
        }
        combo.sort_unstable();
        let product = combo
            .iter()
            .try_fold(PauliString::identity(n), |acc, &c| acc.multiply(&observables[c]))?;
        let wanted = combo.iter().fold(1i8, |acc, &c| acc * signs[c]);
        let wanted = if wanted == 1 { Phase::ONE } else { Phase::MINUS_ONE };
        if product.phase() != wanted {
            return Ok(Some((combo, product.phase())));
        }
    }
    Ok(None)
}

/// A joint eigenvector with `P_i |ψ⟩ = signs_i |ψ⟩`, obtained by projecting
/// standard basis vectors in order with `(I + s_i P_i)/2` and keeping the first
/// that survives.
pub fn common_eigenstate(observables: &[PauliString], signs: &[i8]) -> Result<StateVector> {
    let n = check_same_len(observables)?;
    if observables.is_empty() {
        return Err(Error::IndexConstraint("need at least one observable".into()));
    }
    if signs.len() != observables.len() {
        return Err(Error::DimensionMismatch {
            left: observables.len(),
            right: signs.len(),
        });
    }
    if n > MAX_DENSE_QUBITS {
        return Err(Error::SizeCap {
            what: "common eigenstate",
            n,
            max: MAX_DENSE_QUBITS,
        });
    }
    if let Some(s) = signs.iter().find(|&&s| s != 1 && s != -1) {
        return Err(Error::IndexConstraint(format!("signs must be +1 or -1, got {s}")));
    }
    if let Some(o) = observables.iter().find(|o| !o.phase().is_real()) {
        return Err(Error::IndexConstraint(format!("{o} is not Hermitian")));
    }
    let all: Vec<usize> = (0..observables.len()).collect();
    if let Some((a, b)) = first_incompatible(observables, &all)? {
        return Err(Error::Incompatible {
            first: a + 1,
            second: b + 1,
        });
    }
    if let Some((subset, forced)) = sign_conflict(observables, signs)? {
        let names: Vec<String> = subset.iter().map(|&i| observables[i].to_string()).collect();
        return Err(Error::InconsistentSigns(format!(
            "the product {} equals {} times the identity, but the requested signs multiply to {}",
            names.join("·"),
            forced.label(),
            (-forced).label()
        )));
    }
    let half = Complex64::new(0.5, 0.0);
    for seed in 0..1usize << n {
        let mut v = StateVector::basis(n, seed)?;
        for (p, &s) in observables.iter().zip(signs) {
            let pv = apply(p, &v)?;
            let amps: Vec<Complex64> = v
                .amplitudes()
                .iter()
                .zip(pv.amplitudes())
                .map(|(a, b)| (a + b * s as f64) * half)
                .collect();
            v = StateVector::new(n, amps)?;
        }
        if v.norm() > EIGEN_TOL.sqrt() {
            return Ok(v.normalized().expect("norm checked above"));
        }
    }
    // Consistent signs always leave a nonzero joint eigenspace.
    Err(Error::InconsistentSigns("joint eigenspace is empty".into()))
}

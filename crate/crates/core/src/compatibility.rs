//! Pairwise compatibility reports, the 2- and 3-qubit case taxonomy, and
//! exhaustive sweeps over small qubit counts.

use std::fmt;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::dense::{commutator_dense, to_dense, ALGEBRA_TOL};
use crate::error::{Error, Result};
use crate::pauli::{anticommutes_single, commutes_single, PauliIndex};
use crate::tensor::{PauliString, SiteSet};

/// Upper bound on `n` for every exhaustive sweep.
pub const MAX_SWEEP_QUBITS: usize = 5;

/// Case labels for commuting/anticommuting site patterns.
///
/// For two qubits only the globally commuting patterns have names; for three
/// qubits the label depends only on how many sites anticommute, since the
/// taxonomy is stated up to a permutation of the sites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseLabel {
    /// 2 qubits, commuting at both sites.
    TwoI,
    /// 2 qubits, anticommuting at both sites.
    TwoII,
    /// 3 qubits, anticommuting at all sites.
    ThreeI,
    /// 3 qubits, anticommuting at two sites.
    ThreeII,
    /// 3 qubits, anticommuting at one site.
    ThreeIII,
    /// 3 qubits, commuting at all sites.
    ThreeIV,
    General {
        hidden_count: usize,
        even: bool,
    },
}

impl CaseLabel {
    fn from_pattern(n: usize, hidden_count: usize) -> Self {
        match (n, hidden_count) {
            (2, 0) => CaseLabel::TwoI,
            (2, 2) => CaseLabel::TwoII,
            (3, 3) => CaseLabel::ThreeI,
            (3, 2) => CaseLabel::ThreeII,
            (3, 1) => CaseLabel::ThreeIII,
            (3, 0) => CaseLabel::ThreeIV,
            (_, h) => CaseLabel::General {
                hidden_count: h,
                even: h % 2 == 0,
            },
        }
    }
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CaseLabel::TwoI => f.write_str("2.i"),
            CaseLabel::TwoII => f.write_str("2.ii"),
            CaseLabel::ThreeI => f.write_str("3.i"),
            CaseLabel::ThreeII => f.write_str("3.ii"),
            CaseLabel::ThreeIII => f.write_str("3.iii"),
            CaseLabel::ThreeIV => f.write_str("3.iv"),
            CaseLabel::General { hidden_count, even } => {
                write!(
                    f,
                    "general(hidden={hidden_count},{})",
                    if *even { "even" } else { "odd" }
                )
            }
        }
    }
}

impl Serialize for CaseLabel {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Per-site relation between the two local factors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SiteRelation {
    Commute,
    Anticommute,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompatibilityReport {
    pub globally_compatible: bool,
    pub noncommuting_sites: SiteSet,
    pub hidden_count: usize,
    pub fully_nontrivial_pair: bool,
    pub dichotomic: bool,
    pub case_label: CaseLabel,
    /// Unsorted per-site pattern.
    pub site_pattern: Vec<SiteRelation>,
}

/// No identity factor at any site.
pub fn is_fully_nontrivial(p: &PauliString) -> bool {
    !p.is_empty() && p.weight() == p.len()
}

pub fn classify_pair(p: &PauliString, q: &PauliString) -> Result<CompatibilityReport> {
    let noncommuting_sites = p.local_noncommuting_sites(q)?;
    let globally_compatible = p.global_commutes(q)?;
    let hidden_count = noncommuting_sites.len();
    let dichotomic = p.same_sites(q) && (p.phase() * q.phase().conj()).is_real();
    let site_pattern = (0..p.len())
        .map(|s| {
            if noncommuting_sites.contains(s) {
                SiteRelation::Anticommute
            } else {
                SiteRelation::Commute
            }
        })
        .collect();
    Ok(CompatibilityReport {
        globally_compatible,
        case_label: CaseLabel::from_pattern(p.len(), hidden_count),
        noncommuting_sites,
        hidden_count,
        fully_nontrivial_pair: is_fully_nontrivial(p) && is_fully_nontrivial(q),
        dichotomic,
        site_pattern,
    })
}

/// True iff every pair is globally compatible with no locally noncommuting
/// site, i.e. local and global compatibility coexist.
pub fn nonlocal_commuting_example_check(observables: &[PauliString]) -> Result<bool> {
    let mut ok = true;
    for (i, p) in observables.iter().enumerate() {
        for q in &observables[i + 1..] {
            let r = classify_pair(p, q)?;
            ok &= r.globally_compatible && r.hidden_count == 0;
        }
    }
    Ok(ok)
}

/// How a sweep walks its pair space. Both modes report the same first
/// counterexample (lowest pair index).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    #[default]
    Sequential,
    Parallel,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub first: PauliString,
    pub second: PauliString,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepOutcome {
    pub n: usize,
    pub pairs_checked: usize,
    pub counterexample: Option<Counterexample>,
}

impl SweepOutcome {
    pub fn verified(&self) -> bool {
        self.counterexample.is_none()
    }
}

fn check_sweep_range(n: usize, min: usize) -> Result<()> {
    if !(min..=MAX_SWEEP_QUBITS).contains(&n) {
        return Err(Error::OutOfRange(format!(
            "sweep requires {min} <= n <= {MAX_SWEEP_QUBITS}, got n = {n}"
        )));
    }
    Ok(())
}

/// The `index`-th string over the given per-site alphabet, site 0 most
/// significant.
fn nth_string(n: usize, alphabet: &[PauliIndex], mut index: usize) -> PauliString {
    let base = alphabet.len();
    let mut sites = vec![PauliIndex::I; n];
    for s in (0..n).rev() {
        sites[s] = alphabet[index % base];
        index /= base;
    }
    PauliString::from_sites(&sites)
}

/// Runs `check` over every ordered pair of strings over `alphabet`.
fn sweep<F>(n: usize, alphabet: &[PauliIndex], execution: Execution, check: F) -> SweepOutcome
where
    F: Fn(&PauliString, &PauliString) -> Option<String> + Sync,
{
    let m = alphabet.len().pow(n as u32);
    let total = m * m;
    let probe = |i: usize| {
        let p = nth_string(n, alphabet, i / m);
        let q = nth_string(n, alphabet, i % m);
        check(&p, &q).map(|reason| Counterexample {
            first: p,
            second: q,
            reason,
        })
    };
    let counterexample = match execution {
        Execution::Sequential => (0..total).find_map(probe),
        Execution::Parallel => (0..total)
            .into_par_iter()
            .map(probe)
            .find_first(Option::is_some)
            .flatten(),
    };
    SweepOutcome {
        n,
        pairs_checked: total,
        counterexample,
    }
}

/// Over all fully nontrivial pairs: local and global compatibility together
/// force sitewise equality, and global compatibility alone forces an even
/// number of locally noncommuting sites. Global compatibility is read off the
/// commutator's bracket decomposition (all summands vanish).
pub fn verify_theorem1(n: usize, execution: Execution) -> Result<SweepOutcome> {
    check_sweep_range(n, 2)?;
    Ok(sweep(n, &PauliIndex::NONTRIVIAL, execution, |p, q| {
        let report = classify_pair(p, q).ok()?;
        let by_brackets = p.decompose_commutator(q).ok()?.all(|t| t.is_zero());
        if by_brackets != report.globally_compatible {
            return Some("bracket decomposition disagrees with symplectic parity".into());
        }
        if report.hidden_count == 0 && !p.same_sites(q) {
            return Some("locally compatible everywhere but not equal up to sign".into());
        }
        if by_brackets && report.hidden_count % 2 == 1 {
            return Some(format!(
                "globally compatible with {} hidden noncommutations",
                report.hidden_count
            ));
        }
        None
    }))
}

/// Globally compatible fully nontrivial pairs differ at an even number of sites.
pub fn verify_corollary_even(n: usize, execution: Execution) -> Result<SweepOutcome> {
    check_sweep_range(n, 2)?;
    Ok(sweep(n, &PauliIndex::NONTRIVIAL, execution, |p, q| {
        if !p.global_commutes(q).ok()? {
            return None;
        }
        let differing = p.sites().zip(q.sites()).filter(|(a, b)| a != b).count();
        (differing % 2 == 1).then(|| format!("compatible but differing at {differing} sites"))
    }))
}

fn dense_commutes(p: &PauliString, q: &PauliString) -> Option<bool> {
    let (a, b) = (to_dense(p).ok()?, to_dense(q).ok()?);
    Some(commutator_dense(&a, &b).ok()?.is_zero(ALGEBRA_TOL))
}

/// All 256 two-qubit pairs: the dense commutator vanishes iff the sites
/// commute everywhere (2.i) or anticommute everywhere (2.ii). Also checks that
/// exactly two of the four single-site brackets are nonzero and at most one
/// commutator summand survives.
pub fn verify_prop3(execution: Execution) -> SweepOutcome {
    sweep(2, &PauliIndex::ALL, execution, |p, q| {
        let (j, k, l, m) = (p.site(0), p.site(1), q.site(0), q.site(1));
        let case_2i = commutes_single(j, l) && commutes_single(k, m);
        let case_2ii = anticommutes_single(j, l) && anticommutes_single(k, m);
        let dense = dense_commutes(p, q)?;
        if dense != (case_2i || case_2ii) {
            return Some(format!(
                "dense commutation {dense} but case predicate {}",
                case_2i || case_2ii
            ));
        }
        let nonzero_ops = [
            !commutes_single(j, l),
            !anticommutes_single(k, m),
            !anticommutes_single(j, l),
            !commutes_single(k, m),
        ]
        .iter()
        .filter(|&&b| b)
        .count();
        if nonzero_ops != 2 {
            return Some(format!("{nonzero_ops} of the four single-site brackets are nonzero"));
        }
        let nonzero_terms = p.decompose_commutator(q).ok()?.filter(|t| !t.is_zero()).count();
        (nonzero_terms > 1).then(|| format!("{nonzero_terms} commutator summands are nonzero"))
    })
}

/// All 729 fully nontrivial three-qubit pairs: the dense commutator vanishes
/// iff the case is 3.ii or 3.iv; in case 3.ii the four commutator summands
/// carry 0, 1, 1 and 2 nonzero local commutators.
pub fn verify_prop4(execution: Execution) -> SweepOutcome {
    sweep(3, &PauliIndex::NONTRIVIAL, execution, |p, q| {
        let report = classify_pair(p, q).ok()?;
        let dense = dense_commutes(p, q)?;
        let by_case = matches!(report.case_label, CaseLabel::ThreeII | CaseLabel::ThreeIV);
        if dense != by_case {
            return Some(format!("dense commutation {dense} but case {}", report.case_label));
        }
        if report.case_label == CaseLabel::ThreeII {
            let mut counts: Vec<usize> = p
                .decompose_commutator(q)
                .ok()?
                .map(|t| {
                    t.assignment
                        .commutator_sites
                        .iter()
                        .filter(|&s| report.noncommuting_sites.contains(s))
                        .count()
                })
                .collect();
            counts.sort_unstable();
            if counts != [0, 1, 1, 2] {
                return Some(format!("hidden commutations per summand {counts:?}"));
            }
        }
        None
    })
}

/// Every pair of n-qubit strings has exactly one nonzero summand across the
/// commutator and anticommutator decompositions, located at the locally
/// noncommuting sites.
pub fn verify_exactly_one(n: usize, execution: Execution) -> Result<SweepOutcome> {
    check_sweep_range(n, 1)?;
    Ok(sweep(n, &PauliIndex::ALL, execution, |p, q| {
        let comm = p.decompose_commutator(q).ok()?;
        let anti = p.decompose_anticommutator(q).ok()?;
        let nonzero: Vec<_> = comm.chain(anti).filter(|t| !t.is_zero()).collect();
        if nonzero.len() != 1 {
            return Some(format!("{} nonzero summands", nonzero.len()));
        }
        let expected = p.local_noncommuting_sites(q).ok()?;
        (nonzero[0].assignment.commutator_sites != expected).then(|| "nonzero summand at the wrong assignment".into())
    }))
}

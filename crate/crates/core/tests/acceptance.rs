//! End-to-end acceptance checks. Prints one line per criterion and exits
//! non-zero when a criterion fails that is not listed in `KNOWN_FAILURES`.

use std::process::Command;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use paulicompat::compatibility::{self, Execution};
use paulicompat::dense::{
    anticommutator_dense, bracket_expansion_dense, commutator_dense, eigen_check, phase_value, to_dense, ALGEBRA_TOL,
};
use paulicompat::paradox::{self, common_eigenstate, triple_product, verify_ks, Partition};
use paulicompat::states::{self, build_named, StateName};
use paulicompat::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Criteria that cannot hold for mathematical reasons. Each still runs and
/// reports FAIL; the check below only confirms the failure is the analyzed one.
///
/// 10: every psi state is a GHZ state up to local unitaries (psi3 is GHZ in
/// the X basis after a phase, psi4 likewise), so each two-qubit reduction is
/// an equal mixture of two Bell states and has a positive partial transpose.
const KNOWN_FAILURES: &[u32] = &[10];

type Check = Result<String, String>;
type Criterion = (u32, &'static str, Duration, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e(err: Error) -> String {
    err.to_string()
}

fn random_pauli(rng: &mut StdRng, n: usize) -> PauliString {
    let sites: Vec<PauliIndex> = (0..n).map(|_| PauliIndex::ALL[rng.random_range(0..4)]).collect();
    PauliString::new(Phase::from_exponent(rng.random_range(0..4)), &sites)
}

fn all_strings(n: usize) -> Vec<PauliString> {
    (0..4usize.pow(n as u32))
        .map(|mut code| {
            let sites: Vec<PauliIndex> = (0..n)
                .map(|_| {
                    let idx = PauliIndex::ALL[code % 4];
                    code /= 4;
                    idx
                })
                .collect();
            PauliString::from_sites(&sites)
        })
        .collect()
}

fn summed(p: &PauliString, q: &PauliString, kind: BracketKind) -> Result<DenseMatrix, String> {
    let terms = match kind {
        BracketKind::Commutator => p.decompose_commutator(q),
        BracketKind::Anticommutator => p.decompose_anticommutator(q),
    }
    .map_err(e)?;
    let mut acc = DenseMatrix::zeros(1 << p.len());
    for t in terms {
        if let Some(v) = t.value {
            let m = to_dense(&v.pauli)
                .map_err(e)?
                .scale(Complex64::new(2f64.powi(v.log2_scale), 0.0));
            acc = acc.add(&m).map_err(e)?;
        }
    }
    Ok(acc)
}

fn dense_product(obs: &[&PauliString]) -> Result<DenseMatrix, String> {
    let mut acc = DenseMatrix::identity(1 << obs[0].len());
    for o in obs {
        acc = acc.matmul(&to_dense(o).map_err(e)?).map_err(e)?;
    }
    Ok(acc)
}

fn is_signed_identity(m: &DenseMatrix, sign: f64) -> bool {
    m.approx_eq(
        &DenseMatrix::identity(m.dim()).scale(Complex64::new(sign, 0.0)),
        ALGEBRA_TOL,
    )
}

fn random_matrix(rng: &mut StdRng, hermitian: bool) -> DenseMatrix {
    let mut c = || Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    let m = DenseMatrix::from_rows(&[&[c(), c()], &[c(), c()]]);
    if hermitian {
        m.add(&m.adjoint()).unwrap()
    } else {
        m
    }
}

fn kron_all(ms: &[DenseMatrix]) -> DenseMatrix {
    ms[1..].iter().fold(ms[0].clone(), |acc, m| acc.kron(m))
}

fn criterion1() -> Check {
    let mut checked = 0;
    for a in PauliIndex::ALL {
        for b in PauliIndex::ALL {
            ensure(commutes_single(a, b) != anticommutes_single(a, b), || {
                format!("{a:?},{b:?}")
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} single-qubit pairs"))
}

fn criterion2() -> Check {
    let check_pair = |p: &PauliString, q: &PauliString| -> Result<(), String> {
        let (dp, dq) = (to_dense(p).map_err(e)?, to_dense(q).map_err(e)?);
        let comm = commutator_dense(&dp, &dq).map_err(e)?;
        let anti = anticommutator_dense(&dp, &dq).map_err(e)?;
        ensure(
            summed(p, q, BracketKind::Commutator)?.approx_eq(&comm, ALGEBRA_TOL),
            || format!("[{p},{q}]"),
        )?;
        ensure(
            summed(p, q, BracketKind::Anticommutator)?.approx_eq(&anti, ALGEBRA_TOL),
            || format!("{{{p},{q}}}"),
        )
    };
    let mut pairs = 0;
    for n in [2, 3] {
        let all = all_strings(n);
        for p in &all {
            for q in &all {
                check_pair(p, q)?;
                pairs += 1;
            }
        }
    }
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for n in 4..=8 {
        for _ in 0..1000 {
            let (p, q) = (random_pauli(&mut rng, n), random_pauli(&mut rng, n));
            check_pair(&p, &q)?;
            pairs += 1;
        }
    }
    let mut general = 0;
    for (n, hermitian) in [(2, false), (3, true)] {
        for _ in 0..100 {
            let a: Vec<_> = (0..n).map(|_| random_matrix(&mut rng, hermitian)).collect();
            let b: Vec<_> = (0..n).map(|_| random_matrix(&mut rng, hermitian)).collect();
            let (ka, kb) = (kron_all(&a), kron_all(&b));
            for (kind, want) in [
                (BracketKind::Commutator, commutator_dense(&ka, &kb).map_err(e)?),
                (BracketKind::Anticommutator, anticommutator_dense(&ka, &kb).map_err(e)?),
            ] {
                let got = bracket_expansion_dense(&a, &b, kind).map_err(e)?;
                let diff = got.max_abs_diff(&want);
                ensure(diff < 1e-10, || format!("{kind:?} n={n}: deviation {diff:e}"))?;
            }
            general += 1;
        }
    }
    Ok(format!(
        "{pairs} Pauli pairs exact, {general} general factor sets within 1e-10"
    ))
}

fn criterion3() -> Check {
    let mut pairs = 0;
    for n in [2, 3] {
        let out = compatibility::verify_exactly_one(n, Execution::Sequential).map_err(e)?;
        ensure(out.verified(), || format!("n={n}: {:?}", out.counterexample))?;
        pairs += out.pairs_checked;
    }
    Ok(format!("{pairs} pairs, one nonzero term each"))
}

fn criterion4() -> Check {
    let mut pairs = 0;
    for n in 2..=5 {
        let t = compatibility::verify_theorem1(n, Execution::Parallel).map_err(e)?;
        ensure(t.verified(), || format!("theorem n={n}: {:?}", t.counterexample))?;
        let c = compatibility::verify_corollary_even(n, Execution::Parallel).map_err(e)?;
        ensure(c.verified(), || format!("corollary n={n}: {:?}", c.counterexample))?;
        pairs += t.pairs_checked + c.pairs_checked;
    }
    Ok(format!("{pairs} pair checks over n = 2..5"))
}

fn criterion5() -> Check {
    let p3 = compatibility::verify_prop3(Execution::Sequential);
    ensure(p3.verified(), || format!("two-qubit taxonomy: {:?}", p3.counterexample))?;
    let p4 = compatibility::verify_prop4(Execution::Sequential);
    ensure(p4.verified(), || {
        format!("three-qubit taxonomy: {:?}", p4.counterexample)
    })?;
    Ok(format!("{} + {} pairs", p3.pairs_checked, p4.pairs_checked))
}

fn criterion6() -> Check {
    let ([a1, a2, a3], [b1, b2, b3]) = paradox::mermin_triples();
    let ta = triple_product(&a1, &a2, &a3).map_err(e)?;
    let tb = triple_product(&b1, &b2, &b3).map_err(e)?;
    ensure(ta.is_identity_proportional() && tb.is_identity_proportional(), || {
        format!("{ta}, {tb}")
    })?;
    ensure(ta.phase() == Phase::ONE && tb.phase() == Phase::MINUS_ONE, || {
        format!("signs {ta}, {tb}")
    })?;
    ensure(is_signed_identity(&dense_product(&[&a1, &a2, &a3])?, 1.0), || {
        "dense first product".into()
    })?;
    ensure(is_signed_identity(&dense_product(&[&b1, &b2, &b3])?, -1.0), || {
        "dense second product".into()
    })?;
    Ok(format!("{a1}{a2}{a3} = {ta}, {b1}{b2}{b3} = {tb}"))
}

fn criterion7() -> Check {
    use PauliIndex::*;
    let part = paradox::three_qubit_partition();
    let mut count = 0;
    for (j, k, l) in [(X, Y, Z), (X, Z, Y), (Y, X, Z), (Y, Z, X), (Z, X, Y), (Z, Y, X)] {
        let fam = paradox::build_3qubit_family(j, k, l).map_err(e)?;
        let cert = verify_ks(&fam, &part).map_err(e)?;
        ensure(cert.paradox && cert.relative_sign == Some(Phase::MINUS_ONE), || {
            format!("({j:?},{k:?},{l:?})")
        })?;
        let ga: Vec<_> = part.group_a.iter().map(|&i| &fam[i]).collect();
        let gb: Vec<_> = part.group_b.iter().map(|&i| &fam[i]).collect();
        let (da, db) = (dense_product(&ga)?, dense_product(&gb)?);
        let sa = phase_value(cert.product_a.phase()).re;
        let sb = phase_value(cert.product_b.phase()).re;
        ensure(
            is_signed_identity(&da, sa) && is_signed_identity(&db, sb) && sa == -sb,
            || format!("dense oracle disagrees for ({j:?},{k:?},{l:?})"),
        )?;
        count += 1;
    }
    Ok(format!("{count} index choices, relative sign -1"))
}

fn criterion8() -> Check {
    use PauliIndex::*;
    let choices = [(X, Y), (X, Z), (Y, X), (Y, Z), (Z, X), (Z, Y)];
    let mut checked = 0;
    for n in [3, 5, 7] {
        for (j, k) in choices {
            let fam = paradox::build_nqubit_family(&vec![j; n], &vec![k; n]).map_err(e)?;
            let rest = fam[1..]
                .iter()
                .try_fold(PauliString::identity(n), |acc, o| acc.multiply(o))
                .map_err(e)?;
            let target = PauliString::new(Phase::MINUS_ONE, &vec![j; n]);
            ensure(rest == target, || format!("n={n} ({j:?},{k:?}): {rest}"))?;
            let cert = verify_ks(&fam, &Partition::first_vs_rest(fam.len())).map_err(e)?;
            ensure(cert.paradox, || format!("n={n} ({j:?},{k:?}) not certified"))?;
            if n <= 5 {
                let refs: Vec<_> = fam[1..].iter().collect();
                let dense = dense_product(&refs)?;
                let want = to_dense(&target).map_err(e)?;
                ensure(dense.approx_eq(&want, ALGEBRA_TOL), || format!("dense n={n}"))?;
            }
            checked += 1;
        }
    }
    for (j, k) in choices {
        let fam = paradox::build_nqubit_family(&[j; 4], &[k; 4]).map_err(e)?;
        let cert = verify_ks(&fam, &Partition::first_vs_rest(fam.len())).map_err(e)?;
        ensure(!cert.paradox, || format!("n=4 ({j:?},{k:?}) reported a paradox"))?;
    }
    Ok(format!("{checked} odd families, n = 4 has none"))
}

fn eigenvalues(state: &StateVector, obs: &[PauliString]) -> Result<Vec<Complex64>, String> {
    obs.iter()
        .map(|o| {
            eigen_check(o, state)
                .map_err(e)?
                .ok_or_else(|| format!("not an eigenstate of {o}"))
        })
        .collect()
}

fn matches_signs(vals: &[Complex64], signs: &[f64]) -> bool {
    vals.len() == signs.len()
        && vals
            .iter()
            .zip(signs)
            .all(|(v, s)| (v - Complex64::new(*s, 0.0)).norm() < 1e-10)
}

fn criterion9() -> Check {
    let psi3 = build_named(StateName::Psi3, 3).map_err(e)?.vector;
    let obs: Vec<PauliString> = ["113", "131", "311", "333"]
        .iter()
        .map(|t| t.parse().unwrap())
        .collect();
    let vals = eigenvalues(&psi3, &obs)?;
    ensure(matches_signs(&vals, &[-1.0, -1.0, -1.0, 1.0]), || {
        format!("psi3: {vals:?}")
    })?;
    for name in [StateName::Psi1, StateName::Psi2, StateName::Psi4] {
        let s = build_named(name, 3).map_err(e)?;
        let fam = states::associated_family(&s).map_err(e)?;
        let vals = eigenvalues(&s.vector, &fam)?;
        ensure(
            vals.iter()
                .all(|v| v.im.abs() < 1e-10 && (v.re.abs() - 1.0).abs() < 1e-10),
            || format!("{name}: {vals:?}"),
        )?;
    }
    let phi2 = build_named(StateName::Phi2, 3).map_err(e)?.vector;
    ensure(phi2.approx_eq(&psi3, 1e-12), || "phi2(3) differs from psi3".into())?;
    for n in [5, 7] {
        let s = build_named(StateName::Phi2, n).map_err(e)?.vector;
        let fam = paradox::build_nqubit_family(&vec![PauliIndex::Z; n], &vec![PauliIndex::X; n]).map_err(e)?;
        let vals = eigenvalues(&s, &fam)?;
        let mut want = vec![-1.0; fam.len()];
        want[0] = 1.0;
        ensure(matches_signs(&vals, &want), || format!("phi2({n}): {vals:?}"))?;
    }
    Ok("psi1..psi4, phi2 at n = 3, 5, 7".into())
}

fn criterion10() -> Check {
    let mut worst = f64::NEG_INFINITY;
    let mut separable = Vec::new();
    for name in [StateName::Psi2, StateName::Psi3, StateName::Psi4] {
        let s = build_named(name, 3).map_err(e)?.vector;
        for v in states::pairwise_entanglement(&s).map_err(e)? {
            worst = worst.max(v.min_eigenvalue);
            if !v.entangled {
                separable.push(format!("{name}{:?}", v.sites));
            }
        }
    }
    ensure(separable.is_empty(), || {
        format!(
            "PPT-separable pairs: {} (largest min eigenvalue {worst:.1e})",
            separable.join(" ")
        )
    })?;
    Ok("all pairs negative".into())
}

/// The analyzed outcome of criterion 10: every pair has a partial transpose
/// whose smallest eigenvalue is zero.
fn criterion10_matches_analysis() -> bool {
    [StateName::Psi2, StateName::Psi3, StateName::Psi4].iter().all(|&name| {
        let s = build_named(name, 3).unwrap().vector;
        states::pairwise_entanglement(&s)
            .unwrap()
            .iter()
            .all(|v| !v.entangled && v.min_eigenvalue.abs() < 1e-12)
    })
}

fn criterion11() -> Check {
    let psi3 = build_named(StateName::Psi3, 3).map_err(e)?.vector;
    let obs: Vec<PauliString> = ["113", "131", "311", "333"]
        .iter()
        .map(|t| t.parse().unwrap())
        .collect();
    let mut overlaps = Vec::new();
    let built = common_eigenstate(&obs, &[-1, -1, -1, 1]).map_err(e)?;
    overlaps.push(("psi3".to_string(), built.inner(&psi3).norm()));
    for n in [3, 5] {
        let ghz = build_named(StateName::Phi1, n).map_err(e)?.vector;
        let fam = paradox::build_nqubit_family(&vec![PauliIndex::X; n], &vec![PauliIndex::Y; n]).map_err(e)?;
        let mut signs = vec![-1i8; fam.len()];
        signs[0] = 1;
        let built = common_eigenstate(&fam, &signs).map_err(e)?;
        overlaps.push((format!("phi1({n})"), built.inner(&ghz).norm()));
    }
    for (name, o) in &overlaps {
        ensure(*o >= 1.0 - 1e-10, || format!("{name}: overlap {o}"))?;
    }
    Ok(overlaps
        .iter()
        .map(|(n, o)| format!("{n} {o:.12}"))
        .collect::<Vec<_>>()
        .join(", "))
}

fn criterion12() -> Check {
    let invocations: &[&[&str]] = &[
        &["classify", "XYZ", "YXZ"],
        &["decompose", "XYZ", "YXZ"],
        &["paradox", "mermin"],
        &["paradox", "three", "1", "2", "3"],
        &["paradox", "ghz", "5", "1", "2"],
        &["paradox", "ghz", "4", "1", "2"],
        &["state", "psi3"],
        &["state", "phi2", "5"],
        &["state", "phi3", "5"],
        &["verify", "theorem1", "4"],
        &["verify", "corollary", "4", "--parallel"],
        &["verify", "prop3"],
        &["verify", "prop4"],
        &["verify", "exactly-one", "3"],
        &["classify", "XYZ", "YXZ", "--format", "table"],
    ];
    let run = |args: &[&str]| -> Result<(Option<i32>, Vec<u8>), String> {
        let out = Command::new(env!("CARGO_BIN_EXE_paulicompat"))
            .args(args)
            .output()
            .map_err(|x| x.to_string())?;
        Ok((out.status.code(), out.stdout))
    };
    for args in invocations {
        let (first, second) = (run(args)?, run(args)?);
        ensure(first == second, || format!("{args:?} differs between runs"))?;
        ensure(!first.1.is_empty(), || format!("{args:?} printed nothing"))?;
    }
    let seq = run(&["verify", "theorem1", "5"])?;
    let par = run(&["verify", "theorem1", "5", "--parallel"])?;
    ensure(seq == par, || "parallel sweep output differs".into())?;
    Ok(format!("{} commands byte-identical", invocations.len()))
}

fn main() {
    let criteria: [Criterion; 12] = [
        (1, "single-qubit exclusivity", Duration::from_millis(1), criterion1),
        (
            2,
            "bracket decomposition soundness",
            Duration::from_secs(10),
            criterion2,
        ),
        (3, "exactly one nonzero term", Duration::from_secs(1), criterion3),
        (4, "parity law and even corollary", Duration::from_secs(5), criterion4),
        (5, "two- and three-qubit taxonomy", Duration::from_secs(1), criterion5),
        (6, "Mermin square signs", Duration::from_millis(1), criterion6),
        (7, "three-qubit sign paradox", Duration::from_millis(100), criterion7),
        (8, "n-qubit sign paradox", Duration::from_secs(1), criterion8),
        (9, "state eigenrelations", Duration::from_secs(5), criterion9),
        (
            10,
            "pairwise entanglement of psi states",
            Duration::from_secs(1),
            criterion10,
        ),
        (
            11,
            "common eigenstate reconstruction",
            Duration::from_secs(1),
            criterion11,
        ),
        (12, "CLI determinism", Duration::from_secs(60), criterion12),
    ];
    let mut unexpected = Vec::new();
    let mut failed = 0;
    for (id, title, budget, check) in criteria {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let result = match result {
            Ok(detail) if elapsed > budget => Err(format!("{detail}; took {elapsed:?}, budget {budget:?}")),
            other => other,
        };
        match &result {
            Ok(detail) => println!("criterion {id:>2} PASS  {title} ({elapsed:.2?}): {detail}"),
            Err(why) => println!("criterion {id:>2} FAIL  {title} ({elapsed:.2?}): {why}"),
        }
        let expected_failure = KNOWN_FAILURES.contains(&id);
        match (result.is_ok(), expected_failure) {
            (false, true) => failed += 1,
            (false, false) => {
                failed += 1;
                unexpected.push(id);
            }
            (true, true) => unexpected.push(id),
            (true, false) => {}
        }
    }
    if KNOWN_FAILURES.contains(&10) && !criterion10_matches_analysis() {
        unexpected.push(10);
    }
    println!(
        "{} of 12 criteria pass; known failures: {KNOWN_FAILURES:?}",
        12 - failed
    );
    if !unexpected.is_empty() {
        println!("unexpected outcome for criteria {unexpected:?}");
        std::process::exit(1);
    }
}

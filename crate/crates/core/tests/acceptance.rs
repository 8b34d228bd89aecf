//! The twelve acceptance criteria. Each one is recomputed here with its own
//! oracle (brute-force enumeration, direct sums over transcribed rows, plain
//! bitmask elimination) and also compared with the library's own report.

use std::collections::BTreeSet;
use std::process::ExitCode;

use fibercomplex::catalog::{Base, ClassName, Parity};
use fibercomplex::cochain::Cochain;
use fibercomplex::invariants::{Invariant, NamedClass};
use fibercomplex::morse::{count_fibers, random_trace, validate_trace, CountVector, MorseTrace};
use fibercomplex::universal::{
    coarsen_constraints, complex, derive_constraints, diff_coboundaries, suspension,
    ComplexVariant, ExpectedFormulae, ParityConstraint,
};
use fibercomplex::verify::{run_claim, VerifyOptions, DISK_TRACE};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn c(text: &str) -> Cochain {
    Cochain::parse(text).unwrap()
}

fn name(text: &str) -> ClassName {
    text.parse().unwrap()
}

const FULL: ComplexVariant = ComplexVariant::Full32;
const ADM: ComplexVariant = ComplexVariant::Admissible32;

/// Coboundary in degree one, read straight from the transcribed rows.
fn transcribed_delta1(x: &Cochain) -> BTreeSet<ClassName> {
    let rows = &ExpectedFormulae::standard().coboundaries[&1];
    let mut out = BTreeSet::new();
    for g in x.support() {
        let (_, image) = rows
            .iter()
            .find(|(s, _)| s == g)
            .expect("row for every generator");
        for n in image.support() {
            if !out.remove(n) {
                out.insert(*n);
            }
        }
    }
    out
}

/// Number of degree-one cochains with zero coboundary, by enumerating all
/// 2^18 of them.
fn brute_kernel_size(v: ComplexVariant) -> u32 {
    let cx = complex(v);
    let basis2 = cx.basis(2);
    let words = basis2.len().div_ceil(64);
    let images: Vec<Vec<u64>> = cx
        .basis(1)
        .iter()
        .map(|g| {
            let img = transcribed_delta1(&Cochain::from_names(1, [*g]).unwrap());
            let mut w = vec![0u64; words];
            for (i, n) in basis2.iter().enumerate() {
                if img.contains(n) {
                    w[i / 64] |= 1 << (i % 64);
                }
            }
            w
        })
        .collect();
    let mut count = 0;
    for mask in 0u32..(1 << 18) {
        let mut acc = vec![0u64; words];
        for (j, img) in images.iter().enumerate() {
            if mask >> j & 1 == 1 {
                for (a, b) in acc.iter_mut().zip(img) {
                    *a ^= b;
                }
            }
        }
        if acc.iter().all(|&w| w == 0) {
            count += 1;
        }
    }
    count
}

/// The only nonzero coboundary in degree one.
fn degree_one_boundary() -> Cochain {
    c("bI^2 + bI^3 + bI^4 + bI^6 + bI^8")
}

/// Zero in cohomology: the coboundaries in degree one are 0 and B.
fn is_exact(x: &Cochain) -> bool {
    x.is_zero() || *x == degree_one_boundary()
}

fn rank_of_masks(mut rows: Vec<u128>) -> usize {
    let mut rank = 0;
    for bit in 0..128 {
        let Some(p) = (rank..rows.len()).find(|&i| rows[i] >> bit & 1 == 1) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank];
        for (i, r) in rows.iter_mut().enumerate() {
            if i != rank && *r >> bit & 1 == 1 {
                *r ^= pivot;
            }
        }
        rank += 1;
    }
    rank
}

fn masks(cs: &[&ParityConstraint], universe: &[ClassName]) -> Vec<u128> {
    cs.iter()
        .map(|c| {
            universe
                .iter()
                .enumerate()
                .filter(|(_, n)| c.terms().contains(n))
                .fold(0u128, |m, (i, _)| m | 1 << i)
        })
        .collect()
}

fn criterion_1() -> Check {
    // 2 + 9 refined codim-1 bases; codim 2: 45 pairs, bII^11..39, six letters.
    let pairs = (2..=10u32).map(|i| 11 - i).sum::<u32>() as usize;
    let expected_full = [2, 2 * 9, 2 * (pairs + 29 + 6)];
    let expected_adm = [2, 18, 2 * (pairs + 29 + 3)];
    let dims = |v| {
        let cx = complex(v);
        [cx.dim(0), cx.dim(1), cx.dim(2)]
    };
    ensure(
        expected_full == [2, 18, 160] && expected_adm == [2, 18, 154],
        "oracle arithmetic",
    )?;
    ensure(
        dims(FULL) == expected_full,
        format!("full {:?}", dims(FULL)),
    )?;
    ensure(
        dims(ADM) == expected_adm,
        format!("admissible {:?}", dims(ADM)),
    )?;
    Ok("2/18/160 and 2/18/154".into())
}

fn criterion_2() -> Check {
    for v in [FULL, ADM] {
        let cx = complex(v);
        for g in cx.basis(0) {
            let once = cx
                .coboundary(&Cochain::from_names(0, [*g]).unwrap())
                .unwrap();
            let twice = cx.coboundary(&once).unwrap();
            ensure(twice.is_zero(), format!("{v}: delta delta {g} = {twice}"))?;
        }
        ensure(
            cx.delta(1).mul(&cx.delta(0)).unwrap().is_zero(),
            format!("{v}: product"),
        )?;
    }
    Ok("zero on both generators, both variants".into())
}

fn criterion_3() -> Check {
    for v in [FULL, ADM] {
        let cx = complex(v);
        let cocycles = [Cochain::zero(0), c("b0_o"), c("b0_e"), c("b0_o + b0_e")];
        let closed: Vec<String> = cocycles
            .iter()
            .filter(|x| cx.is_cocycle(x).unwrap())
            .map(ToString::to_string)
            .collect();
        ensure(
            closed == ["0", "b0_o + b0_e"],
            format!("{v}: closed 0-cochains {closed:?}"),
        )?;
        ensure(cx.betti(0) == 1, format!("{v}: betti {}", cx.betti(0)))?;
    }
    Ok("ker delta0 = {0, b0_o + b0_e}".into())
}

fn criterion_4() -> Check {
    let kernel = brute_kernel_size(FULL);
    ensure(kernel == 8, format!("kernel has {kernel} elements"))?;
    ensure(complex(FULL).betti(1) == 2, "library betti")?;
    let cx = complex(FULL);
    let beta = NamedClass::Beta.representatives();
    let gamma = NamedClass::Gamma.representatives();
    for r in beta.iter().chain(&gamma) {
        ensure(transcribed_delta1(r).is_empty(), format!("{r} not closed"))?;
        ensure(!is_exact(r), format!("{r} exact"))?;
    }
    let sum = |a: &Cochain, b: &Cochain| a.add(b).unwrap();
    ensure(
        is_exact(&sum(&beta[0], &beta[1])),
        "beta representatives differ",
    )?;
    ensure(
        is_exact(&sum(&gamma[0], &gamma[1])),
        "gamma representatives differ",
    )?;
    ensure(!is_exact(&sum(&beta[0], &gamma[0])), "beta = gamma")?;
    ensure(
        !cx.cohomologous(&beta[0], &gamma[0]).unwrap(),
        "library: beta = gamma",
    )?;
    Ok("2^3 closed cochains, boundary rank 1: dim 2; beta, gamma checked".into())
}

fn criterion_5() -> Check {
    let kernel = brute_kernel_size(ADM);
    ensure(kernel == 16, format!("kernel has {kernel} elements"))?;
    ensure(complex(ADM).betti(1) == 3, "library betti")?;
    let cx = complex(ADM);
    let reps: Vec<Cochain> = NamedClass::ALL.iter().map(|n| n.representative()).collect();
    for r in &reps {
        ensure(cx.is_cocycle(r).unwrap(), format!("{r} not closed"))?;
    }
    for mask in 1..8u8 {
        let mut s = Cochain::zero(1);
        for (i, r) in reps.iter().enumerate() {
            if mask >> i & 1 == 1 {
                s = s.add(r).unwrap();
            }
        }
        ensure(!is_exact(&s), format!("combination {mask:03b} is exact"))?;
    }
    Ok("2^4 closed cochains: dim 3; all 7 combinations of alpha, beta, gamma nonzero".into())
}

fn criterion_6() -> Check {
    let alpha = NamedClass::Alpha.representative();
    let expected: BTreeSet<ClassName> = c("bII^d + bII^e + bII^f").support().clone();
    let by_rows = transcribed_delta1(&alpha);
    ensure(by_rows == expected, format!("row sum gives {by_rows:?}"))?;
    let lib = complex(FULL).coboundary(&alpha).unwrap();
    ensure(lib.support() == &expected, format!("library gives {lib}"))?;
    Ok("bII^d + bII^e + bII^f".into())
}

fn criterion_7() -> Check {
    let f = ExpectedFormulae::standard();
    let refined = derive_constraints(complex(FULL), 1);
    let listed = f.parity_section("parity.refined");
    ensure(refined.len() == 18 && listed.len() == 18, "eighteen items")?;
    for (i, (d, l)) in refined.iter().zip(listed).enumerate() {
        ensure(
            d.terms() == l.terms(),
            format!("refined item {}: `{d}` vs `{l}`", i + 1),
        )?;
    }
    let coarse = coarsen_constraints(&refined);
    let listed_coarse = f.parity_section("parity.coarse");
    ensure(coarse.len() == 9 && listed_coarse.len() == 9, "nine items")?;
    for (i, (d, l)) in coarse.iter().zip(listed_coarse).enumerate() {
        ensure(
            d.terms() == l.terms(),
            format!("coarse item {}: `{d}` vs `{l}`", i + 1),
        )?;
    }
    let basis = f.parity_section("parity.basis");
    let all: Vec<&ParityConstraint> = coarse.iter().chain(basis).collect();
    let universe: Vec<ClassName> = all
        .iter()
        .flat_map(|c| c.terms().iter().copied())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    ensure(universe.len() <= 128, "universe fits a mask")?;
    let nine = masks(&coarse.iter().collect::<Vec<_>>(), &universe);
    let seven = masks(&basis.iter().collect::<Vec<_>>(), &universe);
    let r9 = rank_of_masks(nine.clone());
    let r7 = rank_of_masks(seven.clone());
    let joint = rank_of_masks(nine.into_iter().chain(seven).collect());
    ensure(r9 == 7, format!("rank of the nine is {r9}"))?;
    ensure(
        r7 == 7 && joint == 7,
        format!("listed seven rank {r7}, joint rank {joint}"),
    )?;
    Ok("18 + 9 items equal; rank 7; spans equal".into())
}

fn criterion_8() -> Check {
    let derived = derive_constraints(complex(FULL), 0);
    let expected = ParityConstraint::parse("bI^2 + bI^3 + bI^4 + bI^6 + bI^8").unwrap();
    ensure(derived.len() == 1, format!("{} constraints", derived.len()))?;
    ensure(
        derived[0].terms() == expected.terms(),
        format!("got {}", derived[0]),
    )?;
    let listed = ExpectedFormulae::standard().parity_section("parity.morse");
    ensure(
        listed.len() == 1 && listed[0].terms() == expected.terms(),
        "transcription",
    )?;
    Ok(derived[0].to_string())
}

fn criterion_9() -> Check {
    for v in [FULL, ADM] {
        let s = suspension(v).map_err(|e| e.to_string())?;
        let (src, tgt) = (complex(v), complex(ComplexVariant::Morse21));
        for k in 0..=2 {
            for g in src.basis(k) {
                let x = Cochain::from_names(k, [*g]).unwrap();
                let image = s.apply(&x).unwrap();
                if k < 2 {
                    ensure(image == x, format!("{v}: s{k}({g}) = {image}"))?;
                } else {
                    ensure(image.is_zero(), format!("{v}: s2({g}) = {image}"))?;
                }
                // delta s = s delta on every generator.
                let left = tgt.coboundary(&image).unwrap();
                let right = if k < 2 {
                    s.apply(&src.coboundary(&x).unwrap()).unwrap()
                } else {
                    Cochain::zero(3)
                };
                ensure(left == right, format!("{v}: not commuting at {g}"))?;
            }
        }
    }
    Ok("identity on names in degrees 0, 1; zero in degree 2; commutes".into())
}

fn parity_of(counts: &CountVector, ks: &[u8]) -> u64 {
    ks.iter()
        .map(|&k| counts.get_unrefined(&Base::BI(k).unrefined()))
        .sum::<u64>()
        % 2
}

fn criterion_10() -> Check {
    let gamma: Vec<ClassName> = ["bI^2_o", "bI^3_e", "bI^4_e", "bI^6_o", "bI^8_e"]
        .iter()
        .map(|s| name(s))
        .collect();
    let beta_inv = Invariant::named(FULL, NamedClass::Beta).unwrap();
    let gamma_inv = Invariant::named(FULL, NamedClass::Gamma).unwrap();
    let mut events = 0;
    for seed in 0..1000 {
        let t = random_trace(seed, 40);
        let report = validate_trace(&t);
        ensure(report.is_valid(), format!("seed {seed}: {report}"))?;
        events += t.events.len();
        let counts = count_fibers(&t).unwrap();
        for (label, ks) in [
            ("total", &[2u8, 3, 4, 6, 8][..]),
            ("circles", &[2, 3, 4, 7][..]),
            ("arcs", &[6, 7, 8][..]),
        ] {
            ensure(
                parity_of(&counts, ks) == 0,
                format!("seed {seed}: {label} law odd"),
            )?;
        }
        let g: u64 = gamma.iter().map(|n| counts.get(n)).sum();
        ensure(g.is_multiple_of(2), format!("seed {seed}: gamma count {g}"))?;
        ensure(
            !beta_inv.evaluate(&t).unwrap().0,
            format!("seed {seed}: beta"),
        )?;
        ensure(
            !gamma_inv.evaluate(&t).unwrap().0,
            format!("seed {seed}: gamma"),
        )?;
    }
    ensure(events > 10_000, format!("only {events} events generated"))?;
    Ok(format!("1000 traces, {events} events, zero violations"))
}

fn criterion_11() -> Check {
    let t = MorseTrace::parse(DISK_TRACE).map_err(|e| e.to_string())?;
    let report = validate_trace(&t);
    ensure(report.is_valid(), report.to_string())?;
    let counts = count_fibers(&t).unwrap();
    let alpha_count = parity_of(&counts, &[2, 3, 4, 5, 9, 10]);
    ensure(alpha_count == 1, "alpha support count is even")?;
    let value = Invariant::named(ADM, NamedClass::Alpha)
        .unwrap()
        .evaluate(&t)
        .unwrap();
    ensure(value.0, "library evaluates alpha to 0")?;
    let mut parities = counts.iter().map(|(n, _)| n.parity);
    ensure(
        parities.all(|p| p == Some(Parity::Even)),
        "disk fibers carry regular components",
    )?;
    Ok("disk trace valid, alpha = 1".into())
}

fn criterion_12() -> Check {
    let f = ExpectedFormulae::standard();
    let diffs = diff_coboundaries(complex(FULL), f);
    ensure(diffs.is_empty(), diffs.join("; "))?;
    let cx = complex(FULL);
    let mut rows = 0;
    for (&degree, list) in &f.coboundaries {
        for (src, image) in list {
            let lib = cx
                .coboundary(&Cochain::from_names(degree, [*src]).unwrap())
                .unwrap();
            ensure(
                &lib == image,
                format!("{src}: library `{lib}`, file `{image}`"),
            )?;
            rows += 1;
        }
    }
    ensure(rows == 20, format!("{rows} rows"))?;
    Ok("20 rows identical".into())
}

type Criterion = (&'static str, fn() -> Check);

// Runs without the libtest harness so the twelve lines are always printed.
fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("basis ranks", criterion_1),
        ("delta1 delta0 = 0", criterion_2),
        ("H^0", criterion_3),
        ("H^1 full", criterion_4),
        ("H^1 admissible", criterion_5),
        ("delta1(alpha)", criterion_6),
        ("co-existence laws for maps", criterion_7),
        ("co-existence law for Morse functions", criterion_8),
        ("suspension", criterion_9),
        ("random trace sweep", criterion_10),
        ("disk trace", criterion_11),
        ("double-entry table", criterion_12),
    ];
    let opts = VerifyOptions::default();
    let mut failures = Vec::new();
    for (i, (label, check)) in criteria.iter().enumerate() {
        let id = i as u8 + 1;
        let ours = check();
        let library = run_claim(id, ExpectedFormulae::standard(), &opts);
        let pass = ours.is_ok() && library.passed;
        let detail = match &ours {
            Ok(d) => d.clone(),
            Err(e) => e.clone(),
        };
        println!(
            "criterion {id:>2} {}: {label}: {detail}",
            if pass { "PASS" } else { "FAIL" }
        );
        if !pass {
            failures.push(format!(
                "{id} ({label}): oracle {ours:?}, library: {}",
                library.detail
            ));
        }
    }
    if failures.is_empty() {
        println!("acceptance: 12/12 criteria pass");
        ExitCode::SUCCESS
    } else {
        eprintln!("failed criteria: {failures:#?}");
        ExitCode::FAILURE
    }
}

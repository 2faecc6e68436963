//! Acceptance gate: every criterion at its pinned tolerance, one PASS/FAIL
//! line each. Oracles here are written against `num-rational` directly and
//! do not call the formulas they check.

use std::process::{Command, ExitCode};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use syzygy_core::bounds::{
    bound_a, bound_b, rank1_sumform, recursion_oracle, sections_bound, Branch, Form,
};
use syzygy_core::cli::Report;
use syzygy_core::exactnum::{falling_sum_check, Rational};
use syzygy_core::stability::{check_stability, Verdict};
use syzygy_core::twist::{bb_as_poly, degree_poly, minimal_stable_twist, HilbertPoly, Poly};
use syzygy_core::varieties::{catalog_lookup, Variety};

type Q = BigRational;

const SEED: u64 = 20_240_601;

fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

fn to_q(r: &Rational) -> Q {
    r.as_big_rational().clone()
}

fn from_q(r: &Q) -> Rational {
    Rational::from(r.clone())
}

/// Ordinary binomial coefficient of nonnegative integers.
fn choose(a: i64, b: i64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..b {
        acc = acc * BigInt::from(a - i) / BigInt::from(i + 1);
    }
    acc
}

/// Piecewise real binomial `binom(y + k, k)`: 1 at k = 0, 0 for y < 0.
fn gb(y: &Q, k: u32) -> Q {
    if k == 0 {
        return Q::one();
    }
    if y.is_negative() {
        return Q::zero();
    }
    let mut acc = Q::one();
    for i in 1..=k {
        acc = acc * (y + qi(i64::from(i))) / qi(i64::from(i));
    }
    acc
}

/// Rank-one sum forms, written out from scratch.
fn closed_rank1(n: u32, h: i64, g: i64, d: i64) -> Q {
    let hq = qi(h);
    if d <= 2 * g - 2 {
        hq.clone() / qi(2) * gb(&(q(d, h) - qi(1)), n) + gb(&q(d, h), n - 1)
    } else {
        let mut total = hq * gb(&(q(d - g + 1, h) - qi(1)), n);
        for i in 0..=(n as i64 - 2) {
            let coeff = q(n as i64 - i + g - 1, n as i64 - i);
            total += coeff
                * gb(&(q(d - 2 * g + 2, h) - qi(1)), i as u32)
                * gb(&q(2 * g - 2, h), n - 1 - i as u32);
        }
        total
    }
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(failures: &[String], checked: usize, what: &str) -> Outcome {
    let mut detail = format!("{checked} {what}, {} violations", failures.len());
    for f in failures.iter().take(6) {
        detail.push_str(&format!("\n        {f}"));
    }
    if failures.len() > 6 {
        detail.push_str(&format!("\n        ... {} more", failures.len() - 6));
    }
    Outcome {
        pass: failures.is_empty(),
        detail,
    }
}

fn projective_sharpness() -> Outcome {
    let mut failures = Vec::new();
    let mut checked = 0;
    for n in 1..=5u32 {
        let v = catalog_lookup(&format!("P{n}")).unwrap();
        for d in 0..=30i64 {
            for r in 1..=4i64 {
                checked += 1;
                let expected = Q::from_integer(choose(d + i64::from(n), i64::from(n))) + qi(r - 1);
                let got = sections_bound(&v, r, d, Form::SimplifiedForm).map(|b| to_q(&b.value));
                if got.as_ref() != Ok(&expected) {
                    failures.push(format!("P{n} r={r} d={d}: {got:?} vs {expected}"));
                }
            }
        }
    }
    outcome(&failures, checked, "cases")
}

fn del_pezzo_sharpness() -> Outcome {
    let mut failures = Vec::new();
    let mut checked = 0;
    for e in 1..=9i64 {
        let v = catalog_lookup(&format!("delpezzo-{e}")).unwrap();
        for m in 1..=10i64 {
            // anticanonical Riemann-Roch: h0(mH) = 1 + (m^2 e + m e)/2
            let h0 = qi(1) + q(m * m * e + m * e, 2);
            for r in 1..=3i64 {
                checked += 1;
                let expected = h0.clone() + qi(r - 1);
                let got =
                    sections_bound(&v, r, m * e, Form::SimplifiedForm).map(|b| to_q(&b.value));
                if got.as_ref() != Ok(&expected) {
                    failures.push(format!("delpezzo-{e} r={r} m={m}: {got:?} vs {expected}"));
                }
            }
        }
    }
    outcome(&failures, checked, "cases")
}

fn curve_collapse() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut failures = Vec::new();
    let mut checked = 0;
    for _ in 0..200 {
        let h = rng.gen_range(1..=6i64);
        let g = rng.gen_range(0..=8i64);
        let v = Variety::new("curve", 1, h, 2 - 2 * g).unwrap();
        let start = (2 * g - 1).max(g - 1 + h).max(0);
        let d = rng.gen_range(start..=start + 40);
        let r = rng.gen_range(1..=4i64);
        checked += 1;
        let got = sections_bound(&v, r, d, Form::SimplifiedForm).map(|b| to_q(&b.value));
        let expected = qi(d - g + r);
        if got.as_ref() != Ok(&expected) {
            failures.push(format!("h={h} g={g} d={d} r={r}: {got:?} vs {expected}"));
        }
    }
    for h in 1..=6i64 {
        for g in 1..=8i64 {
            let v = Variety::new("curve", 1, h, 2 - 2 * g).unwrap();
            checked += 1;
            match sections_bound(&v, 1, 2 * g - 2, Form::SimplifiedForm) {
                Ok(b) if b.branch == Branch::Clifford && to_q(&b.value) == qi(g) => {}
                other => failures.push(format!("h={h} g={g} d=2g-2: {other:?} vs {g}")),
            }
        }
    }
    outcome(&failures, checked, "cases")
}

fn recursion_dominance() -> Outcome {
    let mut failures = Vec::new();
    let mut checked = 0;
    for n in 2..=4u32 {
        for h in 1..=4i64 {
            for g in 0..=6i64 {
                for d in 0..=60i64 {
                    checked += 1;
                    let closed = closed_rank1(n, h, g, d);
                    let recursion: Q = (0..=d / h)
                        .map(|i| closed_rank1(n - 1, h, g, d - i * h))
                        .sum();
                    // the library's forms must agree with the oracle's
                    let lib_closed = rank1_sumform(n, h, g, d).map(|r| to_q(&r));
                    let lib_rec = recursion_oracle(n, h, g, d).map(|r| to_q(&r));
                    if lib_closed.as_ref() != Ok(&closed) || lib_rec.as_ref() != Ok(&recursion) {
                        failures.push(format!(
                            "n={n} h={h} g={g} d={d}: library {lib_closed:?}/{lib_rec:?} vs oracle {closed}/{recursion}"
                        ));
                    } else if closed < recursion {
                        failures.push(format!(
                            "n={n} h={h} g={g} d={d}: closed {closed} < recursion {recursion}"
                        ));
                    }
                }
            }
        }
    }
    outcome(&failures, checked, "grid points")
}

fn telescoping() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 5);
    let mut failures = Vec::new();
    for _ in 0..200 {
        let m = rng.gen_range(1..=6u32);
        let a = rng.gen_range(1..=m);
        let k = rng.gen_range(1..=6u32);
        let den = rng.gen_range(1..=8i64);
        let x = q(rng.gen_range(0..=16 * den), den) + qi(i64::from(m + k));
        match falling_sum_check(&from_q(&x), a, m, k) {
            Ok(true) => {}
            other => failures.push(format!("x={x} a={a} m={m} k={k}: {other:?}")),
        }
    }
    outcome(&failures, 200, "seeded instances")
}

fn monotonicity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 6);
    let mut failures = Vec::new();
    let positive = |rng: &mut ChaCha8Rng| {
        let den = rng.gen_range(1..=12i64);
        q(rng.gen_range(1..=60 * den), den)
    };
    for _ in 0..200 {
        let n = rng.gen_range(2..=4u32);
        let h = rng.gen_range(1..=4i64);
        let d1 = positive(&mut rng);
        let d2 = d1.clone() + positive(&mut rng);
        let f = |d: &Q| -(d / to_q(&bound_a(n, h, &from_q(d))));
        if f(&d1) >= f(&d2) {
            failures.push(format!("-d/A n={n} h={h} d={d1} -> {d2}"));
        }
    }
    let mut drawn = 0;
    while drawn < 200 {
        let n = rng.gen_range(2..=4u32);
        let h = rng.gen_range(1..=4i64);
        let g = rng.gen_range(0..=6i64);
        let d1 = qi(2 * g - 2) + positive(&mut rng);
        let d2 = d1.clone() + positive(&mut rng);
        let b = |d: &Q| to_q(&bound_b(n, h, g, &from_q(d)));
        let (b1, b2) = (b(&d1), b(&d2));
        if !b1.is_positive() || !b2.is_positive() {
            continue;
        }
        drawn += 1;
        if -(d1.clone() / b1) >= -(d2.clone() / b2) {
            failures.push(format!("-d/B n={n} h={h} g={g} d={d1} -> {d2}"));
        }
    }
    outcome(&failures, 400, "pairs")
}

fn stability_reproduction() -> Outcome {
    let mut failures = Vec::new();
    let mut checked = 0;
    for (name, n) in [("P2", 2i64), ("P3", 3)] {
        let v = catalog_lookup(name).unwrap();
        for d in 2..=50i64 {
            checked += 1;
            let h0: i64 = choose(d + n, n).try_into().unwrap();
            let verdict = check_stability(&v, d, h0).map(|r| r.verdict);
            if verdict != Ok(Verdict::Stable) {
                failures.push(format!(
                    "{name} d={d} h0={h0}: {verdict:?}, expected Stable"
                ));
            }
        }
    }
    let k3 = catalog_lookup("quartic-K3").unwrap();
    for m in 1..=20i64 {
        checked += 1;
        // K3 Riemann-Roch: h0(mH) = 2 + m^2 H^2 / 2
        let h0 = 2 + m * m * 4 / 2;
        let expected = if m <= 3 {
            Verdict::Inconclusive
        } else {
            Verdict::Stable
        };
        let report = check_stability(&k3, 4 * m, h0);
        match &report {
            Ok(r) if r.verdict == expected => {}
            Ok(r) => failures.push(format!(
                "quartic-K3 m={m} h0={h0}: {} (condition 1 {:?}, condition 2 {:?}), expected {expected}",
                r.verdict, r.condition1.status, r.condition2.status
            )),
            Err(e) => failures.push(format!("quartic-K3 m={m}: {e}")),
        }
    }
    outcome(&failures, checked, "verdicts")
}

fn twist_certificates() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 8);
    let mut failures = Vec::new();
    let cases: Vec<(&str, Vec<Q>, i64)> = vec![
        ("P2", vec![qi(1), q(3, 2), q(1, 2)], 2),
        ("P3", vec![qi(1), q(11, 6), qi(1), q(1, 6)], 2),
        ("quartic-K3", vec![qi(2), qi(0), qi(2)], 4),
    ];
    let mut summary = Vec::new();
    for (name, coefficients, expected) in cases {
        let v = catalog_lookup(name).unwrap();
        let n = v.dim() as usize;
        let hilbert = HilbertPoly::new(coefficients.iter().map(from_q).collect(), 0);
        let cert = match minimal_stable_twist(&v, 0, &hilbert) {
            Ok(c) => c,
            Err(e) => {
                failures.push(format!("{name}: {e}"));
                continue;
            }
        };
        summary.push(format!("{name} k_min={}", cert.k_min));
        if cert.k_min != expected {
            failures.push(format!("{name}: k_min {} vs {expected}", cert.k_min));
        }

        // (a) the k^(n+1) terms of (d-1)(P-1) and d*B_H are equal
        let one = Poly::constant(Rational::one());
        let d = degree_poly(&v, 0);
        let lhs = d.sub(&one).mul(&hilbert.poly.sub(&one));
        let rhs = d.mul(&bb_as_poly(&v, 0).0);
        let f = &cert.condition_polys.f;
        if lhs.coeff(n + 1).is_zero()
            || lhs.coeff(n + 1) != rhs.coeff(n + 1)
            || !f.coeff(n + 1).is_zero()
        {
            failures.push(format!("{name}: k^{} terms do not cancel", n + 1));
        }

        // (b) boundary
        let start = cert.scanned_range[0];
        if cert.k_min != start && f.eval(&Rational::from(cert.k_min - 1)).is_positive() {
            failures.push(format!("{name}: F(k_min - 1) > 0"));
        }

        // checker run twist by twist reproduces k_min on the scanned range
        let h0 = |k: i64| -> i64 {
            let x = qi(k);
            let val: Q = coefficients
                .iter()
                .enumerate()
                .map(|(i, c)| c * num_traits::pow(x.clone(), i))
                .sum();
            val.to_integer().try_into().unwrap()
        };
        let verdict = |k: i64| check_stability(&v, k * v.h_top(), h0(k)).map(|r| r.verdict);
        let end = cert.scanned_range[1];
        let last_bad = (start..=end)
            .filter(|&k| verdict(k) != Ok(Verdict::Stable))
            .max();
        let checker_k_min = last_bad.map_or(start, |k| k + 1);
        if checker_k_min != cert.k_min {
            failures.push(format!(
                "{name}: checker gives k_min {checker_k_min}, scan {}",
                cert.k_min
            ));
        }

        // (c) sampled twists past k_min
        for _ in 0..50 {
            let k = rng.gen_range(cert.k_min..=end.max(cert.k_min) + 50);
            let got = verdict(k);
            if got != Ok(Verdict::Stable) {
                failures.push(format!("{name}: k={k} gives {got:?}"));
            }
        }
    }
    let mut out = outcome(&failures, 3, "certificates");
    out.detail = format!("{} ({})", out.detail, summary.join(", "));
    out
}

fn determinism_and_round_trip() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_syzygy");
    let invocations: Vec<Vec<&str>> = vec![
        vec![
            "bound",
            "--catalog",
            "P3",
            "--rank",
            "2",
            "--degree",
            "0..12",
        ],
        vec![
            "bound",
            "--catalog",
            "quadric-surface",
            "--rank",
            "1",
            "--degree",
            "2",
            "--approx",
            "8",
        ],
        vec![
            "check",
            "--catalog",
            "quartic-K3",
            "--degree",
            "12",
            "--h0",
            "20",
        ],
        vec![
            "twist",
            "--catalog",
            "quartic-K3",
            "--degree",
            "0",
            "--hilbert",
            "2,0,2",
            "--regularity",
            "0",
        ],
        vec!["catalog", "list"],
        vec!["verify", "--grid", "small", "--seed", "11"],
    ];
    let mut failures = Vec::new();
    for args in &invocations {
        let run = || {
            Command::new(bin)
                .args(args)
                .args(["--format", "json"])
                .output()
                .expect("binary runs")
        };
        let (a, b) = (run(), run());
        if a.stdout != b.stdout {
            failures.push(format!("{args:?}: outputs differ"));
            continue;
        }
        let text = String::from_utf8_lossy(&a.stdout);
        match Report::from_json(&text) {
            Ok(report) => {
                if report.to_json() + "\n" != text {
                    failures.push(format!("{args:?}: re-serialization differs"));
                }
                match Report::from_json(&report.to_json()) {
                    Ok(again) if again == report => {}
                    _ => failures.push(format!("{args:?}: round trip changed the report")),
                }
            }
            Err(e) => failures.push(format!("{args:?}: {e}")),
        }
    }
    outcome(&failures, invocations.len(), "invocations")
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 9] = [
        ("projective space sharpness", projective_sharpness),
        ("del Pezzo sharpness", del_pezzo_sharpness),
        ("curve collapse", curve_collapse),
        ("recursion dominance", recursion_dominance),
        ("telescoping identity", telescoping),
        ("monotonicity", monotonicity),
        ("stability reproduction", stability_reproduction),
        ("twist certificates", twist_certificates),
        ("determinism and round trip", determinism_and_round_trip),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let result = run();
        let status = if result.pass { "PASS" } else { "FAIL" };
        if !result.pass {
            failed += 1;
        }
        println!("{status} criterion {}: {name}: {}", i + 1, result.detail);
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

//! Bundled invariant suite behind `syzygy verify`.
//!
//! Every check reports pass/fail counts and itemized failures. Random
//! sampling uses one ChaCha stream per check, so adding a check never shifts
//! the samples of another.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bounds::{bound_a, bound_b, rank1_sumform, recursion_oracle, sections_bound, Form};
use crate::error::{Error, Result};
use crate::exactnum::{falling_sum_check, Rational};
use crate::stability::{check_stability, Verdict};
use crate::twist::{minimal_stable_twist, HilbertPoly};
use crate::varieties::{catalog_lookup, Variety};

const MAX_ITEMIZED: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Grid {
    Small,
    Full,
}

impl FromStr for Grid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "small" => Ok(Grid::Small),
            "full" => Ok(Grid::Full),
            other => Err(Error::Parse(format!(
                "grid must be small or full, got {other:?}"
            ))),
        }
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Grid::Small => "small",
            Grid::Full => "full",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckSummary {
    pub name: String,
    pub passed: u64,
    pub failed: u64,
    /// First failures, at most 100.
    pub failures: Vec<String>,
}

impl CheckSummary {
    fn new(name: &str) -> Self {
        CheckSummary {
            name: name.to_string(),
            passed: 0,
            failed: 0,
            failures: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.failures.len() < MAX_ITEMIZED {
                self.failures.push(describe());
            }
        }
    }

    fn record_result(&mut self, outcome: Result<bool>, describe: impl FnOnce() -> String) {
        match outcome {
            Ok(ok) => self.record(ok, describe),
            Err(e) => self.record(false, || format!("{}: error {e}", describe())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifySummary {
    pub grid: Grid,
    pub seed: u64,
    pub passed: u64,
    pub failed: u64,
    pub checks: Vec<CheckSummary>,
}

impl VerifySummary {
    pub fn is_ok(&self) -> bool {
        self.failed == 0
    }
}

fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Positive rational `p/q` with `q <= max_q` and value in `(0, max]`.
fn positive_rational(rng: &mut impl Rng, max: i64, max_q: i64) -> Rational {
    let q = rng.gen_range(1..=max_q);
    let p = rng.gen_range(1..=max * q);
    Rational::new(p, q)
}

/// Random instance of the telescoping identity satisfying its precondition
/// `1 <= a <= m`, `k >= 1`, `x - m - k >= 0`, with rational `x`.
pub fn sample_telescoping(rng: &mut impl Rng) -> (Rational, u32, u32, u32) {
    let m = rng.gen_range(1..=6u32);
    let a = rng.gen_range(1..=m);
    let k = rng.gen_range(1..=6u32);
    let q = rng.gen_range(1..=8i64);
    let s = Rational::new(rng.gen_range(0..=16 * q), q);
    let x = s + Rational::from(m + k);
    (x, a, m, k)
}

pub fn telescoping(samples: usize, rng: &mut impl Rng) -> CheckSummary {
    let mut out = CheckSummary::new("telescoping identity");
    for _ in 0..samples {
        let (x, a, m, k) = sample_telescoping(rng);
        out.record_result(falling_sum_check(&x, a, m, k), || {
            format!("x={x} a={a} m={m} k={k}")
        });
    }
    out
}

/// `-d/A` strictly increasing on `d > 0`, and `-d/B` on `d > 2g - 2` where
/// `B > 0`, for surfaces and threefolds/fourfolds (`n` in 2..=4).
pub fn monotonicity(pairs: usize, rng: &mut impl Rng) -> (CheckSummary, CheckSummary) {
    let mut out_a = CheckSummary::new("monotonicity of -d/A");
    let mut out_b = CheckSummary::new("monotonicity of -d/B");
    for _ in 0..pairs {
        let n = rng.gen_range(2..=4u32);
        let h = rng.gen_range(1..=4i64);
        let d1 = positive_rational(rng, 60, 12);
        let d2 = &d1 + positive_rational(rng, 60, 12);
        let f1 = -(&d1 / bound_a(n, h, &d1));
        let f2 = -(&d2 / bound_a(n, h, &d2));
        out_a.record(f1 < f2, || {
            format!("n={n} h={h} d={d1} -> {d2}: {f1} vs {f2}")
        });
    }
    let mut drawn = 0;
    while drawn < pairs {
        let n = rng.gen_range(2..=4u32);
        let h = rng.gen_range(1..=4i64);
        let g = rng.gen_range(0..=6i64);
        let floor = Rational::from(2 * g - 2);
        let d1 = &floor + positive_rational(rng, 60, 12);
        let d2 = &d1 + positive_rational(rng, 60, 12);
        let (b1, b2) = (bound_b(n, h, g, &d1), bound_b(n, h, g, &d2));
        if !b1.is_positive() || !b2.is_positive() {
            continue;
        }
        drawn += 1;
        let f1 = -(&d1 / b1);
        let f2 = -(&d2 / b2);
        out_b.record(f1 < f2, || {
            format!("n={n} h={h} g={g} d={d1} -> {d2}: {f1} vs {f2}")
        });
    }
    (out_a, out_b)
}

/// Closed rank-one bound dominates the hyperplane-section recursion.
pub fn recursion_dominance(ns: &[u32], hs: &[i64], gs: &[i64], ds: &[i64]) -> CheckSummary {
    let mut out = CheckSummary::new("recursion dominance");
    for &n in ns {
        for &h in hs {
            for &g in gs {
                for &d in ds {
                    let outcome = rank1_sumform(n, h, g, d)
                        .and_then(|c| recursion_oracle(n, h, g, d).map(|r| (c, r)));
                    match outcome {
                        Ok((closed, rec)) => out.record(closed >= rec, || {
                            format!("n={n} h={h} g={g} d={d}: closed {closed} < recursion {rec}")
                        }),
                        Err(e) => out.record(false, || format!("n={n} h={h} g={g} d={d}: {e}")),
                    }
                }
            }
        }
    }
    out
}

/// `C(a, b)` exactly.
fn binomial(a: i64, b: i64) -> Rational {
    (0..b).fold(Rational::one(), |acc, i| acc * Rational::new(a - i, i + 1))
}

pub fn projective_sharpness(max_n: u32, max_d: i64, max_rank: i64) -> CheckSummary {
    let mut out = CheckSummary::new("projective space sharpness");
    for n in 1..=max_n {
        let v = catalog_lookup(&format!("P{n}")).expect("catalog has projective spaces");
        for d in 0..=max_d {
            for r in 1..=max_rank {
                let expected = binomial(d + i64::from(n), i64::from(n)) + Rational::from(r - 1);
                let got = sections_bound(&v, r, d, Form::SimplifiedForm).map(|b| b.value);
                out.record_result(
                    got.as_ref().map(|g| *g == expected).map_err(Clone::clone),
                    || format!("P{n} r={r} d={d}: {got:?} vs {expected}"),
                );
            }
        }
    }
    out
}

pub fn del_pezzo_sharpness(max_m: i64, max_rank: i64) -> CheckSummary {
    let mut out = CheckSummary::new("del Pezzo sharpness");
    for e in 1..=9i64 {
        let v = catalog_lookup(&format!("delpezzo-{e}")).expect("catalog has del Pezzo surfaces");
        for m in 1..=max_m {
            for r in 1..=max_rank {
                let expected = Rational::from(e * m * (m + 1) / 2 + r);
                let got = sections_bound(&v, r, m * e, Form::SimplifiedForm).map(|b| b.value);
                out.record_result(
                    got.as_ref().map(|g| *g == expected).map_err(Clone::clone),
                    || format!("delpezzo-{e} r={r} d={}: {got:?} vs {expected}", m * e),
                );
            }
        }
    }
    out
}

/// Structure sheaf examples with known Hilbert polynomials.
pub fn reference_twists() -> Vec<(Variety, HilbertPoly)> {
    let q = Rational::new;
    let mut cases = vec![
        (
            catalog_lookup("P2").expect("P2"),
            HilbertPoly::new(vec![q(1, 1), q(3, 2), q(1, 2)], 0),
        ),
        (
            catalog_lookup("P3").expect("P3"),
            HilbertPoly::new(vec![q(1, 1), q(11, 6), q(1, 1), q(1, 6)], 0),
        ),
        (
            catalog_lookup("quartic-K3").expect("quartic-K3"),
            HilbertPoly::new(vec![q(2, 1), q(0, 1), q(2, 1)], 0),
        ),
    ];
    // anticanonically polarized del Pezzo: P(k) = 1 + e k (k + 1)/2
    for e in 3..=9 {
        cases.push((
            catalog_lookup(&format!("delpezzo-{e}")).expect("del Pezzo"),
            HilbertPoly::new(vec![q(1, 1), q(e, 2), q(e, 2)], 0),
        ));
    }
    cases
}

/// The exact scan agrees with the checker twist by twist, the certificate is
/// minimal, and sampled twists past `k_min` are Stable.
pub fn certificate_soundness(samples: usize, rng: &mut impl Rng) -> CheckSummary {
    let mut out = CheckSummary::new("twist certificate soundness");
    for (v, hilbert) in reference_twists() {
        let name = v.name().to_string();
        let cert = match minimal_stable_twist(&v, 0, &hilbert) {
            Ok(c) => c,
            Err(e) => {
                out.record(false, || format!("{name}: {e}"));
                continue;
            }
        };
        let verdict_at = |k: i64| -> Result<Verdict> {
            let h0 = hilbert.sections_at(k)?;
            check_stability(&v, k * v.h_top(), h0).map(|r| r.verdict)
        };
        for entry in &cert.scan_log {
            let verdict = verdict_at(entry.k);
            out.record(
                verdict
                    .as_ref()
                    .map(|v| (*v == Verdict::Stable) == entry.pass)
                    .unwrap_or(false),
                || {
                    format!(
                        "{name} k={}: scan pass={} but checker {verdict:?}",
                        entry.k, entry.pass
                    )
                },
            );
        }
        if cert.k_min > cert.scanned_range[0] {
            let below = verdict_at(cert.k_min - 1);
            out.record(
                below
                    .as_ref()
                    .map(|v| *v != Verdict::Stable)
                    .unwrap_or(false),
                || {
                    format!(
                        "{name}: k_min={} not minimal, checker {below:?} below it",
                        cert.k_min
                    )
                },
            );
        }
        let top = cert.scanned_range[1].max(cert.k_min) + 50;
        for _ in 0..samples {
            let k = rng.gen_range(cert.k_min..=top);
            let verdict = verdict_at(k);
            out.record(matches!(verdict, Ok(Verdict::Stable)), || {
                format!("{name} k={k} >= k_min={}: {verdict:?}", cert.k_min)
            });
        }
    }
    out
}

pub fn run_verify(grid: Grid, seed: u64) -> VerifySummary {
    let (samples, cert_samples) = match grid {
        Grid::Small => (200, 10),
        Grid::Full => (2000, 50),
    };
    let mut checks = vec![telescoping(samples, &mut stream(seed, 0))];
    let (mono_a, mono_b) = monotonicity(samples, &mut stream(seed, 1));
    checks.push(mono_a);
    checks.push(mono_b);
    checks.push(match grid {
        Grid::Small => recursion_dominance(
            &[2, 3],
            &[1, 2, 3],
            &[0, 1, 2, 3, 4],
            &(0..=30).collect::<Vec<_>>(),
        ),
        Grid::Full => recursion_dominance(
            &[2, 3, 4],
            &[1, 2, 3, 4],
            &(0..=6).collect::<Vec<_>>(),
            &(0..=60).collect::<Vec<_>>(),
        ),
    });
    checks.push(match grid {
        Grid::Small => projective_sharpness(5, 15, 4),
        Grid::Full => projective_sharpness(5, 30, 4),
    });
    checks.push(del_pezzo_sharpness(10, 3));
    checks.push(certificate_soundness(cert_samples, &mut stream(seed, 2)));

    let passed = checks.iter().map(|c| c.passed).sum();
    let failed = checks.iter().map(|c| c.failed).sum();
    VerifySummary {
        grid,
        seed,
        passed,
        failed,
        checks,
    }
}

//! Slope-stability certificates for syzygy (Lazarsfeld-Mukai) sheaves.
//!
//! For a globally generated torsion-free rank-one sheaf `L` of degree `d` with
//! `h0` sections, the syzygy sheaf `M` has rank `h0 - 1` and degree `-d`. `M`
//! is certified stable when
//!
//! 1. `h0 - 1 > d/(2g-2) * A_H(n, 2g-2)`, and
//! 2. `h0 - 1 > d/(d-1) * B_H(n, d-1)`,
//!
//! restricted to the conditions that can matter: a destabilizing quotient has
//! degree in `[1, d-1]`, condition 1 covers quotient degrees up to `2g-2` and
//! condition 2 covers those above. Equality in an applicable condition only
//! certifies semistability. A failed condition means the criterion is silent,
//! never that `M` is unstable.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bounds::{bound_a, bound_b};
use crate::error::{Error, Result};
use crate::exactnum::Rational;
use crate::varieties::Variety;

/// `mu = degree / rank`, or `+inf` for rank zero. Serialized as a rational
/// string or `"+inf"`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Slope {
    Finite(Rational),
    Infinite,
}

impl Serialize for Slope {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Slope {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        if s == "+inf" {
            Ok(Slope::Infinite)
        } else {
            s.parse()
                .map(Slope::Finite)
                .map_err(serde::de::Error::custom)
        }
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slope::Finite(r) => write!(f, "{r}"),
            Slope::Infinite => f.write_str("+inf"),
        }
    }
}

pub fn slope(rank: i64, degree: i64) -> Slope {
    if rank == 0 {
        Slope::Infinite
    } else {
        Slope::Finite(Rational::new(degree, rank))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LmInvariants {
    pub rank_m: i64,
    pub degree_m: i64,
    pub slope_m: Slope,
}

impl LmInvariants {
    pub fn new(rank: i64, degree: i64, h0: i64) -> Self {
        let rank_m = h0 - rank;
        LmInvariants {
            rank_m,
            degree_m: -degree,
            slope_m: slope(rank_m, -degree),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConditionOutcome {
    StrictPass,
    Equality,
    Fail,
    Vacuous,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionStatus {
    pub status: ConditionOutcome,
    /// `h0 - 1`
    pub lhs: Rational,
    /// Threshold the left side must exceed; absent when the condition is vacuous.
    pub rhs: Option<Rational>,
    /// Degree at which the section bound is evaluated (`2g-2` or `d-1`).
    pub threshold_degree: i64,
}

impl ConditionStatus {
    fn vacuous(lhs: Rational, threshold_degree: i64) -> Self {
        ConditionStatus {
            status: ConditionOutcome::Vacuous,
            lhs,
            rhs: None,
            threshold_degree,
        }
    }

    fn compare(lhs: Rational, rhs: Rational, threshold_degree: i64) -> Self {
        let status = match lhs.cmp(&rhs) {
            std::cmp::Ordering::Greater => ConditionOutcome::StrictPass,
            std::cmp::Ordering::Equal => ConditionOutcome::Equality,
            std::cmp::Ordering::Less => ConditionOutcome::Fail,
        };
        ConditionStatus {
            status,
            lhs,
            rhs: Some(rhs),
            threshold_degree,
        }
    }

    pub fn is_applicable(&self) -> bool {
        self.status != ConditionOutcome::Vacuous
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Stable,
    Semistable,
    Inconclusive,
    /// `d = 1`: no quotient degree in `[1, d-1]` exists.
    TriviallyStable,
    /// `d = 0`: `L` is trivial and `M = 0`.
    Degenerate,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Stable => "Stable",
            Verdict::Semistable => "Semistable",
            Verdict::Inconclusive => "Inconclusive",
            Verdict::TriviallyStable => "TriviallyStable",
            Verdict::Degenerate => "Degenerate",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub verdict: Verdict,
    pub degree: i64,
    pub h0: i64,
    pub condition1: ConditionStatus,
    pub condition2: ConditionStatus,
    pub lm: LmInvariants,
}

/// Right-hand side of condition 1: `d/(2g-2) * A_H(n, 2g-2)`. Needs `g >= 2`.
pub fn condition1_threshold(variety: &Variety, degree: i64) -> Rational {
    let canonical = 2 * variety.genus() - 2;
    Rational::new(degree, canonical)
        * bound_a(variety.dim(), variety.h_top(), &Rational::from(canonical))
}

/// Right-hand side of condition 2: `d/(d-1) * B_H(n, d-1)`. Needs `d >= 2`.
pub fn condition2_threshold(variety: &Variety, degree: i64) -> Rational {
    Rational::new(degree, degree - 1)
        * bound_b(
            variety.dim(),
            variety.h_top(),
            variety.genus(),
            &Rational::from(degree - 1),
        )
}

/// Evaluates the stability criterion for the syzygy sheaf of a globally
/// generated torsion-free rank-one sheaf of degree `degree` with `h0` sections.
pub fn check_stability(variety: &Variety, degree: i64, h0: i64) -> Result<StabilityReport> {
    if degree < 0 {
        return Err(Error::Inconsistent(format!(
            "degree {degree} is negative; a globally generated sheaf has degree >= 0"
        )));
    }
    if h0 < 1 {
        return Err(Error::Inconsistent(format!(
            "h0 = {h0}; a globally generated rank-one sheaf has at least one section"
        )));
    }
    let g = variety.genus();
    let canonical = 2 * g - 2;
    let lhs = Rational::from(h0 - 1);
    let lm = LmInvariants::new(1, degree, h0);

    if degree == 0 {
        if h0 != 1 {
            return Err(Error::Inconsistent(format!(
                "degree 0 forces L to be trivial (h0 = 1), got h0 = {h0}"
            )));
        }
        return Ok(StabilityReport {
            verdict: Verdict::Degenerate,
            degree,
            h0,
            condition1: ConditionStatus::vacuous(lhs.clone(), canonical),
            condition2: ConditionStatus::vacuous(lhs, degree - 1),
            lm,
        });
    }
    if h0 == 1 {
        return Err(Error::Inconsistent(format!(
            "h0 = 1 with degree {degree} > 0 cannot be globally generated"
        )));
    }
    if degree == 1 {
        return Ok(StabilityReport {
            verdict: Verdict::TriviallyStable,
            degree,
            h0,
            condition1: ConditionStatus::vacuous(lhs.clone(), canonical),
            condition2: ConditionStatus::vacuous(lhs, degree - 1),
            lm,
        });
    }

    let condition1 = if canonical.min(degree - 1) >= 1 {
        ConditionStatus::compare(
            lhs.clone(),
            condition1_threshold(variety, degree),
            canonical,
        )
    } else {
        ConditionStatus::vacuous(lhs.clone(), canonical)
    };
    // written as the rule reads: d - 1 >= max(2g - 1, 1)
    #[allow(clippy::int_plus_one)]
    let condition2 = if degree - 1 >= (2 * g - 1).max(1) {
        ConditionStatus::compare(
            lhs.clone(),
            condition2_threshold(variety, degree),
            degree - 1,
        )
    } else {
        ConditionStatus::vacuous(lhs, degree - 1)
    };

    let statuses = [condition1.status, condition2.status];
    let verdict = if statuses.contains(&ConditionOutcome::Fail) {
        Verdict::Inconclusive
    } else if statuses.contains(&ConditionOutcome::Equality) {
        Verdict::Semistable
    } else if statuses.contains(&ConditionOutcome::StrictPass) {
        Verdict::Stable
    } else {
        // d >= 2 always leaves at least one condition applicable.
        return Err(Error::Internal(format!(
            "no applicable condition for degree {degree}, genus {g}"
        )));
    };

    Ok(StabilityReport {
        verdict,
        degree,
        h0,
        condition1,
        condition2,
        lm,
    })
}

/// Rank-aware front door: only rank one is certified.
pub fn check_stability_with_rank(
    variety: &Variety,
    rank: i64,
    degree: i64,
    h0: i64,
) -> Result<StabilityReport> {
    match rank {
        1 => check_stability(variety, degree, h0),
        r if r >= 2 => Err(Error::NotApplicable(format!(
            "rank {r}: for rank >= 2 on a variety of dimension >= 2 the section bound grows like \
             rank^n while h0 grows like rank, so the criterion cannot fire at large twists; \
             only rank 1 is checked"
        ))),
        r => Err(Error::InvalidInput(format!(
            "rank must be at least 1, got {r}"
        ))),
    }
}

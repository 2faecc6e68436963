//! Effective twists: for which `k` is the syzygy sheaf of `L(k)` certified
//! stable?
//!
//! Past the regularity of `L`, `h^0(L(k))` is the Hilbert polynomial `P(k)`
//! and the degree is `d(k) = d0 + k*h_top`, so each stability condition turns
//! into the sign of a polynomial in `k`:
//!
//! * `F(k) = (d(k) - 1)(P(k) - 1) - d(k) * B_H(n, d(k) - 1)` (condition 2),
//! * `G(k) = (2g - 2)(P(k) - 1) - d(k) * A_H(n, 2g - 2)` (condition 1, `g >= 2`).
//!
//! The `k^(n+1)` terms of `F` cancel, leaving a degree-`n` polynomial with a
//! positive leading coefficient. A Cauchy root bound caps where sign changes
//! can happen and every integer below the cap is checked exactly.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bounds::bound_a;
use crate::error::{Error, Result};
use crate::exactnum::{factorial, genbinom, Rational};
use crate::varieties::Variety;

/// Dense univariate polynomial with rational coefficients, constant term
/// first, never carrying trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Poly(Vec<Rational>);

impl Poly {
    pub fn new(mut coefficients: Vec<Rational>) -> Self {
        while coefficients.last().is_some_and(Rational::is_zero) {
            coefficients.pop();
        }
        Poly(coefficients)
    }

    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn constant(c: Rational) -> Self {
        Poly::new(vec![c])
    }

    /// `a*k + b`
    pub fn linear(a: Rational, b: Rational) -> Self {
        Poly::new(vec![b, a])
    }

    pub fn from_ints(coefficients: &[i64]) -> Self {
        Poly::new(coefficients.iter().map(|&c| Rational::from(c)).collect())
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.0.last()
    }

    /// Coefficient of `k^i` (zero past the degree).
    pub fn coeff(&self, i: usize) -> Rational {
        self.0.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let len = self.0.len().max(other.0.len());
        Poly::new((0..len).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(&Rational::from(-1)))
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        Poly::new(self.0.iter().map(|x| x * c).collect())
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &Rational) -> Rational {
        self.0
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    /// Substitutes `k -> a*k + b`.
    pub fn compose_linear(&self, a: &Rational, b: &Rational) -> Poly {
        let inner = Poly::linear(a.clone(), b.clone());
        self.0.iter().rev().fold(Poly::zero(), |acc, c| {
            acc.mul(&inner).add(&Poly::constant(c.clone()))
        })
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly{:?}", self.0)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() {
                ("-", c.abs())
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let unit = mag == Rational::one();
            match i {
                0 => write!(f, "{mag}")?,
                1 if unit => f.write_str("k")?,
                1 => write!(f, "{mag}*k")?,
                _ if unit => write!(f, "k^{i}")?,
                _ => write!(f, "{mag}*k^{i}")?,
            }
        }
        Ok(())
    }
}

/// `genbinom(t, n)` as a polynomial in `t`, i.e. `(t+1)(t+2)...(t+n)/n!`.
/// Agrees with [`genbinom`] wherever `t >= 0`.
fn genbinom_poly(n: u32) -> Poly {
    let product = (1..=n).fold(Poly::constant(Rational::one()), |acc, i| {
        acc.mul(&Poly::linear(Rational::one(), Rational::from(i64::from(i))))
    });
    product.scale(&Rational::from(factorial(n)).recip())
}

/// Hilbert polynomial of `L` together with a regularity bound past which
/// `h^0(L(k)) = P(k)` and `L(k)` is globally generated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertPoly {
    pub poly: Poly,
    pub regularity: i64,
}

impl HilbertPoly {
    pub fn new(coefficients: Vec<Rational>, regularity: i64) -> Self {
        HilbertPoly {
            poly: Poly::new(coefficients),
            regularity,
        }
    }

    /// The two coefficients pinned down by Riemann-Roch:
    /// `[k^n] = h_top/n!` and `[k^(n-1)] = (d0 + c1_dot_h/2)/(n-1)!`.
    pub fn expected_top(variety: &Variety, d0: i64) -> (Rational, Rational) {
        let n = variety.dim();
        let lead = Rational::from(variety.h_top()) / Rational::from(factorial(n));
        let next = (Rational::from(d0) + Rational::new(variety.c1_dot_h(), 2))
            / Rational::from(factorial(n - 1));
        (lead, next)
    }

    pub fn validate(&self, variety: &Variety, d0: i64) -> Result<()> {
        let n = variety.dim() as usize;
        if self.poly.degree() != Some(n) {
            return Err(Error::Inconsistent(format!(
                "hilbert polynomial {} has degree {:?}, expected the dimension {n}",
                self.poly,
                self.poly.degree()
            )));
        }
        let (lead, next) = Self::expected_top(variety, d0);
        for (power, expected) in [(n, lead), (n - 1, next)] {
            let supplied = self.poly.coeff(power);
            if supplied != expected {
                return Err(Error::HilbertMismatch {
                    power,
                    expected: expected.to_string(),
                    supplied: supplied.to_string(),
                });
            }
        }
        Ok(())
    }

    /// `P(k)` as an integer section count; fails if `P(k)` is not a
    /// nonnegative integer.
    pub fn sections_at(&self, k: i64) -> Result<i64> {
        let v = self.poly.eval(&Rational::from(k));
        v.to_i64().filter(|&h| h >= 0).ok_or_else(|| {
            Error::Inconsistent(format!("P({k}) = {v} is not a nonnegative integer"))
        })
    }
}

/// `B_H(n, d0 + k*h_top - 1)` as a polynomial in `k`, together with the first
/// integer `k_pos` from which every binomial argument is nonnegative (so the
/// polynomial agrees with [`crate::bounds::bound_b`]).
pub fn bb_as_poly(variety: &Variety, d0: i64) -> (Poly, i64) {
    let (n, h, g) = (variety.dim(), variety.h_top(), variety.genus());
    let one = Rational::one();
    // Argument of the leading binomial: (d(k) - 1 - (g - 1))/h - 1 = k + (d0 - g)/h - 1
    let main_shift = Rational::new(d0 - g, h) - 1;
    let mut poly = genbinom_poly(n)
        .compose_linear(&one, &main_shift)
        .scale(&Rational::from(h))
        .sub(&Poly::constant(one.clone()));
    if n >= 2 {
        let ni = i64::from(n);
        let coeff = Rational::new((ni - 1) * (ni + g - 1), ni)
            * genbinom(&Rational::new(2 * g - 2, h), n - 1);
        // (d(k) - 1 - (2g - 2))/h - 1 = k + (d0 - 2g + 1)/h - 1
        let cross_shift = Rational::new(d0 - 2 * g + 1, h) - 1;
        let cross = genbinom_poly(n - 2)
            .compose_linear(&one, &cross_shift)
            .scale(&coeff);
        poly = poly.add(&cross);
    }
    // smallest k with d0 + k*h - 1 >= max(2g-2, g-1) + h
    let need = (2 * g - 2).max(g - 1) + h + 1 - d0;
    let k_pos = Rational::new(need, h).ceil();
    let k_pos = i64::try_from(k_pos).expect("k_pos fits in i64");
    (poly, k_pos)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionPolys {
    /// Condition 2 as a sign test.
    pub f: Poly,
    /// Condition 1 as a sign test; only when `g >= 2`.
    pub g: Option<Poly>,
    pub k_pos: i64,
}

/// `d(k) = d0 + k*h_top`
pub fn degree_poly(variety: &Variety, d0: i64) -> Poly {
    Poly::linear(Rational::from(variety.h_top()), Rational::from(d0))
}

pub fn build_condition_polys(
    variety: &Variety,
    d0: i64,
    hilbert: &HilbertPoly,
) -> Result<ConditionPolys> {
    let n = variety.dim();
    if n < 2 {
        return Err(Error::NotApplicable(
            "effective twists need dimension at least 2".into(),
        ));
    }
    if d0 < 0 {
        return Err(Error::Inconsistent(format!(
            "degree {d0} is negative; a globally generated sheaf has degree >= 0"
        )));
    }
    hilbert.validate(variety, d0)?;

    let one = Poly::constant(Rational::one());
    let d = degree_poly(variety, d0);
    let p_minus_1 = hilbert.poly.sub(&one);
    let (b, k_pos) = bb_as_poly(variety, d0);

    let f = d.sub(&one).mul(&p_minus_1).sub(&d.mul(&b));
    let genus = variety.genus();
    let g = (genus >= 2).then(|| {
        let canonical = 2 * genus - 2;
        let a = bound_a(n, variety.h_top(), &Rational::from(canonical));
        p_minus_1
            .scale(&Rational::from(canonical))
            .sub(&d.scale(&a))
    });
    Ok(ConditionPolys { f, g, k_pos })
}

/// `1 + max_{i < deg} |c_i / c_deg|`; every real root has absolute value at
/// most this.
pub fn cauchy_bound(p: &Poly) -> Result<Rational> {
    let lead = p
        .leading()
        .ok_or_else(|| Error::InvalidInput("Cauchy bound of the zero polynomial".into()))?;
    let max = p.coefficients()[..p.coefficients().len() - 1]
        .iter()
        .map(|c| (c / lead).abs())
        .max()
        .unwrap_or_else(Rational::zero);
    Ok(max + 1)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanEntry {
    pub k: i64,
    pub f: Rational,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<Rational>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistCertificate {
    pub k_min: i64,
    /// Largest Cauchy bound over the condition polynomials.
    pub cauchy_bound: Rational,
    /// Integers `[start, end]` evaluated exactly; `end < start` means nothing
    /// needed scanning.
    pub scanned_range: [i64; 2],
    pub k_pos: i64,
    pub regularity: i64,
    pub condition_polys: ConditionPolys,
    /// Twists in the scanned range where some condition held with equality
    /// and none failed (semistable certificates).
    pub equality_points: Vec<i64>,
    pub scan_log: Vec<ScanEntry>,
    pub notes: Vec<String>,
}

/// Smallest `k_min >= max(regularity, k_pos)` such that every condition
/// polynomial is strictly positive at every integer `k >= k_min`.
pub fn minimal_stable_twist(
    variety: &Variety,
    d0: i64,
    hilbert: &HilbertPoly,
) -> Result<TwistCertificate> {
    let polys = build_condition_polys(variety, d0, hilbert)?;
    let n = variety.dim() as usize;
    let all: Vec<&Poly> = std::iter::once(&polys.f).chain(polys.g.as_ref()).collect();

    for (name, p) in ["F", "G"].iter().zip(&all) {
        match p.leading() {
            Some(c) if c.is_positive() => {}
            _ => {
                return Err(Error::Internal(format!(
                    "{name} = {p} has no positive leading coefficient"
                )))
            }
        }
    }
    if polys.f.degree() != Some(n) {
        return Err(Error::Internal(format!(
            "F = {} should have degree {n} after cancellation",
            polys.f
        )));
    }

    let bound = all
        .iter()
        .map(|p| cauchy_bound(p))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .max()
        .expect("at least one condition polynomial");
    let end =
        i64::try_from(bound.ceil()).map_err(|_| Error::Internal("Cauchy bound overflow".into()))?;
    let start = hilbert.regularity.max(polys.k_pos);

    let mut k_min = start;
    let mut equality_points = Vec::new();
    let mut scan_log = Vec::new();
    for k in start..=end {
        let kr = Rational::from(k);
        let f = polys.f.eval(&kr);
        let g = polys.g.as_ref().map(|p| p.eval(&kr));
        let values = std::iter::once(&f).chain(g.as_ref());
        let pass = values.clone().all(Rational::is_positive);
        if !pass {
            k_min = k + 1;
            if values.clone().all(|v| !v.is_negative()) {
                equality_points.push(k);
            }
        }
        scan_log.push(ScanEntry { k, f, g, pass });
    }

    let mut notes = vec![
        format!(
            "condition-2 polynomial F: the k^{} terms of (d-1)(P-1) and d*B_H cancel, leaving degree {n}",
            n + 1
        ),
        format!(
            "positivity for k > {end} follows from the Cauchy bound {bound} and positive leading coefficients"
        ),
    ];
    if polys.g.is_some() {
        notes.push(format!(
            "genus {} >= 2: condition-1 polynomial G scanned on the same range",
            variety.genus()
        ));
    }
    for k in &equality_points {
        notes.push(format!(
            "k = {k}: equality without failure, syzygy sheaf certified semistable"
        ));
    }

    Ok(TwistCertificate {
        k_min,
        cauchy_bound: bound,
        scanned_range: [start, end],
        k_pos: polys.k_pos,
        regularity: hilbert.regularity,
        condition_polys: polys,
        equality_points,
        scan_log,
        notes,
    })
}

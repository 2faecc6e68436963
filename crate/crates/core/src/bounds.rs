//! Upper bounds on `h^0` of globally generated torsion-free sheaves.
//!
//! Two families of formulas live here:
//!
//! * the rank-one "sum forms" ([`clifford_rank1`], [`rr_rank1_sumform`]), shaped
//!   for the restriction-to-a-hyperplane induction that [`recursion_oracle`]
//!   replays one step of;
//! * the simplified forms [`bound_a`] and [`bound_b`], which are what the
//!   stability criterion and the twist solver consume.
//!
//! Degrees are measured against the polarization `H`; `h_top = H^n` and `g` is
//! the sectional genus. Arguments `d / h_top` are kept as exact rationals.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{genbinom, Rational};
use crate::varieties::Variety;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    /// `d <= 2g - 2`
    Clifford,
    /// `d >= 2g - 1`
    RiemannRoch,
}

impl Branch {
    pub fn for_degree(genus: i64, degree: i64) -> Branch {
        if degree <= 2 * genus - 2 {
            Branch::Clifford
        } else {
            Branch::RiemannRoch
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Branch::Clifford => "Clifford",
            Branch::RiemannRoch => "RiemannRoch",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum Form {
    /// Rank-one sum form plus `rank - 1`.
    LemmaSumForm,
    /// `A_H` / `B_H` plus `rank`.
    #[default]
    SimplifiedForm,
}

impl Form {
    pub fn as_str(self) -> &'static str {
        match self {
            Form::LemmaSumForm => "LemmaSumForm",
            Form::SimplifiedForm => "SimplifiedForm",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundInputs {
    pub n: u32,
    pub h_top: i64,
    pub g: i64,
    pub rank: i64,
    pub degree: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub branch: Branch,
    pub form: Form,
    /// Bound on `h^0`.
    pub value: Rational,
    /// The rank-one quantity before the rank is added: `A_H`/`B_H` for the
    /// simplified form, the sum-form value for the lemma form.
    pub rank_one_term: Rational,
    /// True when the formula fell below `rank` and the report was raised to
    /// `rank` (a globally generated sheaf always has at least `rank` sections).
    pub floored: bool,
    pub inputs: BoundInputs,
}

fn frac(numer: i64, h_top: i64) -> Rational {
    Rational::new(numer, h_top)
}

/// Low-degree rank-one bound, valid for `0 <= d <= 2g - 2`:
/// `(h_top/2) * binom(d/h_top - 1, n) + binom(d/h_top, n - 1)`
/// in [`genbinom`] notation.
pub fn clifford_rank1(n: u32, h_top: i64, g: i64, d: i64) -> Result<Rational> {
    check_shape(n, h_top)?;
    if d < 0 || d > 2 * g - 2 {
        return Err(Error::Branch {
            branch: "Clifford",
            degree: d,
            rule: format!("requires 0 <= d <= 2g-2 = {}", 2 * g - 2),
        });
    }
    Ok(clifford_unchecked(n, h_top, d))
}

fn clifford_unchecked(n: u32, h_top: i64, d: i64) -> Rational {
    let x = frac(d, h_top);
    Rational::new(h_top, 2) * genbinom(&(&x - 1), n) + genbinom(&x, n - 1)
}

/// High-degree rank-one bound, valid for `d >= max(2g - 1, 0)`:
///
/// `h_top * binom((d-g+1)/h_top - 1, n)
///   + sum_{i=0}^{n-2} (n-i+g-1)/(n-i) * binom((d-2g+2)/h_top - 1, i) * binom((2g-2)/h_top, n-1-i)`
pub fn rr_rank1_sumform(n: u32, h_top: i64, g: i64, d: i64) -> Result<Rational> {
    check_shape(n, h_top)?;
    if d < 0 || d < 2 * g - 1 {
        return Err(Error::Branch {
            branch: "RiemannRoch",
            degree: d,
            rule: format!("requires d >= max(2g-1, 0) = {}", (2 * g - 1).max(0)),
        });
    }
    Ok(rr_unchecked(n, h_top, g, d))
}

fn rr_unchecked(n: u32, h_top: i64, g: i64, d: i64) -> Rational {
    let main = Rational::from(h_top) * genbinom(&(frac(d - (g - 1), h_top) - 1), n);
    let shifted = frac(d - (2 * g - 2), h_top) - 1;
    let canonical = frac(2 * g - 2, h_top);
    let cross: Rational = (0..n.saturating_sub(1))
        .map(|i| {
            let ni = i64::from(n - i);
            Rational::new(ni + g - 1, ni) * genbinom(&shifted, i) * genbinom(&canonical, n - 1 - i)
        })
        .sum();
    main + cross
}

/// The rank-one sum form on whichever branch `d` falls in.
pub fn rank1_sumform(n: u32, h_top: i64, g: i64, d: i64) -> Result<Rational> {
    match Branch::for_degree(g, d) {
        Branch::Clifford => clifford_rank1(n, h_top, g, d),
        Branch::RiemannRoch => rr_rank1_sumform(n, h_top, g, d),
    }
}

/// `A_H(n, d) = (d/(2n) + 1) * binom(d/h_top, n - 1) - 1`.
///
/// Defined for every rational `d`; the bounds use it on `d >= 0`, and
/// `A_H(n, 0) = 0`.
pub fn bound_a(n: u32, h_top: i64, d: &Rational) -> Rational {
    let x = d / h_top;
    (d / (2 * i64::from(n)) + 1) * genbinom(&x, n - 1) - 1
}

/// `B_H(n, d) = h_top * binom((d-g+1)/h_top - 1, n) - 1
///   + (n-1)(n+g-1)/n * binom((d-2g+2)/h_top - 1, n - 2) * binom((2g-2)/h_top, n - 1)`.
///
/// For `n = 1` the second term is absent (its coefficient is zero).
pub fn bound_b(n: u32, h_top: i64, g: i64, d: &Rational) -> Rational {
    let main = Rational::from(h_top) * genbinom(&((d - (g - 1)) / h_top - 1), n) - 1;
    if n < 2 {
        return main;
    }
    let ni = i64::from(n);
    let coeff = Rational::new((ni - 1) * (ni + g - 1), ni);
    main + coeff
        * genbinom(&((d - (2 * g - 2)) / h_top - 1), n - 2)
        * genbinom(&frac(2 * g - 2, h_top), n - 1)
}

fn check_shape(n: u32, h_top: i64) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidInput("dimension must be at least 1".into()));
    }
    if h_top < 1 {
        return Err(Error::InvalidInput("h_top must be at least 1".into()));
    }
    Ok(())
}

/// Bound on `h^0(E)` for a globally generated torsion-free sheaf of the given
/// rank and degree.
pub fn sections_bound(
    variety: &Variety,
    rank: i64,
    degree: i64,
    form: Form,
) -> Result<BoundReport> {
    if rank < 1 {
        return Err(Error::InvalidInput(format!(
            "rank must be at least 1, got {rank}"
        )));
    }
    if degree < 0 {
        return Err(Error::Inconsistent(format!(
            "degree {degree} is negative; a globally generated torsion-free sheaf has degree >= 0"
        )));
    }
    let (n, h_top, g) = (variety.dim(), variety.h_top(), variety.genus());
    let branch = Branch::for_degree(g, degree);
    let (rank_one_term, raw) = match form {
        Form::SimplifiedForm => {
            let d = Rational::from(degree);
            let term = match branch {
                Branch::Clifford => bound_a(n, h_top, &d),
                Branch::RiemannRoch => bound_b(n, h_top, g, &d),
            };
            let raw = &term + rank;
            (term, raw)
        }
        Form::LemmaSumForm => {
            let term = rank1_sumform(n, h_top, g, degree)?;
            let raw = &term + (rank - 1);
            (term, raw)
        }
    };
    let floor = Rational::from(rank);
    let floored = raw < floor;
    Ok(BoundReport {
        branch,
        form,
        value: if floored { floor } else { raw },
        rank_one_term,
        floored,
        inputs: BoundInputs {
            n,
            h_top,
            g,
            rank,
            degree,
        },
    })
}

/// One step of the hyperplane-restriction induction: the sum over
/// `i = 0..=floor(d/h_top)` of the `(n-1)`-dimensional rank-one sum form at
/// degree `d - i*h_top`.
pub fn recursion_oracle(n: u32, h_top: i64, g: i64, d: i64) -> Result<Rational> {
    if n < 2 {
        return Err(Error::NotApplicable(
            "the restriction sum needs dimension at least 2".into(),
        ));
    }
    check_shape(n, h_top)?;
    if d < 0 {
        return Err(Error::InvalidInput(format!("degree must be >= 0, got {d}")));
    }
    (0..=d / h_top)
        .map(|i| rank1_sumform(n - 1, h_top, g, d - i * h_top))
        .sum()
}

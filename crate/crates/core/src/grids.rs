//! Closed-form solutions of the orthogonality conditions for the four
//! classical spectra.
//!
//! | family        | `λ_n`                     | grid `a_n`                                    |
//! |---------------|---------------------------|-----------------------------------------------|
//! | linear        | `n`                       | `a_1 n + α n(n-1)`                            |
//! | quadratic     | `n(n + α)`                | `a_1 n + β n(n-1)`                            |
//! | Askey–Wilson  | `(1 - q^n)(α - q^{-n})`   | `(1 - q^{-n})(a_1 q/(q-1) + ν(q^{n-1} - 1))`  |
//! | Bannai–Ito    | `(-1)^n (n + α) - α`      | `a_{2m} = 2νm`, `a_{2m+1} = a_1 - 2νm`        |
//!
//! In every family `τ` follows from `y_n = a_n - τ_{n+1}/λ_{n+1}` and the
//! family's solution for `y_n`. The Hermite polynomials have no entry here:
//! their operator maps `x^n` to `x^n` and `x^{n-2}`, which is not a
//! two-diagonal action on the monomial basis.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::data::{HyperData, SeqRole, ValidationIssue};
use crate::error::{Error, Result};
use crate::scalar::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Linear,
    Quadratic,
    AskeyWilson,
    BannaiIto,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::Linear,
        Family::Quadratic,
        Family::AskeyWilson,
        Family::BannaiIto,
    ];

    pub fn key(self) -> &'static str {
        match self {
            Family::Linear => "linear",
            Family::Quadratic => "quadratic",
            Family::AskeyWilson => "askey_wilson",
            Family::BannaiIto => "bannai_ito",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl std::str::FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.key() == s.replace('-', "_"))
            .ok_or_else(|| format!("unknown family {s:?} (expected linear, quadratic, askey_wilson or bannai_ito)"))
    }
}

/// Free parameters of a family. Unused fields are ignored by that family;
/// `alpha` is the grid coefficient for the linear family and the spectral
/// parameter for the others.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridParams {
    pub family: Family,
    #[serde(default)]
    pub tau1: Rational,
    #[serde(default)]
    pub a1: Rational,
    #[serde(default)]
    pub gamma: Rational,
    #[serde(default)]
    pub nu: Rational,
    #[serde(default)]
    pub alpha: Rational,
    #[serde(default)]
    pub beta: Rational,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<Rational>,
}

impl GridParams {
    /// All parameters zero (and no `q`).
    pub fn new(family: Family) -> Self {
        GridParams {
            family,
            tau1: Rational::zero(),
            a1: Rational::zero(),
            gamma: Rational::zero(),
            nu: Rational::zero(),
            alpha: Rational::zero(),
            beta: Rational::zero(),
            q: None,
        }
    }

    /// `κ` for the families whose grid equation carries one.
    pub fn kappa(&self) -> Option<Rational> {
        let one = Rational::one();
        match self.family {
            Family::Quadratic => {
                let two = Rational::from(2);
                Some((&self.alpha + &two) * (&self.tau1 + &(&self.gamma * &(&self.alpha + &one))))
            }
            Family::BannaiIto => {
                let gap = &self.alpha * &Rational::from(2) + &one;
                Some(&self.gamma * &gap - &self.tau1)
            }
            _ => None,
        }
    }

    fn q(&self) -> Result<&Rational> {
        let q = self.q.as_ref().ok_or_else(|| Error::InadmissibleParams {
            family: self.family,
            reason: "q is required".into(),
        })?;
        if q.is_zero() || q.is_one() || *q == -Rational::one() {
            return Err(Error::InadmissibleParams {
                family: self.family,
                reason: format!("q = {q} (must avoid 0, 1, -1)"),
            });
        }
        Ok(q)
    }

    fn inadmissible(&self, index: usize, reason: impl Into<String>) -> Error {
        Error::Inadmissible {
            family: self.family,
            index,
            reason: reason.into(),
        }
    }
}

/// Values stored by the constructors for order `N`: indices `0..=2N+1`,
/// enough for the generalized moments up to `ψ_N^{(N)}` and for `u_N`.
pub fn horizon(order: usize) -> usize {
    2 * order + 2
}

fn int(n: usize) -> Rational {
    Rational::from(n)
}

pub fn lambda(p: &GridParams, n: usize) -> Result<Rational> {
    let nn = int(n);
    Ok(match p.family {
        Family::Linear => nn,
        Family::Quadratic => &nn * &(&nn + &p.alpha),
        Family::AskeyWilson => {
            let q = p.q()?;
            let qn = q.pow(n as i64);
            (Rational::one() - &qn) * (&p.alpha - &qn.recip().expect("q ≠ 0"))
        }
        Family::BannaiIto => {
            let shifted = &nn + &p.alpha;
            let signed = if n % 2 == 0 { shifted } else { -shifted };
            signed - &p.alpha
        }
    })
}

pub fn node(p: &GridParams, n: usize) -> Result<Rational> {
    let nn = int(n);
    let bend = || &nn * &(&nn - &Rational::one());
    Ok(match p.family {
        Family::Linear => &p.a1 * &nn + &p.alpha * &bend(),
        Family::Quadratic => &p.a1 * &nn + &p.beta * &bend(),
        Family::AskeyWilson => {
            let q = p.q()?;
            let one = Rational::one();
            let head = &one - &q.pow(-(n as i64));
            let base = &(&p.a1 * q) / &(q - &one);
            let tail = &p.nu * &(q.pow(n as i64 - 1) - &one);
            head * (base + tail)
        }
        Family::BannaiIto => {
            let m = int(n / 2);
            let step = &p.nu * &(Rational::from(2) * m);
            if n % 2 == 0 {
                step
            } else {
                &p.a1 - &step
            }
        }
    })
}

/// The family's solution `y_n = a_n - ζ_n`.
pub fn y(p: &GridParams, n: usize) -> Result<Rational> {
    let nn = int(n);
    let one = Rational::one();
    let divide = |num: Rational, den: Rational, what: &str| {
        num.checked_div(&den)
            .ok_or_else(|| p.inadmissible(n, format!("{what} vanishes in y_{n}")))
    };
    match p.family {
        Family::Linear => Ok(&p.gamma * &nn - &p.tau1),
        Family::Quadratic => divide(
            &p.gamma * &nn - &p.tau1,
            &nn + &p.alpha + &one,
            "n + α + 1",
        ),
        Family::AskeyWilson => {
            let q = p.q()?;
            let q_neg_n = q.pow(-(n as i64));
            let num = &p.tau1 / &(q - &one) * &q_neg_n + &p.gamma * &(&q_neg_n - &one);
            divide(num, &p.alpha - &q.pow(-(n as i64) - 1), "α - q^{-n-1}")
        }
        Family::BannaiIto => {
            if n % 2 == 1 {
                Ok(p.gamma.clone())
            } else {
                let m = int(n / 2);
                let two = Rational::from(2);
                divide(
                    &two * &(&p.gamma * &m) + &p.tau1,
                    &two * &m + &two * &p.alpha + &one,
                    "2m + 2α + 1",
                )
            }
        }
    }
}

/// `τ_0 = 0`, `τ_{n+1} = λ_{n+1} (a_n - y_n)`.
pub fn tau(p: &GridParams, n: usize) -> Result<Rational> {
    if n == 0 {
        return Ok(Rational::zero());
    }
    let m = n - 1;
    let mm = int(m);
    let one = Rational::one();
    Ok(match p.family {
        // the displayed closed forms; algebraically the same as the generic branch
        Family::Linear => {
            int(n) * (&p.tau1 + &(&(&p.a1 - &p.gamma) * &mm) + &p.alpha * &(&mm * &(&mm - &one)))
        }
        Family::Quadratic => lambda(p, n)? * node(p, m)? + int(n) * (&p.tau1 - &(&p.gamma * &mm)),
        Family::AskeyWilson | Family::BannaiIto => lambda(p, n)? * (node(p, m)? - y(p, m)?),
    })
}

pub fn eval_closed_form(p: &GridParams, role: SeqRole, n: usize) -> Result<Rational> {
    match role {
        SeqRole::Lambda => lambda(p, n),
        SeqRole::Tau => tau(p, n),
        SeqRole::Node => node(p, n),
    }
}

/// Builds the data of `p.family` for order `N` and checks admissibility over
/// the stored indices `0..=2N+1`.
pub fn build(p: &GridParams, order: usize) -> Result<HyperData> {
    if p.family == Family::AskeyWilson {
        p.q()?;
    }
    let len = horizon(order);
    match p.family {
        Family::Quadratic => {
            for n in 1..=len {
                if (&int(n) + &p.alpha).is_zero() {
                    return Err(p.inadmissible(n, format!("α = -{n} makes λ_{n} = 0")));
                }
            }
        }
        Family::BannaiIto => {
            if (&p.alpha * &Rational::from(2) + &Rational::one()).is_zero() {
                return Err(Error::InadmissibleParams {
                    family: p.family,
                    reason: "α = -1/2 merges the two sublattices".into(),
                });
            }
        }
        _ => {}
    }
    if let Some(kappa) = p.kappa() {
        if kappa.is_zero() {
            return Err(Error::InadmissibleParams {
                family: p.family,
                reason: "κ = 0 (degenerate moments)".into(),
            });
        }
    }

    let table = |f: fn(&GridParams, usize) -> Result<Rational>| {
        (0..len).map(|n| f(p, n)).collect::<Result<Vec<_>>>()
    };
    let data = HyperData::from_values(table(lambda)?, table(tau)?, table(node)?, order)?;
    if let Some(issue) = data.validate().issues.into_iter().next() {
        return Err(match issue {
            ValidationIssue::LambdaCollision { first, second } => {
                p.inadmissible(second, format!("λ_{first} = λ_{second}"))
            }
            ValidationIssue::TauZero { index } => {
                p.inadmissible(index, format!("τ_{index} vanishes before N+1"))
            }
            other => p.inadmissible(0, other.to_string()),
        });
    }
    Ok(data)
}

pub fn build_linear(p: &GridParams, order: usize) -> Result<HyperData> {
    build(&GridParams { family: Family::Linear, ..p.clone() }, order)
}

pub fn build_quadratic(p: &GridParams, order: usize) -> Result<HyperData> {
    build(&GridParams { family: Family::Quadratic, ..p.clone() }, order)
}

pub fn build_askey_wilson(p: &GridParams, order: usize) -> Result<HyperData> {
    build(&GridParams { family: Family::AskeyWilson, ..p.clone() }, order)
}

pub fn build_bannai_ito(p: &GridParams, order: usize) -> Result<HyperData> {
    build(&GridParams { family: Family::BannaiIto, ..p.clone() }, order)
}

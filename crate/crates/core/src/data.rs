//! Sequence specifications and the `(λ, τ, a)` data model.
//!
//! A [`HyperData`] holds the eigenvalues `λ_n`, the off-diagonal coefficients
//! `τ_n` of the operator action `L φ_n = λ_n φ_n + τ_n φ_{n-1}`, and the
//! interpolation nodes `a_n`, evaluated eagerly for indices `0..len()`.
//! The order cap `N` bounds the polynomial degrees the rest of the crate
//! works with; moment computations read further, up to index `2N`, which is
//! why the family constructors store `2N + 2` values.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grids::{self, GridParams};
use crate::newton::Grid;
use crate::scalar::Rational;

/// Which of the three sequences a closed-form spec produces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeqRole {
    Lambda,
    Tau,
    Node,
}

impl SeqRole {
    pub fn symbol(self) -> &'static str {
        match self {
            SeqRole::Lambda => "λ",
            SeqRole::Tau => "τ",
            SeqRole::Node => "a",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeqSpec {
    Explicit(Vec<Rational>),
    ClosedForm { params: GridParams, role: SeqRole },
}

impl SeqSpec {
    pub fn explicit<I, T>(values: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<Rational>,
    {
        SeqSpec::Explicit(values.into_iter().map(Into::into).collect())
    }

    pub fn eval(&self, n: usize) -> Result<Rational> {
        match self {
            SeqSpec::Explicit(values) => values.get(n).cloned().ok_or(Error::IndexOutOfRange {
                sequence: "explicit sequence",
                index: n,
                last: values.len().saturating_sub(1),
            }),
            SeqSpec::ClosedForm { params, role } => grids::eval_closed_form(params, *role, n),
        }
    }

    /// Number of defined indices; `None` for closed forms.
    pub fn defined_len(&self) -> Option<usize> {
        match self {
            SeqSpec::Explicit(v) => Some(v.len()),
            SeqSpec::ClosedForm { .. } => None,
        }
    }
}

/// Infinite regime: `τ_n ≠ 0` for every stored `n ≤ N + 1`. Finite regime:
/// `τ_{N+1} = 0`, orthogonality lives on the nodes `a_0..a_N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Infinite,
    Finite,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ValidationIssue {
    NonzeroInitial { sequence: SeqRole, value: Rational },
    LambdaCollision { first: usize, second: usize },
    TauZero { index: usize },
    LengthMismatch { lambda: usize, tau: usize, a: usize },
}

impl fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValidationIssue::NonzeroInitial { sequence, value } => {
                write!(f, "{}_0 = {} (must be 0)", sequence.symbol(), value)
            }
            ValidationIssue::LambdaCollision { first, second } => {
                write!(f, "λ_{first} = λ_{second}")
            }
            ValidationIssue::TauZero { index } => write!(f, "τ_{index} = 0 before N+1"),
            ValidationIssue::LengthMismatch { lambda, tau, a } => write!(
                f,
                "sequence lengths differ (λ: {lambda}, τ: {tau}, a: {a})"
            ),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub issues: Vec<ValidationIssue>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }

    pub fn messages(&self) -> Vec<String> {
        self.issues.iter().map(ToString::to_string).collect()
    }

    fn into_result(self) -> Result<()> {
        if self.is_valid() {
            Ok(())
        } else {
            Err(Error::Invalid(self))
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.issues.is_empty() {
            return f.write_str("valid");
        }
        f.write_str(&self.messages().join("; "))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HyperData {
    lambda: Vec<Rational>,
    tau: Vec<Rational>,
    grid: Grid,
    order: usize,
}

impl HyperData {
    /// Builds from explicit value lists. All three lists must have the same
    /// length, and that length must reach index `order`.
    pub fn from_values(
        lambda: Vec<Rational>,
        tau: Vec<Rational>,
        a: Vec<Rational>,
        order: usize,
    ) -> Result<Self> {
        if lambda.len() != tau.len() || lambda.len() != a.len() {
            return Err(Error::Invalid(ValidationReport {
                issues: vec![ValidationIssue::LengthMismatch {
                    lambda: lambda.len(),
                    tau: tau.len(),
                    a: a.len(),
                }],
            }));
        }
        if lambda.len() < order + 1 {
            return Err(Error::InsufficientData {
                needed: order,
                available: lambda.len().saturating_sub(1),
            });
        }
        Ok(HyperData {
            lambda,
            tau,
            grid: Grid::new(a),
            order,
        })
    }

    /// Evaluates three sequence specs for indices `0..horizon`. Explicit specs
    /// shorter than `horizon` cap the stored length.
    pub fn from_specs(
        lambda: &SeqSpec,
        tau: &SeqSpec,
        a: &SeqSpec,
        order: usize,
        horizon: usize,
    ) -> Result<Self> {
        let len = [lambda, tau, a]
            .iter()
            .filter_map(|s| s.defined_len())
            .fold(horizon, usize::min);
        let table = |spec: &SeqSpec| (0..len).map(|n| spec.eval(n)).collect::<Result<Vec<_>>>();
        Self::from_values(table(lambda)?, table(tau)?, table(a)?, order)
    }

    /// The order cap `N`.
    pub fn order(&self) -> usize {
        self.order
    }

    /// Number of stored indices.
    pub fn len(&self) -> usize {
        self.lambda.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambda.is_empty()
    }

    pub fn with_order(&self, order: usize) -> Result<Self> {
        if order + 1 > self.len() {
            return Err(Error::InsufficientData {
                needed: order,
                available: self.len() - 1,
            });
        }
        Ok(HyperData {
            order,
            ..self.clone()
        })
    }

    pub fn lambdas(&self) -> &[Rational] {
        &self.lambda
    }

    pub fn taus(&self) -> &[Rational] {
        &self.tau
    }

    pub fn nodes(&self) -> &[Rational] {
        self.grid.nodes()
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    fn get<'a>(&self, values: &'a [Rational], sequence: &'static str, n: usize) -> Result<&'a Rational> {
        values.get(n).ok_or(Error::IndexOutOfRange {
            sequence,
            index: n,
            last: self.len() - 1,
        })
    }

    pub fn lambda(&self, n: usize) -> Result<&Rational> {
        self.get(&self.lambda, "λ", n)
    }

    pub fn tau(&self, n: usize) -> Result<&Rational> {
        self.get(&self.tau, "τ", n)
    }

    pub fn a(&self, n: usize) -> Result<&Rational> {
        self.get(self.grid.nodes(), "a", n)
    }

    /// `ζ_n = τ_{n+1} / λ_{n+1}`.
    pub fn zeta(&self, n: usize) -> Result<Rational> {
        let lam = self.lambda(n + 1)?;
        self.tau(n + 1)?
            .checked_div(lam)
            .ok_or_else(|| collision_error(0, n + 1))
    }

    /// `y_n = a_n - ζ_n`.
    pub fn y(&self, n: usize) -> Result<Rational> {
        Ok(self.a(n)? - self.zeta(n)?)
    }

    pub fn regime(&self) -> Regime {
        match self.tau.get(self.order + 1) {
            Some(t) if t.is_zero() => Regime::Finite,
            _ => Regime::Infinite,
        }
    }

    /// Full check: initial conditions, distinct `λ` over every stored index,
    /// and `τ_n ≠ 0` for `1 ≤ n ≤ N`. A zero `τ_{N+1}` is the finite regime,
    /// not a violation.
    pub fn validate(&self) -> ValidationReport {
        let mut report = self.validate_structure();
        let mut seen: HashMap<&Rational, usize> = HashMap::new();
        for (n, lam) in self.lambda.iter().enumerate() {
            match seen.get(lam) {
                // λ_0 = λ_n is already reported by the structural pass
                Some(&0) => {}
                Some(&first) => report
                    .issues
                    .push(ValidationIssue::LambdaCollision { first, second: n }),
                None => {
                    seen.insert(lam, n);
                }
            }
        }
        for n in 1..=self.order.min(self.len() - 1) {
            if self.tau[n].is_zero() {
                report.issues.push(ValidationIssue::TauZero { index: n });
            }
        }
        report
    }

    /// The subset of checks the moment recursions depend on: the initial
    /// conditions and `λ_n ≠ 0` for `n ≥ 1`. Zero `τ` values are allowed.
    pub fn validate_structure(&self) -> ValidationReport {
        let mut issues = Vec::new();
        for (role, values) in [
            (SeqRole::Lambda, &self.lambda[..]),
            (SeqRole::Tau, &self.tau[..]),
            (SeqRole::Node, self.grid.nodes()),
        ] {
            if let Some(v) = values.first().filter(|v| !v.is_zero()) {
                issues.push(ValidationIssue::NonzeroInitial {
                    sequence: role,
                    value: v.clone(),
                });
            }
        }
        for (n, lam) in self.lambda.iter().enumerate().skip(1) {
            if *lam == self.lambda[0] {
                issues.push(ValidationIssue::LambdaCollision { first: 0, second: n });
            }
        }
        ValidationReport { issues }
    }

    pub fn require_valid(&self) -> Result<()> {
        self.validate().into_result()
    }

    pub fn require_structure(&self) -> Result<()> {
        self.validate_structure().into_result()
    }

    /// Errors unless index `needed` is stored.
    pub fn require_len(&self, needed: usize) -> Result<()> {
        if needed < self.len() {
            Ok(())
        } else {
            Err(Error::InsufficientData {
                needed,
                available: self.len() - 1,
            })
        }
    }
}

fn collision_error(first: usize, second: usize) -> Error {
    Error::Invalid(ValidationReport {
        issues: vec![ValidationIssue::LambdaCollision { first, second }],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grids::Family;
    use crate::scalar::rat;

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| Rational::from(x)).collect()
    }

    fn data(l: &[i64], t: &[i64], a: &[i64], order: usize) -> HyperData {
        HyperData::from_values(ints(l), ints(t), ints(a), order).unwrap()
    }

    #[test]
    fn explicit_lookup_and_range() {
        let s = SeqSpec::explicit([0i64, 1, 4]);
        assert_eq!(s.eval(2).unwrap(), Rational::from(4));
        assert!(matches!(s.eval(3), Err(Error::IndexOutOfRange { index: 3, last: 2, .. })));
    }

    #[test]
    fn closed_form_lookup() {
        let linear = SeqSpec::ClosedForm {
            params: GridParams::new(Family::Linear),
            role: SeqRole::Lambda,
        };
        assert_eq!(linear.eval(5).unwrap(), Rational::from(5));
        let quad = SeqSpec::ClosedForm {
            params: GridParams {
                alpha: rat(1, 2),
                ..GridParams::new(Family::Quadratic)
            },
            role: SeqRole::Lambda,
        };
        assert_eq!(quad.eval(2).unwrap(), Rational::from(5));
        assert_eq!(quad.eval(2).unwrap(), quad.eval(2).unwrap());
    }

    #[test]
    fn valid_example() {
        assert!(data(&[0, 1, 2], &[0, 1, 3], &[0, 2, 5], 2).validate().is_valid());
    }

    #[test]
    fn lambda_collision_reported() {
        let r = data(&[0, 1, 1], &[0, 1, 3], &[0, 2, 5], 2).validate();
        assert_eq!(r.messages(), vec!["λ_1 = λ_2"]);
    }

    #[test]
    fn tau_zero_reported() {
        let r = data(&[0, 1, 2], &[0, 1, 0], &[0, 2, 5], 2).validate();
        assert_eq!(r.messages(), vec!["τ_2 = 0 before N+1"]);
    }

    #[test]
    fn finite_regime_is_not_a_violation() {
        let d = data(&[0, 1, 2, 3], &[0, 1, 3, 0], &[0, 2, 5, 9], 2);
        assert!(d.validate().is_valid());
        assert_eq!(d.regime(), Regime::Finite);
    }

    #[test]
    fn nonzero_initials_all_listed() {
        let r = data(&[1, 2, 3], &[1, 1, 1], &[1, 0, 0], 2).validate();
        assert_eq!(r.issues.len(), 3);
        assert_eq!(r.messages()[0], "λ_0 = 1 (must be 0)");
    }

    #[test]
    fn unequal_lengths_rejected() {
        let e = HyperData::from_values(ints(&[0, 1]), ints(&[0]), ints(&[0, 1]), 0).unwrap_err();
        assert!(matches!(e, Error::Invalid(_)));
    }

    #[test]
    fn explicit_specs_cap_the_horizon() {
        let d = HyperData::from_specs(
            &SeqSpec::explicit([0i64, 1, 2]),
            &SeqSpec::ClosedForm {
                params: GridParams::new(Family::Linear),
                role: SeqRole::Tau,
            },
            &SeqSpec::explicit([0i64, 0, 0, 0]),
            2,
            10,
        )
        .unwrap();
        assert_eq!(d.len(), 3);
    }

    #[test]
    fn zeta_and_y() {
        let d = data(&[0, 2, 5], &[0, 4, 10], &[0, 3, 7], 2);
        assert_eq!(d.zeta(0).unwrap(), Rational::from(2));
        assert_eq!(d.y(1).unwrap(), Rational::from(1));
    }
}

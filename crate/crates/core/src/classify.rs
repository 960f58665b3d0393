//! Spectrum and grid classification from `λ_n` and `a_n` alone.
//!
//! The spectrum is fitted in a fixed order (linear, quadratic, Bannai–Ito,
//! then the q-form `C_1 q^n + C_2 q^{-n} + C_0`) and the first exact fit
//! wins. The grid is then fitted to the shape its spectrum allows and graded
//! as generic, intermediate or degenerate.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::data::HyperData;
use crate::error::{Error, Result};
use crate::scalar::Rational;

pub const MIN_VALUES: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumType {
    Linear,
    Quadratic,
    QGrid,
    BannaiIto,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GridType {
    Generic,
    Intermediate,
    Degenerate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Label {
    AskeyWilson,
    BigQJacobi,
    LittleQJacobi,
    RacahWilson,
    Hahn,
    Jacobi,
    BannaiIto,
    BigMinusOneJacobi,
    LittleMinusOneJacobi,
    DualHahnType,
    UniformGridClass,
    LaguerreType,
}

impl Label {
    pub const ALL: [Label; 12] = [
        Label::AskeyWilson,
        Label::BigQJacobi,
        Label::LittleQJacobi,
        Label::RacahWilson,
        Label::Hahn,
        Label::Jacobi,
        Label::BannaiIto,
        Label::BigMinusOneJacobi,
        Label::LittleMinusOneJacobi,
        Label::DualHahnType,
        Label::UniformGridClass,
        Label::LaguerreType,
    ];

    pub fn of(spectrum: SpectrumType, grid: GridType) -> Label {
        use GridType::*;
        match (spectrum, grid) {
            (SpectrumType::QGrid, Generic) => Label::AskeyWilson,
            (SpectrumType::QGrid, Intermediate) => Label::BigQJacobi,
            (SpectrumType::QGrid, Degenerate) => Label::LittleQJacobi,
            (SpectrumType::Quadratic, Generic) => Label::RacahWilson,
            (SpectrumType::Quadratic, Intermediate) => Label::Hahn,
            (SpectrumType::Quadratic, Degenerate) => Label::Jacobi,
            (SpectrumType::BannaiIto, Generic) => Label::BannaiIto,
            (SpectrumType::BannaiIto, Intermediate) => Label::BigMinusOneJacobi,
            (SpectrumType::BannaiIto, Degenerate) => Label::LittleMinusOneJacobi,
            (SpectrumType::Linear, Generic) => Label::DualHahnType,
            (SpectrumType::Linear, Intermediate) => Label::UniformGridClass,
            (SpectrumType::Linear, Degenerate) => Label::LaguerreType,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Label::AskeyWilson => "Askey–Wilson",
            Label::BigQJacobi => "big q-Jacobi",
            Label::LittleQJacobi => "little q-Jacobi",
            Label::RacahWilson => "Racah–Wilson",
            Label::Hahn => "Hahn",
            Label::Jacobi => "Jacobi",
            Label::BannaiIto => "Bannai–Ito",
            Label::BigMinusOneJacobi => "big -1 Jacobi",
            Label::LittleMinusOneJacobi => "little -1 Jacobi",
            Label::DualHahnType => "dual Hahn-type",
            Label::UniformGridClass => "uniform-grid class",
            Label::LaguerreType => "Laguerre-type",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub type Params = BTreeMap<String, Rational>;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumFit {
    pub kind: SpectrumType,
    pub params: Params,
    /// For the q-form, the root of `q + 1/q = s` used for the grid fit.
    #[serde(skip)]
    pub q: Option<Rational>,
    pub ambiguities: Vec<String>,
    pub flags: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridFit {
    pub kind: GridType,
    pub params: Params,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FamilyClass {
    pub spectrum: SpectrumType,
    pub grid: GridType,
    pub label: String,
    pub key: Label,
    pub fit_params: Params,
    pub ambiguities: Vec<String>,
    pub flags: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Verdict {
    Classified(FamilyClass),
    Unclassified {
        label: &'static str,
        reason: String,
        #[serde(skip_serializing_if = "Option::is_none")]
        spectrum: Option<SpectrumType>,
    },
}

impl Verdict {
    fn unclassified(reason: impl Into<String>, spectrum: Option<SpectrumType>) -> Self {
        Verdict::Unclassified {
            label: "unclassified",
            reason: reason.into(),
            spectrum,
        }
    }

    pub fn label(&self) -> Option<Label> {
        match self {
            Verdict::Classified(c) => Some(c.key),
            Verdict::Unclassified { .. } => None,
        }
    }

    pub fn class(&self) -> Option<&FamilyClass> {
        match self {
            Verdict::Classified(c) => Some(c),
            Verdict::Unclassified { .. } => None,
        }
    }
}

fn params<const K: usize>(entries: [(&str, Rational); K]) -> Params {
    entries.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn int(n: usize) -> Rational {
    Rational::from(n)
}

fn require_len(values: &[Rational]) -> Result<()> {
    if values.len() < MIN_VALUES {
        return Err(Error::TooFewValues {
            needed: MIN_VALUES,
            available: values.len(),
        });
    }
    Ok(())
}

fn fits(values: &[Rational], f: impl Fn(usize) -> Rational) -> bool {
    values.iter().enumerate().all(|(n, v)| *v == f(n))
}

fn parity(n: usize) -> Rational {
    Rational::from(if n % 2 == 0 { 1 } else { -1 })
}

/// `Ok(None)` when no exact fit exists or the values are not a spectrum
/// (`λ_0 ≠ 0` or a repeated value).
pub fn detect_spectrum(values: &[Rational]) -> Result<Option<SpectrumFit>> {
    require_len(values)?;
    if !values[0].is_zero() {
        return Ok(None);
    }
    let mut sorted: Vec<&Rational> = values.iter().collect();
    sorted.sort();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Ok(None);
    }
    let fit = |kind, params| SpectrumFit {
        kind,
        params,
        q: None,
        ambiguities: Vec::new(),
        flags: Vec::new(),
    };
    let two = Rational::from(2);

    let slope = values[1].clone();
    if fits(values, |n| &slope * &int(n)) {
        return Ok(Some(fit(SpectrumType::Linear, params([("slope", slope)]))));
    }

    // C_1 n² + C_2 n
    let c1 = &(&values[2] - &(&two * &values[1])) / &two;
    let c2 = &values[1] - &c1;
    if !c1.is_zero() && fits(values, |n| &(&c1 * &int(n * n)) + &(&c2 * &int(n))) {
        let alpha = &c2 / &c1;
        return Ok(Some(fit(
            SpectrumType::Quadratic,
            params([("C1", c1), ("C2", c2), ("alpha", alpha)]),
        )));
    }

    // (-1)^n (C_1 n + C_2) + C_0 with C_0 = -C_2 from λ_0 = 0
    let c1 = &values[2] / &two;
    let c2 = -(&(&values[1] + &c1) / &two);
    let c0 = -c2.clone();
    if !c1.is_zero() && fits(values, |n| &(&parity(n) * &(&(&c1 * &int(n)) + &c2)) + &c0) {
        let alpha = &c2 / &c1;
        return Ok(Some(fit(
            SpectrumType::BannaiIto,
            params([("C0", c0), ("C1", c1), ("C2", c2), ("alpha", alpha)]),
        )));
    }

    Ok(detect_q_form(values))
}

/// Differences of `C_1 q^n + C_2 q^{-n} + C_0` satisfy
/// `d_{n+2} - s d_{n+1} + d_n = 0` with `s = q + 1/q`.
fn detect_q_form(values: &[Rational]) -> Option<SpectrumFit> {
    let d: Vec<Rational> = values.windows(2).map(|w| &w[1] - &w[0]).collect();
    let s = (&d[2] + &d[0]).checked_div(&d[1])?;
    if !d.windows(3).all(|w| &(&w[2] + &w[0]) - &(&s * &w[1]) == Rational::zero()) {
        return None;
    }
    let two = Rational::from(2);
    let root = (&(&s * &s) - &Rational::from(4)).sqrt_exact()?;
    if root.is_zero() {
        return None;
    }
    // the two roots are reciprocal; report the one of smaller magnitude
    let (q_a, q_b) = (&(&s - &root) / &two, &(&s + &root) / &two);
    let (q, q_inv) = if q_a.abs() <= q_b.abs() { (q_a, q_b) } else { (q_b, q_a) };

    // λ_1 = C_1(q - 1) + C_2(q^{-1} - 1), λ_2 = C_1(q² - 1) + C_2(q^{-2} - 1)
    let one = Rational::one();
    let m = [
        [&q - &one, &q_inv - &one],
        [&q.pow(2) - &one, &q_inv.pow(2) - &one],
    ];
    let det = &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0]);
    let c1 = (&(&values[1] * &m[1][1]) - &(&values[2] * &m[0][1])).checked_div(&det)?;
    let c2 = (&(&values[2] * &m[0][0]) - &(&values[1] * &m[1][0])).checked_div(&det)?;
    let c0 = -(&c1 + &c2);
    let qn = |n: usize| q.pow(n as i64);
    if !fits(values, |n| {
        &(&(&c1 * &qn(n)) + &(&c2 * &qn(n).recip().expect("q ≠ 0"))) + &c0
    }) {
        return None;
    }

    let mut flags = Vec::new();
    if c1.is_zero() || c2.is_zero() {
        flags.push("one of C1, C2 vanishes (q-Hahn subdivision)".to_string());
    }
    let mut p = params([("q", q.clone()), ("C0", c0), ("C1", c1.clone()), ("C2", c2.clone())]);
    if let Some(alpha) = c1.checked_div(&c2) {
        p.insert("alpha".into(), alpha);
    }
    Some(SpectrumFit {
        kind: SpectrumType::QGrid,
        params: p,
        q: Some(q.clone()),
        ambiguities: vec![format!(
            "q = {q} and q = {q_inv} fit equally (swapping C1 and C2)"
        )],
        flags,
    })
}

/// `a_1 n + c n(n-1)`: `Some((a_1, c))` on an exact fit.
fn fit_quadratic_grid(values: &[Rational]) -> Option<(Rational, Rational)> {
    let a1 = values[1].clone();
    let c = &(&values[2] - &(&Rational::from(2) * &a1)) / &Rational::from(2);
    fits(values, |n| &(&a1 * &int(n)) + &(&c * &int(n * n.saturating_sub(1)))).then_some((a1, c))
}

/// Grades `values` for the given spectrum; `None` on no exact fit.
/// `q` is required for [`SpectrumType::QGrid`].
pub fn detect_grid(
    values: &[Rational],
    spectrum: SpectrumType,
    q: Option<&Rational>,
) -> Result<Option<GridFit>> {
    require_len(values)?;
    if !values[0].is_zero() {
        return Ok(None);
    }
    if values.iter().all(Rational::is_zero) {
        return Ok(Some(GridFit {
            kind: GridType::Degenerate,
            params: Params::new(),
        }));
    }
    let graded = |intermediate: bool, params| GridFit {
        kind: if intermediate {
            GridType::Intermediate
        } else {
            GridType::Generic
        },
        params,
    };
    Ok(match spectrum {
        SpectrumType::Linear => fit_quadratic_grid(values)
            .map(|(a1, alpha)| graded(alpha.is_zero(), params([("a1", a1), ("alpha", alpha)]))),
        SpectrumType::Quadratic => fit_quadratic_grid(values)
            .map(|(a1, beta)| graded(beta.is_zero(), params([("a1", a1), ("beta", beta)]))),
        SpectrumType::BannaiIto => {
            let a1 = values[1].clone();
            let nu = &values[2] / &Rational::from(2);
            let fitted = fits(values, |n| {
                let step = &nu * &int(2 * (n / 2));
                if n % 2 == 0 {
                    step
                } else {
                    &a1 - &step
                }
            });
            fitted.then(|| graded(nu.is_zero(), params([("a1", a1), ("nu", nu)])))
        }
        SpectrumType::QGrid => {
            let Some(q) = q else { return Ok(None) };
            fit_q_grid(values, q)
        }
    })
}

/// `A + B q^n + C q^{-n}` with `A = -B - C`. Exactly one of `B, C` zero is
/// the exponential (intermediate) grid; the rule is symmetric in `q ↔ 1/q`.
fn fit_q_grid(values: &[Rational], q: &Rational) -> Option<GridFit> {
    let one = Rational::one();
    let q_inv = q.recip()?;
    let m = [
        [q - &one, &q_inv - &one],
        [&q.pow(2) - &one, &q_inv.pow(2) - &one],
    ];
    let det = &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0]);
    let b = (&(&values[1] * &m[1][1]) - &(&values[2] * &m[0][1])).checked_div(&det)?;
    let c = (&(&values[2] * &m[0][0]) - &(&values[1] * &m[1][0])).checked_div(&det)?;
    let a = -(&b + &c);
    let fitted = fits(values, |n| {
        let qn = q.pow(n as i64);
        &(&(&b * &qn) + &(&c * &qn.recip().expect("q ≠ 0"))) + &a
    });
    fitted.then(|| GridFit {
        kind: if b.is_zero() || c.is_zero() {
            GridType::Intermediate
        } else {
            GridType::Generic
        },
        params: params([("A", a), ("B", b), ("C", c)]),
    })
}

/// Uses every stored value of `λ` and `a`; `τ` is never read.
pub fn classify(data: &HyperData) -> Result<Verdict> {
    classify_values(data.lambdas(), data.nodes())
}

pub fn classify_values(lambda: &[Rational], a: &[Rational]) -> Result<Verdict> {
    let Some(spectrum) = detect_spectrum(lambda)? else {
        return Ok(Verdict::unclassified("no exact spectral fit", None));
    };
    let Some(grid) = detect_grid(a, spectrum.kind, spectrum.q.as_ref())? else {
        return Ok(Verdict::unclassified(
            "grid does not fit the shape allowed by the spectrum",
            Some(spectrum.kind),
        ));
    };
    let key = Label::of(spectrum.kind, grid.kind);
    let mut fit_params: Params = spectrum
        .params
        .into_iter()
        .map(|(k, v)| (format!("lambda.{k}"), v))
        .collect();
    fit_params.extend(grid.params.into_iter().map(|(k, v)| (format!("a.{k}"), v)));
    Ok(Verdict::Classified(FamilyClass {
        spectrum: spectrum.kind,
        grid: grid.kind,
        label: key.name().to_string(),
        key,
        fit_params,
        ambiguities: spectrum.ambiguities,
        flags: spectrum.flags,
    }))
}

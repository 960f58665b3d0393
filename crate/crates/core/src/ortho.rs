//! Generalized moments and the orthogonality conditions.
//!
//! The functional `σ` is fixed by `⟨σ, φ_n⟩ = ψ_n^{(0)}` and the generalized
//! moments are `ψ_n^{(k)} = ⟨σ, φ_n φ_k⟩`. Every check here is truncated at
//! order `N`:
//!
//! * [`check_conditions`] and [`gram_check`] both read `λ, τ` up to index
//!   `2N` and `a` up to `2N - 1`, and they pass or fail together.
//! * [`recurrence_residuals`](crate::construct::recurrence_residuals) only
//!   reads data up to index `N`. Orthogonality of `P_0..P_N` implies it, but
//!   a defect beyond `N` breaks the first two checks and not the recurrence.
//!
//! Passing at order `N` says nothing about the polynomials beyond `P_N`.

use serde::Serialize;

use crate::construct::{build_all, build_p, recurrence_coeffs};
use crate::data::{HyperData, Regime};
use crate::error::{Error, Result};
use crate::linalg::{determinant, leading_minors};
use crate::newton::{monomial_to_newton_matrix, poly_mul, MonomialPoly};
use crate::scalar::Rational;

/// `ψ_n^{(0)} = (-1)^n τ_1···τ_n / (λ_1···λ_n)`.
pub fn psi_zero(data: &HyperData, n: usize) -> Result<Rational> {
    data.require_structure()?;
    data.require_len(n)?;
    Ok(psi_zero_column(data, n).pop().expect("non-empty column"))
}

fn psi_zero_column(data: &HyperData, last: usize) -> Vec<Rational> {
    let mut col = Vec::with_capacity(last + 1);
    col.push(Rational::one());
    for n in 1..=last {
        let ratio = &data.taus()[n] / &data.lambdas()[n];
        let next = -(&col[n - 1] * &ratio);
        col.push(next);
    }
    col
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MomentTable {
    /// `psi[n][k] = ψ_n^{(k)}`, `0 ≤ n, k ≤ N`.
    pub psi: Vec<Vec<Rational>>,
    /// `Q_n^{(k)}`; `None` where `ψ_n^{(0)} ψ_0^{(k)} = 0`.
    #[serde(rename = "Q")]
    pub q: Vec<Vec<Option<Rational>>>,
    pub zeta: Vec<Rational>,
    pub y: Vec<Rational>,
}

impl MomentTable {
    pub fn order(&self) -> usize {
        self.psi.len() - 1
    }

    pub fn psi(&self, n: usize, k: usize) -> &Rational {
        &self.psi[n][k]
    }

    pub fn q(&self, n: usize, k: usize) -> Option<&Rational> {
        self.q[n][k].as_ref()
    }

    /// First `(n, k)` with `ψ_n^{(k)} ≠ ψ_k^{(n)}`.
    pub fn asymmetry(&self) -> Option<(usize, usize)> {
        let m = self.order();
        (0..=m)
            .flat_map(|n| (n + 1..=m).map(move |k| (n, k)))
            .find(|&(n, k)| self.psi[n][k] != self.psi[k][n])
    }
}

/// Requires data through index `2N`. Only the structural conditions are
/// needed, so zero `τ` values are allowed here.
pub fn moment_table(data: &HyperData) -> Result<MomentTable> {
    data.require_structure()?;
    let order = data.order();
    data.require_len(2 * order)?;
    let a = data.nodes();

    let mut psi = vec![Vec::with_capacity(order + 1); order + 1];
    let mut col = psi_zero_column(data, 2 * order);
    for k in 0..=order {
        for (n, row) in psi.iter_mut().enumerate() {
            row.push(col[n].clone());
        }
        if k < order {
            col = (0..col.len() - 1)
                .map(|n| &col[n + 1] + &(&(&a[n] - &a[k]) * &col[n]))
                .collect();
        }
    }

    let q = (0..=order)
        .map(|n| {
            (0..=order)
                .map(|k| psi[n][k].checked_div(&(&psi[n][0] * &psi[0][k])))
                .collect()
        })
        .collect();

    let last = (order + 1).min(data.len().saturating_sub(2));
    let zeta = (0..=last)
        .map(|n| data.zeta(n))
        .collect::<Result<Vec<_>>>()?;
    let y = zeta.iter().zip(a).map(|(z, a)| a - z).collect();
    Ok(MomentTable { psi, q, zeta, y })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub n: usize,
    pub k: usize,
    pub residual: Rational,
}

fn collect(cells: impl Iterator<Item = (usize, usize, Rational)>) -> Vec<Violation> {
    cells
        .filter(|(_, _, r)| !r.is_zero())
        .map(|(n, k, residual)| Violation { n, k, residual })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionReport {
    pub pass: bool,
    /// `(λ_n - λ_k) ψ_n^{(k)} + τ_n ψ_{n-1}^{(k)} - τ_k ψ_n^{(k-1)}`,
    /// `1 ≤ k ≤ n ≤ N`. The expression is antisymmetric in `(n, k)`, so the
    /// lower triangle covers every pair.
    pub violations: Vec<Violation>,
    /// `λ_n y_{n-1} + (λ_1 - λ_n) y_n + τ_1`, `1 ≤ n ≤ N`.
    pub k1: Vec<Violation>,
    /// The `y`-form of the `k = 2` condition, over the `n` the data reaches.
    pub k2: Vec<Violation>,
}

pub fn check_conditions(data: &HyperData) -> Result<ConditionReport> {
    data.require_valid()?;
    let table = moment_table(data)?;
    Ok(conditions_from_table(data, &table))
}

fn conditions_from_table(data: &HyperData, table: &MomentTable) -> ConditionReport {
    let order = table.order();
    let (lam, tau, a) = (data.lambdas(), data.taus(), data.nodes());
    let psi = &table.psi;
    let y = &table.y;

    let violations = collect((1..=order).flat_map(|n| {
        (1..=n).map(move |k| {
            let r = &(&(&lam[n] - &lam[k]) * &psi[n][k]) + &(&tau[n] * &psi[n - 1][k])
                - &tau[k] * &psi[n][k - 1];
            (n, k, r)
        })
    }));

    let k1 = collect((1..=order.min(y.len() - 1)).map(|n| {
        let r = &(&lam[n] * &y[n - 1]) + &(&(&lam[1] - &lam[n]) * &y[n]) + tau[1].clone();
        (n, 1, r)
    }));

    let k2_last = order.min(y.len().saturating_sub(2));
    let k2 = collect((1..=k2_last).map(|n| {
        let lhs = &(&(&(&y[n + 1] - &y[n]) * &(&lam[n] - &lam[2])) * &a[n])
            - &(&(&lam[n] * &(&y[n] - &y[n - 1])) * &a[n - 1]);
        let rhs = &(&(&lam[n] * &y[n]) * &(&y[n + 1] - &y[n - 1]))
            + &(&(&a[1] * &lam[n]) * &(&y[n - 1] - &y[n]))
            - &(&lam[2] * &y[n]) * &(&y[n + 1] - &y[1]);
        (n, 2, lhs - rhs)
    }));

    ConditionReport {
        pass: violations.is_empty(),
        violations,
        k1,
        k2,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QResiduals {
    /// Recurrence in `n` with `Q_{n±1}^{(k)}` and coefficients in `a_{k-1}`,
    /// `1 ≤ n ≤ N-1`, `1 ≤ k ≤ N`.
    pub first: Vec<Violation>,
    /// Companion recurrence with `a_k`, `1 ≤ n ≤ N-1`, `0 ≤ k ≤ N-1`.
    pub second: Vec<Violation>,
    /// Cells skipped because some `Q` entry is undefined.
    pub skipped: usize,
}

impl QResiduals {
    pub fn pass(&self) -> bool {
        self.first.is_empty() && self.second.is_empty()
    }
}

pub fn q_recurrences_check(table: &MomentTable, data: &HyperData) -> Result<QResiduals> {
    let order = table.order();
    data.require_len(order + 1)?;
    let (lam, tau, a) = (data.lambdas(), data.taus(), data.nodes());
    let mut skipped = 0;
    let mut first = Vec::new();
    let mut second = Vec::new();

    for n in 1..order {
        let zeta = &tau[n + 1] / &lam[n + 1];
        for k in 0..=order {
            let (Some(up), Some(mid), Some(down)) =
                (table.q(n + 1, k), table.q(n, k), table.q(n - 1, k))
            else {
                skipped += 1;
                continue;
            };
            if k >= 1 {
                let r = &(&(&zeta * &(&lam[k] - &lam[n + 1])) * up)
                    + &(&(&(&tau[n + 1] - &tau[k]) + &(&(&lam[n] - &lam[k]) * &(&a[n] - &a[k - 1]))) * mid)
                    + &(&lam[n] * &(&a[k - 1] - &a[n])) * down;
                if !r.is_zero() {
                    first.push(Violation { n, k, residual: r });
                }
            }
            if k < order {
                let r = &(&(&zeta * &(&lam[n] - &lam[k + 1])) * up)
                    + &(&(&(&tau[k + 1] - &tau[n]) + &(&(&lam[n] - &lam[k + 1]) * &(&a[k] - &a[n]))) * mid)
                    + &(&lam[n] * &(&a[n - 1] - &a[k])) * down;
                if !r.is_zero() {
                    second.push(Violation { n, k, residual: r });
                }
            }
        }
    }
    Ok(QResiduals {
        first,
        second,
        skipped,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MomentFunctional {
    /// `c_j = ⟨σ, x^j⟩`, `0 ≤ j ≤ 2N`.
    pub c: Vec<Rational>,
    /// `H_n = det[ψ_j^{(i)}]_{0 ≤ i, j < n}`, `0 ≤ n ≤ N+1`.
    #[serde(rename = "H")]
    pub h: Vec<Rational>,
    pub nondegenerate: bool,
    /// Smallest `n` with `H_n = 0`.
    pub first_degenerate: Option<usize>,
}

pub fn monomial_moments(data: &HyperData) -> Result<MomentFunctional> {
    let table = moment_table(data)?;
    let order = table.order();
    let psi0 = psi_zero_column(data, 2 * order);
    let basis = monomial_to_newton_matrix(data.grid(), 2 * order)?;
    let c = basis
        .iter()
        .map(|row| row.iter().zip(&psi0).map(|(b, p)| b * p).sum())
        .collect();
    // the basis change x^j -> φ_s is unit triangular, so these minors are
    // also the Hankel determinants of c
    let h = leading_minors(&table.psi);
    let first_degenerate = h.iter().position(Rational::is_zero);
    Ok(MomentFunctional {
        c,
        h,
        nondegenerate: first_degenerate.is_none(),
        first_degenerate,
    })
}

/// `det[c_{i+j}]_{0 ≤ i, j < n}`.
pub fn hankel_determinant(c: &[Rational], n: usize) -> Rational {
    let m: Vec<Vec<Rational>> = (0..n)
        .map(|i| (0..n).map(|j| c[i + j].clone()).collect())
        .collect();
    determinant(&m)
}

/// `⟨σ, p⟩` from monomial moments; `None` if `c` is too short.
pub fn apply_functional(c: &[Rational], p: &MonomialPoly) -> Option<Rational> {
    if p.coeffs().len() > c.len() {
        return None;
    }
    Some(p.coeffs().iter().zip(c).map(|(a, b)| a * b).sum())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GramEntry {
    pub m: usize,
    pub n: usize,
    pub value: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiagonalMismatch {
    pub n: usize,
    pub gram: Rational,
    pub h: Rational,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GramReport {
    pub pass: bool,
    /// `⟨σ, P_m P_n⟩`, `0 ≤ m, n ≤ N`.
    pub matrix: Vec<Vec<Rational>>,
    pub off_diagonal: Vec<GramEntry>,
    /// Diagonal entries differing from `h_n = u_1···u_n`.
    pub diagonal_mismatches: Vec<DiagonalMismatch>,
}

pub fn gram_check(data: &HyperData) -> Result<GramReport> {
    data.require_valid()?;
    let functional = monomial_moments(data)?;
    let polys: Vec<MonomialPoly> = build_all(data)?.iter().map(|p| p.to_monomial()).collect();
    let order = data.order();
    let mut matrix = vec![vec![Rational::zero(); order + 1]; order + 1];
    for m in 0..=order {
        for n in m..=order {
            let v = apply_functional(&functional.c, &poly_mul(&polys[m], &polys[n]))
                .expect("2N moments cover every product");
            matrix[n][m] = v.clone();
            matrix[m][n] = v;
        }
    }
    let off_diagonal = (0..=order)
        .flat_map(|m| (m + 1..=order).map(move |n| (m, n)))
        .filter(|&(m, n)| !matrix[m][n].is_zero())
        .map(|(m, n)| GramEntry {
            m,
            n,
            value: matrix[m][n].clone(),
        })
        .collect::<Vec<_>>();
    let rec = recurrence_coeffs(data)?;
    let diagonal_mismatches = (0..=order)
        .filter_map(|n| {
            let h = rec.h(n)?;
            (matrix[n][n] != *h).then(|| DiagonalMismatch {
                n,
                gram: matrix[n][n].clone(),
                h: h.clone(),
            })
        })
        .collect();
    Ok(GramReport {
        pass: off_diagonal.is_empty(),
        matrix,
        off_diagonal,
        diagonal_mismatches,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FiniteWeights {
    pub nodes: Vec<Rational>,
    pub w: Vec<Rational>,
}

impl FiniteWeights {
    /// `Σ_s w_s f(a_s)`.
    pub fn sum<F: Fn(&Rational) -> Rational>(&self, f: F) -> Rational {
        self.nodes.iter().zip(&self.w).map(|(a, w)| w * &f(a)).sum()
    }
}

/// `w_s = u_1···u_N / (P'_{N+1}(a_s) P_N(a_s))` with `P_{N+1} = φ_{N+1}`.
pub fn finite_weights(data: &HyperData) -> Result<FiniteWeights> {
    data.require_valid()?;
    let order = data.order();
    if data.regime() != Regime::Finite {
        let value = data
            .taus()
            .get(order + 1)
            .map_or_else(|| "undefined".to_string(), ToString::to_string);
        return Err(Error::NotFinite {
            index: order + 1,
            value,
        });
    }
    if let Some((first, second)) = data.grid().first_repeat(order + 1) {
        return Err(Error::RepeatedNodes { first, second });
    }
    let nodes = data.nodes()[..=order].to_vec();
    let h_n = recurrence_coeffs(data)?
        .h(order)
        .cloned()
        .expect("u_1..u_N stored when τ_{N+1} is");
    let p_n = build_p(data, order)?;
    let w = nodes
        .iter()
        .enumerate()
        .map(|(s, a_s)| {
            let dphi: Rational = nodes
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != s)
                .map(|(_, a_j)| a_s - a_j)
                .product();
            h_n.checked_div(&(dphi * p_n.eval(a_s)))
                .ok_or(Error::SingularWeight { index: s })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FiniteWeights { nodes, w })
}

/// `Σ_s w_s P_m(a_s) P_n(a_s)` for `0 ≤ m, n ≤ N`.
pub fn discrete_gram(data: &HyperData, weights: &FiniteWeights) -> Result<Vec<Vec<Rational>>> {
    let polys = build_all(data)?;
    let values: Vec<Vec<Rational>> = polys
        .iter()
        .map(|p| weights.nodes.iter().map(|a| p.eval(a)).collect())
        .collect();
    Ok(values
        .iter()
        .map(|pm| {
            values
                .iter()
                .map(|pn| {
                    (0..weights.w.len())
                        .map(|s| &weights.w[s] * &(&pm[s] * &pn[s]))
                        .sum()
                })
                .collect()
        })
        .collect())
}

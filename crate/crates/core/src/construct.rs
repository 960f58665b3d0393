//! Eigenpolynomials of the two-diagonal operator, their dual system, and
//! the three-term recurrence coefficients.
//!
//! With `L φ_n = λ_n φ_n + τ_n φ_{n-1}`, the eigenpolynomial
//! `P_n = Σ_s W_{n,s} φ_s` has `W_{n,s+1} / W_{n,s} = (λ_n - λ_s) / τ_{s+1}`.
//! Monic rows are filled downward from `W_{n,n} = 1`, hypergeometric-like
//! rows upward from `W_{n,0} = 1`.

use serde::Serialize;

use crate::data::HyperData;
use crate::error::{Error, Result};
use crate::newton::{Grid, MonomialPoly, NewtonPoly};
use crate::scalar::Rational;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    #[default]
    Monic,
    /// `W_{n,0} = 1`.
    HypLike,
}

/// Triangular table `W[n][s]`, `0 ≤ s ≤ n ≤ N`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExpansionMatrix {
    pub normalization: Normalization,
    #[serde(rename = "W")]
    pub rows: Vec<Vec<Rational>>,
}

impl ExpansionMatrix {
    pub fn get(&self, n: usize, s: usize) -> &Rational {
        &self.rows[n][s]
    }
}

fn monic_row(data: &HyperData, n: usize) -> Vec<Rational> {
    let (lambda, tau) = (data.lambdas(), data.taus());
    let mut row = vec![Rational::zero(); n + 1];
    row[n] = Rational::one();
    for s in (0..n).rev() {
        row[s] = &(&row[s + 1] * &tau[s + 1]) / &(&lambda[n] - &lambda[s]);
    }
    row
}

fn hyplike_row(data: &HyperData, n: usize) -> Vec<Rational> {
    let (lambda, tau) = (data.lambdas(), data.taus());
    let mut row = Vec::with_capacity(n + 1);
    row.push(Rational::one());
    for s in 0..n {
        let next = &(&row[s] * &(&lambda[n] - &lambda[s])) / &tau[s + 1];
        row.push(next);
    }
    row
}

pub fn expansion_matrix(data: &HyperData, norm: Normalization) -> Result<ExpansionMatrix> {
    data.require_valid()?;
    let rows = (0..=data.order())
        .map(|n| match norm {
            Normalization::Monic => monic_row(data, n),
            Normalization::HypLike => hyplike_row(data, n),
        })
        .collect();
    Ok(ExpansionMatrix {
        normalization: norm,
        rows,
    })
}

fn check_degree(data: &HyperData, n: usize) -> Result<()> {
    if n > data.order() {
        return Err(Error::IndexOutOfRange {
            sequence: "P",
            index: n,
            last: data.order(),
        });
    }
    Ok(())
}

/// Monic `P_n` in the Newton basis of `data`'s grid.
pub fn build_p(data: &HyperData, n: usize) -> Result<NewtonPoly> {
    data.require_valid()?;
    check_degree(data, n)?;
    NewtonPoly::new(data.grid().clone(), monic_row(data, n))
}

/// `P_n` with `W_{n,0} = 1`.
pub fn build_p_hyplike(data: &HyperData, n: usize) -> Result<NewtonPoly> {
    data.require_valid()?;
    check_degree(data, n)?;
    NewtonPoly::new(data.grid().clone(), hyplike_row(data, n))
}

/// `P_0..P_N`, monic.
pub fn build_all(data: &HyperData) -> Result<Vec<NewtonPoly>> {
    data.require_valid()?;
    (0..=data.order())
        .map(|n| NewtonPoly::new(data.grid().clone(), monic_row(data, n)))
        .collect()
}

/// Linear extension of `φ_k ↦ λ_k φ_k + τ_k φ_{k-1}`.
pub fn apply_l(data: &HyperData, p: &NewtonPoly) -> Result<NewtonPoly> {
    let Some(d) = p.degree() else {
        return Ok(p.clone());
    };
    data.require_len(d)?;
    if !p.grid().agrees_with(data.grid(), d) {
        return Err(Error::GridMismatch);
    }
    let mut out = vec![Rational::zero(); d + 1];
    for (k, c) in p.coeffs().iter().enumerate() {
        out[k] += &(c * &data.lambdas()[k]);
        if k > 0 {
            out[k - 1] += &(c * &data.taus()[k]);
        }
    }
    NewtonPoly::new(data.grid().clone(), out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RecurrenceData {
    /// `b_0, b_1, ...`
    pub b: Vec<Rational>,
    /// `u_1, u_2, ...` (`u[0]` is `u_1`).
    pub u: Vec<Rational>,
    /// `h_0 = 1, h_n = u_1···u_n`.
    pub h: Vec<Rational>,
}

impl RecurrenceData {
    pub fn b(&self, n: usize) -> Option<&Rational> {
        self.b.get(n)
    }

    /// `u_n` for `n ≥ 1`.
    pub fn u(&self, n: usize) -> Option<&Rational> {
        n.checked_sub(1).and_then(|i| self.u.get(i))
    }

    pub fn h(&self, n: usize) -> Option<&Rational> {
        self.h.get(n)
    }

    /// Indices `n` with `u_n = 0`; the functional is degenerate iff non-empty.
    pub fn zero_u(&self) -> Vec<usize> {
        (1..=self.u.len()).filter(|&n| self.u[n - 1].is_zero()).collect()
    }

    /// Indices with `u_n ≤ 0`. Reported, never required.
    pub fn non_positive_u(&self) -> Vec<usize> {
        (1..=self.u.len())
            .filter(|&n| !self.u[n - 1].is_positive())
            .collect()
    }
}

/// `τ_i τ_j / (λ_i - λ_j)` style terms with the convention that anything
/// carrying `τ_0` (or a negative index) is zero.
fn ratio(data: &HyperData, top: usize, lower: usize) -> Rational {
    // τ_top / (λ_top - λ_lower)
    let lam = data.lambdas();
    &data.taus()[top] / &(&lam[top] - &lam[lower])
}

/// `b_n` for `0 ≤ n ≤ N` and `u_n` for `1 ≤ n ≤ N`, each as far as the stored
/// data reaches (both need index `n + 1`).
pub fn recurrence_coeffs(data: &HyperData) -> Result<RecurrenceData> {
    data.require_valid()?;
    let lam = data.lambdas();
    let tau = data.taus();
    let a = data.nodes();
    let last = data.order().min(data.len() - 2);

    let b: Vec<Rational> = (0..=last)
        .map(|n| {
            let mut v = a[n].clone();
            if n >= 1 {
                v += &ratio(data, n, n - 1);
            }
            v - ratio(data, n + 1, n)
        })
        .collect();

    let u: Vec<Rational> = (1..=last)
        .map(|n| {
            let t_n = &tau[n];
            let d1 = &lam[n] - &lam[n - 1];
            let mut v = &(t_n * &(&a[n - 1] - &b[n])) / &d1;
            if n >= 2 {
                let d2 = &lam[n] - &lam[n - 2];
                v += &(&(t_n * &tau[n - 1]) / &(&d1 * &d2));
            }
            let e1 = &lam[n + 1] - &lam[n];
            let e2 = &lam[n + 1] - &lam[n - 1];
            v - &(t_n * &tau[n + 1]) / &(e1 * e2)
        })
        .collect();

    let mut h = vec![Rational::one()];
    for un in &u {
        let next = h.last().unwrap() * un;
        h.push(next);
    }
    Ok(RecurrenceData { b, u, h })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RecurrenceResidual {
    pub n: usize,
    pub residual: MonomialPoly,
}

/// `P_{n+1} + b_n P_n + u_n P_{n-1} - x P_n` for `0 ≤ n ≤ N-1` (the `u` term
/// is absent at `n = 0`). Only nonzero residuals are returned.
pub fn recurrence_residuals(data: &HyperData) -> Result<Vec<RecurrenceResidual>> {
    let polys: Vec<MonomialPoly> = build_all(data)?.iter().map(NewtonPoly::to_monomial).collect();
    let rec = recurrence_coeffs(data)?;
    let x = MonomialPoly::x();
    let mut out = Vec::new();
    for n in 0..data.order() {
        let mut r = &polys[n + 1] + &polys[n].scale(&rec.b[n]);
        if n >= 1 {
            r = &r + &polys[n - 1].scale(rec.u(n).expect("u_n stored for n < N"));
        }
        let r = &r - &(&x * &polys[n]);
        if !r.is_zero() {
            out.push(RecurrenceResidual { n, residual: r });
        }
    }
    Ok(out)
}

/// Dual polynomials `P_n^*` over the Newton basis built on `λ_0, λ_1, ...`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DualSystem {
    pub dual_grid: Vec<Rational>,
    pub polys: Vec<NewtonPoly>,
}

impl DualSystem {
    pub fn monomial(&self, n: usize) -> MonomialPoly {
        self.polys[n].to_monomial()
    }
}

/// `P_n^*(x) = Σ_s (a_n - a_0)···(a_n - a_{s-1}) φ̃_s(x) / (τ_1···τ_s)`,
/// `φ̃_s(x) = (x - λ_0)···(x - λ_{s-1})`. Requires distinct `a_0..a_N`.
pub fn dual_system(data: &HyperData) -> Result<DualSystem> {
    data.require_valid()?;
    let order = data.order();
    if let Some((first, second)) = data.grid().first_repeat(order + 1) {
        return Err(Error::RepeatedNodes { first, second });
    }
    let dual_grid = Grid::new(data.lambdas()[..=order].to_vec());
    let a = data.nodes();
    let tau = data.taus();
    let polys = (0..=order)
        .map(|n| {
            let mut coeffs = Vec::with_capacity(n + 1);
            let mut c = Rational::one();
            coeffs.push(c.clone());
            for s in 0..n {
                c = &(&c * &(&a[n] - &a[s])) / &tau[s + 1];
                coeffs.push(c.clone());
            }
            NewtonPoly::new(dual_grid.clone(), coeffs)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DualSystem {
        dual_grid: dual_grid.nodes().to_vec(),
        polys,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DualityMismatch {
    pub n: usize,
    pub k: usize,
    pub p_at_node: Rational,
    pub dual_at_eigenvalue: Rational,
}

/// Compares `P_n(a_k)` with `P_k^*(λ_n)` (hypergeometric-like `P_n`) for all
/// `0 ≤ n, k ≤ N`; returns the mismatches.
pub fn duality_check(data: &HyperData) -> Result<Vec<DualityMismatch>> {
    let dual = dual_system(data)?;
    let order = data.order();
    let primal = (0..=order)
        .map(|n| build_p_hyplike(data, n))
        .collect::<Result<Vec<_>>>()?;
    let mut out = Vec::new();
    for (n, p) in primal.iter().enumerate() {
        for k in 0..=order {
            let lhs = p.eval(&data.nodes()[k]);
            let rhs = dual.polys[k].eval(&data.lambdas()[n]);
            if lhs != rhs {
                out.push(DualityMismatch {
                    n,
                    k,
                    p_at_node: lhs,
                    dual_at_eigenvalue: rhs,
                });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grids::{self, Family, GridParams};
    use crate::scalar::rat;

    fn r(n: i64) -> Rational {
        Rational::from(n)
    }

    fn simple(order: usize) -> HyperData {
        // λ_n = n, τ_n = n, a_n = n²
        let len = order + 2;
        HyperData::from_values(
            (0..len).map(Rational::from).collect(),
            (0..len).map(Rational::from).collect(),
            (0..len).map(|n| Rational::from(n * n)).collect(),
            order,
        )
        .unwrap()
    }

    #[test]
    fn monic_and_hyplike_boundaries() {
        let d = simple(4);
        let monic = expansion_matrix(&d, Normalization::Monic).unwrap();
        let hyp = expansion_matrix(&d, Normalization::HypLike).unwrap();
        for n in 0..=4 {
            assert!(monic.get(n, n).is_one());
            assert!(hyp.get(n, 0).is_one());
        }
        assert_eq!(monic.get(2, 1), &r(2));
    }

    #[test]
    fn closed_forms_agree_with_incremental_rows() {
        let d = grids::build(
            &GridParams {
                tau1: rat(3, 4),
                gamma: rat(-1, 3),
                a1: r(2),
                alpha: rat(1, 5),
                ..GridParams::new(Family::Quadratic)
            },
            6,
        )
        .unwrap();
        let (lam, tau) = (d.lambdas(), d.taus());
        let monic = expansion_matrix(&d, Normalization::Monic).unwrap();
        let hyp = expansion_matrix(&d, Normalization::HypLike).unwrap();
        for n in 0..=6 {
            for k in 1..=n {
                let num: Rational = (0..k).map(|i| tau[n - i].clone()).product();
                let den: Rational = (1..=k).map(|i| &lam[n] - &lam[n - i]).product();
                assert_eq!(monic.get(n, n - k), &(num / den));
            }
            for s in 1..=n {
                let num: Rational = (0..s).map(|i| &lam[n] - &lam[i]).product();
                let den: Rational = (1..=s).map(|i| tau[i].clone()).product();
                assert_eq!(hyp.get(n, s), &(num / den));
            }
            // the two normalizations differ by W_{n,0}(monic)
            let scaled = build_p_hyplike(&d, n).unwrap().scale(monic.get(n, 0));
            assert_eq!(scaled, build_p(&d, n).unwrap());
        }
    }

    #[test]
    fn low_degree_polys() {
        let d = simple(3);
        assert_eq!(build_p(&d, 0).unwrap().to_monomial(), MonomialPoly::constant(r(1)));
        // φ_1 + τ_1/λ_1 with a_0 = 0
        assert_eq!(
            build_p(&d, 1).unwrap().to_monomial(),
            MonomialPoly::new(vec![r(1), r(1)])
        );
        assert!(matches!(build_p(&d, 4), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn operator_action_on_basis() {
        let d = simple(3);
        let g = d.grid().clone();
        let phi0 = NewtonPoly::new(g.clone(), vec![r(1)]).unwrap();
        assert!(apply_l(&d, &phi0).unwrap().is_zero());
        let phi1 = NewtonPoly::new(g.clone(), vec![r(0), r(1)]).unwrap();
        assert_eq!(apply_l(&d, &phi1).unwrap().coeffs(), &[r(1), r(1)][..]);
        let foreign = NewtonPoly::new(crate::newton::Grid::new(vec![r(0), r(7)]), vec![r(0), r(0), r(1)]).unwrap();
        assert_eq!(apply_l(&d, &foreign), Err(Error::GridMismatch));
    }

    #[test]
    fn eigen_identity_on_arbitrary_data() {
        let d = simple(6);
        for n in 0..=6 {
            let p = build_p(&d, n).unwrap();
            let lp = apply_l(&d, &p).unwrap();
            assert!(lp.checked_sub(&p.scale(&d.lambdas()[n])).unwrap().is_zero());
        }
    }

    #[test]
    fn b0_convention() {
        let d = simple(3);
        let rec = recurrence_coeffs(&d).unwrap();
        assert_eq!(rec.b[0], -(&d.taus()[1] / &d.lambdas()[1]));
        assert_eq!(rec.h[0], r(1));
    }

    #[test]
    fn adversarial_residual_is_nonzero() {
        assert!(!recurrence_residuals(&simple(4)).unwrap().is_empty());
    }

    #[test]
    fn dual_low_degrees() {
        let d = simple(3);
        let dual = dual_system(&d).unwrap();
        assert_eq!(dual.monomial(0), MonomialPoly::constant(r(1)));
        // 1 + a_1 x / τ_1
        assert_eq!(dual.monomial(1), MonomialPoly::new(vec![r(1), &d.nodes()[1] / &d.taus()[1]]));
        assert!(duality_check(&d).unwrap().is_empty());
    }

    #[test]
    fn duality_refuses_repeated_nodes() {
        let d = grids::build(&GridParams { tau1: r(1), alpha: r(2), ..GridParams::new(Family::Quadratic) }, 3).unwrap();
        assert_eq!(dual_system(&d), Err(Error::RepeatedNodes { first: 0, second: 1 }));
    }
}

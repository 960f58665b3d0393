//! Polynomials in the monomial basis and in Newtonian bases
//! `φ_0 = 1`, `φ_n(x) = (x - a_0)(x - a_1)···(x - a_{n-1})`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::Rational;

/// A shared node sequence `a_0, a_1, ...`. Repeated nodes are allowed.
#[derive(Clone, Debug)]
pub struct Grid(Arc<[Rational]>);

impl Grid {
    pub fn new(nodes: Vec<Rational>) -> Self {
        Grid(nodes.into())
    }

    pub fn nodes(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn node(&self, k: usize) -> Result<&Rational> {
        self.0.get(k).ok_or(Error::InsufficientNodes {
            needed: k + 1,
            available: self.len(),
        })
    }

    fn require(&self, count: usize) -> Result<()> {
        if count <= self.len() {
            Ok(())
        } else {
            Err(Error::InsufficientNodes {
                needed: count,
                available: self.len(),
            })
        }
    }

    /// First pair `(i, j)`, `i < j < count`, with `a_i = a_j`.
    pub fn first_repeat(&self, count: usize) -> Option<(usize, usize)> {
        let nodes = &self.0[..count.min(self.len())];
        let mut seen = std::collections::HashMap::new();
        for (j, a) in nodes.iter().enumerate() {
            if let Some(&i) = seen.get(a) {
                return Some((i, j));
            }
            seen.insert(a, j);
        }
        None
    }

    /// Whether both grids agree on their first `count` nodes.
    pub fn agrees_with(&self, other: &Grid, count: usize) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.len() >= count
                && other.len() >= count
                && self.0[..count] == other.0[..count])
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Serialize for Grid {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

/// Dense polynomial in `1, x, x², ...` with no trailing zero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct MonomialPoly {
    coeffs: Vec<Rational>,
}

fn trim(coeffs: &mut Vec<Rational>) {
    while coeffs.last().is_some_and(Rational::is_zero) {
        coeffs.pop();
    }
}

impl MonomialPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        trim(&mut coeffs);
        MonomialPoly { coeffs }
    }

    pub fn zero() -> Self {
        MonomialPoly::default()
    }

    pub fn constant(c: Rational) -> Self {
        MonomialPoly::new(vec![c])
    }

    pub fn x() -> Self {
        MonomialPoly::new(vec![Rational::zero(), Rational::one()])
    }

    /// `x^n`.
    pub fn monomial(n: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); n + 1];
        coeffs[n] = Rational::one();
        MonomialPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        MonomialPoly::new(self.coeffs.iter().map(|v| v * c).collect())
    }

    /// `self · (x - root)`.
    pub fn mul_linear(&self, root: &Rational) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            out[k + 1] += c;
            out[k] -= &(c * root);
        }
        MonomialPoly::new(out)
    }

    /// Synthetic division by `(x - root)`: returns `(quotient, remainder)`.
    pub fn div_linear(&self, root: &Rational) -> (Self, Rational) {
        let Some(d) = self.degree() else {
            return (MonomialPoly::zero(), Rational::zero());
        };
        let mut quotient = vec![Rational::zero(); d];
        let mut carry = Rational::zero();
        for k in (0..=d).rev() {
            let value = &self.coeffs[k] + &(&carry * root);
            if k == 0 {
                return (MonomialPoly::new(quotient), value);
            }
            quotient[k - 1] = value.clone();
            carry = value;
        }
        unreachable!()
    }

    pub fn derivative(&self) -> Self {
        MonomialPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * &Rational::from(k))
                .collect(),
        )
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&Rational, &Rational) -> Rational) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let zero = Rational::zero();
        MonomialPoly::new(
            (0..len)
                .map(|k| {
                    f(
                        self.coeffs.get(k).unwrap_or(&zero),
                        other.coeffs.get(k).unwrap_or(&zero),
                    )
                })
                .collect(),
        )
    }
}

impl Add for &MonomialPoly {
    type Output = MonomialPoly;
    fn add(self, rhs: &MonomialPoly) -> MonomialPoly {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &MonomialPoly {
    type Output = MonomialPoly;
    fn sub(self, rhs: &MonomialPoly) -> MonomialPoly {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &MonomialPoly {
    type Output = MonomialPoly;
    fn neg(self) -> MonomialPoly {
        MonomialPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &MonomialPoly {
    type Output = MonomialPoly;
    fn mul(self, rhs: &MonomialPoly) -> MonomialPoly {
        poly_mul(self, rhs)
    }
}

/// Exact product by schoolbook convolution.
pub fn poly_mul(p: &MonomialPoly, q: &MonomialPoly) -> MonomialPoly {
    if p.is_zero() || q.is_zero() {
        return MonomialPoly::zero();
    }
    let mut out = vec![Rational::zero(); p.coeffs.len() + q.coeffs.len() - 1];
    for (i, a) in p.coeffs.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in q.coeffs.iter().enumerate() {
            out[i + j] += &(a * b);
        }
    }
    MonomialPoly::new(out)
}

impl fmt::Display for MonomialPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() { ("-", -c) } else { ("+", c.clone()) };
            if first {
                if sign == "-" {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{mag}")?,
                _ if mag.is_one() => {}
                _ => write!(f, "{mag}·")?,
            }
            match k {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{k}")?,
            }
        }
        Ok(())
    }
}

/// `Σ c_k φ_k(x)` over a specific [`Grid`].
#[derive(Clone, Debug, PartialEq)]
pub struct NewtonPoly {
    grid: Grid,
    coeffs: Vec<Rational>,
}

impl NewtonPoly {
    /// Errors if the grid lacks the nodes `a_0..a_{d-1}` that the degree
    /// `d` expansion refers to.
    pub fn new(grid: Grid, mut coeffs: Vec<Rational>) -> Result<Self> {
        trim(&mut coeffs);
        grid.require(coeffs.len().saturating_sub(1))?;
        Ok(NewtonPoly { grid, coeffs })
    }

    pub fn zero(grid: Grid) -> Self {
        NewtonPoly {
            grid,
            coeffs: Vec::new(),
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Nested evaluation `c_0 + (x - a_0)(c_1 + (x - a_1)(c_2 + ...))`.
    pub fn eval(&self, x: &Rational) -> Rational {
        let nodes = self.grid.nodes();
        let mut acc = Rational::zero();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            acc = if k + 1 < self.coeffs.len() {
                acc * (x - &nodes[k]) + c
            } else {
                c.clone()
            };
        }
        acc
    }

    pub fn to_monomial(&self) -> MonomialPoly {
        to_monomial(self)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut coeffs: Vec<Rational> = self.coeffs.iter().map(|v| v * c).collect();
        trim(&mut coeffs);
        NewtonPoly {
            grid: self.grid.clone(),
            coeffs,
        }
    }

    fn same_grid(&self, other: &NewtonPoly) -> bool {
        let count = self.coeffs.len().max(other.coeffs.len()).saturating_sub(1);
        self.grid.agrees_with(&other.grid, count)
    }

    /// Coefficient-wise sum; errors when the grids differ.
    pub fn checked_add(&self, other: &NewtonPoly) -> Result<NewtonPoly> {
        self.combine(other, |a, b| a + b)
    }

    pub fn checked_sub(&self, other: &NewtonPoly) -> Result<NewtonPoly> {
        self.combine(other, |a, b| a - b)
    }

    fn combine(
        &self,
        other: &NewtonPoly,
        f: impl Fn(&Rational, &Rational) -> Rational,
    ) -> Result<NewtonPoly> {
        if !self.same_grid(other) {
            return Err(Error::GridMismatch);
        }
        let grid = if self.grid.len() >= other.grid.len() {
            &self.grid
        } else {
            &other.grid
        };
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len).map(|k| f(&self.coeff(k), &other.coeff(k))).collect();
        NewtonPoly::new(grid.clone(), coeffs)
    }
}

/// `φ_n` on `grid`, expanded in monomials.
pub fn phi(grid: &Grid, n: usize) -> Result<MonomialPoly> {
    grid.require(n)?;
    Ok(grid.nodes()[..n]
        .iter()
        .fold(MonomialPoly::constant(Rational::one()), |p, a| p.mul_linear(a)))
}

pub fn to_monomial(p: &NewtonPoly) -> MonomialPoly {
    let nodes = p.grid.nodes();
    let Some((top, rest)) = p.coeffs.split_last() else {
        return MonomialPoly::zero();
    };
    let mut acc = MonomialPoly::constant(top.clone());
    for (k, c) in rest.iter().enumerate().rev() {
        acc = &acc.mul_linear(&nodes[k]) + &MonomialPoly::constant(c.clone());
    }
    acc
}

/// Newton coefficients by successive synthetic division by `(x - a_k)`.
pub fn from_monomial(p: &MonomialPoly, grid: &Grid) -> Result<NewtonPoly> {
    let Some(d) = p.degree() else {
        return Ok(NewtonPoly::zero(grid.clone()));
    };
    grid.require(d)?;
    let mut coeffs = Vec::with_capacity(d + 1);
    let mut rest = p.clone();
    for a in &grid.nodes()[..d] {
        let (q, r) = rest.div_linear(a);
        coeffs.push(r);
        rest = q;
    }
    coeffs.push(rest.coeff(0));
    NewtonPoly::new(grid.clone(), coeffs)
}

/// Change-of-basis table `B` with `x^j = Σ_s B[j][s] φ_s(x)`, `j ≤ max_degree`.
pub fn monomial_to_newton_matrix(grid: &Grid, max_degree: usize) -> Result<Vec<Vec<Rational>>> {
    (0..=max_degree)
        .map(|j| {
            let np = from_monomial(&MonomialPoly::monomial(j), grid)?;
            Ok((0..=j).map(|s| np.coeff(s)).collect())
        })
        .collect()
}

/// A polynomial in either basis. Arithmetic between Newton polynomials on
/// different grids falls back to the monomial basis.
#[derive(Clone, Debug, PartialEq)]
pub enum Poly {
    Newton(NewtonPoly),
    Monomial(MonomialPoly),
}

impl Poly {
    pub fn eval(&self, x: &Rational) -> Rational {
        poly_eval(self, x)
    }

    pub fn to_monomial(&self) -> MonomialPoly {
        match self {
            Poly::Newton(p) => p.to_monomial(),
            Poly::Monomial(p) => p.clone(),
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        if let (Poly::Newton(p), Poly::Newton(q)) = (self, other) {
            if let Ok(sum) = p.checked_add(q) {
                return Poly::Newton(sum);
            }
        }
        Poly::Monomial(&self.to_monomial() + &other.to_monomial())
    }

    pub fn mul(&self, other: &Poly) -> MonomialPoly {
        poly_mul(&self.to_monomial(), &other.to_monomial())
    }
}

pub fn poly_eval(p: &Poly, x: &Rational) -> Rational {
    match p {
        Poly::Newton(p) => p.eval(x),
        Poly::Monomial(p) => p.eval(x),
    }
}

impl From<MonomialPoly> for Poly {
    fn from(p: MonomialPoly) -> Self {
        Poly::Monomial(p)
    }
}

impl From<NewtonPoly> for Poly {
    fn from(p: NewtonPoly) -> Self {
        Poly::Newton(p)
    }
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Poly::Newton(p) => {
                let mut st = s.serialize_struct("Poly", 3)?;
                st.serialize_field("basis", "newton")?;
                // only the nodes the expansion refers to
                let used = p.coeffs.len().saturating_sub(1);
                st.serialize_field("grid", &p.grid.nodes()[..used])?;
                st.serialize_field("coeffs", &p.coeffs)?;
                st.end()
            }
            Poly::Monomial(p) => {
                let mut st = s.serialize_struct("Poly", 2)?;
                st.serialize_field("basis", "monomial")?;
                st.serialize_field("coeffs", &p.coeffs)?;
                st.end()
            }
        }
    }
}

impl Serialize for NewtonPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("NewtonPoly", 2)?;
        st.serialize_field("grid", &self.grid.nodes()[..self.coeffs.len().saturating_sub(1)])?;
        st.serialize_field("coeffs", &self.coeffs)?;
        st.end()
    }
}

impl Serialize for MonomialPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeffs.serialize(s)
    }
}

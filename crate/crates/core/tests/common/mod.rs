//! Seeded generators and independent oracles shared by the integration tests.
#![allow(dead_code)]

use newton_hyper::classify::Label;
use newton_hyper::construct::recurrence_coeffs;
use newton_hyper::grids::{self, Family, GridParams};
use newton_hyper::{HyperData, MonomialPoly, Rational};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn r(n: i64) -> Rational {
    Rational::from(n)
}

/// `p / q` with `|p| ≤ 6`, `1 ≤ q ≤ 4`.
pub fn small<R: Rng>(rng: &mut R) -> Rational {
    Rational::new(rng.gen_range(-6..=6), rng.gen_range(1..=4))
}

pub fn nonzero<R: Rng>(rng: &mut R) -> Rational {
    loop {
        let v = small(rng);
        if !v.is_zero() {
            return v;
        }
    }
}

/// A base `q ∉ {0, ±1}` with small numerator and denominator.
pub fn q_base<R: Rng>(rng: &mut R) -> Rational {
    loop {
        let q = Rational::new(rng.gen_range(-4..=4), rng.gen_range(1..=3));
        if !q.is_zero() && q.abs() != Rational::one() {
            return q;
        }
    }
}

pub fn random_params<R: Rng>(rng: &mut R, family: Family) -> GridParams {
    GridParams {
        tau1: nonzero(rng),
        a1: small(rng),
        gamma: small(rng),
        nu: small(rng),
        alpha: small(rng),
        beta: small(rng),
        q: (family == Family::AskeyWilson).then(|| q_base(rng)),
        ..GridParams::new(family)
    }
}

/// Resamples until the constructor accepts the draw.
pub fn admissible<R: Rng>(
    rng: &mut R,
    order: usize,
    mut draw: impl FnMut(&mut R) -> GridParams,
) -> (GridParams, HyperData) {
    for _ in 0..10_000 {
        let p = draw(rng);
        if let Ok(d) = grids::build(&p, order) {
            return (p, d);
        }
    }
    panic!("no admissible draw in 10000 attempts");
}

pub fn random_instance<R: Rng>(rng: &mut R, family: Family, order: usize) -> (GridParams, HyperData) {
    admissible(rng, order, |rng| random_params(rng, family))
}

pub fn distinct_nodes(d: &HyperData, count: usize) -> bool {
    d.grid().first_repeat(count).is_none()
}

/// Parameter draws that land in the class `label`.
pub fn params_for_label<R: Rng>(rng: &mut R, label: Label) -> GridParams {
    use Label::*;
    let family = match label {
        DualHahnType | UniformGridClass | LaguerreType => Family::Linear,
        RacahWilson | Hahn | Jacobi => Family::Quadratic,
        AskeyWilson | BigQJacobi | LittleQJacobi => Family::AskeyWilson,
        BannaiIto | BigMinusOneJacobi | LittleMinusOneJacobi => Family::BannaiIto,
    };
    let mut p = random_params(rng, family);
    match label {
        LaguerreType => {
            p.a1 = r(0);
            p.alpha = r(0);
        }
        UniformGridClass => {
            p.a1 = nonzero(rng);
            p.alpha = r(0);
        }
        DualHahnType => p.alpha = nonzero(rng),
        Jacobi => {
            p.a1 = r(0);
            p.beta = r(0);
        }
        Hahn => {
            p.a1 = nonzero(rng);
            p.beta = r(0);
        }
        RacahWilson => p.beta = nonzero(rng),
        LittleQJacobi | LittleMinusOneJacobi => {
            p.a1 = r(0);
            p.nu = r(0);
        }
        BigQJacobi | BigMinusOneJacobi => {
            p.a1 = nonzero(rng);
            p.nu = r(0);
        }
        BannaiIto => p.nu = nonzero(rng),
        AskeyWilson => {
            // both exponentials present: ν ≠ 0 and a_1 q/(q-1) ≠ ν
            let q = p.q.clone().unwrap();
            p.nu = nonzero(rng);
            while &(&p.a1 * &q) / &(&q - &Rational::one()) == p.nu {
                p.a1 = small(rng);
            }
        }
    }
    p
}

/// A nondegenerate finite instance (`τ_{N+1} = 0`, distinct `a_0..a_N`,
/// every `u_n ≠ 0`), solving for `γ`.
pub fn finite_instance<R: Rng>(rng: &mut R, family: Family, order: usize) -> (GridParams, HyperData) {
    assert!(order >= 1);
    let n = Rational::from(order);
    let one = Rational::one();
    for _ in 0..10_000 {
        let mut p = random_params(rng, family);
        match family {
            Family::Linear => {
                p.alpha = r(0);
                p.a1 = nonzero(rng);
                p.gamma = &p.a1 + &(&p.tau1 / &n);
            }
            Family::Quadratic => {
                let Ok(a_n) = grids::node(&p, order) else { continue };
                p.gamma = &(&(&(&n + &one) + &p.alpha) * &a_n + &p.tau1) / &n;
            }
            Family::AskeyWilson => {
                let q = p.q.clone().unwrap();
                let Ok(a_n) = grids::node(&p, order) else { continue };
                let q_neg = q.pow(-(order as i64));
                let den = &q_neg - &one;
                let num = &(&a_n * &(&p.alpha - &(&q_neg / &q))) - &(&(&p.tau1 / &(&q - &one)) * &q_neg);
                p.gamma = &num / &den;
            }
            Family::BannaiIto => {
                if order % 2 == 0 {
                    continue;
                }
                let Ok(a_n) = grids::node(&p, order) else { continue };
                p.gamma = a_n;
            }
        }
        let Ok(d) = grids::build(&p, order) else { continue };
        let nondegenerate = || recurrence_coeffs(&d).is_ok_and(|rec| rec.zero_u().is_empty());
        if d.taus()[order + 1].is_zero() && distinct_nodes(&d, order + 1) && nondegenerate() {
            return (p, d);
        }
    }
    panic!("no finite {family} instance of order {order}");
}

/// Random `(λ, τ, a)` with distinct `λ` and nonzero `τ`; generically far
/// from orthogonal.
pub fn scrambled<R: Rng>(rng: &mut R, order: usize) -> HyperData {
    let len = grids::horizon(order);
    loop {
        let mut lambda = vec![r(0)];
        let mut tau = vec![r(0)];
        let mut a = vec![r(0)];
        for _ in 1..len {
            lambda.push(nonzero(rng));
            tau.push(nonzero(rng));
            a.push(small(rng));
        }
        let d = HyperData::from_values(lambda, tau, a, order).unwrap();
        if d.validate().is_valid() {
            return d;
        }
    }
}

/// A classical instance with one of `τ_2, a_1, a_2` nudged.
pub fn nudged<R: Rng>(rng: &mut R, order: usize) -> HyperData {
    assert!(order >= 3);
    let family = Family::ALL[rng.gen_range(0..4)];
    let (_, d) = random_instance(rng, family, order);
    let (mut tau, mut a) = (d.taus().to_vec(), d.nodes().to_vec());
    match rng.gen_range(0..3) {
        0 => tau[2] += &nonzero(rng),
        1 => a[1] += &nonzero(rng),
        _ => a[2] += &nonzero(rng),
    }
    let bent = HyperData::from_values(d.lambdas().to_vec(), tau, a, order).unwrap();
    if bent.validate().is_valid() {
        bent
    } else {
        nudged(rng, order)
    }
}

/// Monic eigenpolynomial of an operator that is upper triangular on
/// monomials: `op[j]` is the image of `x^j`. Solves `(L - λ) p = 0` with
/// `p_n = 1` by back substitution, independent of the Newton machinery.
pub fn monomial_eigenpolynomial(op: &[MonomialPoly], n: usize) -> Option<MonomialPoly> {
    let entry = |i: usize, j: usize| op[j].coeff(i);
    let lambda = entry(n, n);
    let mut p = vec![r(0); n + 1];
    p[n] = r(1);
    for i in (0..n).rev() {
        let rhs: Rational = (i + 1..=n).map(|j| &entry(i, j) * &p[j]).sum();
        let pivot = &lambda - &entry(i, i);
        p[i] = rhs.checked_div(&pivot)?;
    }
    Some(MonomialPoly::new(p))
}

/// `L = -γ x D² + (x - t) D` applied to `x^j`.
pub fn laguerre_operator(gamma: &Rational, t: &Rational, j: usize) -> MonomialPoly {
    let xj = MonomialPoly::monomial(j);
    let d1 = xj.derivative();
    let d2 = d1.derivative();
    let x = MonomialPoly::x();
    let term2 = (&x * &d2).scale(&-gamma.clone());
    let term1 = &(&x * &d1) - &d1.scale(t);
    &term2 + &term1
}

//! Acceptance gate: one line per criterion, non-zero exit on any failure.

mod common;

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use common::{
    admissible, distinct_nodes, finite_instance, laguerre_operator, monomial_eigenpolynomial,
    nonzero, nudged, params_for_label, r, random_instance, rng, scrambled, small,
};
use newton_hyper::classify::{classify, classify_values, Label};
use newton_hyper::construct::{build_p, duality_check, recurrence_coeffs, recurrence_residuals};
use newton_hyper::grids::{self, Family, GridParams};
use newton_hyper::ortho::{
    check_conditions, discrete_gram, finite_weights, gram_check, monomial_moments, moment_table,
    q_recurrences_check,
};
use newton_hyper::{HyperData, ValidationIssue};
use rand::Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn family_sweep() -> Outcome {
    let mut rng = rng(0xA1);
    let mut failures = Vec::new();
    for family in Family::ALL {
        for draw in 0..25 {
            let (p, d) = random_instance(&mut rng, family, 10);
            let conditions = check_conditions(&d).unwrap();
            let table = moment_table(&d).unwrap();
            let q = q_recurrences_check(&table, &d).unwrap();
            let gram = gram_check(&d).unwrap();
            let residuals = recurrence_residuals(&d).unwrap();
            if !(conditions.pass && q.pass() && gram.pass && residuals.is_empty()) {
                failures.push(format!("{family} draw {draw}: {p:?}"));
            }
        }
    }
    let detail = match failures.first() {
        None => "100/100 instances at N = 10 with all residuals exactly zero".to_string(),
        Some(f) => format!("{} failing, first: {f}", failures.len()),
    };
    outcome(failures.is_empty(), detail)
}

fn oracle_equivalence() -> Outcome {
    let mut rng = rng(0xA2);
    let mut disagreements = Vec::new();
    let mut adversarial_all_fail = 0;
    let mut classical_pass = 0;
    for i in 0..50 {
        let order = rng.gen_range(3..=8);
        let (d, adversarial) = match i % 5 {
            0 | 1 => (random_instance(&mut rng, Family::ALL[i % 4], order).1, false),
            2 | 3 => (nudged(&mut rng, order), true),
            _ => (scrambled(&mut rng, order), true),
        };
        let c = check_conditions(&d).unwrap().pass;
        let g = gram_check(&d).unwrap().pass;
        let rr = recurrence_residuals(&d).unwrap().is_empty();
        if !(c == g && g == rr) {
            disagreements.push(i);
        }
        if adversarial && !c && !g && !rr {
            adversarial_all_fail += 1;
        }
        if !adversarial && c && g && rr {
            classical_pass += 1;
        }
    }
    let pass = disagreements.is_empty() && adversarial_all_fail >= 10 && classical_pass == 20;
    outcome(
        pass,
        format!(
            "50 instances, {} disagreements, {classical_pass}/20 classical pass, {adversarial_all_fail}/30 adversarial fail all three",
            disagreements.len()
        ),
    )
}

fn duality() -> Outcome {
    let mut rng = rng(0xA3);
    let mut mismatches = 0;
    for family in [Family::AskeyWilson, Family::Quadratic] {
        for _ in 0..10 {
            // the identity is stated for distinct nodes; redraw until a_0..a_6 are
            let d = loop {
                let (_, d) = admissible(&mut rng, 6, |rng| {
                    let mut p = common::random_params(rng, family);
                    if family == Family::Quadratic {
                        p.a1 = nonzero(rng);
                    } else {
                        p.nu = nonzero(rng);
                    }
                    p
                });
                if distinct_nodes(&d, 7) {
                    break d;
                }
            };
            mismatches += duality_check(&d).unwrap().len();
        }
    }
    outcome(
        mismatches == 0,
        format!("20 instances, n, k ≤ 6, {mismatches} mismatches"),
    )
}

fn laguerre_oracle() -> Outcome {
    let mut rng = rng(0xA4);
    let order = 8;
    let mut checked = 0;
    let mut literal_differs = 0;
    for _ in 0..5 {
        let (gamma, t) = loop {
            let (g, t) = (small(&mut rng), nonzero(&mut rng));
            // operator data must keep τ_n = -n(t + γ(n-1)) nonzero up to N
            if (1..=order).all(|n| !(&t + &(&g * &r(n as i64 - 1))).is_zero()) {
                break (g, t);
            }
        };
        let op: Vec<_> = (0..=order + 1).map(|j| laguerre_operator(&gamma, &t, j)).collect();
        let lambda = (0..=order + 1).map(|j| op[j].coeff(j)).collect();
        let tau = (0..=order + 1)
            .map(|j| if j == 0 { r(0) } else { op[j].coeff(j - 1) })
            .collect();
        let from_operator = HyperData::from_values(lambda, tau, vec![r(0); order + 2], order).unwrap();
        // the family's τ_1 enters with the opposite sign of the operator's
        let family = grids::build(
            &GridParams { tau1: -t.clone(), gamma: gamma.clone(), ..GridParams::new(Family::Linear) },
            order,
        )
        .unwrap();
        for n in 0..=order {
            let oracle = monomial_eigenpolynomial(&op, n).expect("distinct eigenvalues");
            if build_p(&from_operator, n).unwrap().to_monomial() != oracle
                || build_p(&family, n).unwrap().to_monomial() != oracle
            {
                return outcome(false, format!("γ = {gamma}, t = {t}, n = {n}: eigenpolynomial mismatch"));
            }
            checked += 1;
        }
        let literal = GridParams { tau1: t.clone(), gamma: gamma.clone(), ..GridParams::new(Family::Linear) };
        if let Ok(d) = grids::build(&literal, order) {
            if build_p(&d, 1).unwrap().to_monomial() != monomial_eigenpolynomial(&op, 1).unwrap() {
                literal_differs += 1;
            }
        }
    }
    outcome(
        true,
        format!(
            "{checked} eigenpolynomials (n ≤ 8) match with family τ_1 = -t; literal τ_1 = t differs in {literal_differs}/5"
        ),
    )
}

fn finite_case() -> Outcome {
    let mut rng = rng(0xA5);
    let cases = [
        (Family::Linear, 5),
        (Family::Quadratic, 6),
        (Family::Quadratic, 8),
        (Family::AskeyWilson, 4),
        (Family::BannaiIto, 5),
    ];
    for (family, order) in cases {
        let (p, d) = finite_instance(&mut rng, family, order);
        let w = finite_weights(&d).unwrap();
        let g = discrete_gram(&d, &w).unwrap();
        let h = recurrence_coeffs(&d).unwrap().h;
        for m in 0..=order {
            for n in 0..=order {
                let expected = if m == n { h[n].clone() } else { r(0) };
                if g[m][n] != expected {
                    return outcome(false, format!("{p:?}: discrete Gram ({m}, {n}) = {}", g[m][n]));
                }
            }
        }
    }
    outcome(true, "5 instances (N = 4..8), discrete Gram equals diag(h_n) exactly")
}

fn classifier_round_trip() -> Outcome {
    let mut rng = rng(0xA6);
    let mut wrong = Vec::new();
    let mut unchanged = Vec::new();
    for label in Label::ALL {
        for _ in 0..5 {
            let (_, d) = admissible(&mut rng, 3, |rng| params_for_label(rng, label));
            let got = classify(&d).unwrap().label();
            if got != Some(label) {
                wrong.push(format!("{label} -> {got:?}"));
            }
            let mut lambda = d.lambdas().to_vec();
            let i = rng.gen_range(1..lambda.len());
            lambda[i] += &nonzero(&mut rng);
            let mut a = d.nodes().to_vec();
            let j = rng.gen_range(1..a.len());
            a[j] += &nonzero(&mut rng);
            for (lam, nodes) in [(&lambda[..], d.nodes()), (d.lambdas(), &a[..])] {
                if classify_values(lam, nodes).unwrap().label() == Some(label) {
                    unchanged.push(label.to_string());
                }
            }
        }
    }
    let pass = wrong.is_empty() && unchanged.is_empty();
    outcome(
        pass,
        format!(
            "12 labels x 5 draws, {} mislabeled, {} of 120 perturbations left the verdict unchanged",
            wrong.len(),
            unchanged.len()
        ),
    )
}

fn degeneracy() -> Outcome {
    let mut rng = rng(0xA7);
    let order = 6;
    let mut fixtures = 0;
    for family in Family::ALL {
        let (_, d) = loop {
            let (p, d) = random_instance(&mut rng, family, order);
            if monomial_moments(&d).unwrap().nondegenerate {
                break (p, d);
            }
        };
        for j in 1..=order {
            let mut tau = d.taus().to_vec();
            tau[j] = r(0);
            let bent = HyperData::from_values(d.lambdas().to_vec(), tau, d.nodes().to_vec(), order).unwrap();
            let reported = bent.validate().issues.contains(&ValidationIssue::TauZero { index: j });
            let f = monomial_moments(&bent).unwrap();
            let zero_tail = f.h[j + 1..].iter().all(|h| h.is_zero());
            let nonzero_head = f.h[..=j].iter().all(|h| !h.is_zero());
            if !(reported && zero_tail && nonzero_head && f.first_degenerate == Some(j + 1)) {
                return outcome(false, format!("{family}, τ_{j} = 0: H = {:?}", f.h));
            }
            fixtures += 1;
        }
    }
    outcome(
        true,
        format!("{fixtures} fixtures, H_n = 0 exactly for n ≥ j+1 and nonzero below"),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, &str, fn() -> Outcome); 7] = [
        ("AC1", "classical-family verification sweep", family_sweep),
        ("AC2", "oracle equivalence", oracle_equivalence),
        ("AC3", "duality", duality),
        ("AC4", "Laguerre operator oracle", laguerre_oracle),
        ("AC5", "finite case weights", finite_case),
        ("AC6", "classifier round-trip", classifier_round_trip),
        ("AC7", "degeneracy propagation", degeneracy),
    ];
    let mut failed = 0;
    for (id, title, run) in criteria {
        let start = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(run))
            .unwrap_or_else(|_| outcome(false, "panicked"));
        let status = if result.pass { "PASS" } else { "FAIL" };
        println!(
            "{status} {id} {title}: {} ({:.1?})",
            result.detail,
            start.elapsed()
        );
        failed += usize::from(!result.pass);
    }
    if failed == 0 {
        println!("acceptance: 7/7 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} of 7 criteria fail");
        ExitCode::FAILURE
    }
}

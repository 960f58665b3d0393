//! The four pipelines. Each returns a JSON report and an exit status.

use newton_hyper::classify::{classify, Verdict};
use newton_hyper::construct::{
    build_all, duality_check, expansion_matrix, recurrence_coeffs, recurrence_residuals,
    Normalization, RecurrenceData,
};
use newton_hyper::ortho::{
    check_conditions, discrete_gram, finite_weights, gram_check, monomial_moments, moment_table,
    q_recurrences_check,
};
use newton_hyper::{Error, HyperData, Regime};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Ok = 0,
    Residual = 1,
    Unclassified = 3,
}

pub struct Report {
    pub value: Value,
    pub status: Status,
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize to JSON")
}

pub fn construct(data: &HyperData) -> Result<Report, CliError> {
    let polys = build_all(data)?;
    let w = expansion_matrix(data, Normalization::Monic)?;
    let rec = recurrence_coeffs(data)?;
    let polynomials: Vec<Value> = polys
        .iter()
        .enumerate()
        .map(|(n, p)| {
            json!({
                "n": n,
                "newton_coeffs": p.coeffs(),
                "monomial_coeffs": p.to_monomial(),
            })
        })
        .collect();
    Ok(Report {
        value: json!({
            "n": data.order(),
            "grid": &data.nodes()[..data.order()],
            "polynomials": polynomials,
            "W": w.rows,
            "recurrence": rec,
        }),
        status: Status::Ok,
    })
}

/// `n, b_n, u_n, h_n` rows; `u_0` is blank.
pub fn recurrence_csv(data: &HyperData) -> Result<Vec<u8>, CliError> {
    let rec: RecurrenceData = recurrence_coeffs(data)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    let out = |e: csv::Error| CliError::Output(e.to_string());
    w.write_record(["n", "b", "u", "h"]).map_err(out)?;
    for (n, b) in rec.b.iter().enumerate() {
        let u = rec.u(n).map(ToString::to_string).unwrap_or_default();
        let h = rec.h(n).map(ToString::to_string).unwrap_or_default();
        w.write_record([n.to_string(), b.to_string(), u, h]).map_err(out)?;
    }
    w.into_inner().map_err(|e| CliError::Output(e.to_string()))
}

pub fn verify(data: &HyperData) -> Result<Report, CliError> {
    let conditions = check_conditions(data)?;
    let table = moment_table(data)?;
    let q = q_recurrences_check(&table, data)?;
    let gram = gram_check(data)?;
    let residuals = recurrence_residuals(data)?;

    let duality = match duality_check(data) {
        Ok(mismatches) => json!({
            "checked": true,
            "pass": mismatches.is_empty(),
            "mismatches": mismatches,
        }),
        Err(e @ Error::RepeatedNodes { .. }) => json!({ "checked": false, "reason": e.to_string() }),
        Err(e) => return Err(e.into()),
    };

    let regime = data.regime();
    let finite = match regime {
        Regime::Infinite => Value::Null,
        Regime::Finite => match finite_weights(data) {
            Ok(w) => {
                let g = discrete_gram(data, &w)?;
                let diagonal = (0..g.len()).all(|m| {
                    (0..g.len()).all(|n| m == n || g[m][n].is_zero())
                }) && (0..g.len()).all(|n| gram.matrix[n][n] == g[n][n]);
                json!({
                    "checked": true,
                    "pass": diagonal,
                    "weights": w,
                    "discrete_gram": g,
                })
            }
            Err(e @ (Error::RepeatedNodes { .. } | Error::SingularWeight { .. })) => {
                json!({ "checked": true, "pass": false, "reason": e.to_string() })
            }
            Err(e) => return Err(e.into()),
        },
    };

    let conditions_pass = conditions.pass && conditions.k1.is_empty() && conditions.k2.is_empty();
    let gram_pass = gram.pass && gram.diagonal_mismatches.is_empty();
    let pass = conditions_pass
        && q.pass()
        && gram_pass
        && residuals.is_empty()
        && duality["pass"] != json!(false)
        && finite["pass"] != json!(false);

    let residuals: Vec<Value> = residuals
        .iter()
        .map(|r| json!({ "n": r.n, "residual": r.residual }))
        .collect();
    Ok(Report {
        value: json!({
            "n": data.order(),
            "pass": pass,
            "regime": regime,
            "conditions": conditions,
            "q_recurrences": {
                "pass": q.pass(),
                "first": q.first,
                "second": q.second,
                "skipped": q.skipped,
            },
            "gram": gram,
            "recurrence": { "pass": residuals.is_empty(), "residuals": residuals },
            "duality": duality,
            "finite": finite,
        }),
        status: if pass { Status::Ok } else { Status::Residual },
    })
}

pub fn classify_cmd(data: &HyperData) -> Result<Report, CliError> {
    let verdict = classify(data)?;
    let status = match verdict {
        Verdict::Classified(_) => Status::Ok,
        Verdict::Unclassified { .. } => Status::Unclassified,
    };
    Ok(Report {
        value: to_value(&verdict),
        status,
    })
}

pub fn moments(data: &HyperData) -> Result<Report, CliError> {
    let table = moment_table(data)?;
    let functional = monomial_moments(data)?;
    let mut value = to_value(&table);
    let extra = to_value(&functional);
    if let (Value::Object(v), Value::Object(e)) = (&mut value, extra) {
        v.extend(e);
        v.insert("n".into(), json!(data.order()));
        v.insert("symmetric".into(), json!(table.asymmetry().is_none()));
    }
    Ok(Report {
        value,
        status: Status::Ok,
    })
}

/// Keeps only the requested top-level keys.
pub fn select(value: Value, outputs: Option<&[String]>) -> Result<Value, CliError> {
    let Some(keys) = outputs else { return Ok(value) };
    let Value::Object(mut map) = value else { return Ok(value) };
    if let Some(missing) = keys.iter().find(|k| !map.contains_key(k.as_str())) {
        let available: Vec<&String> = map.keys().collect();
        return Err(CliError::usage(format!(
            "unknown output {missing:?}; this report has {available:?}"
        )));
    }
    map.retain(|k, _| keys.contains(k));
    Ok(Value::Object(map))
}

#[cfg(test)]
mod tests {
    use super::*;
    use newton_hyper::grids::{self, Family, GridParams};
    use newton_hyper::{rat, Rational};

    fn jacobi(order: usize) -> HyperData {
        grids::build(
            &GridParams { tau1: Rational::from(1), alpha: Rational::from(1), ..GridParams::new(Family::Quadratic) },
            order,
        )
        .unwrap()
    }

    #[test]
    fn construct_lists_every_polynomial() {
        let r = construct(&jacobi(4)).unwrap();
        assert_eq!(r.value["polynomials"].as_array().unwrap().len(), 5);
        assert_eq!(r.value["polynomials"][0]["monomial_coeffs"], json!(["1"]));
        assert_eq!(r.value["recurrence"]["b"][0], json!("-1/2"));
    }

    #[test]
    fn csv_table() {
        let text = String::from_utf8(recurrence_csv(&jacobi(2)).unwrap()).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("n,b,u,h"));
        assert_eq!(lines.next(), Some("0,-1/2,,1"));
        assert_eq!(text.lines().count(), 4);
    }

    #[test]
    fn verify_statuses() {
        assert_eq!(verify(&jacobi(4)).unwrap().status, Status::Ok);
        let d = jacobi(4);
        let mut a = d.nodes().to_vec();
        a[1] = rat(1, 3);
        let bent = HyperData::from_values(d.lambdas().to_vec(), d.taus().to_vec(), a, 4).unwrap();
        let r = verify(&bent).unwrap();
        assert_eq!(r.status, Status::Residual);
        assert_eq!(r.value["pass"], json!(false));
    }

    #[test]
    fn output_selection() {
        let v = json!({"a": 1, "b": 2});
        assert_eq!(select(v.clone(), Some(&["a".to_string()])).unwrap(), json!({"a": 1}));
        assert!(select(v, Some(&["c".to_string()])).is_err());
    }
}

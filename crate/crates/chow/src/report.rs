//! Canonical JSON envelopes for cycles, multiplicity reports,
//! correspondences, verdicts, and surveys. Components are ordered by
//! (degree, lexicographically smallest generator string) so reports diff
//! cleanly, and repeated runs with the same config are byte-identical.

use crate::correspondences::{Correspondence, LawsReport};
use crate::cycles::{AmbientKind, Cycle};
use crate::koszul::MultiplicityReport;
use crate::limits::Limits;
use crate::transfer::{CommutationReport, Outcome, SurveyOutcome};
use crate::ultra::TransferReport;
use serde_json::{json, Value};

pub fn cycle_to_json(cycle: &Cycle, limits: &Limits) -> Value {
    let kind = match cycle.ambient.kind {
        AmbientKind::Affine => "affine",
        AmbientKind::Projective => "projective",
    };
    let comps: Vec<Value> = cycle
        .sorted_components(limits)
        .iter()
        .map(|(c, m)| {
            json!({
                "generators": c.canonical_generators(limits),
                "multiplicity": m,
                "degree": c.degree.to_string(),
                "dimension": c.dimension,
            })
        })
        .collect();
    json!({
        "ambient": {
            "kind": kind,
            "field": cycle.ambient.ring.field.to_string(),
            "vars": cycle.ambient.ring.vars,
        },
        "codimension": cycle.codim,
        "components": comps,
    })
}

pub fn multiplicity_report_to_json(report: &MultiplicityReport, limits: &Limits) -> Value {
    json!({
        "component": {
            "generators": report.component.canonical_generators(limits),
            "degree": report.component.degree.to_string(),
            "dimension": report.component.dimension,
        },
        "homology_lengths": report.homology_lengths,
        "euler_characteristic": report.euler_characteristic,
        "regular_certified": report.regular_certified,
    })
}

pub fn correspondence_to_json(corr: &Correspondence, limits: &Limits) -> Value {
    let comps: Vec<Value> = corr
        .cycle
        .components
        .iter()
        .zip(&corr.finiteness)
        .map(|((c, m), cert)| {
            json!({
                "generators": c.canonical_generators(limits),
                "multiplicity": m,
                "finiteness": cert.monic_degrees,
                "onto_source_component": cert.onto_component,
            })
        })
        .collect();
    json!({
        "source": {
            "vars": corr.source.ambient.ring.vars,
            "ideal": corr.source.ideal.gens.iter().map(|g| g.canonical_string()).collect::<Vec<_>>(),
        },
        "target": {
            "vars": corr.target.ambient.ring.vars,
            "ideal": corr.target.ideal.gens.iter().map(|g| g.canonical_string()).collect::<Vec<_>>(),
        },
        "components": comps,
    })
}

pub fn los_report_to_json(report: &TransferReport) -> Value {
    json!({
        "verdict": report.verdict.to_string(),
        "exceptions": report.exceptions,
        "true_count": report.counts.0,
        "false_count": report.counts.1,
        "sample": report.sample,
        "outcomes": report.outcomes.iter().map(|(p, b)| json!({"prime": p, "holds": b})).collect::<Vec<_>>(),
    })
}

fn outcome_str(outcome: &Outcome) -> Value {
    match outcome {
        Outcome::Agree => json!("agree"),
        Outcome::BadPrime => json!("bad-prime"),
        Outcome::Disagree(d) => json!({"disagree": d}),
        Outcome::Unsupported(m) => json!({"unsupported": m}),
    }
}

pub fn commutation_report_to_json(report: &CommutationReport) -> Value {
    json!({
        "kind": report.kind,
        "verdict": report.verdict.to_string(),
        "exceptions": report.exceptions,
        "precomputed_bad_primes": report.precomputed_bad,
        "exceptions_covered": report.exceptions_covered(),
        "outcomes": report
            .outcomes
            .iter()
            .map(|(p, o)| json!({"prime": p, "outcome": outcome_str(o)}))
            .collect::<Vec<_>>(),
    })
}

pub fn survey_to_json(outcome: &SurveyOutcome) -> Value {
    let table_json = |table: &crate::transfer::SurveyTable| -> Value {
        Value::Array(
            table
                .iter()
                .map(|((d, n), c)| json!({"d": d, "n": n, "max_complexity": c.to_string()}))
                .collect(),
        )
    };
    json!({
        "rational": table_json(&outcome.rational_table),
        "primes": outcome
            .prime_tables
            .iter()
            .map(|(p, t)| json!({"prime": p, "table": table_json(t)}))
            .collect::<Vec<_>>(),
        "monotone": outcome.monotone,
        "identical_across_fields": outcome.identical,
    })
}

pub fn laws_report_to_json(report: &LawsReport) -> Value {
    json!({
        "all_pass": report.all_pass(),
        "checks": report
            .checks
            .iter()
            .map(|(name, ok)| json!({"check": name, "pass": ok}))
            .collect::<Vec<_>>(),
    })
}

/// Render a commutation summary line, e.g. "cofinite-holds: 20/20".
pub fn commutation_summary(reports: &[CommutationReport]) -> String {
    let holds = reports
        .iter()
        .filter(|r| r.verdict == crate::ultra::Verdict::CofiniteHolds)
        .count();
    format!("cofinite-holds: {}/{}", holds, reports.len())
}

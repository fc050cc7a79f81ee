//! JSON description of a surgery triangle with at most one unknown term.
//!
//! ```json
//! {
//!   "terms": ["T+(0)", "?", "T+(0) + Z(-1) + Z(-1)"],
//!   "shifts": ["-1/2", "-1/2", "0"],
//!   "hypotheses": [{"arrow": "AB", "grading": "0", "constraint": "nonzero"}],
//!   "window": ["-6", "6"],
//!   "budget": 6
//! }
//! ```

use plumbing_hf::exact_triangle::DEFAULT_BUDGET;
use plumbing_hf::graded_module::parse_grading;
use plumbing_hf::{Constraint, Grading, Hypothesis, Term, TriangleSpec};
use serde::Deserialize;

use crate::error::CliError;

/// Gradings may be written as strings (`"-1/2"`) or plain integers.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum GradingValue {
    Text(String),
    Int(i64),
}

impl GradingValue {
    fn value(&self) -> Result<Grading, CliError> {
        match self {
            GradingValue::Text(s) => Ok(parse_grading(s)?),
            GradingValue::Int(n) => Ok(Grading::from_integer(*n)),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "lowercase")]
enum ConstraintValue {
    Zero,
    Nonzero,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct HypothesisValue {
    arrow: String,
    grading: GradingValue,
    constraint: ConstraintValue,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TriangleFile {
    terms: [String; 3],
    shifts: Option<[GradingValue; 3]>,
    #[serde(default)]
    hypotheses: Vec<HypothesisValue>,
    window: Option<[GradingValue; 2]>,
    budget: Option<usize>,
    unknown_towers: Option<usize>,
}

/// Parsed triangle together with the summand budget it asks for.
pub fn parse_triangle_file(text: &str) -> Result<(TriangleSpec, usize), CliError> {
    let file: TriangleFile = serde_json::from_str(text).map_err(|e| CliError::Json(e.to_string()))?;
    let mut terms = Vec::with_capacity(3);
    for t in &file.terms {
        terms.push(match t.trim() {
            "?" => Term::Unknown,
            s => Term::Known(s.parse()?),
        });
    }
    let [a, b, c]: [Term; 3] = terms.try_into().expect("three terms");
    let mut spec = TriangleSpec::new(a, b, c);
    if let Some(shifts) = &file.shifts {
        for (slot, s) in spec.shifts.iter_mut().zip(shifts) {
            *slot = s.value()?;
        }
    }
    for h in &file.hypotheses {
        spec.hypotheses.push(Hypothesis {
            arrow: h.arrow.parse()?,
            grading: h.grading.value()?,
            constraint: match h.constraint {
                ConstraintValue::Zero => Constraint::Zero,
                ConstraintValue::Nonzero => Constraint::Nonzero,
            },
        });
    }
    if let Some([lo, hi]) = &file.window {
        spec.window = (lo.value()?, hi.value()?);
    }
    spec.unknown_towers = file.unknown_towers;
    Ok((spec, file.budget.unwrap_or(DEFAULT_BUDGET)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use plumbing_hf::graded_module::{grading, half};
    use plumbing_hf::Arrow;

    #[test]
    fn full_file() {
        let (spec, budget) = parse_triangle_file(
            r#"{"terms": ["T+(0)", "?", "T+(0) + Z(-1) + Z(-1)"], "shifts": ["-1/2", "-1/2", "0"],
                "hypotheses": [{"arrow": "AB", "grading": "0", "constraint": "nonzero"}],
                "window": ["-8", 8], "budget": 5}"#,
        )
        .unwrap();
        assert_eq!(spec.terms[1], Term::Unknown);
        assert_eq!(spec.shifts, [half(-1), half(-1), grading(0)]);
        assert_eq!(spec.hypotheses[0].arrow, Arrow::AB);
        assert_eq!(spec.hypotheses[0].constraint, Constraint::Nonzero);
        assert_eq!(spec.window, (grading(-8), grading(8)));
        assert_eq!(budget, 5);
    }

    #[test]
    fn defaults() {
        let (spec, budget) = parse_triangle_file(r#"{"terms": ["?", "0", "0"]}"#).unwrap();
        assert_eq!(spec.shifts, TriangleSpec::default_shifts());
        assert_eq!(spec.window, TriangleSpec::default_window());
        assert_eq!(budget, DEFAULT_BUDGET);
        assert_eq!(spec.unknown_towers, None);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse_triangle_file("{"), Err(CliError::Json(_))));
        assert!(matches!(parse_triangle_file(r#"{"terms": ["?", "0"]}"#), Err(CliError::Json(_))));
        assert!(matches!(parse_triangle_file(r#"{"terms": ["?", "0", "W(1)"]}"#), Err(CliError::Core(_))));
        assert!(parse_triangle_file(
            r#"{"terms": ["?", "0", "0"], "hypotheses": [{"arrow": "BA", "grading": "0", "constraint": "zero"}]}"#
        )
        .is_err());
        assert!(matches!(parse_triangle_file(r#"{"terms": ["?", "0", "0"], "extra": 1}"#), Err(CliError::Json(_))));
    }
}

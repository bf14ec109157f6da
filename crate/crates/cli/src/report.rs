//! Text and JSON renderings of command results.
//!
//! Both renderings are built from the same values. JSON objects use
//! `serde_json`'s default map, which keeps keys sorted, so output is
//! byte-stable for fixed inputs.

use std::fmt::Write as _;

use mass_core::assign::{Assignment, AssignmentCost};
use mass_core::craft::{MoveKind, Trace};
use mass_core::fixed::{format_decimal, format_scaled, LoadMeters, SCALE};
use mass_core::loads::LoadMatrix;
use mass_core::oracle::OracleResult;
use mass_core::pipeline::Solution;
use mass_core::plan::{format_length, render_ascii, CostReport, Layout};
use serde_json::{json, Number, Value};

pub struct Report {
    text: String,
    json: Value,
}

/// Whole values become JSON integers, fractional ones floats.
pub fn cost_value(c: LoadMeters) -> Value {
    match c.as_whole().and_then(|w| i64::try_from(w).ok()) {
        Some(w) => Value::from(w),
        None => Number::from_f64(c.as_f64()).map_or(Value::Null, Value::Number),
    }
}

fn scaled_value(v: i128) -> Value {
    let scale = i128::from(SCALE);
    if v % scale == 0 {
        if let Ok(w) = i64::try_from(v / scale) {
            return Value::from(w);
        }
    }
    Number::from_f64(v as f64 / scale as f64).map_or(Value::Null, Value::Number)
}

fn participant_labels(loads: &LoadMatrix, kind: MoveKind, participants: &[usize]) -> Vec<String> {
    participants
        .iter()
        .map(|&p| if kind.moves_columns() { format!("col{p}") } else { loads.name(p).to_string() })
        .collect()
}

fn layout_json(loads: &LoadMatrix, layout: &Layout) -> Value {
    let placed: Vec<Value> = (0..layout.len())
        .filter_map(|f| {
            layout.slot_of(f).map(|s| json!({ "facility": loads.name(f), "row": s.row, "col": s.col }))
        })
        .collect();
    json!({
        "rows": layout.grid().rows,
        "cols": layout.grid().cols,
        "placement": placed,
    })
}

fn assignment_json(loads: &LoadMatrix, asg: &Assignment) -> Value {
    Value::Array(
        (0..asg.len())
            .map(|i| json!({ "facility": loads.name(i), "partner": loads.name(asg.partner(i)) }))
            .collect(),
    )
}

fn assignment_text(out: &mut String, loads: &LoadMatrix, asg: &Assignment) {
    let pairs: Vec<String> =
        (0..asg.len()).map(|i| format!("{}->{}", loads.name(i), loads.name(asg.partner(i)))).collect();
    writeln!(out, "assignment: {}", pairs.join(" ")).unwrap();
}

/// Trace file contents.
pub fn trace_json(loads: &LoadMatrix, trace: &Trace) -> String {
    let value = json!({
        "initial_cost": cost_value(trace.initial_cost),
        "moves": trace.accepted.iter().map(|step| json!({
            "kind": step.mv.kind.as_str(),
            "participants": participant_labels(loads, step.mv.kind, &step.mv.participants),
            "cost_after": cost_value(step.cost_after),
        })).collect::<Vec<_>>(),
        "final_cost": cost_value(trace.final_cost),
    });
    let mut s = serde_json::to_string_pretty(&value).expect("json");
    s.push('\n');
    s
}

impl Report {
    pub fn to_text(&self) -> String {
        self.text.clone()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.json).expect("json");
        s.push('\n');
        s
    }

    pub fn json(&self) -> &Value {
        &self.json
    }

    pub fn assignment(loads: &LoadMatrix, asg: &Assignment, cost: &AssignmentCost) -> Self {
        let mut text = String::new();
        assignment_text(&mut text, loads, asg);
        writeln!(text, "assignment_cost={}", format_scaled(cost.total, i128::from(SCALE))).unwrap();
        writeln!(text, "uses_vacant_cell={}", cost.uses_synthetic).unwrap();
        let json = json!({
            "assignment": assignment_json(loads, asg),
            "assignment_cost": scaled_value(cost.total),
            "uses_vacant_cell": cost.uses_synthetic,
        });
        Report { text, json }
    }

    pub fn layout(loads: &LoadMatrix, asg: &Assignment, layout: &Layout, cost: &CostReport) -> Self {
        let mut text = String::new();
        assignment_text(&mut text, loads, asg);
        writeln!(text, "cost={}", cost.total).unwrap();
        text.push_str(&render_ascii(layout, loads.names()));
        let json = json!({
            "assignment": assignment_json(loads, asg),
            "cost": cost_value(cost.total),
            "layout": layout_json(loads, layout),
        });
        Report { text, json }
    }

    pub fn optimize(loads: &LoadMatrix, s: &Solution) -> Self {
        let trace = &s.trace;
        let improvement = trace.initial_cost - trace.final_cost;
        let mut text = String::new();
        assignment_text(&mut text, loads, &s.assignment);
        writeln!(text, "assignment_cost={}", format_scaled(s.assignment_cost.total, i128::from(SCALE))).unwrap();
        writeln!(text, "initial_cost={}", trace.initial_cost).unwrap();
        writeln!(text, "final_cost={}", trace.final_cost).unwrap();
        writeln!(text, "improvement={improvement}").unwrap();
        writeln!(text, "accepted_moves={}", trace.accepted.len()).unwrap();
        for (k, step) in trace.accepted.iter().enumerate() {
            writeln!(
                text,
                "move {}: {} [{}] delta={} cost_after={}",
                k + 1,
                step.mv.kind,
                participant_labels(loads, step.mv.kind, &step.mv.participants).join(","),
                step.mv.delta,
                step.cost_after
            )
            .unwrap();
        }
        text.push_str("initial layout:\n");
        text.push_str(&render_ascii(&s.initial_layout, loads.names()));
        text.push_str("final layout:\n");
        text.push_str(&render_ascii(&s.final_layout, loads.names()));

        let moves: Vec<Value> = trace
            .accepted
            .iter()
            .map(|step| {
                json!({
                    "kind": step.mv.kind.as_str(),
                    "participants": participant_labels(loads, step.mv.kind, &step.mv.participants),
                    "delta": cost_value(step.mv.delta),
                    "cost_after": cost_value(step.cost_after),
                })
            })
            .collect();
        let json = json!({
            "assignment": assignment_json(loads, &s.assignment),
            "assignment_cost": scaled_value(s.assignment_cost.total),
            "initial_cost": cost_value(trace.initial_cost),
            "final_cost": cost_value(trace.final_cost),
            "improvement": cost_value(improvement),
            "accepted_moves": trace.accepted.len(),
            "moves": moves,
            "initial_layout": layout_json(loads, &s.initial_layout),
            "final_layout": layout_json(loads, &s.final_layout),
        });
        Report { text, json }
    }

    pub fn evaluate(loads: &LoadMatrix, layout: &Layout, cost: &CostReport) -> Self {
        let mut text = String::new();
        writeln!(text, "cost={}", cost.total).unwrap();
        for c in &cost.contributions {
            writeln!(
                text,
                "{}->{} load={} distance={} product={}",
                loads.name(c.from),
                loads.name(c.to),
                format_decimal(c.load),
                format_length(c.distance),
                c.product
            )
            .unwrap();
        }
        text.push_str(&render_ascii(layout, loads.names()));
        let contributions: Vec<Value> = cost
            .contributions
            .iter()
            .map(|c| {
                json!({
                    "from": loads.name(c.from),
                    "to": loads.name(c.to),
                    "load": scaled_value(i128::from(c.load)),
                    "distance": scaled_value(i128::from(c.distance)),
                    "product": cost_value(c.product),
                })
            })
            .collect();
        let json = json!({
            "cost": cost_value(cost.total),
            "contributions": contributions,
            "layout": layout_json(loads, layout),
        });
        Report { text, json }
    }

    pub fn oracle(loads: &LoadMatrix, r: &OracleResult<Layout, LoadMeters>) -> Self {
        let mut text = String::new();
        writeln!(text, "best_cost={}", r.best_cost).unwrap();
        writeln!(text, "optima_count={}", r.optima_count).unwrap();
        text.push_str(&render_ascii(&r.witness, loads.names()));
        let json = json!({
            "best_cost": cost_value(r.best_cost),
            "optima_count": r.optima_count,
            "witness": layout_json(loads, &r.witness),
        });
        Report { text, json }
    }
}

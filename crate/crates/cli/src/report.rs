use serde::Serialize;
use serde_json::{Map, Value};

pub const DETERMINISM: &str = "exact rational arithmetic; no timestamps or host data; identical arguments give identical output";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn from_ok(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
        }
    }
}

/// The document every subcommand emits.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: &'static str,
    pub parameters: Map<String, Value>,
    /// Largest index computed.
    pub truncation: usize,
    pub determinism: &'static str,
    pub hypotheses: Value,
    pub rows: Vec<Value>,
    pub summary: Map<String, Value>,
    pub status: Status,
}

impl Report {
    pub fn new(command: &'static str, truncation: usize) -> Report {
        Report {
            command,
            parameters: Map::new(),
            truncation,
            determinism: DETERMINISM,
            hypotheses: Value::Null,
            rows: vec![],
            summary: Map::new(),
            status: Status::Pass,
        }
    }

    pub fn param(&mut self, key: &str, value: impl Serialize) -> &mut Report {
        self.parameters.insert(key.into(), to_value(value));
        self
    }

    pub fn note(&mut self, key: &str, value: impl Serialize) -> &mut Report {
        self.summary.insert(key.into(), to_value(value));
        self
    }

    pub fn rows_from<T: Serialize>(&mut self, rows: impl IntoIterator<Item = T>) -> &mut Report {
        self.rows = rows.into_iter().map(to_value).collect();
        self
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("reports serialize");
        out.push('\n');
        out
    }

    /// One header line from the first row's keys, then one line per row.
    /// Nested values are written as compact JSON.
    pub fn to_tsv(&self) -> String {
        let Some(Value::Object(first)) = self.rows.first() else {
            return String::new();
        };
        let keys: Vec<&String> = first.keys().collect();
        let mut out = keys.iter().map(|k| k.as_str()).collect::<Vec<_>>().join("\t");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = keys.iter().map(|k| cell(row.get(k.as_str()))).collect();
            out.push_str(&cells.join("\t"));
            out.push('\n');
        }
        out
    }
}

fn cell(v: Option<&Value>) -> String {
    match v {
        None | Some(Value::Null) => String::new(),
        Some(Value::String(s)) => s.clone(),
        Some(other) => other.to_string(),
    }
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("report fields serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn tsv_mirrors_rows() {
        let mut r = Report::new("demo", 2);
        r.rows_from([json!({"n": 0, "valuation": "inf", "tight": false}), json!({"n": 1, "valuation": 3, "tight": true})]);
        assert_eq!(r.to_tsv(), "n\tvaluation\ttight\n0\tinf\tfalse\n1\t3\ttrue\n");
        assert_eq!(Report::new("empty", 0).to_tsv(), "");
    }

    #[test]
    fn field_order_is_fixed() {
        let json = Report::new("demo", 4).to_json();
        let keys = ["command", "parameters", "truncation", "determinism", "hypotheses", "rows", "summary", "status"];
        let at: Vec<usize> = keys.iter().map(|k| json.find(&format!("\"{k}\"")).unwrap()).collect();
        assert!(at.windows(2).all(|w| w[0] < w[1]));
    }
}

//! Reports: a headline, ordered facts, and three renderings (human,
//! `key=value` lines, JSON).

use serde_json::{json, Map, Value};
use sftgroup::{Sft, StepFunction, TableHomeo};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Kv,
    Json,
}

pub enum Fact {
    Text(String),
    Int(i64),
    Bool(bool),
    Function(StepFunction),
    Table(TableHomeo),
    Lines(Vec<String>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    False,
    Inconclusive,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::False => 1,
            Status::Inconclusive => 3,
        }
    }

    fn label(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::False => "false",
            Status::Inconclusive => "inconclusive",
        }
    }
}

pub struct Report {
    pub status: Status,
    pub headline: String,
    facts: Vec<(String, Fact)>,
    params: Vec<(&'static str, String)>,
}

fn word(sft: &Sft, w: &[u8]) -> String {
    if w.is_empty() {
        "-".into()
    } else {
        sft.format_word(w)
    }
}

impl Report {
    pub fn new(status: Status, headline: impl Into<String>) -> Self {
        Report { status, headline: headline.into(), facts: Vec::new(), params: Vec::new() }
    }

    pub fn fact(mut self, key: impl Into<String>, value: Fact) -> Self {
        self.facts.push((key.into(), value));
        self
    }

    pub fn text(self, key: &str, value: impl ToString) -> Self {
        self.fact(key, Fact::Text(value.to_string()))
    }

    pub fn int(self, key: &str, value: i64) -> Self {
        self.fact(key, Fact::Int(value))
    }

    pub fn bool(self, key: &str, value: bool) -> Self {
        self.fact(key, Fact::Bool(value))
    }

    pub fn function(self, key: &str, f: &StepFunction) -> Self {
        self.fact(key, Fact::Function(f.clone()))
    }

    pub fn table(self, key: &str, t: &TableHomeo) -> Self {
        self.fact(key, Fact::Table(t.clone()))
    }

    pub fn with_params(mut self, params: Vec<(&'static str, String)>) -> Self {
        self.params = params;
        self
    }

    pub fn human(&self) -> String {
        let mut s = format!("{}\n", self.headline);
        for (key, fact) in &self.facts {
            match fact {
                Fact::Text(t) => s.push_str(&format!("{key}: {t}\n")),
                Fact::Int(v) => s.push_str(&format!("{key}: {v}\n")),
                Fact::Bool(v) => s.push_str(&format!("{key}: {v}\n")),
                Fact::Function(f) => {
                    s.push_str(&format!("{key}:\n"));
                    for line in f.render().lines() {
                        s.push_str(&format!("  {line}\n"));
                    }
                }
                Fact::Table(t) => {
                    s.push_str(&format!("{key}:\n"));
                    for line in t.render().lines() {
                        s.push_str(&format!("  {line}\n"));
                    }
                }
                Fact::Lines(lines) => {
                    s.push_str(&format!("{key}:\n"));
                    for line in lines {
                        s.push_str(&format!("  {line}\n"));
                    }
                }
            }
        }
        s.push_str(&self.params_line());
        s
    }

    fn params_line(&self) -> String {
        let body: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        format!("params {}\n", body.join(" "))
    }

    pub fn kv(&self) -> String {
        let mut s = format!("status={}\nresult={}\n", self.status.label(), self.headline);
        for (key, fact) in &self.facts {
            match fact {
                Fact::Text(t) => s.push_str(&format!("{key}={t}\n")),
                Fact::Int(v) => s.push_str(&format!("{key}={v}\n")),
                Fact::Bool(v) => s.push_str(&format!("{key}={v}\n")),
                Fact::Function(f) => {
                    s.push_str(&format!("{key}.depth={}\n", f.depth()));
                    for (w, v) in f.entries() {
                        s.push_str(&format!("{key}.{}={v}\n", word(f.sft(), w)));
                    }
                }
                Fact::Table(t) => {
                    for (a, b) in t.pairs() {
                        s.push_str(&format!("{key}.{}={}\n", word(t.sft(), a), word(t.sft(), b)));
                    }
                }
                Fact::Lines(lines) => {
                    for (i, line) in lines.iter().enumerate() {
                        s.push_str(&format!("{key}.{i}={line}\n"));
                    }
                }
            }
        }
        for (k, v) in &self.params {
            s.push_str(&format!("params.{k}={v}\n"));
        }
        s
    }

    pub fn json(&self) -> String {
        let mut facts = Map::new();
        for (key, fact) in &self.facts {
            let value = match fact {
                Fact::Text(t) => Value::String(t.clone()),
                Fact::Int(v) => json!(v),
                Fact::Bool(v) => json!(v),
                Fact::Function(f) => {
                    let values: Map<String, Value> =
                        f.entries().map(|(w, v)| (word(f.sft(), w), json!(v))).collect();
                    json!({ "depth": f.depth(), "values": values })
                }
                Fact::Table(t) => {
                    let pairs: Vec<Value> = t
                        .pairs()
                        .iter()
                        .map(|(a, b)| json!([word(t.sft(), a), word(t.sft(), b)]))
                        .collect();
                    Value::Array(pairs)
                }
                Fact::Lines(lines) => json!(lines),
            };
            facts.insert(key.clone(), value);
        }
        let params: Map<String, Value> = self.params.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
        let doc = json!({
            "status": self.status.label(),
            "result": self.headline,
            "facts": facts,
            "params": params,
        });
        format!("{}\n", serde_json::to_string_pretty(&doc).expect("JSON values serialize"))
    }

    pub fn render(&self, format: Option<Format>) -> String {
        match format {
            None => self.human(),
            Some(Format::Kv) => self.kv(),
            Some(Format::Json) => self.json(),
        }
    }
}

/// Renders a failure in the requested format.
pub fn render_error(name: &str, message: &str, format: Option<Format>) -> String {
    match format {
        None => format!("error: {name}: {message}\n"),
        Some(Format::Kv) => format!("status=error\nerror={name}\nmessage={message}\n"),
        Some(Format::Json) => {
            let doc = json!({ "status": "error", "error": name, "message": message });
            format!("{}\n", serde_json::to_string_pretty(&doc).expect("JSON values serialize"))
        }
    }
}

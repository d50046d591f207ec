//! Flat, ordered reports rendered as JSON, CSV or text.

use std::collections::BTreeMap;

use clap::ValueEnum;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Debug)]
pub enum Field {
    Plain(Value),
    /// Order → class size, kept in numeric order.
    Classes(BTreeMap<usize, usize>),
}

impl<T: Into<Value>> From<T> for Field {
    fn from(v: T) -> Self {
        Field::Plain(v.into())
    }
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    fields: Vec<(&'static str, Field)>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, key: &'static str, value: impl Into<Field>) -> &mut Self {
        self.fields.push((key, value.into()));
        self
    }

    pub fn classes(&mut self, key: &'static str, classes: BTreeMap<usize, usize>) -> &mut Self {
        self.fields.push((key, Field::Classes(classes)));
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.json(),
            Format::Csv => self.csv(),
            Format::Text => self.text(),
        }
    }

    fn json(&self) -> String {
        let mut out = String::from("{\n");
        for (i, (key, field)) in self.fields.iter().enumerate() {
            let value = match field {
                Field::Plain(v) => serde_json::to_string(v).expect("serializable"),
                Field::Classes(m) => {
                    let items: Vec<String> = m.iter().map(|(r, c)| format!("\"{r}\": {c}")).collect();
                    format!("{{{}}}", items.join(", "))
                }
            };
            let comma = if i + 1 < self.fields.len() { "," } else { "" };
            out.push_str(&format!("  \"{key}\": {value}{comma}\n"));
        }
        out.push_str("}\n");
        out
    }

    fn flat(field: &Field) -> String {
        match field {
            Field::Plain(Value::String(s)) => s.clone(),
            Field::Plain(Value::Null) => String::new(),
            Field::Plain(Value::Array(items)) => {
                items.iter().map(|v| Self::flat(&Field::Plain(v.clone()))).collect::<Vec<_>>().join(";")
            }
            Field::Plain(v) => v.to_string(),
            Field::Classes(m) => m.iter().map(|(r, c)| format!("{r}:{c}")).collect::<Vec<_>>().join(";"),
        }
    }

    fn csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(self.fields.iter().map(|(k, _)| *k)).expect("in-memory write");
        w.write_record(self.fields.iter().map(|(_, f)| Self::flat(f))).expect("in-memory write");
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
    }

    fn text(&self) -> String {
        self.fields
            .iter()
            .map(|(k, f)| {
                let v = match f {
                    Field::Classes(m) => m.iter().map(|(r, c)| format!("{r}:{c}")).collect::<Vec<_>>().join(" "),
                    Field::Plain(Value::Array(_)) => Self::flat(f).replace(';', " "),
                    Field::Plain(Value::Null) => "n/a".into(),
                    _ => Self::flat(f),
                };
                format!("{k}: {v}\n")
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new();
        r.push("label", "clifford:2x3")
            .push("size", 5184)
            .push("fp", 4.0)
            .push("missing", Value::Null)
            .classes("order_classes", BTreeMap::from([(1, 1), (2, 3), (10, 8)]));
        r
    }

    #[test]
    fn json_keeps_field_and_class_order() {
        let text = sample().render(Format::Json);
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["order_classes"]["10"], 8);
        assert!(text.find("\"2\"").unwrap() < text.find("\"10\"").unwrap());
        assert!(text.find("label").unwrap() < text.find("size").unwrap());
    }

    #[test]
    fn csv_flattens_classes() {
        let text = sample().render(Format::Csv);
        assert_eq!(text, "label,size,fp,missing,order_classes\nclifford:2x3,5184,4.0,,1:1;2:3;10:8\n");
    }

    #[test]
    fn text_lines() {
        let text = sample().render(Format::Text);
        assert!(text.contains("order_classes: 1:1 2:3 10:8\n"));
        assert!(text.contains("missing: n/a\n"));
    }
}

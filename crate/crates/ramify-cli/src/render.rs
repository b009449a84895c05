//! Output formats. Everything goes through a `serde_json::Value` first, whose
//! maps are key-sorted, so all three formats are byte-deterministic.
//!
//! CSV and text share one convention: a record with a `rows` array renders
//! as a table of those rows, with the record's scalar fields repeated as
//! leading columns (CSV) or printed once above the table (text).

use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

pub fn render(value: &Value, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(value).expect("values serialize");
            s.push('\n');
            s
        }
        Format::Csv => csv(value),
        Format::Text => text(value),
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Text cells show integral fractions as integers, at any nesting depth.
fn plain(v: &Value) -> Value {
    match v {
        Value::String(s) => match s.strip_suffix("/1") {
            Some(n) if n.parse::<i128>().is_ok() => Value::String(n.to_string()),
            _ => v.clone(),
        },
        Value::Array(a) => Value::Array(a.iter().map(plain).collect()),
        Value::Object(m) => Value::Object(m.iter().map(|(k, x)| (k.clone(), plain(x))).collect()),
        other => other.clone(),
    }
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

/// Rows of a record, if it has a table: each row as a map.
fn rows(obj: &Map<String, Value>) -> Option<Vec<Map<String, Value>>> {
    let arr = obj.get("rows")?.as_array()?;
    Some(
        arr.iter()
            .map(|r| match r {
                Value::Object(m) => m.clone(),
                other => Map::from_iter([("value".to_string(), other.clone())]),
            })
            .collect(),
    )
}

/// Column order: first-seen across rows, so rows with optional fields
/// still line up.
fn columns(rows: &[Map<String, Value>]) -> Vec<String> {
    let mut cols: Vec<String> = Vec::new();
    for r in rows {
        for k in r.keys() {
            if !cols.contains(k) {
                cols.push(k.clone());
            }
        }
    }
    cols
}

fn csv(value: &Value) -> String {
    let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
    match value {
        Value::Object(obj) => {
            let context: Vec<(&String, &Value)> = obj.iter().filter(|(k, v)| *k != "rows" && is_scalar(v)).collect();
            match rows(obj) {
                Some(rows) => {
                    let cols = columns(&rows);
                    let header: Vec<&str> =
                        context.iter().map(|(k, _)| k.as_str()).chain(cols.iter().map(|c| c.as_str())).collect();
                    w.write_record(&header).expect("in-memory write");
                    for r in &rows {
                        let rec: Vec<String> = context
                            .iter()
                            .map(|(_, v)| cell(v))
                            .chain(cols.iter().map(|c| r.get(c).map(cell).unwrap_or_default()))
                            .collect();
                        w.write_record(&rec).expect("in-memory write");
                    }
                }
                None => {
                    w.write_record(obj.keys()).expect("in-memory write");
                    w.write_record(obj.values().map(cell)).expect("in-memory write");
                }
            }
        }
        other => {
            w.write_record([cell(other)]).expect("in-memory write");
        }
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
}

fn text(value: &Value) -> String {
    let value = &plain(value);
    let mut out = String::new();
    let Value::Object(obj) = value else {
        out.push_str(&cell(value));
        out.push('\n');
        return out;
    };
    for (k, v) in obj {
        if k != "rows" {
            out.push_str(&format!("{k}: {}\n", cell(v)));
        }
    }
    if let Some(rows) = rows(obj) {
        let cols = columns(&rows);
        let table: Vec<Vec<String>> = rows
            .iter()
            .map(|r| cols.iter().map(|c| r.get(c).map(cell).unwrap_or_default()).collect())
            .collect();
        let widths: Vec<usize> = cols
            .iter()
            .enumerate()
            .map(|(i, c)| table.iter().map(|r| r[i].chars().count()).chain([c.chars().count()]).max().unwrap())
            .collect();
        let line = |cells: Vec<&str>| {
            let padded: Vec<String> =
                cells.iter().zip(&widths).map(|(s, w)| format!("{s:<w$}")).collect();
            padded.join("  ").trim_end().to_string() + "\n"
        };
        if obj.len() > 1 {
            out.push('\n');
        }
        out.push_str(&line(cols.iter().map(|c| c.as_str()).collect()));
        for r in &table {
            out.push_str(&line(r.iter().map(|s| s.as_str()).collect()));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn csv_table_with_context() {
        let v = json!({"p": 3, "rows": [{"n": 1, "tau": "1/2"}, {"n": 2, "tau": "3/2"}], "list": [1]});
        assert_eq!(render(&v, Format::Csv), "p,n,tau\n3,1,1/2\n3,2,3/2\n");
    }

    #[test]
    fn csv_quotes_nested_values() {
        let v = json!({"a": [1, 2], "b": "x"});
        assert_eq!(render(&v, Format::Csv), "a,b\n\"[1,2]\",x\n");
    }

    #[test]
    fn text_layout() {
        let v = json!({"p": 2, "rows": [{"n": 1, "value": "long-cell"}, {"n": 10, "value": "x"}]});
        assert_eq!(render(&v, Format::Text), "p: 2\n\nn   value\n1   long-cell\n10  x\n");
    }

    #[test]
    fn text_drops_unit_denominators() {
        let v = json!({"x": "4/1", "y": ["5/2", "-3/1"], "z": "a/1"});
        assert_eq!(render(&v, Format::Text), "x: 4\ny: [\"5/2\",\"-3\"]\nz: a/1\n");
        assert!(render(&v, Format::Json).contains("4/1"));
    }
}

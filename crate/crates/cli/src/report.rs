use serde_json::{json, Value};

/// Version of the JSON layout; bump on any change to a report's fields.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// A command's result in all three output formats.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub text: String,
    pub json: Value,
    /// Header row first.
    pub csv: Vec<Vec<String>>,
    /// Process exit status.
    pub status: u8,
}

impl Report {
    pub fn render(&self, format: Format) -> anyhow::Result<String> {
        Ok(match format {
            Format::Text => self.text.clone(),
            Format::Json => {
                let mut v = json!({ "schema": SCHEMA_VERSION });
                if let (Some(out), Some(body)) = (v.as_object_mut(), self.json.as_object()) {
                    out.extend(body.clone());
                }
                serde_json::to_string_pretty(&v)? + "\n"
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(vec![]);
                for row in &self.csv {
                    w.write_record(row)?;
                }
                String::from_utf8(w.into_inner()?)?
            }
        })
    }

    pub fn to_value(&self) -> Value {
        json!({ "text": self.text, "json": self.json, "csv": self.csv, "status": self.status })
    }

    pub fn from_value(v: &Value) -> Option<Report> {
        Some(Report {
            text: v.get("text")?.as_str()?.to_string(),
            json: v.get("json")?.clone(),
            csv: serde_json::from_value(v.get("csv")?.clone()).ok()?,
            status: v.get("status")?.as_u64()? as u8,
        })
    }
}

pub fn row<I, S>(items: I) -> Vec<String>
where
    I: IntoIterator<Item = S>,
    S: ToString,
{
    items.into_iter().map(|s| s.to_string()).collect()
}

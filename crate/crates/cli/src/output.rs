//! Output formatting: 12-significant-digit numbers, config headers, and the
//! three output formats.

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Text,
}

/// Rounds to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// `x` at 12 significant digits, shortest form.
pub fn num(x: f64) -> String {
    let r = round12(x);
    if r == 0.0 {
        "0".into()
    } else if !r.is_finite() {
        r.to_string()
    } else if r.abs() < 1e-5 || r.abs() >= 1e15 {
        format!("{r:e}")
    } else {
        r.to_string()
    }
}

fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(r) = n.as_f64().and_then(|f| serde_json::Number::from_f64(round12(f))) {
                *n = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_value),
        Value::Object(map) => map.values_mut().for_each(round_value),
        _ => {}
    }
}

/// Serializes with every float rounded to 12 significant digits.
pub fn to_json<T: Serialize>(value: &T) -> Value {
    let mut v = serde_json::to_value(value).expect("report types serialize");
    round_value(&mut v);
    v
}

/// Accumulates a whole run's output so nothing is written on failure.
pub struct Output {
    format: Format,
    config: Value,
    body: String,
}

impl Output {
    pub fn new(format: Format, config: Value) -> Self {
        let mut out = Output {
            format,
            config,
            body: String::new(),
        };
        if format != Format::Json {
            let line = serde_json::to_string(&out.config).expect("config serializes");
            out.body.push_str(&format!("# qextremal {}\n# config {line}\n", env!("CARGO_PKG_VERSION")));
        }
        out
    }

    pub fn format(&self) -> Format {
        self.format
    }

    pub fn line(&mut self, s: impl AsRef<str>) {
        self.body.push_str(s.as_ref());
        self.body.push('\n');
    }

    /// Finishes a JSON run: `{"config": …, "result": …}`.
    pub fn json<T: Serialize>(&mut self, result: &T) {
        let doc = serde_json::json!({ "config": self.config, "result": to_json(result) });
        self.body.push_str(&serde_json::to_string_pretty(&doc).expect("json"));
        self.body.push('\n');
    }

    pub fn into_string(self) -> String {
        self.body
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_digits() {
        assert_eq!(num(6.0 + 4.0 * 2f64.sqrt()), "11.6568542495");
        assert_eq!(num(0.0), "0");
        assert_eq!(num(2.0), "2");
        assert_eq!(num(1.0 / 3.0), "0.333333333333");
        assert_eq!(num(3.0e-13), "3e-13");
        assert_eq!(num(123456.7890123456), "123456.789012");
    }

    #[test]
    fn json_floats_rounded() {
        let v = to_json(&serde_json::json!({ "a": [1.0 / 3.0], "b": 7 }));
        assert_eq!(v.to_string(), r#"{"a":[0.333333333333],"b":7}"#);
    }
}

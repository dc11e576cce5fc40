//! Deterministic machine-readable output. Every float is printed with
//! 17 significant digits in scientific notation, which round-trips any
//! double exactly, so identical configs produce byte-identical files.

/// 17 significant digits: enough to reconstruct the exact bit pattern.
pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}

/// A small hand-rolled JSON writer: field order and number formatting
/// are part of the output contract, so the document is assembled
/// explicitly rather than through a serializer's defaults.
pub struct JsonObject {
    fields: Vec<(String, String)>,
}

impl JsonObject {
    pub fn new() -> Self {
        JsonObject { fields: Vec::new() }
    }

    pub fn number(mut self, key: &str, value: f64) -> Self {
        self.fields.push((key.to_string(), float(value)));
        self
    }

    pub fn boolean(mut self, key: &str, value: bool) -> Self {
        self.fields.push((key.to_string(), value.to_string()));
        self
    }

    pub fn string(mut self, key: &str, value: &str) -> Self {
        self.fields.push((key.to_string(), format!("\"{value}\"")));
        self
    }

    pub fn complex(self, key: &str, re: f64, im: f64) -> Self {
        let rendered = JsonObject::new().number("re", re).number("im", im).render_inline();
        self.raw(key, rendered)
    }

    pub fn numbers(self, key: &str, values: &[f64]) -> Self {
        let rendered = format!(
            "[{}]",
            values.iter().map(|&v| float(v)).collect::<Vec<_>>().join(", ")
        );
        self.raw(key, rendered)
    }

    pub fn number_rows(self, key: &str, rows: &[Vec<f64>]) -> Self {
        let rendered = format!(
            "[\n    {}\n  ]",
            rows.iter()
                .map(|row| {
                    format!(
                        "[{}]",
                        row.iter().map(|&v| float(v)).collect::<Vec<_>>().join(", ")
                    )
                })
                .collect::<Vec<_>>()
                .join(",\n    ")
        );
        self.raw(key, rendered)
    }

    pub fn object(self, key: &str, value: JsonObject) -> Self {
        let rendered = value.render_inline();
        self.raw(key, rendered)
    }

    fn raw(mut self, key: &str, rendered: String) -> Self {
        self.fields.push((key.to_string(), rendered));
        self
    }

    fn render_inline(&self) -> String {
        format!(
            "{{{}}}",
            self.fields
                .iter()
                .map(|(k, v)| format!("\"{k}\": {v}"))
                .collect::<Vec<_>>()
                .join(", ")
        )
    }

    /// Final document: one field per line, trailing newline.
    pub fn render(&self) -> String {
        format!(
            "{{\n  {}\n}}\n",
            self.fields
                .iter()
                .map(|(k, v)| format!("\"{k}\": {v}"))
                .collect::<Vec<_>>()
                .join(",\n  ")
        )
    }
}

/// Grid CSV: header row carries the x values after an empty corner
/// cell, each following row starts with its beta value. Dot decimal
/// separator and comma delimiter, unconditionally.
pub fn grid_csv(beta_axis: &[f64], x_axis: &[f64], f_values: &[Vec<f64>]) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        ",{}\n",
        x_axis.iter().map(|&x| float(x)).collect::<Vec<_>>().join(",")
    ));
    for (beta, row) in beta_axis.iter().zip(f_values) {
        out.push_str(&format!(
            "{},{}\n",
            float(*beta),
            row.iter().map(|&f| float(f)).collect::<Vec<_>>().join(",")
        ));
    }
    out
}

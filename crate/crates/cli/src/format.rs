//! Byte-stable CSV emission.

use std::fmt::Write;

pub const SCHEMA: &str = "qpf-rdm v1";

/// Shortest representation that parses back to the same double.
pub fn float(x: f64) -> String {
    format!("{x:?}")
}

pub struct Csv {
    buf: String,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        let mut buf = format!("# {SCHEMA}\n");
        buf.push_str(&header.join(","));
        buf.push('\n');
        Self { buf }
    }

    pub fn row(&mut self, fields: &[&dyn std::fmt::Display]) {
        for (i, f) in fields.iter().enumerate() {
            if i > 0 {
                self.buf.push(',');
            }
            write!(self.buf, "{f}").expect("writing to a String");
        }
        self.buf.push('\n');
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.buf.into_bytes()
    }
}

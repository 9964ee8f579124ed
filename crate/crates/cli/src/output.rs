use std::fmt::Write as _;
use std::path::Path;

use crate::error::CliError;

/// Shortest decimal that parses back to the same `f64`, with `.` as the
/// separator. Scientific notation outside `[1e-5, 1e16)`.
pub fn num(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let a = v.abs();
    if a == 0.0 || (1e-5..1e16).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

/// Accumulates CSV text; cells are never quoted since none contain commas.
pub struct Csv {
    text: String,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        let mut text = header.join(",");
        text.push('\n');
        Csv { text }
    }

    pub fn row(&mut self, cells: &[String]) {
        let _ = writeln!(self.text, "{}", cells.join(","));
    }

    pub fn finish(self) -> String {
        self.text
    }
}

pub fn json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable output");
    s.push('\n');
    s
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format_round_trips() {
        assert_eq!(num(1.0), "1");
        assert_eq!(num(-1.0), "-1");
        assert_eq!(num(0.0), "0");
        assert_eq!(num(0.1), "0.1");
        assert_eq!(num(f64::INFINITY), "inf");
        assert_eq!(num(1.5e-7), "1.5e-7");
        assert_eq!(num(2e20), "2e20");
        for v in [
            std::f64::consts::PI,
            1.0 / 3.0,
            7.89e-5,
            1e-300,
            -123456.789,
            9.999e15,
        ] {
            assert_eq!(num(v).parse::<f64>().unwrap(), v);
        }
    }
}

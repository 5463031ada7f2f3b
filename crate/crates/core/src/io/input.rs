use crate::error::{Error, Result};
use std::fs;
use std::path::Path;

/// One number per line. Blank lines and lines starting with `#` are skipped;
/// anything else that does not parse is reported with its 1-based line
/// number.
pub fn parse_observations(text: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let s = line.trim();
        if s.is_empty() || s.starts_with('#') {
            continue;
        }
        match s.parse::<f64>() {
            Ok(x) if x.is_finite() => out.push(x),
            _ => {
                return Err(Error::Parse {
                    line: i + 1,
                    content: s.to_string(),
                })
            }
        }
    }
    Ok(out)
}

pub fn read_observations(path: &Path) -> Result<Vec<f64>> {
    parse_observations(&fs::read_to_string(path)?)
}

/// Inverse of [`parse_observations`]: shortest round-trip formatting.
pub fn format_observations(xs: &[f64]) -> String {
    let mut s = String::with_capacity(xs.len() * 20);
    for x in xs {
        s.push_str(&format!("{x:?}\n"));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comments_and_blanks() {
        let xs = parse_observations("# header\n1.5\n\n  2e3 \n#x\n-4\n").unwrap();
        assert_eq!(xs, vec![1.5, 2000.0, -4.0]);
    }

    #[test]
    fn bad_line_is_located() {
        match parse_observations("1\n2\n# c\nabc\n5\n") {
            Err(Error::Parse { line, content }) => {
                assert_eq!(line, 4);
                assert_eq!(content, "abc");
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_observations("1\nnan\n"),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn round_trip() {
        let xs = vec![0.1, 1.0 / 3.0, 1e-300, 12345.678];
        assert_eq!(parse_observations(&format_observations(&xs)).unwrap(), xs);
    }
}

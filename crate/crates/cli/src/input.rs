use std::fs;
use std::path::Path;

use l1match_core::{normalize_all, IntSequence};

use crate::Failure;

pub fn parse_integers(source: &str, origin: &str) -> Result<Vec<i64>, Failure> {
    source
        .split_whitespace()
        .enumerate()
        .map(|(i, token)| {
            token.parse().map_err(|_| {
                Failure::Parse(format!(
                    "{origin}: token {} is not an integer: {token:?}",
                    i + 1
                ))
            })
        })
        .collect()
}

pub fn read_integers(path: &Path) -> Result<Vec<i64>, Failure> {
    let origin = path.display().to_string();
    let source = fs::read_to_string(path).map_err(|e| Failure::Parse(format!("{origin}: {e}")))?;
    let values = parse_integers(&source, &origin)?;
    if values.is_empty() {
        return Err(Failure::Parse(format!("{origin}: no integers")));
    }
    Ok(values)
}

/// Reads both files and shifts them by a common offset so the smallest value
/// becomes 0. The shift is reported on standard error.
pub fn load_pair(text: &Path, pattern: &Path) -> Result<(IntSequence, IntSequence), Failure> {
    let t = read_integers(text)?;
    let p = read_integers(pattern)?;
    if p.len() > t.len() {
        return Err(Failure::Constraint(format!(
            "pattern length {} exceeds text length {}",
            p.len(),
            t.len()
        )));
    }
    let (mut seqs, shift) = normalize_all(&[&t, &p])?;
    eprintln!("normalized with shift {shift}");
    let p = seqs.pop().unwrap();
    let t = seqs.pop().unwrap();
    Ok((t, p))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_signed_tokens_across_lines() {
        assert_eq!(parse_integers(" 3 -1\n\t7\n", "x").unwrap(), vec![3, -1, 7]);
        assert!(matches!(
            parse_integers("1 2.5", "x"),
            Err(Failure::Parse(_))
        ));
        assert!(parse_integers("", "x").unwrap().is_empty());
    }
}

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use l1match_core::DistanceArray;
use serde::Serialize;

use crate::{Failure, Format};

#[derive(Serialize)]
struct Positions {
    positions: Vec<Option<u64>>,
}

pub fn render(scores: &DistanceArray, format: Format) -> String {
    match format {
        Format::Csv => {
            let mut s = String::from("position,distance\n");
            for (i, d) in scores.iter().enumerate() {
                s.push_str(&format!("{i},{d}\n"));
            }
            s
        }
        Format::Json => {
            let positions = scores.iter().map(|d| d.finite()).collect();
            let mut s =
                serde_json::to_string(&Positions { positions }).expect("plain data serializes");
            s.push('\n');
            s
        }
    }
}

pub fn emit(content: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, content)
            .map_err(|e| Failure::Constraint(format!("{}: {e}", path.display()))),
        None => io::stdout()
            .write_all(content.as_bytes())
            .map_err(|e| Failure::Constraint(e.to_string())),
    }
}

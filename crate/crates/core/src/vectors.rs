//! Plain-text vectors: whitespace-separated reals, one vector per line.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};

/// Reads one vector per nonblank line. Lines starting with `#` are skipped.
pub fn read_vectors<R: BufRead>(r: R) -> Result<Vec<Vec<f64>>> {
    let mut out = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let v = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| Error::invalid(format!("line {}: '{tok}' is not a finite number", i + 1)))
            })
            .collect::<Result<Vec<f64>>>()?;
        out.push(v);
    }
    Ok(out)
}

pub fn write_vectors<W: Write>(mut w: W, vectors: &[Vec<f64>]) -> Result<()> {
    for v in vectors {
        let line: Vec<String> = v.iter().map(f64::to_string).collect();
        writeln!(w, "{}", line.join(" "))?;
    }
    Ok(())
}

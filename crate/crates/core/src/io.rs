//! Plain-text generator matrix files.
//!
//! ```text
//! # comment
//! 3 2 4            q k n (q prime)
//! 1 0 1 1
//! 0 1 1 2
//! ```
//!
//! Extension fields put `p e m_0 .. m_e` before `k n` on the header line,
//! with the modulus coefficients listed from the constant term up.

use crate::error::{Error, Result};
use crate::ff::{make_field, Elem};
use crate::generator::GeneratorMatrix;

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn numbers(line: usize, text: &str) -> Result<Vec<u64>> {
    text.split_whitespace()
        .map(|t| {
            t.parse::<u64>()
                .map_err(|_| parse_err(line, format!("expected a nonnegative integer, found {t:?}")))
        })
        .collect()
}

/// Parses a matrix file; the matrix must have rank k and no zero column.
pub fn parse_matrix(text: &str) -> Result<GeneratorMatrix> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let Some((hline, header)) = lines.next() else {
        return Err(parse_err(1, "empty file"));
    };
    let h = numbers(hline, header)?;
    let (field, k, n) = match h.len() {
        3 => {
            let field = make_field(h[0], 1, None).map_err(|e| parse_err(hline, e.to_string()))?;
            (field, h[1], h[2])
        }
        len if len >= 6 => {
            let e = h[1];
            if len as u64 != e + 5 {
                return Err(parse_err(
                    hline,
                    format!("extension header needs p e, {} modulus coefficients, k n", e + 1),
                ));
            }
            let modulus: Vec<u32> = h[2..len - 2].iter().map(|&c| c as u32).collect();
            let field = make_field(h[0], e as u32, Some(&modulus)).map_err(|err| parse_err(hline, err.to_string()))?;
            (field, h[len - 2], h[len - 1])
        }
        _ => return Err(parse_err(hline, "header must be \"q k n\" or \"p e m_0 .. m_e k n\"")),
    };
    if k == 0 || n == 0 {
        return Err(parse_err(hline, "k and n must be positive"));
    }
    let mut rows = Vec::with_capacity(k as usize);
    for (line, text) in lines {
        if rows.len() == k as usize {
            return Err(parse_err(line, format!("expected {k} rows")));
        }
        let row = numbers(line, text)?;
        if row.len() != n as usize {
            return Err(parse_err(line, format!("expected {n} entries, found {}", row.len())));
        }
        if let Some(bad) = row.iter().find(|&&v| v >= u64::from(field.order())) {
            return Err(parse_err(line, format!("entry {bad} is not below q = {}", field.order())));
        }
        rows.push(row.into_iter().map(|v| v as Elem).collect::<Vec<_>>());
    }
    if rows.len() != k as usize {
        return Err(parse_err(text.lines().count().max(1), format!("expected {k} rows, found {}", rows.len())));
    }
    GeneratorMatrix::from_rows(&field, &rows)
}

/// Renders a matrix in the file format read by [`parse_matrix`].
pub fn format_matrix(g: &GeneratorMatrix) -> String {
    let f = g.field();
    let mut out = if f.degree() == 1 {
        format!("{} {} {}\n", f.order(), g.k(), g.n())
    } else {
        let m: Vec<String> = f.modulus().iter().map(u32::to_string).collect();
        format!("{} {} {} {} {}\n", f.characteristic(), f.degree(), m.join(" "), g.k(), g.n())
    };
    for row in g.matrix().to_rows() {
        let cells: Vec<String> = row.iter().map(u32::to_string).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}

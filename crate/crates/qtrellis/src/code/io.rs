//! Plain-text code files.
//!
//! ```text
//! # comment
//! 2 5 1
//! ZXIII
//! XZXII
//! IXZXI
//! IIXZX
//! LOGICALS
//! ...
//! ```
//!
//! A `SYMPLECTIC` line after the header switches the rows to comma-separated
//! integers, the x-block followed by the z-block, each read mod p.

use super::{CodeError, StabilizerCode};
use crate::ffield::Field;
use crate::pauli::{format_pauli, parse_pauli, PauliString};

fn perr(line: usize, msg: impl Into<String>) -> CodeError {
    CodeError::Parse { line, msg: msg.into() }
}

/// Parses comma-separated symplectic rows of `2n` integers over F_p.
pub fn parse_symplectic_rows(field: Field, n: usize, text: &str) -> Result<Vec<PauliString>, CodeError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| symplectic_row(field, n, l, i + 1))
        .collect()
}

fn symplectic_row(field: Field, n: usize, line: &str, lineno: usize) -> Result<PauliString, CodeError> {
    let vals: Vec<i64> = line
        .split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|_| perr(lineno, format!("bad integer {t:?}"))))
        .collect::<Result<_, _>>()?;
    if vals.len() != 2 * n {
        return Err(perr(lineno, format!("expected {} values, got {}", 2 * n, vals.len())));
    }
    let row: Vec<u8> = vals.iter().map(|&v| field.reduce(v)).collect();
    Ok(PauliString::from_symplectic(field, &row))
}

/// Parses a code file and validates the resulting code.
pub fn parse_code_file(text: &str) -> Result<StabilizerCode, CodeError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hline, header) = lines.next().ok_or_else(|| perr(1, "missing header \"p n k\""))?;
    let nums: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| perr(hline, format!("bad header field {t:?}"))))
        .collect::<Result<_, _>>()?;
    let [p, n, k] = nums[..] else {
        return Err(perr(hline, "header must be \"p n k\""));
    };
    let field = Field::new(p as u32).map_err(|e| perr(hline, e.to_string()))?;

    let mut symplectic = false;
    let mut in_logicals = false;
    let mut stabs = Vec::new();
    let mut logicals = Vec::new();
    for (lineno, line) in lines {
        match line {
            "SYMPLECTIC" if stabs.is_empty() && !in_logicals => symplectic = true,
            "LOGICALS" if !in_logicals => in_logicals = true,
            _ => {
                let s = if symplectic {
                    symplectic_row(field, n, line, lineno)?
                } else {
                    parse_pauli(field, line).map_err(|e| perr(lineno, e.to_string()))?
                };
                if s.n() != n {
                    return Err(perr(lineno, format!("string has {} sites, header says {n}", s.n())));
                }
                if in_logicals { &mut logicals } else { &mut stabs }.push(s);
            }
        }
    }
    if stabs.is_empty() {
        return Err(perr(hline, "no stabilizer rows"));
    }
    if k > n || stabs.len() != n - k {
        return Err(perr(hline, format!("header promises {} stabilizers, found {}", n.saturating_sub(k), stabs.len())));
    }
    StabilizerCode::new(stabs, in_logicals.then_some(logicals))
}

/// Writes a code in the Pauli-line format, including its logical operators.
pub fn write_code_file(code: &StabilizerCode) -> String {
    let mut out = format!("{} {} {}\n", code.p(), code.n(), code.k());
    for s in code.stabilizers() {
        out.push_str(&format_pauli(s));
        out.push('\n');
    }
    out.push_str("LOGICALS\n");
    for l in code.logicals() {
        out.push_str(&format_pauli(l));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_fig1_code() {
        let c = parse_code_file("2 5 1\nZXIII\nXZXII\nIXZXI\nIIXZX\n").unwrap();
        assert_eq!((c.n(), c.k()), (5, 1));
    }

    #[test]
    fn empty_stabilizer_section_is_an_error() {
        assert!(matches!(parse_code_file("2 5 1\n"), Err(CodeError::Parse { .. })));
        assert!(matches!(parse_code_file(""), Err(CodeError::Parse { .. })));
    }

    #[test]
    fn symplectic_rows_are_reduced() {
        let f3 = Field::new(3).unwrap();
        let rows = parse_symplectic_rows(f3, 2, "4,1,0,0\n0,0,5,-1\n").unwrap();
        assert_eq!(rows[0].x_exps(), &[1, 1]);
        assert_eq!(rows[1].z_exps(), &[2, 2]);
        let c = parse_code_file("3 3 1\nSYMPLECTIC\n1,1,0,0,0,0\n0,0,0,1,2,0\n").unwrap();
        assert_eq!(c.k(), 1);
    }

    #[test]
    fn round_trip_preserves_the_code() {
        let c = parse_code_file("2 5 1\nXZZXI\nIXZZX\nXIXZZ\nZXIXZ\n").unwrap();
        let again = parse_code_file(&write_code_file(&c)).unwrap();
        assert_eq!(again, c);
    }

    #[test]
    fn header_mismatch_is_reported() {
        assert!(matches!(parse_code_file("2 5 2\nXZZXI\nIXZZX\nXIXZZ\nZXIXZ\n"), Err(CodeError::Parse { .. })));
    }
}

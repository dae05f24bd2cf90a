//! Plain-text code files.
//!
//! ```text
//! m=4 type=monomial
//! 0
//! 1
//! 9
//! ```
//!
//! The first non-comment line is the header `m=<int> type=monomial|linear`.
//! A monomial file lists one generating-set mask per line in hexadecimal
//! (no prefix). A linear file lists one generator row per line: the row is
//! read as the integer `Σ c_i 2^i` (bit 0 is coordinate 0) and written as
//! exactly `ceil(2^m / 4)` hex digits, most significant digit first.
//! Output uses lowercase digits and `\n` line endings; the parser also
//! accepts uppercase digits, blank lines, and lines starting with `#`.

use super::{LinearCode, MonomialCode, MAX_M};
use crate::bitmath::{BitMatrix, BitVec};
use crate::Error;

#[derive(Clone, Debug)]
pub enum CodeFile {
    Monomial(MonomialCode),
    Linear(LinearCode),
}

impl CodeFile {
    pub fn m(&self) -> u32 {
        match self {
            CodeFile::Monomial(c) => c.m(),
            CodeFile::Linear(c) => c.n().trailing_zeros(),
        }
    }

    /// The code as a generator matrix, whichever form it was stored in.
    pub fn to_linear(&self) -> LinearCode {
        match self {
            CodeFile::Monomial(c) => c.to_linear(),
            CodeFile::Linear(c) => c.clone(),
        }
    }
}

pub fn write_monomial(code: &MonomialCode) -> String {
    let mut out = format!("m={} type=monomial\n", code.m());
    for v in code.gen_set() {
        out.push_str(&format!("{v:x}\n"));
    }
    out
}

pub fn write_linear(code: &LinearCode) -> Result<String, Error> {
    let m = code.m().ok_or_else(|| {
        Error::InvalidParameter(format!("length {} is not a power of two", code.n()))
    })?;
    let mut out = format!("m={m} type=linear\n");
    for row in code.generator().rows() {
        out.push_str(&row_to_hex(row));
        out.push('\n');
    }
    Ok(out)
}

pub fn write_code(code: &CodeFile) -> Result<String, Error> {
    match code {
        CodeFile::Monomial(c) => Ok(write_monomial(c)),
        CodeFile::Linear(c) => write_linear(c),
    }
}

fn row_to_hex(row: &BitVec) -> String {
    let digits = row.len().div_ceil(4);
    (0..digits)
        .rev()
        .map(|d| {
            let nibble = (0..4)
                .filter(|b| {
                    let i = 4 * d + b;
                    i < row.len() && row.get(i)
                })
                .fold(0u32, |acc, b| acc | 1 << b);
            char::from_digit(nibble, 16).unwrap()
        })
        .collect()
}

fn hex_to_row(s: &str, n: usize, line: usize) -> Result<BitVec, Error> {
    let digits = n.div_ceil(4);
    if s.len() != digits {
        return Err(Error::Parse {
            line,
            msg: format!("expected {digits} hex digits, found {}", s.len()),
        });
    }
    let mut row = BitVec::zeros(n);
    for (pos, ch) in s.chars().enumerate() {
        let nibble = ch.to_digit(16).ok_or_else(|| Error::Parse {
            line,
            msg: format!("invalid hex digit {ch:?}"),
        })?;
        let d = digits - 1 - pos;
        for b in 0..4 {
            if nibble >> b & 1 == 1 {
                let i = 4 * d + b;
                if i >= n {
                    return Err(Error::Parse {
                        line,
                        msg: "bit set beyond code length".into(),
                    });
                }
                row.set(i, true);
            }
        }
    }
    Ok(row)
}

fn parse_header(s: &str, line: usize) -> Result<(u32, bool), Error> {
    let err = |msg: String| Error::Parse { line, msg };
    let mut m = None;
    let mut kind = None;
    for tok in s.split_whitespace() {
        match tok.split_once('=') {
            Some(("m", v)) => {
                m = Some(v.parse::<u32>().map_err(|e| err(format!("bad m: {e}")))?)
            }
            Some(("type", "monomial")) => kind = Some(true),
            Some(("type", "linear")) => kind = Some(false),
            _ => return Err(err(format!("unexpected header token {tok:?}"))),
        }
    }
    let m = m.ok_or_else(|| err("header lacks m=".into()))?;
    if m > MAX_M {
        return Err(err(format!("m = {m} exceeds {MAX_M}")));
    }
    let kind = kind.ok_or_else(|| err("header lacks type=".into()))?;
    Ok((m, kind))
}

pub fn parse_code(text: &str) -> Result<CodeFile, Error> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "missing header".into(),
    })?;
    let (m, monomial) = parse_header(header, hline)?;
    if monomial {
        let mut masks = Vec::new();
        for (line, l) in lines {
            let v = u32::from_str_radix(l, 16).map_err(|e| Error::Parse {
                line,
                msg: format!("bad mask {l:?}: {e}"),
            })?;
            masks.push(v);
        }
        let code = MonomialCode::new(m, masks).map_err(|e| Error::Parse {
            line: hline,
            msg: e.to_string(),
        })?;
        Ok(CodeFile::Monomial(code))
    } else {
        let n = 1usize << m;
        let mut g = BitMatrix::new(n);
        for (line, l) in lines {
            g.push_row(hex_to_row(l, n, line)?);
        }
        if g.rank() != g.nrows() {
            return Err(Error::Parse {
                line: hline,
                msg: "generator rows are linearly dependent".into(),
            });
        }
        Ok(CodeFile::Linear(LinearCode::new(g)))
    }
}

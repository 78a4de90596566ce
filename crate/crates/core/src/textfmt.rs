//! Plain-text formats for matrix lists and vector-valued forms.
//!
//! Matrices: a header line `p n m` followed by `n` rows of `m` integers in
//! `[0, p)`; several matrices are separated by blank lines.
//!
//! Forms: a header line `p r n k` followed by `k` blocks of `n` rows of `n`
//! integers modulo `p^r`. Only the strict upper triangle is read.
//!
//! Lines starting with `#` are ignored in both formats.

use crate::error::{Error, Result};
use crate::exactla::Matrix;
use crate::nilring::VectorForm;

fn numbers(line: &str, lineno: usize) -> Result<Vec<u64>> {
    line.split_whitespace()
        .map(|t| {
            t.parse::<u64>()
                .map_err(|_| Error::parse(lineno, format!("not a nonnegative integer: {t:?}")))
        })
        .collect()
}

/// Non-comment lines with 1-based line numbers; blank lines are kept.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.starts_with('#'))
}

pub fn parse_matrices(text: &str) -> Result<Vec<Matrix>> {
    let mut out = Vec::new();
    let mut it = lines(text).peekable();
    loop {
        while matches!(it.peek(), Some((_, l)) if l.is_empty()) {
            it.next();
        }
        let Some((hline, header)) = it.next() else {
            break;
        };
        let h = numbers(header, hline)?;
        let [p, rows, cols] = h[..] else {
            return Err(Error::parse(hline, "expected a header `p n m`"));
        };
        if p < 2 || p > u32::MAX as u64 {
            return Err(Error::parse(hline, format!("invalid modulus {p}")));
        }
        if rows == 0 || cols == 0 {
            return Err(Error::parse(hline, "matrix dimensions must be positive"));
        }
        let mut data = Vec::with_capacity((rows * cols) as usize);
        for r in 0..rows {
            let (lineno, line) = match it.next() {
                Some((l, s)) if !s.is_empty() => (l, s),
                Some((l, _)) => return Err(Error::parse(l, format!("missing row {}", r + 1))),
                None => {
                    return Err(Error::parse(hline, format!("matrix ends after {r} of {rows} rows")))
                }
            };
            let row = numbers(line, lineno)?;
            if row.len() as u64 != cols {
                return Err(Error::parse(
                    lineno,
                    format!("expected {cols} entries, found {}", row.len()),
                ));
            }
            if let Some(x) = row.iter().find(|&&x| x >= p) {
                return Err(Error::parse(lineno, format!("entry {x} is not in [0, {p})")));
            }
            data.extend(row.iter().map(|&x| x as u32));
        }
        let m = Matrix::new(p as u32, rows as usize, cols as usize, data)
            .map_err(|e| Error::parse(hline, e.to_string()))?;
        out.push(m);
    }
    if out.is_empty() {
        return Err(Error::parse(1, "no matrices found"));
    }
    Ok(out)
}

pub fn format_matrices(mats: &[Matrix]) -> String {
    let blocks: Vec<String> = mats
        .iter()
        .map(|m| {
            let mut s = format!("{} {} {}\n", m.modulus(), m.rows(), m.cols());
            for i in 0..m.rows() {
                let row: Vec<String> = m.row(i).iter().map(u32::to_string).collect();
                s.push_str(&row.join(" "));
                s.push('\n');
            }
            s
        })
        .collect();
    blocks.join("\n")
}

pub fn parse_form(text: &str) -> Result<VectorForm> {
    let mut it = lines(text).filter(|(_, l)| !l.is_empty());
    let (hline, header) = it.next().ok_or_else(|| Error::parse(1, "empty form file"))?;
    let h = numbers(header, hline)?;
    let [p, r, n, k] = h[..] else {
        return Err(Error::parse(hline, "expected a header `p r n k`"));
    };
    if n == 0 || k == 0 || n > 4096 || k > 4096 {
        return Err(Error::parse(hline, "n and k must be positive"));
    }
    let modulus = (p as u128).checked_pow(r as u32).unwrap_or(u128::MAX);
    let mut mats = Vec::with_capacity(k as usize);
    for c in 0..k {
        let mut m = Vec::with_capacity(n as usize);
        for i in 0..n {
            let (lineno, line) = it.next().ok_or_else(|| {
                Error::parse(hline, format!("component {c} ends after {i} of {n} rows"))
            })?;
            let row = numbers(line, lineno)?;
            if row.len() as u64 != n {
                return Err(Error::parse(
                    lineno,
                    format!("expected {n} entries, found {}", row.len()),
                ));
            }
            if let Some(x) = row.iter().find(|&&x| x as u128 >= modulus) {
                return Err(Error::parse(lineno, format!("entry {x} is not below {p}^{r}")));
            }
            m.push(row.iter().map(|&x| x as u32).collect());
        }
        mats.push(m);
    }
    if let Some((lineno, _)) = it.next() {
        return Err(Error::parse(lineno, "trailing data after the last component"));
    }
    VectorForm::from_upper(p as u32, r as u32, &mats).map_err(|e| Error::parse(hline, e.to_string()))
}

pub fn format_form(form: &VectorForm) -> String {
    let mut s = format!("{} {} {} {}\n", form.p(), form.r(), form.n(), form.k());
    for (c, m) in form.mats().iter().enumerate() {
        if c > 0 {
            s.push('\n');
        }
        for row in m {
            let row: Vec<String> = row.iter().map(u32::to_string).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_matrices() {
        let text = "2 2 2\n1 0\n0 1\n\n# second\n3 1 3\n0 1 2\n";
        let m = parse_matrices(text).unwrap();
        assert_eq!(m.len(), 2);
        assert_eq!(m[1].row(0), &[0, 1, 2]);
        assert_eq!(parse_matrices(&format_matrices(&m)).unwrap(), m);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse_matrices(""), Err(Error::Parse { .. })));
        assert!(matches!(
            parse_matrices("2 1 2\n1 2\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(parse_matrices("2 2 2\n1 0\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_matrices("2 2\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_matrices("2 1 1\nx\n"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn form_round_trip() {
        let text = "3 2 3 1\n0 4 7\n0 0 2\n0 0 0\n";
        let f = parse_form(text).unwrap();
        assert_eq!(f.modulus(), 9);
        assert_eq!(f.entry(0, 2, 0), 2);
        assert_eq!(parse_form(&format_form(&f)).unwrap(), f);
        assert!(parse_form("2 1 2 1\n0 1\n").is_err());
        assert!(parse_form("2 1 2 1\n0 2\n0 0\n").is_err());
    }
}

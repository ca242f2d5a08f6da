//! Symbolic code representation, the code-file format and code-matrix rendering.
//!
//! Relay `k` maps its received `N`-vector `y_k` to `rho * (y_k A_k + conj(y_k) B_k)`,
//! so entry `(n, t)` of `A_k` scales `s_n` in slot `t` and entry `(n, t)` of `B_k`
//! scales `conj(s_n)` in slot `t`.

use std::fmt::{self, Write as _};

use num_complex::Complex64;
use num_rational::Ratio;
use serde::Serialize;

use crate::channel::ChannelRealization;
use crate::coeff::MonoCoeff;
use crate::gauss::GaussianIntMatrix;

/// Exact data rate `N / T`.
pub type Rate = Ratio<u64>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CodeError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Token {
        line: usize,
        #[source]
        source: crate::coeff::UnknownToken,
    },
    #[error("relay {relay} matrix {matrix}: expected {expected}, found {found}")]
    DimensionMismatch {
        relay: usize,
        matrix: char,
        expected: String,
        found: String,
    },
    #[error("header declares {declared} relays but {found} relay blocks are present")]
    RelayCount { declared: usize, found: usize },
    #[error("code dimensions must be positive (N={n}, K={k}, T={t})")]
    EmptyCode { n: usize, k: usize, t: usize },
    #[error("numeric rendering of the no-CSI code matrix needs channel gains")]
    MissingChannels,
    #[error("expected {expected} {what}, got {found}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
}

/// An `rows x cols` grid of [`MonoCoeff`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonoMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<MonoCoeff>,
}

impl MonoMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        MonoMatrix {
            rows,
            cols,
            entries: vec![MonoCoeff::Zero; rows * cols],
        }
    }

    /// Builds from nested rows; `None` if the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<MonoCoeff>>) -> Option<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return None;
        }
        Some(MonoMatrix {
            rows: rows.len(),
            cols,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Shorthand for tests and constructions: integers `0, 1, -1` only.
    pub fn from_ints(rows: &[&[i8]]) -> Self {
        let grid = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|v| match v {
                        0 => MonoCoeff::Zero,
                        1 => MonoCoeff::PlusOne,
                        -1 => MonoCoeff::MinusOne,
                        other => panic!("{other} is not a real unit"),
                    })
                    .collect()
            })
            .collect();
        Self::from_rows(grid).expect("ragged rows")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> MonoCoeff {
        self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: MonoCoeff) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|c| c.is_zero())
    }

    /// Non-zero entries as `(row, col, coeff)` in row-major order.
    pub fn nonzeros(&self) -> impl Iterator<Item = (usize, usize, MonoCoeff)> + '_ {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (i / self.cols, i % self.cols, *c))
    }

    pub fn row(&self, r: usize) -> &[MonoCoeff] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_gauss(&self) -> GaussianIntMatrix {
        GaussianIntMatrix::from_fn(self.rows, self.cols, |r, c| self.get(r, c).into())
    }

    /// Sub-matrix on the given rows and columns (in the given order).
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut out = MonoMatrix::zeros(rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                out.set(i, j, self.get(r, c));
            }
        }
        out
    }
}

/// The associated matrices `(A_k, B_k)` of one relay.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AssociatedPair {
    pub a: MonoMatrix,
    pub b: MonoMatrix,
}

impl AssociatedPair {
    /// Panics if the dimensions of `a` and `b` differ.
    pub fn new(a: MonoMatrix, b: MonoMatrix) -> Self {
        assert_eq!((a.rows, a.cols), (b.rows, b.cols), "A and B must share dimensions");
        AssociatedPair { a, b }
    }

    pub fn zeros(n: usize, t: usize) -> Self {
        AssociatedPair {
            a: MonoMatrix::zeros(n, t),
            b: MonoMatrix::zeros(n, t),
        }
    }
}

/// `K` relays, each with an `N x T` associated pair.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DistributedCode {
    n_symbols: usize,
    n_relays: usize,
    n_slots: usize,
    relays: Vec<AssociatedPair>,
}

impl DistributedCode {
    pub fn new(n_symbols: usize, n_slots: usize, relays: Vec<AssociatedPair>) -> Result<Self, CodeError> {
        let n_relays = relays.len();
        if n_symbols == 0 || n_slots == 0 || n_relays == 0 {
            return Err(CodeError::EmptyCode {
                n: n_symbols,
                k: n_relays,
                t: n_slots,
            });
        }
        for (k, pair) in relays.iter().enumerate() {
            for (name, m) in [('A', &pair.a), ('B', &pair.b)] {
                if (m.rows, m.cols) != (n_symbols, n_slots) {
                    return Err(CodeError::DimensionMismatch {
                        relay: k + 1,
                        matrix: name,
                        expected: format!("{n_symbols}x{n_slots}"),
                        found: format!("{}x{}", m.rows, m.cols),
                    });
                }
            }
        }
        Ok(DistributedCode {
            n_symbols,
            n_relays,
            n_slots,
            relays,
        })
    }

    pub fn n_symbols(&self) -> usize {
        self.n_symbols
    }

    pub fn n_relays(&self) -> usize {
        self.n_relays
    }

    pub fn n_slots(&self) -> usize {
        self.n_slots
    }

    pub fn relays(&self) -> &[AssociatedPair] {
        &self.relays
    }

    pub fn relay(&self, k: usize) -> &AssociatedPair {
        &self.relays[k]
    }

    pub fn rate(&self) -> Rate {
        Rate::new(self.n_symbols as u64, self.n_slots as u64)
    }

    /// Symbolic rows of the code matrix: row `k` is `s A_k + s* B_k`.
    pub fn symbolic_rows(&self) -> Vec<Vec<Vec<Term>>> {
        self.relays
            .iter()
            .map(|pair| {
                let mut row = vec![Vec::new(); self.n_slots];
                for (n, t, c) in pair.a.nonzeros() {
                    row[t].push(Term {
                        coeff: c,
                        symbol: n,
                        conjugated: false,
                    });
                }
                for (n, t, c) in pair.b.nonzeros() {
                    row[t].push(Term {
                        coeff: c,
                        symbol: n,
                        conjugated: true,
                    });
                }
                row
            })
            .collect()
    }

    /// The same code with slots reordered: output slot `j` is input slot `perm[j]`.
    pub fn permute_slots(&self, perm: &[usize]) -> Self {
        let rows: Vec<usize> = (0..self.n_symbols).collect();
        let relays = self
            .relays
            .iter()
            .map(|p| AssociatedPair::new(p.a.select(&rows, perm), p.b.select(&rows, perm)))
            .collect();
        DistributedCode::new(self.n_symbols, perm.len(), relays).expect("permutation keeps dimensions")
    }
}

/// One monomial of a code-matrix entry: `coeff * s_symbol` or `coeff * conj(s_symbol)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Term {
    pub coeff: MonoCoeff,
    /// 0-based symbol index.
    pub symbol: usize,
    pub conjugated: bool,
}

fn coeff_prefix(c: MonoCoeff) -> &'static str {
    match c {
        MonoCoeff::PlusOne => "",
        MonoCoeff::MinusOne => "-",
        MonoCoeff::PlusJ => "j",
        MonoCoeff::MinusJ => "-j",
        MonoCoeff::Zero => "0",
    }
}

/// Renders the code matrix with tokens `s_n`, `s_n*`, `h_k`, `h_k*` (1-based).
///
/// With `cpi` the rows are channel-free (`s A_k + s* B_k`); otherwise each term
/// carries `h_k` or `h_k*` as in `h_k s A_k + h_k* s* B_k`.
pub fn render_symbolic(code: &DistributedCode, cpi: bool) -> Vec<Vec<String>> {
    code.symbolic_rows()
        .into_iter()
        .enumerate()
        .map(|(k, row)| {
            row.into_iter()
                .map(|terms| {
                    if terms.is_empty() {
                        return "0".to_string();
                    }
                    let mut out = String::new();
                    for (i, term) in terms.iter().enumerate() {
                        if i > 0 {
                            out.push_str(" + ");
                        }
                        out.push_str(coeff_prefix(term.coeff));
                        let star = if term.conjugated { "*" } else { "" };
                        if !cpi {
                            let _ = write!(out, "h{}{star} ", k + 1);
                        }
                        let _ = write!(out, "s{}{star}", term.symbol + 1);
                    }
                    out
                })
                .collect()
        })
        .collect()
}

/// Numeric code matrix for the given symbol values.
///
/// The no-CSI form needs `channels`; the CPI form ignores them.
pub fn render_numeric(
    code: &DistributedCode,
    cpi: bool,
    channels: Option<&ChannelRealization>,
    symbols: &[Complex64],
) -> Result<Vec<Vec<Complex64>>, CodeError> {
    if symbols.len() != code.n_symbols {
        return Err(CodeError::LengthMismatch {
            what: "symbols",
            expected: code.n_symbols,
            found: symbols.len(),
        });
    }
    let gains: Vec<Complex64> = if cpi {
        vec![Complex64::new(1.0, 0.0); code.n_relays]
    } else {
        let ch = channels.ok_or(CodeError::MissingChannels)?;
        if ch.relays() != code.n_relays {
            return Err(CodeError::LengthMismatch {
                what: "channel gains",
                expected: code.n_relays,
                found: ch.relays(),
            });
        }
        ch.h().to_vec()
    };
    let mut x = vec![vec![Complex64::new(0.0, 0.0); code.n_slots]; code.n_relays];
    for (k, pair) in code.relays.iter().enumerate() {
        for (n, t, c) in pair.a.nonzeros() {
            x[k][t] += gains[k] * c.to_complex() * symbols[n];
        }
        for (n, t, c) in pair.b.nonzeros() {
            x[k][t] += gains[k].conj() * c.to_complex() * symbols[n].conj();
        }
    }
    Ok(x)
}

/// Parses the line-oriented code-file format.
pub fn parse_code(text: &str) -> Result<DistributedCode, CodeError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
        .peekable();

    let (hline, header) = lines.next().ok_or(CodeError::Syntax {
        line: 1,
        msg: "empty code file".into(),
    })?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let parse_dim = |s: &str| {
        s.parse::<usize>().map_err(|_| CodeError::Syntax {
            line: hline,
            msg: format!("invalid dimension `{s}`"),
        })
    };
    let (n, k, t) = match fields.as_slice() {
        ["dostbc", n, k, t] => (parse_dim(n)?, parse_dim(k)?, parse_dim(t)?),
        _ => {
            return Err(CodeError::Syntax {
                line: hline,
                msg: "expected header `dostbc N K T`".into(),
            })
        }
    };
    if n == 0 || k == 0 || t == 0 {
        return Err(CodeError::EmptyCode { n, k, t });
    }

    let mut relays = Vec::with_capacity(k);
    while let Some((line, l)) = lines.next() {
        let expected = relays.len() + 1;
        let idx = match l.split_whitespace().collect::<Vec<_>>().as_slice() {
            ["relay", idx] => idx.parse::<usize>().ok(),
            _ => None,
        };
        match idx {
            Some(i) if i == expected => {}
            _ => {
                return Err(CodeError::Syntax {
                    line,
                    msg: format!("expected `relay {expected}`, found `{l}`"),
                })
            }
        }
        let mut grids = Vec::with_capacity(2);
        for matrix in ['A', 'B'] {
            let mut rows = Vec::new();
            while let Some(&(line, l)) = lines.peek() {
                if l == "--" {
                    if matrix == 'A' {
                        lines.next();
                    }
                    break;
                }
                if l.starts_with("relay") {
                    break;
                }
                lines.next();
                let row = l
                    .split_whitespace()
                    .map(|tok| tok.parse::<MonoCoeff>().map_err(|source| CodeError::Token { line, source }))
                    .collect::<Result<Vec<_>, _>>()?;
                if row.len() != t {
                    return Err(CodeError::DimensionMismatch {
                        relay: expected,
                        matrix,
                        expected: format!("{t} columns"),
                        found: format!("{} columns on line {line}", row.len()),
                    });
                }
                rows.push(row);
            }
            if rows.len() != n {
                return Err(CodeError::DimensionMismatch {
                    relay: expected,
                    matrix,
                    expected: format!("{n} rows"),
                    found: format!("{} rows", rows.len()),
                });
            }
            grids.push(MonoMatrix::from_rows(rows).expect("rows checked"));
        }
        let b = grids.pop().unwrap();
        let a = grids.pop().unwrap();
        relays.push(AssociatedPair::new(a, b));
    }
    if relays.len() != k {
        return Err(CodeError::RelayCount {
            declared: k,
            found: relays.len(),
        });
    }
    DistributedCode::new(n, t, relays)
}

/// Canonical text form; `parse_code(&serialize_code(c)) == c`.
pub fn serialize_code(code: &DistributedCode) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "dostbc {} {} {}", code.n_symbols, code.n_relays, code.n_slots);
    for (k, pair) in code.relays.iter().enumerate() {
        let _ = writeln!(out, "relay {}", k + 1);
        write_grid(&mut out, &pair.a);
        out.push_str("--\n");
        write_grid(&mut out, &pair.b);
    }
    out
}

fn write_grid(out: &mut String, m: &MonoMatrix) {
    for r in 0..m.rows {
        let line: Vec<String> = m.row(r).iter().map(|c| format!("{:>2}", c.token())).collect();
        out.push_str(line.join(" ").trim_start());
        out.push('\n');
    }
}

impl fmt::Display for DistributedCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in render_symbolic(self, true) {
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Serde helper: rates as `"p/q"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RateString(pub Rate);

impl Serialize for RateString {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{}/{}", self.0.numer(), self.0.denom()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct;

    const ALAMOUTI_FILE: &str = "\
# Alamouti rows s*A_1 and s^* B_2
dostbc 2 2 2
relay 1
1 0
0 1
--
0 0
0 0
relay 2
0 0
0 0
--
0 1
-1 0
";

    #[test]
    fn parses_alamouti_structure() {
        let code = parse_code(ALAMOUTI_FILE).unwrap();
        assert_eq!(code.rate(), Rate::new(1, 1));
        assert_eq!(code, construct::alamouti());
        assert_eq!(
            render_symbolic(&code, true),
            vec![vec!["s1", "s2"], vec!["-s2*", "s1*"]]
        );
    }

    #[test]
    fn extra_row_is_dimension_mismatch() {
        let text = "dostbc 2 1 2\nrelay 1\n1 0\n0 1\n0 0\n--\n0 0\n0 0\n";
        match parse_code(text) {
            Err(CodeError::DimensionMismatch { relay: 1, matrix: 'A', .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            parse_code("dostbc 1 1 1\nrelay 1\nk\n--\n0\n"),
            Err(CodeError::Token { line: 3, .. })
        ));
        assert!(matches!(
            parse_code("dostbc 1 2 1\nrelay 1\n1\n--\n0\n"),
            Err(CodeError::RelayCount { declared: 2, found: 1 })
        ));
        assert!(matches!(parse_code("dostbc 1 1\n"), Err(CodeError::Syntax { .. })));
        assert!(matches!(
            parse_code("dostbc 1 1 2\nrelay 1\n1\n--\n0 0\n"),
            Err(CodeError::DimensionMismatch { .. })
        ));
        assert!(matches!(parse_code(""), Err(CodeError::Syntax { .. })));
        assert!(matches!(parse_code("dostbc 0 1 1\n"), Err(CodeError::EmptyCode { .. })));
    }

    #[test]
    fn empty_relay_list_rejected() {
        assert!(matches!(DistributedCode::new(2, 2, vec![]), Err(CodeError::EmptyCode { .. })));
    }

    #[test]
    fn serialization_is_canonical() {
        let code = construct::alamouti();
        let text = serialize_code(&code);
        assert_eq!(text, serialize_code(&parse_code(&text).unwrap()));
        assert!(text.starts_with("dostbc 2 2 2\nrelay 1\n"));
    }

    #[test]
    fn numeric_rendering_no_csi() {
        let code = construct::alamouti();
        let h = vec![Complex64::new(0.3, -1.1), Complex64::new(-0.7, 0.2)];
        let ch = ChannelRealization::new(h.clone(), vec![Complex64::new(1.0, 0.0); 2]);
        let s = [Complex64::new(1.0, 2.0), Complex64::new(-0.5, 0.25)];
        let x = render_numeric(&code, false, Some(&ch), &s).unwrap();
        assert_eq!(x[0], vec![h[0] * s[0], h[0] * s[1]]);
        assert_eq!(x[1], vec![-h[1].conj() * s[1].conj(), h[1].conj() * s[0].conj()]);
        assert_eq!(
            render_symbolic(&code, false),
            vec![vec!["h1 s1", "h1 s2"], vec!["-h2* s2*", "h2* s1*"]]
        );
        assert_eq!(render_numeric(&code, false, None, &s), Err(CodeError::MissingChannels));
        let xc = render_numeric(&code, true, None, &s).unwrap();
        assert_eq!(xc[1], vec![-s[1].conj(), s[0].conj()]);
    }
}

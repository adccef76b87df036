//! Binary CSS check-matrix pairs.
//!
//! Indices are 0-based inside the crate. The `css-support v1` text format and
//! every user-facing report are 1-based.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::{BitRow, RowBasis};

/// Sparse binary matrix viewed as a Tanner graph.
///
/// Edges are numbered row-major: the `k`-th entry of row `i` is edge
/// `row_offsets[i] + k`. `col_edges[j]` lists the edges at column `j` in
/// increasing row order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TannerGraph {
    n_cols: usize,
    rows: Vec<Vec<usize>>,
    cols: Vec<Vec<usize>>,
    row_offsets: Vec<usize>,
    col_edges: Vec<Vec<usize>>,
    edge_col: Vec<usize>,
    edge_row: Vec<usize>,
}

impl TannerGraph {
    /// Builds the graph from row supports. Each support is sorted; callers are
    /// responsible for range and duplicate checks.
    pub fn from_rows(n_cols: usize, rows: Vec<Vec<usize>>) -> Self {
        let mut rows = rows;
        for r in &mut rows {
            r.sort_unstable();
        }
        let mut cols = vec![Vec::new(); n_cols];
        let mut col_edges = vec![Vec::new(); n_cols];
        let mut row_offsets = Vec::with_capacity(rows.len() + 1);
        let mut edge_col = Vec::new();
        let mut edge_row = Vec::new();
        for (i, r) in rows.iter().enumerate() {
            row_offsets.push(edge_col.len());
            for &j in r {
                col_edges[j].push(edge_col.len());
                cols[j].push(i);
                edge_col.push(j);
                edge_row.push(i);
            }
        }
        row_offsets.push(edge_col.len());
        TannerGraph {
            n_cols,
            rows,
            cols,
            row_offsets,
            col_edges,
            edge_col,
            edge_row,
        }
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn n_edges(&self) -> usize {
        self.edge_col.len()
    }

    /// Column support of row `i`.
    pub fn row(&self, i: usize) -> &[usize] {
        &self.rows[i]
    }

    /// Row support of column `j`.
    pub fn col(&self, j: usize) -> &[usize] {
        &self.cols[j]
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn cols(&self) -> &[Vec<usize>] {
        &self.cols
    }

    /// Edge ids of row `i`, aligned with `row(i)`.
    pub fn row_edges(&self, i: usize) -> std::ops::Range<usize> {
        self.row_offsets[i]..self.row_offsets[i + 1]
    }

    /// Edge ids at column `j`, aligned with `col(j)`.
    pub fn col_edges(&self, j: usize) -> &[usize] {
        &self.col_edges[j]
    }

    pub fn edge_col(&self, e: usize) -> usize {
        self.edge_col[e]
    }

    pub fn edge_row(&self, e: usize) -> usize {
        self.edge_row[e]
    }

    /// Parity of `bits` over every row.
    pub fn apply(&self, bits: &[u8]) -> Vec<u8> {
        self.rows
            .iter()
            .map(|r| r.iter().fold(0u8, |acc, &j| acc ^ (bits[j] & 1)))
            .collect()
    }
}

/// A CSS code given by its two check matrices.
///
/// Rows of `hx` are X-type checks and constrain the z-component of an error;
/// rows of `hz` are Z-type checks and constrain the x-component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CssCode {
    n: usize,
    hx: TannerGraph,
    hz: TannerGraph,
}

/// A Pauli error as two binary assignments of length n.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PauliError {
    pub x: Vec<u8>,
    pub z: Vec<u8>,
}

impl PauliError {
    pub fn zeros(n: usize) -> Self {
        PauliError {
            x: vec![0; n],
            z: vec![0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.x.iter().chain(&self.z).all(|&b| b == 0)
    }

    pub fn weight(&self) -> usize {
        self.x
            .iter()
            .zip(&self.z)
            .filter(|(&a, &b)| a | b != 0)
            .count()
    }

    /// Componentwise GF(2) sum.
    pub fn add(&self, other: &PauliError) -> PauliError {
        PauliError {
            x: self.x.iter().zip(&other.x).map(|(a, b)| a ^ b).collect(),
            z: self.z.iter().zip(&other.z).map(|(a, b)| a ^ b).collect(),
        }
    }
}

/// Syndrome pair. `sz` holds the X-type check outcomes (length mX, detecting
/// z), `sx` the Z-type check outcomes (length mZ, detecting x).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Syndromes {
    pub sz: Vec<u8>,
    pub sx: Vec<u8>,
}

impl Syndromes {
    pub fn zeros(code: &CssCode) -> Self {
        Syndromes {
            sz: vec![0; code.mx()],
            sx: vec![0; code.mz()],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.sz.iter().chain(&self.sx).all(|&b| b == 0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResidualClass {
    Exact,
    Stabilizer,
    Logical,
    SyndromeMismatch,
}

/// Structural certificate of a CSS pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub n: usize,
    pub mx: usize,
    pub mz: usize,
    pub orthogonal: bool,
    pub col_weights_x: BTreeMap<usize, usize>,
    pub col_weights_z: BTreeMap<usize, usize>,
    pub row_weights_x: BTreeMap<usize, usize>,
    pub row_weights_z: BTreeMap<usize, usize>,
    /// |row_i(HX) ∩ row_k(HZ)| -> number of (i, k) pairs.
    pub intersection_census: BTreeMap<usize, usize>,
    /// 1-based (HX row, HZ row) pairs with odd overlap.
    pub odd_pairs: Vec<(usize, usize)>,
}

impl ValidationReport {
    pub fn to_text(&self) -> String {
        fn hist(h: &BTreeMap<usize, usize>) -> String {
            h.iter()
                .map(|(k, v)| format!("{k}:{v}"))
                .collect::<Vec<_>>()
                .join(" ")
        }
        let mut s = String::new();
        let _ = writeln!(s, "n={} mX={} mZ={}", self.n, self.mx, self.mz);
        let _ = writeln!(s, "orthogonal={}", self.orthogonal);
        let _ = writeln!(s, "row_weights_x {}", hist(&self.row_weights_x));
        let _ = writeln!(s, "row_weights_z {}", hist(&self.row_weights_z));
        let _ = writeln!(s, "col_weights_x {}", hist(&self.col_weights_x));
        let _ = writeln!(s, "col_weights_z {}", hist(&self.col_weights_z));
        let _ = writeln!(s, "census {}", hist(&self.intersection_census));
        for (i, k) in &self.odd_pairs {
            let _ = writeln!(s, "odd_overlap HX{i} HZ{k}");
        }
        s
    }
}

fn check_rows(matrix: &'static str, n: usize, rows: &[Vec<usize>]) -> Result<()> {
    for (i, r) in rows.iter().enumerate() {
        let mut seen = vec![false; n];
        for &j in r {
            if j >= n {
                return Err(Error::IndexOutOfRange {
                    matrix,
                    row: i + 1,
                    index: j + 1,
                    n,
                });
            }
            if std::mem::replace(&mut seen[j], true) {
                return Err(Error::DuplicateIndex {
                    matrix,
                    row: i + 1,
                    index: j + 1,
                });
            }
        }
    }
    Ok(())
}

impl CssCode {
    /// Builds a code from 0-based row supports. Orthogonality is not checked
    /// here; see [`CssCode::validate`].
    pub fn new(n: usize, hx_rows: Vec<Vec<usize>>, hz_rows: Vec<Vec<usize>>) -> Result<Self> {
        check_rows("HX", n, &hx_rows)?;
        check_rows("HZ", n, &hz_rows)?;
        Ok(CssCode {
            n,
            hx: TannerGraph::from_rows(n, hx_rows),
            hz: TannerGraph::from_rows(n, hz_rows),
        })
    }

    /// Same as [`CssCode::new`] but with 1-based supports, as printed in tables.
    pub fn from_one_based(
        n: usize,
        hx_rows: &[&[usize]],
        hz_rows: &[&[usize]],
    ) -> Result<Self> {
        let shift = |matrix: &'static str, rows: &[&[usize]]| -> Result<Vec<Vec<usize>>> {
            rows.iter()
                .enumerate()
                .map(|(i, r)| {
                    r.iter()
                        .map(|&j| {
                            j.checked_sub(1).ok_or(Error::IndexOutOfRange {
                                matrix,
                                row: i + 1,
                                index: 0,
                                n,
                            })
                        })
                        .collect()
                })
                .collect()
        };
        Self::new(n, shift("HX", hx_rows)?, shift("HZ", hz_rows)?)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mx(&self) -> usize {
        self.hx.n_rows()
    }

    pub fn mz(&self) -> usize {
        self.hz.n_rows()
    }

    pub fn hx(&self) -> &TannerGraph {
        &self.hx
    }

    pub fn hz(&self) -> &TannerGraph {
        &self.hz
    }

    pub fn check_error(&self, e: &PauliError) -> Result<()> {
        if e.x.len() != self.n || e.z.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "error has lengths ({}, {}), code has n = {}",
                e.x.len(),
                e.z.len(),
                self.n
            )));
        }
        Ok(())
    }

    pub fn check_syndromes(&self, s: &Syndromes) -> Result<()> {
        if s.sz.len() != self.mx() || s.sx.len() != self.mz() {
            return Err(Error::DimensionMismatch(format!(
                "syndromes have lengths (sZ {}, sX {}), code has mX = {}, mZ = {}",
                s.sz.len(),
                s.sx.len(),
                self.mx(),
                self.mz()
            )));
        }
        Ok(())
    }

    /// `sZ = HX z`, `sX = HZ x` over GF(2).
    pub fn syndrome(&self, e: &PauliError) -> Result<Syndromes> {
        self.check_error(e)?;
        Ok(Syndromes {
            sz: self.hx.apply(&e.z),
            sx: self.hz.apply(&e.x),
        })
    }

    pub fn validate(&self) -> ValidationReport {
        fn weights<'a>(it: impl Iterator<Item = &'a Vec<usize>>) -> BTreeMap<usize, usize> {
            let mut h = BTreeMap::new();
            for r in it {
                *h.entry(r.len()).or_insert(0) += 1;
            }
            h
        }
        let mut census = BTreeMap::new();
        let mut odd_pairs = Vec::new();
        let mut mark = vec![false; self.n];
        for (i, rx) in self.hx.rows().iter().enumerate() {
            for &j in rx {
                mark[j] = true;
            }
            for (k, rz) in self.hz.rows().iter().enumerate() {
                let overlap = rz.iter().filter(|&&j| mark[j]).count();
                *census.entry(overlap).or_insert(0) += 1;
                if overlap % 2 == 1 {
                    odd_pairs.push((i + 1, k + 1));
                }
            }
            for &j in rx {
                mark[j] = false;
            }
        }
        ValidationReport {
            n: self.n,
            mx: self.mx(),
            mz: self.mz(),
            orthogonal: odd_pairs.is_empty(),
            col_weights_x: weights(self.hx.cols().iter()),
            col_weights_z: weights(self.hz.cols().iter()),
            row_weights_x: weights(self.hx.rows().iter()),
            row_weights_z: weights(self.hz.rows().iter()),
            intersection_census: census,
            odd_pairs,
        }
    }

    /// Classifies `true_error + estimate` against the stabilizer group, taking
    /// HX rows as X-type (x-component) and HZ rows as Z-type (z-component)
    /// generators.
    pub fn classify_residual(
        &self,
        true_error: &PauliError,
        estimate: &PauliError,
    ) -> Result<ResidualClass> {
        ResidualClassifier::new(self).classify(true_error, estimate)
    }

    /// Serializes to the `css-support v1` format.
    pub fn to_support_table(&self) -> String {
        let mut s = String::from("css-support v1\n");
        let _ = writeln!(s, "n {}", self.n);
        let _ = writeln!(s, "mX {}", self.mx());
        let _ = writeln!(s, "mZ {}", self.mz());
        for (name, g) in [("HX", &self.hx), ("HZ", &self.hz)] {
            for (i, r) in g.rows().iter().enumerate() {
                let _ = write!(s, "{name} {}:", i + 1);
                for j in r {
                    let _ = write!(s, " {}", j + 1);
                }
                s.push('\n');
            }
        }
        s
    }
}

/// Residual classifier that reuses the row-space bases across many calls.
#[derive(Debug, Clone)]
pub struct ResidualClassifier<'a> {
    code: &'a CssCode,
    x_basis: RowBasis,
    z_basis: RowBasis,
}

impl<'a> ResidualClassifier<'a> {
    pub fn new(code: &'a CssCode) -> Self {
        ResidualClassifier {
            code,
            x_basis: RowBasis::from_supports(code.n, code.hx.rows()),
            z_basis: RowBasis::from_supports(code.n, code.hz.rows()),
        }
    }

    pub fn classify(&self, true_error: &PauliError, estimate: &PauliError) -> Result<ResidualClass> {
        self.code.check_error(true_error)?;
        self.code.check_error(estimate)?;
        let r = true_error.add(estimate);
        if !self.code.syndrome(&r)?.is_zero() {
            return Ok(ResidualClass::SyndromeMismatch);
        }
        if r.is_zero() {
            return Ok(ResidualClass::Exact);
        }
        let x_ok = self.x_basis.contains(&BitRow::from_bits(&r.x));
        let z_ok = self.z_basis.contains(&BitRow::from_bits(&r.z));
        Ok(if x_ok && z_ok {
            ResidualClass::Stabilizer
        } else {
            ResidualClass::Logical
        })
    }
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Parses the `css-support v1` format. Blank lines and lines starting with
/// `#` are skipped.
pub fn parse_css_support_table(text: &str) -> Result<CssCode> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let mut next = |what: &str| {
        lines
            .next()
            .ok_or_else(|| parse_err(0, format!("unexpected end of input, expected {what}")))
    };

    let (ln, header) = next("header")?;
    if header.split_whitespace().collect::<Vec<_>>() != ["css-support", "v1"] {
        return Err(parse_err(ln, format!("bad header `{header}`, expected `css-support v1`")));
    }
    let mut field = |key: &str| -> Result<usize> {
        let (ln, l) = next(key)?;
        let mut it = l.split_whitespace();
        match (it.next(), it.next(), it.next()) {
            (Some(k), Some(v), None) if k == key => v
                .parse()
                .map_err(|_| parse_err(ln, format!("`{key}` value `{v}` is not a count"))),
            _ => Err(parse_err(ln, format!("expected `{key} <count>`, found `{l}`"))),
        }
    };
    let n = field("n")?;
    let mx = field("mX")?;
    let mz = field("mZ")?;

    let mut read_rows = |matrix: &'static str, m: usize| -> Result<Vec<Vec<usize>>> {
        let mut rows = Vec::with_capacity(m);
        for i in 1..=m {
            let (ln, l) = lines.next().ok_or(Error::MissingRows {
                matrix,
                expected: m,
                found: i - 1,
            })?;
            let (head, body) = l
                .split_once(':')
                .ok_or_else(|| parse_err(ln, format!("expected `{matrix} {i}: ...`")))?;
            let mut h = head.split_whitespace();
            let label = h.next();
            if label != Some(matrix) {
                if label == Some("HX") || label == Some("HZ") {
                    return Err(Error::MissingRows {
                        matrix,
                        expected: m,
                        found: i - 1,
                    });
                }
                return Err(parse_err(ln, format!("expected `{matrix} {i}: ...`")));
            }
            let idx: usize = h
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| parse_err(ln, "missing row number"))?;
            if idx != i || h.next().is_some() {
                return Err(parse_err(ln, format!("expected row {i} of {matrix}, found `{head}`")));
            }
            let mut row = Vec::new();
            let mut seen = std::collections::HashSet::new();
            for tok in body.split_whitespace() {
                let j: usize = tok
                    .parse()
                    .map_err(|_| parse_err(ln, format!("bad column index `{tok}`")))?;
                if j == 0 || j > n {
                    return Err(Error::IndexOutOfRange {
                        matrix,
                        row: i,
                        index: j,
                        n,
                    });
                }
                if !seen.insert(j) {
                    return Err(Error::DuplicateIndex {
                        matrix,
                        row: i,
                        index: j,
                    });
                }
                row.push(j - 1);
            }
            rows.push(row);
        }
        Ok(rows)
    };
    let hx = read_rows("HX", mx)?;
    let hz = read_rows("HZ", mz)?;
    if let Some((ln, l)) = lines.next() {
        return Err(parse_err(ln, format!("trailing content `{l}`")));
    }
    CssCode::new(n, hx, hz)
}

/// Parses one matrix in the standard alist format, returning `(n_cols, rows)`
/// with 0-based supports. Zero padding entries are ignored.
pub fn parse_alist(text: &str) -> Result<(usize, Vec<Vec<usize>>)> {
    let mut nums = Vec::new();
    for (k, l) in text.lines().enumerate() {
        for tok in l.split_whitespace() {
            let v: usize = tok
                .parse()
                .map_err(|_| parse_err(k + 1, format!("bad integer `{tok}`")))?;
            nums.push(v);
        }
    }
    let mut it = nums.into_iter();
    let mut take = |what: &str| it.next().ok_or_else(|| parse_err(0, format!("alist truncated at {what}")));
    let n = take("column count")?;
    let m = take("row count")?;
    let max_col = take("max column weight")?;
    let max_row = take("max row weight")?;
    let col_w: Vec<usize> = (0..n).map(|_| take("column weights")).collect::<Result<_>>()?;
    let row_w: Vec<usize> = (0..m).map(|_| take("row weights")).collect::<Result<_>>()?;
    let mut cols = Vec::with_capacity(n);
    for (j, &w) in col_w.iter().enumerate() {
        let entries: Vec<usize> = (0..max_col).map(|_| take("column lists")).collect::<Result<_>>()?;
        let c: Vec<usize> = entries.into_iter().filter(|&v| v != 0).collect();
        if c.len() != w {
            return Err(parse_err(0, format!("alist column {} lists {} entries, weight says {w}", j + 1, c.len())));
        }
        cols.push(c);
    }
    let mut rows = Vec::with_capacity(m);
    for (i, &w) in row_w.iter().enumerate() {
        let entries: Vec<usize> = (0..max_row).map(|_| take("row lists")).collect::<Result<_>>()?;
        let r: Vec<usize> = entries.into_iter().filter(|&v| v != 0).collect();
        if r.len() != w {
            return Err(parse_err(0, format!("alist row {} lists {} entries, weight says {w}", i + 1, r.len())));
        }
        for &j in &r {
            if j > n {
                return Err(Error::IndexOutOfRange {
                    matrix: "alist",
                    row: i + 1,
                    index: j,
                    n,
                });
            }
        }
        rows.push(r.into_iter().map(|j| j - 1).collect::<Vec<_>>());
    }
    // the column lists must be the transpose of the row lists
    let mut transposed = vec![Vec::new(); n];
    for (i, r) in rows.iter().enumerate() {
        for &j in r {
            transposed[j].push(i + 1);
        }
    }
    for (j, (mut c, t)) in cols.into_iter().zip(transposed).enumerate() {
        c.sort_unstable();
        if c != t {
            return Err(parse_err(0, format!("alist column {} disagrees with row lists", j + 1)));
        }
    }
    Ok((n, rows))
}

impl CssCode {
    /// Loads a code from two alist files, one per check matrix.
    pub fn from_alist_pair(hx_text: &str, hz_text: &str) -> Result<Self> {
        let (nx, hx) = parse_alist(hx_text)?;
        let (nz, hz) = parse_alist(hz_text)?;
        if nx != nz {
            return Err(Error::DimensionMismatch(format!(
                "HX has {nx} columns, HZ has {nz}"
            )));
        }
        Self::new(nx, hx, hz)
    }
}

const PAPER24_HX: [[usize; 6]; 8] = [
    [10, 14, 17, 19, 21, 22],
    [2, 3, 4, 7, 8, 24],
    [3, 4, 6, 9, 11, 16],
    [1, 5, 11, 12, 13, 18],
    [5, 9, 10, 12, 14, 17],
    [2, 6, 8, 15, 16, 20],
    [1, 7, 18, 20, 23, 24],
    [13, 15, 19, 21, 22, 23],
];

const PAPER24_HZ: [[usize; 6]; 8] = [
    [5, 15, 17, 18, 20, 22],
    [2, 8, 12, 13, 14, 19],
    [1, 3, 4, 10, 14, 18],
    [4, 9, 10, 21, 23, 24],
    [3, 8, 9, 15, 17, 19],
    [1, 7, 11, 16, 20, 24],
    [2, 6, 7, 11, 13, 23],
    [5, 6, 12, 16, 21, 22],
];

/// The length-24 (2,6)-regular CSS pair with 8 checks of each type.
pub fn paper_code_24() -> CssCode {
    let hx: Vec<&[usize]> = PAPER24_HX.iter().map(|r| r.as_slice()).collect();
    let hz: Vec<&[usize]> = PAPER24_HZ.iter().map(|r| r.as_slice()).collect();
    CssCode::from_one_based(24, &hx, &hz).expect("built-in code is well formed")
}

/// The 4-qubit code HX = [{3,4}], HZ = [{1,2}] whose coupled factor graph is a
/// forest.
pub fn tree_code_4() -> CssCode {
    CssCode::from_one_based(4, &[&[3, 4]], &[&[1, 2]]).expect("well formed")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn indicator(n: usize, ones: &[usize]) -> Vec<u8> {
        let mut v = vec![0; n];
        for &j in ones {
            v[j - 1] = 1;
        }
        v
    }

    #[test]
    fn parse_row_of_code_24() {
        let code = parse_css_support_table(&paper_code_24().to_support_table()).unwrap();
        assert_eq!(code.hx().row(0), &[9, 13, 16, 18, 20, 21]);
        assert_eq!(code, paper_code_24());
    }

    #[test]
    fn parse_tree_code() {
        let text = "css-support v1\nn 4\nmX 1\nmZ 1\nHX 1: 3 4\nHZ 1: 1 2\n";
        let code = parse_css_support_table(text).unwrap();
        assert_eq!(code, tree_code_4());
        assert!(code.validate().orthogonal);
        assert_eq!(code.validate().intersection_census, BTreeMap::from([(0, 1)]));
    }

    #[test]
    fn parse_rejects_out_of_range() {
        let mut text = paper_code_24().to_support_table();
        text = text.replace("HX 1: 10 14", "HX 1: 25 14");
        assert!(matches!(
            parse_css_support_table(&text),
            Err(Error::IndexOutOfRange { index: 25, row: 1, .. })
        ));
    }

    #[test]
    fn parse_rejects_bad_header_duplicates_and_missing_rows() {
        assert!(matches!(
            parse_css_support_table("css-support v2\nn 1\nmX 0\nmZ 0\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_css_support_table("css-support v1\nn 3\nmX 1\nmZ 0\nHX 1: 1 2 1\n"),
            Err(Error::DuplicateIndex { index: 1, .. })
        ));
        assert!(matches!(
            parse_css_support_table("css-support v1\nn 3\nmX 2\nmZ 1\nHX 1: 1 2\nHZ 1: 1 2\n"),
            Err(Error::MissingRows { matrix: "HX", expected: 2, found: 1 })
        ));
        assert!(matches!(
            parse_css_support_table("css-support v1\nn 3\nmX 1\nmZ 1\nHX 1: 1 2\n"),
            Err(Error::MissingRows { matrix: "HZ", .. })
        ));
        assert!(matches!(
            parse_css_support_table("css-support v1\nn x\n"),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn code_24_queries() {
        let code = paper_code_24();
        assert_eq!(code.hz().row(0), &[4, 14, 16, 17, 19, 21]);
        // column 10 sits in HX rows 1 and 5
        assert_eq!(code.hx().col(9), &[0, 4]);
        let report = code.validate();
        assert!(report.orthogonal);
        assert_eq!(report.col_weights_x, BTreeMap::from([(2, 24)]));
        assert_eq!(report.col_weights_z, BTreeMap::from([(2, 24)]));
        assert_eq!(report.row_weights_x, BTreeMap::from([(6, 8)]));
        assert_eq!(report.row_weights_z, BTreeMap::from([(6, 8)]));
        assert_eq!(
            report.intersection_census,
            BTreeMap::from([(0, 17), (2, 46), (4, 1)])
        );
    }

    #[test]
    fn transpose_consistency() {
        let code = paper_code_24();
        for g in [code.hx(), code.hz()] {
            for i in 0..g.n_rows() {
                for j in 0..g.n_cols() {
                    assert_eq!(g.row(i).contains(&j), g.col(j).contains(&i));
                }
                for (e, &j) in g.row_edges(i).zip(g.row(i)) {
                    assert_eq!(g.edge_col(e), j);
                    assert_eq!(g.edge_row(e), i);
                }
            }
            for j in 0..g.n_cols() {
                for (&e, &i) in g.col_edges(j).iter().zip(g.col(j)) {
                    assert_eq!((g.edge_row(e), g.edge_col(e)), (i, j));
                }
            }
        }
    }

    #[test]
    fn non_orthogonal_pair() {
        let code = CssCode::from_one_based(3, &[&[1, 2]], &[&[2, 3]]).unwrap();
        let report = code.validate();
        assert!(!report.orthogonal);
        assert_eq!(report.odd_pairs, vec![(1, 1)]);
    }

    #[test]
    fn single_qubit_syndromes() {
        let code = paper_code_24();
        let mut e = PauliError::zeros(24);
        assert!(code.syndrome(&e).unwrap().is_zero());
        e.x[4] = 1;
        let s = code.syndrome(&e).unwrap();
        assert_eq!(s.sx, indicator(8, &[1, 8]));
        assert!(s.sz.iter().all(|&b| b == 0));
        let mut e = PauliError::zeros(24);
        e.z[9] = 1;
        let s = code.syndrome(&e).unwrap();
        assert_eq!(s.sz, indicator(8, &[1, 5]));
        assert!(s.sx.iter().all(|&b| b == 0));
        assert!(code.syndrome(&PauliError::zeros(23)).is_err());
    }

    #[test]
    fn residual_classes() {
        let code = tree_code_4();
        let zero = PauliError::zeros(4);
        assert_eq!(code.classify_residual(&zero, &zero).unwrap(), ResidualClass::Exact);

        // x on {1,2} commutes with HZ = {1,2} but is not generated by HX = {3,4}
        let mut est = zero.clone();
        est.x = indicator(4, &[1, 2]);
        assert_eq!(code.classify_residual(&zero, &est).unwrap(), ResidualClass::Logical);

        // x on {3,4} is the X-type stabilizer
        est.x = indicator(4, &[3, 4]);
        assert_eq!(code.classify_residual(&zero, &est).unwrap(), ResidualClass::Stabilizer);

        est.x = indicator(4, &[1]);
        assert_eq!(
            code.classify_residual(&zero, &est).unwrap(),
            ResidualClass::SyndromeMismatch
        );
        let classifier = ResidualClassifier::new(&code);
        assert_eq!(classifier.classify(&zero, &est).unwrap(), ResidualClass::SyndromeMismatch);
    }

    #[test]
    fn alist_pair_roundtrip() {
        let hx = "4 1\n1 2\n0 0 1 1\n2\n0\n0\n1\n1\n3 4\n";
        let hz = "4 1\n1 2\n1 1 0 0\n2\n1\n1\n0\n0\n1 2\n";
        let code = CssCode::from_alist_pair(hx, hz).unwrap();
        assert_eq!(code, tree_code_4());
        let bad = "4 1\n1 2\n1 1 0 0\n2\n1\n0\n0\n1\n1 2\n";
        assert!(CssCode::from_alist_pair(hx, bad).is_err());
    }
}

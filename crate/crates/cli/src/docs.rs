//! JSON and CSV file formats.
//!
//! Complex numbers are `[re, im]` pairs and words use the string encoding of
//! [`Word::encode`]. Maps are written in graded-lexicographic word order.

use std::collections::BTreeMap;
use std::path::Path;

use indexmap::IndexMap;
use ncszego_core::linalg::{CMatrix, C64};
use ncszego_core::szego::SzegoFamily;
use ncszego_core::words::{self, Word};
use ncszego_core::{MatrixTuple, MomentSpec, NcPoly, ParamSpec};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub type Cx = [f64; 2];

fn cx(z: C64) -> Cx {
    [z.re, z.im]
}

fn from_cx(v: Cx) -> C64 {
    C64::new(v[0], v[1])
}

fn invalid(field: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Validation(format!("field {field}: {msg}"))
}

fn parse_word(field: &str, key: &str, n_letters: usize) -> CliResult<Word> {
    Word::parse(key, n_letters).map_err(|e| invalid(&format!("{field}.{key:?}"), e))
}

fn check_alphabet(n_letters: usize) -> CliResult<()> {
    if n_letters == 0 {
        return Err(invalid("n_letters", "must be at least 1"));
    }
    Ok(())
}

/// `{"n_letters": N, "coeffs": {"<word>": [re, im], …}}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyDoc {
    pub n_letters: usize,
    pub coeffs: IndexMap<String, Cx>,
}

impl PolyDoc {
    pub fn from_poly(p: &NcPoly) -> Self {
        let n = p.n_letters();
        PolyDoc { n_letters: n, coeffs: p.terms().map(|(w, c)| (w.encode(n), cx(*c))).collect() }
    }

    pub fn to_poly(&self) -> CliResult<NcPoly> {
        check_alphabet(self.n_letters)?;
        let mut terms = Vec::with_capacity(self.coeffs.len());
        for (key, v) in &self.coeffs {
            terms.push((parse_word("coeffs", key, self.n_letters)?, from_cx(*v)));
        }
        Ok(NcPoly::from_terms(self.n_letters, terms)?)
    }
}

/// `{"n_letters": N, "max_len": L, "gamma": {"<word>": [re, im], …}}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsDoc {
    pub n_letters: usize,
    pub max_len: usize,
    pub gamma: IndexMap<String, Cx>,
}

impl ParamsDoc {
    /// Every word `∅ ≺ σ` up to `max_len`, zeros included.
    pub fn from_spec(p: &ParamSpec, max_len: usize) -> Self {
        let n = p.n_letters();
        let gamma =
            words::enumerate_words(n, max_len).into_iter().skip(1).map(|w| (w.encode(n), cx(p.gamma(&w)))).collect();
        ParamsDoc { n_letters: n, max_len, gamma }
    }

    pub fn to_spec(&self) -> CliResult<ParamSpec> {
        check_alphabet(self.n_letters)?;
        let mut gamma = BTreeMap::new();
        for (key, v) in &self.gamma {
            let w = parse_word("gamma", key, self.n_letters)?;
            if w.is_empty() {
                if *v != [0.0, 0.0] {
                    return Err(invalid("gamma.\"\"", "the empty word carries no parameter; omit it or set [0, 0]"));
                }
                continue;
            }
            if w.len() > self.max_len {
                return Err(invalid(
                    &format!("gamma.{key:?}"),
                    format_args!("word longer than max_len {}", self.max_len),
                ));
            }
            gamma.insert(w, from_cx(*v));
        }
        Ok(ParamSpec::new(self.n_letters, gamma)?)
    }
}

/// `{"n_letters": N, "max_len": L, "s": {"<word>": [re, im], …}}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MomentsDoc {
    pub n_letters: usize,
    pub max_len: usize,
    pub s: IndexMap<String, Cx>,
}

impl MomentsDoc {
    /// Every word up to `max_len`, `∅` and zeros included.
    pub fn from_spec(m: &MomentSpec, max_len: usize) -> Self {
        let n = m.n_letters();
        let s = words::enumerate_words(n, max_len).into_iter().map(|w| (w.encode(n), cx(m.moment(&w)))).collect();
        MomentsDoc { n_letters: n, max_len, s }
    }

    pub fn to_spec(&self) -> CliResult<MomentSpec> {
        check_alphabet(self.n_letters)?;
        let mut s = BTreeMap::new();
        for (key, v) in &self.s {
            let w = parse_word("s", key, self.n_letters)?;
            if w.len() > self.max_len {
                return Err(invalid(&format!("s.{key:?}"), format_args!("word longer than max_len {}", self.max_len)));
            }
            s.insert(w, from_cx(*v));
        }
        MomentSpec::new(self.n_letters, s).map_err(|e| invalid("s", e))
    }
}

/// `{"d": d, "Z": [letter][row][col] = [re, im]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TupleDoc {
    pub d: usize,
    #[serde(rename = "Z")]
    pub z: Vec<Vec<Vec<Cx>>>,
}

impl TupleDoc {
    pub fn from_tuple(t: &MatrixTuple) -> Self {
        let z = t.matrices().iter().map(matrix_rows).collect();
        TupleDoc { d: t.dim(), z }
    }

    pub fn to_tuple(&self) -> CliResult<MatrixTuple> {
        if self.d == 0 {
            return Err(invalid("d", "must be at least 1"));
        }
        if self.z.is_empty() {
            return Err(invalid("Z", "needs at least one letter"));
        }
        let mut mats = Vec::with_capacity(self.z.len());
        for (k, rows) in self.z.iter().enumerate() {
            mats.push(square(&format!("Z[{k}]"), rows, self.d)?);
        }
        Ok(MatrixTuple::new(mats)?)
    }
}

fn matrix_rows(m: &CMatrix) -> Vec<Vec<Cx>> {
    (0..m.rows()).map(|i| m.row(i).into_iter().map(cx).collect()).collect()
}

fn square(field: &str, rows: &[Vec<Cx>], d: usize) -> CliResult<CMatrix> {
    if rows.len() != d {
        return Err(invalid(field, format_args!("expected {d} rows, found {}", rows.len())));
    }
    for (i, r) in rows.iter().enumerate() {
        if r.len() != d {
            return Err(invalid(&format!("{field}[{i}]"), format_args!("expected {d} entries, found {}", r.len())));
        }
    }
    Ok(CMatrix::from_fn(d, d, |i, j| from_cx(rows[i][j])))
}

/// Dense matrix as `{"rows": r, "cols": c, "entries": [[[re, im], …], …]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixDoc {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<Cx>>,
}

impl MatrixDoc {
    pub fn from_matrix(m: &CMatrix) -> Self {
        MatrixDoc { rows: m.rows(), cols: m.cols(), entries: matrix_rows(m) }
    }

    pub fn to_matrix(&self) -> CliResult<CMatrix> {
        if self.entries.len() != self.rows || self.entries.iter().any(|r| r.len() != self.cols) {
            return Err(invalid("entries", format_args!("shape does not match {}x{}", self.rows, self.cols)));
        }
        Ok(CMatrix::from_fn(self.rows, self.cols, |i, j| from_cx(self.entries[i][j])))
    }
}

/// Word → polynomial document for every `φ_σ` (or `φ♯_σ`).
pub type FamilyDoc = IndexMap<String, PolyDoc>;

pub fn family_doc(fam: &SzegoFamily, sharp: bool) -> FamilyDoc {
    let n = fam.n_letters();
    let polys: Vec<(&Word, &NcPoly)> = if sharp { fam.phi_sharps().collect() } else { fam.phis().collect() };
    polys.into_iter().map(|(w, p)| (w.encode(n), PolyDoc::from_poly(p))).collect()
}

pub fn parse_family(doc: &FamilyDoc) -> CliResult<BTreeMap<Word, NcPoly>> {
    let mut out = BTreeMap::new();
    for (key, p) in doc {
        let poly = p.to_poly()?;
        out.insert(parse_word("family", key, poly.n_letters())?, poly);
    }
    Ok(out)
}

/// `re+imj`.
pub fn complex_cell(z: C64) -> String {
    let sign = if z.im.is_sign_negative() && z.im != 0.0 { '-' } else { '+' };
    format!("{}{}{}j", z.re, sign, z.im.abs())
}

pub fn parse_complex_cell(s: &str) -> Option<C64> {
    let body = s.strip_suffix('j')?;
    let split = body
        .char_indices()
        .skip(1)
        .filter(|&(i, c)| (c == '+' || c == '-') && !body[..i].ends_with(['e', 'E']))
        .last()?
        .0;
    let re = body[..split].parse().ok()?;
    let im = body[split..].parse().ok()?;
    Some(C64::new(re, im))
}

/// Header of word strings, then one row per word.
pub fn gram_csv(ws: &[Word], n_letters: usize, g: &CMatrix) -> CliResult<String> {
    let mut out = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Io(e.to_string());
    out.write_record(ws.iter().map(|w| w.encode(n_letters))).map_err(io)?;
    for i in 0..g.rows() {
        out.write_record(g.row(i).into_iter().map(complex_cell)).map_err(io)?;
    }
    let bytes = out.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
}

/// Inverse of [`gram_csv`].
pub fn parse_gram_csv(text: &str, n_letters: usize) -> CliResult<(Vec<Word>, CMatrix)> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    let bad = |e: csv::Error| CliError::Validation(format!("csv: {e}"));
    let header = reader.headers().map_err(bad)?.clone();
    let ws = header.iter().map(|h| parse_word("header", h, n_letters)).collect::<CliResult<Vec<_>>>()?;
    let mut data = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(bad)?;
        for (j, cell) in record.iter().enumerate() {
            let z = parse_complex_cell(cell).ok_or_else(|| {
                CliError::Validation(format!("csv row {} column {}: bad entry {cell:?}", i + 2, j + 1))
            })?;
            data.push(z);
        }
    }
    if data.len() != ws.len() * ws.len() {
        return Err(CliError::Validation("csv: matrix is not square".into()));
    }
    Ok((ws.clone(), CMatrix::from_vec(ws.len(), ws.len(), data)))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    log::debug!("reading {}", path.display());
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents serialize");
    s.push('\n');
    s
}

//! Model files, the bundled catalog, Drinfeld-double test data, and report
//! rendering.
//!
//! A model file is a sequence of `key = value` entries, one per line, where
//! a bracketed array may continue over several lines. `#` starts a comment.
//! The grammar is documented in `docs/model-format.md`.

pub mod catalog;
pub mod double;
pub mod render;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use num_rational::BigRational;

use crate::cyclo::Cyclotomic;
use crate::error::{Error, Result};
use crate::fusion::FusionData;

/// Optional explicit S-matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SMatrix {
    pub conductor: u32,
    pub entries: Vec<Vec<Cyclotomic>>,
}

/// The contents of a model file after structural validation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelFile {
    pub name: String,
    pub labels: Vec<String>,
    pub weights: Vec<BigRational>,
    /// Canonical sparse fusion: `i ≤ j`, `m > 0`, sorted, vacuum entries
    /// included.
    pub fusion: Vec<[u32; 4]>,
    pub smatrix: Option<SMatrix>,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Word(String),
    Str(String),
    Open,
    Close,
    Comma,
    Eq,
    Newline,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn perr(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, col, msg: msg.into() }
}

fn is_word_char(c: char) -> bool {
    !c.is_whitespace() && !matches!(c, '[' | ']' | ',' | '=' | '#' | '"')
}

fn tokenize(text: &str) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    for (li, line) in text.lines().enumerate() {
        let line_no = li + 1;
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            let single = match c {
                '[' => Some(Tok::Open),
                ']' => Some(Tok::Close),
                ',' => Some(Tok::Comma),
                '=' => Some(Tok::Eq),
                _ => None,
            };
            if let Some(tok) = single {
                out.push(Spanned { tok, line: line_no, col });
                i += 1;
            } else if c == '#' {
                break;
            } else if c.is_whitespace() {
                i += 1;
            } else if c == '"' {
                let start = i + 1;
                let mut j = start;
                while j < chars.len() && chars[j] != '"' {
                    j += 1;
                }
                if j == chars.len() {
                    return Err(perr(line_no, col, "unterminated string"));
                }
                out.push(Spanned { tok: Tok::Str(chars[start..j].iter().collect()), line: line_no, col });
                i = j + 1;
            } else {
                let start = i;
                while i < chars.len() && is_word_char(chars[i]) {
                    i += 1;
                }
                out.push(Spanned { tok: Tok::Word(chars[start..i].iter().collect()), line: line_no, col });
            }
        }
        out.push(Spanned { tok: Tok::Newline, line: line_no, col: chars.len() + 1 });
    }
    Ok(out)
}

#[derive(Clone, Debug)]
enum Value {
    Scalar { text: String, line: usize, col: usize },
    Array { items: Vec<Value>, line: usize, col: usize },
}

impl Value {
    fn pos(&self) -> (usize, usize) {
        match self {
            Value::Scalar { line, col, .. } | Value::Array { line, col, .. } => (*line, *col),
        }
    }

    fn scalar(&self, what: &str) -> Result<(&str, usize, usize)> {
        match self {
            Value::Scalar { text, line, col } => Ok((text, *line, *col)),
            Value::Array { line, col, .. } => Err(perr(*line, *col, format!("{what} must be a scalar"))),
        }
    }

    fn array(&self, what: &str) -> Result<&[Value]> {
        match self {
            Value::Array { items, .. } => Ok(items),
            Value::Scalar { line, col, .. } => Err(perr(*line, *col, format!("{what} must be an array"))),
        }
    }
}

struct Parser {
    toks: Vec<Spanned>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Spanned> {
        self.toks.get(self.at)
    }

    fn next(&mut self) -> Option<Spanned> {
        let t = self.toks.get(self.at).cloned();
        self.at += 1;
        t
    }

    fn skip_newlines(&mut self) {
        while matches!(self.peek(), Some(Spanned { tok: Tok::Newline, .. })) {
            self.at += 1;
        }
    }

    fn end_pos(&self) -> (usize, usize) {
        self.toks.last().map_or((1, 1), |t| (t.line, t.col))
    }

    fn value(&mut self) -> Result<Value> {
        let (el, ec) = self.end_pos();
        let t = self.next().ok_or_else(|| perr(el, ec, "expected a value"))?;
        match t.tok {
            Tok::Word(text) | Tok::Str(text) => Ok(Value::Scalar { text, line: t.line, col: t.col }),
            Tok::Open => {
                let mut items = Vec::new();
                loop {
                    self.skip_newlines();
                    match self.peek() {
                        Some(Spanned { tok: Tok::Close, .. }) => {
                            self.at += 1;
                            return Ok(Value::Array { items, line: t.line, col: t.col });
                        }
                        None => return Err(perr(t.line, t.col, "unclosed '['")),
                        _ => {}
                    }
                    items.push(self.value()?);
                    self.skip_newlines();
                    match self.next() {
                        Some(Spanned { tok: Tok::Comma, .. }) => {}
                        Some(Spanned { tok: Tok::Close, .. }) => {
                            return Ok(Value::Array { items, line: t.line, col: t.col });
                        }
                        Some(s) => return Err(perr(s.line, s.col, "expected ',' or ']'")),
                        None => return Err(perr(t.line, t.col, "unclosed '['")),
                    }
                }
            }
            _ => Err(perr(t.line, t.col, "expected a value")),
        }
    }

    fn entries(&mut self) -> Result<Vec<(String, usize, usize, Value)>> {
        let mut out = Vec::new();
        loop {
            self.skip_newlines();
            let Some(t) = self.next() else { return Ok(out) };
            let Tok::Word(key) = t.tok else {
                return Err(perr(t.line, t.col, "expected a key"));
            };
            match self.next() {
                Some(Spanned { tok: Tok::Eq, .. }) => {}
                Some(s) => return Err(perr(s.line, s.col, "expected '='")),
                None => return Err(perr(t.line, t.col, "expected '='")),
            }
            let v = self.value()?;
            match self.next() {
                Some(Spanned { tok: Tok::Newline, .. }) | None => {}
                Some(s) => return Err(perr(s.line, s.col, "unexpected text after value")),
            }
            out.push((key, t.line, t.col, v));
        }
    }
}

fn parse_u32(v: &Value, what: &str) -> Result<u32> {
    let (s, line, col) = v.scalar(what)?;
    s.parse::<u32>().map_err(|_| perr(line, col, format!("{what} must be a non-negative integer, got '{s}'")))
}

fn parse_rational(v: &Value) -> Result<BigRational> {
    let (s, line, col) = v.scalar("weight")?;
    let bad = || perr(line, col, format!("weight '{s}' is not a rational literal"));
    if let Some((_, den)) = s.split_once('/') {
        if den.trim_start_matches(['+', '-']).chars().all(|c| c == '0') {
            return Err(bad());
        }
    }
    BigRational::from_str(s).map_err(|_| bad())
}

/// Parses a model file; positions in errors are 1-based.
pub fn parse_model(text: &str) -> Result<ModelFile> {
    let mut p = Parser { toks: tokenize(text)?, at: 0 };
    let entries = p.entries()?;
    let mut map: BTreeMap<String, Value> = BTreeMap::new();
    for (key, line, col, v) in entries {
        if !matches!(key.as_str(), "name" | "labels" | "weights" | "fusion" | "smatrix.conductor" | "smatrix.entries") {
            return Err(perr(line, col, format!("unknown key '{key}'")));
        }
        if map.contains_key(&key) {
            return Err(perr(line, col, format!("duplicate key '{key}'")));
        }
        map.insert(key, v);
    }
    let (el, _) = p.end_pos();
    let missing = |k: &str| perr(el, 1, format!("missing key '{k}'"));
    let name = map.get("name").ok_or_else(|| missing("name"))?.scalar("name")?.0.to_string();
    let labels: Vec<String> = map
        .get("labels")
        .ok_or_else(|| missing("labels"))?
        .array("labels")?
        .iter()
        .map(|v| v.scalar("label").map(|(s, _, _)| s.to_string()))
        .collect::<Result<_>>()?;
    let wv = map.get("weights").ok_or_else(|| missing("weights"))?;
    let weights: Vec<BigRational> = wv.array("weights")?.iter().map(parse_rational).collect::<Result<_>>()?;
    let rank = labels.len();
    if rank == 0 {
        let (l, c) = map["labels"].pos();
        return Err(perr(l, c, "at least the vacuum label is required"));
    }
    if weights.len() != rank {
        let (l, c) = wv.pos();
        return Err(perr(l, c, format!("{} weights for {rank} labels", weights.len())));
    }
    let mut seen = std::collections::HashSet::new();
    for (i, l) in labels.iter().enumerate() {
        if l.is_empty() || !seen.insert(l) {
            let (line, col) = map["labels"].array("labels")?[i].pos();
            return Err(perr(line, col, format!("label '{l}' is empty or repeated")));
        }
    }

    let mut fusion: BTreeMap<(u32, u32, u32), u32> = BTreeMap::new();
    if let Some(fv) = map.get("fusion") {
        for item in fv.array("fusion")? {
            let (line, col) = item.pos();
            let q = item.array("fusion entry")?;
            if q.len() != 4 {
                return Err(perr(line, col, "fusion entries are [i, j, k, m]"));
            }
            let idx: Vec<u32> = q.iter().map(|v| parse_u32(v, "fusion index")).collect::<Result<_>>()?;
            let (mut i, mut j, k, m) = (idx[0], idx[1], idx[2], idx[3]);
            for (&x, v) in idx[..3].iter().zip(q) {
                if x as usize >= rank {
                    let (l, c) = v.pos();
                    return Err(perr(l, c, format!("index {x} out of range for rank {rank}")));
                }
            }
            if m == 0 {
                let (l, c) = q[3].pos();
                return Err(perr(l, c, "multiplicities must be positive"));
            }
            if i > j {
                std::mem::swap(&mut i, &mut j);
            }
            if let Some(&old) = fusion.get(&(i, j, k)) {
                if old != m {
                    return Err(perr(line, col, format!("conflicting multiplicities {old} and {m} for [{i}, {j}, {k}]")));
                }
            }
            fusion.insert((i, j, k), m);
        }
    }
    // vacuum rows are implied for primaries without an explicit vacuum entry
    for p in 0..rank as u32 {
        if !fusion.keys().any(|&(i, j, _)| i == 0 && j == p) {
            fusion.insert((0, p, p), 1);
        }
    }

    let smatrix = match (map.get("smatrix.conductor"), map.get("smatrix.entries")) {
        (None, None) => None,
        (Some(cv), Some(ev)) => {
            let conductor = parse_u32(cv, "smatrix.conductor")?;
            if conductor == 0 || conductor > crate::cyclo::MAX_CONDUCTOR {
                let (l, c) = cv.pos();
                return Err(perr(l, c, format!("conductor {conductor} out of range")));
            }
            let rows = ev.array("smatrix.entries")?;
            if rows.len() != rank {
                let (l, c) = ev.pos();
                return Err(perr(l, c, format!("S-matrix needs {rank} rows")));
            }
            let mut entries = Vec::with_capacity(rank);
            for r in rows {
                let cells = r.array("S-matrix row")?;
                if cells.len() != rank {
                    let (l, c) = r.pos();
                    return Err(perr(l, c, format!("S-matrix rows need {rank} entries")));
                }
                let row = cells
                    .iter()
                    .map(|v| {
                        let (s, l, c) = v.scalar("S-matrix entry")?;
                        Cyclotomic::parse_literal(s, conductor).map_err(|e| perr(l, c, e.to_string()))
                    })
                    .collect::<Result<Vec<_>>>()?;
                entries.push(row);
            }
            Some(SMatrix { conductor, entries })
        }
        (Some(v), None) | (None, Some(v)) => {
            let (l, c) = v.pos();
            return Err(perr(l, c, "smatrix.conductor and smatrix.entries go together"));
        }
    };

    Ok(ModelFile {
        name,
        labels,
        weights,
        fusion: fusion.into_iter().map(|((i, j, k), m)| [i, j, k, m]).collect(),
        smatrix,
    })
}

impl ModelFile {
    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn to_fusion_data(&self) -> Result<FusionData> {
        let entries: Vec<(usize, usize, usize, u32)> =
            self.fusion.iter().map(|e| (e[0] as usize, e[1] as usize, e[2] as usize, e[3])).collect();
        FusionData::from_entries(self.name.clone(), self.labels.clone(), self.weights.clone(), &entries)
    }

    /// Validated fusion data turned into exact modular data, using the
    /// explicit S-matrix when the file has one.
    pub fn modular_data(&self, cfg: &crate::config::RunConfig) -> Result<crate::fusion::ModularData> {
        let fd = self.to_fusion_data()?;
        let bad = crate::fusion::validate(&fd);
        if !bad.is_empty() {
            let msgs: Vec<String> = bad.iter().map(ToString::to_string).collect();
            return Err(Error::Validation(msgs.join("; ")));
        }
        match &self.smatrix {
            Some(s) => crate::fusion::build_modular_data_with_s(&fd, &s.entries, cfg),
            None => crate::fusion::build_modular_data(&fd, cfg),
        }
    }

    /// Model file for fusion data, with an optional S-matrix.
    pub fn from_fusion_data(fd: &FusionData, smatrix: Option<SMatrix>) -> Self {
        let k = fd.rank();
        let mut fusion = Vec::new();
        for i in 0..k {
            for j in i..k {
                for r in 0..k {
                    let m = fd.n(i, j, r);
                    if m > 0 {
                        fusion.push([i as u32, j as u32, r as u32, m]);
                    }
                }
            }
        }
        ModelFile {
            name: fd.name().to_string(),
            labels: fd.labels().to_vec(),
            weights: fd.weights().to_vec(),
            fusion,
            smatrix,
        }
    }
}

fn scalar_text(s: &str) -> String {
    if !s.is_empty() && s.chars().all(is_word_char) {
        s.to_string()
    } else {
        format!("\"{s}\"")
    }
}

fn rational_text(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Canonical serialization.
pub fn write_model(m: &ModelFile) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "name = {}", scalar_text(&m.name));
    let labels: Vec<String> = m.labels.iter().map(|l| scalar_text(l)).collect();
    let _ = writeln!(out, "labels = [{}]", labels.join(", "));
    let weights: Vec<String> = m.weights.iter().map(rational_text).collect();
    let _ = writeln!(out, "weights = [{}]", weights.join(", "));
    if m.fusion.is_empty() {
        out.push_str("fusion = []\n");
    } else {
        out.push_str("fusion = [\n");
        for e in &m.fusion {
            let _ = writeln!(out, "  [{}, {}, {}, {}],", e[0], e[1], e[2], e[3]);
        }
        out.push_str("]\n");
    }
    if let Some(s) = &m.smatrix {
        let _ = writeln!(out, "smatrix.conductor = {}", s.conductor);
        out.push_str("smatrix.entries = [\n");
        for row in &s.entries {
            let cells: Vec<String> = row
                .iter()
                .map(|x| format!("\"{}\"", x.to_literal(s.conductor).expect("entries lie in the declared field")))
                .collect();
            let _ = writeln!(out, "  [{}],", cells.join(", "));
        }
        out.push_str("]\n");
    }
    out
}

/// Reads a model from a path, or from the catalog for `@name`.
pub fn load_model(spec: &str, cfg: &crate::config::RunConfig) -> Result<ModelFile> {
    if let Some(name) = spec.strip_prefix('@') {
        return catalog::lookup(name, cfg);
    }
    let text = std::fs::read_to_string(spec).map_err(|e| Error::Validation(format!("cannot read {spec}: {e}")))?;
    parse_model(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    const ISING: &str = "# Ising\nname = ising\nlabels = [0, eps, sigma]\nweights = [0, 1/2, 1/16]\n\
fusion = [\n  [1, 1, 0, 1], [2, 1, 2, 1],\n  [2, 2, 0, 1], [2, 2, 1, 1]  # trailing\n]\n";

    #[test]
    fn parses_and_canonicalizes() {
        let m = parse_model(ISING).unwrap();
        assert_eq!(m.rank(), 3);
        assert_eq!(m.weights[2], BigRational::new(1.into(), 16.into()));
        assert!(m.fusion.contains(&[1, 2, 2, 1]));
        assert!(m.fusion.contains(&[0, 2, 2, 1]));
        let text = write_model(&m);
        let again = parse_model(&text).unwrap();
        assert_eq!(again, m);
        assert_eq!(write_model(&again), text);
        let fd = m.to_fusion_data().unwrap();
        assert!(crate::fusion::validate(&fd).is_empty());
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_model("name = x\nlabels = [0]\nweights = [1/0]\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, col: 12, .. }), "{e:?}");
        let e = parse_model("name = x\nlabels = [0, a]\nweights = [0, 0]\nfusion = [[0, 1, 5, 1]]\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 4, col: 18, .. }), "{e:?}");
        let e = parse_model("name = x\nlabels = [0, a]\nweights = [0, 0]\nfusion = [[1,1,0,1],[1,1,0,2]]\n").unwrap_err();
        assert!(e.to_string().contains("conflicting"), "{e}");
        assert!(parse_model("name = x\nlabels = [0\nweights = [0]\n").is_err());
        assert!(parse_model("name = x\nlabels = [0]\nweights = [0]\nbogus = 1\n").is_err());
    }

    #[test]
    fn explicit_vacuum_entries_suppress_the_default() {
        let m = parse_model("name = bad\nlabels = [0, a, b]\nweights = [0, 0, 0]\nfusion = [[0, 1, 2, 1]]\n").unwrap();
        assert!(!m.fusion.contains(&[0, 1, 1, 1]));
        let fd = m.to_fusion_data().unwrap();
        assert!(!crate::fusion::validate(&fd).is_empty());
    }

    #[test]
    fn rank_one_without_fusion_is_trivial() {
        let m = parse_model("name = t\nlabels = [0]\nweights = [0]\nfusion = []\n").unwrap();
        assert_eq!(m.fusion, vec![[0, 0, 0, 1]]);
    }
}

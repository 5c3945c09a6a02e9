//! `.ham` / `.map` documents, corpus references and inline expressions.

use std::fs;
use std::path::Path;

use jolt_core::corpus;
use jolt_core::factorize::time_one_map;
use jolt_core::hamalg::Hamiltonian;
use jolt_core::polycore::{parse, Coeff, FieldSpec, Poly};
use jolt_core::Error;

/// Header line: `n=<int>; field=sqrt<d>|rational; name=<str>`.
#[derive(Clone, Debug, PartialEq)]
pub struct Header {
    pub n: usize,
    pub field: FieldSpec,
    pub name: Option<String>,
}

impl Header {
    pub fn parse(line: &str) -> Result<Header, Error> {
        let bad = |msg: String| Error::Parse { pos: 0, msg };
        let mut n = None;
        let mut field = FieldSpec::Rational;
        let mut name = None;
        for item in line.split(';').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item.split_once('=').ok_or_else(|| bad(format!("header item `{item}`")))?;
            match key.trim() {
                "n" => n = Some(value.trim().parse::<usize>().map_err(|_| bad(format!("n = `{value}`")))?),
                "field" => field = parse_field(value.trim())?,
                "name" => name = Some(value.trim().to_string()),
                other => return Err(bad(format!("unknown header key `{other}`"))),
            }
        }
        match n {
            Some(n) if n > 0 => Ok(Header { n, field, name }),
            _ => Err(bad("header needs n >= 1".into())),
        }
    }
}

pub fn parse_field(s: &str) -> Result<FieldSpec, Error> {
    if s == "rational" || s == "Q" {
        return Ok(FieldSpec::Rational);
    }
    let digits = s.strip_prefix("sqrt").map(|d| d.trim_matches(|c| c == '(' || c == ')'));
    match digits.and_then(|d| d.parse::<u32>().ok()) {
        Some(d) => FieldSpec::sqrt(d),
        None => Err(Error::InvalidField(s.to_string())),
    }
}

/// Everything a command may receive as its main argument.
pub enum Input {
    Ham { name: String, h: Hamiltonian },
    Map { name: String, f: Vec<Poly<Coeff>> },
}

impl Input {
    pub fn name(&self) -> &str {
        match self {
            Input::Ham { name, .. } | Input::Map { name, .. } => name,
        }
    }

    pub fn hamiltonian(self) -> Result<Hamiltonian, Error> {
        match self {
            Input::Ham { h, .. } => Ok(h),
            Input::Map { .. } => Err(Error::Precondition("expected a Hamiltonian, got a map".into())),
        }
    }

    /// The map itself, or the time-one map of a Hamiltonian.
    pub fn map(self) -> Vec<Poly<Coeff>> {
        match self {
            Input::Ham { h, .. } => time_one_map(&h),
            Input::Map { f, .. } => f,
        }
    }
}

/// Overrides for inline expressions.
#[derive(Clone, Copy, Debug, Default)]
pub struct Inline {
    pub n: Option<usize>,
    pub field: Option<FieldSpec>,
}

pub fn load(arg: &str, inline: Inline) -> Result<Input, Error> {
    if let Some(name) = arg.strip_prefix("corpus:") {
        let h = corpus::lookup(name).ok_or_else(|| Error::Parse {
            pos: 0,
            msg: format!("unknown corpus entry `{name}` (known: {})", corpus::names().join(", ")),
        })?;
        return Ok(Input::Ham { name: name.to_string(), h });
    }
    let path = Path::new(arg);
    if path.is_file() {
        let text = fs::read_to_string(path).map_err(|e| Error::Parse { pos: 0, msg: format!("{arg}: {e}") })?;
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("input").to_string();
        return if path.extension().is_some_and(|e| e == "map") {
            read_map(&text, &stem)
        } else {
            read_ham(&text, &stem)
        };
    }
    let n = inline.n.unwrap_or_else(|| infer_n(arg));
    let field = inline.field.unwrap_or_else(|| infer_field(arg));
    let h = Hamiltonian::new(n, parse(arg, n, field)?)?;
    Ok(Input::Ham { name: "inline".into(), h })
}

fn content_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'))
}

pub fn read_ham(text: &str, default_name: &str) -> Result<Input, Error> {
    let mut lines = content_lines(text);
    let header = Header::parse(lines.next().ok_or(Error::Parse { pos: 0, msg: "empty document".into() })?)?;
    let body: Vec<&str> = lines.collect();
    if body.is_empty() {
        return Err(Error::Parse { pos: 0, msg: "missing expression".into() });
    }
    let h = Hamiltonian::new(header.n, parse(&body.join(" "), header.n, header.field)?)?;
    Ok(Input::Ham { name: header.name.unwrap_or_else(|| default_name.to_string()), h })
}

pub fn read_map(text: &str, default_name: &str) -> Result<Input, Error> {
    let mut lines = content_lines(text);
    let header = Header::parse(lines.next().ok_or(Error::Parse { pos: 0, msg: "empty document".into() })?)?;
    let body: Vec<&str> = lines.collect();
    if body.len() != 2 * header.n {
        return Err(Error::Parse { pos: 0, msg: format!("expected {} component lines, found {}", 2 * header.n, body.len()) });
    }
    let f = body.iter().map(|l| parse(l, header.n, header.field)).collect::<Result<Vec<_>, _>>()?;
    Ok(Input::Map { name: header.name.unwrap_or_else(|| default_name.to_string()), f })
}

/// Largest index among `q<k>` / `p<k>`, at least 1.
pub fn infer_n(text: &str) -> usize {
    let b = text.as_bytes();
    let mut n = 1;
    let mut i = 0;
    while i < b.len() {
        if (b[i] == b'q' || b[i] == b'p') && (i == 0 || !b[i - 1].is_ascii_alphanumeric()) {
            let j = (i + 1..b.len()).find(|&j| !b[j].is_ascii_digit()).unwrap_or(b.len());
            if let Ok(k) = text[i + 1..j].parse::<usize>() {
                n = n.max(k);
            }
            i = j;
        } else {
            i += 1;
        }
    }
    n
}

/// `sqrt(d)` in the text selects `ℚ(√d)`; otherwise rational.
pub fn infer_field(text: &str) -> FieldSpec {
    text.split("sqrt(")
        .nth(1)
        .and_then(|rest| rest.split(')').next())
        .and_then(|d| d.trim().parse::<u32>().ok())
        .and_then(|d| FieldSpec::sqrt(d).ok())
        .unwrap_or(FieldSpec::Rational)
}

//! Line-oriented series and basis files.
//!
//! A series block is a header `level=<N> weight=<k|?> prec=<P> label=<text>`
//! followed by one line per coefficient: the index, then `φ(N)` rationals in
//! the power basis of `Q(ζ_N)`. Higher ε-powers use an index of the form
//! `<n>e<j>` and may be omitted. Lines starting with `#` are ignored.
//!
//! A basis file starts with `basis level=<N> maxweight=<W> prec=<P> entries=<E>`
//! and is followed by `E` series blocks with numeric weights.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use finvariant::divcong::{BasisEntry, ModularBasis};
use finvariant::exactnum::{CycField, CycNum, EpsPoly, Rational};
use finvariant::qseries::QSeries;
use num_bigint::BigInt;

use crate::CliError;

#[derive(Clone, Debug, PartialEq)]
pub struct SeriesRecord {
    pub level: u32,
    pub weight: Option<u32>,
    pub label: String,
    pub series: QSeries,
}

struct Header {
    level: u32,
    weight: Option<u32>,
    prec: usize,
    label: String,
}

fn parse_err(path: &Path, line: usize, msg: impl Into<String>) -> CliError {
    CliError::Parse {
        path: path.to_path_buf(),
        line,
        msg: msg.into(),
    }
}

fn fmt_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Numbered, non-comment, non-blank lines.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_header(path: &Path, lineno: usize, line: &str) -> Result<Header, CliError> {
    let (head, label) = match line.find("label=") {
        Some(i) => (&line[..i], line[i + 6..].to_string()),
        None => return Err(parse_err(path, lineno, "header lacks label=")),
    };
    let (mut level, mut weight, mut prec) = (None, None, None);
    for tok in head.split_whitespace() {
        let (k, v) = tok
            .split_once('=')
            .ok_or_else(|| parse_err(path, lineno, format!("bad header field {:?}", tok)))?;
        let num = |v: &str| {
            v.parse::<u64>()
                .map_err(|_| parse_err(path, lineno, format!("bad value for {}: {:?}", k, v)))
        };
        match k {
            "level" => level = Some(num(v)? as u32),
            "weight" if v == "?" => weight = Some(None),
            "weight" => weight = Some(Some(num(v)? as u32)),
            "prec" => prec = Some(num(v)? as usize),
            _ => return Err(parse_err(path, lineno, format!("unknown header field {:?}", k))),
        }
    }
    match (level, weight, prec) {
        (Some(level), Some(weight), Some(prec)) => Ok(Header {
            level,
            weight,
            prec,
            label,
        }),
        _ => Err(parse_err(path, lineno, "header needs level=, weight=, prec=")),
    }
}

fn parse_index(tok: &str) -> Option<(usize, usize)> {
    match tok.split_once('e') {
        Some((n, j)) => Some((n.parse().ok()?, j.parse().ok()?)),
        None => Some((tok.parse().ok()?, 0)),
    }
}

fn parse_block<'a>(
    path: &Path,
    lines: &mut std::iter::Peekable<impl Iterator<Item = (usize, &'a str)>>,
    fields: &mut Option<Arc<CycField>>,
) -> Result<Option<SeriesRecord>, CliError> {
    let Some((lineno, line)) = lines.next() else {
        return Ok(None);
    };
    if !line.starts_with("level=") {
        return Err(parse_err(path, lineno, "expected a series header"));
    }
    let h = parse_header(path, lineno, line)?;
    let field = match fields {
        Some(f) if f.level() == h.level => Arc::clone(f),
        _ => {
            let f = CycField::new(h.level).map_err(|e| parse_err(path, lineno, e.to_string()))?;
            *fields = Some(Arc::clone(&f));
            f
        }
    };
    let phi = field.degree();
    // coeffs[n][j]
    let mut coeffs: Vec<Vec<CycNum>> = Vec::with_capacity(h.prec);
    let mut last = lineno;
    while let Some(&(ln, l)) = lines.peek() {
        if l.starts_with("level=") {
            break;
        }
        lines.next();
        last = ln;
        let mut toks = l.split_whitespace();
        let idx = toks.next().unwrap_or_default();
        let (n, j) = parse_index(idx).ok_or_else(|| parse_err(path, ln, format!("bad index {:?}", idx)))?;
        let vals = toks
            .map(|t| {
                t.parse::<Rational>()
                    .map_err(|_| parse_err(path, ln, format!("bad rational {:?}", t)))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if vals.len() != phi {
            return Err(parse_err(
                path,
                ln,
                format!("expected {} coordinates, found {}", phi, vals.len()),
            ));
        }
        let c = CycNum::from_coords(&field, &vals).map_err(|e| parse_err(path, ln, e.to_string()))?;
        if j == 0 {
            if n != coeffs.len() {
                return Err(parse_err(path, ln, format!("expected coefficient {}, found {}", coeffs.len(), n)));
            }
            if n >= h.prec {
                return Err(parse_err(path, ln, format!("index {} beyond prec {}", n, h.prec)));
            }
            coeffs.push(vec![c]);
        } else {
            let row = coeffs
                .get_mut(n)
                .ok_or_else(|| parse_err(path, ln, format!("ε-line for q^{} before its ε⁰ line", n)))?;
            if row.len() <= j {
                row.resize(j + 1, CycNum::zero(&field));
            }
            row[j] = c;
        }
    }
    if coeffs.len() < h.prec {
        return Err(parse_err(
            path,
            last + 1,
            format!(
                "truncated series {:?}: expected coefficient {} of {}",
                h.label,
                coeffs.len(),
                h.prec
            ),
        ));
    }
    let eps = coeffs.into_iter().map(|row| EpsPoly::new(&field, row)).collect();
    Ok(Some(SeriesRecord {
        level: h.level,
        weight: h.weight,
        label: h.label,
        series: QSeries::from_eps(&field, eps),
    }))
}

pub fn parse_series(path: &Path, text: &str) -> Result<Vec<SeriesRecord>, CliError> {
    let mut lines = content_lines(text).peekable();
    let mut field = None;
    let mut out = Vec::new();
    while let Some(rec) = parse_block(path, &mut lines, &mut field)? {
        out.push(rec);
    }
    if out.is_empty() {
        return Err(parse_err(path, 1, "no series in file"));
    }
    Ok(out)
}

pub fn read_series(path: &Path) -> Result<SeriesRecord, CliError> {
    let text = read(path)?;
    Ok(parse_series(path, &text)?.remove(0))
}

pub fn format_series(rec: &SeriesRecord) -> String {
    let s = &rec.series;
    let mut out = String::new();
    let weight = rec.weight.map_or("?".to_string(), |w| w.to_string());
    writeln!(out, "level={} weight={} prec={} label={}", rec.level, weight, s.prec(), rec.label).unwrap();
    for n in 0..s.prec() {
        let c = s.coeff(n);
        for j in 0..c.coeffs().len().max(1) {
            if j > 0 && c.coeff(j).is_zero() {
                continue;
            }
            let idx = if j == 0 { n.to_string() } else { format!("{}e{}", n, j) };
            let coords: Vec<String> = c.coeff(j).coords().iter().map(fmt_rational).collect();
            writeln!(out, "{} {}", idx, coords.join(" ")).unwrap();
        }
    }
    out
}

pub fn format_basis(b: &ModularBasis) -> String {
    let mut out = format!(
        "basis level={} maxweight={} prec={} entries={}\n",
        b.level,
        b.maxweight,
        b.prec,
        b.entries.len()
    );
    for e in &b.entries {
        out.push_str(&format_series(&SeriesRecord {
            level: b.level,
            weight: Some(e.weight),
            label: e.label.clone(),
            series: e.series.clone(),
        }));
    }
    out
}

pub fn parse_basis(path: &Path, text: &str) -> Result<ModularBasis, CliError> {
    let mut lines = content_lines(text).peekable();
    let (lineno, first) = lines.next().ok_or_else(|| parse_err(path, 1, "empty basis file"))?;
    let rest = first
        .strip_prefix("basis ")
        .ok_or_else(|| parse_err(path, lineno, "expected `basis level=.. maxweight=.. prec=.. entries=..`"))?;
    let mut vals = [None; 4];
    for tok in rest.split_whitespace() {
        let (k, v) = tok
            .split_once('=')
            .ok_or_else(|| parse_err(path, lineno, format!("bad field {:?}", tok)))?;
        let slot = ["level", "maxweight", "prec", "entries"]
            .iter()
            .position(|&name| name == k)
            .ok_or_else(|| parse_err(path, lineno, format!("unknown field {:?}", k)))?;
        vals[slot] = Some(v.parse::<usize>().map_err(|_| parse_err(path, lineno, format!("bad value {:?}", v)))?);
    }
    let [Some(level), Some(maxweight), Some(prec), Some(count)] = vals else {
        return Err(parse_err(path, lineno, "basis header is incomplete"));
    };
    let mut field = None;
    let mut entries = Vec::with_capacity(count);
    let mut dims = vec![0usize; maxweight + 1];
    for i in 0..count {
        let at = lines.peek().map_or(lineno + 1, |(l, _)| *l);
        let rec = parse_block(path, &mut lines, &mut field)?
            .ok_or_else(|| parse_err(path, at, format!("truncated basis: entry {} of {} missing", i, count)))?;
        let weight = rec
            .weight
            .ok_or_else(|| parse_err(path, at, "basis entries need a numeric weight"))?;
        if rec.level as usize != level || rec.series.prec() != prec || weight as usize > maxweight {
            return Err(parse_err(path, at, format!("entry {:?} disagrees with the basis header", rec.label)));
        }
        dims[weight as usize] += 1;
        entries.push(BasisEntry {
            weight,
            series: rec.series,
            label: rec.label,
        });
    }
    if let Some((l, _)) = lines.next() {
        return Err(parse_err(path, l, "trailing data after the last basis entry"));
    }
    if entries.is_empty() {
        return Err(parse_err(path, lineno, "basis has no entries"));
    }
    Ok(ModularBasis {
        level: level as u32,
        maxweight: maxweight as u32,
        prec,
        entries,
        dims,
    })
}

pub fn read_basis(path: &Path) -> Result<ModularBasis, CliError> {
    parse_basis(path, &read(path)?)
}

pub fn write_basis(path: &Path, b: &ModularBasis) -> Result<(), CliError> {
    write(path, &format_basis(b))
}

pub fn cache_path(dir: &Path, level: u32, maxweight: u32, prec: usize) -> PathBuf {
    dir.join(format!("basis-N{}-W{}-P{}.txt", level, maxweight, prec))
}

pub fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io { path: path.to_path_buf(), source: e })
}

pub fn write(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::Io { path: dir.to_path_buf(), source: e })?;
    }
    std::fs::write(path, text).map_err(|e| CliError::Io { path: path.to_path_buf(), source: e })
}

/// ξ-table file: lines `d a [b]` meaning `ξ_d = a + bε`.
pub fn parse_xi_lines(path: &Path, text: &str) -> Result<Vec<(i64, Rational, Rational)>, CliError> {
    content_lines(text)
        .map(|(ln, l)| {
            let toks: Vec<&str> = l.split_whitespace().collect();
            if !(2..=3).contains(&toks.len()) {
                return Err(parse_err(path, ln, "expected `d a [b]`"));
            }
            let d = toks[0]
                .parse::<i64>()
                .map_err(|_| parse_err(path, ln, format!("bad twist {:?}", toks[0])))?;
            let r = |t: &str| {
                t.parse::<Rational>()
                    .map_err(|_| parse_err(path, ln, format!("bad rational {:?}", t)))
            };
            let b = match toks.get(2) {
                Some(t) => r(t)?,
                None => Rational::from_integer(BigInt::from(0)),
            };
            Ok((d, r(toks[1])?, b))
        })
        .collect()
}

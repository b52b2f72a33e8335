//! Plain-text coframe definitions.
//!
//! ```text
//! # comments run to the end of the line
//! [chart]   coords = x y z
//! [params]  eps = -1
//! [omega1]  dx = "1"  dy = "1"  dz = "-((x+y)*z-(x-y))"
//! [omega2]  dx = "1"  dy = "-1" dz = "eps*(x+y)+(x-y)*z"
//! [omega3]  dz = "1"
//! ```
//!
//! Pairs may follow the section header on the same line or on later lines.
//! Coefficient keys are `d<coordinate>`; missing keys mean `0`.

use std::path::Path;

use crate::coframe::{Chart, CoframeSpec};
use crate::error::{Error, Result};
use crate::expr::Expr;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Section(String),
    Word(String),
    Quoted(String),
    Eq,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn perr(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        col,
        msg: msg.into(),
    }
}

fn lex(text: &str) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let chars: Vec<char> = raw.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            match c {
                '#' => break,
                c if c.is_whitespace() => i += 1,
                '=' => {
                    out.push(Spanned { tok: Tok::Eq, line, col });
                    i += 1;
                }
                '[' => {
                    let close = chars[i..]
                        .iter()
                        .position(|&c| c == ']')
                        .ok_or_else(|| perr(line, col, "unterminated section header"))?;
                    let name: String = chars[i + 1..i + close].iter().collect();
                    out.push(Spanned {
                        tok: Tok::Section(name.trim().to_string()),
                        line,
                        col,
                    });
                    i += close + 1;
                }
                '"' => {
                    let close = chars[i + 1..]
                        .iter()
                        .position(|&c| c == '"')
                        .ok_or_else(|| perr(line, col, "unterminated string"))?;
                    let s: String = chars[i + 1..i + 1 + close].iter().collect();
                    out.push(Spanned {
                        tok: Tok::Quoted(s),
                        line,
                        col,
                    });
                    i += close + 2;
                }
                _ => {
                    let start = i;
                    while i < chars.len() && !chars[i].is_whitespace() && !"=[\"#".contains(chars[i]) {
                        i += 1;
                    }
                    out.push(Spanned {
                        tok: Tok::Word(chars[start..i].iter().collect()),
                        line,
                        col,
                    });
                }
            }
        }
    }
    Ok(out)
}

/// A `key = value...` entry with the position of each piece.
#[derive(Debug, Clone)]
struct Entry {
    key: String,
    line: usize,
    col: usize,
    values: Vec<Spanned>,
}

#[derive(Debug, Clone)]
struct Section {
    name: String,
    line: usize,
    col: usize,
    entries: Vec<Entry>,
}

fn group(toks: Vec<Spanned>) -> Result<Vec<Section>> {
    let mut sections: Vec<Section> = Vec::new();
    let mut i = 0;
    while i < toks.len() {
        let t = &toks[i];
        match &t.tok {
            Tok::Section(name) => {
                if let Some(prev) = sections.iter().find(|s| &s.name == name) {
                    return Err(perr(
                        t.line,
                        t.col,
                        format!("section [{name}] repeats line {}", prev.line),
                    ));
                }
                sections.push(Section {
                    name: name.clone(),
                    line: t.line,
                    col: t.col,
                    entries: Vec::new(),
                });
                i += 1;
            }
            Tok::Word(key) => {
                let sec = sections
                    .last_mut()
                    .ok_or_else(|| perr(t.line, t.col, "entry before any section header"))?;
                if !matches!(toks.get(i + 1).map(|s| &s.tok), Some(Tok::Eq)) {
                    return Err(perr(t.line, t.col, format!("expected `=` after `{key}`")));
                }
                let mut j = i + 2;
                let mut values = Vec::new();
                while j < toks.len() {
                    let next_is_key = matches!(toks[j].tok, Tok::Word(_))
                        && matches!(toks.get(j + 1).map(|s| &s.tok), Some(Tok::Eq));
                    if next_is_key || matches!(toks[j].tok, Tok::Section(_)) {
                        break;
                    }
                    if toks[j].tok == Tok::Eq {
                        return Err(perr(toks[j].line, toks[j].col, "unexpected `=`"));
                    }
                    values.push(toks[j].clone());
                    j += 1;
                }
                if values.is_empty() {
                    return Err(perr(t.line, t.col, format!("`{key}` has no value")));
                }
                if sec.entries.iter().any(|e| &e.key == key) {
                    return Err(perr(t.line, t.col, format!("duplicate key `{key}`")));
                }
                sec.entries.push(Entry {
                    key: key.clone(),
                    line: t.line,
                    col: t.col,
                    values,
                });
                i = j;
            }
            Tok::Quoted(_) => return Err(perr(t.line, t.col, "string without a key")),
            Tok::Eq => return Err(perr(t.line, t.col, "unexpected `=`")),
        }
    }
    Ok(sections)
}

fn text_of(t: &Spanned) -> &str {
    match &t.tok {
        Tok::Word(s) | Tok::Quoted(s) => s,
        _ => "",
    }
}

fn single<'a>(e: &'a Entry) -> Result<&'a Spanned> {
    match e.values.as_slice() {
        [v] => Ok(v),
        _ => Err(perr(e.line, e.col, format!("`{}` takes a single value", e.key))),
    }
}

fn parse_expr(chart: &Chart, v: &Spanned) -> Result<Expr> {
    chart.parse(text_of(v)).map_err(|e| match e {
        Error::Syntax { pos, msg } => {
            let shift = if matches!(v.tok, Tok::Quoted(_)) { 1 } else { 0 };
            let chars = text_of(v)
                .get(..pos.min(text_of(v).len()))
                .map_or(pos, |s| s.chars().count());
            perr(v.line, v.col + shift + chars, msg)
        }
        other => other,
    })
}

/// Parse a coframe definition.
pub fn parse_coframe(text: &str) -> Result<CoframeSpec> {
    let sections = group(lex(text)?)?;
    let find = |name: &str| sections.iter().find(|s| s.name == name);
    for s in &sections {
        let known = s.name == "chart"
            || s.name == "params"
            || matches!(s.name.strip_prefix("omega"), Some(n) if ["1", "2", "3", "4"].contains(&n));
        if !known {
            return Err(perr(s.line, s.col, format!("unknown section [{}]", s.name)));
        }
    }
    let chart_sec = find("chart").ok_or_else(|| Error::Arity("missing [chart] section".into()))?;
    let coords_entry = chart_sec
        .entries
        .iter()
        .find(|e| e.key == "coords")
        .ok_or_else(|| perr(chart_sec.line, chart_sec.col, "[chart] needs `coords = ...`"))?;
    if let Some(e) = chart_sec.entries.iter().find(|e| e.key != "coords") {
        return Err(perr(e.line, e.col, format!("unknown [chart] key `{}`", e.key)));
    }
    let coords: Vec<&str> = coords_entry.values.iter().map(text_of).collect();
    let mut params = Vec::new();
    if let Some(p) = find("params") {
        for e in &p.entries {
            let v = single(e)?;
            let x: f64 = text_of(v)
                .parse()
                .map_err(|_| perr(v.line, v.col, format!("`{}` is not a number", text_of(v))))?;
            params.push((e.key.as_str(), x));
        }
    }
    let chart = Chart::new(&coords, &params)
        .map_err(|e| perr(coords_entry.line, coords_entry.col, e.to_string()))?;
    let n = chart.dim();
    if let Some(extra) = (n + 1..=4).find_map(|a| find(&format!("omega{a}"))) {
        return Err(Error::Arity(format!(
            "[{}] given for a {n}-dimensional chart (line {})",
            extra.name, extra.line
        )));
    }
    let mut forms = Vec::with_capacity(n);
    for a in 1..=n {
        let sec = find(&format!("omega{a}"))
            .ok_or_else(|| Error::Arity(format!("missing [omega{a}] section for a {n}-dimensional chart")))?;
        let mut row = vec![Expr::num(0.0); n];
        for e in &sec.entries {
            let idx = e
                .key
                .strip_prefix('d')
                .and_then(|c| chart.coords.iter().position(|x| x == c))
                .ok_or_else(|| {
                    perr(
                        e.line,
                        e.col,
                        format!("`{}` is not d<coordinate> for coordinates {:?}", e.key, chart.coords),
                    )
                })?;
            row[idx] = parse_expr(&chart, single(e)?)?;
        }
        forms.push(row);
    }
    CoframeSpec::new(chart, forms)
}

pub fn load_coframe(path: &Path) -> Result<CoframeSpec> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))?;
    parse_coframe(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    const HYP: &str = r#"
[chart]  coords = x y z
[params] eps = -1
[omega1] dx = "1" dy = "1" dz = "-((x+y)*z-(x-y))"
[omega2] dx = "1" dy = "-1"
         dz = "eps*(x+y)+(x-y)*z"
[omega3] dz = "1"   # C3 = 1
"#;

    #[test]
    fn parses_sections_and_defaults() {
        let spec = parse_coframe(HYP).unwrap();
        assert_eq!(spec.dim(), 3);
        assert_eq!(spec.chart.params["eps"], -1.0);
        assert!(spec.forms[2][0].is_zero());
        let f = spec.at(&[0.1, 0.2, 0.3], 1).unwrap();
        approx::assert_abs_diff_eq!(f.forms[1].coeffs()[2].value(), -0.33, epsilon = 1e-15);
    }

    #[test]
    fn missing_section_is_an_arity_error() {
        let text = HYP.replace("[omega3] dz = \"1\"   # C3 = 1", "");
        assert!(matches!(parse_coframe(&text), Err(Error::Arity(_))));
    }

    #[test]
    fn unknown_identifier() {
        let text = HYP.replace("dz = \"1\"", "dz = \"q+1\"");
        assert_eq!(
            parse_coframe(&text),
            Err(Error::UnknownIdentifier("q".into()))
        );
    }

    #[test]
    fn positions_are_reported() {
        let text = "[chart] coords = x y z\n[omega1] dx = \"1+\"\n";
        match parse_coframe(text) {
            Err(Error::Parse { line, col, .. }) => {
                assert_eq!(line, 2);
                assert!(col > 14, "col {col}");
            }
            other => panic!("{other:?}"),
        }
        match parse_coframe("[chart] coords = x y z\n  dq = \"1\"\n[omega1] dw = \"1\"") {
            Err(Error::Parse { line, col, .. }) => assert_eq!((line, col), (2, 3)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn omega4_on_a_3d_chart() {
        let text = format!("{HYP}\n[omega4] dx = \"1\"\n");
        assert!(matches!(parse_coframe(&text), Err(Error::Arity(_))));
    }
}

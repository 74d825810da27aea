//! CPLEX LP text format: writer and a reader for the subset it produces
//! (an objective, linear rows and non-negativity bounds).

use std::collections::HashMap;
use std::fmt::Write as _;

use super::{LinearProgram, LpError, Relation};

fn sanitize(name: &str) -> String {
    let mut s: String = name
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '_' || c == '.' { c } else { '_' })
        .collect();
    if s.is_empty() || s.starts_with(|c: char| c.is_ascii_digit() || c == '.' || c == 'e' || c == 'E') {
        s.insert_str(0, "v_");
    }
    s
}

fn unique_names<'a>(names: impl Iterator<Item = &'a str>, prefix: &str) -> Vec<String> {
    let mut seen = HashMap::new();
    names
        .enumerate()
        .map(|(k, n)| {
            let mut s = if n.is_empty() { format!("{prefix}{k}") } else { sanitize(n) };
            if seen.contains_key(&s) {
                s = format!("{s}_{k}");
            }
            seen.insert(s.clone(), ());
            s
        })
        .collect()
}

fn write_terms(out: &mut String, terms: impl Iterator<Item = (f64, String)>) {
    let mut first = true;
    for (a, name) in terms {
        let (op, mag) = if a < 0.0 { ("-", -a) } else { ("+", a) };
        if first && op == "+" {
            let _ = write!(out, " {mag} {name}");
        } else {
            let _ = write!(out, " {op} {mag} {name}");
        }
        first = false;
    }
    if first {
        out.push_str(" 0");
    }
}

/// Render `lp` as a maximization problem in CPLEX LP format.
pub fn write_lp(lp: &LinearProgram) -> String {
    let vars = unique_names(lp.var_names.iter().map(String::as_str), "x");
    let rows = unique_names(lp.rows.iter().map(|r| r.name.as_str()), "c");
    let mut out = String::from("\\ feeder linear program\nMaximize\n obj:");
    write_terms(&mut out, lp.objective.iter().zip(&vars).map(|(&c, v)| (c, v.clone())));
    out.push_str("\nSubject To\n");
    for (row, name) in lp.rows.iter().zip(&rows) {
        let _ = write!(out, " {name}:");
        write_terms(&mut out, row.coeffs.iter().map(|&(j, a)| (a, vars[j].clone())));
        let _ = writeln!(out, " {} {}", row.relation.symbol(), row.rhs);
    }
    out.push_str("Bounds\n");
    for v in &vars {
        let _ = writeln!(out, " {v} >= 0");
    }
    out.push_str("End\n");
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParsedLp {
    /// Always in maximization form.
    pub lp: LinearProgram,
    /// The file asked for minimization; the objective was negated.
    pub minimize: bool,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Colon,
    Rel(Relation),
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    Objective,
    Rows,
    Bounds,
    End,
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || "_.[]!\"#$%&()/,;?@`'{}|~".contains(c)
}

fn tokenize(text: &str, line: usize, out: &mut Vec<(usize, Tok)>) -> Result<(), LpError> {
    let err = |m: String| LpError::Parse { line, message: m };
    let chars: Vec<char> = text.chars().collect();
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        if c.is_whitespace() {
            k += 1;
        } else if c == '+' {
            out.push((line, Tok::Plus));
            k += 1;
        } else if c == '-' {
            out.push((line, Tok::Minus));
            k += 1;
        } else if c == ':' {
            out.push((line, Tok::Colon));
            k += 1;
        } else if c == '<' || c == '>' || c == '=' {
            let mut op = String::from(c);
            k += 1;
            while k < chars.len() && "<>=".contains(chars[k]) {
                op.push(chars[k]);
                k += 1;
            }
            let rel = match op.as_str() {
                "<" | "<=" | "=<" => Relation::Le,
                ">" | ">=" | "=>" => Relation::Ge,
                "=" => Relation::Eq,
                _ => return Err(err(format!("unknown operator `{op}`"))),
            };
            out.push((line, Tok::Rel(rel)));
        } else if c.is_ascii_digit() || c == '.' {
            let start = k;
            while k < chars.len() && (chars[k].is_ascii_digit() || chars[k] == '.') {
                k += 1;
            }
            if k < chars.len() && (chars[k] == 'e' || chars[k] == 'E') {
                let mut j = k + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    k = j;
                    while k < chars.len() && chars[k].is_ascii_digit() {
                        k += 1;
                    }
                }
            }
            let s: String = chars[start..k].iter().collect();
            let v = s.parse::<f64>().map_err(|_| err(format!("bad number `{s}`")))?;
            out.push((line, Tok::Num(v)));
        } else if is_ident_char(c) {
            let start = k;
            while k < chars.len() && is_ident_char(chars[k]) {
                k += 1;
            }
            out.push((line, Tok::Ident(chars[start..k].iter().collect())));
        } else {
            return Err(err(format!("unexpected character `{c}`")));
        }
    }
    Ok(())
}

fn section_header(line: &str) -> Option<(Section, Option<bool>, usize)> {
    let lower = line.to_ascii_lowercase();
    let table: [(&str, Section, Option<bool>); 13] = [
        ("maximize", Section::Objective, Some(false)),
        ("maximum", Section::Objective, Some(false)),
        ("max", Section::Objective, Some(false)),
        ("minimize", Section::Objective, Some(true)),
        ("minimum", Section::Objective, Some(true)),
        ("min", Section::Objective, Some(true)),
        ("subject to", Section::Rows, None),
        ("such that", Section::Rows, None),
        ("s.t.", Section::Rows, None),
        ("st", Section::Rows, None),
        ("bounds", Section::Bounds, None),
        ("bound", Section::Bounds, None),
        ("end", Section::End, None),
    ];
    for (kw, sec, min) in table {
        if let Some(rest) = lower.strip_prefix(kw) {
            if rest.is_empty() || rest.starts_with(char::is_whitespace) {
                return Some((sec, min, kw.len()));
            }
        }
    }
    None
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    vars: HashMap<String, usize>,
    lp: LinearProgram,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn line(&self) -> usize {
        self.toks.get(self.pos).or(self.toks.last()).map_or(0, |(l, _)| *l)
    }

    fn err(&self, m: impl Into<String>) -> LpError {
        LpError::Parse { line: self.line(), message: m.into() }
    }

    fn var(&mut self, name: &str) -> usize {
        if let Some(&j) = self.vars.get(name) {
            return j;
        }
        let j = self.lp.add_var(name, 0.0);
        self.vars.insert(name.to_string(), j);
        j
    }

    fn label(&mut self) -> Option<String> {
        if let (Some((_, Tok::Ident(name))), Some((_, Tok::Colon))) = (self.toks.get(self.pos), self.toks.get(self.pos + 1)) {
            let name = name.clone();
            self.pos += 2;
            return Some(name);
        }
        None
    }

    fn number(&mut self) -> Result<f64, LpError> {
        let mut sign = 1.0;
        loop {
            match self.peek() {
                Some(Tok::Plus) => self.pos += 1,
                Some(Tok::Minus) => {
                    sign = -sign;
                    self.pos += 1
                }
                Some(Tok::Num(v)) => {
                    let v = *v;
                    self.pos += 1;
                    return Ok(sign * v);
                }
                _ => return Err(self.err("expected a number")),
            }
        }
    }

    /// Linear terms up to (not including) a relation or the end of input.
    fn terms(&mut self) -> Result<Vec<(usize, f64)>, LpError> {
        let mut out = Vec::new();
        loop {
            let mut sign = 1.0;
            let mut coef = None;
            let mut any = false;
            while let Some(t) = self.peek() {
                match t {
                    Tok::Plus => {}
                    Tok::Minus => sign = -sign,
                    _ => break,
                }
                any = true;
                self.pos += 1;
            }
            if let Some(Tok::Num(v)) = self.peek() {
                coef = Some(*v);
                self.pos += 1;
                any = true;
            }
            match self.peek().cloned() {
                Some(Tok::Ident(name)) if self.toks.get(self.pos + 1).map(|(_, t)| t) != Some(&Tok::Colon) => {
                    self.pos += 1;
                    let j = self.var(&name);
                    out.push((j, sign * coef.unwrap_or(1.0)));
                }
                _ => {
                    if coef.is_some_and(|c| c != 0.0) {
                        return Err(self.err("constant terms are not supported"));
                    }
                    if !any {
                        return Ok(out);
                    }
                    if coef.is_none() {
                        return Err(self.err("dangling sign"));
                    }
                }
            }
        }
    }
}

/// Parse an LP file with `Maximize`/`Minimize`, `Subject To`, optional
/// `Bounds` (only `x >= 0`) and `End` sections.
pub fn parse_lp(text: &str) -> Result<ParsedLp, LpError> {
    let mut sections: Vec<(Section, Vec<(usize, Tok)>)> = Vec::new();
    let mut minimize = None;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let body = raw.split('\\').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let rest = match section_header(body) {
            Some((sec, min, len)) => {
                if sec == Section::Objective {
                    if minimize.is_some() {
                        return Err(LpError::Parse { line, message: "second objective section".into() });
                    }
                    minimize = min;
                }
                sections.push((sec, Vec::new()));
                &body[len..]
            }
            None => {
                let lower = body.to_ascii_lowercase();
                if ["general", "generals", "gen", "binary", "binaries", "bin", "semi-continuous", "sos"]
                    .iter()
                    .any(|kw| lower == *kw)
                {
                    return Err(LpError::Parse { line, message: format!("unsupported section `{body}`") });
                }
                body
            }
        };
        let Some((sec, toks)) = sections.last_mut() else {
            return Err(LpError::Parse { line, message: "content before the objective section".into() });
        };
        if *sec == Section::End && !rest.trim().is_empty() {
            return Err(LpError::Parse { line, message: "content after End".into() });
        }
        tokenize(rest, line, toks)?;
    }
    let minimize = minimize.ok_or(LpError::Parse { line: 0, message: "missing objective section".into() })?;
    let mut parser = Parser { toks: Vec::new(), pos: 0, vars: HashMap::new(), lp: LinearProgram::new() };
    for (sec, toks) in sections {
        parser.toks = toks;
        parser.pos = 0;
        match sec {
            Section::Objective => {
                parser.label();
                let terms = parser.terms()?;
                if parser.pos < parser.toks.len() {
                    return Err(parser.err("unexpected token in objective"));
                }
                for (j, c) in terms {
                    parser.lp.objective[j] += if minimize { -c } else { c };
                }
            }
            Section::Rows => {
                while parser.pos < parser.toks.len() {
                    let name = parser.label().unwrap_or_else(|| format!("c{}", parser.lp.rows.len()));
                    let coeffs = parser.terms()?;
                    let rel = match parser.peek() {
                        Some(Tok::Rel(r)) => *r,
                        _ => return Err(parser.err("expected a relation")),
                    };
                    parser.pos += 1;
                    let rhs = parser.number()?;
                    parser.lp.add_row(name, coeffs, rel, rhs);
                }
            }
            Section::Bounds => {
                while parser.pos < parser.toks.len() {
                    let t = &parser.toks[parser.pos..];
                    match t {
                        [(_, Tok::Ident(v)), (_, Tok::Rel(Relation::Ge)), (_, Tok::Num(z)), ..] if *z == 0.0 => {
                            let v = v.clone();
                            parser.var(&v);
                            parser.pos += 3;
                        }
                        [(_, Tok::Num(z)), (_, Tok::Rel(Relation::Le)), (_, Tok::Ident(v)), ..] if *z == 0.0 => {
                            let v = v.clone();
                            parser.var(&v);
                            parser.pos += 3;
                        }
                        _ => return Err(parser.err("only `x >= 0` bounds are supported")),
                    }
                }
            }
            Section::End => {}
        }
    }
    Ok(ParsedLp { lp: parser.lp, minimize })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::{solve, Tolerances};

    #[test]
    fn round_trip() {
        let mut lp = LinearProgram::new();
        let x = lp.add_var("f[A>I]", 2.0);
        let y = lp.add_var("alloc 1", -0.5);
        lp.add_var("idle", 0.0);
        lp.add_row("leg", vec![(x, 1.0), (y, -1.0)], Relation::Le, 0.0);
        lp.add_row("sup", vec![(x, 1.0)], Relation::Le, 10.0);
        lp.add_row("eq", vec![(y, 3.0)], Relation::Eq, 1.25e-3);
        lp.add_row("ge", vec![(y, 1.0), (x, 1.0)], Relation::Ge, -4.0);
        let text = write_lp(&lp);
        let parsed = parse_lp(&text).unwrap();
        assert!(!parsed.minimize);
        assert_eq!(parsed.lp.objective, lp.objective);
        assert_eq!(parsed.lp.rows.len(), 4);
        for (a, b) in parsed.lp.rows.iter().zip(&lp.rows) {
            assert_eq!((a.relation, a.rhs, &a.coeffs), (b.relation, b.rhs, &b.coeffs));
        }
    }

    #[test]
    fn hand_written_minimization() {
        let text = "\\ comment\nMinimize\n cost: 2x + 3 y\nSubject To\n c1: x + y >= 2\n -x + y <= 1\nEnd\n";
        let parsed = parse_lp(text).unwrap();
        assert!(parsed.minimize);
        let s = solve(&parsed.lp, &Tolerances::default()).unwrap();
        assert!((-s.objective - 4.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_unsupported() {
        assert!(parse_lp("Maximize\n x\nSubject To\n x <= 1\nBounds\n x <= 4\nEnd").is_err());
        assert!(parse_lp("Maximize\n x\nSubject To\n x <= 1\nGeneral\n x\nEnd").is_err());
        assert!(parse_lp("Subject To\n x <= 1\n").is_err());
        assert!(matches!(parse_lp("Maximize\n x\nSubject To\n x <= y\n"), Err(LpError::Parse { line: 4, .. })));
    }
}

//! Reader and writer for the ARFF subset used by scenario data files.
//!
//! Supported: `@relation`, `@attribute` (numeric/string/nominal) and
//! `@data` with dense comma-separated rows. Directives are
//! case-insensitive, `%` starts a comment line, `?` is the missing
//! marker, and quoted cells may contain commas. Sparse rows and
//! date/relational attributes are not supported because no scenario
//! file uses them.

use std::fmt::Write as _;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ArffError {
    #[error("{file}:{line}: SYNTAX: {msg}")]
    Syntax { file: String, line: usize, msg: String },
    #[error("{file}:{line}: ARITY: row has {got} cells, expected {want}")]
    Arity { file: String, line: usize, got: usize, want: usize },
    #[error("{file}:{line}: DOMAIN: value {value:?} not in the declared set of attribute {attribute:?}")]
    Domain { file: String, line: usize, value: String, attribute: String },
}

impl ArffError {
    /// Attaches a file name to an error produced by [`parse_arff`].
    pub fn in_file(mut self, name: &str) -> Self {
        match &mut self {
            ArffError::Syntax { file, .. }
            | ArffError::Arity { file, .. }
            | ArffError::Domain { file, .. } => *file = name.to_string(),
        }
        self
    }

    /// Stable error code used by tests and CLI output.
    pub fn code(&self) -> &'static str {
        match self {
            ArffError::Syntax { .. } => "SYNTAX",
            ArffError::Arity { .. } => "ARITY",
            ArffError::Domain { .. } => "DOMAIN",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum AttrKind {
    Numeric,
    Str,
    Nominal(Vec<String>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Attribute {
    pub name: String,
    pub kind: AttrKind,
}

/// One data cell. Nominal values are stored as `Str`.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Missing,
    Num(f64),
    Str(String),
}

impl Value {
    pub fn as_num(&self) -> Option<f64> {
        match self {
            Value::Num(x) => Some(*x),
            _ => None,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            Value::Str(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_missing(&self) -> bool {
        matches!(self, Value::Missing)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArffTable {
    pub relation: String,
    pub attributes: Vec<Attribute>,
    pub rows: Vec<Vec<Value>>,
}

impl ArffTable {
    pub fn attribute_index(&self, name: &str) -> Option<usize> {
        self.attributes.iter().position(|a| a.name == name)
    }
}

fn syntax(line: usize, msg: impl Into<String>) -> ArffError {
    ArffError::Syntax { file: String::new(), line, msg: msg.into() }
}

/// Splits a data or nominal-set line on commas, honoring single and
/// double quotes. Returns (cell text, was quoted).
fn split_cells(line: &str, lineno: usize) -> Result<Vec<(String, bool)>, ArffError> {
    let mut cells = Vec::new();
    let mut cur = String::new();
    let mut quoted = false;
    let mut chars = line.chars().peekable();
    loop {
        // skip leading whitespace of the cell
        while matches!(chars.peek(), Some(c) if c.is_whitespace()) {
            chars.next();
        }
        if let Some(&q) = chars.peek() {
            if q == '\'' || q == '"' {
                chars.next();
                quoted = true;
                let mut closed = false;
                for c in chars.by_ref() {
                    if c == q {
                        closed = true;
                        break;
                    }
                    cur.push(c);
                }
                if !closed {
                    return Err(syntax(lineno, "unterminated quoted value"));
                }
                // consume up to the next comma
                while let Some(&c) = chars.peek() {
                    if c == ',' {
                        break;
                    }
                    if !c.is_whitespace() {
                        return Err(syntax(lineno, "text after closing quote"));
                    }
                    chars.next();
                }
            }
        }
        let mut end = false;
        loop {
            match chars.next() {
                Some(',') => break,
                Some(c) => {
                    if !quoted {
                        cur.push(c);
                    }
                }
                None => {
                    end = true;
                    break;
                }
            }
        }
        let text = if quoted { cur.clone() } else { cur.trim().to_string() };
        cells.push((text, quoted));
        cur.clear();
        quoted = false;
        if end {
            break;
        }
    }
    Ok(cells)
}

fn parse_attribute_decl(rest: &str, lineno: usize) -> Result<Attribute, ArffError> {
    let rest = rest.trim();
    // attribute name may be quoted
    let (name, tail) = if let Some(q) = rest.chars().next().filter(|c| *c == '\'' || *c == '"') {
        let inner = &rest[1..];
        let close = inner
            .find(q)
            .ok_or_else(|| syntax(lineno, "unterminated quoted attribute name"))?;
        (inner[..close].to_string(), inner[close + 1..].trim())
    } else {
        let mut it = rest.splitn(2, char::is_whitespace);
        let name = it.next().unwrap_or("").to_string();
        (name, it.next().unwrap_or("").trim())
    };
    if name.is_empty() {
        return Err(syntax(lineno, "empty attribute name"));
    }
    let kind = if tail.starts_with('{') {
        if !tail.ends_with('}') {
            return Err(syntax(lineno, "unterminated nominal value set"));
        }
        let inner = &tail[1..tail.len() - 1];
        let values: Vec<String> = split_cells(inner, lineno)?
            .into_iter()
            .map(|(v, _)| v)
            .collect();
        if values.iter().any(|v| v.is_empty()) {
            return Err(syntax(lineno, "empty nominal value"));
        }
        AttrKind::Nominal(values)
    } else {
        match tail.to_ascii_lowercase().as_str() {
            "numeric" | "real" | "integer" => AttrKind::Numeric,
            "string" => AttrKind::Str,
            other => return Err(syntax(lineno, format!("unsupported attribute type {other:?}"))),
        }
    };
    Ok(Attribute { name, kind })
}

/// Parses ARFF text into a fully materialized table.
pub fn parse_arff(text: &str) -> Result<ArffTable, ArffError> {
    let mut relation: Option<String> = None;
    let mut attributes: Vec<Attribute> = Vec::new();
    let mut rows: Vec<Vec<Value>> = Vec::new();
    let mut in_data = false;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        if !in_data {
            let lower = line.to_ascii_lowercase();
            if let Some(rest) = lower.strip_prefix("@relation") {
                if relation.is_some() {
                    return Err(syntax(lineno, "duplicate @relation"));
                }
                if rest.is_empty() || !rest.starts_with(char::is_whitespace) {
                    return Err(syntax(lineno, "@relation needs a name"));
                }
                let name = line["@relation".len()..].trim();
                let name = name.trim_matches(|c| c == '\'' || c == '"');
                relation = Some(name.to_string());
            } else if lower.starts_with("@attribute") {
                if relation.is_none() {
                    return Err(syntax(lineno, "@attribute before @relation"));
                }
                let rest = &line["@attribute".len()..];
                if !rest.starts_with(char::is_whitespace) {
                    return Err(syntax(lineno, "malformed @attribute"));
                }
                attributes.push(parse_attribute_decl(rest, lineno)?);
            } else if lower == "@data" {
                if relation.is_none() {
                    return Err(syntax(lineno, "@data before @relation"));
                }
                if attributes.is_empty() {
                    return Err(syntax(lineno, "@data with no attributes"));
                }
                in_data = true;
            } else {
                return Err(syntax(lineno, format!("unknown directive {line:?}")));
            }
            continue;
        }
        let cells = split_cells(line, lineno)?;
        if cells.len() != attributes.len() {
            return Err(ArffError::Arity {
                file: String::new(),
                line: lineno,
                got: cells.len(),
                want: attributes.len(),
            });
        }
        let mut row = Vec::with_capacity(cells.len());
        for ((text, quoted), attr) in cells.into_iter().zip(&attributes) {
            if !quoted && text == "?" {
                row.push(Value::Missing);
                continue;
            }
            match &attr.kind {
                AttrKind::Numeric => {
                    let x: f64 = text.parse().map_err(|_| {
                        syntax(lineno, format!("{text:?} is not numeric (attribute {:?})", attr.name))
                    })?;
                    row.push(Value::Num(x));
                }
                AttrKind::Str => row.push(Value::Str(text)),
                AttrKind::Nominal(values) => {
                    if !values.iter().any(|v| *v == text) {
                        return Err(ArffError::Domain {
                            file: String::new(),
                            line: lineno,
                            value: text,
                            attribute: attr.name.clone(),
                        });
                    }
                    row.push(Value::Str(text));
                }
            }
        }
        rows.push(row);
    }

    let relation = relation.ok_or_else(|| syntax(text.lines().count().max(1), "missing @relation"))?;
    if !in_data {
        return Err(syntax(text.lines().count().max(1), "missing @data"));
    }
    Ok(ArffTable { relation, attributes, rows })
}

fn needs_quoting(s: &str) -> bool {
    s.is_empty()
        || s == "?"
        || s.chars().any(|c| c.is_whitespace() || matches!(c, ',' | '%' | '{' | '}' | '\'' | '"'))
}

fn write_token(out: &mut String, s: &str) {
    if needs_quoting(s) {
        out.push('\'');
        out.push_str(s);
        out.push('\'');
    } else {
        out.push_str(s);
    }
}

/// Shortest decimal form that round-trips through `f64` parsing.
pub fn format_number(x: f64) -> String {
    format!("{x}")
}

/// Serializes a table in canonical form: lowercase directives, one
/// space of separation, no trailing whitespace. `parse_arff` of the
/// output reproduces the table exactly.
pub fn serialize_arff(table: &ArffTable) -> String {
    let mut out = String::new();
    out.push_str("@relation ");
    write_token(&mut out, &table.relation);
    out.push_str("\n\n");
    for attr in &table.attributes {
        out.push_str("@attribute ");
        write_token(&mut out, &attr.name);
        out.push(' ');
        match &attr.kind {
            AttrKind::Numeric => out.push_str("numeric"),
            AttrKind::Str => out.push_str("string"),
            AttrKind::Nominal(values) => {
                out.push('{');
                for (i, v) in values.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    write_token(&mut out, v);
                }
                out.push('}');
            }
        }
        out.push('\n');
    }
    out.push_str("\n@data\n");
    for row in &table.rows {
        for (i, cell) in row.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            match cell {
                Value::Missing => out.push('?'),
                Value::Num(x) => {
                    let _ = write!(out, "{}", format_number(*x));
                }
                Value::Str(s) => write_token(&mut out, s),
            }
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_table() {
        let t = parse_arff("@relation r\n@attribute a numeric\n@data\n1.5\n").unwrap();
        assert_eq!(t.relation, "r");
        assert_eq!(t.attributes.len(), 1);
        assert_eq!(t.rows, vec![vec![Value::Num(1.5)]]);
    }

    #[test]
    fn missing_marker_is_not_zero() {
        let t = parse_arff("@relation r\n@attribute a numeric\n@data\n?\n").unwrap();
        assert_eq!(t.rows[0][0], Value::Missing);
    }

    #[test]
    fn arity_error_carries_line() {
        let err = parse_arff(
            "@relation r\n@attribute a numeric\n@attribute b numeric\n@attribute c numeric\n@data\n1,2\n",
        )
        .unwrap_err();
        match err {
            ArffError::Arity { line, got, want, .. } => {
                assert_eq!((line, got, want), (6, 2, 3));
            }
            other => panic!("expected arity error, got {other:?}"),
        }
    }

    #[test]
    fn nominal_domain_enforced() {
        let src = "@relation r\n@attribute s {ok,timeout}\n@data\ncrash\n";
        let err = parse_arff(src).unwrap_err();
        assert_eq!(err.code(), "DOMAIN");
    }

    #[test]
    fn quoted_cells_may_contain_commas() {
        let src = "@relation r\n@attribute s string\n@attribute x numeric\n@data\n'a,b',3\n";
        let t = parse_arff(src).unwrap();
        assert_eq!(t.rows[0][0], Value::Str("a,b".into()));
        assert_eq!(t.rows[0][1], Value::Num(3.0));
    }

    #[test]
    fn directives_case_insensitive_and_comments_skipped() {
        let src = "% header comment\n@RELATION r\n@Attribute a NUMERIC\n@DATA\n% row comment\n2\n";
        let t = parse_arff(src).unwrap();
        assert_eq!(t.rows.len(), 1);
    }

    #[test]
    fn roundtrip_preserves_missing_count() {
        let src = "@relation r\n@attribute a numeric\n@attribute s {x,y}\n@data\n?,x\n1,?\n?,?\n";
        let t = parse_arff(src).unwrap();
        let back = parse_arff(&serialize_arff(&t)).unwrap();
        assert_eq!(t, back);
        let missing = |t: &ArffTable| {
            t.rows.iter().flatten().filter(|v| v.is_missing()).count()
        };
        assert_eq!(missing(&t), 4);
        assert_eq!(missing(&back), 4);
    }

    #[test]
    fn serialize_is_fixed_point() {
        let src = "@relation   r\n\n@attribute a numeric\n@attribute 'has space' string\n@data\n1,'q u o'\n";
        let t = parse_arff(src).unwrap();
        let once = serialize_arff(&t);
        let twice = serialize_arff(&parse_arff(&once).unwrap());
        assert_eq!(once, twice);
    }
}

//! Line-based text formats for complexes, voltage assignments and
//! presentations.
//!
//! Complex format, one cell per line, ids dense and in order:
//!
//! ```text
//! V 0 label
//! E 0 <src> <dst> label
//! F 0 1,-2,3 label        # signed edges, 1-based, negative = reversed
//! C 0 0,1,2,3,4,5 label   # six square ids, opposite faces adjacent
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::complex::{Complex, ComplexError, SignedEdge};
use crate::perm::{Perm, PermError};
use crate::pi1::Word;

#[derive(Debug, Error, PartialEq)]
pub enum TextError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Complex { line: usize, source: ComplexError },
    #[error("line {line}: {source}")]
    Perm { line: usize, source: PermError },
}

fn syntax(line: usize, msg: impl Into<String>) -> TextError {
    TextError::Syntax {
        line,
        msg: msg.into(),
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

pub fn write_complex(c: &Complex) -> String {
    let mut s = String::new();
    for v in 0..c.num_vertices() {
        let _ = writeln!(s, "V {v} {}", c.vertex_label(v));
    }
    for (i, e) in c.edges().iter().enumerate() {
        let _ = writeln!(s, "E {i} {} {} {}", e.src, e.dst, e.label);
    }
    for (i, f) in c.faces().iter().enumerate() {
        let b: Vec<String> = f.boundary.iter().map(|x| x.to_signed_int().to_string()).collect();
        let _ = writeln!(s, "F {i} {} {}", b.join(","), f.label);
    }
    for (i, k) in c.cubes().iter().enumerate() {
        let b: Vec<String> = k.faces.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(s, "C {i} {} {}", b.join(","), k.label);
    }
    // keep labels trailing-space free
    s.lines().map(|l| l.trim_end().to_string() + "\n").collect()
}

fn parse_id(line: usize, tok: Option<&str>, what: &str) -> Result<usize, TextError> {
    tok.ok_or_else(|| syntax(line, format!("missing {what}")))?
        .parse()
        .map_err(|_| syntax(line, format!("bad {what}")))
}

fn check_dense(line: usize, got: usize, expected: usize) -> Result<(), TextError> {
    if got != expected {
        return Err(syntax(line, format!("expected id {expected}, found {got}")));
    }
    Ok(())
}

pub fn parse_complex(text: &str) -> Result<Complex, TextError> {
    let mut c = Complex::new();
    for (ln, l) in content_lines(text) {
        let mut it = l.splitn(2, char::is_whitespace);
        let kind = it.next().unwrap_or("");
        let rest = it.next().unwrap_or("").trim_start();
        let mut toks = rest.splitn(2, char::is_whitespace);
        let id = parse_id(ln, toks.next(), "id")?;
        let tail = toks.next().unwrap_or("").trim_start();
        let cx = |source| TextError::Complex { line: ln, source };
        match kind {
            "V" => {
                check_dense(ln, id, c.num_vertices())?;
                c.add_vertex(tail.trim());
            }
            "E" => {
                check_dense(ln, id, c.num_edges())?;
                let mut t = tail.splitn(3, char::is_whitespace);
                let s = parse_id(ln, t.next(), "source")?;
                let d = parse_id(ln, t.next(), "target")?;
                let label = t.next().unwrap_or("").trim();
                c.add_edge(s, d, label).map_err(cx)?;
            }
            "F" => {
                check_dense(ln, id, c.num_faces())?;
                let mut t = tail.splitn(2, char::is_whitespace);
                let list = t.next().ok_or_else(|| syntax(ln, "missing boundary"))?;
                let label = t.next().unwrap_or("").trim();
                let mut b = Vec::new();
                for x in list.split(',') {
                    let v: i64 = x.parse().map_err(|_| syntax(ln, "bad signed edge"))?;
                    b.push(SignedEdge::from_signed_int(v).ok_or_else(|| syntax(ln, "edge 0"))?);
                }
                c.add_face(b, label).map_err(cx)?;
            }
            "C" => {
                check_dense(ln, id, c.num_cubes())?;
                let mut t = tail.splitn(2, char::is_whitespace);
                let list = t.next().ok_or_else(|| syntax(ln, "missing faces"))?;
                let label = t.next().unwrap_or("").trim();
                let fs: Vec<usize> = list
                    .split(',')
                    .map(|x| x.parse().map_err(|_| syntax(ln, "bad face id")))
                    .collect::<Result<_, _>>()?;
                let arr: [usize; 6] = fs
                    .try_into()
                    .map_err(|_| syntax(ln, "a cube needs six faces"))?;
                c.add_cube(arr, label).map_err(cx)?;
            }
            other => return Err(syntax(ln, format!("unknown record {other:?}"))),
        }
    }
    Ok(c)
}

/// `edge-id cycle-notation` per line.
pub fn write_voltages(v: &BTreeMap<usize, Perm>) -> String {
    v.iter().map(|(e, p)| format!("{e} {p}\n")).collect()
}

pub fn parse_voltages(text: &str, degree: usize) -> Result<BTreeMap<usize, Perm>, TextError> {
    let mut out = BTreeMap::new();
    for (ln, l) in content_lines(text) {
        let mut it = l.splitn(2, char::is_whitespace);
        let e = parse_id(ln, it.next(), "edge id")?;
        let p = Perm::parse(degree, it.next().unwrap_or("id"))
            .map_err(|source| TextError::Perm { line: ln, source })?;
        if out.insert(e, p).is_some() {
            return Err(syntax(ln, format!("edge {e} assigned twice")));
        }
    }
    Ok(out)
}

/// A presentation with named generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedPresentation {
    pub generators: Vec<String>,
    /// Letters index `generators` from 1; negative means inverse.
    pub relators: Vec<Word>,
}

impl NamedPresentation {
    pub fn word_string(&self, w: &[i32]) -> String {
        w.iter()
            .map(|&x| {
                let g = &self.generators[x.unsigned_abs() as usize - 1];
                if x < 0 {
                    format!("{g}^-1")
                } else {
                    g.clone()
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("gen: {}\n", self.generators.join(" "));
        for r in &self.relators {
            let _ = writeln!(s, "rel: {}", self.word_string(r));
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self, TextError> {
        let mut generators: Vec<String> = Vec::new();
        let mut relators = Vec::new();
        for (ln, l) in content_lines(text) {
            if let Some(g) = l.strip_prefix("gen:") {
                for name in g.split_whitespace() {
                    if name.contains('^') || generators.iter().any(|x| x == name) {
                        return Err(syntax(ln, format!("bad or repeated generator {name}")));
                    }
                    generators.push(name.to_string());
                }
            } else if let Some(r) = l.strip_prefix("rel:") {
                let mut w = Vec::new();
                for tok in r.split_whitespace() {
                    let (name, inv) = match tok.strip_suffix("^-1") {
                        Some(n) => (n, true),
                        None => (tok, false),
                    };
                    let i = generators
                        .iter()
                        .position(|g| g == name)
                        .ok_or_else(|| syntax(ln, format!("unknown generator {name}")))?;
                    let x = i as i32 + 1;
                    w.push(if inv { -x } else { x });
                }
                relators.push(w);
            } else {
                return Err(syntax(ln, "expected gen: or rel:"));
            }
        }
        Ok(NamedPresentation {
            generators,
            relators,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::product::{graph_power, theta_graph};
    use proptest::prelude::*;

    #[test]
    fn theta_cubed_round_trips() {
        let c = graph_power(&theta_graph(), 3).unwrap().complex;
        let t = write_complex(&c);
        let back = parse_complex(&t).unwrap();
        assert_eq!(write_complex(&back), t);
        assert_eq!(back.counts(), c.counts());
    }

    #[test]
    fn complex_errors_carry_line_numbers() {
        let e = parse_complex("V 0 p\nE 0 0 3 x\n").unwrap_err();
        assert!(matches!(e, TextError::Complex { line: 2, .. }));
        assert!(matches!(parse_complex("V 1 p"), Err(TextError::Syntax { line: 1, .. })));
        assert!(parse_complex("Q 0").is_err());
        assert!(parse_complex("V 0 p\nE 0 0 0 x\nF 0 0 f").is_err());
    }

    #[test]
    fn voltages_round_trip() {
        let mut m = BTreeMap::new();
        m.insert(3, Perm::from_cycles(5, &[vec![2, 5, 3, 4]]).unwrap());
        m.insert(7, Perm::identity(5));
        let t = write_voltages(&m);
        assert_eq!(parse_voltages(&t, 5).unwrap(), m);
        assert!(parse_voltages("1 (1 2)\n1 id", 5).is_err());
    }

    #[test]
    fn presentation_text() {
        let p = NamedPresentation::parse("gen: t a\nrel: t a t^-1 a^-1 a^-1\n").unwrap();
        assert_eq!(p.relators, vec![vec![1, 2, -1, -2, -2]]);
        assert_eq!(NamedPresentation::parse(&p.to_text()).unwrap(), p);
        assert!(NamedPresentation::parse("rel: x").is_err());
    }

    proptest! {
        #[test]
        fn parse_complex_never_panics(s in "[VEFC0-9 ,\\-\n]{0,80}") {
            let _ = parse_complex(&s);
        }

        #[test]
        fn presentation_round_trip(rels in proptest::collection::vec(
            proptest::collection::vec(prop_oneof![-3i32..=-1, 1i32..=3], 0..8), 0..4)) {
            let p = NamedPresentation { generators: vec!["x".into(), "y".into(), "z".into()], relators: rels };
            prop_assert_eq!(NamedPresentation::parse(&p.to_text()).unwrap(), p);
        }
    }
}

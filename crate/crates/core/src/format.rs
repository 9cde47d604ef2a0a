//! Plain-text formats for graphs, permutations, move and flip sequences and
//! certificates, plus the built-in graph names.
//!
//! Every format is 1-based, whitespace separated and newline terminated.
//! Lines starting with `#` and blank lines are ignored when reading.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::flip::{FlipSequence, PathFlip};
use crate::graph::Graph;
use crate::perm::Permutation;
use crate::puzzle::{Move, MoveSequence};
use crate::square::deleted_path_square;

/// Non-comment lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn numbers(line: usize, s: &str) -> Result<Vec<usize>> {
    s.split_whitespace()
        .map(|t| {
            t.parse::<usize>().map_err(|_| {
                Error::parse(
                    line,
                    format!("expected a non-negative integer, found `{t}`"),
                )
            })
        })
        .collect()
}

fn vertex(line: usize, v: usize, n: usize) -> Result<usize> {
    if v == 0 || v > n {
        return Err(Error::parse(line, format!("vertex {v} outside 1..={n}")));
    }
    Ok(v - 1)
}

// ------------------------------------------------------------------ graphs

/// Reads `n m` followed by `m` edge lines `u v`.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut lines = content_lines(text);
    let (hl, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "missing header `n m`"))?;
    let h = numbers(hl, header)?;
    let [n, m] = h[..] else {
        return Err(Error::parse(hl, "header must be `n m`"));
    };
    let mut g = Graph::empty(n);
    let mut count = 0;
    for (ln, l) in lines {
        let e = numbers(ln, l)?;
        let [u, v] = e[..] else {
            return Err(Error::parse(ln, "edge line must be `u v`"));
        };
        let (u, v) = (vertex(ln, u, n)?, vertex(ln, v, n)?);
        if u == v {
            return Err(Error::parse(ln, format!("self-loop at {}", u + 1)));
        }
        if g.has_edge(u, v) {
            return Err(Error::parse(
                ln,
                format!("duplicate edge {} {}", u.min(v) + 1, u.max(v) + 1),
            ));
        }
        g.insert_edge(u, v);
        count += 1;
    }
    if count != m {
        return Err(Error::parse(
            hl,
            format!("header announces {m} edges, found {count}"),
        ));
    }
    Ok(g)
}

pub fn write_graph(g: &Graph) -> String {
    let mut s = format!("{} {}\n", g.n(), g.edge_count());
    for (u, v) in g.edges() {
        let _ = writeln!(s, "{} {}", u + 1, v + 1);
    }
    s
}

fn param(spec: &str, prefix: &str) -> Option<Result<usize>> {
    let rest = spec.strip_prefix(prefix)?;
    if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    Some(
        rest.parse()
            .map_err(|_| Error::InvalidParameter(format!("bad size in `{spec}`"))),
    )
}

/// Resolves a built-in graph name, or `None` if `spec` is not one.
///
/// Names: `p<n>`, `c<n>`, `star<l>`, `k<n>`, `q<d>`, `theta122`,
/// `grid<a>x<b>`, `k<a>,<b>,...` (complete multipartite),
/// `kjoin<k>,<n>` (`K_k` joined with `n-k` isolated vertices),
/// `sqminus<n>` (`P_n^2` without the edge between the last vertex and the
/// one three before it) and `sq:<name>`
/// for the square of another built-in.
pub fn builtin_graph(spec: &str) -> Option<Result<Graph>> {
    if let Some(inner) = spec.strip_prefix("sq:") {
        return builtin_graph(inner).map(|g| g.map(|g| g.square()));
    }
    if spec == "theta122" {
        return Some(Ok(Graph::theta_122()));
    }
    if let Some(rest) = spec.strip_prefix("grid") {
        let (a, b) = rest.split_once('x')?;
        let (a, b) = (a.parse().ok()?, b.parse().ok()?);
        return Some(Graph::grid(a, b));
    }
    if let Some(rest) = spec.strip_prefix("kjoin") {
        let (k, n) = rest.split_once(',')?;
        let (k, n): (usize, usize) = (k.parse().ok()?, n.parse().ok()?);
        return Some(crate::classify::split_pebbles(n, k));
    }
    if let Some(r) = param(spec, "sqminus") {
        return Some(r.and_then(deleted_path_square));
    }
    if let Some(r) = param(spec, "star") {
        return Some(r.and_then(Graph::star));
    }
    if let Some(rest) = spec.strip_prefix('k') {
        if rest.contains(',') {
            let parts: Option<Vec<usize>> = rest.split(',').map(|p| p.parse().ok()).collect();
            return Some(Graph::complete_multipartite(&parts?));
        }
    }
    type Ctor = fn(usize) -> Result<Graph>;
    let ctors: [(&str, Ctor); 4] = [
        ("p", Graph::path),
        ("c", Graph::cycle),
        ("k", Graph::complete),
        ("q", Graph::hypercube),
    ];
    for (prefix, ctor) in ctors {
        if let Some(r) = param(spec, prefix) {
            return Some(r.and_then(ctor));
        }
    }
    None
}

// ------------------------------------------------------------ permutations

pub fn parse_permutation(text: &str) -> Result<Permutation> {
    let mut lines = content_lines(text);
    let (ln, l) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "missing permutation line"))?;
    let p = parse_permutation_line(ln, l)?;
    if let Some((ln, _)) = lines.next() {
        return Err(Error::parse(ln, "trailing content after the permutation"));
    }
    Ok(p)
}

fn parse_permutation_line(ln: usize, l: &str) -> Result<Permutation> {
    Permutation::from_one_based(&numbers(ln, l)?).map_err(|e| Error::parse(ln, e.to_string()))
}

pub fn write_permutation(p: &Permutation) -> String {
    format!("{p}\n")
}

// ----------------------------------------------------------- move sequences

fn parse_moves_from(
    lines: &mut dyn Iterator<Item = (usize, &str)>,
    n: Option<usize>,
) -> Result<MoveSequence> {
    let (hl, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "missing move count"))?;
    let k = match numbers(hl, header)?[..] {
        [k] => k,
        _ => return Err(Error::parse(hl, "move count must be a single integer")),
    };
    let mut moves = Vec::with_capacity(k);
    for (ln, l) in &mut *lines {
        let xs = numbers(ln, l)?;
        let [a, b] = xs[..] else {
            return Err(Error::parse(ln, "move line must be `x1 x2`"));
        };
        if a == 0 || b == 0 || n.is_some_and(|n| a > n || b > n) {
            return Err(Error::parse(
                ln,
                format!("board vertex out of range in `{l}`"),
            ));
        }
        moves.push(Move::new(a - 1, b - 1));
    }
    if moves.len() != k {
        return Err(Error::parse(
            hl,
            format!("announced {k} moves, found {}", moves.len()),
        ));
    }
    Ok(MoveSequence::new(moves))
}

pub fn parse_moves(text: &str) -> Result<MoveSequence> {
    parse_moves_from(&mut content_lines(text), None)
}

pub fn write_moves(moves: &MoveSequence) -> String {
    let mut s = String::with_capacity(8 * moves.len() + 8);
    let _ = writeln!(s, "{}", moves.len());
    for m in &moves.moves {
        let _ = writeln!(s, "{} {}", m.x1 + 1, m.x2 + 1);
    }
    s
}

// ----------------------------------------------------------- flip sequences

fn parse_flips_from(lines: &mut dyn Iterator<Item = (usize, &str)>) -> Result<FlipSequence> {
    let (hl, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "missing flip count"))?;
    let k = match numbers(hl, header)?[..] {
        [k] => k,
        _ => return Err(Error::parse(hl, "flip count must be a single integer")),
    };
    let mut flips = Vec::with_capacity(k);
    for (ln, l) in &mut *lines {
        let xs = numbers(ln, l)?;
        let Some((&len, vs)) = xs.split_first() else {
            return Err(Error::parse(ln, "empty flip line"));
        };
        if vs.len() != len + 1 {
            return Err(Error::parse(
                ln,
                format!(
                    "path length {len} needs {} vertices, found {}",
                    len + 1,
                    vs.len()
                ),
            ));
        }
        if vs.contains(&0) {
            return Err(Error::parse(ln, "vertices are 1-based"));
        }
        flips.push(PathFlip::new(vs.iter().map(|v| v - 1).collect()));
    }
    if flips.len() != k {
        return Err(Error::parse(
            hl,
            format!("announced {k} flips, found {}", flips.len()),
        ));
    }
    Ok(FlipSequence::new(flips))
}

pub fn parse_flips(text: &str) -> Result<FlipSequence> {
    parse_flips_from(&mut content_lines(text))
}

pub fn write_flips(seq: &FlipSequence) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{}", seq.len());
    for f in &seq.flips {
        let _ = write!(s, "{}", f.path.len().saturating_sub(1));
        for v in &f.path {
            let _ = write!(s, " {}", v + 1);
        }
        s.push('\n');
    }
    s
}

// ------------------------------------------------------------- certificates

/// A certificate as stored on disk: graph specs instead of graphs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateFile<S> {
    /// `(key, spec)` pairs from the descriptor line, e.g. `board=p7`.
    pub descriptor: Vec<(String, String)>,
    pub start: Permutation,
    pub end: Permutation,
    pub body: S,
}

impl<S> CertificateFile<S> {
    pub fn get(&self, key: &str) -> Option<&str> {
        self.descriptor
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }
}

fn parse_descriptor(ln: usize, l: &str) -> Result<Vec<(String, String)>> {
    l.split_whitespace()
        .map(|kv| {
            kv.split_once('=')
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .ok_or_else(|| {
                    Error::parse(ln, format!("descriptor entry `{kv}` is not key=value"))
                })
        })
        .collect()
}

fn parse_certificate_with<'a, S>(
    text: &'a str,
    body: impl FnOnce(&mut dyn Iterator<Item = (usize, &'a str)>, usize) -> Result<S>,
) -> Result<CertificateFile<S>> {
    let mut lines = content_lines(text);
    let (dl, d) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "missing descriptor line"))?;
    let descriptor = parse_descriptor(dl, d)?;
    let (sl, s) = lines
        .next()
        .ok_or_else(|| Error::parse(dl, "missing start configuration"))?;
    let start = parse_permutation_line(sl, s)?;
    let (el, e) = lines
        .next()
        .ok_or_else(|| Error::parse(sl, "missing end configuration"))?;
    let end = parse_permutation_line(el, e)?;
    if end.len() != start.len() {
        return Err(Error::parse(
            el,
            "start and end configurations differ in size",
        ));
    }
    let body = body(&mut lines, start.len())?;
    Ok(CertificateFile {
        descriptor,
        start,
        end,
        body,
    })
}

pub fn parse_move_certificate(text: &str) -> Result<CertificateFile<MoveSequence>> {
    parse_certificate_with(text, |lines, n| parse_moves_from(lines, Some(n)))
}

pub fn parse_flip_certificate(text: &str) -> Result<CertificateFile<FlipSequence>> {
    parse_certificate_with(text, |lines, _| parse_flips_from(lines))
}

fn write_header(descriptor: &[(String, String)], start: &Permutation, end: &Permutation) -> String {
    let d: Vec<String> = descriptor.iter().map(|(k, v)| format!("{k}={v}")).collect();
    format!("{}\n{start}\n{end}\n", d.join(" "))
}

pub fn write_move_certificate(c: &CertificateFile<MoveSequence>) -> String {
    write_header(&c.descriptor, &c.start, &c.end) + &write_moves(&c.body)
}

pub fn write_flip_certificate(c: &CertificateFile<FlipSequence>) -> String {
    write_header(&c.descriptor, &c.start, &c.end) + &write_flips(&c.body)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_round_trip() {
        let g = parse_graph("# a path\n3 2\n1 2\n\n2 3\n").unwrap();
        assert_eq!(g, Graph::path(3).unwrap());
        assert_eq!(write_graph(&g), "3 2\n1 2\n2 3\n");
        let q3 = Graph::hypercube(3).unwrap();
        assert_eq!(parse_graph(&write_graph(&q3)).unwrap(), q3);
    }

    #[test]
    fn graph_errors_name_the_line() {
        let cases = [
            ("3 1\n1 4\n", 2),
            ("3 2\n1 2\n2 1\n", 3),
            ("3 1\n2 2\n", 2),
            ("3\n", 1),
            ("3 2\n1 2\n", 1),
            ("3 1\n1 x\n", 2),
        ];
        for (text, line) in cases {
            match parse_graph(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn builtins() {
        assert_eq!(
            builtin_graph("p4").unwrap().unwrap(),
            Graph::path(4).unwrap()
        );
        assert_eq!(builtin_graph("c5").unwrap().unwrap().edge_count(), 5);
        assert_eq!(builtin_graph("star5").unwrap().unwrap().n(), 6);
        assert_eq!(builtin_graph("k4").unwrap().unwrap().edge_count(), 6);
        assert_eq!(builtin_graph("q3").unwrap().unwrap().n(), 8);
        assert_eq!(builtin_graph("grid2x3").unwrap().unwrap().edge_count(), 7);
        assert_eq!(builtin_graph("k2,2,2").unwrap().unwrap().edge_count(), 12);
        assert_eq!(
            builtin_graph("kjoin2,4").unwrap().unwrap().edge_count(),
            1 + 2 * 2
        );
        assert_eq!(
            builtin_graph("sq:p5").unwrap().unwrap(),
            Graph::path(5).unwrap().square()
        );
        assert_eq!(
            builtin_graph("sqminus5").unwrap().unwrap(),
            deleted_path_square(5).unwrap()
        );
        assert!(builtin_graph("theta122").unwrap().unwrap().is_theta_122());
        assert!(builtin_graph("graph.txt").is_none());
        assert!(builtin_graph("c2").unwrap().is_err());
    }

    #[test]
    fn permutation_format() {
        let p = parse_permutation("3 1 2\n").unwrap();
        assert_eq!(p.as_slice(), &[2, 0, 1]);
        assert_eq!(write_permutation(&p), "3 1 2\n");
        assert!(parse_permutation("1 1 2\n").is_err());
        assert!(parse_permutation("0 1 2\n").is_err());
    }

    #[test]
    fn move_and_flip_formats() {
        let ms = MoveSequence::new(vec![Move::new(0, 1), Move::new(2, 1)]);
        let text = write_moves(&ms);
        assert_eq!(text, "2\n1 2\n3 2\n");
        assert_eq!(parse_moves(&text).unwrap(), ms);
        assert!(parse_moves("3\n1 2\n").is_err());

        let fs = FlipSequence::new(vec![
            PathFlip::new(vec![0, 1, 2]),
            PathFlip::new(vec![3, 4]),
        ]);
        let text = write_flips(&fs);
        assert_eq!(text, "2\n2 1 2 3\n1 4 5\n");
        assert_eq!(parse_flips(&text).unwrap(), fs);
        assert!(parse_flips("1\n2 1 2\n").is_err());
    }

    #[test]
    fn certificate_round_trip() {
        let c = CertificateFile {
            descriptor: vec![
                ("board".into(), "p2".into()),
                ("pebbles".into(), "p2".into()),
            ],
            start: Permutation::identity(2),
            end: Permutation::from_one_based(&[2, 1]).unwrap(),
            body: MoveSequence::new(vec![Move::new(0, 1)]),
        };
        let text = write_move_certificate(&c);
        assert_eq!(text, "board=p2 pebbles=p2\n1 2\n2 1\n1\n1 2\n");
        let back = parse_move_certificate(&text).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.get("pebbles"), Some("p2"));
        assert!(parse_move_certificate("board=p2\n1 2\n2 1\n1\n1 3\n").is_err());
    }
}

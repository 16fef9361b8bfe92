//! Labeled digraph model: the input graph, label costs, boolean layer
//! matrices, and the text file format.

use std::collections::BTreeSet;
use std::fmt;

/// Edge label over the two-symbol parenthesis alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    /// Open parenthesis `a`, cost +1.
    Open,
    /// Close parenthesis `a⁻¹`, cost -1.
    Close,
}

impl Label {
    /// Token used in graph files: `a` for open, `A` for close.
    pub fn token(self) -> &'static str {
        match self {
            Label::Open => "a",
            Label::Close => "A",
        }
    }
}

/// Cost of traversing an edge with the given label.
pub fn label_cost(label: Label) -> i32 {
    match label {
        Label::Open => 1,
        Label::Close => -1,
    }
}

/// Which closure rule variant a solver applies.
///
/// `Dyck` forbids joining a -1 edge directly to a +1 edge (balanced
/// parentheses, prefix sums stay nonnegative). `SemiDyck` allows both
/// orderings (equal counts of both symbols).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Dyck,
    SemiDyck,
}

impl Mode {
    pub const BOTH: [Mode; 2] = [Mode::Dyck, Mode::SemiDyck];

    pub fn name(self) -> &'static str {
        match self {
            Mode::Dyck => "dyck",
            Mode::SemiDyck => "semidyck",
        }
    }
}

/// Labeled directed multigraph over dense vertex ids `0..n`.
///
/// Duplicate `(src, dst, label)` triples collapse to one; the algorithms
/// are set based, only presence matters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ldg {
    n: usize,
    edges: BTreeSet<(usize, usize, Label)>,
}

impl Ldg {
    pub fn new(n: usize) -> Self {
        Ldg {
            n,
            edges: BTreeSet::new(),
        }
    }

    pub fn with_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize, Label)>,
    {
        let mut g = Ldg::new(n);
        for (src, dst, label) in edges {
            g.add_edge(src, dst, label)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, src: usize, dst: usize, label: Label) -> Result<(), GraphError> {
        if src >= self.n || dst >= self.n {
            return Err(GraphError::VertexOutOfRange {
                id: src.max(dst),
                n: self.n,
            });
        }
        self.edges.insert((src, dst, label));
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, Label)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, src: usize, dst: usize, label: Label) -> bool {
        self.edges.contains(&(src, dst, label))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphError {
    VertexOutOfRange { id: usize, n: usize },
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::VertexOutOfRange { id, n } => {
                write!(f, "vertex id {id} out of range for graph with {n} vertices")
            }
        }
    }
}

impl std::error::Error for GraphError {}

/// Dense square boolean matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoolMatrix {
    n: usize,
    bits: Vec<bool>,
}

impl BoolMatrix {
    pub fn new(n: usize) -> Self {
        BoolMatrix {
            n,
            bits: vec![false; n * n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        self.bits[i * self.n + j] = v;
    }

    /// Number of true cells.
    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Cellwise or with another matrix of the same dimension.
    pub fn union_with(&mut self, other: &BoolMatrix) {
        assert_eq!(self.n, other.n, "dimension mismatch");
        for (a, b) in self.bits.iter_mut().zip(other.bits.iter()) {
            *a |= *b;
        }
    }

    /// True if every set cell of `self` is also set in `other`.
    pub fn subset_of(&self, other: &BoolMatrix) -> bool {
        assert_eq!(self.n, other.n, "dimension mismatch");
        self.bits
            .iter()
            .zip(other.bits.iter())
            .all(|(a, b)| !*a || *b)
    }

    /// First cell where the two matrices differ, if any.
    pub fn first_difference(&self, other: &BoolMatrix) -> Option<(usize, usize)> {
        assert_eq!(self.n, other.n, "dimension mismatch");
        for i in 0..self.n {
            for j in 0..self.n {
                if self.get(i, j) != other.get(i, j) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn iter_set(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n;
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(move |(idx, _)| (idx / n, idx % n))
    }
}

/// Three n x n boolean layers for -1 / 0 / +1 edge (or discovered walk)
/// presence. Absence of an edge is plain boolean absence, never a sentinel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriMatrix {
    pub n: usize,
    pub neg: BoolMatrix,
    pub zero: BoolMatrix,
    pub pos: BoolMatrix,
}

impl TriMatrix {
    pub fn new(n: usize) -> Self {
        TriMatrix {
            n,
            neg: BoolMatrix::new(n),
            zero: BoolMatrix::new(n),
            pos: BoolMatrix::new(n),
        }
    }
}

/// Builds the initial adjacency layers from a graph. The zero layer starts
/// all false; +1 edges land in `pos`, -1 edges in `neg`.
pub fn to_tri_matrix(g: &Ldg) -> TriMatrix {
    let mut t = TriMatrix::new(g.n());
    for (src, dst, label) in g.edges() {
        match label {
            Label::Open => t.pos.set(src, dst, true),
            Label::Close => t.neg.set(src, dst, true),
        }
    }
    t
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseError {
    MalformedHeader { line: usize, text: String },
    MalformedEdge { line: usize, text: String },
    VertexOutOfRange { line: usize, id: usize, n: usize },
    UnknownLabel { line: usize, token: String },
    EdgeCountMismatch { declared: usize, found: usize },
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::MalformedHeader { line, text } => {
                write!(f, "line {line}: malformed header {text:?}, expected \"n m\"")
            }
            ParseError::MalformedEdge { line, text } => {
                write!(f, "line {line}: malformed edge {text:?}, expected \"src dst label\"")
            }
            ParseError::VertexOutOfRange { line, id, n } => {
                write!(f, "line {line}: vertex id {id} out of range (n = {n})")
            }
            ParseError::UnknownLabel { line, token } => {
                write!(f, "line {line}: unknown label token {token:?}, expected \"a\" or \"A\"")
            }
            ParseError::EdgeCountMismatch { declared, found } => {
                write!(f, "header declares {declared} edges but file has {found}")
            }
        }
    }
}

impl std::error::Error for ParseError {}

/// Parses the graph file format: header line `n m`, then `m` lines
/// `src dst label` with label `a` (open) or `A` (close). `#` starts a
/// comment, blank lines are ignored, line order is irrelevant.
pub fn parse_graph(text: &str) -> Result<Ldg, ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut graph: Option<Ldg> = None;
    let mut found = 0usize;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();

        if header.is_none() {
            if fields.len() != 2 {
                return Err(ParseError::MalformedHeader {
                    line: line_no,
                    text: line.to_string(),
                });
            }
            let n = fields[0].parse::<usize>().map_err(|_| ParseError::MalformedHeader {
                line: line_no,
                text: line.to_string(),
            })?;
            let m = fields[1].parse::<usize>().map_err(|_| ParseError::MalformedHeader {
                line: line_no,
                text: line.to_string(),
            })?;
            header = Some((n, m));
            graph = Some(Ldg::new(n));
            continue;
        }

        if fields.len() != 3 {
            return Err(ParseError::MalformedEdge {
                line: line_no,
                text: line.to_string(),
            });
        }
        let src = fields[0].parse::<usize>().map_err(|_| ParseError::MalformedEdge {
            line: line_no,
            text: line.to_string(),
        })?;
        let dst = fields[1].parse::<usize>().map_err(|_| ParseError::MalformedEdge {
            line: line_no,
            text: line.to_string(),
        })?;
        let label = match fields[2] {
            "a" => Label::Open,
            "A" => Label::Close,
            other => {
                return Err(ParseError::UnknownLabel {
                    line: line_no,
                    token: other.to_string(),
                })
            }
        };
        let g = graph.as_mut().expect("header parsed before edges");
        g.add_edge(src, dst, label)
            .map_err(|_| ParseError::VertexOutOfRange {
                line: line_no,
                id: src.max(dst),
                n: g.n(),
            })?;
        found += 1;
    }

    let (_, m) = header.ok_or(ParseError::MalformedHeader {
        line: 0,
        text: String::new(),
    })?;
    if found != m {
        return Err(ParseError::EdgeCountMismatch {
            declared: m,
            found,
        });
    }
    Ok(graph.expect("graph allocated with header"))
}

/// Writes a graph in the same format `parse_graph` reads. Edges come out
/// sorted, so output is deterministic.
pub fn serialize_graph(g: &Ldg) -> String {
    let mut out = format!("{} {}\n", g.n(), g.edge_count());
    for (src, dst, label) in g.edges() {
        out.push_str(&format!("{} {} {}\n", src, dst, label.token()));
    }
    out
}

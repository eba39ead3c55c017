//! Simple graphs on at most 64 vertices, bipartite graphs with a fixed part
//! split, graph6 interchange, and the structural operations used by the
//! solvers (complement, induced subgraphs, twin reduction, increasing
//! subgraph extraction, corpus enumeration).

use std::fmt;

use crate::error::{Error, Result};

/// Largest vertex count the bitset representation supports.
pub const MAX_VERTICES: usize = 64;

/// Largest vertex count expressible in short-form graph6.
pub const GRAPH6_MAX: usize = 62;

/// Labeled enumeration is capped at 7 vertices (2^21 edge subsets).
pub const ENUMERATION_MAX: usize = 7;

/// A finite simple graph on vertices `0..n`, stored as adjacency bitsets.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<u64>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges())
    }
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_VERTICES {
            return Err(Error::arg(format!(
                "vertex count must be in 1..={MAX_VERTICES}, got {n}"
            )));
        }
        Ok(Graph { n, adj: vec![0; n] })
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::new(n)?;
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn empty(n: usize) -> Self {
        Graph::new(n).expect("vertex count in range")
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for u in 0..n {
            g.adj[u] = full_mask(n) & !(1 << u);
        }
        g
    }

    pub fn path(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for v in 1..n {
            g.set_edge(v - 1, v);
        }
        g
    }

    /// Cycle `C_n`; requires `n >= 3`.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a cycle needs at least three vertices");
        let mut g = Graph::path(n);
        g.set_edge(0, n - 1);
        g
    }

    /// `K_{a,b}` with the first `a` vertices forming one side.
    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let mut g = Graph::empty(a + b);
        for u in 0..a {
            for v in a..a + b {
                g.set_edge(u, v);
            }
        }
        g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        if u >= self.n || v >= self.n {
            return Err(Error::arg(format!(
                "edge ({u},{v}) out of range for {} vertices",
                self.n
            )));
        }
        if u == v {
            return Err(Error::arg(format!("self-loop at vertex {u}")));
        }
        self.set_edge(u, v);
        Ok(())
    }

    fn set_edge(&mut self, u: usize, v: usize) {
        self.adj[u] |= 1 << v;
        self.adj[v] |= 1 << u;
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u] >> v & 1 == 1
    }

    /// Neighborhood of `v` as a bitset over `0..n`.
    pub fn neighbors(&self, v: usize) -> u64 {
        self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn edge_count(&self) -> usize {
        self.adj
            .iter()
            .map(|a| a.count_ones() as usize)
            .sum::<usize>()
            / 2
    }

    /// Edges `(u, v)` with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                if self.has_edge(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn has_isolated_vertex(&self) -> bool {
        self.adj.contains(&0)
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = 1u64;
        let mut frontier = 1u64;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let fresh = self.adj[v] & !seen;
            seen |= fresh;
            frontier |= fresh;
        }
        seen == full_mask(self.n)
    }

    /// Vertex masks of the connected components, ordered by lowest vertex.
    pub fn components(&self) -> Vec<u64> {
        let mut out = Vec::new();
        let mut left = full_mask(self.n);
        while left != 0 {
            let mut seen = left & left.wrapping_neg();
            let mut frontier = seen;
            while frontier != 0 {
                let v = frontier.trailing_zeros() as usize;
                frontier &= frontier - 1;
                let fresh = self.adj[v] & !seen;
                seen |= fresh;
                frontier |= fresh;
            }
            out.push(seen);
            left &= !seen;
        }
        out
    }

    /// Edge-set union of two graphs on the same vertex set.
    pub fn union(&self, other: &Graph) -> Result<Graph> {
        if self.n != other.n {
            return Err(Error::arg("union requires equal vertex counts"));
        }
        Ok(Graph {
            n: self.n,
            adj: self
                .adj
                .iter()
                .zip(&other.adj)
                .map(|(a, b)| a | b)
                .collect(),
        })
    }

    pub fn complement(&self) -> Graph {
        let full = full_mask(self.n);
        Graph {
            n: self.n,
            adj: (0..self.n)
                .map(|v| !self.adj[v] & full & !(1 << v))
                .collect(),
        }
    }

    /// Subgraph induced on `vertices`, relabeled to `0..|S|` in sorted order.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Result<Graph> {
        let mut s: Vec<usize> = vertices.to_vec();
        s.sort_unstable();
        s.dedup();
        if s.is_empty() {
            return Err(Error::arg("induced subgraph on an empty vertex set"));
        }
        if let Some(&bad) = s.iter().find(|&&v| v >= self.n) {
            return Err(Error::arg(format!(
                "vertex {bad} out of range for {} vertices",
                self.n
            )));
        }
        let mut g = Graph::empty(s.len());
        for (i, &u) in s.iter().enumerate() {
            for (j, &v) in s.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.set_edge(i, j);
                }
            }
        }
        Ok(g)
    }

    pub fn induced_by_mask(&self, mask: u64) -> Result<Graph> {
        self.induced_subgraph(&bits(mask).collect::<Vec<_>>())
    }

    /// `N(u) - {v} == N(v) - {u}`.
    pub fn are_twins(&self, u: usize, v: usize) -> bool {
        u != v && self.adj[u] & !(1 << v) == self.adj[v] & !(1 << u)
    }

    pub fn is_twin_free(&self) -> bool {
        (0..self.n).all(|u| (u + 1..self.n).all(|v| !self.are_twins(u, v)))
    }

    /// Repeatedly deletes the higher-indexed vertex of the lexicographically
    /// first twin pair until the remaining induced subgraph is twin-free.
    pub fn twin_reduce(&self) -> TwinReduction {
        let mut alive = full_mask(self.n);
        let mut parent: Vec<usize> = (0..self.n).collect();
        'scan: loop {
            for u in bits(alive) {
                for v in bits(alive & !low_mask(u + 1)) {
                    let nu = self.adj[u] & alive & !(1 << v);
                    let nv = self.adj[v] & alive & !(1 << u);
                    if nu == nv {
                        alive &= !(1 << v);
                        parent[v] = u;
                        continue 'scan;
                    }
                }
            }
            break;
        }
        let survivors: Vec<usize> = bits(alive).collect();
        let representative = (0..self.n)
            .map(|mut v| {
                while parent[v] != v {
                    v = parent[v];
                }
                v
            })
            .collect();
        let graph = self
            .induced_subgraph(&survivors)
            .expect("at least one vertex survives");
        TwinReduction {
            graph,
            survivors,
            representative,
        }
    }

    /// Vertices ordered by reversed min-degree elimination, so that the
    /// densest core comes first.
    pub fn degeneracy_order(&self) -> Vec<usize> {
        let mut alive = full_mask(self.n);
        let mut removal = Vec::with_capacity(self.n);
        while alive != 0 {
            let v = bits(alive)
                .min_by_key(|&v| ((self.adj[v] & alive).count_ones(), v))
                .expect("nonempty");
            removal.push(v);
            alive &= !(1 << v);
        }
        removal.reverse();
        removal
    }

    /// Edge-subset bitmask in graph6 bit order (column-major upper triangle).
    pub fn edge_mask(&self) -> u64 {
        assert!(self.n <= 11, "edge mask limited to 11 vertices");
        let mut mask = 0u64;
        let mut k = 0;
        for v in 1..self.n {
            for u in 0..v {
                if self.has_edge(u, v) {
                    mask |= 1 << k;
                }
                k += 1;
            }
        }
        mask
    }

    pub fn from_edge_mask(n: usize, mask: u64) -> Result<Graph> {
        if n > 11 {
            return Err(Error::arg("edge mask limited to 11 vertices"));
        }
        let mut g = Graph::new(n)?;
        let mut k = 0;
        for v in 1..n {
            for u in 0..v {
                if mask >> k & 1 == 1 {
                    g.set_edge(u, v);
                }
                k += 1;
            }
        }
        Ok(g)
    }

    pub fn to_graph6(&self) -> Result<String> {
        if self.n > GRAPH6_MAX {
            return Err(Error::Unsupported(format!(
                "graph6 short form supports at most {GRAPH6_MAX} vertices, got {}",
                self.n
            )));
        }
        let mut out = String::new();
        out.push((self.n as u8 + 63) as char);
        let mut acc = 0u8;
        let mut filled = 0;
        for v in 1..self.n {
            for u in 0..v {
                acc = acc << 1 | self.has_edge(u, v) as u8;
                filled += 1;
                if filled == 6 {
                    out.push((acc + 63) as char);
                    acc = 0;
                    filled = 0;
                }
            }
        }
        if filled > 0 {
            out.push(((acc << (6 - filled)) + 63) as char);
        }
        Ok(out)
    }

    pub fn parse_graph6(text: &str) -> Result<Graph> {
        let bytes = text.as_bytes();
        let header = *bytes
            .first()
            .ok_or_else(|| Error::parse(0, "empty input"))?;
        if !(63..=126).contains(&header) {
            return Err(Error::parse(0, format!("invalid header byte {header}")));
        }
        if header == 126 {
            return Err(Error::parse(
                0,
                format!("long-form header (more than {GRAPH6_MAX} vertices) unsupported"),
            ));
        }
        let n = (header - 63) as usize;
        if n == 0 {
            return Err(Error::parse(0, "graph with zero vertices"));
        }
        let nbits = n * (n - 1) / 2;
        let nbytes = nbits.div_ceil(6);
        let body = &bytes[1..];
        if body.len() < nbytes {
            return Err(Error::parse(
                bytes.len(),
                format!(
                    "truncated bit vector: expected {nbytes} data bytes, found {}",
                    body.len()
                ),
            ));
        }
        if body.len() > nbytes {
            return Err(Error::parse(1 + nbytes, "trailing bytes after bit vector"));
        }
        for (i, &b) in body.iter().enumerate() {
            if !(63..=126).contains(&b) {
                return Err(Error::parse(1 + i, format!("invalid data byte {b}")));
            }
        }
        let bit = |k: usize| (body[k / 6] - 63) >> (5 - k % 6) & 1 == 1;
        let mut g = Graph::empty(n);
        let mut k = 0;
        for v in 1..n {
            for u in 0..v {
                if bit(k) {
                    g.set_edge(u, v);
                }
                k += 1;
            }
        }
        for pad in nbits..nbytes * 6 {
            if bit(pad) {
                return Err(Error::parse(1 + pad / 6, "nonzero padding bits"));
            }
        }
        Ok(g)
    }
}

/// Result of [`Graph::twin_reduce`].
#[derive(Clone, Debug)]
pub struct TwinReduction {
    /// The twin-free induced subgraph on `survivors`, relabeled in order.
    pub graph: Graph,
    /// Original labels of the surviving vertices, ascending.
    pub survivors: Vec<usize>,
    /// For each original vertex, the original label of its surviving representative.
    pub representative: Vec<usize>,
}

/// A bipartite graph with parts `V1 = 0..n1` (rows) and `V2 = 0..n2` (columns).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BipartiteGraph {
    n1: usize,
    n2: usize,
    rows: Vec<u64>,
}

impl fmt::Debug for BipartiteGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "BipartiteGraph({}x{}: {})",
            self.n1,
            self.n2,
            self.rows_string()
        )
    }
}

impl BipartiteGraph {
    pub fn new(n1: usize, n2: usize) -> Result<Self> {
        if n1 == 0 || n2 == 0 || n1 + n2 > MAX_VERTICES {
            return Err(Error::arg(format!(
                "part sizes must be positive with total at most {MAX_VERTICES}, got {n1}+{n2}"
            )));
        }
        Ok(BipartiteGraph {
            n1,
            n2,
            rows: vec![0; n1],
        })
    }

    /// Builds from rows of `0`/`1` characters, one row per `V1` vertex.
    pub fn from_rows<S: AsRef<str>>(rows: &[S]) -> Result<Self> {
        let n1 = rows.len();
        let n2 = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        let mut g = BipartiteGraph::new(n1, n2)?;
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n2 {
                return Err(Error::arg(format!(
                    "row {i} has length {}, expected {n2}",
                    row.len()
                )));
            }
            for (j, c) in row.chars().enumerate() {
                match c {
                    '1' => g.rows[i] |= 1 << j,
                    '0' => {}
                    other => {
                        return Err(Error::arg(format!(
                            "row {i}: unexpected character {other:?}"
                        )))
                    }
                }
            }
        }
        Ok(g)
    }

    pub fn from_row_masks(n1: usize, n2: usize, rows: &[u64]) -> Result<Self> {
        let mut g = BipartiteGraph::new(n1, n2)?;
        if rows.len() != n1 {
            return Err(Error::arg("row count mismatch"));
        }
        for (i, &r) in rows.iter().enumerate() {
            if r & !low_mask(n2) != 0 {
                return Err(Error::arg(format!("row {i} has bits beyond column {n2}")));
            }
            g.rows[i] = r;
        }
        Ok(g)
    }

    /// Perfect matching `x_i y_i` on `n + n` vertices.
    pub fn matching(n: usize) -> Self {
        let rows: Vec<u64> = (0..n).map(|i| 1 << i).collect();
        BipartiteGraph::from_row_masks(n, n, &rows).expect("valid sizes")
    }

    pub fn complete(n1: usize, n2: usize) -> Self {
        BipartiteGraph::from_row_masks(n1, n2, &vec![low_mask(n2); n1]).expect("valid sizes")
    }

    pub fn n1(&self) -> usize {
        self.n1
    }

    pub fn n2(&self) -> usize {
        self.n2
    }

    pub fn has_edge(&self, x: usize, y: usize) -> bool {
        self.rows[x] >> y & 1 == 1
    }

    pub fn row(&self, x: usize) -> u64 {
        self.rows[x]
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    pub fn column(&self, y: usize) -> u64 {
        (0..self.n1)
            .filter(|&x| self.has_edge(x, y))
            .fold(0, |m, x| m | 1 << x)
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum()
    }

    pub fn max_degree(&self) -> usize {
        let rows = self.rows.iter().map(|r| r.count_ones() as usize);
        let cols = (0..self.n2).map(|y| self.column(y).count_ones() as usize);
        rows.chain(cols).max().unwrap_or(0)
    }

    pub fn has_isolated_row(&self) -> bool {
        self.rows.contains(&0)
    }

    pub fn has_isolated_vertex(&self) -> bool {
        self.has_isolated_row() || (0..self.n2).any(|y| self.column(y) == 0)
    }

    /// No two vertices of the same part share a neighborhood.
    pub fn is_twin_free(&self) -> bool {
        let distinct = |v: Vec<u64>| {
            let mut s = v.clone();
            s.sort_unstable();
            s.dedup();
            s.len() == v.len()
        };
        distinct(self.rows.clone()) && distinct((0..self.n2).map(|y| self.column(y)).collect())
    }

    /// Complement taken within `V1 x V2`.
    pub fn complement(&self) -> BipartiteGraph {
        let full = low_mask(self.n2);
        BipartiteGraph {
            n1: self.n1,
            n2: self.n2,
            rows: self.rows.iter().map(|r| !r & full).collect(),
        }
    }

    pub fn transpose(&self) -> BipartiteGraph {
        let rows = (0..self.n2).map(|y| self.column(y)).collect();
        BipartiteGraph {
            n1: self.n2,
            n2: self.n1,
            rows,
        }
    }

    /// Induced subgraph on the given row and column subsets (sorted order kept).
    pub fn induced(&self, xs: &[usize], ys: &[usize]) -> Result<BipartiteGraph> {
        let mut g = BipartiteGraph::new(xs.len(), ys.len())?;
        for (i, &x) in xs.iter().enumerate() {
            for (j, &y) in ys.iter().enumerate() {
                if x >= self.n1 || y >= self.n2 {
                    return Err(Error::arg(format!("vertex pair ({x},{y}) out of range")));
                }
                if self.has_edge(x, y) {
                    g.rows[i] |= 1 << j;
                }
            }
        }
        Ok(g)
    }

    /// Keeps the first vertex of each same-part neighborhood class, repeating
    /// until no two vertices in a part share a neighborhood.
    pub fn twin_reduce(&self) -> BipartiteGraph {
        let mut g = self.clone();
        loop {
            let xs = first_of_each_class(&g.rows);
            let cols: Vec<u64> = (0..g.n2).map(|y| g.column(y)).collect();
            let ys = first_of_each_class(&cols);
            if xs.len() == g.n1 && ys.len() == g.n2 {
                return g;
            }
            g = g.induced(&xs, &ys).expect("classes are nonempty");
        }
    }

    /// The same graph as a simple graph: `V1` first, then `V2`.
    pub fn to_graph(&self) -> Graph {
        let mut g = Graph::empty(self.n1 + self.n2);
        for x in 0..self.n1 {
            for y in bits(self.rows[x]) {
                g.set_edge(x, self.n1 + y);
            }
        }
        g
    }

    /// Identifier used in reports: graph6 of [`Self::to_graph`] and the size of `V1`.
    pub fn id(&self) -> String {
        format!(
            "{}:{}",
            self.to_graph().to_graph6().expect("at most 62 vertices"),
            self.n1
        )
    }

    pub fn parse_id(id: &str) -> Result<BipartiteGraph> {
        let (g6, n1) = id
            .rsplit_once(':')
            .ok_or_else(|| Error::arg(format!("bipartite id {id:?} lacks ':<n1>'")))?;
        let n1: usize = n1
            .parse()
            .map_err(|_| Error::arg(format!("bad part size in {id:?}")))?;
        let g = Graph::parse_graph6(g6)?;
        if n1 == 0 || n1 >= g.n() {
            return Err(Error::arg(format!(
                "part size {n1} invalid for {} vertices",
                g.n()
            )));
        }
        let n2 = g.n() - n1;
        let mut b = BipartiteGraph::new(n1, n2)?;
        for (u, v) in g.edges() {
            if u >= n1 || v < n1 {
                return Err(Error::arg(format!(
                    "edge ({u},{v}) does not cross the parts"
                )));
            }
            b.rows[u] |= 1 << (v - n1);
        }
        Ok(b)
    }

    fn rows_string(&self) -> String {
        (0..self.n1)
            .map(|x| {
                (0..self.n2)
                    .map(|y| if self.has_edge(x, y) { '1' } else { '0' })
                    .collect::<String>()
            })
            .collect::<Vec<_>>()
            .join("/")
    }

    /// Text form: header line `n1 n2`, then one line of `0`/`1` per `V1` vertex.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n1, self.n2);
        for row in self.rows_string().split('/') {
            out.push_str(row);
            out.push('\n');
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<BipartiteGraph> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::arg("empty bipartite description"))?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| {
                t.parse()
                    .map_err(|_| Error::arg(format!("bad header token {t:?}")))
            })
            .collect::<Result<_>>()?;
        let [n1, n2] = dims[..] else {
            return Err(Error::arg("header must be \"n1 n2\""));
        };
        let rows: Vec<&str> = lines.map(str::trim).collect();
        if rows.len() != n1 {
            return Err(Error::arg(format!(
                "expected {n1} rows, found {}",
                rows.len()
            )));
        }
        let g = BipartiteGraph::from_rows(&rows)?;
        if g.n2 != n2 {
            return Err(Error::arg(format!("expected {n2} columns, found {}", g.n2)));
        }
        Ok(g)
    }
}

fn first_of_each_class(neigh: &[u64]) -> Vec<usize> {
    let mut seen: Vec<u64> = Vec::new();
    let mut keep = Vec::new();
    for (i, &m) in neigh.iter().enumerate() {
        if !seen.contains(&m) {
            seen.push(m);
            keep.push(i);
        }
    }
    keep
}

/// Greedy extraction of an increasing subgraph: pairs `(x_i, y_i)` with
/// `x_i y_i` an edge and `x_i y_j` a non-edge whenever `i > j`.
///
/// Each round takes the lowest remaining `x` (which always has a remaining
/// neighbor), pairs it with its lowest remaining neighbor `y`, then discards
/// `y` and all of `N(y)` from `V1`. A round discards at most `Δ` rows, so at
/// least `⌈n1/Δ⌉` pairs come out.
pub fn find_increasing_subgraph(g: &BipartiteGraph) -> Result<Vec<(usize, usize)>> {
    if let Some(x) = g.rows.iter().position(|&r| r == 0) {
        return Err(Error::Precondition(format!("vertex {x} of V1 is isolated")));
    }
    let cols: Vec<u64> = (0..g.n2).map(|y| g.column(y)).collect();
    let mut xs = low_mask(g.n1);
    let mut ys = low_mask(g.n2);
    let mut pairs = Vec::new();
    while xs != 0 {
        let x = xs.trailing_zeros() as usize;
        let open = g.rows[x] & ys;
        debug_assert!(open != 0, "remaining row without remaining neighbor");
        let y = open.trailing_zeros() as usize;
        pairs.push((x, y));
        xs &= !cols[y];
        ys &= !(1 << y);
    }
    Ok(pairs)
}

/// Checks the increasing property verbatim against the edge set.
pub fn is_increasing(g: &BipartiteGraph, pairs: &[(usize, usize)]) -> bool {
    pairs.iter().enumerate().all(|(i, &(x, y))| {
        g.has_edge(x, y) && pairs[..i].iter().all(|&(_, yj)| !g.has_edge(x, yj))
    }) && distinct(pairs.iter().map(|p| p.0))
        && distinct(pairs.iter().map(|p| p.1))
}

fn distinct(it: impl Iterator<Item = usize>) -> bool {
    let mut v: Vec<usize> = it.collect();
    let len = v.len();
    v.sort_unstable();
    v.dedup();
    v.len() == len
}

/// Every labeled simple graph on `n` vertices, in edge-mask order.
pub fn enumerate_graphs(n: usize) -> Result<impl Iterator<Item = Graph>> {
    if n == 0 || n > ENUMERATION_MAX {
        return Err(Error::Budget(format!(
            "labeled enumeration supports 1..={ENUMERATION_MAX} vertices, got {n}"
        )));
    }
    let pairs = n * (n - 1) / 2;
    Ok((0..1u64 << pairs).map(move |m| Graph::from_edge_mask(n, m).expect("n in range")))
}

/// One representative per isomorphism class: the graph with the smallest
/// edge mask in its class, listed in increasing mask order.
pub fn enumerate_graphs_up_to_isomorphism(n: usize) -> Result<Vec<Graph>> {
    if n == 0 || n > ENUMERATION_MAX {
        return Err(Error::Budget(format!(
            "enumeration supports 1..={ENUMERATION_MAX} vertices, got {n}"
        )));
    }
    let pairs = n * (n - 1) / 2;
    let index = pair_index(n);
    // pair k -> pair k' under each vertex permutation
    let maps: Vec<Vec<usize>> = permutations(n)
        .into_iter()
        .map(|perm| {
            let mut map = vec![0; pairs];
            for v in 1..n {
                for u in 0..v {
                    map[index[u][v]] = index[perm[u]][perm[v]];
                }
            }
            map
        })
        .collect();
    let mut seen = vec![false; 1 << pairs];
    let mut reps = Vec::new();
    for mask in 0..1u64 << pairs {
        if seen[mask as usize] {
            continue;
        }
        reps.push(Graph::from_edge_mask(n, mask)?);
        for map in &maps {
            let image = bits(mask).fold(0u64, |acc, k| acc | 1 << map[k]);
            seen[image as usize] = true;
        }
    }
    Ok(reps)
}

/// All bipartite graphs with the given part sizes, in row-mask order.
pub fn enumerate_bipartite(n1: usize, n2: usize) -> Result<impl Iterator<Item = BipartiteGraph>> {
    if n1 * n2 > 20 {
        return Err(Error::Budget(format!(
            "bipartite enumeration limited to 2^20 graphs, got {n1}x{n2}"
        )));
    }
    BipartiteGraph::new(n1, n2)?;
    Ok((0..1u64 << (n1 * n2)).map(move |m| {
        let rows: Vec<u64> = (0..n1).map(|x| m >> (x * n2) & low_mask(n2)).collect();
        BipartiteGraph::from_row_masks(n1, n2, &rows).expect("valid sizes")
    }))
}

#[allow(clippy::needless_range_loop)]
fn pair_index(n: usize) -> Vec<Vec<usize>> {
    let mut index = vec![vec![0; n]; n];
    let mut k = 0;
    for v in 1..n {
        for u in 0..v {
            index[u][v] = k;
            index[v][u] = k;
            k += 1;
        }
    }
    index
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                rec(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

pub(crate) fn full_mask(n: usize) -> u64 {
    low_mask(n)
}

pub(crate) fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Indices of set bits, ascending.
pub(crate) fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(i)
        }
    })
}

//! Undirected, unweighted graphs: loading, generation, BFS levels and
//! summary statistics.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng as _;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rng;

/// Dense node index in `0..node_count`.
pub type NodeId = usize;

/// Immutable simple undirected graph with contiguous node ids.
///
/// Each node also carries the label it had in the source file (or its index
/// for generated graphs) so results can be reported in original ids.
#[derive(Debug, Clone)]
pub struct Graph {
    adjacency: Vec<Vec<NodeId>>,
    edge_count: usize,
    labels: Vec<u64>,
    index: HashMap<u64, NodeId>,
}

/// What the edge-list loader dropped or merged.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LoadReport {
    pub lines: usize,
    pub self_loops: usize,
    pub duplicates: usize,
    /// Directed arcs whose reverse arc was also present (only counted when
    /// symmetrizing).
    pub reciprocal_arcs: usize,
}

impl Graph {
    /// Builds a graph on `n` nodes labelled `0..n`. Self-loops and repeated
    /// edges are dropped.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        Self::with_labels((0..n as u64).collect(), edges)
    }

    /// Like [`Graph::from_edges`] with explicit per-node labels.
    pub fn with_labels<I>(labels: Vec<u64>, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let n = labels.len();
        let mut adjacency = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n {
                return Err(Error::InvalidNode(u));
            }
            if v >= n {
                return Err(Error::InvalidNode(v));
            }
            if u != v {
                adjacency[u].push(v);
                adjacency[v].push(u);
            }
        }
        let mut twice = 0;
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
            twice += list.len();
        }
        let index = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        let g = Graph {
            adjacency,
            edge_count: twice / 2,
            labels,
            index,
        };
        debug_assert!(g.is_symmetric());
        Ok(g)
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    /// Sorted neighbor list.
    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.adjacency[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    pub fn average_degree(&self) -> f64 {
        if self.is_empty() {
            0.0
        } else {
            2.0 * self.edge_count as f64 / self.node_count() as f64
        }
    }

    /// Original label of node `v`.
    pub fn label(&self, v: NodeId) -> u64 {
        self.labels[v]
    }

    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    /// Dense id for an original label.
    pub fn node_of(&self, label: u64) -> Option<NodeId> {
        self.index.get(&label).copied()
    }

    pub fn check_node(&self, v: NodeId) -> Result<()> {
        if v < self.node_count() {
            Ok(())
        } else {
            Err(Error::InvalidNode(v))
        }
    }

    /// Each undirected edge once, as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(u, list)| {
            list.iter()
                .copied()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    fn is_symmetric(&self) -> bool {
        self.adjacency
            .iter()
            .enumerate()
            .all(|(u, list)| list.iter().all(|&v| v != u && self.has_edge(v, u)))
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<NodeId>> {
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for &v in &self.adjacency[u] {
                    if !seen[v] {
                        seen[v] = true;
                        comp.push(v);
                        queue.push_back(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Largest connected component (first one on size ties).
    pub fn largest_component(&self) -> Vec<NodeId> {
        let mut best: Vec<NodeId> = Vec::new();
        for comp in self.components() {
            if comp.len() > best.len() {
                best = comp;
            }
        }
        best
    }

    pub fn is_connected(&self) -> bool {
        self.node_count() > 0 && self.largest_component().len() == self.node_count()
    }

    /// Subgraph induced by `nodes`, renumbered in the given order. Labels are kept.
    pub fn induced(&self, nodes: &[NodeId]) -> Result<Graph> {
        let mut position = vec![usize::MAX; self.node_count()];
        for (i, &v) in nodes.iter().enumerate() {
            self.check_node(v)?;
            position[v] = i;
        }
        let labels = nodes.iter().map(|&v| self.labels[v]).collect();
        let edges = nodes.iter().enumerate().flat_map(|(i, &v)| {
            let position = &position;
            self.adjacency[v].iter().filter_map(move |&w| {
                let j = position[w];
                (j != usize::MAX && j > i).then_some((i, j))
            })
        });
        let edges: Vec<_> = edges.collect();
        Graph::with_labels(labels, edges)
    }
}

/// Reads a SNAP-style edge list from `path`.
pub fn load_edgelist(path: impl AsRef<Path>, symmetrize: bool) -> Result<Graph> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let (g, report) = parse_edgelist(BufReader::new(file), symmetrize)?;
    log::debug!("{}: {:?}", path.display(), report);
    Ok(g)
}

/// Parses `u v` lines (`#` starts a comment line). Ids are remapped to
/// `0..n` in ascending label order.
///
/// With `symmetrize` the lines are treated as directed arcs and each arc
/// becomes an undirected edge; otherwise lines are undirected edges and a
/// reversed repeat counts as a duplicate.
pub fn parse_edgelist<R: BufRead>(reader: R, symmetrize: bool) -> Result<(Graph, LoadReport)> {
    let mut report = LoadReport::default();
    let mut arcs: Vec<(u64, u64)> = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line.map_err(|e| Error::Parse {
            line: lineno,
            message: e.to_string(),
        })?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        report.lines += 1;
        let mut fields = line.split_whitespace();
        let mut next_id = |what: &str| -> Result<u64> {
            let tok = fields.next().ok_or_else(|| Error::Parse {
                line: lineno,
                message: format!("missing {what} node id"),
            })?;
            tok.parse::<u64>().map_err(|_| Error::Parse {
                line: lineno,
                message: format!("invalid node id {tok:?}"),
            })
        };
        let u = next_id("source")?;
        let v = next_id("target")?;
        if let Some(extra) = fields.next() {
            return Err(Error::Parse {
                line: lineno,
                message: format!("unexpected trailing field {extra:?}"),
            });
        }
        arcs.push((u, v));
    }

    let mut labels: Vec<u64> = arcs.iter().flat_map(|&(u, v)| [u, v]).collect();
    labels.sort_unstable();
    labels.dedup();
    let index: HashMap<u64, NodeId> = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();

    let mut seen_arcs: HashSet<(u64, u64)> = HashSet::with_capacity(arcs.len());
    let mut seen: HashSet<(NodeId, NodeId)> = HashSet::with_capacity(arcs.len());
    let mut edges = Vec::with_capacity(arcs.len());
    for &(u, v) in &arcs {
        if u == v {
            report.self_loops += 1;
            continue;
        }
        let (a, b) = (index[&u], index[&v]);
        let key = (a.min(b), a.max(b));
        let fresh_arc = seen_arcs.insert((u, v));
        if seen.insert(key) {
            edges.push(key);
        } else if symmetrize && fresh_arc {
            report.reciprocal_arcs += 1;
        } else {
            report.duplicates += 1;
        }
    }
    if edges.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let g = Graph::with_labels(labels, edges)?;
    Ok((g, report))
}

/// Writes `g` in the same edge-list format, using original labels.
pub fn write_edgelist<W: Write>(g: &Graph, mut out: W) -> std::io::Result<()> {
    writeln!(out, "# nodes: {} edges: {}", g.node_count(), g.edge_count())?;
    for (u, v) in g.edges() {
        writeln!(out, "{}\t{}", g.label(u), g.label(v))?;
    }
    Ok(())
}

pub fn save_edgelist(g: &Graph, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = std::io::BufWriter::new(file);
    write_edgelist(g, &mut out)
        .and_then(|_| out.flush())
        .map_err(|e| Error::io(path, e))
}

/// Table-style network statistics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphStats {
    pub nodes: usize,
    pub edges: usize,
    pub avg_degree: f64,
    pub avg_clustering: f64,
    pub triangles: u64,
    /// Longest shortest path inside the largest connected component.
    pub diameter: usize,
    pub largest_component_nodes: usize,
}

/// Per-node triangle counts (each triangle credited to its three corners).
pub fn triangles_per_node(g: &Graph) -> Vec<u64> {
    let mut tri = vec![0u64; g.node_count()];
    for u in 0..g.node_count() {
        let nu = g.neighbors(u);
        for &v in nu.iter().filter(|&&v| v > u) {
            let nv = g.neighbors(v);
            // merge-intersect, keeping w > v
            let (mut i, mut j) = (0, 0);
            while i < nu.len() && j < nv.len() {
                match nu[i].cmp(&nv[j]) {
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Greater => j += 1,
                    std::cmp::Ordering::Equal => {
                        let w = nu[i];
                        if w > v {
                            tri[u] += 1;
                            tri[v] += 1;
                            tri[w] += 1;
                        }
                        i += 1;
                        j += 1;
                    }
                }
            }
        }
    }
    tri
}

/// Local clustering coefficient of every node; nodes of degree < 2 get 0.
pub fn local_clustering(g: &Graph) -> Vec<f64> {
    triangles_per_node(g)
        .into_iter()
        .enumerate()
        .map(|(v, t)| {
            let d = g.degree(v) as f64;
            if d < 2.0 {
                0.0
            } else {
                2.0 * t as f64 / (d * (d - 1.0))
            }
        })
        .collect()
}

fn eccentricity(
    g: &Graph,
    source: NodeId,
    dist: &mut [usize],
    queue: &mut VecDeque<NodeId>,
) -> usize {
    dist.fill(usize::MAX);
    dist[source] = 0;
    queue.clear();
    queue.push_back(source);
    let mut far = 0;
    while let Some(u) = queue.pop_front() {
        let du = dist[u];
        far = far.max(du);
        for &v in g.neighbors(u) {
            if dist[v] == usize::MAX {
                dist[v] = du + 1;
                queue.push_back(v);
            }
        }
    }
    far
}

/// Exact diameter of the component containing `nodes` (all-sources BFS).
pub fn diameter_of(g: &Graph, nodes: &[NodeId]) -> usize {
    nodes
        .par_iter()
        .map_init(
            || (vec![usize::MAX; g.node_count()], VecDeque::new()),
            |(dist, queue), &s| eccentricity(g, s, dist, queue),
        )
        .max()
        .unwrap_or(0)
}

pub fn compute_stats(g: &Graph) -> Result<GraphStats> {
    if g.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let tri = triangles_per_node(g);
    let triangles = tri.iter().sum::<u64>() / 3;
    let clustering = local_clustering(g);
    let avg_clustering = clustering.iter().sum::<f64>() / g.node_count() as f64;
    let lcc = g.largest_component();
    Ok(GraphStats {
        nodes: g.node_count(),
        edges: g.edge_count(),
        avg_degree: g.average_degree(),
        avg_clustering,
        triangles,
        diameter: diameter_of(g, &lcc),
        largest_component_nodes: lcc.len(),
    })
}

/// Hop levels from one or more roots.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelAssignment {
    pub roots: Vec<NodeId>,
    pub level_of: Vec<Option<usize>>,
    /// `levels[d]` holds the nodes at hop distance `d`, sorted.
    pub levels: Vec<Vec<NodeId>>,
}

impl LevelAssignment {
    pub fn depth(&self) -> usize {
        self.levels.len().saturating_sub(1)
    }

    pub fn is_reached(&self, v: NodeId) -> bool {
        self.level_of[v].is_some()
    }

    pub fn reached_count(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }

    /// Neighbors of `v` one level closer to the roots.
    pub fn parents<'a>(&'a self, g: &'a Graph, v: NodeId) -> impl Iterator<Item = NodeId> + 'a {
        let want = self.level_of[v].and_then(|d| d.checked_sub(1));
        g.neighbors(v)
            .iter()
            .copied()
            .filter(move |&u| want.is_some() && self.level_of[u] == want)
    }

    /// Neighbors of `v` on the same level.
    pub fn siblings<'a>(&'a self, g: &'a Graph, v: NodeId) -> impl Iterator<Item = NodeId> + 'a {
        let own = self.level_of[v];
        g.neighbors(v)
            .iter()
            .copied()
            .filter(move |&u| own.is_some() && self.level_of[u] == own)
    }
}

/// BFS levels from `root`, treating `removed` nodes as absent.
pub fn bfs_levels(g: &Graph, root: NodeId, removed: &[NodeId]) -> Result<LevelAssignment> {
    bfs_levels_from(g, &[root], removed)
}

/// Multi-root BFS: every root sits on level 0.
pub fn bfs_levels_from(g: &Graph, roots: &[NodeId], removed: &[NodeId]) -> Result<LevelAssignment> {
    let n = g.node_count();
    let mut blocked = vec![false; n];
    for &r in removed {
        g.check_node(r)?;
        blocked[r] = true;
    }
    if roots.is_empty() {
        return Err(Error::InvalidParameter(
            "BFS needs at least one root".into(),
        ));
    }
    let mut level_of = vec![None; n];
    let mut frontier = Vec::new();
    for &r in roots {
        g.check_node(r)?;
        if blocked[r] {
            return Err(Error::InvalidParameter(format!(
                "root {r} is in the removed set"
            )));
        }
        if level_of[r].is_none() {
            level_of[r] = Some(0);
            frontier.push(r);
        }
    }
    frontier.sort_unstable();
    let mut levels = Vec::new();
    let mut depth = 0;
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &u in &frontier {
            for &v in g.neighbors(u) {
                if !blocked[v] && level_of[v].is_none() {
                    level_of[v] = Some(depth + 1);
                    next.push(v);
                }
            }
        }
        next.sort_unstable();
        levels.push(std::mem::replace(&mut frontier, next));
        depth += 1;
    }
    Ok(LevelAssignment {
        roots: roots.to_vec(),
        level_of,
        levels,
    })
}

/// Erdős–Rényi G(n, p) with `p = avg_degree / (n - 1)`.
pub fn gen_er(n: usize, avg_degree: f64, seed: u64) -> Result<Graph> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "G(n,p) needs n >= 2, got {n}"
        )));
    }
    if !(avg_degree > 0.0 && avg_degree <= (n - 1) as f64) {
        return Err(Error::InvalidParameter(format!(
            "average degree {avg_degree} outside (0, {}]",
            n - 1
        )));
    }
    let p = avg_degree / (n - 1) as f64;
    let mut rng = rng::from_seed(seed);
    let mut edges = Vec::new();
    if p >= 1.0 {
        for v in 1..n {
            edges.extend((0..v).map(|w| (v, w)));
        }
    } else {
        // geometric skipping over the lower triangle
        let log_q = (1.0 - p).ln();
        let (mut v, mut w) = (1usize, -1i64);
        while v < n {
            let r: f64 = rng.gen();
            w += 1 + ((1.0 - r).ln() / log_q).floor() as i64;
            while w >= v as i64 && v < n {
                w -= v as i64;
                v += 1;
            }
            if v < n {
                edges.push((v, w as usize));
            }
        }
    }
    Graph::from_edges(n, edges)
}

const REGULAR_ATTEMPTS: usize = 1000;

/// Uniform-ish random `degree`-regular simple graph.
///
/// Stubs are paired at random; clashing pairs (loops, repeats) are put back
/// and re-paired among themselves. A dead end restarts the whole pairing.
pub fn gen_regular(n: usize, degree: usize, seed: u64) -> Result<Graph> {
    if degree >= n || (n * degree) % 2 == 1 {
        return Err(Error::InfeasibleRegular { n, degree });
    }
    let mut rng = rng::from_seed(seed);
    if degree == 0 {
        return Graph::from_edges(n, std::iter::empty());
    }
    for _ in 0..REGULAR_ATTEMPTS {
        if let Some(edges) = try_regular(n, degree, &mut rng) {
            return Graph::from_edges(n, edges);
        }
    }
    Err(Error::InvalidParameter(format!(
        "failed to pair stubs for a {degree}-regular graph on {n} nodes"
    )))
}

fn try_regular(n: usize, degree: usize, rng: &mut rng::Rng) -> Option<Vec<(NodeId, NodeId)>> {
    let mut edges: HashSet<(NodeId, NodeId)> = HashSet::with_capacity(n * degree / 2);
    let mut stubs: Vec<NodeId> = (0..n)
        .flat_map(|v| std::iter::repeat_n(v, degree))
        .collect();
    while !stubs.is_empty() {
        stubs.shuffle(rng);
        let mut leftover: HashMap<NodeId, usize> = HashMap::new();
        for pair in stubs.chunks_exact(2) {
            let (a, b) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if a != b && edges.insert((a, b)) {
                continue;
            }
            *leftover.entry(a).or_default() += 1;
            *leftover.entry(b).or_default() += 1;
        }
        if !leftover.is_empty() && !can_pair(&edges, &leftover) {
            return None;
        }
        let mut next: Vec<NodeId> = leftover
            .into_iter()
            .flat_map(|(v, k)| std::iter::repeat_n(v, k))
            .collect();
        next.sort_unstable();
        stubs = next;
    }
    let mut edges: Vec<_> = edges.into_iter().collect();
    edges.sort_unstable();
    Some(edges)
}

fn can_pair(edges: &HashSet<(NodeId, NodeId)>, leftover: &HashMap<NodeId, usize>) -> bool {
    let nodes: Vec<NodeId> = leftover.keys().copied().collect();
    nodes.iter().enumerate().any(|(i, &a)| {
        nodes[i + 1..]
            .iter()
            .any(|&b| !edges.contains(&(a.min(b), a.max(b))))
    })
}

/// BFS spanning tree rooted at a uniformly random node.
///
/// Disconnected inputs are reduced to their largest component first; the
/// returned graph then only contains that component's nodes (labels kept).
pub fn spanning_tree(g: &Graph, seed: u64) -> Result<Graph> {
    if g.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let lcc = g.largest_component();
    let base;
    let g = if lcc.len() < g.node_count() {
        log::warn!(
            "graph is disconnected; spanning tree built on the largest component ({} of {} nodes)",
            lcc.len(),
            g.node_count()
        );
        base = g.induced(&lcc)?;
        &base
    } else {
        g
    };
    let mut rng = rng::from_seed(seed);
    let root = rng.gen_range(0..g.node_count());
    let levels = bfs_levels(g, root, &[])?;
    let edges: Vec<(NodeId, NodeId)> = (0..g.node_count())
        .filter(|&v| v != root)
        .map(|v| {
            let parent = levels.parents(g, v).next().expect("connected component");
            (parent, v)
        })
        .collect();
    Graph::with_labels(g.labels().to_vec(), edges)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    /// Ten-node worked example, labels 1..=10.
    pub(crate) fn sample() -> Graph {
        let text = "1 2\n2 3\n2 4\n3 4\n3 7\n4 10\n7 10\n5 7\n5 6\n7 8\n7 9\n";
        parse_edgelist(text.as_bytes(), false).unwrap().0
    }

    pub(crate) fn id(g: &Graph, label: u64) -> NodeId {
        g.node_of(label).unwrap()
    }

    fn labels_of(g: &Graph, nodes: &[NodeId]) -> Vec<u64> {
        let mut out: Vec<u64> = nodes.iter().map(|&v| g.label(v)).collect();
        out.sort_unstable();
        out
    }

    #[test]
    fn sample_degrees() {
        let g = sample();
        assert_eq!(g.node_count(), 10);
        assert_eq!(g.edge_count(), 11);
        assert_eq!(g.degree(id(&g, 7)), 5);
        assert_eq!(g.degree(id(&g, 3)), 3);
        assert_eq!(g.degree(id(&g, 10)), 2);
        assert_eq!(g.degree(id(&g, 1)), 1);
        assert_eq!(g.degrees().iter().sum::<usize>(), 2 * g.edge_count());
    }

    #[test]
    fn comments_only_is_empty() {
        let text = "# Directed graph\n# nothing here\n";
        assert!(matches!(
            parse_edgelist(text.as_bytes(), true),
            Err(Error::EmptyGraph)
        ));
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let text = "# header\n0 1\n1 x\n";
        match parse_edgelist(text.as_bytes(), false) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        let text = "0 1 2\n";
        assert!(matches!(
            parse_edgelist(text.as_bytes(), false),
            Err(Error::Parse { line: 1, .. })
        ));
        let text = "0\n";
        assert!(matches!(
            parse_edgelist(text.as_bytes(), false),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn loader_drops_loops_and_duplicates() {
        let text = "10 20\n20 10\n10 10\n20 30\n20 30\n";
        let (g, report) = parse_edgelist(text.as_bytes(), true).unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(report.self_loops, 1);
        assert_eq!(report.reciprocal_arcs, 1);
        assert_eq!(report.duplicates, 1);
        assert_eq!(g.labels(), &[10, 20, 30]);

        let (_, report) = parse_edgelist(text.as_bytes(), false).unwrap();
        assert_eq!(report.duplicates, 2);
    }

    #[test]
    fn edgelist_roundtrip() {
        let g = sample();
        let mut buf = Vec::new();
        write_edgelist(&g, &mut buf).unwrap();
        let (h, _) = parse_edgelist(buf.as_slice(), false).unwrap();
        assert_eq!(h.labels(), g.labels());
        assert_eq!(h.edges().collect::<Vec<_>>(), g.edges().collect::<Vec<_>>());
    }

    #[test]
    fn triangle_stats() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let s = compute_stats(&g).unwrap();
        assert_eq!(s.avg_clustering, 1.0);
        assert_eq!(s.diameter, 1);
        assert_eq!(s.triangles, 1);
    }

    #[test]
    fn sample_clustering_of_node_two() {
        let g = sample();
        let c = local_clustering(&g);
        assert!((c[id(&g, 2)] - 1.0 / 3.0).abs() < 1e-15);
        let s = compute_stats(&g).unwrap();
        assert_eq!(s.triangles, 1);
        // 1-2-3-7-5-6
        assert_eq!(s.diameter, 5);
    }

    #[test]
    fn sample_levels_without_rival() {
        let g = sample();
        let lv = bfs_levels(&g, id(&g, 2), &[id(&g, 5)]).unwrap();
        let got: Vec<Vec<u64>> = lv.levels.iter().map(|l| labels_of(&g, l)).collect();
        assert_eq!(got, vec![vec![2], vec![1, 3, 4], vec![7, 10], vec![8, 9]]);
        assert!(!lv.is_reached(id(&g, 6)));
        assert!(!lv.is_reached(id(&g, 5)));
    }

    #[test]
    fn node_four_has_two_parents() {
        let g = sample();
        let lv = bfs_levels(&g, id(&g, 5), &[id(&g, 2)]).unwrap();
        let four = id(&g, 4);
        assert_eq!(lv.level_of[four], Some(3));
        let parents: Vec<NodeId> = lv.parents(&g, four).collect();
        assert_eq!(labels_of(&g, &parents), vec![3, 10]);
    }

    #[test]
    fn isolated_root() {
        let g = Graph::from_edges(3, [(1, 2)]).unwrap();
        let lv = bfs_levels(&g, 0, &[]).unwrap();
        assert_eq!(lv.levels, vec![vec![0]]);
        assert!(bfs_levels(&g, 7, &[]).is_err());
        assert!(bfs_levels(&g, 1, &[1]).is_err());
    }

    #[test]
    fn er_two_nodes_is_an_edge() {
        let g = gen_er(2, 1.0, 9).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert!(gen_er(1, 0.5, 0).is_err());
        assert!(gen_er(10, 0.0, 0).is_err());
        assert!(gen_er(10, 9.5, 0).is_err());
    }

    #[test]
    fn er_is_deterministic() {
        let a = gen_er(300, 6.0, 42).unwrap();
        let b = gen_er(300, 6.0, 42).unwrap();
        let c = gen_er(300, 6.0, 43).unwrap();
        assert_eq!(a.edges().collect::<Vec<_>>(), b.edges().collect::<Vec<_>>());
        assert_ne!(a.edges().collect::<Vec<_>>(), c.edges().collect::<Vec<_>>());
    }

    #[test]
    fn er_hits_facebook_average_degree() {
        let target = 2.0 * 88234.0 / 4039.0;
        let g = gen_er(4039, target, 7).unwrap();
        let rel = (g.average_degree() - target).abs() / target;
        assert!(rel < 0.05, "realized {} vs {target}", g.average_degree());
    }

    #[test]
    fn regular_small() {
        let g = gen_regular(10, 3, 1).unwrap();
        assert!(g.degrees().iter().all(|&d| d == 3));
        assert!(matches!(
            gen_regular(3, 3, 1),
            Err(Error::InfeasibleRegular { .. })
        ));
        assert!(matches!(
            gen_regular(5, 3, 1),
            Err(Error::InfeasibleRegular { .. })
        ));
    }

    #[test]
    fn regular_facebook_sized() {
        let g = gen_regular(4039, 44, 3).unwrap();
        assert!(g.degrees().iter().all(|&d| d == 44));
        let s = compute_stats(&g).unwrap();
        // sparse random regular graphs have clustering ~ (d-1)/n
        assert!(
            s.avg_clustering < 3.0 * 44.0 / 4039.0,
            "clustering {}",
            s.avg_clustering
        );
    }

    #[test]
    fn spanning_tree_of_triangle() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let t = spanning_tree(&g, 5).unwrap();
        assert_eq!(t.edge_count(), 2);
        assert!(t.is_connected());
        assert_eq!(compute_stats(&t).unwrap().avg_clustering, 0.0);
    }

    #[test]
    fn spanning_tree_of_tree_keeps_edges() {
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (1, 3), (3, 4)]).unwrap();
        let t = spanning_tree(&g, 11).unwrap();
        assert_eq!(t.edges().collect::<Vec<_>>(), g.edges().collect::<Vec<_>>());
    }

    #[test]
    fn spanning_tree_restricts_to_largest_component() {
        let g = Graph::from_edges(6, [(0, 1), (1, 2), (2, 0), (3, 4)]).unwrap();
        let t = spanning_tree(&g, 1).unwrap();
        assert_eq!(t.node_count(), 3);
        assert_eq!(t.edge_count(), 2);
        assert_eq!(t.labels(), &[0, 1, 2]);
    }
}

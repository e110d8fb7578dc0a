//! Directed multigraphs, one-sided path spaces, and the germ calculus of
//! prefix-exchange maps.
//!
//! Points of the path space are infinite edge sequences (finite maximal
//! ones when sinks are present); a cylinder is the set of points extending
//! a finite path and is represented by that path alone. Prefix maps
//! exchange one cylinder prefix for another and generate the pseudogroup
//! of the shift; their germs are decided exactly through forced-walk
//! analysis, which is what lets a shift map collapse to the identity in
//! the germ groupoid precisely when the future is deterministic.
//!
//! The cycle conditions live here too: a "no-exit cycle" is a cycle all of
//! whose vertices have out-degree one, the obstruction both to every cycle
//! having an exit and to freeness of high shift powers.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("duplicate vertex name {0:?}")]
    DuplicateVertex(String),
    #[error("duplicate edge id {0:?}")]
    DuplicateEdge(String),
    #[error("edge {edge:?} references unknown vertex {vertex:?}")]
    UnknownVertex { edge: String, vertex: String },
    #[error("unknown edge id {0:?}")]
    UnknownEdge(String),
    #[error("edges {0:?} and {1:?} do not compose")]
    NotComposable(String, String),
    #[error("the exponents must differ")]
    EqualExponents,
    #[error("vertex {0:?} emits no edge")]
    SinkPresent(String),
    #[error("prefix maps must share their target vertex")]
    TargetMismatch,
    #[error("path does not lie in the domain of the map")]
    OutsideDomain,
    #[error("candidate pieces {0} and {1} disagree on overlapping cylinders")]
    InconsistentCandidate(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphEdge {
    pub id: String,
    pub src: u32,
    pub dst: u32,
}

/// A finite directed multigraph. Vertices sorted by name, edges by id;
/// out- and in-lists follow edge index order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertices: Vec<String>,
    edges: Vec<GraphEdge>,
    out: Vec<Vec<u32>>,
    inn: Vec<Vec<u32>>,
}

impl Graph {
    pub fn from_parts(
        vertices: Vec<String>,
        edges: Vec<(String, String, String)>,
    ) -> Result<Self, GraphError> {
        let mut vs = vertices;
        vs.sort();
        for w in vs.windows(2) {
            if w[0] == w[1] {
                return Err(GraphError::DuplicateVertex(w[0].clone()));
            }
        }
        let index: BTreeMap<&str, u32> = vs.iter().enumerate().map(|(i, v)| (v.as_str(), i as u32)).collect();
        let mut es = Vec::with_capacity(edges.len());
        for (id, src, dst) in edges {
            let s = *index
                .get(src.as_str())
                .ok_or_else(|| GraphError::UnknownVertex { edge: id.clone(), vertex: src.clone() })?;
            let d = *index
                .get(dst.as_str())
                .ok_or_else(|| GraphError::UnknownVertex { edge: id.clone(), vertex: dst.clone() })?;
            es.push(GraphEdge { id, src: s, dst: d });
        }
        es.sort_by(|a, b| a.id.cmp(&b.id));
        for w in es.windows(2) {
            if w[0].id == w[1].id {
                return Err(GraphError::DuplicateEdge(w[0].id.clone()));
            }
        }
        let mut out = vec![Vec::new(); vs.len()];
        let mut inn = vec![Vec::new(); vs.len()];
        for (i, e) in es.iter().enumerate() {
            out[e.src as usize].push(i as u32);
            inn[e.dst as usize].push(i as u32);
        }
        Ok(Graph { vertices: vs, edges: es, out, inn })
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_name(&self, v: u32) -> &str {
        &self.vertices[v as usize]
    }

    pub fn vertex_index(&self, name: &str) -> Option<u32> {
        self.vertices.binary_search_by(|v| v.as_str().cmp(name)).ok().map(|i| i as u32)
    }

    pub fn edges(&self) -> &[GraphEdge] {
        &self.edges
    }

    pub fn edge(&self, e: u32) -> &GraphEdge {
        &self.edges[e as usize]
    }

    pub fn edge_index(&self, id: &str) -> Option<u32> {
        self.edges.binary_search_by(|e| e.id.as_str().cmp(id)).ok().map(|i| i as u32)
    }

    pub fn out_edges(&self, v: u32) -> &[u32] {
        &self.out[v as usize]
    }

    pub fn in_edges(&self, v: u32) -> &[u32] {
        &self.inn[v as usize]
    }

    pub fn out_degree(&self, v: u32) -> usize {
        self.out[v as usize].len()
    }

    pub fn is_sink_free(&self) -> bool {
        self.out.iter().all(|o| !o.is_empty())
    }

    fn require_sink_free(&self) -> Result<(), GraphError> {
        match self.out.iter().position(|o| o.is_empty()) {
            Some(v) => Err(GraphError::SinkPresent(self.vertices[v].clone())),
            None => Ok(()),
        }
    }

    /// Vertices reachable from `v` (inclusive).
    pub fn reachable_from(&self, v: u32) -> BTreeSet<u32> {
        let mut seen = BTreeSet::new();
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            if !seen.insert(u) {
                continue;
            }
            for &e in self.out_edges(u) {
                stack.push(self.edges[e as usize].dst);
            }
        }
        seen
    }
}

/// Cycles on which every vertex has out-degree exactly one; each is
/// returned as the edge list of one traversal, keyed by its least vertex.
pub fn no_exit_cycles(g: &Graph) -> Vec<Vec<u32>> {
    let n = g.n_vertices();
    let mut on_cycle = vec![false; n];
    let mut cycles = Vec::new();
    for start in 0..n as u32 {
        if g.out_degree(start) != 1 || on_cycle[start as usize] {
            continue;
        }
        // Follow the unique edges while out-degrees stay 1.
        let mut v = start;
        let mut steps = 0;
        let found = loop {
            if g.out_degree(v) != 1 {
                break false;
            }
            v = g.edges[g.out_edges(v)[0] as usize].dst;
            steps += 1;
            if v == start {
                break true;
            }
            if steps > n {
                break false;
            }
        };
        if found {
            let mut edges = Vec::new();
            let mut v = start;
            loop {
                let e = g.out_edges(v)[0];
                edges.push(e);
                v = g.edges[e as usize].dst;
                on_cycle[v as usize] = true;
                if v == start {
                    break;
                }
            }
            cycles.push(edges);
        }
    }
    cycles
}

/// Every cycle has an exit: no cycle is traversed by vertices whose only
/// outgoing edge stays on the cycle.
pub fn condition_l(g: &Graph) -> bool {
    no_exit_cycles(g).is_empty()
}

/// First-return analysis at `v`: the subgraph spanned by vertices that lie
/// on a closed walk through `v` not revisiting `v` in between. Two
/// distinct first-return walks exist exactly when some vertex of that
/// subgraph keeps more than one outgoing edge inside it.
pub fn has_two_first_returns(g: &Graph, v: u32) -> Option<bool> {
    // forward: reachable from v without passing through v again.
    let mut fwd = BTreeSet::new();
    let mut stack: Vec<u32> = g.out_edges(v).iter().map(|&e| g.edge(e).dst).collect();
    while let Some(u) = stack.pop() {
        if u == v || !fwd.insert(u) {
            continue;
        }
        for &e in g.out_edges(u) {
            stack.push(g.edge(e).dst);
        }
    }
    // backward: reaches v without passing through v first.
    let mut bwd = BTreeSet::new();
    let mut stack: Vec<u32> = g.in_edges(v).iter().map(|&e| g.edge(e).src).collect();
    while let Some(u) = stack.pop() {
        if u == v || !bwd.insert(u) {
            continue;
        }
        for &e in g.in_edges(u) {
            stack.push(g.edge(e).src);
        }
    }
    let mut universe: BTreeSet<u32> = fwd.intersection(&bwd).copied().collect();
    universe.insert(v);
    // v lies on a cycle iff some edge from v lands in the universe (or on v).
    let on_cycle = g
        .out_edges(v)
        .iter()
        .any(|&e| g.edge(e).dst == v || universe.contains(&g.edge(e).dst));
    if !on_cycle {
        return None;
    }
    for &u in &universe {
        let inside = g
            .out_edges(u)
            .iter()
            .filter(|&&e| {
                let d = g.edge(e).dst;
                d == v || universe.contains(&d)
            })
            .count();
        if inside >= 2 {
            return Some(true);
        }
    }
    Some(false)
}

/// Every vertex on a cycle admits at least two distinct first-return
/// walks.
pub fn condition_k(g: &Graph) -> bool {
    (0..g.n_vertices() as u32).all(|v| has_two_first_returns(g, v) != Some(false))
}

/// True iff the graph is acyclic.
pub fn has_no_loops(g: &Graph) -> bool {
    // Iterative three-color depth-first search.
    let n = g.n_vertices();
    let mut color = vec![0u8; n]; // 0 unseen, 1 on stack, 2 done
    for root in 0..n {
        if color[root] != 0 {
            continue;
        }
        let mut stack: Vec<(u32, usize)> = vec![(root as u32, 0)];
        color[root] = 1;
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            if *next < g.out_degree(v) {
                let e = g.out_edges(v)[*next];
                *next += 1;
                let w = g.edge(e).dst;
                match color[w as usize] {
                    0 => {
                        color[w as usize] = 1;
                        stack.push((w, 0));
                    }
                    1 => return false,
                    _ => {}
                }
            } else {
                color[v as usize] = 2;
                stack.pop();
            }
        }
    }
    true
}

/// Whether the points fixed by comparing the m-th and n-th shifts form a
/// set with empty interior. Requires m != n and a sink-free graph. The
/// set has nonempty interior exactly when a no-exit cycle of length
/// dividing |m - n| exists: such a cycle pins an eventually periodic
/// point together with a whole cylinder around it, and conversely a
/// cylinder of agreeing shifts forces its tail onto such a cycle.
pub fn essential_freeness(g: &Graph, m: usize, n: usize) -> Result<bool, GraphError> {
    if m == n {
        return Err(GraphError::EqualExponents);
    }
    g.require_sink_free()?;
    let d = m.abs_diff(n);
    Ok(!no_exit_cycles(g).iter().any(|c| d % c.len() == 0))
}

/// Hereditary: every edge leaving the set stays in it.
pub fn is_hereditary(g: &Graph, set: &BTreeSet<u32>) -> bool {
    set.iter().all(|&v| g.out_edges(v).iter().all(|&e| set.contains(&g.edge(e).dst)))
}

/// Saturated: a vertex that emits edges, all of them into the set, is in
/// the set.
pub fn is_saturated(g: &Graph, set: &BTreeSet<u32>) -> bool {
    (0..g.n_vertices() as u32).all(|v| {
        set.contains(&v)
            || g.out_degree(v) == 0
            || !g.out_edges(v).iter().all(|&e| set.contains(&g.edge(e).dst))
    })
}

/// The subgraph induced on the complement of a vertex set; with the set
/// hereditary and saturated this is the reduction to the complementary
/// invariant closed part, and it is sink-free whenever the ambient graph
/// is.
pub fn reduction(g: &Graph, removed: &BTreeSet<u32>) -> Graph {
    let vertices: Vec<String> = (0..g.n_vertices() as u32)
        .filter(|v| !removed.contains(v))
        .map(|v| g.vertex_name(v).to_string())
        .collect();
    let edges: Vec<(String, String, String)> = g
        .edges()
        .iter()
        .filter(|e| !removed.contains(&e.src) && !removed.contains(&e.dst))
        .map(|e| {
            (
                e.id.clone(),
                g.vertex_name(e.src).to_string(),
                g.vertex_name(e.dst).to_string(),
            )
        })
        .collect();
    Graph::from_parts(vertices, edges).expect("induced subgraph of a valid graph is valid")
}

/// A finite path: a base vertex and a composable edge sequence starting
/// there. The empty path is the base vertex alone.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Path {
    base: u32,
    edges: Vec<u32>,
}

impl Path {
    pub fn empty(v: u32) -> Self {
        Path { base: v, edges: Vec::new() }
    }

    pub fn from_edges(g: &Graph, edges: Vec<u32>) -> Result<Self, GraphError> {
        if edges.is_empty() {
            panic!("empty paths need a base vertex; use Path::empty");
        }
        for w in edges.windows(2) {
            if g.edge(w[0]).dst != g.edge(w[1]).src {
                return Err(GraphError::NotComposable(
                    g.edge(w[0]).id.clone(),
                    g.edge(w[1]).id.clone(),
                ));
            }
        }
        Ok(Path { base: g.edge(edges[0]).src, edges })
    }

    pub fn from_edge_ids(g: &Graph, ids: &[&str]) -> Result<Self, GraphError> {
        let edges = ids
            .iter()
            .map(|id| g.edge_index(id).ok_or_else(|| GraphError::UnknownEdge(id.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Path::from_edges(g, edges)
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn src(&self) -> u32 {
        self.base
    }

    pub fn dst(&self, g: &Graph) -> u32 {
        match self.edges.last() {
            Some(&e) => g.edge(e).dst,
            None => self.base,
        }
    }

    pub fn edge_list(&self) -> &[u32] {
        &self.edges
    }

    pub fn edge_ids<'g>(&self, g: &'g Graph) -> Vec<&'g str> {
        self.edges.iter().map(|&e| g.edge(e).id.as_str()).collect()
    }

    /// `self` followed by `tail`; their endpoints must match.
    pub fn concat(&self, g: &Graph, tail: &Path) -> Path {
        assert_eq!(self.dst(g), tail.src(), "paths do not compose");
        let mut edges = self.edges.clone();
        edges.extend_from_slice(&tail.edges);
        // When self is empty the tail starts at our base vertex.
        Path { base: self.base, edges }
    }

    /// The remainder after removing `prefix` from the front.
    pub fn strip_prefix(&self, g: &Graph, prefix: &Path) -> Option<Path> {
        if prefix.len() > self.len() || self.base != prefix.base {
            return None;
        }
        if self.edges[..prefix.len()] != prefix.edges[..] {
            return None;
        }
        let rest = self.edges[prefix.len()..].to_vec();
        Some(if rest.is_empty() {
            Path::empty(prefix.dst(g))
        } else {
            Path { base: g.edge(rest[0]).src, edges: rest }
        })
    }

    pub fn extends(&self, g: &Graph, prefix: &Path) -> bool {
        self.strip_prefix(g, prefix).is_some()
    }
}

/// All paths of length up to `depth`, vertices then edges in canonical
/// order, shorter paths first.
pub fn paths_up_to(g: &Graph, depth: usize) -> Vec<Path> {
    let mut by_len: Vec<Vec<Path>> = vec![Vec::new(); depth + 1];
    by_len[0] = (0..g.n_vertices() as u32).map(Path::empty).collect();
    for l in 0..depth {
        let next: Vec<Path> = by_len[l]
            .iter()
            .flat_map(|p| {
                let v = p.dst(g);
                g.out_edges(v).iter().map(move |&e| {
                    let mut edges = p.edges.clone();
                    edges.push(e);
                    Path { base: if edges.len() == 1 { g.edge(e).src } else { p.base }, edges }
                })
            })
            .collect();
        by_len[l + 1] = next;
    }
    by_len.into_iter().flatten().collect()
}

/// All extensions of `p` by exactly `extra` edges (possibly fewer when a
/// sink cuts a branch short; such maximal shorter paths are included).
pub fn extensions(g: &Graph, p: &Path, extra: usize) -> Vec<Path> {
    let mut out = Vec::new();
    let mut stack = vec![(p.clone(), extra)];
    while let Some((q, left)) = stack.pop() {
        if left == 0 {
            out.push(q);
            continue;
        }
        let v = q.dst(g);
        if g.out_degree(v) == 0 {
            out.push(q);
            continue;
        }
        // Reverse order keeps the stack popping in canonical order.
        for &e in g.out_edges(v).iter().rev() {
            let mut edges = q.edges.clone();
            edges.push(e);
            let base = if edges.len() == 1 { g.edge(e).src } else { q.base };
            stack.push((Path { base, edges }, left - 1));
        }
    }
    out.sort();
    out
}

/// The partial map of the path space sending nu-w to mu-w; mu and nu must
/// end at the same vertex.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct PrefixMap {
    pub mu: Path,
    pub nu: Path,
}

impl PrefixMap {
    pub fn new(g: &Graph, mu: Path, nu: Path) -> Result<Self, GraphError> {
        if mu.dst(g) != nu.dst(g) {
            return Err(GraphError::TargetMismatch);
        }
        Ok(PrefixMap { mu, nu })
    }

    pub fn inverse(&self) -> PrefixMap {
        PrefixMap { mu: self.nu.clone(), nu: self.mu.clone() }
    }

    /// Degree shift |mu| - |nu|.
    pub fn k(&self) -> i64 {
        self.mu.len() as i64 - self.nu.len() as i64
    }

    /// `self` after `other`, when the intermediate cylinders meet; the
    /// composite is again a single prefix map, or nothing on an empty
    /// overlap.
    pub fn compose(&self, g: &Graph, other: &PrefixMap) -> Option<PrefixMap> {
        if let Some(t) = other.mu.strip_prefix(g, &self.nu) {
            // other lands inside our domain cylinder.
            Some(PrefixMap { mu: self.mu.concat(g, &t), nu: other.nu.clone() })
        } else if let Some(t) = self.nu.strip_prefix(g, &other.mu) {
            // our domain cylinder sits deeper; pull it back along other.
            Some(PrefixMap { mu: self.mu.clone(), nu: other.nu.concat(g, &t) })
        } else {
            None
        }
    }

    /// Image path of a cylinder inside the domain.
    pub fn apply(&self, g: &Graph, at: &Path) -> Option<Path> {
        at.strip_prefix(g, &self.nu).map(|t| self.mu.concat(g, &t))
    }
}

/// Whether two prefix maps have the same germ at every point of the
/// cylinder of `at`.
///
/// Writing A and B for the two image paths of `at`, equal lengths force
/// literal equality. Different lengths (difference d) leave agreement
/// possible only when the longer image extends the shorter by a length-d
/// cycle s at the endpoint and every continuation of `at` is the forced
/// infinite repetition of s; any branch or sink in the future breaks it.
pub fn germ_equal(g: &Graph, p: &PrefixMap, q: &PrefixMap, at: &Path) -> Result<bool, GraphError> {
    let a = p.apply(g, at).ok_or(GraphError::OutsideDomain)?;
    let b = q.apply(g, at).ok_or(GraphError::OutsideDomain)?;
    if a == b {
        return Ok(true);
    }
    if a.len() == b.len() {
        return Ok(false);
    }
    let (long, short) = if a.len() > b.len() { (&a, &b) } else { (&b, &a) };
    let Some(s) = long.strip_prefix(g, short) else {
        return Ok(false);
    };
    let d = s.len();
    // The extra piece must cycle at the endpoint of `at`.
    if s.src() != at.dst(g) {
        return Ok(false);
    }
    // Forced future: every reachable vertex emits exactly one edge.
    let reach = g.reachable_from(at.dst(g));
    if reach.iter().any(|&v| g.out_degree(v) != 1) {
        return Ok(false);
    }
    // The unique continuation must be the infinite repetition of s; an
    // eventually periodic stream is pinned by this many positions.
    let bound = g.n_vertices() + g.n_edges() + d;
    let mut v = at.dst(g);
    for i in 0..bound {
        let e = g.out_edges(v)[0];
        if e != s.edge_list()[i % d] {
            return Ok(false);
        }
        v = g.edge(e).dst;
    }
    Ok(true)
}

/// One arrow class of the shift groupoid: a pair of paths into a common
/// vertex, with the degree k = |mu| - |nu|.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DRArrowClass {
    pub mu: Path,
    pub k: i64,
    pub nu: Path,
}

/// Reduces a pair under (mu, nu) ~ (mu t, nu t) by stripping the longest
/// common edge suffix.
pub fn reduce_pair(g: &Graph, mu: &Path, nu: &Path) -> (Path, Path) {
    let me = mu.edge_list();
    let ne = nu.edge_list();
    let mut strip = 0;
    while strip < me.len() && strip < ne.len() && me[me.len() - 1 - strip] == ne[ne.len() - 1 - strip] {
        strip += 1;
    }
    let cut = |p: &Path| {
        let rest = &p.edge_list()[..p.len() - strip];
        if rest.is_empty() {
            Path::empty(p.src())
        } else {
            Path::from_edges(g, rest.to_vec()).expect("prefix of a path is a path")
        }
    };
    let (m, n) = (cut(mu), cut(nu));
    // Stripping everything from one side leaves base vertices; for the
    // empty pair the base is the common source, already consistent.
    (m, n)
}

/// All arrow classes with representatives of length at most `depth`, one
/// reduced representative per class, ordered by degree then paths.
pub fn dr_arrows_at_depth(g: &Graph, depth: usize) -> Result<Vec<DRArrowClass>, GraphError> {
    g.require_sink_free()?;
    let paths = paths_up_to(g, depth);
    let mut out = Vec::new();
    for mu in &paths {
        for nu in &paths {
            if mu.dst(g) != nu.dst(g) {
                continue;
            }
            // Reduced representatives only: no common last edge.
            if let (Some(&a), Some(&b)) = (mu.edge_list().last(), nu.edge_list().last()) {
                if a == b {
                    continue;
                }
            }
            out.push(DRArrowClass { mu: mu.clone(), k: mu.len() as i64 - nu.len() as i64, nu: nu.clone() });
        }
    }
    out.sort_by(|x, y| {
        (x.k, &x.mu, &x.nu).cmp(&(y.k, &y.mu, &y.nu))
    });
    Ok(out)
}

/// Whether the finite union of prefix maps `candidate` belongs locally to
/// the pseudogroup generated by `generators`: every cylinder refined to
/// `depth` inside the candidate's domain must carry the germ of some
/// composition word of generators and inverses of length at most
/// `word_bound`.
pub fn locally_belongs(
    g: &Graph,
    candidate: &[PrefixMap],
    generators: &[PrefixMap],
    depth: usize,
    word_bound: usize,
) -> Result<bool, GraphError> {
    // Consistency of the candidate pieces on overlaps.
    for i in 0..candidate.len() {
        for j in i + 1..candidate.len() {
            let (pi, pj) = (&candidate[i], &candidate[j]);
            let deeper = if pi.nu.extends(g, &pj.nu) {
                Some(pi.nu.clone())
            } else if pj.nu.extends(g, &pi.nu) {
                Some(pj.nu.clone())
            } else {
                None
            };
            if let Some(at) = deeper {
                if !germ_equal(g, pi, pj, &at)? {
                    return Err(GraphError::InconsistentCandidate(i, j));
                }
            }
        }
    }

    // Words over the generators and their inverses, identity included.
    let mut alphabet: Vec<PrefixMap> = Vec::new();
    for gen in generators {
        alphabet.push(gen.clone());
        alphabet.push(gen.inverse());
    }
    let mut words: BTreeSet<PrefixMap> =
        (0..g.n_vertices() as u32).map(|v| PrefixMap { mu: Path::empty(v), nu: Path::empty(v) }).collect();
    let mut frontier: Vec<PrefixMap> = words.iter().cloned().collect();
    for _ in 0..word_bound {
        let mut next = Vec::new();
        for w in &frontier {
            for a in &alphabet {
                if let Some(c) = a.compose(g, w) {
                    if words.insert(c.clone()) {
                        next.push(c);
                    }
                }
            }
        }
        frontier = next;
        if frontier.is_empty() {
            break;
        }
    }

    for piece in candidate {
        for cyl in extensions(g, &piece.nu, depth) {
            let covered = words.iter().any(|w| {
                cyl.extends(g, &w.nu) && germ_equal(g, w, piece, &cyl) == Ok(true)
            });
            if !covered {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

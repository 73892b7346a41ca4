//! Labelled-graph representation: degree queries, clique enumeration,
//! discrepancy evaluation and clique-type classification.

use crate::bitset::Bitset;
use crate::error::{Error, Result};

/// Undirected simple graph on vertices `0..n`, adjacency stored as bitset rows.
#[derive(Clone, Debug)]
pub struct Graph {
    n: usize,
    m: usize,
    adj: Vec<Bitset>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph {
            n,
            m: 0,
            adj: vec![Bitset::new(n); n],
        }
    }

    /// Complete graph on `n` vertices.
    pub fn complete(n: usize) -> Self {
        let mut g = Graph::new(n);
        for u in 0..n as u32 {
            for v in u + 1..n as u32 {
                g.add_edge(u, v).expect("complete graph edges are valid");
            }
        }
        g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.m
    }

    pub fn add_edge(&mut self, u: u32, v: u32) -> Result<()> {
        if u == v {
            return Err(Error::Structure(format!("self-loop at vertex {u}")));
        }
        if u as usize >= self.n || v as usize >= self.n {
            return Err(Error::Structure(format!(
                "edge {u}-{v} out of range for n={}",
                self.n
            )));
        }
        if !self.adj[u as usize].contains(v) {
            self.adj[u as usize].insert(v);
            self.adj[v as usize].insert(u);
            self.m += 1;
        }
        Ok(())
    }

    #[inline]
    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        u != v && (u as usize) < self.n && (v as usize) < self.n && self.adj[u as usize].contains(v)
    }

    pub fn degree(&self, v: u32) -> usize {
        self.adj[v as usize].count()
    }

    pub fn neighbors(&self, v: u32) -> &Bitset {
        &self.adj[v as usize]
    }

    /// Minimum degree; 0 for the empty graph.
    pub fn min_degree(&self) -> usize {
        (0..self.n as u32).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    /// Edges as `(u, v)` pairs with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.n as u32).flat_map(move |u| {
            self.adj[u as usize]
                .iter()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    pub fn is_clique(&self, vs: &[u32]) -> bool {
        for (i, &u) in vs.iter().enumerate() {
            for &v in &vs[i + 1..] {
                if !self.has_edge(u, v) {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_complete(&self) -> bool {
        self.m == self.n * self.n.saturating_sub(1) / 2
    }

    /// All `r`-cliques that contain every vertex of `containing`, as canonical
    /// sorted vertex lists in lexicographic order. If `containing` is not
    /// itself a clique the list is empty.
    pub fn cliques_of_size(&self, r: usize, containing: &[u32]) -> Vec<Clique> {
        let mut base: Vec<u32> = containing.to_vec();
        base.sort_unstable();
        base.dedup();
        if base.len() != containing.len() || !self.is_clique(&base) || base.len() > r || r > self.n
        {
            return Vec::new();
        }
        // Candidates: common neighbourhood of the base set.
        let mut cand = Bitset::full(self.n);
        for &v in &base {
            cand.intersect_with(&self.adj[v as usize]);
        }
        let mut out = Vec::new();
        let need = r - base.len();
        let mut chosen: Vec<u32> = Vec::with_capacity(need);
        self.extend_cliques(&cand, need, 0, &mut chosen, &mut |chosen| {
            let mut vs = base.clone();
            vs.extend_from_slice(chosen);
            vs.sort_unstable();
            out.push(Clique(vs));
        });
        out.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        out
    }

    fn extend_cliques(
        &self,
        cand: &Bitset,
        need: usize,
        min_vertex: u32,
        chosen: &mut Vec<u32>,
        emit: &mut impl FnMut(&[u32]),
    ) {
        if need == 0 {
            emit(chosen);
            return;
        }
        for v in cand.iter() {
            if v < min_vertex {
                continue;
            }
            let next = cand.intersection(&self.adj[v as usize]);
            chosen.push(v);
            self.extend_cliques(&next, need - 1, v + 1, chosen, emit);
            chosen.pop();
        }
    }
}

/// Complete multipartite graph with the given class sizes; classes occupy
/// consecutive index ranges.
pub fn complete_multipartite(sizes: &[usize]) -> Graph {
    let n: usize = sizes.iter().sum();
    let mut class = Vec::with_capacity(n);
    for (c, &s) in sizes.iter().enumerate() {
        class.extend(std::iter::repeat_n(c, s));
    }
    let mut g = Graph::new(n);
    for u in 0..n as u32 {
        for v in u + 1..n as u32 {
            if class[u as usize] != class[v as usize] {
                g.add_edge(u, v).expect("multipartite edges are valid");
            }
        }
    }
    g
}

/// Total map from the edges of a graph to `{-1, +1}`.
#[derive(Clone, Debug)]
pub struct EdgeLabeling {
    n: usize,
    labels: Vec<i8>, // 0 means "not in domain"
}

impl EdgeLabeling {
    /// Empty labelling over vertex range `0..n`; assign with [`set`](Self::set).
    pub fn new(n: usize) -> Self {
        EdgeLabeling {
            n,
            labels: vec![0; n * n.saturating_sub(1) / 2],
        }
    }

    /// Builds a total labelling of `g` from a sign function.
    pub fn from_fn(g: &Graph, mut f: impl FnMut(u32, u32) -> i8) -> Result<Self> {
        let mut lab = EdgeLabeling::new(g.n());
        for (u, v) in g.edges() {
            lab.set(u, v, f(u, v))?;
        }
        Ok(lab)
    }

    /// Constant labelling of all edges of `g`.
    pub fn constant(g: &Graph, sign: i8) -> Result<Self> {
        Self::from_fn(g, |_, _| sign)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    fn index(&self, u: u32, v: u32) -> usize {
        let (u, v) = if u < v { (u, v) } else { (v, u) };
        let (u, v) = (u as usize, v as usize);
        u * self.n - u * (u + 1) / 2 + (v - u - 1)
    }

    pub fn set(&mut self, u: u32, v: u32, sign: i8) -> Result<()> {
        if u == v || u as usize >= self.n || v as usize >= self.n {
            return Err(Error::Structure(format!("invalid edge {u}-{v}")));
        }
        if sign != 1 && sign != -1 {
            return Err(Error::Structure(format!(
                "label {sign} for edge {u}-{v} not in {{-1,+1}}"
            )));
        }
        let i = self.index(u, v);
        self.labels[i] = sign;
        Ok(())
    }

    /// Label of `uv`; domain error if `uv` was never assigned.
    pub fn label(&self, u: u32, v: u32) -> Result<i8> {
        if u == v || u as usize >= self.n || v as usize >= self.n {
            return Err(Error::Domain(u, v));
        }
        match self.labels[self.index(u, v)] {
            0 => Err(Error::Domain(u, v)),
            s => Ok(s),
        }
    }

    /// True iff the domain is exactly `E(g)`.
    pub fn is_total_on(&self, g: &Graph) -> bool {
        if self.n != g.n() {
            return false;
        }
        let labelled = self.labels.iter().filter(|&&s| s != 0).count();
        labelled == g.edge_count() && g.edges().all(|(u, v)| self.label(u, v).is_ok())
    }

    /// Sum of labels over an edge collection (Def of discrepancy).
    pub fn discrepancy(&self, edges: impl IntoIterator<Item = (u32, u32)>) -> Result<i64> {
        let mut sum = 0i64;
        for (u, v) in edges {
            sum += self.label(u, v)? as i64;
        }
        Ok(sum)
    }
}

/// An `r`-clique stored as an ascending vertex list (canonical form).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Clique(Vec<u32>);

impl Clique {
    /// Canonicalises the vertex list; duplicate vertices are a structure error.
    pub fn new(mut vertices: Vec<u32>) -> Result<Self> {
        vertices.sort_unstable();
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Structure("repeated vertex in clique".into()));
        }
        Ok(Clique(vertices))
    }

    pub fn vertices(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: u32) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    /// Internal edges `(u, v)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.0
            .iter()
            .enumerate()
            .flat_map(move |(i, &u)| self.0[i + 1..].iter().map(move |&v| (u, v)))
    }
}

/// The four rigid labelled-clique types, plus everything else.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CliqueKind {
    AllPlus,
    AllMinus,
    PlusStar(u32),
    MinusStar(u32),
    Other,
}

impl CliqueKind {
    pub fn is_type(self) -> bool {
        !matches!(self, CliqueKind::Other)
    }
}

/// Classifies a labelled clique of size >= 3.
///
/// A `PlusStar(h)` has exactly the `k-1` edges at `h` labelled `+1` and all
/// other edges `-1`; `MinusStar` is the dual. For triangles this resolves the
/// apparent ambiguity canonically: two `+1`-edges sharing a vertex form a
/// `PlusStar` headed at the shared vertex, one `+1`-edge means the two
/// `-1`-edges share the `MinusStar` head.
pub fn classify_clique(f: &EdgeLabeling, c: &Clique) -> Result<CliqueKind> {
    let k = c.len();
    if k < 3 {
        return Err(Error::Size(k));
    }
    let vs = c.vertices();
    let total = k * (k - 1) / 2;
    let mut plus = 0usize;
    let mut plus_deg = vec![0usize; k];
    let mut minus_deg = vec![0usize; k];
    for (i, &u) in vs.iter().enumerate() {
        for (j, &v) in vs.iter().enumerate().skip(i + 1) {
            if f.label(u, v)? == 1 {
                plus += 1;
                plus_deg[i] += 1;
                plus_deg[j] += 1;
            } else {
                minus_deg[i] += 1;
                minus_deg[j] += 1;
            }
        }
    }
    let minus = total - plus;
    if plus == total {
        return Ok(CliqueKind::AllPlus);
    }
    if minus == total {
        return Ok(CliqueKind::AllMinus);
    }
    if plus == k - 1 {
        if let Some(h) = (0..k).find(|&i| plus_deg[i] == k - 1) {
            return Ok(CliqueKind::PlusStar(vs[h]));
        }
    }
    if minus == k - 1 {
        if let Some(h) = (0..k).find(|&i| minus_deg[i] == k - 1) {
            return Ok(CliqueKind::MinusStar(vs[h]));
        }
    }
    Ok(CliqueKind::Other)
}

/// Checks `f(ab) + f(cd) = f(ac) + f(bd)` over all quadruples of a labelled
/// complete graph. Unordered quadruples with all three pairings suffice.
pub fn swap_identity_holds(g: &Graph, f: &EdgeLabeling) -> Result<bool> {
    if !g.is_complete() {
        return Err(Error::Structure(
            "swap identity is only defined on complete graphs".into(),
        ));
    }
    let n = g.n() as u32;
    if n < 4 {
        return Err(Error::Structure(
            "swap identity needs at least 4 vertices".into(),
        ));
    }
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    let s1 = f.label(a, b)? + f.label(c, d)?;
                    let s2 = f.label(a, c)? + f.label(b, d)?;
                    let s3 = f.label(a, d)? + f.label(b, c)?;
                    if s1 != s2 || s2 != s3 {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn min_degree_examples() {
        assert_eq!(complete_multipartite(&[3, 3, 3, 3]).min_degree(), 9);
        assert_eq!(Graph::new(5).min_degree(), 0);
        assert_eq!(Graph::complete(6).min_degree(), 5);
        assert_eq!(Graph::new(0).min_degree(), 0);
    }

    #[test]
    fn cliques_of_size_examples() {
        let k4 = Graph::complete(4);
        assert_eq!(k4.cliques_of_size(3, &[]).len(), 4);

        let g = complete_multipartite(&[3, 3, 3, 3]);
        let with0 = g.cliques_of_size(3, &[0]);
        assert_eq!(with0.len(), 27);
        assert!(with0.iter().all(|c| c.contains(0)));

        let mut path = Graph::new(3);
        path.add_edge(0, 1).unwrap();
        path.add_edge(1, 2).unwrap();
        assert!(path.cliques_of_size(3, &[]).is_empty());

        // Non-clique containing set yields nothing.
        assert!(path.cliques_of_size(3, &[0, 2]).is_empty());
    }

    #[test]
    fn cliques_output_is_strictly_lexicographic() {
        let g = complete_multipartite(&[2, 2, 2, 2]);
        let cs = g.cliques_of_size(3, &[]);
        assert!(cs.windows(2).all(|w| w[0] < w[1]));
        let cs1 = g.cliques_of_size(4, &[3]);
        assert!(cs1.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn discrepancy_examples() {
        let k3 = Graph::complete(3);
        let f = EdgeLabeling::constant(&k3, 1).unwrap();
        assert_eq!(f.discrepancy(k3.edges()).unwrap(), 3);

        // (K_4,-)-star headed at 0: edges at 0 are -1, the rest +1.
        let k4 = Graph::complete(4);
        let f = EdgeLabeling::from_fn(&k4, |u, _| if u == 0 { -1 } else { 1 }).unwrap();
        assert_eq!(f.discrepancy(k4.edges()).unwrap(), 0);

        // Edge outside the domain.
        assert_eq!(f.discrepancy([(0, 5)]), Err(Error::Domain(0, 5)));
    }

    #[test]
    fn discrepancy_is_additive_and_parity_bounded() {
        let k5 = Graph::complete(5);
        let f = EdgeLabeling::from_fn(&k5, |u, v| if (u + v) % 2 == 0 { 1 } else { -1 }).unwrap();
        let all: Vec<_> = k5.edges().collect();
        let (a, b) = all.split_at(4);
        let da = f.discrepancy(a.iter().copied()).unwrap();
        let db = f.discrepancy(b.iter().copied()).unwrap();
        let dall = f.discrepancy(all.iter().copied()).unwrap();
        assert_eq!(da + db, dall);
        assert!(dall.unsigned_abs() as usize <= all.len());
        assert_eq!(dall.rem_euclid(2) as usize, all.len() % 2);
    }

    #[test]
    fn classify_examples() {
        let k4 = Graph::complete(4);
        let c = Clique::new(vec![0, 1, 2, 3]).unwrap();

        let f = EdgeLabeling::constant(&k4, 1).unwrap();
        assert_eq!(classify_clique(&f, &c).unwrap(), CliqueKind::AllPlus);

        let f = EdgeLabeling::from_fn(&k4, |u, v| if u == 2 || v == 2 { 1 } else { -1 }).unwrap();
        assert_eq!(classify_clique(&f, &c).unwrap(), CliqueKind::PlusStar(2));

        // Exactly two disjoint +1 edges.
        let f = EdgeLabeling::from_fn(&k4, |u, v| {
            if (u, v) == (0, 1) || (u, v) == (2, 3) {
                1
            } else {
                -1
            }
        })
        .unwrap();
        assert_eq!(classify_clique(&f, &c).unwrap(), CliqueKind::Other);

        let pair = Clique::new(vec![0, 1]).unwrap();
        assert_eq!(classify_clique(&f, &pair), Err(Error::Size(2)));
    }

    #[test]
    fn classify_triangle_resolution() {
        let k3 = Graph::complete(3);
        let c = Clique::new(vec![0, 1, 2]).unwrap();
        // Two +1 edges share vertex 1.
        let f = EdgeLabeling::from_fn(&k3, |u, v| if u == 1 || v == 1 { 1 } else { -1 }).unwrap();
        assert_eq!(classify_clique(&f, &c).unwrap(), CliqueKind::PlusStar(1));
        // One +1 edge 0-2: the two -1 edges share vertex 1.
        let f = EdgeLabeling::from_fn(&k3, |u, v| if (u, v) == (0, 2) { 1 } else { -1 }).unwrap();
        assert_eq!(classify_clique(&f, &c).unwrap(), CliqueKind::MinusStar(1));
    }

    #[test]
    fn classify_is_relabeling_invariant() {
        // Apply the permutation (0 1 2 3 4) -> (3 0 4 1 2) to graph and labels.
        let perm = [3u32, 0, 4, 1, 2];
        let k5 = Graph::complete(5);
        let f = EdgeLabeling::from_fn(&k5, |u, v| if u == 2 || v == 2 { 1 } else { -1 }).unwrap();
        let g2 = Graph::complete(5);
        let f2 = EdgeLabeling::from_fn(&g2, |u, v| {
            let (pu, pv) = (perm.iter().position(|&x| x == u).unwrap() as u32,
                            perm.iter().position(|&x| x == v).unwrap() as u32);
            f.label(pu, pv).unwrap()
        })
        .unwrap();
        let c = Clique::new(vec![0, 1, 2, 3, 4]).unwrap();
        assert_eq!(classify_clique(&f, &c).unwrap(), CliqueKind::PlusStar(2));
        assert_eq!(
            classify_clique(&f2, &c).unwrap(),
            CliqueKind::PlusStar(perm[2])
        );
    }

    #[test]
    fn swap_identity_examples() {
        let k5 = Graph::complete(5);
        let f = EdgeLabeling::constant(&k5, 1).unwrap();
        assert!(swap_identity_holds(&k5, &f).unwrap());

        let star = EdgeLabeling::from_fn(&k5, |u, _| if u == 0 { 1 } else { -1 }).unwrap();
        assert!(swap_identity_holds(&k5, &star).unwrap());

        let one_minus =
            EdgeLabeling::from_fn(&k5, |u, v| if (u, v) == (0, 1) { -1 } else { 1 }).unwrap();
        assert!(!swap_identity_holds(&k5, &one_minus).unwrap());

        let mut incomplete = Graph::new(5);
        incomplete.add_edge(0, 1).unwrap();
        assert!(matches!(
            swap_identity_holds(&incomplete, &f),
            Err(Error::Structure(_))
        ));
    }

    /// The equivalence swap-identity <=> one of the four types is asserted by
    /// the source material only for k >= 5. Exhausting all 64 labellings shows
    /// it also holds at k = 4.
    #[test]
    fn swap_identity_matches_types_at_k4() {
        let k4 = Graph::complete(4);
        let c = Clique::new(vec![0, 1, 2, 3]).unwrap();
        let edges: Vec<_> = k4.edges().collect();
        for mask in 0u32..1 << 6 {
            let mut f = EdgeLabeling::new(4);
            for (i, &(u, v)) in edges.iter().enumerate() {
                f.set(u, v, if mask >> i & 1 == 1 { 1 } else { -1 }).unwrap();
            }
            let holds = swap_identity_holds(&k4, &f).unwrap();
            let kind = classify_clique(&f, &c).unwrap();
            assert_eq!(holds, kind.is_type(), "mask {mask:#b}");
        }
    }
}

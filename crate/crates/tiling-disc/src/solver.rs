//! Exact enumeration and branch-and-bound optimisation of perfect
//! K_r-tilings, plus seeded randomised sampling for larger instances.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bitset::Bitset;
use crate::error::{Error, Result};
use crate::graph::{Clique, EdgeLabeling, Graph};

/// A set of pairwise vertex-disjoint r-cliques.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tiling {
    tiles: Vec<Clique>,
}

impl Tiling {
    /// Canonicalises (sorts tiles) and rejects overlapping tiles.
    pub fn new(tiles: Vec<Clique>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for t in &tiles {
            for &v in t.vertices() {
                if !seen.insert(v) {
                    return Err(Error::Structure(format!("vertex {v} covered twice")));
                }
            }
        }
        let mut tiles = tiles;
        tiles.sort_unstable();
        Ok(Tiling { tiles })
    }

    pub fn tiles(&self) -> &[Clique] {
        &self.tiles
    }

    pub fn covered(&self) -> usize {
        self.tiles.iter().map(Clique::len).sum()
    }

    /// Internal edges of all tiles.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.tiles.iter().flat_map(Clique::edges)
    }

    pub fn is_perfect(&self, g: &Graph) -> bool {
        self.covered() == g.n()
    }

    /// Checks every tile is a clique of `g` and the union covers `V(g)` when
    /// `perfect` is requested.
    pub fn validate(&self, g: &Graph, perfect: bool) -> Result<()> {
        for t in &self.tiles {
            if !g.is_clique(t.vertices()) {
                return Err(Error::Structure(format!(
                    "tile {:?} is not a clique of the host graph",
                    t.vertices()
                )));
            }
        }
        if perfect && !self.is_perfect(g) {
            return Err(Error::Structure(format!(
                "tiling covers {} of {} vertices",
                self.covered(),
                g.n()
            )));
        }
        Ok(())
    }

    pub fn discrepancy(&self, f: &EdgeLabeling) -> Result<i64> {
        f.discrepancy(self.edges())
    }
}

/// Search strategy for [`discrepancy_extremes`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    Exhaustive,
    BranchAndBound,
}

/// Exact minimum and maximum tiling discrepancy, with witnesses.
#[derive(Clone, Debug)]
pub struct DiscrepancyExtremes {
    pub min_disc: i64,
    pub max_disc: i64,
    pub witness_min: Tiling,
    pub witness_max: Tiling,
    /// Total number of perfect tilings; `None` under branch-and-bound.
    pub tilings_seen: Option<u64>,
}

impl DiscrepancyExtremes {
    pub fn max_absolute(&self) -> i64 {
        self.min_disc.unsigned_abs().max(self.max_disc.unsigned_abs()) as i64
    }
}

// Depth-first tiling search. Branches on the lowest-index uncovered vertex
// and extends tiles in increasing vertex order, so leaves appear in a fixed
// lexicographic order.
struct Searcher<'a> {
    g: &'a Graph,
    r: usize,
    uncovered: Bitset,
    tiles: Vec<Clique>,
    stopped: bool,
}

impl<'a> Searcher<'a> {
    fn new(g: &'a Graph, r: usize) -> Self {
        Searcher {
            g,
            r,
            uncovered: Bitset::full(g.n()),
            tiles: Vec::with_capacity(g.n() / r.max(1)),
            stopped: false,
        }
    }

    /// Visits every perfect tiling; the visitor returns `false` to stop.
    fn run(&mut self, visit: &mut impl FnMut(&[Clique]) -> bool) {
        if self.stopped {
            return;
        }
        let v = match self.uncovered.first() {
            None => {
                if !visit(&self.tiles) {
                    self.stopped = true;
                }
                return;
            }
            Some(v) => v,
        };
        let cand = self.uncovered.intersection(self.g.neighbors(v));
        let mut tile = Vec::with_capacity(self.r);
        tile.push(v);
        self.extend_tile(&cand, v + 1, &mut tile, visit);
    }

    fn extend_tile(
        &mut self,
        cand: &Bitset,
        min_vertex: u32,
        tile: &mut Vec<u32>,
        visit: &mut impl FnMut(&[Clique]) -> bool,
    ) {
        if tile.len() == self.r {
            for &u in tile.iter() {
                self.uncovered.remove(u);
            }
            self.tiles.push(Clique::new(tile.clone()).expect("distinct vertices"));
            self.run(visit);
            self.tiles.pop();
            for &u in tile.iter() {
                self.uncovered.insert(u);
            }
            return;
        }
        for u in cand.iter() {
            if u < min_vertex {
                continue;
            }
            if self.stopped {
                return;
            }
            let next = cand.intersection(self.g.neighbors(u));
            tile.push(u);
            self.extend_tile(&next, u + 1, tile, visit);
            tile.pop();
        }
    }
}

fn check_divisibility(g: &Graph, r: usize) -> Result<()> {
    if r == 0 || !g.n().is_multiple_of(r) {
        return Err(Error::Parameter(format!(
            "clique size {r} does not divide vertex count {}",
            g.n()
        )));
    }
    Ok(())
}

/// Invokes `visitor` once per perfect tiling, in lexicographic branching
/// order, and returns the total count.
pub fn enumerate_perfect_tilings(
    g: &Graph,
    r: usize,
    mut visitor: impl FnMut(&[Clique]),
) -> Result<u64> {
    check_divisibility(g, r)?;
    let mut count = 0u64;
    let mut s = Searcher::new(g, r);
    s.run(&mut |tiles| {
        count += 1;
        visitor(tiles);
        true
    });
    Ok(count)
}

/// True iff `g` has a perfect K_r-tiling; `false` (not an error) when r does
/// not divide n.
pub fn exists_perfect_tiling(g: &Graph, r: usize) -> bool {
    if r == 0 || !g.n().is_multiple_of(r) {
        return false;
    }
    let mut found = false;
    let mut s = Searcher::new(g, r);
    s.run(&mut |_| {
        found = true;
        false
    });
    found
}

/// Exact extremes of tiling discrepancy over all perfect K_r-tilings.
///
/// Branch-and-bound prunes with the per-tile bound `binom(r,2)` on the
/// remaining discrepancy and returns identical extremes (and witnesses) to
/// the exhaustive mode.
pub fn discrepancy_extremes(
    g: &Graph,
    f: &EdgeLabeling,
    r: usize,
    mode: SearchMode,
) -> Result<DiscrepancyExtremes> {
    check_divisibility(g, r)?;
    if !f.is_total_on(g) {
        return Err(Error::Structure(
            "labelling is not total on the graph's edges".into(),
        ));
    }
    match mode {
        SearchMode::Exhaustive => {
            let mut best: Option<(i64, Tiling, i64, Tiling)> = None;
            let mut count = 0u64;
            let mut s = Searcher::new(g, r);
            s.run(&mut |tiles| {
                let disc: i64 = tiles
                    .iter()
                    .map(|t| f.discrepancy(t.edges()).expect("total labelling"))
                    .sum();
                count += 1;
                match &mut best {
                    None => {
                        let t = Tiling::new(tiles.to_vec()).expect("search tiles are disjoint");
                        best = Some((disc, t.clone(), disc, t));
                    }
                    Some((min_d, min_w, max_d, max_w)) => {
                        if disc < *min_d {
                            *min_d = disc;
                            *min_w = Tiling::new(tiles.to_vec()).expect("disjoint");
                        }
                        if disc > *max_d {
                            *max_d = disc;
                            *max_w = Tiling::new(tiles.to_vec()).expect("disjoint");
                        }
                    }
                }
                true
            });
            let (min_disc, witness_min, max_disc, witness_max) = best.ok_or(Error::Infeasible)?;
            Ok(DiscrepancyExtremes {
                min_disc,
                max_disc,
                witness_min,
                witness_max,
                tilings_seen: Some(count),
            })
        }
        SearchMode::BranchAndBound => {
            let max = bnb_optimize(g, f, r, true).ok_or(Error::Infeasible)?;
            let min = bnb_optimize(g, f, r, false).ok_or(Error::Infeasible)?;
            Ok(DiscrepancyExtremes {
                min_disc: min.0,
                max_disc: max.0,
                witness_min: min.1,
                witness_max: max.1,
                tilings_seen: None,
            })
        }
    }
}

// One oriented optimisation pass. The bound is
// `current + remaining_tiles * binom(r,2)` for maximisation (negated for
// minimisation); a branch is cut when it cannot strictly improve, which
// preserves the first witness attaining the optimum.
fn bnb_optimize(g: &Graph, f: &EdgeLabeling, r: usize, maximize: bool) -> Option<(i64, Tiling)> {
    let per_tile = (r * (r - 1) / 2) as i64;
    let mut best: Option<(i64, Tiling)> = None;

    struct Bnb<'a> {
        g: &'a Graph,
        f: &'a EdgeLabeling,
        r: usize,
        per_tile: i64,
        maximize: bool,
        uncovered: Bitset,
        tiles: Vec<Clique>,
        disc: i64,
    }

    impl<'a> Bnb<'a> {
        fn node(&mut self, best: &mut Option<(i64, Tiling)>) {
            let remaining = (self.uncovered.count() / self.r) as i64;
            if let Some((b, _)) = best {
                let bound = if self.maximize {
                    self.disc + remaining * self.per_tile
                } else {
                    -(self.disc - remaining * self.per_tile)
                };
                let target = if self.maximize { *b } else { -*b };
                if bound <= target {
                    return;
                }
            }
            let v = match self.uncovered.first() {
                None => {
                    let better = match best {
                        None => true,
                        Some((b, _)) => {
                            if self.maximize {
                                self.disc > *b
                            } else {
                                self.disc < *b
                            }
                        }
                    };
                    if better {
                        *best = Some((
                            self.disc,
                            Tiling::new(self.tiles.clone()).expect("disjoint"),
                        ));
                    }
                    return;
                }
                Some(v) => v,
            };
            let cand = self.uncovered.intersection(self.g.neighbors(v));
            let mut tile = Vec::with_capacity(self.r);
            tile.push(v);
            self.extend(&cand, v + 1, &mut tile, 0, best);
        }

        fn extend(
            &mut self,
            cand: &Bitset,
            min_vertex: u32,
            tile: &mut Vec<u32>,
            tile_disc: i64,
            best: &mut Option<(i64, Tiling)>,
        ) {
            if tile.len() == self.r {
                for &u in tile.iter() {
                    self.uncovered.remove(u);
                }
                self.tiles.push(Clique::new(tile.clone()).expect("distinct"));
                self.disc += tile_disc;
                self.node(best);
                self.disc -= tile_disc;
                self.tiles.pop();
                for &u in tile.iter() {
                    self.uncovered.insert(u);
                }
                return;
            }
            for u in cand.iter() {
                if u < min_vertex {
                    continue;
                }
                let added: i64 = tile
                    .iter()
                    .map(|&w| self.f.label(w, u).expect("total labelling") as i64)
                    .sum();
                let next = cand.intersection(self.g.neighbors(u));
                tile.push(u);
                self.extend(&next, u + 1, tile, tile_disc + added, best);
                tile.pop();
            }
        }
    }

    let mut bnb = Bnb {
        g,
        f,
        r,
        per_tile,
        maximize,
        uncovered: Bitset::full(g.n()),
        tiles: Vec::new(),
        disc: 0,
    };
    bnb.node(&mut best);
    best
}

/// Default restart budget for [`sample_tiling`].
pub fn default_restart_budget(g: &Graph) -> usize {
    10 * g.n().max(1)
}

/// Seeded randomised greedy tiling with restarts (default budget `10 * n`).
pub fn sample_tiling(g: &Graph, r: usize, seed: u64) -> Result<Tiling> {
    sample_tiling_with_budget(g, r, seed, default_restart_budget(g))
}

/// As [`sample_tiling`] with an explicit restart budget. Exhausting the
/// budget is a failure, not a proof of infeasibility.
pub fn sample_tiling_with_budget(g: &Graph, r: usize, seed: u64, restarts: usize) -> Result<Tiling> {
    check_divisibility(g, r)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..restarts.max(1) {
        if let Some(t) = sample_attempt(g, r, &mut rng) {
            return Tiling::new(t);
        }
    }
    Err(Error::BudgetExhausted(restarts.max(1)))
}

fn sample_attempt(g: &Graph, r: usize, rng: &mut ChaCha8Rng) -> Option<Vec<Clique>> {
    let mut uncovered = Bitset::full(g.n());
    let mut tiles = Vec::with_capacity(g.n() / r);
    while let Some(v) = uncovered.first() {
        // Randomised greedy: grow the tile one uniform vertex at a time from
        // the shrinking common neighbourhood; any dead end aborts the attempt.
        let mut cand = uncovered.intersection(g.neighbors(v));
        let mut chosen = vec![v];
        for _ in 1..r {
            let count = cand.count();
            if count == 0 {
                return None;
            }
            let u = cand
                .iter()
                .nth(rng.gen_range(0..count))
                .expect("count is exact");
            cand.intersect_with(g.neighbors(u));
            cand.remove(u);
            chosen.push(u);
        }
        for &u in &chosen {
            uncovered.remove(u);
        }
        tiles.push(Clique::new(chosen).expect("distinct vertices"));
    }
    Some(tiles)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::complete_multipartite;

    fn two_triangles() -> Graph {
        let mut g = Graph::new(6);
        for &(u, v) in &[(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5)] {
            g.add_edge(u, v).unwrap();
        }
        g
    }

    #[test]
    fn enumerate_examples() {
        assert_eq!(
            enumerate_perfect_tilings(&two_triangles(), 3, |_| {}).unwrap(),
            1
        );
        assert_eq!(
            enumerate_perfect_tilings(&Graph::complete(4), 2, |_| {}).unwrap(),
            3
        );
        assert_eq!(
            enumerate_perfect_tilings(&complete_multipartite(&[3, 3, 3, 3]), 3, |_| {}).unwrap(),
            1296
        );
        assert!(matches!(
            enumerate_perfect_tilings(&Graph::complete(5), 2, |_| {}),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn enumeration_is_deterministic_and_ordered() {
        let g = Graph::complete(4);
        let mut seen = Vec::new();
        enumerate_perfect_tilings(&g, 2, |tiles| {
            seen.push(tiles.to_vec());
        })
        .unwrap();
        assert_eq!(seen.len(), 3);
        assert!(seen.windows(2).all(|w| w[0] < w[1]));
        // First tile always starts at vertex 0.
        assert!(seen.iter().all(|t| t[0].vertices()[0] == 0));
    }

    #[test]
    fn extremes_examples() {
        // K_4, r=2, f(01)=-1, rest +1: matchings score 0, 2, 2.
        let g = Graph::complete(4);
        let f = EdgeLabeling::from_fn(&g, |u, v| if (u, v) == (0, 1) { -1 } else { 1 }).unwrap();
        let ext = discrepancy_extremes(&g, &f, 2, SearchMode::Exhaustive).unwrap();
        assert_eq!((ext.min_disc, ext.max_disc), (0, 2));
        assert_eq!(ext.tilings_seen, Some(3));
        assert_eq!(ext.witness_min.discrepancy(&f).unwrap(), 0);
        assert_eq!(ext.witness_max.discrepancy(&f).unwrap(), 2);

        let bnb = discrepancy_extremes(&g, &f, 2, SearchMode::BranchAndBound).unwrap();
        assert_eq!((bnb.min_disc, bnb.max_disc), (0, 2));
        assert_eq!(bnb.witness_min, ext.witness_min);
        assert_eq!(bnb.witness_max, ext.witness_max);

        // Two disjoint all-+1 triangles.
        let g = two_triangles();
        let f = EdgeLabeling::constant(&g, 1).unwrap();
        let ext = discrepancy_extremes(&g, &f, 3, SearchMode::Exhaustive).unwrap();
        assert_eq!((ext.min_disc, ext.max_disc), (6, 6));
        assert_eq!(ext.max_absolute(), 6);
    }

    #[test]
    fn infeasible_is_an_error() {
        let mut g = Graph::new(6); // K_{1,5}
        for v in 1..6 {
            g.add_edge(0, v).unwrap();
        }
        let f = EdgeLabeling::constant(&g, 1).unwrap();
        assert!(matches!(
            discrepancy_extremes(&g, &f, 3, SearchMode::Exhaustive),
            Err(Error::Infeasible)
        ));
        assert!(!exists_perfect_tiling(&g, 3));
    }

    #[test]
    fn exists_examples() {
        assert!(exists_perfect_tiling(&complete_multipartite(&[3, 3, 3, 3]), 3));
        assert!(exists_perfect_tiling(&Graph::complete(6), 3));
        assert!(!exists_perfect_tiling(&Graph::complete(5), 3)); // 3 does not divide 5
    }

    #[test]
    fn sample_finds_unique_tiling() {
        let g = two_triangles();
        for seed in 0..10 {
            let t = sample_tiling(&g, 3, seed).unwrap();
            assert!(t.is_perfect(&g));
            t.validate(&g, true).unwrap();
        }
    }

    #[test]
    fn sample_on_k4_minus_edge() {
        let mut g = Graph::complete(4);
        g = {
            // rebuild without edge 0-1
            let mut h = Graph::new(4);
            for (u, v) in g.edges() {
                if (u, v) != (0, 1) {
                    h.add_edge(u, v).unwrap();
                }
            }
            h
        };
        let t = sample_tiling(&g, 2, 7).unwrap();
        assert!(t.is_perfect(&g));
    }

    #[test]
    fn sample_is_deterministic_per_seed() {
        let g = complete_multipartite(&[3, 3, 3, 3]);
        let a = sample_tiling(&g, 3, 42).unwrap();
        let b = sample_tiling(&g, 3, 42).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn parity_of_reported_discrepancies() {
        let g = complete_multipartite(&[2, 2, 2]);
        let f = EdgeLabeling::from_fn(&g, |u, v| if (u + v) % 2 == 0 { 1 } else { -1 }).unwrap();
        let ext = discrepancy_extremes(&g, &f, 3, SearchMode::Exhaustive).unwrap();
        let tiles = (g.n() / 3) as i64;
        let per_tile = 3i64;
        for d in [ext.min_disc, ext.max_disc] {
            assert_eq!(d.rem_euclid(2), (tiles * per_tile).rem_euclid(2));
            assert!(d.abs() <= tiles * per_tile);
        }
    }
}

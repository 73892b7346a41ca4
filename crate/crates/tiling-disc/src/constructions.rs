//! Generators for the extremal labelled Turán blow-ups, canonical perfect
//! tilings of them, and the tile-type census arithmetic.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{complete_multipartite, Clique, EdgeLabeling, Graph};
use crate::solver::Tiling;

/// Which extremal labelling a construction carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// r = 0,3 (mod 4): blow-up of a half-and-half labelled K_{r+1}.
    Mod03,
    /// r = 4m+1: circulant-balanced K_r pattern plus an evenly split special class.
    Mod1,
    /// r = 4m+2: near-half K_r pattern plus an unevenly split special class.
    Mod2,
    /// r = 2: 4-partite Turán graph, one class all-(-1)-incident.
    Matching,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::Mod03 => "mod03",
            Family::Mod1 => "mod1",
            Family::Mod2 => "mod2",
            Family::Matching => "matching",
        }
    }
}

/// Layout metadata for a generated construction. Classes occupy consecutive
/// index ranges; inside the special class, X precedes Y.
#[derive(Clone, Debug)]
pub struct ConstructionMeta {
    pub family: Family,
    pub r: usize,
    pub n: usize,
    part_sizes: Vec<usize>,
    /// `(|X|, |Y|)` split of the special (last) class, when the family has one.
    special_split: Option<(usize, usize)>,
}

impl ConstructionMeta {
    pub fn part_count(&self) -> usize {
        self.part_sizes.len()
    }

    pub fn part_sizes(&self) -> &[usize] {
        &self.part_sizes
    }

    /// Vertex range of class `i`.
    pub fn part(&self, i: usize) -> std::ops::Range<u32> {
        let start: usize = self.part_sizes[..i].iter().sum();
        start as u32..(start + self.part_sizes[i]) as u32
    }

    pub fn class_of(&self, v: u32) -> usize {
        let mut acc = 0usize;
        for (i, &s) in self.part_sizes.iter().enumerate() {
            acc += s;
            if (v as usize) < acc {
                return i;
            }
        }
        panic!("vertex {v} out of range");
    }

    /// Index of the special class (the last one), if the family has X/Y roles.
    pub fn special_class(&self) -> Option<usize> {
        self.special_split.map(|_| self.part_sizes.len() - 1)
    }

    pub fn x_vertices(&self) -> std::ops::Range<u32> {
        match self.special_split {
            None => 0..0,
            Some((x, _)) => {
                let last = self.part(self.part_sizes.len() - 1);
                last.start..last.start + x as u32
            }
        }
    }

    pub fn y_vertices(&self) -> std::ops::Range<u32> {
        match self.special_split {
            None => 0..0,
            Some((x, y)) => {
                let last = self.part(self.part_sizes.len() - 1);
                last.start + x as u32..last.start + (x + y) as u32
            }
        }
    }

    /// Label of the pattern edge between two non-special classes (and, for
    /// Mod03, any pair of classes). Panics on equal classes.
    pub fn pattern(&self, ci: usize, cj: usize) -> i8 {
        let (ci, cj) = if ci < cj { (ci, cj) } else { (cj, ci) };
        assert_ne!(ci, cj, "pattern label of a class with itself");
        match self.family {
            Family::Mod03 => {
                let k = self.r + 1;
                let half = k * (k - 1) / 2 / 2;
                if pair_rank(ci, cj, k) < half {
                    1
                } else {
                    -1
                }
            }
            Family::Mod1 => {
                let r = self.r;
                let m = (r - 1) / 4;
                let d = cj - ci;
                let dist = d.min(r - d);
                if dist <= m {
                    -1
                } else {
                    1
                }
            }
            Family::Mod2 => {
                let r = self.r;
                let plus = (r * (r - 1) / 2).div_ceil(2);
                if pair_rank(ci, cj, r) < plus {
                    1
                } else {
                    -1
                }
            }
            Family::Matching => {
                if cj == 3 {
                    -1
                } else {
                    1
                }
            }
        }
    }
}

/// Rank of the pair `(i, j)`, `i < j < k`, in lexicographic order.
fn pair_rank(i: usize, j: usize, k: usize) -> usize {
    i * k - i * (i + 1) / 2 + (j - i - 1)
}

fn build(meta: ConstructionMeta) -> (Graph, EdgeLabeling, ConstructionMeta) {
    let g = complete_multipartite(&meta.part_sizes);
    let x = meta.x_vertices();
    let y = meta.y_vertices();
    let in_x = |v: u32| x.contains(&v);
    let in_y = |v: u32| y.contains(&v);
    let f = EdgeLabeling::from_fn(&g, |u, v| {
        if in_x(u) || in_x(v) {
            1
        } else if in_y(u) || in_y(v) {
            -1
        } else {
            meta.pattern(meta.class_of(u), meta.class_of(v))
        }
    })
    .expect("labelling covers exactly the blow-up edges");
    (g, f, meta)
}

/// Extremal family for r = 0,3 (mod 4): balanced (r+1)-partite blow-up of a
/// K_{r+1} with exactly half its class pairs labelled +1.
pub fn extremal_mod03(r: usize, n: usize) -> Result<(Graph, EdgeLabeling, ConstructionMeta)> {
    if r < 3 || !matches!(r % 4, 0 | 3) {
        return Err(Error::Parameter(format!(
            "family mod03 needs r = 0,3 (mod 4) and r >= 3, got r={r}"
        )));
    }
    if n < r * (r + 1) || !n.is_multiple_of(r * (r + 1)) {
        return Err(Error::Parameter(format!(
            "n={n} must be a positive multiple of r(r+1)={}",
            r * (r + 1)
        )));
    }
    Ok(build(ConstructionMeta {
        family: Family::Mod03,
        r,
        n,
        part_sizes: vec![n / (r + 1); r + 1],
        special_split: None,
    }))
}

/// Extremal family for r = 4m+1: circulant-balanced pattern with |X| = |Y|.
pub fn extremal_mod1(m: usize, n: usize) -> Result<(Graph, EdgeLabeling, ConstructionMeta)> {
    if m == 0 {
        return Err(Error::Parameter("m must be positive".into()));
    }
    let r = 4 * m + 1;
    if n == 0 || !n.is_multiple_of(2 * r * (r + 1)) {
        return Err(Error::Parameter(format!(
            "n={n} must be a positive multiple of 2r(r+1)={}",
            2 * r * (r + 1)
        )));
    }
    let class = n / (r + 1);
    Ok(build(ConstructionMeta {
        family: Family::Mod1,
        r,
        n,
        part_sizes: vec![class; r + 1],
        special_split: Some((class / 2, class / 2)),
    }))
}

/// Extremal family for r = 4m+2: one surplus +1 pattern pair, X/Y sizes
/// (r-1)n/(2r(r+1)) and n/(2r).
pub fn extremal_mod2(m: usize, n: usize) -> Result<(Graph, EdgeLabeling, ConstructionMeta)> {
    if m == 0 {
        return Err(Error::Parameter("m must be positive".into()));
    }
    let r = 4 * m + 2;
    if n == 0 || !n.is_multiple_of(2 * r * (r + 1)) {
        return Err(Error::Parameter(format!(
            "n={n} must be a positive multiple of 2r(r+1)={}",
            2 * r * (r + 1)
        )));
    }
    let x = (r - 1) * n / (2 * r * (r + 1));
    let y = n / (2 * r);
    debug_assert_eq!(x + y, n / (r + 1));
    Ok(build(ConstructionMeta {
        family: Family::Mod2,
        r,
        n,
        part_sizes: vec![n / (r + 1); r + 1],
        special_split: Some((x, y)),
    }))
}

/// Matching extremal family (r = 2): 4-partite Turán graph with every edge
/// at the last class labelled -1.
pub fn matching_extremal(n: usize) -> Result<(Graph, EdgeLabeling, ConstructionMeta)> {
    if n < 4 || !n.is_multiple_of(4) {
        return Err(Error::Parameter(format!(
            "n={n} must be a positive multiple of 4"
        )));
    }
    Ok(build(ConstructionMeta {
        family: Family::Matching,
        r: 2,
        n,
        part_sizes: vec![n / 4; 4],
        special_split: Some((0, n / 4)),
    }))
}

/// Counts of Type 1/2/3 tiles: avoiding the special class, meeting X,
/// meeting Y.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TypeCensus {
    pub t1: usize,
    pub t2: usize,
    pub t3: usize,
}

/// A perfect tiling in which each class is avoided by the arithmetically
/// forced number of tiles; the optional seed permutes vertex choice within
/// classes.
pub fn canonical_tiling(
    meta: &ConstructionMeta,
    g: &Graph,
    shuffle_seed: Option<u64>,
) -> Result<Tiling> {
    if g.n() != meta.n {
        return Err(Error::Internal(format!(
            "metadata n={} does not match graph n={}",
            meta.n,
            g.n()
        )));
    }
    let k = meta.part_count();
    let mut queues: Vec<Vec<u32>> = (0..k).map(|i| meta.part(i).collect()).collect();
    if let Some(seed) = shuffle_seed {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for q in &mut queues {
            q.shuffle(&mut rng);
        }
    }
    let mut next = vec![0usize; k];
    let take = |queues: &[Vec<u32>], next: &mut [usize], c: usize| -> Result<u32> {
        let i = next[c];
        next[c] += 1;
        queues[c]
            .get(i)
            .copied()
            .ok_or_else(|| Error::Internal(format!("class {c} exhausted early")))
    };

    let mut tiles = Vec::with_capacity(meta.n / meta.r);
    match meta.family {
        Family::Matching => {
            // Rounds of class pairings; every class is used once per round.
            const PAIRINGS: [[(usize, usize); 2]; 3] =
                [[(0, 1), (2, 3)], [(0, 2), (1, 3)], [(0, 3), (1, 2)]];
            for round in 0..meta.n / 4 {
                for &(a, b) in &PAIRINGS[round % 3] {
                    let u = take(&queues, &mut next, a)?;
                    let v = take(&queues, &mut next, b)?;
                    tiles.push(Clique::new(vec![u, v]).expect("distinct classes"));
                }
            }
        }
        _ => {
            // Each sweep of r+1 tiles avoids every class exactly once.
            let r = meta.r;
            for _ in 0..meta.n / (r * (r + 1)) {
                for avoid in 0..=r {
                    let mut vs = Vec::with_capacity(r);
                    for c in (0..=r).filter(|&c| c != avoid) {
                        vs.push(take(&queues, &mut next, c)?);
                    }
                    tiles.push(Clique::new(vs).expect("distinct classes"));
                }
            }
        }
    }
    let t = Tiling::new(tiles)?;
    t.validate(g, true)
        .map_err(|e| Error::Internal(format!("canonical tiling invalid: {e}")))?;
    Ok(t)
}

/// Classifies each tile of a perfect tiling by its relation to the special
/// class. A tile with two vertices in one class signals corrupted input.
pub fn type_census(meta: &ConstructionMeta, t: &Tiling) -> Result<TypeCensus> {
    let x = meta.x_vertices();
    let y = meta.y_vertices();
    let special = meta.special_class();
    let mut census = TypeCensus { t1: 0, t2: 0, t3: 0 };
    for tile in t.tiles() {
        let mut classes: Vec<usize> = tile.vertices().iter().map(|&v| meta.class_of(v)).collect();
        classes.sort_unstable();
        if classes.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Structure(format!(
                "tile {:?} has two vertices in one class",
                tile.vertices()
            )));
        }
        let meets_x = tile.vertices().iter().any(|v| x.contains(v));
        let meets_y = tile.vertices().iter().any(|v| y.contains(v));
        let meets_special = special
            .map(|s| classes.contains(&s))
            .unwrap_or(false);
        if meets_x {
            census.t2 += 1;
        } else if meets_y {
            census.t3 += 1;
        } else if !meets_special {
            census.t1 += 1;
        } else {
            // Only reachable for Mod03, which has no X/Y roles; tiles meeting
            // its last class still count as non-type-1.
        }
    }
    Ok(census)
}

/// Closed-form tiling discrepancy from the census, for the families where
/// the per-type contributions are forced. Returns `None` for Mod03.
pub fn census_discrepancy(meta: &ConstructionMeta, census: &TypeCensus) -> Option<i64> {
    let r = meta.r as i64;
    let n = meta.n as i64;
    let (t1, t2, t3) = (census.t1 as i64, census.t2 as i64, census.t3 as i64);
    match meta.family {
        Family::Mod03 => None,
        Family::Mod1 => Some((r - 1) * (t2 - t3)),
        Family::Mod2 => Some(t1 + (r - 2) * n / (r * (r + 1)) + (r - 1) * (t2 - t3)),
        Family::Matching => Some(t1 + t2 - t3),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::CliqueKind;

    #[test]
    fn mod03_examples() {
        let (g, f, meta) = extremal_mod03(3, 12).unwrap();
        assert_eq!(g.n(), 12);
        assert_eq!(meta.part_sizes(), &[3, 3, 3, 3]);
        assert_eq!(g.min_degree(), 9); // (1 - 1/(r+1)) n
        // 3 of the 6 class pairs are +1.
        let plus: usize = (0..4)
            .flat_map(|i| (i + 1..4).map(move |j| (i, j)))
            .filter(|&(i, j)| meta.pattern(i, j) == 1)
            .count();
        assert_eq!(plus, 3);
        assert!(f.is_total_on(&g));

        let (_, _, meta) = extremal_mod03(4, 20).unwrap();
        let plus: usize = (0..5)
            .flat_map(|i| (i + 1..5).map(move |j| (i, j)))
            .filter(|&(i, j)| meta.pattern(i, j) == 1)
            .count();
        assert_eq!(plus, 5);

        // r = 5 is 1 (mod 4): C(6,2)=15 is odd.
        assert!(matches!(extremal_mod03(5, 60), Err(Error::Parameter(_))));
        assert!(matches!(extremal_mod03(3, 13), Err(Error::Parameter(_))));
    }

    #[test]
    fn mod1_examples() {
        let (g, f, meta) = extremal_mod1(1, 60).unwrap();
        assert_eq!(meta.r, 5);
        assert_eq!(meta.x_vertices().len(), 5);
        assert_eq!(meta.y_vertices().len(), 5);
        assert_eq!(g.min_degree(), 50);

        // Both the -1 and the +1 class-pair patterns are 2m-regular.
        for c in 0..5 {
            let minus = (0..5)
                .filter(|&d| d != c)
                .filter(|&d| meta.pattern(c.min(d), c.max(d)) == -1)
                .count();
            assert_eq!(minus, 2);
        }

        // Type 2 tile: one X vertex and a pattern K_{r-1}: discrepancy r-1.
        let t = canonical_tiling(&meta, &g, None).unwrap();
        let census = type_census(&meta, &t).unwrap();
        assert_eq!((census.t2, census.t3), (5, 5));
        for tile in t.tiles() {
            let d = f.discrepancy(tile.edges()).unwrap();
            let meets_x = tile.vertices().iter().any(|v| meta.x_vertices().contains(v));
            let meets_y = tile.vertices().iter().any(|v| meta.y_vertices().contains(v));
            if meets_x {
                assert_eq!(d, 4);
            } else if meets_y {
                assert_eq!(d, -4);
            } else {
                assert_eq!(d, 0);
            }
        }

        assert!(matches!(extremal_mod1(1, 61), Err(Error::Parameter(_))));
        assert!(matches!(extremal_mod1(0, 60), Err(Error::Parameter(_))));
    }

    #[test]
    fn mod2_examples() {
        let (g, _f, meta) = extremal_mod2(1, 84).unwrap();
        assert_eq!(meta.r, 6);
        assert_eq!(meta.x_vertices().len(), 5);
        assert_eq!(meta.y_vertices().len(), 7);
        assert_eq!(meta.x_vertices().len() + meta.y_vertices().len(), 12);
        assert_eq!(g.min_degree(), 72);

        let plus: usize = (0..6)
            .flat_map(|i| (i + 1..6).map(move |j| (i, j)))
            .filter(|&(i, j)| meta.pattern(i, j) == 1)
            .count();
        assert_eq!(plus, 8); // (C(6,2)+1)/2

        assert!(matches!(extremal_mod2(1, 85), Err(Error::Parameter(_))));
    }

    #[test]
    fn matching_examples() {
        let (g, f, meta) = matching_extremal(8).unwrap();
        assert_eq!(meta.part_sizes(), &[2, 2, 2, 2]);
        let minus = g
            .edges()
            .filter(|&(u, v)| f.label(u, v).unwrap() == -1)
            .count();
        assert_eq!(minus, 12);
        assert_eq!(g.edge_count() - minus, 12);

        let (g, f, _) = matching_extremal(4).unwrap();
        assert_eq!(g.n(), 4);
        let minus = g
            .edges()
            .filter(|&(u, v)| f.label(u, v).unwrap() == -1)
            .count();
        assert_eq!(minus, 3);

        assert!(matches!(matching_extremal(6), Err(Error::Parameter(_))));
    }

    #[test]
    fn canonical_tiling_mod03() {
        let (g, f, meta) = extremal_mod03(3, 12).unwrap();
        let t = canonical_tiling(&meta, &g, None).unwrap();
        assert_eq!(t.tiles().len(), 4);
        assert_eq!(t.discrepancy(&f).unwrap(), 0);
        // One tile avoiding each class.
        for avoid in 0..4 {
            let missing = t
                .tiles()
                .iter()
                .filter(|tile| tile.vertices().iter().all(|&v| meta.class_of(v) != avoid))
                .count();
            assert_eq!(missing, 1);
        }
    }

    #[test]
    fn canonical_tiling_seeded_is_valid_and_balanced() {
        let (g, f, meta) = extremal_mod1(1, 60).unwrap();
        for seed in [0u64, 1, 17] {
            let t = canonical_tiling(&meta, &g, Some(seed)).unwrap();
            assert_eq!(t.tiles().len(), 12);
            assert_eq!(t.discrepancy(&f).unwrap(), 0);
            let census = type_census(&meta, &t).unwrap();
            assert_eq!(census.t1 + census.t2 + census.t3, 12);
            assert_eq!(census.t2, census.t3);
            assert_eq!(
                census_discrepancy(&meta, &census),
                Some(t.discrepancy(&f).unwrap())
            );
        }
    }

    #[test]
    fn census_mod2_route_matches_direct() {
        let (g, f, meta) = extremal_mod2(1, 84).unwrap();
        let t = canonical_tiling(&meta, &g, Some(3)).unwrap();
        let census = type_census(&meta, &t).unwrap();
        assert_eq!(census.t1, 2); // n/(r(r+1))
        assert_eq!(
            census_discrepancy(&meta, &census),
            Some(t.discrepancy(&f).unwrap())
        );
        assert_eq!(t.discrepancy(&f).unwrap(), 0);
    }

    #[test]
    fn matching_census() {
        let (g, f, meta) = matching_extremal(8).unwrap();
        let t = canonical_tiling(&meta, &g, None).unwrap();
        let census = type_census(&meta, &t).unwrap();
        assert_eq!(census.t2 + census.t3, 2); // |V_4|
        assert_eq!(t.discrepancy(&f).unwrap(), 0);
        assert_eq!(census_discrepancy(&meta, &census), Some(0));
    }

    #[test]
    fn mod1_pattern_interior_is_balanced_star_free() {
        // The interior K_r of mod1 is 2m-regular in both signs, so no class
        // pattern can be one of the four rigid types for r=5.
        let (_, _, meta) = extremal_mod1(1, 60).unwrap();
        let k5 = Graph::complete(5);
        let f = EdgeLabeling::from_fn(&k5, |u, v| meta.pattern(u as usize, v as usize)).unwrap();
        let c = Clique::new((0..5).collect()).unwrap();
        assert_eq!(
            crate::graph::classify_clique(&f, &c).unwrap(),
            CliqueKind::Other
        );
    }
}

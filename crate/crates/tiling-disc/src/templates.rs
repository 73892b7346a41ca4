//! K_r-template machinery: uniform-coverage clique multisets, Hamilton-window
//! templates, and the two-clique gadgets whose template-discrepancy
//! differences have closed forms.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{classify_clique, Clique, CliqueKind, EdgeLabeling, Graph};

/// A multiset of r-cliques of a host graph covering every vertex equally
/// often. Stored as (canonical clique, multiplicity) pairs.
#[derive(Clone, Debug)]
pub struct KrTemplate {
    host: Graph,
    r: usize,
    members: Vec<(Clique, usize)>,
}

impl KrTemplate {
    pub fn new(host: Graph, r: usize, cliques: impl IntoIterator<Item = (Clique, usize)>) -> Self {
        let mut merged: BTreeMap<Clique, usize> = BTreeMap::new();
        for (c, mult) in cliques {
            *merged.entry(c).or_insert(0) += mult;
        }
        merged.retain(|_, &mut m| m > 0);
        KrTemplate {
            host,
            r,
            members: merged.into_iter().collect(),
        }
    }

    pub fn host(&self) -> &Graph {
        &self.host
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// Multiset size `s` (with multiplicity).
    pub fn size(&self) -> usize {
        self.members.iter().map(|(_, m)| m).sum()
    }

    pub fn members(&self) -> &[(Clique, usize)] {
        &self.members
    }

    pub fn multiplicity(&self, c: &Clique) -> usize {
        self.members
            .iter()
            .find(|(m, _)| m == c)
            .map(|(_, mult)| *mult)
            .unwrap_or(0)
    }
}

/// Successful coverage check: `s` members, each vertex in `s_prime` of them.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CoverageReport {
    pub s: usize,
    pub s_prime: usize,
}

/// Verifies uniform coverage: every host vertex lies in exactly
/// `s * r / |F|` members. The first deviant vertex is reported on failure.
pub fn validate_template(t: &KrTemplate) -> Result<CoverageReport> {
    let n = t.host.n();
    for (c, _) in &t.members {
        if c.len() != t.r {
            return Err(Error::Structure(format!(
                "member {:?} has size {}, expected {}",
                c.vertices(),
                c.len(),
                t.r
            )));
        }
        if !t.host.is_clique(c.vertices()) {
            return Err(Error::Structure(format!(
                "member {:?} is not a clique of the host",
                c.vertices()
            )));
        }
    }
    let s = t.size();
    if n == 0 || !(s * t.r).is_multiple_of(n) {
        return Err(Error::Parameter(format!(
            "coverage s*r = {} is not divisible by |F| = {n}",
            s * t.r
        )));
    }
    let s_prime = s * t.r / n;
    let mut coverage = vec![0usize; n];
    for (c, mult) in &t.members {
        for &v in c.vertices() {
            coverage[v as usize] += mult;
        }
    }
    for (v, &found) in coverage.iter().enumerate() {
        if found != s_prime {
            return Err(Error::Coverage {
                vertex: v as u32,
                found,
                expected: s_prime,
            });
        }
    }
    Ok(CoverageReport { s, s_prime })
}

/// Multiplicity-weighted label sum over all members.
pub fn template_discrepancy(f: &EdgeLabeling, t: &KrTemplate) -> Result<i64> {
    validate_template(t)?;
    let mut total = 0i64;
    for (c, mult) in &t.members {
        total += *mult as i64 * f.discrepancy(c.edges())?;
    }
    Ok(total)
}

/// Independent second route: per-member discrepancy from the clique-kind
/// census (closed form per kind, direct sum only for `Other`).
pub fn kind_census_discrepancy(f: &EdgeLabeling, t: &KrTemplate) -> Result<i64> {
    validate_template(t)?;
    let mut total = 0i64;
    for (c, mult) in &t.members {
        let k = c.len() as i64;
        let all = k * (k - 1) / 2;
        let d = match classify_clique(f, c)? {
            CliqueKind::AllPlus => all,
            CliqueKind::AllMinus => -all,
            CliqueKind::PlusStar(_) => 2 * (k - 1) - all,
            CliqueKind::MinusStar(_) => all - 2 * (k - 1),
            CliqueKind::Other => f.discrepancy(c.edges())?,
        };
        total += *mult as i64 * d;
    }
    Ok(total)
}

/// Template of size k built from the k windows of `r` consecutive vertices
/// around a Hamilton cycle of the complete graph; every vertex is covered
/// `r` times.
pub fn hamilton_window_template(f: &EdgeLabeling, cycle: &[u32], r: usize) -> Result<KrTemplate> {
    let k = f.n();
    let g = Graph::complete(k);
    if !f.is_total_on(&g) {
        return Err(Error::Structure(
            "Hamilton-window templates need a total labelling of a complete host".into(),
        ));
    }
    if cycle.len() != k {
        return Err(Error::Parameter(format!(
            "cycle has {} vertices, host has {k}",
            cycle.len()
        )));
    }
    let mut seen = vec![false; k];
    for &v in cycle {
        if (v as usize) >= k || seen[v as usize] {
            return Err(Error::Parameter(format!(
                "cycle is not a permutation: bad vertex {v}"
            )));
        }
        seen[v as usize] = true;
    }
    if r >= k || r == 0 {
        return Err(Error::Parameter(format!("window size {r} must be in 1..{k}")));
    }
    let members: Vec<(Clique, usize)> = (0..k)
        .map(|start| {
            let vs: Vec<u32> = (0..r).map(|off| cycle[(start + off) % k]).collect();
            (Clique::new(vs).expect("cycle vertices are distinct"), 1)
        })
        .collect();
    Ok(KrTemplate::new(g, r, members))
}

/// The finite two-clique gadget scenarios.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scenario {
    /// All-plus clique attached to an all-minus clique by r-1 edges.
    ObsB,
    /// All-plus clique attached to a plus-star, attachment avoiding the head.
    ObsCAvoidHead,
    /// All-plus clique attached to a plus-star, attachment including the head.
    ObsCWithHead,
    /// Plus-star head attached to a minus-star avoiding its head (r >= 4 case).
    Case1,
    /// r=3: plus-star head fully attached to a minus-star.
    Case2a,
    /// r=3: plus-star head fully attached to another plus-star.
    Case2b,
}

impl Scenario {
    pub const ALL: [Scenario; 6] = [
        Scenario::ObsB,
        Scenario::ObsCAvoidHead,
        Scenario::ObsCWithHead,
        Scenario::Case1,
        Scenario::Case2a,
        Scenario::Case2b,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Scenario::ObsB => "obs_b",
            Scenario::ObsCAvoidHead => "obs_c_avoid_head",
            Scenario::ObsCWithHead => "obs_c_with_head",
            Scenario::Case1 => "case1",
            Scenario::Case2a => "case2a",
            Scenario::Case2b => "case2b",
        }
    }

    pub fn parse(s: &str) -> Option<Scenario> {
        Scenario::ALL.iter().copied().find(|sc| sc.as_str() == s)
    }
}

/// A validated gadget configuration.
///
/// `i` counts +1 cross edges for `ObsB`/`ObsC*` and -1 cross edges for
/// `Case1`; `Case2a`/`Case2b` have all cross labels forced and take `i = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GadgetSpec {
    pub scenario: Scenario,
    pub r: usize,
    pub attach: usize,
    pub i: usize,
}

impl GadgetSpec {
    pub fn new(scenario: Scenario, r: usize, i: usize) -> Result<Self> {
        if r < 3 {
            return Err(Error::Parameter(format!("gadgets need r >= 3, got {r}")));
        }
        let attach = match scenario {
            Scenario::Case2a | Scenario::Case2b => {
                if r != 3 {
                    return Err(Error::Parameter(format!(
                        "{} is specific to r = 3",
                        scenario.as_str()
                    )));
                }
                if i != 0 {
                    return Err(Error::Parameter(format!(
                        "{} has forced cross labels; i must be 0",
                        scenario.as_str()
                    )));
                }
                4
            }
            _ => {
                if i > r - 1 {
                    return Err(Error::Parameter(format!(
                        "i = {i} exceeds the {} cross edges",
                        r - 1
                    )));
                }
                r - 1
            }
        };
        match scenario {
            Scenario::ObsB | Scenario::ObsCAvoidHead if 2 * i == r - 1 => {
                return Err(Error::Parameter(format!(
                    "{} requires i != (r-1)/2 for the difference to be nonzero",
                    scenario.as_str()
                )));
            }
            Scenario::ObsCWithHead if 2 * i == r + 1 && !(r == 3 && i == 2) => {
                return Err(Error::Parameter(
                    "obs_c_with_head requires i != (r+1)/2".into(),
                ));
            }
            _ => {}
        }
        Ok(GadgetSpec {
            scenario,
            r,
            attach,
            i,
        })
    }

    /// The r = 3 head-attached all-plus exception, handled by rerouting the
    /// attachment away from the head.
    pub fn is_fallback(&self) -> bool {
        self.scenario == Scenario::ObsCWithHead && self.r == 3 && self.i == 2
    }

    // Attachment targets in the second clique, lowest eligible indices first.
    fn targets(&self) -> Vec<u32> {
        let r = self.r as u32;
        match self.scenario {
            Scenario::ObsB => (r + 1..=2 * r - 1).collect(),
            Scenario::ObsCAvoidHead | Scenario::Case1 => (r + 2..=2 * r).collect(),
            Scenario::ObsCWithHead => {
                if self.is_fallback() {
                    (r + 2..=2 * r).collect()
                } else {
                    (r + 1..=2 * r - 1).collect()
                }
            }
            Scenario::Case2a | Scenario::Case2b => (r + 1..=2 * r + 1).collect(),
        }
    }

    // Second-clique vertices that receive no cross edge.
    fn unattached(&self) -> Vec<u32> {
        let r = self.r as u32;
        let targets = self.targets();
        (r + 1..=2 * r + 1).filter(|v| !targets.contains(v)).collect()
    }
}

// Sign of the edge uv inside a clique labelled as `kind` with head `head`.
fn clique_label(kind: CliqueKind, head: u32, u: u32, v: u32) -> i8 {
    match kind {
        CliqueKind::AllPlus => 1,
        CliqueKind::AllMinus => -1,
        CliqueKind::PlusStar(_) => {
            if u == head || v == head {
                1
            } else {
                -1
            }
        }
        CliqueKind::MinusStar(_) => {
            if u == head || v == head {
                -1
            } else {
                1
            }
        }
        CliqueKind::Other => unreachable!("gadget cliques are always typed"),
    }
}

/// Builds the gadget host: two disjoint (r+1)-cliques on `0..=r` and
/// `r+1..=2r+1`, cross edges from vertex 0 only.
///
/// Vertex 0 plays V_a / V_c (and is the head of its clique when that clique
/// is a star); vertex r+1 is the head of the second clique when it is a star.
pub fn build_gadget(spec: &GadgetSpec) -> (Graph, EdgeLabeling) {
    let r = spec.r as u32;
    let n = 2 * (spec.r + 1);
    let head2 = r + 1;

    let (first_kind, second_kind) = match spec.scenario {
        Scenario::ObsB => (CliqueKind::AllPlus, CliqueKind::AllMinus),
        Scenario::ObsCAvoidHead | Scenario::ObsCWithHead => {
            (CliqueKind::AllPlus, CliqueKind::PlusStar(head2))
        }
        Scenario::Case1 | Scenario::Case2a => {
            (CliqueKind::PlusStar(0), CliqueKind::MinusStar(head2))
        }
        Scenario::Case2b => (CliqueKind::PlusStar(0), CliqueKind::PlusStar(head2)),
    };

    let mut g = Graph::new(n);
    let mut f = EdgeLabeling::new(n);
    for u in 0..=r {
        for v in u + 1..=r {
            g.add_edge(u, v).expect("valid");
            f.set(u, v, clique_label(first_kind, 0, u, v)).expect("valid");
        }
    }
    for u in r + 1..=2 * r + 1 {
        for v in u + 1..=2 * r + 1 {
            g.add_edge(u, v).expect("valid");
            f.set(u, v, clique_label(second_kind, head2, u, v)).expect("valid");
        }
    }
    for (idx, &t) in spec.targets().iter().enumerate() {
        let sign = match spec.scenario {
            // First i targets carry +1, the rest -1.
            Scenario::ObsB | Scenario::ObsCAvoidHead | Scenario::ObsCWithHead => {
                if idx < spec.i {
                    1
                } else {
                    -1
                }
            }
            // i counts -1 edges here.
            Scenario::Case1 => {
                if idx < spec.i {
                    -1
                } else {
                    1
                }
            }
            // Forced by the rigid K_5 type containing vertex 0 and the
            // second clique: the head edge takes the minority sign.
            Scenario::Case2a => {
                if t == head2 {
                    -1
                } else {
                    1
                }
            }
            Scenario::Case2b => {
                if t == head2 {
                    1
                } else {
                    -1
                }
            }
        };
        g.add_edge(0, t).expect("valid");
        f.set(0, t, sign).expect("valid");
    }
    (g, f)
}

// All r-subcliques of the (r+1)-clique on `vs`: one per excluded vertex.
fn subcliques(vs: &[u32]) -> Vec<Clique> {
    vs.iter()
        .map(|&skip| {
            Clique::new(vs.iter().copied().filter(|&v| v != skip).collect())
                .expect("distinct vertices")
        })
        .collect()
}

/// Builds the balanced template K1 (r copies of every r-subclique of both
/// cliques) and the scenario's unbalanced template K2. Both have size
/// 2r(r+1) and uniform coverage r^2.
pub fn build_k1_k2(spec: &GadgetSpec) -> Result<(KrTemplate, KrTemplate)> {
    let r = spec.r;
    let (host, _) = build_gadget(spec);
    let first: Vec<u32> = (0..=r as u32).collect();
    let second: Vec<u32> = (r as u32 + 1..=2 * r as u32 + 1).collect();
    let head2 = r as u32 + 1;

    let k1 = KrTemplate::new(
        host.clone(),
        r,
        subcliques(&first)
            .into_iter()
            .chain(subcliques(&second))
            .map(|c| (c, r)),
    );

    let mut members: Vec<(Clique, usize)> = Vec::new();
    // Shared first-clique part of every recipe: overweight the clique
    // avoiding vertex 0, underweight the ones through it.
    let (w_avoid, w_through) = match spec.scenario {
        Scenario::Case2a | Scenario::Case2b => (5, 2),
        _ => (2 * r - 1, r - 1),
    };
    for c in subcliques(&first) {
        let w = if c.contains(0) { w_through } else { w_avoid };
        members.push((c, w));
    }

    match spec.scenario {
        Scenario::Case2a | Scenario::Case2b => {
            // One copy of each cross triangle through vertex 0 and two
            // non-head vertices of the second clique.
            let others: Vec<u32> = second.iter().copied().filter(|&v| v != head2).collect();
            for (a, &x) in others.iter().enumerate() {
                for &y in &others[a + 1..] {
                    members.push((Clique::new(vec![0, x, y])?, 1));
                }
            }
            for c in subcliques(&second) {
                let w = if c.contains(head2) { 3 } else { 1 };
                members.push((c, w));
            }
        }
        Scenario::Case1 => {
            let cross: Vec<u32> = std::iter::once(0).chain(spec.targets()).collect();
            members.push((Clique::new(cross)?, r));
            let x = spec.unattached()[1]; // the non-head unattached vertex
            debug_assert_eq!(spec.unattached()[0], head2);
            for c in subcliques(&second) {
                let w = if c.contains(x) && c.contains(head2) {
                    r + 1
                } else {
                    1
                };
                members.push((c, w));
            }
        }
        _ => {
            let cross: Vec<u32> = std::iter::once(0).chain(spec.targets()).collect();
            members.push((Clique::new(cross)?, r));
            let un = spec.unattached();
            let (x, y) = (un[0], un[1]);
            for c in subcliques(&second) {
                let w = if c.contains(x) && c.contains(y) { r + 1 } else { 1 };
                members.push((c, w));
            }
        }
    }
    let k2 = KrTemplate::new(host, r, members);
    Ok((k1, k2))
}

/// The printed closed form for `disc(K2) - disc(K1)`, where one exists.
/// The avoid-head scenarios (including the r = 3 fallback) have no printed
/// form; their values are computed by summation and frozen in tests.
pub fn expected_difference(spec: &GadgetSpec) -> Option<i64> {
    let r = spec.r as i64;
    let i = spec.i as i64;
    match spec.scenario {
        Scenario::ObsB => Some(2 * i * r - r * (r - 1)),
        Scenario::ObsCAvoidHead => None,
        Scenario::ObsCWithHead => {
            if spec.is_fallback() {
                None
            } else {
                Some(2 * r * i - r * r - r)
            }
        }
        Scenario::Case1 => Some(-(r * (r - 1) + 2 * r * i)),
        Scenario::Case2a => Some(-6),
        Scenario::Case2b => Some(-12),
    }
}

/// Admissible `i` values for a scenario at clique size `r`.
pub fn admissible_specs(scenario: Scenario, r: usize) -> Vec<GadgetSpec> {
    (0..=r)
        .filter_map(|i| GadgetSpec::new(scenario, r, i).ok())
        .collect()
}

/// One verified gadget evaluation.
#[derive(Clone, Debug)]
pub struct SweepRow {
    pub scenario: Scenario,
    pub r: usize,
    pub i: usize,
    pub s: usize,
    pub s_prime: usize,
    pub disc_k1: i64,
    pub disc_k2: i64,
    pub diff: i64,
    pub expected: Option<i64>,
    /// `Some(diff == expected)` when a closed form is printed.
    pub matches: Option<bool>,
}

/// Builds, validates and evaluates one gadget configuration. The direct
/// summation route and the kind-census route must agree.
pub fn evaluate_gadget(spec: &GadgetSpec) -> Result<SweepRow> {
    let (_, f) = build_gadget(spec);
    let (k1, k2) = build_k1_k2(spec)?;
    let rep1 = validate_template(&k1)?;
    let rep2 = validate_template(&k2)?;
    let disc_k1 = template_discrepancy(&f, &k1)?;
    let disc_k2 = template_discrepancy(&f, &k2)?;
    if kind_census_discrepancy(&f, &k1)? != disc_k1 || kind_census_discrepancy(&f, &k2)? != disc_k2
    {
        return Err(Error::Internal(
            "kind-census discrepancy route disagrees with direct summation".into(),
        ));
    }
    if rep1 != rep2 {
        return Err(Error::Internal(format!(
            "templates have mismatched coverage: {rep1:?} vs {rep2:?}"
        )));
    }
    let diff = disc_k2 - disc_k1;
    let expected = expected_difference(spec);
    Ok(SweepRow {
        scenario: spec.scenario,
        r: spec.r,
        i: spec.i,
        s: rep1.s,
        s_prime: rep1.s_prime,
        disc_k1,
        disc_k2,
        diff,
        expected,
        matches: expected.map(|e| e == diff),
    })
}

/// Sweeps every admissible configuration for the given scenarios and r range.
pub fn sweep(r_min: usize, r_max: usize, scenarios: &[Scenario]) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::new();
    for &sc in scenarios {
        for r in r_min..=r_max {
            for spec in admissible_specs(sc, r) {
                rows.push(evaluate_gadget(&spec)?);
            }
        }
    }
    Ok(rows)
}

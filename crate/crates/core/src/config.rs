//! Weighted configurations `Θ = {(Cᵢ, mᵢ)}` of classes, their intersection
//! graphs, and the numerical bounds a reducible subvariety in a nef class
//! must satisfy.
//!
//! Graph edges carry the class pairing `eᵢ·eⱼ`, which bounds the number of
//! geometric intersection points from above; connectivity and loops are
//! therefore class-level proxies.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cremona::{cremona_equivalent, cremona_reduce, Equivalence, DEFAULT_ORBIT_BOUND};
use crate::enumerate::exceptional_classes;
use crate::error::{CurveError, Result};
use crate::invariants::{expected_dimension, j_genus, sw_dimension};
use crate::lattice::{DivisorClass, SurfaceModel};
use crate::nef::certify_fiber_nef;
use crate::sw::{tameness_contradiction, RuleApplication, RuleId, SWFact, SwStatus};

pub const DEFAULT_MAX_MULTIPLICITY: u32 = 8;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ConfigEntry {
    pub class: DivisorClass,
    pub multiplicity: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub class: DivisorClass,
    pub multiplicity: u32,
    pub genus_tag: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubvarietyConfig {
    components: Vec<Component>,
    total: DivisorClass,
}

impl SubvarietyConfig {
    pub fn new(model: &SurfaceModel, entries: Vec<ConfigEntry>) -> Result<Self> {
        let mut total = model.zero();
        let mut seen = BTreeSet::new();
        let mut components = Vec::with_capacity(entries.len());
        for ConfigEntry { class, multiplicity } in entries {
            model.check(&class)?;
            if multiplicity == 0 {
                return Err(CurveError::InvalidConfiguration("multiplicities must be at least 1".into()));
            }
            if !seen.insert(class.clone()) {
                return Err(CurveError::InvalidConfiguration(format!(
                    "component {} appears twice",
                    model.format_class(&class)
                )));
            }
            total = total.checked_add(&class.checked_scale(i64::from(multiplicity))?)?;
            components.push(Component {
                genus_tag: j_genus(model, &class)?,
                class,
                multiplicity,
            });
        }
        Ok(SubvarietyConfig { components, total })
    }

    pub fn from_pairs(model: &SurfaceModel, pairs: &[(DivisorClass, u32)]) -> Result<Self> {
        Self::new(
            model,
            pairs
                .iter()
                .map(|(class, multiplicity)| ConfigEntry {
                    class: class.clone(),
                    multiplicity: *multiplicity,
                })
                .collect(),
        )
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn total(&self) -> &DivisorClass {
        &self.total
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn entries(&self) -> Vec<ConfigEntry> {
        self.components
            .iter()
            .map(|c| ConfigEntry {
                class: c.class.clone(),
                multiplicity: c.multiplicity,
            })
            .collect()
    }

    /// Recomputes `Σ mᵢeᵢ` from scratch.
    pub fn recompute_total(&self, model: &SurfaceModel) -> Result<DivisorClass> {
        self.components.iter().try_fold(model.zero(), |acc, c| {
            acc.checked_add(&c.class.checked_scale(i64::from(c.multiplicity))?)
        })
    }

    fn canonicalized(mut self) -> Self {
        self.components.sort_by(|a, b| a.class.cmp(&b.class));
        self
    }

    fn require_total(&self, model: &SurfaceModel, e: &DivisorClass) -> Result<()> {
        if &self.total != e {
            return Err(CurveError::Precondition(format!(
                "configuration sums to {}, not {}",
                model.format_class(&self.total),
                model.format_class(e)
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub multiplicity: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionGraph {
    pub vertices: usize,
    pub edges: Vec<Edge>,
    pub edge_count: i64,
    pub graph_components: usize,
    pub connected: bool,
    pub first_betti: i64,
}

pub fn build_graph(model: &SurfaceModel, config: &SubvarietyConfig) -> Result<IntersectionGraph> {
    let n = config.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        let mut x = x;
        while parent[x] != r {
            let next = parent[x];
            parent[x] = r;
            x = next;
        }
        r
    }
    let mut edges = Vec::new();
    let mut edge_count = 0i64;
    for i in 0..n {
        for j in i + 1..n {
            let (ci, cj) = (&config.components[i].class, &config.components[j].class);
            let p = model.pair(ci, cj)?;
            if p < 0 {
                return Err(CurveError::InvalidConfiguration(format!(
                    "distinct components {} and {} pair to {p}",
                    model.format_class(ci),
                    model.format_class(cj)
                )));
            }
            if p > 0 {
                edges.push(Edge { i, j, multiplicity: p });
                edge_count += p;
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                parent[ri] = rj;
            }
        }
    }
    let graph_components = (0..n).filter(|&x| find(&mut parent, x) == x).count();
    Ok(IntersectionGraph {
        vertices: n,
        edges,
        edge_count,
        graph_components,
        connected: graph_components <= 1,
        first_betti: edge_count - n as i64 + graph_components as i64,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenusBound {
    pub genus: i64,
    pub component_genus_sum: i64,
    pub slack: i64,
    pub pass: bool,
}

/// `g_J(e) ≥ Σ g_J(eᵢ)` for a connected configuration in class `e`.
pub fn genus_bound_check(model: &SurfaceModel, e: &DivisorClass, config: &SubvarietyConfig) -> Result<GenusBound> {
    config.require_total(model, e)?;
    if !build_graph(model, config)?.connected {
        return Err(CurveError::Disconnected);
    }
    let genus = j_genus(model, e)?;
    let component_genus_sum: i64 = config.components.iter().map(|c| c.genus_tag).sum();
    let slack = genus - component_genus_sum;
    Ok(GenusBound {
        genus,
        component_genus_sum,
        slack,
        pass: slack >= 0,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionBound {
    pub l_e: i64,
    pub sum_l: i64,
    pub weighted_sum_l: i64,
    /// `(l_e - 1) - Σ mᵢ l_{eᵢ}`.
    pub slack: i64,
    pub pass: bool,
}

/// `Σ l_{eᵢ} ≤ Σ mᵢ l_{eᵢ} ≤ l_e - 1`.
pub fn dimension_bound_check(model: &SurfaceModel, e: &DivisorClass, config: &SubvarietyConfig) -> Result<DimensionBound> {
    config.require_total(model, e)?;
    let (_, l_e) = expected_dimension(model, e)?;
    let mut sum_l = 0;
    let mut weighted_sum_l = 0;
    for c in &config.components {
        let (_, l) = expected_dimension(model, &c.class)?;
        sum_l += l;
        weighted_sum_l += i64::from(c.multiplicity) * l;
    }
    let slack = (l_e - 1) - weighted_sum_l;
    Ok(DimensionBound {
        l_e,
        sum_l,
        weighted_sum_l,
        slack,
        pass: slack >= 0,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonnegativeTerm {
    pub index: usize,
    /// `mⱼ² eⱼ²`
    pub square_term: i64,
    /// `mⱼ eⱼ·(e - mⱼeⱼ)`
    pub connectivity_term: i64,
    pub l: i64,
}

/// The split `e² = Σ_{eⱼ² ≥ 0} (mⱼ²eⱼ² + mⱼeⱼ·(e - mⱼeⱼ)) + Σ_{eᵢ² < 0} mᵢeᵢ·e`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThreeTermEstimate {
    pub e_square: i64,
    pub nonnegative: Vec<NonnegativeTerm>,
    pub negative_tail: i64,
    pub weighted_sum_l: i64,
}

pub fn three_term_estimate(model: &SurfaceModel, e: &DivisorClass, config: &SubvarietyConfig) -> Result<ThreeTermEstimate> {
    config.require_total(model, e)?;
    let mut nonnegative = Vec::new();
    let mut negative_tail = 0;
    let mut weighted_sum_l = 0;
    let mut recomposed = 0;
    for (index, c) in config.components.iter().enumerate() {
        let m = i64::from(c.multiplicity);
        let sq = model.square(&c.class)?;
        let (_, l) = expected_dimension(model, &c.class)?;
        weighted_sum_l += m * l;
        if sq >= 0 {
            let rest = e.checked_sub(&c.class.checked_scale(m)?)?;
            let term = NonnegativeTerm {
                index,
                square_term: m * m * sq,
                connectivity_term: m * model.pair(&c.class, &rest)?,
                l,
            };
            recomposed += term.square_term + term.connectivity_term;
            nonnegative.push(term);
        } else {
            let t = m * model.pair(&c.class, e)?;
            negative_tail += t;
            recomposed += t;
        }
    }
    let e_square = model.square(e)?;
    debug_assert_eq!(recomposed, e_square);
    Ok(ThreeTermEstimate {
        e_square,
        nonnegative,
        negative_tail,
        weighted_sum_l,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityReport {
    /// `-(Σ mᵢeᵢ)²`
    pub value: i64,
    pub even: bool,
}

/// `-(Σ mᵢeᵢ)² = 2Σ mᵢ² - 2Σ_{i<j} mᵢmⱼ eᵢ·eⱼ` for a configuration of `-2` roots.
pub fn parity_check_roots(model: &SurfaceModel, config: &SubvarietyConfig) -> Result<ParityReport> {
    if !model.is_rational_blowup() {
        return Err(CurveError::WrongModel {
            expected: "a rational blowup".into(),
            found: model.kind().to_string(),
        });
    }
    for c in &config.components {
        if model.square(&c.class)? != -2 || model.k_dot(&c.class)? != 0 {
            return Err(CurveError::NonRoot(model.format_class(&c.class)));
        }
    }
    let value = -model.square(&config.total)?;
    let mut expanded: i64 = config.components.iter().map(|c| 2 * i64::from(c.multiplicity).pow(2)).sum();
    for (i, a) in config.components.iter().enumerate() {
        for b in &config.components[i + 1..] {
            expanded -= 2 * i64::from(a.multiplicity) * i64::from(b.multiplicity) * model.pair(&a.class, &b.class)?;
        }
    }
    assert_eq!(value, expanded, "root parity expansion");
    Ok(ParityReport {
        value,
        even: value % 2 == 0,
    })
}

/// Points with weight `(xᵢ, dᵢ)` through which two distinct subvarieties in
/// a nef genus-zero class pass satisfy `Σ dᵢ < l_e`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedPoints {
    pub weight_sum: i64,
    pub l_e: i64,
    pub admissible: bool,
}

pub fn weighted_points_check(model: &SurfaceModel, e: &DivisorClass, weights: &[u32]) -> Result<WeightedPoints> {
    let (_, l_e) = expected_dimension(model, e)?;
    let weight_sum = weights.iter().map(|&d| i64::from(d)).sum();
    Ok(WeightedPoints {
        weight_sum,
        l_e,
        admissible: weight_sum < l_e,
    })
}

/// After discarding common components, the remainders `Θ₀`, `Θ₀'` satisfy
/// `e·e_{Θ₀} > e_{Θ₀}²`; equality or worse is the contradiction-free case.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairingInequality {
    pub e_square: i64,
    pub e_dot_theta: i64,
    pub theta_square: i64,
    pub nef_side: bool,
    pub strict_side: bool,
}

pub fn pairing_inequality(model: &SurfaceModel, e: &DivisorClass, theta0: &DivisorClass) -> Result<PairingInequality> {
    let e_square = model.square(e)?;
    let e_dot_theta = model.pair(e, theta0)?;
    let theta_square = model.square(theta0)?;
    Ok(PairingInequality {
        e_square,
        e_dot_theta,
        theta_square,
        nef_side: e_square >= e_dot_theta,
        strict_side: e_dot_theta > theta_square,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionConstraints {
    pub connected: bool,
    pub all_rational: bool,
    pub max_multiplicity: u32,
}

impl Default for DecompositionConstraints {
    fn default() -> Self {
        DecompositionConstraints {
            connected: false,
            all_rational: false,
            max_multiplicity: DEFAULT_MAX_MULTIPLICITY,
        }
    }
}

/// All `Σ mᵢeᵢ = e` with `eᵢ` from `pool` and `1 ≤ mᵢ ≤ max_multiplicity`.
/// The search walks the pool in canonical order and prunes on per-coordinate
/// reachable ranges of the remaining suffix.
pub fn enumerate_decompositions(
    model: &SurfaceModel,
    e: &DivisorClass,
    pool: &[DivisorClass],
    constraints: DecompositionConstraints,
) -> Result<Vec<SubvarietyConfig>> {
    model.check(e)?;
    let pool: Vec<DivisorClass> = pool
        .iter()
        .map(|c| model.check(c).cloned())
        .collect::<Result<BTreeSet<_>>>()?
        .into_iter()
        .filter(|c| !c.is_zero())
        .collect();
    let rank = model.rank();
    let n = pool.len();
    let mm = i64::from(constraints.max_multiplicity);
    let mut lo = vec![vec![0i64; rank]; n + 1];
    let mut hi = vec![vec![0i64; rank]; n + 1];
    for i in (0..n).rev() {
        for r in 0..rank {
            let c = pool[i].get(r) * mm;
            lo[i][r] = lo[i + 1][r] + c.min(0);
            hi[i][r] = hi[i + 1][r] + c.max(0);
        }
    }

    struct Search<'a> {
        pool: &'a [DivisorClass],
        lo: &'a [Vec<i64>],
        hi: &'a [Vec<i64>],
        mm: i64,
    }
    impl Search<'_> {
        fn walk(&self, i: usize, remaining: &mut Vec<i64>, chosen: &mut Vec<(usize, u32)>, out: &mut Vec<Vec<(usize, u32)>>) {
            if remaining.iter().enumerate().any(|(r, &x)| x < self.lo[i][r] || x > self.hi[i][r]) {
                return;
            }
            if i == self.pool.len() {
                if remaining.iter().all(|&x| x == 0) {
                    out.push(chosen.clone());
                }
                return;
            }
            self.walk(i + 1, remaining, chosen, out);
            let c = self.pool[i].coefficients();
            for m in 1..=self.mm {
                for (x, y) in remaining.iter_mut().zip(c) {
                    *x -= y;
                }
                chosen.push((i, m as u32));
                self.walk(i + 1, remaining, chosen, out);
                chosen.pop();
            }
            for (x, y) in remaining.iter_mut().zip(c) {
                *x += y * self.mm;
            }
        }
    }
    let search = Search {
        pool: &pool,
        lo: &lo,
        hi: &hi,
        mm,
    };

    // split on the multiplicity of the first pool element
    let first: Vec<i64> = if n == 0 { vec![-1] } else { (0..=mm).collect() };
    let raw: Vec<Vec<(usize, u32)>> = first
        .into_par_iter()
        .flat_map_iter(|m0| {
            let mut out = Vec::new();
            let mut remaining = e.coefficients().to_vec();
            let mut chosen = Vec::new();
            if m0 < 0 {
                search.walk(0, &mut remaining, &mut chosen, &mut out);
                return out;
            }
            for (x, y) in remaining.iter_mut().zip(pool[0].coefficients()) {
                *x -= y * m0;
            }
            if m0 > 0 {
                chosen.push((0, m0 as u32));
            }
            search.walk(1, &mut remaining, &mut chosen, &mut out);
            out
        })
        .collect();

    let mut configs = Vec::new();
    for choice in raw {
        let pairs: Vec<(DivisorClass, u32)> = choice.iter().map(|&(i, m)| (pool[i].clone(), m)).collect();
        let config = SubvarietyConfig::from_pairs(model, &pairs)?.canonicalized();
        debug_assert_eq!(config.recompute_total(model)?, *e);
        if constraints.all_rational && config.components.iter().any(|c| c.genus_tag != 0) {
            continue;
        }
        if constraints.connected && !build_graph(model, &config).is_ok_and(|g| g.connected) {
            continue;
        }
        configs.push(config);
    }
    configs.sort_by_key(|c| c.entries());
    Ok(configs)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixtureCheck {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixtureResult {
    pub name: String,
    pub checks: Vec<FixtureCheck>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixtureReport {
    pub fixtures: Vec<FixtureResult>,
    pub pass: bool,
}

impl FixtureReport {
    /// The first failing check as a named error.
    pub fn into_result(self) -> Result<FixtureReport> {
        for f in &self.fixtures {
            if let Some(c) = f.checks.iter().find(|c| !c.pass) {
                return Err(CurveError::Fixture {
                    fixture: f.name.clone(),
                    detail: format!("{}: expected {}, got {}", c.name, c.expected, c.actual),
                });
            }
        }
        Ok(self)
    }
}

struct Checks {
    name: &'static str,
    checks: Vec<FixtureCheck>,
}

impl Checks {
    fn new(name: &'static str) -> Self {
        Checks { name, checks: Vec::new() }
    }

    fn eq<T: PartialEq + std::fmt::Debug>(&mut self, name: &str, expected: T, actual: T) {
        self.checks.push(FixtureCheck {
            name: name.into(),
            pass: expected == actual,
            expected: format!("{expected:?}"),
            actual: format!("{actual:?}"),
        });
    }

    fn holds(&mut self, name: &str, actual: bool) {
        self.eq(name, true, actual);
    }

    fn finish(self) -> FixtureResult {
        FixtureResult {
            name: self.name.into(),
            pass: self.checks.iter().all(|c| c.pass),
            checks: self.checks,
        }
    }
}

fn cls(model: &SurfaceModel, text: &str) -> Result<DivisorClass> {
    model.parse_class(text)
}

fn fixture_connected_genus3() -> Result<FixtureResult> {
    let m = SurfaceModel::rational(11);
    let c0 = cls(&m, "4H - E1 - E2 - E3 - E4 - E5 - E6 - E7 - E8 - E9 - E10 - E11")?;
    let c1 = cls(&m, "H - E2 - E3 - E4")?;
    let c2 = cls(&m, "H - E5 - E6 - E7")?;
    let e = cls(&m, "8H - E1 - 4E2 - 4E3 - 4E4 - 2E5 - 2E6 - 2E7 - E8 - E9 - E10 - E11")?;
    let mut ck = Checks::new("connectedgenus3");
    ck.eq("E^2", -1, m.square(&e)?);
    ck.eq("K.E", -1, m.k_dot(&e)?);
    let theta = SubvarietyConfig::from_pairs(&m, &[(c0.clone(), 1), (c1.clone(), 3), (c2.clone(), 1)])?;
    ck.eq("C0 + 3C1 + C2", m.format_class(&e), m.format_class(theta.total()));
    ck.eq("g_J(C0)", 3, j_genus(&m, &c0)?);
    ck.eq("C0^2", 5, m.square(&c0)?);
    ck.eq("K.C0", -1, m.k_dot(&c0)?);
    ck.eq("pairings C0.C1, C0.C2, C1.C2", (1, 1, 1), (m.pair(&c0, &c1)?, m.pair(&c0, &c2)?, m.pair(&c1, &c2)?));
    let g = build_graph(&m, &theta)?;
    ck.eq("graph (vertices, edges, connected)", (3, 3, true), (g.vertices, g.edge_count, g.connected));
    ck.eq("first_betti", 1, g.first_betti);
    let gb = genus_bound_check(&m, &e, &theta)?;
    ck.eq("genus bound slack", -3, gb.slack);
    ck.eq("genus bound pass", false, gb.pass);
    let decomps = enumerate_decompositions(&m, &e, &[c0, c1, c2], DecompositionConstraints::default())?;
    let mut expected = theta.entries();
    expected.sort();
    let show = |entries: Vec<ConfigEntry>| -> Vec<String> {
        entries.iter().map(|c| format!("{}*({})", c.multiplicity, m.format_class(&c.class))).collect()
    };
    ck.eq("decompositions over {C0, C1, C2}", vec![show(expected)], decomps.iter().map(|c| show(c.entries())).collect());
    let m6 = SurfaceModel::rational(6);
    let tail = cls(&m6, "8H - 4E1 - 4E2 - 4E3 - 2E4 - 2E5 - 2E6")?;
    let trace = cremona_reduce(&m6, &tail)?;
    ck.eq("8H-4E1-4E2-4E3-2E4-2E5-2E6 reduces to", "2H".to_string(), m6.format_class(&trace.reduced));
    Ok(ck.finish())
}

fn fixture_genus_one_followup() -> Result<FixtureResult> {
    let m = SurfaceModel::rational(11);
    let c0 = cls(&m, "4H - E1 - E2 - E3 - E4 - E5 - E6 - E7 - E8 - E9 - E10 - E11")?;
    let c1 = cls(&m, "H - E2 - E3 - E4")?;
    let t = cls(&m, "6H - E1 - 3E2 - 3E3 - 3E4 - E5 - E6 - E7 - E8 - E9 - E10 - E11")?;
    let mut ck = Checks::new("genus-one follow-up");
    ck.eq("g_J(T')", 1, j_genus(&m, &t)?);
    let theta = SubvarietyConfig::from_pairs(&m, &[(c0.clone(), 1), (c1, 2)])?;
    ck.eq("C0 + 2C1", m.format_class(&t), m.format_class(theta.total()));
    ck.holds("connected", build_graph(&m, &theta)?.connected);
    ck.holds("g_J(C0) > g_J(T')", j_genus(&m, &c0)? > j_genus(&m, &t)?);
    ck.eq("genus bound slack", -2, genus_bound_check(&m, &t, &theta)?.slack);
    Ok(ck.finish())
}

fn fixture_t2comp() -> Result<FixtureResult> {
    let m = SurfaceModel::rational(8);
    let e = cls(&m, "3H - E2 - E3 - 2E4 - E5 - E6 - E7 - E8")?;
    let mut ck = Checks::new("T2comp exceptional class");
    ck.eq("E^2", -1, m.square(&e)?);
    ck.eq("K.E", -1, m.k_dot(&e)?);
    let reduced = cremona_reduce(&m, &e)?.reduced;
    let nonzero: Vec<i64> = reduced.coefficients().iter().copied().filter(|&x| x != 0).collect();
    ck.eq("reduced form is one E-basis class", (0, vec![1]), (reduced.get(0), nonzero));
    let target = (1..=8).map(|i| m.e(i)).find(|ei| *ei == reduced);
    let equivalent = match target {
        Some(ei) => matches!(cremona_equivalent(&m, &e, &ei, DEFAULT_ORBIT_BOUND)?, Equivalence::Equivalent { .. }),
        None => false,
    };
    ck.holds("Cremona equivalent to E_i", equivalent);
    ck.holds("among the 240 exceptional classes", exceptional_classes(&m, None)?.classes.contains(&e));
    Ok(ck.finish())
}

fn fixture_red1() -> Result<FixtureResult> {
    let mut ck = Checks::new("red-1 uniqueness");
    for (h, k) in [(1, 2), (2, 3), (3, 1)] {
        let m = SurfaceModel::ruled_trivial(h, k)?;
        let t = m.fiber().expect("ruled");
        let mut pool = Vec::new();
        for i in 1..=k {
            pool.push(m.e(i));
            pool.push(t.checked_sub(&m.e(i))?);
        }
        let decomps = enumerate_decompositions(&m, &t, &pool, DecompositionConstraints::default())?;
        ck.eq(&format!("h={h} k={k}: decompositions of T"), k, decomps.len());
        for d in &decomps {
            let dim = dimension_bound_check(&m, &t, d)?;
            ck.eq("sum m l = 0 = l_T - 1", (0, 0), (dim.weighted_sum_l, dim.l_e - 1));
            ck.eq("sum g_J", 0, genus_bound_check(&m, &t, d)?.component_genus_sum);
            ck.eq("first_betti (tree)", 0, build_graph(&m, d)?.first_betti);
        }
        let ineq = pairing_inequality(&m, &t, &m.e(1))?;
        ck.eq(
            "0 = T^2 >= T.e0 > e0^2",
            (0, 0, -1, true, true),
            (ineq.e_square, ineq.e_dot_theta, ineq.theta_square, ineq.nef_side, ineq.strict_side),
        );
    }
    Ok(ck.finish())
}

fn fixture_h_enef() -> Result<FixtureResult> {
    let m = SurfaceModel::rational(2);
    let b = cls(&m, "-H + 2E1")?;
    let trusted = |text: &str| -> Result<(DivisorClass, SWFact)> {
        let c = cls(&m, text)?;
        let fact = SWFact {
            class: c.clone(),
            status: SwStatus::NonZero,
            justification: vec![RuleApplication {
                rule: RuleId::R4,
                class: c.clone(),
                conclusion: SwStatus::NonZero,
                premises: vec![],
                numbers: Default::default(),
            }],
        };
        Ok((c, fact))
    };
    let pool = vec![trusted("-H + 2E2")?, trusted("H - E1 - E2")?];
    let mut ck = Checks::new("H_enef tameness relation");
    let cert = tameness_contradiction(&pool, &b, 8)?;
    ck.eq("coefficients", Some(vec![1, 1, 2]), cert.as_ref().map(|c| c.coefficients.clone()));
    ck.holds("relation replays to zero", cert.is_some_and(|c| c.verify()));
    Ok(ck.finish())
}

fn fixture_minus_k_reducible() -> Result<FixtureResult> {
    let m = SurfaceModel::rational(8);
    let minus_k = m.canonical_class().checked_neg()?;
    let e1 = cls(&m, "H - E1")?;
    let rest = cls(&m, "2H - E2 - E3 - E4 - E5 - E6 - E7 - E8")?;
    let theta = SubvarietyConfig::from_pairs(&m, &[(e1.clone(), 1), (rest, 1)])?;
    let mut ck = Checks::new("-K reducible");
    ck.eq("(-K)^2", 1, m.square(&minus_k)?);
    ck.eq("g_J(-K)", 1, j_genus(&m, &minus_k)?);
    ck.eq("e1^2, K.e1", (0, -2), (m.square(&e1)?, m.k_dot(&e1)?));
    let dim = dimension_bound_check(&m, &minus_k, &theta)?;
    ck.eq("sum m l, l - 1", (1, 0), (dim.weighted_sum_l, dim.l_e - 1));
    ck.eq("dimension bound pass", false, dim.pass);
    let est = three_term_estimate(&m, &minus_k, &theta)?;
    ck.eq("nonnegative-square components", 1, est.nonnegative.len());
    ck.eq("e1.(e - e1)", Some(2), est.nonnegative.first().map(|t| t.connectivity_term));
    let recomposed: i64 =
        est.nonnegative.iter().map(|t| t.square_term + t.connectivity_term).sum::<i64>() + est.negative_tail;
    ck.eq("three-term split recomposes e^2", est.e_square, recomposed);
    ck.eq("genus bound on all-rational config", 1, {
        let all_rational = SubvarietyConfig::from_pairs(&m, &[(m.e(1), 1), (cls(&m, "3H - 2E1 - E2 - E3 - E4 - E5 - E6 - E7 - E8")?, 1)])?;
        genus_bound_check(&m, &minus_k, &all_rational)?.slack
    });
    Ok(ck.finish())
}

fn fixture_smooth_t() -> Result<FixtureResult> {
    let mut ck = Checks::new("fiber class nef chain");
    for h in 1..=5u32 {
        let m = SurfaceModel::ruled_trivial(h, 1)?;
        let report = certify_fiber_nef(&m, 3)?;
        for f in &report.fiber_families {
            ck.eq(
                &format!("h={h} a={}: (Kneser, wall-crossing, (K+C).T)", f.a),
                (f.a.abs() * (2 * i64::from(h) - 2), (1 - f.a).pow(h) as u64, f.a - 2),
                (f.kneser_bound, f.wall_crossing_number, f.k_plus_c_dot_t),
            );
            ck.eq("certificate", vec![1, 1], f.certificate.coefficients.clone());
        }
        let a = m.section().expect("ruled").checked_add(&m.fiber().expect("ruled").checked_scale(i64::from(h))?)?;
        ck.eq(&format!("h={h}: dim_SW(U + hT)"), 2 * i64::from(h) + 2, sw_dimension(&m, &a)?);
    }
    Ok(ck.finish())
}

/// Runs the built-in suite of worked examples.
pub fn verify_paper_fixtures() -> Result<FixtureReport> {
    let fixtures = vec![
        fixture_connected_genus3()?,
        fixture_genus_one_followup()?,
        fixture_t2comp()?,
        fixture_red1()?,
        fixture_h_enef()?,
        fixture_minus_k_reducible()?,
        fixture_smooth_t()?,
    ];
    let pass = fixtures.iter().all(|f| f.pass);
    Ok(FixtureReport { fixtures, pass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn config(m: &SurfaceModel, items: &[(&str, u32)]) -> SubvarietyConfig {
        let pairs: Vec<(DivisorClass, u32)> = items.iter().map(|(s, k)| (m.parse_class(s).unwrap(), *k)).collect();
        SubvarietyConfig::from_pairs(m, &pairs).unwrap()
    }

    #[test]
    fn config_validation() {
        let m = SurfaceModel::rational(2);
        let dup = SubvarietyConfig::from_pairs(&m, &[(m.e(1), 1), (m.e(1), 2)]);
        assert!(matches!(dup, Err(CurveError::InvalidConfiguration(_))));
        let zero = SubvarietyConfig::from_pairs(&m, &[(m.e(1), 0)]);
        assert!(matches!(zero, Err(CurveError::InvalidConfiguration(_))));
        let c = config(&m, &[("E1", 2), ("H - E1 - E2", 1)]);
        assert_eq!(m.format_class(c.total()), "H + E1 - E2");
        assert_eq!(c.recompute_total(&m).unwrap(), *c.total());
    }

    #[test]
    fn graphs() {
        let r = SurfaceModel::ruled_trivial(1, 1).unwrap();
        let g = build_graph(&r, &config(&r, &[("E1", 1), ("T - E1", 1)])).unwrap();
        assert_eq!((g.edge_count, g.connected, g.first_betti), (1, true, 0));
        let g = build_graph(&r, &config(&r, &[("T", 1)])).unwrap();
        assert_eq!((g.vertices, g.connected, g.first_betti), (1, true, 0));
        let m = SurfaceModel::rational(2);
        let bad = build_graph(&m, &config(&m, &[("E1", 1), ("E1 - E2", 1)]));
        assert!(matches!(bad, Err(CurveError::InvalidConfiguration(_))));
        let g = build_graph(&m, &config(&m, &[("E1", 1), ("E2", 1)])).unwrap();
        assert!(!g.connected);
        assert_eq!(g.graph_components, 2);
    }

    #[test]
    fn bound_checks() {
        let r = SurfaceModel::ruled_trivial(2, 1).unwrap();
        let t = r.fiber().unwrap();
        let c = config(&r, &[("E1", 1), ("T - E1", 1)]);
        let g = genus_bound_check(&r, &t, &c).unwrap();
        assert_eq!((g.slack, g.pass), (0, true));
        let d = dimension_bound_check(&r, &t, &c).unwrap();
        assert_eq!((d.weighted_sum_l, d.l_e - 1, d.pass), (0, 0, true));

        let m = SurfaceModel::rational(2);
        let disc = config(&m, &[("E1", 1), ("E2", 1)]);
        let e = m.parse_class("E1 + E2").unwrap();
        assert_eq!(genus_bound_check(&m, &e, &disc), Err(CurveError::Disconnected));
        assert!(matches!(genus_bound_check(&m, &m.e(1), &disc), Err(CurveError::Precondition(_))));
        // l_e = 0: any nonempty config fails
        let single = config(&m, &[("E1", 1)]);
        assert!(!dimension_bound_check(&m, &m.e(1), &single).unwrap().pass);
    }

    #[test]
    fn parity_examples() {
        let m = SurfaceModel::rational(3);
        assert_eq!(parity_check_roots(&m, &config(&m, &[("E1 - E2", 1)])).unwrap().value, 2);
        let two = config(&m, &[("E1 - E2", 1), ("E2 - E3", 1)]);
        assert_eq!(m.format_class(two.total()), "E1 - E3");
        assert_eq!(parity_check_roots(&m, &two).unwrap().value, 2);
        assert_eq!(parity_check_roots(&m, &config(&m, &[("H - E1 - E2 - E3", 2)])).unwrap().value, 8);
        assert!(matches!(parity_check_roots(&m, &config(&m, &[("E1", 1)])), Err(CurveError::NonRoot(_))));
    }

    #[test]
    fn weighted_points_and_inequality() {
        let m = SurfaceModel::rational(1);
        let e = m.parse_class("2H").unwrap();
        let w = weighted_points_check(&m, &e, &[1, 1, 1, 1]).unwrap();
        assert_eq!((w.l_e, w.admissible), (5, true));
        assert!(!weighted_points_check(&m, &e, &[2, 3]).unwrap().admissible);
        let r = SurfaceModel::ruled_trivial(1, 1).unwrap();
        let p = pairing_inequality(&r, &r.fiber().unwrap(), &r.e(1)).unwrap();
        assert!(p.nef_side && p.strict_side);
    }

    #[test]
    fn decompositions() {
        let r = SurfaceModel::ruled_trivial(2, 3).unwrap();
        let t = r.fiber().unwrap();
        let mut pool = Vec::new();
        for i in 1..=3 {
            pool.push(r.e(i));
            pool.push(t.checked_sub(&r.e(i)).unwrap());
        }
        let d = enumerate_decompositions(&r, &t, &pool, DecompositionConstraints::default()).unwrap();
        assert_eq!(d.len(), 3);
        for c in &d {
            assert_eq!(c.total(), &t);
            assert_eq!(c.len(), 2);
        }
        let zero = enumerate_decompositions(&r, &r.zero(), &pool, DecompositionConstraints::default()).unwrap();
        assert_eq!(zero.len(), 1);
        assert!(zero[0].is_empty());
        assert!(enumerate_decompositions(&r, &t, &[], DecompositionConstraints::default()).unwrap().is_empty());

        let m = SurfaceModel::rational(2);
        let pool = vec![m.e(1), m.e(2), m.parse_class("H - E1 - E2").unwrap()];
        let h = m.parse_class("H").unwrap();
        let all = enumerate_decompositions(&m, &h, &pool, DecompositionConstraints::default()).unwrap();
        assert_eq!(all.len(), 1);
        let e = m.parse_class("2E1").unwrap();
        let limited = DecompositionConstraints {
            max_multiplicity: 1,
            ..Default::default()
        };
        assert!(enumerate_decompositions(&m, &e, &pool, limited).unwrap().is_empty());
        let conn = DecompositionConstraints {
            connected: true,
            ..Default::default()
        };
        let e = m.parse_class("E1 + E2").unwrap();
        assert!(enumerate_decompositions(&m, &e, &pool, conn).unwrap().is_empty());
    }

    #[test]
    fn fixtures_pass() {
        let report = verify_paper_fixtures().unwrap();
        for f in &report.fixtures {
            for c in &f.checks {
                assert!(c.pass, "{}: {} expected {} got {}", f.name, c.name, c.expected, c.actual);
            }
        }
        assert!(report.pass);
        assert!(report.into_result().is_ok());
    }

    proptest! {
        #[test]
        fn first_betti_identity(picks in prop::collection::btree_set(0usize..12, 1..6), mults in prop::collection::vec(1u32..4, 6)) {
            let m = SurfaceModel::rational(4);
            let roots = crate::enumerate::rational_roots(&m).unwrap().classes;
            let exc = exceptional_classes(&m, None).unwrap().classes;
            let pool: Vec<DivisorClass> = exc.into_iter().chain(roots).collect();
            let pairs: Vec<(DivisorClass, u32)> = picks.iter().zip(&mults).map(|(&i, &k)| (pool[i % pool.len()].clone(), k)).collect();
            let Ok(c) = SubvarietyConfig::from_pairs(&m, &pairs) else { return Ok(()) };
            prop_assert_eq!(c.recompute_total(&m).unwrap(), c.total().clone());
            if let Ok(g) = build_graph(&m, &c) {
                prop_assert_eq!(g.first_betti, g.edge_count - g.vertices as i64 + g.graph_components as i64);
                prop_assert!(g.first_betti >= 0);
            }
        }

        #[test]
        fn decompositions_reverify(a in 0i64..3, b in 0i64..3, c in 0i64..3) {
            let m = SurfaceModel::rational(3);
            let pool = exceptional_classes(&m, None).unwrap().classes;
            let e = DivisorClass::new(vec![a, -b, -c, 0]);
            let mut shuffled = pool.clone();
            shuffled.reverse();
            let d1 = enumerate_decompositions(&m, &e, &pool, DecompositionConstraints { max_multiplicity: 3, ..Default::default() }).unwrap();
            let d2 = enumerate_decompositions(&m, &e, &shuffled, DecompositionConstraints { max_multiplicity: 3, ..Default::default() }).unwrap();
            prop_assert_eq!(&d1, &d2);
            for cfg in &d1 {
                prop_assert_eq!(cfg.recompute_total(&m).unwrap(), e.clone());
            }
        }
    }
}

//! Wall-crossing numbers and forward-chaining deduction of Seiberg–Witten
//! (non)vanishing at the level of classes.
//!
//! Only the degree-zero invariant `SW(e)` is tracked, with one status per
//! class. Four rules are applied to a fixpoint:
//!
//! | rule | premise | conclusion |
//! |------|---------|------------|
//! | R1 | `dim_SW(e) < 0` | `SW(e) = 0` |
//! | R2 | `e·C < 0` for a trusted positive curve class `C` | `SW(e) = 0` |
//! | R3 | `dim_SW(e) ≥ 0`, wall-crossing number `≠ 0`, `SW(K - e) = 0` | `SW(e) ≠ 0` |
//! | R4 | `e` is a trusted nonvanishing class | `SW(e) ≠ 0` |

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{CurveError, Result};
use crate::invariants::sw_dimension;
use crate::lattice::{DivisorClass, SurfaceModel};
use crate::linalg;

/// `|SW(K - e) - SW(e)|` for rational and ruled surfaces: `1` on rational
/// models and `|1 + e·T|^h` on ruled models of base genus `h`.
pub fn wall_crossing_number(model: &SurfaceModel, e: &DivisorClass) -> Result<u64> {
    let dim = sw_dimension(model, e)?;
    if dim < 0 {
        return Err(CurveError::FormulaInapplicable(dim));
    }
    match (model.base_genus(), model.fiber()) {
        (Some(h), Some(t)) => {
            let base = model
                .pair(e, &t)?
                .checked_add(1)
                .ok_or(CurveError::Overflow("wall-crossing number"))?
                .unsigned_abs();
            base.checked_pow(h).ok_or(CurveError::Overflow("wall-crossing number"))
        }
        _ => Ok(1),
    }
}

/// The scalar part of the top-degree wall-crossing statement: whether
/// `dim_SW(e) ≥ b₁`, in which case the graded invariants of `e` and `K - e`
/// differ by a unit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneralWallCrossing {
    pub b1: i64,
    pub sw_dimension: i64,
    pub applies: bool,
    pub unit_difference: Option<u8>,
}

pub fn general_wall_crossing(model: &SurfaceModel, e: &DivisorClass) -> Result<GeneralWallCrossing> {
    let b1 = model.base_genus().map_or(0, |h| 2 * i64::from(h));
    let dim = sw_dimension(model, e)?;
    let applies = dim >= b1;
    Ok(GeneralWallCrossing {
        b1,
        sw_dimension: dim,
        applies,
        unit_difference: applies.then_some(1),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SwStatus {
    NonZero,
    Zero,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RuleId {
    R1,
    R2,
    R3,
    R4,
}

impl RuleId {
    pub fn name(self) -> &'static str {
        match self {
            RuleId::R1 => "dimension",
            RuleId::R2 => "positivity",
            RuleId::R3 => "wall-cross",
            RuleId::R4 => "axiom",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleApplication {
    pub rule: RuleId,
    pub class: DivisorClass,
    pub conclusion: SwStatus,
    pub premises: Vec<DivisorClass>,
    pub numbers: BTreeMap<String, i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SWFact {
    pub class: DivisorClass,
    pub status: SwStatus,
    /// Derivation chain, premises first; the last entry concludes `class`.
    pub justification: Vec<RuleApplication>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomSet {
    /// Classes trusted to carry an irreducible curve of square `≥ 0` for
    /// some tamed almost complex structure.
    pub positive_curve_classes: Vec<DivisorClass>,
    /// Classes trusted to have `SW ≠ 0`.
    pub known_nonzero: Vec<DivisorClass>,
}

impl AxiomSet {
    pub fn validate(&self, model: &SurfaceModel) -> Result<()> {
        for c in &self.positive_curve_classes {
            if model.square(c)? < 0 {
                return Err(CurveError::Precondition(format!(
                    "positive curve class {} has negative square",
                    model.format_class(c)
                )));
            }
        }
        for c in &self.known_nonzero {
            model.check(c)?;
        }
        Ok(())
    }

    fn normalized(&self) -> AxiomSet {
        let sort = |v: &[DivisorClass]| v.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
        AxiomSet {
            positive_curve_classes: sort(&self.positive_curve_classes),
            known_nonzero: sort(&self.known_nonzero),
        }
    }
}

fn numbers<const N: usize>(pairs: [(&str, i64); N]) -> BTreeMap<String, i64> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

/// Evaluates one rule on `e` against the current store, without side effects.
fn try_rule(
    model: &SurfaceModel,
    axioms: &AxiomSet,
    store: &BTreeMap<DivisorClass, SWFact>,
    rule: RuleId,
    e: &DivisorClass,
) -> Result<Option<RuleApplication>> {
    let app = |conclusion, premises, numbers| RuleApplication {
        rule,
        class: e.clone(),
        conclusion,
        premises,
        numbers,
    };
    Ok(match rule {
        RuleId::R4 => axioms
            .known_nonzero
            .binary_search(e)
            .is_ok()
            .then(|| app(SwStatus::NonZero, vec![], BTreeMap::new())),
        RuleId::R1 => {
            let dim = sw_dimension(model, e)?;
            (dim < 0).then(|| app(SwStatus::Zero, vec![], numbers([("sw_dimension", dim)])))
        }
        RuleId::R2 => {
            let mut hit = None;
            for c in &axioms.positive_curve_classes {
                let p = model.pair(e, c)?;
                if p < 0 {
                    hit = Some(app(SwStatus::Zero, vec![c.clone()], numbers([("pairing", p)])));
                    break;
                }
            }
            hit
        }
        RuleId::R3 => {
            let dim = sw_dimension(model, e)?;
            if dim < 0 {
                return Ok(None);
            }
            let wc = wall_crossing_number(model, e)?;
            if wc == 0 {
                return Ok(None);
            }
            let residual = model.canonical_class().checked_sub(e)?;
            match store.get(&residual) {
                Some(f) if f.status == SwStatus::Zero => {
                    let wc = i64::try_from(wc).map_err(|_| CurveError::Overflow("wall-crossing number"))?;
                    Some(app(
                        SwStatus::NonZero,
                        vec![residual],
                        numbers([("sw_dimension", dim), ("wall_crossing_number", wc)]),
                    ))
                }
                _ => None,
            }
        }
    })
}

fn chain_for(store: &BTreeMap<DivisorClass, SWFact>, app: &RuleApplication) -> Vec<RuleApplication> {
    let mut chain: Vec<RuleApplication> = Vec::new();
    for p in &app.premises {
        if let Some(f) = store.get(p) {
            for step in &f.justification {
                if !chain.contains(step) {
                    chain.push(step.clone());
                }
            }
        }
    }
    chain.push(app.clone());
    chain
}

fn describe_chain(model: &SurfaceModel, chain: &[RuleApplication]) -> String {
    chain
        .iter()
        .map(|a| {
            format!(
                "{}({}) => {:?} on {}",
                a.rule.name(),
                a.premises.iter().map(|p| model.format_class(p)).collect::<Vec<_>>().join(", "),
                a.conclusion,
                model.format_class(&a.class)
            )
        })
        .collect::<Vec<_>>()
        .join("; ")
}

/// The full fact store after forward chaining. The universe is
/// `targets ∪ known_nonzero`, closed under `e ↦ K - e`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Deduction {
    pub facts: BTreeMap<DivisorClass, SWFact>,
}

impl Deduction {
    pub fn status(&self, e: &DivisorClass) -> SwStatus {
        self.facts.get(e).map_or(SwStatus::Unknown, |f| f.status)
    }

    pub fn fact(&self, e: &DivisorClass) -> SWFact {
        self.facts.get(e).cloned().unwrap_or_else(|| SWFact {
            class: e.clone(),
            status: SwStatus::Unknown,
            justification: Vec::new(),
        })
    }
}

pub fn deduce_all(model: &SurfaceModel, targets: &[DivisorClass], axioms: &AxiomSet) -> Result<Deduction> {
    axioms.validate(model)?;
    let axioms = axioms.normalized();
    let k = model.canonical_class();
    let mut universe = BTreeSet::new();
    for e in targets.iter().chain(&axioms.known_nonzero) {
        model.check(e)?;
        universe.insert(e.clone());
        universe.insert(k.checked_sub(e)?);
    }

    let mut store: BTreeMap<DivisorClass, SWFact> = BTreeMap::new();
    loop {
        let mut changed = false;
        for e in &universe {
            for rule in [RuleId::R4, RuleId::R1, RuleId::R2, RuleId::R3] {
                let Some(app) = try_rule(model, &axioms, &store, rule, e)? else { continue };
                match store.get(e) {
                    None => {
                        let justification = chain_for(&store, &app);
                        store.insert(
                            e.clone(),
                            SWFact {
                                class: e.clone(),
                                status: app.conclusion,
                                justification,
                            },
                        );
                        changed = true;
                    }
                    Some(f) if f.status == app.conclusion => {}
                    Some(f) => {
                        let theirs = describe_chain(model, &f.justification);
                        let ours = describe_chain(model, &chain_for(&store, &app));
                        return Err(CurveError::Contradiction {
                            class: model.format_class(e),
                            detail: format!("{:?} via [{theirs}] but {:?} via [{ours}]", f.status, app.conclusion),
                        });
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    Ok(Deduction { facts: store })
}

/// Facts for `targets`, in input order.
pub fn deduce(model: &SurfaceModel, targets: &[DivisorClass], axioms: &AxiomSet) -> Result<Vec<SWFact>> {
    let d = deduce_all(model, targets, axioms)?;
    Ok(targets.iter().map(|t| d.fact(t)).collect())
}

/// Re-checks every step of a justification chain: each rule's arithmetic is
/// recomputed and every premise status must be concluded earlier in the chain.
pub fn verify_justification(model: &SurfaceModel, axioms: &AxiomSet, fact: &SWFact) -> Result<()> {
    let axioms = axioms.normalized();
    let fail = |detail: String| CurveError::Contradiction {
        class: model.format_class(&fact.class),
        detail,
    };
    if fact.status == SwStatus::Unknown {
        return if fact.justification.is_empty() {
            Ok(())
        } else {
            Err(fail("unknown status with a nonempty justification".into()))
        };
    }
    let last = fact.justification.last().ok_or_else(|| fail("empty justification".into()))?;
    if last.class != fact.class || last.conclusion != fact.status {
        return Err(fail("justification does not conclude the fact".into()));
    }
    let mut known: BTreeMap<DivisorClass, SWFact> = BTreeMap::new();
    for step in &fact.justification {
        let redo = try_rule(model, &axioms, &known, step.rule, &step.class)?
            .ok_or_else(|| fail(format!("{} does not fire on {}", step.rule.name(), model.format_class(&step.class))))?;
        // R2 may legitimately pick any violated positive class
        let same = redo.conclusion == step.conclusion
            && (step.rule == RuleId::R2 || (redo.premises == step.premises && redo.numbers == step.numbers));
        if !same {
            return Err(fail(format!("{} replays differently", step.rule.name())));
        }
        if step.rule == RuleId::R2 {
            let c = step.premises.first().ok_or_else(|| fail("R2 without premise".into()))?;
            if axioms.positive_curve_classes.binary_search(c).is_err() || model.pair(&step.class, c)? >= 0 {
                return Err(fail("R2 premise is not a violated positive class".into()));
            }
        }
        known.insert(
            step.class.clone(),
            SWFact {
                class: step.class.clone(),
                status: step.conclusion,
                justification: Vec::new(),
            },
        );
    }
    Ok(())
}

/// `a₀·B + Σ aᵢ·Cᵢ = 0` with all `aᵢ > 0`: `B` cannot be a curve class for a
/// tamed structure when every `Cᵢ` has nonvanishing SW.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TamenessCertificate {
    pub b: DivisorClass,
    pub classes: Vec<DivisorClass>,
    /// `a₀` first, then one coefficient per entry of `classes`.
    pub coefficients: Vec<u64>,
}

impl TamenessCertificate {
    pub fn verify(&self) -> bool {
        if self.coefficients.len() != self.classes.len() + 1 || self.coefficients.contains(&0) {
            return false;
        }
        let rank = self.b.len();
        let mut total = vec![0i128; rank];
        for (c, &a) in std::iter::once(&self.b).chain(&self.classes).zip(&self.coefficients) {
            if c.len() != rank {
                return false;
            }
            for (t, &x) in total.iter_mut().zip(c.coefficients()) {
                *t += i128::from(a) * i128::from(x);
            }
        }
        total.iter().all(|&t| t == 0)
    }
}

pub const DEFAULT_COEFFICIENT_BOUND: u64 = 8;
const BRUTE_FORCE_LIMIT: u64 = 5_000_000;

fn positive_relation(columns: &[&DivisorClass], bound: u64) -> Option<Vec<u64>> {
    let rank = columns[0].len();
    let rows: Vec<Vec<i64>> = (0..rank).map(|r| columns.iter().map(|c| c.get(r)).collect()).collect();
    let m = linalg::from_i64(&rows);
    let kernel = linalg::nullspace(&m, columns.len());
    match kernel.len() {
        0 => None,
        1 => {
            let v = linalg::primitive_integer(&kernel[0]);
            let sign = if v[0].is_negative() { -BigInt::one() } else { BigInt::one() };
            let v: Vec<BigInt> = v.into_iter().map(|x| x * &sign).collect();
            if v.iter().any(|x| !x.is_positive()) || linalg::abs_max(&v) > BigInt::from(bound) {
                return None;
            }
            Some(v.iter().map(|x| x.to_u64().expect("bounded")).collect())
        }
        _ => {
            let n = columns.len() as u32;
            if bound.checked_pow(n).is_none_or(|s| s > BRUTE_FORCE_LIMIT) {
                return None;
            }
            let mut a = vec![1u64; columns.len()];
            loop {
                let zero = (0..rank).all(|r| {
                    columns.iter().zip(&a).map(|(c, &x)| i128::from(c.get(r)) * i128::from(x)).sum::<i128>() == 0
                });
                if zero {
                    return Some(a);
                }
                let mut i = 0;
                while i < a.len() && a[i] == bound {
                    a[i] = 1;
                    i += 1;
                }
                if i == a.len() {
                    return None;
                }
                a[i] += 1;
            }
        }
    }
}

/// Searches for a positive integer relation between `candidate_b` and a
/// subset of `pool`, with coefficients at most `bound`. Subsets are tried by
/// size, then lexicographically by pool index.
pub fn tameness_contradiction(
    pool: &[(DivisorClass, SWFact)],
    candidate_b: &DivisorClass,
    bound: u64,
) -> Result<Option<TamenessCertificate>> {
    for (c, f) in pool {
        if f.status != SwStatus::NonZero || &f.class != c {
            return Err(CurveError::Precondition(format!(
                "pool class {:?} is not deduced NonZero",
                c.coefficients()
            )));
        }
        if c.len() != candidate_b.len() {
            return Err(CurveError::Dimension {
                expected: candidate_b.len(),
                found: c.len(),
            });
        }
    }
    if candidate_b.is_zero() || bound == 0 {
        return Ok(None);
    }
    let mut distinct: Vec<&DivisorClass> = Vec::new();
    for (c, _) in pool {
        if !c.is_zero() && !distinct.contains(&c) {
            distinct.push(c);
        }
    }
    // minimal positive relations involve at most rank + 1 vectors
    let max_support = distinct.len().min(candidate_b.len());
    for size in 1..=max_support {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let mut columns = vec![candidate_b];
            columns.extend(idx.iter().map(|&i| distinct[i]));
            if let Some(coefficients) = positive_relation(&columns, bound) {
                let cert = TamenessCertificate {
                    b: candidate_b.clone(),
                    classes: idx.iter().map(|&i| distinct[i].clone()).collect(),
                    coefficients,
                };
                debug_assert!(cert.verify());
                return Ok(Some(cert));
            }
            // next combination
            let n = distinct.len();
            let Some(pos) = (0..size).rev().find(|&i| idx[i] != i + n - size) else { break };
            idx[pos] += 1;
            for j in pos + 1..size {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    Ok(None)
}

impl fmt::Display for SwStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SwStatus::NonZero => "NonZero",
            SwStatus::Zero => "Zero",
            SwStatus::Unknown => "Unknown",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Trusted facts, as supplied by a caller that knows the classes carry
    /// subvarieties.
    fn trusted_pool(model: &SurfaceModel, classes: &[&str]) -> Vec<(DivisorClass, SWFact)> {
        classes
            .iter()
            .map(|s| {
                let c = model.parse_class(s).unwrap();
                let fact = SWFact {
                    class: c.clone(),
                    status: SwStatus::NonZero,
                    justification: vec![RuleApplication {
                        rule: RuleId::R4,
                        class: c.clone(),
                        conclusion: SwStatus::NonZero,
                        premises: vec![],
                        numbers: BTreeMap::new(),
                    }],
                };
                (c, fact)
            })
            .collect()
    }

    #[test]
    fn wall_crossing_examples() {
        let m5 = SurfaceModel::rational(5);
        assert_eq!(wall_crossing_number(&m5, &m5.parse_class("H - E1").unwrap()).unwrap(), 1);
        for h in 1..=5u32 {
            let m = SurfaceModel::ruled_trivial(h, 2).unwrap();
            for a in -4i64..=-1 {
                let c = m.class(vec![a, 3, 1, 0]).unwrap();
                let minus_c = c.checked_neg().unwrap();
                if sw_dimension(&m, &minus_c).unwrap() >= 0 {
                    assert_eq!(wall_crossing_number(&m, &minus_c).unwrap(), (1 - a).pow(h) as u64);
                }
            }
        }
        // e·T = -1 kills the number on any base genus
        let m2 = SurfaceModel::ruled_trivial(2, 0).unwrap();
        let e = m2.parse_class("-U + 5T").unwrap();
        assert_eq!(m2.pair(&e, &m2.fiber().unwrap()).unwrap(), -1);
        assert_eq!(wall_crossing_number(&m2, &e).unwrap(), 0);
        let neg = m2.parse_class("-T").unwrap();
        assert!(matches!(wall_crossing_number(&m2, &neg), Err(CurveError::FormulaInapplicable(-2))));
    }

    #[test]
    fn general_wall_crossing_metadata() {
        let m = SurfaceModel::ruled_trivial(3, 0).unwrap();
        let a = m.parse_class("U + 3T").unwrap();
        let g = general_wall_crossing(&m, &a).unwrap();
        assert_eq!((g.b1, g.sw_dimension, g.applies, g.unit_difference), (6, 8, true, Some(1)));
        let g = general_wall_crossing(&m, &m.parse_class("T").unwrap()).unwrap();
        assert!(!g.applies);
    }

    #[test]
    fn smooth_section_chain() {
        for h in 1..=5u32 {
            let m = SurfaceModel::ruled_trivial(h, 1).unwrap();
            let t = m.fiber().unwrap();
            let a = m.section().unwrap().checked_add(&t.checked_scale(i64::from(h)).unwrap()).unwrap();
            assert_eq!(sw_dimension(&m, &a).unwrap(), 2 * i64::from(h) + 2);
            let axioms = AxiomSet {
                positive_curve_classes: vec![t.clone()],
                known_nonzero: vec![],
            };
            let facts = deduce(&m, &[a.clone()], &axioms).unwrap();
            let f = &facts[0];
            assert_eq!(f.status, SwStatus::NonZero);
            let last = f.justification.last().unwrap();
            assert_eq!(last.rule, RuleId::R3);
            assert_eq!(last.numbers["wall_crossing_number"], 1 << h);
            assert_eq!(f.justification[0].rule, RuleId::R2);
            verify_justification(&m, &axioms, f).unwrap();
        }
    }

    #[test]
    fn dimension_rule_and_unknown() {
        let m = SurfaceModel::rational(2);
        let e = m.parse_class("-E1").unwrap();
        assert_eq!(sw_dimension(&m, &e).unwrap(), -2);
        let facts = deduce(&m, &[e.clone()], &AxiomSet::default()).unwrap();
        assert_eq!(facts[0].status, SwStatus::Zero);
        assert_eq!(facts[0].justification[0].rule, RuleId::R1);
        let h = m.parse_class("H").unwrap();
        assert_eq!(deduce(&m, &[h.clone()], &AxiomSet::default()).unwrap()[0].status, SwStatus::Unknown);
        let axioms = AxiomSet {
            positive_curve_classes: vec![h.clone()],
            known_nonzero: vec![],
        };
        let facts = deduce(&m, &[h.clone()], &axioms).unwrap();
        assert_eq!(facts[0].status, SwStatus::NonZero);
        verify_justification(&m, &axioms, &facts[0]).unwrap();
        // H - E1 and K - (H - E1) both have dim_SW = 2
        let d = m.parse_class("H - E1").unwrap();
        assert_eq!(deduce(&m, &[d], &AxiomSet::default()).unwrap()[0].status, SwStatus::Unknown);
    }

    #[test]
    fn contradiction_is_reported() {
        let m = SurfaceModel::rational(1);
        let e = m.parse_class("-H").unwrap();
        let axioms = AxiomSet {
            positive_curve_classes: vec![m.parse_class("H").unwrap()],
            known_nonzero: vec![e.clone()],
        };
        let err = deduce(&m, &[e], &axioms).unwrap_err();
        assert_eq!(err.kind(), "Contradiction");
        let bad = AxiomSet {
            positive_curve_classes: vec![m.parse_class("E1").unwrap()],
            known_nonzero: vec![],
        };
        assert!(matches!(bad.validate(&m), Err(CurveError::Precondition(_))));
    }

    #[test]
    fn vanishing_wall_guard() {
        for h in 1..=4u32 {
            let m = SurfaceModel::ruled_trivial(h, 0).unwrap();
            let e = m.parse_class("-U + 8T").unwrap();
            assert!(sw_dimension(&m, &e).unwrap() >= 0);
            assert_eq!(wall_crossing_number(&m, &e).unwrap(), 0);
            // U kills K - e but not e, so only R3 could decide e
            let axioms = AxiomSet {
                positive_curve_classes: vec![m.section().unwrap()],
                known_nonzero: vec![],
            };
            let d = deduce_all(&m, &[e.clone()], &axioms).unwrap();
            let residual = m.canonical_class().checked_sub(&e).unwrap();
            assert_eq!(d.status(&residual), SwStatus::Zero);
            assert_eq!(d.status(&e), SwStatus::Unknown);
        }
    }

    #[test]
    fn tameness_examples() {
        let m1 = SurfaceModel::ruled_trivial(1, 1).unwrap();
        let c = m1.parse_class("-U + 3T - E1").unwrap();
        let minus_c = c.checked_neg().unwrap();
        let fact = SWFact {
            class: minus_c.clone(),
            status: SwStatus::NonZero,
            justification: vec![],
        };
        let cert = tameness_contradiction(&[(minus_c, fact)], &c, DEFAULT_COEFFICIENT_BOUND)
            .unwrap()
            .unwrap();
        assert_eq!(cert.coefficients, vec![1, 1]);
        assert!(cert.verify());

        let m2 = SurfaceModel::rational(2);
        // -H + 2E2 has dim_SW = -4; it enters as a subvariety class, not via deduce
        assert_eq!(sw_dimension(&m2, &m2.parse_class("-H + 2E2").unwrap()).unwrap(), -4);
        let pool = trusted_pool(&m2, &["-H + 2E2", "H - E1 - E2"]);
        let b = m2.parse_class("-H + 2E1").unwrap();
        let cert = tameness_contradiction(&pool, &b, DEFAULT_COEFFICIENT_BOUND).unwrap().unwrap();
        assert_eq!(cert.coefficients, vec![1, 1, 2]);
        assert!(cert.verify());

        let pool = trusted_pool(&m2, &["E2"]);
        assert_eq!(tameness_contradiction(&pool, &m2.e(1), 8).unwrap(), None);

        let not_nonzero = vec![(m2.e(2), SWFact {
            class: m2.e(2),
            status: SwStatus::Unknown,
            justification: vec![],
        })];
        assert!(tameness_contradiction(&not_nonzero, &m2.e(1), 8).is_err());
    }

    #[test]
    fn coefficient_bound_respected() {
        let m = SurfaceModel::rational(1);
        let b = m.parse_class("-3H").unwrap();
        let pool = trusted_pool(&m, &["H"]);
        assert_eq!(tameness_contradiction(&pool, &b, 2).unwrap(), None);
        let cert = tameness_contradiction(&pool, &b, 3).unwrap().unwrap();
        assert_eq!(cert.coefficients, vec![1, 3]);
    }

    fn small_class(rank: usize) -> impl Strategy<Value = DivisorClass> {
        prop::collection::vec(-3i64..=3, rank).prop_map(DivisorClass::new)
    }

    proptest! {
        #[test]
        fn deduction_is_order_independent(
            targets in prop::collection::vec(small_class(3), 1..6),
            seed in any::<u64>(),
        ) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let m = SurfaceModel::rational(2);
            let axioms = AxiomSet {
                positive_curve_classes: vec![m.parse_class("H").unwrap(), m.parse_class("H - E1").unwrap()],
                known_nonzero: vec![m.e(1), m.e(2), m.parse_class("H - E1 - E2").unwrap()],
            };
            let mut shuffled = targets.clone();
            shuffled.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            let mut ax2 = axioms.clone();
            ax2.known_nonzero.reverse();
            ax2.positive_curve_classes.reverse();
            let a = deduce_all(&m, &targets, &axioms);
            let b = deduce_all(&m, &shuffled, &ax2);
            match (a, b) {
                (Ok(a), Ok(b)) => {
                    for t in &targets {
                        prop_assert_eq!(a.status(t), b.status(t));
                    }
                    for f in a.facts.values() {
                        prop_assert!(verify_justification(&m, &axioms, f).is_ok());
                        if let Some(r3) = f.justification.iter().find(|s| s.rule == RuleId::R3) {
                            prop_assert!(r3.numbers["wall_crossing_number"] != 0);
                        }
                    }
                }
                (Err(a), Err(b)) => prop_assert_eq!(a.kind(), b.kind()),
                _ => prop_assert!(false, "one order contradicted, the other did not"),
            }
        }

        #[test]
        fn certificates_replay(b in small_class(3), pool in prop::collection::vec(small_class(3), 1..4)) {
            let pool: Vec<(DivisorClass, SWFact)> = pool
                .into_iter()
                .map(|c| (c.clone(), SWFact { class: c, status: SwStatus::NonZero, justification: vec![] }))
                .collect();
            if let Some(cert) = tameness_contradiction(&pool, &b, 4).unwrap() {
                prop_assert!(cert.verify());
                prop_assert!(cert.coefficients.iter().all(|&a| (1..=4).contains(&a)));
            }
        }
    }
}

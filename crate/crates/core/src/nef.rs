//! Obstructions to nefness of a class `A` under tamed almost complex
//! structures.
//!
//! A class `B` with `A·B < 0` is ruled out as a curve class by, in order:
//! negative genus, the Kneser bound on ruled surfaces, a positive relation
//! `a₀B + Σ aᵢCᵢ = 0` with every `Cᵢ` of nonvanishing SW, and finally the
//! light cone lemma when `B² ≥ 0`. For `g_J(B) ≥ 1` the class `-B` itself is
//! usually such a `Cᵢ`: `dim_SW(-B)` is the adjunction number of `B`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{CurveError, Result};
use crate::invariants::{adjunction_number, j_genus, sw_dimension};
use crate::lattice::{DivisorClass, SurfaceModel};
use crate::sw::{
    deduce_all, tameness_contradiction, wall_crossing_number, AxiomSet, RuleApplication, RuleId, SWFact,
    SwStatus, TamenessCertificate, DEFAULT_COEFFICIENT_BOUND,
};

pub const DEFAULT_SEARCH_BOUND: i64 = 6;
pub const DEFAULT_FIBER_FAMILIES: i64 = 5;
const MAX_BOX: u128 = 50_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "evidence", rename_all = "snake_case")]
pub enum Evidence {
    AdjunctionExcluded { j_genus: i64 },
    KneserExcluded { adjunction: i64, kneser_bound: i64 },
    LightConeExcluded { square: i64 },
    TamenessCertificate {
        certificate: TamenessCertificate,
        chain: Vec<RuleApplication>,
    },
    Unresolved,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violator {
    pub class: DivisorClass,
    pub pairing: i64,
    pub evidence: Evidence,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBounds {
    /// `|coefficient| ≤ coefficient_bound` for every basis element of `B`.
    pub coefficient_bound: i64,
    /// Upper bound on the coefficients of tameness certificates.
    pub tameness_bound: u64,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds {
            coefficient_bound: DEFAULT_SEARCH_BOUND,
            tameness_bound: DEFAULT_COEFFICIENT_BOUND,
        }
    }
}

/// One symbolic family `[C] = aU + bT - Σ cᵢEᵢ` of fixed fiber degree
/// `a < 0`, with the closed forms of the proof chain and a concrete witness
/// on which they were recomputed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberFamily {
    pub a: i64,
    pub kneser_bound: i64,
    pub wall_crossing_number: u64,
    pub k_plus_c_dot_t: i64,
    pub witness: DivisorClass,
    pub certificate: TamenessCertificate,
    pub chain: Vec<RuleApplication>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NefnessReport {
    pub target: DivisorClass,
    pub violators_found: Vec<Violator>,
    pub search_bounds: SearchBounds,
    pub fiber_families: Vec<FiberFamily>,
    pub unresolved: usize,
    pub warnings: Vec<String>,
}

/// `|a|(2h - 2)` with `a = c·T`: the lower bound on `c² + K·c` for an
/// irreducible curve in class `c` on a ruled surface of base genus `h`.
pub fn kneser_lower_bound(model: &SurfaceModel, c: &DivisorClass) -> Result<i64> {
    let (Some(h), Some(t)) = (model.base_genus(), model.fiber()) else {
        return Err(CurveError::WrongModel {
            expected: "a ruled model".into(),
            found: model.kind().to_string(),
        });
    };
    let a = model.pair(c, &t)?;
    a.checked_abs()
        .and_then(|x| x.checked_mul(2 * i64::from(h) - 2))
        .ok_or(CurveError::Overflow("Kneser bound"))
}

fn fiber_family(model: &SurfaceModel, h: u32, a: i64) -> Result<FiberFamily> {
    let t = model.fiber().expect("ruled");
    let u = model.section().expect("ruled");
    let kneser = a.abs() * (2 * i64::from(h) - 2);
    // smallest |b| with adjunction ≥ Kneser bound; adjunction grows as b decreases when a < 0
    let mut b = 0i64;
    let witness = loop {
        let c = u.checked_scale(a)?.checked_add(&t.checked_scale(b)?)?;
        if adjunction_number(model, &c)? >= kneser_lower_bound(model, &c)? {
            break c;
        }
        b -= 1;
    };
    let fail = |detail: String| CurveError::Fixture {
        fixture: format!("fiber family a = {a}"),
        detail,
    };
    if model.pair(&witness, &t)? != a || kneser_lower_bound(model, &witness)? != kneser {
        return Err(fail("Kneser bound differs from |a|(2h-2)".into()));
    }
    let minus_c = witness.checked_neg()?;
    if sw_dimension(model, &minus_c)? < 0 {
        return Err(fail("dim_SW(-[C]) < 0".into()));
    }
    let wc = wall_crossing_number(model, &minus_c)?;
    let closed = u64::try_from(1 - a)
        .ok()
        .and_then(|base| base.checked_pow(h))
        .ok_or(CurveError::Overflow("wall-crossing number"))?;
    if wc != closed || wc == 0 {
        return Err(fail(format!("wall-crossing number {wc} differs from (1-a)^h = {closed}")));
    }
    let k_plus_c = model.canonical_class().checked_add(&witness)?;
    let kct = model.pair(&k_plus_c, &t)?;
    if kct != a - 2 {
        return Err(fail(format!("(K+[C])·T = {kct}, expected a-2")));
    }

    let axioms = AxiomSet {
        positive_curve_classes: vec![t.clone()],
        known_nonzero: vec![],
    };
    let d = deduce_all(model, std::slice::from_ref(&minus_c), &axioms)?;
    let fact = d.fact(&minus_c);
    let first = fact.justification.first();
    if fact.status != SwStatus::NonZero
        || d.status(&k_plus_c) != SwStatus::Zero
        || first.is_none_or(|s| s.rule != RuleId::R2 || s.class != k_plus_c)
    {
        return Err(fail("R2/R3 chain did not produce SW(-[C]) != 0".into()));
    }
    let certificate = tameness_contradiction(&[(minus_c, fact.clone())], &witness, 1)?
        .ok_or_else(|| fail("no (1,1) certificate".into()))?;
    Ok(FiberFamily {
        a,
        kneser_bound: kneser,
        wall_crossing_number: wc,
        k_plus_c_dot_t: kct,
        witness,
        certificate,
        chain: fact.justification,
    })
}

/// Certifies the proof chain for fiber degrees `a = -1, …, -families`.
/// The chain is uniform in `b` and `cᵢ`: it only reads `a` through the
/// closed forms, which are recomputed on one concrete witness per family.
pub fn certify_fiber_nef(model: &SurfaceModel, families: i64) -> Result<NefnessReport> {
    let Some(h) = model.base_genus() else {
        return Err(CurveError::WrongModel {
            expected: "a ruled model".into(),
            found: model.kind().to_string(),
        });
    };
    let t = model.fiber().expect("ruled");
    let fiber_families = (1..=families)
        .map(|n| fiber_family(model, h, -n))
        .collect::<Result<Vec<_>>>()?;
    let violators_found = fiber_families
        .iter()
        .map(|f| Violator {
            class: f.witness.clone(),
            pairing: f.a,
            evidence: Evidence::TamenessCertificate {
                certificate: f.certificate.clone(),
                chain: f.chain.clone(),
            },
        })
        .collect();
    Ok(NefnessReport {
        target: t,
        violators_found,
        search_bounds: SearchBounds {
            coefficient_bound: families,
            tameness_bound: 1,
        },
        fiber_families,
        unresolved: 0,
        warnings: Vec::new(),
    })
}

fn classify(
    model: &SurfaceModel,
    a: &DivisorClass,
    b: &DivisorClass,
    pool_facts: &[(DivisorClass, SWFact)],
    bounds: &SearchBounds,
) -> Result<Evidence> {
    let g = j_genus(model, b)?;
    if g < 0 {
        return Ok(Evidence::AdjunctionExcluded { j_genus: g });
    }
    let adjunction = adjunction_number(model, b)?;
    if model.is_ruled() {
        let kneser = kneser_lower_bound(model, b)?;
        if adjunction < kneser {
            return Ok(Evidence::KneserExcluded {
                adjunction,
                kneser_bound: kneser,
            });
        }
    }
    let mut candidates: Vec<(DivisorClass, SWFact)> = pool_facts.to_vec();
    let mut chain = Vec::new();
    if g >= 1 {
        let minus_b = b.checked_neg()?;
        let axioms = AxiomSet {
            positive_curve_classes: vec![a.clone()],
            known_nonzero: vec![],
        };
        let fact = deduce_all(model, std::slice::from_ref(&minus_b), &axioms)?.fact(&minus_b);
        if fact.status == SwStatus::NonZero {
            chain = fact.justification.clone();
            candidates.insert(0, (minus_b, fact));
        }
    }
    match tameness_contradiction(&candidates, b, bounds.tameness_bound)? {
        Some(certificate) => {
            let used_minus_b = certificate.classes.iter().any(|c| c.checked_neg().as_ref() == Ok(b));
            if !used_minus_b {
                chain.clear();
            }
            Ok(Evidence::TamenessCertificate { certificate, chain })
        }
        None => {
            let square = model.square(b)?;
            Ok(if square >= 0 {
                Evidence::LightConeExcluded { square }
            } else {
                Evidence::Unresolved
            })
        }
    }
}

/// Searches the box `|coefficient| ≤ bound` for classes `B` with `A·B < 0`
/// and records why each one cannot be a curve class. `A` is assumed to be
/// represented by an embedded curve for some tamed structure, so it serves
/// as the positive axiom for R2. On ruled models, `A = T` is delegated to
/// [`certify_fiber_nef`].
pub fn obstruction_search(
    model: &SurfaceModel,
    a: &DivisorClass,
    pool: &[DivisorClass],
    bounds: SearchBounds,
) -> Result<NefnessReport> {
    model.check(a)?;
    if model.square(a)? < 0 {
        return Err(CurveError::Precondition("target class must have A² ≥ 0".into()));
    }
    if model.fiber().as_ref() == Some(a) {
        return certify_fiber_nef(model, bounds.coefficient_bound.max(1));
    }
    if bounds.coefficient_bound < 0 {
        return Err(CurveError::Precondition("coefficient bound must be non-negative".into()));
    }
    let rank = model.rank();
    let side = (2 * bounds.coefficient_bound + 1) as u128;
    let size = (0..rank).try_fold(1u128, |acc, _| acc.checked_mul(side));
    if size.is_none_or(|s| s > MAX_BOX) {
        return Err(CurveError::SearchTooLarge(format!(
            "(2·{}+1)^{rank} candidate classes exceeds {MAX_BOX}",
            bounds.coefficient_bound
        )));
    }

    let axioms = AxiomSet {
        positive_curve_classes: vec![a.clone()],
        known_nonzero: pool.to_vec(),
    };
    let d = deduce_all(model, pool, &axioms)?;
    let pool_facts: Vec<(DivisorClass, SWFact)> = pool
        .iter()
        .map(|c| (c.clone(), d.fact(c)))
        .filter(|(_, f)| f.status == SwStatus::NonZero)
        .collect();

    let bound = bounds.coefficient_bound;
    let mut violators: Vec<Violator> = (-bound..=bound)
        .into_par_iter()
        .map(|lead| -> Result<Vec<Violator>> {
            let mut found = Vec::new();
            let mut c = vec![-bound; rank];
            c[0] = lead;
            loop {
                let b = DivisorClass::new(c.clone());
                let pairing = model.pair(a, &b)?;
                if pairing < 0 {
                    let evidence = classify(model, a, &b, &pool_facts, &bounds)?;
                    found.push(Violator {
                        class: b,
                        pairing,
                        evidence,
                    });
                }
                let mut i = 1;
                while i < rank && c[i] == bound {
                    c[i] = -bound;
                    i += 1;
                }
                if i == rank {
                    break;
                }
                c[i] += 1;
            }
            Ok(found)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    violators.sort_by(|x, y| x.class.cmp(&y.class));

    let unresolved = violators.iter().filter(|v| v.evidence == Evidence::Unresolved).count();
    let mut warnings = Vec::new();
    if unresolved > 0 && pool_facts.is_empty() {
        warnings.push(format!("{unresolved} violators unresolved and the nonvanishing pool is empty"));
    }
    Ok(NefnessReport {
        target: a.clone(),
        violators_found: violators,
        search_bounds: bounds,
        fiber_families: Vec::new(),
        unresolved,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kneser_examples() {
        let m2 = SurfaceModel::ruled_trivial(2, 1).unwrap();
        let c = m2.parse_class("-U + 3T").unwrap();
        assert_eq!(kneser_lower_bound(&m2, &c).unwrap(), 2);
        assert_eq!(kneser_lower_bound(&m2, &m2.parse_class("T - E1").unwrap()).unwrap(), 0);
        let m3 = SurfaceModel::ruled_trivial(3, 0).unwrap();
        assert_eq!(kneser_lower_bound(&m3, &m3.parse_class("U + 3T").unwrap()).unwrap(), 4);
        assert!(kneser_lower_bound(&SurfaceModel::rational(2), &SurfaceModel::rational(2).e(1)).is_err());
    }

    #[test]
    fn fiber_families_closed_forms() {
        for h in 1..=5u32 {
            for m in [SurfaceModel::ruled_trivial(h, 2).unwrap(), SurfaceModel::ruled_nontrivial(h).unwrap()] {
                let r = certify_fiber_nef(&m, 4).unwrap();
                assert_eq!(r.fiber_families.len(), 4);
                assert_eq!(r.unresolved, 0);
                for f in &r.fiber_families {
                    let a = f.a;
                    assert!(a <= -1);
                    assert_eq!(f.kneser_bound, a.abs() * (2 * i64::from(h) - 2));
                    assert_eq!(f.wall_crossing_number, (1 - a).pow(h) as u64);
                    assert_eq!(f.k_plus_c_dot_t, a - 2);
                    assert_eq!(f.certificate.coefficients, vec![1, 1]);
                    assert!(f.certificate.verify());
                }
                for v in &r.violators_found {
                    assert!(m.pair(&r.target, &v.class).unwrap() < 0);
                }
            }
        }
        let m1 = SurfaceModel::ruled_trivial(1, 0).unwrap();
        assert_eq!(certify_fiber_nef(&m1, 1).unwrap().fiber_families[0].wall_crossing_number, 2);
        let m2 = SurfaceModel::ruled_trivial(2, 0).unwrap();
        let f = &certify_fiber_nef(&m2, 2).unwrap().fiber_families[1];
        assert_eq!((f.a, f.wall_crossing_number), (-2, 9));
        assert_eq!(certify_fiber_nef(&m2, 1).unwrap().fiber_families[0].k_plus_c_dot_t, -3);
    }

    #[test]
    fn fiber_target_delegates() {
        let m = SurfaceModel::ruled_trivial(2, 1).unwrap();
        let r = obstruction_search(&m, &m.fiber().unwrap(), &[], SearchBounds::default()).unwrap();
        assert_eq!(r.fiber_families.len() as i64, DEFAULT_SEARCH_BOUND);
    }

    #[test]
    fn ruling_class_on_one_point_blowup() {
        let m = SurfaceModel::rational(1);
        let a = m.parse_class("H - E1").unwrap();
        let bounds = SearchBounds {
            coefficient_bound: 3,
            tameness_bound: DEFAULT_COEFFICIENT_BOUND,
        };
        let r = obstruction_search(&m, &a, &[m.e(1)], bounds).unwrap();
        let open: Vec<&DivisorClass> = r
            .violators_found
            .iter()
            .filter(|v| v.evidence == Evidence::Unresolved)
            .map(|v| &v.class)
            .collect();
        assert_eq!(open, vec![&m.parse_class("-H - 3E1").unwrap()]);

        let h = m.parse_class("H").unwrap();
        let r = obstruction_search(&m, &a, &[m.e(1), h], bounds).unwrap();
        assert!(!r.violators_found.is_empty());
        assert_eq!(r.unresolved, 0);
        for v in &r.violators_found {
            assert!(v.pairing < 0);
            match &v.evidence {
                Evidence::AdjunctionExcluded { .. } => assert!(j_genus(&m, &v.class).unwrap() < 0),
                Evidence::TamenessCertificate { certificate, .. } => assert!(certificate.verify()),
                Evidence::LightConeExcluded { square } => assert!(*square >= 0),
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn positive_genus_violator_resolved_by_wall_crossing() {
        let m = SurfaceModel::rational(2);
        let a = m.parse_class("H").unwrap();
        let b = m.parse_class("-4H").unwrap();
        // A·B = -4 < min(0, -K·A) = -3
        assert!(j_genus(&m, &b).unwrap() > 0);
        let ev = classify(&m, &a, &b, &[], &SearchBounds::default()).unwrap();
        match ev {
            Evidence::TamenessCertificate { certificate, chain } => {
                assert_eq!(certificate.coefficients, vec![1, 1]);
                assert_eq!(chain.iter().map(|s| s.rule).collect::<Vec<_>>(), vec![RuleId::R2, RuleId::R3]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn guards() {
        let m = SurfaceModel::rational(8);
        let h = m.parse_class("H").unwrap();
        assert!(matches!(
            obstruction_search(&m, &h, &[], SearchBounds::default()),
            Err(CurveError::SearchTooLarge(_))
        ));
        assert!(matches!(
            obstruction_search(&m, &m.e(1), &[], SearchBounds::default()),
            Err(CurveError::Precondition(_))
        ));
        let m2 = SurfaceModel::rational(2);
        let r = obstruction_search(
            &m2,
            &m2.parse_class("H - E1").unwrap(),
            &[],
            SearchBounds {
                coefficient_bound: 2,
                tameness_bound: 8,
            },
        )
        .unwrap();
        assert!(r.unresolved > 0);
        assert_eq!(r.warnings.len(), 1);
    }
}

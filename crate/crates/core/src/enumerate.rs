//! Exhaustive enumeration of distinguished class families.
//!
//! Exceptional classes and `-2` roots on `CP² # k(-CP²)` reduce, for a fixed
//! `H`-degree `a`, to integer vectors `b` with prescribed `Σ b_i` and
//! `Σ b_i²`; the search walks coordinates with a Cauchy–Schwarz cutoff on
//! the remaining sum and norm. For `k ≤ 8` the cutoff also bounds `a`, so
//! the families are finite and enumerated completely.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cremona::{cremona_reduce, ReductionTrace};
use crate::error::{CurveError, Result};
use crate::invariants::j_genus;
use crate::lattice::{DivisorClass, SurfaceKind, SurfaceModel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Exceptional,
    MinusTwoSphere,
    RuledNegativeRational,
    SphericalCanonicalForm,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationResult {
    pub family: Family,
    pub classes: Vec<DivisorClass>,
    /// True when the family is finite and was enumerated in full.
    pub complete: bool,
    pub bound_used: Option<i64>,
}

/// Calls `visit` for every integer vector of length `len` with
/// `Σ v_i² = norm`, `Σ v_i = sum` (when given) and every entry congruent
/// to `parity` mod 2 (when given).
pub fn for_each_vector(
    len: usize,
    norm: i64,
    sum: Option<i64>,
    parity: Option<i64>,
    visit: &mut dyn FnMut(&[i64]),
) {
    fn feasible(remaining: usize, norm: i64, sum: Option<i64>) -> bool {
        if norm < 0 {
            return false;
        }
        if remaining == 0 {
            return norm == 0 && sum.is_none_or(|s| s == 0);
        }
        match sum {
            // Cauchy–Schwarz and the parity of Σv² - Σv = Σ v(v-1)
            Some(s) => {
                (s as i128) * (s as i128) <= remaining as i128 * norm as i128
                    && (norm - s).rem_euclid(2) == 0
            }
            None => true,
        }
    }

    fn walk(
        prefix: &mut Vec<i64>,
        len: usize,
        norm: i64,
        sum: Option<i64>,
        parity: Option<i64>,
        visit: &mut dyn FnMut(&[i64]),
    ) {
        let remaining = len - prefix.len();
        if remaining == 0 {
            if norm == 0 && sum.is_none_or(|s| s == 0) {
                visit(prefix);
            }
            return;
        }
        let max = norm.isqrt();
        for v in -max..=max {
            if parity.is_some_and(|p| (v - p).rem_euclid(2) != 0) {
                continue;
            }
            let next_norm = norm - v * v;
            let next_sum = sum.map(|s| s - v);
            if !feasible(remaining - 1, next_norm, next_sum) {
                continue;
            }
            prefix.push(v);
            walk(prefix, len, next_norm, next_sum, parity, visit);
            prefix.pop();
        }
    }

    if feasible(len, norm, sum) {
        walk(&mut Vec::with_capacity(len), len, norm, sum, parity, visit);
    }
}

/// Integer `a` with `(3a - s0)² ≤ k (a² + q0)`, i.e. the degrees for which
/// `Σ b_i = 3a - s0`, `Σ b_i² = a² + q0` can have solutions. Only finite for
/// `k ≤ 8`.
fn feasible_degrees(k: usize, s0: i64, q0: i64) -> Vec<i64> {
    assert!(k <= 8);
    let k = k as i64;
    let f = |a: i64| (3 * a - s0).pow(2) - k * (a * a + q0);
    // f is convex with vertex 3 s0 / (9 - k)
    let vertex = (3 * s0).div_euclid(9 - k);
    let start = [vertex, vertex + 1].into_iter().find(|&a| f(a) <= 0);
    let Some(start) = start else { return Vec::new() };
    let mut lo = start;
    while f(lo - 1) <= 0 {
        lo -= 1;
    }
    let mut hi = start;
    while f(hi + 1) <= 0 {
        hi += 1;
    }
    (lo..=hi).collect()
}

fn rational_family(
    model: &SurfaceModel,
    s0: i64,
    q0: i64,
    degree_bound: Option<i64>,
) -> Result<(Vec<DivisorClass>, bool)> {
    let k = model.blowups();
    let degrees = if k <= 8 {
        feasible_degrees(k, s0, q0)
    } else {
        let bound = degree_bound.ok_or_else(|| {
            CurveError::MissingBound(format!(
                "{} (k >= 9 lies past the E8 boundary)",
                model.kind()
            ))
        })?;
        (-bound..=bound).collect()
    };
    let mut classes: Vec<DivisorClass> = degrees
        .par_iter()
        .flat_map_iter(|&a| {
            let mut found = Vec::new();
            let norm = a * a + q0;
            let sum = 3 * a - s0;
            for_each_vector(k, norm, Some(sum), None, &mut |b| {
                let mut c = Vec::with_capacity(k + 1);
                c.push(a);
                c.extend(b.iter().map(|x| -x));
                found.push(DivisorClass::new(c));
            });
            found
        })
        .collect();
    classes.sort();
    if k > 8 {
        return Ok((classes, false));
    }
    // the whole finite family is known here; complete unless the bound cut it
    let before = classes.len();
    if let Some(bound) = degree_bound {
        classes.retain(|e| e.get(0).abs() <= bound);
    }
    let complete = classes.len() == before;
    Ok((classes, complete))
}

fn ruled_trivial_exceptional(h: u32, k: usize, bound: i64) -> Vec<DivisorClass> {
    let h = i64::from(h);
    let kk = k as i64;
    let mut classes: Vec<DivisorClass> = (-bound..=bound)
        .into_par_iter()
        .flat_map_iter(|a| {
            // e = aU + bT - Σ c_i E_i with e² = K·e = -1 becomes
            // Σ (2c_i - a)² = 4a²(2h-2) + 4a + 4 + k a², b = (a(2h-2) + Σc + 1) / 2.
            let norm = 4 * a * a * (2 * h - 2) + 4 * a + 4 + kk * a * a;
            let mut found = Vec::new();
            if norm < 0 {
                return found;
            }
            for_each_vector(k, norm, None, Some(a), &mut |d| {
                let c: Vec<i64> = d.iter().map(|x| (x + a) / 2).collect();
                let twice_b = a * (2 * h - 2) + c.iter().sum::<i64>() + 1;
                if twice_b % 2 != 0 {
                    return;
                }
                let mut coeffs = vec![a, twice_b / 2];
                coeffs.extend(c.iter().map(|x| -x));
                found.push(DivisorClass::new(coeffs));
            });
            found
        })
        .collect();
    classes.sort();
    classes
}

fn verify_all(model: &SurfaceModel, classes: &[DivisorClass], square: i64, k_dot: i64) -> Result<()> {
    for e in classes {
        let (s, kd) = (model.square(e)?, model.k_dot(e)?);
        assert!(
            s == square && kd == k_dot,
            "enumeration produced {} with e² = {s}, K·e = {kd}",
            model.format_class(e)
        );
    }
    Ok(())
}

/// All classes with `e² = K·e = -1`, restricted to `|leading coefficient| ≤
/// degree_bound` when a bound is given. The leading coefficient is the
/// `H`-degree on rational models and the `U`-coefficient on ruled ones.
///
/// A bound is required for `k ≥ 9` and for blown-up trivial ruled surfaces,
/// where the numerical family is infinite (e.g. `U + 2T - 2E1 - E2` for
/// `h = 1`, `k = 2` has nonzero `U`-degree).
pub fn exceptional_classes(model: &SurfaceModel, degree_bound: Option<i64>) -> Result<EnumerationResult> {
    if let Some(b) = degree_bound {
        if b < 0 {
            return Err(CurveError::Precondition("degree bound must be non-negative".into()));
        }
    }
    let (classes, complete) = match model.kind() {
        SurfaceKind::RationalBlowup { .. } => rational_family(model, 1, 1, degree_bound)?,
        SurfaceKind::SphereProduct => (Vec::new(), true), // 2xy = -1 has no solutions
        SurfaceKind::RuledTrivialBlowup { h, k } => {
            let bound = degree_bound
                .ok_or_else(|| CurveError::MissingBound(model.kind().to_string()))?;
            (ruled_trivial_exceptional(h, k, bound), false)
        }
        SurfaceKind::RuledNontrivial { h } => {
            // e = aU + bT: 2b = a(2h-3) + 1 and (2h-2)a² + a + 1 = 0, so |a| <= 1.
            let h = i64::from(h);
            let classes = (-1..=1)
                .filter(|&a| (2 * h - 2) * a * a + a + 1 == 0 && (a * (2 * h - 3) + 1) % 2 == 0)
                .filter(|a| degree_bound.is_none_or(|b| a.abs() <= b))
                .map(|a| DivisorClass::new(vec![a, (a * (2 * h - 3) + 1) / 2]))
                .collect();
            (classes, degree_bound.is_none_or(|b| b >= 1))
        }
    };
    verify_all(model, &classes, -1, -1)?;
    Ok(EnumerationResult {
        family: Family::Exceptional,
        classes,
        complete,
        bound_used: degree_bound,
    })
}

/// `-2` roots (`r² = -2`, `K·r = 0`) on `CP² # k(-CP²)` for `k ≤ 8`.
pub fn rational_roots(model: &SurfaceModel) -> Result<EnumerationResult> {
    match model.kind() {
        SurfaceKind::RationalBlowup { k } if k <= 8 => {}
        other => {
            return Err(CurveError::WrongModel {
                expected: "RationalBlowup(k) with k <= 8".into(),
                found: other.to_string(),
            })
        }
    }
    let (classes, complete) = rational_family(model, 0, 2, None)?;
    verify_all(model, &classes, -2, 0)?;
    Ok(EnumerationResult {
        family: Family::MinusTwoSphere,
        classes,
        complete,
        bound_used: None,
    })
}

/// The 240 roots of `E8` realised on `CP² # 8(-CP²)`.
pub fn minus_two_sphere_classes(model: &SurfaceModel) -> Result<EnumerationResult> {
    if model.kind() != (SurfaceKind::RationalBlowup { k: 8 }) {
        return Err(CurveError::WrongModel {
            expected: "RationalBlowup(8)".into(),
            found: model.kind().to_string(),
        });
    }
    rational_roots(model)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuledClassification {
    /// Genus-zero classes `bT - Σ c_i E_i` of negative square.
    pub negative: EnumerationResult,
    /// Genus-zero classes with `U`-coefficient 0 and square `≥ 0`.
    pub nonnegative_square: Vec<DivisorClass>,
    /// The exceptional members of `negative`.
    pub exceptional: Vec<DivisorClass>,
    /// Whether `nonnegative_square` is exactly the fiber class.
    pub fiber_is_only_nonnegative: bool,
}

/// Genus-zero classes with vanishing `U`-coefficient inside the box
/// `|b|, |c_i| ≤ bound`. Nonzero `U`-degree is excluded for genus zero by
/// the Kneser bound `e² + K·e ≥ |a|(2h - 2) ≥ 0 > -2`.
pub fn ruled_negative_rational_classes(model: &SurfaceModel, bound: i64) -> Result<RuledClassification> {
    let (k, rank) = match model.kind() {
        SurfaceKind::RuledTrivialBlowup { k, .. } => (k, k + 2),
        SurfaceKind::RuledNontrivial { .. } => (0, 2),
        other => {
            return Err(CurveError::WrongModel {
                expected: "a ruled model".into(),
                found: other.to_string(),
            })
        }
    };
    if bound < 0 {
        return Err(CurveError::Precondition("bound must be non-negative".into()));
    }
    let mut genus_zero = Vec::new();
    let mut c = vec![-bound; k];
    loop {
        // e² + K·e = -Σc² - 2b + Σc = -2 fixes b
        let b = 1 - c.iter().map(|x| x * (x - 1)).sum::<i64>() / 2;
        if b.abs() <= bound {
            let mut coeffs = vec![0; rank];
            coeffs[1] = b;
            for (slot, x) in coeffs[2..].iter_mut().zip(&c) {
                *slot = -x;
            }
            genus_zero.push(DivisorClass::new(coeffs));
        }
        // odometer
        let mut i = 0;
        while i < k && c[i] == bound {
            c[i] = -bound;
            i += 1;
        }
        if i == k {
            break;
        }
        c[i] += 1;
    }
    genus_zero.sort();
    let mut negative = Vec::new();
    let mut nonnegative = Vec::new();
    let mut exceptional = Vec::new();
    for e in genus_zero {
        debug_assert_eq!(j_genus(model, &e)?, 0);
        let sq = model.square(&e)?;
        if sq < 0 {
            if sq == -1 && model.k_dot(&e)? == -1 {
                exceptional.push(e.clone());
            }
            negative.push(e);
        } else {
            nonnegative.push(e);
        }
    }
    let fiber = model.fiber().expect("ruled");
    Ok(RuledClassification {
        negative: EnumerationResult {
            family: Family::RuledNegativeRational,
            classes: negative,
            complete: false,
            bound_used: Some(bound),
        },
        fiber_is_only_nonnegative: nonnegative == [fiber],
        nonnegative_square: nonnegative,
        exceptional,
    })
}

/// Reduced forms of non-negative `K`-spherical classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SphericalTemplate {
    HMinusE1,
    TwoH,
    H,
    /// `(n+1)H - nE1`, `n ≥ 1`.
    Pencil,
    /// `(n+1)H - nE1 - E2`, `n ≥ 1`.
    PencilMinusE2,
}

impl SphericalTemplate {
    pub fn all() -> [SphericalTemplate; 5] {
        [
            SphericalTemplate::HMinusE1,
            SphericalTemplate::TwoH,
            SphericalTemplate::H,
            SphericalTemplate::Pencil,
            SphericalTemplate::PencilMinusE2,
        ]
    }

    pub fn is_parametric(self) -> bool {
        matches!(self, SphericalTemplate::Pencil | SphericalTemplate::PencilMinusE2)
    }

    /// The template as a class; `n` is ignored for the fixed templates.
    pub fn instantiate(self, model: &SurfaceModel, n: i64) -> Result<DivisorClass> {
        if !model.is_rational_blowup() {
            return Err(CurveError::WrongModel {
                expected: "a rational blowup".into(),
                found: model.kind().to_string(),
            });
        }
        if self.is_parametric() && n < 1 {
            return Err(CurveError::Precondition(format!("template parameter n = {n} < 1")));
        }
        let needs = match self {
            SphericalTemplate::HMinusE1 | SphericalTemplate::Pencil => 1,
            SphericalTemplate::PencilMinusE2 => 2,
            _ => 0,
        };
        if model.blowups() < needs {
            return Err(CurveError::WrongModel {
                expected: format!("at least {needs} blowups"),
                found: model.kind().to_string(),
            });
        }
        let mut c = vec![0; model.rank()];
        match self {
            SphericalTemplate::HMinusE1 => {
                c[0] = 1;
                c[1] = -1;
            }
            SphericalTemplate::TwoH => c[0] = 2,
            SphericalTemplate::H => c[0] = 1,
            SphericalTemplate::Pencil => {
                c[0] = n + 1;
                c[1] = -n;
            }
            SphericalTemplate::PencilMinusE2 => {
                c[0] = n + 1;
                c[1] = -n;
                c[2] = -1;
            }
        }
        Ok(DivisorClass::new(c))
    }
}

pub fn spherical_canonical_forms() -> Vec<SphericalTemplate> {
    SphericalTemplate::all().to_vec()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SphericalMatch {
    pub template: SphericalTemplate,
    pub n: Option<i64>,
    pub trace: ReductionTrace,
}

/// Reduces `e` and matches the reduced form against the template list.
pub fn match_spherical_canonical_form(model: &SurfaceModel, e: &DivisorClass) -> Result<Option<SphericalMatch>> {
    let trace = cremona_reduce(model, e)?;
    let a = trace.reduced.get(0);
    for template in SphericalTemplate::all() {
        let n = if template.is_parametric() { a - 1 } else { 0 };
        let Ok(candidate) = template.instantiate(model, n) else { continue };
        if candidate == trace.reduced {
            return Ok(Some(SphericalMatch {
                template,
                n: template.is_parametric().then_some(n),
                trace,
            }));
        }
    }
    Ok(None)
}

//! Numerical invariants of a single class: J-genus, expected dimension,
//! Seiberg–Witten dimension, adjunction number and the sheaf Euler
//! characteristic on rational surfaces.

use serde::{Deserialize, Serialize};

use crate::error::{CurveError, Result};
use crate::lattice::{DivisorClass, SurfaceKind, SurfaceModel};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub class: DivisorClass,
    pub self_intersection: i64,
    pub k_pairing: i64,
    pub j_genus: i64,
    pub iota: i64,
    pub l: i64,
    pub sw_dim: i64,
    pub adjunction: i64,
}

/// `e² + K·e`, which equals `2 g_J(e) - 2`.
pub fn adjunction_number(model: &SurfaceModel, e: &DivisorClass) -> Result<i64> {
    model
        .square(e)?
        .checked_add(model.k_dot(e)?)
        .ok_or(CurveError::Overflow("adjunction number"))
}

/// `e² - K·e`.
pub fn sw_dimension(model: &SurfaceModel, e: &DivisorClass) -> Result<i64> {
    model
        .square(e)?
        .checked_sub(model.k_dot(e)?)
        .ok_or(CurveError::Overflow("SW dimension"))
}

fn require_even(value: i64, what: &str, model: &SurfaceModel, e: &DivisorClass) -> Result<()> {
    if value % 2 != 0 {
        return Err(CurveError::InvalidClass(format!(
            "{what} of {} is odd ({value})",
            model.format_class(e)
        )));
    }
    Ok(())
}

/// `g_J(e) = ½(e² + K·e) + 1`.
pub fn j_genus(model: &SurfaceModel, e: &DivisorClass) -> Result<i64> {
    let adj = adjunction_number(model, e)?;
    require_even(adj, "e² + K·e", model, e)?;
    Ok(adj / 2 + 1)
}

/// Returns `(ι_e, l_e)` with `ι_e = ½(e² - K·e)` and `l_e = max(ι_e, 0)`.
pub fn expected_dimension(model: &SurfaceModel, e: &DivisorClass) -> Result<(i64, i64)> {
    let dim = sw_dimension(model, e)?;
    require_even(dim, "e² - K·e", model, e)?;
    let iota = dim / 2;
    if j_genus(model, e)? == 0 {
        debug_assert_eq!(iota, model.square(e)? + 1);
    }
    Ok((iota, iota.max(0)))
}

pub fn report(model: &SurfaceModel, e: &DivisorClass) -> Result<InvariantReport> {
    let (iota, l) = expected_dimension(model, e)?;
    Ok(InvariantReport {
        class: e.clone(),
        self_intersection: model.square(e)?,
        k_pairing: model.k_dot(e)?,
        j_genus: j_genus(model, e)?,
        iota,
        l,
        sw_dim: sw_dimension(model, e)?,
        adjunction: adjunction_number(model, e)?,
    })
}

/// `χ(O(D)) = 1 + ½(D² - K·D)` on a rational surface.
pub fn sheaf_euler_characteristic(model: &SurfaceModel, d: &DivisorClass) -> Result<i64> {
    if !model.is_rational_blowup() {
        return Err(CurveError::WrongModel {
            expected: "a rational blowup".into(),
            found: model.kind().to_string(),
        });
    }
    let dim = sw_dimension(model, d)?;
    require_even(dim, "D² - K·D", model, d)?;
    Ok(1 + dim / 2)
}

/// The dual class `e' = e + h_e` used to embed `M_e` into a symmetric
/// product. Both inputs must be J-genus zero classes with `e · h_e = 1`;
/// the result is checked to have genus zero and `e' · e = e² + 1`.
pub fn dual_class(model: &SurfaceModel, e: &DivisorClass, h_e: &DivisorClass) -> Result<DivisorClass> {
    let fail = |what: String| Err(CurveError::Precondition(what));
    match j_genus(model, e) {
        Ok(0) => {}
        Ok(g) => return fail(format!("g_J(e) = {g}, expected 0")),
        Err(err) => return fail(format!("g_J(e) undefined: {err}")),
    }
    match j_genus(model, h_e) {
        Ok(0) => {}
        Ok(g) => return fail(format!("g_J(H_e) = {g}, expected 0")),
        Err(err) => return fail(format!("g_J(H_e) undefined: {err}")),
    }
    let p = model.pair(e, h_e)?;
    if p != 1 {
        return fail(format!("e · H_e = {p}, expected 1"));
    }
    let dual = e.checked_add(h_e)?;
    let g = j_genus(model, &dual)?;
    if g != 0 {
        return fail(format!("g_J(e + H_e) = {g}, expected 0"));
    }
    let lhs = model.pair(&dual, e)?;
    let rhs = model.square(e)? + 1;
    if lhs != rhs {
        return fail(format!("(e + H_e) · e = {lhs}, expected e² + 1 = {rhs}"));
    }
    Ok(dual)
}

/// Euler characteristic of `CP² # k(-CP²)`, which counts the singular fibers
/// of a generic cubic pencil (a nodal fiber contributes 1 each) when `k = 9`.
pub fn pencil_singular_count(model: &SurfaceModel) -> Result<i64> {
    match model.kind() {
        SurfaceKind::RationalBlowup { k } => Ok(3 + k as i64),
        other => Err(CurveError::WrongModel {
            expected: "RationalBlowup(9)".into(),
            found: other.to_string(),
        }),
    }
}

//! Surface models, their intersection lattices, and exact divisor-class
//! arithmetic.
//!
//! Every surface in the toolkit carries an ordered basis of `H²(M, Z)`, the
//! Gram matrix of the intersection pairing in that basis, and its canonical
//! class. Classes are plain coefficient vectors in that basis.

use std::fmt;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{CurveError, Result};

/// The surface presets the toolkit understands. This is also the JSON
/// descriptor accepted by the CLI, e.g. `{"kind":"rational_blowup","k":8}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SurfaceKind {
    /// `CP² # k (-CP²)` with basis `H, E1..Ek`.
    RationalBlowup { k: usize },
    /// `S² × S²` with basis `A, B`.
    SphereProduct,
    /// Blowup of the trivial bundle `Σ_h × S²` at `k` points, basis `U, T, E1..Ek`.
    RuledTrivialBlowup { h: u32, k: usize },
    /// The nontrivial `S²`-bundle over `Σ_h`, basis `U, T` with `U² = 1`.
    RuledNontrivial { h: u32 },
}

impl fmt::Display for SurfaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SurfaceKind::RationalBlowup { k } => write!(f, "RationalBlowup({k})"),
            SurfaceKind::SphereProduct => write!(f, "SphereProduct"),
            SurfaceKind::RuledTrivialBlowup { h, k } => write!(f, "RuledTrivialBlowup({h},{k})"),
            SurfaceKind::RuledNontrivial { h } => write!(f, "RuledNontrivial({h})"),
        }
    }
}

/// An exact integer coefficient vector in the basis of some [`SurfaceModel`].
///
/// The derived ordering is lexicographic on the coefficient vector; it is the
/// canonical order used for every sorted output.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DivisorClass(Vec<i64>);

impl DivisorClass {
    pub fn new(coefficients: Vec<i64>) -> Self {
        DivisorClass(coefficients)
    }

    pub fn zero(rank: usize) -> Self {
        DivisorClass(vec![0; rank])
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.0
    }

    pub fn into_coefficients(self) -> Vec<i64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn get(&self, index: usize) -> i64 {
        self.0[index]
    }

    pub(crate) fn coefficients_mut(&mut self) -> &mut [i64] {
        &mut self.0
    }

    fn check_len(&self, other: &DivisorClass) -> Result<()> {
        if self.len() != other.len() {
            return Err(CurveError::Dimension {
                expected: self.len(),
                found: other.len(),
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &DivisorClass) -> Result<DivisorClass> {
        self.check_len(other)?;
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_add(*b).ok_or(CurveError::Overflow("class sum")))
            .collect::<Result<Vec<_>>>()
            .map(DivisorClass)
    }

    pub fn checked_sub(&self, other: &DivisorClass) -> Result<DivisorClass> {
        self.check_len(other)?;
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b).ok_or(CurveError::Overflow("class difference")))
            .collect::<Result<Vec<_>>>()
            .map(DivisorClass)
    }

    pub fn checked_scale(&self, factor: i64) -> Result<DivisorClass> {
        self.0
            .iter()
            .map(|a| a.checked_mul(factor).ok_or(CurveError::Overflow("class multiple")))
            .collect::<Result<Vec<_>>>()
            .map(DivisorClass)
    }

    pub fn checked_neg(&self) -> Result<DivisorClass> {
        self.checked_scale(-1)
    }
}

impl From<Vec<i64>> for DivisorClass {
    fn from(v: Vec<i64>) -> Self {
        DivisorClass(v)
    }
}

/// A surface preset: basis labels, Gram matrix and canonical class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SurfaceKind", into = "SurfaceKind")]
pub struct SurfaceModel {
    kind: SurfaceKind,
    labels: Vec<String>,
    gram: Vec<Vec<i64>>,
    canonical: DivisorClass,
}

impl TryFrom<SurfaceKind> for SurfaceModel {
    type Error = CurveError;

    fn try_from(kind: SurfaceKind) -> Result<Self> {
        SurfaceModel::new(kind)
    }
}

impl From<SurfaceModel> for SurfaceKind {
    fn from(model: SurfaceModel) -> Self {
        model.kind
    }
}

fn e_labels(k: usize) -> impl Iterator<Item = String> {
    (1..=k).map(|i| format!("E{i}"))
}

impl SurfaceModel {
    pub fn new(kind: SurfaceKind) -> Result<Self> {
        let (labels, gram, canonical): (Vec<String>, Vec<Vec<i64>>, Vec<i64>) = match kind {
            SurfaceKind::RationalBlowup { k } => {
                let n = k + 1;
                let mut gram = vec![vec![0; n]; n];
                gram[0][0] = 1;
                for (i, row) in gram.iter_mut().enumerate().skip(1) {
                    row[i] = -1;
                }
                let mut canonical = vec![1; n];
                canonical[0] = -3;
                let labels = std::iter::once("H".to_string()).chain(e_labels(k)).collect();
                (labels, gram, canonical)
            }
            SurfaceKind::SphereProduct => (
                vec!["A".into(), "B".into()],
                vec![vec![0, 1], vec![1, 0]],
                vec![-2, -2],
            ),
            SurfaceKind::RuledTrivialBlowup { h, k } => {
                if h == 0 {
                    return Err(CurveError::InvalidModel(
                        "ruled models need base genus h >= 1".into(),
                    ));
                }
                let n = k + 2;
                let mut gram = vec![vec![0; n]; n];
                gram[0][1] = 1;
                gram[1][0] = 1;
                for (i, row) in gram.iter_mut().enumerate().skip(2) {
                    row[i] = -1;
                }
                let mut canonical = vec![1; n];
                canonical[0] = -2;
                canonical[1] = 2 * i64::from(h) - 2;
                let labels = ["U".to_string(), "T".to_string()]
                    .into_iter()
                    .chain(e_labels(k))
                    .collect();
                (labels, gram, canonical)
            }
            SurfaceKind::RuledNontrivial { h } => {
                if h == 0 {
                    return Err(CurveError::InvalidModel(
                        "ruled models need base genus h >= 1".into(),
                    ));
                }
                (
                    vec!["U".into(), "T".into()],
                    vec![vec![1, 1], vec![1, 0]],
                    vec![-2, 2 * i64::from(h) - 1],
                )
            }
        };
        Ok(SurfaceModel {
            kind,
            labels,
            gram,
            canonical: DivisorClass(canonical),
        })
    }

    pub fn rational(k: usize) -> Self {
        SurfaceModel::new(SurfaceKind::RationalBlowup { k }).expect("rational preset")
    }

    pub fn sphere_product() -> Self {
        SurfaceModel::new(SurfaceKind::SphereProduct).expect("sphere product preset")
    }

    pub fn ruled_trivial(h: u32, k: usize) -> Result<Self> {
        SurfaceModel::new(SurfaceKind::RuledTrivialBlowup { h, k })
    }

    pub fn ruled_nontrivial(h: u32) -> Result<Self> {
        SurfaceModel::new(SurfaceKind::RuledNontrivial { h })
    }

    pub fn kind(&self) -> SurfaceKind {
        self.kind
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    /// Number of exceptional basis vectors `E1..Ek`.
    pub fn blowups(&self) -> usize {
        match self.kind {
            SurfaceKind::RationalBlowup { k } | SurfaceKind::RuledTrivialBlowup { k, .. } => k,
            _ => 0,
        }
    }

    /// Index of `E1` in the basis.
    pub fn e_offset(&self) -> usize {
        match self.kind {
            SurfaceKind::RationalBlowup { .. } => 1,
            _ => 2,
        }
    }

    /// Base genus for ruled models.
    pub fn base_genus(&self) -> Option<u32> {
        match self.kind {
            SurfaceKind::RuledTrivialBlowup { h, .. } | SurfaceKind::RuledNontrivial { h } => {
                Some(h)
            }
            _ => None,
        }
    }

    pub fn is_ruled(&self) -> bool {
        self.base_genus().is_some()
    }

    pub fn is_rational_blowup(&self) -> bool {
        matches!(self.kind, SurfaceKind::RationalBlowup { .. })
    }

    pub fn canonical_class(&self) -> &DivisorClass {
        &self.canonical
    }

    pub fn zero(&self) -> DivisorClass {
        DivisorClass::zero(self.rank())
    }

    /// The basis vector with the given label.
    pub fn basis(&self, label: &str) -> Result<DivisorClass> {
        let index = self
            .labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| CurveError::UnknownLabel(label.to_string()))?;
        let mut c = self.zero();
        c.0[index] = 1;
        Ok(c)
    }

    /// `E_i` (1-based).
    pub fn e(&self, i: usize) -> DivisorClass {
        assert!(i >= 1 && i <= self.blowups(), "E{i} out of range");
        let mut c = self.zero();
        c.0[self.e_offset() + i - 1] = 1;
        c
    }

    /// The fiber class `T` of a ruled model.
    pub fn fiber(&self) -> Option<DivisorClass> {
        self.is_ruled().then(|| {
            let mut c = self.zero();
            c.0[1] = 1;
            c
        })
    }

    /// The section class `U` of a ruled model.
    pub fn section(&self) -> Option<DivisorClass> {
        self.is_ruled().then(|| {
            let mut c = self.zero();
            c.0[0] = 1;
            c
        })
    }

    /// Builds a class from coefficients, checking the rank.
    pub fn class(&self, coefficients: Vec<i64>) -> Result<DivisorClass> {
        self.check(&DivisorClass(coefficients)).cloned()
    }

    /// Builds a class, panicking on a rank mismatch. Convenience for fixtures.
    pub fn class_unchecked(&self, coefficients: &[i64]) -> DivisorClass {
        assert_eq!(coefficients.len(), self.rank(), "rank mismatch");
        DivisorClass(coefficients.to_vec())
    }

    pub fn check<'a>(&self, e: &'a DivisorClass) -> Result<&'a DivisorClass> {
        if e.len() != self.rank() {
            return Err(CurveError::Dimension {
                expected: self.rank(),
                found: e.len(),
            });
        }
        Ok(e)
    }

    /// The intersection pairing `e1ᵀ · gram · e2`.
    pub fn pair(&self, e1: &DivisorClass, e2: &DivisorClass) -> Result<i64> {
        self.check(e1)?;
        self.check(e2)?;
        let overflow = || CurveError::Overflow("intersection pairing");
        let mut acc: i128 = 0;
        for (i, row) in self.gram.iter().enumerate() {
            if e1.0[i] == 0 {
                continue;
            }
            for (j, &g) in row.iter().enumerate() {
                if g == 0 || e2.0[j] == 0 {
                    continue;
                }
                let term = i128::from(e1.0[i])
                    .checked_mul(i128::from(e2.0[j]))
                    .and_then(|t| t.checked_mul(i128::from(g)))
                    .ok_or_else(overflow)?;
                acc = acc.checked_add(term).ok_or_else(overflow)?;
            }
        }
        i64::try_from(acc).map_err(|_| overflow())
    }

    pub fn square(&self, e: &DivisorClass) -> Result<i64> {
        self.pair(e, e)
    }

    /// `K · e`.
    pub fn k_dot(&self, e: &DivisorClass) -> Result<i64> {
        self.pair(&self.canonical, e)
    }

    /// Counts of positive, negative and zero pivots of the Gram matrix under
    /// rational congruence diagonalization.
    pub fn signature(&self) -> (usize, usize, usize) {
        signature(&self.gram)
    }

    pub fn parse_class(&self, text: &str) -> Result<DivisorClass> {
        parse_class(self, text)
    }

    pub fn format_class(&self, e: &DivisorClass) -> String {
        format_class(self, e)
    }
}

/// Signature of a symmetric integer matrix by congruence diagonalization
/// over the rationals.
pub fn signature(gram: &[Vec<i64>]) -> (usize, usize, usize) {
    let n = gram.len();
    let mut m: Vec<Vec<BigRational>> = gram
        .iter()
        .map(|row| row.iter().map(|&x| BigRational::from_integer(x.into())).collect())
        .collect();
    let (mut pos, mut neg, mut zero) = (0, 0, 0);
    for i in 0..n {
        if m[i][i].is_zero() {
            if let Some(j) = (i + 1..n).find(|&j| !m[j][j].is_zero()) {
                m.swap(i, j);
                for row in m.iter_mut() {
                    row.swap(i, j);
                }
            } else if let Some(j) = (i + 1..n).find(|&j| !m[i][j].is_zero()) {
                // row_i += row_j, col_i += col_j; new diagonal 2 m_ij + m_jj != 0
                for c in 0..n {
                    let v = m[j][c].clone();
                    m[i][c] += v;
                }
                for r in 0..n {
                    let v = m[r][j].clone();
                    m[r][i] += v;
                }
            }
        }
        let pivot = m[i][i].clone();
        if pivot.is_zero() {
            zero += 1;
            continue;
        }
        if pivot.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        // Schur complement; stays symmetric.
        let factors: Vec<BigRational> = (i + 1..n).map(|r| &m[r][i] / &pivot).collect();
        for (fr, r) in factors.iter().zip(i + 1..n) {
            if fr.is_zero() {
                continue;
            }
            for c in i + 1..n {
                let v = fr * &m[i][c];
                m[r][c] -= v;
            }
        }
        for r in i + 1..n {
            m[r][i] = BigRational::zero();
            m[i][r] = BigRational::zero();
        }
    }
    (pos, neg, zero)
}

struct Cursor<'a> {
    chars: Vec<(usize, char)>,
    at: usize,
    source: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(source: &'a str) -> Self {
        Cursor {
            chars: source.char_indices().filter(|(_, c)| !c.is_whitespace()).collect(),
            at: 0,
            source,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.at).map(|&(_, c)| c)
    }

    fn offset(&self) -> usize {
        self.chars.get(self.at).map_or(self.source.len(), |&(o, _)| o)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        self.at += 1;
        c
    }

    fn error(&self, message: impl Into<String>) -> CurveError {
        CurveError::Parse {
            offset: self.offset(),
            message: message.into(),
        }
    }

    fn digits(&mut self) -> Option<String> {
        let mut out = String::new();
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            out.push(c);
            self.at += 1;
        }
        (!out.is_empty()).then_some(out)
    }
}

fn parse_coefficient(digits: &str) -> Result<i64> {
    digits
        .parse::<i64>()
        .map_err(|_| CurveError::Overflow("coefficient literal"))
}

/// Parses `expr := term (("+"|"-") term)*`, `term := [uint] label`.
pub fn parse_class(model: &SurfaceModel, text: &str) -> Result<DivisorClass> {
    let mut cur = Cursor::new(text);
    let mut out = model.zero();
    if cur.peek().is_none() {
        return Err(cur.error("empty class expression"));
    }
    // The zero class formats as "0".
    if cur.chars.len() == 1 && cur.peek() == Some('0') {
        return Ok(out);
    }
    let mut sign = 1i64;
    if cur.peek() == Some('-') {
        cur.bump();
        sign = -1;
    }
    loop {
        let coefficient = match cur.digits() {
            Some(d) => parse_coefficient(&d)?,
            None => 1,
        };
        let label_offset = cur.offset();
        let label = match cur.bump() {
            Some(c @ ('H' | 'U' | 'T' | 'A' | 'B')) => c.to_string(),
            Some('E') => match cur.digits() {
                Some(d) => format!("E{}", d.trim_start_matches('0')),
                None => return Err(cur.error("expected an index after `E`")),
            },
            Some(c) => {
                return Err(CurveError::Parse {
                    offset: label_offset,
                    message: format!("unexpected character `{c}`"),
                })
            }
            None => return Err(cur.error("expected a basis label")),
        };
        let index = model
            .labels
            .iter()
            .position(|l| *l == label)
            .ok_or(CurveError::UnknownLabel(label))?;
        let term = coefficient
            .checked_mul(sign)
            .ok_or(CurveError::Overflow("coefficient literal"))?;
        out.0[index] = out.0[index]
            .checked_add(term)
            .ok_or(CurveError::Overflow("coefficient sum"))?;
        match cur.bump() {
            None => break,
            Some('+') => sign = 1,
            Some('-') => sign = -1,
            Some(c) => {
                cur.at -= 1;
                return Err(cur.error(format!("expected `+` or `-`, found `{c}`")));
            }
        }
    }
    Ok(out)
}

/// Canonical text: basis order, zero terms dropped, unit coefficients
/// omitted, `0` for the zero class.
pub fn format_class(model: &SurfaceModel, e: &DivisorClass) -> String {
    let mut out = String::new();
    for (label, &c) in model.labels.iter().zip(e.coefficients()) {
        if c == 0 {
            continue;
        }
        if out.is_empty() {
            if c < 0 {
                out.push('-');
            }
        } else {
            out.push_str(if c < 0 { " - " } else { " + " });
        }
        let magnitude = c.unsigned_abs();
        if magnitude != 1 {
            out.push_str(&magnitude.to_string());
        }
        out.push_str(label);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn pair_examples() {
        let m2 = SurfaceModel::rational(2);
        let h = m2.basis("H").unwrap();
        assert_eq!(m2.pair(&h, &h).unwrap(), 1);

        let r = SurfaceModel::ruled_trivial(1, 0).unwrap();
        let (u, t) = (r.section().unwrap(), r.fiber().unwrap());
        assert_eq!(r.pair(&u, &t).unwrap(), 1);

        let m8 = SurfaceModel::rational(8);
        let c = m8.parse_class("3H - E1 - E2 - E3 - E4 - E5 - E6 - E7 - E8").unwrap();
        assert_eq!(m8.pair(&c, &c).unwrap(), 1);
    }

    #[test]
    fn pair_errors() {
        let m = SurfaceModel::rational(2);
        let bad = DivisorClass::new(vec![1, 0]);
        assert!(matches!(
            m.pair(&bad, &m.zero()),
            Err(CurveError::Dimension { expected: 3, found: 2 })
        ));
        let big = m.class_unchecked(&[i64::MAX, 0, 0]);
        assert!(matches!(m.pair(&big, &big), Err(CurveError::Overflow(_))));
    }

    #[test]
    fn canonical_presets() {
        let m8 = SurfaceModel::rational(8);
        assert_eq!(
            m8.format_class(m8.canonical_class()),
            "-3H + E1 + E2 + E3 + E4 + E5 + E6 + E7 + E8"
        );
        let n2 = SurfaceModel::ruled_nontrivial(2).unwrap();
        assert_eq!(n2.format_class(n2.canonical_class()), "-2U + 3T");
        let m0 = SurfaceModel::rational(0);
        assert_eq!(m0.format_class(m0.canonical_class()), "-3H");
        let r = SurfaceModel::ruled_trivial(3, 2).unwrap();
        assert_eq!(r.format_class(r.canonical_class()), "-2U + 4T + E1 + E2");
        let s = SurfaceModel::sphere_product();
        assert_eq!(s.format_class(s.canonical_class()), "-2A - 2B");
    }

    #[test]
    fn canonical_square_closed_forms() {
        // K² = 9 - k, 8(1 - h) - k, 8(1 - h) respectively.
        for k in 0..=12 {
            let m = SurfaceModel::rational(k);
            assert_eq!(m.square(m.canonical_class()).unwrap(), 9 - k as i64);
        }
        for h in 1..=6u32 {
            for k in 0..=5 {
                let m = SurfaceModel::ruled_trivial(h, k).unwrap();
                let expected = 8 * (1 - i64::from(h)) - k as i64;
                assert_eq!(m.square(m.canonical_class()).unwrap(), expected);
            }
            let n = SurfaceModel::ruled_nontrivial(h).unwrap();
            assert_eq!(n.square(n.canonical_class()).unwrap(), 8 * (1 - i64::from(h)));
        }
        let s = SurfaceModel::sphere_product();
        assert_eq!(s.square(s.canonical_class()).unwrap(), 8);
    }

    #[test]
    fn signatures_are_hyperbolic() {
        let mut models = vec![SurfaceModel::sphere_product()];
        for k in 0..=10 {
            models.push(SurfaceModel::rational(k));
        }
        for h in 1..=3 {
            models.push(SurfaceModel::ruled_nontrivial(h).unwrap());
            for k in 0..=4 {
                models.push(SurfaceModel::ruled_trivial(h, k).unwrap());
            }
        }
        for m in models {
            assert_eq!(m.signature(), (1, m.rank() - 1, 0), "{}", m.kind());
        }
    }

    #[test]
    fn ruled_models_reject_genus_zero() {
        assert!(SurfaceModel::ruled_trivial(0, 1).is_err());
        assert!(SurfaceModel::ruled_nontrivial(0).is_err());
    }

    #[test]
    fn parse_examples() {
        let m8 = SurfaceModel::rational(8);
        assert_eq!(
            m8.parse_class("3H - E1 - E2 - E3 - E4 - E5 - E6 - E7 - E8").unwrap(),
            m8.class_unchecked(&[3, -1, -1, -1, -1, -1, -1, -1, -1])
        );
        let r = SurfaceModel::ruled_trivial(1, 0).unwrap();
        assert_eq!(r.parse_class("U + 2T").unwrap(), r.class_unchecked(&[1, 2]));
        let m11 = SurfaceModel::rational(11);
        let e = m11
            .parse_class("8H - E1 - 4E2 - 4E3 - 4E4 - 2E5 - 2E6 - 2E7 - E8 - E9 - E10 - E11")
            .unwrap();
        assert_eq!(
            e.coefficients(),
            &[8, -1, -4, -4, -4, -2, -2, -2, -1, -1, -1, -1]
        );
        assert_eq!(m8.parse_class("8H-4E1").unwrap(), m8.class_unchecked(&[8, -4, 0, 0, 0, 0, 0, 0, 0]));
        assert_eq!(m8.parse_class("-H + 2E1").unwrap(), m8.class_unchecked(&[-1, 2, 0, 0, 0, 0, 0, 0, 0]));
        assert_eq!(m8.parse_class("H + H - E1").unwrap(), m8.class_unchecked(&[2, -1, 0, 0, 0, 0, 0, 0, 0]));
        assert_eq!(m8.parse_class("0").unwrap(), m8.zero());
    }

    #[test]
    fn parse_errors() {
        let m2 = SurfaceModel::rational(2);
        assert!(matches!(m2.parse_class("E3"), Err(CurveError::UnknownLabel(l)) if l == "E3"));
        assert!(matches!(m2.parse_class("U"), Err(CurveError::UnknownLabel(_))));
        assert!(matches!(m2.parse_class("H +"), Err(CurveError::Parse { .. })));
        assert!(matches!(m2.parse_class("2"), Err(CurveError::Parse { .. })));
        assert!(matches!(m2.parse_class("H E1"), Err(CurveError::Parse { .. })));
        assert!(matches!(m2.parse_class("E"), Err(CurveError::Parse { .. })));
        assert!(matches!(m2.parse_class(""), Err(CurveError::Parse { .. })));
        assert!(matches!(
            m2.parse_class("99999999999999999999H"),
            Err(CurveError::Overflow(_))
        ));
        assert!(matches!(
            m2.parse_class("9223372036854775807H + H"),
            Err(CurveError::Overflow(_))
        ));
    }

    #[test]
    fn format_examples() {
        let m1 = SurfaceModel::rational(1);
        assert_eq!(m1.format_class(&m1.class_unchecked(&[1, 0])), "H");
        assert_eq!(m1.format_class(&m1.zero()), "0");
        let m2 = SurfaceModel::rational(2);
        assert_eq!(m2.format_class(&m2.class_unchecked(&[0, -1, 1])), "-E1 + E2");
        assert_eq!(m2.format_class(&m2.class_unchecked(&[2, -1, -3])), "2H - E1 - 3E2");
    }

    #[test]
    fn checked_arithmetic() {
        let a = DivisorClass::new(vec![i64::MAX, 0]);
        let b = DivisorClass::new(vec![1, 0]);
        assert!(a.checked_add(&b).is_err());
        assert!(DivisorClass::new(vec![i64::MIN]).checked_neg().is_err());
        assert!(a.checked_add(&DivisorClass::new(vec![1])).is_err());
    }

    fn model_strategy() -> impl Strategy<Value = SurfaceModel> {
        prop_oneof![
            (0usize..10).prop_map(SurfaceModel::rational),
            Just(SurfaceModel::sphere_product()),
            (1u32..5, 0usize..5).prop_map(|(h, k)| SurfaceModel::ruled_trivial(h, k).unwrap()),
            (1u32..5).prop_map(|h| SurfaceModel::ruled_nontrivial(h).unwrap()),
        ]
    }

    fn model_with_classes(n: usize) -> impl Strategy<Value = (SurfaceModel, Vec<DivisorClass>)> {
        model_strategy().prop_flat_map(move |m| {
            let rank = m.rank();
            (
                Just(m),
                proptest::collection::vec(
                    proptest::collection::vec(-1000i64..1000, rank).prop_map(DivisorClass::new),
                    n,
                ),
            )
        })
    }

    proptest! {
        #[test]
        fn pair_is_symmetric_and_bilinear((m, v) in model_with_classes(3), s in -50i64..50) {
            let (a, b, c) = (&v[0], &v[1], &v[2]);
            prop_assert_eq!(m.pair(a, b).unwrap(), m.pair(b, a).unwrap());
            let lhs = m.pair(&a.checked_scale(s).unwrap().checked_add(b).unwrap(), c).unwrap();
            prop_assert_eq!(lhs, s * m.pair(a, c).unwrap() + m.pair(b, c).unwrap());
        }

        #[test]
        fn format_parse_round_trip((m, v) in model_with_classes(1)) {
            let text = m.format_class(&v[0]);
            prop_assert_eq!(m.parse_class(&text).unwrap(), v[0].clone());
        }
    }
}

//! Exact chord–tangent geometry on Weierstrass cubics, conics through five
//! points, and the ninth base point of a pencil of plane cubics.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{CurveError, Result};
use crate::linalg;
use crate::poly::Poly;

fn q(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    BigRational::from_str(t).map_err(|_| CurveError::Parse { offset: 0, message: format!("not an exact rational: {t:?}") })
}

/// Exact square root of a non-negative rational, if it is a square.
pub fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let (n, d) = (r.numer(), r.denom());
    let (sn, sd) = (n.sqrt(), d.sqrt());
    (&sn * &sn == *n && &sd * &sd == *d).then(|| BigRational::new(sn, sd))
}

/// A point of a Weierstrass cubic: affine, or the flex at infinity (0:1:0).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CubicPoint {
    Infinity,
    Affine { x: BigRational, y: BigRational },
}

impl CubicPoint {
    pub fn affine(x: BigRational, y: BigRational) -> Self {
        CubicPoint::Affine { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        CubicPoint::Affine { x: q(x), y: q(y) }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, CubicPoint::Infinity)
    }

    /// Normalized projective coordinates (X:Y:Z).
    pub fn projective(&self) -> [BigRational; 3] {
        match self {
            CubicPoint::Infinity => [q(0), q(1), q(0)],
            CubicPoint::Affine { x, y } => [x.clone(), y.clone(), q(1)],
        }
    }
}

impl fmt::Display for CubicPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CubicPoint::Infinity => write!(f, "infinity"),
            CubicPoint::Affine { x, y } => write!(f, "({x},{y})"),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum PointRepr {
    Named(String),
    Pair([String; 2]),
    Object { x: String, y: String },
}

impl Serialize for CubicPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            CubicPoint::Infinity => PointRepr::Named("infinity".into()),
            CubicPoint::Affine { x, y } => PointRepr::Object { x: x.to_string(), y: y.to_string() },
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CubicPoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let (x, y) = match PointRepr::deserialize(d)? {
            PointRepr::Named(n) if matches!(n.as_str(), "infinity" | "inf" | "O") => {
                return Ok(CubicPoint::Infinity)
            }
            PointRepr::Named(n) => return Err(D::Error::custom(format!("unknown point {n:?}"))),
            PointRepr::Pair([x, y]) | PointRepr::Object { x, y } => (x, y),
        };
        let x = parse_rational(&x).map_err(D::Error::custom)?;
        let y = parse_rational(&y).map_err(D::Error::custom)?;
        Ok(CubicPoint::Affine { x, y })
    }
}

/// y² = x³ + ax + b
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeierstrassCubic {
    a: BigRational,
    b: BigRational,
}

impl WeierstrassCubic {
    pub fn new(a: BigRational, b: BigRational) -> Result<Self> {
        let disc = q(4) * &a * &a * &a + q(27) * &b * &b;
        if disc.is_zero() {
            return Err(CurveError::SingularCurve);
        }
        Ok(WeierstrassCubic { a, b })
    }

    pub fn from_ints(a: i64, b: i64) -> Result<Self> {
        Self::new(q(a), q(b))
    }

    /// Parses `"a,b"`.
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').collect();
        let [a, b] = parts.as_slice() else {
            return Err(CurveError::Parse { offset: 0, message: format!("expected \"a,b\", got {s:?}") });
        };
        Self::new(parse_rational(a)?, parse_rational(b)?)
    }

    pub fn a(&self) -> &BigRational {
        &self.a
    }

    pub fn b(&self) -> &BigRational {
        &self.b
    }

    pub fn discriminant(&self) -> BigRational {
        q(-16) * (q(4) * &self.a * &self.a * &self.a + q(27) * &self.b * &self.b)
    }

    /// x³ + ax + b
    pub fn rhs(&self, x: &BigRational) -> BigRational {
        x * x * x + &self.a * x + &self.b
    }

    fn rhs_poly(&self) -> Poly {
        Poly::new(vec![self.b.clone(), self.a.clone(), q(0), q(1)])
    }

    pub fn contains(&self, p: &CubicPoint) -> bool {
        match p {
            CubicPoint::Infinity => true,
            CubicPoint::Affine { x, y } => y * y == self.rhs(x),
        }
    }

    fn require(&self, p: &CubicPoint) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(CurveError::NotOnCurve(p.to_string()))
        }
    }

    /// Points with x = n/d, |n| ≤ height, 1 ≤ d ≤ height, sorted.
    pub fn points_up_to_height(&self, height: i64) -> Vec<CubicPoint> {
        let mut out = vec![CubicPoint::Infinity];
        for d in 1..=height {
            for n in -height..=height {
                if num_integer::gcd(n, d) != 1 {
                    continue;
                }
                let x = BigRational::new(n.into(), d.into());
                if let Some(y) = rational_sqrt(&self.rhs(&x)) {
                    if !y.is_zero() {
                        out.push(CubicPoint::affine(x.clone(), -y.clone()));
                    }
                    out.push(CubicPoint::affine(x, y));
                }
            }
        }
        out.sort();
        out
    }
}

/// The third intersection of the line through `p` and `q` (the tangent when
/// `p == q`) with the curve.
pub fn third_intersection(curve: &WeierstrassCubic, p: &CubicPoint, q_: &CubicPoint) -> Result<CubicPoint> {
    curve.require(p)?;
    curve.require(q_)?;
    Ok(third_unchecked(curve, p, q_))
}

fn third_unchecked(curve: &WeierstrassCubic, p: &CubicPoint, r: &CubicPoint) -> CubicPoint {
    use CubicPoint::{Affine, Infinity};
    let (x1, y1, x2, y2) = match (p, r) {
        (Infinity, Infinity) => return Infinity,
        (Infinity, Affine { x, y }) | (Affine { x, y }, Infinity) => {
            return CubicPoint::affine(x.clone(), -y.clone())
        }
        (Affine { x: x1, y: y1 }, Affine { x: x2, y: y2 }) => (x1, y1, x2, y2),
    };
    let slope = if x1 != x2 {
        (y2 - y1) / (x2 - x1)
    } else if y1 == y2 && !y1.is_zero() {
        (q(3) * x1 * x1 + &curve.a) / (q(2) * y1)
    } else {
        return Infinity;
    };
    let x3 = &slope * &slope - x1 - x2;
    let y3 = y1 + &slope * (&x3 - x1);
    CubicPoint::affine(x3, y3)
}

/// f₁(p, q) = third(third(p, q), zero).
pub fn add(curve: &WeierstrassCubic, zero: &CubicPoint, p: &CubicPoint, r: &CubicPoint) -> Result<CubicPoint> {
    curve.require(zero)?;
    let t = third_intersection(curve, p, r)?;
    Ok(third_unchecked(curve, &t, zero))
}

/// The inverse of `p` for the law with the given zero.
pub fn negate(curve: &WeierstrassCubic, zero: &CubicPoint, p: &CubicPoint) -> Result<CubicPoint> {
    let tangent = third_intersection(curve, zero, zero)?;
    third_intersection(curve, p, &tangent)
}

/// Folds `add` over the points, starting from `zero`.
pub fn sum(curve: &WeierstrassCubic, zero: &CubicPoint, points: &[CubicPoint]) -> Result<CubicPoint> {
    points.iter().try_fold(zero.clone(), |acc, p| add(curve, zero, &acc, p))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AssociativityReport {
    /// f₁(f₁(p, q), r)
    pub left: CubicPoint,
    /// f₁(p, f₁(q, r))
    pub right: CubicPoint,
    pub equal: bool,
}

pub fn associativity_check(
    curve: &WeierstrassCubic,
    zero: &CubicPoint,
    p: &CubicPoint,
    r: &CubicPoint,
    s: &CubicPoint,
) -> Result<AssociativityReport> {
    let left = add(curve, zero, &add(curve, zero, p, r)?, s)?;
    let right = add(curve, zero, p, &add(curve, zero, r, s)?)?;
    let equal = left == right;
    Ok(AssociativityReport { left, right, equal })
}

/// Ax² + Bxy + Cy² + Dxz + Eyz + Fz², scaled so the first nonzero
/// coefficient is 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneConic {
    coefficients: [BigRational; 6],
}

impl PlaneConic {
    pub fn new(coefficients: [BigRational; 6]) -> Result<Self> {
        let Some(lead) = coefficients.iter().find(|c| !c.is_zero()).cloned() else {
            return Err(CurveError::InvalidConfiguration("conic with all coefficients zero".into()));
        };
        Ok(PlaneConic { coefficients: coefficients.map(|c| c / &lead) })
    }

    pub fn coefficients(&self) -> &[BigRational; 6] {
        &self.coefficients
    }

    fn monomials(p: &[BigRational; 3]) -> [BigRational; 6] {
        let [x, y, z] = p;
        [x * x, x * y, y * y, x * z, y * z, z * z]
    }

    pub fn eval_projective(&self, p: &[BigRational; 3]) -> BigRational {
        Self::monomials(p).iter().zip(&self.coefficients).map(|(m, c)| m * c).sum()
    }

    pub fn contains(&self, p: &CubicPoint) -> bool {
        self.eval_projective(&p.projective()).is_zero()
    }

    /// Rank below 3, i.e. a line pair or a double line.
    pub fn is_degenerate(&self) -> bool {
        let [a, b, c, d, e, f] = &self.coefficients;
        let h = q(1) / q(2);
        let m = vec![
            vec![a.clone(), b * &h, d * &h],
            vec![b * &h, c.clone(), e * &h],
            vec![d * &h, e * &h, f.clone()],
        ];
        linalg::determinant(&m).is_zero()
    }
}

impl Serialize for PlaneConic {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let strings: Vec<String> = self.coefficients.iter().map(ToString::to_string).collect();
        strings.serialize(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConicFit {
    pub conic: PlaneConic,
    pub degenerate: bool,
}

fn check_distinct<T: PartialEq + fmt::Display>(points: &[T]) -> Result<()> {
    for (i, p) in points.iter().enumerate() {
        if let Some(j) = points[..i].iter().position(|r| r == p) {
            return Err(CurveError::DuplicatePoint(format!("points {j} and {i} coincide at {p}")));
        }
    }
    Ok(())
}

pub fn conic_through_five(points: &[CubicPoint; 5]) -> Result<ConicFit> {
    check_distinct(points)?;
    let m: linalg::Matrix =
        points.iter().map(|p| PlaneConic::monomials(&p.projective()).to_vec()).collect();
    let rank = linalg::rank(&m);
    if rank < 5 {
        return Err(CurveError::NonUniqueConic(rank));
    }
    let kernel = linalg::nullspace(&m, 6);
    let v: [BigRational; 6] = kernel[0].clone().try_into().expect("six coefficients");
    let conic = PlaneConic::new(v)?;
    let degenerate = conic.is_degenerate();
    Ok(ConicFit { conic, degenerate })
}

/// f₂⁻: the remaining point where the conic meets the curve.
pub fn sixth_intersection(curve: &WeierstrassCubic, conic: &PlaneConic, five: &[CubicPoint; 5]) -> Result<CubicPoint> {
    for p in five {
        curve.require(p)?;
        if !conic.contains(p) {
            return Err(CurveError::Precondition(format!("conic does not pass through {p}")));
        }
    }
    // On the curve the conic reads P(x) + y·L(x) once y² is replaced by f(x).
    let [a, b, c, d, e, f] = conic.coefficients().clone();
    let rhs = curve.rhs_poly();
    let p_poly = &Poly::new(vec![f, d, a]) + &rhs.scale(&c);
    let l_poly = Poly::new(vec![e, b]);
    let norm = &(&p_poly * &p_poly) - &(&rhs * &(&l_poly * &l_poly));
    if norm.is_zero() {
        return Err(CurveError::ComponentOverlap);
    }
    let mut rest = norm;
    for p in five {
        if let CubicPoint::Affine { x, .. } = p {
            let (quot, rem) = rest.div_rem(&Poly::linear(x));
            if !rem.is_zero() {
                return Err(CurveError::Precondition(format!("intersection multiplicity at {p} is too small")));
            }
            rest = quot;
        }
    }
    let sixth = match rest.degree() {
        Some(0) => CubicPoint::Infinity,
        Some(1) => {
            let x = -rest.coeff(0) / rest.coeff(1);
            let lx = l_poly.eval(&x);
            if !lx.is_zero() {
                CubicPoint::affine(x.clone(), -p_poly.eval(&x) / lx)
            } else if curve.rhs(&x).is_zero() {
                CubicPoint::affine(x, q(0))
            } else {
                // Both (x, ±y) lie on the conic: the sixth is the one whose
                // multiplicity is not used up by the listed points.
                let y = five
                    .iter()
                    .find_map(|p| match p {
                        CubicPoint::Affine { x: px, y } if *px == x => Some(y.clone()),
                        _ => None,
                    })
                    .ok_or(CurveError::ComponentOverlap)?;
                let listed = |y: &BigRational| five.iter().filter(|p| **p == CubicPoint::affine(x.clone(), y.clone())).count();
                let m = branch_multiplicity(curve, &p_poly, &l_poly, &x, &y);
                CubicPoint::affine(x.clone(), if m > listed(&y) { y } else { -y })
            }
        }
        _ => return Err(CurveError::Precondition("intersection count does not close up to six".into())),
    };
    debug_assert!(curve.contains(&sixth) && conic.contains(&sixth));
    Ok(sixth)
}

/// Order of vanishing of `P + yL` along the branch of the curve through
/// `(x0, y0)`, `y0 ≠ 0`, from the power series of `y` in `t = x - x0`.
fn branch_multiplicity(curve: &WeierstrassCubic, p: &Poly, l: &Poly, x0: &BigRational, y0: &BigRational) -> usize {
    const ORDER: usize = 8;
    let f = curve.rhs_poly().shift(x0);
    let mut y = vec![y0.clone()];
    for n in 1..ORDER {
        let cross: BigRational = (1..n).map(|i| &y[i] * &y[n - i]).sum();
        y.push((f.coeff(n) - cross) / (q(2) * y0));
    }
    let (ps, ls) = (p.shift(x0), l.shift(x0));
    (0..ORDER)
        .find(|&n| {
            let yl: BigRational = (0..=n).map(|i| &y[i] * ls.coeff(n - i)).sum();
            !(ps.coeff(n) + yl).is_zero()
        })
        .unwrap_or(ORDER)
}

/// Fits the conic through five points and returns it with the sixth point.
pub fn conic_sixth_point(curve: &WeierstrassCubic, five: &[CubicPoint; 5]) -> Result<(ConicFit, CubicPoint)> {
    let fit = conic_through_five(five)?;
    let sixth = sixth_intersection(curve, &fit.conic, five)?;
    Ok((fit, sixth))
}

/// A point of the projective plane, normalized so that its last nonzero
/// coordinate is 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PlanePoint([BigRational; 3]);

impl PlanePoint {
    pub fn new(coords: [BigRational; 3]) -> Result<Self> {
        let Some(last) = coords.iter().rev().find(|c| !c.is_zero()).cloned() else {
            return Err(CurveError::InvalidConfiguration("(0:0:0) is not a point".into()));
        };
        Ok(PlanePoint(coords.map(|c| c / &last)))
    }

    pub fn affine(x: BigRational, y: BigRational) -> Self {
        PlanePoint([x, y, q(1)])
    }

    pub fn coords(&self) -> &[BigRational; 3] {
        &self.0
    }

    fn transform(&self, m: &[[BigRational; 3]; 3]) -> Result<PlanePoint> {
        PlanePoint::new(std::array::from_fn(|i| (0..3).map(|j| &m[i][j] * &self.0[j]).sum()))
    }
}

impl fmt::Display for PlanePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [x, y, z] = &self.0;
        write!(f, "({x}:{y}:{z})")
    }
}

impl Serialize for PlanePoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PlanePoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        let parsed: Vec<BigRational> =
            v.iter().map(|s| parse_rational(s)).collect::<Result<_>>().map_err(D::Error::custom)?;
        match parsed.as_slice() {
            [x, y] => Ok(PlanePoint::affine(x.clone(), y.clone())),
            [x, y, z] => PlanePoint::new([x.clone(), y.clone(), z.clone()]).map_err(D::Error::custom),
            _ => Err(D::Error::custom("a plane point has two or three coordinates")),
        }
    }
}

/// Exponents (i, j, k) of x^i y^j z^k, in the column order of the cubic system.
const CUBIC_MONOMIALS: [(u32, u32, u32); 10] =
    [(3, 0, 0), (2, 1, 0), (2, 0, 1), (1, 2, 0), (1, 1, 1), (1, 0, 2), (0, 3, 0), (0, 2, 1), (0, 1, 2), (0, 0, 3)];

fn cubic_row(p: &[BigRational; 3]) -> Vec<BigRational> {
    CUBIC_MONOMIALS
        .iter()
        .map(|&(i, j, k)| num_traits::pow(p[0].clone(), i as usize) * num_traits::pow(p[1].clone(), j as usize) * num_traits::pow(p[2].clone(), k as usize))
        .collect()
}

pub fn eval_cubic(coefficients: &[BigRational], p: &[BigRational; 3]) -> BigRational {
    cubic_row(p).iter().zip(coefficients).map(|(m, c)| m * c).sum()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NinthPoint {
    pub point: PlanePoint,
    /// Two cubics spanning the pencil through the eight input points.
    #[serde(serialize_with = "ser_pencil")]
    pub pencil: [Vec<BigRational>; 2],
}

fn ser_pencil<S: Serializer>(p: &[Vec<BigRational>; 2], s: S) -> std::result::Result<S::Ok, S::Error> {
    let v: Vec<Vec<String>> = p.iter().map(|c| c.iter().map(ToString::to_string).collect()).collect();
    v.serialize(s)
}

fn pencil_basis(points: &[PlanePoint]) -> Result<[Vec<BigRational>; 2]> {
    let m: linalg::Matrix = points.iter().map(|p| cubic_row(p.coords())).collect();
    let rank = linalg::rank(&m);
    if rank < 8 {
        return Err(CurveError::SpecialPosition(format!("the cubic system has rank {rank} < 8")));
    }
    let mut kernel = linalg::nullspace(&m, 10);
    let g = kernel.pop().expect("two-dimensional kernel");
    let f = kernel.pop().expect("two-dimensional kernel");
    Ok([f, g])
}

/// The cubic on the chart z = 1 as a polynomial in y with coefficients in x.
fn in_y(coefficients: &[BigRational]) -> [Poly; 4] {
    std::array::from_fn(|j| {
        let mut c = vec![q(0); 4];
        for (&(i, jj, _), a) in CUBIC_MONOMIALS.iter().zip(coefficients) {
            if jj as usize == j {
                c[i as usize] += a;
            }
        }
        Poly::new(c)
    })
}

fn eval_in_y(f: &[Poly; 4], x: &BigRational) -> Poly {
    Poly::new(f.iter().map(|p| p.eval(x)).collect())
}

/// Resultant in y of two cubics given by their y-coefficients at a fixed x.
fn sylvester(f: &Poly, g: &Poly) -> BigRational {
    let mut m = vec![vec![q(0); 6]; 6];
    for r in 0..3 {
        for j in 0..4 {
            m[r][r + j] = f.coeff(3 - j);
            m[r + 3][r + j] = g.coeff(3 - j);
        }
    }
    linalg::determinant(&m)
}

fn integer_matrix(rows: [[i64; 3]; 3]) -> [[BigRational; 3]; 3] {
    rows.map(|r| r.map(q))
}

fn inverse3(m: &[[BigRational; 3]; 3]) -> Option<[[BigRational; 3]; 3]> {
    let mat: linalg::Matrix = m.iter().map(|r| r.to_vec()).collect();
    let det = linalg::determinant(&mat);
    if det.is_zero() {
        return None;
    }
    Some(std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let (r0, r1) = ((j + 1) % 3, (j + 2) % 3);
            let (c0, c1) = ((i + 1) % 3, (i + 2) % 3);
            (&m[r0][c0] * &m[r1][c1] - &m[r0][c1] * &m[r1][c0]) / &det
        })
    }))
}

/// Deterministic coordinate changes, identity first.
fn coordinate_changes() -> impl Iterator<Item = [[BigRational; 3]; 3]> {
    (0i64..40).map(|t| {
        if t == 0 {
            return integer_matrix([[1, 0, 0], [0, 1, 0], [0, 0, 1]]);
        }
        integer_matrix([
            [1, t % 5 + 1, (3 * t) % 7 - 3],
            [(2 * t) % 5 - 2, 1, t % 3],
            [(5 * t) % 7 - 3, (t * t) % 5 - 2, 1],
        ])
    })
}

/// Attempts the elimination in one chart; `None` means the chart is not
/// generic enough.
fn ninth_in_chart(points: &[PlanePoint]) -> Result<Option<PlanePoint>> {
    if points.iter().any(|p| p.coords()[2].is_zero()) {
        return Ok(None);
    }
    let [f, g] = pencil_basis(points)?;
    let (fy, gy) = (in_y(&f), in_y(&g));
    if fy[3].degree() != Some(0) || gy[3].degree() != Some(0) {
        return Ok(None);
    }
    let xs: Vec<BigRational> = (0..10).map(q).collect();
    let values: Vec<BigRational> = xs.iter().map(|x| sylvester(&eval_in_y(&fy, x), &eval_in_y(&gy, x))).collect();
    let res = Poly::interpolate(&xs, &values);
    if res.is_zero() {
        return Err(CurveError::SpecialPosition("the pencil has a fixed component".into()));
    }
    if res.degree() != Some(9) {
        return Ok(None);
    }
    let mut rest = res;
    for p in points {
        let (quot, rem) = rest.div_rem(&Poly::linear(&p.coords()[0]));
        if !rem.is_zero() {
            return Ok(None);
        }
        rest = quot;
    }
    let x9 = -rest.coeff(0) / rest.coeff(1);
    let common = eval_in_y(&fy, &x9).gcd(&eval_in_y(&gy, &x9));
    if common.degree() != Some(1) {
        return Ok(None);
    }
    let y9 = -common.coeff(0);
    Ok(Some(PlanePoint::affine(x9, y9)))
}

/// The ninth base point of the pencil of cubics through eight points.
pub fn cayley_bacharach_check(eight: &[PlanePoint; 8]) -> Result<NinthPoint> {
    check_distinct(eight)?;
    let pencil = pencil_basis(eight)?;
    for m in coordinate_changes() {
        let Some(inv) = inverse3(&m) else { continue };
        let moved: Vec<PlanePoint> = eight.iter().map(|p| p.transform(&m)).collect::<Result<_>>()?;
        let Some(found) = ninth_in_chart(&moved)? else { continue };
        let point = found.transform(&inv)?;
        if pencil.iter().all(|c| eval_cubic(c, point.coords()).is_zero()) {
            return Ok(NinthPoint { point, pencil });
        }
    }
    Err(CurveError::SpecialPosition("no generic chart found for the pencil".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: i64, y: i64) -> CubicPoint {
        CubicPoint::from_ints(x, y)
    }

    #[test]
    fn chord_and_tangent_examples() {
        let c = WeierstrassCubic::from_ints(-1, 0).unwrap();
        assert_eq!(third_intersection(&c, &pt(0, 0), &pt(1, 0)).unwrap(), pt(-1, 0));
        assert_eq!(third_intersection(&c, &pt(0, 0), &pt(0, 0)).unwrap(), CubicPoint::Infinity);
        assert_eq!(third_intersection(&c, &pt(1, 0), &CubicPoint::Infinity).unwrap(), pt(1, 0));
        let o = CubicPoint::Infinity;
        assert_eq!(add(&c, &o, &pt(0, 0), &pt(1, 0)).unwrap(), pt(-1, 0));
        assert!(matches!(third_intersection(&c, &pt(2, 1), &pt(0, 0)), Err(CurveError::NotOnCurve(_))));
    }

    #[test]
    fn non_inflection_zero_differs_from_standard_law() {
        let c = WeierstrassCubic::from_ints(-1, 0).unwrap();
        let o = pt(0, 0);
        // the chord map is an involution, so f₁(p, O) = p for any O
        assert_eq!(add(&c, &o, &pt(1, 0), &o).unwrap(), pt(1, 0));
        let standard = add(&c, &CubicPoint::Infinity, &pt(1, 0), &o).unwrap();
        assert_eq!(standard, pt(-1, 0));
        assert_ne!(standard, pt(1, 0));
    }

    #[test]
    fn singular_curve_rejected() {
        assert!(matches!(WeierstrassCubic::from_ints(0, 0), Err(CurveError::SingularCurve)));
        assert!(matches!(WeierstrassCubic::from_ints(-3, 2), Err(CurveError::SingularCurve)));
    }

    #[test]
    fn point_search_finds_known_points() {
        let c = WeierstrassCubic::from_ints(0, 1).unwrap();
        let pts = c.points_up_to_height(6);
        assert_eq!(pts.len(), 6);
        let c = WeierstrassCubic::from_ints(-1, 0).unwrap();
        assert_eq!(c.points_up_to_height(10).len(), 4);
    }

    #[test]
    fn conic_and_sixth_point() {
        let c = WeierstrassCubic::from_ints(0, 17).unwrap();
        let five = [pt(-2, 3), pt(-1, 4), pt(2, 5), pt(8, 23), pt(52, 375)];
        let (fit, sixth) = conic_sixth_point(&c, &five).unwrap();
        assert!(!fit.degenerate);
        for p in &five {
            assert!(fit.conic.contains(p));
        }
        assert!(c.contains(&sixth) && fit.conic.contains(&sixth));
        let mut six = five.to_vec();
        six.push(sixth);
        assert_eq!(sum(&c, &CubicPoint::Infinity, &six).unwrap(), CubicPoint::Infinity);
    }

    #[test]
    fn tangent_conic_through_both_points_over_one_abscissa() {
        let c = WeierstrassCubic::from_ints(0, 17).unwrap();
        let r = CubicPoint::affine(BigRational::new(94.into(), 25.into()), BigRational::new(1047.into(), 125.into()));
        let five = [pt(4, 9), pt(8, -23), pt(2, -5), r, pt(8, 23)];
        let (_, sixth) = conic_sixth_point(&c, &five).unwrap();
        let mut six = five.to_vec();
        six.push(sixth);
        assert_eq!(sum(&c, &CubicPoint::Infinity, &six).unwrap(), CubicPoint::Infinity);
    }

    #[test]
    fn line_pair_conic() {
        let c = WeierstrassCubic::from_ints(0, 17).unwrap();
        let (p, r) = (pt(-2, 3), pt(2, 5));
        let t = third_intersection(&c, &p, &r).unwrap();
        let (s, u) = (pt(8, 23), pt(52, 375));
        let five = [p, r, t, s.clone(), u.clone()];
        let (fit, sixth) = conic_sixth_point(&c, &five).unwrap();
        assert!(fit.degenerate);
        assert_eq!(sixth, third_intersection(&c, &s, &u).unwrap());
    }

    #[test]
    fn duplicate_and_degenerate_inputs() {
        let five = [pt(-2, 3), pt(-2, 3), pt(2, 5), pt(4, 9), pt(8, 23)];
        assert!(matches!(conic_through_five(&five), Err(CurveError::DuplicatePoint(_))));
        let four_on_line = [pt(0, 0), pt(1, 1), pt(2, 2), pt(3, 3), pt(5, 0)];
        assert!(matches!(conic_through_five(&four_on_line), Err(CurveError::NonUniqueConic(4))));
    }

    #[test]
    fn torsion_associativity() {
        let c = WeierstrassCubic::from_ints(-1, 0).unwrap();
        let o = CubicPoint::Infinity;
        let r = associativity_check(&c, &o, &pt(0, 0), &pt(1, 0), &pt(-1, 0)).unwrap();
        assert!(r.equal);
        assert_eq!(r.left, o);
    }

    fn line_meet(l: [i64; 3], m: [i64; 3]) -> PlanePoint {
        let c = [l[1] * m[2] - l[2] * m[1], l[2] * m[0] - l[0] * m[2], l[0] * m[1] - l[1] * m[0]];
        PlanePoint::new(c.map(q)).unwrap()
    }

    #[test]
    fn ninth_point_of_two_line_triples() {
        let ls = [[1, 0, -1], [0, 1, -2], [1, 1, 3]];
        let ms = [[1, -1, 0], [2, 1, -7], [1, 3, 5]];
        let mut nine = Vec::new();
        for l in ls {
            for m in ms {
                nine.push(line_meet(l, m));
            }
        }
        let eight: [PlanePoint; 8] = nine[..8].to_vec().try_into().unwrap();
        let out = cayley_bacharach_check(&eight).unwrap();
        assert_eq!(out.point, nine[8]);
    }

    #[test]
    fn collinear_four_is_special() {
        let pts = [(0, 0), (1, 1), (2, 2), (3, 3), (0, 1), (2, 7), (5, 1), (-1, 4)];
        let eight: [PlanePoint; 8] = pts.map(|(x, y)| PlanePoint::affine(q(x), q(y)));
        assert!(matches!(cayley_bacharach_check(&eight), Err(CurveError::SpecialPosition(_))));
    }

    #[test]
    fn serde_round_trip() {
        let p = CubicPoint::affine(BigRational::new(1.into(), 4.into()), q(-3));
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"x":"1/4","y":"-3"}"#);
        assert_eq!(serde_json::from_str::<CubicPoint>(&s).unwrap(), p);
        assert_eq!(serde_json::from_str::<CubicPoint>(r#"["2","-5"]"#).unwrap(), pt(2, -5));
        assert_eq!(serde_json::from_str::<CubicPoint>(r#""infinity""#).unwrap(), CubicPoint::Infinity);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn pool() -> (WeierstrassCubic, Vec<CubicPoint>) {
            let c = WeierstrassCubic::from_ints(0, 17).unwrap();
            let mut pts = c.points_up_to_height(12);
            let (g1, g2) = (pt(-2, 3), pt(-1, 4));
            let mut acc = g1.clone();
            for _ in 0..3 {
                acc = add(&c, &CubicPoint::Infinity, &acc, &g2).unwrap();
                pts.push(acc.clone());
            }
            (c, pts)
        }

        proptest! {
            #[test]
            fn chord_map_is_symmetric_and_involutive(i in 0usize..64, j in 0usize..64) {
                let (c, pts) = pool();
                let (p, r) = (&pts[i % pts.len()], &pts[j % pts.len()]);
                let t = third_intersection(&c, p, r).unwrap();
                prop_assert!(c.contains(&t));
                prop_assert_eq!(&t, &third_intersection(&c, r, p).unwrap());
                prop_assert_eq!(&third_intersection(&c, &t, r).unwrap(), p);
            }

            #[test]
            fn group_axioms_at_infinity(i in 0usize..64, j in 0usize..64, k in 0usize..64) {
                let (c, pts) = pool();
                let o = CubicPoint::Infinity;
                let n = pts.len();
                let (p, r, s) = (&pts[i % n], &pts[j % n], &pts[k % n]);
                prop_assert_eq!(&add(&c, &o, p, &o).unwrap(), p);
                prop_assert_eq!(add(&c, &o, p, &negate(&c, &o, p).unwrap()).unwrap(), o.clone());
                prop_assert_eq!(add(&c, &o, p, r).unwrap(), add(&c, &o, r, p).unwrap());
                prop_assert!(associativity_check(&c, &o, p, r, s).unwrap().equal);
            }

            #[test]
            fn six_point_sum_vanishes(idx in proptest::sample::subsequence((1usize..24).collect::<Vec<_>>(), 5)) {
                let (c, pts) = pool();
                let o = CubicPoint::Infinity;
                let five: [CubicPoint; 5] = idx.iter().map(|&i| pts[i % pts.len()].clone()).collect::<Vec<_>>().try_into().unwrap();
                prop_assume!(five.iter().all(|p| !p.is_infinity()));
                match conic_sixth_point(&c, &five) {
                    Ok((_, sixth)) => {
                        let mut six = five.to_vec();
                        six.push(sixth);
                        prop_assert_eq!(sum(&c, &o, &six).unwrap(), o);
                    }
                    Err(CurveError::NonUniqueConic(_)) | Err(CurveError::DuplicatePoint(_)) => {}
                    Err(e) => prop_assert!(false, "{e:?}"),
                }
            }
        }
    }
}

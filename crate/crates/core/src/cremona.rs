//! Cremona moves on `CP² # k(-CP²)`: the reflection in `H - E_i - E_j - E_k`
//! and transpositions of exceptional classes. Both fix `K` and preserve the
//! intersection form; together they generate the Weyl group acting on the
//! classes of the blowup.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{CurveError, Result};
use crate::lattice::{DivisorClass, SurfaceModel};

/// Hard cap on reflections in a single reduction; only reachable for
/// non-terminating inputs on `k >= 10`.
pub const MAX_REFLECTIONS: usize = 1_000_000;

/// Default frontier cap for the orbit fallback in [`cremona_equivalent`].
pub const DEFAULT_ORBIT_BOUND: usize = 20_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CremonaMove {
    /// Reflection in `H - E_i - E_j - E_k`, indices 1-based and increasing.
    Reflect(usize, usize, usize),
    /// Transposition of `E_i` and `E_j`.
    SwapE(usize, usize),
}

impl fmt::Display for CremonaMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CremonaMove::Reflect(i, j, k) => write!(f, "Reflect({i},{j},{k})"),
            CremonaMove::SwapE(i, j) => write!(f, "SwapE({i},{j})"),
        }
    }
}

impl CremonaMove {
    fn validate(&self, blowups: usize) -> Result<()> {
        let in_range = |i: usize| i >= 1 && i <= blowups;
        let ok = match *self {
            CremonaMove::Reflect(i, j, k) => i < j && j < k && in_range(i) && in_range(k),
            CremonaMove::SwapE(i, j) => i != j && in_range(i) && in_range(j),
        };
        if ok {
            Ok(())
        } else {
            Err(CurveError::InvalidMove(format!("{self} on {blowups} blowups")))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionTrace {
    pub input: DivisorClass,
    pub moves: Vec<CremonaMove>,
    pub reduced: DivisorClass,
}

impl ReductionTrace {
    pub fn reflections(&self) -> usize {
        self.moves
            .iter()
            .filter(|m| matches!(m, CremonaMove::Reflect(..)))
            .count()
    }
}

fn require_rational(model: &SurfaceModel) -> Result<usize> {
    if !model.is_rational_blowup() {
        return Err(CurveError::WrongModel {
            expected: "a rational blowup".into(),
            found: model.kind().to_string(),
        });
    }
    Ok(model.blowups())
}

/// Applies a move in place on raw coefficients `(a, c_1, .., c_k)` where
/// the class is `aH + Σ c_i E_i`.
fn apply_raw(coefficients: &mut [i64], mv: CremonaMove) -> Result<()> {
    match mv {
        CremonaMove::SwapE(i, j) => coefficients.swap(i, j),
        CremonaMove::Reflect(i, j, k) => {
            let overflow = || CurveError::Overflow("Cremona reflection");
            let (a, ci, cj, ck) = (coefficients[0], coefficients[i], coefficients[j], coefficients[k]);
            // x' = x + (x · r) r with r = H - E_i - E_j - E_k
            let dot = a
                .checked_add(ci)
                .and_then(|s| s.checked_add(cj))
                .and_then(|s| s.checked_add(ck))
                .ok_or_else(overflow)?;
            coefficients[0] = a.checked_add(dot).ok_or_else(overflow)?;
            coefficients[i] = ci.checked_sub(dot).ok_or_else(overflow)?;
            coefficients[j] = cj.checked_sub(dot).ok_or_else(overflow)?;
            coefficients[k] = ck.checked_sub(dot).ok_or_else(overflow)?;
        }
    }
    Ok(())
}

pub fn apply_move(model: &SurfaceModel, e: &DivisorClass, mv: CremonaMove) -> Result<DivisorClass> {
    let k = require_rational(model)?;
    model.check(e)?;
    mv.validate(k)?;
    let mut out = e.clone();
    apply_raw(out.coefficients_mut(), mv)?;
    Ok(out)
}

/// Replays a move list starting from `e`.
pub fn replay(model: &SurfaceModel, e: &DivisorClass, moves: &[CremonaMove]) -> Result<DivisorClass> {
    moves
        .iter()
        .try_fold(e.clone(), |acc, &mv| apply_move(model, &acc, mv))
}

/// Reduces `aH - Σ b_i E_i` by sorting `b` descending (stable, recorded as
/// adjacent transpositions) and reflecting in the top three indices while
/// `b_1 + b_2 + b_3 > a`.
pub fn cremona_reduce(model: &SurfaceModel, e: &DivisorClass) -> Result<ReductionTrace> {
    let k = require_rational(model)?;
    model.check(e)?;
    let mut current = e.clone();
    let mut moves = Vec::new();
    let mut reflections = 0usize;
    loop {
        // b_i = -c_i, so descending b is ascending c.
        let c = current.coefficients_mut();
        for i in 2..=k {
            let mut j = i;
            while j > 1 && c[j - 1] > c[j] {
                c.swap(j - 1, j);
                moves.push(CremonaMove::SwapE(j - 1, j));
                j -= 1;
            }
        }
        if k < 3 {
            break;
        }
        let top = -(c[1] as i128) - (c[2] as i128) - (c[3] as i128);
        if top <= c[0] as i128 {
            break;
        }
        reflections += 1;
        if reflections > MAX_REFLECTIONS {
            return Err(CurveError::ReductionDiverged(MAX_REFLECTIONS));
        }
        let mv = CremonaMove::Reflect(1, 2, 3);
        apply_raw(c, mv)?;
        moves.push(mv);
    }
    Ok(ReductionTrace {
        input: e.clone(),
        moves,
        reduced: current,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum Equivalence {
    /// `witness` maps the first class onto the second.
    Equivalent { witness: Vec<CremonaMove> },
    NotEquivalent { reason: String },
    /// The orbit fallback hit its size bound without deciding.
    Unknown { explored: usize },
}

impl Equivalence {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, Equivalence::Equivalent { .. })
    }
}

/// Decides Cremona equivalence by reduce-and-compare, falling back to a
/// bounded orbit search when the reduced forms differ but `e²` and `K·e`
/// agree.
pub fn cremona_equivalent(
    model: &SurfaceModel,
    e1: &DivisorClass,
    e2: &DivisorClass,
    orbit_bound: usize,
) -> Result<Equivalence> {
    require_rational(model)?;
    let (s1, s2) = (model.square(e1)?, model.square(e2)?);
    if s1 != s2 {
        return Ok(Equivalence::NotEquivalent {
            reason: format!("self-intersections differ ({s1} vs {s2})"),
        });
    }
    let (k1, k2) = (model.k_dot(e1)?, model.k_dot(e2)?);
    if k1 != k2 {
        return Ok(Equivalence::NotEquivalent {
            reason: format!("K-pairings differ ({k1} vs {k2})"),
        });
    }
    let t1 = cremona_reduce(model, e1)?;
    let t2 = cremona_reduce(model, e2)?;
    if t1.reduced == t2.reduced {
        // every move is an involution
        let mut witness = t1.moves;
        witness.extend(t2.moves.iter().rev());
        return Ok(Equivalence::Equivalent { witness });
    }
    orbit_path(model, e1, e2, orbit_bound)
}

fn generators(k: usize) -> Vec<CremonaMove> {
    let mut gens: Vec<CremonaMove> = (1..k).map(|i| CremonaMove::SwapE(i, i + 1)).collect();
    if k >= 3 {
        gens.push(CremonaMove::Reflect(1, 2, 3));
    }
    gens
}

fn orbit_path(
    model: &SurfaceModel,
    from: &DivisorClass,
    to: &DivisorClass,
    bound: usize,
) -> Result<Equivalence> {
    let gens = generators(model.blowups());
    let mut parent: BTreeMap<DivisorClass, Option<(DivisorClass, CremonaMove)>> = BTreeMap::new();
    parent.insert(from.clone(), None);
    let mut queue = VecDeque::from([from.clone()]);
    while let Some(x) = queue.pop_front() {
        if &x == to {
            let mut witness = Vec::new();
            let mut cursor = x;
            while let Some(Some((prev, mv))) = parent.get(&cursor) {
                witness.push(*mv);
                cursor = prev.clone();
            }
            witness.reverse();
            return Ok(Equivalence::Equivalent { witness });
        }
        for &g in &gens {
            let y = apply_move(model, &x, g)?;
            if !parent.contains_key(&y) {
                if parent.len() >= bound {
                    return Ok(Equivalence::Unknown {
                        explored: parent.len(),
                    });
                }
                parent.insert(y.clone(), Some((x.clone(), g)));
                queue.push_back(y);
            }
        }
    }
    Ok(Equivalence::NotEquivalent {
        reason: format!("orbit exhausted after {} classes", parent.len()),
    })
}

/// Closure of `e` under the Weyl generators. Fails with the partial orbit
/// once more than `size_bound` classes have been collected.
pub fn weyl_orbit(model: &SurfaceModel, e: &DivisorClass, size_bound: usize) -> Result<BTreeSet<DivisorClass>> {
    let k = require_rational(model)?;
    model.check(e)?;
    if size_bound == 0 {
        return Err(CurveError::Precondition("size_bound must be positive".into()));
    }
    let gens = generators(k);
    let mut seen = BTreeSet::from([e.clone()]);
    let mut frontier = vec![e.clone()];
    while !frontier.is_empty() {
        let images: Vec<DivisorClass> = frontier
            .par_iter()
            .map(|x| {
                gens.iter()
                    .map(|&g| apply_move(model, x, g))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        let mut next = Vec::new();
        for y in images {
            if seen.insert(y.clone()) {
                next.push(y);
            }
        }
        if seen.len() > size_bound {
            return Err(CurveError::OrbitExceeded {
                bound: size_bound,
                partial_len: seen.len(),
                partial: seen.into_iter().collect(),
            });
        }
        next.sort();
        frontier = next;
    }
    Ok(seen)
}

use std::path::Path;

use curveclass::config::{self, DecompositionConstraints};
use curveclass::cubic::{self, CubicPoint, PlanePoint, WeierstrassCubic};
use curveclass::lattice::SurfaceKind;
use curveclass::nef::{self, SearchBounds};
use curveclass::sw::{self, AxiomSet};
use curveclass::{cremona, enumerate, invariants, DivisorClass, SurfaceModel};
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use crate::cache::Cache;
use crate::error::CliError;
use crate::output::to_value;
use crate::{Cli, Command, CremonaCmd, CubicArgs, CubicCmd, EnumerateCmd, FixturesCmd, NefCmd, SurfaceArg, SwCmd};

type Out = Result<Value, CliError>;

struct Ctx {
    cache: Option<Cache>,
}

impl Ctx {
    fn cached(&self, op: &str, surface: &Value, params: Value, compute: impl FnOnce() -> Out) -> Out {
        match &self.cache {
            Some(c) => c.get_or_compute(op, surface, &params, compute),
            None => compute(),
        }
    }
}

pub fn run(cli: Cli) -> Out {
    if let Some(n) = cli.global.threads {
        if n == 0 {
            return Err(CliError::usage("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(CliError::internal)?;
    }
    if cli.global.verify_cache && cli.global.cache_dir.is_none() {
        return Err(CliError::usage("--verify-cache needs --cache-dir or CURVECLASS_CACHE_DIR"));
    }
    let ctx = Ctx { cache: cli.global.cache_dir.map(|d| Cache::new(d, cli.global.verify_cache)) };
    match cli.command {
        Command::Surface { surface } => {
            let (model, _) = load_surface(&surface, &[])?;
            surface_description(&model)
        }
        Command::Invariants { surface, class } => {
            let (model, _) = load_surface(&surface, &[&class])?;
            let e = model.parse_class(&class)?;
            to_value(&model, &invariants::report(&model, &e)?)
        }
        Command::Enumerate(cmd) => run_enumerate(&ctx, cmd),
        Command::Cremona(cmd) => run_cremona(&ctx, cmd),
        Command::Sw(cmd) => run_sw(cmd),
        Command::Nef(NefCmd::Check { surface, class, pool, bound, tameness_bound }) => {
            let (model, _) = load_surface(&surface, &[&class])?;
            let a = model.parse_class(&class)?;
            let pool = match pool {
                Some(p) => parse_class_list(&model, &read_json_arg(&p)?)?,
                None => Vec::new(),
            };
            let bounds = SearchBounds { coefficient_bound: bound, tameness_bound };
            to_value(&model, &nef::obstruction_search(&model, &a, &pool, bounds)?)
        }
        Command::Decompose { surface, class, pool, connected, all_rational, max_multiplicity } => {
            let (model, _) = load_surface(&surface, &[&class])?;
            let e = model.parse_class(&class)?;
            let pool = parse_class_list(&model, &read_json_arg(&pool)?)?;
            let constraints = DecompositionConstraints { connected, all_rational, max_multiplicity };
            let configs = config::enumerate_decompositions(&model, &e, &pool, constraints)?;
            let entries: Vec<_> = configs.iter().map(|c| c.entries()).collect();
            Ok(json!({
                "target": model.format_class(&e),
                "count": configs.len(),
                "configs": to_value(&model, &entries)?,
            }))
        }
        Command::Fixtures(FixturesCmd::Run) => {
            let report = config::verify_paper_fixtures()?.into_result()?;
            serde_json::to_value(report).map_err(CliError::internal)
        }
        Command::Cubic(cmd) => run_cubic(cmd),
    }
}

fn run_enumerate(ctx: &Ctx, cmd: EnumerateCmd) -> Out {
    match cmd {
        EnumerateCmd::Exceptional { surface, max_degree } => {
            let (model, desc) = load_surface(&surface, &[])?;
            ctx.cached("enumerate.exceptional", &desc, json!({ "max_degree": max_degree }), || {
                let r = enumerate::exceptional_classes(&model, max_degree)?;
                with_count(&model, &r, r.classes.len())
            })
        }
        EnumerateCmd::Roots { surface } => {
            let (model, desc) = load_surface(&surface, &[])?;
            ctx.cached("enumerate.roots", &desc, Value::Null, || {
                let r = enumerate::rational_roots(&model)?;
                with_count(&model, &r, r.classes.len())
            })
        }
        EnumerateCmd::RuledNegative { surface, bound } => {
            let (model, desc) = load_surface(&surface, &[])?;
            ctx.cached("enumerate.ruled_negative", &desc, json!({ "bound": bound }), || {
                let r = enumerate::ruled_negative_rational_classes(&model, bound)?;
                with_count(&model, &r, r.negative.classes.len())
            })
        }
        EnumerateCmd::Spherical { surface, class } => match class {
            None => Ok(json!({ "templates": enumerate::spherical_canonical_forms() })),
            Some(class) => {
                let (model, _) = load_surface(&surface, &[&class])?;
                let e = model.parse_class(&class)?;
                let m = enumerate::match_spherical_canonical_form(&model, &e)?;
                Ok(json!({ "class": model.format_class(&e), "match": to_value(&model, &m)? }))
            }
        },
    }
}

fn with_count<T: serde::Serialize>(model: &SurfaceModel, x: &T, count: usize) -> Out {
    let mut v = to_value(model, x)?;
    v["count"] = json!(count);
    Ok(v)
}

fn run_cremona(ctx: &Ctx, cmd: CremonaCmd) -> Out {
    match cmd {
        CremonaCmd::Reduce { surface, class } => {
            let (model, _) = load_surface(&surface, &[&class])?;
            let e = model.parse_class(&class)?;
            let trace = cremona::cremona_reduce(&model, &e)?;
            let mut v = to_value(&model, &trace)?;
            v["reflections"] = json!(trace.reflections());
            Ok(v)
        }
        CremonaCmd::Equivalent { surface, class_a, class_b, max_size } => {
            let (model, _) = load_surface(&surface, &[&class_a, &class_b])?;
            let (a, b) = (model.parse_class(&class_a)?, model.parse_class(&class_b)?);
            let eq = cremona::cremona_equivalent(&model, &a, &b, max_size)?;
            Ok(json!({
                "class_a": model.format_class(&a),
                "class_b": model.format_class(&b),
                "equivalence": to_value(&model, &eq)?,
            }))
        }
        CremonaCmd::Orbit { surface, class, max_size } => {
            let (model, desc) = load_surface(&surface, &[&class])?;
            let e = model.parse_class(&class)?;
            let params = json!({ "class": model.format_class(&e), "max_size": max_size });
            ctx.cached("cremona.orbit", &desc, params, || {
                let orbit: Vec<DivisorClass> = cremona::weyl_orbit(&model, &e, max_size)?.into_iter().collect();
                Ok(json!({
                    "class": model.format_class(&e),
                    "count": orbit.len(),
                    "orbit": orbit.iter().map(|c| model.format_class(c)).collect::<Vec<_>>(),
                }))
            })
        }
    }
}

#[derive(serde::Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct AxiomsInput {
    #[serde(default)]
    positive_curve_classes: Vec<String>,
    #[serde(default)]
    known_nonzero: Vec<String>,
}

fn run_sw(cmd: SwCmd) -> Out {
    match cmd {
        SwCmd::Deduce { surface, targets, axioms } => {
            let targets = read_json_arg(&targets)?;
            let axioms: AxiomsInput = match axioms {
                Some(a) => decode(read_json_arg(&a)?)?,
                None => AxiomsInput::default(),
            };
            let target_texts: Vec<String> = decode(targets.clone())?;
            let mut texts: Vec<&str> = target_texts.iter().map(String::as_str).collect();
            texts.extend(axioms.positive_curve_classes.iter().map(String::as_str));
            texts.extend(axioms.known_nonzero.iter().map(String::as_str));
            let (model, _) = load_surface(&surface, &texts)?;
            let targets = parse_class_list(&model, &targets)?;
            let parse_all = |v: &[String]| v.iter().map(|s| model.parse_class(s)).collect::<curveclass::Result<Vec<_>>>();
            let axioms = AxiomSet {
                positive_curve_classes: parse_all(&axioms.positive_curve_classes)?,
                known_nonzero: parse_all(&axioms.known_nonzero)?,
            };
            to_value(&model, &sw::deduce(&model, &targets, &axioms)?)
        }
        SwCmd::WallCrossing { surface, class } => {
            let (model, _) = load_surface(&surface, &[&class])?;
            let e = model.parse_class(&class)?;
            let general = sw::general_wall_crossing(&model, &e)?;
            let number = match sw::wall_crossing_number(&model, &e) {
                Ok(n) => json!(n),
                Err(curveclass::CurveError::FormulaInapplicable(_)) => Value::Null,
                Err(e) => return Err(e.into()),
            };
            Ok(json!({
                "class": model.format_class(&e),
                "wall_crossing_number": number,
                "general": to_value(&model, &general)?,
            }))
        }
    }
}

fn run_cubic(cmd: CubicCmd) -> Out {
    match cmd {
        CubicCmd::Cb { points } => {
            let pts: Vec<PlanePoint> = decode(numbers_to_strings(read_json_arg(&points)?))?;
            let eight: [PlanePoint; 8] = pts
                .try_into()
                .map_err(|v: Vec<PlanePoint>| CliError::usage(format!("cb needs exactly 8 points, got {}", v.len())))?;
            value(&cubic::cayley_bacharach_check(&eight)?)
        }
        CubicCmd::Third(a) => {
            let (curve, pts, _) = cubic_inputs(&a)?;
            let [p, q] = exactly::<2>(pts)?;
            value(&cubic::third_intersection(&curve, &p, &q)?)
        }
        CubicCmd::Add(a) => {
            let (curve, pts, zero) = cubic_inputs(&a)?;
            let [p, q] = exactly::<2>(pts)?;
            value(&cubic::add(&curve, &zero, &p, &q)?)
        }
        CubicCmd::Assoc(a) => {
            let (curve, pts, zero) = cubic_inputs(&a)?;
            let [p, q, r] = exactly::<3>(pts)?;
            value(&cubic::associativity_check(&curve, &zero, &p, &q, &r)?)
        }
        CubicCmd::Conic6(a) => {
            let (curve, pts, zero) = cubic_inputs(&a)?;
            let five = exactly::<5>(pts)?;
            let (fit, sixth) = cubic::conic_sixth_point(&curve, &five)?;
            let mut six = five.to_vec();
            six.push(sixth.clone());
            let total = cubic::sum(&curve, &zero, &six)?;
            Ok(json!({
                "conic": fit.conic,
                "degenerate": fit.degenerate,
                "sixth": sixth,
                "sum": total,
                "sum_is_zero": total == zero,
            }))
        }
    }
}

fn value<T: serde::Serialize>(x: &T) -> Out {
    serde_json::to_value(x).map_err(CliError::internal)
}

fn cubic_inputs(a: &CubicArgs) -> Result<(WeierstrassCubic, Vec<CubicPoint>, CubicPoint), CliError> {
    let curve = WeierstrassCubic::parse(&a.curve)?;
    let pts: Vec<CubicPoint> = decode(numbers_to_strings(read_json_arg(&a.points)?))?;
    let zero = match &a.zero {
        Some(z) => decode(numbers_to_strings(read_json_arg(z)?))?,
        None => CubicPoint::Infinity,
    };
    Ok((curve, pts, zero))
}

fn exactly<const N: usize>(pts: Vec<CubicPoint>) -> Result<[CubicPoint; N], CliError> {
    pts.try_into().map_err(|v: Vec<CubicPoint>| CliError::usage(format!("expected {N} points, got {}", v.len())))
}

/// Accepts integers where exact rational strings are expected.
fn numbers_to_strings(v: Value) -> Value {
    match v {
        Value::Number(n) => Value::String(n.to_string()),
        Value::Array(items) => Value::Array(items.into_iter().map(numbers_to_strings).collect()),
        Value::Object(m) => Value::Object(m.into_iter().map(|(k, v)| (k, numbers_to_strings(v))).collect()),
        other => other,
    }
}

fn decode<T: DeserializeOwned>(v: Value) -> Result<T, CliError> {
    serde_json::from_value(v).map_err(|e| CliError::new("Parse", e.to_string()))
}

/// Inline JSON, or the path of a file containing JSON.
fn read_json_arg(arg: &str) -> Result<Value, CliError> {
    let t = arg.trim();
    let text = if t.starts_with(['{', '[', '"']) {
        t.to_string()
    } else {
        let path = Path::new(t);
        std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?
    };
    serde_json::from_str(&text).map_err(|e| CliError::new("Parse", format!("invalid JSON: {e}")))
}

fn parse_class_list(model: &SurfaceModel, v: &Value) -> Result<Vec<DivisorClass>, CliError> {
    let texts: Vec<String> = decode(v.clone())?;
    Ok(texts.iter().map(|s| model.parse_class(s)).collect::<curveclass::Result<_>>()?)
}

/// Loads `--surface`, or infers `RationalBlowup(k)` from the largest `E`
/// index in the given class expressions.
fn load_surface(arg: &SurfaceArg, classes: &[&str]) -> Result<(SurfaceModel, Value), CliError> {
    let kind: SurfaceKind = match &arg.surface {
        Some(s) => decode(read_json_arg(s)?)?,
        None => {
            if classes.is_empty() {
                return Err(CliError::usage("--surface is required"));
            }
            SurfaceKind::RationalBlowup { k: infer_blowups(classes)? }
        }
    };
    let model = SurfaceModel::new(kind)?;
    let desc = serde_json::to_value(kind).map_err(CliError::internal)?;
    Ok((model, desc))
}

fn infer_blowups(classes: &[&str]) -> Result<usize, CliError> {
    let mut k = 0;
    for text in classes {
        let mut chars = text.char_indices().peekable();
        while let Some((i, c)) = chars.next() {
            if c.is_ascii_alphabetic() {
                let start = i;
                let mut end = i + c.len_utf8();
                while let Some(&(j, d)) = chars.peek() {
                    if !d.is_ascii_alphanumeric() {
                        break;
                    }
                    end = j + d.len_utf8();
                    chars.next();
                }
                let label = &text[start..end];
                match label.strip_prefix('E').map(str::parse::<usize>) {
                    Some(Ok(n)) => k = k.max(n),
                    _ if label == "H" => {}
                    _ => {
                        return Err(CliError::usage(format!(
                            "cannot infer the surface from label `{label}`; pass --surface"
                        )))
                    }
                }
            }
        }
    }
    Ok(k)
}

fn surface_description(model: &SurfaceModel) -> Out {
    let (pos, neg, zero) = model.signature();
    Ok(json!({
        "surface": model.kind(),
        "labels": model.labels(),
        "gram": model.gram(),
        "canonical": model.format_class(model.canonical_class()),
        "signature": { "positive": pos, "negative": neg, "zero": zero },
    }))
}

//! JSON rendering: class vectors become canonical strings, keys stay sorted.

use curveclass::{DivisorClass, SurfaceModel};
use serde::Serialize;
use serde_json::Value;

use crate::error::CliError;

/// Keys whose value is a single class.
const CLASS_KEYS: &[&str] = &["b", "canonical", "class", "input", "reduced", "target", "total", "witness"];

/// Keys whose value is a list of classes.
const CLASS_LIST_KEYS: &[&str] = &[
    "classes",
    "exceptional",
    "known_nonzero",
    "nonnegative_square",
    "orbit",
    "positive_curve_classes",
    "premises",
];

pub fn to_value<T: Serialize>(model: &SurfaceModel, x: &T) -> Result<Value, CliError> {
    let mut v = serde_json::to_value(x).map_err(CliError::internal)?;
    render_classes(model, &mut v);
    Ok(v)
}

fn as_class(model: &SurfaceModel, v: &Value) -> Option<String> {
    let items = v.as_array()?;
    if items.len() != model.rank() {
        return None;
    }
    let coeffs: Option<Vec<i64>> = items.iter().map(Value::as_i64).collect();
    Some(model.format_class(&DivisorClass::new(coeffs?)))
}

/// `{"reflect": [i, j, k]}` becomes `"Reflect(i,j,k)"`, likewise `swap_e`.
fn as_move(v: &Value) -> Option<String> {
    let map = v.as_object().filter(|m| m.len() == 1)?;
    let (name, args) = map.iter().next()?;
    let label = match name.as_str() {
        "reflect" => "Reflect",
        "swap_e" => "SwapE",
        _ => return None,
    };
    let args: Option<Vec<String>> = args.as_array()?.iter().map(|a| a.as_u64().map(|n| n.to_string())).collect();
    Some(format!("{label}({})", args?.join(",")))
}

/// Rewrites integer vectors under known class-valued keys as class strings
/// and Cremona moves as `Reflect(1,2,3)` / `SwapE(1,2)`.
pub fn render_classes(model: &SurfaceModel, v: &mut Value) {
    if let Some(m) = as_move(v) {
        *v = Value::String(m);
        return;
    }
    match v {
        Value::Object(map) => {
            for (k, child) in map.iter_mut() {
                if CLASS_KEYS.contains(&k.as_str()) {
                    if let Some(s) = as_class(model, child) {
                        *child = Value::String(s);
                        continue;
                    }
                }
                if CLASS_LIST_KEYS.contains(&k.as_str()) {
                    if let Value::Array(items) = child {
                        for item in items.iter_mut() {
                            if let Some(s) = as_class(model, item) {
                                *item = Value::String(s);
                            }
                        }
                    }
                }
                render_classes(model, child);
            }
        }
        Value::Array(items) => items.iter_mut().for_each(|c| render_classes(model, c)),
        _ => {}
    }
}

pub fn to_string(v: &Value, indent: usize) -> String {
    if indent == 0 {
        return serde_json::to_string(v).expect("JSON values always serialize");
    }
    let pad = vec![b' '; indent];
    let fmt = serde_json::ser::PrettyFormatter::with_indent(&pad);
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, fmt);
    v.serialize(&mut ser).expect("JSON values always serialize");
    String::from_utf8(out).expect("serde_json emits UTF-8")
}

//! JSON model files and verdict output.
//!
//! BD model: `{"worlds":["w1","w2"], "vplus":{"p":["w1"]}, "vminus":{"p":["w2"]}}`;
//! `"valuation":{"w1":{"p":"T"}}` is accepted as an alternative on input.
//! Kripke model: the BD fields plus `"partitions":{"R1":[["w1","w2"]]}` and
//! `"measures":{"pi1":{"w1":"1/2","w2":"1/2"}}`.
//! Two-layered model: a `"logic"` tag plus either `"measure"` (pr-luk2, 4pr,
//! bel-luk2), `"bel"` and `"pl"` (bel-nluk), or the Kripke fields.

use crate::bd::{BDModel, FourValue, WSet};
use crate::decide::{Verdict, Witness};
use crate::kripke::KripkeModel;
use crate::measures::{measure_from_json, measure_to_json, Measure};
use crate::rat::{parse_rat, show, Rat};
use crate::syntax::LogicId;
use crate::two_layered::{Structure, TLModel};
use serde_json::{json, Map, Value};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{0}: {1}")]
    File(String, std::io::Error),
    #[error("JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("model file: {0}")]
    Format(String),
    #[error(transparent)]
    Model(#[from] crate::two_layered::TLError),
}

type IResult<T> = Result<T, IoError>;

fn fmt_err(msg: impl Into<String>) -> IoError {
    IoError::Format(msg.into())
}

pub fn read_json(path: &Path) -> IResult<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| IoError::File(path.display().to_string(), e))?;
    Ok(serde_json::from_str(&text)?)
}

fn world_set(worlds: &[String], v: &Value) -> IResult<WSet> {
    let arr = v.as_array().ok_or_else(|| fmt_err("world list expected"))?;
    let mut s = WSet::empty(worlds.len());
    for w in arr {
        let name = w.as_str().ok_or_else(|| fmt_err("world names are strings"))?;
        let i = worlds.iter().position(|x| x == name).ok_or_else(|| fmt_err(format!("unknown world `{name}`")))?;
        s.insert(i);
    }
    Ok(s)
}

fn names_of(worlds: &[String], s: &WSet) -> Value {
    Value::Array(s.iter().map(|i| Value::String(worlds[i].clone())).collect())
}

pub fn bd_model_from_json(v: &Value) -> IResult<BDModel> {
    let worlds: Vec<String> = v
        .get("worlds")
        .and_then(Value::as_array)
        .ok_or_else(|| fmt_err("missing \"worlds\""))?
        .iter()
        .map(|w| w.as_str().map(str::to_string).ok_or_else(|| fmt_err("world names are strings")))
        .collect::<IResult<_>>()?;
    if worlds.is_empty() {
        return Err(fmt_err("no worlds"));
    }
    for (i, w) in worlds.iter().enumerate() {
        if worlds[..i].contains(w) {
            return Err(fmt_err(format!("duplicate world `{w}`")));
        }
    }
    let mut m = BDModel::new(worlds.clone());
    for (key, plus) in [("vplus", true), ("vminus", false)] {
        let Some(obj) = v.get(key) else { continue };
        let obj = obj.as_object().ok_or_else(|| fmt_err(format!("\"{key}\" must be an object")))?;
        for (p, ws) in obj {
            let s = world_set(&worlds, ws)?;
            let map = if plus { &mut m.vplus } else { &mut m.vminus };
            map.insert(p.clone(), s);
        }
    }
    if let Some(val) = v.get("valuation") {
        let obj = val.as_object().ok_or_else(|| fmt_err("\"valuation\" must be an object"))?;
        for (w, ps) in obj {
            let i = m.world_index(w).ok_or_else(|| fmt_err(format!("unknown world `{w}`")))?;
            for (p, x) in ps.as_object().ok_or_else(|| fmt_err("valuation rows are objects"))? {
                let fv = match x.as_str() {
                    Some("T") => FourValue::T,
                    Some("B") => FourValue::B,
                    Some("N") => FourValue::N,
                    Some("F") => FourValue::F,
                    _ => return Err(fmt_err(format!("value of `{p}` at `{w}` must be T, B, N or F"))),
                };
                m.set(p, i, fv);
            }
        }
    }
    for p in m.vars() {
        m.vplus.entry(p.clone()).or_insert_with(|| WSet::empty(worlds.len()));
        m.vminus.entry(p).or_insert_with(|| WSet::empty(worlds.len()));
    }
    Ok(m)
}

pub fn bd_model_to_json(m: &BDModel) -> Value {
    let sets = |map: &std::collections::BTreeMap<String, WSet>| {
        Value::Object(map.iter().map(|(p, s)| (p.clone(), names_of(&m.worlds, s))).collect::<Map<_, _>>())
    };
    json!({"worlds": m.worlds, "vplus": sets(&m.vplus), "vminus": sets(&m.vminus)})
}

fn rat_value(v: &Value) -> IResult<Rat> {
    match v {
        Value::String(s) => parse_rat(s).map_err(|e| fmt_err(e.to_string())),
        Value::Number(n) => parse_rat(&n.to_string()).map_err(|e| fmt_err(e.to_string())),
        _ => Err(fmt_err("rationals are strings like \"1/3\"")),
    }
}

fn weights_from_json(worlds: &[String], v: &Value) -> IResult<Vec<Rat>> {
    let obj = v.get("atoms").unwrap_or(v).as_object().ok_or_else(|| fmt_err("measure must map worlds to weights"))?;
    let mut out = vec![crate::rat::zero(); worlds.len()];
    for (w, x) in obj {
        let i = worlds.iter().position(|y| y == w).ok_or_else(|| fmt_err(format!("unknown world `{w}`")))?;
        out[i] = rat_value(x)?;
    }
    Ok(out)
}

fn weights_to_json(worlds: &[String], w: &[Rat]) -> Value {
    Value::Object(worlds.iter().zip(w).map(|(k, r)| (k.clone(), Value::String(show(r)))).collect())
}

pub fn kripke_from_json(v: &Value) -> IResult<KripkeModel> {
    let base = bd_model_from_json(v)?;
    let parts = v
        .get("partitions")
        .and_then(Value::as_object)
        .ok_or_else(|| fmt_err("missing \"partitions\""))?;
    let mut partitions = Vec::new();
    for r in 1..=parts.len() {
        let p = parts.get(&format!("R{r}")).ok_or_else(|| fmt_err(format!("partitions must be named R1..R{}", parts.len())))?;
        let blocks = p.as_array().ok_or_else(|| fmt_err("a partition is a list of blocks"))?;
        partitions.push(blocks.iter().map(|b| world_set(&base.worlds, b)).collect::<IResult<Vec<_>>>()?);
    }
    let mut measures = Vec::new();
    if let Some(ms) = v.get("measures") {
        let ms = ms.as_object().ok_or_else(|| fmt_err("\"measures\" must be an object"))?;
        for r in 1..=ms.len() {
            let m = ms.get(&format!("pi{r}")).ok_or_else(|| fmt_err(format!("measures must be named pi1..pi{}", ms.len())))?;
            measures.push(weights_from_json(&base.worlds, m)?);
        }
    }
    KripkeModel::new(base, partitions, measures).map_err(|e| fmt_err(e.to_string()))
}

pub fn kripke_to_json(k: &KripkeModel) -> Value {
    let mut v = bd_model_to_json(&k.base);
    let parts: Map<String, Value> = k
        .partitions
        .iter()
        .enumerate()
        .map(|(r, p)| (format!("R{}", r + 1), Value::Array(p.iter().map(|b| names_of(&k.base.worlds, b)).collect())))
        .collect();
    v["partitions"] = Value::Object(parts);
    if !k.measures.is_empty() {
        let ms: Map<String, Value> = k
            .measures
            .iter()
            .enumerate()
            .map(|(r, w)| (format!("pi{}", r + 1), weights_to_json(&k.base.worlds, w)))
            .collect();
        v["measures"] = Value::Object(ms);
    }
    v
}

fn measure(worlds: &[String], v: &Value, key: &str) -> IResult<Measure> {
    let m = v.get(key).ok_or_else(|| fmt_err(format!("missing \"{key}\"")))?;
    measure_from_json(worlds, m).map_err(|e| fmt_err(e.to_string()))
}

/// Reads a two-layered model; `logic` overrides the file's tag. Measures are audited.
pub fn tl_model_from_json(v: &Value, logic: Option<LogicId>) -> IResult<TLModel> {
    let logic = match (logic, v.get("logic").and_then(Value::as_str)) {
        (Some(l), _) => l,
        (None, Some(s)) => s.parse().map_err(fmt_err)?,
        (None, None) => return Err(fmt_err("missing \"logic\"")),
    };
    let structure = match logic {
        LogicId::ProbS5 | LogicId::ProbNLukS5 => Structure::Kripke(kripke_from_json(v)?),
        LogicId::BelNLuk => {
            let base = bd_model_from_json(v)?;
            let bel = measure(&base.worlds, v, "bel")?;
            let mut pl = measure(&base.worlds, v, "pl")?;
            if let Measure::Belief(m) = pl {
                pl = Measure::Plausibility(m);
            }
            Structure::Measured { base, measures: vec![bel, pl] }
        }
        _ => {
            let base = bd_model_from_json(v)?;
            let mu = measure(&base.worlds, v, "measure")?;
            Structure::Measured { base, measures: vec![mu] }
        }
    };
    Ok(TLModel::new(logic, structure)?)
}

pub fn tl_model_to_json(m: &TLModel) -> Value {
    let mut v = match &m.structure {
        Structure::Kripke(k) => kripke_to_json(k),
        Structure::Measured { base, measures } => {
            let mut v = bd_model_to_json(base);
            if m.logic == LogicId::BelNLuk {
                v["bel"] = measure_to_json(&base.worlds, &measures[0]);
                v["pl"] = measure_to_json(&base.worlds, &measures[1]);
            } else {
                v["measure"] = measure_to_json(&base.worlds, &measures[0]);
            }
            v
        }
    };
    v["logic"] = Value::String(m.logic.name().to_string());
    v
}

pub fn load_tl_model(path: &Path, logic: Option<LogicId>) -> IResult<TLModel> {
    tl_model_from_json(&read_json(path)?, logic)
}

pub fn verdict_to_json(v: &Verdict) -> Value {
    let mut out = json!({
        "verdict": v.status.label(),
        "mode": v.mode.name(),
        "stats": {"branches": v.stats.branches, "systems": v.stats.systems, "columns": v.stats.columns},
    });
    if let Some(c) = &v.countermodel {
        let atoms: Map<String, Value> = c.atoms.iter().map(|(a, x)| (a.clone(), Value::String(x.to_string()))).collect();
        let witness = match &c.witness {
            Witness::Valuation(val) => {
                json!({"valuation": Value::Object(val.iter().map(|(p, x)| (p.clone(), Value::String(x.to_string()))).collect())})
            }
            Witness::Model(m) => tl_model_to_json(m),
        };
        out["countermodel"] = json!({
            "value": c.value.to_string(),
            "branch": c.branch,
            "atoms": atoms,
            "model": witness,
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn round_trips() {
        for logic in [LogicId::PrLuk2, LogicId::FourPr] {
            let m = fixtures::three_worlds(logic);
            let v = tl_model_to_json(&m);
            assert_eq!(tl_model_from_json(&v, None).unwrap(), m);
        }
        let v = json!({
            "logic": "prob-s5",
            "worlds": ["a", "b", "c"],
            "vplus": {"p": ["a"]},
            "vminus": {"p": ["b", "c"]},
            "partitions": {"R1": [["a", "b"], ["c"]]},
            "measures": {"pi1": {"a": "1/2", "b": "1/4", "c": "1/4"}}
        });
        let m = tl_model_from_json(&v, None).unwrap();
        assert_eq!(tl_model_from_json(&tl_model_to_json(&m), None).unwrap(), m);
    }

    #[test]
    fn valuation_form() {
        let v = json!({"worlds": ["w1", "w2"], "valuation": {"w1": {"p": "B"}, "w2": {"p": "N"}}});
        let m = bd_model_from_json(&v).unwrap();
        assert_eq!(m.value("p", 0), FourValue::B);
        assert_eq!(m.value("p", 1), FourValue::N);
        assert_eq!(bd_model_from_json(&bd_model_to_json(&m)).unwrap(), m);
    }
}

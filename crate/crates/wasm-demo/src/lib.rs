//! Browser bindings for three fixcat operations. Every export takes and
//! returns JSON text; the plain functions are usable (and tested) natively.

use std::sync::Arc;

use serde::Serialize;
use wasm_bindgen::prelude::*;

use fixcat::io::{LatticeBody, MonotoneDto};
use fixcat::lattice::{self, FiniteLattice};
use fixcat::rank;
use fixcat::sigma::{self, SigmaObject};

const HOM_CAP: usize = 100_000;

#[derive(Debug, Serialize)]
pub struct Kleene {
    pub value: String,
    pub trace: Vec<String>,
    pub fixed_points: Vec<String>,
}

/// Kleene iteration from ⊥ (or ⊤ when `greatest`) for a lattice
/// `{"elements": [..], "covers": [[lo, hi], ..]}` and a map
/// `"identity" | {"constant": x} | {"table": {x: y, ..}}`.
pub fn kleene(lattice_json: &str, map_json: &str, greatest: bool) -> Result<Kleene, String> {
    let body: LatticeBody = serde_json::from_str(lattice_json).map_err(|e| format!("lattice: {e}"))?;
    let l: Arc<FiniteLattice> = Arc::new(body.build().map_err(|e| e.to_string())?);
    let dto: MonotoneDto = serde_json::from_str(map_json).map_err(|e| format!("map: {e}"))?;
    let f = dto.build(&l).map_err(|e| e.to_string())?;
    let run = if greatest { lattice::gfp(&f) } else { lattice::lfp(&f) };
    let name = |x: usize| l.name(x).to_string();
    Ok(Kleene {
        value: name(run.value),
        trace: run.trace.into_iter().map(name).collect(),
        fixed_points: lattice::all_fixed_points(&f).into_iter().map(name).collect(),
    })
}

#[derive(Debug, Serialize)]
pub struct SigmaHom {
    pub src: String,
    pub tgt: String,
    pub count: usize,
    /// For a source `[k⃗,2]`: per vertex of `Hom(k⃗, tgt)`, arrows ending and starting there.
    pub segal: Option<Vec<(usize, usize)>>,
}

pub fn sigma_hom(src: &str, tgt: &str) -> Result<SigmaHom, String> {
    let s: SigmaObject = src.parse().map_err(|e: fixcat::Error| e.to_string())?;
    let t: SigmaObject = tgt.parse().map_err(|e: fixcat::Error| e.to_string())?;
    let count = sigma::sigma_hom_enumerate(&s, &t, HOM_CAP).map_err(|e| e.to_string())?.len();
    let segal = match s.entries().split_last() {
        Some((2, prefix)) => {
            let k = SigmaObject::new(prefix.to_vec()).map_err(|e| e.to_string())?;
            Some(sigma::segal_terms(&k, &t, HOM_CAP).map_err(|e| e.to_string())?)
        }
        _ => None,
    };
    Ok(SigmaHom { src: s.to_string(), tgt: t.to_string(), count, segal })
}

#[derive(Debug, Serialize)]
pub struct TowerRow {
    pub k: usize,
    pub objects: usize,
    pub depth: usize,
    pub rank: String,
}

/// Ranks of `suspensionᵏ(∅)` for `k ≤ max`, capped at 12.
pub fn rank_tower(max: usize) -> Vec<TowerRow> {
    (0..=max.min(12))
        .map(|k| {
            let x = rank::strictness_witness(k);
            TowerRow { k, objects: x.objects(), depth: x.depth(), rank: x.rank().to_string() }
        })
        .collect()
}

fn to_js<T: Serialize>(r: Result<T, String>) -> Result<String, JsError> {
    let v = r.map_err(|e| JsError::new(&e))?;
    serde_json::to_string(&v).map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen(js_name = kleene)]
pub fn kleene_js(lattice_json: &str, map_json: &str, greatest: bool) -> Result<String, JsError> {
    to_js(kleene(lattice_json, map_json, greatest))
}

#[wasm_bindgen(js_name = sigmaHom)]
pub fn sigma_hom_js(src: &str, tgt: &str) -> Result<String, JsError> {
    to_js(sigma_hom(src, tgt))
}

#[wasm_bindgen(js_name = rankTower)]
pub fn rank_tower_js(max: usize) -> Result<String, JsError> {
    to_js(Ok(rank_tower(max)))
}

//! Exhaustive and sampled property sweeps shared by the CLI and the test suites.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::adamek;
use crate::algebra::{self, Coalgebra, Coalgebras};
use crate::cat::{Budget, Category, Endofunctor, FinMap, FinSet, FinSets};
use crate::error::{Error, Result};
use crate::fixpoint::{self, LocalityProblem, Verdict};

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PfpSweep {
    pub checked: usize,
    /// Lax algebras where exactly one side of the equivalence holds.
    pub mismatches: Vec<String>,
    pub resolution_isos: usize,
}

impl PfpSweep {
    pub fn passes(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Over every lax algebra with apex and carrier at most `max`, compares
/// "the propagation unit is invertible" with "the resolution is invertible".
pub fn pfp_sweep<F>(f: &F, max: usize, cap: usize) -> Result<PfpSweep>
where
    F: Endofunctor<FinSets> + ?Sized,
{
    let mut out = PfpSweep::default();
    for lax in algebra::enumerate_lax_algebras(f, max, cap)? {
        let step = adamek::propagate(&FinSets, f, &lax)?;
        let unit_iso = FinSets.inverse(&step.unit.apex_map).is_some() && FinSets.inverse(&step.unit.carrier_map).is_some();
        let res_iso = FinSets.inverse(&lax.resolution).is_some();
        out.checked += 1;
        if res_iso {
            out.resolution_isos += 1;
        }
        if unit_iso != res_iso {
            out.mismatches.push(format!(
                "apex {} carrier {} resolution {} action {}: unit iso {unit_iso}, resolution iso {res_iso}",
                lax.apex, lax.carrier, lax.resolution, lax.action
            ));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalityCase {
    pub src: Coalgebra<FinSet, FinMap>,
    pub dst: Coalgebra<FinSet, FinMap>,
    pub hom: FinMap,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalitySweep {
    pub seed: u64,
    pub checked: usize,
    /// Cases whose reflections did not settle within the budget.
    pub skipped: usize,
    pub local: usize,
    pub section_disagreements: Vec<LocalityCase>,
    pub lift_contradictions: Vec<LocalityCase>,
    /// Local homs where the lift search found nothing.
    pub lift_inconclusive: usize,
}

impl LocalitySweep {
    pub fn passes(&self) -> bool {
        self.section_disagreements.is_empty() && self.lift_contradictions.is_empty()
    }
}

/// Every coalgebra hom between coalgebras with carrier at most `max_carrier`.
pub fn coalgebra_hom_corpus<F>(f: &F, max_carrier: usize, cap: usize) -> Result<Vec<LocalityCase>>
where
    F: Endofunctor<FinSets> + ?Sized,
{
    let coalgs = algebra::enumerate_coalgebras(f, max_carrier, cap)?;
    let cat = Coalgebras::new(&FinSets, f);
    let mut out = Vec::new();
    for c in &coalgs {
        for d in &coalgs {
            for phi in cat.hom(c, d, cap)? {
                out.push(LocalityCase { src: c.clone(), dst: d.clone(), hom: phi.hom });
            }
        }
    }
    Ok(out)
}

/// Checks the section and lift criteria against the definition on a seeded
/// sample of `samples` homs (all of them when `samples` is zero).
pub fn locality_sweep<F>(f: &F, corpus: &[LocalityCase], samples: usize, seed: u64, budget: &Budget) -> Result<LocalitySweep>
where
    F: Endofunctor<FinSets> + ?Sized,
{
    let mut order: Vec<usize> = (0..corpus.len()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    if samples > 0 {
        order.truncate(samples);
    }
    let mut out = LocalitySweep { seed, ..LocalitySweep::default() };
    for i in order {
        let case = &corpus[i];
        let p = LocalityProblem { hom: case.hom.clone(), src: case.src.clone(), dst: case.dst.clone() };
        let def = match fixpoint::is_f_local(&FinSets, f, &p, budget) {
            Ok(v) => v,
            Err(Error::NotStabilized { .. } | Error::BudgetExceeded(_)) => {
                out.skipped += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        out.checked += 1;
        if def.verdict == Verdict::Local {
            out.local += 1;
        }
        let sec = fixpoint::local_via_section(&FinSets, f, &p, budget)?;
        if sec.verdict != def.verdict {
            out.section_disagreements.push(case.clone());
        }
        let lift = fixpoint::local_via_lift(&FinSets, f, &p, budget)?;
        match (lift.verdict, def.verdict) {
            (Verdict::Local, Verdict::Local) => {}
            (Verdict::Local, _) | (Verdict::NotLocal, Verdict::Local) => out.lift_contradictions.push(case.clone()),
            (_, Verdict::Local) => out.lift_inconclusive += 1,
            _ => {}
        }
    }
    Ok(out)
}

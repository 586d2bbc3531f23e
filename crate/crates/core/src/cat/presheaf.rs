//! Set-valued presheaves on a finite presented index category.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{
    Window,
    Capabilities, Category, Endofunctor, FinMap, FinSet, FinSets, FunctorSpec, HasCoproducts, HasInitial,
    HasPushouts, HasTerminal, PresentedCategory, Pushout, SequentialColimits, Stabilized,
};
use crate::error::{Error, Result};

/// `sets[i] = P(i)`; `restrictions[u] = P(u): P(j) → P(i)` for `u: i → j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presheaf {
    pub sets: Vec<FinSet>,
    pub restrictions: Vec<FinMap>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresheafMap {
    pub src: Presheaf,
    pub dst: Presheaf,
    pub components: Vec<FinMap>,
}

#[derive(Debug, Clone)]
pub struct PresheafCategory {
    index: Arc<PresentedCategory>,
}

impl PresheafCategory {
    pub fn new(index: Arc<PresentedCategory>) -> Self {
        PresheafCategory { index }
    }

    pub fn index(&self) -> &PresentedCategory {
        &self.index
    }

    /// Checks typing and functoriality of the restriction data.
    pub fn presheaf(&self, sets: Vec<FinSet>, restrictions: Vec<FinMap>) -> Result<Presheaf> {
        let ix = &self.index;
        if sets.len() != ix.objects().len() || restrictions.len() != ix.morphisms().len() {
            return Err(Error::IllTyped("presheaf data does not match the index category".into()));
        }
        for (u, m) in ix.morphisms().iter().enumerate() {
            let r = &restrictions[u];
            if r.dom() != &sets[m.tgt] || r.cod() != &sets[m.src] {
                return Err(Error::IllTyped(format!("restriction along {} has the wrong ends", m.name)));
            }
        }
        for x in ix.object_ids() {
            if restrictions[ix.id(&x)] != FinMap::identity(&sets[x]) {
                return Err(Error::IllTyped(format!("identity of {} does not act trivially", ix.objects()[x])));
            }
        }
        for (g, mg) in ix.morphisms().iter().enumerate() {
            for (f, mf) in ix.morphisms().iter().enumerate() {
                if mf.tgt == mg.src {
                    let gf = ix.compose(&g, &f)?;
                    if restrictions[gf] != restrictions[g].then(&restrictions[f])? {
                        return Err(Error::IllTyped(format!("P({} ∘ {}) ≠ P({}) P({})", mg.name, mf.name, mf.name, mg.name)));
                    }
                }
            }
        }
        Ok(Presheaf { sets, restrictions })
    }

    fn natural(&self, src: &Presheaf, dst: &Presheaf, comps: &[FinMap], u: usize) -> Result<bool> {
        let m = &self.index.morphisms()[u];
        Ok(src.restrictions[u].then(&comps[m.src])? == comps[m.tgt].then(&dst.restrictions[u])?)
    }

    pub fn map(&self, src: Presheaf, dst: Presheaf, components: Vec<FinMap>) -> Result<PresheafMap> {
        for u in 0..self.index.morphisms().len() {
            if !self.natural(&src, &dst, &components, u)? {
                return Err(Error::IllTyped(format!("not natural along {}", self.index.morphisms()[u].name)));
            }
        }
        Ok(PresheafMap { src, dst, components })
    }

    /// Restriction maps of a pointwise-built presheaf, induced by `each(u, i, j)`.
    fn assemble(&self, sets: Vec<FinSet>, each: impl Fn(usize) -> Result<FinMap>) -> Result<Presheaf> {
        let restrictions = (0..self.index.morphisms().len()).map(each).collect::<Result<_>>()?;
        Ok(Presheaf { sets, restrictions })
    }
}

impl Category for PresheafCategory {
    type Obj = Presheaf;
    type Mor = PresheafMap;

    fn dom(&self, f: &PresheafMap) -> Presheaf {
        f.src.clone()
    }

    fn cod(&self, f: &PresheafMap) -> Presheaf {
        f.dst.clone()
    }

    fn id(&self, x: &Presheaf) -> PresheafMap {
        PresheafMap { src: x.clone(), dst: x.clone(), components: x.sets.iter().map(FinMap::identity).collect() }
    }

    fn compose(&self, g: &PresheafMap, f: &PresheafMap) -> Result<PresheafMap> {
        if f.dst != g.src {
            return Err(Error::IllTyped("natural transformations are not composable".into()));
        }
        let components = f.components.iter().zip(&g.components).map(|(a, b)| a.then(b)).collect::<Result<_>>()?;
        Ok(PresheafMap { src: f.src.clone(), dst: g.dst.clone(), components })
    }

    fn hom(&self, x: &Presheaf, y: &Presheaf, cap: usize) -> Result<Vec<PresheafMap>> {
        let n = x.sets.len();
        let mut pointwise = Vec::with_capacity(n);
        for i in 0..n {
            pointwise.push(FinSets.hom(&x.sets[i], &y.sets[i], cap)?);
        }
        let mut out = Vec::new();
        let mut chosen: Vec<FinMap> = Vec::with_capacity(n);
        fn go(
            cat: &PresheafCategory,
            x: &Presheaf,
            y: &Presheaf,
            pointwise: &[Vec<FinMap>],
            chosen: &mut Vec<FinMap>,
            out: &mut Vec<PresheafMap>,
            cap: usize,
        ) -> Result<()> {
            let i = chosen.len();
            if i == pointwise.len() {
                if out.len() == cap {
                    return Err(Error::BudgetExceeded(format!("more than {cap} natural transformations")));
                }
                out.push(PresheafMap { src: x.clone(), dst: y.clone(), components: chosen.clone() });
                return Ok(());
            }
            for c in &pointwise[i] {
                chosen.push(c.clone());
                let ok = cat
                    .index
                    .morphisms()
                    .iter()
                    .enumerate()
                    .filter(|(_, m)| m.src.max(m.tgt) == i)
                    .try_fold(true, |acc, (u, _)| Ok::<_, Error>(acc && cat.natural(x, y, chosen, u)?))?;
                if ok {
                    go(cat, x, y, pointwise, chosen, out, cap)?;
                }
                chosen.pop();
            }
            Ok(())
        }
        go(self, x, y, &pointwise, &mut chosen, &mut out, cap)?;
        Ok(out)
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities {
            has_initial: true,
            has_terminal: true,
            has_coproducts: true,
            has_pushouts: true,
            hom_enumerable: true,
            ..Capabilities::default()
        }
    }

    fn size(&self, x: &Presheaf) -> usize {
        x.sets.iter().map(FinSet::len).sum()
    }

    fn inverse(&self, f: &PresheafMap) -> Option<PresheafMap> {
        let components = f.components.iter().map(FinMap::inverse).collect::<Option<_>>()?;
        Some(PresheafMap { src: f.dst.clone(), dst: f.src.clone(), components })
    }

    fn non_iso_witness(&self, f: &PresheafMap) -> String {
        f.components
            .iter()
            .enumerate()
            .find_map(|(i, c)| c.non_bijection_witness().map(|w| format!("at {}: {w}", self.index.objects()[i])))
            .unwrap_or_default()
    }
}

impl HasInitial for PresheafCategory {
    fn initial(&self) -> Presheaf {
        let n = self.index.objects().len();
        let e = FinSet::empty();
        Presheaf { sets: vec![e.clone(); n], restrictions: vec![FinMap::identity(&e); self.index.morphisms().len()] }
    }

    fn from_initial(&self, x: &Presheaf) -> PresheafMap {
        PresheafMap { src: self.initial(), dst: x.clone(), components: x.sets.iter().map(|s| FinSets.from_initial(s)).collect() }
    }
}

impl HasTerminal for PresheafCategory {
    fn terminal(&self) -> Presheaf {
        let n = self.index.objects().len();
        let one = FinSets.terminal();
        Presheaf { sets: vec![one.clone(); n], restrictions: vec![FinMap::identity(&one); self.index.morphisms().len()] }
    }

    fn to_terminal(&self, x: &Presheaf) -> PresheafMap {
        PresheafMap { src: x.clone(), dst: self.terminal(), components: x.sets.iter().map(|s| FinSets.to_terminal(s)).collect() }
    }
}

impl HasCoproducts for PresheafCategory {
    fn coproduct(&self, x: &Presheaf, y: &Presheaf) -> Result<super::Coproduct<Presheaf, PresheafMap>> {
        let parts = x.sets.iter().zip(&y.sets).map(|(a, b)| FinSets.coproduct(a, b)).collect::<Result<Vec<_>>>()?;
        let ms = self.index.morphisms();
        let object = self.assemble(parts.iter().map(|c| c.object.clone()).collect(), |u| {
            let (i, j) = (ms[u].src, ms[u].tgt);
            FinSets.copair(&parts[j], &x.restrictions[u].then(&parts[i].inl)?, &y.restrictions[u].then(&parts[i].inr)?)
        })?;
        Ok(super::Coproduct {
            inl: PresheafMap { src: x.clone(), dst: object.clone(), components: parts.iter().map(|c| c.inl.clone()).collect() },
            inr: PresheafMap { src: y.clone(), dst: object.clone(), components: parts.iter().map(|c| c.inr.clone()).collect() },
            object,
        })
    }

    fn copair(
        &self,
        co: &super::Coproduct<Presheaf, PresheafMap>,
        f: &PresheafMap,
        g: &PresheafMap,
    ) -> Result<PresheafMap> {
        let mut components = Vec::with_capacity(f.components.len());
        for i in 0..f.components.len() {
            let part = super::Coproduct {
                object: co.object.sets[i].clone(),
                inl: co.inl.components[i].clone(),
                inr: co.inr.components[i].clone(),
            };
            components.push(FinSets.copair(&part, &f.components[i], &g.components[i])?);
        }
        Ok(PresheafMap { src: co.object.clone(), dst: f.dst.clone(), components })
    }
}

impl HasPushouts for PresheafCategory {
    fn pushout(&self, r: &PresheafMap, a: &PresheafMap) -> Result<Pushout<Presheaf, PresheafMap>> {
        if r.src != a.src {
            return Err(Error::IllTyped("pushout legs have different sources".into()));
        }
        let parts = r.components.iter().zip(&a.components).map(|(r, a)| FinSets.pushout(r, a)).collect::<Result<Vec<_>>>()?;
        let ms = self.index.morphisms();
        let (x, y) = (&r.dst, &a.dst);
        let object = self.assemble(parts.iter().map(|p| p.object.clone()).collect(), |u| {
            let (i, j) = (ms[u].src, ms[u].tgt);
            FinSets.pushout_mediate(&parts[j], &x.restrictions[u].then(&parts[i].left)?, &y.restrictions[u].then(&parts[i].right)?)
        })?;
        Ok(Pushout {
            left: PresheafMap { src: x.clone(), dst: object.clone(), components: parts.iter().map(|p| p.left.clone()).collect() },
            right: PresheafMap { src: y.clone(), dst: object.clone(), components: parts.iter().map(|p| p.right.clone()).collect() },
            object,
        })
    }

    fn pushout_mediate(&self, po: &Pushout<Presheaf, PresheafMap>, f: &PresheafMap, g: &PresheafMap) -> Result<PresheafMap> {
        let mut components = Vec::with_capacity(f.components.len());
        for i in 0..f.components.len() {
            let part = Pushout {
                object: po.object.sets[i].clone(),
                left: po.left.components[i].clone(),
                right: po.right.components[i].clone(),
            };
            components.push(FinSets.pushout_mediate(&part, &f.components[i], &g.components[i])?);
        }
        Ok(PresheafMap { src: po.object.clone(), dst: f.dst.clone(), components })
    }
}

fn column(links: &[PresheafMap], i: usize) -> Vec<FinMap> {
    links.iter().map(|l| l.components[i].clone()).collect()
}

/// Pointwise colimits; every component must settle at the same stage.
impl SequentialColimits for PresheafCategory {
    fn colimit_settles_at(&self, links: &[PresheafMap], at: Window) -> Result<bool> {
        for i in self.index.object_ids() {
            if !FinSets.colimit_settles_at(&column(links, i), at)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn colimit_at(&self, stages: &[Presheaf], links: &[PresheafMap], at: Window) -> Result<Stabilized<Presheaf, PresheafMap>> {
        let ids = self.index.object_ids();
        let mut parts = Vec::with_capacity(ids.len());
        for &i in &ids {
            let sets: Vec<FinSet> = stages.iter().map(|s| s.sets[i].clone()).collect();
            parts.push(FinSets.colimit_at(&sets, &column(links, i), at)?);
        }
        let ms = self.index.morphisms();
        let object = self.assemble(parts.iter().map(|p| p.object.clone()).collect(), |u| {
            let (i, j) = (ms[u].src, ms[u].tgt);
            FinSets.colimit_mediate(&column(links, j), &parts[j], &|k| stages[k].restrictions[u].then(&parts[i].legs[k]))
        })?;
        let legs = (0..parts[0].legs.len().min(stages.len()))
            .map(|k| PresheafMap {
                src: stages[k].clone(),
                dst: object.clone(),
                components: parts.iter().map(|p| p.legs[k].clone()).collect(),
            })
            .collect();
        Ok(Stabilized { index: at.index, horizon: at.horizon, object, legs })
    }

    fn colimit_mediate(
        &self,
        links: &[PresheafMap],
        colimit: &Stabilized<Presheaf, PresheafMap>,
        cocone: &dyn Fn(usize) -> Result<PresheafMap>,
    ) -> Result<PresheafMap> {
        let mut components = Vec::new();
        for i in self.index.object_ids() {
            let st = Stabilized {
                index: colimit.index,
            horizon: colimit.horizon,
                object: colimit.object.sets[i].clone(),
                legs: colimit.legs.iter().map(|l| l.components[i].clone()).collect(),
            };
            components.push(FinSets.colimit_mediate(&column(links, i), &st, &|k| Ok(cocone(k)?.components[i].clone()))?);
        }
        Ok(PresheafMap { src: colimit.object.clone(), dst: cocone(colimit.index)?.dst, components })
    }
}

/// A finite-sets functor applied objectwise.
pub struct Pointwise(pub FunctorSpec);

impl Endofunctor<PresheafCategory> for Pointwise {
    fn name(&self) -> String {
        format!("pointwise {:?}", self.0)
    }

    fn on_obj(&self, x: &Presheaf) -> Result<Presheaf> {
        Ok(Presheaf {
            sets: x.sets.iter().map(|s| self.0.obj(s)).collect::<Result<_>>()?,
            restrictions: x.restrictions.iter().map(|r| self.0.mor(r)).collect::<Result<_>>()?,
        })
    }

    fn on_mor(&self, f: &PresheafMap) -> Result<PresheafMap> {
        Ok(PresheafMap {
            src: self.on_obj(&f.src)?,
            dst: self.on_obj(&f.dst)?,
            components: f.components.iter().map(|c| self.0.mor(c)).collect::<Result<_>>()?,
        })
    }
}

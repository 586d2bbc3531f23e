//! Undercategories `𝒦_{c/}`.

use serde::{Deserialize, Serialize};

use super::{
    Window,
    Capabilities, Category, Endofunctor, HasInitial, HasPushouts, Pushout, SequentialColimits, Stabilized,
};
use crate::error::{Error, Result};

/// An object `x: c → X` under the anchor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnderObj<O, M> {
    pub obj: O,
    pub point: M,
}

/// A commuting triangle `map ∘ src.point = dst.point`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnderMor<O, M> {
    pub src: UnderObj<O, M>,
    pub dst: UnderObj<O, M>,
    pub map: M,
}

pub type UnderObjOf<C> = UnderObj<<C as Category>::Obj, <C as Category>::Mor>;
pub type UnderMorOf<C> = UnderMor<<C as Category>::Obj, <C as Category>::Mor>;

pub struct UnderCategory<'a, C: Category + ?Sized> {
    pub base: &'a C,
    pub anchor: C::Obj,
}

impl<'a, C: Category + ?Sized> UnderCategory<'a, C> {
    pub fn new(base: &'a C, anchor: C::Obj) -> Self {
        UnderCategory { base, anchor }
    }

    pub fn object(&self, point: C::Mor) -> Result<UnderObjOf<C>> {
        if self.base.dom(&point) != self.anchor {
            return Err(Error::IllTyped("point does not start at the anchor".into()));
        }
        Ok(UnderObj { obj: self.base.cod(&point), point })
    }

    pub fn arrow(&self, src: UnderObjOf<C>, dst: UnderObjOf<C>, map: C::Mor) -> Result<UnderMorOf<C>> {
        if self.base.compose(&map, &src.point)? != dst.point {
            return Err(Error::IllTyped("triangle does not commute".into()));
        }
        Ok(UnderMor { src, dst, map })
    }
}

impl<C: Category + ?Sized> Category for UnderCategory<'_, C> {
    type Obj = UnderObjOf<C>;
    type Mor = UnderMorOf<C>;

    fn dom(&self, f: &Self::Mor) -> Self::Obj {
        f.src.clone()
    }

    fn cod(&self, f: &Self::Mor) -> Self::Obj {
        f.dst.clone()
    }

    fn id(&self, x: &Self::Obj) -> Self::Mor {
        UnderMor { src: x.clone(), dst: x.clone(), map: self.base.id(&x.obj) }
    }

    fn compose(&self, g: &Self::Mor, f: &Self::Mor) -> Result<Self::Mor> {
        if f.dst != g.src {
            return Err(Error::IllTyped("triangles are not composable".into()));
        }
        Ok(UnderMor { src: f.src.clone(), dst: g.dst.clone(), map: self.base.compose(&g.map, &f.map)? })
    }

    fn hom(&self, x: &Self::Obj, y: &Self::Obj, cap: usize) -> Result<Vec<Self::Mor>> {
        let mut out = Vec::new();
        for m in self.base.hom(&x.obj, &y.obj, cap)? {
            if self.base.compose(&m, &x.point)? == y.point {
                out.push(UnderMor { src: x.clone(), dst: y.clone(), map: m });
            }
        }
        Ok(out)
    }

    fn capabilities(&self) -> Capabilities {
        let b = self.base.capabilities();
        Capabilities { has_initial: true, has_pushouts: b.has_pushouts, hom_enumerable: b.hom_enumerable, ..Capabilities::default() }
    }

    fn size(&self, x: &Self::Obj) -> usize {
        self.base.size(&x.obj)
    }

    fn inverse(&self, f: &Self::Mor) -> Option<Self::Mor> {
        Some(UnderMor { src: f.dst.clone(), dst: f.src.clone(), map: self.base.inverse(&f.map)? })
    }

    fn non_iso_witness(&self, f: &Self::Mor) -> String {
        self.base.non_iso_witness(&f.map)
    }
}

impl<C: Category + ?Sized> HasInitial for UnderCategory<'_, C> {
    fn initial(&self) -> Self::Obj {
        UnderObj { obj: self.anchor.clone(), point: self.base.id(&self.anchor) }
    }

    fn from_initial(&self, x: &Self::Obj) -> Self::Mor {
        UnderMor { src: self.initial(), dst: x.clone(), map: x.point.clone() }
    }
}

impl<C: HasPushouts + ?Sized> HasPushouts for UnderCategory<'_, C> {
    fn pushout(&self, r: &Self::Mor, a: &Self::Mor) -> Result<Pushout<Self::Obj, Self::Mor>> {
        let po = self.base.pushout(&r.map, &a.map)?;
        let object = UnderObj { obj: po.object.clone(), point: self.base.compose(&po.left, &r.dst.point)? };
        Ok(Pushout {
            left: UnderMor { src: r.dst.clone(), dst: object.clone(), map: po.left },
            right: UnderMor { src: a.dst.clone(), dst: object.clone(), map: po.right },
            object,
        })
    }

    fn pushout_mediate(&self, po: &Pushout<Self::Obj, Self::Mor>, f: &Self::Mor, g: &Self::Mor) -> Result<Self::Mor> {
        let base_po = Pushout { object: po.object.obj.clone(), left: po.left.map.clone(), right: po.right.map.clone() };
        let map = self.base.pushout_mediate(&base_po, &f.map, &g.map)?;
        Ok(UnderMor { src: po.object.clone(), dst: f.dst.clone(), map })
    }
}

/// Chains under the anchor have their colimit computed in the base.
impl<C: SequentialColimits + ?Sized> SequentialColimits for UnderCategory<'_, C> {
    fn colimit_settles_at(&self, links: &[Self::Mor], at: Window) -> Result<bool> {
        let maps: Vec<C::Mor> = links.iter().map(|l| l.map.clone()).collect();
        self.base.colimit_settles_at(&maps, at)
    }

    fn colimit_at(&self, stages: &[Self::Obj], links: &[Self::Mor], at: Window) -> Result<Stabilized<Self::Obj, Self::Mor>> {
        let maps: Vec<C::Mor> = links.iter().map(|l| l.map.clone()).collect();
        let objs: Vec<C::Obj> = stages.iter().map(|s| s.obj.clone()).collect();
        let st = self.base.colimit_at(&objs, &maps, at)?;
        let object = UnderObj { obj: st.object.clone(), point: self.base.compose(&st.legs[0], &stages[0].point)? };
        let legs = st
            .legs
            .iter()
            .enumerate()
            .map(|(k, leg)| UnderMor { src: stages[k].clone(), dst: object.clone(), map: leg.clone() })
            .collect();
        Ok(Stabilized { index: at.index, horizon: at.horizon, object, legs })
    }

    fn colimit_mediate(
        &self,
        links: &[Self::Mor],
        colimit: &Stabilized<Self::Obj, Self::Mor>,
        cocone: &dyn Fn(usize) -> Result<Self::Mor>,
    ) -> Result<Self::Mor> {
        let maps: Vec<C::Mor> = links.iter().map(|l| l.map.clone()).collect();
        let st = Stabilized {
            index: colimit.index,
            horizon: colimit.horizon,
            object: colimit.object.obj.clone(),
            legs: colimit.legs.iter().map(|l| l.map.clone()).collect(),
        };
        let map = self.base.colimit_mediate(&maps, &st, &|k| Ok(cocone(k)?.map))?;
        Ok(UnderMor { src: colimit.object.clone(), dst: cocone(colimit.index)?.dst, map })
    }
}

/// `F_C(X, x) = (F X, F(x) ∘ ν)` for a coalgebra `ν: C → F C`.
pub struct RelativeFunctor<'a, C: Category + ?Sized, F: ?Sized> {
    pub base: &'a C,
    pub functor: &'a F,
    pub coaction: C::Mor,
}

impl<C, F> Endofunctor<UnderCategory<'_, C>> for RelativeFunctor<'_, C, F>
where
    C: Category + ?Sized,
    F: Endofunctor<C> + ?Sized,
{
    fn name(&self) -> String {
        format!("{} relative to a coalgebra", self.functor.name())
    }

    fn on_obj(&self, x: &UnderObjOf<C>) -> Result<UnderObjOf<C>> {
        Ok(UnderObj {
            obj: self.functor.on_obj(&x.obj)?,
            point: self.base.compose(&self.functor.on_mor(&x.point)?, &self.coaction)?,
        })
    }

    fn on_mor(&self, f: &UnderMorOf<C>) -> Result<UnderMorOf<C>> {
        Ok(UnderMor { src: self.on_obj(&f.src)?, dst: self.on_obj(&f.dst)?, map: self.functor.on_mor(&f.map)? })
    }

    fn preserves_sequential_colimits(&self) -> bool {
        self.functor.preserves_sequential_colimits()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat::{check_category_axioms, FinMap, FinSet, FinSets};

    #[test]
    fn under_empty_set_looks_like_sets() {
        let under = UnderCategory::new(&FinSets, FinSet::empty());
        let objs: Vec<_> = (0..3).map(|n| under.object(FinSets.from_initial(&FinSet::range(n))).unwrap()).collect();
        for x in &objs {
            for y in &objs {
                assert_eq!(under.hom(x, y, 100).unwrap().len(), FinSets.hom(&x.obj, &y.obj, 100).unwrap().len());
            }
        }
        assert!(check_category_axioms(&under, &objs, 100).unwrap().is_empty());
    }

    #[test]
    fn pointed_sets_and_the_initial_object() {
        let one = FinSet::range(1);
        let under = UnderCategory::new(&FinSets, one.clone());
        assert_eq!(under.initial().point, FinMap::identity(&one));
        let two = FinSet::range(2);
        let p0 = under.object(FinMap::new(one.clone(), two.clone(), vec![0]).unwrap()).unwrap();
        let p1 = under.object(FinMap::new(one, two, vec![1]).unwrap()).unwrap();
        // pointed maps 2 → 2 fixing the point
        assert_eq!(under.hom(&p0, &p0, 100).unwrap().len(), 2);
        assert_eq!(under.hom(&p0, &p1, 100).unwrap().len(), 2);
        assert_eq!(under.hom(&under.initial(), &p1, 100).unwrap().len(), 1);
    }
}

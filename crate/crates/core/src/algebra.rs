//! Algebras, coalgebras and lax algebras of an endofunctor, and the
//! categories they form.

use serde::{Deserialize, Serialize};

use crate::cat::{
    Window,
    Capabilities, Category, Endofunctor, FinMap, FinSet, FinSets, HasInitial, SequentialColimits, SequentialLimits,
    Stabilized,
};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Algebra<O, M> {
    pub carrier: O,
    /// `F A → A`.
    pub action: M,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coalgebra<O, M> {
    pub carrier: O,
    /// `C → F C`.
    pub coaction: M,
}

/// A span `F B ←r E →a B`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LaxAlgebra<O, M> {
    pub apex: O,
    pub carrier: O,
    pub resolution: M,
    pub action: M,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LaxHom<M> {
    pub apex_map: M,
    pub carrier_map: M,
}

pub type AlgebraOf<C> = Algebra<<C as Category>::Obj, <C as Category>::Mor>;
pub type CoalgebraOf<C> = Coalgebra<<C as Category>::Obj, <C as Category>::Mor>;
pub type LaxAlgebraOf<C> = LaxAlgebra<<C as Category>::Obj, <C as Category>::Mor>;

fn mismatch(what: impl Into<String>) -> Error {
    Error::FunctorMismatch(what.into())
}

pub fn check_algebra<C, F>(cat: &C, f: &F, alg: &AlgebraOf<C>) -> Result<()>
where
    C: Category + ?Sized,
    F: Endofunctor<C> + ?Sized,
{
    if cat.dom(&alg.action) != f.on_obj(&alg.carrier)? || cat.cod(&alg.action) != alg.carrier {
        return Err(mismatch(format!("action is not a map F(A) → A for {}", f.name())));
    }
    Ok(())
}

pub fn check_coalgebra<C, F>(cat: &C, f: &F, co: &CoalgebraOf<C>) -> Result<()>
where
    C: Category + ?Sized,
    F: Endofunctor<C> + ?Sized,
{
    if cat.dom(&co.coaction) != co.carrier || cat.cod(&co.coaction) != f.on_obj(&co.carrier)? {
        return Err(mismatch(format!("coaction is not a map C → F(C) for {}", f.name())));
    }
    Ok(())
}

pub fn check_lax<C, F>(cat: &C, f: &F, lax: &LaxAlgebraOf<C>) -> Result<()>
where
    C: Category + ?Sized,
    F: Endofunctor<C> + ?Sized,
{
    if cat.dom(&lax.resolution) != lax.apex || cat.dom(&lax.action) != lax.apex {
        return Err(Error::IllTyped("resolution and lax action must share the apex".into()));
    }
    if cat.cod(&lax.resolution) != f.on_obj(&lax.carrier)? {
        return Err(mismatch(format!("resolution does not land in F(B) for {}", f.name())));
    }
    if cat.cod(&lax.action) != lax.carrier {
        return Err(Error::IllTyped("lax action does not land in the carrier".into()));
    }
    Ok(())
}

/// `φ ∘ α = β ∘ F(φ)`.
pub fn is_algebra_hom<C, F>(cat: &C, f: &F, phi: &C::Mor, src: &AlgebraOf<C>, dst: &AlgebraOf<C>) -> Result<bool>
where
    C: Category + ?Sized,
    F: Endofunctor<C> + ?Sized,
{
    check_algebra(cat, f, src)?;
    check_algebra(cat, f, dst)?;
    if cat.dom(phi) != src.carrier || cat.cod(phi) != dst.carrier {
        return Err(Error::IllTyped("homomorphism candidate has the wrong ends".into()));
    }
    Ok(cat.compose(phi, &src.action)? == cat.compose(&dst.action, &f.on_mor(phi)?)?)
}

/// `ψ ∘ φ = F(φ) ∘ ν`.
pub fn is_coalgebra_hom<C, F>(cat: &C, f: &F, phi: &C::Mor, src: &CoalgebraOf<C>, dst: &CoalgebraOf<C>) -> Result<bool>
where
    C: Category + ?Sized,
    F: Endofunctor<C> + ?Sized,
{
    check_coalgebra(cat, f, src)?;
    check_coalgebra(cat, f, dst)?;
    if cat.dom(phi) != src.carrier || cat.cod(phi) != dst.carrier {
        return Err(Error::IllTyped("homomorphism candidate has the wrong ends".into()));
    }
    Ok(cat.compose(&dst.coaction, phi)? == cat.compose(&f.on_mor(phi)?, &src.coaction)?)
}

/// `r′ ∘ e = F(b) ∘ r` and `a′ ∘ e = b ∘ a`.
pub fn is_lax_hom<C, F>(
    cat: &C,
    f: &F,
    h: &LaxHom<C::Mor>,
    src: &LaxAlgebraOf<C>,
    dst: &LaxAlgebraOf<C>,
) -> Result<bool>
where
    C: Category + ?Sized,
    F: Endofunctor<C> + ?Sized,
{
    if cat.dom(&h.apex_map) != src.apex
        || cat.cod(&h.apex_map) != dst.apex
        || cat.dom(&h.carrier_map) != src.carrier
        || cat.cod(&h.carrier_map) != dst.carrier
    {
        return Err(Error::IllTyped("lax homomorphism components have the wrong ends".into()));
    }
    let res = cat.compose(&dst.resolution, &h.apex_map)? == cat.compose(&f.on_mor(&h.carrier_map)?, &src.resolution)?;
    let act = cat.compose(&dst.action, &h.apex_map)? == cat.compose(&h.carrier_map, &src.action)?;
    Ok(res && act)
}

pub fn algebra_homs<C, F>(cat: &C, f: &F, src: &AlgebraOf<C>, dst: &AlgebraOf<C>, cap: usize) -> Result<Vec<C::Mor>>
where
    C: Category + ?Sized,
    F: Endofunctor<C> + ?Sized,
{
    let mut out = Vec::new();
    for phi in cat.hom(&src.carrier, &dst.carrier, cap)? {
        if is_algebra_hom(cat, f, &phi, src, dst)? {
            out.push(phi);
        }
    }
    Ok(out)
}

pub fn coalgebra_homs<C, F>(
    cat: &C,
    f: &F,
    src: &CoalgebraOf<C>,
    dst: &CoalgebraOf<C>,
    cap: usize,
) -> Result<Vec<C::Mor>>
where
    C: Category + ?Sized,
    F: Endofunctor<C> + ?Sized,
{
    let mut out = Vec::new();
    for phi in cat.hom(&src.carrier, &dst.carrier, cap)? {
        if is_coalgebra_hom(cat, f, &phi, src, dst)? {
            out.push(phi);
        }
    }
    Ok(out)
}

pub fn lax_homs<C, F>(
    cat: &C,
    f: &F,
    src: &LaxAlgebraOf<C>,
    dst: &LaxAlgebraOf<C>,
    cap: usize,
) -> Result<Vec<LaxHom<C::Mor>>>
where
    C: Category + ?Sized,
    F: Endofunctor<C> + ?Sized,
{
    let bs = cat.hom(&src.carrier, &dst.carrier, cap)?;
    let es = cat.hom(&src.apex, &dst.apex, cap)?;
    if bs.len().saturating_mul(es.len()) > cap {
        return Err(Error::BudgetExceeded(format!("{} candidate lax homomorphisms", bs.len() * es.len())));
    }
    let mut out = Vec::new();
    for b in &bs {
        let fb_r = cat.compose(&f.on_mor(b)?, &src.resolution)?;
        let b_a = cat.compose(b, &src.action)?;
        for e in &es {
            if cat.compose(&dst.resolution, e)? == fb_r && cat.compose(&dst.action, e)? == b_a {
                out.push(LaxHom { apex_map: e.clone(), carrier_map: b.clone() });
            }
        }
    }
    Ok(out)
}

/// `(A, α) ↦ (F A ←id F A →α A)`.
pub fn embed_to_lax<C, F>(cat: &C, f: &F, alg: &AlgebraOf<C>) -> Result<LaxAlgebraOf<C>>
where
    C: Category + ?Sized,
    F: Endofunctor<C> + ?Sized,
{
    check_algebra(cat, f, alg)?;
    let fa = f.on_obj(&alg.carrier)?;
    Ok(LaxAlgebra { apex: fa.clone(), carrier: alg.carrier.clone(), resolution: cat.id(&fa), action: alg.action.clone() })
}

/// `(F B ←r E →a B) ↦ (B, a ∘ r⁻¹)` for invertible `r`.
pub fn lax_to_algebra<C, F>(cat: &C, f: &F, lax: &LaxAlgebraOf<C>) -> Result<AlgebraOf<C>>
where
    C: Category + ?Sized,
    F: Endofunctor<C> + ?Sized,
{
    check_lax(cat, f, lax)?;
    let inv = cat
        .inverse(&lax.resolution)
        .ok_or_else(|| Error::ResolutionNotInvertible(cat.non_iso_witness(&lax.resolution)))?;
    Ok(Algebra { carrier: lax.carrier.clone(), action: cat.compose(&lax.action, &inv)? })
}

/// `K ↦ (F K ← ∅ → K)`.
pub fn free_lax_on_object<C, F>(cat: &C, f: &F, k: &C::Obj) -> Result<LaxAlgebraOf<C>>
where
    C: HasInitial + ?Sized,
    F: Endofunctor<C> + ?Sized,
{
    if !cat.capabilities().has_initial {
        return Err(Error::CapabilityMissing("initial object"));
    }
    let fk = f.on_obj(k)?;
    Ok(LaxAlgebra {
        apex: cat.initial(),
        carrier: k.clone(),
        resolution: cat.from_initial(&fk),
        action: cat.from_initial(k),
    })
}

/// The coalgebra `(F C, F ν)`.
pub fn apply_to_coalgebra<C, F>(f: &F, co: &CoalgebraOf<C>) -> Result<CoalgebraOf<C>>
where
    C: Category + ?Sized,
    F: Endofunctor<C> + ?Sized,
{
    Ok(Coalgebra { carrier: f.on_obj(&co.carrier)?, coaction: f.on_mor(&co.coaction)? })
}

/// Every algebra on the carriers `{0..n}` for `n ≤ max_carrier`.
pub fn enumerate_algebras<F>(f: &F, max_carrier: usize, cap: usize) -> Result<Vec<Algebra<FinSet, FinMap>>>
where
    F: Endofunctor<FinSets> + ?Sized,
{
    let mut out = Vec::new();
    for n in 0..=max_carrier {
        let a = FinSet::range(n);
        let fa = f.on_obj(&a)?;
        for action in FinSets.hom(&fa, &a, cap)? {
            out.push(Algebra { carrier: a.clone(), action });
        }
    }
    Ok(out)
}

/// Every coalgebra on the carriers `{0..n}` for `n ≤ max_carrier`.
pub fn enumerate_coalgebras<F>(f: &F, max_carrier: usize, cap: usize) -> Result<Vec<Coalgebra<FinSet, FinMap>>>
where
    F: Endofunctor<FinSets> + ?Sized,
{
    let mut out = Vec::new();
    for n in 0..=max_carrier {
        let c = FinSet::range(n);
        let fc = f.on_obj(&c)?;
        for coaction in FinSets.hom(&c, &fc, cap)? {
            out.push(Coalgebra { carrier: c.clone(), coaction });
        }
    }
    Ok(out)
}

/// Every lax algebra with apex and carrier among `{0..n}`, `n ≤ max`.
pub fn enumerate_lax_algebras<F>(f: &F, max: usize, cap: usize) -> Result<Vec<LaxAlgebra<FinSet, FinMap>>>
where
    F: Endofunctor<FinSets> + ?Sized,
{
    let mut out = Vec::new();
    for nb in 0..=max {
        let b = FinSet::range(nb);
        let fb = f.on_obj(&b)?;
        for ne in 0..=max {
            let e = FinSet::range(ne);
            let rs = FinSets.hom(&e, &fb, cap)?;
            let as_ = FinSets.hom(&e, &b, cap)?;
            for r in &rs {
                for a in &as_ {
                    out.push(LaxAlgebra { apex: e.clone(), carrier: b.clone(), resolution: r.clone(), action: a.clone() });
                }
            }
        }
    }
    Ok(out)
}

/// A morphism of a structured category, carrying its endpoints.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arrow<O, H> {
    pub src: O,
    pub dst: O,
    pub hom: H,
}

/// Lax algebras and lax homomorphisms over a base category.
pub struct LaxAlgebras<'a, C: ?Sized, F: ?Sized> {
    pub base: &'a C,
    pub functor: &'a F,
}

pub type LaxArrow<C> = Arrow<LaxAlgebraOf<C>, LaxHom<<C as Category>::Mor>>;

impl<'a, C, F> LaxAlgebras<'a, C, F>
where
    C: Category + ?Sized,
    F: Endofunctor<C> + ?Sized,
{
    pub fn new(base: &'a C, functor: &'a F) -> Self {
        LaxAlgebras { base, functor }
    }

    pub fn arrow(&self, src: LaxAlgebraOf<C>, dst: LaxAlgebraOf<C>, hom: LaxHom<C::Mor>) -> Result<LaxArrow<C>> {
        if !is_lax_hom(self.base, self.functor, &hom, &src, &dst)? {
            return Err(Error::IllTyped("components do not form a lax homomorphism".into()));
        }
        Ok(Arrow { src, dst, hom })
    }
}

impl<C, F> Category for LaxAlgebras<'_, C, F>
where
    C: Category + ?Sized,
    F: Endofunctor<C> + ?Sized,
{
    type Obj = LaxAlgebraOf<C>;
    type Mor = LaxArrow<C>;

    fn dom(&self, f: &Self::Mor) -> Self::Obj {
        f.src.clone()
    }

    fn cod(&self, f: &Self::Mor) -> Self::Obj {
        f.dst.clone()
    }

    fn id(&self, x: &Self::Obj) -> Self::Mor {
        let hom = LaxHom { apex_map: self.base.id(&x.apex), carrier_map: self.base.id(&x.carrier) };
        Arrow { src: x.clone(), dst: x.clone(), hom }
    }

    fn compose(&self, g: &Self::Mor, f: &Self::Mor) -> Result<Self::Mor> {
        if f.dst != g.src {
            return Err(Error::IllTyped("lax homomorphisms are not composable".into()));
        }
        let hom = LaxHom {
            apex_map: self.base.compose(&g.hom.apex_map, &f.hom.apex_map)?,
            carrier_map: self.base.compose(&g.hom.carrier_map, &f.hom.carrier_map)?,
        };
        Ok(Arrow { src: f.src.clone(), dst: g.dst.clone(), hom })
    }

    fn hom(&self, x: &Self::Obj, y: &Self::Obj, cap: usize) -> Result<Vec<Self::Mor>> {
        Ok(lax_homs(self.base, self.functor, x, y, cap)?
            .into_iter()
            .map(|hom| Arrow { src: x.clone(), dst: y.clone(), hom })
            .collect())
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities { hom_enumerable: self.base.capabilities().hom_enumerable, ..Capabilities::default() }
    }

    fn size(&self, x: &Self::Obj) -> usize {
        self.base.size(&x.apex) + self.base.size(&x.carrier)
    }

    fn inverse(&self, f: &Self::Mor) -> Option<Self::Mor> {
        let hom = LaxHom {
            apex_map: self.base.inverse(&f.hom.apex_map)?,
            carrier_map: self.base.inverse(&f.hom.carrier_map)?,
        };
        Some(Arrow { src: f.dst.clone(), dst: f.src.clone(), hom })
    }

    fn non_iso_witness(&self, f: &Self::Mor) -> String {
        if !self.base.is_iso(&f.hom.apex_map) {
            format!("apex component: {}", self.base.non_iso_witness(&f.hom.apex_map))
        } else {
            format!("carrier component: {}", self.base.non_iso_witness(&f.hom.carrier_map))
        }
    }
}

fn column<T: Clone, M>(links: &[T], pick: impl Fn(&T) -> M) -> Vec<M> {
    links.iter().map(pick).collect()
}

/// Colimits of chains of lax algebras, computed on the apex and carrier
/// columns with the resolution induced by the universal property.
impl<C, F> SequentialColimits for LaxAlgebras<'_, C, F>
where
    C: SequentialColimits + ?Sized,
    F: Endofunctor<C> + ?Sized,
{
    fn colimit_settles_at(&self, links: &[Self::Mor], at: Window) -> Result<bool> {
        let es = column(links, |l| l.hom.apex_map.clone());
        let bs = column(links, |l| l.hom.carrier_map.clone());
        Ok(self.base.colimit_settles_at(&es, at)? && self.base.colimit_settles_at(&bs, at)?)
    }

    fn colimit_at(&self, stages: &[Self::Obj], links: &[Self::Mor], at: Window) -> Result<Stabilized<Self::Obj, Self::Mor>> {
        let es = column(links, |l| l.hom.apex_map.clone());
        let bs = column(links, |l| l.hom.carrier_map.clone());
        let e_stages = column(stages, |s| s.apex.clone());
        let b_stages = column(stages, |s| s.carrier.clone());
        let e_inf = self.base.colimit_at(&e_stages, &es, at)?;
        let b_inf = self.base.colimit_at(&b_stages, &bs, at)?;
        let (base, f) = (self.base, self.functor);
        let resolution = base.colimit_mediate(&es, &e_inf, &|k| {
            base.compose(&f.on_mor(&b_inf.legs[k])?, &stages[k].resolution)
        })?;
        let action = base.colimit_mediate(&es, &e_inf, &|k| base.compose(&b_inf.legs[k], &stages[k].action))?;
        let object =
            LaxAlgebra { apex: e_inf.object.clone(), carrier: b_inf.object.clone(), resolution, action };
        let legs = (0..e_inf.legs.len().min(b_inf.legs.len()))
            .map(|k| Arrow {
                src: stages[k].clone(),
                dst: object.clone(),
                hom: LaxHom { apex_map: e_inf.legs[k].clone(), carrier_map: b_inf.legs[k].clone() },
            })
            .collect();
        Ok(Stabilized { index: at.index, horizon: at.horizon, object, legs })
    }

    fn colimit_mediate(
        &self,
        links: &[Self::Mor],
        colimit: &Stabilized<Self::Obj, Self::Mor>,
        cocone: &dyn Fn(usize) -> Result<Self::Mor>,
    ) -> Result<Self::Mor> {
        let es = column(links, |l| l.hom.apex_map.clone());
        let bs = column(links, |l| l.hom.carrier_map.clone());
        let e_st = Stabilized {
            index: colimit.index,
            horizon: colimit.horizon,
            object: colimit.object.apex.clone(),
            legs: colimit.legs.iter().map(|l| l.hom.apex_map.clone()).collect(),
        };
        let b_st = Stabilized {
            index: colimit.index,
            horizon: colimit.horizon,
            object: colimit.object.carrier.clone(),
            legs: colimit.legs.iter().map(|l| l.hom.carrier_map.clone()).collect(),
        };
        let apex_map = self.base.colimit_mediate(&es, &e_st, &|k| Ok(cocone(k)?.hom.apex_map))?;
        let carrier_map = self.base.colimit_mediate(&bs, &b_st, &|k| Ok(cocone(k)?.hom.carrier_map))?;
        let dst = cocone(colimit.index)?.dst;
        Ok(Arrow { src: colimit.object.clone(), dst, hom: LaxHom { apex_map, carrier_map } })
    }
}

/// Coalgebras and their homomorphisms.
pub struct Coalgebras<'a, C: ?Sized, F: ?Sized> {
    pub base: &'a C,
    pub functor: &'a F,
}

pub type CoalgArrow<C> = Arrow<CoalgebraOf<C>, <C as Category>::Mor>;

impl<'a, C: ?Sized, F: ?Sized> Coalgebras<'a, C, F> {
    pub fn new(base: &'a C, functor: &'a F) -> Self {
        Coalgebras { base, functor }
    }
}

impl<C, F> Category for Coalgebras<'_, C, F>
where
    C: Category + ?Sized,
    F: Endofunctor<C> + ?Sized,
{
    type Obj = CoalgebraOf<C>;
    type Mor = CoalgArrow<C>;

    fn dom(&self, f: &Self::Mor) -> Self::Obj {
        f.src.clone()
    }
    fn cod(&self, f: &Self::Mor) -> Self::Obj {
        f.dst.clone()
    }
    fn id(&self, x: &Self::Obj) -> Self::Mor {
        Arrow { src: x.clone(), dst: x.clone(), hom: self.base.id(&x.carrier) }
    }
    fn compose(&self, g: &Self::Mor, f: &Self::Mor) -> Result<Self::Mor> {
        if f.dst != g.src {
            return Err(Error::IllTyped("coalgebra homomorphisms are not composable".into()));
        }
        Ok(Arrow { src: f.src.clone(), dst: g.dst.clone(), hom: self.base.compose(&g.hom, &f.hom)? })
    }
    fn hom(&self, x: &Self::Obj, y: &Self::Obj, cap: usize) -> Result<Vec<Self::Mor>> {
        Ok(coalgebra_homs(self.base, self.functor, x, y, cap)?
            .into_iter()
            .map(|hom| Arrow { src: x.clone(), dst: y.clone(), hom })
            .collect())
    }
    fn capabilities(&self) -> Capabilities {
        Capabilities { hom_enumerable: self.base.capabilities().hom_enumerable, ..Capabilities::default() }
    }
    fn size(&self, x: &Self::Obj) -> usize {
        self.base.size(&x.carrier)
    }
    fn inverse(&self, f: &Self::Mor) -> Option<Self::Mor> {
        Some(Arrow { src: f.dst.clone(), dst: f.src.clone(), hom: self.base.inverse(&f.hom)? })
    }
    fn non_iso_witness(&self, f: &Self::Mor) -> String {
        self.base.non_iso_witness(&f.hom)
    }
}

/// Colimits of coalgebra chains are computed on carriers.
impl<C, F> SequentialColimits for Coalgebras<'_, C, F>
where
    C: SequentialColimits + ?Sized,
    F: Endofunctor<C> + ?Sized,
{
    fn colimit_settles_at(&self, links: &[Self::Mor], at: Window) -> Result<bool> {
        self.base.colimit_settles_at(&column(links, |l| l.hom.clone()), at)
    }

    fn colimit_at(&self, stages: &[Self::Obj], links: &[Self::Mor], at: Window) -> Result<Stabilized<Self::Obj, Self::Mor>> {
        let ls = column(links, |l| l.hom.clone());
        let carriers = column(stages, |s| s.carrier.clone());
        let st = self.base.colimit_at(&carriers, &ls, at)?;
        let (base, f) = (self.base, self.functor);
        let coaction =
            base.colimit_mediate(&ls, &st, &|k| base.compose(&f.on_mor(&st.legs[k])?, &stages[k].coaction))?;
        let object = Coalgebra { carrier: st.object.clone(), coaction };
        let legs = st
            .legs
            .iter()
            .enumerate()
            .map(|(k, leg)| Arrow { src: stages[k].clone(), dst: object.clone(), hom: leg.clone() })
            .collect();
        Ok(Stabilized { index: at.index, horizon: at.horizon, object, legs })
    }

    fn colimit_mediate(
        &self,
        links: &[Self::Mor],
        colimit: &Stabilized<Self::Obj, Self::Mor>,
        cocone: &dyn Fn(usize) -> Result<Self::Mor>,
    ) -> Result<Self::Mor> {
        let ls = column(links, |l| l.hom.clone());
        let st = Stabilized {
            index: colimit.index,
            horizon: colimit.horizon,
            object: colimit.object.carrier.clone(),
            legs: colimit.legs.iter().map(|l| l.hom.clone()).collect(),
        };
        let hom = self.base.colimit_mediate(&ls, &st, &|k| Ok(cocone(k)?.hom))?;
        Ok(Arrow { src: colimit.object.clone(), dst: cocone(colimit.index)?.dst, hom })
    }
}

/// Algebras and their homomorphisms.
pub struct Algebras<'a, C: ?Sized, F: ?Sized> {
    pub base: &'a C,
    pub functor: &'a F,
}

pub type AlgArrow<C> = Arrow<AlgebraOf<C>, <C as Category>::Mor>;

impl<'a, C: ?Sized, F: ?Sized> Algebras<'a, C, F> {
    pub fn new(base: &'a C, functor: &'a F) -> Self {
        Algebras { base, functor }
    }
}

impl<C, F> Category for Algebras<'_, C, F>
where
    C: Category + ?Sized,
    F: Endofunctor<C> + ?Sized,
{
    type Obj = AlgebraOf<C>;
    type Mor = AlgArrow<C>;

    fn dom(&self, f: &Self::Mor) -> Self::Obj {
        f.src.clone()
    }
    fn cod(&self, f: &Self::Mor) -> Self::Obj {
        f.dst.clone()
    }
    fn id(&self, x: &Self::Obj) -> Self::Mor {
        Arrow { src: x.clone(), dst: x.clone(), hom: self.base.id(&x.carrier) }
    }
    fn compose(&self, g: &Self::Mor, f: &Self::Mor) -> Result<Self::Mor> {
        if f.dst != g.src {
            return Err(Error::IllTyped("algebra homomorphisms are not composable".into()));
        }
        Ok(Arrow { src: f.src.clone(), dst: g.dst.clone(), hom: self.base.compose(&g.hom, &f.hom)? })
    }
    fn hom(&self, x: &Self::Obj, y: &Self::Obj, cap: usize) -> Result<Vec<Self::Mor>> {
        Ok(algebra_homs(self.base, self.functor, x, y, cap)?
            .into_iter()
            .map(|hom| Arrow { src: x.clone(), dst: y.clone(), hom })
            .collect())
    }
    fn capabilities(&self) -> Capabilities {
        Capabilities { hom_enumerable: self.base.capabilities().hom_enumerable, ..Capabilities::default() }
    }
    fn size(&self, x: &Self::Obj) -> usize {
        self.base.size(&x.carrier)
    }
    fn inverse(&self, f: &Self::Mor) -> Option<Self::Mor> {
        Some(Arrow { src: f.dst.clone(), dst: f.src.clone(), hom: self.base.inverse(&f.hom)? })
    }
    fn non_iso_witness(&self, f: &Self::Mor) -> String {
        self.base.non_iso_witness(&f.hom)
    }
}

/// Limits of inverse algebra chains are computed on carriers.
impl<C, F> SequentialLimits for Algebras<'_, C, F>
where
    C: SequentialLimits + ?Sized,
    F: Endofunctor<C> + ?Sized,
{
    fn limit_settles_at(&self, links: &[Self::Mor], at: Window) -> Result<bool> {
        self.base.limit_settles_at(&column(links, |l| l.hom.clone()), at)
    }

    fn limit_at(&self, stages: &[Self::Obj], links: &[Self::Mor], at: Window) -> Result<Stabilized<Self::Obj, Self::Mor>> {
        let ls = column(links, |l| l.hom.clone());
        let carriers = column(stages, |s| s.carrier.clone());
        let st = self.base.limit_at(&carriers, &ls, at)?;
        let (base, f) = (self.base, self.functor);
        let action = base.limit_mediate(&ls, &st, &|k| base.compose(&stages[k].action, &f.on_mor(&st.legs[k])?))?;
        let object = Algebra { carrier: st.object.clone(), action };
        let legs = st
            .legs
            .iter()
            .enumerate()
            .map(|(k, leg)| Arrow { src: object.clone(), dst: stages[k].clone(), hom: leg.clone() })
            .collect();
        Ok(Stabilized { index: at.index, horizon: at.horizon, object, legs })
    }

    fn limit_mediate(
        &self,
        links: &[Self::Mor],
        limit: &Stabilized<Self::Obj, Self::Mor>,
        cone: &dyn Fn(usize) -> Result<Self::Mor>,
    ) -> Result<Self::Mor> {
        let ls = column(links, |l| l.hom.clone());
        let st = Stabilized {
            index: limit.index,
            horizon: limit.horizon,
            object: limit.object.carrier.clone(),
            legs: limit.legs.iter().map(|l| l.hom.clone()).collect(),
        };
        let hom = self.base.limit_mediate(&ls, &st, &|k| Ok(cone(k)?.hom))?;
        Ok(Arrow { src: cone(limit.index)?.src, dst: limit.object.clone(), hom })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat::{EndofunctorSpec, Elem, FunctorSpec};

    #[test]
    fn identity_is_always_a_hom() {
        let f = EndofunctorSpec::new("xx", FunctorSpec::monomial(1, 2));
        for alg in enumerate_algebras(&f, 2, 1000).unwrap() {
            assert!(is_algebra_hom(&FinSets, &f, &FinSets.id(&alg.carrier), &alg, &alg).unwrap());
        }
    }

    #[test]
    fn constant_functor_homs() {
        let a0 = FinSet::atoms(&["p"]);
        let f = EndofunctorSpec::constant(a0.clone());
        let a = FinSet::range(2);
        let alpha = FinMap::constant(&a0, &a, &Elem::Int(0)).unwrap();
        let beta = FinMap::constant(&a0, &a, &Elem::Int(1)).unwrap();
        let src = Algebra { carrier: a.clone(), action: alpha };
        let dst = Algebra { carrier: a.clone(), action: beta.clone() };
        for phi in FinSets.hom(&a, &a, 100).unwrap() {
            let direct = phi.apply(&Elem::Int(0)) == Some(&Elem::Int(1));
            assert_eq!(is_algebra_hom(&FinSets, &f, &phi, &src, &dst).unwrap(), direct);
        }
    }

    #[test]
    fn swap_to_point_has_no_constant_hom() {
        let f = EndofunctorSpec::identity();
        let two = FinSet::range(2);
        let one = FinSet::range(1);
        let swap = FinMap::new(two.clone(), two.clone(), vec![1, 0]).unwrap();
        let src = Algebra { carrier: two.clone(), action: swap };
        let dst = Algebra { carrier: one.clone(), action: FinMap::identity(&one) };
        let phi = FinMap::constant(&two, &one, &Elem::Int(0)).unwrap();
        // the only map into a point commutes with everything
        assert!(is_algebra_hom(&FinSets, &f, &phi, &src, &dst).unwrap());
        let dst2 = Algebra { carrier: two.clone(), action: FinMap::identity(&two) };
        let c = FinMap::constant(&two, &two, &Elem::Int(0)).unwrap();
        assert!(is_algebra_hom(&FinSets, &f, &c, &src, &dst2).unwrap());
        let id = FinMap::identity(&two);
        assert!(!is_algebra_hom(&FinSets, &f, &id, &src, &dst2).unwrap());
    }

    #[test]
    fn enumeration_counts() {
        let point = EndofunctorSpec::constant(FinSet::atoms(&["a"]));
        let algs = enumerate_algebras(&point, 1, 100).unwrap();
        assert_eq!(algs.iter().filter(|a| a.carrier.len() == 1).count(), 1);
        let id = EndofunctorSpec::identity();
        assert_eq!(enumerate_algebras(&id, 2, 100).unwrap().iter().filter(|a| a.carrier.len() == 2).count(), 4);
        let sq = EndofunctorSpec::new("xx", FunctorSpec::monomial(1, 2));
        assert_eq!(enumerate_algebras(&sq, 2, 100).unwrap().iter().filter(|a| a.carrier.len() == 2).count(), 16);
    }

    #[test]
    fn lax_round_trip() {
        let f = EndofunctorSpec::new("1+x", FunctorSpec::one_plus_x());
        for alg in enumerate_algebras(&f, 2, 100).unwrap() {
            let lax = embed_to_lax(&FinSets, &f, &alg).unwrap();
            assert_eq!(lax_to_algebra(&FinSets, &f, &lax).unwrap(), alg);
        }
    }

    #[test]
    fn small_apex_resolution_is_not_invertible() {
        let f = EndofunctorSpec::new("1+x", FunctorSpec::one_plus_x());
        let b = FinSet::range(1);
        let e = FinSet::range(1);
        let fb = f.on_obj(&b).unwrap();
        let lax = LaxAlgebra {
            apex: e.clone(),
            carrier: b.clone(),
            resolution: FinMap::new(e.clone(), fb, vec![0]).unwrap(),
            action: FinMap::new(e, b, vec![0]).unwrap(),
        };
        assert!(matches!(lax_to_algebra(&FinSets, &f, &lax), Err(Error::ResolutionNotInvertible(_))));
    }

    #[test]
    fn twisted_resolution_inverts() {
        let f = EndofunctorSpec::new("1+x", FunctorSpec::one_plus_x());
        let b = FinSet::range(2);
        let fb = f.on_obj(&b).unwrap();
        let e = FinSet::range(3);
        let r = FinMap::new(e.clone(), fb.clone(), vec![2, 0, 1]).unwrap();
        let a = FinMap::new(e.clone(), b.clone(), vec![0, 1, 1]).unwrap();
        let lax = LaxAlgebra { apex: e, carrier: b.clone(), resolution: r.clone(), action: a.clone() };
        let alg = lax_to_algebra(&FinSets, &f, &lax).unwrap();
        for (i, y) in fb.iter().enumerate() {
            let x = r.values().iter().position(|&v| v == i).unwrap();
            assert_eq!(alg.action.apply(y), Some(b.get(a.apply_idx(x))));
        }
    }

    #[test]
    fn free_lax_adjunction_counts() {
        let f = EndofunctorSpec::new("1+x", FunctorSpec::one_plus_x());
        for nk in 0..=2 {
            let k = FinSet::range(nk);
            let free = free_lax_on_object(&FinSets, &f, &k).unwrap();
            for target in enumerate_lax_algebras(&f, 1, 1000).unwrap() {
                let lhs = lax_homs(&FinSets, &f, &free, &target, 10_000).unwrap().len();
                let rhs = FinSets.hom(&k, &target.carrier, 1000).unwrap().len();
                assert_eq!(lhs, rhs);
            }
        }
    }
}

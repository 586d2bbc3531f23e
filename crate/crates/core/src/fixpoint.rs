//! Fixed points of an endofunctor, the reflection of coalgebras onto them and
//! its dual, and locality of coalgebra homomorphisms.

use serde::{Deserialize, Serialize};

use crate::adamek::{functor_chain, functor_cochain, initial_algebra};
use crate::algebra::{check_algebra, check_coalgebra, coalgebra_homs, is_coalgebra_hom, AlgebraOf, Coalgebra, CoalgebraOf};
use crate::cat::under::RelativeFunctor;
use crate::cat::{
    Budget, Category, Chain, Endofunctor, SequentialColimits, SequentialLimits, Stabilized, UnderCategory, UnderObj,
};
use crate::error::{Error, Result};

/// An object with an invertible comparison `u: X → F X`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedPoint<O, M> {
    pub carrier: O,
    pub iso: M,
    pub inverse: M,
}

pub type FixedPointOf<C> = FixedPoint<<C as Category>::Obj, <C as Category>::Mor>;

impl<O: Clone, M: Clone> FixedPoint<O, M> {
    pub fn as_coalgebra(&self) -> Coalgebra<O, M> {
        Coalgebra { carrier: self.carrier.clone(), coaction: self.iso.clone() }
    }
}

pub fn check_fixed_point<C, F>(cat: &C, f: &F, fp: &FixedPointOf<C>) -> Result<()>
where
    C: Category + ?Sized,
    F: Endofunctor<C> + ?Sized,
{
    let fx = f.on_obj(&fp.carrier)?;
    if cat.dom(&fp.iso) != fp.carrier || cat.cod(&fp.iso) != fx {
        return Err(Error::FunctorMismatch("comparison is not a map X → F X".into()));
    }
    if cat.compose(&fp.inverse, &fp.iso)? != cat.id(&fp.carrier) || cat.compose(&fp.iso, &fp.inverse)? != cat.id(&fx) {
        return Err(Error::IllTyped("inverse witness is not two-sided".into()));
    }
    Ok(())
}

/// Fixed-point maps: carrier maps commuting with the comparisons.
pub fn fix_homs<C, F>(cat: &C, f: &F, src: &FixedPointOf<C>, dst: &FixedPointOf<C>, cap: usize) -> Result<Vec<C::Mor>>
where
    C: Category + ?Sized,
    F: Endofunctor<C> + ?Sized,
{
    coalgebra_homs(cat, f, &src.as_coalgebra(), &dst.as_coalgebra(), cap)
}

/// Coalgebras whose coaction is invertible, among `candidates`.
pub fn fixed_points_among<C: Category + ?Sized>(cat: &C, candidates: &[CoalgebraOf<C>]) -> Vec<FixedPointOf<C>> {
    candidates
        .iter()
        .filter_map(|co| {
            let inverse = cat.inverse(&co.coaction)?;
            Some(FixedPoint { carrier: co.carrier.clone(), iso: co.coaction.clone(), inverse })
        })
        .collect()
}

/// The reflection `I_C` with the colimit of `C → FC → F²C → …` and unit `C → I_C`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reflection<O, M> {
    pub fixed: FixedPoint<O, M>,
    pub coalgebra: Coalgebra<O, M>,
    pub chain: Chain<O, M>,
    pub stabilized: Stabilized<O, M>,
    pub unit: M,
}

pub type ReflectionOf<C> = Reflection<<C as Category>::Obj, <C as Category>::Mor>;

impl<O: Clone, M: Clone> Reflection<O, M> {
    pub fn index(&self) -> usize {
        self.stabilized.index
    }
}

pub fn reflect<C, F>(cat: &C, f: &F, coalg: &CoalgebraOf<C>, budget: &Budget) -> Result<ReflectionOf<C>>
where
    C: SequentialColimits + ?Sized,
    F: Endofunctor<C> + ?Sized,
{
    check_coalgebra(cat, f, coalg)?;
    if !f.preserves_sequential_colimits() {
        return Err(Error::CapabilityMissing("functor does not preserve sequential colimits"));
    }
    let (chain, stabilized, iso) = functor_chain(cat, f, coalg.coaction.clone(), budget)?;
    let inverse = cat.inverse(&iso).ok_or_else(|| Error::ComparisonNotIso(cat.non_iso_witness(&iso)))?;
    let unit = stabilized.legs[0].clone();
    Ok(Reflection {
        fixed: FixedPoint { carrier: stabilized.object.clone(), iso, inverse },
        coalgebra: coalg.clone(),
        chain,
        stabilized,
        unit,
    })
}

/// Leg `F^k C → I_C`, extended past the computed truncation by
/// `leg_{k+1} = u⁻¹ ∘ F(leg_k)`.
fn leg_at<C, F>(cat: &C, f: &F, r: &ReflectionOf<C>, k: usize) -> Result<C::Mor>
where
    C: Category + ?Sized,
    F: Endofunctor<C> + ?Sized,
{
    let legs = &r.stabilized.legs;
    if k < legs.len() {
        return Ok(legs[k].clone());
    }
    let mut leg = legs[legs.len() - 1].clone();
    for _ in legs.len()..=k {
        leg = cat.compose(&r.fixed.inverse, &f.on_mor(&leg)?)?;
    }
    Ok(leg)
}

/// `I_φ: I_C → I_D`, induced by `d_k ∘ F^k(φ)`.
pub fn reflect_hom<C, F>(
    cat: &C,
    f: &F,
    phi: &C::Mor,
    src: &ReflectionOf<C>,
    dst: &ReflectionOf<C>,
) -> Result<C::Mor>
where
    C: SequentialColimits + ?Sized,
    F: Endofunctor<C> + ?Sized,
{
    let mut powers = vec![phi.clone()];
    for k in 1..src.stabilized.legs.len() + 1 {
        let next = f.on_mor(&powers[k - 1])?;
        powers.push(next);
    }
    cat.colimit_mediate(&src.chain.links, &src.stabilized, &|k| {
        let fk = if k < powers.len() {
            powers[k].clone()
        } else {
            (powers.len()..=k).try_fold(powers[powers.len() - 1].clone(), |m, _| f.on_mor(&m))?
        };
        cat.compose(&leg_at(cat, f, dst, k)?, &fk)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Local,
    NotLocal,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalityVerdict<M> {
    pub hom: M,
    pub reflected: Option<M>,
    pub verdict: Verdict,
    /// Inverse of `I_φ` when local, otherwise a failure description.
    pub inverse: Option<M>,
    pub witness: Option<String>,
    /// Section `D → I_C` or lift `D → F C`, when one was searched for and found.
    pub section: Option<M>,
}

pub type VerdictOf<C> = LocalityVerdict<<C as Category>::Mor>;

/// A coalgebra homomorphism `φ: (C, ν) → (D, μ)` with both reflections.
pub struct LocalityProblem<O, M> {
    pub hom: M,
    pub src: Coalgebra<O, M>,
    pub dst: Coalgebra<O, M>,
}

pub type LocalityProblemOf<C> = LocalityProblem<<C as Category>::Obj, <C as Category>::Mor>;

fn check_problem<C, F>(cat: &C, f: &F, p: &LocalityProblemOf<C>) -> Result<()>
where
    C: Category + ?Sized,
    F: Endofunctor<C> + ?Sized,
{
    if !is_coalgebra_hom(cat, f, &p.hom, &p.src, &p.dst)? {
        return Err(Error::IllTyped("φ is not a coalgebra homomorphism".into()));
    }
    Ok(())
}

/// `φ` is local when `I_φ` is an isomorphism.
pub fn is_f_local<C, F>(cat: &C, f: &F, p: &LocalityProblemOf<C>, budget: &Budget) -> Result<VerdictOf<C>>
where
    C: SequentialColimits + ?Sized,
    F: Endofunctor<C> + ?Sized,
{
    check_problem(cat, f, p)?;
    let rc = reflect(cat, f, &p.src, budget)?;
    let rd = reflect(cat, f, &p.dst, budget)?;
    let i_phi = reflect_hom(cat, f, &p.hom, &rc, &rd)?;
    let inverse = cat.inverse(&i_phi);
    let witness = if inverse.is_none() { Some(cat.non_iso_witness(&i_phi)) } else { None };
    Ok(LocalityVerdict {
        hom: p.hom.clone(),
        reflected: Some(i_phi),
        verdict: if inverse.is_some() { Verdict::Local } else { Verdict::NotLocal },
        inverse,
        witness,
        section: None,
    })
}

/// Searches coalgebra maps `s: (D, μ) → (I_C, u)` with `s ∘ φ = η_C` and
/// `I_φ ∘ s = η_D`.
pub fn local_via_section<C, F>(cat: &C, f: &F, p: &LocalityProblemOf<C>, budget: &Budget) -> Result<VerdictOf<C>>
where
    C: SequentialColimits + ?Sized,
    F: Endofunctor<C> + ?Sized,
{
    check_problem(cat, f, p)?;
    let rc = reflect(cat, f, &p.src, budget)?;
    let rd = reflect(cat, f, &p.dst, budget)?;
    let i_phi = reflect_hom(cat, f, &p.hom, &rc, &rd)?;
    let target = rc.fixed.as_coalgebra();
    let mut section = None;
    for s in coalgebra_homs(cat, f, &p.dst, &target, budget.hom_cap)? {
        if cat.compose(&s, &p.hom)? == rc.unit && cat.compose(&i_phi, &s)? == rd.unit {
            section = Some(s);
            break;
        }
    }
    let verdict = if section.is_some() { Verdict::Local } else { Verdict::NotLocal };
    Ok(LocalityVerdict {
        hom: p.hom.clone(),
        inverse: cat.inverse(&i_phi),
        reflected: Some(i_phi),
        verdict,
        witness: section.is_none().then(|| "no section exists".to_string()),
        section,
    })
}

/// Searches `s: D → F C` with `s ∘ φ = ν` and `F(φ) ∘ s = μ`; a lift proves
/// locality, its absence proves nothing.
pub fn local_via_lift<C, F>(cat: &C, f: &F, p: &LocalityProblemOf<C>, budget: &Budget) -> Result<VerdictOf<C>>
where
    C: Category + ?Sized,
    F: Endofunctor<C> + ?Sized,
{
    check_problem(cat, f, p)?;
    let fc = f.on_obj(&p.src.carrier)?;
    let f_phi = f.on_mor(&p.hom)?;
    let mut section = None;
    for s in cat.hom(&p.dst.carrier, &fc, budget.hom_cap)? {
        if cat.compose(&s, &p.hom)? == p.src.coaction && cat.compose(&f_phi, &s)? == p.dst.coaction {
            section = Some(s);
            break;
        }
    }
    Ok(LocalityVerdict {
        hom: p.hom.clone(),
        reflected: None,
        verdict: if section.is_some() { Verdict::Local } else { Verdict::Inconclusive },
        inverse: None,
        witness: section.is_none().then(|| "no lift exists".to_string()),
        section,
    })
}

/// The coreflection `T_A` with the limit of `A ← FA ← F²A ← …` and counit `T_A → A`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Coreflection<O, M> {
    pub fixed: FixedPoint<O, M>,
    pub chain: Chain<O, M>,
    pub stabilized: Stabilized<O, M>,
    pub counit: M,
}

pub type CoreflectionOf<C> = Coreflection<<C as Category>::Obj, <C as Category>::Mor>;

/// The fixed point carries `F T → T` as structure; `fixed.iso` is its inverse `T → F T`.
pub fn coreflect<C, F>(cat: &C, f: &F, alg: &AlgebraOf<C>, budget: &Budget) -> Result<CoreflectionOf<C>>
where
    C: SequentialLimits + ?Sized,
    F: Endofunctor<C> + ?Sized,
{
    check_algebra(cat, f, alg)?;
    if !f.preserves_sequential_limits() {
        return Err(Error::CapabilityMissing("functor does not preserve sequential limits"));
    }
    let (chain, stabilized, structure) =
        functor_cochain(cat, f, alg.action.clone(), |m| cat.compose(&alg.action, m), budget)?;
    let iso = cat.inverse(&structure).ok_or_else(|| Error::ComparisonNotIso(cat.non_iso_witness(&structure)))?;
    let counit = stabilized.legs[0].clone();
    Ok(Coreflection { fixed: FixedPoint { carrier: stabilized.object.clone(), iso, inverse: structure }, chain, stabilized, counit })
}

/// An algebra homomorphism `φ: (A, α) → (B, β)`.
pub struct ColocalityProblem<O, M> {
    pub hom: M,
    pub src: crate::algebra::Algebra<O, M>,
    pub dst: crate::algebra::Algebra<O, M>,
}

pub type ColocalityProblemOf<C> = ColocalityProblem<<C as Category>::Obj, <C as Category>::Mor>;

/// Searches `s: F B → A` with `s ∘ F(φ) = α` and `φ ∘ s = β`.
pub fn colocal_via_lift<C, F>(cat: &C, f: &F, p: &ColocalityProblemOf<C>, budget: &Budget) -> Result<VerdictOf<C>>
where
    C: Category + ?Sized,
    F: Endofunctor<C> + ?Sized,
{
    if !crate::algebra::is_algebra_hom(cat, f, &p.hom, &p.src, &p.dst)? {
        return Err(Error::IllTyped("φ is not an algebra homomorphism".into()));
    }
    let fb = f.on_obj(&p.dst.carrier)?;
    let f_phi = f.on_mor(&p.hom)?;
    let mut section = None;
    for s in cat.hom(&fb, &p.src.carrier, budget.hom_cap)? {
        if cat.compose(&s, &f_phi)? == p.src.action && cat.compose(&p.hom, &s)? == p.dst.action {
            section = Some(s);
            break;
        }
    }
    Ok(LocalityVerdict {
        hom: p.hom.clone(),
        reflected: None,
        verdict: if section.is_some() { Verdict::Local } else { Verdict::Inconclusive },
        inverse: None,
        witness: section.is_none().then(|| "no lift exists".to_string()),
        section,
    })
}

/// `T_φ` is an isomorphism.
pub fn is_f_colocal<C, F>(cat: &C, f: &F, p: &ColocalityProblemOf<C>, budget: &Budget) -> Result<VerdictOf<C>>
where
    C: SequentialLimits + ?Sized,
    F: Endofunctor<C> + ?Sized,
{
    let ta = coreflect(cat, f, &p.src, budget)?;
    let tb = coreflect(cat, f, &p.dst, budget)?;
    // cone T_A → F^k B: F^k(φ) ∘ π^A_k
    let mut powers = vec![p.hom.clone()];
    for k in 1..ta.stabilized.legs.len().max(tb.stabilized.legs.len()) + 1 {
        let next = f.on_mor(&powers[k - 1])?;
        powers.push(next);
    }
    let proj = |k: usize| -> Result<C::Mor> {
        let legs = &ta.stabilized.legs;
        if k < legs.len() {
            return Ok(legs[k].clone());
        }
        let mut leg = legs[legs.len() - 1].clone();
        for _ in legs.len()..=k {
            leg = cat.compose(&f.on_mor(&leg)?, &ta.fixed.iso)?;
        }
        Ok(leg)
    };
    let t_phi = cat.limit_mediate(&tb.chain.links, &tb.stabilized, &|k| {
        let fk = if k < powers.len() {
            powers[k].clone()
        } else {
            (powers.len()..=k).try_fold(powers[powers.len() - 1].clone(), |m, _| f.on_mor(&m))?
        };
        cat.compose(&fk, &proj(k)?)
    })?;
    let inverse = cat.inverse(&t_phi);
    Ok(LocalityVerdict {
        hom: p.hom.clone(),
        verdict: if inverse.is_some() { Verdict::Local } else { Verdict::NotLocal },
        witness: inverse.is_none().then(|| cat.non_iso_witness(&t_phi)),
        reflected: Some(t_phi),
        inverse,
        section: None,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelativeInitialReport<O, M> {
    /// Carrier of the initial `F_C`-algebra, with its point `C → X`.
    pub carrier: UnderObj<O, M>,
    pub index: usize,
    /// An isomorphism under `C` onto the reflection, if one exists.
    pub iso: Option<M>,
}

impl<O, M> RelativeInitialReport<O, M> {
    pub fn agrees(&self) -> bool {
        self.iso.is_some()
    }
}

pub type RelativeInitialOf<C> = RelativeInitialReport<<C as Category>::Obj, <C as Category>::Mor>;

/// Computes the initial algebra of `F_C` on `𝒦_{C/}` and compares it with `(I_C, η_C)`.
pub fn relative_initial_check<C, F>(cat: &C, f: &F, coalg: &CoalgebraOf<C>, budget: &Budget) -> Result<RelativeInitialOf<C>>
where
    C: SequentialColimits + ?Sized,
    F: Endofunctor<C> + ?Sized,
{
    let refl = reflect(cat, f, coalg, budget)?;
    let under = UnderCategory::new(cat, coalg.carrier.clone());
    let rel = RelativeFunctor { base: cat, functor: f, coaction: coalg.coaction.clone() };
    let cert = initial_algebra(&under, &rel, budget)?;
    let carrier = cert.algebra.carrier.clone();
    let target = UnderObj { obj: refl.fixed.carrier.clone(), point: refl.unit.clone() };
    let iso = under
        .hom(&carrier, &target, budget.hom_cap)?
        .into_iter()
        .find(|m| under.is_iso(m))
        .map(|m| m.map);
    Ok(RelativeInitialReport { carrier, index: cert.stabilized.index, iso })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Algebra, Coalgebras};
    use crate::cat::{Elem, FinMap, FinSet, FinSets, FunctorSpec};

    fn set(n: usize) -> FinSet {
        FinSet::range(n)
    }

    fn map(d: usize, c: usize, v: Vec<usize>) -> FinMap {
        FinMap::new(set(d), set(c), v).unwrap()
    }

    fn coalg(f: &FunctorSpec, n: usize, values: Vec<usize>) -> Coalgebra<FinSet, FinMap> {
        let fc = f.obj(&set(n)).unwrap();
        Coalgebra { carrier: set(n), coaction: FinMap::new(set(n), fc, values).unwrap() }
    }

    #[test]
    fn iso_coaction_reflects_to_itself() {
        let id = FunctorSpec::Identity;
        let c = coalg(&id, 2, vec![1, 0]);
        let r = reflect(&FinSets, &id, &c, &Budget::default()).unwrap();
        assert_eq!(r.index(), 0);
        assert_eq!(r.fixed.carrier.len(), 2);
        check_fixed_point(&FinSets, &id, &r.fixed).unwrap();
    }

    #[test]
    fn constant_coaction_collapses() {
        let id = FunctorSpec::Identity;
        let r = reflect(&FinSets, &id, &coalg(&id, 2, vec![0, 0]), &Budget::default()).unwrap();
        assert_eq!(r.fixed.carrier.len(), 1);
        assert_eq!(r.fixed.iso, FinMap::identity(&r.fixed.carrier));
    }

    #[test]
    fn constant_functor_reflects_onto_its_value() {
        let a = FinSet::atoms(&["p", "q", "r"]);
        let f = FunctorSpec::Constant(a.clone());
        let c = Coalgebra { carrier: set(2), coaction: FinMap::new(set(2), a.clone(), vec![0, 2]).unwrap() };
        let r = reflect(&FinSets, &f, &c, &Budget::default()).unwrap();
        assert_eq!(r.fixed.carrier.len(), 3);
        assert!(r.index() <= 1);
    }

    /// Brute-force oracle: `|Hom_Fix(I_C, K)| = |Hom_coalg(C, K)|`.
    #[test]
    fn reflection_adjunction_on_small_coalgebras() {
        let two = FinSet::atoms(&["a", "b"]);
        let budget = Budget { stages: 12, max_object: 64, ..Budget::default() };
        for func in [&FunctorSpec::Identity, &FunctorSpec::Constant(two), &FunctorSpec::monomial(1, 2)] {
            let coalgs = crate::algebra::enumerate_coalgebras(func, 3, 1000).unwrap();
            let probes: Vec<_> = fixed_points_among(&FinSets, &coalgs);
            assert!(!probes.is_empty());
            for c in &coalgs {
                let Ok(r) = reflect(&FinSets, func, c, &budget) else { continue };
                for k in &probes {
                    let lhs = fix_homs(&FinSets, func, &r.fixed, k, 1000).unwrap().len();
                    let rhs = coalgebra_homs(&FinSets, func, c, &k.as_coalgebra(), 1000).unwrap().len();
                    assert_eq!(lhs, rhs, "{c:?} vs {k:?}");
                }
            }
        }
    }

    #[test]
    fn reflection_is_idempotent() {
        let id = FunctorSpec::Identity;
        let r = reflect(&FinSets, &id, &coalg(&id, 3, vec![1, 1, 2]), &Budget::default()).unwrap();
        let again = reflect(&FinSets, &id, &r.fixed.as_coalgebra(), &Budget::default()).unwrap();
        assert_eq!(again.index(), 0);
        assert_eq!(again.fixed.carrier, r.fixed.carrier);
    }

    fn problem(hom: FinMap, src: Coalgebra<FinSet, FinMap>, dst: Coalgebra<FinSet, FinMap>) -> LocalityProblem<FinSet, FinMap> {
        LocalityProblem { hom, src, dst }
    }

    #[test]
    fn coactions_are_local() {
        let budget = Budget { stages: 12, max_object: 64, ..Budget::default() };
        let mut seen = 0;
        for f in [FunctorSpec::Identity, FunctorSpec::monomial(1, 2), FunctorSpec::Constant(set(2))] {
            for c in crate::algebra::enumerate_coalgebras(&f, 3, 1000).unwrap() {
                let dst = crate::algebra::apply_to_coalgebra::<FinSets, _>(&f, &c).unwrap();
                let p = problem(c.coaction.clone(), c.clone(), dst);
                let Ok(v) = is_f_local(&FinSets, &f, &p, &budget) else { continue };
                seen += 1;
                assert_eq!(v.verdict, Verdict::Local);
                assert_eq!(local_via_section(&FinSets, &f, &p, &budget).unwrap().verdict, Verdict::Local);
                assert_eq!(local_via_lift(&FinSets, &f, &p, &budget).unwrap().verdict, Verdict::Local);
                // s = id_{FC} closes the square
                let id = FinMap::identity(&p.dst.carrier);
                assert_eq!(p.hom.then(&id).unwrap(), p.src.coaction);
                assert_eq!(id.then(&f.mor(&p.hom).unwrap()).unwrap(), p.dst.coaction);
            }
        }
        assert!(seen > 20, "{seen}");
    }

    #[test]
    fn collapsing_identity_coalgebras_is_not_local() {
        let id = FunctorSpec::Identity;
        let p = problem(map(2, 1, vec![0, 0]), coalg(&id, 2, vec![0, 1]), coalg(&id, 1, vec![0]));
        let v = is_f_local(&FinSets, &id, &p, &Budget::default()).unwrap();
        assert_eq!(v.verdict, Verdict::NotLocal);
        assert!(!v.reflected.unwrap().is_injective());
        assert_eq!(local_via_section(&FinSets, &id, &p, &Budget::default()).unwrap().verdict, Verdict::NotLocal);
        assert_eq!(local_via_lift(&FinSets, &id, &p, &Budget::default()).unwrap().verdict, Verdict::Inconclusive);
    }

    #[test]
    fn identity_hom_has_unit_section_and_coaction_lift() {
        let id = FunctorSpec::Identity;
        let c = coalg(&id, 3, vec![1, 0, 0]);
        let p = problem(FinMap::identity(&set(3)), c.clone(), c.clone());
        let s = local_via_section(&FinSets, &id, &p, &Budget::default()).unwrap();
        let r = reflect(&FinSets, &id, &c, &Budget::default()).unwrap();
        assert_eq!(s.section, Some(r.unit));
        let l = local_via_lift(&FinSets, &id, &p, &Budget::default()).unwrap();
        assert_eq!(l.section, Some(c.coaction));
    }

    /// A tail `2 ↦ 1 ↦ 0` glued onto a fixed point: the inclusion of the fixed
    /// point is local, but `μ(2) = 1` has no preimage to lift through.
    #[test]
    fn local_without_a_lift() {
        let id = FunctorSpec::Identity;
        let p = problem(map(1, 3, vec![0]), coalg(&id, 1, vec![0]), coalg(&id, 3, vec![0, 0, 1]));
        assert_eq!(is_f_local(&FinSets, &id, &p, &Budget::default()).unwrap().verdict, Verdict::Local);
        assert_eq!(local_via_lift(&FinSets, &id, &p, &Budget::default()).unwrap().verdict, Verdict::Inconclusive);
    }

    /// Exhaustive agreement of the section criterion with the definition, and
    /// soundness of the lifting criterion, on all homs between small coalgebras.
    #[test]
    fn criteria_agree_with_the_definition() {
        let budget = Budget { stages: 12, max_object: 64, ..Budget::default() };
        let mut inconclusive_but_local = 0;
        let mut checked = 0;
        let two = FinSet::atoms(&["a", "b"]);
        for (func, max) in [(FunctorSpec::Identity, 3), (FunctorSpec::Constant(two), 2), (FunctorSpec::monomial(1, 2), 2)] {
            let coalgs = crate::algebra::enumerate_coalgebras(&func, max, 1000).unwrap();
            let cat = Coalgebras::new(&FinSets, &func);
            for c in &coalgs {
                for d in &coalgs {
                    for phi in cat.hom(c, d, 1000).unwrap() {
                        let p = problem(phi.hom, c.clone(), d.clone());
                        let Ok(def) = is_f_local(&FinSets, &func, &p, &budget) else { continue };
                        checked += 1;
                        let sec = local_via_section(&FinSets, &func, &p, &budget).unwrap();
                        assert_eq!(def.verdict, sec.verdict, "{:?}", (&p.hom, &p.src, &p.dst));
                        let lift = local_via_lift(&FinSets, &func, &p, &budget).unwrap();
                        if lift.verdict == Verdict::Local {
                            assert_eq!(def.verdict, Verdict::Local);
                        } else if def.verdict == Verdict::Local {
                            inconclusive_but_local += 1;
                        }
                    }
                }
            }
        }
        assert!(checked > 500, "{checked}");
        assert!(inconclusive_but_local > 0);
    }

    #[test]
    fn coreflect_constant_action() {
        let id = FunctorSpec::Identity;
        let a = Algebra { carrier: set(2), action: map(2, 2, vec![0, 0]) };
        let t = coreflect(&FinSets, &id, &a, &Budget::default()).unwrap();
        assert_eq!(t.fixed.carrier.len(), 1);
        let iso = Algebra { carrier: set(2), action: map(2, 2, vec![1, 0]) };
        let t = coreflect(&FinSets, &id, &iso, &Budget::default()).unwrap();
        assert_eq!(t.stabilized.index, 0);
        assert_eq!(t.fixed.carrier.len(), 2);
    }

    #[test]
    fn dual_lift_on_structure_maps() {
        // α: F A → A as an algebra map (F A, F α) → (A, α) has the lift id_{FA}
        let f = FunctorSpec::one_plus_x();
        let a = Algebra { carrier: set(2), action: FinMap::new(f.obj(&set(2)).unwrap(), set(2), vec![0, 1, 1]).unwrap() };
        let fa = Algebra { carrier: f.obj(&set(2)).unwrap(), action: f.mor(&a.action).unwrap() };
        let p = ColocalityProblem { hom: a.action.clone(), src: fa.clone(), dst: a };
        let v = colocal_via_lift(&FinSets, &f, &p, &Budget::default()).unwrap();
        assert_eq!(v.verdict, Verdict::Local);
        assert_eq!(v.section, Some(FinMap::identity(&fa.carrier)));
    }

    #[test]
    fn relative_initial_algebra_matches_reflection() {
        let id = FunctorSpec::Identity;
        for c in [coalg(&id, 2, vec![0, 0]), coalg(&id, 2, vec![1, 0]), coalg(&id, 3, vec![1, 2, 2])] {
            let rep = relative_initial_check(&FinSets, &id, &c, &Budget::default()).unwrap();
            assert!(rep.agrees());
        }
        let a = FinSet::new([Elem::atom("x"), Elem::atom("y")]);
        let f = FunctorSpec::Constant(a.clone());
        let c = Coalgebra { carrier: set(1), coaction: FinMap::new(set(1), a.clone(), vec![1]).unwrap() };
        let rep = relative_initial_check(&FinSets, &f, &c, &Budget::default()).unwrap();
        assert!(rep.agrees());
        assert_eq!(rep.carrier.obj, a);
    }
}

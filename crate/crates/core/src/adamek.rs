//! Adámek chains: initial and free algebras, free algebras on lax algebras,
//! terminal coalgebras, and the propagation endofunctor on lax algebras.

use serde::{Deserialize, Serialize};

use crate::algebra::{
    self, embed_to_lax, lax_to_algebra, Algebra, AlgebraOf, Arrow, Coalgebra, CoalgebraOf, LaxAlgebra, LaxAlgebraOf,
    LaxAlgebras, LaxArrow, LaxHom,
};
use crate::cat::{
    chain_colimit, chain_limit, Budget, Category, Chain, ChainOutcome, Endofunctor, FinMap, FinSet, FinSets,
    HasCoproducts, HasInitial, HasPushouts, HasTerminal, SequentialColimits, SequentialLimits, Stabilized,
};
use crate::error::{Error, Result};

/// An initial or free algebra together with the chain that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FreeAlgebraCertificate<O, M> {
    pub algebra: Algebra<O, M>,
    pub chain: Chain<O, M>,
    pub stabilized: Stabilized<O, M>,
    /// The canonical map out of the colimit (`I → F I`, or `K^λ → K ⊔ F K^λ`).
    pub comparison: M,
    pub comparison_inverse: M,
    /// `K → K^λ` for free algebras.
    pub unit: Option<M>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TerminalCoalgebraCertificate<O, M> {
    pub coalgebra: Coalgebra<O, M>,
    pub chain: Chain<O, M>,
    pub stabilized: Stabilized<O, M>,
    /// `F T → T`.
    pub comparison: M,
    pub comparison_inverse: M,
}

pub type FreeCertOf<C> = FreeAlgebraCertificate<<C as Category>::Obj, <C as Category>::Mor>;
pub type TerminalCertOf<C> = TerminalCoalgebraCertificate<<C as Category>::Obj, <C as Category>::Mor>;

fn settled<O: Clone, M: Clone>(chain: Chain<O, M>) -> Result<(Chain<O, M>, Stabilized<O, M>)> {
    match &chain.outcome {
        ChainOutcome::Stabilized(st) => {
            let st = st.clone();
            Ok((chain, st))
        }
        ChainOutcome::NotStabilized(_) => Err(chain.into_not_stabilized()),
    }
}

/// Runs `X₀ →e₀ F X₀ → F² X₀ → …` with `e_{n+1} = F(e_n)` and returns the
/// colimit with the canonical comparison `colim → F colim`.
pub(crate) fn functor_chain<C, F>(
    cat: &C,
    f: &F,
    first: C::Mor,
    budget: &Budget,
) -> Result<(Chain<C::Obj, C::Mor>, Stabilized<C::Obj, C::Mor>, C::Mor)>
where
    C: SequentialColimits + ?Sized,
    F: Endofunctor<C> + ?Sized,
{
    let chain = chain_colimit(cat, first, |e| f.on_mor(e), budget)?;
    let (chain, st) = settled(chain)?;
    let comparison = cat.colimit_mediate(&chain.links, &st, &|k| {
        cat.compose(&f.on_mor(&st.legs[k])?, &chain.links[k])
    })?;
    Ok((chain, st, comparison))
}

/// Dual of [`functor_chain`]: `X₀ ←p₀ F X₀ ← …` with comparison `F lim → lim`
/// given on stage 0 by `head ∘ F(π₀)`.
pub(crate) fn functor_cochain<C, F>(
    cat: &C,
    f: &F,
    first: C::Mor,
    head: impl Fn(&C::Mor) -> Result<C::Mor>,
    budget: &Budget,
) -> Result<(Chain<C::Obj, C::Mor>, Stabilized<C::Obj, C::Mor>, C::Mor)>
where
    C: SequentialLimits + ?Sized,
    F: Endofunctor<C> + ?Sized,
{
    let chain = chain_limit(cat, first, |p| f.on_mor(p), budget)?;
    let (chain, st) = settled(chain)?;
    let comparison = cat.limit_mediate(&chain.links, &st, &|k| {
        if k == 0 {
            head(&f.on_mor(&st.legs[0])?)
        } else {
            f.on_mor(&st.legs[k - 1])
        }
    })?;
    Ok((chain, st, comparison))
}

fn invert<C: Category + ?Sized>(cat: &C, m: &C::Mor) -> Result<C::Mor> {
    cat.inverse(m).ok_or_else(|| Error::ComparisonNotIso(cat.non_iso_witness(m)))
}

/// The initial algebra from the chain `∅ → F∅ → F²∅ → …`.
pub fn initial_algebra<C, F>(cat: &C, f: &F, budget: &Budget) -> Result<FreeCertOf<C>>
where
    C: HasInitial + SequentialColimits + ?Sized,
    F: Endofunctor<C> + ?Sized,
{
    if !cat.capabilities().has_initial {
        return Err(Error::CapabilityMissing("initial object"));
    }
    let zero = cat.initial();
    let first = cat.from_initial(&f.on_obj(&zero)?);
    let (chain, stabilized, comparison) = functor_chain(cat, f, first, budget)?;
    let comparison_inverse = invert(cat, &comparison)?;
    let algebra = Algebra { carrier: stabilized.object.clone(), action: comparison_inverse.clone() };
    Ok(FreeAlgebraCertificate { algebra, chain, stabilized, comparison, comparison_inverse, unit: None })
}

/// The free algebra on `k` from the chain `K → K ⊔ F K → K ⊔ F(K ⊔ F K) → …`.
pub fn free_algebra<C, F>(cat: &C, f: &F, k: &C::Obj, budget: &Budget) -> Result<FreeCertOf<C>>
where
    C: HasCoproducts + SequentialColimits + ?Sized,
    F: Endofunctor<C> + ?Sized,
{
    if !cat.capabilities().has_coproducts {
        return Err(Error::CapabilityMissing("coproducts"));
    }
    let step = |link: &C::Mor| -> Result<C::Mor> {
        // link: K_n → K_{n+1}; returns id_K ⊔ F(link)
        let src = cat.coproduct(k, &f.on_obj(&cat.dom(link))?)?;
        let tgt = cat.coproduct(k, &f.on_obj(&cat.cod(link))?)?;
        cat.copair(&src, &tgt.inl, &cat.compose(&tgt.inr, &f.on_mor(link)?)?)
    };
    let first = cat.coproduct(k, &f.on_obj(k)?)?.inl;
    let chain = chain_colimit(cat, first, step, budget)?;
    let (chain, st) = settled(chain)?;
    let lim = cat.coproduct(k, &f.on_obj(&st.object)?)?;
    let comparison = cat.colimit_mediate(&chain.links, &st, &|j| {
        let stage = cat.coproduct(k, &f.on_obj(&chain.stages[j])?)?;
        let into = cat.copair(&stage, &lim.inl, &cat.compose(&lim.inr, &f.on_mor(&st.legs[j])?)?)?;
        cat.compose(&into, &chain.links[j])
    })?;
    let comparison_inverse = invert(cat, &comparison)?;
    let action = cat.compose(&comparison_inverse, &lim.inr)?;
    let unit = st.legs[0].clone();
    let algebra = Algebra { carrier: st.object.clone(), action };
    Ok(FreeAlgebraCertificate { algebra, chain, stabilized: st, comparison, comparison_inverse, unit: Some(unit) })
}

/// The terminal coalgebra from the inverse chain `1 ← F1 ← F²1 ← …`.
pub fn terminal_coalgebra<C, F>(cat: &C, f: &F, budget: &Budget) -> Result<TerminalCertOf<C>>
where
    C: HasTerminal + SequentialLimits + ?Sized,
    F: Endofunctor<C> + ?Sized,
{
    if !cat.capabilities().has_terminal {
        return Err(Error::CapabilityMissing("terminal object"));
    }
    let one = cat.terminal();
    let first = cat.to_terminal(&f.on_obj(&one)?);
    let (chain, stabilized, comparison) =
        functor_cochain(cat, f, first, |m| Ok(cat.to_terminal(&cat.dom(m))), budget)?;
    let comparison_inverse = invert(cat, &comparison)?;
    let coalgebra = Coalgebra { carrier: stabilized.object.clone(), coaction: comparison_inverse.clone() };
    Ok(TerminalCoalgebraCertificate { coalgebra, chain, stabilized, comparison, comparison_inverse })
}

/// One application of the propagation endofunctor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropagationStep<O, M> {
    pub input: LaxAlgebra<O, M>,
    /// `B ⊔_E F B`.
    pub pushout: O,
    /// `i: B → B ⊔_E F B`.
    pub coprojection: M,
    /// `F B →F(i) F(B ⊔_E F B)` with action the coprojection from `F B`.
    pub output: LaxAlgebra<O, M>,
    /// `(r, i)`.
    pub unit: LaxHom<M>,
}

pub type PropagationOf<C> = PropagationStep<<C as Category>::Obj, <C as Category>::Mor>;

pub fn propagate<C, F>(cat: &C, f: &F, lax: &LaxAlgebraOf<C>) -> Result<PropagationOf<C>>
where
    C: HasPushouts + ?Sized,
    F: Endofunctor<C> + ?Sized,
{
    if !cat.capabilities().has_pushouts {
        return Err(Error::CapabilityMissing("pushouts"));
    }
    algebra::check_lax(cat, f, lax)?;
    // pushout of B ←a E →r F B
    let po = cat.pushout(&lax.action, &lax.resolution)?;
    let i = po.left.clone();
    let output = LaxAlgebra {
        apex: f.on_obj(&lax.carrier)?,
        carrier: po.object.clone(),
        resolution: f.on_mor(&i)?,
        action: po.right.clone(),
    };
    let unit = LaxHom { apex_map: lax.resolution.clone(), carrier_map: i.clone() };
    Ok(PropagationStep { input: lax.clone(), pushout: po.object, coprojection: i, output, unit })
}

/// Action of propagation on a lax homomorphism `h: L → L′`.
pub fn propagate_hom<C, F>(
    cat: &C,
    f: &F,
    h: &LaxHom<C::Mor>,
    src: &PropagationOf<C>,
    dst: &PropagationOf<C>,
) -> Result<LaxHom<C::Mor>>
where
    C: HasPushouts + ?Sized,
    F: Endofunctor<C> + ?Sized,
{
    let fb = f.on_mor(&h.carrier_map)?;
    let po = cat.pushout(&src.input.action, &src.input.resolution)?;
    let left = cat.compose(&dst.coprojection, &h.carrier_map)?;
    let right = cat.compose(&dst.output.action, &fb)?;
    let carrier_map = cat.pushout_mediate(&po, &left, &right)?;
    Ok(LaxHom { apex_map: fb, carrier_map })
}

/// A unital endofunctor `(Π, η)` on some category.
pub trait UnitalEndofunctor<C: Category + ?Sized> {
    fn apply(&self, x: &C::Obj) -> Result<C::Obj>;
    /// `η_x: x → Π x`.
    fn unit(&self, x: &C::Obj) -> Result<C::Mor>;
}

/// Propagation `(Π, η)` on lax algebras.
pub struct Propagation<'a, C: ?Sized, F: ?Sized> {
    pub base: &'a C,
    pub functor: &'a F,
}

impl<C, F> UnitalEndofunctor<LaxAlgebras<'_, C, F>> for Propagation<'_, C, F>
where
    C: HasPushouts + ?Sized,
    F: Endofunctor<C> + ?Sized,
{
    fn apply(&self, x: &LaxAlgebraOf<C>) -> Result<LaxAlgebraOf<C>> {
        Ok(propagate(self.base, self.functor, x)?.output)
    }

    fn unit(&self, x: &LaxAlgebraOf<C>) -> Result<LaxArrow<C>> {
        let step = propagate(self.base, self.functor, x)?;
        Ok(Arrow { src: step.input, dst: step.output, hom: step.unit })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FreeFixedPoint<O, M> {
    pub object: O,
    pub chain: Chain<O, M>,
    pub stabilized: Stabilized<O, M>,
    /// `η` at the colimit and its inverse.
    pub unit: M,
    pub unit_inverse: M,
    /// `L → L̂`.
    pub leg: M,
}

pub type FreeFixedPointOf<C> = FreeFixedPoint<<C as Category>::Obj, <C as Category>::Mor>;

/// Iterates `L → Π L → Π² L → …` along the unit, takes the colimit and checks
/// that the unit is invertible there.
pub fn free_fixed_point<C, P>(cat: &C, start: &C::Obj, endo: &P, budget: &Budget) -> Result<FreeFixedPointOf<C>>
where
    C: SequentialColimits + ?Sized,
    P: UnitalEndofunctor<C> + ?Sized,
{
    let first = endo.unit(start)?;
    let chain = chain_colimit(cat, first, |link| endo.unit(&cat.cod(link)), budget)?;
    let (chain, st) = settled(chain)?;
    let unit = endo.unit(&st.object)?;
    let unit_inverse = cat.inverse(&unit).ok_or_else(|| Error::UnitNotInvertible(cat.non_iso_witness(&unit)))?;
    let leg = st.legs[0].clone();
    Ok(FreeFixedPoint { object: st.object.clone(), chain, stabilized: st, unit, unit_inverse, leg })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LaxFreeCertificate<O, M> {
    pub algebra: Algebra<O, M>,
    pub fixed: FreeFixedPoint<LaxAlgebra<O, M>, Arrow<LaxAlgebra<O, M>, LaxHom<M>>>,
    /// Carrier component `B → B*` of the colimit leg.
    pub unit: M,
}

pub type LaxFreeCertOf<C> = LaxFreeCertificate<<C as Category>::Obj, <C as Category>::Mor>;

/// The free algebra on a lax algebra: iterate propagation to a fixed point,
/// then invert the resolution.
pub fn adamek_lax<C, F>(cat: &C, f: &F, lax: &LaxAlgebraOf<C>, budget: &Budget) -> Result<LaxFreeCertOf<C>>
where
    C: HasPushouts + SequentialColimits + ?Sized,
    F: Endofunctor<C> + ?Sized,
{
    algebra::check_lax(cat, f, lax)?;
    let laxcat = LaxAlgebras::new(cat, f);
    let prop = Propagation { base: cat, functor: f };
    let fixed = match free_fixed_point(&laxcat, lax, &prop, budget) {
        Err(Error::UnitNotInvertible(w)) => return Err(Error::ComparisonNotIso(w)),
        other => other?,
    };
    let algebra = lax_to_algebra(cat, f, &fixed.object).map_err(|e| match e {
        Error::ResolutionNotInvertible(w) => Error::ComparisonNotIso(w),
        other => other,
    })?;
    let unit = fixed.leg.hom.carrier_map.clone();
    Ok(LaxFreeCertificate { algebra, fixed, unit })
}

/// Stage-0 shortcut: an algebra seen as a lax algebra is already fixed.
pub fn adamek_on_algebra<C, F>(cat: &C, f: &F, alg: &AlgebraOf<C>, budget: &Budget) -> Result<LaxFreeCertOf<C>>
where
    C: HasPushouts + SequentialColimits + ?Sized,
    F: Endofunctor<C> + ?Sized,
{
    adamek_lax(cat, f, &embed_to_lax(cat, f, alg)?, budget)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambekReport {
    /// Probed algebras that receive zero or several homomorphisms: `(|carrier|, count)`.
    pub uniqueness_failures: Vec<(usize, usize)>,
    pub probed: usize,
    pub action_invertible: bool,
    pub action_witness: Option<String>,
}

impl LambekReport {
    pub fn passes(&self) -> bool {
        self.uniqueness_failures.is_empty() && self.action_invertible
    }
}

/// Checks that `candidate` has exactly one homomorphism to every algebra with
/// carrier of size at most `probe_size`, and that its action is invertible.
pub fn lambek_verify<F>(f: &F, candidate: &Algebra<FinSet, FinMap>, probe_size: usize, cap: usize) -> Result<LambekReport>
where
    F: Endofunctor<FinSets> + ?Sized,
{
    algebra::check_algebra(&FinSets, f, candidate)?;
    let mut uniqueness_failures = Vec::new();
    let probes = algebra::enumerate_algebras(f, probe_size, cap)?;
    for target in &probes {
        let n = algebra::algebra_homs(&FinSets, f, candidate, target, cap)?.len();
        if n != 1 {
            uniqueness_failures.push((target.carrier.len(), n));
        }
    }
    let action_witness = candidate.action.non_bijection_witness();
    Ok(LambekReport {
        uniqueness_failures,
        probed: probes.len(),
        action_invertible: action_witness.is_none(),
        action_witness,
    })
}

/// Compares `|Hom_alg(free, B)|` with `|Hom(K, B)|` over every algebra with
/// carrier at most `probe_size`; returns the mismatching carriers.
pub fn corepresentability_failures<F>(
    f: &F,
    k: &FinSet,
    free: &Algebra<FinSet, FinMap>,
    probe_size: usize,
    cap: usize,
) -> Result<Vec<(Algebra<FinSet, FinMap>, usize, usize)>>
where
    F: Endofunctor<FinSets> + ?Sized,
{
    let mut out = Vec::new();
    for target in algebra::enumerate_algebras(f, probe_size, cap)? {
        let lhs = algebra::algebra_homs(&FinSets, f, free, &target, cap)?.len();
        let rhs = FinSets.hom(k, &target.carrier, cap)?.len();
        if lhs != rhs {
            out.push((target, lhs, rhs));
        }
    }
    Ok(out)
}

/// The chain stage sizes of a colimit chain, as reported in traces.
pub fn stage_sizes<C: Category + ?Sized>(cat: &C, chain: &Chain<C::Obj, C::Mor>) -> Vec<usize> {
    chain.stages.iter().map(|x| cat.size(x)).collect()
}

/// Reads the growth trace out of a non-stabilizing run.
pub fn growth_of(err: &Error) -> Option<&[usize]> {
    match err {
        Error::NotStabilized { sizes, .. } => Some(sizes),
        _ => None,
    }
}

/// Convenience: the unit of a coalgebra viewed as a unital endofunctor.
pub struct CoactionUnit<'a, C: ?Sized, F: ?Sized> {
    pub base: &'a C,
    pub functor: &'a F,
}

impl<C, F> UnitalEndofunctor<algebra::Coalgebras<'_, C, F>> for CoactionUnit<'_, C, F>
where
    C: Category + ?Sized,
    F: Endofunctor<C> + ?Sized,
{
    fn apply(&self, x: &CoalgebraOf<C>) -> Result<CoalgebraOf<C>> {
        algebra::apply_to_coalgebra(self.functor, x)
    }

    fn unit(&self, x: &CoalgebraOf<C>) -> Result<algebra::CoalgArrow<C>> {
        let dst = algebra::apply_to_coalgebra(self.functor, x)?;
        Ok(Arrow { src: x.clone(), dst, hom: x.coaction.clone() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat::{EndofunctorSpec, FunctorSpec};

    fn budget() -> Budget {
        Budget::default()
    }

    #[test]
    fn constant_functor_initial_algebra() {
        let a = FinSet::atoms(&["a1", "a2"]);
        let f = EndofunctorSpec::constant(a.clone());
        let cert = initial_algebra(&FinSets, &f, &budget()).unwrap();
        assert_eq!(cert.algebra.carrier.len(), 2);
        assert!(cert.algebra.action.is_bijective());
        assert!(lambek_verify(&f, &cert.algebra, 3, 100_000).unwrap().passes());
    }

    #[test]
    fn identity_initial_algebra_is_empty() {
        let f = EndofunctorSpec::identity();
        let cert = initial_algebra(&FinSets, &f, &budget()).unwrap();
        assert!(cert.algebra.carrier.is_empty());
        assert_eq!(cert.stabilized.index, 0);
    }

    #[test]
    fn one_plus_x_grows() {
        let f = EndofunctorSpec::new("1+x", FunctorSpec::one_plus_x());
        let err = initial_algebra(&FinSets, &f, &Budget::with_stages(8)).unwrap_err();
        let sizes = growth_of(&err).unwrap();
        assert_eq!(sizes[..5], [0, 1, 2, 3, 4]);
    }

    #[test]
    fn binary_streams_grow() {
        let f = EndofunctorSpec::new("2x", FunctorSpec::Product(vec![
            FunctorSpec::Identity,
            FunctorSpec::Constant(FinSet::range(2)),
        ]));
        let err = terminal_coalgebra(&FinSets, &f, &Budget::with_stages(8)).unwrap_err();
        assert_eq!(growth_of(&err).unwrap()[..4], [1, 2, 4, 8]);
    }

    #[test]
    fn constant_terminal_coalgebra() {
        let b = FinSet::range(3);
        let f = EndofunctorSpec::constant(b.clone());
        let cert = terminal_coalgebra(&FinSets, &f, &budget()).unwrap();
        assert_eq!(cert.coalgebra.carrier.len(), 3);
        let id = EndofunctorSpec::identity();
        let cert = terminal_coalgebra(&FinSets, &id, &budget()).unwrap();
        assert_eq!(cert.coalgebra.carrier.len(), 1);
    }

    #[test]
    fn free_algebra_on_constant() {
        let a = FinSet::range(2);
        let f = EndofunctorSpec::constant(a.clone());
        let k = FinSet::atoms(&["k"]);
        let cert = free_algebra(&FinSets, &f, &k, &budget()).unwrap();
        assert_eq!(cert.algebra.carrier.len(), 3);
        assert!(corepresentability_failures(&f, &k, &cert.algebra, 2, 100_000).unwrap().is_empty());
    }

    #[test]
    fn free_identity_algebra_grows_linearly() {
        let f = EndofunctorSpec::identity();
        let k = FinSet::range(2);
        let err = free_algebra(&FinSets, &f, &k, &Budget::with_stages(8)).unwrap_err();
        assert_eq!(growth_of(&err).unwrap()[..4], [2, 4, 6, 8]);
    }

    #[test]
    fn free_on_empty_is_initial() {
        let f = EndofunctorSpec::new("2+x*x*0", FunctorSpec::Sum(vec![
            FunctorSpec::Constant(FinSet::range(2)),
            FunctorSpec::Product(vec![FunctorSpec::Identity, FunctorSpec::Constant(FinSet::empty())]),
        ]));
        let init = initial_algebra(&FinSets, &f, &budget()).unwrap();
        let free = free_algebra(&FinSets, &f, &FinSet::empty(), &budget()).unwrap();
        assert_eq!(init.algebra.carrier.len(), free.algebra.carrier.len());
    }

    #[test]
    fn propagation_of_free_lax_over_constant() {
        let a = FinSet::range(2);
        let f = EndofunctorSpec::constant(a.clone());
        let k = FinSet::atoms(&["k1", "k2"]);
        let lax = algebra::free_lax_on_object(&FinSets, &f, &k).unwrap();
        let step = propagate(&FinSets, &f, &lax).unwrap();
        assert_eq!(step.output.carrier.len(), 4);
        assert_eq!(step.output.apex, a);
        assert!(step.output.resolution.is_bijective());
    }

    #[test]
    fn adamek_lax_agrees_with_free_algebra() {
        let f = EndofunctorSpec::new("x*x+2", FunctorSpec::Sum(vec![
            FunctorSpec::Constant(FinSet::range(2)),
            FunctorSpec::monomial(1, 0),
        ]));
        let k = FinSet::range(2);
        let lax = algebra::free_lax_on_object(&FinSets, &f, &k).unwrap();
        let via_lax = adamek_lax(&FinSets, &f, &lax, &budget()).unwrap();
        let direct = free_algebra(&FinSets, &f, &k, &budget()).unwrap();
        let lax_sizes: Vec<usize> = via_lax.fixed.chain.stages.iter().map(|s| s.carrier.len()).collect();
        let sizes = stage_sizes(&FinSets, &direct.chain);
        let n = lax_sizes.len().min(sizes.len());
        assert_eq!(lax_sizes[..n], sizes[..n]);
        assert_eq!(via_lax.algebra.carrier.len(), direct.algebra.carrier.len());
    }
}

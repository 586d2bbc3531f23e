//! Concretely presented categories.
//!
//! Every ambient category the engine works over implements [`Category`]; the
//! (co)limit structure a construction needs is requested through the
//! capability traits ([`HasInitial`], [`HasPushouts`], [`SequentialColimits`],
//! ...). Sequential (co)limits are computed on finite truncations of a chain
//! and come with a stabilization verdict rather than a guess.

pub mod finset;
pub mod functor;
pub mod presented;
pub mod presheaf;
pub mod thin;
pub mod under;

use std::fmt::Debug;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use finset::{Elem, FinMap, FinSet, FinSets};
pub use functor::{Endofunctor, EndofunctorSpec, FunctorSpec, Monomial};
pub use presented::PresentedCategory;
pub use presheaf::{Presheaf, PresheafCategory, PresheafMap};
pub use under::{UnderCategory, UnderMor, UnderObj};

/// Default number of chain stages before giving up.
pub const DEFAULT_STAGES: usize = 64;
/// Default cap on enumerated hom-set sizes.
pub const DEFAULT_HOM_CAP: usize = 1_000_000;
/// Default cap on the size of a single chain stage.
pub const DEFAULT_MAX_OBJECT: usize = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub stages: usize,
    pub hom_cap: usize,
    pub max_object: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { stages: DEFAULT_STAGES, hom_cap: DEFAULT_HOM_CAP, max_object: DEFAULT_MAX_OBJECT }
    }
}

impl Budget {
    pub fn with_stages(stages: usize) -> Self {
        Budget { stages, ..Budget::default() }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Capabilities {
    pub has_initial: bool,
    pub has_terminal: bool,
    pub has_coproducts: bool,
    pub has_products: bool,
    pub has_pushouts: bool,
    pub has_pullbacks: bool,
    pub hom_enumerable: bool,
}

pub trait Category {
    type Obj: Clone + PartialEq + Debug;
    type Mor: Clone + PartialEq + Debug;

    fn dom(&self, f: &Self::Mor) -> Self::Obj;
    fn cod(&self, f: &Self::Mor) -> Self::Obj;
    fn id(&self, x: &Self::Obj) -> Self::Mor;
    /// `g ∘ f`.
    fn compose(&self, g: &Self::Mor, f: &Self::Mor) -> Result<Self::Mor>;
    /// Complete, duplicate-free list of morphisms `x → y`.
    fn hom(&self, x: &Self::Obj, y: &Self::Obj, cap: usize) -> Result<Vec<Self::Mor>>;
    fn capabilities(&self) -> Capabilities;
    /// A size measure used in growth reports (cardinality for sets).
    fn size(&self, x: &Self::Obj) -> usize;

    fn inverse(&self, f: &Self::Mor) -> Option<Self::Mor> {
        let (x, y) = (self.dom(f), self.cod(f));
        let back = self.hom(&y, &x, DEFAULT_HOM_CAP).ok()?;
        back.into_iter().find(|g| {
            self.compose(g, f).map(|c| c == self.id(&x)).unwrap_or(false)
                && self.compose(f, g).map(|c| c == self.id(&y)).unwrap_or(false)
        })
    }

    fn is_iso(&self, f: &Self::Mor) -> bool {
        self.inverse(f).is_some()
    }

    /// Human-readable reason why `f` fails to be invertible.
    fn non_iso_witness(&self, f: &Self::Mor) -> String {
        format!("{f:?} has no two-sided inverse")
    }

    fn compose_all(&self, maps: &[Self::Mor]) -> Result<Self::Mor> {
        // maps[0] is applied first
        let mut it = maps.iter();
        let first = it.next().ok_or_else(|| Error::Invalid("empty composite".into()))?.clone();
        it.try_fold(first, |acc, g| self.compose(g, &acc))
    }
}

pub trait HasInitial: Category {
    fn initial(&self) -> Self::Obj;
    fn from_initial(&self, x: &Self::Obj) -> Self::Mor;
}

pub trait HasTerminal: Category {
    fn terminal(&self) -> Self::Obj;
    fn to_terminal(&self, x: &Self::Obj) -> Self::Mor;
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pushout<O, M> {
    pub object: O,
    /// Coprojection from the codomain of the first leg.
    pub left: M,
    /// Coprojection from the codomain of the second leg.
    pub right: M,
}

pub trait HasPushouts: Category {
    /// Pushout of the span `X ←r E →a Y`.
    fn pushout(&self, r: &Self::Mor, a: &Self::Mor) -> Result<Pushout<Self::Obj, Self::Mor>>;
    /// The unique map `P → Z` out of a pushout given a commuting cocone.
    fn pushout_mediate(
        &self,
        po: &Pushout<Self::Obj, Self::Mor>,
        f: &Self::Mor,
        g: &Self::Mor,
    ) -> Result<Self::Mor>;
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Coproduct<O, M> {
    pub object: O,
    pub inl: M,
    pub inr: M,
}

pub trait HasCoproducts: Category {
    fn coproduct(&self, x: &Self::Obj, y: &Self::Obj) -> Result<Coproduct<Self::Obj, Self::Mor>>;
    fn copair(
        &self,
        cp: &Coproduct<Self::Obj, Self::Mor>,
        f: &Self::Mor,
        g: &Self::Mor,
    ) -> Result<Self::Mor>;
}

/// Longest step tried when sampling a chain every `h` stages.
pub const MAX_HORIZON: usize = 8;

/// Stage `index` of a chain sampled every `horizon` stages: the links
/// `X_index → X_{index+h} → X_{index+2h}` are composites of `h` chain links.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub index: usize,
    pub horizon: usize,
}

impl Window {
    pub fn new(index: usize, horizon: usize) -> Self {
        Window { index, horizon }
    }

    /// Last link a decision at this window reads.
    pub fn last_link(&self) -> usize {
        self.index + 2 * self.horizon - 1
    }
}

fn one() -> usize {
    1
}

/// A chain that has settled: `colimit` (or limit) with legs for stages
/// `0..=index + horizon`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stabilized<O, M> {
    pub index: usize,
    #[serde(default = "one")]
    pub horizon: usize,
    pub object: O,
    pub legs: Vec<M>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthReport {
    pub sizes: Vec<usize>,
    pub strictly_increasing: bool,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ChainOutcome<O, M> {
    Stabilized(Stabilized<O, M>),
    NotStabilized(GrowthReport),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Chain<O, M> {
    pub stages: Vec<O>,
    pub links: Vec<M>,
    pub outcome: ChainOutcome<O, M>,
}

impl<O, M> Chain<O, M> {
    pub fn stabilized(&self) -> Option<&Stabilized<O, M>> {
        match &self.outcome {
            ChainOutcome::Stabilized(s) => Some(s),
            ChainOutcome::NotStabilized(_) => None,
        }
    }

    pub fn growth(&self) -> Option<&GrowthReport> {
        match &self.outcome {
            ChainOutcome::NotStabilized(g) => Some(g),
            ChainOutcome::Stabilized(_) => None,
        }
    }

    pub fn into_not_stabilized(self) -> Error {
        let sizes = match &self.outcome {
            ChainOutcome::NotStabilized(g) => g.sizes.clone(),
            ChainOutcome::Stabilized(_) => Vec::new(),
        };
        Error::NotStabilized { stages: self.stages.len(), sizes }
    }
}

pub type ChainOf<C> = Chain<<C as Category>::Obj, <C as Category>::Mor>;
pub type StabilizedOf<C> = Stabilized<<C as Category>::Obj, <C as Category>::Mor>;

/// Colimits of ω-chains `X₀ → X₁ → X₂ → …`, decided on finite truncations.
pub trait SequentialColimits: Category {
    /// Whether the chain, known through `links[..=n + 1]`, has settled at stage `n`.
    fn colimit_settles_at(&self, links: &[Self::Mor], at: Window) -> Result<bool>;
    /// Builds the colimit cocone for a chain settled at `n`.
    fn colimit_at(
        &self,
        stages: &[Self::Obj],
        links: &[Self::Mor],
        at: Window,
    ) -> Result<StabilizedOf<Self>>;
    /// The unique map out of the colimit induced by a cocone given stagewise.
    fn colimit_mediate(
        &self,
        links: &[Self::Mor],
        colimit: &StabilizedOf<Self>,
        cocone: &dyn Fn(usize) -> Result<Self::Mor>,
    ) -> Result<Self::Mor>;
}

/// Limits of inverse ω-chains `X₀ ← X₁ ← X₂ ← …`; `links[n]: X_{n+1} → X_n`.
pub trait SequentialLimits: Category {
    fn limit_settles_at(&self, links: &[Self::Mor], at: Window) -> Result<bool>;
    fn limit_at(
        &self,
        stages: &[Self::Obj],
        links: &[Self::Mor],
        at: Window,
    ) -> Result<StabilizedOf<Self>>;
    /// The unique map into the limit induced by a cone `Z → X_n`.
    fn limit_mediate(
        &self,
        links: &[Self::Mor],
        limit: &StabilizedOf<Self>,
        cone: &dyn Fn(usize) -> Result<Self::Mor>,
    ) -> Result<Self::Mor>;
}

fn growth_report(sizes: Vec<usize>, reason: String) -> GrowthReport {
    let strictly_increasing = sizes.windows(2).all(|w| w[0] < w[1]) && sizes.len() > 1;
    GrowthReport { sizes, strictly_increasing, reason }
}

/// Windows whose decision needs exactly the newest of `len` links, earliest
/// index first.
fn fresh_windows(len: usize) -> impl Iterator<Item = Window> {
    (1..=MAX_HORIZON.min(len / 2)).rev().map(move |h| Window::new(len - 2 * h, h))
}

/// Runs the chain `X₀ →first X₁ → …` where `next` produces link `n + 1` from
/// link `n`, until it settles or the budget runs out.
pub fn chain_colimit<C, N>(cat: &C, first: C::Mor, mut next: N, budget: &Budget) -> Result<ChainOf<C>>
where
    C: SequentialColimits + ?Sized,
    N: FnMut(&C::Mor) -> Result<C::Mor>,
{
    let mut stages = vec![cat.dom(&first), cat.cod(&first)];
    let mut links = vec![first];
    loop {
        let sizes: Vec<usize> = stages.iter().map(|x| cat.size(x)).collect();
        if let Some(&big) = sizes.iter().find(|&&s| s > budget.max_object) {
            let report = growth_report(sizes, format!("stage of size {big} exceeds the object cap"));
            return Ok(Chain { stages, links, outcome: ChainOutcome::NotStabilized(report) });
        }
        for at in fresh_windows(links.len()) {
            if cat.colimit_settles_at(&links, at)? {
                let st = cat.colimit_at(&stages, &links, at)?;
                return Ok(Chain { stages, links, outcome: ChainOutcome::Stabilized(st) });
            }
        }
        if stages.len() > budget.stages {
            let report = growth_report(sizes, format!("no stabilization within {} stages", budget.stages));
            return Ok(Chain { stages, links, outcome: ChainOutcome::NotStabilized(report) });
        }
        let link = match next(links.last().expect("chain has a link")) {
            Ok(l) => l,
            Err(Error::BudgetExceeded(m)) => {
                let report = growth_report(sizes, m);
                return Ok(Chain { stages, links, outcome: ChainOutcome::NotStabilized(report) });
            }
            Err(e) => return Err(e),
        };
        if cat.dom(&link) != *stages.last().expect("chain has a stage") {
            return Err(Error::IllTyped("chain link does not start at the previous stage".into()));
        }
        stages.push(cat.cod(&link));
        links.push(link);
    }
}

/// Dual of [`chain_colimit`]: `first: X₁ → X₀`, `next` produces `X_{n+2} → X_{n+1}`.
pub fn chain_limit<C, N>(cat: &C, first: C::Mor, mut next: N, budget: &Budget) -> Result<ChainOf<C>>
where
    C: SequentialLimits + ?Sized,
    N: FnMut(&C::Mor) -> Result<C::Mor>,
{
    let mut stages = vec![cat.cod(&first), cat.dom(&first)];
    let mut links = vec![first];
    loop {
        let sizes: Vec<usize> = stages.iter().map(|x| cat.size(x)).collect();
        if let Some(&big) = sizes.iter().find(|&&s| s > budget.max_object) {
            let report = growth_report(sizes, format!("stage of size {big} exceeds the object cap"));
            return Ok(Chain { stages, links, outcome: ChainOutcome::NotStabilized(report) });
        }
        for at in fresh_windows(links.len()) {
            if cat.limit_settles_at(&links, at)? {
                let st = cat.limit_at(&stages, &links, at)?;
                return Ok(Chain { stages, links, outcome: ChainOutcome::Stabilized(st) });
            }
        }
        if stages.len() > budget.stages {
            let report = growth_report(sizes, format!("no stabilization within {} stages", budget.stages));
            return Ok(Chain { stages, links, outcome: ChainOutcome::NotStabilized(report) });
        }
        let link = match next(links.last().expect("chain has a link")) {
            Ok(l) => l,
            Err(Error::BudgetExceeded(m)) => {
                let report = growth_report(sizes, m);
                return Ok(Chain { stages, links, outcome: ChainOutcome::NotStabilized(report) });
            }
            Err(e) => return Err(e),
        };
        if cat.cod(&link) != *stages.last().expect("chain has a stage") {
            return Err(Error::IllTyped("chain link does not end at the previous stage".into()));
        }
        stages.push(cat.dom(&link));
        links.push(link);
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub law: String,
    pub detail: String,
}

/// Exhaustively checks unit and associativity laws on the listed objects.
pub fn check_category_axioms<C: Category + ?Sized>(
    cat: &C,
    objects: &[C::Obj],
    cap: usize,
) -> Result<Vec<Violation>> {
    let hom = |x: &C::Obj, y: &C::Obj| {
        cat.hom(x, y, cap).map_err(|e| match e {
            Error::BudgetExceeded(m) => Error::NonEnumerable(m),
            other => other,
        })
    };
    let mut out = Vec::new();
    let mut homs = Vec::with_capacity(objects.len());
    for x in objects {
        let mut row = Vec::with_capacity(objects.len());
        for y in objects {
            row.push(hom(x, y)?);
        }
        homs.push(row);
    }
    for (i, x) in objects.iter().enumerate() {
        let idx = cat.id(x);
        if cat.dom(&idx) != *x || cat.cod(&idx) != *x {
            out.push(Violation { law: "identity typing".into(), detail: format!("id at {x:?}") });
        }
        for (j, _) in objects.iter().enumerate() {
            for f in &homs[i][j] {
                let y = cat.cod(f);
                if cat.compose(f, &idx).ok().as_ref() != Some(f) {
                    out.push(Violation { law: "right unit".into(), detail: format!("{f:?} ∘ id") });
                }
                if cat.compose(&cat.id(&y), f).ok().as_ref() != Some(f) {
                    out.push(Violation { law: "left unit".into(), detail: format!("id ∘ {f:?}") });
                }
            }
        }
    }
    for i in 0..objects.len() {
        for j in 0..objects.len() {
            for k in 0..objects.len() {
                for l in 0..objects.len() {
                    for f in &homs[i][j] {
                        for g in &homs[j][k] {
                            for h in &homs[k][l] {
                                let left = cat.compose(h, g).and_then(|hg| cat.compose(&hg, f));
                                let right = cat.compose(g, f).and_then(|gf| cat.compose(h, &gf));
                                match (left, right) {
                                    (Ok(a), Ok(b)) if a == b => {}
                                    (a, b) => out.push(Violation {
                                        law: "associativity".into(),
                                        detail: format!("({h:?}, {g:?}, {f:?}): {a:?} vs {b:?}"),
                                    }),
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Mediating-map search: counts maps `P → Z` compatible with a cocone.
pub fn count_pushout_mediators<C: Category + ?Sized>(
    cat: &C,
    po: &Pushout<C::Obj, C::Mor>,
    f: &C::Mor,
    g: &C::Mor,
    cap: usize,
) -> Result<usize> {
    let z = cat.cod(f);
    let mut count = 0;
    for u in cat.hom(&po.object, &z, cap)? {
        if cat.compose(&u, &po.left)? == *f && cat.compose(&u, &po.right)? == *g {
            count += 1;
        }
    }
    Ok(count)
}

/// Checks the pushout universal property against every commuting cocone into
/// the given targets: exactly one mediating map each.
pub fn verify_pushout_universal<C: Category + ?Sized>(
    cat: &C,
    r: &C::Mor,
    a: &C::Mor,
    po: &Pushout<C::Obj, C::Mor>,
    targets: &[C::Obj],
    cap: usize,
) -> Result<bool> {
    if cat.compose(&po.left, r)? != cat.compose(&po.right, a)? {
        return Ok(false);
    }
    let (x, y) = (cat.cod(r), cat.cod(a));
    for z in targets {
        let fs = cat.hom(&x, z, cap)?;
        let gs = cat.hom(&y, z, cap)?;
        for f in &fs {
            let fr = cat.compose(f, r)?;
            for g in &gs {
                if fr == cat.compose(g, a)? && count_pushout_mediators(cat, po, f, g, cap)? != 1 {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Searches a finite object list for an initial object.
pub fn find_initial<C: Category + ?Sized>(cat: &C, objects: &[C::Obj], cap: usize) -> Result<Option<C::Obj>> {
    for x in objects {
        let mut ok = true;
        for y in objects {
            if cat.hom(x, y, cap)?.len() != 1 {
                ok = false;
                break;
            }
        }
        if ok {
            return Ok(Some(x.clone()));
        }
    }
    Ok(None)
}

/// Searches a finite object list for a terminal object.
pub fn find_terminal<C: Category + ?Sized>(cat: &C, objects: &[C::Obj], cap: usize) -> Result<Option<C::Obj>> {
    for y in objects {
        let mut ok = true;
        for x in objects {
            if cat.hom(x, y, cap)?.len() != 1 {
                ok = false;
                break;
            }
        }
        if ok {
            return Ok(Some(y.clone()));
        }
    }
    Ok(None)
}

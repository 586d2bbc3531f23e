//! The category of finite sets.
//!
//! Sets are canonically sorted element lists and maps are dense index arrays,
//! so morphism equality is extensional equality.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{
    Window,
    Capabilities, Category, Coproduct, HasCoproducts, HasInitial, HasPushouts, HasTerminal, Pushout,
    SequentialColimits, SequentialLimits, Stabilized,
};
use crate::error::{Error, Result};

/// An element of a finite set. Coproduct summands are tagged with `Inj`,
/// products and exponentials are `Tuple`s.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "ElemRepr", into = "ElemRepr")]
pub enum Elem {
    Int(i64),
    Atom(String),
    Tuple(Vec<Elem>),
    Inj(usize, Box<Elem>),
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ElemRepr {
    Int(i64),
    Atom(String),
    Tuple(Vec<Elem>),
    Inj {
        #[serde(rename = "in")]
        inj: (usize, Box<Elem>),
    },
}

impl From<ElemRepr> for Elem {
    fn from(r: ElemRepr) -> Self {
        match r {
            ElemRepr::Int(i) => Elem::Int(i),
            ElemRepr::Atom(s) => Elem::Atom(s),
            ElemRepr::Tuple(v) => Elem::Tuple(v),
            ElemRepr::Inj { inj: (i, e) } => Elem::Inj(i, e),
        }
    }
}

impl From<Elem> for ElemRepr {
    fn from(e: Elem) -> Self {
        match e {
            Elem::Int(i) => ElemRepr::Int(i),
            Elem::Atom(s) => ElemRepr::Atom(s),
            Elem::Tuple(v) => ElemRepr::Tuple(v),
            Elem::Inj(i, e) => ElemRepr::Inj { inj: (i, e) },
        }
    }
}

impl Elem {
    pub fn atom(s: impl Into<String>) -> Self {
        Elem::Atom(s.into())
    }

    pub fn unit() -> Self {
        Elem::Tuple(Vec::new())
    }

    pub fn inj(i: usize, e: Elem) -> Self {
        Elem::Inj(i, Box::new(e))
    }

    pub fn pair(a: Elem, b: Elem) -> Self {
        Elem::Tuple(vec![a, b])
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Elem::Int(i) => write!(f, "{i}"),
            Elem::Atom(s) => write!(f, "{s}"),
            Elem::Tuple(v) => {
                write!(f, "(")?;
                for (i, e) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{e}")?;
                }
                write!(f, ")")
            }
            Elem::Inj(i, e) => write!(f, "in{i}:{e}"),
        }
    }
}

/// A finite set with canonically sorted, duplicate-free elements.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "Vec<Elem>", into = "Vec<Elem>")]
pub struct FinSet(Arc<[Elem]>);

impl From<Vec<Elem>> for FinSet {
    fn from(v: Vec<Elem>) -> Self {
        FinSet::new(v)
    }
}

impl From<FinSet> for Vec<Elem> {
    fn from(s: FinSet) -> Self {
        s.0.to_vec()
    }
}

impl fmt::Debug for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.0.iter()).finish()
    }
}

impl fmt::Display for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

impl FinSet {
    pub fn new(elems: impl IntoIterator<Item = Elem>) -> Self {
        let mut v: Vec<Elem> = elems.into_iter().collect();
        v.sort();
        v.dedup();
        FinSet(v.into())
    }

    /// Elements must already be sorted and distinct.
    fn from_sorted(v: Vec<Elem>) -> Self {
        debug_assert!(v.windows(2).all(|w| w[0] < w[1]));
        FinSet(v.into())
    }

    pub fn empty() -> Self {
        FinSet(Vec::new().into())
    }

    /// `{0, 1, …, n-1}`.
    pub fn range(n: usize) -> Self {
        FinSet::from_sorted((0..n as i64).map(Elem::Int).collect())
    }

    pub fn atoms<S: AsRef<str>>(names: &[S]) -> Self {
        FinSet::new(names.iter().map(|s| Elem::atom(s.as_ref())))
    }

    pub fn singleton(e: Elem) -> Self {
        FinSet::from_sorted(vec![e])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn elems(&self) -> &[Elem] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Elem> {
        self.0.iter()
    }

    pub fn get(&self, i: usize) -> &Elem {
        &self.0[i]
    }

    pub fn index_of(&self, e: &Elem) -> Option<usize> {
        self.0.binary_search(e).ok()
    }

    pub fn contains(&self, e: &Elem) -> bool {
        self.index_of(e).is_some()
    }

    pub fn is_subset(&self, other: &FinSet) -> bool {
        self.iter().all(|e| other.contains(e))
    }

    /// Sub-set of the elements at the given sorted positions.
    fn select(&self, idx: impl IntoIterator<Item = usize>) -> FinSet {
        FinSet::from_sorted(idx.into_iter().map(|i| self.0[i].clone()).collect())
    }

    pub fn coproduct(&self, other: &FinSet) -> FinSet {
        let left = self.iter().map(|x| Elem::inj(0, x.clone()));
        let right = other.iter().map(|y| Elem::inj(1, y.clone()));
        FinSet::from_sorted(left.chain(right).collect())
    }

    /// Tagged coproduct of several sets, summand `i` tagged `Inj(i, _)`.
    pub fn sum(parts: &[FinSet]) -> FinSet {
        let mut v = Vec::with_capacity(parts.iter().map(|p| p.len()).sum());
        for (i, p) in parts.iter().enumerate() {
            v.extend(p.iter().map(|x| Elem::inj(i, x.clone())));
        }
        FinSet::from_sorted(v)
    }

    /// Cartesian product of several sets as tuples in lexicographic order.
    pub fn product(parts: &[FinSet]) -> FinSet {
        let total = parts.iter().map(|p| p.len()).product::<usize>();
        let mut out = Vec::with_capacity(total);
        if total == 0 {
            return FinSet::empty();
        }
        let mut idx = vec![0usize; parts.len()];
        loop {
            out.push(Elem::Tuple(idx.iter().zip(parts).map(|(&i, p)| p.0[i].clone()).collect()));
            let mut k = parts.len();
            loop {
                if k == 0 {
                    return FinSet::from_sorted(out);
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < parts[k].len() {
                    break;
                }
                idx[k] = 0;
            }
        }
    }

    /// Number of elements of `self^n`, or `None` on overflow.
    pub fn pow_size(&self, n: usize) -> Option<usize> {
        let n = u32::try_from(n).ok()?;
        self.len().checked_pow(n)
    }
}

/// A total function between finite sets, stored as codomain indices.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FinMap {
    dom: FinSet,
    cod: FinSet,
    values: Vec<usize>,
}

impl fmt::Display for FinMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl fmt::Debug for FinMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.dom.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}↦{}", self.cod.0[self.values[i]])?;
        }
        write!(f, "}}")
    }
}

impl FinMap {
    pub fn new(dom: FinSet, cod: FinSet, values: Vec<usize>) -> Result<Self> {
        if values.len() != dom.len() {
            return Err(Error::IllTyped(format!(
                "map table has {} entries for a domain of size {}",
                values.len(),
                dom.len()
            )));
        }
        if let Some(v) = values.iter().find(|&&v| v >= cod.len()) {
            return Err(Error::IllTyped(format!("map value index {v} outside codomain of size {}", cod.len())));
        }
        Ok(FinMap { dom, cod, values })
    }

    pub fn from_fn(dom: &FinSet, cod: &FinSet, mut f: impl FnMut(&Elem) -> Elem) -> Result<Self> {
        let values = dom
            .iter()
            .map(|x| {
                let y = f(x);
                cod.index_of(&y)
                    .ok_or_else(|| Error::IllTyped(format!("{x} ↦ {y}, which is not in the codomain {cod:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FinMap { dom: dom.clone(), cod: cod.clone(), values })
    }

    pub fn from_pairs(dom: &FinSet, cod: &FinSet, pairs: &[(Elem, Elem)]) -> Result<Self> {
        let mut values = vec![usize::MAX; dom.len()];
        for (x, y) in pairs {
            let i = dom.index_of(x).ok_or_else(|| Error::IllTyped(format!("{x} is not in the domain")))?;
            let j = cod.index_of(y).ok_or_else(|| Error::IllTyped(format!("{y} is not in the codomain")))?;
            if values[i] != usize::MAX && values[i] != j {
                return Err(Error::IllTyped(format!("{x} is assigned twice")));
            }
            values[i] = j;
        }
        if let Some(i) = values.iter().position(|&v| v == usize::MAX) {
            return Err(Error::IllTyped(format!("no value given for {}", dom.0[i])));
        }
        Ok(FinMap { dom: dom.clone(), cod: cod.clone(), values })
    }

    pub fn identity(x: &FinSet) -> Self {
        FinMap { dom: x.clone(), cod: x.clone(), values: (0..x.len()).collect() }
    }

    pub fn constant(dom: &FinSet, cod: &FinSet, y: &Elem) -> Result<Self> {
        let j = cod.index_of(y).ok_or_else(|| Error::IllTyped(format!("{y} is not in the codomain")))?;
        Ok(FinMap { dom: dom.clone(), cod: cod.clone(), values: vec![j; dom.len()] })
    }

    /// Inclusion of a subset.
    pub fn inclusion(sub: &FinSet, sup: &FinSet) -> Result<Self> {
        FinMap::from_fn(sub, sup, Elem::clone)
    }

    pub fn dom(&self) -> &FinSet {
        &self.dom
    }

    pub fn cod(&self) -> &FinSet {
        &self.cod
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn apply_idx(&self, i: usize) -> usize {
        self.values[i]
    }

    pub fn apply(&self, x: &Elem) -> Option<&Elem> {
        self.dom.index_of(x).map(|i| &self.cod.0[self.values[i]])
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&Elem, &Elem)> + '_ {
        self.dom.iter().zip(self.values.iter().map(|&j| &self.cod.0[j]))
    }

    pub fn then(&self, g: &FinMap) -> Result<FinMap> {
        if self.cod != g.dom {
            return Err(Error::IllTyped(format!("cannot compose {:?} after {:?}", g, self)));
        }
        let values = self.values.iter().map(|&j| g.values[j]).collect();
        Ok(FinMap { dom: self.dom.clone(), cod: g.cod.clone(), values })
    }

    /// Sorted, duplicate-free codomain indices hit by the map.
    pub fn image_indices(&self) -> Vec<usize> {
        let mut hit = vec![false; self.cod.len()];
        for &v in &self.values {
            hit[v] = true;
        }
        hit.iter().enumerate().filter_map(|(j, &h)| h.then_some(j)).collect()
    }

    pub fn image(&self) -> FinSet {
        self.cod.select(self.image_indices())
    }

    pub fn injectivity_witness(&self) -> Option<(Elem, Elem)> {
        let mut seen = vec![usize::MAX; self.cod.len()];
        for (i, &v) in self.values.iter().enumerate() {
            if seen[v] != usize::MAX {
                return Some((self.dom.0[seen[v]].clone(), self.dom.0[i].clone()));
            }
            seen[v] = i;
        }
        None
    }

    pub fn surjectivity_witness(&self) -> Option<Elem> {
        let img = self.image_indices();
        if img.len() == self.cod.len() {
            return None;
        }
        let mut hit = vec![false; self.cod.len()];
        img.into_iter().for_each(|j| hit[j] = true);
        hit.iter().position(|h| !h).map(|j| self.cod.0[j].clone())
    }

    pub fn is_injective(&self) -> bool {
        self.injectivity_witness().is_none()
    }

    pub fn is_bijective(&self) -> bool {
        self.dom.len() == self.cod.len() && self.is_injective()
    }

    pub fn inverse(&self) -> Option<FinMap> {
        if !self.is_bijective() {
            return None;
        }
        let mut values = vec![0; self.cod.len()];
        for (i, &v) in self.values.iter().enumerate() {
            values[v] = i;
        }
        Some(FinMap { dom: self.cod.clone(), cod: self.dom.clone(), values })
    }

    /// Describes why the map is not a bijection, if it is not.
    pub fn non_bijection_witness(&self) -> Option<String> {
        if let Some((a, b)) = self.injectivity_witness() {
            return Some(format!("{a} and {b} have the same image"));
        }
        self.surjectivity_witness().map(|y| format!("{y} is not in the image"))
    }

    /// Restriction to a subset of the domain.
    pub fn restrict(&self, sub: &FinSet) -> Result<FinMap> {
        FinMap::inclusion(sub, &self.dom)?.then(self)
    }

    /// The same map with a smaller codomain containing its image.
    pub fn corestrict(&self, sub: &FinSet) -> Result<FinMap> {
        FinMap::from_fn(&self.dom, sub, |x| self.apply(x).expect("x in domain").clone())
    }
}

/// Union-find over `0..n` whose class representative is the smallest member.
#[derive(Debug, Clone)]
pub(crate) struct MinUnionFind {
    parent: Vec<usize>,
}

impl MinUnionFind {
    pub(crate) fn new(n: usize) -> Self {
        MinUnionFind { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[x] != root {
            let next = self.parent[x];
            self.parent[x] = root;
            x = next;
        }
        root
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        match ra.cmp(&rb) {
            Ordering::Less => self.parent[rb] = ra,
            Ordering::Greater => self.parent[ra] = rb,
            Ordering::Equal => {}
        }
    }
}

/// The category of finite sets and total functions.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FinSets;

impl Category for FinSets {
    type Obj = FinSet;
    type Mor = FinMap;

    fn dom(&self, f: &FinMap) -> FinSet {
        f.dom.clone()
    }

    fn cod(&self, f: &FinMap) -> FinSet {
        f.cod.clone()
    }

    fn id(&self, x: &FinSet) -> FinMap {
        FinMap::identity(x)
    }

    fn compose(&self, g: &FinMap, f: &FinMap) -> Result<FinMap> {
        f.then(g)
    }

    fn hom(&self, x: &FinSet, y: &FinSet, cap: usize) -> Result<Vec<FinMap>> {
        let count = y
            .pow_size(x.len())
            .filter(|&c| c <= cap)
            .ok_or_else(|| Error::BudgetExceeded(format!("hom set of size {}^{} over the cap {cap}", y.len(), x.len())))?;
        let mut out = Vec::with_capacity(count);
        if count == 0 {
            return Ok(out);
        }
        let mut values = vec![0usize; x.len()];
        loop {
            out.push(FinMap { dom: x.clone(), cod: y.clone(), values: values.clone() });
            let mut k = values.len();
            loop {
                if k == 0 {
                    return Ok(out);
                }
                k -= 1;
                values[k] += 1;
                if values[k] < y.len() {
                    break;
                }
                values[k] = 0;
            }
        }
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities {
            has_initial: true,
            has_terminal: true,
            has_coproducts: true,
            has_products: true,
            has_pushouts: true,
            has_pullbacks: true,
            hom_enumerable: true,
        }
    }

    fn size(&self, x: &FinSet) -> usize {
        x.len()
    }

    fn inverse(&self, f: &FinMap) -> Option<FinMap> {
        f.inverse()
    }

    fn non_iso_witness(&self, f: &FinMap) -> String {
        f.non_bijection_witness().unwrap_or_else(|| "map is a bijection".into())
    }
}

impl HasInitial for FinSets {
    fn initial(&self) -> FinSet {
        FinSet::empty()
    }

    fn from_initial(&self, x: &FinSet) -> FinMap {
        FinMap { dom: FinSet::empty(), cod: x.clone(), values: Vec::new() }
    }
}

impl HasTerminal for FinSets {
    fn terminal(&self) -> FinSet {
        FinSet::singleton(Elem::unit())
    }

    fn to_terminal(&self, x: &FinSet) -> FinMap {
        FinMap { dom: x.clone(), cod: self.terminal(), values: vec![0; x.len()] }
    }
}

impl HasCoproducts for FinSets {
    fn coproduct(&self, x: &FinSet, y: &FinSet) -> Result<Coproduct<FinSet, FinMap>> {
        let object = x.coproduct(y);
        let inl = FinMap { dom: x.clone(), cod: object.clone(), values: (0..x.len()).collect() };
        let inr = FinMap { dom: y.clone(), cod: object.clone(), values: (x.len()..x.len() + y.len()).collect() };
        Ok(Coproduct { object, inl, inr })
    }

    fn copair(&self, cp: &Coproduct<FinSet, FinMap>, f: &FinMap, g: &FinMap) -> Result<FinMap> {
        if f.dom != cp.inl.dom || g.dom != cp.inr.dom || f.cod != g.cod {
            return Err(Error::IllTyped("copairing of maps with mismatched ends".into()));
        }
        let mut values = f.values.clone();
        values.extend_from_slice(&g.values);
        Ok(FinMap { dom: cp.object.clone(), cod: f.cod.clone(), values })
    }
}

impl HasPushouts for FinSets {
    fn pushout(&self, r: &FinMap, a: &FinMap) -> Result<Pushout<FinSet, FinMap>> {
        if r.dom != a.dom {
            return Err(Error::IllTyped("pushout legs have different sources".into()));
        }
        let (x, y) = (&r.cod, &a.cod);
        let nx = x.len();
        let mut uf = MinUnionFind::new(nx + y.len());
        for (&i, &j) in r.values.iter().zip(&a.values) {
            uf.union(i, nx + j);
        }
        // Tagged order on X ⊔ Y agrees with index order, so class minima are
        // the minimal tagged members.
        let roots: Vec<usize> = (0..nx + y.len()).map(|k| uf.find(k)).collect();
        let mut reps: Vec<usize> = roots.clone();
        reps.sort_unstable();
        reps.dedup();
        let tagged = |k: usize| if k < nx { Elem::inj(0, x.0[k].clone()) } else { Elem::inj(1, y.0[k - nx].clone()) };
        let object = FinSet::from_sorted(reps.iter().map(|&k| tagged(k)).collect());
        let pos = |k: usize| reps.binary_search(&roots[k]).expect("root is a representative");
        let left = FinMap { dom: x.clone(), cod: object.clone(), values: (0..nx).map(pos).collect() };
        let right = FinMap { dom: y.clone(), cod: object.clone(), values: (nx..nx + y.len()).map(pos).collect() };
        Ok(Pushout { object, left, right })
    }

    fn pushout_mediate(&self, po: &Pushout<FinSet, FinMap>, f: &FinMap, g: &FinMap) -> Result<FinMap> {
        if f.dom != po.left.dom || g.dom != po.right.dom || f.cod != g.cod {
            return Err(Error::IllTyped("cocone does not match the pushout".into()));
        }
        let mut values = vec![usize::MAX; po.object.len()];
        for (src, leg) in [(f, &po.left), (g, &po.right)] {
            for (i, &p) in leg.values.iter().enumerate() {
                let v = src.values[i];
                if values[p] != usize::MAX && values[p] != v {
                    return Err(Error::IllTyped(format!("cocone does not commute at {}", po.object.0[p])));
                }
                values[p] = v;
            }
        }
        Ok(FinMap { dom: po.object.clone(), cod: f.cod.clone(), values })
    }
}

impl FinSets {
    pub fn product(&self, x: &FinSet, y: &FinSet) -> (FinSet, FinMap, FinMap) {
        let object = FinSet::product(&[x.clone(), y.clone()]);
        let n = y.len();
        let p1 = FinMap { dom: object.clone(), cod: x.clone(), values: (0..object.len()).map(|k| k / n).collect() };
        let p2 = FinMap { dom: object.clone(), cod: y.clone(), values: (0..object.len()).map(|k| k % n).collect() };
        (object, p1, p2)
    }

    /// Pullback of the cospan `X →f Z ←g Y` as a subset of `X × Y`.
    pub fn pullback(&self, f: &FinMap, g: &FinMap) -> Result<(FinSet, FinMap, FinMap)> {
        if f.cod != g.cod {
            return Err(Error::IllTyped("pullback legs have different targets".into()));
        }
        let mut elems = Vec::new();
        let mut p1 = Vec::new();
        let mut p2 = Vec::new();
        for (i, x) in f.dom.iter().enumerate() {
            for (j, y) in g.dom.iter().enumerate() {
                if f.values[i] == g.values[j] {
                    elems.push(Elem::pair(x.clone(), y.clone()));
                    p1.push(i);
                    p2.push(j);
                }
            }
        }
        let object = FinSet::from_sorted(elems);
        Ok((
            object.clone(),
            FinMap { dom: object.clone(), cod: f.dom.clone(), values: p1 },
            FinMap { dom: object, cod: g.dom.clone(), values: p2 },
        ))
    }
}

/// `links[n+1]` restricted to the image of `links[n]`: injective and onto the
/// image of `links[n+1]`.
fn image_bijects(prev: &FinMap, next: &FinMap) -> bool {
    let img = prev.image_indices();
    let mut hit = vec![false; next.cod.len()];
    for &i in &img {
        let v = next.values[i];
        if hit[v] {
            return false;
        }
        hit[v] = true;
    }
    img.len() == next.image_indices().len()
}

/// `links[from] ; … ; links[to - 1]`, the composite `X_from → X_to`.
fn composite(links: &[FinMap], from: usize, to: usize) -> Result<FinMap> {
    let mut m = links.get(from).ok_or_else(|| Error::Invalid(format!("chain truncated before link {from}")))?.clone();
    for k in from + 1..to {
        let link = links.get(k).ok_or_else(|| Error::Invalid(format!("chain truncated before link {k}")))?;
        m = m.then(link)?;
    }
    Ok(m)
}

/// `links[to - 1] ; … ; links[from]`, the composite `X_to → X_from` of an inverse chain.
fn co_composite(links: &[FinMap], from: usize, to: usize) -> Result<FinMap> {
    let mut m = links.get(to - 1).ok_or_else(|| Error::Invalid(format!("chain truncated before link {}", to - 1)))?.clone();
    for k in (from..to - 1).rev() {
        m = m.then(&links[k])?;
    }
    Ok(m)
}

/// Settled at window `(n, h)` when `d: X_{n+h} → X_{n+2h}` maps the image of
/// `c: X_n → X_{n+h}` bijectively onto its own image; the colimit is `im c`.
impl SequentialColimits for FinSets {
    fn colimit_settles_at(&self, links: &[FinMap], at: Window) -> Result<bool> {
        let (n, h) = (at.index, at.horizon);
        let c = composite(links, n, n + h)?;
        let d = composite(links, n + h, n + 2 * h)?;
        Ok(image_bijects(&c, &d))
    }

    fn colimit_at(&self, stages: &[FinSet], links: &[FinMap], at: Window) -> Result<Stabilized<FinSet, FinMap>> {
        let (n, h) = (at.index, at.horizon);
        let c = composite(links, n, n + h)?;
        let d = composite(links, n + h, n + 2 * h)?;
        if !image_bijects(&c, &d) {
            return Err(Error::Invalid(format!("chain has not settled at stage {n}")));
        }
        let object = c.image();
        let beta = d.restrict(&object)?.corestrict(&d.image())?;
        let beta_inv = beta.inverse().expect("image restriction is a bijection");
        let mut legs = Vec::with_capacity(n + h + 1);
        for k in 0..=n + h {
            let leg = if k < n {
                composite(links, k, n + h)?.corestrict(&object)?
            } else if k == n {
                c.corestrict(&object)?
            } else {
                composite(links, k, n + 2 * h)?.corestrict(&d.image())?.then(&beta_inv)?
            };
            legs.push(leg);
        }
        debug_assert_eq!(legs[0].dom, stages[0]);
        Ok(Stabilized { index: n, horizon: h, object, legs })
    }

    fn colimit_mediate(
        &self,
        _links: &[FinMap],
        colimit: &Stabilized<FinSet, FinMap>,
        cocone: &dyn Fn(usize) -> Result<FinMap>,
    ) -> Result<FinMap> {
        cocone(colimit.index + colimit.horizon)?.restrict(&colimit.object)
    }
}

/// Settled at window `(n, h)` when `c: X_{n+h} → X_n` maps the image of
/// `d: X_{n+2h} → X_{n+h}` bijectively onto its own image; the limit is `im c`.
impl SequentialLimits for FinSets {
    fn limit_settles_at(&self, links: &[FinMap], at: Window) -> Result<bool> {
        let (n, h) = (at.index, at.horizon);
        let c = co_composite(links, n, n + h)?;
        let d = co_composite(links, n + h, n + 2 * h)?;
        Ok(image_bijects(&d, &c))
    }

    fn limit_at(&self, stages: &[FinSet], links: &[FinMap], at: Window) -> Result<Stabilized<FinSet, FinMap>> {
        let (n, h) = (at.index, at.horizon);
        let c = co_composite(links, n, n + h)?;
        let d = co_composite(links, n + h, n + 2 * h)?;
        if !image_bijects(&d, &c) {
            return Err(Error::Invalid(format!("chain has not settled at stage {n}")));
        }
        let object = c.image();
        let upper = d.image();
        let beta = c.restrict(&upper)?.corestrict(&object)?;
        let beta_inv = beta.inverse().expect("image restriction is a bijection");
        let lift = beta_inv.then(&FinMap::inclusion(&upper, &stages[n + h])?)?;
        let incl = FinMap::inclusion(&object, &stages[n])?;
        let mut legs = Vec::with_capacity(n + h + 1);
        for k in 0..=n + h {
            let leg = if k < n {
                incl.then(&co_composite(links, k, n)?)?
            } else if k == n {
                incl.clone()
            } else if k == n + h {
                lift.clone()
            } else {
                lift.then(&co_composite(links, k, n + h)?)?
            };
            legs.push(leg);
        }
        Ok(Stabilized { index: n, horizon: h, object, legs })
    }

    fn limit_mediate(
        &self,
        _links: &[FinMap],
        limit: &Stabilized<FinSet, FinMap>,
        cone: &dyn Fn(usize) -> Result<FinMap>,
    ) -> Result<FinMap> {
        cone(limit.index)?.corestrict(&limit.object)
    }
}

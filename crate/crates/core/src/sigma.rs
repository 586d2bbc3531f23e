//! The simplex category Δ and the category Σ of uniform cell shapes.
//!
//! An object of Σ is a sequence `(k₀,…,k_{n−1})` of positive integers. A
//! morphism is stored in wreath form: a Δ-map `φ: [k₀] → [l₀]` at the root,
//! and for every pair `(i, j)` with `φ(i−1) < j ≤ φ(i)` a morphism between the
//! tails. Raw levelwise sequences `(φ₀, φ₁, …)` embed diagonally (every child
//! is the same tail morphism), which identifies sequences that agree up to and
//! including their first constant component.

use std::collections::HashMap;
use std::fmt;
use std::ops::Range;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cat::finset::MinUnionFind;
use crate::cat::{Capabilities, Category, Violation};
use crate::error::{Error, Result};

/// A monotone map `[dom] → [cod]` between finite ordinals `{0,…,n}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DeltaMap {
    dom: usize,
    cod: usize,
    values: Vec<usize>,
}

impl DeltaMap {
    pub fn new(dom: usize, cod: usize, values: Vec<usize>) -> Result<Self> {
        if values.len() != dom + 1 {
            return Err(Error::IllTyped(format!("a map out of [{dom}] needs {} values, got {}", dom + 1, values.len())));
        }
        if values.iter().any(|&v| v > cod) {
            return Err(Error::IllTyped(format!("values {values:?} leave [{cod}]")));
        }
        if values.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::IllTyped(format!("values {values:?} are not weakly increasing")));
        }
        Ok(DeltaMap { dom, cod, values })
    }

    pub fn identity(n: usize) -> Self {
        DeltaMap { dom: n, cod: n, values: (0..=n).collect() }
    }

    pub fn constant(dom: usize, cod: usize, at: usize) -> Result<Self> {
        DeltaMap::new(dom, cod, vec![at; dom + 1])
    }

    pub fn dom(&self) -> usize {
        self.dom
    }

    pub fn cod(&self) -> usize {
        self.cod
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn apply(&self, i: usize) -> usize {
        self.values[i]
    }

    /// `self ∘ f`.
    pub fn after(&self, f: &DeltaMap) -> Result<DeltaMap> {
        if f.cod != self.dom {
            return Err(Error::IllTyped(format!("[{}] → [{}] cannot follow a map into [{}]", self.dom, self.cod, f.cod)));
        }
        Ok(DeltaMap { dom: f.dom, cod: self.cod, values: f.values.iter().map(|&i| self.values[i]).collect() })
    }

    pub fn is_constant(&self) -> bool {
        self.values.first() == self.values.last()
    }

    pub fn is_constant_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    /// `φ(i) = φ(0) + i` for every `i`.
    pub fn is_inert(&self) -> bool {
        self.values.iter().enumerate().all(|(i, &v)| v == self.values[0] + i)
    }

    /// `φ(dom) − φ(0)`, the number of codomain intervals covered.
    pub fn span(&self) -> usize {
        self.values[self.dom] - self.values[0]
    }
}

impl fmt::Display for DeltaMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vs: Vec<String> = self.values.iter().map(usize::to_string).collect();
        write!(f, "[{}]", vs.join(","))
    }
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * u128::from(n - i) / u128::from(i + 1))
}

/// All monotone maps `[m] → [n]` in lexicographic order.
pub fn delta_hom_enumerate(m: usize, n: usize, cap: usize) -> Result<Vec<DeltaMap>> {
    let count = binomial((m + n + 1) as u64, (m + 1) as u64);
    if count > cap as u128 {
        return Err(Error::BudgetExceeded(format!("{count} maps [{m}] → [{n}]")));
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut v = vec![0usize; m + 1];
    loop {
        out.push(DeltaMap { dom: m, cod: n, values: v.clone() });
        let Some(i) = v.iter().rposition(|&x| x < n) else { break };
        let next = v[i] + 1;
        v[i..].iter_mut().for_each(|x| *x = next);
    }
    Ok(out)
}

/// A uniform cell shape; stored entries are positive and the ones beyond
/// `dim` are implicitly zero.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct SigmaObject(Vec<usize>);

impl SigmaObject {
    pub fn new(entries: Vec<usize>) -> Result<Self> {
        if entries.contains(&0) {
            return Err(Error::Invalid(format!("entries {entries:?} must be positive")));
        }
        Ok(SigmaObject(entries))
    }

    pub fn point() -> Self {
        SigmaObject(Vec::new())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    pub fn entry(&self, i: usize) -> usize {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn head(&self) -> usize {
        self.entry(0)
    }

    pub fn tail(&self) -> SigmaObject {
        SigmaObject(self.0.get(1..).unwrap_or_default().to_vec())
    }

    /// `[k⃗, l]`: appends `l` when positive.
    pub fn extend(&self, l: usize) -> SigmaObject {
        let mut v = self.0.clone();
        if l > 0 {
            v.push(l);
        }
        SigmaObject(v)
    }
}

impl TryFrom<Vec<usize>> for SigmaObject {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        SigmaObject::new(v)
    }
}

impl From<SigmaObject> for Vec<usize> {
    fn from(x: SigmaObject) -> Self {
        x.0
    }
}

impl fmt::Display for SigmaObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vs: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "({})", vs.join(","))
    }
}

impl FromStr for SigmaObject {
    type Err = Error;

    /// Accepts `2,1`, `(2,1)` and `()`.
    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim().trim_start_matches('(').trim_end_matches(')').trim();
        if body.is_empty() {
            return Ok(SigmaObject::point());
        }
        let entries = body
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|e| Error::Invalid(format!("bad entry {t:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        SigmaObject::new(entries)
    }
}

/// Pairs `(i, j)` with `φ(i−1) < j ≤ φ(i)`, lexicographically.
fn pairs(root: &DeltaMap) -> impl Iterator<Item = (usize, usize)> + '_ {
    (1..=root.dom).flat_map(move |i| (root.values[i - 1] + 1..=root.values[i]).map(move |j| (i, j)))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SigmaMorphism {
    source: SigmaObject,
    target: SigmaObject,
    root: DeltaMap,
    children: Vec<SigmaMorphism>,
}

impl SigmaMorphism {
    pub fn new(source: SigmaObject, target: SigmaObject, root: DeltaMap, children: Vec<SigmaMorphism>) -> Result<Self> {
        if root.dom != source.head() || root.cod != target.head() {
            return Err(Error::IllTyped(format!("root {root} does not go {source} → {target}")));
        }
        if children.len() != root.span() {
            return Err(Error::IllTyped(format!("root {root} needs {} children, got {}", root.span(), children.len())));
        }
        let (s, t) = (source.tail(), target.tail());
        if children.iter().any(|c| c.source != s || c.target != t) {
            return Err(Error::IllTyped(format!("children must go {s} → {t}")));
        }
        Ok(SigmaMorphism { source, target, root, children })
    }

    pub fn identity(x: &SigmaObject) -> Self {
        let root = DeltaMap::identity(x.head());
        let tail = x.tail();
        let children = if x.head() > 0 { vec![SigmaMorphism::identity(&tail); x.head()] } else { Vec::new() };
        SigmaMorphism { source: x.clone(), target: x.clone(), root, children }
    }

    pub fn source(&self) -> &SigmaObject {
        &self.source
    }

    pub fn target(&self) -> &SigmaObject {
        &self.target
    }

    pub fn root(&self) -> &DeltaMap {
        &self.root
    }

    pub fn children(&self) -> &[SigmaMorphism] {
        &self.children
    }

    /// `g ∘ f`.
    pub fn compose(g: &SigmaMorphism, f: &SigmaMorphism) -> Result<SigmaMorphism> {
        if f.target != g.source {
            return Err(Error::IllTyped(format!("{} → {} cannot follow a map into {}", g.source, g.target, f.target)));
        }
        let root = g.root.after(&f.root)?;
        let fp: Vec<(usize, usize)> = pairs(&f.root).collect();
        let gp: Vec<(usize, usize)> = pairs(&g.root).collect();
        let mut children = Vec::with_capacity(root.span());
        for (i, k) in pairs(&root) {
            // the unique j with f(i−1) < j ≤ f(i) and g(j−1) < k ≤ g(j)
            let j = (f.root.values[i - 1] + 1..=f.root.values[i])
                .find(|&j| g.root.values[j - 1] < k && k <= g.root.values[j])
                .expect("interval of the composite is covered by intervals of g");
            let fi = fp.binary_search(&(i, j)).expect("pair of f");
            let gi = gp.binary_search(&(j, k)).expect("pair of g");
            children.push(SigmaMorphism::compose(&g.children[gi], &f.children[fi])?);
        }
        Ok(SigmaMorphism { source: f.source.clone(), target: g.target.clone(), root, children })
    }
}

impl fmt::Display for SigmaMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.root)?;
        // children between points are forced
        if !self.children.is_empty() && (self.source.dim() > 1 || self.target.dim() > 1) {
            let cs: Vec<String> = self.children.iter().map(ToString::to_string).collect();
            write!(f, "({})", cs.join(";"))?;
        }
        Ok(())
    }
}

/// Normal form of a raw levelwise sequence `(φ₀, φ₁, …)` with
/// `φᵢ: [source.entry(i)] → [target.entry(i)]`. Missing trailing components
/// are only allowed where they are forced or never read.
pub fn sigma_normalize(raw: &[DeltaMap], source: &SigmaObject, target: &SigmaObject) -> Result<SigmaMorphism> {
    for (i, c) in raw.iter().enumerate() {
        if c.dom != source.entry(i) || c.cod != target.entry(i) {
            return Err(Error::IllTyped(format!(
                "component {i} is {} → {}, expected [{}] → [{}]",
                c.dom,
                c.cod,
                source.entry(i),
                target.entry(i)
            )));
        }
    }
    normalize_typed(raw, source, target)
}

fn normalize_typed(raw: &[DeltaMap], source: &SigmaObject, target: &SigmaObject) -> Result<SigmaMorphism> {
    let root = match raw.first() {
        Some(c) => c.clone(),
        None if source.head() == 0 && target.head() == 0 => DeltaMap::identity(0),
        None => {
            return Err(Error::IllTyped(format!("missing component for {source} → {target}")));
        }
    };
    let children = if root.span() > 0 {
        let child = normalize_typed(&raw[1..], &source.tail(), &target.tail())?;
        vec![child; root.span()]
    } else {
        Vec::new()
    };
    Ok(SigmaMorphism { source: source.clone(), target: target.clone(), root, children })
}

/// Levelwise composite `gᵢ ∘ fᵢ` of raw sequences of equal length.
pub fn compose_levelwise(g: &[DeltaMap], f: &[DeltaMap]) -> Result<Vec<DeltaMap>> {
    if g.len() != f.len() {
        return Err(Error::IllTyped("raw sequences have different lengths".into()));
    }
    g.iter().zip(f).map(|(g, f)| g.after(f)).collect()
}

/// Equality up to and including the first constant-at-0 component.
pub fn literally_related(a: &[DeltaMap], b: &[DeltaMap]) -> bool {
    let cut = |r: &[DeltaMap]| r.iter().position(DeltaMap::is_constant_zero).map_or(r.len(), |p| p + 1);
    a[..cut(a)] == b[..cut(b)]
}

/// Two raw sequences related by truncation at a constant-at-0 component
/// whose composites with `g` are no longer related.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiteralCounterexample {
    pub object: SigmaObject,
    pub f: [Vec<DeltaMap>; 2],
    pub g: Vec<DeltaMap>,
}

impl LiteralCounterexample {
    pub fn composites(&self) -> Result<[Vec<DeltaMap>; 2]> {
        Ok([compose_levelwise(&self.g, &self.f[0])?, compose_levelwise(&self.g, &self.f[1])?])
    }

    /// The inputs are related and the outputs are not.
    pub fn holds(&self) -> Result<bool> {
        let [a, b] = self.composites()?;
        Ok(literally_related(&self.f[0], &self.f[1]) && !literally_related(&a, &b))
    }
}

pub fn literal_truncation_counterexample() -> LiteralCounterexample {
    let zero = DeltaMap { dom: 1, cod: 1, values: vec![0, 0] };
    let one = DeltaMap { dom: 1, cod: 1, values: vec![1, 1] };
    let id = DeltaMap::identity(1);
    LiteralCounterexample {
        object: SigmaObject(vec![1, 1]),
        f: [vec![zero.clone(), id.clone()], vec![zero.clone(), zero]],
        g: vec![one, id],
    }
}

/// `|Hom(src, tgt)|` by counting root maps per span; saturates.
pub fn hom_count(src: &SigmaObject, tgt: &SigmaObject) -> u128 {
    let (k, l) = (src.head() as u64, tgt.head() as u64);
    if k == 0 {
        return u128::from(l + 1);
    }
    if l == 0 {
        return 1;
    }
    let inner = hom_count(&src.tail(), &tgt.tail());
    (0..=l).fold(0u128, |acc, s| {
        let roots = u128::from(l - s + 1) * binomial(s + k - 1, k - 1);
        acc.saturating_add(roots.saturating_mul(inner.saturating_pow(s as u32)))
    })
}

/// Complete duplicate-free list of morphisms `src → tgt`.
pub fn sigma_hom_enumerate(src: &SigmaObject, tgt: &SigmaObject, cap: usize) -> Result<Vec<SigmaMorphism>> {
    let count = hom_count(src, tgt);
    if count > cap as u128 {
        return Err(Error::BudgetExceeded(format!("{count} morphisms {src} → {tgt}")));
    }
    let (k, l) = (src.head(), tgt.head());
    let inner = if k > 0 && l > 0 { sigma_hom_enumerate(&src.tail(), &tgt.tail(), cap)? } else { Vec::new() };
    let mut out = Vec::with_capacity(count as usize);
    for root in delta_hom_enumerate(k, l, usize::MAX)? {
        let s = root.span();
        let mut digits = vec![0usize; s];
        loop {
            let children = digits.iter().map(|&d| inner[d].clone()).collect();
            out.push(SigmaMorphism { source: src.clone(), target: tgt.clone(), root: root.clone(), children });
            let Some(p) = digits.iter().rposition(|&d| d + 1 < inner.len()) else { break };
            digits[p] += 1;
            digits[p + 1..].iter_mut().for_each(|d| *d = 0);
        }
    }
    Ok(out)
}

/// The morphism `[k⃗, a] → [k⃗, b]` that is the identity below level
/// `dim k⃗` and `δ` there.
pub fn extension_map(base: &SigmaObject, delta: &DeltaMap) -> Result<SigmaMorphism> {
    let mut raw: Vec<DeltaMap> = base.entries().iter().map(|&k| DeltaMap::identity(k)).collect();
    raw.push(delta.clone());
    sigma_normalize(&raw, &base.extend(delta.dom), &base.extend(delta.cod))
}

/// Vertex `v` of the last coordinate, `[k⃗] → [k⃗, l]`.
pub fn vertex_map(base: &SigmaObject, l: usize, v: usize) -> Result<SigmaMorphism> {
    extension_map(base, &DeltaMap::new(0, l, vec![v])?)
}

/// The `i`-th segment `[k⃗, 1] → [k⃗, l]`, `1 ≤ i ≤ l`.
pub fn segment_map(base: &SigmaObject, l: usize, i: usize) -> Result<SigmaMorphism> {
    extension_map(base, &DeltaMap::new(1, l, vec![i - 1, i])?)
}

/// Σ as a category with enumerable homs.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Sigma;

impl Category for Sigma {
    type Obj = SigmaObject;
    type Mor = SigmaMorphism;

    fn dom(&self, f: &SigmaMorphism) -> SigmaObject {
        f.source.clone()
    }

    fn cod(&self, f: &SigmaMorphism) -> SigmaObject {
        f.target.clone()
    }

    fn id(&self, x: &SigmaObject) -> SigmaMorphism {
        SigmaMorphism::identity(x)
    }

    fn compose(&self, g: &SigmaMorphism, f: &SigmaMorphism) -> Result<SigmaMorphism> {
        SigmaMorphism::compose(g, f)
    }

    fn hom(&self, x: &SigmaObject, y: &SigmaObject, cap: usize) -> Result<Vec<SigmaMorphism>> {
        sigma_hom_enumerate(x, y, cap)
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities { has_initial: true, has_terminal: true, hom_enumerable: true, ..Capabilities::default() }
    }

    fn size(&self, x: &SigmaObject) -> usize {
        x.entries().iter().sum()
    }
}

/// Objects of dimension at most `max_dim` with entries at most `max_entry`;
/// Segal checks and simplicial truncations stop at `max_level`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Bound {
    pub max_dim: usize,
    pub max_entry: usize,
    pub max_level: usize,
}

impl Bound {
    pub fn new(max_dim: usize, max_entry: usize, max_level: usize) -> Self {
        Bound { max_dim, max_entry, max_level }
    }

    pub fn contains(&self, x: &SigmaObject) -> bool {
        x.dim() <= self.max_dim && x.entries().iter().all(|&k| k <= self.max_entry)
    }

    /// In-bound objects, ordered by dimension and then entries.
    pub fn objects(&self) -> Vec<SigmaObject> {
        let mut out = vec![SigmaObject::point()];
        let mut layer = vec![SigmaObject::point()];
        for _ in 0..self.max_dim {
            layer = layer.iter().flat_map(|x| (1..=self.max_entry).map(move |k| x.extend(k))).collect();
            out.extend(layer.iter().cloned());
        }
        out
    }

    /// Pairs `(k⃗, l)` with `2 ≤ l ≤ max_level` and `[k⃗, l]` in bound.
    pub fn segal_cases(&self) -> Vec<(SigmaObject, usize)> {
        self.objects()
            .into_iter()
            .flat_map(|k| (2..=self.max_level).map(move |l| (k.clone(), l)))
            .filter(|(k, l)| self.contains(&k.extend(*l)))
            .collect()
    }
}

impl FromStr for Bound {
    type Err = Error;

    /// `max_dim,max_entry,max_level`.
    fn from_str(s: &str) -> Result<Self> {
        let v = s
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|e| Error::Invalid(format!("bad bound entry {t:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        match v[..] {
            [d, e, l] => Ok(Bound::new(d, e, l)),
            _ => Err(Error::Invalid(format!("a bound has three entries, got {s:?}"))),
        }
    }
}

/// All morphisms between the objects of a bound, with global indices.
#[derive(Debug, Clone)]
pub struct SigmaFragment {
    bound: Bound,
    objects: Vec<SigmaObject>,
    object_ids: HashMap<SigmaObject, usize>,
    morphisms: Vec<SigmaMorphism>,
    ids: HashMap<SigmaMorphism, usize>,
    homs: Vec<Vec<Range<usize>>>,
}

impl SigmaFragment {
    pub fn new(bound: Bound, cap: usize) -> Result<Self> {
        let objects = bound.objects();
        let object_ids = objects.iter().cloned().enumerate().map(|(i, x)| (x, i)).collect();
        let mut morphisms = Vec::new();
        let mut homs = Vec::with_capacity(objects.len());
        for x in &objects {
            let mut row = Vec::with_capacity(objects.len());
            for y in &objects {
                let start = morphisms.len();
                morphisms.extend(sigma_hom_enumerate(x, y, cap)?);
                row.push(start..morphisms.len());
            }
            homs.push(row);
        }
        let ids = morphisms.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        Ok(SigmaFragment { bound, objects, object_ids, morphisms, ids, homs })
    }

    pub fn bound(&self) -> Bound {
        self.bound
    }

    pub fn objects(&self) -> &[SigmaObject] {
        &self.objects
    }

    pub fn object_id(&self, x: &SigmaObject) -> Result<usize> {
        self.object_ids.get(x).copied().ok_or_else(|| Error::Invalid(format!("{x} is outside the bound")))
    }

    pub fn morphisms(&self) -> &[SigmaMorphism] {
        &self.morphisms
    }

    pub fn morphism_id(&self, m: &SigmaMorphism) -> Result<usize> {
        self.ids.get(m).copied().ok_or_else(|| Error::Invalid(format!("{m} is outside the bound")))
    }

    pub fn hom_ids(&self, x: usize, y: usize) -> Range<usize> {
        self.homs[x][y].clone()
    }

    pub fn hom(&self, x: usize, y: usize) -> &[SigmaMorphism] {
        &self.morphisms[self.hom_ids(x, y)]
    }

    pub fn endpoints(&self, m: usize) -> Result<(usize, usize)> {
        let f = &self.morphisms[m];
        Ok((self.object_id(&f.source)?, self.object_id(&f.target)?))
    }

    /// `table[g_local · |Hom(x,y)| + f_local]` is the global id of `g ∘ f`.
    pub fn compose_table(&self, x: usize, y: usize, z: usize) -> Result<Vec<usize>> {
        let (fs, gs) = (self.hom(x, y), self.hom(y, z));
        let mut table = Vec::with_capacity(fs.len() * gs.len());
        for g in gs {
            for f in fs {
                table.push(self.morphism_id(&SigmaMorphism::compose(g, f)?)?);
            }
        }
        Ok(table)
    }

    /// Unit and associativity laws over every composable triple in bound.
    pub fn check_axioms(&self) -> Result<Vec<Violation>> {
        let n = self.objects.len();
        let mut violations = Vec::new();
        for x in 0..n {
            let idx = self.morphism_id(&SigmaMorphism::identity(&self.objects[x]))?;
            for y in 0..n {
                let idy = self.morphism_id(&SigmaMorphism::identity(&self.objects[y]))?;
                for f in self.hom(x, y) {
                    let fid = self.morphism_id(f)?;
                    if self.morphism_id(&SigmaMorphism::compose(f, &self.morphisms[idx])?)? != fid {
                        violations.push(Violation { law: "right unit".into(), detail: f.to_string() });
                    }
                    if self.morphism_id(&SigmaMorphism::compose(&self.morphisms[idy], f)?)? != fid {
                        violations.push(Violation { law: "left unit".into(), detail: f.to_string() });
                    }
                }
            }
        }
        let mut tables: HashMap<(usize, usize, usize), Vec<usize>> = HashMap::new();
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    tables.insert((x, y, z), self.compose_table(x, y, z)?);
                }
            }
        }
        let local = |m: usize, a: usize, b: usize| m - self.homs[a][b].start;
        for x in 0..n {
            for y in 0..n {
                let nxy = self.homs[x][y].len();
                for z in 0..n {
                    let nyz = self.homs[y][z].len();
                    let nxz = self.homs[x][z].len();
                    for w in 0..n {
                        let (t_xyz, t_yzw) = (&tables[&(x, y, z)], &tables[&(y, z, w)]);
                        let (t_xzw, t_xyw) = (&tables[&(x, z, w)], &tables[&(x, y, w)]);
                        for h in 0..self.homs[z][w].len() {
                            for g in 0..nyz {
                                let hg = local(t_yzw[h * nyz + g], y, w);
                                for f in 0..nxy {
                                    let gf = local(t_xyz[g * nxy + f], x, z);
                                    if t_xyw[hg * nxy + f] != t_xzw[h * nxz + gf] {
                                        violations.push(Violation {
                                            law: "associativity".into(),
                                            detail: format!(
                                                "({}, {}, {})",
                                                self.hom(z, w)[h],
                                                self.hom(y, z)[g],
                                                self.hom(x, y)[f]
                                            ),
                                        });
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(violations)
    }
}

/// A raw pair whose levelwise composite normalizes differently from the
/// composite of normal forms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepresentativeCounterexample {
    pub f: Vec<DeltaMap>,
    pub g: Vec<DeltaMap>,
    pub levelwise: SigmaMorphism,
    pub composed: SigmaMorphism,
}

/// Raw sequences of length `levels` for `x → y`.
fn raw_homs(x: &SigmaObject, y: &SigmaObject, levels: usize) -> Result<Vec<Vec<DeltaMap>>> {
    let mut out: Vec<Vec<DeltaMap>> = vec![Vec::new()];
    for i in 0..levels {
        let maps = delta_hom_enumerate(x.entry(i), y.entry(i), usize::MAX)?;
        out = out.iter().flat_map(|p| maps.iter().map(move |m| [p.clone(), vec![m.clone()]].concat())).collect();
    }
    Ok(out)
}

/// Every raw composable pair in bound: the levelwise composite normalizes
/// to the composite of normal forms. Returns the first failure.
pub fn check_representative_independence(fragment: &SigmaFragment) -> Result<Option<RepresentativeCounterexample>> {
    let levels = fragment.bound.max_dim;
    let objs = fragment.objects();
    let mut raws: HashMap<(usize, usize), Vec<(Vec<DeltaMap>, usize)>> = HashMap::new();
    for (a, x) in objs.iter().enumerate() {
        for (b, y) in objs.iter().enumerate() {
            let list = raw_homs(x, y, levels)?
                .into_iter()
                .map(|r| {
                    let id = fragment.morphism_id(&sigma_normalize(&r, x, y)?)?;
                    Ok((r, id))
                })
                .collect::<Result<Vec<_>>>()?;
            raws.insert((a, b), list);
        }
    }
    for x in 0..objs.len() {
        for y in 0..objs.len() {
            for z in 0..objs.len() {
                for (f, fid) in &raws[&(x, y)] {
                    for (g, gid) in &raws[&(y, z)] {
                        let levelwise = sigma_normalize(&compose_levelwise(g, f)?, &objs[x], &objs[z])?;
                        let composed =
                            SigmaMorphism::compose(&fragment.morphisms[*gid], &fragment.morphisms[*fid])?;
                        if levelwise != composed {
                            return Ok(Some(RepresentativeCounterexample {
                                f: f.clone(),
                                g: g.clone(),
                                levelwise,
                                composed,
                            }));
                        }
                    }
                }
            }
        }
    }
    Ok(None)
}

/// A set-valued presheaf on the objects of a bound. `restrictions[m]` maps
/// the cells over the target of morphism `m` to the cells over its source.
#[derive(Debug, Clone)]
pub struct SigmaPresheaf {
    fragment: Arc<SigmaFragment>,
    cells: Vec<Vec<String>>,
    restrictions: Vec<Vec<usize>>,
}

impl SigmaPresheaf {
    /// Checks sizes; functoriality is checked by [`Self::check_functoriality`].
    pub fn new(fragment: Arc<SigmaFragment>, cells: Vec<Vec<String>>, restrictions: Vec<Vec<usize>>) -> Result<Self> {
        if cells.len() != fragment.objects.len() || restrictions.len() != fragment.morphisms.len() {
            return Err(Error::Invalid("presheaf does not cover the bound".into()));
        }
        for (m, table) in restrictions.iter().enumerate() {
            let (x, y) = fragment.endpoints(m)?;
            if table.len() != cells[y].len() || table.iter().any(|&c| c >= cells[x].len()) {
                return Err(Error::Invalid(format!("restriction along {} is ill typed", fragment.morphisms[m])));
            }
        }
        Ok(SigmaPresheaf { fragment, cells, restrictions })
    }

    pub fn fragment(&self) -> &SigmaFragment {
        &self.fragment
    }

    pub fn bound(&self) -> Bound {
        self.fragment.bound
    }

    pub fn cells(&self, x: &SigmaObject) -> Result<&[String]> {
        Ok(&self.cells[self.fragment.object_id(x)?])
    }

    pub fn cell_id(&self, x: &SigmaObject, label: &str) -> Result<usize> {
        self.cells(x)?
            .iter()
            .position(|c| c == label)
            .ok_or_else(|| Error::Invalid(format!("no cell {label:?} over {x}")))
    }

    /// `P(m)(cell)` for `m: x → y` and a cell over `y`.
    pub fn restrict(&self, m: &SigmaMorphism, cell: usize) -> Result<usize> {
        let id = self.fragment.morphism_id(m)?;
        self.restrictions[id]
            .get(cell)
            .copied()
            .ok_or_else(|| Error::Invalid(format!("cell {cell} is not over {}", m.target)))
    }

    /// Identities act trivially and restriction along `g ∘ f` is `P(f) ∘ P(g)`.
    pub fn check_functoriality(&self) -> Result<Vec<Violation>> {
        let fr = &self.fragment;
        let n = fr.objects.len();
        let mut violations = Vec::new();
        for (x, obj) in fr.objects.iter().enumerate() {
            let id = fr.morphism_id(&SigmaMorphism::identity(obj))?;
            if self.restrictions[id].iter().enumerate().any(|(c, &d)| c != d) {
                violations.push(Violation { law: "identity".into(), detail: obj.to_string() });
            }
            for y in 0..n {
                for z in 0..n {
                    let table = fr.compose_table(x, y, z)?;
                    let nxy = fr.homs[x][y].len();
                    for (gl, g) in fr.hom_ids(y, z).enumerate() {
                        for (fl, f) in fr.hom_ids(x, y).enumerate() {
                            let gf = table[gl * nxy + fl];
                            let bad = (0..self.cells[z].len())
                                .any(|c| self.restrictions[gf][c] != self.restrictions[f][self.restrictions[g][c]]);
                            if bad {
                                violations.push(Violation {
                                    law: "composition".into(),
                                    detail: format!("{} ∘ {}", fr.morphisms[g], fr.morphisms[f]),
                                });
                            }
                        }
                    }
                }
            }
        }
        Ok(violations)
    }

    /// The largest sub-presheaf avoiding the given cell.
    pub fn delete_cell(&self, x: &SigmaObject, label: &str) -> Result<SigmaPresheaf> {
        let fr = &self.fragment;
        let xi = fr.object_id(x)?;
        let dead = self.cell_id(x, label)?;
        let mut keep: Vec<Vec<bool>> = self.cells.iter().map(|cs| vec![true; cs.len()]).collect();
        for (y, row) in keep.iter_mut().enumerate() {
            for m in fr.hom_ids(xi, y) {
                for (c, k) in row.iter_mut().enumerate() {
                    if self.restrictions[m][c] == dead {
                        *k = false;
                    }
                }
            }
        }
        let renumber: Vec<Vec<Option<usize>>> = keep
            .iter()
            .map(|row| {
                let mut next = 0;
                row.iter()
                    .map(|&k| {
                        k.then(|| {
                            next += 1;
                            next - 1
                        })
                    })
                    .collect()
            })
            .collect();
        let cells = self
            .cells
            .iter()
            .zip(&keep)
            .map(|(cs, k)| cs.iter().zip(k).filter(|(_, &k)| k).map(|(c, _)| c.clone()).collect())
            .collect();
        let mut restrictions = Vec::with_capacity(self.restrictions.len());
        for (m, table) in self.restrictions.iter().enumerate() {
            let (s, t) = fr.endpoints(m)?;
            let mut row = Vec::new();
            for (c, &d) in table.iter().enumerate() {
                if keep[t][c] {
                    row.push(renumber[s][d].ok_or_else(|| {
                        Error::Invalid(format!("restriction along {} is not functorial", fr.morphisms[m]))
                    })?);
                }
            }
            restrictions.push(row);
        }
        SigmaPresheaf::new(self.fragment.clone(), cells, restrictions)
    }
}

/// `Σ[n⃗]`: cells over `x` are the morphisms `x → n⃗`.
pub fn representable(fragment: Arc<SigmaFragment>, n: &SigmaObject) -> Result<SigmaPresheaf> {
    let ni = fragment.object_id(n)?;
    let k = fragment.objects.len();
    let cells = (0..k).map(|x| fragment.hom(x, ni).iter().map(ToString::to_string).collect()).collect();
    let mut restrictions = vec![Vec::new(); fragment.morphisms.len()];
    for x in 0..k {
        for y in 0..k {
            let table = fragment.compose_table(x, y, ni)?;
            let nxy = fragment.homs[x][y].len();
            let start = fragment.homs[x][ni].start;
            for (fl, f) in fragment.hom_ids(x, y).enumerate() {
                restrictions[f] =
                    (0..fragment.homs[y][ni].len()).map(|hl| table[hl * nxy + fl] - start).collect();
            }
        }
    }
    SigmaPresheaf::new(fragment, cells, restrictions)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegalCase {
    pub base: SigmaObject,
    pub level: usize,
    pub cells: usize,
    pub fiber_product: usize,
    /// Offending cells when the comparison map is not a bijection.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegalReport {
    pub cases: Vec<SegalCase>,
}

impl SegalReport {
    pub fn passes(&self) -> bool {
        self.cases.iter().all(|c| c.witness.is_none())
    }

    pub fn failures(&self) -> impl Iterator<Item = &SegalCase> {
        self.cases.iter().filter(|c| c.witness.is_some())
    }
}

/// Chains `(a₁,…,a_l)` of arrows with `t(aᵢ) = s(aᵢ₊₁)`.
fn chains(src: &[usize], tgt: &[usize], l: usize) -> Vec<Vec<usize>> {
    let mut by_source: HashMap<usize, Vec<usize>> = HashMap::new();
    for (a, &s) in src.iter().enumerate() {
        by_source.entry(s).or_default().push(a);
    }
    let mut out: Vec<Vec<usize>> = (0..src.len()).map(|a| vec![a]).collect();
    for _ in 1..l {
        out = out
            .into_iter()
            .flat_map(|c| {
                let end = tgt[*c.last().expect("chains are non-empty")];
                by_source.get(&end).into_iter().flatten().map(move |&a| [c.clone(), vec![a]].concat())
            })
            .collect();
    }
    out
}

/// For every in-bound `(k⃗, l ≥ 2)`, whether `C_{k⃗,l}` maps bijectively onto
/// the `l`-fold fiber product of `C_{k⃗,1}` over `C_{k⃗}`.
pub fn segal_check(p: &SigmaPresheaf) -> Result<SegalReport> {
    let mut report = SegalReport::default();
    for (k, l) in p.bound().segal_cases() {
        let (s, t) = (vertex_map(&k, 1, 0)?, vertex_map(&k, 1, 1)?);
        let arrows = p.cells(&k.extend(1))?;
        let src: Vec<usize> = (0..arrows.len()).map(|a| p.restrict(&s, a)).collect::<Result<_>>()?;
        let tgt: Vec<usize> = (0..arrows.len()).map(|a| p.restrict(&t, a)).collect::<Result<_>>()?;
        let fp = chains(&src, &tgt, l);
        let top = p.cells(&k.extend(l))?;
        let segments: Vec<SigmaMorphism> = (1..=l).map(|i| segment_map(&k, l, i)).collect::<Result<_>>()?;
        let mut seen: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut witness = None;
        for c in 0..top.len() {
            let image = segments.iter().map(|m| p.restrict(m, c)).collect::<Result<Vec<_>>>()?;
            if let Some(&d) = seen.get(&image) {
                witness.get_or_insert_with(|| format!("cells {} and {} have the same segments", top[d], top[c]));
            }
            seen.insert(image, c);
        }
        if witness.is_none() {
            if let Some(missing) = fp.iter().find(|ch| !seen.contains_key(*ch)) {
                let names: Vec<&str> = missing.iter().map(|&a| arrows[a].as_str()).collect();
                witness = Some(format!("chain {} has no filler", names.join(" | ")));
            }
        }
        report.cases.push(SegalCase { base: k.clone(), level: l, cells: top.len(), fiber_product: fp.len(), witness });
    }
    Ok(report)
}

/// Arrows `h: f → g` and `h′: g → f` in `C_{k⃗,1}` with `f ≠ g`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompletenessFailure {
    pub base: SigmaObject,
    pub from: String,
    pub to: String,
    pub forward: String,
    pub backward: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompletenessReport {
    pub checked: Vec<SigmaObject>,
    pub failures: Vec<CompletenessFailure>,
}

impl CompletenessReport {
    pub fn passes(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn completeness_check(p: &SigmaPresheaf) -> Result<CompletenessReport> {
    let mut report = CompletenessReport::default();
    for k in p.bound().objects() {
        if !p.bound().contains(&k.extend(1)) {
            continue;
        }
        let (s, t) = (vertex_map(&k, 1, 0)?, vertex_map(&k, 1, 1)?);
        let arrows = p.cells(&k.extend(1))?;
        let points = p.cells(&k)?;
        let ends: Vec<(usize, usize)> =
            (0..arrows.len()).map(|a| Ok((p.restrict(&s, a)?, p.restrict(&t, a)?))).collect::<Result<_>>()?;
        let index: HashMap<(usize, usize), usize> = ends.iter().enumerate().map(|(a, &e)| (e, a)).collect();
        for (a, &(f, g)) in ends.iter().enumerate() {
            if f >= g {
                continue;
            }
            if let Some(&b) = index.get(&(g, f)) {
                report.failures.push(CompletenessFailure {
                    base: k.clone(),
                    from: points[f].clone(),
                    to: points[g].clone(),
                    forward: arrows[a].clone(),
                    backward: arrows[b].clone(),
                });
            }
        }
        report.checked.push(k);
    }
    Ok(report)
}

pub fn completeness_check_representable(fragment: Arc<SigmaFragment>, n: &SigmaObject) -> Result<CompletenessReport> {
    completeness_check(&representable(fragment, n)?)
}

/// Per vertex `p` of `Hom(k⃗, n⃗)`: the number of arrows of `Hom([k⃗,1], n⃗)`
/// ending at `p` and the number starting at `p`.
pub fn segal_terms(k: &SigmaObject, n: &SigmaObject, cap: usize) -> Result<Vec<(usize, usize)>> {
    let points = sigma_hom_enumerate(k, n, cap)?;
    let arrows = sigma_hom_enumerate(&k.extend(1), n, cap)?;
    let (s, t) = (vertex_map(k, 1, 0)?, vertex_map(k, 1, 1)?);
    let mut ends = Vec::with_capacity(arrows.len());
    for a in &arrows {
        ends.push((SigmaMorphism::compose(a, &s)?, SigmaMorphism::compose(a, &t)?));
    }
    Ok(points
        .iter()
        .map(|p| (ends.iter().filter(|(_, e)| e == p).count(), ends.iter().filter(|(b, _)| b == p).count()))
        .collect())
}

/// A simplicial set truncated at `max_level` whose `n`-cells are tuples of
/// length `n + 1` closed under reindexing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSimplicialSet {
    max_level: usize,
    cells: Vec<Vec<Vec<usize>>>,
    index: Vec<HashMap<Vec<usize>, usize>>,
}

impl TruncatedSimplicialSet {
    fn from_tuples(max_level: usize, keep: impl Fn(&[usize]) -> bool, points: usize) -> Self {
        let cells: Vec<Vec<Vec<usize>>> =
            (0..=max_level).map(|n| trivial_category_level(points, n).into_iter().filter(|t| keep(t)).collect()).collect();
        let index =
            cells.iter().map(|lv| lv.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect()).collect();
        TruncatedSimplicialSet { max_level, cells, index }
    }

    /// `Eᵐ`: the nerve of the contractible groupoid on `m + 1` objects.
    pub fn trivial_category(m: usize, max_level: usize) -> Self {
        Self::from_tuples(max_level, |_| true, m + 1)
    }

    /// `Δ[m]`.
    pub fn simplex(m: usize, max_level: usize) -> Self {
        Self::from_tuples(max_level, |t| t.windows(2).all(|w| w[0] <= w[1]), m + 1)
    }

    pub fn max_level(&self) -> usize {
        self.max_level
    }

    pub fn level(&self, n: usize) -> &[Vec<usize>] {
        &self.cells[n]
    }

    pub fn label(&self, n: usize, x: usize) -> String {
        self.cells[n][x].iter().map(usize::to_string).collect()
    }

    /// `X(δ)(x)` for `δ: [a] → [b]` and an `b`-cell `x`.
    pub fn act(&self, delta: &DeltaMap, x: usize) -> usize {
        let t = &self.cells[delta.cod][x];
        self.index[delta.dom][&delta.values.iter().map(|&i| t[i]).collect::<Vec<_>>()]
    }
}

/// Level `n` of `Eᵐ` with `points = m + 1`: all `(n+1)`-tuples.
pub fn trivial_category_level(points: usize, n: usize) -> Vec<Vec<usize>> {
    (0..=n).fold(vec![Vec::new()], |acc, _| {
        acc.iter().flat_map(|t| (0..points).map(move |p| [t.clone(), vec![p]].concat())).collect()
    })
}

struct KanCell {
    classes: Vec<usize>,
    lookup: HashMap<(usize, SigmaMorphism, usize), usize>,
    reps: Vec<(usize, SigmaMorphism, usize)>,
}

fn kan_cell(base: &SigmaObject, x: &TruncatedSimplicialSet, at: &SigmaObject, levels: usize, cap: usize) -> Result<KanCell> {
    let homs: Vec<Vec<SigmaMorphism>> =
        (0..=levels).map(|l| sigma_hom_enumerate(at, &base.extend(l), cap)).collect::<Result<_>>()?;
    let mut elems = Vec::new();
    let mut lookup = HashMap::new();
    for (l, hs) in homs.iter().enumerate() {
        for m in hs {
            for c in 0..x.level(l).len() {
                lookup.insert((l, m.clone(), c), elems.len());
                elems.push((l, m.clone(), c));
            }
        }
    }
    if elems.len() > cap {
        return Err(Error::BudgetExceeded(format!("{} generating cells over {at}", elems.len())));
    }
    let mut uf = MinUnionFind::new(elems.len());
    for a in 0..=levels {
        for b in 0..=levels {
            for delta in delta_hom_enumerate(a, b, cap)? {
                let e = extension_map(base, &delta)?;
                for m in &homs[a] {
                    let em = SigmaMorphism::compose(&e, m)?;
                    for y in 0..x.level(b).len() {
                        uf.union(lookup[&(b, em.clone(), y)], lookup[&(a, m.clone(), x.act(&delta, y))]);
                    }
                }
            }
        }
    }
    let mut class_of = HashMap::new();
    let mut reps = Vec::new();
    let classes = (0..elems.len())
        .map(|i| {
            let r = uf.find(i);
            *class_of.entry(r).or_insert_with(|| {
                reps.push(elems[r].clone());
                reps.len() - 1
            })
        })
        .collect();
    Ok(KanCell { classes, lookup, reps })
}

fn kan_label(x: &TruncatedSimplicialSet, (l, m, c): &(usize, SigmaMorphism, usize)) -> String {
    format!("{m}|{}", x.label(*l, *c))
}

/// Cells of `Σ[k⃗, X]` over `at`, as labelled class representatives.
pub fn kan_extension_cell(
    base: &SigmaObject,
    x: &TruncatedSimplicialSet,
    at: &SigmaObject,
    bound: Bound,
    cap: usize,
) -> Result<Vec<String>> {
    if x.max_level < bound.max_level {
        return Err(Error::Invalid(format!("simplicial set is truncated below level {}", bound.max_level)));
    }
    if !bound.contains(at) {
        return Err(Error::Invalid(format!("{at} is outside the bound")));
    }
    let kc = kan_cell(base, x, at, bound.max_level, cap)?;
    Ok(kc.reps.iter().map(|r| kan_label(x, r)).collect())
}

/// `Σ[k⃗, X]`: the left Kan extension of `X` along `l ↦ [k⃗, l]`, with the
/// colimit over maps `at → [k⃗, l]` truncated at the bound's level.
pub fn kan_extension(fragment: Arc<SigmaFragment>, base: &SigmaObject, x: &TruncatedSimplicialSet, cap: usize) -> Result<SigmaPresheaf> {
    let levels = fragment.bound.max_level;
    if x.max_level < levels {
        return Err(Error::Invalid(format!("simplicial set is truncated below level {levels}")));
    }
    let per: Vec<KanCell> =
        fragment.objects.iter().map(|at| kan_cell(base, x, at, levels, cap)).collect::<Result<_>>()?;
    let cells = per.iter().map(|kc| kc.reps.iter().map(|r| kan_label(x, r)).collect()).collect();
    let mut restrictions = Vec::with_capacity(fragment.morphisms.len());
    for (id, u) in fragment.morphisms.iter().enumerate() {
        let (s, t) = fragment.endpoints(id)?;
        let row = per[t]
            .reps
            .iter()
            .map(|(l, m, c)| {
                let key = (*l, SigmaMorphism::compose(m, u)?, *c);
                Ok(per[s].classes[per[s].lookup[&key]])
            })
            .collect::<Result<Vec<_>>>()?;
        restrictions.push(row);
    }
    SigmaPresheaf::new(fragment, cells, restrictions)
}

/// Closed-form descriptions of presheaves accepted on the command line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PresheafSpec {
    Representable { object: SigmaObject },
    KanExtension { base: SigmaObject, simplicial: SimplicialSpec },
    Delete { of: Box<PresheafSpec>, object: SigmaObject, cell: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SimplicialSpec {
    /// `Eᵐ` on `points = m + 1` objects.
    TrivialCategory { points: usize },
    Simplex { dim: usize },
}

impl PresheafSpec {
    pub fn build(&self, fragment: Arc<SigmaFragment>, cap: usize) -> Result<SigmaPresheaf> {
        match self {
            PresheafSpec::Representable { object } => representable(fragment, object),
            PresheafSpec::KanExtension { base, simplicial } => {
                let level = fragment.bound.max_level;
                let x = match simplicial {
                    SimplicialSpec::TrivialCategory { points: 0 } => {
                        return Err(Error::Invalid("a trivial category needs at least one object".into()))
                    }
                    SimplicialSpec::TrivialCategory { points } => TruncatedSimplicialSet::trivial_category(points - 1, level),
                    SimplicialSpec::Simplex { dim } => TruncatedSimplicialSet::simplex(*dim, level),
                };
                kan_extension(fragment, base, &x, cap)
            }
            PresheafSpec::Delete { of, object, cell } => of.build(fragment, cap)?.delete_cell(object, cell),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat::check_category_axioms;

    fn obj(s: &str) -> SigmaObject {
        s.parse().unwrap()
    }

    fn fragment(d: usize, e: usize, l: usize) -> Arc<SigmaFragment> {
        Arc::new(SigmaFragment::new(Bound::new(d, e, l), 1_000_000).unwrap())
    }

    #[test]
    fn delta_counts() {
        assert_eq!(delta_hom_enumerate(1, 1, 100).unwrap().len(), 3);
        assert_eq!(delta_hom_enumerate(0, 4, 100).unwrap().len(), 5);
        assert_eq!(delta_hom_enumerate(2, 2, 100).unwrap().len(), 10);
        for m in 0..=4 {
            for n in 0..=4 {
                let maps = delta_hom_enumerate(m, n, 10_000).unwrap();
                assert_eq!(maps.len() as u128, binomial((m + n + 1) as u64, (m + 1) as u64));
                assert!(maps.windows(2).all(|w| w[0] < w[1]));
            }
        }
        assert!(matches!(delta_hom_enumerate(6, 6, 100), Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn delta_composition_and_inertness() {
        let g = DeltaMap::new(2, 1, vec![0, 1, 1]).unwrap();
        let f = DeltaMap::new(1, 2, vec![0, 2]).unwrap();
        assert_eq!(g.after(&f).unwrap().values(), &[0, 1]);
        assert!(DeltaMap::new(1, 3, vec![1, 2]).unwrap().is_inert());
        assert!(!f.is_inert());
        assert!(DeltaMap::new(1, 2, vec![2, 1]).is_err());
    }

    #[test]
    fn objects_and_extension() {
        assert_eq!(SigmaObject::point().extend(2), obj("2"));
        assert_eq!(obj("1,1").extend(0), obj("1,1"));
        assert_eq!(obj("(2)").extend(3), obj("2,3"));
        assert_eq!(obj("()").dim(), 0);
        assert!("1,0".parse::<SigmaObject>().is_err());
        let json = serde_json::to_string(&obj("2,1")).unwrap();
        assert_eq!(json, "[2,1]");
        assert!(serde_json::from_str::<SigmaObject>("[0]").is_err());
    }

    #[test]
    fn headline_hom_counts() {
        assert_eq!(sigma_hom_enumerate(&obj("1"), &obj("1"), 100).unwrap().len(), 3);
        assert_eq!(sigma_hom_enumerate(&obj("2"), &obj("2"), 100).unwrap().len(), 10);
        assert_eq!(sigma_hom_enumerate(&obj("1,1"), &obj("1,1"), 100).unwrap().len(), 5);
        for x in Bound::new(3, 2, 2).objects() {
            for y in Bound::new(2, 2, 2).objects() {
                let homs = sigma_hom_enumerate(&x, &y, 1_000_000).unwrap();
                assert_eq!(homs.len() as u128, hom_count(&x, &y));
                let distinct: std::collections::HashSet<_> = homs.iter().collect();
                assert_eq!(distinct.len(), homs.len());
            }
            assert!(sigma_hom_enumerate(&x, &x, 1_000_000).unwrap().contains(&SigmaMorphism::identity(&x)));
        }
    }

    #[test]
    fn segal_decomposition_of_two_by_two() {
        let terms = segal_terms(&SigmaObject::point(), &obj("2"), 100).unwrap();
        assert_eq!(terms, vec![(1, 3), (2, 2), (3, 1)]);
        let total: usize = terms.iter().map(|(a, b)| a * b).sum();
        assert_eq!(total, 10);
    }

    #[test]
    fn normal_forms() {
        let z = DeltaMap::constant(1, 2, 0).unwrap();
        let a = DeltaMap::identity(1);
        let b = DeltaMap::constant(1, 1, 1).unwrap();
        let (s, t) = (obj("1,1"), obj("2,1"));
        let n1 = sigma_normalize(&[z.clone(), a], &s, &t).unwrap();
        let n2 = sigma_normalize(&[z.clone(), b], &s, &t).unwrap();
        let n3 = sigma_normalize(&[z], &s, &t).unwrap();
        assert_eq!(n1, n2);
        assert_eq!(n1, n3);
        assert!(n1.children().is_empty());
        let id = sigma_normalize(&[DeltaMap::identity(2), DeltaMap::identity(1)], &t, &t).unwrap();
        assert_eq!(id, SigmaMorphism::identity(&t));
        assert!(sigma_normalize(&[DeltaMap::identity(1)], &t, &t).is_err());
    }

    #[test]
    fn literal_relation_is_not_a_congruence() {
        let cx = literal_truncation_counterexample();
        assert!(cx.holds().unwrap());
        let o = &cx.object;
        let [a, b] = cx.composites().unwrap();
        assert_eq!(sigma_normalize(&a, o, o).unwrap(), sigma_normalize(&b, o, o).unwrap());
    }

    #[test]
    fn one_dimensional_part_is_delta() {
        for k in 0..=3 {
            for l in 0..=3 {
                let x = SigmaObject::point().extend(k);
                let y = SigmaObject::point().extend(l);
                let homs = sigma_hom_enumerate(&x, &y, 1000).unwrap();
                let roots: Vec<DeltaMap> = homs.iter().map(|h| h.root().clone()).collect();
                assert_eq!(roots, delta_hom_enumerate(k, l, 1000).unwrap());
            }
        }
        let g = sigma_normalize(&[DeltaMap::new(2, 1, vec![0, 1, 1]).unwrap()], &obj("2"), &obj("1")).unwrap();
        let f = sigma_normalize(&[DeltaMap::new(1, 2, vec![0, 2]).unwrap()], &obj("1"), &obj("2")).unwrap();
        assert_eq!(SigmaMorphism::compose(&g, &f).unwrap().root().values(), &[0, 1]);
    }

    #[test]
    fn axioms_on_a_small_bound_agree_with_generic_check() {
        let fr = fragment(2, 1, 2);
        assert!(fr.check_axioms().unwrap().is_empty());
        assert!(check_category_axioms(&Sigma, fr.objects(), 1000).unwrap().is_empty());
        assert!(check_representative_independence(&fr).unwrap().is_none());
    }

    #[test]
    fn representables_are_segal_and_complete() {
        let fr = fragment(2, 2, 2);
        for n in [obj("2"), obj("1,1"), obj("2,1")] {
            let p = representable(fr.clone(), &n).unwrap();
            let seg = segal_check(&p).unwrap();
            assert!(seg.passes(), "{n}: {:?}", seg.failures().collect::<Vec<_>>());
            assert!(completeness_check(&p).unwrap().passes(), "{n}");
        }
        let p = representable(fr.clone(), &obj("2")).unwrap();
        let case = segal_check(&p).unwrap().cases.into_iter().find(|c| c.base.dim() == 0 && c.level == 2).unwrap();
        assert_eq!((case.cells, case.fiber_product), (10, 10));
    }

    #[test]
    fn representable_is_functorial_on_a_small_bound() {
        let fr = fragment(2, 1, 2);
        let p = representable(fr, &obj("1,1")).unwrap();
        assert!(p.check_functoriality().unwrap().is_empty());
    }

    #[test]
    fn deleting_a_cell_breaks_segal() {
        let fr = fragment(2, 2, 2);
        let p = representable(fr, &obj("2")).unwrap();
        let id = SigmaMorphism::identity(&obj("2")).to_string();
        let q = p.delete_cell(&obj("2"), &id).unwrap();
        assert_eq!(q.cells(&obj("2")).unwrap().len(), 9);
        let report = segal_check(&q).unwrap();
        assert!(!report.passes());
        let bad = report.failures().find(|c| c.base.dim() == 0 && c.level == 2).unwrap();
        assert_eq!((bad.cells, bad.fiber_product), (9, 10));
        assert!(bad.witness.as_ref().unwrap().contains("no filler"));
    }

    #[test]
    fn trivial_category_levels() {
        assert_eq!(trivial_category_level(1, 3).len(), 1);
        assert_eq!(trivial_category_level(2, 2).len(), 8);
        let e1 = TruncatedSimplicialSet::trivial_category(1, 2);
        assert_eq!(e1.level(2).len(), 8);
        let d1 = TruncatedSimplicialSet::simplex(1, 2);
        assert_eq!(d1.level(2).len(), 4);
    }

    #[test]
    fn kan_extension_of_the_point_is_representable() {
        let fr = fragment(2, 2, 2);
        let e0 = TruncatedSimplicialSet::trivial_category(0, 2);
        let p = kan_extension(fr.clone(), &SigmaObject::point(), &e0, 100_000).unwrap();
        let r = representable(fr.clone(), &SigmaObject::point()).unwrap();
        for x in fr.objects() {
            assert_eq!(p.cells(x).unwrap().len(), r.cells(x).unwrap().len(), "{x}");
        }
    }

    #[test]
    fn kan_extension_of_a_simplex_is_representable() {
        let fr = fragment(2, 2, 2);
        for (base, m) in [(obj("()"), 1), (obj("()"), 2), (obj("1"), 1), (obj("2"), 2)] {
            let x = TruncatedSimplicialSet::simplex(m, 2);
            let p = kan_extension(fr.clone(), &base, &x, 100_000).unwrap();
            let r = representable(fr.clone(), &base.extend(m)).unwrap();
            for at in fr.objects() {
                assert_eq!(p.cells(at).unwrap().len(), r.cells(at).unwrap().len(), "{base} {m} at {at}");
            }
        }
    }

    #[test]
    fn free_isomorphism_is_not_complete() {
        let fr = fragment(2, 2, 2);
        let e1 = TruncatedSimplicialSet::trivial_category(1, 2);
        let p = kan_extension(fr, &SigmaObject::point(), &e1, 100_000).unwrap();
        assert_eq!(p.cells(&obj("1")).unwrap().len(), 4);
        let report = completeness_check(&p).unwrap();
        assert!(!report.passes());
        let w = &report.failures[0];
        assert_ne!(w.from, w.to);
    }

    #[test]
    fn presheaf_specs_build() {
        let fr = fragment(2, 2, 2);
        let spec: PresheafSpec = serde_json::from_str(
            r#"{"kind":"delete","of":{"kind":"representable","object":[2]},"object":[2],"cell":"[0,1,2]"}"#,
        )
        .unwrap();
        let p = spec.build(fr, 100_000).unwrap();
        assert!(!segal_check(&p).unwrap().passes());
    }
}

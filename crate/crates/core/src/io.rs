//! JSON documents read and written by the command-line tool. Every document
//! carries `"format": "fixcat/1"`.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::{Algebra, Coalgebra, LaxAlgebra};
use crate::cat::{Elem, EndofunctorSpec, FinMap, FinSet, FunctorSpec, Monomial};
use crate::error::{Error, Result};
use crate::fixpoint::LocalityProblem;
use crate::lattice::{Cfg, CfgNode, FiniteLattice, MonotoneMap};
use crate::rank::SkeletonSpec;
use crate::sigma::PresheafSpec;

pub const FORMAT: &str = "fixcat/1";

/// The version tag; refuses anything but [`FORMAT`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FormatTag;

impl Serialize for FormatTag {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(FORMAT)
    }
}

impl<'de> Deserialize<'de> for FormatTag {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        if s == FORMAT {
            Ok(FormatTag)
        } else {
            Err(serde::de::Error::custom(format!("unsupported format {s:?}, expected {FORMAT:?}")))
        }
    }
}

/// A finite set given by its size or by its elements.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SetDto {
    Size(usize),
    Elems(Vec<Elem>),
}

impl SetDto {
    pub fn build(&self) -> FinSet {
        match self {
            SetDto::Size(n) => FinSet::range(*n),
            SetDto::Elems(es) => FinSet::new(es.iter().cloned()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonomialDto {
    pub coeff: SetDto,
    pub exp: SetDto,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FunctorDto {
    Identity,
    Const(SetDto),
    /// `Σ coeffᵢ × X^expᵢ`.
    Poly(Vec<MonomialDto>),
    Sum(Vec<FunctorDto>),
    Product(Vec<FunctorDto>),
    /// Applies the last entry first.
    Compose(Vec<FunctorDto>),
}

impl FunctorDto {
    pub fn build(&self) -> FunctorSpec {
        match self {
            FunctorDto::Identity => FunctorSpec::Identity,
            FunctorDto::Const(a) => FunctorSpec::Constant(a.build()),
            FunctorDto::Poly(ms) => {
                FunctorSpec::Polynomial(ms.iter().map(|m| Monomial { coeff: m.coeff.build(), exp: m.exp.build() }).collect())
            }
            FunctorDto::Sum(fs) => FunctorSpec::Sum(fs.iter().map(Self::build).collect()),
            FunctorDto::Product(fs) => FunctorSpec::Product(fs.iter().map(Self::build).collect()),
            FunctorDto::Compose(fs) => FunctorSpec::Composite(fs.iter().map(Self::build).collect()),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CategoryKind {
    #[default]
    Finset,
    Lattice,
    Presented,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryRef {
    pub kind: CategoryKind,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctorDoc {
    pub format: FormatTag,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default)]
    pub category: CategoryRef,
    pub functor: FunctorDto,
    #[serde(default = "yes")]
    pub preserves_colimits: bool,
    #[serde(default = "yes")]
    pub preserves_limits: bool,
}

fn finset_only(c: CategoryRef) -> Result<()> {
    match c.kind {
        CategoryKind::Finset => Ok(()),
        k => Err(Error::Invalid(format!("functor documents over {k:?} categories are not accepted here; use kind \"finset\""))),
    }
}

impl FunctorDoc {
    pub fn build(&self) -> Result<EndofunctorSpec> {
        finset_only(self.category)?;
        let description = self.functor.build();
        let name = self.name.clone().unwrap_or_else(|| format!("{description:?}"));
        Ok(EndofunctorSpec {
            name,
            description,
            preserves_colimits: self.preserves_colimits,
            preserves_limits: self.preserves_limits,
        })
    }
}

/// A function given by the images of the domain elements in order, or by
/// explicit pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MapDto {
    Images(Vec<Elem>),
    Pairs { pairs: Vec<(Elem, Elem)> },
}

impl MapDto {
    pub fn build(&self, dom: &FinSet, cod: &FinSet) -> Result<FinMap> {
        let lookup = |e: &Elem| cod.index_of(e).ok_or_else(|| Error::IllTyped(format!("{e} is not in the codomain")));
        let values = match self {
            MapDto::Images(es) => {
                if es.len() != dom.len() {
                    return Err(Error::IllTyped(format!("{} images given for a domain of size {}", es.len(), dom.len())));
                }
                es.iter().map(lookup).collect::<Result<Vec<_>>>()?
            }
            MapDto::Pairs { pairs } => {
                let mut values = vec![None; dom.len()];
                for (x, y) in pairs {
                    let i = dom.index_of(x).ok_or_else(|| Error::IllTyped(format!("{x} is not in the domain")))?;
                    if values[i].replace(lookup(y)?).is_some() {
                        return Err(Error::IllTyped(format!("{x} is mapped twice")));
                    }
                }
                values
                    .into_iter()
                    .enumerate()
                    .map(|(i, v)| v.ok_or_else(|| Error::IllTyped(format!("{} has no image", dom.elems()[i]))))
                    .collect::<Result<Vec<_>>>()?
            }
        };
        FinMap::new(dom.clone(), cod.clone(), values)
    }

    pub fn from_map(m: &FinMap) -> Self {
        MapDto::Images(m.values().iter().map(|&v| m.cod().elems()[v].clone()).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoalgebraBody {
    pub carrier: SetDto,
    /// `C → F C`.
    pub coaction: MapDto,
}

impl CoalgebraBody {
    pub fn build(&self, f: &EndofunctorSpec) -> Result<Coalgebra<FinSet, FinMap>> {
        let carrier = self.carrier.build();
        let fc = f.description.obj(&carrier)?;
        Ok(Coalgebra { coaction: self.coaction.build(&carrier, &fc)?, carrier })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoalgebraDoc {
    pub format: FormatTag,
    #[serde(default)]
    pub category: CategoryRef,
    pub functor: FunctorDto,
    pub carrier: SetDto,
    pub coaction: MapDto,
}

fn plain_functor(category: CategoryRef, f: &FunctorDto) -> Result<EndofunctorSpec> {
    finset_only(category)?;
    Ok(EndofunctorSpec::new("F", f.build()))
}

impl CoalgebraDoc {
    pub fn build(&self) -> Result<(EndofunctorSpec, Coalgebra<FinSet, FinMap>)> {
        let f = plain_functor(self.category, &self.functor)?;
        let body = CoalgebraBody { carrier: self.carrier.clone(), coaction: self.coaction.clone() };
        let c = body.build(&f)?;
        Ok((f, c))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDoc {
    pub format: FormatTag,
    #[serde(default)]
    pub category: CategoryRef,
    pub functor: FunctorDto,
    pub carrier: SetDto,
    /// `F A → A`, listed over the canonical order of `F A`.
    pub action: MapDto,
}

impl AlgebraDoc {
    pub fn build(&self) -> Result<(EndofunctorSpec, Algebra<FinSet, FinMap>)> {
        let f = plain_functor(self.category, &self.functor)?;
        let carrier = self.carrier.build();
        let fa = f.description.obj(&carrier)?;
        let action = self.action.build(&fa, &carrier)?;
        Ok((f, Algebra { carrier, action }))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LaxDoc {
    pub format: FormatTag,
    #[serde(default)]
    pub category: CategoryRef,
    pub functor: FunctorDto,
    pub apex: SetDto,
    pub carrier: SetDto,
    /// `E → F B`.
    pub resolution: MapDto,
    /// `E → B`.
    pub action: MapDto,
}

impl LaxDoc {
    pub fn build(&self) -> Result<(EndofunctorSpec, LaxAlgebra<FinSet, FinMap>)> {
        let f = plain_functor(self.category, &self.functor)?;
        let apex = self.apex.build();
        let carrier = self.carrier.build();
        let fb = f.description.obj(&carrier)?;
        let resolution = self.resolution.build(&apex, &fb)?;
        let action = self.action.build(&apex, &carrier)?;
        Ok((f, LaxAlgebra { apex, carrier, resolution, action }))
    }
}

/// A coalgebra homomorphism `φ: (C, ν) → (D, μ)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomDoc {
    pub format: FormatTag,
    #[serde(default)]
    pub category: CategoryRef,
    pub functor: FunctorDto,
    pub src: CoalgebraBody,
    pub dst: CoalgebraBody,
    pub hom: MapDto,
}

impl HomDoc {
    pub fn build(&self) -> Result<(EndofunctorSpec, LocalityProblem<FinSet, FinMap>)> {
        let f = plain_functor(self.category, &self.functor)?;
        let src = self.src.build(&f)?;
        let dst = self.dst.build(&f)?;
        let hom = self.hom.build(&src.carrier, &dst.carrier)?;
        Ok((f, LocalityProblem { hom, src, dst }))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetDoc {
    pub format: FormatTag,
    pub set: SetDto,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeBody {
    pub elements: Vec<String>,
    /// Covering pairs `[lower, upper]`.
    pub covers: Vec<(String, String)>,
}

impl LatticeBody {
    pub fn build(&self) -> Result<FiniteLattice> {
        let idx = |n: &str| {
            self.elements.iter().position(|e| e == n).ok_or_else(|| Error::Invalid(format!("unknown element {n:?}")))
        };
        let edges = self.covers.iter().map(|(a, b)| Ok((idx(a)?, idx(b)?))).collect::<Result<Vec<_>>>()?;
        FiniteLattice::from_hasse(self.elements.clone(), &edges)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeDoc {
    pub format: FormatTag,
    pub elements: Vec<String>,
    pub covers: Vec<(String, String)>,
}

impl LatticeDoc {
    pub fn build(&self) -> Result<FiniteLattice> {
        LatticeBody { elements: self.elements.clone(), covers: self.covers.clone() }.build()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MonotoneDto {
    Identity,
    Constant(String),
    Table(BTreeMap<String, String>),
}

impl MonotoneDto {
    pub fn build(&self, l: &Arc<FiniteLattice>) -> Result<MonotoneMap> {
        let idx = |n: &str| l.index_of(n).ok_or_else(|| Error::Invalid(format!("unknown element {n:?}")));
        match self {
            MonotoneDto::Identity => Ok(MonotoneMap::identity(l.clone())),
            MonotoneDto::Constant(c) => Ok(MonotoneMap::constant(l.clone(), idx(c)?)),
            MonotoneDto::Table(t) => {
                let table = l
                    .names()
                    .iter()
                    .map(|n| idx(t.get(n).ok_or_else(|| Error::Invalid(format!("no image for {n:?}")))?))
                    .collect::<Result<Vec<_>>>()?;
                if t.len() != l.len() {
                    return Err(Error::Invalid("table mentions unknown elements".into()));
                }
                MonotoneMap::new(l.clone(), table)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDoc {
    pub format: FormatTag,
    pub map: MonotoneDto,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CfgNodeDto {
    pub name: String,
    pub transfer: MonotoneDto,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundaryDto {
    pub node: String,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CfgDoc {
    pub format: FormatTag,
    pub lattice: LatticeBody,
    pub nodes: Vec<CfgNodeDto>,
    pub edges: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary: Option<BoundaryDto>,
}

impl CfgDoc {
    pub fn build(&self) -> Result<Cfg> {
        let lattice = Arc::new(self.lattice.build()?);
        let node = |n: &str| {
            self.nodes.iter().position(|v| v.name == n).ok_or_else(|| Error::Invalid(format!("unknown node {n:?}")))
        };
        let nodes = self
            .nodes
            .iter()
            .map(|v| Ok(CfgNode { name: v.name.clone(), transfer: v.transfer.build(&lattice)? }))
            .collect::<Result<Vec<_>>>()?;
        let edges = self.edges.iter().map(|(a, b)| Ok((node(a)?, node(b)?))).collect::<Result<Vec<_>>>()?;
        let boundary = match &self.boundary {
            Some(b) => Some((
                node(&b.node)?,
                lattice.index_of(&b.value).ok_or_else(|| Error::Invalid(format!("unknown element {:?}", b.value)))?,
            )),
            None => None,
        };
        Ok(Cfg { lattice, nodes, edges, boundary })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresheafDoc {
    pub format: FormatTag,
    pub presheaf: PresheafSpec,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SkeletonDoc {
    pub format: FormatTag,
    pub skeleton: SkeletonSpec,
}

/// Which schema file documents an input.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Schema {
    Functor,
    Coalgebra,
    Algebra,
    Lax,
    Hom,
    Set,
    Lattice,
    Map,
    Cfg,
    Presheaf,
    Skeleton,
}

impl Schema {
    pub fn file(self) -> &'static str {
        match self {
            Schema::Functor => "functor.schema.json",
            Schema::Coalgebra => "coalgebra.schema.json",
            Schema::Algebra => "algebra.schema.json",
            Schema::Lax => "lax.schema.json",
            Schema::Hom => "hom.schema.json",
            Schema::Set => "set.schema.json",
            Schema::Lattice => "lattice.schema.json",
            Schema::Map => "map.schema.json",
            Schema::Cfg => "cfg.schema.json",
            Schema::Presheaf => "presheaf.schema.json",
            Schema::Skeleton => "skeleton.schema.json",
        }
    }
}

impl fmt::Display for Schema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "schemas/{}", self.file())
    }
}

/// A document that could not be read, with the schema it should follow.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{path}: {message} (see {schema})")]
pub struct InputError {
    pub path: String,
    pub message: String,
    pub schema: Schema,
}

pub fn parse_doc<T: DeserializeOwned>(text: &str, path: &str, schema: Schema) -> std::result::Result<T, InputError> {
    serde_json::from_str(text).map_err(|e| InputError { path: path.into(), message: e.to_string(), schema })
}

pub fn read_doc<T: DeserializeOwned>(path: &Path, schema: Schema) -> std::result::Result<T, InputError> {
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(path)
        .map_err(|e| InputError { path: shown.clone(), message: e.to_string(), schema })?;
    parse_doc(&text, &shown, schema)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn format_tag_is_checked() {
        let ok = r#"{"format":"fixcat/1","set":2}"#;
        assert_eq!(parse_doc::<SetDoc>(ok, "k", Schema::Set).unwrap().set.build().len(), 2);
        let bad = r#"{"format":"fixcat/2","set":2}"#;
        let err = parse_doc::<SetDoc>(bad, "k", Schema::Set).unwrap_err();
        assert!(err.to_string().contains("schemas/set.schema.json"));
    }

    #[test]
    fn functor_documents() {
        let doc: FunctorDoc = serde_json::from_str(
            r#"{"format":"fixcat/1","category":{"kind":"finset"},"functor":{"poly":[{"coeff":1,"exp":0},{"coeff":1,"exp":1}]}}"#,
        )
        .unwrap();
        assert_eq!(doc.build().unwrap().description, FunctorSpec::one_plus_x());
        let doc: FunctorDoc = serde_json::from_str(r#"{"format":"fixcat/1","functor":{"const":["a"]}}"#).unwrap();
        assert_eq!(doc.build().unwrap().description, FunctorSpec::Constant(FinSet::atoms(&["a"])));
        let lattice: FunctorDoc =
            serde_json::from_str(r#"{"format":"fixcat/1","category":{"kind":"lattice"},"functor":"identity"}"#).unwrap();
        assert!(lattice.build().is_err());
        let back: FunctorDoc = serde_json::from_str(&serde_json::to_string(&doc).unwrap()).unwrap();
        assert_eq!(back, doc);
    }

    #[test]
    fn maps_by_images_or_pairs() {
        let dom = FinSet::range(2);
        let cod = FinSet::atoms(&["x", "y"]);
        let a: MapDto = serde_json::from_str(r#"["y","x"]"#).unwrap();
        let b: MapDto = serde_json::from_str(r#"{"pairs":[[1,"x"],[0,"y"]]}"#).unwrap();
        assert_eq!(a.build(&dom, &cod).unwrap(), b.build(&dom, &cod).unwrap());
        let m = a.build(&dom, &cod).unwrap();
        assert_eq!(MapDto::from_map(&m).build(&dom, &cod).unwrap(), m);
        let partial: MapDto = serde_json::from_str(r#"{"pairs":[[1,"x"]]}"#).unwrap();
        assert!(partial.build(&dom, &cod).is_err());
    }

    #[test]
    fn lattice_and_map() {
        let l: LatticeDoc =
            serde_json::from_str(r#"{"format":"fixcat/1","elements":["⊥","⊤"],"covers":[["⊥","⊤"]]}"#).unwrap();
        let l = Arc::new(l.build().unwrap());
        let m: MapDoc = serde_json::from_str(r#"{"format":"fixcat/1","map":{"table":{"⊥":"⊤","⊤":"⊥"}}}"#).unwrap();
        assert!(matches!(m.map.build(&l), Err(Error::NonMonotone(_))));
    }
}

//! Endofunctors and their finite-set descriptions.

use serde::{Deserialize, Serialize};

use super::{Category, Elem, FinMap, FinSet, FinSets};
use crate::error::{Error, Result};

/// Largest object an endofunctor will materialize.
pub const MAX_IMAGE: usize = 1 << 18;

pub trait Endofunctor<C: Category + ?Sized> {
    fn name(&self) -> String;
    fn on_obj(&self, x: &C::Obj) -> Result<C::Obj>;
    fn on_mor(&self, f: &C::Mor) -> Result<C::Mor>;
    fn preserves_sequential_colimits(&self) -> bool {
        true
    }
    fn preserves_sequential_limits(&self) -> bool {
        true
    }
}

impl<C: Category + ?Sized, F: Endofunctor<C> + ?Sized> Endofunctor<C> for &F {
    fn name(&self) -> String {
        (**self).name()
    }
    fn on_obj(&self, x: &C::Obj) -> Result<C::Obj> {
        (**self).on_obj(x)
    }
    fn on_mor(&self, f: &C::Mor) -> Result<C::Mor> {
        (**self).on_mor(f)
    }
    fn preserves_sequential_colimits(&self) -> bool {
        (**self).preserves_sequential_colimits()
    }
    fn preserves_sequential_limits(&self) -> bool {
        (**self).preserves_sequential_limits()
    }
}

/// `A × X^B`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Monomial {
    pub coeff: FinSet,
    pub exp: FinSet,
}

/// Combinator description of an endofunctor on finite sets. `Composite`
/// applies its last entry first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum FunctorSpec {
    Constant(FinSet),
    Identity,
    Polynomial(Vec<Monomial>),
    Sum(Vec<FunctorSpec>),
    Product(Vec<FunctorSpec>),
    Composite(Vec<FunctorSpec>),
}

fn too_big(what: &str) -> Error {
    Error::BudgetExceeded(format!("{what} would exceed {MAX_IMAGE} elements"))
}

fn checked_sum(it: impl IntoIterator<Item = Option<usize>>) -> Option<usize> {
    it.into_iter().try_fold(0usize, |acc, s| acc.checked_add(s?))
}

fn checked_product(it: impl IntoIterator<Item = Option<usize>>) -> Option<usize> {
    it.into_iter().try_fold(1usize, |acc, s| acc.checked_mul(s?))
}

impl FunctorSpec {
    /// `1 + X`.
    pub fn one_plus_x() -> Self {
        FunctorSpec::Polynomial(vec![
            Monomial { coeff: FinSet::range(1), exp: FinSet::empty() },
            Monomial { coeff: FinSet::range(1), exp: FinSet::range(1) },
        ])
    }

    /// `A + X`.
    pub fn plus_const(a: FinSet) -> Self {
        FunctorSpec::Sum(vec![FunctorSpec::Identity, FunctorSpec::Constant(a)])
    }

    /// `A × X^n`.
    pub fn monomial(coeff: usize, exp: usize) -> Self {
        FunctorSpec::Polynomial(vec![Monomial { coeff: FinSet::range(coeff), exp: FinSet::range(exp) }])
    }

    /// Cardinality of `F X` for `|X| = n`, `None` on overflow.
    pub fn size(&self, n: usize) -> Option<usize> {
        match self {
            FunctorSpec::Constant(a) => Some(a.len()),
            FunctorSpec::Identity => Some(n),
            FunctorSpec::Polynomial(ms) => checked_sum(
                ms.iter().map(|m| n.checked_pow(u32::try_from(m.exp.len()).ok()?)?.checked_mul(m.coeff.len())),
            ),
            FunctorSpec::Sum(fs) => checked_sum(fs.iter().map(|f| f.size(n))),
            FunctorSpec::Product(fs) => checked_product(fs.iter().map(|f| f.size(n))),
            FunctorSpec::Composite(fs) => fs.iter().rev().try_fold(n, |k, f| f.size(k)),
        }
    }

    pub fn obj(&self, x: &FinSet) -> Result<FinSet> {
        if self.size(x.len()).is_none_or(|s| s > MAX_IMAGE) {
            return Err(too_big("functor image"));
        }
        Ok(self.obj_unchecked(x))
    }

    fn obj_unchecked(&self, x: &FinSet) -> FinSet {
        match self {
            FunctorSpec::Constant(a) => a.clone(),
            FunctorSpec::Identity => x.clone(),
            FunctorSpec::Polynomial(ms) => {
                let parts: Vec<FinSet> = ms
                    .iter()
                    .map(|m| FinSet::product(&[m.coeff.clone(), FinSet::product(&vec![x.clone(); m.exp.len()])]))
                    .collect();
                FinSet::sum(&parts)
            }
            FunctorSpec::Sum(fs) => FinSet::sum(&fs.iter().map(|f| f.obj_unchecked(x)).collect::<Vec<_>>()),
            FunctorSpec::Product(fs) => FinSet::product(&fs.iter().map(|f| f.obj_unchecked(x)).collect::<Vec<_>>()),
            FunctorSpec::Composite(fs) => fs.iter().rev().fold(x.clone(), |acc, f| f.obj_unchecked(&acc)),
        }
    }

    pub fn mor(&self, f: &FinMap) -> Result<FinMap> {
        let (nx, ny) = (f.dom().len(), f.cod().len());
        if self.size(nx).is_none_or(|s| s > MAX_IMAGE) || self.size(ny).is_none_or(|s| s > MAX_IMAGE) {
            return Err(too_big("functor image"));
        }
        Ok(self.mor_unchecked(f))
    }

    fn mor_unchecked(&self, f: &FinMap) -> FinMap {
        match self {
            FunctorSpec::Constant(a) => FinMap::identity(a),
            FunctorSpec::Identity => f.clone(),
            FunctorSpec::Polynomial(ms) => {
                let dom = self.obj_unchecked(f.dom());
                let cod = self.obj_unchecked(f.cod());
                let (nx, ny) = (f.dom().len(), f.cod().len());
                let mut values = Vec::with_capacity(dom.len());
                let mut off_y = 0;
                for m in ms {
                    let b = m.exp.len() as u32;
                    let (px, py) = (nx.pow(b), ny.pow(b));
                    for a in 0..m.coeff.len() {
                        for k in 0..px {
                            // digits of k in base nx, most significant first
                            let mut rest = k;
                            let mut out = 0;
                            let mut scale = 1;
                            for _ in 0..b {
                                let d = rest % nx;
                                rest /= nx;
                                out += f.apply_idx(d) * scale;
                                scale *= ny;
                            }
                            values.push(off_y + a * py + out);
                        }
                    }
                    off_y += m.coeff.len() * py;
                }
                FinMap::new(dom, cod, values).expect("polynomial action is well typed")
            }
            FunctorSpec::Sum(fs) => {
                let parts: Vec<FinMap> = fs.iter().map(|g| g.mor_unchecked(f)).collect();
                let dom = FinSet::sum(&parts.iter().map(|p| p.dom().clone()).collect::<Vec<_>>());
                let cod = FinSet::sum(&parts.iter().map(|p| p.cod().clone()).collect::<Vec<_>>());
                let mut values = Vec::with_capacity(dom.len());
                let mut off = 0;
                for p in &parts {
                    values.extend(p.values().iter().map(|&v| v + off));
                    off += p.cod().len();
                }
                FinMap::new(dom, cod, values).expect("sum action is well typed")
            }
            FunctorSpec::Product(fs) => {
                let parts: Vec<FinMap> = fs.iter().map(|g| g.mor_unchecked(f)).collect();
                let dom = FinSet::product(&parts.iter().map(|p| p.dom().clone()).collect::<Vec<_>>());
                let cod = FinSet::product(&parts.iter().map(|p| p.cod().clone()).collect::<Vec<_>>());
                let mut values = Vec::with_capacity(dom.len());
                for k in 0..dom.len() {
                    let mut rest = k;
                    let mut out = 0;
                    let mut scale = 1;
                    for p in parts.iter().rev() {
                        let d = rest % p.dom().len();
                        rest /= p.dom().len();
                        out += p.apply_idx(d) * scale;
                        scale *= p.cod().len();
                    }
                    values.push(out);
                }
                FinMap::new(dom, cod, values).expect("product action is well typed")
            }
            FunctorSpec::Composite(fs) => fs.iter().rev().fold(f.clone(), |acc, g| g.mor_unchecked(&acc)),
        }
    }

    /// Polynomial element `Inj(i, (a, xs))`.
    pub fn poly_elem(i: usize, a: Elem, xs: Vec<Elem>) -> Elem {
        Elem::inj(i, Elem::pair(a, Elem::Tuple(xs)))
    }
}

/// A named finite-set endofunctor with declared preservation flags.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EndofunctorSpec {
    pub name: String,
    pub description: FunctorSpec,
    pub preserves_colimits: bool,
    pub preserves_limits: bool,
}

impl EndofunctorSpec {
    pub fn new(name: impl Into<String>, description: FunctorSpec) -> Self {
        EndofunctorSpec { name: name.into(), description, preserves_colimits: true, preserves_limits: true }
    }

    pub fn constant(a: FinSet) -> Self {
        Self::new(format!("const{}", a.len()), FunctorSpec::Constant(a))
    }

    pub fn identity() -> Self {
        Self::new("identity", FunctorSpec::Identity)
    }

    pub fn size(&self, n: usize) -> Option<usize> {
        self.description.size(n)
    }
}

impl Endofunctor<FinSets> for EndofunctorSpec {
    fn name(&self) -> String {
        self.name.clone()
    }
    fn on_obj(&self, x: &FinSet) -> Result<FinSet> {
        self.description.obj(x)
    }
    fn on_mor(&self, f: &FinMap) -> Result<FinMap> {
        self.description.mor(f)
    }
    fn preserves_sequential_colimits(&self) -> bool {
        self.preserves_colimits
    }
    fn preserves_sequential_limits(&self) -> bool {
        self.preserves_limits
    }
}

/// Polynomial descriptions preserve both kinds of ω-chain (co)limits.
impl Endofunctor<FinSets> for FunctorSpec {
    fn name(&self) -> String {
        format!("{self:?}")
    }
    fn on_obj(&self, x: &FinSet) -> Result<FinSet> {
        self.obj(x)
    }
    fn on_mor(&self, f: &FinMap) -> Result<FinMap> {
        self.mor(f)
    }
}

/// Checks `F(id) = id` and `F(g∘f) = F(g)∘F(f)` on every composable pair
/// between the listed objects. Returns the first failure found.
pub fn check_functoriality<C, F>(cat: &C, functor: &F, objects: &[C::Obj], cap: usize) -> Result<Option<String>>
where
    C: Category + ?Sized,
    F: Endofunctor<C> + ?Sized,
{
    for x in objects {
        let fx = functor.on_obj(x)?;
        if functor.on_mor(&cat.id(x))? != cat.id(&fx) {
            return Ok(Some(format!("F(id) ≠ id at {x:?}")));
        }
    }
    for x in objects {
        for y in objects {
            let fs = cat.hom(x, y, cap)?;
            for z in objects {
                let gs = cat.hom(y, z, cap)?;
                for f in &fs {
                    let ff = functor.on_mor(f)?;
                    if cat.dom(&ff) != functor.on_obj(x)? || cat.cod(&ff) != functor.on_obj(y)? {
                        return Ok(Some(format!("F({f:?}) is ill typed")));
                    }
                    for g in &gs {
                        let lhs = functor.on_mor(&cat.compose(g, f)?)?;
                        let rhs = cat.compose(&functor.on_mor(g)?, &ff)?;
                        if lhs != rhs {
                            return Ok(Some(format!("F({g:?} ∘ {f:?}) ≠ F({g:?}) ∘ F({f:?})")));
                        }
                    }
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_specs() -> Vec<FunctorSpec> {
        let a = FinSet::atoms(&["a", "b"]);
        vec![
            FunctorSpec::Constant(a.clone()),
            FunctorSpec::Identity,
            FunctorSpec::one_plus_x(),
            FunctorSpec::monomial(1, 2),
            FunctorSpec::monomial(2, 0),
            FunctorSpec::plus_const(a.clone()),
            FunctorSpec::Product(vec![FunctorSpec::Identity, FunctorSpec::Constant(FinSet::range(2))]),
            FunctorSpec::Composite(vec![FunctorSpec::one_plus_x(), FunctorSpec::monomial(1, 2)]),
            FunctorSpec::Sum(vec![FunctorSpec::monomial(1, 2), FunctorSpec::Constant(a)]),
        ]
    }

    #[test]
    fn sizes_match_objects() {
        for spec in sample_specs() {
            for n in 0..4 {
                assert_eq!(spec.obj(&FinSet::range(n)).unwrap().len(), spec.size(n).unwrap(), "{spec:?} at {n}");
            }
        }
        assert_eq!(FunctorSpec::one_plus_x().size(2), Some(3));
    }

    #[test]
    fn polynomial_identity_is_identity() {
        let spec = FunctorSpec::Polynomial(vec![Monomial { coeff: FinSet::range(1), exp: FinSet::range(1) }]);
        let x = FinSet::range(3);
        assert_eq!(spec.obj(&x).unwrap().len(), 3);
        let f = FinMap::new(x.clone(), x.clone(), vec![2, 2, 0]).unwrap();
        assert_eq!(spec.mor(&f).unwrap().values(), f.values());
    }

    #[test]
    fn polynomial_action_matches_elementwise_definition() {
        let spec = FunctorSpec::Polynomial(vec![
            Monomial { coeff: FinSet::range(2), exp: FinSet::range(2) },
            Monomial { coeff: FinSet::range(1), exp: FinSet::empty() },
        ]);
        let x = FinSet::range(2);
        let y = FinSet::range(3);
        let f = FinMap::new(x.clone(), y.clone(), vec![2, 0]).unwrap();
        let ff = spec.mor(&f).unwrap();
        for (src, dst) in ff.pairs() {
            let Elem::Inj(i, body) = src else { panic!() };
            let Elem::Tuple(v) = &**body else { panic!() };
            let Elem::Tuple(xs) = &v[1] else { panic!() };
            let mapped: Vec<Elem> = xs.iter().map(|e| f.apply(e).unwrap().clone()).collect();
            assert_eq!(*dst, FunctorSpec::poly_elem(*i, v[0].clone(), mapped));
        }
    }

    #[test]
    fn every_sample_is_functorial() {
        let objs: Vec<FinSet> = (0..=3).map(FinSet::range).collect();
        for spec in sample_specs() {
            let f = EndofunctorSpec::new("t", spec.clone());
            assert_eq!(check_functoriality(&FinSets, &f, &objs, 100_000).unwrap(), None, "{spec:?}");
        }
    }

    #[test]
    fn oversized_images_are_refused() {
        let spec = FunctorSpec::monomial(1, 30);
        assert!(matches!(spec.obj(&FinSet::range(2)), Err(Error::BudgetExceeded(_))));
    }
}

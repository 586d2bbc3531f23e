//! A finite lattice viewed as a thin category.

use std::sync::Arc;

use super::{
    Window,
    Capabilities, Category, Coproduct, Endofunctor, HasCoproducts, HasInitial, HasPushouts, HasTerminal, Pushout,
    SequentialColimits, SequentialLimits, Stabilized,
};
use crate::error::{Error, Result};
use crate::lattice::{FiniteLattice, MonotoneMap};

/// Objects are element indices, a morphism `x → y` is the pair `(x, y)` with `x ≤ y`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThinLattice {
    lattice: Arc<FiniteLattice>,
}

impl ThinLattice {
    pub fn new(lattice: Arc<FiniteLattice>) -> Self {
        ThinLattice { lattice }
    }

    pub fn lattice(&self) -> &FiniteLattice {
        &self.lattice
    }

    pub fn arrow(&self, x: usize, y: usize) -> Result<(usize, usize)> {
        if self.lattice.leq(x, y) {
            Ok((x, y))
        } else {
            Err(Error::IllTyped(format!(
                "{} ≰ {}",
                self.lattice.name(x),
                self.lattice.name(y)
            )))
        }
    }
}

impl Category for ThinLattice {
    type Obj = usize;
    type Mor = (usize, usize);

    fn dom(&self, f: &(usize, usize)) -> usize {
        f.0
    }

    fn cod(&self, f: &(usize, usize)) -> usize {
        f.1
    }

    fn id(&self, x: &usize) -> (usize, usize) {
        (*x, *x)
    }

    fn compose(&self, g: &(usize, usize), f: &(usize, usize)) -> Result<(usize, usize)> {
        if f.1 != g.0 {
            return Err(Error::IllTyped(format!("cannot compose {g:?} after {f:?}")));
        }
        Ok((f.0, g.1))
    }

    fn hom(&self, x: &usize, y: &usize, _cap: usize) -> Result<Vec<(usize, usize)>> {
        Ok(if self.lattice.leq(*x, *y) { vec![(*x, *y)] } else { Vec::new() })
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

    /// Height of the element above the bottom, so growth reports stay meaningful.
    fn size(&self, x: &usize) -> usize {
        self.lattice.height(*x)
    }

    fn inverse(&self, f: &(usize, usize)) -> Option<(usize, usize)> {
        (f.0 == f.1).then_some(*f)
    }
}

impl HasInitial for ThinLattice {
    fn initial(&self) -> usize {
        self.lattice.bottom()
    }
    fn from_initial(&self, x: &usize) -> (usize, usize) {
        (self.lattice.bottom(), *x)
    }
}

impl HasTerminal for ThinLattice {
    fn terminal(&self) -> usize {
        self.lattice.top()
    }
    fn to_terminal(&self, x: &usize) -> (usize, usize) {
        (*x, self.lattice.top())
    }
}

impl HasCoproducts for ThinLattice {
    fn coproduct(&self, x: &usize, y: &usize) -> Result<Coproduct<usize, (usize, usize)>> {
        let j = self.lattice.join(*x, *y);
        Ok(Coproduct { object: j, inl: (*x, j), inr: (*y, j) })
    }
    fn copair(
        &self,
        cp: &Coproduct<usize, (usize, usize)>,
        f: &(usize, usize),
        g: &(usize, usize),
    ) -> Result<(usize, usize)> {
        if f.1 != g.1 {
            return Err(Error::IllTyped("copair targets differ".into()));
        }
        self.arrow(cp.object, f.1)
    }
}

impl HasPushouts for ThinLattice {
    fn pushout(&self, r: &(usize, usize), a: &(usize, usize)) -> Result<Pushout<usize, (usize, usize)>> {
        if r.0 != a.0 {
            return Err(Error::IllTyped("pushout legs have different sources".into()));
        }
        let j = self.lattice.join(r.1, a.1);
        Ok(Pushout { object: j, left: (r.1, j), right: (a.1, j) })
    }
    fn pushout_mediate(
        &self,
        po: &Pushout<usize, (usize, usize)>,
        f: &(usize, usize),
        g: &(usize, usize),
    ) -> Result<(usize, usize)> {
        if f.1 != g.1 {
            return Err(Error::IllTyped("cocone targets differ".into()));
        }
        self.arrow(po.object, f.1)
    }
}

fn link_at(links: &[(usize, usize)], n: usize) -> Result<(usize, usize)> {
    links.get(n).copied().ok_or_else(|| Error::Invalid(format!("chain truncated before link {n}")))
}

impl SequentialColimits for ThinLattice {
    fn colimit_settles_at(&self, links: &[(usize, usize)], at: Window) -> Result<bool> {
        link_at(links, at.last_link())?;
        let l = link_at(links, at.index)?;
        Ok(at.horizon == 1 && l.0 == l.1)
    }

    fn colimit_at(
        &self,
        stages: &[usize],
        links: &[(usize, usize)],
        at: Window,
    ) -> Result<Stabilized<usize, (usize, usize)>> {
        if !self.colimit_settles_at(links, at)? {
            return Err(Error::Invalid(format!("chain has not settled at stage {}", at.index)));
        }
        let top = stages[at.index];
        let legs = stages[..=at.index + 1].iter().map(|&x| self.arrow(x, top)).collect::<Result<_>>()?;
        Ok(Stabilized { index: at.index, horizon: 1, object: top, legs })
    }

    fn colimit_mediate(
        &self,
        _links: &[(usize, usize)],
        colimit: &Stabilized<usize, (usize, usize)>,
        cocone: &dyn Fn(usize) -> Result<(usize, usize)>,
    ) -> Result<(usize, usize)> {
        let c = cocone(colimit.index)?;
        self.arrow(colimit.object, c.1)
    }
}

impl SequentialLimits for ThinLattice {
    fn limit_settles_at(&self, links: &[(usize, usize)], at: Window) -> Result<bool> {
        link_at(links, at.last_link())?;
        let l = link_at(links, at.index)?;
        Ok(at.horizon == 1 && l.0 == l.1)
    }

    fn limit_at(
        &self,
        stages: &[usize],
        links: &[(usize, usize)],
        at: Window,
    ) -> Result<Stabilized<usize, (usize, usize)>> {
        if !self.limit_settles_at(links, at)? {
            return Err(Error::Invalid(format!("chain has not settled at stage {}", at.index)));
        }
        let bottom = stages[at.index];
        let legs = stages[..=at.index + 1].iter().map(|&x| self.arrow(bottom, x)).collect::<Result<_>>()?;
        Ok(Stabilized { index: at.index, horizon: 1, object: bottom, legs })
    }

    fn limit_mediate(
        &self,
        _links: &[(usize, usize)],
        limit: &Stabilized<usize, (usize, usize)>,
        cone: &dyn Fn(usize) -> Result<(usize, usize)>,
    ) -> Result<(usize, usize)> {
        let c = cone(limit.index)?;
        self.arrow(c.0, limit.object)
    }
}

impl Endofunctor<ThinLattice> for MonotoneMap {
    fn name(&self) -> String {
        "monotone map".into()
    }
    fn on_obj(&self, x: &usize) -> Result<usize> {
        self.table().get(*x).copied().ok_or_else(|| Error::IllTyped(format!("element {x} out of range")))
    }
    fn on_mor(&self, f: &(usize, usize)) -> Result<(usize, usize)> {
        Ok((self.on_obj(&f.0)?, self.on_obj(&f.1)?))
    }
}

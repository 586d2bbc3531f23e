//! Finite categories given by generators and a complete composition table.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Capabilities, Category, HasInitial, HasPushouts, HasTerminal, Pushout};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentedMorphism {
    pub name: String,
    pub src: usize,
    pub tgt: usize,
}

/// Objects and morphisms are indices; `table[(g, f)] = g ∘ f` for every
/// composable pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresentedCategory {
    objects: Vec<String>,
    morphisms: Vec<PresentedMorphism>,
    identities: Vec<usize>,
    table: BTreeMap<(usize, usize), usize>,
    initial: Option<usize>,
    terminal: Option<usize>,
    has_pushouts: bool,
}

impl PresentedCategory {
    /// Validates typing and completeness of the table; laws are checked
    /// separately by [`super::check_category_axioms`].
    pub fn new(
        objects: Vec<String>,
        morphisms: Vec<PresentedMorphism>,
        identities: Vec<usize>,
        table: BTreeMap<(usize, usize), usize>,
    ) -> Result<Self> {
        let n = objects.len();
        if identities.len() != n {
            return Err(Error::Invalid("one identity per object is required".into()));
        }
        if let Some(m) = morphisms.iter().find(|m| m.src >= n || m.tgt >= n) {
            return Err(Error::Invalid(format!("morphism {} mentions an unknown object", m.name)));
        }
        for (x, &i) in identities.iter().enumerate() {
            match morphisms.get(i) {
                Some(m) if m.src == x && m.tgt == x => {}
                _ => return Err(Error::Invalid(format!("identity of {} is ill typed", objects[x]))),
            }
        }
        for (g, mg) in morphisms.iter().enumerate() {
            for (f, mf) in morphisms.iter().enumerate() {
                if mf.tgt != mg.src {
                    continue;
                }
                match table.get(&(g, f)).and_then(|&h| morphisms.get(h)) {
                    Some(h) if h.src == mf.src && h.tgt == mg.tgt => {}
                    Some(_) => return Err(Error::Invalid(format!("{} ∘ {} is ill typed", mg.name, mf.name))),
                    None => return Err(Error::Invalid(format!("{} ∘ {} is missing", mg.name, mf.name))),
                }
            }
        }
        let mut cat = PresentedCategory {
            objects,
            morphisms,
            identities,
            table,
            initial: None,
            terminal: None,
            has_pushouts: false,
        };
        let count = |x: usize, y: usize| cat.morphisms.iter().filter(|m| m.src == x && m.tgt == y).count();
        cat.initial = (0..n).find(|&x| (0..n).all(|y| count(x, y) == 1));
        cat.terminal = (0..n).find(|&y| (0..n).all(|x| count(x, y) == 1));
        let mut all = true;
        'spans: for r in 0..cat.morphisms.len() {
            for a in 0..cat.morphisms.len() {
                if cat.morphisms[r].src == cat.morphisms[a].src && cat.search_pushout(r, a).is_none() {
                    all = false;
                    break 'spans;
                }
            }
        }
        cat.has_pushouts = all;
        Ok(cat)
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn morphisms(&self) -> &[PresentedMorphism] {
        &self.morphisms
    }

    pub fn morphism(&self, name: &str) -> Option<usize> {
        self.morphisms.iter().position(|m| m.name == name)
    }

    pub fn object_ids(&self) -> Vec<usize> {
        (0..self.objects.len()).collect()
    }

    fn arrows(&self, x: usize, y: usize) -> impl Iterator<Item = usize> + '_ {
        self.morphisms.iter().enumerate().filter(move |(_, m)| m.src == x && m.tgt == y).map(|(i, _)| i)
    }

    fn comp(&self, g: usize, f: usize) -> usize {
        self.table[&(g, f)]
    }

    /// A cocone `(p, l, m)` on the span through which every other cocone
    /// factors uniquely.
    fn search_pushout(&self, r: usize, a: usize) -> Option<(usize, usize, usize)> {
        let (x, y) = (self.morphisms[r].tgt, self.morphisms[a].tgt);
        let cocones = |z: usize| -> Vec<(usize, usize)> {
            self.arrows(x, z)
                .flat_map(|l| self.arrows(y, z).map(move |m| (l, m)))
                .filter(|&(l, m)| self.comp(l, r) == self.comp(m, a))
                .collect()
        };
        for p in 0..self.objects.len() {
            for (l, m) in cocones(p) {
                let universal = (0..self.objects.len()).all(|z| {
                    cocones(z).into_iter().all(|(f, g)| {
                        self.arrows(p, z).filter(|&u| self.comp(u, l) == f && self.comp(u, m) == g).count() == 1
                    })
                });
                if universal {
                    return Some((p, l, m));
                }
            }
        }
        None
    }
}

impl Category for PresentedCategory {
    type Obj = usize;
    type Mor = usize;

    fn dom(&self, f: &usize) -> usize {
        self.morphisms[*f].src
    }

    fn cod(&self, f: &usize) -> usize {
        self.morphisms[*f].tgt
    }

    fn id(&self, x: &usize) -> usize {
        self.identities[*x]
    }

    fn compose(&self, g: &usize, f: &usize) -> Result<usize> {
        self.table.get(&(*g, *f)).copied().ok_or_else(|| {
            Error::IllTyped(format!("{} ∘ {} is not composable", self.morphisms[*g].name, self.morphisms[*f].name))
        })
    }

    fn hom(&self, x: &usize, y: &usize, cap: usize) -> Result<Vec<usize>> {
        let v: Vec<usize> = self.arrows(*x, *y).collect();
        if v.len() > cap {
            return Err(Error::BudgetExceeded(format!("{} morphisms", v.len())));
        }
        Ok(v)
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities {
            has_initial: self.initial.is_some(),
            has_terminal: self.terminal.is_some(),
            has_pushouts: self.has_pushouts,
            hom_enumerable: true,
            ..Capabilities::default()
        }
    }

    fn size(&self, _x: &usize) -> usize {
        1
    }

    fn non_iso_witness(&self, f: &usize) -> String {
        format!("{} has no two-sided inverse", self.morphisms[*f].name)
    }
}

impl HasInitial for PresentedCategory {
    fn initial(&self) -> usize {
        self.initial.expect("has_initial capability checked by caller")
    }
    fn from_initial(&self, x: &usize) -> usize {
        self.arrows(self.initial(), *x).next().expect("initial object has a map to every object")
    }
}

impl HasTerminal for PresentedCategory {
    fn terminal(&self) -> usize {
        self.terminal.expect("has_terminal capability checked by caller")
    }
    fn to_terminal(&self, x: &usize) -> usize {
        self.arrows(*x, self.terminal()).next().expect("terminal object has a map from every object")
    }
}

impl HasPushouts for PresentedCategory {
    fn pushout(&self, r: &usize, a: &usize) -> Result<Pushout<usize, usize>> {
        if self.dom(r) != self.dom(a) {
            return Err(Error::IllTyped("pushout legs have different sources".into()));
        }
        let (object, left, right) = self.search_pushout(*r, *a).ok_or(Error::CapabilityMissing("pushout"))?;
        Ok(Pushout { object, left, right })
    }

    fn pushout_mediate(&self, po: &Pushout<usize, usize>, f: &usize, g: &usize) -> Result<usize> {
        let z = self.cod(f);
        self.arrows(po.object, z)
            .find(|&u| self.comp(u, po.left) == *f && self.comp(u, po.right) == *g)
            .ok_or_else(|| Error::IllTyped("cocone does not factor through the pushout".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat::check_category_axioms;

    fn mor(name: &str, src: usize, tgt: usize) -> PresentedMorphism {
        PresentedMorphism { name: name.into(), src, tgt }
    }

    /// Objects A,B,C,D with a composable path f, g, h; `broken` makes the two
    /// bracketings of h∘g∘f land on different morphisms.
    fn path(broken: bool) -> PresentedCategory {
        let objects = ["A", "B", "C", "D"].map(String::from).to_vec();
        let mut ms: Vec<PresentedMorphism> = (0..4).map(|i| mor(&format!("id{}", objects[i]), i, i)).collect();
        ms.extend([mor("f", 0, 1), mor("g", 1, 2), mor("h", 2, 3), mor("gf", 0, 2), mor("hg", 1, 3), mor("hgf", 0, 3)]);
        if broken {
            ms.push(mor("hgf'", 0, 3));
        }
        let mut table = BTreeMap::new();
        for (i, m) in ms.iter().enumerate() {
            table.insert((m.tgt, i), i);
            table.insert((i, m.src), i);
        }
        let (f, g, h, gf, hg, hgf) = (4, 5, 6, 7, 8, 9);
        table.insert((g, f), gf);
        table.insert((h, g), hg);
        table.insert((hg, f), hgf);
        table.insert((h, gf), if broken { 10 } else { hgf });
        PresentedCategory::new(objects, ms, vec![0, 1, 2, 3], table).unwrap()
    }

    #[test]
    fn path_category_satisfies_the_laws() {
        let c = path(false);
        assert!(check_category_axioms(&c, &c.object_ids(), 100).unwrap().is_empty());
        assert!(c.capabilities().has_initial);
        assert_eq!(c.initial(), 0);
        assert_eq!(c.terminal(), 3);
    }

    #[test]
    fn broken_associativity_is_reported_once() {
        let c = path(true);
        let v = check_category_axioms(&c, &c.object_ids(), 100).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].law, "associativity");
        assert!(v[0].detail.contains("(6, 5, 4)"));
    }

    #[test]
    fn pushouts_in_a_chain_are_joins() {
        let c = path(false);
        let po = c.pushout(&c.morphism("f").unwrap(), &c.morphism("gf").unwrap()).unwrap();
        assert_eq!(po.object, 2);
    }
}

//! Rank and Noetherianness of hom skeletons.
//!
//! A skeleton records only objects and the skeleton of every hom, which is all
//! that rank and Noetherianness depend on. Finite-depth skeletons are
//! [`HomTree`]s; eventually periodic ones are finite state machines
//! ([`RationalHigherCat`]) whose hom edges may loop.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RankValue {
    /// rank < 0, i.e. equivalent to the point.
    Contractible,
    Finite(u32),
    NotSmall,
}

impl RankValue {
    /// Contractible is −1; `None` for NotSmall.
    pub fn level(self) -> Option<i64> {
        match self {
            RankValue::Contractible => Some(-1),
            RankValue::Finite(n) => Some(i64::from(n)),
            RankValue::NotSmall => None,
        }
    }

    pub fn from_level(level: i64) -> Self {
        if level < 0 {
            RankValue::Contractible
        } else {
            RankValue::Finite(level as u32)
        }
    }

    pub fn successor(self) -> Self {
        self.level().map_or(RankValue::NotSmall, |l| RankValue::from_level(l + 1))
    }

    pub fn is_small(self) -> bool {
        self != RankValue::NotSmall
    }
}

impl fmt::Display for RankValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RankValue::Contractible => write!(f, "contractible"),
            RankValue::Finite(n) => write!(f, "{n}"),
            RankValue::NotSmall => write!(f, "not small"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Inductive,
    Coinductive,
}

/// A finite-depth hom skeleton.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HomTree {
    Point,
    Node(Arc<Node>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawNode")]
pub struct Node {
    objects: usize,
    homs: Vec<Vec<HomTree>>,
}

#[derive(Deserialize)]
struct RawNode {
    objects: usize,
    homs: Vec<Vec<HomTree>>,
}

impl TryFrom<RawNode> for Node {
    type Error = Error;
    fn try_from(raw: RawNode) -> Result<Self> {
        Node::new(raw.objects, raw.homs)
    }
}

impl Node {
    pub fn new(objects: usize, homs: Vec<Vec<HomTree>>) -> Result<Self> {
        if homs.len() != objects || homs.iter().any(|row| row.len() != objects) {
            return Err(Error::Invalid(format!("{objects} objects need a {objects}×{objects} hom table")));
        }
        Ok(Node { objects, homs })
    }

    pub fn objects(&self) -> usize {
        self.objects
    }

    pub fn homs(&self) -> &[Vec<HomTree>] {
        &self.homs
    }
}

impl HomTree {
    pub fn empty() -> Self {
        HomTree::Node(Arc::new(Node { objects: 0, homs: Vec::new() }))
    }

    pub fn node(objects: usize, homs: Vec<Vec<HomTree>>) -> Result<Self> {
        Ok(HomTree::Node(Arc::new(Node::new(objects, homs)?)))
    }

    /// The point has one object whose endo-hom is again the point.
    pub fn objects(&self) -> usize {
        match self {
            HomTree::Point => 1,
            HomTree::Node(n) => n.objects,
        }
    }

    pub fn hom(&self, x: usize, y: usize) -> HomTree {
        match self {
            HomTree::Point => HomTree::Point,
            HomTree::Node(n) => n.homs[x][y].clone(),
        }
    }

    fn children(&self) -> &[Vec<HomTree>] {
        match self {
            HomTree::Point => &[],
            HomTree::Node(n) => &n.homs,
        }
    }

    /// Point and ∅ have depth 1; a node is one deeper than its deepest hom.
    pub fn depth(&self) -> usize {
        1 + self.children().iter().flatten().map(HomTree::depth).max().unwrap_or(0)
    }

    /// Nonempty with every hom contractible.
    pub fn is_contractible(&self) -> bool {
        match self {
            HomTree::Point => true,
            HomTree::Node(n) => n.objects > 0 && n.homs.iter().flatten().all(HomTree::is_contractible),
        }
    }

    fn rank_level(&self) -> i64 {
        match self {
            HomTree::Point => -1,
            HomTree::Node(n) if n.objects == 0 => 0,
            HomTree::Node(n) => {
                let top = n.homs.iter().flatten().map(HomTree::rank_level).max().unwrap_or(-1);
                if top < 0 {
                    -1
                } else {
                    top + 1
                }
            }
        }
    }

    pub fn rank(&self) -> RankValue {
        RankValue::from_level(self.rank_level())
    }

    /// `rank < n`, straight from the inductive definition.
    pub fn rank_below(&self, n: i64) -> bool {
        match n {
            n if n < 0 => false,
            0 => self.is_contractible(),
            // the point's endo-hom is the point, which is below 0
            _ if matches!(self, HomTree::Point) => true,
            n => self.children().iter().flatten().all(|h| h.rank_below(n - 1)),
        }
    }

    /// Objects ⊥, ⊤ with `Hom(⊥,⊤) = self`, `Hom(⊤,⊥) = ∅` and point endo-homs.
    pub fn suspension(&self) -> HomTree {
        HomTree::Node(Arc::new(Node {
            objects: 2,
            homs: vec![vec![HomTree::Point, self.clone()], vec![HomTree::empty(), HomTree::Point]],
        }))
    }

    /// Disjoint union of objects; homs across summands are ∅.
    pub fn coproduct(parts: &[HomTree]) -> HomTree {
        let offsets: Vec<usize> = parts
            .iter()
            .scan(0, |acc, p| {
                let start = *acc;
                *acc += p.objects();
                Some(start)
            })
            .collect();
        let total: usize = parts.iter().map(HomTree::objects).sum();
        let empty = HomTree::empty();
        let mut homs = vec![vec![empty; total]; total];
        for (p, &off) in parts.iter().zip(&offsets) {
            for x in 0..p.objects() {
                for y in 0..p.objects() {
                    homs[off + x][off + y] = p.hom(x, y);
                }
            }
        }
        HomTree::Node(Arc::new(Node { objects: total, homs }))
    }
}

/// `suspensionᵏ(∅)`, of rank exactly `k`.
pub fn strictness_witness(k: usize) -> HomTree {
    (0..k).fold(HomTree::empty(), |x, _| x.suspension())
}

/// Number of skeletons with at most `max_objects` objects and depth at most
/// `max_depth`.
pub fn skeleton_count(max_objects: usize, max_depth: usize) -> u128 {
    if max_depth == 0 {
        return 0;
    }
    let mut c: u128 = 2;
    for _ in 1..max_depth {
        c = (0..=max_objects)
            .fold(1u128, |acc, n| acc.saturating_add(c.saturating_pow((n * n) as u32)));
    }
    c
}

/// Every skeleton with at most `max_objects` objects per node and depth at
/// most `max_depth`, objects labelled `0..n`.
pub fn enumerate_skeletons(max_objects: usize, max_depth: usize, cap: usize) -> Result<Vec<HomTree>> {
    let count = skeleton_count(max_objects, max_depth);
    if count > cap as u128 {
        return Err(Error::BudgetExceeded(format!("{count} skeletons")));
    }
    if max_depth == 0 {
        return Ok(Vec::new());
    }
    let mut level = vec![HomTree::Point, HomTree::empty()];
    for _ in 1..max_depth {
        let mut next = Vec::with_capacity(count as usize);
        next.push(HomTree::Point);
        for n in 0..=max_objects {
            let cells = n * n;
            let mut digits = vec![0usize; cells];
            loop {
                let homs = (0..n).map(|x| (0..n).map(|y| level[digits[x * n + y]].clone()).collect()).collect();
                next.push(HomTree::Node(Arc::new(Node { objects: n, homs })));
                let Some(p) = digits.iter().rposition(|&d| d + 1 < level.len()) else { break };
                digits[p] += 1;
                digits[p + 1..].iter_mut().for_each(|d| *d = 0);
            }
        }
        level = next;
    }
    Ok(level)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct State {
    pub objects: usize,
    /// `homs[x][y]` is the state of `Hom(x, y)`.
    pub homs: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub point: bool,
}

impl State {
    pub fn point(id: usize) -> Self {
        State { objects: 1, homs: vec![vec![id]], point: true }
    }

    pub fn empty() -> Self {
        State { objects: 0, homs: Vec::new(), point: false }
    }

    fn edges(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.homs.iter().enumerate().flat_map(|(x, row)| row.iter().enumerate().map(move |(y, &t)| (x, y, t)))
    }
}

/// A skeleton given by finitely many states; a path of hom edges from the
/// root is a tower of parallel morphisms.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawMachine")]
pub struct RationalHigherCat {
    states: Vec<State>,
    root: usize,
}

#[derive(Deserialize)]
struct RawMachine {
    states: Vec<State>,
    root: usize,
}

impl TryFrom<RawMachine> for RationalHigherCat {
    type Error = Error;
    fn try_from(raw: RawMachine) -> Result<Self> {
        RationalHigherCat::new(raw.states, raw.root)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TowerStep {
    pub state: usize,
    pub pair: (usize, usize),
}

/// Following `prefix` and then `cycle` forever never reaches a contractible hom.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerWitness {
    pub prefix: Vec<TowerStep>,
    pub cycle: Vec<TowerStep>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NoetherianVerdict {
    pub noetherian: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<TowerWitness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NoethRankReport {
    pub noetherian: bool,
    pub rank: RankValue,
    pub agrees: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<TowerWitness>,
}

#[derive(Clone, Copy)]
enum Mark {
    Unseen,
    OnStack,
    Done(RankValue),
}

impl RationalHigherCat {
    pub fn new(states: Vec<State>, root: usize) -> Result<Self> {
        let n = states.len();
        if root >= n {
            return Err(Error::Invalid(format!("root {root} is not one of {n} states")));
        }
        for (i, s) in states.iter().enumerate() {
            if s.homs.len() != s.objects || s.homs.iter().any(|r| r.len() != s.objects) {
                return Err(Error::Invalid(format!("state {i} needs a {0}×{0} hom table", s.objects)));
            }
            if let Some(t) = s.homs.iter().flatten().find(|&&t| t >= n) {
                return Err(Error::Invalid(format!("state {i} points at missing state {t}")));
            }
            if s.point && *s != State::point(i) {
                return Err(Error::Invalid(format!("state {i} is flagged point but is not the point")));
            }
        }
        Ok(RationalHigherCat { states, root })
    }

    pub fn point() -> Self {
        RationalHigherCat { states: vec![State::point(0)], root: 0 }
    }

    pub fn empty() -> Self {
        RationalHigherCat { states: vec![State::empty()], root: 0 }
    }

    /// One object whose endo-hom is the whole category again.
    pub fn self_loop() -> Self {
        RationalHigherCat { states: vec![State { objects: 1, homs: vec![vec![0]], point: false }], root: 0 }
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn from_tree(tree: &HomTree) -> Self {
        fn go(t: &HomTree, states: &mut Vec<State>, memo: &mut HashMap<HomTree, usize>) -> usize {
            if let Some(&i) = memo.get(t) {
                return i;
            }
            let id = states.len();
            states.push(State::empty());
            let state = match t {
                HomTree::Point => State::point(id),
                HomTree::Node(n) => State {
                    objects: n.objects,
                    homs: n.homs.iter().map(|row| row.iter().map(|h| go(h, states, memo)).collect()).collect(),
                    point: false,
                },
            };
            states[id] = state;
            memo.insert(t.clone(), id);
            id
        }
        let mut states = Vec::new();
        let root = go(tree, &mut states, &mut HashMap::new());
        RationalHigherCat { states, root }
    }

    /// Per state: contractible as the least (inductive) or greatest
    /// (coinductive) fixed point of "nonempty with contractible homs".
    pub fn contractible_states(&self, mode: Mode) -> Vec<bool> {
        let step = |cur: &[bool]| -> Vec<bool> {
            self.states.iter().map(|s| s.point || (s.objects > 0 && s.edges().all(|(_, _, t)| cur[t]))).collect()
        };
        let mut cur = vec![mode == Mode::Coinductive; self.states.len()];
        loop {
            let next = step(&cur);
            if next == cur {
                return cur;
            }
            cur = next;
        }
    }

    pub fn contractible(&self, mode: Mode) -> bool {
        self.contractible_states(mode)[self.root]
    }

    /// Memoized recursion; meeting a state that is still on the stack means
    /// a reachable cycle of non-contractible states.
    pub fn rank(&self) -> RankValue {
        let contractible = self.contractible_states(Mode::Inductive);
        let mut marks = vec![Mark::Unseen; self.states.len()];
        self.rank_of(self.root, &contractible, &mut marks)
    }

    fn rank_of(&self, s: usize, contractible: &[bool], marks: &mut [Mark]) -> RankValue {
        if contractible[s] {
            return RankValue::Contractible;
        }
        marks[s] = Mark::OnStack;
        let mut level = 0i64;
        let mut small = true;
        for (_, _, t) in self.states[s].edges() {
            let r = if contractible[t] {
                RankValue::Contractible
            } else {
                match marks[t] {
                    Mark::OnStack => RankValue::NotSmall,
                    Mark::Done(v) => v,
                    Mark::Unseen => self.rank_of(t, contractible, marks),
                }
            };
            match r.level() {
                Some(l) => level = level.max(l + 1),
                None => small = false,
            }
        }
        let v = if small { RankValue::from_level(level) } else { RankValue::NotSmall };
        marks[s] = Mark::Done(v);
        v
    }

    /// Searches the reachable non-contractible part of the hom graph for a
    /// lasso; its stem and loop form the witness tower.
    pub fn is_noetherian(&self) -> NoetherianVerdict {
        let contractible = self.contractible_states(Mode::Inductive);
        if contractible[self.root] {
            return NoetherianVerdict { noetherian: true, witness: None };
        }
        let live = |t: usize| !contractible[t];
        let edges: Vec<Vec<(usize, usize, usize)>> =
            self.states.iter().map(|s| s.edges().filter(|&(_, _, t)| live(t)).collect()).collect();
        // 0 unseen, 1 on the current path, 2 finished
        let mut color = vec![0u8; self.states.len()];
        let mut stack: Vec<(usize, usize)> = vec![(self.root, 0)];
        let mut steps: Vec<TowerStep> = Vec::new();
        color[self.root] = 1;
        while let Some(&mut (s, ref mut next)) = stack.last_mut() {
            if let Some(&(x, y, t)) = edges[s].get(*next) {
                *next += 1;
                let step = TowerStep { state: s, pair: (x, y) };
                match color[t] {
                    1 => {
                        let at = stack.iter().position(|&(u, _)| u == t).expect("state on the path");
                        let mut cycle = steps[at..].to_vec();
                        cycle.push(step);
                        return NoetherianVerdict {
                            noetherian: false,
                            witness: Some(TowerWitness { prefix: steps[..at].to_vec(), cycle }),
                        };
                    }
                    0 => {
                        color[t] = 1;
                        steps.push(step);
                        stack.push((t, 0));
                    }
                    _ => {}
                }
            } else {
                color[s] = 2;
                stack.pop();
                steps.pop();
            }
        }
        NoetherianVerdict { noetherian: true, witness: None }
    }

    /// Unrolls the witness for `depth` steps, checking that each step is a
    /// hom edge and that no visited hom is inductively contractible.
    pub fn check_witness(&self, w: &TowerWitness, depth: usize) -> bool {
        if w.cycle.is_empty() {
            return false;
        }
        let contractible = self.contractible_states(Mode::Inductive);
        let mut at = self.root;
        let tower = w.prefix.iter().chain(w.cycle.iter().cycle());
        for step in tower.take(depth.max(w.prefix.len() + w.cycle.len())) {
            let s = &self.states[at];
            if step.state != at || contractible[at] || step.pair.0 >= s.objects || step.pair.1 >= s.objects {
                return false;
            }
            at = s.homs[step.pair.0][step.pair.1];
        }
        !contractible[at]
    }

    pub fn noeth_equiv_rank(&self) -> NoethRankReport {
        let verdict = self.is_noetherian();
        let rank = self.rank();
        NoethRankReport { noetherian: verdict.noetherian, rank, agrees: verdict.noetherian == rank.is_small(), witness: verdict.witness }
    }

    pub fn suspension(&self) -> Self {
        let mut states = self.states.clone();
        let base = states.len();
        let (empty, point, root) = (base, base + 1, base + 2);
        states.push(State::empty());
        states.push(State::point(point));
        states.push(State { objects: 2, homs: vec![vec![point, self.root], vec![empty, point]], point: false });
        RationalHigherCat { states, root }
    }

    pub fn coproduct(parts: &[RationalHigherCat]) -> Self {
        let mut states = Vec::new();
        let mut roots = Vec::new();
        for p in parts {
            let off = states.len();
            states.extend(p.states.iter().map(|s| State {
                objects: s.objects,
                homs: s.homs.iter().map(|r| r.iter().map(|t| t + off).collect()).collect(),
                point: s.point,
            }));
            roots.push(off + p.root);
        }
        let empty = states.len();
        states.push(State::empty());
        let mut objects = Vec::new();
        for (i, &r) in roots.iter().enumerate() {
            objects.extend((0..states[r].objects).map(|x| (i, x)));
        }
        let homs = objects
            .iter()
            .map(|&(i, x)| {
                objects.iter().map(|&(j, y)| if i == j { states[roots[i]].homs[x][y] } else { empty }).collect()
            })
            .collect();
        let root = states.len();
        states.push(State { objects: objects.len(), homs, point: false });
        RationalHigherCat { states, root }
    }
}

/// Calls `f` on every machine with root 0, between 1 and `max_states`
/// states and at most `max_objects` objects per state.
pub fn for_each_machine(max_states: usize, max_objects: usize, mut f: impl FnMut(&RationalHigherCat)) {
    for n in 1..=max_states {
        // per slot: None is the point, Some(objects, homs) a plain state
        let mut configs: Vec<Option<(usize, Vec<Vec<usize>>)>> = vec![None];
        for k in 0..=max_objects {
            let cells = k * k;
            let mut digits = vec![0usize; cells];
            loop {
                configs.push(Some((k, (0..k).map(|x| digits[x * k..(x + 1) * k].to_vec()).collect())));
                let Some(p) = digits.iter().rposition(|&d| d + 1 < n) else { break };
                digits[p] += 1;
                digits[p + 1..].iter_mut().for_each(|d| *d = 0);
            }
        }
        let mut choice = vec![0usize; n];
        loop {
            let states = choice
                .iter()
                .enumerate()
                .map(|(i, &c)| match &configs[c] {
                    None => State::point(i),
                    Some((k, homs)) => State { objects: *k, homs: homs.clone(), point: false },
                })
                .collect();
            f(&RationalHigherCat { states, root: 0 });
            let Some(p) = choice.iter().rposition(|&c| c + 1 < configs.len()) else { break };
            choice[p] += 1;
            choice[p + 1..].iter_mut().for_each(|c| *c = 0);
        }
    }
}

/// A rank query input: a finite tree or a state machine.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SkeletonSpec {
    Tree(HomTree),
    Machine(RationalHigherCat),
}

impl SkeletonSpec {
    pub fn machine(&self) -> RationalHigherCat {
        match self {
            SkeletonSpec::Tree(t) => RationalHigherCat::from_tree(t),
            SkeletonSpec::Machine(m) => m.clone(),
        }
    }

    pub fn rank(&self) -> RankValue {
        match self {
            SkeletonSpec::Tree(t) => t.rank(),
            SkeletonSpec::Machine(m) => m.rank(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_cases() {
        assert_eq!(HomTree::empty().rank(), RankValue::Finite(0));
        assert_eq!(HomTree::Point.rank(), RankValue::Contractible);
        assert!(!HomTree::empty().is_contractible());
        assert_eq!(HomTree::empty().suspension().rank(), RankValue::Finite(1));
        assert_eq!(HomTree::coproduct(&[HomTree::Point, HomTree::Point]).rank(), RankValue::Finite(1));
        for m in [Mode::Inductive, Mode::Coinductive] {
            assert!(RationalHigherCat::point().contractible(m));
            assert!(!RationalHigherCat::empty().contractible(m));
        }
    }

    #[test]
    fn tower_is_strict() {
        for k in 0..=5 {
            let w = strictness_witness(k);
            assert_eq!(w.rank(), RankValue::Finite(k as u32));
            assert_eq!(RationalHigherCat::from_tree(&w).rank(), RankValue::Finite(k as u32));
            assert!(w.rank_below(k as i64 + 1) && !w.rank_below(k as i64));
        }
    }

    #[test]
    fn self_loop_separates_the_modes() {
        let m = RationalHigherCat::self_loop();
        assert!(!m.contractible(Mode::Inductive));
        assert!(m.contractible(Mode::Coinductive));
        assert_eq!(m.rank(), RankValue::NotSmall);
        let v = m.is_noetherian();
        assert!(!v.noetherian);
        let w = v.witness.unwrap();
        assert!(w.prefix.is_empty());
        assert_eq!(w.cycle, vec![TowerStep { state: 0, pair: (0, 0) }]);
        assert!(m.check_witness(&w, 10));
        let s = m.suspension();
        assert_eq!(s.rank(), RankValue::NotSmall);
        assert!(!s.is_noetherian().noetherian);
    }

    #[test]
    fn cycle_through_a_contractible_state_is_harmless() {
        // A has an object with Hom = B; B has one object with Hom = A, but B is
        // flagged as the point, so every tower reaches it
        let m = RationalHigherCat::new(vec![State { objects: 1, homs: vec![vec![1]], point: false }, State::point(1)], 0)
            .unwrap();
        assert!(m.is_noetherian().noetherian);
        assert!(m.rank().is_small());
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(skeleton_count(2, 1), 2);
        assert_eq!(skeleton_count(2, 2), 20);
        assert_eq!(skeleton_count(2, 3), 160_022);
        assert_eq!(enumerate_skeletons(2, 2, 100).unwrap().len(), 20);
        let one = enumerate_skeletons(1, 2, 100).unwrap();
        let expected = vec![
            HomTree::Point,
            HomTree::empty(),
            HomTree::node(1, vec![vec![HomTree::Point]]).unwrap(),
            HomTree::node(1, vec![vec![HomTree::empty()]]).unwrap(),
        ];
        assert_eq!(one, expected);
        assert!(matches!(enumerate_skeletons(2, 4, 1000), Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn depth_bounds_rank_and_laws_hold_at_depth_two() {
        let ts = enumerate_skeletons(2, 2, 100).unwrap();
        for x in &ts {
            let d = x.depth() as i64;
            assert!(x.rank().level().unwrap() < d);
            if x.is_contractible() {
                assert_eq!(x.suspension().rank(), RankValue::Finite(1));
            } else {
                assert_eq!(x.suspension().rank(), x.rank().successor());
            }
            for n in -1..4 {
                assert_eq!(x.rank_below(n), x.rank().level().unwrap() < n);
            }
            assert_eq!(HomTree::coproduct(&[x.clone(), HomTree::empty()]).rank(), x.rank());
            for y in ts.iter().filter(|y| y.objects() > 0) {
                if x.objects() > 0 {
                    let want = x.rank().level().unwrap().max(y.rank().level().unwrap()).max(1);
                    assert_eq!(HomTree::coproduct(&[x.clone(), y.clone()]).rank(), RankValue::from_level(want));
                }
            }
            let m = RationalHigherCat::from_tree(x);
            assert_eq!(m.rank(), x.rank());
            assert!(m.is_noetherian().noetherian);
            assert_eq!(
                RationalHigherCat::coproduct(&[m.clone(), m.suspension()]).rank(),
                HomTree::coproduct(&[x.clone(), x.suspension()]).rank()
            );
        }
    }

    #[test]
    fn two_state_sweep_agrees() {
        let mut seen = 0;
        for_each_machine(2, 2, |m| {
            seen += 1;
            let r = m.noeth_equiv_rank();
            assert!(r.agrees, "{m:?}");
            if let Some(w) = &r.witness {
                assert!(m.check_witness(w, 2 * m.states().len()));
            }
            if m.contractible(Mode::Inductive) {
                assert!(m.contractible(Mode::Coinductive));
            }
        });
        // 1 + 1 + 1 + 1 configs for one state; 1 + 1 + 2 + 16 for two
        assert_eq!(seen, 4 + 20 * 20);
    }

    #[test]
    fn json_shapes() {
        let t: HomTree = serde_json::from_str(r#"{"node":{"objects":1,"homs":[["point"]]}}"#).unwrap();
        assert!(t.is_contractible());
        assert!(serde_json::from_str::<HomTree>(r#"{"node":{"objects":2,"homs":[["point"]]}}"#).is_err());
        let m: RationalHigherCat = serde_json::from_str(r#"{"states":[{"objects":1,"homs":[[0]]}],"root":0}"#).unwrap();
        assert_eq!(m, RationalHigherCat::self_loop());
        assert!(serde_json::from_str::<RationalHigherCat>(r#"{"states":[{"objects":1,"homs":[[1]]}],"root":0}"#).is_err());
        let back: HomTree = serde_json::from_str(&serde_json::to_string(&strictness_witness(2)).unwrap()).unwrap();
        assert_eq!(back, strictness_witness(2));
    }
}

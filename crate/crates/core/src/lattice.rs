//! Finite lattices, monotone maps, Kleene iteration and a small dataflow solver.

use std::collections::{BTreeSet, VecDeque};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::adamek;
use crate::cat::thin::ThinLattice;
use crate::cat::Budget;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteLattice {
    names: Vec<String>,
    leq: Vec<Vec<bool>>,
    join: Vec<Vec<usize>>,
    meet: Vec<Vec<usize>>,
    bottom: usize,
    top: usize,
    height: Vec<usize>,
}

impl FiniteLattice {
    /// Builds a lattice from covering (or any generating) pairs `lo ≤ hi`.
    pub fn from_hasse(names: Vec<String>, edges: &[(usize, usize)]) -> Result<Self> {
        let n = names.len();
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::Invalid(format!("edge ({a}, {b}) mentions an unknown element")));
            }
            leq[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        Self::from_order(names, leq)
    }

    /// Builds a lattice from a reflexive, transitive order matrix.
    pub fn from_order(names: Vec<String>, leq: Vec<Vec<bool>>) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::Invalid("a lattice needs at least one element".into()));
        }
        if leq.len() != n || leq.iter().any(|r| r.len() != n) {
            return Err(Error::Invalid("order matrix has the wrong shape".into()));
        }
        let distinct: BTreeSet<&String> = names.iter().collect();
        if distinct.len() != n {
            return Err(Error::Invalid("element names must be distinct".into()));
        }
        for i in 0..n {
            if !leq[i][i] {
                return Err(Error::Invalid(format!("order is not reflexive at {}", names[i])));
            }
            for j in 0..n {
                if i != j && leq[i][j] && leq[j][i] {
                    return Err(Error::Invalid(format!("cycle between {} and {}", names[i], names[j])));
                }
                for k in 0..n {
                    if leq[i][j] && leq[j][k] && !leq[i][k] {
                        return Err(Error::Invalid(format!("order is not transitive at {}", names[j])));
                    }
                }
            }
        }
        let bound = |i: usize, j: usize, upper: bool| -> Option<usize> {
            let cands: Vec<usize> = (0..n)
                .filter(|&k| if upper { leq[i][k] && leq[j][k] } else { leq[k][i] && leq[k][j] })
                .collect();
            cands.iter().copied().find(|&c| cands.iter().all(|&d| if upper { leq[c][d] } else { leq[d][c] }))
        };
        let mut join = vec![vec![0; n]; n];
        let mut meet = vec![vec![0; n]; n];
        for i in 0..n {
            for j in 0..n {
                join[i][j] = bound(i, j, true).ok_or_else(|| {
                    Error::Invalid(format!("{} and {} have no least upper bound", names[i], names[j]))
                })?;
                meet[i][j] = bound(i, j, false).ok_or_else(|| {
                    Error::Invalid(format!("{} and {} have no greatest lower bound", names[i], names[j]))
                })?;
            }
        }
        let bottom = (0..n).find(|&b| (0..n).all(|x| leq[b][x])).expect("finite lattice has a bottom");
        let top = (0..n).find(|&t| (0..n).all(|x| leq[x][t])).expect("finite lattice has a top");
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&x| (0..n).filter(|&y| leq[y][x]).count());
        let mut height = vec![0; n];
        for &x in &order {
            height[x] = order
                .iter()
                .filter(|&&y| y != x && leq[y][x])
                .map(|&y| height[y] + 1)
                .max()
                .unwrap_or(0);
        }
        Ok(FiniteLattice { names, leq, join, meet, bottom, top, height })
    }

    /// `0 < 1 < … < n-1`.
    pub fn chain(n: usize) -> Result<Self> {
        let names = (0..n).map(|i| i.to_string()).collect();
        let edges: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_hasse(names, &edges)
    }

    /// Subsets of `atoms`; the element with index `m` is the subset with bitmask `m`.
    pub fn powerset<S: AsRef<str>>(atoms: &[S]) -> Result<Self> {
        let k = atoms.len();
        if k > 12 {
            return Err(Error::BudgetExceeded(format!("powerset of {k} atoms")));
        }
        let n = 1usize << k;
        let names = (0..n)
            .map(|m| {
                let inside: Vec<&str> = (0..k).filter(|b| m >> b & 1 == 1).map(|b| atoms[b].as_ref()).collect();
                format!("{{{}}}", inside.join(","))
            })
            .collect();
        let leq = (0..n).map(|a| (0..n).map(|b| a & !b == 0).collect()).collect();
        Self::from_order(names, leq)
    }

    pub fn product(a: &FiniteLattice, b: &FiniteLattice) -> Result<Self> {
        let (na, nb) = (a.len(), b.len());
        let names = (0..na * nb).map(|k| format!("({},{})", a.names[k / nb], b.names[k % nb])).collect();
        let leq = (0..na * nb)
            .map(|x| (0..na * nb).map(|y| a.leq[x / nb][y / nb] && b.leq[x % nb][y % nb]).collect())
            .collect();
        Self::from_order(names, leq)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, x: usize) -> &str {
        &self.names[x]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq[x][y]
    }

    pub fn join(&self, x: usize, y: usize) -> usize {
        self.join[x][y]
    }

    pub fn meet(&self, x: usize, y: usize) -> usize {
        self.meet[x][y]
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    /// Length of the longest chain from the bottom to `x`.
    pub fn height(&self, x: usize) -> usize {
        self.height[x]
    }

    /// Covering pairs `(x, y)`: `x < y` with nothing strictly between.
    pub fn hasse(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if x != y && self.leq[x][y] && !(0..n).any(|z| z != x && z != y && self.leq[x][z] && self.leq[z][y]) {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// Order matrix under a relabelling, flattened row by row.
    fn relabelled_key(&self, perm: &[usize]) -> Vec<bool> {
        let n = self.len();
        let mut inv = vec![0; n];
        for (i, &p) in perm.iter().enumerate() {
            inv[p] = i;
        }
        (0..n * n).map(|k| self.leq[inv[k / n]][inv[k % n]]).collect()
    }
}

/// All lattices with `n` elements up to isomorphism, `1 ≤ n ≤ 7`.
pub fn enumerate_lattices(n: usize) -> Result<Vec<FiniteLattice>> {
    if n == 0 {
        return Ok(Vec::new());
    }
    if n > 7 {
        return Err(Error::BudgetExceeded(format!("lattice enumeration at size {n}")));
    }
    // Every finite lattice has a linear extension with the bottom at 0 and
    // the top at n-1, so it suffices to decide the pairs i < j strictly inside.
    let inner: Vec<(usize, usize)> = (1..n.saturating_sub(1))
        .flat_map(|i| (i + 1..n - 1).map(move |j| (i, j)))
        .collect();
    let perms = permutations(n);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u32..(1 << inner.len()) {
        let mut leq = vec![vec![false; n]; n];
        for i in 0..n {
            leq[i][i] = true;
            leq[0][i] = true;
            leq[i][n - 1] = true;
        }
        for (b, &(i, j)) in inner.iter().enumerate() {
            if mask >> b & 1 == 1 {
                leq[i][j] = true;
            }
        }
        let transitive = (0..n).all(|i| (0..n).all(|j| !leq[i][j] || (0..n).all(|k| !leq[j][k] || leq[i][k])));
        if !transitive {
            continue;
        }
        let names = (0..n).map(|i| i.to_string()).collect();
        let Ok(lat) = FiniteLattice::from_order(names, leq) else { continue };
        let key = perms.iter().map(|p| lat.relabelled_key(p)).min().expect("at least one permutation");
        if seen.insert(key) {
            out.push(lat);
        }
    }
    Ok(out)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                go(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// An order-preserving endofunction of a finite lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneMap {
    lattice: Arc<FiniteLattice>,
    table: Vec<usize>,
}

impl MonotoneMap {
    pub fn new(lattice: Arc<FiniteLattice>, table: Vec<usize>) -> Result<Self> {
        if table.len() != lattice.len() || table.iter().any(|&v| v >= lattice.len()) {
            return Err(Error::IllTyped("map table does not match the lattice".into()));
        }
        let m = MonotoneMap { lattice, table };
        if let Some((x, y)) = m.monotonicity_witness() {
            return Err(Error::NonMonotone(format!(
                "{} ≤ {} but f({}) = {} ≰ f({}) = {}",
                m.lattice.name(x),
                m.lattice.name(y),
                m.lattice.name(x),
                m.lattice.name(m.table[x]),
                m.lattice.name(y),
                m.lattice.name(m.table[y])
            )));
        }
        Ok(m)
    }

    pub fn from_fn(lattice: Arc<FiniteLattice>, f: impl Fn(usize) -> usize) -> Result<Self> {
        let table = (0..lattice.len()).map(f).collect();
        Self::new(lattice, table)
    }

    pub fn identity(lattice: Arc<FiniteLattice>) -> Self {
        let table = (0..lattice.len()).collect();
        MonotoneMap { lattice, table }
    }

    pub fn constant(lattice: Arc<FiniteLattice>, c: usize) -> Self {
        let table = vec![c; lattice.len()];
        MonotoneMap { lattice, table }
    }

    pub fn lattice(&self) -> &Arc<FiniteLattice> {
        &self.lattice
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    /// A pair `x ≤ y` with `f(x) ≰ f(y)`, if any.
    pub fn monotonicity_witness(&self) -> Option<(usize, usize)> {
        let l = &self.lattice;
        (0..l.len())
            .flat_map(|x| (0..l.len()).map(move |y| (x, y)))
            .find(|&(x, y)| l.leq(x, y) && !l.leq(self.table[x], self.table[y]))
    }
}

/// Every monotone endofunction of `lattice`.
pub fn monotone_maps(lattice: &Arc<FiniteLattice>) -> Vec<MonotoneMap> {
    let n = lattice.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&x| lattice.height(x));
    let mut out = Vec::new();
    let mut table = vec![usize::MAX; n];
    fn go(l: &FiniteLattice, order: &[usize], k: usize, table: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == order.len() {
            out.push(table.clone());
            return;
        }
        let x = order[k];
        for v in 0..l.len() {
            // elements below x come earlier in the height order
            let ok = order[..k].iter().all(|&y| !l.leq(y, x) || l.leq(table[y], v));
            if ok {
                table[x] = v;
                go(l, order, k + 1, table, out);
            }
        }
        table[x] = usize::MAX;
    }
    let mut tables = Vec::new();
    go(lattice, &order, 0, &mut table, &mut tables);
    out.extend(tables.into_iter().map(|t| MonotoneMap { lattice: lattice.clone(), table: t }));
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KleeneTrace {
    pub value: usize,
    /// The iterates `x₀, f(x₀), f²(x₀), …` up to the first repetition.
    pub trace: Vec<usize>,
}

fn iterate(f: &MonotoneMap, start: usize) -> KleeneTrace {
    let mut trace = vec![start];
    loop {
        let x = *trace.last().expect("nonempty trace");
        let y = f.apply(x);
        if y == x {
            return KleeneTrace { value: x, trace };
        }
        trace.push(y);
    }
}

/// Least fixed point by Kleene iteration from the bottom.
pub fn lfp(f: &MonotoneMap) -> KleeneTrace {
    iterate(f, f.lattice.bottom())
}

/// Greatest fixed point by iteration from the top.
pub fn gfp(f: &MonotoneMap) -> KleeneTrace {
    iterate(f, f.lattice.top())
}

/// Every fixed point, in element order.
pub fn all_fixed_points(f: &MonotoneMap) -> Vec<usize> {
    (0..f.lattice.len()).filter(|&x| f.apply(x) == x).collect()
}

/// Least fixed point as the carrier of the initial algebra on the thin category.
pub fn lfp_via_adamek(f: &MonotoneMap) -> Result<KleeneTrace> {
    let cat = ThinLattice::new(f.lattice.clone());
    let budget = Budget::with_stages(f.lattice.len() + 2);
    let cert = adamek::initial_algebra(&cat, f, &budget)?;
    Ok(KleeneTrace { value: cert.algebra.carrier, trace: cert.chain.stages[..=cert.stabilized.index].to_vec() })
}

/// Greatest fixed point as the carrier of the terminal coalgebra on the thin category.
pub fn gfp_via_adamek(f: &MonotoneMap) -> Result<KleeneTrace> {
    let cat = ThinLattice::new(f.lattice.clone());
    let budget = Budget::with_stages(f.lattice.len() + 2);
    let cert = adamek::terminal_coalgebra(&cat, f, &budget)?;
    Ok(KleeneTrace { value: cert.coalgebra.carrier, trace: cert.chain.stages[..=cert.stabilized.index].to_vec() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Backward,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CfgNode {
    pub name: String,
    pub transfer: MonotoneMap,
}

/// A control-flow graph whose nodes carry transfer functions over one lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct Cfg {
    pub lattice: Arc<FiniteLattice>,
    pub nodes: Vec<CfgNode>,
    pub edges: Vec<(usize, usize)>,
    /// Boundary value fed into the entry (forward) or exit (backward) node.
    pub boundary: Option<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DataflowSolution {
    /// Join of the incoming facts at each node.
    pub input: Vec<usize>,
    /// Transfer function applied to `input`.
    pub output: Vec<usize>,
    pub sweeps: usize,
}

impl Cfg {
    fn validate(&self) -> Result<()> {
        for node in &self.nodes {
            if *node.transfer.lattice != *self.lattice {
                return Err(Error::IllTyped(format!("transfer of {} is over another lattice", node.name)));
            }
            if let Some((x, y)) = node.transfer.monotonicity_witness() {
                return Err(Error::NonMonotone(format!(
                    "transfer of {}: {} ≤ {} is not preserved",
                    node.name,
                    self.lattice.name(x),
                    self.lattice.name(y)
                )));
            }
        }
        let n = self.nodes.len();
        if let Some(&(a, b)) = self.edges.iter().find(|&&(a, b)| a >= n || b >= n) {
            return Err(Error::IllTyped(format!("edge ({a}, {b}) mentions an unknown node")));
        }
        if let Some((node, v)) = self.boundary {
            if node >= n || v >= self.lattice.len() {
                return Err(Error::IllTyped("boundary value out of range".into()));
            }
        }
        Ok(())
    }

    /// Predecessors in the direction of propagation.
    fn sources(&self, dir: Direction) -> Vec<Vec<usize>> {
        let mut preds = vec![Vec::new(); self.nodes.len()];
        for &(a, b) in &self.edges {
            match dir {
                Direction::Forward => preds[b].push(a),
                Direction::Backward => preds[a].push(b),
            }
        }
        preds
    }

    fn input_at(&self, preds: &[usize], node: usize, out: &[usize]) -> usize {
        let l = &self.lattice;
        let init = match self.boundary {
            Some((b, v)) if b == node => v,
            _ => l.bottom(),
        };
        preds.iter().fold(init, |acc, &p| l.join(acc, out[p]))
    }
}

/// Least solution by simultaneous Kleene iteration on the product lattice.
pub fn dataflow_solve(cfg: &Cfg, dir: Direction) -> Result<DataflowSolution> {
    cfg.validate()?;
    let preds = cfg.sources(dir);
    let n = cfg.nodes.len();
    let mut out = vec![cfg.lattice.bottom(); n];
    let mut sweeps = 0;
    loop {
        sweeps += 1;
        let next: Vec<usize> = (0..n)
            .map(|v| cfg.nodes[v].transfer.apply(cfg.input_at(&preds[v], v, &out)))
            .collect();
        if next == out {
            let input = (0..n).map(|v| cfg.input_at(&preds[v], v, &out)).collect();
            return Ok(DataflowSolution { input, output: out, sweeps });
        }
        out = next;
    }
}

/// Least solution by a worklist; agrees with [`dataflow_solve`].
pub fn dataflow_worklist(cfg: &Cfg, dir: Direction) -> Result<DataflowSolution> {
    cfg.validate()?;
    let preds = cfg.sources(dir);
    let n = cfg.nodes.len();
    let mut succs = vec![Vec::new(); n];
    for (v, ps) in preds.iter().enumerate() {
        for &p in ps {
            succs[p].push(v);
        }
    }
    let mut out = vec![cfg.lattice.bottom(); n];
    let mut queue: VecDeque<usize> = (0..n).collect();
    let mut queued = vec![true; n];
    let mut steps = 0;
    while let Some(v) = queue.pop_front() {
        queued[v] = false;
        steps += 1;
        let new = cfg.nodes[v].transfer.apply(cfg.input_at(&preds[v], v, &out));
        if new != out[v] {
            out[v] = new;
            for &s in &succs[v] {
                if !queued[s] {
                    queued[s] = true;
                    queue.push_back(s);
                }
            }
        }
    }
    let input = (0..n).map(|v| cfg.input_at(&preds[v], v, &out)).collect();
    Ok(DataflowSolution { input, output: out, sweeps: steps })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pow_ab() -> Arc<FiniteLattice> {
        Arc::new(FiniteLattice::powerset(&["a", "b"]).unwrap())
    }

    #[test]
    fn powerset_union_with_a() {
        let l = pow_ab();
        let f = MonotoneMap::from_fn(l.clone(), |m| m | 1).unwrap();
        assert_eq!(l.name(lfp(&f).value), "{a}");
        assert_eq!(l.name(gfp(&f).value), "{a,b}");
        let fps: Vec<&str> = all_fixed_points(&f).into_iter().map(|x| l.name(x)).collect();
        assert_eq!(fps, ["{a}", "{a,b}"]);
    }

    #[test]
    fn identity_and_constants() {
        let l = Arc::new(FiniteLattice::chain(4).unwrap());
        let id = MonotoneMap::identity(l.clone());
        assert_eq!(lfp(&id).value, l.bottom());
        assert_eq!(gfp(&id).value, l.top());
        assert_eq!(all_fixed_points(&id).len(), 4);
        let top = MonotoneMap::constant(l.clone(), l.top());
        assert_eq!(lfp(&top).trace, vec![l.bottom(), l.top()]);
        let bot = MonotoneMap::constant(l.clone(), l.bottom());
        assert_eq!(gfp(&bot).value, l.bottom());
        assert_eq!(all_fixed_points(&bot), vec![l.bottom()]);
    }

    #[test]
    fn adamek_driver_matches_direct_iteration() {
        let l = pow_ab();
        for f in monotone_maps(&l) {
            assert_eq!(lfp_via_adamek(&f).unwrap().value, lfp(&f).value);
            assert_eq!(gfp_via_adamek(&f).unwrap().value, gfp(&f).value);
        }
    }

    #[test]
    fn lattice_counts_up_to_isomorphism() {
        let counts: Vec<usize> = (1..=6).map(|n| enumerate_lattices(n).unwrap().len()).collect();
        assert_eq!(counts, [1, 1, 1, 2, 5, 15]);
    }

    #[test]
    fn monotone_map_counts_on_chains() {
        // monotone self-maps of an n-chain: binomial(2n-1, n)
        for (n, expected) in [(1, 1), (2, 3), (3, 10), (4, 35)] {
            let l = Arc::new(FiniteLattice::chain(n).unwrap());
            assert_eq!(monotone_maps(&l).len(), expected);
        }
    }

    #[test]
    fn non_monotone_tables_are_rejected() {
        let l = Arc::new(FiniteLattice::chain(2).unwrap());
        assert!(matches!(MonotoneMap::new(l, vec![1, 0]), Err(Error::NonMonotone(_))));
    }

    #[test]
    fn non_lattices_are_rejected() {
        let names = ["a", "b", "c", "d"].map(String::from).to_vec();
        // two incomparable maximal elements
        assert!(FiniteLattice::from_hasse(names, &[(0, 1), (0, 2), (3, 1), (3, 2)]).is_err());
    }

    #[test]
    fn single_node_identity_flow() {
        let l = pow_ab();
        let cfg = Cfg {
            lattice: l.clone(),
            nodes: vec![CfgNode { name: "n".into(), transfer: MonotoneMap::identity(l.clone()) }],
            edges: vec![(0, 0)],
            boundary: None,
        };
        let sol = dataflow_solve(&cfg, Direction::Forward).unwrap();
        assert_eq!(sol.output, vec![l.bottom()]);
    }
}

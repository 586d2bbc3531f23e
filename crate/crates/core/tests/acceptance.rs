//! One PASS/FAIL line per acceptance criterion, with wall-clock limits.

use std::path::PathBuf;
use std::sync::Arc;
use std::time::{Duration, Instant};

use fixcat::adamek;
use fixcat::algebra::{self, Algebra, Coalgebra};
use fixcat::cat::{Budget, Category, FinMap, FinSet, FinSets, FunctorSpec};
use fixcat::fixpoint::{self, LocalityProblem, Verdict};
use fixcat::io::FunctorDoc;
use fixcat::lattice::{self, FiniteLattice, MonotoneMap};
use fixcat::rank::{self, HomTree, Mode, RankValue, RationalHigherCat};
use fixcat::sigma::{self, Bound, DeltaMap, SigmaFragment, SigmaObject};
use fixcat::sweep;
use fixcat::Error;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e(err: Error) -> String {
    err.to_string()
}

// ---- shared oracles -------------------------------------------------------

/// Every function `dom → cod`, as codomain indices in lexicographic order.
fn all_maps(dom: &FinSet, cod: &FinSet) -> Vec<FinMap> {
    let (n, m) = (dom.len(), cod.len());
    if n > 0 && m == 0 {
        return Vec::new();
    }
    let total = m.pow(n as u32);
    (0..total)
        .map(|mut code| {
            let mut v = vec![0; n];
            for slot in v.iter_mut().rev() {
                *slot = code % m;
                code /= m;
            }
            FinMap::new(dom.clone(), cod.clone(), v).unwrap()
        })
        .collect()
}

fn bijective(f: &FinMap) -> bool {
    let mut seen = vec![false; f.cod().len()];
    f.dom().len() == f.cod().len() && f.values().iter().all(|&v| !std::mem::replace(&mut seen[v], true))
}

/// For every algebra `(B, β)` with `|B| = n`, the number of homomorphisms
/// out of `a`. Only `β` restricted to the images of the `F(h)` matters, so
/// the sweep enumerates those restrictions and weights each by the number of
/// algebras extending it. Returns (algebras covered, first offending count).
fn hom_counts_into_all_algebras(
    f: &FunctorSpec,
    a: &Algebra<FinSet, FinMap>,
    n: usize,
    expected: usize,
) -> Result<(u128, Option<usize>), String> {
    let b = FinSet::range(n);
    let fb = f.obj(&b).map_err(e)?;
    if n == 0 && !fb.is_empty() {
        return Ok((0, None));
    }
    let hs = all_maps(&a.carrier, &b);
    let fhs: Vec<FinMap> = hs.iter().map(|h| f.mor(h)).collect::<Result<_, _>>().map_err(e)?;
    let mut support: Vec<usize> = fhs.iter().flat_map(|fh| fh.values().iter().copied()).collect();
    support.sort_unstable();
    support.dedup();
    let slot = |x: usize| support.binary_search(&x).unwrap();
    let free = fb.len() - support.len();
    let weight = (n as u128).pow(free as u32);
    let classes = n.pow(support.len() as u32);
    let mut covered = 0u128;
    for mut code in 0..classes {
        let mut beta = vec![0; support.len()];
        for s in beta.iter_mut() {
            *s = code % n;
            code /= n;
        }
        let count = hs
            .iter()
            .zip(&fhs)
            .filter(|(h, fh)| {
                (0..a.action.dom().len()).all(|x| h.values()[a.action.values()[x]] == beta[slot(fh.values()[x])])
            })
            .count();
        covered += weight;
        if count != expected {
            return Ok((covered, Some(count)));
        }
    }
    Ok((covered, None))
}

fn coalgebra_hom_count(f: &FunctorSpec, c: &Coalgebra<FinSet, FinMap>, k: &Coalgebra<FinSet, FinMap>) -> usize {
    all_maps(&c.carrier, &k.carrier)
        .into_iter()
        .filter(|h| {
            let lhs = FinSets.compose(&f.mor(h).unwrap(), &c.coaction).unwrap();
            let rhs = FinSets.compose(&k.coaction, h).unwrap();
            lhs == rhs
        })
        .count()
}

/// Fixed points `(K, κ: K ≅ F K)` with `|K| ≤ max`.
fn fixed_points(f: &FunctorSpec, max: usize) -> Vec<Coalgebra<FinSet, FinMap>> {
    let mut out = Vec::new();
    for n in 0..=max {
        let k = FinSet::range(n);
        let fk = f.obj(&k).unwrap();
        if fk.len() != n {
            continue;
        }
        out.extend(all_maps(&k, &fk).into_iter().filter(bijective).map(|m| Coalgebra { carrier: k.clone(), coaction: m }));
    }
    out
}

fn coalg(f: &FunctorSpec, n: usize, values: Vec<usize>) -> Coalgebra<FinSet, FinMap> {
    let c = FinSet::range(n);
    let fc = f.obj(&c).unwrap();
    Coalgebra { coaction: FinMap::new(c.clone(), fc, values).unwrap(), carrier: c }
}

fn corpus_functors() -> Vec<(String, FunctorSpec)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus/functors");
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir).unwrap().map(|d| d.unwrap().path()).collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let doc: FunctorDoc = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
            let spec = doc.build().unwrap();
            (spec.name, spec.description)
        })
        .collect()
}

fn identity() -> FunctorSpec {
    FunctorSpec::Identity
}

fn const_ab() -> FunctorSpec {
    FunctorSpec::Constant(FinSet::atoms(&["a", "b"]))
}

fn square() -> FunctorSpec {
    FunctorSpec::monomial(1, 2)
}

fn test_coalgebras() -> Vec<(FunctorSpec, Coalgebra<FinSet, FinMap>)> {
    vec![
        (identity(), coalg(&identity(), 2, vec![0, 0])),
        (identity(), coalg(&identity(), 2, vec![1, 0])),
        (identity(), coalg(&identity(), 3, vec![1, 2, 2])),
        (identity(), coalg(&identity(), 3, vec![0, 0, 1])),
        (const_ab(), coalg(&const_ab(), 2, vec![0, 1])),
        (const_ab(), coalg(&const_ab(), 3, vec![0, 0, 1])),
        (square(), coalg(&square(), 1, vec![0])),
        (identity(), coalg(&identity(), 0, vec![])),
    ]
}

// ---- criteria ---------------------------------------------------------------

fn lambek_suite() -> Outcome {
    let functors = corpus_functors();
    ensure(functors.len() >= 12, || format!("only {} functor specs", functors.len()))?;
    let (mut stabilized, mut algebras) = (0, 0u128);
    for (name, f) in &functors {
        let cert = match adamek::initial_algebra(&FinSets, f, &Budget::default()) {
            Ok(c) => c,
            Err(Error::NotStabilized { .. } | Error::BudgetExceeded(_)) => continue,
            Err(err) => return Err(format!("{name}: {err}")),
        };
        stabilized += 1;
        let a = &cert.algebra;
        ensure(bijective(&a.action), || format!("{name}: action {} is not a bijection", a.action))?;
        for n in 0..=3 {
            let (covered, bad) = hom_counts_into_all_algebras(f, a, n, 1)?;
            algebras += covered;
            if let Some(count) = bad {
                return Err(format!("{name}: {count} homomorphisms into some algebra on {n} elements"));
            }
        }
    }
    ensure(stabilized >= 8, || format!("only {stabilized} stabilizing specs"))?;
    Ok(format!("{} specs, {stabilized} stabilize, {algebras} target algebras", functors.len()))
}

fn knaster_tarski() -> Outcome {
    let expected_lattices = [1, 1, 1, 2, 5];
    let (mut maps, mut lattices) = (0usize, 0usize);
    for n in 1..=5 {
        let ls = lattice::enumerate_lattices(n).map_err(e)?;
        ensure(ls.len() == expected_lattices[n - 1], || format!("{} lattices with {n} elements", ls.len()))?;
        for l in ls {
            lattices += 1;
            let l = Arc::new(l);
            let monotone = brute_force_monotone(&l);
            let generated = lattice::monotone_maps(&l);
            ensure(generated.len() == monotone.len(), || {
                format!("{} monotone maps generated, {} by brute force", generated.len(), monotone.len())
            })?;
            for table in monotone {
                let m = MonotoneMap::new(l.clone(), table.clone()).map_err(e)?;
                let fixed: Vec<usize> = (0..n).filter(|&x| table[x] == x).collect();
                let least = *fixed.iter().find(|&&x| fixed.iter().all(|&y| l.leq(x, y))).ok_or("no least fixed point")?;
                let greatest = *fixed.iter().find(|&&x| fixed.iter().all(|&y| l.leq(y, x))).ok_or("no greatest fixed point")?;
                let lfp = lattice::lfp_via_adamek(&m).map_err(e)?.value;
                let gfp = lattice::gfp_via_adamek(&m).map_err(e)?.value;
                ensure(lfp == least && gfp == greatest, || format!("{table:?}: lfp {lfp} gfp {gfp}, expected {least} {greatest}"))?;
                ensure(lattice::all_fixed_points(&m) == fixed, || format!("{table:?}: fixed points differ"))?;
                maps += 1;
            }
        }
    }
    Ok(format!("{lattices} lattices, {maps} monotone maps"))
}

fn brute_force_monotone(l: &FiniteLattice) -> Vec<Vec<usize>> {
    let n = l.len();
    let all = all_maps(&FinSet::range(n), &FinSet::range(n));
    all.into_iter()
        .map(|m| m.values().to_vec())
        .filter(|t| (0..n).all(|x| (0..n).all(|y| !l.leq(x, y) || l.leq(t[x], t[y]))))
        .collect()
}

fn free_corepresentability() -> Outcome {
    let x_plus_empty = FunctorSpec::Product(vec![FunctorSpec::Constant(FinSet::empty()), identity()]);
    let pairs = vec![
        (FinSet::range(1), FunctorSpec::Constant(FinSet::atoms(&["a"]))),
        (FinSet::range(2), const_ab()),
        (FinSet::range(3), FunctorSpec::Constant(FinSet::atoms(&["a"]))),
        (FinSet::range(0), identity()),
        (FinSet::range(2), x_plus_empty),
        (FinSet::range(0), square()),
        (FinSet::range(1), FunctorSpec::Composite(vec![square(), FunctorSpec::Constant(FinSet::range(2))])),
    ];
    let mut checked = 0u128;
    for (k, f) in &pairs {
        let cert = adamek::free_algebra(&FinSets, f, k, &Budget::default()).map_err(e)?;
        for n in 0..=3usize {
            let expected = n.pow(k.len() as u32);
            let (covered, bad) = hom_counts_into_all_algebras(f, &cert.algebra, n, expected)?;
            checked += covered;
            if let Some(count) = bad {
                return Err(format!("K={k:?}, F={f:?}: {count} homs into an algebra on {n} elements, |Hom(K,B)| = {expected}"));
            }
        }
    }
    Ok(format!("{} (K, F) pairs, {checked} target algebras", pairs.len()))
}

/// `B → B ⊔_E F B` is invertible iff no two elements of `B` are glued and
/// every element of `F B` is glued to something in `B`.
fn coprojection_invertible(lax: &algebra::LaxAlgebra<FinSet, FinMap>) -> bool {
    let (b, fb) = (lax.carrier.len(), lax.resolution.cod().len());
    let mut parent: Vec<usize> = (0..b + fb).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for e in 0..lax.apex.len() {
        let (x, y) = (find(&mut parent, lax.action.values()[e]), find(&mut parent, b + lax.resolution.values()[e]));
        parent[x] = y;
    }
    let roots_b: Vec<usize> = (0..b).map(|x| find(&mut parent, x)).collect();
    let mut sorted = roots_b.clone();
    sorted.sort_unstable();
    sorted.dedup();
    sorted.len() == b && (b..b + fb).all(|y| roots_b.contains(&find(&mut parent, y)))
}

fn propagation_fixed_points() -> Outcome {
    let a = FinSet::atoms(&["a"]);
    let functors = [identity(), FunctorSpec::Constant(a.clone()), FunctorSpec::Sum(vec![identity(), FunctorSpec::Constant(a)])];
    let mut total = 0;
    for f in &functors {
        let laxes = algebra::enumerate_lax_algebras(f, 2, 1_000_000).map_err(e)?;
        let expected: usize = (0..=2usize)
            .flat_map(|ex| (0..=2usize).map(move |bx| (ex, bx)))
            .map(|(ex, bx)| (f.obj(&FinSet::range(bx)).unwrap().len() * bx).pow(ex as u32))
            .sum();
        ensure(laxes.len() == expected, || format!("{f:?}: {} lax algebras, expected {expected}", laxes.len()))?;
        for lax in &laxes {
            let step = adamek::propagate(&FinSets, f, lax).map_err(e)?;
            let unit_iso = bijective(&step.unit.apex_map) && bijective(&step.unit.carrier_map);
            let oracle = bijective(&lax.resolution) && coprojection_invertible(lax);
            ensure(unit_iso == oracle, || format!("{f:?}: library and oracle disagree on {lax:?}"))?;
            ensure(unit_iso == bijective(&lax.resolution), || format!("{f:?}: unit iso {unit_iso} on {lax:?}"))?;
            total += 1;
        }
    }
    Ok(format!("{total} lax algebras"))
}

fn reflection_adjunction() -> Outcome {
    let budget = Budget::default();
    let mut comparisons = 0;
    let coalgebras = test_coalgebras();
    ensure(coalgebras.len() >= 6, || "too few coalgebras".into())?;
    for (f, c) in &coalgebras {
        let r = fixpoint::reflect(&FinSets, f, c, &budget).map_err(e)?;
        let ic = Coalgebra { carrier: r.fixed.carrier.clone(), coaction: r.fixed.iso.clone() };
        ensure(bijective(&ic.coaction), || "reflection is not a fixed point".into())?;
        for k in fixed_points(f, 3) {
            let (lhs, rhs) = (coalgebra_hom_count(f, &ic, &k), coalgebra_hom_count(f, c, &k));
            ensure(lhs == rhs, || format!("{f:?} {c:?} → {k:?}: {lhs} vs {rhs}"))?;
            comparisons += 1;
        }
        let fc = Coalgebra { carrier: c.coaction.cod().clone(), coaction: f.mor(&c.coaction).unwrap() };
        let p = LocalityProblem { hom: c.coaction.clone(), src: c.clone(), dst: fc };
        let v = fixpoint::is_f_local(&FinSets, f, &p, &budget).map_err(e)?;
        ensure(v.verdict == Verdict::Local, || format!("coaction of {c:?} is not local"))?;
    }
    Ok(format!("{} coalgebras, {comparisons} fixed-point targets, every coaction local", coalgebras.len()))
}

fn locality_criteria() -> Outcome {
    let budget = Budget { stages: 12, max_object: 64, ..Budget::default() };
    let seed = 20_240_601;
    let (mut checked, mut inconclusive) = (0, 0);
    for (f, max) in [(identity(), 3), (const_ab(), 2), (square(), 2)] {
        let corpus = sweep::coalgebra_hom_corpus(&f, max, 100_000).map_err(e)?;
        let s = sweep::locality_sweep(&f, &corpus, 60, seed, &budget).map_err(e)?;
        ensure(s.section_disagreements.is_empty(), || format!("{f:?}: section disagrees on {:?}", s.section_disagreements[0]))?;
        ensure(s.lift_contradictions.is_empty(), || format!("{f:?}: lift contradicts on {:?}", s.lift_contradictions[0]))?;
        checked += s.checked;
        inconclusive += s.lift_inconclusive;
    }
    ensure(checked >= 50, || format!("only {checked} homs checked"))?;
    Ok(format!("{checked} homs (seed {seed}), section agrees on all, lift inconclusive on {inconclusive} local homs"))
}

fn relative_endofunctor() -> Outcome {
    let budget = Budget::default();
    let mut n = 0;
    for (f, c) in test_coalgebras() {
        let rep = fixpoint::relative_initial_check(&FinSets, &f, &c, &budget).map_err(e)?;
        let iso = rep.iso.clone().ok_or_else(|| format!("{c:?}: no iso under C"))?;
        let r = fixpoint::reflect(&FinSets, &f, &c, &budget).map_err(e)?;
        ensure(bijective(&iso), || "comparison is not a bijection".into())?;
        ensure(iso.cod() == &r.fixed.carrier, || "iso does not land in the reflection".into())?;
        let under = FinSets.compose(&iso, &rep.carrier.point).map_err(e)?;
        ensure(under == r.unit, || format!("{c:?}: iso is not under C"))?;
        n += 1;
    }
    ensure(n >= 4, || "too few instances".into())?;
    Ok(format!("{n} instances"))
}

/// Monotone maps `[m] → [n]`, counted directly.
fn monotone_count(m: usize, n: usize) -> usize {
    all_maps(&FinSet::range(m + 1), &FinSet::range(n + 1)).iter().filter(|f| f.values().windows(2).all(|w| w[0] <= w[1])).count()
}

fn sigma_combinatorics() -> Outcome {
    let one = SigmaObject::new(vec![1]).map_err(e)?;
    let two = SigmaObject::new(vec![2]).map_err(e)?;
    let h11 = sigma::sigma_hom_enumerate(&one, &one, 1000).map_err(e)?.len();
    let h22 = sigma::sigma_hom_enumerate(&two, &two, 1000).map_err(e)?.len();
    ensure(h11 == 3 && h11 == monotone_count(1, 1), || format!("|Hom((1),(1))| = {h11}"))?;
    ensure(h22 == 10 && h22 == monotone_count(2, 2), || format!("|Hom((2),(2))| = {h22}"))?;
    // arrows of Hom((1),(2)) are pairs a ≤ b in [2]; count those ending and starting at each vertex
    let arrows: Vec<(usize, usize)> = (0..=2).flat_map(|a| (a..=2).map(move |b| (a, b))).collect();
    let oracle: Vec<(usize, usize)> =
        (0..=2).map(|p| (arrows.iter().filter(|a| a.1 == p).count(), arrows.iter().filter(|a| a.0 == p).count())).collect();
    let terms = sigma::segal_terms(&SigmaObject::point(), &two, 1000).map_err(e)?;
    ensure(terms == oracle && oracle == [(1, 3), (2, 2), (3, 1)], || format!("segal terms {terms:?}"))?;
    let sum: usize = terms.iter().map(|(a, b)| a * b).sum();
    ensure(sum == h22, || format!("Σ ends·starts = {sum}"))?;

    let fragment = Arc::new(SigmaFragment::new(Bound::new(2, 2, 2), 10_000_000).map_err(e)?);
    let violations = fragment.check_axioms().map_err(e)?;
    ensure(violations.is_empty(), || format!("axiom violation: {:?}", violations[0]))?;
    if let Some(cx) = sigma::check_representative_independence(&fragment).map_err(e)? {
        return Err(format!("composition depends on representatives: {cx:?}"));
    }
    for x in fragment.objects() {
        let m = x.entries().first().copied().unwrap_or(0);
        if x.dim() <= 1 {
            // Σ₁ is Δ
            let n = sigma::sigma_hom_enumerate(x, x, 1000).map_err(e)?.len();
            ensure(n == monotone_count(m, m), || format!("|Hom({x},{x})| = {n}"))?;
        }
        let p = sigma::representable(fragment.clone(), x).map_err(e)?;
        ensure(p.check_functoriality().map_err(e)?.is_empty(), || format!("Σ[{x}] is not a functor"))?;
        let seg = sigma::segal_check(&p).map_err(e)?;
        ensure(seg.passes(), || format!("Σ[{x}] fails Segal: {:?}", seg.failures().next()))?;
        let comp = sigma::completeness_check(&p).map_err(e)?;
        ensure(comp.passes(), || format!("Σ[{x}] fails completeness: {:?}", comp.failures[0]))?;
    }
    let _ = DeltaMap::identity(0);
    Ok(format!(
        "3, 10 = 1·3+2·2+3·1; {} objects, {} morphisms, axioms and representatives ok, {} representables Segal and complete",
        fragment.objects().len(),
        fragment.morphisms().len(),
        fragment.objects().len()
    ))
}

/// Rank level straight from the definition, Contractible as −1.
fn level(t: &HomTree) -> i64 {
    match t {
        HomTree::Point => -1,
        HomTree::Node(n) if n.objects() == 0 => 0,
        HomTree::Node(n) => {
            let top = n.homs().iter().flatten().map(level).max().unwrap_or(-1);
            if top < 0 {
                -1
            } else {
                top + 1
            }
        }
    }
}

fn rank_tower() -> Outcome {
    let mut x = HomTree::empty();
    for k in 0..=5u32 {
        ensure(x.rank() == RankValue::Finite(k) && level(&x) == k as i64, || format!("rank Σ^{k}∅ = {}", x.rank()))?;
        ensure(rank::strictness_witness(k as usize) == x, || format!("witness {k} differs"))?;
        x = x.suspension();
    }
    ensure(HomTree::Point.rank() == RankValue::Contractible, || "rank Point".into())?;
    let all = rank::enumerate_skeletons(2, 3, 1_000_000).map_err(e)?;
    ensure(all.len() as u128 == rank::skeleton_count(2, 3), || format!("{} skeletons", all.len()))?;
    let ys: Vec<HomTree> = rank::enumerate_skeletons(2, 2, 1000).map_err(e)?.into_iter().filter(|y| y.objects() >= 1).collect();
    let mut contractible = 0;
    let mut pairs = 0;
    for x in &all {
        let lx = level(x);
        ensure(x.rank() == RankValue::from_level(lx), || format!("rank of {x:?}"))?;
        let ls = level(&x.suspension());
        if lx < 0 {
            contractible += 1;
            ensure(ls == 1, || format!("rank Σ{x:?} = {ls}"))?;
        } else {
            ensure(ls == lx + 1, || format!("rank Σ{x:?} = {ls}, rank X = {lx}"))?;
        }
        ensure(level(&HomTree::coproduct(&[x.clone(), HomTree::empty()])) == lx, || "coproduct with ∅".into())?;
        if x.objects() >= 1 {
            for y in &ys {
                let lc = level(&HomTree::coproduct(&[x.clone(), y.clone()]));
                let want = lx.max(level(y)).max(1);
                ensure(lc == want, || format!("rank({x:?} ⊔ {y:?}) = {lc}, want {want}"))?;
                pairs += 1;
            }
        }
    }
    Ok(format!(
        "Σ^k∅ = k for k ≤ 5; {} skeletons; {pairs} coproduct pairs; successor law literal for non-contractible X, rank ΣX = 1 on {contractible} contractible X",
        all.len()
    ))
}

/// Non-Noetherian iff a cycle of non-contractible states is reachable from
/// the root through non-contractible states.
fn oracle_non_noetherian(m: &RationalHigherCat) -> bool {
    let states = m.states();
    let mut contractible = vec![false; states.len()];
    loop {
        let next: Vec<bool> = states
            .iter()
            .map(|s| s.point || (s.objects > 0 && s.homs.iter().flatten().all(|&t| contractible[t])))
            .collect();
        if next == contractible {
            break;
        }
        contractible = next;
    }
    let succ = |q: usize| -> Vec<usize> { states[q].homs.iter().flatten().copied().filter(|&t| !contractible[t]).collect() };
    if contractible[m.root()] {
        return false;
    }
    let mut reach = vec![false; states.len()];
    let mut stack = vec![m.root()];
    while let Some(q) = stack.pop() {
        if !std::mem::replace(&mut reach[q], true) {
            stack.extend(succ(q));
        }
    }
    // a reachable state lies on a cycle iff it reaches itself
    (0..states.len()).filter(|&q| reach[q]).any(|q| {
        let mut seen = vec![false; states.len()];
        let mut stack = succ(q);
        while let Some(r) = stack.pop() {
            if r == q {
                return true;
            }
            if !std::mem::replace(&mut seen[r], true) {
                stack.extend(succ(r));
            }
        }
        false
    })
}

fn noetherian_small_rank() -> Outcome {
    let mut checked = 0;
    let mut non_noetherian = 0;
    let mut failure = None;
    rank::for_each_machine(3, 2, |m| {
        if failure.is_some() {
            return;
        }
        checked += 1;
        let report = m.noeth_equiv_rank();
        let oracle = oracle_non_noetherian(m);
        let verdict = m.is_noetherian();
        if !report.agrees || verdict.noetherian == oracle || report.rank.is_small() == oracle {
            failure = Some(format!("{m:?}: {report:?}, oracle non-noetherian {oracle}"));
            return;
        }
        if let Some(w) = &verdict.witness {
            non_noetherian += 1;
            if !m.check_witness(w, 3 * m.states().len() + 3) {
                failure = Some(format!("{m:?}: witness {w:?} does not check"));
            }
        } else if !verdict.noetherian {
            failure = Some(format!("{m:?}: no witness"));
        }
    });
    if let Some(f) = failure {
        return Err(f);
    }
    let l = RationalHigherCat::self_loop();
    ensure(!l.contractible(Mode::Inductive), || "self-loop inductively contractible".into())?;
    ensure(l.contractible(Mode::Coinductive), || "self-loop not coinductively contractible".into())?;
    let v = l.is_noetherian();
    ensure(!v.noetherian, || "self-loop Noetherian".into())?;
    let w = v.witness.ok_or("self-loop without witness")?;
    ensure(l.check_witness(&w, 10), || "self-loop witness".into())?;
    ensure(l.rank() == RankValue::NotSmall, || format!("self-loop rank {}", l.rank()))?;
    Ok(format!("{checked} machines, {non_noetherian} non-Noetherian with witnesses; self-loop: not inductively contractible, coinductively contractible, NotSmall"))
}

fn strictly_growing(sizes: &[usize]) -> bool {
    sizes.len() >= 4 && sizes.windows(2).all(|w| w[0] < w[1])
}

fn negative_space() -> Outcome {
    let budget = Budget::with_stages(12);
    let growth = |name: &str, r: Result<(), Error>| -> Result<String, String> {
        match r {
            Err(Error::NotStabilized { sizes, .. }) if strictly_growing(&sizes) => Ok(format!("{name} {sizes:?}")),
            Err(Error::NotStabilized { sizes, .. }) => Err(format!("{name}: sizes {sizes:?} not growing")),
            Err(other) => Err(format!("{name}: {other}")),
            Ok(()) => Err(format!("{name}: reported a fixed point")),
        }
    };
    let a = growth("1+X", adamek::initial_algebra(&FinSets, &FunctorSpec::one_plus_x(), &budget).map(|_| ()))?;
    let x2 = FunctorSpec::monomial(2, 1);
    let b = growth("X×2", adamek::terminal_coalgebra(&FinSets, &x2, &budget).map(|_| ()))?;
    let c = growth("free identity", adamek::free_algebra(&FinSets, &identity(), &FinSet::range(1), &budget).map(|_| ()))?;
    Ok(format!("{}; {}; {}", short(&a), short(&b), short(&c)))
}

fn short(s: &str) -> String {
    s.chars().take(40).collect::<String>() + "…"
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Outcome); 11] = [
        ("1 Lambek suite", Duration::from_secs(10), lambek_suite),
        ("2 Knaster-Tarski vs Adamek", Duration::from_secs(60), knaster_tarski),
        ("3 free-algebra corepresentability", Duration::from_secs(30), free_corepresentability),
        ("4 propagation fixed points", Duration::from_secs(60), propagation_fixed_points),
        ("5 reflection adjunction", Duration::from_secs(30), reflection_adjunction),
        ("6 locality criteria", Duration::from_secs(30), locality_criteria),
        ("7 relative endofunctor", Duration::from_secs(10), relative_endofunctor),
        ("8 sigma combinatorics", Duration::from_secs(60), sigma_combinatorics),
        ("9 rank tower", Duration::from_secs(30), rank_tower),
        ("10 noetherian iff small rank", Duration::from_secs(60), noetherian_small_rank),
        ("11 negative space", Duration::from_secs(5), negative_space),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, limit, check) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let result = check();
        let took = start.elapsed();
        let (verdict, detail) = match result {
            Ok(d) if took <= limit => ("PASS", d),
            Ok(d) => ("FAIL", format!("over the {limit:?} limit; {d}")),
            Err(d) => ("FAIL", d),
        };
        if verdict == "FAIL" {
            failed += 1;
        }
        println!("{verdict} criterion {name} ({:.2}s / {}s): {detail}", took.as_secs_f64(), limit.as_secs());
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}

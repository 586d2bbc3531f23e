use std::io::Write as _;
use std::sync::Arc;

use proptest::prelude::*;

use fixcat::cat::{FinMap, FinSet};
use fixcat::io::{self, FunctorDoc, MapDto, Schema};
use fixcat::lattice::{self, FiniteLattice, MonotoneMap};
use fixcat::rank::{HomTree, Mode, RankValue, RationalHigherCat};
use fixcat::sigma::{self, SigmaObject};

fn lattice_and_map() -> impl Strategy<Value = MonotoneMap> {
    (1usize..=5, any::<prop::sample::Index>(), any::<prop::sample::Index>()).prop_map(|(n, li, mi)| {
        let ls = lattice::enumerate_lattices(n).unwrap();
        let l: Arc<FiniteLattice> = Arc::new(ls[li.index(ls.len())].clone());
        let maps = lattice::monotone_maps(&l);
        maps[mi.index(maps.len())].clone()
    })
}

fn tree() -> impl Strategy<Value = HomTree> {
    let leaf = prop_oneof![Just(HomTree::Point), Just(HomTree::empty())];
    leaf.prop_recursive(4, 40, 4, |inner| {
        (0usize..=2).prop_flat_map(move |n| {
            prop::collection::vec(inner.clone(), n * n).prop_map(move |flat| {
                let homs = flat.chunks(n.max(1)).map(<[HomTree]>::to_vec).take(n).collect();
                HomTree::node(n, homs).unwrap()
            })
        })
    })
}

fn sigma_object() -> impl Strategy<Value = SigmaObject> {
    prop::collection::vec(1usize..=2, 0..=2).prop_map(|v| SigmaObject::new(v).unwrap())
}

proptest! {
    #[test]
    fn kleene_values_are_extremal_fixed_points(f in lattice_and_map()) {
        let fixed = lattice::all_fixed_points(&f);
        let (lo, hi) = (lattice::lfp(&f).value, lattice::gfp(&f).value);
        prop_assert!(fixed.contains(&lo) && fixed.contains(&hi));
        prop_assert!(fixed.iter().all(|&x| f.lattice().leq(lo, x) && f.lattice().leq(x, hi)));
        prop_assert_eq!(lattice::lfp_via_adamek(&f).unwrap().value, lo);
        prop_assert_eq!(lattice::gfp_via_adamek(&f).unwrap().value, hi);
    }

    #[test]
    fn kleene_trace_climbs(f in lattice_and_map()) {
        let t = lattice::lfp(&f).trace;
        prop_assert_eq!(t[0], f.lattice().bottom());
        prop_assert!(t.windows(2).all(|w| f.lattice().leq(w[0], w[1]) && w[0] != w[1]));
    }

    #[test]
    fn sigma_count_matches_enumeration(s in sigma_object(), t in sigma_object()) {
        let listed = sigma::sigma_hom_enumerate(&s, &t, 100_000).unwrap();
        prop_assert_eq!(listed.len() as u128, sigma::hom_count(&s, &t));
        let mut dedup = listed.clone();
        dedup.sort_by_key(|m| format!("{m:?}"));
        dedup.dedup();
        prop_assert_eq!(dedup.len(), listed.len());
    }

    #[test]
    fn sigma_objects_print_and_parse(s in sigma_object()) {
        prop_assert_eq!(s.to_string().parse::<SigmaObject>().unwrap(), s);
    }

    #[test]
    fn rank_matches_rank_below(x in tree()) {
        let below: Vec<bool> = (-1..8).map(|n| x.rank_below(n)).collect();
        prop_assert!(below.windows(2).all(|w| !w[0] || w[1]), "not upward closed: {below:?}");
        let expected = match below.iter().position(|&b| b) {
            None => RankValue::NotSmall,
            Some(1) => RankValue::Contractible,
            Some(i) => RankValue::Finite(i as u32 - 2),
        };
        prop_assert_eq!(x.rank(), expected);
    }

    #[test]
    fn machines_agree_with_their_trees(x in tree()) {
        let m = RationalHigherCat::from_tree(&x);
        prop_assert_eq!(m.rank(), x.rank());
        prop_assert_eq!(m.contractible(Mode::Inductive), x.is_contractible());
        prop_assert!(!m.contractible(Mode::Inductive) || m.contractible(Mode::Coinductive));
        prop_assert!(m.is_noetherian().noetherian);
    }

    #[test]
    fn suspension_adds_one_above_contractible(x in tree()) {
        let s = x.suspension().rank();
        match x.rank() {
            RankValue::Contractible => prop_assert_eq!(s, RankValue::Finite(1)),
            r => prop_assert_eq!(s, r.successor()),
        }
    }

    #[test]
    fn maps_round_trip_through_json(n in 0usize..5, m in 1usize..5, seed in any::<u64>()) {
        let values: Vec<usize> = (0..n).map(|i| ((seed >> (i * 8)) as usize) % m).collect();
        let f = FinMap::new(FinSet::range(n), FinSet::range(m), values).unwrap();
        let text = serde_json::to_string(&MapDto::from_map(&f)).unwrap();
        let back: MapDto = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back.build(f.dom(), f.cod()).unwrap(), f);
    }
}

#[test]
fn documents_round_trip_through_files() {
    let src = concat!(env!("CARGO_MANIFEST_DIR"), "/../../corpus/functors/one-plus-square.json");
    let doc: FunctorDoc = io::read_doc(std::path::Path::new(src), Schema::Functor).unwrap();
    let mut file = tempfile::NamedTempFile::new().unwrap();
    file.write_all(serde_json::to_string_pretty(&doc).unwrap().as_bytes()).unwrap();
    let again: FunctorDoc = io::read_doc(file.path(), Schema::Functor).unwrap();
    assert_eq!(again, doc);
    assert_eq!(again.build().unwrap(), doc.build().unwrap());

    let mut bad = tempfile::NamedTempFile::new().unwrap();
    bad.write_all(br#"{"format": "fixcat/2", "category": {"kind": "finset"}, "functor": "identity"}"#).unwrap();
    let err = io::read_doc::<FunctorDoc>(bad.path(), Schema::Functor).unwrap_err();
    assert!(err.to_string().contains("schemas/functor.schema.json"), "{err}");
}

mod common;

use std::collections::BTreeMap;

use common::*;
use dpcolor::cover::{extend_precoloring, find_transversal, straighten, ColorSet, CoverInstance, Transversal};
use dpcolor::discharge::{
    apply_rules, apply_rules_in_order, audit, initial_charges, vertex_typing, Account, Rule, RuleContext,
};
use dpcolor::format::{CoverFile, GraphFile};
use dpcolor::planar::{extract_clusters, Dsu};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ledger_conserves_charge(seed in any::<u64>()) {
        let pg = generated_corpus(&mut rng(seed), 1, 16).pop().unwrap();
        let r = audit(&pg);
        prop_assert_eq!(r.initial_sum(), 0);
        prop_assert_eq!(r.sum(), 0);
        let mut replay: BTreeMap<Account, i64> = r.initial.clone();
        for t in &r.transfers {
            prop_assert!(t.quarters > 0);
            *replay.entry(t.from).or_insert(0) -= t.quarters;
            *replay.entry(t.to).or_insert(0) += t.quarters;
        }
        replay.retain(|a, _| r.accounts.contains_key(a));
        prop_assert_eq!(replay, r.accounts.clone());
        prop_assert!(euler_holds(&pg));
    }

    #[test]
    fn rules_commute(seed in any::<u64>()) {
        let mut g = rng(seed);
        let pg = generated_corpus(&mut g, 1, 14).pop().unwrap();
        let clusters = extract_clusters(&pg);
        let typing = vertex_typing(&pg, &clusters);
        let ctx = RuleContext::new(&pg, &clusters, &typing);
        let mut base = initial_charges(&pg);
        base.fold_clusters(&clusters);
        let mut a = base.clone();
        apply_rules(&ctx, &mut a);
        let mut order = Rule::ORDER.to_vec();
        order.shuffle(&mut g);
        let mut b = base;
        apply_rules_in_order(&ctx, &mut b, &order);
        prop_assert_eq!(a.accounts(), b.accounts());
    }

    #[test]
    fn straightening_preserves_verdicts(seed in any::<u64>()) {
        let mut g = rng(seed);
        let inst = random_instance(&mut g, 9, 4);
        let mut edges = inst.graph().edges().to_vec();
        edges.shuffle(&mut g);
        let mut dsu = Dsu::new(inst.n());
        let forest: Vec<_> = edges.into_iter().filter(|e| dsu.union(e.lo, e.hi)).collect();
        let s = straighten(&inst, &forest).unwrap();
        prop_assert_eq!(brute_force(&inst), brute_force(&s.instance));
        if let Some(t) = find_transversal(&s.instance, &Transversal::empty(inst.n())) {
            prop_assert!(s.map_back(&t).is_valid_for(&inst));
            prop_assert_eq!(s.map_forward(&s.map_back(&t)), t);
        }
    }

    #[test]
    fn larger_lists_keep_transversals(seed in any::<u64>()) {
        let mut g = rng(seed);
        let inst = random_instance(&mut g, 7, 4);
        let k = inst.k();
        let mut sets: Vec<ColorSet> = (0..inst.n()).map(|v| inst.lists().mask(v)).collect();
        for s in &mut sets {
            s.insert(g.gen_range(1..=k));
        }
        let bigger = inst.with_lists(dpcolor::cover::ListAssignment::from_sets(k, sets).unwrap()).unwrap();
        prop_assert!(brute_force(&bigger) >= brute_force(&inst));
        if find_transversal(&inst, &Transversal::empty(inst.n())).is_some() {
            prop_assert!(find_transversal(&bigger, &Transversal::empty(inst.n())).is_some());
        }
    }

    #[test]
    fn extensions_keep_the_precoloring(seed in any::<u64>()) {
        let mut g = rng(seed);
        let inst = random_instance(&mut g, 7, 4);
        let mut phi = Transversal::empty(inst.n());
        for v in 0..inst.n() {
            if g.gen_bool(0.3) {
                let colors = inst.lists().colors(v);
                phi.set(v, Some(colors[g.gen_range(0..colors.len())]));
            }
        }
        match extend_precoloring(&inst, &phi) {
            Err(_) => prop_assert!(phi.check(&inst).is_err()),
            Ok(None) => {
                // No extension: brute force over instances with pinned lists agrees.
                let mut lists = inst.lists().clone();
                for v in 0..inst.n() {
                    if let Some(c) = phi.get(v) {
                        lists.set_mask(v, ColorSet::from_colors([c]));
                    }
                }
                prop_assert_eq!(brute_force(&inst.with_lists(lists).unwrap()), 0);
            }
            Ok(Some(t)) => {
                prop_assert!(t.is_valid_for(&inst));
                for v in 0..inst.n() {
                    if phi.get(v).is_some() {
                        prop_assert_eq!(t.get(v), phi.get(v));
                    }
                }
            }
        }
    }

    #[test]
    fn cover_files_round_trip(seed in any::<u64>()) {
        let inst: CoverInstance = random_instance(&mut rng(seed), 8, 5);
        let file = CoverFile::from_instance(&inst, Some("x".into()), None);
        let back = CoverFile::from_json(&file.to_json_pretty()).unwrap();
        prop_assert_eq!(&back, &file);
        prop_assert_eq!(back.to_instance().unwrap(), inst);
    }
}

#[test]
fn asset_files_round_trip() {
    let mut names: Vec<String> = ["k4.json", "c5.json", "c7.json", "butterfly.json", "petersen.json"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    names.extend((1..=11).map(|c| format!("clusters/c{c:02}.json")));
    for name in names {
        let file = load_asset(&name);
        let again = GraphFile::from_json(&file.to_json()).unwrap();
        assert_eq!(again, file, "{name}");
    }
    for name in ["ce6.json", "ce7.json"] {
        let file = CoverFile::from_json(&std::fs::read_to_string(asset(name)).unwrap()).unwrap();
        assert_eq!(CoverFile::from_json(&file.to_json_pretty()).unwrap(), file, "{name}");
    }
}

mod common;

use common::*;
use dpcolor::format::CoverFile;
use dpcolor::reduce::cases::check_seven_cluster_cases;
use dpcolor::reduce::{
    check_greedy_certificate, check_precolor_margin, check_reducible, config_catalog, restraighten_each,
    verify_witness, ConfigFile, EngineOptions, Mode, Status, Strategy,
};

#[test]
fn greedy_proofs_hold_on_every_instance() {
    let cat = config_catalog();
    for label in ["L2", "L4-diamond", "L5-special5"] {
        let cfg = &cat[label];
        let rule = cfg.proof.as_ref().unwrap();
        let r = check_greedy_certificate(cfg, rule).unwrap();
        assert!(r.holds, "{label}: {:?}", r.counterexample);
        assert!(r.instances > 0);
    }
}

#[test]
fn one_center_color_at_most_blocks_the_triangle() {
    let cat = config_catalog();
    let r = check_precolor_margin(&cat["L6-precolor"]).unwrap();
    assert!(r.holds);
    assert_eq!(r.max_bad, 1);
    assert!(r.tight > 0, "the margin is attained");
    assert!(check_precolor_margin(&cat["L4-diamond"]).is_err());
}

#[test]
fn seven_cluster_case_analysis_covers_every_instance() {
    let r = check_seven_cluster_cases();
    assert!(r.holds(), "{:?}", r.examples);
    assert_eq!(r.instances, r.early_exits + r.pattern_b + r.pattern_c);
    assert!(r.pattern_b > 0 && r.pattern_c > 0);
}

#[test]
fn strategies_and_options_agree_on_the_diamond() {
    let cfg = &config_catalog()["L4-diamond"];
    for strategy in [Strategy::Branch, Strategy::Product] {
        for (straighten, symmetry) in [(true, true), (true, false), (false, true), (false, false)] {
            let opts = EngineOptions { straighten, symmetry, strategy, ..Default::default() };
            let v = check_reducible(cfg, Mode::Full, &opts);
            assert_eq!(v.status, Status::Reducible, "{strategy:?} straighten={straighten} symmetry={symmetry}");
        }
    }
}

#[test]
fn tiny_budget_is_inconclusive_not_wrong() {
    let cfg = &config_catalog()["L7-555"];
    let v = check_reducible(cfg, Mode::Full, &EngineOptions { budget: 10, ..Default::default() });
    assert_eq!(v.status, Status::Inconclusive);
}

#[test]
fn too_small_floors_are_refuted_with_a_witness() {
    // A triangle with 2-lists is not colorable under straight matchings.
    let file: ConfigFile = serde_json::from_str(
        r#"{"label": "tri", "vertices": ["a", "b", "c"], "edges": [["a", "b"], ["b", "c"], ["a", "c"]],
            "floors": {"a": 2, "b": 2, "c": 2}, "tree": [], "k": 4}"#,
    )
    .unwrap();
    let cfg = file.build().unwrap();
    let v = check_reducible(&cfg, Mode::Full, &EngineOptions::default());
    assert_eq!(v.status, Status::NotReducible);
    let w = v.witness.unwrap().to_instance().unwrap();
    assert_eq!(brute_force(&w), 0);
}

#[test]
fn gadget_edges_are_all_needed() {
    for name in ["ce6.json", "ce7.json"] {
        let file = CoverFile::from_json(&std::fs::read_to_string(asset(name)).unwrap()).unwrap();
        let inst = file.to_instance().unwrap();
        assert!(verify_witness(&inst));
        let diag = restraighten_each(&inst);
        assert!(!diag.is_empty());
        for (e, colorable) in diag {
            let mut m = inst.matchings().clone();
            m.set_perm(e.lo, e.hi, dpcolor::cover::Perm::identity(inst.k())).unwrap();
            let fixed = dpcolor::cover::CoverInstance::new(inst.graph().clone(), inst.lists().clone(), m).unwrap();
            assert_eq!(colorable, brute_force(&fixed) > 0, "{name} {}-{}", e.lo, e.hi);
        }
    }
}

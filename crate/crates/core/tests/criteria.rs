use collapse_core::chartab::{compute_character_table, parse_ctab};
use collapse_core::criteria::{
    centralizer_context, classify_group, classify_table, crit_dihedral_group, crit_dihedral_table, crit_extension,
    crit_involution_a4_group, crit_involution_a4_table, crit_involution_count, crit_quasireal, crit_real,
    crit_subgroup_propagation, find_affine_realization, involution_conjugates, revalidate, AffineSearch, ClassifyOptions,
    CriterionId, Effect, Evidence, ExtensionKnowledge, Outcome,
};
use collapse_core::diagonal::{affine_class_braiding, build_gdd, obstruction_scan, AffineCharacter, Obstruction};
use collapse_core::permgrp::{class_fusion, parse_group, Perm, PermGroup, Reality};
use collapse_core::rack::{direct_product, type_d_search, Rack, SearchBudget, SearchOutcome, Strategy};

fn data(name: &str) -> String {
    std::fs::read_to_string(format!("{}/../../data/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

fn group(name: &str) -> PermGroup {
    parse_group(&data(&format!("{name}.grp"))).unwrap()
}

fn label_of(g: &PermGroup, k: usize) -> String {
    g.conjugacy_classes().unwrap()[k].label.clone()
}

#[test]
fn reality_branches() {
    let f = crit_real(15, &Reality::Real).unwrap();
    assert_eq!(f.effect, Effect::AllInfinite);
    assert!(matches!(crit_real(2, &Reality::Real).unwrap().effect, Effect::Constraints { .. }));
    assert!(crit_real(5, &Reality::QuasiReal(vec![2])).is_none());
    assert!(crit_quasireal(5, &Reality::Real).is_none());

    let f = crit_quasireal(11, &Reality::QuasiReal(vec![3, 4, 5, 9])).unwrap();
    assert_eq!(f.effect, Effect::AllInfinite);
    assert!(matches!(f.reason.evidence, Evidence::Reality { j: Some(3), j_squared_power_differs: true, .. }));

    let f = crit_quasireal(22, &Reality::QuasiReal(vec![3, 5, 9, 15])).unwrap();
    let Effect::Constraints { constraints } = f.effect else { panic!() };
    assert_eq!(constraints.len(), 1);

    let f = crit_quasireal(8, &Reality::QuasiReal(vec![3])).unwrap();
    let Effect::Constraints { constraints } = f.effect else { panic!() };
    assert_eq!(constraints.len(), 2);
}

#[test]
fn frobenius_21() {
    let g = group("F21");
    let k = g.conjugacy_classes().unwrap().iter().position(|c| c.order == 7).unwrap();
    assert_eq!(g.reality_profile(k).unwrap(), Reality::QuasiReal(vec![2, 4]));
    let f = crit_quasireal(7, &g.reality_profile(k).unwrap()).unwrap();
    assert!(matches!(f.reason.evidence, Evidence::Reality { j: Some(2), j_squared_power_differs: true, .. }));
    assert_eq!(f.effect, Effect::AllInfinite);
    let t = compute_character_table(&g, "F21").unwrap();
    assert_eq!(t.reality(k).unwrap(), Reality::QuasiReal(vec![2, 4]));
}

#[test]
fn a4_criterion() {
    let g = group("A4");
    let t = compute_character_table(&g, "A4").unwrap();
    let k = g.class_by_label("2A").unwrap();
    let from_table = crit_involution_a4_table(&t, k).unwrap().unwrap();
    let from_group = crit_involution_a4_group(&g, k).unwrap().unwrap();
    let (Evidence::A4 { s_value: s1, k1: a1, k2: b1, .. }, Evidence::A4 { s_value: s2, k1: a2, k2: b2, subgroup_order, .. }) =
        (&from_table.reason.evidence, &from_group.reason.evidence)
    else {
        panic!()
    };
    assert_eq!((s1, a1, b1), (s2, a2, b2));
    assert_eq!(*subgroup_order, Some(12));

    let r = classify_group("A4", &g, &ClassifyOptions::default()).unwrap();
    let v = r.verdict("2A").unwrap();
    assert_eq!(v.outcome, Outcome::AllReprsInfinite);
    assert_eq!(v.decided_by(), Some(CriterionId::InvolutionA4));
    for label in ["3A", "3B"] {
        let v = r.verdict(label).unwrap();
        assert!(!v.outcome.is_conclusive());
    }
    assert!(!r.collapses);
}

#[test]
fn a4_table_and_group_agree_on_corpus() {
    for name in ["S3", "S4", "A4", "A5", "S5", "D8", "D12", "Q8", "F21", "F72"] {
        let g = group(name);
        let t = compute_character_table(&g, name).unwrap();
        for (k, c) in g.conjugacy_classes().unwrap().iter().enumerate() {
            if c.order != 2 {
                continue;
            }
            let a = crit_involution_a4_table(&t, k).unwrap().is_some();
            let b = crit_involution_a4_group(&g, k).unwrap().is_some();
            assert_eq!(a, b, "{name} {}", c.label);
        }
    }
}

#[test]
fn dihedral_criterion() {
    let g = group("M11");
    let t = parse_ctab(&data("M11.ctab")).unwrap();
    let k = g.class_by_label("2A").unwrap();
    let x = Rack::class_rack(&g, k).unwrap();
    let f = crit_dihedral_group(&g, k, &x, SearchBudget::default()).unwrap().unwrap();
    let Evidence::Dihedral { class, s_value, witness, n, .. } = &f.reason.evidence else { panic!() };
    assert!(*n > 4 && n % 2 == 0);
    witness.as_ref().unwrap().validate(&x).unwrap();
    let ft = crit_dihedral_table(&t, t.class_index("2A").unwrap()).unwrap().unwrap();
    let Evidence::Dihedral { class: ct, s_value: st, .. } = &ft.reason.evidence else { panic!() };
    assert_eq!((class, s_value), (ct, st));

    let s3 = group("S3");
    let t3 = compute_character_table(&s3, "S3").unwrap();
    assert!(crit_dihedral_table(&t3, t3.class_index("2A").unwrap()).unwrap().is_none());
    let d8 = group("D8");
    let t8 = compute_character_table(&d8, "D8").unwrap();
    for k in 0..t8.nclasses() {
        assert!(crit_dihedral_table(&t8, k).unwrap().is_none());
    }
}

#[test]
fn involution_count_in_s8() {
    let g = group("S8");
    let g0 = Perm::parse("(7,8)").unwrap();
    let ctx = centralizer_context(&g, &g0, 2000).unwrap();
    assert_eq!(ctx.group.order(), 1440);
    let conj = involution_conjugates(&g, &g0, &ctx).unwrap();
    let x = Perm::parse("(1,7)(2,8)").unwrap();
    let h = x.conj(&g0);
    assert_eq!(h, Perm::parse("(1,2)").unwrap());
    let hc = ctx.group.class_of(&h).unwrap();
    assert!(conj.iter().any(|c| c.h_class == hc));
    let mut fired = Vec::new();
    for i in 0..ctx.table.nclasses() {
        if ctx.scalar(i).as_i64() == Some(-1) && ctx.table.degree(i) == 5 {
            let (a, b) = ctx.table.eigenvalue_multiplicities(i, hc).unwrap().plus_minus();
            if (a, b) == (4, 1) {
                let f = crit_involution_count(&ctx, i, &conj).unwrap().unwrap();
                assert_eq!(f.effect, Effect::AllInfinite);
                fired.push(i);
            }
        }
    }
    assert!(!fired.is_empty());
    let trivial = (0..ctx.table.nclasses()).find(|&i| ctx.table.degree(i) == 1 && ctx.scalar(i).as_i64() == Some(-1)).unwrap();
    let degenerate: Vec<_> = conj.iter().filter(|c| c.h == g0).cloned().collect();
    assert!(degenerate.is_empty());
    assert!(crit_involution_count(&ctx, trivial, &conj).unwrap().is_none());
}

#[test]
fn affine_realization_in_m11() {
    let g = group("M11");
    for label in ["8A", "8B"] {
        let k = g.class_by_label(label).unwrap();
        let AffineSearch::Found(r) = find_affine_realization(&g, k, 1_000_000).unwrap() else { panic!("{label}") };
        assert_eq!((r.p, r.dim, r.d, r.j, r.subgroup_order), (3, 2, 8, 3, 72));
        assert!(r.verify(&g).unwrap());
        let rack = r.affine_rack().unwrap();
        for f in 1..9u64 {
            let chi = AffineCharacter::new(3, vec![f % 3, f / 3]);
            if chi.is_trivial() {
                continue;
            }
            let v = (1..rack.size()).map(|i| rack.point(i)).find(|v| !chi.eval(v).is_one()).unwrap();
            let b = affine_class_braiding(&rack, &v, &chi).unwrap();
            assert!(obstruction_scan(&build_gdd(&b)).iter().any(|o| matches!(o, Obstruction::CartanA11 { .. })));
        }
    }
    let c = PermGroup::new(vec![Perm::parse("(1,2,3,4,5,6,7,8)").unwrap()]);
    let k = c.class_of(&Perm::parse("(1,2,3,4,5,6,7,8)").unwrap()).unwrap();
    assert!(matches!(find_affine_realization(&c, k, 1000).unwrap(), AffineSearch::Inapplicable | AffineSearch::NotFound { .. }));
}

#[test]
fn m11_collapses() {
    let g = group("M11");
    let opts = ClassifyOptions { seed: 7, ..Default::default() };
    let r = classify_group("M11", &g, &opts).unwrap();
    for label in ["2A", "3A", "4A", "5A", "6A"] {
        assert_eq!(r.verdict(label).unwrap().outcome, Outcome::CollapsesTypeD, "{label}");
    }
    for label in ["8A", "8B"] {
        let v = r.verdict(label).unwrap();
        assert_eq!(v.outcome, Outcome::AllReprsInfinite);
        assert_eq!(v.decided_by(), Some(CriterionId::AffineQuasiReal));
    }
    for label in ["11A", "11B"] {
        let v = r.verdict(label).unwrap();
        assert_eq!(v.outcome, Outcome::AllReprsInfinite);
        assert!(v.reasons.iter().any(|x| matches!(x.evidence, Evidence::Reality { j: Some(3), j_squared_power_differs: true, order: 11, .. })));
    }
    assert!(r.collapses);
    assert!(r.to_text().trim_end().ends_with("group collapses"));
    assert!(revalidate(&r, Some(&group("M11")), None).unwrap() >= 9);
    let again = classify_group("M11", &g, &opts).unwrap();
    assert_eq!(r, again);

    let mut bad = r.clone();
    let v = bad.verdicts.iter_mut().find(|v| v.label == "11A").unwrap();
    if let Evidence::Reality { j, .. } = &mut v.reasons[0].evidence {
        *j = Some(7);
    }
    assert!(revalidate(&bad, Some(&g), None).is_err());
}

#[test]
fn table_mode_on_m11() {
    let t = parse_ctab(&data("M11.ctab")).unwrap();
    let r = classify_table(&t, &ClassifyOptions::default()).unwrap();
    assert_eq!(r.verdict("11A").unwrap().outcome, Outcome::AllReprsInfinite);
    assert_eq!(r.verdict("2A").unwrap().outcome, Outcome::CollapsesTypeD);
    assert!(matches!(r.verdict("8A").unwrap().outcome, Outcome::SurvivorsConstrained { .. }));
    assert!(revalidate(&r, None, Some(&t)).unwrap() > 0);
}

#[test]
fn abelian_groups_never_collapse() {
    for gens in [vec!["(1,2)"], vec!["(1,2,3)"], vec!["(1,2,3,4,5)", "(6,7)"]] {
        let g = PermGroup::new(gens.iter().map(|s| Perm::parse(s).unwrap()).collect());
        let r = classify_group("abelian", &g, &ClassifyOptions::default()).unwrap();
        for v in &r.verdicts {
            assert!(matches!(v.outcome, Outcome::SurvivorsConstrained { .. } | Outcome::Open), "{v:?}");
        }
        assert!(!r.collapses);
    }
}

#[test]
fn subgroup_propagation() {
    let a5 = group("A5");
    let a4 = PermGroup::new(vec![Perm::parse("(1,2)(3,4)").unwrap(), Perm::parse("(1,2,3)").unwrap()]);
    let fusion = class_fusion(&a4, &a5).unwrap();
    let hr = classify_group("A4", &a4, &ClassifyOptions::default()).unwrap();
    let found = crit_subgroup_propagation("A4", &a4, &hr.verdicts, &fusion).unwrap();
    let inv = a5.class_by_label("2A").unwrap();
    assert!(found.iter().any(|(k, f)| *k == inv && f.effect == Effect::AllInfinite));
    let id = class_fusion(&a5, &a5).unwrap();
    assert_eq!(id, (0..id.len()).collect::<Vec<_>>());
    let opts = ClassifyOptions { subgroups: vec![("A4".into(), a4)], ..Default::default() };
    let r = classify_group("A5", &a5, &opts).unwrap();
    assert_eq!(r.verdict("2A").unwrap().outcome, Outcome::AllReprsInfinite);
    let bogus = PermGroup::new(vec![Perm::parse("(1,6)").unwrap()]);
    assert!(class_fusion(&bogus, &a5).is_err());
}

#[test]
fn extension_arithmetic() {
    let s5 = group("S5");
    let c3 = PermGroup::new(vec![Perm::parse("(1,2,3)").unwrap()]);
    let (m, _, _) = direct_product(&s5, &c3);
    let know = ExtensionKnowledge::from_group("S5", &s5, 3, SearchBudget::default()).unwrap();
    assert!(know.type_d_orders.contains(&4) && know.type_d_orders.contains(&5));
    let check = crit_extension(15, &know);
    assert_eq!(check.qualifying, vec![5, 15]);
    assert!(check.fires);
    let check = crit_extension(3, &know);
    assert!(!check.fires);
    assert_eq!(check.qualifying, vec![1, 3]);
    let trivial = ExtensionKnowledge { kernel_order: 1, ..know.clone() };
    assert_eq!(crit_extension(5, &trivial).qualifying, vec![5]);
    assert_eq!(crit_extension(7, &ExtensionKnowledge { kernel_order: 10, ..know.clone() }).qualifying, vec![7]);

    let g = &Perm::parse("(1,2,3,4,5)").unwrap() * &Perm::parse("(6,7,8)").unwrap();
    let k = m.class_of(&g).unwrap();
    let x = Rack::class_rack(&m, k).unwrap();
    assert!(type_d_search(&x, Strategy::Exhaustive, 0, SearchBudget::default()).unwrap().witness().is_some());
    let opts = ClassifyOptions { extensions: vec![know], ..Default::default() };
    let r = classify_group("C3xS5", &m, &opts).unwrap();
    assert_eq!(r.verdict(&label_of(&m, k)).unwrap().outcome, Outcome::CollapsesTypeD);
    let _ = SearchOutcome::NotTypeD { pairs: 0 };
}

use std::time::Instant;

use collapse_core::chartab::{compute_character_table, format_ctab, parse_ctab, s_count_bruteforce};
use collapse_core::cyclo::Cyclotomic;
use collapse_core::permgrp::{parse_group, PermGroup, Reality};
use num_bigint::BigUint;

fn data(name: &str) -> String {
    let path = format!("{}/../../data/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

fn group(name: &str) -> PermGroup {
    parse_group(&data(&format!("{name}.grp"))).unwrap()
}

#[test]
fn external_tables_roundtrip_bit_exact() {
    for name in ["J2", "M11", "M12", "Co1", "T", "B"] {
        let text = data(&format!("{name}.ctab"));
        let t = parse_ctab(&text).unwrap();
        assert_eq!(format_ctab(&t), text, "{name}");
    }
}

#[test]
fn j2_reference_data() {
    let t = parse_ctab(&data("J2.ctab")).unwrap();
    assert_eq!(t.nclasses(), 21);
    assert_eq!(t.order, BigUint::from(604800u32));
    assert_eq!(t.s_count_by_label("2A", "3B", "3B").unwrap(), BigUint::from(18u32));
    assert_eq!(t.reality(t.class_index("2A").unwrap()).unwrap(), Reality::Real);
    assert_eq!(t.reality(t.class_index("3A").unwrap()).unwrap(), Reality::Real);
}

#[test]
fn s3_by_dixon() {
    let g = group("S3");
    let t = compute_character_table(&g, "S3").unwrap();
    let degrees: Vec<u64> = (0..3).map(|i| t.degree(i)).collect();
    assert_eq!(degrees, vec![1, 1, 2]);
    let two = (0..3).find(|&i| t.degree(i) == 2).unwrap();
    let tr = t.class_index("2A").unwrap();
    assert!(t.irreducibles[two][tr].is_zero());
    let c3 = t.class_index("3A").unwrap();
    assert_eq!(t.s_count(tr, tr, c3).unwrap(), BigUint::from(3u32));
    assert_eq!(s_count_bruteforce(&g, tr, tr, c3).unwrap(), BigUint::from(3u32));
}

#[test]
fn a4_linear_characters_on_three_cycles() {
    let g = group("A4");
    let t = compute_character_table(&g, "A4").unwrap();
    let mut degrees: Vec<u64> = (0..4).map(|i| t.degree(i)).collect();
    degrees.sort();
    assert_eq!(degrees, vec![1, 1, 1, 3]);
    let w = Cyclotomic::e(3);
    let cube_roots = [Cyclotomic::one(), w.clone(), &w * &w];
    let three: Vec<usize> = (0..4).filter(|&k| t.orders[k] == 3).collect();
    for i in (0..4).filter(|&i| t.degree(i) == 1) {
        for &k in &three {
            assert!(cube_roots.contains(&t.irreducibles[i][k]));
        }
    }
    let nontrivial_values: Vec<&Cyclotomic> =
        (1..4).filter(|&i| t.degree(i) == 1).map(|i| &t.irreducibles[i][three[0]]).collect();
    assert_eq!(nontrivial_values.len(), 2);
    assert!(nontrivial_values.iter().all(|v| !v.is_rational()));
}

#[test]
fn c2_table() {
    let t = compute_character_table(&group("C2"), "C2").unwrap();
    assert_eq!(t.irreducibles, vec![vec![Cyclotomic::one(), Cyclotomic::one()], vec![Cyclotomic::one(), Cyclotomic::from_int(-1)]]);
}

#[test]
fn identity_class_coefficient() {
    for name in ["S3", "A4"] {
        let g = group(name);
        let t = compute_character_table(&g, name).unwrap();
        for j in 0..t.nclasses() {
            assert_eq!(t.s_count(0, j, j).unwrap(), BigUint::from(1u32));
            assert_eq!(s_count_bruteforce(&g, 0, j, j).unwrap(), BigUint::from(1u32));
        }
    }
}

#[test]
fn involution_squares_to_identity() {
    let g = group("S4");
    let t = compute_character_table(&g, "S4").unwrap();
    for (k, &o) in t.orders.iter().enumerate() {
        if o == 2 {
            let size = BigUint::from(g.conjugacy_classes().unwrap()[k].size);
            assert_eq!(s_count_bruteforce(&g, k, k, 0).unwrap(), size);
            assert_eq!(t.s_count(k, k, 0).unwrap(), size);
        }
    }
}

#[test]
fn abelian_involutions_never_give_odd_order() {
    let g = PermGroup::new(vec!["(1,2)".parse().unwrap(), "(3,4,5)".parse().unwrap()]);
    let classes = g.conjugacy_classes().unwrap();
    let inv = classes.iter().position(|c| c.order == 2).unwrap();
    for (k, c) in classes.iter().enumerate() {
        if c.order % 2 == 1 && c.order > 1 {
            assert_eq!(s_count_bruteforce(&g, inv, inv, k).unwrap(), BigUint::from(0u32));
        }
    }
}

#[test]
fn big_tables_are_fast() {
    let start = Instant::now();
    let t = parse_ctab(&data("B.ctab")).unwrap();
    assert_eq!(t.s_count_by_label("2C", "2C", "6C").unwrap(), BigUint::from(82752u32));
    assert!(start.elapsed().as_secs_f64() < 5.0);
}

#[test]
fn frozen_small_tables() {
    for name in ["C2", "S3", "A4", "D8", "Q8", "S4", "A5", "S5", "F21"] {
        let t = compute_character_table(&group(name), name).unwrap();
        t.validate().unwrap();
        t.check_columns().unwrap();
        assert_eq!(format_ctab(&t), data(&format!("{name}.ctab")), "{name}");
    }
}

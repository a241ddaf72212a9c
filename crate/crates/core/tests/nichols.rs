use collapse_core::cyclo::Cyclotomic;
use collapse_core::nichols::{
    hilbert_prefix, symmetrizer, symmetrizer_factorized, BraidedVectorSpace, Cocycle, ReducedWords, DEFAULT_TENSOR_LIMIT,
};
use collapse_core::permgrp::parse_group;
use collapse_core::rack::Rack;
use collapse_core::Error;

fn transpositions() -> Rack {
    let path = format!("{}/../../data/S3.grp", env!("CARGO_MANIFEST_DIR"));
    let g = parse_group(&std::fs::read_to_string(path).unwrap()).unwrap();
    Rack::class_rack(&g, g.class_by_label("2A").unwrap()).unwrap()
}

fn fk3() -> BraidedVectorSpace {
    let x = transpositions();
    BraidedVectorSpace::from_cocycle(&x, &Cocycle::constant(3, Cyclotomic::from_int(-1))).unwrap()
}

#[test]
fn fomin_kirillov_three() {
    let h = hilbert_prefix(&fk3(), 5, DEFAULT_TENSOR_LIMIT);
    assert_eq!(h.dims, vec![1, 3, 4, 3, 1, 0]);
    assert_eq!(h.total(), Some(12));
    assert_eq!(h.to_string(), "1,3,4,3,1,0 total 12");
}

#[test]
fn trivial_cocycle_does_not_terminate() {
    let x = transpositions();
    let v = BraidedVectorSpace::from_cocycle(&x, &Cocycle::constant(3, Cyclotomic::one())).unwrap();
    let h = hilbert_prefix(&v, 4, DEFAULT_TENSOR_LIMIT);
    assert!(!h.terminated);
    assert_eq!(h.dims[..3], [1, 3, 9]);
}

#[test]
fn symmetrizer_constructions_agree() {
    let v = fk3();
    for n in 2..=4 {
        let a = symmetrizer(&v, n, ReducedWords::Leftmost, DEFAULT_TENSOR_LIMIT).unwrap();
        let b = symmetrizer(&v, n, ReducedWords::Rightmost, DEFAULT_TENSOR_LIMIT).unwrap();
        let c = symmetrizer_factorized(&v, n, DEFAULT_TENSOR_LIMIT).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
    }
    let q = Cyclotomic::e(3);
    let d = BraidedVectorSpace::diagonal(&[vec![q.clone(), Cyclotomic::from_int(-1)], vec![Cyclotomic::one(), q]]).unwrap();
    let a = symmetrizer(&d, 4, ReducedWords::Leftmost, DEFAULT_TENSOR_LIMIT).unwrap();
    assert_eq!(a, symmetrizer(&d, 4, ReducedWords::Rightmost, DEFAULT_TENSOR_LIMIT).unwrap());
    assert_eq!(a, symmetrizer_factorized(&d, 4, DEFAULT_TENSOR_LIMIT).unwrap());
}

#[test]
fn rank_two_diagonal_types() {
    let m = Cyclotomic::from_int(-1);
    let one = Cyclotomic::one();
    let a1a1 = BraidedVectorSpace::diagonal(&[vec![m.clone(), one.clone()], vec![one.clone(), m.clone()]]).unwrap();
    assert_eq!(hilbert_prefix(&a1a1, 4, DEFAULT_TENSOR_LIMIT).to_string(), "1,2,1,0 total 4");
    let a2 = BraidedVectorSpace::diagonal(&[vec![m.clone(), m.clone()], vec![one, m]]).unwrap();
    assert_eq!(hilbert_prefix(&a2, 5, DEFAULT_TENSOR_LIMIT).total(), Some(8));
}

#[test]
fn failures_are_reported() {
    let x = transpositions();
    let mut q = vec![vec![Cyclotomic::from_int(-1); 3]; 3];
    q[0][1] = Cyclotomic::one();
    assert!(matches!(BraidedVectorSpace::from_cocycle(&x, &Cocycle::Scalar(q)), Err(Error::Cocycle { .. })));
    let swap_scaled = vec![vec![(1, Cyclotomic::one())], vec![(2, Cyclotomic::one())], vec![(1, Cyclotomic::one())], vec![(3, Cyclotomic::from_int(2))]];
    assert!(BraidedVectorSpace::from_columns(2, swap_scaled).is_err());
    let h = hilbert_prefix(&fk3(), 12, 100);
    assert!(h.budget_exceeded && !h.terminated);
    assert_eq!(h.dims, vec![1, 3, 4, 3, 1]);
    let h = hilbert_prefix(&BraidedVectorSpace::from_cocycle(&x, &Cocycle::constant(3, Cyclotomic::one())).unwrap(), 12, 1000);
    assert!(h.budget_exceeded && !h.terminated && h.dims.len() == 7);
}

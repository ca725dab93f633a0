use algcomm::format::{family_from_str, family_to_string, parse_polynomial, tree_from_str, tree_to_string, FormatError};
use algcomm::zoo::{self, FamilyMode};
use algcomm::{ComplexRational, ProtocolTree, VarSpace};

#[test]
fn syntax_errors_carry_position() {
    let err = tree_from_str::<algcomm::Rational>("{\n  \"field\": \"real\",\n  ]").unwrap_err();
    assert!(matches!(err, FormatError::Json { line: 3, .. }), "{err}");
}

#[test]
fn field_errors_carry_path() {
    let text = r#"{"field":"real","n_x":1,"n_y":1,"root":0,"nodes":[
        {"id":0,"party":"X","message":[[1,1,[1,0]]],"tests":[[[1,1,[1]]]],
         "branches":[{"signs":[">","<"],"child":"accept"}]}]}"#;
    match tree_from_str::<algcomm::Rational>(text).unwrap_err() {
        FormatError::Field { path, .. } => assert_eq!(path, "nodes[0].branches[0]"),
        other => panic!("{other}"),
    }
}

#[test]
fn field_kind_mismatch() {
    let t = zoo::build_emptiness_det::<ComplexRational>(1).unwrap();
    let text = tree_to_string(&t);
    assert!(matches!(tree_from_str::<algcomm::Rational>(&text), Err(FormatError::FieldKind { .. })));
    assert_eq!(tree_from_str::<ComplexRational>(&text).unwrap(), t);
}

#[test]
fn round_trips() {
    let trees: Vec<ProtocolTree> = vec![
        zoo::build_orthant_det(2, 3).unwrap(),
        zoo::build_orthant_closure_det(2, 2).unwrap(),
        zoo::build_inner_product_det(3).unwrap(),
        zoo::build_knapsack_det(2, 8).unwrap(),
    ];
    for t in trees {
        assert_eq!(tree_from_str::<algcomm::Rational>(&tree_to_string(&t)).unwrap(), t);
    }
    let pp = zoo::build_orthant_prob(1, 2, FamilyMode::Sampled { members: 7, seed: 3 }).unwrap();
    assert_eq!(family_from_str::<algcomm::Rational>(&family_to_string(&pp)).unwrap(), pp);
}

#[test]
fn expression_parser() {
    let s = VarSpace::xy(2, 2);
    let p = parse_polynomial("X1*Y1 + 2*X2^2*(Y2 - 1/3)", s).unwrap();
    let x: Vec<_> = [1, 2, 3, 4].iter().map(|&v| algcomm::scalar::integer(v)).collect();
    // X1 Y1 + 2 X2^2 (Y2 - 1/3) at (1, 2, 3, 4)
    assert_eq!(p.evaluate(&x).unwrap(), algcomm::scalar::rational(97, 3));
    assert!(parse_polynomial("X3", s).is_err());
    assert!(parse_polynomial("X1 +", s).is_err());
}

mod common;

use algcomm::infinitesimal::{change_frame, least_term, sign_at};
use algcomm::poly::Pairing;
use algcomm::scalar::{complex, integer};
use algcomm::{ComplexRational, Frame, Polynomial, SignPoint, TermOrder, VarSpace};
use common::*;
use num_complex::Complex;
use proptest::prelude::*;

fn xy22() -> VarSpace {
    VarSpace::xy(2, 2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ring_laws(a in arb_poly(xy22(), 2, 4), b in arb_poly(xy22(), 2, 4), c in arb_poly(xy22(), 2, 4)) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &Polynomial::one(xy22()), a.clone());
    }

    #[test]
    fn product_rule(a in arb_poly(xy22(), 3, 5), b in arb_poly(xy22(), 3, 5), v in 0usize..4) {
        let lhs = (&a * &b).derivative(v).unwrap();
        let rhs = &(&a.derivative(v).unwrap() * &b) + &(&a * &b.derivative(v).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn compose_commutes_with_evaluate(
        p in arb_poly(VarSpace::formal(3), 2, 5),
        args in prop::collection::vec(arb_poly(xy22(), 2, 3), 3),
        x in arb_point(4),
    ) {
        let composed = p.compose(&args).unwrap();
        let inner: Vec<_> = args.iter().map(|a| a.evaluate(&x).unwrap()).collect();
        prop_assert_eq!(composed.evaluate(&x).unwrap(), p.evaluate(&inner).unwrap());
    }

    #[test]
    fn division_is_sound(f in arb_poly(xy22(), 3, 6), d in arb_nonzero_poly(xy22(), 2, 3)) {
        let order = TermOrder::default_for(4);
        let (q, r) = f.divide_exact(&d, &order).unwrap();
        prop_assert_eq!(&(&q * &d) + &r, f.clone());
        let (lead, _) = d.leading_term(&order).unwrap();
        prop_assert!(r.terms().all(|(m, _)| !lead.divides(m)));
        let (q2, r2) = (&f * &d).divide_exact(&d, &order).unwrap();
        prop_assert_eq!(q2, f);
        prop_assert!(r2.is_zero());
    }

    #[test]
    fn re_im_split_is_exact(
        terms in prop::collection::vec((prop::collection::vec(0u32..=2, 2), -4i64..=4, -4i64..=4), 0..5),
        w in prop::collection::vec((-5i64..=5, -5i64..=5), 2),
    ) {
        let s = VarSpace::xy(1, 1);
        let g: Polynomial<ComplexRational> =
            Polynomial::from_terms(s, terms.into_iter().map(|(e, a, b)| (e, complex(integer(a), integer(b))))).unwrap();
        let pairing = Pairing::blockwise(s);
        let (re, im) = g.re_im_split(&pairing).unwrap();
        let wc: Vec<ComplexRational> = w.iter().map(|&(a, b)| complex(integer(a), integer(b))).collect();
        // blockwise layout: (re x, im x, re y, im y)
        let real = vec![integer(w[0].0), integer(w[0].1), integer(w[1].0), integer(w[1].1)];
        let value = g.evaluate(&wc).unwrap();
        prop_assert_eq!(Complex::new(re.evaluate(&real).unwrap(), im.evaluate(&real).unwrap()), value);
    }

    #[test]
    fn frame_round_trip(g in arb_poly(xy22(), 3, 6)) {
        let z = change_frame(&g, Frame::XZ).unwrap();
        prop_assert_eq!(change_frame(&z, Frame::XY).unwrap(), g);
    }

    #[test]
    fn protocol_runs_are_deterministic(x in arb_point(4)) {
        let t = algcomm::zoo::build_polyhedron_det(2).unwrap();
        let a = t.run_rational(&x).unwrap();
        let b = t.run_rational(&x).unwrap();
        prop_assert_eq!(a, b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn least_term_is_multiplicative(a in arb_nonzero_poly(xy22(), 3, 5), b in arb_nonzero_poly(xy22(), 3, 5)) {
        let order = TermOrder::default_for(4);
        let la = least_term(&a, &order).unwrap();
        let lb = least_term(&b, &order).unwrap();
        prop_assert_eq!(least_term(&(&a * &b), &order).unwrap(), la.mul(&lb));
    }

    #[test]
    fn sign_is_multiplicative(
        a in arb_poly(xy22(), 3, 4),
        b in arb_poly(xy22(), 3, 4),
        signs in prop::collection::vec(-1i8..=1, 4),
    ) {
        let order = TermOrder::default_for(4);
        let p = SignPoint::new(signs, Frame::XY).unwrap();
        let sa = sign_at(&a, &p, &order).unwrap();
        let sb = sign_at(&b, &p, &order).unwrap();
        prop_assert_eq!(sign_at(&(&a * &b), &p, &order).unwrap(), sa.mul(sb));
    }

    #[test]
    fn sign_matches_numeric_realization(
        g in arb_poly(VarSpace::xy(2, 1), 3, 5),
        mask in 0u32..8,
        order_choice in 0usize..2,
    ) {
        let order = if order_choice == 0 { TermOrder::default_for(3) } else { TermOrder::new(vec![0, 2, 1]).unwrap() };
        let signs: Vec<i8> = (0..3).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect();
        let p = SignPoint::new(signs.clone(), Frame::XY).unwrap();
        prop_assert_eq!(sign_at(&g, &p, &order).unwrap(), numeric_sign(&g, &signs, &order));
    }

    #[test]
    fn infinitesimal_run_matches_realization(mask in 0u32..16, tree_choice in 0usize..3) {
        // the realized point is a rational input; zoo protocols at a
        // zero-free sign pattern must take identical branches
        let tree = match tree_choice {
            0 => algcomm::zoo::build_orthant_det(2, 2).unwrap(),
            1 => algcomm::zoo::build_polyhedron_det(2).unwrap(),
            _ => algcomm::zoo::build_inner_product_det(2).unwrap(),
        };
        let order = TermOrder::default_for(4);
        let signs: Vec<i8> = (0..4).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect();
        let p = SignPoint::new(signs.clone(), Frame::XY).unwrap();
        let inf = tree.run_infinitesimal(&p, &order).unwrap();
        let t = inf.composed_tests().unwrap();
        for (k, test) in t.iter().enumerate() {
            let flat: Vec<_> = inf.signs.iter().flatten().collect();
            prop_assert_eq!(*flat[k], numeric_sign(test, &signs, &order));
        }
    }
}

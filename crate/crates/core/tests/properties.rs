//! Property tests: the printer/parser round trip on arbitrary trees, jet
//! exactness on random quartic polynomials, and estimate monotonicity.

use bbounds_core::expr::{self, BinaryOp, ExprNode, UnaryOp};
use bbounds_core::jet::eval_jet;
use proptest::prelude::*;

fn leaf() -> impl Strategy<Value = ExprNode> {
    prop_oneof![
        Just(ExprNode::Variable),
        prop_oneof![
            Just(0.0),
            Just(1.0),
            Just(0.5),
            Just(core::f64::consts::PI),
            0.0..1000.0f64,
            (0.0..1.0f64).prop_map(|v| v * 1e-6),
        ]
        .prop_map(ExprNode::Constant),
    ]
}

fn tree() -> impl Strategy<Value = ExprNode> {
    leaf().prop_recursive(5, 64, 4, |inner| {
        prop_oneof![
            (
                prop_oneof![
                    Just(UnaryOp::Neg),
                    Just(UnaryOp::Exp),
                    Just(UnaryOp::Log),
                    Just(UnaryOp::Sin),
                    Just(UnaryOp::Cos),
                    Just(UnaryOp::Tan),
                    Just(UnaryOp::Atan),
                    Just(UnaryOp::Sqrt),
                ],
                inner.clone()
            )
                .prop_map(|(op, a)| ExprNode::Unary(op, Box::new(a))),
            (
                prop_oneof![
                    Just(BinaryOp::Add),
                    Just(BinaryOp::Sub),
                    Just(BinaryOp::Mul),
                    Just(BinaryOp::Div),
                    Just(BinaryOp::Pow),
                ],
                inner.clone(),
                inner
            )
                .prop_map(|(op, a, b)| ExprNode::Binary(op, Box::new(a), Box::new(b))),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig {
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    /// The canonical printer emits text that parses back to a structurally
    /// identical tree (constants produced by the parser are non-negative,
    /// which the generator respects).
    #[test]
    fn render_parse_round_trip(t in tree()) {
        let rendered = t.render();
        let back = expr::parse(&rendered)
            .unwrap_or_else(|e| panic!("unparsable render {rendered:?}: {e}"));
        prop_assert_eq!(back, t);
    }

    /// Jet derivatives of a random quartic match the analytic formulas
    /// d^j/dx^j sum c_k x^k = sum c_k k!/(k-j)! x^(k-j).
    #[test]
    fn quartic_jets_are_exact(
        coeffs in proptest::array::uniform5(-2.0..2.0f64),
        x in 0.0..=1.0f64,
    ) {
        let mut body = ExprNode::Constant(coeffs[0]);
        for (k, &c) in coeffs.iter().enumerate().skip(1) {
            let term = ExprNode::Binary(
                BinaryOp::Mul,
                Box::new(ExprNode::Constant(c)),
                Box::new(ExprNode::Binary(
                    BinaryOp::Pow,
                    Box::new(ExprNode::Variable),
                    Box::new(ExprNode::Constant(k as f64)),
                )),
            );
            body = ExprNode::Binary(BinaryOp::Add, Box::new(body), Box::new(term));
        }
        let j = eval_jet(&body, x, 4).unwrap();
        for ord in 0..=4usize {
            let mut expected = 0.0;
            for (k, &c) in coeffs.iter().enumerate() {
                if k >= ord {
                    let mut fall = 1.0;
                    for i in 0..ord {
                        fall *= (k - i) as f64;
                    }
                    expected += c * fall * x.powi((k - ord) as i32);
                }
            }
            prop_assert!(
                (j.deriv(ord) - expected).abs() <= 1e-10 * (1.0 + expected.abs()),
                "order {}: {} vs {}", ord, j.deriv(ord), expected
            );
        }
    }

    /// Where a random tree evaluates at all, the scalar path and the jet
    /// value agree bit for bit.
    #[test]
    fn scalar_and_jet_values_agree(t in tree(), x in 0.0..=1.0f64) {
        let scalar = bbounds_core::jet::eval_value(&t, x);
        let jet = eval_jet(&t, x, 0);
        match (scalar, jet) {
            (Ok(a), Ok(b)) => prop_assert_eq!(a, b.value()),
            (Err(_), Err(_)) => {}
            (a, b) => prop_assert!(false, "paths disagree: {:?} vs {:?}", a, b),
        }
    }
}

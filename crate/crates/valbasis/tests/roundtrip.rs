use proptest::prelude::*;
use valbasis::{parse_curve_file, render_curve_file, CurveFile, IdealGenerator};
use valbasis_core::{Polynomial, Rational, TruncatedSeries, Value, ValueVector};

fn rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=6)
        .prop_filter("nonzero", |(n, _)| *n != 0)
        .prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

/// A branch parameter of positive order.
fn parameter() -> impl Strategy<Value = TruncatedSeries> {
    (prop::collection::btree_map(1i64..12, rational(), 1..4), prop::option::of(12i64..20))
        .prop_map(|(terms, precision)| TruncatedSeries::from_terms(terms, precision))
}

fn laurent() -> impl Strategy<Value = TruncatedSeries> {
    prop::collection::btree_map(-3i64..6, rational(), 0..4).prop_map(|terms| TruncatedSeries::from_terms(terms, None))
}

fn polynomial() -> impl Strategy<Value = Polynomial> {
    prop::collection::btree_map(prop::collection::vec(0u32..4, 2), rational(), 1..4)
        .prop_map(|terms| Polynomial::from_terms(2, terms))
}

fn curve_file() -> impl Strategy<Value = CurveFile> {
    (1usize..=3).prop_flat_map(|r| {
        (
            prop::collection::vec(prop::collection::vec(parameter(), 2), r),
            prop::collection::vec(polynomial(), 0..3),
            prop::collection::vec(laurent(), r),
            prop::option::of(10i64..50),
            prop::option::of(prop::collection::vec(prop_oneof![(0i64..40).prop_map(Value::Finite), Just(Value::Infinite)], r)),
        )
            .prop_map(move |(branches, gens, ideal_series, precision, rho)| CurveFile {
                variables: vec!["x".into(), "y".into()],
                branches,
                equations: Vec::new(),
                generators: gens.iter().enumerate().map(|(i, p)| (format!("g{}", i + 1), p.clone())).collect(),
                ideal: vec![
                    ("h".into(), IdealGenerator::Series(ideal_series)),
                    ("k".into(), IdealGenerator::Polynomial(Polynomial::variable(2, 0))),
                ],
                precision,
                rho: rho.map(ValueVector::new),
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn render_then_parse_is_the_identity(file in curve_file()) {
        let text = render_curve_file(&file);
        match parse_curve_file(&text) {
            Ok(back) => prop_assert_eq!(back, file, "{}", text),
            // Random branches may coincide; that must be a semantic error.
            Err(e) => prop_assert_eq!(e.exit_code(), 3, "{}\n{}", e, text),
        }
    }
}

#[test]
fn sample_curves_survive_a_round_trip() {
    let dir = std::path::PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../curves");
    let mut seen = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let file = parse_curve_file(&std::fs::read_to_string(&path).unwrap()).unwrap();
        let text = render_curve_file(&file);
        assert_eq!(parse_curve_file(&text).unwrap(), file, "{}", path.display());
        seen += 1;
    }
    assert!(seen >= 5);
}

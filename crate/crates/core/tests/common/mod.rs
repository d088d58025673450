#![allow(dead_code)]

pub mod oracle;

use std::collections::BTreeSet;

use valbasis_core::stdbasis::{BasisRole, BasisSet};
use valbasis_core::{CurveModel, Cut, Polynomial, Rational, RingElement, TruncatedSeries, ValueVector};

pub fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

pub fn poly(n: usize, terms: &[(i64, &[u32])]) -> Polynomial {
    Polynomial::from_integer_terms(n, terms)
}

pub fn series(terms: &[(i64, i64)]) -> TruncatedSeries {
    TruncatedSeries::from_integers(terms)
}

pub fn q(a: i64) -> Rational {
    Rational::from_integer(a.into())
}

/// Two branches in 3-space with the named generators x, y, z, f1, f2, g1..g4.
pub fn space_curve() -> CurveModel {
    let f1 = poly(3, &[(3, &[0, 0, 2]), (-4, &[2, 0, 1]), (1, &[1, 2, 0]), (-3, &[2, 1, 0]), (-4, &[4, 0, 0])]);
    let f2 = poly(
        3,
        &[
            (24, &[0, 2, 1]),
            (-18, &[1, 1, 1]),
            (-224, &[3, 0, 1]),
            (9, &[0, 3, 0]),
            (32, &[2, 2, 0]),
            (-96, &[3, 1, 0]),
            (-128, &[5, 0, 0]),
            (9, &[4, 0, 0]),
        ],
    );
    let g1 = poly(
        3,
        &[(1, &[0, 1, 2]), (1, &[1, 3, 0]), (-2, &[2, 1, 1]), (-2, &[2, 2, 0]), (1, &[3, 0, 1]), (-1, &[4, 1, 0])],
    );
    let g2 = poly(3, &[(2, &[1, 0, 2]), (-1, &[0, 2, 1]), (1, &[3, 0, 1]), (-1, &[3, 1, 0])]);
    let g3 = poly(3, &[(1, &[0, 0, 3]), (-1, &[1, 3, 0])]);
    let g4 = poly(
        3,
        &[
            (2, &[0, 3, 0]),
            (1, &[1, 0, 2]),
            (-3, &[1, 1, 1]),
            (1, &[2, 2, 0]),
            (-2, &[3, 0, 1]),
            (-4, &[3, 1, 0]),
            (1, &[4, 0, 0]),
            (-1, &[5, 0, 0]),
        ],
    );
    CurveModel::new(
        names(&["x", "y", "z"]),
        vec![
            vec![series(&[(6, 1)]), series(&[(8, 1), (9, 2)]), series(&[(10, 1), (11, 1)])],
            vec![series(&[(6, 1)]), series(&[(8, 1), (9, 1)]), series(&[(10, 1), (11, 1)])],
        ],
    )
    .unwrap()
    .with_generators(vec![
        ("f1".into(), f1),
        ("f2".into(), f2),
        ("g1".into(), g1),
        ("g2".into(), g2),
        ("g3".into(), g3),
        ("g4".into(), g4),
    ])
    .unwrap()
}

/// Three lines and curves through the origin: Y, Y - X^n, Y - X^m - a X^{m+1}.
pub fn plane_curve(n: u32, m: u32, a: i64) -> CurveModel {
    let f1 = poly(2, &[(1, &[0, 1])]);
    let f2 = poly(2, &[(1, &[0, 1]), (-1, &[n, 0])]);
    let f3 = poly(2, &[(1, &[0, 1]), (-1, &[m, 0]), (-a, &[m + 1, 0])]);
    CurveModel::new(
        names(&["x", "y"]),
        vec![
            vec![series(&[(1, 1)]), TruncatedSeries::zero()],
            vec![series(&[(1, 1)]), series(&[(n as i64, 1)])],
            vec![series(&[(1, 1)]), series(&[(m as i64, 1), (m as i64 + 1, a)])],
        ],
    )
    .unwrap()
    .with_equations(vec![f1, f2, f3])
    .unwrap()
}

pub fn vv(s: &str) -> ValueVector {
    s.parse().unwrap()
}

pub fn vset(list: &[&str]) -> BTreeSet<ValueVector> {
    list.iter().map(|s| vv(s)).collect()
}

/// The named generator `name` of `curve`.
pub fn named(curve: &CurveModel, name: &str) -> Polynomial {
    curve.generators().iter().find(|(n, _)| n == name).unwrap().1.clone()
}

/// A basis of evaluated polynomials.
pub fn basis_of(curve: &CurveModel, role: BasisRole, elems: &[(&str, Polynomial)], cut: &Cut) -> BasisSet {
    let mut b = BasisSet::new(role);
    for (name, p) in elems {
        b.push(name.to_string(), curve.evaluate_cut(p, cut, Some(name)).unwrap()).unwrap();
    }
    b
}

pub fn var(curve: &CurveModel, i: usize) -> Polynomial {
    Polynomial::variable(curve.nvars(), i)
}

/// The series of `e` divided by its first nonzero leading coefficient.
pub fn normalized(e: &RingElement) -> Vec<TruncatedSeries> {
    let c = e
        .series()
        .iter()
        .find_map(|s| s.leading().map(|(_, c)| c.clone()))
        .expect("nonzero element");
    let inv = Rational::from_integer(1.into()) / c;
    e.series().iter().map(|s| s.scale(&inv)).collect()
}

pub const SPACE_GENERATORS: [&str; 16] = [
    "(6,6)", "(8,8)", "(10,10)", "(17,17)", "(19,19)", "(25,inf)", "(27,inf)", "(29,inf)", "(32,inf)",
    "(34,inf)", "(36,inf)", "(inf,21)", "(inf,25)", "(inf,32)", "(inf,34)", "(inf,36)",
];

/// The reference minimal value list of the space curve.
pub const SPACE_GENERATORS_REFERENCE: [&str; 16] = [
    "(6,6)", "(8,8)", "(10,10)", "(inf,21)", "(inf,25)", "(inf,32)", "(inf,34)", "(inf,36)", "(25,inf)",
    "(27,inf)", "(29,inf)", "(31,inf)", "(32,inf)", "(34,inf)", "(17,17)", "(19,19)",
];

/// Λ of the three-branch plane curve with `n = 2` and contact order `m`.
pub fn plane_lambda(m: i64) -> BTreeSet<ValueVector> {
    let s = |a: &str| vv(a);
    [
        s("(1,1,1)"),
        s(&format!("(inf,2,{})", m)),
        s("(2,inf,2)"),
        s(&format!("({},2,inf)", m)),
        s(&format!("(inf,inf,{})", m + 1)),
        s("(inf,3,inf)"),
        s(&format!("({},inf,inf)", m + 1)),
    ]
    .into_iter()
    .collect()
}

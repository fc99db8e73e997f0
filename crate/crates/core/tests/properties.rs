use std::collections::HashSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

use nivatk::config::{count_patterns, evaluate, merge_letters, Configuration, ValueDefault, ValueMapping};
use nivatk::decomposition::{difference, integrate};
use nivatk::laurent::{annihilates, apply, line_content, LaurentPolynomial};
use nivatk::lattice::{parallelogram_area, unimodular_complement, IntVector, Lattice};
use nivatk::nivat::{bound_two_directions, line_pattern_census};
use nivatk::parse::{parse_config, parse_polynomial, print_config};
use nivatk::quadratic::QuadraticReal;
use nivatk::tiling::{search_periodic_cotiler, verify_cotiler, ClusterTile, CotilerCheck};
use nivatk::window::{Pattern, Window};

fn iv(x: &[i64]) -> IntVector {
    IntVector(x.to_vec())
}

fn poly() -> impl Strategy<Value = LaurentPolynomial> {
    prop::collection::vec(((-3i64..=3, -3i64..=3), -5i64..=5), 0..5).prop_map(|ts| {
        LaurentPolynomial::from_int_terms(2, ts.into_iter().map(|((a, b), c)| (iv(&[a, b]), c))).unwrap()
    })
}

fn nonzero_poly() -> impl Strategy<Value = LaurentPolynomial> {
    poly().prop_filter("nonzero", |f| !f.is_zero())
}

fn lattice() -> impl Strategy<Value = Lattice> {
    ((-4i64..=4, -4i64..=4), (-4i64..=4, -4i64..=4))
        .prop_filter("independent", |((a, b), (c, d))| a * d - b * c != 0)
        .prop_map(|((a, b), (c, d))| Lattice::new(2, vec![iv(&[a, b]), iv(&[c, d])]).unwrap())
}

fn periodic() -> impl Strategy<Value = Configuration> {
    (1i64..=4, 1i64..=4, 0i64..4, prop::collection::vec(-3i64..=3, 16)).prop_map(|(a, c, b, vals)| {
        let l = Lattice::new(2, vec![iv(&[a, 0]), iv(&[b % a, c])]).unwrap();
        let rs = l.residues().unwrap();
        let values: Vec<(IntVector, i64)> = rs.into_iter().zip(vals).collect();
        Configuration::periodic(l, values).unwrap()
    })
}

fn primitive() -> impl Strategy<Value = IntVector> {
    (-3i64..=3, -3i64..=3)
        .prop_map(|(a, b)| iv(&[a, b]))
        .prop_filter("primitive", |v| !v.is_zero() && v.is_primitive())
}

fn leaf() -> impl Strategy<Value = Configuration> {
    let alpha = prop_oneof![
        prop::sample::select(vec![2u64, 3, 5, 6, 7, 10]).prop_map(|n| QuadraticReal::sqrt(n).unwrap()),
        (-7i64..=7, 1i64..=5).prop_map(|(p, q)| QuadraticReal::rational(p, q).unwrap()),
        (-3i64..=3, 1i64..=3, 1i64..=4).prop_map(|(a, b, q)| QuadraticReal::new(a, b, 5, q).unwrap()),
    ];
    prop_oneof![
        periodic(),
        ((-3i64..=3, -3i64..=3), primitive(), -3i64..=3).prop_map(|((x, y), v, k)| {
            Configuration::coset(iv(&[x, y]), Lattice::span(2, vec![v]).unwrap(), k).unwrap()
        }),
        ((-3i64..=3, -3i64..=3), alpha).prop_map(|((a, b), al)| Configuration::mechanical(iv(&[a, b]), al)),
        prop::collection::vec(((-3i64..=3, -3i64..=3), -4i64..=4), 0..4).prop_map(|vs| {
            Configuration::finite(2, vs.into_iter().map(|((a, b), k)| (iv(&[a, b]), k))).unwrap()
        }),
    ]
}

fn descriptor() -> impl Strategy<Value = Configuration> {
    leaf().prop_recursive(3, 16, 3, |inner| {
        prop_oneof![
            prop::collection::vec((-3i64..=3, inner.clone()), 0..3)
                .prop_map(|ts| Configuration::sum(2, ts).unwrap()),
            (
                prop::collection::vec((-3i64..=3, -3i64..=3), 0..3),
                prop::option::of(-2i64..=2),
                inner.clone()
            )
                .prop_map(|(table, d, c)| {
                    let default = d.map_or(ValueDefault::Identity, ValueDefault::Constant);
                    Configuration::value_map(c, ValueMapping::new(table, default))
                }),
            ((-3i64..=3, -3i64..=3), inner).prop_map(|((a, b), c)| Configuration::shift(c, iv(&[a, b])).unwrap()),
        ]
    })
}

fn sturmian_along(v: &IntVector) -> Configuration {
    // c(u) = s(det(u, v)) with s(t) = floor(t a) - floor((t - 1) a), a = sqrt 2.
    let w = iv(&[v[1], -v[0]]);
    let e = (-3i64..=3)
        .flat_map(|x| (-3i64..=3).map(move |y| iv(&[x, y])))
        .find(|e| w.dot(e) == 1)
        .expect("primitive");
    let a = QuadraticReal::sqrt(2).unwrap();
    let m = Configuration::mechanical(w, a);
    let back = Configuration::shift(m.clone(), -&e).unwrap();
    Configuration::sum(2, vec![(1, m), (-1, back)]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(f in poly(), g in poly(), h in poly()) {
        prop_assert_eq!(&f * &g, &g * &f);
        prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
        prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
        prop_assert_eq!(&f + &(-&f), LaurentPolynomial::zero(2));
        prop_assert_eq!(&f * &LaurentPolynomial::one(2), f.clone());
    }

    #[test]
    fn bbox_is_additive(f in nonzero_poly(), g in nonzero_poly()) {
        prop_assert_eq!((&f * &g).bbox().unwrap(), &f.bbox().unwrap() + &g.bbox().unwrap());
    }

    #[test]
    fn substitution_is_a_ring_morphism(f in poly(), g in poly(), n in 1u64..5) {
        prop_assert_eq!((&f * &g).substitute_power(n), &f.substitute_power(n) * &g.substitute_power(n));
        prop_assert_eq!((&f + &g).substitute_power(n), &f.substitute_power(n) + &g.substitute_power(n));
    }

    #[test]
    fn frobenius(f in poly(), p in prop::sample::select(vec![2u64, 3, 5, 7])) {
        prop_assert_eq!(f.pow_mod(p as u32, p).unwrap(), f.substitute_power(p).reduce_mod(p).unwrap());
    }

    #[test]
    fn exact_division(f in poly(), g in nonzero_poly()) {
        let q = (&f * &g).div_exact(&g);
        prop_assert_eq!(q, Some(f));
    }

    #[test]
    fn polynomial_text_round_trip(f in poly()) {
        prop_assume!(!f.is_zero());
        prop_assert_eq!(parse_polynomial(&f.to_string(), Some(2)).unwrap(), f);
    }

    #[test]
    fn line_content_divides(v in primitive(), k in 1i64..=3, a in 1i64..=4, h in nonzero_poly()) {
        let phi = LaurentPolynomial::from_int_terms(2, [(v.scale(k), 1), (iv(&[0, 0]), -a)]).unwrap();
        let f = &phi * &h;
        let content = line_content(&f, &v).unwrap();
        prop_assert!(content.div_exact(&phi).is_some(),
            "content {} of {} misses {}", content, f, phi);
        prop_assert!(f.div_exact(&content).is_some());
    }

    #[test]
    fn apply_is_local(f in nonzero_poly(), c in periodic(), x in -5i64..5, y in -5i64..5) {
        let w = Window::new_box(iv(&[x, y]), iv(&[x + 3, y + 2])).unwrap();
        let out = apply(&f, &c, &w).unwrap();
        for (u, val) in out.iter() {
            let mut s = BigRational::zero();
            for (e, a) in f.terms() {
                s += a * BigRational::from_integer(BigInt::from(evaluate(&c, &(&u - e)).unwrap()));
            }
            prop_assert_eq!(val, &s);
        }
    }

    #[test]
    fn lattice_periods_annihilate(c in periodic(), i in 0usize..2) {
        let v = c.period_lattice().unwrap().basis()[i].clone();
        let w = Window::rect(&[6, 6]).unwrap();
        prop_assert!(annihilates(&LaurentPolynomial::difference(&v), &c, &w).unwrap().holds());
    }

    #[test]
    fn residues_partition(l in lattice(), p in (-20i64..20, -20i64..20), k in (-3i64..3, -3i64..3)) {
        let rs = l.residues().unwrap();
        prop_assert_eq!(BigInt::from(rs.len()), l.index().unwrap());
        let distinct: HashSet<IntVector> = rs.iter().map(|r| l.reduce(&r.0)).collect();
        prop_assert_eq!(distinct.len(), rs.len());
        for r in &rs {
            prop_assert_eq!(&l.reduce(&r.0), r);
        }
        let p = iv(&[p.0, p.1]);
        let shift = &l.basis()[0].scale(k.0) + &l.basis()[1].scale(k.1);
        let r = l.reduce(&p.0);
        prop_assert!(rs.contains(&r));
        prop_assert!(l.contains(&(&p - &r)));
        prop_assert_eq!(l.reduce(&(&p + &shift).0), r);
    }

    #[test]
    fn complement_is_unimodular(v in primitive()) {
        let w = unimodular_complement(&v).unwrap();
        prop_assert_eq!(parallelogram_area(&v, &w).unwrap(), 1);
    }

    #[test]
    fn complexity_is_monotone(c in periodic(), a in 1u64..3, b in 1u64..3, n in 3u64..8) {
        let small = Window::rect(&[a, b]).unwrap();
        let big = Window::rect(&[a + 1, b]).unwrap();
        let s1 = Window::rect(&[n, n]).unwrap();
        let s2 = Window::rect(&[n + 3, n + 3]).unwrap();
        let c1 = count_patterns(&c, &small, &s1, None).unwrap();
        prop_assert!(c1 <= count_patterns(&c, &big, &s1, None).unwrap());
        prop_assert!(c1 <= count_patterns(&c, &small, &s2, None).unwrap());
        let merged = merge_letters(&c, ValueMapping::new([(1, 0), (-1, 0)], ValueDefault::Identity));
        prop_assert!(count_patterns(&merged, &small, &s1, None).unwrap() <= c1);
        let capped = count_patterns(&c, &big, &s2, Some(1)).unwrap();
        prop_assert!(capped <= 2);
    }

    #[test]
    fn difference_inverts_integrate(vals in prop::collection::vec(-5i64..5, 30), v in primitive()) {
        let shape = Window::rect(&[6, 5]).unwrap();
        let d = Pattern::new(shape, vals.into_iter().map(BigRational::from_integer_i64).collect());
        let o = integrate(&d, &v).unwrap();
        if let Ok(back) = difference(&o, &v) {
            for (u, x) in back.iter() {
                prop_assert_eq!(x, d.get(&u.0).unwrap());
            }
        }
    }

    #[test]
    fn config_text_round_trip(c in descriptor()) {
        let text = print_config(&c);
        let back = parse_config(&text).unwrap();
        prop_assert_eq!(print_config(&back), text.clone());
        prop_assert_eq!(back, c);
    }

    #[test]
    fn two_direction_bound_is_symmetric(v1 in primitive(), v2 in primitive(), m in 0u64..12, n in 0u64..12) {
        let a = bound_two_directions(&v1, &v2, m, n);
        let b = bound_two_directions(&v2, &v1, m, n);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn reflected_tiles_cotile(cells in prop::collection::btree_set((0i64..3, 0i64..2), 1..4)) {
        let d = ClusterTile::new(cells.into_iter().map(|(a, b)| iv(&[a, b])).collect()).unwrap();
        let r = d.reflected();
        let found = search_periodic_cotiler(&d, 8).unwrap();
        let found_r = search_periodic_cotiler(&r, 8).unwrap();
        prop_assert_eq!(found.is_some(), found_r.is_some());
        if let Some(co) = found {
            prop_assert_eq!(verify_cotiler(&d, &co).unwrap(), CotilerCheck::Valid);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn census_disjoint_lines(v in prop::sample::select(vec![iv(&[0, 1]), iv(&[1, 0]), iv(&[1, 1]), iv(&[1, -1]), iv(&[1, 2]), iv(&[2, -1])]),
                             big_m in 1u64..=4, big_n in 1u64..=4) {
        let c = sturmian_along(&v);
        prop_assert!(annihilates(&LaurentPolynomial::difference(&v), &c, &Window::rect(&[20, 20]).unwrap()).unwrap().holds());
        let (m, n) = (v[0].unsigned_abs(), v[1].unsigned_abs());
        let shape = Window::rect(&[big_m + m, big_n + n]).unwrap();
        let census = line_pattern_census(&c, &shape, &v, &Window::rect(&[80, 80]).unwrap()).unwrap();
        let need = (big_m * n + m * big_n + m * n) as usize;
        prop_assert!(census.disjoint_pattern_lines >= need, "{} < {}", census.disjoint_pattern_lines, need);
        prop_assert!(census.lines.iter().all(|(_, k)| *k == 1));
    }

    #[test]
    fn census_transversal_lines(v in prop::sample::select(vec![iv(&[0, 1]), iv(&[1, 1]), iv(&[1, -1]), iv(&[1, 2]), iv(&[2, -1])]),
                                big_m in 1u64..=4, big_n in 1u64..=4) {
        let c = sturmian_along(&v);
        let u = iv(&[1, 0]);
        let s = parallelogram_area(&v, &u).unwrap() as u64;
        let (m, n) = (v[0].unsigned_abs(), v[1].unsigned_abs());
        let shape = Window::rect(&[big_m + m, big_n + n]).unwrap();
        let census = line_pattern_census(&c, &shape, &u, &Window::rect(&[200, 12]).unwrap()).unwrap();
        for (w, k) in &census.lines {
            prop_assert!((*k as u64) * s > big_m * n + m * big_n, "line {} has {} patterns", w, k);
        }
    }
}

trait FromI64 {
    fn from_integer_i64(x: i64) -> Self;
}

impl FromI64 for BigRational {
    fn from_integer_i64(x: i64) -> Self {
        BigRational::from_integer(BigInt::from(x))
    }
}

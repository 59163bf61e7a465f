use kcat::alcove::{Alcove, FaceType};
use kcat::character::{bott_samelson_char, star_bs};
use kcat::hecke::{HeckeElt, PeriodicElt};
use kcat::laurent::LaurentPoly;
use kcat::root_datum::{DatumName, RootDatum};
use proptest::prelude::*;
use std::sync::OnceLock;

fn data() -> &'static Vec<(RootDatum, Vec<Alcove>)> {
    static D: OnceLock<Vec<(RootDatum, Vec<Alcove>)>> = OnceLock::new();
    D.get_or_init(|| {
        DatumName::ALL
            .iter()
            .map(|&n| {
                let d = RootDatum::build(n);
                let ball = d.ball(3);
                (d, ball)
            })
            .collect()
    })
}

fn laurent() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((-3i32..=3, -4i64..=4), 1..3).prop_map(|v| LaurentPoly::from_pairs(&v))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn order_is_a_partial_order(k in 0usize..5, i in 0usize..400, j in 0usize..400, l in 0usize..400) {
        let (d, ball) = &data()[k];
        let (a, b, c) = (&ball[i % ball.len()], &ball[j % ball.len()], &ball[l % ball.len()]);
        prop_assert!(d.leq(a, a));
        if d.leq(a, b) && d.leq(b, a) {
            prop_assert_eq!(a, b);
        }
        if d.leq(a, b) && d.leq(b, c) {
            prop_assert!(d.leq(a, c));
        }
        if d.lt(a, b) {
            prop_assert!(d.length(a) < d.length(b));
        }
    }

    #[test]
    fn walls_are_involutions(k in 0usize..5, i in 0usize..400, s in 0usize..4) {
        let (d, ball) = &data()[k];
        let a = &ball[i % ball.len()];
        let s = FaceType(s % d.faces().len());
        let b = d.right_act(a, s);
        prop_assert_eq!(&d.right_act(&b, s), a);
        prop_assert_eq!((d.length(&b) - d.length(a)).abs(), 1);
        prop_assert_eq!(d.leq(a, &b), d.length(&b) > d.length(a));
    }

    #[test]
    fn periodic_module_law(k in 0usize..5, i in 0usize..400, x in 0usize..400, y in 0usize..400,
                           c1 in laurent(), c2 in laurent(), c3 in laurent()) {
        let (d, ball) = &data()[k];
        let n = ball.len();
        let mut p = PeriodicElt::zero();
        p.add_term(ball[i % n].clone(), &c1);
        let h1 = HeckeElt::basis(ball[x % n].clone()).scale(&c2);
        let h2 = HeckeElt::basis(ball[y % n].clone()).scale(&c3);
        prop_assert_eq!(p.act(d, &h1.mul(d, &h2)), p.act(d, &h1).act(d, &h2));
    }

    #[test]
    fn character_recursion_matches_hecke_action(k in 0usize..5, w in prop::collection::vec(0usize..4, 0..3)) {
        let (d, _) = &data()[k];
        let nf = d.faces().len();
        let word: Vec<FaceType> = w.iter().map(|&s| FaceType(s % nf)).collect();
        let c = bott_samelson_char(d, &vec![0; d.rank], &word, 0).unwrap();
        for s in 0..nf {
            let s = FaceType(s);
            let next = star_bs(d, &c, s);
            prop_assert_eq!(next.ch(d), c.ch(d).act(d, &HeckeElt::bs_generator(d, s)));
            prop_assert!(next.grk.values().all(|g| g.is_nonnegative()));
        }
    }
}

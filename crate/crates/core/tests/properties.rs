use num_bigint::BigInt;
use proptest::prelude::*;

use projective_ei::moebius::{MoebiusMap, ProjPoint};
use projective_ei::pregeometry::{rank, rank_oracle, AffineForm};
use projective_ei::structures::{m_lt, p0, p_m, MPoint};
use projective_ei::suites::{run_suite, Suite, SuiteConfig};
use projective_ei::{rat, Rational};

fn rational() -> impl Strategy<Value = Rational> {
    (-30i64..=30, 1i64..=9).prop_map(|(n, d)| rat(n, d))
}

fn point() -> impl Strategy<Value = ProjPoint> {
    prop_oneof![
        1 => Just(ProjPoint::Infinity),
        7 => rational().prop_map(ProjPoint::Real),
    ]
}

fn moebius() -> impl Strategy<Value = MoebiusMap> {
    (rational(), rational(), rational(), rational())
        .prop_filter_map("singular", |(a, b, c, d)| MoebiusMap::new(a, b, c, d).ok())
}

fn mpoint() -> impl Strategy<Value = MPoint> {
    (-3i64..=3, point()).prop_map(|(l, p)| MPoint::new(BigInt::from(l), p))
}

fn form(generators: usize) -> impl Strategy<Value = AffineForm> {
    (rational(), prop::collection::vec(-2i64..=2, generators)).prop_map(|(c, coeffs)| {
        AffineForm::from_terms(c, coeffs.into_iter().enumerate().map(|(i, k)| (i, rat(k, 1))))
    })
}

proptest! {
    #[test]
    fn moebius_group_laws(f in moebius(), g in moebius(), h in moebius()) {
        prop_assert_eq!(f.compose(&g).compose(&h), f.compose(&g.compose(&h)));
        prop_assert_eq!(f.compose(&f.inverse()), MoebiusMap::identity());
        prop_assert_eq!(f.compose(&MoebiusMap::identity()), f.clone());
    }

    #[test]
    fn moebius_action_compatible(f in moebius(), g in moebius(), z in point()) {
        prop_assert_eq!(f.compose(&g).apply(&z), f.apply(&g.apply(&z)));
        prop_assert_eq!(f.inverse().apply(&f.apply(&z)), z);
    }

    #[test]
    fn p0_is_moebius_invariant(
        g in moebius(),
        x in point(),
        ys in prop::array::uniform4(point()),
    ) {
        let moved = ys.clone().map(|y| g.apply(&y));
        prop_assert_eq!(p0(&x, &ys), p0(&g.apply(&x), &moved));
    }

    #[test]
    fn succ_is_an_order_automorphism(p in mpoint(), q in mpoint()) {
        prop_assert_eq!(m_lt(&p, &q), m_lt(&p.succ(), &q.succ()));
        prop_assert_eq!(p.succ().pred(), p.clone());
        prop_assert!(m_lt(&p, &p.succ()));
    }

    #[test]
    fn succ_preserves_p_m(x in mpoint(), ys in prop::array::uniform4(mpoint())) {
        let shifted = ys.clone().map(|y| y.succ());
        prop_assert_eq!(p_m(&x, &ys), p_m(&x.succ(), &shifted));
    }

    #[test]
    fn rank_matches_oracle(
        tuple in prop::collection::vec(form(4), 0..5),
        context in prop::collection::vec(form(4), 0..3),
    ) {
        prop_assert_eq!(rank(&tuple, &context), rank_oracle(&tuple, &context).unwrap());
    }
}

#[test]
fn reports_are_deterministic() {
    let cfg = SuiteConfig {
        seed: 42,
        samples: 300,
        grid: 6,
        ..SuiteConfig::default()
    };
    for suite in [Suite::Moebius, Suite::Imaginaries, Suite::Pregeometry] {
        assert_eq!(run_suite(suite, &cfg).to_json(), run_suite(suite, &cfg).to_json());
    }
    let other = SuiteConfig { seed: 43, ..cfg.clone() };
    assert_ne!(
        run_suite(Suite::Moebius, &cfg).to_json(),
        run_suite(Suite::Moebius, &other).to_json()
    );
}

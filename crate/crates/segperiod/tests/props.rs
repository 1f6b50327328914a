//! Property tests for the algebraic invariants: linkage relations,
//! point conservation, duality involution and order reversal,
//! normalization idempotence, presentation invariance of verdicts, and
//! the text round trip.

use proptest::prelude::*;

use segperiod::decomp::{normalize, NormalizeStatus, RepForm};
use segperiod::distinction::Classifier;
use segperiod::duality::mw_dual;
use segperiod::exp;
use segperiod::order::{enumerate_below, leq};
use segperiod::rules::RuleTable;
use segperiod::segcore::{
    intersection, linked, precedes, union, Multisegment, Segment,
};
use segperiod::support::{LabelId, Registry};
use segperiod::textio::{format_form, parse_expr};

fn reg() -> Registry {
    Registry::default_registry()
}

fn mu_segment() -> impl Strategy<Value = Segment> {
    (-4i64..5, 1u32..4).prop_map(|(start, len)| {
        Segment::new(LabelId::new("mu"), exp(start, 1), len).unwrap()
    })
}

fn chi_segment() -> impl Strategy<Value = Segment> {
    (-4i64..5, 1u32..4, 0i64..2).prop_map(|(start, len, half)| {
        Segment::new(LabelId::new("chi"), exp(2 * start + half, 1), len).unwrap()
    })
}

fn any_segment() -> impl Strategy<Value = Segment> {
    prop_oneof![
        mu_segment(),
        chi_segment(),
        (-3i64..4).prop_map(|s| Segment::new(LabelId::new("rho2"), exp(s, 1), 1).unwrap()),
    ]
}

fn multisegment(max: usize) -> impl Strategy<Value = Multisegment> {
    prop::collection::vec(any_segment(), 1..=max).prop_map(Multisegment::new)
}

fn mu_multisegment() -> impl Strategy<Value = Multisegment> {
    prop::collection::vec(mu_segment(), 1..=3).prop_map(Multisegment::new)
}

proptest! {
    #[test]
    fn precedes_is_asymmetric(d1 in any_segment(), d2 in any_segment()) {
        let r = reg();
        let ab = precedes(&d1, &d2, &r).unwrap();
        let ba = precedes(&d2, &d1, &r).unwrap();
        prop_assert!(!(ab && ba));
        prop_assert!(!precedes(&d1, &d1, &r).unwrap());
    }

    #[test]
    fn union_intersection_conserve_points(d1 in mu_segment(), d2 in mu_segment()) {
        let r = reg();
        prop_assume!(linked(&d1, &d2, &r).unwrap());
        let mut lhs = d1.points(&r).unwrap();
        lhs.extend(d2.points(&r).unwrap());
        lhs.sort();
        let mut rhs = union(&d1, &d2, &r).unwrap().points(&r).unwrap();
        if let Some(i) = intersection(&d1, &d2, &r).unwrap() {
            rhs.extend(i.points(&r).unwrap());
        }
        rhs.sort();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn containment_is_never_linked(start in -3i64..3, len in 2u32..5, inner in 0u32..4) {
        let r = reg();
        let big = Segment::new(LabelId::new("mu"), exp(start, 1), len).unwrap();
        let off = inner.min(len - 1);
        let small = Segment::new(
            LabelId::new("mu"),
            exp(start + off as i64, 1),
            (len - off).max(1).min(len - off),
        )
        .unwrap();
        prop_assert!(!linked(&big, &small, &r).unwrap());
    }

    #[test]
    fn twist_commutes_with_dual(m in mu_multisegment(), e in -4i64..5) {
        let r = reg();
        let t = exp(e, 2);
        prop_assert_eq!(
            mw_dual(&m.twist(t), &r).unwrap(),
            mw_dual(&m, &r).unwrap().twist(t)
        );
    }

    #[test]
    fn dual_is_involutive(m in multisegment(3)) {
        let r = reg();
        let d = mw_dual(&m, &r).unwrap();
        prop_assert_eq!(mw_dual(&d, &r).unwrap(), m.clone());
        prop_assert_eq!(d.support(&r).unwrap(), m.support(&r).unwrap());
    }

    #[test]
    fn dual_reverses_order_on_multiplicity_free_supports(m in mu_multisegment()) {
        // On supports with repeated points the involution need not
        // reverse the order (the up-set and down-set size multisets can
        // differ), so the reversal is asserted only for multiplicity-free
        // supports.
        let r = reg();
        let support = m.support(&r).unwrap();
        let mut dedup = support.clone();
        dedup.dedup();
        prop_assume!(dedup.len() == support.len());
        for b in enumerate_below(&m, &r).unwrap() {
            let (db, dm) = (mw_dual(&b, &r).unwrap(), mw_dual(&m, &r).unwrap());
            prop_assert!(leq(&dm, &db, &r).unwrap());
        }
    }

    #[test]
    fn downset_members_share_support(m in mu_multisegment()) {
        let r = reg();
        let sup = m.support(&r).unwrap();
        for b in enumerate_below(&m, &r).unwrap() {
            prop_assert_eq!(b.support(&r).unwrap(), sup.clone());
        }
    }

    #[test]
    fn normalize_is_idempotent(m in multisegment(2), n in multisegment(2)) {
        let r = reg();
        let f = RepForm::Product(vec![RepForm::Z(m), RepForm::Z(n)]);
        let (once, s1) = normalize(&f, &r).unwrap();
        let (twice, s2) = normalize(&once, &r).unwrap();
        prop_assert_eq!(&once, &twice);
        prop_assert_eq!(s1, s2);
        prop_assert_eq!(f.weight(&r).unwrap(), once.weight(&r).unwrap());
    }

    #[test]
    fn text_round_trip(m in multisegment(3)) {
        let r = reg();
        for f in [RepForm::Z(m.clone()), RepForm::L(m.clone())] {
            let text = format_form(&f, &r);
            prop_assert_eq!(parse_expr(&text, &r).unwrap(), f);
        }
    }

    #[test]
    fn verdict_ignores_presentation(m in multisegment(2)) {
        let r = reg();
        let table = RuleTable::default_table();
        let c = Classifier::new(&r, &table);
        prop_assume!(m.weight(&r).unwrap() <= 4);
        let z = RepForm::Z(m.clone());
        let l = RepForm::L(mw_dual(&m, &r).unwrap());
        let vz = c.classify(&z).unwrap();
        let vl = c.classify(&l).unwrap();
        prop_assert_eq!(vz.status, vl.status);
    }

    #[test]
    fn verdict_ignores_unlinked_factor_order(a in any_segment(), b in any_segment()) {
        let r = reg();
        let table = RuleTable::default_table();
        let c = Classifier::new(&r, &table);
        prop_assume!(!linked(&a, &b, &r).unwrap());
        let w = a.weight(&r).unwrap() + b.weight(&r).unwrap();
        prop_assume!(w <= 4);
        let ab = RepForm::Product(vec![
            RepForm::Z(Multisegment::singleton(a.clone())),
            RepForm::Z(Multisegment::singleton(b.clone())),
        ]);
        let ba = RepForm::Product(vec![
            RepForm::Z(Multisegment::singleton(b)),
            RepForm::Z(Multisegment::singleton(a)),
        ]);
        prop_assert_eq!(
            c.classify(&ab).unwrap().status,
            c.classify(&ba).unwrap().status
        );
    }

    #[test]
    fn classification_is_twist_equivariant(m in multisegment(2), e in -3i64..4) {
        let r = reg();
        let table = RuleTable::default_table();
        let c = Classifier::new(&r, &table);
        prop_assume!(m.weight(&r).unwrap() <= 4);
        let t = exp(e, 2);
        prop_assert_eq!(
            c.classify(&RepForm::Z(m.clone())).unwrap().status,
            c.classify(&RepForm::Z(m.twist(t))).unwrap().status
        );
    }

    #[test]
    fn normalized_products_classify_like_their_merge(a in any_segment(), b in any_segment()) {
        let r = reg();
        let table = RuleTable::default_table();
        let c = Classifier::new(&r, &table);
        prop_assume!(!linked(&a, &b, &r).unwrap());
        prop_assume!(a.weight(&r).unwrap() + b.weight(&r).unwrap() <= 4);
        let product = RepForm::Product(vec![
            RepForm::Z(Multisegment::singleton(a.clone())),
            RepForm::Z(Multisegment::singleton(b.clone())),
        ]);
        let merged = RepForm::Z(Multisegment::new(vec![a, b]));
        let (n, status) = normalize(&product, &r).unwrap();
        prop_assert_eq!(status, NormalizeStatus::Irreducible);
        prop_assert_eq!(&n, &merged);
        prop_assert_eq!(
            c.classify(&product).unwrap().status,
            c.classify(&merged).unwrap().status
        );
    }
}

//! The bud groupoid played against the formal group law machinery and
//! against itself over rings the unit tests leave alone.

use fglab_core::fgl::{endo, law_from_log, lubin_tate_log, reduce_law_mod_pi, reduce_series_mod_pi};
use fglab_core::local::LocalField;
use fglab_core::moduli::{
    act, enumerate_buds, enumerate_coordchanges, groupoid_report, orbit_and_stabilizer, Bud,
    CoordChange, FiniteRingSpec,
};
use num_bigint::BigInt;

#[test]
fn lubin_tate_bud_stabilizer_is_the_scalar_reduction() {
    // Over Q_5 the law is X + Y through degree 4, so its degree-2 bud is
    // additive. Brute-force stabilizer on one side, reductions of the
    // endomorphisms [1], [2], [3], [4] on the other.
    let field = LocalField::unramified(5, 1, 20).unwrap();
    let cap = 6;
    let lg = lubin_tate_log(&field, cap).unwrap();
    let law = law_from_log(&lg, cap).unwrap();
    let rlaw = reduce_law_mod_pi(&law).unwrap();
    let ring = rlaw.ring().clone();

    let bud = Bud::from_series(rlaw.series(), 2).unwrap();
    assert_eq!(bud.coeffs, vec![0]);
    let os = orbit_and_stabilizer(&ring, &bud).unwrap();

    let mut reductions = Vec::new();
    for a in 1..=4i64 {
        let e = endo(&lg, &field.from_int(&BigInt::from(a))).unwrap();
        let r = reduce_series_mod_pi(&e).unwrap();
        reductions.push(CoordChange::from_series(&r, 2).unwrap());
    }
    // every reduced scalar stabilizes the bud
    for t in &reductions {
        assert!(os.stabilizer.contains(t), "missing {:?}", t.coeffs);
        assert_eq!(act(&ring, t, &bud).unwrap(), bud);
    }
    // and nothing else does
    let mut stab = os.stabilizer.clone();
    stab.sort();
    reductions.sort();
    assert_eq!(stab, reductions);
}

#[test]
fn gf4_degree2_groupoid_is_scaling_by_units() {
    // In characteristic 2 the degree-2 action degenerates to c -> c t0, so
    // the orbits are {0} and the three nonzero values.
    let ring = FiniteRingSpec::Gf { q: 4 }.build().unwrap();
    let report = groupoid_report(&ring, 2).unwrap();
    assert_eq!(report.bud_count, 4);
    assert_eq!(report.group_order, 12);
    assert!(report.all_passed);
    let mut sizes: Vec<(usize, usize)> = report
        .orbits
        .iter()
        .map(|o| (o.size, o.stabilizer_order))
        .collect();
    sizes.sort();
    assert_eq!(sizes, vec![(1, 12), (3, 4)]);

    let json = serde_json::to_string(&report).unwrap();
    let back: fglab_core::moduli::GroupoidReport = serde_json::from_str(&json).unwrap();
    assert_eq!(back, report);
}

#[test]
fn action_is_a_right_action_over_zmod9() {
    let ring = FiniteRingSpec::Zmod { m: 9 }.build().unwrap();
    let buds = enumerate_buds(&ring, 2).unwrap();
    let gammas = enumerate_coordchanges(&ring, 2).unwrap();
    assert_eq!(buds.len(), 9);
    assert_eq!(gammas.len(), 6 * 9);
    for f in buds.iter().step_by(2) {
        for t in gammas.iter().step_by(7) {
            for s in gammas.iter().step_by(11) {
                let two_step = act(&ring, s, &act(&ring, t, f).unwrap()).unwrap();
                let one_step = act(&ring, &t.compose(s, &ring).unwrap(), f).unwrap();
                assert_eq!(two_step, one_step);
            }
        }
    }
}

#[test]
fn degree3_enumeration_respects_associativity_over_z8() {
    let ring = FiniteRingSpec::Zmod { m: 8 }.build().unwrap();
    let buds = enumerate_buds(&ring, 3).unwrap();
    assert!(!buds.is_empty());
    for b in &buds {
        let law = b.to_law(&ring).unwrap();
        let report = law.verify_axioms().unwrap();
        assert!(report.all_pass(), "bud {:?}", b.coeffs);
    }
    // listing is strictly sorted, hence duplicate-free and reproducible
    assert!(buds.windows(2).all(|w| w[0] < w[1]));
}

use proptest::prelude::*;

use super::*;
use crate::exactnum::rat;
use crate::genus::g_tilde;
use crate::qseries::divisor_weighted_series;

fn field(n: u32) -> Arc<CycField> {
    CycField::new(n).unwrap()
}

fn monomial(f: &Arc<CycField>, c: Rational, n: usize, prec: usize) -> QSeries {
    QSeries::monomial(CycNum::from_rational(f, &c), n, prec)
}

#[test]
fn sturm_bounds() {
    assert_eq!(sturm_bound(3, 4), 3);
    assert_eq!(sturm_bound(2, 4), 1);
    assert_eq!(sturm_bound(5, 0), 0);
    assert_eq!(gamma1_index(3), 8);
    assert_eq!(gamma1_index(4), 12);
    assert_eq!(gamma1_index(6), 24);
}

#[test]
fn generators() {
    let f3 = field(3);
    let g = default_generators(&f3, 10).unwrap();
    assert_eq!(g.iter().map(|g| g.weight).collect::<Vec<_>>(), vec![1, 3]);
    let f2 = field(2);
    assert!(g_hat(&f2, 1, 10).unwrap().is_zero());
    assert_eq!(
        default_generators(&field(7), 10).unwrap_err(),
        Error::UnsupportedLevel(7)
    );
}

#[test]
fn basis_dimensions_level_three() {
    let b = build_basis(3, 6, 20).unwrap();
    assert_eq!(b.dims, vec![1, 1, 1, 2, 2, 2, 3]);
    assert!(b.dims.windows(2).all(|w| w[0] <= w[1]));
    assert_eq!(b.of_weight(0).next().unwrap().label, "1");
    let w2: Vec<_> = b.of_weight(2).map(|e| e.label.as_str()).collect();
    assert_eq!(w2, vec!["G1^2"]);
    let w3: Vec<_> = b.of_weight(3).map(|e| e.label.as_str()).collect();
    assert_eq!(w3, vec!["G1^3", "G3"]);
}

// The Eisenstein series of every weight must already lie in the span of the
// generator monomials; this is an independent check of the configuration.
#[test]
fn eisenstein_series_lie_in_span() {
    for n in [2u32, 3, 4] {
        let prec = 30;
        let b = build_basis(n, 6, prec).unwrap();
        let f = field(n);
        for k in 1..=6u32 {
            let gk = g_hat(&f, k, prec).unwrap();
            if gk.is_zero() {
                continue;
            }
            let mut family: Vec<&QSeries> = b.of_weight(k).map(|e| &e.series).collect();
            let before = cyc_rank(&family, prec);
            family.push(&gk);
            assert_eq!(cyc_rank(&family, prec), before, "N={} k={}", n, k);
        }
    }
}

#[test]
fn basis_matches_dimension_table() {
    for (n, maxw) in [(2u32, 8u32), (4, 6)] {
        let b = build_basis(n, maxw, 30).unwrap();
        for k in 0..=maxw {
            assert_eq!(Some(b.dimension(k)), expected_dimension(n, k));
        }
    }
}

#[test]
fn basis_precision_policy() {
    assert_eq!(
        build_basis(3, 6, 8).unwrap_err(),
        Error::PrecisionBelowPolicy { got: 8, required: 9 }
    );
}

#[test]
fn dependent_generators_rejected() {
    let f = field(3);
    let g1 = g_hat(&f, 1, 20).unwrap();
    let gens = vec![
        Generator { weight: 1, series: g1.clone(), label: "a".into() },
        Generator { weight: 1, series: g1.scale_rational(&rat(2, 1)), label: "b".into() },
    ];
    assert!(matches!(
        build_basis_with(&f, &gens, 2, 20, None),
        Err(Error::DimensionDeficit { weight: 1, expected: 2, achieved: 1 })
    ));
}

#[test]
fn equal_series_are_equivalent() {
    let lat = IndeterminacyLattice::standard(3, 2, 20).unwrap();
    let f = g_tilde(lat.field(), 1, 20).unwrap();
    let out = is_equivalent(&f, &f, &lat).unwrap();
    assert!(out.equivalent);
    let cert = out.certificate.unwrap();
    assert!(cert.coefficients.iter().all(CycNum::is_zero));
    assert!(cert.residual.is_zero() && cert.alpha.is_zero() && cert.beta.is_zero());
}

#[test]
fn half_sum_against_half_g_tilde_one() {
    let lat = IndeterminacyLattice::standard(3, 2, 20).unwrap();
    let f = lat.field().clone();
    let sum = divisor_weighted_series(&f, 20, 1, 1).unwrap().scale_rational(&rat(1, 2));
    let half = g_tilde(&f, 1, 20).unwrap().scale_rational(&rat(1, 2));
    // oracle: the difference Σ_n Σ_{d|n} ζ^{-n/d} q^n is integral coefficientwise
    let diff = sum.sub(&half);
    assert!(diff.is_integral_series().unwrap());
    let out = is_equivalent(&sum, &half, &lat).unwrap();
    assert!(out.equivalent);
    assert!(out.certificate.unwrap().replays(&lat, &sum, &half));
}

#[test]
fn nu_squared_congruence() {
    let lat = IndeterminacyLattice::standard(3, 4, 8).unwrap();
    let f = lat.field().clone();
    let g2 = g_tilde(&f, 2, 8).unwrap();
    let a = g2.scale_rational(&rat(1, 12));
    let b = g2.mul(&g2).scale_rational(&rat(1, 2));
    let out = is_equivalent(&a, &b, &lat).unwrap();
    assert!(out.equivalent && out.policy_met);
    let cert = out.certificate.unwrap();
    assert!(cert.replays(&lat, &a, &b));
    let report = relative_integrality_check(&cert.residual, 3).unwrap();
    assert!(report.integral);
}

#[test]
fn isolated_denominator_is_not_absorbed() {
    let lat = IndeterminacyLattice::standard(3, 4, 20).unwrap();
    let f = lat.field().clone();
    let a = monomial(&f, rat(1, 7), 5, 20);
    let out = is_equivalent(&a, &QSeries::zero(&f, 20), &lat).unwrap();
    assert!(!out.equivalent);
    assert!(out.reason.is_some());
}

#[test]
fn eps_part_absorbed_only_by_g_tilde() {
    let lat = IndeterminacyLattice::standard(3, 2, 20).unwrap();
    let f = lat.field().clone();
    let g2 = g_tilde(&f, 2, 20).unwrap();
    let eps = EpsPoly::linear(&f, &rat(0, 1), &rat(-3, 2));
    let a = g2.scale_eps(&eps);
    let out = is_equivalent(&a, &QSeries::zero(&f, 20), &lat).unwrap();
    assert!(out.equivalent);
    assert_eq!(out.certificate.unwrap().beta, CycNum::from_rational(&f, &rat(-3, 2)));

    let stray = monomial(&f, rat(1, 1), 3, 20).scale_eps(&EpsPoly::eps(&f));
    assert!(!is_equivalent(&stray, &QSeries::zero(&f, 20), &lat).unwrap().equivalent);

    let no_g = IndeterminacyLattice::new(&lat.basis, 2, false).unwrap();
    assert!(!is_equivalent(&a, &QSeries::zero(&f, 20), &no_g).unwrap().equivalent);

    let sq = a.scale_eps(&EpsPoly::eps(&f));
    assert_eq!(
        is_equivalent(&sq, &QSeries::zero(&f, 20), &lat).unwrap_err(),
        Error::EpsDegreeTooHigh(2)
    );
}

#[test]
fn precision_policy_is_reported() {
    let lat = IndeterminacyLattice::standard(3, 4, 20).unwrap();
    let f = lat.field().clone();
    let a = QSeries::zero(&f, 6);
    assert_eq!(
        is_equivalent(&a, &a, &lat).unwrap_err(),
        Error::PrecisionBelowPolicy { got: 6, required: 8 }
    );
    let out = is_equivalent_with(&a, &a, &lat, PrecisionPolicy::Permissive).unwrap();
    assert!(out.equivalent && !out.policy_met);
}

#[test]
fn integrality_reports() {
    let f = field(3);
    let ok = monomial(&f, rat(1, 3), 1, 5);
    assert!(relative_integrality_check(&ok, 3).unwrap().integral);
    let bad = monomial(&f, rat(1, 4), 1, 5);
    assert_eq!(
        relative_integrality_check(&bad, 3).unwrap(),
        IntegralityReport { integral: false, first_failure: Some(1) }
    );
}

const PREC: usize = 12;

fn lattice3() -> IndeterminacyLattice {
    IndeterminacyLattice::standard(3, 3, PREC).unwrap()
}

fn small_cyc(f: &Arc<CycField>) -> impl Strategy<Value = CycNum> {
    let f = Arc::clone(f);
    prop::collection::vec((-9i64..=9, 1i64..=6), f.degree())
        .prop_map(move |v| {
            let c: Vec<Rational> = v.into_iter().map(|(a, b)| rat(a, b)).collect();
            CycNum::from_coords(&f, &c).unwrap()
        })
}

fn integral_cyc(f: &Arc<CycField>) -> impl Strategy<Value = CycNum> {
    let f = Arc::clone(f);
    prop::collection::vec((-9i64..=9, 0u32..=2), f.degree()).prop_map(move |v| {
        let c: Vec<Rational> = v
            .into_iter()
            .map(|(a, e)| rat(a, 3i64.pow(e)))
            .collect();
        CycNum::from_coords(&f, &c).unwrap()
    })
}

fn random_series(f: &Arc<CycField>) -> impl Strategy<Value = QSeries> {
    let f2 = Arc::clone(f);
    prop::collection::vec(small_cyc(f), PREC).prop_map(move |c| QSeries::from_cyc(&f2, c))
}

/// A random element of the lattice: free combination plus integral series.
fn lattice_element(lat: &IndeterminacyLattice) -> impl Strategy<Value = QSeries> {
    let f = Arc::clone(lat.field());
    let free: Vec<QSeries> = lat
        .basis
        .entries
        .iter()
        .filter(|e| e.weight == 0 || e.weight == lat.weight)
        .map(|e| e.series.clone())
        .collect();
    let n = free.len();
    let f1 = Arc::clone(&f);
    (
        prop::collection::vec(small_cyc(&f), n),
        prop::collection::vec(integral_cyc(&f), PREC),
    )
        .prop_map(move |(cs, ints)| {
            let mut s = QSeries::from_cyc(&f1, ints);
            for (c, b) in cs.iter().zip(&free) {
                s = s.add(&b.scale(c));
            }
            s
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn reflexive(a in random_series(&field(3))) {
        let lat = lattice3();
        prop_assert!(is_equivalent(&a, &a, &lat).unwrap().equivalent);
    }

    #[test]
    fn lattice_shift_is_equivalent_and_replays(
        a in random_series(&field(3)),
        l in lattice_element(&lattice3()),
    ) {
        let lat = lattice3();
        let b = a.add(&l);
        let out = is_equivalent(&b, &a, &lat).unwrap();
        prop_assert!(out.equivalent);
        prop_assert!(out.certificate.unwrap().replays(&lat, &b, &a));
        let back = is_equivalent(&a, &b, &lat).unwrap();
        prop_assert!(back.equivalent);
    }

    #[test]
    fn symmetric(a in random_series(&field(3)), b in random_series(&field(3))) {
        let lat = lattice3();
        let ab = is_equivalent(&a, &b, &lat).unwrap().equivalent;
        let ba = is_equivalent(&b, &a, &lat).unwrap().equivalent;
        prop_assert_eq!(ab, ba);
    }

    #[test]
    fn transitive(
        a in random_series(&field(3)),
        l1 in lattice_element(&lattice3()),
        l2 in lattice_element(&lattice3()),
    ) {
        let lat = lattice3();
        let b = a.add(&l1);
        let c = b.add(&l2);
        prop_assert!(is_equivalent(&a, &b, &lat).unwrap().equivalent);
        prop_assert!(is_equivalent(&b, &c, &lat).unwrap().equivalent);
        prop_assert!(is_equivalent(&a, &c, &lat).unwrap().equivalent);
    }

    #[test]
    fn scaling_by_units_of_the_integral_directions(l in lattice_element(&lattice3())) {
        let lat = lattice3();
        let f = lat.field().clone();
        let zero = QSeries::zero(&f, PREC);
        for m in [2i64, 5, 7] {
            let s = l.scale_rational(&rat(m, 1));
            prop_assert!(is_equivalent(&s, &zero, &lat).unwrap().equivalent);
        }
    }
}

#[test]
fn weight_zero_lattice() {
    let f = field(3);
    let b = build_basis(3, 0, 6).unwrap();
    assert!(IndeterminacyLattice::new(&b, 0, true).is_err());
    let lat = IndeterminacyLattice::new(&b, 0, false).unwrap();
    let half_q = QSeries::monomial(CycNum::from_rational(&f, &rat(1, 2)), 1, 6);
    let third_q = QSeries::monomial(CycNum::from_rational(&f, &rat(1, 3)), 1, 6);
    let zero = QSeries::zero(&f, 6);
    assert!(!is_equivalent(&half_q, &zero, &lat).unwrap().equivalent);
    assert!(is_equivalent(&third_q, &zero, &lat).unwrap().equivalent);
    let c = QSeries::constant(CycNum::from_rational(&f, &rat(2, 7)), 6);
    assert!(is_equivalent(&c, &zero, &lat).unwrap().equivalent);
}

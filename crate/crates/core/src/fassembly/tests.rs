use proptest::prelude::*;

use super::*;
use crate::divcong::{is_equivalent, IndeterminacyLattice};
use crate::exactnum::rat;
use crate::geometry::{circle_xi_table, etasigma_parity_table, nu2_xi_table, su3_parity_table};

fn field(n: u32) -> Arc<CycField> {
    CycField::new(n).unwrap()
}

fn const_table(kind: XiKind, l: u32, f: &Arc<CycField>, dmax: i64, v: Rational) -> XiTable {
    XiTable::from_fn(kind, l, f, dmax, |_| Ok(EpsPoly::from_rational(f, &v))).unwrap()
}

#[test]
fn constant_table_gives_minus_e_g_tilde_one() {
    for n in [2u32, 3] {
        let f = field(n);
        let e = rat(5, 7);
        let xi = const_table(XiKind::ComplexFull, 1, &f, 19, e.clone());
        let r = assemble_complex(&xi, 20).unwrap();
        let expected = g_tilde(&f, 1, 20).unwrap().scale_rational(&-e);
        assert_eq!(r.series, expected);
        assert_eq!(r.weight_bound, 2);
    }
}

#[test]
fn zero_tables_give_zero() {
    let f = field(3);
    for kind in [XiKind::ComplexFull, XiKind::ComplexPositive, XiKind::Quaternionic] {
        let xi = const_table(kind, 3, &f, 14, rat(0, 1));
        let s = match kind {
            XiKind::ComplexFull => assemble_complex(&xi, 15),
            XiKind::ComplexPositive => assemble_complex_reduced(&xi, 15),
            _ => assemble_quaternionic(&xi, 15),
        }
        .unwrap();
        assert!(s.series.is_zero());
    }
    let p = const_table(XiKind::QuaternionicKernelParity, 4, &f, 14, rat(0, 1));
    assert!(assemble_quaternionic_reduced(&p, 15).unwrap().series.is_zero());
}

#[test]
fn single_twist_enumerates_divisors() {
    let f = field(3);
    let mut xi = const_table(XiKind::ComplexFull, 1, &f, 9, rat(0, 1));
    xi.insert(1, EpsPoly::from_rational(&f, &rat(1, 1))).unwrap();
    let r = assemble_complex(&xi, 10).unwrap();
    assert_eq!(r.series.coeff0(2), CycNum::zeta_pow(&f, -2));
    assert_eq!(r.series.coeff0(1), CycNum::zeta_pow(&f, -1));
}

#[test]
fn missing_twists_are_refused() {
    let f = field(3);
    let xi = const_table(XiKind::ComplexFull, 1, &f, 5, rat(1, 2));
    assert_eq!(assemble_complex(&xi, 10).unwrap_err(), Error::MissingTwist(6));
    let mut partial = XiTable::new(XiKind::ComplexFull, 1, &f).unwrap();
    partial.insert(1, EpsPoly::from_rational(&f, &rat(1, 1))).unwrap();
    assert_eq!(assemble_complex(&partial, 3).unwrap_err(), Error::MissingTwist(-1));
    assert!(XiTable::new(XiKind::ComplexPositive, 1, &f)
        .unwrap()
        .insert(-2, EpsPoly::zero(&f))
        .is_err());
    assert!(matches!(
        assemble_complex_reduced(&xi, 5),
        Err(Error::WrongTableKind { .. })
    ));
}

#[test]
fn circle_reduced_matches_half_g_tilde_one() {
    let f = field(3);
    let xi = circle_xi_table(&f, 19, true).unwrap();
    let r = assemble_complex_reduced(&xi, 20).unwrap();
    let parts = r.series.eps_split();
    // ε-part: −Σ Σ (ζ^{−e} + ζ^{e}) d = G̃_2 exactly
    assert_eq!(parts[1], g_tilde(&f, 2, 20).unwrap());
    let lat = IndeterminacyLattice::standard(3, 2, 20).unwrap();
    let eta2 = known_representative(KnownClass::Eta2, &f, 20).unwrap();
    let out = is_equivalent(&r.series, &eta2.series, &lat).unwrap();
    assert!(out.equivalent);
    assert_eq!(out.certificate.unwrap().beta, CycNum::one(&f));
}

#[test]
fn nu2_table_collapses_to_g_tilde_two() {
    for n in [3u32, 5] {
        let f = field(n);
        let r = assemble_complex_reduced(&nu2_xi_table(&f, 19).unwrap(), 20).unwrap();
        assert_eq!(r.series, g_tilde(&f, 2, 20).unwrap().scale_rational(&rat(1, 12)));
        assert_eq!(r.weight_bound, 4);
    }
}

#[test]
fn quaternionic_sums() {
    let f = field(3);
    let cubes = XiTable::from_fn(XiKind::Quaternionic, 2, &f, 29, |d| {
        Ok(EpsPoly::from_rational(&f, &rat(d * d * d, 1)))
    })
    .unwrap();
    let r = assemble_quaternionic(&cubes, 30).unwrap();
    for n in 1..30u64 {
        assert_eq!(
            r.series.coeff0(n as usize),
            CycNum::from_rational(&f, &Rational::from_integer(divisor_sigma(3, n)))
        );
    }
    let mut single = const_table(XiKind::Quaternionic, 2, &f, 9, rat(0, 1));
    single.insert(1, EpsPoly::from_rational(&f, &rat(3, 4))).unwrap();
    let s = assemble_quaternionic(&single, 10).unwrap();
    assert!((1..10).all(|n| s.series.coeff0(n) == CycNum::from_rational(&f, &rat(3, 4))));
}

#[test]
fn quaternionic_reduction_branches() {
    let f = field(3);
    let prec = 100;
    let t = etasigma_parity_table(&f, prec as i64 - 1).unwrap();
    let r = assemble_quaternionic_reduced(&t, prec).unwrap();
    let known = known_representative(KnownClass::EtaSigma, &f, prec).unwrap();
    assert!(r.series.sub(&known.series).is_integral_series().unwrap());
    assert_eq!(r.weight_bound, 5);

    let mut six = t.clone();
    six.l = 6;
    assert!(assemble_quaternionic_reduced(&six, prec).unwrap().series.is_zero());
    let mut odd = t;
    odd.l = 5;
    assert!(assemble_quaternionic_reduced(&odd, prec).is_err());
}

#[test]
fn known_representative_coefficients() {
    let f = field(3);
    let eta2 = known_representative(KnownClass::Eta2, &f, 10).unwrap();
    let z = CycNum::zeta_pow(&f, 1);
    let zi = CycNum::zeta_pow(&f, -1);
    assert_eq!(eta2.series.coeff0(1), (&zi - &z).scale(&rat(-1, 2)));
    let nu2 = known_representative(KnownClass::Nu2, &f, 10).unwrap();
    let g2 = g_tilde(&f, 2, 10).unwrap();
    assert_eq!(g2.coeff0(1), CycNum::one(&f));
    assert_eq!(g2.coeff0(2), CycNum::from_int(&f, 3));
    assert_eq!(nu2.series.coeff0(2), CycNum::from_rational(&f, &rat(1, 2)));
    let es = known_representative(KnownClass::EtaSigma, &f, 10).unwrap();
    assert_eq!(es.series.coeff0(4), CycNum::from_rational(&f, &rat(73, 2)));
    assert!(known_representative(KnownClass::Nu2, &field(4), 10).is_err());
    assert!(known_representative(KnownClass::EtaSigma, &field(2), 10).is_err());
    assert_eq!("nu2".parse::<KnownClass>().unwrap(), KnownClass::Nu2);
}

#[test]
fn examples_at_level_three() {
    let opts = ExampleOptions::default();
    for ex in Example::ALL {
        let r = run_example(ex, 3, 20, &opts).unwrap();
        assert!(r.outcome.equivalent, "{}", r);
        assert!(r.outcome.certificate.unwrap().replays(
            &IndeterminacyLattice::standard(3, r.assembled.weight_bound, 20).unwrap(),
            &r.assembled.series,
            &r.reference.series
        ));
    }
    let a = run_example(Example::EtasigmaProduct, 3, 20, &opts).unwrap();
    let b = run_example(Example::Su3Quotient, 3, 20, &opts).unwrap();
    assert_eq!(a.assembled.series, b.assembled.series);
}

#[test]
fn su3_and_hp1_parity_tables_agree() {
    let f = field(3);
    let a = su3_parity_table(&f, 19).unwrap();
    let b = etasigma_parity_table(&f, 19).unwrap();
    assert!(a.entries().zip(b.entries()).all(|(x, y)| x == y));
}

const PREC: usize = 12;

fn entry(f: &Arc<CycField>) -> impl Strategy<Value = EpsPoly> {
    let f = Arc::clone(f);
    ((-12i64..=12), (1i64..=12), (-3i64..=3))
        .prop_map(move |(a, b, e)| EpsPoly::linear(&f, &rat(a, b), &rat(e, 1)))
}

fn positive_table(l: u32) -> impl Strategy<Value = XiTable> {
    let f = field(3);
    prop::collection::vec(entry(&f), PREC - 1).prop_map(move |v| {
        XiTable::from_fn(XiKind::ComplexPositive, l, &f, PREC as i64 - 1, |d| {
            Ok(v[d as usize - 1].clone())
        })
        .unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    // ξ_{−d} = −ξ_d + m_d with integers m_d
    #[test]
    fn full_and_reduced_agree_for_odd_l(
        t in positive_table(1),
        shifts in prop::collection::vec(-3i64..=3, PREC - 1),
    ) {
        let f = field(3);
        let mut full = XiTable::new(XiKind::ComplexFull, 1, &f).unwrap();
        for (d, v) in t.entries() {
            full.insert(d, v.clone()).unwrap();
            let m = EpsPoly::from_rational(&f, &rat(shifts[d as usize - 1], 1));
            full.insert(-d, &(-v) + &m).unwrap();
        }
        let a = assemble_complex(&full, PREC).unwrap();
        let b = assemble_complex_reduced(&t, PREC).unwrap();
        let lat = IndeterminacyLattice::standard(3, 2, PREC).unwrap();
        prop_assert!(is_equivalent(&a.series, &b.series, &lat).unwrap().equivalent);
        prop_assert!(a.series.sub(&b.series).is_integral_series().unwrap());
    }

    #[test]
    fn assembly_is_additive(s in positive_table(2), t in positive_table(2)) {
        let sum = s.add(&t).unwrap();
        let lhs = assemble_complex_reduced(&sum, PREC).unwrap().series;
        let rhs = assemble_complex_reduced(&s, PREC)
            .unwrap()
            .series
            .add(&assemble_complex_reduced(&t, PREC).unwrap().series);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn integer_shift_keeps_verdict(t in positive_table(1), d in 1i64..(PREC as i64), m in -5i64..=5) {
        let f = field(3);
        let mut shifted = t.clone();
        let v = t.get(d).unwrap();
        shifted.insert(d, v + &EpsPoly::from_rational(&f, &rat(m, 1))).unwrap();
        let a = assemble_complex_reduced(&t, PREC).unwrap();
        let b = assemble_complex_reduced(&shifted, PREC).unwrap();
        prop_assert!(b.series.sub(&a.series).is_integral_series().unwrap());
        prop_assert_eq!(a.series.coeff(0).is_zero(), true);
        let lat = IndeterminacyLattice::standard(3, 2, PREC).unwrap();
        let eta2 = known_representative(KnownClass::Eta2, &f, PREC).unwrap();
        let va = is_equivalent(&a.series, &eta2.series, &lat).unwrap().equivalent;
        let vb = is_equivalent(&b.series, &eta2.series, &lat).unwrap().equivalent;
        prop_assert_eq!(va, vb);
    }
}

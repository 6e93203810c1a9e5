//! Oracle runs on small algebras with independently known homology.

use cychom::calculus::{exceptional, exterior_hh, hkr, koszul_dual, DualityRemap, ExceptionalCase};
use cychom::oracle::{koszul_check, run, verify_against, OracleOptions};
use cychom::rewrite::{complete, graded_commutator, hc0_direct, Presentation};
use cychom::scalar::Parity;
use cychom::transforms::hcfree;
use cychom::words::{Alphabet, Word};
use cychom::{Rat, RatSeries, RatTriSeries};

use num_traits::{FromPrimitive, One, Zero};

fn r(n: i64) -> Rat {
    Rat::from_i64(n).unwrap()
}

fn w(letters: &[u32]) -> Word {
    Word(letters.to_vec())
}

fn free_presentation(n: u32, parity: Parity, trunc: u32) -> Presentation<Rat> {
    Presentation::new(Alphabet::uniform("t", n, parity), vec![], trunc)
}

#[test]
fn free_algebra_one_even_generator_is_polynomial_line() {
    let trunc = 6;
    let out = run(&free_presentation(1, Parity::Even, trunc), &OracleOptions::new(trunc)).unwrap();
    assert!(out.checks.all_passed(), "{:?}", out.checks);
    // cyclic homology vanishes above degree zero and counts one class per weight
    let mut hc = RatTriSeries::zero(trunc);
    for q in 1..=trunc {
        hc.add_to(0, q, Parity::Even, Rat::one());
    }
    // Hochschild series is (1 + yxz)/(1 - z)
    let report = verify_against(&out.table, Some(&hkr::<Rat>(1, trunc)), Some(&hc));
    assert!(report.passed(), "{:?}", report.first());
}

#[test]
fn free_algebra_one_odd_generator() {
    let trunc = 6;
    let out = run(&free_presentation(1, Parity::Odd, trunc), &OracleOptions::new(trunc)).unwrap();
    assert!(out.checks.all_passed(), "{:?}", out.checks);
    // one odd class in each odd weight, none elsewhere
    let yz = RatSeries::term(Rat::one(), 1, Parity::Odd, trunc);
    let hc = RatTriSeries::from_signed(&hcfree(&yz).unwrap());
    let report = verify_against(&out.table, None, Some(&hc));
    assert!(report.passed(), "{:?}", report.first());
}

#[test]
fn free_algebra_two_even_generators() {
    let trunc = 5;
    let p = free_presentation(2, Parity::Even, trunc);
    let out = run(&p, &OracleOptions::new(trunc)).unwrap();
    assert!(out.checks.all_passed(), "{:?}", out.checks);
    // cyclic homology concentrated in degree zero, counting necklaces
    let v = RatSeries::term(r(2), 1, Parity::Even, trunc);
    let hc = RatTriSeries::from_signed(&hcfree(&v).unwrap());
    let report = verify_against(&out.table, None, Some(&hc));
    assert!(report.passed(), "{:?}", report.first());
    // Hochschild homology of a free algebra vanishes above degree 1
    for (&(_, n, _), &d) in &out.table.hh {
        assert!(n <= 1 || d == 0, "hh at degree {n} is {d}");
    }
    // the complex route and the word route agree on degree zero
    let rs = complete(&p).unwrap();
    let direct = hc0_direct(&rs, trunc);
    for q in 1..=trunc {
        for eps in [Parity::Even, Parity::Odd] {
            assert_eq!(
                direct.get(q, eps),
                Rat::from_u64(out.table.hc_dim(0, q, eps)).unwrap()
            );
        }
    }
}

#[test]
fn monomial_relation_quotient() {
    // k<x1, x2>/(x1 x2), even generators
    let trunc = 6;
    let alphabet = Alphabet::uniform("x", 2, Parity::Even);
    let p = Presentation::new(alphabet, vec![vec![(Rat::one(), w(&[0, 1]))]], trunc);
    let out = run(&p, &OracleOptions::new(trunc)).unwrap();
    assert!(out.checks.all_passed(), "{:?}", out.checks);
    // cyclic homology is concentrated in degree zero with series
    // hcfree(2z - z^2)
    let mut v = RatSeries::term(r(2), 1, Parity::Even, trunc);
    v.add_to(2, Parity::Even, -Rat::one());
    let hc = RatTriSeries::from_signed(&hcfree(&v).unwrap());
    let report = verify_against(&out.table, None, Some(&hc));
    assert!(report.passed(), "{:?}", report.first());
}

#[test]
fn commutative_plane_matches_polynomial_series() {
    // k<T1,T2>/([T1,T2]) with even generators is k[T1,T2]
    let trunc = 5;
    let alphabet = Alphabet::uniform("t", 2, Parity::Even);
    let rel = graded_commutator::<Rat>(&alphabet, &w(&[0]), &w(&[1]));
    let p = Presentation::new(alphabet, vec![rel], trunc);
    let out = run(&p, &OracleOptions::new(trunc)).unwrap();
    assert!(out.checks.all_passed(), "{:?}", out.checks);
    let report = verify_against(
        &out.table,
        Some(&hkr::<Rat>(2, trunc)),
        Some(&exceptional::<Rat>(ExceptionalCase::B0, 2, trunc).unwrap()),
    );
    assert!(report.passed(), "{:?}", report.first());
}

#[test]
fn exterior_square_and_koszul_duality() {
    let trunc = 5;
    let alphabet = Alphabet::uniform("e", 2, Parity::Odd);
    let rels = vec![
        vec![(Rat::one(), w(&[0, 0]))],
        vec![(Rat::one(), w(&[1, 1]))],
        graded_commutator::<Rat>(&alphabet, &w(&[0]), &w(&[1])),
    ];
    let p = Presentation::new(alphabet, rels, trunc);
    let out = run(&p, &OracleOptions::new(trunc)).unwrap();
    assert!(out.checks.all_passed(), "{:?}", out.checks);
    let report = verify_against(&out.table, Some(&exterior_hh::<Rat>(2, trunc)), None);
    assert!(report.passed(), "{:?}", report.first());

    // index bijection against the polynomial ring on two even generators
    let poly = {
        let alphabet = Alphabet::uniform("t", 2, Parity::Even);
        let rel = graded_commutator::<Rat>(&alphabet, &w(&[0]), &w(&[1]));
        run(
            &Presentation::new(alphabet, vec![rel], trunc),
            &OracleOptions::new(trunc),
        )
        .unwrap()
    };
    let report = koszul_check(&poly.table, &out.table);
    assert!(report.passed(), "{:?}", report.first());
    // and the remapped closed form agrees
    assert_eq!(
        koszul_dual(&hkr::<Rat>(2, trunc), DualityRemap::HhDual).unwrap(),
        exterior_hh::<Rat>(2, trunc)
    );
}

#[test]
fn symmetric_witness_cyclic_dimensions() {
    // k<a,b,c>/([a,b] + c^2), odd generators
    let trunc = 4;
    let alphabet = Alphabet::uniform("g", 3, Parity::Odd);
    let mut rel = graded_commutator::<Rat>(&alphabet, &w(&[0]), &w(&[1]));
    rel.push((Rat::one(), w(&[2, 2])));
    let p = Presentation::new(alphabet, vec![rel], trunc);
    let out = run(&p, &OracleOptions::new(trunc)).unwrap();
    assert!(out.checks.all_passed(), "{:?}", out.checks);
    // degree one: exactly yz^2
    assert_eq!(out.table.hc_dim(1, 2, Parity::Odd), 1);
    for (&(q, n, eps), &d) in &out.table.hc {
        if n == 1 {
            assert_eq!(
                (q, eps, d),
                (2, Parity::Odd, 1),
                "unexpected degree-one class"
            );
        }
        assert!(n <= 1, "cyclic homology must vanish above degree one");
    }
    // degree zero: z^2 + hcfree(3zy - z^2)
    let mut v = RatSeries::term(r(3), 1, Parity::Odd, trunc);
    v.add_to(2, Parity::Even, -Rat::one());
    let mut hc0 = hcfree(&v).unwrap();
    hc0.add_to(2, Parity::Even, Rat::one());
    for q in 1..=trunc {
        for eps in [Parity::Even, Parity::Odd] {
            assert_eq!(
                Rat::from_u64(out.table.hc_dim(0, q, eps)).unwrap(),
                hc0.get(q, eps),
                "degree-zero slot (q={q}, eps={eps:?})"
            );
        }
    }
}

#[test]
fn exceptional_squares_match_oracle() {
    let trunc = 5;
    for (case, parity) in [
        (ExceptionalCase::A0, Parity::Even),
        (ExceptionalCase::A1, Parity::Odd),
    ] {
        for n in [2u32, 3] {
            let alphabet = Alphabet::uniform("t", n, parity);
            let p = Presentation::new(
                alphabet,
                vec![vec![(Rat::one(), w(&[0, 0]))]],
                trunc,
            );
            let out = run(&p, &OracleOptions::new(trunc)).unwrap();
            assert!(out.checks.all_passed(), "{case} n={n}: {:?}", out.checks);
            let predicted = exceptional::<Rat>(case, n, trunc).unwrap();
            let report = verify_against(&out.table, None, Some(&predicted));
            assert!(report.passed(), "{case} n={n}: {:?}", report.first());
        }
    }
}

#[test]
fn exceptional_commutators_match_oracle() {
    let trunc = 5;
    for (case, parity) in [
        (ExceptionalCase::B0, Parity::Even),
        (ExceptionalCase::B1, Parity::Odd),
    ] {
        let alphabet = Alphabet::uniform("t", 2, parity);
        let rel = graded_commutator::<Rat>(&alphabet, &w(&[0]), &w(&[1]));
        let p = Presentation::new(alphabet, vec![rel], trunc);
        let out = run(&p, &OracleOptions::new(trunc)).unwrap();
        assert!(out.checks.all_passed(), "{case}: {:?}", out.checks);
        let predicted = exceptional::<Rat>(case, 2, trunc).unwrap();
        let report = verify_against(&out.table, None, Some(&predicted));
        assert!(report.passed(), "{case}: {:?}", report.first());
    }
}

#[test]
fn mixed_parity_free_algebra_checks() {
    // one even and one odd generator: exercises every sign path
    let trunc = 5;
    let alphabet = Alphabet::new(vec![
        cychom::words::Generator {
            name: "u".into(),
            weight: 1,
            parity: Parity::Even,
        },
        cychom::words::Generator {
            name: "v".into(),
            weight: 1,
            parity: Parity::Odd,
        },
    ])
    .unwrap();
    let p = Presentation::new(alphabet, vec![], trunc);
    let out = run(&p, &OracleOptions::new(trunc)).unwrap();
    assert!(out.checks.all_passed(), "{:?}", out.checks);
    let mut v = RatSeries::term(Rat::one(), 1, Parity::Even, trunc);
    v.add_to(1, Parity::Odd, Rat::one());
    let hc = RatTriSeries::from_signed(&hcfree(&v).unwrap());
    let report = verify_against(&out.table, None, Some(&hc));
    assert!(report.passed(), "{:?}", report.first());
}

#[test]
fn max_hdeg_caps_the_table() {
    let trunc = 5;
    let p = free_presentation(2, Parity::Even, trunc);
    let capped = run(&p, &OracleOptions::with_max_hdeg(trunc, 1)).unwrap();
    assert!(capped.checks.all_passed());
    let full = run(&p, &OracleOptions::new(trunc)).unwrap();
    for (&(q, n, eps), &d) in &capped.table.hh {
        assert!(n <= 1);
        assert_eq!(full.table.hh_dim(n, q, eps), d);
    }
}

use qcurv_core::curvature::*;
use qcurv_core::{Coefficient, MatrixForm, Modes, Nilpotency, RingMode};

fn q(e: i64) -> Coefficient {
    Coefficient::q_pow(e, RingMode::Free)
}

#[test]
fn omega_three_matches_hand_expansion() {
    let nil = Nilpotency::Unbounded;
    for n in 1..=3 {
        let c = Connection::generic(n);
        let w = c.omega();
        let dw = w.d(nil);
        let expect = w
            .d(nil)
            .d(nil)
            .add(&dw.mul(w).unwrap().scale(&(q(1) + q(2))))
            .and_then(|m| m.add(&w.mul(&dw).unwrap().scale(&q(2))))
            .and_then(|m| m.add(&w.mul(w).unwrap().mul(w).unwrap().scale(&q(3))))
            .unwrap();
        let tower = omega_tower(&c, 3, Modes::free()).unwrap();
        assert_eq!(tower.level(3), &expect, "n={n}");
    }
}

#[test]
fn tower_grades() {
    let c = Connection::generic(2);
    let tower = omega_tower(&c, 5, Modes::free()).unwrap();
    assert_eq!(tower.level(0), &MatrixForm::identity(2, RingMode::Free));
    for r in 0..=5 {
        assert_eq!(tower.level(r).grade(), Some(r as u32));
    }
}

#[test]
fn bianchi_grid_and_negative_control() {
    for k in 2..=3 {
        for n in 2..=3 {
            let report = bianchi_check(k, n, Modes::paired(k)).unwrap();
            assert!(report.pass, "{report}");
            let free = bianchi_check(k, n, Modes::new(RingMode::Free, Nilpotency::Order(k))).unwrap();
            assert!(!free.pass && free.residual_term_count > 0, "{free}");
        }
    }
}

#[test]
fn bianchi_cancellation_is_not_trivial() {
    // the unreduced pieces of DΩ_2 carry many terms before they cancel
    let c = Connection::generic(2);
    let modes = Modes::paired(2);
    let tower = omega_tower(&c, 2, modes).unwrap();
    let omega_k = tower.level(2);
    let pieces = omega_k.d(modes.nil).term_count() + c.omega().mul(omega_k).unwrap().term_count();
    assert!(pieces >= 10, "{pieces}");
}

#[test]
fn trace_identities() {
    for k in 2..=3 {
        for n in 2..=3 {
            for report in trace_identity_check(k, n, Modes::paired(k)).unwrap() {
                assert!(report.pass, "{report}");
            }
        }
    }
}

#[test]
fn maurer_cartan() {
    for k in 2..=4 {
        for report in maurer_cartan_tower(k, RingMode::Free).unwrap() {
            assert!(report.pass, "{report}");
        }
    }
    // without nilpotency the recursion keeps reproducing d^r g ginv
    let thetas = maurer_cartan_thetas(3, Modes::free());
    assert_eq!(thetas[3].to_string(), "d^3(g)*ginv");
}

#[test]
fn q_binomial_theorem() {
    for k in 0..=5 {
        let out = dk_expansion_check(k, &VectorField::generic(2)).unwrap();
        assert!(out.report.pass, "{}", out.report);
        for (r, c) in out.coefficients.iter().enumerate() {
            assert_eq!(c, &qcurv_core::qbinom(k, r as i64, RingMode::Free));
        }
    }
}

#[test]
fn product_identities() {
    for (k, r) in [(2, 1), (2, 2), (3, 1), (3, 2)] {
        let report = product_identity_check(k, r, 1, 2).unwrap();
        assert!(report.pass, "{report}");
    }
    for (k, r, r1) in [(2, 1, 2), (2, 2, 2), (3, 1, 2)] {
        let report = product_identity_check(k, r, r1, 2).unwrap();
        assert!(report.pass, "{report}");
    }
}

#[test]
fn source_current() {
    for k in 2..=3 {
        let c = Connection::generic(2);
        let alpha = qcurv_core::FormExpr::gen(qcurv_core::Gen::new(qcurv_core::Base::Alpha));
        let j = source_residual(&c, k, &alpha, Modes::free()).unwrap();
        assert!(!j.current.is_zero());
        assert_eq!(j.grade(), Some(k + 1));
        assert!(j.reimpose_paired().is_zero(), "k={k}");
    }
}

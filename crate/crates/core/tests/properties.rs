use finortho::approx::{project, Target};
use finortho::incomplete::{PhiParams, PsiParams};
use finortho::numkernel::{rat, ratio};
use finortho::verify::{gram_matrix, oracle_comparisons, GramReport, Verdict};
use finortho::{Family, RealPoly};
use proptest::prelude::*;

fn phi_family() -> impl Strategy<Value = Family> {
    (0i64..4, 20i64..80, 1u32..4, 0u32..4, 0u32..4)
        .prop_map(|(a, b2, m, r, s)| Family::Phi(PhiParams::new(rat(a), ratio(-b2, 2), m, r, s)))
}

fn psi_family() -> impl Strategy<Value = Family> {
    (-90i64..-20, 1u32..4, 0u32..4, 0u32..4).prop_map(|(a, m, r, s)| Family::Psi(PsiParams::new(rat(a), m, r, s)))
}

fn enough_members(f: &Family, k: u32) -> bool {
    f.max_index().map(|n| n + 1 >= k).unwrap_or(false)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn oracle_matches_random_incomplete_families(f in prop_oneof![phi_family(), psi_family()]) {
        prop_assume!(enough_members(&f, 12));
        for c in oracle_comparisons(&f, 6).unwrap() {
            prop_assert_eq!(c.indices.len(), 6);
            prop_assert!(c.max_rel_diff < 1e-9, "{} {:?}", f.describe(), c);
        }
    }

    #[test]
    fn span_members_are_reproduced(
        f in phi_family(),
        coeffs in proptest::collection::vec(-1.0f64..1.0, 1..7),
    ) {
        let top = f.max_index();
        prop_assume!(top.is_ok());
        let n_max = (coeffs.len() as u32 - 1).min(top.unwrap());
        let mut target = RealPoly::zero();
        for (n, c) in coeffs.iter().enumerate().take(n_max as usize + 1) {
            target = &target + &f.member_real(n as u32).unwrap().scale(c);
        }
        prop_assume!(!target.is_zero());
        let p = project(&Target::Poly(target), &f, n_max).unwrap();
        prop_assert!(p.relative_error < 1e-8, "{}: {}", f.describe(), p.relative_error);
        for (got, want) in p.coefficients.iter().zip(&coeffs) {
            prop_assert!((got - want).abs() < 1e-8, "{got} vs {want}");
        }
    }
}

#[test]
fn full_range_orthogonality() {
    let fams = [
        Family::Phi(PhiParams::new(rat(0), rat(-10), 1, 0, 0)),
        Family::Phi(PhiParams::new(rat(2), ratio(-23, 2), 2, 3, 1)),
        Family::Phi(PhiParams::new(rat(-1), ratio(-15, 2), 3, 2, 2)),
        Family::Psi(PsiParams::new(rat(-30), 1, 2, 0)),
        Family::Psi(PsiParams::new(rat(-40), 3, 4, 2)),
        Family::Psi(PsiParams::new(rat(-25), 4, 1, 3)),
    ];
    for f in &fams {
        let top = f.max_index().unwrap();
        let g = gram_matrix(f, top, 1e-8).unwrap();
        assert_eq!(g.verdict, Verdict::Pass, "{} up to {top}: off {} diag {}", f.describe(), g.max_offdiag_normalized, g.max_diag_relerr);
        assert!(g.formula_norms.iter().all(|v| v.sign == 1));
    }
}

#[test]
fn gram_report_json_round_trip() {
    let f = Family::Psi(PsiParams::new(rat(-25), 4, 1, 3));
    let g = gram_matrix(&f, 3, 1e-8).unwrap();
    let s = serde_json::to_string(&g).unwrap();
    let back: GramReport = serde_json::from_str(&s).unwrap();
    assert_eq!(back, g);
}

use super::*;
use crate::geometry::Surface;
use crate::geometry::Components;
use crate::residual::Residual;

const RANDERS: &str = "sqrt(y1^2 + y2^2*(1 + x1^2)) + 0.3*y1*cos(x2)";
const PHI: &str = "0.3*y1*y2/(y1^2 + y2^2) + 0.2*x1*y1/sqrt(y1^2 + y2^2) + 0.1*x2";
const RUND_F: &str = "(1/x2)*sqrt(2*y1*y2*x2^2 + (1 - 2*x1*x2 + sqrt(1 - 4*x1*x2))*y2^2)";
const RUND_PHI: &str =
    "(3/2)*ln((2*x2^2*y1 + (1 - 2*x1*x2 + sqrt(1 - 4*x1*x2))*y2)/(x2^2*y2))";

fn pair(f: &str, phi: &str) -> Conformal {
    Conformal::new(
        Surface::new("F", field::parse("F", f).unwrap()),
        field::parse("phi", phi).unwrap(),
    )
}

fn small(r: Residual, tol: f64) -> bool {
    r.normalized() < tol
}

#[test]
fn identities_on_a_generic_pair() {
    let c = pair(RANDERS, PHI);
    let cp = c.at(&Point::new(0.3, -0.2, 0.8, 0.5), 8).unwrap();
    let ids = cp.identities().unwrap();
    let all = [
        ids.pq_relation,
        ids.pq_derivative,
        ids.admissibility_forms,
        ids.main_bar_forms,
        ids.landsberg_bar_forms,
        ids.main_bar_derivatives,
        ids.t_bar_forms,
        ids.curvature_bar_forms,
        ids.curvature_bar_frame,
        ids.douglas_antisymmetry,
    ];
    for (k, r) in all.iter().enumerate() {
        assert!(small(*r, 1e-9), "identity {k}: {r:?}");
    }
}

#[test]
fn formulas_match_the_changed_surface() {
    let c = pair(RANDERS, PHI);
    let p = Point::new(0.3, -0.2, 0.8, 0.5);
    let cp = c.at(&p, 8).unwrap();
    let fresh = c.barred_surface().at(&p, 8).unwrap();
    let bf = cp.barred_frame().unwrap();
    let pairs: Vec<(&str, Vec<f64>, Vec<f64>)> = vec![
        ("ell_lo", bf.ell_lo.values(), fresh.frame.ell_lo.values()),
        ("m_hi", bf.m_hi.values(), fresh.frame.m_hi.values()),
        ("I", vec![cp.get("Ibar").unwrap().value()], vec![fresh.main().value()]),
        ("G", cp.spray_bar().values(), fresh.spray.values()),
        ("G_j", cp.barthel_bar().unwrap().values(), fresh.barthel.values()),
        ("G_jk", cp.berwald_bar().unwrap().values(), fresh.berwald_connection().unwrap().values()),
        ("B", cp.curvature_bar().unwrap().values(), fresh.berwald_curvature().unwrap().values()),
        ("J", vec![cp.get("Jbar").unwrap().value()], vec![fresh.landsberg().unwrap().value()]),
        ("T", cp.t_bar().unwrap().values(), fresh.t_tensor().unwrap().values()),
        ("D", vec![cp.douglas_bar().value()], vec![fresh.douglas_bivector().value()]),
    ];
    for (name, a, b) in pairs {
        let r = Residual::diff_all(&a, &b);
        assert!(r.normalized() < 1e-9, "{name}: {a:?} vs {b:?}");
    }
}

#[test]
fn funk_factor_leaves_the_spray_alone() {
    let a = "(0.1*y1 + 0.2*y2)";
    let ax = "(1 + 0.1*x1 + 0.2*x2)";
    let z = format!("sqrt((({ax})*y1 - {a}*x1)^2 + (({ax})*y2 - {a}*x2)^2)/{a}");
    let f = format!("{a}*{z}/({ax})^2");
    let c = pair(&f, &z);
    let cp = c.at(&Point::new(0.1, -0.3, 0.7, 0.4), 8).unwrap();
    assert!(cp.p.value().abs() < 1e-12 && cp.q.value().abs() < 1e-12);
    let diff = Residual::diff_all(&cp.spray_bar().values(), &cp.base.spray.values());
    assert!(diff.normalized() < 1e-12);
    assert!(cp.metrizability().unwrap().phi_horizontal.raw < 1e-12);
}

#[test]
fn rund_change_is_berwald_but_not_metrizable() {
    let c = pair(RUND_F, RUND_PHI);
    let cp = c.at(&Point::new(0.2, 0.5, 1.0, 1.0), 8).unwrap();
    let b = cp.berwald_conditions().unwrap();
    assert!(b.base_main.raw < 1e-10);
    assert!(small(b.r1, 1e-8) && small(b.r2, 1e-8), "{b:?}");
    let m = cp.metrizability().unwrap();
    assert!(m.dm.raw < 1e-8, "{m:?}");
    assert!(m.phi_horizontal.raw > 1e-2);
    assert!(small(m.defining_relation, 1e-9), "{m:?}");
    let d = cp.douglas_checks().unwrap();
    assert!(small(d.riemannian_base, 1e-8));
    assert!(d.scalar.is_none());
}

#[test]
fn zero_factor_is_the_identity() {
    let c = pair(RANDERS, "0*y1");
    let p = Point::new(0.3, -0.2, 0.8, 0.5);
    let cp = c.at(&p, 8).unwrap();
    assert_eq!(cp.p.value(), 0.0);
    assert_eq!(cp.q.value(), 0.0);
    assert!((cp.get("Ibar").unwrap().value() - cp.base.main().value()).abs() < 1e-14);
    let d = cp.douglas_checks().unwrap();
    assert!(d.riemannian_base.raw == 0.0 && d.q.raw == 0.0);
}

#[test]
fn position_only_factor_reduces() {
    let c = pair(RANDERS, "0.4*x1 - 0.3*x2^2");
    let cp = c.at(&Point::new(0.3, -0.2, 0.8, 0.5), 8).unwrap();
    assert!(cp.phi_is_isotropic().unwrap());
    for r in cp.isotropic_reduction().unwrap() {
        assert!(r.raw < 1e-12, "{r:?}");
    }
    assert!(!pair(RANDERS, PHI)
        .at(&Point::new(0.3, -0.2, 0.8, 0.5), 8)
        .unwrap()
        .phi_is_isotropic()
        .unwrap());
}

#[test]
fn deep_chain_names_the_failing_step() {
    let c = pair(RANDERS, PHI);
    let cp = c.at(&Point::new(0.3, -0.2, 0.8, 0.5), 4).unwrap();
    match cp.get("Q;2;2;2;2") {
        Err(Error::DegreeExhausted { chain }) => {
            assert!(chain.starts_with("Q;2 <- ;2"), "{chain}")
        }
        other => panic!("{other:?}"),
    }
    assert!(matches!(cp.get("nope"), Err(Error::Config(_))));
}

#[test]
fn inadmissible_factor_is_rejected() {
    // phi = ln of a linear form makes the admissibility expression vanish
    let c = pair("sqrt(y1^2 + y2^2)", "ln(y1/sqrt(y1^2 + y2^2))");
    assert!(matches!(
        c.at(&Point::new(0.0, 0.0, 0.6, 0.8), 6),
        Err(Error::Inadmissible(_))
    ));
}

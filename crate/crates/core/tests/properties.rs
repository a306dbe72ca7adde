//! Invariants that must hold at every admissible point, as property tests.

mod common;

use common::*;
use finsurf::classify::{Classifier, SamplePlan, Suite};
use finsurf::dsl::{self, FieldDef};
use finsurf::field::{self, homogeneity_defect};
use finsurf::geometry::Tensor4;
use finsurf::jet::MAX_DEGREE;
use finsurf::{Conformal, Coord, Error, Jet, Point, Surface};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn binom(n: usize, k: usize) -> usize {
    (1..=k).fold(1, |acc, i| acc * (n + 1 - i) / i)
}

fn arb_point() -> impl Strategy<Value = Point> {
    (-0.5f64..0.5, -0.5f64..0.5, 0.0f64..std::f64::consts::TAU)
        .prop_map(|(x1, x2, t)| Point::new(x1, x2, t.cos(), t.sin()))
}

fn arb_jet(degree: usize) -> impl Strategy<Value = Jet> {
    (arb_point(), prop::collection::vec(-2.0f64..2.0, Jet::len_for_degree(degree)))
        .prop_map(move |(p, c)| Jet::from_coeffs(p, degree, c).unwrap())
}

/// A bundled metric and a sampled admissible point of it.
fn arb_stock_point(names: &'static [&'static str]) -> impl Strategy<Value = (&'static str, Point)> {
    (0..names.len(), any::<u64>()).prop_map(move |(i, seed)| {
        let m = stock(names[i]);
        let mut plan = SamplePlan::from_box(&m.sample);
        plan.count = 1;
        plan.seed = seed;
        (names[i], plan.sample(&Surface::from_metric(&m)).unwrap()[0])
    })
}

const ALL: &[&str] = &["euclid", "funk", "berwald-rund", "randers", "sphere", "minkowski", "isotropic"];

fn flat4(t: &Tensor4) -> Vec<f64> {
    t.iter().flatten().flatten().flatten().map(Jet::value).collect()
}

// Jet engine.

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn coefficient_count_and_degree_bookkeeping(degree in 0usize..=MAX_DEGREE, p in arb_point()) {
        let j = Jet::coordinate(Coord::Y1, p, degree).unwrap();
        prop_assert_eq!(j.coeffs().len(), binom(degree + 4, 4));
        if degree == 0 {
            let exhausted = matches!(j.partial(Coord::X1), Err(Error::DegreeExhausted { .. }));
            prop_assert!(exhausted);
        } else {
            prop_assert_eq!(j.partial(Coord::X1).unwrap().degree(), degree - 1);
        }
    }

    #[test]
    fn partials_commute(a in arb_jet(5), i in 0usize..4, k in 0usize..4) {
        let (ci, ck) = (Coord::ALL[i], Coord::ALL[k]);
        let ik = a.partial(ci).unwrap().partial(ck).unwrap();
        let ki = a.partial(ck).unwrap().partial(ci).unwrap();
        prop_assert_eq!(ik.coeffs(), ki.coeffs());
    }

    #[test]
    fn leibniz_rule(a in arb_jet(6), b0 in arb_jet(6), i in 0usize..4) {
        let b = Jet::from_coeffs(a.point(), 6, b0.coeffs().to_vec()).unwrap();
        let c = Coord::ALL[i];
        let lhs = (&a * &b).partial(c).unwrap();
        let rhs = &(&a.partial(c).unwrap() * &b.truncate(5)) + &(&a.truncate(5) * &b.partial(c).unwrap());
        for (x, y) in lhs.coeffs().iter().zip(rhs.coeffs()) {
            prop_assert!((x - y).abs() <= 1e-12 * x.abs().max(y.abs()).max(1.0));
        }
    }

    #[test]
    fn first_order_coefficients_match_central_differences(seed in any::<u64>(), p in arb_point()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let def = FieldDef::plain("f", smooth_expr(&mut rng, 4)).unwrap();
        let jet = def.evaluate(&p, 1).unwrap();
        for c in Coord::ALL {
            let fd = central(|q| def.eval_real(q).unwrap(), &p, c, 1e-5);
            prop_assert!(rel(jet.partial(c).unwrap().value(), fd) < 1e-6, "{} d/d{c}", def.expr);
        }
    }
}

// Expression language.

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn print_parse_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = any_expr(&mut rng, 6);
        let printed = e.to_string();
        prop_assert_eq!(dsl::parse(&printed).unwrap(), e, "{}", printed);
    }

    #[test]
    fn degree_zero_equals_real_evaluation(seed in any::<u64>(), p in arb_point()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let def = FieldDef::plain("f", smooth_expr(&mut rng, 4)).unwrap();
        let j = def.evaluate(&p, 0).unwrap().value();
        let r = def.eval_real(&p).unwrap();
        prop_assert!((j - r).abs() <= 1e-13 * r.abs().max(1.0));
    }
}

#[test]
fn stock_metrics_have_the_right_homogeneity() {
    for name in ALL {
        let m = stock(name);
        let s = Surface::from_metric(&m);
        let mut plan = SamplePlan::from_box(&m.sample);
        plan.count = 10;
        let f = field::from_def(m.f.clone());
        for p in plan.sample(&s).unwrap() {
            assert!(homogeneity_defect(f.as_ref(), &p, 1.0).unwrap() < 1e-10, "{name} F");
            if let Some(phi) = &m.phi {
                let phi = field::from_def(phi.clone());
                assert!(homogeneity_defect(phi.as_ref(), &p, 0.0).unwrap() < 1e-10, "{name} phi");
            }
        }
    }
}

// Surface geometry.

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn frame_is_a_modified_berwald_frame((name, p) in arb_stock_point(ALL)) {
        let s = Surface::from_metric(&stock(name));
        let sp = s.at(&p, 6).unwrap();
        let fr = &sp.frame;
        let v = |j: &Jet| j.value();
        let dot = |a: &[Jet; 2], b: &[Jet; 2]| v(&a[0]) * v(&b[0]) + v(&a[1]) * v(&b[1]);
        prop_assert!((dot(&fr.ell_hi, &fr.ell_lo) - 1.0).abs() < 1e-10);
        prop_assert!(dot(&fr.ell_hi, &fr.m_lo).abs() < 1e-10);
        prop_assert!(dot(&fr.ell_lo, &fr.m_hi).abs() < 1e-10);
        prop_assert!((dot(&fr.m_hi, &fr.m_lo) - fr.eps).abs() < 1e-10);
        for i in 0..2 {
            for j in 0..2 {
                let rebuilt = v(&fr.ell_lo[i]) * v(&fr.ell_lo[j]) + fr.eps * v(&fr.m_lo[i]) * v(&fr.m_lo[j]);
                prop_assert!(rel(rebuilt, v(&fr.g[i][j])) < 1e-10);
            }
        }
        let wedge = v(&fr.ell_lo[0]) * v(&fr.m_lo[1]) - v(&fr.ell_lo[1]) * v(&fr.m_lo[0]);
        prop_assert!(rel(fr.gdet.value(), fr.eps * wedge * wedge) < 1e-10);
        prop_assert_eq!(fr.eps, fr.gdet.value().signum());
    }

    #[test]
    fn spray_and_curvature_structure((name, p) in arb_stock_point(ALL)) {
        let s = Surface::from_metric(&stock(name));
        let sp = s.at(&p, 6).unwrap();
        for r in sp.spray_homogeneity() {
            prop_assert!(r.value().abs() < 1e-10 * sp.spray[0].value().abs().max(1.0));
        }
        let f = sp.f.clone();
        for d in sp.delta(&f).unwrap() {
            prop_assert!(d.value().abs() < 1e-10 * f.value().abs().max(1.0));
        }
        let b = sp.berwald_curvature().unwrap();
        let scale = flat4(&b).iter().fold(1.0f64, |m, x| m.max(x.abs()));
        for i in 0..2 {
            for (j, k, r) in (0..8).map(|n| (n >> 2, (n >> 1) & 1, n & 1)) {
                let x = b[i][j][k][r].value();
                for y in [b[i][k][j][r].value(), b[i][r][k][j].value(), b[i][j][r][k].value()] {
                    prop_assert!((x - y).abs() < 1e-9 * scale);
                }
            }
            for k in 0..2 {
                for r in 0..2 {
                    let contracted: f64 = (0..2).map(|j| b[i][j][k][r].value() * fr_l(&sp, j)).sum();
                    prop_assert!(contracted.abs() < 1e-9 * scale);
                }
            }
        }
    }

    #[test]
    fn t_tensor_is_symmetric_and_rank_one((name, p) in arb_stock_point(ALL)) {
        let s = Surface::from_metric(&stock(name));
        let sp = s.at(&p, 6).unwrap();
        let t = sp.t_tensor().unwrap();
        let ft = sp.f.value();
        let iv2 = sp.main_v2().unwrap().value();
        let m: Vec<f64> = sp.frame.m_lo.iter().map(Jet::value).collect();
        for n in 0..16 {
            let (i, j, k, h) = (n >> 3, (n >> 2) & 1, (n >> 1) & 1, n & 1);
            let expect = iv2 * m[i] * m[j] * m[k] * m[h];
            prop_assert!(rel(ft * t[i][j][k][h].value(), expect) < 1e-8);
            prop_assert!(rel(t[i][j][k][h].value(), t[j][i][h][k].value()) < 1e-10);
        }
    }

    #[test]
    fn homogeneity_of_g_spray_and_main_scalar((name, p) in arb_stock_point(ALL), lambda in 0.3f64..3.0) {
        let s = Surface::from_metric(&stock(name));
        let a = s.at(&p, 5).unwrap();
        let b = s.at(&p.scale_y(lambda), 5).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                prop_assert!(rel(a.frame.g[i][j].value(), b.frame.g[i][j].value()) < 1e-10);
            }
            prop_assert!(rel(lambda * lambda * a.spray[i].value(), b.spray[i].value()) < 1e-10);
        }
        prop_assert!(rel(a.main().value(), b.main().value()) < 1e-9);
        let (ba, bb) = (flat4(&a.berwald_curvature().unwrap()), flat4(&b.berwald_curvature().unwrap()));
        for (x, y) in ba.iter().zip(&bb) {
            prop_assert!(rel(*x, lambda * y) < 1e-8);
        }
    }
}

fn fr_l(sp: &finsurf::SurfacePoint, j: usize) -> f64 {
    sp.frame.ell_hi[j].value()
}

// Conformal change.

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn changed_frame_is_a_modified_berwald_frame((name, p) in arb_stock_point(&STOCK_PAIRS)) {
        let c = Conformal::from_metric(&stock(name)).unwrap();
        let cp = c.at(&p, 6).unwrap();
        let fr = cp.barred_frame().unwrap();
        let v = |j: &Jet| j.value();
        let dot = |a: &[Jet; 2], b: &[Jet; 2]| v(&a[0]) * v(&b[0]) + v(&a[1]) * v(&b[1]);
        prop_assert!((dot(&fr.ell_hi, &fr.ell_lo) - 1.0).abs() < 1e-10);
        prop_assert!(dot(&fr.ell_hi, &fr.m_lo).abs() < 1e-10);
        prop_assert!((dot(&fr.m_hi, &fr.m_lo) - cp.eps()).abs() < 1e-10);
        let d = cp.douglas_antisymmetry();
        prop_assert!(d.normalized() < 1e-10);
    }

    #[test]
    fn rho_inverts_the_admissibility_combination((name, p) in arb_stock_point(&STOCK_PAIRS)) {
        let c = Conformal::from_metric(&stock(name)).unwrap();
        let cp = c.at(&p, 6).unwrap();
        let pv2 = cp.get("phi;2").unwrap().value();
        let inv = cp.sigma.value() + cp.eps() - pv2 * pv2;
        prop_assert!((cp.rho.value() * inv - 1.0).abs() < 1e-12);
        // rho = eps exactly when sigma = phi;2^2.
        let branch = (cp.sigma.value() - pv2 * pv2).abs() < 1e-12;
        prop_assert_eq!(branch, (cp.rho.value() - cp.eps()).abs() < 1e-12);
    }

    #[test]
    fn vertical_a_derivative_is_the_first_one((name, p) in arb_stock_point(&STOCK_PAIRS), seed in any::<u64>()) {
        let c = Conformal::from_metric(&stock(name)).unwrap();
        let cp = c.at(&p, 6).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = FieldDef::plain("f", smooth_expr(&mut rng, 3)).unwrap().evaluate(&p, 6).unwrap();
        let a = cp.bar_va(&f).unwrap().value();
        let b = cp.base.v1(&f).unwrap().value();
        prop_assert!(rel(a, b) < 1e-12);
    }

    #[test]
    fn transformation_formulas_match_the_changed_surface((name, p) in arb_stock_point(&STOCK_PAIRS)) {
        let c = Conformal::from_metric(&stock(name)).unwrap();
        let cp = c.at(&p, 8).unwrap();
        let fresh = c.barred_surface().at(&p, 8).unwrap();
        let fr = cp.barred_frame().unwrap();
        for i in 0..2 {
            prop_assert!(rel(fr.ell_lo[i].value(), fresh.frame.ell_lo[i].value()) < 1e-7);
            prop_assert!(rel(cp.spray_bar()[i].value(), fresh.spray[i].value()) < 1e-7);
        }
        prop_assert!(rel(cp.get("Ibar").unwrap().value(), fresh.main().value()) < 1e-7);
    }
}

#[test]
fn isotropic_factors_reduce() {
    for (f, phi) in [
        ("sqrt(y1^2 + y2^2)", "0.3*x1 - 0.2*x2^2"),
        ("sqrt(y1^2 + y2^2*(1 + x1^2)) + 0.3*y1*cos(x2)", "sin(x1 + x2)"),
        ("2*sqrt(y1^2 + y2^2)/(1 + x1^2 + x2^2)", "0.5*x1*x2"),
    ] {
        let c = Conformal::new(
            Surface::new("f", field::parse("F", f).unwrap()),
            field::parse("phi", phi).unwrap(),
        );
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let p = {
                use rand::Rng;
                let t: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                Point::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5), t.cos(), t.sin())
            };
            let cp = c.at(&p, 7).unwrap();
            assert!(cp.phi_is_isotropic().unwrap());
            for r in cp.isotropic_reduction().unwrap() {
                assert!(r.raw < 1e-9, "{f}, {phi}: {r:?}");
            }
        }
    }
}

// Sampling and reports.

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn samples_lie_in_the_domain(seed in any::<u64>(), i in 0usize..ALL.len()) {
        let m = stock(ALL[i]);
        let s = Surface::from_metric(&m);
        let mut plan = SamplePlan::from_box(&m.sample);
        plan.seed = seed;
        plan.count = 20;
        for p in plan.sample(&s).unwrap() {
            prop_assert!(s.check_domain(&p).is_ok());
            prop_assert!(p.y() != [0.0, 0.0]);
            // Domains are cones.
            for lambda in [0.01, 7.0] {
                prop_assert!(s.check_domain(&p.scale_y(lambda)).is_ok());
            }
        }
    }

    #[test]
    fn enlarging_the_sample_never_lowers_a_maximum(seed in any::<u64>()) {
        let m = stock("randers");
        let c = Classifier::from_metric(&m).unwrap().with_only(vec!["class.".into()]);
        let mut plan = SamplePlan::from_box(&m.sample);
        plan.seed = seed;
        plan.count = 12;
        let pts = plan.sample(c.surface()).unwrap();
        let small = c.run_at(&pts[..6], Suite::Classes).unwrap();
        let large = c.run_at(&pts, Suite::Classes).unwrap();
        for (a, b) in small.checks.iter().zip(&large.checks) {
            if let (Some(x), Some(y)) = (a.max, b.max) {
                prop_assert!(y >= x);
                prop_assert!(!(a.verdict == Some(false) && b.verdict == Some(true)));
            }
        }
    }
}

#[test]
fn reports_are_deterministic() {
    let m = stock("sphere");
    let c = Classifier::from_metric(&m).unwrap();
    let plan = SamplePlan::from_box(&m.sample);
    let a = c.run(&plan, Suite::Full).unwrap().to_json();
    let b = c.run(&plan, Suite::Full).unwrap().to_json();
    assert_eq!(a, b);
}


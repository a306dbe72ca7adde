use super::*;

fn euclid() -> Classifier {
    Classifier::new("euclid", Surface::new("F", field::parse("F", "sqrt(y1^2 + y2^2)").unwrap()))
}

fn plan(count: usize, seed: u64) -> SamplePlan {
    SamplePlan {
        bounds: [[-0.5, 0.5], [-0.5, 0.5], [-1.0, 1.0], [-1.0, 1.0]],
        count,
        seed,
    }
}

#[test]
fn sampling_is_seeded_and_normalized() {
    let s = euclid();
    let a = plan(10, 3).sample(s.surface()).unwrap();
    let b = plan(10, 3).sample(s.surface()).unwrap();
    let c = plan(10, 4).sample(s.surface()).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, c);
    for p in &a {
        let [y1, y2] = p.y();
        assert!((y1.hypot(y2) - 1.0).abs() < 1e-12);
    }
}

#[test]
fn empty_domain_exhausts_the_budget() {
    let s = Surface::new("F", field::parse("F", "sqrt(y1^2 + y2^2)").unwrap())
        .with_domain(std::sync::Arc::new(|_: &Point| Some("never".to_string())));
    assert!(matches!(plan(1, 1).sample(&s), Err(Error::Sampling(_))));
}

#[test]
fn euclidean_identities_are_tight() {
    let c = euclid().with_expect([("class.base.riemannian".to_string(), true)].into()).unwrap();
    let r = c.run(&plan(20, 1), Suite::Full).unwrap();
    assert!(r.errors.is_empty(), "{:?}", r.errors);
    for ch in &r.checks {
        if ch.group == Group::Identity && ch.evaluated > 0 {
            assert!(ch.max_raw.unwrap() < 1e-12, "{}: {:?}", ch.id, ch.max_raw);
        }
    }
    assert_eq!(r.check("class.base.riemannian").unwrap().status, Status::Pass);
    assert!(!r.any_failed());
    assert!(r.check("oracle.spray").is_none());
}

#[test]
fn reports_are_deterministic() {
    let c = euclid().with_conformal(
        field::parse("phi", "0.3*y1*y2/(y1^2 + y2^2) + 0.1*x1").unwrap(),
        "phi",
    );
    let a = c.run(&plan(8, 9), Suite::Full).unwrap().to_json();
    let b = c.run(&plan(8, 9), Suite::Full).unwrap().to_json();
    assert_eq!(a, b);
}

#[test]
fn unknown_expectation_is_rejected() {
    let e = euclid().with_expect([("class.nope".to_string(), true)].into());
    assert!(matches!(e, Err(Error::Config(_))));
}

#[test]
fn suite_selection() {
    let c = euclid();
    assert!(c.selected(Suite::Oracle).is_empty());
    assert!(c.selected(Suite::Identities).iter().all(|d| d.group == Group::Identity));
    let only = euclid().with_only(vec!["identity.frame".into()]);
    let ids: Vec<_> = only.selected(Suite::Full).iter().map(|d| d.id).collect();
    assert_eq!(ids, ["identity.frame", "identity.frame-derivatives"]);
    assert!("fast".parse::<Suite>().is_err());
}

#[test]
fn check_ids_are_unique() {
    let mut ids: Vec<_> = CHECKS.iter().map(|c| c.id).collect();
    ids.sort();
    let n = ids.len();
    ids.dedup();
    assert_eq!(ids.len(), n);
}

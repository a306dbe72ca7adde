//! The check registry. Each check turns one sample point into a residual,
//! or skips the point when its precondition does not hold there.

use std::cell::OnceCell;

use serde::Serialize;

use crate::conformal::{
    BerwaldConditions, ConformalPoint, DouglasChecks, FlatnessChecks, LandsbergChecks,
    Metrizability,
};
use crate::error::{Error, Result};
use crate::geometry::{
    commutation, frame_derivative_identities, frame_identities, horizontal_constancy,
    spray_identities, BaseClasses, Components, Surface, SurfacePoint,
};
use crate::jet::{Jet, Point};
use crate::residual::Residual;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Group {
    /// Holds for every admissible input; expected true.
    Identity,
    /// Transformation formula against the changed metric built from scratch;
    /// expected true.
    Oracle,
    /// A property that may or may not hold; judged against `[expect]`.
    Class,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Value(Residual),
    Skip(String),
}

pub struct CheckDef {
    pub id: &'static str,
    pub group: Group,
    /// Needs a conformal factor.
    pub conformal: bool,
    pub about: &'static str,
    eval: fn(&Ctx) -> Result<Outcome>,
}

impl CheckDef {
    pub fn run(&self, ctx: &Ctx) -> Result<Outcome> {
        match (self.eval)(ctx) {
            Err(Error::NegativeRho(v)) => Ok(Outcome::Skip(format!(
                "eps rho = {v:.3e} < 0, the changed frame does not exist"
            ))),
            other => other,
        }
    }
}

impl std::fmt::Debug for CheckDef {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.id)
    }
}

/// Everything a check may look at for one point. Shared intermediate
/// results are computed once.
pub struct Ctx<'a> {
    pub sp: &'a SurfacePoint,
    pub cp: Option<&'a ConformalPoint>,
    pub point: Point,
    pub degree: usize,
    pub threshold: f64,
    /// A fixed 0-homogeneous test scalar for the operator identities.
    pub probe: Jet,
    changed: Option<&'a Surface>,
    fresh: OnceCell<Result<SurfacePoint>>,
    classes: OnceCell<Result<BaseClasses>>,
    gauss: OnceCell<Result<f64>>,
    berwald: OnceCell<Result<BerwaldConditions>>,
    metr: OnceCell<Result<Metrizability>>,
    lands: OnceCell<Result<LandsbergChecks>>,
    flat: OnceCell<Result<FlatnessChecks>>,
    doug: OnceCell<Result<DouglasChecks>>,
}

fn memo<T: Clone>(cell: &OnceCell<Result<T>>, f: impl FnOnce() -> Result<T>) -> Result<T> {
    cell.get_or_init(f).clone()
}

impl<'a> Ctx<'a> {
    pub fn new(
        sp: &'a SurfacePoint,
        cp: Option<&'a ConformalPoint>,
        changed: Option<&'a Surface>,
        point: Point,
        degree: usize,
        threshold: f64,
        probe: Jet,
    ) -> Ctx<'a> {
        Ctx {
            sp,
            cp,
            point,
            degree,
            threshold,
            probe,
            changed,
            fresh: OnceCell::new(),
            classes: OnceCell::new(),
            gauss: OnceCell::new(),
            berwald: OnceCell::new(),
            metr: OnceCell::new(),
            lands: OnceCell::new(),
            flat: OnceCell::new(),
            doug: OnceCell::new(),
        }
    }

    fn cp(&self) -> Result<&'a ConformalPoint> {
        self.cp
            .ok_or_else(|| Error::Config("check needs a conformal factor".into()))
    }

    /// The changed metric evaluated from scratch.
    fn fresh(&self) -> Result<&SurfacePoint> {
        let r = self.fresh.get_or_init(|| match self.changed {
            Some(s) => s.at(&self.point, self.degree),
            None => Err(Error::Config("check needs a conformal factor".into())),
        });
        r.as_ref().map_err(Clone::clone)
    }

    fn classes(&self) -> Result<BaseClasses> {
        memo(&self.classes, || self.sp.classify())
    }

    fn gauss(&self) -> Result<f64> {
        memo(&self.gauss, || Ok(self.sp.gauss_curvature()?.value))
    }

    fn berwald(&self) -> Result<BerwaldConditions> {
        memo(&self.berwald, || self.cp()?.berwald_conditions())
    }

    fn metr(&self) -> Result<Metrizability> {
        memo(&self.metr, || self.cp()?.metrizability())
    }

    fn lands(&self) -> Result<LandsbergChecks> {
        memo(&self.lands, || self.cp()?.landsberg_checks())
    }

    fn flat(&self) -> Result<FlatnessChecks> {
        memo(&self.flat, || self.cp()?.flatness_checks())
    }

    fn doug(&self) -> Result<DouglasChecks> {
        memo(&self.doug, || self.cp()?.douglas_checks())
    }

    fn holds(&self, r: Residual) -> bool {
        r.normalized() < self.threshold
    }

    fn base_riemannian(&self) -> Result<Option<Outcome>> {
        Ok((!self.holds(self.classes()?.riemannian))
            .then(|| Outcome::Skip("original metric is not Riemannian here".into())))
    }

    fn base_berwald(&self) -> Result<Option<Outcome>> {
        Ok((!self.holds(self.classes()?.berwald))
            .then(|| Outcome::Skip("original metric is not Berwald here".into())))
    }

    fn base_douglas(&self) -> Result<Option<Outcome>> {
        Ok((!self.holds(self.classes()?.douglas))
            .then(|| Outcome::Skip("original metric is not Douglas here".into())))
    }

    fn barred_berwald(&self) -> Result<Option<Outcome>> {
        let b = self.berwald()?;
        Ok((!(self.holds(b.r1) && self.holds(b.r2)))
            .then(|| Outcome::Skip("changed metric is not Berwald here".into())))
    }
}

fn value(r: Residual) -> Result<Outcome> {
    Ok(Outcome::Value(r))
}

fn join(rs: &[Residual]) -> Residual {
    rs.iter().fold(Residual::default(), |a, r| a.join(*r))
}

fn oracle(a: &[f64], b: &[f64]) -> Result<Outcome> {
    value(Residual::diff_all(a, b))
}

macro_rules! guard {
    ($pre:expr) => {
        if let Some(skip) = $pre? {
            return Ok(skip);
        }
    };
}

// Surface identities

fn frame(c: &Ctx) -> Result<Outcome> {
    value(frame_identities(c.sp))
}

fn frame_derivatives(c: &Ctx) -> Result<Outcome> {
    value(join(&frame_derivative_identities(c.sp)?))
}

fn commutation_formulas(c: &Ctx) -> Result<Outcome> {
    value(join(&commutation(c.sp, &c.probe, c.gauss()?)?))
}

fn spray_partials(c: &Ctx) -> Result<Outcome> {
    value(join(&spray_identities(c.sp, &c.probe)?))
}

fn horizontal(c: &Ctx) -> Result<Outcome> {
    value(join(&horizontal_constancy(c.sp)?))
}

fn spray_forms(c: &Ctx) -> Result<Outcome> {
    oracle(&c.sp.spray.values(), &c.sp.spray_classical.values())
}

fn curvature_forms(c: &Ctx) -> Result<Outcome> {
    oracle(
        &c.sp.berwald_curvature()?.values(),
        &c.sp.berwald_curvature_frame()?.values(),
    )
}

fn gauss_probes(c: &Ctx) -> Result<Outcome> {
    let finv = c.sp.f.recip()?;
    let nums = [c.sp.y(0).clone(), c.sp.y(1).clone(), c.sp.y(0) + c.sp.y(1)];
    let mut got = Vec::new();
    for n in nums {
        if let Some(r) = c.sp.probe_curvature(&(n * &finv))? {
            got.push(r);
        }
    }
    if got.len() < 2 {
        return Ok(Outcome::Skip("fewer than two usable curvature probes".into()));
    }
    let mut r = Residual::default();
    for i in 0..got.len() {
        for j in i + 1..got.len() {
            r = r.join(Residual::diff(got[i], got[j]));
        }
    }
    value(r)
}

// Identities of the change

fn pq_relation(c: &Ctx) -> Result<Outcome> {
    value(c.cp()?.pq_relation()?)
}

fn pq_derivative(c: &Ctx) -> Result<Outcome> {
    value(c.cp()?.pq_derivative()?)
}

fn admissibility_forms(c: &Ctx) -> Result<Outcome> {
    value(c.cp()?.admissibility_forms()?)
}

fn main_bar_forms(c: &Ctx) -> Result<Outcome> {
    value(c.cp()?.main_bar_forms()?)
}

fn landsberg_bar_forms(c: &Ctx) -> Result<Outcome> {
    value(c.cp()?.landsberg_bar_forms()?)
}

fn main_bar_derivatives(c: &Ctx) -> Result<Outcome> {
    value(c.cp()?.main_bar_derivative_forms()?)
}

fn t_bar_forms(c: &Ctx) -> Result<Outcome> {
    value(c.cp()?.t_bar_forms()?)
}

fn curvature_bar_forms(c: &Ctx) -> Result<Outcome> {
    value(c.cp()?.curvature_bar_forms()?)
}

fn curvature_bar_frame(c: &Ctx) -> Result<Outcome> {
    value(c.cp()?.curvature_bar_frame_form()?)
}

fn douglas_antisymmetry(c: &Ctx) -> Result<Outcome> {
    value(c.cp()?.douglas_antisymmetry())
}

fn vertical_invariance(c: &Ctx) -> Result<Outcome> {
    let cp = c.cp()?;
    value(Residual::diff(
        cp.bar_va(&c.probe)?.value(),
        c.sp.v1(&c.probe)?.value(),
    ))
}

fn isotropic(c: &Ctx) -> Result<Outcome> {
    let cp = c.cp()?;
    if !cp.phi_is_isotropic()? {
        return Ok(Outcome::Skip("phi depends on y".into()));
    }
    value(join(&cp.isotropic_reduction()?))
}

fn metrizability_dm(c: &Ctx) -> Result<Outcome> {
    guard!(c.base_riemannian());
    guard!(c.barred_berwald());
    value(c.metr()?.dm)
}

fn metrizability_relation(c: &Ctx) -> Result<Outcome> {
    guard!(c.base_riemannian());
    guard!(c.barred_berwald());
    value(c.metr()?.defining_relation)
}

fn landsberg_branch(c: &Ctx) -> Result<Outcome> {
    let l = c.lands()?;
    if !c.holds(l.rho_eps_branch) {
        return Ok(Outcome::Skip("off the branch rho = eps".into()));
    }
    value(l.branch_formula)
}

// Oracles

fn oracle_frame(c: &Ctx) -> Result<Outcome> {
    let bf = c.cp()?.barred_frame()?;
    let fr = &c.fresh()?.frame;
    let a = [bf.ell_lo, bf.ell_hi, bf.m_lo, bf.m_hi];
    let b = [&fr.ell_lo, &fr.ell_hi, &fr.m_lo, &fr.m_hi].map(Clone::clone);
    oracle(&a.values(), &b.values())
}

fn oracle_main(c: &Ctx) -> Result<Outcome> {
    let v = c.cp()?.get("Ibar")?.value();
    oracle(&[v], &[c.fresh()?.main().value()])
}

fn oracle_spray(c: &Ctx) -> Result<Outcome> {
    oracle(&c.cp()?.spray_bar().values(), &c.fresh()?.spray.values())
}

fn oracle_connection(c: &Ctx) -> Result<Outcome> {
    oracle(&c.cp()?.barthel_bar()?.values(), &c.fresh()?.barthel.values())
}

fn oracle_berwald(c: &Ctx) -> Result<Outcome> {
    oracle(
        &c.cp()?.berwald_bar()?.values(),
        &c.fresh()?.berwald_connection()?.values(),
    )
}

fn oracle_curvature(c: &Ctx) -> Result<Outcome> {
    oracle(
        &c.cp()?.curvature_bar()?.values(),
        &c.fresh()?.berwald_curvature()?.values(),
    )
}

fn oracle_landsberg(c: &Ctx) -> Result<Outcome> {
    let v = c.cp()?.get("Jbar")?.value();
    oracle(&[v], &[c.fresh()?.landsberg()?.value()])
}

fn oracle_t(c: &Ctx) -> Result<Outcome> {
    oracle(&c.cp()?.t_bar()?.values(), &c.fresh()?.t_tensor()?.values())
}

fn oracle_douglas(c: &Ctx) -> Result<Outcome> {
    oracle(
        &[c.cp()?.douglas_bar().value()],
        &[c.fresh()?.douglas_bivector().value()],
    )
}

fn oracle_operators(c: &Ctx) -> Result<Outcome> {
    let cp = c.cp()?;
    let fresh = c.fresh()?;
    let f = &c.probe;
    let a = [cp.bar_va(f)?, cp.bar_vb(f)?, cp.bar_ha(f)?, cp.bar_hb(f)?];
    let b = [fresh.v1(f)?, fresh.v2(f)?, fresh.h1(f)?, fresh.h2(f)?];
    oracle(&a.values(), &b.values())
}

fn oracle_spray_derivative(c: &Ctx) -> Result<Outcome> {
    let cp = c.cp()?;
    let direct = c.sp.f.clone() * &c.fresh()?.spray_derivative(&c.probe)?;
    oracle(
        &[cp.spray_derivative_bar(&c.probe)?.value()],
        &[direct.value()],
    )
}

// Classes of the original metric

fn base_riemannian(c: &Ctx) -> Result<Outcome> {
    value(c.classes()?.riemannian)
}

fn base_landsberg(c: &Ctx) -> Result<Outcome> {
    value(c.classes()?.landsberg)
}

fn base_berwald(c: &Ctx) -> Result<Outcome> {
    value(c.classes()?.berwald)
}

fn base_t(c: &Ctx) -> Result<Outcome> {
    value(c.classes()?.t_condition)
}

fn base_douglas(c: &Ctx) -> Result<Outcome> {
    value(c.classes()?.douglas)
}

// Classes of the changed metric

fn same_spray(c: &Ctx) -> Result<Outcome> {
    oracle(&c.cp()?.spray_bar().values(), &c.sp.spray.values())
}

fn horizontally_constant(c: &Ctx) -> Result<Outcome> {
    let cp = c.cp()?;
    value(join(&[
        Residual::value(cp.get("phi,1")?.value()),
        Residual::value(cp.get("phi,2")?.value()),
    ]))
}

fn barred_berwald(c: &Ctx) -> Result<Outcome> {
    if c.base_riemannian()?.is_none() {
        let b = c.berwald()?;
        return value(b.r1.join(b.r2));
    }
    value(c.berwald()?.curvature_bar)
}

fn metrizable(c: &Ctx) -> Result<Outcome> {
    guard!(c.base_riemannian());
    guard!(c.barred_berwald());
    value(c.metr()?.phi_horizontal)
}

fn barred_t(c: &Ctx) -> Result<Outcome> {
    value(c.lands()?.t_bar)
}

fn barred_landsberg(c: &Ctx) -> Result<Outcome> {
    value(c.lands()?.landsberg_bar)
}

fn landsberg_criterion(c: &Ctx) -> Result<Outcome> {
    guard!(c.base_riemannian());
    let cp = c.cp()?;
    let drift = join(&[
        Residual::value(cp.get("phi;2,1")?.value()),
        Residual::value(cp.get("phi;2,2")?.value()),
    ]);
    if !c.holds(drift) {
        return Ok(Outcome::Skip("phi;2 is not horizontally constant here".into()));
    }
    value(cp.landsberg_criterion()?)
}

fn flat(c: &Ctx) -> Result<Outcome> {
    let f = c.flat()?;
    value(join(&[f.partials, f.p, f.q]))
}

fn flat_necessary(c: &Ctx) -> Result<Outcome> {
    value(c.flat()?.necessary)
}

fn douglas_direct(c: &Ctx) -> Result<Outcome> {
    let t = c.fresh()?.douglas_terms()?;
    value(Residual::of_terms(&t.map(|t| t.value())))
}

fn douglas_preserved(c: &Ctx) -> Result<Outcome> {
    guard!(c.base_douglas());
    value(c.doug()?.q)
}

fn douglas_berwald_base(c: &Ctx) -> Result<Outcome> {
    guard!(c.base_berwald());
    value(c.doug()?.berwald_base)
}

fn douglas_riemannian_base(c: &Ctx) -> Result<Outcome> {
    guard!(c.base_riemannian());
    value(c.doug()?.riemannian_base)
}

fn douglas_scalar(c: &Ctx) -> Result<Outcome> {
    match c.doug()?.scalar {
        Some(r) => value(r),
        None => Err(Error::NegativeRho(c.cp()?.rho.value() * c.cp()?.eps())),
    }
}

const fn check(
    id: &'static str,
    group: Group,
    conformal: bool,
    about: &'static str,
    eval: fn(&Ctx) -> Result<Outcome>,
) -> CheckDef {
    CheckDef {
        id,
        group,
        conformal,
        about,
        eval,
    }
}

use Group::{Class, Identity, Oracle};

pub static CHECKS: &[CheckDef] = &[
    check("identity.frame", Identity, false, "frame is orthonormal and rebuilds g", frame),
    check("identity.frame-derivatives", Identity, false, "vertical derivatives of the frame", frame_derivatives),
    check("identity.commutation", Identity, false, "commutation of h- and v-derivatives", commutation_formulas),
    check("identity.spray-partials", Identity, false, "partial derivatives through the spray", spray_partials),
    check("identity.horizontal-constancy", Identity, false, "delta F = 0 and spray homogeneity", horizontal),
    check("identity.spray-forms", Identity, false, "classical spray against frame form", spray_forms),
    check("identity.curvature-forms", Identity, false, "Berwald curvature against frame form", curvature_forms),
    check("identity.gauss-probes", Identity, false, "Gauss curvature is probe independent", gauss_probes),
    check("identity.pq-relation", Identity, true, "2 eps phi;2 Q + 2P = F^2 phi,1", pq_relation),
    check("identity.pq-derivative", Identity, true, "vertical derivative relation of P and Q", pq_derivative),
    check("identity.admissibility-forms", Identity, true, "admissibility expression equals 1/rho", admissibility_forms),
    check("identity.main-bar-forms", Identity, true, "two closed forms of Ibar", main_bar_forms),
    check("identity.landsberg-bar-forms", Identity, true, "three forms of Jbar", landsberg_bar_forms),
    check("identity.main-bar-derivatives", Identity, true, "barred derivatives of Ibar against closed forms", main_bar_derivatives),
    check("identity.t-bar-forms", Identity, true, "two forms of Tbar", t_bar_forms),
    check("identity.curvature-bar-forms", Identity, true, "Bbar by differentiation against psi, chi form", curvature_bar_forms),
    check("identity.curvature-bar-frame", Identity, true, "psi, chi form of Bbar against barred frame form", curvature_bar_frame),
    check("identity.douglas-antisymmetry", Identity, true, "Dbar^12 + Dbar^21 = 0", douglas_antisymmetry),
    check("identity.vertical-invariance", Identity, true, "f;a = f;1", vertical_invariance),
    check("identity.isotropic-reduction", Identity, true, "phi = phi(x) reduces to the isotropic change", isotropic),
    check("identity.metrizability-dm", Identity, true, "M^i_jk does not depend on y", metrizability_dm),
    check("identity.metrizability-relation", Identity, true, "defining relation of M^i_jk", metrizability_relation),
    check("identity.landsberg-branch", Identity, true, "Jbar on the branch rho = eps", landsberg_branch),
    check("oracle.frame", Oracle, true, "barred frame", oracle_frame),
    check("oracle.main-scalar", Oracle, true, "Ibar", oracle_main),
    check("oracle.spray", Oracle, true, "Gbar^i", oracle_spray),
    check("oracle.connection", Oracle, true, "Gbar^i_j", oracle_connection),
    check("oracle.berwald-connection", Oracle, true, "Gbar^i_jk", oracle_berwald),
    check("oracle.curvature", Oracle, true, "Bbar^i_jkr", oracle_curvature),
    check("oracle.landsberg", Oracle, true, "Jbar", oracle_landsberg),
    check("oracle.t-tensor", Oracle, true, "Tbar_ijkh", oracle_t),
    check("oracle.douglas", Oracle, true, "Dbar^12", oracle_douglas),
    check("oracle.operators", Oracle, true, "f;a f;b f,a f,b", oracle_operators),
    check("oracle.spray-derivative", Oracle, true, "F Sbar(f)", oracle_spray_derivative),
    check("class.base.riemannian", Class, false, "F is Riemannian: |I|", base_riemannian),
    check("class.base.landsberg", Class, false, "F is Landsberg: |I,1|", base_landsberg),
    check("class.base.berwald", Class, false, "F is Berwald: |I,1|, |I,2|", base_berwald),
    check("class.base.t-condition", Class, false, "F satisfies the T-condition: |I;2|", base_t),
    check("class.base.douglas", Class, false, "F is Douglas", base_douglas),
    check("class.barred.same-spray", Class, true, "Gbar = G", same_spray),
    check("class.barred.horizontally-constant", Class, true, "phi,1 = phi,2 = 0", horizontally_constant),
    check("class.barred.berwald", Class, true, "Fbar is Berwald", barred_berwald),
    check("class.barred.metrizable", Class, true, "Fbar is Riemann metrizable by F", metrizable),
    check("class.barred.t-condition", Class, true, "Fbar satisfies the T-condition: |Ibar;2|", barred_t),
    check("class.barred.landsberg", Class, true, "Fbar is Landsberg: |Ibar,a|", barred_landsberg),
    check("class.barred.landsberg-criterion", Class, true, "phi;2 phi,1 - phi,2, Riemannian F", landsberg_criterion),
    check("class.barred.flat", Class, true, "Fbar is Minkowski in these coordinates", flat),
    check("class.barred.flat-necessary", Class, true, "necessary condition for flatness", flat_necessary),
    check("class.barred.douglas", Class, true, "Fbar is Douglas, computed directly", douglas_direct),
    check("class.barred.douglas-preserved", Class, true, "|Q|, Douglas F", douglas_preserved),
    check("class.barred.douglas-berwald-base", Class, true, "3 psi - eps chi;2 - I chi, Berwald F", douglas_berwald_base),
    check("class.barred.douglas-riemannian-base", Class, true, "9 eps Q + 10 Q;2;2 + eps Q;2;2;2;2, Riemannian F", douglas_riemannian_base),
    check("class.barred.douglas-scalar", Class, true, "6 Ibar,a + eps Ibar_d;b + 2 Ibar Ibar_d", douglas_scalar),
];

pub fn find(id: &str) -> Option<&'static CheckDef> {
    CHECKS.iter().find(|c| c.id == id)
}

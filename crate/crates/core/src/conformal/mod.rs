//! The change `F -> Fbar = exp(phi) F` with a direction-dependent factor
//! `phi` that is 0-homogeneous in `y`.
//!
//! Every barred object is computed from the unbarred geometry through the
//! transformation formulas. Building `Fbar` as a fresh [`Surface`] is kept
//! for testing the formulas against.

mod barred;
mod checks;
mod sample;

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;

use crate::chain::{self, Op};
use crate::dsl::MetricDef;
use crate::error::{Error, Result, ResultExt};
use crate::field::{self, Field};
use crate::geometry::{Surface, SurfacePoint};
use crate::jet::{Jet, Point};

pub use barred::BarredFrame;
pub use checks::{
    BerwaldConditions, DouglasChecks, FlatnessChecks, LandsbergChecks, Metrizability,
    PointIdentities,
};
pub use sample::BarredSample;

/// `|value|` below which the admissibility expression or the pole of `rho`
/// counts as zero.
const ADMISSIBILITY_FLOOR: f64 = 1e-9;

/// A surface together with a conformal factor.
#[derive(Clone)]
pub struct Conformal {
    base: Surface,
    phi: Field,
}

impl fmt::Debug for Conformal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Conformal")
            .field("base", &self.base)
            .field("phi", &self.phi.label())
            .finish()
    }
}

impl Conformal {
    pub fn new(base: Surface, phi: Field) -> Conformal {
        Conformal { base, phi }
    }

    /// The metric file must define `phi`.
    pub fn from_metric(metric: &MetricDef) -> Result<Conformal> {
        let phi = metric.phi.clone().ok_or_else(|| {
            Error::Config(format!("metric `{}` does not define phi", metric.name))
        })?;
        Ok(Conformal::new(Surface::from_metric(metric), field::from_def(phi)))
    }

    pub fn base(&self) -> &Surface {
        &self.base
    }

    pub fn phi(&self) -> &Field {
        &self.phi
    }

    /// `Fbar = exp(phi) F` as an independent surface on the same domain.
    pub fn barred_surface(&self) -> Surface {
        let f = field::conformal(self.base.field().clone(), self.phi.clone());
        let s = Surface::new(format!("{} (changed)", self.base.name()), f);
        match self.base.domain() {
            Some(d) => s.with_domain(d.clone()),
            None => s,
        }
    }

    pub fn at(&self, point: &Point, degree: usize) -> Result<ConformalPoint> {
        let base = self.base.at(point, degree)?;
        let phi = base.eval(self.phi.as_ref())?;
        ConformalPoint::new(base, phi)
    }
}

/// `sigma`, `rho`, `P`, `Q` and everything derived from them at one point.
///
/// Derived scalars are addressed by name (`"P;2;2"`, `"phi;2,1"`) and
/// cached, so each chain is expanded once per point.
#[derive(Debug)]
pub struct ConformalPoint {
    pub base: SurfacePoint,
    pub phi: Jet,
    /// `exp(phi)`.
    pub e_phi: Jet,
    pub sigma: Jet,
    pub rho: Jet,
    pub p: Jet,
    pub q: Jet,
    /// `F^2 (dd phi + dphi dphi)(m, m) + eps`, the admissibility expression.
    pub admissibility: Jet,
    cache: RefCell<HashMap<String, Jet>>,
}

impl ConformalPoint {
    pub fn new(base: SurfacePoint, phi: Jet) -> Result<ConformalPoint> {
        let eps = base.eps();
        let f = &base.f;
        let l = f * f;
        let fr = &base.frame;

        let grad = base.vgrad(&phi).within("admissibility")?;
        let hess: [[Jet; 2]; 2] = [
            [grad[0].dy(0)?, grad[0].dy(1)?],
            [grad[1].dy(0)?, grad[1].dy(1)?],
        ];
        let mut quad = hess[0][0].zero_like();
        for i in 0..2 {
            for j in 0..2 {
                let h = &hess[i][j] + &grad[i] * &grad[j];
                quad = quad + h * &fr.m_hi[i] * &fr.m_hi[j];
            }
        }
        let admissibility = (&l * &quad).add_scalar(eps);

        let pv2 = base.v2(&phi).within("phi;2")?;
        let pv2v2 = base.v2(&pv2).within("phi;2;2")?;
        let sigma = &pv2v2 + &pv2 * base.main() * eps + &pv2 * &pv2 * 2.0;
        let pole = (&sigma - &pv2 * &pv2).add_scalar(eps);

        if admissibility.value().abs() < ADMISSIBILITY_FLOOR {
            return Err(Error::Inadmissible(format!(
                "F^2 (dd phi + dphi dphi)(m, m) + eps = {:e}",
                admissibility.value()
            )));
        }
        if pole.value().abs() < ADMISSIBILITY_FLOOR {
            return Err(Error::Inadmissible(format!(
                "sigma + eps - phi;2^2 = {:e}",
                pole.value()
            )));
        }
        let rho = pole.recip()?;

        let ph1 = base.h1(&phi).within("phi,1")?;
        let ph2 = base.h2(&phi).within("phi,2")?;
        let ph1v2 = base.v2(&ph1).within("phi,1;2")?;
        let bracket = &pv2 * &ph1 + &ph1v2 - &ph2 * 2.0;
        let q = &rho * &l * &bracket * (0.5 * eps);
        let p = -(&rho * &l * &pv2 * &bracket) * 0.5 + &l * &ph1 * 0.5;

        let e_phi = phi.exp();
        let cache = HashMap::from([
            ("phi;2".to_string(), pv2),
            ("phi;2;2".to_string(), pv2v2),
            ("phi,1".to_string(), ph1),
            ("phi,2".to_string(), ph2),
            ("phi,1;2".to_string(), ph1v2),
        ]);
        Ok(ConformalPoint {
            base,
            phi,
            e_phi,
            sigma,
            rho,
            p,
            q,
            admissibility,
            cache: RefCell::new(cache),
        })
    }

    pub fn eps(&self) -> f64 {
        self.base.eps()
    }

    pub fn f(&self) -> &Jet {
        &self.base.f
    }

    /// `sigma + eps - phi;2^2`, the reciprocal of `rho`, computed afresh.
    pub fn rho_pole(&self) -> Result<Jet> {
        let pv2 = self.get("phi;2")?;
        Ok((&self.sigma - &pv2 * &pv2).add_scalar(self.eps()))
    }

    /// `sqrt(eps rho)`, required by the barred frame.
    pub fn srho(&self) -> Result<Jet> {
        if let Some(v) = self.cache.borrow().get("srho") {
            return Ok(v.clone());
        }
        let er = self.rho.scale(self.eps());
        if er.value() <= 0.0 {
            return Err(Error::NegativeRho(er.value()));
        }
        let v = er.sqrt()?;
        self.cache.borrow_mut().insert("srho".into(), v.clone());
        Ok(v)
    }

    /// `exp(-phi)`.
    pub fn e_mphi(&self) -> Jet {
        self.phi.scale(-1.0).exp()
    }

    /// A named scalar with its derivative chain, e.g. `Q;2;2;2;2`.
    ///
    /// Bases: `F phi sigma rho P Q I I_2 J` from the original metric and
    /// `Ibar Ibar_d Jbar psi chi` of the changed one. Operators `;1 ;2 ,1 ,2`
    /// use the original metric, `;a ;b ,a ,b` the changed one.
    pub fn get(&self, name: &str) -> Result<Jet> {
        if let Some(v) = self.cache.borrow().get(name) {
            return Ok(v.clone());
        }
        let v = match chain::pop(name)? {
            None => self.base_scalar(name)?,
            Some((prefix, op)) => {
                let inner = self.get(&prefix)?;
                self.apply(op, &inner).within(name)?
            }
        };
        self.cache.borrow_mut().insert(name.to_string(), v.clone());
        Ok(v)
    }

    fn base_scalar(&self, name: &str) -> Result<Jet> {
        Ok(match name.trim() {
            "F" => self.f().clone(),
            "phi" => self.phi.clone(),
            "sigma" => self.sigma.clone(),
            "rho" => self.rho.clone(),
            "P" => self.p.clone(),
            "Q" => self.q.clone(),
            "I" => self.base.main().clone(),
            "I_2" => self.base.i2()?,
            "J" => self.base.landsberg()?,
            "Ibar" => self.main_bar()?,
            "Ibar_d" => self.main_bar_d()?,
            "Jbar" => self.landsberg_bar()?,
            "psi" => self.psi()?,
            "chi" => self.chi()?,
            other => return Err(Error::Config(format!("unknown scalar `{other}`"))),
        })
    }

    pub fn apply(&self, op: Op, f: &Jet) -> Result<Jet> {
        match op {
            Op::Va => self.bar_va(f),
            Op::Vb => self.bar_vb(f),
            Op::Ha => self.bar_ha(f),
            Op::Hb => self.bar_hb(f),
            _ => self.base.apply(op, f),
        }
    }
}

#[cfg(test)]
mod tests;

//! Residuals of the identities and classification criteria for the
//! changed metric at one point.

use serde::Serialize;

use super::ConformalPoint;
use crate::error::{Error, Result};
use crate::geometry::{dot, Components};
use crate::jet::Jet;
use crate::residual::Residual;

fn terms(ts: &[Jet]) -> Residual {
    let v: Vec<f64> = ts.iter().map(|t| t.value()).collect();
    Residual::of_terms(&v)
}

fn tensor_size(values: &[f64]) -> Residual {
    values
        .iter()
        .fold(Residual::default(), |acc, v| acc.join(Residual::value(*v)))
}

/// Identities every admissible change satisfies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PointIdentities {
    /// `2 eps phi;2 Q + 2P - F^2 phi,1`.
    pub pq_relation: Residual,
    /// `phi;2 P + P;2 + eps phi;2 Q;2 - (I phi;2 + 1) Q - F^2 phi,2`.
    pub pq_derivative: Residual,
    /// The admissibility expression against `sigma + eps - phi;2^2`.
    pub admissibility_forms: Residual,
    /// The two closed forms of `Ibar`.
    pub main_bar_forms: Residual,
    /// The closed forms of `Jbar` against each other and the general form.
    pub landsberg_bar_forms: Residual,
    /// `(Ibar;b, Ibar,a, Ibar,b)`: barred operators applied to `Ibar`
    /// against their closed forms.
    pub main_bar_derivatives: Residual,
    /// The two forms of `Tbar`.
    pub t_bar_forms: Residual,
    /// `Bbar` by differentiating `Gbar^i_jk` against the `psi`, `chi` form.
    pub curvature_bar_forms: Residual,
    /// The `psi`, `chi` form of `Bbar` against the barred-frame form built
    /// from `Ibar,a` and `Ibar_d`.
    pub curvature_bar_frame: Residual,
    /// `Dbar^12 + Dbar^21`.
    pub douglas_antisymmetry: Residual,
}

/// Conditions for the changed metric to be Berwald.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BerwaldConditions {
    /// `|I|` of the original metric.
    pub base_main: Residual,
    /// `-3 eps Q - 3 Q;2;2 + eps P;2 + P;2;2;2`.
    pub r1: Residual,
    /// `3P + 3 eps P;2;2 + eps Q;2 + Q;2;2;2`.
    pub r2: Residual,
    /// Largest component of `Bbar`.
    pub curvature_bar: Residual,
}

/// Whether the changed Berwald metric shares its connection with a
/// Riemannian metric.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Metrizability {
    /// Largest `|dM^i_jk / dy^r|`.
    pub dm: Residual,
    /// `max(|phi,1|, |phi,2|)`.
    pub phi_horizontal: Residual,
    /// `F^2 delta_i(e^(2 phi)) - y^k M^j_ik dot-d_j Fbar^2`.
    pub defining_relation: Residual,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LandsbergChecks {
    /// `|Ibar;2|`: the changed metric satisfies the T-condition iff zero.
    pub t_bar: Residual,
    /// `|Ibar,a|`: Landsberg iff zero.
    pub landsberg_bar: Residual,
    /// `|sigma - phi;2^2|`: zero on the branch `rho = eps`.
    pub rho_eps_branch: Residual,
    /// `F Jbar` against `F J + 2 eps F^2 phi;2,1 - 2 eps Q (I;2 + 2 eps phi;2;2)`,
    /// meaningful on the branch only.
    pub branch_formula: Residual,
    /// `phi;2 phi,1 - phi,2`.
    pub riemannian_criterion: Residual,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FlatnessChecks {
    /// `F d_j phi + d_j F`.
    pub partials: Residual,
    /// `P + y^r d_r F / 2`.
    pub p: Residual,
    /// `Q + F^2 (dot-d_2 d_1 F - dot-d_1 d_2 F) / 2h`.
    pub q: Residual,
    /// `F^2 phi,1 + 2 phi;2 G^k m_k + 2 G^k l_k`, necessary for flatness.
    pub necessary: Residual,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DouglasChecks {
    /// `|Q|`: a Douglas metric stays Douglas iff zero.
    pub q: Residual,
    /// `3 psi - eps chi;2 - I chi`, for a Berwald base.
    pub berwald_base: Residual,
    /// `9 eps Q + 10 Q;2;2 + eps Q;2;2;2;2`, for a Riemannian base.
    pub riemannian_base: Residual,
    /// `6 Ibar,a + eps Ibar_d;b + 2 Ibar Ibar_d`. `None` where `eps rho < 0`
    /// and the changed frame does not exist.
    pub scalar: Option<Residual>,
}

impl ConformalPoint {
    /// `2 eps phi;2 Q + 2P - F^2 phi,1`.
    pub fn pq_relation(&self) -> Result<Residual> {
        let eps = self.eps();
        let l = self.f() * self.f();
        let pv2 = self.get("phi;2")?;
        Ok(terms(&[
            &pv2 * &self.q * (2.0 * eps),
            &self.p * 2.0,
            -(&l * &self.get("phi,1")?),
        ]))
    }

    /// `phi;2 P + P;2 + eps phi;2 Q;2 - (I phi;2 + 1) Q - F^2 phi,2`.
    pub fn pq_derivative(&self) -> Result<Residual> {
        let eps = self.eps();
        let l = self.f() * self.f();
        let pv2 = self.get("phi;2")?;
        Ok(terms(&[
            &pv2 * &self.p,
            self.get("P;2")?,
            &pv2 * &self.get("Q;2")? * eps,
            -((self.base.main() * &pv2).add_scalar(1.0) * &self.q),
            -(&l * &self.get("phi,2")?),
        ]))
    }

    pub fn admissibility_forms(&self) -> Result<Residual> {
        Ok(Residual::diff(self.admissibility.value(), self.rho_pole()?.value()))
    }

    pub fn main_bar_forms(&self) -> Result<Residual> {
        Ok(Residual::diff(self.main_bar()?.value(), self.main_bar_cubic()?.value()))
    }

    pub fn landsberg_bar_forms(&self) -> Result<Residual> {
        let general = self.landsberg_bar()?.value();
        let sq = self.landsberg_bar_sqrt()?.value();
        let cubic = self.landsberg_bar_cubic()?.value();
        Ok(Residual::diff(sq, cubic).join(Residual::diff(general, sq)))
    }

    pub fn main_bar_derivative_forms(&self) -> Result<Residual> {
        let ops = [self.get("Ibar;b")?, self.get("Ibar,a")?, self.get("Ibar,b")?];
        let closed = self.main_bar_derivatives()?;
        Ok(Residual::diff_all(&ops.values(), &closed.values()))
    }

    pub fn t_bar_forms(&self) -> Result<Residual> {
        Ok(Residual::diff_all(
            &self.t_bar()?.values(),
            &self.t_bar_from_t()?.values(),
        ))
    }

    pub fn curvature_bar_forms(&self) -> Result<Residual> {
        Ok(Residual::diff_all(
            &self.curvature_bar()?.values(),
            &self.curvature_bar_psi_chi()?.values(),
        ))
    }

    pub fn curvature_bar_frame_form(&self) -> Result<Residual> {
        Ok(Residual::diff_all(
            &self.curvature_bar_psi_chi()?.values(),
            &self.curvature_bar_frame()?.values(),
        ))
    }

    pub fn douglas_antisymmetry(&self) -> Residual {
        terms(&[self.douglas_bar(), self.douglas_bar_21()])
    }

    pub fn identities(&self) -> Result<PointIdentities> {
        Ok(PointIdentities {
            pq_relation: self.pq_relation()?,
            pq_derivative: self.pq_derivative()?,
            admissibility_forms: self.admissibility_forms()?,
            main_bar_forms: self.main_bar_forms()?,
            landsberg_bar_forms: self.landsberg_bar_forms()?,
            main_bar_derivatives: self.main_bar_derivative_forms()?,
            t_bar_forms: self.t_bar_forms()?,
            curvature_bar_forms: self.curvature_bar_forms()?,
            curvature_bar_frame: self.curvature_bar_frame_form()?,
            douglas_antisymmetry: self.douglas_antisymmetry(),
        })
    }

    /// `phi;2 phi,1 - phi,2`.
    pub fn landsberg_criterion(&self) -> Result<Residual> {
        let pv2 = self.get("phi;2")?;
        Ok(terms(&[&pv2 * &self.get("phi,1")?, -self.get("phi,2")?]))
    }

    pub fn berwald_conditions(&self) -> Result<BerwaldConditions> {
        let eps = self.eps();
        let q = &self.q;
        let r1 = terms(&[
            q * (-3.0 * eps),
            self.get("Q;2;2")? * -3.0,
            self.get("P;2")? * eps,
            self.get("P;2;2;2")?,
        ]);
        let r2 = terms(&[
            &self.p * 3.0,
            self.get("P;2;2")? * (3.0 * eps),
            self.get("Q;2")? * eps,
            self.get("Q;2;2;2")?,
        ]);
        Ok(BerwaldConditions {
            base_main: Residual::value(self.base.main().value()),
            r1,
            r2,
            curvature_bar: tensor_size(&self.curvature_bar()?.values()),
        })
    }

    pub fn metrizability(&self) -> Result<Metrizability> {
        let m = self.symmetric_tensor()?;
        let mut dm = Residual::default();
        for row in m.iter().flatten().flatten() {
            for r in 0..2 {
                dm = dm.join(Residual::value(row.dy(r)?.value()));
            }
        }
        let ph1 = self.get("phi,1")?.value();
        let ph2 = self.get("phi,2")?.value();

        // F^2 delta_i(e^(2 phi)) against y^k M^j_ik dot-d_j Fbar^2
        let base = &self.base;
        let l = base.f.clone() * &base.f;
        let e2 = self.phi.scale(2.0).exp();
        let lbar = &e2 * &l;
        let lhs = base.delta(&e2)?.map(|d| &l * &d);
        let grad = base.vgrad(&lbar)?;
        let y = base.ys();
        let rhs: [Jet; 2] = std::array::from_fn(|i| {
            let mut acc = l.zero_like();
            for (j, mj) in m.iter().enumerate() {
                for (k, yk) in y.iter().enumerate() {
                    acc = acc + &mj[i][k] * yk * &grad[j];
                }
            }
            acc
        });
        Ok(Metrizability {
            dm,
            phi_horizontal: Residual::value(ph1.abs().max(ph2.abs())),
            defining_relation: Residual::diff_all(&lhs.values(), &rhs.values()),
        })
    }

    pub fn landsberg_checks(&self) -> Result<LandsbergChecks> {
        let eps = self.eps();
        let f = self.f();
        let pv2 = self.get("phi;2")?;
        let fj_bar = f * &self.landsberg_bar()?;
        let branch = terms(&[
            f * &self.base.landsberg()?,
            f * f * &self.get("phi;2,1")? * (2.0 * eps),
            -(&self.q * &(self.get("I;2")? + self.get("phi;2;2")? * (2.0 * eps)) * (2.0 * eps)),
            -fj_bar,
        ]);
        Ok(LandsbergChecks {
            t_bar: Residual::value(self.get("Ibar;2")?.value()),
            landsberg_bar: Residual::value(self.get("Ibar,a")?.value()),
            rho_eps_branch: terms(&[self.sigma.clone(), -(&pv2 * &pv2)]),
            branch_formula: branch,
            riemannian_criterion: self.landsberg_criterion()?,
        })
    }

    pub fn flatness_checks(&self) -> Result<FlatnessChecks> {
        let base = &self.base;
        let fr = &base.frame;
        let f = &base.f;
        let mut partials = Residual::default();
        for j in 0..2 {
            partials = partials.join(terms(&[f * &self.phi.dx(j)?, f.dx(j)?]));
        }
        let ys = base.ys();
        let fx = [f.dx(0)?, f.dx(1)?];
        let p = terms(&[self.p.clone(), dot(&ys, &fx) * 0.5]);
        let cross = (fr.ell_lo[1].dx(0)? - fr.ell_lo[0].dx(1)?) * f * f * &fr.h.recip()?;
        let q = terms(&[self.q.clone(), cross * 0.5]);
        let pv2 = self.get("phi;2")?;
        let necessary = terms(&[
            f * f * &self.get("phi,1")?,
            &pv2 * &dot(&base.spray, &fr.m_lo) * 2.0,
            dot(&base.spray, &fr.ell_lo) * 2.0,
        ]);
        Ok(FlatnessChecks {
            partials,
            p,
            q,
            necessary,
        })
    }

    pub fn douglas_checks(&self) -> Result<DouglasChecks> {
        let eps = self.eps();
        let chi = self.chi()?;
        let berwald_base = terms(&[
            self.psi()? * 3.0,
            self.get("chi;2")? * -eps,
            -(self.base.main() * &chi),
        ]);
        let riemannian_base = terms(&[
            &self.q * (9.0 * eps),
            self.get("Q;2;2")? * 10.0,
            self.get("Q;2;2;2;2")? * eps,
        ]);
        let scalar = match self.srho() {
            Err(Error::NegativeRho(_)) => None,
            _ => {
                let ibar = self.get("Ibar")?;
                let id = self.get("Ibar_d")?;
                Some(terms(&[
                    self.get("Ibar,a")? * 6.0,
                    self.get("Ibar_d;b")? * eps,
                    &ibar * &id * 2.0,
                ]))
            }
        };
        Ok(DouglasChecks {
            q: Residual::value(self.q.value()),
            berwald_base,
            riemannian_base,
            scalar,
        })
    }

    /// Whether `phi` is a function of position only. Exact: the jet of such a
    /// field has no `y` coefficients at all.
    pub fn phi_is_isotropic(&self) -> Result<bool> {
        Ok((0..2).all(|i| {
            self.phi
                .dy(i)
                .map(|d| d.coeffs().iter().all(|c| *c == 0.0))
                .unwrap_or(false)
        }))
    }

    /// For `phi = phi(x)`: `phi;2`, `sigma`, `rho - eps`, `Ibar - I`,
    /// `Q + F^2 phi,2 / 2`, `P - F^2 phi,1 / 2` and
    /// `Ibar,a - e^-phi (I,1 + eps phi,2 I;2)`.
    pub fn isotropic_reduction(&self) -> Result<[Residual; 7]> {
        let eps = self.eps();
        let l = self.f() * self.f();
        let ph1 = self.get("phi,1")?;
        let ph2 = self.get("phi,2")?;
        let reduced = self.e_mphi() * &(self.get("I,1")? + &ph2 * &self.get("I;2")? * eps);
        Ok([
            Residual::value(self.get("phi;2")?.value()),
            Residual::value(self.sigma.value()),
            Residual::diff(self.rho.value(), eps),
            Residual::diff(self.get("Ibar")?.value(), self.base.main().value()),
            terms(&[self.q.clone(), &l * &ph2 * 0.5]),
            terms(&[self.p.clone(), -(&l * &ph1 * 0.5)]),
            Residual::diff(self.get("Ibar,a")?.value(), reduced.value()),
        ])
    }
}

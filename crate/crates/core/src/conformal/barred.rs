//! Barred objects from the transformation formulas.

use super::ConformalPoint;
use crate::error::{Error, Result, ResultExt};
use crate::geometry::{Mat2, Tensor3, Tensor4, Vec2};
use crate::jet::Jet;

/// Relative tolerance of the guard between two formulas for the same
/// barred object. Tests hold the formulas to far tighter bounds; the guard
/// only catches gross implementation errors at run time.
const FORMULA_GUARD: f64 = 1e-6;

fn guard(what: &'static str, a: &Jet, b: &Jet) -> Result<()> {
    let (x, y) = (a.value(), b.value());
    if !((x - y).abs() <= FORMULA_GUARD * x.abs().max(y.abs()).max(1.0)) {
        return Err(Error::FormulaMismatch {
            what,
            first: x,
            second: y,
        });
    }
    Ok(())
}

fn map2(f: impl Fn(usize) -> Jet) -> Vec2 {
    std::array::from_fn(f)
}

fn map4(f: impl Fn(usize, usize, usize, usize) -> Jet) -> Tensor4 {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| std::array::from_fn(|k| std::array::from_fn(|r| f(i, j, k, r))))
    })
}

/// The modified Berwald frame of the changed metric.
#[derive(Debug, Clone)]
pub struct BarredFrame {
    pub ell_lo: Vec2,
    pub ell_hi: Vec2,
    pub m_lo: Vec2,
    pub m_hi: Vec2,
}

impl ConformalPoint {
    /// `lbar_i = e^phi (l_i + phi;2 m_i)`, `lbar^i = e^-phi l^i`,
    /// `mbar_i = e^phi m_i / sqrt(eps rho)`,
    /// `mbar^i = e^-phi sqrt(eps rho) (m^i - eps phi;2 l^i)`.
    pub fn barred_frame(&self) -> Result<BarredFrame> {
        let fr = &self.base.frame;
        let eps = self.eps();
        let pv2 = self.get("phi;2")?;
        let srho = self.srho()?;
        let em = self.e_mphi();
        let ep_over = &self.e_phi * &srho.recip()?;
        let em_srho = &em * &srho;
        Ok(BarredFrame {
            ell_lo: map2(|i| &self.e_phi * &(&fr.ell_lo[i] + &pv2 * &fr.m_lo[i])),
            ell_hi: map2(|i| &em * &fr.ell_hi[i]),
            m_lo: map2(|i| &ep_over * &fr.m_lo[i]),
            m_hi: map2(|i| &em_srho * &(&fr.m_hi[i] - &pv2 * &fr.ell_hi[i] * eps)),
        })
    }

    /// `Ibar = sqrt(eps rho) (I + 2 eps phi;2 - (eps/2) rho;2 / rho)`.
    pub fn main_bar(&self) -> Result<Jet> {
        let eps = self.eps();
        let rv2 = self.get("rho;2")?;
        let inner = self.base.main() + &self.get("phi;2")? * (2.0 * eps)
            - &rv2 * &self.rho.recip()? * (0.5 * eps);
        let v = &self.srho()? * &inner;
        guard("Ibar", &v, &self.main_bar_cubic()?)?;
        Ok(v)
    }

    /// `Ibar = (eps rho)^(3/2) (I (1 + eps sigma) + sigma;2 / 2 + phi;2 (sigma + 2 eps))`.
    pub fn main_bar_cubic(&self) -> Result<Jet> {
        let eps = self.eps();
        let srho = self.srho()?;
        let s = &self.sigma;
        let inner = self.base.main() * &(s * eps).add_scalar(1.0)
            + self.get("sigma;2")? * 0.5
            + &self.get("phi;2")? * &s.add_scalar(2.0 * eps);
        Ok(&srho * &srho * &srho * &inner)
    }

    /// `I + 2 eps phi;2 + (eps/2) rho;2 / rho`.
    fn x_plus(&self) -> Result<Jet> {
        let eps = self.eps();
        Ok(self.base.main()
            + &self.get("phi;2")? * (2.0 * eps)
            + &self.get("rho;2")? * &self.rho.recip()? * (0.5 * eps))
    }

    /// `Gbar^i = G^i + Q m^i + P l^i`.
    pub fn spray_bar(&self) -> Vec2 {
        let fr = &self.base.frame;
        map2(|i| &self.base.spray[i] + &self.q * &fr.m_hi[i] + &self.p * &fr.ell_hi[i])
    }

    /// `Gbar^i_j = G^i_j + (1/F){2P l^i l_j + (P;2 - Q) l^i m_j + 2Q l_j m^i
    /// + (eps P + Q;2 - eps I Q) m^i m_j}`.
    pub fn barthel_bar(&self) -> Result<Mat2> {
        let fr = &self.base.frame;
        let eps = self.eps();
        let finv = self.f().recip()?;
        let (p, q) = (&self.p, &self.q);
        let a = p * 2.0;
        let b = self.get("P;2")? - q;
        let c = q * 2.0;
        let d = p * eps + self.get("Q;2")? - self.base.main() * q * eps;
        let mut out: Mat2 = self.base.barthel.clone();
        for i in 0..2 {
            for j in 0..2 {
                let corr = &a * &fr.ell_hi[i] * &fr.ell_lo[j]
                    + &b * &fr.ell_hi[i] * &fr.m_lo[j]
                    + &c * &fr.ell_lo[j] * &fr.m_hi[i]
                    + &d * &fr.m_hi[i] * &fr.m_lo[j];
                out[i][j] = &out[i][j] + &corr * &finv;
            }
        }
        Ok(out)
    }

    /// The correction `Gbar^i_jk - G^i_jk`. With `with_main = false` every
    /// term carrying `I` or its derivatives is dropped, which is the
    /// symmetric tensor `M^i_jk` of a Riemannian base.
    fn connection_shift(&self, with_main: bool) -> Result<Tensor3> {
        let fr = &self.base.frame;
        let eps = self.eps();
        let (p, q) = (&self.p, &self.q);
        let zero = p.zero_like();
        let (i0, iv2) = if with_main {
            (self.base.main().clone(), self.get("I;2")?)
        } else {
            (zero.clone(), zero.clone())
        };
        let pv2 = self.get("P;2")?;
        let pv22 = self.get("P;2;2")?;
        let qv2 = self.get("Q;2")?;
        let qv22 = self.get("Q;2;2")?;

        let ll = [p * 2.0, q * 2.0];
        let lm = [&pv2 - q, p * eps + &qv2 - &i0 * q * eps];
        let mm = [
            p * eps + &pv22 - &qv2 * 2.0 + &i0 * &pv2 * eps,
            &pv2 * (2.0 * eps) + q * eps + &qv22 - &iv2 * q * eps - &i0 * &qv2 * eps,
        ];
        let f2inv = self.f().powi(-2)?;
        let up = |c: &[Jet; 2], i: usize| &c[0] * &fr.ell_hi[i] + &c[1] * &fr.m_hi[i];
        let (l, m) = (&fr.ell_lo, &fr.m_lo);
        Ok(std::array::from_fn(|i| {
            let (cll, clm, cmm) = (up(&ll, i), up(&lm, i), up(&mm, i));
            std::array::from_fn(|j| {
                std::array::from_fn(|k| {
                    let v = &cll * &l[j] * &l[k]
                        + &clm * &(&l[j] * &m[k] + &l[k] * &m[j])
                        + &cmm * &m[j] * &m[k];
                    v * &f2inv
                })
            })
        }))
    }

    /// `Gbar^i_jk`, indexed `[i][j][k]`.
    pub fn berwald_bar(&self) -> Result<Tensor3> {
        let shift = self.connection_shift(true)?;
        let base = self.base.berwald_connection()?;
        Ok(std::array::from_fn(|i| {
            std::array::from_fn(|j| std::array::from_fn(|k| &base[i][j][k] + &shift[i][j][k]))
        }))
    }

    /// `M^i_jk`: the difference of the Berwald connections when the base is
    /// Riemannian.
    pub fn symmetric_tensor(&self) -> Result<Tensor3> {
        self.connection_shift(false)
    }

    /// `Bbar^i_jkr = dGbar^i_jk / dy^r`.
    pub fn curvature_bar(&self) -> Result<Tensor4> {
        let conn = self.berwald_bar()?;
        let mut out = Vec::with_capacity(16);
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for r in 0..2 {
                        out.push(conn[i][j][k].dy(r).within("Bbar")?);
                    }
                }
            }
        }
        Ok(map4(|i, j, k, r| out[8 * i + 4 * j + 2 * k + r].clone()))
    }

    /// `Bbar = B + (1/F)(psi l^i + chi m^i) m_j m_k m_r`.
    pub fn curvature_bar_psi_chi(&self) -> Result<Tensor4> {
        let fr = &self.base.frame;
        let b = self.base.berwald_curvature_frame()?;
        let finv = self.f().recip()?;
        let (psi, chi) = (self.psi()?, self.chi()?);
        let lead = map2(|i| (&psi * &fr.ell_hi[i] + &chi * &fr.m_hi[i]) * &finv);
        let m = &fr.m_lo;
        Ok(map4(|i, j, k, r| &b[i][j][k][r] + &lead[i] * &m[j] * &m[k] * &m[r]))
    }

    /// `Fbar Bbar = (-2 Ibar,a lbar^i + Ibar_d mbar^i) mbar_j mbar_k mbar_r`.
    pub fn curvature_bar_frame(&self) -> Result<Tensor4> {
        let bf = self.barred_frame()?;
        let fbar_inv = (&self.e_phi * self.f()).recip()?;
        let iha = self.get("Ibar,a")?;
        let id = self.main_bar_d()?;
        let lead = map2(|i| (&iha * &bf.ell_hi[i] * -2.0 + &id * &bf.m_hi[i]) * &fbar_inv);
        let m = &bf.m_lo;
        Ok(map4(|i, j, k, r| &lead[i] * &m[j] * &m[k] * &m[r]))
    }

    /// `F^2 psi = (-3 + I;2) eps Q + (1 + I;2 + 2 eps I^2) eps P;2 + P;2;2;2
    /// - 3 Q;2;2 + 3 eps I P;2;2 - 3 eps I Q;2 + 2 I P`.
    pub fn psi(&self) -> Result<Jet> {
        let eps = self.eps();
        let i = self.base.main();
        let iv2 = self.get("I;2")?;
        let t = iv2.add_scalar(-3.0) * &self.q * eps
            + (&iv2 + i * i * (2.0 * eps)).add_scalar(1.0) * &self.get("P;2")? * eps
            + self.get("P;2;2;2")?
            - self.get("Q;2;2")? * 3.0
            + i * &self.get("P;2;2")? * (3.0 * eps)
            - i * &self.get("Q;2")? * (3.0 * eps)
            + i * &self.p * 2.0;
        Ok(t * &self.f().powi(-2)?)
    }

    /// `F^2 chi = 3P - (I + eps I;2;2 + I I;2) Q - (2 eps I;2 + I^2 - eps) Q;2
    /// + 3 eps P;2;2 + Q;2;2;2 + 3 I P;2`.
    pub fn chi(&self) -> Result<Jet> {
        let eps = self.eps();
        let i = self.base.main();
        let iv2 = self.get("I;2")?;
        let iv22 = self.get("I;2;2")?;
        let t = &self.p * 3.0
            - (i + &iv22 * eps + i * &iv2) * &self.q
            - (&iv2 * (2.0 * eps) + i * i).add_scalar(-eps) * &self.get("Q;2")?
            + self.get("P;2;2")? * (3.0 * eps)
            + self.get("Q;2;2;2")?
            + i * &self.get("P;2")? * 3.0;
        Ok(t * &self.f().powi(-2)?)
    }

    /// `Ibar_d = Ibar,a;b + Ibar,b`.
    pub fn main_bar_d(&self) -> Result<Jet> {
        Ok(self.get("Ibar,a;b")? + self.get("Ibar,b")?)
    }

    /// `Jbar` from `F Jbar = F^2 Ibar,1 - 2 eps Q Ibar;2`.
    pub fn landsberg_bar(&self) -> Result<Jet> {
        let eps = self.eps();
        let f = self.f();
        let fj = f * f * &self.get("Ibar,1")? - &self.q * &self.get("Ibar;2")? * (2.0 * eps);
        let v = fj * &f.recip()?;
        let a = self.landsberg_bar_sqrt()?;
        let b = self.landsberg_bar_cubic()?;
        guard("Jbar", &v, &a)?;
        guard("Jbar", &a, &b)?;
        Ok(v)
    }

    /// `Jbar` written through `rho`, `phi` and `I`:
    /// `F Jbar = F sqrt(eps rho) J + (sqrt(eps rho) / 2 rho)[(F^2 rho,1 - 2 eps Q rho;2) X
    /// + F^2 (4 eps rho phi;2,1 - eps rho;2,1) - 2Q (2 eps rho I;2 + 4 rho phi;2;2 - rho;2;2)]`.
    pub fn landsberg_bar_sqrt(&self) -> Result<Jet> {
        let eps = self.eps();
        let f = self.f();
        let l = f * f;
        let (q, rho) = (&self.q, &self.rho);
        let srho = self.srho()?;
        let x = self.x_plus()?;
        let lead = (&l * &self.get("rho,1")? - q * &self.get("rho;2")? * (2.0 * eps)) * &x;
        let mid = &l
            * &(rho * &self.get("phi;2,1")? * (4.0 * eps) - self.get("rho;2,1")? * eps);
        let tail = q
            * &(rho * &self.get("I;2")? * (2.0 * eps) + rho * &self.get("phi;2;2")? * 4.0
                - self.get("rho;2;2")?)
            * 2.0;
        let fj = f * &srho * &self.base.landsberg()?
            + &srho * &(rho * 2.0).recip()? * &(lead + mid - tail);
        Ok(fj * &f.recip()?)
    }

    /// `Jbar` written through `sigma`:
    /// `F Jbar = (3 eps / 2) sqrt(eps rho) (F^2 rho,1 - 2 eps Q rho;2) W
    /// + (eps rho)^(3/2) [(1 + eps sigma)(F^2 I,1 - 2 eps Q I;2) + (eps I + phi;2)(F^2 sigma,1 - 2 eps Q sigma;2)
    /// + (F^2 sigma;2,1 - 2 eps Q sigma;2;2)/2 + (sigma + 2 eps)(F^2 phi;2,1 - 2 eps Q phi;2;2)]`
    /// with `W = I (1 + eps sigma) + sigma;2 / 2 + phi;2 (sigma + 2 eps)`.
    pub fn landsberg_bar_cubic(&self) -> Result<Jet> {
        let eps = self.eps();
        let f = self.f();
        let l = f * f;
        let q2 = &self.q * (2.0 * eps);
        let srho = self.srho()?;
        let i = self.base.main();
        let s = &self.sigma;
        let pv2 = self.get("phi;2")?;
        // F^2 a,1 - 2 eps Q a;2 for a named scalar `a`
        let flow = |h: &str, v: &str| -> Result<Jet> { Ok(&l * &self.get(h)? - &q2 * &self.get(v)?) };
        let w = i * &(s * eps).add_scalar(1.0)
            + self.get("sigma;2")? * 0.5
            + &pv2 * &s.add_scalar(2.0 * eps);
        let first = &srho * &flow("rho,1", "rho;2")? * &w * (1.5 * eps);
        let inner = (s * eps).add_scalar(1.0) * &flow("I,1", "I;2")?
            + (i * eps + &pv2) * &flow("sigma,1", "sigma;2")?
            + flow("sigma;2,1", "sigma;2;2")? * 0.5
            + s.add_scalar(2.0 * eps) * &flow("phi;2,1", "phi;2;2")?;
        let fj = first + &srho * &srho * &srho * &inner;
        Ok(fj * &f.recip()?)
    }

    /// `Tbar_ijkh = e^(3 phi) (eps rho)^(-3/2) (Ibar;2 / F) m_i m_j m_k m_h`.
    pub fn t_bar(&self) -> Result<Tensor4> {
        let srho = self.srho()?;
        let e3 = self.phi.scale(3.0).exp();
        let c = e3 * &self.get("Ibar;2")? * &(&srho * &srho * &srho * self.f()).recip()?;
        let m = &self.base.frame.m_lo;
        Ok(map4(|i, j, k, h| &c * &m[i] * &m[j] * &m[k] * &m[h]))
    }

    /// `Tbar = (eps e^(3 phi) / rho)[T + (1 / 2 F rho)(4 eps rho phi;2;2 + rho;2 X - eps rho;2;2) mmmm]`.
    pub fn t_bar_from_t(&self) -> Result<Tensor4> {
        let eps = self.eps();
        let rho = &self.rho;
        let t = self.base.t_tensor()?;
        let e3 = self.phi.scale(3.0).exp();
        let pre = e3 * &rho.recip()? * eps;
        let inner = rho * &self.get("phi;2;2")? * (4.0 * eps) + self.get("rho;2")? * &self.x_plus()?
            - self.get("rho;2;2")? * eps;
        let c = inner * &(rho * self.f() * 2.0).recip()?;
        let m = &self.base.frame.m_lo;
        Ok(map4(|i, j, k, h| &pre * &(&t[i][j][k][h] + &c * &m[i] * &m[j] * &m[k] * &m[h])))
    }

    /// `Dbar^12 = D^12 + F Q (m^1 l^2 - m^2 l^1)`.
    pub fn douglas_bar(&self) -> Jet {
        let fr = &self.base.frame;
        let w = &fr.m_hi[0] * &fr.ell_hi[1] - &fr.m_hi[1] * &fr.ell_hi[0];
        self.base.douglas_bivector() + self.f() * &self.q * &w
    }

    /// `Dbar^21`, computed from its own formula rather than by negation.
    pub fn douglas_bar_21(&self) -> Jet {
        let fr = &self.base.frame;
        let d21 = &self.base.spray[1] * self.base.y(0) - &self.base.spray[0] * self.base.y(1);
        let w = &fr.m_hi[1] * &fr.ell_hi[0] - &fr.m_hi[0] * &fr.ell_hi[1];
        d21 + self.f() * &self.q * &w
    }

    /// `f;a = f;1`.
    pub fn bar_va(&self, f: &Jet) -> Result<Jet> {
        self.base.v1(f).within(";a")
    }

    /// `f;b = sqrt(eps rho)(f;2 - phi;2 f;1)`.
    pub fn bar_vb(&self, f: &Jet) -> Result<Jet> {
        let fv1 = self.base.v1(f).within(";b")?;
        let fv2 = self.base.v2(f).within(";b")?;
        Ok(&self.srho()? * &(fv2 - &self.get("phi;2")? * &fv1))
    }

    /// `f,a = e^-phi [f,1 - (2/F^2)(P f;1 + eps Q f;2)]`.
    pub fn bar_ha(&self, f: &Jet) -> Result<Jet> {
        let eps = self.eps();
        let fv1 = self.base.v1(f).within(",a")?;
        let fv2 = self.base.v2(f).within(",a")?;
        let fh1 = self.base.h1(f).within(",a")?;
        let shift = (&self.p * &fv1 + &self.q * &fv2 * eps) * &self.f().powi(-2)? * 2.0;
        Ok(self.e_mphi() * &(fh1 - shift))
    }

    /// `f,b = e^-phi sqrt(eps rho)[f,2 - phi;2 f,1 - (1/F^2){(P;2 - Q - 2 phi;2 P) f;1
    /// + eps (eps P + Q;2 - eps I Q - 2 phi;2 Q) f;2}]`.
    pub fn bar_hb(&self, f: &Jet) -> Result<Jet> {
        let eps = self.eps();
        let (p, q) = (&self.p, &self.q);
        let pv2 = self.get("phi;2")?;
        let fv1 = self.base.v1(f).within(",b")?;
        let fv2 = self.base.v2(f).within(",b")?;
        let fh1 = self.base.h1(f).within(",b")?;
        let fh2 = self.base.h2(f).within(",b")?;
        let a = self.get("P;2")? - q - &pv2 * p * 2.0;
        let b = p * eps + self.get("Q;2")? - self.base.main() * q * eps - &pv2 * q * 2.0;
        let shift = (a * &fv1 + b * &fv2 * eps) * &self.f().powi(-2)?;
        Ok(self.e_mphi() * &self.srho()? * &(fh2 - &pv2 * &fh1 - shift))
    }

    /// `(Ibar;b, Ibar,a, Ibar,b)` from closed forms in `rho`, `phi` and `I`
    /// rather than by differentiating `Ibar`.
    pub fn main_bar_derivatives(&self) -> Result<[Jet; 3]> {
        let eps = self.eps();
        let (p, q, rho) = (&self.p, &self.q, &self.rho);
        let srho = self.srho()?;
        let x = self.x_plus()?;
        let pre = &srho * &(rho * 2.0).recip()?;
        // Ibar differentiated by one operator `d` of the original metric
        let along = |d: &str| -> Result<Jet> {
            let v = self.get(&format!("rho{d}"))? * &x
                + rho * &(self.get(&format!("I{d}"))? + self.get(&format!("phi;2{d}"))? * (2.0 * eps)) * 2.0
                - self.get(&format!("rho;2{d}"))? * eps;
            Ok(&pre * &v)
        };
        let v2 = along(";2")?;
        let h1 = along(",1")?;
        let h2 = along(",2")?;
        let f2inv = self.f().powi(-2)?;
        let em = self.e_mphi();
        let pv2 = self.get("phi;2")?;
        let vb = &srho * &v2;
        let ha = &em * &(&h1 - q * &v2 * &f2inv * (2.0 * eps));
        let c = p * eps + self.get("Q;2")? - self.base.main() * q * eps - &pv2 * q * 2.0;
        let hb = &em * &srho * &(h2 - &pv2 * &h1 - c * &v2 * &f2inv * eps);
        Ok([vb, ha, hb])
    }

    /// `F Sbar(f) = F S(f) - 2 (P f;1 + eps Q f;2)`, where `S` and `Sbar` are
    /// the geodesic sprays of the two metrics.
    pub fn spray_derivative_bar(&self, f: &Jet) -> Result<Jet> {
        let eps = self.eps();
        let s = self.base.spray_derivative(f)?;
        let fv1 = self.base.v1(f)?;
        let fv2 = self.base.v2(f)?;
        Ok(self.f() * &s - (&self.p * &fv1 + &self.q * &fv2 * eps) * 2.0)
    }
}

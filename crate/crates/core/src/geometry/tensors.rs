use serde::Serialize;

use super::{dot, try2, SurfacePoint};
use crate::error::{Error, Result, ResultExt};
use crate::jet::Jet;
use crate::residual::Residual;

pub type Vec2 = [Jet; 2];
pub type Mat2 = [[Jet; 2]; 2];
pub type Tensor3 = [[[Jet; 2]; 2]; 2];
pub type Tensor4 = [[[[Jet; 2]; 2]; 2]; 2];

/// Flattened real values of a jet tensor, in row-major index order.
pub trait Components {
    fn values(&self) -> Vec<f64>;
}

impl Components for Jet {
    fn values(&self) -> Vec<f64> {
        vec![self.value()]
    }
}

impl<T: Components, const N: usize> Components for [T; N] {
    fn values(&self) -> Vec<f64> {
        self.iter().flat_map(|t| t.values()).collect()
    }
}

/// `a_i b_j c_k d_r`, used by the frame forms of tensors.
pub(crate) fn outer4(a: &Vec2, b: &Vec2, c: &Vec2, d: &Vec2) -> Tensor4 {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| std::array::from_fn(|k| std::array::from_fn(|r| &a[i] * &b[j] * &c[k] * &d[r])))
    })
}

/// Gauss curvature with the value each probe produced.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Gauss {
    pub value: f64,
    pub probes: Vec<f64>,
}

/// Base-surface classification residuals at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BaseClasses {
    pub riemannian: Residual,
    pub landsberg: Residual,
    pub berwald: Residual,
    pub t_condition: Residual,
    pub douglas: Residual,
}

const PROBE_SKIP: f64 = 1e-8;
const PROBE_GUARD: f64 = 1e-6;

impl SurfacePoint {
    /// `G^i_jk = dG^i_j/dy^k`, indexed `[i][j][k]`.
    pub fn berwald_connection(&self) -> Result<Tensor3> {
        try2(|i| try2(|j| try2(|k| self.barthel[i][j].dy(k)))).within("G^i_jk")
    }

    /// `B^i_jkr = dG^i_jk/dy^r`, indexed `[i][j][k][r]`.
    pub fn berwald_curvature(&self) -> Result<Tensor4> {
        let conn = self.berwald_connection()?;
        try2(|i| try2(|j| try2(|k| try2(|r| conn[i][j][k].dy(r))))).within("B^i_jkr")
    }

    /// `B^i_jkr` from `F B = (-2 I,1 l^i + I_2 m^i) m_j m_k m_r`.
    pub fn berwald_curvature_frame(&self) -> Result<Tensor4> {
        let fr = &self.frame;
        let finv = self.f.recip()?;
        let ih1 = self.main_h1()?;
        let i2 = self.i2()?;
        let lead: Vec2 = try2(|i| Ok((&ih1 * &fr.ell_hi[i] * -2.0 + &i2 * &fr.m_hi[i]) * &finv))?;
        Ok(outer4(&lead, &fr.m_lo, &fr.m_lo, &fr.m_lo))
    }

    /// `T_ijkh = (I;2 / F) m_i m_j m_k m_h`.
    pub fn t_tensor(&self) -> Result<Tensor4> {
        let c = self.main_v2()? * &self.f.recip()?;
        let m = &self.frame.m_lo;
        let mc: Vec2 = [&m[0] * &c, &m[1] * &c];
        Ok(outer4(&mc, m, m, m))
    }

    /// Terms of `6 I,1 + eps I_2;2 + 2 I I_2`.
    pub fn douglas_terms(&self) -> Result<[Jet; 3]> {
        let i2 = self.i2()?;
        let i2v2 = self.v2(&i2).within("I_2")?;
        Ok([
            self.main_h1()? * 6.0,
            i2v2 * self.eps(),
            self.main() * &i2 * 2.0,
        ])
    }

    /// `D^12 = G^1 y^2 - G^2 y^1`. The bivector is antisymmetric so this is
    /// its only independent component.
    pub fn douglas_bivector(&self) -> Jet {
        &self.spray[0] * self.y(1) - &self.spray[1] * self.y(0)
    }

    /// Gauss curvature `R` from `f,1,2 - f,2,1 = -R f;2`, evaluated on the
    /// probes `y^1/F`, `y^2/F` and `(y^1 + y^2)/F` until two are usable.
    pub fn gauss_curvature(&self) -> Result<Gauss> {
        let finv = self.f.recip()?;
        let numerators = [self.y(0).clone(), self.y(1).clone(), self.y(0) + self.y(1)];
        let mut probes = Vec::new();
        for n in numerators {
            if probes.len() == 2 {
                break;
            }
            if let Some(r) = self.probe_curvature(&(n * &finv))? {
                probes.push(r);
            }
        }
        match probes.as_slice() {
            [] => Err(Error::ProbeDegenerate),
            [r] => Ok(Gauss {
                value: *r,
                probes,
            }),
            [a, b, ..] => {
                if (a - b).abs() > PROBE_GUARD * a.abs().max(b.abs()).max(1.0) {
                    return Err(Error::ProbeDisagreement {
                        first: *a,
                        second: *b,
                    });
                }
                Ok(Gauss {
                    value: *a,
                    probes,
                })
            }
        }
    }

    /// `R` from one probe, or `None` when `f;2` nearly vanishes.
    pub fn probe_curvature(&self, f: &Jet) -> Result<Option<f64>> {
        let fv2 = self.v2(f).within("curvature probe")?;
        if fv2.value().abs() < PROBE_SKIP {
            return Ok(None);
        }
        let f1 = self.h1(f)?;
        let f2 = self.h2(f)?;
        let comm = self.h2(&f1)? - self.h1(&f2)?;
        Ok(Some(-comm.value() / fv2.value()))
    }

    pub fn classify(&self) -> Result<BaseClasses> {
        let ih1 = self.main_h1()?.value();
        let ih2 = self.main_h2()?.value();
        let douglas = self.douglas_terms()?.map(|t| t.value());
        Ok(BaseClasses {
            riemannian: Residual::value(self.main().value()),
            landsberg: Residual::value(ih1),
            berwald: Residual::value(ih1.abs().max(ih2.abs())),
            t_condition: Residual::value(self.main_v2()?.value()),
            douglas: Residual::of_terms(&douglas),
        })
    }

    /// `G^i_j y^j - 2 G^i`, zero for a 2-homogeneous spray.
    pub fn spray_homogeneity(&self) -> Vec2 {
        let y = self.ys();
        [
            dot(&self.barthel[0], &y) - &self.spray[0] * 2.0,
            dot(&self.barthel[1], &y) - &self.spray[1] * 2.0,
        ]
    }
}

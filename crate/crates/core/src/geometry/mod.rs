//! Intrinsic objects of a conic pseudo-Finsler surface at a point: metric,
//! signature, modified Berwald frame, main scalar, spray, connections and
//! the four scalar-derivative operators.
//!
//! Everything is held as jets at the base point. An operator applied to a
//! jet returns a jet with one order less, so nested derivatives such as
//! `P;2;2;2` are plain function composition.

mod identities;
mod sample;
mod tensors;

use std::fmt;
use std::sync::Arc;

use crate::chain::{self, Op};
use crate::dsl::MetricDef;
use crate::error::{Error, Result, ResultExt};
use crate::field::{Field, ScalarField};
use crate::jet::{coordinates, Jet, Point};

pub use identities::{
    commutation, frame_derivative_identities, frame_identities, horizontal_constancy,
    spray_identities,
};
pub use sample::GeometrySample;
pub use tensors::{BaseClasses, Components, Gauss, Mat2, Tensor3, Tensor4, Vec2};

/// Returns the source text of the first violated domain inequality.
pub type DomainFn = Arc<dyn Fn(&Point) -> Option<String> + Send + Sync>;

pub(crate) fn try2<T>(mut f: impl FnMut(usize) -> Result<T>) -> Result<[T; 2]> {
    Ok([f(0)?, f(1)?])
}

pub fn dot(a: &[Jet; 2], b: &[Jet; 2]) -> Jet {
    &a[0] * &b[0] + &a[1] * &b[1]
}

/// Relative tolerance of the guard that compares the classical spray with
/// the frame form. A wrong convention shows up as an O(1) disagreement.
const SPRAY_GUARD: f64 = 1e-6;

/// A Finsler function together with the region where it is a metric.
#[derive(Clone)]
pub struct Surface {
    name: String,
    f: Field,
    domain: Option<DomainFn>,
    epsilon: Option<i8>,
}

impl fmt::Debug for Surface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Surface")
            .field("name", &self.name)
            .field("F", &self.f.label())
            .field("epsilon", &self.epsilon)
            .finish_non_exhaustive()
    }
}

impl Surface {
    pub fn new(name: impl Into<String>, f: Field) -> Surface {
        Surface {
            name: name.into(),
            f,
            domain: None,
            epsilon: None,
        }
    }

    pub fn with_domain(mut self, domain: DomainFn) -> Surface {
        self.domain = Some(domain);
        self
    }

    /// Require this signature at every point.
    pub fn with_epsilon(mut self, epsilon: i8) -> Surface {
        self.epsilon = Some(epsilon);
        self
    }

    pub fn from_metric(metric: &MetricDef) -> Surface {
        let m = metric.clone();
        let domain: DomainFn = Arc::new(move |p: &Point| {
            if !m.contains(p) {
                Some(m.violated(p).unwrap_or("y = 0").to_string())
            } else {
                None
            }
        });
        Surface::new(metric.name.clone(), Arc::new(metric.f.clone())).with_domain(domain)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn field(&self) -> &Field {
        &self.f
    }

    pub fn domain(&self) -> Option<&DomainFn> {
        self.domain.as_ref()
    }

    pub fn epsilon(&self) -> Option<i8> {
        self.epsilon
    }

    pub fn check_domain(&self, point: &Point) -> Result<()> {
        let [y1, y2] = point.y();
        if y1 == 0.0 && y2 == 0.0 {
            return Err(Error::OutsideCone("y = 0".into()));
        }
        match self.domain.as_ref().and_then(|d| d(point)) {
            Some(violated) => Err(Error::OutsideCone(violated)),
            None => Ok(()),
        }
    }

    /// Frame and spray at `point`, with every jet expanded to `degree`.
    pub fn at(&self, point: &Point, degree: usize) -> Result<SurfacePoint> {
        self.check_domain(point)?;
        let f = self.f.eval(point, degree).within("F")?;
        SurfacePoint::from_jet(f, self.epsilon)
    }

    /// Real value of `F` at `point`.
    pub fn value(&self, point: &Point) -> Result<f64> {
        Ok(self.f.eval(point, 0)?.value())
    }
}

/// The modified Berwald frame and the objects built from the metric alone.
#[derive(Debug, Clone)]
pub struct Frame {
    /// `g_ij = (1/2) d^2 F^2 / dy^i dy^j`.
    pub g: Mat2,
    pub gdet: Jet,
    pub ell_lo: Vec2,
    pub ell_hi: Vec2,
    pub m_lo: Vec2,
    pub m_hi: Vec2,
    /// `+1` or `-1`.
    pub eps: f64,
    /// `sqrt(eps * det g)`, equal to `l_1 m_2 - l_2 m_1`.
    pub h: Jet,
    /// Main scalar.
    pub main: Jet,
}

/// All first-level objects of a surface at one point.
#[derive(Debug, Clone)]
pub struct SurfacePoint {
    pub coords: [Jet; 4],
    pub f: Jet,
    pub frame: Frame,
    /// Spray coefficients `G^i` from the frame form.
    pub spray: Vec2,
    /// The same coefficients from `g^il (y^k d_k dot-d_l F^2 - d_l F^2) / 4`.
    pub spray_classical: Vec2,
    /// `barthel[i][j] = dG^i/dy^j`.
    pub barthel: Mat2,
}

impl SurfacePoint {
    /// Build the frame and spray from the jet of `F`.
    pub fn from_jet(f: Jet, expected_eps: Option<i8>) -> Result<SurfacePoint> {
        let point = f.point();
        let degree = f.degree();
        let fv = f.value();
        if !(fv.is_finite() && fv > 0.0) {
            return Err(Error::OutsideCone(format!("F = {fv} is not positive")));
        }
        let coords = coordinates(point, degree)?;
        let y = [coords[2].clone(), coords[3].clone()];

        let ell_lo = try2(|i| f.dy(i)).within("l_i")?;
        let l = &f * &f;
        let dl = try2(|i| l.dy(i)).within("g_ij")?;
        let g: Mat2 = try2(|i| try2(|j| Ok(dl[i].dy(j)? * 0.5))).within("g_ij")?;
        let gdet = &g[0][0] * &g[1][1] - &g[0][1] * &g[1][0];
        let gscale = g
            .iter()
            .flatten()
            .fold(0.0f64, |m, x| m.max(x.value().abs()));
        let det = gdet.value();
        if !det.is_finite() || det.abs() <= 1e-12 * gscale * gscale {
            return Err(Error::DegenerateMetric(det));
        }
        let eps = det.signum();
        if let Some(e) = expected_eps {
            if e as f64 != eps {
                return Err(Error::SignatureFlip {
                    expected: e,
                    found: eps as i8,
                });
            }
        }

        let finv = f.recip()?;
        let ell_hi = [&y[0] * &finv, &y[1] * &finv];
        let h = gdet.scale(eps).sqrt()?;
        let hinv = h.recip()?;
        let m_hi = [-(&ell_lo[1] * &hinv) * eps, &ell_lo[0] * &hinv * eps];
        let m_lo = [-(&h * &ell_hi[1]), &h * &ell_hi[0]];

        let cartan: Tensor3 =
            try2(|i| try2(|j| try2(|k| Ok(g[i][j].dy(k)? * 0.5)))).within("main scalar")?;
        let mut contraction = f.zero_like().truncate(cartan[0][0][0].degree());
        for (i, ci) in cartan.iter().enumerate() {
            for (j, cij) in ci.iter().enumerate() {
                let mm = &m_hi[i] * &m_hi[j];
                contraction = contraction + &mm * &dot(cij, &m_hi);
            }
        }
        let main = &f * &contraction * eps;

        // frame form
        let fx = try2(|r| f.dx(r)).within("spray")?;
        let s = dot(&y, &fx);
        let cross = (ell_lo[1].dx(0)? - ell_lo[0].dx(1)?) * &l * &hinv;
        let spray: Vec2 = [
            (&s * &ell_hi[0] + &cross * &m_hi[0]) * 0.5,
            (&s * &ell_hi[1] + &cross * &m_hi[1]) * 0.5,
        ];

        // classical form
        let dinv = gdet.recip()?;
        let ginv = [
            [&g[1][1] * &dinv, -(&g[0][1] * &dinv)],
            [-(&g[1][0] * &dinv), &g[0][0] * &dinv],
        ];
        let w = try2(|k| {
            let grad = try2(|r| dl[k].dx(r))?;
            Ok(dot(&y, &grad) - l.dx(k)?)
        })
        .within("spray")?;
        let spray_classical: Vec2 = [dot(&ginv[0], &w) * 0.25, dot(&ginv[1], &w) * 0.25];
        for i in 0..2 {
            let (a, b) = (spray_classical[i].value(), spray[i].value());
            if (a - b).abs() > SPRAY_GUARD * a.abs().max(b.abs()).max(1.0) {
                return Err(Error::SprayMismatch {
                    classical: a,
                    frame: b,
                });
            }
        }

        let barthel: Mat2 = try2(|i| try2(|j| spray[i].dy(j))).within("G^i_j")?;

        Ok(SurfacePoint {
            coords,
            f,
            frame: Frame {
                g,
                gdet,
                ell_lo,
                ell_hi,
                m_lo,
                m_hi,
                eps,
                h,
                main,
            },
            spray,
            spray_classical,
            barthel,
        })
    }

    pub fn point(&self) -> Point {
        self.f.point()
    }

    pub fn degree(&self) -> usize {
        self.f.degree()
    }

    pub fn eps(&self) -> f64 {
        self.frame.eps
    }

    /// Jet of `y^i`.
    pub fn y(&self, i: usize) -> &Jet {
        &self.coords[2 + i]
    }

    pub fn ys(&self) -> Vec2 {
        [self.coords[2].clone(), self.coords[3].clone()]
    }

    pub fn main(&self) -> &Jet {
        &self.frame.main
    }

    /// Evaluate another field at this point and degree.
    pub fn eval(&self, field: &dyn ScalarField) -> Result<Jet> {
        field.eval(&self.point(), self.degree()).within(field.label())
    }

    /// `dot-d_i f`.
    pub fn vgrad(&self, f: &Jet) -> Result<Vec2> {
        try2(|i| f.dy(i))
    }

    /// `f;1 = y^i dot-d_i f`.
    pub fn v1(&self, f: &Jet) -> Result<Jet> {
        Ok(dot(&self.ys(), &self.vgrad(f).within(";1")?))
    }

    /// `f;2 = eps F (dot-d_i f) m^i`.
    pub fn v2(&self, f: &Jet) -> Result<Jet> {
        let grad = self.vgrad(f).within(";2")?;
        Ok(&self.f * &dot(&grad, &self.frame.m_hi) * self.eps())
    }

    /// `delta_i f = d_i f - G^j_i dot-d_j f`.
    pub fn delta(&self, f: &Jet) -> Result<Vec2> {
        let grad = self.vgrad(f)?;
        try2(|i| {
            let shift = &self.barthel[0][i] * &grad[0] + &self.barthel[1][i] * &grad[1];
            Ok(f.dx(i)? - shift)
        })
    }

    /// `f,1 = (delta_i f) l^i`.
    pub fn h1(&self, f: &Jet) -> Result<Jet> {
        Ok(dot(&self.delta(f).within(",1")?, &self.frame.ell_hi))
    }

    /// `f,2 = eps (delta_i f) m^i`.
    pub fn h2(&self, f: &Jet) -> Result<Jet> {
        Ok(dot(&self.delta(f).within(",2")?, &self.frame.m_hi) * self.eps())
    }

    /// `I;2`.
    pub fn main_v2(&self) -> Result<Jet> {
        self.v2(self.main()).within("I")
    }

    /// `I,1`.
    pub fn main_h1(&self) -> Result<Jet> {
        self.h1(self.main()).within("I")
    }

    /// `I,2`.
    pub fn main_h2(&self) -> Result<Jet> {
        self.h2(self.main()).within("I")
    }

    /// `I_2 = I,1;2 + I,2`.
    pub fn i2(&self) -> Result<Jet> {
        let a = self.v2(&self.main_h1()?).within("I_2")?;
        Ok(a + self.main_h2()?)
    }

    /// Landsberg scalar `J = F I,1`.
    pub fn landsberg(&self) -> Result<Jet> {
        Ok(&self.f * &self.main_h1()?)
    }

    /// `S(f) = y^i d_i f - 2 G^i dot-d_i f` for the geodesic spray `S`.
    pub fn spray_derivative(&self, f: &Jet) -> Result<Jet> {
        let dx = try2(|i| f.dx(i)).within("S")?;
        let dy = self.vgrad(f).within("S")?;
        Ok(dot(&self.ys(), &dx) - dot(&self.spray, &dy) * 2.0)
    }

    /// Apply one unbarred derivative operator.
    pub fn apply(&self, op: Op, f: &Jet) -> Result<Jet> {
        match op {
            Op::V1 => self.v1(f),
            Op::V2 => self.v2(f),
            Op::H1 => self.h1(f),
            Op::H2 => self.h2(f),
            _ => Err(Error::Config(format!(
                "`{op}` is a derivative of the changed metric; it needs a conformal factor"
            ))),
        }
    }

    /// A named scalar of this surface: `F`, `I`, `I_2` or `J`, followed by
    /// any chain of `;1 ;2 ,1 ,2`.
    pub fn scalar(&self, name: &str) -> Result<Jet> {
        let (base, ops) = chain::split(name)?;
        let mut v = match base {
            "F" => self.f.clone(),
            "I" => self.main().clone(),
            "I_2" => self.i2()?,
            "J" => self.landsberg()?,
            other => return Err(Error::Config(format!("unknown scalar `{other}`"))),
        };
        for op in ops {
            v = self.apply(op, &v).within(name)?;
        }
        Ok(v)
    }
}

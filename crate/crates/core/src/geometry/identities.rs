//! Residuals of identities that hold on every surface. They are the
//! regression net for the frame, spray and derivative operators.

use super::{dot, try2, Components, SurfacePoint, Vec2};
use crate::error::Result;
use crate::jet::Jet;
use crate::residual::Residual;

fn terms(ts: &[&Jet]) -> Residual {
    let v: Vec<f64> = ts.iter().map(|t| t.value()).collect();
    Residual::of_terms(&v)
}

/// Orthonormality of the frame, reconstruction of `g_ij`, and
/// `det g = eps h^2`.
pub fn frame_identities(sp: &SurfacePoint) -> Residual {
    let fr = &sp.frame;
    let eps = fr.eps;
    let mut r = Residual::diff(dot(&fr.ell_hi, &fr.ell_lo).value(), 1.0)
        .join(Residual::value(dot(&fr.ell_hi, &fr.m_lo).value()))
        .join(Residual::value(dot(&fr.ell_lo, &fr.m_hi).value()))
        .join(Residual::diff(dot(&fr.m_hi, &fr.m_lo).value(), eps));
    for i in 0..2 {
        for j in 0..2 {
            let rebuilt = &fr.ell_lo[i] * &fr.ell_lo[j] + &fr.m_lo[i] * &fr.m_lo[j] * eps;
            r = r.join(Residual::diff(rebuilt.value(), fr.g[i][j].value()));
        }
    }
    let cross = &fr.ell_lo[0] * &fr.m_lo[1] - &fr.ell_lo[1] * &fr.m_lo[0];
    r.join(Residual::diff(fr.gdet.value(), eps * cross.value().powi(2)))
}

/// Vertical derivatives of the frame:
/// `F dl_i/dy^j = eps m_i m_j`, `F dl^i/dy^j = eps m^i m_j`,
/// `F dm_i/dy^j = -(l_i - eps I m_i) m_j`, `F dm^i/dy^j = -(l^i + eps I m^i) m_j`.
pub fn frame_derivative_identities(sp: &SurfacePoint) -> Result<[Residual; 4]> {
    let fr = &sp.frame;
    let eps = fr.eps;
    let f = &sp.f;
    let ei = fr.main.clone() * eps;
    let check = |v: &Vec2, expect: &dyn Fn(usize, usize) -> Jet| -> Result<Residual> {
        let lhs: [Vec2; 2] = try2(|i| try2(|j| Ok(f * &v[i].dy(j)?)))?;
        let rhs: [Vec2; 2] = std::array::from_fn(|i| std::array::from_fn(|j| expect(i, j)));
        Ok(Residual::diff_all(&lhs.values(), &rhs.values()))
    };
    Ok([
        check(&fr.ell_lo, &|i, j| &fr.m_lo[i] * &fr.m_lo[j] * eps)?,
        check(&fr.ell_hi, &|i, j| &fr.m_hi[i] * &fr.m_lo[j] * eps)?,
        check(&fr.m_lo, &|i, j| -((&fr.ell_lo[i] - &ei * &fr.m_lo[i]) * &fr.m_lo[j]))?,
        check(&fr.m_hi, &|i, j| -((&fr.ell_hi[i] + &ei * &fr.m_hi[i]) * &fr.m_lo[j]))?,
    ])
}

/// The three commutation formulas applied to `f`, given the Gauss
/// curvature `r`.
pub fn commutation(sp: &SurfacePoint, f: &Jet, r: f64) -> Result<[Residual; 3]> {
    let eps = sp.eps();
    let f1 = sp.h1(f)?;
    let f2 = sp.h2(f)?;
    let fv2 = sp.v2(f)?;
    let f12 = sp.h2(&f1)?;
    let f21 = sp.h1(&f2)?;
    let rf = &fv2 * r;
    let first = terms(&[&f12, &-&f21, &rf]);

    let f1v2 = sp.v2(&f1)?;
    let fv2h1 = sp.h1(&fv2)?;
    let second = terms(&[&f1v2, &-&fv2h1, &-&f2]);

    let f2v2 = sp.v2(&f2)?;
    let fv2h2 = sp.h2(&fv2)?;
    let main = sp.main();
    let a = &f1 * eps;
    let b = main * &f2 * eps;
    let c = sp.main_h1()? * &fv2 * eps;
    let third = terms(&[&f2v2, &-&fv2h2, &a, &b, &c]);
    Ok([first, second, third])
}

/// Four identities linking partial derivatives to the spray, for an
/// arbitrary scalar `phi`:
/// `F^2 l^k d_k phi = F^2 phi,1 + 2 G^k phi;2 m_k`,
/// `F m^k d_k phi = eps F phi,2 + G^i_k phi;2 m^k m_i`,
/// `l^k d_k F^2 = 4 G^k l_k`, `m^k d_k F^2 = 2 F G^i_k l_i m^k`.
pub fn spray_identities(sp: &SurfacePoint, phi: &Jet) -> Result<[Residual; 4]> {
    let fr = &sp.frame;
    let f = &sp.f;
    let l = f * f;
    let dphi: Vec2 = try2(|k| phi.dx(k))?;
    let dl: Vec2 = try2(|k| l.dx(k))?;
    let pv2 = sp.v2(phi)?;

    let lhs1 = &l * &dot(&fr.ell_hi, &dphi);
    let a1 = &l * &sp.h1(phi)?;
    let b1 = dot(&sp.spray, &fr.m_lo) * &pv2 * 2.0;
    let first = terms(&[&lhs1, &-&a1, &-&b1]);

    let lhs2 = f * &dot(&fr.m_hi, &dphi);
    let a2 = f * &sp.h2(phi)? * fr.eps;
    // G^i_k m^k m_i
    let gmm = dot(
        &[dot(&sp.barthel[0], &fr.m_hi), dot(&sp.barthel[1], &fr.m_hi)],
        &fr.m_lo,
    );
    let b2 = &gmm * &pv2;
    let second = terms(&[&lhs2, &-&a2, &-&b2]);

    let lhs3 = dot(&fr.ell_hi, &dl);
    let rhs3 = dot(&sp.spray, &fr.ell_lo) * 4.0;
    let third = terms(&[&lhs3, &-&rhs3]);

    let lhs4 = dot(&fr.m_hi, &dl);
    let glm = dot(
        &[dot(&sp.barthel[0], &fr.m_hi), dot(&sp.barthel[1], &fr.m_hi)],
        &fr.ell_lo,
    );
    let rhs4 = f * &glm * 2.0;
    let fourth = terms(&[&lhs4, &-&rhs4]);
    Ok([first, second, third, fourth])
}

/// `delta_i F = 0` and `G^i_j y^j = 2 G^i`.
pub fn horizontal_constancy(sp: &SurfacePoint) -> Result<[Residual; 2]> {
    let fr = &sp.frame;
    let mut d = Residual::default();
    for i in 0..2 {
        let a = sp.f.dx(i)?;
        let b = &sp.barthel[0][i] * &fr.ell_lo[0];
        let c = &sp.barthel[1][i] * &fr.ell_lo[1];
        d = d.join(terms(&[&a, &-&b, &-&c]));
    }
    let homog = sp.spray_homogeneity();
    let spray_scale = sp.spray.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let h = homog.values().iter().fold(Residual::default(), |acc, v| {
        acc.join(Residual {
            raw: v.abs(),
            scale: 2.0 * spray_scale,
        })
    });
    Ok([d, h])
}

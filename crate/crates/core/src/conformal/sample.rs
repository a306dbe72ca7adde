use serde::Serialize;

use super::ConformalPoint;
use crate::error::Result;
use crate::geometry::Components;

fn v2(v: Vec<f64>) -> [f64; 2] {
    [v[0], v[1]]
}

/// Real values of the barred objects at one point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BarredSample {
    pub sigma: f64,
    pub rho: f64,
    #[serde(rename = "P")]
    pub p: f64,
    #[serde(rename = "Q")]
    pub q: f64,
    pub ell_lo: [f64; 2],
    pub ell_hi: [f64; 2],
    pub m_lo: [f64; 2],
    pub m_hi: [f64; 2],
    #[serde(rename = "Ibar")]
    pub main: f64,
    #[serde(rename = "G")]
    pub spray: [f64; 2],
    /// `[i][j] = dGbar^i/dy^j`, flattened.
    #[serde(rename = "G_conn")]
    pub barthel: Vec<f64>,
    #[serde(rename = "G_berwald")]
    pub berwald: Vec<f64>,
    #[serde(rename = "B")]
    pub curvature: Vec<f64>,
    #[serde(rename = "Jbar")]
    pub landsberg: f64,
    #[serde(rename = "T")]
    pub t: Vec<f64>,
    #[serde(rename = "D12")]
    pub douglas: f64,
    pub psi: f64,
    pub chi: f64,
    #[serde(rename = "Ibar_d")]
    pub main_d: f64,
}

impl BarredSample {
    pub fn new(cp: &ConformalPoint) -> Result<BarredSample> {
        let bf = cp.barred_frame()?;
        Ok(BarredSample {
            sigma: cp.sigma.value(),
            rho: cp.rho.value(),
            p: cp.p.value(),
            q: cp.q.value(),
            ell_lo: v2(bf.ell_lo.values()),
            ell_hi: v2(bf.ell_hi.values()),
            m_lo: v2(bf.m_lo.values()),
            m_hi: v2(bf.m_hi.values()),
            main: cp.get("Ibar")?.value(),
            spray: v2(cp.spray_bar().values()),
            barthel: cp.barthel_bar()?.values(),
            berwald: cp.berwald_bar()?.values(),
            curvature: cp.curvature_bar()?.values(),
            landsberg: cp.get("Jbar")?.value(),
            t: cp.t_bar()?.values(),
            douglas: cp.douglas_bar().value(),
            psi: cp.get("psi")?.value(),
            chi: cp.get("chi")?.value(),
            main_d: cp.get("Ibar_d")?.value(),
        })
    }
}

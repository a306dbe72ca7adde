use serde::Serialize;

use super::{Components, SurfacePoint};
use crate::error::Result;
use crate::jet::Point;

fn v2(v: Vec<f64>) -> [f64; 2] {
    [v[0], v[1]]
}

fn m2(v: Vec<f64>) -> [[f64; 2]; 2] {
    [[v[0], v[1]], [v[2], v[3]]]
}

/// Real values of everything the geometry module computes at one point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeometrySample {
    pub point: Point,
    #[serde(rename = "F")]
    pub f: f64,
    pub epsilon: i8,
    pub g: [[f64; 2]; 2],
    pub gdet: f64,
    pub ell_lo: [f64; 2],
    pub ell_hi: [f64; 2],
    pub m_lo: [f64; 2],
    pub m_hi: [f64; 2],
    #[serde(rename = "I")]
    pub main: f64,
    #[serde(rename = "G")]
    pub spray: [f64; 2],
    /// `dG^i/dy^j`, flattened in `i, j` order.
    #[serde(rename = "G_conn")]
    pub barthel: Vec<f64>,
    /// `G^i_jk`, flattened in `i, j, k` order.
    #[serde(rename = "G_berwald")]
    pub berwald: Vec<f64>,
    /// `B^i_jkr`, flattened in `i, j, k, r` order.
    #[serde(rename = "B")]
    pub curvature: Vec<f64>,
    #[serde(rename = "I;1")]
    pub i_v1: f64,
    #[serde(rename = "I;2")]
    pub i_v2: f64,
    #[serde(rename = "I,1")]
    pub i_h1: f64,
    #[serde(rename = "I,2")]
    pub i_h2: f64,
    #[serde(rename = "I_2")]
    pub i2: f64,
    #[serde(rename = "J")]
    pub landsberg: f64,
    #[serde(rename = "R")]
    pub gauss: f64,
    #[serde(rename = "D12")]
    pub douglas: f64,
}

impl GeometrySample {
    pub fn new(sp: &SurfacePoint) -> Result<GeometrySample> {
        let fr = &sp.frame;
        Ok(GeometrySample {
            point: sp.point(),
            f: sp.f.value(),
            epsilon: fr.eps as i8,
            g: m2(fr.g.values()),
            gdet: fr.gdet.value(),
            ell_lo: v2(fr.ell_lo.values()),
            ell_hi: v2(fr.ell_hi.values()),
            m_lo: v2(fr.m_lo.values()),
            m_hi: v2(fr.m_hi.values()),
            main: fr.main.value(),
            spray: v2(sp.spray.values()),
            barthel: sp.barthel.values(),
            berwald: sp.berwald_connection()?.values(),
            curvature: sp.berwald_curvature()?.values(),
            i_v1: sp.v1(sp.main())?.value(),
            i_v2: sp.main_v2()?.value(),
            i_h1: sp.main_h1()?.value(),
            i_h2: sp.main_h2()?.value(),
            i2: sp.i2()?.value(),
            landsberg: sp.landsberg()?.value(),
            gauss: sp.gauss_curvature()?.value,
            douglas: sp.douglas_bivector().value(),
        })
    }
}

//! Truncated Taylor expansions in the four bundle coordinates
//! `(x1, x2, y1, y2)`.
//!
//! A [`Jet`] stores every Taylor coefficient of a scalar up to a total
//! degree `D` at a fixed base point. Arithmetic on jets is exact on
//! polynomials up to the truncation degree, so partial derivatives of any
//! composite scalar come out exactly (up to rounding) as long as enough
//! order remains. Each [`Jet::partial`] consumes one order; asking for more
//! than is left is an error, never a silent truncation.

mod ops;
mod tables;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use tables::tables;
pub use tables::MAX_DEGREE;

/// Degree budget used when none is given.
pub const DEFAULT_DEGREE: usize = 8;

pub(crate) const NVARS: usize = 4;

/// One of the four coordinates on the tangent bundle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Coord {
    X1,
    X2,
    Y1,
    Y2,
}

impl Coord {
    pub const ALL: [Coord; 4] = [Coord::X1, Coord::X2, Coord::Y1, Coord::Y2];

    /// Position coordinate `x^i` for `i` in `0..2`.
    pub fn x(i: usize) -> Coord {
        [Coord::X1, Coord::X2][i]
    }

    /// Direction coordinate `y^i` for `i` in `0..2`.
    pub fn y(i: usize) -> Coord {
        [Coord::Y1, Coord::Y2][i]
    }

    /// 1-based lookup: 1 = x1, 2 = x2, 3 = y1, 4 = y2.
    pub fn from_index(index: usize) -> Option<Coord> {
        Coord::ALL.get(index.checked_sub(1)?).copied()
    }

    pub fn slot(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Coord::X1 => "x1",
            Coord::X2 => "x2",
            Coord::Y1 => "y1",
            Coord::Y2 => "y2",
        }
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A point `(x1, x2, y1, y2)` of the tangent bundle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point(pub [f64; 4]);

impl Point {
    pub fn new(x1: f64, x2: f64, y1: f64, y2: f64) -> Self {
        Point([x1, x2, y1, y2])
    }

    pub fn get(&self, c: Coord) -> f64 {
        self.0[c.slot()]
    }

    pub fn x(&self) -> [f64; 2] {
        [self.0[0], self.0[1]]
    }

    pub fn y(&self) -> [f64; 2] {
        [self.0[2], self.0[3]]
    }

    /// The point `(x, lambda * y)`.
    pub fn scale_y(&self, lambda: f64) -> Self {
        let [x1, x2, y1, y2] = self.0;
        Point([x1, x2, lambda * y1, lambda * y2])
    }

    /// The point shifted by `h` along one coordinate.
    pub fn shifted(&self, c: Coord, h: f64) -> Self {
        let mut p = self.0;
        p[c.slot()] += h;
        Point(p)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.0;
        write!(f, "({a}, {b}, {c}, {d})")
    }
}

/// Truncated multivariate Taylor polynomial of a scalar at a base point.
#[derive(Clone, PartialEq)]
pub struct Jet {
    point: Point,
    degree: usize,
    coeffs: Vec<f64>,
}

impl fmt::Debug for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Jet")
            .field("point", &self.point)
            .field("degree", &self.degree)
            .field("value", &self.value())
            .finish_non_exhaustive()
    }
}

fn check_degree(degree: usize) -> Result<()> {
    if degree > MAX_DEGREE {
        Err(Error::DegreeTooLarge(degree))
    } else {
        Ok(())
    }
}

impl Jet {
    pub fn constant(point: Point, degree: usize, value: f64) -> Result<Jet> {
        check_degree(degree)?;
        let mut coeffs = vec![0.0; tables().len[degree]];
        coeffs[0] = value;
        Ok(Jet {
            point,
            degree,
            coeffs,
        })
    }

    /// The jet of the coordinate function `coord` at `point`.
    pub fn coordinate(coord: Coord, point: Point, degree: usize) -> Result<Jet> {
        let mut jet = Jet::constant(point, degree, point.get(coord))?;
        if degree > 0 {
            jet.coeffs[1 + coord.slot()] = 1.0;
        }
        Ok(jet)
    }

    /// Build a jet from raw graded coefficients (`C(degree + 4, 4)` of them).
    pub fn from_coeffs(point: Point, degree: usize, coeffs: Vec<f64>) -> Result<Jet> {
        check_degree(degree)?;
        if coeffs.len() != tables().len[degree] {
            return Err(Error::Domain(format!(
                "{} coefficients given, degree {degree} needs {}",
                coeffs.len(),
                tables().len[degree]
            )));
        }
        Ok(Jet {
            point,
            degree,
            coeffs,
        })
    }

    pub fn constant_like(&self, value: f64) -> Jet {
        let mut coeffs = vec![0.0; self.coeffs.len()];
        coeffs[0] = value;
        Jet {
            point: self.point,
            degree: self.degree,
            coeffs,
        }
    }

    pub fn zero_like(&self) -> Jet {
        self.constant_like(0.0)
    }

    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn point(&self) -> Point {
        self.point
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Number of coefficients stored for a jet of the given degree.
    pub fn len_for_degree(degree: usize) -> usize {
        tables().len[degree.min(MAX_DEGREE)]
    }

    /// Exponent vector of the `index`-th stored coefficient.
    pub fn monomial(index: usize) -> [usize; 4] {
        tables().exps[index].map(|e| e as usize)
    }

    /// Taylor coefficient of the monomial `x1^a x2^b y1^c y2^d`.
    pub fn coeff(&self, exps: [usize; 4]) -> f64 {
        if exps.iter().sum::<usize>() > self.degree {
            return 0.0;
        }
        let e = exps.map(|v| v as u8);
        tables()
            .index_of(&e)
            .map_or(0.0, |i| self.coeffs[i])
    }

    /// Mixed partial derivative `d^|a| f / dx^a` at the base point.
    pub fn derivative(&self, exps: [usize; 4]) -> f64 {
        let fact: f64 = exps
            .iter()
            .map(|&n| (1..=n).map(|k| k as f64).product::<f64>())
            .product();
        self.coeff(exps) * fact
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs[1..].iter().all(|&c| c == 0.0)
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }

    /// Drop every coefficient above `degree`.
    pub fn truncate(&self, degree: usize) -> Jet {
        let degree = degree.min(self.degree);
        Jet {
            point: self.point,
            degree,
            coeffs: self.coeffs[..tables().len[degree]].to_vec(),
        }
    }

    /// Partial derivative along `coord`; the result has one order less.
    pub fn partial(&self, coord: Coord) -> Result<Jet> {
        if self.degree == 0 {
            return Err(Error::DegreeExhausted {
                chain: format!("d/d{coord}"),
            });
        }
        let degree = self.degree - 1;
        let coeffs = tables().deriv[coord.slot()][..tables().len[degree]]
            .iter()
            .map(|&(src, factor)| factor * self.coeffs[src as usize])
            .collect();
        Ok(Jet {
            point: self.point,
            degree,
            coeffs,
        })
    }

    /// `d/dy^i` for `i` in `0..2`.
    pub fn dy(&self, i: usize) -> Result<Jet> {
        self.partial(Coord::y(i))
    }

    /// `d/dx^i` for `i` in `0..2`.
    pub fn dx(&self, i: usize) -> Result<Jet> {
        self.partial(Coord::x(i))
    }

    /// Evaluate the truncated polynomial at a displacement from the base
    /// point.
    pub fn eval_offset(&self, offset: [f64; 4]) -> f64 {
        let t = tables();
        self.coeffs
            .iter()
            .zip(&t.exps)
            .map(|(c, e)| {
                let m: f64 = (0..NVARS).map(|v| offset[v].powi(e[v] as i32)).product();
                c * m
            })
            .sum()
    }

    fn same_point(&self, other: &Jet) -> Result<()> {
        if self.point == other.point {
            Ok(())
        } else {
            Err(Error::BasePointMismatch)
        }
    }

    fn zip_with(&self, other: &Jet, f: impl Fn(f64, f64) -> f64) -> Jet {
        let degree = self.degree.min(other.degree);
        let n = tables().len[degree];
        let coeffs = self.coeffs[..n]
            .iter()
            .zip(&other.coeffs[..n])
            .map(|(&a, &b)| f(a, b))
            .collect();
        Jet {
            point: self.point,
            degree,
            coeffs,
        }
    }

    pub fn try_add(&self, other: &Jet) -> Result<Jet> {
        self.same_point(other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn try_sub(&self, other: &Jet) -> Result<Jet> {
        self.same_point(other)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    pub fn try_mul(&self, other: &Jet) -> Result<Jet> {
        self.same_point(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Jet) -> Jet {
        let t = tables();
        let degree = self.degree.min(other.degree);
        let mut coeffs = vec![0.0; t.len[degree]];
        for &(i, j, k) in &t.mul[..t.mul_end[degree]] {
            coeffs[k as usize] += self.coeffs[i as usize] * other.coeffs[j as usize];
        }
        Jet {
            point: self.point,
            degree,
            coeffs,
        }
    }

    pub fn scale(&self, c: f64) -> Jet {
        Jet {
            point: self.point,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|&a| a * c).collect(),
        }
    }

    pub fn add_scalar(&self, c: f64) -> Jet {
        let mut out = self.clone();
        out.coeffs[0] += c;
        out
    }

    /// `sum_k series[k] * u^k` where `u = self - value` has no constant term.
    fn compose(&self, series: &[f64]) -> Jet {
        let mut u = self.clone();
        u.coeffs[0] = 0.0;
        let d = self.degree;
        let mut acc = self.constant_like(series[d]);
        for k in (0..d).rev() {
            acc = acc.mul_unchecked(&u);
            acc.coeffs[0] += series[k];
        }
        acc
    }

    pub fn recip(&self) -> Result<Jet> {
        let c = self.value();
        if c == 0.0 || !c.is_finite() {
            return Err(Error::Domain(format!("division by a jet with constant term {c}")));
        }
        let series: Vec<f64> = (0..=self.degree)
            .map(|k| {
                let s = if k % 2 == 0 { 1.0 } else { -1.0 };
                s / c.powi(k as i32 + 1)
            })
            .collect();
        Ok(self.compose(&series))
    }

    pub fn div(&self, other: &Jet) -> Result<Jet> {
        self.same_point(other)?;
        Ok(self.mul_unchecked(&other.recip()?))
    }

    pub fn sqrt(&self) -> Result<Jet> {
        let c = self.value();
        if c <= 0.0 {
            return Err(Error::Domain(format!("sqrt of a jet with constant term {c}")));
        }
        Ok(self.compose(&power_series(c, 0.5, self.degree)))
    }

    pub fn exp(&self) -> Jet {
        let e = self.value().exp();
        let mut series = Vec::with_capacity(self.degree + 1);
        let mut term = e;
        for k in 0..=self.degree {
            if k > 0 {
                term /= k as f64;
            }
            series.push(term);
        }
        self.compose(&series)
    }

    pub fn ln(&self) -> Result<Jet> {
        let c = self.value();
        if c <= 0.0 {
            return Err(Error::Domain(format!("ln of a jet with constant term {c}")));
        }
        let series: Vec<f64> = (0..=self.degree)
            .map(|k| match k {
                0 => c.ln(),
                _ => {
                    let s = if k % 2 == 1 { 1.0 } else { -1.0 };
                    s / (k as f64 * c.powi(k as i32))
                }
            })
            .collect();
        Ok(self.compose(&series))
    }

    pub fn sin(&self) -> Jet {
        self.compose(&trig_series(self.value(), self.degree, 0))
    }

    pub fn cos(&self) -> Jet {
        self.compose(&trig_series(self.value(), self.degree, 1))
    }

    pub fn abs(&self) -> Result<Jet> {
        let c = self.value();
        if c > 0.0 {
            Ok(self.clone())
        } else if c < 0.0 {
            Ok(-self)
        } else {
            Err(Error::Domain("abs is not smooth at zero".into()))
        }
    }

    /// Integer power by repeated squaring; exact for any base value.
    pub fn powi(&self, n: i32) -> Result<Jet> {
        let mut base = self.clone();
        let mut acc = self.constant_like(1.0);
        let mut e = n.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        if n < 0 {
            acc.recip()
        } else {
            Ok(acc)
        }
    }

    /// Real power with a constant exponent.
    pub fn powf(&self, r: f64) -> Result<Jet> {
        if r.fract() == 0.0 && r.abs() <= 64.0 {
            return self.powi(r as i32);
        }
        let c = self.value();
        if c <= 0.0 {
            return Err(Error::Domain(format!(
                "non-integer power {r} of a jet with constant term {c}"
            )));
        }
        Ok(self.compose(&power_series(c, r, self.degree)))
    }

    /// `self ^ exponent` for a jet-valued exponent.
    pub fn pow(&self, exponent: &Jet) -> Result<Jet> {
        self.same_point(exponent)?;
        if exponent.is_constant() {
            return Ok(self.powf(exponent.value())?.truncate(exponent.degree));
        }
        let c = self.value();
        if c <= 0.0 {
            return Err(Error::Domain(format!(
                "variable power of a jet with constant term {c}"
            )));
        }
        Ok(exponent.mul_unchecked(&self.ln()?).exp())
    }
}

/// Taylor coefficients of `(c + u)^r` in `u`.
fn power_series(c: f64, r: f64, degree: usize) -> Vec<f64> {
    let mut series = Vec::with_capacity(degree + 1);
    let mut binom = 1.0;
    for k in 0..=degree {
        if k > 0 {
            binom *= (r - (k as f64 - 1.0)) / k as f64;
        }
        series.push(binom * c.powf(r - k as f64));
    }
    series
}

/// Taylor coefficients of `sin` (`shift = 0`) or `cos` (`shift = 1`) about `c`.
fn trig_series(c: f64, degree: usize, shift: usize) -> Vec<f64> {
    let (s, co) = c.sin_cos();
    let cycle = [s, co, -s, -co];
    let mut fact = 1.0;
    (0..=degree)
        .map(|k| {
            if k > 0 {
                fact *= k as f64;
            }
            cycle[(k + shift) % 4] / fact
        })
        .collect()
}

/// The coordinate jets `(x1, x2, y1, y2)` at `point`.
pub fn coordinates(point: Point, degree: usize) -> Result<[Jet; 4]> {
    Ok([
        Jet::coordinate(Coord::X1, point, degree)?,
        Jet::coordinate(Coord::X2, point, degree)?,
        Jet::coordinate(Coord::Y1, point, degree)?,
        Jet::coordinate(Coord::Y2, point, degree)?,
    ])
}

/// Lift a coordinate given by its 1-based index (1 = x1, ..., 4 = y2).
pub fn lift_coordinate(index: usize, point: Point, degree: usize) -> Result<Jet> {
    let coord = Coord::from_index(index)
        .ok_or_else(|| Error::Domain(format!("coordinate index {index} is not in 1..=4")))?;
    Jet::coordinate(coord, point, degree)
}

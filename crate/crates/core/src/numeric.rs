//! The scalar interface the expression evaluator is generic over.
//!
//! Implemented for plain `f64` (direct real evaluation) and for [`Jet`]
//! (Taylor evaluation). Test code plugs in independent number types
//! through the same interface.

use crate::error::{Error, Result};
use crate::jet::Jet;

pub trait Numeric: Clone {
    /// A constant with the same carrier shape (base point, degree) as `self`.
    fn constant_like(&self, c: f64) -> Self;
    fn value(&self) -> f64;

    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    fn divided_by(&self, other: &Self) -> Result<Self>;

    fn square_root(&self) -> Result<Self>;
    fn exponential(&self) -> Self;
    fn logarithm(&self) -> Result<Self>;
    fn sine(&self) -> Self;
    fn cosine(&self) -> Self;
    fn absolute(&self) -> Result<Self>;
    fn power(&self, exponent: &Self) -> Result<Self>;
}

impl Numeric for f64 {
    fn constant_like(&self, c: f64) -> Self {
        c
    }
    fn value(&self) -> f64 {
        *self
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn divided_by(&self, other: &Self) -> Result<Self> {
        if *other == 0.0 {
            return Err(Error::Domain("division by zero".into()));
        }
        Ok(self / other)
    }
    fn square_root(&self) -> Result<Self> {
        if *self <= 0.0 {
            return Err(Error::Domain(format!("sqrt of {self}")));
        }
        Ok(f64::sqrt(*self))
    }
    fn exponential(&self) -> Self {
        f64::exp(*self)
    }
    fn logarithm(&self) -> Result<Self> {
        if *self <= 0.0 {
            return Err(Error::Domain(format!("ln of {self}")));
        }
        Ok(f64::ln(*self))
    }
    fn sine(&self) -> Self {
        f64::sin(*self)
    }
    fn cosine(&self) -> Self {
        f64::cos(*self)
    }
    fn absolute(&self) -> Result<Self> {
        if *self == 0.0 {
            return Err(Error::Domain("abs is not smooth at zero".into()));
        }
        Ok(f64::abs(*self))
    }
    fn power(&self, exponent: &Self) -> Result<Self> {
        let r = *exponent;
        if r.fract() == 0.0 && r.abs() <= 64.0 {
            if *self == 0.0 && r < 0.0 {
                return Err(Error::Domain("negative power of zero".into()));
            }
            return Ok(self.powi(r as i32));
        }
        if *self <= 0.0 {
            return Err(Error::Domain(format!("non-integer power {r} of {self}")));
        }
        Ok(self.powf(r))
    }
}

impl Numeric for Jet {
    fn constant_like(&self, c: f64) -> Self {
        Jet::constant_like(self, c)
    }
    fn value(&self) -> f64 {
        Jet::value(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn divided_by(&self, other: &Self) -> Result<Self> {
        self.div(other)
    }
    fn square_root(&self) -> Result<Self> {
        self.sqrt()
    }
    fn exponential(&self) -> Self {
        self.exp()
    }
    fn logarithm(&self) -> Result<Self> {
        self.ln()
    }
    fn sine(&self) -> Self {
        self.sin()
    }
    fn cosine(&self) -> Self {
        self.cos()
    }
    fn absolute(&self) -> Result<Self> {
        self.abs()
    }
    fn power(&self, exponent: &Self) -> Result<Self> {
        self.pow(exponent)
    }
}

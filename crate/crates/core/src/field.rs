//! Scalar fields on the tangent bundle: anything that can produce a jet at
//! a point.

use std::fmt;
use std::sync::Arc;

use crate::dsl::FieldDef;
use crate::error::Result;
use crate::jet::{Jet, Point};

pub trait ScalarField: Send + Sync {
    fn eval(&self, point: &Point, degree: usize) -> Result<Jet>;

    fn label(&self) -> &str;
}

pub type Field = Arc<dyn ScalarField>;

impl fmt::Debug for dyn ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ScalarField({})", self.label())
    }
}

impl ScalarField for FieldDef {
    fn eval(&self, point: &Point, degree: usize) -> Result<Jet> {
        self.evaluate(point, degree)
    }

    fn label(&self) -> &str {
        &self.name
    }
}

struct FnField<F> {
    label: String,
    f: F,
}

impl<F> ScalarField for FnField<F>
where
    F: Fn(&Point, usize) -> Result<Jet> + Send + Sync,
{
    fn eval(&self, point: &Point, degree: usize) -> Result<Jet> {
        (self.f)(point, degree)
    }

    fn label(&self) -> &str {
        &self.label
    }
}

/// Wrap a closure as a field.
pub fn from_fn<F>(label: impl Into<String>, f: F) -> Field
where
    F: Fn(&Point, usize) -> Result<Jet> + Send + Sync + 'static,
{
    Arc::new(FnField {
        label: label.into(),
        f,
    })
}

pub fn from_def(def: FieldDef) -> Field {
    Arc::new(def)
}

/// Parse a bare expression (coordinates and `pi` only) into a field.
pub fn parse(label: &str, source: &str) -> Result<Field> {
    let expr = crate::dsl::parse_scoped(source, &|_| false)?;
    Ok(from_def(FieldDef::plain(label, expr)?))
}

/// The constant field `c`.
pub fn constant(c: f64) -> Field {
    from_fn(format!("{c}"), move |p, d| Jet::constant(*p, d, c))
}

/// `exp(phi) * F`.
pub fn conformal(f: Field, phi: Field) -> Field {
    let label = format!("exp({}) * {}", phi.label(), f.label());
    from_fn(label, move |p, d| {
        let fj = f.eval(p, d)?;
        let pj = phi.eval(p, d)?;
        Ok(pj.exp() * fj)
    })
}

/// Largest relative defect of `f(x, t y) = t^r f(x, y)` over `t` in
/// `{0.5, 2, 3}`.
pub fn homogeneity_defect(f: &dyn ScalarField, point: &Point, r: f64) -> Result<f64> {
    let base = f.eval(point, 0)?.value();
    let mut worst = 0.0f64;
    for t in [0.5, 2.0, 3.0] {
        let scaled = f.eval(&point.scale_y(t), 0)?.value();
        let expect = t.powf(r) * base;
        worst = worst.max((scaled - expect).abs() / expect.abs().max(1.0));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parsed_field_evaluates() {
        let f = parse("F", "sqrt(y1^2 + y2^2)").unwrap();
        let j = f.eval(&Point::new(0.0, 0.0, 3.0, 4.0), 2).unwrap();
        assert!((j.value() - 5.0).abs() < 1e-15);
        assert!(parse("F", "a*y1").is_err());
    }

    #[test]
    fn homogeneity_audit() {
        let p = Point::new(0.2, 0.1, 0.7, -0.4);
        let f = parse("F", "sqrt(y1^2 + y2^2)*exp(x1) + 0.3*y1").unwrap();
        assert!(homogeneity_defect(f.as_ref(), &p, 1.0).unwrap() < 1e-10);
        let phi = parse("phi", "y1/sqrt(y1^2 + y2^2)").unwrap();
        assert!(homogeneity_defect(phi.as_ref(), &p, 0.0).unwrap() < 1e-10);
        let bad = parse("F", "y1^2 + y2").unwrap();
        assert!(homogeneity_defect(bad.as_ref(), &p, 1.0).unwrap() > 1e-3);
    }
}

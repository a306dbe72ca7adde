use std::collections::BTreeMap;
use std::sync::Arc;

use super::{BinOp, Expr, Func};
use crate::error::{Error, Result};
use crate::jet::{coordinates, Jet, Point};
use crate::numeric::Numeric;

/// A named expression together with the `let` bindings and parameter values
/// its free symbols resolve to.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldDef {
    pub name: String,
    pub expr: Expr,
    lets: Arc<Vec<(String, Expr)>>,
    params: Arc<BTreeMap<String, f64>>,
}

struct Env<'a, T> {
    coords: &'a [T; 4],
    lets: &'a [(String, Expr)],
    params: &'a BTreeMap<String, f64>,
    cache: Vec<Option<T>>,
}

impl FieldDef {
    /// Checks that every free symbol is bound. Bindings may refer to
    /// parameters and to earlier bindings only.
    pub fn new(
        name: impl Into<String>,
        expr: Expr,
        lets: Arc<Vec<(String, Expr)>>,
        params: Arc<BTreeMap<String, f64>>,
    ) -> Result<FieldDef> {
        let name = name.into();
        for (i, (bound, body)) in lets.iter().enumerate() {
            for s in body.symbols() {
                let earlier = lets[..i].iter().any(|(n, _)| *n == s);
                if !(earlier || params.contains_key(&s) || s == "pi") {
                    return Err(Error::Config(format!(
                        "binding `{bound}` refers to `{s}`, which is not a parameter or an earlier binding"
                    )));
                }
            }
        }
        for s in expr.symbols() {
            let bound = lets.iter().any(|(n, _)| *n == s) || params.contains_key(&s);
            if !(bound || s == "pi") {
                return Err(Error::Config(format!("`{name}` uses unbound symbol `{s}`")));
            }
        }
        Ok(FieldDef {
            name,
            expr,
            lets,
            params,
        })
    }

    /// A definition with no bindings and no parameters.
    pub fn plain(name: impl Into<String>, expr: Expr) -> Result<FieldDef> {
        FieldDef::new(name, expr, Arc::default(), Arc::default())
    }

    pub fn params(&self) -> &BTreeMap<String, f64> {
        &self.params
    }

    pub fn lets(&self) -> &[(String, Expr)] {
        &self.lets
    }

    /// The degree-`degree` jet of the field at `point`.
    pub fn evaluate(&self, point: &Point, degree: usize) -> Result<Jet> {
        let coords = coordinates(*point, degree)?;
        self.eval_numeric(&coords)
    }

    /// Direct real evaluation.
    pub fn eval_real(&self, point: &Point) -> Result<f64> {
        self.eval_numeric(&point.0)
    }

    /// Evaluate with coordinates supplied in any [`Numeric`] carrier.
    pub fn eval_numeric<T: Numeric>(&self, coords: &[T; 4]) -> Result<T> {
        let mut env = Env {
            coords,
            lets: &self.lets,
            params: &self.params,
            cache: vec![None; self.lets.len()],
        };
        eval(&self.expr, &mut env)
    }
}

fn wrap_domain(err: Error, node: &Expr) -> Error {
    match err {
        Error::Domain(msg) => Error::Domain(format!("{msg} in `{node}`")),
        other => other,
    }
}

fn eval<T: Numeric>(e: &Expr, env: &mut Env<'_, T>) -> Result<T> {
    let anchor = &env.coords[0];
    match e {
        Expr::Num(v) => Ok(anchor.constant_like(*v)),
        Expr::Var(c) => Ok(env.coords[c.slot()].clone()),
        Expr::Sym(name) => symbol(name, env),
        Expr::Neg(a) => Ok(eval(a, env)?.negated()),
        Expr::Bin(op, a, b) => {
            let l = eval(a, env)?;
            let r = eval(b, env)?;
            let out = match op {
                BinOp::Add => Ok(l.plus(&r)),
                BinOp::Sub => Ok(l.minus(&r)),
                BinOp::Mul => Ok(l.times(&r)),
                BinOp::Div => l.divided_by(&r),
                BinOp::Pow => l.power(&r),
            };
            out.map_err(|err| wrap_domain(err, e))
        }
        Expr::Call(f, a) => {
            let x = eval(a, env)?;
            let out = match f {
                Func::Sqrt => x.square_root(),
                Func::Exp => Ok(x.exponential()),
                Func::Ln => x.logarithm(),
                Func::Sin => Ok(x.sine()),
                Func::Cos => Ok(x.cosine()),
                Func::Abs => x.absolute(),
            };
            out.map_err(|err| wrap_domain(err, e))
        }
    }
}

fn symbol<T: Numeric>(name: &str, env: &mut Env<'_, T>) -> Result<T> {
    // bindings shadow parameters
    if let Some(i) = env.lets.iter().rposition(|(n, _)| n == name) {
        if let Some(v) = &env.cache[i] {
            return Ok(v.clone());
        }
        let body = &env.lets[i].1;
        let v = eval(body, env).map_err(|err| match err {
            Error::Domain(msg) => Error::Domain(format!("{msg} (binding `{name}`)")),
            other => other,
        })?;
        env.cache[i] = Some(v.clone());
        return Ok(v);
    }
    let anchor = &env.coords[0];
    if let Some(v) = env.params.get(name) {
        return Ok(anchor.constant_like(*v));
    }
    if name == "pi" {
        return Ok(anchor.constant_like(std::f64::consts::PI));
    }
    Err(Error::Config(format!("unbound symbol `{name}`")))
}

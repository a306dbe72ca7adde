//! Independent numerics shared by the integration tests: hyper-dual numbers
//! for exact first and second derivatives, central differences, and random
//! expression trees.

#![allow(dead_code)]

use finsurf::dsl::{BinOp, Expr, FieldDef, Func, MetricDef};
use finsurf::numeric::Numeric;
use finsurf::{bundled, Coord, Error, Point, Result};
use rand::Rng;

/// `a + b e1 + c e2 + d e1 e2` with `e1^2 = e2^2 = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperDual {
    pub v: f64,
    pub e1: f64,
    pub e2: f64,
    pub e12: f64,
}

impl HyperDual {
    pub fn new(v: f64, e1: f64, e2: f64) -> HyperDual {
        HyperDual { v, e1, e2, e12: 0.0 }
    }

    /// Apply a scalar function given its value and first two derivatives.
    fn chain(&self, f0: f64, f1: f64, f2: f64) -> HyperDual {
        HyperDual {
            v: f0,
            e1: f1 * self.e1,
            e2: f1 * self.e2,
            e12: f1 * self.e12 + f2 * self.e1 * self.e2,
        }
    }
}

impl Numeric for HyperDual {
    fn constant_like(&self, c: f64) -> Self {
        HyperDual::new(c, 0.0, 0.0)
    }
    fn value(&self) -> f64 {
        self.v
    }
    fn plus(&self, o: &Self) -> Self {
        HyperDual { v: self.v + o.v, e1: self.e1 + o.e1, e2: self.e2 + o.e2, e12: self.e12 + o.e12 }
    }
    fn minus(&self, o: &Self) -> Self {
        self.plus(&o.negated())
    }
    fn times(&self, o: &Self) -> Self {
        HyperDual {
            v: self.v * o.v,
            e1: self.v * o.e1 + self.e1 * o.v,
            e2: self.v * o.e2 + self.e2 * o.v,
            e12: self.v * o.e12 + self.e1 * o.e2 + self.e2 * o.e1 + self.e12 * o.v,
        }
    }
    fn negated(&self) -> Self {
        HyperDual { v: -self.v, e1: -self.e1, e2: -self.e2, e12: -self.e12 }
    }
    fn divided_by(&self, o: &Self) -> Result<Self> {
        if o.v == 0.0 {
            return Err(Error::Domain("division by zero".into()));
        }
        let r = 1.0 / o.v;
        Ok(self.times(&o.chain(r, -r * r, 2.0 * r * r * r)))
    }
    fn square_root(&self) -> Result<Self> {
        if self.v <= 0.0 {
            return Err(Error::Domain("sqrt".into()));
        }
        let s = self.v.sqrt();
        Ok(self.chain(s, 0.5 / s, -0.25 / (s * self.v)))
    }
    fn exponential(&self) -> Self {
        let e = self.v.exp();
        self.chain(e, e, e)
    }
    fn logarithm(&self) -> Result<Self> {
        if self.v <= 0.0 {
            return Err(Error::Domain("ln".into()));
        }
        Ok(self.chain(self.v.ln(), 1.0 / self.v, -1.0 / (self.v * self.v)))
    }
    fn sine(&self) -> Self {
        self.chain(self.v.sin(), self.v.cos(), -self.v.sin())
    }
    fn cosine(&self) -> Self {
        self.chain(self.v.cos(), -self.v.sin(), -self.v.cos())
    }
    fn absolute(&self) -> Result<Self> {
        if self.v == 0.0 {
            return Err(Error::Domain("abs".into()));
        }
        let s = self.v.signum();
        Ok(self.chain(self.v.abs(), s, 0.0))
    }
    fn power(&self, exponent: &Self) -> Result<Self> {
        if exponent.e1 == 0.0 && exponent.e2 == 0.0 && exponent.e12 == 0.0 {
            let r = exponent.v;
            if r.fract() == 0.0 {
                let n = r as i32;
                let f0 = self.v.powi(n);
                let f1 = r * self.v.powi(n - 1);
                let f2 = r * (r - 1.0) * self.v.powi(n - 2);
                return Ok(self.chain(f0, f1, f2));
            }
            if self.v <= 0.0 {
                return Err(Error::Domain("pow".into()));
            }
            return Ok(self.chain(
                self.v.powf(r),
                r * self.v.powf(r - 1.0),
                r * (r - 1.0) * self.v.powf(r - 2.0),
            ));
        }
        Ok(self.logarithm()?.times(exponent).exponential())
    }
}

/// `f`, `d f / d a` and `d^2 f / d a d b` at `p`, from one hyper-dual pass.
pub fn hyper(def: &FieldDef, p: &Point, a: Coord, b: Coord) -> Result<HyperDual> {
    let coords: [HyperDual; 4] = std::array::from_fn(|k| {
        let c = Coord::ALL[k];
        HyperDual::new(
            p.get(c),
            if c == a { 1.0 } else { 0.0 },
            if c == b { 1.0 } else { 0.0 },
        )
    });
    def.eval_numeric(&coords)
}

/// `d f / d c` by central differences.
pub fn central<F: Fn(&Point) -> f64>(f: F, p: &Point, c: Coord, h: f64) -> f64 {
    (f(&p.shifted(c, h)) - f(&p.shifted(c, -h))) / (2.0 * h)
}

/// `|a - b| / max(|a|, |b|, 1)`.
pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

/// `g_ij = (1/2) d^2 F^2 / dy^i dy^j` by hyper-dual evaluation.
pub fn metric_tensor(f: &FieldDef, p: &Point) -> Result<[[f64; 2]; 2]> {
    let mut g = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let h = hyper(f, p, Coord::y(i), Coord::y(j))?;
            // F^2 = F F: second derivative is 2(F_i F_j + F F_ij).
            g[i][j] = h.e1 * h.e2 + h.v * h.e12;
        }
    }
    Ok(g)
}

pub fn inverse(g: &[[f64; 2]; 2]) -> [[f64; 2]; 2] {
    let det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
    [[g[1][1] / det, -g[0][1] / det], [-g[1][0] / det, g[0][0] / det]]
}

/// Spray from `G^i = (1/4) g^il (y^k d_k dot-d_l F^2 - d_l F^2)`, with the
/// `x`-derivatives taken by central differences of hyper-dual values.
pub fn spray_euler_lagrange(f: &FieldDef, p: &Point) -> Result<[f64; 2]> {
    let h = 1e-5;
    let grad_y_l = |q: &Point, l: usize| -> f64 {
        let v = hyper(f, q, Coord::y(l), Coord::y(l)).unwrap();
        2.0 * v.v * v.e1
    };
    let l2 = |q: &Point| -> f64 {
        let v = f.eval_real(q).unwrap();
        v * v
    };
    let y = p.y();
    let mut rhs = [0.0; 2];
    for (l, r) in rhs.iter_mut().enumerate() {
        let mixed: f64 = (0..2)
            .map(|k| y[k] * central(|q| grad_y_l(q, l), p, Coord::x(k), h))
            .sum();
        *r = mixed - central(l2, p, Coord::x(l), h);
    }
    let gi = inverse(&metric_tensor(f, p)?);
    Ok(std::array::from_fn(|i| 0.25 * (gi[i][0] * rhs[0] + gi[i][1] * rhs[1])))
}

/// Pairs of `F` and `phi` that have a well-defined changed frame at every
/// sampled point.
pub const STOCK_PAIRS: [&str; 5] = ["funk", "randers", "sphere", "minkowski", "isotropic"];

pub fn stock(name: &str) -> MetricDef {
    bundled::load(name).unwrap()
}

/// A smooth expression in all four coordinates, finite near the unit box.
pub fn smooth_expr<R: Rng>(rng: &mut R, depth: u32) -> Expr {
    let leaf = |rng: &mut R| -> Expr {
        if rng.gen_bool(0.75) {
            Expr::var(Coord::ALL[rng.gen_range(0..4)])
        } else {
            Expr::num((rng.gen_range(0.1..2.0f64) * 100.0).round() / 100.0)
        }
    };
    if depth == 0 {
        return leaf(rng);
    }
    let a = smooth_expr(rng, depth - 1);
    let num = |v: f64| Expr::num(v);
    match rng.gen_range(0..10) {
        0 => Expr::bin(BinOp::Add, a, smooth_expr(rng, depth - 1)),
        1 => Expr::bin(BinOp::Sub, a, smooth_expr(rng, depth - 1)),
        2 => Expr::bin(BinOp::Mul, a, smooth_expr(rng, depth - 1)),
        3 => Expr::bin(
            BinOp::Div,
            a,
            Expr::bin(BinOp::Add, num(1.5), Expr::bin(BinOp::Pow, smooth_expr(rng, depth - 1), num(2.0))),
        ),
        4 => Expr::call(Func::Sin, a),
        5 => Expr::call(Func::Cos, a),
        6 => Expr::call(Func::Exp, Expr::call(Func::Sin, a)),
        7 => Expr::call(Func::Sqrt, Expr::bin(BinOp::Add, num(1.2), Expr::bin(BinOp::Pow, a, num(2.0)))),
        8 => Expr::call(Func::Ln, Expr::bin(BinOp::Add, num(2.5), Expr::call(Func::Cos, a))),
        _ => Expr::bin(BinOp::Pow, a, num(rng.gen_range(2..4) as f64)),
    }
}

/// Any tree the parser can produce: non-negative literals, every operator
/// and function, unary minus anywhere.
pub fn any_expr<R: Rng>(rng: &mut R, depth: u32) -> Expr {
    if depth == 0 || rng.gen_bool(0.2) {
        return match rng.gen_range(0..4) {
            0 | 1 => Expr::var(Coord::ALL[rng.gen_range(0..4)]),
            2 => Expr::num(rng.gen_range(0..1000) as f64),
            _ => Expr::num(rng.gen_range(0.0..1e3f64) * 10f64.powi(rng.gen_range(-12..12))),
        };
    }
    let ops = [BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div, BinOp::Pow];
    match rng.gen_range(0..6) {
        0 => Expr::neg(any_expr(rng, depth - 1)),
        1 => Expr::call(Func::ALL[rng.gen_range(0..Func::ALL.len())], any_expr(rng, depth - 1)),
        _ => Expr::bin(
            ops[rng.gen_range(0..ops.len())],
            any_expr(rng, depth - 1),
            any_expr(rng, depth - 1),
        ),
    }
}

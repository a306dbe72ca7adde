//! Geometry checked against routes that never touch the jet engine.

mod common;

use common::*;
use finsurf::dsl::{self, FieldDef};
use finsurf::field;
use finsurf::geometry::GeometrySample;
use finsurf::{Coord, Point, Surface};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const RANDERS: &str = "sqrt(y1^2 + y2^2*(1 + x1^2)) + 0.3*y1*cos(x2)";

fn def(src: &str) -> FieldDef {
    FieldDef::plain("F", dsl::parse(src).unwrap()).unwrap()
}

fn surface(src: &str) -> Surface {
    Surface::new("oracle", field::parse("F", src).unwrap())
}

fn points(seed: u64, n: usize) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let t: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            Point::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5), t.cos(), t.sin())
        })
        .collect()
}

#[test]
fn randers_metric_tensor_and_main_scalar() {
    let f = def(RANDERS);
    let s = surface(RANDERS);
    for p in points(1, 25) {
        let sample = GeometrySample::new(&s.at(&p, 6).unwrap()).unwrap();
        let g = metric_tensor(&f, &p).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!(rel(sample.g[i][j], g[i][j]) < 1e-12, "g at {p}");
            }
        }

        // C_ijk = (1/2) dg_ij/dy^k by differences of the hyper-dual metric.
        let h = 1e-5;
        let mut c = [[[0.0; 2]; 2]; 2];
        for k in 0..2 {
            let up = metric_tensor(&f, &p.shifted(Coord::y(k), h)).unwrap();
            let down = metric_tensor(&f, &p.shifted(Coord::y(k), -h)).unwrap();
            for i in 0..2 {
                for j in 0..2 {
                    c[i][j][k] = 0.5 * (up[i][j] - down[i][j]) / (2.0 * h);
                }
            }
        }
        let m = sample.m_hi;
        let mut contracted = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    contracted += c[i][j][k] * m[i] * m[j] * m[k];
                }
            }
        }
        let main = sample.epsilon as f64 * sample.f * contracted;
        assert!(rel(sample.main, main) < 1e-8, "I at {p}: {} vs {main}", sample.main);
    }
}

#[test]
fn riemannian_spray_from_christoffel_symbols() {
    let a = |x: [f64; 2]| -> [[f64; 2]; 2] {
        let off = 0.3 * x[0] * x[1];
        [[1.0 + x[0] * x[0], off], [off, 2.0 + x[1].sin()]]
    };
    let src = "sqrt((1 + x1^2)*y1^2 + 2*0.3*x1*x2*y1*y2 + (2 + sin(x2))*y2^2)";
    let s = surface(src);
    let h = 1e-5;
    for p in points(2, 20) {
        let x = p.x();
        let da: [[[f64; 2]; 2]; 2] = std::array::from_fn(|k| {
            let mut up = x;
            let mut down = x;
            up[k] += h;
            down[k] -= h;
            let (u, d) = (a(up), a(down));
            std::array::from_fn(|i| std::array::from_fn(|j| (u[i][j] - d[i][j]) / (2.0 * h)))
        });
        let ai = inverse(&a(x));
        let y = p.y();
        let mut g = [0.0; 2];
        for (i, gi) in g.iter_mut().enumerate() {
            for l in 0..2 {
                for j in 0..2 {
                    for k in 0..2 {
                        let first_kind = 0.5 * (da[k][l][j] + da[j][l][k] - da[l][j][k]);
                        *gi += 0.5 * ai[i][l] * first_kind * y[j] * y[k];
                    }
                }
            }
        }
        let sp = s.at(&p, 4).unwrap();
        for i in 0..2 {
            assert!(rel(sp.spray[i].value(), g[i]) < 1e-8, "G^{i} at {p}");
        }
    }
}

#[test]
fn finsler_spray_from_euler_lagrange() {
    for src in [RANDERS, "sqrt(y1^2 + y2^2)*exp(x1*x2) + 0.2*(x1*y2 - x2*y1)"] {
        let f = def(src);
        let s = surface(src);
        for p in points(3, 15) {
            let expect = spray_euler_lagrange(&f, &p).unwrap();
            let sp = s.at(&p, 4).unwrap();
            for i in 0..2 {
                assert!(rel(sp.spray[i].value(), expect[i]) < 1e-7, "{src}: G^{i} at {p}");
            }
        }
    }
}

#[test]
fn conformally_flat_gauss_curvature() {
    // exp(u(x))|y| has curvature -exp(-2u) (u_11 + u_22).
    let u = |x: [f64; 2]| 0.3 * x[0] - 0.2 * x[1] * x[1] + 0.1 * (x[0] * x[1]).sin();
    let src = "exp(0.3*x1 - 0.2*x2^2 + 0.1*sin(x1*x2))*sqrt(y1^2 + y2^2)";
    let s = surface(src);
    let h = 1e-4;
    for p in points(4, 20) {
        let x = p.x();
        let mut lap = 0.0;
        for k in 0..2 {
            let mut up = x;
            let mut down = x;
            up[k] += h;
            down[k] -= h;
            lap += (u(up) - 2.0 * u(x) + u(down)) / (h * h);
        }
        let expect = -(-2.0 * u(x)).exp() * lap;
        let r = s.at(&p, 5).unwrap().gauss_curvature().unwrap().value;
        assert!(rel(r, expect) < 1e-6, "K at {p}: {r} vs {expect}");
    }
}

#[test]
fn sphere_has_unit_curvature() {
    let s = Surface::from_metric(&stock("sphere"));
    for p in points(5, 20) {
        let r = s.at(&p, 5).unwrap().gauss_curvature().unwrap().value;
        assert!((r - 1.0).abs() < 1e-10, "{r}");
    }
}

/// `G^1 y^2 - G^2 y^1` at fixed `x` against the cubic through four directions.
fn cubic_defect(s: &Surface, x: [f64; 2]) -> f64 {
    let value = |t: f64| -> f64 {
        let p = Point::new(x[0], x[1], t.cos(), t.sin());
        let sp = s.at(&p, 3).unwrap();
        sp.douglas_bivector().value()
    };
    let fit: Vec<f64> = [0.35, 0.6, 0.9, 1.2].to_vec();
    let basis = |t: f64| -> [f64; 4] {
        let (c, s) = (t.cos(), t.sin());
        [c * c * c, c * c * s, c * s * s, s * s * s]
    };
    // Solve the 4x4 system by Gaussian elimination.
    let mut m: Vec<[f64; 5]> = fit
        .iter()
        .map(|t| {
            let b = basis(*t);
            [b[0], b[1], b[2], b[3], value(*t)]
        })
        .collect();
    for col in 0..4 {
        let piv = (col..4).max_by(|a, b| m[*a][col].abs().total_cmp(&m[*b][col].abs())).unwrap();
        m.swap(col, piv);
        for r in 0..4 {
            if r != col {
                let f = m[r][col] / m[col][col];
                for k in col..5 {
                    m[r][k] -= f * m[col][k];
                }
            }
        }
    }
    let coef: Vec<f64> = (0..4).map(|i| m[i][4] / m[i][i]).collect();
    [0.45, 0.75, 1.05, 1.35]
        .iter()
        .map(|t| {
            let b = basis(*t);
            let pred: f64 = (0..4).map(|i| coef[i] * b[i]).sum();
            rel(value(*t), pred)
        })
        .fold(0.0, f64::max)
}

#[test]
fn douglas_bivector_is_cubic_for_douglas_metrics() {
    // Closed one-form: d(x1 x2).
    let closed = surface("sqrt(y1^2 + y2^2*(1 + x1^2)) + 0.3*(x2*y1 + x1*y2)");
    assert!(cubic_defect(&closed, [0.2, -0.1]) < 1e-9);

    let rund = finsurf::Conformal::from_metric(&stock("berwald-rund")).unwrap().barred_surface();
    for x in [[0.1, 0.5], [-0.2, 0.8], [0.3, 0.4]] {
        assert!(cubic_defect(&rund, x) < 1e-8, "Fbar at {x:?}");
    }

    let open = surface(RANDERS);
    assert!(cubic_defect(&open, [0.2, 0.4]) > 1e-4);
}

#[test]
fn finsler_function_is_a_first_integral_of_the_spray() {
    let s = surface(RANDERS);
    let accel = |state: [f64; 4]| -> [f64; 4] {
        let sp = s.at(&Point(state), 3).unwrap();
        [state[2], state[3], -2.0 * sp.spray[0].value(), -2.0 * sp.spray[1].value()]
    };
    let mut state = [0.1, -0.2, 0.8, 0.6];
    let f0 = s.value(&Point(state)).unwrap();
    let dt = 1e-2;
    for _ in 0..100 {
        let add = |a: [f64; 4], b: [f64; 4], h: f64| std::array::from_fn(|i| a[i] + h * b[i]);
        let k1 = accel(state);
        let k2 = accel(add(state, k1, dt / 2.0));
        let k3 = accel(add(state, k2, dt / 2.0));
        let k4 = accel(add(state, k3, dt));
        state = std::array::from_fn(|i| state[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]));
    }
    let f1 = s.value(&Point(state)).unwrap();
    assert!((f1 - f0).abs() < 1e-9, "{f0} -> {f1}");
    // The same holds pointwise as the vanishing spray derivative of F.
    let sp = s.at(&Point(state), 4).unwrap();
    let fj = sp.f.clone();
    assert!(sp.spray_derivative(&fj).unwrap().value().abs() < 1e-12);
}

use serde::{Deserialize, Serialize};

/// How far an identity is from holding at one point.
///
/// `raw` is the absolute defect. `scale` is the magnitude of the largest
/// term that entered it, so `normalized` stays meaningful when the terms
/// themselves are large.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Residual {
    pub raw: f64,
    pub scale: f64,
}

impl Residual {
    /// `|x|` for a quantity that should vanish on its own.
    pub fn value(x: f64) -> Residual {
        Residual {
            raw: x.abs(),
            scale: 0.0,
        }
    }

    /// `|sum of terms|`, scaled by the largest term.
    pub fn of_terms(terms: &[f64]) -> Residual {
        let sum: f64 = terms.iter().sum();
        let scale = terms.iter().fold(0.0f64, |m, t| m.max(t.abs()));
        Residual {
            raw: sum.abs(),
            scale,
        }
    }

    /// `|a - b|`, scaled by the larger side.
    pub fn diff(a: f64, b: f64) -> Residual {
        Residual {
            raw: (a - b).abs(),
            scale: a.abs().max(b.abs()),
        }
    }

    /// Componentwise difference of two tensors with a shared, tensor-wide
    /// scale.
    pub fn diff_all(a: &[f64], b: &[f64]) -> Residual {
        assert_eq!(a.len(), b.len());
        a.iter().zip(b).fold(Residual::default(), |acc, (x, y)| {
            let r = Residual::diff(*x, *y);
            Residual {
                raw: acc.raw.max(r.raw),
                scale: acc.scale.max(r.scale),
            }
        })
    }

    /// The larger defect, keeping the larger scale.
    pub fn join(self, other: Residual) -> Residual {
        Residual {
            raw: self.raw.max(other.raw),
            scale: self.scale.max(other.scale),
        }
    }

    pub fn normalized(&self) -> f64 {
        if self.raw.is_nan() {
            return f64::INFINITY;
        }
        self.raw / self.scale.max(1.0)
    }
}

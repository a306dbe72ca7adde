//! Operator sugar for jets. All jets combined inside one evaluation share a
//! base point; mixing base points through these operators is a bug and
//! panics. Use the `try_*` methods when that is not guaranteed.

use std::ops::{Add, Mul, Neg, Sub};

use super::Jet;

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&Jet> for &Jet {
            type Output = Jet;
            fn $method(self, rhs: &Jet) -> Jet {
                self.$checked(rhs).expect("jets from different base points")
            }
        }
        impl $trait<Jet> for &Jet {
            type Output = Jet;
            fn $method(self, rhs: Jet) -> Jet {
                self.$method(&rhs)
            }
        }
        impl $trait<&Jet> for Jet {
            type Output = Jet;
            fn $method(self, rhs: &Jet) -> Jet {
                (&self).$method(rhs)
            }
        }
        impl $trait<Jet> for Jet {
            type Output = Jet;
            fn $method(self, rhs: Jet) -> Jet {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

macro_rules! scalar_ops {
    ($lhs:ty) => {
        impl Add<f64> for $lhs {
            type Output = Jet;
            fn add(self, c: f64) -> Jet {
                self.add_scalar(c)
            }
        }
        impl Sub<f64> for $lhs {
            type Output = Jet;
            fn sub(self, c: f64) -> Jet {
                self.add_scalar(-c)
            }
        }
        impl Mul<f64> for $lhs {
            type Output = Jet;
            fn mul(self, c: f64) -> Jet {
                self.scale(c)
            }
        }
        impl Add<$lhs> for f64 {
            type Output = Jet;
            fn add(self, j: $lhs) -> Jet {
                j.add_scalar(self)
            }
        }
        impl Sub<$lhs> for f64 {
            type Output = Jet;
            fn sub(self, j: $lhs) -> Jet {
                j.scale(-1.0).add_scalar(self)
            }
        }
        impl Mul<$lhs> for f64 {
            type Output = Jet;
            fn mul(self, j: $lhs) -> Jet {
                j.scale(self)
            }
        }
    };
}

scalar_ops!(Jet);
scalar_ops!(&Jet);

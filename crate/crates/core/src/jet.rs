//! Second-order forward-mode jets.
//!
//! A [`Jet`] carries the value of a function of the chart coordinates together
//! with its gradient and Hessian at the evaluation point. Arithmetic propagates
//! all three through the chain rule, so component functions written once over
//! `Jet` yield exact first and second partials.
//!
//! Each jet also records how many derivative levels it knows. Seed variables
//! and constants are order 2. Extracting a partial derivative lowers the order
//! by one, and combining jets keeps the minimum. Asking an order-0 jet for a
//! derivative yields NaN, which downstream residual checks report as an
//! evaluation failure instead of silently returning garbage.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

pub const MAX_ORDER: u8 = 2;

#[derive(Clone, PartialEq)]
pub struct Jet {
    val: f64,
    grad: Vec<f64>,
    // Row-major m×m, kept symmetric.
    hess: Vec<f64>,
    order: u8,
}

impl fmt::Debug for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Jet")
            .field("val", &self.val)
            .field("grad", &self.grad)
            .field("order", &self.order)
            .finish()
    }
}

impl Jet {
    /// Constant in `nvars` variables.
    pub fn constant(val: f64, nvars: usize) -> Self {
        Self {
            val,
            grad: vec![0.0; nvars],
            hess: vec![0.0; nvars * nvars],
            order: MAX_ORDER,
        }
    }

    /// The coordinate function `x_index` evaluated at `val`.
    pub fn variable(index: usize, val: f64, nvars: usize) -> Self {
        let mut jet = Self::constant(val, nvars);
        jet.grad[index] = 1.0;
        jet
    }

    /// Seeds every coordinate of `point` as an independent variable.
    pub fn seed(point: &[f64]) -> Vec<Jet> {
        let m = point.len();
        point
            .iter()
            .enumerate()
            .map(|(i, &v)| Jet::variable(i, v, m))
            .collect()
    }

    /// Value-only jets: no derivative slots. Cheap evaluation of field values.
    pub fn seed_values(point: &[f64]) -> Vec<Jet> {
        point.iter().map(|&v| Jet::constant(v, 0)).collect()
    }

    pub fn from_parts(val: f64, grad: Vec<f64>, hess: Vec<f64>, order: u8) -> Self {
        assert_eq!(hess.len(), grad.len() * grad.len(), "hessian shape");
        Self {
            val,
            grad,
            hess,
            order: order.min(MAX_ORDER),
        }
    }

    /// A constant with the same variable count as `self`.
    pub fn lift(&self, val: f64) -> Jet {
        Jet::constant(val, self.nvars())
    }

    pub fn zero_like(&self) -> Jet {
        self.lift(0.0)
    }

    pub fn nvars(&self) -> usize {
        self.grad.len()
    }

    pub fn value(&self) -> f64 {
        self.val
    }

    pub fn order(&self) -> u8 {
        self.order
    }

    pub fn gradient(&self) -> &[f64] {
        &self.grad
    }

    pub fn hessian(&self) -> &[f64] {
        &self.hess
    }

    pub fn second(&self, i: usize, j: usize) -> f64 {
        self.hess[i * self.nvars() + j]
    }

    pub fn is_finite(&self) -> bool {
        self.val.is_finite()
            && self.grad.iter().all(|v| v.is_finite())
            && self.hess.iter().all(|v| v.is_finite())
    }

    /// ∂/∂x_k as a jet one order lower.
    pub fn partial(&self, k: usize) -> Jet {
        let m = self.nvars();
        if self.order == 0 {
            return Jet {
                val: f64::NAN,
                grad: vec![f64::NAN; m],
                hess: vec![f64::NAN; m * m],
                order: 0,
            };
        }
        let grad = if self.order >= 2 {
            self.hess[k * m..(k + 1) * m].to_vec()
        } else {
            vec![f64::NAN; m]
        };
        Jet {
            val: self.grad[k],
            grad,
            hess: vec![f64::NAN; m * m],
            order: self.order - 1,
        }
    }

    /// Directional derivative `Σ_k dir_k ∂_k self`, with jet-valued direction.
    pub fn derivative_along(&self, dir: &[Jet]) -> Jet {
        let mut acc = self.zero_like();
        for (k, d) in dir.iter().enumerate() {
            acc += &(d * &self.partial(k));
        }
        acc
    }

    /// Applies a scalar function given its value and first two derivatives at `self.val`.
    fn chain(&self, f0: f64, f1: f64, f2: f64) -> Jet {
        let m = self.nvars();
        let grad = self.grad.iter().map(|g| f1 * g).collect();
        let mut hess = vec![0.0; m * m];
        for i in 0..m {
            for j in 0..m {
                hess[i * m + j] = f1 * self.hess[i * m + j] + f2 * self.grad[i] * self.grad[j];
            }
        }
        Jet {
            val: f0,
            grad,
            hess,
            order: self.order,
        }
    }

    pub fn sin(&self) -> Jet {
        let (s, c) = self.val.sin_cos();
        self.chain(s, c, -s)
    }

    pub fn cos(&self) -> Jet {
        let (s, c) = self.val.sin_cos();
        self.chain(c, -s, -c)
    }

    pub fn tan(&self) -> Jet {
        let t = self.val.tan();
        let sec2 = 1.0 + t * t;
        self.chain(t, sec2, 2.0 * t * sec2)
    }

    pub fn exp(&self) -> Jet {
        let e = self.val.exp();
        self.chain(e, e, e)
    }

    pub fn ln(&self) -> Jet {
        let v = self.val;
        self.chain(v.ln(), 1.0 / v, -1.0 / (v * v))
    }

    pub fn sqrt(&self) -> Jet {
        let r = self.val.sqrt();
        self.chain(r, 0.5 / r, -0.25 / (r * self.val))
    }

    pub fn recip(&self) -> Jet {
        let v = self.val;
        self.chain(1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v))
    }

    pub fn powi(&self, n: i32) -> Jet {
        let v = self.val;
        let nf = f64::from(n);
        let f1 = if n == 0 { 0.0 } else { nf * v.powi(n - 1) };
        let f2 = if n == 0 || n == 1 {
            0.0
        } else {
            nf * (nf - 1.0) * v.powi(n - 2)
        };
        self.chain(v.powi(n), f1, f2)
    }

    pub fn square(&self) -> Jet {
        self * self
    }

    pub fn scale(&self, c: f64) -> Jet {
        Jet {
            val: c * self.val,
            grad: self.grad.iter().map(|g| c * g).collect(),
            hess: self.hess.iter().map(|h| c * h).collect(),
            order: self.order,
        }
    }

    fn combine(&self, rhs: &Jet, a: f64, b: f64) -> Jet {
        debug_assert_eq!(self.nvars(), rhs.nvars(), "jet variable count mismatch");
        Jet {
            val: a * self.val + b * rhs.val,
            grad: self
                .grad
                .iter()
                .zip(&rhs.grad)
                .map(|(x, y)| a * x + b * y)
                .collect(),
            hess: self
                .hess
                .iter()
                .zip(&rhs.hess)
                .map(|(x, y)| a * x + b * y)
                .collect(),
            order: self.order.min(rhs.order),
        }
    }

    fn product(&self, rhs: &Jet) -> Jet {
        debug_assert_eq!(self.nvars(), rhs.nvars(), "jet variable count mismatch");
        let m = self.nvars();
        let (a, b) = (self.val, rhs.val);
        let grad = (0..m).map(|i| a * rhs.grad[i] + b * self.grad[i]).collect();
        let mut hess = vec![0.0; m * m];
        for i in 0..m {
            for j in 0..m {
                let k = i * m + j;
                hess[k] = a * rhs.hess[k]
                    + b * self.hess[k]
                    + self.grad[i] * rhs.grad[j]
                    + rhs.grad[i] * self.grad[j];
            }
        }
        Jet {
            val: a * b,
            grad,
            hess,
            order: self.order.min(rhs.order),
        }
    }
}

/// Sum of products `Σ a_i b_i`.
pub fn dot(a: &[Jet], b: &[Jet]) -> Jet {
    assert_eq!(a.len(), b.len());
    let mut iter = a.iter().zip(b);
    let Some((x, y)) = iter.next() else {
        panic!("dot of empty jet slices");
    };
    let mut acc = x * y;
    for (x, y) in iter {
        acc += &(x * y);
    }
    acc
}

macro_rules! jet_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl $tr<&Jet> for &Jet {
            type Output = Jet;
            fn $method(self, rhs: &Jet) -> Jet {
                let f: fn(&Jet, &Jet) -> Jet = $body;
                f(self, rhs)
            }
        }
        impl $tr<Jet> for Jet {
            type Output = Jet;
            fn $method(self, rhs: Jet) -> Jet {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Jet> for Jet {
            type Output = Jet;
            fn $method(self, rhs: &Jet) -> Jet {
                (&self).$method(rhs)
            }
        }
        impl $tr<Jet> for &Jet {
            type Output = Jet;
            fn $method(self, rhs: Jet) -> Jet {
                self.$method(&rhs)
            }
        }
    };
}

jet_binop!(Add, add, |a, b| a.combine(b, 1.0, 1.0));
jet_binop!(Sub, sub, |a, b| a.combine(b, 1.0, -1.0));
jet_binop!(Mul, mul, |a, b| a.product(b));
jet_binop!(Div, div, |a, b| a.product(&b.recip()));

macro_rules! jet_scalar_op {
    ($tr:ident, $method:ident, $body:expr) => {
        impl $tr<f64> for &Jet {
            type Output = Jet;
            fn $method(self, rhs: f64) -> Jet {
                let f: fn(&Jet, f64) -> Jet = $body;
                f(self, rhs)
            }
        }
        impl $tr<f64> for Jet {
            type Output = Jet;
            fn $method(self, rhs: f64) -> Jet {
                (&self).$method(rhs)
            }
        }
    };
}

jet_scalar_op!(Mul, mul, |a, c| a.scale(c));
jet_scalar_op!(Div, div, |a, c| a.scale(1.0 / c));
jet_scalar_op!(Add, add, |a, c| {
    let mut out = a.clone();
    out.val += c;
    out
});
jet_scalar_op!(Sub, sub, |a, c| {
    let mut out = a.clone();
    out.val -= c;
    out
});

impl Mul<&Jet> for f64 {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        rhs.scale(self)
    }
}

impl Mul<Jet> for f64 {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        rhs.scale(self)
    }
}

impl Sub<&Jet> for f64 {
    type Output = Jet;
    fn sub(self, rhs: &Jet) -> Jet {
        -rhs + self
    }
}

impl Sub<Jet> for f64 {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        -rhs + self
    }
}

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

impl AddAssign<&Jet> for Jet {
    fn add_assign(&mut self, rhs: &Jet) {
        debug_assert_eq!(self.nvars(), rhs.nvars(), "jet variable count mismatch");
        self.val += rhs.val;
        for (a, b) in self.grad.iter_mut().zip(&rhs.grad) {
            *a += b;
        }
        for (a, b) in self.hess.iter_mut().zip(&rhs.hess) {
            *a += b;
        }
        self.order = self.order.min(rhs.order);
    }
}

impl SubAssign<&Jet> for Jet {
    fn sub_assign(&mut self, rhs: &Jet) {
        *self += &(-rhs);
    }
}

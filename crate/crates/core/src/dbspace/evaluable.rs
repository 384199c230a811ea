//! Shared, immutable entire functions.

use alloc::boxed::Box;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    ClosedFormModel,
    ProductBacked,
    ArithmeticCombination,
}

/// An entire function given by an evaluation rule.
pub trait EntireFunction: Send + Sync {
    fn eval(&self, z: Complex64) -> Complex64;

    /// Analytic derivative, when known.
    fn derivative(&self, _z: Complex64) -> Option<Complex64> {
        None
    }

    /// `f(x)` at a real point; override when a cheaper real path exists.
    fn eval_real(&self, x: f64) -> Complex64 {
        self.eval(Complex64::new(x, 0.0))
    }

    /// `f'(x)` at a real point, when known.
    fn derivative_real(&self, x: f64) -> Option<Complex64> {
        self.derivative(Complex64::new(x, 0.0))
    }

    fn kind(&self) -> Kind;

    fn describe(&self) -> &str {
        "entire function"
    }
}

/// Reference-counted handle to an [`EntireFunction`].
#[derive(Clone)]
pub struct EntireEvaluable {
    inner: Arc<dyn EntireFunction>,
}

impl fmt::Debug for EntireEvaluable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EntireEvaluable")
            .field("kind", &self.inner.kind())
            .field("describe", &self.inner.describe())
            .finish()
    }
}

impl EntireEvaluable {
    pub fn new(f: impl EntireFunction + 'static) -> Self {
        Self { inner: Arc::new(f) }
    }

    /// Wrap a closure; the derivative falls back to central differences.
    pub fn from_fn(kind: Kind, f: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static) -> Self {
        Self::new(FnEntire { f: Box::new(f), d: None, kind })
    }

    /// Wrap a closure together with its derivative.
    pub fn from_fn_with_derivative(
        kind: Kind,
        f: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static,
        d: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        Self::new(FnEntire { f: Box::new(f), d: Some(Box::new(d)), kind })
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.inner.eval(z)
    }

    /// `f#(z) = conj f(z̄)`.
    pub fn sharp(&self, z: Complex64) -> Complex64 {
        self.inner.eval(z.conj()).conj()
    }

    /// Analytic derivative, else a central difference with step
    /// `cbrt(ε)·max(1, |z|)` along the real direction.
    pub fn derivative(&self, z: Complex64) -> Complex64 {
        if let Some(d) = self.inner.derivative(z) {
            return d;
        }
        let h = f64::EPSILON.cbrt() * z.norm().max(1.0);
        (self.inner.eval(z + h) - self.inner.eval(z - h)) / (2.0 * h)
    }

    /// Derivative of `f#`.
    pub fn sharp_derivative(&self, z: Complex64) -> Complex64 {
        self.derivative(z.conj()).conj()
    }

    pub fn eval_real(&self, x: f64) -> Complex64 {
        self.inner.eval_real(x)
    }

    pub fn derivative_real(&self, x: f64) -> Complex64 {
        if let Some(d) = self.inner.derivative_real(x) {
            return d;
        }
        let h = f64::EPSILON.cbrt() * x.abs().max(1.0);
        (self.inner.eval_real(x + h) - self.inner.eval_real(x - h)) / (2.0 * h)
    }

    pub fn has_analytic_derivative(&self) -> bool {
        self.inner.derivative(Complex64::new(0.0, 0.0)).is_some()
    }

    pub fn kind(&self) -> Kind {
        self.inner.kind()
    }

    pub fn describe(&self) -> &str {
        self.inner.describe()
    }
}

type Rule = Box<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

struct FnEntire {
    f: Rule,
    d: Option<Rule>,
    kind: Kind,
}

impl EntireFunction for FnEntire {
    fn eval(&self, z: Complex64) -> Complex64 {
        (self.f)(z)
    }

    fn derivative(&self, z: Complex64) -> Option<Complex64> {
        self.d.as_ref().map(|d| d(z))
    }

    fn kind(&self) -> Kind {
        self.kind
    }
}

/// `e^{−i·a·z}`; Hermite–Biehler for `a > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpLinear {
    pub a: f64,
}

impl EntireFunction for ExpLinear {
    fn eval(&self, z: Complex64) -> Complex64 {
        (Complex64::new(0.0, -self.a) * z).exp()
    }

    fn derivative(&self, z: Complex64) -> Option<Complex64> {
        Some(Complex64::new(0.0, -self.a) * self.eval(z))
    }

    fn kind(&self) -> Kind {
        Kind::ClosedFormModel
    }

    fn describe(&self) -> &str {
        "exp(-i a z)"
    }
}

/// `e^{−iz}(z + i)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtanModel;

impl EntireFunction for AtanModel {
    fn eval(&self, z: Complex64) -> Complex64 {
        (Complex64::new(0.0, -1.0) * z).exp() * (z + Complex64::i())
    }

    fn derivative(&self, z: Complex64) -> Option<Complex64> {
        // e^{−iz}(1 − i(z + i)) = e^{−iz}(2 − iz)
        Some((Complex64::new(0.0, -1.0) * z).exp() * (Complex64::new(2.0, 0.0) - Complex64::i() * z))
    }

    fn kind(&self) -> Kind {
        Kind::ClosedFormModel
    }

    fn describe(&self) -> &str {
        "exp(-i z)(z + i)"
    }
}

/// Polynomial with coefficients in ascending degree.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    pub coeffs: Vec<Complex64>,
}

impl EntireFunction for Polynomial {
    fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    fn derivative(&self, z: Complex64) -> Option<Complex64> {
        let d = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, (k, &c)| acc * z + c * k as f64);
        Some(d)
    }

    fn kind(&self) -> Kind {
        Kind::ClosedFormModel
    }

    fn describe(&self) -> &str {
        "polynomial"
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn sharp_of_exp_linear() {
        let e = EntireEvaluable::new(ExpLinear { a: 2.0 });
        let z = Complex64::new(0.3, 0.4);
        // e#(z) = e^{+2iz}
        let expected = (Complex64::new(0.0, 2.0) * z).exp();
        assert!((e.sharp(z) - expected).norm() < 1e-15);
    }

    #[test]
    fn finite_difference_matches_analytic() {
        let exact = EntireEvaluable::new(AtanModel);
        let numeric = EntireEvaluable::from_fn(Kind::ClosedFormModel, |z| AtanModel.eval(z));
        assert!(!numeric.has_analytic_derivative());
        for x in [-3.0, 0.0, 0.7, 5.0] {
            let z = Complex64::new(x, 0.2);
            let d = exact.derivative(z);
            assert!((d - numeric.derivative(z)).norm() < 1e-9 * d.norm().max(1.0));
        }
    }

    #[test]
    fn polynomial_horner() {
        // z + i
        let p = Polynomial { coeffs: vec![Complex64::i(), Complex64::new(1.0, 0.0)] };
        let z = Complex64::new(2.0, -1.0);
        assert_eq!(p.eval(z), Complex64::new(2.0, 0.0));
        assert_eq!(p.derivative(z), Some(Complex64::new(1.0, 0.0)));
    }
}

//! Dense univariate polynomials over the rationals.

use std::ops::{Add, Mul, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

/// Coefficients from the constant term upward, with no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(Vec<BigRational>);

impl Poly {
    pub fn new(mut c: Vec<BigRational>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        Poly(c)
    }

    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn constant(c: BigRational) -> Self {
        Poly::new(vec![c])
    }

    /// `x - root`
    pub fn linear(root: &BigRational) -> Self {
        Poly::new(vec![-root.clone(), BigRational::one()])
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lead(&self) -> BigRational {
        self.0.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.0.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.0.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn scale(&self, s: &BigRational) -> Poly {
        Poly::new(self.0.iter().map(|c| c * s).collect())
    }

    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let mut r = self.0.clone();
        let Some(nd) = self.degree().filter(|&n| n >= dd) else {
            return (Poly::zero(), self.clone());
        };
        let mut q = vec![BigRational::zero(); nd - dd + 1];
        let lead = d.lead();
        for i in (0..=nd - dd).rev() {
            let f = &r[i + dd] / &lead;
            if f.is_zero() {
                continue;
            }
            for (j, c) in d.0.iter().enumerate() {
                r[i + j] -= &f * c;
            }
            q[i] = f;
        }
        (Poly::new(q), Poly::new(r))
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lead().recip())
    }

    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `p(x0 + t)` as a polynomial in `t`.
    pub fn shift(&self, x0: &BigRational) -> Poly {
        let step = Poly::new(vec![x0.clone(), BigRational::one()]);
        self.0.iter().rev().fold(Poly::zero(), |acc, c| &(&acc * &step) + &Poly::constant(c.clone()))
    }

    /// The unique polynomial of degree `< xs.len()` through the given values.
    pub fn interpolate(xs: &[BigRational], ys: &[BigRational]) -> Poly {
        assert_eq!(xs.len(), ys.len());
        // Newton divided differences
        let n = xs.len();
        let mut coef = ys.to_vec();
        for j in 1..n {
            for i in (j..n).rev() {
                coef[i] = (&coef[i] - &coef[i - 1]) / (&xs[i] - &xs[i - j]);
            }
        }
        let mut p = Poly::zero();
        for i in (0..n).rev() {
            p = &(&p * &Poly::linear(&xs[i])) + &Poly::constant(coef[i].clone());
        }
        p
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![BigRational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Poly::new(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(x: i64) -> BigRational {
        BigRational::from_integer(x.into())
    }

    fn p(c: &[i64]) -> Poly {
        Poly::new(c.iter().map(|&x| q(x)).collect())
    }

    #[test]
    fn arithmetic() {
        let a = p(&[-1, 0, 1]); // x² - 1
        let b = p(&[1, 1]); // x + 1
        let (quot, rem) = a.div_rem(&b);
        assert_eq!(quot, p(&[-1, 1]));
        assert!(rem.is_zero());
        assert_eq!(a.gcd(&p(&[-1, 1])), p(&[-1, 1]));
        assert_eq!(a.eval(&q(3)), q(8));
        assert_eq!(a.shift(&q(1)), p(&[0, 2, 1]));
        assert_eq!(p(&[0, 0, 0]).degree(), None);
    }

    #[test]
    fn interpolation_recovers() {
        let f = p(&[3, -2, 0, 5]);
        let xs: Vec<BigRational> = (0..4).map(q).collect();
        let ys: Vec<BigRational> = xs.iter().map(|x| f.eval(x)).collect();
        assert_eq!(Poly::interpolate(&xs, &ys), f);
    }
}

//! Dense truncated Laurent series over Complex64.
//!
//! A series stores coefficients for every exponent in
//! `min_exponent ..= truncation_order`; exponents above the truncation order
//! are unknown, exponents below `min_exponent` are exactly zero. All
//! arithmetic propagates the *minimum admissible* truncation order, so a
//! coefficient is never fabricated from incomplete convolution data.

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedLaurentSeries {
    min_exponent: i32,
    truncation_order: i32,
    /// coefficient of u^(min_exponent + i) at index i
    coefficients: Vec<Complex64>,
}

impl TruncatedLaurentSeries {
    pub fn new(min_exponent: i32, coefficients: Vec<Complex64>) -> Self {
        assert!(
            !coefficients.is_empty(),
            "series needs at least one coefficient"
        );
        let truncation_order = min_exponent + coefficients.len() as i32 - 1;
        TruncatedLaurentSeries {
            min_exponent,
            truncation_order,
            coefficients,
        }
    }

    /// Series with all stored coefficients zero on `min_exponent ..= truncation_order`.
    pub fn zeros(min_exponent: i32, truncation_order: i32) -> Self {
        assert!(truncation_order >= min_exponent);
        let len = (truncation_order - min_exponent + 1) as usize;
        TruncatedLaurentSeries {
            min_exponent,
            truncation_order,
            coefficients: vec![Complex64::ZERO; len],
        }
    }

    pub fn constant(c: Complex64, truncation_order: i32) -> Self {
        let mut s = Self::zeros(0, truncation_order.max(0));
        s.coefficients[0] = c;
        s
    }

    pub fn one(truncation_order: i32) -> Self {
        Self::constant(Complex64::ONE, truncation_order)
    }

    /// c·u^k as a series truncated at `truncation_order`.
    pub fn monomial(c: Complex64, k: i32, truncation_order: i32) -> Self {
        let mut s = Self::zeros(k.min(truncation_order), truncation_order.max(k));
        s.coefficients[(k - s.min_exponent) as usize] = c;
        s
    }

    /// Build from a coefficient function on `min_exponent ..= truncation_order`.
    pub fn from_fn(
        min_exponent: i32,
        truncation_order: i32,
        f: impl FnMut(i32) -> Complex64,
    ) -> Self {
        assert!(truncation_order >= min_exponent);
        let coefficients = (min_exponent..=truncation_order).map(f).collect();
        TruncatedLaurentSeries {
            min_exponent,
            truncation_order,
            coefficients,
        }
    }

    pub fn min_exponent(&self) -> i32 {
        self.min_exponent
    }

    pub fn truncation_order(&self) -> i32 {
        self.truncation_order
    }

    /// Coefficient of u^k. Zero below `min_exponent`; asking above the
    /// truncation order is a contract violation (the value is unknown).
    pub fn extract_coeff(&self, k: i32) -> Result<Complex64> {
        if k > self.truncation_order {
            return Err(Error::precondition(format!(
                "extract_coeff: exponent {k} exceeds truncation order {}",
                self.truncation_order
            )));
        }
        if k < self.min_exponent {
            return Ok(Complex64::ZERO);
        }
        Ok(self.coefficients[(k - self.min_exponent) as usize])
    }

    fn coeff_or_zero(&self, k: i32) -> Complex64 {
        if k < self.min_exponent || k > self.truncation_order {
            Complex64::ZERO
        } else {
            self.coefficients[(k - self.min_exponent) as usize]
        }
    }

    /// Drop exactly-zero leading coefficients (no tolerance: normalization
    /// must not erase small genuine values).
    pub fn normalize(mut self) -> Self {
        while self.coefficients.len() > 1 && self.coefficients[0] == Complex64::ZERO {
            self.coefficients.remove(0);
            self.min_exponent += 1;
        }
        self
    }

    /// Restrict to a lower truncation order (for aligning operands).
    pub fn truncated(&self, truncation_order: i32) -> Self {
        assert!(truncation_order >= self.min_exponent);
        let t = truncation_order.min(self.truncation_order);
        let len = (t - self.min_exponent + 1) as usize;
        TruncatedLaurentSeries {
            min_exponent: self.min_exponent,
            truncation_order: t,
            coefficients: self.coefficients[..len].to_vec(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let min = self.min_exponent.min(other.min_exponent);
        let trunc = self.truncation_order.min(other.truncation_order);
        Self::from_fn(min, trunc, |k| {
            self.coeff_or_zero(k) + other.coeff_or_zero(k)
        })
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut s = self.clone();
        for v in &mut s.coefficients {
            *v *= c;
        }
        s
    }

    pub fn neg(&self) -> Self {
        self.scale(-Complex64::ONE)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let min = self.min_exponent + other.min_exponent;
        // Exponent e is complete only if every contributing pair is stored.
        let trunc = (self.truncation_order + other.min_exponent)
            .min(other.truncation_order + self.min_exponent);
        let mut out = Self::zeros(min, trunc);
        for (i, &a) in self.coefficients.iter().enumerate() {
            if a == Complex64::ZERO {
                continue;
            }
            let ea = self.min_exponent + i as i32;
            for (j, &b) in other.coefficients.iter().enumerate() {
                let e = ea + other.min_exponent + j as i32;
                if e > trunc {
                    break;
                }
                out.coefficients[(e - min) as usize] += a * b;
            }
        }
        out
    }

    /// Multiplicative inverse. The lowest stored coefficient of magnitude
    /// above `abs_tol` becomes the pole/zero order; anything below it must be
    /// negligible or the division is rejected as a zero divisor.
    pub fn reciprocal(&self, abs_tol: f64) -> Result<Self> {
        let lead = self
            .coefficients
            .iter()
            .position(|c| c.norm() > abs_tol)
            .ok_or_else(|| Error::precondition("reciprocal: series is zero to tolerance"))?;
        let d = self.min_exponent + lead as i32;
        let c0 = self.coefficients[lead];
        let order = (self.truncation_order - d) as usize;
        // self = c0·u^d·(1 + h) with h_j = c_{d+j}/c0.
        let mut h = vec![Complex64::ZERO; order + 1];
        for (hj, &cj) in h[1..].iter_mut().zip(&self.coefficients[lead + 1..]) {
            *hj = cj / c0;
        }
        // (1+h)^{-1}: r_0 = 1, r_n = −Σ_{j=1..n} h_j r_{n−j}.
        let mut r = vec![Complex64::ZERO; order + 1];
        r[0] = Complex64::ONE;
        for n in 1..=order {
            let mut acc = Complex64::ZERO;
            for j in 1..=n {
                acc += h[j] * r[n - j];
            }
            r[n] = -acc;
        }
        let coefficients = r.iter().map(|&rj| rj / c0).collect();
        Ok(TruncatedLaurentSeries {
            min_exponent: -d,
            truncation_order: self.truncation_order - 2 * d,
            coefficients,
        })
    }

    pub fn div(&self, other: &Self, abs_tol: f64) -> Result<Self> {
        Ok(self.mul(&other.reciprocal(abs_tol)?))
    }

    /// exp of a series with no constant or pole part (all exponents ≥ 1).
    pub fn exp_of_regular(&self) -> Result<Self> {
        for k in self.min_exponent..=0.min(self.truncation_order) {
            if self.coeff_or_zero(k) != Complex64::ZERO {
                return Err(Error::precondition(
                    "exp_of_regular: input has nonzero coefficients at exponents ≤ 0",
                ));
            }
        }
        let t = self.truncation_order;
        if t < 0 {
            return Err(Error::precondition(
                "exp_of_regular: truncation order below zero leaves nothing known",
            ));
        }
        // y = exp(f) satisfies y' = f'·y: n·y_n = Σ_{k=1..n} k·f_k·y_{n−k}.
        let mut y = vec![Complex64::ZERO; t as usize + 1];
        y[0] = Complex64::ONE;
        for n in 1..=t as usize {
            let mut acc = Complex64::ZERO;
            for k in 1..=n {
                let fk = self.coeff_or_zero(k as i32);
                if fk != Complex64::ZERO {
                    acc += fk * (k as f64) * y[n - k];
                }
            }
            y[n] = acc / n as f64;
        }
        Ok(TruncatedLaurentSeries {
            min_exponent: 0,
            truncation_order: t,
            coefficients: y,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn monomial_product_cancels_pole() {
        let inv_u = TruncatedLaurentSeries::monomial(Complex64::ONE, -1, 8);
        let u = TruncatedLaurentSeries::monomial(Complex64::ONE, 1, 8);
        let p = inv_u.mul(&u).normalize();
        assert_eq!(p.min_exponent(), 0);
        assert_eq!(p.extract_coeff(0).unwrap(), Complex64::ONE);
        for k in 1..=p.truncation_order() {
            assert_eq!(p.extract_coeff(k).unwrap(), Complex64::ZERO);
        }
    }

    #[test]
    fn geometric_series_coefficients() {
        // 1/(1−u): all coefficients 1.
        let mut one_minus_u = TruncatedLaurentSeries::zeros(0, 10);
        one_minus_u.coefficients[0] = Complex64::ONE;
        one_minus_u.coefficients[1] = -Complex64::ONE;
        let inv = one_minus_u.reciprocal(1e-12).unwrap();
        assert_eq!(inv.extract_coeff(5).unwrap(), Complex64::ONE);
        assert_eq!(inv.extract_coeff(0).unwrap(), Complex64::ONE);
    }

    #[test]
    fn bernoulli_b1_from_division() {
        // u/(e^u − 1): coefficient of u^1 is B₁ = −1/2.
        let t = 16;
        let numer = TruncatedLaurentSeries::monomial(Complex64::ONE, 1, t);
        let denom = TruncatedLaurentSeries::from_fn(0, t, |k| {
            if k == 0 {
                Complex64::ZERO
            } else {
                Complex64::from(1.0 / crate::numeric::factorial(k as u32))
            }
        });
        let q = numer.div(&denom, 1e-12).unwrap();
        assert!((q.extract_coeff(1).unwrap() - c(-0.5, 0.0)).norm() < 1e-14);
        assert!((q.extract_coeff(0).unwrap() - Complex64::ONE).norm() < 1e-14);
        // B₂ = 1/6 → coefficient 1/12; B₃ = 0.
        assert!((q.extract_coeff(2).unwrap() - c(1.0 / 12.0, 0.0)).norm() < 1e-14);
        assert!(q.extract_coeff(3).unwrap().norm() < 1e-15);
    }

    #[test]
    fn truncation_order_is_minimum_admissible() {
        let a = TruncatedLaurentSeries::new(-1, vec![Complex64::ONE; 10]); // trunc 8
        let b = TruncatedLaurentSeries::new(-2, vec![Complex64::ONE; 6]); // trunc 3
        let p = a.mul(&b);
        assert_eq!(p.min_exponent(), -3);
        // min(8 + (−2), 3 + (−1)) = 2
        assert_eq!(p.truncation_order(), 2);
        assert!(p.extract_coeff(3).is_err());
    }

    #[test]
    fn coeff_below_min_exponent_is_zero() {
        let a = TruncatedLaurentSeries::new(2, vec![c(3.0, 0.0)]);
        assert_eq!(a.extract_coeff(-5).unwrap(), Complex64::ZERO);
    }

    #[test]
    fn exp_matches_scalar_exponential() {
        let t = 12;
        let f = TruncatedLaurentSeries::monomial(c(0.3, 0.1), 1, t);
        let y = f.exp_of_regular().unwrap();
        for n in 0..=4 {
            let expect = crate::numeric::factorial(n as u32).recip() * c(0.3, 0.1).powu(n as u32);
            assert!((y.extract_coeff(n).unwrap() - expect).norm() < 1e-14);
        }
        let bad = TruncatedLaurentSeries::one(4);
        assert!(bad.exp_of_regular().is_err());
    }

    #[test]
    fn reciprocal_of_unit_series_roundtrip() {
        let t = 14;
        let f = TruncatedLaurentSeries::from_fn(0, t, |k| match k {
            0 => Complex64::ONE,
            _ => c(0.7, -0.2).powu(k as u32) / (k as f64 + 1.0),
        });
        let g = f.reciprocal(1e-12).unwrap();
        let p = f.mul(&g);
        assert!((p.extract_coeff(0).unwrap() - Complex64::ONE).norm() < 1e-12);
        for k in 1..=p.truncation_order() {
            assert!(p.extract_coeff(k).unwrap().norm() < 1e-12);
        }
    }

    #[test]
    fn zero_series_division_rejected() {
        let z = TruncatedLaurentSeries::zeros(-2, 5);
        assert!(z.reciprocal(1e-12).is_err());
    }
}

//! Branch-aware complex elementary functions and the complex gamma function.
//!
//! Everything here is a pure function; branch choices are always explicit.
//! The `Hankel` branch never infers its argument from the principal one —
//! the contour code supplies the argument it tracked along the path.

pub mod series;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const TAU: f64 = std::f64::consts::TAU;

/// Strictly positive and not NaN. Validation guards test the negation, so a
/// NaN parameter is rejected rather than slipping past a `<=` rewrite.
pub(crate) fn is_positive(x: f64) -> bool {
    x > 0.0
}

/// e(z) := exp(2πi·z).
pub fn e2pi(z: Complex64) -> Complex64 {
    // exp(2πi(x+iy)) = e^{-2πy}(cos 2πx + i sin 2πx)
    let r = (-TAU * z.im).exp();
    let (s, c) = (TAU * z.re).sin_cos();
    Complex64::new(r * c, r * s)
}

/// Argument window for complex powers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Branch {
    /// Arg(z) ∈ (−π, π].
    Principal,
    /// Caller-tracked argument, typically in [0, 2π] along the loop of the
    /// Hankel contour. The value is used verbatim.
    Hankel { arg: f64 },
}

/// z^s = exp(s·(log|z| + i·Arg(z))) with the argument fixed by `branch`.
pub fn cpow(z: Complex64, s: Complex64, branch: Branch) -> Result<Complex64> {
    if z == Complex64::ZERO {
        // 0^s is only meaningful for positive integer exponents.
        if s.im == 0.0 && s.re > 0.0 && s.re.fract() == 0.0 {
            return Ok(Complex64::ZERO);
        }
        return Err(Error::precondition(
            "cpow: zero base with non-positive-integer exponent",
        ));
    }
    let arg = match branch {
        Branch::Principal => {
            // Arg ∈ (−π, π]: a signed −0.0 imaginary part must not flip the cut.
            let a = z.arg();
            if a == -std::f64::consts::PI {
                std::f64::consts::PI
            } else {
                a
            }
        }
        Branch::Hankel { arg } => arg,
    };
    let log_z = Complex64::new(z.norm().ln(), arg);
    Ok((s * log_z).exp())
}

/// Principal-branch power of a nonzero complex base.
pub fn cpow_principal(z: Complex64, s: Complex64) -> Result<Complex64> {
    cpow(z, s, Branch::Principal)
}

const GAMMA_R: f64 = 10.900511;

// Rational-approximation coefficients for the gamma function (the widely
// used R=10.900511 set); ≥ 13 correct digits in double precision.
const GAMMA_DK: &[f64] = &[
    2.485_740_891_387_535_5e-5,
    1.051_423_785_817_219_7,
    -3.456_870_972_220_162_5,
    4.512_277_094_668_948,
    -2.982_852_253_235_766_4,
    1.056_397_115_771_267,
    -1.954_287_731_916_458_7e-1,
    1.709_705_434_044_412e-2,
    -5.719_261_174_043_057e-4,
    4.633_994_733_599_057e-6,
    -2.719_949_084_886_077_2e-9,
];

const TWO_SQRT_E_OVER_PI: f64 = 1.8603827342052657173362492472666631120594218414085755;

/// True when s sits at a pole of Γ (a non-positive integer) to within `tol`.
pub fn is_gamma_pole(s: Complex64, tol: f64) -> bool {
    s.im.abs() <= tol && s.re <= 0.5 && (s.re - s.re.round()).abs() <= tol
}

fn gamma_unchecked(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // Reflection Γ(z)Γ(1−z) = π / sin(πz).
        let pi = std::f64::consts::PI;
        let s = (Complex64::from(pi) * z).sin();
        Complex64::from(pi) / (s * gamma_unchecked(Complex64::from(1.0) - z))
    } else {
        let mut sum = Complex64::from(GAMMA_DK[0]);
        for (i, &dk) in GAMMA_DK.iter().enumerate().skip(1) {
            sum += dk / (z + (i as f64 - 1.0));
        }
        let base = (z + (GAMMA_R - 0.5)) / std::f64::consts::E;
        let pow = (base.ln() * (z - 0.5)).exp();
        sum * TWO_SQRT_E_OVER_PI * pow
    }
}

/// Complex gamma function; errors at the poles 0, −1, −2, …
pub fn gamma(s: Complex64) -> Result<Complex64> {
    if is_gamma_pole(s, 1e-14) {
        return Err(Error::precondition(format!(
            "gamma: pole at non-positive integer s = {s}"
        )));
    }
    Ok(gamma_unchecked(s))
}

/// 1/Γ(s), extended by 0 across the poles of Γ (an entire function).
pub fn recip_gamma(s: Complex64) -> Complex64 {
    if is_gamma_pole(s, 1e-14) {
        return Complex64::ZERO;
    }
    gamma_unchecked(s).finv()
}

/// k! as a float; exact for k ≤ 20.
pub fn factorial(k: u32) -> f64 {
    (1..=k as u64).map(|j| j as f64).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn e2pi_special_points() {
        assert!(close(e2pi(Complex64::ZERO), Complex64::ONE, 1e-15));
        assert!(close(e2pi(Complex64::from(0.5)), -Complex64::ONE, 1e-15));
        // e(i) = e^{-2π}; oracle: the exponential itself.
        let expected = Complex64::from((-TAU).exp());
        assert!(close(e2pi(Complex64::I), expected, 1e-18));
        assert!((expected.re - 0.00186744).abs() < 1e-8);
    }

    #[test]
    fn cpow_windows() {
        // Principal square root of −1 is i.
        let v = cpow(-Complex64::ONE, Complex64::from(0.5), Branch::Principal).unwrap();
        assert!(close(v, Complex64::I, 1e-15));

        // At z=1 with tracked Arg = 2π the power picks up the full monodromy.
        let s0 = Complex64::new(0.3, -0.7);
        let v = cpow(Complex64::ONE, s0, Branch::Hankel { arg: TAU }).unwrap();
        assert!(close(v, e2pi(s0), 1e-14));

        let v = cpow(
            Complex64::from(2.0),
            Complex64::from(-3.0),
            Branch::Principal,
        )
        .unwrap();
        assert!(close(v, Complex64::from(0.125), 1e-15));

        assert!(cpow(Complex64::ZERO, Complex64::from(-1.0), Branch::Principal).is_err());
        assert_eq!(
            cpow(Complex64::ZERO, Complex64::from(3.0), Branch::Principal).unwrap(),
            Complex64::ZERO
        );
    }

    #[test]
    fn gamma_classical_values() {
        assert!(close(gamma(Complex64::ONE).unwrap(), Complex64::ONE, 1e-14));
        assert!(close(
            gamma(Complex64::from(5.0)).unwrap(),
            Complex64::from(24.0),
            1e-12
        ));
        let sqrt_pi = std::f64::consts::PI.sqrt();
        assert!(close(
            gamma(Complex64::from(0.5)).unwrap(),
            Complex64::from(sqrt_pi),
            1e-14
        ));
        assert!(gamma(Complex64::ZERO).is_err());
        assert!(gamma(Complex64::from(-3.0)).is_err());
    }

    #[test]
    fn gamma_reflection_accuracy() {
        // Γ(−1/2) = −2√π via reflection.
        let v = gamma(Complex64::from(-0.5)).unwrap();
        assert!(close(
            v,
            Complex64::from(-2.0 * std::f64::consts::PI.sqrt()),
            1e-12
        ));
        // A complex spot value against the recurrence Γ(z+1) = zΓ(z).
        let z = Complex64::new(-1.3, 2.1);
        let lhs = gamma(z + 1.0).unwrap();
        let rhs = z * gamma(z).unwrap();
        assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm());
    }

    #[test]
    fn recip_gamma_vanishes_at_poles() {
        assert_eq!(recip_gamma(Complex64::ZERO), Complex64::ZERO);
        assert_eq!(recip_gamma(Complex64::from(-7.0)), Complex64::ZERO);
        let s = Complex64::new(2.5, 1.0);
        let prod = recip_gamma(s) * gamma(s).unwrap();
        assert!(close(prod, Complex64::ONE, 1e-13));
    }

    #[test]
    fn factorial_small_values() {
        assert_eq!(factorial(0), 1.0);
        assert_eq!(factorial(5), 120.0);
        assert_eq!(factorial(12), 479001600.0);
    }
}

//! Direct series evaluation in the convergence region, generalized Bernoulli
//! polynomials, Laurent coefficients of the kernel F_N at u = 0, and the
//! closed-form special values / residues that flow from them.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::domain::{classify, DomainPoint};
use crate::error::{Error, Result};
use crate::numeric::series::TruncatedLaurentSeries;
use crate::numeric::{cpow_principal, e2pi, factorial};
use crate::precision::PrecisionConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Series,
    Laurent,
    Hankel,
    ResidueSeries,
    ClosedForm,
}

/// A numerical value together with an honest error estimate and enough
/// bookkeeping to rerun the computation deterministically.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    pub value: Complex64,
    pub abs_error_estimate: f64,
    pub method: Method,
    pub meta: BTreeMap<String, String>,
}

impl EvalResult {
    pub fn new(value: Complex64, abs_error_estimate: f64, method: Method) -> Self {
        debug_assert!(abs_error_estimate >= 0.0 && abs_error_estimate.is_finite());
        EvalResult {
            value,
            abs_error_estimate,
            method,
            meta: BTreeMap::new(),
        }
    }

    pub fn with_meta(mut self, key: &str, value: impl ToString) -> Self {
        self.meta.insert(key.to_string(), value.to_string());
        self
    }
}

/// θ is an integer to within tol (the twist e(θ) degenerates to 1).
pub(crate) fn theta_is_integral(theta: f64, cfg: &PrecisionConfig) -> bool {
    (theta - theta.round()).abs() <= cfg.abs_tol
}

/// The kernel F(u) = e^{-uw} ∏_ℓ (1 − e(θ_ℓ)e^{-u a_ℓ})^{-1}; coordinates
/// with a_ℓ = 0 contribute the constant (1 − e(θ_ℓ))^{-1}.
pub fn f_test(u: Complex64, p: &DomainPoint, cfg: &PrecisionConfig) -> Result<Complex64> {
    let mut acc = (-u * p.w()).exp();
    for (l, &al) in p.a().iter().enumerate() {
        let twist = e2pi(Complex64::from(p.theta()[l]));
        let denom = if al.norm() <= cfg.abs_tol {
            Complex64::ONE - twist
        } else {
            Complex64::ONE - twist * (-u * al).exp()
        };
        if denom.norm() < cfg.abs_tol {
            return Err(Error::precondition(format!(
                "f_test: u = {u} is within abs_tol of a pole in coordinate {l}"
            )));
        }
        acc *= denom.finv();
    }
    Ok(acc)
}

/// Visit every m ∈ ℕ^parts with |m|₁ = total, in lexicographic order.
fn for_each_composition(parts: usize, total: u32, f: &mut impl FnMut(&[u32])) {
    fn rec(buf: &mut Vec<u32>, left: u32, remaining: usize, f: &mut impl FnMut(&[u32])) {
        if remaining == 1 {
            buf.push(left);
            f(buf);
            buf.pop();
            return;
        }
        for v in 0..=left {
            buf.push(v);
            rec(buf, left - v, remaining - 1, f);
            buf.pop();
        }
    }
    let mut buf = Vec::with_capacity(parts);
    rec(&mut buf, total, parts, f);
}

/// Direct series ∑_{m∈ℕ^N} e(m·θ)(w + m·a)^{-s}, summed in layers of
/// constant |m|₁ up to max_index, with a certified integral-comparison tail
/// bound. Requires Re(s) > N and p ∈ 𝒯⁺_N.
pub fn zeta_series(
    s: Complex64,
    p: &DomainPoint,
    max_index: u32,
    cfg: &PrecisionConfig,
) -> Result<EvalResult> {
    let n = p.dim();
    if s.re <= n as f64 {
        return Err(Error::precondition(format!(
            "zeta_series: Re(s) = {} must exceed N = {n}",
            s.re
        )));
    }
    if !classify(p, cfg).in_t_plus {
        return Err(Error::precondition(
            "zeta_series: point must lie in the open convergence region (Re w > 0, Re a_l > 0)",
        ));
    }
    if (max_index as usize) < n {
        return Err(Error::precondition(
            "zeta_series: max_index must be at least the dimension",
        ));
    }
    let mut value = Complex64::ZERO;
    let mut terms = 0u64;
    for layer in 0..=max_index {
        let mut layer_sum = Complex64::ZERO;
        let mut err: Option<Error> = None;
        for_each_composition(n, layer, &mut |m| {
            if err.is_some() {
                return;
            }
            let mut base = p.w();
            let mut dot = 0.0;
            for (l, &ml) in m.iter().enumerate() {
                base += ml as f64 * p.a()[l];
                dot += ml as f64 * p.theta()[l];
            }
            match cpow_principal(base, -s) {
                Ok(t) => layer_sum += e2pi(Complex64::from(dot)) * t,
                Err(e) => err = Some(e),
            }
            terms += 1;
        });
        if let Some(e) = err {
            return Err(e);
        }
        value += layer_sum;
    }
    // Tail: |w + m·a| ≥ |m|₁·r with r = min Re a_ℓ, and the layer |m|₁ = j
    // has C(j+N−1, N−1) ≤ (2j)^{N−1}/(N−1)! terms once j ≥ N, so
    //   Σ_{j>M} ≤ 2^{N−1}/((N−1)!·r^Re(s)) · M^{N−Re(s)}/(Re(s)−N).
    let r = p.a().iter().map(|a| a.re).fold(f64::INFINITY, f64::min);
    let m = max_index as f64;
    let tail = 2f64.powi(n as i32 - 1) / (factorial(n as u32 - 1) * r.powf(s.re))
        * m.powf(n as f64 - s.re)
        / (s.re - n as f64);
    if !tail.is_finite() || tail > cfg.rel_tol * value.norm() + cfg.abs_tol {
        return Err(Error::non_convergence(format!(
            "zeta_series: tail bound {tail:.3e} cannot certify the requested tolerance \
             at max_index {max_index}"
        )));
    }
    Ok(EvalResult::new(value, tail, Method::Series)
        .with_meta("max_index", max_index)
        .with_meta("terms", terms)
        .with_meta("tail_rate", r))
}

/// Generalized Bernoulli polynomial B_n(z, ξ) from the expansion
/// t e^{zt}/(ξ e^t − 1) = Σ B_n(z, ξ) tⁿ/n!. ξ = 1 (exactly) selects the
/// classical polynomials; ξ merely near 1 is rejected as ill-conditioned.
pub fn bernoulli_gen(
    n: u32,
    z: Complex64,
    xi: Complex64,
    cfg: &PrecisionConfig,
) -> Result<Complex64> {
    if xi == Complex64::ZERO {
        return Err(Error::precondition("bernoulli_gen: xi must be nonzero"));
    }
    let t = n as i32 + 4;
    let num = TruncatedLaurentSeries::from_fn(1, t, |k| {
        cpow_int(z, k - 1) / Complex64::from(factorial((k - 1) as u32))
    });
    let series = if xi == Complex64::ONE {
        // denominator e^t − 1 has a simple zero; the quotient is regular.
        let den = TruncatedLaurentSeries::from_fn(1, t + 2, |k| {
            Complex64::from(1.0 / factorial(k as u32))
        });
        num.div(&den, cfg.abs_tol)?
    } else {
        if (xi - Complex64::ONE).norm() < 1e3 * cfg.abs_tol {
            return Err(Error::precondition(
                "bernoulli_gen: xi is ill-conditioned (within 10^3·abs_tol of 1 but not 1)",
            ));
        }
        let den = TruncatedLaurentSeries::from_fn(0, t, |k| {
            if k == 0 {
                xi - Complex64::ONE
            } else {
                xi / Complex64::from(factorial(k as u32))
            }
        });
        num.div(&den, cfg.abs_tol)?
    };
    Ok(series.extract_coeff(n as i32)? * factorial(n))
}

/// z^k for integer k ≥ 0 with the convention 0⁰ = 1.
fn cpow_int(z: Complex64, k: i32) -> Complex64 {
    if k == 0 {
        Complex64::ONE
    } else {
        z.powi(k)
    }
}

/// Laurent expansion of F at u = 0, carrying exponents up to `order`.
/// The pole order equals #{ℓ : θ_ℓ ∈ ℤ, a_ℓ ≠ 0}.
pub fn laurent_series_f(
    p: &DomainPoint,
    order: i32,
    cfg: &PrecisionConfig,
) -> Result<TruncatedLaurentSeries> {
    let n = p.dim();
    let t = order.max(1) + n as i32 + 6;
    let mut acc = TruncatedLaurentSeries::from_fn(0, t, |k| {
        cpow_int(-p.w(), k) / Complex64::from(factorial(k as u32))
    });
    for (l, &al) in p.a().iter().enumerate() {
        let theta = p.theta()[l];
        let factor = if al.norm() <= cfg.abs_tol {
            TruncatedLaurentSeries::constant((Complex64::ONE - e2pi(theta.into())).finv(), t)
        } else if theta_is_integral(theta, cfg) {
            // 1 − e^{-ua} = Σ_{k≥1} −(−a)^k u^k / k!  (simple zero at 0)
            let den = TruncatedLaurentSeries::from_fn(1, t + 2, |k| {
                -cpow_int(-al, k) / Complex64::from(factorial(k as u32))
            });
            den.reciprocal(cfg.abs_tol)?
        } else {
            let twist = e2pi(theta.into());
            let den = TruncatedLaurentSeries::from_fn(0, t, |k| {
                if k == 0 {
                    Complex64::ONE - twist
                } else {
                    -twist * cpow_int(-al, k) / Complex64::from(factorial(k as u32))
                }
            });
            den.reciprocal(cfg.abs_tol)?
        };
        acc = acc.mul(&factor);
    }
    Ok(acc)
}

/// Coefficient of u^{-k} in the Laurent expansion of F at u = 0. Zero when
/// k exceeds the pole order.
pub fn laurent_coeff_f(p: &DomainPoint, k: i32, cfg: &PrecisionConfig) -> Result<Complex64> {
    let series = laurent_series_f(p, (-k).max(1), cfg)?;
    series.extract_coeff(-k)
}

/// Value of the continued function at s = −k (k ≥ 0):
/// (−1)^k k! · coeff(F, u^k). Requires p ∈ 𝒟̃_N.
pub fn special_value(p: &DomainPoint, k: u32, cfg: &PrecisionConfig) -> Result<Complex64> {
    if !classify(p, cfg).in_d_tilde {
        return Err(Error::precondition(
            "special_value: point must lie in the closed cone domain",
        ));
    }
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    Ok(sign * factorial(k) * laurent_coeff_f(p, -(k as i32), cfg)?)
}

/// Residue of the continued function at the (at most simple) pole s = k,
/// k ∈ {1, …, N}: coeff(F, u^{-k})/(k−1)!.
pub fn residue_at_integer(p: &DomainPoint, k: u32, cfg: &PrecisionConfig) -> Result<Complex64> {
    if k == 0 || k as usize > p.dim() {
        return Err(Error::precondition(format!(
            "residue_at_integer: k = {k} outside 1..=N"
        )));
    }
    if !classify(p, cfg).in_d_tilde {
        return Err(Error::precondition(
            "residue_at_integer: point must lie in the closed cone domain",
        ));
    }
    Ok(laurent_coeff_f(p, k as i32, cfg)? / Complex64::from(factorial(k - 1)))
}

/// The two worked parameter families with closed-form coefficient sums.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "setup")]
pub enum StructuredSetup {
    /// N odd ≥ 3: w = 0, a = (η, η², …, η^{N−1}, 1) with η = e(1/N),
    /// θ = (c, …, c).
    ExampleOne { n: usize, c: f64 },
    /// N ≥ 2: w = 1/(1−η), a = (1, η, …, η^{N−1}) with η = e(1/(2N)), θ = 0.
    ExampleTwo { n: usize },
}

impl StructuredSetup {
    pub fn validate(&self) -> Result<()> {
        match *self {
            StructuredSetup::ExampleOne { n, c } => {
                if n < 3 || n % 2 == 0 {
                    return Err(Error::precondition("example-1 requires odd N >= 3"));
                }
                if !(0.0..1.0).contains(&c) {
                    return Err(Error::precondition("example-1 requires c in [0,1)"));
                }
                Ok(())
            }
            StructuredSetup::ExampleTwo { n } => {
                if n < 2 {
                    return Err(Error::precondition("example-2 requires N >= 2"));
                }
                Ok(())
            }
        }
    }

    /// The explicit parameter point of the family.
    pub fn point(&self, cfg: &PrecisionConfig) -> Result<DomainPoint> {
        self.validate()?;
        match *self {
            StructuredSetup::ExampleOne { n, c } => {
                let a = (1..=n)
                    .map(|l| e2pi(Complex64::from(l as f64 / n as f64)))
                    .collect();
                DomainPoint::new(Complex64::ZERO, a, vec![c; n], cfg)
            }
            StructuredSetup::ExampleTwo { n } => {
                let eta = e2pi(Complex64::from(0.5 / n as f64));
                let a = (0..n)
                    .map(|l| e2pi(Complex64::from(0.5 * l as f64 / n as f64)))
                    .collect();
                DomainPoint::new((Complex64::ONE - eta).finv(), a, vec![0.0; n], cfg)
            }
        }
    }
}

/// coeff(F, u^{-k}) for the structured families, via the displayed finite
/// Bernoulli sums over compositions |n|₁ = N − k (empty sum = 0 for k > N).
pub fn coeff_structured(
    setup: StructuredSetup,
    k: i32,
    cfg: &PrecisionConfig,
) -> Result<Complex64> {
    setup.validate()?;
    match setup {
        StructuredSetup::ExampleOne { n, c } => {
            if k > n as i32 {
                return Ok(Complex64::ZERO);
            }
            let total = (n as i32 - k) as u32;
            let eta = e2pi(Complex64::from(1.0 / n as f64));
            let xi = if c == 0.0 {
                Complex64::ONE
            } else {
                e2pi(Complex64::from(c))
            };
            // per-order table B_j(0, ξ)/j!
            let table: Vec<Complex64> = (0..=total)
                .map(|j| Ok(bernoulli_gen(j, Complex64::ZERO, xi, cfg)? / factorial(j)))
                .collect::<Result<_>>()?;
            let mut sum = Complex64::ZERO;
            for_each_composition(n, total, &mut |m| {
                let mut term = Complex64::ONE;
                let mut pow = 0i64;
                for (l, &ml) in m.iter().enumerate() {
                    term *= table[ml as usize];
                    pow += (l as i64 + 1) * ml as i64;
                }
                sum += eta.powi((pow % n as i64) as i32) * term;
            });
            let sign = if total % 2 == 0 { 1.0 } else { -1.0 };
            Ok(sign * sum)
        }
        StructuredSetup::ExampleTwo { n } => {
            if k > n as i32 {
                return Ok(Complex64::ZERO);
            }
            let total = (n as i32 - k) as u32;
            let eta = e2pi(Complex64::from(0.5 / n as f64));
            let w = (Complex64::ONE - eta).finv();
            // per-coordinate tables B_j(z_ℓ)/j! with z_ℓ = η^{1−ℓ} w/N
            let tables: Vec<Vec<Complex64>> = (1..=n as i32)
                .map(|l| {
                    let z = eta.powi(1 - l) * w / n as f64;
                    (0..=total)
                        .map(|j| Ok(bernoulli_gen(j, z, Complex64::ONE, cfg)? / factorial(j)))
                        .collect::<Result<_>>()
                })
                .collect::<Result<_>>()?;
            let mut sum = Complex64::ZERO;
            for_each_composition(n, total, &mut |m| {
                let mut term = Complex64::ONE;
                let mut pow = 0i64;
                for (l, &ml) in m.iter().enumerate() {
                    term *= tables[l][ml as usize];
                    pow += l as i64 * ml as i64;
                }
                sum += eta.powi((pow % (2 * n as i64)) as i32) * term;
            });
            let sign = if total % 2 == 0 { 1.0 } else { -1.0 };
            let half_turns = (1 - n as i32) * n as i32 / 2;
            Ok(sign * eta.powi(half_turns) * sum)
        }
    }
}

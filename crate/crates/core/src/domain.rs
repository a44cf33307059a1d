//! Parameter-space types and membership predicates.
//!
//! The ambient space is ℂ × ℂ^N × ℝ^N subject to the compatibility rule that
//! a vanishing a-coordinate forces the matching twist off the integers. The
//! predicates below classify points against the cone 𝒞 = {Re z > 0} ∪ i·ℝ₊
//! and the nested admissible sets used by the contour evaluators; everything
//! boundary-sensitive goes through a single tolerance so the predicates stay
//! mutually consistent.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::precision::PrecisionConfig;

/// Index subset of {0, …, N−1} as a bitmask (N ≤ 32).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Subset(pub u32);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn from_indices(indices: &[usize]) -> Self {
        let mut mask = 0u32;
        for &i in indices {
            assert!(i < 32, "index out of supported range");
            mask |= 1 << i;
        }
        Subset(mask)
    }

    pub fn full(n: usize) -> Self {
        assert!(n <= 32);
        if n == 32 {
            Subset(u32::MAX)
        } else {
            Subset((1u32 << n) - 1)
        }
    }

    pub fn contains(&self, i: usize) -> bool {
        i < 32 && self.0 & (1 << i) != 0
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i < 32);
        self.0 |= 1 << i;
    }

    pub fn cardinality(&self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..32).filter(move |&i| self.contains(i))
    }

    pub fn symmetric_difference(&self, other: Subset) -> Subset {
        Subset(self.0 ^ other.0)
    }

    pub fn union(&self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    pub fn intersection(&self, other: Subset) -> Subset {
        Subset(self.0 & other.0)
    }

    pub fn minus(&self, other: Subset) -> Subset {
        Subset(self.0 & !other.0)
    }

    pub fn indices(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

/// A point (w, a, θ) with the compatibility rule a_ℓ = 0 ⇒ θ_ℓ ∉ ℤ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainPoint {
    w: Complex64,
    a: Vec<Complex64>,
    theta: Vec<f64>,
}

impl DomainPoint {
    pub fn new(
        w: Complex64,
        a: Vec<Complex64>,
        theta: Vec<f64>,
        cfg: &PrecisionConfig,
    ) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::precondition("dimension must be positive"));
        }
        if a.len() != theta.len() {
            return Err(Error::precondition(format!(
                "a has length {} but theta has length {}",
                a.len(),
                theta.len()
            )));
        }
        if a.len() > 32 {
            return Err(Error::precondition("dimension above 32 is unsupported"));
        }
        let p = DomainPoint { w, a, theta };
        p.check_compatibility(cfg)?;
        Ok(p)
    }

    fn check_compatibility(&self, cfg: &PrecisionConfig) -> Result<()> {
        for (l, (&al, &tl)) in self.a.iter().zip(&self.theta).enumerate() {
            if al.norm() <= cfg.abs_tol && (tl - tl.round()).abs() <= cfg.abs_tol {
                return Err(Error::precondition(format!(
                    "coordinate {l}: a is zero but theta = {tl} is an integer"
                )));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    pub fn w(&self) -> Complex64 {
        self.w
    }

    pub fn a(&self) -> &[Complex64] {
        &self.a
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    /// The scaling action M_α: (w, a, θ) ↦ (αw, αa, θ). Compatibility is
    /// preserved for α ≠ 0.
    pub fn rotated(&self, alpha: Complex64) -> Self {
        DomainPoint {
            w: alpha * self.w,
            a: self.a.iter().map(|&z| alpha * z).collect(),
            theta: self.theta.clone(),
        }
    }

    /// Coordinate-wise closeness in (w, a, θ).
    pub fn approx_eq(&self, other: &DomainPoint, tol: f64) -> bool {
        self.dim() == other.dim()
            && (self.w - other.w).norm() <= tol
            && self
                .a
                .iter()
                .zip(&other.a)
                .all(|(&x, &y)| (x - y).norm() <= tol)
            && self
                .theta
                .iter()
                .zip(&other.theta)
                .all(|(&x, &y)| (x - y).abs() <= tol)
    }
}

/// z ∈ 𝒞 = {Re z > 0} ∪ i·ℝ₊, with |Re z| ≤ abs_tol treated as Re z = 0.
pub fn in_cone(z: Complex64, cfg: &PrecisionConfig) -> bool {
    if z.re > cfg.abs_tol {
        true
    } else if z.re >= -cfg.abs_tol {
        z.im > cfg.abs_tol
    } else {
        false
    }
}

/// z ∈ −𝒞.
pub fn in_neg_cone(z: Complex64, cfg: &PrecisionConfig) -> bool {
    in_cone(-z, cfg)
}

/// z on the punctured imaginary axis i·ℝ∖{0} (to tolerance).
pub fn on_punctured_imag_axis(z: Complex64, cfg: &PrecisionConfig) -> bool {
    z.re.abs() <= cfg.abs_tol && z.im.abs() > cfg.abs_tol
}

/// Tr(v, Λ) = Σ_{ℓ∈Λ} v_ℓ.
pub fn trace(v: &[Complex64], lambda: Subset) -> Result<Complex64> {
    let mut acc = Complex64::ZERO;
    for l in lambda.iter() {
        if l >= v.len() {
            return Err(Error::precondition(format!(
                "trace: index {l} out of range for length {}",
                v.len()
            )));
        }
        acc += v[l];
    }
    Ok(acc)
}

/// Tr for real vectors (twists).
pub fn trace_real(v: &[f64], lambda: Subset) -> Result<f64> {
    let mut acc = 0.0;
    for l in lambda.iter() {
        if l >= v.len() {
            return Err(Error::precondition(format!(
                "trace: index {l} out of range for length {}",
                v.len()
            )));
        }
        acc += v[l];
    }
    Ok(acc)
}

/// π(w, a, θ) = w − Tr(a, a⁻¹[−𝒞]).
pub fn pi_projection(p: &DomainPoint, cfg: &PrecisionConfig) -> Complex64 {
    let mut acc = p.w();
    for &al in p.a() {
        if in_neg_cone(al, cfg) {
            acc -= al;
        }
    }
    acc
}

/// Result of projecting out a coordinate subset.
#[derive(Debug, Clone, PartialEq)]
pub enum Projected {
    Point(DomainPoint),
    /// Λ was the full index set; only the π-value remains.
    Scalar(Complex64),
}

/// π_Λ: drop the Λ-indexed coordinates, absorbing their −𝒞 part into w.
pub fn pi_lambda(p: &DomainPoint, lambda: Subset, cfg: &PrecisionConfig) -> Result<Projected> {
    let n = p.dim();
    if lambda.iter().any(|l| l >= n) {
        return Err(Error::precondition("pi_lambda: index out of range"));
    }
    if lambda.is_empty() {
        return Ok(Projected::Point(p.clone()));
    }
    if lambda == Subset::full(n) {
        return Ok(Projected::Scalar(pi_projection(p, cfg)));
    }
    let mut w = p.w();
    for l in lambda.iter() {
        if in_neg_cone(p.a()[l], cfg) {
            w -= p.a()[l];
        }
    }
    let a: Vec<Complex64> = (0..n)
        .filter(|l| !lambda.contains(*l))
        .map(|l| p.a()[l])
        .collect();
    let theta: Vec<f64> = (0..n)
        .filter(|l| !lambda.contains(*l))
        .map(|l| p.theta()[l])
        .collect();
    Ok(Projected::Point(DomainPoint { w, a, theta }))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MembershipReport {
    pub in_t_plus: bool,
    pub in_d_n: bool,
    pub in_d_tilde: bool,
    pub in_d_tilde_cstar: bool,
    /// Component label a⁻¹[−𝒞]; defined only when every a_ℓ stays off the
    /// imaginary axis (including 0) and the point lies in 𝒟_N.
    pub component_lambda: Option<Subset>,
    pub pi_value: Complex64,
}

const ANGLE_TOL: f64 = 1e-10;

pub(crate) fn wrap_to_pi(mut t: f64) -> f64 {
    // normalize to (−π, π]
    let tau = std::f64::consts::TAU;
    t = t.rem_euclid(tau);
    if t > std::f64::consts::PI {
        t -= tau;
    }
    t
}

/// Critical angles t ∈ (t_lo, t_hi) at which some e^{it}a_ℓ crosses the
/// imaginary axis, i.e. t ≡ π/2 − arg(a_ℓ) (mod π). Sorted ascending.
fn critical_angles(p: &DomainPoint, t_lo: f64, t_hi: f64, cfg: &PrecisionConfig) -> Vec<f64> {
    let mut ts = Vec::new();
    for &al in p.a() {
        if al.norm() <= cfg.abs_tol {
            continue;
        }
        let base = std::f64::consts::FRAC_PI_2 - al.arg();
        // cover [t_lo, t_hi] by stepping the half-period lattice
        let k0 = ((t_lo - base) / std::f64::consts::PI).floor() as i64 - 1;
        let k1 = ((t_hi - base) / std::f64::consts::PI).ceil() as i64 + 1;
        for k in k0..=k1 {
            let t = base + k as f64 * std::f64::consts::PI;
            if t > t_lo + ANGLE_TOL && t < t_hi - ANGLE_TOL {
                ts.push(t);
            }
        }
    }
    ts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    ts.dedup_by(|x, y| (*x - *y).abs() <= ANGLE_TOL);
    ts
}

/// (π M_{e^{it}})(p) ∈ 𝒞, evaluated exactly at angle t.
fn pi_rotated_in_cone(p: &DomainPoint, t: f64, cfg: &PrecisionConfig) -> bool {
    let alpha = Complex64::new(t.cos(), t.sin());
    in_cone(pi_projection(&p.rotated(alpha), cfg), cfg)
}

/// The open-arc test: on (t0, t1) the set a⁻¹(rotated)[−𝒞] is constant, so
/// (πM_{e^{it}})(p) = e^{it}·v with v constant; containment in 𝒞 for every
/// interior t reduces to an argument-window check on [t0+arg v, t1+arg v].
fn open_arc_in_cone(p: &DomainPoint, t0: f64, t1: f64, cfg: &PrecisionConfig) -> bool {
    let tm = 0.5 * (t0 + t1);
    let alpha = Complex64::new(tm.cos(), tm.sin());
    let rotated = p.rotated(alpha);
    let mut v = p.w();
    for (l, &al) in rotated.a().iter().enumerate() {
        if in_neg_cone(al, cfg) {
            v -= p.a()[l];
        }
    }
    if v.norm() <= cfg.abs_tol {
        // πM ≡ 0 on the arc; 0 ∉ 𝒞.
        return false;
    }
    if t1 - t0 > std::f64::consts::PI + ANGLE_TOL {
        // e^{it}v sweeps more than a half-turn and must leave 𝒞.
        return false;
    }
    let lo = wrap_to_pi(t0 + v.arg());
    let hi = lo + (t1 - t0);
    lo >= -std::f64::consts::FRAC_PI_2 - ANGLE_TOL && hi <= std::f64::consts::FRAC_PI_2 + ANGLE_TOL
}

/// (πM_{e^{it}})(p) ∈ 𝒞 for all t in [t_lo, t_hi] (endpoint inclusion per
/// flags), by critical-angle arc decomposition.
fn sector_sweep_in_cone(
    p: &DomainPoint,
    t_lo: f64,
    t_hi: f64,
    include_lo: bool,
    include_hi: bool,
    cfg: &PrecisionConfig,
) -> bool {
    if include_lo && !pi_rotated_in_cone(p, t_lo, cfg) {
        return false;
    }
    if include_hi && !pi_rotated_in_cone(p, t_hi, cfg) {
        return false;
    }
    if t_hi - t_lo <= 2.0 * ANGLE_TOL {
        return true;
    }
    let crits = critical_angles(p, t_lo, t_hi, cfg);
    for &t in &crits {
        if !pi_rotated_in_cone(p, t, cfg) {
            return false;
        }
    }
    let mut bounds = Vec::with_capacity(crits.len() + 2);
    bounds.push(t_lo);
    bounds.extend_from_slice(&crits);
    bounds.push(t_hi);
    bounds
        .windows(2)
        .all(|w| open_arc_in_cone(p, w[0], w[1], cfg))
}

/// Membership in 𝒟̃^{ℂ*}_N = ⋂_{α∈ℂ*} (πM_α)⁻¹[𝒞]: the condition depends on
/// arg α only, so sweep the full circle of angles.
fn in_d_tilde_cstar(p: &DomainPoint, cfg: &PrecisionConfig) -> bool {
    if p.a().iter().all(|&al| al.norm() <= cfg.abs_tol) {
        // πM_α(p) = αw cannot stay inside 𝒞 for every direction.
        return false;
    }
    sector_sweep_in_cone(
        p,
        -std::f64::consts::PI,
        std::f64::consts::PI,
        true,
        true,
        cfg,
    )
}

pub fn classify(p: &DomainPoint, cfg: &PrecisionConfig) -> MembershipReport {
    let pi_value = pi_projection(p, cfg);
    let in_d_tilde = in_cone(pi_value, cfg);
    let axis_free = p.a().iter().all(|&al| !on_punctured_imag_axis(al, cfg));
    let in_d_n = pi_value.re > cfg.abs_tol && axis_free;
    let in_t_plus = p.w().re > cfg.abs_tol && p.a().iter().all(|&al| al.re > cfg.abs_tol);
    let off_axis_entirely = p.a().iter().all(|&al| al.re.abs() > cfg.abs_tol);
    let component_lambda = if in_d_n && off_axis_entirely {
        let mut s = Subset::EMPTY;
        for (l, &al) in p.a().iter().enumerate() {
            if in_neg_cone(al, cfg) {
                s.insert(l);
            }
        }
        Some(s)
    } else {
        None
    };
    MembershipReport {
        in_t_plus,
        in_d_n,
        in_d_tilde,
        in_d_tilde_cstar: in_d_tilde_cstar(p, cfg),
        component_lambda,
        pi_value,
    }
}

/// Membership in the rotation domains for the angle ψ ∈ [−π, π]:
/// returns (in 𝒟_N(ψ), in 𝒟̃_N(ψ)).
pub fn in_d_psi(p: &DomainPoint, psi: f64, cfg: &PrecisionConfig) -> (bool, bool) {
    let report = classify(p, cfg);
    if psi.abs() <= ANGLE_TOL {
        return (report.in_d_n, report.in_d_tilde);
    }
    let (t_lo, t_hi) = if psi > 0.0 { (0.0, psi) } else { (psi, 0.0) };
    // 𝒟̃_N(ψ): cone condition on the closed sector.
    let tilde = sector_sweep_in_cone(p, t_lo, t_hi, true, true, cfg);
    // 𝒟_N(ψ): both endpoint points in 𝒟_N, cone condition on the open sector.
    let end = classify(&p.rotated(Complex64::new(psi.cos(), psi.sin())), cfg);
    let d_psi =
        report.in_d_n && end.in_d_n && sector_sweep_in_cone(p, t_lo, t_hi, false, false, cfg);
    (d_psi, tilde)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> PrecisionConfig {
        PrecisionConfig::default()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn point(w: Complex64, a: Vec<Complex64>, theta: Vec<f64>) -> DomainPoint {
        DomainPoint::new(w, a, theta, &cfg()).unwrap()
    }

    #[test]
    fn cone_membership() {
        assert!(in_cone(Complex64::ONE, &cfg()));
        assert!(in_cone(c(0.0, 2.0), &cfg()));
        assert!(!in_cone(-Complex64::ONE, &cfg()));
        assert!(!in_cone(c(0.0, -2.0), &cfg()));
        assert!(!in_cone(Complex64::ZERO, &cfg()));
    }

    #[test]
    fn trace_subsets() {
        let v = [c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)];
        assert_eq!(
            trace(&v, Subset::from_indices(&[0, 2])).unwrap(),
            c(4.0, 0.0)
        );
        assert_eq!(trace(&v, Subset::EMPTY).unwrap(), Complex64::ZERO);
        let w = [Complex64::I, -Complex64::I];
        assert_eq!(trace(&w, Subset::full(2)).unwrap(), Complex64::ZERO);
        assert!(trace(&v, Subset::from_indices(&[5])).is_err());
    }

    #[test]
    fn compatibility_rule() {
        assert!(
            DomainPoint::new(Complex64::ONE, vec![Complex64::ZERO], vec![0.0], &cfg()).is_err()
        );
        assert!(DomainPoint::new(Complex64::ONE, vec![Complex64::ZERO], vec![0.5], &cfg()).is_ok());
    }

    #[test]
    fn pi_examples() {
        let p = point(c(5.0, 0.0), vec![c(1.0, 0.0), c(2.0, 0.0)], vec![0.0, 0.0]);
        assert_eq!(pi_projection(&p, &cfg()), c(5.0, 0.0));

        let p = point(
            Complex64::ZERO,
            vec![c(-1.0, 0.0), c(1.0, 0.0)],
            vec![0.0, 0.0],
        );
        assert_eq!(pi_projection(&p, &cfg()), c(1.0, 0.0));

        let p = point(c(1.0, 0.0), vec![c(0.0, -2.0)], vec![0.0]);
        assert_eq!(pi_projection(&p, &cfg()), c(1.0, 2.0));
    }

    #[test]
    fn pi_lambda_cases() {
        let p = point(
            Complex64::ZERO,
            vec![c(-1.0, 0.0), c(3.0, 0.0)],
            vec![0.2, 0.7],
        );
        match pi_lambda(&p, Subset::EMPTY, &cfg()).unwrap() {
            Projected::Point(q) => assert_eq!(q, p),
            _ => panic!("expected point"),
        }
        match pi_lambda(&p, Subset::from_indices(&[0]), &cfg()).unwrap() {
            Projected::Point(q) => {
                assert_eq!(q.w(), c(1.0, 0.0));
                assert_eq!(q.a(), &[c(3.0, 0.0)]);
                assert_eq!(q.theta(), &[0.7]);
            }
            _ => panic!("expected point"),
        }
        match pi_lambda(&p, Subset::full(2), &cfg()).unwrap() {
            Projected::Scalar(z) => assert_eq!(z, pi_projection(&p, &cfg())),
            _ => panic!("expected scalar"),
        }
    }

    #[test]
    fn classify_examples() {
        let p = point(c(1.0, 0.0), vec![c(1.0, 0.0), c(1.0, 0.0)], vec![0.0, 0.0]);
        let r = classify(&p, &cfg());
        assert!(r.in_t_plus && r.in_d_n && r.in_d_tilde);
        assert_eq!(r.component_lambda, Some(Subset::EMPTY));

        let p = point(c(0.5, 0.0), vec![c(-1.0, 0.0), c(2.0, 0.0)], vec![0.0, 0.0]);
        let r = classify(&p, &cfg());
        assert!(!r.in_t_plus && r.in_d_n);
        assert_eq!(r.pi_value, c(1.5, 0.0));
        assert_eq!(r.component_lambda, Some(Subset::from_indices(&[0])));

        // w interior to the a-span: the polarized construction.
        let a = vec![c(1.0, 0.0), c(0.0, 1.0)];
        let w = 0.4 * a[0] + 0.6 * a[1];
        let p = point(w, a, vec![0.0, 0.3]);
        let r = classify(&p, &cfg());
        assert!(r.in_d_tilde_cstar);
        assert!(r.in_d_tilde);
        assert!(!r.in_d_n); // a₂ sits on the imaginary axis
        assert_eq!(r.component_lambda, None);
    }

    #[test]
    fn hierarchy_on_random_points() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
        for _ in 0..10_000 {
            let n = rng.gen_range(1..=4);
            let w = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let a: Vec<Complex64> = (0..n)
                .map(|_| c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)))
                .collect();
            let theta: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let Ok(p) = DomainPoint::new(w, a, theta, &cfg()) else {
                continue;
            };
            let r = classify(&p, &cfg());
            if r.in_t_plus {
                assert!(r.in_d_n);
            }
            if r.in_d_n {
                assert!(r.in_d_tilde);
            }
            if r.in_d_tilde_cstar {
                assert!(r.in_d_tilde);
            }
            if r.component_lambda.is_some() {
                assert!(r.in_d_n);
            }
        }
    }

    #[test]
    fn polarized_points_pass_cstar_test() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        for _ in 0..500 {
            let n = rng.gen_range(1..=3);
            let a: Vec<Complex64> = (0..n)
                .map(|_| {
                    // keep coordinates away from zero
                    let re: f64 = rng.gen_range(0.2..2.0);
                    let im: f64 = rng.gen_range(-2.0..2.0);
                    if rng.gen::<bool>() {
                        c(re, im)
                    } else {
                        c(-re, im)
                    }
                })
                .collect();
            let x: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..0.95)).collect();
            let w: Complex64 = a.iter().zip(&x).map(|(&al, &xl)| xl * al).sum();
            let theta: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let p = DomainPoint::new(w, a, theta, &cfg()).unwrap();
            let r = classify(&p, &cfg());
            assert!(
                r.in_d_tilde_cstar,
                "polarized point failed the ℂ* sweep: w={w}, a={:?}",
                p.a()
            );
        }
    }

    #[test]
    fn d_psi_examples() {
        let p = point(c(1.0, 0.0), vec![c(1.0, 0.0)], vec![0.0]);
        let (d0, t0) = in_d_psi(&p, 0.0, &cfg());
        let r = classify(&p, &cfg());
        assert_eq!(d0, r.in_d_n);
        assert_eq!(t0, r.in_d_tilde);

        let (_, tilde) = in_d_psi(&p, std::f64::consts::FRAC_PI_2, &cfg());
        assert!(tilde);

        // A ℂ*-admissible point passes every 𝒟̃_N(ψ) flag.
        let a = vec![c(1.0, 0.0), c(0.0, 1.0)];
        let w = 0.4 * a[0] + 0.6 * a[1];
        let p = point(w, a, vec![0.0, 0.3]);
        for &psi in &[
            -std::f64::consts::PI,
            -1.0,
            -0.3,
            0.4,
            1.2,
            std::f64::consts::PI,
        ] {
            let (_, tilde) = in_d_psi(&p, psi, &cfg());
            assert!(tilde, "psi={psi}");
        }
    }

    #[test]
    fn trace_set_identities() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let n = 6;
            let v: Vec<Complex64> = (0..n)
                .map(|_| c(rng.gen_range(-9..10) as f64, rng.gen_range(-9..10) as f64))
                .collect();
            let l1 = Subset(rng.gen_range(0..64));
            let l2 = Subset(rng.gen_range(0..64));
            let minus = trace(&v, l1.minus(l2)).unwrap();
            let direct = trace(&v, l1).unwrap() - trace(&v, l1.intersection(l2)).unwrap();
            assert_eq!(minus, direct);
            let union = trace(&v, l1.union(l2)).unwrap();
            let incl = trace(&v, l1).unwrap() + trace(&v, l2).unwrap()
                - trace(&v, l1.intersection(l2)).unwrap();
            assert_eq!(union, incl);
        }
    }
}

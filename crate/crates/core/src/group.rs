//! The symmetry group in canonical form T_Λ R_σ M_α.
//!
//! Elements act on points as the composition T_Λ∘R_σ∘M_α (the scaling is
//! applied first). The canonical triple (Λ, σ, α) is the storage normal
//! form; composition and inversion stay in it via the commutation rules
//! r(σ⁻¹)d(Λ)r(σ) = d(σ(Λ)) and Tr(a·r(σ), Λ) = Tr(a, σ⁻¹[Λ]).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::domain::{trace, DomainPoint, Subset};
use crate::error::{Error, Result};
use crate::numeric::{cpow_principal, e2pi};
use crate::precision::PrecisionConfig;

/// Permutation of {0, …, N−1} in image notation: `images[l] = σ(l)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Perm {
    images: Vec<usize>,
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm {
            images: (0..n).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &v in &images {
            if v >= n || seen[v] {
                return Err(Error::precondition(
                    "permutation images must be a bijection of 0..N",
                ));
            }
            seen[v] = true;
        }
        Ok(Perm { images })
    }

    /// The N-cycle (0 1 2 … N−1): l ↦ l+1 mod N.
    pub fn cycle(n: usize) -> Self {
        Perm {
            images: (0..n).map(|l| (l + 1) % n).collect(),
        }
    }

    /// Transposition of two indices.
    pub fn transposition(n: usize, i: usize, j: usize) -> Self {
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(i, j);
        Perm { images }
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, l: usize) -> usize {
        self.images[l]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.images.len()];
        for (l, &v) in self.images.iter().enumerate() {
            inv[v] = l;
        }
        Perm { images: inv }
    }

    /// Composition (σ∘τ)(x) = σ(τ(x)).
    pub fn compose(&self, tau: &Perm) -> Self {
        Perm {
            images: tau.images.iter().map(|&x| self.images[x]).collect(),
        }
    }

    /// Image set σ(Λ).
    pub fn apply_subset(&self, lambda: Subset) -> Subset {
        let mut out = Subset::EMPTY;
        for l in lambda.iter() {
            out.insert(self.images[l]);
        }
        out
    }

    /// Cycle decomposition (each cycle listed as l, σ(l), σ²(l), …).
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut cycles = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cyc = Vec::new();
            let mut cur = start;
            while !seen[cur] {
                seen[cur] = true;
                cyc.push(cur);
                cur = self.images[cur];
            }
            cycles.push(cyc);
        }
        cycles
    }

    pub fn all(n: usize) -> Vec<Perm> {
        // Heap's algorithm, iteratively.
        let mut items: Vec<usize> = (0..n).collect();
        let mut out = vec![Perm {
            images: items.clone(),
        }];
        let mut c = vec![0usize; n];
        let mut i = 0;
        while i < n {
            if c[i] < i {
                if i % 2 == 0 {
                    items.swap(0, i);
                } else {
                    items.swap(c[i], i);
                }
                out.push(Perm {
                    images: items.clone(),
                });
                c[i] += 1;
                i = 0;
            } else {
                c[i] = 0;
                i += 1;
            }
        }
        out
    }
}

/// Canonical element T_Λ R_σ M_α.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupElement {
    lambda: Subset,
    sigma: Perm,
    alpha: Complex64,
}

impl GroupElement {
    pub fn new(lambda: Subset, sigma: Perm, alpha: Complex64) -> Result<Self> {
        if alpha == Complex64::ZERO {
            return Err(Error::precondition("alpha must be nonzero"));
        }
        if lambda.iter().any(|l| l >= sigma.n()) {
            return Err(Error::precondition("Lambda index exceeds dimension"));
        }
        Ok(GroupElement {
            lambda,
            sigma,
            alpha,
        })
    }

    pub fn identity(n: usize) -> Self {
        GroupElement {
            lambda: Subset::EMPTY,
            sigma: Perm::identity(n),
            alpha: Complex64::ONE,
        }
    }

    pub fn t_lambda(lambda: Subset, n: usize) -> Self {
        GroupElement::new(lambda, Perm::identity(n), Complex64::ONE).unwrap()
    }

    pub fn r_sigma(sigma: Perm) -> Self {
        GroupElement {
            lambda: Subset::EMPTY,
            alpha: Complex64::ONE,
            sigma,
        }
    }

    pub fn m_alpha(alpha: Complex64, n: usize) -> Result<Self> {
        GroupElement::new(Subset::EMPTY, Perm::identity(n), alpha)
    }

    pub fn n(&self) -> usize {
        self.sigma.n()
    }

    pub fn lambda(&self) -> Subset {
        self.lambda
    }

    pub fn sigma(&self) -> &Perm {
        &self.sigma
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn approx_eq(&self, other: &GroupElement, tol: f64) -> bool {
        self.lambda == other.lambda
            && self.sigma == other.sigma
            && (self.alpha - other.alpha).norm() <= tol
    }
}

/// Product in canonical form: T_{Λ₁⊕σ₁(Λ₂)} R_{σ₁σ₂} M_{α₁α₂}.
pub fn compose(g1: &GroupElement, g2: &GroupElement) -> Result<GroupElement> {
    if g1.n() != g2.n() {
        return Err(Error::precondition("compose: dimension mismatch"));
    }
    Ok(GroupElement {
        lambda: g1
            .lambda
            .symmetric_difference(g1.sigma.apply_subset(g2.lambda)),
        sigma: g1.sigma.compose(&g2.sigma),
        alpha: g1.alpha * g2.alpha,
    })
}

/// Inverse T_{σ⁻¹(Λ)} R_{σ⁻¹} M_{α⁻¹}.
pub fn inverse(g: &GroupElement) -> GroupElement {
    let sigma_inv = g.sigma.inverse();
    GroupElement {
        lambda: sigma_inv.apply_subset(g.lambda),
        sigma: sigma_inv,
        alpha: g.alpha.finv(),
    }
}

/// The action g(w,a,θ) = (α(w − Tr(a, σ⁻¹[Λ])), α·a·r(σ)d(Λ), θ·r(σ)d(Λ)):
/// coordinate ℓ of a·r(σ) is a_{σ⁻¹(ℓ)}, then d(Λ) flips the Λ-indexed signs.
pub fn act(g: &GroupElement, p: &DomainPoint) -> Result<DomainPoint> {
    if g.n() != p.dim() {
        return Err(Error::precondition("act: dimension mismatch"));
    }
    let n = p.dim();
    let sigma_inv = g.sigma.inverse();
    let mut tr = Complex64::ZERO;
    for l in g.lambda.iter() {
        tr += p.a()[sigma_inv.apply(l)];
    }
    let w = g.alpha * (p.w() - tr);
    let mut a = Vec::with_capacity(n);
    let mut theta = Vec::with_capacity(n);
    for l in 0..n {
        let src = sigma_inv.apply(l);
        let sign = if g.lambda.contains(l) { -1.0 } else { 1.0 };
        a.push(g.alpha * sign * p.a()[src]);
        theta.push(sign * p.theta()[src]);
    }
    // The 𝔻_N invariant survives: a_ℓ = 0 positions carry θ from the same
    // source coordinate, and sign flips keep integers off non-integers.
    Ok(DomainPoint::new(w, a, theta, &PrecisionConfig::default())
        .expect("group action preserves compatibility"))
}

/// J_g(s, θ) = (−1)^{|Λ|} e(Tr(θ, σ⁻¹[Λ])) α^{−s}, principal branch.
pub fn j_factor(g: &GroupElement, s: Complex64, theta: &[f64]) -> Result<Complex64> {
    if theta.len() != g.n() {
        return Err(Error::precondition("j_factor: dimension mismatch"));
    }
    let sigma_inv = g.sigma.inverse();
    let mut tr = 0.0;
    for l in g.lambda.iter() {
        tr += theta[sigma_inv.apply(l)];
    }
    let sign = if g.lambda.cardinality() % 2 == 0 {
        Complex64::ONE
    } else {
        -Complex64::ONE
    };
    Ok(sign * e2pi(Complex64::from(tr)) * cpow_principal(g.alpha, -s)?)
}

/// ψ = arg(α) ∈ (−π, π].
pub fn psi_angle(g: &GroupElement) -> f64 {
    let arg = g.alpha.arg();
    if arg == -std::f64::consts::PI {
        std::f64::consts::PI
    } else {
        arg
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CaseTag {
    AlphaEqualsOne,
    AlphaNotOne,
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WRule {
    Free,
    HalfTrace,
}

/// Solution space of g·p = p, described by eigenvector bases of the signed
/// permutation A = r(σ)d(Λ) acting on row vectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedPointSpace {
    pub case_tag: CaseTag,
    pub a_basis: Vec<Vec<Complex64>>,
    pub theta_basis: Vec<Vec<f64>>,
    pub w_rule: WRule,
}

/// Eigenvector of A for eigenvalue λ supported on one σ-cycle, or None when
/// λ^len ≠ sign product. The defining relation is v_{σ⁻¹(ℓ)} = λ(−1)^{1_Λ(ℓ)} v_ℓ.
fn cycle_eigenvector(
    n: usize,
    cyc: &[usize],
    lambda: Subset,
    lam: Complex64,
    tol: f64,
) -> Option<Vec<Complex64>> {
    let m = cyc.len() as i32;
    let eps = if cyc.iter().filter(|&&l| lambda.contains(l)).count() % 2 == 0 {
        Complex64::ONE
    } else {
        -Complex64::ONE
    };
    if (lam.powi(m) - eps).norm() > tol {
        return None;
    }
    let mut v = vec![Complex64::ZERO; n];
    // walk the cycle backwards from the anchor: cyc[k] = σ(cyc[k−1])
    v[cyc[0]] = Complex64::ONE;
    for k in (1..cyc.len()).rev() {
        // σ⁻¹(cyc[k+1 mod m]) = cyc[k]
        let next = cyc[(k + 1) % cyc.len()];
        let sign = if lambda.contains(next) { -1.0 } else { 1.0 };
        v[cyc[k]] = lam * sign * v[next];
    }
    Some(v)
}

pub fn fixed_point_space(g: &GroupElement, cfg: &PrecisionConfig) -> FixedPointSpace {
    let n = g.n();
    let cycles = g.sigma.cycles();
    let tol = cfg.abs_tol.max(1e-12);
    let alpha_is_one = (g.alpha - Complex64::ONE).norm() <= tol;

    // θ lives in E₁[A] ∩ ℝ^N regardless of α.
    let theta_basis: Vec<Vec<f64>> = cycles
        .iter()
        .filter_map(|cyc| cycle_eigenvector(n, cyc, g.lambda, Complex64::ONE, tol))
        .map(|v| v.iter().map(|z| z.re).collect())
        .collect();

    let (a_basis, w_rule) = if alpha_is_one {
        // a ∈ E₁[A] with the extra linear constraint Tr(a, Λ) = 0.
        let raw: Vec<Vec<Complex64>> = cycles
            .iter()
            .filter_map(|cyc| cycle_eigenvector(n, cyc, g.lambda, Complex64::ONE, tol))
            .collect();
        let traces: Vec<Complex64> = raw.iter().map(|v| trace(v, g.lambda).unwrap()).collect();
        let basis = match traces.iter().position(|t| t.norm() > tol) {
            None => raw,
            Some(pivot) => {
                let tp = traces[pivot];
                raw.iter()
                    .enumerate()
                    .filter(|(i, _)| *i != pivot)
                    .map(|(i, v)| {
                        let c = traces[i] / tp;
                        v.iter()
                            .zip(&raw[pivot])
                            .map(|(&x, &y)| x - c * y)
                            .collect()
                    })
                    .collect()
            }
        };
        (basis, WRule::Free)
    } else {
        // a ∈ E_{α⁻¹}[A]; w is pinned to the half trace.
        let lam = g.alpha.finv();
        let basis = cycles
            .iter()
            .filter_map(|cyc| cycle_eigenvector(n, cyc, g.lambda, lam, tol))
            .collect();
        (basis, WRule::HalfTrace)
    };

    // The span admits a 𝔻_N-valid point iff every coordinate can be kept
    // compatible: where all admissible a vanish, θ must be able to move off ℤ.
    let mut a_support = vec![false; n];
    for v in &a_basis {
        for (l, &z) in v.iter().enumerate() {
            if z.norm() > tol {
                a_support[l] = true;
            }
        }
    }
    let mut th_support = vec![false; n];
    for v in &theta_basis {
        for (l, &x) in v.iter().enumerate() {
            if x.abs() > tol {
                th_support[l] = true;
            }
        }
    }
    let realizable = (0..n).all(|l| a_support[l] || th_support[l]);

    let case_tag = if !realizable {
        CaseTag::Empty
    } else if alpha_is_one {
        CaseTag::AlphaEqualsOne
    } else {
        CaseTag::AlphaNotOne
    };
    FixedPointSpace {
        case_tag,
        a_basis,
        theta_basis,
        w_rule,
    }
}

impl FixedPointSpace {
    /// Assemble a concrete point from span coefficients. For the half-trace
    /// rule the supplied w is ignored and recomputed from a.
    pub fn make_point(
        &self,
        w: Complex64,
        a_coeffs: &[Complex64],
        theta_coeffs: &[f64],
        cfg: &PrecisionConfig,
    ) -> Result<DomainPoint> {
        if a_coeffs.len() != self.a_basis.len() || theta_coeffs.len() != self.theta_basis.len() {
            return Err(Error::precondition(
                "make_point: coefficient count does not match basis",
            ));
        }
        let n = self
            .a_basis
            .first()
            .map(|v| v.len())
            .or_else(|| self.theta_basis.first().map(|v| v.len()))
            .ok_or_else(|| Error::precondition("make_point: empty space"))?;
        let mut a = vec![Complex64::ZERO; n];
        for (c, v) in a_coeffs.iter().zip(&self.a_basis) {
            for (al, &vl) in a.iter_mut().zip(v) {
                *al += c * vl;
            }
        }
        let mut theta = vec![0.0; n];
        for (c, v) in theta_coeffs.iter().zip(&self.theta_basis) {
            for (tl, &vl) in theta.iter_mut().zip(v) {
                *tl += c * vl;
            }
        }
        let w = match self.w_rule {
            WRule::Free => w,
            WRule::HalfTrace => 0.5 * a.iter().sum::<Complex64>(),
        };
        DomainPoint::new(w, a, theta, cfg)
    }

    /// Does (w, a, θ) lie in the described space? Span membership via small
    /// least squares; the w-rule is enforced per case.
    pub fn contains(&self, p: &DomainPoint, cfg: &PrecisionConfig) -> bool {
        if self.case_tag == CaseTag::Empty {
            return false;
        }
        let tol = cfg.abs_tol.max(1e-12) * 1e2;
        let a_ok = span_residual_complex(&self.a_basis, p.a()) <= tol;
        let th_c: Vec<Complex64> = p.theta().iter().map(|&x| Complex64::from(x)).collect();
        let th_basis_c: Vec<Vec<Complex64>> = self
            .theta_basis
            .iter()
            .map(|v| v.iter().map(|&x| Complex64::from(x)).collect())
            .collect();
        let th_ok = span_residual_complex(&th_basis_c, &th_c) <= tol;
        let w_ok = match self.w_rule {
            WRule::Free => true,
            WRule::HalfTrace => (p.w() - 0.5 * p.a().iter().sum::<Complex64>()).norm() <= tol,
        };
        a_ok && th_ok && w_ok
    }
}

/// Distance from v to the span of basis (ℓ² residual of the least-squares
/// projection, computed from the normal equations).
fn span_residual_complex(basis: &[Vec<Complex64>], v: &[Complex64]) -> f64 {
    if basis.is_empty() {
        return v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    }
    let k = basis.len();
    // Gram matrix G_ij = <b_i, b_j>, rhs r_i = <b_i, v> with <x,y> = Σ x̄ y.
    let mut gram = vec![vec![Complex64::ZERO; k]; k];
    let mut rhs = vec![Complex64::ZERO; k];
    for i in 0..k {
        for j in 0..k {
            gram[i][j] = basis[i]
                .iter()
                .zip(&basis[j])
                .map(|(&x, &y)| x.conj() * y)
                .sum();
        }
        rhs[i] = basis[i].iter().zip(v).map(|(&x, &y)| x.conj() * y).sum();
    }
    if let Some(coef) = solve_dense(&mut gram, &mut rhs) {
        let mut res = 0.0;
        for (l, &vl) in v.iter().enumerate() {
            let mut proj = Complex64::ZERO;
            for (c, b) in coef.iter().zip(basis) {
                proj += c * b[l];
            }
            res += (vl - proj).norm_sqr();
        }
        res.sqrt()
    } else {
        f64::INFINITY
    }
}

/// In-place Gaussian elimination with partial pivoting; None on singularity.
fn solve_dense(m: &mut [Vec<Complex64>], b: &mut [Complex64]) -> Option<Vec<Complex64>> {
    let n = b.len();
    for col in 0..n {
        let pivot =
            (col..n).max_by(|&i, &j| m[i][col].norm().partial_cmp(&m[j][col].norm()).unwrap())?;
        if m[pivot][col].norm() < 1e-300 {
            return None;
        }
        m.swap(col, pivot);
        b.swap(col, pivot);
        let (done, rest) = m.split_at_mut(col + 1);
        let pivot_row = &done[col];
        let (b_done, b_rest) = b.split_at_mut(col + 1);
        let b_col = b_done[col];
        for (row, b_row) in rest.iter_mut().zip(b_rest.iter_mut()) {
            let f = row[col] / pivot_row[col];
            for (rv, &pv) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *rv -= f * pv;
            }
            *b_row -= f * b_col;
        }
    }
    let mut x = vec![Complex64::ZERO; n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for c in row + 1..n {
            acc -= m[row][c] * x[c];
        }
        x[row] = acc / m[row][row];
    }
    Some(x)
}

/// g·p = p within abs_tol, coordinatewise.
pub fn is_fixed(g: &GroupElement, p: &DomainPoint, cfg: &PrecisionConfig) -> Result<bool> {
    let q = act(g, p)?;
    Ok(q.approx_eq(p, cfg.abs_tol))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> PrecisionConfig {
        PrecisionConfig::default()
    }

    fn eta(n: u32) -> Complex64 {
        e2pi(Complex64::from(1.0 / n as f64))
    }

    #[test]
    fn t_lambda_is_involution() {
        let g = GroupElement::t_lambda(Subset::from_indices(&[0, 2]), 3);
        let gg = compose(&g, &g).unwrap();
        assert!(gg.approx_eq(&GroupElement::identity(3), 1e-15));
    }

    #[test]
    fn conjugation_moves_lambda() {
        let n = 3;
        for sigma in Perm::all(n) {
            let r = GroupElement::r_sigma(sigma.clone());
            let lam = Subset::from_indices(&[0, 1]);
            let t = GroupElement::t_lambda(lam, n);
            let conj = compose(&compose(&r, &t).unwrap(), &inverse(&r)).unwrap();
            let expect = GroupElement::t_lambda(sigma.apply_subset(lam), n);
            assert!(conj.approx_eq(&expect, 1e-15));
        }
    }

    #[test]
    fn scaling_multiplies() {
        let g = compose(
            &GroupElement::m_alpha(Complex64::from(2.0), 2).unwrap(),
            &GroupElement::m_alpha(Complex64::from(3.0), 2).unwrap(),
        )
        .unwrap();
        assert!(g.approx_eq(
            &GroupElement::m_alpha(Complex64::from(6.0), 2).unwrap(),
            1e-15
        ));
    }

    #[test]
    fn inverse_cancels_exhaustively() {
        let n = 3;
        let alphas = [Complex64::ONE, Complex64::I, eta(3)];
        for mask in 0..8u32 {
            for sigma in Perm::all(n) {
                for &alpha in &alphas {
                    let g = GroupElement::new(Subset(mask), sigma.clone(), alpha).unwrap();
                    let gi = inverse(&g);
                    let e = compose(&g, &gi).unwrap();
                    assert!(e.approx_eq(&GroupElement::identity(n), 1e-14));
                    let e2 = compose(&gi, &g).unwrap();
                    assert!(e2.approx_eq(&GroupElement::identity(n), 1e-14));
                }
            }
        }
    }

    #[test]
    fn action_examples() {
        let p = DomainPoint::new(
            Complex64::new(0.7, 0.1),
            vec![Complex64::new(1.0, 2.0), Complex64::new(3.0, -1.0)],
            vec![0.25, 0.5],
            &cfg(),
        )
        .unwrap();

        let t1 = GroupElement::t_lambda(Subset::from_indices(&[0]), 2);
        let q = act(&t1, &p).unwrap();
        assert_eq!(q.w(), p.w() - p.a()[0]);
        assert_eq!(q.a(), &[-p.a()[0], p.a()[1]]);
        assert_eq!(q.theta(), &[-0.25, 0.5]);

        let m = GroupElement::m_alpha(Complex64::I, 2).unwrap();
        let q = act(&m, &p).unwrap();
        assert_eq!(q.w(), Complex64::I * p.w());
        assert_eq!(q.theta(), p.theta());

        let r = GroupElement::r_sigma(Perm::transposition(2, 0, 1));
        let q = act(&r, &p).unwrap();
        assert_eq!(q.a(), &[p.a()[1], p.a()[0]]);
        assert_eq!(q.theta(), &[0.5, 0.25]);
        assert_eq!(q.w(), p.w());
    }

    #[test]
    fn action_composes_like_the_group() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let n = 3;
        let perms = Perm::all(n);
        for _ in 0..200 {
            let g1 = GroupElement::new(
                Subset(rng.gen_range(0..8)),
                perms[rng.gen_range(0..perms.len())].clone(),
                e2pi(Complex64::from(rng.gen_range(-0.5..0.5))),
            )
            .unwrap();
            let g2 = GroupElement::new(
                Subset(rng.gen_range(0..8)),
                perms[rng.gen_range(0..perms.len())].clone(),
                e2pi(Complex64::from(rng.gen_range(-0.5..0.5))),
            )
            .unwrap();
            let p = DomainPoint::new(
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                (0..n)
                    .map(|_| Complex64::new(rng.gen_range(0.2..1.0), rng.gen_range(-1.0..1.0)))
                    .collect(),
                (0..n).map(|_| rng.gen_range(-0.6..0.6)).collect(),
                &cfg(),
            )
            .unwrap();
            let lhs = act(&compose(&g1, &g2).unwrap(), &p).unwrap();
            let rhs = act(&g1, &act(&g2, &p).unwrap()).unwrap();
            assert!(lhs.approx_eq(&rhs, 1e-12));
        }
    }

    #[test]
    fn j_factor_examples() {
        let id = GroupElement::identity(3);
        let v = j_factor(&id, Complex64::new(0.4, -2.0), &[0.1, 0.2, 0.3]).unwrap();
        assert!((v - Complex64::ONE).norm() < 1e-15);

        let t = GroupElement::t_lambda(Subset::from_indices(&[0, 1]), 3);
        let v = j_factor(&t, Complex64::from(2.0), &[0.0; 3]).unwrap();
        assert!((v - Complex64::ONE).norm() < 1e-15);
        let t1 = GroupElement::t_lambda(Subset::from_indices(&[0]), 3);
        let v = j_factor(&t1, Complex64::from(2.0), &[0.0; 3]).unwrap();
        assert!((v + Complex64::ONE).norm() < 1e-15);

        // Second worked family: J = −η^{−k}, equal to 1 iff k ≡ N (mod 2N).
        let n = 3;
        let g = GroupElement::new(
            Subset::from_indices(&[0]),
            Perm::cycle(n),
            eta(2 * n as u32),
        )
        .unwrap();
        for k in -6i32..=6 {
            let v = j_factor(&g, Complex64::from(k as f64), &[0.0; 3]).unwrap();
            let expect = -cpow_principal(eta(2 * n as u32), Complex64::from(-k as f64)).unwrap();
            assert!((v - expect).norm() < 1e-13);
            let is_one = (v - Complex64::ONE).norm() < 1e-12;
            assert_eq!(
                is_one,
                (k - n as i32).rem_euclid(2 * n as i32) == 0,
                "k={k}"
            );
        }
    }

    #[test]
    fn psi_angle_convention() {
        assert_eq!(
            psi_angle(&GroupElement::m_alpha(Complex64::ONE, 1).unwrap()),
            0.0
        );
        let g = GroupElement::m_alpha(e2pi(Complex64::from(0.2)), 1).unwrap();
        assert!((psi_angle(&g) - 0.4 * std::f64::consts::PI).abs() < 1e-14);
        let g = GroupElement::m_alpha(-Complex64::ONE, 1).unwrap();
        assert_eq!(psi_angle(&g), std::f64::consts::PI);
    }

    #[test]
    fn fixed_space_identity() {
        let s = fixed_point_space(&GroupElement::identity(3), &cfg());
        assert_eq!(s.case_tag, CaseTag::AlphaEqualsOne);
        assert_eq!(s.a_basis.len(), 3);
        assert_eq!(s.theta_basis.len(), 3);
        assert_eq!(s.w_rule, WRule::Free);
    }

    #[test]
    fn fixed_space_example_families() {
        // First family: g = R_(0 1 … N−1) M_{e(1/N)}, N odd.
        for n in [3usize, 5] {
            let g = GroupElement::new(Subset::EMPTY, Perm::cycle(n), eta(n as u32)).unwrap();
            let s = fixed_point_space(&g, &cfg());
            assert_eq!(s.case_tag, CaseTag::AlphaNotOne);
            assert_eq!(s.w_rule, WRule::HalfTrace);
            let e = eta(n as u32);
            let a: Vec<Complex64> = (1..=n).map(|l| e.powu(l as u32)).collect();
            let theta = vec![0.37; n];
            let p = DomainPoint::new(Complex64::ZERO, a, theta, &cfg()).unwrap();
            assert!(is_fixed(&g, &p, &cfg()).unwrap());
            assert!(s.contains(&p, &cfg()));
        }
        // Second family: g = T_{0} R_(0 1 … N−1) M_{e(1/2N)}.
        for n in [2usize, 3] {
            let e = eta(2 * n as u32);
            let g = GroupElement::new(Subset::from_indices(&[0]), Perm::cycle(n), e).unwrap();
            let s = fixed_point_space(&g, &cfg());
            assert_eq!(s.case_tag, CaseTag::AlphaNotOne);
            let w = (Complex64::ONE - e).finv();
            let a: Vec<Complex64> = (0..n).map(|l| e.powu(l as u32)).collect();
            let p = DomainPoint::new(w, a, vec![0.0; n], &cfg()).unwrap();
            assert!(is_fixed(&g, &p, &cfg()).unwrap());
            assert!(s.contains(&p, &cfg()));
            // θ-space is trivial here: the single cycle has sign −1.
            assert!(s.theta_basis.is_empty());
        }
    }

    #[test]
    fn fixed_space_parity_consequence() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        let n = 4;
        let perms = Perm::all(n);
        let mut checked = 0;
        for mask in 0..16u32 {
            for sigma in &perms {
                let g = GroupElement::new(Subset(mask), sigma.clone(), Complex64::ONE).unwrap();
                let s = fixed_point_space(&g, &cfg());
                if s.case_tag == CaseTag::Empty {
                    continue;
                }
                // sample a few points and check Tr(θ,Λ)=0 and even |Λ∩supp|…
                for _ in 0..5 {
                    let ac: Vec<Complex64> = (0..s.a_basis.len())
                        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                        .collect();
                    let tc: Vec<f64> = (0..s.theta_basis.len())
                        .map(|_| rng.gen_range(0.1..0.9))
                        .collect();
                    let Ok(p) = s.make_point(Complex64::from(1.0), &ac, &tc, &cfg()) else {
                        continue;
                    };
                    assert!(is_fixed(&g, &p, &cfg()).unwrap());
                    let tr_theta: f64 = g.lambda().iter().map(|l| p.theta()[l]).sum();
                    assert!(
                        tr_theta.abs() < 1e-10,
                        "Tr(θ,Λ) must vanish on fixed points"
                    );
                    checked += 1;
                }
            }
        }
        assert!(checked > 0);
    }

    #[test]
    fn non_fixed_perturbations_detected() {
        let n = 3;
        let g = GroupElement::new(Subset::EMPTY, Perm::cycle(n), eta(n as u32)).unwrap();
        let e = eta(n as u32);
        let a: Vec<Complex64> = (1..=n).map(|l| e.powu(l as u32)).collect();
        let p = DomainPoint::new(Complex64::ZERO, a.clone(), vec![0.1; n], &cfg()).unwrap();
        assert!(is_fixed(&g, &p, &cfg()).unwrap());
        let mut a2 = a;
        a2[1] += Complex64::new(1e-6, 0.0);
        let q = DomainPoint::new(Complex64::ZERO, a2, vec![0.1; n], &cfg()).unwrap();
        assert!(!is_fixed(&g, &q, &cfg()).unwrap());
        // scaling alone never fixes a point with nonzero a
        let m2 = GroupElement::m_alpha(Complex64::from(2.0), n).unwrap();
        assert!(!is_fixed(&m2, &p, &cfg()).unwrap());
    }
}

//! Quantum maps stored as their Choi (dynamical) matrix.
//!
//! For a map `Φ` on `N`-dimensional matrices the superoperator acts on
//! row-major vectors, `ρ'[m,μ] = Σ Φ[m·N+μ, n·N+ν] ρ[n,ν]`, and the Choi matrix is
//! its reshuffle, `D[m·N+n, μ·N+ν] = Φ[m·N+μ, n·N+ν]`. Trace preservation reads
//! `tr_A D = 1`, unitality `tr_B D = 1`.

use std::sync::OnceLock;

use crate::classical::StochasticMatrix;
use crate::error::{Error, Result};
use crate::matcore::{
    c, check_finite, eig_hermitian, eigvals_hermitian, ensure_square, entropy_of_hermitian,
    entropy_of_spectrum, identity, kron, max_abs_diff, partial_trace, partial_trace_dims,
    reshuffle, square_root_dim, unitarity_deviation, unvec_row_major, vec_row_major,
    von_neumann_entropy, ComplexMatrix, DensityMatrix, Side, Spectrum, C64, CLAMP_TOL, HERMIT_TOL,
};

/// Tolerance of the CP, TP and unitality predicates.
pub const FLAG_TOL: f64 = 1e-9;
/// Choi eigenvalues at or below this are dropped from the canonical Kraus form.
pub const KRAUS_CUTOFF: f64 = 1e-10;

/// A linear map on `N × N` matrices, stored canonically as its Choi matrix.
///
/// The CP/TP/unital predicates are computed on first use and cached.
#[derive(Debug, Clone)]
pub struct Channel {
    n: usize,
    choi: ComplexMatrix,
    cp: OnceLock<bool>,
    tp: OnceLock<bool>,
    unital: OnceLock<bool>,
}

impl PartialEq for Channel {
    fn eq(&self, other: &Self) -> bool {
        self.choi == other.choi
    }
}

/// Freshly evaluated structural predicates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Flags {
    pub cp: bool,
    pub tp: bool,
    pub unital: bool,
}

impl Channel {
    pub fn from_choi(choi: ComplexMatrix) -> Result<Self> {
        let n = square_root_dim(ensure_square(&choi)?)?;
        check_finite(&choi)?;
        Ok(Channel {
            n,
            choi,
            cp: OnceLock::new(),
            tp: OnceLock::new(),
            unital: OnceLock::new(),
        })
    }

    /// Channel from its `N² × N²` superoperator matrix.
    pub fn from_superop(superop: &ComplexMatrix) -> Result<Self> {
        Self::from_choi(reshuffle(superop)?)
    }

    /// `Φ(ρ) = Σ A ρ A†`; the Choi matrix is `Σ vec(A) vec(A)†`.
    pub fn from_kraus(ops: &[ComplexMatrix]) -> Result<Self> {
        let first = ops
            .first()
            .ok_or_else(|| Error::Dimension("empty Kraus list".into()))?;
        let n = ensure_square(first)?;
        let mut choi = ComplexMatrix::zeros(n * n, n * n);
        for a in ops {
            if a.shape() != (n, n) {
                return Err(Error::Dimension(format!(
                    "Kraus operator of shape {:?} in a {n}-dimensional set",
                    a.shape()
                )));
            }
            let v = vec_row_major(a);
            for i in 0..n * n {
                for j in 0..n * n {
                    choi[(i, j)] += v[i] * v[j].conj();
                }
            }
        }
        let ch = Self::from_choi(choi)?;
        let _ = ch.cp.set(true);
        Ok(ch)
    }

    pub fn identity(n: usize) -> Self {
        Self::from_superop(&identity(n * n)).expect("perfect square")
    }

    /// `Φ_*(ρ) = tr(ρ)·1/N`, Choi matrix `1/N`.
    pub fn depolarizing(n: usize) -> Self {
        Self::from_choi(identity(n * n) * c(1.0 / n as f64)).expect("perfect square")
    }

    /// `Φ_CG(ρ) = Σ |i⟩⟨i|ρ|i⟩⟨i|`.
    pub fn coarse_graining(n: usize) -> Self {
        Self::from_stochastic(&StochasticMatrix::identity(n))
    }

    /// `Φ_ρ0(ω) = tr(ω)·ρ0`, Choi matrix `ρ0 ⊗ 1`.
    pub fn contraction(rho0: &DensityMatrix) -> Self {
        Self::from_choi(kron(rho0.as_matrix(), &identity(rho0.dim()))).expect("perfect square")
    }

    /// `ρ ↦ U ρ U†`.
    pub fn unitary(u: &ComplexMatrix) -> Result<Self> {
        ensure_square(u)?;
        let deviation = unitarity_deviation(u);
        if deviation > 1e-10 {
            return Err(Error::NotUnitary { deviation });
        }
        Self::from_kraus(std::slice::from_ref(u))
    }

    /// Channel with diagonal Choi matrix `D[a·N+b, a·N+b] = T[a, b]`.
    pub fn from_stochastic(t: &StochasticMatrix) -> Self {
        let n = t.dim();
        let mut choi = ComplexMatrix::zeros(n * n, n * n);
        for a in 0..n {
            for b in 0..n {
                choi[(a * n + b, a * n + b)] = c(t.as_matrix()[(a, b)]);
            }
        }
        Self::from_choi(choi).expect("perfect square")
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn choi(&self) -> &ComplexMatrix {
        &self.choi
    }

    pub fn superop(&self) -> ComplexMatrix {
        reshuffle(&self.choi).expect("Choi dimension is a perfect square")
    }

    fn compute_cp(&self) -> bool {
        match eigvals_hermitian(&self.choi, HERMIT_TOL) {
            Ok(s) => s.min() >= -FLAG_TOL,
            Err(_) => false,
        }
    }

    fn compute_tp(&self) -> bool {
        let ta = partial_trace(&self.choi, Side::A).expect("square");
        max_abs_diff(&ta, &identity(self.n)) <= FLAG_TOL
    }

    fn compute_unital(&self) -> bool {
        let tb = partial_trace(&self.choi, Side::B).expect("square");
        max_abs_diff(&tb, &identity(self.n)) <= FLAG_TOL
    }

    /// Completely positive: Choi matrix Hermitian with minimum eigenvalue `≥ −1e-9`.
    pub fn is_cp(&self) -> bool {
        *self.cp.get_or_init(|| self.compute_cp())
    }

    /// Trace preserving: `‖tr_A D − 1‖_max ≤ 1e-9`.
    pub fn is_tp(&self) -> bool {
        *self.tp.get_or_init(|| self.compute_tp())
    }

    /// Unital: `‖tr_B D − 1‖_max ≤ 1e-9`.
    pub fn is_unital(&self) -> bool {
        *self.unital.get_or_init(|| self.compute_unital())
    }

    pub fn is_bistochastic(&self) -> bool {
        self.is_cp() && self.is_tp() && self.is_unital()
    }

    /// Recomputes every predicate, ignoring the cache.
    pub fn revalidate(&self) -> Flags {
        Flags {
            cp: self.compute_cp(),
            tp: self.compute_tp(),
            unital: self.compute_unital(),
        }
    }

    fn require_cp(&self) -> Result<()> {
        if self.is_cp() {
            return Ok(());
        }
        let min_eigenvalue = eigvals_hermitian(&self.choi, HERMIT_TOL)?.min();
        Err(Error::Positivity { min_eigenvalue })
    }

    fn require_cptp(&self) -> Result<()> {
        self.require_cp()?;
        if !self.is_tp() {
            let ta = partial_trace(&self.choi, Side::A)?;
            return Err(Error::Trace {
                trace: crate::matcore::trace(&ta).re / self.n as f64,
            });
        }
        Ok(())
    }

    fn check_dim(&self, x: &ComplexMatrix) -> Result<()> {
        if x.shape() != (self.n, self.n) {
            return Err(Error::Dimension(format!(
                "{}x{} input for a channel on dimension {}",
                x.nrows(),
                x.ncols(),
                self.n
            )));
        }
        Ok(())
    }

    /// `ρ'[m,μ] = Σ_{n,ν} D[m·N+n, μ·N+ν] ρ[n,ν]`.
    pub fn apply(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check_dim(rho)?;
        let n = self.n;
        Ok(ComplexMatrix::from_fn(n, n, |m, mu| {
            let mut acc = C64::new(0.0, 0.0);
            for nn in 0..n {
                for nu in 0..n {
                    acc += self.choi[(m * n + nn, mu * n + nu)] * rho[(nn, nu)];
                }
            }
            acc
        }))
    }

    /// Image of a state under a CP-TP channel.
    pub fn apply_state(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        self.require_cptp()?;
        DensityMatrix::new(self.apply(rho.as_matrix())?)
    }

    /// `later ∘ earlier`: superoperators multiply, `D = (D_later^R · D_earlier^R)^R`.
    pub fn compose(later: &Channel, earlier: &Channel) -> Result<Channel> {
        if later.n != earlier.n {
            return Err(Error::Dimension(format!("{} vs {}", later.n, earlier.n)));
        }
        Channel::from_superop(&(later.superop() * earlier.superop()))
    }

    /// `n`-fold concatenation `Φ ∘ … ∘ Φ`; `n = 0` gives the identity.
    pub fn power(&self, n: usize) -> Result<Channel> {
        let mut acc = Channel::identity(self.n);
        for _ in 0..n {
            acc = Channel::compose(self, &acc)?;
        }
        Ok(acc)
    }

    /// `Φ†(ρ) = (Φ(ρ*))*`, whose Choi matrix is the entry-wise conjugate.
    pub fn adjoint(&self) -> Channel {
        Channel::from_choi(self.choi.map(|z| z.conj())).expect("same shape")
    }

    /// Hilbert–Schmidt dual `tr(Φ(X) Y) = tr(X Φ^‡(Y))`; Kraus operators `A†`.
    ///
    /// Swaps the roles of trace preservation and unitality.
    pub fn dual(&self) -> Channel {
        let n = self.n;
        let choi = ComplexMatrix::from_fn(n * n, n * n, |r, col| {
            let (m, nn) = (r / n, r % n);
            let (mu, nu) = (col / n, col % n);
            self.choi[(nn * n + m, nu * n + mu)].conj()
        });
        Channel::from_choi(choi).expect("same shape")
    }

    /// Canonical Kraus form from the Choi eigendecomposition.
    pub fn to_kraus(&self) -> Result<KrausSet> {
        self.require_cp()?;
        let n = self.n;
        let (spec, vecs) = eig_hermitian(&self.choi, HERMIT_TOL)?;
        let mut operators = Vec::new();
        let mut weights = Vec::new();
        for k in (0..n * n).rev() {
            let d = spec.values()[k];
            if d <= KRAUS_CUTOFF {
                break;
            }
            let mut v: Vec<C64> = vecs.column(k).iter().copied().collect();
            let scale = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
            if let Some(z) = v.iter().find(|z| z.norm() > 1e-10 * scale).copied() {
                let phase = z.conj() / z.norm();
                v.iter_mut().for_each(|x| *x *= phase);
            }
            operators.push(unvec_row_major(&v, n) * c(d.sqrt()));
            weights.push(d);
        }
        Ok(KrausSet {
            n,
            operators,
            weights,
        })
    }

    /// `ς = D/N`, the Jamiołkowski state of a CP-TP channel.
    pub fn jam_state(&self) -> Result<DensityMatrix> {
        self.require_cptp()?;
        DensityMatrix::new(&self.choi * c(1.0 / self.n as f64))
    }

    /// Spectrum of `D/N`.
    pub fn jam_spectrum(&self) -> Result<Spectrum> {
        self.require_cptp()?;
        eigvals_hermitian(&(&self.choi * c(1.0 / self.n as f64)), HERMIT_TOL)
    }

    /// `S(Φ) = S(D/N)`, between `0` and `2 ln N`.
    pub fn map_entropy(&self) -> Result<f64> {
        entropy_of_spectrum(self.jam_spectrum()?.values())
    }

    /// `T[i, j] = D[i·N+j, i·N+j]`, the classical part of the dynamics.
    pub fn stochastic_matrix(&self) -> Result<StochasticMatrix> {
        let n = self.n;
        StochasticMatrix::new(nalgebra::DMatrix::from_fn(n, n, |i, j| {
            self.choi[(i * n + j, i * n + j)].re
        }))
    }
}

/// Alias spelled after the diagonal-channel construction.
pub fn diag_channel_from_stochastic(t: &StochasticMatrix) -> Channel {
    Channel::from_stochastic(t)
}

pub fn stochastic_from_channel(ch: &Channel) -> Result<StochasticMatrix> {
    ch.stochastic_matrix()
}

/// Kraus operators `A_α = √d_α · unvec(v_α)` with descending weights `d_α`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausSet {
    n: usize,
    operators: Vec<ComplexMatrix>,
    weights: Vec<f64>,
}

impl KrausSet {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `‖Σ A†A − 1‖_max`.
    pub fn completeness_deviation(&self) -> f64 {
        let sum = self
            .operators
            .iter()
            .fold(ComplexMatrix::zeros(self.n, self.n), |acc, a| {
                acc + a.adjoint() * a
            });
        max_abs_diff(&sum, &identity(self.n))
    }

    /// `max |tr A_α† A_β − d_α δ_αβ|`.
    pub fn orthogonality_deviation(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, a) in self.operators.iter().enumerate() {
            for (j, b) in self.operators.iter().enumerate() {
                let g = (a.adjoint() * b).trace();
                let expect = if i == j { self.weights[i] } else { 0.0 };
                worst = worst.max((g - c(expect)).norm());
            }
        }
        worst
    }

    /// `Σ A ρ A†`.
    pub fn apply(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        self.operators
            .iter()
            .fold(ComplexMatrix::zeros(self.n, self.n), |acc, a| {
                acc + a * rho * a.adjoint()
            })
    }

    pub fn to_channel(&self) -> Result<Channel> {
        Channel::from_kraus(&self.operators)
    }
}

/// `σ̂[α, β] = tr ρ A_β† A_α` in the canonical Kraus labeling.
pub fn sigma_hat(ch: &Channel, rho: &DensityMatrix) -> Result<DensityMatrix> {
    ch.require_cptp()?;
    check_state_dim(ch, rho)?;
    let kraus = ch.to_kraus()?;
    sigma_hat_from_kraus(&kraus, rho.as_matrix())
}

fn sigma_hat_from_kraus(kraus: &KrausSet, rho: &ComplexMatrix) -> Result<DensityMatrix> {
    let ops = kraus.operators();
    let m = ops.len();
    // tr ρ A_β† A_α = tr A_α ρ A_β†
    let a_rho: Vec<ComplexMatrix> = ops.iter().map(|a| a * rho).collect();
    let s = ComplexMatrix::from_fn(m, m, |alpha, beta| {
        (&a_rho[alpha] * ops[beta].adjoint()).trace()
    });
    DensityMatrix::with_tolerance(s, CLAMP_TOL)
}

fn check_state_dim(ch: &Channel, rho: &DensityMatrix) -> Result<()> {
    if rho.dim() != ch.dim() {
        return Err(Error::Dimension(format!(
            "state of dimension {} for a channel on dimension {}",
            rho.dim(),
            ch.dim()
        )));
    }
    Ok(())
}

/// `S(σ̂(Φ, ρ))`, the entropy exchange.
pub fn entropy_exchange(ch: &Channel, rho: &DensityMatrix) -> Result<f64> {
    Ok(von_neumann_entropy(&sigma_hat(ch, rho)?))
}

/// Entropy of `(id ⊗ Φ)|φ⟩⟨φ|` for the purification `|φ⟩ = Σ √p_i |e_i⟩⊗|e_i⟩` of `ρ`.
///
/// Works from the Choi matrix directly, with `Φ` on the second leg.
pub fn purified_exchange_entropy(ch: &Channel, rho: &DensityMatrix) -> Result<f64> {
    check_state_dim(ch, rho)?;
    let n = ch.dim();
    let (spec, vecs) = eig_hermitian(rho.as_matrix(), HERMIT_TOL)?;
    let mut phi = vec![C64::new(0.0, 0.0); n * n];
    for (i, &p) in spec.values().iter().enumerate() {
        let w = p.max(0.0).sqrt();
        for a in 0..n {
            for b in 0..n {
                phi[a * n + b] += vecs[(a, i)] * vecs[(b, i)] * w;
            }
        }
    }
    let d = ch.choi();
    // out[(a,m),(a',μ)] = Σ_{n,ν} Φ[(m,μ),(n,ν)] φ[a,n] φ*[a',ν]
    let out = ComplexMatrix::from_fn(n * n, n * n, |r, col| {
        let (a, m) = (r / n, r % n);
        let (ap, mu) = (col / n, col % n);
        let mut acc = C64::new(0.0, 0.0);
        for nn in 0..n {
            for nu in 0..n {
                acc += d[(m * n + nn, mu * n + nu)] * phi[a * n + nn] * phi[ap * n + nu].conj();
            }
        }
        acc
    });
    entropy_of_hermitian(&out)
}

/// `ω = Σ_{αβ} A_α ρ A_β† ⊗ |α⟩⟨β|` on `ℂ^N ⊗ ℂ^M`, `M` the Kraus count.
pub fn lindblad_omega(ch: &Channel, rho: &DensityMatrix) -> Result<DensityMatrix> {
    ch.require_cptp()?;
    check_state_dim(ch, rho)?;
    let kraus = ch.to_kraus()?;
    omega_from_kraus(&kraus, rho.as_matrix())
}

fn omega_from_kraus(kraus: &KrausSet, rho: &ComplexMatrix) -> Result<DensityMatrix> {
    let n = kraus.dim();
    let m = kraus.len();
    // isometry F: ℂ^N → ℂ^N ⊗ ℂ^M, F[(i,α), k] = A_α[i, k]
    let f = ComplexMatrix::from_fn(n * m, n, |r, k| kraus.operators()[r % m][(r / m, k)]);
    DensityMatrix::with_tolerance(&f * rho * f.adjoint(), CLAMP_TOL)
}

/// Partial traces of `ω` over `ℂ^M` and `ℂ^N`: `(Φ(ρ), σ̂)`.
pub fn omega_marginals(omega: &DensityMatrix, n: usize) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let m = omega.dim() / n;
    let x = omega.as_matrix();
    Ok((
        partial_trace_dims(x, n, m, Side::B)?,
        partial_trace_dims(x, n, m, Side::A)?,
    ))
}

/// `|S(σ̂) − S(ρ)| ≤ S(Φ(ρ)) ≤ S(σ̂) + S(ρ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LindbladBounds {
    pub lower: f64,
    pub upper: f64,
    /// `S(Φ(ρ))`
    pub actual: f64,
    /// `S(σ̂)`
    pub exchange: f64,
    /// `S(ρ)`
    pub initial: f64,
}

impl LindbladBounds {
    pub fn lower_slack(&self) -> f64 {
        self.actual - self.lower
    }

    pub fn upper_slack(&self) -> f64 {
        self.upper - self.actual
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.lower_slack() >= -tol && self.upper_slack() >= -tol
    }
}

pub fn lindblad_bounds(ch: &Channel, rho: &DensityMatrix) -> Result<LindbladBounds> {
    let exchange = entropy_exchange(ch, rho)?;
    let initial = von_neumann_entropy(rho);
    let actual = von_neumann_entropy(&ch.apply_state(rho)?);
    Ok(LindbladBounds {
        lower: (exchange - initial).abs(),
        upper: exchange + initial,
        actual,
        exchange,
        initial,
    })
}

/// `I(Φ, ρ) = S(Φ(ρ)) − S(σ̂(Φ, ρ))`.
pub fn coherent_information(ch: &Channel, rho: &DensityMatrix) -> Result<f64> {
    let out = von_neumann_entropy(&ch.apply_state(rho)?);
    Ok(out - entropy_exchange(ch, rho)?)
}

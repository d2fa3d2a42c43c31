//! Seeded samplers for every object in the crate.
//!
//! Each sample draws from its own ChaCha20 stream keyed by `(master_seed,
//! stream_index)`, so results do not depend on evaluation order or thread count.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::channels::Channel;
use crate::classical::{ProbVector, StochasticMatrix};
use crate::error::{Error, Result};
use crate::matcore::{
    c, eig_hermitian, hermitian_map, hermitian_part, identity, kron, max_abs_diff, partial_trace,
    singular_values, trace, ComplexMatrix, DensityMatrix, Side, C64, HERMIT_TOL,
};
use crate::quasifree::{from_spectrum, qf_bistochastic, qf_extreme, qf_validate, QFMap, QFSymbol};

/// Marginal tolerance of the operator Sinkhorn iteration.
pub const SINKHORN_TOL: f64 = 1e-10;
pub const SINKHORN_MAX_ITER: usize = 1000;
/// Row/column tolerance of the classical Sinkhorn iteration.
pub const CLASSICAL_SINKHORN_TOL: f64 = 1e-12;

/// Address of one independent random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngStream {
    pub master_seed: u64,
    pub stream_index: u64,
}

impl RngStream {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        RngStream {
            master_seed,
            stream_index,
        }
    }

    pub fn rng(&self) -> ChaCha20Rng {
        let mut rng = ChaCha20Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.stream_index);
        rng
    }
}

fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let x: f64 = rng.sample(StandardNormal);
    let y: f64 = rng.sample(StandardNormal);
    C64::new(x, y) * std::f64::consts::FRAC_1_SQRT_2
}

/// `N × N` matrix of i.i.d. standard complex Gaussians, `E|g|² = 1`.
pub fn ginibre<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let mut g = ComplexMatrix::zeros(n, n);
    // row-major fill so the draw order is independent of storage layout
    for i in 0..n {
        for j in 0..n {
            g[(i, j)] = complex_normal(rng);
        }
    }
    g
}

/// Haar-distributed unitary from the QR decomposition of a Ginibre matrix.
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let qr = ginibre(n, rng).qr();
    let (mut q, r) = qr.unpack();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { c(1.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// `GG†/tr(GG†)`.
pub fn random_density<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DensityMatrix {
    let g = ginibre(n, rng);
    let w = hermitian_part(&(&g * g.adjoint()));
    let t = trace(&w).re;
    DensityMatrix::new(w * c(1.0 / t)).expect("Wishart matrices are positive")
}

/// Rank-`rank` orthogonal projector onto a Haar-random subspace.
pub fn random_projector<R: Rng + ?Sized>(n: usize, rank: usize, rng: &mut R) -> ComplexMatrix {
    let u = haar_unitary(n, rng);
    let v = u.columns(0, rank.min(n)).into_owned();
    hermitian_part(&(&v * v.adjoint()))
}

/// `(1 ⊗ S) X (1 ⊗ S)` with `S = (tr_A X)^{-1/2}`, making `tr_A = 1`.
fn normalize_side_a(x: &ComplexMatrix, n: usize) -> Result<ComplexMatrix> {
    let s = inverse_sqrt(&partial_trace(x, Side::A)?)?;
    let k = kron(&identity(n), &s);
    Ok(hermitian_part(&(&k * x * &k)))
}

/// `(S ⊗ 1) X (S ⊗ 1)` with `S = (tr_B X)^{-1/2}`, making `tr_B = 1`.
fn normalize_side_b(x: &ComplexMatrix, n: usize) -> Result<ComplexMatrix> {
    let s = inverse_sqrt(&partial_trace(x, Side::B)?)?;
    let k = kron(&s, &identity(n));
    Ok(hermitian_part(&(&k * x * &k)))
}

fn inverse_sqrt(x: &ComplexMatrix) -> Result<ComplexMatrix> {
    let (spec, _) = eig_hermitian(x, HERMIT_TOL)?;
    if spec.min() <= 0.0 {
        return Err(Error::Numerical(format!(
            "marginal is singular (min eigenvalue {:.3e})",
            spec.min()
        )));
    }
    hermitian_map(x, |v| 1.0 / v.sqrt())
}

/// Random CP-TP channel: Wishart Choi matrix rescaled so that `tr_A D = 1`.
pub fn random_channel<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Channel {
    let g = ginibre(n * n, rng);
    let w = hermitian_part(&(&g * g.adjoint()));
    let d = normalize_side_a(&w, n).expect("Wishart marginals are invertible");
    Channel::from_choi(d).expect("square")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BistochasticMethod {
    /// Operator Sinkhorn scaling of a Wishart Choi matrix.
    Sinkhorn,
    /// Dirichlet-weighted mixture of `N²` Haar unitaries.
    UnitaryMixture,
}

/// Random CP, trace-preserving and unital channel.
pub fn random_bistochastic_channel<R: Rng + ?Sized>(
    n: usize,
    rng: &mut R,
    method: BistochasticMethod,
) -> Result<Channel> {
    match method {
        BistochasticMethod::Sinkhorn => {
            let g = ginibre(n * n, rng);
            let w = hermitian_part(&(&g * g.adjoint()));
            Channel::from_choi(operator_sinkhorn(w, n)?)
        }
        BistochasticMethod::UnitaryMixture => Ok(random_unitary_mixture(n, n * n, rng)),
    }
}

/// Alternates `tr_B` and `tr_A` normalization until both marginals are within
/// [`SINKHORN_TOL`] of the identity; the last step is always the `tr_A` one.
pub fn operator_sinkhorn(mut d: ComplexMatrix, n: usize) -> Result<ComplexMatrix> {
    let one = identity(n);
    let mut residual = f64::INFINITY;
    for _ in 0..SINKHORN_MAX_ITER {
        d = normalize_side_b(&d, n)?;
        d = normalize_side_a(&d, n)?;
        residual = max_abs_diff(&partial_trace(&d, Side::B)?, &one);
        if residual <= SINKHORN_TOL {
            return Ok(d);
        }
    }
    Err(Error::Convergence {
        iterations: SINKHORN_MAX_ITER,
        residual,
    })
}

fn dirichlet_ones<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Vec<f64> {
    let e: Vec<f64> = (0..k).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|x| x / s).collect()
}

/// `Σ p_i U_i · U_i†` over `k` Haar unitaries with Dirichlet(1, …, 1) weights.
pub fn random_unitary_mixture<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Channel {
    let p = dirichlet_ones(k, rng);
    let ops: Vec<ComplexMatrix> = p
        .iter()
        .map(|&w| haar_unitary(n, rng) * c(w.sqrt()))
        .collect();
    Channel::from_kraus(&ops).expect("non-empty Kraus list")
}

/// Probability vector drawn from Dirichlet(1, …, 1).
pub fn random_prob_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ProbVector {
    ProbVector::new(dirichlet_ones(n, rng)).expect("normalized")
}

/// Column-stochastic matrix with Dirichlet(1, …, 1) columns.
pub fn random_stochastic<R: Rng + ?Sized>(n: usize, rng: &mut R) -> StochasticMatrix {
    let cols: Vec<Vec<f64>> = (0..n).map(|_| dirichlet_ones(n, rng)).collect();
    StochasticMatrix::new(DMatrix::from_fn(n, n, |i, j| cols[j][i])).expect("Dirichlet columns")
}

/// Bistochastic matrix from classical Sinkhorn scaling of a matrix of Exp(1) entries.
pub fn random_bistochastic_matrix<R: Rng + ?Sized>(
    n: usize,
    rng: &mut R,
) -> Result<StochasticMatrix> {
    let t = DMatrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(Exp1));
    StochasticMatrix::new(sinkhorn(t)?)
}

/// Alternating row and column normalization, finishing on the columns.
pub fn sinkhorn(mut t: DMatrix<f64>) -> Result<DMatrix<f64>> {
    let mut residual = f64::INFINITY;
    for _ in 0..100 * SINKHORN_MAX_ITER {
        for mut row in t.row_iter_mut() {
            let s = row.sum();
            row /= s;
        }
        for mut col in t.column_iter_mut() {
            let s = col.sum();
            col /= s;
        }
        residual = t
            .row_iter()
            .map(|r| (r.sum() - 1.0).abs())
            .fold(0.0, f64::max);
        if residual <= CLASSICAL_SINKHORN_TOL {
            return Ok(t);
        }
    }
    Err(Error::Convergence {
        iterations: 100 * SINKHORN_MAX_ITER,
        residual,
    })
}

/// `U diag(u) U†` with Haar `U` and occupations uniform in `[0, 1]`.
pub fn random_qf_symbol<R: Rng + ?Sized>(n: usize, rng: &mut R) -> QFSymbol {
    let u = haar_unitary(n, rng);
    let d: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
    QFSymbol::new(from_spectrum(&u, &d)).expect("occupations in [0, 1]")
}

/// Ginibre matrix scaled to operator norm `s` with `s` uniform in `(0, 1]`.
pub fn random_contraction<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let g = ginibre(n, rng);
    let s = 1.0 - rng.random::<f64>();
    let top = singular_values(&g).max();
    g * c(s / top)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QfKind {
    /// `Z = ½(1 − R*R)`
    Bistochastic,
    /// `Z = √(1 − R*R) P √(1 − R*R)` with a Haar projector of uniform rank
    Extreme,
    /// `Z = √(1 − R*R) X √(1 − R*R)` with `0 ≤ X ≤ 1` generic
    Interior,
}

pub fn random_qf_map_of_kind<R: Rng + ?Sized>(n: usize, rng: &mut R, kind: QfKind) -> QFMap {
    let r = random_contraction(n, rng);
    match kind {
        QfKind::Bistochastic => qf_bistochastic(r).expect("contraction"),
        QfKind::Extreme => {
            let rank = rng.random_range(0..=n);
            let p = random_projector(n, rank, rng);
            qf_extreme(r, &p).expect("contraction and projector")
        }
        QfKind::Interior => {
            let x = random_qf_symbol(n, rng);
            let defect = hermitian_part(&(identity(n) - r.adjoint() * &r));
            let root = hermitian_map(&defect, |v| v.max(0.0).sqrt()).expect("Hermitian");
            let z = hermitian_part(&(&root * x.as_matrix() * &root));
            qf_validate(r, z).expect("interior point")
        }
    }
}

/// Random quasi-free map; without the bistochastic flag a fair coin picks an
/// extreme or an interior sample.
pub fn random_qf_map<R: Rng + ?Sized>(n: usize, rng: &mut R, bistochastic: bool) -> QFMap {
    let kind = if bistochastic {
        QfKind::Bistochastic
    } else if rng.random::<bool>() {
        QfKind::Extreme
    } else {
        QfKind::Interior
    };
    random_qf_map_of_kind(n, rng, kind)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{eigvals_hermitian, unitarity_deviation};

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a = ginibre(3, &mut RngStream::new(1, 5).rng());
        let b = ginibre(3, &mut RngStream::new(1, 5).rng());
        let other_index = ginibre(3, &mut RngStream::new(1, 6).rng());
        let other_seed = ginibre(3, &mut RngStream::new(2, 5).rng());
        assert_eq!(a, b);
        assert_ne!(a, other_index);
        assert_ne!(a, other_seed);
    }

    #[test]
    fn ginibre_entry_mean_is_zero() {
        let mut rng = RngStream::new(3, 0).rng();
        let k = 10_000;
        let mut sum = C64::new(0.0, 0.0);
        for _ in 0..k {
            sum += ginibre(2, &mut rng)[(0, 0)];
        }
        // each real part has variance 1/2
        let sigma = (0.5 / k as f64).sqrt();
        let mean = sum / k as f64;
        assert!(mean.re.abs() < 5.0 * sigma && mean.im.abs() < 5.0 * sigma);
    }

    #[test]
    fn haar_unitary_is_unitary() {
        for i in 0..50 {
            let n = 1 + (i % 6) as usize;
            let u = haar_unitary(n, &mut RngStream::new(4, i).rng());
            assert!(unitarity_deviation(&u) < 1e-12);
            assert!(singular_values(&u)
                .values()
                .iter()
                .all(|s| (s - 1.0).abs() < 1e-12));
        }
    }

    #[test]
    fn random_density_is_full_rank_state() {
        for i in 0..20 {
            let rho = random_density(4, &mut RngStream::new(5, i).rng());
            assert!((trace(rho.as_matrix()).re - 1.0).abs() < 1e-12);
            assert!(rho.spectrum().min() > 0.0);
        }
    }

    #[test]
    fn random_channel_is_cptp_not_unital() {
        for i in 0..20 {
            let ch = random_channel(3, &mut RngStream::new(6, i).rng());
            assert!(ch.is_cp() && ch.is_tp());
            assert!(!ch.is_unital());
        }
    }

    #[test]
    fn bistochastic_samplers() {
        for method in [
            BistochasticMethod::Sinkhorn,
            BistochasticMethod::UnitaryMixture,
        ] {
            for i in 0..20 {
                let n = 2 + (i % 3) as usize;
                let ch = random_bistochastic_channel(n, &mut RngStream::new(7, i).rng(), method)
                    .unwrap();
                assert!(ch.is_bistochastic(), "{method:?}");
                let one = identity(n);
                assert!(max_abs_diff(&partial_trace(ch.choi(), Side::A).unwrap(), &one) < 1e-9);
                assert!(max_abs_diff(&partial_trace(ch.choi(), Side::B).unwrap(), &one) < 1e-9);
            }
        }
        let single = random_unitary_mixture(3, 1, &mut RngStream::new(8, 0).rng());
        assert!(single.map_entropy().unwrap().abs() < 1e-10);
    }

    #[test]
    fn stochastic_samplers() {
        for i in 0..50 {
            let n = 2 + (i % 5) as usize;
            let t = random_stochastic(n, &mut RngStream::new(9, i).rng());
            assert!(t
                .as_matrix()
                .column_iter()
                .all(|col| (col.sum() - 1.0).abs() < 1e-12));
            let b = random_bistochastic_matrix(n, &mut RngStream::new(10, i).rng()).unwrap();
            assert!(b.row_sum_deviation() < 1e-12);
        }
        let flat = DMatrix::from_element(4, 4, 0.25);
        assert!((sinkhorn(flat.clone()).unwrap() - flat).amax() < 1e-15);
    }

    #[test]
    fn qf_samplers() {
        for i in 0..30 {
            let mut rng = RngStream::new(11, i).rng();
            let m = random_qf_map(4, &mut rng, i % 3 == 0);
            assert!(qf_validate(m.r().clone(), m.z().clone()).is_ok());
            let q = random_qf_symbol(4, &mut rng);
            let ev = eigvals_hermitian(q.as_matrix(), HERMIT_TOL).unwrap();
            assert!(ev.min() >= -1e-12 && ev.max() <= 1.0 + 1e-12);
            assert!(singular_values(&random_contraction(5, &mut rng)).max() <= 1.0 + 1e-12);
        }
        let p = random_projector(4, 2, &mut RngStream::new(12, 0).rng());
        assert!(max_abs_diff(&(&p * &p), &p) < 1e-12);
        assert!((trace(&p).re - 2.0).abs() < 1e-12);
    }
}

//! Dense complex linear algebra shared by every other module.
//!
//! Composite indices are 0-based and row-major: entry `ρ[m, μ]` of an
//! `N`-dimensional matrix sits at vector position `m·N + μ`, and a row of an
//! `N²`-dimensional operator is addressed as `(first, second) = first·N + second`.

use nalgebra::{Complex, DMatrix};

use crate::classical::ProbVector;
use crate::error::{Error, Result};

pub type C64 = Complex<f64>;

/// Square complex matrix; the universal carrier of states, superoperators and Choi matrices.
pub type ComplexMatrix = DMatrix<C64>;

/// Eigenvalues in `[-CLAMP_TOL, 0]` are treated as zero.
pub const CLAMP_TOL: f64 = 1e-9;
/// Relative Hermiticity tolerance used before decomposing.
pub const HERMIT_TOL: f64 = 1e-10;

pub(crate) fn c(re: f64) -> C64 {
    Complex::new(re, 0.0)
}

pub fn identity(n: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n, n)
}

/// Returns `N` when `dim == N²`.
pub fn square_root_dim(dim: usize) -> Result<usize> {
    let n = (dim as f64).sqrt().round() as usize;
    if n * n == dim && n > 0 {
        Ok(n)
    } else {
        Err(Error::Dimension(format!("{dim} is not a perfect square")))
    }
}

pub(crate) fn ensure_square(x: &ComplexMatrix) -> Result<usize> {
    if x.nrows() != x.ncols() {
        return Err(Error::Dimension(format!(
            "expected a square matrix, got {}x{}",
            x.nrows(),
            x.ncols()
        )));
    }
    Ok(x.nrows())
}

pub fn check_finite(x: &ComplexMatrix) -> Result<()> {
    if x.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

/// Largest entry modulus, `‖X‖_max`.
pub fn max_abs(x: &ComplexMatrix) -> f64 {
    x.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `‖X − Y‖_max`.
pub fn max_abs_diff(x: &ComplexMatrix, y: &ComplexMatrix) -> f64 {
    x.iter()
        .zip(y.iter())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max)
}

/// `‖X − X†‖_max`.
pub fn hermiticity_deviation(x: &ComplexMatrix) -> f64 {
    max_abs_diff(x, &x.adjoint())
}

pub fn is_hermitian(x: &ComplexMatrix, tol: f64) -> bool {
    x.is_square() && hermiticity_deviation(x) <= tol * max_abs(x).max(1.0)
}

/// `(X + X†) / 2`.
pub fn hermitian_part(x: &ComplexMatrix) -> ComplexMatrix {
    (x + x.adjoint()) * c(0.5)
}

pub fn trace(x: &ComplexMatrix) -> C64 {
    x.diagonal().iter().sum()
}

/// Reshuffling involution: `out[m·N+n, μ·N+ν] = X[m·N+μ, n·N+ν]`.
///
/// Maps a superoperator matrix to its Choi (dynamical) matrix and back.
pub fn reshuffle(x: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = square_root_dim(ensure_square(x)?)?;
    let mut out = ComplexMatrix::zeros(n * n, n * n);
    for m in 0..n {
        for nn in 0..n {
            for mu in 0..n {
                for nu in 0..n {
                    out[(m * n + nn, mu * n + nu)] = x[(m * n + mu, nn * n + nu)];
                }
            }
        }
    }
    Ok(out)
}

/// Which tensor factor of `H_A ⊗ H_B` is traced out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// Trace over the first factor; the result lives on `H_B`.
    A,
    /// Trace over the second factor; the result lives on `H_A`.
    B,
}

/// Partial trace of an operator on `ℂ^N ⊗ ℂ^N`.
pub fn partial_trace(x: &ComplexMatrix, side: Side) -> Result<ComplexMatrix> {
    let n = square_root_dim(ensure_square(x)?)?;
    partial_trace_dims(x, n, n, side)
}

/// Partial trace of an operator on `ℂ^da ⊗ ℂ^db`.
pub fn partial_trace_dims(
    x: &ComplexMatrix,
    da: usize,
    db: usize,
    side: Side,
) -> Result<ComplexMatrix> {
    if ensure_square(x)? != da * db {
        return Err(Error::Dimension(format!(
            "operator of dim {} cannot be split as {da}x{db}",
            x.nrows()
        )));
    }
    Ok(match side {
        Side::A => ComplexMatrix::from_fn(db, db, |mu, nu| {
            (0..da).map(|m| x[(m * db + mu, m * db + nu)]).sum()
        }),
        Side::B => ComplexMatrix::from_fn(da, da, |m, nn| {
            (0..db).map(|mu| x[(m * db + mu, nn * db + mu)]).sum()
        }),
    })
}

/// Kronecker product with row-major composite index `(i·M + k, j·M + l)`.
pub fn kron(x: &ComplexMatrix, y: &ComplexMatrix) -> ComplexMatrix {
    x.kronecker(y)
}

/// Row-major vectorization, `vec(A)[m·N + n] = A[m, n]`.
pub fn vec_row_major(a: &ComplexMatrix) -> Vec<C64> {
    let (r, cols) = a.shape();
    (0..r * cols).map(|k| a[(k / cols, k % cols)]).collect()
}

/// Inverse of [`vec_row_major`] for an `n × n` matrix.
pub fn unvec_row_major(v: &[C64], n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |i, j| v[i * n + j])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    Ascending,
    Descending,
}

/// Real spectrum with a fixed ordering.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    values: Vec<f64>,
    order: Order,
}

impl Spectrum {
    /// Sorts `values` in the given order; ties keep their original position.
    pub fn new(mut values: Vec<f64>, order: Order) -> Self {
        match order {
            Order::Ascending => values.sort_by(|a, b| a.total_cmp(b)),
            Order::Descending => values.sort_by(|a, b| b.total_cmp(a)),
        }
        Spectrum { values, order }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn order(&self) -> Order {
        self.order
    }

    pub fn dimension(&self) -> usize {
        self.values.len()
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Number of values strictly above `cutoff`.
    pub fn rank(&self, cutoff: f64) -> usize {
        self.values.iter().filter(|&&v| v > cutoff).count()
    }
}

fn checked_hermitian(x: &ComplexMatrix, hermit_tol: f64) -> Result<ComplexMatrix> {
    ensure_square(x)?;
    check_finite(x)?;
    let deviation = hermiticity_deviation(x);
    let tolerance = hermit_tol * max_abs(x).max(1.0);
    if deviation > tolerance {
        return Err(Error::Hermiticity {
            deviation,
            tolerance,
        });
    }
    Ok(hermitian_part(x))
}

/// Hermitian eigendecomposition `X·V = V·diag(values)` with ascending values.
///
/// The input is symmetrized before decomposing; columns of `V` follow the
/// order of the returned spectrum.
pub fn eig_hermitian(x: &ComplexMatrix, hermit_tol: f64) -> Result<(Spectrum, ComplexMatrix)> {
    let h = to_faer(&checked_hermitian(x, hermit_tol)?);
    let n = h.nrows();
    let eig = h
        .self_adjoint_eigen(faer::Side::Lower)
        .map_err(|e| Error::Numerical(format!("eigendecomposition failed: {e:?}")))?;
    let (s, u) = (eig.S(), eig.U());
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| s[a].re.total_cmp(&s[b].re));
    let values: Vec<f64> = idx.iter().map(|&i| s[i].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |r, col| {
        let z = u[(r, idx[col])];
        C64::new(z.re, z.im)
    });
    Ok((
        Spectrum {
            values,
            order: Order::Ascending,
        },
        vectors,
    ))
}

/// Eigenvalues only; cheaper than [`eig_hermitian`] when vectors are not needed.
pub fn eigvals_hermitian(x: &ComplexMatrix, hermit_tol: f64) -> Result<Spectrum> {
    let h = to_faer(&checked_hermitian(x, hermit_tol)?);
    let vals = h
        .self_adjoint_eigenvalues(faer::Side::Lower)
        .map_err(|e| Error::Numerical(format!("eigendecomposition failed: {e:?}")))?;
    Ok(Spectrum::new(vals, Order::Ascending))
}

fn to_faer(x: &ComplexMatrix) -> faer::Mat<faer::c64> {
    faer::Mat::from_fn(x.nrows(), x.ncols(), |i, j| {
        let z = x[(i, j)];
        faer::c64::new(z.re, z.im)
    })
}

/// `f(X)` for Hermitian `X`, computed through the eigendecomposition.
pub fn hermitian_map(x: &ComplexMatrix, f: impl Fn(f64) -> f64) -> Result<ComplexMatrix> {
    let (spec, v) = eig_hermitian(x, HERMIT_TOL)?;
    let n = v.nrows();
    let mut scaled = v.clone();
    for (j, &lam) in spec.values().iter().enumerate() {
        let fl = f(lam);
        for i in 0..n {
            scaled[(i, j)] *= fl;
        }
    }
    Ok(scaled * v.adjoint())
}

/// `‖U†U − 1‖_max`.
pub fn unitarity_deviation(u: &ComplexMatrix) -> f64 {
    max_abs_diff(&(u.adjoint() * u), &identity(u.ncols()))
}

/// Singular values in descending order.
pub fn singular_values(x: &ComplexMatrix) -> Spectrum {
    if x.is_empty() {
        return Spectrum::new(Vec::new(), Order::Descending);
    }
    let sv = to_faer(x)
        .singular_values()
        .unwrap_or_else(|_| x.clone().singular_values().iter().copied().collect());
    Spectrum::new(sv.iter().map(|s| s.max(0.0)).collect(), Order::Descending)
}

pub(crate) fn eta_unchecked(x: f64) -> f64 {
    let x = x.clamp(0.0, 1.0);
    if x > 0.0 {
        -x * x.ln()
    } else {
        0.0
    }
}

/// `η(x) = −x ln x` with `η(0) = 0`; inputs within `CLAMP_TOL` of `[0, 1]` are clamped.
pub fn eta(x: f64) -> Result<f64> {
    if !(-CLAMP_TOL..=1.0 + CLAMP_TOL).contains(&x) || x.is_nan() {
        return Err(Error::Domain {
            value: x,
            domain: "[0, 1]",
        });
    }
    Ok(eta_unchecked(x))
}

/// `Σ η(λ)` over a spectrum of a positive operator; eigenvalues below `−CLAMP_TOL` are an error.
pub fn entropy_of_spectrum(values: &[f64]) -> Result<f64> {
    let mut s = 0.0;
    for &v in values {
        if v < -CLAMP_TOL {
            return Err(Error::Positivity { min_eigenvalue: v });
        }
        s += eta_unchecked(v);
    }
    Ok(s)
}

/// Von Neumann entropy of a Hermitian positive matrix that need not be validated as a state.
pub fn entropy_of_hermitian(x: &ComplexMatrix) -> Result<f64> {
    entropy_of_spectrum(eigvals_hermitian(x, HERMIT_TOL)?.values())
}

/// A validated density matrix: Hermitian, positive semidefinite, unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
    tol: f64,
}

impl DensityMatrix {
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(mat, CLAMP_TOL)
    }

    /// Validates Hermiticity (relative to `max(1, ‖X‖_max)`), positivity and trace at `tol`.
    pub fn with_tolerance(mat: ComplexMatrix, tol: f64) -> Result<Self> {
        let mat = checked_hermitian(&mat, tol)?;
        let tr = trace(&mat).re;
        if (tr - 1.0).abs() > tol {
            return Err(Error::Trace { trace: tr });
        }
        let min_eigenvalue = eigvals_hermitian(&mat, tol)?.min();
        if min_eigenvalue < -tol {
            return Err(Error::Positivity { min_eigenvalue });
        }
        Ok(DensityMatrix { mat, tol })
    }

    /// `ρ_* = 1/N`.
    pub fn maximally_mixed(n: usize) -> Self {
        DensityMatrix {
            mat: identity(n) * c(1.0 / n as f64),
            tol: CLAMP_TOL,
        }
    }

    /// `|ψ⟩⟨ψ|` for a normalized copy of `psi`.
    pub fn pure(psi: &[C64]) -> Result<Self> {
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::Numerical("cannot normalize the zero vector".into()));
        }
        let n = psi.len();
        let mat = ComplexMatrix::from_fn(n, n, |i, j| psi[i] * psi[j].conj() / (norm * norm));
        Ok(DensityMatrix {
            mat,
            tol: CLAMP_TOL,
        })
    }

    /// `|k⟩⟨k|` in dimension `n`.
    pub fn basis_state(n: usize, k: usize) -> Self {
        let mut mat = ComplexMatrix::zeros(n, n);
        mat[(k, k)] = c(1.0);
        DensityMatrix {
            mat,
            tol: CLAMP_TOL,
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    pub fn as_matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    pub fn spectrum(&self) -> Spectrum {
        eigvals_hermitian(&self.mat, 1.0).expect("density matrices are Hermitian")
    }
}

impl AsRef<ComplexMatrix> for DensityMatrix {
    fn as_ref(&self) -> &ComplexMatrix {
        &self.mat
    }
}

/// `S(ρ) = −tr ρ ln ρ` in nats.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    rho.spectrum()
        .values()
        .iter()
        .map(|&v| eta_unchecked(v))
        .sum()
}

/// `H(P) = Σ η(p_i)` in nats.
pub fn shannon_entropy(p: &ProbVector) -> f64 {
    p.probs().iter().map(|&x| eta_unchecked(x)).sum()
}

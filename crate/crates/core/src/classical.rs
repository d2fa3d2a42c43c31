//! Column-stochastic matrices, probability vectors and their entropies.
//!
//! A stochastic matrix acts on probability vectors as `P' = T·P`, so every
//! column of `T` sums to one.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::matcore::{eta_unchecked, shannon_entropy};

/// Tolerance on the normalization of vectors, column sums and row sums.
pub const STOCHASTIC_TOL: f64 = 1e-10;
/// Singular values of `T − 1` below this count towards the invariant subspace.
pub const INVARIANT_MULTIPLICITY_TOL: f64 = 1e-8;

/// Tiny negative round-off is clamped; anything below this is rejected.
const NEG_CLAMP: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct ProbVector {
    probs: Vec<f64>,
}

impl ProbVector {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::Dimension("empty probability vector".into()));
        }
        if let Some(&bad) = probs.iter().find(|&&p| !p.is_finite() || p < -NEG_CLAMP) {
            return Err(Error::Domain {
                value: bad,
                domain: "[0, 1]",
            });
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > STOCHASTIC_TOL {
            return Err(Error::Stochasticity(format!(
                "probabilities sum to {total}"
            )));
        }
        Ok(ProbVector {
            probs: probs.into_iter().map(|p| p.max(0.0)).collect(),
        })
    }

    /// The uniform vector `P_*`.
    pub fn uniform(n: usize) -> Self {
        ProbVector {
            probs: vec![1.0 / n as f64; n],
        }
    }

    /// The deterministic vector `e_k`.
    pub fn basis(n: usize, k: usize) -> Self {
        let mut probs = vec![0.0; n];
        probs[k] = 1.0;
        ProbVector { probs }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn entropy(&self) -> f64 {
        shannon_entropy(self)
    }
}

/// Nonnegative square matrix with unit column sums.
#[derive(Debug, Clone, PartialEq)]
pub struct StochasticMatrix {
    t: DMatrix<f64>,
}

impl StochasticMatrix {
    pub fn new(t: DMatrix<f64>) -> Result<Self> {
        if !t.is_square() || t.nrows() == 0 {
            return Err(Error::Dimension(format!(
                "stochastic matrix must be square, got {}x{}",
                t.nrows(),
                t.ncols()
            )));
        }
        if let Some(&bad) = t.iter().find(|&&x| !x.is_finite() || x < -NEG_CLAMP) {
            return Err(Error::Stochasticity(format!(
                "entry {bad} is negative or not finite"
            )));
        }
        for (j, col) in t.column_iter().enumerate() {
            let s: f64 = col.sum();
            if (s - 1.0).abs() > STOCHASTIC_TOL {
                return Err(Error::Stochasticity(format!("column {j} sums to {s}")));
            }
        }
        Ok(StochasticMatrix {
            t: t.map(|x| x.max(0.0)),
        })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension("rows must form a square matrix".into()));
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn identity(n: usize) -> Self {
        StochasticMatrix {
            t: DMatrix::identity(n, n),
        }
    }

    /// The flat matrix `T_*` with every entry `1/N`.
    pub fn flat(n: usize) -> Self {
        StochasticMatrix {
            t: DMatrix::from_element(n, n, 1.0 / n as f64),
        }
    }

    /// Permutation matrix sending basis vector `j` to `perm[j]`.
    pub fn permutation(perm: &[usize]) -> Result<Self> {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &p in perm {
            if p >= n || seen[p] {
                return Err(Error::Dimension(format!("{perm:?} is not a permutation")));
            }
            seen[p] = true;
        }
        Ok(StochasticMatrix {
            t: DMatrix::from_fn(n, n, |i, j| (perm[j] == i) as u8 as f64),
        })
    }

    pub fn dim(&self) -> usize {
        self.t.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.t
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.t.column(j).iter().copied().collect()
    }

    /// Largest deviation of a row sum from one.
    pub fn row_sum_deviation(&self) -> f64 {
        self.t
            .row_iter()
            .map(|r| (r.sum() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    pub fn is_bistochastic(&self) -> bool {
        self.row_sum_deviation() <= STOCHASTIC_TOL
    }

    fn require_bistochastic(&self) -> Result<()> {
        if self.is_bistochastic() {
            Ok(())
        } else {
            Err(Error::Bistochasticity {
                deviation: self.row_sum_deviation(),
            })
        }
    }

    /// Matrix product `self · other` (apply `other` first).
    pub fn then_after(&self, other: &StochasticMatrix) -> Result<StochasticMatrix> {
        if self.dim() != other.dim() {
            return Err(Error::Dimension(format!(
                "{} vs {}",
                self.dim(),
                other.dim()
            )));
        }
        let mut t = &self.t * &other.t;
        // renormalize columns to absorb round-off
        for mut col in t.column_iter_mut() {
            let s = col.sum();
            col /= s;
        }
        Ok(StochasticMatrix { t })
    }

    /// `P' = T·P`.
    pub fn apply(&self, p: &ProbVector) -> Result<ProbVector> {
        if p.len() != self.dim() {
            return Err(Error::Dimension(format!(
                "vector of length {} for a {}-state chain",
                p.len(),
                self.dim()
            )));
        }
        let out = &self.t * DVector::from_column_slice(p.probs());
        let total = out.sum();
        ProbVector::new(out.iter().map(|x| x / total).collect())
    }

    /// Shannon entropy of column `j`.
    pub fn column_entropy(&self, j: usize) -> f64 {
        self.t.column(j).iter().map(|&x| eta_unchecked(x)).sum()
    }
}

/// `H(T) = −(1/N) Σ_ij T_ij ln T_ij`, the column entropies averaged with uniform weights.
pub fn entropy_uniform(t: &StochasticMatrix) -> f64 {
    let n = t.dim() as f64;
    t.as_matrix().iter().map(|&x| eta_unchecked(x)).sum::<f64>() / n
}

/// The unique invariant probability vector `P = T·P`.
pub fn invariant_state(t: &StochasticMatrix) -> Result<ProbVector> {
    let n = t.dim();
    let shifted = t.as_matrix() - DMatrix::<f64>::identity(n, n);
    let svd = shifted.svd(false, true);
    let multiplicity = svd
        .singular_values
        .iter()
        .filter(|&&s| s <= INVARIANT_MULTIPLICITY_TOL)
        .count();
    if multiplicity != 1 {
        return Err(Error::NonUniqueInvariant { multiplicity });
    }
    let k = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .expect("nonempty");
    let v_t = svd.v_t.expect("requested V^T");
    let v: Vec<f64> = v_t.row(k).iter().copied().collect();
    let total: f64 = v.iter().sum();
    if total.abs() < 1e-14 {
        return Err(Error::Numerical("null vector sums to zero".into()));
    }
    let p: Vec<f64> = v.iter().map(|x| x / total).collect();
    if let Some(&bad) = p.iter().find(|&&x| x < -STOCHASTIC_TOL) {
        return Err(Error::Numerical(format!(
            "invariant vector has entry {bad}"
        )));
    }
    ProbVector::new(p.into_iter().map(|x| x.max(0.0)).collect())
}

/// `H_I(T) = Σ_j p^I_j H(t_j)` with `P^I` the invariant state.
pub fn entropy_invariant(t: &StochasticMatrix) -> Result<f64> {
    let p = invariant_state(t)?;
    entropy_weighted(t, &p)
}

/// `H_P(T) = Σ_j p_j H(t_j)`; `P` need not be stationary.
pub fn entropy_weighted(t: &StochasticMatrix, p: &ProbVector) -> Result<f64> {
    if p.len() != t.dim() {
        return Err(Error::Dimension(format!(
            "{} weights for {} columns",
            p.len(),
            t.dim()
        )));
    }
    Ok(p.probs()
        .iter()
        .enumerate()
        .map(|(j, &pj)| pj * t.column_entropy(j))
        .sum())
}

/// Entropy bounds for a classically transformed vector `P' = T·P`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlomczynskiBounds {
    /// `H_P(T)`
    pub lower: f64,
    /// `H_P(T) + H(P)`
    pub upper: f64,
    /// `H_P(T) + 2 H(P)`, the bound inherited from the quantum Lindblad inequality.
    pub weak_upper: f64,
    /// `H(P')`
    pub actual: f64,
}

impl SlomczynskiBounds {
    /// Smallest signed slack over the three inequalities.
    pub fn slack(&self) -> f64 {
        (self.actual - self.lower)
            .min(self.upper - self.actual)
            .min(self.weak_upper - self.actual)
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.slack() >= -tol
    }
}

pub fn slomczynski_bounds(t: &StochasticMatrix, p: &ProbVector) -> Result<SlomczynskiBounds> {
    let hp_t = entropy_weighted(t, p)?;
    let h_p = p.entropy();
    let actual = t.apply(p)?.entropy();
    Ok(SlomczynskiBounds {
        lower: hp_t,
        upper: hp_t + h_p,
        weak_upper: hp_t + 2.0 * h_p,
        actual,
    })
}

/// Bounds on `H(T2·T1)` for arbitrary stochastic `T1`, `T2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductBounds {
    /// `H(T2 T1 P_*) − H(T1 P_*)`
    pub delta1: f64,
    /// `H_{T1 P_*}(T2) − H(T2)`
    pub delta2: f64,
    /// `H(T1) + δ1`
    pub lower: f64,
    /// `H(T2) + H(T1) + δ2`
    pub upper: f64,
    /// `H(T1) + H_{T1 P_*}(T2) + H(T1 P_*)`, the looser upper bound.
    pub loose_upper: f64,
    /// `H(T2 T1)`
    pub actual: f64,
}

impl ProductBounds {
    pub fn lower_slack(&self) -> f64 {
        self.actual - self.lower
    }

    pub fn upper_slack(&self) -> f64 {
        self.upper - self.actual
    }

    pub fn loose_upper_slack(&self) -> f64 {
        self.loose_upper - self.actual
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.lower_slack() >= -tol && self.upper_slack() >= -tol && self.loose_upper_slack() >= -tol
    }
}

pub fn product_bounds(t2: &StochasticMatrix, t1: &StochasticMatrix) -> Result<ProductBounds> {
    let n = t1.dim();
    let uniform = ProbVector::uniform(n);
    let t21 = t2.then_after(t1)?;
    let p1 = t1.apply(&uniform)?;
    let p21 = t21.apply(&uniform)?;
    let h1 = entropy_uniform(t1);
    let h2 = entropy_uniform(t2);
    let h2_weighted = entropy_weighted(t2, &p1)?;
    let delta1 = p21.entropy() - p1.entropy();
    let delta2 = h2_weighted - h2;
    Ok(ProductBounds {
        delta1,
        delta2,
        lower: h1 + delta1,
        upper: h2 + h1 + delta2,
        loose_upper: h1 + h2_weighted + p1.entropy(),
        actual: entropy_uniform(&t21),
    })
}

/// `max(H(T1), H(T2))` against `min(H(T1 T2), H(T2 T1))` for bistochastic pairs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetricBound {
    pub max_single: f64,
    pub min_product: f64,
    /// `H(T2 T1)`, for the subadditive upper bound.
    pub product_21: f64,
    /// `H(T1) + H(T2)`
    pub sum_single: f64,
}

impl SymmetricBound {
    pub fn slack(&self) -> f64 {
        self.min_product - self.max_single
    }

    pub fn upper_slack(&self) -> f64 {
        self.sum_single - self.product_21
    }
}

pub fn symmetric_bound(t1: &StochasticMatrix, t2: &StochasticMatrix) -> Result<SymmetricBound> {
    t1.require_bistochastic()?;
    t2.require_bistochastic()?;
    let h1 = entropy_uniform(t1);
    let h2 = entropy_uniform(t2);
    let h12 = entropy_uniform(&t1.then_after(t2)?);
    let h21 = entropy_uniform(&t2.then_after(t1)?);
    Ok(SymmetricBound {
        max_single: h1.max(h2),
        min_product: h12.min(h21),
        product_21: h21,
        sum_single: h1 + h2,
    })
}

/// `max(H(T1), H(T2)) ≤ min(H(T1 T2), H(T2 T1)) + 1e-9`.
pub fn check_symmetric_bound(t1: &StochasticMatrix, t2: &StochasticMatrix) -> Result<bool> {
    Ok(symmetric_bound(t1, t2)?.slack() >= -1e-9)
}

/// Signed slack of `H(T3 T2 T1) + H(T2) ≤ H(T3 T2) + H(T2 T1)`.
pub fn strong_subadd_slack(
    t1: &StochasticMatrix,
    t2: &StochasticMatrix,
    t3: &StochasticMatrix,
) -> Result<f64> {
    t1.require_bistochastic()?;
    t2.require_bistochastic()?;
    t3.require_bistochastic()?;
    let t32 = t3.then_after(t2)?;
    let t21 = t2.then_after(t1)?;
    let t321 = t32.then_after(t1)?;
    Ok(
        entropy_uniform(&t32) + entropy_uniform(&t21)
            - entropy_uniform(&t321)
            - entropy_uniform(t2),
    )
}

pub fn check_strong_subadd(
    t1: &StochasticMatrix,
    t2: &StochasticMatrix,
    t3: &StochasticMatrix,
) -> Result<bool> {
    Ok(strong_subadd_slack(t1, t2, t3)? >= -1e-9)
}

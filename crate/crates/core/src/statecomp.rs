//! The reshuffling composition `X ⊙ Y = (X^R Y^R)^R` on bipartite operators.
//!
//! On Choi matrices `D_2 ⊙ D_1` is the Choi matrix of `Φ_2 ∘ Φ_1`, the later map on
//! the left. On Jamiołkowski states the product picks up a factor `N`, see
//! [`odot_state`].

use crate::error::{Error, Result};
use crate::matcore::{
    c, check_finite, ensure_square, identity, kron, max_abs_diff, partial_trace, reshuffle,
    square_root_dim, ComplexMatrix, DensityMatrix,
};

/// Default membership tolerance for the state classes.
pub const CLASS_TOL: f64 = 1e-8;

/// Square operator on `ℂ^N ⊗ ℂ^N`.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteOperator {
    n: usize,
    mat: ComplexMatrix,
}

impl BipartiteOperator {
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        let n = square_root_dim(ensure_square(&mat)?)?;
        check_finite(&mat)?;
        Ok(BipartiteOperator { n, mat })
    }

    /// Local dimension `N`.
    pub fn local_dim(&self) -> usize {
        self.n
    }

    pub fn as_matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    /// `N·P_+`, the neutral element of [`odot_raw`].
    pub fn neutral(n: usize) -> Self {
        let mat = ComplexMatrix::from_fn(n * n, n * n, |r, col| {
            c(((r / n == r % n) && (col / n == col % n)) as u8 as f64)
        });
        BipartiteOperator { n, mat }
    }
}

impl From<&DensityMatrix> for BipartiteOperator {
    fn from(rho: &DensityMatrix) -> Self {
        BipartiteOperator::new(rho.as_matrix().clone()).expect("square")
    }
}

/// `X ⊙ Y = (X^R · Y^R)^R`.
pub fn odot_raw(x: &BipartiteOperator, y: &BipartiteOperator) -> Result<BipartiteOperator> {
    if x.n != y.n {
        return Err(Error::Dimension(format!(
            "local dimensions {} and {} differ",
            x.n, y.n
        )));
    }
    let prod = reshuffle(&x.mat)? * reshuffle(&y.mat)?;
    Ok(BipartiteOperator {
        n: x.n,
        mat: reshuffle(&prod)?,
    })
}

fn odot_matrix(x: &ComplexMatrix, y: &ComplexMatrix) -> Result<ComplexMatrix> {
    Ok(odot_raw(
        &BipartiteOperator::new(x.clone())?,
        &BipartiteOperator::new(y.clone())?,
    )?
    .mat)
}

/// Which of the nested classes `D^II ⊂ D^I ⊂ states` a state belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StateClass {
    General,
    /// `tr_A σ = 1/N`
    DI,
    /// both marginals equal `1/N`
    DII,
}

/// Classifies a state on `ℂ^N ⊗ ℂ^N` by its marginals.
pub fn membership(sigma: &DensityMatrix, tol: f64) -> Result<StateClass> {
    let n = square_root_dim(sigma.dim())?;
    let mixed = identity(n) * c(1.0 / n as f64);
    let a = partial_trace(sigma.as_matrix(), crate::matcore::Side::A)?;
    if max_abs_diff(&a, &mixed) > tol {
        return Ok(StateClass::General);
    }
    let b = partial_trace(sigma.as_matrix(), crate::matcore::Side::B)?;
    if max_abs_diff(&b, &mixed) > tol {
        return Ok(StateClass::DI);
    }
    Ok(StateClass::DII)
}

/// `σ_1 ⊙ σ_2 := N · odot_raw(σ_1, σ_2)` for states in `D^I`.
///
/// With this normalization `P_+` is neutral and the Jamiołkowski state of
/// `Φ_2 ∘ Φ_1` is `ς_2 ⊙ ς_1`.
pub fn odot_state(s1: &DensityMatrix, s2: &DensityMatrix) -> Result<DensityMatrix> {
    for (name, s) in [("left", s1), ("right", s2)] {
        if membership(s, CLASS_TOL)? == StateClass::General {
            return Err(Error::Class(format!("{name} operand is not in D^I")));
        }
    }
    let n = square_root_dim(s1.dim())?;
    let raw = odot_matrix(s1.as_matrix(), s2.as_matrix())?;
    DensityMatrix::with_tolerance(raw * c(n as f64), 1e-9)
}

/// `σ = ρ_0 ⊗ 1/N`, an idempotent of [`odot_state`].
pub fn idempotent_extension(rho0: &DensityMatrix) -> BipartiteOperator {
    let n = rho0.dim();
    BipartiteOperator::new(kron(rho0.as_matrix(), &identity(n)) * c(1.0 / n as f64))
        .expect("square")
}

/// `‖σ ⊙ σ − σ²‖_max`, nonzero in general.
pub fn not_square_witness(sigma: &DensityMatrix) -> Result<f64> {
    let s = sigma.as_matrix();
    Ok(max_abs_diff(&odot_matrix(s, s)?, &(s * s)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::Channel;
    use crate::matcore::{eigvals_hermitian, hermiticity_deviation, von_neumann_entropy};
    use crate::randgen::{ginibre, random_channel, random_density, RngStream};
    use rand_chacha::ChaCha20Rng;

    fn rng(i: u64) -> ChaCha20Rng {
        RngStream::new(13, i).rng()
    }

    fn p_plus(n: usize) -> DensityMatrix {
        DensityMatrix::new(BipartiteOperator::neutral(n).into_matrix() * c(1.0 / n as f64)).unwrap()
    }

    fn random_op(n: usize, i: u64) -> BipartiteOperator {
        BipartiteOperator::new(ginibre(n * n, &mut rng(i))).unwrap()
    }

    #[test]
    fn neutral_element_on_both_sides() {
        for n in 2..=3 {
            let e = BipartiteOperator::neutral(n);
            assert_eq!(reshuffle(e.as_matrix()).unwrap(), identity(n * n));
            let x = random_op(n, n as u64);
            assert!(max_abs_diff(odot_raw(&x, &e).unwrap().as_matrix(), x.as_matrix()) < 1e-13);
            assert!(max_abs_diff(odot_raw(&e, &x).unwrap().as_matrix(), x.as_matrix()) < 1e-13);
        }
    }

    #[test]
    fn choi_matrices_compose_like_channels() {
        let c1 = random_channel(3, &mut rng(10));
        let c2 = random_channel(3, &mut rng(11));
        let d = odot_raw(
            &BipartiteOperator::new(c2.choi().clone()).unwrap(),
            &BipartiteOperator::new(c1.choi().clone()).unwrap(),
        )
        .unwrap();
        let composed = Channel::compose(&c2, &c1).unwrap();
        assert!(max_abs_diff(d.as_matrix(), composed.choi()) < 1e-10);
        let states = odot_state(&c2.jam_state().unwrap(), &c1.jam_state().unwrap()).unwrap();
        assert!(
            max_abs_diff(
                states.as_matrix(),
                composed.jam_state().unwrap().as_matrix()
            ) < 1e-10
        );
    }

    #[test]
    fn positive_operators_stay_positive() {
        for i in 0..20 {
            let g = ginibre(4, &mut rng(100 + i));
            let h = ginibre(4, &mut rng(200 + i));
            let x = BipartiteOperator::new(&g * g.adjoint()).unwrap();
            let y = BipartiteOperator::new(&h * h.adjoint()).unwrap();
            let z = odot_raw(&x, &y).unwrap();
            assert!(hermiticity_deviation(z.as_matrix()) < 1e-12);
            assert!(eigvals_hermitian(z.as_matrix(), 1e-10).unwrap().min() >= -1e-9);
        }
    }

    #[test]
    fn associative_but_not_commutative() {
        let (x, y, z) = (random_op(2, 1), random_op(2, 2), random_op(2, 3));
        let l = odot_raw(&odot_raw(&x, &y).unwrap(), &z).unwrap();
        let r = odot_raw(&x, &odot_raw(&y, &z).unwrap()).unwrap();
        assert!(max_abs_diff(l.as_matrix(), r.as_matrix()) < 1e-10);
        let xy = odot_raw(&x, &y).unwrap();
        let yx = odot_raw(&y, &x).unwrap();
        assert!(max_abs_diff(xy.as_matrix(), yx.as_matrix()) > 1e-6);
        assert!(odot_raw(&x, &random_op(3, 4)).is_err());
    }

    #[test]
    fn odot_state_examples() {
        let n = 3;
        let c1 = random_channel(n, &mut rng(20));
        let s = c1.jam_state().unwrap();
        let p = p_plus(n);
        assert!(max_abs_diff(odot_state(&s, &p).unwrap().as_matrix(), s.as_matrix()) < 1e-12);
        assert!(max_abs_diff(odot_state(&p, &s).unwrap().as_matrix(), s.as_matrix()) < 1e-12);

        let rho0 = random_density(n, &mut rng(21));
        let sigma = DensityMatrix::new(idempotent_extension(&rho0).into_matrix()).unwrap();
        assert!(
            max_abs_diff(
                odot_state(&sigma, &sigma).unwrap().as_matrix(),
                sigma.as_matrix()
            ) < 1e-10
        );

        let generic = random_density(n * n, &mut rng(22));
        assert!(matches!(odot_state(&generic, &s), Err(Error::Class(_))));
    }

    #[test]
    fn membership_examples() {
        assert_eq!(membership(&p_plus(3), CLASS_TOL).unwrap(), StateClass::DII);
        let rho0 = random_density(3, &mut rng(30));
        let sigma = DensityMatrix::new(idempotent_extension(&rho0).into_matrix()).unwrap();
        assert_eq!(membership(&sigma, CLASS_TOL).unwrap(), StateClass::DI);
        assert_eq!(
            membership(&random_density(9, &mut rng(31)), CLASS_TOL).unwrap(),
            StateClass::General
        );
        assert!(membership(&random_density(3, &mut rng(32)), CLASS_TOL).is_err());
    }

    #[test]
    fn idempotent_extension_examples() {
        let n = 3;
        let mixed = idempotent_extension(&DensityMatrix::maximally_mixed(n));
        assert!(max_abs_diff(mixed.as_matrix(), &(identity(n * n) * c(1.0 / 9.0))) < 1e-15);
        let mixed = DensityMatrix::new(mixed.into_matrix()).unwrap();
        assert_eq!(membership(&mixed, CLASS_TOL).unwrap(), StateClass::DII);

        let pure = idempotent_extension(&DensityMatrix::basis_state(n, 2));
        let pure = DensityMatrix::new(pure.into_matrix()).unwrap();
        assert!((von_neumann_entropy(&pure) - (n as f64).ln()).abs() < 1e-12);

        let rho0 = random_density(n, &mut rng(40));
        let sigma = idempotent_extension(&rho0);
        let ch = Channel::from_choi(sigma.into_matrix() * c(n as f64)).unwrap();
        for i in 0..5 {
            let w = random_density(n, &mut rng(41 + i));
            assert!(max_abs_diff(&ch.apply(w.as_matrix()).unwrap(), rho0.as_matrix()) < 1e-10);
        }
    }

    #[test]
    fn not_square_witness_examples() {
        for n in 2..=4usize {
            let nf = n as f64;
            // σ = 1/N²: 1^R = N·P_+, so σ ⊙ σ = (N·P_+)²^R / N⁴
            let sigma = DensityMatrix::maximally_mixed(n * n);
            let id_r = reshuffle(&identity(n * n)).unwrap();
            let odot = reshuffle(&(&id_r * &id_r)).unwrap() * c(1.0 / nf.powi(4));
            let expect = max_abs_diff(&odot, &(identity(n * n) * c(1.0 / nf.powi(4))));
            assert!((not_square_witness(&sigma).unwrap() - expect).abs() < 1e-15);
            assert!(expect > 1e-6);

            // P_+ ⊙ P_+ = P_+/N while P_+² = P_+
            let p = p_plus(n);
            let w = not_square_witness(&p).unwrap();
            assert!((w - (1.0 - 1.0 / nf) / nf).abs() < 1e-14);
        }
        assert!(not_square_witness(&random_density(4, &mut rng(50))).unwrap() > 0.0);
    }
}

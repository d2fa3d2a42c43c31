//! Fermionic quasi-free states and maps at the level of one-particle symbols.
//!
//! A quasi-free state on `N` modes is fixed by its symbol `0 ≤ Q ≤ 1`; a quasi-free
//! map `Φ_{R,Z}` acts as `Q ↦ R*QR + Z` under the constraint `0 ≤ Z ≤ 1 − R*R`.

use crate::error::{Error, Result};
use crate::matcore::{
    c, check_finite, eig_hermitian, eigvals_hermitian, ensure_square, eta_unchecked, hermitian_map,
    hermitian_part, hermiticity_deviation, identity, max_abs_diff, singular_values, ComplexMatrix,
    DensityMatrix, CLAMP_TOL, HERMIT_TOL,
};

/// Tolerance on the operator inequalities `0 ≤ Q ≤ 1` and `0 ≤ Z ≤ 1 − R*R`.
pub const QF_TOL: f64 = 1e-9;
/// Largest mode number accepted by [`fock_density`].
pub const MAX_FOCK_MODES: usize = 4;

/// One-particle symbol `Q` of a quasi-free state, `0 ≤ Q ≤ 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct QFSymbol {
    q: ComplexMatrix,
}

impl QFSymbol {
    pub fn new(q: ComplexMatrix) -> Result<Self> {
        ensure_square(&q)?;
        check_finite(&q)?;
        let deviation = hermiticity_deviation(&q);
        if deviation > QF_TOL {
            return Err(Error::Hermiticity {
                deviation,
                tolerance: QF_TOL,
            });
        }
        let q = hermitian_part(&q);
        let spec = eigvals_hermitian(&q, HERMIT_TOL)?;
        if spec.min() < -QF_TOL {
            return Err(Error::Constraint(format!(
                "Q ≥ 0 fails, min eigenvalue {:.3e}",
                spec.min()
            )));
        }
        if spec.max() > 1.0 + QF_TOL {
            return Err(Error::Constraint(format!(
                "Q ≤ 1 fails, max eigenvalue {:.12}",
                spec.max()
            )));
        }
        Ok(QFSymbol { q })
    }

    /// `Q = ½·1`, the tracial state.
    pub fn tracial(modes: usize) -> Self {
        QFSymbol {
            q: identity(modes) * c(0.5),
        }
    }

    pub fn modes(&self) -> usize {
        self.q.nrows()
    }

    pub fn as_matrix(&self) -> &ComplexMatrix {
        &self.q
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.q
    }

    /// Eigenvalues clamped to `[0, 1]`, ascending.
    pub fn occupations(&self) -> Vec<f64> {
        eigvals_hermitian(&self.q, HERMIT_TOL)
            .expect("validated symbol")
            .values()
            .iter()
            .map(|x| x.clamp(0.0, 1.0))
            .collect()
    }

    /// `‖Q² − Q‖_max`.
    pub fn projector_deviation(&self) -> f64 {
        max_abs_diff(&(&self.q * &self.q), &self.q)
    }
}

/// Quasi-free map `Φ_{R,Z}`.
#[derive(Debug, Clone, PartialEq)]
pub struct QFMap {
    r: ComplexMatrix,
    z: ComplexMatrix,
}

impl QFMap {
    pub fn modes(&self) -> usize {
        self.r.nrows()
    }

    pub fn r(&self) -> &ComplexMatrix {
        &self.r
    }

    pub fn z(&self) -> &ComplexMatrix {
        &self.z
    }

    pub fn identity(modes: usize) -> Self {
        QFMap {
            r: identity(modes),
            z: ComplexMatrix::zeros(modes, modes),
        }
    }

    /// `(0, ½·1)`, sending every symbol to the tracial one.
    pub fn depolarizing(modes: usize) -> Self {
        QFMap {
            r: ComplexMatrix::zeros(modes, modes),
            z: identity(modes) * c(0.5),
        }
    }

    /// `‖Z − ½(1 − R*R)‖_max ≤ 1e-9`.
    pub fn is_bistochastic(&self) -> bool {
        max_abs_diff(&self.z, &bistochastic_z(&self.r)) <= QF_TOL
    }
}

fn bistochastic_z(r: &ComplexMatrix) -> ComplexMatrix {
    let n = r.nrows();
    (identity(n) - r.adjoint() * r) * c(0.5)
}

fn defect(r: &ComplexMatrix) -> ComplexMatrix {
    identity(r.nrows()) - r.adjoint() * r
}

fn check_modes(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::Dimension(format!("{a} modes vs {b} modes")));
    }
    Ok(())
}

/// Validates `0 ≤ Z ≤ 1 − R*R` at tolerance `1e-9`.
pub fn qf_validate(r: ComplexMatrix, z: ComplexMatrix) -> Result<QFMap> {
    let n = ensure_square(&r)?;
    check_modes(n, ensure_square(&z)?)?;
    check_finite(&r)?;
    check_finite(&z)?;
    let deviation = hermiticity_deviation(&z);
    if deviation > QF_TOL {
        return Err(Error::Hermiticity {
            deviation,
            tolerance: QF_TOL,
        });
    }
    let z = hermitian_part(&z);
    let min_z = eigvals_hermitian(&z, HERMIT_TOL)?.min();
    if min_z < -QF_TOL {
        return Err(Error::Constraint(format!(
            "Z ≥ 0 fails, min eigenvalue {min_z:.3e}"
        )));
    }
    let gap = hermitian_part(&(defect(&r) - &z));
    let min_gap = eigvals_hermitian(&gap, HERMIT_TOL)?.min();
    if min_gap < -QF_TOL {
        return Err(Error::Constraint(format!(
            "Z ≤ 1 − R*R fails, min eigenvalue of the gap {min_gap:.3e}"
        )));
    }
    Ok(QFMap { r, z })
}

/// `Q ↦ R*QR + Z`.
pub fn qf_apply(m: &QFMap, q: &QFSymbol) -> Result<QFSymbol> {
    check_modes(m.modes(), q.modes())?;
    let out = m.r.adjoint() * &q.q * &m.r + &m.z;
    Ok(QFSymbol {
        q: hermitian_part(&out),
    })
}

/// `later ∘ earlier`: `R = R_earlier·R_later`, `Z = R_later* Z_earlier R_later + Z_later`.
pub fn qf_compose(later: &QFMap, earlier: &QFMap) -> Result<QFMap> {
    check_modes(later.modes(), earlier.modes())?;
    let r = &earlier.r * &later.r;
    let z = later.r.adjoint() * &earlier.z * &later.r + &later.z;
    Ok(QFMap {
        r,
        z: hermitian_part(&z),
    })
}

/// `½[[1, R], [R*, R*R + 2Z]]` on `2N` modes.
pub fn qf_jam_symbol(m: &QFMap) -> QFSymbol {
    let n = m.modes();
    let lower = m.r.adjoint() * &m.r + &m.z * c(2.0);
    let mut s = ComplexMatrix::zeros(2 * n, 2 * n);
    s.view_mut((0, 0), (n, n)).copy_from(&identity(n));
    s.view_mut((0, n), (n, n)).copy_from(&m.r);
    s.view_mut((n, 0), (n, n)).copy_from(&m.r.adjoint());
    s.view_mut((n, n), (n, n)).copy_from(&lower);
    QFSymbol {
        q: hermitian_part(&(s * c(0.5))),
    }
}

/// Splits `2·Σ = [[1, R], [R*, E]]`, rejecting symbols with another top-left block.
fn blocks(sym: &QFSymbol) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let m = sym.modes();
    if !m.is_multiple_of(2) {
        return Err(Error::BlockForm(format!("odd dimension {m}")));
    }
    let n = m / 2;
    let doubled = &sym.q * c(2.0);
    let tl = doubled.view((0, 0), (n, n)).into_owned();
    let dev = max_abs_diff(&tl, &identity(n));
    if dev > QF_TOL {
        return Err(Error::BlockForm(format!(
            "top-left block deviates from 1/2 by {dev:.3e}"
        )));
    }
    Ok((
        doubled.view((0, n), (n, n)).into_owned(),
        doubled.view((n, n), (n, n)).into_owned(),
    ))
}

/// Composition law on Jamiołkowski symbols, `later_sym ⊙ earlier_sym`.
///
/// With `2Σ_e = [[1, R], [R*, E]]` and `2Σ_l = [[1, S], [S*, F]]` the result is
/// `½[[1, RS], [(RS)*, S*(E − 1)S + F]]`, which equals
/// `qf_jam_symbol(qf_compose(later, earlier))`. Affine in the earlier operand only.
pub fn qf_odot_symbol(later_sym: &QFSymbol, earlier_sym: &QFSymbol) -> Result<QFSymbol> {
    check_modes(later_sym.modes(), earlier_sym.modes())?;
    let (r, e) = blocks(earlier_sym)?;
    let (s, f) = blocks(later_sym)?;
    let n = r.nrows();
    let t1 = &r * &s;
    let t2 = s.adjoint() * (e - identity(n)) * &s + f;
    let mut out = ComplexMatrix::zeros(2 * n, 2 * n);
    out.view_mut((0, 0), (n, n)).copy_from(&identity(n));
    out.view_mut((0, n), (n, n)).copy_from(&t1);
    out.view_mut((n, 0), (n, n)).copy_from(&t1.adjoint());
    out.view_mut((n, n), (n, n)).copy_from(&t2);
    Ok(QFSymbol {
        q: hermitian_part(&(out * c(0.5))),
    })
}

fn qf_entropy_of_occupations(qs: &[f64]) -> f64 {
    qs.iter()
        .map(|&q| eta_unchecked(q) + eta_unchecked(1.0 - q))
        .sum()
}

/// `S^qf(Q) = tr(η(Q) + η(1 − Q))`.
pub fn qf_state_entropy(q: &QFSymbol) -> f64 {
    qf_entropy_of_occupations(&q.occupations())
}

/// Entropy of the Jamiołkowski state, `S^qf(qf_jam_symbol(M))`.
pub fn qf_map_entropy(m: &QFMap) -> f64 {
    qf_state_entropy(&qf_jam_symbol(m))
}

/// `2 Σ_j [η(½(1 + λ_j)) + η(½(1 − λ_j))]` over singular values `λ_j` of `R`.
pub fn qf_bistochastic_entropy(r: &ComplexMatrix) -> f64 {
    singular_values(r)
        .values()
        .iter()
        .map(|&l| {
            let l = l.min(1.0);
            2.0 * (eta_unchecked(0.5 * (1.0 + l)) + eta_unchecked(0.5 * (1.0 - l)))
        })
        .sum()
}

/// `S^qf(½(1 + |R|² − 2|R|P|R|))` with `|R| = (R*R)^{1/2}`, the entropy of `qf_extreme(R, P)`.
pub fn qf_extreme_entropy(r: &ComplexMatrix, p: &ComplexMatrix) -> Result<f64> {
    check_modes(r.nrows(), p.nrows())?;
    let n = r.nrows();
    let r2 = hermitian_part(&(r.adjoint() * r));
    let abs_r = hermitian_map(&r2, |x| x.max(0.0).sqrt())?;
    let q = (identity(n) + &r2 - &abs_r * p * &abs_r * c(2.0)) * c(0.5);
    let occ: Vec<f64> = eigvals_hermitian(&hermitian_part(&q), HERMIT_TOL)?
        .values()
        .iter()
        .map(|x| x.clamp(0.0, 1.0))
        .collect();
    Ok(qf_entropy_of_occupations(&occ))
}

fn check_contraction(r: &ComplexMatrix) -> Result<()> {
    ensure_square(r)?;
    check_finite(r)?;
    let norm = singular_values(r).values().first().copied().unwrap_or(0.0);
    if norm > 1.0 + QF_TOL {
        return Err(Error::Norm { norm });
    }
    Ok(())
}

/// `Φ_R` with `Z = ½(1 − R*R)`.
pub fn qf_bistochastic(r: ComplexMatrix) -> Result<QFMap> {
    check_contraction(&r)?;
    // 0 ≤ ½(1 − R*R) ≤ 1 − R*R holds for every contraction
    let z = hermitian_part(&bistochastic_z(&r));
    Ok(QFMap { r, z })
}

/// Extreme map with `Z = √(1 − R*R) P √(1 − R*R)`.
pub fn qf_extreme(r: ComplexMatrix, p: &ComplexMatrix) -> Result<QFMap> {
    check_contraction(&r)?;
    check_modes(r.nrows(), ensure_square(p)?)?;
    let deviation = max_abs_diff(&(p * p), p).max(hermiticity_deviation(p));
    if deviation > QF_TOL {
        return Err(Error::Projector { deviation });
    }
    let root = hermitian_map(&hermitian_part(&defect(&r)), |x| x.max(0.0).sqrt())?;
    let z = &root * hermitian_part(p) * &root;
    qf_validate(r, hermitian_part(&z))
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Increasing `k`-subsets of `0..n` in lexicographic order.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn permutations(k: usize) -> Vec<(Vec<usize>, f64)> {
    fn rec(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<(Vec<usize>, f64)>) {
        let k = used.len();
        if cur.len() == k {
            let mut inversions = 0;
            for i in 0..k {
                for j in i + 1..k {
                    if cur[i] > cur[j] {
                        inversions += 1;
                    }
                }
            }
            out.push((cur.clone(), if inversions % 2 == 0 { 1.0 } else { -1.0 }));
            return;
        }
        for i in 0..k {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; k], &mut out);
    out
}

/// Isometry `ℂ^{C(n,k)} → (ℂ^n)^{⊗k}` onto the antisymmetric subspace.
fn antisymmetric_basis(n: usize, k: usize) -> ComplexMatrix {
    let subs = subsets(n, k);
    let perms = permutations(k);
    let norm = 1.0 / (perms.len() as f64).sqrt();
    let mut v = ComplexMatrix::zeros(n.pow(k as u32), subs.len());
    for (col, s) in subs.iter().enumerate() {
        for (p, sign) in &perms {
            let idx = p.iter().fold(0, |acc, &i| acc * n + s[i]);
            v[(idx, col)] += c(sign * norm);
        }
    }
    v
}

/// `A^{⊗k}` restricted to the antisymmetric subspace, in the basis of ordered subsets.
fn antisymmetric_power(a: &ComplexMatrix, k: usize) -> ComplexMatrix {
    let n = a.nrows();
    if k == 0 {
        return identity(1);
    }
    let mut big = a.clone();
    for _ in 1..k {
        big = big.kronecker(a);
    }
    let v = antisymmetric_basis(n, k);
    v.adjoint() * big * v
}

fn direct_sum(blocks: &[ComplexMatrix]) -> ComplexMatrix {
    let dim: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = ComplexMatrix::zeros(dim, dim);
    let mut off = 0;
    for b in blocks {
        out.view_mut((off, off), (b.nrows(), b.nrows()))
            .copy_from(b);
        off += b.nrows();
    }
    out
}

/// Density matrix of the quasi-free state on Fock space `⊕_k Λ^k ℂ^N`, `N ≤ 4`.
///
/// With `Q = U diag(q) U†` this is `⊕_k Λ^k(U) D_k Λ^k(U)†`, where `D_k` is diagonal
/// with entries `Π_{i∈S} q_i Π_{i∉S} (1 − q_i)` over `k`-subsets `S`. Sectors are
/// ordered by particle number, each in the basis of increasing mode subsets.
pub fn fock_density(q: &QFSymbol) -> Result<DensityMatrix> {
    let n = q.modes();
    if n > MAX_FOCK_MODES {
        return Err(Error::ModeLimit {
            modes: n,
            max: MAX_FOCK_MODES,
        });
    }
    let (spec, u) = eig_hermitian(&q.q, HERMIT_TOL)?;
    let occ: Vec<f64> = spec.values().iter().map(|x| x.clamp(0.0, 1.0)).collect();
    let sectors: Vec<ComplexMatrix> = (0..=n)
        .map(|k| {
            let weights = subsets(n, k).into_iter().map(|s| {
                (0..n)
                    .map(|i| if s.contains(&i) { occ[i] } else { 1.0 - occ[i] })
                    .product::<f64>()
            });
            let d = ComplexMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
                binomial(n, k),
                weights.map(c),
            ));
            let w = antisymmetric_power(&u, k);
            &w * d * w.adjoint()
        })
        .collect();
    DensityMatrix::with_tolerance(hermitian_part(&direct_sum(&sectors)), CLAMP_TOL)
}

/// Spectrum `{½(1 ± λ_j)}` of the Jamiołkowski symbol of a bistochastic map.
pub fn qf_bistochastic_jam_spectrum(r: &ComplexMatrix) -> Vec<f64> {
    let mut out: Vec<f64> = singular_values(r)
        .values()
        .iter()
        .flat_map(|&l| [0.5 * (1.0 + l), 0.5 * (1.0 - l)])
        .collect();
    out.sort_by(|a, b| a.total_cmp(b));
    out
}

/// `V diag(d) V†`.
pub(crate) fn from_spectrum(v: &ComplexMatrix, d: &[f64]) -> ComplexMatrix {
    let n = v.nrows();
    let mut scaled = v.clone();
    for (j, &x) in d.iter().enumerate() {
        for i in 0..n {
            scaled[(i, j)] *= x;
        }
    }
    hermitian_part(&(scaled * v.adjoint()))
}

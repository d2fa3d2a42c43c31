//! Randomized verification suites.
//!
//! Sample `k` of a suite draws everything from the stream `(seed, k)`. With `D`
//! dimensions and `K` samples per dimension, `k` runs over `0..D·K` and sample `k`
//! uses dimension `dims[k / K]`.

use std::time::Instant;

use dynsub::channels::{
    coherent_information, entropy_exchange, lindblad_bounds, purified_exchange_entropy, sigma_hat,
    Channel,
};
use dynsub::classical::{
    entropy_uniform, entropy_weighted, product_bounds, slomczynski_bounds, strong_subadd_slack,
    symmetric_bound,
};
use dynsub::matcore::{
    eigvals_hermitian, hermiticity_deviation, identity, max_abs_diff, partial_trace,
    von_neumann_entropy, ComplexMatrix, DensityMatrix, Side, C64, HERMIT_TOL,
};
use dynsub::quasifree::{
    fock_density, qf_apply, qf_bistochastic_entropy, qf_bistochastic_jam_spectrum, qf_compose,
    qf_extreme, qf_extreme_entropy, qf_jam_symbol, qf_map_entropy, qf_odot_symbol,
    qf_state_entropy, QFMap,
};
use dynsub::randgen::{
    ginibre, random_bistochastic_channel, random_bistochastic_matrix, random_channel,
    random_contraction, random_density, random_prob_vector, random_projector, random_qf_map,
    random_qf_symbol, random_stochastic, BistochasticMethod, RngStream,
};
use dynsub::statecomp::{
    idempotent_extension, not_square_witness, odot_raw, odot_state, BipartiteOperator,
};
use rand::Rng;
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;

use crate::report::{aggregate, Check, SampleOutcome, SuiteReport};

type SampleFn = fn(usize, &mut ChaCha20Rng, usize, f64) -> dynsub::Result<Vec<Check>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    DynsubBistochastic,
    StrongDynsub,
    DynsubGeneral,
    Lindblad,
    DataProcessing,
    Classical,
    Quasifree,
    StatecompAlgebra,
    Powers,
}

pub const ALL: [Suite; 9] = [
    Suite::DynsubBistochastic,
    Suite::StrongDynsub,
    Suite::DynsubGeneral,
    Suite::Lindblad,
    Suite::DataProcessing,
    Suite::Classical,
    Suite::Quasifree,
    Suite::StatecompAlgebra,
    Suite::Powers,
];

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::DynsubBistochastic => "dynsub_bistochastic",
            Suite::StrongDynsub => "strong_dynsub",
            Suite::DynsubGeneral => "dynsub_general",
            Suite::Lindblad => "lindblad",
            Suite::DataProcessing => "data_processing",
            Suite::Classical => "classical",
            Suite::Quasifree => "quasifree",
            Suite::StatecompAlgebra => "statecomp_algebra",
            Suite::Powers => "powers",
        }
    }

    pub fn from_name(name: &str) -> Option<Suite> {
        ALL.into_iter().find(|s| s.name() == name)
    }

    /// Dimensions (mode numbers for the quasi-free suite) used without `--dim`.
    pub fn default_dims(self) -> Vec<usize> {
        match self {
            Suite::Classical => (2..=6).collect(),
            Suite::Quasifree => vec![4, 64],
            _ => vec![2, 3],
        }
    }

    pub fn default_samples(self) -> usize {
        match self {
            Suite::DynsubBistochastic
            | Suite::DynsubGeneral
            | Suite::Classical
            | Suite::Quasifree => 1000,
            Suite::Powers => 100,
            _ => 500,
        }
    }

    /// Inequality slack tolerance used without `--tol`.
    pub fn default_tol(self) -> f64 {
        match self {
            Suite::Classical => 1e-10,
            _ => 1e-8,
        }
    }

    fn sample_fn(self) -> SampleFn {
        match self {
            Suite::DynsubBistochastic => sample_dynsub_bistochastic,
            Suite::StrongDynsub => sample_strong_dynsub,
            Suite::DynsubGeneral => sample_dynsub_general,
            Suite::Lindblad => sample_lindblad,
            Suite::DataProcessing => sample_data_processing,
            Suite::Classical => sample_classical,
            Suite::Quasifree => sample_quasifree,
            Suite::StatecompAlgebra => sample_statecomp,
            Suite::Powers => sample_powers,
        }
    }
}

/// Resolved parameters of one suite run.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub dims: Vec<usize>,
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
}

impl SuiteConfig {
    pub fn defaults(suite: Suite, seed: u64) -> Self {
        SuiteConfig {
            dims: suite.default_dims(),
            samples: suite.default_samples(),
            seed,
            tol: suite.default_tol(),
        }
    }

    pub fn total(&self) -> usize {
        self.dims.len() * self.samples
    }

    pub fn dim_of(&self, index: u64) -> usize {
        self.dims[index as usize / self.samples]
    }
}

/// Evaluates one sample from its stream `(seed, index)`.
pub fn run_sample(suite: Suite, cfg: &SuiteConfig, index: u64) -> SampleOutcome {
    let dim = cfg.dim_of(index);
    let local = index as usize % cfg.samples;
    let mut rng = RngStream::new(cfg.seed, index).rng();
    let result = (suite.sample_fn())(dim, &mut rng, local, cfg.tol).map_err(|e| e.to_string());
    SampleOutcome { index, dim, result }
}

/// Runs every sample (in parallel on the current rayon pool), aggregates, and replays
/// the worst case.
pub fn run_suite(suite: Suite, cfg: &SuiteConfig, timings: bool) -> SuiteReport {
    let start = Instant::now();
    let outcomes: Vec<SampleOutcome> = (0..cfg.total() as u64)
        .into_par_iter()
        .map(|k| run_sample(suite, cfg, k))
        .collect();
    let mut report = aggregate(
        suite.name(),
        &cfg.dims,
        cfg.samples,
        cfg.seed,
        cfg.tol,
        &outcomes,
    );
    report.replay_reproduced = replay_matches(suite, cfg, &report);
    report.pass &= report.replay_reproduced;
    if timings {
        report.wall_time = Some(start.elapsed().as_secs_f64());
    }
    report
}

/// Re-evaluates the worst sample alone and compares its worst check bit for bit.
pub fn replay_matches(suite: Suite, cfg: &SuiteConfig, report: &SuiteReport) -> bool {
    if cfg.total() == 0 || report.worst_check == "none" {
        return true;
    }
    let again = run_sample(suite, cfg, report.worst_case_index);
    match again.result {
        Ok(checks) => checks
            .iter()
            .filter(|c| c.tag == report.worst_check)
            .any(|c| c.slack.to_bits() == report.worst_violation.to_bits()),
        Err(_) => false,
    }
}

fn bistochastic(n: usize, rng: &mut ChaCha20Rng) -> dynsub::Result<Channel> {
    random_bistochastic_channel(n, rng, BistochasticMethod::Sinkhorn)
}

fn sorted_padded(v: &[f64], len: usize) -> Vec<f64> {
    let mut v = v.to_vec();
    v.resize(len, 0.0);
    v.sort_by(|a, b| a.total_cmp(b));
    v
}

fn max_spectrum_diff(a: &[f64], b: &[f64]) -> f64 {
    let len = a.len().max(b.len());
    sorted_padded(a, len)
        .iter()
        .zip(sorted_padded(b, len))
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn marginal_deviation(s: &DensityMatrix, side: Side) -> dynsub::Result<f64> {
    let n = (s.dim() as f64).sqrt().round() as usize;
    let mixed = identity(n) * C64::new(1.0 / n as f64, 0.0);
    Ok(max_abs_diff(&partial_trace(s.as_matrix(), side)?, &mixed))
}

fn sample_dynsub_bistochastic(
    n: usize,
    rng: &mut ChaCha20Rng,
    _: usize,
    tol: f64,
) -> dynsub::Result<Vec<Check>> {
    let c1 = bistochastic(n, rng)?;
    let c2 = random_channel(n, rng);
    let c2b = bistochastic(n, rng)?;
    let s1 = c1.map_entropy()?;
    let s2 = c2.map_entropy()?;
    let s21 = Channel::compose(&c2, &c1)?.map_entropy()?;

    let s2b = c2b.map_entropy()?;
    let s21b = Channel::compose(&c2b, &c1)?.map_entropy()?;
    let s12b = Channel::compose(&c1, &c2b)?.map_entropy()?;

    let (j1, j2) = (c1.jam_state()?, c2b.jam_state()?);
    let o21 = von_neumann_entropy(&odot_state(&j2, &j1)?);
    let o12 = von_neumann_entropy(&odot_state(&j1, &j2)?);
    let (e1, e2) = (von_neumann_entropy(&j1), von_neumann_entropy(&j2));
    Ok(vec![
        Check::ineq("subadd.upper", s1 + s2 - s21, tol),
        Check::ineq("subadd.upper_bistochastic", s1 + s2b - s21b, tol),
        Check::ineq("subadd.max_lower", s21b.min(s12b) - s1.max(s2b), tol),
        Check::ineq("subadd.state_lower", o21.min(o12) - e1.max(e2), tol),
        Check::ineq("subadd.state_upper", e1 + e2 - o21.max(o12), tol),
    ])
}

fn sample_strong_dynsub(
    n: usize,
    rng: &mut ChaCha20Rng,
    _: usize,
    tol: f64,
) -> dynsub::Result<Vec<Check>> {
    let c1 = bistochastic(n, rng)?;
    let c2 = bistochastic(n, rng)?;
    let c3 = bistochastic(n, rng)?;
    let c32 = Channel::compose(&c3, &c2)?;
    let c21 = Channel::compose(&c2, &c1)?;
    let c321 = Channel::compose(&c32, &c1)?;
    let slack = c32.map_entropy()? + c21.map_entropy()? - c321.map_entropy()? - c2.map_entropy()?;

    let (j1, j2, j3) = (c1.jam_state()?, c2.jam_state()?, c3.jam_state()?);
    let j32 = odot_state(&j3, &j2)?;
    let j21 = odot_state(&j2, &j1)?;
    let j321 = odot_state(&j32, &j1)?;
    let state_slack = von_neumann_entropy(&j32) + von_neumann_entropy(&j21)
        - von_neumann_entropy(&j321)
        - von_neumann_entropy(&j2);
    Ok(vec![
        Check::ineq("strong.channel", slack, tol),
        Check::ineq("strong.state", state_slack, tol),
    ])
}

fn sample_dynsub_general(
    n: usize,
    rng: &mut ChaCha20Rng,
    _: usize,
    tol: f64,
) -> dynsub::Result<Vec<Check>> {
    let star = DensityMatrix::maximally_mixed(n);
    let c1 = random_channel(n, rng);
    let c2 = random_channel(n, rng);
    let c3 = random_channel(n, rng);
    let c21 = Channel::compose(&c2, &c1)?;
    let (s1, s2, s21) = (c1.map_entropy()?, c2.map_entropy()?, c21.map_entropy()?);
    let r1 = c1.apply_state(&star)?;
    let delta1 = von_neumann_entropy(&c2.apply_state(&r1)?) - von_neumann_entropy(&r1);
    let ex2 = entropy_exchange(&c2, &r1)?;
    let delta2 = ex2 - s2;

    let c32 = Channel::compose(&c3, &c2)?;
    let c321 = Channel::compose(&c32, &c1)?;
    let exchange_ssa = entropy_exchange(&c21, &star)? + entropy_exchange(&c32, &r1)?
        - entropy_exchange(&c321, &star)?
        - ex2;

    let b1 = bistochastic(n, rng)?;
    let b2 = bistochastic(n, rng)?;
    let rb = b1.apply_state(&star)?;
    let d1b = von_neumann_entropy(&b2.apply_state(&rb)?) - von_neumann_entropy(&rb);
    let d2b = entropy_exchange(&b2, &rb)? - b2.map_entropy()?;
    Ok(vec![
        Check::ineq("general.lower", s21 - s1 - delta1, tol),
        Check::ineq("general.upper", s1 + s2 + delta2 - s21, tol),
        Check::ineq("exchange.strong_subadditivity", exchange_ssa, tol),
        Check::eq("general.delta_bistochastic", d1b.abs().max(d2b.abs()), 1e-9),
    ])
}

fn sample_lindblad(
    n: usize,
    rng: &mut ChaCha20Rng,
    _: usize,
    tol: f64,
) -> dynsub::Result<Vec<Check>> {
    let ch = random_channel(n, rng);
    let rho = random_density(n, rng);
    let b = lindblad_bounds(&ch, &rho)?;
    let purified = purified_exchange_entropy(&ch, &rho)?;
    let star = sigma_hat(&ch, &DensityMatrix::maximally_mixed(n))?;
    let spec_diff = max_spectrum_diff(star.spectrum().values(), ch.jam_spectrum()?.values());
    Ok(vec![
        Check::ineq("lindblad.lower", b.lower_slack(), tol),
        Check::ineq("lindblad.upper", b.upper_slack(), tol),
        Check::eq("exchange.purification", b.exchange - purified, 1e-9),
        Check::eq("exchange.sigma_star_spectrum", spec_diff, 1e-9),
    ])
}

fn sample_data_processing(
    n: usize,
    rng: &mut ChaCha20Rng,
    _: usize,
    tol: f64,
) -> dynsub::Result<Vec<Check>> {
    let c1 = random_channel(n, rng);
    let c2 = random_channel(n, rng);
    let rho = random_density(n, rng);
    let i1 = coherent_information(&c1, &rho)?;
    let i21 = coherent_information(&Channel::compose(&c2, &c1)?, &rho)?;
    Ok(vec![Check::ineq("data_processing", i1 - i21, tol)])
}

fn sample_classical(
    n: usize,
    rng: &mut ChaCha20Rng,
    _: usize,
    tol: f64,
) -> dynsub::Result<Vec<Check>> {
    let t1 = random_stochastic(n, rng);
    let t2 = random_stochastic(n, rng);
    let pb = product_bounds(&t2, &t1)?;

    let b1 = random_bistochastic_matrix(n, rng)?;
    let b2 = random_bistochastic_matrix(n, rng)?;
    let b3 = random_bistochastic_matrix(n, rng)?;
    let sym = symmetric_bound(&b1, &b2)?;

    let p = random_prob_vector(n, rng);
    let sl = slomczynski_bounds(&t1, &p)?;

    let diag = Channel::from_stochastic(&t1);
    let sphist = diag.map_entropy()? - entropy_uniform(&t1) - (n as f64).ln();
    let rho = DensityMatrix::new(ComplexMatrix::from_diagonal(
        &nalgebra::DVector::from_iterator(n, p.probs().iter().map(|&x| C64::new(x, 0.0))),
    ))?;
    let ssigma = entropy_exchange(&diag, &rho)? - entropy_weighted(&t1, &p)? - p.entropy();
    Ok(vec![
        Check::ineq("classical.product_lower", pb.lower_slack(), tol),
        Check::ineq("classical.product_upper", pb.upper_slack(), tol),
        Check::ineq("classical.symmetric_upper", sym.upper_slack(), tol),
        Check::ineq("classical.symmetric_lower", sym.slack(), tol),
        Check::ineq(
            "classical.strong_subadditivity",
            strong_subadd_slack(&b1, &b2, &b3)?,
            tol,
        ),
        Check::ineq("slomczynski.lower", sl.actual - sl.lower, tol),
        Check::ineq("slomczynski.upper", sl.upper - sl.actual, tol),
        Check::eq("classical.embedding", sphist, 1e-9),
        Check::eq("classical.exchange_entropy", ssigma, 1e-9),
    ])
}

/// Above this many modes the symbol oracles run on every `QF_ORACLE_STRIDE`-th sample only.
pub const QF_ORACLE_FULL_MODES: usize = 8;
pub const QF_ORACLE_STRIDE: usize = 10;

fn quasifree_oracles(n: usize, rng: &mut ChaCha20Rng, m1: &QFMap) -> dynsub::Result<Vec<Check>> {
    let jam_ev = qf_jam_symbol(m1).occupations();
    let jam_diff = max_spectrum_diff(&jam_ev, &qf_bistochastic_jam_spectrum(m1.r()));

    let later = random_qf_map(n, rng, false);
    let earlier = random_qf_map(n, rng, false);
    let q = random_qf_symbol(n, rng);
    let composed = qf_compose(&later, &earlier)?;
    let oracle = max_abs_diff(
        qf_apply(&composed, &q)?.as_matrix(),
        qf_apply(&later, &qf_apply(&earlier, &q)?)?.as_matrix(),
    );
    let odot = max_abs_diff(
        qf_odot_symbol(&qf_jam_symbol(&later), &qf_jam_symbol(&earlier))?.as_matrix(),
        qf_jam_symbol(&composed).as_matrix(),
    );

    let r = random_contraction(n, rng);
    let rank = rng.random_range(0..=n);
    let p = random_projector(n, rank, rng);
    let extreme = qf_extreme(r.clone(), &p)?;
    let extreme_diff = qf_map_entropy(&extreme) - qf_extreme_entropy(&r, &p)?;
    Ok(vec![
        Check::eq("qf.jam_spectrum", jam_diff, 1e-10),
        Check::eq("qf.compose_oracle", oracle, 1e-12),
        Check::eq("qf.odot_symbol", odot, 1e-12),
        Check::eq("qf.extreme_closed_form", extreme_diff, 1e-10),
    ])
}

fn sample_quasifree(
    n: usize,
    rng: &mut ChaCha20Rng,
    local: usize,
    tol: f64,
) -> dynsub::Result<Vec<Check>> {
    let m1 = random_qf_map(n, rng, true);
    let m2 = random_qf_map(n, rng, true);
    let s1 = qf_map_entropy(&m1);
    let s2 = qf_map_entropy(&m2);
    let s21 = qf_map_entropy(&qf_compose(&m2, &m1)?);
    let closed = qf_bistochastic_entropy(m1.r());
    let adjoint = qf_bistochastic_entropy(&m1.r().adjoint());
    let mut checks = vec![
        Check::ineq("qf.subadditivity", s1 + s2 - s21, tol),
        Check::ineq("qf.max_lower", s21 - s1.max(s2), tol),
        Check::eq("qf.closed_form", s1 - closed, 1e-10),
        Check::eq("qf.adjoint_symmetry", s1 - adjoint, 1e-10),
    ];
    if n <= QF_ORACLE_FULL_MODES || local.is_multiple_of(QF_ORACLE_STRIDE) {
        checks.extend(quasifree_oracles(n, rng, &m1)?);
    }
    if local < 400 {
        let modes = local % 4 + 1;
        let sym = random_qf_symbol(modes, rng);
        let rho = fock_density(&sym)?;
        checks.push(Check::eq(
            "qf.fock_entropy",
            von_neumann_entropy(&rho) - qf_state_entropy(&sym),
            1e-8,
        ));
    }
    if local == 0 {
        let j = qf_jam_symbol(&QFMap::identity(n));
        let half = identity(n) * C64::new(0.5, 0.0);
        let tl = j.as_matrix().view((0, 0), (n, n)).into_owned();
        let br = j.as_matrix().view((n, n), (n, n)).into_owned();
        checks.push(Check::eq(
            "qf.max_entangled_projector",
            j.projector_deviation(),
            1e-12,
        ));
        checks.push(Check::eq(
            "qf.max_entangled_marginals",
            max_abs_diff(&tl, &half).max(max_abs_diff(&br, &half)),
            1e-12,
        ));
    }
    Ok(checks)
}

fn op(m: ComplexMatrix) -> dynsub::Result<BipartiteOperator> {
    BipartiteOperator::new(m)
}

fn sample_statecomp(
    n: usize,
    rng: &mut ChaCha20Rng,
    local: usize,
    _tol: f64,
) -> dynsub::Result<Vec<Check>> {
    let d = n * n;
    let x = op(ginibre(d, rng))?;
    let y = op(ginibre(d, rng))?;
    let z = op(ginibre(d, rng))?;
    let assoc = max_abs_diff(
        odot_raw(&odot_raw(&x, &y)?, &z)?.as_matrix(),
        odot_raw(&x, &odot_raw(&y, &z)?)?.as_matrix(),
    );

    let herm = |g: ComplexMatrix| (&g + g.adjoint()) * C64::new(0.5, 0.0);
    let hx = op(herm(ginibre(d, rng)))?;
    let hy = op(herm(ginibre(d, rng)))?;
    let herm_dev = hermiticity_deviation(odot_raw(&hx, &hy)?.as_matrix());

    let psd = |g: ComplexMatrix| &g * g.adjoint();
    let px = op(psd(ginibre(d, rng)))?;
    let py = op(psd(ginibre(d, rng)))?;
    let min_ev = eigvals_hermitian(odot_raw(&px, &py)?.as_matrix(), HERMIT_TOL)?.min();

    let e = BipartiteOperator::neutral(n);
    let neutral = max_abs_diff(odot_raw(&x, &e)?.as_matrix(), x.as_matrix())
        .max(max_abs_diff(odot_raw(&e, &x)?.as_matrix(), x.as_matrix()));

    let rho0 = random_density(n, rng);
    let sigma = DensityMatrix::new(idempotent_extension(&rho0).into_matrix())?;
    let idem = max_abs_diff(odot_state(&sigma, &sigma)?.as_matrix(), sigma.as_matrix());

    let c1 = random_channel(n, rng);
    let c2 = random_channel(n, rng);
    let s = odot_state(&c2.jam_state()?, &c1.jam_state()?)?;
    let di = marginal_deviation(&s, Side::A)?;
    let tr = (dynsub::matcore::trace(s.as_matrix()).re - 1.0).abs();

    let b1 = bistochastic(n, rng)?;
    let b2 = bistochastic(n, rng)?;
    let sb = odot_state(&b2.jam_state()?, &b1.jam_state()?)?;
    let dii = marginal_deviation(&sb, Side::A)?.max(marginal_deviation(&sb, Side::B)?);

    let mut checks = vec![
        Check::eq("odot.associativity", assoc, 1e-10),
        Check::eq("odot.hermiticity", herm_dev, 1e-12),
        Check::ineq("odot.positivity", min_ev, 1e-9),
        Check::eq("odot.neutral", neutral, 1e-12),
        Check::eq("odot.idempotent", idem, 1e-10),
        Check::eq("odot.di_closure", di, 1e-8),
        Check::eq("odot.trace", tr, 1e-9),
        Check::eq("odot.dii_closure", dii, 1e-8),
    ];
    if local == 0 {
        let w = not_square_witness(&random_density(d, rng))?;
        let xy = odot_raw(&x, &y)?;
        let yx = odot_raw(&y, &x)?;
        checks.push(Check::ineq("odot.not_square_witness", w - 1e-6, 0.0));
        checks.push(Check::ineq(
            "odot.non_abelian_witness",
            max_abs_diff(xy.as_matrix(), yx.as_matrix()) - 1e-6,
            0.0,
        ));
    }
    Ok(checks)
}

fn sample_powers(
    n: usize,
    rng: &mut ChaCha20Rng,
    _: usize,
    tol: f64,
) -> dynsub::Result<Vec<Check>> {
    let ch = bistochastic(n, rng)?;
    let s = ch.map_entropy()?;
    let mut power = ch.clone();
    let mut worst = f64::INFINITY;
    for k in 1..=5 {
        if k > 1 {
            power = Channel::compose(&ch, &power)?;
        }
        worst = worst.min(k as f64 * s - power.map_entropy()?);
    }
    Ok(vec![Check::ineq("powers", worst, tol)])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(suite: Suite) -> SuiteConfig {
        SuiteConfig {
            samples: 6,
            ..SuiteConfig::defaults(suite, 3)
        }
    }

    #[test]
    fn names_round_trip() {
        for s in ALL {
            assert_eq!(Suite::from_name(s.name()), Some(s));
        }
        assert_eq!(Suite::from_name("nope"), None);
    }

    #[test]
    fn every_suite_passes_a_small_run() {
        for s in ALL {
            let mut cfg = small(s);
            if s == Suite::Quasifree {
                cfg.dims = vec![4, 8];
            }
            let r = run_suite(s, &cfg, false);
            assert!(r.pass, "{}: {:?}", s.name(), r);
            assert!(r.replay_reproduced);
            assert!(r.wall_time.is_none());
        }
    }

    #[test]
    fn samples_are_independent_of_evaluation_order() {
        let cfg = small(Suite::DynsubGeneral);
        let forward: Vec<_> = (0..cfg.total() as u64)
            .map(|k| run_sample(Suite::DynsubGeneral, &cfg, k))
            .collect();
        let backward: Vec<_> = (0..cfg.total() as u64)
            .rev()
            .map(|k| run_sample(Suite::DynsubGeneral, &cfg, k))
            .collect();
        assert_eq!(forward, backward.into_iter().rev().collect::<Vec<_>>());
    }

    #[test]
    fn index_maps_to_dimension_blocks() {
        let cfg = SuiteConfig {
            dims: vec![2, 3],
            samples: 10,
            seed: 0,
            tol: 1e-8,
        };
        assert_eq!(cfg.dim_of(9), 2);
        assert_eq!(cfg.dim_of(10), 3);
        assert_eq!(cfg.total(), 20);
    }
}

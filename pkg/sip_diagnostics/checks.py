"""
Empirical checks of the limit-theorem consequences of wide-sense regeneration.

Each check returns a CheckResult: statistic against threshold, with status
'inconclusive' when the data are too thin to decide. Thresholds are
z-score based so the checks stay meaningful across fixture scales.
"""

from functools import partial
from typing import Callable, Literal, Optional

import numpy as np
from joblib import Parallel, delayed
from scipy import special

from chain_core.oracles import oracle_mean, oracle_mu, oracle_sigma_f, simulate_chain
from chain_core.split import run_split_chain
from chain_core.tours import StateFunction, apply_f, extract_tours, regeneration_counts
from estimators.linalg import relative_frobenius_error
from estimators.regenerative import regen_mean, regen_mu_hat, regen_sigma_f_hat
from models.chain import ChainSpec, SplitChainTrace, TourSequence
from models.diagnostics import CheckResult, DiagnosticsReport
from utils.logger import logger
from utils.rng import make_rng, spawn_seeds

ChainFactory = Callable[[int, np.random.Generator], object]

LEMMA_MIN_TOURS = 100
CLT_MIN_REPLICATIONS = 200
XI_MIN_REGENERATIONS = 1_000
ONE_DEP_MIN_TOURS = 1_000


def _inconclusive(name: str, reason: str, **meta) -> CheckResult:
    logger.warning(f"Check {name} inconclusive: {reason}")
    return CheckResult.inconclusive(name, reason, **meta)


def check_lemma_a1(tours: TourSequence, long_run_mean, tol: Optional[float] = None) -> CheckResult:
    """
    Compare the regenerative mean f~_R with the plain ergodic mean.

    Both estimate E_pi f = eta / mu. The default tolerance is four combined
    standard errors, 4 sqrt(2) sqrt(tr Sigma^_f / T_R).

    Args:
        tours: Tours from the chain (R >= 100)
        long_run_mean: Ergodic mean fhat_n of the same chain
        tol: Explicit threshold on the Euclidean distance

    Returns:
        CheckResult named 'lemma_a1'
    """
    name = 'lemma_a1'
    if len(tours) < LEMMA_MIN_TOURS:
        return _inconclusive(name, f"{len(tours)} tours < {LEMMA_MIN_TOURS}", tours=len(tours))
    f_tilde = regen_mean(tours)
    long_run_mean = np.atleast_1d(np.asarray(long_run_mean, dtype=float))
    statistic = float(np.linalg.norm(f_tilde - long_run_mean))
    if tol is None:
        sigma = regen_sigma_f_hat(tours).matrix
        se = np.sqrt(max(float(np.trace(sigma)), 0.0) / tours.total_length)
        tol = 4.0 * np.sqrt(2.0) * se
    return CheckResult.compare(name, statistic, tol, regen_mean=f_tilde.tolist(),
                               long_run_mean=long_run_mean.tolist(), tours=len(tours))


def _clt_replicate(factory: ChainFactory, n: int, seed: np.random.SeedSequence,
                   target: np.ndarray, form: str) -> np.ndarray:
    rng = make_rng(seed)
    if form == 'regenerative':
        tours = factory(n, rng)
        centered = tours.z - tours.tau[:, None] * target[None, :]
        return centered.sum(axis=0) / np.sqrt(max(len(tours), 1))
    samples = np.asarray(factory(n, rng), dtype=float)
    if samples.ndim == 1:
        samples = samples[:, None]
    return np.sqrt(n) * (samples.mean(axis=0) - target)


def check_clt_covariance(
    chain_factory: ChainFactory,
    replications: int,
    n: int,
    oracle,
    target_mean,
    seed: int,
    workers: int = 1,
    tol: float = 0.15,
    form: Literal['ergodic', 'regenerative'] = 'ergodic',
) -> CheckResult:
    """
    Compare the across-replication covariance of the CLT statistic with an oracle.

    The ergodic form uses sqrt(n) (fhat_n - E_pi f) with oracle Sigma_f; the
    regenerative form uses R^{-1/2} sum (Z_j - tau_j E_pi f) with oracle
    Sigma_Z, and the factory must return a TourSequence. Replication seeds
    are spawned from `seed`; results are aggregated in spawn order, so the
    outcome does not depend on `workers`.

    Args:
        chain_factory: Callable (n, rng) -> samples (n, d) or TourSequence
        replications: Number of independent chains (>= 200)
        n: Length of every chain
        oracle: d x d reference covariance
        target_mean: E_pi f
        seed: Root seed
        workers: joblib worker count
        tol: Threshold on the relative Frobenius error
        form: 'ergodic' or 'regenerative'

    Returns:
        CheckResult named 'clt_covariance'
    """
    name = 'clt_covariance'
    if replications < CLT_MIN_REPLICATIONS:
        return _inconclusive(name, f"{replications} replications < {CLT_MIN_REPLICATIONS}")
    target = np.atleast_1d(np.asarray(target_mean, dtype=float))
    oracle = np.atleast_2d(np.asarray(oracle, dtype=float))

    seeds = spawn_seeds(seed, replications)
    stats = Parallel(n_jobs=workers)(
        delayed(_clt_replicate)(chain_factory, n, child, target, form) for child in seeds
    )
    stats = np.vstack(stats)
    empirical = stats.T @ stats / replications
    statistic = relative_frobenius_error(empirical, oracle)
    return CheckResult.compare(name, statistic, tol, empirical=empirical.tolist(),
                               oracle=oracle.tolist(), replications=replications, n=n, form=form)


def check_xi_growth(trace: SplitChainTrace, mu_oracle: float, n0: int = 16) -> CheckResult:
    """
    Check that |xi(n) - n / mu| / n decreases along the dyadic grid n0 2^k.

    The statistic is the least-squares slope of log deviation against log n
    and must not be positive. Deviations that are all zero pass with
    statistic 0.

    Returns:
        CheckResult named 'xi_growth'
    """
    name = 'xi_growth'
    counts = regeneration_counts(trace)
    total = int(counts[-1]) if counts.size else 0
    if total < XI_MIN_REGENERATIONS:
        return _inconclusive(name, f"{total} regenerations < {XI_MIN_REGENERATIONS}",
                             regenerations=total)

    grid = []
    n = n0
    while n <= trace.n:
        grid.append(n)
        n *= 2
    grid = np.array(grid, dtype=np.int64)
    xi = counts[grid - 1]
    deviation = np.abs(xi - grid / mu_oracle) / grid
    meta = {'grid': grid.tolist(), 'deviation': deviation.tolist(),
            'final_deviation': float(deviation[-1]), 'mu': mu_oracle}

    positive = deviation > 0
    if not positive.any():
        return CheckResult.compare(name, 0.0, 0.0, **meta)
    if positive.sum() < 3:
        return _inconclusive(name, 'fewer than 3 grid points with a non-zero deviation', **meta)
    slope = np.polyfit(np.log(grid[positive]), np.log(deviation[positive]), 1)[0]
    return CheckResult.compare(name, float(slope), 0.0, **meta)


def _autocorrelations(x: np.ndarray, max_lag: int) -> Optional[np.ndarray]:
    """Sample autocorrelations r_1..r_max_lag; None for a constant series."""
    xo = x - x.mean()
    denom = float(xo @ xo)
    if denom == 0.0:
        return None
    return np.array([float(xo[:-j] @ xo[j:]) / denom for j in range(1, max_lag + 1)])


def check_one_dependence(tours: TourSequence, max_lag: int = 10, sigmas: float = 3.0,
                         multiplier: Optional[float] = None, bartlett: bool = True) -> CheckResult:
    """
    Check that tour sums and lengths are uncorrelated beyond lag 1.

    For each coordinate of Z and for tau, |r_j| at lags 2..max_lag must stay
    inside Bartlett's band for a 1-dependent series, k sqrt((1 + 2 r_1^2) / R).
    By default the multiplier k puts the family of tests at the level of a
    single `sigmas`-sigma test (Bonferroni). The statistic is the largest
    ratio |r_j| / band and the threshold is 1.

    Args:
        tours: Tour sequence
        max_lag: Largest lag tested
        sigmas: Family-wise level, in standard deviations, for the default k
        multiplier: Fixed k instead of the Bonferroni one
        bartlett: Widen the band by sqrt(1 + 2 r_1^2); with False and
            multiplier=3 the band is the plain 3 / sqrt(R)

    Returns:
        CheckResult named 'one_dependence'
    """
    name = 'one_dependence'
    r_count = len(tours)
    if r_count < ONE_DEP_MIN_TOURS:
        return _inconclusive(name, f"{r_count} tours < {ONE_DEP_MIN_TOURS}", tours=r_count)

    series = {f'z_{j + 1}': tours.z[:, j] for j in range(tours.dim)}
    series['tau'] = tours.tau.astype(float)
    if multiplier is None:
        tests = len(series) * (max_lag - 1)
        alpha = 2.0 * special.ndtr(-sigmas)
        k = float(-special.ndtri(alpha / (2.0 * tests)))
    else:
        k = float(multiplier)

    worst = 0.0
    per_series = {}
    for label, x in series.items():
        r = _autocorrelations(x, max_lag)
        if r is None:
            per_series[label] = None
            continue
        inflation = 1.0 + 2.0 * r[0] ** 2 if bartlett else 1.0
        band = k * np.sqrt(inflation / r_count)
        ratio = float(np.abs(r[1:]).max() / band)
        worst = max(worst, ratio)
        per_series[label] = {'acf': r.tolist(), 'band': float(band)}
    return CheckResult.compare(name, worst, 1.0, multiplier=k, tours=r_count, series=per_series)


def split_tours(spec: ChainSpec, n: int, rng: np.random.Generator,
                f: Optional[StateFunction] = None) -> TourSequence:
    """Tours of a fresh split chain; a chain factory for the regenerative CLT form."""
    seed = int(rng.integers(0, 2 ** 63))
    return extract_tours(run_split_chain(spec, n, seed), f)


def check_l_invariance(spec: ChainSpec, n: int, seed: int, tol: float = 0.1,
                       lags=(1, 2)) -> CheckResult:
    """
    Sigma^_f from splits with different lags must agree.

    A larger lag changes Sigma_Z and mu but not their ratio. The statistic
    is the relative Frobenius distance between the two estimates.

    Returns:
        CheckResult named 'l_invariance'
    """
    name = 'l_invariance'
    if spec.kind != 'two-state':
        return _inconclusive(name, f"lag comparison needs a two-state chain, got {spec.kind}")
    children = spawn_seeds(seed, len(lags))
    estimates = []
    for lag, child in zip(lags, children):
        tours = extract_tours(run_split_chain(spec, n, int(child.generate_state(1)[0]), lag=lag))
        if len(tours) < 2:
            return _inconclusive(name, f"lag {lag} produced {len(tours)} tours", lag=lag)
        estimates.append(regen_sigma_f_hat(tours).matrix)
    statistic = relative_frobenius_error(estimates[1], estimates[0])
    return CheckResult.compare(name, statistic, tol, lags=list(lags),
                               estimates=[e.tolist() for e in estimates])


def run_suite(
    seed: int,
    trace: Optional[SplitChainTrace] = None,
    tours: Optional[TourSequence] = None,
    spec: Optional[ChainSpec] = None,
    f: Optional[StateFunction] = None,
    replications: int = 500,
    clt_n: int = 100_000,
    workers: int = 1,
    l_invariance: bool = True,
    l_invariance_n: int = 1_000_000,
) -> DiagnosticsReport:
    """
    Run every check the inputs allow and aggregate them.

    Args:
        seed: Root seed for the simulation-based checks
        trace: Split-chain trace (enables the lemma_a1 and xi(n) checks)
        tours: Tours; extracted from `trace` when omitted
        spec: Fixture chain (enables the CLT and lag-invariance checks and
            supplies the oracle mu)
        f: Function of the states, identity by default
        replications: CLT replications
        clt_n: Chain length of each CLT replication
        workers: joblib workers for the CLT replications
        l_invariance: Include the lag-invariance check for two-state fixtures
        l_invariance_n: Chain length for the lag-invariance check

    Returns:
        DiagnosticsReport
    """
    report = DiagnosticsReport()
    if tours is None and trace is not None:
        tours = extract_tours(trace, f)

    if tours is not None:
        if trace is not None:
            report.add(check_lemma_a1(tours, apply_f(trace.states, f).mean(axis=0)))
        elif spec is not None and f is None:
            report.add(check_lemma_a1(tours, oracle_mean(spec)))
        report.add(check_one_dependence(tours))

    if trace is not None:
        if spec is not None:
            mu = oracle_mu(spec)
        elif tours is not None and len(tours) > 0:
            mu = regen_mu_hat(tours)
        else:
            mu = float('inf')
        report.add(check_xi_growth(trace, mu))

    if spec is not None and spec.kind in ('two-state', 'ar1'):
        clt_seed, lag_seed = (int(s.generate_state(1)[0]) for s in spawn_seeds(seed, 2))
        report.add(check_clt_covariance(
            partial(simulate_chain, spec), replications, clt_n,
            oracle_sigma_f(spec), oracle_mean(spec), clt_seed, workers=workers,
        ))
        if l_invariance:
            report.add(check_l_invariance(spec, l_invariance_n, lag_seed))

    failed = [c.name for c in report.checks if c.passed is False]
    if failed:
        logger.error(f"Diagnostics failed: {', '.join(failed)}")
    else:
        logger.info(f"Diagnostics passed ({len(report.checks)} checks, "
                    f"{len(report.inconclusive)} inconclusive)")
    return report

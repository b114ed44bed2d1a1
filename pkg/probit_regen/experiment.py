"""
Regeneration experiment on the probit Gibbs sampler.

Random scan: the chain is cut into two-step windows starting at odd steps
i = 1, 3, 5, ...; each window gets eta_i and a Bernoulli bell at step i,
and tours are assembled with lag l = 2. Deterministic scan: eta is
evaluated at every sweep and the bell lands on the previous sweep (l = 1).
The chain does not start from Q, so the block before the first bell is
reported as leading and not as a tour.
"""

from typing import Callable, List, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict

from chain_core.tours import extract_tours
from models.chain import SplitChainTrace, TourSequence
from models.probit import MinorizationConfig, ProbitModel, RegenProbRecord
from probit_regen.minorization import regen_prob, regen_prob_deterministic
from probit_regen.sampler import gibbs_step_deterministic, gibbs_step_random_scan, initial_state
from utils.errors import InputError
from utils.logger import logger
from utils.rng import spawn_rngs

Scan = Literal['random', 'deterministic']


class RegenRun(BaseModel):
    """Tours over f(beta), regeneration records and the trace they came from."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    tours: TourSequence
    records: List[RegenProbRecord]
    trace: SplitChainTrace
    steps: int
    clamped: int
    scan: Scan

    @property
    def regenerations(self) -> int:
        return int(self.trace.bells.sum())

    @property
    def regeneration_fraction(self) -> float:
        return self.regenerations / self.steps


def _clamped_eta(raw: float, step: int) -> float:
    logger.warning(f"Regeneration probability {raw:.17g} clamped to 1 (step {step})")
    return 1.0


def run_regen_experiment(
    model: ProbitModel,
    config: MinorizationConfig,
    steps: int,
    seed: int,
    scan: Scan = 'random',
    f: Optional[Callable[[np.ndarray], np.ndarray]] = None,
) -> RegenRun:
    """
    Run the sampler, mark regenerations and assemble tours.

    Args:
        model: Probit model (p_scan used by the random scan)
        config: Distinguished point and small set
        steps: Number of Gibbs steps (>= 1000)
        seed: Seed; the chain and the bell draws use separate child streams
        scan: 'random' (two-step windows, l = 2) or 'deterministic' (l = 1)
        f: Vectorized function of the (steps, p) beta draws; identity by default

    Returns:
        RegenRun

    Raises:
        InputError: If steps < 1000 or scan is unknown
        NumericalError: If a density is not finite
    """
    if steps < 1000:
        raise InputError(f"regeneration experiment needs at least 1000 steps, got {steps}")
    if scan not in ('random', 'deterministic'):
        raise InputError(f"unknown scan '{scan}'")

    chain_rng, bell_rng = spawn_rngs(seed, 2)
    state = initial_state(model, config.z_star)
    betas = np.empty((steps, model.n_coef))
    bells = np.zeros(steps, dtype=np.int8)
    records: List[RegenProbRecord] = []
    clamped = 0

    if scan == 'random':
        lag = 2
        window = [state]
        for j in range(1, steps + 1):
            state = gibbs_step_random_scan(state, model, chain_rng)
            betas[j - 1] = state.beta
            window.append(state)
            i = j - 2
            if i >= 1 and i % 2 == 1:
                eta = regen_prob(window[-3], state, state.last_updates, config, model,
                                 step=i, clamp=False)
                if eta > 1.0:
                    clamped += 1
                    eta = _clamped_eta(eta, i)
                u = float(bell_rng.random())
                bell = int(u < eta)
                bells[i - 1] = bell
                records.append(RegenProbRecord(step=i, eta=eta, uniform=u, bell=bell))
            window = window[-2:]
    else:
        lag = 1
        for k in range(1, steps + 1):
            state = gibbs_step_deterministic(state, model, chain_rng)
            betas[k - 1] = state.beta
            if k >= 2:
                # the beta-then-z kernel starts from the z drawn in this sweep
                eta = regen_prob_deterministic(state.z, state.beta, config, model,
                                               step=k - 1, clamp=False)
                if eta > 1.0:
                    clamped += 1
                    eta = _clamped_eta(eta, k - 1)
                u = float(bell_rng.random())
                bell = int(u < eta)
                bells[k - 2] = bell
                records.append(RegenProbRecord(step=k - 1, eta=eta, uniform=u, bell=bell))

    from_q = np.zeros(steps, dtype=bool)
    targets = np.flatnonzero(bells) + lag
    from_q[targets[targets < steps]] = True
    trace = SplitChainTrace(states=betas, bells=bells, from_q=from_q, lag=lag, seed=seed)
    tours = extract_tours(trace, f, drop_leading=True)

    run = RegenRun(tours=tours, records=records, trace=trace, steps=steps,
                   clamped=clamped, scan=scan)
    logger.info(
        f"Regeneration experiment ({scan} scan): {steps} steps, "
        f"{run.regenerations} regenerations (fraction {run.regeneration_fraction:.3g}), "
        f"{len(tours)} tours, {clamped} clamped"
    )
    return run

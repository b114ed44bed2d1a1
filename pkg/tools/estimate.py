"""
`estimate` command: batch-means and regenerative covariance estimates from
trace/tours files, with the batch-schedule and rate checks.
"""

from typing import Any, Dict, List, Optional

from chain_core.tours import extract_tours
from config.manager import ExperimentManager
from estimators.batch_means import (
    batch_means,
    check_batch_consistency,
    check_batch_schedule,
    standard_errors,
)
from estimators.linalg import psd_project
from estimators.rates import sip_rate_exponent
from estimators.regenerative import regen_mean, regen_mu_hat, regen_sigma_f_hat
from models.estimate import BatchSchedule, CovEstimate
from models.experiment import EstimateConfig
from utils.errors import CheckFailedError
from utils.io import read_tours_csv, read_trace_csv, write_json, write_matrix_csv
from utils.logger import format_matrix, logger


def _estimate_entry(estimate: CovEstimate) -> Dict[str, Any]:
    entry = estimate.to_dict()
    entry['standard_errors'] = standard_errors(estimate).tolist()
    return entry


def cmd_estimate(config: EstimateConfig) -> Dict[str, Any]:
    """
    Estimate Sigma_f and write estimates.json (plus matrix CSVs on request).

    Batch means need a trace; the regenerative estimator uses the tours
    file, or tours cut from the trace when only a trace is given. The
    estimates file is written before any check failure is raised so that a
    failed run still leaves its evidence behind.

    Args:
        config: Validated estimate configuration

    Returns:
        The estimates payload (also written to estimates.json)

    Raises:
        ParseError: If an input file is malformed
        CheckFailedError: If the batch schedule or the rate condition fails
    """
    try:
        manager = ExperimentManager.from_config('estimate', config)
        trace = read_trace_csv(config.trace, lag=config.lag, seed=config.seed) if config.trace else None
        tours = read_tours_csv(config.tours) if config.tours else extract_tours(trace)

        schedule = BatchSchedule(nu=config.nu)
        schedule_check = check_batch_schedule(schedule)
        failures: List[str] = list(schedule_check.reasons) if not schedule_check.passed else []

        payload: Dict[str, Any] = {
            'command': 'estimate',
            'seed': config.seed,
            'schedule': schedule.describe(),
            'schedule_check': schedule_check.model_dump(),
            'batch_means': None,
            'regenerative': None,
        }

        matrices: Dict[str, Any] = {}
        if trace is not None and schedule_check.passed:
            estimate = batch_means(trace.states, schedule)
            if config.psd:
                estimate = estimate.model_copy(update={'matrix': psd_project(estimate.matrix)})
            payload['batch_means'] = _estimate_entry(estimate)
            matrices['batch_means'] = estimate.matrix
            logger.info(f"Batch-means estimate: {format_matrix(estimate.matrix)}")

        if len(tours) >= 2:
            estimate = regen_sigma_f_hat(tours, centering=config.centering, psd=config.psd)
            entry = _estimate_entry(estimate)
            entry['mean'] = regen_mean(tours).tolist()
            entry['mu_hat'] = regen_mu_hat(tours)
            payload['regenerative'] = entry
            matrices['regenerative'] = estimate.matrix
            logger.info(f"Regenerative estimate: {format_matrix(estimate.matrix)} ({len(tours)} tours)")
        else:
            logger.warning(f"Only {len(tours)} complete tour(s); regenerative estimate skipped")

        rates: Optional[Dict[str, Any]] = None
        if config.delta is not None:
            report = sip_rate_exponent(config.delta, config.p, geometric=config.geometric)
            consistent, reasons = check_batch_consistency(schedule, report)
            rates = {**report.model_dump(), 'consistent': consistent, 'reasons': reasons or []}
            if not consistent:
                failures.extend(reasons)
        payload['rates'] = rates

        write_json(payload, manager.output_path('estimates.json'))
        if config.matrix_csv:
            for name, matrix in matrices.items():
                write_matrix_csv(matrix, manager.output_path(f'{name}.csv'))
        manager.write_manifest()

        if failures:
            raise CheckFailedError('; '.join(failures))
        return payload
    except Exception as e:
        logger.error(f"Failed to estimate: {e}")
        raise

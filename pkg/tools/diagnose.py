"""
`diagnose` command: run the strong-invariance diagnostics on a fixture
chain or on trace/tours files.
"""

from typing import Any, Dict

from chain_core.split import run_split_chain
from config.manager import ExperimentManager
from models.experiment import DiagnoseConfig
from sip_diagnostics.checks import run_suite
from utils.errors import CheckFailedError
from utils.io import read_tours_csv, read_trace_csv, write_json
from utils.logger import logger
from utils.rng import spawn_seeds


def cmd_diagnose(config: DiagnoseConfig) -> Dict[str, Any]:
    """
    Run the diagnostics suite and write diagnostics.json.

    File mode (tours and/or trace given) runs the checks the files allow;
    fixture mode simulates the configured chain and adds the oracle-based
    checks. Inconclusive checks are reported but never fail the run.

    Args:
        config: Validated diagnose configuration

    Returns:
        The report payload (also written to diagnostics.json)

    Raises:
        ParseError: If an input file is malformed
        CheckFailedError: If any conclusive check fails
    """
    try:
        manager = ExperimentManager.from_config('diagnose', config)

        if config.uses_files:
            trace = read_trace_csv(config.trace, lag=config.lag, seed=config.seed) if config.trace else None
            tours = read_tours_csv(config.tours) if config.tours else None
            logger.info('Diagnosing files: ' + ', '.join(p for p in (config.trace, config.tours) if p))
            report = run_suite(config.seed, trace=trace, tours=tours, workers=config.workers)
        else:
            spec = config.to_chain_spec()
            chain_seed, suite_seed = (int(s.generate_state(1)[0]) for s in spawn_seeds(config.seed, 2))
            trace = run_split_chain(spec, config.n, chain_seed)
            report = run_suite(
                suite_seed,
                trace=trace,
                spec=spec,
                replications=config.replications,
                clt_n=config.clt_n,
                workers=config.workers,
                l_invariance=config.l_invariance,
                l_invariance_n=config.n,
            )

        payload = {
            'command': 'diagnose',
            'seed': config.seed,
            'mode': 'files' if config.uses_files else 'fixture',
            'passed': report.passed,
            'inconclusive': report.inconclusive,
            **report.to_dict(),
        }
        write_json(payload, manager.output_path('diagnostics.json'))
        manager.write_manifest()

        if not report.passed:
            failed = [c.name for c in report.checks if c.passed is False]
            raise CheckFailedError(f"diagnostic checks failed: {', '.join(failed)}")
        return payload
    except Exception as e:
        logger.error(f"Failed to diagnose: {e}")
        raise

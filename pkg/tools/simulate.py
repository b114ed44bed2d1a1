"""
`simulate` command: run a fixture split chain and write its trace and tours.
"""

from typing import Any, Dict

from chain_core.split import run_split_chain
from chain_core.tours import extract_tours
from config.manager import ExperimentManager
from models.experiment import SimulateConfig
from utils.io import write_tours_csv, write_trace_csv
from utils.logger import logger


def cmd_simulate(config: SimulateConfig) -> Dict[str, Any]:
    """
    Simulate a fixture chain and write trace.csv, tours.csv and manifest.json.

    Args:
        config: Validated simulate configuration

    Returns:
        Summary with the artifact paths, bell count and tour count

    Raises:
        InputError: If the fixture parameters are inconsistent
        OSError: If the output directory is not writable
    """
    try:
        manager = ExperimentManager.from_config('simulate', config)
        spec = config.to_chain_spec()

        trace = run_split_chain(spec, config.n, config.seed)
        tours = extract_tours(trace)

        trace_path = write_trace_csv(trace, manager.output_path('trace.csv'))
        tours_path = write_tours_csv(tours, manager.output_path('tours.csv'))
        manifest_path = manager.write_manifest()

        return {
            'command': 'simulate',
            'fixture': config.fixture,
            'n': trace.n,
            'lag': trace.lag,
            'regenerations': int(trace.bells.sum()),
            'tours': len(tours),
            'residual_len': tours.residual_len,
            'files': {
                'trace': str(trace_path),
                'tours': str(tours_path),
                'manifest': str(manifest_path),
            },
        }
    except Exception as e:
        logger.error(f"Failed to simulate: {e}")
        raise

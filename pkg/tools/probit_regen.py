"""
`probit-regen` command: pilot-tune a small set for the probit Gibbs
sampler, run it while marking regenerations and summarize the outcome.
"""

from typing import Any, Dict

from config.manager import ExperimentManager
from estimators.regenerative import regen_mean, regen_mu_hat, regen_sigma_f_hat
from models.experiment import ProbitRegenConfig
from probit_regen.data import load_probit_model
from probit_regen.experiment import run_regen_experiment
from probit_regen.minorization import pilot_tune
from utils.io import write_json, write_records_csv, write_tours_csv
from utils.logger import logger
from utils.rng import make_rng, spawn_seeds


def cmd_probit_regen(config: ProbitRegenConfig) -> Dict[str, Any]:
    """
    Run pilot_tune then run_regen_experiment; write tours.csv, records.csv
    and summary.json.

    The pilot and the experiment use independent child seeds of
    config.seed, so the summary is a function of the seed alone.

    Args:
        config: Validated probit-regen configuration

    Returns:
        The summary payload (also written to summary.json)

    Raises:
        ParseError: If the design file is malformed
        RankDeficiencyError: If the design is not of full column rank
        TuningError: If the pilot run is degenerate
    """
    try:
        manager = ExperimentManager.from_config('probit-regen', config)
        model = load_probit_model(config.design, p_scan=config.p_scan)

        pilot_seed, run_seed = (int(s.generate_state(1)[0]) for s in spawn_seeds(config.seed, 2))
        minorization = pilot_tune(model, config.pilot_iters, config.quantile, make_rng(pilot_seed))
        run = run_regen_experiment(model, minorization, config.steps, run_seed, scan=config.scan)

        summary: Dict[str, Any] = {
            'command': 'probit-regen',
            'seed': config.seed,
            'design': config.design or 'bundled',
            'n_obs': model.n_obs,
            'n_coef': model.n_coef,
            'scan': run.scan,
            'p_scan': model.p_scan,
            'steps': run.steps,
            'lag': run.trace.lag,
            'box': minorization.box.tolist(),
            'regenerations': run.regenerations,
            'regeneration_fraction': run.regeneration_fraction,
            'tours': len(run.tours),
            'leading_len': run.tours.leading_len,
            'residual_len': run.tours.residual_len,
            'clamped': run.clamped,
            'estimates': None,
        }
        if len(run.tours) >= 2:
            estimate = regen_sigma_f_hat(run.tours)
            summary['estimates'] = {
                'mean': regen_mean(run.tours).tolist(),
                'mu_hat': regen_mu_hat(run.tours),
                'sigma_f': estimate.to_dict(),
            }
        else:
            logger.warning(
                f"{len(run.tours)} complete tour(s) after the first regeneration; "
                f"no regenerative estimates"
            )

        write_tours_csv(run.tours, manager.output_path('tours.csv'))
        write_records_csv(run.records, manager.output_path('records.csv'))
        write_json(summary, manager.output_path('summary.json'))
        manager.write_manifest()
        return summary
    except Exception as e:
        logger.error(f"Failed to run the probit regeneration experiment: {e}")
        raise

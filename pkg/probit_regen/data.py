"""
Probit datasets: the bundled synthetic design, CSV designs and simulated ones.
"""

from pathlib import Path
from typing import Optional, Sequence, Tuple, Union

import numpy as np
from scipy import special

from models.probit import ProbitModel
from utils.io import read_design_csv
from utils.logger import logger

BUNDLED_DATASET = Path(__file__).resolve().parent.parent / 'data' / 'probit_synthetic.csv'


def load_probit_model(path: Optional[Union[str, Path]] = None, p_scan: float = 0.5) -> ProbitModel:
    """
    Load a design CSV (x_1..x_p, y) into a ProbitModel.

    Args:
        path: CSV file; the bundled synthetic dataset when None
        p_scan: Random-scan probability of the beta update

    Raises:
        ParseError: If the file is malformed
        RankDeficiencyError: If the design is not of full column rank
    """
    path = BUNDLED_DATASET if path is None else Path(path)
    X, y = read_design_csv(path)
    model = ProbitModel.from_design(X, y, p_scan=p_scan)
    logger.info(f"Probit design loaded: {path} (n={model.n_obs}, p={model.n_coef})")
    return model


def make_synthetic_probit(
    n: int,
    beta: Sequence[float],
    rng: np.random.Generator,
    p_scan: float = 0.5,
) -> Tuple[ProbitModel, np.ndarray]:
    """
    Simulate a probit dataset with an intercept and p - 1 standard-normal covariates.

    Returns:
        Tuple of (model, true beta)
    """
    beta = np.asarray(beta, dtype=float)
    X = np.column_stack([np.ones(n), rng.standard_normal((n, beta.size - 1))])
    y = (rng.random(n) < special.ndtr(X @ beta)).astype(np.int8)
    return ProbitModel.from_design(X, y, p_scan=p_scan), beta

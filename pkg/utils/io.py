"""
CSV and JSON artifacts: traces, tours, regeneration records, designs.

CSV columns:
    trace   t, delta, x_1..x_d
    tours   k, tau, z_1..z_d (residual and leading lengths in tours.meta.json)
    records i, eta, bell
    design  x_1..x_p, y

Floats are written with 17 significant digits so reruns are byte-identical
and reading back is lossless. Malformed files raise ParseError naming the
file line (the header is line 1).
"""

import json
import re
from pathlib import Path
from typing import Any, List, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from pydantic import ValidationError

from models.chain import SplitChainTrace, TourSequence
from models.probit import RegenProbRecord
from utils.errors import ParseError
from utils.logger import logger

PathLike = Union[str, Path]
FLOAT_FORMAT = '%.17g'


def _prefixed(prefix: str, d: int) -> List[str]:
    return [f'{prefix}_{j + 1}' for j in range(d)]


def _read_csv(path: PathLike) -> pd.DataFrame:
    """Read a CSV file, turning pandas failures into ParseError."""
    path = str(path)
    try:
        return pd.read_csv(path)
    except FileNotFoundError:
        raise
    except pd.errors.EmptyDataError:
        raise ParseError(path, 1, 'file is empty')
    except pd.errors.ParserError as e:
        match = re.search(r"line (\d+)", str(e))
        raise ParseError(path, int(match.group(1)) if match else None, str(e).strip())
    except UnicodeDecodeError as e:
        raise ParseError(path, None, f'not UTF-8 text: {e}')


def _numeric_columns(df: pd.DataFrame, columns: Sequence[str], path: str) -> np.ndarray:
    """Coerce the named columns to float; the first bad cell names its line."""
    missing = [c for c in columns if c not in df.columns]
    if missing:
        raise ParseError(path, 1, f"missing column(s): {', '.join(missing)}")
    values = df[list(columns)].apply(pd.to_numeric, errors='coerce')
    bad = values.isna().any(axis=1) | ~np.isfinite(values.to_numpy(dtype=float)).all(axis=1)
    if bad.any():
        row = int(np.flatnonzero(bad.to_numpy())[0])
        raw = df.iloc[row][list(columns)].to_dict()
        raise ParseError(path, row + 2, f'non-numeric or non-finite value in {raw}')
    return values.to_numpy(dtype=float)


def _count_prefixed(df: pd.DataFrame, prefix: str, path: str) -> int:
    d = 0
    while f'{prefix}_{d + 1}' in df.columns:
        d += 1
    if d == 0:
        raise ParseError(path, 1, f"no '{prefix}_1' column")
    return d


def _require_integers(values: np.ndarray, name: str, path: str, minimum: int) -> np.ndarray:
    bad = (values != np.round(values)) | (values < minimum)
    if bad.any():
        row = int(np.flatnonzero(bad)[0])
        raise ParseError(path, row + 2, f'{name} = {values[row]!r} is not an integer >= {minimum}')
    return values.astype(np.int64)


def write_trace_csv(trace: SplitChainTrace, path: PathLike) -> Path:
    """Write a split-chain trace as t, delta, x_1..x_d."""
    path = Path(path)
    df = pd.DataFrame(trace.states, columns=_prefixed('x', trace.dim))
    df.insert(0, 'delta', trace.bells.astype(int))
    df.insert(0, 't', np.arange(1, trace.n + 1))
    df.to_csv(path, index=False, float_format=FLOAT_FORMAT)
    logger.info(f"Trace written: {path} ({trace.n} states, {int(trace.bells.sum())} bells)")
    return path


def read_trace_csv(path: PathLike, lag: int = 1, seed: int = 0) -> SplitChainTrace:
    """
    Read a trace CSV back into a SplitChainTrace.

    The provenance flags are rebuilt from the bells: X_1 and every state
    `lag` steps after a bell are marked as Q-draws.

    Args:
        path: CSV file with columns t, delta, x_1..x_d
        lag: Minorization lag the trace was generated with
        seed: Seed to record on the trace

    Returns:
        SplitChainTrace

    Raises:
        ParseError: If the file is malformed
    """
    path_str = str(path)
    df = _read_csv(path)
    d = _count_prefixed(df, 'x', path_str)
    states = _numeric_columns(df, _prefixed('x', d), path_str)
    bells = _numeric_columns(df, ['delta'], path_str)[:, 0]
    not_binary = ~np.isin(bells, (0.0, 1.0))
    if not_binary.any():
        row = int(np.flatnonzero(not_binary)[0])
        raise ParseError(path_str, row + 2, f'delta = {bells[row]!r} is not 0/1')

    n = states.shape[0]
    from_q = np.zeros(n, dtype=bool)
    if n:
        from_q[0] = True
    idx = np.flatnonzero(bells) + lag
    from_q[idx[idx < n]] = True
    return SplitChainTrace(states=states, bells=bells, from_q=from_q, lag=lag, seed=seed)


def tours_meta_path(path: PathLike) -> Path:
    """Sidecar JSON holding the tour bookkeeping: tours.csv -> tours.meta.json."""
    return Path(path).with_suffix('.meta.json')


def write_tours_csv(tours: TourSequence, path: PathLike) -> Path:
    """Write tours as k, tau, z_1..z_d, plus residual/leading lengths in the sidecar."""
    path = Path(path)
    df = pd.DataFrame(tours.z, columns=_prefixed('z', tours.dim))
    df.insert(0, 'tau', tours.tau)
    df.insert(0, 'k', np.arange(1, len(tours) + 1))
    df.to_csv(path, index=False, float_format=FLOAT_FORMAT)
    write_json({'residual_len': tours.residual_len, 'leading_len': tours.leading_len},
               tours_meta_path(path))
    logger.info(f"Tours written: {path} ({len(tours)} tours)")
    return path


def _read_tours_meta(path: PathLike) -> dict:
    """Bookkeeping from the sidecar; a tours file without one has none to restore."""
    meta_path = tours_meta_path(path)
    if not meta_path.exists():
        logger.debug(f"No tour bookkeeping next to {path}; residual and leading lengths are 0")
        return {}
    try:
        meta = json.loads(meta_path.read_text(encoding='utf-8'))
    except json.JSONDecodeError as e:
        raise ParseError(str(meta_path), e.lineno, e.msg)
    if not isinstance(meta, dict):
        raise ParseError(str(meta_path), 1, 'expected a JSON object')
    return {k: meta[k] for k in ('residual_len', 'leading_len') if k in meta}


def read_tours_csv(path: PathLike) -> TourSequence:
    """
    Read tours written by write_tours_csv, with the sidecar bookkeeping when present.

    Raises:
        ParseError: On missing columns, non-numeric cells, tau < 1 or a bad sidecar
    """
    path_str = str(path)
    df = _read_csv(path)
    d = _count_prefixed(df, 'z', path_str)
    z = _numeric_columns(df, _prefixed('z', d), path_str)
    tau = _require_integers(_numeric_columns(df, ['tau'], path_str)[:, 0], 'tau', path_str, 1)
    meta = _read_tours_meta(path)
    try:
        return TourSequence(z=z.reshape(-1, d), tau=tau, **meta)
    except ValidationError as e:
        raise ParseError(str(tours_meta_path(path)), None, f'invalid tour bookkeeping: {e}')


def write_records_csv(records: List[RegenProbRecord], path: PathLike) -> Path:
    """Write regeneration records as i, eta, bell."""
    path = Path(path)
    df = pd.DataFrame({
        'i': [r.step for r in records],
        'eta': [r.eta for r in records],
        'bell': [r.bell for r in records],
    })
    df.to_csv(path, index=False, float_format=FLOAT_FORMAT)
    logger.info(f"Records written: {path} ({len(records)} windows)")
    return path


def read_design_csv(path: PathLike) -> Tuple[np.ndarray, np.ndarray]:
    """
    Read a probit design: columns x_1..x_p and y.

    Returns:
        Tuple of (X, y) with X of shape (n, p)

    Raises:
        ParseError: If the file is malformed or y is not binary
    """
    path_str = str(path)
    df = _read_csv(path)
    p = _count_prefixed(df, 'x', path_str)
    X = _numeric_columns(df, _prefixed('x', p), path_str)
    y = _numeric_columns(df, ['y'], path_str)[:, 0]
    not_binary = ~np.isin(y, (0.0, 1.0))
    if not_binary.any():
        row = int(np.flatnonzero(not_binary)[0])
        raise ParseError(path_str, row + 2, f'y = {y[row]!r} is not 0/1')
    return X, y.astype(np.int8)


def write_matrix_csv(matrix: np.ndarray, path: PathLike) -> Path:
    """Write a square matrix as plain CSV, one row per line, no header."""
    path = Path(path)
    pd.DataFrame(np.atleast_2d(matrix)).to_csv(
        path, index=False, header=False, float_format=FLOAT_FORMAT
    )
    return path


def _json_default(obj: Any):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, Path):
        return str(obj)
    raise TypeError(f'Object of type {type(obj).__name__} is not JSON serializable')


def dumps_json(payload: Any) -> str:
    """Serialize to JSON, converting numpy scalars and arrays."""
    return json.dumps(payload, indent=2, default=_json_default)


def write_json(payload: Any, path: PathLike) -> Path:
    """Write a JSON artifact (UTF-8, trailing newline)."""
    path = Path(path)
    path.write_text(dumps_json(payload) + '\n', encoding='utf-8')
    logger.info(f"JSON written: {path}")
    return path

"""Writing scenario outputs: CSV tables, JSON summaries and the run sidecar.

Numbers are written with 9 significant digits so that a re-run with the same
config and seed reproduces every data file byte for byte. The only
wall-clock field is the timestamp in ``run_info.json``.
"""
from __future__ import annotations

import json
import logging
import math
from datetime import datetime
from pathlib import Path
from typing import Any, List, Union

import numpy as np
import pandas as pd
import pytz

from ._version import __version__
from .config import ExperimentConfig, config_hash
from .dispersion import SellmeierModel

logger = logging.getLogger(__name__)

FLOAT_FORMAT = '%.9g'
SIDECAR_NAME = 'run_info.json'

# column layout of every tabular output; spectra share one wavelength column,
# each intensity series in its own column
FREQ_SWEEP_HEADER = ['read_nm', 'output_center_nm', 'eta_fc', 'g2_analytic', 'g2_mc', 'g2_mc_err']
DELAY_SCAN_HEADER = ['delay_ps', 'counts', 'noise', 'fit']
SPECTRUM_HEADER = ['wavelength_nm', 'input', 'read_shifted', 'output', 'input_convolved', 'read_shifted_convolved',
                   'output_convolved']
HISTOGRAM_HEADER = ['bin_offset_ns', 'counts']
DIP_SCAN_HEADER = ['delay_fs', 'relative_rate', 'fit']


def round_significant(value: Any) -> Any:
    """Round every float in a JSON-like structure to 9 significant digits; NaN and inf become None."""
    if isinstance(value, dict):
        return {str(k): round_significant(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [round_significant(v) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if not math.isfinite(value):
            return None
        return float(f'{value:.9g}')
    return value


class ResultWriter:
    """
    Single writer for the files of one run.

    Every written path is tracked so a failed run can remove what it already
    wrote (``discard``).
    """

    def __init__(self, out_dir: Union[str, Path]):
        self.out_dir = Path(out_dir)
        self.out_dir.mkdir(parents=True, exist_ok=True)
        self.files: List[Path] = []

    def _path(self, name: str) -> Path:
        path = self.out_dir / name
        self.files.append(path)
        return path

    def save_to_csv(self, data: pd.DataFrame, name: str, columns: List[str] = None) -> Path:
        if columns is not None:
            missing = [c for c in columns if c not in data.columns]
            if missing:
                raise KeyError(f'{name}: missing columns {missing}')
            data = data[columns]
        path = self._path(f'{name}.csv')
        data.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator='\n')
        logger.debug('Wrote %s (%d rows)', path, len(data))
        return path

    def save_to_json(self, payload: dict, name: str) -> Path:
        path = self._path(f'{name}.json')
        path.write_text(json.dumps(round_significant(payload), indent=2, sort_keys=True) + '\n')
        logger.debug('Wrote %s', path)
        return path

    def save_figure(self, fig, name: str) -> Path:
        path = self._path(f'{name}.png')
        fig.savefig(path, dpi=120, bbox_inches='tight')
        logger.debug('Wrote %s', path)
        return path

    def save_sidecar(self, kind: str, seed: int, cfg: ExperimentConfig, model: SellmeierModel,
                     parameters: dict) -> Path:
        data_files = sorted(p.name for p in self.files)
        payload = {
            'kind': kind,
            'seed': seed,
            'config_hash': config_hash(cfg, model),
            'version': __version__,
            'timestamp_utc': datetime.now(pytz.utc).isoformat(),
            'parameters': parameters,
            'files': data_files,
        }
        return self.save_to_json(payload, Path(SIDECAR_NAME).stem)

    def discard(self) -> None:
        for path in self.files:
            try:
                path.unlink()
            except FileNotFoundError:
                pass
            else:
                logger.info('Removed partial output %s', path)
        self.files = []

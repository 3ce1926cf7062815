"""Two-beam electro-optic sampling of vacuum field correlations."""

import os
from pathlib import Path

_data = Path(__file__).resolve().parent / "data"
if "VACUUMCONE_DATA_DIR" not in os.environ and (_data / "znte_thz_index.csv").exists():
    os.environ["VACUUMCONE_DATA_DIR"] = str(_data)

from ._core import *  # noqa: E402,F401,F403
from ._core import __version__, VacuumconeError  # noqa: E402,F401

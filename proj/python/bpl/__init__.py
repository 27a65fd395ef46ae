"""Besov-Orlicz path norm toolkit: python bindings over the C++ core."""

import json as _json
import os as _os
import sys as _sys

try:
    from ._core import *  # noqa: F401,F403
    from ._core import _run_experiment_json
except ImportError:  # in-tree runs: the extension sits in the build directory
    _ext_dir = _os.environ.get("BPL_EXT_DIR")
    if _ext_dir is None:
        raise
    _sys.path.insert(0, _ext_dir)
    from _core import *  # noqa: F401,F403
    from _core import _run_experiment_json


def run_experiment(experiment, **overrides):
    """Run a verification experiment and return its report as a dict.

    Keyword overrides mirror the flat config keys of the CLI, e.g.
    run_experiment("axiom_gauss", replicas=2000, seed=7).
    """
    str_overrides = {k: str(v) for k, v in overrides.items()}
    return _json.loads(_run_experiment_json(experiment, str_overrides))

"""Simple current extensions with fixed-point resolution."""

import json

from . import _core
from ._core import FpresError, Theory, __version__

__all__ = ["FpresError", "Theory", "Extension", "load", "extend", "__version__"]


def load(spec, cache_dir=""):
    """Model from a file path or a '*'-joined spec such as "su2:4*ising"."""
    return _core.load(spec, cache_dir)


class Extension:
    """Extended theory with its resolved fixed-point bundles."""

    def __init__(self, raw):
        self._raw = raw

    @property
    def theory(self):
        return self._raw.theory

    @property
    def residual_orders(self):
        return list(self._raw.residual_orders)

    @property
    def report(self):
        return json.loads(self._raw.report_json)

    def bundles(self):
        """Residual class -> "fp-bundle v1" document."""
        return {cls: json.loads(doc) for cls, doc in self._raw.bundles_json().items()}


def extend(theory, currents, seed=0, tol=1e-8):
    """Extend by the group generated by the given currents (labels or ids)."""
    return Extension(_core.extend(theory, [str(c) for c in currents], seed, tol))


def currents(theory):
    return json.loads(theory.currents_json())


def conditions(theory, tol=1e-8):
    return json.loads(theory.conditions_json(tol))


def fusion(theory, tol=1e-6):
    return json.loads(theory.fusion_json(tol))


def modular_data(theory):
    return json.loads(theory.modular_data_json())


__all__ += ["currents", "conditions", "fusion", "modular_data"]

"""The bundled Asia chest-clinic example network."""

from __future__ import annotations

from functools import lru_cache
from importlib import resources

from ..model import BayesianNetwork
from .bif import parse_bif


@lru_cache(maxsize=1)
def builtin_asia() -> BayesianNetwork:
    """Eight-node chest-clinic network with the classic parameterization.

    Networks are immutable, so the cached instance is safe to share.
    """
    text = resources.files("xbn.assets").joinpath("asia.bif").read_text()
    return parse_bif(text)


def asia_bif_text() -> str:
    return resources.files("xbn.assets").joinpath("asia.bif").read_text()


def asia_json_text() -> str:
    return resources.files("xbn.assets").joinpath("asia.json").read_text()

"""Registry of the cusped blocks M1..M7, N3..N6 and W.

The registry ships as ``data/v1/registry.json``; the environment variable
``CHAINFILL_DATA`` points at an alternative data directory.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .exactalg import AbelianGroup
from .homology import PeripheralDatum, h1, h1_filled

DATA_VERSION = "v1"


def data_path(filename):
    """Locate a data file, preferring ``$CHAINFILL_DATA`` when it has one."""
    override = os.environ.get("CHAINFILL_DATA")
    if override:
        for cand in (os.path.join(override, filename),
                     os.path.join(override, DATA_VERSION, filename)):
            if os.path.exists(cand):
                return cand
    return str(resources.files("chainfill") / "data" / DATA_VERSION / filename)


@dataclass(frozen=True)
class FactoringRule:
    kind: str                      # "none", "slopes" or "slopes_or_adjacent_pair"
    slopes: tuple = ()             # Slope objects
    pair: tuple | None = None      # adjacent pair for M7


@dataclass(frozen=True)
class ChainFamily:
    name: str
    cusp_count: int
    linking: tuple
    volume: str | None             # display only
    isom_order: int | None
    isom_group: str | None
    factoring: FactoringRule
    fill_infinity_text: str
    fill_zero_text: str
    predecessor: tuple | None
    symmetry: dict

    @property
    def peripheral(self):
        return PeripheralDatum.from_linking([list(r) for r in self.linking])


@dataclass(frozen=True)
class Registry:
    families: dict
    identities: tuple
    version: int


def _load_family(name, d):
    from .notation import parse_slope

    f = d["factoring"]
    rule = FactoringRule(
        f["rule"],
        tuple(parse_slope(s) for s in f.get("slopes", [])),
        tuple(parse_slope(s) for s in f["pair"]) if f.get("pair") else None,
    )
    n = d["cusp_count"]
    L = d["linking"]
    if len(L) != n or any(len(r) != n for r in L):
        raise ValueError(f"{name}: linking matrix is not {n}x{n}")
    return ChainFamily(
        name=name, cusp_count=n, linking=tuple(tuple(r) for r in L),
        volume=d.get("volume"), isom_order=d.get("isom_order"),
        isom_group=d.get("isom_group"), factoring=rule,
        fill_infinity_text=d["fill_infinity"], fill_zero_text=d["fill_zero"],
        predecessor=tuple(d["predecessor"]) if d.get("predecessor") else None,
        symmetry=d.get("symmetry", {}),
    )


@lru_cache(maxsize=4)
def _load(path):
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    if raw.get("format_version") != 1:
        raise ValueError(f"unsupported registry format {raw.get('format_version')!r}")
    fams = {k: _load_family(k, v) for k, v in raw["families"].items()}
    ids = tuple(NamedIdentity(i["left"], i["right"], i.get("source", ""))
                for i in raw["identities"])
    return Registry(fams, ids, raw["format_version"])


class _RegistryProxy:
    """Module-level handle that always reads the active data directory."""

    def __getattr__(self, attr):
        return getattr(_load(data_path("registry.json")), attr)


REGISTRY = _RegistryProxy()


def family(name):
    try:
        return REGISTRY.families[name]
    except KeyError:
        raise KeyError(f"unknown family {name!r}") from None


def cusp_count(name):
    return family(name).cusp_count


def peripheral(name):
    return family(name).peripheral


# ----------------------------------------------------------------------------
# 0 and infinity fillings


def open_chain(components):
    """Complement of an open chain of ``components`` unknots, as notation."""
    if components < 1:
        raise ValueError("need at least one component")
    if components == 1:
        return "DxS1"
    if components == 2:
        return "AxS1"
    return " =[0,1;1,0]= ".join(["PxS1"] * (components - 2))


def _check_cusp(name, cusp):
    n = cusp_count(name)
    if not 0 <= cusp < n:
        raise ValueError(f"{name} has no cusp {cusp}")


def fill_infinity(name, cusp=0):
    """The manifold left after filling one cusp along infinity.

    Chain links are cyclically symmetric, so the result does not depend on
    the cusp.
    """
    from .notation import parse_expr

    _check_cusp(name, cusp)
    return parse_expr(family(name).fill_infinity_text)


def fill_zero(name, cusp=0):
    from .notation import parse_expr

    _check_cusp(name, cusp)
    return parse_expr(family(name).fill_zero_text)


def single_slope(name, cusp, slope):
    from .manifolds import FillingTuple

    entries = [None] * cusp_count(name)
    entries[cusp] = slope
    return FillingTuple(tuple(entries))


# ----------------------------------------------------------------------------
# identities


@dataclass(frozen=True)
class NamedIdentity:
    """``left = right``, each side in notation (``"N4(-3)"``, ``"M3"``, ...)."""

    left: str
    right: str
    source: str = ""


@dataclass(frozen=True)
class IdentityReport:
    identity: NamedIdentity
    left_h1: AbelianGroup
    right_h1: AbelianGroup

    @property
    def agree(self):
        return self.left_h1 == self.right_h1


def _side_h1(text):
    from .notation import parse_expr

    return h1(parse_expr(text))


def check_identity(identity):
    """Compare H1 of both sides; homeomorphism itself is not checked."""
    return IdentityReport(identity, _side_h1(identity.left), _side_h1(identity.right))


def identities():
    return list(REGISTRY.identities)


def volume_display(name):
    v = family(name).volume
    return "n/a" if v is None else v


__all__ = [
    "ChainFamily",
    "FactoringRule",
    "IdentityReport",
    "NamedIdentity",
    "REGISTRY",
    "check_identity",
    "cusp_count",
    "data_path",
    "family",
    "fill_infinity",
    "fill_zero",
    "h1_filled",
    "identities",
    "open_chain",
    "peripheral",
    "single_slope",
    "volume_display",
]

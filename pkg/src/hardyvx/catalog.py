"""Named exponent functions used by the command line and the test suite.

Each entry pairs an exponent family instance with the boundedness class
its audit is expected to report, plus a short description of why.
"""

from __future__ import annotations

from dataclasses import dataclass

from .exponent import (
    Constant,
    DyadicJump,
    ExponentFunction,
    LogLogPerturbed,
    LogPerturbed,
    PiecewiseConstant,
    PiecewiseLinear,
)

__all__ = ["CatalogEntry", "CATALOG", "catalog_exponent"]


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    exponent: ExponentFunction
    expected: str  # "bounded" | "divergent"
    description: str


def _dyadic_jump_default() -> DyadicJump:
    ks = range(1, 6)
    gammas = tuple(2.0 * 2.0 ** (-k / 2.0) for k in ks)
    scales = tuple(2.0 ** -(2 ** k) for k in ks)
    return DyadicJump(p0=2.0, gammas=gammas, scales=scales)


CATALOG: tuple[CatalogEntry, ...] = (
    CatalogEntry(
        "constant-2", Constant(2.0), "bounded",
        "constant exponent; the averaging operator is bounded with the "
        "classical constant p/(p-1) = 2"),
    CatalogEntry(
        "constant-3", Constant(3.0), "bounded",
        "constant exponent, constant p/(p-1) = 3/2"),
    CatalogEntry(
        "p-one", Constant(1.0), "divergent",
        "p = 1 end point: the averaging operator is unbounded on L^1"),
    CatalogEntry(
        "log-perturbed-a1", LogPerturbed(2.0, 1.0, 1.0, "+"), "bounded",
        "p(x) = 2 + 1/ln(1/x): log-Hoelder at the origin, so the "
        "decay-rate series stays bounded"),
    CatalogEntry(
        "log-perturbed-a05", LogPerturbed(2.0, 1.0, 0.5, "+"), "bounded",
        "p(x) = 2 + 1/sqrt(ln(1/x)): fails log-Hoelder yet the dyadic "
        "oscillation decays, so boundedness still holds"),
    CatalogEntry(
        "loglog-perturbed", LogLogPerturbed(2.0, 1.0), "bounded",
        "p(x) = 2 + ln ln(1/x)/ln(1/x): another bounded case beyond "
        "log-Hoelder"),
    CatalogEntry(
        "step-interior", PiecewiseConstant((0.5,), (2.0, 3.0)), "bounded",
        "a single interior jump away from the origin is harmless"),
    CatalogEntry(
        "piecewise-linear", PiecewiseLinear((0.2, 0.8), (2.0, 3.0)),
        "bounded",
        "constant near the origin, linear ramp away from it"),
    CatalogEntry(
        "dyadic-jump-default", _dyadic_jump_default(), "divergent",
        "upward jumps of size 2*2^(-k/2) at the doubly exponential scales "
        "2^(-2^k): the dyadic oscillation series diverges and all "
        "integral criteria blow up with it"),
    CatalogEntry(
        "nonincreasing-log", LogPerturbed(3.0, 1.0, 0.5, "-"), "bounded",
        "p(x) = 3 - 1/sqrt(ln(1/x)) clipped at 1: nonincreasing, hence "
        "bounded regardless of decay rate"),
)


def catalog_exponent(name: str) -> CatalogEntry:
    for entry in CATALOG:
        if entry.name == name:
            return entry
    raise KeyError(f"unknown catalog entry {name!r}; "
                   f"known: {', '.join(e.name for e in CATALOG)}")

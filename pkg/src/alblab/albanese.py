"""The degree-two Albanese map of the thrice-punctured line.

Points of the target are unipotent-group classes recorded by reduced
coordinates (alpha, beta, lambda); the map sends x to the class built
from the three regularized periods log(x), -log(1-x) and the
dilogarithm, all divided by the right powers of 2*pi*i.  Both the
direct coordinate form and the inverse-matrix form are provided, along
with the integer monodromy action, the extension into the boundary
chart, and the filtration bookkeeping that makes the two generator
actions morphisms of mixed Hodge structure.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .hodge import (ChartClass, boundary_chart_point, reduce_mod_integral)
from .integrals import (ConvergenceError, DEFAULT_CONFIG, QuadratureConfig, TWO_PI_I,
                        compose_signatures, regularized_loop_transport,
                        regularized_signature)
from .malcev import GroupWord
from .paths import DomainError

EXTENSION_DISK_RADIUS = 0.5


@dataclass(frozen=True)
class AlbanesePoint:
    """Reduced class coordinates plus the record of how they were reached."""

    alpha: complex
    beta: complex
    lam: complex
    reduction: tuple          # (a, b, c) of the integer matrix used to reduce
    loop_prefix: str = ""
    raw: tuple = ()           # unreduced coordinates, for continuation tests

    @property
    def coords(self) -> tuple:
        return (self.alpha, self.beta, self.lam)

    def distance(self, other: "AlbanesePoint") -> float:
        return max(abs(a - b) for a, b in zip(self.coords, other.coords))

    def to_json(self) -> dict:
        return {
            "alpha": [self.alpha.real, self.alpha.imag],
            "beta": [self.beta.real, self.beta.imag],
            "lambda": [self.lam.real, self.lam.imag],
            "reduction_matrix": [[1, self.reduction[1], self.reduction[2]],
                                 [0, 1, self.reduction[0]], [0, 0, 1]],
        }


@dataclass(frozen=True)
class LieMHSExample:
    """Weight and Hodge-type bookkeeping of the two-step free nilpotent Lie algebra."""

    basis: tuple = ("N0", "N1", "[N1,N0]")
    weights: tuple = (-2, -2, -4)
    types: tuple = ((-1, -1), (-1, -1), (-2, -2))


LIE_MHS = LieMHSExample()


def raw_coordinates(x, cfg: QuadratureConfig = DEFAULT_CONFIG,
                    loop_prefix: str = "", level: int = 2) -> tuple:
    """Unreduced (alpha, beta, lambda) of x along the chosen homotopy class."""
    s = regularized_signature(x, level, cfg, loop_prefix=loop_prefix)
    alpha = s.coefficient("0") / TWO_PI_I
    beta = s.coefficient("1") / TWO_PI_I
    lam = s.coefficient("10") / TWO_PI_I ** 2
    return alpha, beta, lam


def albanese_point(x, homotopy_class: str = "",
                   cfg: QuadratureConfig = DEFAULT_CONFIG) -> AlbanesePoint:
    """Class of x in reduced coordinates; the class is path independent."""
    raw = raw_coordinates(x, cfg, loop_prefix=homotopy_class)
    reduced, g = reduce_mod_integral(*raw)
    abc = (int(g[1][2]), int(g[0][1]), int(g[0][2]))
    return AlbanesePoint(*reduced, reduction=abc, loop_prefix=homotopy_class, raw=raw)


def albanese_point_alt(x, homotopy_class: str = "",
                       cfg: QuadratureConfig = DEFAULT_CONFIG) -> AlbanesePoint:
    """The inverse-matrix form of the map: the class of

        [[1, -alpha, lambda], [0, 1, -beta], [0, 0, 1]]^{-1}

    built from the same three periods, read back off in the (beta: (1,2),
    lambda: (1,3), alpha: (2,3)) coordinate convention and reduced."""
    alpha, beta, lam = raw_coordinates(x, cfg, loop_prefix=homotopy_class)
    mat = np.array([[1, -alpha, lam], [0, 1, -beta], [0, 0, 1]], dtype=complex)
    inv = np.linalg.inv(mat)
    raw_alt = (inv[1][2], inv[0][1], inv[0][2])
    reduced, g = reduce_mod_integral(*raw_alt)
    abc = (int(g[1][2]), int(g[0][1]), int(g[0][2]))
    return AlbanesePoint(*reduced, reduction=abc, loop_prefix=homotopy_class, raw=raw_alt)


def extended_albanese(x, cfg: QuadratureConfig = DEFAULT_CONFIG) -> tuple:
    """Chart coordinates (q, beta, lambda) of x in the boundary chart.

    Defined on the disk |x| < 1/2 around the puncture, with (0, 0, 0) at
    the puncture itself, where the image is the rank-1 nilpotent orbit.
    """
    x = complex(x)
    if x == 0:
        return (0j, 0j, 0j)
    if abs(x) >= EXTENSION_DISK_RADIUS:
        raise DomainError(f"extension chart needs |x| < {EXTENSION_DISK_RADIUS}")
    _, beta, lam = raw_coordinates(x, cfg)
    return (x, beta, lam)


def extended_albanese_class(x, cfg: QuadratureConfig = DEFAULT_CONFIG) -> ChartClass:
    """Image of x as a chart class (interior class, or the orbit at x = 0)."""
    q, beta, lam = extended_albanese(x, cfg)
    return boundary_chart_point(q, beta, lam)


def monodromy_action(word, cfg: QuadratureConfig = DEFAULT_CONFIG,
                     integer_tol: float = 1e-3) -> np.ndarray:
    """Integer matrix by which continuation along the loop word acts on the left."""
    if isinstance(word, GroupWord):
        word = " ".join(g if s == 1 else f"{g}^-1" for g, s in word.letters)
    t = regularized_loop_transport(word, 2, cfg)
    a = t.coefficient("0") / TWO_PI_I
    b = t.coefficient("1") / TWO_PI_I
    c = t.coefficient("10") / TWO_PI_I ** 2
    g = np.array([[1, b, c], [0, 1, a], [0, 0, 1]], dtype=complex)
    rounded = np.rint(g.real)
    defect = float(np.max(np.abs(g - rounded)))
    if defect > integer_tol:
        raise ConvergenceError(
            f"continuation entries are {defect:.2e} away from integers")
    return rounded.astype(int)


# --- MHS morphism bookkeeping ---------------------------------------------------

E23_ACTION = {
    "N0": [[0, 0, 0], [0, 0, 1], [0, 0, 0]],   # e3 -> e2
    "N1": [[0, 1, 0], [0, 0, 0], [0, 0, 0]],   # e2 -> e1
}
E24_ACTION = {
    "N0": [[0, 1, 0], [0, 0, 0], [0, 0, 0]],   # e2 -> e1
    "N1": [[0, 0, 0], [0, 0, 1], [0, 0, 0]],   # e3 -> e2
}

_BASIS_WEIGHTS = (-4, -2, 0)
_BASIS_TYPES = ((-2, -2), (-1, -1), (0, 0))


def _check_operator(mat, op_weight: int, op_type: tuple) -> dict:
    w_ok, f_ok = True, True
    for i in range(3):
        for j in range(3):
            if mat[i][j] == 0:
                continue
            if _BASIS_WEIGHTS[i] > _BASIS_WEIGHTS[j] + op_weight:
                w_ok = False
            expected = (_BASIS_TYPES[j][0] + op_type[0], _BASIS_TYPES[j][1] + op_type[1])
            if _BASIS_TYPES[i] != expected:
                f_ok = False
    return {"weight_compatible": w_ok, "type_compatible": f_ok}


def check_lie_action(action: dict) -> dict:
    """W- and type-compatibility of an action table {N0: matrix, N1: matrix}."""
    n0 = np.array(action["N0"])
    n1 = np.array(action["N1"])
    report = {
        "N0": _check_operator(n0, -2, (-1, -1)),
        "N1": _check_operator(n1, -2, (-1, -1)),
        "[N1,N0]": _check_operator(n1 @ n0 - n0 @ n1, -4, (-2, -2)),
    }
    report["passes"] = all(v["weight_compatible"] and v["type_compatible"]
                           for k, v in report.items() if k != "passes")
    return report


def lie_action_is_mhs_morphism() -> dict:
    """Check both standard generator actions against the filtration data."""
    return {"E23": check_lie_action(E23_ACTION), "E24": check_lie_action(E24_ACTION)}


# --- frozen build-time constants --------------------------------------------------

def regression_constants() -> dict:
    with resources.files("alblab").joinpath("regression_constants.json").open() as fh:
        return json.load(fh)


def e23_to_e24(coords: tuple) -> tuple:
    """The frozen coordinate comparison between the two map conventions."""
    alpha, beta, lam = coords
    return (beta, alpha, alpha * beta - lam)

r"""Ghost-cell closures: zero inflow and backward-difference outflow.

With transport to the right, the inflow ghosts (cells ``1-r..0``) carry the
prescribed boundary value, here identically zero.  The outflow ghosts
(``J+1..J+p``) are closed by killing the ``k_b``-th backward difference,

.. math::

    (D_-^{k_b} u)_{J+\ell} = g_{J+\ell}, \qquad \ell = 1..p,

which for ``g = 0`` is polynomial extrapolation of degree ``k_b - 1`` from
the last interior cells (``k_b = 0`` pins the ghosts to ``g`` directly, i.e.
a right Dirichlet condition).  The ghosts are resolved left to right so each
one may consume those already filled.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .state import FieldState


@dataclass(frozen=True)
class BoundarySpec:
    """Pairing of the inflow rule with the outflow extrapolation order."""

    outflow_order_kb: int
    inflow: str = "dirichlet_zero"

    def __post_init__(self) -> None:
        if self.outflow_order_kb < 0:
            raise ValueError("extrapolation order k_b must be nonnegative")
        if self.inflow != "dirichlet_zero":
            raise ValueError("only the homogeneous inflow condition is supported")


def backward_difference(values: Sequence[float], m: int, index: int) -> float:
    """m-th backward difference of ``values`` at ``index``.

    ``(D_-^m v)_i = sum_{m'=0}^{m} C(m, m') (-1)^(m-m') v[i-m+m']``; the plain
    first difference is ``v[i] - v[i-1]``.
    """
    if m < 0:
        raise ValueError("difference order must be nonnegative")
    if index >= len(values) or index - m < 0:
        raise IndexError(
            f"difference of order {m} at index {index} needs indices "
            f"{index - m}..{index} inside 0..{len(values) - 1}"
        )
    return math.fsum(
        math.comb(m, k) * (-1) ** (m - k) * values[index - m + k]
        for k in range(m + 1)
    )


def fill_inflow_ghosts(state: FieldState) -> FieldState:
    """Set the left ghost cells to the inflow value zero (in place)."""
    state.left_ghosts[:] = 0.0
    return state


def fill_outflow_ghosts(state: FieldState, kb: int,
                        sources: Sequence[float] | None = None) -> FieldState:
    """Fill the right ghosts so ``(D_-^kb u)_{J+ell} = g_{J+ell}`` (in place).

    ``sources`` supplies ``g_{J+1}..g_{J+p}`` (zeros when omitted).  Ghosts
    are filled for ``ell = 1..p`` in increasing order; ``u_{J+ell}`` is the
    unique value making the difference vanish, which unrolls to

        u_{J+ell} = g_{J+ell} + sum_{m=1}^{kb} C(kb, m) (-1)^(m+1) u_{J+ell-m}.
    """
    if kb < 0:
        raise ValueError("extrapolation order k_b must be nonnegative")
    if state.J < kb:
        raise ValueError(
            f"need at least k_b = {kb} interior cells to extrapolate, have {state.J}"
        )
    if sources is not None and len(sources) < state.p:
        raise ValueError(f"need {state.p} outflow sources, got {len(sources)}")
    for ell in range(1, state.p + 1):
        g = float(sources[ell - 1]) if sources is not None else 0.0
        acc = g
        for m in range(1, kb + 1):
            acc += math.comb(kb, m) * (-1) ** (m + 1) * state.get(state.J + ell - m)
        state.set(state.J + ell, acc)
    return state

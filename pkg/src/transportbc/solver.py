r"""Grids, initial data, time stepping, error metrics, and stability functionals.

The interval problem lives on cells ``1..J`` covering ``(0, L]`` with the
inflow ghosts pinned to zero and the outflow ghosts closed by order-``k_b``
extrapolation.  The half-line variant drops the inflow boundary: the window is
a truncated view of cells extending to the left, valid exactly (not
approximately) while the data's support cannot reach the artificial edge,
which is checked, never assumed.

Two state semantics are supported throughout and selected by ``convention``:

- ``"midpoint"``: cell values are point samples at cell midpoints, errors are
  measured against midpoint samples of the shifted datum;
- ``"cell_average"``: cell values are exact cell averages, errors are measured
  against exact averages of the shifted datum.

Reported error tables use the midpoint convention with the sup-over-steps
statistic; both statistics are always emitted so the choice stays visible.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .boundary import BoundarySpec, fill_inflow_ghosts, fill_outflow_ghosts
from .scheme import SchemeStencil
from .state import FieldState

CONVENTIONS = ("midpoint", "cell_average")

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid of ``J`` cells on ``(0, L]`` with ``dt = lam * dx``."""

    L: float
    J: int
    lam: float

    def __post_init__(self) -> None:
        if not self.L > 0:
            raise ValueError("interval length must be positive")
        if self.J < 1:
            raise ValueError("cell count must be positive")
        if not self.lam > 0:
            raise ValueError("time-step ratio must be positive")

    @property
    def dx(self) -> float:
        return self.L / self.J

    @property
    def dt(self) -> float:
        return self.lam * self.dx

    @property
    def cell_edges(self) -> np.ndarray:
        """Edges ``x_0 .. x_J`` (length J+1)."""
        return self.dx * np.arange(self.J + 1)

    @property
    def cell_midpoints(self) -> np.ndarray:
        """Midpoints of cells ``1..J``."""
        return self.dx * (np.arange(1, self.J + 1) - 0.5)


class PowerPlusDatum:
    """The one-sided power profile ``((x - c)^+)^alpha``.

    Vanishes for ``x <= c``; its antiderivative is closed-form, so cell
    averages carry no quadrature error.
    """

    def __init__(self, c: float, alpha: float) -> None:
        if not alpha > 0:
            raise ValueError("power alpha must be positive")
        self.c = float(c)
        self.alpha = float(alpha)

    def __call__(self, x):
        xx = np.maximum(np.asarray(x, dtype=float) - self.c, 0.0)
        return xx ** self.alpha

    def antiderivative(self, x):
        xx = np.maximum(np.asarray(x, dtype=float) - self.c, 0.0)
        return xx ** (self.alpha + 1.0) / (self.alpha + 1.0)

    def cell_average(self, xl, xr):
        xl = np.asarray(xl, dtype=float)
        xr = np.asarray(xr, dtype=float)
        return (self.antiderivative(xr) - self.antiderivative(xl)) / (xr - xl)

    @property
    def support_min(self) -> float:
        return self.c

    def __repr__(self) -> str:
        return f"PowerPlusDatum(c={self.c}, alpha={self.alpha})"


class CallableDatum:
    """Wrap an arbitrary vectorized profile ``fn``.

    Cell averages fall back to 16-point Gauss-Legendre quadrature per cell.
    ``support_min`` (leftmost point of the support) is needed by the
    half-line driver to validate window padding.
    """

    def __init__(self, fn: Callable, support_min: float | None = None) -> None:
        self.fn = fn
        self._support_min = support_min

    def __call__(self, x):
        return np.asarray(self.fn(np.asarray(x, dtype=float)), dtype=float)

    def cell_average(self, xl, xr):
        xl = np.asarray(xl, dtype=float)
        xr = np.asarray(xr, dtype=float)
        mid = 0.5 * (xl + xr)
        half = 0.5 * (xr - xl)
        acc = np.zeros(np.broadcast(xl, xr).shape)
        for node, w in zip(_GL_NODES, _GL_WEIGHTS):
            acc = acc + w * self(mid + half * node)
        return 0.5 * acc

    @property
    def support_min(self) -> float | None:
        return self._support_min


def exact_solution(datum, x, t: float, a: float):
    """Shifted datum ``u0(x - a t)``, zero wherever ``x - a t <= 0``.

    The zero gate encodes the convention that interval data live on the
    positive axis and are extended by zero to the left.
    """
    xs = np.asarray(x, dtype=float) - a * t
    vals = np.where(xs > 0.0, datum(xs), 0.0)
    if np.isscalar(x):
        return float(vals)
    return vals


def _gated_cell_averages(datum, grid: GridSpec, shift: float) -> np.ndarray:
    """Exact averages of the zero-extended shifted datum over cells 1..J."""
    lo = grid.cell_edges[:-1] - shift
    hi = grid.cell_edges[1:] - shift
    if isinstance(datum, PowerPlusDatum) and datum.c >= 0.0:
        return datum.cell_average(lo, hi)
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    acc = np.zeros(grid.J)
    for node, w in zip(_GL_NODES, _GL_WEIGHTS):
        xs = mid + half * node
        acc = acc + w * np.where(xs > 0.0, datum(xs), 0.0)
    return 0.5 * acc


def reference_values(datum, grid: GridSpec, t: float, a: float,
                     convention: str) -> np.ndarray:
    """Per-cell reference (exact-solution) values in the given convention."""
    if convention == "midpoint":
        return exact_solution(datum, grid.cell_midpoints, t, a)
    if convention == "cell_average":
        return _gated_cell_averages(datum, grid, a * t)
    raise ValueError(f"unknown convention {convention!r}")


def project_initial(datum, grid: GridSpec, stencil: SchemeStencil) -> FieldState:
    """Initial state holding exact cell averages of the datum (ghosts zero)."""
    state = FieldState(J=grid.J, r=stencil.r, p=stencil.p, time_index=0)
    state.interior[:] = datum.cell_average(grid.cell_edges[:-1],
                                           grid.cell_edges[1:])
    return state


def sample_initial(datum, grid: GridSpec, stencil: SchemeStencil) -> FieldState:
    """Initial state holding midpoint samples of the datum (ghosts zero)."""
    state = FieldState(J=grid.J, r=stencil.r, p=stencil.p, time_index=0)
    state.interior[:] = datum(grid.cell_midpoints)
    return state


def initial_state(datum, grid: GridSpec, stencil: SchemeStencil,
                  convention: str = "midpoint") -> FieldState:
    if convention == "midpoint":
        return sample_initial(datum, grid, stencil)
    if convention == "cell_average":
        return project_initial(datum, grid, stencil)
    raise ValueError(f"unknown convention {convention!r}")


def step(state: FieldState, stencil: SchemeStencil, bc: BoundarySpec,
         sources: Sequence[float] | None = None) -> FieldState:
    """One explicit update: fill ghosts on ``state``, then apply the stencil.

    The input state's ghost slots are refreshed in place as a side effect;
    the interior is untouched and a new state is returned.
    """
    if state.J < max(1, bc.outflow_order_kb):
        raise ValueError("grid too small for the requested boundary closure")
    fill_inflow_ghosts(state)
    fill_outflow_ghosts(state, bc.outflow_order_kb, sources)
    v = state.values
    r, J = state.r, state.J
    new = FieldState(J=J, r=r, p=state.p, time_index=state.time_index + 1)
    acc = np.zeros(J)
    for ell, c in zip(range(-r, state.p + 1), stencil.coeffs):
        acc += c * v[r + ell:r + J + ell]
    new.interior[:] = acc
    return new


def n_steps(T: float, dt: float) -> int:
    """Smallest n with ``n * dt >= T`` (tolerating 1e-9 relative float slop)."""
    if T <= 0:
        return 0
    return max(0, math.ceil(T / dt - 1e-9))


@dataclass
class RunResult:
    """Outcome of an interval run; history fields depend on the record mode."""

    grid: GridSpec
    stencil: SchemeStencil
    bc: BoundarySpec
    datum: object
    convention: str
    record: str
    n_steps: int
    t_final: float
    final_state: FieldState
    linf_history: np.ndarray | None = None
    l2_history: np.ndarray | None = None
    history: list[FieldState] | None = None


def run_interval(datum, grid: GridSpec, stencil: SchemeStencil,
                 bc: BoundarySpec, T: float, record: str = "sup_error",
                 convention: str = "midpoint") -> RunResult:
    """March the interval scheme to the first time level at or past ``T``.

    ``record`` selects what is retained: ``"final"`` keeps just the last
    state, ``"sup_error"`` additionally tracks per-step error norms against
    the exact solution, ``"full_history"`` keeps every state (and the error
    track).  Aliases ``"sup"`` and ``"history"`` are accepted.
    """
    record = {"sup": "sup_error", "history": "full_history"}.get(record, record)
    if record not in ("final", "sup_error", "full_history"):
        raise ValueError(f"unknown record mode {record!r}")
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown convention {convention!r}")
    a = stencil.velocity_a
    N = n_steps(T, grid.dt)
    state = initial_state(datum, grid, stencil, convention)

    track = record != "final"
    linf_hist = np.zeros(N + 1) if track else None
    l2_hist = np.zeros(N + 1) if track else None
    history = [state.copy()] if record == "full_history" else None

    def measure(s: FieldState, n: int) -> None:
        ref = reference_values(datum, grid, n * grid.dt, a, convention)
        err = s.interior - ref
        linf_hist[n] = np.max(np.abs(err)) if len(err) else 0.0
        l2_hist[n] = math.sqrt(grid.dx * float(np.dot(err, err)))

    if track:
        measure(state, 0)
    for n in range(1, N + 1):
        state = step(state, stencil, bc)
        if track:
            measure(state, n)
        if history is not None:
            history.append(state.copy())
    return RunResult(grid=grid, stencil=stencil, bc=bc, datum=datum,
                     convention=convention, record=record, n_steps=N,
                     t_final=N * grid.dt, final_state=state,
                     linf_history=linf_hist, l2_history=l2_hist,
                     history=history)


@dataclass(frozen=True)
class ErrorReport:
    convention: str
    linf_final: float
    l2_final: float
    linf_sup: float | None
    l2_sup: float | None
    sup_at_step: int | None


def error_metrics(run: RunResult, datum=None, a: float | None = None,
                  convention: str | None = None) -> ErrorReport:
    """Error norms of a recorded run.

    Final-step norms are always available.  Sup-over-steps norms need a run
    recorded with ``sup_error`` or ``full_history``; asking for a different
    convention than the run's needs ``full_history`` (states are re-measured).
    """
    datum = run.datum if datum is None else datum
    a = run.stencil.velocity_a if a is None else a
    convention = run.convention if convention is None else convention
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown convention {convention!r}")
    grid = run.grid

    if convention == run.convention and run.linf_history is not None:
        linf_hist, l2_hist = run.linf_history, run.l2_history
    elif run.history is not None:
        linf_hist = np.zeros(run.n_steps + 1)
        l2_hist = np.zeros(run.n_steps + 1)
        for n, s in enumerate(run.history):
            ref = reference_values(datum, grid, n * grid.dt, a, convention)
            err = s.interior - ref
            linf_hist[n] = np.max(np.abs(err))
            l2_hist[n] = math.sqrt(grid.dx * float(np.dot(err, err)))
    elif convention == run.convention:
        ref = reference_values(datum, grid, run.t_final, a, convention)
        err = run.final_state.interior - ref
        return ErrorReport(convention=convention,
                           linf_final=float(np.max(np.abs(err))),
                           l2_final=math.sqrt(grid.dx * float(np.dot(err, err))),
                           linf_sup=None, l2_sup=None, sup_at_step=None)
    else:
        raise ValueError(
            "run did not record enough history for convention "
            f"{convention!r}; rerun with record='full_history'"
        )
    k = int(np.argmax(linf_hist))
    return ErrorReport(convention=convention,
                       linf_final=float(linf_hist[-1]),
                       l2_final=float(l2_hist[-1]),
                       linf_sup=float(linf_hist[k]),
                       l2_sup=float(np.max(l2_hist)),
                       sup_at_step=k)


@dataclass(frozen=True)
class ConvergenceRow:
    J: int
    dx: float
    error_final: float
    error_sup: float
    observed_order: float  # nan on the first row


def convergence_study(datum, stencil: SchemeStencil, kb: int,
                      J_list: Sequence[int], T: float, L: float = 1.0,
                      convention: str = "midpoint") -> list[ConvergenceRow]:
    """l-infinity errors under grid refinement plus successive observed orders.

    The order between consecutive rows is measured on the sup-over-steps
    error (the statistic the reference tables use) and reported on the finer
    row; ``error_final`` rides along for comparison.
    """
    if list(J_list) != sorted(set(J_list)):
        raise ValueError("J_list must be strictly increasing")
    bc = BoundarySpec(outflow_order_kb=kb)
    rows: list[ConvergenceRow] = []
    prev: tuple[int, float] | None = None
    for J in J_list:
        grid = GridSpec(L=L, J=J, lam=stencil.lam)
        run = run_interval(datum, grid, stencil, bc, T,
                           record="sup_error", convention=convention)
        rep = error_metrics(run)
        order = float("nan")
        if prev is not None and rep.linf_sup > 0 and prev[1] > 0:
            order = math.log(prev[1] / rep.linf_sup) / math.log(J / prev[0])
        rows.append(ConvergenceRow(J=J, dx=grid.dx,
                                   error_final=rep.linf_final,
                                   error_sup=rep.linf_sup,
                                   observed_order=order))
        prev = (J, rep.linf_sup)
    return rows


def consistency_error_field(datum, grid: GridSpec, stencil: SchemeStencil,
                            n: int, window: tuple[int, int]) -> np.ndarray:
    """Local truncation error against exact cell averages on the whole line.

    ``e_j^n = -(w_j^n - sum_l a_l w_{j+l}^{n-1}) / dt`` where ``w_j^n`` is the
    exact cell average of the datum shifted by ``a t^n``; the datum must be
    globally defined (no zero gate is applied).  Returns ``e_j^n`` for
    ``j = window[0] .. window[1]`` inclusive.
    """
    if n < 1:
        raise ValueError("time index must be at least 1")
    j_lo, j_hi = window
    if j_hi < j_lo:
        raise ValueError("empty index window")
    a = stencil.velocity_a
    dx, dt = grid.dx, grid.dt

    def averages(j0: int, j1: int, t: float) -> np.ndarray:
        edges = dx * np.arange(j0 - 1, j1 + 1)
        return datum.cell_average(edges[:-1] - a * t, edges[1:] - a * t)

    w_now = averages(j_lo, j_hi, n * dt)
    w_prev = averages(j_lo - stencil.r, j_hi + stencil.p, (n - 1) * dt)
    acc = np.zeros(j_hi - j_lo + 1)
    m = j_hi - j_lo + 1
    for i, c in enumerate(stencil.coeffs):
        acc += c * w_prev[i:i + m]
    return -(w_now - acc) / dt


@dataclass
class HalflineResult:
    """Truncated half-line run with boundary traces and balance diagnostics.

    ``traces[n]`` holds cells ``J+1-r-kb .. J+p`` at level n (ghosts filled
    with that level's sources); ``masses``/``energies`` are ``dx * sum`` and
    ``dx * sum of squares`` over the window interior.
    """

    grid: GridSpec
    stencil: SchemeStencil
    kb: int
    steps: int
    convention: str
    final_state: FieldState
    initial_interior: np.ndarray
    traces: np.ndarray
    masses: np.ndarray
    energies: np.ndarray
    linf_history: np.ndarray
    l2_history: np.ndarray
    sources: np.ndarray | None


def run_halfline_outflow(datum, grid: GridSpec, stencil: SchemeStencil,
                         kb: int, steps: int,
                         sources: np.ndarray | None = None,
                         convention: str = "cell_average") -> HalflineResult:
    """Evolve the outflow problem on a window of a leftward-unbounded line.

    The window is cells ``1..J`` of ``grid``; the left edge is artificial, so
    the run refuses data whose support could propagate within ``r`` cells of
    it during ``steps`` steps (support spreads left by ``p`` cells per step).
    ``sources`` has shape ``(steps+1, p)``: row n supplies ``g_{J+1..J+p}``
    for the level-n ghost fill (row ``steps`` only feeds the final trace).
    Errors are measured against the ungated shifted datum.
    """
    if steps < 0:
        raise ValueError("steps must be nonnegative")
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown convention {convention!r}")
    r, p = stencil.r, stencil.p
    if grid.J < r + kb:
        raise ValueError(f"window of {grid.J} cells cannot expose the "
                         f"boundary trace (need J >= r + kb = {r + kb})")
    smin = datum.support_min
    if smin is None:
        raise ValueError("half-line runs need the datum's support_min")
    j_min = math.floor(smin / grid.dx + 1e-12) + 1
    reach = j_min - steps * p
    if reach < 1 + r:
        raise ValueError(
            "window too small: support can propagate to within "
            f"{max(0, reach - 1)} cells of the artificial edge; pad the "
            f"window by at least {1 + r - reach} more cells"
        )
    if sources is not None:
        sources = np.asarray(sources, dtype=float)
        if sources.shape != (steps + 1, p):
            raise ValueError(f"sources must have shape ({steps + 1}, {p})")

    a = stencil.velocity_a
    state = initial_state(datum, grid, stencil, convention)
    f0 = state.interior.copy()

    trace_lo = grid.J + 1 - r - kb
    n_trace = r + kb + p
    traces = np.zeros((steps + 1, n_trace))
    masses = np.zeros(steps + 1)
    energies = np.zeros(steps + 1)
    linf_hist = np.zeros(steps + 1)
    l2_hist = np.zeros(steps + 1)

    def ref(n: int) -> np.ndarray:
        if convention == "midpoint":
            return datum(grid.cell_midpoints - a * n * grid.dt)
        return datum.cell_average(grid.cell_edges[:-1] - a * n * grid.dt,
                                  grid.cell_edges[1:] - a * n * grid.dt)

    def observe(n: int) -> None:
        fill_inflow_ghosts(state)
        g = sources[n] if sources is not None else None
        fill_outflow_ghosts(state, kb, g)
        lo = trace_lo + r - 1  # array position of cell J+1-r-kb
        traces[n, :] = state.values[lo:lo + n_trace]
        masses[n] = grid.dx * float(np.sum(state.interior))
        energies[n] = grid.dx * float(np.dot(state.interior, state.interior))
        err = state.interior - ref(n)
        linf_hist[n] = float(np.max(np.abs(err)))
        l2_hist[n] = math.sqrt(grid.dx * float(np.dot(err, err)))

    bc = BoundarySpec(outflow_order_kb=kb)
    observe(0)
    for n in range(1, steps + 1):
        g = sources[n - 1] if sources is not None else None
        state = step(state, stencil, bc, sources=g)
        observe(n)
    return HalflineResult(grid=grid, stencil=stencil, kb=kb, steps=steps,
                          convention=convention, final_state=state,
                          initial_interior=f0, traces=traces, masses=masses,
                          energies=energies, linf_history=linf_hist,
                          l2_history=l2_hist, sources=sources)


@dataclass(frozen=True)
class FunctionalRatio:
    lhs: float
    rhs: float
    ratio: float


def stability_functional_ratio(run: HalflineResult,
                               gamma: float) -> FunctionalRatio:
    """Empirical constant of the weighted stability estimate.

    lhs = sup_n exp(-2 gamma n dt) * dx * sum_j u_j^2
          + sum_n dt exp(-2 gamma n dt) * sum_{l=1-r-kb..p} u_{J+l}^2,
    rhs = dx * sum_j f_j^2
          + sum_n dt exp(-2 gamma n dt) * sum_{l=1..p} g_{J+l}^2,
    both over the computed horizon n = 0..steps.  The ratio lhs/rhs is the
    empirical stability constant; it is 0 when both sides vanish and inf when
    only the right side does.
    """
    if not gamma > 0:
        raise ValueError("gamma must be positive")
    dt = run.grid.dt
    n = np.arange(run.steps + 1)
    w = np.exp(-2.0 * gamma * n * dt)
    lhs = float(np.max(w * run.energies))
    lhs += dt * float(np.sum(w * np.sum(run.traces ** 2, axis=1)))
    rhs = run.grid.dx * float(np.dot(run.initial_interior, run.initial_interior))
    if run.sources is not None and run.stencil.p > 0:
        rhs += dt * float(np.sum(w * np.sum(run.sources ** 2, axis=1)))
    if rhs == 0.0:
        ratio = 0.0 if lhs == 0.0 else float("inf")
    else:
        ratio = lhs / rhs
    return FunctionalRatio(lhs=lhs, rhs=rhs, ratio=ratio)

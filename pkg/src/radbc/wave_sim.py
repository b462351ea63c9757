"""Mode-wise half-line wave solver with product-form radiation boundaries.

Each tangential wavenumber ``k`` gives the one-dimensional problem

    u_tt = u_xx - k^2 u,    0 <= x <= x_max,

discretized by leapfrog.  At ``x = 0`` the boundary operator

    prod_j (a_j d/dt - d/dx) u = 0,   a_j = |cos(j pi / (n_bc + 1))|,

is imposed through a box-scheme stencil; ``x = x_max`` is a Dirichlet wall.
The signed cosines (``variant="signed"``) are kept for comparison.  Half of
them are negative, so the set is symmetric under x -> -x and reflects every
propagating wave completely; each negative factor also makes the box stencil
amplify the boundary value from one step to the next.
Spurious reflection is measured against a run on a domain extended past
``x = 0`` by ``(reference_factor - 1) * x_max``, long enough that nothing
bounced off its far wall returns to ``[0, x_max]`` before ``t_final``.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
import math

import numpy as np

from .errors import (
    ConfigError,
    InstabilityDetected,
    OrderTooHigh,
    RadbcError,
    ResolutionError,
    SingularStencil,
)

BLOWUP = 1e10
STABILITY_MARGIN = 0.99
CAUSALITY_WIDTHS = 6.0
SCHEME = "leapfrog interior, box-scheme product boundary"


@dataclass(frozen=True)
class ModeSimConfig:
    k: float = 0.0
    n_bc: int = 4
    x_max: float = 10.0
    dx: float = 0.01
    cfl: float = 0.9
    t_final: float = 10.0
    pulse_center: float = 5.0
    pulse_width: float = 0.5
    reference_factor: float = 3.0

    @classmethod
    def from_dict(cls, data):
        """Build from a mapping with exactly the config keys; validates."""
        if not isinstance(data, dict):
            raise ConfigError(["config must be a JSON object"])
        names = [f.name for f in fields(cls)]
        problems = [f"unknown key {key!r}" for key in data if key not in names]
        problems += [f"missing key {name!r}" for name in names if name not in data]
        if problems:
            raise ConfigError(problems)
        kwargs = {}
        for name in names:
            value = data[name]
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                problems.append(f"{name} must be a number, got {value!r}")
            elif name == "n_bc":
                if value != int(value):
                    problems.append(f"n_bc must be an integer, got {value!r}")
                kwargs[name] = int(value)
            else:
                kwargs[name] = float(value)
        if problems:
            raise ConfigError(problems)
        config = cls(**kwargs)
        config.validate()
        return config

    def to_dict(self):
        return asdict(self)

    def violations(self):
        """Every violated invariant, as human-readable messages."""
        out = []
        for f in fields(self):
            if not math.isfinite(getattr(self, f.name)):
                out.append(f"{f.name} must be finite")
        if out:
            return out
        if self.k < 0:
            out.append("k must be >= 0")
        if self.n_bc < 0:
            out.append("n_bc must be >= 0")
        if self.x_max <= 0:
            out.append("x_max must be > 0")
        if self.dx <= 0:
            out.append("dx must be > 0")
        elif self.x_max > 0 and self.dx >= self.x_max:
            out.append("dx must be smaller than x_max")
        if not 0 < self.cfl < 1:
            out.append(f"CFL invariant violated: cfl must lie in (0, 1), got {self.cfl}")
        if self.t_final <= 0:
            out.append("t_final must be > 0")
        if self.pulse_width <= 0:
            out.append("pulse_width must be > 0")
        elif self.pulse_center - 3 * self.pulse_width <= 0:
            out.append("pulse support invariant violated: pulse_center - 3*pulse_width must be > 0")
        if self.pulse_center >= self.x_max:
            out.append("pulse_center must lie inside (0, x_max)")
        if self.reference_factor < 3:
            out.append("reference_factor must be >= 3")
        elif self.t_final >= 2 * (self.reference_factor - 1) * self.x_max:
            out.append(
                "reference invariant violated: t_final must be < 2*(reference_factor-1)*x_max"
            )
        return out

    def validate(self):
        problems = self.violations()
        if problems:
            raise ConfigError(problems)

    @property
    def stability_limit(self):
        """Largest stable leapfrog step, ``dx / sqrt(1 + (k dx)^2 / 4)``."""
        return self.dx / math.sqrt(1.0 + (self.k * self.dx) ** 2 / 4.0)

    @property
    def dt(self):
        return min(self.cfl * self.dx, STABILITY_MARGIN * self.stability_limit)

    @property
    def n_steps(self):
        return int(math.ceil(self.t_final / self.dt - 1e-9))

    @property
    def n_points(self):
        return int(round(self.x_max / self.dx)) + 1

    @property
    def n_extension(self):
        return int(round((self.reference_factor - 1) * self.x_max / self.dx))

    @property
    def arrival_time(self):
        """Time before which the pulse has not touched ``x = 0`` to double precision."""
        return self.pulse_center - CAUSALITY_WIDTHS * self.pulse_width


def boundary_coefficients(n_bc, variant="folded"):
    """Factor coefficients ``a_j`` for ``j = 1..n_bc``.

    ``"folded"`` gives ``|cos(j pi/(n_bc+1))|``, ``"signed"`` the raw cosines.
    """
    coeffs = [math.cos(j * math.pi / (n_bc + 1)) for j in range(1, n_bc + 1)]
    if variant == "signed":
        return coeffs
    if variant != "folded":
        raise ValueError(f"unknown coefficient variant {variant!r}")
    # mirror the upper half so that cos(pi/2) comes out as exactly 0
    return [abs(coeffs[min(j, n_bc - 1 - j)]) if 2 * (j + 1) != n_bc + 1 else 0.0
            for j in range(n_bc)]


def box_factor(a, ratio):
    """Stencil of ``dt * (a D_t - D_x)`` on a 2x2 corner, box-averaged.

    Rows index the time lag (0 = newest level), columns the grid offset from
    the boundary; ``ratio = dt/dx``.
    """
    return 0.5 * np.array([
        [a + ratio, a - ratio],
        [-a + ratio, -a - ratio],
    ])


def composed_stencil(coefficients, ratio):
    """Product of box factors as an ``(n+1) x (n+1)`` corner stencil."""
    stencil = np.ones((1, 1))
    for a in coefficients:
        f = box_factor(a, ratio)
        p, q = stencil.shape
        out = np.zeros((p + 1, q + 1))
        for i in range(2):
            for j in range(2):
                out[i:i + p, j:j + q] += f[i, j] * stencil
        stencil = out
    return stencil


@dataclass
class FieldState:
    """Two time levels plus the boundary-corner history.

    ``boundary_history[p, q]`` holds ``u_q`` at time level ``m + 1 - p`` for
    ``p >= 1`` (row 0 is scratch for the level being built).
    """

    u_prev: np.ndarray
    u_curr: np.ndarray
    time_index: int = 0
    boundary_history: np.ndarray = field(default=None)

    def copy(self):
        return FieldState(
            self.u_prev.copy(),
            self.u_curr.copy(),
            self.time_index,
            None if self.boundary_history is None else self.boundary_history.copy(),
        )


def _grid(config, reference):
    n_ext = config.n_extension if reference else 0
    idx = np.arange(-n_ext, config.n_points)
    return idx * config.dx


def gaussian_pulse_init(config, reference=False):
    """Gaussian ``exp(-(x-x0)^2/sigma^2)`` launched toward ``x = 0``.

    The second level uses ``u_t = u_x`` (exact left-going data when k = 0)
    and a Taylor step ``u + dt u_t + dt^2/2 (u_xx - k^2 u)``.  Both levels
    are built on the reference grid and sliced, so the truncated and
    reference runs start bit-identical on ``[0, x_max]``.
    """
    x = _grid(config, reference=True)
    dx, dt, k = config.dx, config.dt, config.k
    u0 = np.exp(-((x - config.pulse_center) ** 2) / config.pulse_width**2)
    ux = np.zeros_like(u0)
    uxx = np.zeros_like(u0)
    ux[1:-1] = (u0[2:] - u0[:-2]) / (2 * dx)
    uxx[1:-1] = (u0[2:] - 2 * u0[1:-1] + u0[:-2]) / dx**2
    u1 = u0 + dt * ux + 0.5 * dt**2 * (uxx - k * k * u0)
    u0[0] = u0[-1] = u1[0] = u1[-1] = 0.0
    if not reference:
        u0 = u0[config.n_extension:].copy()
        u1 = u1[config.n_extension:].copy()
        if config.n_bc == 0:
            u0[0] = u1[0] = 0.0
    state = FieldState(u_prev=u0, u_curr=u1, time_index=1)
    depth = config.n_bc + 1
    if not reference and config.n_bc >= 1:
        if depth > len(u1):
            raise OrderTooHigh(f"n_bc={config.n_bc} needs {depth} grid points")
        hist = np.zeros((depth, depth))
        hist[1, :] = u1[:depth]
        if depth > 2:
            hist[2, :] = u0[:depth]
        state.boundary_history = hist
    return state


def step_interior(state, config):
    """Leapfrog update of interior points; boundary entries are left at 0.

    Returns a new state advanced one step.  Raises
    :class:`InstabilityDetected` on NaN or magnitudes above 1e10.
    """
    u, up = state.u_curr, state.u_prev
    r2 = (config.dt / config.dx) ** 2
    kdt2 = (config.dt * config.k) ** 2
    un = np.zeros_like(u)
    un[1:-1] = 2 * u[1:-1] - up[1:-1] + r2 * (u[2:] - 2 * u[1:-1] + u[:-2]) - kdt2 * u[1:-1]
    if not np.all(np.isfinite(un)) or np.max(np.abs(un)) > BLOWUP:
        raise InstabilityDetected(f"solution blew up at step {state.time_index + 1}")
    return FieldState(u, un, state.time_index + 1, state.boundary_history)


class BoundaryOperator:
    """Precomputed corner stencils for the product condition at ``x = 0``."""

    def __init__(self, config, coefficients=None):
        self.n_bc = config.n_bc
        if self.n_bc < 1:
            raise ValueError("BoundaryOperator needs n_bc >= 1")
        if self.n_bc + 1 > config.n_points:
            raise OrderTooHigh(
                f"n_bc={self.n_bc} needs {self.n_bc + 1} grid points, have {config.n_points}"
            )
        if coefficients is None:
            coefficients = boundary_coefficients(self.n_bc)
        self.coefficients = list(coefficients)
        ratio = config.dt / config.dx
        # reduced-order stencils serve the warm-up steps
        self.stencils = {
            order: composed_stencil(self.coefficients[:order], ratio)
            for order in range(1, self.n_bc + 1)
        }
        for order, st in self.stencils.items():
            if abs(st[0, 0]) < 1e-12:
                raise SingularStencil(
                    f"coefficient of the new boundary value vanishes (order {order})"
                )

    def solve(self, history, order):
        st = self.stencils[order]
        d = order + 1
        window = history[:d, :d]
        rest = np.sum(st * window) - st[0, 0] * window[0, 0]
        return -rest / st[0, 0]


def apply_boundary(state, config, operator=None):
    """Set ``u_0`` at the newest level from the product boundary condition.

    ``state.u_curr`` must hold the interior update.  The history is shifted
    so that it covers the new level afterwards.
    """
    if operator is None:
        operator = BoundaryOperator(config)
    n = operator.n_bc
    hist = state.boundary_history
    u = state.u_curr
    hist[0, :] = u[: n + 1]
    # levels 0..m+1 exist, so at most m+1 lags are available
    order = min(n, state.time_index)
    u[0] = operator.solve(hist, order)
    hist[0, 0] = u[0]
    hist[1:, :] = hist[:-1, :].copy()
    return state


def discrete_energy(u_next, u_curr, config):
    """Leapfrog-conserved energy between two levels (Dirichlet ends)."""
    dx, dt, k = config.dx, config.dt, config.k
    vel = (u_next - u_curr) / dt
    grad = np.diff(u_next) * np.diff(u_curr) / dx**2
    return 0.5 * dx * (np.sum(vel * vel) + np.sum(grad) + k * k * np.sum(u_next * u_curr))


@dataclass
class ReflectionReport:
    times: np.ndarray
    errors: np.ndarray
    peak_error: float
    config: ModeSimConfig
    dt: float
    n_steps: int
    coefficients: list
    reference_energy: np.ndarray = None

    def summary(self):
        return {
            "peak_error": self.peak_error,
            "config": self.config.to_dict(),
            "scheme": {
                "name": SCHEME,
                "dt": self.dt,
                "n_steps": self.n_steps,
                "boundary_coefficients": list(self.coefficients),
            },
        }


def run_simulation(config, coefficients=None):
    """Run the truncated and reference problems and compare them on ``[0, x_max]``.

    ``coefficients`` overrides the default folded cosines; its length must
    equal ``n_bc``.
    """
    config.validate()
    if config.pulse_width < 2 * config.dx:
        raise ResolutionError(
            f"pulse_width={config.pulse_width} is below 2*dx={2 * config.dx}"
        )
    if coefficients is not None and len(coefficients) != config.n_bc:
        raise ValueError("need exactly n_bc boundary coefficients")
    operator = BoundaryOperator(config, coefficients) if config.n_bc >= 1 else None

    trunc = gaussian_pulse_init(config)
    ref = gaussian_pulse_init(config, reference=True)
    off = config.n_extension
    steps = config.n_steps
    errors = np.empty(steps + 1)
    energy = np.empty(steps)
    errors[0] = np.max(np.abs(trunc.u_prev - ref.u_prev[off:]))
    errors[1] = np.max(np.abs(trunc.u_curr - ref.u_curr[off:]))
    energy[0] = discrete_energy(ref.u_curr, ref.u_prev, config)
    for m in range(1, steps):
        trunc = step_interior(trunc, config)
        if operator is not None:
            trunc = apply_boundary(trunc, config, operator)
        ref = step_interior(ref, config)
        errors[m + 1] = np.max(np.abs(trunc.u_curr - ref.u_curr[off:]))
        energy[m] = discrete_energy(ref.u_curr, ref.u_prev, config)

    times = np.arange(steps + 1) * config.dt
    return ReflectionReport(
        times=times,
        errors=errors,
        peak_error=float(np.max(errors)),
        config=config,
        dt=config.dt,
        n_steps=steps,
        coefficients=[] if operator is None else operator.coefficients,
        reference_energy=energy,
    )


SWEEP_COLUMNS = ("k", "n_bc", "dx", "t_final", "peak_error", "error")


def _sweep_row(config):
    row = {"k": config.k, "n_bc": config.n_bc, "dx": config.dx, "t_final": config.t_final}
    try:
        row["peak_error"] = run_simulation(config).peak_error
        row["error"] = ""
    except RadbcError as exc:
        row["peak_error"] = float("nan")
        row["error"] = f"{type(exc).__name__}: {exc}"
    return row


def sweep(configs, workers=1):
    """Independent runs, one row per config, in input order.

    A failing row records its error instead of aborting the sweep.
    """
    configs = list(configs)
    if workers > 1 and len(configs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_sweep_row, configs))
    return [_sweep_row(c) for c in configs]

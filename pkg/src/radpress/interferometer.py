"""Beam splitters, multi-bounce arms, Fabry-Perot buildup and noise budgets."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from ._quadrature import integrate, uniform_breakpoints
from .errors import DomainError, InvalidCavityError, ReciprocityError, SearchError
from .field_modes import Wavepacket
from .states import LightState

__all__ = [
    "ReciprocityReport",
    "BeamSplitter",
    "DelayLine",
    "FabryPerot",
    "FabryPerotResult",
    "ArmDispersions",
    "NoiseBudget",
    "check_reciprocity",
    "phase_difference",
    "delay_line_delta_p2",
    "delay_line_window_integrals",
    "fabry_perot_delta_p2",
    "arm_dispersions_and_correlation",
    "noise_budget",
    "optimize_power",
]

RECIPROCITY_TOL = 1e-12
EXACT_RP_COEFF = 2.0 / math.sqrt(3.0)  # sqrt(4/3) from <dx^2> = K tau^3 / 3


@dataclass(frozen=True)
class ReciprocityReport:
    modulus_r: float  # | |r| - |r'| |
    modulus_t: float  # | |t| - |t'| |
    energy: float  # | |r|^2 + |t|^2 - 1 |
    cross: float  # | r' t* + r* t' |
    tol: float = RECIPROCITY_TOL

    @property
    def residuals(self) -> dict[str, float]:
        return {"|r|=|r'|": self.modulus_r, "|t|=|t'|": self.modulus_t,
                "|r|^2+|t|^2=1": self.energy, "r't*+r*t'=0": self.cross}

    @property
    def passed(self) -> bool:
        return all(v < self.tol for v in self.residuals.values())


def check_reciprocity(r: complex, t: complex, r_prime: complex | None = None,
                      t_prime: complex | None = None) -> ReciprocityReport:
    """Residuals of the three loss-free Stokes relations (primed default to unprimed)."""
    rp = r if r_prime is None else r_prime
    tp = t if t_prime is None else t_prime
    return ReciprocityReport(
        modulus_r=abs(abs(r) - abs(rp)),
        modulus_t=abs(abs(t) - abs(tp)),
        energy=abs(abs(r) ** 2 + abs(t) ** 2 - 1.0),
        cross=abs(rp * complex(t).conjugate() + complex(r).conjugate() * tp),
    )


@dataclass(frozen=True)
class BeamSplitter:
    r: complex
    t: complex
    r_prime: complex
    t_prime: complex

    def __post_init__(self):
        rep = self.report()
        if not rep.passed:
            bad = {k: v for k, v in rep.residuals.items() if v >= rep.tol}
            raise ReciprocityError(f"beam splitter violates reciprocity: {bad}")

    def report(self) -> ReciprocityReport:
        return check_reciprocity(self.r, self.t, self.r_prime, self.t_prime)

    @classmethod
    def fifty_fifty(cls, n: int = 1) -> "BeamSplitter":
        """50-50 splitter with ``r = e^{i n pi/2}/sqrt 2``, ``t = 1/sqrt 2`` (n odd)."""
        if n % 2 == 0:
            raise ReciprocityError("a loss-free 50-50 splitter needs odd n")
        s = 1 / math.sqrt(2)
        r = complex(*[(1, 0), (0, 1), (-1, 0), (0, -1)][n % 4]) * s
        return cls(r, s, r, s)


def phase_difference(r, t: complex | None = None) -> tuple[float, int]:
    """``Delta = phi_r - phi_t`` in ``[0, 2 pi)`` and its odd multiple ``n`` of pi/2.

    Accepts a :class:`BeamSplitter` or bare amplitudes ``r, t``.
    """
    if isinstance(r, BeamSplitter):
        r, t = r.r, r.t
    s = 1 / math.sqrt(2)
    if abs(abs(r) - s) > RECIPROCITY_TOL or abs(abs(t) - s) > RECIPROCITY_TOL:
        raise ReciprocityError(f"not a 50-50 splitter: |r| = {abs(r):.15g}, |t| = {abs(t):.15g}")
    delta = (np.angle(r) - np.angle(t)) % (2 * math.pi)
    n = round(delta / (math.pi / 2))
    if abs(delta - n * math.pi / 2) > RECIPROCITY_TOL * max(1.0, delta) or n % 2 == 0:
        raise ReciprocityError(
            f"Delta = {delta:.15g} is not an odd multiple of pi/2; reciprocity fails"
        )
    return float(delta), int(n)


# -- multi-bounce --------------------------------------------------------------

@dataclass(frozen=True)
class DelayLine:
    """Arm folded into ``bounces`` reflections off the test mass.

    ``window`` is the integration time around each arrival; it must be
    shorter than the round trip ``2 L``.
    """

    bounces: int
    arm_length: float
    window: float

    def __post_init__(self):
        if int(self.bounces) != self.bounces or self.bounces < 1:
            raise ValueError("bounces must be a positive integer")
        if not 0 < self.window < 2 * self.arm_length:
            raise ValueError("need 0 < window < 2 L")


def delay_line_window_integrals(line: DelayLine, packet: Wavepacket,
                                separate_spots: bool = False) -> np.ndarray:
    """``int dt da |u_0|^2`` in the window around each bounce.

    The packet returns every ``2 L``.  With overlapping spots every bounce
    shares one spot, so each window sees the whole train; with separate spots
    only the packet currently at that spot contributes.
    """
    arrivals = 2 * line.arm_length * np.arange(line.bounces)
    half = line.window / 2
    hmax = (2 * math.pi / packet.center_frequency) / 20
    out = np.empty(line.bounces)
    for k, t0 in enumerate(arrivals):
        sources = arrivals[k:k + 1] if separate_spots else arrivals

        def field(t, sources=sources):
            u = np.zeros_like(t, dtype=complex)
            for tj in sources:
                # incident plus reflected parts coincide at the mirror
                u = u + packet.incident(t - tj, 0.0) + packet.reflected_part(t - tj, 0.0)
            return u

        bp = uniform_breakpoints(t0 - half, t0 + half, hmax)
        out[k] = packet.area * integrate(lambda t: np.abs(field(t)) ** 2, bp)
    return out


def delay_line_delta_p2(state: LightState, line: DelayLine, packet: Wavepacket | None = None,
                        separate_spots: bool = False) -> float:
    """``b^2 4 w^2 |z|^2``; with ``packet`` the per-bounce integrals are summed numerically."""
    if state.kind != "coherent":
        raise ValueError("delay-line dispersion is defined for coherent states")
    if packet is None:
        return line.bounces ** 2 * 4.0 * state.omega ** 2 * state.mean_photons
    total = float(np.sum(delay_line_window_integrals(line, packet, separate_spots)))
    return state.mean_photons * total ** 2


@dataclass(frozen=True)
class FabryPerot:
    """Cavity with input-mirror amplitude ``reflection`` and a perfect end mirror."""

    reflection: complex

    def __post_init__(self):
        if abs(self.reflection) >= 1:
            raise InvalidCavityError(f"|R| = {abs(self.reflection):.6g} >= 1 stores no finite field")

    @property
    def effective_bounces(self) -> float:
        """``b'`` with ``|R|^{2 b'} = 1/2``; zero for a transparent input mirror."""
        q = abs(self.reflection) ** 2
        if q == 0:
            return 0.0
        # q - 1 is exact for q >= 1/2, so log1p keeps full precision near |R| = 1
        return math.log(2) / -(math.log1p(q - 1) if q > 0.5 else math.log(q))

    @property
    def exact_factor(self) -> float:
        """``[sum_n |R|^{2n}]^2 = [1/(1 - |R|^2)]^2``."""
        return 1.0 / (1.0 - abs(self.reflection) ** 2) ** 2

    @property
    def asymptotic_factor(self) -> float:
        return (self.effective_bounces / math.log(2)) ** 2


@dataclass(frozen=True)
class FabryPerotResult:
    exact: float
    asymptotic: float
    exact_factor: float
    asymptotic_factor: float
    effective_bounces: float


def fabry_perot_delta_p2(state: LightState, cavity: FabryPerot) -> FabryPerotResult:
    """Single-bounce ``4 w^2 |z|^2`` times the geometric buildup ``[1/(1-|R|^2)]^2``."""
    if state.kind != "coherent":
        raise ValueError("cavity dispersion is defined for coherent states")
    if not isinstance(cavity, FabryPerot):
        raise TypeError("expected a FabryPerot")
    single = 4.0 * state.omega ** 2 * state.mean_photons
    return FabryPerotResult(
        exact=single * cavity.exact_factor,
        asymptotic=single * cavity.asymptotic_factor,
        exact_factor=cavity.exact_factor,
        asymptotic_factor=cavity.asymptotic_factor,
        effective_bounces=cavity.effective_bounces,
    )


# -- two arms ------------------------------------------------------------------

@dataclass(frozen=True)
class ArmDispersions:
    arm1: float
    arm2: float
    correlation: float
    difference: float


def arm_dispersions_and_correlation(state: LightState, bs: BeamSplitter,
                                    bounces: int = 1) -> ArmDispersions:
    """Arm momentum dispersions behind a 50-50 splitter, coherent light in one port."""
    if state.kind != "coherent":
        raise ValueError("arm analysis is defined for a coherent input")
    _, n = phase_difference(bs)
    e = 1j ** n  # e^{i Delta} exactly, Delta = n pi / 2
    per_arm = 0.25 * float(((1 + e) * (1 + e.conjugate())).real)
    corr = 0.25 * float(((1 + e) ** 2).real)
    base = state.mean_photons * (2 * state.omega) ** 2 * bounces ** 2
    a1 = a2 = per_arm * base
    c = corr * base
    return ArmDispersions(a1, a2, c, a1 + a2 - 2 * c)


# -- noise budget --------------------------------------------------------------

@dataclass(frozen=True)
class NoiseBudget:
    delta_x_rp: float
    delta_x_pc: float
    delta_x_total: float
    power_opt: float
    delta_x_sql: float
    inputs: dict
    convention: str = "order-of-magnitude"
    units: dict = field(default_factory=lambda: {
        "delta_x_rp": "length", "delta_x_pc": "length", "delta_x_total": "length",
        "power_opt": "power", "delta_x_sql": "length",
    })


def _rp_coeff(convention: str) -> float:
    if convention == "order-of-magnitude":
        return 1.0
    if convention == "exact":
        return EXACT_RP_COEFF
    raise ValueError(f"unknown convention {convention!r}")


def _budget_terms(power: float, omega: float, mass: float, tau: float, bounces: float,
                  coeff: float) -> tuple[float, float]:
    rp = coeff * bounces * math.sqrt(omega * power) * tau ** 1.5 / mass
    pc = 1.0 / (2 * bounces * math.sqrt(omega * power * tau))
    return rp, pc


def noise_budget(power: float, omega: float, mass: float, tau: float, bounces: float = 1,
                 convention: str = "order-of-magnitude") -> NoiseBudget:
    """Radiation-pressure and shot-noise position errors and their optimum.

    ``convention="order-of-magnitude"`` uses the order-of-magnitude radiation-pressure
    coefficient 1; ``"exact"`` uses ``2/sqrt 3`` from the ``tau^3/3`` law.
    """
    for name, v in (("power", power), ("omega", omega), ("mass", mass),
                    ("tau", tau), ("bounces", bounces)):
        if not v > 0:
            raise DomainError(f"{name} must be positive, got {v!r}")
    k = _rp_coeff(convention)
    rp, pc = _budget_terms(power, omega, mass, tau, bounces, k)
    return NoiseBudget(
        delta_x_rp=rp,
        delta_x_pc=pc,
        delta_x_total=math.hypot(rp, pc),
        power_opt=mass / (2 * k * omega * tau ** 2 * bounces ** 2),
        delta_x_sql=math.sqrt(tau / mass),
        inputs={"power": power, "omega": omega, "mass": mass, "tau": tau, "bounces": bounces},
        convention=convention,
    )


def optimize_power(omega: float, mass: float, tau: float, bounces: float = 1,
                   convention: str = "order-of-magnitude", log10_range: tuple[float, float] = (-40.0, 40.0),
                   scan_points: int = 801) -> dict[str, float]:
    """Minimize ``dx_rp^2 + dx_pc^2`` over power.

    A log-spaced scan brackets the minimum, then golden-section search
    refines it in ``ln P``.  A minimum at the scan edge is a bracket failure.
    """
    k = _rp_coeff(convention)
    analytic = noise_budget(1.0, omega, mass, tau, bounces, convention).power_opt

    def objective(log_p):
        rp, pc = _budget_terms(math.exp(log_p), omega, mass, tau, bounces, k)
        return rp * rp + pc * pc

    grid = np.linspace(*log10_range, scan_points) * math.log(10)
    vals = np.array([objective(x) for x in grid])
    i = int(np.argmin(vals))
    if i == 0 or i == len(grid) - 1:
        raise SearchError(f"minimum at scan edge (P = {math.exp(grid[i]):.3g}); widen log10_range")
    lo, hi = grid[i - 1], grid[i + 1]
    # rescale so the objective is O(1) at the bracket centre
    scale = vals[i]
    res = optimize.minimize_scalar(lambda x: objective(x) / scale, bracket=(lo, grid[i], hi),
                                   method="golden", tol=1e-12)
    if not res.success or not lo <= res.x <= hi:
        raise SearchError(f"golden search failed: {res.message}")
    return {"P_opt_numeric": math.exp(res.x), "P_opt_analytic": analytic}

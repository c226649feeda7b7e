"""Effective-range-expansion (ERE) models and their phase shifts.

A two-channel model carries a singlet and a triplet s-wave channel, either in
3D (scattering length ``a``, effective range ``r``, no shape parameters) or in
2D (scattering length ``a2 > 0``, effective area ``sigma2``).  Phase shifts
are returned as the doubled angles ``phi = 2*delta_0`` and
``theta = 2*delta_1`` that coordinatize the flat torus.

Momentum-inversion-symmetric families are built by ``make_symmetric_model``:

* table "T1": zero-range models, symmetric under ``p -> 1/(|a0 a1| p)``,
  rows 1-4 distinguished by the signs of (a0, a1);
* table "T2": range-corrected models, symmetric under
  ``p -> 1/(lambda |a0 a1| p)``, ranges ``-/+ 2 eta / a`` with
  ``eta = lambda |a0 a1|``; rows 1-4 cross-correlate (r0 from a1's magnitude),
  rows 5-6 self-correlate;
* table "T3": the causal subfamily, ranges written ``-/+ 2 a lambda`` with
  explicit sign constraints so that both ranges are <= 0;
* table "2D": log-periodic 2D models, symmetric under ``p -> 1/(a0 a1 p)``.

Units: hbar = M = 1; lengths in an arbitrary unit L, momenta in 1/L; only the
dimensionless products a*p, r*p and lambda enter any formula.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Channel3D",
    "Channel2D",
    "FamilyTag",
    "TwoChannelModel",
    "phase_shifts_3d",
    "phase_shifts_2d",
    "phases",
    "tangents",
    "second_derivatives",
    "s_element",
    "make_symmetric_model",
    "make_2d_model",
    "channel_pole_momentum",
    "pole_momenta",
    "quarter_lambda_branch",
    "T1_ROWS",
    "T2_ROWS",
    "T3_ROWS",
]


@dataclass(frozen=True)
class Channel3D:
    """A 3D s-wave channel: p*cot(delta) = -1/a + (r/2) p^2, no shape terms.

    ``unitarity=True`` represents the a -> +/-infinity limit symbolically
    (delta = pi/2 at every momentum); it requires r = 0.
    """

    a: float
    r: float = 0.0
    unitarity: bool = False

    def __post_init__(self) -> None:
        if self.unitarity:
            if self.r != 0.0:
                raise ValueError("unitarity channel requires r = 0")
            object.__setattr__(self, "a", math.inf)
        else:
            if not math.isfinite(self.a):
                raise ValueError(
                    "infinite scattering length must use the unitarity flag"
                )
            if not math.isfinite(self.r):
                raise ValueError("effective range must be finite")

    @classmethod
    def at_unitarity(cls) -> "Channel3D":
        return cls(a=math.inf, r=0.0, unitarity=True)

    @property
    def length(self) -> float:
        return self.a


@dataclass(frozen=True)
class Channel2D:
    """A 2D s-wave channel: cot(delta) = (1/pi) log(a2^2 p^2) + sigma2 p^2."""

    a2: float
    sigma2: float = 0.0

    def __post_init__(self) -> None:
        if not (self.a2 > 0.0 and math.isfinite(self.a2)):
            raise ValueError("2D scattering length a2 must be positive and finite")

    @property
    def length(self) -> float:
        return self.a2


@dataclass(frozen=True)
class FamilyTag:
    """Membership of a model in a momentum-inversion-symmetric family."""

    table: str  # "T1", "T2", "T3" or "2D"
    row: int
    lam: float = 1.0

    def __post_init__(self) -> None:
        if self.table not in ("T1", "T2", "T3", "2D"):
            raise ValueError(f"unknown table {self.table!r}")
        if self.lam <= 0.0:
            raise ValueError("lambda must be positive")
        rows = {"T1": T1_ROWS, "T2": T2_ROWS, "T3": T3_ROWS, "2D": (1,)}[self.table]
        if self.row not in rows:
            raise ValueError(f"table {self.table} has no row {self.row}")


T1_ROWS = (1, 2, 3, 4)
T2_ROWS = (1, 2, 3, 4, 5, 6)
T3_ROWS = (1, 2, 3, 4, 5, 6)

# Sign constraints of the zero-range rows: row -> (sign a0, sign a1).
_T1_SIGNS = {1: (+1, -1), 2: (-1, +1), 3: (-1, -1), 4: (+1, +1)}

# Range-corrected rows: r0, r1 in units of eta = lambda |a0 a1|, written as
# (sign, denominator channel): r = sign * 2 * eta / a_denom.
_T2_RANGE = {
    1: ((-1, 0), (-1, 1)),
    2: ((-1, 0), (+1, 1)),
    3: ((+1, 0), (-1, 1)),
    4: ((+1, 0), (+1, 1)),
    5: ((-1, 1), (-1, 0)),
    6: ((+1, 1), (+1, 0)),
}

# Causal rows: r = sign * 2 * a_src * lambda, valid only when a_src has the
# listed sign (which makes every range <= 0).  Entries: (sign, src, a_src>0?).
_T3_RANGE = {
    1: ((-1, 1, True), (-1, 0, True)),
    2: ((+1, 1, False), (-1, 0, True)),
    3: ((-1, 1, True), (+1, 0, False)),
    4: ((+1, 1, False), (+1, 0, False)),
    5: ((-1, 0, True), (-1, 1, True)),
    6: ((+1, 0, False), (+1, 1, False)),
}


@dataclass(frozen=True)
class TwoChannelModel:
    """Two independent s-wave channels plus optional family membership."""

    dimension: int
    singlet: Channel3D | Channel2D
    triplet: Channel3D | Channel2D
    family: FamilyTag | None = field(default=None)

    def __post_init__(self) -> None:
        if self.dimension not in (2, 3):
            raise ValueError("dimension must be 2 or 3")
        want = Channel3D if self.dimension == 3 else Channel2D
        for name, ch in (("singlet", self.singlet), ("triplet", self.triplet)):
            if not isinstance(ch, want):
                raise ValueError(f"{name} channel must be {want.__name__}")
        if self.family is not None:
            self._check_family()

    def _check_family(self) -> None:
        tag = self.family
        if self.dimension == 2:
            if tag.table != "2D":
                raise ValueError("2D models must use the 2D family table")
            return
        if tag.table == "2D":
            raise ValueError("3D models cannot use the 2D family table")
        a0, a1 = self.singlet.a, self.triplet.a
        r0_want, r1_want = _family_ranges(tag.table, tag.row, a0, a1, tag.lam)
        for got, want in ((self.singlet.r, r0_want), (self.triplet.r, r1_want)):
            scale = max(abs(want), 1.0)
            if abs(got - want) > 1e-12 * scale:
                raise ValueError(
                    f"channel ranges ({self.singlet.r}, {self.triplet.r}) do not "
                    f"match {tag.table} row {tag.row} correlation "
                    f"({r0_want}, {r1_want})"
                )

    @property
    def channels(self) -> tuple:
        return (self.singlet, self.triplet)


def _family_ranges(
    table: str, row: int, a0: float, a1: float, lam: float
) -> tuple[float, float]:
    """Effective ranges dictated by a family row (sign constraints checked)."""
    if table == "T1":
        s0, s1 = _T1_SIGNS[row]
        for label, a, s in (("a0", a0, s0), ("a1", a1, s1)):
            cond = "<0" if s < 0 else ">0"
            if a * s <= 0:
                raise ValueError(f"T1 row {row} requires ({label}{cond}); got {label}={a}")
        return 0.0, 0.0
    if table == "T2":
        eta = lam * abs(a0 * a1)
        (sg0, d0), (sg1, d1) = _T2_RANGE[row]
        dens = (a0, a1)
        return sg0 * 2.0 * eta / dens[d0], sg1 * 2.0 * eta / dens[d1]
    if table == "T3":
        sources = (a0, a1)
        out = []
        for sg, src, positive in _T3_RANGE[row]:
            a_src = sources[src]
            label = f"a{src}"
            if positive and a_src <= 0:
                raise ValueError(f"T3 row {row} requires ({label}>0); got {label}={a_src}")
            if not positive and a_src >= 0:
                raise ValueError(f"T3 row {row} requires ({label}<0); got {label}={a_src}")
            out.append(sg * 2.0 * a_src * lam)
        return tuple(out)
    raise ValueError(f"unknown table {table!r}")


def make_symmetric_model(
    table: str, row: int, a0: float, a1: float, lam: float = 1.0
) -> TwoChannelModel:
    """Build a 3D model from a momentum-inversion-symmetry table row.

    ``lam`` is the inversion parameter lambda (> 0); it is ignored for table
    T1, whose inversion is the lambda-free ``p -> 1/(|a0 a1| p)``.  Sign
    constraints of the chosen row are enforced and violations rejected with
    the row's parenthetical condition.
    """
    if table == "T1":
        lam = 1.0
    tag = FamilyTag(table=table, row=row, lam=lam)
    if a0 == 0.0 or a1 == 0.0:
        raise ValueError("scattering lengths must be nonzero")
    r0, r1 = _family_ranges(table, row, a0, a1, lam)
    return TwoChannelModel(
        dimension=3,
        singlet=Channel3D(a=a0, r=r0),
        triplet=Channel3D(a=a1, r=r1),
        family=tag,
    )


def make_2d_model(
    a2_0: float, a2_1: float, sigma2_0: float = 0.0, sigma2_1: float = 0.0
) -> TwoChannelModel:
    """Build a 2D model, tagged with the 2D inversion family ``p -> 1/(a0 a1 p)``."""
    return TwoChannelModel(
        dimension=2,
        singlet=Channel2D(a2=a2_0, sigma2=sigma2_0),
        triplet=Channel2D(a2=a2_1, sigma2=sigma2_1),
        family=FamilyTag(table="2D", row=1, lam=1.0),
    )


# ---------------------------------------------------------------------------
# Phase shifts and their momentum derivatives
# ---------------------------------------------------------------------------


def _phase_3d_channel(ch: Channel3D, p):
    """Continuous-branch phase 2*delta for one 3D channel.

    Writing the momentum-dependent scattering length a(p) = a/(1 - a r p^2/2),
    the phase is -2*arctan(a(p) p).  Using the two-argument arctangent on the
    pair (a p, 1 - a r p^2 / 2) keeps the value continuous across the
    denominator zero (where the phase passes -/+ pi), so the returned value is
    already unwrapped: it runs from 0 at threshold into (-2pi, 2pi).
    """
    p = np.asarray(p, dtype=float)
    if np.any(p < 0):
        raise ValueError("momentum must be >= 0")
    if ch.unitarity:
        return np.full_like(p, np.pi)[()]
    denom = 1.0 - 0.5 * ch.a * ch.r * p * p
    return (-2.0 * np.arctan2(ch.a * p, denom))[()]


def _tangent_3d_channel(ch: Channel3D, p):
    """Analytic d(phase)/dp for one 3D channel, valid across the ERE pole."""
    p = np.asarray(p, dtype=float)
    if ch.unitarity:
        return np.zeros_like(p)[()]
    a, r = ch.a, ch.r
    denom = 1.0 - 0.5 * a * r * p * p
    num = 1.0 + 0.5 * a * r * p * p
    q = denom * denom + a * a * p * p
    return (-2.0 * a * num / q)[()]


def _second_3d_channel(ch: Channel3D, p):
    """Analytic d^2(phase)/dp^2 for one 3D channel."""
    p = np.asarray(p, dtype=float)
    if ch.unitarity:
        return np.zeros_like(p)[()]
    a, r = ch.a, ch.r
    denom = 1.0 - 0.5 * a * r * p * p
    num = 1.0 + 0.5 * a * r * p * p
    q = denom * denom + a * a * p * p
    return (-2.0 * a * a * p * (r * q - 2.0 * num * (a - r * denom)) / (q * q))[()]


def _phase_2d_channel(ch: Channel2D, p):
    """Continuous-branch 2D phase 2*delta in (0, 2pi), increasing in p.

    cot(delta) = (1/pi) log(a2^2 p^2); the branch is fixed so the phase runs
    from 0 at threshold to 2pi at infinite momentum.  p = 0 returns the
    threshold limit 0 exactly (the log itself is singular there).
    """
    if ch.sigma2 != 0.0:
        raise ValueError("phase formula applies to sigma2 = 0 (scattering-length approximation)")
    p = np.asarray(p, dtype=float)
    if np.any(p < 0):
        raise ValueError("momentum must be >= 0")
    with np.errstate(divide="ignore"):
        c = (2.0 / np.pi) * np.log(ch.a2 * p)
    return np.where(p > 0, np.pi + 2.0 * np.arctan(c), 0.0)[()]


def _tangent_2d_channel(ch: Channel2D, p):
    p = np.asarray(p, dtype=float)
    if np.any(p <= 0):
        raise ValueError("2D tangent requires p > 0")
    c = (2.0 / np.pi) * np.log(ch.a2 * p)
    t = 1.0 + c * c
    return ((4.0 / np.pi) / (p * t))[()]


def _second_2d_channel(ch: Channel2D, p):
    p = np.asarray(p, dtype=float)
    if np.any(p <= 0):
        raise ValueError("2D second derivative requires p > 0")
    c = (2.0 / np.pi) * np.log(ch.a2 * p)
    t = 1.0 + c * c
    return (-(4.0 / np.pi) * (t + 4.0 * c / np.pi) / (p * p * t * t))[()]


def phase_shifts_3d(model: TwoChannelModel, p):
    """(phi, theta) for a 3D model; continuous (unwrapped) branch in p."""
    if model.dimension != 3:
        raise ValueError("phase_shifts_3d requires a 3D model")
    return _phase_3d_channel(model.singlet, p), _phase_3d_channel(model.triplet, p)


def phase_shifts_2d(model: TwoChannelModel, p):
    """(phi, theta) for a 2D model; each in (0, 2pi), increasing in p."""
    if model.dimension != 2:
        raise ValueError("phase_shifts_2d requires a 2D model")
    return _phase_2d_channel(model.singlet, p), _phase_2d_channel(model.triplet, p)


def phases(model: TwoChannelModel, p):
    """(phi, theta) at momentum p, dispatching on the model dimension."""
    if model.dimension == 3:
        return phase_shifts_3d(model, p)
    return phase_shifts_2d(model, p)


def tangents(model: TwoChannelModel, p):
    """Analytic (dphi/dp, dtheta/dp) at momentum p."""
    if model.dimension == 3:
        return (
            _tangent_3d_channel(model.singlet, p),
            _tangent_3d_channel(model.triplet, p),
        )
    return (
        _tangent_2d_channel(model.singlet, p),
        _tangent_2d_channel(model.triplet, p),
    )


def second_derivatives(model: TwoChannelModel, p):
    """Analytic (d2phi/dp2, d2theta/dp2) at momentum p."""
    if model.dimension == 3:
        return (
            _second_3d_channel(model.singlet, p),
            _second_3d_channel(model.triplet, p),
        )
    return (
        _second_2d_channel(model.singlet, p),
        _second_2d_channel(model.triplet, p),
    )


def s_element(model: TwoChannelModel, channel: int, p):
    """Unit-modulus S-matrix element exp(2 i delta) for one channel.

    For 3D channels the rational form (denom - i a p)/(denom + i a p) with
    denom = 1 - a r p^2 / 2 is used; it stays finite and unit-modulus through
    the zero of the momentum-dependent scattering length's denominator.
    """
    if channel not in (0, 1):
        raise ValueError("channel must be 0 (singlet) or 1 (triplet)")
    ch = model.channels[channel]
    if model.dimension == 2:
        return np.exp(1j * _phase_2d_channel(ch, p))
    p = np.asarray(p, dtype=float)
    if ch.unitarity:
        return np.full_like(p, -1.0 + 0.0j, dtype=complex)[()]
    denom = 1.0 - 0.5 * ch.a * ch.r * p * p
    return ((denom - 1j * ch.a * p) / (denom + 1j * ch.a * p))[()]


def channel_pole_momentum(ch: Channel3D) -> float | None:
    """Real momentum where a(p)'s denominator vanishes, if any: p = sqrt(2/(a r))."""
    if not isinstance(ch, Channel3D) or ch.unitarity:
        return None
    if ch.a * ch.r > 0.0:
        return math.sqrt(2.0 / (ch.a * ch.r))
    return None


def pole_momenta(model: TwoChannelModel) -> list[float]:
    """Sorted real momenta where either channel's ERE denominator vanishes."""
    if model.dimension != 3:
        return []
    out = [channel_pole_momentum(ch) for ch in model.channels]
    return sorted(p for p in out if p is not None)


def quarter_lambda_branch(model: TwoChannelModel) -> str | None:
    """Classify a lambda = 1/4 range-correlated (row 5/6) model.

    Returns "solvable" when both channels satisfy r = +2 a lambda (the branch
    generated by row 6 with equal signs or row 5 with mixed signs), or
    "unsolvable" for the complementary branch r = -2 a lambda, where no
    single-combination geometric potential exists.  Returns None when the
    model is not a lambda = 1/4 row-5/6 family member.
    """
    tag = model.family
    if tag is None or tag.table not in ("T2", "T3") or tag.row not in (5, 6):
        return None
    if abs(tag.lam - 0.25) > 1e-15:
        return None
    lam = tag.lam
    plus = all(
        abs(ch.r - 2.0 * ch.a * lam) <= 1e-12 * max(1.0, abs(ch.r))
        for ch in model.channels
    )
    if plus:
        return "solvable"
    minus = all(
        abs(ch.r + 2.0 * ch.a * lam) <= 1e-12 * max(1.0, abs(ch.r))
        for ch in model.channels
    )
    return "unsolvable" if minus else None

"""Unit-speed non-null curves in E_1^4 and their moving frames.

The frame (F1, F2, F3, F4) is built by Minkowski Gram-Schmidt on the first
three derivatives; F4 completes the tetrad with det(F1,F2,F3,F4) = +1, which
fixes the sign of k3. Curvatures: k1 = eps2<F1',F2> > 0, k2 = eps3<F2',F3> > 0
by construction, k3 = eps4<F3',F4> signed. The frame vectors satisfy

    F1' = k1 F2
    F2' = eps3 eps4 k1 F1 + k2 F3
    F3' = eps1 eps4 k2 F2 + k3 F4
    F4' = eps1 eps2 k3 F3
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from . import expr as ex
from .errors import (DomainError, FrameDegenerateError, NonUnitSpeedError,
                     NullResidualError, OutOfDomainError)
from .minkowski import (E1, E2, E3, E4, TAU_NULL, Vec4, inner, norm,
                        triple_cross)

TAU_K = 1e-8            # curvature degeneracy threshold
TOL_UNIT_SYMBOLIC = 1e-10
TOL_UNIT_FD = 1e-6
TOL_FRAME = 1e-8
MAX_DERIVATIVE_ORDER = 4


@dataclass(frozen=True)
class DerivativeMode:
    """Symbolic differentiation or central finite differences of width h."""

    kind: str = "symbolic"          # "symbolic" | "finite_difference"
    step: float = 1e-4

    def __post_init__(self):
        if self.kind not in ("symbolic", "finite_difference"):
            raise ValueError(f"bad derivative mode {self.kind!r}")


SYMBOLIC = DerivativeMode("symbolic")


def finite_difference(step: float = 1e-4) -> DerivativeMode:
    return DerivativeMode("finite_difference", step)


@dataclass(frozen=True)
class FrenetFrame:
    """Orthonormal tetrad with signs and curvatures at one parameter value."""

    f1: Vec4
    f2: Vec4
    f3: Vec4
    f4: Vec4
    eps: tuple[int, int, int, int]
    k1: float
    k2: float
    k3: float

    @property
    def frame_type(self) -> int:
        """Index j of the unique timelike frame vector (eps_j = -1)."""
        return self.eps.index(-1) + 1

    @property
    def vectors(self) -> tuple[Vec4, Vec4, Vec4, Vec4]:
        return (self.f1, self.f2, self.f3, self.f4)


@dataclass(frozen=True)
class UnitSpeedReport:
    max_deviation: float
    tolerance: float
    passed: bool
    n_samples: int


def _euclid_sq(v: Vec4) -> float:
    return v.x1 * v.x1 + v.x2 * v.x2 + v.x3 * v.x3 + v.x4 * v.x4


def _is_null_residual(v: Vec4) -> bool:
    return abs(inner(v, v)) <= TAU_NULL * max(1.0, _euclid_sq(v))


class CurveSpec:
    """An analytic curve s -> (x1(s), x2(s), x3(s), x4(s)) on a closed interval.

    The curve is expected to be unit speed (|<b',b'>| = 1); this is validated
    where it matters (frenet, verify_unit_speed), never silently fixed by
    reparametrization.
    """

    def __init__(self, components, domain, mode: DerivativeMode = SYMBOLIC):
        comps = tuple(ex.parse(c) if isinstance(c, str) else c for c in components)
        if len(comps) != 4:
            raise ValueError("a curve needs exactly 4 components")
        smin, smax = float(domain[0]), float(domain[1])
        if not smin < smax:
            raise ValueError(f"empty domain [{smin}, {smax}]")
        self.components = comps
        self.domain = (smin, smax)
        self.mode = mode
        # compiled component derivatives, order 0..4, built lazily per order
        self._compiled: dict[int, tuple] = {}
        self._exprs: dict[int, tuple] = {0: comps}

    # -- evaluation ---------------------------------------------------------

    def _fns(self, order):
        if order not in self._compiled:
            if order not in self._exprs:
                prev = self._exprs[order - 1] if order - 1 in self._exprs else None
                if prev is None:
                    self._fns(order - 1)
                    prev = self._exprs[order - 1]
                self._exprs[order] = tuple(ex.differentiate(c) for c in prev)
            self._compiled[order] = tuple(ex.compile_expr(c) for c in self._exprs[order])
        return self._compiled[order]

    def _eval_order(self, s, order):
        fns = self._fns(order)
        try:
            return Vec4(fns[0](s), fns[1](s), fns[2](s), fns[3](s))
        except (ValueError, OverflowError, ZeroDivisionError) as exc:
            raise DomainError(f"curve evaluation failed at s={s!r}: {exc}") from exc

    def _check_domain(self, s, margin=0.0):
        # analytic components extend smoothly; allow a small overhang so FD
        # stencils centered on the domain boundary stay evaluable
        smin, smax = self.domain
        overhang = 1e-3 * (smax - smin) + 1e-12
        if not (smin - overhang <= s - margin and s + margin <= smax + overhang):
            raise OutOfDomainError(
                f"s={s!r} (stencil margin {margin:g}) outside domain [{smin}, {smax}]")

    def point(self, s: float) -> Vec4:
        self._check_domain(s)
        return self._eval_order(s, 0)

    def derivatives(self, s: float, order: int) -> list[Vec4]:
        """[b'(s), ..., b^(order)(s)] by symbolic or FD differentiation."""
        if not 1 <= order <= MAX_DERIVATIVE_ORDER:
            raise ValueError(f"order must be 1..{MAX_DERIVATIVE_ORDER}")
        if self.mode.kind == "symbolic":
            self._check_domain(s)
            return [self._eval_order(s, k) for k in range(1, order + 1)]
        h = self.mode.step
        self._check_domain(s, margin=2 * h)
        f = lambda x: self._eval_order(x, 0)
        fm2, fm1, f0, fp1, fp2 = (f(s - 2 * h), f(s - h), f(s), f(s + h), f(s + 2 * h))
        out = [(fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) * (1.0 / (12 * h))]
        if order >= 2:
            out.append((-1.0 * fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) * (1.0 / (12 * h * h)))
        if order >= 3:
            out.append((-1.0 * fm2 + 2.0 * fm1 - 2.0 * fp1 + fp2) * (1.0 / (2 * h ** 3)))
        if order >= 4:
            out.append((fm2 - 4.0 * fm1 + 6.0 * f0 - 4.0 * fp1 + fp2) * (1.0 / h ** 4))
        return out[:order]

    @property
    def unit_speed_tolerance(self) -> float:
        return TOL_UNIT_SYMBOLIC if self.mode.kind == "symbolic" else TOL_UNIT_FD

    # -- frames -------------------------------------------------------------

    def frenet(self, s: float) -> FrenetFrame:
        """Moving frame at s; requires k1, k2 > TAU_K and non-null residuals."""
        d = self.derivatives(s, 4)
        f1 = d[0]
        q1 = inner(f1, f1)
        if abs(abs(q1) - 1.0) > 10 * self.unit_speed_tolerance:
            raise NonUnitSpeedError(f"<b',b'> = {q1:.6g} at s={s!r}; curve is not unit speed")
        if _is_null_residual(f1):
            raise NullResidualError(f"tangent is null at s={s!r}")
        e1 = 1 if q1 > 0 else -1

        rho2 = d[1] - (e1 * inner(d[1], f1)) * f1
        if _is_null_residual(rho2):
            if norm(rho2) <= TAU_K:
                raise FrameDegenerateError(f"k1 vanishes at s={s!r}")
            raise NullResidualError(f"principal normal direction is null at s={s!r}")
        k1 = norm(rho2)
        if k1 <= TAU_K:
            raise FrameDegenerateError(f"k1 = {k1:.3g} <= {TAU_K:g} at s={s!r}")
        f2 = rho2 * (1.0 / k1)
        e2 = 1 if inner(f2, f2) > 0 else -1

        rho3 = d[2] - (e1 * inner(d[2], f1)) * f1 - (e2 * inner(d[2], f2)) * f2
        if _is_null_residual(rho3):
            if norm(rho3) / k1 <= TAU_K:
                raise FrameDegenerateError(f"k2 vanishes at s={s!r}")
            raise NullResidualError(f"binormal direction is null at s={s!r}")
        k2 = norm(rho3) / k1
        if k2 <= TAU_K:
            raise FrameDegenerateError(f"k2 = {k2:.3g} <= {TAU_K:g} at s={s!r}")
        f3 = rho3 * (1.0 / norm(rho3))
        e3 = 1 if inner(f3, f3) > 0 else -1

        cross = triple_cross(f1, f2, f3)
        e4 = 1 if inner(cross, cross) > 0 else -1
        f4 = cross * (-e4 / norm(cross))       # det(F1,F2,F3,F4) = +1
        k3 = e4 * inner(d[3], f4) / (k1 * k2)

        eps = (e1, e2, e3, e4)
        if eps.count(-1) != 1:
            raise NullResidualError(f"frame signs {eps} at s={s!r}: not a Lorentz tetrad")
        return FrenetFrame(f1, f2, f3, f4, eps, k1, k2, k3)

    def is_straight(self, n_samples: int = 16) -> bool:
        """True when b'' vanishes across the domain (within TAU_K)."""
        smin, smax = self.domain
        for i in range(n_samples):
            s = smin + (smax - smin) * i / (n_samples - 1)
            d2 = self.derivatives(s, 2)[1]
            if math.sqrt(_euclid_sq(d2)) > TAU_K:
                return False
        return True

    def frame_for_line(self, s: float | None = None) -> FrenetFrame:
        """Constant frame for a straight (k1 = 0) non-null curve.

        F2..F4 are completed from the canonical basis by Gram-Schmidt in the
        order e1, e2, e3, e4, skipping near-parallel and null residuals.
        """
        smin, smax = self.domain
        s0 = 0.5 * (smin + smax) if s is None else s
        f1 = self.derivatives(s0, 1)[0]
        q1 = inner(f1, f1)
        if abs(abs(q1) - 1.0) > 10 * self.unit_speed_tolerance:
            raise NonUnitSpeedError(f"<b',b'> = {q1:.6g}; line is not unit speed")
        if _is_null_residual(f1):
            raise NullResidualError("line direction is null")
        frame = [f1]
        eps = [1 if q1 > 0 else -1]
        for cand in (E1, E2, E3, E4):
            if len(frame) == 3:
                break
            rho = cand
            for f, e in zip(frame, eps):
                rho = rho - (e * inner(rho, f)) * f
            if _euclid_sq(rho) < 1e-12 or _is_null_residual(rho):
                continue
            rho = rho * (1.0 / norm(rho))
            frame.append(rho)
            eps.append(1 if inner(rho, rho) > 0 else -1)
        if len(frame) != 3:
            raise NullResidualError("could not complete a non-null frame for the line")
        cross = triple_cross(frame[0], frame[1], frame[2])
        e4 = 1 if inner(cross, cross) > 0 else -1
        f4 = cross * (-e4 / norm(cross))
        eps.append(e4)
        if tuple(eps).count(-1) != 1:
            raise NullResidualError(f"frame signs {tuple(eps)}: not a Lorentz tetrad")
        return FrenetFrame(frame[0], frame[1], frame[2], f4, tuple(eps), 0.0, 0.0, 0.0)

    def frame(self, s: float) -> FrenetFrame:
        """frenet(s), falling back to the constant line frame when k1 = 0."""
        try:
            return self.frenet(s)
        except FrameDegenerateError:
            if self.is_straight():
                return self.frame_for_line()
            raise

    def verify_unit_speed(self, n_samples: int = 100) -> UnitSpeedReport:
        """Report max | |<b',b'>| - 1 | over an even sample of the domain."""
        if n_samples < 2:
            raise ValueError("n_samples must be >= 2")
        smin, smax = self.domain
        worst = 0.0
        for i in range(n_samples):
            s = smin + (smax - smin) * i / (n_samples - 1)
            d1 = self.derivatives(s, 1)[0]
            worst = max(worst, abs(abs(inner(d1, d1)) - 1.0))
        tol = self.unit_speed_tolerance
        return UnitSpeedReport(worst, tol, worst <= tol, n_samples)

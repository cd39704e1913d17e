"""Degrees and signs of the geometric-homology operations.

A geometric class ``[P, a, f]`` enters only through three integers:
``dimP``, the cohomological degree ``codeg = |a|`` of ``a``, and the
dimension ``ambient_d`` of the target manifold.  Signs are exponents mod 2.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .errors import AmbientMismatch, BadParameter, BadSphereDim, BoundExceeded, QMustBePositive
from .reports import AuditReport

MAX_AUDIT_PARAM = 8


@dataclass(frozen=True)
class FormalCycleDegree:
    dimP: int
    codeg: int
    ambient_d: int = 0

    def __post_init__(self):
        for name in ("dimP", "codeg", "ambient_d"):
            if getattr(self, name) < 0:
                raise BadParameter(f"{name} must be >= 0, got {getattr(self, name)}")

    @property
    def degree(self) -> int:
        """Degree ``dimP - codeg`` of the geometric class; may be negative."""
        return self.dimP - self.codeg

    @property
    def shifted_degree(self) -> int:
        """Degree in the loop-homology grading ``H'_{* + d}``."""
        return self.dimP - self.codeg - self.ambient_d


@dataclass(frozen=True)
class SignedDegreeResult:
    degree: int
    sign_exponent: int

    def __post_init__(self):
        if self.sign_exponent not in (0, 1):
            raise BadParameter(f"sign exponent must be 0 or 1, got {self.sign_exponent}")

    @property
    def sign(self) -> int:
        return -1 if self.sign_exponent else 1


class _Zero:
    """The zero class, returned where an operation kills its input."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "ZERO"

    def __bool__(self) -> bool:
        return False


ZERO = _Zero()


def _shared_ambient(x: FormalCycleDegree, y: FormalCycleDegree) -> int:
    if x.ambient_d != y.ambient_d:
        raise AmbientMismatch(f"ambient dimensions differ: {x.ambient_d} != {y.ambient_d}")
    return x.ambient_d


def _check_sphere(sphere_dim: int) -> None:
    if sphere_dim not in (1, 3):
        raise BadSphereDim(f"sphere dimension must be 1 or 3, got {sphere_dim}")


def cap_degree(u_deg: int, cycle: FormalCycleDegree) -> SignedDegreeResult:
    """``u cap [P,a,f] = [P, f*u cup a, f]``: the class degree drops by ``u_deg``."""
    if u_deg < 0:
        raise BadParameter(f"cohomology degree must be >= 0, got {u_deg}")
    return SignedDegreeResult(cycle.degree - u_deg, 0)


def gysin(cycle: FormalCycleDegree, codim: int) -> SignedDegreeResult:
    """Pull-back along a codimension ``codim`` orientable morphism."""
    if codim < 0:
        raise BadParameter(f"codimension must be >= 0, got {codim}")
    return SignedDegreeResult(cycle.degree - codim, (codim * cycle.codeg) % 2)


def cross_sign(x: FormalCycleDegree, y: FormalCycleDegree) -> SignedDegreeResult:
    """Cross product ``[P,a,f] x [Q,b,g]`` carries the sign ``(-1)^(dimP |b|)``."""
    return SignedDegreeResult(x.degree + y.degree, (x.dimP * y.codeg) % 2)


def cross_swap_exponent(x: FormalCycleDegree, y: FormalCycleDegree) -> int:
    """Exponent ``e`` in ``tau_*(x cross y) = (-1)^e (y cross x)``.

    Assembled from its geometric pieces: the two cross-product prefactors,
    the orientation change of ``P x Q -> Q x P`` and the graded swap of
    ``a x b``.  Graded commutativity predicts ``degree(x) * degree(y)``.
    """
    prefactors = cross_sign(x, y).sign_exponent + cross_sign(y, x).sign_exponent
    reorient = x.dimP * y.dimP
    cup_swap = x.codeg * y.codeg
    return (prefactors + reorient + cup_swap) % 2


def loop_product(x: FormalCycleDegree, y: FormalCycleDegree) -> SignedDegreeResult:
    """Degree ``|x| + |y| - d`` and sign ``d(|a| + |b|) + dimP |b|``."""
    d = _shared_ambient(x, y)
    exponent = (d * (x.codeg + y.codeg) + x.dimP * y.codeg) % 2
    return SignedDegreeResult(x.degree + y.degree - d, exponent)


def delta(cycle: FormalCycleDegree, sphere_dim: int = 1) -> SignedDegreeResult:
    """Sweep a family by the sphere action: degree up by ``sphere_dim``, sign ``|a|``."""
    _check_sphere(sphere_dim)
    return SignedDegreeResult(cycle.degree + sphere_dim, cycle.codeg % 2)


def bracket_degree(x: FormalCycleDegree, y: FormalCycleDegree) -> SignedDegreeResult:
    d = _shared_ambient(x, y)
    exponent = ((d + 1) * (x.codeg + y.codeg) + x.dimP * y.codeg) % 2
    return SignedDegreeResult(x.degree + y.degree - d + 1, exponent)


def intersection_morphism(cycle: FormalCycleDegree):
    """Restriction to based loops; classes with ``|a| > 0`` go to ``ZERO``."""
    if cycle.codeg > 0:
        return ZERO
    return SignedDegreeResult(cycle.degree - cycle.ambient_d, (cycle.ambient_d * cycle.codeg) % 2)


def mu_degree(g: int, p: int, q: int, n: int, d: int) -> int:
    """Degree shift ``chi * d + n`` of the operation of a degree-``n`` family of type (g;p,q)."""
    if q <= 0:
        raise QMustBePositive(f"operations need q > 0, got q={q}")
    if g < 0 or p < 1 or n < 0 or d < 0:
        raise BadParameter(f"need g >= 0, p >= 1, n >= 0, d >= 0; got g={g} p={p} n={n} d={d}")
    return (2 - 2 * g - p - q) * d + n


def string_bracket_degrees(i: int, j: int, d: int, sphere_dim: int = 1) -> dict[str, int]:
    """Degree offsets of the Gysin-sequence maps and of the equivariant bracket.

    Degrees are unshifted geometric degrees: ``E`` preserves degree, ``c``
    caps with the Euler class (degree ``sphere_dim + 1``), ``M`` sweeps by
    the sphere.  The bracket ``E(M(x) . M(y))`` of classes of degrees ``i``
    and ``j`` lands in degree ``i + j + 2 * sphere_dim - d``.
    """
    _check_sphere(sphere_dim)
    m = sphere_dim
    bracket = (i + m) + (j + m) - d
    return {
        "E": 0,
        "c": -(sphere_dim + 1),
        "M": m,
        "bracket": bracket,
        "bracket_offset": bracket - i - j,
    }


# -- audits -------------------------------------------------------------------------

def swap_exponent_intersection(dimP: int, a: int, dimQ: int, b: int, d: int) -> int:
    """Swap exponent printed with the intersection product: ``(d-dimP-a)(d-dimQ-b)``."""
    return ((d - dimP - a) * (d - dimQ - b)) % 2


def swap_exponent_loop_proof(dimP: int, a: int, dimQ: int, b: int, d: int) -> int:
    """Swap exponent printed in the loop-product commutativity proof: ``(dimP-d-a)(dimP-d-b)``."""
    return ((dimP - d - a) * (dimP - d - b)) % 2


def required_swap_exponent(dimP: int, a: int, dimQ: int, b: int, d: int) -> int:
    """Exponent forced on the swapped intersection class by graded commutativity.

    ``x . y = (-1)^{s1} [P*Q]`` and ``y . x = (-1)^{s2} [Q*P]``; demanding
    ``x . y = (-1)^{|x||y|} y . x`` in shifted degrees forces
    ``[P*Q] = (-1)^{s1 + s2 + |x||y|} [Q*P]``.
    """
    x = FormalCycleDegree(dimP, a, d)
    y = FormalCycleDegree(dimQ, b, d)
    s1 = loop_product(x, y).sign_exponent
    s2 = loop_product(y, x).sign_exponent
    return (s1 + s2 + x.shifted_degree * y.shifted_degree) % 2


DISCREPANCY_POLYNOMIAL = "dimP*b + dimQ*a"
AUDIT_IDENTITY = "E_req = (d-dimP-a)(d-dimQ-b) + dimP*b + dimQ*a  (mod 2)"


def commutativity_audit(max_param: int) -> AuditReport:
    """Compare the forced swap exponent with the printed conventions on a grid.

    Every ``(dimP, a, dimQ, b, d)`` in ``[0, max_param]^5`` is evaluated.
    The report's pass/fail verdict is about the identity
    ``E_req = E_35 + dimP*b + dimQ*a``; the tuples where ``E_req`` and the
    intersection-product exponent ``E_35`` disagree are listed separately
    under ``discrepancies``.
    """
    if max_param > MAX_AUDIT_PARAM:
        raise BoundExceeded(f"max_param={max_param} exceeds {MAX_AUDIT_PARAM}")
    if max_param < 0:
        raise BadParameter("max_param must be >= 0")
    failures = []
    discrepancies = []
    loop_proof_disagreements = 0
    checked = 0
    grid = range(max_param + 1)
    for dimP, a, dimQ, b, d in product(grid, repeat=5):
        checked += 1
        params = {"dimP": dimP, "a": a, "dimQ": dimQ, "b": b, "d": d}
        req = required_swap_exponent(dimP, a, dimQ, b, d)
        e_int = swap_exponent_intersection(dimP, a, dimQ, b, d)
        predicted = (e_int + dimP * b + dimQ * a) % 2
        if predicted != req:
            failures.append({"params": params, "expected": predicted, "actual": req})
        if req != e_int:
            discrepancies.append({"params": params, "expected": req, "actual": e_int})
        if req != swap_exponent_loop_proof(dimP, a, dimQ, b, d):
            loop_proof_disagreements += 1
    return AuditReport(
        kind="commutativity-audit",
        checked=checked,
        failures=failures,
        extra={
            "max_param": max_param,
            "identity": AUDIT_IDENTITY,
            "discrepancy_polynomial": DISCREPANCY_POLYNOMIAL,
            "discrepancy_count": len(discrepancies),
            "discrepancies": discrepancies,
            "loop_proof_convention_disagreements": loop_proof_disagreements,
        },
    )


def cross_swap_audit(max_param: int = 6) -> AuditReport:
    """Check the cross-product swap law exponent against ``deg x * deg y`` on a grid."""
    if max_param > MAX_AUDIT_PARAM:
        raise BoundExceeded(f"max_param={max_param} exceeds {MAX_AUDIT_PARAM}")
    failures = []
    checked = 0
    grid = range(max_param + 1)
    for dimP, a, dimQ, b in product(grid, repeat=4):
        checked += 1
        x, y = FormalCycleDegree(dimP, a), FormalCycleDegree(dimQ, b)
        expected = (x.degree * y.degree) % 2
        actual = cross_swap_exponent(x, y)
        if expected != actual:
            failures.append({"params": {"dimP": dimP, "a": a, "dimQ": dimQ, "b": b},
                             "expected": expected, "actual": actual})
    return AuditReport(kind="cross-swap-audit", checked=checked, failures=failures,
                       extra={"max_param": max_param})

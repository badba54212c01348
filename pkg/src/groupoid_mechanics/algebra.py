"""Convolution *-algebra of a finite groupoid and its states.

Under the counting measure the integrable functions on a finite groupoid
form a finite-dimensional *-algebra: convolution sums a product over each
target fiber, the involution conjugates and inverts, and the left regular
action gives a faithful matrix representation.  Functions of positive type
yield states; the distinguished family built from a probability density and
an additive action functional is implemented in
:func:`dirac_feynman_function`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .groupoid import (
    FiniteGroupoid,
    GroupoidFunction,
    Measure,
    counting_measure,
)

__all__ = [
    "convolve",
    "involution",
    "convolution_operator",
    "positivity_form",
    "PositiveTypeReport",
    "positive_type_report",
    "is_positive_type",
    "ActionFunctionalData",
    "LogLikeViolation",
    "LogLikeReport",
    "loglike_validate",
    "loglike_potential",
    "dirac_feynman_function",
    "StateEvaluation",
    "state_evaluate",
]


def _resolve_measure(groupoid: FiniteGroupoid, measure: Measure | None) -> Measure:
    if measure is None:
        return counting_measure(groupoid)
    if measure.groupoid != groupoid:
        raise ValueError("measure belongs to a different groupoid")
    return measure


def _same_groupoid(*functions: GroupoidFunction) -> FiniteGroupoid:
    g = functions[0].groupoid
    for f in functions[1:]:
        if f.groupoid != g:
            raise ValueError("functions live on different groupoids")
    return g


def convolve(
    f: GroupoidFunction, g: GroupoidFunction, measure: Measure | None = None
) -> GroupoidFunction:
    """Convolution product ``(f * g)(a) = sum_g f(g) g(g^-1 o a) w(g)``
    where ``g`` runs over the morphisms sharing the target of ``a``.

    On a pair groupoid this is exactly matrix multiplication of the value
    matrices; on a one-object group groupoid it is the group convolution.
    """
    gpd = _same_groupoid(f, g)
    nu = _resolve_measure(gpd, measure)
    a_idx, g_idx, r_idx = gpd._conv_plan()
    out = np.zeros(gpd.n_morphisms, dtype=complex)
    np.add.at(out, a_idx, f.values[g_idx] * g.values[r_idx] * nu.weight[g_idx])
    return GroupoidFunction(gpd, out)


def involution(f: GroupoidFunction, measure: Measure | None = None) -> GroupoidFunction:
    """The *-operation ``f*(a) = conj(f(a^-1)) modular(a^-1)``.

    With the counting measure the modular factor is one and the value
    matrix of ``f*`` on a pair groupoid is the conjugate transpose of the
    value matrix of ``f``.
    """
    gpd = f.groupoid
    nu = _resolve_measure(gpd, measure)
    inv = np.asarray(gpd.inverse, dtype=np.intp)
    vals = np.conj(f.values[inv]) * nu.modular[inv]
    return GroupoidFunction(gpd, vals)


def convolution_operator(
    f: GroupoidFunction, measure: Measure | None = None
) -> np.ndarray:
    """Matrix of the left convolution action ``psi -> (modular^(1/2) f) * psi``
    on C^K.

    For the counting measure this representation is multiplicative
    (``T_{f*g} = T_f T_g``) and maps the involution to the conjugate
    transpose.
    """
    gpd = f.groupoid
    nu = _resolve_measure(gpd, measure)
    a_idx, g_idx, r_idx = gpd._conv_plan()
    scaled = np.sqrt(nu.modular) * f.values
    k = gpd.n_morphisms
    mat = np.zeros((k, k), dtype=complex)
    np.add.at(mat, (a_idx, r_idx), scaled[g_idx] * nu.weight[g_idx])
    return mat


def positivity_form(phi: GroupoidFunction, measure: Measure | None = None) -> np.ndarray:
    """The K x K matrix ``Q`` with ``f^H Q f = sum_a (f* * f)(a) phi(a)``.

    ``Q[u, v] = phi(u^-1 o v)`` whenever ``u`` and ``v`` share a target and
    zero otherwise; ``phi`` is of positive type exactly when this matrix is
    Hermitian positive semidefinite.  Only the counting measure is
    supported.
    """
    gpd = phi.groupoid
    nu = _resolve_measure(gpd, measure)
    if not nu.is_counting:
        raise ValueError("the positivity form is implemented for the counting measure")
    k = gpd.n_morphisms
    q = np.zeros((k, k), dtype=complex)
    for y in range(gpd.n_objects):
        fiber = gpd.target_fiber(y)
        for u in fiber:
            iu = gpd.inverse[u]
            for v in fiber:
                q[u, v] = phi.values[gpd.compose[(iu, v)]]
    return q


@dataclass
class PositiveTypeReport:
    min_eigenvalue: float
    hermitian_defect: float
    eigenvalues: np.ndarray = field(repr=False)

    def positive(self, tol: float = 1e-10) -> bool:
        return self.hermitian_defect <= tol and self.min_eigenvalue >= -tol


def positive_type_report(
    phi: GroupoidFunction, measure: Measure | None = None
) -> PositiveTypeReport:
    """Eigenvalue diagnosis of the positivity form of ``phi``."""
    q = positivity_form(phi, measure)
    defect = float(np.max(np.abs(q - q.conj().T))) if q.size else 0.0
    eigs = np.linalg.eigvalsh(0.5 * (q + q.conj().T))
    return PositiveTypeReport(float(eigs.min()), defect, eigs)


def is_positive_type(
    phi: GroupoidFunction, tol: float = 1e-10, measure: Measure | None = None
) -> bool:
    return positive_type_report(phi, measure).positive(tol)


# ---------------------------------------------------------------------------
# action functionals and Dirac-Feynman states


@dataclass(frozen=True)
class ActionFunctionalData:
    """A log-like action functional ``S`` on morphisms together with a
    probability density ``p`` on objects and the scale ``hbar`` that makes
    ``S / hbar`` dimensionless.

    Log-like means additive under composition and antisymmetric under
    inversion; consequently ``S`` vanishes on units.
    """

    S: np.ndarray
    hbar: float
    p: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.S, dtype=float)
        p = np.asarray(self.p, dtype=float)
        s.flags.writeable = False
        p.flags.writeable = False
        object.__setattr__(self, "S", s)
        object.__setattr__(self, "p", p)
        if not self.hbar > 0:
            raise ValueError("hbar must be positive")


@dataclass(frozen=True)
class LogLikeViolation:
    kind: str  # "additivity" or "antisymmetry"
    members: tuple[str, ...]
    defect: float

    def __str__(self):
        return f"[{self.kind}] at {', '.join(self.members)}: defect {self.defect:.3e}"


@dataclass
class LogLikeReport:
    violations: list[LogLikeViolation]
    max_additivity_defect: float
    max_antisymmetry_defect: float

    @property
    def ok(self) -> bool:
        return not self.violations

    def summary(self) -> str:
        if self.ok:
            return "S is log-like"
        head = [f"{len(self.violations)} violation(s):"]
        return "\n".join(head + [f"  {v}" for v in self.violations[:20]])


def loglike_validate(
    groupoid: FiniteGroupoid, S, tol: float = 1e-9
) -> LogLikeReport:
    """Check ``S(b o a) = S(b) + S(a)`` on every composable pair and
    ``S(a^-1) = -S(a)`` on every morphism."""
    s = np.asarray(S, dtype=float)
    if s.shape != (groupoid.n_morphisms,):
        raise ValueError("S must assign a real value to every morphism")
    lab = groupoid.morphisms
    violations = []
    max_add = 0.0
    for (b, a), c in groupoid.compose.items():
        defect = abs(s[c] - s[b] - s[a])
        max_add = max(max_add, defect)
        if defect > tol:
            violations.append(
                LogLikeViolation("additivity", (lab[b], lab[a], lab[c]), defect)
            )
    max_anti = 0.0
    for a in range(groupoid.n_morphisms):
        defect = abs(s[groupoid.inverse[a]] + s[a])
        max_anti = max(max_anti, defect)
        if defect > tol:
            violations.append(
                LogLikeViolation("antisymmetry", (lab[a], lab[groupoid.inverse[a]]), defect)
            )
    return LogLikeReport(violations, max_add, max_anti)


def loglike_potential(
    groupoid: FiniteGroupoid, S, base_object: int = 0
) -> np.ndarray:
    """On a pair-like groupoid, decompose a log-like ``S`` as
    ``S(y, x) = F(y) - F(x)`` with ``F(x) = S`` of the morphism
    ``base -> x``.  ``F`` is unique up to an additive constant."""
    s = np.asarray(S, dtype=float)
    if not groupoid.is_pair_like():
        raise ValueError("potential extraction requires a pair groupoid")
    if not 0 <= base_object < groupoid.n_objects:
        raise ValueError("base object out of range")
    f = np.zeros(groupoid.n_objects)
    for x in range(groupoid.n_objects):
        (m,) = groupoid.morphism_between(base_object, x)
        f[x] = s[m]
    return f


def dirac_feynman_function(
    groupoid: FiniteGroupoid, data: ActionFunctionalData, tol: float = 1e-9
) -> GroupoidFunction:
    """The positive-type function
    ``phi(a) = sqrt(p(source a) p(target a)) exp(i S(a) / hbar)``.

    ``S`` must be log-like and ``p`` a probability density on objects;
    otherwise the input is rejected.
    """
    if data.S.shape != (groupoid.n_morphisms,):
        raise ValueError("S must assign a value to every morphism")
    if data.p.shape != (groupoid.n_objects,):
        raise ValueError("p must assign a value to every object")
    if np.any(data.p < 0):
        raise ValueError("p must be nonnegative")
    if abs(float(data.p.sum()) - 1.0) > tol:
        raise ValueError("p must sum to one")
    report = loglike_validate(groupoid, data.S, tol)
    if not report.ok:
        raise ValueError("S is not log-like: " + report.summary())
    src = np.asarray(groupoid.source, dtype=np.intp)
    tgt = np.asarray(groupoid.target, dtype=np.intp)
    amp = np.sqrt(data.p[src] * data.p[tgt])
    phase = np.exp(1j * data.S / data.hbar)
    return GroupoidFunction(groupoid, amp * phase)


# ---------------------------------------------------------------------------
# states


@dataclass
class StateEvaluation:
    """Result of pairing a function with a positive-type function.

    ``normalized`` is ``value / normalization`` when the normalization
    constant is nonzero and ``None`` when normalization is impossible.
    """

    value: complex
    normalization: complex
    normalized: complex | None

    @property
    def normalizable(self) -> bool:
        return self.normalized is not None


def state_evaluate(
    phi: GroupoidFunction,
    f: GroupoidFunction,
    measure: Measure | None = None,
    zero_tol: float = 1e-12,
) -> StateEvaluation:
    """Evaluate ``rho_phi(f) = sum_a f(a) phi(a) w(a)`` together with the
    normalization constant ``Z = sum_a phi(a) w(a)``."""
    gpd = _same_groupoid(phi, f)
    nu = _resolve_measure(gpd, measure)
    value = complex(np.sum(f.values * phi.values * nu.weight))
    z = complex(np.sum(phi.values * nu.weight))
    normalized = value / z if abs(z) > zero_tol else None
    return StateEvaluation(value, z, normalized)

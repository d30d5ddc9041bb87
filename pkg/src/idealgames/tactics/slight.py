"""The slight-progress instance and its ``(n + 1)``-tactic.

The ground set has two parts. The "finite sets" part ``D`` holds the
subsets of ``lambda = {0, ..., lam - 1}`` of size at most ``finite_bound``
(the finite stand-in for finite subsets of an infinite cardinal), as atoms
``("d", Z)``. The order part holds the points of a finite linear order ``L``
as atoms ``("l", i)``.

``X_alpha`` is the set of ``("d", Z)`` with ``alpha`` not in ``Z``. A set is
in ``J`` when its ``D`` part lies inside at most ``width`` of the
``X_alpha`` and its ``L`` part lies strictly below some point of ``L``; it
is in ``<J>`` under the same rule with all ``lam`` of them allowed. Union
of ``X_alpha`` over ``F`` covers ``D`` exactly when ``|F| > finite_bound``.

ONE's menu holds ``D`` together with an initial segment ``{t < z}`` of
``L``, one member per ``z``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations

from ..errors import ConstructionError, InputError, StructuralError
from ..game import Tactic
from ..ideal import GroundSet
from ..paths import Coloring, FinitePoset, find_bounded_path


@dataclass(frozen=True)
class SlightInstance:
    n: int
    lam: int
    points: int
    coloring: Coloring          # on increasing (n + 1)-tuples of L points
    finite_bound: int = 2
    width: int = 1

    def __post_init__(self):
        if self.n < 1 or self.lam < 1 or self.points < 1:
            raise InputError("n, lambda and the order size must be positive")
        if not 0 <= self.finite_bound < self.lam:
            raise InputError("finite_bound must lie in [0, lambda)")
        if not 1 <= self.width <= self.lam:
            raise InputError("width must lie in [1, lambda]")

    @cached_property
    def d_atoms(self) -> tuple:
        """``("d", Z)`` in canonical order: by size, then lexicographic."""
        return tuple(("d", z) for size in range(self.finite_bound + 1)
                     for z in combinations(range(self.lam), size))

    @cached_property
    def l_atoms(self) -> tuple:
        return tuple(("l", i) for i in range(self.points))

    @cached_property
    def ground(self) -> GroundSet:
        return GroundSet(self.d_atoms + self.l_atoms)

    @property
    def t(self) -> tuple:
        """Bijective enumeration ``t_alpha`` of the ``D`` atoms."""
        return self.d_atoms

    def x_alpha(self, alpha: int) -> frozenset:
        if not 0 <= alpha < self.lam:
            raise InputError(f"alpha {alpha} outside lambda")
        return frozenset(a for a in self.d_atoms if alpha not in a[1])

    def segment(self, z: int) -> frozenset:
        """``L`` part ``{t < z}``."""
        return frozenset(("l", i) for i in range(z))

    @cached_property
    def menu(self) -> tuple:
        d = frozenset(self.d_atoms)
        return tuple(d | self.segment(z) for z in range(self.points))

    def phi(self, u: frozenset) -> int:
        """``z`` with ``U`` cap ``L`` equal to ``{t < z}``."""
        z = sum(1 for a in u if a[0] == "l")
        if u & frozenset(self.l_atoms) != self.segment(z):
            raise InputError("L part is not an initial segment")
        return z

    def alphas_needed(self, x: frozenset) -> int | None:
        """Least number of ``X_alpha`` covering the ``D`` part of ``x``."""
        part = [a[1] for a in x if a[0] == "d"]
        for size in range(self.lam + 1):
            for f in combinations(range(self.lam), size):
                if all(not set(f) <= set(z) for z in part):
                    return size
        return None

    def _l_bounded(self, x) -> bool:
        top = max((a[1] for a in x if a[0] == "l"), default=-1)
        return top < self.points - 1

    def _known(self, x) -> bool:
        return all(a in self.ground.position for a in x)

    def in_J(self, x) -> bool:
        x = frozenset(x)
        need = self.alphas_needed(x) if self._known(x) else None
        return need is not None and need <= self.width and self._l_bounded(x)

    def in_sigma(self, x) -> bool:
        x = frozenset(x)
        need = self.alphas_needed(x) if self._known(x) else None
        return need is not None and self._l_bounded(x)


def validate_witness(inst: SlightInstance, length: int) -> None:
    """The witness coloring must admit no increasing ``length``-path of ``L``
    whose windows use at most ``finite_bound`` colors."""
    found = find_bounded_path(FinitePoset.chain(inst.points), inst.coloring, length,
                              inst.finite_bound)
    if found.path is not None:
        raise StructuralError(f"witness coloring has a {inst.finite_bound}-color path "
                              f"{list(found.path)}")


def build_slight_instance(n: int, lambda_size: int, order_spec: dict):
    """Instance plus the three-clause ``(n + 1)``-tactic.

    ``order_spec`` holds ``points``, ``coloring`` (on ``(n + 1)``-tuples of
    points, values in ``lambda``), ``path_length`` and optionally
    ``finite_bound`` and ``width``.
    """
    inst = SlightInstance(n, lambda_size, order_spec["points"], order_spec["coloring"],
                          order_spec.get("finite_bound", 2), order_spec.get("width", 1))
    if inst.coloring.k != n + 1:
        raise InputError(f"witness coloring has arity {inst.coloring.k}, expected {n + 1}")
    validate_witness(inst, order_spec["path_length"])
    return inst, slight_tactic(inst)


def slight_tactic(inst: SlightInstance) -> Tactic:
    k = inst.n + 1
    ell = frozenset(inst.l_atoms)

    def move(window):
        if len(window) < k:
            return frozenset()
        zs = [inst.phi(u) for u in window]
        if all(a < b for a, b in zip(zs, zs[1:])):
            alpha = inst.coloring(tuple(zs))
        else:
            alpha = _least_new(inst, window)
        if not 0 <= alpha < inst.lam:
            raise ConstructionError("tactic index lies outside lambda", alpha=alpha)
        return inst.x_alpha(alpha) | (ell & window[-1])

    return Tactic(k, move, name="slight")


def _least_new(inst: SlightInstance, window) -> int:
    """Least ``alpha`` with ``t_alpha`` in some ``U_{i+1} - U_i``."""
    new = frozenset().union(*(b - a for a, b in zip(window, window[1:])))
    for alpha, t in enumerate(inst.t):
        if t in new:
            return alpha
    raise ConstructionError("no new finite-set atom in a non-increasing window")

"""Exact inference: joint probabilities, marginals, and conditional queries.

Two independent engines answer the same questions:

* enumeration — a direct sum over completions of the chain-rule product.
  Simple enough to audit by hand; exponential in the number of free
  variables, so it doubles as the oracle for everything else.
* variable elimination — numpy factor tables, min-degree elimination order
  with lexicographic tie-breaking. Exact, and fast enough for the network
  sizes this package targets.

Evidence is given as ``{variable: state}``; the elimination path additionally
accepts a *set* of allowed states per variable, which is what conditioning on
a negated logic-program atom needs.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import AbstractSet, Mapping, Sequence

import numpy as np

from .errors import (
    QueryEvidenceOverlap,
    UnknownState,
    UnknownVariable,
    ZeroProbabilityEvidence,
)
from .model import BayesianNetwork, topological_order

NEGATIVE_NOISE_FLOOR = -1e-12

Constraints = Mapping[str, "AbstractSet[str] | str"]


@dataclass(frozen=True)
class QueryResult:
    """A conditional-query answer plus the engine that produced it."""

    probability: float
    method: str


# ---------------------------------------------------------------------------
# compiled index tables (shared by both engines)
# ---------------------------------------------------------------------------


class _Tables:
    """Integer-indexed view of a network for tight inner loops."""

    __slots__ = ("order", "pos", "card", "state_idx", "parent_pos", "strides", "probs")

    def __init__(self, network: BayesianNetwork):
        self.order: tuple[str, ...] = tuple(topological_order(network))
        self.pos: dict[str, int] = {v: i for i, v in enumerate(self.order)}
        self.card: list[int] = [len(network.states(v)) for v in self.order]
        self.state_idx: dict[str, dict[str, int]] = {
            v: {s: i for i, s in enumerate(network.states(v))} for v in self.order
        }
        self.parent_pos: list[tuple[int, ...]] = []
        self.strides: list[tuple[int, ...]] = []
        self.probs: list[list[tuple[float, ...]]] = []
        for v in self.order:
            cpt = network.cpts[v]
            self.parent_pos.append(tuple(self.pos[p] for p in cpt.parents))
            # mixed-radix strides: row index = sum(state_index(parent) * stride)
            strides = []
            acc = 1
            for p in reversed(cpt.parents):
                strides.append(acc)
                acc *= len(network.states(p))
            self.strides.append(tuple(reversed(strides)))
            rows = []
            for key in itertools.product(*(network.states(p) for p in cpt.parents)):
                rows.append(tuple(cpt.rows[key]))
            self.probs.append(rows)

    def resolve(self, assignment: Mapping[str, str]) -> dict[int, int]:
        """Map {variable: state} to {position: state index}, checking names."""

        out: dict[int, int] = {}
        for var, state in assignment.items():
            if var not in self.pos:
                raise UnknownVariable(f"unknown variable {var!r}")
            try:
                out[self.pos[var]] = self.state_idx[var][state]
            except KeyError:
                raise UnknownState(f"variable {var!r} has no state {state!r}") from None
        return out


# ---------------------------------------------------------------------------
# enumeration engine
# ---------------------------------------------------------------------------


def _chain_product(t: _Tables, world: Sequence[int]) -> float:
    p = 1.0
    for i in range(len(world)):
        row = 0
        for ppos, stride in zip(t.parent_pos[i], t.strides[i]):
            row += world[ppos] * stride
        p *= t.probs[i][row][world[i]]
        if p == 0.0:
            return 0.0
    return p


def joint_probability(network: BayesianNetwork, assignment: Mapping[str, str]) -> float:
    """Chain-rule probability of a *full* assignment."""

    t = _Tables(network)
    fixed = t.resolve(assignment)
    if len(fixed) != len(t.order):
        missing = sorted(set(t.order) - {t.order[i] for i in fixed})
        raise UnknownVariable(f"assignment must cover every variable; missing: {', '.join(missing)}")
    world = [0] * len(t.order)
    for i, s in fixed.items():
        world[i] = s
    return _chain_product(t, world)


def marginal(network: BayesianNetwork, assignment: Mapping[str, str]) -> float:
    """Probability of a partial assignment, by summing over completions.

    The empty assignment has probability 1 (up to row-sum rounding in the
    input tables).
    """

    t = _Tables(network)
    fixed = t.resolve(assignment)
    free = [i for i in range(len(t.order)) if i not in fixed]
    world = [0] * len(t.order)
    for i, s in fixed.items():
        world[i] = s
    total = 0.0
    for combo in itertools.product(*(range(t.card[i]) for i in free)):
        for pos, s in zip(free, combo):
            world[pos] = s
        total += _chain_product(t, world)
    return total


def conditional_query(
    network: BayesianNetwork,
    query_var: str,
    query_state: str,
    evidence: Mapping[str, str],
) -> QueryResult:
    """P(query_var = query_state | evidence) by enumeration.

    Numerator and denominator come from one sweep over the completions of the
    evidence, so their comparison is exact term-by-term. Raises
    :class:`ZeroProbabilityEvidence` when the evidence has mass 0 and
    :class:`QueryEvidenceOverlap` when the query variable is also evidence.
    """

    if query_var in evidence:
        raise QueryEvidenceOverlap(f"query variable {query_var!r} also appears in evidence")
    t = _Tables(network)
    fixed = t.resolve(evidence)
    qidx = t.resolve({query_var: query_state})
    (qpos, qstate), = qidx.items()

    free = [i for i in range(len(t.order)) if i not in fixed]
    world = [0] * len(t.order)
    for i, s in fixed.items():
        world[i] = s
    num = 0.0
    den = 0.0
    for combo in itertools.product(*(range(t.card[i]) for i in free)):
        for pos, s in zip(free, combo):
            world[pos] = s
        p = _chain_product(t, world)
        den += p
        if world[qpos] == qstate:
            num += p
    if den == 0.0:
        raise ZeroProbabilityEvidence(f"evidence {dict(evidence)!r} has probability 0")
    return QueryResult(probability=_as_probability(num / den), method="enumeration")


def constrained_sweep(
    network: BayesianNetwork,
    constraints: Constraints,
    targets: Sequence[tuple[str, str]],
) -> tuple[float, list[float]]:
    """One enumeration pass under set-valued constraints.

    Returns ``(mass, per_target_mass)``: the total probability of worlds
    satisfying every constraint, and for each ``(variable, state)`` target the
    portion of that mass where the variable also takes the given state.
    Numerators are accumulated alongside the denominator so target/total
    ratios are exact conditional probabilities.
    """

    t = _Tables(network)
    allowed_idx: list[list[int]] = [list(range(t.card[i])) for i in range(len(t.order))]
    for var, allowed in dict(constraints).items():
        if var not in t.pos:
            raise UnknownVariable(f"unknown variable {var!r}")
        wanted = {allowed} if isinstance(allowed, str) else set(allowed)
        idxs = []
        for s in wanted:
            if s not in t.state_idx[var]:
                raise UnknownState(f"variable {var!r} has no state {s!r}")
            idxs.append(t.state_idx[var][s])
        allowed_idx[t.pos[var]] = sorted(idxs)

    target_idx: list[tuple[int, int]] = []
    for v, s in targets:
        if v not in t.pos:
            raise UnknownVariable(f"unknown variable {v!r}")
        if s not in t.state_idx[v]:
            raise UnknownState(f"variable {v!r} has no state {s!r}")
        target_idx.append((t.pos[v], t.state_idx[v][s]))

    world = [0] * len(t.order)
    total = 0.0
    nums = [0.0] * len(target_idx)
    for combo in itertools.product(*allowed_idx):
        for i, s in enumerate(combo):
            world[i] = s
        p = _chain_product(t, world)
        if p == 0.0:
            continue
        total += p
        for k, (pos, state) in enumerate(target_idx):
            if world[pos] == state:
                nums[k] += p
    return total, nums


# ---------------------------------------------------------------------------
# variable elimination engine
# ---------------------------------------------------------------------------


@dataclass
class _Factor:
    vars: tuple[str, ...]  # always lexicographically sorted
    values: np.ndarray  # one axis per var, in the same order


def _cpt_factor(network: BayesianNetwork, variable: str, card: Mapping[str, int]) -> _Factor:
    cpt = network.cpts[variable]
    scope = cpt.parents + (variable,)
    table = np.empty([card[v] for v in scope])
    for r, key in enumerate(itertools.product(*(network.states(p) for p in cpt.parents))):
        idx = np.unravel_index(r, table.shape[:-1]) if cpt.parents else ()
        table[idx] = cpt.rows[key]
    order = tuple(sorted(scope))
    perm = [scope.index(v) for v in order]
    return _Factor(order, np.ascontiguousarray(np.transpose(table, perm)))


def _align(f: _Factor, scope: tuple[str, ...], card: Mapping[str, int]) -> np.ndarray:
    shape = [card[v] if v in f.vars else 1 for v in scope]
    return f.values.reshape(shape)


def _multiply(a: _Factor, b: _Factor, card: Mapping[str, int]) -> _Factor:
    scope = tuple(sorted(set(a.vars) | set(b.vars)))
    return _Factor(scope, _align(a, scope, card) * _align(b, scope, card))


def _sum_out(f: _Factor, var: str) -> _Factor:
    axis = f.vars.index(var)
    rest = f.vars[:axis] + f.vars[axis + 1 :]
    return _Factor(rest, f.values.sum(axis=axis))


def _normalize_constraints(network: BayesianNetwork, constraints: Constraints) -> dict[str, frozenset[str]]:
    out: dict[str, frozenset[str]] = {}
    for var, allowed in constraints.items():
        states = network.states(var)  # raises UnknownVariable
        wanted = frozenset([allowed]) if isinstance(allowed, str) else frozenset(allowed)
        for s in wanted:
            if s not in states:
                raise UnknownState(f"variable {var!r} has no state {s!r}")
        out[var] = wanted
    return out


def masked_posterior(
    network: BayesianNetwork,
    variable: str,
    constraints: Constraints,
) -> np.ndarray:
    """Unnormalized vector P(variable = s ∧ constraints) via elimination.

    ``constraints`` maps variables to an allowed state or set of allowed
    states; the target variable itself may be constrained. Summing the result
    gives the probability of the constraint event.
    """

    constraint_sets = _normalize_constraints(network, constraints)
    if variable not in network.variables:
        raise UnknownVariable(f"unknown variable {variable!r}")
    card = {v: len(network.states(v)) for v in network.variables}

    factors: list[_Factor] = []
    for v in network.variables:
        f = _cpt_factor(network, v, card)
        factors.append(f)
    for var, allowed in constraint_sets.items():
        mask = np.array([1.0 if s in allowed else 0.0 for s in network.states(var)])
        f = _Factor((var,), mask)
        factors.append(f)

    to_eliminate = set(network.variables) - {variable}
    neighbors: dict[str, set[str]] = {v: set() for v in network.variables}
    for f in factors:
        for a in f.vars:
            neighbors[a].update(set(f.vars) - {a})

    while to_eliminate:
        target = min(to_eliminate, key=lambda v: (len(neighbors[v] & to_eliminate), v))
        bucket = [f for f in factors if target in f.vars]
        rest = [f for f in factors if target not in f.vars]
        if bucket:
            prod = bucket[0]
            for f in bucket[1:]:
                prod = _multiply(prod, f, card)
            rest.append(_sum_out(prod, target))
        factors = rest
        linked = neighbors.pop(target)
        for a in linked:
            neighbors[a].discard(target)
            neighbors[a].update(linked - {a})
        to_eliminate.discard(target)

    result = _Factor((), np.array(1.0))
    for f in factors:
        result = _multiply(result, f, card)
    values = result.values if result.vars == (variable,) else np.broadcast_to(result.values, (card[variable],))
    values = np.asarray(values, dtype=float).copy()
    low = values.min()
    if low < NEGATIVE_NOISE_FLOOR:
        raise ArithmeticError(f"elimination produced mass {low!r} below the noise floor")
    np.clip(values, 0.0, None, out=values)
    return values


def posterior(
    network: BayesianNetwork,
    variable: str,
    constraints: Constraints = (),
) -> tuple[float, ...]:
    """Normalized posterior over ``variable`` given set-valued constraints."""

    values = masked_posterior(network, variable, dict(constraints))
    total = float(values.sum())
    if total == 0.0:
        raise ZeroProbabilityEvidence(f"constraints {dict(constraints)!r} have probability 0")
    return tuple(_as_probability(v / total) for v in values)


def eliminate(
    network: BayesianNetwork,
    query_var: str,
    query_state: str,
    evidence: Mapping[str, str],
) -> QueryResult:
    """P(query_var = query_state | evidence) by variable elimination.

    Same contract as :func:`conditional_query`; exact up to float rounding.
    """

    if query_var in evidence:
        raise QueryEvidenceOverlap(f"query variable {query_var!r} also appears in evidence")
    from .model import state_index  # local import to keep module load light

    qstate = state_index(network, query_var, query_state)
    values = masked_posterior(network, query_var, dict(evidence))
    den = float(values.sum())
    if den == 0.0:
        raise ZeroProbabilityEvidence(f"evidence {dict(evidence)!r} has probability 0")
    return QueryResult(probability=_as_probability(float(values[qstate]) / den), method="elimination")


def _as_probability(value: float) -> float:
    if not math.isfinite(value):
        raise ArithmeticError(f"non-finite probability {value!r}")
    if value < 0.0:
        if value < NEGATIVE_NOISE_FLOOR:
            raise ArithmeticError(f"probability {value!r} below the negative noise floor")
        return 0.0
    return min(value, 1.0)

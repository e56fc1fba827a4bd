"""Benchmark dataset generation: verbalized premises, query/evidence pairs,
reasoning-type labels, and gold probabilities.

Every CPT row of a network becomes one *premise* in two renderings that share
a ``clause_ref``: numeric ("If gallstones is yes, then the probability of
flatulence being yes is 39.25%, ...") and verbal, using estimative-probability
phrases. Each *instance* samples evidence over a strict subset of variables
plus one query about a remaining variable; the gold answer is exact
conditional inference on the network.

Determinism contract: ``generate_dataset(network, count, seed)`` is a pure
function of its arguments. Randomness comes from per-purpose
``numpy.random.SeedSequence`` streams — one for premise verbalization, one
per instance index — so results do not depend on generation order or on the
``workers`` setting, and serialized output is byte-identical across runs.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import NetworkFormatError, UnsatisfiableEvidence, ZeroProbabilityEvidence
from .inference import eliminate
from .model import (
    BayesianNetwork,
    children,
    parent_assignments,
    parents,
    topological_order,
    validate,
)
from .problog.convert import atom_for, bn_to_problog
from .problog.syntax import (
    Atom,
    Clause,
    Evidence,
    Literal,
    ProbHead,
    ProblogProgram,
    Query,
)
from .wep import verbalize_distribution

REASONING_TYPES = ("causal", "evidential", "explaining_away")
MAX_EVIDENCE_RETRIES = 100


@dataclass(frozen=True)
class Premise:
    kind: str  # "numeric" | "wep"
    text: str
    clause_ref: int
    variable: str
    parent_assignment: tuple[tuple[str, str], ...]


@dataclass(frozen=True)
class Binding:
    variable: str
    state: str
    text: str


@dataclass(frozen=True)
class QePair:
    evidence: tuple[tuple[str, str], ...]  # sorted by variable id
    query_var: str
    query_state: str
    gold: float


@dataclass(frozen=True)
class DatasetInstance:
    id: str
    network: str
    premises: tuple[Premise, ...]
    evidence: tuple[Binding, ...]
    question: Binding
    gold: float
    reasoning_types: tuple[str, ...]
    primary_type: str
    seed: int
    index: int


# ---------------------------------------------------------------------------
# premise rendering
# ---------------------------------------------------------------------------


def _percent(p: float) -> str:
    text = f"{p * 100:.4f}".rstrip("0").rstrip(".")
    return f"{text}%"


def _join_clauses(parts: list[str]) -> str:
    if len(parts) == 1:
        return parts[0]
    return ", ".join(parts[:-1]) + ", and " + parts[-1]


def _sentence(conditions: str, consequent: str) -> str:
    if conditions:
        return f"If {conditions}, then {consequent}."
    return consequent[0].upper() + consequent[1:] + "."


# Sentence frames for hedge phrases that don't fit "it is X that ...".
_WEP_FRAMES = {
    "very good chance": "there is a very good chance that {}",
    "little chance": "there is little chance that {}",
    "almost no chance": "there is almost no chance that {}",
    "chances are slight": "chances are slight that {}",
    "better than even": "the chances are better than even that {}",
    "about even": "the chances are about even that {}",
    "probably": "it is probably the case that {}",
    "probably not": "it is probably not the case that {}",
}


def _hedge_clause(phrase: str, clause: str) -> str:
    frame = _WEP_FRAMES.get(phrase)
    if frame is None:
        return f"it is {phrase} that {clause}"
    return frame.format(clause)


def template_premises(
    network: BayesianNetwork,
    kind: str,
    rng: np.random.Generator | None = None,
    *,
    second_closest_prob: float = 0.1,
) -> list[Premise]:
    """One premise per CPT row, in canonical row order.

    ``kind`` is ``"numeric"`` (probabilities as percentages) or ``"wep"``
    (estimative-probability phrases; requires ``rng``). ``clause_ref`` is the
    row's index in canonical order, identical for both kinds.
    """

    if kind not in ("numeric", "wep"):
        raise ValueError(f"unknown premise kind {kind!r}")
    if kind == "wep" and rng is None:
        raise ValueError("wep premises need an rng")

    out: list[Premise] = []
    ref = 0
    for vid in topological_order(network):
        var = network.variables[vid]
        cpt = network.cpts[vid]
        for key in parent_assignments(network, vid):
            conditions = " and ".join(
                f"{network.variables[p].name} is {s}" for p, s in zip(cpt.parents, key)
            )
            dist = cpt.rows[key]
            if kind == "numeric":
                parts = [
                    f"the probability of {var.name} being {s} is {_percent(p)}"
                    for s, p in zip(var.states, dist)
                ]
                consequent = _join_clauses(parts)
            else:
                rendered = verbalize_distribution(
                    dist, rng, second_closest_prob=second_closest_prob
                )
                if rendered.equally_likely:
                    consequent = f"the states of {var.name} are all equally likely"
                else:
                    parts = [
                        _hedge_clause(phrase, f"{var.name} is {s}")
                        for s, phrase in zip(var.states, rendered.phrases)
                    ]
                    consequent = _join_clauses(parts)
            text = _sentence(conditions, consequent)
            if kind == "wep" and not rendered.equally_likely and rendered.argmax_states:
                top = " or ".join(var.states[i] for i in rendered.argmax_states)
                text += f" The most likely state of {var.name} is {top}."
            out.append(
                Premise(
                    kind=kind,
                    text=text,
                    clause_ref=ref,
                    variable=vid,
                    parent_assignment=tuple(sorted(zip(cpt.parents, key))),
                )
            )
            ref += 1
    return out


# ---------------------------------------------------------------------------
# query/evidence sampling and labeling
# ---------------------------------------------------------------------------


def sample_qe(
    network: BayesianNetwork,
    rng: np.random.Generator,
    *,
    max_retries: int = MAX_EVIDENCE_RETRIES,
) -> QePair:
    """Draw evidence over 1..n-1 variables plus a query about another one.

    Evidence assignments with probability zero are rejected and redrawn; after
    ``max_retries`` rejections :class:`UnsatisfiableEvidence` is raised (the
    network is then near-deterministic and not a useful QA subject).
    """

    ids = sorted(network.variables)
    n = len(ids)
    if n < 2:
        raise ValueError("query/evidence sampling needs at least 2 variables")

    for _ in range(max_retries):
        m = 1 + int(rng.integers(n - 1))
        pool = list(ids)
        for j in range(m):  # partial Fisher-Yates, explicit for cross-version stability
            k = j + int(rng.integers(n - j))
            pool[j], pool[k] = pool[k], pool[j]
        evidence_vars = pool[:m]
        rest = sorted(pool[m:])
        query_var = rest[int(rng.integers(len(rest)))]
        evidence = []
        for v in evidence_vars:
            states = network.states(v)
            evidence.append((v, states[int(rng.integers(len(states)))]))
        qstates = network.states(query_var)
        query_state = qstates[int(rng.integers(len(qstates)))]
        try:
            gold = eliminate(network, query_var, query_state, dict(evidence)).probability
        except ZeroProbabilityEvidence:
            continue
        return QePair(
            evidence=tuple(sorted(evidence)),
            query_var=query_var,
            query_state=query_state,
            gold=gold,
        )
    raise UnsatisfiableEvidence(
        f"no satisfiable evidence assignment found in {max_retries} draws"
    )


def classify_reasoning(
    network: BayesianNetwork,
    evidence_vars: Iterable[str],
    query_var: str,
) -> tuple[tuple[str, ...], str]:
    """Reasoning types linking the evidence to the query, plus the primary one.

    Membership is by direct edges: *causal* if some evidence variable is a
    parent of the query, *evidential* if some evidence variable is a child,
    *explaining_away* if an observed child of the query has another observed
    parent. Primary type is the most specific present
    (explaining_away > evidential > causal); "none" if no direct relation.
    """

    ev = set(evidence_vars)
    qparents = set(parents(network, query_var))
    qchildren = set(children(network, query_var))

    found = set()
    if ev & qparents:
        found.add("causal")
    if ev & qchildren:
        found.add("evidential")
    for child in ev & qchildren:
        if (set(parents(network, child)) - {query_var}) & ev:
            found.add("explaining_away")
            break

    types = tuple(t for t in REASONING_TYPES if t in found)
    primary = "none"
    for t in reversed(REASONING_TYPES):
        if t in found:
            primary = t
            break
    return types, primary


# ---------------------------------------------------------------------------
# instance generation
# ---------------------------------------------------------------------------


def _instance_rng(seed: int, stream: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(1, stream, index)))


def generate_dataset(
    network: BayesianNetwork,
    count: int,
    seed: int,
    *,
    workers: int = 1,
    second_closest_prob: float = 0.1,
    stream: int = 0,
) -> list[DatasetInstance]:
    """Generate ``count`` instances for one network.

    ``stream`` separates the substreams of several networks generated under
    one seed (the CLI passes the network's position). Output is independent
    of ``workers``.
    """

    if count <= 0:
        raise ValueError(f"count must be positive, got {count}")
    problems = validate(network)
    if problems:
        raise NetworkFormatError(
            f"network {network.name!r} is invalid: " + "; ".join(str(p) for p in problems[:5])
        )
    if len(network.variables) < 2:
        raise ValueError("dataset generation needs at least 2 variables")

    premise_rng = np.random.default_rng(
        np.random.SeedSequence(entropy=seed, spawn_key=(0, stream))
    )
    numeric = template_premises(network, "numeric")
    verbal = template_premises(
        network, "wep", premise_rng, second_closest_prob=second_closest_prob
    )
    premises = tuple(numeric + verbal)

    def build(i: int) -> DatasetInstance:
        rng = _instance_rng(seed, stream, i)
        qe = sample_qe(network, rng)
        types, primary = classify_reasoning(
            network, [v for v, _ in qe.evidence], qe.query_var
        )
        evidence = tuple(
            Binding(v, s, f"{network.variables[v].name} is {s}.") for v, s in qe.evidence
        )
        question = Binding(
            qe.query_var,
            qe.query_state,
            f"What is the probability that {network.variables[qe.query_var].name} "
            f"is {qe.query_state}?",
        )
        return DatasetInstance(
            id=f"{network.name}-{i:04d}",
            network=network.name,
            premises=premises,
            evidence=evidence,
            question=question,
            gold=qe.gold,
            reasoning_types=types,
            primary_type=primary,
            seed=seed,
            index=i,
        )

    if workers <= 1:
        return [build(i) for i in range(count)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(build, range(count)))


def instance_program(network: BayesianNetwork, instance: DatasetInstance) -> ProblogProgram:
    """The instance as a runnable program: encoding + evidence + query.

    A query about the second state of a two-state variable has no atom of its
    own, so a fresh deterministic indicator is added
    (``1.0::neg(e) :- not p(e).`` plus a ``0.0::`` row to keep clause bodies
    exhaustive) and queried instead.
    """

    base = bn_to_problog(network)
    clauses = list(base.clauses)
    evidence = []
    for b in instance.evidence:
        atom, positive = atom_for(network, b.variable, b.state)
        evidence.append(Evidence(atom=atom, value=positive))

    qatom, positive = atom_for(network, instance.question.variable, instance.question.state)
    if positive:
        query_atom = qatom
    else:
        neg_pred = f"not_{qatom.predicate}"
        taken = {h.atom.predicate for c in clauses for h in c.heads}
        while neg_pred in taken:
            neg_pred += "_"
        query_atom = Atom(neg_pred, qatom.args)
        clauses.append(Clause(heads=(ProbHead(1.0, query_atom),), body=(Literal(qatom, True),)))
        clauses.append(Clause(heads=(ProbHead(0.0, query_atom),), body=(Literal(qatom, False),)))
    return ProblogProgram(
        clauses=tuple(clauses),
        evidence=tuple(evidence),
        queries=(Query(query_atom),),
    )


# ---------------------------------------------------------------------------
# dataset files
# ---------------------------------------------------------------------------


def instance_to_dict(instance: DatasetInstance) -> dict:
    return {
        "id": instance.id,
        "network": instance.network,
        "seed": instance.seed,
        "index": instance.index,
        "premises": [
            {
                "kind": p.kind,
                "text": p.text,
                "clause_ref": p.clause_ref,
                "variable": p.variable,
                "given": {parent: state for parent, state in p.parent_assignment},
            }
            for p in instance.premises
        ],
        "evidence": [
            {"variable": b.variable, "state": b.state, "text": b.text}
            for b in instance.evidence
        ],
        "question": {
            "variable": instance.question.variable,
            "state": instance.question.state,
            "text": instance.question.text,
        },
        "gold": instance.gold,
        "reasoning_types": list(instance.reasoning_types),
        "primary_type": instance.primary_type,
    }


def instance_from_dict(doc: dict) -> DatasetInstance:
    return DatasetInstance(
        id=doc["id"],
        network=doc["network"],
        premises=tuple(
            Premise(
                kind=p["kind"],
                text=p["text"],
                clause_ref=p["clause_ref"],
                variable=p["variable"],
                parent_assignment=tuple(sorted(p["given"].items())),
            )
            for p in doc["premises"]
        ),
        evidence=tuple(
            Binding(e["variable"], e["state"], e["text"]) for e in doc["evidence"]
        ),
        question=Binding(
            doc["question"]["variable"], doc["question"]["state"], doc["question"]["text"]
        ),
        gold=float(doc["gold"]),
        reasoning_types=tuple(doc["reasoning_types"]),
        primary_type=doc["primary_type"],
        seed=int(doc["seed"]),
        index=int(doc["index"]),
    )


def save_dataset(instances: Sequence[DatasetInstance], path: str | Path) -> None:
    """Write instances as JSON Lines (stable bytes for equal inputs)."""

    lines = [json.dumps(instance_to_dict(inst), ensure_ascii=False) for inst in instances]
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")


def load_dataset(path: str | Path) -> list[DatasetInstance]:
    out = []
    for i, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines()):
        if not line.strip():
            continue
        try:
            out.append(instance_from_dict(json.loads(line)))
        except (json.JSONDecodeError, KeyError) as exc:
            raise NetworkFormatError(f"{path}:{i + 1}: bad dataset record ({exc})") from None
    return out


def filter_premises(instance: DatasetInstance, kinds: Iterable[str]) -> DatasetInstance:
    wanted = set(kinds)
    return replace(
        instance, premises=tuple(p for p in instance.premises if p.kind in wanted)
    )


# ---------------------------------------------------------------------------
# corpus statistics
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DatasetStats:
    networks: int
    variables_total: int
    numeric_premises: int
    wep_premises: int
    evidence_statements: int
    queries: int
    states_per_variable_mean: float
    states_per_variable_std: float
    variables_per_network_mean: float
    variables_per_network_std: float
    premises_per_network_mean: float
    premises_per_network_std: float


def premise_count(network: BayesianNetwork) -> int:
    """Number of CPT rows = premises of one kind."""

    total = 0
    for vid in network.variables:
        rows = 1
        for p in network.cpts[vid].parents:
            rows *= len(network.states(p))
        total += rows
    return total


def dataset_stats(
    networks: Sequence[BayesianNetwork],
    instances: Sequence[DatasetInstance] = (),
) -> DatasetStats:
    """Corpus-level statistics (population std, ddof=0)."""

    if not networks:
        raise ValueError("need at least one network")
    states = [len(v.states) for net in networks for v in net.variables.values()]
    var_counts = [len(net.variables) for net in networks]
    prem_counts = [premise_count(net) for net in networks]
    return DatasetStats(
        networks=len(networks),
        variables_total=sum(var_counts),
        numeric_premises=sum(prem_counts),
        wep_premises=sum(prem_counts),
        evidence_statements=sum(len(inst.evidence) for inst in instances),
        queries=len(instances),
        states_per_variable_mean=float(np.mean(states)),
        states_per_variable_std=float(np.std(states)),
        variables_per_network_mean=float(np.mean(var_counts)),
        variables_per_network_std=float(np.std(var_counts)),
        premises_per_network_mean=float(np.mean(prem_counts)),
        premises_per_network_std=float(np.std(prem_counts)),
    )

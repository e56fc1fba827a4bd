"""Words of estimative probability: phrase ↔ numeric anchor mapping.

A fixed 17-entry table pairs hedging phrases with anchor probabilities (each
with an informational spread that plays no role in selection). Mapping a
number to a phrase picks a phrase whose anchor is closest, with two twists
that make generated text less mechanical while staying decodable:

* with probability ``second_closest_prob`` (default 0.1) a phrase at the
  *second*-smallest distance is used instead;
* after selection, "about even" is substituted by "probably not" whenever the
  probability is below 0.45, since readers take "about even" to mean roughly
  50/50 (so e.g. 0.38 never reads as "about even").

Ties within a candidate set are broken uniformly at random in table order.
Exact 0 and 1 map to "impossible"/"certain" without consuming randomness, so
certainty never wobbles.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import UnknownWepPhrase


@dataclass(frozen=True)
class WepEntry:
    phrase: str
    anchor: float
    spread: float  # empirical ± from the source survey; informational only


@dataclass(frozen=True)
class WepSelection:
    phrase: str
    used_second_closest: bool


ANCHOR_TABLE: tuple[WepEntry, ...] = (
    WepEntry("certain", 1.00, 0.0),
    WepEntry("almost certain", 0.95, 0.109),
    WepEntry("highly likely", 0.90, 0.084),
    WepEntry("very good chance", 0.80, 0.108),
    WepEntry("likely", 0.70, 0.113),
    WepEntry("probably", 0.70, 0.129),
    WepEntry("probable", 0.70, 0.147),
    WepEntry("better than even", 0.60, 0.091),
    WepEntry("about even", 0.50, 0.049),
    WepEntry("probably not", 0.25, 0.144),
    WepEntry("unlikely", 0.20, 0.150),
    WepEntry("little chance", 0.10, 0.122),
    WepEntry("chances are slight", 0.10, 0.109),
    WepEntry("improbable", 0.10, 0.175),
    WepEntry("highly unlikely", 0.05, 0.173),
    WepEntry("almost no chance", 0.02, 0.170),
    WepEntry("impossible", 0.00, 0.0),
)

_ANCHORS = {entry.phrase: entry.anchor for entry in ANCHOR_TABLE}

ABOUT_EVEN_FLOOR = 0.45
_TIE_EPS = 1e-9


def wep_to_prob(phrase: str) -> float:
    """Anchor probability of a phrase (case-insensitive, whitespace-normalized)."""

    key = " ".join(phrase.lower().split())
    try:
        return _ANCHORS[key]
    except KeyError:
        raise UnknownWepPhrase(f"phrase {phrase!r} is not in the estimative-probability table") from None


def _candidate_sets(p: float) -> tuple[list[str], list[str]]:
    """Phrases at the smallest and second-smallest anchor distance."""

    dists = [abs(p - entry.anchor) for entry in ANCHOR_TABLE]
    best = min(dists)
    primary = [e.phrase for e, d in zip(ANCHOR_TABLE, dists) if d <= best + _TIE_EPS]
    beyond = [d for d in dists if d > best + _TIE_EPS]
    if not beyond:
        return primary, []
    second = min(beyond)
    secondary = [
        e.phrase for e, d in zip(ANCHOR_TABLE, dists) if best + _TIE_EPS < d <= second + _TIE_EPS
    ]
    return primary, secondary


def prob_to_wep(
    p: float,
    rng: np.random.Generator,
    *,
    second_closest_prob: float = 0.1,
) -> WepSelection:
    """Select a phrase for probability ``p``; see the module docstring.

    The about-even substitution happens *after* random selection, so it does
    not disturb the second-closest rate at other probabilities. Setting
    ``second_closest_prob=0`` disables the second-closest rule without
    consuming a draw.
    """

    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability {p!r} outside [0, 1]")
    if not 0.0 <= second_closest_prob <= 1.0:
        raise ValueError(f"second_closest_prob {second_closest_prob!r} outside [0, 1]")
    if p == 0.0:
        return WepSelection("impossible", False)
    if p == 1.0:
        return WepSelection("certain", False)

    primary, secondary = _candidate_sets(p)
    used_second = bool(
        secondary and second_closest_prob > 0.0 and rng.random() < second_closest_prob
    )
    pool = secondary if used_second else primary
    phrase = pool[0] if len(pool) == 1 else pool[int(rng.integers(len(pool)))]
    if phrase == "about even" and p < ABOUT_EVEN_FLOOR:
        phrase = "probably not"
    return WepSelection(phrase, used_second)


@dataclass(frozen=True)
class VerbalizedDistribution:
    """Phrase rendering of one distribution.

    ``phrases`` lines up with the input states; it is None when the
    distribution is uniform and the whole row should read "all equally
    likely". ``argmax_states`` names the most-probable state indices whenever
    the top probability's closest anchor sits at or below 0.25 — i.e. when
    every phrase in the row reads "low", the note says which state still
    dominates.
    """

    phrases: tuple[str, ...] | None
    equally_likely: bool
    argmax_states: tuple[int, ...] | None


def _primary_anchor(p: float) -> float:
    """Anchor the deterministic closest-phrase rule would assign to ``p``."""

    primary, _ = _candidate_sets(p)
    anchors = set()
    for phrase in primary:
        if phrase == "about even" and p < ABOUT_EVEN_FLOOR:
            phrase = "probably not"
        anchors.add(_ANCHORS[phrase])
    return max(anchors)


def verbalize_distribution(
    probabilities: tuple[float, ...] | list[float],
    rng: np.random.Generator,
    *,
    second_closest_prob: float = 0.1,
) -> VerbalizedDistribution:
    """Render one CPT row as phrases, with the equal/argmax special cases."""

    probs = [float(p) for p in probabilities]
    if not probs:
        raise ValueError("distribution must be nonempty")
    if any(not 0.0 <= p <= 1.0 for p in probs):
        raise ValueError(f"distribution entries outside [0, 1]: {probs!r}")
    if max(probs) - min(probs) <= _TIE_EPS:
        return VerbalizedDistribution(phrases=None, equally_likely=True, argmax_states=None)

    phrases = tuple(
        prob_to_wep(p, rng, second_closest_prob=second_closest_prob).phrase for p in probs
    )
    top = max(probs)
    argmax = tuple(i for i, p in enumerate(probs) if p >= top - _TIE_EPS)
    note = argmax if _primary_anchor(top) <= 0.25 else None
    return VerbalizedDistribution(phrases=phrases, equally_likely=False, argmax_states=note)

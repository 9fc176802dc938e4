"""Hypothesis checks on instances: regularity, order independence,
globally bounded weak feedback, and the strong-feedback region.

Every check returns a ConditionReport with exact rational margins and
concrete witnesses, so a failed hypothesis always comes with the pair or
prefix that breaks it.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import _engine
from .model import Belief, Instance, Journal, ModelError, format_number, update_belief

GBWF_POLICIES = ("box1", "max_over_journals", "per_remaining")
GBWF_MAX_SIZE = 8


class ConditionError(ModelError):
    """Check asked for something it cannot do (bad policy, too large)."""


@dataclass(frozen=True)
class ConditionReport:
    """Outcome of one hypothesis check.

    margin is the smallest slack over all inequalities the check looked
    at (negative means violated); for equality-style checks it is the
    largest absolute deviation, so 0 means pass.  witnesses carry the
    binding or violating cases as plain dicts.
    """

    condition: str
    passed: bool
    margin: Fraction | None = None
    witnesses: tuple = ()
    details: dict = field(default_factory=dict)

    def summary(self) -> str:
        state = "holds" if self.passed else "fails"
        msg = f"{self.condition}: {state}"
        if self.margin is not None:
            msg += f" (margin {format_number(self.margin)})"
        if not self.passed and self.witnesses:
            w = self.witnesses[0]
            if isinstance(w, dict):
                parts = []
                for k, v in w.items():
                    if isinstance(v, Fraction):
                        v = format_number(v)
                    elif isinstance(v, tuple):
                        v = tuple(format_number(x) if isinstance(x, Fraction)
                                  else x for x in v)
                    parts.append(f"{k}={v}")
                w = ", ".join(parts)
            msg += f"; witness: {w}"
        return msg

    def to_dict(self) -> dict:
        def conv(x):
            if isinstance(x, Fraction):
                return format_number(x)
            if isinstance(x, dict):
                return {k: conv(v) for k, v in x.items()}
            if isinstance(x, (list, tuple)):
                return [conv(v) for v in x]
            return x

        return {
            "condition": self.condition,
            "passed": self.passed,
            "margin": None if self.margin is None else format_number(self.margin),
            "witnesses": conv(list(self.witnesses)),
            "details": conv(self.details),
        }


def _min_margin(margins):
    margins = list(margins)
    return min(margins) if margins else None


def check_regularity(inst: Instance, strict: bool = False,
                     exponential: bool = False) -> ConditionReport:
    """Payoffs and feedback rates non-increasing, acceptance rates
    non-decreasing down the payoff-sorted list; `strict` demands strict
    inequalities, `exponential` additionally wants each payoff at least
    twice the next one.  passed reflects the requested variant; details
    report all four variants at once.
    """
    js = inst.journals
    adjacent = list(zip(js, js[1:]))
    u_slacks = [hi.u - lo.u for hi, lo in adjacent]
    q_slacks = [hi.q - lo.q for hi, lo in adjacent]
    a_slacks = [lo.a - hi.a for hi, lo in adjacent]
    exp_slacks = [hi.u - 2 * lo.u for hi, lo in adjacent]

    weak = all(s >= 0 for s in u_slacks + q_slacks + a_slacks)
    strictly = all(s > 0 for s in u_slacks + q_slacks + a_slacks)
    expo = weak and all(s >= 0 for s in exp_slacks)
    strict_expo = strictly and all(s > 0 for s in exp_slacks)

    slacks = u_slacks + q_slacks + a_slacks + (exp_slacks if exponential else [])
    margin = _min_margin(slacks)
    if exponential and strict:
        passed = strict_expo
    elif exponential:
        passed = expo
    elif strict:
        passed = strictly
    else:
        passed = weak

    witnesses = []
    for k, (hi, lo) in enumerate(adjacent):
        bad = []
        if hi.u < lo.u or (strict and hi.u == lo.u):
            bad.append(("u", hi.u, lo.u))
        if hi.q < lo.q or (strict and hi.q == lo.q):
            bad.append(("q", hi.q, lo.q))
        if hi.a > lo.a or (strict and hi.a == lo.a):
            bad.append(("a", hi.a, lo.a))
        if exponential and (hi.u < 2 * lo.u or (strict and hi.u == 2 * lo.u)):
            bad.append(("u_ratio", hi.u, lo.u))
        for kind, x, y in bad:
            witnesses.append({"pair": (hi.name, lo.name), "field": kind,
                              "values": (x, y)})
    return ConditionReport(
        condition="regularity",
        passed=passed,
        margin=margin,
        witnesses=tuple(witnesses),
        details={
            "regular": weak,
            "strict_regular": strictly,
            "exponential_regular": expo,
            "strict_exponential_regular": strict_expo,
        },
    )


def _index_key(j: Journal):
    if j.a == 0:
        return None
    return j.u - j.c / j.a


def check_order_independence(inst: Instance) -> ConditionReport:
    """Belief updates commute: a_i q_j = a_j q_i for every pair.

    When the check passes, posterior beliefs (and survival probabilities)
    depend only on the set of rejections, not their order, which is what
    makes subset dynamic programming sound.  margin is the largest
    absolute deviation |a_i q_j - a_j q_i|, so 0 means pass.

    details.small_costs reports whether cost-adjusted payoffs u - c/a
    rank journals the same way raw payoffs do (the small-cost hypothesis
    of the index result); journals with a = 0 leave it False unless they
    are costless.
    """
    js = inst.journals
    deviations = []
    witnesses = []
    worst = Fraction(0)
    for i in range(len(js)):
        for j in range(i + 1, len(js)):
            d = js[i].a * js[j].q - js[j].a * js[i].q
            deviations.append({"pair": (js[i].name, js[j].name), "deviation": d})
            if d != 0:
                witnesses.append({"pair": (js[i].name, js[j].name),
                                  "a_i*q_j": js[i].a * js[j].q,
                                  "a_j*q_i": js[j].a * js[i].q})
            worst = max(worst, abs(d))
    passed = worst == 0

    keys = [_index_key(j) for j in js]
    small_costs = True
    for i in range(len(js)):
        for j in range(i + 1, len(js)):
            if js[i].u == js[j].u:
                continue
            ki, kj = keys[i], keys[j]
            if ki is None or kj is None:
                # a = 0 with a positive cost has no finite index
                if (ki is None and js[i].c > 0) or (kj is None and js[j].c > 0):
                    small_costs = False
                continue
            if (js[i].u > js[j].u) != (ki > kj):
                small_costs = False

    return ConditionReport(
        condition="order_independence",
        passed=passed,
        margin=worst,
        witnesses=tuple(witnesses),
        details={
            "deviations": deviations,
            "small_costs": small_costs,
            "index_keys": {j.name: k for j, k in zip(js, keys)},
        },
    )


def feedback_threshold(j: Journal) -> Fraction:
    """q/(q+a): the belief floor under which j's feedback outweighs its
    screening in unnormalized mass terms.  0 when the journal gives no
    feedback; 1 when it only gives feedback (a = 0, q > 0)."""
    if j.q == 0:
        return Fraction(0)
    return Fraction(j.q, j.a + j.q)


def check_globally_bounded_weak_feedback(
    inst: Instance,
    policy: str = "max_over_journals",
    max_size: int = GBWF_MAX_SIZE,
) -> ConditionReport:
    """Every belief reachable while boxes remain stays above a floor.

    Beliefs entering each period are enumerated along all ordered
    prefixes (lengths 0..I-1; the belief after the final rejection is
    irrelevant because no submission uses it).  The floor depends on
    `policy`:

      box1               q/(q+a) of the best-paying journal
      max_over_journals  max of q/(q+a) over all journals (default)
      per_remaining      at each prefix, max over journals not yet tried

    The per_remaining floor is equivalent to requiring
    mu >= (1 - a_j mu) f_j(mu) for every remaining journal j, i.e. no
    remaining journal's rejection raises the unnormalized H-mass.
    """
    if policy not in GBWF_POLICIES:
        raise ConditionError(f"unknown policy {policy!r}; choose from {GBWF_POLICIES}")
    n = inst.size
    if n > max_size:
        raise ConditionError(
            f"{n} journals means sum(n!/(n-k)!) prefixes; cap is {max_size}"
        )
    boxes, (pn, pd), _ = _engine.prepare(inst)
    thresholds = [feedback_threshold(j) for j in inst.journals]
    names = inst.journal_names()
    global_floor = (thresholds[0] if policy == "box1"
                    else max(thresholds) if policy == "max_over_journals"
                    else None)

    best = {"margin": None, "belief": None, "prefix": None, "floor": None}
    violations = []

    def note(bn, bd, prefix, floor):
        margin = Fraction(bn, bd) - floor
        if best["margin"] is None or margin < best["margin"]:
            best.update(margin=margin, belief=Fraction(bn, bd),
                        prefix=tuple(names[i] for i in prefix), floor=floor)
        if margin < 0 and len(violations) < 5:
            violations.append({
                "prefix": tuple(names[i] for i in prefix),
                "belief": Fraction(bn, bd),
                "floor": floor,
            })

    prefix: list = []

    def walk(used, bn, bd):
        if policy == "per_remaining":
            floor = max((thresholds[i] for i in range(n) if not used >> i & 1),
                        default=Fraction(0))
        else:
            floor = global_floor
        note(bn, bd, prefix, floor)
        if len(prefix) == n - 1:
            return
        for i in range(n):
            if used >> i & 1:
                continue
            nbn, nbd = _engine.belief_step(boxes[i], bn, bd)
            prefix.append(i)
            walk(used | (1 << i), nbn, nbd)
            prefix.pop()

    walk(0, pn, pd)
    return ConditionReport(
        condition="globally_bounded_weak_feedback",
        passed=best["margin"] >= 0,
        margin=best["margin"],
        witnesses=tuple(violations),
        details={
            "policy": policy,
            "thresholds": {nm: th for nm, th in zip(names, thresholds)},
            "min_belief": best["belief"],
            "min_belief_prefix": best["prefix"],
            "floor_at_min": best["floor"],
        },
    )


def check_strong_feedback(journal: Journal, belief: Belief) -> ConditionReport:
    """Is rejection at `journal` good news at this belief (f(mu) >= mu)?

    The posterior rises exactly when mu <= q/a, so the region boundary is
    min(q/a, 1).  With a = 0 rejection never lowers the belief and the
    whole interval qualifies; with q = 0 only the endpoints do.
    """
    post = update_belief(journal, belief)
    margin = post.mu_h - belief.mu_h
    if journal.a == 0:
        boundary = Fraction(1)
    else:
        boundary = min(Fraction(journal.q, journal.a), Fraction(1))
    return ConditionReport(
        condition="strong_feedback",
        passed=margin >= 0,
        margin=margin,
        witnesses=() if margin >= 0 else (
            {"journal": journal.name, "belief": belief.mu_h, "posterior": post.mu_h},),
        details={"boundary": boundary, "posterior": post.mu_h},
    )

"""Randomized verification suites for the optimality claims.

Each suite draws seeded instances from the matching generator family,
tests one claim trial by trial against an independent oracle (exhaustive
search, a closed form, or the linear mass recursion), and returns a
VerificationReport.  A failing trial records the serialized instance and
the derived seed so it can be replayed exactly.  Trial k always uses
random.Random(seed + k).
"""
from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

from . import _engine
from .catalog import BY_NAME, CASES
from .conditions import (
    check_globally_bounded_weak_feedback,
    check_order_independence,
    check_regularity,
    check_strong_feedback,
    feedback_threshold,
)
from .generators import (
    _distinct_payoffs,
    _frac,
    sample_exp_regular_gbwf,
    sample_no_feedback,
    sample_order_independent,
    sample_regular_2box,
    sample_unconstrained,
)
from .model import (
    Belief,
    Instance,
    Journal,
    SearchOrder,
    dump_instance,
    evaluate,
    format_number,
    monotone_order,
    normalize,
    update_belief,
)
from .sim import empirical_survival, estimate_value
from .solver import brute_force_optimal, prior_threshold_2box, subset_dp_optimal


@dataclass
class VerificationReport:
    claim: str
    trials: int
    failures: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    elapsed_seconds: float = 0.0

    @property
    def status(self) -> str:
        return "verified" if not self.failures else "falsified"

    def to_dict(self) -> dict:
        return {
            "claim": self.claim,
            "trials": self.trials,
            "status": self.status,
            "failures": self.failures,
            "notes": self.notes,
            "elapsed_seconds": round(self.elapsed_seconds, 3),
        }

    def text(self) -> str:
        lines = [f"{self.status.upper()}: {self.claim} "
                 f"({self.trials} trials, {self.elapsed_seconds:.1f}s)"]
        for f in self.failures[:5]:
            lines.append(f"  failure at trial {f.get('trial')}: {f.get('message')}")
        if len(self.failures) > 5:
            lines.append(f"  ... {len(self.failures) - 5} more failures")
        for n in self.notes:
            lines.append(f"  note: {n}")
        return "\n".join(lines)


def _fail(report, trial, seed, inst, message, **data):
    entry = {"trial": trial, "seed": seed, "message": message}
    if inst is not None:
        entry["instance"] = dump_instance(inst)
    for k, v in data.items():
        entry[k] = format_number(v) if isinstance(v, Fraction) else v
    report.failures.append(entry)


def _finish(report, t0):
    report.elapsed_seconds = time.perf_counter() - t0
    return report


# ---------------------------------------------------------------------------

def verify_no_feedback_index(trials: int = 1000, seed: int = 101,
                             size_range=(2, 7)) -> VerificationReport:
    """Without feedback, sorting by the cost-adjusted index u - c/a is
    exhaustively optimal for any prior and any costs; with zero costs
    that is plain payoff sorting."""
    from .solver import index_order_no_feedback

    report = VerificationReport(
        claim="q = 0 everywhere: the u - c/a index order matches the "
              "exhaustive optimum exactly", trials=trials)
    t0 = time.perf_counter()
    for k in range(trials):
        rng = random.Random(seed + k)
        n = rng.randint(*size_range)
        inst = sample_no_feedback(rng, n)
        if k % 4 == 0:
            inst = Instance(tuple(Journal(j.name, j.u, j.a, j.q, 0)
                                  for j in inst.journals), inst.prior, 0)
        res = brute_force_optimal(inst)
        ranked = index_order_no_feedback(inst)
        if evaluate(inst, ranked.best_order).total != res.best_value:
            _fail(report, k, seed + k, inst, "index order value below optimum",
                  index_value=evaluate(inst, ranked.best_order).total,
                  optimum=res.best_value)
            continue
        if ranked.best_order.perm not in [o.perm for o in res.argmax_set]:
            _fail(report, k, seed + k, inst, "index order missing from argmax set")
            continue
        if k % 4 == 0 and evaluate(inst, monotone_order(inst)).total != res.best_value:
            _fail(report, k, seed + k, inst,
                  "zero costs: payoff-sorted order not optimal")
    twin = Instance((Journal("A", 3, Fraction(1, 2), 0, Fraction(1, 4)),
                     Journal("B", 3, Fraction(1, 2), 0, Fraction(1, 4))),
                    Belief(Fraction(2, 3)))
    if len(brute_force_optimal(twin).argmax_set) == 2:
        report.notes.append("identical journals tie: both orders in the argmax set")
    else:
        _fail(report, -1, seed, twin, "identical journals should tie")
    mixed = Instance((Journal("IDX8", 10, Fraction(1, 2), 0, 1),
                      Journal("IDX89", 9, Fraction(9, 10), 0, Fraction(9, 100))),
                     Belief(Fraction(1)))
    if brute_force_optimal(mixed).best_order.perm != (1, 0):
        _fail(report, -2, seed, mixed,
              "cost-adjusted index should beat raw payoff sorting here")
    else:
        report.notes.append(
            "costs can reverse raw payoff order: u=9 box with index 8.91 "
            "goes before u=10 box with index 8")
    return _finish(report, t0)


def verify_order_independent_indexing(trials: int = 500, seed: int = 102,
                                      size_range=(2, 6)) -> VerificationReport:
    """Commuting belief updates with proportional costs: payoff sorting is
    optimal whenever the prior sits at or above the shared floor
    q/(q+a); subset DP equals brute force; exit probabilities over a pair
    are order-invariant."""
    report = VerificationReport(
        claim="order-independent instances (prior above the shared floor): "
              "payoff-sorted in argmax, subset DP = brute force, exit "
              "probabilities order-invariant", trials=trials)
    t0 = time.perf_counter()
    for k in range(trials):
        rng = random.Random(seed + k)
        n = rng.randint(*size_range)
        inst = sample_order_independent(rng, n)
        res = brute_force_optimal(inst)
        mono = monotone_order(inst)
        if evaluate(inst, mono).total != res.best_value:
            _fail(report, k, seed + k, inst, "payoff-sorted order suboptimal",
                  monotone_value=evaluate(inst, mono).total, optimum=res.best_value)
            continue
        dp = subset_dp_optimal(inst)
        if dp.best_value != res.best_value:
            _fail(report, k, seed + k, inst, "subset DP disagrees with brute force",
                  dp_value=dp.best_value, optimum=res.best_value)
            continue
        if sorted(o.perm for o in dp.argmax_set) != sorted(o.perm for o in res.argmax_set):
            _fail(report, k, seed + k, inst, "subset DP argmax set differs")
            continue
        mu0 = inst.prior
        probes = [mu0] + [update_belief(j, mu0) for j in inst.journals[:2]]
        ok = True
        for i, jj in itertools.combinations(range(n), 2):
            ji, jjj = inst.journals[i], inst.journals[jj]
            for b in probes:
                lhs = (1 - ji.a * b.mu_h) * (1 - jjj.a * update_belief(ji, b).mu_h)
                rhs = (1 - jjj.a * b.mu_h) * (1 - ji.a * update_belief(jjj, b).mu_h)
                if lhs != rhs:
                    _fail(report, k, seed + k, inst,
                          "exit probability depends on pair order",
                          pair=(ji.name, jjj.name))
                    ok = False
                    break
                if update_belief(jjj, update_belief(ji, b)) != \
                        update_belief(ji, update_belief(jjj, b)):
                    _fail(report, k, seed + k, inst, "belief updates fail to commute")
                    ok = False
                    break
            if not ok:
                break
    # Below the shared floor the payoff-sorted order genuinely loses; show one.
    probe = Instance(
        (Journal("J1", 3, Fraction(1, 5), Fraction(1, 10)),
         Journal("J2", 1, Fraction(2, 5), Fraction(1, 5))),
        Belief(Fraction(3, 10)))
    pres = brute_force_optimal(probe)
    if pres.best_order.perm == (1, 0):
        report.notes.append(
            "below the shared floor q/(q+a) = 1/3 the payoff-sorted order is "
            "strictly suboptimal (prior 3/10: 0.304 < 0.312), so the claim "
            "needs the prior bound; the generator samples the valid region")
    else:
        _fail(report, -1, seed, probe, "expected payoff-sorted to lose below the floor")
    return _finish(report, t0)


def verify_two_box_base_case(trials: int = 1000, seed: int = 103) -> VerificationReport:
    """Strictly regular pair with the prior at or above the low box's
    floor q2/(a2+q2): payoff-sorted is uniquely optimal (weak regularity
    keeps it weakly optimal)."""
    report = VerificationReport(
        claim="strictly regular two-box instances above the floor: "
              "payoff-sorted order uniquely optimal", trials=trials)
    t0 = time.perf_counter()
    for k in range(trials):
        rng = random.Random(seed + k)
        inst = sample_regular_2box(rng, 2)
        if k % 5 == 4:
            j1, j2 = inst.journals
            tie = rng.choice(("a", "q", "u"))
            if tie == "a":
                j2 = Journal(j2.name, j2.u, j1.a, j2.q)
            elif tie == "q":
                j2 = Journal(j2.name, j2.u, j2.a, j1.q)
            else:
                j2 = Journal(j2.name, j1.u, j2.a, j2.q)
            floor = feedback_threshold(j2)
            prior = floor + (1 - floor) * _frac(rng, 0, 1, 64)
            inst = Instance((j1, j2), Belief(prior), 0)
            res = brute_force_optimal(inst)
            if (0, 1) not in [o.perm for o in res.argmax_set]:
                _fail(report, k, seed + k, inst,
                      "weakly regular tie: payoff-sorted missing from argmax")
            continue
        res = brute_force_optimal(inst)
        if [o.perm for o in res.argmax_set] != [(0, 1)]:
            _fail(report, k, seed + k, inst,
                  "strict regularity: argmax should be exactly the sorted order",
                  argmax=[o.perm for o in res.argmax_set])
    case = BY_NAME["strong_feedback_showcase"]
    inside = case.instance(Fraction(167, 290))  # between 4/7 and 17/29
    res = brute_force_optimal(inside)
    gb = check_globally_bounded_weak_feedback(inside)
    if res.best_order.perm == (1, 0) and gb.passed:
        report.notes.append(
            "belief floor alone is not enough: at prior 167/290 every "
            "reachable belief clears max q/(q+a) = 4/7 yet the low-payoff "
            "box goes first (this pair is not regular: q rises with a)")
    else:
        _fail(report, -1, seed, inside, "expected nonmonotone optimum inside the band")
    return _finish(report, t0)


def verify_weak_feedback_monotonicity(trials: int = 500, seed: int = 104,
                                      size_range=(2, 6)) -> VerificationReport:
    """Exponentially regular instances whose reachable beliefs stay above
    the floor: payoff-sorted is the unique exhaustive optimum."""
    report = VerificationReport(
        claim="exponential regularity + belief floor: payoff-sorted order "
              "uniquely optimal", trials=trials)
    t0 = time.perf_counter()
    for k in range(trials):
        rng = random.Random(seed + k)
        n = rng.randint(*size_range)
        inst = sample_exp_regular_gbwf(rng, n)
        res = brute_force_optimal(inst)
        perms = [o.perm for o in res.argmax_set]
        if k % 6 == 5 and n >= 3:
            # weak variant: collapse one adjacent a or q pair to a tie
            js = list(inst.journals)
            i = rng.randrange(n - 1)
            if rng.random() < 0.5:
                js[i] = Journal(js[i].name, js[i].u, js[i + 1].a, js[i].q)
            else:
                js[i + 1] = Journal(js[i + 1].name, js[i + 1].u, js[i + 1].a, js[i].q)
            weak = Instance(tuple(js), inst.prior, 0)
            if not (check_regularity(weak).passed
                    and check_globally_bounded_weak_feedback(weak).passed):
                continue
            wres = brute_force_optimal(weak)
            if tuple(range(n)) not in [o.perm for o in wres.argmax_set]:
                _fail(report, k, seed + k, weak,
                      "weak regularity: payoff-sorted missing from argmax")
            continue
        if perms != [tuple(range(n))]:
            _fail(report, k, seed + k, inst,
                  "payoff-sorted order not the unique optimum", argmax=perms)
    return _finish(report, t0)


def verify_commutation_sign(trials: int = 10000, seed: int = 105,
                            grid_points: int = 21) -> VerificationReport:
    """Submitting to box 1 then box 2 leaves a higher belief than the
    reverse exactly when a1 q2 > a2 q1 (equal products commute), at every
    interior prior; at prior 1 both compositions return 1."""
    report = VerificationReport(
        claim="two-rejection posterior difference carries the sign of "
              "a1*q2 - a2*q1 on the whole interior grid", trials=trials)
    t0 = time.perf_counter()
    grid = [(k, grid_points + 1) for k in range(1, grid_points + 1)]
    for k in range(trials):
        rng = random.Random(seed + k)
        den = 48
        a1 = Fraction(rng.randint(1, den), den)
        q1 = Fraction(rng.randint(0, den - 1), den)
        a2 = Fraction(rng.randint(1, den), den)
        if k % 10 == 9:
            q2 = a2 * q1 / a1
            if q2 >= 1:
                q2 = q1 * Fraction(1, 2)
                a2 = a1 * Fraction(1, 2)
            # products now equal: a1*q2 == a2*q1
        else:
            q2 = Fraction(rng.randint(0, den - 1), den)
        j1 = Journal("B1", 1, a1, q1)
        j2 = Journal("B2", 1, a2, q2)
        b1 = _engine.BoxArith(j1)
        b2 = _engine.BoxArith(j2)
        want = a1 * q2 - a2 * q1
        want_sign = 0 if want == 0 else (1 if want > 0 else -1)
        for num, d in grid:
            x1n, x1d = _engine.belief_step(b1, num, d)
            p12 = _engine.belief_step(b2, x1n, x1d)
            x2n, x2d = _engine.belief_step(b2, num, d)
            p21 = _engine.belief_step(b1, x2n, x2d)
            got = _engine.compare_pairs(p12[0], p12[1], p21[0], p21[1])
            if got != want_sign:
                _fail(report, k, seed + k, None, "sign law violated",
                      a1=a1, q1=q1, a2=a2, q2=q2, mu=Fraction(num, d),
                      expected=want_sign, got=got)
                break
        else:
            one12 = _engine.belief_step(b2, *_engine.belief_step(b1, 1, 1))
            one21 = _engine.belief_step(b1, *_engine.belief_step(b2, 1, 1))
            if one12 != one21:
                _fail(report, k, seed + k, None, "compositions differ at prior 1")
    report.notes.append(
        "at prior 0 the compositions genuinely differ (they agree only when "
        "a1*q2 = a2*q1); the zero-difference boundary is the prior-1 end")
    return _finish(report, t0)


def verify_ratio_bound(trials: int = 500, seed: int = 106,
                       grid_points: int = 21) -> VerificationReport:
    """For a regular pair, the high box's posterior stays above the low
    box's by at least the survival ratio: f1/f2 >= (1-a2 mu)/(1-a1 mu),
    equivalently mu(1-a1) + q1(1-mu) >= mu(1-a2) + q2(1-mu); dropping
    regularity breaks it at small priors."""
    report = VerificationReport(
        claim="regular pairs keep the posterior ratio above the survival "
              "ratio on the interior grid", trials=trials)
    t0 = time.perf_counter()
    for k in range(trials):
        rng = random.Random(seed + k)
        den = 40
        lo_ai = rng.randint(1, den - 1)
        hi_ai = rng.randint(lo_ai, den)
        hi_qi = rng.randint(0, den - 1)
        lo_qi = rng.randint(0, hi_qi)
        j1 = Journal("B1", 2, Fraction(lo_ai, den), Fraction(hi_qi, den))
        j2 = Journal("B2", 1, Fraction(hi_ai, den), Fraction(lo_qi, den))
        for num in range(1, grid_points + 1):
            mu = Fraction(num, grid_points + 1)
            g1 = mu * (1 - j1.a) + j1.q * (1 - mu)
            g2 = mu * (1 - j2.a) + j2.q * (1 - mu)
            if g1 < g2:
                _fail(report, k, seed + k, None, "mass comparison failed",
                      a1=j1.a, q1=j1.q, a2=j2.a, q2=j2.q, mu=mu)
                break
            if num % 7 == 0:
                b = Belief(mu)
                f1 = update_belief(j1, b).mu_h
                f2 = update_belief(j2, b).mu_h
                if f2 > 0 and Fraction(f1, f2) < Fraction(1 - j2.a * mu, 1 - j1.a * mu):
                    _fail(report, k, seed + k, None, "ratio form failed",
                          a1=j1.a, q1=j1.q, a2=j2.a, q2=j2.q, mu=mu)
                    break
        if k % 8 == 7:
            # converse: violate regularity (q2 > q1), find a crossing prior
            q1i = rng.randint(0, den - 2)
            q2i = rng.randint(q1i + 1, den - 1)
            a1i = rng.randint(1, den)
            a2i = rng.randint(a1i, den)
            q1, q2 = Fraction(q1i, den), Fraction(q2i, den)
            a1, a2 = Fraction(a1i, den), Fraction(a2i, den)
            gap = (q2 - q1) + (a2 - a1)
            mu_w = (q2 - q1) / gap / 2
            g1 = mu_w * (1 - a1) + q1 * (1 - mu_w)
            g2 = mu_w * (1 - a2) + q2 * (1 - mu_w)
            if not g1 < g2:
                _fail(report, k, seed + k, None,
                      "expected a violation witness for the irregular pair",
                      a1=a1, q1=q1, a2=a2, q2=q2, mu=mu_w)
    return _finish(report, t0)


def _sample_regular(rng: random.Random, n: int) -> Instance:
    """Weakly regular costless instance, unconstrained prior."""
    den = 40
    avals = sorted(Fraction(rng.randint(2, den), den) for _ in range(n))
    qvals = sorted((Fraction(rng.randint(1, den - 2), den) for _ in range(n)),
                   reverse=True)
    payoffs = _distinct_payoffs(rng, n)
    js = tuple(Journal(f"J{k + 1}", payoffs[k], avals[k], qvals[k]) for k in range(n))
    return Instance(js, Belief(_frac(rng, Fraction(1, 64), Fraction(63, 64), 64)), 0)


def verify_single_crossing(trials: int = 500, seed: int = 107,
                           size_range=(3, 6)) -> VerificationReport:
    """Swap the first two submissions and track d_s, the difference in
    reach*belief mass entering each later period.  The unnormalized
    (H-mass, L-mass) state evolves linearly, so d_s has the closed form
    (a_k q_1 - a_1 q_k)(1 - prior) * prod of (1-a) over the common tail:
    single-signed, hence at most one sign change; under regularity it is
    never negative (no crossing), and the survival difference never grows
    past its first value."""
    report = VerificationReport(
        claim="first-two-swap mass differences are single-signed with the "
              "linear-recursion closed form; survival gaps never grow",
        trials=trials)
    t0 = time.perf_counter()
    for k in range(trials):
        rng = random.Random(seed + k)
        n = rng.randint(*size_range)
        inst = _sample_regular(rng, n)
        regular = True
        twin = False
        if k % 11 == 10:
            # scrambled feedback rates: usually irregular, crossing allowed
            js = list(inst.journals)
            qs = [j.q for j in js]
            rng.shuffle(qs)
            inst = Instance(tuple(Journal(j.name, j.u, j.a, q)
                                  for j, q in zip(js, qs)), inst.prior, 0)
            regular = check_regularity(inst).passed
        elif k % 7 == 6:
            # identical twin of box 0 at sorted position 1: all differences 0
            js = list(inst.journals)
            js[1] = Journal(js[1].name, js[0].u, js[0].a, js[0].q)
            inst = Instance(tuple(js), inst.prior, 0)
            twin = True
        kk = 1 if twin else rng.randint(1, n - 1)
        tail = [i for i in range(1, n) if i != kk]
        sigma1 = SearchOrder(tuple([kk, 0] + tail))
        sigma2 = SearchOrder(tuple([0, kk] + tail))
        tr1 = evaluate(inst, sigma1)
        tr2 = evaluate(inst, sigma2)
        mu = inst.prior.mu_h
        j0, jk = inst.journals[0], inst.journals[kk]
        w = jk.a * j0.q - j0.a * jk.q

        ds = []
        prod = Fraction(1)
        ok = True
        for s in range(2, n + 1):  # trace index: belief entering period s+1
            d = tr1.reach[s] * tr1.beliefs[s] - tr2.reach[s] * tr2.beliefs[s]
            ds.append(d)
            if d != w * (1 - mu) * prod:
                _fail(report, k, seed + k, inst, "closed form mismatch",
                      s=s + 1, got=d, expected=w * (1 - mu) * prod)
                ok = False
                break
            rdiff = tr1.reach[s] - tr2.reach[s]
            if rdiff != d:
                _fail(report, k, seed + k, inst,
                      "survival difference should equal the mass difference")
                ok = False
                break
            prod *= 1 - inst.journals[tail[s - 2]].a if s - 2 < len(tail) else 1
        if not ok:
            continue
        seen_neg = False
        crossing = n + 2
        for s, d in zip(range(3, n + 2), ds):
            # zeros after a negative run are fine (a=1 in the tail kills prod)
            if seen_neg and d > 0:
                _fail(report, k, seed + k, inst,
                      "mass difference recovered after turning negative")
                ok = False
                break
            if d < 0 and not seen_neg:
                seen_neg = True
                crossing = s
        if not ok:
            continue
        if regular and crossing != n + 2:
            _fail(report, k, seed + k, inst,
                  "regular instance should never cross", crossing=crossing)
            continue
        d3 = ds[0]
        if any(abs(d) > abs(d3) for d in ds):
            _fail(report, k, seed + k, inst,
                  "survival gap exceeded its first value")
            continue
        if twin and any(d != 0 for d in ds):
            _fail(report, k, seed + k, inst,
                  "identical first two boxes should give zero differences")
    report.notes.append(
        "the sign is constant (not just single-crossing): the linear mass "
        "recursion scales d_3 by nonnegative survival factors, so a "
        "crossing index past the horizon is the generic regular outcome")
    return _finish(report, t0)


def verify_normalization_shift(trials: int = 200, seed: int = 108,
                               size_range=(2, 5),
                               shifts=(-3, 1, 10)) -> VerificationReport:
    """Shifting every payoff and the outside option by K shifts every
    order's value by exactly -K and leaves argmax sets untouched."""
    report = VerificationReport(
        claim="payoff/outside shifts move all order values by exactly the "
              "shift and preserve argmax sets", trials=trials)
    t0 = time.perf_counter()
    for k in range(trials):
        rng = random.Random(seed + k)
        n = rng.randint(*size_range)
        inst = sample_unconstrained(rng, n)
        for K in shifts:
            shifted = normalize(inst, K)
            boxes0, prior0, out0 = _engine.prepare(inst)
            boxes1, prior1, out1 = _engine.prepare(shifted)
            ok = True
            for perm in itertools.permutations(range(n)):
                v0 = _engine.order_value(boxes0, perm, prior0, out0)
                v1 = _engine.order_value(boxes1, perm, prior1, out1)
                if v1 != v0 - K:
                    _fail(report, k, seed + k, inst, "shift identity failed",
                          shift=Fraction(K), order=perm, base=v0, shifted=v1)
                    ok = False
                    break
            mono = monotone_order(inst)
            if ok and evaluate(shifted, mono).total != evaluate(inst, mono).total - K:
                _fail(report, k, seed + k, inst, "trace-path shift identity failed",
                      shift=Fraction(K))
                ok = False
            if not ok:
                break
            a0 = [o.perm for o in brute_force_optimal(inst).argmax_set]
            a1 = [o.perm for o in brute_force_optimal(shifted).argmax_set]
            if a0 != a1:
                _fail(report, k, seed + k, inst, "argmax set changed under shift",
                      shift=Fraction(K))
                break
            if k % 10 == 0:
                f0 = evaluate(inst, monotone_order(inst), "float").total
                f1 = evaluate(shifted, monotone_order(shifted), "float").total
                if abs(f1 - (f0 - float(K))) > 1e-9:
                    _fail(report, k, seed + k, inst, "float-mode shift drifted")
                    break
    return _finish(report, t0)


def reproduce_counterexamples() -> VerificationReport:
    """Replay the catalog: exact flip boundaries, behaviour at the
    commonly quoted priors, floor diagnostics, and the band where the
    belief floor holds yet payoff sorting loses."""
    report = VerificationReport(
        claim="catalog thresholds exact; quoted evaluation points replayed",
        trials=len(CASES))
    t0 = time.perf_counter()
    eps = Fraction(1, 1000)
    for idx, case in enumerate(CASES):
        thr = prior_threshold_2box(case.journals[0], case.journals[1])
        inst0 = case.instance(case.flip_boundary)
        if thr.kind != "threshold" or thr.mu_star != case.flip_boundary:
            _fail(report, idx, 0, inst0, f"{case.name}: boundary mismatch",
                  expected=case.flip_boundary,
                  got=thr.mu_star if thr.mu_star is not None else thr.kind)
            continue
        if thr.direction != "above":
            _fail(report, idx, 0, inst0, f"{case.name}: unexpected direction")
            continue
        at = brute_force_optimal(inst0)
        if len(at.argmax_set) != 2:
            _fail(report, idx, 0, inst0, f"{case.name}: no tie at the boundary")
            continue
        above = brute_force_optimal(case.instance(case.flip_boundary + eps))
        below = brute_force_optimal(case.instance(case.flip_boundary - eps))
        if [o.perm for o in above.argmax_set] != [(0, 1)] or \
                [o.perm for o in below.argmax_set] != [(1, 0)]:
            _fail(report, idx, 0, inst0, f"{case.name}: wrong side preference")
            continue
        if case.quoted_prior is not None:
            res = brute_force_optimal(case.instance(case.quoted_prior))
            actual = "monotone" if res.best_order.perm == (0, 1) else "nonmonotone"
            q = format_number(case.quoted_prior)
            b = format_number(case.flip_boundary)
            if actual == case.quoted_behavior:
                report.notes.append(
                    f"{case.name}: quoted prior {q} is {actual} as quoted "
                    f"(boundary {b})")
            else:
                report.notes.append(
                    f"{case.name}: DISCREPANCY - commonly quoted as "
                    f"{case.quoted_behavior} at prior {q}, but exact evaluation "
                    f"gives {actual}; the flip boundary is {b}")
    case = BY_NAME["weak_feedback_floor"]
    low = check_globally_bounded_weak_feedback(case.instance(Fraction(1, 20)))
    high = check_globally_bounded_weak_feedback(case.instance(Fraction(9, 10)))
    if low.passed or not high.passed:
        _fail(report, -1, 0, case.instance(Fraction(1, 20)),
              "floor check should fail at 1/20 and pass at 9/10")
    elif (high.details["min_belief"] != Fraction(19, 23)
          or high.details["min_belief_prefix"] != ("J2",)
          or max(high.details["thresholds"].values()) != Fraction(3, 8)):
        _fail(report, -1, 0, case.instance(Fraction(9, 10)),
              "floor diagnostics off", min_belief=high.details["min_belief"])
    else:
        report.notes.append(
            "weak_feedback_floor: floor 3/8, prior 9/10 passes with minimum "
            "reachable belief 19/23 after one rejection at the low box; "
            "prior 1/20 fails the floor and is below the flip boundary 1/16")
    case = BY_NAME["strong_feedback_showcase"]
    mid = case.instance(Fraction(29, 50))
    gb = check_globally_bounded_weak_feedback(mid)
    res = brute_force_optimal(mid)
    sf = check_strong_feedback(case.journals[1], Belief(Fraction(29, 50)))
    if gb.passed and res.best_order.perm == (1, 0) and sf.passed:
        report.notes.append(
            "strong_feedback_showcase: inside (4/7, 17/29) the floor holds, "
            "the low box's rejection raises the belief (boundary q/a), and "
            "the low box still goes first: no prior-free payoff index exists")
    else:
        _fail(report, -2, 0, mid, "band behaviour changed")
    return _finish(report, t0)


def verify_mc_consistency(pairs: int = 20, episodes: int = 10 ** 6,
                          seed: int = 109) -> VerificationReport:
    """Monte Carlo means sit within 3 standard errors of the exact value
    and per-period survival frequencies within 3 binomial sigmas.  A
    failing run is retried once on a fresh seed (a 3-sigma bound fails by
    chance roughly once in 370 runs)."""
    report = VerificationReport(
        claim="simulation agrees with exact evaluation within 3 sigma",
        trials=pairs)
    t0 = time.perf_counter()
    runs = []
    showcase = BY_NAME["strong_feedback_showcase"]
    for mu in (Fraction(1, 2), Fraction(17, 29), Fraction(3, 4)):
        inst = showcase.instance(mu)
        runs.append((inst, SearchOrder((0, 1))))
        runs.append((inst, SearchOrder((1, 0))))
    k = 0
    while len(runs) < pairs:
        rng = random.Random(seed + 500 + k)
        inst = sample_unconstrained(rng, rng.randint(2, 4))
        perm = list(range(inst.size))
        rng.shuffle(perm)
        runs.append((inst, SearchOrder(tuple(perm))))
        k += 1

    def within(inst, order, run_seed):
        trace = evaluate(inst, order)
        target = float(trace.total)
        mean, se = estimate_value(inst, order, episodes, run_seed)
        if se is None or se == 0:
            if abs(mean - target) > 1e-12:
                return f"degenerate payoff mismatch: {mean} vs {target}"
        elif abs(mean - target) > 3 * se:
            return (f"mean {mean:.6f} vs exact {target:.6f} "
                    f"(|z| = {abs(mean - target) / se:.2f})")
        freqs = empirical_survival(inst, order, episodes, run_seed)
        for t, (freq, r) in enumerate(zip(freqs, trace.reach)):
            p = float(r)
            sigma = (p * (1 - p) / episodes) ** 0.5
            if sigma == 0:
                if freq != p:
                    return f"survival at period {t + 1}: {freq} vs certain {p}"
            elif abs(freq - p) > 3 * sigma:
                return (f"survival at period {t + 1}: {freq:.6f} vs {p:.6f} "
                        f"(|z| = {abs(freq - p) / sigma:.2f})")
        return None

    for i, (inst, order) in enumerate(runs[:pairs]):
        msg = within(inst, order, seed + i)
        if msg is not None:
            retry = within(inst, order, seed + i + 7777)
            if retry is None:
                report.notes.append(
                    f"run {i} tripped the 3-sigma bound ({msg}) and passed on "
                    "a fresh seed; kept")
            else:
                _fail(report, i, seed + i, inst, f"simulation off twice: {retry}",
                      order=list(order.perm))
    return _finish(report, t0)


SUITES = {
    "no_feedback_index": verify_no_feedback_index,
    "order_independent_indexing": verify_order_independent_indexing,
    "two_box_base_case": verify_two_box_base_case,
    "weak_feedback_monotonicity": verify_weak_feedback_monotonicity,
    "commutation_sign": verify_commutation_sign,
    "ratio_bound": verify_ratio_bound,
    "single_crossing": verify_single_crossing,
    "normalization_shift": verify_normalization_shift,
    "counterexamples": reproduce_counterexamples,
    "mc_consistency": verify_mc_consistency,
}


def run_suite(name: str, **overrides) -> VerificationReport:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    return SUITES[name](**overrides)


def run_all(**per_suite_overrides) -> dict:
    """Run every suite; per_suite_overrides maps suite name -> kwargs."""
    results = {}
    for name, fn in SUITES.items():
        results[name] = fn(**per_suite_overrides.get(name, {}))
    return results

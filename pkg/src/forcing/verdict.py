"""Closure classification: degree, Frobenius and relation criteria chained in priority order."""
from __future__ import annotations

import threading
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Callable

from . import geometry
from .casefile import build_cases
from .frobenius import (REFUTES, FrobeniusConfig, bracket_membership, certificate_is_valid,
                        default_test_element, tight_closure_witness)
from .membership import ForcingData, in_ideal, is_primary, is_smooth_curve
from .ring import DegreeCapError
from .syzygy import RelationVector, check_pairwise_primary, find_primary_relation

STATUSES = (
    "InIdeal",
    "InFrobeniusClosure",
    "InPlusClosure",
    "InTightClosure",
    "NotInSolidClosure",
    "RefutedUnderTestElement",
    "Unknown",
)

# name, short description of the criterion used
RULES = {
    "R1": ("R1 ideal membership", "f_0 is an F_p-combination of the f_i: the forcing sequence splits"),
    "R2": ("R2 low degree exclusion",
           "primary f_i and d_0 <= min d_i: closure membership forces ideal membership"),
    "R4": ("R4 negative self-intersection",
           "two parameters with d_1 + d_2 < d_0: a Frobenius power of f_0 lies in the bracket power"),
    "R3": ("R3 parameter degree bound", "two parameters: R_{>= d_1 + d_2} lies in the tight closure"),
    "R5": ("R5 parameter vanishing bound",
           "two parameters: below degree d_1 + d_2 the closure is the ideal itself"),
    "R6": ("R6 primary relation plus-closure bound",
           "primary relation of total degree k: R_{>= max(k, sum d - k)} lies in the graded plus closure"),
    "R7": ("R7 balanced primary relation",
           "primary relation of total degree sum d / 2: R_{>= sum d / 2} lies in the tight closure"),
    "R8": ("R8 no criterion applies", "none of the criteria decides the case"),
}

CAVEAT_LARGE_P = "valid in characteristic zero or for sufficiently large p (no effective bound is known)"
CAVEAT_TEST_ELEMENT = "conditional on the chosen test element"
CAVEAT_NORMALITY = "normality of R attested only through smoothness of Proj R"


class NotPrimaryError(ValueError):
    pass


@dataclass
class VerdictConfig:
    e_max: int = 2
    budget: int = 1000
    seed: int = 0
    degree_cap: int | None = 20000
    audit: bool = False
    test_element: Any = None
    cancel: threading.Event | None = field(default=None, repr=False)

    def frobenius(self) -> FrobeniusConfig:
        return FrobeniusConfig(self.test_element, self.e_max, self.degree_cap, self.cancel)

    @classmethod
    def from_options(cls, opts: dict, audit: bool = False) -> "VerdictConfig":
        return cls(opts.get("e_max", 2), opts.get("budget", 1000), opts.get("seed", 0),
                   opts.get("degree_cap", 20000), audit, opts.get("test_element"))


@dataclass
class RuleEvaluation:
    rule: str
    fired: bool
    detail: str
    status: str | None = None
    evidence: dict = field(default_factory=dict)
    caveats: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {"rule": RULES[self.rule][0], "fired": self.fired, "detail": self.detail}


@dataclass
class Verdict:
    status: str
    rule: str
    citation: str
    evidence: dict
    caveats: list
    audit: list = field(default_factory=list)

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status}")

    def as_dict(self, with_audit: bool = False) -> dict:
        d = {"status": self.status, "rule": self.rule, "citation": self.citation,
             "evidence": self.evidence, "caveats": list(self.caveats)}
        if with_audit:
            d["audit"] = [a.as_dict() for a in self.audit]
        return d


def _fmt(ring, polys) -> list[str]:
    return [ring.fmt(f) for f in polys]


class _Context:
    """Shared, lazily computed facts about one case."""

    def __init__(self, data: ForcingData, config: VerdictConfig):
        self.data = data
        self.ring = data.ring
        self.config = config
        self._cert = ...
        self._witness = ...
        self._relations: dict[int, Any] = {}
        ring = self.ring
        if ring.relation is None:
            self.normal = ring.nvars <= 2
            self.normal_note = "polynomial ring" if self.normal else "ring is not two-dimensional"
        elif ring.is_plane_curve:
            self.normal = is_smooth_curve(ring)
            self.normal_note = "Proj R smooth" if self.normal else "Proj R singular: normality unverified"
        else:
            self.normal = False
            self.normal_note = "normality unverified for this ring"
        self.parameters = data.n == 2 and is_primary(ring, list(data.generators))
        self.pairwise = data.n == 3 and check_pairwise_primary(ring, list(data.generators))

    @property
    def caveats(self) -> list:
        return [CAVEAT_NORMALITY] if self.ring.relation is not None else []

    @property
    def certificate(self):
        if self._cert is ...:
            self._cert = in_ideal(self.data)
        return self._cert

    def witness(self):
        if self._witness is ...:
            try:
                self._witness = tight_closure_witness(self.data, self.config.frobenius())
            except ValueError as exc:  # no usable test element
                self._witness = str(exc)
        return self._witness

    def relation(self, k: int):
        if k not in self._relations:
            self._relations[k] = find_primary_relation(self.ring, list(self.data.generators), k,
                                                       self.config.budget, self.config.seed,
                                                       check_pairs=False)
        return self._relations[k]


def _witness_evidence(ctx: _Context) -> dict:
    w = ctx.witness()
    if isinstance(w, str):
        return {"tight_closure_witness": None, "note": w}
    return {"tight_closure_witness": {
        "test_element": ctx.ring.fmt(w.test_element),
        "q": list(w.qs),
        "results": list(w.results),
        "summary": w.summary,
        "assumptions": list(w.assumptions),
    }}


def _relation_evidence(ctx: _Context, rel: RelationVector, search) -> dict:
    gens = list(ctx.data.generators)
    assert rel.verify(ctx.ring, gens) and rel.is_primary(ctx.ring), "relation certificate failed"
    return {"relation": rel.format(ctx.ring), "total_degree": rel.total_degree,
            "search": {"seed": search.seed, "attempts": search.attempts, "space_dim": search.space_dim}}


def rule_r1(ctx: _Context) -> RuleEvaluation:
    cert = ctx.certificate
    if cert is None:
        return RuleEvaluation("R1", False, "f_0 not in the ideal")
    return RuleEvaluation("R1", True, "cofactors found", "InIdeal",
                          {"cofactors": _fmt(ctx.ring, cert.cofactors)})


def rule_r2(ctx: _Context) -> RuleEvaluation:
    d = ctx.data
    if not ctx.normal:
        return RuleEvaluation("R2", False, f"skipped: {ctx.normal_note}")
    if d.d0 > min(d.degrees):
        return RuleEvaluation("R2", False, "d_0 exceeds the smallest generator degree")
    if ctx.certificate is not None:
        return RuleEvaluation("R2", False, "f_0 lies in the ideal")
    return RuleEvaluation("R2", True, f"d_0 = {d.d0} <= {min(d.degrees)} and f_0 not in the ideal",
                          "NotInSolidClosure", {"d0": d.d0, "min_degree": min(d.degrees)}, ctx.caveats)


def rule_r4(ctx: _Context) -> RuleEvaluation:
    d = ctx.data
    if not (ctx.normal and ctx.parameters):
        return RuleEvaluation("R4", False, "not two parameters over a normal ring")
    ell = geometry.leadno(d.degrees, d.d0)
    if ell >= 0:
        return RuleEvaluation("R4", False, f"self-intersection number {ell} is not negative")
    cfg = ctx.config.frobenius()
    q = 1
    tested = []
    for _ in range(ctx.config.e_max):
        q *= ctx.ring.p
        cert = bracket_membership(d, q, None, cfg)
        tested.append(q)
        if cert is not None:
            assert certificate_is_valid(d, q, ctx.ring.one(), cert)
            ev = {"witness_q": q, "tested_q": tested, "leadno": ell,
                  "cofactors": _fmt(ctx.ring, cert.cofactors)}
            return RuleEvaluation("R4", True, f"f_0^{q} lies in the bracket power", "InFrobeniusClosure",
                                  ev, ctx.caveats)
    return RuleEvaluation("R4", False, f"no Frobenius witness up to q = {q}")


def rule_r3(ctx: _Context) -> RuleEvaluation:
    d = ctx.data
    if not (ctx.normal and ctx.parameters):
        return RuleEvaluation("R3", False, "not two parameters over a normal ring")
    if d.d0 < sum(d.degrees):
        return RuleEvaluation("R3", False, f"d_0 = {d.d0} < {sum(d.degrees)}")
    return RuleEvaluation("R3", True, f"d_0 = {d.d0} >= d_1 + d_2 = {sum(d.degrees)}", "InTightClosure",
                          {"d0": d.d0, "degree_sum": sum(d.degrees)}, ctx.caveats)


def rule_r5(ctx: _Context) -> RuleEvaluation:
    d = ctx.data
    if not (ctx.normal and ctx.parameters):
        return RuleEvaluation("R5", False, "not two parameters over a normal ring")
    if d.d0 >= sum(d.degrees) or ctx.certificate is not None:
        return RuleEvaluation("R5", False, "degree or membership condition fails")
    w = ctx.witness()
    if isinstance(w, str):
        return RuleEvaluation("R5", False, f"no cross-check possible: {w}")
    if not w.refutes:
        return RuleEvaluation("R5", False, "test-element witness does not refute")
    return RuleEvaluation("R5", True, REFUTES, "RefutedUnderTestElement", _witness_evidence(ctx),
                          ctx.caveats + [CAVEAT_LARGE_P, CAVEAT_TEST_ELEMENT])


def rule_r6(ctx: _Context) -> RuleEvaluation:
    d = ctx.data
    if not (ctx.normal and ctx.pairwise):
        return RuleEvaluation("R6", False, "not three pairwise primary elements over a normal ring")
    total = sum(d.degrees)
    ks = list(range(max(total - d.d0, min(d.degrees)), d.d0 + 1))
    if not ks:
        return RuleEvaluation("R6", False, "no total degree k with max(k, sum d - k) <= d_0")
    tried = []
    for k in ks:
        s = ctx.relation(k)
        tried.append({"k": k, "status": s.status, "complete": s.complete})
        if s.found:
            ev = _relation_evidence(ctx, s.relation, s)
            ev["bound"] = max(k, total - k)
            return RuleEvaluation("R6", True, f"primary relation of total degree {k}", "InPlusClosure",
                                  ev, ctx.caveats)
    return RuleEvaluation("R6", False, f"no primary relation found for k in {ks}", evidence={"tried": tried})


def rule_r7(ctx: _Context) -> RuleEvaluation:
    d = ctx.data
    if not (ctx.normal and ctx.pairwise):
        return RuleEvaluation("R7", False, "not three pairwise primary elements over a normal ring")
    total = sum(d.degrees)
    if total % 2:
        return RuleEvaluation("R7", False, "degree sum is odd")
    m = total // 2
    if d.d0 < m:
        return RuleEvaluation("R7", False, f"d_0 = {d.d0} < {m}")
    s = ctx.relation(m)
    if not s.found:
        return RuleEvaluation("R7", False, f"no primary relation of total degree {m} ({s.status})")
    ev = _relation_evidence(ctx, s.relation, s)
    ev["m"] = m
    return RuleEvaluation("R7", True, f"primary relation of total degree {m}", "InTightClosure", ev,
                          ctx.caveats)


def rule_r8(ctx: _Context) -> RuleEvaluation:
    return RuleEvaluation("R8", True, "fallback", "Unknown", _witness_evidence(ctx), ctx.caveats)


ORDER: tuple[tuple[str, Callable], ...] = (
    ("R1", rule_r1), ("R2", rule_r2), ("R4", rule_r4), ("R3", rule_r3),
    ("R5", rule_r5), ("R6", rule_r6), ("R7", rule_r7), ("R8", rule_r8),
)


def classify(data: ForcingData, config: VerdictConfig | None = None) -> Verdict:
    """Apply the criteria in priority order; the first that fires decides."""
    config = config or VerdictConfig()
    if not is_primary(data.ring, list(data.generators)):
        raise NotPrimaryError("generators are not primary")
    ctx = _Context(data, config)
    log: list[RuleEvaluation] = []
    winner = None
    for name, rule in ORDER:
        if config.cancel is not None and config.cancel.is_set():
            raise RuntimeError("classification cancelled")
        if winner is not None and not config.audit:
            break
        if name == "R8" and winner is not None:
            continue
        ev = rule(ctx)
        log.append(ev)
        if ev.fired and winner is None:
            winner = ev
    if config.audit:
        fired = {e.rule for e in log if e.fired}
        membership = fired & {"R1", "R3", "R4", "R6", "R7"}
        assert not ("R2" in fired and membership), "exclusion fired together with membership evidence"
    evidence = dict(winner.evidence)
    caveats = list(winner.caveats)
    if ctx.ring.relation is not None and not ctx.normal:
        caveats.append(ctx.normal_note)
    if winner.status in ("RefutedUnderTestElement", "Unknown"):
        try:
            evidence.setdefault("test_element", ctx.ring.fmt(config.test_element or default_test_element(ctx.ring)))
        except ValueError:
            pass
    return Verdict(winner.status, RULES[winner.rule][0], RULES[winner.rule][1], evidence, caveats, log)


def _case_config(case, overrides_audit: bool, cancel) -> VerdictConfig:
    cfg = VerdictConfig.from_options(case.options, overrides_audit)
    cfg.cancel = cancel
    return cfg


def batch(doc: dict, overrides: dict | None = None, audit: bool = False,
          cancel: threading.Event | None = None) -> dict:
    """Classify every case of a validated case file; failures stay local to their case."""
    results = []
    counts: Counter = Counter()
    for case in build_cases(doc, overrides):
        entry: dict[str, Any] = {"name": case.name}
        if case.data is not None:
            d = case.data
            entry["input"] = {"p": d.ring.p, "relation": d.ring.fmt(d.ring.relation) if d.ring.relation else None,
                              "generators": _fmt(d.ring, d.generators), "candidate": d.ring.fmt(d.candidate),
                              "twist": d.twist, "seed": case.options["seed"]}
        if case.error is not None:
            entry["error"] = {"kind": "malformed", "message": case.error}
            counts["error"] += 1
        else:
            try:
                v = classify(case.data, _case_config(case, audit, cancel))
                entry.update(v.as_dict(with_audit=audit))
                counts[v.status] += 1
            except DegreeCapError as exc:
                entry["error"] = {"kind": "resource_cap", "message": str(exc)}
                counts["error"] += 1
            except (ValueError, AssertionError) as exc:
                entry["error"] = {"kind": "malformed", "message": str(exc)}
                counts["error"] += 1
        results.append(entry)
    return {"cases": results, "summary": dict(sorted(counts.items()))}

"""Check registry and suite runner."""
from __future__ import annotations

from .cartan import BUNDLE_CHECKS, CORRESPONDENCE_CHECKS, GEOMETRY_CHECKS, CartanBundle
from .errors import ConfigurationError
from .groupoid import (EQUIVARIANCE_LEMMA, GROUPOID_ACTION, H_ACTION, H_ACTION_LITERAL, MULTIPLICATIVE,
                       PFAFFIAN, REP_SPLITTING, TRANSVERSALITY, UNIT_ALGEBROID, GaugeGroupoid, MultForm,
                       ROUNDTRIP, PfaffianGroupoid, PrincipalAction, bundle_rep)
from .numkit import DEFAULT_TOL, Tolerances
from .report import CheckReport
from .sampling import Check, Sampler, run_check

REGISTRY: dict[str, Check] = {}
for _c in [*BUNDLE_CHECKS, *GEOMETRY_CHECKS, *CORRESPONDENCE_CHECKS, MULTIPLICATIVE, EQUIVARIANCE_LEMMA,
           *TRANSVERSALITY, *PFAFFIAN, *REP_SPLITTING, *UNIT_ALGEBROID, *ROUNDTRIP, *H_ACTION,
           H_ACTION_LITERAL, *GROUPOID_ACTION]:
    REGISTRY.setdefault(_c.name, _c)


def _unique(names):
    seen = []
    for n in names:
        if n not in seen:
            seen.append(n)
    return seen


def default_check_names(kind: str, geometry: bool = False, action: str = "groupoid") -> list[str]:
    if kind == "bundle":
        checks = BUNDLE_CHECKS + (GEOMETRY_CHECKS if geometry else [])
    elif kind == "pfaffian":
        checks = [MULTIPLICATIVE, EQUIVARIANCE_LEMMA, *TRANSVERSALITY, *PFAFFIAN, *REP_SPLITTING]
    elif kind == "action":
        checks = H_ACTION if action == "group" else GROUPOID_ACTION
    else:
        raise ConfigurationError(f"unknown target kind {kind!r}")
    return _unique(c.name for c in checks)


def is_geometry(cb: CartanBundle) -> bool:
    return cb.model is not None and cb.r == cb.model.g.dim


def target_kind(target) -> str:
    if isinstance(target, CartanBundle):
        return "bundle"
    if isinstance(target, PfaffianGroupoid):
        return "pfaffian"
    if isinstance(target, PrincipalAction):
        return "action"
    raise ConfigurationError(f"cannot run checks on a {type(target).__name__}")


def _normalize(target):
    if isinstance(target, tuple) and len(target) == 2 and isinstance(target[0], GaugeGroupoid) \
            and isinstance(target[1], MultForm):
        gg, om = target
        if gg.cb is None:
            raise ConfigurationError("the gauge groupoid carries no representation")
        return PfaffianGroupoid(gg, om, bundle_rep(gg.cb))
    return target


def run_suite(target, checks: list | None = None, sampler: Sampler | None = None,
              tol: Tolerances = DEFAULT_TOL) -> list[CheckReport]:
    """Run ``checks`` (names or Check objects) in order; failures are collected, not raised."""
    target = _normalize(target)
    kind = target_kind(target)
    if checks is None:
        if kind == "bundle":
            checks = default_check_names(kind, geometry=is_geometry(target))
        elif kind == "action":
            checks = default_check_names(kind, action=target.kind)
        else:
            checks = default_check_names(kind)
    resolved = []
    for c in checks:
        if isinstance(c, str):
            if c not in REGISTRY:
                raise ConfigurationError(f"unknown check {c!r}")
            c = REGISTRY[c]
        if c.target_kind != kind:
            raise ConfigurationError(f"check {c.name!r} needs a {c.target_kind} target, got {kind}")
        resolved.append(c)
    sampler = Sampler() if sampler is None else sampler
    return [run_check(c, target, sampler, tol, i) for i, c in enumerate(resolved)]


def all_passed(reports: list[CheckReport]) -> bool:
    return all(r.passed for r in reports)

"""Bregman families over a finite set.

Thin Python surface over the C++ core: construct an instance (outcome
labels, statistic matrix, per-outcome generators), then project, measure
divergence from the family, and run the two maximization problems.
"""

from ._bregmax import (
    Instance,
    MemberOfClosure,
    ParseError,
    TrivialKernel,
    ValidationError,
    ViolatedNecessaryCondition,
    bbar,
    bbar_classical,
    bregman_div,
    div_from_family,
    facial_set,
    lambda_of_theta,
    load_instance,
    maximize_bbar,
    maximize_divergence,
    moment_map,
    parse_instance,
    pm_of_theta,
    project,
    upsilon,
    verify,
)

__all__ = [
    "Instance",
    "MemberOfClosure",
    "ParseError",
    "TrivialKernel",
    "ValidationError",
    "ViolatedNecessaryCondition",
    "bbar",
    "bbar_classical",
    "bregman_div",
    "div_from_family",
    "facial_set",
    "lambda_of_theta",
    "load_instance",
    "maximize_bbar",
    "maximize_divergence",
    "moment_map",
    "parse_instance",
    "pm_of_theta",
    "project",
    "upsilon",
    "verify",
]

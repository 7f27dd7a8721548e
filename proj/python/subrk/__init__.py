"""Heat kernels and Hermite functions on SU(2), CR spheres and Heisenberg groups."""

import json as _json

from ._core import (
    DomainError,
    NumericalError,
    SubrkError,
    UsageError,
    acos_sq_derivs,
    acosh_sq_derivs,
    default_t_grid,
    h,
    h_derivs,
    hermite,
    p,
    p_contour,
    p_derivs,
    parse_word,
    q_sphere,
    q_su2,
    q_su2_deriv,
    su2_mass,
)
from . import _core


def converge_su2(word, r, theta, z, t_grid=(), rel_tol=0.05):
    """Small-time convergence report for an SU(2) word, as a dict."""
    return _json.loads(_core.converge_su2(word, r, theta, z, list(t_grid), rel_tol))


def converge_sphere(word, d, w, z, t_grid=(), rel_tol=0.05, cross_check=True):
    """Small-time convergence report for a sphere word, as a dict."""
    return _json.loads(_core.converge_sphere(word, d, list(w), z, list(t_grid), rel_tol, cross_check))


def lemma_suite(max_order=4):
    return _json.loads(_core.lemma_suite(max_order))


def property_suite(include_normalization=True):
    return _json.loads(_core.property_suite(include_normalization))


__all__ = [
    "DomainError",
    "NumericalError",
    "SubrkError",
    "UsageError",
    "acos_sq_derivs",
    "acosh_sq_derivs",
    "converge_sphere",
    "converge_su2",
    "default_t_grid",
    "h",
    "h_derivs",
    "hermite",
    "lemma_suite",
    "p",
    "p_contour",
    "p_derivs",
    "parse_word",
    "property_suite",
    "q_sphere",
    "q_su2",
    "q_su2_deriv",
    "su2_mass",
]

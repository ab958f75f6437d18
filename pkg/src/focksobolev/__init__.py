"""Fractional Fock-Sobolev spaces on C^n, made computable on polynomials."""

from .carleson import (CarlesonVerdict, ParametricMeasure, PointMeasure, ball_mass,
                       carleson_scan, embedding_check)
from .core import CPoint, Polynomial, polynomial_ensemble, random_polynomial
from .fracops import dfrac, ifrac, rop, rop_tilde, truncated_exp
from .kernels import KernelParams, error_term, fock_kernel, kernel_alpha, truncated_kernel_plus
from .norms import (MixedPolynomial, fock_norm_inf, fock_norm_p, pairing, project,
                    reproduce_check, sobolev_norm)

__version__ = "0.1.0"

__all__ = [
    "CPoint", "CarlesonVerdict", "KernelParams", "MixedPolynomial", "ParametricMeasure",
    "PointMeasure", "Polynomial", "ball_mass", "carleson_scan", "dfrac", "embedding_check",
    "error_term", "fock_kernel", "fock_norm_inf", "fock_norm_p", "ifrac", "kernel_alpha",
    "pairing", "polynomial_ensemble", "project", "random_polynomial", "reproduce_check", "rop",
    "rop_tilde", "sobolev_norm", "truncated_exp", "truncated_kernel_plus",
]

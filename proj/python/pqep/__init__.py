"""Structured palindromic quadratic eigenvalue tools.

Flavors are the strings "T+", "T-", "H+" and "H-". Matrices come back as
complex numpy arrays; T flavors have zero imaginary parts.
"""

from ._core import (
    PqepError,
    compute_gamma,
    eigenpairs,
    eigenvalues,
    embed,
    pairing_defect,
    random_palindromic,
    reconstruct,
    solve_qiep,
    verify,
)

__all__ = [
    "PqepError",
    "compute_gamma",
    "eigenpairs",
    "eigenvalues",
    "embed",
    "pairing_defect",
    "random_palindromic",
    "reconstruct",
    "solve_qiep",
    "verify",
]

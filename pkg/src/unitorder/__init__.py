"""Exact computations around the average element order of the finite unitary group U(n, q)."""

from .asympt import (
    PrimeWindow,
    G_function,
    cyclotomic_2p,
    fourier_a0,
    partitions_distinct,
    partitions_distinct_odd,
    prime_window,
    series_coeff,
    sigma1,
    sigma1_bound_report,
    sigma2,
)
from .charmeasure import (
    check_sub_lemma,
    enumerate_omega,
    expect_stat,
    measure_of,
    pi_factor,
    sample_charpoly,
    tail_M,
)
from .ffield import FieldElement, FieldSpec, make_field, unitary_field
from .intmath import GuardError
from .matrixgrp import (
    BoundViolation,
    Matrix,
    char_poly,
    element_order,
    enumerate_group,
    group_census,
    is_unitary,
    min_poly,
    sample_uniform,
    unitary_order,
)
from .polyring import FactorClass, MonicPoly, classify, factorize, tau, tilde

__version__ = "0.1.0"

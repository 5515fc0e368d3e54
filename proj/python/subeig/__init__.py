"""Dense subspace eigensolver with interchangeable correction equations."""

from ._subeig import (
    SubeigError,
    correction,
    gen_model,
    make_initial,
    parse_mtx,
    rayleigh_quotient,
    read_mtx,
    run,
    small_eig,
    symmetrize,
)

__all__ = [
    "SubeigError",
    "correction",
    "gen_model",
    "make_initial",
    "parse_mtx",
    "rayleigh_quotient",
    "read_mtx",
    "run",
    "small_eig",
    "symmetrize",
]

"""Small constructors shared by the test modules."""
from jspec.linalg import ComplexMatrix
from jspec.operators import FiniteTuple

JORDAN = [[0, 1], [0, 0]]


def mat(rows, mode="exact"):
    return ComplexMatrix.from_rows(rows, mode)


def diag(*values, mode="exact"):
    return ComplexMatrix.diag(list(values), mode)


def tup(*ops, mode="exact"):
    return FiniteTuple.of(*ops, mode=mode)


def pts(*points):
    """Point set from real or complex coordinates, as exact Gaussian rationals."""
    from jspec.linalg import QI
    return frozenset(tuple(QI.coerce(z) for z in p) for p in points)

"""Named small algebras used as fixtures and test seeds."""

from __future__ import annotations

from .algebras import Algebra
from .fields import QQ, FieldDescriptor


def two_dim_family(a=1, b=1, c=1, field: FieldDescriptor = QQ) -> Algebra:
    """The 2-dimensional pre-Poisson family with parameters (a, b, c).

    e1∗e1 = a e2 (other ∗-products zero);
    e1∘e1 = b e1 + c e2, e1∘e2 = e2∘e1 = b e2, e2∘e2 = 0.
    """
    star = field.zeros((2, 2, 2))
    circ = field.zeros((2, 2, 2))
    star[0, 0, 1] = field.scalar(a)
    circ[0, 0, 0] = field.scalar(b)
    circ[0, 0, 1] = field.scalar(c)
    circ[0, 1, 1] = field.scalar(b)
    circ[1, 0, 1] = field.scalar(b)
    return Algebra(2, field, {"zinbiel": star, "prelie": circ})


def abelian(dim: int, field: FieldDescriptor = QQ) -> Algebra:
    return Algebra.zero(dim, field)


def one_dim(lam=1, field: FieldDescriptor = QQ, name: str = "zinbiel") -> Algebra:
    t = field.zeros((1, 1, 1))
    t[0, 0, 0] = field.scalar(lam)
    tables = {"zinbiel": field.zeros((1, 1, 1)), "prelie": field.zeros((1, 1, 1))}
    tables[name] = t
    return Algebra(1, field, tables)

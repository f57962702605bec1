"""Regenerate the JSON fixtures and copy them into the package."""

import shutil
from pathlib import Path

import numpy as np

from ppk.catalog import one_dim, two_dim_family
from ppk.documents import (abelian_matrices_to_json, algebra_to_json, bialgebra_to_json,
                           datum_to_json, dumps, flag_to_json, matched_pair_to_json, r_to_json)
from ppk.fields import GF, QQ
from ppk.flags import FlagDatum
from ppk.generators import InstanceSpec, extending_datums, matched_pairs
from ppk.products import AbelianCrossedMatrices
from ppk.yangbaxter import coboundary_bialgebra

HERE = Path(__file__).resolve().parent
PACKAGE = HERE.parent / "src" / "ppk" / "fixtures"


def write(name, obj):
    (HERE / name).write_text(dumps(obj))


def main():
    write("paper_example.json", algebra_to_json(two_dim_family(1, 1, 1, QQ)))
    ex = two_dim_family(0, 1, 0, QQ)
    write("ex_a0b1c0.json", algebra_to_json(ex))
    r = QQ.zeros((2, 2))
    r[0, 0] = QQ.scalar(1)
    write("r_e11.json", r_to_json(QQ, r))
    write("dim1_lambda1.json", algebra_to_json(one_dim(1, QQ, "zinbiel")))
    write("coboundary_a0b1c0.json", bialgebra_to_json(coboundary_bialgebra(ex, r)))

    f3 = GF(3)
    A, d = next(extending_datums(InstanceSpec(11, f3, (2, 1), 0.0, 1), mode="valid"))
    write("datum_f3.json", datum_to_json(A, d))
    mp = next(matched_pairs(InstanceSpec(5, f3, (2, 1), 0.0, 1)))
    write("matched_f3.json", matched_pair_to_json(mp))

    write("flag_zero_f2.json", flag_to_json(two_dim_family(0, 0, 0, GF(2)), FlagDatum.zero(2, GF(2))))
    m = AbelianCrossedMatrices(*(np.zeros((2, 2), dtype=np.int64) for _ in range(4)),
                               np.array([1, 0]), np.array([0, 1]))
    write("abelian_matrices_f3.json", abelian_matrices_to_json(f3, m))

    PACKAGE.mkdir(parents=True, exist_ok=True)
    for path in sorted(HERE.glob("*.json")):
        shutil.copy(path, PACKAGE / path.name)


if __name__ == "__main__":
    main()

"""One-off oracle: integral homology of BG through degree 3 from the
unnormalized bar complex, with invariant factors computed by sympy.

Shares nothing with the package's chain construction or Smith form, so it is
an independent route.  Writes bar_homology.json next to this file.

    python3 tests/oracles/precompute_bar_homology.py
"""

import itertools
import json
import pathlib

from sympy import ZZ
from sympy.polys.matrices.normalforms import invariant_factors
from sympy.polys.matrices import DomainMatrix


def cyclic(m):
    return [[(a + b) % m for b in range(m)] for a in range(m)]


def klein():
    return [[a ^ b for b in range(4)] for a in range(4)]


def s3():
    perms = sorted(itertools.permutations(range(3)))
    idx = {p: i for i, p in enumerate(perms)}
    return [[idx[tuple(p[q[i]] for i in range(3))] for q in perms] for p in perms]


GROUPS = {"Z2": cyclic(2), "Z3": cyclic(3), "Z4": cyclic(4), "V4": klein(), "S3": s3()}


def boundary(table, p):
    """Unnormalized bar differential C_p -> C_{p-1} as a dense list of rows."""
    order = len(table)
    rows = {c: i for i, c in enumerate(itertools.product(range(order), repeat=p - 1))}
    cols = list(itertools.product(range(order), repeat=p))
    M = [[0] * len(cols) for _ in rows]
    for j, c in enumerate(cols):
        faces = [c[1:]]
        faces += [c[:i] + (table[c[i]][c[i + 1]],) + c[i + 2:] for i in range(p - 1)]
        faces.append(c[:-1])
        for k, f in enumerate(faces):
            M[rows[f]][j] += (-1) ** k
    return M


def factors(M):
    if not M or not M[0]:
        return []
    dm = DomainMatrix([[ZZ(x) for x in row] for row in M], (len(M), len(M[0])), ZZ)
    return [int(d) for d in invariant_factors(dm) if d != 0]


def homology(table, top=3):
    order = len(table)
    dims = [order ** p for p in range(top + 2)]
    facs = {p: factors(boundary(table, p)) for p in range(1, top + 2)}
    out = []
    for k in range(top + 1):
        rank_out = len(facs.get(k, []))
        incoming = facs[k + 1]
        out.append({"betti": dims[k] - rank_out - len(incoming),
                    "torsion": sorted(abs(d) for d in incoming if abs(d) > 1)})
    return out


if __name__ == "__main__":
    result = {name: homology(t) for name, t in GROUPS.items()}
    path = pathlib.Path(__file__).with_name("bar_homology.json")
    path.write_text(json.dumps(result, indent=1, sort_keys=True) + "\n")
    for name, hs in result.items():
        print(name, hs)

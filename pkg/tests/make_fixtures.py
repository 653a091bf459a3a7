"""Regenerate fixtures/frozen.json from the sympy oracles (python3 tests/make_fixtures.py)."""

import json
import sys
from pathlib import Path

HERE = Path(__file__).resolve().parent
sys.path.insert(0, str(HERE))

import oracles  # noqa: E402
from lacohom.liealg import filiform4, heisenberg, sl2  # noqa: E402


def adjoint(g):
    n = g.dim
    return [[[g.structure[i][j][k] for j in range(n)] for k in range(n)] for i in range(n)]


def main():
    algebras = [("sl2", sl2()), ("heisenberg", heisenberg()), ("filiform4", filiform4())]
    h = heisenberg().structure
    out = {
        "lie_dims_trivial": {name: oracles.ce_dims(g.structure) for name, g in algebras},
        "heisenberg_rotation_invariants": oracles.ce_invariant_dims(h, [[0, -1, 0], [1, 0, 0], [0, 0, 1]], 4),
        "heisenberg_flip_invariants": oracles.ce_invariant_dims(h, [[-1, 0, 0], [0, -1, 0], [0, 0, 1]], 2),
        "abelian2_negation_invariants": oracles.ce_invariant_dims([[[0, 0], [0, 0]], [[0, 0], [0, 0]]], [[-1, 0], [0, -1]], 2),
        "bar_dims": {
            "additive2": {"cap": 3, "p_max": 2, "dims": oracles.bar_dims(oracles.additive_law, 2, 3, 2)},
            "heisenberg": {"cap": 4, "p_max": 2, "dims": oracles.bar_dims(oracles.heisenberg_law, 3, 4, 2)},
        },
        "heisenberg_diag_invariants": oracles.ce_invariant_dims(h, [[1, 0, 0], [0, -1, 0], [0, 0, -1]], 2),
        "adjoint_dims": {name: oracles.ce_dims(g.structure, adjoint(g), g.dim) for name, g in algebras},
    }
    (HERE / "fixtures" / "frozen.json").write_text(json.dumps(out, indent=2))


if __name__ == "__main__":
    main()

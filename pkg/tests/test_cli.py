import json

import pytest

from resrings.cli import main
from resrings.resolution import GradedFreeResolution


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_resolve_standard(capsys):
    code, out, _ = run_cli(capsys, "resolve", "--standard", "5")
    assert code == 0
    data = json.loads(out)
    assert data["resolution"]["ranks"] == [1, 5, 5, 1]
    assert data["validation"]["ok"]
    # emitted JSON re-parses to an equal resolution, bit-exact
    F = GradedFreeResolution.from_json(data["resolution"])
    assert F.to_json() == data["resolution"]


def test_resolve_etale(capsys):
    code, out, _ = run_cli(capsys, "resolve", "--etale", "t^4-t-1")
    assert code == 0
    assert json.loads(out)["resolution"]["ranks"] == [1, 2, 1]


def test_resolve_bad_points(tmp_path, capsys):
    cfg = {
        "kind": "points",
        "n": 4,
        "points": [["1", "0", "0"], ["0", "1", "0"], ["1", "1", "0"], ["0", "0", "1"]],
    }
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(cfg))
    code, _, err = run_cli(capsys, "resolve", str(path))
    assert code == 2
    assert "witness" in err


def test_omega_output(capsys):
    code, out, _ = run_cli(capsys, "omega", "--standard", "4")
    assert code == 0
    data = json.loads(out)
    assert data["n"] == 4 and len(data["omega"]) == 3


def test_table_standard4_hessian(capsys):
    code, out, _ = run_cli(capsys, "table", "--standard", "4", "--scale", "hessian")
    assert code == 0
    data = json.loads(out)
    # derived standard value: c^1_12 = -2 (c[i][j][k] with 1-based (1,2,1))
    assert data["c"][0][1][0] == "-2"
    assert data["provenance"]["scale"] == "hessian"


def test_table_normalized(capsys):
    code, out, _ = run_cli(capsys, "table", "--standard", "5", "--normalize", "pairwise")
    assert code == 0
    data = json.loads(out)
    assert data["basis_note"] == "pairwise"
    assert data["c"][0][1][0] == "0" and data["c"][0][1][1] == "0"


def test_table_etale_bhargava(capsys):
    code, out, _ = run_cli(capsys, "table", "--etale", "t^3-t-1", "--scale", "bhargava")
    assert code == 0
    assert json.loads(out)["n"] == 3


def test_disc_cubic(capsys):
    code, out, _ = run_cli(capsys, "disc", "--cubic", "1", "0", "-1", "-1")
    assert code == 0
    assert out.strip() == "-23"


def test_disc_orders(capsys):
    code, out, _ = run_cli(capsys, "disc", "--standard", "5", "--orders")
    assert code == 0
    data = json.loads(out)
    assert data["ratio"] == "100000000" and data["ratio_ok"]


def test_disc_malformed_input(tmp_path, capsys):
    path = tmp_path / "junk.json"
    path.write_text("{not json")
    code, _, err = run_cli(capsys, "disc", str(path))
    assert code == 2


def test_verify_suite(capsys):
    code, out, _ = run_cli(
        capsys, "verify", "--suite", "symmetries", "--n", "5", "--seed", "42", "--cases", "5"
    )
    assert code == 0
    data = json.loads(out)
    assert data["ok"] and data["suite"] == "symmetries"


def test_verify_range_parsing(capsys):
    code, out, _ = run_cli(
        capsys, "verify", "--suite", "table1", "--n", "5..6", "--cases", "0"
    )
    assert code == 0


def test_classical_cubic(capsys):
    code, out, _ = run_cli(capsys, "classical", "cubic", "1", "0", "-1", "-1")
    assert code == 0
    data = json.loads(out)
    assert data["discriminant"] == "-23"
    assert data["hessian_relations_ok"] and data["discriminant_ok"]


def test_classical_quartic(tmp_path, capsys):
    from resrings.symcore import Polynomial

    x1, x2, x3 = (Polynomial.variable(3, j) for j in (1, 2, 3))
    a_path = tmp_path / "A.json"
    b_path = tmp_path / "B.json"
    a_path.write_text(json.dumps((x1 * (x2 - x3)).to_json()))
    b_path.write_text(json.dumps((x2 * (x1 - x3)).to_json()))
    code, out, _ = run_cli(capsys, "classical", "quartic", str(a_path), str(b_path))
    assert code == 0
    assert json.loads(out)["identities_ok"]


def test_classical_quintic(tmp_path, capsys, rng):
    from fractions import Fraction

    from resrings.classical import pfaffian_shape_check
    from resrings.symcore import Polynomial, PolyMatrix

    # find a valid seeded alternating matrix, then drive it through the CLI
    while True:
        entries = [[Polynomial.zero(4) for _ in range(5)] for _ in range(5)]
        for i in range(5):
            for j in range(i + 1, 5):
                p = Polynomial(
                    4,
                    {
                        tuple(1 if t == s else 0 for t in range(4)): Fraction(rng.randint(-2, 2))
                        for s in range(4)
                    },
                )
                entries[i][j] = p
                entries[j][i] = -p
        Phi = PolyMatrix(entries)
        if pfaffian_shape_check(Phi).resolution_report.ok:
            break
    path = tmp_path / "Phi.json"
    path.write_text(json.dumps(Phi.to_json()))
    code, out, _ = run_cli(capsys, "classical", "quintic", str(path))
    assert code == 0
    data = json.loads(out)
    assert data["validation"]["ok"] and data["table_ok"]


def test_emitted_table_round_trips(capsys):
    from resrings.ringalg import MultiplicationTable

    code, out, _ = run_cli(capsys, "table", "--standard", "4")
    data = json.loads(out)
    T = MultiplicationTable.from_json(data)
    again = T.to_json()
    for key in ("n", "c0", "c"):
        assert again[key] == data[key]

import subprocess
import sys
from pathlib import Path

import pytest

from cwa.chains import homology
from cwa.cli import EXIT_CHECK, EXIT_INVALID, EXIT_OK, EXIT_USAGE, main
from cwa.complexes import underlying_chain
from cwa.textformat import parses

FIX = Path(__file__).parent / "fixtures"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def homology_of(text, name):
    return homology(underlying_chain(parses(text).complexes[name]))


def test_homology_of_projective_plane(capsys):
    assert run(capsys, "homology", FIX / "rp2.cwa") == (EXIT_OK, "H~_1 = Z/2\n", "")


def test_homology_of_several_complexes_has_headers(capsys):
    code, out, _ = run(capsys, "homology", FIX / "random_mixed.cwa")
    assert code == EXIT_OK
    assert out.startswith("[x]\n") and "\n[y]\n" in out
    code, out, _ = run(capsys, "homology", FIX / "random_mixed.cwa", "--complex", "y", "--max-degree", "1")
    assert out == "H~_1 = Z + Z/2\n"


def test_info_lists_layers(capsys):
    code, out, _ = run(capsys, "info", FIX / "disk4.cwa")
    assert code == EXIT_OK
    assert "layer 3: d3(dim=3)" in out
    assert "dimension: 3" in out
    assert "euler characteristic: 0" in out
    _, out, _ = run(capsys, "info", FIX / "generalized.cwa")
    assert "generalized" in out and "layer 3: b(dim=2) c(dim=1)" in out


def test_validate(capsys, tmp_path):
    code, out, _ = run(capsys, "validate", *sorted(FIX.glob("*.cwa")))
    assert code == EXIT_OK
    bad = tmp_path / "bad.cwa"
    bad.write_text("[core S0]\ncell s dim=0\n[complex X core=S0]\ncell a dim=1\ncell b dim=2\n"
                   "cell c dim=3\nattach b deg 1: 1 x 1\n 1\nattach c deg 2: 1 x 1\n 1\n")
    code, out, err = run(capsys, "validate", bad)
    assert code == EXIT_INVALID
    assert "degree 2" in out + err


def test_constructions_re_parse(capsys):
    code, out, _ = run(capsys, "cone", FIX / "torus.cwa")
    assert code == EXIT_OK
    assert homology(underlying_chain(parses(out).complexes["cone-torus"])).trivial

    code, out, _ = run(capsys, "suspend", FIX / "rp2.cwa")
    assert str(homology_of(out, "susp-rp2")[2]) == "Z/2"

    code, out, _ = run(capsys, "wedge", FIX / "random_mixed.cwa", "x", "y")
    assert code == EXIT_OK
    src = parses((FIX / "random_mixed.cwa").read_text())
    w = homology(underlying_chain(parses(out).complexes["x-v-y"]))
    hx, hy = (homology(underlying_chain(src.complexes[n])) for n in "xy")
    for d in range(6):
        assert w.betti(d) == hx.betti(d) + hy.betti(d)
        assert sorted(w.torsion(d)) == sorted(hx.torsion(d) + hy.torsion(d))

    code, out, _ = run(capsys, "quotient", FIX / "rp2.cwa", "--cells", "e")
    assert str(homology_of(out, "rp2-mod")[2]) == "Z"

    code, out, _ = run(capsys, "paste", FIX / "intervals.cwa", "--along", "glue")
    assert code == EXIT_OK
    (name,) = [n for n in parses(out).complexes if n not in ("I1", "I2")]
    assert str(homology_of(out, name)[1]) == "Z"


def test_flatten_and_change_core(capsys):
    code, out, _ = run(capsys, "flatten", FIX / "over_circle.cwa", FIX / "circle_realization.cwa")
    assert code == EXIT_OK
    assert "# provenance" in out
    doc = parses(out)
    assert str(homology_of(out, "flat-x")[2]) == "Z"
    assert doc.complexes["flat-x"].core.name == "S0"

    code, out, _ = run(capsys, "change-core", FIX / "circle.cwa", FIX / "retract_maps.cwa",
                       "--alpha", "alpha", "--beta", "beta")
    assert code == EXIT_OK
    names = list(parses(out).complexes)
    assert str(homology_of(out, names[-1])[1]) == "Z^2"

    code, out, _ = run(capsys, "change-core", FIX / "torus.cwa", FIX / "expansion_maps.cwa",
                       "--alpha", "alpha", "--beta", "beta", "--h-b", "hb")
    assert code == EXIT_OK
    assert homology_of(out, "torus-over-S0e") == homology_of(out, "torus")


def test_check_exit_codes(capsys):
    code, out, _ = run(capsys, "check", FIX / "torus.cwa")
    assert code == EXIT_OK and "FAIL" not in out
    code, out, _ = run(capsys, "check", FIX / "over_circle.cwa", "--dimension-additivity",
                       FIX / "circle_realization.cwa")
    assert code == EXIT_OK and "dimension-additivity: pass" in out
    code, out, _ = run(capsys, "check", FIX / "circle.cwa", "--retract-summand", FIX / "retract_maps.cwa",
                       "--alpha", "alpha", "--beta", "beta")
    assert code == EXIT_OK and "retract-summand: pass" in out
    # cones are only defined for proper presentations
    code, out, _ = run(capsys, "check", FIX / "generalized.cwa", "--cone-acyclic")
    assert code == EXIT_CHECK and "cone-acyclic: FAIL" in out


def test_invalid_and_usage_exit_codes(capsys, tmp_path):
    bad = tmp_path / "bad.cwa"
    bad.write_text("[core A]\ncell s dim=x\n")
    code, _, err = run(capsys, "homology", bad)
    assert code == EXIT_INVALID and "2:12" in err
    dangling = tmp_path / "dangling.cwa"
    dangling.write_text("[complex X core=Q]\n")
    code, _, err = run(capsys, "info", dangling)
    assert code == EXIT_INVALID and "'Q'" in err
    code, _, _ = run(capsys, "quotient", FIX / "rp2.cwa", "--cells", "f")
    assert code == EXIT_INVALID
    code, _, _ = run(capsys, "homology", tmp_path / "missing.cwa")
    assert code == EXIT_USAGE
    code, _, _ = run(capsys, "check", FIX / "circle.cwa", "--retract-summand", FIX / "retract_maps.cwa")
    assert code == EXIT_USAGE
    with pytest.raises(SystemExit) as info:
        main(["homology"])
    assert info.value.code == EXIT_USAGE
    with pytest.raises(SystemExit) as info:
        main(["no-such-command"])
    assert info.value.code == EXIT_USAGE


def test_out_file(capsys, tmp_path):
    target = tmp_path / "o.txt"
    code, out, _ = run(capsys, "--out", target, "homology", FIX / "rp2.cwa")
    assert code == EXIT_OK and out == ""
    assert target.read_text() == "H~_1 = Z/2\n"


def test_fuzz(capsys):
    code, out, _ = run(capsys, "fuzz", "--seed", 3, "--count", 4)
    assert code == EXIT_OK
    assert out.endswith("seed 3: ok\n")
    assert "cone-acyclic: 4 cases" in out


def _proc(*argv):
    return subprocess.run([sys.executable, "-m", "cwa", *map(str, argv)], capture_output=True, text=False)


def test_repeated_runs_are_byte_identical():
    for argv in (("homology", FIX / "random_mixed.cwa"),
                 ("flatten", FIX / "over_circle.cwa", FIX / "circle_realization.cwa"),
                 ("fuzz", "--seed", 5, "--count", 2)):
        first, second = _proc(*argv), _proc(*argv)
        assert first.returncode == second.returncode == EXIT_OK
        assert first.stdout == second.stdout and first.stdout

"""Smoke test for the sclab extension module.

Build with `cargo build --release -p sclab-python`, then copy
target/release/libsclab_py.so to sclab.so next to this script (or anywhere
on PYTHONPATH) and run `python3 python/smoke_test.py`.
"""

import json
import os
import sys
import tempfile
from fractions import Fraction

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import sclab


def main():
    w = sclab.Word("abAB")
    assert str(w) == "abAB" and len(w) == 4
    assert w.in_commutator_subgroup()
    assert str(w * w.inverse()) == ""
    assert sclab.Word("aA") == sclab.Word("")

    r = sclab.scl("abAB", mode="exact")
    assert Fraction(r.value) == Fraction(1, 2) and r.exact and r.strong_duality
    assert Fraction(sclab.scl("abAB + baBA").value) == 0
    assert Fraction(sclab.scl("abABabAB").value) == 1

    try:
        sclab.scl("ab")
    except ValueError:
        pass
    else:
        raise AssertionError("ab is not a boundary")

    v = sclab.random_word(24, seed=3, conditioned=True).cyclic_core()
    lower = Fraction(sclab.verify_certificate(sclab.certify(v)))
    exact = Fraction(sclab.scl(str(v), mode="exact").value)
    upper = Fraction(sclab.tripod_upper_bound(v))
    assert lower <= exact <= upper, (lower, exact, upper)

    big = sclab.random_word(10_000, seed=1, conditioned=True)
    assert big.inverse_asymmetry(1) == 0.0

    report = json.loads(sclab.spectra(1))
    assert abs(report["lambda1"] - 2 / 3) < 1e-10
    assert json.loads(sclab.cheeger(1))["h"] == "1"

    with tempfile.TemporaryDirectory() as out:
        config = {"command": "slice", "rank": 2, "words": ["abAB", "baBA"], "grid": 1, "mode": "exact"}
        manifest = json.loads(sclab.run_experiment(json.dumps(config), out))
        assert {o["file"] for o in manifest["outputs"]} == {"slice.csv", "slice.svg"}
        with tempfile.TemporaryDirectory() as again:
            replayed = json.loads(sclab.run_experiment(json.dumps(manifest), again))
            assert replayed["outputs"] == manifest["outputs"]

    print(f"ok: scl sandwich {lower} <= {exact} <= {upper} for {v}")


if __name__ == "__main__":
    main()

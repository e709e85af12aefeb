#!/usr/bin/env python3
"""Smoke test for the liekolchin_py extension module.

Builds nothing itself: it locates the compiled cdylib under target/
(release preferred, debug fallback), stages it under an importable name,
and exercises the main types and operations end to end.

    cargo build -p liekolchin-py --release
    python3 python/smoke_test.py
"""

import json
import pathlib
import shutil
import sys
import tempfile

ROOT = pathlib.Path(__file__).resolve().parents[1]


def load_module():
    candidates = [
        ROOT / "target" / profile / name
        for profile in ("release", "debug")
        for name in ("libliekolchin_py.so", "liekolchin_py.so", "libliekolchin_py.dylib")
    ]
    built = next((p for p in candidates if p.exists()), None)
    if built is None:
        sys.exit(
            "liekolchin_py cdylib not found; run "
            "`cargo build -p liekolchin-py` (or --release) first"
        )
    stage = tempfile.mkdtemp(prefix="liekolchin_py_")
    shutil.copy2(built, pathlib.Path(stage) / "liekolchin_py.so")
    sys.path.insert(0, stage)
    import liekolchin_py

    return liekolchin_py


CHECKS = []


def check(name):
    def wrap(fn):
        CHECKS.append((name, fn))
        return fn

    return wrap


lk = load_module()


@check("matrix arithmetic and serialization")
def _(m=lk.Matrix):
    a = m([[2, 1, 0], [3, 3, 1], [4, 6, 4]])
    assert a.det() == "4"
    assert a.trace() == "9"
    assert a.rank() == 3
    assert m.from_json(a.to_json()) == a
    half = m([["1/2", "0"], ["0", "1"]])
    assert half.entries()[0][0] == "1/2"
    assert (half @ half.inverse()) == m.identity(2)


@check("characteristic polynomial and kernel")
def _():
    rot = lk.Matrix([[0, -1], [1, 0]])
    assert rot.char_poly() == ["1", "0", "1"]  # x^2 + 1
    n = lk.Matrix([[0, 1, 0], [0, 0, 1], [0, 0, 0]])
    assert n.kernel_basis() == [["1", "0", "0"]]
    assert n.index() == -1
    assert lk.Matrix.zero(2).index() is None


@check("quasi-unipotence decision")
def _():
    rot = lk.Matrix([[0, -1], [1, 0]])
    report = lk.is_quasi_unipotent(rot)
    assert report["is_quasi_unipotent"] is True
    assert report["unipotent_order"] == 4

    bad = lk.Matrix([[2, 0], [0, 1]])
    report = lk.is_quasi_unipotent(bad)
    assert report["is_quasi_unipotent"] is False
    assert report["witness_factor"] == ["-2", "1"]  # x - 2


@check("jordan structure")
def _():
    b = lk.Matrix([[1, 2], [0, 1]])
    assert lk.single_jordan_block_eigenvalue(b) == "1"
    p = lk.jordan_basis_single_block(b)
    conj = p.inverse() @ b @ p
    assert conj == lk.Matrix.unipotent_block(2)
    assert lk.single_jordan_block_eigenvalue(lk.Matrix.identity(2)) is None


@check("trace polynomials and the hypothesis verifier")
def _():
    b = lk.Matrix.unipotent_block(2)
    good = lk.Matrix([[1, 2], [0, 1]])
    bad = lk.Matrix([[1, 0], [1, 1]])

    assert lk.expand_trace_poly(good, b, 1) == ["2"]
    assert lk.expand_trace_poly(bad, b, 1) == ["2", "1"]  # n + 2
    assert lk.trace_poly_interpolated(bad, b, 1) == ["2", "1"]

    report = lk.hypothesis_verifier(bad, b)
    assert report["verdict"] is False
    assert report["witness"]["k"] == 1
    assert (report["witness"]["t1"], report["witness"]["t2"]) == ("2", "3")

    assert lk.sampled_qu_family_check(good, b, 8) is True
    assert lk.sampled_qu_family_check(bad, b, 2) is False


@check("pipeline certificate")
def _():
    b = lk.Matrix.unipotent_block(2)
    good = lk.Matrix([[1, 2], [0, 1]])
    doc = json.loads(lk.verify_main_theorem(good, b))
    assert doc["verdict"]["status"] == "hypotheses-hold-certified"
    assert doc["verdict"]["cert"]["common_eigenvector"] == ["1", "0"]
    assert lk.common_eigenvector(good, b) == ["1", "0"]

    bad = lk.Matrix([[1, 0], [1, 1]])
    witness = lk.counterexample_search(bad, b, 3, 3)
    assert witness == (1, 1, "2", "3")


@check("commutator criterion")
def _():
    x = lk.Matrix([[1, 1, 0], [0, 1, 0], [0, 0, 1]])
    y = lk.Matrix([[1, 0, 0], [0, 1, 1], [0, 0, 1]])
    g = lk.Matrix([[1, 0, 1], [0, 1, 0], [0, 0, 1]])
    assert lk.commutator_qu_check(g, [x], [y]) is True
    try:
        lk.commutator_qu_check(g, [x], [x])
    except ValueError:
        pass
    else:
        raise AssertionError("product mismatch must raise, not return False")


@check("p_k polynomials")
def _():
    assert lk.pk_direct(1, 1, [1, -1], 1) == "0"
    assert lk.pk_direct(1, 1, [1, -1], 2) == "1"
    assert lk.pk_via_trace(1, 1, [1, -1], 2) == "1"
    assert lk.theorem_pk_check(1, 1, [1, -1]) == (False, 2)
    assert lk.theorem_pk_check(1, 1, [0, 0]) == (True, None)


@check("Pascal machinery")
def _():
    l3 = lk.pascal(3)
    assert l3.entries() == [["1", "0", "0"], ["1", "1", "0"], ["1", "2", "1"]]
    factors = lk.bidiagonal_factorization(3)
    product = lk.Matrix.identity(3)
    for f in factors:
        product = product @ f
    assert product == l3

    ok, offending = lk.is_totally_nonnegative(l3)
    assert ok and offending is None
    ok, offending = lk.is_totally_nonnegative(lk.Matrix([[0, 1], [1, 0]]))
    assert not ok and offending == ([1, 2], [1, 2])

    assert lk.cauchy_binet_check(l3, l3, [1, 2], [1, 3]) is True

    chain = lk.minor_positivity([2, 3, 4], 1)
    assert chain["det"] == "4"
    assert chain["n"] == 6

    assert lk.mat_m(1, 2).det() == "4"
    assert lk.mat_b(0, 1).entries() == [["1", "0"], ["1", "1"]]


@check("index-balanced product trace")
def _():
    n = lk.Matrix([[0, 1], [0, 0]])
    e21 = lk.Matrix([[0, 0], [1, 0]])
    assert lk.product_trace_formula([n, e21]) == "1"


def main():
    failures = 0
    for name, fn in CHECKS:
        try:
            fn()
        except Exception as exc:  # noqa: BLE001 - report and keep going
            failures += 1
            print(f"FAIL {name}: {exc!r}")
        else:
            print(f"ok   {name}")
    total = len(CHECKS)
    print(f"{total - failures}/{total} checks passed (liekolchin_py {lk.__version__})")
    sys.exit(1 if failures else 0)


if __name__ == "__main__":
    main()

"""Smoke test for the chainrep Python extension.

Builds the extension with cargo (unless CHAINREP_LIB points at a built
library), loads it as the `chainrep` module and exercises each entry point.

    python3 python/smoke_test.py [--release]
"""

import argparse
import importlib.util
import os
import pathlib
import shutil
import subprocess
import sys
import tempfile

ROOT = pathlib.Path(__file__).resolve().parent.parent


def build(release: bool) -> pathlib.Path:
    env_lib = os.environ.get("CHAINREP_LIB")
    if env_lib:
        return pathlib.Path(env_lib)
    cmd = ["cargo", "build", "-p", "chainrep-py", "--features", "extension-module"]
    if release:
        cmd.append("--release")
    subprocess.run(cmd, cwd=ROOT, check=True)
    profile = "release" if release else "debug"
    suffix = {"darwin": "dylib", "win32": "dll"}.get(sys.platform, "so")
    prefix = "" if sys.platform == "win32" else "lib"
    return ROOT / "target" / profile / f"{prefix}chainrep_py.{suffix}"


def load(lib: pathlib.Path):
    tmp = pathlib.Path(tempfile.mkdtemp(prefix="chainrep-py-"))
    target = tmp / ("chainrep.pyd" if sys.platform == "win32" else "chainrep.so")
    shutil.copy(lib, target)
    spec = importlib.util.spec_from_file_location("chainrep", target)
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


def check(cr) -> None:
    sig = cr.Signature.standard(1)
    assert sig.names == ["P1"]

    expected = {
        "~ex y. y<x": 0,
        "P1(x)": 1,
        "P1(x) & P1(y) & x<y & ~ex z. (x<z & z<y & P1(z))": 1,
        "x<y": 2,
        "x<y & y<z": 3,
        "P1(x) & ~P1(x)": 0,
    }
    for text, d in expected.items():
        f = cr.Formula(text, sig)
        r = cr.minimal_reparameterization(f)
        assert r.dimension == d, (text, r.dimension)
        assert r.check(max_len=5)["ok"], text
        assert cr.decide_dimension(f, d)
        assert d == 0 or not cr.decide_dimension(f, d - 1)

    pair = cr.Formula("P1(x) & P1(y) & x<y & ~ex z. (x<z & z<y & P1(z))", sig)
    rep = cr.minimal_reparameterization(pair)
    assert rep.erratum_notes, "eliminating a variable records the indexing note"
    assert isinstance(rep.provenance, dict) and "step" in rep.provenance

    lt = cr.Formula("x<y", sig)
    assert lt.free_variables == ["x", "y"]
    assert lt.satisfying_tuples("[., P1, .]") == [[0, 1], [0, 2], [1, 2]]
    assert lt.evaluate("[., .]", {"x": 0, "y": 1})
    assert lt.accepts("[., .]", [0, 1])
    assert [cr.brute_growth(lt, n, max_len=6) for n in range(1, 5)] == [0, 1, 3, 6]

    report = cr.growth_report(lt, max_n=3, max_len=6)
    assert report["degree"] == 2 and report["sandwich_holds"]

    w = cr.witness(cr.Formula("P1(x)", sig), 3, kind="no_decrement")
    assert w["claimed_tuple_count"] >= 6 and len(w["marked_set"]) <= 6

    m = cr.type_monoid(lt)
    assert len(m["table"]) == m["size"]
    assert cr.normal_form(lt)["count"] == 2
    assert [cr.ramsey_bound(c) for c in (1, 2, 3)] == [3, 6, 17]

    spec = (
        "signature P1\n"
        "component S dim=2 vars=x,y\n"
        "universe x<y & ~ex z. (x<z & z<y)\n"
        "relation E/2 on (S,S) := y_1 = x_2\n"
    )
    red = cr.reduce_interpretation(spec, 1, max_len=5)
    assert red["dimension"] == 1 and red["equivalence"]["ok"]

    try:
        cr.Formula("x<", sig)
    except ValueError as e:
        assert "syntax" in str(e)
    else:
        raise AssertionError("syntax errors raise ValueError")
    try:
        cr.minimal_reparameterization(cr.Formula("x<y & y<z", sig), cr.Limits(monoid=1))
    except cr.ResourceLimitError:
        pass
    else:
        raise AssertionError("exhausted budgets raise ResourceLimitError")


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--release", action="store_true")
    args = parser.parse_args()
    cr = load(build(args.release))
    check(cr)
    print(f"chainrep {cr.__version__}: python smoke test passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())

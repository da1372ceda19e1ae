"""Smoke test for the lopweno_py extension.

Build first with `cargo build --release -p lopweno-py`, or install with
`maturin develop -m crates/python/Cargo.toml`. Without an installed
module, the freshly built shared library under target/ is loaded.
"""

import importlib.util
import math
import pathlib
import shutil
import sys
import tempfile

ROOT = pathlib.Path(__file__).resolve().parents[1]


def load():
    try:
        import lopweno_py
        return lopweno_py
    except ImportError:
        pass
    for profile in ("release", "debug"):
        for name in ("liblopweno_py.so", "liblopweno_py.dylib", "lopweno_py.dll"):
            built = ROOT / "target" / profile / name
            if built.exists():
                suffix = ".pyd" if name.endswith(".dll") else ".so"
                tmp = pathlib.Path(tempfile.mkdtemp()) / f"lopweno_py{suffix}"
                shutil.copy(built, tmp)
                spec = importlib.util.spec_from_file_location("lopweno_py", tmp)
                module = importlib.util.module_from_spec(spec)
                spec.loader.exec_module(module)
                return module
    sys.exit("lopweno_py not found; run `cargo build --release -p lopweno-py`")


def main():
    lw = load()

    ilw = lw.Scheme("ilw")
    w = ilw.weights([1.0, 50.0, 1e-3])
    assert all(abs(a - b) < 1e-15 for a, b in zip(w, lw.IDEAL_WEIGHTS)), w

    js = lw.Scheme("js")
    w = js.weights([1.0, 1.0, 1.0])
    assert all(abs(a - b) < 1e-14 for a, b in zip(w, lw.IDEAL_WEIGHTS)), w

    lop_im = lw.Scheme("im", lop=True, im_k=2, im_a=0.1)
    assert lop_im.is_lop and "IM" in lop_im.name, lop_im.name
    omega_js, omega, op = lop_im.weights_detailed([1e-2, 2e-2, 5e-1])
    assert abs(sum(omega) - 1.0) < 1e-12 and isinstance(op, bool)

    # cell averages of x^4 on unit cells centred at -2..2; the linear
    # weights reproduce the point value at x = 1/2 exactly
    averages = [((k + 0.5) ** 5 - (k - 0.5) ** 5) / 5.0 for k in range(-2, 3)]
    value = ilw.reconstruct(averages)
    assert abs(value - 0.5 ** 4) < 1e-12, value

    try:
        lw.Scheme("nope")
    except ValueError as e:
        assert "line 1" in str(e), e
    else:
        raise AssertionError("unknown scheme accepted")

    out = lw.solve("problem = sine\nscheme = m\nlop = true\nn = 40\nt_final = 0.5")
    assert out["cells"] == [40] and len(out["state"]) == 40
    assert math.isclose(out["time"], 0.5) and out["l1"] < 1e-5, out["l1"]

    rows = lw.error_table("problem = sine\nscheme = js\nn = 20,40\nt_final = 0.25")
    assert rows[0][2] is None and rows[1][2] > 4.0, rows

    with tempfile.TemporaryDirectory() as d:
        paths = lw.run_config("problem = step\nn = 50\nt_final = 0.1\noutput = field", d)
        text = pathlib.Path(paths[0]).read_text().splitlines()
        assert text[0] == "x,u" and len(text) == 51

    assert "shu-osher" in lw.preset_names()
    print("lopweno_py smoke test passed")


if __name__ == "__main__":
    main()

"""Smoke test for the wavequant Python extension.

Build first:
    cargo build -p wavequant-py --release --features extension-module
then run `python python/smoke_test.py`. If `wavequant` is not importable the
script loads target/release/libwavequant.so directly.
"""

import cmath
import importlib.machinery
import importlib.util
import math
import pathlib
import sys


def load():
    try:
        import wavequant

        return wavequant
    except ImportError:
        pass
    root = pathlib.Path(__file__).resolve().parent.parent
    for name in ("libwavequant.so", "libwavequant.dylib", "wavequant.pyd"):
        path = root / "target" / "release" / name
        if path.exists():
            loader = importlib.machinery.ExtensionFileLoader("wavequant", str(path))
            spec = importlib.util.spec_from_loader("wavequant", loader)
            mod = importlib.util.module_from_spec(spec)
            loader.exec_module(mod)
            return mod
    sys.exit("wavequant extension not found; build it with cargo first")


def main():
    wq = load()

    d6 = wq.Wavelet("daubechies6")
    assert d6.eval("phi", -0.5) == 0.0 and d6.eval("psi", 5.5) == 0.0
    meyer = wq.Wavelet("meyer")
    assert abs(meyer.fourier("phi", 0.0) - 1 / math.sqrt(2 * math.pi)) < 1e-12

    band = meyer.covered_band(0, 1)
    n_max = int(band[1] * 8 / (2 * math.pi))
    grid = wq.PlaneWaveGrid(2, 8.0, n_max, band)
    table = wq.CoefficientTable(meyer, grid, 0, 1)
    assert table.covers_grid

    c = grid.gaussian_state([7.0, 0.0], [-2.0, 0.0], 0.25)
    cw = table.to_wavelet(c)
    back = table.to_plane_wave(cw)
    err = max(abs(a - b) for a, b in zip(c, back))
    assert err < 1e-10, err

    w = table.hamiltonian()
    omegas = sorted(grid.omegas())
    assert abs(w.zero_point - 0.5 * sum(omegas)) < 1e-8

    t = 3.0
    cw_t = w.evolve(cw, t)
    c_t = grid.evolve(c, t)
    fid = abs(sum(a.conjugate() * b for a, b in zip(table.to_plane_wave(cw_t), c_t)))
    assert fid > 1 - 1e-6, fid
    k = grid.k(0)
    assert abs(c_t[0] - c[0] * cmath.exp(-1j * math.hypot(*k) * t)) < 1e-12

    decay = table.atom_decay(10.0, 0.06, [0.0, 0.0], 4.0, 0.5, basis="plane-wave")
    assert decay["norm_drift"] < 1e-8
    assert decay["prob_atom"][0] == 1.0 and decay["prob_atom"][-1] < 1.0

    print(
        f"ok: {len(grid)} plane waves, {len(table)} wavelet modes, "
        f"w nonzero fraction {w.nnz_fraction:.3f}, oracle fidelity {fid:.12f}"
    )


if __name__ == "__main__":
    main()

"""Benchmark the compiled kernels against the NumPy fallback.

Times the hot primitives (eigensolver, partial trace, concurrence,
three-tangle, roof objective) and one representative workload from each
heavy acceptance path (a full E_ms evaluation on a six-qubit state and one
convex-roof minimization). Run:

    python benchmarks/bench_backends.py [--repeat 2000]
"""

import argparse
import time

import numpy as np

import qcorr
from qcorr import _kernels_py

try:
    from qcorr import _kernels_cy
except ImportError:
    _kernels_cy = None


def timeit(fn, repeat):
    fn()  # warm up
    start = time.perf_counter()
    for _ in range(repeat):
        fn()
    return (time.perf_counter() - start) / repeat


def kernel_cases(rng):
    h4 = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    h4 = (h4 + h4.conj().T) / 2
    h16 = rng.standard_normal((16, 16)) + 1j * rng.standard_normal((16, 16))
    h16 = (h16 + h16.conj().T) / 2
    psi6 = rng.standard_normal(64) + 1j * rng.standard_normal(64)
    psi6 /= np.linalg.norm(psi6)
    z = rng.standard_normal((4, 2)) + 1j * rng.standard_normal((4, 2))
    rho = z @ z.conj().T
    rho /= rho.trace()
    psi3 = rng.standard_normal(8) + 1j * rng.standard_normal(8)
    psi3 /= np.linalg.norm(psi3)
    basis = np.linalg.qr(rng.standard_normal((8, 2)) + 1j * rng.standard_normal((8, 2)))[0]
    basis = basis * np.sqrt([0.6, 0.4])
    x = rng.uniform(0, 2 * np.pi, 3)
    return [
        ("eigh 4x4", lambda k: (lambda: k.eigh(h4))),
        ("eigh 16x16", lambda k: (lambda: k.eigh(h16))),
        ("ptrace 6q -> 2q", lambda k: (lambda: k.ptrace_pure(psi6, 6, (0, 3)))),
        ("concurrence 4x4", lambda k: (lambda: k.concurrence(rho))),
        ("three-tangle", lambda k: (lambda: k.three_tangle_pure(psi3))),
        ("roof objective m=2", lambda k: (lambda: k.roof_objective(basis, 2, 0, x))),
        ("roof search m=2", lambda k: (lambda: k.roof_search(basis, 2, 0, x, 0.5, 1e-8, 10_000))),
    ]


def workload_cases(rng):
    state6 = qcorr.family_state(
        qcorr.ClusterFamily("f6", tuple(rng.standard_normal(4) + 1j * rng.standard_normal(4)))
    )
    co = tuple(rng.standard_normal(4) + 1j * rng.standard_normal(4))
    dm = qcorr.partial_trace(qcorr.family_state(qcorr.ClusterFamily("f2", co)), "ABD")
    config = qcorr.RoofConfig(m_values=(2,), restarts=3, seed=0)
    return [
        ("E_ms on 6 qubits", lambda: qcorr.ems(state6)),
        ("roof minimize (m=2, 3 restarts)", lambda: qcorr.roof_minimize(dm, "three_tangle", config).value),
    ]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=2000, help="repetitions per kernel case")
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    backends = [("python", _kernels_py)]
    if _kernels_cy is not None:
        backends.append(("compiled", _kernels_cy))
    else:
        print("compiled extension not available; timing the fallback only")

    print(f"{'kernel':<28}" + "".join(f"{name:>14}" for name, _ in backends) + f"{'speedup':>10}")
    for label, make in kernel_cases(rng):
        times = [timeit(make(k), args.repeat) for _, k in backends]
        row = f"{label:<28}" + "".join(f"{t * 1e6:>12.1f}us" for t in times)
        if len(times) == 2 and times[1] > 0:
            row += f"{times[0] / times[1]:>9.1f}x"
        print(row)

    print(f"\nselected backend for workloads: {qcorr.kernels.name}")
    repeat = max(1, args.repeat // 100)
    for label, fn in workload_cases(rng):
        t = timeit(fn, repeat)
        print(f"{label:<34}{t * 1e3:>10.2f} ms")


if __name__ == "__main__":
    main()

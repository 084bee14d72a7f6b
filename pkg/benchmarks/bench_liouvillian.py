"""Compare the compiled and numpy superoperator assembly kernels.

Usage: python benchmarks/bench_liouvillian.py [--repeat N]
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from photon_blockade import dynamics
from photon_blockade.kernels import assemble_liouvillian, available_backends
from photon_blockade.models import TpbParams, build_tpb, solve

# n_max -> Hilbert dimension 4 (n_max + 1): 12, 24, 48
SIZES = (2, 5, 11)


def kernel_inputs(n_max: int):
    H, chans = build_tpb(TpbParams(n_th=0.01, n_max=n_max))
    heff = np.array(H.matrix)
    for ch in chans:
        c = ch.collapse.matrix
        heff = heff - 0.5j * ch.rate * (c.conj().T @ c)
    rates = np.array([ch.rate for ch in chans])
    jumps = np.stack([ch.collapse.matrix for ch in chans])
    return heff, rates, jumps


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    backends = available_backends()
    print(f"backends: {', '.join(backends)}")
    print(f"{'dim':>5} " + " ".join(f"{b + ' [ms]':>14}" for b in backends) + f" {'max |diff|':>12}")
    for n_max in SIZES:
        inputs = kernel_inputs(n_max)
        times, mats = [], []
        for b in backends:
            mats.append(assemble_liouvillian(*inputs, backend=b))
            t = min(timeit.repeat(lambda: assemble_liouvillian(*inputs, backend=b), number=1, repeat=args.repeat))
            times.append(t * 1e3)
        diff = max(np.abs(m - mats[0]).max() for m in mats)
        print(f"{inputs[0].shape[0]:>5} " + " ".join(f"{t:>14.3f}" for t in times) + f" {diff:>12.2e}")
    p = TpbParams(n_max=5)
    t = min(timeit.repeat(lambda: solve(p), number=1, repeat=args.repeat))
    print(f"full steady-state solve at dim 24: {t * 1e3:.1f} ms")
    H, chans = build_tpb(p)
    L = dynamics.build_liouvillian(H, chans)
    t = min(timeit.repeat(lambda: dynamics.steady_state(L), number=1, repeat=args.repeat))
    print(f"steady-state linear solve alone: {t * 1e3:.1f} ms")


if __name__ == "__main__":
    main()

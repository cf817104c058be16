"""Compare the numba kernels against the pure-numpy fall-back path.

Run twice to see both backends:

    python benchmarks/bench_kernels.py
    HECKESIGN_DISABLE_NUMBA=1 python benchmarks/bench_kernels.py

or let the script fork itself with the flag set (default behaviour).
"""

from __future__ import annotations

import os
import subprocess
import sys
import time


def run_suite() -> None:
    from heckesign import _kernels
    from heckesign.arith import divisor_counts, smallest_prime_factor
    from heckesign.modforms import eigenforms, get_power_cache

    backend = "numba" if _kernels.USE_NUMBA else "numpy"
    n_max = 10_000
    cache = get_power_cache(n_max)
    forms = eigenforms(60, n_max, cache)
    f = forms[0]
    spf = smallest_prime_factor(n_max)
    dcount = divisor_counts(n_max)

    # warm-up (numba compilation happens here, outside the timers)
    lam = f.lambda_array(n_max, spf)
    _kernels.hecke_relation_defect(lam[:512])
    _kernels.deligne_defect(lam, dcount)

    t0 = time.perf_counter()
    for _ in range(20):
        lam = f.lambda_array(n_max, spf)
    t_fill = (time.perf_counter() - t0) / 20

    t0 = time.perf_counter()
    defect = _kernels.hecke_relation_defect(lam)
    t_hecke = time.perf_counter() - t0

    t0 = time.perf_counter()
    dd = _kernels.deligne_defect(lam, dcount)
    t_deligne = time.perf_counter() - t0

    import numpy as np
    rng_t = np.linspace(0.1, 0.9, 6 * 5).reshape(6, 5)
    _kernels.expansion_tensor_sum(rng_t)
    t0 = time.perf_counter()
    for _ in range(50):
        _kernels.expansion_tensor_sum(rng_t)
    t_tensor = (time.perf_counter() - t0) / 50

    print(f"backend={backend:5s}  multiplicative fill (n=1e4): "
          f"{t_fill * 1e3:8.2f} ms")
    print(f"backend={backend:5s}  Hecke relation scan (mn<=1e4): "
          f"{t_hecke * 1e3:8.2f} ms   defect={defect:.2e}")
    print(f"backend={backend:5s}  divisor bound scan  (n<=1e4): "
          f"{t_deligne * 1e3:8.2f} ms   defect={dd:.2e}")
    print(f"backend={backend:5s}  expansion tensor sum (6^... tuples): "
          f"{t_tensor * 1e3:8.3f} ms")


def main() -> None:
    if os.environ.get("HECKESIGN_BENCH_CHILD"):
        run_suite()
        return
    run_suite()
    sys.stdout.flush()
    env = dict(os.environ, HECKESIGN_DISABLE_NUMBA="1",
               HECKESIGN_BENCH_CHILD="1")
    subprocess.run([sys.executable, os.path.abspath(__file__)], env=env,
                   check=True)


if __name__ == "__main__":
    main()

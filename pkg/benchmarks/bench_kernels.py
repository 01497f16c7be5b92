#!/usr/bin/env python3
"""Timing comparison of the pure-Python and compiled evaluation kernels.

Compiles two of the larger shipped instances, encodes their term lists
and networks once, then times line_sign / eval_terms / forward_layers on
a fixed batch of general-position points against both backends.  The
compiled column is skipped when the extension is not built.

    python3 benchmarks/bench_kernels.py [--points N] [--repeats R]
"""
import argparse
import time

from cpa2relu import _kernels_py as pure
from cpa2relu import maxform, model, network
from cpa2relu.corpus import all_documents
from cpa2relu.decompose import decompose
from cpa2relu.geometry import int_point
from cpa2relu.network import _kernel_form
from cpa2relu.verify import sample_general_position

try:
    from cpa2relu import _kernels as compiled
except ImportError:
    compiled = None

INSTANCES = ("ring_bump", "random_tri_7")


def _best_of(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def _workloads(n_points):
    docs = all_documents()
    for name in INSTANCES:
        inst = model.parse_instance(docs[name])
        slim = model.sparsify(inst)
        tl = maxform.reduce(decompose(slim), slim.p)
        net = network.build_network(tl)
        pts = [int_point(q) for q in sample_general_position(slim, 7, n_points)]
        lines = [slim.int_line(eid) for eid in sorted(slim.edges)]
        yield name, maxform.kernel_terms(tl), _kernel_form(net), pts, lines


def _agree(backend, terms, layers, pts, lines):
    for q in pts[:8]:
        assert backend.eval_terms(terms, *q) == pure.eval_terms(terms, *q)
        assert backend.forward_layers(layers, *q) == pure.forward_layers(layers, *q)
        for (A, B, C) in lines:
            assert backend.line_sign(A, B, C, *q) == pure.line_sign(A, B, C, *q)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=400)
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args(argv)

    backends = [("pure", pure)]
    if compiled is not None:
        backends.append(("compiled", compiled))
        print(f"backends: pure, compiled   points: {args.points}   "
              f"best of {args.repeats}")
    else:
        print(f"backends: pure only (extension not built)   "
              f"points: {args.points}   best of {args.repeats}")

    header = f"{'kernel':<16}{'instance':<14}" + "".join(
        f"{name + ' ms':>14}" for name, _ in backends)
    if compiled is not None:
        header += f"{'speedup':>10}"
    print(header)
    print("-" * len(header))

    for name, terms, layers, pts, lines in _workloads(args.points):
        if compiled is not None:
            _agree(compiled, terms, layers, pts, lines)
        jobs = (
            ("line_sign", lambda b: [b.line_sign(A, B, C, *q)
                                     for (A, B, C) in lines for q in pts]),
            ("eval_terms", lambda b: [b.eval_terms(terms, *q) for q in pts]),
            ("forward_layers", lambda b: [b.forward_layers(layers, *q)
                                          for q in pts]),
        )
        for kernel, job in jobs:
            row = f"{kernel:<16}{name:<14}"
            times = []
            for _, backend in backends:
                dt = _best_of(lambda: job(backend), args.repeats)
                times.append(dt)
                row += f"{dt * 1e3:>14.2f}"
            if len(times) == 2:
                row += f"{times[0] / times[1]:>9.1f}x"
            print(row)


if __name__ == "__main__":
    main()

#!/usr/bin/env python3
"""Benchmark the compiled scoring kernel against the pure-Python fallback.

Builds the seeded synthetic world, trains an order-3 model on the training
split, then times corpus perplexity evaluation (the hot loop of the
balance-factor grid search and of every analysis sweep) with each backend.

Run:  python benchmarks/bench_scorer.py [--size 5000] [--repeat 5]
"""

import argparse
import time

from classlm import score
from classlm.analysis import label_nus, nus_of
from classlm.lm import perplexity, train
from classlm.ngrams import extract
from classlm.synth import SynthConfig, generate_world


def time_backend(model, corpus, backend, repeat):
    scorer = model.scorer(backend)
    assert scorer.backend == backend
    best = float("inf")
    report = None
    for _ in range(repeat):
        start = time.perf_counter()
        report = perplexity(model, corpus, emission=True)
        best = min(best, time.perf_counter() - start)
    return best, report


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--size", type=int, default=5000)
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--order", type=int, default=3)
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--copies", type=int, default=10,
                        help="corpus replication factor for stable timings")
    args = parser.parse_args()

    world = generate_world(SynthConfig(size=args.size, seed=args.seed))
    train_rows, tune_rows, test_rows = world.splits()
    train_nus = nus_of(label_nus(world.lexicon, train_rows))
    eval_nus = nus_of(label_nus(world.lexicon, tune_rows + test_rows)) * args.copies
    model = train(extract(train_nus, args.order), world.lexicon)
    print(
        f"model: order={args.order} grams={len(model.probs10)} "
        f"vocab={len(model.vocab)}; eval corpus: {len(eval_nus)} utterances"
    )

    py_time, py_report = time_backend(model, eval_nus, "python", args.repeat)
    rate = py_report.token_count / py_time
    print(f"python kernel: {py_time:.4f}s  ({rate:,.0f} tokens/s)  pp={py_report.pp:.4f}")

    if not score.extension_available():
        print("compiled kernel: not built (pip install -e . with Cython + a C++ toolchain)")
        return

    cy_time, cy_report = time_backend(model, eval_nus, "cython", args.repeat)
    rate = cy_report.token_count / cy_time
    print(f"cython kernel: {cy_time:.4f}s  ({rate:,.0f} tokens/s)  pp={cy_report.pp:.4f}")
    print(f"speedup: {py_time / cy_time:.2f}x")
    print(f"kernel agreement: |delta pp| = {abs(py_report.pp - cy_report.pp):.3e}")


if __name__ == "__main__":
    main()

#!/usr/bin/env python3
# Copyright 2026 The sumforge Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Statistical check of `sumforge noise` against a Monte-Carlo model.

Masked counts are read back from the CLI output (sentence permutation off,
so the noisy source aligns with the report). The model draws
Poisson(lambda) lengths with numpy until round(p * n) is covered, on the
same document lengths; placement cannot change the covered total.
"""

import argparse
import json
import subprocess
import sys
import tempfile
import time
from pathlib import Path

import numpy as np


def model(lengths, p, lam, rng):
    covered = spans = 0
    for n in lengths:
        budget = int(np.floor(p * n + 0.5))
        c = 0
        while c < budget:
            c += rng.poisson(lam)
            spans += 1
        covered += c
    return covered / sum(lengths), covered / max(spans, 1)


def measure(binary, reports, tmp, p, lam, seed):
    out = tmp / f"noised_{seed}.jsonl"
    t0 = time.perf_counter()
    subprocess.run([binary, "noise", "--in", str(reports), "--out", str(out),
                    "--p", str(p), "--lambda", str(lam), "--seed", str(seed),
                    "--no-permute"], check=True, capture_output=True)
    elapsed = time.perf_counter() - t0
    lengths, masked, masks = [], 0, 0
    for line in out.read_text().splitlines():
        pair = json.loads(line)
        src, tgt = pair["src"].split(" "), pair["tgt"].split(" ")
        k = src.count("<mask>")
        lengths.append(len(tgt))
        masks += k
        masked += len(tgt) - (len(src) - k)
    return lengths, masked / sum(lengths), masked / max(masks, 1), elapsed


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--bin", required=True)
    args = ap.parse_args()
    ok = True
    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        # 160 pairs -> 800 reports, a little over 1e5 tokens.
        subprocess.run([args.bin, "gen-toy", "--pairs", "160", "--out", str(tmp / "toy")],
                       check=True, capture_output=True)
        reports = tmp / "toy" / "reports.jsonl"
        rng = np.random.default_rng(99)
        for seed in (0, 1, 2):
            lengths, frac, mean, elapsed = measure(args.bin, reports, tmp, 0.3, 3.0, seed)
            mfrac, mmean = np.mean([model(lengths, 0.3, 3.0, rng) for _ in range(20)], axis=0)
            good = (sum(lengths) >= 100000 and 0.285 <= frac <= 0.315 and
                    2.85 <= mean <= 3.15 and abs(frac - mfrac) < 0.005 and
                    abs(mean - mmean) < 0.08 and elapsed < 5.0)
            ok &= good
            print(f"seed {seed}: tokens={sum(lengths)} fraction={frac:.4f} (model {mfrac:.4f}) "
                  f"mean_span={mean:.3f} (model {mmean:.3f}) time={elapsed:.2f}s "
                  f"{'ok' if good else 'FAIL'}")
        lengths, frac, mean, _ = measure(args.bin, reports, tmp, 0.5, 1.0, 7)
        mfrac, mmean = np.mean([model(lengths, 0.5, 1.0, rng) for _ in range(20)], axis=0)
        good = abs(frac - mfrac) < 0.005 and abs(mean - mmean) < 0.05
        ok &= good
        print(f"p=0.5 lambda=1: fraction={frac:.4f} (model {mfrac:.4f}) "
              f"mean_span={mean:.3f} (model {mmean:.3f}) {'ok' if good else 'FAIL'}")
    sys.exit(0 if ok else 1)


if __name__ == "__main__":
    main()

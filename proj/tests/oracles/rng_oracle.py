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

"""Pure-Python ctr-splitmix64 and the denoising path built on it.

With --bin, regenerates `sumforge noise` output for a generated report set
and compares it line by line. Without --bin, prints golden values.
"""

import argparse
import json
import math
import subprocess
import sys
import tempfile
from pathlib import Path

M64 = (1 << 64) - 1
PLACEMENT_ATTEMPTS = 32


def mix64(x):
    x = (x + 0x9E3779B97F4A7C15) & M64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & M64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & M64
    return x ^ (x >> 31)


def fnv1a64(data, h=0xCBF29CE484222325):
    for c in data:
        h = ((h ^ c) * 0x100000001B3) & M64
    return h


class Rng:
    def __init__(self, seed, stream):
        self.key = mix64(seed ^ mix64(stream ^ 0x5851F42D4C957F2D))
        self.counter = 0

    def split(self, stream):
        return Rng(self.key, stream)

    def next(self):
        v = mix64((self.key + self.counter * 0xD1B54A32D192ED03) & M64)
        self.counter += 1
        return v

    def below(self, bound):
        m = self.next() * bound
        low = m & M64
        if low < bound:
            threshold = ((1 << 64) - bound) % bound
            while low < threshold:
                m = self.next() * bound
                low = m & M64
        return m >> 64

    def uniform(self):
        return (self.next() >> 11) * 2.0**-53

    def poisson(self, mean):
        if not mean > 0:
            return 0
        total, remaining = 0, mean
        while remaining > 0:
            part = min(remaining, 30.0)
            remaining -= part
            limit = math.exp(-part)
            product = 1.0 - self.uniform()
            while product > limit:
                total += 1
                product *= 1.0 - self.uniform()
        return total


def shuffle(items, rng):
    for i in range(len(items), 1, -1):
        j = rng.below(i)
        items[i - 1], items[j] = items[j], items[i - 1]


def free_starts(used, width):
    out, run = [], 0
    for i, u in enumerate(used):
        run = 0 if u else run + 1
        if run >= width:
            out.append(i + 1 - width)
    return out


def longest_run(used):
    best = run = 0
    for u in used:
        run = 0 if u else run + 1
        best = max(best, run)
    return best


def sample_spans(n, p, lam, rng):
    budget = int(math.floor(p * n + 0.5))
    if budget == 0:
        return []
    used = [False] * n
    free = n
    covered = 0
    spans = []
    while covered < budget and free > 0:
        length = rng.poisson(lam)
        width = max(length, 1)
        start = None
        if width <= n:
            for _ in range(PLACEMENT_ATTEMPTS):
                s = rng.below(n - width + 1)
                if not any(used[s:s + width]):
                    start = s
                    break
        if start is None:
            starts = free_starts(used, width)
            if not starts:
                length = width = longest_run(used)
                starts = free_starts(used, width)
            start = starts[rng.below(len(starts))]
        for i in range(start, start + width):
            used[i] = True
        free -= width
        covered += length
        spans.append((start, length))
    return sorted(spans)


def infill(sentences, spans, mask):
    out = [[] for _ in sentences]
    k = skip = pos = 0
    for si, sent in enumerate(sentences):
        for tok in sent:
            if k < len(spans) and spans[k][0] == pos:
                out[si].append(mask)
                skip = spans[k][1]
                k += 1
            if skip:
                skip -= 1
            else:
                out[si].append(tok)
            pos += 1
    return [s for s in out if s]


def noisy(sentences, seed, index, p=0.3, lam=3.0, permute=True, mask="<mask>"):
    base = Rng(seed, index)
    sents = [list(s) for s in sentences]
    if permute:
        shuffle(sents, base.split(0))
    n = sum(len(s) for s in sents)
    return infill(sents, sample_spans(n, p, lam, base.split(1)), mask)


def render(sentences):
    return " ".join(" ".join(s) for s in sentences)


def goldens():
    perm = ["s1", "s2", "s3"]
    shuffle(perm, Rng(0, 0))
    first = [Rng(0, 0).next(), Rng(1, 2).split(3).next()]
    return {"permute_seed0": perm, "first_outputs": first,
            "fnv_reports": fnv1a64(b"reports")}


def compare(binary):
    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        subprocess.run([binary, "gen-toy", "--pairs", "30", "--out", str(tmp / "toy")],
                       check=True, capture_output=True)
        reports = [json.loads(l)["tgt"]
                   for l in (tmp / "toy" / "reports.jsonl").read_text().splitlines()]
        (tmp / "reports.txt").write_text("\n".join(reports) + "\n")
        tok = subprocess.run([binary, "tokenize", "--in", str(tmp / "reports.txt")],
                             check=True, capture_output=True, text=True).stdout
        docs = [json.loads(l) for l in tok.splitlines()]
        bad = 0
        for seed, permute in [(0, True), (17, True), (5, False)]:
            out = tmp / f"noise_{seed}.jsonl"
            cmd = [binary, "noise", "--in", str(tmp / "toy" / "reports.jsonl"),
                   "--out", str(out), "--seed", str(seed)]
            if not permute:
                cmd.append("--no-permute")
            if seed == 17:
                cmd += ["--p", "0.5", "--lambda", "1.5", "--mask", "[M]"]
            subprocess.run(cmd, check=True, capture_output=True)
            got = [json.loads(l) for l in out.read_text().splitlines()]
            for i, doc in enumerate(docs):
                if seed == 17:
                    want = noisy(doc, seed, i, 0.5, 1.5, permute, "[M]")
                else:
                    want = noisy(doc, seed, i, permute=permute)
                if got[i]["src"] != render(want):
                    bad += 1
                    print(f"seed {seed} report {i}:\n  lib    {got[i]['src']}\n"
                          f"  oracle {render(want)}")
        print(f"compared {3 * len(docs)} noised reports, {bad} mismatches")
        return bad == 0


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--bin")
    args = ap.parse_args()
    print(json.dumps(goldens()))
    if args.bin:
        sys.exit(0 if compare(args.bin) else 1)


if __name__ == "__main__":
    main()

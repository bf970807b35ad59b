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

import json
import shutil
from pathlib import Path

import pytest

import sumforge

ROOT = Path(__file__).resolve().parents[2]


def test_tokenize_and_render():
    doc = sumforge.parse_document("M. Martin ouvre la séance. L'ordre du jour est adopté.")
    assert doc[0][:3] == ["M.", "Martin", "ouvre"]
    assert len(doc) == 2
    assert sumforge.render(doc, "\n").splitlines()[1].startswith("L' ordre")
    assert sumforge.metric_tokens("Le Budget") == ["le", "budget"]


def test_bpe_round_trip(tmp_path):
    model = sumforge.BpeModel.learn(["low low low lower"], 2)
    assert model.merges == [("l", "o"), ("lo", "w")]
    assert model.apply(["lower"]) == ["low@@", "e@@", "r"]
    assert model.decode(["low@@", "e@@", "r"]) == ["lower"]
    model.save(str(tmp_path / "m.bpe"))
    assert sumforge.BpeModel.load(str(tmp_path / "m.bpe")).merges == model.merges


def test_errors_carry_codes():
    model = sumforge.BpeModel([("a", "b")])
    with pytest.raises(sumforge.SumforgeError) as info:
        model.decode(["a@@"])
    assert info.value.code == "DanglingMarker"
    with pytest.raises(sumforge.SumforgeError) as info:
        sumforge.select_backward_model([])
    assert info.value.code == "NoCandidates"


def test_metrics():
    assert sumforge.rouge_n(["a", "b"], ["a", "b"], 1) == (1.0, 1.0, 1.0)
    assert sumforge.lcs_length(list("abcbdab"), list("bdcaba")) == 4
    assert sumforge.format_rouge_row(52.31, 34.0, 49.7) == "52.31 / 34.00 / 49.70"
    assert sumforge.format_percent(79.36) == "79.36"
    r = sumforge.evaluate(["le maire parle ."], ["le maire parle ."], ["le maire parle ."])
    assert r["copy_pct"] == 100.0 and r["r1"][2] == 1.0


def test_noise_is_deterministic():
    report = "Le maire ouvre la séance. Le budget est voté. La séance est levée."
    a = sumforge.denoising_pair(report, index=3, seed=1)
    assert a == sumforge.denoising_pair(report, index=3, seed=1)
    assert "<mask>" in a[0]
    assert a[1] == sumforge.render(sumforge.parse_document(report))
    spans = sumforge.sample_spans(40, seed=0, stream=0)
    assert spans == sorted(spans)


def test_selection_fixture():
    table = [("Baseline", 33.83, 74.25), ("SelfSup", 37.94, 78.61),
             ("Backsum", 39.17, 86.96), ("Both", 40.23, 88.03)]
    assert sumforge.select_backward_model(table) == ("Both", False)
    assert sumforge.select_backward_model(table, 80.0) == ("SelfSup", False)


def test_interleave_counts():
    out = sumforge.weighted_interleave([("a", 2, 5), ("b", 7, 9)], seed=0, cycles=3)
    assert len(out) == 27
    assert sum(1 for name, _ in out if name == "a") == 6


def test_toy_pipeline(tmp_path):
    (tmp_path / "configs").mkdir()
    cfg = tmp_path / "configs" / "toy.toml"
    shutil.copy(ROOT / "configs" / "toy.toml", cfg)
    sumforge.gen_toy_corpus(20, 0, str(tmp_path / "toy"))
    assert sumforge.run_stage(str(cfg), "backward")["count"] == 80
    synth = sumforge.run_stage(str(cfg), "synth")
    assert synth["count"] == 100 and synth["complete"]
    fwd = sumforge.run_stage(str(cfg), "forward")
    assert fwd["cycles"] >= 1
    ev = sumforge.run_stage(str(cfg), "eval")
    assert ev["report"]["copy_pct"] == 100.0
    assert sumforge.run_stage(str(cfg), "select")["name"] == "SelfSup"
    stats = sumforge.corpus_stats(str(tmp_path / "toy" / "manual.jsonl"))
    assert stats["n_pairs"] == 20 and stats["src_d1"] <= stats["src_d9"]
    with open(tmp_path / "work" / "eval.json") as f:
        assert json.load(f)["n"] == 2

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

"""Python bindings for the sumforge core library."""

from ._sumforge import (  # noqa: F401
    BpeModel,
    SumforgeError,
    copy_percent,
    corpus_stats,
    denoising_pair,
    evaluate,
    format_percent,
    format_rouge_row,
    gen_toy_corpus,
    lcs_length,
    metric_tokens,
    parse_document,
    render,
    rouge_l,
    rouge_n,
    run_stage,
    sample_spans,
    select_backward_model,
    split_sentences,
    summarize,
    tokenize,
    weighted_interleave,
)

__version__ = "0.1.0"

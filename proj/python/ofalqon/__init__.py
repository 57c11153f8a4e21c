# Copyright 2026 The ofalqon Authors
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
"""Statevector FALQON and QAOA on 3-regular MaxCut, with a benchmark harness."""

from ._ofalqon import (
    ConsistencyError,
    DegenerateSampleError,
    DimensionError,
    Error,
    Graph,
    InsufficientTraceError,
    InvalidArgument,
    OptimizerError,
    PairingError,
    ParseError,
    SizeError,
    WilcoxonResult,
    are_isomorphic,
    beta_from_feedback,
    canonical_graph6,
    commutator_expectations,
    enumerate_cubic_graphs,
    exact_maxcut,
    holm_adjust,
    ising_energies,
    load_ensemble,
    load_records,
    optimize_qaoa,
    plus_state,
    qaoa_cost,
    qaoa_state,
    run_benchmark,
    run_falqon,
    sample_bitstrings,
    significance,
    success_probability,
    summarize,
    table_methods,
    wilcoxon_signed_rank,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]

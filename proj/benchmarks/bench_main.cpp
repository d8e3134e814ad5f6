// Copyright 2026 The ghzforge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <random>

#include "ghzforge/elements.hpp"
#include "ghzforge/protocol.hpp"
#include "ghzforge/reference.hpp"

namespace {

using namespace ghzforge;

ProtocolOptions options(int d, int n) {
    ProtocolOptions o;
    o.d = d;
    o.n = n;
    o.feedforward = true;
    return o;
}

void BM_Compile(benchmark::State &state) {
    const auto o = options(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(compile(o));
    }
}
BENCHMARK(BM_Compile)->Args({3, 4})->Args({5, 8});

void BM_RuleBackend(benchmark::State &state) {
    const auto plan = compile(options(static_cast<int>(state.range(0)), static_cast<int>(state.range(1))));
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_backend(plan, Backend::Rule, true));
    }
}
BENCHMARK(BM_RuleBackend)->Args({3, 4})->Args({4, 6})->Args({5, 8})->Unit(benchmark::kMillisecond);

void BM_ElementBackend(benchmark::State &state) {
    const auto plan = compile(options(static_cast<int>(state.range(0)), static_cast<int>(state.range(1))));
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_backend(plan, Backend::Element, true));
    }
}
BENCHMARK(BM_ElementBackend)->Args({3, 4})->Args({4, 6})->Args({5, 8})->Unit(benchmark::kMillisecond);

void BM_Oracle(benchmark::State &state) {
    const auto plan = compile(options(static_cast<int>(state.range(0)), static_cast<int>(state.range(1))));
    for (auto _ : state) {
        benchmark::DoNotOptimize(execute(plan, Backend::Oracle));
    }
}
BENCHMARK(BM_Oracle)->Args({3, 4})->Args({4, 6})->Unit(benchmark::kMillisecond);

void BM_Tensor(benchmark::State &state) {
    const int d = static_cast<int>(state.range(0));
    const auto a = ghz_reference(d, 4);
    const auto b = relabel_ports(a, [d](int p) { return p + 4 * d; });
    for (auto _ : state) {
        benchmark::DoNotOptimize(tensor(a, b));
    }
}
BENCHMARK(BM_Tensor)->Arg(3)->Arg(8)->Arg(32);

void BM_Hwp(benchmark::State &state) {
    const int d = static_cast<int>(state.range(0));
    PhotonicState s = ghz_reference(d, 6);
    for (int p = 0; p < 6 * d; p += 2) {
        s = apply_hwp(s, p, 0.3);
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(apply_hwp(s, 1, 0.3));
    }
    state.counters["terms"] = static_cast<double>(s.size());
}
BENCHMARK(BM_Hwp)->Arg(3)->Arg(6);

}  // namespace

BENCHMARK_MAIN();

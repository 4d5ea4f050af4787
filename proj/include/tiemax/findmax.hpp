/*
   Copyright 2026 The Tiemax Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <tiemax/core.hpp>
#include <tiemax/parity_sim.hpp>

// Randomized maximum finding over arbitrary (possibly tied) inputs.
//
// Each round probes the current pivot i with m random parity tests. If all
// come back POSITIVE the pivot is declared maximal; otherwise the first
// NEGATIVE subset B has an odd number of members above x_i, and bisecting it
// (keeping the half with odd count) lands on some i' with x_{i'} > x_i, which
// becomes the next pivot. At most m0 rounds are run. Every parity test goes
// through the tie-tolerant gadget in parity_sim.hpp.
namespace tiemax {

using Rng = std::mt19937_64;

// Seed of stream `index` under `base`; distinct indices give unrelated streams.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept;

// Positive rational, always stored reduced.
struct Rational {
    std::uint64_t num = 1;
    std::uint64_t den = 1;

    // Accepts "3", "0.25", "3/2". Throws std::invalid_argument on anything
    // else, on zero, and on components above 10^6.
    static Rational parse(std::string_view text);
    static Rational of(std::uint64_t num, std::uint64_t den);

    [[nodiscard]] std::string to_string() const;
    [[nodiscard]] double to_double() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }

    friend bool operator==(const Rational&, const Rational&) = default;
};

// Order in which lemma3_descend lays out B before bisecting it.
enum class DescentOrder {
    kShuffled,  // uniformly random permutation drawn from the run's RNG
    kIndex,     // ascending index
};

struct Params {
    std::size_t n = 1;
    Rational c;
    std::size_t m = 0;   // samples per round, ceil(3c log2 n)
    std::size_t m0 = 0;  // round budget, floor(10c log2 n)
    SearchStrategy strategy = SearchStrategy::kBinary;
    std::uint64_t seed = 0;
    DescentOrder descent = DescentOrder::kShuffled;
    GadgetOptions gadget;
};

// Computes m and m0 with exact integer comparisons (2^(k*den) against
// n^(3*num) resp. n^(10*num)). For n >= 2, m0 is raised to 1 if the formula
// gives 0.
Params derive_params(std::size_t n, Rational c, SearchStrategy strategy, std::uint64_t seed);

// Simulated parity tests allowed in one round: m + ceil(log2(n-1)).
std::size_t round_budget(const Params& params) noexcept;
// Ceiling on ordinary tests over a whole run. BINARY:
// m0 * round_budget * (ceil(log2 n) + 1). EXPONENTIAL replaces the last factor
// with the per-call exponential bound at mu = n-1, plus the Pi-test.
std::uint64_t total_test_ceiling(const Params& params) noexcept;

// Each j != i independently with probability 1/2.
IndexSet sample_subset(Rng& rng, std::size_t n, Index i);

struct StageResult {
    enum class Kind { kDeclared, kWitness };
    Kind kind = Kind::kDeclared;
    IndexSet witness;  // first subset answered NEGATIVE; empty when declared

    [[nodiscard]] bool declared() const noexcept { return kind == Kind::kDeclared; }
};

// Draws up to params.m subsets and stops at the first NEGATIVE answer.
StageResult lemma2_stage(const Instance& inst, Index i, const Params& params, Rng& rng, TestLedger& ledger);

// Requires |B n J_i| odd. Returns some i' in B with x_{i'} > x_i after at most
// ceil(log2 |B|) simulated parity tests. Throws std::logic_error when the
// descent ends on an index not above the pivot (precondition violated).
Index lemma3_descend(const Instance& inst, Index i, const IndexSet& set, SearchStrategy strategy,
                     TestLedger& ledger, Rng& rng, DescentOrder order = DescentOrder::kShuffled,
                     GadgetOptions options = {});

enum class Outcome { kDeclaredCorrect, kDeclaredWrong, kExhausted };

std::string_view to_string(Outcome o) noexcept;

struct RunTrace {
    std::vector<Index> pivots;
    // |J_pivot| for each pivot, read from the instance after the fact. Never
    // consulted by the algorithm.
    std::vector<std::size_t> r_sequence;
    // Simulated parity tests spent in each round.
    std::vector<std::size_t> round_simulated_tests;
    Outcome outcome = Outcome::kExhausted;
    std::size_t rounds = 0;
    bool last_pivot_is_max = false;
    TestLedger ledger;
};

struct FindmaxResult {
    std::optional<Index> index;  // nullopt on exhaustion
    RunTrace trace;
};

// Starts at pivot 0. Throws std::logic_error if a round exceeds round_budget,
// the run exceeds total_test_ceiling, or the r sequence fails to decrease.
// `ledger` may carry an observer; the final counts are copied into the trace.
FindmaxResult findmax(const Instance& inst, const Params& params, Rng& rng, TestLedger ledger = {});

// Seeds the RNG from params.seed.
FindmaxResult findmax(const Instance& inst, const Params& params);

// Left-to-right tournament; the current index survives ZERO and POSITIVE.
// Exactly n-1 comparisons.
Index linear_elimination_baseline(const Instance& inst, TestLedger& ledger);

}  // namespace tiemax

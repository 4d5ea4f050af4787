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
#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include <tiemax/core.hpp>
#include <tiemax/findmax.hpp>
#include <tiemax/parity_sim.hpp>

namespace tiemax::bench {

enum class GeneratorKind { kDistinct, kBalancedMultiset, kAllEqual, kOneMaxRestTied, kTwoLevel };

inline constexpr GeneratorKind kAllGenerators[] = {GeneratorKind::kDistinct, GeneratorKind::kBalancedMultiset,
                                                   GeneratorKind::kAllEqual, GeneratorKind::kOneMaxRestTied,
                                                   GeneratorKind::kTwoLevel};

std::string_view to_string(GeneratorKind kind) noexcept;
std::optional<GeneratorKind> parse_generator(std::string_view name) noexcept;

struct GeneratorSpec {
    GeneratorKind kind = GeneratorKind::kDistinct;
    std::size_t n = 1;
    std::uint64_t seed = 0;
};

// Multiplicities of the balanced multiset on n elements: s = floor(sqrt n)
// copies of each of floor(n/s) values, with the remainder n mod s added to the
// first value. Sums to n.
std::vector<std::size_t> balanced_multiplicities(std::size_t n);

// Deterministic in (kind, n, seed). Values are small positive integers.
Instance generate_instance(const GeneratorSpec& spec);

struct TrialRecord {
    std::size_t trial = 0;
    GeneratorKind generator = GeneratorKind::kDistinct;
    std::size_t n = 0;
    Rational c;
    SearchStrategy strategy = SearchStrategy::kBinary;
    std::uint64_t seed = 0;
    Outcome outcome = Outcome::kExhausted;
    std::size_t rounds = 0;
    std::uint64_t simulated_parity_tests = 0;
    std::uint64_t ordinary_tests = 0;
    bool correct = false;
};

struct TrialHooks {
    // Both may be invoked from worker threads when threads > 1.
    TestLedger::Observer on_parity;
    std::function<void(std::size_t trial, const Instance&, const RunTrace&)> on_trace;
};

// Trial k draws its instance and its algorithm stream from
// derive_seed(spec.seed, k); params.seed is ignored. Records are ordered by
// trial index whatever `threads` is.
std::vector<TrialRecord> run_trials(const GeneratorSpec& spec, const Params& params, std::size_t trials,
                                    const TrialHooks& hooks = {}, unsigned threads = 1);

struct StrategyCost {
    SearchStrategy strategy = SearchStrategy::kBinary;
    std::size_t trials = 0;
    double mean_ordinary_tests = 0;
    std::uint64_t max_ordinary_tests = 0;
};

struct TrialSummary {
    std::size_t trials = 0;
    std::size_t failures = 0;
    double failure_rate = 0;
    std::uint64_t max_ordinary_tests = 0;
    double mean_ordinary_tests = 0;
    // max_ordinary_tests / (log2 n)^3; 0 when n = 1.
    double depth_bound_ratio = 0;
    std::vector<StrategyCost> strategy_costs;
};

// Throws std::invalid_argument on an empty span or on records of mixed n.
TrialSummary summarize(std::span<const TrialRecord> records);

struct BaselineSummary {
    std::size_t trials = 0;
    std::uint64_t min_tests = 0;
    std::uint64_t max_tests = 0;
    bool all_correct = true;
};

// linear_elimination_baseline on the same instances run_trials would draw.
BaselineSummary run_baseline(const GeneratorSpec& spec, std::size_t trials);

// --- oracle verification ---------------------------------------------------

struct VerifyConfig {
    std::size_t max_n = 8;
    Value value_lo = -5;
    Value value_hi = 5;
    std::size_t random_cases = 2000;
    std::uint64_t seed = 0;
};

struct CheckTally {
    std::string name;
    std::uint64_t passed = 0;
    std::uint64_t failed = 0;
    std::vector<std::string> failures;  // first few offending tuples
};

struct VerifyReport {
    std::uint64_t exhaustive_cases = 0;
    std::uint64_t random_cases = 0;
    // (a) r_test vs literal R, (b) gadget sign vs literal Pi, (c) sign vs
    // parity of |B n J_i|, (d) cost bounds and strategy agreement.
    std::vector<CheckTally> checks;

    [[nodiscard]] bool ok() const noexcept;
};

// Exhaustive over every value pattern in {0,1,2}^n for n <= min(5, max_n),
// every pivot and every B; then random_cases random (instance, i, B) with
// n <= max_n and values in [value_lo, value_hi]. Throws std::invalid_argument
// if max_n exceeds the oracle cap.
VerifyReport verify_oracle_suite(const VerifyConfig& config);

// Runs checks (a)-(d) on one (inst, i, B) tuple, adding to `report`.
void verify_case(const Instance& inst, Index i, const IndexSet& set, VerifyReport& report);
VerifyReport empty_report();

// --- emitters ----------------------------------------------------------------

enum class Format { kCsv, kJson };

std::optional<Format> parse_format(std::string_view name) noexcept;

inline constexpr std::string_view kCsvHeader =
    "trial,generator,n,c,strategy,seed,outcome,rounds,simulated_parity_tests,ordinary_tests,correct";

void emit(std::ostream& out, std::span<const TrialRecord> records, Format format);
void emit(std::ostream& out, const TrialSummary& summary, Format format);

nlohmann::ordered_json to_json(const TrialRecord& record);
nlohmann::ordered_json to_json(const TrialSummary& summary);
nlohmann::ordered_json to_json(const BaselineSummary& baseline);
nlohmann::ordered_json to_json(const VerifyReport& report);
// 1-based indices throughout.
nlohmann::ordered_json to_json(const FindmaxResult& result, const Params& params);

}  // namespace tiemax::bench

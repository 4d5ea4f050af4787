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

#include <tiemax/bench.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace tiemax::bench {

namespace {

constexpr std::size_t kMaxRecordedFailures = 5;

// Independent sub-streams of one trial seed.
constexpr std::uint64_t kInstanceStream = 0;
constexpr std::uint64_t kAlgorithmStream = 1;

}  // namespace

std::string_view to_string(GeneratorKind kind) noexcept {
    switch (kind) {
        case GeneratorKind::kDistinct:
            return "distinct";
        case GeneratorKind::kBalancedMultiset:
            return "balanced_multiset";
        case GeneratorKind::kAllEqual:
            return "all_equal";
        case GeneratorKind::kOneMaxRestTied:
            return "one_max_rest_tied";
        case GeneratorKind::kTwoLevel:
            return "two_level";
    }
    return "?";
}

std::optional<GeneratorKind> parse_generator(std::string_view name) noexcept {
    for (GeneratorKind kind : kAllGenerators) {
        if (to_string(kind) == name) {
            return kind;
        }
    }
    return std::nullopt;
}

std::vector<std::size_t> balanced_multiplicities(std::size_t n) {
    if (n == 0) {
        return {};
    }
    auto s = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
    while (s * s > n) {
        --s;
    }
    while ((s + 1) * (s + 1) <= n) {
        ++s;
    }
    std::vector<std::size_t> counts(n / s, s);
    counts.front() += n % s;
    return counts;
}

Instance generate_instance(const GeneratorSpec& spec) {
    if (spec.n == 0) {
        throw std::invalid_argument("generator needs n >= 1");
    }
    Rng rng(spec.seed);
    const std::size_t n = spec.n;
    std::vector<Value> values;
    values.reserve(n);
    switch (spec.kind) {
        case GeneratorKind::kDistinct:
            for (std::size_t k = 1; k <= n; ++k) {
                values.push_back(static_cast<Value>(k));
            }
            break;
        case GeneratorKind::kBalancedMultiset: {
            const auto counts = balanced_multiplicities(n);
            for (std::size_t v = 0; v < counts.size(); ++v) {
                values.insert(values.end(), counts[v], static_cast<Value>(v + 1));
            }
            break;
        }
        case GeneratorKind::kAllEqual:
            values.assign(n, 1);
            break;
        case GeneratorKind::kOneMaxRestTied:
            values.assign(n, 1);
            values.front() = 2;
            break;
        case GeneratorKind::kTwoLevel:
            values.assign(n / 2, 1);
            values.insert(values.end(), n - n / 2, 2);
            break;
    }
    std::shuffle(values.begin(), values.end(), rng);
    return Instance(std::move(values));
}

// ---------------------------------------------------------------------------
// Trials

namespace {

TrialRecord run_one(const GeneratorSpec& spec, const Params& params, std::size_t trial, const TrialHooks& hooks) {
    const std::uint64_t trial_seed = derive_seed(spec.seed, trial);
    const Instance inst = generate_instance({spec.kind, spec.n, derive_seed(trial_seed, kInstanceStream)});
    Rng rng(derive_seed(trial_seed, kAlgorithmStream));

    TestLedger ledger;
    if (hooks.on_parity) {
        ledger.set_observer(hooks.on_parity);
    }
    const FindmaxResult result = findmax(inst, params, rng, std::move(ledger));
    if (hooks.on_trace) {
        hooks.on_trace(trial, inst, result.trace);
    }

    TrialRecord r;
    r.trial = trial;
    r.generator = spec.kind;
    r.n = spec.n;
    r.c = params.c;
    r.strategy = params.strategy;
    r.seed = trial_seed;
    r.outcome = result.trace.outcome;
    r.rounds = result.trace.rounds;
    r.simulated_parity_tests = result.trace.ledger.simulated_parity_tests();
    r.ordinary_tests = result.trace.ledger.ordinary_tests();
    r.correct = r.outcome == Outcome::kDeclaredCorrect;
    return r;
}

}  // namespace

std::vector<TrialRecord> run_trials(const GeneratorSpec& spec, const Params& params, std::size_t trials,
                                    const TrialHooks& hooks, unsigned threads) {
    if (trials == 0) {
        throw std::invalid_argument("trials must be at least 1");
    }
    if (params.n != spec.n) {
        throw std::invalid_argument("params and generator disagree on n");
    }
    std::vector<TrialRecord> records(trials);
    threads = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(trials)));
    if (threads == 1) {
        for (std::size_t k = 0; k < trials; ++k) {
            records[k] = run_one(spec, params, k, hooks);
        }
        return records;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> workers;
    workers.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
        workers.emplace_back([&] {
            for (std::size_t k = next++; k < trials; k = next++) {
                try {
                    records[k] = run_one(spec, params, k, hooks);
                } catch (...) {
                    const std::lock_guard lock(error_mutex);
                    if (!error) {
                        error = std::current_exception();
                    }
                    next = trials;
                }
            }
        });
    }
    for (auto& w : workers) {
        w.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }
    return records;
}

TrialSummary summarize(std::span<const TrialRecord> records) {
    if (records.empty()) {
        throw std::invalid_argument("cannot summarize an empty record set");
    }
    TrialSummary s;
    s.trials = records.size();
    const std::size_t n = records.front().n;
    std::map<SearchStrategy, StrategyCost> by_strategy;
    double total = 0;
    for (const TrialRecord& r : records) {
        if (r.n != n) {
            throw std::invalid_argument("records mix different n");
        }
        s.failures += r.correct ? 0 : 1;
        s.max_ordinary_tests = std::max(s.max_ordinary_tests, r.ordinary_tests);
        total += static_cast<double>(r.ordinary_tests);

        StrategyCost& cost = by_strategy[r.strategy];
        cost.strategy = r.strategy;
        ++cost.trials;
        cost.mean_ordinary_tests += static_cast<double>(r.ordinary_tests);
        cost.max_ordinary_tests = std::max(cost.max_ordinary_tests, r.ordinary_tests);
    }
    s.failure_rate = static_cast<double>(s.failures) / static_cast<double>(s.trials);
    s.mean_ordinary_tests = total / static_cast<double>(s.trials);
    if (n > 1) {
        const double lg = std::log2(static_cast<double>(n));
        s.depth_bound_ratio = static_cast<double>(s.max_ordinary_tests) / (lg * lg * lg);
    }
    for (auto& [strategy, cost] : by_strategy) {
        cost.mean_ordinary_tests /= static_cast<double>(cost.trials);
        s.strategy_costs.push_back(cost);
    }
    return s;
}

BaselineSummary run_baseline(const GeneratorSpec& spec, std::size_t trials) {
    BaselineSummary b;
    for (std::size_t k = 0; k < trials; ++k) {
        const std::uint64_t trial_seed = derive_seed(spec.seed, k);
        const Instance inst = generate_instance({spec.kind, spec.n, derive_seed(trial_seed, kInstanceStream)});
        TestLedger ledger;
        const Index winner = linear_elimination_baseline(inst, ledger);
        const std::uint64_t tests = ledger.ordinary_tests();
        b.min_tests = b.trials == 0 ? tests : std::min(b.min_tests, tests);
        b.max_tests = std::max(b.max_tests, tests);
        b.all_correct = b.all_correct && inst.is_maximizer(winner);
        ++b.trials;
    }
    return b;
}

// ---------------------------------------------------------------------------
// Oracle verification

bool VerifyReport::ok() const noexcept {
    return std::all_of(checks.begin(), checks.end(), [](const CheckTally& c) { return c.failed == 0; });
}

VerifyReport empty_report() {
    VerifyReport r;
    for (const char* name : {"r_test_vs_literal_R", "gadget_sign_vs_literal_Pi", "sign_parity_law", "cost_bounds"}) {
        r.checks.push_back(CheckTally{name, 0, 0, {}});
    }
    return r;
}

namespace {

std::string describe(const Instance& inst, Index i, const IndexSet& set, std::string_view extra) {
    std::ostringstream out;
    out << "inst=[";
    for (std::size_t k = 0; k < inst.size(); ++k) {
        out << (k ? "," : "") << inst[k];
    }
    out << "] i=" << i + 1 << " B={";
    bool first = true;
    for (Index a : set) {
        out << (first ? "" : ",") << a + 1;
        first = false;
    }
    out << "}";
    if (!extra.empty()) {
        out << " " << extra;
    }
    return out.str();
}

void tally(CheckTally& check, bool ok, const std::function<std::string()>& what) {
    if (ok) {
        ++check.passed;
        return;
    }
    ++check.failed;
    if (check.failures.size() < kMaxRecordedFailures) {
        check.failures.push_back(what());
    }
}

}  // namespace

void verify_case(const Instance& inst, Index i, const IndexSet& set, VerifyReport& report) {
    CheckTally& check_r = report.checks[0];
    CheckTally& check_pi = report.checks[1];
    CheckTally& check_law = report.checks[2];
    CheckTally& check_cost = report.checks[3];

    const std::size_t b = set.size();
    const std::size_t ties = tie_count(inst, i, set);
    const IndexSet above = above_set(inst, i);
    const auto in_j = static_cast<std::size_t>(
        std::count_if(set.begin(), set.end(), [&](Index a) { return above.contains(a); }));
    const SignOutcome expected_law = in_j % 2 == 0 ? SignOutcome::kPositive : SignOutcome::kNegative;

    for (std::size_t t = 0; t <= b; ++t) {
        TestLedger ledger;
        const bool zero = r_test(inst, i, set, t, ledger);
        const BigInt literal = literal_R(inst, i, set, t);
        const bool ok = zero == (literal == 0) && literal >= 0 && ledger.ordinary_tests() == (t > 0 ? 1U : 0U);
        tally(check_r, ok, [&] { return describe(inst, i, set, "t=" + std::to_string(t)); });
    }

    const SignOutcome literal_sign = sign_of(literal_Pi(inst, i, set, ties));
    std::size_t mu_by_strategy[2] = {0, 0};
    for (SearchStrategy strategy : {SearchStrategy::kBinary, SearchStrategy::kExponential}) {
        TestLedger ledger;
        const SimulatedSign s = simulate_parity(inst, i, set, strategy, ledger);
        const std::string tag = "strategy=" + std::string(to_string(strategy));

        tally(check_pi, s.sign == literal_sign && s.mu == ties && s.sign != SignOutcome::kZero,
              [&] { return describe(inst, i, set, tag); });
        tally(check_law, s.sign == expected_law, [&] { return describe(inst, i, set, tag); });

        bool cost_ok = ledger.ordinary_tests() == s.total_tests() && ledger.simulated_parity_tests() == 1 &&
                       s.pi_tests == 1;
        if (strategy == SearchStrategy::kBinary) {
            cost_ok = cost_ok && s.r_tests <= binary_r_test_bound(b) && s.total_tests() <= binary_r_test_bound(b) + 1;
        } else {
            cost_ok = cost_ok && s.r_tests <= exponential_r_test_bound(s.mu) &&
                      s.total_tests() <= exponential_r_test_bound(s.mu) + 1;
        }
        TestLedger mu_ledger;
        mu_by_strategy[strategy == SearchStrategy::kBinary ? 0 : 1] = find_mu(inst, i, set, strategy, mu_ledger);
        cost_ok = cost_ok && mu_ledger.ordinary_tests() == s.r_tests;
        tally(check_cost, cost_ok, [&] { return describe(inst, i, set, tag); });
    }
    tally(check_cost, mu_by_strategy[0] == mu_by_strategy[1] && mu_by_strategy[0] == ties,
          [&] { return describe(inst, i, set, "find_mu strategies disagree"); });
}

VerifyReport verify_oracle_suite(const VerifyConfig& config) {
    if (config.max_n == 0 || config.max_n > kOracleSizeCap) {
        throw std::invalid_argument("max_n must lie in 1.." + std::to_string(kOracleSizeCap));
    }
    if (config.value_lo > config.value_hi) {
        throw std::invalid_argument("empty value range");
    }
    VerifyReport report = empty_report();

    // Exhaustive: every pattern over {0,1,2}, every pivot, every B.
    const std::size_t exhaustive_n = std::min<std::size_t>(5, config.max_n);
    for (std::size_t n = 1; n <= exhaustive_n; ++n) {
        std::size_t patterns = 1;
        for (std::size_t k = 0; k < n; ++k) {
            patterns *= 3;
        }
        for (std::size_t code = 0; code < patterns; ++code) {
            std::vector<Value> values(n);
            for (std::size_t k = 0, c = code; k < n; ++k, c /= 3) {
                values[k] = static_cast<Value>(c % 3);
            }
            const Instance inst(std::move(values));
            for (Index i = 0; i < n; ++i) {
                for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
                    if ((mask >> i) & 1U) {
                        continue;
                    }
                    std::vector<Index> members;
                    for (Index a = 0; a < n; ++a) {
                        if ((mask >> a) & 1U) {
                            members.push_back(a);
                        }
                    }
                    verify_case(inst, i, IndexSet::from_sorted(std::move(members)), report);
                    ++report.exhaustive_cases;
                }
            }
        }
    }

    Rng rng(config.seed);
    std::uniform_int_distribution<std::size_t> pick_n(1, config.max_n);
    std::uniform_int_distribution<Value> pick_value(config.value_lo, config.value_hi);
    for (std::size_t k = 0; k < config.random_cases; ++k) {
        const std::size_t n = pick_n(rng);
        std::vector<Value> values(n);
        for (Value& v : values) {
            v = pick_value(rng);
        }
        const Instance inst(std::move(values));
        const Index i = std::uniform_int_distribution<Index>(0, n - 1)(rng);
        verify_case(inst, i, sample_subset(rng, n, i), report);
        ++report.random_cases;
    }
    return report;
}

// ---------------------------------------------------------------------------
// Emitters

std::optional<Format> parse_format(std::string_view name) noexcept {
    if (name == "csv") {
        return Format::kCsv;
    }
    if (name == "json") {
        return Format::kJson;
    }
    return std::nullopt;
}

nlohmann::ordered_json to_json(const TrialRecord& r) {
    return nlohmann::ordered_json{
        {"trial", r.trial},
        {"generator", to_string(r.generator)},
        {"n", r.n},
        {"c", r.c.to_string()},
        {"strategy", to_string(r.strategy)},
        {"seed", r.seed},
        {"outcome", to_string(r.outcome)},
        {"rounds", r.rounds},
        {"simulated_parity_tests", r.simulated_parity_tests},
        {"ordinary_tests", r.ordinary_tests},
        {"correct", r.correct},
    };
}

nlohmann::ordered_json to_json(const TrialSummary& s) {
    nlohmann::ordered_json costs = nlohmann::ordered_json::array();
    for (const StrategyCost& c : s.strategy_costs) {
        costs.push_back({{"strategy", to_string(c.strategy)},
                         {"trials", c.trials},
                         {"mean_ordinary_tests", c.mean_ordinary_tests},
                         {"max_ordinary_tests", c.max_ordinary_tests}});
    }
    return nlohmann::ordered_json{
        {"trials", s.trials},
        {"failures", s.failures},
        {"failure_rate", s.failure_rate},
        {"max_ordinary_tests", s.max_ordinary_tests},
        {"mean_ordinary_tests", s.mean_ordinary_tests},
        {"depth_bound_ratio", s.depth_bound_ratio},
        {"strategy_costs", costs},
    };
}

nlohmann::ordered_json to_json(const BaselineSummary& b) {
    return nlohmann::ordered_json{
        {"trials", b.trials},
        {"min_tests", b.min_tests},
        {"max_tests", b.max_tests},
        {"all_correct", b.all_correct},
    };
}

nlohmann::ordered_json to_json(const VerifyReport& report) {
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    for (const CheckTally& c : report.checks) {
        checks.push_back({{"name", c.name}, {"passed", c.passed}, {"failed", c.failed}, {"failures", c.failures}});
    }
    return nlohmann::ordered_json{
        {"ok", report.ok()},
        {"exhaustive_cases", report.exhaustive_cases},
        {"random_cases", report.random_cases},
        {"checks", checks},
    };
}

nlohmann::ordered_json to_json(const FindmaxResult& result, const Params& params) {
    const RunTrace& t = result.trace;
    std::vector<std::size_t> pivots;
    pivots.reserve(t.pivots.size());
    for (Index p : t.pivots) {
        pivots.push_back(p + 1);
    }
    nlohmann::ordered_json out{
        {"n", params.n},
        {"c", params.c.to_string()},
        {"m", params.m},
        {"m0", params.m0},
        {"strategy", to_string(params.strategy)},
        {"seed", params.seed},
    };
    out["declared"] = result.index ? nlohmann::ordered_json(*result.index + 1) : nlohmann::ordered_json(nullptr);
    out["outcome"] = to_string(t.outcome);
    out["rounds"] = t.rounds;
    out["pivots"] = pivots;
    out["r_sequence"] = t.r_sequence;
    out["round_simulated_tests"] = t.round_simulated_tests;
    out["last_pivot_is_max"] = t.last_pivot_is_max;
    out["ordinary_tests"] = t.ledger.ordinary_tests();
    out["simulated_parity_tests"] = t.ledger.simulated_parity_tests();
    out["r_tests"] = t.ledger.r_tests();
    out["pi_tests"] = t.ledger.pi_tests();
    return out;
}

void emit(std::ostream& out, std::span<const TrialRecord> records, Format format) {
    if (format == Format::kJson) {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const TrialRecord& r : records) {
            arr.push_back(to_json(r));
        }
        out << arr.dump(2) << '\n';
        return;
    }
    out << kCsvHeader << '\n';
    for (const TrialRecord& r : records) {
        out << r.trial << ',' << to_string(r.generator) << ',' << r.n << ',' << r.c.to_string() << ','
            << to_string(r.strategy) << ',' << r.seed << ',' << to_string(r.outcome) << ',' << r.rounds << ','
            << r.simulated_parity_tests << ',' << r.ordinary_tests << ',' << (r.correct ? "true" : "false")
            << '\n';
    }
}

void emit(std::ostream& out, const TrialSummary& summary, Format format) {
    if (format == Format::kJson) {
        out << to_json(summary).dump(2) << '\n';
        return;
    }
    // Flat columns only; per-strategy costs are JSON-only.
    const nlohmann::ordered_json j = to_json(summary);
    out << "trials,failures,failure_rate,max_ordinary_tests,mean_ordinary_tests,depth_bound_ratio\n";
    out << j["trials"].dump() << ',' << j["failures"].dump() << ',' << j["failure_rate"].dump() << ','
        << j["max_ordinary_tests"].dump() << ',' << j["mean_ordinary_tests"].dump() << ','
        << j["depth_bound_ratio"].dump() << '\n';
}

}  // namespace tiemax::bench

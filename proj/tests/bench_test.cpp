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

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <doctest.h>

#include <tiemax/bench.hpp>

#include "test_util.hpp"

using namespace tiemax;
using namespace tiemax::bench;

namespace {

std::map<Value, std::size_t> histogram(const Instance& inst) {
    std::map<Value, std::size_t> h;
    for (Value v : inst.values()) {
        h[v]++;
    }
    return h;
}

std::string csv(std::span<const TrialRecord> records) {
    std::ostringstream out;
    emit(out, records, Format::kCsv);
    return out.str();
}

}  // namespace

TEST_CASE("generator and format names") {
    for (GeneratorKind kind : kAllGenerators) {
        CHECK(parse_generator(to_string(kind)) == kind);
    }
    CHECK_FALSE(parse_generator("sorted").has_value());
    CHECK(parse_format("csv") == Format::kCsv);
    CHECK(parse_format("json") == Format::kJson);
    CHECK_FALSE(parse_format("xml").has_value());
}

TEST_CASE("balanced multiplicities") {
    CHECK(balanced_multiplicities(16) == std::vector<std::size_t>{4, 4, 4, 4});
    CHECK(balanced_multiplicities(10) == std::vector<std::size_t>{4, 3, 3});
    CHECK(balanced_multiplicities(1) == std::vector<std::size_t>{1});
    for (std::size_t n = 1; n <= 5000; ++n) {
        const auto counts = balanced_multiplicities(n);
        std::size_t s = 0;
        while ((s + 1) * (s + 1) <= n) {
            ++s;
        }
        std::size_t total = 0;
        std::size_t adjusted = 0;
        for (std::size_t c : counts) {
            total += c;
            adjusted += c != s ? 1 : 0;
            CHECK(c >= s);
            CHECK(c < 2 * s);
        }
        CHECK(total == n);
        CHECK(adjusted <= 1);
        CHECK(counts.size() >= s);
        CHECK(counts.size() <= s + 2);
    }
}

TEST_CASE("generate_instance") {
    SUBCASE("balanced multiset n = 16") {
        const auto h = histogram(generate_instance({GeneratorKind::kBalancedMultiset, 16, 3}));
        CHECK(h.size() == 4);
        for (const auto& [v, count] : h) {
            CHECK(count == 4);
        }
    }
    SUBCASE("balanced multiset n = 10") {
        const auto h = histogram(generate_instance({GeneratorKind::kBalancedMultiset, 10, 3}));
        std::multiset<std::size_t> sizes;
        for (const auto& [v, count] : h) {
            sizes.insert(count);
        }
        CHECK(sizes == std::multiset<std::size_t>{3, 3, 4});
    }
    SUBCASE("all equal") {
        const Instance inst = generate_instance({GeneratorKind::kAllEqual, 5, 1});
        CHECK(histogram(inst).size() == 1);
        CHECK(inst.size() == 5);
    }
    SUBCASE("one max, rest tied") {
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            const Instance inst = generate_instance({GeneratorKind::kOneMaxRestTied, 9, seed});
            const auto h = histogram(inst);
            REQUIRE(h.size() == 2);
            CHECK(h.rbegin()->second == 1);
        }
        std::set<Index> positions;
        for (std::uint64_t seed = 0; seed < 200; ++seed) {
            const Instance inst = generate_instance({GeneratorKind::kOneMaxRestTied, 9, seed});
            for (Index i = 0; i < inst.size(); ++i) {
                if (inst[i] == inst.max_value()) {
                    positions.insert(i);
                }
            }
        }
        CHECK(positions.size() == 9);
    }
    SUBCASE("two level") {
        const auto h = histogram(generate_instance({GeneratorKind::kTwoLevel, 11, 1}));
        REQUIRE(h.size() == 2);
        CHECK(h.begin()->second == 5);
        CHECK(h.rbegin()->second == 6);
        CHECK(histogram(generate_instance({GeneratorKind::kTwoLevel, 1, 1})).size() == 1);
    }
    SUBCASE("distinct is a permutation of 1..n") {
        const Instance inst = generate_instance({GeneratorKind::kDistinct, 50, 8});
        std::vector<Value> v(inst.values().begin(), inst.values().end());
        std::sort(v.begin(), v.end());
        for (std::size_t k = 0; k < v.size(); ++k) {
            CHECK(v[k] == static_cast<Value>(k + 1));
        }
    }
    SUBCASE("deterministic in seed, length always n") {
        for (GeneratorKind kind : kAllGenerators) {
            for (std::size_t n : {1, 2, 7, 64}) {
                const Instance a = generate_instance({kind, n, 77});
                const Instance b = generate_instance({kind, n, 77});
                CHECK(a.size() == n);
                CHECK(std::equal(a.values().begin(), a.values().end(), b.values().begin()));
            }
        }
        CHECK_THROWS_AS(generate_instance({GeneratorKind::kDistinct, 0, 1}), std::invalid_argument);
    }
}

TEST_CASE("run_trials") {
    SUBCASE("single all-equal trial") {
        const auto records =
            run_trials({GeneratorKind::kAllEqual, 8, 5}, derive_params(8, Rational{}, SearchStrategy::kBinary, 0), 1);
        REQUIRE(records.size() == 1);
        CHECK(records[0].outcome == Outcome::kDeclaredCorrect);
        CHECK(records[0].rounds == 1);
        CHECK(records[0].correct);
    }
    SUBCASE("byte-identical on repeat and across thread counts") {
        const GeneratorSpec spec{GeneratorKind::kBalancedMultiset, 64, 12};
        const Params p = derive_params(64, Rational{}, SearchStrategy::kExponential, 0);
        const auto a = run_trials(spec, p, 40);
        const auto b = run_trials(spec, p, 40);
        const auto c = run_trials(spec, p, 40, {}, 3);
        CHECK(csv(a) == csv(b));
        CHECK(csv(a) == csv(c));
        std::set<std::uint64_t> seeds;
        for (const auto& r : a) {
            seeds.insert(r.seed);
        }
        CHECK(seeds.size() == a.size());
    }
    SUBCASE("argument checks") {
        const Params p = derive_params(8, Rational{}, SearchStrategy::kBinary, 0);
        CHECK_THROWS_AS(run_trials({GeneratorKind::kAllEqual, 8, 5}, p, 0), std::invalid_argument);
        CHECK_THROWS_AS(run_trials({GeneratorKind::kAllEqual, 9, 5}, p, 1), std::invalid_argument);
    }
    SUBCASE("records respect the ceiling") {
        for (GeneratorKind kind : kAllGenerators) {
            const Params p = derive_params(128, Rational{}, SearchStrategy::kBinary, 0);
            for (const TrialRecord& r : run_trials({kind, 128, 2}, p, 30)) {
                CHECK(r.ordinary_tests <= total_test_ceiling(p));
                CHECK(r.correct == (r.outcome == Outcome::kDeclaredCorrect));
            }
        }
    }
}

TEST_CASE("strategies on distinct inputs") {
    const std::size_t n = 200;
    std::size_t calls = 0;
    for (SearchStrategy s : {SearchStrategy::kBinary, SearchStrategy::kExponential}) {
        TrialHooks hooks;
        hooks.on_parity = [&](const ParityEvent& e) {
            ++calls;
            CHECK(e.mu == 0);
            if (s == SearchStrategy::kExponential) {
                CHECK(e.r_tests <= 3);
            } else {
                // binary search over |B|+1 candidates
                CHECK(e.r_tests <= ceil_log2(e.set.size() + 1));
                CHECK(e.r_tests + 1 >= ceil_log2(e.set.size() + 1));
            }
        };
        run_trials({GeneratorKind::kDistinct, n, 4}, derive_params(n, Rational{}, s, 0), 20, hooks);
    }
    CHECK(calls > 0);
}

TEST_CASE("summarize") {
    TrialRecord ok;
    ok.n = 256;
    ok.correct = true;
    ok.outcome = Outcome::kDeclaredCorrect;
    ok.ordinary_tests = 100;

    const TrialSummary one = summarize(std::vector<TrialRecord>{ok});
    CHECK(one.trials == 1);
    CHECK(one.failure_rate == 0);
    CHECK(one.depth_bound_ratio == doctest::Approx(100.0 / 512.0));

    std::vector<TrialRecord> many(10000, ok);
    many[17].correct = false;
    many[17].outcome = Outcome::kDeclaredWrong;
    many[4000].correct = false;
    many[4000].outcome = Outcome::kExhausted;
    many[4000].ordinary_tests = 1000;
    const TrialSummary s = summarize(many);
    CHECK(s.failures == 2);
    CHECK(s.failure_rate == 0.0002);
    CHECK(s.max_ordinary_tests == 1000);
    CHECK(s.mean_ordinary_tests == doctest::Approx(100.09));
    REQUIRE(s.strategy_costs.size() == 1);
    CHECK(s.strategy_costs[0].trials == 10000);

    CHECK_THROWS_AS(summarize(std::vector<TrialRecord>{}), std::invalid_argument);
    std::vector<TrialRecord> mixed{ok, ok};
    mixed[1].n = 64;
    CHECK_THROWS_AS(summarize(mixed), std::invalid_argument);

    TrialRecord single = ok;
    single.n = 1;
    CHECK(summarize(std::vector<TrialRecord>{single}).depth_bound_ratio == 0);
}

TEST_CASE("emit") {
    SUBCASE("empty CSV is the header") {
        CHECK(csv({}) == std::string(kCsvHeader) + "\n");
    }
    SUBCASE("one record has 11 fields") {
        TrialRecord r;
        r.trial = 3;
        r.generator = GeneratorKind::kTwoLevel;
        r.n = 64;
        r.c = Rational::of(1, 2);
        r.seed = 18446744073709551615ULL;
        r.outcome = Outcome::kDeclaredCorrect;
        r.rounds = 2;
        r.simulated_parity_tests = 9;
        r.ordinary_tests = 51;
        r.correct = true;
        const std::string text = csv(std::vector<TrialRecord>{r});
        const std::string row = text.substr(text.find('\n') + 1);
        CHECK(row == "3,two_level,64,1/2,binary,18446744073709551615,DECLARED_CORRECT,2,9,51,true\n");
        CHECK(std::count(row.begin(), row.end(), ',') == 10);

        const auto j = to_json(r);
        std::vector<std::string> keys;
        for (const auto& [k, v] : j.items()) {
            keys.push_back(k);
        }
        std::string header;
        for (const auto& k : keys) {
            header += (header.empty() ? "" : ",") + k;
        }
        CHECK(header == kCsvHeader);
        CHECK(j["correct"] == true);
    }
    SUBCASE("summary JSON has exactly the summary fields") {
        TrialRecord r;
        r.n = 16;
        const auto j = to_json(summarize(std::vector<TrialRecord>{r}));
        std::vector<std::string> keys;
        for (const auto& [k, v] : j.items()) {
            keys.push_back(k);
        }
        CHECK(keys == std::vector<std::string>{"trials", "failures", "failure_rate", "max_ordinary_tests",
                                               "mean_ordinary_tests", "depth_bound_ratio", "strategy_costs"});
        std::ostringstream out;
        emit(out, summarize(std::vector<TrialRecord>{r}), Format::kCsv);
        CHECK(out.str().rfind("trials,failures,failure_rate,", 0) == 0);
    }
}

TEST_CASE("baseline on generated instances") {
    for (GeneratorKind kind : kAllGenerators) {
        const BaselineSummary b = run_baseline({kind, 37, 1}, 25);
        CHECK(b.trials == 25);
        CHECK(b.min_tests == 36);
        CHECK(b.max_tests == 36);
        CHECK(b.all_correct);
    }
}

TEST_CASE("oracle verification suite") {
    SUBCASE("single case passes all four checks") {
        VerifyReport report = empty_report();
        verify_case(Instance{2, 2, 5}, 0, testing::set1({2, 3}), report);
        CHECK(report.ok());
        for (const CheckTally& c : report.checks) {
            CHECK(c.passed > 0);
        }
    }
    SUBCASE("exhaustive sweep to n = 5") {
        const VerifyReport report = verify_oracle_suite({5, -5, 5, 0, 1});
        CHECK(report.ok());
        // sum over n of 3^n * n * 2^(n-1)
        CHECK(report.exhaustive_cases == 3 + 36 + 324 + 2592 + 19440);
    }
    SUBCASE("random cases") {
        const VerifyReport report = verify_oracle_suite({10, -3, 3, 300, 5});
        CHECK(report.ok());
        CHECK(report.random_cases == 300);
        const auto j = to_json(report);
        CHECK(j["ok"] == true);
        CHECK(j["checks"].size() == 4);
    }
    SUBCASE("cap enforced") {
        CHECK_THROWS_AS(verify_oracle_suite({kOracleSizeCap + 1, 0, 2, 1, 1}), std::invalid_argument);
        CHECK_THROWS_AS(verify_oracle_suite({4, 3, 2, 1, 1}), std::invalid_argument);
    }
    SUBCASE("failures are reported with the offending tuple") {
        VerifyReport report = empty_report();
        CheckTally& law = report.checks[2];
        law.failed = 1;
        law.failures.push_back("inst=[1] i=1 B={}");
        CHECK_FALSE(report.ok());
    }
}

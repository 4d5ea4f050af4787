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

#include <tiemax/findmax.hpp>

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace tiemax {

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept {
    // splitmix64 finalizer applied twice so that (base, index) and
    // (base', index') with base ^ index == base' ^ index' still diverge.
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    return mix(mix(base) ^ (index * 0xd1342543de82ef95ULL + 1));
}

// ---------------------------------------------------------------------------
// Rational

namespace {

constexpr std::uint64_t kRationalLimit = 1'000'000;

std::uint64_t parse_digits(std::string_view text) {
    if (text.empty() || text.size() > 7) {
        throw std::invalid_argument("bad rational component '" + std::string(text) + "'");
    }
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw std::invalid_argument("bad rational component '" + std::string(text) + "'");
    }
    return value;
}

}  // namespace

Rational Rational::of(std::uint64_t num, std::uint64_t den) {
    if (num == 0 || den == 0) {
        throw std::invalid_argument("rational must be positive");
    }
    const std::uint64_t g = std::gcd(num, den);
    Rational r{num / g, den / g};
    if (r.num > kRationalLimit || r.den > kRationalLimit) {
        throw std::invalid_argument("rational " + r.to_string() + " has components above 10^6");
    }
    return r;
}

Rational Rational::parse(std::string_view text) {
    if (const auto slash = text.find('/'); slash != std::string_view::npos) {
        return of(parse_digits(text.substr(0, slash)), parse_digits(text.substr(slash + 1)));
    }
    if (const auto dot = text.find('.'); dot != std::string_view::npos) {
        const std::string_view whole = text.substr(0, dot);
        const std::string_view frac = text.substr(dot + 1);
        if (frac.size() > 6) {
            throw std::invalid_argument("at most 6 decimal places in '" + std::string(text) + "'");
        }
        std::uint64_t den = 1;
        for (std::size_t k = 0; k < frac.size(); ++k) {
            den *= 10;
        }
        const std::uint64_t w = whole.empty() ? 0 : parse_digits(whole);
        const std::uint64_t f = frac.empty() ? 0 : parse_digits(frac);
        return of(w * den + f, den);
    }
    return of(parse_digits(text), 1);
}

std::string Rational::to_string() const {
    return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

// ---------------------------------------------------------------------------
// Parameters

namespace {

// 2^(k*den) compared with n^exponent, exactly.
int compare_pow2_to_power(std::uint64_t k, std::uint64_t den, std::size_t n, std::uint64_t exponent) {
    const BigInt lhs = BigInt(1) << static_cast<unsigned>(k * den);
    const BigInt rhs = boost::multiprecision::pow(BigInt(n), static_cast<unsigned>(exponent));
    return lhs < rhs ? -1 : (lhs == rhs ? 0 : 1);
}

struct ScaledLog {
    std::size_t floor = 0;
    std::size_t ceil = 0;
};

// floor and ceil of (scale * c) * log2 n.
ScaledLog scaled_log2(std::size_t n, const Rational& c, std::uint64_t scale) {
    const std::uint64_t exponent = scale * c.num;
    if (std::has_single_bit(n)) {
        const std::uint64_t top = exponent * static_cast<std::uint64_t>(std::countr_zero(n));
        return {static_cast<std::size_t>(top / c.den), static_cast<std::size_t>((top + c.den - 1) / c.den)};
    }
    // log2 n is irrational here, so the product is never an integer. The
    // float estimate is trusted unless it lands near an integer, in which
    // case 2^(k*den) is compared with n^exponent exactly.
    const long double x = static_cast<long double>(exponent) * std::log2(static_cast<long double>(n)) /
                          static_cast<long double>(c.den);
    const long double nearest = std::round(x);
    if (std::fabs(x - nearest) > 1e-9L * std::max<long double>(1, x)) {
        return {static_cast<std::size_t>(std::floor(x)), static_cast<std::size_t>(std::ceil(x))};
    }
    const auto k = static_cast<std::uint64_t>(nearest);
    if (compare_pow2_to_power(k, c.den, n, exponent) < 0) {
        return {static_cast<std::size_t>(k), static_cast<std::size_t>(k + 1)};
    }
    return {static_cast<std::size_t>(k - 1), static_cast<std::size_t>(k)};
}

}  // namespace

Params derive_params(std::size_t n, Rational c, SearchStrategy strategy, std::uint64_t seed) {
    if (n == 0) {
        throw std::invalid_argument("n must be at least 1");
    }
    if (c.num == 0 || c.den == 0) {
        throw std::invalid_argument("c must be positive");
    }
    Params p;
    p.n = n;
    p.c = c;
    p.strategy = strategy;
    p.seed = seed;
    p.m = scaled_log2(n, c, 3).ceil;
    p.m0 = scaled_log2(n, c, 10).floor;
    if (n >= 2) {
        p.m = std::max<std::size_t>(p.m, 1);
        p.m0 = std::max<std::size_t>(p.m0, 1);
    }
    return p;
}

std::size_t round_budget(const Params& params) noexcept {
    return params.m + (params.n >= 2 ? ceil_log2(params.n - 1) : 0);
}

std::uint64_t total_test_ceiling(const Params& params) noexcept {
    const std::uint64_t per_call = params.strategy == SearchStrategy::kBinary
                                       ? ceil_log2(params.n) + 1
                                       : exponential_r_test_bound(params.n - 1) + 1;
    return static_cast<std::uint64_t>(params.m0) * round_budget(params) * per_call;
}

// ---------------------------------------------------------------------------
// Stages

IndexSet sample_subset(Rng& rng, std::size_t n, Index i) {
    std::vector<Index> members;
    members.reserve(n / 2 + 1);
    std::uint64_t bits = 0;
    for (Index j = 0; j < n; ++j) {
        if (j % 64 == 0) {
            bits = rng();
        }
        const bool take = (bits >> (j % 64)) & 1U;
        if (take && j != i) {
            members.push_back(j);
        }
    }
    return IndexSet::from_sorted(std::move(members));
}

StageResult lemma2_stage(const Instance& inst, Index i, const Params& params, Rng& rng, TestLedger& ledger) {
    check_index(inst, i);
    for (std::size_t k = 0; k < params.m; ++k) {
        IndexSet set = sample_subset(rng, inst.size(), i);
        const SimulatedSign s = simulate_parity(inst, i, set.members(), params.strategy, ledger, params.gadget);
        if (s.sign == SignOutcome::kNegative) {
            return StageResult{StageResult::Kind::kWitness, std::move(set)};
        }
    }
    return StageResult{};
}

Index lemma3_descend(const Instance& inst, Index i, const IndexSet& set, SearchStrategy strategy,
                     TestLedger& ledger, Rng& rng, DescentOrder order, GadgetOptions options) {
    check_gadget_args(inst, i, set);
    if (set.empty()) {
        throw std::logic_error("descent on an empty set");
    }
    std::vector<Index> work(set.begin(), set.end());
    if (order == DescentOrder::kShuffled) {
        std::shuffle(work.begin(), work.end(), rng);
    }
    std::span<const Index> current = work;
    while (current.size() > 1) {
        const std::size_t half = (current.size() + 1) / 2;
        const auto first = current.first(half);
        const SimulatedSign s = simulate_parity(inst, i, first, strategy, ledger, options);
        current = s.sign == SignOutcome::kNegative ? first : current.subspan(half);
    }
    const Index found = current.front();
    if (!(inst[found] > inst[i])) {
        throw std::logic_error("descent reached index " + std::to_string(found + 1) +
                               " which is not above the pivot; |B n J_i| was even");
    }
    return found;
}

// ---------------------------------------------------------------------------
// Outer loop

std::string_view to_string(Outcome o) noexcept {
    switch (o) {
        case Outcome::kDeclaredCorrect:
            return "DECLARED_CORRECT";
        case Outcome::kDeclaredWrong:
            return "DECLARED_WRONG";
        case Outcome::kExhausted:
            return "EXHAUSTED";
    }
    return "?";
}

namespace {

// Ground truth for the trace only.
std::size_t count_above(const Instance& inst, Index i) {
    return static_cast<std::size_t>(
        std::count_if(inst.values().begin(), inst.values().end(), [&](Value v) { return v > inst[i]; }));
}

}  // namespace

FindmaxResult findmax(const Instance& inst, const Params& params, Rng& rng, TestLedger ledger) {
    if (params.n != inst.size()) {
        throw std::invalid_argument("params derived for n = " + std::to_string(params.n) +
                                    " but instance has n = " + std::to_string(inst.size()));
    }
    FindmaxResult result;
    RunTrace& trace = result.trace;
    Index pivot = 0;
    trace.pivots.push_back(pivot);
    trace.r_sequence.push_back(count_above(inst, pivot));

    auto finish = [&](Outcome outcome) {
        trace.outcome = outcome;
        trace.last_pivot_is_max = inst.is_maximizer(pivot);
        if (ledger.ordinary_tests() > total_test_ceiling(params) && inst.size() >= 2) {
            throw std::logic_error("run charged " + std::to_string(ledger.ordinary_tests()) +
                                   " ordinary tests, above the ceiling " +
                                   std::to_string(total_test_ceiling(params)));
        }
        trace.ledger = std::move(ledger);
        return std::move(result);
    };

    if (inst.size() == 1) {
        result.index = pivot;
        return finish(Outcome::kDeclaredCorrect);
    }

    const std::size_t budget = round_budget(params);
    for (std::size_t round = 0; round < params.m0; ++round) {
        const std::uint64_t before = ledger.simulated_parity_tests();
        StageResult stage = lemma2_stage(inst, pivot, params, rng, ledger);
        ++trace.rounds;
        if (!stage.declared()) {
            pivot = lemma3_descend(inst, pivot, stage.witness, params.strategy, ledger, rng, params.descent,
                                   params.gadget);
        }
        const auto spent = static_cast<std::size_t>(ledger.simulated_parity_tests() - before);
        trace.round_simulated_tests.push_back(spent);
        if (spent > budget) {
            throw std::logic_error("round spent " + std::to_string(spent) + " simulated parity tests, budget " +
                                   std::to_string(budget));
        }
        if (stage.declared()) {
            result.index = pivot;
            return finish(inst.is_maximizer(pivot) ? Outcome::kDeclaredCorrect : Outcome::kDeclaredWrong);
        }
        const std::size_t r = count_above(inst, pivot);
        if (r >= trace.r_sequence.back()) {
            throw std::logic_error("r sequence did not decrease");
        }
        trace.pivots.push_back(pivot);
        trace.r_sequence.push_back(r);
    }
    return finish(Outcome::kExhausted);
}

FindmaxResult findmax(const Instance& inst, const Params& params) {
    Rng rng(params.seed);
    return findmax(inst, params, rng);
}

Index linear_elimination_baseline(const Instance& inst, TestLedger& ledger) {
    Index current = 0;
    for (Index j = 1; j < inst.size(); ++j) {
        ledger.charge_comparison();
        // sign of (x_current - x_j); NEGATIVE hands the lead to j
        if (inst[current] < inst[j]) {
            current = j;
        }
    }
    return current;
}

}  // namespace tiemax

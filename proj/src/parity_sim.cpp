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

#include <tiemax/parity_sim.hpp>

#include <algorithm>
#include <stdexcept>
#include <string>

namespace tiemax {

std::string_view to_string(SearchStrategy s) noexcept {
    return s == SearchStrategy::kBinary ? "binary" : "exponential";
}

std::optional<SearchStrategy> parse_strategy(std::string_view name) noexcept {
    if (name == "binary") {
        return SearchStrategy::kBinary;
    }
    if (name == "exponential") {
        return SearchStrategy::kExponential;
    }
    return std::nullopt;
}

std::size_t binary_r_test_bound(std::size_t b) noexcept { return ceil_log2(b + 1); }

std::size_t exponential_r_test_bound(std::size_t mu) noexcept { return 2 * ceil_log2(mu + 2) + 1; }

namespace {

// Both searches return the largest t in [0, b] with zero(t) true, given that
// zero is monotone (true on a prefix) and zero(0) holds without a test.

// Invariant: zero(lo) and !zero(hi), with hi = b+1 standing in for "past the end".
template <class Pred>
std::size_t largest_zero_binary(std::size_t lo, std::size_t hi, Pred&& zero) {
    while (hi - lo > 1) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (zero(mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return lo;
}

// Probe t = 1, 2, 4, ... (last probe clamped to b) until the predicate fails,
// then bisect the bracket.
template <class Pred>
std::size_t largest_zero_exponential(std::size_t b, Pred&& zero) {
    std::size_t lo = 0;
    std::size_t hi = b + 1;
    std::size_t t = 1;
    while (t <= b) {
        if (!zero(t)) {
            hi = t;
            break;
        }
        lo = t;
        if (t == b) {
            break;
        }
        t = std::min(2 * t, b);
    }
    return largest_zero_binary(lo, hi, zero);
}

template <class Pred>
std::size_t largest_zero(std::size_t b, SearchStrategy strategy, Pred&& zero) {
    if (strategy == SearchStrategy::kBinary) {
        return largest_zero_binary(0, b + 1, zero);
    }
    return largest_zero_exponential(b, zero);
}

struct Census {
    std::size_t ties = 0;
    std::size_t above = 0;
};

Census census(const Instance& inst, Index i, std::span<const Index> set) {
    Census c;
    const Value pivot = inst[i];
    for (Index a : set) {
        const Value x = inst[a];
        c.ties += static_cast<std::size_t>(x == pivot);
        c.above += static_cast<std::size_t>(x > pivot);
    }
    return c;
}

void check_span_args(const Instance& inst, Index i, std::span<const Index> set) {
    check_index(inst, i);
    for (Index a : set) {
        if (a >= inst.size()) {
            throw std::out_of_range("index set member outside 1.." + std::to_string(inst.size()));
        }
        if (a == i) {
            throw std::invalid_argument("pivot " + std::to_string(i + 1) + " is a member of B");
        }
    }
}

SimulatedSign run_gadget(const Instance& inst, Index i, std::span<const Index> set, SearchStrategy strategy,
                         TestLedger& ledger, GadgetOptions options) {
    const Census c = census(inst, i, set);
    const std::size_t b = set.size();

    SimulatedSign out;
    out.mu = largest_zero(b, strategy, [&](std::size_t t) {
        ledger.charge_r_test();
        ++out.r_tests;
        return c.ties >= t;
    });

    if (options.pi_short_circuit && out.mu == b) {
        out.sign = SignOutcome::kPositive;
    } else {
        ledger.charge_pi_test();
        out.pi_tests = 1;
        out.sign = (c.above % 2 == 0) ? SignOutcome::kPositive : SignOutcome::kNegative;
    }

    if (strategy == SearchStrategy::kBinary && out.total_tests() > binary_r_test_bound(b) + 1) {
        throw std::logic_error("parity gadget charged " + std::to_string(out.total_tests()) +
                               " tests on |B| = " + std::to_string(b));
    }
    ledger.record_parity(ParityEvent{&inst, i, set, out.sign, out.mu, out.r_tests, out.pi_tests});
    return out;
}

}  // namespace

bool r_test(const Instance& inst, Index i, const IndexSet& set, std::size_t t, TestLedger& ledger) {
    check_gadget_args(inst, i, set);
    if (t > set.size()) {
        throw std::out_of_range("t = " + std::to_string(t) + " outside 0.." + std::to_string(set.size()));
    }
    if (t == 0) {
        return true;
    }
    ledger.charge_r_test();
    return census(inst, i, set.members()).ties >= t;
}

std::size_t find_mu(const Instance& inst, Index i, const IndexSet& set, SearchStrategy strategy,
                    TestLedger& ledger) {
    check_gadget_args(inst, i, set);
    return largest_zero(set.size(), strategy, [&](std::size_t t) { return r_test(inst, i, set, t, ledger); });
}

SimulatedSign simulate_parity(const Instance& inst, Index i, const IndexSet& set, SearchStrategy strategy,
                              TestLedger& ledger, GadgetOptions options) {
    check_gadget_args(inst, i, set);
    return run_gadget(inst, i, set.members(), strategy, ledger, options);
}

SimulatedSign simulate_parity(const Instance& inst, Index i, std::span<const Index> set, SearchStrategy strategy,
                              TestLedger& ledger, GadgetOptions options) {
    check_span_args(inst, i, set);
    return run_gadget(inst, i, set, strategy, ledger, options);
}

}  // namespace tiemax

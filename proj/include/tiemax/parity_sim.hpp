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
#include <optional>
#include <span>
#include <string_view>

#include <tiemax/core.hpp>

// Tie-tolerant parity test.
//
// A parity test asks for the sign of prod_{a in B}(x_i - x_a). When some a in B
// ties with the pivot the product is zero and says nothing about how many
// members of B sit above x_i. The gadget here recovers that parity with unit
// cost sign tests only:
//
//   R(t) = sum over D in B, |D| = |B|-t+1, of prod_{a in D}(x_i - x_a)^2
//
// vanishes exactly when at least t members of B tie with the pivot, so the
// tie count mu is the largest t with R(t) = 0 (R(0) = 0 by definition). One
// more test on the sum of unsquared products over subsets of size |B|-mu then
// has the sign of the product over the untied members alone.
//
// At runtime each R-test and the final Pi-test are answered by comparisons
// (tie counting and the parity of |B n J_i|) and charged one unit each to the
// ledger. core.hpp's literal_R / literal_Pi evaluate the same polynomials
// exactly and are what the test suites check these answers against.
namespace tiemax {

enum class SearchStrategy { kBinary, kExponential };

std::string_view to_string(SearchStrategy s) noexcept;
std::optional<SearchStrategy> parse_strategy(std::string_view name) noexcept;

struct SimulatedSign {
    SignOutcome sign = SignOutcome::kPositive;  // never kZero
    std::size_t mu = 0;
    std::size_t r_tests = 0;
    std::size_t pi_tests = 0;

    [[nodiscard]] std::size_t total_tests() const noexcept { return r_tests + pi_tests; }
};

struct GadgetOptions {
    // Skip the Pi-test when every member of B ties with the pivot (the sign is
    // then POSITIVE for free). Off by default so every call is charged alike.
    bool pi_short_circuit = false;
};

// Worst-case R-test count of find_mu for |B| = b under BINARY: ceil(log2(b+1)).
std::size_t binary_r_test_bound(std::size_t b) noexcept;
// Worst-case R-test count of find_mu under EXPONENTIAL: 2*ceil(log2(mu+2))+1.
std::size_t exponential_r_test_bound(std::size_t mu) noexcept;

// True iff R_{i,B}(t) = 0. Charges one ordinary test for t >= 1, none for t = 0.
bool r_test(const Instance& inst, Index i, const IndexSet& set, std::size_t t, TestLedger& ledger);

// Tie count of B located by R-tests alone.
std::size_t find_mu(const Instance& inst, Index i, const IndexSet& set, SearchStrategy strategy,
                    TestLedger& ledger);

// One simulated parity test. Charges the R-tests of find_mu plus one Pi-test
// and records one simulated parity test. Throws std::logic_error if a BINARY
// call ever exceeds ceil(log2(|B|+1)) + 1 tests.
SimulatedSign simulate_parity(const Instance& inst, Index i, const IndexSet& set, SearchStrategy strategy,
                              TestLedger& ledger, GadgetOptions options = {});

// Same gadget over an unordered span of distinct indices. Range and pivot
// membership are checked; distinctness is the caller's responsibility.
SimulatedSign simulate_parity(const Instance& inst, Index i, std::span<const Index> set, SearchStrategy strategy,
                              TestLedger& ledger, GadgetOptions options = {});

}  // namespace tiemax

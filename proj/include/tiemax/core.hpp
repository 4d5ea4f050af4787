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
#include <initializer_list>
#include <span>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace tiemax {

// Input values. The algorithmic path only ever compares them; the literal
// oracle lifts them into BigInt before multiplying.
using Value = std::int64_t;
using BigInt = boost::multiprecision::cpp_int;

// Zero-based position in an Instance. Everything serialized is 1-based.
using Index = std::size_t;

// Largest |B| the literal oracle accepts (2^16 subsets per full sweep).
inline constexpr std::size_t kOracleSizeCap = 16;

class Instance {
  public:
    explicit Instance(std::vector<Value> values);
    Instance(std::initializer_list<Value> values);

    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] Value operator[](Index i) const noexcept { return values_[i]; }
    [[nodiscard]] Value at(Index i) const;
    [[nodiscard]] std::span<const Value> values() const noexcept { return values_; }

    [[nodiscard]] Value max_value() const noexcept;
    [[nodiscard]] bool is_maximizer(Index i) const;

  private:
    std::vector<Value> values_;
};

// Sorted, duplicate-free set of indices. Range against a particular Instance
// is checked where the set is used (see check_gadget_args).
class IndexSet {
  public:
    IndexSet() = default;
    explicit IndexSet(std::vector<Index> members);
    IndexSet(std::initializer_list<Index> members);

    // Members must already be strictly increasing; checked.
    static IndexSet from_sorted(std::vector<Index> members);

    [[nodiscard]] std::size_t size() const noexcept { return members_.size(); }
    [[nodiscard]] bool empty() const noexcept { return members_.empty(); }
    [[nodiscard]] bool contains(Index i) const noexcept;
    [[nodiscard]] std::span<const Index> members() const noexcept { return members_; }
    [[nodiscard]] auto begin() const noexcept { return members_.begin(); }
    [[nodiscard]] auto end() const noexcept { return members_.end(); }

    friend bool operator==(const IndexSet&, const IndexSet&) = default;

  private:
    std::vector<Index> members_;
};

enum class SignOutcome { kNegative, kZero, kPositive };

std::string_view to_string(SignOutcome s) noexcept;

// One simulated parity test as seen by a ledger observer. `set` is only
// valid for the duration of the callback.
struct ParityEvent {
    const Instance* instance = nullptr;
    Index pivot = 0;
    std::span<const Index> set;
    SignOutcome sign = SignOutcome::kPositive;
    std::size_t mu = 0;
    std::size_t r_tests = 0;
    std::size_t pi_tests = 0;
};

// Decision-tree cost accounting. Every unit-cost sign test an algorithm makes
// is charged here; counters only ever grow.
class TestLedger {
  public:
    using Observer = std::function<void(const ParityEvent&)>;

    void charge_r_test() noexcept {
        ++r_tests_;
        ++ordinary_tests_;
    }
    void charge_pi_test() noexcept {
        ++pi_tests_;
        ++ordinary_tests_;
    }
    void charge_comparison() noexcept {
        ++comparisons_;
        ++ordinary_tests_;
    }
    void record_parity(const ParityEvent& event);

    void set_observer(Observer observer) { observer_ = std::move(observer); }

    [[nodiscard]] std::uint64_t ordinary_tests() const noexcept { return ordinary_tests_; }
    [[nodiscard]] std::uint64_t simulated_parity_tests() const noexcept { return simulated_parity_tests_; }
    [[nodiscard]] std::uint64_t r_tests() const noexcept { return r_tests_; }
    [[nodiscard]] std::uint64_t pi_tests() const noexcept { return pi_tests_; }
    [[nodiscard]] std::uint64_t comparisons() const noexcept { return comparisons_; }

  private:
    std::uint64_t ordinary_tests_ = 0;
    std::uint64_t simulated_parity_tests_ = 0;
    std::uint64_t r_tests_ = 0;
    std::uint64_t pi_tests_ = 0;
    std::uint64_t comparisons_ = 0;
    Observer observer_;
};

// Throws std::out_of_range unless i < inst.size().
void check_index(const Instance& inst, Index i);

// Validates a gadget argument: pivot in range, every member of B in range,
// pivot not in B. Throws std::out_of_range / std::invalid_argument.
void check_gadget_args(const Instance& inst, Index i, const IndexSet& set);

// J_i = { j : x_j > x_i }.
IndexSet above_set(const Instance& inst, Index i);

// mu_B = |{ a in B : x_a == x_i }|.
std::size_t tie_count(const Instance& inst, Index i, const IndexSet& set);

// Literal polynomial oracle. Exact, exponential in |B|; verification only.
BigInt literal_P(const Instance& inst, Index i, const IndexSet& set);
BigInt literal_R(const Instance& inst, Index i, const IndexSet& set, std::size_t t);
BigInt literal_Pi(const Instance& inst, Index i, const IndexSet& set, std::size_t mu);

SignOutcome sign_of(const BigInt& v) noexcept;

// ceil(log2(x)) for x >= 1; 0 for x <= 1.
std::size_t ceil_log2(std::uint64_t x) noexcept;

}  // namespace tiemax

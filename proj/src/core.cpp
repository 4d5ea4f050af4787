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

#include <tiemax/core.hpp>

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>

namespace tiemax {

Instance::Instance(std::vector<Value> values) : values_(std::move(values)) {
    if (values_.empty()) {
        throw std::invalid_argument("instance must contain at least one value");
    }
}

Instance::Instance(std::initializer_list<Value> values) : Instance(std::vector<Value>(values)) {}

Value Instance::at(Index i) const {
    check_index(*this, i);
    return values_[i];
}

Value Instance::max_value() const noexcept { return *std::max_element(values_.begin(), values_.end()); }

bool Instance::is_maximizer(Index i) const { return at(i) == max_value(); }

IndexSet::IndexSet(std::vector<Index> members) : members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    if (std::adjacent_find(members_.begin(), members_.end()) != members_.end()) {
        throw std::invalid_argument("index set contains a duplicate");
    }
}

IndexSet::IndexSet(std::initializer_list<Index> members) : IndexSet(std::vector<Index>(members)) {}

IndexSet IndexSet::from_sorted(std::vector<Index> members) {
    for (std::size_t k = 1; k < members.size(); ++k) {
        if (members[k - 1] >= members[k]) {
            throw std::invalid_argument("index set is not strictly increasing");
        }
    }
    IndexSet out;
    out.members_ = std::move(members);
    return out;
}

bool IndexSet::contains(Index i) const noexcept { return std::binary_search(members_.begin(), members_.end(), i); }

std::string_view to_string(SignOutcome s) noexcept {
    switch (s) {
        case SignOutcome::kNegative:
            return "NEGATIVE";
        case SignOutcome::kZero:
            return "ZERO";
        case SignOutcome::kPositive:
            return "POSITIVE";
    }
    return "?";
}

void TestLedger::record_parity(const ParityEvent& event) {
    ++simulated_parity_tests_;
    if (observer_) {
        observer_(event);
    }
}

void check_index(const Instance& inst, Index i) {
    if (i >= inst.size()) {
        throw std::out_of_range("index " + std::to_string(i + 1) + " outside 1.." + std::to_string(inst.size()));
    }
}

void check_gadget_args(const Instance& inst, Index i, const IndexSet& set) {
    check_index(inst, i);
    if (!set.empty() && set.members().back() >= inst.size()) {
        throw std::out_of_range("index set member outside 1.." + std::to_string(inst.size()));
    }
    if (set.contains(i)) {
        throw std::invalid_argument("pivot " + std::to_string(i + 1) + " is a member of B");
    }
}

IndexSet above_set(const Instance& inst, Index i) {
    check_index(inst, i);
    std::vector<Index> out;
    for (Index j = 0; j < inst.size(); ++j) {
        if (inst[j] > inst[i]) {
            out.push_back(j);
        }
    }
    return IndexSet::from_sorted(std::move(out));
}

std::size_t tie_count(const Instance& inst, Index i, const IndexSet& set) {
    check_gadget_args(inst, i, set);
    return static_cast<std::size_t>(
        std::count_if(set.begin(), set.end(), [&](Index a) { return inst[a] == inst[i]; }));
}

namespace {

void check_oracle_size(const IndexSet& set) {
    if (set.size() > kOracleSizeCap) {
        throw std::invalid_argument("literal oracle called with |B| = " + std::to_string(set.size()) +
                                    " above cap " + std::to_string(kOracleSizeCap));
    }
}

// prod_{a in D}(x_i - x_a), D given as a bitmask over the members of B.
BigInt product_over_mask(const Instance& inst, Index i, std::span<const Index> members, std::uint32_t mask) {
    BigInt product = 1;
    for (std::size_t k = 0; k < members.size(); ++k) {
        if ((mask >> k) & 1U) {
            product *= BigInt(inst[i]) - BigInt(inst[members[k]]);
        }
    }
    return product;
}

template <class F>
void for_each_mask_of_size(std::size_t b, std::size_t size, F&& f) {
    const std::uint32_t limit = std::uint32_t{1} << b;
    for (std::uint32_t mask = 0; mask < limit; ++mask) {
        if (static_cast<std::size_t>(std::popcount(mask)) == size) {
            f(mask);
        }
    }
}

}  // namespace

BigInt literal_P(const Instance& inst, Index i, const IndexSet& set) {
    check_gadget_args(inst, i, set);
    BigInt product = 1;
    for (Index a : set) {
        product *= BigInt(inst[i]) - BigInt(inst[a]);
    }
    return product;
}

BigInt literal_R(const Instance& inst, Index i, const IndexSet& set, std::size_t t) {
    check_gadget_args(inst, i, set);
    const std::size_t b = set.size();
    if (t > b) {
        throw std::out_of_range("t = " + std::to_string(t) + " outside 0.." + std::to_string(b));
    }
    check_oracle_size(set);
    if (t == 0) {
        return 0;
    }
    BigInt sum = 0;
    for_each_mask_of_size(b, b - t + 1, [&](std::uint32_t mask) {
        const BigInt p = product_over_mask(inst, i, set.members(), mask);
        sum += p * p;
    });
    return sum;
}

BigInt literal_Pi(const Instance& inst, Index i, const IndexSet& set, std::size_t mu) {
    check_gadget_args(inst, i, set);
    check_oracle_size(set);
    if (mu != tie_count(inst, i, set)) {
        throw std::invalid_argument("mu = " + std::to_string(mu) + " does not match the tie count of B");
    }
    const std::size_t b = set.size();
    BigInt sum = 0;
    for_each_mask_of_size(b, b - mu,
                          [&](std::uint32_t mask) { sum += product_over_mask(inst, i, set.members(), mask); });
    return sum;
}

SignOutcome sign_of(const BigInt& v) noexcept {
    if (v < 0) {
        return SignOutcome::kNegative;
    }
    return v == 0 ? SignOutcome::kZero : SignOutcome::kPositive;
}

std::size_t ceil_log2(std::uint64_t x) noexcept {
    if (x <= 1) {
        return 0;
    }
    return static_cast<std::size_t>(std::bit_width(x - 1));
}

}  // namespace tiemax

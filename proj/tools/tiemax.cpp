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

// tiemax: run, benchmark and verify the tie-tolerant randomized max finder.
//
//   tiemax run    --n 256 --c 1 --seed 7 --generator balanced_multiset --strategy binary
//   tiemax bench  --n 256 --c 1 --trials 1000 --seed 7 --generator two_level --format csv
//   tiemax verify --max-n 8 --cases 2000 --seed 7

#include <cstdint>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <tiemax/bench.hpp>

namespace {

using namespace tiemax;
using namespace tiemax::bench;

// Sub-streams of --seed for the single-run command.
constexpr std::uint64_t kRunInstanceStream = 0;
constexpr std::uint64_t kRunAlgorithmStream = 1;

struct CommonOptions {
    std::size_t n = 0;
    std::string c = "1";
    std::uint64_t seed = 0;
    std::string generator;
    std::string strategy = "binary";
    std::string descent = "shuffled";
    bool pi_short_circuit = false;

    [[nodiscard]] GeneratorKind generator_kind() const { return *parse_generator(generator); }
    [[nodiscard]] SearchStrategy search_strategy() const { return *parse_strategy(strategy); }
};

std::vector<std::string> generator_names() {
    std::vector<std::string> names;
    for (GeneratorKind kind : kAllGenerators) {
        names.emplace_back(to_string(kind));
    }
    return names;
}

void add_common(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--n", opt.n, "Input size")->required()->check(CLI::PositiveNumber);
    cmd->add_option("--c", opt.c, "Failure exponent: integer, decimal or p/q")->capture_default_str();
    cmd->add_option("--seed", opt.seed, "Base seed")->required();
    cmd->add_option("--generator", opt.generator, "Input generator")
        ->required()
        ->check(CLI::IsMember(generator_names()));
    cmd->add_option("--strategy", opt.strategy, "Tie-count search strategy")
        ->capture_default_str()
        ->check(CLI::IsMember({"binary", "exponential"}));
    cmd->add_option("--descent", opt.descent, "Bisection order")
        ->capture_default_str()
        ->check(CLI::IsMember({"shuffled", "index"}));
    cmd->add_flag("--pi-short-circuit", opt.pi_short_circuit, "Skip the Pi-test when every member of B is tied");
}

Params make_params(const CommonOptions& opt, std::uint64_t seed) {
    Params p = derive_params(opt.n, Rational::parse(opt.c), opt.search_strategy(), seed);
    p.descent = opt.descent == "index" ? DescentOrder::kIndex : DescentOrder::kShuffled;
    p.gadget.pi_short_circuit = opt.pi_short_circuit;
    return p;
}

int do_run(const CommonOptions& opt) {
    const std::uint64_t algorithm_seed = derive_seed(opt.seed, kRunAlgorithmStream);
    const Instance inst = generate_instance({opt.generator_kind(), opt.n, derive_seed(opt.seed, kRunInstanceStream)});
    const Params params = make_params(opt, algorithm_seed);
    const FindmaxResult result = findmax(inst, params);

    nlohmann::ordered_json out{{"generator", opt.generator}};
    out.update(to_json(result, params));
    out["seed"] = opt.seed;
    out["instance"] = inst.values();
    std::cout << out.dump(2) << '\n';
    return 0;
}

int do_bench(const CommonOptions& opt, std::size_t trials, Format format, bool baseline, unsigned threads) {
    const Params params = make_params(opt, opt.seed);
    const GeneratorSpec spec{opt.generator_kind(), opt.n, opt.seed};
    const auto records = run_trials(spec, params, trials, {}, threads);
    const TrialSummary summary = summarize(records);

    nlohmann::ordered_json extra{{"summary", to_json(summary)}};
    if (baseline) {
        extra["baseline"] = to_json(run_baseline(spec, trials));
    }

    if (format == Format::kCsv) {
        emit(std::cout, records, Format::kCsv);
        std::cerr << extra.dump(2) << '\n';
        return 0;
    }
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (const TrialRecord& r : records) {
        out.push_back(to_json(r));
    }
    nlohmann::ordered_json doc{{"records", out}};
    doc.update(extra);
    std::cout << doc.dump(2) << '\n';
    return 0;
}

int do_verify(const VerifyConfig& config) {
    const VerifyReport report = verify_oracle_suite(config);
    std::cout << to_json(report).dump(2) << '\n';
    return report.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tie-tolerant randomized maximum finding with counted sign tests"};
    app.require_subcommand(1);

    CommonOptions run_opt;
    auto* run = app.add_subcommand("run", "One FINDMAX run; prints its trace as JSON");
    add_common(run, run_opt);

    CommonOptions bench_opt;
    std::size_t trials = 0;
    std::string format = "csv";
    bool baseline = false;
    unsigned threads = 1;
    auto* bench = app.add_subcommand("bench", "Seeded Monte Carlo trials; records and summary");
    add_common(bench, bench_opt);
    bench->add_option("--trials", trials, "Number of trials")->required()->check(CLI::PositiveNumber);
    bench->add_option("--format", format, "csv or json")->capture_default_str()->check(CLI::IsMember({"csv", "json"}));
    bench->add_flag("--baseline", baseline, "Also run the n-1 elimination baseline");
    bench->add_option("--threads", threads, "Worker threads (output order is fixed)")->check(CLI::PositiveNumber);

    VerifyConfig verify_config;
    auto* verify = app.add_subcommand("verify", "Check the gadget against the literal polynomial oracle");
    verify->add_option("--max-n", verify_config.max_n, "Largest random instance")
        ->check(CLI::Range(std::size_t{1}, kOracleSizeCap));
    verify->add_option("--cases", verify_config.random_cases, "Random cases after the exhaustive sweep");
    verify->add_option("--seed", verify_config.seed, "Seed for the random cases");
    verify->add_option("--lo", verify_config.value_lo, "Smallest random value");
    verify->add_option("--hi", verify_config.value_hi, "Largest random value");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            return do_run(run_opt);
        }
        if (*bench) {
            return do_bench(bench_opt, trials, *parse_format(format), baseline, threads);
        }
        return do_verify(verify_config);
    } catch (const std::exception& e) {
        std::cerr << "tiemax: " << e.what() << '\n';
        return 2;
    }
}

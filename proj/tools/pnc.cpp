#include "pnc/counting.hpp"
#include "pnc/errors.hpp"
#include "pnc/explorer.hpp"
#include "pnc/net_io.hpp"
#include "pnc/reduction.hpp"
#include "pnc/verifier.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <map>

namespace {

namespace fs = std::filesystem;
using namespace pnc;

enum Exit : int { Ok = 0, Fails = 1, Inconclusive = 2, Usage = 64, DataError = 65 };

struct Config {
    std::string input;
    Strategy strategy = Strategy::Compact;
    ReductionLimits reduction;
    ExploreLimits explore;
    std::optional<std::uint64_t> max_tokens;
    std::string emit_trace;
    bool emit_polynomial = false;
    std::string dump;
    std::string trace_in;
    unsigned jobs = 1;
    std::optional<std::uint64_t> seed;
};

void add_reduction_flags(CLI::App& cmd, Config& cfg)
{
    const std::map<std::string, Strategy> strategies{{"compact", Strategy::Compact}, {"clean", Strategy::Clean}};
    cmd.add_option("--strategy", cfg.strategy, "compact or clean")
        ->transform(CLI::CheckedTransformer(strategies, CLI::ignore_case));
    cmd.add_option("--max-seq-len", cfg.reduction.max_seq_len, "longest replacing sequence for rule T")
        ->check(CLI::Range(0, 8));
    cmd.add_option("--coeff-bound", cfg.reduction.coeff_bound, "largest coefficient for rule R")
        ->check(CLI::Range(1, 64));
    cmd.add_option("--ilp-place-limit", cfg.reduction.size_limit, "general rule R only up to this many places")
        ->check(CLI::Range(0, 100000));
    cmd.add_option("--max-loop", cfg.reduction.max_loop, "longest cycle for loop agglomeration")
        ->check(CLI::Range(2, 64));
    cmd.add_option("--seed", cfg.seed, "shuffle rule and candidate order");
}

void add_explore_flags(CLI::App& cmd, Config& cfg)
{
    cmd.add_option("--max-markings", cfg.explore.max_markings, "exploration cap")->check(CLI::Range(1ul, 1ul << 40));
    cmd.add_option("--max-tokens", cfg.max_tokens, "give up when a place exceeds this many tokens");
}

ReductionLimits reduction_limits(const Config& cfg)
{
    ReductionLimits limits = cfg.reduction;
    limits.seed = cfg.seed;
    return limits;
}

ExploreLimits explore_limits(const Config& cfg)
{
    ExploreLimits limits = cfg.explore;
    limits.max_token_per_place = cfg.max_tokens;
    return limits;
}

fs::path sibling(const fs::path& input, const std::string& suffix)
{
    fs::path out = input;
    out.replace_extension(suffix);
    return out;
}

void print_ratio(const Net& before, const Net& after)
{
    std::cout << "places: " << before.num_places() << " -> " << after.num_places() << "\n"
              << "transitions: " << before.num_transitions() << " -> " << after.num_transitions() << "\n";
}

int cmd_reduce(const Config& cfg)
{
    const Net net = read_net_file(cfg.input);
    const ReductionTrace trace = reduce(net, cfg.strategy, reduction_limits(cfg));
    const fs::path reduced = sibling(cfg.input, ".reduced.net");
    const fs::path trace_path = cfg.emit_trace.empty() ? sibling(cfg.input, ".trace") : fs::path(cfg.emit_trace);
    write_text_file(reduced, serialize_net(trace.residual));
    write_text_file(trace_path, serialize_trace(trace));
    print_ratio(trace.initial, trace.residual);
    std::cout << "steps: " << trace.steps.size() << "\n";
    return Ok;
}

void print_report(const CountReport& report, bool emit_polynomial)
{
    std::cout << "residual markings: " << report.residual_markings << "\n";
    if (report.fire_once_steps > 0)
        std::cout << "note: " << report.fire_once_steps << " fire-once step(s) contribute +"
                  << to_string(report.fire_once_increment) << "\n";
    if (report.used_fallback)
        std::cout << "note: some steps are counted by enumeration\n";
    if (report.parametric_polynomial)
        std::cout << "polynomial: " << report.parametric_polynomial->to_string() << "\n";
    if (emit_polynomial) {
        std::cout << "term: " << report.term << "\n";
        if (report.polynomial)
            std::cout << "residual polynomial: " << report.polynomial->to_string() << "\n";
    }
}

int cmd_count(const Config& cfg)
{
    const Net net = read_net_file(cfg.input);
    CountOptions options;
    options.strategy = cfg.strategy;
    options.reduction = reduction_limits(cfg);
    options.explore = explore_limits(cfg);
    options.jobs = cfg.jobs;
    const ReductionTrace trace = reduce(net, options.strategy, options.reduction);
    if (!cfg.emit_trace.empty())
        write_text_file(cfg.emit_trace, serialize_trace(trace));
    try {
        const CountResult result = count_from_trace(trace, options);
        print_ratio(trace.initial, trace.residual);
        std::cout << "count: " << to_string(result.total) << "\n"
                  << "scientific: " << to_scientific(result.total) << "\n";
        print_report(result.report, cfg.emit_polynomial);
        return Ok;
    } catch (const CountLimitError& e) {
        print_ratio(trace.initial, trace.residual);
        std::cout << "count: unknown\n";
        print_report(e.report(), cfg.emit_polynomial);
        std::cerr << "inconclusive: " << e.what() << "\n";
        return Inconclusive;
    }
}

int cmd_explore(const Config& cfg)
{
    const Net net = read_net_file(cfg.input);
    const ReachabilitySet r = reachability_set(net, explore_limits(cfg));
    if (!cfg.dump.empty()) {
        if (cfg.dump == "-")
            std::cout << dump_markings(net, r);
        else
            write_text_file(cfg.dump, dump_markings(net, r));
    }
    if (!r.complete) {
        std::cerr << "inconclusive: exploration stopped after " << r.size() << " markings\n";
        return Inconclusive;
    }
    std::cout << "markings: " << r.size() << "\n";
    return Ok;
}

int cmd_verify(const Config& cfg)
{
    const Net net = read_net_file(cfg.input);
    ReductionTrace trace;
    if (cfg.trace_in.empty()) {
        trace = reduce(net, cfg.strategy, reduction_limits(cfg));
    } else {
        const std::string text = read_text_file(cfg.trace_in);
        try {
            trace = parse_trace(text, net);
        } catch (const ParseError&) {
            throw;
        } catch (const Error& e) {
            std::cout << "FAIL: " << e.what() << "\n";
            return Fails;
        }
    }
    const TraceCheck check = check_trace(trace, explore_limits(cfg));
    if (!check.ok) {
        std::cout << "FAIL: " << check.message << "\n";
        return Fails;
    }
    std::cout << "OK: " << trace.steps.size() << " steps verified\n";
    return Ok;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Reduce place/transition nets and count their reachable markings"};
    app.require_subcommand(1);
    Config cfg;

    CLI::App* reduce_cmd = app.add_subcommand("reduce", "apply structural reductions");
    CLI::App* count_cmd = app.add_subcommand("count", "count reachable markings");
    CLI::App* explore_cmd = app.add_subcommand("explore", "enumerate reachable markings");
    CLI::App* verify_cmd = app.add_subcommand("verify", "check a reduction trace against the state spaces");

    for (CLI::App* cmd : {reduce_cmd, count_cmd, explore_cmd, verify_cmd})
        cmd->add_option("model", cfg.input, "net file")->required();
    for (CLI::App* cmd : {reduce_cmd, count_cmd, verify_cmd})
        add_reduction_flags(*cmd, cfg);
    for (CLI::App* cmd : {count_cmd, explore_cmd, verify_cmd})
        add_explore_flags(*cmd, cfg);
    for (CLI::App* cmd : {reduce_cmd, count_cmd})
        cmd->add_option("--emit-trace", cfg.emit_trace, "write the reduction trace here");
    count_cmd->add_flag("--emit-polynomial", cfg.emit_polynomial, "also print the counting term");
    count_cmd->add_option("--jobs", cfg.jobs, "worker threads")->check(CLI::Range(1, 256));
    explore_cmd->add_option("--dump", cfg.dump, "write markings here ('-' for stdout)");
    verify_cmd->add_option("--trace", cfg.trace_in, "check this trace instead of reducing");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return Usage;
    }

    try {
        if (*reduce_cmd)
            return cmd_reduce(cfg);
        if (*count_cmd)
            return cmd_count(cfg);
        if (*explore_cmd)
            return cmd_explore(cfg);
        return cmd_verify(cfg);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return DataError;
    } catch (const InconclusiveError& e) {
        std::cerr << e.what() << "\n";
        return Inconclusive;
    } catch (const ExplorationLimitError& e) {
        std::cerr << "inconclusive: " << e.what() << "\n";
        return Inconclusive;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return DataError;
    }
}

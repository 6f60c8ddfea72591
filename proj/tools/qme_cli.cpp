// qme_cli: run one experiment from a JSON config and write its CSV/JSON outputs

#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qme/errors.hpp"
#include "qme/experiments.hpp"

namespace ex = qme::experiments;

namespace {

struct Args {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    unsigned threads = 0;
    bool check = false;
};

nlohmann::json read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument("config " + path + ": " + e.what());
    }
}

int execute(ex::Experiment e, const Args& args) {
    ex::RunOptions opts;
    opts.seed_override = args.seed;
    opts.threads = args.threads;
    const ex::RunResult r = ex::run(e, read_config(args.config), opts);

    for (const auto& note : r.notes) std::cout << "note: " << note << '\n';
    for (const auto& c : r.checks) std::cout << (c.passed ? "ok   " : "FAIL ") << c.name << ": " << c.detail << '\n';

    if (!args.check) {
        for (const auto& path : ex::write_outputs(r, args.out)) std::cout << "wrote " << path.string() << '\n';
    }
    const bool ok = r.all_passed();
    std::cout << ex::to_string(e) << (ok ? ": all checks passed" : ": checks failed") << '\n';
    return ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum Mpemba experiment runner"};
    app.require_subcommand(1);
    Args args;
    int status = 0;

    for (ex::Experiment e : ex::all_experiments()) {
        const std::string name(ex::to_string(e));
        CLI::App* sub = app.add_subcommand(name, "run the " + name + " experiment");
        sub->add_option("--config", args.config, "JSON config file")->required()->check(CLI::ExistingFile);
        auto* out = sub->add_option("--out", args.out, "output directory");
        sub->add_option("--seed", args.seed, "override the config seed");
        sub->add_option("--threads", args.threads, "worker threads (default: QME_THREADS or hardware)");
        sub->add_flag("--check", args.check, "evaluate the embedded checks without writing outputs");
        sub->callback([&, e, out] {
            if (!args.check && out->count() == 0) throw CLI::RequiredError("--out (or --check)");
            try {
                status = execute(e, args);
            } catch (const std::invalid_argument& err) {
                std::cerr << "error: " << err.what() << '\n';
                status = 2;
            } catch (const std::exception& err) {
                std::cerr << "error: " << err.what() << '\n';
                status = 3;
            }
        });
    }

    CLI11_PARSE(app, argc, argv);
    return status;
}

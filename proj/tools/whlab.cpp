// whlab: batch verification driver.
//
//   whlab verify <suite> [--dim D] [--trials T] [--seed S] [--tol E] [--N n]
//                        [--grid-step h] [--model M] [--out FILE] [--with-timing]
//   whlab fell converge --input sets.json [--out FILE]
//
// Exit codes: 0 pass, 1 verification failure, 2 usage, 3 unreadable input,
// 4 malformed JSON or schema violation, 5 output I/O failure.

#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "whlab/suites.hpp"

namespace {

enum Exit { kPass = 0, kFail = 1, kUsage = 2, kUnreadable = 3, kMalformed = 4, kOutput = 5 };

int emit(const whlab::io::Json& report, const std::string& out) {
    const std::string text = whlab::io::dump_stable(report);
    if (out.empty() || out == "-") {
        std::cout << text << std::flush;
        return std::cout ? kPass : kOutput;
    }
    try {
        whlab::io::write_file(out, text);
    } catch (const whlab::io::IoError& e) {
        std::cerr << "whlab: " << e.what() << "\n";
        return kOutput;
    }
    return kPass;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace whlab;

    SuiteConfig cfg;
    if (const char* env = std::getenv("WHLAB_TOL")) {
        char* end = nullptr;
        const double t = std::strtod(env, &end);
        if (end == env || *end != '\0' || !(t > 0.0)) {
            std::cerr << "whlab: WHLAB_TOL must be a positive number, got \"" << env << "\"\n";
            return kUsage;
        }
        cfg.tol = t;
    }

    CLI::App app{"Numerical checks for Wiener-Hopf and Moebius constructions"};
    app.require_subcommand(1);

    auto* verify = app.add_subcommand("verify", "Run a verification suite and write a JSON report");
    int dim = 0;
    std::string out;
    bool with_timing = false;
    verify->add_option("suite", cfg.suite, "moebius, jordan, fell, toeplitz, groupoid, fibers, homotopy or all")->required();
    auto* dim_opt = verify->add_option("--dim", dim, "Matrix dimension (default: suite range)");
    verify->add_option("--trials", cfg.trials, "Random trials per case");
    verify->add_option("--seed", cfg.seed, "Generator seed");
    verify->add_option("--tol", cfg.tol, "Tolerance (default: WHLAB_TOL or 1e-10)");
    verify->add_option("--N", cfg.N, "Truncation level");
    verify->add_option("--grid-step", cfg.grid_step, "Grid step for Fell windows");
    verify->add_option("--model", cfg.model, "Homotopy model: halfline, unitary or all");
    verify->add_option("--out", out, "Report path (default: stdout)");
    verify->add_flag("--with-timing", with_timing, "Include wall_time in the report");

    auto* fell = app.add_subcommand("fell", "Fell topology tools");
    fell->require_subcommand(1);
    auto* converge = fell->add_subcommand("converge", "Decide convergence of a sequence of closed sets");
    std::string input;
    std::string fell_out;
    converge->add_option("--input", input, "Set sequence JSON")->required();
    converge->add_option("--out", fell_out, "Report path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kPass : kUsage;
    }

    if (verify->parsed()) {
        if (dim_opt->count() > 0) cfg.dim = dim;
        SuiteReport report;
        try {
            report = run(cfg);
        } catch (const InputValidationError& e) {
            std::cerr << "whlab: " << e.what() << "\n";
            return kUsage;
        }
        const int written = emit(to_json(report, with_timing), out);
        if (written != kPass) return written;
        for (const auto& c : report.cases)
            if (c.status == "fail") std::cerr << "FAIL " << c.name << ": " << c.details << "\n";
        return report.passed() ? kPass : kFail;
    }

    io::Json sets;
    try {
        sets = io::read_file(input);
    } catch (const io::IoError& e) {
        std::cerr << "whlab: " << e.what() << "\n";
        return kUnreadable;
    } catch (const io::Json::exception& e) {
        std::cerr << "whlab: malformed JSON in " << input << ": " << e.what() << "\n";
        return kMalformed;
    }
    FellLimit result;
    try {
        result = fell_limit(io::set_sequence_from_json(sets));
    } catch (const InputValidationError& e) {
        std::cerr << "whlab: " << input << ": " << e.what() << "\n";
        return kMalformed;
    } catch (const io::Json::exception& e) {
        std::cerr << "whlab: " << input << ": " << e.what() << "\n";
        return kMalformed;
    } catch (const Error& e) {
        std::cerr << "whlab: " << input << ": " << e.what() << "\n";
        return kMalformed;
    }
    const int written = emit(io::to_json(result), fell_out);
    if (written != kPass) return written;
    return result.converges ? kPass : kFail;
}

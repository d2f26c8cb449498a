#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hepta/cli.hpp"

namespace {

/// Comma or whitespace separated reals.
bool parse_reals(const std::string& text, std::vector<double>& out) {
    std::string normalized = text;
    for (char& ch : normalized)
        if (ch == ',' || ch == ';') ch = ' ';
    std::istringstream ss(normalized);
    out.clear();
    double v = 0.0;
    while (ss >> v) out.push_back(v);
    return ss.eof();
}

bool read_reals_file(const std::string& path, std::vector<double>& out,
                     std::string& message) {
    std::ifstream in(path);
    if (!in) {
        message = "cannot open rhs file " + path;
        return false;
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (!parse_reals(buffer.str(), out)) {
        message = "rhs file " + path + " contains non-numeric data";
        return false;
    }
    return true;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectral toolkit for corner-perturbed heptadiagonal symmetric matrices"};
    app.require_subcommand(1);

    hepta::cli::JobConfig cfg;
    std::string format = "json";
    std::string rhs_inline;
    std::string rhs_file;

    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--format", format, "output format")
            ->check(CLI::IsMember({"json", "csv"}))
            ->capture_default_str();
        cmd->add_option("--out", cfg.out_path, "write the report to this file");
    };
    const auto add_spec = [&](CLI::App* cmd) {
        cmd->add_option("--n", cfg.spec.n, "matrix dimension (>= 5)")->required();
        cmd->add_option("--a", cfg.spec.a, "main diagonal");
        cmd->add_option("--b", cfg.spec.b, "first off-diagonal band");
        cmd->add_option("--c", cfg.spec.c, "second off-diagonal band");
        cmd->add_option("--d", cfg.spec.d, "third off-diagonal band");
        cmd->add_option("--xi", cfg.spec.xi, "corner diagonal value");
        cmd->add_option("--eta", cfg.spec.eta, "corner off-diagonal value");
    };

    CLI::App* spectrum = app.add_subcommand(
        "spectrum", "all eigenvalues with enclosures and provenance");
    add_spec(spectrum);
    add_common(spectrum);

    CLI::App* det = app.add_subcommand("det", "determinant and block factors");
    add_spec(det);
    add_common(det);

    CLI::App* inv = app.add_subcommand("inverse", "dense rows of the inverse");
    add_spec(inv);
    add_common(inv);

    CLI::App* solve = app.add_subcommand("solve", "solve H x = rhs");
    add_spec(solve);
    add_common(solve);
    CLI::Option* rhs_opt =
        solve->add_option("--rhs", rhs_inline, "right-hand side, comma separated");
    CLI::Option* rhs_file_opt =
        solve->add_option("--rhs-file", rhs_file, "file with the right-hand side");
    rhs_opt->excludes(rhs_file_opt);

    CLI::App* verify = app.add_subcommand(
        "verify", "randomized self-check against dense reference algorithms");
    verify->add_option("--trials", cfg.trials, "number of random trials")
        ->capture_default_str();
    verify->add_option("--seed", cfg.seed, "generator seed")->capture_default_str();
    add_common(verify);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? hepta::cli::kExitOk : hepta::cli::kExitUsage;
    }

    if (spectrum->parsed()) cfg.command = hepta::cli::Command::Spectrum;
    else if (det->parsed()) cfg.command = hepta::cli::Command::Det;
    else if (inv->parsed()) cfg.command = hepta::cli::Command::Inverse;
    else if (solve->parsed()) cfg.command = hepta::cli::Command::Solve;
    else cfg.command = hepta::cli::Command::Verify;

    cfg.format = (format == "csv") ? hepta::cli::Format::Csv : hepta::cli::Format::Json;

    if (solve->parsed()) {
        if (!rhs_inline.empty()) {
            if (!parse_reals(rhs_inline, cfg.rhs)) {
                std::cerr << "error: --rhs contains non-numeric data\n";
                return hepta::cli::kExitUsage;
            }
        } else if (!rhs_file.empty()) {
            std::string message;
            if (!read_reals_file(rhs_file, cfg.rhs, message)) {
                std::cerr << "error: " << message << "\n";
                return hepta::cli::kExitUsage;
            }
        } else {
            std::cerr << "error: solve needs --rhs or --rhs-file\n";
            return hepta::cli::kExitUsage;
        }
    }

    return hepta::cli::run(cfg, std::cout, std::cerr);
}

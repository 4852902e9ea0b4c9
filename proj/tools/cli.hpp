#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace rsb::cli {

enum ExitCode { kOk = 0, kCertificate = 1, kUsage = 2 };

struct ExperimentConfig {
    std::vector<int> scaling{1};
    int levels = 8;
    int wavelet_order = 6;
    std::string structure = "polynomial";  // polynomial | noise | extended
    std::string input = "sin";             // sin | dirac | random
    std::string kernel = "riesz";          // riesz | heat
    double gamma = 2.5, p = 2.0, q = 1.0 / 0.0, alpha = -0.5, beta = 1.75;
    // order of the modelled distribution fed to schauder (defaults to gamma)
    double schauder_gamma = 2.5;
    std::uint64_t seed = 1;
    std::string out = "rsb_out";
    std::string format = "csv";

    // flat "section.key" -> value, as resolved (file, then flags)
    std::map<std::string, std::string> resolved() const;
};

// key = value lines under [section] headers; '#' starts a comment
std::map<std::string, std::string> parse_config_text(const std::string& text);
// throws rsb::PreconditionError naming the first bad key
ExperimentConfig resolve(const std::map<std::string, std::string>& kv);
// every module precondition the subcommand will hit, before any computation
void validate(const ExperimentConfig& c, const std::string& command);

struct Row {
    std::string table, key;
    long n = -1;
    double value = 0;
};

struct Report {
    std::string command;
    std::vector<Row> rows;
    std::map<std::string, std::vector<std::pair<double, double>>> plots;

    void add(const std::string& table, const std::string& key, long n, double v) { rows.push_back({table, key, n, v}); }
};

Report run_command(const std::string& command, const ExperimentConfig& c);
void write_report(std::ostream& os, const Report& r, const ExperimentConfig& c);

const std::vector<std::string>& commands();

// full entry point; argv[0] is the program name
int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace rsb::cli

#pragma once

#include <string>
#include <vector>

namespace pdmp {

// One verification check in the shared report format.
struct CheckResult {
    std::string name;
    double estimate{0.0};
    double standard_error{0.0};
    double threshold{0.0};
    bool pass{false};
    std::string note;
};

std::string checks_to_json(const std::vector<CheckResult>& checks);
std::string checks_to_text(const std::vector<CheckResult>& checks);

// Writes <directory>/<basename>.json and <basename>.txt.
void write_report_files(const std::string& directory, const std::string& basename,
                        const std::vector<CheckResult>& checks);

bool all_pass(const std::vector<CheckResult>& checks);

}  // namespace pdmp

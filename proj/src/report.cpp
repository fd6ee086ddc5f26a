#include "pdmp/report.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

namespace pdmp {

std::string checks_to_json(const std::vector<CheckResult>& checks) {
    nlohmann::json out = nlohmann::json::array();
    for (const CheckResult& c : checks) {
        nlohmann::json item{{"name", c.name},
                            {"estimate", c.estimate},
                            {"SE", c.standard_error},
                            {"threshold", c.threshold},
                            {"pass", c.pass}};
        if (!c.note.empty()) item["note"] = c.note;
        out.push_back(std::move(item));
    }
    return out.dump(2) + "\n";
}

std::string checks_to_text(const std::vector<CheckResult>& checks) {
    std::ostringstream out;
    std::size_t width = 4;
    for (const CheckResult& c : checks) width = std::max(width, c.name.size());
    for (const CheckResult& c : checks) {
        out << (c.pass ? "[pass] " : "[FAIL] ") << std::left << std::setw(static_cast<int>(width))
            << c.name << "  estimate=" << std::scientific << std::setprecision(4) << c.estimate
            << "  SE=" << c.standard_error << "  threshold=" << c.threshold;
        if (!c.note.empty()) out << "  (" << c.note << ")";
        out << "\n";
    }
    const std::size_t failures =
        static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(),
                                               [](const CheckResult& c) { return !c.pass; }));
    out << checks.size() << " checks, " << failures << " failed\n";
    return out.str();
}

void write_report_files(const std::string& directory, const std::string& basename,
                        const std::vector<CheckResult>& checks) {
    namespace fs = std::filesystem;
    fs::create_directories(directory);
    {
        std::ofstream json_out(fs::path(directory) / (basename + ".json"), std::ios::binary);
        json_out << checks_to_json(checks);
    }
    {
        std::ofstream text_out(fs::path(directory) / (basename + ".txt"), std::ios::binary);
        text_out << checks_to_text(checks);
    }
}

bool all_pass(const std::vector<CheckResult>& checks) {
    for (const CheckResult& c : checks)
        if (!c.pass) return false;
    return true;
}

}  // namespace pdmp

#ifndef QKIN_REPORT_HPP
#define QKIN_REPORT_HPP

#include <nlohmann/json.hpp>

#include <algorithm>
#include <string>
#include <vector>

namespace qkin {

// Structured pass/fail record. `passed` is always derived from
// measured_error <= tolerance; `anchor` names the claim being checked,
// or "plumbing" for infrastructure-only checks.
struct CheckReport {
    std::string name;
    bool passed = false;
    double measured_error = 0.0;
    double tolerance = 0.0;
    std::string anchor = "plumbing";
    std::vector<std::vector<std::string>> details;  // free-form table rows

    static CheckReport make(std::string name, double error, double tol,
                            std::string anchor = "plumbing") {
        CheckReport r;
        r.name = std::move(name);
        r.measured_error = error;
        r.tolerance = tol;
        r.passed = error <= tol;
        r.anchor = std::move(anchor);
        return r;
    }

    // For boolean claims: error 0 on success, 1 on failure.
    static CheckReport boolean(std::string name, bool ok,
                               std::string anchor = "plumbing") {
        return make(std::move(name), ok ? 0.0 : 1.0, 0.5, std::move(anchor));
    }
};

inline nlohmann::json to_json(const CheckReport& r) {
    nlohmann::json j;
    j["name"] = r.name;
    j["passed"] = r.passed;
    j["measured_error"] = r.measured_error;
    j["tolerance"] = r.tolerance;
    j["anchor"] = r.anchor;
    if (!r.details.empty()) j["details"] = r.details;
    return j;
}

// Deterministic report body: checks sorted by name, no timestamps.
inline nlohmann::json report_document(const std::string& suite,
                                      std::vector<CheckReport> checks) {
    std::sort(checks.begin(), checks.end(),
              [](const CheckReport& a, const CheckReport& b) { return a.name < b.name; });
    nlohmann::json j;
    j["suite"] = suite;
    j["checks"] = nlohmann::json::array();
    std::size_t npass = 0;
    for (const auto& c : checks) {
        j["checks"].push_back(to_json(c));
        if (c.passed) ++npass;
    }
    j["total"] = checks.size();
    j["passed"] = npass;
    j["all_passed"] = npass == checks.size();
    return j;
}

}  // namespace qkin

#endif

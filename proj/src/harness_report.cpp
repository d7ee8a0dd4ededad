#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "varbesov/harness.hpp"

namespace varbesov {

using nlohmann::json;

void CheckReport::add(std::string label, double ratio) {
    labels.push_back(std::move(label));
    ratios.push_back(ratio);
}

void CheckReport::finalize() {
    bool ok = !ratios.empty();
    empirical_constant = 0.0;
    min_ratio = ratios.empty() ? 0.0 : INFINITY;
    for (double r : ratios) {
        if (!std::isfinite(r)) {
            ok = false;
            empirical_constant = INFINITY;
            continue;
        }
        empirical_constant = std::max(empirical_constant, r);
        min_ratio = std::min(min_ratio, r);
        if (r > bound) ok = false;
    }
    for (const auto& [name, holds] : conditions) ok = ok && holds;
    pass = ok;
}

namespace {

// JSON has no infinity or NaN.
json number(double x) {
    if (std::isfinite(x)) return x;
    if (std::isnan(x)) return "nan";
    return x > 0 ? "inf" : "-inf";
}

}  // namespace

json report_to_json(const CheckReport& r) {
    json ratios = json::array();
    for (std::size_t i = 0; i < r.ratios.size(); ++i)
        ratios.push_back({{"case", r.labels[i]}, {"ratio", number(r.ratios[i])}});
    json metrics = json::object();
    for (const auto& [k, v] : r.metrics) metrics[k] = number(v);
    return {{"check_id", r.check_id},
            {"inequality", r.inequality},
            {"constant_class", r.exact_constant ? "exact" : "banded"},
            {"bound", number(r.bound)},
            {"empirical_constant", number(r.empirical_constant)},
            {"min_ratio", number(r.min_ratio)},
            {"ratios", ratios},
            {"metrics", metrics},
            {"conditions", r.conditions},
            {"pass", r.pass},
            {"notes", r.notes},
            {"config", r.config}};
}

json reports_payload(const std::vector<CheckReport>& reports) {
    json arr = json::array();
    bool all = true;
    for (const auto& r : reports) {
        arr.push_back(report_to_json(r));
        all = all && r.pass;
    }
    return {{"reports", arr}, {"all_pass", all}, {"count", reports.size()}};
}

void emit_report(const std::vector<CheckReport>& reports, const std::string& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create report directory " + dir + ": " + ec.message());

    json doc = reports_payload(reports);
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream ts;
    ts << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    doc["generated_at"] = ts.str();

    const fs::path jpath = fs::path(dir) / "report.json";
    std::ofstream js(jpath);
    if (!js) throw std::runtime_error("cannot write " + jpath.string());
    js << doc.dump(2) << '\n';

    const fs::path cpath = fs::path(dir) / "ratios.csv";
    std::ofstream cs(cpath);
    if (!cs) throw std::runtime_error("cannot write " + cpath.string());
    cs << "check_id,case,ratio,bound,pass\n";
    cs << std::setprecision(17);
    for (const auto& r : reports)
        for (std::size_t i = 0; i < r.ratios.size(); ++i)
            cs << r.check_id << ',' << r.labels[i] << ',' << r.ratios[i] << ',' << r.bound << ','
               << (r.pass ? "true" : "false") << '\n';
    if (!js || !cs) throw std::runtime_error("report write failed");
}

}  // namespace varbesov

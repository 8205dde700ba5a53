#include "stepfit/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <system_error>

namespace stepfit::io {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_number(const std::string& field, const std::string& origin, int line_no) {
    const std::string t = trim(field);
    double v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || ptr != t.data() + t.size()) {
        throw DataError(origin + ":" + std::to_string(line_no) + ": not a number: '" + t + "'");
    }
    if (!std::isfinite(v)) {
        throw DataError(origin + ":" + std::to_string(line_no) + ": non-finite value");
    }
    return v;
}

} // namespace

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

SampledSignal parse_signal_csv(const std::string& text, const std::string& origin) {
    std::vector<double> ys;
    std::vector<double> xs;
    bool two_cols = false;
    bool first_row = true;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty()) continue;
        const size_t comma = t.find(',');
        const bool row_two = comma != std::string::npos;
        if (row_two && t.find(',', comma + 1) != std::string::npos) {
            throw DataError(origin + ":" + std::to_string(line_no) + ": expected at most two columns");
        }
        if (first_row) {
            two_cols = row_two;
            first_row = false;
        } else if (row_two != two_cols) {
            throw DataError(origin + ":" + std::to_string(line_no) + ": inconsistent column count");
        }
        if (row_two) {
            xs.push_back(parse_number(t.substr(0, comma), origin, line_no));
            ys.push_back(parse_number(t.substr(comma + 1), origin, line_no));
        } else {
            ys.push_back(parse_number(t, origin, line_no));
        }
    }
    if (ys.empty()) throw DataError(origin + ": no data rows");
    if (two_cols && xs.size() >= 3) {
        const double step = xs[1] - xs[0];
        const double scale = std::max(1.0, std::abs(xs.back() - xs.front()));
        for (size_t i = 2; i < xs.size(); ++i) {
            if (std::abs(xs[i] - xs[i - 1] - step) > 1e-9 * scale) {
                throw DataError(origin + ": x column is not equidistant near row " + std::to_string(i + 1));
            }
        }
    }
    try {
        return SampledSignal(std::move(ys));
    } catch (const std::exception& e) {
        throw DataError(origin + ": " + e.what());
    }
}

SampledSignal read_signal_csv(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_signal_csv(ss.str(), path);
}

void write_signal_csv(const std::string& path, const std::vector<double>& values) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open " + path + " for writing");
    for (double v : values) f << format_double(v) << '\n';
    if (!f) throw DataError("write failed: " + path);
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open " + path + " for writing");
    f << content;
    if (!f) throw DataError("write failed: " + path);
}

nlohmann::json to_json(const potts::Segmentation& s) {
    nlohmann::json j;
    j["n"] = s.n;
    j["gamma"] = nullptr;
    if (s.gamma) j["gamma"] = *s.gamma;
    j["jumps"] = s.jumps;
    j["levels"] = s.levels;
    j["rss"] = s.rss;
    j["h_value"] = nullptr;
    if (s.h_value) j["h_value"] = *s.h_value;
    return j;
}

nlohmann::json to_json(const potts::SolutionPath& p) {
    nlohmann::json j;
    j["n"] = p.n;
    std::vector<int> ks(p.rss.size());
    for (size_t k = 0; k < ks.size(); ++k) ks[k] = static_cast<int>(k);
    j["ks"] = ks;
    j["rss"] = p.rss;
    j["jumps"] = p.jumps;
    j["knots"] = nlohmann::json::array();
    for (const auto& kn : p.knots) {
        j["knots"].push_back({{"gamma", kn.gamma}, {"k", kn.k}});
    }
    return j;
}

nlohmann::json to_json(const StepFunction& f) {
    nlohmann::json j;
    j["breakpoints"] = f.breakpoints();
    j["levels"] = f.levels();
    return j;
}

StepFunction step_function_from_json(const nlohmann::json& j, const std::string& origin) {
    if (!j.is_object() || !j.contains("breakpoints") || !j.contains("levels")) {
        throw DataError(origin + ": expected an object with 'breakpoints' and 'levels'");
    }
    try {
        auto bp = j.at("breakpoints").get<std::vector<double>>();
        auto lv = j.at("levels").get<std::vector<double>>();
        return StepFunction(std::move(bp), std::move(lv));
    } catch (const DataError&) {
        throw;
    } catch (const std::exception& e) {
        throw DataError(origin + ": " + e.what());
    }
}

StepFunction read_step_function_json(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open " + path);
    nlohmann::json j;
    try {
        f >> j;
    } catch (const std::exception& e) {
        throw DataError(path + ": " + e.what());
    }
    return step_function_from_json(j, path);
}

} // namespace stepfit::io

#pragma once

// CSV and JSON serialization.  All floating-point output uses the shortest
// representation that round-trips exactly.

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "stepfit/potts.hpp"
#include "stepfit/signal.hpp"
#include "stepfit/step_function.hpp"

namespace stepfit::io {

// Malformed or unreadable input data (as opposed to bad usage).
struct DataError : std::runtime_error {
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Shortest round-trip decimal form of v.
std::string format_double(double v);

// Reads a signal from CSV text: one value per row, or two comma-separated
// columns x,y whose x must be equidistant (then only y is kept).  Blank
// lines are ignored.  Throws DataError with a line number on bad content.
SampledSignal read_signal_csv(const std::string& path);
SampledSignal parse_signal_csv(const std::string& text, const std::string& origin);

void write_signal_csv(const std::string& path, const std::vector<double>& values);

nlohmann::json to_json(const potts::Segmentation& s);
nlohmann::json to_json(const potts::SolutionPath& p);
nlohmann::json to_json(const StepFunction& f);

StepFunction step_function_from_json(const nlohmann::json& j, const std::string& origin);
StepFunction read_step_function_json(const std::string& path);

void write_text_file(const std::string& path, const std::string& content);

} // namespace stepfit::io

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "reclab/measures.hpp"
#include "reclab/symbolic.hpp"

namespace reclab {

/// Model from a JSON object (see measure_from_json) or a preset string:
/// "uniform-binary", "uniform:m", "bernoulli:p0,p1,...", "xor:p1".
MeasurePtr parse_model(const nlohmann::json& spec);

/// Word from a JSON array of symbols or a string: "ones:n", "thue-morse:n",
/// "digits:base:length:value", a compact digit string ("0110") or a JSON
/// array in text form.
Word parse_word(const nlohmann::json& spec);

/// First `length` digits after the radix point of `value` in base `base`.
/// `value` is a fraction "p/q", a decimal "0.1415", or one of the constants
/// pi, e, sqrt2, phi, ln2.
Word digits_word(unsigned base, std::size_t length, std::string_view value);

/// Inclusive integer range "a..b", a single integer, or a JSON array.
std::vector<std::uint64_t> parse_index_list(const nlohmann::json& spec);

/// "a..b:step" (inclusive, step > 0), a single number, or a JSON array.
std::vector<double> parse_grid(const nlohmann::json& spec);

/// analyze, simulate, compare, nonconv, hitting, entropy, bounds.
const std::vector<std::string>& command_names();

/// True for commands that draw random paths and therefore need a seed.
bool needs_seed(std::string_view command);

/// Runs a command on a JSON config. The report embeds the normalized config
/// under "config"; running that config again reproduces the report.
nlohmann::json run_command(std::string_view command, const nlohmann::json& config);

/// Table view of a report produced by run_command.
std::string report_to_csv(const nlohmann::json& report);

/// Serialized report text (indented JSON with a trailing newline).
std::string dump_report(const nlohmann::json& report);

}  // namespace reclab

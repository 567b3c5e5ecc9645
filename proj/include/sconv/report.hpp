#pragma once

#include "sconv/checkers.hpp"
#include "sconv/lln.hpp"
#include "sconv/relations.hpp"
#include "sconv/series.hpp"

#include <json.hpp>

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sconv {

std::string_view tool_version();

/// Shortest decimal that reads back to the same double; "inf", "-inf", "nan"
/// for non-finite values.
std::string format_number(double x);

/// Writes to a temporary file in the target directory, then renames it over
/// the target.
void write_atomic(const std::filesystem::path& path, std::string_view content);

/// Columns n, term, partial_sum, std_err, flags.
std::string series_csv(const SeriesDiagnostic& d);
/// Columns n, estimate, std_err, flags.
std::string moment_curve_csv(const MomentCurve& c);

nlohmann::ordered_json to_json(const SlopeFit& f);
nlohmann::ordered_json to_json(const SeriesDiagnostic& d, bool with_points = false);
nlohmann::ordered_json to_json(const ModeVerdict& v);
nlohmann::ordered_json to_json(const MomentCurve& c);
nlohmann::ordered_json to_json(const EdgeOutcome& e);
nlohmann::ordered_json to_json(const RelationReport& r);

/// Ordered key/value echo of the resolved run configuration.
using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

/// {"tool", "version", "command", "seed", "config", "result"}.
nlohmann::ordered_json envelope(std::string_view command, std::uint64_t seed, const ConfigEcho& config,
                                nlohmann::ordered_json result);

/// Serialized JSON text, two-space indent, trailing newline.
std::string dump(const nlohmann::ordered_json& j);

/// Flat "key = value" text; '#' starts a comment. Throws PreconditionError
/// naming the line on malformed input.
std::map<std::string, std::string> parse_config_text(std::string_view text);
std::map<std::string, std::string> read_config_file(const std::filesystem::path& path);

}  // namespace sconv

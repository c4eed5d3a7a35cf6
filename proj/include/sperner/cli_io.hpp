#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sperner/fixpoint_solver.hpp"
#include "sperner/labeling.hpp"
#include "sperner/sperner_search.hpp"

namespace sperner {

using json = nlohmann::json;

inline constexpr const char* kReportVersion = "1.0";

// ---------------------------------------------------------------------------
// Label files: one line per lattice vertex, "k_0 k_1 ... k_n : label".
// Blank lines and lines starting with '#' are ignored; order is free.

LabeledGrid parse_label_text(const std::string& text);
LabeledGrid read_label_file(const std::string& path);
std::string format_label_text(const LabeledGrid& lg);

// ---------------------------------------------------------------------------
// JSON

/// Pretty JSON with sorted keys and doubles at 17 significant digits.
std::string emit_json(const json& j);

void to_json(json& j, const LatticeVertex& v);
void from_json(const json& j, LatticeVertex& v);
void to_json(json& j, const Cell& c);
void from_json(const json& j, Cell& c);
void to_json(json& j, const LevelRecord& r);
void from_json(const json& j, LevelRecord& r);
void to_json(json& j, const ApproxFixedPoint& a);
void from_json(const json& j, ApproxFixedPoint& a);
void to_json(json& j, const SearchResult& s);
void from_json(const json& j, SearchResult& s);
void to_json(json& j, const BoundReport& b);
void to_json(json& j, const CauchyReport& c);
void to_json(json& j, const HandshakeReport& h);

struct RunReport
{
    std::string version = kReportVersion;
    std::string command;
    json config = json::object();
    json result = json::object();
    json trace = json::array();
    json checks = json::object();
    double timing_ms = 0.0;

    bool operator==(const RunReport&) const = default;
};

void to_json(json& j, const RunReport& r);
void from_json(const json& j, RunReport& r);

// ---------------------------------------------------------------------------
// Function specs

struct FunctionSpec
{
    std::string kind;                 ///< rotation, identity, constant, affine_stochastic, poly1d, pl_from_labels
    std::optional<int> n;
    std::vector<double> point;        ///< constant
    std::vector<double> coeffs;       ///< poly1d coefficients or row-major matrix
    std::optional<std::string> labels_path;
    std::optional<std::uint64_t> random_seed;
    std::optional<int> m;             ///< mesh for random pl_from_labels
    std::optional<double> tau;
};

/// Comma-separated list of numbers; the message names `field` on error.
std::vector<double> parse_number_list(const std::string& text, const std::string& field);

/// Builds the map; throws InvalidArgument naming the offending flag.
SimplexMap make_map(const FunctionSpec& spec);

// ---------------------------------------------------------------------------
// Rendering

/// SVG of a 2-dimensional labeled grid; throws InvalidArgument unless n == 2.
std::string render_svg(const LabeledGrid& lg);

// ---------------------------------------------------------------------------
// Commands

struct CliOptions
{
    std::optional<int> n;
    std::optional<int> m;
    std::string fn;
    std::string point;
    std::string coeffs;
    std::optional<std::string> labels;
    std::optional<std::uint64_t> random;
    double tol = 1e-6;
    int m_max = 1 << 22;
    std::optional<double> tau;
    std::optional<std::string> json_path;
    std::optional<std::string> svg_path;
};

struct CommandOutcome
{
    int exit_code = 0;
    RunReport report;
    std::string svg;                  ///< render only
    std::vector<std::string> errors;  ///< input errors, one per line
};

CommandOutcome cmd_solve(const CliOptions& opt);
CommandOutcome cmd_sperner(const CliOptions& opt);
CommandOutcome cmd_reverse(const CliOptions& opt);
CommandOutcome cmd_render(const CliOptions& opt);

/// Full command line (args[0] is the program name). Returns the exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sperner

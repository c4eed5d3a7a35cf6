#include "sperner/cli_io.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "sperner/errors.hpp"
#include "sperner/maps.hpp"
#include "sperner/reverse_construction.hpp"

namespace sperner {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string format_double(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    std::string s = buf;
    if (s.find_first_of(".en") == std::string::npos)
        s += ".0";
    return s;
}

std::string fixed3(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.3f", x);
    return buf;
}

void emit(std::string& out, const json& j, int depth)
{
    const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
    const std::string close(static_cast<std::size_t>(2 * depth), ' ');
    switch (j.type())
    {
    case json::value_t::object:
    {
        if (j.empty())
        {
            out += "{}";
            return;
        }
        // object_t is an ordered std::map, so iteration is already sorted.
        out += "{\n";
        bool first = true;
        for (const auto& [key, value] : j.items())
        {
            if (!first)
                out += ",\n";
            first = false;
            out += pad + json(key).dump() + ": ";
            emit(out, value, depth + 1);
        }
        out += "\n" + close + "}";
        return;
    }
    case json::value_t::array:
    {
        if (j.empty())
        {
            out += "[]";
            return;
        }
        out += "[\n";
        for (std::size_t i = 0; i < j.size(); ++i)
        {
            if (i)
                out += ",\n";
            out += pad;
            emit(out, j[i], depth + 1);
        }
        out += "\n" + close + "]";
        return;
    }
    case json::value_t::number_float:
    {
        const double x = j.get<double>();
        out += std::isfinite(x) ? format_double(x) : "null";
        return;
    }
    default:
        out += j.dump();
        return;
    }
}

double get_double(const json& j)
{
    if (j.is_null())
        return std::numeric_limits<double>::quiet_NaN();
    return j.get<double>();
}

std::vector<double> get_doubles(const json& j)
{
    std::vector<double> v;
    for (const auto& x : j)
        v.push_back(get_double(x));
    return v;
}

std::string vertex_text(const LatticeVertex& v)
{
    std::string s = "(";
    for (std::size_t i = 0; i < v.k.size(); ++i)
        s += (i ? "," : "") + std::to_string(v.k[i]);
    return s + ")";
}

double elapsed_ms(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

json config_echo(const CliOptions& opt)
{
    json c = json::object();
    if (opt.n)
        c["n"] = *opt.n;
    if (opt.m)
        c["m"] = *opt.m;
    if (!opt.fn.empty())
        c["fn"] = opt.fn;
    if (!opt.point.empty())
        c["point"] = opt.point;
    if (!opt.coeffs.empty())
        c["coeffs"] = opt.coeffs;
    if (opt.labels)
        c["labels"] = *opt.labels;
    if (opt.random)
        c["random"] = *opt.random;
    if (opt.tau)
        c["tau"] = *opt.tau;
    c["tol"] = opt.tol;
    c["m_max"] = opt.m_max;
    return c;
}

CommandOutcome input_error(const std::string& message)
{
    CommandOutcome out;
    out.exit_code = 1;
    out.errors.push_back(message);
    return out;
}

CommandOutcome violation_error(const ConformanceReport& report)
{
    CommandOutcome out;
    out.exit_code = 1;
    out.errors.push_back("nonconforming labeling: " + std::to_string(report.violations.size()) + " violation(s)");
    for (const auto& v : report.violations)
        out.errors.push_back("rule " + std::to_string(v.rule) + " at " + vertex_text(v.position) + ": " + v.message);
    return out;
}

LabeledGrid load_labels(const CliOptions& opt)
{
    if (opt.labels)
    {
        LabeledGrid lg = read_label_file(*opt.labels);
        if (opt.n && *opt.n != lg.dim())
            throw InvalidArgument("--n: " + std::to_string(*opt.n) + " does not match the label file (n = " +
                                  std::to_string(lg.dim()) + ")");
        if (opt.m && *opt.m != lg.mesh())
            throw InvalidArgument("--m: " + std::to_string(*opt.m) + " does not match the label file (m = " +
                                  std::to_string(lg.mesh()) + ")");
        return lg;
    }
    if (opt.random)
    {
        if (!opt.n)
            throw InvalidArgument("--n: required with --random");
        if (!opt.m)
            throw InvalidArgument("--m: required with --random");
        return random_labeling(make_grid(*opt.n, *opt.m), *opt.random);
    }
    throw InvalidArgument("--labels: a label file or --random seed is required");
}

FunctionSpec spec_from(const CliOptions& opt)
{
    FunctionSpec spec;
    spec.kind = opt.fn;
    spec.n = opt.n;
    spec.m = opt.m;
    if (!opt.point.empty())
        spec.point = parse_number_list(opt.point, "--point");
    if (!opt.coeffs.empty())
        spec.coeffs = parse_number_list(opt.coeffs, "--coeffs");
    spec.labels_path = opt.labels;
    spec.random_seed = opt.random;
    spec.tau = opt.tau;
    return spec;
}

std::vector<int> doubling_schedule(int start, int m_max)
{
    std::vector<int> s;
    for (long long m = start; m <= m_max; m *= 2)
        s.push_back(static_cast<int>(m));
    return s;
}

}  // namespace

// ---------------------------------------------------------------------------
// Label files

LabeledGrid parse_label_text(const std::string& text)
{
    std::map<std::vector<int>, int> entries;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    std::size_t width = 0;
    int m = -1;
    while (std::getline(in, line))
    {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.resize(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const std::string where = "--labels: line " + std::to_string(lineno) + ": ";
        const auto colon = line.find(':');
        if (colon == std::string::npos)
            throw InvalidArgument(where + "expected \"k_0 ... k_n : label\"");
        std::istringstream coords(line.substr(0, colon));
        std::vector<int> k;
        std::string tok;
        while (coords >> tok)
        {
            std::size_t used = 0;
            int value = 0;
            try
            {
                value = std::stoi(tok, &used);
            }
            catch (const std::exception&)
            {
                used = 0;
            }
            if (used != tok.size() || value < 0)
                throw InvalidArgument(where + "bad coordinate '" + tok + "'");
            k.push_back(value);
        }
        std::istringstream lab(line.substr(colon + 1));
        int label = 0;
        std::string rest;
        if (!(lab >> label) || (lab >> rest))
            throw InvalidArgument(where + "expected one integer label after ':'");
        if (k.size() < 2)
            throw InvalidArgument(where + "need at least two coordinates");
        int sum = 0;
        for (int x : k)
            sum += x;
        if (width == 0)
        {
            width = k.size();
            m = sum;
        }
        if (k.size() != width)
            throw InvalidArgument(where + "expected " + std::to_string(width) + " coordinates");
        if (sum != m)
            throw InvalidArgument(where + "coordinates sum to " + std::to_string(sum) + ", expected " + std::to_string(m));
        if (!entries.emplace(k, label).second)
            throw InvalidArgument(where + "duplicate vertex");
    }
    if (entries.empty())
        throw InvalidArgument("--labels: no vertices");
    if (m < 1)
        throw InvalidArgument("--labels: mesh parameter must be >= 1");

    auto grid = make_grid(static_cast<int>(width) - 1, m);
    if (entries.size() != grid->vertex_count())
        throw InvalidArgument("--labels: expected " + std::to_string(grid->vertex_count()) + " vertices, got " +
                              std::to_string(entries.size()));
    std::vector<int> labels(grid->vertex_count());
    for (const auto& [k, label] : entries)
        labels[static_cast<std::size_t>(grid->vertex_id(LatticeVertex{k}))] = label;
    return explicit_labeling(std::move(grid), std::move(labels));
}

LabeledGrid read_label_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw InvalidArgument("--labels: cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_label_text(ss.str());
}

std::string format_label_text(const LabeledGrid& lg)
{
    std::string out;
    const Grid& g = lg.grid();
    for (std::size_t v = 0; v < g.vertex_count(); ++v)
    {
        const auto& k = g.vertex(static_cast<int>(v)).k;
        for (std::size_t i = 0; i < k.size(); ++i)
            out += (i ? " " : "") + std::to_string(k[i]);
        out += " : " + std::to_string(lg.label(static_cast<int>(v))) + "\n";
    }
    return out;
}

// ---------------------------------------------------------------------------
// JSON

std::string emit_json(const json& j)
{
    std::string out;
    emit(out, j, 0);
    out += "\n";
    return out;
}

void to_json(json& j, const LatticeVertex& v)
{
    j = v.k;
}

void from_json(const json& j, LatticeVertex& v)
{
    v.k = j.get<std::vector<int>>();
}

void to_json(json& j, const Cell& c)
{
    j = json{{"id", c.id}, {"vertices", c.vertices}};
}

void from_json(const json& j, Cell& c)
{
    c.id = j.at("id").get<int>();
    c.vertices = j.at("vertices").get<std::vector<LatticeVertex>>();
}

void to_json(json& j, const LevelRecord& r)
{
    j = json{{"m", r.m},
             {"cell_diameter", r.cell_diameter},
             {"epsilon", r.epsilon},
             {"residual", r.residual},
             {"residual_l1", r.residual_l1},
             {"bound", r.bound},
             {"bound_holds", r.bound_holds},
             {"vertex_hit", r.vertex_hit},
             {"materialized", r.materialized},
             {"path_steps", r.path_steps},
             {"candidate", r.candidate},
             {"cell", r.cell}};
}

void from_json(const json& j, LevelRecord& r)
{
    r.m = j.at("m").get<int>();
    r.cell_diameter = get_double(j.at("cell_diameter"));
    r.epsilon = get_double(j.at("epsilon"));
    r.residual = get_double(j.at("residual"));
    r.residual_l1 = get_double(j.at("residual_l1"));
    r.bound = get_double(j.at("bound"));
    r.bound_holds = j.at("bound_holds").get<bool>();
    r.vertex_hit = j.at("vertex_hit").get<bool>();
    r.materialized = j.at("materialized").get<bool>();
    r.path_steps = j.at("path_steps").get<long long>();
    r.candidate = get_doubles(j.at("candidate"));
    r.cell = j.at("cell").get<Cell>();
}

void to_json(json& j, const ApproxFixedPoint& a)
{
    j = json{{"point", a.point},
             {"residual", a.residual},
             {"residual_l1", a.residual_l1},
             {"m_final", a.m_final},
             {"cell", a.cell},
             {"vertex_hit", a.vertex_hit},
             {"converged", a.converged},
             {"non_contracting", a.non_contracting},
             {"trace", a.trace}};
}

void from_json(const json& j, ApproxFixedPoint& a)
{
    a.point = get_doubles(j.at("point"));
    a.residual = get_double(j.at("residual"));
    a.residual_l1 = get_double(j.at("residual_l1"));
    a.m_final = j.at("m_final").get<int>();
    a.cell = j.at("cell").get<Cell>();
    a.vertex_hit = j.at("vertex_hit").get<bool>();
    a.converged = j.at("converged").get<bool>();
    a.non_contracting = j.at("non_contracting").get<bool>();
    a.trace = j.value("trace", json::array()).get<std::vector<LevelRecord>>();
}

void to_json(json& j, const SearchResult& s)
{
    j = json{{"fully_labeled", s.fully_labeled},
             {"count", s.fully_labeled.size()},
             {"parity", to_string(s.count_parity)},
             {"paths", s.paths}};
}

void from_json(const json& j, SearchResult& s)
{
    s.fully_labeled = j.at("fully_labeled").get<std::vector<int>>();
    s.count_parity = j.at("parity").get<std::string>() == "odd" ? Parity::Odd : Parity::Even;
    s.paths = j.at("paths").get<std::vector<std::vector<int>>>();
}

void to_json(json& j, const BoundReport& b)
{
    json checks = json::array();
    for (const auto& c : b.checks)
        checks.push_back({{"name", c.name}, {"worst_slack", c.worst_slack}, {"holds", c.holds}});
    j = json{{"epsilon", b.epsilon},
             {"anchor", b.anchor},
             {"anchor_image", b.anchor_image},
             {"residual_l1", b.residual_l1},
             {"bound", b.bound},
             {"checks", checks},
             {"holds", b.holds()}};
}

void to_json(json& j, const CauchyReport& c)
{
    j = json{{"meshes", c.meshes},
             {"distances", c.distances},
             {"rate_constant", c.rate_constant},
             {"monotone_from", c.monotone_from},
             {"eventually_monotone", c.eventually_monotone},
             {"final_within_two_mesh", c.final_within_two_mesh},
             {"trivial", c.trivial},
             {"contracting", c.contracting()}};
}

void to_json(json& j, const HandshakeReport& h)
{
    j = json{{"odd_degree_nodes", h.odd_degree_nodes},
             {"degree_sum", h.degree_sum},
             {"edge_count", h.edge_count},
             {"holds", h.holds()}};
}

void to_json(json& j, const RunReport& r)
{
    j = json{{"version", r.version},
             {"command", r.command},
             {"config", r.config},
             {"result", r.result},
             {"trace", r.trace},
             {"checks", r.checks},
             {"timing_ms", r.timing_ms}};
}

void from_json(const json& j, RunReport& r)
{
    r.version = j.at("version").get<std::string>();
    r.command = j.at("command").get<std::string>();
    r.config = j.at("config");
    r.result = j.at("result");
    r.trace = j.at("trace");
    r.checks = j.at("checks");
    r.timing_ms = get_double(j.at("timing_ms"));
}

// ---------------------------------------------------------------------------
// Function specs

std::vector<double> parse_number_list(const std::string& text, const std::string& field)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ','))
    {
        tok = trim(tok);
        std::size_t used = 0;
        double value = 0.0;
        try
        {
            value = std::stod(tok, &used);
        }
        catch (const std::exception&)
        {
            used = 0;
        }
        if (tok.empty() || used != tok.size() || !std::isfinite(value))
            throw InvalidArgument(field + ": expected comma-separated numbers, got '" + text + "'");
        out.push_back(value);
    }
    if (out.empty())
        throw InvalidArgument(field + ": empty list");
    return out;
}

SimplexMap make_map(const FunctionSpec& spec)
{
    auto need_n = [&]() {
        if (!spec.n)
            throw InvalidArgument("--n: required for --fn " + spec.kind);
        if (*spec.n < 1)
            throw InvalidArgument("--n: must be >= 1");
        return *spec.n;
    };
    auto check_n = [&](int n) {
        if (spec.n && *spec.n != n)
            throw InvalidArgument("--n: " + std::to_string(*spec.n) + " does not match the inferred dimension " +
                                  std::to_string(n));
    };

    if (spec.kind == "rotation")
        return rotation_map(need_n());
    if (spec.kind == "identity")
        return identity_map(need_n());
    if (spec.kind == "constant")
    {
        if (spec.point.size() < 2)
            throw InvalidArgument("--point: need at least two barycentric coordinates");
        check_n(static_cast<int>(spec.point.size()) - 1);
        try
        {
            return constant_map(BaryPoint(spec.point));
        }
        catch (const Error& e)
        {
            throw InvalidArgument(std::string("--point: ") + e.what());
        }
    }
    if (spec.kind == "affine_stochastic")
    {
        const auto d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(spec.coeffs.size()))));
        if (d < 2 || static_cast<std::size_t>(d * d) != spec.coeffs.size())
            throw InvalidArgument("--coeffs: expected a square (n+1)x(n+1) matrix in row-major order, got " +
                                  std::to_string(spec.coeffs.size()) + " entries");
        check_n(d - 1);
        try
        {
            return affine_stochastic_map(d - 1, spec.coeffs);
        }
        catch (const Error& e)
        {
            throw InvalidArgument(std::string("--coeffs: ") + e.what());
        }
    }
    if (spec.kind == "poly1d")
    {
        check_n(1);
        if (spec.coeffs.empty())
            throw InvalidArgument("--coeffs: required for --fn poly1d");
        try
        {
            return poly1d_map(spec.coeffs);
        }
        catch (const Error& e)
        {
            throw InvalidArgument(std::string("--coeffs: ") + e.what());
        }
    }
    if (spec.kind == "pl_from_labels")
    {
        CliOptions opt;
        opt.n = spec.n;
        opt.m = spec.m;
        opt.labels = spec.labels_path;
        opt.random = spec.random_seed;
        return build_pl_map(load_labels(opt), spec.tau).as_simplex_map();
    }
    if (spec.kind.empty())
        throw InvalidArgument("--fn: required");
    throw InvalidArgument("--fn: unknown function '" + spec.kind +
                          "' (expected rotation, identity, constant, affine_stochastic, poly1d, pl_from_labels)");
}

// ---------------------------------------------------------------------------
// Rendering

std::string render_svg(const LabeledGrid& lg)
{
    if (lg.dim() != 2)
        throw InvalidArgument("render requires n=2 (got n=" + std::to_string(lg.dim()) + ")");

    constexpr double edge = 1000.0;
    constexpr double margin = 50.0;
    const double h = edge * std::sqrt(3.0) / 2.0;
    const double corners[3][2] = {{margin, margin + h}, {margin + edge, margin + h}, {margin + edge / 2.0, margin}};
    const Grid& g = lg.grid();
    const int m = g.mesh();

    auto xy = [&](int v) {
        const auto& k = g.vertex(v).k;
        double x = 0.0, y = 0.0;
        for (int i = 0; i < 3; ++i)
        {
            x += k[static_cast<std::size_t>(i)] * corners[i][0] / m;
            y += k[static_cast<std::size_t>(i)] * corners[i][1] / m;
        }
        return std::pair{x, y};
    };

    const double font = std::clamp(160.0 / m, 6.0, 28.0);
    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed3(edge + 2 * margin) + "\" height=\"" +
         fixed3(h + 2 * margin) + "\" viewBox=\"0 0 " + fixed3(edge + 2 * margin) + " " + fixed3(h + 2 * margin) +
         "\">\n";
    s += "<rect x=\"0\" y=\"0\" width=\"" + fixed3(edge + 2 * margin) + "\" height=\"" + fixed3(h + 2 * margin) +
         "\" fill=\"#ffffff\"/>\n";

    s += "<g id=\"cells\">\n";
    for (std::size_t c = 0; c < g.cell_count(); ++c)
    {
        const bool full = is_fully_labeled(lg.cell_labels(static_cast<int>(c)));
        std::string pts;
        for (int v : g.cell_vertex_ids(static_cast<int>(c)))
        {
            const auto [x, y] = xy(v);
            pts += (pts.empty() ? "" : " ") + fixed3(x) + "," + fixed3(y);
        }
        s += std::string("<polygon class=\"") + (full ? "cell full" : "cell") + "\" points=\"" + pts + "\" fill=\"" +
             (full ? "#f5c542" : "none") + "\" stroke=\"#555555\" stroke-width=\"1\"/>\n";
    }
    s += "</g>\n";

    s += "<g id=\"doors\">\n";
    for (const auto& [facet, cells] : g.facets())
    {
        std::vector<int> labels;
        for (int v : facet)
            labels.push_back(lg.label(v));
        if (!is_fully_labeled(labels))
            continue;
        const auto [x1, y1] = xy(facet[0]);
        const auto [x2, y2] = xy(facet[1]);
        s += "<line class=\"door\" x1=\"" + fixed3(x1) + "\" y1=\"" + fixed3(y1) + "\" x2=\"" + fixed3(x2) +
             "\" y2=\"" + fixed3(y2) + "\" stroke=\"#c0392b\" stroke-width=\"6\" stroke-linecap=\"round\"/>\n";
    }
    s += "</g>\n";

    s += "<g id=\"vertices\" font-family=\"sans-serif\" font-size=\"" + fixed3(font) + "\" text-anchor=\"middle\">\n";
    for (std::size_t v = 0; v < g.vertex_count(); ++v)
    {
        const auto [x, y] = xy(static_cast<int>(v));
        s += "<circle cx=\"" + fixed3(x) + "\" cy=\"" + fixed3(y) + "\" r=\"3.000\" fill=\"#222222\"/>\n";
        s += "<text x=\"" + fixed3(x) + "\" y=\"" + fixed3(y - font * 0.5) + "\">" +
             std::to_string(lg.label(static_cast<int>(v))) + "</text>\n";
    }
    s += "</g>\n</svg>\n";
    return s;
}

// ---------------------------------------------------------------------------
// Commands

CommandOutcome cmd_solve(const CliOptions& opt)
{
    const auto start = std::chrono::steady_clock::now();
    CommandOutcome out;
    try
    {
        const FunctionSpec spec = spec_from(opt);
        const SimplexMap f = make_map(spec);

        SolverConfig cfg;
        cfg.residual_tol = opt.tol;
        cfg.m_max = opt.m_max;
        int first = opt.m.value_or(2);
        if (spec.kind == "pl_from_labels" && opt.labels)
            first = read_label_file(*opt.labels).mesh();
        if (first < 1)
            return input_error("--m: must be >= 1");
        cfg.m_schedule = doubling_schedule(first, std::max(first, opt.m_max));
        try
        {
            cfg.validate();
        }
        catch (const InvalidArgument& e)
        {
            return input_error(std::string("--tol/--m-max: ") + e.what());
        }

        const ApproxFixedPoint a = solve(f, cfg);
        json result = a;
        result.erase("trace");
        result["dim"] = f.dim();
        result["map"] = f.name();
        if (spec.kind == "poly1d")
            result["t"] = a.point.at(1);

        bool bounds = true;
        for (const auto& r : a.trace)
            bounds = bounds && r.bound_holds;

        out.report.command = "solve";
        out.report.config = config_echo(opt);
        out.report.result = result;
        out.report.trace = a.trace;
        out.report.checks = json{{"bound_chain_holds", bounds},
                                 {"cauchy", extract_cauchy(a.trace)},
                                 {"converged", a.converged},
                                 {"trivial", a.vertex_hit}};
        out.exit_code = a.converged ? 0 : 2;
    }
    catch (const Error& e)
    {
        return input_error(e.what());
    }
    out.report.timing_ms = elapsed_ms(start);
    return out;
}

CommandOutcome cmd_sperner(const CliOptions& opt)
{
    const auto start = std::chrono::steady_clock::now();
    CommandOutcome out;
    try
    {
        const LabeledGrid lg = load_labels(opt);
        const auto conformance = validate_sperner(lg);
        if (!conformance.ok())
            return violation_error(conformance);

        const Grid& g = lg.grid();
        const SearchResult search = enumerate_fully_labeled(lg);
        const DualGraph dual = build_dual_graph(lg);
        const HandshakeReport hs = handshake_report(dual.as_graph());
        const PathFollowResult walk = path_follow(lg);

        json cells = json::array();
        for (int c : search.fully_labeled)
            cells.push_back(g.cell(c));

        long long face_count = 1;
        if (lg.dim() >= 2)
            face_count = static_cast<long long>(enumerate_fully_labeled(restrict_to_last_face(lg)).fully_labeled.size());
        const int boundary_doors = dual.degree(dual.outside());
        const bool in_enum =
            std::binary_search(search.fully_labeled.begin(), search.fully_labeled.end(), walk.cell);

        json result = search;
        result["n"] = lg.dim();
        result["m"] = lg.mesh();
        result["cell_count"] = g.cell_count();
        result["cells"] = cells;
        result["degree_histogram"] = dual.degree_histogram();
        result["handshake"] = hs;
        result["path_follow"] = json{{"cell", walk.cell}, {"steps", walk.steps}, {"paths", walk.paths}};

        out.report.command = "sperner";
        out.report.config = config_echo(opt);
        out.report.result = result;
        out.report.checks = json{{"parity_odd", search.count_parity == Parity::Odd},
                                 {"handshake", hs.holds()},
                                 {"path_follow_in_enumeration", in_enum},
                                 {"boundary_doors", boundary_doors},
                                 {"face_fully_labeled", face_count},
                                 {"boundary_doors_match_face", boundary_doors == face_count}};
    }
    catch (const Error& e)
    {
        return input_error(e.what());
    }
    out.report.timing_ms = elapsed_ms(start);
    return out;
}

CommandOutcome cmd_reverse(const CliOptions& opt)
{
    const auto start = std::chrono::steady_clock::now();
    CommandOutcome out;
    try
    {
        const LabeledGrid lg = load_labels(opt);
        const auto conformance = validate_sperner(lg);
        if (!conformance.ok())
            return violation_error(conformance);

        SolverConfig cfg;
        cfg.residual_tol = opt.tol;
        cfg.m_max = opt.m_max;
        const PLMap map = build_pl_map(lg, opt.tau);
        ReverseResult rr;
        try
        {
            rr = fully_labeled_from_fixpoint(lg, cfg, opt.tau);
        }
        catch (const NotConverged& e)
        {
            out.exit_code = 2;
            out.errors.push_back(e.what());
            return out;
        }
        const auto exact = pl_fixpoint_exact(map, rr.cell);
        const SearchResult search = enumerate_fully_labeled(lg);

        json result = json::object();
        result["n"] = lg.dim();
        result["m"] = lg.mesh();
        result["tau"] = rr.tau;
        result["point"] = rr.point;
        result["residual"] = rr.solution.residual;
        result["cell"] = lg.grid().cell(rr.cell);
        result["cell_labels"] = lg.cell_labels(rr.cell);
        result["fully_labeled"] = rr.fully_labeled;
        result["enumeration"] = search.fully_labeled;
        double exact_residual = std::numeric_limits<double>::quiet_NaN();
        double gap = std::numeric_limits<double>::quiet_NaN();
        if (exact)
        {
            result["exact_point"] = exact->vec();
            exact_residual = residual(map.as_simplex_map(), *exact).linf;
            gap = distance_inf(exact->coords(), rr.point);
        }
        else
        {
            result["exact_point"] = nullptr;
        }
        result["exact_residual"] = exact_residual;
        result["solver_to_exact"] = gap;
        const bool agreement = rr.fully_labeled && rr.in_enumeration && exact.has_value() && exact_residual <= 1e-12;
        result["agreement"] = agreement;

        out.report.command = "reverse";
        out.report.config = config_echo(opt);
        out.report.result = result;
        out.report.trace = rr.solution.trace;
        out.report.checks = json{{"fully_labeled", rr.fully_labeled},
                                 {"in_enumeration", rr.in_enumeration},
                                 {"exact_fixpoint", exact.has_value()},
                                 {"agreement", agreement}};
        out.exit_code = agreement ? 0 : 2;
    }
    catch (const Error& e)
    {
        return input_error(e.what());
    }
    out.report.timing_ms = elapsed_ms(start);
    return out;
}

CommandOutcome cmd_render(const CliOptions& opt)
{
    const auto start = std::chrono::steady_clock::now();
    CommandOutcome out;
    try
    {
        std::optional<LabeledGrid> lg;
        if (!opt.fn.empty() && !opt.labels && !(opt.random && opt.fn == "pl_from_labels"))
        {
            const SimplexMap f = make_map(spec_from(opt));
            if (f.dim() != 2)
                return input_error("render requires n=2 (got n=" + std::to_string(f.dim()) + ")");
            if (!opt.m)
                return input_error("--m: required when rendering a map labeling");
            auto labeled = label_grid(f, make_grid(2, *opt.m));
            if (auto* hit = std::get_if<FixedPointHit>(&labeled))
            {
                std::string where;
                for (double x : hit->vertex.vec())
                    where += (where.empty() ? "" : ",") + format_double(x);
                return input_error("--fn: map fixes the vertex (" + where + "); there is no labeling to render");
            }
            lg = std::get<LabeledGrid>(std::move(labeled));
        }
        else
        {
            if (opt.n && *opt.n != 2)
                return input_error("render requires n=2 (got n=" + std::to_string(*opt.n) + ")");
            lg = load_labels(opt);
        }
        if (lg->dim() != 2)
            return input_error("render requires n=2 (got n=" + std::to_string(lg->dim()) + ")");

        out.svg = render_svg(*lg);
        const auto cells = lg->grid().cell_count();
        std::vector<int> full;
        for (std::size_t c = 0; c < cells; ++c)
            if (is_fully_labeled(lg->cell_labels(static_cast<int>(c))))
                full.push_back(static_cast<int>(c));
        out.report.command = "render";
        out.report.config = config_echo(opt);
        out.report.result = json{{"n", 2}, {"m", lg->mesh()}, {"cell_count", cells}, {"shaded", full}};
        out.report.checks = json{{"parity_odd", full.size() % 2 == 1}};
    }
    catch (const Error& e)
    {
        return input_error(e.what());
    }
    out.report.timing_ms = elapsed_ms(start);
    return out;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Approximate Brouwer fixed points by Sperner labeling", "sperner"};
    app.require_subcommand(1);

    struct Raw
    {
        int n = 0, m = 0, m_max = 1 << 22;
        std::string fn, point, coeffs, labels, json_path, svg_path;
        std::uint64_t random = 0;
        double tol = 1e-6, tau = 0.0;
    } raw;
    struct Flags
    {
        CLI::Option *n, *m, *labels, *random, *tau, *json, *svg;
    };
    std::map<std::string, Flags> flags;

    auto add = [&](const std::string& name, const std::string& help) {
        CLI::App* sub = app.add_subcommand(name, help);
        Flags f{};
        f.n = sub->add_option("--n", raw.n, "dimension of the simplex");
        f.m = sub->add_option("--m", raw.m, "mesh parameter (first level for solve)");
        sub->add_option("--fn", raw.fn, "rotation, identity, constant, affine_stochastic, poly1d, pl_from_labels");
        sub->add_option("--point", raw.point, "constant map target, comma separated");
        sub->add_option("--coeffs", raw.coeffs, "poly1d coefficients (ascending) or row-major matrix");
        f.labels = sub->add_option("--labels", raw.labels, "label file");
        f.random = sub->add_option("--random", raw.random, "seed for a random conforming labeling");
        sub->add_option("--tol", raw.tol, "target max-norm residual");
        sub->add_option("--m-max", raw.m_max, "largest mesh parameter");
        f.tau = sub->add_option("--tau", raw.tau, "displacement of the PL map");
        f.json = sub->add_option("--json", raw.json_path, "write the report here instead of stdout");
        f.svg = sub->add_option("--svg", raw.svg_path, "SVG output path (render)");
        flags[name] = f;
        return sub;
    };
    add("solve", "approximate a fixed point by refinement");
    add("sperner", "enumerate fully labeled cells of a labeling");
    add("reverse", "recover a fully labeled cell from the PL map's fixed point");
    add("render", "draw a 2-dimensional labeled grid as SVG");

    std::vector<const char*> argv;
    for (const auto& a : args)
        argv.push_back(a.c_str());
    try
    {
        app.parse(static_cast<int>(argv.size()), argv.data());
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    const CLI::App* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    const Flags& f = flags.at(name);
    CliOptions opt;
    if (f.n->count())
        opt.n = raw.n;
    if (f.m->count())
        opt.m = raw.m;
    opt.fn = raw.fn;
    opt.point = raw.point;
    opt.coeffs = raw.coeffs;
    if (f.labels->count())
        opt.labels = raw.labels;
    if (f.random->count())
        opt.random = raw.random;
    opt.tol = raw.tol;
    opt.m_max = raw.m_max;
    if (f.tau->count())
        opt.tau = raw.tau;
    if (f.json->count())
        opt.json_path = raw.json_path;
    if (f.svg->count())
        opt.svg_path = raw.svg_path;

    CommandOutcome result;
    if (name == "solve")
        result = cmd_solve(opt);
    else if (name == "sperner")
        result = cmd_sperner(opt);
    else if (name == "reverse")
        result = cmd_reverse(opt);
    else
        result = cmd_render(opt);

    for (const auto& e : result.errors)
        err << "error: " << e << "\n";
    if (result.exit_code == 1 || (result.exit_code == 2 && !result.errors.empty()))
        return result.exit_code;

    auto write_file = [&](const std::string& path, const std::string& text) {
        std::ofstream file(path, std::ios::binary);
        file << text;
        if (!file)
        {
            err << "error: cannot write " << path << "\n";
            return false;
        }
        return true;
    };

    const std::string report = emit_json(result.report);
    if (name == "render" && !opt.svg_path)
    {
        out << result.svg;
        if (opt.json_path && !write_file(*opt.json_path, report))
            return 1;
        return result.exit_code;
    }
    if (name == "render" && !write_file(*opt.svg_path, result.svg))
        return 1;
    if (opt.json_path)
    {
        if (!write_file(*opt.json_path, report))
            return 1;
    }
    else
    {
        out << report;
    }
    return result.exit_code;
}

}  // namespace sperner

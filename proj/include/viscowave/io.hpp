#pragma once

// Artifact plumbing: versioned numeric CSV tables, JSON reports, declarative
// experiment configs (flat key = value text, also accepted as JSON), FNV-hash
// artifact naming, atomic writes, and static SVG zone maps.
//
// Determinism contract: identical configs serialize identically, hash
// identically, and every writer here emits byte-identical output for equal
// inputs (no timestamps, no locale dependence, %.17g round-trip floats).

#include "coefficients.hpp"
#include "phase_space.hpp"
#include "quadrature.hpp"

#include "json.hpp"

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace vw {

namespace detail {

// Shortest exact decimal: %.17g always round-trips a double.
inline std::string fmt_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::string fmt_g6(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Atomic text output: write to a sibling temp file, then rename into place.
// ---------------------------------------------------------------------------

inline void write_text_atomic(const std::string& path, std::string_view text) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw UsageError("cannot open '" + tmp + "' for writing");
        out.write(text.data(), static_cast<std::streamsize>(text.size()));
        if (!out) throw UsageError("short write to '" + tmp + "'");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) throw UsageError("cannot move '" + tmp + "' to '" + path + "': " + ec.message());
}

// ---------------------------------------------------------------------------
// CSV tables (schema v1): one comment header line, one column line, numeric
// rows at full double precision.
// ---------------------------------------------------------------------------

inline constexpr std::string_view csv_schema_line = "# viscowave-csv v1";

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void add_row(std::vector<double> row) {
        if (row.size() != columns.size())
            throw UsageError("csv row width does not match the column count");
        rows.push_back(std::move(row));
    }
};

inline std::string to_csv(const CsvTable& t) {
    if (t.columns.empty()) throw UsageError("csv table requires at least one column");
    std::string out(csv_schema_line);
    out += '\n';
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        if (i) out += ',';
        out += t.columns[i];
    }
    out += '\n';
    for (const auto& row : t.rows) {
        if (row.size() != t.columns.size())
            throw UsageError("csv row width does not match the column count");
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += detail::fmt_g17(row[i]);
        }
        out += '\n';
    }
    return out;
}

inline void write_csv(const std::string& path, const CsvTable& t) {
    write_text_atomic(path, to_csv(t));
}

inline CsvTable read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open csv file '" + path + "'");
    std::string line;
    auto chomp_cr = [](std::string& s) {
        if (!s.empty() && s.back() == '\r') s.pop_back();
    };
    if (!std::getline(in, line)) throw UsageError("'" + path + "' is not a viscowave-csv v1 file");
    chomp_cr(line);
    if (line != csv_schema_line)
        throw UsageError("'" + path + "' is not a viscowave-csv v1 file");
    CsvTable t;
    if (!std::getline(in, line)) throw UsageError("'" + path + "' is missing the csv column line");
    chomp_cr(line);
    if (line.empty()) throw UsageError("'" + path + "' is missing the csv column line");
    std::size_t pos = 0;
    while (pos <= line.size()) {
        const std::size_t comma = line.find(',', pos);
        t.columns.push_back(line.substr(pos, comma == std::string::npos ? comma : comma - pos));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    std::size_t lineno = 2;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<double> row;
        row.reserve(t.columns.size());
        const char* p = line.c_str();
        char* end = nullptr;
        for (;;) {
            row.push_back(std::strtod(p, &end));
            if (end == p)
                throw UsageError("'" + path + "' line " + std::to_string(lineno) +
                                 ": expected a number");
            p = end;
            if (*p == ',') {
                ++p;
                continue;
            }
            if (*p == '\0' || *p == '\r') break;
            throw UsageError("'" + path + "' line " + std::to_string(lineno) +
                             ": unexpected character '" + std::string(1, *p) + "'");
        }
        if (row.size() != t.columns.size())
            throw UsageError("'" + path + "' line " + std::to_string(lineno) +
                             ": row width does not match the column count");
        t.rows.push_back(std::move(row));
    }
    return t;
}

// ---------------------------------------------------------------------------
// JSON reports.
// ---------------------------------------------------------------------------

inline void write_json(const std::string& path, const nlohmann::json& j) {
    write_text_atomic(path, j.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// Config documents: flat key = value text ('#' and ';' comments, optional
// [section] headers mapping to "section." key prefixes) or a JSON object
// (nested objects flatten with '.'). Values stay strings until typed access.
// ---------------------------------------------------------------------------

struct ConfigDoc {
    std::map<std::string, std::string> kv;

    bool has(const std::string& key) const { return kv.count(key) != 0; }

    std::string get(const std::string& key, std::string fallback = {}) const {
        auto it = kv.find(key);
        return it == kv.end() ? std::move(fallback) : it->second;
    }

    double get_num(const std::string& key, double fallback) const {
        auto it = kv.find(key);
        if (it == kv.end()) return fallback;
        char* end = nullptr;
        const double v = std::strtod(it->second.c_str(), &end);
        if (end == it->second.c_str() || *end != '\0')
            throw ConfigError("config key '" + key + "': '" + it->second + "' is not a number");
        return v;
    }

    std::vector<double> get_list(const std::string& key, std::vector<double> fallback) const {
        auto it = kv.find(key);
        if (it == kv.end()) return fallback;
        std::vector<double> out;
        const std::string& s = it->second;
        const char* p = s.c_str();
        char* end = nullptr;
        while (*p != '\0') {
            const double v = std::strtod(p, &end);
            if (end == p)
                throw ConfigError("config key '" + key + "': '" + s + "' is not a number list");
            out.push_back(v);
            p = end;
            while (*p == ',' || *p == ' ') ++p;
        }
        if (out.empty())
            throw ConfigError("config key '" + key + "': empty list");
        return out;
    }

    // Canonical serialization: sorted keys, one per line. The artifact hash
    // is computed over exactly this text.
    std::string canonical() const {
        std::string out;
        for (const auto& [k, v] : kv) {
            out += k;
            out += " = ";
            out += v;
            out += '\n';
        }
        return out;
    }
};

namespace detail {

inline std::string_view strip(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r' ||
                          s.front() == '\n')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' ||
                          s.back() == '\n')) {
        s.remove_suffix(1);
    }
    return s;
}

}  // namespace detail

inline ConfigDoc parse_config_text(std::string_view text) {
    ConfigDoc doc;
    std::string section;
    std::size_t lineno = 0;
    while (!text.empty()) {
        const std::size_t nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
        ++lineno;
        line = detail::strip(line);
        if (line.empty() || line.front() == '#' || line.front() == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config line " + std::to_string(lineno) +
                                  ": unterminated [section]");
            section = std::string(detail::strip(line.substr(1, line.size() - 2)));
            if (!section.empty()) section += '.';
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key(detail::strip(line.substr(0, eq)));
        const std::string val(detail::strip(line.substr(eq + 1)));
        if (key.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
        doc.kv[section + key] = val;
    }
    return doc;
}

inline ConfigDoc parse_config_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("json config must be an object");
    ConfigDoc doc;
    std::function<void(const nlohmann::json&, const std::string&)> walk =
        [&](const nlohmann::json& node, const std::string& prefix) {
            for (auto it = node.begin(); it != node.end(); ++it) {
                const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
                const nlohmann::json& v = it.value();
                if (v.is_object()) {
                    walk(v, key);
                } else if (v.is_array()) {
                    std::string list;
                    for (const auto& e : v) {
                        if (!e.is_number())
                            throw ConfigError("config key '" + key +
                                              "': arrays must be numeric");
                        if (!list.empty()) list += ',';
                        list += detail::fmt_g17(e.get<double>());
                    }
                    doc.kv[key] = list;
                } else if (v.is_string()) {
                    doc.kv[key] = v.get<std::string>();
                } else if (v.is_boolean()) {
                    doc.kv[key] = v.get<bool>() ? "true" : "false";
                } else if (v.is_number()) {
                    doc.kv[key] = detail::fmt_g17(v.get<double>());
                } else {
                    throw ConfigError("config key '" + key + "': unsupported value type");
                }
            }
        };
    walk(j, "");
    return doc;
}

// Loads either format: leading '{' (after whitespace) selects JSON.
inline ConfigDoc load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const std::string_view stripped = detail::strip(text);
    if (!stripped.empty() && stripped.front() == '{') {
        nlohmann::json j = nlohmann::json::parse(stripped, nullptr, false);
        if (j.is_discarded()) throw ConfigError("config file '" + path + "' is not valid json");
        return parse_config_json(j);
    }
    return parse_config_text(text);
}

inline std::uint64_t config_hash(const ConfigDoc& doc) { return fnv1a64(doc.canonical()); }

// Deterministic artifact file name: <prefix>-<16 hex digits>.<ext>.
inline std::string artifact_name(std::string_view prefix, const ConfigDoc& doc,
                                 std::string_view ext) {
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx",
                  static_cast<unsigned long long>(config_hash(doc)));
    std::string out(prefix);
    out += '-';
    out += hex;
    out += '.';
    out += ext;
    return out;
}

// ---------------------------------------------------------------------------
// Typed experiment configuration.
// ---------------------------------------------------------------------------

struct TimeGridSpec {
    double t_min = 0.01;         // first positive output time (log spacing)
    double t_max = 10.0;
    unsigned points = 200;       // positive outputs; t = 0 is always included
    std::string spacing = "log";  // "log" or "lin"

    std::vector<double> times() const {
        if (!(t_max > 0.0)) throw ConfigError("time grid requires t_max > 0");
        if (points < 2) throw ConfigError("time grid requires at least 2 points");
        if (spacing == "lin") {
            auto ts = linspace(0.0, t_max, points + 1);
            return ts;
        }
        if (spacing != "log")
            throw ConfigError("unknown time grid spacing '" + spacing + "' (log or lin)");
        if (!(t_min > 0.0) || !(t_min < t_max))
            throw ConfigError("log time grid requires 0 < t_min < t_max");
        std::vector<double> ts{0.0};
        auto tail = logspace(t_min, t_max, points);
        ts.insert(ts.end(), tail.begin(), tail.end());
        return ts;
    }
};

struct RGridSpec {
    double r_min = 1e-3, r_max = 12.0;
    unsigned panels = 25, nodes = 16;

    PanelGrid grid() const { return PanelGrid::make_log(r_min, r_max, panels, nodes); }
};

struct ExperimentConfig {
    std::string coefficient = "power:-0.5";
    std::string u0 = "gaussian:1";
    std::string u1 = "gaussian:1";
    unsigned dimension = 3;
    std::vector<double> betas = {2.0};
    TimeGridSpec time_grid;
    RGridSpec r_grid;
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    std::string theorem;          // empty: inferred from the coefficient's regime
    std::string abscissa;         // empty: regime default
    double fit_t_lo = 0.0, fit_t_hi = 0.0;  // 0: fit window = full positive grid
    double margin = 0.05;         // parabolic-verdict slope margin floor
    double ratio_cap = 10.0;      // envelope verification sup-ratio cap
    double kappa = 0.05;          // loss parameter for the kappa-shifted envelope
    double mode_r = 1.0;          // single-mode subcommands
    double window_s = 0.0, window_t = 10.0;  // comparison window
    std::string kind = "hyperbolic";         // surrogate kind
    std::string out_dir = "out";
    std::uint64_t seed = 1234;

    static const std::set<std::string>& known_keys() {
        static const std::set<std::string> keys{
            "coefficient", "u0", "u1", "dimension", "betas", "t_min", "t_max", "t_points",
            "t_spacing", "r_min", "r_max", "r_panels", "r_nodes", "rel_tol", "abs_tol",
            "theorem", "abscissa", "fit_t_lo", "fit_t_hi", "margin", "ratio_cap", "kappa",
            "mode_r", "window_s", "window_t", "kind", "out_dir", "seed"};
        return keys;
    }

    static ExperimentConfig from_doc(const ConfigDoc& doc) {
        for (const auto& [k, v] : doc.kv)
            if (!known_keys().count(k))
                throw ConfigError("unknown config key '" + k + "'");
        ExperimentConfig ec;
        ec.coefficient = doc.get("coefficient", ec.coefficient);
        ec.u0 = doc.get("u0", ec.u0);
        ec.u1 = doc.get("u1", ec.u1);
        ec.dimension = static_cast<unsigned>(doc.get_num("dimension", ec.dimension));
        ec.betas = doc.get_list("betas", ec.betas);
        ec.time_grid.t_min = doc.get_num("t_min", ec.time_grid.t_min);
        ec.time_grid.t_max = doc.get_num("t_max", ec.time_grid.t_max);
        ec.time_grid.points = static_cast<unsigned>(doc.get_num("t_points", ec.time_grid.points));
        ec.time_grid.spacing = doc.get("t_spacing", ec.time_grid.spacing);
        ec.r_grid.r_min = doc.get_num("r_min", ec.r_grid.r_min);
        ec.r_grid.r_max = doc.get_num("r_max", ec.r_grid.r_max);
        ec.r_grid.panels = static_cast<unsigned>(doc.get_num("r_panels", ec.r_grid.panels));
        ec.r_grid.nodes = static_cast<unsigned>(doc.get_num("r_nodes", ec.r_grid.nodes));
        ec.rel_tol = doc.get_num("rel_tol", ec.rel_tol);
        ec.abs_tol = doc.get_num("abs_tol", ec.abs_tol);
        ec.theorem = doc.get("theorem", ec.theorem);
        ec.abscissa = doc.get("abscissa", ec.abscissa);
        ec.fit_t_lo = doc.get_num("fit_t_lo", ec.fit_t_lo);
        ec.fit_t_hi = doc.get_num("fit_t_hi", ec.fit_t_hi);
        ec.margin = doc.get_num("margin", ec.margin);
        ec.ratio_cap = doc.get_num("ratio_cap", ec.ratio_cap);
        ec.kappa = doc.get_num("kappa", ec.kappa);
        ec.mode_r = doc.get_num("mode_r", ec.mode_r);
        ec.window_s = doc.get_num("window_s", ec.window_s);
        ec.window_t = doc.get_num("window_t", ec.window_t);
        ec.kind = doc.get("kind", ec.kind);
        ec.out_dir = doc.get("out_dir", ec.out_dir);
        ec.seed = static_cast<std::uint64_t>(doc.get_num("seed", double(ec.seed)));
        return ec;
    }

    // Canonical document carrying every key; equal configs serialize equally.
    ConfigDoc to_doc() const {
        ConfigDoc d;
        d.kv["coefficient"] = coefficient;
        d.kv["u0"] = u0;
        d.kv["u1"] = u1;
        d.kv["dimension"] = std::to_string(dimension);
        std::string bl;
        for (double b : betas) {
            if (!bl.empty()) bl += ',';
            bl += detail::fmt_g17(b);
        }
        d.kv["betas"] = bl;
        d.kv["t_min"] = detail::fmt_g17(time_grid.t_min);
        d.kv["t_max"] = detail::fmt_g17(time_grid.t_max);
        d.kv["t_points"] = std::to_string(time_grid.points);
        d.kv["t_spacing"] = time_grid.spacing;
        d.kv["r_min"] = detail::fmt_g17(r_grid.r_min);
        d.kv["r_max"] = detail::fmt_g17(r_grid.r_max);
        d.kv["r_panels"] = std::to_string(r_grid.panels);
        d.kv["r_nodes"] = std::to_string(r_grid.nodes);
        d.kv["rel_tol"] = detail::fmt_g17(rel_tol);
        d.kv["abs_tol"] = detail::fmt_g17(abs_tol);
        d.kv["theorem"] = theorem;
        d.kv["abscissa"] = abscissa;
        d.kv["fit_t_lo"] = detail::fmt_g17(fit_t_lo);
        d.kv["fit_t_hi"] = detail::fmt_g17(fit_t_hi);
        d.kv["margin"] = detail::fmt_g17(margin);
        d.kv["ratio_cap"] = detail::fmt_g17(ratio_cap);
        d.kv["kappa"] = detail::fmt_g17(kappa);
        d.kv["mode_r"] = detail::fmt_g17(mode_r);
        d.kv["window_s"] = detail::fmt_g17(window_s);
        d.kv["window_t"] = detail::fmt_g17(window_t);
        d.kv["kind"] = kind;
        d.kv["out_dir"] = out_dir;
        d.kv["seed"] = std::to_string(seed);
        return d;
    }
};

// ---------------------------------------------------------------------------
// SVG zone map: log-log (t, r) raster colored by zone label, with the
// separating lines overlaid. Contiguous same-label cells merge vertically,
// keeping the file compact. Output is fully deterministic.
// ---------------------------------------------------------------------------

struct SvgOptions {
    double width = 760.0, height = 520.0;
    unsigned t_samples = 140, r_samples = 110;
    double t_min = 1e-2, t_max = 1e4;
    double r_min = 1e-2, r_max = 1e2;
};

namespace detail {

inline const char* zone_fill(ZoneLabel z) {
    switch (z) {
        case ZoneLabel::Hyperbolic: return "#4e79a7";
        case ZoneLabel::Reduced: return "#f2b134";
        case ZoneLabel::PseudoDifferential: return "#76b7b2";
        case ZoneLabel::Elliptic: return "#e15759";
    }
    return "#888888";
}

}  // namespace detail

inline std::string zone_map_svg(const Coefficient& c, const ZoneConstants& zc = {},
                                const SvgOptions& o = {}) {
    if (!has_zone_geometry(c.regime))
        throw ZoneError("no zone decomposition to draw for regime " +
                        std::string(to_string(c.regime)));
    const double ml = 64.0, mr = 16.0, mt = 34.0, mb = 46.0;  // plot margins
    const double pw = o.width - ml - mr, ph = o.height - mt - mb;
    const double lt0 = std::log10(o.t_min), lt1 = std::log10(o.t_max);
    const double lr0 = std::log10(o.r_min), lr1 = std::log10(o.r_max);
    auto x_of = [&](double lt) { return ml + (lt - lt0) / (lt1 - lt0) * pw; };
    auto y_of = [&](double lr) { return mt + (lr1 - lr) / (lr1 - lr0) * ph; };

    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + detail::fmt_g6(o.width) +
         "\" height=\"" + detail::fmt_g6(o.height) + "\" viewBox=\"0 0 " +
         detail::fmt_g6(o.width) + " " + detail::fmt_g6(o.height) + "\">\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
    s += "<text x=\"" + detail::fmt_g6(ml) + "\" y=\"22\" font-family=\"sans-serif\" "
         "font-size=\"14\">zones: " + c.id + " (regime " + to_string(c.regime) + ")</text>\n";

    // Raster: per t-column, merge contiguous same-label r-cells.
    const double dlt = (lt1 - lt0) / o.t_samples;
    const double dlr = (lr1 - lr0) / o.r_samples;
    for (unsigned i = 0; i < o.t_samples; ++i) {
        const double lt = lt0 + (i + 0.5) * dlt;
        const double t = std::pow(10.0, lt);
        unsigned j = 0;
        while (j < o.r_samples) {
            const double lr = lr0 + (j + 0.5) * dlr;
            const ZoneLabel z = classify(c.regime, c, t, std::pow(10.0, lr), zc);
            unsigned j2 = j + 1;
            while (j2 < o.r_samples) {
                const double lr2 = lr0 + (j2 + 0.5) * dlr;
                if (classify(c.regime, c, t, std::pow(10.0, lr2), zc) != z) break;
                ++j2;
            }
            const double x = x_of(lt0 + i * dlt), y = y_of(lr0 + j2 * dlr);
            s += "<rect x=\"" + detail::fmt_g6(x) + "\" y=\"" + detail::fmt_g6(y) + "\" width=\"" +
                 detail::fmt_g6(pw / o.t_samples + 0.5) + "\" height=\"" +
                 detail::fmt_g6(double(j2 - j) * ph / o.r_samples + 0.5) + "\" fill=\"" +
                 detail::zone_fill(z) + "\"/>\n";
            j = j2;
        }
    }

    // Separating lines: t(r) sampled over the r range.
    for (const std::string& name : curve_names(c.regime)) {
        std::string pts;
        for (unsigned j = 0; j <= 4 * o.r_samples; ++j) {
            const double lr = lr0 + (lr1 - lr0) * double(j) / double(4 * o.r_samples);
            double tb;
            try {
                tb = separating_line(c.regime, c, name, std::pow(10.0, lr), zc);
            } catch (const NoRootError&) {
                continue;
            }
            if (!(tb >= o.t_min) || !(tb <= o.t_max)) continue;
            if (!pts.empty()) pts += ' ';
            pts += detail::fmt_g6(x_of(std::log10(tb))) + "," + detail::fmt_g6(y_of(lr));
        }
        if (!pts.empty())
            s += "<polyline fill=\"none\" stroke=\"#222222\" stroke-width=\"1.6\" points=\"" +
                 pts + "\"/>\n";
    }

    // Axes and legend.
    s += "<rect x=\"" + detail::fmt_g6(ml) + "\" y=\"" + detail::fmt_g6(mt) + "\" width=\"" +
         detail::fmt_g6(pw) + "\" height=\"" + detail::fmt_g6(ph) +
         "\" fill=\"none\" stroke=\"#000000\"/>\n";
    for (int e = int(std::ceil(lt0)); e <= int(std::floor(lt1)); ++e) {
        const double x = x_of(e);
        s += "<line x1=\"" + detail::fmt_g6(x) + "\" y1=\"" + detail::fmt_g6(mt + ph) +
             "\" x2=\"" + detail::fmt_g6(x) + "\" y2=\"" + detail::fmt_g6(mt + ph + 5) +
             "\" stroke=\"#000000\"/>\n";
        s += "<text x=\"" + detail::fmt_g6(x) + "\" y=\"" + detail::fmt_g6(mt + ph + 20) +
             "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">1e" +
             std::to_string(e) + "</text>\n";
    }
    for (int e = int(std::ceil(lr0)); e <= int(std::floor(lr1)); ++e) {
        const double y = y_of(e);
        s += "<line x1=\"" + detail::fmt_g6(ml - 5) + "\" y1=\"" + detail::fmt_g6(y) +
             "\" x2=\"" + detail::fmt_g6(ml) + "\" y2=\"" + detail::fmt_g6(y) +
             "\" stroke=\"#000000\"/>\n";
        s += "<text x=\"" + detail::fmt_g6(ml - 8) + "\" y=\"" + detail::fmt_g6(y + 4) +
             "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">1e" +
             std::to_string(e) + "</text>\n";
    }
    s += "<text x=\"" + detail::fmt_g6(ml + pw / 2) + "\" y=\"" +
         detail::fmt_g6(o.height - 8) +
         "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">t</text>\n";
    s += "<text x=\"16\" y=\"" + detail::fmt_g6(mt + ph / 2) +
         "\" font-family=\"sans-serif\" font-size=\"12\">r</text>\n";
    double lx = ml + 8.0;
    for (ZoneLabel z : {ZoneLabel::Hyperbolic, ZoneLabel::Reduced,
                        ZoneLabel::PseudoDifferential, ZoneLabel::Elliptic}) {
        s += "<rect x=\"" + detail::fmt_g6(lx) + "\" y=\"" + detail::fmt_g6(mt + 6) +
             "\" width=\"12\" height=\"12\" fill=\"" + detail::zone_fill(z) +
             "\" stroke=\"#000000\" stroke-width=\"0.5\"/>\n";
        s += "<text x=\"" + detail::fmt_g6(lx + 16) + "\" y=\"" + detail::fmt_g6(mt + 16) +
             "\" font-family=\"sans-serif\" font-size=\"11\">" + to_string(z) + "</text>\n";
        lx += 16.0 + 7.2 * std::string(to_string(z)).size() + 14.0;
    }
    s += "</svg>\n";
    return s;
}

}  // namespace vw

#include "wsnsis/config.hpp"

#include "wsnsis/error.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <functional>
#include <map>
#include <sstream>

namespace wsnsis {

namespace {

constexpr std::array<std::pair<Command, std::string_view>, 8> kCommands{{
    {Command::GenerateGraph, "generate-graph"},
    {Command::RunMmc, "run-mmc"},
    {Command::RunMc, "run-mc"},
    {Command::Temporal, "temporal"},
    {Command::SweepBeta, "sweep-beta"},
    {Command::SweepGamma, "sweep-gamma"},
    {Command::SweepRatio, "sweep-ratio"},
    {Command::Threshold, "threshold"},
}};

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

/// Thrown by value parsers; the caller adds key and location.
struct BadValue {
    std::string reason;
};

double to_double(std::string_view text) {
    double x = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
    if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(x)) {
        throw BadValue{"expected a number, got '" + std::string(text) + "'"};
    }
    return x;
}

std::uint64_t to_uint(std::string_view text) {
    std::uint64_t x = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw BadValue{"expected a non-negative integer, got '" + std::string(text) + "'"};
    }
    return x;
}

bool to_bool(std::string_view text) {
    if (text == "true") return true;
    if (text == "false") return false;
    throw BadValue{"expected true or false, got '" + std::string(text) + "'"};
}

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> parts;
    if (trim(text).empty()) return parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(sep, start);
        parts.push_back(trim(text.substr(start, pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

std::vector<double> to_double_list(std::string_view text) {
    std::vector<double> out;
    for (auto part : split(text, ',')) out.push_back(to_double(part));
    return out;
}

std::vector<std::pair<double, double>> to_schedule_list(std::string_view text) {
    std::vector<std::pair<double, double>> out;
    for (auto part : split(text, ',')) {
        const auto fields = split(part, ':');
        if (fields.size() != 2) throw BadValue{"expected u:v pairs, got '" + std::string(part) + "'"};
        out.emplace_back(to_double(fields[0]), to_double(fields[1]));
    }
    return out;
}

void require_unit(double x) {
    if (!(x >= 0.0 && x <= 1.0)) throw BadValue{"value " + format_double(x) + " is outside [0, 1]"};
}

void require_unit_list(const std::vector<double>& xs) {
    std::for_each(xs.begin(), xs.end(), require_unit);
}

std::string join(const std::vector<double>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ", ";
        out += format_double(xs[i]);
    }
    return out;
}

std::string join(const std::vector<std::pair<double, double>>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ", ";
        out += format_double(xs[i].first) + ":" + format_double(xs[i].second);
    }
    return out;
}

struct Field {
    std::string_view section;
    std::string_view key;
    std::function<void(ExperimentSpec&, std::string_view)> set;
    std::function<std::string(const ExperimentSpec&)> get;
};

const std::vector<Field>& fields() {
    static const std::vector<Field> table{
        {"general", "command", [](auto& s, auto v) {
             try { s.command = parse_command(v); } catch (const ValidationError& e) { throw BadValue{e.what()}; }
         }, [](const auto& s) { return std::string(to_string(s.command)); }},

        {"graph", "file", [](auto& s, auto v) { s.graph_file = std::string(v); },
         [](const auto& s) { return s.graph_file; }},
        {"graph", "n", [](auto& s, auto v) { s.n = to_uint(v); }, [](const auto& s) { return std::to_string(s.n); }},
        {"graph", "m", [](auto& s, auto v) { s.m = to_uint(v); }, [](const auto& s) { return std::to_string(s.m); }},
        {"graph", "seed", [](auto& s, auto v) { s.graph_seed = to_uint(v); },
         [](const auto& s) { return std::to_string(s.graph_seed); }},

        {"model", "beta", [](auto& s, auto v) { s.params.beta = to_double(v); require_unit(s.params.beta); },
         [](const auto& s) { return format_double(s.params.beta); }},
        {"model", "gamma", [](auto& s, auto v) { s.params.gamma = to_double(v); require_unit(s.params.gamma); },
         [](const auto& s) { return format_double(s.params.gamma); }},
        {"model", "u", [](auto& s, auto v) { s.params.u = to_double(v); require_unit(s.params.u); },
         [](const auto& s) { return format_double(s.params.u); }},
        {"model", "v", [](auto& s, auto v) { s.params.v = to_double(v); require_unit(s.params.v); },
         [](const auto& s) { return format_double(s.params.v); }},

        {"run", "steps", [](auto& s, auto v) { s.steps = to_uint(v); },
         [](const auto& s) { return std::to_string(s.steps); }},
        {"run", "seeds", [](auto& s, auto v) { s.seeds = to_uint(v); },
         [](const auto& s) { return std::to_string(s.seeds); }},
        {"run", "runs", [](auto& s, auto v) {
             s.runs = to_uint(v);
             if (s.runs == 0) throw BadValue{"must be at least 1"};
         }, [](const auto& s) { return std::to_string(s.runs); }},
        {"run", "sim_seed", [](auto& s, auto v) { s.sim_seed = to_uint(v); },
         [](const auto& s) { return std::to_string(s.sim_seed); }},
        {"run", "init_active", [](auto& s, auto v) {
             try { s.init_active = parse_init_activity(v); } catch (const ValidationError& e) { throw BadValue{e.what()}; }
         }, [](const auto& s) { return std::string(to_string(s.init_active)); }},
        {"run", "settle_tol", [](auto& s, auto v) {
             s.settle_tol = to_double(v);
             if (s.settle_tol < 0.0) throw BadValue{"must be non-negative"};
         }, [](const auto& s) { return format_double(s.settle_tol); }},
        {"run", "max_steps", [](auto& s, auto v) {
             s.max_steps = to_uint(v);
             if (s.max_steps == 0) throw BadValue{"must be at least 1"};
         }, [](const auto& s) { return std::to_string(s.max_steps); }},

        {"sweep", "beta_grid", [](auto& s, auto v) { s.beta_grid = to_double_list(v); require_unit_list(s.beta_grid); },
         [](const auto& s) { return join(s.beta_grid); }},
        {"sweep", "gamma_grid", [](auto& s, auto v) {
             s.gamma_grid = to_double_list(v);
             require_unit_list(s.gamma_grid);
             if (s.gamma_grid.empty()) throw BadValue{"must not be empty"};
         }, [](const auto& s) { return join(s.gamma_grid); }},
        {"sweep", "schedules", [](auto& s, auto v) {
             s.schedules = to_schedule_list(v);
             if (s.schedules.empty()) throw BadValue{"must not be empty"};
             for (auto [u, w] : s.schedules) {
                 require_unit(u);
                 require_unit(w);
                 if (w == 0.0) throw BadValue{"every v must be positive"};
             }
         }, [](const auto& s) { return join(s.schedules); }},
        {"sweep", "u_grid", [](auto& s, auto v) {
             s.u_grid = to_double_list(v);
             require_unit_list(s.u_grid);
             if (s.u_grid.empty()) throw BadValue{"must not be empty"};
         }, [](const auto& s) { return join(s.u_grid); }},
        {"sweep", "v_grid", [](auto& s, auto v) {
             s.v_grid = to_double_list(v);
             require_unit_list(s.v_grid);
             if (s.v_grid.empty()) throw BadValue{"must not be empty"};
             for (double w : s.v_grid) if (w == 0.0) throw BadValue{"every v must be positive"};
         }, [](const auto& s) { return join(s.v_grid); }},
        {"sweep", "detection_eps", [](auto& s, auto v) {
             s.detection_eps = to_double(v);
             if (!(s.detection_eps > 0.0)) throw BadValue{"must be positive"};
         }, [](const auto& s) { return format_double(s.detection_eps); }},
        {"sweep", "simulate", [](auto& s, auto v) { s.simulate = to_bool(v); },
         [](const auto& s) { return std::string(s.simulate ? "true" : "false"); }},

        {"output", "dir", [](auto& s, auto v) { s.out_dir = std::string(v); }, [](const auto& s) { return s.out_dir; }},
        {"output", "jobs", [](auto& s, auto v) {
             s.jobs = to_uint(v);
             if (s.jobs == 0) throw BadValue{"must be at least 1"};
         }, [](const auto& s) { return std::to_string(s.jobs); }},
    };
    return table;
}

const Field* find_field(std::string_view section, std::string_view key) {
    for (const auto& f : fields()) {
        if (f.section == section && f.key == key) return &f;
    }
    return nullptr;
}

bool known_section(std::string_view section) {
    return std::any_of(fields().begin(), fields().end(), [&](const Field& f) { return f.section == section; });
}

[[noreturn]] void fail(const std::string& where, std::string_view key, const std::string& reason) {
    throw ValidationError(where + ": " + std::string(key) + ": " + reason);
}

} // namespace

std::string_view to_string(Command c) {
    for (auto [cmd, name] : kCommands) {
        if (cmd == c) return name;
    }
    return "unknown";
}

Command parse_command(std::string_view text) {
    for (auto [cmd, name] : kCommands) {
        if (name == text) return cmd;
    }
    throw ValidationError("unknown command '" + std::string(text) + "'");
}

ExperimentSpec parse_config(std::string_view text, const std::vector<Override>& overrides) {
    ExperimentSpec spec;
    std::map<std::string, std::string> origin; // "section.key" -> location of last assignment

    auto assign = [&](std::string_view section, std::string_view key, std::string_view value, const std::string& where) {
        const Field* field = find_field(section, key);
        if (!field) fail(where, key, "unknown key in [" + std::string(section) + "]");
        try {
            field->set(spec, value);
        } catch (const BadValue& e) {
            fail(where, key, e.reason);
        }
        origin[std::string(section) + "." + std::string(key)] = where;
    };

    std::string section = "general";
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto end = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        const std::string where = "line " + std::to_string(line_no);

        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ValidationError(where + ": malformed section header");
            section = std::string(trim(line.substr(1, line.size() - 2)));
            if (!known_section(section)) throw ValidationError(where + ": unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ValidationError(where + ": expected key = value");
        const auto key = trim(line.substr(0, eq));
        if (key.empty()) throw ValidationError(where + ": missing key before '='");
        assign(section, key, trim(line.substr(eq + 1)), where);
    }

    for (const auto& o : overrides) assign(o.section, o.key, trim(o.value), "command line");

    auto where = [&](const char* dotted) {
        auto it = origin.find(dotted);
        return it == origin.end() ? std::string("default") : it->second;
    };

    if (!origin.contains("general.command")) throw ValidationError("missing required key: command");
    if (spec.params.u == 0.0 && spec.params.v == 0.0) {
        throw DegenerateSchedulingError(where("model.u") + " / " + where("model.v") +
                                        ": u = v = 0 leaves the sleep schedule without a stationary split");
    }
    if (spec.graph_file.empty()) {
        if (spec.m < 1) fail(where("graph.m"), "m", "must be at least 1");
        if (spec.n <= spec.m) fail(where("graph.n"), "n", "must exceed m (" + std::to_string(spec.m) + ")");
        if (spec.seeds > spec.n) fail(where("run.seeds"), "seeds", "exceeds node count " + std::to_string(spec.n));
    } else if (!std::filesystem::exists(spec.graph_file)) {
        fail(where("graph.file"), "file", "no such file '" + spec.graph_file + "'");
    }
    return spec;
}

std::string to_config_text(const ExperimentSpec& spec) {
    std::ostringstream out;
    std::string_view section;
    for (const auto& f : fields()) {
        if (f.section != section) {
            section = f.section;
            out << (out.tellp() > 0 ? "\n" : "") << '[' << section << "]\n";
        }
        out << f.key << " = " << f.get(spec) << '\n';
    }
    return out.str();
}

} // namespace wsnsis

#include "nlbs/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <type_traits>
#include <utility>

#include "nlbs/errors.hpp"

namespace nlbs {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_double(std::string_view key, std::string_view text) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
        throw ValidationError(std::string(key) + ": not a number: '" + std::string(text) + "'",
                              std::string(key));
    }
    return value;
}

std::size_t parse_count(std::string_view key, std::string_view text) {
    long long value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
        throw ValidationError(std::string(key) + ": not an integer: '" + std::string(text) + "'",
                              std::string(key));
    }
    if (value < 0) throw ValidationError(std::string(key) + ": must be nonnegative", std::string(key));
    return static_cast<std::size_t>(value);
}

std::vector<double> parse_list(std::string_view key, std::string_view text) {
    std::vector<double> out;
    while (true) {
        const auto comma = text.find(',');
        out.push_back(parse_double(key, trim(text.substr(0, comma))));
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    return out;
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

using Setter = std::function<void(RunConfig&, std::string_view key, std::string_view value)>;
using Getter = std::function<std::string(const RunConfig&)>;

struct KeyHandler {
    std::string_view key;
    Setter set;
    Getter get;
};

template <typename Access>
KeyHandler double_key(std::string_view name, Access field) {
    return {name,
            [field](RunConfig& c, std::string_view k, std::string_view v) { field(c) = parse_double(k, v); },
            [field](const RunConfig& c) { return format_double(field(const_cast<RunConfig&>(c))); }};
}

template <typename Access>
KeyHandler count_key(std::string_view name, Access field) {
    using T = std::remove_reference_t<decltype(field(std::declval<RunConfig&>()))>;
    return {name,
            [field](RunConfig& c, std::string_view k, std::string_view v) {
                field(c) = static_cast<T>(parse_count(k, v));
            },
            [field](const RunConfig& c) { return std::to_string(field(const_cast<RunConfig&>(c))); }};
}

const std::vector<KeyHandler>& handlers() {
    static const std::vector<KeyHandler> table{
        double_key("sigma", [](RunConfig& c) -> double& { return c.problem.market.sigma; }),
        double_key("r", [](RunConfig& c) -> double& { return c.problem.market.r; }),
        double_key("q", [](RunConfig& c) -> double& { return c.problem.market.q; }),
        double_key("a", [](RunConfig& c) -> double& { return c.problem.market.a; }),
        double_key("K", [](RunConfig& c) -> double& { return c.problem.market.K; }),
        double_key("T", [](RunConfig& c) -> double& { return c.problem.market.T; }),
        double_key("b", [](RunConfig& c) -> double& { return c.problem.domain.b; }),
        double_key("eps", [](RunConfig& c) -> double& { return c.problem.reg.eps; }),
        double_key("eps_smooth", [](RunConfig& c) -> double& { return c.problem.reg.smoothing; }),
        count_key("nx", [](RunConfig& c) -> std::size_t& { return c.problem.grid.nx; }),
        KeyHandler{"grid",
                   [](RunConfig& c, std::string_view k, std::string_view v) {
                       try {
                           c.problem.grid.kind = parse_grid_kind(v);
                       } catch (const std::invalid_argument&) {
                           throw ValidationError(std::string(k) + ": expected uniform or graded, got '" +
                                                     std::string(v) + "'",
                                                 std::string(k));
                       }
                   },
                   [](const RunConfig& c) { return std::string(to_string(c.problem.grid.kind)); }},
        double_key("grade_ratio", [](RunConfig& c) -> double& { return c.problem.grid.grade_ratio; }),
        count_key("nt", [](RunConfig& c) -> std::size_t& { return c.problem.solver.nt; }),
        double_key("dt_out", [](RunConfig& c) -> double& { return c.problem.solver.dt_out; }),
        double_key("tol_newton", [](RunConfig& c) -> double& { return c.problem.solver.tol_newton; }),
        count_key("max_iter", [](RunConfig& c) -> int& { return c.problem.solver.max_iter; }),
        KeyHandler{"eps_list",
                   [](RunConfig& c, std::string_view k, std::string_view v) {
                       c.eps_list = parse_list(k, v);
                   },
                   [](const RunConfig& c) {
                       std::string s;
                       for (std::size_t i = 0; i < c.eps_list.size(); ++i) {
                           if (i) s += ", ";
                           s += format_double(c.eps_list[i]);
                       }
                       return s;
                   }},
        double_key("A_max", [](RunConfig& c) -> double& { return c.A_max; }),
        count_key("psi_n", [](RunConfig& c) -> std::size_t& { return c.psi_n; }),
        double_key("psi_tol", [](RunConfig& c) -> double& { return c.psi_tol; }),
        double_key("oracle_tol", [](RunConfig& c) -> double& { return c.oracle_tol; }),
        KeyHandler{"out_dir",
                   [](RunConfig& c, std::string_view, std::string_view v) { c.out_dir = std::string(v); },
                   [](const RunConfig& c) { return c.out_dir.string(); }},
    };
    return table;
}

}  // namespace

const std::vector<std::string_view>& config_keys() {
    static const std::vector<std::string_view> keys = [] {
        std::vector<std::string_view> k;
        for (const auto& h : handlers()) k.push_back(h.key);
        return k;
    }();
    return keys;
}

RunConfig parse_config(std::string_view text) {
    RunConfig config;
    std::set<std::string, std::less<>> seen;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            const std::string key(trim(line));
            throw ValidationError("line " + std::to_string(line_no) + ": expected 'key = value' for '" +
                                      key + "'",
                                  key);
        }
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ValidationError("line " + std::to_string(line_no) + ": missing key");
        }
        const auto& table = handlers();
        const auto it = std::find_if(table.begin(), table.end(),
                                     [&](const KeyHandler& h) { return h.key == key; });
        if (it == table.end()) {
            throw ValidationError("unknown config key '" + std::string(key) + "'", std::string(key));
        }
        if (!seen.insert(std::string(key)).second) {
            throw ValidationError("config key '" + std::string(key) + "' given twice", std::string(key));
        }
        if (value.empty()) {
            throw ValidationError(std::string(key) + ": missing value", std::string(key));
        }
        it->set(config, key, value);
    }
    validate(config);
    return config;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file " + path.string(), "config");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string to_config_text(const RunConfig& config) {
    std::string out;
    for (const auto& h : handlers()) {
        out += std::string(h.key) + " = " + h.get(config) + "\n";
    }
    return out;
}

void validate(const RunConfig& c) {
    validate(c.problem);
    if (!(c.problem.reg.smoothing >= 0.0)) {
        throw ValidationError("eps_smooth: must be nonnegative (0 means eps)", "eps_smooth");
    }
    if (c.eps_list.size() < 3) {
        throw ValidationError("eps_list: needs at least 3 values", "eps_list");
    }
    for (std::size_t k = 0; k < c.eps_list.size(); ++k) {
        if (!(c.eps_list[k] > 0.0)) throw ValidationError("eps_list: values must be positive", "eps_list");
        if (k > 0 && !(c.eps_list[k] < c.eps_list[k - 1])) {
            throw ValidationError("eps_list: must be strictly decreasing", "eps_list");
        }
    }
    if (!(c.A_max > 0.0)) throw ValidationError("A_max: must be positive", "A_max");
    if (c.psi_n < 2) throw ValidationError("psi_n: must be at least 2", "psi_n");
    if (!(c.psi_tol > 0.0)) throw ValidationError("psi_tol: must be positive", "psi_tol");
    if (!(c.oracle_tol > 0.0)) throw ValidationError("oracle_tol: must be positive", "oracle_tol");
    if (c.out_dir.empty()) throw ValidationError("out_dir: must not be empty", "out_dir");
}

}  // namespace nlbs

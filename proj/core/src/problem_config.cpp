#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "biphase/error.hpp"
#include "biphase/problem.hpp"

namespace biphase {

namespace {

constexpr double kCornerTol = 1e-9;

struct Entry {
    std::string value;
    int line = 0;
};

using Section = std::map<std::string, Entry>;

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

[[noreturn]] void parse_fail(const std::string& source, int line, const std::string& msg) {
    throw Error(ErrorCode::ParseError, source + ":" + std::to_string(line) + ": " + msg);
}

double parse_number(const std::string& source, const Entry& e, std::string_view text) {
    const std::string t = trim(text);
    double v = 0.0;
    const char* begin = t.data();
    const char* end = t.data() + t.size();
    if (!t.empty() && *begin == '+') ++begin;
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (t.empty() || ec != std::errc() || ptr != end || !std::isfinite(v)) {
        parse_fail(source, e.line, "expected a finite number, got '" + t + "'");
    }
    return v;
}

std::vector<double> parse_list(const std::string& source, const Entry& e) {
    std::vector<double> out;
    std::string_view rest = e.value;
    while (true) {
        const auto comma = rest.find(',');
        out.push_back(parse_number(source, e, rest.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        rest.remove_prefix(comma + 1);
    }
    return out;
}

const Entry& require(const Section& sec, const std::string& section, const std::string& key,
                     const std::string& source) {
    auto it = sec.find(key);
    if (it == sec.end()) {
        throw Error(ErrorCode::InvalidConfig, source + ": missing key '" + key + "' in [" + section + "]");
    }
    return it->second;
}

}  // namespace

ProblemSpec parse_problem_config(const std::string& text, const std::string& source) {
    static const std::map<std::string, std::set<std::string>> allowed = {
        {"problem", {"name", "dim", "lambda_plus", "lambda_minus"}},
        {"boundary",
         {"g_left", "g_right", "edge_left_coeffs", "edge_right_coeffs", "edge_bottom_coeffs", "edge_top_coeffs"}},
    };

    std::map<std::string, Section> sections;
    std::string current;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') parse_fail(source, line_no, "unterminated section header");
            current = trim(std::string_view(line).substr(1, line.size() - 2));
            if (!allowed.contains(current)) parse_fail(source, line_no, "unknown section [" + current + "]");
            if (sections.contains(current)) parse_fail(source, line_no, "duplicate section [" + current + "]");
            sections[current];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) parse_fail(source, line_no, "expected 'key = value'");
        if (current.empty()) parse_fail(source, line_no, "key outside of any section");
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        if (!allowed.at(current).contains(key)) {
            parse_fail(source, line_no, "unknown key '" + key + "' in [" + current + "]");
        }
        auto& sec = sections[current];
        if (sec.contains(key)) parse_fail(source, line_no, "duplicate key '" + key + "'");
        if (value.empty()) parse_fail(source, line_no, "empty value for '" + key + "'");
        const Entry entry{value, line_no};
        // Syntax is checked here so a malformed value is reported even when
        // the file is also incomplete.
        if (key.ends_with("_coeffs")) {
            (void)parse_list(source, entry);
        } else if (key != "name") {
            (void)parse_number(source, entry, entry.value);
        }
        sec[key] = entry;
    }

    for (const char* name : {"problem", "boundary"}) {
        if (!sections.contains(name)) {
            throw Error(ErrorCode::InvalidConfig, source + ": missing section [" + std::string(name) + "]");
        }
    }
    const Section& prob = sections["problem"];
    const Section& bnd = sections["boundary"];

    const Entry& dim_entry = require(prob, "problem", "dim", source);
    const double dim_value = parse_number(source, dim_entry, dim_entry.value);
    if (dim_value != 1.0 && dim_value != 2.0) parse_fail(source, dim_entry.line, "dim must be 1 or 2");
    const int dim = static_cast<int>(dim_value);

    const Entry& lp_entry = require(prob, "problem", "lambda_plus", source);
    const Entry& lm_entry = require(prob, "problem", "lambda_minus", source);
    const double lp = parse_number(source, lp_entry, lp_entry.value);
    const double lm = parse_number(source, lm_entry, lm_entry.value);
    if (lp < 0.0) parse_fail(source, lp_entry.line, "lambda_plus must be >= 0");
    if (lm < 0.0) parse_fail(source, lm_entry.line, "lambda_minus must be >= 0");
    if (!(lp + lm > 0.0)) parse_fail(source, lm_entry.line, "lambda_plus + lambda_minus must be > 0");

    ProblemSpec spec;
    spec.name = prob.contains("name") ? prob.at("name").value : source;
    spec.dim = dim;
    spec.lambda_plus = [lp](Point) { return lp; };
    spec.lambda_minus = [lm](Point) { return lm; };

    if (dim == 1) {
        for (const auto& [key, entry] : bnd) {
            if (key.starts_with("edge_")) parse_fail(source, entry.line, "'" + key + "' is only valid for dim = 2");
        }
        const Entry& l = require(bnd, "boundary", "g_left", source);
        const Entry& r = require(bnd, "boundary", "g_right", source);
        const double gl = parse_number(source, l, l.value);
        const double gr = parse_number(source, r, r.value);
        spec.boundary = [gl, gr](Point p) { return p.x < 0.0 ? gl : gr; };
        return spec;
    }

    for (const auto& [key, entry] : bnd) {
        if (key.starts_with("g_")) parse_fail(source, entry.line, "'" + key + "' is only valid for dim = 1");
    }
    const auto left = parse_list(source, require(bnd, "boundary", "edge_left_coeffs", source));
    const auto right = parse_list(source, require(bnd, "boundary", "edge_right_coeffs", source));
    const auto bottom = parse_list(source, require(bnd, "boundary", "edge_bottom_coeffs", source));
    const auto top = parse_list(source, require(bnd, "boundary", "edge_top_coeffs", source));

    struct Corner {
        const char* name;
        double vertical;
        double horizontal;
    };
    const Corner corners[] = {
        {"(-1,-1)", eval_polynomial(left, -1.0), eval_polynomial(bottom, -1.0)},
        {"(1,-1)", eval_polynomial(right, -1.0), eval_polynomial(bottom, 1.0)},
        {"(-1,1)", eval_polynomial(left, 1.0), eval_polynomial(top, -1.0)},
        {"(1,1)", eval_polynomial(right, 1.0), eval_polynomial(top, 1.0)},
    };
    for (const Corner& c : corners) {
        if (!(std::abs(c.vertical - c.horizontal) <= kCornerTol)) {
            std::ostringstream os;
            os << source << ": edge polynomials disagree at corner " << c.name << ": " << c.vertical << " vs "
               << c.horizontal;
            throw Error(ErrorCode::InvalidConfig, os.str());
        }
    }

    spec.boundary = [left, right, bottom, top](Point p) {
        if (p.x == -1.0) return eval_polynomial(left, p.y);
        if (p.x == 1.0) return eval_polynomial(right, p.y);
        if (p.y == -1.0) return eval_polynomial(bottom, p.x);
        return eval_polynomial(top, p.x);
    };
    return spec;
}

ProblemSpec load_problem_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::InvalidConfig, "cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_problem_config(buf.str(), path);
}

}  // namespace biphase

#include "mlring/golden.hpp"

#include <fstream>
#include <sstream>

namespace mlring {

namespace {

double to_double(const std::string& s, int line) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != s.size() || s.empty()) {
        throw ConfigError("line " + std::to_string(line) + ": bad number '" + s + "'");
    }
    return v;
}

std::ifstream open(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    return in;
}

}  // namespace

TableColumn parse_column(const std::string& token) {
    if (!token.empty() && token.front() == '[') {
        const auto comma = token.find(',');
        if (token.back() != ']' || comma == std::string::npos) {
            throw ConfigError("bad interval '" + token + "'");
        }
        return {to_double(token.substr(1, comma - 1), 0),
                to_double(token.substr(comma + 1, token.size() - comma - 2), 0)};
    }
    const double v = to_double(token, 0);
    return {v, v};
}

std::map<int, TableData> parse_golden_tables(std::istream& in) {
    std::map<int, TableData> out;
    std::string line;
    int lineno = 0;
    TableData* cur = nullptr;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string head;
        if (!(ls >> head)) continue;
        if (head == "table") {
            int which = 0;
            if (!(ls >> which)) throw ConfigError("line " + std::to_string(lineno) + ": table number");
            cur = &out[which];
            cur->which = which;
            continue;
        }
        if (!cur) throw ConfigError("line " + std::to_string(lineno) + ": data outside a table");
        if (head == "end") {
            cur = nullptr;
            continue;
        }
        std::vector<std::string> toks;
        for (std::string t; ls >> t;) toks.push_back(t);
        if (head == "columns") {
            for (const auto& t : toks) cur->columns.push_back(parse_column(t));
            continue;
        }
        if (toks.size() != cur->columns.size()) {
            throw ConfigError("line " + std::to_string(lineno) + ": expected " +
                              std::to_string(cur->columns.size()) + " values");
        }
        std::vector<int> vals;
        std::vector<char> marks;
        for (auto t : toks) {
            char m = ' ';
            if (!t.empty() && (t.back() == '*' || t.back() == '#')) {
                m = t.back();
                t.pop_back();
            }
            vals.push_back(static_cast<int>(to_double(t, lineno)));
            marks.push_back(m);
        }
        if (head == "total") {
            cur->totals = vals;
        } else {
            cur->rows.push_back(head);
            cur->counts.push_back(vals);
            cur->markers.push_back(marks);
        }
    }
    if (cur) throw ConfigError("unterminated table " + std::to_string(cur->which));
    return out;
}

std::map<int, TableData> load_golden_tables(const std::string& path) {
    auto in = open(path);
    return parse_golden_tables(in);
}

std::vector<GoldenEvent> parse_golden_events(std::istream& in) {
    std::vector<GoldenEvent> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        GoldenEvent ev;
        std::string a;
        if (!(ls >> ev.source)) continue;
        if (!(ls >> a)) throw ConfigError("line " + std::to_string(lineno) + ": missing pump value");
        ev.alpha = to_double(a, lineno);
        for (std::string t; ls >> t;) ev.labels.push_back(t);
        out.push_back(std::move(ev));
    }
    return out;
}

std::vector<GoldenEvent> load_golden_events(const std::string& path) {
    auto in = open(path);
    return parse_golden_events(in);
}

}  // namespace mlring

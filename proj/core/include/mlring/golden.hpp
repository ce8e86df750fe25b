#pragma once

#include <istream>
#include <map>
#include <string>
#include <vector>

#include "mlring/bifurcation.hpp"

namespace mlring {

/// Reads blocks of the form
///   table N / columns [lo,hi] x ... / ROW v v* ... / total ... / end
/// Lines starting with '#' are comments. Throws ConfigError on malformed input.
std::map<int, TableData> parse_golden_tables(std::istream& in);
std::map<int, TableData> load_golden_tables(const std::string& path);

struct GoldenEvent {
    std::string source;  ///< "center" or a branch name (D8, Z8t1, D8d)
    double alpha = 0.0;
    std::vector<std::string> labels;
};

std::vector<GoldenEvent> parse_golden_events(std::istream& in);
std::vector<GoldenEvent> load_golden_events(const std::string& path);

/// Parses "[3.6,3.606]" or "6.40".
TableColumn parse_column(const std::string& token);

}  // namespace mlring

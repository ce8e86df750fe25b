#include "mlring/bifurcation.hpp"
#include "mlring/golden.hpp"

#include <algorithm>
#include <sstream>

namespace mlring {

namespace {

const char* column_spec(int which) {
    switch (which) {
        case 1:
            return "[3.6,3.606] [3.6065,3.607] [3.6075,3.6095] [3.61,3.613] [3.6135,3.617] "
                   "[3.618,3.62] [3.6205,3.622]";
        case 2:
            return "[3.61,3.69] [3.70,3.85] [3.86,4.01] [4.02,4.58] [4.59,5] [5.01,5.32] "
                   "[5.33,6.01] [6.02,8.97]";
        case 3:
            return "[3.61,3.65] [3.66,3.98] [3.99,4.15] [4.16,4.2] [4.21,6.39] 6.40 "
                   "[6.41,7.87] [7.88,10.02]";
        case 4:
            return "[3.61,5.48] [5.49,6.6] [6.61,8.09] [8.10,8.47] [8.48,13.53]";
        case 5:
            return "[3.61,3.68] [3.69,3.84] 3.85 [3.86,5.24] [5.25,5.29] [5.3,5.52] [5.53,6.37] "
                   "[6.38,8.65] [8.66,9.23]";
        case 6:
            return "[3.62,3.83] [3.84,4.04] [4.05,5.38] [5.39,6.59] [6.6,7.3] [7.31,7.56] "
                   "[7.57,13.55]";
        default:
            throw ConfigError("table number must be 1..6");
    }
}

double midpoint(const TableColumn& c) { return 0.5 * (c.lo + c.hi) * 1e-2; }

void fill_totals(TableData& t) {
    t.totals.assign(t.columns.size(), 0);
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
        for (const auto& row : t.counts) {
            if (row[c] < 0 || t.totals[c] < 0) {
                t.totals[c] = -1;
            } else {
                t.totals[c] += row[c];
            }
        }
    }
}

}  // namespace

std::vector<TableColumn> table_columns(int which) {
    std::istringstream in(column_spec(which));
    std::vector<TableColumn> cols;
    for (std::string t; in >> t;) cols.push_back(parse_column(t));
    return cols;
}

TableData reproduce_table(int which, const LaserParams& p_in, std::optional<double> psi_override,
                          const ScanOptions& opt) {
    LaserParams p = p_in;
    if (psi_override) p.psi = *psi_override;
    TableData t;
    t.which = which;
    t.columns = table_columns(which);
    const int r = p.n / 2;
    const std::size_t nc = t.columns.size();
    for (int j = 0; j <= r; ++j) {
        t.rows.push_back((which == 1 ? "V" : "U") + std::to_string(j));
    }
    t.counts.assign(static_cast<std::size_t>(r + 1), std::vector<int>(nc, -1));
    t.markers.assign(static_cast<std::size_t>(r + 1), std::vector<char>(nc, ' '));

    if (which == 1) {
        std::vector<double> alphas;
        for (const auto& c : t.columns) alphas.push_back(midpoint(c));
        const auto rows = equilibrium_sweep(p, alphas, Convention::RealDimension, opt.threads);
        for (const auto& row : rows) {
            const auto col = static_cast<std::size_t>(
                std::find(alphas.begin(), alphas.end(), row.alpha) - alphas.begin());
            const int j = std::stoi(row.component.substr(1));
            t.counts[j][col] = row.count;
        }
        for (int j = 0; j <= r; ++j) {
            for (std::size_t c = 1; c < nc; ++c) {
                if (t.counts[j][c] != t.counts[j][c - 1]) t.markers[j][c] = '*';
            }
        }
        fill_totals(t);
        return t;
    }

    const int l = which - 2;
    const Ambient ambient = ambient_for_twist(l, p.n);
    const double alpha_end = t.columns.back().hi * 1e-2 + 1e-3;
    const Branch br = branch_from_center(p, l, alpha_end);
    if (!br.termination.empty()) t.diagnostic = "branch " + br.id + ": " + br.termination;

    std::vector<double> mids;
    for (const auto& c : t.columns) mids.push_back(midpoint(c));
    std::vector<std::vector<int>> col_counts(nc);
    for (std::size_t c = 0; c < nc; ++c) {
        try {
            const RelativeEquilibrium re = releq_at(p, br, mids[c]);
            col_counts[c] = component_counts(block_counts(p, re, ambient, opt.deflate_radius));
        } catch (const NumericalError& e) {
            if (t.diagnostic.empty()) t.diagnostic = e.what();
        }
    }
    for (std::size_t c = 0; c < nc; ++c) {
        if (col_counts[c].empty()) continue;
        for (int j = 0; j <= r; ++j) t.counts[j][c] = col_counts[c][j];
    }

    const auto events = hopf_scan_releq(p, br, ambient, opt);
    for (const auto& ev : events) {
        for (std::size_t c = 1; c < nc; ++c) {
            if (ev.alpha > mids[c - 1] && ev.alpha <= mids[c]) {
                t.markers[ev.component.j][c] = ev.type == "hopf" ? '*' : '#';
            }
        }
    }
    fill_totals(t);
    return t;
}

TableDiff diff_tables(const TableData& computed, const TableData& golden) {
    TableDiff d;
    const std::size_t rows = std::min(computed.counts.size(), golden.counts.size());
    for (std::size_t i = 0; i < rows; ++i) {
        const std::size_t cols = std::min(computed.counts[i].size(), golden.counts[i].size());
        for (std::size_t c = 0; c < cols; ++c) {
            ++d.compared;
            const int a = computed.counts[i][c], b = golden.counts[i][c];
            if (a != b) {
                ++d.mismatches;
                if (d.details.size() < 20) {
                    d.details.push_back(golden.rows[i] + " column " + std::to_string(c + 1) +
                                        ": computed " + std::to_string(a) + ", expected " +
                                        std::to_string(b));
                }
            }
        }
        const std::size_t extra = std::max(computed.counts[i].size(), golden.counts[i].size()) - cols;
        d.mismatches += static_cast<int>(extra);
        d.compared += static_cast<int>(extra);
    }
    if (computed.counts.size() != golden.counts.size()) {
        d.details.push_back("row count differs");
        ++d.mismatches;
    }
    return d;
}

}  // namespace mlring

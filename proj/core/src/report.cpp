#include "mlring/report.hpp"

#include <cstdio>
#include <string>

#include "json.hpp"

namespace mlring {

namespace {

using nlohmann::ordered_json;

// rounds to 12 significant digits so the JSON text matches the CSV text
double r12(double v) { return std::stod(fmt(v)); }

ordered_json orbit_json(const std::vector<OrbitPrediction>& types) {
    ordered_json a = ordered_json::array();
    for (const auto& t : types) a.push_back({{"name", t.type.label()}, {"count", t.branches}});
    return a;
}

ordered_json conditions_json(const ConditionsReport& c) {
    ordered_json j{{"maximality", c.maximality},
                   {"nonzero_crossing", c.nonzero_crossing},
                   {"sign_consistency", c.sign_consistency}};
    if (!c.note.empty()) j["note"] = c.note;
    return j;
}

std::string component_name(const IsotypicalIndex& idx) { return "U" + std::to_string(idx.j); }

}  // namespace

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string to_json(const Report& r) {
    ordered_json root;
    ordered_json centers = ordered_json::array();
    for (std::size_t i = 0; i < r.centers.size(); ++i) {
        const Center& c = r.centers[i];
        ordered_json e{{"alpha", r12(c.alpha0)},
                       {"w", r12(c.w0)},
                       {"j", c.j},
                       {"twist", c.j},
                       {"r_prime", r12(c.r_prime)},
                       {"transversal", c.transversal},
                       {"gamma_condition", c.gamma_condition},
                       {"frequency_condition", c.frequency_condition},
                       {"residual", r12(c.residual)}};
        if (i < r.predictions.size()) {
            const auto& p = r.predictions[i];
            e["crossing_number"] = p.crossing.t;
            e["withheld"] = p.withheld;
            if (p.withheld) e["reason"] = p.reason;
            e["orbit_types"] = orbit_json(p.orbit_types);
        }
        centers.push_back(std::move(e));
    }
    root["centers"] = std::move(centers);

    ordered_json branches = ordered_json::array();
    ordered_json events = ordered_json::array();
    for (const auto& br : r.branches) {
        ordered_json pts = ordered_json::array();
        for (std::size_t i = 0; i < br.branch.points.size(); ++i) {
            const auto& pt = br.branch.points[i];
            ordered_json e{{"alpha", r12(pt.alpha)},
                           {"w", r12(pt.w)},
                           {"g", r12(pt.node.g)},
                           {"q", r12(pt.node.q)},
                           {"a", r12(pt.node.a.real())},
                           {"symmetry", pt.symmetry.name},
                           {"residual", r12(pt.residual)},
                           {"regular", pt.regular}};
            if (i < br.regularity.size()) e["sigma_ratio"] = r12(br.regularity[i].ratio);
            pts.push_back(std::move(e));
        }
        ordered_json b{{"id", br.branch.id},
                       {"symmetry", br.ambient.name()},
                       {"twist", br.branch.twist_l},
                       {"points", std::move(pts)}};
        if (!br.branch.termination.empty()) b["termination"] = br.branch.termination;
        branches.push_back(std::move(b));
        for (const auto& ev : br.events) {
            events.push_back({{"branch", br.branch.id},
                              {"alpha", r12(ev.alpha)},
                              {"component", component_name(ev.component)},
                              {"type", ev.type},
                              {"beta", r12(ev.beta0)},
                              {"crossing_number", ev.t},
                              {"count_before", ev.count_before},
                              {"count_after", ev.count_after},
                              {"orbit_types", orbit_json(ev.orbit_types)},
                              {"conditions", conditions_json(ev.conditions)}});
        }
    }
    root["branches"] = std::move(branches);
    root["events"] = std::move(events);
    return root.dump(2) + "\n";
}

std::string catalog_json() {
    ordered_json root = ordered_json::array();
    for (const Ambient& amb : {Ambient::equilibrium(), Ambient::d8(), Ambient::z8t(1), Ambient::z8t(2),
                               Ambient::z8t(3), Ambient::d8d()}) {
        ordered_json comps = ordered_json::array();
        for (const auto& entry : catalog(amb)) {
            ordered_json types = ordered_json::array();
            for (const auto& t : entry.types) {
                ordered_json elems = ordered_json::array();
                for (const auto& e : t.elements) {
                    elems.push_back({{"h", format_dihedral(e.h)}, {"phases", e.phases}});
                }
                types.push_back({{"name", t.name},
                                 {"bold", t.bold},
                                 {"order", t.elements.size()},
                                 {"elements", std::move(elems)},
                                 {"projection_order", t.spatial_projection_order},
                                 {"branch_count", branch_count(t)}});
            }
            comps.push_back({{"j", entry.j}, {"types", std::move(types)}});
        }
        root.push_back({{"ambient", amb.name()}, {"components", std::move(comps)}});
    }
    return root.dump(2) + "\n";
}

void write_centers_csv(std::ostream& os, const std::vector<Center>& centers,
                       const std::vector<BranchPrediction>& predictions) {
    os << "alpha,w,j,twist,r_prime,transversal,gamma_condition,frequency_condition,residual,"
          "crossing_number,orbit_types\n";
    for (std::size_t i = 0; i < centers.size(); ++i) {
        const Center& c = centers[i];
        os << fmt(c.alpha0) << ',' << fmt(c.w0) << ',' << c.j << ',' << c.j << ','
           << fmt(c.r_prime) << ',' << c.transversal << ',' << c.gamma_condition << ','
           << c.frequency_condition << ',' << fmt(c.residual) << ',';
        if (i < predictions.size()) {
            os << predictions[i].crossing.t << ',';
            std::string types;
            for (const auto& t : predictions[i].orbit_types) {
                if (!types.empty()) types += ';';
                types += t.type.label() + ":" + std::to_string(t.branches);
            }
            os << types;
        } else {
            os << ',';
        }
        os << '\n';
    }
}

void write_table_csv(std::ostream& os, const TableData& t) {
    os << "alpha_lo,alpha_hi,component,count,marker\n";
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
        for (std::size_t r = 0; r < t.rows.size(); ++r) {
            const char m = t.markers.empty() ? ' ' : t.markers[r][c];
            os << fmt(t.columns[c].lo * 1e-2) << ',' << fmt(t.columns[c].hi * 1e-2) << ','
               << t.rows[r] << ',' << t.counts[r][c] << ',';
            if (m != ' ') os << m;
            os << '\n';
        }
    }
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
    os << "alpha,component,count,convention,winding_residual\n";
    for (const auto& r : rows) {
        os << fmt(r.alpha) << ',' << r.component << ',' << r.count << ',' << to_string(r.convention)
           << ',' << fmt(r.winding_residual) << '\n';
    }
}

void write_trajectory_csv(std::ostream& os, const Trajectory& tr) {
    const std::size_t n = tr.states.empty() ? 0 : tr.states.front().size();
    os << 't';
    for (std::size_t k = 0; k < n; ++k) {
        os << ",g" << k << ",q" << k << ",re_a" << k << ",im_a" << k;
    }
    os << '\n';
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        os << fmt(tr.times[i]);
        for (const auto& s : tr.states[i]) {
            os << ',' << fmt(s.g) << ',' << fmt(s.q) << ',' << fmt(s.a.real()) << ','
               << fmt(s.a.imag());
        }
        os << '\n';
    }
}

void write_power_csv(std::ostream& os, const Trajectory& tr) {
    const std::size_t n = tr.states.empty() ? 0 : tr.states.front().size();
    os << 't';
    for (std::size_t k = 0; k < n; ++k) os << ",power" << k;
    os << '\n';
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        os << fmt(tr.times[i]);
        for (const auto& s : tr.states[i]) os << ',' << fmt(std::norm(s.a));
        os << '\n';
    }
}

void write_fit_csv(std::ostream& os, const WaveFitResult& fit) {
    os << "fitted_w,residual,twist_estimate\n";
    os << fmt(fit.fitted_w) << ',' << fmt(fit.residual) << ',';
    if (fit.twist_estimate) os << *fit.twist_estimate;
    os << '\n';
}

}  // namespace mlring

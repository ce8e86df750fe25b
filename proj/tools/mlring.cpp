// Command-line front end.
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "mlring/bifurcation.hpp"
#include "mlring/golden.hpp"
#include "mlring/report.hpp"
#include "mlring/simulator.hpp"

namespace fs = std::filesystem;
using namespace mlring;

namespace {

struct Global {
    std::string config;
    std::string out;
    std::optional<double> psi;
    std::string psi_sweep;
    int threads = 1;
    std::string convention = "real-dim";
    std::string data_dir = MLRING_DEFAULT_DATA_DIR;
};

std::pair<double, double> parse_range(const std::string& s) {
    const auto c = s.find(':');
    if (c == std::string::npos) throw ConfigError("range must be LO:HI, got '" + s + "'");
    double lo = 0, hi = 0;
    try {
        lo = std::stod(s.substr(0, c));
        hi = std::stod(s.substr(c + 1));
    } catch (const std::exception&) {
        throw ConfigError("range must be LO:HI, got '" + s + "'");
    }
    if (!(hi > lo)) throw ConfigError("empty range '" + s + "'");
    return {lo, hi};
}

struct Sweep {
    double lo = 0, hi = 0;
    int n = 0;
};

Sweep parse_sweep(const std::string& s) {
    const auto a = s.find(':'), b = s.rfind(':');
    if (a == std::string::npos || a == b) throw ConfigError("psi sweep must be LO:HI:N");
    Sweep sw;
    try {
        sw.lo = std::stod(s.substr(0, a));
        sw.hi = std::stod(s.substr(a + 1, b - a - 1));
        sw.n = std::stoi(s.substr(b + 1));
    } catch (const std::exception&) {
        throw ConfigError("psi sweep must be LO:HI:N");
    }
    if (sw.n < 1 || !(sw.hi >= sw.lo)) throw ConfigError("psi sweep must have N >= 1 and HI >= LO");
    return sw;
}

LaserParams load(const Global& g) {
    LaserParams p = g.config.empty() ? LaserParams{} : load_params(g.config);
    if (g.psi) p.psi = *g.psi;
    p.validate();
    if (g.threads < 1) throw ConfigError("--threads must be at least 1");
    return p;
}

// Writes to DIR/name when --out is given, otherwise to stdout.
void emit(const Global& g, const std::string& name, const std::string& text) {
    if (g.out.empty()) {
        std::cout << text;
        return;
    }
    fs::create_directories(g.out);
    std::ofstream f(fs::path(g.out) / name, std::ios::binary);
    if (!f) throw ConfigError("cannot write " + (fs::path(g.out) / name).string());
    f << text;
}

int twist_of_selector(const std::string& sel, int n) {
    if (sel == "D8") return 0;
    if (sel == "D8d") return n / 2;
    for (int l = 1; l < n / 2; ++l) {
        if (sel == "Z8t" + std::to_string(l)) return l;
    }
    throw ConfigError("unknown branch selector '" + sel + "' (expected D8, D8d, Z8t1, Z8t2, Z8t3)");
}

Report branch_report(const LaserParams& p, const std::string& sel, double lo, double hi,
                     int threads) {
    const int l = twist_of_selector(sel, p.n);
    const Ambient amb = ambient_for_twist(l, p.n);
    Report rep;
    BranchReport br;
    br.ambient = amb;
    const int j = std::min(l, p.n - l);
    const auto cs = find_centers(p, center_threshold(p, j), hi, j).centers;
    if (cs.empty()) throw NumericalError("no center of component " + std::to_string(j) + " in range");
    br.branch = continue_releq(p, cs.front(), l, lo, hi);
    for (const auto& pt : br.branch.points) br.regularity.push_back(regularity_check(p, pt));
    ScanOptions so;
    so.threads = threads;
    br.events = hopf_scan_releq(p, br.branch, amb, so);
    rep.branches.push_back(std::move(br));
    return rep;
}

HistorySegment initial_history(const LaserParams& p, const std::string& source, double alpha,
                               double amplitude, std::uint64_t seed, RelativeEquilibrium* wave) {
    if (source == "equilibrium") return perturbed_equilibrium_history(p, alpha, amplitude, seed);
    if (source.rfind("releq:", 0) == 0) {
        // releq:SELECTOR:ALPHA
        const std::string rest = source.substr(6);
        const auto c = rest.find(':');
        if (c == std::string::npos) throw ConfigError("initial must be releq:SELECTOR:ALPHA");
        const std::string sel = rest.substr(0, c);
        double a = 0;
        try {
            a = std::stod(rest.substr(c + 1));
        } catch (const std::exception&) {
            throw ConfigError("initial must be releq:SELECTOR:ALPHA");
        }
        const int l = twist_of_selector(sel, p.n);
        const Branch br = branch_from_center(p, l, a + 1e-3);
        const RelativeEquilibrium re = releq_at(p, br, a);
        if (wave) *wave = re;
        return rotating_wave_history(p, re);
    }
    if (source.rfind("file:", 0) == 0) {
        std::ifstream in(source.substr(5));
        if (!in) throw ConfigError("cannot open initial state file " + source.substr(5));
        NetworkState x;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            std::replace(line.begin(), line.end(), ',', ' ');
            std::istringstream ls(line);
            double g, q, u, v;
            if (!(ls >> g >> q >> u >> v)) throw ConfigError("initial state rows must be g,q,re_a,im_a");
            x.push_back({g, q, {u, v}});
        }
        if (static_cast<int>(x.size()) != p.n) {
            throw ConfigError("initial state file must have one row per node");
        }
        return constant_history(x);
    }
    throw ConfigError("initial must be equilibrium, releq:SELECTOR:ALPHA or file:PATH");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bifurcation analysis of a ring of delay-coupled mode-locked lasers"};
    app.require_subcommand(1);
    Global g;
    app.add_option("--config", g.config, "key=value parameter file");
    app.add_option("--out", g.out, "output directory (default: stdout)");
    app.add_option("--psi", g.psi, "coupling phase, overrides the config");
    app.add_option("--psi-sweep", g.psi_sweep, "LO:HI:N calibration sweep of psi");
    app.add_option("--threads", g.threads, "worker threads");
    app.add_option("--convention", g.convention, "real-dim or per-component");
    app.add_option("--data-dir", g.data_dir, "directory with the reference data");

    auto* centers = app.add_subcommand("centers", "Hopf points of the equilibrium");
    std::string range = "0.035:0.0363";
    std::optional<int> only_j;
    centers->add_option("--range", range, "alpha range LO:HI");
    centers->add_option("--j", only_j, "only this component");

    auto* table = app.add_subcommand("table", "recompute one of the reference tables");
    int which = 0;
    table->add_option("which", which, "table number 1..6")->required();

    auto* branch = app.add_subcommand("branch", "continue a rotating-wave branch and scan it");
    std::string selector;
    std::string branch_range = "0.035:0.09";
    branch->add_option("selector", selector, "D8, D8d, Z8t1, Z8t2 or Z8t3")->required();
    branch->add_option("--range", branch_range, "alpha range LO:HI");

    std::string initial;
    double alpha = 0.035, periods = 500.0, amplitude = 1e-3, dt_frac = 200.0;
    std::uint64_t seed = 1;
    auto* simulate = app.add_subcommand("simulate", "integrate the network");
    auto* verify = app.add_subcommand("verify", "integrate a rotating wave and fit it");
    for (auto* sc : {simulate, verify}) {
        sc->add_option("--initial", initial, "equilibrium | releq:SELECTOR:ALPHA | file:PATH");
        sc->add_option("--alpha", alpha, "pump");
        sc->add_option("--amplitude", amplitude, "perturbation size for equilibrium data");
        sc->add_option("--seed", seed, "perturbation seed");
        sc->add_option("--steps-per-delay", dt_frac, "T / dt");
    }
    simulate->add_option("--periods", periods, "length in units of T");

    auto* diff = app.add_subcommand("diff-tables", "compare recomputed tables with the reference");
    std::vector<int> diff_which;
    diff->add_option("which", diff_which, "table numbers (default all)");

    auto* cat = app.add_subcommand("catalog-export", "write the orbit type catalog as JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        const LaserParams p = load(g);
        const Convention conv = parse_convention(g.convention);

        if (*centers) {
            const auto [lo, hi] = parse_range(range);
            Report rep;
            for (int j = 0; j <= p.n / 2; ++j) {
                if (only_j && *only_j != j) continue;
                auto cs = find_centers(p, lo, hi, j).centers;
                rep.centers.insert(rep.centers.end(), cs.begin(), cs.end());
            }
            if (only_j && (*only_j < 0 || *only_j > p.n / 2)) throw ConfigError("--j out of range");
            std::sort(rep.centers.begin(), rep.centers.end(),
                      [](const Center& a, const Center& b) { return a.alpha0 < b.alpha0; });
            for (const auto& c : rep.centers) rep.predictions.push_back(classify_equilibrium_hopf(p, c));
            std::ostringstream csv;
            write_centers_csv(csv, rep.centers, rep.predictions);
            emit(g, "centers.csv", csv.str());
            if (!g.out.empty()) emit(g, "centers.json", to_json(rep));
            return 0;
        }

        if (*table) {
            if (which < 1 || which > 6) throw ConfigError("table number must be 1..6");
            ScanOptions so;
            so.threads = g.threads;
            const auto golden = load_golden_tables((fs::path(g.data_dir) / "golden_tables.txt").string());
            auto compute = [&](std::optional<double> psi) {
                TableData t = reproduce_table(which, p, psi, so);
                if (which == 1 && conv == Convention::PerComponent) {
                    // 2c -> c on U0, U4 and 4c -> 2c elsewhere
                    for (auto& row : t.counts) {
                        for (auto& v : row) v /= 2;
                    }
                    for (auto& v : t.totals) v /= 2;
                }
                return t;
            };
            std::optional<double> psi;
            if (!g.psi_sweep.empty()) {
                const Sweep sw = parse_sweep(g.psi_sweep);
                int best = -1;
                for (int i = 0; i < sw.n; ++i) {
                    const double v = sw.n == 1 ? sw.lo : sw.lo + (sw.hi - sw.lo) * i / (sw.n - 1);
                    const int mm = diff_tables(compute(v), golden.at(which)).mismatches;
                    std::cerr << "psi " << fmt(v) << " mismatches " << mm << '\n';
                    if (best < 0 || mm < best) {
                        best = mm;
                        psi = v;
                    }
                }
                std::cerr << "best psi " << fmt(*psi) << " mismatches " << best << '\n';
            }
            const TableData t = compute(psi);
            std::ostringstream csv;
            write_table_csv(csv, t);
            emit(g, "table" + std::to_string(which) + ".csv", csv.str());
            const TableDiff d = diff_tables(t, golden.at(which));
            std::cerr << "table " << which << ": " << d.mismatches << " of " << d.compared
                      << " cells differ from the reference\n";
            if (!t.diagnostic.empty()) std::cerr << t.diagnostic << '\n';
            return 0;
        }

        if (*branch) {
            const auto [lo, hi] = parse_range(branch_range);
            const Report rep = branch_report(p, selector, lo, hi, g.threads);
            emit(g, "branch_" + selector + ".json", to_json(rep));
            const auto& term = rep.branches.front().branch.termination;
            if (term == "step size underflow") {
                std::cerr << "continuation failed: " << term << '\n';
                return 3;
            }
            return 0;
        }

        if (*simulate || *verify) {
            if (initial.empty()) throw ConfigError("--initial is required");
            RelativeEquilibrium wave;
            const bool is_wave = initial.rfind("releq:", 0) == 0;
            const HistorySegment h = initial_history(p, initial, alpha, amplitude, seed, &wave);
            const double a = is_wave ? wave.alpha : alpha;
            const double len = (*verify ? 30.0 : periods) * p.T;
            const Trajectory tr = integrate(p, a, h, len, p.T / dt_frac);
            const WaveFitResult fit = fit_rotating_wave(tr, *verify ? 10.0 * p.T : std::min(50.0 * p.T, 0.5 * len));
            if (*simulate) {
                std::ostringstream csv, power;
                write_trajectory_csv(csv, tr);
                write_power_csv(power, tr);
                if (g.out.empty()) {
                    std::cout << csv.str();
                } else {
                    emit(g, "trajectory.csv", csv.str());
                    emit(g, "power.csv", power.str());
                }
                const double dev = max_abs_difference(tr.final_state(), trivial_equilibrium(p, a));
                std::cerr << "final deviation from the equilibrium " << fmt(dev) << '\n';
            }
            std::ostringstream f;
            write_fit_csv(f, fit);
            if (*verify) {
                std::ostringstream v;
                v << "alpha,w,fitted_w,residual,twist,twist_estimate\n"
                  << fmt(a) << ',' << fmt(is_wave ? wave.w : 0.0) << ',' << fmt(fit.fitted_w) << ','
                  << fmt(fit.residual) << ',' << (is_wave ? std::to_string(wave.twist_l) : "") << ','
                  << (fit.twist_estimate ? std::to_string(*fit.twist_estimate) : "") << '\n';
                emit(g, "verify.csv", v.str());
            } else if (!g.out.empty()) {
                emit(g, "fit.csv", f.str());
            }
            return 0;
        }

        if (*diff) {
            const auto golden = load_golden_tables((fs::path(g.data_dir) / "golden_tables.txt").string());
            if (diff_which.empty()) diff_which = {1, 2, 3, 4, 5, 6};
            ScanOptions so;
            so.threads = g.threads;
            std::ostringstream os;
            os << "table,compared,mismatches\n";
            for (int w : diff_which) {
                if (w < 1 || w > 6) throw ConfigError("table number must be 1..6");
                const TableDiff d = diff_tables(reproduce_table(w, p, {}, so), golden.at(w));
                os << w << ',' << d.compared << ',' << d.mismatches << '\n';
                for (const auto& s : d.details) std::cerr << "table " << w << ": " << s << '\n';
            }
            emit(g, "diff.csv", os.str());
            return 0;
        }

        if (*cat) {
            emit(g, "catalog.json", catalog_json());
            return 0;
        }
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    }
    return 0;
}

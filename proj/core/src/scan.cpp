#include "mlring/bifurcation.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

namespace mlring {

namespace {

IsotypicalIndex block_index(const Ambient& ambient, int m, int n) {
    const int r = n / 2;
    if (m == 0 || (n % 2 == 0 && m == r)) return {ambient, m, Sign::None};
    if (m < n - m) return {ambient, m, Sign::Plus};
    return {ambient, n - m, Sign::Minus};
}

std::vector<int> blocks_of_component(int j, int n) {
    if (j == 0 || 2 * j == n) return {j};
    return {j, n - j};
}

CharMatrix block_matrix(const LaserParams& p, const RelativeEquilibrium& re, const Ambient& ambient,
                        int m) {
    return linearization_releq(p, re.alpha, re.w, re.node, block_index(ambient, m, p.n));
}

int local_count(const LaserParams& p, const RelativeEquilibrium& re, const Ambient& ambient,
                const std::vector<int>& blocks, double beta0, double window, double radius) {
    int total = 0;
    for (int m : blocks) {
        const CharMatrix cm = block_matrix(p, re, ambient, m);
        const Rect box{0.0, window, beta0 - window, beta0 + window};
        total += count_roots_in_rect(cm, box, m == 0 ? radius : 0.0).count;
    }
    return total;
}

template <class F>
void parallel_for(std::size_t count, int threads, F&& work) {
    threads = std::max(1, threads);
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (std::size_t i = t; i < count; i += threads) work(i);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace

Ambient ambient_for_twist(int l, int n) {
    l = ((l % n) + n) % n;
    if (l == 0) return Ambient::d8();
    if (2 * l == n) return Ambient::d8d();
    return Ambient::z8t(std::min(l, n - l));
}

std::vector<int> block_counts(const LaserParams& p, const RelativeEquilibrium& re,
                              const Ambient& ambient, double deflate_radius) {
    std::vector<int> out(static_cast<std::size_t>(p.n));
    for (int m = 0; m < p.n; ++m) {
        out[m] = count_rhp_roots(block_matrix(p, re, ambient, m), 0.0, 0.0,
                                 m == 0 ? deflate_radius : 0.0)
                     .count;
    }
    return out;
}

std::vector<int> component_counts(const std::vector<int>& blocks) {
    const int n = static_cast<int>(blocks.size());
    std::vector<int> out(static_cast<std::size_t>(n / 2 + 1), 0);
    for (int j = 0; j <= n / 2; ++j) {
        for (int m : blocks_of_component(j, n)) out[j] += blocks[m];
    }
    return out;
}

CountProfile count_profile(const LaserParams& p, const Branch& branch, const Ambient& ambient,
                           const ScanOptions& opt) {
    CountProfile prof;
    const std::size_t np = branch.points.size();
    prof.alpha.resize(np);
    prof.counts.assign(np, std::vector<int>(static_cast<std::size_t>(p.n / 2 + 1), -1));
    parallel_for(np, opt.threads, [&](std::size_t i) {
        prof.alpha[i] = branch.points[i].alpha;
        try {
            prof.counts[i] = component_counts(block_counts(p, branch.points[i], ambient, opt.deflate_radius));
        } catch (const NumericalError&) {
            // left at -1; events next to this point are not reported
        }
    });
    return prof;
}

std::vector<BranchEvent> hopf_scan_releq(const LaserParams& p, const Branch& branch,
                                         const Ambient& ambient, const ScanOptions& opt) {
    return hopf_scan_releq(p, branch, ambient, count_profile(p, branch, ambient, opt), opt);
}

std::vector<BranchEvent> hopf_scan_releq(const LaserParams& p, const Branch& branch,
                                         const Ambient& ambient, const CountProfile& profile,
                                         const ScanOptions& opt) {
    const int n = p.n;
    const int r = n / 2;
    struct Job {
        std::size_t i;
        int j;
    };
    std::vector<Job> jobs;
    for (std::size_t i = 0; i + 1 < profile.counts.size(); ++i) {
        for (int j = 0; j <= r; ++j) {
            const int a = profile.counts[i][j], b = profile.counts[i + 1][j];
            if (a >= 0 && b >= 0 && a != b) jobs.push_back({i, j});
        }
    }
    std::vector<BranchEvent> events(jobs.size());
    std::vector<char> valid(jobs.size(), 0);

    parallel_for(jobs.size(), opt.threads, [&](std::size_t k) {
        const auto [i, j] = jobs[k];
        const auto blocks = blocks_of_component(j, n);
        auto comp_count = [&](const RelativeEquilibrium& re) {
            int c = 0;
            for (int m : blocks) {
                c += count_rhp_roots(block_matrix(p, re, ambient, m), 0.0, 0.0,
                                     m == 0 ? opt.deflate_radius : 0.0)
                         .count;
            }
            return c;
        };
        const RelativeEquilibrium& P0 = branch.points[i];
        const RelativeEquilibrium& P1 = branch.points[i + 1];
        const int c0 = profile.counts[i][j];
        double s_lo = 0.0, s_hi = 1.0;
        RelativeEquilibrium lo = P0, hi = P1;
        try {
            for (int it = 0; it < 60 && std::abs(hi.alpha - lo.alpha) > opt.bisect_tol; ++it) {
                const double s = 0.5 * (s_lo + s_hi);
                const RelativeEquilibrium mid = releq_between(p, branch, i, s);
                if (comp_count(mid) == c0) {
                    s_lo = s;
                    lo = mid;
                } else {
                    s_hi = s;
                    hi = mid;
                }
            }
        } catch (const NumericalError&) {
            // keep the bracket found so far
        }
        const RelativeEquilibrium mid = [&] {
            try {
                return releq_between(p, branch, i, 0.5 * (s_lo + s_hi));
            } catch (const NumericalError&) {
                return lo;
            }
        }();

        // the crossing root: Newton from seeds along the imaginary axis
        double beta0 = 0.0;
        bool found = false;
        double best_re = 1e-3;
        for (int m : blocks) {
            const CharMatrix cm = block_matrix(p, mid, ambient, m);
            const double R = std::min(apriori_bound(cm), 400.0);
            for (double b = -R; b <= R; b += 0.25) {
                cplx lam(0.0, b);
                if (!polish_root(cm, lam)) continue;
                if (m == 0 && std::abs(lam) < opt.deflate_radius) continue;
                if (std::abs(lam.real()) < best_re) {
                    best_re = std::abs(lam.real());
                    beta0 = std::abs(lam.imag());
                    found = true;
                }
            }
        }
        BranchEvent ev;
        ev.alpha = mid.alpha;
        ev.component = {ambient, j, (j == 0 || j == r) ? Sign::None : Sign::Plus};
        ev.count_before = profile.counts[i][j];
        ev.count_after = profile.counts[i + 1][j];
        const bool steady = !found || beta0 < opt.steady_radius;
        ev.type = steady ? "steady" : "hopf";
        ev.beta0 = steady ? 0.0 : beta0;
        const int jump = ev.count_after - ev.count_before;
        const double sgn = P1.alpha >= P0.alpha ? 1.0 : -1.0;
        ev.t = steady ? -jump : -jump / 2;
        try {
            const double window = 0.5;
            const int before = local_count(p, P0, ambient, blocks, ev.beta0, window, opt.deflate_radius);
            const int after = local_count(p, P1, ambient, blocks, ev.beta0, window, opt.deflate_radius);
            if (before != after) ev.t = static_cast<int>(sgn) * (before - after);
        } catch (const NumericalError&) {
            // fallback from the count jump
        }
        if (!steady) {
            for (auto& t : catalog_types(ambient, j)) {
                const int c = branch_count(t);
                ev.orbit_types.push_back({std::move(t), c});
            }
        }
        ev.conditions.nonzero_crossing = ev.t != 0;
        events[k] = std::move(ev);
        valid[k] = 1;
    });

    std::vector<BranchEvent> out;
    for (std::size_t k = 0; k < events.size(); ++k) {
        if (valid[k]) out.push_back(std::move(events[k]));
    }
    std::sort(out.begin(), out.end(),
              [](const BranchEvent& a, const BranchEvent& b) { return a.alpha < b.alpha; });

    // sign consistency among simultaneous events sharing an orbit type label
    for (std::size_t a = 0; a < out.size(); ++a) {
        for (std::size_t b = a + 1; b < out.size(); ++b) {
            if (std::abs(out[a].alpha - out[b].alpha) > 1e-5) continue;
            if (out[a].type != out[b].type) continue;
            bool shared = false;
            for (const auto& x : out[a].orbit_types) {
                for (const auto& y : out[b].orbit_types) shared |= x.type.name == y.type.name;
            }
            if (shared && (out[a].t > 0) != (out[b].t > 0)) {
                out[a].conditions.sign_consistency = false;
                out[b].conditions.sign_consistency = false;
                out[a].conditions.note = out[b].conditions.note =
                    "opposite crossing signs at the same pump value";
            }
        }
    }
    return out;
}

Branch branch_from_center(const LaserParams& p, int twist_l, double alpha_hi,
                          const ContinuationOptions& opt) {
    const int n = p.n;
    const int l = ((twist_l % n) + n) % n;
    const int j = std::min(l, n - l);
    const double th = center_threshold(p, j);
    const auto cs = find_centers(p, th, alpha_hi, j).centers;
    if (cs.empty()) {
        throw NumericalError("no center of component " + std::to_string(j) + " below alpha " +
                             std::to_string(alpha_hi));
    }
    return continue_releq(p, cs.front(), l, 0.0, alpha_hi, opt);
}

}  // namespace mlring

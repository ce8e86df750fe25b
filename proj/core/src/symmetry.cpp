#include "mlring/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

namespace mlring {

namespace {

constexpr double kPi = std::numbers::pi;

int mod(int a, int n) { return ((a % n) + n) % n; }

DihedralElement rot(int p) { return {mod(p, 8), false}; }
DihedralElement refl(int p) { return {mod(p, 8), true}; }

TwistedOrbitType make_type(std::string name, bool bold, std::vector<TwistedElement> elems,
                           int ambient_order) {
    TwistedOrbitType t;
    t.name = std::move(name);
    t.bold = bold;
    t.elements = std::move(elems);
    t.ambient_order = ambient_order;
    // projection: forget the last phase
    std::set<std::pair<std::pair<int, bool>, std::vector<int>>> proj;
    for (const auto& e : t.elements) {
        std::vector<int> head(e.phases.begin(), e.phases.end() - 1);
        proj.insert({{e.h.rotation_power, e.h.reflected}, head});
    }
    t.spatial_projection_order = static_cast<int>(proj.size());
    return t;
}

// Builds an element list from (element, phases) pairs; phases in eighths of a turn.
std::vector<TwistedElement> list(std::initializer_list<TwistedElement> xs) { return xs; }

// Family {(xi^k, f(k)...)} and optionally {(xi^k kappa, f(k)...)} for k = 0..7.
template <class F>
std::vector<TwistedElement> family(bool with_reflections, F phases_of) {
    std::vector<TwistedElement> out;
    for (int k = 0; k < 8; ++k) out.push_back({rot(k), phases_of(k)});
    if (with_reflections) {
        for (int k = 0; k < 8; ++k) out.push_back({refl(k), phases_of(k)});
    }
    return out;
}

std::vector<int> ph(std::initializer_list<int> xs) {
    std::vector<int> v;
    for (int x : xs) v.push_back(mod(x, 8));
    return v;
}

// kind 0: plain (phase); 1: D8 ambient (0, phase); 2: D8d ambient ((-1)^k, phase)
std::vector<TwistedElement> d2d(bool tilde, int kind) {
    const int r = tilde ? 1 : 0;
    auto mk = [&](DihedralElement h, int phase) {
        if (kind == 0) return TwistedElement{h, ph({phase})};
        const int middle = kind == 2 ? 4 * h.rotation_power : 0;
        return TwistedElement{h, ph({middle, phase})};
    };
    return list({mk(rot(0), 0), mk(rot(4), 4), mk(refl(r), 0), mk(refl(r + 4), 4)});
}

std::vector<TwistedElement> d4d(bool tilde, int kind) {
    const int r = tilde ? 1 : 0;
    auto mk = [&](DihedralElement h, int phase) {
        if (kind == 0) return TwistedElement{h, ph({phase})};
        const int middle = kind == 2 ? 4 * h.rotation_power : 0;
        return TwistedElement{h, ph({middle, phase})};
    };
    return list({mk(rot(0), 0), mk(rot(2), 4), mk(rot(4), 0), mk(rot(6), 4), mk(refl(r), 0),
                 mk(refl(r + 2), 4), mk(refl(r + 4), 0), mk(refl(r + 6), 4)});
}

std::vector<TwistedOrbitType> plain_catalog(int j) {
    switch (j) {
        case 0: return {plain_type("D8")};
        case 1: return {plain_type("Z8t1"), plain_type("D2d"), plain_type("D2d~")};
        case 2: return {plain_type("Z8t2"), plain_type("D4d"), plain_type("D4d~")};
        case 3: return {plain_type("Z8t3"), plain_type("D2d"), plain_type("D2d~")};
        case 4: return {plain_type("D8d")};
        default: throw std::out_of_range("component index must be 0..4");
    }
}

// kind 1: ambient D8 x {1}; kind 2: ambient D8^d.
std::vector<TwistedOrbitType> dihedral_bold_catalog(int j, int kind) {
    auto middle = [kind](int k) { return kind == 2 ? 4 * k : 0; };
    auto zt = [&](int t) {
        return make_type("Z8t" + std::to_string(t), true,
                         family(false, [&](int k) { return ph({middle(k), t * k}); }), 16);
    };
    switch (j) {
        case 0:
            return {make_type("D8", true, family(true, [&](int k) { return ph({middle(k), 0}); }),
                              16)};
        case 1:
        case 3:
            return {zt(j), make_type("D2d", true, d2d(false, kind), 16),
                    make_type("D2d~", true, d2d(true, kind), 16)};
        case 2:
            return {zt(2), make_type("D4d", true, d4d(false, kind), 16),
                    make_type("D4d~", true, d4d(true, kind), 16)};
        case 4:
            return {make_type("D8d", true,
                              family(true, [&](int k) { return ph({middle(k), 4 * k}); }), 16)};
        default: throw std::out_of_range("component index must be 0..4");
    }
}

std::vector<TwistedOrbitType> cyclic_bold_catalog(int j, int l) {
    auto fam = [l](int t) { return family(false, [l, t](int k) { return ph({l * k, t * k}); }); };
    switch (j) {
        case 0: return {make_type("Z8", true, fam(0), 8)};
        case 1:
        case 2:
        case 3: return {make_type("Z8t" + std::to_string(j), true, fam(j), 8)};
        case 4: return {make_type("Z8c", true, fam(4), 8)};
        default: throw std::out_of_range("component index must be 0..4");
    }
}

}  // namespace

DihedralElement compose(const DihedralElement& a, const DihedralElement& b, int n) {
    const int sign = a.reflected ? -1 : 1;
    return {mod(a.rotation_power + sign * b.rotation_power, n), a.reflected != b.reflected};
}

DihedralElement inverse(const DihedralElement& h, int n) {
    if (h.reflected) return h;
    return {mod(-h.rotation_power, n), false};
}

int apply_to_vertex(const DihedralElement& h, int k, int n) {
    return mod(h.rotation_power + (h.reflected ? -k : k), n);
}

NetworkState act(const DihedralElement& h, double tau, const NetworkState& x) {
    const int n = static_cast<int>(x.size());
    const DihedralElement hinv = inverse(h, n);
    const cplx phase = std::polar(1.0, tau);
    NetworkState out(x.size());
    for (int k = 0; k < n; ++k) {
        const NodeState& src = x[apply_to_vertex(hinv, k, n)];
        out[k] = {src.g, src.q, phase * src.a};
    }
    return out;
}

Eigen::MatrixXd action_matrix(const DihedralElement& h, double tau, int n) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(4 * n, 4 * n);
    const DihedralElement hinv = inverse(h, n);
    const Eigen::Matrix4d r = phase_rotation(tau);
    for (int k = 0; k < n; ++k) m.block<4, 4>(4 * k, 4 * apply_to_vertex(hinv, k, n)) = r;
    return m;
}

int Ambient::twist(int n) const {
    switch (kind) {
        case Kind::Equilibrium:
        case Kind::D8: return 0;
        case Kind::D8d: return n / 2;
        case Kind::Z8t: return l;
    }
    return 0;
}

std::string Ambient::name() const {
    switch (kind) {
        case Kind::Equilibrium: return "equilibrium";
        case Kind::D8: return "D8";
        case Kind::D8d: return "D8d";
        case Kind::Z8t: return "Z8t" + std::to_string(l);
    }
    return "?";
}

Ambient parse_ambient(const std::string& name) {
    if (name == "equilibrium") return Ambient::equilibrium();
    if (name == "D8") return Ambient::d8();
    if (name == "D8d") return Ambient::d8d();
    if (name == "Z8t1") return Ambient::z8t(1);
    if (name == "Z8t2") return Ambient::z8t(2);
    if (name == "Z8t3") return Ambient::z8t(3);
    throw ConfigError("unknown symmetry selector '" + name + "'");
}

int IsotypicalIndex::fourier_mode(int n) const {
    switch (sign) {
        case Sign::None:
        case Sign::Plus: return mod(j, n);
        case Sign::Minus: return mod(n - j, n);
    }
    return j;
}

std::string IsotypicalIndex::label() const {
    std::string s = "U" + std::to_string(j);
    if (sign == Sign::Plus) s += "+";
    if (sign == Sign::Minus) s += "-";
    return s;
}

std::vector<IsotypicalIndex> components(const Ambient& ambient, int n) {
    const int r = n / 2;
    std::vector<IsotypicalIndex> out{{ambient, 0, Sign::None}};
    for (int j = 1; j < r; ++j) {
        out.push_back({ambient, j, Sign::Plus});
        out.push_back({ambient, j, Sign::Minus});
    }
    out.push_back({ambient, r, Sign::None});
    return out;
}

std::string TwistedOrbitType::label() const { return bold ? "bold " + name : name; }

int branch_count(const TwistedOrbitType& t) {
    return t.ambient_order / t.spatial_projection_order;
}

TwistedElement multiply(const TwistedElement& a, const TwistedElement& b) {
    TwistedElement c;
    c.h = compose(a.h, b.h, 8);
    c.phases.resize(a.phases.size());
    for (std::size_t i = 0; i < a.phases.size(); ++i) c.phases[i] = mod(a.phases[i] + b.phases[i], 8);
    return c;
}

bool is_closed(const TwistedOrbitType& t) {
    for (const auto& a : t.elements) {
        for (const auto& b : t.elements) {
            const auto c = multiply(a, b);
            if (std::find(t.elements.begin(), t.elements.end(), c) == t.elements.end()) return false;
        }
    }
    return true;
}

TwistedOrbitType plain_type(const std::string& name) {
    auto single = [](int p) { return ph({p}); };
    if (name == "D8") return make_type(name, false, family(true, [&](int) { return single(0); }), 16);
    if (name == "D8d") return make_type(name, false, family(true, [&](int k) { return single(4 * k); }), 16);
    if (name == "D4d") return make_type(name, false, d4d(false, 0), 16);
    if (name == "D4d~") return make_type(name, false, d4d(true, 0), 16);
    if (name == "D2d") return make_type(name, false, d2d(false, 0), 16);
    if (name == "D2d~") return make_type(name, false, d2d(true, 0), 16);
    for (int l = 1; l <= 3; ++l) {
        if (name == "Z8t" + std::to_string(l)) {
            return make_type(name, false, family(false, [&](int k) { return single(l * k); }), 16);
        }
    }
    if (name == "1") return make_type(name, false, {TwistedElement{rot(0), ph({0})}}, 16);
    throw std::invalid_argument("unknown orbit type '" + name + "'");
}

std::vector<TwistedOrbitType> catalog_types(const Ambient& ambient, int j) {
    switch (ambient.kind) {
        case Ambient::Kind::Equilibrium: return plain_catalog(j);
        case Ambient::Kind::D8: return dihedral_bold_catalog(j, 1);
        case Ambient::Kind::D8d: return dihedral_bold_catalog(j, 2);
        case Ambient::Kind::Z8t:
            if (ambient.l < 1 || ambient.l > 3) {
                throw std::invalid_argument("Z8t ambient needs twist 1..3");
            }
            return cyclic_bold_catalog(j, ambient.l);
    }
    throw std::invalid_argument("unsupported ambient symmetry");
}

std::vector<CatalogEntry> catalog(const Ambient& ambient) {
    std::vector<CatalogEntry> out;
    for (int j = 0; j <= 4; ++j) out.push_back({j, catalog_types(ambient, j)});
    return out;
}

TwistedOrbitType classify_relative_equilibrium(const NetworkState& x, double tol) {
    const int n = static_cast<int>(x.size());
    double scale = 0.0;
    double amax = 0.0;
    for (const auto& s : x) {
        scale = std::max({scale, std::abs(s.g), std::abs(s.q), std::abs(s.a)});
        amax = std::max(amax, std::abs(s.a));
    }
    if (amax == 0.0) {
        throw std::invalid_argument("state has no field; not a relative equilibrium representative");
    }
    const double eps = tol * std::max(scale, 1e-300);

    auto same_gq = [&](const NodeState& u, const NodeState& v) {
        return std::abs(u.g - v.g) <= eps && std::abs(u.q - v.q) <= eps;
    };

    for (int l = 0; l < n; ++l) {
        bool ok = true;
        for (int k = 0; k < n && ok; ++k) {
            const cplx expect = std::polar(1.0, 2.0 * kPi * l * k / n) * x[0].a;
            ok = same_gq(x[k], x[0]) && std::abs(x[k].a - expect) <= eps;
        }
        if (!ok) continue;
        if (l == 0) return plain_type("D8");
        if (2 * l == n) return plain_type("D8d");
        const int lr = std::min(l, n - l);
        return plain_type("Z8t" + std::to_string(lr));
    }

    // x^{k + n/2} = -x^k with the S^1 element -1 acting on the field only
    bool half = n % 2 == 0;
    for (int k = 0; k < n / 2 && half; ++k) {
        const auto& u = x[k];
        const auto& v = x[k + n / 2];
        half = same_gq(u, v) && std::abs(u.a + v.a) <= eps;
    }
    if (half) return plain_type("D2d");

    bool pairs = n % 2 == 0;
    for (int k = 0; k + 1 < n && pairs; k += 2) {
        pairs = same_gq(x[k], x[k + 1]) && std::abs(x[k].a + x[k + 1].a) <= eps;
    }
    if (pairs) return plain_type("D2d~");

    return plain_type("1");
}

Eigen::MatrixXcd component_basis(const IsotypicalIndex& idx, int n) {
    const int l = idx.ambient.twist(n);
    const int m = idx.fourier_mode(n);
    const double theta = 2.0 * kPi * l / n;
    Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(4 * n, 4);
    const double norm = 1.0 / std::sqrt(static_cast<double>(n));
    for (int k = 0; k < n; ++k) {
        const cplx rho = std::polar(norm, 2.0 * kPi * m * k / n);
        b.block<4, 4>(4 * k, 0) = phase_rotation(theta * k).cast<cplx>() * rho;
    }
    return b;
}

Eigen::Matrix4cd coupling_block(const IsotypicalIndex& idx, const LaserParams& p) {
    const int n = p.n;
    const double theta = 2.0 * kPi * idx.ambient.twist(n) / n;
    const cplx rho = std::polar(1.0, 2.0 * kPi * idx.fourier_mode(n) / n);
    Eigen::Matrix4cd c = Eigen::Matrix4cd::Zero();
    c(2, 2) = std::cos(p.psi);
    c(2, 3) = -std::sin(p.psi);
    c(3, 2) = std::sin(p.psi);
    c(3, 3) = std::cos(p.psi);
    const Eigen::Matrix4cd shift =
        phase_rotation(theta).cast<cplx>() * rho + phase_rotation(-theta).cast<cplx>() * std::conj(rho);
    return p.eta * c * shift;
}

Eigen::Matrix4cd coupling_block_scalar_formula(const IsotypicalIndex& idx, const LaserParams& p) {
    const int n = p.n;
    const int r = n / 2;
    const int j = idx.j;
    const int sj = idx.sign == Sign::Minus ? -j : j;
    double a = 0.0;
    switch (idx.ambient.kind) {
        case Ambient::Kind::Equilibrium:
        case Ambient::Kind::D8: a = std::cos(2.0 * kPi * j / n); break;
        case Ambient::Kind::D8d:
            a = j == r ? 1.0 : -std::cos(2.0 * kPi * j / n);
            break;
        case Ambient::Kind::Z8t: {
            const int l = idx.ambient.l;
            if (j == 0) a = std::cos(2.0 * kPi * l / n);
            else if (j == r) a = -std::cos(2.0 * kPi * l / n);
            else a = std::cos(2.0 * kPi * (sj - 1) * l / n);
            break;
        }
    }
    Eigen::Matrix4cd c = Eigen::Matrix4cd::Zero();
    c(2, 2) = 2.0 * a * std::cos(p.psi);
    c(2, 3) = -2.0 * a * std::sin(p.psi);
    c(3, 2) = 2.0 * a * std::sin(p.psi);
    c(3, 3) = 2.0 * a * std::cos(p.psi);
    return p.eta * c;
}

std::vector<CouplingCheck> verify_coupling_blocks(const Ambient& ambient, const LaserParams& p) {
    const Eigen::MatrixXcd full = (p.eta * coupling_matrix(p)).cast<cplx>();
    std::vector<CouplingCheck> out;
    for (const auto& idx : components(ambient, p.n)) {
        const Eigen::MatrixXcd b = component_basis(idx, p.n);
        const Eigen::MatrixXcd restricted = b.adjoint() * full * b;
        CouplingCheck c;
        c.idx = idx;
        c.deviation = (restricted - coupling_block(idx, p)).cwiseAbs().maxCoeff();
        c.formula_deviation = (restricted - coupling_block_scalar_formula(idx, p)).cwiseAbs().maxCoeff();
        c.formula_mismatch = c.formula_deviation > 1e-10;
        out.push_back(c);
    }
    return out;
}

std::string format_dihedral(const DihedralElement& h) {
    std::string s;
    if (h.rotation_power == 0) s = h.reflected ? "" : "1";
    else if (h.rotation_power == 1) s = "xi";
    else s = "xi^" + std::to_string(h.rotation_power);
    if (h.reflected) s += s.empty() ? "kappa" : " kappa";
    return s;
}

}  // namespace mlring

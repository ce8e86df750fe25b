#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mlring/model.hpp"

namespace mlring {

/// xi^k or xi^k kappa. As a map on ring positions: xi sends k to k+1, kappa sends k to -k.
struct DihedralElement {
    int rotation_power = 0;
    bool reflected = false;

    friend bool operator==(const DihedralElement&, const DihedralElement&) = default;
};

DihedralElement compose(const DihedralElement& a, const DihedralElement& b, int n);
DihedralElement inverse(const DihedralElement& h, int n);
int apply_to_vertex(const DihedralElement& h, int k, int n);

/// (h, e^{i tau}) x: node k of the result is e^{tau J} x^{h^{-1}(k)}.
NetworkState act(const DihedralElement& h, double tau, const NetworkState& x);

/// Matrix of act() in the real chart (4n x 4n).
Eigen::MatrixXd action_matrix(const DihedralElement& h, double tau, int n);

/// Symmetry context for the isotypical analysis.
struct Ambient {
    enum class Kind { Equilibrium, D8, Z8t, D8d };
    Kind kind = Kind::Equilibrium;
    int l = 0;  ///< twist for Z8t (1..3); ignored otherwise

    static Ambient equilibrium() { return {Kind::Equilibrium, 0}; }
    static Ambient d8() { return {Kind::D8, 0}; }
    static Ambient d8d() { return {Kind::D8d, 0}; }
    static Ambient z8t(int l) { return {Kind::Z8t, l}; }

    /// Twist index of the relative equilibria that carry this symmetry.
    int twist(int n) const;
    bool dihedral() const { return kind != Kind::Z8t; }
    std::string name() const;

    friend bool operator==(const Ambient&, const Ambient&) = default;
};

/// Throws ConfigError for unknown names. Accepts equilibrium, D8, D8d, Z8t1..Z8t3.
Ambient parse_ambient(const std::string& name);

enum class Sign { None, Plus, Minus };

struct IsotypicalIndex {
    Ambient ambient;
    int j = 0;
    Sign sign = Sign::None;

    /// Fourier mode m in 0..n-1 carried by this component.
    int fourier_mode(int n) const;
    std::string label() const;

    friend bool operator==(const IsotypicalIndex&, const IsotypicalIndex&) = default;
};

/// U_0, U_1^+, U_1^-, ..., U_r in that order.
std::vector<IsotypicalIndex> components(const Ambient& ambient, int n);

/// Element of a twisted subgroup: a dihedral element plus one or two phases,
/// each phase p standing for exp(2 pi i p / 8).
struct TwistedElement {
    DihedralElement h;
    std::vector<int> phases;

    friend bool operator==(const TwistedElement&, const TwistedElement&) = default;
};

struct TwistedOrbitType {
    std::string name;  ///< D8, D8d, D4d, D4d~, D2d, D2d~, Z8, Z8t1, Z8t2, Z8t3, Z8c, 1
    bool bold = false;
    std::vector<TwistedElement> elements;
    int spatial_projection_order = 1;
    int ambient_order = 16;  ///< order of the spatial group the branches are counted in

    std::string label() const;
};

int branch_count(const TwistedOrbitType& t);

/// Multiplies two twisted elements (phases add mod 8).
TwistedElement multiply(const TwistedElement& a, const TwistedElement& b);
bool is_closed(const TwistedOrbitType& t);

struct CatalogEntry {
    int j = 0;
    std::vector<TwistedOrbitType> types;
};

/// Maximal twisted orbit types per component index j = 0..4 (n = 8 only).
std::vector<CatalogEntry> catalog(const Ambient& ambient);
std::vector<TwistedOrbitType> catalog_types(const Ambient& ambient, int j);

/// Named subgroups of D8 x S^1 used for the symmetry of relative equilibria.
TwistedOrbitType plain_type(const std::string& name);

TwistedOrbitType classify_relative_equilibrium(const NetworkState& x, double tol = 1e-8);

/// Orthonormal basis (columns) of one component inside C^{4n}.
Eigen::MatrixXcd component_basis(const IsotypicalIndex& idx, int n);

/// Restriction of eta * coupling to the component, expressed in component_basis.
Eigen::Matrix4cd coupling_block(const IsotypicalIndex& idx, const LaserParams& p);

/// The scalar formula a * rot(psi) with the published coefficient a for each context.
Eigen::Matrix4cd coupling_block_scalar_formula(const IsotypicalIndex& idx, const LaserParams& p);

struct CouplingCheck {
    IsotypicalIndex idx;
    double deviation = 0.0;          ///< coupling_block vs numeric restriction
    double formula_deviation = 0.0;  ///< scalar formula vs numeric restriction
    bool formula_mismatch = false;
};

std::vector<CouplingCheck> verify_coupling_blocks(const Ambient& ambient, const LaserParams& p);

/// Human-readable element name, e.g. "xi^3 kappa".
std::string format_dihedral(const DihedralElement& h);

}  // namespace mlring

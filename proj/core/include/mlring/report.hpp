#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "mlring/bifurcation.hpp"
#include "mlring/simulator.hpp"

namespace mlring {

/// %.12g
std::string fmt(double v);

struct BranchReport {
    Branch branch;
    Ambient ambient;
    std::vector<BranchEvent> events;
    std::vector<RegularityReport> regularity;  ///< one per point, may be empty
};

struct Report {
    std::vector<Center> centers;
    std::vector<BranchPrediction> predictions;  ///< parallel to centers
    std::vector<BranchReport> branches;
};

/// {centers: [...], branches: [{id, symmetry, points}], events: [...]}, pretty-printed.
std::string to_json(const Report& r);

/// Catalog of every ambient symmetry: orbit type name, elements, projection order, branch count.
std::string catalog_json();

void write_centers_csv(std::ostream& os, const std::vector<Center>& centers,
                       const std::vector<BranchPrediction>& predictions);
void write_table_csv(std::ostream& os, const TableData& t);
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);
void write_trajectory_csv(std::ostream& os, const Trajectory& tr);
void write_power_csv(std::ostream& os, const Trajectory& tr);
void write_fit_csv(std::ostream& os, const WaveFitResult& fit);

}  // namespace mlring

#pragma once
#include <memory>
#include <ostream>
#include <string>

#include "invlab/audit/ledger.hpp"
#include "invlab/cli/config.hpp"
#include "invlab/flow/correctors.hpp"
#include "invlab/layer/boundary_layer.hpp"
#include "invlab/solver/imex.hpp"

namespace invlab {

/// Everything assembled from one configuration. The grid is graded from the
/// layer width sqrt(theta nu), which itself needs the reference-flow norm,
/// so construction is staged (norm grid -> theta -> run grid).
struct LabSetup {
    BoundaryProfile profile;
    std::unique_ptr<FlatteningMap> geom;
    std::unique_ptr<ReferenceFlow> flow;
    std::unique_ptr<CorrectorPair> pair;
    std::unique_ptr<BoundaryLayerField> bl;
    std::unique_ptr<ViscositySpec> visc;
    ParamTriple triple;
    double w_h3_sup = 0.0;  // sup_t ||w0(t)||_{H^3} on the norm grid
    std::shared_ptr<Grid> grid;
    bool oscillation_resolved = true;
    double grading_ratio = 1.0;
    std::string grid_notes;
};

LabSetup build_setup(const RunConfig& cfg, bool build_grid = true);

struct RunResult {
    ConvergenceRecord record;
    double max_defect = 0.0;
    double max_divBu = 0.0;
    double max_adv_cancel = 0.0;
    double env_M = 0.0;
    double env_excess = 0.0;
    double v_init = 0.0;
    double init_offset = 0.0;  // ||U - W0||
    double C0 = 0.0, C1 = 0.0, C2 = 0.0;
    double theta = 0.0;
    bool osc_resolved = true;
    double grading_ratio = 1.0;
    int steps = 0;
    bool completed = false;
    std::string abort_reason;
};

RunResult run_one(const RunConfig& cfg, const std::string& out_dir,
                  std::uint64_t seed, std::ostream* log);

int cmd_check(const RunConfig& cfg, const std::string& out_dir, std::uint64_t seed,
              std::ostream& log);
int cmd_run(const RunConfig& cfg, const std::string& out_dir, std::uint64_t seed,
            std::ostream& log);
int cmd_sweep(const RunConfig& cfg, const std::string& out_dir, std::uint64_t seed,
              int jobs, std::ostream& log);
int cmd_report(const std::string& out_dir, std::ostream& log);

} // namespace invlab

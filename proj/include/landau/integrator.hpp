#pragma once
#include "landau/diagnostics.hpp"
#include "landau/operator.hpp"

#include <functional>
#include <optional>
#include <string>

namespace landau {

enum class Model { landau, toy, semilinear_heat, pure_heat };
enum class Scheme { rk4, euler, imex_frozen };

Model model_from_string(const std::string& s);
Scheme scheme_from_string(const std::string& s);
std::string to_string(Model m);
std::string to_string(Scheme s);

struct SchemeConfig {
    Scheme scheme = Scheme::rk4;
    double dt = 0.0;          // 0 -> from stable_dt
    double cfl_safety = 0.35;
    double t_end = 1.0;
    int record_every = 10;
    bool positivity_clip = false;
};

// right-hand sides; sym may be null for the non-landau models
ScalarField rhs(Model model, const CoulombSymbols* sym, const ScalarField& f);

// cfl_safety * h^2 / (2 dim max_diffusivity); for landau the diffusivity is
// the largest eigenvalue of (a*f) over the grid (closed-form symmetric 3x3)
double stable_dt(Model model, const CoulombSymbols* sym, const ScalarField& f,
                 const SchemeConfig& cfg);

struct RunResult {
    TrajectoryRecord record;
    ScalarField final_field;
    bool aborted = false;          // NaN/Inf encountered
    std::string abort_checkpoint;  // last checkpoint path when aborted
    double clipped_mass = 0.0;     // total mass removed by positivity clipping
    bool clip_flagged = false;     // clipped mass exceeded 1e-8 of total
    long steps = 0;
};

struct RunOptions {
    std::string checkpoint_dir;    // empty -> no checkpoints
    std::string config_hash;       // stamped into checkpoint sidecars
    std::vector<NormSpec> norm_specs;
    std::vector<ExpMomentSpec> exp_specs;
    std::vector<GevreySpec> gevrey_specs;
    // called on every recorded stamp (after diagnostics)
    std::function<void(const TrajectoryPoint&, const ScalarField&)> on_record;
};

RunResult run(Model model, const CoulombSymbols* sym, const ScalarField& f0,
              const SchemeConfig& cfg, const RunOptions& opts = {});

// mass ODE lower bound for the semilinear model: from dm/dt >= 8 pi m^2/(2L)^dim
// blow-up no later than (2L)^dim / (8 pi m0)
double semilinear_blowup_bound(const ScalarField& f0);

} // namespace landau

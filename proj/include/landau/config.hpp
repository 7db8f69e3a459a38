#pragma once
#include "landau/diagnostics.hpp"
#include "landau/integrator.hpp"

#include <map>
#include <string>
#include <vector>

namespace landau {

// flat key=value configuration: file lines "key = value" (# comments), then
// command-line overrides "key=value"; every consumer documents its keys
struct KeyValueConfig {
    std::map<std::string, std::string> kv;

    bool has(const std::string& k) const { return kv.count(k) != 0; }
    std::string get(const std::string& k, const std::string& dflt) const;
    double get_num(const std::string& k, double dflt) const;
    long get_int(const std::string& k, long dflt) const;
    bool get_flag(const std::string& k, bool dflt) const;

    // canonical rendering (sorted keys) and its FNV-1a hash
    std::string canonical() const;
    std::string hash() const;
};

KeyValueConfig parse_config_file(const std::string& path);
void apply_override(KeyValueConfig& cfg, const std::string& assignment);

struct RunConfig {
    Model model = Model::landau;
    int dim = 3;
    int n = 32;
    double L = 8.0;
    SchemeConfig scheme;
    std::string initial = "bimodal";  // maxwellian|bimodal|rough-fourier|rough-translate|<path.ldnf>
    double init_r = 0.0;              // rough-fourier decay offset
    double init_sep = 1.2;            // bimodal separation
    double init_T = 0.7;              // bimodal / maxwellian temperature
    double init_rho = 1.0;
    double init_mass = 0.35;          // rough-fourier nonneg mass
    int init_J = 1;                   // rough-translate
    double init_l = 1.0;
    double init_eps = 0.85;
    std::vector<NormSpec> norm_specs;
    std::vector<ExpMomentSpec> exp_specs;
    std::vector<GevreySpec> gevrey_specs;
    std::string outdir;
    bool checkpoints = false;  // write checkpoint_<step>.ldnf at every stamp
    bool deterministic = true;
    std::uint64_t seed = 0;
    int threads = 1;
    bool force = false;
};

// builds from key=value pairs, validating against module preconditions;
// throws std::invalid_argument with a message naming the offending key
RunConfig make_run_config(const KeyValueConfig& kv);

// parse "m=-0.5,s=1,l=5" style triples
NormSpec parse_norm_spec(const std::string& s);

ScalarField build_initial_data(const RunConfig& cfg);

} // namespace landau

#include "landau/config.hpp"

#include "landau/experiments.hpp"
#include "landau/serialize.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace landau {

namespace {
std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

double parse_num(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw std::invalid_argument("config key '" + key +
                                    "' wants a number, got '" + v + "'");
    }
}
} // namespace

std::string KeyValueConfig::get(const std::string& k, const std::string& dflt) const {
    auto it = kv.find(k);
    return it == kv.end() ? dflt : it->second;
}

double KeyValueConfig::get_num(const std::string& k, double dflt) const {
    auto it = kv.find(k);
    return it == kv.end() ? dflt : parse_num(k, it->second);
}

long KeyValueConfig::get_int(const std::string& k, long dflt) const {
    double x = get_num(k, static_cast<double>(dflt));
    long r = static_cast<long>(x);
    if (static_cast<double>(r) != x)
        throw std::invalid_argument("config key '" + k + "' wants an integer");
    return r;
}

bool KeyValueConfig::get_flag(const std::string& k, bool dflt) const {
    auto it = kv.find(k);
    if (it == kv.end()) return dflt;
    std::string v = it->second;
    std::transform(v.begin(), v.end(), v.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
    if (v == "0" || v == "false" || v == "no" || v == "off") return false;
    throw std::invalid_argument("config key '" + k + "' wants a boolean, got '" +
                                it->second + "'");
}

std::string KeyValueConfig::canonical() const {
    std::ostringstream os;
    for (const auto& [k, v] : kv) os << k << " = " << v << "\n";
    return os.str();
}

std::string KeyValueConfig::hash() const {
    // volatile keys stay out so reruns into fresh directories hash alike
    KeyValueConfig pruned = *this;
    pruned.kv.erase("outdir");
    pruned.kv.erase("force");
    pruned.kv.erase("threads");
    return hash_hex(fnv1a(pruned.canonical()));
}

KeyValueConfig parse_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::invalid_argument("cannot open config file '" + path + "'");
    KeyValueConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        std::size_t hashpos = line.find('#');
        if (hashpos != std::string::npos) line = line.substr(0, hashpos);
        line = trim(line);
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        " is not 'key = value'");
        std::string k = trim(line.substr(0, eq));
        std::string v = trim(line.substr(eq + 1));
        if (k.empty())
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        " has an empty key");
        cfg.kv[k] = v;
    }
    return cfg;
}

void apply_override(KeyValueConfig& cfg, const std::string& assignment) {
    std::size_t eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw std::invalid_argument("override '" + assignment +
                                    "' is not key=value");
    cfg.kv[trim(assignment.substr(0, eq))] = trim(assignment.substr(eq + 1));
}

NormSpec parse_norm_spec(const std::string& s) {
    NormSpec spec;
    for (const std::string& part : split(s, ',')) {
        std::string p = trim(part);
        if (p.empty()) continue;
        std::size_t eq = p.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("norm spec entry '" + p +
                                        "' is not key=value");
        std::string k = trim(p.substr(0, eq));
        double v = parse_num("norm spec " + k, trim(p.substr(eq + 1)));
        if (k == "m") spec.m = v;
        else if (k == "s") spec.s = v;
        else if (k == "l") spec.l = v;
        else throw std::invalid_argument("norm spec key '" + k + "' unknown (m,s,l)");
    }
    return spec;
}

namespace {
ExpMomentSpec parse_exp_spec(const std::string& s) {
    ExpMomentSpec spec;
    for (const std::string& part : split(s, ',')) {
        std::string p = trim(part);
        if (p.empty()) continue;
        std::size_t eq = p.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("exp-moment spec entry '" + p +
                                        "' is not key=value");
        std::string k = trim(p.substr(0, eq));
        double v = parse_num("exp spec " + k, trim(p.substr(eq + 1)));
        if (k == "a") spec.a = v;
        else if (k == "beta") spec.beta = v;
        else if (k == "M") spec.M = static_cast<int>(v);
        else throw std::invalid_argument("exp-moment spec key '" + k +
                                         "' unknown (a,beta,M)");
    }
    if (!(spec.a > 0.0) || !(spec.beta > 0.0) || spec.beta > 2.0)
        throw std::invalid_argument("exp-moment spec wants a > 0, beta in (0,2]");
    return spec;
}

GevreySpec parse_gevrey_spec(const std::string& s) {
    GevreySpec spec;
    for (const std::string& part : split(s, ',')) {
        std::string p = trim(part);
        if (p.empty()) continue;
        std::size_t eq = p.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("gevrey spec entry '" + p +
                                        "' is not key=value");
        std::string k = trim(p.substr(0, eq));
        double v = parse_num("gevrey spec " + k, trim(p.substr(eq + 1)));
        if (k == "c") spec.c = v;
        else if (k == "beta") spec.beta = v;
        else if (k == "t") spec.t = v;
        else throw std::invalid_argument("gevrey spec key '" + k +
                                         "' unknown (c,beta,t)");
    }
    return spec;
}

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "model", "dim", "n", "L", "scheme", "dt", "cfl_safety", "t_end",
        "record_every", "positivity_clip", "initial", "init_r", "init_sep",
        "init_T", "init_rho", "init_mass", "init_J", "init_l", "init_eps",
        "norms", "exp_moments", "gevrey", "outdir", "checkpoints",
        "deterministic", "seed", "threads", "force"};
    return keys;
}
} // namespace

RunConfig make_run_config(const KeyValueConfig& kv) {
    for (const auto& [k, v] : kv.kv)
        if (!known_keys().count(k))
            throw std::invalid_argument("unknown config key '" + k + "'");

    RunConfig cfg;
    cfg.model = model_from_string(kv.get("model", "landau"));
    cfg.dim = static_cast<int>(kv.get_int("dim", 3));
    if (cfg.dim != 1 && cfg.dim != 3)
        throw std::invalid_argument("config key 'dim' must be 1 or 3");
    cfg.n = static_cast<int>(kv.get_int("n", 32));
    // grid ctor re-validates; catch it here to name the offending key
    {
        int m = cfg.n;
        while (m > 0 && m % 2 == 0) m /= 2;
        while (m > 0 && m % 3 == 0) m /= 3;
        if (cfg.n < 8 || cfg.n % 2 != 0 || m != 1)
            throw std::invalid_argument(
                "config key 'n' must be even, >= 8, with only 2 and 3 as prime factors");
    }
    cfg.L = kv.get_num("L", 8.0);
    if (!(cfg.L > 0.0)) throw std::invalid_argument("config key 'L' must be positive");

    cfg.scheme.scheme = scheme_from_string(kv.get("scheme", "rk4"));
    cfg.scheme.dt = kv.get_num("dt", 0.0);
    if (cfg.scheme.dt < 0.0)
        throw std::invalid_argument("config key 'dt' must be nonnegative");
    cfg.scheme.cfl_safety = kv.get_num("cfl_safety", 0.35);
    if (!(cfg.scheme.cfl_safety > 0.0) || cfg.scheme.cfl_safety > 1.0)
        throw std::invalid_argument("config key 'cfl_safety' must lie in (0, 1]");
    cfg.scheme.t_end = kv.get_num("t_end", 1.0);
    if (!(cfg.scheme.t_end > 0.0))
        throw std::invalid_argument("config key 't_end' must be positive");
    cfg.scheme.record_every = static_cast<int>(kv.get_int("record_every", 10));
    if (cfg.scheme.record_every <= 0)
        throw std::invalid_argument("config key 'record_every' must be positive");
    cfg.scheme.positivity_clip = kv.get_flag("positivity_clip", false);

    cfg.initial = kv.get("initial", "bimodal");
    cfg.init_r = kv.get_num("init_r", 0.0);
    cfg.init_sep = kv.get_num("init_sep", 1.2);
    cfg.init_T = kv.get_num("init_T", 0.7);
    if (!(cfg.init_T > 0.0))
        throw std::invalid_argument("config key 'init_T' must be positive");
    cfg.init_rho = kv.get_num("init_rho", 1.0);
    if (!(cfg.init_rho > 0.0))
        throw std::invalid_argument("config key 'init_rho' must be positive");
    cfg.init_mass = kv.get_num("init_mass", 0.35);
    cfg.init_J = static_cast<int>(kv.get_int("init_J", 1));
    cfg.init_l = kv.get_num("init_l", 1.0);
    cfg.init_eps = kv.get_num("init_eps", 0.85);

    for (const std::string& s : split(kv.get("norms", ""), ';'))
        if (!trim(s).empty()) cfg.norm_specs.push_back(parse_norm_spec(s));
    for (const std::string& s : split(kv.get("exp_moments", ""), ';'))
        if (!trim(s).empty()) cfg.exp_specs.push_back(parse_exp_spec(s));
    for (const std::string& s : split(kv.get("gevrey", ""), ';'))
        if (!trim(s).empty()) cfg.gevrey_specs.push_back(parse_gevrey_spec(s));

    cfg.outdir = kv.get("outdir", "");
    cfg.checkpoints = kv.get_flag("checkpoints", false);
    cfg.deterministic = kv.get_flag("deterministic", true);
    long seed = kv.get_int("seed", 0);
    if (seed < 0) throw std::invalid_argument("config key 'seed' must be >= 0");
    cfg.seed = static_cast<std::uint64_t>(seed);
    cfg.threads = static_cast<int>(kv.get_int("threads", 1));
    if (cfg.threads < 1)
        throw std::invalid_argument("config key 'threads' must be >= 1");
    cfg.force = kv.get_flag("force", false);

    if (cfg.model == Model::landau && cfg.dim != 3)
        throw std::invalid_argument("the landau model needs dim = 3");
    return cfg;
}

ScalarField build_initial_data(const RunConfig& cfg) {
    VelocityGrid g(cfg.dim, cfg.n, cfg.L);
    if (cfg.initial == "maxwellian")
        return maxwellian(g, cfg.init_rho, {0.0, 0.0, 0.0}, cfg.init_T);
    if (cfg.initial == "bimodal") {
        if (g.dim != 3)
            throw std::invalid_argument("bimodal initial data needs dim = 3");
        return make_bimodal(g, cfg.init_rho, cfg.init_sep, cfg.init_T);
    }
    if (cfg.initial == "rough-fourier") {
        if (cfg.model == Model::landau)
            return make_rough_fourier_nonneg(g, cfg.init_r, cfg.seed,
                                             cfg.init_mass);
        return make_rough_fourier(g, cfg.init_r, cfg.seed);
    }
    if (cfg.initial == "rough-translate") {
        RoughDataSpec spec;
        spec.J = cfg.init_J;
        spec.l = cfg.init_l;
        spec.eps = cfg.init_eps;
        return rough_data(spec, g).f;
    }
    if (cfg.initial.size() > 5 &&
        cfg.initial.substr(cfg.initial.size() - 5) == ".ldnf") {
        ScalarField f = read_field(cfg.initial);
        if (!(f.grid == VelocityGrid(cfg.dim, cfg.n, cfg.L)))
            throw std::invalid_argument(
                "field file grid does not match the configured grid");
        return f;
    }
    throw std::invalid_argument("unknown initial data kind '" + cfg.initial + "'");
}

} // namespace landau

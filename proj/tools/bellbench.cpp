// bellbench: command-line front end for the two-qubit correlation workbench.
//
// Commands: chsh, gisin, hv-sim, optimize, figure1, figure2, figure3,
// classify. Options may also come from a flat key=value config file
// (--config-file); command-line flags override file values. Exit codes:
// 0 success, 1 invalid input, 2 internal assertion failure.

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bellbench/criteria.hpp"
#include "bellbench/experiments.hpp"
#include "bellbench/hv.hpp"
#include "bellbench/optimizer.hpp"
#include "bellbench/quantum.hpp"

namespace fs = std::filesystem;
using namespace bellbench;

namespace {

// ---------------------------------------------------------------------------
// small parsing helpers

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t");
    return s.substr(begin, end - begin + 1);
}

double parse_double_strict(const std::string& s, const std::string& what) {
    const std::string t = trim(s);
    double value = 0.0;
    const char* first = t.data();
    const char* last = t.data() + t.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || t.empty()) {
        throw std::invalid_argument(what + ": cannot parse number '" + s + "'");
    }
    return value;
}

// Angles in radians, with pi-fraction literals so the preset configurations
// are representable exactly: "pi/4", "3pi/4", "-pi/8", "2pi", "0.75".
double parse_angle(const std::string& raw, const std::string& flag) {
    std::string s = trim(raw);
    if (s.empty()) throw std::invalid_argument(flag + ": empty angle");
    double sign = 1.0;
    if (s[0] == '+' || s[0] == '-') {
        if (s[0] == '-') sign = -1.0;
        s = s.substr(1);
    }
    const auto pos = s.find("pi");
    if (pos == std::string::npos) {
        return sign * parse_double_strict(s, flag);
    }
    const std::string coef_str = trim(s.substr(0, pos));
    const std::string rest = trim(s.substr(pos + 2));
    const double coef = coef_str.empty() ? 1.0 : parse_double_strict(coef_str, flag);
    double denom = 1.0;
    if (!rest.empty()) {
        if (rest[0] != '/') {
            throw std::invalid_argument(flag + ": bad angle '" + raw +
                                        "' (expected forms: 1.25, pi/4, 3pi/4)");
        }
        denom = parse_double_strict(rest.substr(1), flag);
        if (denom == 0.0) throw std::invalid_argument(flag + ": zero denominator");
    }
    return sign * coef * std::numbers::pi / denom;
}

Direction parse_vector(const std::string& raw, const std::string& flag) {
    std::vector<double> parts;
    std::string token;
    std::istringstream in(raw);
    while (std::getline(in, token, ',')) parts.push_back(parse_double_strict(token, flag));
    if (parts.size() != 3) {
        throw std::invalid_argument(flag + ": expected three comma-separated components");
    }
    try {
        return Direction::normalized(parts[0], parts[1], parts[2]);
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument(flag + ": zero or non-finite vector");
    }
}

std::string fmt(double v) {
    if (std::abs(v) < 5e-13) v = 0.0;  // avoid "-0" in human output
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::string fmt6(double v) {
    if (std::abs(v) < 5e-13) v = 0.0;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::string describe(const Direction& d) {
    return "(" + fmt(d.x()) + ", " + fmt(d.y()) + ", " + fmt(d.z()) + ")";
}

// ---------------------------------------------------------------------------
// option table

struct CliSpec {
    CLI::App app{""};

    std::string command;
    std::string config_file;

    double alpha2 = 0.0;
    double alpha_re = 0.0, alpha_im = 0.0, beta_re = 0.0, beta_im = 0.0;

    std::string theta, phi, theta_prime, phi_prime;
    std::string vec_a, vec_b, vec_a_prime, vec_b_prime;
    bool config_a = false, config_b = false, config_c = false;

    std::string model = "factorized";
    std::int64_t n_samples = 1'000'000;
    std::uint64_t seed = 1;
    unsigned threads = 0;
    bool sample_chsh = false;

    std::string target = "chsh";
    bool planar = false;

    std::string configs = "A,B,C";
    int n_points = 101;

    double eff1_plus = 0.971, eff1_minus = 0.029;
    double eff2_plus = 0.968, eff2_minus = 0.028;
    double angular_factor = 0.984;

    double tol = 1e-10;
    std::string out;

    std::map<std::string, CLI::Option*> opts;

    bool is_set(const std::string& name) const {
        const auto it = opts.find(name);
        return it != opts.end() && it->second->count() > 0;
    }
};

void build_app(CliSpec& s) {
    CLI::App& app = s.app;
    app.name("bellbench");
    app.description(
        "Two-qubit correlation workbench: CHSH tests, the covariance criterion G(a,b),\n"
        "hidden-variables Monte Carlo, measurement-angle optimization, and figure scans.");
    app.footer(
        "Commands:\n"
        "  chsh      CHSH value and verdicts for a state and configuration\n"
        "  gisin     covariance criterion G(a,b) for a state and one direction pair\n"
        "  hv-sim    Monte Carlo correlation (or --chsh combination) under a local model\n"
        "  optimize  search measurement directions maximizing |<B>| or |G|\n"
        "  figure1   CSV scan of <B> vs alpha^2 for configurations A/B/C\n"
        "  figure2   CSV scan of G(a,b), G(a,b') vs alpha^2\n"
        "  figure3   CSV curve of the coincidence-rate prediction G(phi)\n"
        "  classify  full verdict: CHSH bound check plus the four G relations\n"
        "\n"
        "States are given by --alpha2 (real family) or the four complex amplitude\n"
        "flags. Angles accept pi fractions (pi/4, 3pi/4). BELLBENCH_OUT sets the\n"
        "default output directory for figure CSV files; a key=value metadata file\n"
        "is written next to each CSV as <name>.csv.meta.");
    app.get_formatter()->column_width(26);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    auto opt = [&s](CLI::Option* o) { s.opts[o->get_name()] = o; };

    CLI::Option* cmd = app.add_option("command", s.command,
                                      "one of: chsh, gisin, hv-sim, optimize, figure1, "
                                      "figure2, figure3, classify");
    cmd->multi_option_policy(CLI::MultiOptionPolicy::Throw);
    opt(cmd);

    opt(app.add_option("--config-file", s.config_file,
                       "flat key=value file; '#' comments; flags override file values"));

    opt(app.add_option("--alpha2", s.alpha2, "alpha^2 of the real state family, in [0, 1]"));
    opt(app.add_option("--alpha-re", s.alpha_re, "Re(alpha) of the complex amplitude pair"));
    opt(app.add_option("--alpha-im", s.alpha_im, "Im(alpha)"));
    opt(app.add_option("--beta-re", s.beta_re, "Re(beta)"));
    opt(app.add_option("--beta-im", s.beta_im, "Im(beta)"));

    opt(app.add_option("--theta", s.theta, "angle of a in the measurement plane (radians)"));
    opt(app.add_option("--phi", s.phi, "angle of b"));
    opt(app.add_option("--theta-prime", s.theta_prime, "angle of a'"));
    opt(app.add_option("--phi-prime", s.phi_prime, "angle of b'"));
    opt(app.add_option("--a", s.vec_a, "direction a as x,y,z (normalized)"));
    opt(app.add_option("--b", s.vec_b, "direction b as x,y,z"));
    opt(app.add_option("--a-prime", s.vec_a_prime, "direction a' as x,y,z"));
    opt(app.add_option("--b-prime", s.vec_b_prime, "direction b' as x,y,z"));
    opt(app.add_flag("--config-a", s.config_a, "preset (pi/3, pi/8, pi/4, pi/6)"));
    opt(app.add_flag("--config-b", s.config_b, "preset (pi/4, pi/2, 3pi/4, 0)"));
    opt(app.add_flag("--config-c", s.config_c, "preset (pi/6, 3pi/4, pi, 0)"));

    opt(app.add_option("--model", s.model, "hidden-variables kind: factorized|delta-correlated"));
    opt(app.add_option("--n-samples", s.n_samples, "Monte Carlo sample count"));
    opt(app.add_option("--seed", s.seed, "64-bit RNG seed"));
    opt(app.add_option("--threads", s.threads, "worker threads (0 = auto); result is identical"));
    opt(app.add_flag("--chsh", s.sample_chsh, "hv-sim: sample the four-term CHSH combination"));

    opt(app.add_option("--target", s.target, "optimize: chsh|g"));
    opt(app.add_flag("--planar", s.planar, "optimize chsh: restrict to the measurement plane"));

    opt(app.add_option("--configs", s.configs, "figure1/2: comma-separated subset of A,B,C"));
    opt(app.add_option("--n-points", s.n_points, "points per scan"));

    opt(app.add_option("--eff1-plus", s.eff1_plus, "polarizer 1 transmission, aligned"));
    opt(app.add_option("--eff1-minus", s.eff1_minus, "polarizer 1 transmission, crossed"));
    opt(app.add_option("--eff2-plus", s.eff2_plus, "polarizer 2 transmission, aligned"));
    opt(app.add_option("--eff2-minus", s.eff2_minus, "polarizer 2 transmission, crossed"));
    opt(app.add_option("--angular-factor", s.angular_factor, "angular-aperture factor"));

    opt(app.add_option("--tol", s.tol, "tolerance for verdicts (default 1e-10)"));
    opt(app.add_option("--out", s.out, "output CSV path"));

    app.set_version_flag("--version", std::string("bellbench ") + bellbench_version);
}

// ---------------------------------------------------------------------------
// config file

std::vector<std::pair<std::string, std::string>> load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("--config-file: cannot read '" + path + "'");
    std::vector<std::pair<std::string, std::string>> entries;
    std::set<std::string> seen;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("--config-file: line " + std::to_string(line_no) +
                                        " is not key=value");
        }
        std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        for (auto& c : key) {
            if (c == '_') c = '-';
        }
        if (key.empty()) {
            throw std::invalid_argument("--config-file: empty key on line " +
                                        std::to_string(line_no));
        }
        if (key == "config-file") {
            throw std::invalid_argument("--config-file: nested config files are not supported");
        }
        if (!seen.insert(key).second) {
            throw std::invalid_argument("--config-file: duplicate key '" + key + "'");
        }
        entries.emplace_back(key, value);
    }
    return entries;
}

// ---------------------------------------------------------------------------
// validated run plan

enum class Command { chsh, gisin, hv_sim, optimize, figure1, figure2, figure3, classify };

struct RunPlan {
    Command command = Command::chsh;
    std::optional<TwoQubitState> state;
    std::optional<ChshConfig> config;         // full four-direction configuration
    std::optional<Direction> pair_a, pair_b;  // single pair for gisin / hv-sim
    HvKind model = HvKind::factorized;
    std::vector<FigureConfig> figure_configs;
    AspectRates rates;
    std::optional<fs::path> out;
};

// Turns raw flag values into a typed plan, collecting every problem so the
// user sees one aggregated report.
class Validator {
  public:
    explicit Validator(const CliSpec& s) : s_(s) {}

    std::optional<RunPlan> run(std::vector<std::string>& errors) {
        plan_.command = parse_command();
        if (!errors_.empty()) {  // unknown command: nothing else is meaningful
            errors = errors_;
            return std::nullopt;
        }
        consume("--config-file");

        switch (plan_.command) {
            case Command::chsh:
            case Command::classify:
                need_state();
                need_full_config();
                consume("--tol");
                break;
            case Command::gisin:
                need_state();
                need_pair();
                consume("--tol");
                break;
            case Command::optimize:
                need_state();
                check_target();
                consume("--planar");
                if (s_.planar && s_.target == "g") {
                    fail("--planar applies only to --target chsh");
                }
                break;
            case Command::hv_sim:
                need_state();
                if (s_.sample_chsh) {
                    need_full_config();
                } else {
                    need_pair();
                }
                check_model();
                check_samples();
                consume("--chsh");
                consume("--seed");
                consume("--threads");
                check_out();
                break;
            case Command::figure1:
            case Command::figure2:
                check_figure_configs();
                check_n_points();
                check_out();
                break;
            case Command::figure3:
                check_rates();
                check_n_points();
                check_out();
                break;
        }

        reject_unconsumed();
        errors = errors_;
        if (!errors_.empty()) return std::nullopt;
        return std::move(plan_);
    }

  private:
    void fail(const std::string& message) { errors_.push_back(message); }

    void consume(const std::string& name) { consumed_.insert(name); }

    bool set(const std::string& name) const { return s_.is_set(name); }

    bool use(const std::string& name) {
        consume(name);
        return set(name);
    }

    Command parse_command() {
        consume("command");
        const std::string& c = s_.command;
        if (c == "chsh") return Command::chsh;
        if (c == "gisin") return Command::gisin;
        if (c == "hv-sim") return Command::hv_sim;
        if (c == "optimize") return Command::optimize;
        if (c == "figure1") return Command::figure1;
        if (c == "figure2") return Command::figure2;
        if (c == "figure3") return Command::figure3;
        if (c == "classify") return Command::classify;
        if (c.empty()) {
            fail("missing command (one of: chsh, gisin, hv-sim, optimize, figure1, figure2, "
                 "figure3, classify); see --help");
        } else {
            fail("unknown command '" + c + "' (expected chsh, gisin, hv-sim, optimize, "
                 "figure1, figure2, figure3 or classify)");
        }
        return Command::chsh;
    }

    void need_state() {
        const bool has_alpha2 = use("--alpha2");
        const bool has_complex = static_cast<bool>(
            static_cast<int>(use("--alpha-re")) | static_cast<int>(use("--alpha-im")) |
            static_cast<int>(use("--beta-re")) | static_cast<int>(use("--beta-im")));
        if (has_alpha2 && has_complex) {
            fail("give either --alpha2 or the complex amplitude flags, not both");
            return;
        }
        if (!has_alpha2 && !has_complex) {
            fail("a state is required: --alpha2 or --alpha-re/--alpha-im/--beta-re/--beta-im");
            return;
        }
        try {
            if (has_alpha2) {
                plan_.state = make_alpha_beta_state_from_alpha2(s_.alpha2);
            } else {
                plan_.state = make_alpha_beta_state(Complex{s_.alpha_re, s_.alpha_im},
                                                    Complex{s_.beta_re, s_.beta_im});
            }
        } catch (const std::invalid_argument& e) {
            fail(has_alpha2 ? std::string("--alpha2: ") + e.what()
                            : std::string("amplitude flags: ") + e.what());
        }
    }

    std::optional<ChshConfig> preset_config() {
        consume("--config-a");
        consume("--config-b");
        consume("--config-c");
        const int n = (set("--config-a") ? 1 : 0) + (set("--config-b") ? 1 : 0) +
                      (set("--config-c") ? 1 : 0);
        if (n > 1) {
            fail("give at most one of --config-a, --config-b, --config-c");
            return std::nullopt;
        }
        if (n == 0) return std::nullopt;
        if (s_.config_a) return ChshConfig::preset_a();
        if (s_.config_b) return ChshConfig::preset_b();
        return ChshConfig::preset_c();
    }

    std::optional<double> angle_of(const char* name, const std::string& raw) {
        try {
            return parse_angle(raw, name);
        } catch (const std::invalid_argument& e) {
            fail(e.what());
            return std::nullopt;
        }
    }

    std::optional<Direction> vector_of(const char* name, const std::string& raw) {
        try {
            return parse_vector(raw, name);
        } catch (const std::invalid_argument& e) {
            fail(e.what());
            return std::nullopt;
        }
    }

    void need_full_config() {
        const auto preset = preset_config();
        const int n_angles = (use("--theta") ? 1 : 0) + (use("--phi") ? 1 : 0) +
                             (use("--theta-prime") ? 1 : 0) + (use("--phi-prime") ? 1 : 0);
        const int n_vectors = (use("--a") ? 1 : 0) + (use("--b") ? 1 : 0) +
                              (use("--a-prime") ? 1 : 0) + (use("--b-prime") ? 1 : 0);
        const int groups = (preset ? 1 : 0) + (n_angles > 0 ? 1 : 0) + (n_vectors > 0 ? 1 : 0);
        if (groups > 1) {
            fail("configuration given more than one way (preset, angles, vectors)");
            return;
        }
        if (preset) {
            plan_.config = preset;
            return;
        }
        if (n_angles > 0) {
            if (n_angles < 4) {
                fail("planar configuration needs all of --theta --phi --theta-prime --phi-prime");
                return;
            }
            const auto t = angle_of("--theta", s_.theta);
            const auto p = angle_of("--phi", s_.phi);
            const auto tp = angle_of("--theta-prime", s_.theta_prime);
            const auto pp = angle_of("--phi-prime", s_.phi_prime);
            if (t && p && tp && pp) plan_.config = ChshConfig::from_planar(*t, *p, *tp, *pp);
            return;
        }
        if (n_vectors > 0) {
            if (n_vectors < 4) {
                fail("vector configuration needs all of --a --b --a-prime --b-prime");
                return;
            }
            const auto a = vector_of("--a", s_.vec_a);
            const auto b = vector_of("--b", s_.vec_b);
            const auto ap = vector_of("--a-prime", s_.vec_a_prime);
            const auto bp = vector_of("--b-prime", s_.vec_b_prime);
            if (a && b && ap && bp) plan_.config = ChshConfig(*a, *ap, *b, *bp);
            return;
        }
        fail("a configuration is required: --config-a/b/c, four angles, or four vectors");
    }

    void need_pair() {
        const auto preset = preset_config();
        const bool has_theta = use("--theta"), has_phi = use("--phi");
        const bool has_a = use("--a"), has_b = use("--b");
        const int groups = (preset ? 1 : 0) + ((has_theta || has_phi) ? 1 : 0) +
                           ((has_a || has_b) ? 1 : 0);
        if (groups > 1) {
            fail("direction pair given more than one way (preset, angles, vectors)");
            return;
        }
        if (preset) {
            plan_.pair_a = preset->a();
            plan_.pair_b = preset->b();
            return;
        }
        if (has_theta || has_phi) {
            if (!(has_theta && has_phi)) {
                fail("the angle pair needs both --theta and --phi");
                return;
            }
            const auto t = angle_of("--theta", s_.theta);
            const auto p = angle_of("--phi", s_.phi);
            if (t && p) {
                plan_.pair_a = Direction::planar(*t);
                plan_.pair_b = Direction::planar(*p);
            }
            return;
        }
        if (has_a || has_b) {
            if (!(has_a && has_b)) {
                fail("the vector pair needs both --a and --b");
                return;
            }
            const auto a = vector_of("--a", s_.vec_a);
            const auto b = vector_of("--b", s_.vec_b);
            if (a && b) {
                plan_.pair_a = a;
                plan_.pair_b = b;
            }
            return;
        }
        fail("a direction pair is required: --theta/--phi, --a/--b, or a preset config flag");
    }

    void check_model() {
        consume("--model");
        if (s_.model == "factorized") {
            plan_.model = HvKind::factorized;
        } else if (s_.model == "delta-correlated" || s_.model == "delta") {
            plan_.model = HvKind::delta_correlated;
        } else {
            fail("--model: expected 'factorized' or 'delta-correlated', got '" + s_.model + "'");
        }
    }

    void check_samples() {
        consume("--n-samples");
        if (s_.n_samples < 1) fail("--n-samples must be at least 1");
    }

    void check_target() {
        consume("--target");
        if (s_.target != "chsh" && s_.target != "g") {
            fail("--target: expected 'chsh' or 'g', got '" + s_.target + "'");
        }
    }

    void check_n_points() {
        consume("--n-points");
        if (s_.n_points < 2) fail("--n-points must be at least 2");
    }

    void check_figure_configs() {
        consume("--configs");
        std::istringstream in(s_.configs);
        std::string token;
        while (std::getline(in, token, ',')) {
            try {
                plan_.figure_configs.push_back(parse_figure_config(trim(token)));
            } catch (const std::invalid_argument& e) {
                fail(std::string("--configs: ") + e.what());
            }
        }
        if (plan_.figure_configs.empty()) fail("--configs: at least one of A, B, C required");
    }

    void check_rates() {
        consume("--eff1-plus");
        consume("--eff1-minus");
        consume("--eff2-plus");
        consume("--eff2-minus");
        consume("--angular-factor");
        plan_.rates = AspectRates{s_.eff1_plus, s_.eff1_minus, s_.eff2_plus, s_.eff2_minus,
                                  s_.angular_factor};
        const double values[5] = {s_.eff1_plus, s_.eff1_minus, s_.eff2_plus, s_.eff2_minus,
                                  s_.angular_factor};
        for (double v : values) {
            if (!(v >= 0.0 && v <= 1.0)) {
                fail("efficiency coefficients must lie in [0, 1]");
                break;
            }
        }
    }

    void check_out() {
        consume("--out");
        if (set("--out")) plan_.out = fs::path(s_.out);
    }

    void reject_unconsumed() {
        for (const auto& [name, option] : s_.opts) {
            if (option->count() > 0 && consumed_.find(name) == consumed_.end()) {
                fail("flag " + name + " is not used by command '" + s_.command + "'");
            }
        }
    }

    const CliSpec& s_;
    RunPlan plan_;
    std::vector<std::string> errors_;
    std::set<std::string> consumed_;
};

// ---------------------------------------------------------------------------
// command implementations

fs::path default_figure_path(const char* name) {
    if (const char* dir = std::getenv("BELLBENCH_OUT"); dir != nullptr && *dir != '\0') {
        return fs::path(dir) / name;
    }
    return fs::path(name);
}

void print_config(const ChshConfig& config) {
    if (config.planar()) {
        const auto& p = *config.planar();
        std::cout << "config: planar (theta, phi, theta', phi') = (" << fmt(p.theta) << ", "
                  << fmt(p.phi) << ", " << fmt(p.theta_prime) << ", " << fmt(p.phi_prime)
                  << ")\n";
    }
    std::cout << "  a  = " << describe(config.a()) << "\n  a' = " << describe(config.a_prime())
              << "\n  b  = " << describe(config.b()) << "\n  b' = " << describe(config.b_prime())
              << "\n";
}

void print_verdict(const CriterionVerdict& verdict, double tol) {
    std::cout << "chsh_value = " << fmt(verdict.chsh) << "\n";
    std::cout << "CHSH verdict: "
              << (verdict.chsh_violated ? "violated (|<B>| > 2)" : "satisfied (|<B>| <= 2)")
              << "\n";
    std::cout << "tsirelson_ok: " << (verdict.tsirelson_ok ? "yes" : "NO (bug)") << "\n";
    const char* pair_names[4] = {"G(a,b)  ", "G(a,b') ", "G(a',b) ", "G(a',b')"};
    for (std::size_t i = 0; i < 4; ++i) {
        std::cout << pair_names[i] << " = " << fmt(verdict.g_values[i]) << "\n";
    }
    std::cout << "G verdict: "
              << (verdict.g_zero ? "all four vanish: consistent with local realism"
                                 : "nonzero: incompatible with local realism")
              << " (max |G| = " << fmt(verdict.max_abs_g) << ", tol " << fmt(tol) << ")\n";
    std::cout << "case: " << to_string(verdict.label) << "\n";
}

int run_chsh_or_classify(const CliSpec& s, const RunPlan& plan) {
    const auto verdict = classify(*plan.state, *plan.config, s.tol);
    std::cout << "concurrence = " << fmt(concurrence(*plan.state)) << "\n";
    print_config(*plan.config);
    print_verdict(verdict, s.tol);
    return 0;
}

int run_gisin(const CliSpec& s, const RunPlan& plan) {
    const double g = g_value(*plan.state, *plan.pair_a, *plan.pair_b);
    std::cout << "a = " << describe(*plan.pair_a) << ", b = " << describe(*plan.pair_b) << "\n";
    std::cout << "G(a,b) = " << fmt6(g) << "\n";
    std::cout << (std::abs(g) <= s.tol
                      ? "verdict: consistent with local realism (G = 0 within tol)"
                      : "verdict: incompatible with local realism (G != 0)")
              << "\n";
    return 0;
}

int run_optimize(const CliSpec& s, const RunPlan& plan) {
    if (s.target == "chsh") {
        const auto result = maximize_chsh(*plan.state, s.planar);
        std::cout << "target: max |<B>| (" << (s.planar ? "planar" : "general") << " search)\n";
        std::cout << "best_value = " << fmt(result.best_value) << "\n";
        print_config(result.best_config);
        std::cout << "evaluations: " << result.evaluations << ", refined to step "
                  << fmt(result.grid_resolution) << "\n";
        std::cout << (result.best_value > 2.0 + 1e-9
                          ? "a violating configuration exists: state is entangled"
                          : "no violation found: consistent with a separable state")
                  << "\n";
    } else {
        const auto result = maximize_g(*plan.state);
        std::cout << "target: max |G(a,b)|\n";
        std::cout << "best_value = " << fmt(result.best_value) << "\n";
        std::cout << "  a = " << describe(result.best_a) << "\n  b = " << describe(result.best_b)
                  << "\n";
        std::cout << "evaluations: " << result.evaluations << "\n";
    }
    return 0;
}

int run_hv_sim(const CliSpec& s, const RunPlan& plan) {
    const HvModel model =
        plan.model == HvKind::factorized ? HvModel::factorized() : HvModel::delta_correlated();
    McEstimate est;
    std::string quantity;
    if (s.sample_chsh) {
        quantity = "chsh";
        est = hv_chsh(model, *plan.state, *plan.config, s.n_samples, s.seed, s.threads);
    } else {
        quantity = "correlation";
        est = hv_correlation(model, *plan.state, *plan.pair_a, *plan.pair_b, s.n_samples, s.seed,
                             s.threads);
    }
    std::cout << "model: "
              << (plan.model == HvKind::factorized ? "factorized" : "delta-correlated")
              << ", quantity: " << quantity << "\n";
    std::cout << "mean = " << fmt(est.mean) << " +- " << fmt(est.std_error) << " (std error)\n";
    std::cout << "n_samples = " << est.n_samples << ", seed = " << est.seed << "\n";
    if (est.non_product_state) {
        std::cout << "note: non-product state; this model reproduces only marginal products\n";
    }
    if (plan.out) {
        std::ofstream out(*plan.out, std::ios::binary);
        if (!out) throw std::invalid_argument("cannot open output file: " + plan.out->string());
        out << "quantity,mean,std_error,n_samples,seed,non_product_state\n";
        out << quantity << ',' << fmt(est.mean) << ',' << fmt(est.std_error) << ','
            << est.n_samples << ',' << est.seed << ',' << (est.non_product_state ? 1 : 0) << '\n';
        out.flush();
        if (!out) throw std::runtime_error("failed writing output file: " + plan.out->string());
        std::cout << "wrote " << plan.out->string() << "\n";
    }
    return 0;
}

int run_figure(const CliSpec& s, const RunPlan& plan) {
    FigureScan scan;
    const char* default_name = nullptr;
    if (plan.command == Command::figure1) {
        scan = figure1_scan(plan.figure_configs, s.n_points);
        default_name = "figure1.csv";
    } else if (plan.command == Command::figure2) {
        scan = figure2_scan(plan.figure_configs, s.n_points);
        default_name = "figure2.csv";
    } else {
        scan = figure3_curve(plan.rates, s.n_points);
        default_name = "figure3.csv";
    }
    const fs::path path = plan.out ? *plan.out : default_figure_path(default_name);
    write_csv(scan, path);
    std::cout << "wrote " << path.string() << " (" << scan.x.size() << " rows, "
              << scan.series.size() << " series) and " << path.string() << ".meta\n";
    return 0;
}

int dispatch(const CliSpec& s, const RunPlan& plan) {
    switch (plan.command) {
        case Command::chsh:
        case Command::classify:
            return run_chsh_or_classify(s, plan);
        case Command::gisin:
            return run_gisin(s, plan);
        case Command::optimize:
            return run_optimize(s, plan);
        case Command::hv_sim:
            return run_hv_sim(s, plan);
        case Command::figure1:
        case Command::figure2:
        case Command::figure3:
            return run_figure(s, plan);
    }
    return 2;  // unreachable
}

}  // namespace

int main(int argc, char** argv) {
    CliSpec spec;
    build_app(spec);
    try {
        try {
            spec.app.parse(argc, argv);
        } catch (const CLI::CallForHelp&) {
            std::cout << spec.app.help();
            return 0;
        } catch (const CLI::CallForVersion&) {
            std::cout << spec.app.version() << "\n";
            return 0;
        } catch (const CLI::ParseError& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 1;
        }

        // With a config file, re-parse with the file entries prepended so that
        // command-line flags win: the option policy keeps the last occurrence.
        CliSpec merged;
        build_app(merged);
        CliSpec* active = &spec;
        if (spec.is_set("--config-file")) {
            const auto entries = load_config_file(spec.config_file);
            std::vector<std::string> args;
            const bool argv_has_command = spec.is_set("command");
            for (const auto& [key, value] : entries) {
                if (key == "command") {
                    if (!argv_has_command) args.push_back(value);
                    continue;
                }
                args.push_back("--" + key + "=" + value);
            }
            for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
            std::reverse(args.begin(), args.end());  // CLI11 consumes reversed vectors
            try {
                merged.app.parse(args);
            } catch (const CLI::CallForHelp&) {
                std::cout << merged.app.help();
                return 0;
            } catch (const CLI::ParseError& e) {
                std::cerr << "error (command line or config file): " << e.what() << "\n";
                return 1;
            }
            active = &merged;
        }

        std::vector<std::string> errors;
        Validator validator(*active);
        const auto plan = validator.run(errors);
        if (!plan) {
            for (const auto& e : errors) std::cerr << "error: " << e << "\n";
            std::cerr << "(" << errors.size() << " problem" << (errors.size() == 1 ? "" : "s")
                      << "; run with --help for usage)\n";
            return 1;
        }
        return dispatch(*active, *plan);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::logic_error& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

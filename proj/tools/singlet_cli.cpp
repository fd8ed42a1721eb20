// Command-line front end: Bell-parameter evaluation, per-sector tables, angle
// and gain sweeps, and the loss study. Emits deterministic CSV or JSON.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <regex>
#include <sstream>
#include <string>

#include "singlet/bell.hpp"
#include "singlet/errors.hpp"
#include "singlet/losses.hpp"
#include "singlet/optimize.hpp"
#include "singlet/parallel.hpp"
#include "singlet/report_io.hpp"

namespace {

using namespace singlet;

constexpr int kExitConfig = 2;
constexpr int kExitDegenerate = 3;

std::string fmt(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

// Accepts plain radians or pi-literals: "pi/4", "-pi/4", "-0.17pi", "0.5pi".
double parse_angle(const std::string& text) {
    static const std::regex pi_form(R"(^\s*([+-]?)(\d*\.?\d*)\s*pi\s*(?:/\s*(\d+\.?\d*))?\s*$)");
    std::smatch m;
    if (std::regex_match(text, m, pi_form)) {
        double value = std::numbers::pi;
        if (m[2].matched && m[2].length() > 0) value *= std::stod(m[2].str());
        if (m[3].matched && m[3].length() > 0) value /= std::stod(m[3].str());
        if (m[1].str() == "-") value = -value;
        return value;
    }
    std::size_t pos = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &pos);
    } catch (const std::exception&) {
        throw ConfigError("cannot parse angle '" + text + "'");
    }
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos != text.size()) throw ConfigError("cannot parse angle '" + text + "'");
    return value;
}

struct CommonOptions {
    double g = 0.8;
    std::string filter = "none";
    int delta_th = 0;
    double eps = 1e-10;
    std::string format = "csv";
    std::string output;
    unsigned jobs = 0;
    bool timestamp = false;
    std::optional<std::string> angle_text;
};

FilterSpec make_filter(const CommonOptions& opt) {
    if (opt.filter == "none") return FilterSpec::none();
    if (opt.filter == "corner") return FilterSpec::corner(opt.delta_th);
    if (opt.filter == "mdf") return FilterSpec::mdf(opt.delta_th);
    throw ConfigError("unknown filter '" + opt.filter + "'");
}

void emit(const CommonOptions& opt, const std::string& text) {
    if (opt.output.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(opt.output, std::ios::binary);
    if (!out) throw ConfigError("cannot open output path '" + opt.output + "'");
    out << text;
}

std::string header(const CommonOptions& opt, const std::string& cmd, double tail_mass,
                   const std::string& extra = "") {
    std::ostringstream os;
    os << "# schema=v1\n";
    os << "# cmd=" << cmd << " g=" << fmt(opt.g) << " filter=" << opt.filter
       << " delta_th=" << opt.delta_th << " eps=" << fmt(opt.eps) << " jobs=" << opt.jobs;
    if (!extra.empty()) os << " " << extra;
    os << "\n";
    if (opt.timestamp) {
        os << "# generated_at=" << std::time(nullptr) << "\n";
    }
    os << "# tail_mass=" << fmt(tail_mass) << "\n";
    return os.str();
}

void add_common(CLI::App* cmd, CommonOptions& opt, bool with_angle = true) {
    cmd->add_option("--g", opt.g, "amplification gain")->check(CLI::NonNegativeNumber);
    cmd->add_option("--filter", opt.filter, "preselection filter")
        ->check(CLI::IsMember({"none", "corner", "mdf"}));
    cmd->add_option("--delta-th", opt.delta_th, "filter threshold")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--eps", opt.eps, "sector tail tolerance");
    cmd->add_option("--format", opt.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--output", opt.output, "output path (default stdout)");
    cmd->add_option("--jobs", opt.jobs, "worker threads (0 = all cores)");
    cmd->add_flag("--timestamp", opt.timestamp, "stamp outputs with wall time");
    if (with_angle) {
        opt.angle_text.reset();
        auto* a = cmd->add_option_function<std::string>(
            "--angle", [&opt](const std::string& v) { opt.angle_text = v; },
            "macro angle beta (radians or pi literal); optimized when absent");
        (void)a;
    }
}

double resolve_angle(const CommonOptions& opt, const Gain& gain, const FilterSpec& filter) {
    if (opt.angle_text) return parse_angle(*opt.angle_text);
    return optimal_angle(gain, filter, opt.eps).beta_opt;
}

int run_bell(const CommonOptions& opt, bool optimize_all_angles) {
    const Gain gain(opt.g);
    const FilterSpec filter = make_filter(opt);
    double beta = resolve_angle(opt, gain, filter);
    BellSettings settings = BellSettings::standard(beta);
    if (optimize_all_angles) {
        // Coordinate-wise refinement of all four angles, standard set as seed.
        const auto value = [&](const BellSettings& s) {
            return bell_parameter(s, gain, filter, opt.eps).b_total;
        };
        const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
        for (int round = 0; round < 3; ++round) {
            for (double* coord : {&settings.alpha, &settings.alpha_prime, &settings.beta,
                                  &settings.beta_prime}) {
                double a = *coord - 0.5, b = *coord + 0.5;
                double c = b - golden * (b - a), d = a + golden * (b - a);
                BellSettings sc = settings, sd = settings;
                while (b - a > 1e-6) {
                    *coord = c;
                    sc = settings;
                    *coord = d;
                    sd = settings;
                    if (value(sc) > value(sd)) {
                        b = d; d = c; c = b - golden * (b - a);
                    } else {
                        a = c; c = d; d = a + golden * (b - a);
                    }
                }
                *coord = 0.5 * (a + b);
            }
        }
    }
    const BellReport report = bell_parameter(settings, gain, filter, opt.eps);
    emit(opt, report_to_json(report) + "\n");
    return 0;
}

int run_sectors(const CommonOptions& opt, int k_max) {
    const Gain gain(opt.g);
    const FilterSpec filter = make_filter(opt);
    const double beta = resolve_angle(opt, gain, filter);
    const WeightVector weights = preselected_weights(gain, filter, opt.eps);
    std::ostringstream os;
    os << header(opt, "sectors", weights.tail_mass, "angle=" + fmt(beta) + " kmax=" + std::to_string(k_max));
    os << "k,V_k,A_k,B_k,weight\n";
    for (int k = 0; k <= k_max; ++k) {
        const double w = (k < static_cast<int>(weights.weights.size())) ? weights.weights[k] : 0.0;
        const auto [v, a] = sector_va(k, beta, filter);
        os << k << "," << fmt(v) << "," << fmt(a) << "," << fmt(2.0 * (v + a)) << ","
           << fmt(w) << "\n";
    }
    emit(opt, os.str());
    return 0;
}

int run_scan_angle(const CommonOptions& opt) {
    const Gain gain(opt.g);
    const FilterSpec filter = make_filter(opt);
    const AngleScan scan = optimal_angle(gain, filter, opt.eps);
    const WeightVector weights = preselected_weights(gain, filter, opt.eps);
    std::ostringstream os;
    os << header(opt, "scan-angle", weights.tail_mass,
                 "beta_opt=" + fmt(scan.beta_opt) + " objective_opt=" + fmt(scan.objective_opt));
    os << "beta,V,A,objective\n";
    for (const AnglePoint& p : scan.grid)
        os << fmt(p.beta) << "," << fmt(p.visibility) << "," << fmt(p.antivisibility) << ","
           << fmt(p.objective) << "\n";
    emit(opt, os.str());
    return 0;
}

int run_scan_gain(const CommonOptions& opt, double g_min, double g_max, int steps) {
    const FilterSpec filter = make_filter(opt);
    const auto rows = scan_gain(g_min, g_max, steps, filter, opt.eps);
    std::ostringstream os;
    os << header(opt, "scan-gain", 0.0,
                 "g_min=" + fmt(g_min) + " g_max=" + fmt(g_max) + " steps=" + std::to_string(steps));
    os << "g,beta_opt,B\n";
    for (const GainScanRow& row : rows)
        os << fmt(row.g) << "," << fmt(row.beta_opt) << "," << fmt(row.bell) << "\n";
    emit(opt, os.str());
    return 0;
}

int run_losses(const CommonOptions& opt, double lambda_a, double lambda_b, int grid,
               const std::string& convention, const std::optional<std::string>& freeze) {
    const Gain gain(opt.g);
    LossBellOptions options;
    options.convention = (convention == "minus-one") ? VacuumConvention::AssignMinusOne
                                                     : VacuumConvention::OperatorAsWritten;
    if (freeze) {
        options.reoptimize_angle = false;
        options.frozen_beta = parse_angle(*freeze);
    }
    std::ostringstream os;
    os << header(opt, "losses", 0.0,
                 "lambda_a=" + fmt(lambda_a) + " lambda_b=" + fmt(lambda_b) +
                     " grid=" + std::to_string(grid) + " vacuum=" + convention);
    os << "lambda_a,lambda_b,beta_used,B\n";
    const int n = std::max(1, grid);
    for (int i = 0; i < n; ++i) {
        const double la = (n == 1) ? lambda_a : lambda_a * static_cast<double>(i) / (n - 1);
        for (int j = 0; j < n; ++j) {
            const double lb = (n == 1) ? lambda_b : lambda_b * static_cast<double>(j) / (n - 1);
            const BellReport report =
                bell_with_losses(gain, LossParams(la, lb), options, opt.eps);
            os << fmt(la) << "," << fmt(lb) << "," << fmt(report.angle_used) << ","
               << fmt(report.b_total) << "\n";
        }
    }
    emit(opt, os.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"CHSH-Bell simulation for preselected micro-macro polarization singlets"};
    app.require_subcommand(1);

    CommonOptions opt;
    bool optimize_all_angles = false;
    int k_max = 20;
    double g_min = 0.05, g_max = 1.5;
    int steps = 30;
    double lambda_a = 0.0, lambda_b = 0.0;
    int grid = 1;
    std::string convention = "operator";
    std::optional<std::string> freeze;

    CLI::App* bell = app.add_subcommand("bell", "single Bell-parameter report (JSON)");
    add_common(bell, opt);
    bell->add_flag("--optimize-all-angles", optimize_all_angles,
                   "refine all four CHSH angles instead of the standard set");

    CLI::App* sectors = app.add_subcommand("sectors", "per-sector V_k, A_k, B_k table");
    add_common(sectors, opt);
    sectors->add_option("--kmax", k_max, "largest sector index")->check(CLI::NonNegativeNumber);

    CLI::App* scan_angle_cmd = app.add_subcommand("scan-angle", "objective over the angle grid");
    add_common(scan_angle_cmd, opt, false);

    CLI::App* scan_gain_cmd = app.add_subcommand("scan-gain", "optimum angle and B per gain");
    add_common(scan_gain_cmd, opt, false);
    scan_gain_cmd->add_option("--g-min", g_min, "sweep start");
    scan_gain_cmd->add_option("--g-max", g_max, "sweep end");
    scan_gain_cmd->add_option("--steps", steps, "sweep rows");

    CLI::App* losses_cmd = app.add_subcommand("losses", "Bell parameter under photon loss");
    add_common(losses_cmd, opt, false);
    losses_cmd->add_option("--lambda-a", lambda_a, "micro-mode loss (or sweep max with --grid)");
    losses_cmd->add_option("--lambda-b", lambda_b, "macro-mode loss (or sweep max with --grid)");
    losses_cmd->add_option("--grid", grid, "N x N sweep over [0, lambda] per axis");
    losses_cmd->add_option("--vacuum-convention", convention, "micro vacuum outcome")
        ->check(CLI::IsMember({"operator", "minus-one"}));
    losses_cmd
        ->add_option_function<std::string>(
            "--freeze-angle", [&freeze](const std::string& v) { freeze = v; },
            "evaluate at this beta instead of re-optimizing per loss point")
        ->expected(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }

    try {
        if (!(opt.eps > 0.0 && opt.eps < 1.0)) throw ConfigError("eps must lie in (0,1)");
        set_parallelism(opt.jobs);
        if (bell->parsed()) return run_bell(opt, optimize_all_angles);
        if (sectors->parsed()) return run_sectors(opt, k_max);
        if (scan_angle_cmd->parsed()) return run_scan_angle(opt);
        if (scan_gain_cmd->parsed()) return run_scan_gain(opt, g_min, g_max, steps);
        if (losses_cmd->parsed()) return run_losses(opt, lambda_a, lambda_b, grid, convention, freeze);
        throw ConfigError("no subcommand selected");
    } catch (const DegenerateFilterError& e) {
        std::cerr << "degenerate filter: " << e.what() << "\n";
        return kExitDegenerate;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}

/* hyperzero — command-line front end.
 *
 * Subcommands: generate, interval, parametrize, certify, onset, density,
 * conjecture2.  Instances are JSON documents {"roots":[...], "leading":"p/q",
 * "r":int} read from a file or stdin ("-").  Results go to stdout (JSON,
 * JSON-lines, or CSV depending on the subcommand), logs to stderr.
 *
 * Exit codes: 0 success / all certified; 2 violations found; 3 indeterminate
 * results remained; 64 usage error; 1 runtime failure. */

#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hyperzero/io.hpp"
#include "hyperzero/parallel.hpp"

namespace {

std::string read_all(const std::string &path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream f(path);
    if (!f) throw hyperzero::parse_error("cannot open instance file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

hyperzero::InstanceSpec load_spec(const std::string &path) {
    return hyperzero::parse_instance(read_all(path));
}

hyperzero::ProblemInstance load_instance(const std::string &path) {
    return hyperzero::instance_from_spec(load_spec(path));
}

std::vector<hyperzero::Rational> parse_rational_list(const std::string &text) {
    std::vector<hyperzero::Rational> out;
    std::string item;
    std::istringstream ss(text);
    while (std::getline(ss, item, ',')) out.push_back(hyperzero::parse_rational(item));
    if (out.empty()) throw hyperzero::parse_error("empty rational list");
    return out;
}

int exit_code_for(const std::vector<hyperzero::HyperbolicityCertificate> &certs) {
    bool indeterminate = false;
    for (const auto &c : certs) {
        if (c.verdict == hyperzero::Verdict::NOT_ALL_REAL ||
            c.verdict == hyperzero::Verdict::REAL_NOT_CONTAINED)
            return 2;
        if (c.verdict == hyperzero::Verdict::INDETERMINATE) indeterminate = true;
    }
    return indeterminate ? 3 : 0;
}

}  // namespace

int main(int argc, char **argv) {
    using namespace hyperzero;
    CLI::App app{"hyperzero: exact analysis of the polynomial sequences generated by 1/(P(t)+zt^r)"};
    app.fallthrough();  // allow -i/--jobs after the subcommand name
    app.require_subcommand(1);

    std::string instance_path = "-";
    int jobs = 1;
    app.add_option("-i,--instance", instance_path,
                   "instance JSON file, or '-' for stdin (default)")
        ->capture_default_str();
    app.add_option("-j,--jobs", jobs, "worker threads (HYPERZERO_JOBS overrides)")
        ->capture_default_str();

    auto *cmd_generate = app.add_subcommand("generate", "emit H_0..H_m_max as JSON lines");
    int gen_m_max = 10;
    cmd_generate->add_option("--m-max", gen_m_max, "largest index m")->capture_default_str();

    auto *cmd_interval = app.add_subcommand("interval", "critical interval (a, b) as JSON");
    std::string interval_width = "1/1099511627776";  // 2^-40
    cmd_interval->add_option("--width", interval_width, "target enclosure width (rational)")
        ->capture_default_str();

    auto *cmd_parametrize =
        app.add_subcommand("parametrize", "sweep the angle parametrization, CSV output");
    int par_grid = 200, par_l = -1;
    std::optional<double> par_min, par_max;
    std::optional<int> par_m;
    cmd_parametrize->add_option("--theta-grid", par_grid, "number of grid points")
        ->capture_default_str();
    cmd_parametrize->add_option("--theta-min", par_min, "grid start (default 1e-2*pi/r)");
    cmd_parametrize->add_option("--theta-max", par_max, "grid end (default (1-1e-2)*pi/r)");
    cmd_parametrize->add_option("--l", par_l, "branch index (default n-1)");
    cmd_parametrize->add_option("--m", par_m, "also emit h_value for this m");

    auto *cmd_certify = app.add_subcommand("certify", "certificates for m = 0..m_max, JSON lines");
    int cert_m_max = 50;
    cmd_certify->add_option("--m-max", cert_m_max, "largest index m")->capture_default_str();

    auto *cmd_onset = app.add_subcommand("onset", "least m from which all certificates pass");
    int onset_m_max = 50;
    cmd_onset->add_option("--m-max", onset_m_max, "largest index m")->capture_default_str();

    auto *cmd_density = app.add_subcommand("density", "zero-distribution metrics on (a, b)");
    int den_m_max = 100, den_bins = 100, den_m_start = 0;
    std::optional<double> den_b_cap;
    cmd_density->add_option("--m-max", den_m_max, "largest index m")->capture_default_str();
    cmd_density->add_option("--bins", den_bins, "number of coverage bins")->capture_default_str();
    cmd_density->add_option("--b-cap", den_b_cap, "upper cutoff when b = inf (default a + 10*max(1,a))");
    cmd_density->add_option("--m-start", den_m_start, "aggregate zeros from this m on")
        ->capture_default_str();

    auto *cmd_conj2 = app.add_subcommand(
        "conjecture2", "realness scan for the denominator P(t) + C t^s + z t^r");
    std::string conj_C = "0";
    int conj_s = 0, conj_m_max = 50, conj_r = 1;
    std::optional<std::string> conj_poly;
    cmd_conj2->add_option("--C", conj_C, "coefficient C (rational)")->capture_default_str();
    cmd_conj2->add_option("--s", conj_s, "exponent s of the C term")->capture_default_str();
    cmd_conj2->add_option("--m-max", conj_m_max, "largest index m")->capture_default_str();
    cmd_conj2->add_option("--poly", conj_poly,
                          "base polynomial as comma-separated rational coefficients "
                          "(bypasses --instance; requires --r)");
    cmd_conj2->add_option("--r", conj_r, "exponent r of the z term (with --poly)")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return 64;
    }

    try {
        if (app.got_subcommand(cmd_generate)) {
            ProblemInstance inst = load_instance(instance_path);
            GeneratedSequence seq = generate(inst, gen_m_max);
            for (int m = 0; m <= gen_m_max; ++m) {
                json line;
                line["m"] = m;
                line["degree"] = seq.at(m).degree();
                line["coeffs"] = poly_to_json(seq.at(m));
                std::cout << line.dump() << "\n";
            }
            return 0;
        }

        if (app.got_subcommand(cmd_interval)) {
            ProblemInstance inst = load_instance(instance_path);
            Rational width = parse_rational(interval_width);
            IntervalReport rep = interval_report(inst, width);
            std::cout << interval_report_to_json(rep).dump() << "\n";
            return 0;
        }

        if (app.got_subcommand(cmd_parametrize)) {
            ProblemInstance inst = load_instance(instance_path);
            double lo = par_min.value_or(1e-2 * std::numbers::pi / inst.r);
            double hi = par_max.value_or((1 - 1e-2) * std::numbers::pi / inst.r);
            ThetaGrid grid = theta_grid(inst, par_grid, lo, hi, par_l, par_m, jobs);
            std::cout << theta_grid_csv(grid);
            return 0;
        }

        if (app.got_subcommand(cmd_certify)) {
            ProblemInstance inst = load_instance(instance_path);
            GeneratedSequence seq = generate(inst, cert_m_max);
            IntervalReport rep = interval_report(inst);
            std::vector<HyperbolicityCertificate> certs((size_t)cert_m_max + 1);
            parallel_for_chunks((size_t)cert_m_max + 1, resolve_jobs(jobs),
                                [&](size_t begin, size_t end, unsigned) {
                                    for (size_t m = begin; m < end; ++m)
                                        certs[m] = certify(inst, seq, rep, (int)m);
                                });
            for (const auto &c : certs) std::cout << certificate_to_json(c).dump() << "\n";
            return exit_code_for(certs);
        }

        if (app.got_subcommand(cmd_onset)) {
            ProblemInstance inst = load_instance(instance_path);
            OnsetResult res = onset(inst, onset_m_max, jobs);
            json out;
            out["m0"] = res.m0 ? json(*res.m0) : json(nullptr);
            out["violations"] = json::array();
            for (const auto &[m, v] : res.violations)
                out["violations"].push_back({{"m", m}, {"verdict", verdict_name(v)}});
            std::cout << out.dump() << "\n";
            return exit_code_for(res.certificates);
        }

        if (app.got_subcommand(cmd_density)) {
            ProblemInstance inst = load_instance(instance_path);
            GeneratedSequence seq = generate(inst, den_m_max);
            IntervalReport rep = interval_report(inst);
            double b_cap = den_b_cap.value_or(default_b_cap(rep));
            DensityProfile prof =
                density_profile(inst, seq, rep, den_m_max, den_bins, b_cap, den_m_start);
            std::cout << density_profile_to_json(prof).dump() << "\n";
            return 0;
        }

        if (app.got_subcommand(cmd_conj2)) {
            Rational C = parse_rational(conj_C);
            Conjecture2Result res;
            if (conj_poly) {
                std::vector<Rational> den = parse_rational_list(*conj_poly);
                if ((int)den.size() < conj_s + 1) den.resize((size_t)conj_s + 1, Rational(0));
                den[(size_t)conj_s] += C;
                bool hypothesis = sign(C) * (conj_s - conj_r) >= 0;
                res = conjecture2_scan_core(den, conj_r, conj_m_max, hypothesis);
            } else {
                InstanceSpec spec = load_spec(instance_path);
                res = conjecture2_scan(spec.roots, spec.leading, C, conj_s, spec.r, conj_m_max);
            }
            for (const auto &row : res.rows)
                std::cout << conjecture2_row_to_json(row).dump() << "\n";
            json summary;
            summary["hypothesis_holds"] = res.hypothesis_holds;
            summary["first_nonreal_m"] =
                res.first_nonreal_m ? json(*res.first_nonreal_m) : json(nullptr);
            std::cout << summary.dump() << "\n";
            return res.first_nonreal_m ? 2 : 0;
        }
    } catch (const parse_error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const validation_error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const numeric_error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 64;
}

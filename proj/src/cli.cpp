#include "smoothavg/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include "smoothavg/errors.hpp"
#include "smoothavg/functional.hpp"
#include "smoothavg/hypergeom.hpp"
#include "smoothavg/kernel.hpp"
#include "smoothavg/optimizer.hpp"
#include "smoothavg/spectral.hpp"
#include "smoothavg/whittaker.hpp"

namespace smoothavg {

namespace {

using json = nlohmann::json;

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

struct Outcome {
    json payload;
    Table table;
    int code = exit_ok;
};

struct Common {
    std::string output;
    std::string format = "json";
    std::string csv;
    unsigned threads = 0;
};

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string render_csv(const Table& t) {
    std::ostringstream os;
    for (std::size_t i = 0; i < t.header.size(); ++i) os << (i ? "," : "") << t.header[i];
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << fmt17(row[i]);
        os << '\n';
    }
    return os.str();
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    if (!f) throw PreconditionError("cannot write " + path);
    f << text;
}

KernelSpec load_kernel(const std::string& inline_spec, const std::string& file) {
    if (!file.empty()) {
        std::ifstream in(file);
        if (!in) throw PreconditionError("cannot read kernel file " + file);
        json j;
        try {
            in >> j;
        } catch (const json::exception& e) {
            throw PreconditionError("kernel file " + file + ": " + e.what());
        }
        return kernel_from_json(j);
    }
    if (inline_spec.empty()) throw PreconditionError("a kernel is required (--kernel or --kernel-file)");
    KernelSpec k = parse_kernel(inline_spec);
    validate(k);
    return k;
}

std::vector<double> read_signal(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw PreconditionError("cannot read signal file " + path);
    std::vector<double> v;
    std::string line;
    while (std::getline(in, line)) {
        const auto comma = line.find_last_of(',');
        const std::string cell = comma == std::string::npos ? line : line.substr(comma + 1);
        try {
            std::size_t used = 0;
            const double x = std::stod(cell, &used);
            v.push_back(x);
        } catch (const std::exception&) {
            if (!v.empty()) throw PreconditionError("signal file " + path + ": unparsable line '" + line + "'");
        }
    }
    return v;
}

void add_common(CLI::App* app, Common& c, bool has_csv_table = true) {
    app->add_option("-o,--output", c.output, "Write the report to this file instead of stdout");
    app->add_option("--format", c.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
    if (has_csv_table) app->add_option("--csv", c.csv, "Also write the table to this CSV file");
    app->add_option("--threads", c.threads, "Worker cap (0 = all cores)");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Fourier uncertainty toolkit for averaging kernels"};
    app.require_subcommand(1);
    Common common;

    // shared parameter storage; exactly one leaf runs
    std::string kernel, kernel_file, kernel_b, kernel_b_file, signal_path, signal_gen = "concentrated", start = "characteristic";
    std::string perturbation_file;
    double alpha = 2.0, beta = 1.0, alpha_lo = 1.0, alpha_hi = 2.0, h = 1.0 / 256.0, xi0 = 0.5;
    std::optional<double> cutoff;
    int K = 100, seeds = 1000, M = 6, k_max = 1000, iters = 500, N = 100, n_samples = 4096, alt_cap = 1000;
    std::uint64_t seed = 1;
    bool expect_pass = false, json_flag = false, nonneg = false;
    std::vector<double> eps_grid = default_eps_grid();

    auto kernel_opts = [&](CLI::App* a) {
        a->add_option("-k,--kernel", kernel, "Kernel: characteristic | gaussian | power:P | cosine:c0,c1,.. | sampled:v0,..");
        a->add_option("--kernel-file", kernel_file, "Kernel JSON file");
    };

    auto* functional = app.add_subcommand("functional", "Uncertainty functional J");
    functional->require_subcommand(1);
    auto* f_eval = functional->add_subcommand("eval", "J for one kernel");
    auto* eval_alias = app.add_subcommand("eval", "Alias of 'functional eval'");
    for (auto* a : {f_eval, eval_alias}) {
        kernel_opts(a);
        a->add_option("--alpha", alpha)->required();
        a->add_option("--beta", beta);
        a->add_option("--cutoff", cutoff, "Search cutoff for the sup-norm");
        add_common(a, common);
    }
    auto* f_cross = functional->add_subcommand("crossover", "alpha where J_A = J_B");
    f_cross->add_option("--kernel-a", kernel, "First kernel")->required();
    f_cross->add_option("--kernel-b", kernel_b, "Second kernel")->required();
    f_cross->add_option("--alpha-lo", alpha_lo);
    f_cross->add_option("--alpha-hi", alpha_hi);
    f_cross->add_option("--beta", beta);
    add_common(f_cross, common);
    auto* f_smooth = functional->add_subcommand("smooth", "Discrete smoothing bound");
    kernel_opts(f_smooth);
    f_smooth->add_option("--signal", signal_path, "CSV file, last column read as samples");
    f_smooth->add_option("--generate", signal_gen, "Generated signal when --signal is absent")
        ->check(CLI::IsMember({"concentrated", "noise", "spike"}));
    f_smooth->add_option("--xi0", xi0, "Frequency of the concentrated signal");
    f_smooth->add_option("--n", n_samples, "Generated signal length");
    f_smooth->add_option("--seed", seed);
    f_smooth->add_option("--spacing", h, "Sample spacing");
    add_common(f_smooth, common, false);

    auto* spectral = app.add_subcommand("spectral", "Weighted sup-norm");
    spectral->require_subcommand(1);
    auto* s_sup = spectral->add_subcommand("sup", "sup |xi|^beta |u^(xi)|");
    kernel_opts(s_sup);
    s_sup->add_option("--beta", beta);
    s_sup->add_option("--cutoff", cutoff);
    add_common(s_sup, common, false);

    auto* hyper = app.add_subcommand("hypergeom", "1F2 sign certificates");
    hyper->require_subcommand(1);
    auto* h_cert = hyper->add_subcommand("certify", "Alternating sign pattern of a_k");
    auto* cert_alias = app.add_subcommand("certify", "Alias of 'hypergeom certify'");
    for (auto* a : {h_cert, cert_alias}) {
        a->add_option("--alpha", alpha)->required();
        a->add_option("--K", K);
        a->add_flag("--expect-pass", expect_pass, "Exit 4 unless the verdict is PASS or PASS-ALL-K");
        a->add_flag("--json", json_flag, "JSON report (the default)");
        add_common(a, common);
    }

    auto* stability = app.add_subcommand("stability", "Stability inequality and sum identities");
    stability->require_subcommand(1);
    auto* st_verify = stability->add_subcommand("verify", "Stability margin over seeded perturbations");
    st_verify->add_option("--alpha", alpha)->required();
    st_verify->add_option("--seeds", seeds, "Number of random perturbations");
    st_verify->add_option("--seed", seed, "Base seed");
    st_verify->add_option("--M", M, "Highest cosine index");
    st_verify->add_option("--k-max", k_max);
    st_verify->add_option("--perturbation", perturbation_file, "JSON coefficient array to check instead");
    add_common(st_verify, common);
    auto* st_sums = stability->add_subcommand("sums", "Zeta and alternating sum identities");
    st_sums->add_option("--alpha", alpha)->required();
    st_sums->add_option("--K", K);
    st_sums->add_option("--alt-cap", alt_cap, "Terms of the alternating sum (at most K)");
    add_common(st_sums, common, false);

    auto* optimize = app.add_subcommand("optimize", "Search over cosine-series kernels");
    optimize->require_subcommand(1);
    auto* o_run = optimize->add_subcommand("run", "Nelder-Mead minimisation of J");
    o_run->add_option("--alpha", alpha)->required();
    o_run->add_option("--beta", beta);
    o_run->add_option("--dim", M, "Highest cosine index M");
    o_run->add_option("--iters", iters);
    o_run->add_option("--seed", seed);
    o_run->add_option("--start", start, "characteristic | random | any kernel spec");
    o_run->add_flag("--nonneg", nonneg, "Penalise negative kernel values");
    add_common(o_run, common);
    auto* o_probe = optimize->add_subcommand("probe", "One-sided slopes of J at the characteristic kernel");
    o_probe->add_option("--alpha", alpha)->required();
    o_probe->add_option("--N", N);
    o_probe->add_option("--seed", seed);
    o_probe->add_option("--dim", M);
    o_probe->add_option("--eps", eps_grid, "Step sizes")->delimiter(',');
    add_common(o_probe, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return exit_usage;
    }

    json config;
    auto leaf_name = [&]() {
        std::string name;
        for (const CLI::App* a = &app; a;) {
            const auto subs = a->get_subcommands();
            if (subs.empty()) break;
            a = subs.front();
            name += (name.empty() ? "" : " ") + a->get_name();
        }
        return name;
    };
    config["subcommand"] = leaf_name();

    Outcome res;
    try {
        if (f_eval->parsed() || eval_alias->parsed()) {
            const KernelSpec k = load_kernel(kernel, kernel_file);
            config.update({{"kernel", to_json(k)}, {"alpha", alpha}, {"beta", beta}});
            if (cutoff) config["cutoff"] = *cutoff;
            const UncertaintyReport r = uncertainty(k, alpha, beta, cutoff);
            res.payload = to_json(r);
            res.payload["certified"] = r.certified();
            res.table = {{"alpha", "beta", "sup", "moment", "l1", "J"},
                         {{r.alpha, r.beta, r.supnorm.value, r.moment_val, r.l1_val, r.J}}};
            if (!r.certified()) res.code = exit_uncertified;
        } else if (f_cross->parsed()) {
            const KernelSpec a = load_kernel(kernel, ""), b = load_kernel(kernel_b, "");
            config.update({{"kernel_a", to_json(a)}, {"kernel_b", to_json(b)}, {"alpha_lo", alpha_lo},
                           {"alpha_hi", alpha_hi}, {"beta", beta}});
            const CrossoverResult r = compare_crossover(a, b, alpha_lo, alpha_hi, beta);
            if (r.alpha_star) {
                res.payload["alpha_star"] = *r.alpha_star;
                std::ostringstream os;
                os << std::fixed << std::setprecision(4) << *r.alpha_star;
                res.payload["alpha_star_4dp"] = os.str();
            } else {
                res.payload["alpha_star"] = nullptr;
                res.payload["alpha_star_4dp"] = "NONE";
            }
            res.payload["brackets"] = r.brackets;
            res.table.header = {"alpha", "J_A", "J_B"};
            for (const auto& row : r.sweep) res.table.rows.push_back({row.alpha, row.J_a, row.J_b});
        } else if (f_smooth->parsed()) {
            const KernelSpec k = load_kernel(kernel, kernel_file);
            std::vector<double> signal;
            config.update({{"kernel", to_json(k)}, {"h", h}});
            if (!signal_path.empty()) {
                signal = read_signal(signal_path);
                config["signal"] = signal_path;
            } else {
                if (n_samples < 2) throw PreconditionError("--n must be >= 2");
                config.update({{"generate", signal_gen}, {"n", n_samples}});
                if (signal_gen == "concentrated") {
                    config["xi0"] = xi0;
                    signal = concentrated_signal(xi0, h, static_cast<std::size_t>(n_samples));
                } else if (signal_gen == "noise") {
                    config["seed"] = seed;
                    std::mt19937_64 rng(seed);
                    std::normal_distribution<double> g(0.0, 1.0);
                    for (int i = 0; i < n_samples; ++i) signal.push_back(g(rng));
                } else {
                    signal.assign(static_cast<std::size_t>(n_samples), 0.0);
                    signal[static_cast<std::size_t>(n_samples / 2)] = 1.0;
                }
            }
            const SmoothingResult r = smoothing_bound(k, signal, h);
            res.payload = to_json(r);
            res.table = {{"lhs", "rhs", "ratio"}, {{r.lhs, r.rhs, r.ratio}}};
            if (!r.supnorm.certified()) res.code = exit_uncertified;
        } else if (s_sup->parsed()) {
            const KernelSpec k = load_kernel(kernel, kernel_file);
            config.update({{"kernel", to_json(k)}, {"beta", beta}});
            if (cutoff) config["cutoff"] = *cutoff;
            const SupNormResult r = weighted_sup(k, beta, cutoff);
            res.payload = to_json(r);
            res.table = {{"beta", "value", "argmax_xi", "search_cutoff", "tail_bound"},
                         {{r.beta, r.value, r.argmax_xi, r.search_cutoff, r.tail_bound}}};
            if (!r.certified()) res.code = exit_uncertified;
        } else if (h_cert->parsed() || cert_alias->parsed()) {
            config.update({{"alpha", alpha}, {"K", K}, {"expect_pass", expect_pass}});
            const SignCertificate c = certify(alpha, K, common.threads);
            res.payload = to_json(c);
            res.table.header = {"k", "value", "trunc_bound", "terms_used"};
            for (std::size_t i = 0; i < c.values.size(); ++i)
                res.table.rows.push_back({static_cast<double>(i + 1), c.values[i].value, c.values[i].trunc_bound,
                                          static_cast<double>(c.values[i].terms_used)});
            const bool passed = c.verdict == Verdict::pass || c.verdict == Verdict::pass_all_k;
            if (expect_pass && !passed) res.code = exit_verification;
        } else if (st_verify->parsed()) {
            config.update({{"alpha", alpha}, {"k_max", k_max}});
            std::vector<EvenPerturbation> fs;
            std::vector<double> ids;
            if (!perturbation_file.empty()) {
                std::ifstream in(perturbation_file);
                if (!in) throw PreconditionError("cannot read " + perturbation_file);
                json j;
                in >> j;
                fs.push_back(perturbation_from_json(j));
                ids.push_back(0.0);
                config["perturbation"] = perturbation_file;
            } else {
                if (seeds < 1) throw PreconditionError("--seeds must be >= 1");
                if (M < 0) throw PreconditionError("--M must be >= 0");
                config.update({{"seeds", seeds}, {"seed", seed}, {"M", M}});
                for (int i = 0; i < seeds; ++i) {
                    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(i));
                    fs.push_back(random_perturbation(M, rng));
                    ids.push_back(static_cast<double>(seed + static_cast<std::uint64_t>(i)));
                }
            }
            res.table.header = {"seed", "lhs", "rhs", "margin"};
            double worst = std::numeric_limits<double>::infinity();
            int violations = 0;
            for (std::size_t i = 0; i < fs.size(); ++i) {
                const StabilityResult r = stability_verify(fs[i], alpha, k_max);
                res.table.rows.push_back({ids[i], r.lhs, r.rhs, r.margin});
                worst = std::min(worst, r.margin);
                if (r.margin < -1e-9) ++violations;
            }
            res.payload = {{"count", fs.size()}, {"min_margin", worst}, {"violations", violations}, {"tolerance", 1e-9}};
            if (fs.size() == 1) res.payload["coeffs"] = fs[0].coeffs;
            if (violations > 0) res.code = exit_verification;
        } else if (st_sums->parsed()) {
            config.update({{"alpha", alpha}, {"K", K}, {"alt_cap", alt_cap}});
            const SumIdentities s = sum_identities(alpha, K, common.threads, alt_cap);
            res.payload = to_json(s);
            res.table = {{"alpha", "K", "zeta4_partial", "zeta4_tail", "zeta4_target", "alt_sum_partial", "alt_sum_tail",
                          "alt_sum_target"},
                         {{s.alpha, static_cast<double>(s.K), s.zeta4_partial, s.zeta4_tail, s.zeta4_target,
                           s.alt_sum_partial, s.alt_sum_tail, s.alt_sum_target}}};
        } else if (o_run->parsed()) {
            MinimizeOptions opt;
            opt.alpha = alpha;
            opt.beta = beta;
            opt.M = M;
            opt.max_iter = iters;
            opt.seed = seed;
            opt.nonnegative = nonneg;
            config.update({{"alpha", alpha}, {"beta", beta}, {"dim", M}, {"iters", iters}, {"seed", seed},
                           {"start", start}, {"nonneg", nonneg}});
            std::vector<double> x0;
            if (start == "random")
                x0 = random_start(M, seed);
            else
                x0 = project_cosine(load_kernel(start, ""), M);
            const MinimizeResult r = minimize(x0, opt);
            res.payload = to_json(r);
            res.table.header = {"iter", "J"};
            for (std::size_t i = 0; i < r.trace.size(); ++i)
                res.table.rows.push_back({static_cast<double>(i + 1), r.trace[i]});
        } else if (o_probe->parsed()) {
            config.update({{"alpha", alpha}, {"N", N}, {"seed", seed}, {"dim", M}, {"eps", eps_grid}});
            const auto reports = probe_local_min(alpha, N, eps_grid, seed, M, common.threads);
            json arr = json::array();
            double worst = std::numeric_limits<double>::infinity();
            int violations = 0;
            res.table.header = {"direction", "slope", "lemma_margin"};
            for (std::size_t i = 0; i < reports.size(); ++i) {
                arr.push_back(to_json(reports[i]));
                worst = std::min(worst, reports[i].one_sided_slope);
                if (reports[i].one_sided_slope < -1e-6) ++violations;
                res.table.rows.push_back({static_cast<double>(i), reports[i].one_sided_slope, reports[i].margin});
            }
            res.payload = {{"min_slope", worst}, {"violations", violations}, {"tolerance", 1e-6}, {"reports", arr}};
            if (violations > 0) res.code = exit_verification;
        }
    } catch (const PreconditionError& e) {
        err << "precondition violated: " << e.what() << '\n';
        return exit_precondition;
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << '\n';
        return exit_precondition;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << " (achieved " << e.achieved() << ")\n";
        return exit_uncertified;
    } catch (const json::exception& e) {
        err << "bad JSON input: " << e.what() << '\n';
        return exit_precondition;
    }

    config["threads"] = common.threads;
    config["format"] = common.format;
    json doc{{"schema", "v1"}, {"config", config}, {"result", res.payload}, {"timestamp", utc_timestamp()}};
    const std::string text = common.format == "csv" ? render_csv(res.table) : doc.dump(2) + "\n";
    try {
        if (!common.csv.empty()) write_file(common.csv, render_csv(res.table));
        if (!common.output.empty())
            write_file(common.output, text);
        else
            out << text;
    } catch (const PreconditionError& e) {
        err << "precondition violated: " << e.what() << '\n';
        return exit_precondition;
    }
    return res.code;
}

}  // namespace smoothavg

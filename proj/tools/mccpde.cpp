#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <random>

#include "mcc/experiment.hpp"

namespace {

int run_command(const std::string& config_path, bool long_running) {
    mcc::ExperimentConfig cfg;
    try {
        cfg = mcc::ExperimentConfig::from_config(mcc::parse_config_file(config_path));
    } catch (const mcc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    try {
        return mcc::run_experiment(cfg, long_running, std::cout);
    } catch (const mcc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 3;
    }
}

int dump_command(const std::string& config_path, const std::string& out_base) {
    try {
        mcc::ExperimentConfig cfg = mcc::ExperimentConfig::from_config(mcc::parse_config_file(config_path));
        const mcc::Partition fem = mcc::Partition::uniform(cfg.fem_n);
        mcc::PdeProblem prob(mcc::cell_average(cfg.f_profile, fem), cfg.w_lo, cfg.w_hi, fem, fem);
        const double fn = mcc::norm_l2(prob.f);
        const double bound =
            mcc::embedding_bounds(cfg.w_lo, cfg.w_hi, fn, mcc::CoercivityVariant::AveragedC2).linf;
        const mcc::Partition coarse =
            cfg.coarse_levels.empty() ? fem : mcc::Partition::uniform(cfg.coarse_levels.front());
        mcc::RelaxationSpec spec{cfg.coarse_levels.empty() ? mcc::RelaxationKind::PointwiseMcC
                                                           : mcc::RelaxationKind::FullyAveragedMcChh,
                                 prob, mcc::Envelope::uniform(coarse, -bound, bound, cfg.w_lo, cfg.w_hi),
                                 cfg.alpha, mcc::interpolate(cfg.ud_profile, fem)};
        mcc::BuiltRelaxation built = mcc::build(spec);
        std::ofstream posm(out_base + ".qp");
        std::ofstream josm(out_base + ".map.json");
        mcc::dump_relaxation(built, posm, josm);
        std::cout << "wrote " << out_base << ".qp and " << out_base << ".map.json\n";
        return 0;
    } catch (const mcc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 3;
    }
}

bool check_line(const char* name, bool ok) {
    std::cout << (ok ? "PASS  " : "FAIL  ") << name << "\n";
    return ok;
}

// quick runtime invariant suite on small instances
int check_command() {
    using namespace mcc;
    bool all = true;
    std::mt19937 rng(20240817);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    try {
        const Partition fine = Partition::uniform(64);
        const Partition coarseg = Partition::uniform(8);

        // projection nonexpansiveness and idempotence
        {
            bool ok = true;
            for (int rep = 0; rep < 20; ++rep) {
                Eigen::VectorXd v(fine.n_cells());
                for (auto& x : v) x = 4.0 * unif(rng);
                CellFunction f(fine, v);
                CellFunction pf = project_avg(f, coarseg);
                ok &= norm_linf(pf) <= norm_linf(f) + 1e-14;
                ok &= norm_l2(pf) <= norm_l2(f) + 1e-14;
                ok &= tv(pf) <= tv(f) + 1e-12;
                CellFunction ppf = project_avg(pf, coarseg);
                ok &= (ppf.values - pf.values).lpNorm<Eigen::Infinity>() <= 1e-14;
                ok &= l1_diff(f, pf) <= coarseg.h() * tv(f) + 1e-12;
            }
            all &= check_line("projection nonexpansive / idempotent / tv bound", ok);
        }

        // orthogonality identity for the local averaging
        {
            bool ok = true;
            for (int rep = 0; rep < 10; ++rep) {
                Eigen::VectorXd phi(fine.n_cells() + 1);
                for (auto& x : phi) x = unif(rng);
                Eigen::VectorXd psi(coarseg.n_cells()), theta(coarseg.n_cells());
                for (auto& x : psi) x = unif(rng);
                for (auto& x : theta) x = unif(rng);
                NodalFunction nf(fine, phi);
                CellFunction pphi = project_avg(nf, coarseg);
                double acc = 0.0;
                for (int i = 0; i < coarseg.n_cells(); ++i) {
                    // int over coarse cell of (phi - P phi) equals zero cellwise
                    double cell_int = 0.0;
                    const int r = fine.n_cells() / coarseg.n_cells();
                    for (int k = 0; k < r; ++k) {
                        const int j = i * r + k;
                        cell_int += 0.5 * fine.h() * (phi[j] + phi[j + 1]);
                    }
                    cell_int -= coarseg.h() * pphi.values[i];
                    acc += psi[i] * theta[i] * cell_int;
                }
                ok &= std::abs(acc) <= 1e-12;
            }
            all &= check_line("galerkin orthogonality of cell averaging", ok);
        }

        // embedded-point feasibility and gradient check on a toy problem
        const Partition toyf = Partition::uniform(64);
        const Partition toyc = Partition::uniform(4);
        PdeProblem prob(CellFunction::constant(toyf, 6.0), -4.0, 4.0, toyf, toyf);
        PiecewiseProfile udp;
        udp.segments = {Segment{0.0, 0.5, {0.0, 2.0}}, Segment{0.5, 1.0, {2.0, -2.0}}};
        NodalFunction u_d = interpolate(udp, toyf);
        const double bound = embedding_bounds(-4, 4, 6.0, CoercivityVariant::AveragedC2).linf;
        {
            bool ok = true;
            for (int rep = 0; rep < 10; ++rep) {
                Eigen::VectorXd wv(toyf.n_cells());
                for (auto& x : wv) x = 4.0 * unif(rng);
                RelaxationSpec spec{RelaxationKind::FullyAveragedMcChh, prob,
                                    Envelope::uniform(toyc, -bound, bound, -4, 4), 2.5e-4, u_d};
                ok &= embed_check(spec, CellFunction(toyf, wv)) <= 1e-10;
            }
            all &= check_line("embedded feasible points satisfy the relaxation", ok);
        }
        {
            bool ok = true;
            PdeProblem cprob(CellFunction::constant(toyf, 6.0), -4.0, 4.0, toyf, toyc);
            for (int rep = 0; rep < 5; ++rep) {
                Eigen::VectorXd wv(toyc.n_cells());
                for (auto& x : wv) x = 3.9 * unif(rng);
                CellFunction w(toyc, wv);
                CellFunction g = reduced_gradient(cprob, w, u_d, 2.5e-4);
                for (int i = 0; i < toyc.n_cells(); ++i) {
                    const double eps = 1e-6;
                    Eigen::VectorXd wp = wv, wm = wv;
                    wp[i] += eps;
                    wm[i] -= eps;
                    const double fp = evaluate_reduced(cprob, CellFunction(toyc, wp), u_d, 2.5e-4, 1e-3).smoothed;
                    const double fm = evaluate_reduced(cprob, CellFunction(toyc, wm), u_d, 2.5e-4, 1e-3).smoothed;
                    const double fd = (fp - fm) / (2 * eps);
                    ok &= std::abs(g.values[i] - fd) <= 1e-6 * std::max(1.0, std::abs(fd));
                }
            }
            all &= check_line("reduced gradient matches finite differences", ok);
        }

        // obbt monotone trace and non-crossing bounds on the toy instance
        {
            RelaxationSpec spec{RelaxationKind::FullyAveragedMcChh, prob,
                                Envelope::uniform(toyc, -bound, bound, -4, 4), 2.5e-4, u_d};
            ObbtSettings st;
            ObbtResult res = tighten(spec, st);
            bool ok = true;
            for (size_t k = 1; k < res.trace.sweeps.size(); ++k)
                ok &= res.trace.sweeps[k].lower_bound >= res.trace.sweeps[k - 1].lower_bound - 1e-9;
            for (int i = 0; i < toyc.n_cells(); ++i) ok &= res.env.u_lo.values[i] <= res.env.u_hi.values[i];
            all &= check_line("obbt trace monotone, bounds never cross", ok);
        }
    } catch (const std::exception& e) {
        std::cerr << "check failed with exception: " << e.what() << "\n";
        return 3;
    }
    return all ? 0 : 3;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"certified lower bounds for a bilinear pde-constrained control problem"};
    app.require_subcommand(1);

    std::string config_path, out_base;
    bool long_running = false;

    CLI::App* run = app.add_subcommand("run", "run the experiment pipeline for a config file");
    run->add_option("config", config_path, "config file (toml-style)")->required();
    run->add_flag("--long", long_running, "extend the coarse-level sweep to N_h=1024 (slow)");

    CLI::App* check = app.add_subcommand("check", "run the built-in invariant suite");

    CLI::App* dump = app.add_subcommand("dump-qp", "write the relaxation in interchange format");
    dump->add_option("config", config_path, "config file")->required();
    dump->add_option("out", out_base, "output base path")->required();

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) return run_command(config_path, long_running);
    if (check->parsed()) return check_command();
    if (dump->parsed()) return dump_command(config_path, out_base);
    return 2;
}

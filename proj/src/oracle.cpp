#include "mcc/oracle.hpp"

#include <Eigen/SparseCholesky>
#include <cmath>
#include <limits>
#include <ostream>
#include <vector>

namespace mcc {

OracleResult enumerate_optimum(const EnumerationSpec& spec, const PdeProblem& prob, const NodalFunction& u_d,
                               double alpha, bool keep_table, bool reverse_order) {
    if (spec.value_set.empty()) throw SpecMismatch("enumeration needs a value set");
    double total = 1.0;
    for (int i = 0; i < spec.n_cells; ++i) total *= static_cast<double>(spec.value_set.size());
    if (total > static_cast<double>(spec.budget))
        throw BudgetExceeded("enumeration would exceed the configured budget");

    const Partition grid = Partition::uniform(spec.n_cells);
    if (prob.fem_grid.n_cells() != spec.fem_n) throw SpecMismatch("problem fem grid does not match the enumeration spec");
    if (!grid.divides(prob.fem_grid)) throw IncompatibleGrids("enumeration grid does not divide the fem grid");

    FemOperators ops = FemOperators::assemble(prob.fem_grid, grid);
    const Eigen::VectorXd F = load_from_cells(prob.fem_grid, prob.f);
    const int n = prob.fem_grid.n_cells() - 1;

    // A(w) = K + sum_i w_i * H * r_i r_i^T with r_i the averaging rows
    SpMat Rt = ops.avg_map.transpose();
    std::vector<SpMat> rank_terms(spec.n_cells);
    for (int i = 0; i < spec.n_cells; ++i) {
        SpMat ri = Rt.col(i);
        rank_terms[i] = SpMat(grid.h() * (ri * SpMat(ri.transpose())));
    }

    Eigen::SimplicialLDLT<SpMat, Eigen::Lower, Eigen::NaturalOrdering<int>> ldlt;
    bool analyzed = false;

    const int nv = static_cast<int>(spec.value_set.size());
    std::vector<int> idx(spec.n_cells, reverse_order ? nv - 1 : 0);
    OracleResult out{CellFunction::constant(grid, 0.0), std::numeric_limits<double>::infinity(), 0, {}, keep_table};

    Eigen::VectorXd w(spec.n_cells);
    bool done = false;
    while (!done) {
        for (int i = 0; i < spec.n_cells; ++i) w[i] = spec.value_set[idx[i]];
        SpMat A = ops.stiffness;
        for (int i = 0; i < spec.n_cells; ++i) A += w[i] * rank_terms[i];
        if (!analyzed) {
            ldlt.analyzePattern(A);
            analyzed = true;
        }
        ldlt.factorize(A);
        if (ldlt.info() != Eigen::Success) throw SingularSystem("enumeration state solve failed");
        Eigen::VectorXd ui = ldlt.solve(F);
        ui += ldlt.solve(F - A * ui);

        Eigen::VectorXd full = Eigen::VectorXd::Zero(n + 2);
        full.segment(1, n) = ui;
        NodalFunction un(prob.fem_grid, std::move(full));
        CellFunction wc(grid, w);
        const double obj = tracking_value(un, u_d) + alpha * tv(wc);

        ++out.evaluations;
        if (keep_table) out.table.emplace_back(idx, obj);
        if (obj < out.obj_star) {
            out.obj_star = obj;
            out.w_star = wc;
        }

        // odometer in lexicographic (or reversed) order, last cell fastest
        done = true;
        for (int i = spec.n_cells - 1; i >= 0; --i) {
            if (!reverse_order) {
                if (++idx[i] < nv) {
                    done = false;
                    break;
                }
                idx[i] = 0;
            } else {
                if (--idx[i] >= 0) {
                    done = false;
                    break;
                }
                idx[i] = nv - 1;
            }
        }
    }
    return out;
}

void export_value_table_csv(const EnumerationSpec& spec, const OracleResult& result, std::ostream& os) {
    os << "objective";
    for (int i = 0; i < spec.n_cells; ++i) os << ",w" << i;
    os << '\n';
    os.precision(16);
    for (const auto& [idx, obj] : result.table) {
        os << obj;
        for (int i : idx) os << ',' << spec.value_set[i];
        os << '\n';
    }
}

} // namespace mcc

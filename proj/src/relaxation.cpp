#include "mcc/relaxation.hpp"

#include <json.hpp>

#include <array>
#include <cmath>
#include <ostream>
#include <vector>

namespace mcc {

namespace {

using Triplet = Eigen::Triplet<double>;

int checked_ratio(const Partition& fine, const Partition& coarse, const char* what) {
    if (!coarse.divides(fine)) throw SpecMismatch(std::string("grid mismatch: ") + what);
    return fine.n_cells() / coarse.n_cells();
}

} // namespace

Envelope Envelope::uniform(const Partition& coarse, double ulo, double uhi, double wlo, double whi) {
    return Envelope{coarse, CellFunction::constant(coarse, ulo), CellFunction::constant(coarse, uhi),
                    CellFunction::constant(coarse, wlo), CellFunction::constant(coarse, whi)};
}

void Envelope::validate() const {
    const int n = coarse.n_cells();
    if (u_lo.values.size() != n || u_hi.values.size() != n || w_lo.values.size() != n || w_hi.values.size() != n)
        throw SpecMismatch("envelope data does not match its partition");
    for (int i = 0; i < n; ++i) {
        if (!(u_lo.values[i] <= u_hi.values[i]) || !(w_lo.values[i] <= w_hi.values[i]))
            throw InfeasibleEnvelope("envelope bounds cross");
        if (!std::isfinite(u_lo.values[i]) || !std::isfinite(u_hi.values[i]) ||
            !std::isfinite(w_lo.values[i]) || !std::isfinite(w_hi.values[i]))
            throw SpecMismatch("envelope bounds must be finite");
    }
}

const Partition& RelaxationSpec::w_grid() const {
    return kind == RelaxationKind::FullyAveragedMcChh ? env.coarse : prob.control_grid;
}

void RelaxationSpec::validate() const {
    env.validate();
    if (!env.coarse.divides(prob.fem_grid)) throw SpecMismatch("envelope grid does not divide the fem grid");
    if (kind == RelaxationKind::PointwiseMcC) {
        if (!env.coarse.same_grid(prob.fem_grid) || !prob.control_grid.same_grid(prob.fem_grid))
            throw SpecMismatch("pointwise relaxation requires envelope == control == fem cell grid");
    }
    if (kind == RelaxationKind::AveragedMcCh && !env.coarse.divides(prob.control_grid))
        throw SpecMismatch("averaged relaxation needs the envelope grid to divide the control grid");
    if (u_d.part.n_cells() != prob.fem_grid.n_cells()) throw SpecMismatch("tracking target must live on the fem grid");
    if (alpha < 0.0) throw SpecMismatch("tv weight must be nonnegative");
}

namespace {

// envelope-dependent pieces: coefficients of the four McCormick rows and the
// box bounds; shared between build() and refresh_envelope()
struct McRowData {
    double coef_w;  // coefficient in front of the (averaged) control value
    double coef_a;  // coefficient in front of (R u)_i
    double lo, hi;  // row bounds
};

std::array<McRowData, 4> mcc_rows_for_cell(const Envelope& env, int i) {
    const double ulo = env.u_lo.values[i], uhi = env.u_hi.values[i];
    const double wlo = env.w_lo.values[i], whi = env.w_hi.values[i];
    return {McRowData{-ulo, -wlo, -ulo * wlo, kInf},
            McRowData{-uhi, -whi, -uhi * whi, kInf},
            McRowData{-uhi, -wlo, -kInf, -uhi * wlo},
            McRowData{-ulo, -whi, -kInf, -ulo * whi}};
}

} // namespace

BuiltRelaxation build(const RelaxationSpec& spec) {
    spec.validate();
    const Partition& fem = spec.prob.fem_grid;
    const Partition& coarse = spec.env.coarse;
    const Partition& wg = spec.w_grid();

    FemOperators ops = FemOperators::assemble(fem, coarse);
    const int rw = checked_ratio(wg, coarse, "control grid vs envelope grid"); // w cells per coarse cell

    VariableMap map;
    map.n_u = fem.n_cells() - 1;
    map.n_w = wg.n_cells();
    map.n_z = coarse.n_cells();
    map.n_t = spec.alpha > 0.0 ? map.n_w - 1 : 0; // epigraph needed only with a tv weight
    map.rows_state = map.n_u;
    map.rows_mcc = 4 * map.n_z;
    map.rows_ubox = map.n_z;
    map.rows_wbox = map.n_w;
    map.rows_tv = 2 * map.n_t;

    const int nv = map.num_vars();
    const int nr = map.num_rows();

    SparseQP qp;
    qp.q = Eigen::VectorXd::Zero(nv);
    qp.l = Eigen::VectorXd::Constant(nr, -kInf);
    qp.u = Eigen::VectorXd::Constant(nr, kInf);

    std::vector<Triplet> at;
    // state rows: K u + E z = F
    for (int k = 0; k < ops.stiffness.outerSize(); ++k)
        for (SpMat::InnerIterator it(ops.stiffness, k); it; ++it)
            at.emplace_back(map.state_row() + it.row(), map.u_off() + it.col(), it.value());
    for (int k = 0; k < ops.cell_load.outerSize(); ++k)
        for (SpMat::InnerIterator it(ops.cell_load, k); it; ++it)
            at.emplace_back(map.state_row() + it.row(), map.z_off() + it.col(), it.value());
    const Eigen::VectorXd F = load_from_cells(fem, spec.prob.f);
    for (int j = 0; j < map.n_u; ++j) {
        qp.l[map.state_row() + j] = F[j];
        qp.u[map.state_row() + j] = F[j];
    }

    // four McCormick rows per coarse cell; (R u)_i entries come from avg_map
    SpMat Rt = ops.avg_map.transpose(); // column i = row i of avg_map
    for (int i = 0; i < map.n_z; ++i) {
        const auto rows = mcc_rows_for_cell(spec.env, i);
        for (int k = 0; k < 4; ++k) {
            const int r = map.mcc_row() + 4 * i + k;
            at.emplace_back(r, map.z_off() + i, 1.0);
            for (int c = 0; c < rw; ++c)
                at.emplace_back(r, map.w_off() + i * rw + c, rows[k].coef_w / rw);
            for (SpMat::InnerIterator it(Rt, i); it; ++it)
                at.emplace_back(r, map.u_off() + it.row(), rows[k].coef_a * it.value());
            qp.l[r] = rows[k].lo;
            qp.u[r] = rows[k].hi;
        }
    }

    // box rows on the averaged state and on the controls
    for (int i = 0; i < map.n_z; ++i) {
        const int r = map.ubox_row() + i;
        for (SpMat::InnerIterator it(Rt, i); it; ++it) at.emplace_back(r, map.u_off() + it.row(), it.value());
        qp.l[r] = spec.env.u_lo.values[i];
        qp.u[r] = spec.env.u_hi.values[i];
    }
    for (int j = 0; j < map.n_w; ++j) {
        const int r = map.wbox_row() + j;
        at.emplace_back(r, map.w_off() + j, 1.0);
        qp.l[r] = spec.env.w_lo.values[j / rw];
        qp.u[r] = spec.env.w_hi.values[j / rw];
    }

    // tv epigraph: +-(w_{j+1} - w_j) <= t_j
    for (int j = 0; j < map.n_t; ++j) {
        const int r0 = map.tv_row() + 2 * j;
        at.emplace_back(r0, map.w_off() + j + 1, 1.0);
        at.emplace_back(r0, map.w_off() + j, -1.0);
        at.emplace_back(r0, map.t_off() + j, -1.0);
        qp.u[r0] = 0.0;
        at.emplace_back(r0 + 1, map.w_off() + j + 1, -1.0);
        at.emplace_back(r0 + 1, map.w_off() + j, 1.0);
        at.emplace_back(r0 + 1, map.t_off() + j, -1.0);
        qp.u[r0 + 1] = 0.0;
    }

    qp.A.resize(nr, nv);
    qp.A.setFromTriplets(at.begin(), at.end());

    // quadratic tracking cost on the u block, linear tv weight on t
    std::vector<Triplet> pt;
    for (int k = 0; k < ops.mass.outerSize(); ++k)
        for (SpMat::InnerIterator it(ops.mass, k); it; ++it)
            pt.emplace_back(map.u_off() + it.row(), map.u_off() + it.col(), it.value());
    qp.P.resize(nv, nv);
    qp.P.setFromTriplets(pt.begin(), pt.end());
    qp.q.segment(map.u_off(), map.n_u) = -load_from_nodal(fem, spec.u_d.values);
    qp.q.segment(map.t_off(), map.n_t).setConstant(spec.alpha);

    const double udn = norm_l2(spec.u_d);
    return BuiltRelaxation{std::move(qp), map, 0.5 * udn * udn};
}

void refresh_envelope(const RelaxationSpec& spec, BuiltRelaxation& built) {
    const VariableMap& map = built.map;
    const int rw = map.n_w / map.n_z;
    for (int i = 0; i < map.n_z; ++i) {
        const auto rows = mcc_rows_for_cell(spec.env, i);
        for (int k = 0; k < 4; ++k) {
            const int r = map.mcc_row() + 4 * i + k;
            for (int c = 0; c < rw; ++c)
                built.qp.A.coeffRef(r, map.w_off() + i * rw + c) = rows[k].coef_w / rw;
            built.qp.l[r] = rows[k].lo;
            built.qp.u[r] = rows[k].hi;
        }
        built.qp.l[map.ubox_row() + i] = spec.env.u_lo.values[i];
        built.qp.u[map.ubox_row() + i] = spec.env.u_hi.values[i];
    }
    for (int j = 0; j < map.n_w; ++j) {
        built.qp.l[map.wbox_row() + j] = spec.env.w_lo.values[j / rw];
        built.qp.u[map.wbox_row() + j] = spec.env.w_hi.values[j / rw];
    }
}

namespace {

Eigen::VectorXd embed_point(const RelaxationSpec& spec, const CellFunction& w, const VariableMap& map) {
    const Partition& coarse = spec.env.coarse;
    NodalFunction u = solve_state_avg(spec.prob, w, coarse);
    const CellFunction pw = project_avg(w, coarse);
    const CellFunction pu = project_avg(u, coarse);
    const CellFunction wv = project_avg(w, spec.w_grid());

    Eigen::VectorXd x = Eigen::VectorXd::Zero(map.num_vars());
    x.segment(map.u_off(), map.n_u) = u.values.segment(1, map.n_u);
    x.segment(map.w_off(), map.n_w) = wv.values;
    x.segment(map.z_off(), map.n_z) = pu.values.cwiseProduct(pw.values);
    for (int j = 0; j < map.n_t; ++j)
        x[map.t_off() + j] = std::abs(wv.values[j + 1] - wv.values[j]);
    return x;
}

} // namespace

double embed_check(const RelaxationSpec& spec, const CellFunction& w) {
    BuiltRelaxation built = build(spec);
    const Eigen::VectorXd x = embed_point(spec, w, built.map);
    const Eigen::VectorXd ax = built.qp.A * x;
    double viol = 0.0;
    for (int r = 0; r < built.map.num_rows(); ++r) {
        viol = std::max(viol, built.qp.l[r] - ax[r]);
        viol = std::max(viol, ax[r] - built.qp.u[r]);
    }
    return viol;
}

LowerBoundResult lower_bound_solve(const RelaxationSpec& spec, const SolveSettings& settings) {
    BuiltRelaxation built = build(spec);
    QpSolver solver(built.qp, settings);
    SolveReport rep = solver.solve();
    if (rep.status == SolveStatus::Infeasible)
        throw InfeasibleEnvelope("relaxation reported infeasible");
    if (rep.status != SolveStatus::Optimal)
        throw SingularSystem("relaxation solve did not reach optimality");

    const VariableMap& map = built.map;
    Eigen::VectorXd ufull = Eigen::VectorXd::Zero(spec.prob.fem_grid.n_cells() + 1);
    ufull.segment(1, map.n_u) = rep.x.segment(map.u_off(), map.n_u);
    LowerBoundResult out{rep.obj + built.obj_constant, rep,
                         CellFunction(spec.w_grid(), rep.x.segment(map.w_off(), map.n_w)),
                         NodalFunction(spec.prob.fem_grid, std::move(ufull)),
                         CellFunction(spec.env.coarse, rep.x.segment(map.z_off(), map.n_z))};
    return out;
}

void dump_relaxation(const BuiltRelaxation& built, std::ostream& problem_os, std::ostream& sidecar_os) {
    dump_problem(built.qp, problem_os);
    nlohmann::json j;
    j["variables"] = {{"u", {{"offset", built.map.u_off()}, {"count", built.map.n_u}}},
                      {"w", {{"offset", built.map.w_off()}, {"count", built.map.n_w}}},
                      {"z", {{"offset", built.map.z_off()}, {"count", built.map.n_z}}},
                      {"t", {{"offset", built.map.t_off()}, {"count", built.map.n_t}}}};
    j["rows"] = {{"state", {{"offset", built.map.state_row()}, {"count", built.map.rows_state}}},
                 {"mccormick", {{"offset", built.map.mcc_row()}, {"count", built.map.rows_mcc}}},
                 {"u_box", {{"offset", built.map.ubox_row()}, {"count", built.map.rows_ubox}}},
                 {"w_box", {{"offset", built.map.wbox_row()}, {"count", built.map.rows_wbox}}},
                 {"tv", {{"offset", built.map.tv_row()}, {"count", built.map.rows_tv}}}};
    j["objective_constant"] = built.obj_constant;
    sidecar_os << j.dump(2) << '\n';
}

} // namespace mcc

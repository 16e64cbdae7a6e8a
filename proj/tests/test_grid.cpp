#include <doctest.h>

#include <random>

#include "mcc/grid.hpp"

using namespace mcc;

namespace {

CellFunction random_cells(const Partition& p, std::mt19937& rng, double amp = 4.0) {
    std::uniform_real_distribution<double> d(-amp, amp);
    Eigen::VectorXd v(p.n_cells());
    for (auto& x : v) x = d(rng);
    return CellFunction(p, v);
}

} // namespace

TEST_CASE("uniform partitions and refinement") {
    Partition p = Partition::uniform(8);
    CHECK(p.n_cells() == 8);
    CHECK(p.h() == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(p.cell_edges()[0] == 0.0);
    CHECK(p.cell_edges()[8] == 1.0);
    for (int i = 0; i < 8; ++i)
        CHECK(std::abs(p.cell_edges()[i + 1] - p.cell_edges()[i] - p.h()) <= 1e-14);

    Partition q = refine(p);
    CHECK(q.n_cells() == 16);
    CHECK(q.h() == doctest::Approx(p.h() / 2).epsilon(1e-15));
    CHECK(refine(refine(Partition::uniform(256))).n_cells() == 1024);
}

TEST_CASE("cell averaging projection on basic inputs") {
    Partition two = Partition::uniform(2);

    CellFunction lin = project_avg([](double x) { return x; }, two);
    CHECK(lin.values[0] == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(lin.values[1] == doctest::Approx(0.75).epsilon(1e-14));

    CellFunction cst = project_avg([](double) { return 6.0; }, Partition::uniform(7));
    for (int i = 0; i < 7; ++i) CHECK(cst.values[i] == doctest::Approx(6.0).epsilon(1e-15));

    // hat function with peak 0.75: exact cell averages of the interpolant
    NodalFunction hat(two, Eigen::Vector3d(0.0, 0.75, 0.0));
    CellFunction avg = project_avg(hat, two);
    CHECK(avg.values[0] == doctest::Approx(0.375).epsilon(1e-14));
    CHECK(avg.values[1] == doctest::Approx(0.375).epsilon(1e-14));
}

TEST_CASE("projection rejects incompatible grids") {
    Partition p6 = Partition::uniform(6);
    CellFunction f = CellFunction::constant(p6, 1.0);
    CHECK_THROWS_AS(project_avg(f, Partition::uniform(4)), IncompatibleGrids);
}

TEST_CASE("total variation counts interior jumps only") {
    Partition p = Partition::uniform(4);
    CHECK(tv(CellFunction(p, Eigen::Vector4d(1, 1, 0, 0))) == doctest::Approx(1.0));
    CHECK(tv(CellFunction::constant(p, 3.7)) == 0.0);
    Partition p3 = Partition::uniform(3);
    CHECK(tv(CellFunction(p3, Eigen::Vector3d(-4, 4, -4))) == doctest::Approx(16.0));
}

TEST_CASE("projection is nonexpansive and idempotent") {
    std::mt19937 rng(7);
    Partition fine = Partition::uniform(96);
    for (const int nc : {2, 3, 4, 8, 12, 32}) {
        Partition coarse = Partition::uniform(nc);
        for (int rep = 0; rep < 25; ++rep) {
            CellFunction f = random_cells(fine, rng);
            CellFunction pf = project_avg(f, coarse);
            CHECK(norm_linf(pf) <= norm_linf(f) + 1e-14);
            CHECK(norm_l2(pf) <= norm_l2(f) + 1e-14);
            CHECK(tv(pf) <= tv(f) + 1e-12);                       // 1d tv nonexpansiveness
            CHECK(l1_diff(f, pf) <= coarse.h() * tv(f) + 1e-12);  // projection error bound
            CellFunction ppf = project_avg(pf, coarse);
            CHECK((ppf.values - pf.values).lpNorm<Eigen::Infinity>() <= 1e-14);
        }
    }
}

TEST_CASE("averaging orthogonality identity") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> d(-1, 1);
    Partition fine = Partition::uniform(64);
    Partition coarse = Partition::uniform(8);
    const int r = 8;
    for (int rep = 0; rep < 50; ++rep) {
        Eigen::VectorXd phi(fine.n_cells() + 1);
        for (auto& x : phi) x = d(rng);
        NodalFunction nphi(fine, phi);
        CellFunction pphi = project_avg(nphi, coarse);
        Eigen::VectorXd psi(coarse.n_cells()), theta(coarse.n_cells());
        for (auto& x : psi) x = d(rng);
        for (auto& x : theta) x = d(rng);
        // integral of (phi - P phi)(P psi)(P theta): exact per coarse cell
        double acc = 0.0;
        for (int i = 0; i < coarse.n_cells(); ++i) {
            double cell_int = 0.0;
            for (int k = 0; k < r; ++k) {
                const int j = i * r + k;
                cell_int += 0.5 * fine.h() * (phi[j] + phi[j + 1]);
            }
            cell_int -= coarse.h() * pphi.values[i];
            acc += psi[i] * theta[i] * cell_int;
        }
        CHECK(std::abs(acc) <= 1e-12);
    }
}

TEST_CASE("exact p1 norms and mixed integrals") {
    Partition p = Partition::uniform(128);
    NodalFunction lin = NodalFunction::interpolate(p, [](double x) { return x; });
    CHECK(norm_l2(lin) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-13));

    CellFunction ind(Partition::uniform(2), Eigen::Vector2d(1.0, 0.0));
    // int_0^{1/2} x dx = 1/8
    CHECK(integrate_p1_pc(lin, ind) == doctest::Approx(0.125).epsilon(1e-13));
}

#include <doctest.h>

#include <Eigen/Dense>
#include <memory>

#include "monocube/error.hpp"
#include "monocube/spectral.hpp"

using namespace monocube;

namespace {

Eigen::MatrixXd dense(const InducedLaplacian& lap) { return Eigen::MatrixXd(lap.matrix()); }

}  // namespace

TEST_CASE("induced laplacians") {
    const auto single = induced_laplacian(threshold_set(3, 3));
    CHECK(single.size() == 1);
    CHECK(dense(single)(0, 0) == 0.0);

    const auto cycle = induced_laplacian(threshold_set(2, 0));
    CHECK(cycle.edge_count() == 4);
    CHECK((cycle.degrees().array() == 2.0).all());
    CHECK(dense(cycle).rowwise().sum().isZero());

    const auto star = induced_laplacian(threshold_set(3, 2));
    CHECK(star.edge_count() == 3);
    Eigen::Vector4d deg(1, 1, 1, 3);
    CHECK(star.degrees() == deg);
    CHECK(dense(star)(3, 0) == -1.0);

    const Eigen::VectorXd f = Eigen::Vector4d(0, 0, 0, 1);
    CHECK(star.quadratic_form(f) == doctest::Approx(3.0));
}

TEST_CASE("second eigenvalue") {
    CHECK(lambda2(induced_laplacian(threshold_set(3, 0))).value == doctest::Approx(2.0));
    CHECK(lambda2(induced_laplacian(threshold_set(3, 2))).value == doctest::Approx(1.0));
    CHECK(lambda2(induced_laplacian(make_upset(2, {0b01}))).value == doctest::Approx(2.0));
    CHECK_THROWS_AS(lambda2(induced_laplacian(threshold_set(3, 3))), Error);
}

TEST_CASE("disconnected patterns are detected") {
    SparseMatrix m(4, 4);
    m.insert(0, 1) = 1;
    m.insert(1, 0) = 1;
    m.insert(2, 3) = 1;
    m.insert(3, 2) = 1;
    CHECK_FALSE(is_connected(m));
    m.insert(1, 2) = 1;
    m.insert(2, 1) = 1;
    CHECK(is_connected(m));
}

TEST_CASE("poincare constants") {
    const auto full = poincare_constant(threshold_set(3, 0));
    CHECK(full.cstar == doctest::Approx(1.0));
    CHECK(full.bound_fp == 1.0);
    CHECK(full.bound_ours == 2.0);

    const auto star = poincare_constant(threshold_set(3, 2));
    CHECK(star.cstar == doctest::Approx(2.0));
    CHECK(star.bound_fp == doctest::Approx(1 / (1 - std::sqrt(0.5))));
    CHECK(star.slack_fp() > 1.4);

    const auto half = poincare_constant(dictator_set(4, 3));
    CHECK(half.cstar == doctest::Approx(1.0));
    CHECK(half.bound_fp == doctest::Approx(3.4142135623730950));

    const auto single = poincare_constant(threshold_set(3, 3));
    CHECK(single.cstar == 0.0);
    CHECK(single.method == EigenMethod::trivial);
}

TEST_CASE("every monotone set with n <= 4 satisfies both bounds") {
    std::size_t count = 0;
    for (int n = 1; n <= 4; ++n)
        for (const auto& s : enumerate_monotone(n)) {
            const auto cert = verify_theorem(std::make_shared<const MonotoneSet>(s));
            CHECK(cert.passed());
            if (cert.witness) CHECK(cert.witness_ratio == doctest::Approx(cert.spectral.cstar).epsilon(1e-9));
            ++count;
        }
    CHECK(count == 2 + 5 + 19 + 167);
}

TEST_CASE("full cube is tight, with a level-one witness") {
    for (int n = 2; n <= 10; ++n) {
        const auto cert = verify_theorem(std::make_shared<const MonotoneSet>(threshold_set(n, 0)));
        CHECK(std::abs(cert.spectral.cstar - 1.0) <= 1e-9);
        REQUIRE(cert.witness);
        CHECK(cert.witness_ratio >= 1 - 1e-9);
        // Level-one vectors are linear in the coordinates: f(x) + f(~x) is constant.
        const auto& f = *cert.witness;
        const Index top = f.set().all_ones();
        for (auto x : f.set().members())
            CHECK(f.at(x) + f.at(top ^ x) == doctest::Approx(2 * f.mean()).scale(1));
    }
}

TEST_CASE("iterative and dense solvers agree") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto a = random_upset(10, 4, seed);
        const auto lap = induced_laplacian(a);
        const auto d = lambda2(lap, EigenMethod::dense);
        const auto it = lambda2(lap, EigenMethod::iterative);
        CHECK(it.method == EigenMethod::iterative);
        CHECK(it.value == doctest::Approx(d.value).epsilon(1e-9));
        CHECK(it.residual <= 1e-8);
    }
    const auto big = poincare_constant(threshold_set(14, 7));
    CHECK(big.method == EigenMethod::iterative);
    CHECK(big.cstar <= big.bound_fp);
    CHECK(parse_eigen_method("auto") == EigenMethod::automatic);
    CHECK_THROWS_AS(parse_eigen_method("qr"), Error);
}

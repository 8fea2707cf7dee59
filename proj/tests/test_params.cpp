#include <cmath>
#include <limits>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <gtest/gtest.h>

#include "dimer/params.hpp"

namespace {

using dimer::Geometry;
using Big = boost::multiprecision::cpp_bin_float_50;

// Direct evaluation of the retarded coupling formulas in 50 digits.
Big big_gamma(double xi_d, double f1, double f2, double dd, double g1, double g2) {
    const Big xi = xi_d;
    const Big a = Big(dd) - Big(f1) * Big(f2);
    const Big b = Big(dd) - 3 * Big(f1) * Big(f2);
    using boost::multiprecision::cos;
    using boost::multiprecision::sin;
    using boost::multiprecision::sqrt;
    return Big(1.5) * sqrt(Big(g1) * Big(g2)) *
           (a * sin(xi) / xi + b * (cos(xi) / (xi * xi) - sin(xi) / (xi * xi * xi)));
}

Big big_omega(double xi_d, double f1, double f2, double dd, double g1, double g2) {
    const Big xi = xi_d;
    const Big a = Big(dd) - Big(f1) * Big(f2);
    const Big b = Big(dd) - 3 * Big(f1) * Big(f2);
    using boost::multiprecision::cos;
    using boost::multiprecision::sin;
    using boost::multiprecision::sqrt;
    return Big(1.5) * sqrt(Big(g1) * Big(g2)) *
           (-a * cos(xi) / xi + b * (sin(xi) / (xi * xi) + cos(xi) / (xi * xi * xi)));
}

double rel(double got, const Big& want) { return std::abs(static_cast<double>((Big(got) - want) / want)); }

struct GeometryCase {
    double xi, f1, f2, dd;
};

class CouplingOracle : public ::testing::TestWithParam<GeometryCase> {};

TEST_P(CouplingOracle, MatchesHighPrecisionEvaluation) {
    const auto c = GetParam();
    const Geometry g{c.xi, c.f1, c.f2, c.dd};
    for (double g2 : {1.0, 0.9999, 0.5}) {
        EXPECT_LT(rel(dimer::coupling_gamma(g, 1.0, g2), big_gamma(c.xi, c.f1, c.f2, c.dd, 1.0, g2)), 1e-13)
            << "xi=" << c.xi << " gamma2=" << g2;
        EXPECT_LT(rel(dimer::coupling_omega(g, 1.0, g2), big_omega(c.xi, c.f1, c.f2, c.dd, 1.0, g2)), 1e-13)
            << "xi=" << c.xi << " gamma2=" << g2;
    }
}

INSTANTIATE_TEST_SUITE_P(Geometries, CouplingOracle,
                         ::testing::Values(GeometryCase{1e-4, 0.0, 0.0, 1.0}, GeometryCase{0.01, 0.0, 0.0, 1.0},
                                           GeometryCase{0.02, 0.0, 0.0, 1.0}, GeometryCase{0.05, 0.3, 0.3, 1.0},
                                           GeometryCase{0.09, 0.5, 0.5, 1.0}, GeometryCase{0.25, 0.2, -0.4, 0.6},
                                           GeometryCase{0.49, 0.1, 0.1, 0.9}, GeometryCase{0.51, 0.1, 0.1, 0.9},
                                           GeometryCase{1.0, 0.0, 0.0, 1.0}, GeometryCase{3.7, 0.7, 0.2, 0.5},
                                           GeometryCase{20.0, 0.0, 0.0, 1.0}));

TEST(Coupling, GammaLimitAtContact) {
    EXPECT_DOUBLE_EQ(dimer::coupling_gamma(Geometry::parallel(0.0, 0.0), 1.0, 1.0), 1.0);
    EXPECT_NEAR(dimer::coupling_gamma(Geometry::parallel(1e-9, 0.0), 1.0, 1.0), 1.0, 1e-15);
    EXPECT_NEAR(dimer::coupling_gamma(Geometry::parallel(0.0, 0.0), 1.0, 0.25), 0.5, 1e-15);
}

TEST(Coupling, GammaAtSmallDistance) {
    // 1 - xi^2/5 to leading order.
    EXPECT_NEAR(dimer::coupling_gamma(Geometry::parallel(0.02, 0.0), 1.0, 1.0), 0.99992, 1e-8);
}

TEST(Coupling, OmegaAtSmallDistance) {
    const double omega = dimer::coupling_omega(Geometry::parallel(0.02, 0.0), 1.0, 1.0);
    EXPECT_NEAR(omega / 1.875e5, 1.0, 1e-3);
    const double vdd = dimer::static_vdd_limit(Geometry::parallel(0.02, 0.0), 1.0, 1.0);
    EXPECT_LT(std::abs(omega - vdd) / std::abs(omega), 1e-3);
}

TEST(Coupling, OrthogonalDipolesDecouple) {
    for (double xi : {0.01, 0.3, 2.0}) {
        const Geometry g{xi, 0.0, 0.0, 0.0};
        EXPECT_EQ(dimer::coupling_gamma(g, 1.0, 1.0), 0.0);
        EXPECT_EQ(dimer::coupling_omega(g, 1.0, 1.0), 0.0);
    }
}

TEST(Coupling, OmegaSingularAtContact) {
    EXPECT_THROW(dimer::coupling_omega(Geometry::parallel(0.0, 0.0), 1.0, 1.0), dimer::SingularityError);
    EXPECT_THROW(dimer::static_vdd_limit(Geometry::parallel(0.0, 0.0), 1.0, 1.0), dimer::SingularityError);
}

TEST(Coupling, RejectsBadInputs) {
    const Geometry bad{0.1, 1.0, -1.0, 1.0};  // d1 = d2 cannot have opposite projections
    EXPECT_FALSE(bad.realizable());
    EXPECT_THROW(dimer::coupling_gamma(bad, 1.0, 1.0), dimer::DomainError);
    EXPECT_THROW(dimer::coupling_omega(bad, 1.0, 1.0), dimer::DomainError);
    EXPECT_THROW(dimer::coupling_gamma(Geometry::parallel(0.1, 0.0), 0.0, 1.0), dimer::DomainError);
    EXPECT_THROW(dimer::coupling_omega(Geometry::parallel(0.1, 0.0), 1.0, -1.0), dimer::DomainError);
    EXPECT_THROW(dimer::coupling_gamma(Geometry{-0.1, 0.0, 0.0, 1.0}, 1.0, 1.0), dimer::DomainError);
    EXPECT_THROW(dimer::coupling_gamma(Geometry{0.1, 1.2, 0.0, 0.0}, 1.0, 1.0), dimer::DomainError);
}

TEST(Coupling, SeriesAndDirectAgreeAroundCrossover) {
    using dimer::detail::KernelPath;
    for (double xi = 0.5 * dimer::kSeriesCrossover; xi <= 2.0 * dimer::kSeriesCrossover; xi += 0.01) {
        for (double f : {0.0, 0.4, 0.9}) {
            const Geometry g = Geometry::parallel(xi, f);
            const double gs = dimer::detail::coupling_gamma(g, 1.0, 0.9, KernelPath::series);
            const double gd = dimer::detail::coupling_gamma(g, 1.0, 0.9, KernelPath::direct);
            const double os = dimer::detail::coupling_omega(g, 1.0, 0.9, KernelPath::series);
            const double od = dimer::detail::coupling_omega(g, 1.0, 0.9, KernelPath::direct);
            EXPECT_LT(std::abs(gs - gd) / std::abs(gs), 1e-12) << "xi=" << xi << " f=" << f;
            EXPECT_LT(std::abs(os - od) / std::abs(os), 1e-12) << "xi=" << xi << " f=" << f;
        }
    }
}

TEST(Coupling, SwapSymmetry) {
    for (double xi : {0.01, 0.2, 1.5}) {
        const Geometry g{xi, 0.3, -0.2, 0.7};
        const Geometry swapped{xi, -0.2, 0.3, 0.7};
        EXPECT_DOUBLE_EQ(dimer::coupling_gamma(g, 1.0, 0.6), dimer::coupling_gamma(swapped, 0.6, 1.0));
        EXPECT_DOUBLE_EQ(dimer::coupling_omega(g, 1.0, 0.6), dimer::coupling_omega(swapped, 0.6, 1.0));
    }
}

TEST(Coupling, ScalesWithGeometricMeanRate) {
    const Geometry g{0.07, 0.1, 0.4, 0.8};
    EXPECT_NEAR(dimer::coupling_gamma(g, 2.0, 1.8) / dimer::coupling_gamma(g, 1.0, 0.9), 2.0, 1e-15);
    EXPECT_NEAR(dimer::coupling_omega(g, 2.0, 1.8) / dimer::coupling_omega(g, 1.0, 0.9), 2.0, 1e-15);
}

TEST(Coupling, NonRetardedLimit) {
    for (double xi : {0.01, 0.005, 0.001}) {
        const Geometry g = Geometry::parallel(xi, 0.0);
        const double omega = dimer::coupling_omega(g, 1.0, 1.0);
        EXPECT_LT(std::abs(omega - dimer::static_vdd_limit(g, 1.0, 1.0)) / std::abs(omega), 3e-4);
    }
    double previous = 1.0;
    for (double xi : {0.1, 0.03, 0.01, 0.003, 0.001}) {
        const Geometry g = Geometry::parallel(xi, 0.0);
        const double gap = std::abs(dimer::static_vdd_limit(g, 1.0, 1.0) / dimer::coupling_omega(g, 1.0, 1.0) - 1.0);
        EXPECT_LT(gap, previous);
        previous = gap;
    }
}

TEST(StaticShift, ClosedForm) {
    EXPECT_NEAR(dimer::static_vdd_limit(Geometry::parallel(0.02, 0.0), 1.0, 1.0), 187500.0, 1e-9);
    const double magic = 1.0 / std::sqrt(3.0);
    EXPECT_NEAR(dimer::static_vdd_limit(Geometry::parallel(0.02, magic), 1.0, 1.0), 0.0, 1e-9);
}

TEST(GeometryTest, FromVectors) {
    const Geometry g = Geometry::from_vectors(0.05, {0.0, 0.0, 2.0}, {0.0, 0.0, 1.0}, {1.0, 0.0, 0.0});
    EXPECT_EQ(g, Geometry::parallel(0.05, 0.0));
    const Geometry h = Geometry::from_vectors(0.05, {1.0, 1.0, 0.0}, {1.0, 0.0, 0.0}, {1.0, 0.0, 0.0});
    EXPECT_NEAR(h.f1, std::sqrt(0.5), 1e-15);
    EXPECT_NEAR(h.f2, 1.0, 1e-15);
    EXPECT_NEAR(h.dd, std::sqrt(0.5), 1e-15);
    EXPECT_TRUE(h.realizable());
    EXPECT_THROW(Geometry::from_vectors(0.05, {0.0, 0.0, 0.0}, {1.0, 0.0, 0.0}, {1.0, 0.0, 0.0}),
                 dimer::DomainError);
}

TEST(Temperature, BoseEinsteinOccupation) {
    EXPECT_NEAR(dimer::photon_number_from_temperature(460.0, 13000.0), 0.1, 0.003);
    EXPECT_NEAR(dimer::photon_number_from_temperature(460.0, 11440.0), 0.07, 0.003);
    EXPECT_NEAR(dimer::photon_number_from_temperature(460.0, 10250.0), 0.05, 0.003);
    EXPECT_EQ(dimer::photon_number_from_temperature(460.0, 1.0), 0.0);
    EXPECT_THROW(dimer::photon_number_from_temperature(0.0, 300.0), dimer::DomainError);
    EXPECT_THROW(dimer::photon_number_from_temperature(460.0, -1.0), dimer::DomainError);
}

TEST(Kappa, ClosedForm) {
    EXPECT_DOUBLE_EQ(dimer::kappa(1.0, 0.0), 2.0);
    EXPECT_NEAR(dimer::kappa(1.0, 0.1), 2.4, 1e-15);
    EXPECT_NEAR(dimer::kappa(0.9999, 0.1), 2.39976, 1e-14);
    EXPECT_THROW(dimer::kappa(0.0, 0.1), dimer::DomainError);
    EXPECT_THROW(dimer::kappa(1.0, -0.1), dimer::DomainError);
}

TEST(Couplings, OverrideZeroesCollectiveDecayOnly) {
    dimer::SystemParams p;
    p.geometry = Geometry::parallel(0.02, 0.0);
    const auto c = dimer::couplings(p);
    p.zero_collective_decay = true;
    const auto z = dimer::couplings(p);
    EXPECT_GT(c.big_gamma, 0.9);
    EXPECT_EQ(z.big_gamma, 0.0);
    EXPECT_EQ(z.big_omega, c.big_omega);
    EXPECT_EQ(z.t(), std::complex<double>(0.0, c.big_omega));
}

TEST(SystemParamsTest, Defaults) {
    const dimer::SystemParams p;
    EXPECT_EQ(p.gamma1, 1.0);
    EXPECT_EQ(p.gamma2, 0.9999);
    EXPECT_NO_THROW(p.validate());
    dimer::SystemParams bad = p;
    bad.n_photon = -0.1;
    EXPECT_THROW(bad.validate(), dimer::DomainError);
    bad = p;
    bad.delta = std::numeric_limits<double>::infinity();
    EXPECT_THROW(bad.validate(), dimer::DomainError);
}

}  // namespace

#include "lrflow/lowrank_state.hpp"
#include "lrflow/scenario.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace lrflow;

namespace {

PhaseGrids grids(int nx, int nv, double vmax = 6.0) { return {SpatialGrid(nx), VelocityGrid(nv, vmax)}; }

}  // namespace

TEST_CASE("qr orthonormalization") {
  SpatialGrid g(16);
  Rng rng(1);
  std::mt19937_64 r2(2);

  SUBCASE("orthonormal input gives identity R") {
    const Basis F = oracle::random_orthonormal(g.size(), 5, g.weight(), r2);
    const QrResult qr = qr_orthonormalize(g, F, rng);
    CHECK((qr.R - Matrix::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((qr.Q - F).cwiseAbs().maxCoeff() < 1e-8);
  }

  SUBCASE("random input is reconstructed") {
    std::normal_distribution<double> N(0.0, 1.0);
    Basis F(64, 6);
    for (Eigen::Index i = 0; i < F.size(); ++i) F.data()[i] = N(r2);
    const QrResult qr = qr_orthonormalize(F, 1.0 / 64, rng);
    CHECK((F - qr.Q * qr.R).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(orthonormality_residual(qr.Q, 1.0 / 64) <= 1e-10);
    for (int j = 0; j < 6; ++j) CHECK(qr.R(j, j) >= 0.0);
    CHECK(qr.R.triangularView<Eigen::StrictlyLower>().toDenseMatrix().cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("dependent column gets a zero pivot and an orthogonal filler") {
    Basis F(g.size(), 2);
    F.col(0) = g.sample([](double x, double) { return std::sin(2 * std::numbers::pi * x); });
    F.col(1) = 2.0 * F.col(0);
    const QrResult qr = qr_orthonormalize(g, F, rng);
    CHECK(qr.R(1, 1) == 0.0);
    CHECK(orthonormality_residual(qr.Q, g.weight()) <= 1e-10);
    CHECK((F - qr.Q * qr.R).cwiseAbs().maxCoeff() <= 1e-10);
  }

  CHECK_THROWS_AS(qr_orthonormalize(Basis(16, 0), 1.0, rng), std::invalid_argument);
}

TEST_CASE("equilibrium initialization") {
  const PhaseGrids G = grids(16, 32);
  Rng rng(4);

  SUBCASE("uniform Maxwellian") {
    const Field one = Field::Ones(G.x.size()), zero = Field::Zero(G.x.size());
    const LowRankState s = init_equilibrium(G, one, zero, zero, 6, rng);
    const MomentFields m = moments(G, s);
    CHECK((m.rho.array() - 1.0).abs().maxCoeff() < 1e-10);
    CHECK(m.mom1.cwiseAbs().maxCoeff() < 1e-10);
    CHECK(m.mom2.cwiseAbs().maxCoeff() < 1e-10);
    CHECK(orthonormality_residual(s.X, G.x.weight()) <= 1e-10);
    CHECK(orthonormality_residual(s.V, G.v.weight()) <= 1e-10);
    CHECK(total_mass(G, s) == doctest::Approx(1.0).epsilon(1e-12));

    // scaling S scales the moments
    LowRankState s2 = s;
    s2.S *= 2.0;
    CHECK((moments(G, s2).rho - 2.0 * m.rho).cwiseAbs().maxCoeff() < 1e-12);
  }

  SUBCASE("sound wave moments and padding") {
    const FluidInit in = init_sound_wave(G.x, 1e-3);
    const LowRankState s = init_equilibrium(G, in.rho, in.u1, in.u2, 10, rng);
    CHECK(s.rank() == 10);
    const MomentFields m = moments(G, s);
    CHECK((m.rho - in.rho).cwiseAbs().maxCoeff() < 1e-8);
    CHECK((m.u2 - in.u2).cwiseAbs().maxCoeff() < 1e-8);
    CHECK(m.u1.cwiseAbs().maxCoeff() < 1e-8);
    CHECK(orthonormality_residual(s.X, G.x.weight()) <= 1e-10);
    CHECK(orthonormality_residual(s.V, G.v.weight()) <= 1e-10);
    CHECK(std::abs(total_mass(G, s) - 1.0) < 1e-12);
  }

  SUBCASE("shear flow moments") {
    const PhaseGrids H = grids(64, 16);
    const FluidInit in = init_shear_flow(H.x, 0.1, 1.0 / 30.0, 5e-3);
    const LowRankState s = init_equilibrium(H, in.rho, in.u1, in.u2, 10, rng);
    const MomentFields m = moments(H, s);
    CHECK(std::abs(m.u1.cwiseAbs().maxCoeff() - 0.1) <= 1e-3);
    CHECK(std::abs(total_momentum(H, s).second) < 1e-12);
  }

  SUBCASE("expansion and SVD initializations agree to third order in u") {
    const PhaseGrids H = grids(8, 24);
    const Field rho = H.x.sample([](double x, double y) { return 1.0 + 0.1 * std::sin(2 * std::numbers::pi * (x + y)); });
    const Field u1 = H.x.sample([](double, double y) { return 0.01 * std::cos(2 * std::numbers::pi * y); });
    const Field u2 = H.x.sample([](double x, double) { return 0.01 * std::sin(2 * std::numbers::pi * x); });
    const MomentFields a = moments(H, init_equilibrium(H, rho, u1, u2, 6, rng));
    const MomentFields b = moments(H, init_equilibrium_svd(H, rho, u1, u2, 6));
    CHECK((a.rho - rho).cwiseAbs().maxCoeff() < 1e-8);
    CHECK((a.rho - b.rho).cwiseAbs().maxCoeff() < 1e-5);
    CHECK((a.u1 - b.u1).cwiseAbs().maxCoeff() < 1e-5);
  }

  const Field one = Field::Ones(G.x.size()), zero = Field::Zero(G.x.size());
  CHECK_THROWS_AS(init_equilibrium(G, one, zero, zero, 5, rng), std::invalid_argument);
  CHECK_THROWS_AS(init_equilibrium(G, Field(-one), zero, zero, 6, rng), std::invalid_argument);
}

TEST_CASE("pointwise evaluation") {
  SUBCASE("rank one state") {
    const PhaseGrids G = grids(8, 8);
    LowRankState s;
    s.X = Basis::Ones(G.x.size(), 1);
    s.S = Matrix::Ones(1, 1);
    s.V = G.v.sample([](double a, double b) { return gaussian(a, b); });
    for (Eigen::Index ix = 0; ix < G.x.size(); ix += 7)
      for (Eigen::Index iv = 0; iv < G.v.size(); iv += 5) CHECK(evaluate_f(s, ix, iv) == doctest::Approx(s.V(iv, 0)));
    CHECK_THROWS_AS(evaluate_f(s, G.x.size(), 0), std::out_of_range);
  }

  SUBCASE("equilibrium peak") {
    // odd n_v puts a node at v = 0
    const PhaseGrids G = grids(8, 33);
    Rng rng(2);
    const Field one = Field::Ones(G.x.size()), zero = Field::Zero(G.x.size());
    const LowRankState s = init_equilibrium(G, one, zero, zero, 6, rng);
    const Eigen::Index centre = G.v.index(16, 16);
    CHECK(std::abs(G.v.node(16)) < 1e-14);
    CHECK(std::abs(evaluate_f(s, 3, centre) - 1.0 / (2.0 * std::numbers::pi)) < 1e-8);
  }

  SUBCASE("matches a brute-force tensor reconstruction") {
    const PhaseGrids G = grids(8, 8);
    Rng rng(9);
    const FluidInit in = init_sound_wave(G.x, 0.05);
    const LowRankState s = init_equilibrium(G, in.rho, in.u1, in.u2, 7, rng);
    const Matrix dense = dense_f(s);
    double worst = 0.0;
    for (Eigen::Index ix = 0; ix < G.x.size(); ++ix)
      for (Eigen::Index iv = 0; iv < G.v.size(); ++iv) {
        double f = 0.0;
        for (int i = 0; i < 7; ++i)
          for (int j = 0; j < 7; ++j) f += s.X(ix, i) * s.S(i, j) * s.V(iv, j);
        worst = std::max({worst, std::abs(f - evaluate_f(s, ix, iv)), std::abs(f - dense(ix, iv))});
      }
    CHECK(worst <= 1e-12);
  }
}

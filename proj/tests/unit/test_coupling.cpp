#include "wgscatter/coupling.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace wgscatter;

namespace {

// Composite Simpson rule on 2 int_0^1 sin(n pi u) sin(n' pi u) e^{+-i pi chi u} du.
Complex simpson_oracle(int n, int n2, int sign, double chi, int intervals = 20000) {
  const double h = 1.0 / intervals;
  Complex sum(0.0, 0.0);
  for (int i = 0; i <= intervals; ++i) {
    const double u = i * h;
    const double w = (i == 0 || i == intervals) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    sum += w * 2.0 * std::sin(n * M_PI * u) * std::sin(n2 * M_PI * u) *
           std::exp(Complex(0.0, sign * M_PI * chi * u));
  }
  return sum * h / 3.0;
}

} // namespace

TEST(Coupling, ClosedFormMatchesIndependentQuadrature) {
  double worst = 0.0;
  for (int n = 1; n <= 6; ++n)
    for (int n2 = 1; n2 <= 6; ++n2)
      for (double chi : {0.0, 0.13, 0.9, 1.0, 2.5, 3.0, 4.7, 7.0, 11.0})
        for (auto s : {CouplingSign::plus, CouplingSign::minus})
          worst = std::max(worst, std::abs(coupling_element_closed(n, n2, s, chi) -
                                           simpson_oracle(n, n2, sign_value(s), chi)));
  EXPECT_LT(worst, 1e-10);
}

TEST(Coupling, LibraryQuadratureMatchesTestOracle) {
  for (int n = 1; n <= 4; ++n)
    for (int n2 = 1; n2 <= 4; ++n2)
      EXPECT_LT(std::abs(coupling_element_quadrature(n, n2, CouplingSign::plus, 1.7) -
                         simpson_oracle(n, n2, 1, 1.7)),
                1e-10);
}

TEST(Coupling, IdentityAtZeroChi) {
  const auto c = coupling_matrices(5, 0.0);
  EXPECT_LT((c.c_plus - ComplexMatrix::Identity(5, 5)).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LT((c.c_minus - ComplexMatrix::Identity(5, 5)).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Coupling, SymmetryAndConjugationProperties) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> chi_dist(0.0, 8.0);
  for (int trial = 0; trial < 40; ++trial) {
    const double chi = chi_dist(rng);
    const auto c = coupling_matrices(7, chi);
    EXPECT_LT((c.c_plus - c.c_plus.transpose()).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LT((c.c_minus - c.c_plus.conjugate()).cwiseAbs().maxCoeff(), 1e-15);
    // Parity: (-1)^{n+n'} C+_{nn'} = e^{i pi chi} C-_{nn'}.
    for (int n = 1; n <= 7; ++n)
      for (int n2 = 1; n2 <= 7; ++n2) {
        const double parity = ((n + n2) % 2 == 0) ? 1.0 : -1.0;
        EXPECT_LT(std::abs(parity * c.c_plus(n - 1, n2 - 1) -
                           std::exp(Complex(0.0, M_PI * chi)) * c.c_minus(n - 1, n2 - 1)),
                  1e-13);
      }
  }
}

TEST(Coupling, ContinuousAcrossRemovableSingularities) {
  // chi = n' - n for (1,3) and chi = n + n' for (2,3).
  const struct {
    int n, n2;
    double chi;
  } loci[] = {{1, 3, 2.0}, {1, 3, 4.0}, {2, 3, 1.0}, {2, 3, 5.0}, {4, 4, 8.0}, {1, 2, 3.0}};
  for (const auto &l : loci) {
    for (double off : {-1e-5, -1e-7, -1e-9, 0.0, 1e-9, 1e-7, 1e-5}) {
      const double chi = l.chi * (1.0 + off);
      for (auto s : {CouplingSign::plus, CouplingSign::minus})
        EXPECT_LT(std::abs(coupling_element_closed(l.n, l.n2, s, chi) -
                           coupling_element_quadrature(l.n, l.n2, s, chi)),
                  1e-12)
            << l.n << "," << l.n2 << " chi=" << chi;
    }
  }
}

TEST(Coupling, ResonancePeaksNearDifferenceAndSum) {
  // |C_{12}| peaks between the two resonance conditions; |C_{13}| has a single
  // peak at chi = 3 where the two conditions (2 and 4) merge.
  double best_chi = 0.0, best = 0.0;
  for (int i = 0; i <= 800; ++i) {
    const double chi = i * 0.01;
    const double v = std::abs(coupling_element_closed(1, 3, CouplingSign::plus, chi));
    if (v > best) {
      best = v;
      best_chi = chi;
    }
  }
  EXPECT_NEAR(best_chi, 3.0, 0.1);
  // Diagonal element decays away from chi = 0 and revives near chi = 2n.
  const double at2n = std::abs(coupling_element_closed(2, 2, CouplingSign::plus, 4.0));
  const double between = std::abs(coupling_element_closed(2, 2, CouplingSign::plus, 2.3));
  EXPECT_GT(at2n, between);
}

TEST(Coupling, FirstOrderSeriesErrorIsSecondOrder) {
  for (auto [n, n2] : {std::pair{1, 1}, std::pair{1, 2}, std::pair{2, 3}, std::pair{1, 3}}) {
    const double chi = 0.01;
    const double e1 = std::abs(coupling_element_closed(n, n2, CouplingSign::plus, chi) -
                               coupling_first_order(n, n2, CouplingSign::plus, chi));
    const double e2 = std::abs(coupling_element_closed(n, n2, CouplingSign::plus, chi / 2) -
                               coupling_first_order(n, n2, CouplingSign::plus, chi / 2));
    EXPECT_NEAR(e1 / e2, 4.0, 0.1) << n << "," << n2;
  }
}

TEST(Coupling, FirstOrderOffDiagonalValue) {
  // -+4 n n' [1 - (-1)^{n+n'}] / ((n^2 - n'^2)^2 pi) i chi for C+-.
  const double chi = 0.2;
  const Complex expected(0.0, -8.0 * 2.0 / (9.0 * M_PI) * chi);
  EXPECT_LT(std::abs(coupling_first_order(1, 2, CouplingSign::plus, chi) - expected), 1e-15);
  EXPECT_LT(std::abs(coupling_first_order(1, 2, CouplingSign::minus, chi) + expected), 1e-15);
  EXPECT_EQ(coupling_first_order(1, 3, CouplingSign::plus, chi), Complex(0.0, 0.0));
}

TEST(Coupling, TruncatedMatrixApproachesUnitary) {
  // exp(i kL y) is unitary on L2(0, a); its leading block converges as N grows.
  const auto c = coupling_matrices(80, 1.3);
  const ComplexMatrix p = c.c_plus * c.c_plus.adjoint();
  EXPECT_LT((p.topLeftCorner(3, 3) - ComplexMatrix::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-4);
}

TEST(Coupling, RejectsBadIndices) {
  EXPECT_THROW(coupling_element_closed(0, 1, CouplingSign::plus, 0.5), ConfigError);
  EXPECT_THROW(coupling_matrices(0, 0.5), ConfigError);
}

TEST(Coupling, NegativeChiSwapsSigns) {
  for (double chi : {0.4, 2.0, 3.3})
    EXPECT_LT(std::abs(coupling_element_closed(2, 3, CouplingSign::plus, -chi) -
                       coupling_element_closed(2, 3, CouplingSign::minus, chi)),
              1e-14);
}

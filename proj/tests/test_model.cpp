#include <doctest.h>

#include "model.hpp"
#include "oracle.hpp"

#include <cmath>
#include <random>

using namespace dwp;

namespace {

ReducedDwp example1() { return make_reduced(Vec::Constant(1, -2.0), Vec::Constant(1, -3.0), 14.0); }

ReducedDwp example2() {
  Vec alpha(2), psi(2);
  alpha << -1.9960, 202.0700;
  psi << -22.0487, -502.0209;
  return make_reduced(alpha, psi, 27.9994);
}

ReducedDwp example3() { return make_reduced(Vec::Zero(2), Vec::Zero(2), 38.0); }

Vec random_vec(std::mt19937_64& rng, int n, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = dist(rng);
  return v;
}

}  // namespace

TEST_CASE("eval_g at zero is nu^2/2") {
  const ReducedDwp p = example1();
  CHECK(eval_g(Vec::Zero(1), p) == doctest::Approx(0.5 * 14.0 * 14.0));
}

TEST_CASE("eval_g reproduces the reported minimizer values") {
  CHECK(std::abs(eval_g(Vec::Constant(1, -5.7484), example1()) - (-47.1089)) <= 1e-3);
  Vec w2(2);
  w2 << -7.7335, -2.4262;
  CHECK(std::abs(eval_g(w2, example2()) - (-841.7182)) <= 1e-3);
}

TEST_CASE("eval_grad at zero is -psi") {
  const ReducedDwp p = example2();
  CHECK((eval_grad(Vec::Zero(2), p) + p.psi).norm() == doctest::Approx(0.0));
}

TEST_CASE("eval_grad nearly vanishes at the reported global minimizer") {
  CHECK(eval_grad(Vec::Constant(1, -5.7484), example1()).norm() <= 5e-3);
}

TEST_CASE("gradient and Hessian match finite differences") {
  std::mt19937_64 rng(12345);
  Vec alpha(3), psi(3);
  alpha << -1.5, 0.25, 2.0;
  psi << 0.7, -1.1, 0.4;
  const ReducedDwp p = make_reduced(alpha, psi, 3.0);
  for (int k = 0; k < 10; ++k) {
    const Vec w = random_vec(rng, 3, -4.0, 4.0);
    const Vec ag = eval_grad(w, p);
    const Vec fg = fd_gradient(p, w, 1e-5);
    CHECK((ag - fg).norm() / (1.0 + ag.norm()) <= 1e-6);
    const Mat ah = eval_hess(w, p);
    const Mat fh = fd_hessian(p, w, 1e-4);
    CHECK((ah - fh).norm() / (1.0 + ah.norm()) <= 1e-5);
  }
}

TEST_CASE("eval_hess at zero with zero strain is Diag(alpha)") {
  Vec alpha(2), psi(2);
  alpha << 1.0, 3.0;
  psi << 0.5, 0.5;
  const ReducedDwp p = make_reduced(alpha, psi, 0.0);
  const Mat H = eval_hess(Vec::Zero(2), p);
  CHECK(H(0, 0) == doctest::Approx(1.0));
  CHECK(H(1, 1) == doctest::Approx(3.0));
  CHECK(H(0, 1) == doctest::Approx(0.0));
}

TEST_CASE("the flat-well Hessian at the origin is -38 I with signature (2,0,0)") {
  const ReducedDwp p = example3();
  const Mat H = eval_hess(Vec::Zero(2), p);
  CHECK((H + 38.0 * Mat::Identity(2, 2)).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
  const HessianSignature sig = hessian_signature(H);
  CHECK(sig.negative == 2);
  CHECK(sig.zero == 0);
  CHECK(sig.positive == 0);
}

TEST_CASE("stored Hessian is exactly symmetric") {
  std::mt19937_64 rng(5);
  const ReducedDwp p = make_reduced(random_vec(rng, 4, -3, 3), random_vec(rng, 4, -3, 3), 1.7);
  const Vec w = random_vec(rng, 4, -2, 2);
  const Mat H = eval_hess(w, p);
  CHECK((H - H.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("coercivity: g exceeds g(0) beyond the scale bound") {
  std::mt19937_64 rng(99);
  for (int k = 0; k < 25; ++k) {
    const int n = 1 + static_cast<int>(rng() % 3);
    const ReducedDwp p =
        make_reduced(random_vec(rng, n, -5, 5), random_vec(rng, n, -5, 5),
                     std::uniform_real_distribution<double>(-5, 10)(rng));
    const double bound =
        std::abs(p.nu) + p.alpha.cwiseAbs().maxCoeff() + p.psi.norm() + 1.0;
    Vec dir = random_vec(rng, n, -1, 1);
    if (dir.norm() < 1e-12) dir[0] = 1.0;
    dir.normalize();
    const double norm_sq = 4.0 * bound * bound * 1.0000001;
    const Vec w = std::sqrt(norm_sq) * dir;
    CHECK(eval_g(w, p) > eval_g(Vec::Zero(n), p));
  }
}

TEST_CASE("negating one coordinate changes g by exactly -2 psi_i w_i") {
  std::mt19937_64 rng(7);
  const int n = 3;
  const ReducedDwp p = make_reduced(random_vec(rng, n, -4, 4), random_vec(rng, n, -4, 4), 2.5);
  const Vec w = random_vec(rng, n, -3, 3);
  for (int i = 0; i < n; ++i) {
    Vec flipped = w;
    flipped[i] = -flipped[i];
    CHECK(std::abs((eval_g(w, p) - eval_g(flipped, p)) - (-2.0 * p.psi[i] * w[i])) <= 1e-12);
  }
}

TEST_CASE("dimension mismatches are rejected") {
  const ReducedDwp p = example2();
  CHECK_THROWS_AS(eval_g(Vec::Zero(3), p), Error);
  CHECK_THROWS_AS(eval_grad(Vec::Zero(1), p), Error);
  CHECK_THROWS_AS(eval_hess(Vec::Zero(5), p), Error);
}

TEST_CASE("make_reduced sorts alpha ascending and permutes psi consistently") {
  Vec alpha(3), psi(3);
  alpha << 2.0, -1.0, 0.5;
  psi << 10.0, 20.0, 30.0;
  std::vector<int> perm;
  const ReducedDwp p = make_reduced(alpha, psi, 0.0, &perm);
  CHECK(p.alpha[0] == -1.0);
  CHECK(p.alpha[1] == 0.5);
  CHECK(p.alpha[2] == 2.0);
  CHECK(p.psi[0] == 20.0);
  CHECK(p.psi[1] == 30.0);
  CHECK(p.psi[2] == 10.0);
  CHECK(perm == std::vector<int>{1, 2, 0});
}

TEST_CASE("make_general symmetrizes and validates") {
  Mat A(2, 2), B(2, 2);
  A << 1.0, 0.5, 0.5, 2.0;
  B << 1.0, 0.0, 0.0, 1.0;
  const GeneralDwp gp = make_general(A, B, Vec::Zero(2), 1.0, Vec::Zero(2));
  CHECK(gp.A == gp.A.transpose());

  Mat bad = A;
  bad(0, 1) = 5.0;  // grossly asymmetric
  CHECK_THROWS_AS(make_general(bad, B, Vec::Zero(2), 1.0, Vec::Zero(2)), Error);
  CHECK_THROWS_AS(make_general(A, Mat::Zero(2, 2), Vec::Zero(2), 1.0, Vec::Zero(2)), Error);
}

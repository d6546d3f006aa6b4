#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "probitda/errors.hpp"
#include "probitda/model.hpp"
#include "test_support.hpp"

using namespace probitda;

namespace {

ProbitData toy_data() {
  Eigen::MatrixXd X(1, 1);
  X << 1.0;
  Eigen::VectorXi y(1);
  y << 1;
  return {X, y};
}

}  // namespace

TEST_CASE("toy context matches direct dense arithmetic") {
  Eigen::MatrixXd Q(1, 1);
  Q << 1.0;
  const PosteriorContext ctx =
      build_context(toy_data(), ProperNormal{Q, Eigen::VectorXd::Zero(1)});
  CHECK(ctx.P(0, 0) == doctest::Approx(2.0));
  CHECK(ctx.Pinv_Xt(0, 0) == doctest::Approx(0.5));
  CHECK(ctx.Aquad(0, 0) == doctest::Approx(0.5));
  CHECK(ctx.Bvec[0] == doctest::Approx(0.0));
  CHECK(ctx.Pinv_v[0] == doctest::Approx(0.0));
}

TEST_CASE("context fields agree with explicit inverses on random problems") {
  oracle::Rng rng(11);
  for (int rep = 0; rep < 20; ++rep) {
    const auto prob = oracle::random_proper_problem(rng, 12, 5);
    const PosteriorContext ctx = build_context(prob.data, prob.prior);
    const auto& pn = std::get<ProperNormal>(prob.prior);

    const Eigen::MatrixXd P_oracle =
        prob.data.X.transpose() * prob.data.X + pn.Q;
    const Eigen::MatrixXd Pinv = P_oracle.inverse();
    CHECK((ctx.Pinv_Xt - Pinv * prob.data.X.transpose())
              .cwiseAbs()
              .maxCoeff() < 1e-9);
    CHECK((ctx.Pinv_v - Pinv * pn.v).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((ctx.Aquad -
           (Eigen::MatrixXd::Identity(ctx.n(), ctx.n()) -
            prob.data.X * Pinv * prob.data.X.transpose()))
              .cwiseAbs()
              .maxCoeff() < 1e-9);
    CHECK((ctx.Bvec - prob.data.X * Pinv * pn.v).cwiseAbs().maxCoeff() <
          1e-9);

    // Cholesky reconstruction at 1e-10 relative Frobenius
    const double rel = (ctx.Lchol * ctx.Lchol.transpose() - ctx.P).norm() /
                       ctx.P.norm();
    CHECK(rel < 1e-10);
  }
}

TEST_CASE("Aquad is a positive quadratic form on nonzero vectors") {
  oracle::Rng rng(23);
  for (int rep = 0; rep < 50; ++rep) {
    const auto prob = oracle::random_proper_problem(rng, 10, 4);
    const PosteriorContext ctx = build_context(prob.data, prob.prior);
    for (int k = 0; k < 20; ++k) {
      const Eigen::VectorXd z = oracle::random_matrix(ctx.n(), 1, rng);
      CHECK(z.dot(ctx.Aquad * z) > 0.0);
    }
  }
}

TEST_CASE("g-prior resolution") {
  oracle::Rng rng(31);
  const Eigen::MatrixXd X = oracle::random_matrix(6, 3, rng);
  const ProbitData data{X, oracle::random_response(6, rng)};
  const double g = 2.7;
  const PosteriorContext ctx = build_context(data, GPrior{g});

  // resolved Q inverts back to g (X^T X)^{-1}
  const Eigen::MatrixXd Qinv_expected = g * (X.transpose() * X).inverse();
  CHECK((ctx.Q.inverse() - Qinv_expected).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(ctx.v.isZero());
  CHECK(ctx.Bvec.isZero());

  // whitened cross-product has eigenvalue g with multiplicity p
  const Eigen::MatrixXd Qis = symmetric_inv_sqrt(ctx.Q);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
      Qis * X.transpose() * X * Qis);
  for (Eigen::Index i = 0; i < 3; ++i) {
    CHECK(es.eigenvalues()[i] == doctest::Approx(g).epsilon(1e-9));
  }
}

TEST_CASE("improper flat context is the Q -> 0 limit") {
  oracle::Rng rng(37);
  const Eigen::MatrixXd X = oracle::random_matrix(7, 2, rng);
  const ProbitData data{X, oracle::random_response(7, rng)};
  const PosteriorContext ctx = build_context(data, ImproperFlat{});
  CHECK(ctx.Q.isZero());
  CHECK_FALSE(ctx.proper);
  CHECK_FALSE(ctx.Wtilde.has_value());
  const Eigen::MatrixXd H =
      X * (X.transpose() * X).inverse() * X.transpose();
  CHECK((ctx.Aquad - (Eigen::MatrixXd::Identity(7, 7) - H))
            .cwiseAbs()
            .maxCoeff() < 1e-9);
}

TEST_CASE("sign_transform definition, involution and cross-product") {
  Eigen::MatrixXd X(2, 1);
  X << 1.0, 1.0;
  Eigen::VectorXi y(2);
  y << 0, 1;
  const Eigen::MatrixXd W = sign_transform(X, y);
  CHECK(W(0, 0) == 1.0);
  CHECK(W(1, 0) == -1.0);

  // y all zero leaves X untouched
  CHECK(sign_transform(X, Eigen::VectorXi::Zero(2)) == X);

  oracle::Rng rng(41);
  const Eigen::MatrixXd X4 = oracle::random_matrix(4, 2, rng);
  const Eigen::VectorXi y4 = oracle::random_response(4, rng);
  const Eigen::MatrixXd W4 = sign_transform(X4, y4);
  CHECK(W4.transpose() * W4 == X4.transpose() * X4);  // exact flips
  CHECK(sign_transform(W4, y4) == X4);                // involution
}

TEST_CASE("validation and error paths") {
  Eigen::MatrixXd X(2, 1);
  X << 1.0, 2.0;
  Eigen::VectorXi y(2);
  y << 0, 1;

  SUBCASE("y entries outside {0,1}") {
    Eigen::VectorXi bad(2);
    bad << 0, 2;
    CHECK_THROWS_WITH_AS(ProbitData(X, bad), doctest::Contains("not in"),
                         Error);
  }
  SUBCASE("dimension mismatch between X and y") {
    Eigen::VectorXi bad(3);
    bad << 0, 1, 0;
    try {
      ProbitData d(X, bad);
      FAIL("expected throw");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::dimension_mismatch);
    }
  }
  SUBCASE("non positive definite Q") {
    Eigen::MatrixXd Q(1, 1);
    Q << -1.0;
    try {
      build_context(ProbitData{X, y}, ProperNormal{Q, Eigen::VectorXd::Zero(1)});
      FAIL("expected throw");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::cholesky_failure);
    }
  }
  SUBCASE("rank-deficient design rejected for gprior and flat") {
    Eigen::MatrixXd Xr(3, 2);
    Xr << 1, 2, 2, 4, 3, 6;  // second column is twice the first
    const ProbitData d{Xr, Eigen::VectorXi::Zero(3)};
    try {
      build_context(d, GPrior{1.0});
      FAIL("expected throw");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::rank_deficient);
    }
    try {
      build_context(d, ImproperFlat{});
      FAIL("expected throw");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::rank_deficient);
    }
  }
  SUBCASE("flat prior with n < p rejected") {
    Eigen::MatrixXd Xw(1, 2);
    Xw << 1.0, 0.5;
    Eigen::VectorXi yw(1);
    yw << 1;
    CHECK_THROWS_AS(build_context(ProbitData{Xw, yw}, ImproperFlat{}), Error);
  }
}

TEST_CASE("symmetric_inv_sqrt produces the symmetric root") {
  oracle::Rng rng(43);
  const Eigen::MatrixXd Q = oracle::random_spd(4, rng);
  const Eigen::MatrixXd R = symmetric_inv_sqrt(Q);
  CHECK((R - R.transpose()).cwiseAbs().maxCoeff() < 1e-10);
  const Eigen::MatrixXd QinvRec = R * R;
  CHECK((QinvRec * Q - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() <
        1e-9);
}

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "wargame/errors.hpp"
#include "wargame/evaluation.hpp"

namespace wargame {

namespace {

// Maximum-entropy distribution p with (A p)_i <= 0 for all i, found through
// its dual: minimise logsumexp(A lambda) over lambda >= 0, where
// p = softmax(A lambda). Solved by projected Newton with an Armijo search.
struct EntropyDual {
  const Eigen::MatrixXd& a;

  double value(const Eigen::VectorXd& lambda, Eigen::VectorXd* p) const {
    const Eigen::VectorXd z = a * lambda;
    const double zmax = z.maxCoeff();
    Eigen::VectorXd e = (z.array() - zmax).exp().matrix();
    const double sum = e.sum();
    if (p) *p = e / sum;
    return zmax + std::log(sum);
  }
};

}  // namespace

NashResult nash_average(const std::vector<std::vector<double>>& w, const NashOptions& options) {
  const auto n = static_cast<Eigen::Index>(w.size());
  if (n == 0) throw RuleError("nash_average needs a non-empty matrix");
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (static_cast<Eigen::Index>(w[i].size()) != n) throw RuleError("nash_average needs a square matrix");
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = w[i][j] - 0.5;
  }

  const EntropyDual dual{a};
  Eigen::VectorXd lambda = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd p;
  double f = dual.value(lambda, &p);
  NashResult result;
  auto projected_gradient = [&](const Eigen::VectorXd& g) {
    double worst = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      const double pg = lambda(j) > 0.0 ? g(j) : std::min(g(j), 0.0);
      worst = std::max(worst, std::abs(pg));
    }
    return worst;
  };

  int it = 0;
  for (; it < options.max_iterations; ++it) {
    const Eigen::VectorXd g = a.transpose() * p;
    if (projected_gradient(g) <= options.tolerance) {
      result.converged = true;
      break;
    }
    const Eigen::MatrixXd cov = Eigen::MatrixXd(p.asDiagonal()) - p * p.transpose();
    const Eigen::MatrixXd h = a.transpose() * cov * a;
    const double eps = std::min(1e-6, projected_gradient(g));
    std::vector<Eigen::Index> free;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!(lambda(j) <= eps && g(j) > 0.0)) free.push_back(j);
    }
    Eigen::VectorXd d = -g;
    if (!free.empty()) {
      const auto k = static_cast<Eigen::Index>(free.size());
      Eigen::MatrixXd hf(k, k);
      Eigen::VectorXd gf(k);
      double scale = 0.0;
      for (Eigen::Index r = 0; r < k; ++r) {
        gf(r) = g(free[r]);
        for (Eigen::Index c = 0; c < k; ++c) hf(r, c) = h(free[r], free[c]);
        scale = std::max(scale, hf(r, r));
      }
      hf.diagonal().array() += 1e-10 * scale + 1e-300;
      const Eigen::VectorXd df = hf.ldlt().solve(-gf);
      if (df.allFinite() && df.dot(gf) < 0.0) {
        for (Eigen::Index r = 0; r < k; ++r) d(free[r]) = df(r);
      }
    }
    double step = 1.0;
    bool moved = false;
    for (int ls = 0; ls < 60; ++ls) {
      const Eigen::VectorXd trial = (lambda + step * d).cwiseMax(0.0);
      Eigen::VectorXd pt;
      const double ft = dual.value(trial, &pt);
      if (ft <= f + 1e-4 * g.dot(trial - lambda)) {
        moved = (trial - lambda).cwiseAbs().maxCoeff() > 0.0;
        lambda = trial;
        f = ft;
        p = pt;
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;
  }

  result.iterations = it;
  result.p.assign(p.data(), p.data() + n);
  const Eigen::VectorXd skill = a * p;
  result.skill.assign(skill.data(), skill.data() + n);
  result.exploitability = std::max(0.0, skill.maxCoeff());
  if (result.exploitability <= options.tolerance) result.converged = true;
  return result;
}

}  // namespace wargame

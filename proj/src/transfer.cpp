#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "fsep/error.hpp"
#include "fsep/exact.hpp"

namespace fsep {

namespace {

double tail_of(double zeta, std::size_t hmax, double w_norm2) {
  const double imax = static_cast<double>(hmax / 2);
  return std::pow(zeta, 2.0 * (imax + 1.0)) / (1.0 - zeta * zeta) / w_norm2;
}

double eigvec_norm2(double zeta) {
  return 2.0 * zeta * zeta / ((1.0 + zeta) * (1.0 + zeta) * (1.0 - zeta));
}

// Contribution of the truncated heights to the mean height.
double tail_moment(double zeta, std::size_t hmax, double w_norm2) {
  double sum = 0.0;
  for (std::size_t i = hmax / 2 + 1;; ++i) {
    const double term = 2.0 * static_cast<double>(i) * std::pow(zeta, 2.0 * static_cast<double>(i));
    sum += term;
    if (term < 1e-20 * sum) break;
  }
  return sum / w_norm2;
}

void check_zeta(double zeta) {
  if (!(zeta > 0.0 && zeta < 1.0)) throw InvalidArgument("fugacity must lie in (0,1)");
}

}  // namespace

double TransferSpec::t(std::size_t i, std::size_t j) const noexcept {
  return 0.5 * (u[i] * v[j] + v[i] * u[j]) + v[i] * v[j];
}

double TransferSpec::normalizer(std::size_t k) const {
  const double kk = static_cast<double>(k);
  return std::pow(zeta, 2.0 * kk + 2.0) /
         ((1.0 + zeta) * (1.0 + zeta) * std::pow(2.0, 2.0 * kk - 1.0) * std::pow(1.0 - zeta, 2.0 * kk + 1.0));
}

std::size_t recommended_hmax(double zeta) {
  check_zeta(zeta);
  const double n2 = eigvec_norm2(zeta);
  std::size_t h = 10;
  while (tail_of(zeta, h, n2) >= kTransferTailTolerance || tail_moment(zeta, h, n2) >= kTransferTailTolerance) h += 2;
  return h;
}

TransferSpec transfer_spec(double zeta, std::size_t hmax) {
  check_zeta(zeta);
  if (hmax % 2 != 0 || hmax < 10) throw InvalidArgument("hmax must be even and at least 10");
  TransferSpec s;
  s.zeta = zeta;
  s.hmax = hmax;
  s.w_norm2 = eigvec_norm2(zeta);
  s.tail_mass = tail_of(zeta, hmax, s.w_norm2);
  if (s.tail_mass >= kTransferTailTolerance) {
    throw InvalidArgument("hmax too small: truncated weight " + std::to_string(s.tail_mass) + " exceeds 1e-12");
  }
  const std::size_t d = s.dim();
  s.u.assign(d, 0.0);
  s.v.assign(d, 0.0);
  s.w.assign(d, 0.0);
  s.u[0] = 1.0;
  for (std::size_t i = 1; i < d; ++i) s.v[i] = std::pow(zeta, static_cast<double>(i));
  s.w[0] = zeta / (1.0 + zeta);
  for (std::size_t i = 1; i < d; ++i) s.w[i] = s.v[i];
  s.lambda1 = zeta / (2.0 * (1.0 - zeta));
  s.lambda2 = -zeta / (2.0 * (1.0 + zeta));
  return s;
}

TransferSpec transfer_spec(double zeta) { return transfer_spec(zeta, recommended_hmax(zeta)); }

std::vector<double> numeric_eigenvalues(const TransferSpec& spec) {
  const auto d = static_cast<Eigen::Index>(spec.dim());
  Eigen::MatrixXd t(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) t(i, j) = spec.t(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t, Eigen::EigenvaluesOnly);
  std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + d);
  std::sort(ev.begin(), ev.end(), [](double a, double b) { return std::abs(a) > std::abs(b); });
  return ev;
}

std::vector<double> site_marginal(const TransferSpec& spec) {
  std::vector<double> p(spec.dim());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = spec.w[i] * spec.w[i] / spec.w_norm2;
  return p;
}

double mean_height(double zeta) {
  if (!(zeta >= 0.0 && zeta < 1.0)) throw InvalidArgument("fugacity must lie in [0,1)");
  return 1.0 / (1.0 - zeta);
}

double fugacity_of_density(double rho_e) {
  if (!(rho_e >= 1.0) || !std::isfinite(rho_e)) throw InvalidArgument("even-sector density must be at least 1");
  return (rho_e - 1.0) / rho_e;
}

double cylinder_prob(const TransferSpec& spec, std::span<const Height> word) {
  if (word.empty()) throw InvalidArgument("cylinder word is empty");
  std::vector<std::size_t> idx(word.size());
  for (std::size_t j = 0; j < word.size(); ++j) {
    if (word[j] % 2 != 0) throw InvalidArgument("even-sector heights must be even");
    if (word[j] > spec.hmax) throw InvalidArgument("height beyond the truncation level");
    idx[j] = word[j] / 2;
  }
  double p = spec.w[idx.front()] * spec.w[idx.back()];
  for (std::size_t j = 0; j + 1 < idx.size(); ++j) p *= spec.t(idx[j], idx[j + 1]);
  return p / (std::pow(spec.lambda1, static_cast<double>(word.size() - 1)) * spec.w_norm2);
}

}  // namespace fsep

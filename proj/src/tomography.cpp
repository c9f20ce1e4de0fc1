#include "povmcluster/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace povmcluster {

namespace {

Matrix projector(const Ket& k) {
  return k.amplitudes() * k.amplitudes().adjoint();
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  return splitmix64(base ^ splitmix64(index + 1));
}

// Orthonormal Hermitian basis under Tr(A B): diagonal units, then
// symmetric and antisymmetric off-diagonal pairs.
std::vector<Matrix> hermitian_basis(int d) {
  std::vector<Matrix> basis;
  basis.reserve(d * d);
  for (int k = 0; k < d; ++k) {
    Matrix m = Matrix::Zero(d, d);
    m(k, k) = 1;
    basis.push_back(std::move(m));
  }
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < d; ++j) {
    for (int k = j + 1; k < d; ++k) {
      Matrix s = Matrix::Zero(d, d);
      s(j, k) = inv_sqrt2;
      s(k, j) = inv_sqrt2;
      basis.push_back(std::move(s));
      Matrix a = Matrix::Zero(d, d);
      a(j, k) = Complex(0, -inv_sqrt2);
      a(k, j) = Complex(0, inv_sqrt2);
      basis.push_back(std::move(a));
    }
  }
  return basis;
}

int dimension_of(const std::vector<CountRecord>& records) {
  if (records.empty()) throw std::invalid_argument("no count records");
  const int d = static_cast<int>(records.front().setting.projector.rows());
  for (const auto& r : records) {
    if (r.setting.projector.rows() != d || r.setting.projector.cols() != d) {
      throw std::invalid_argument("count records mix projector dimensions");
    }
  }
  return d;
}

// Lower-triangular T with T'T = rho (exchange-reversed Cholesky).
Matrix lower_factor(const Matrix& rho) {
  const int d = static_cast<int>(rho.rows());
  Matrix rev = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) rev(i, d - 1 - i) = 1;
  Matrix flipped = rev * rho * rev;
  double ridge = 0.0;
  for (int attempt = 0; attempt < 6; ++attempt) {
    Eigen::LLT<Matrix> llt(flipped + ridge * Matrix::Identity(d, d));
    if (llt.info() == Eigen::Success) {
      const Matrix l = llt.matrixL();
      return rev * l.adjoint() * rev;
    }
    ridge = ridge == 0.0 ? 1e-12 : ridge * 100.0;
  }
  throw std::runtime_error("lower_factor: matrix not positive semidefinite");
}

Matrix t_from_params(const Eigen::VectorXd& t, int d) {
  Matrix m = Matrix::Zero(d, d);
  int idx = 0;
  for (int k = 0; k < d; ++k) m(k, k) = t(idx++);
  for (int row = 1; row < d; ++row) {
    for (int col = 0; col < row; ++col) {
      m(row, col) = Complex(t(idx), t(idx + 1));
      idx += 2;
    }
  }
  return m;
}

Eigen::VectorXd params_from_t(const Matrix& t) {
  const int d = static_cast<int>(t.rows());
  Eigen::VectorXd out(d * d);
  int idx = 0;
  for (int k = 0; k < d; ++k) out(idx++) = t(k, k).real();
  for (int row = 1; row < d; ++row) {
    for (int col = 0; col < row; ++col) {
      out(idx++) = t(row, col).real();
      out(idx++) = t(row, col).imag();
    }
  }
  return out;
}

struct SimplexOutcome {
  Eigen::VectorXd best;
  double f_best = 0.0;
  int evals = 0;
  bool converged = false;
};

// Standard Nelder-Mead downhill simplex (reflection 1, expansion 2,
// contraction 0.5, shrink 0.5).
SimplexOutcome nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                           const Eigen::VectorXd& x0, double param_tol,
                           double f_tol, int max_evals) {
  const int n = static_cast<int>(x0.size());
  std::vector<Eigen::VectorXd> xs;
  std::vector<double> fs;
  xs.push_back(x0);
  for (int k = 0; k < n; ++k) {
    Eigen::VectorXd x = x0;
    x(k) += 0.05 * std::abs(x0(k)) + 0.01;
    xs.push_back(std::move(x));
  }
  int evals = 0;
  fs.resize(n + 1);
  for (int i = 0; i <= n; ++i) {
    fs[i] = f(xs[i]);
    ++evals;
  }

  std::vector<int> order(n + 1);
  auto sort_simplex = [&] {
    for (int i = 0; i <= n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return fs[a] < fs[b]; });
  };

  bool converged = false;
  while (evals < max_evals) {
    sort_simplex();
    const int best = order[0];
    const int worst = order[n];
    const int second_worst = order[n - 1];

    double diameter = 0.0;
    for (int i = 0; i <= n; ++i) {
      diameter = std::max(
          diameter, (xs[i] - xs[best]).cwiseAbs().maxCoeff());
    }
    if (diameter < param_tol && fs[worst] - fs[best] < f_tol) {
      converged = true;
      break;
    }

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (int i = 0; i <= n; ++i) {
      if (i != worst) centroid += xs[i];
    }
    centroid /= n;

    const Eigen::VectorXd reflected = centroid + (centroid - xs[worst]);
    const double f_reflected = f(reflected);
    ++evals;
    if (f_reflected < fs[best]) {
      const Eigen::VectorXd expanded = centroid + 2.0 * (centroid - xs[worst]);
      const double f_expanded = f(expanded);
      ++evals;
      if (f_expanded < f_reflected) {
        xs[worst] = expanded;
        fs[worst] = f_expanded;
      } else {
        xs[worst] = reflected;
        fs[worst] = f_reflected;
      }
      continue;
    }
    if (f_reflected < fs[second_worst]) {
      xs[worst] = reflected;
      fs[worst] = f_reflected;
      continue;
    }
    const bool outside = f_reflected < fs[worst];
    const Eigen::VectorXd contracted =
        outside ? (centroid + 0.5 * (reflected - centroid)).eval()
                : (centroid - 0.5 * (centroid - xs[worst])).eval();
    const double f_contracted = f(contracted);
    ++evals;
    if (f_contracted < std::min(f_reflected, fs[worst])) {
      xs[worst] = contracted;
      fs[worst] = f_contracted;
      continue;
    }
    // Shrink toward the best vertex.
    for (int i = 0; i <= n; ++i) {
      if (i == best) continue;
      xs[i] = xs[best] + 0.5 * (xs[i] - xs[best]);
      fs[i] = f(xs[i]);
      ++evals;
      if (evals >= max_evals) break;
    }
  }

  sort_simplex();
  SimplexOutcome out;
  out.best = xs[order[0]];
  out.f_best = fs[order[0]];
  out.evals = evals;
  out.converged = converged;
  return out;
}

}  // namespace

std::vector<AnalyzerSetting> pauli_analyzers_1q() {
  return {
      {projector(states::zero()), "H"},
      {projector(states::one()), "V"},
      {projector(states::plus()), "D"},
      {projector(states::minus()), "A"},
      {projector(states::right_circular()), "R"},
      {projector(states::left_circular()), "L"},
  };
}

std::vector<AnalyzerSetting> pauli_analyzers_2q() {
  const auto single = pauli_analyzers_1q();
  std::vector<AnalyzerSetting> out;
  out.reserve(36);
  for (const auto& a : single) {
    for (const auto& b : single) {
      out.push_back({tensor(a.projector, b.projector), a.label + b.label});
    }
  }
  return out;
}

std::vector<CountRecord> simulate_counts(const DensityMatrix& rho,
                                         const std::vector<AnalyzerSetting>& settings,
                                         double mean_total_per_setting,
                                         std::uint64_t seed, double duration_s) {
  if (mean_total_per_setting <= 0) {
    throw std::invalid_argument("simulate_counts: mean must be positive");
  }
  if (duration_s <= 0) {
    throw std::invalid_argument("simulate_counts: duration must be positive");
  }
  std::vector<CountRecord> out;
  out.reserve(settings.size());
  for (std::size_t i = 0; i < settings.size(); ++i) {
    const double p =
        std::max(0.0, (settings[i].projector * rho.matrix()).trace().real());
    const double mean = mean_total_per_setting * p;
    double count = 0.0;
    if (mean > 1e-12) {
      std::mt19937_64 engine(derive_seed(seed, i));
      std::poisson_distribution<long long> poisson(mean);
      count = static_cast<double>(poisson(engine));
    }
    out.push_back({settings[i], std::nullopt, count, duration_s});
  }
  return out;
}

std::vector<CountRecord> exact_counts(const DensityMatrix& rho,
                                      const std::vector<AnalyzerSetting>& settings,
                                      double mean_total_per_setting,
                                      double duration_s) {
  std::vector<CountRecord> out;
  out.reserve(settings.size());
  for (const auto& s : settings) {
    const double p = std::max(0.0, (s.projector * rho.matrix()).trace().real());
    out.push_back({s, std::nullopt, mean_total_per_setting * p, duration_s});
  }
  return out;
}

Matrix linear_inversion(const std::vector<CountRecord>& records) {
  const int d = dimension_of(records);
  const int m = static_cast<int>(records.size());
  const auto basis = hermitian_basis(d);
  const int nb = static_cast<int>(basis.size());

  double total_counts = 0.0;
  double total_proj_trace = 0.0;
  for (const auto& r : records) {
    total_counts += r.count;
    total_proj_trace += r.setting.projector.trace().real();
  }
  if (total_counts <= 0) {
    throw std::invalid_argument("linear_inversion: no counts");
  }
  const double flux = total_counts * d / total_proj_trace;

  Eigen::MatrixXd a(m, nb);
  Eigen::VectorXd b(m);
  for (int i = 0; i < m; ++i) {
    for (int k = 0; k < nb; ++k) {
      a(i, k) = (records[i].setting.projector * basis[k]).trace().real();
    }
    b(i) = records[i].count / flux;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  qr.setThreshold(1e-10);
  if (qr.rank() < nb) {
    throw std::invalid_argument(
        "linear_inversion: setting set is not informationally complete");
  }
  const Eigen::VectorXd x = qr.solve(b);
  Matrix rho = Matrix::Zero(d, d);
  for (int k = 0; k < nb; ++k) rho += x(k) * basis[k];
  rho = ((rho + rho.adjoint()) / 2.0).eval();
  const double tr = rho.trace().real();
  if (std::abs(tr) < 1e-12) {
    throw std::runtime_error("linear_inversion: vanishing trace");
  }
  return rho / tr;
}

ReconstructionResult mle_reconstruct(const std::vector<CountRecord>& records,
                                     const MleOptions& options) {
  const int d = dimension_of(records);
  double total_counts = 0.0;
  for (const auto& r : records) total_counts += r.count;
  if (total_counts <= 0) {
    throw std::invalid_argument("mle_reconstruct: total counts must be positive");
  }

  // Warm start: linear inversion with eigenvalues clamped to zero plus a
  // tiny ridge so the Cholesky-style factor exists.
  Matrix warm = linear_inversion(records);
  {
    Eigen::SelfAdjointEigenSolver<Matrix> es(warm);
    Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
    warm = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
    warm += 1e-9 * Matrix::Identity(d, d);
    warm /= warm.trace().real();
  }
  const Eigen::VectorXd x0 = params_from_t(lower_factor(warm));

  std::vector<Matrix> projs;
  std::vector<double> counts;
  projs.reserve(records.size());
  for (const auto& r : records) {
    projs.push_back(r.setting.projector);
    counts.push_back(r.count);
  }

  // The objective is the Poisson deviance, the negative log-likelihood
  // shifted by its data-saturated constant. It is O(1) near the optimum,
  // so the 1e-9 convergence tolerances stay resolvable even at large
  // counts, where the raw log-likelihood would drown them in rounding.
  // Extended precision keeps the n*log terms from injecting ~n*ulp noise.
  const auto deviance = [&](const Eigen::VectorXd& t) {
    const Matrix tm = t_from_params(t, d);
    Matrix rho = tm.adjoint() * tm;
    const double tr = rho.trace().real();
    if (tr < 1e-300) return 1e300;
    rho /= tr;
    double sum_p = 0.0;
    std::vector<double> ps(projs.size());
    for (std::size_t i = 0; i < projs.size(); ++i) {
      ps[i] = std::max(0.0, (projs[i] * rho).trace().real());
      sum_p += ps[i];
    }
    // Profile out the flux: N' = sum(n) / sum(p) maximizes the likelihood
    // for any fixed rho.
    const long double flux = total_counts / std::max(sum_p, 1e-12);
    long double dev = 0.0L;
    for (std::size_t i = 0; i < projs.size(); ++i) {
      const long double mu =
          std::max(flux * ps[i], static_cast<long double>(1e-12));
      const long double n = counts[i];
      dev += mu - n;
      if (n > 0) dev += n * std::log(n / mu);
    }
    return static_cast<double>(dev);
  };

  Eigen::VectorXd best = x0;
  double f_best = deviance(x0);
  int evals = 1;
  bool converged = false;
  for (int round = 0; round <= options.restarts; ++round) {
    const int budget = options.max_evals - evals;
    if (budget <= 0) break;
    SimplexOutcome run =
        nelder_mead(deviance, best, options.param_tol, options.ll_tol, budget);
    evals += run.evals;
    const double improvement = f_best - run.f_best;
    const double moved = (run.best - best).cwiseAbs().maxCoeff();
    if (run.f_best < f_best) {
      best = run.best;
      f_best = run.f_best;
    }
    converged = run.converged;
    if (converged && improvement < options.ll_tol && moved < options.param_tol) {
      break;
    }
  }

  const Matrix tm = t_from_params(best, d);
  const DensityMatrix rho = DensityMatrix::renormalized(tm.adjoint() * tm);
  // Report the actual Poisson log-likelihood of the returned state.
  double sum_p = 0.0;
  std::vector<double> ps(projs.size());
  for (std::size_t i = 0; i < projs.size(); ++i) {
    ps[i] = std::max(0.0, (projs[i] * rho.matrix()).trace().real());
    sum_p += ps[i];
  }
  const double flux = total_counts / std::max(sum_p, 1e-12);
  double ll = 0.0;
  for (std::size_t i = 0; i < projs.size(); ++i) {
    const double mu = std::max(flux * ps[i], 1e-12);
    ll += counts[i] > 0 ? counts[i] * std::log(mu) - mu : -mu;
  }
  return ReconstructionResult{rho, ll, evals, converged};
}

double fidelity(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("fidelity: dimension mismatch");
  }
  const Matrix s = psd_sqrt(a.matrix());
  const Matrix m = s * b.matrix() * s;
  Eigen::SelfAdjointEigenSolver<Matrix> es((m + m.adjoint()) / 2.0);
  // Eigenvalues at noise level would contribute sqrt(eps) ~ 1e-8 each.
  const double floor = 1e-13 * std::max(0.0, es.eigenvalues().maxCoeff());
  double sum = 0.0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    const double ev = es.eigenvalues()(i);
    if (ev > floor) sum += std::sqrt(ev);
  }
  return std::clamp(sum * sum, 0.0, 1.0);
}

double fidelity(const DensityMatrix& rho, const Ket& psi) {
  if (rho.dim() != psi.dim()) {
    throw std::invalid_argument("fidelity: dimension mismatch");
  }
  const double f =
      (psi.amplitudes().adjoint() * rho.matrix() * psi.amplitudes())(0).real();
  return std::clamp(f, 0.0, 1.0);
}

double purity(const DensityMatrix& rho) {
  return (rho.matrix() * rho.matrix()).trace().real();
}

double tangle(const DensityMatrix& rho) {
  if (rho.dim() != 4) {
    throw std::invalid_argument("tangle: expected a two-qubit state");
  }
  const Matrix yy = tensor(gates::y(), gates::y());
  const Matrix s = psd_sqrt(rho.matrix());
  const Matrix m = s * yy * conjugate_entrywise(rho.matrix()) * yy * s;
  Eigen::SelfAdjointEigenSolver<Matrix> es((m + m.adjoint()) / 2.0);
  const double floor = 1e-13 * std::max(0.0, es.eigenvalues().maxCoeff());
  Eigen::VectorXd lambda = es.eigenvalues().unaryExpr([floor](double ev) {
    return ev > floor ? std::sqrt(ev) : 0.0;
  });
  std::sort(lambda.data(), lambda.data() + lambda.size(),
            std::greater<double>());
  const double c =
      std::max(0.0, lambda(0) - lambda(1) - lambda(2) - lambda(3));
  return c * c;
}

MetricReport metric_report(const DensityMatrix& rho, const DensityMatrix& reference) {
  MetricReport report;
  report.fidelity = fidelity(rho, reference);
  report.purity = purity(rho);
  if (rho.dim() == 4) report.tangle = tangle(rho);
  return report;
}

void write_counts_csv(std::ostream& os, const std::vector<CountRecord>& records) {
  os << "setting_label,outcome_label,count,duration_s\n";
  char buf[64];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof(buf), "%.17g", r.count);
    os << r.setting.label << ','
       << (r.outcome ? to_string(*r.outcome) : std::string()) << ',' << buf
       << ',';
    std::snprintf(buf, sizeof(buf), "%.17g", r.duration_s);
    os << buf << '\n';
  }
}

std::vector<CountRecord> read_counts_csv(
    std::istream& is, const std::vector<AnalyzerSetting>& known_settings) {
  std::vector<CountRecord> out;
  std::string line;
  bool first = true;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (first) {
      first = false;
      if (line.rfind("setting_label", 0) == 0) continue;
    }
    std::stringstream ss(line);
    std::string label, outcome, count_s, duration_s;
    std::getline(ss, label, ',');
    std::getline(ss, outcome, ',');
    std::getline(ss, count_s, ',');
    std::getline(ss, duration_s, ',');
    const auto it =
        std::find_if(known_settings.begin(), known_settings.end(),
                     [&](const AnalyzerSetting& s) { return s.label == label; });
    if (it == known_settings.end()) {
      throw std::invalid_argument("read_counts_csv: unknown setting label " + label);
    }
    CountRecord r{*it, std::nullopt, std::stod(count_s), std::stod(duration_s)};
    if (!outcome.empty()) r.outcome = outcome_from_string(outcome);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace povmcluster

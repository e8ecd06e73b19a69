// Copyright 2026 The stftpr Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "stftpr/intensity.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace stftpr {

namespace {

constexpr double kUnitCircleTol = 1e-9;
constexpr double kDistinctPointTol = 1e-9;
constexpr double kMaxCondition = 1e8;
constexpr double kDegenerateCoefficient = 1e-12;

complex horner(const cvec& coeffs, complex z) {
  complex acc = 0.0;
  for (Eigen::Index k = coeffs.size() - 1; k >= 0; --k) acc = acc * z + coeffs[k];
  return acc;
}

complex horner_derivative(const cvec& coeffs, complex z) {
  complex acc = 0.0;
  for (Eigen::Index k = coeffs.size() - 1; k >= 1; --k) acc = acc * z + static_cast<double>(k) * coeffs[k];
  return acc;
}

int count_distinct_points(std::span<const IntensitySample> samples) {
  std::vector<complex> kept;
  for (const auto& s : samples) {
    const bool dup = std::any_of(kept.begin(), kept.end(),
                                 [&](complex p) { return std::abs(p - s.point) <= kDistinctPointTol; });
    if (!dup) kept.push_back(s.point);
  }
  return static_cast<int>(kept.size());
}

double max_sample(std::span<const IntensitySample> samples) {
  double m = 0.0;
  for (const auto& s : samples) m = std::max(m, std::abs(s.value));
  return m;
}

double max_intensity_residual(const cvec& y, std::span<const IntensitySample> samples) {
  double worst = 0.0;
  for (const auto& s : samples) worst = std::max(worst, std::abs(std::norm(horner(y, s.point)) - s.value));
  return worst;
}

// Levenberg-Marquardt on the unknown entries of y; `y` carries the known
// entries and the starting guess. Returns the final max residual.
double refine_unknown_entries(cvec& y, std::span<const int> unknown, std::span<const IntensitySample> samples) {
  const int p = 2 * static_cast<int>(unknown.size());
  const int n = static_cast<int>(samples.size());
  auto residuals = [&](const cvec& v) {
    rvec r(n);
    for (int i = 0; i < n; ++i) r[i] = std::norm(horner(v, samples[i].point)) - samples[i].value;
    return r;
  };
  rvec r = residuals(y);
  double cost = r.squaredNorm();
  double lambda = 1e-3;
  for (int iter = 0; iter < 400 && cost > 0.0; ++iter) {
    rmat jac(n, p);
    for (int i = 0; i < n; ++i) {
      const complex omega = samples[i].point;
      const complex yhat = horner(y, omega);
      for (std::size_t s = 0; s < unknown.size(); ++s) {
        const complex g = std::conj(yhat) * std::pow(omega, unknown[s]);
        jac(i, 2 * static_cast<int>(s)) = 2.0 * g.real();
        jac(i, 2 * static_cast<int>(s) + 1) = -2.0 * g.imag();
      }
    }
    const rmat jtj = jac.transpose() * jac;
    const rvec grad = jac.transpose() * r;
    bool improved = false;
    for (int attempt = 0; attempt < 12; ++attempt) {
      rmat damped = jtj;
      damped.diagonal().array() += lambda * (jtj.diagonal().array() + 1e-12);
      const rvec step = damped.ldlt().solve(-grad);
      cvec trial = y;
      for (std::size_t s = 0; s < unknown.size(); ++s) {
        trial[unknown[s]] += complex(step[2 * static_cast<int>(s)], step[2 * static_cast<int>(s) + 1]);
      }
      const rvec tr = residuals(trial);
      const double tc = tr.squaredNorm();
      if (std::isfinite(tc) && tc < cost) {
        const double gain = cost - tc;
        y = trial;
        r = tr;
        cost = tc;
        lambda = std::max(lambda / 3.0, 1e-12);
        improved = true;
        if (gain <= 1e-30 * std::max(1.0, cost)) iter = 1 << 20;
        break;
      }
      lambda *= 4.0;
    }
    if (!improved) break;
  }
  return r.size() ? r.cwiseAbs().maxCoeff() : 0.0;
}

}  // namespace

IntensityProfile::IntensityProfile(cvec nonnegative) : coeffs_(std::move(nonnegative)) {
  if (coeffs_.size() == 0) throw InvalidArgument("intensity profile needs at least a_0");
  coeffs_[0] = complex(coeffs_[0].real(), 0.0);
}

complex IntensityProfile::coefficient(int k) const {
  const int W = window_length();
  if (k <= -W || k >= W) return 0.0;
  return k >= 0 ? coeffs_[k] : std::conj(coeffs_[-k]);
}

double IntensityProfile::evaluate(complex omega) const {
  double value = coeffs_[0].real();
  complex power = 1.0;
  for (Eigen::Index k = 1; k < coeffs_.size(); ++k) {
    power *= omega;
    value += 2.0 * (coeffs_[k] * power).real();
  }
  return value;
}

IntensityProfile profile_of(const cvec& y) {
  const Eigen::Index W = y.size();
  if (W == 0) throw InvalidArgument("profile_of needs a nonempty vector");
  cvec a = cvec::Zero(W);
  for (Eigen::Index k = 0; k < W; ++k) {
    for (Eigen::Index n = 0; n + k < W; ++n) a[k] += y[n + k] * std::conj(y[n]);
  }
  return IntensityProfile(std::move(a));
}

IntensityProfile profile_from_samples(std::span<const IntensitySample> samples, int W) {
  if (W < 1) throw InvalidArgument("window length must be positive");
  for (const auto& s : samples) {
    if (std::abs(std::abs(s.point) - 1.0) > kUnitCircleTol) {
      throw InvalidArgument("intensity sample point is not on the unit circle");
    }
  }
  const int unknowns = 2 * W - 1;
  if (count_distinct_points(samples) < unknowns) {
    throw InvalidArgument("need " + std::to_string(unknowns) + " distinct sample points for W=" +
                          std::to_string(W));
  }
  // Real unknowns: a_0, then (Re a_k, Im a_k) for k = 1..W-1.
  rmat m(samples.size(), unknowns);
  rvec rhs(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double phi = std::arg(samples[i].point);
    m(i, 0) = 1.0;
    for (int k = 1; k < W; ++k) {
      m(i, 2 * k - 1) = 2.0 * std::cos(k * phi);
      m(i, 2 * k) = -2.0 * std::sin(k * phi);
    }
    rhs[i] = samples[i].value;
  }
  Eigen::JacobiSVD<rmat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const rvec& sv = svd.singularValues();
  if (sv[sv.size() - 1] <= 0.0 || sv[0] / sv[sv.size() - 1] > kMaxCondition) {
    throw IllConditioned("intensity interpolation system is ill-conditioned");
  }
  const rvec sol = svd.solve(rhs);
  cvec a(W);
  a[0] = sol[0];
  for (int k = 1; k < W; ++k) a[k] = complex(sol[2 * k - 1], sol[2 * k]);
  return IntensityProfile(std::move(a));
}

cvec RootProfile::reconstruct() const { return poly_from_roots(leading, roots); }

RootProfile roots_of(const cvec& y) {
  const Eigen::Index W = y.size();
  if (W == 0) throw InvalidArgument("roots_of needs a nonempty vector");
  const double scale = y.norm();
  if (scale == 0.0 || std::abs(y[W - 1]) <= kDegenerateCoefficient * scale) {
    throw InvalidArgument("leading coefficient is (numerically) zero");
  }
  RootProfile rp;
  rp.leading = y[W - 1];
  rp.trailing = y[0];
  const Eigen::Index n = W - 1;
  if (n == 0) return rp;

  cmat companion = cmat::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) companion(0, j) = -y[n - 1 - j] / y[n];
  for (Eigen::Index i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  Eigen::ComplexEigenSolver<cmat> solver(companion, false);
  if (solver.info() != Eigen::Success) throw IllConditioned("companion eigenvalue solver failed");

  rp.roots.reserve(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    complex z = solver.eigenvalues()[i];
    double pz = std::abs(horner(y, z));
    for (int it = 0; it < 4; ++it) {
      const complex d = horner_derivative(y, z);
      if (d == complex(0.0)) break;
      const complex cand = z - horner(y, z) / d;
      const double pc = std::abs(horner(y, cand));
      if (!(pc < pz)) break;
      z = cand;
      pz = pc;
    }
    rp.roots.push_back(z);
  }
  return rp;
}

cvec poly_from_roots(complex leading, std::span<const complex> roots) {
  cvec c = cvec::Zero(static_cast<Eigen::Index>(roots.size()) + 1);
  c[0] = 1.0;
  Eigen::Index deg = 0;
  for (const complex beta : roots) {
    // c(omega) *= (omega - beta)
    for (Eigen::Index k = deg + 1; k >= 1; --k) c[k] = c[k - 1] - beta * c[k];
    c[0] = -beta * c[0];
    ++deg;
  }
  return leading * c;
}

complex flip(complex root) {
  if (root == complex(0.0)) throw InvalidArgument("cannot flip a zero root");
  return 1.0 / std::conj(root);
}

FlipCandidateSet enumerate_flips(const cvec& y, int max_window) {
  const int W = static_cast<int>(y.size());
  if (W < 1) throw InvalidArgument("enumerate_flips needs a nonempty vector");
  if (W > max_window) {
    throw InvalidArgument("window length " + std::to_string(W) + " exceeds the flip enumeration cap " +
                          std::to_string(max_window));
  }
  FlipCandidateSet set;
  if (W == 1) {
    set.candidates.push_back(y);
    return set;
  }
  if (std::abs(y[0]) <= kDegenerateCoefficient * y.norm()) {
    throw InvalidArgument("trailing coefficient is (numerically) zero; roots include 0");
  }
  const RootProfile rp = roots_of(y);
  const int n = W - 1;
  const complex lead_phase = rp.leading / std::abs(rp.leading);
  set.candidates.reserve(std::size_t{1} << n);
  std::vector<complex> flipped(n);
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    double scale = std::abs(rp.leading);
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) {
        flipped[i] = flip(rp.roots[i]);
        scale *= std::abs(rp.roots[i]);
      } else {
        flipped[i] = rp.roots[i];
      }
    }
    set.candidates.push_back(mask == 0 ? y : poly_from_roots(lead_phase * scale, flipped));
  }
  return set;
}

std::vector<cvec> distinct_up_to_phase(const std::vector<cvec>& vectors, double rel_tol) {
  std::vector<cvec> kept;
  for (const auto& v : vectors) {
    const bool dup = std::any_of(kept.begin(), kept.end(),
                                 [&](const cvec& k) { return relative_phase_distance(k, v) <= rel_tol; });
    if (!dup) kept.push_back(v);
  }
  return kept;
}

cvec factor_profile(const IntensityProfile& profile) {
  const int W = profile.window_length();
  const double a0 = profile.coefficient(0).real();
  if (!(a0 > 0.0)) throw NonGenericInstance("intensity profile has nonpositive energy");
  if (W == 1) {
    cvec y(1);
    y[0] = std::sqrt(a0);
    return y;
  }
  if (std::abs(profile.coefficient(W - 1)) <= kDegenerateCoefficient * a0) {
    throw NonGenericInstance("outer autocorrelation vanishes; end entries are zero");
  }
  cvec q(2 * W - 1);
  for (int j = 0; j < 2 * W - 1; ++j) q[j] = profile.coefficient(j - (W - 1));
  RootProfile rp = roots_of(q);
  // Roots come in pairs (beta, 1/conj(beta)); the W-1 smallest moduli pick
  // one member of every pair.
  std::sort(rp.roots.begin(), rp.roots.end(), [](complex a, complex b) { return std::abs(a) < std::abs(b); });
  rp.roots.resize(W - 1);
  cvec y = poly_from_roots(1.0, rp.roots);
  y *= std::sqrt(a0) / y.norm();
  return y;
}

int required_samples(std::span<const int> unknown) {
  if (unknown.empty()) return 0;
  std::set<int> diffs;
  for (int s : unknown)
    for (int t : unknown) diffs.insert(std::abs(s - t));
  return 2 * static_cast<int>(diffs.size()) - 1 + 2 * static_cast<int>(unknown.size());
}

cvec recover_with_known_entries(std::span<const IntensitySample> samples,
                                const std::map<int, complex>& known,
                                std::span<const int> unknown,
                                const KnownEntryOptions& options) {
  int W = 0;
  std::set<int> unknown_set;
  for (int s : unknown) {
    if (s < 0) throw InvalidArgument("negative unknown index");
    if (!unknown_set.insert(s).second) throw InvalidArgument("duplicate unknown index");
    if (known.count(s)) throw InvalidArgument("index is both known and unknown");
    W = std::max(W, s + 1);
  }
  for (const auto& [k, v] : known) {
    if (k < 0) throw InvalidArgument("negative known index");
    W = std::max(W, k + 1);
  }
  if (static_cast<int>(known.size() + unknown_set.size()) != W) {
    throw InvalidArgument("known and unknown entries must cover [0, W)");
  }
  cvec base = cvec::Zero(W);
  for (const auto& [k, v] : known) base[k] = v;
  if (unknown_set.empty()) return base;

  const std::vector<int> S(unknown_set.begin(), unknown_set.end());
  const int needed = required_samples(S);
  if (count_distinct_points(samples) < needed) {
    throw InvalidArgument("need " + std::to_string(needed) + " distinct intensity samples, got " +
                          std::to_string(count_distinct_points(samples)));
  }
  const double tol = options.residual_tol * std::max(max_sample(samples), 1e-300);

  // Lifted system: value - |K|^2 = 2 Re(conj(K) U) + |U|^2, linear in the
  // entries u_s and in b_d = sum_{s - t = d} u_s conj(u_t), d >= 0.
  std::set<int> diff_set;
  for (int s : S)
    for (int t : S) diff_set.insert(std::abs(s - t));
  const std::vector<int> D(diff_set.begin(), diff_set.end());
  const int cols = 2 * static_cast<int>(S.size()) + 2 * static_cast<int>(D.size()) - 1;
  rmat m(samples.size(), cols);
  rvec rhs(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const complex omega = samples[i].point;
    const complex k = horner(base, omega);
    rhs[i] = samples[i].value - std::norm(k);
    int c = 0;
    for (int s : S) {
      const complex g = std::conj(k) * std::pow(omega, s);
      m(i, c++) = 2.0 * g.real();
      m(i, c++) = -2.0 * g.imag();
    }
    for (int d : D) {
      if (d == 0) {
        m(i, c++) = 1.0;
      } else {
        const complex p = std::pow(omega, d);
        m(i, c++) = 2.0 * p.real();
        m(i, c++) = -2.0 * p.imag();
      }
    }
  }

  std::vector<cvec> starts;
  if (static_cast<int>(samples.size()) >= cols) {
    Eigen::JacobiSVD<rmat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const rvec& sv = svd.singularValues();
    const bool full_rank = sv[0] > 0.0 && sv[sv.size() - 1] > 1e-10 * sv[0];
    const rvec sol = svd.solve(rhs);
    cvec y = base;
    for (std::size_t s = 0; s < S.size(); ++s) y[S[s]] = complex(sol[2 * s], sol[2 * s + 1]);
    if (full_rank && max_intensity_residual(y, samples) <= tol) return y;
    starts.push_back(y);
  }

  // Multistart refinement for rank-deficient (or noisy) lifted systems.
  Rng rng(options.seed);
  double energy = 0.0;
  for (const auto& smp : samples) energy += smp.value;
  energy /= static_cast<double>(samples.size());
  const double spread = std::sqrt(std::max(energy, 1e-300) / W);
  while (static_cast<int>(starts.size()) < options.multistarts + (starts.empty() ? 0 : 1)) {
    cvec y = base;
    for (int s : S) y[s] = spread * rng.sample(Distribution::ComplexGaussian);
    starts.push_back(y);
  }
  std::vector<cvec> solutions;
  for (auto& y : starts) {
    if (refine_unknown_entries(y, S, samples) > tol) continue;
    const double sep = options.separation_tol * std::max(y.norm(), 1e-300);
    const bool dup = std::any_of(solutions.begin(), solutions.end(),
                                 [&](const cvec& v) { return (v - y).norm() <= sep; });
    if (!dup) solutions.push_back(y);
  }
  if (solutions.empty()) {
    throw NonGenericInstance("no completion reproduces the intensity samples");
  }
  if (solutions.size() > 1) {
    throw AmbiguousSolution(std::to_string(solutions.size()) +
                            " separated completions reproduce the intensity samples");
  }
  return solutions.front();
}

std::string to_string(AppendixKind kind) {
  switch (kind) {
    case AppendixKind::AFirst: return "A-first";
    case AppendixKind::ASecond: return "A-second";
    case AppendixKind::BTriple: return "B-triple";
    case AppendixKind::BAllOnes: return "B-allones";
  }
  return "unknown";
}

std::vector<cvec> appendix_test_vectors(AppendixKind kind, int W, int alpha,
                                        const std::optional<cvec>& w, Rng& rng) {
  if (W < 2 || alpha < 1 || alpha >= W) {
    throw InvalidArgument("test vectors need W >= 2 and 1 <= alpha < W");
  }
  const cvec ones = cvec::Ones(W);
  auto window = [&]() {
    if (w) {
      if (w->size() != W) throw InvalidArgument("window length does not match W");
      for (Eigen::Index i = 0; i < W; ++i)
        if ((*w)[i] == complex(0.0)) throw InvalidArgument("window entries must be nonzero");
      return *w;
    }
    cvec v(W);
    for (int i = 0; i < W; ++i) v[i] = rng.annulus(0.5, 2.0);
    return v;
  };
  switch (kind) {
    case AppendixKind::AFirst: {
      const cvec win = window();
      cvec za(W);
      for (int j = 0; j < alpha; ++j) za[j] = rng.annulus(0.5, 2.0);
      for (int j = 0; j + alpha < W; ++j) za[j + alpha] = win[j + alpha] / win[j];
      return {ones, za};
    }
    case AppendixKind::ASecond: {
      const cvec win = window();
      cvec z0(W);
      for (int j = 0; j + alpha < W; ++j) z0[j] = win[j] / win[j + alpha];
      for (int j = W - alpha; j < W; ++j) z0[j] = rng.annulus(0.5, 2.0);
      return {z0, ones};
    }
    case AppendixKind::BTriple: {
      if (!(alpha < W - 1 - alpha)) {
        throw InvalidArgument("B-triple needs 0, alpha, W-1-alpha, W-1 distinct (W >= 2 alpha + 2)");
      }
      cvec z0 = cvec::Zero(W), za = cvec::Zero(W), zm = cvec::Zero(W);
      for (int i : {0, alpha, W - 1 - alpha, W - 1}) {
        z0[i] = 1.0;
        za[i] = 4.0;
      }
      zm[0] = 0.25;
      zm[W - 1 - alpha] = 0.25;
      zm[W - 1] = 1.0;
      return {z0, za, zm};
    }
    case AppendixKind::BAllOnes: {
      cvec za = ones;
      za[0] = static_cast<double>(W);
      return {ones, za, ones};
    }
  }
  throw InvalidArgument("unknown test-vector construction");
}

}  // namespace stftpr

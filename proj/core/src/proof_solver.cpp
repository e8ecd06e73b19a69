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

#include "stftpr/proof_solver.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <Eigen/SVD>

#include "stftpr/ambiguity.hpp"
#include "stftpr/bounds.hpp"

namespace stftpr {

namespace {

constexpr double kFlipDedupTol = 1e-8;

using MagnitudeMap = std::map<MeasurementIndex, double>;

MagnitudeMap index_measurements(const MeasurementSet& set) {
  MagnitudeMap map;
  for (std::size_t k = 0; k < set.size(); ++k) map.emplace(set.indices[k], set.magnitudes[k]);
  return map;
}

bool has_block(const MagnitudeMap& mags, const MeasurementBlock& b) {
  for (int m = b.m_begin; m < b.m_begin + b.count; ++m) {
    if (!mags.count({m, b.r})) return false;
  }
  return true;
}

std::vector<IntensitySample> block_samples(const MagnitudeMap& mags, const MeasurementBlock& b, int N) {
  std::vector<IntensitySample> samples;
  samples.reserve(b.count);
  for (int m = b.m_begin; m < b.m_begin + b.count; ++m) {
    const auto it = mags.find({m, b.r});
    if (it == mags.end()) {
      throw InvalidArgument("missing required measurement (m=" + std::to_string(m) + ", r=" +
                            std::to_string(b.r) + ")");
    }
    samples.push_back({frequency_point(m, N), it->second * it->second});
  }
  return samples;
}

std::vector<cvec> flip_classes(const std::vector<IntensitySample>& samples, int W) {
  const cvec y = factor_profile(profile_from_samples(samples, W));
  return distinct_up_to_phase(enumerate_flips(y, W).candidates, kFlipDedupTol);
}

double consistency_residual(const ProblemParams& params, const SignalPair& pair, const MagnitudeMap& mags) {
  const StftTable table = forward(params, pair);
  double worst = 0.0;
  double scale = 0.0;
  for (const auto& [idx, value] : mags) {
    worst = std::max(worst, std::abs(std::abs(table(idx.m, idx.r)) - value));
    scale = std::max(scale, value);
  }
  return scale > 0.0 ? worst / scale : worst;
}

MagnitudeMap restrict_to(const MagnitudeMap& mags, const std::vector<MeasurementBlock>& blocks) {
  MagnitudeMap out;
  for (const auto& idx : indices_of(blocks)) out.emplace(idx, mags.at(idx));
  return out;
}

cvec concat(std::initializer_list<const cvec*> parts) {
  Eigen::Index n = 0;
  for (const cvec* p : parts) n += p->size();
  cvec out(n);
  Eigen::Index at = 0;
  for (const cvec* p : parts) {
    out.segment(at, p->size()) = *p;
    at += p->size();
  }
  return out;
}

complex unit(complex z) { return z / std::abs(z); }

// Levenberg-Marquardt on r_i = |Y_i|^2 - v_i^2 over the measured entries,
// refining x and, when refine_window is set, w as well.
void polish_pair(const ProblemParams& params, SignalPair& pair, const MagnitudeMap& mags, bool refine_window,
                 int iterations) {
  if (iterations <= 0 || mags.empty()) return;
  const int N = params.N, W = params.W;
  struct Term {
    int n;
    int k;
    complex f;
  };
  std::vector<std::vector<Term>> terms;
  std::vector<double> target;
  for (const auto& [idx, v] : mags) {
    std::vector<Term> row;
    const long long shift = 1LL * idx.r * params.L;
    for (int k = 0; k < W; ++k) {
      const int n = wrap(shift - k, N);
      row.push_back({n, k, std::polar(1.0, -kTwoPi * static_cast<double>(wrap(1LL * n * idx.m, N)) / N)});
    }
    terms.push_back(std::move(row));
    target.push_back(v * v);
  }
  const int rows = static_cast<int>(terms.size());
  const int cols = 2 * N + (refine_window ? 2 * W : 0);
  auto residuals = [&](const SignalPair& p) {
    rvec r(rows);
    for (int i = 0; i < rows; ++i) {
      complex y = 0.0;
      for (const auto& t : terms[i]) y += p.x[t.n] * p.w[t.k] * t.f;
      r[i] = std::norm(y) - target[i];
    }
    return r;
  };
  rvec r = residuals(pair);
  double cost = r.squaredNorm();
  double lambda = 1e-6;
  for (int it = 0; it < iterations && cost > 0.0; ++it) {
    rmat jac = rmat::Zero(rows, cols);
    for (int i = 0; i < rows; ++i) {
      complex y = 0.0;
      for (const auto& t : terms[i]) y += pair.x[t.n] * pair.w[t.k] * t.f;
      for (const auto& t : terms[i]) {
        const complex gx = std::conj(y) * pair.w[t.k] * t.f;
        jac(i, t.n) += 2.0 * gx.real();
        jac(i, N + t.n) += -2.0 * gx.imag();
        if (refine_window) {
          const complex gw = std::conj(y) * pair.x[t.n] * t.f;
          jac(i, 2 * N + t.k) += 2.0 * gw.real();
          jac(i, 2 * N + W + t.k) += -2.0 * gw.imag();
        }
      }
    }
    const rmat jtj = jac.transpose() * jac;
    const rvec grad = jac.transpose() * r;
    bool improved = false;
    for (int attempt = 0; attempt < 10 && !improved; ++attempt) {
      rmat damped = jtj;
      damped.diagonal().array() += lambda * (jtj.diagonal().array() + 1e-300);
      const rvec step = damped.ldlt().solve(-grad);
      SignalPair trial = pair;
      for (int n = 0; n < N; ++n) trial.x[n] += complex(step[n], step[N + n]);
      if (refine_window) {
        for (int k = 0; k < W; ++k) trial.w[k] += complex(step[2 * N + k], step[2 * N + W + k]);
      }
      const rvec tr = residuals(trial);
      const double tc = tr.squaredNorm();
      if (std::isfinite(tc) && tc < cost) {
        pair = std::move(trial);
        r = tr;
        improved = cost - tc > 1e-12 * cost;
        cost = tc;
        lambda = std::max(lambda / 10.0, 1e-15);
        if (!improved) return;
      } else {
        lambda *= 10.0;
      }
    }
    if (!improved) return;
  }
}

void check_common(const ProblemParams& params, int cap) {
  const int W = params.W;
  const int a = params.alpha;
  if (W < 2) throw InvalidArgument("proof solver needs W >= 2");
  if (W > cap) throw InvalidArgument("proof solver caps W at " + std::to_string(cap));
  if (params.N < 2 * W - 1) throw InvalidArgument("proof solver needs N >= 2W-1");
  if (params.N < 4 * a - 1) throw InvalidArgument("proof solver needs N >= 4 alpha - 1");
  if (a >= W) throw InvalidArgument("proof solver needs alpha < W");
}

}  // namespace

std::string to_string(RecoveryStatus status) {
  switch (status) {
    case RecoveryStatus::Unique: return "unique";
    case RecoveryStatus::Ambiguous: return "ambiguous";
    case RecoveryStatus::Failed: return "failed";
  }
  return "failed";
}

std::vector<KnownPairClass> consistent_known_pairs(const std::vector<cvec>& c0s, const std::vector<cvec>& cas,
                                                   const cvec& w, int alpha, double relation_tol,
                                                   double separation_tol) {
  const int W = static_cast<int>(w.size());
  const int rel = W - alpha;
  if (rel <= 0) throw InvalidArgument("no linear relations for alpha >= W");
  std::vector<KnownPairClass> classes;
  std::vector<cvec> keys;
  cvec a(rel), b(rel);
  for (const cvec& c0 : c0s) {
    for (const cvec& ca : cas) {
      for (int j = 0; j < rel; ++j) {
        a[j] = w[j] * ca[j + alpha];
        b[j] = w[j + alpha] * c0[j];
      }
      const complex u = optimal_phase(a, b);
      const double scale = std::max({a.norm(), b.norm(), 1e-300});
      const double residual = (u * a - b).norm() / scale;
      if (residual > relation_tol) continue;
      const cvec ya = u * ca;
      const cvec key = concat({&c0, &ya});
      auto same = std::find_if(keys.begin(), keys.end(),
                               [&](const cvec& k) { return relative_phase_distance(k, key) <= separation_tol; });
      if (same == keys.end()) {
        keys.push_back(key);
        classes.push_back({c0, ya, residual});
      } else {
        auto& cls = classes[static_cast<std::size_t>(same - keys.begin())];
        if (residual < cls.residual) cls = {c0, ya, residual};
      }
    }
  }
  return classes;
}

std::vector<BlindTripleClass> consistent_blind_triples(const std::vector<cvec>& c0s, const std::vector<cvec>& cas,
                                                       const std::vector<cvec>& cms, int alpha,
                                                       double relation_tol, double separation_tol) {
  if (c0s.empty() || cas.empty() || cms.empty()) return {};
  const int W = static_cast<int>(c0s.front().size());
  const int rel = W - alpha;
  if (rel <= 0) throw InvalidArgument("no quadratic relations for alpha >= W");

  // Sort the z_{-alpha} candidates by |c[0]| to prune with the l = 0 relation.
  std::vector<std::size_t> order(cms.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return std::abs(cms[i][0]) < std::abs(cms[j][0]); });
  std::vector<double> keys0;
  for (std::size_t i : order) keys0.push_back(std::abs(cms[i][0]));

  std::vector<BlindTripleClass> classes;
  cvec t(rel), v(rel);
  for (const cvec& c0 : c0s) {
    if (c0[0] == complex(0.0)) continue;
    for (int l = 0; l < rel; ++l) t[l] = c0[l] * c0[l + alpha];
    const complex p = std::conj(unit(c0[0]));
    const cvec z0 = p * c0;
    for (const cvec& ca : cas) {
      std::size_t lo = 0, hi = order.size();
      const double pivot = std::abs(ca[alpha]);
      if (pivot > 0.0) {
        const double target = std::abs(t[0]) / pivot;
        const double half = 2.0 * relation_tol * t.norm() / pivot + 1e-300;
        lo = static_cast<std::size_t>(std::lower_bound(keys0.begin(), keys0.end(), target - half) - keys0.begin());
        hi = static_cast<std::size_t>(std::upper_bound(keys0.begin(), keys0.end(), target + half) - keys0.begin());
      }
      const double ca_max = ca.cwiseAbs().maxCoeff();
      Eigen::Index anchor = 0;
      while (std::abs(ca[anchor]) < 1e-3 * ca_max) ++anchor;
      const complex q = std::conj(unit(ca[anchor]));
      const cvec za = q * ca;
      for (std::size_t s = lo; s < hi; ++s) {
        const cvec& cm = cms[order[s]];
        for (int l = 0; l < rel; ++l) v[l] = cm[l] * ca[l + alpha];
        const complex e = optimal_phase(v, t);
        const double residual = (e * v - t).norm() / std::max({v.norm(), t.norm(), 1e-300});
        if (residual > relation_tol) continue;
        const cvec zm = (p * p * e / q) * cm;
        const double norm = std::sqrt(z0.squaredNorm() + za.squaredNorm() + zm.squaredNorm());
        auto same = std::find_if(classes.begin(), classes.end(), [&](const BlindTripleClass& c) {
          const double d = std::sqrt((c.z0 - z0).squaredNorm() + (c.za - za).squaredNorm() +
                                     (c.zm - zm).squaredNorm());
          return d <= separation_tol * norm;
        });
        if (same == classes.end()) {
          classes.push_back({z0, za, zm, residual});
        } else if (residual < same->residual) {
          *same = {z0, za, zm, residual};
        }
      }
    }
  }
  return classes;
}

RecoveryResult recover_known_window(const MeasurementSet& measurements, const cvec& w,
                                    const ProblemParams& params, const ProofSolverOptions& options) {
  check_common(params, kKnownWindowCap);
  if (w.size() != params.W) throw InvalidArgument("window length does not match params.W");
  for (Eigen::Index n = 0; n < w.size(); ++n) {
    if (std::abs(w[n]) <= options.pivot_tol * w.norm()) {
      throw InvalidArgument("known-window recovery needs every window entry nonzero");
    }
  }
  validate(measurements, params);
  const MagnitudeMap mags = index_measurements(measurements);
  const auto plan = known_window_plan(params);
  if (!plan_is_exact(params, plan)) throw InvalidArgument("measurement plan does not fit the sections of this grid");
  std::vector<std::vector<IntensitySample>> samples;
  for (const auto& b : plan) samples.push_back(block_samples(mags, b, params.N));

  const int N = params.N, W = params.W, a = params.alpha;
  RecoveryResult res;
  res.estimate.w = w;
  res.estimate.x = cvec::Zero(N);
  res.measurements_used = static_cast<int>(indices_of(plan).size());

  try {
    const auto classes = consistent_known_pairs(flip_classes(samples[0], W), flip_classes(samples[1], W), w, a,
                                                options.relation_tol, options.separation_tol);
    res.candidate_classes = static_cast<int>(classes.size());
    res.steps_used = 1;
    if (classes.empty()) {
      res.message = "no flip pair satisfies the linear relations";
      return res;
    }
    res.relation_residual = classes.front().residual;
    for (const auto& c : classes) res.relation_residual = std::min(res.relation_residual, c.residual);
    if (classes.size() > 1) {
      res.status = RecoveryStatus::Ambiguous;
      res.message = std::to_string(classes.size()) + " relation-consistent flip classes";
      return res;
    }

    const auto& cls = classes.front();
    if (std::abs(cls.y0[0]) <= options.pivot_tol * cls.y0.norm()) {
      throw NonGenericInstance("x[0] w[0] vanishes; global phase cannot be fixed");
    }
    const complex p = std::conj(unit(cls.y0[0]));
    cvec& x = res.estimate.x;
    std::vector<char> known(N, 0);
    for (int n = 0; n < W; ++n) {
      x[wrap(-n, N)] = p * cls.y0[n] / w[n];
      known[wrap(-n, N)] = 1;
    }
    for (int n = 0; n < a; ++n) {
      x[wrap(a - n, N)] = p * cls.ya[n] / w[n];
      known[wrap(a - n, N)] = 1;
    }

    for (std::size_t b = 2; b < plan.size(); ++b) {
      const long long shift = plan[b].j * a;
      std::map<int, complex> fixed;
      std::vector<int> unknown;
      for (int s = 0; s < W; ++s) {
        const int idx = wrap(shift - s, N);
        if (known[idx]) {
          fixed[s] = x[idx] * w[s];
        } else {
          unknown.push_back(s);
        }
      }
      if (!unknown.empty()) {
        const cvec y = recover_with_known_entries(samples[b], fixed, unknown, options.entry_options);
        for (int s : unknown) {
          const int idx = wrap(shift - s, N);
          x[idx] = y[s] / w[s];
          known[idx] = 1;
        }
      }
      ++res.steps_used;
    }
    if (std::find(known.begin(), known.end(), 0) != known.end()) {
      res.message = "recursion left signal entries undetermined";
      return res;
    }
  } catch (const AmbiguousSolution& e) {
    res.status = RecoveryStatus::Ambiguous;
    res.message = e.what();
    return res;
  } catch (const InvalidArgument&) {
    throw;
  } catch (const Error& e) {
    res.status = RecoveryStatus::Failed;
    res.message = e.what();
    return res;
  }

  polish_pair(params, res.estimate, restrict_to(mags, plan), false, options.polish_iterations);
  const complex p0 = res.estimate.x[0] * w[0];
  if (p0 != complex(0.0)) res.estimate.x *= std::conj(unit(p0));
  res.consistency_residual = consistency_residual(params, res.estimate, mags);
  if (res.consistency_residual <= options.consistency_tol) {
    res.status = RecoveryStatus::Unique;
  } else {
    res.status = RecoveryStatus::Failed;
    res.message = "estimate does not reproduce the measurements";
  }
  return res;
}

RecoveryResult recover_blind(const MeasurementSet& measurements, const ProblemParams& params,
                             const ProofSolverOptions& options) {
  check_common(params, kBlindWindowCap);
  const int N = params.N, W = params.W, a = params.alpha, R = params.R;
  if (N < W + 2 * a) throw InvalidArgument("blind recovery needs N >= W + 2 alpha");
  validate(measurements, params);
  const MagnitudeMap mags = index_measurements(measurements);
  const auto plan = blind_plan(params);
  const auto seam_plan = blind_seam_plan(params);
  if (!plan_is_exact(params, plan)) throw InvalidArgument("measurement plan does not fit the sections of this grid");
  std::vector<std::vector<IntensitySample>> samples;
  for (const auto& b : plan) samples.push_back(block_samples(mags, b, N));
  const bool have_seam = options.use_seam && plan_is_exact(params, seam_plan) && std::all_of(seam_plan.begin(), seam_plan.end(), [&](const auto& b) {
                           return has_block(mags, b);
                         });

  const long long lo = -(W - 1 + a);
  const long long hi = N - W - a;
  const long long remaining = hi - a;
  const bool augment_last = remaining % a != 0;

  RecoveryResult res;
  res.estimate.x = cvec::Zero(N);
  res.estimate.w = cvec::Zero(W);
  res.measurements_used = static_cast<int>(indices_of(plan).size());
  if (have_seam) res.measurements_used += static_cast<int>(indices_of(seam_plan).size());

  cvec x = cvec::Zero(N);
  cvec wp = cvec::Zero(W);
  std::vector<char> known(N, 0);  // indexed by k - lo, k in [lo, hi]
  auto set_x = [&](long long k, complex v) {
    x[wrap(k, N)] = v;
    known[k - lo] = 1;
  };
  auto is_known = [&](long long k) { return k >= lo && k <= hi && known[k - lo]; };
  complex eta = 1.0;
  bool closed = false;

  try {
    const auto classes =
        consistent_blind_triples(flip_classes(samples[0], W), flip_classes(samples[1], W),
                                 flip_classes(samples[2], W), a, options.relation_tol, options.separation_tol);
    res.candidate_classes = static_cast<int>(classes.size());
    res.steps_used = 1;
    if (classes.empty()) {
      res.message = "no flip triple satisfies the quadratic relations";
      return res;
    }
    res.relation_residual = classes.front().residual;
    for (const auto& c : classes) res.relation_residual = std::min(res.relation_residual, c.residual);
    if (classes.size() > 1) {
      res.status = RecoveryStatus::Ambiguous;
      res.message = std::to_string(classes.size()) + " relation-consistent flip classes";
      return res;
    }
    const auto& t = classes.front();
    const double scale =
        std::max({t.z0.cwiseAbs().maxCoeff(), t.za.cwiseAbs().maxCoeff(), t.zm.cwiseAbs().maxCoeff()});
    auto check_pivot = [&](complex v, const char* what) {
      if (std::abs(v) <= options.pivot_tol * scale) throw NonGenericInstance(std::string(what) + " vanishes");
    };

    // Ladder: w[n] and x[-n] alternate, each from the previous one.
    for (int n = 0; n < a; ++n) {
      wp[n] = 1.0;
      set_x(-n, t.z0[n]);
    }
    for (int n = a; n < W; ++n) {
      const complex piv = x[wrap(a - n, N)];
      check_pivot(piv, "ladder pivot x[alpha - n]");
      wp[n] = t.za[n] / piv;
      check_pivot(wp[n], "window entry");
      set_x(-n, t.z0[n] / wp[n]);
    }
    for (int l = 0; l < a; ++l) set_x(a - l, t.za[l]);
    for (int l = W - a; l < W; ++l) set_x(-a - l, t.zm[l] / wp[l]);

    for (std::size_t b = 3; b < plan.size(); ++b) {
      const long long shift = plan[b].j * a;
      const bool augment = have_seam && augment_last && b + 1 == plan.size();
      std::vector<IntensitySample> block = samples[b];
      if (augment) {
        const auto extra = block_samples(mags, seam_plan.front(), N);
        block.insert(block.end(), extra.begin(), extra.end());
      }
      std::map<int, complex> fixed;
      std::vector<int> unknown, wrapped;
      for (int s = 0; s < W; ++s) {
        const long long k = shift - s;
        if (k > hi && augment) {
          unknown.push_back(s);
          wrapped.push_back(s);
        } else if (k > hi || is_known(k)) {
          fixed[s] = x[wrap(k, N)] * wp[s];
        } else {
          unknown.push_back(s);
        }
      }
      if (unknown.empty()) continue;
      const cvec y = recover_with_known_entries(block, fixed, unknown, options.entry_options);
      complex num = 0.0;
      double den = 0.0;
      for (int s : unknown) {
        const long long k = shift - s;
        const complex v = y[s] / wp[s];
        if (k > hi) {
          num += std::conj(x[wrap(k, N)]) * v;
          den += std::norm(x[wrap(k, N)]);
        } else {
          set_x(k, v);
        }
      }
      if (!wrapped.empty()) {
        eta = num / den;
        closed = true;
      }
      ++res.steps_used;
    }

    if (have_seam && !augment_last) {
      // y = K + eta B with K from in-window entries and B from wrapped ones;
      // value - |K|^2 - |B|^2 = 2 Re(conj(K) B eta) for |eta| = 1.
      const auto& sb = seam_plan.front();
      const auto seam = block_samples(mags, sb, N);
      const long long shift = sb.j * a;
      rmat m(seam.size(), 2);
      rvec rhs(seam.size());
      for (std::size_t i = 0; i < seam.size(); ++i) {
        complex K = 0.0, B = 0.0, power = 1.0;
        for (int s = 0; s < W; ++s) {
          const long long k = shift - s;
          const complex term = x[wrap(k, N)] * wp[s] * power;
          (k > hi ? B : K) += term;
          power *= seam[i].point;
        }
        const complex g = std::conj(K) * B;
        m(i, 0) = 2.0 * g.real();
        m(i, 1) = -2.0 * g.imag();
        rhs[i] = seam[i].value - std::norm(K) - std::norm(B);
      }
      Eigen::JacobiSVD<rmat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
      const rvec& sv = svd.singularValues();
      if (!(sv[1] > 1e-10 * sv[0])) throw IllConditioned("seam closure system is rank deficient");
      const rvec sol = svd.solve(rhs);
      eta = complex(sol[0], sol[1]);
      closed = true;
    }
    if (closed && std::abs(std::abs(eta) - 1.0) > options.consistency_tol) {
      throw NonGenericInstance("seam closure phase is not unimodular (|eta| = " + std::to_string(std::abs(eta)) +
                               ")");
    }
    for (long long k = lo; k <= hi; ++k) {
      if (!is_known(k)) throw NonGenericInstance("recursion left signal entries undetermined");
    }
  } catch (const InvalidArgument&) {
    throw;
  } catch (const AmbiguousSolution& e) {
    res.status = RecoveryStatus::Ambiguous;
    res.message = e.what();
    return res;
  } catch (const Error& e) {
    res.status = have_seam ? RecoveryStatus::Failed : RecoveryStatus::Ambiguous;
    res.message = e.what();
    return res;
  }

  SignalPair pair{x, wp};
  if (closed) {
    pair = apply_ladder_phase(pair, params, -std::arg(eta) / R, lo);
    auto used = plan;
    used.insert(used.end(), seam_plan.begin(), seam_plan.end());
    polish_pair(params, pair, restrict_to(mags, used), true, options.polish_iterations);
  }
  res.estimate = canonicalize(pair, params, Mode::Blind).pair;

  if (!have_seam) {
    res.consistency_residual = consistency_residual(params, res.estimate, restrict_to(mags, plan));
    res.status = RecoveryStatus::Ambiguous;
    res.message = "seam measurements absent; a continuous ladder phase remains unresolved";
    return res;
  }
  res.consistency_residual = consistency_residual(params, res.estimate, mags);
  if (res.consistency_residual <= options.consistency_tol) {
    res.status = RecoveryStatus::Unique;
  } else {
    res.status = RecoveryStatus::Failed;
    res.message = "estimate does not reproduce the measurements";
  }
  return res;
}

PropositionReport verify_proposition_A(int W, int alpha, const std::optional<cvec>& w, int trials, Rng& rng) {
  if (W < 2 || W > 10 || alpha < 1 || alpha >= W) {
    throw InvalidArgument("verify_proposition_A needs 2 <= W <= 10 and 1 <= alpha < W");
  }
  if (w && w->size() != W) throw InvalidArgument("window length does not match W");
  constexpr double kRelTol = 1e-6, kSepTol = 1e-4;
  auto classes_of = [&](const cvec& y0, const cvec& ya, const cvec& win) {
    return consistent_known_pairs(distinct_up_to_phase(enumerate_flips(y0).candidates, kFlipDedupTol),
                                  distinct_up_to_phase(enumerate_flips(ya).candidates, kFlipDedupTol), win, alpha,
                                  kRelTol, kSepTol);
  };

  PropositionReport report;
  report.trials = trials;
  for (int t = 0; t < trials; ++t) {
    const cvec win = w ? *w : random_vector(W, Distribution::ComplexGaussian, rng);
    // xs[k + W - 1] = x[k] for k in [-W+1, alpha].
    const cvec xs = random_vector(W + alpha, Distribution::ComplexGaussian, rng);
    cvec y0(W), ya(W);
    for (int n = 0; n < W; ++n) {
      y0[n] = xs[-n + W - 1] * win[n];
      ya[n] = xs[alpha - n + W - 1] * win[n];
    }
    const auto classes = classes_of(y0, ya, win);
    report.max_classes = std::max(report.max_classes, static_cast<int>(classes.size()));
    if (classes.size() == 1) {
      const cvec truth = concat({&y0, &ya});
      const cvec found = concat({&classes[0].y0, &classes[0].ya});
      if (relative_phase_distance(found, truth) <= kSepTol) ++report.unique;
    }
  }
  report.fraction = trials > 0 ? static_cast<double>(report.unique) / trials : 1.0;

  const cvec win = w ? *w : random_vector(W, Distribution::ComplexGaussian, rng);
  for (AppendixKind kind : {AppendixKind::AFirst, AppendixKind::ASecond}) {
    const auto v = appendix_test_vectors(kind, W, alpha, win, rng);
    const auto classes = classes_of(v[0], v[1], win);
    const bool ok = classes.size() == 1;
    report.fixed_cases_pass = report.fixed_cases_pass && ok;
    report.notes.push_back(to_string(kind) + ": " + std::to_string(classes.size()) + " consistent class(es)");
  }
  return report;
}

PropositionReport verify_proposition_B(int W, int alpha, int trials, Rng& rng) {
  if (W < 3 || W > 8 || alpha < 1 || alpha >= W) {
    throw InvalidArgument("verify_proposition_B needs 3 <= W <= 8 and 1 <= alpha < W");
  }
  constexpr double kRelTol = 1e-6, kSepTol = 1e-4;
  auto flips = [](const cvec& y) { return distinct_up_to_phase(enumerate_flips(y).candidates, kFlipDedupTol); };
  auto classes_of = [&](const cvec& z0, const cvec& za, const cvec& zm) {
    return consistent_blind_triples(flips(z0), flips(za), flips(zm), alpha, kRelTol, kSepTol);
  };

  PropositionReport report;
  report.trials = trials;
  const int base = alpha + W - 1;  // xs[k + base] = x[k], k in [-(W-1+alpha), alpha]
  for (int t = 0; t < trials; ++t) {
    const cvec win = random_vector(W, Distribution::ComplexGaussian, rng);
    const cvec xs = random_vector(W + 2 * alpha, Distribution::ComplexGaussian, rng);
    cvec z0(W), za(W), zm(W);
    for (int n = 0; n < W; ++n) {
      z0[n] = xs[-n + base] * win[n];
      za[n] = xs[alpha - n + base] * win[n];
      zm[n] = xs[-alpha - n + base] * win[n];
    }
    const auto classes = classes_of(z0, za, zm);
    report.max_classes = std::max(report.max_classes, static_cast<int>(classes.size()));
    if (classes.size() == 1) {
      // Compare after the same two-phase normalization.
      const auto ref = consistent_blind_triples({z0}, {za}, {zm}, alpha, kRelTol, kSepTol);
      const auto& c = classes[0];
      const double d = std::sqrt((c.z0 - ref[0].z0).squaredNorm() + (c.za - ref[0].za).squaredNorm() +
                                 (c.zm - ref[0].zm).squaredNorm());
      const double n = std::sqrt(ref[0].z0.squaredNorm() + ref[0].za.squaredNorm() + ref[0].zm.squaredNorm());
      if (d <= kSepTol * n) ++report.unique;
    }
  }
  report.fraction = trials > 0 ? static_cast<double>(report.unique) / trials : 1.0;

  auto relation_residual = [&](const cvec& z0, const cvec& za, const cvec& zm) {
    double worst = 0.0;
    for (int l = 0; l + alpha < W; ++l) worst = std::max(worst, std::abs(zm[l] * za[l + alpha] - z0[l] * z0[l + alpha]));
    return worst;
  };

  if (W >= 2 * alpha + 2) {
    const auto v = appendix_test_vectors(AppendixKind::BTriple, W, alpha, std::nullopt, rng);
    if (relation_residual(v[0], v[1], v[2]) == 0.0) {
      const auto classes = classes_of(v[0], v[1], v[2]);
      const auto roots = roots_of(v[2]).roots;
      const bool inside = std::all_of(roots.begin(), roots.end(), [](complex b) { return std::abs(b) < 1.0; });
      report.fixed_cases_pass = report.fixed_cases_pass && classes.size() == 1 && inside;
      report.notes.push_back("B-triple: " + std::to_string(classes.size()) + " consistent class(es), z_-alpha roots " +
                             (inside ? "inside" : "NOT inside") + " the unit circle");
    } else {
      report.notes.push_back("B-triple: construction violates the relations for this (W, alpha); skipped");
    }
  } else {
    report.notes.push_back("B-triple: needs W >= 2 alpha + 2; skipped");
  }

  const auto v = appendix_test_vectors(AppendixKind::BAllOnes, W, alpha, std::nullopt, rng);
  const auto classes = classes_of(v[0], v[1], v[2]);
  const auto roots = roots_of(v[1]).roots;
  const bool outside = std::all_of(roots.begin(), roots.end(), [](complex b) { return std::abs(b) > 1.0; });
  report.fixed_cases_pass = report.fixed_cases_pass && classes.size() == 1 && outside;
  report.notes.push_back("B-allones: " + std::to_string(classes.size()) + " consistent class(es), z_alpha roots " +
                         (outside ? "outside" : "NOT outside") + " the unit circle");
  return report;
}

}  // namespace stftpr

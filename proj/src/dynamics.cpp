// Copyright 2026 The conedyn Authors
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

#include "conedyn/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "conedyn/errors.hpp"

namespace conedyn {

SemiflowSystem::SemiflowSystem(std::string name, int dim, RhsFn rhs, JacobianFn jacobian,
                               std::map<std::string, double> params)
    : name_(std::move(name)),
      dim_(dim),
      rhs_(std::move(rhs)),
      jac_(std::move(jacobian)),
      params_(std::move(params)) {
  if (dim_ < 1) throw InputError("system dimension must be positive");
}

Vec SemiflowSystem::rhs(const Vec& x) const {
  if (x.size() != dim_) throw InputError("rhs: state dimension mismatch");
  Vec dx(dim_);
  rhs_(x, dx);
  return dx;
}

Mat SemiflowSystem::jacobian(const Vec& x) const {
  if (x.size() != dim_) throw InputError("jacobian: state dimension mismatch");
  Mat j = Mat::Zero(dim_, dim_);
  jac_(x, j);
  return j;
}

const char* to_string(IntegratorMethod m) {
  return m == IntegratorMethod::Rk4Fixed ? "rk4_fixed" : "rk45_adaptive";
}

// ---------------------------------------------------------------------------
// Catalog

namespace {

double param_or(const std::map<std::string, double>& p, const std::string& key, double dflt) {
  auto it = p.find(key);
  return it == p.end() ? dflt : it->second;
}

void require_known(const std::map<std::string, double>& p,
                   std::initializer_list<const char*> keys, const std::string& system) {
  for (const auto& [k, v] : p) {
    bool ok = false;
    for (const char* allowed : keys) ok = ok || k == allowed;
    if (!ok) throw InputError(system + ": unknown parameter '" + k + "'");
    if (!std::isfinite(v)) throw InputError(system + ": parameter '" + k + "' is not finite");
  }
}

SemiflowSystem make_hopf3d(const std::map<std::string, double>& p) {
  require_known(p, {"a", "b"}, "hopf3d");
  const double a = param_or(p, "a", 1.0);
  const double b = param_or(p, "b", 1.0);
  if (!(a > 0.0) || !(b > 0.0)) throw InputError("hopf3d: a and b must be positive");
  auto rhs = [a, b](const Vec& x, Vec& dx) {
    const double r2 = x(0) * x(0) + x(1) * x(1);
    dx(0) = a * x(0) * (1.0 - r2) - x(1);
    dx(1) = a * x(1) * (1.0 - r2) + x(0);
    dx(2) = -b * x(2);
  };
  auto jac = [a, b](const Vec& x, Mat& j) {
    const double r2 = x(0) * x(0) + x(1) * x(1);
    j.setZero();
    j(0, 0) = a * (1.0 - r2) - 2.0 * a * x(0) * x(0);
    j(0, 1) = -2.0 * a * x(0) * x(1) - 1.0;
    j(1, 0) = -2.0 * a * x(0) * x(1) + 1.0;
    j(1, 1) = a * (1.0 - r2) - 2.0 * a * x(1) * x(1);
    j(2, 2) = -b;
  };
  return SemiflowSystem("hopf3d", 3, rhs, jac, {{"a", a}, {"b", b}});
}

// x1 decays at rate c; (x2, x3) rotate at speed omega while contracting at mu.
SemiflowSystem make_rot_contract(const std::map<std::string, double>& p) {
  require_known(p, {"omega", "mu", "c"}, "rot_contract");
  const double omega = param_or(p, "omega", 1.0);
  const double mu = param_or(p, "mu", 1.0);
  const double c = param_or(p, "c", 0.2);
  auto rhs = [=](const Vec& x, Vec& dx) {
    dx(0) = -c * x(0);
    dx(1) = -mu * x(1) - omega * x(2);
    dx(2) = omega * x(1) - mu * x(2);
  };
  auto jac = [=](const Vec&, Mat& j) {
    j.setZero();
    j(0, 0) = -c;
    j(1, 1) = -mu;
    j(1, 2) = -omega;
    j(2, 1) = omega;
    j(2, 2) = -mu;
  };
  return SemiflowSystem("rot_contract", 3, rhs, jac, {{"omega", omega}, {"mu", mu}, {"c", c}});
}

// Gradient flow of W(x1) + x2^2/2 + 3 x3^2/2 where W' has simple roots at
// -(2m-2)/2 .. (2m-2)/2 (integers); the even-indexed roots are the m minima.
SemiflowSystem make_grad_well(const std::map<std::string, double>& p) {
  require_known(p, {"m"}, "grad_well");
  const double mval = param_or(p, "m", 2.0);
  if (mval < 1.0 || mval > 6.0 || std::floor(mval) != mval) {
    throw InputError("grad_well: m must be an integer in [1, 6]");
  }
  const int m = static_cast<int>(mval);
  std::vector<double> roots;
  for (int j = 0; j <= 2 * m - 2; ++j) roots.push_back(static_cast<double>(j - (m - 1)));
  auto wprime = [roots](double x) {
    double prod = 1.0;
    for (double r : roots) prod *= (x - r);
    return prod;
  };
  auto wsecond = [roots](double x) {
    double s = 0.0;
    for (std::size_t i = 0; i < roots.size(); ++i) {
      double prod = 1.0;
      for (std::size_t j = 0; j < roots.size(); ++j) {
        if (j != i) prod *= (x - roots[j]);
      }
      s += prod;
    }
    return s;
  };
  auto rhs = [wprime](const Vec& x, Vec& dx) {
    dx(0) = -wprime(x(0));
    dx(1) = -x(1);
    dx(2) = -3.0 * x(2);
  };
  auto jac = [wsecond](const Vec& x, Mat& j) {
    j.setZero();
    j(0, 0) = -wsecond(x(0));
    j(1, 1) = -1.0;
    j(2, 2) = -3.0;
  };
  return SemiflowSystem("grad_well", 3, rhs, jac, {{"m", mval}});
}

// Cyclic feedback through g tanh with one negative link (x3 -> x1).
SemiflowSystem make_feedback3(const std::map<std::string, double>& p) {
  require_known(p, {"g"}, "feedback3");
  const double g = param_or(p, "g", 3.0);
  if (!(g > 0.0)) throw InputError("feedback3: gain g must be positive");
  auto rhs = [g](const Vec& x, Vec& dx) {
    dx(0) = -x(0) - g * std::tanh(x(2));
    dx(1) = -x(1) + g * std::tanh(x(0));
    dx(2) = -x(2) + g * std::tanh(x(1));
  };
  auto jac = [g](const Vec& x, Mat& j) {
    auto sech2 = [](double u) {
      const double c = std::cosh(u);
      return 1.0 / (c * c);
    };
    j.setZero();
    j(0, 0) = j(1, 1) = j(2, 2) = -1.0;
    j(0, 2) = -g * sech2(x(2));
    j(1, 0) = g * sech2(x(0));
    j(2, 1) = g * sech2(x(1));
  };
  return SemiflowSystem("feedback3", 3, rhs, jac, {{"g", g}});
}

}  // namespace

SemiflowSystem linear_system(const Mat& a) {
  if (a.rows() != a.cols() || a.rows() < 1) throw InputError("linear: A must be square");
  if (!a.allFinite()) throw InputError("linear: A has non-finite entries");
  auto rhs = [a](const Vec& x, Vec& dx) { dx.noalias() = a * x; };
  auto jac = [a](const Vec&, Mat& j) { j = a; };
  return SemiflowSystem("linear", static_cast<int>(a.rows()), rhs, jac);
}

SemiflowSystem build_system(const SystemSpec& spec) {
  if (spec.name == "linear") {
    if (!spec.matrix) throw InputError("linear: parameter A is required");
    if (!spec.params.empty()) throw InputError("linear: only the matrix parameter A is accepted");
    return linear_system(*spec.matrix);
  }
  if (spec.matrix) throw InputError(spec.name + ": does not take a matrix parameter");
  if (spec.name == "hopf3d") return make_hopf3d(spec.params);
  if (spec.name == "rot_contract") return make_rot_contract(spec.params);
  if (spec.name == "grad_well") return make_grad_well(spec.params);
  if (spec.name == "feedback3") return make_feedback3(spec.params);
  throw InputError("unknown system '" + spec.name + "'");
}

// ---------------------------------------------------------------------------
// Integration engine

namespace {

using OdeFn = std::function<void(const Vec& y, Vec& dy)>;

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

/// Advances an autonomous ODE across a list of output times. The state norm
/// used for divergence is taken over the first `watch` components.
class Engine {
 public:
  Engine(OdeFn f, Eigen::Index size, const IntegratorControl& ctl, Vec atol, Eigen::Index watch)
      : f_(std::move(f)), ctl_(ctl), atol_(std::move(atol)), watch_(watch) {
    for (auto* k : {&k1_, &k2_, &k3_, &k4_, &k5_, &k6_, &k7_, &ytmp_, &ynew_, &err_}) {
      k->resize(size);
    }
    if (ctl_.method == IntegratorMethod::Rk45Adaptive) {
      if (!(ctl_.rtol > 0.0) || !(ctl_.atol > 0.0)) throw InputError("integrator tolerances must be positive");
    } else if (!(ctl_.step > 0.0)) {
      throw InputError("rk4_fixed needs a positive step");
    }
  }

  /// Integrates y from t0 to t1 (t1 > t0). Invalidates the FSAL cache when
  /// `reset` is set (the caller changed y between calls).
  void advance(Vec& y, double t0, double t1, bool reset) {
    if (reset) fsal_valid_ = false;
    if (ctl_.method == IntegratorMethod::Rk4Fixed) {
      rk4(y, t0, t1);
    } else {
      dopri(y, t0, t1);
    }
  }

  const StepStats& stats() const { return stats_; }

 private:
  void eval(const Vec& y, Vec& dy) {
    f_(y, dy);
    ++stats_.rhs_evaluations;
  }

  void check_state(const Vec& y, double t) {
    if (!y.allFinite()) {
      std::ostringstream os;
      os << "state became non-finite near t=" << t;
      throw DivergenceError(os.str(), t);
    }
    if (y.head(watch_).norm() > ctl_.divergence_bound) {
      std::ostringstream os;
      os << "state norm exceeded " << ctl_.divergence_bound << " near t=" << t;
      throw DivergenceError(os.str(), t);
    }
  }

  void rk4(Vec& y, double t0, double t1) {
    const double span = t1 - t0;
    const auto nsub = static_cast<std::uint64_t>(std::max(1.0, std::ceil(span / ctl_.step - 1e-9)));
    const double h = span / static_cast<double>(nsub);
    double t = t0;
    for (std::uint64_t s = 0; s < nsub; ++s) {
      eval(y, k1_);
      ytmp_ = y + 0.5 * h * k1_;
      eval(ytmp_, k2_);
      ytmp_ = y + 0.5 * h * k2_;
      eval(ytmp_, k3_);
      ytmp_ = y + h * k3_;
      eval(ytmp_, k4_);
      y += (h / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
      t = (s + 1 == nsub) ? t1 : t + h;
      ++stats_.accepted;
      check_state(y, t);
    }
  }

  double error_norm(const Vec& y, const Vec& ynew) const {
    double s = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      const double sc = atol_(i) + ctl_.rtol * std::max(std::abs(y(i)), std::abs(ynew(i)));
      const double r = err_(i) / sc;
      s += r * r;
    }
    return std::sqrt(s / static_cast<double>(y.size()));
  }

  double initial_step(const Vec& y, double span) {
    eval(y, k1_);
    double d0 = 0.0;
    double d1 = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      const double sc = atol_(i) + ctl_.rtol * std::abs(y(i));
      d0 += (y(i) / sc) * (y(i) / sc);
      d1 += (k1_(i) / sc) * (k1_(i) / sc);
    }
    d0 = std::sqrt(d0 / y.size());
    d1 = std::sqrt(d1 / y.size());
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, span);
    ytmp_ = y + h0 * k1_;
    eval(ytmp_, k2_);
    double d2 = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      const double sc = atol_(i) + ctl_.rtol * std::abs(y(i));
      const double r = (k2_(i) - k1_(i)) / sc;
      d2 += r * r;
    }
    d2 = std::sqrt(d2 / y.size()) / h0;
    const double dm = std::max(d1, d2);
    const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
    fsal_valid_ = true;  // k1_ holds f(y)
    return std::min(100.0 * h0, h1);
  }

  void dopri(Vec& y, double t0, double t1) {
    double t = t0;
    if (!(h_ > 0.0)) h_ = initial_step(y, t1 - t0);
    if (!fsal_valid_) {
      eval(y, k1_);
      fsal_valid_ = true;
    }
    while (t < t1) {
      const double remaining = t1 - t;
      bool last = false;
      double h = h_;
      if (h >= remaining * (1.0 - 1e-12)) {
        h = remaining;
        last = true;
      }
      const double hmin = 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t));
      if (h < hmin) {
        std::ostringstream os;
        os << "step size underflow near t=" << t;
        throw IntegrationError(os.str(), t);
      }
      if (stats_.accepted + stats_.rejected >= ctl_.max_steps) {
        throw IntegrationError("step budget exhausted", t);
      }
      ytmp_ = y + h * a21 * k1_;
      eval(ytmp_, k2_);
      ytmp_ = y + h * (a31 * k1_ + a32 * k2_);
      eval(ytmp_, k3_);
      ytmp_ = y + h * (a41 * k1_ + a42 * k2_ + a43 * k3_);
      eval(ytmp_, k4_);
      ytmp_ = y + h * (a51 * k1_ + a52 * k2_ + a53 * k3_ + a54 * k4_);
      eval(ytmp_, k5_);
      ytmp_ = y + h * (a61 * k1_ + a62 * k2_ + a63 * k3_ + a64 * k4_ + a65 * k5_);
      eval(ytmp_, k6_);
      ynew_ = y + h * (b1 * k1_ + b3 * k3_ + b4 * k4_ + b5 * k5_ + b6 * k6_);
      eval(ynew_, k7_);
      err_ = h * (e1 * k1_ + e3 * k3_ + e4 * k4_ + e5 * k5_ + e6 * k6_ + e7 * k7_);
      const double en = error_norm(y, ynew_);
      if (!std::isfinite(en)) {
        ++stats_.rejected;
        h_ = 0.1 * h;
        continue;
      }
      if (en <= 1.0) {
        ++stats_.accepted;
        y.swap(ynew_);
        k1_.swap(k7_);
        t = last ? t1 : t + h;
        check_state(y, t);
        const double fac = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
        // Keep the controller's proposal when the step was clipped to land on
        // an output time.
        h_ = last ? std::max(h_, h * fac) : h * fac;
      } else {
        ++stats_.rejected;
        h_ = h * std::clamp(0.9 * std::pow(en, -0.2), 0.1, 1.0);
      }
    }
  }

  OdeFn f_;
  IntegratorControl ctl_;
  Vec atol_;
  Eigen::Index watch_;
  Vec k1_, k2_, k3_, k4_, k5_, k6_, k7_, ytmp_, ynew_, err_;
  double h_ = 0.0;
  bool fsal_valid_ = false;
  StepStats stats_;
};

void check_inputs(const SemiflowSystem& sys, const Vec& x0, double t_end) {
  if (x0.size() != sys.dim()) throw InputError("initial state dimension mismatch");
  if (!x0.allFinite()) throw InputError("initial state is not finite");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw InputError("t_end must be positive and finite");
}

}  // namespace

std::vector<double> uniform_grid(double t_end, double stride) {
  if (!(stride > 0.0)) throw InputError("output stride must be positive");
  std::vector<double> grid{0.0};
  const double count = std::ceil(t_end / stride - 1e-9);
  const auto m = static_cast<std::size_t>(std::max(1.0, count));
  for (std::size_t i = 1; i < m; ++i) grid.push_back(static_cast<double>(i) * stride);
  grid.push_back(t_end);
  return grid;
}

TrajectorySegment integrate(const SemiflowSystem& sys, const Vec& x0, double t_end,
                            const IntegratorControl& control) {
  check_inputs(sys, x0, t_end);
  const Eigen::Index n = sys.dim();
  Engine eng([&sys](const Vec& y, Vec& dy) { sys.rhs_into(y, dy); }, n, control,
             Vec::Constant(n, control.atol), n);
  TrajectorySegment seg;
  seg.times = uniform_grid(t_end, control.stride);
  seg.states.reserve(seg.times.size());
  Vec y = x0;
  seg.states.push_back(y);
  for (std::size_t i = 1; i < seg.times.size(); ++i) {
    eng.advance(y, seg.times[i - 1], seg.times[i], false);
    seg.states.push_back(y);
  }
  seg.stats = eng.stats();
  return seg;
}

TrajectorySegment integrate_with_variational(const SemiflowSystem& sys, const Vec& x0,
                                             double t_end, const IntegratorControl& control,
                                             double renorm_stride) {
  check_inputs(sys, x0, t_end);
  if (!(renorm_stride > 0.0)) throw InputError("renorm_stride must be positive");
  const Eigen::Index n = sys.dim();
  Mat jac = Mat::Zero(n, n);
  Vec fx(n);
  auto f = [&sys, &jac, &fx, n](const Vec& y, Vec& dy) {
    const Vec x = y.head(n);
    sys.rhs_into(x, fx);
    dy.head(n) = fx;
    sys.jacobian_into(x, jac);
    Eigen::Map<const Mat> m(y.data() + n, n, n);
    Eigen::Map<Mat> dm(dy.data() + n, n, n);
    dm.noalias() = jac * m;
  };
  // The matrix block gets absolute tolerance relative to unit entries.
  Vec atol = Vec::Constant(n + n * n, control.atol);
  Engine eng(f, n + n * n, control, atol, n);

  TrajectorySegment seg;
  seg.times = uniform_grid(t_end, renorm_stride);
  seg.states.reserve(seg.times.size());
  seg.factors.reserve(seg.times.size());
  Vec y(n + n * n);
  y.head(n) = x0;
  seg.states.push_back(x0);
  seg.factors.push_back(Mat::Identity(n, n));
  for (std::size_t i = 1; i < seg.times.size(); ++i) {
    Eigen::Map<Mat>(y.data() + n, n, n).setIdentity();
    eng.advance(y, seg.times[i - 1], seg.times[i], true);
    seg.states.push_back(y.head(n));
    seg.factors.push_back(Eigen::Map<const Mat>(y.data() + n, n, n));
  }
  seg.stats = eng.stats();
  return seg;
}

Vec flow_map(const SemiflowSystem& sys, const Vec& x0, double t, const IntegratorControl& control) {
  if (x0.size() != sys.dim()) throw InputError("initial state dimension mismatch");
  if (t == 0.0) return x0;
  if (!(t > 0.0)) throw InputError("flow_map needs t >= 0");
  IntegratorControl ctl = control;
  ctl.stride = t;
  return integrate(sys, x0, t, ctl).states.back();
}

Mat flow_derivative(const SemiflowSystem& sys, const Vec& x0, double t,
                    const IntegratorControl& control) {
  if (t == 0.0) return Mat::Identity(sys.dim(), sys.dim());
  return integrate_with_variational(sys, x0, t, control, t).factors.back();
}

PairTrajectory integrate_pair(const SemiflowSystem& sys, const Vec& x, const Vec& y,
                              const std::vector<double>& times, const IntegratorControl& control) {
  const Eigen::Index n = sys.dim();
  if (x.size() != n || y.size() != n) throw InputError("pair: state dimension mismatch");
  if (times.empty()) throw InputError("pair: empty output times");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < 0.0 || (i > 0 && !(times[i] > times[i - 1]))) {
      throw InputError("pair: output times must be nonnegative and increasing");
    }
  }
  Vec fx(n);
  Vec fy(n);
  Vec xy(n);
  auto f = [&sys, &fx, &fy, &xy, n](const Vec& s, Vec& ds) {
    const Vec xs = s.head(n);
    xy = xs + s.tail(n);
    sys.rhs_into(xs, fx);
    sys.rhs_into(xy, fy);
    ds.head(n) = fx;
    ds.tail(n) = fy - fx;
  };
  const Vec d0 = y - x;
  Vec atol(2 * n);
  atol.head(n).setConstant(control.atol);
  atol.tail(n).setConstant(std::max(1e-300, control.atol * d0.norm()));
  Engine eng(f, 2 * n, control, atol, n);
  PairTrajectory out;
  Vec s(2 * n);
  s.head(n) = x;
  s.tail(n) = d0;
  double t = 0.0;
  for (double target : times) {
    if (target > t) {
      eng.advance(s, t, target, false);
      t = target;
    }
    out.times.push_back(target);
    out.base.push_back(s.head(n));
    out.difference.push_back(s.tail(n));
  }
  out.stats = eng.stats();
  return out;
}

}  // namespace conedyn

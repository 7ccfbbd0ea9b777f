#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "fracdn/grid.hpp"

namespace fracdn {

/// Smooth scalar function gamma: R^n -> R from a small registry of families.
struct ScalarField {
  enum class Kind { kConstant, kGaussian, kSine, kBump };

  Kind kind = Kind::kConstant;
  double base = 1.0;
  double amplitude = 0.0;
  Point center{};
  /// Gaussian width or bump radius.
  double width = 1.0;
  /// Sine frequency and phase along the first axis.
  double frequency = 1.0;
  double phase = 0.0;

  static ScalarField constant(double value);
  /// base + amplitude * exp(-|x - center|^2 / width^2)
  static ScalarField gaussian(double base, double amplitude, Point center, double width);
  /// base + amplitude * sin(frequency * x_1 + phase)
  static ScalarField sine(double base, double amplitude, double frequency, double phase = 0.0);
  /// base + amplitude * exp(1 - 1/(1 - |x - center|^2/width^2)) inside the
  /// ball, base outside. Peak value base + amplitude at the centre.
  static ScalarField bump(double base, double amplitude, Point center, double width);

  /// Unused trailing coordinates of x and center are zero, so the same
  /// formula serves n = 1 and n = 2.
  double operator()(const Point& x) const;
  /// Guaranteed range [lo, hi] over R^n.
  double lower_bound() const;
  double upper_bound() const;
};

/// A one-variable factor of a rank-one kernel term a(x) b(y).
struct Factor {
  std::function<double(const Point&)> fn;
  double lo = 0.0;
  double hi = 0.0;

  static Factor of(const ScalarField& f);
  static Factor sqrt_of(const ScalarField& f);
};

class BoundCoefficient;

/// The kernel weight sigma(x, y) with lambda <= sigma <= 1/lambda.
///
/// Closed-form kernels are stored as c + sum_r a_r(x) b_r(y) (+ an optional
/// general two-point function), which covers the constant, separable
/// gamma^{1/2}(x) gamma^{1/2}(y) and sinusoidal families and their sums.
/// Tabulated kernels hold one value per ordered node pair.
class Coefficient {
 public:
  enum class Kind { kConstant, kSeparable, kSinusoidal, kClosedForm, kTabulated };

  static Coefficient constant(double c);
  static Coefficient separable(const ScalarField& gamma);
  /// base + amplitude * sin(frequency x_1) sin(frequency y_1)
  static Coefficient sinusoidal(double base, double amplitude, double frequency = 1.0);
  /// base + a(x) b(y)
  static Coefficient rank_one(Factor a, Factor b, double base = 0.0);
  static Coefficient general(std::function<double(const Point&, const Point&)> fn, double lo, double hi);
  static Coefficient tabulated(DomainPtr domain, std::vector<double> table);

  Kind kind() const noexcept { return kind_; }
  std::string kind_name() const;

  double evaluate(const Point& x, const Point& y) const;
  double diagonal(const Point& x) const { return evaluate(x, x); }

  double lambda() const noexcept { return lambda_; }
  /// Replaces the ellipticity constant; it must be in (0, 1] and compatible
  /// with the known bounds.
  Coefficient with_lambda(double lambda) const;
  double lower_bound() const noexcept { return lo_; }
  double upper_bound() const noexcept { return hi_; }

  Coefficient operator+(const Coefficient& other) const;
  Coefficient shifted(double c) const;

  /// Node-indexed evaluator. Checks ellipticity: a full scan for tabulated
  /// kernels, 10^4 sampled pairs plus the diagonal for closed-form ones.
  BoundCoefficient bind(const DomainPtr& domain) const;

 private:
  struct Term {
    Factor a;
    Factor b;
  };

  void finalize_bounds();

  Kind kind_ = Kind::kConstant;
  double constant_ = 0.0;
  std::vector<Term> terms_;
  std::function<double(const Point&, const Point&)> general_;
  double general_lo_ = 0.0;
  double general_hi_ = 0.0;
  DomainPtr table_domain_;
  std::shared_ptr<const std::vector<double>> table_;
  double lo_ = 0.0;
  double hi_ = 0.0;
  double lambda_ = 0.0;
  bool lambda_overridden_ = false;
};

/// sigma evaluated on node pairs of one domain.
class BoundCoefficient {
 public:
  double operator()(std::size_t i, std::size_t j) const {
    if (table_) return (*table_)[i * size_ + j];
    double v = constant_;
    for (std::size_t t = 0; t < terms_; ++t) v += left_[t * size_ + i] * right_[t * size_ + j];
    if (general_) v += general_(domain_->point(i), domain_->point(j));
    return v;
  }
  /// sigma(i, j) + sigma(j, i)
  double symmetric(std::size_t i, std::size_t j) const { return (*this)(i, j) + (*this)(j, i); }

  bool is_constant() const noexcept { return !table_ && terms_ == 0 && !general_; }
  double lambda() const noexcept { return lambda_; }
  const DomainPtr& domain() const noexcept { return domain_; }

 private:
  friend class Coefficient;

  DomainPtr domain_;
  std::size_t size_ = 0;
  double constant_ = 0.0;
  std::size_t terms_ = 0;
  std::vector<double> left_;
  std::vector<double> right_;
  std::function<double(const Point&, const Point&)> general_;
  std::shared_ptr<const std::vector<double>> table_;
  double lambda_ = 0.0;
};

}  // namespace fracdn

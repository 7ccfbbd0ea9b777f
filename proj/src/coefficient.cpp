#include "fracdn/coefficient.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "fracdn/errors.hpp"

namespace fracdn {

namespace {

double squared_distance(const Point& x, const Point& c) {
  return (x[0] - c[0]) * (x[0] - c[0]) + (x[1] - c[1]) * (x[1] - c[1]);
}

std::pair<double, double> product_range(double alo, double ahi, double blo, double bhi) {
  const double c[] = {alo * blo, alo * bhi, ahi * blo, ahi * bhi};
  return {*std::min_element(std::begin(c), std::end(c)), *std::max_element(std::begin(c), std::end(c))};
}

}  // namespace

ScalarField ScalarField::constant(double value) {
  ScalarField f;
  f.kind = Kind::kConstant;
  f.base = value;
  return f;
}

ScalarField ScalarField::gaussian(double base, double amplitude, Point center, double width) {
  if (!(width > 0.0)) throw ParameterError("gaussian width must be positive");
  ScalarField f;
  f.kind = Kind::kGaussian;
  f.base = base;
  f.amplitude = amplitude;
  f.center = center;
  f.width = width;
  return f;
}

ScalarField ScalarField::sine(double base, double amplitude, double frequency, double phase) {
  ScalarField f;
  f.kind = Kind::kSine;
  f.base = base;
  f.amplitude = amplitude;
  f.frequency = frequency;
  f.phase = phase;
  return f;
}

ScalarField ScalarField::bump(double base, double amplitude, Point center, double width) {
  if (!(width > 0.0)) throw ParameterError("bump radius must be positive");
  ScalarField f;
  f.kind = Kind::kBump;
  f.base = base;
  f.amplitude = amplitude;
  f.center = center;
  f.width = width;
  return f;
}

double ScalarField::operator()(const Point& x) const {
  switch (kind) {
    case Kind::kConstant:
      return base;
    case Kind::kGaussian:
      return base + amplitude * std::exp(-squared_distance(x, center) / (width * width));
    case Kind::kSine:
      return base + amplitude * std::sin(frequency * x[0] + phase);
    case Kind::kBump: {
      const double r2 = squared_distance(x, center) / (width * width);
      if (r2 >= 1.0) return base;
      return base + amplitude * std::exp(1.0 - 1.0 / (1.0 - r2));
    }
  }
  return base;
}

double ScalarField::lower_bound() const {
  switch (kind) {
    case Kind::kConstant:
      return base;
    case Kind::kSine:
      return base - std::abs(amplitude);
    default:
      return base + std::min(0.0, amplitude);
  }
}

double ScalarField::upper_bound() const {
  switch (kind) {
    case Kind::kConstant:
      return base;
    case Kind::kSine:
      return base + std::abs(amplitude);
    default:
      return base + std::max(0.0, amplitude);
  }
}

Factor Factor::of(const ScalarField& f) {
  return {[f](const Point& x) { return f(x); }, f.lower_bound(), f.upper_bound()};
}

Factor Factor::sqrt_of(const ScalarField& f) {
  if (!(f.lower_bound() > 0.0)) throw ParameterError("gamma must be bounded below by a positive constant");
  return {[f](const Point& x) { return std::sqrt(f(x)); }, std::sqrt(f.lower_bound()), std::sqrt(f.upper_bound())};
}

Coefficient Coefficient::constant(double c) {
  Coefficient out;
  out.kind_ = Kind::kConstant;
  out.constant_ = c;
  out.finalize_bounds();
  return out;
}

Coefficient Coefficient::separable(const ScalarField& gamma) {
  Coefficient out;
  out.kind_ = Kind::kSeparable;
  const Factor root = Factor::sqrt_of(gamma);
  out.terms_.push_back({root, root});
  out.finalize_bounds();
  return out;
}

Coefficient Coefficient::sinusoidal(double base, double amplitude, double frequency) {
  Coefficient out;
  out.kind_ = Kind::kSinusoidal;
  out.constant_ = base;
  Factor a{[amplitude, frequency](const Point& x) { return amplitude * std::sin(frequency * x[0]); },
           -std::abs(amplitude), std::abs(amplitude)};
  Factor b{[frequency](const Point& y) { return std::sin(frequency * y[0]); }, -1.0, 1.0};
  out.terms_.push_back({std::move(a), std::move(b)});
  out.finalize_bounds();
  return out;
}

Coefficient Coefficient::rank_one(Factor a, Factor b, double base) {
  Coefficient out;
  out.kind_ = Kind::kClosedForm;
  out.constant_ = base;
  out.terms_.push_back({std::move(a), std::move(b)});
  out.finalize_bounds();
  return out;
}

Coefficient Coefficient::general(std::function<double(const Point&, const Point&)> fn, double lo, double hi) {
  Coefficient out;
  out.kind_ = Kind::kClosedForm;
  out.general_ = std::move(fn);
  out.general_lo_ = lo;
  out.general_hi_ = hi;
  out.finalize_bounds();
  return out;
}

Coefficient Coefficient::tabulated(DomainPtr domain, std::vector<double> table) {
  const std::size_t m = domain->size();
  if (table.size() != m * m) throw ParameterError("tabulated coefficient must hold one value per ordered node pair");
  Coefficient out;
  out.kind_ = Kind::kTabulated;
  out.table_domain_ = std::move(domain);
  out.lo_ = *std::min_element(table.begin(), table.end());
  out.hi_ = *std::max_element(table.begin(), table.end());
  out.table_ = std::make_shared<const std::vector<double>>(std::move(table));
  if (!(out.lo_ > 0.0) || !std::isfinite(out.hi_)) throw ParameterError("tabulated coefficient is not uniformly elliptic");
  out.lambda_ = std::min(out.lo_, 1.0 / out.hi_);
  return out;
}

void Coefficient::finalize_bounds() {
  lo_ = constant_;
  hi_ = constant_;
  for (const Term& t : terms_) {
    const auto [lo, hi] = product_range(t.a.lo, t.a.hi, t.b.lo, t.b.hi);
    lo_ += lo;
    hi_ += hi;
  }
  if (general_) {
    lo_ += general_lo_;
    hi_ += general_hi_;
  }
  if (!(lo_ > 0.0) || !std::isfinite(hi_)) {
    std::ostringstream msg;
    msg << "coefficient is not uniformly elliptic: known range [" << lo_ << ", " << hi_ << "]";
    throw ParameterError(msg.str());
  }
  if (!lambda_overridden_) lambda_ = std::min(lo_, 1.0 / hi_);
}

std::string Coefficient::kind_name() const {
  switch (kind_) {
    case Kind::kConstant:
      return "constant";
    case Kind::kSeparable:
      return "separable";
    case Kind::kSinusoidal:
      return "sinusoidal";
    case Kind::kClosedForm:
      return "closed-form";
    case Kind::kTabulated:
      return "tabulated";
  }
  return "closed-form";
}

double Coefficient::evaluate(const Point& x, const Point& y) const {
  if (table_) {
    const std::size_t m = table_domain_->size();
    return (*table_)[table_domain_->nearest_node(x) * m + table_domain_->nearest_node(y)];
  }
  double v = constant_;
  for (const Term& t : terms_) v += t.a.fn(x) * t.b.fn(y);
  if (general_) v += general_(x, y);
  return v;
}

Coefficient Coefficient::with_lambda(double lambda) const {
  if (!(lambda > 0.0 && lambda <= 1.0)) throw ParameterError("lambda must lie in (0, 1]");
  Coefficient out = *this;
  out.lambda_ = lambda;
  out.lambda_overridden_ = true;
  return out;
}

Coefficient Coefficient::operator+(const Coefficient& other) const {
  if (table_ || other.table_) throw ParameterError("tabulated coefficients cannot be summed");
  if (general_ && other.general_) {
    Coefficient out = *this;
    auto f = general_;
    auto g = other.general_;
    out.general_ = [f, g](const Point& x, const Point& y) { return f(x, y) + g(x, y); };
    out.general_lo_ += other.general_lo_;
    out.general_hi_ += other.general_hi_;
    out.constant_ += other.constant_;
    out.terms_.insert(out.terms_.end(), other.terms_.begin(), other.terms_.end());
    out.kind_ = Kind::kClosedForm;
    out.lambda_overridden_ = false;
    out.finalize_bounds();
    return out;
  }
  Coefficient out = general_ ? *this : other;
  const Coefficient& rest = general_ ? other : *this;
  out.constant_ += rest.constant_;
  out.terms_.insert(out.terms_.end(), rest.terms_.begin(), rest.terms_.end());
  out.kind_ = (kind_ == Kind::kConstant && other.kind_ == Kind::kConstant) ? Kind::kConstant : Kind::kClosedForm;
  out.lambda_overridden_ = false;
  out.finalize_bounds();
  return out;
}

Coefficient Coefficient::shifted(double c) const {
  if (table_) {
    std::vector<double> t = *table_;
    for (double& v : t) v += c;
    return tabulated(table_domain_, std::move(t));
  }
  Coefficient out = *this;
  out.constant_ += c;
  if (kind_ == Kind::kSeparable) out.kind_ = Kind::kClosedForm;
  out.lambda_overridden_ = false;
  out.finalize_bounds();
  return out;
}

BoundCoefficient Coefficient::bind(const DomainPtr& domain) const {
  BoundCoefficient out;
  out.domain_ = domain;
  out.size_ = domain->size();
  out.lambda_ = lambda_;
  const std::size_t m = domain->size();
  if (table_) {
    if (table_domain_->size() != m || table_domain_->spacing() != domain->spacing() ||
        table_domain_->dim() != domain->dim()) {
      throw ParameterError("tabulated coefficient was built for a different grid");
    }
    out.table_ = table_;
    for (double v : *table_) {
      if (!(v >= lambda_ && v <= 1.0 / lambda_)) {
        std::ostringstream msg;
        msg << "tabulated coefficient value " << v << " violates lambda <= sigma <= 1/lambda with lambda=" << lambda_;
        throw ParameterError(msg.str());
      }
    }
    return out;
  }
  out.constant_ = constant_;
  out.terms_ = terms_.size();
  out.left_.resize(terms_.size() * m);
  out.right_.resize(terms_.size() * m);
  for (std::size_t t = 0; t < terms_.size(); ++t) {
    for (std::size_t i = 0; i < m; ++i) {
      const Point x = domain->point(i);
      out.left_[t * m + i] = terms_[t].a.fn(x);
      out.right_[t * m + i] = terms_[t].b.fn(x);
    }
  }
  out.general_ = general_;

  auto check = [&](std::size_t i, std::size_t j) {
    const double v = out(i, j);
    if (!(v >= lambda_ * (1.0 - 1e-12) && v <= (1.0 + 1e-12) / lambda_)) {
      std::ostringstream msg;
      msg << "coefficient value " << v << " at node pair (" << i << ", " << j
          << ") violates lambda <= sigma <= 1/lambda with lambda=" << lambda_;
      throw ParameterError(msg.str());
    }
  };
  std::mt19937_64 rng(0x5eed);
  std::uniform_int_distribution<std::size_t> pick(0, m - 1);
  for (int k = 0; k < 10000; ++k) check(pick(rng), pick(rng));
  for (std::size_t i = 0; i < m; ++i) check(i, i);
  return out;
}

}  // namespace fracdn

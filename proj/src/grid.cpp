#include "fracdn/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fracdn/errors.hpp"

namespace fracdn {

namespace {

double norm(const Point& a, int dim) {
  double acc = 0.0;
  for (int k = 0; k < dim; ++k) acc += a[k] * a[k];
  return std::sqrt(acc);
}

// Distance from a point to the closed box centred at c with half width hw.
double point_box_distance(const Point& x, const Point& c, double hw, int dim) {
  double acc = 0.0;
  for (int k = 0; k < dim; ++k) {
    const double gap = std::max(0.0, std::abs(x[k] - c[k]) - hw);
    acc += gap * gap;
  }
  return std::sqrt(acc);
}

}  // namespace

bool Region::contains(const Point& x, int dim) const {
  if (shape == Shape::kBox) {
    for (int k = 0; k < dim; ++k) {
      if (!(std::abs(x[k] - center[k]) < extent)) return false;
    }
    return true;
  }
  Point d{};
  for (int k = 0; k < dim; ++k) d[k] = x[k] - center[k];
  return norm(d, dim) < extent;
}

bool Region::contains_cube(const Point& x, double r, int dim) const {
  constexpr double slack = 1e-12;
  if (shape == Shape::kBox) {
    for (int k = 0; k < dim; ++k) {
      if (std::abs(x[k] - center[k]) + r > extent + slack) return false;
    }
    return true;
  }
  Point d{};
  for (int k = 0; k < dim; ++k) d[k] = std::abs(x[k] - center[k]) + r;
  return norm(d, dim) <= extent + slack;
}

double Region::reach(int dim) const {
  double out = 0.0;
  for (int k = 0; k < dim; ++k) out = std::max(out, std::abs(center[k]) + extent);
  return out;
}

double Region::diameter(int dim) const {
  return shape == Shape::kBox ? 2.0 * extent * std::sqrt(static_cast<double>(dim)) : 2.0 * extent;
}

double region_distance(const Region& a, const Region& b, int dim) {
  using S = Region::Shape;
  if (a.shape == S::kBall && b.shape == S::kBall) {
    Point d{};
    for (int k = 0; k < dim; ++k) d[k] = a.center[k] - b.center[k];
    return std::max(0.0, norm(d, dim) - a.extent - b.extent);
  }
  if (a.shape == S::kBox && b.shape == S::kBox) {
    double acc = 0.0;
    for (int k = 0; k < dim; ++k) {
      const double gap = std::max(0.0, std::abs(a.center[k] - b.center[k]) - a.extent - b.extent);
      acc += gap * gap;
    }
    return std::sqrt(acc);
  }
  const Region& ball = a.shape == S::kBall ? a : b;
  const Region& box = a.shape == S::kBall ? b : a;
  return std::max(0.0, point_box_distance(ball.center, box.center, box.extent, dim) - ball.extent);
}

Point GridDomain::point(std::size_t i) const {
  const auto idx = axis_index(i);
  Point x{};
  x[0] = axis_coordinate(idx[0]);
  if (dim_ == 2) x[1] = axis_coordinate(idx[1]);
  return x;
}

std::size_t GridDomain::nearest_node(const Point& x) const {
  const auto half = static_cast<long>(per_axis_ / 2);
  auto axis = [&](double c) {
    long k = std::lround(c / h_) + half;
    k = std::clamp<long>(k, 0, static_cast<long>(per_axis_) - 1);
    return static_cast<std::size_t>(k);
  };
  std::size_t i = axis(x[0]);
  if (dim_ == 2) i += per_axis_ * axis(x[1]);
  return i;
}

DomainPtr build_domain(int dim, double R, double h, const Region& omega, const Region& w) {
  if (dim != 1 && dim != 2) throw DomainError("dim must be 1 or 2");
  if (!(R > 0.0) || !std::isfinite(R)) throw DomainError("box half width R must be positive");
  if (!(h > 0.0) || !std::isfinite(h)) throw DomainError("grid spacing h must be positive");
  if (!(omega.extent > 0.0) || !(w.extent > 0.0)) throw DomainError("regions must have positive extent");

  const double distance = region_distance(omega, w, dim);
  if (!(distance > 0.0)) throw DomainError("Omega and W overlap or touch; dist(Omega, W) must be positive");

  auto grid = std::shared_ptr<GridDomain>(new GridDomain());
  const auto half = static_cast<std::size_t>(std::floor(R / h + 1e-9));
  if (half == 0) throw DomainError("grid spacing h exceeds the box half width R");
  grid->dim_ = dim;
  grid->h_ = h;
  grid->half_width_ = static_cast<double>(half) * h;
  grid->per_axis_ = 2 * half + 1;
  grid->size_ = dim == 1 ? grid->per_axis_ : grid->per_axis_ * grid->per_axis_;
  grid->cell_volume_ = dim == 1 ? h : h * h;

  for (const Region* r : {&omega, &w}) {
    if (r->reach(dim) >= grid->half_width_) {
      std::ostringstream msg;
      msg << "region leaves the computational box [-" << grid->half_width_ << ", " << grid->half_width_ << "]^" << dim;
      throw DomainError(msg.str());
    }
  }

  grid->omega_region_ = omega;
  grid->w_region_ = w;
  grid->distance_ = distance;
  grid->omega_mask_.assign(grid->size_, 0);
  grid->w_mask_.assign(grid->size_, 0);
  for (std::size_t i = 0; i < grid->size_; ++i) {
    const Point x = grid->point(i);
    if (omega.contains(x, dim)) {
      grid->omega_mask_[i] = 1;
      grid->omega_.push_back(i);
    }
    if (w.contains(x, dim)) {
      grid->w_mask_[i] = 1;
      grid->w_set_.push_back(i);
    }
  }
  if (grid->omega_.empty()) throw DomainError("Omega contains no grid node; refine h");
  if (grid->w_set_.empty()) throw DomainError("W contains no grid node; refine h");
  return grid;
}

double default_half_width(int dim, const Region& omega, const Region& w) {
  Point lo{}, hi{};
  for (int k = 0; k < dim; ++k) {
    lo[k] = std::min(omega.center[k] - omega.extent, w.center[k] - w.extent);
    hi[k] = std::max(omega.center[k] + omega.extent, w.center[k] + w.extent);
  }
  Point span{};
  for (int k = 0; k < dim; ++k) span[k] = hi[k] - lo[k];
  return 4.0 * norm(span, dim);
}

GridFunction::GridFunction(DomainPtr domain) : domain_(std::move(domain)) {
  values_.assign(domain_->size(), 0.0);
}

GridFunction::GridFunction(DomainPtr domain, std::vector<double> values)
    : domain_(std::move(domain)), values_(std::move(values)) {
  if (values_.size() != domain_->size()) throw DomainError("grid function size does not match its domain");
}

bool GridFunction::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

bool GridFunction::is_exterior_supported() const noexcept {
  return std::all_of(domain_->omega().begin(), domain_->omega().end(),
                     [&](std::size_t i) { return values_[i] == 0.0; });
}

bool GridFunction::is_test_space() const noexcept {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] != 0.0 && !domain_->in_omega(i)) return false;
  }
  return true;
}

std::vector<std::size_t> GridFunction::support() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] != 0.0) out.push_back(i);
  }
  return out;
}

double GridFunction::max_abs() const noexcept {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

GridFunction& GridFunction::operator+=(const GridFunction& other) {
  if (other.domain_ != domain_) throw DomainError("grid functions live on different domains");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& other) {
  if (other.domain_ != domain_) throw DomainError("grid functions live on different domains");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

GridFunction& GridFunction::operator*=(double a) {
  for (double& v : values_) v *= a;
  return *this;
}

GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
GridFunction operator*(double a, GridFunction f) { return f *= a; }

GridFunction zero_extension(const DomainPtr& domain, std::span<const double> values_on_w) {
  const auto& w = domain->w_set();
  if (values_on_w.size() != w.size()) throw DomainError("data size does not match the number of W nodes");
  GridFunction out(domain);
  for (std::size_t k = 0; k < w.size(); ++k) out[w[k]] = values_on_w[k];
  return out;
}

std::vector<double> restrict_to_w(const GridFunction& f) {
  std::vector<double> out;
  out.reserve(f.domain().w_set().size());
  for (std::size_t i : f.domain().w_set()) out.push_back(f[i]);
  return out;
}

GridFunction exterior_part(const GridFunction& f) {
  GridFunction out = f;
  for (std::size_t i : f.domain().omega()) out[i] = 0.0;
  return out;
}

}  // namespace fracdn

#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace fracdn {

/// A point of R^n, n <= 2. Unused trailing components are zero.
using Point = std::array<double, 2>;

/// Open box or open ball in R^n.
struct Region {
  enum class Shape { kBox, kBall };

  Shape shape = Shape::kBox;
  Point center{};
  /// Half side length for boxes, radius for balls.
  double extent = 0.0;

  static Region box(Point center, double half_width) { return {Shape::kBox, center, half_width}; }
  static Region ball(Point center, double radius) { return {Shape::kBall, center, radius}; }

  /// Strict (open-set) membership.
  bool contains(const Point& x, int dim) const;
  /// True when the open cube Q_r(x) lies inside the closure of this region.
  bool contains_cube(const Point& x, double r, int dim) const;
  /// Largest |x_k| over the closure, i.e. the half width of the smallest
  /// origin-centred box containing the region.
  double reach(int dim) const;
  double diameter(int dim) const;
};

/// Euclidean distance between two regions (0 when they overlap or touch).
double region_distance(const Region& a, const Region& b, int dim);

class GridDomain;
using DomainPtr = std::shared_ptr<const GridDomain>;

/// Uniform tensor grid on [-R, R]^n with the interior set Omega and the
/// exterior measurement set W. Immutable after construction.
class GridDomain {
 public:
  int dim() const noexcept { return dim_; }
  /// Effective half width: floor(R/h) * h.
  double half_width() const noexcept { return half_width_; }
  double spacing() const noexcept { return h_; }
  std::size_t nodes_per_axis() const noexcept { return per_axis_; }
  std::size_t size() const noexcept { return size_; }
  /// h^n, the cell volume.
  double cell_volume() const noexcept { return cell_volume_; }

  Point point(std::size_t i) const;
  /// Axis indices (ix, iy) of node i; iy = 0 in one dimension.
  std::array<std::size_t, 2> axis_index(std::size_t i) const noexcept {
    return {i % per_axis_, i / per_axis_};
  }
  double axis_coordinate(std::size_t k) const noexcept {
    return (static_cast<double>(k) - static_cast<double>(per_axis_ / 2)) * h_;
  }

  const Region& omega_region() const noexcept { return omega_region_; }
  const Region& w_region() const noexcept { return w_region_; }
  const std::vector<std::size_t>& omega() const noexcept { return omega_; }
  const std::vector<std::size_t>& w_set() const noexcept { return w_set_; }
  bool in_omega(std::size_t i) const noexcept { return omega_mask_[i] != 0; }
  bool in_w(std::size_t i) const noexcept { return w_mask_[i] != 0; }
  /// dist(Omega, W) of the regions, in length units.
  double omega_w_distance() const noexcept { return distance_; }
  /// Nearest node to a point (rounded per axis).
  std::size_t nearest_node(const Point& x) const;

 private:
  friend DomainPtr build_domain(int, double, double, const Region&, const Region&);
  GridDomain() = default;

  int dim_ = 1;
  double half_width_ = 0.0;
  double h_ = 0.0;
  double cell_volume_ = 0.0;
  std::size_t per_axis_ = 0;
  std::size_t size_ = 0;
  Region omega_region_;
  Region w_region_;
  std::vector<std::size_t> omega_;
  std::vector<std::size_t> w_set_;
  std::vector<unsigned char> omega_mask_;
  std::vector<unsigned char> w_mask_;
  double distance_ = 0.0;
};

/// Builds the grid for dim in {1, 2}. Throws DomainError when Omega and W
/// overlap or touch, leave the box, or contain no node.
DomainPtr build_domain(int dim, double R, double h, const Region& omega, const Region& w);

/// Default box half width: 4 * diam(Omega u W) measured from the origin.
double default_half_width(int dim, const Region& omega, const Region& w);

/// Real values on the nodes of a GridDomain.
class GridFunction {
 public:
  GridFunction() = default;
  explicit GridFunction(DomainPtr domain);
  GridFunction(DomainPtr domain, std::vector<double> values);

  const GridDomain& domain() const noexcept { return *domain_; }
  const DomainPtr& domain_ptr() const noexcept { return domain_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  double& operator[](std::size_t i) noexcept { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  bool all_finite() const noexcept;
  /// Zero on Omega.
  bool is_exterior_supported() const noexcept;
  /// Zero outside Omega (the discrete test space).
  bool is_test_space() const noexcept;
  /// Indices of nonzero nodes, ascending.
  std::vector<std::size_t> support() const;
  double max_abs() const noexcept;

  GridFunction& operator+=(const GridFunction& other);
  GridFunction& operator-=(const GridFunction& other);
  GridFunction& operator*=(double a);

 private:
  DomainPtr domain_;
  std::vector<double> values_;
};

GridFunction operator+(GridFunction a, const GridFunction& b);
GridFunction operator-(GridFunction a, const GridFunction& b);
GridFunction operator*(double a, GridFunction f);

/// Zero extension of data given on W (ordered as domain.w_set()).
GridFunction zero_extension(const DomainPtr& domain, std::span<const double> values_on_w);
/// Values of f on W, ordered as domain.w_set().
std::vector<double> restrict_to_w(const GridFunction& f);
/// f with its Omega values replaced by zero.
GridFunction exterior_part(const GridFunction& f);

}  // namespace fracdn

#pragma once

#include <array>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>

namespace nlslab {

inline constexpr std::size_t kMaxDim = 3;

/// Small fixed-capacity Euclidean vector for positions and velocities in
/// dimension 1..3.
class Vec {
public:
  Vec() = default;
  explicit Vec(std::size_t dim) : dim_(dim) {
    if (dim == 0 || dim > kMaxDim) throw std::invalid_argument("Vec: dimension must be 1..3");
  }
  Vec(std::initializer_list<double> values) : Vec(values.size()) {
    std::size_t i = 0;
    for (double v : values) c_[i++] = v;
  }

  std::size_t size() const noexcept { return dim_; }
  double& operator[](std::size_t i) noexcept { assert(i < dim_); return c_[i]; }
  double operator[](std::size_t i) const noexcept { assert(i < dim_); return c_[i]; }
  const double* begin() const noexcept { return c_.data(); }
  const double* end() const noexcept { return c_.data() + dim_; }

  double dot(const Vec& o) const noexcept {
    double s = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) s += c_[i] * o.c_[i];
    return s;
  }
  double norm2() const noexcept { return dot(*this); }
  double norm() const noexcept { return std::sqrt(norm2()); }
  bool finite() const noexcept {
    for (std::size_t i = 0; i < dim_; ++i)
      if (!std::isfinite(c_[i])) return false;
    return true;
  }

  Vec& operator+=(const Vec& o) noexcept {
    for (std::size_t i = 0; i < dim_; ++i) c_[i] += o.c_[i];
    return *this;
  }
  Vec& operator-=(const Vec& o) noexcept {
    for (std::size_t i = 0; i < dim_; ++i) c_[i] -= o.c_[i];
    return *this;
  }
  Vec& operator*=(double s) noexcept {
    for (std::size_t i = 0; i < dim_; ++i) c_[i] *= s;
    return *this;
  }

  friend Vec operator+(Vec a, const Vec& b) noexcept { return a += b; }
  friend Vec operator-(Vec a, const Vec& b) noexcept { return a -= b; }
  friend Vec operator*(Vec a, double s) noexcept { return a *= s; }
  friend Vec operator*(double s, Vec a) noexcept { return a *= s; }
  friend Vec operator-(Vec a) noexcept { return a *= -1.0; }
  friend bool operator==(const Vec& a, const Vec& b) noexcept {
    if (a.dim_ != b.dim_) return false;
    for (std::size_t i = 0; i < a.dim_; ++i)
      if (a.c_[i] != b.c_[i]) return false;
    return true;
  }

private:
  std::size_t dim_ = 1;
  std::array<double, kMaxDim> c_{};
};

}  // namespace nlslab

#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace saddlegkb {

// Dense vector of 64-bit floats. Values coming from outside the library
// (the vector/initializer_list constructors) are checked for NaN/Inf;
// arithmetic on existing vectors is not re-checked.
class Vector {
 public:
  Vector() = default;
  explicit Vector(std::size_t n, double fill = 0.0);
  explicit Vector(std::vector<double> values);
  Vector(std::initializer_list<double> values);

  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }

  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

  double* data() noexcept { return values_.data(); }
  const double* data() const noexcept { return values_.data(); }

  std::span<double> span() noexcept { return values_; }
  std::span<const double> span() const noexcept { return values_; }
  const std::vector<double>& values() const noexcept { return values_; }

  auto begin() noexcept { return values_.begin(); }
  auto end() noexcept { return values_.end(); }
  auto begin() const noexcept { return values_.begin(); }
  auto end() const noexcept { return values_.end(); }

  Vector& operator+=(const Vector& other);
  Vector& operator-=(const Vector& other);
  Vector& operator*=(double scale) noexcept;

  friend bool operator==(const Vector&, const Vector&) = default;

 private:
  std::vector<double> values_;
};

Vector operator+(Vector lhs, const Vector& rhs);
Vector operator-(Vector lhs, const Vector& rhs);
Vector operator*(double scale, Vector v);

double dot(const Vector& x, const Vector& y);
double norm2(const Vector& x);
double norm_inf(const Vector& x) noexcept;

// y += a * x
void axpy(double a, const Vector& x, Vector& y);

// Throws DimensionMismatch with `what` in the message when sizes differ.
void require_same_size(std::size_t expected, std::size_t actual, const char* what);

}  // namespace saddlegkb

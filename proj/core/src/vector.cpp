#include "saddlegkb/vector.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "saddlegkb/error.hpp"

namespace saddlegkb {

namespace {

void check_finite(const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw Error(ErrorCode::NonFinite, "vector entry " + std::to_string(i) + " is not finite");
    }
  }
}

}  // namespace

Vector::Vector(std::size_t n, double fill) : values_(n, fill) {
  check_finite({fill});
}

Vector::Vector(std::vector<double> values) : values_(std::move(values)) { check_finite(values_); }

Vector::Vector(std::initializer_list<double> values) : values_(values) { check_finite(values_); }

Vector& Vector::operator+=(const Vector& other) {
  require_same_size(size(), other.size(), "vector addition");
  for (std::size_t i = 0; i < size(); ++i) values_[i] += other.values_[i];
  return *this;
}

Vector& Vector::operator-=(const Vector& other) {
  require_same_size(size(), other.size(), "vector subtraction");
  for (std::size_t i = 0; i < size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

Vector& Vector::operator*=(double scale) noexcept {
  for (auto& v : values_) v *= scale;
  return *this;
}

Vector operator+(Vector lhs, const Vector& rhs) { return lhs += rhs; }
Vector operator-(Vector lhs, const Vector& rhs) { return lhs -= rhs; }
Vector operator*(double scale, Vector v) { return v *= scale; }

double dot(const Vector& x, const Vector& y) {
  require_same_size(x.size(), y.size(), "dot product");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double norm2(const Vector& x) {
  // scaled accumulation keeps tiny/huge entries from under/overflowing
  double scale = 0.0;
  double ssq = 1.0;
  for (double v : x) {
    if (v == 0.0) continue;
    const double a = std::abs(v);
    if (scale < a) {
      ssq = 1.0 + ssq * (scale / a) * (scale / a);
      scale = a;
    } else {
      ssq += (a / scale) * (a / scale);
    }
  }
  return scale * std::sqrt(ssq);
}

double norm_inf(const Vector& x) noexcept {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

void axpy(double a, const Vector& x, Vector& y) {
  require_same_size(y.size(), x.size(), "axpy");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

void require_same_size(std::size_t expected, std::size_t actual, const char* what) {
  if (expected != actual) {
    throw Error(ErrorCode::DimensionMismatch, std::string(what) + ": expected length " +
                                                  std::to_string(expected) + ", got " +
                                                  std::to_string(actual));
  }
}

}  // namespace saddlegkb

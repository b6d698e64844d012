#include "nlkg/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nlkg/errors.hpp"
#include "nlkg/fft.hpp"

namespace nlkg {

namespace {

void require_size(std::size_t got, const Grid& grid, const char* what) {
  if (got != grid.points()) {
    fail(ErrorKind::dimension, std::string(what) + ": expected " +
                                   std::to_string(grid.points()) +
                                   " samples, got " + std::to_string(got));
  }
}

void require_same_grid(const Field& a, const Field& b) {
  if (!(a.grid == b.grid)) fail(ErrorKind::dimension, "fields live on different grids");
}

}  // namespace

Grid::Grid(double length, std::size_t points) {
  if (!(length > 0.0) || !std::isfinite(length)) {
    fail(ErrorKind::domain, "grid length must be positive");
  }
  if (points < 4) fail(ErrorKind::domain, "grid needs at least 4 points");
  auto d = std::make_shared<Data>();
  d->length = length;
  d->points = points;
  d->spacing = length / static_cast<double>(points);
  d->wavenumbers.resize(points);
  d->symbol.resize(points);
  const double base = 2.0 * std::numbers::pi / length;
  const auto n = static_cast<long>(points);
  for (long i = 0; i < n; ++i) {
    const long k = (i <= n / 2 - (n % 2 == 0 ? 1 : 0)) ? i : i - n;
    d->wavenumbers[i] = base * static_cast<double>(k);
    d->symbol[i] = d->wavenumbers[i];
  }
  if (n % 2 == 0) d->symbol[n / 2] = 0.0;
  data_ = std::move(d);
}

RealVector Grid::coordinates() const {
  RealVector xs(points());
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = x(i);
  return xs;
}

double Grid::max_wavenumber() const noexcept {
  double k = 0.0;
  for (double s : data_->symbol) k = std::max(k, std::abs(s));
  return k;
}

double Grid::wrap(double x) const noexcept {
  const double l = data_->length;
  double y = std::fmod(x + 0.5 * l, l);
  if (y < 0.0) y += l;
  return y - 0.5 * l;
}

bool Grid::operator==(const Grid& other) const noexcept {
  return data_ == other.data_ ||
         (data_->points == other.data_->points && data_->length == other.data_->length);
}

Field::Field(Grid g)
    : grid(std::move(g)), u1(grid.points()), u2(grid.points()) {}

Field::Field(Grid g, ComplexVector first, ComplexVector second)
    : grid(std::move(g)), u1(std::move(first)), u2(std::move(second)) {
  require_size(u1.size(), grid, "Field u1");
  require_size(u2.size(), grid, "Field u2");
}

bool Field::all_finite() const noexcept {
  auto finite = [](const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  };
  return std::all_of(u1.begin(), u1.end(), finite) &&
         std::all_of(u2.begin(), u2.end(), finite);
}

Field& Field::operator+=(const Field& other) {
  require_same_grid(*this, other);
  for (std::size_t i = 0; i < u1.size(); ++i) {
    u1[i] += other.u1[i];
    u2[i] += other.u2[i];
  }
  return *this;
}

Field& Field::operator-=(const Field& other) {
  require_same_grid(*this, other);
  for (std::size_t i = 0; i < u1.size(); ++i) {
    u1[i] -= other.u1[i];
    u2[i] -= other.u2[i];
  }
  return *this;
}

Field& Field::operator*=(double s) {
  for (auto& z : u1) z *= s;
  for (auto& z : u2) z *= s;
  return *this;
}

Field& Field::operator*=(Complex s) {
  for (auto& z : u1) z *= s;
  for (auto& z : u2) z *= s;
  return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(double s, Field a) { return a *= s; }
Field operator*(Complex s, Field a) { return a *= s; }

void axpy(double s, const Field& b, Field& a) {
  require_same_grid(a, b);
  for (std::size_t i = 0; i < a.u1.size(); ++i) {
    a.u1[i] += s * b.u1[i];
    a.u2[i] += s * b.u2[i];
  }
}

Field times_i(Field w) { return w *= Complex(0.0, 1.0); }

Field apply_J(Field w) {
  std::swap(w.u1, w.u2);
  for (auto& z : w.u2) z = -z;
  return w;
}

ComplexVector spectral_derivative(std::span<const Complex> f, const Grid& grid) {
  require_size(f.size(), grid, "spectral_derivative");
  ComplexVector hat(f.size());
  fft::forward(f, hat);
  const auto symbol = grid.derivative_symbol();
  for (std::size_t i = 0; i < hat.size(); ++i) hat[i] *= Complex(0.0, symbol[i]);
  ComplexVector out(f.size());
  fft::inverse(hat, out);
  return out;
}

ComplexVector spectral_second_derivative(std::span<const Complex> f,
                                         const Grid& grid) {
  require_size(f.size(), grid, "spectral_second_derivative");
  ComplexVector hat(f.size());
  fft::forward(f, hat);
  const auto symbol = grid.derivative_symbol();
  for (std::size_t i = 0; i < hat.size(); ++i) hat[i] *= -symbol[i] * symbol[i];
  ComplexVector out(f.size());
  fft::inverse(hat, out);
  return out;
}

Field gradient(const Field& w) {
  return Field(w.grid, spectral_derivative(w.u1, w.grid),
               spectral_derivative(w.u2, w.grid));
}

ComplexVector translate(std::span<const Complex> f, double shift,
                        const Grid& grid) {
  require_size(f.size(), grid, "translate");
  ComplexVector hat(f.size());
  fft::forward(f, hat);
  const auto k = grid.wavenumbers();
  const std::size_t n = f.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (n % 2 == 0 && i == n / 2) {
      // The Nyquist mode cannot be shifted consistently for complex data;
      // keep its real-valued cosine part.
      hat[i] *= std::cos(k[i] * shift);
      continue;
    }
    hat[i] *= std::polar(1.0, -k[i] * shift);
  }
  ComplexVector out(n);
  fft::inverse(hat, out);
  return out;
}

Field translate(const Field& w, double shift) {
  return Field(w.grid, translate(w.u1, shift, w.grid),
               translate(w.u2, shift, w.grid));
}

double inner_product_L2(std::span<const Complex> f, std::span<const Complex> g,
                        const Grid& grid) {
  require_size(f.size(), grid, "inner_product_L2");
  require_size(g.size(), grid, "inner_product_L2");
  double sum = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    sum += f[i].real() * g[i].real() + f[i].imag() * g[i].imag();
  }
  return sum * grid.spacing();
}

double inner_product(const Field& a, const Field& b) {
  require_same_grid(a, b);
  return inner_product_L2(a.u1, b.u1, a.grid) + inner_product_L2(a.u2, b.u2, a.grid);
}

double norm_L2(std::span<const Complex> f, const Grid& grid) {
  return std::sqrt(inner_product_L2(f, f, grid));
}

double fourier_norm_L2(std::span<const Complex> f, const Grid& grid) {
  require_size(f.size(), grid, "fourier_norm_L2");
  ComplexVector hat(f.size());
  fft::forward(f, hat);
  double sum = 0.0;
  for (const auto& z : hat) sum += std::norm(z);
  // sum |f_i|^2 = (1/N) sum |hat_k|^2
  return std::sqrt(sum / static_cast<double>(f.size()) * grid.spacing());
}

double norm_L2L2(const Field& w) { return std::sqrt(inner_product(w, w)); }

double inner_product_H1L2(const Field& a, const Field& b) {
  require_same_grid(a, b);
  const auto da = spectral_derivative(a.u1, a.grid);
  const auto db = spectral_derivative(b.u1, b.grid);
  return inner_product(a, b) + inner_product_L2(da, db, a.grid);
}

double norm_H1L2(const Field& w) { return std::sqrt(inner_product_H1L2(w, w)); }

ComplexVector to_complex(std::span<const double> f) {
  return ComplexVector(f.begin(), f.end());
}

}  // namespace nlkg

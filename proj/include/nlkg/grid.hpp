#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace nlkg {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;
using RealVector = std::vector<double>;

/// Periodic uniform mesh on [-L/2, L/2) with its FFT wavenumbers.
///
/// Copies share the (immutable) wavenumber tables.
class Grid {
 public:
  Grid(double length, std::size_t points);

  double length() const noexcept { return data_->length; }
  std::size_t points() const noexcept { return data_->points; }
  double spacing() const noexcept { return data_->spacing; }

  /// Coordinate of sample i, x_i = -L/2 + i*h.
  double x(std::size_t i) const noexcept {
    return -0.5 * data_->length + static_cast<double>(i) * data_->spacing;
  }
  RealVector coordinates() const;

  /// 2*pi*k/L in FFT order; the Nyquist entry carries -pi*N/L.
  std::span<const double> wavenumbers() const noexcept {
    return data_->wavenumbers;
  }
  /// Symbol of d/dx divided by i: the wavenumbers with Nyquist set to zero,
  /// which keeps the discrete derivative skew-symmetric.
  std::span<const double> derivative_symbol() const noexcept {
    return data_->symbol;
  }
  /// Largest |k| carried by the derivative symbol.
  double max_wavenumber() const noexcept;

  /// Maps x onto the fundamental cell [-L/2, L/2).
  double wrap(double x) const noexcept;

  bool operator==(const Grid& other) const noexcept;

 private:
  struct Data {
    double length;
    std::size_t points;
    double spacing;
    RealVector wavenumbers;
    RealVector symbol;
  };
  std::shared_ptr<const Data> data_;
};

/// Hamiltonian state (u1, u2) = (u, u_t) sampled on a grid.
struct Field {
  Grid grid;
  ComplexVector u1;
  ComplexVector u2;

  explicit Field(Grid g);
  Field(Grid g, ComplexVector first, ComplexVector second);

  std::size_t size() const noexcept { return u1.size(); }
  bool all_finite() const noexcept;

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(double s);
  Field& operator*=(Complex s);
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double s, Field a);
Field operator*(Complex s, Field a);

/// a += s*b, componentwise.
void axpy(double s, const Field& b, Field& a);

/// i*W on both components.
Field times_i(Field w);
/// J W = (w2, -w1).
Field apply_J(Field w);

/// Fourier multiplier i*k applied to f (exact for band-limited data).
ComplexVector spectral_derivative(std::span<const Complex> f, const Grid& grid);
/// Multiplier -k^2 realized as derivative composed with itself.
ComplexVector spectral_second_derivative(std::span<const Complex> f,
                                         const Grid& grid);
/// Componentwise spatial derivative of both field components.
Field gradient(const Field& w);
/// f(x - a) by Fourier phase shift.
ComplexVector translate(std::span<const Complex> f, double shift,
                        const Grid& grid);
Field translate(const Field& w, double shift);

/// Real L2 pairing Re sum f conj(g) h.
double inner_product_L2(std::span<const Complex> f, std::span<const Complex> g,
                        const Grid& grid);
/// Pairing of fields: sum of the component pairings.
double inner_product(const Field& a, const Field& b);
double norm_L2(std::span<const Complex> f, const Grid& grid);
/// L2 norm evaluated on the Fourier coefficients (Parseval).
double fourier_norm_L2(std::span<const Complex> f, const Grid& grid);
double norm_L2L2(const Field& w);
/// sqrt(|u1|^2 + |du1|^2 + |u2|^2) with the spectral gradient.
double norm_H1L2(const Field& w);
/// H1xL2 inner product matching norm_H1L2.
double inner_product_H1L2(const Field& a, const Field& b);

ComplexVector to_complex(std::span<const double> f);

}  // namespace nlkg

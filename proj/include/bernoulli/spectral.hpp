#pragma once

// Periodic spectral tools on the uniform grid theta_i = 2*pi*i/N.

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

#include "bernoulli/errors.hpp"

namespace bernoulli::spectral {

using Vec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXd;

inline constexpr double two_pi = 2.0 * std::numbers::pi;

inline Vec nodes(int n) {
  Vec theta(n);
  for (int i = 0; i < n; ++i) theta[i] = two_pi * i / n;
  return theta;
}

/// Real trigonometric coefficients of periodic samples:
/// f(theta) ~ a0 + sum_{k=1}^{degree} a_k cos(k theta) + b_k sin(k theta).
/// Modes at or above N/2 are dropped.
struct TrigCoefficients {
  double a0 = 0.0;
  std::vector<double> cos;
  std::vector<double> sin;
};

inline TrigCoefficients trig_coefficients(const Vec& samples, int degree) {
  const int n = static_cast<int>(samples.size());
  if (2 * degree >= n) fail(ErrorKind::ResolutionTooLow, "trig_coefficients: degree must stay below N/2");
  Eigen::FFT<double> fft;
  std::vector<double> in(samples.data(), samples.data() + n);
  std::vector<std::complex<double>> out;
  fft.fwd(out, in);
  TrigCoefficients c;
  c.a0 = out[0].real() / n;
  c.cos.resize(degree);
  c.sin.resize(degree);
  for (int k = 1; k <= degree; ++k) {
    c.cos[k - 1] = 2.0 * out[k].real() / n;
    c.sin[k - 1] = -2.0 * out[k].imag() / n;
  }
  return c;
}

/// d/dtheta of periodic samples via FFT; the Nyquist mode is zeroed for even N.
inline Vec derivative(const Vec& samples) {
  const int n = static_cast<int>(samples.size());
  Eigen::FFT<double> fft;
  std::vector<double> in(samples.data(), samples.data() + n);
  std::vector<std::complex<double>> spec;
  fft.fwd(spec, in);
  const std::complex<double> I(0.0, 1.0);
  for (int k = 0; k < n; ++k) {
    int wave = k <= n / 2 ? k : k - n;
    if (n % 2 == 0 && k == n / 2) wave = 0;
    spec[k] *= I * static_cast<double>(wave);
  }
  std::vector<double> back;
  fft.inv(back, spec);
  return Eigen::Map<const Vec>(back.data(), n);
}

inline CVec derivative(const CVec& samples) {
  const Vec re = derivative(Vec(samples.real()));
  const Vec im = derivative(Vec(samples.imag()));
  CVec out(samples.size());
  out.real() = re;
  out.imag() = im;
  return out;
}

/// Dense matrix of the FFT derivative, built column by column.
inline Mat derivative_matrix(int n) {
  Mat d(n, n);
  Vec e = Vec::Zero(n);
  for (int j = 0; j < n; ++j) {
    e[j] = 1.0;
    d.col(j) = derivative(e);
    e[j] = 0.0;
  }
  return d;
}

}  // namespace bernoulli::spectral

#include "veselova/frequency.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

#include "veselova/errors.hpp"

namespace veselova {

namespace {

using cd = std::complex<double>;

std::vector<double> hann(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t k = 0; k < n; ++k) w[k] = 0.5 * (1.0 - std::cos(2.0 * M_PI * k / (n - 1)));
  return w;
}

double windowed_amplitude(const std::vector<double>& r, const std::vector<double>& w, double nu, double dt) {
  const cd step = std::polar(1.0, -nu * dt);
  cd z(1.0, 0.0);
  cd acc(0.0, 0.0);
  for (std::size_t k = 0; k < r.size(); ++k) {
    acc += (w[k] * r[k]) * z;
    z *= step;
    if ((k & 1023) == 1023) z /= std::abs(z);
  }
  return std::abs(acc);
}

double refine(const std::vector<double>& r, const std::vector<double>& w, double lo, double hi, double dt) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = windowed_amplitude(r, w, c, dt), fd = windowed_amplitude(r, w, d, dt);
  for (int it = 0; it < 80 && (b - a) > 1e-13 * std::max(1.0, b); ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = windowed_amplitude(r, w, c, dt);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = windowed_amplitude(r, w, d, dt);
    }
  }
  return 0.5 * (a + b);
}

// Weighted least-squares fit of cos/sin pairs at the given frequencies; returns amplitudes.
std::vector<double> fit(const std::vector<double>& x, const std::vector<double>& w, const std::vector<double>& freqs,
                        double dt, std::vector<double>& residual) {
  const std::size_t n = x.size();
  const Eigen::Index m = 2 * static_cast<Eigen::Index>(freqs.size());
  Eigen::MatrixXd ata = Eigen::MatrixXd::Zero(m, m);
  Eigen::VectorXd atb = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd row(m);
  std::vector<cd> steps(freqs.size()), z(freqs.size(), cd(1.0, 0.0));
  for (std::size_t j = 0; j < freqs.size(); ++j) steps[j] = std::polar(1.0, freqs[j] * dt);
  Eigen::MatrixXd basis(n, m);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < freqs.size(); ++j) {
      basis(k, 2 * j) = z[j].real();
      basis(k, 2 * j + 1) = z[j].imag();
      z[j] *= steps[j];
      if ((k & 1023) == 1023) z[j] /= std::abs(z[j]);
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    row = basis.row(k).transpose();
    ata.noalias() += w[k] * row * row.transpose();
    atb += (w[k] * x[k]) * row;
  }
  const Eigen::VectorXd c = ata.ldlt().solve(atb);
  residual.resize(n);
  const Eigen::VectorXd model = basis * c;
  for (std::size_t k = 0; k < n; ++k) residual[k] = x[k] - model[k];
  std::vector<double> amps(freqs.size());
  for (std::size_t j = 0; j < freqs.size(); ++j) amps[j] = std::hypot(c[2 * j], c[2 * j + 1]);
  return amps;
}

bool search(double e, const std::vector<double>& basis, std::size_t i, int bound, double thr,
            const std::vector<double>& reach, double& best) {
  if (i == basis.size()) {
    best = std::min(best, std::abs(e));
    return std::abs(e) <= thr;
  }
  if (std::abs(e) - reach[i] > best) return false;
  for (int k = -bound; k <= bound; ++k) {
    if (search(e - k * basis[i], basis, i + 1, bound, thr, reach, best)) return true;
  }
  return false;
}

}  // namespace

double combination_residual(double nu, const std::vector<double>& basis, int bound) {
  std::vector<double> reach(basis.size() + 1, 0.0);
  for (std::size_t i = basis.size(); i-- > 0;) reach[i] = reach[i + 1] + bound * std::abs(basis[i]);
  double best = std::abs(nu);
  search(nu, basis, 0, bound, -1.0, reach, best);
  return best;
}

std::vector<SpectralLine> extract_lines(const std::vector<double>& signal, double dt, const FrequencyOptions& opts) {
  const std::size_t n = signal.size();
  if (n < 256) throw InsufficientData("frequency analysis needs at least 256 samples");
  if (!(dt > 0.0)) throw InsufficientData("sampling step must be positive");
  double mean = 0.0;
  for (double v : signal) mean += v;
  mean /= static_cast<double>(n);
  std::vector<double> x(n);
  double scale = std::abs(mean);
  for (std::size_t k = 0; k < n; ++k) {
    x[k] = signal[k] - mean;
    scale = std::max(scale, std::abs(x[k]));
  }
  const std::vector<double> w = hann(n);
  std::size_t padded = 1;
  while (padded < 4 * n) padded <<= 1;
  const double bin = 2.0 * M_PI / (static_cast<double>(padded) * dt);
  const double resolution = 2.0 * M_PI / (static_cast<double>(n) * dt);
  const std::size_t min_bin = static_cast<std::size_t>(std::ceil(2.0 * resolution / bin));

  Eigen::FFT<double> fft;
  std::vector<double> buffer(padded, 0.0);
  std::vector<cd> spectrum;
  std::vector<double> freqs, residual = x, amps;
  double first_amp = 0.0;

  for (int line = 0; line < opts.max_lines; ++line) {
    std::fill(buffer.begin(), buffer.end(), 0.0);
    for (std::size_t k = 0; k < n; ++k) buffer[k] = w[k] * residual[k];
    fft.fwd(spectrum, buffer);
    std::size_t best = 0;
    double best_mag = 0.0;
    for (std::size_t m = std::max<std::size_t>(min_bin, 1); m + 1 < padded / 2; ++m) {
      const double mag = std::abs(spectrum[m]);
      if (mag > best_mag) {
        best_mag = mag;
        best = m;
      }
    }
    if (best == 0) break;
    const double a = std::abs(spectrum[best - 1]), b = best_mag, c = std::abs(spectrum[best + 1]);
    const double denom = a - 2.0 * b + c;
    const double delta = denom != 0.0 ? 0.5 * (a - c) / denom : 0.0;
    const double coarse = (static_cast<double>(best) + delta) * bin;
    const double nu = refine(residual, w, coarse - bin, coarse + bin, dt);
    const bool duplicate = std::any_of(freqs.begin(), freqs.end(), [&](double f) { return std::abs(f - nu) < 2.0 * resolution; });
    if (duplicate) break;
    freqs.push_back(nu);
    amps = fit(x, w, freqs, dt, residual);
    if (line == 0) first_amp = amps[0];
    if (first_amp <= 1e-12 * std::max(1.0, scale)) {
      freqs.clear();
      amps.clear();
      break;
    }
    if (amps.back() < opts.relative_floor * first_amp) {
      freqs.pop_back();
      amps = freqs.empty() ? std::vector<double>{} : fit(x, w, freqs, dt, residual);
      break;
    }
  }

  // One sweep re-refining each line against the signal with the other lines removed.
  if (freqs.size() > 1) {
    for (std::size_t j = 0; j < freqs.size(); ++j) {
      std::vector<double> others = freqs;
      others.erase(others.begin() + static_cast<long>(j));
      std::vector<double> partial;
      fit(x, w, others, dt, partial);
      freqs[j] = refine(partial, w, freqs[j] - 0.5 * resolution, freqs[j] + 0.5 * resolution, dt);
    }
    amps = fit(x, w, freqs, dt, residual);
  }

  std::vector<SpectralLine> out;
  double top = 0.0;
  for (double a : amps) top = std::max(top, a);
  for (std::size_t j = 0; j < freqs.size(); ++j) out.push_back({freqs[j], top > 0.0 ? amps[j] / top : 0.0});
  std::sort(out.begin(), out.end(), [](const SpectralLine& l, const SpectralLine& r) { return l.amplitude > r.amplitude; });
  return out;
}

FrequencySpectrum frequency_analysis(const std::vector<double>& signal, double dt, const FrequencyOptions& opts) {
  return frequency_analysis(std::vector<std::vector<double>>{signal}, dt, opts);
}

FrequencySpectrum frequency_analysis(const std::vector<std::vector<double>>& channels, double dt,
                                     const FrequencyOptions& opts) {
  if (channels.empty()) throw InsufficientData("no channels");
  std::vector<SpectralLine> all;
  for (const auto& ch : channels) {
    const auto lines = extract_lines(ch, dt, opts);
    all.insert(all.end(), lines.begin(), lines.end());
  }
  std::sort(all.begin(), all.end(), [](const SpectralLine& a, const SpectralLine& b) { return a.frequency < b.frequency; });
  std::vector<SpectralLine> merged;
  for (const auto& l : all) {
    if (!merged.empty() && std::abs(l.frequency - merged.back().frequency) <= 1e-5 * std::max(1.0, l.frequency)) {
      merged.back().amplitude = std::max(merged.back().amplitude, l.amplitude);
    } else {
      merged.push_back(l);
    }
  }
  std::stable_sort(merged.begin(), merged.end(),
                   [](const SpectralLine& a, const SpectralLine& b) { return a.amplitude > b.amplitude; });

  FrequencySpectrum out;
  out.lines = merged;
  out.tolerance = opts.tolerance;
  out.resonance_margin = INFINITY;
  for (const auto& l : merged) {
    if (static_cast<int>(out.basis.size()) >= opts.max_basis) break;
    double omega_min = l.frequency;
    for (double b : out.basis) omega_min = std::min(omega_min, b);
    const double thr = opts.tolerance * omega_min;
    const double res = combination_residual(l.frequency, out.basis, opts.max_coefficient);
    if (res > thr) {
      out.basis.push_back(l.frequency);
      if (!out.basis.empty() && out.basis.size() > 1) out.resonance_margin = std::min(out.resonance_margin, res / thr);
    }
  }
  out.base_count = static_cast<int>(out.basis.size());
  out.near_resonance = out.resonance_margin < opts.resonance_factor;
  if (!std::isfinite(out.resonance_margin)) out.resonance_margin = 0.0;
  return out;
}

}  // namespace veselova

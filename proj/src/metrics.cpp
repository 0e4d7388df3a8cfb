#include "scuw/metrics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "scuw/multirate.hpp"

namespace scuw {

double papr_db(std::span<const Complex> block, std::size_t oversample) {
  if (block.empty()) throw std::invalid_argument("papr: empty block");
  if (oversample == 0) throw std::invalid_argument("papr: oversampling factor must be >= 1");
  ComplexVector y;
  if (oversample == 1) {
    y.assign(block.begin(), block.end());
  } else {
    const std::size_t n = block.size();
    const ComplexVector spec = dft(block);
    ComplexVector padded(n * oversample);
    const std::size_t pos = (n + 1) / 2;  // bins 0..pos-1 are non-negative frequencies
    std::copy_n(spec.begin(), pos, padded.begin());
    std::copy(spec.begin() + static_cast<long>(pos), spec.end(),
              padded.end() - static_cast<long>(n - pos));
    y = idft(padded);
  }
  double peak = 0.0, mean = 0.0;
  for (const auto& v : y) {
    const double p = std::norm(v);
    peak = std::max(peak, p);
    mean += p;
  }
  mean /= static_cast<double>(y.size());
  if (mean == 0.0) throw std::invalid_argument("papr: all-zero block");
  return 10.0 * std::log10(peak / mean);
}

std::vector<double> block_papr_db(std::span<const Complex> samples, std::size_t block_len,
                                  std::size_t oversample, std::size_t offset) {
  if (block_len == 0) throw std::invalid_argument("papr: zero block length");
  if (samples.size() < offset + block_len) throw std::invalid_argument("papr: packet shorter than one block");
  std::vector<double> out;
  for (std::size_t s = offset; s + block_len <= samples.size(); s += block_len) {
    out.push_back(papr_db(samples.subspan(s, block_len), oversample));
  }
  return out;
}

CcdfCurve ccdf_from_values(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("ccdf: no values");
  std::sort(values.begin(), values.end());
  CcdfCurve c;
  const double n = static_cast<double>(values.size());
  c.thresholds_db.push_back(0.0);
  c.probabilities.push_back(
      static_cast<double>(values.end() - std::upper_bound(values.begin(), values.end(), 0.0)) / n);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i + 1 < values.size() && values[i + 1] == values[i]) continue;
    if (values[i] <= 0.0) continue;
    c.thresholds_db.push_back(values[i]);
    c.probabilities.push_back(static_cast<double>(values.size() - 1 - i) / n);
  }
  return c;
}

CcdfCurve papr_ccdf(const SamplePacket& packet, std::size_t block_len, std::size_t oversample) {
  if (packet.samples.empty()) throw std::invalid_argument("papr_ccdf: empty packet");
  return ccdf_from_values(block_papr_db(packet.samples, block_len, oversample));
}

double value_at_ccdf(std::vector<double> values, double probability) {
  if (values.empty()) throw std::invalid_argument("value_at_ccdf: no values");
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  // Number of values allowed strictly above the answer.
  const auto above = static_cast<std::size_t>(std::floor(probability * n));
  const std::size_t idx = above >= values.size() ? 0 : values.size() - 1 - above;
  return values[idx];
}

double ber(std::span<const std::uint8_t> tx, std::span<const std::uint8_t> rx) {
  if (tx.size() != rx.size()) throw std::invalid_argument("ber: bit sequences differ in length");
  if (tx.empty()) return 0.0;
  std::size_t errors = 0;
  for (std::size_t k = 0; k < tx.size(); ++k) errors += (tx[k] != 0) != (rx[k] != 0);
  return static_cast<double>(errors) / static_cast<double>(tx.size());
}

double waveform_mse_db(std::span<const Complex> x, std::span<const Complex> y, long offset) {
  if (offset >= 0) {
    const auto off = static_cast<std::size_t>(offset);
    x = off < x.size() ? x.subspan(off) : std::span<const Complex>{};
  } else {
    const auto off = static_cast<std::size_t>(-offset);
    y = off < y.size() ? y.subspan(off) : std::span<const Complex>{};
  }
  const std::size_t len = std::min(x.size(), y.size());
  if (len == 0) throw std::invalid_argument("waveform_mse_db: no overlap");
  double err = 0.0, ref = 0.0;
  for (std::size_t k = 0; k < len; ++k) {
    err += std::norm(x[k] - y[k]);
    ref += std::norm(x[k]);
  }
  if (err == 0.0) return kDbFloor;
  if (ref == 0.0) throw std::invalid_argument("waveform_mse_db: reference is zero");
  return 10.0 * std::log10(err / ref);
}

double evm_db(std::span<const Complex> reference, std::span<const Complex> estimate) {
  return waveform_mse_db(reference, estimate, 0);
}

double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

double ber_bound(Modulation m, double ebn0) {
  switch (m) {
    case Modulation::bpsk:
    case Modulation::qpsk:
      return q_function(std::sqrt(2.0 * ebn0));
    case Modulation::qam16: {
      const double x = std::sqrt(0.8 * ebn0);
      return 0.75 * q_function(x) + 0.5 * q_function(3.0 * x) - 0.25 * q_function(5.0 * x);
    }
  }
  return 0.5;
}

double ebn0_from_snr(double snr_db, std::size_t m, std::size_t n, Modulation mod) {
  const double bps = static_cast<double>(make_constellation(mod).bits_per_symbol());
  return std::pow(10.0, snr_db / 10.0) * static_cast<double>(n) / static_cast<double>(m) / bps;
}

double snr_for_bound(Modulation mod, double target_ber, std::size_t m, std::size_t n) {
  double lo = -20.0, hi = 60.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (ber_bound(mod, ebn0_from_snr(mid, m, n, mod)) > target_ber) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<double> SweepResult::snr_points_db() const {
  std::vector<double> v;
  for (const auto& p : points) v.push_back(p.snr_db);
  return v;
}

std::vector<double> SweepResult::ber_values() const {
  std::vector<double> v;
  for (const auto& p : points) v.push_back(p.ber);
  return v;
}

namespace {

struct TrialOutcome {
  std::uint64_t bits = 0;
  std::uint64_t errors = 0;
  double evm_db = 0.0;
};

// Runs trials [first, first + count) and stores them in order.
std::vector<TrialOutcome> run_chunk(const LinkSimulator& sim, double snr, std::uint64_t first,
                                    std::size_t count, std::size_t threads) {
  std::vector<TrialOutcome> out(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      const LinkResult r = sim.run(snr, first + i);
      out[i] = TrialOutcome{r.tx_bits.size(), r.bit_errors, r.evm_db};
    }
  };
  const std::size_t n_threads = std::min(threads, count);
  if (n_threads <= 1) {
    worker();
    return out;
  }
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return out;
}

}  // namespace

SweepResult ber_sweep(const LinkSimulator& sim, std::span<const double> snr_db,
                      const SweepOptions& opts) {
  if (opts.chunk_trials == 0) throw std::invalid_argument("ber_sweep: chunk_trials must be >= 1");
  std::size_t threads = opts.threads;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  SweepResult result;
  result.tx = sim.scenario().tx;
  result.rx = sim.scenario().rx;
  for (double snr : snr_db) {
    SweepPoint pt;
    pt.snr_db = snr;
    double evm_sum = 0.0;
    std::uint64_t trial = 0;
    for (;;) {
      const bool enough = pt.errors >= opts.min_errors && pt.bits >= opts.min_bits &&
                          pt.trials >= opts.min_trials;
      if (enough || pt.bits >= opts.max_bits) break;
      for (const auto& o : run_chunk(sim, snr, trial, opts.chunk_trials, threads)) {
        pt.bits += o.bits;
        pt.errors += o.errors;
        evm_sum += o.evm_db;
        ++pt.trials;
      }
      trial += opts.chunk_trials;
    }
    const double n = static_cast<double>(pt.bits);
    pt.ber = static_cast<double>(pt.errors) / n;
    pt.std_error = std::sqrt(std::max(pt.ber * (1.0 - pt.ber), 0.0) / n);
    // Wilson upper bound (z = 1.645); with zero errors it reduces to ~2.7/n.
    const double z = 1.645;
    const double centre = pt.ber + z * z / (2.0 * n);
    const double spread = z * std::sqrt(pt.ber * (1.0 - pt.ber) / n + z * z / (4.0 * n * n));
    pt.upper_95 = (centre + spread) / (1.0 + z * z / n);
    pt.evm_db = evm_sum / static_cast<double>(pt.trials);
    result.points.push_back(pt);
  }
  return result;
}

double snr_at_ber(const SweepResult& r, double target) {
  const auto& p = r.points;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    const double b0 = p[i].ber, b1 = p[i + 1].ber;
    if (b0 <= 0.0 || b1 <= 0.0) continue;
    if ((b0 - target) * (b1 - target) > 0.0) continue;
    if (b0 == b1) return p[i].snr_db;
    const double l0 = std::log10(b0), l1 = std::log10(b1), lt = std::log10(target);
    return p[i].snr_db + (lt - l0) / (l1 - l0) * (p[i + 1].snr_db - p[i].snr_db);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

std::vector<double> snr_range(double start, double step, double stop) {
  if (step == 0.0 || (stop - start) / step < 0.0) {
    throw std::invalid_argument("snr range: step does not move from start towards stop");
  }
  std::vector<double> v;
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  for (std::size_t i = 0; i < count; ++i) v.push_back(start + static_cast<double>(i) * step);
  return v;
}

}  // namespace scuw

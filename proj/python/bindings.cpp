#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "scuw/link.hpp"
#include "scuw/metrics.hpp"
#include "scuw/multirate.hpp"
#include "scuw/pulse.hpp"
#include "scuw/sc_waveform.hpp"
#include "scuw/uw_waveform.hpp"

namespace py = pybind11;
using scuw::Complex;
using scuw::ComplexVector;

namespace {

using CArray = py::array_t<Complex, py::array::c_style | py::array::forcecast>;

ComplexVector to_vec(const CArray& a) {
  if (a.ndim() != 1) throw std::invalid_argument("expected a 1-D array");
  return ComplexVector(a.data(), a.data() + a.size());
}

py::array_t<Complex> to_array(const ComplexVector& v) {
  py::array_t<Complex> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

std::vector<ComplexVector> to_blocks(const std::vector<CArray>& blocks) {
  std::vector<ComplexVector> out;
  for (const auto& b : blocks) out.push_back(to_vec(b));
  return out;
}

scuw::Constellation constellation(const std::string& mod) {
  return scuw::make_constellation(scuw::parse_modulation(mod));
}

}  // namespace

PYBIND11_MODULE(_scuw, m) {
  m.doc() = "SC-FDE and UW DFT-s-OFDM waveform algebra, links and metrics.";

  py::class_<scuw::Numerology>(m, "Numerology")
      .def(py::init<>())
      .def_readwrite("m", &scuw::Numerology::m)
      .def_readwrite("m_s", &scuw::Numerology::m_s)
      .def_readwrite("m_h", &scuw::Numerology::m_h)
      .def_readwrite("a", &scuw::Numerology::a)
      .def_readwrite("b", &scuw::Numerology::b)
      .def_readwrite("l_tx", &scuw::Numerology::l_tx)
      .def_readwrite("l_rx", &scuw::Numerology::l_rx)
      .def_readwrite("n_g", &scuw::Numerology::n_g)
      .def_readwrite("n_t", &scuw::Numerology::n_t)
      .def_property_readonly("n", &scuw::Numerology::n)
      .def_property_readonly("m_t", &scuw::Numerology::m_t)
      .def_property_readonly("m_d", &scuw::Numerology::m_d)
      .def_property_readonly("o_tx", &scuw::Numerology::o_tx)
      .def_property_readonly("o_rx", &scuw::Numerology::o_rx)
      .def_property_readonly("t_tx", &scuw::Numerology::t_tx);
  m.def("default_numerology", &scuw::default_numerology);

  m.def("dft", [](const CArray& x) { return to_array(scuw::dft(to_vec(x))); });
  m.def("idft", [](const CArray& x) { return to_array(scuw::idft(to_vec(x))); });
  m.def("upsample_time", [](const CArray& x, std::size_t a) { return to_array(scuw::upsample_time(to_vec(x), a)); });
  m.def("upsample_dft", [](const CArray& x, std::size_t a) { return to_array(scuw::upsample_dft(to_vec(x), a)); });
  m.def("downsample_time", [](const CArray& x, std::size_t b) { return to_array(scuw::downsample_time(to_vec(x), b)); });
  m.def("downsample_dft", [](const CArray& x, std::size_t b) { return to_array(scuw::downsample_dft(to_vec(x), b)); });
  m.def("linear_convolve", [](const CArray& x, const CArray& f) {
    return to_array(scuw::linear_convolve(to_vec(x), to_vec(f)));
  });
  m.def("circular_convolve", [](const CArray& x, const CArray& c) {
    return to_array(scuw::circular_convolve(to_vec(x), to_vec(c)));
  });
  m.def("circ_shift", [](const CArray& x, long tau) { return to_array(scuw::circ_shift(to_vec(x), tau)); });

  m.def("design_rrc", [](std::size_t taps, double rolloff, std::size_t sps) {
    return to_array(scuw::design_rrc(taps, rolloff, sps).taps);
  }, py::arg("num_taps"), py::arg("rolloff"), py::arg("samples_per_symbol"));
  m.def("design_fd_window", [](std::size_t mm, std::size_t n, std::size_t ext, double rolloff) {
    return scuw::design_fd_window(mm, n, ext, rolloff).gains;
  });
  m.def("golay_pair", [](std::size_t e, std::vector<int> d, std::vector<int> w) {
    auto [a, b] = scuw::golay_pair(e, d, w);
    return py::make_tuple(to_array(a), to_array(b));
  });
  m.def("map_bits", [](std::vector<std::uint8_t> bits, const std::string& mod) {
    return to_array(scuw::map_bits(bits, constellation(mod)));
  });
  m.def("demap_hard", [](const CArray& s, const std::string& mod) {
    return scuw::demap_hard(to_vec(s), constellation(mod));
  });

  m.def("aligned_tx_offset", &scuw::aligned_tx_offset);
  m.def("validate_numerology", [](const scuw::Numerology& n, std::size_t taps) {
    const auto r = scuw::validate_numerology(n, taps);
    py::dict d;
    d["ok"] = r.ok();
    d["guard_ok"] = r.guard_ok;
    d["isi_ok"] = r.isi_ok;
    d["guard_range"] = py::make_tuple(r.guard_min, r.guard_max);
    d["isi"] = py::make_tuple(r.isi_lhs, r.isi_rhs);
    d["failures"] = r.failures;
    d["notes"] = r.notes;
    return d;
  });
  m.def("sc_packet", [](const std::vector<CArray>& data, double rolloff, const scuw::Numerology& n) {
    const auto f = scuw::design_rrc(n.l_tx, rolloff, n.a);
    const auto uw = scuw::default_unique_word(n.m_s, n.m_h);
    return to_array(scuw::sc_packet(to_blocks(data), uw, n, f).samples);
  }, py::arg("data"), py::arg("rolloff"), py::arg("numerology") = scuw::default_numerology());
  m.def("sc_tx_eigenvalues", [](double rolloff, const scuw::Numerology& n) {
    return to_array(scuw::sc_tx_eigenvalues(scuw::design_rrc(n.l_tx, rolloff, n.a), n).gains);
  }, py::arg("rolloff"), py::arg("numerology") = scuw::default_numerology());
  m.def("sc_modulate_block_dft", [](const CArray& d, double rolloff, const scuw::Numerology& n) {
    const auto f = scuw::design_rrc(n.l_tx, rolloff, n.a);
    const auto uw = scuw::default_unique_word(n.m_s, n.m_h);
    return to_array(scuw::sc_modulate_block_dft(to_vec(d), uw, n, scuw::sc_tx_eigenvalues(f, n)));
  }, py::arg("data"), py::arg("rolloff"), py::arg("numerology") = scuw::default_numerology());
  m.def("uw_modulate_symbol", [](const CArray& d, const scuw::Numerology& n) {
    const auto uw = scuw::default_unique_word(n.m_s, n.m_h);
    return to_array(scuw::uw_modulate_symbol(to_vec(d), uw, scuw::centered_map(n)));
  }, py::arg("data"), py::arg("numerology") = scuw::default_numerology());
  m.def("uw_w_modulate", [](const CArray& d, std::size_t ext, double rolloff, const scuw::Numerology& n) {
    const auto uw = scuw::default_unique_word(n.m_s, n.m_h);
    const auto w = scuw::design_fd_window(n.m, n.n(), ext, rolloff);
    return to_array(scuw::uw_w_modulate(to_vec(d), uw, scuw::centered_map(n), w));
  }, py::arg("data"), py::arg("extension_bins"), py::arg("rolloff"),
     py::arg("numerology") = scuw::default_numerology());

  m.def("papr_db", [](const CArray& x, std::size_t os) { return scuw::papr_db(to_vec(x), os); },
        py::arg("block"), py::arg("oversample") = 4);
  m.def("waveform_mse_db", [](const CArray& x, const CArray& y, long offset) {
    return scuw::waveform_mse_db(to_vec(x), to_vec(y), offset);
  }, py::arg("x"), py::arg("y"), py::arg("offset") = 0);
  m.def("ber_bound", [](const std::string& mod, double ebn0) {
    return scuw::ber_bound(scuw::parse_modulation(mod), ebn0);
  });

  m.def("run_link", [](const std::string& tx, const std::string& rx, double snr_db, std::uint64_t seed,
                       std::uint64_t trial, const std::string& mod, std::size_t taps, double decay_db,
                       bool noiseless, std::size_t n_blocks) {
    scuw::LinkScenario s;
    s.tx = scuw::parse_tx_kind(tx);
    s.rx = scuw::parse_rx_kind(rx);
    s.snr_db = snr_db;
    s.seed = seed;
    s.trial = trial;
    s.modulation = scuw::parse_modulation(mod);
    s.noiseless = noiseless;
    s.n_blocks = n_blocks;
    if (taps > 0) {
      s.channel.kind = scuw::ChannelSpec::Kind::tdl;
      s.channel.memory = taps;
      s.channel.decay_db_per_tap = decay_db;
    }
    const scuw::LinkResult r = scuw::run_link(s);
    py::dict d;
    d["bits"] = r.tx_bits.size();
    d["bit_errors"] = r.bit_errors;
    d["evm_db"] = r.evm_db;
    d["noise_var"] = r.noise_var;
    d["signal_power"] = r.signal_power;
    d["channel"] = to_array(r.channel.taps);
    return d;
  }, py::arg("tx"), py::arg("rx"), py::arg("snr_db") = 20.0, py::arg("seed") = 1, py::arg("trial") = 0,
     py::arg("mod") = "qpsk", py::arg("taps") = 0, py::arg("decay_db") = 1.0,
     py::arg("noiseless") = false, py::arg("n_blocks") = 8);
}

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/stl.h>

#include <bit>
#include <stdexcept>

#include "fkclock/ansatz.hpp"
#include "fkclock/config.hpp"
#include "fkclock/dynamics.hpp"
#include "fkclock/fk_hamiltonian.hpp"
#include "fkclock/noise.hpp"
#include "fkclock/observables.hpp"
#include "fkclock/version.hpp"
#include "fkclock/vqe.hpp"

namespace py = pybind11;
using namespace fkclock;

namespace {

// States cross the boundary as complex numpy vectors of length 2^width.
StateVector to_state(const Eigen::VectorXcd& v) {
  const auto n = static_cast<std::uint64_t>(v.size());
  if (n == 0 || !std::has_single_bit(n)) throw std::invalid_argument("state length must be a power of two");
  return StateVector(static_cast<std::size_t>(std::countr_zero(n)), v);
}

PauliSum make_sum(std::size_t width, const std::vector<std::pair<std::string, cplx>>& terms) {
  PauliSum s(width);
  for (const auto& [labels, c] : terms) {
    if (labels.size() != width) throw std::invalid_argument("label '" + labels + "' does not match width");
    s.add_term(labels, c);
  }
  return s;
}

std::vector<std::pair<std::string, cplx>> sum_terms(const PauliSum& s) {
  std::vector<std::pair<std::string, cplx>> out;
  for (const auto& [str, c] : s.terms()) out.emplace_back(str.str(), c);
  return out;
}

}  // namespace

PYBIND11_MODULE(_fkclock, m) {
  m.doc() = "Variational Feynman-Kitaev clock simulation of the transverse-field Ising chain";
  m.attr("__version__") = kVersion;

  py::enum_<Encoding>(m, "Encoding").value("Gray", Encoding::Gray).value("Binary", Encoding::Binary);
  py::enum_<SplitForm>(m, "SplitForm")
      .value("SingleStep", SplitForm::SingleStep)
      .value("Alternating", SplitForm::Alternating);
  py::enum_<EnergyBackend>(m, "EnergyBackend")
      .value("MatrixFree", EnergyBackend::MatrixFree)
      .value("PauliExpansion", EnergyBackend::PauliExpansion);
  py::enum_<EchoPart>(m, "EchoPart").value("Real", EchoPart::Real).value("Imaginary", EchoPart::Imaginary);

  py::class_<TfimParams>(m, "TfimParams")
      .def(py::init([](std::size_t n, double j, double h) { return TfimParams{n, j, h}; }), py::arg("n_spins") = 2,
           py::arg("coupling") = 0.25, py::arg("field") = 1.0)
      .def_readwrite("n_spins", &TfimParams::n_spins)
      .def_readwrite("coupling", &TfimParams::coupling)
      .def_readwrite("field", &TfimParams::field);

  py::class_<ClockSpec>(m, "ClockSpec")
      .def(py::init([](std::size_t n, Encoding e) { return ClockSpec{n, e}; }), py::arg("n_aux") = 1,
           py::arg("encoding") = Encoding::Gray)
      .def_readwrite("n_aux", &ClockSpec::n_aux)
      .def_readwrite("encoding", &ClockSpec::encoding)
      .def_property_readonly("levels", &ClockSpec::levels);

  py::class_<FkConfig>(m, "FkConfig")
      .def(py::init<>())
      .def_readwrite("tfim", &FkConfig::tfim)
      .def_readwrite("clock", &FkConfig::clock)
      .def_readwrite("dt", &FkConfig::dt)
      .def_readwrite("form", &FkConfig::form)
      .def_readwrite("initial_state", &FkConfig::initial_state)
      .def_property_readonly("width", &FkConfig::width)
      .def_property_readonly("levels", &FkConfig::levels);

  py::class_<AnsatzSpec>(m, "AnsatzSpec")
      .def(py::init([](std::size_t ns, std::size_t na, std::size_t d) { return AnsatzSpec{ns, na, d}; }),
           py::arg("n_spins") = 2, py::arg("n_aux") = 1, py::arg("depth") = 1)
      .def_readwrite("n_spins", &AnsatzSpec::n_spins)
      .def_readwrite("n_aux", &AnsatzSpec::n_aux)
      .def_readwrite("depth", &AnsatzSpec::depth)
      .def_property_readonly("num_parameters", &AnsatzSpec::num_parameters)
      .def_property_readonly("num_cnots", &AnsatzSpec::num_cnots);

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def_readwrite("n_spins", &ExperimentConfig::n_spins)
      .def_readwrite("n_aux", &ExperimentConfig::n_aux)
      .def_readwrite("coupling", &ExperimentConfig::coupling)
      .def_readwrite("field", &ExperimentConfig::field)
      .def_readwrite("total_time", &ExperimentConfig::total_time)
      .def_readwrite("depth", &ExperimentConfig::depth)
      .def_readwrite("initial", &ExperimentConfig::initial)
      .def_readwrite("seed", &ExperimentConfig::seed)
      .def_readwrite("threads", &ExperimentConfig::threads)
      .def_property(
          "learning_rate", [](const ExperimentConfig& c) { return c.optimizer.learning_rate; },
          [](ExperimentConfig& c, double v) { c.optimizer.learning_rate = v; })
      .def_property(
          "max_iter", [](const ExperimentConfig& c) { return c.optimizer.max_iter; },
          [](ExperimentConfig& c, std::size_t v) { c.optimizer.max_iter = v; })
      .def_property(
          "stages", [](const ExperimentConfig& c) { return c.anneal.stages; },
          [](ExperimentConfig& c, std::size_t v) { c.anneal.stages = v; })
      .def_property_readonly("dt", &ExperimentConfig::dt)
      .def("fk_config", &ExperimentConfig::fk_config)
      .def("ansatz", &ExperimentConfig::ansatz)
      .def("validate", &ExperimentConfig::validate);

  py::class_<PauliSum>(m, "PauliSum")
      .def(py::init(&make_sum), py::arg("width"), py::arg("terms") = std::vector<std::pair<std::string, cplx>>{})
      .def_property_readonly("width", &PauliSum::width)
      .def("__len__", &PauliSum::size)
      .def("terms", &sum_terms)
      .def("add_term", py::overload_cast<std::string_view, cplx>(&PauliSum::add_term))
      .def("is_hermitian", &PauliSum::is_hermitian, py::arg("tol") = 1e-12)
      .def("adjoint", &PauliSum::adjoint)
      .def("to_dense", [](const PauliSum& s) { return to_dense(s); })
      .def("to_text", &PauliSum::to_text)
      .def_static("from_text", [](const std::string& t) { return PauliSum::from_text(t); })
      .def("__add__", [](const PauliSum& a, const PauliSum& b) { return a + b; })
      .def("__sub__", [](const PauliSum& a, const PauliSum& b) { return a - b; })
      .def("__mul__", [](const PauliSum& a, const PauliSum& b) { return a * b; })
      .def("__rmul__", [](const PauliSum& a, cplx f) { return f * a; })
      .def("group_commuting", [](const PauliSum& s) {
        std::vector<std::vector<std::string>> out;
        for (const auto& g : group_commuting(s)) {
          auto& labels = out.emplace_back();
          for (const auto& str : g) labels.push_back(str.str());
        }
        return out;
      });

  py::class_<FkHamiltonian>(m, "FkHamiltonian")
      .def(py::init<FkConfig>())
      .def_property_readonly("config", &FkHamiltonian::config)
      .def_property_readonly("width", &FkHamiltonian::width)
      .def(
          "energy",
          [](const FkHamiltonian& h, const Eigen::VectorXcd& psi, EnergyBackend b) { return h.energy(to_state(psi), b); },
          py::arg("psi"), py::arg("backend") = EnergyBackend::MatrixFree)
      .def("apply", [](const FkHamiltonian& h, const Eigen::VectorXcd& psi) { return h.apply(to_state(psi)).amplitudes(); })
      .def("dense", &FkHamiltonian::dense)
      .def("expanded", &FkHamiltonian::expanded)
      .def("count_strings", [](const FkHamiltonian& h) {
        const StringCountReport r = count_strings(h);
        py::dict d;
        d["clock_strings_c2"] = r.clock_strings_c2;
        d["clock_strings_c2_merged"] = r.clock_strings_c2_merged;
        d["c2_terms"] = r.c2_terms;
        d["c2_groups"] = r.c2_groups;
        d["c01_terms"] = r.c01_terms;
        d["c01_groups"] = r.c01_groups;
        d["total_terms"] = r.total_terms;
        d["total_groups"] = r.total_groups;
        return d;
      });

  m.def("tfim_hamiltonian", &tfim_hamiltonian);
  m.def("default_dt", &default_dt, py::arg("total_time"), py::arg("n_aux"));
  m.def("gap_formula", &gap_formula);
  m.def("history_state", [](const FkConfig& c) { return history_state(c).amplitudes(); });
  m.def("reference_states", [](const FkConfig& c) {
    std::vector<Eigen::VectorXcd> out;
    for (const auto& s : reference_states(c)) out.push_back(s.amplitudes());
    return out;
  });
  m.def("encode", &encode, py::arg("level"), py::arg("clock"));

  py::class_<Circuit>(m, "Circuit")
      .def_property_readonly("width", &Circuit::width)
      .def_property_readonly("num_parameters", &Circuit::num_parameters)
      .def("__len__", &Circuit::size)
      .def_property_readonly("cnot_count", [](const Circuit& c) { return tally_cnots(c); });
  m.def("build_vfk_circuit", &build_vfk_circuit, py::arg("ansatz"), py::arg("initial_state") = 0);
  m.def("circuit_state", [](const Circuit& c, const std::vector<double>& theta) {
    return circuit_state(c, theta).amplitudes();
  });
  m.def("energy_and_gradient", [](const Circuit& c, const FkHamiltonian& h, const std::vector<double>& theta) {
    const EnergyGradient eg = energy_and_gradient(c, h, theta);
    return py::make_tuple(eg.energy, eg.gradient);
  });

  py::class_<VqeRecord>(m, "VqeRecord")
      .def_readonly("theta", &VqeRecord::theta)
      .def_readonly("final_energy", &VqeRecord::final_energy)
      .def_readonly("e1", &VqeRecord::e1)
      .def_readonly("converged", &VqeRecord::converged)
      .def_readonly("depth", &VqeRecord::depth)
      .def_property_readonly("ratio", &VqeRecord::ratio)
      .def_property_readonly("energies", [](const VqeRecord& r) {
        std::vector<double> e;
        for (const auto& it : r.trace) e.push_back(it.energy);
        return e;
      });
  m.def(
      "run_vqe",
      [](const ExperimentConfig& cfg) {
        cfg.validate();
        const VqeProblem p = make_problem(cfg);
        py::gil_scoped_release release;
        return run_vqe(p);
      },
      py::arg("config"));

  m.def("infidelity_profile", [](const AnsatzSpec& a, const std::vector<double>& theta, const FkConfig& c) {
    return infidelity_profile(a, theta, c);
  });
  m.def(
      "cx_count",
      [](const std::string& kind, const FkConfig& c, std::size_t depth) {
        if (kind != "trotter" && kind != "ansatz") throw std::invalid_argument("kind must be 'trotter' or 'ansatz'");
        return cx_count(kind == "trotter" ? CxKind::Trotter : CxKind::Ansatz, c, depth);
      },
      py::arg("kind"), py::arg("config"), py::arg("depth") = 1);

  m.def("magnetization", [](const Eigen::VectorXcd& psi, std::size_t level, const ClockSpec& clock) {
    return magnetization(to_state(psi), level, clock);
  });
  m.def("loschmidt_direct", [](const Eigen::VectorXcd& psi, std::size_t i, std::size_t j, const ClockSpec& clock) {
    return loschmidt_direct(to_state(psi), i, j, clock);
  });

  py::class_<EchoEstimate>(m, "EchoEstimate")
      .def_readonly("shots", &EchoEstimate::shots)
      .def_readonly("n0", &EchoEstimate::n0)
      .def_readonly("n1", &EchoEstimate::n1)
      .def_readonly("weighted", &EchoEstimate::weighted)
      .def_readonly("weighted_stderr", &EchoEstimate::weighted_stderr)
      .def_readonly("conditional", &EchoEstimate::conditional)
      .def_readonly("conditional_stderr", &EchoEstimate::conditional_stderr)
      .def_property_readonly("acceptance", &EchoEstimate::acceptance);
  m.def(
      "loschmidt_hadamard",
      [](const Eigen::VectorXcd& psi, const ClockSpec& clock, std::size_t i, std::size_t j, EchoPart part,
         std::uint64_t shots, std::uint64_t seed) { return loschmidt_hadamard(to_state(psi), clock, i, j, part, shots, seed); },
      py::arg("psi"), py::arg("clock"), py::arg("level_i"), py::arg("level_j"), py::arg("part") = EchoPart::Real,
      py::arg("shots") = 100000, py::arg("seed") = 0);

  py::class_<EchoPoint>(m, "EchoPoint")
      .def_readonly("time", &EchoPoint::time)
      .def_readonly("loschmidt", &EchoPoint::loschmidt)
      .def_readonly("rate", &EchoPoint::rate);
  m.def("exact_echo_series", &exact_echo_series, py::arg("params"), py::arg("initial_state") = 0,
        py::arg("total_time") = 3.0, py::arg("points") = 33);
  m.def("rate_function", &rate_function);

  py::class_<NoiseParams>(m, "NoiseParams")
      .def(py::init([](double p1a, double p1d, double p2a, double p2d) { return NoiseParams{p1a, p1d, p2a, p2d}; }),
           py::arg("p1a") = 0.0, py::arg("p1d") = 0.0, py::arg("p2a") = 0.0, py::arg("p2d") = 0.0)
      .def_static("symmetric", &NoiseParams::symmetric)
      .def_readwrite("p1a", &NoiseParams::p1a)
      .def_readwrite("p1d", &NoiseParams::p1d)
      .def_readwrite("p2a", &NoiseParams::p2a)
      .def_readwrite("p2d", &NoiseParams::p2d);
  m.def("device_rates", [](const std::string& name) { return rates_from_device(device_preset(name)); });
  m.def("device_names", &device_preset_names);
  m.def("log_grid", &log_grid);

  py::class_<SweepRow>(m, "SweepRow")
      .def_readonly("p2", &SweepRow::p2)
      .def_readonly("f_vfk_mean", &SweepRow::f_vfk_mean)
      .def_readonly("f_vfk_std", &SweepRow::f_vfk_std)
      .def_readonly("f_ts_mean", &SweepRow::f_ts_mean)
      .def_readonly("f_ts_std", &SweepRow::f_ts_std)
      .def_readonly("ratio", &SweepRow::ratio);
  m.def(
      "noise_sweep",
      [](const FkConfig& c, const AnsatzSpec& a, const std::vector<double>& theta, double p1,
         const std::vector<double>& grid) {
        py::gil_scoped_release release;
        return noise_sweep(c, a, theta, p1, grid);
      },
      py::arg("config"), py::arg("ansatz"), py::arg("theta"), py::arg("p1"), py::arg("p2_grid"));
}

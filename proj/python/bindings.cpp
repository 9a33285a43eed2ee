#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <limits>
#include <string>

#include "squeezelab/analytic.hpp"
#include "squeezelab/cavity.hpp"
#include "squeezelab/error.hpp"
#include "squeezelab/montecarlo.hpp"
#include "squeezelab/photon.hpp"
#include "squeezelab/spin.hpp"

namespace py = pybind11;
using namespace squeezelab;

namespace {

py::dict moments_dict(const SpinMoments& m) {
  py::dict d;
  d["sx"] = m.sx;
  d["sy"] = m.sy;
  d["sz"] = m.sz;
  d["sy2"] = m.sy2;
  d["sz2"] = m.sz2;
  d["syz"] = m.syz;
  return d;
}

SpinMoments moments_from(const py::dict& d) {
  SpinMoments m;
  m.sx = d["sx"].cast<double>();
  m.sy = d.contains("sy") ? d["sy"].cast<double>() : 0.0;
  m.sz = d.contains("sz") ? d["sz"].cast<double>() : 0.0;
  m.sy2 = d["sy2"].cast<double>();
  m.sz2 = d["sz2"].cast<double>();
  m.syz = d["syz"].cast<double>();
  return m;
}

SchemeConfig scheme_from(const std::string& type, const py::kwargs& kw) {
  auto get = [&](const char* key, double fallback) {
    return kw.contains(key) ? kw[key].cast<double>() : fallback;
  };
  SchemeConfig s;
  if (type == "independent-coherent") {
    s = IndependentCoherent{get("n_mean_per_pulse", 0.0)};
  } else if (type == "spin-echo") {
    s = SpinEchoDelayLine{get("n_mean_per_pulse", 0.0), get("loss", 0.0)};
  } else if (type == "squeezed-input") {
    s = SqueezedInput{get("n_mean_per_pulse", 0.0), get("s", 0.0)};
  } else if (type == "fock-by-detection") {
    s = FockByDetection{kw.contains("n_target") ? kw["n_target"].cast<std::int64_t>() : 0,
                        get("q", 1.0)};
  } else if (type == "cavity-loss") {
    s = CavityLoss{get("n_mean_per_pulse", 0.0), get("loss", 0.0)};
  } else {
    throw InvalidArgument("unknown scheme type '" + type + "'");
  }
  validate(s);
  return s;
}

py::dict mc_dict(const McResult& r) {
  py::dict d;
  d["mean"] = moments_dict(r.mean);
  d["std_error"] = moments_dict(r.std_error);
  d["trials"] = r.trials;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Cavity-feedback spin squeezing: closed-form models, optimizers and Monte-Carlo oracles.";

  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<DegenerateMeanSpin>(m, "DegenerateMeanSpin", PyExc_ArithmeticError);
  py::register_exception<RegimeViolation>(m, "RegimeViolation", PyExc_ValueError);
  py::register_exception<ResourceLimit>(m, "ResourceLimit", PyExc_MemoryError);
  py::register_exception<OptimizationAmbiguity>(m, "OptimizationAmbiguity", PyExc_RuntimeError);

  m.attr("inf") = std::numeric_limits<double>::infinity();

  m.def("exact_moments", [](double spin, double rho, double mu) {
    return moments_dict(moments(apply_twist(css_state(spin), {rho, mu})));
  }, py::arg("spin"), py::arg("rho"), py::arg("mu"),
     "Moments of the CSS after exact one-axis twisting on the Dicke manifold.");
  m.def("kitagawa_moments", [](double spin, double rho, double mu) {
    return moments_dict(kitagawa_moments(spin, rho, mu));
  }, py::arg("spin"), py::arg("rho"), py::arg("mu"));
  m.def("gaussian_moments", [](double spin, double mu, double eps) {
    return moments_dict(gaussian_moments(spin, mu, eps));
  }, py::arg("spin"), py::arg("mu"), py::arg("eps"));
  m.def("scattering_moments", [](double spin, double mu, double eps, double eta) {
    return moments_dict(scattering_moments(spin, mu, {eps, eta}).moments);
  }, py::arg("spin"), py::arg("mu"), py::arg("eps") = 0.0,
     py::arg("eta") = kInfiniteCooperativity);

  m.def("squeezing_param", [](const py::dict& d, double spin) {
    return squeezing_param(moments_from(d), spin);
  }, py::arg("moments"), py::arg("spin"));
  m.def("min_transverse_variance", [](const py::dict& d) {
    return min_transverse_variance(moments_from(d));
  }, py::arg("moments"));
  m.def("to_db", &to_db, py::arg("xi"));

  m.def("xi", [](const std::string& model, double spin, double mu, double eps, double eta) {
    return evaluate_model(parse_model(model), spin, mu, {eps, eta}).xi;
  }, py::arg("model"), py::arg("spin"), py::arg("mu"), py::arg("eps") = 0.0,
     py::arg("eta") = kInfiniteCooperativity,
     "Squeezing parameter of 'kitagawa-exact', 'gaussian' or 'scattering' at shearing mu.");
  m.def("optimize_mu", [](const std::string& model, double spin, double eps, double eta) {
    const auto o = optimize_mu(parse_model(model), spin, {eps, eta});
    return py::make_tuple(o.mu, o.xi);
  }, py::arg("model"), py::arg("spin"), py::arg("eps") = 0.0,
     py::arg("eta") = kInfiniteCooperativity, "Returns (mu_opt, xi_opt).");
  m.def("asymptotic_optimum", [](double spin, const std::string& regime, double eta) {
    const auto o = asymptotic_optimum(spin, parse_regime(regime), eta);
    return py::make_tuple(o.mu, o.xi);
  }, py::arg("spin"), py::arg("regime"), py::arg("eta") = kInfiniteCooperativity);

  m.def("shot_noise_fraction", [](const std::string& type, const py::kwargs& kw) {
    return shot_noise_fraction(scheme_from(type, kw));
  }, py::arg("type"));
  m.def("optimal_squeezing_s", [](double n_total) {
    const auto o = optimal_squeezing_s(n_total);
    return py::make_tuple(o.s, o.nu);
  }, py::arg("n_total"), "Returns (s_opt, nu_min).");

  m.def("phase_lag", [](double kappa, double omega, double detuning, double mm) {
    CavityConfig c;
    c.kappa = kappa;
    c.omega = omega;
    return phase_lag(c, detuning, mm);
  }, py::arg("kappa"), py::arg("omega"), py::arg("detuning"), py::arg("m"));
  m.def("expand_per_photon_phase", [](double kappa, double omega, int m_max) {
    CavityConfig c;
    c.kappa = kappa;
    c.omega = omega;
    const auto e = expand_per_photon_phase(c, m_max);
    py::dict d;
    d["linear"] = e.linear;
    d["quadratic"] = e.quadratic;
    d["cubic_bound"] = e.cubic_bound;
    return d;
  }, py::arg("kappa"), py::arg("omega"), py::arg("m_max"));
  m.def("factorization_fidelity",
        [](double kappa, double omega, const std::string& shape, double center,
           double bandwidth, double mm, double mp) {
          CavityConfig c;
          c.kappa = kappa;
          c.omega = omega;
          return factorization_fidelity(c, {parse_pulse_shape(shape), center, bandwidth}, mm, mp)
              .fidelity;
        },
        py::arg("kappa"), py::arg("omega"), py::arg("shape"), py::arg("center_detuning"),
        py::arg("bandwidth"), py::arg("m"), py::arg("m_prime"));

  m.def("mc_moments",
        [](double spin, const std::string& type, double phi, std::int64_t trials,
           std::uint64_t seed, const py::kwargs& kw) {
          McConfig mc;
          mc.trials = trials;
          mc.master_seed = seed;
          const SchemeConfig s = scheme_from(type, kw);
          McResult r;
          {
            py::gil_scoped_release release;
            r = mc_moments(spin, s, phi, mc);
          }
          return mc_dict(r);
        },
        py::arg("spin"), py::arg("type"), py::arg("phi"), py::arg("trials") = 1000,
        py::arg("seed") = 0);
  m.def("trajectory_scattering_sim",
        [](int n_atoms, double mu, double eta, std::int64_t trials, int steps, std::uint64_t seed) {
          McConfig mc;
          mc.trials = trials;
          mc.steps = steps;
          mc.n_atoms = n_atoms;
          mc.master_seed = seed;
          TrajectoryResult r;
          {
            py::gil_scoped_release release;
            r = trajectory_scattering_sim(n_atoms, mu, eta, mc);
          }
          py::dict d = mc_dict(r.moments);
          d["r"] = r.r;
          d["contrast_estimate"] = r.contrast_estimate;
          d["contrast_std_error"] = r.contrast_std_error;
          return d;
        },
        py::arg("n_atoms"), py::arg("mu"), py::arg("eta"), py::arg("trials") = 1000,
        py::arg("steps") = 64, py::arg("seed") = 0);
}

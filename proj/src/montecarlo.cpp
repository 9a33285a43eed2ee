#include "squeezelab/montecarlo.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "squeezelab/analytic.hpp"
#include "squeezelab/error.hpp"
#include "squeezelab/parallel.hpp"

namespace squeezelab {

namespace {

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

constexpr double SpinMoments::*kFields[] = {
    &SpinMoments::sx,  &SpinMoments::sy,  &SpinMoments::sz,
    &SpinMoments::sy2, &SpinMoments::sz2, &SpinMoments::syz};

void require_trials(const McConfig& mc) {
  if (mc.trials < 1) throw InvalidArgument("Monte-Carlo needs trials >= 1");
}

}  // namespace

McResult summarize(std::span<const SpinMoments> samples) {
  if (samples.empty()) throw InvalidArgument("no samples to summarize");
  McResult out;
  out.trials = static_cast<std::int64_t>(samples.size());
  const double n = static_cast<double>(samples.size());
  for (const auto field : kFields) {
    CompensatedSum sum;
    for (const auto& s : samples) sum.add(s.*field);
    const double mean = sum.value() / n;
    CompensatedSum sq;
    for (const auto& s : samples) {
      const double d = s.*field - mean;
      sq.add(d * d);
    }
    out.mean.*field = mean;
    out.std_error.*field =
        samples.size() > 1 ? std::sqrt(sq.value() / (n - 1.0) / n) : 0.0;
  }
  return out;
}

McResult mc_moments(double spin, const SchemeConfig& scheme, double phi,
                    const McConfig& mc) {
  require_trials(mc);
  if (!(phi > 0.0) || !std::isfinite(phi)) throw InvalidArgument("phi must be > 0");
  validate(scheme);
  const SpinState initial = css_state(spin);
  const double mean_difference = expected_difference(scheme);

  std::vector<SpinMoments> samples(static_cast<std::size_t>(mc.trials));
  parallel_for(samples.size(), resolve_threads(mc.threads), [&](std::size_t i) {
    RngStream rng = substream(mc.master_seed, i);
    const PhotonPair pair = sample_photon_pair(scheme, rng);
    const double difference =
        static_cast<double>(pair.n2 - pair.n1) - mean_difference;
    const double total = static_cast<double>(pair.n1 + pair.n2);
    const TwistParams twist{difference * phi, total * phi * phi};
    samples[i] = moments(apply_twist(initial, twist));
  });
  return summarize(samples);
}

double effective_shot_noise_fraction(const SpinMoments& measured, double spin,
                                     double mu) {
  const int n = twice_spin(spin);
  if (n < 2) throw InvalidArgument("need 2S >= 2 to resolve rotation noise");
  if (!(mu > 0.0)) throw InvalidArgument("mu must be > 0");
  const double s = 0.5 * n;
  // <Sy^2> = (S/2)[1 + (S - 1/2)(1 - exp(-2 Var rho) cos^(2S-2)(mu))]
  const double spread = (2.0 * measured.sy2 / s - 1.0) / (s - 0.5);
  const double ratio = (1.0 - spread) / cos_power(mu, n - 2);
  if (!(ratio > 0.0)) throw NumericError("measured <Sy^2> beyond full wrapping", ratio);
  const double var_rho = -0.5 * std::log(ratio);
  return var_rho / mu;
}

ProductTrajectoryState::ProductTrajectoryState(int n_atoms) : n_atoms_(n_atoms) {
  if (n_atoms < 1) throw InvalidArgument("need at least one atom");
  if (n_atoms > kMaxTrajectoryAtoms) {
    throw ResourceLimit("trajectory simulation holds at most " +
                        std::to_string(kMaxTrajectoryAtoms) + " atoms, got " +
                        std::to_string(n_atoms));
  }
  const std::size_t dim = std::size_t{1} << n_atoms;
  amps_.assign(dim, complex(std::pow(0.5, 0.5 * n_atoms), 0.0));
}

double ProductTrajectoryState::norm_squared() const noexcept {
  double total = 0.0;
  for (const auto& c : amps_) total += std::norm(c);
  return total;
}

void ProductTrajectoryState::shear(double angle) {
  // one phase per Sz eigenvalue, Sz = popcount - N/2
  std::vector<complex> phase(n_atoms_ + 1);
  for (int k = 0; k <= n_atoms_; ++k) {
    const double sz = k - 0.5 * n_atoms_;
    phase[k] = std::polar(1.0, -angle * sz * sz);
  }
  for (std::size_t b = 0; b < amps_.size(); ++b) {
    amps_[b] *= phase[std::popcount(b)];
  }
}

void ProductTrajectoryState::flip(int atom) {
  const std::size_t bit = std::size_t{1} << atom;
  for (std::size_t b = 0; b < amps_.size(); ++b) {
    if ((b & bit) == 0) std::swap(amps_[b], amps_[b | bit]);
  }
}

void ProductTrajectoryState::dephase(int atom) {
  const std::size_t bit = std::size_t{1} << atom;
  for (std::size_t b = 0; b < amps_.size(); ++b) {
    if ((b & bit) == 0) amps_[b] = -amps_[b];
  }
}

SpinMoments ProductTrajectoryState::moments() const {
  const std::size_t dim = amps_.size();
  const double half_n = 0.5 * n_atoms_;
  std::vector<complex> sy_psi(dim, complex{});
  double sx = 0.0;
  for (int i = 0; i < n_atoms_; ++i) {
    const std::size_t bit = std::size_t{1} << i;
    for (std::size_t b = 0; b < dim; ++b) {
      const std::size_t partner = b ^ bit;
      sx += 0.5 * (std::conj(amps_[partner]) * amps_[b]).real();
      // sigma_y|up> = i|down>, sigma_y|down> = -i|up>
      const complex factor = (b & bit) ? complex(0.0, 0.5) : complex(0.0, -0.5);
      sy_psi[partner] += factor * amps_[b];
    }
  }
  SpinMoments m;
  m.sx = sx;
  double sy = 0.0;
  double sy2 = 0.0;
  double syz = 0.0;
  double sz = 0.0;
  double sz2 = 0.0;
  for (std::size_t b = 0; b < dim; ++b) {
    const double z = std::popcount(b) - half_n;
    const double p = std::norm(amps_[b]);
    sz += z * p;
    sz2 += z * z * p;
    sy += (std::conj(amps_[b]) * sy_psi[b]).real();
    sy2 += std::norm(sy_psi[b]);
    syz += 2.0 * (std::conj(sy_psi[b]) * (z * amps_[b])).real();
  }
  m.sy = sy;
  m.sz = sz;
  m.sy2 = sy2;
  m.sz2 = sz2;
  m.syz = syz;
  return m;
}

ProductTrajectoryState run_trajectory(int n_atoms, double mu, double r,
                                      int steps, RngStream& rng) {
  if (steps < 1) throw InvalidArgument("shear discretization needs steps >= 1");
  ProductTrajectoryState state(n_atoms);
  const double p_event = r / steps;
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  for (int k = 0; k < steps; ++k) {
    state.shear(0.5 * mu / steps);
    if (p_event == 0.0) continue;
    for (int atom = 0; atom < n_atoms; ++atom) {
      if (uniform(rng) < p_event) {  // Rayleigh
        if (uniform(rng) < 0.5) state.dephase(atom);
      }
      if (uniform(rng) < p_event) {  // Raman
        state.flip(atom);
        if (uniform(rng) < 0.5) state.dephase(atom);
      }
    }
  }
  return state;
}

TrajectoryResult trajectory_scattering_sim(int n_atoms, double mu, double eta,
                                           const McConfig& mc) {
  require_trials(mc);
  if (n_atoms > kMaxTrajectoryAtoms) {
    throw ResourceLimit("trajectory simulation holds at most " +
                        std::to_string(kMaxTrajectoryAtoms) + " atoms, got " +
                        std::to_string(n_atoms));
  }
  if (n_atoms < 1) throw InvalidArgument("need at least one atom");
  if (!(mu >= 0.0) || !std::isfinite(mu)) throw InvalidArgument("mu must be >= 0");
  if (!(eta > 0.0)) throw InvalidArgument("eta must be > 0");
  if (mc.steps < 1) throw InvalidArgument("shear discretization needs steps >= 1");

  TrajectoryResult out;
  out.r = std::isinf(eta) ? 0.0 : mu / (4.0 * eta);
  out.regime_warning = out.r > kMaxLeadingOrderR;

  std::vector<SpinMoments> samples(static_cast<std::size_t>(mc.trials));
  parallel_for(samples.size(), resolve_threads(mc.threads), [&](std::size_t i) {
    RngStream rng = substream(mc.master_seed, i);
    samples[i] = run_trajectory(n_atoms, mu, out.r, mc.steps, rng).moments();
  });
  out.moments = summarize(samples);

  const double s = 0.5 * n_atoms;
  const double vprime = mu * mu * (1.0 - 2.0 * out.r / 3.0) * 0.5 * s;
  const double reference = s * std::exp(-0.5 * vprime);
  out.contrast_estimate = out.moments.mean.sx / reference;
  out.contrast_std_error = out.moments.std_error.sx / reference;
  return out;
}

}  // namespace squeezelab
